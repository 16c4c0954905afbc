"""
Dominio Ω como malla uniforme enmascarada y su geometría exacta:
frontera, función distancia, inradio, cresta y trazado hacia la cresta
"""

from __future__ import annotations

import math
import logging
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
from scipy import ndimage, sparse
from scipy.interpolate import RegularGridInterpolator
from scipy.spatial import cKDTree

from config.settings import LabConstants
from numerics.fields import ScalarField, gradient, vertex_gradient
from utils.error_handler import DisconnectedDomainWarning, EmptyDomain, NoProgress

logger = logging.getLogger(__name__)

# Vecinos del stencil de 8 puntos (orden fijo)
NEIGHBOR_OFFSETS = np.array([
    [1, 0], [1, 1], [0, 1], [-1, 1],
    [-1, 0], [-1, -1], [0, -1], [1, -1],
], dtype=np.intp)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Domain:
    """Malla cartesiana enmascarada con caras de frontera y triangulación P1.

    Los vértices interiores se numeran en orden C sobre la malla (ix, iy);
    cada celda interior se parte en dos triángulos con la diagonal fija
    (v00, v11).
    """

    n: int
    shape: tuple[int, int]
    h: float
    origin: tuple[float, float]
    inside: np.ndarray
    index: np.ndarray
    grid_ix: np.ndarray
    grid_iy: np.ndarray
    cells: np.ndarray
    triangles: np.ndarray
    faces: np.ndarray
    face_normals: np.ndarray
    face_measure: np.ndarray
    face_refined: np.ndarray = field(repr=False)
    n_components: int = 1

    # Tamaños y medidas

    @property
    def n_vertices(self) -> int:
        return int(self.grid_ix.size)

    @property
    def n_triangles(self) -> int:
        return int(self.triangles.shape[0])

    @property
    def tri_area(self) -> float:
        return 0.5 * self.h * self.h

    @property
    def area(self) -> float:
        """|Ω| como suma de áreas de triángulos"""
        return float(self.n_triangles * self.tri_area)

    @property
    def perimeter(self) -> float:
        """ℋ^{n−1}(∂Ω) como suma de medidas de caras"""
        return float(self.face_measure.sum())

    @cached_property
    def coords(self) -> np.ndarray:
        xy = np.column_stack((
            self.origin[0] + self.h * self.grid_ix,
            self.origin[1] + self.h * self.grid_iy,
        ))
        return _frozen(xy)

    @cached_property
    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordenadas de la malla completa por eje"""
        xs = self.origin[0] + self.h * np.arange(self.shape[0])
        ys = self.origin[1] + self.h * np.arange(self.shape[1])
        return xs, ys

    @cached_property
    def is_boundary(self) -> np.ndarray:
        flags = np.zeros(self.n_vertices, dtype=bool)
        flags[self.faces.ravel()] = True
        return _frozen(flags)

    @cached_property
    def boundary_vertices(self) -> np.ndarray:
        return _frozen(np.flatnonzero(self.is_boundary))

    @cached_property
    def interior_vertices(self) -> np.ndarray:
        return _frozen(np.flatnonzero(~self.is_boundary))

    # Frontera discreta: vértices de frontera + puntos medios de caras

    @cached_property
    def boundary_refined(self) -> np.ndarray:
        """Puntos de frontera en la malla refinada h/2 (índices enteros)"""
        bv = self.boundary_vertices
        vertex_pts = np.column_stack((2 * self.grid_ix[bv], 2 * self.grid_iy[bv]))
        return _frozen(np.vstack((vertex_pts, self.face_refined)).astype(np.intp))

    @cached_property
    def boundary_points(self) -> np.ndarray:
        pts = np.asarray(self.origin) + 0.5 * self.h * self.boundary_refined
        return _frozen(pts)

    @cached_property
    def boundary_tree(self) -> cKDTree:
        return cKDTree(self.boundary_points)

    # Operadores discretos (matrices dispersas)

    @cached_property
    def grad_operators(self) -> tuple[sparse.csr_matrix, sparse.csr_matrix]:
        """(Gx, Gy): gradiente exacto del interpolante P1 por triángulo"""
        tri = self.triangles
        n_tri = tri.shape[0]
        rows_a = np.arange(0, n_tri, 2)
        rows_b = np.arange(1, n_tri, 2)
        a, b = tri[0::2], tri[1::2]
        inv_h = 1.0 / self.h

        # A = (v00, v10, v11): gx = (w10 - w00)/h, gy = (w11 - w10)/h
        # B = (v00, v11, v01): gx = (w11 - w01)/h, gy = (w01 - w00)/h
        gx_rows = np.concatenate((rows_a, rows_a, rows_b, rows_b))
        gx_cols = np.concatenate((a[:, 1], a[:, 0], b[:, 1], b[:, 2]))
        gy_rows = gx_rows
        gy_cols = np.concatenate((a[:, 2], a[:, 1], b[:, 2], b[:, 0]))
        signs = np.concatenate((
            np.ones(rows_a.size), -np.ones(rows_a.size),
            np.ones(rows_b.size), -np.ones(rows_b.size),
        )) * inv_h

        shape = (n_tri, self.n_vertices)
        gx = sparse.csr_matrix((signs, (gx_rows, gx_cols)), shape=shape)
        gy = sparse.csr_matrix((signs, (gy_rows, gy_cols)), shape=shape)
        return gx, gy

    @cached_property
    def centroid_operator(self) -> sparse.csr_matrix:
        """Valor en el baricentro de cada triángulo (promedio de vértices)"""
        n_tri = self.n_triangles
        rows = np.repeat(np.arange(n_tri), 3)
        vals = np.full(3 * n_tri, 1.0 / 3.0)
        return sparse.csr_matrix((vals, (rows, self.triangles.ravel())),
                                 shape=(n_tri, self.n_vertices))

    @cached_property
    def face_operator(self) -> sparse.csr_matrix:
        """Valor en el punto medio de cada cara de frontera"""
        n_faces = self.faces.shape[0]
        rows = np.repeat(np.arange(n_faces), 2)
        vals = np.full(2 * n_faces, 0.5)
        return sparse.csr_matrix((vals, (rows, self.faces.ravel())),
                                 shape=(n_faces, self.n_vertices))

    @cached_property
    def incidence(self) -> sparse.csr_matrix:
        """Incidencia triángulo-vértice (unos)"""
        n_tri = self.n_triangles
        rows = np.repeat(np.arange(n_tri), 3)
        return sparse.csr_matrix((np.ones(3 * n_tri), (rows, self.triangles.ravel())),
                                 shape=(n_tri, self.n_vertices))

    @cached_property
    def lumped_mass(self) -> np.ndarray:
        mass = self.centroid_operator.T @ np.full(self.n_triangles, self.tri_area)
        return _frozen(np.asarray(mass))

    @cached_property
    def neighbors8(self) -> np.ndarray:
        """Índices de los 8 vecinos de cada vértice (-1 si no es interior)"""
        nx, ny = self.shape
        out = np.full((self.n_vertices, 8), -1, dtype=np.intp)
        for k, (dx, dy) in enumerate(NEIGHBOR_OFFSETS):
            jx = self.grid_ix + dx
            jy = self.grid_iy + dy
            valid = (jx >= 0) & (jx < nx) & (jy >= 0) & (jy < ny)
            out[valid, k] = self.index[jx[valid], jy[valid]]
        return _frozen(out)

    @cached_property
    def distance(self) -> "DistanceResult":
        return distance_field(self)

    # Utilidades

    def to_grid(self, values: np.ndarray, fill: float = np.nan) -> np.ndarray:
        """Vuelca valores por vértice sobre la malla completa"""
        grid = np.full(self.shape, fill, dtype=float)
        grid[self.grid_ix, self.grid_iy] = values
        return grid

    def vertex_mask_to_grid(self, flags: np.ndarray) -> np.ndarray:
        grid = np.zeros(self.shape, dtype=bool)
        grid[self.grid_ix, self.grid_iy] = flags
        return grid

    def nearest_vertex(self, point) -> int:
        """Vértice de la malla más cercano a un punto (-1 si no es interior)"""
        ix = int(round((point[0] - self.origin[0]) / self.h))
        iy = int(round((point[1] - self.origin[1]) / self.h))
        if not (0 <= ix < self.shape[0] and 0 <= iy < self.shape[1]):
            return -1
        return int(self.index[ix, iy])

    def dilate(self, flags: np.ndarray, steps: int) -> np.ndarray:
        """Dilata un conjunto de vértices `steps` celdas (vecindad de 8)"""
        if steps <= 0:
            return flags.copy()
        grid = ndimage.binary_dilation(
            self.vertex_mask_to_grid(flags),
            structure=np.ones((3, 3), dtype=bool),
            iterations=steps,
        )
        return grid[self.grid_ix, self.grid_iy]


@dataclass(frozen=True, eq=False)
class DistanceResult:
    """Distancia exacta a la frontera discreta"""

    d: ScalarField
    nearest: np.ndarray
    sq_half: np.ndarray
    grad: np.ndarray


@dataclass(frozen=True)
class RidgeSet:
    """Vértices con más de un punto de frontera más cercano"""

    members: frozenset
    tol: float
    min_angle_deg: float
    grad_flagged: frozenset = frozenset()

    def __contains__(self, vertex) -> bool:
        return int(vertex) in self.members

    def __len__(self) -> int:
        return len(self.members)

    def as_mask(self, dom: Domain) -> np.ndarray:
        flags = np.zeros(dom.n_vertices, dtype=bool)
        if self.members:
            flags[np.fromiter(self.members, dtype=np.intp)] = True
        return flags

    def sorted_members(self) -> list[int]:
        return sorted(self.members)


@dataclass(frozen=True)
class TracePath:
    """Segmento de flujo de ∇d desde x0 hasta la cresta"""

    start: np.ndarray
    endpoint: np.ndarray
    length: float
    path: np.ndarray
    reached_ridge: bool
    deviation: float
    distance_gain: float


def build_grid_domain(mask, h: float, origin=(0.0, 0.0)) -> Domain:
    """Construye el dominio a partir de una máscara booleana de vértices"""
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2:
        raise ValueError(f"La máscara debe ser 2-D, recibida con ndim={mask.ndim}")
    if not h > 0:
        raise ValueError(f"h debe ser positivo, recibido {h}")

    nx, ny = mask.shape
    cells = mask[:-1, :-1] & mask[1:, :-1] & mask[:-1, 1:] & mask[1:, 1:]
    if not cells.any():
        raise EmptyDomain("La máscara no contiene ninguna celda interior")

    # Solo cuentan los vértices de celdas interiores
    inside = np.zeros_like(mask)
    inside[:-1, :-1] |= cells
    inside[1:, :-1] |= cells
    inside[:-1, 1:] |= cells
    inside[1:, 1:] |= cells
    dropped = int(mask.sum() - inside.sum())
    if dropped:
        logger.debug(f"{dropped} vértices aislados descartados de la máscara")

    index = np.full(mask.shape, -1, dtype=np.intp)
    grid_ix, grid_iy = np.nonzero(inside)
    index[grid_ix, grid_iy] = np.arange(grid_ix.size)

    # Triángulos: A = (v00, v10, v11), B = (v00, v11, v01)
    cx, cy = np.nonzero(cells)
    v00 = index[cx, cy]
    v10 = index[cx + 1, cy]
    v11 = index[cx + 1, cy + 1]
    v01 = index[cx, cy + 1]
    triangles = np.empty((2 * cx.size, 3), dtype=np.intp)
    triangles[0::2] = np.column_stack((v00, v10, v11))
    triangles[1::2] = np.column_stack((v00, v11, v01))

    faces, normals, refined = _extract_faces(cells, index)

    labels, n_components = ndimage.label(cells)
    if n_components > 1:
        message = f"El dominio tiene {n_components} componentes conexas"
        logger.warning(message)
        warnings.warn(message, DisconnectedDomainWarning, stacklevel=2)

    dom = Domain(
        n=2,
        shape=(nx, ny),
        h=float(h),
        origin=(float(origin[0]), float(origin[1])),
        inside=_frozen(inside),
        index=_frozen(index),
        grid_ix=_frozen(grid_ix.astype(np.intp)),
        grid_iy=_frozen(grid_iy.astype(np.intp)),
        cells=_frozen(cells),
        triangles=_frozen(triangles),
        faces=_frozen(faces),
        face_normals=_frozen(normals),
        face_measure=_frozen(float(h) * _staircase_weights(faces, normals, grid_ix, grid_iy)),
        face_refined=_frozen(refined),
        n_components=int(n_components),
    )
    logger.debug(
        f"Dominio {nx}x{ny}, h={h}: {dom.n_vertices} vértices, "
        f"{dom.n_triangles} triángulos, {faces.shape[0]} caras"
    )
    return dom


def _extract_faces(cells: np.ndarray, index: np.ndarray):
    """Aristas con una celda interior a un solo lado"""
    nx, ny = index.shape
    padded = np.pad(cells, 1, constant_values=False)

    faces, normals, refined = [], [], []

    # Aristas horizontales (i, j)-(i+1, j)
    below = padded[1:nx, 0:ny]
    above = padded[1:nx, 1:ny + 1]
    for i, j in np.argwhere(below ^ above):
        faces.append((index[i, j], index[i + 1, j]))
        normals.append((0.0, -1.0) if above[i, j] else (0.0, 1.0))
        refined.append((2 * i + 1, 2 * j))

    # Aristas verticales (i, j)-(i, j+1)
    left = padded[0:nx, 1:ny]
    right = padded[1:nx + 1, 1:ny]
    for i, j in np.argwhere(left ^ right):
        faces.append((index[i, j], index[i, j + 1]))
        normals.append((-1.0, 0.0) if right[i, j] else (1.0, 0.0))
        refined.append((2 * i, 2 * j + 1))

    return (
        np.asarray(faces, dtype=np.intp).reshape(-1, 2),
        np.asarray(normals, dtype=float).reshape(-1, 2),
        np.asarray(refined, dtype=np.intp).reshape(-1, 2),
    )


def _trace_contours(faces: np.ndarray, normals: np.ndarray,
                    grid_ix: np.ndarray, grid_iy: np.ndarray) -> list[list[int]]:
    """Ciclos de caras orientadas con el interior a la izquierda.

    En un vértice de pellizco (dos celdas en diagonal) se toma el giro más
    a la izquierda, así cada celda 4-conexa queda en su propio ciclo.
    """
    directions = np.column_stack((-normals[:, 1], normals[:, 0])).astype(np.intp)
    a = np.column_stack((grid_ix[faces[:, 0]], grid_iy[faces[:, 0]]))
    b = np.column_stack((grid_ix[faces[:, 1]], grid_iy[faces[:, 1]]))
    forward = (directions[:, 0] + directions[:, 1]) > 0
    starts = np.where(forward[:, None], a, b)

    outgoing: dict[tuple[int, int], list[int]] = {}
    for f, (sx, sy) in enumerate(starts):
        outgoing.setdefault((int(sx), int(sy)), []).append(f)

    visited = np.zeros(faces.shape[0], dtype=bool)
    cycles = []
    for first in range(faces.shape[0]):
        if visited[first]:
            continue
        cycle = []
        current = first
        while True:
            visited[current] = True
            cycle.append(current)
            dx, dy = directions[current]
            end = (int(starts[current, 0] + dx), int(starts[current, 1] + dy))
            options = outgoing.get(end, [])
            if not options:
                break
            # cross > 0 es giro a la izquierda
            chosen = max(options, key=lambda g: dx * directions[g, 1] - dy * directions[g, 0])
            if chosen == first or visited[chosen]:
                break
            current = chosen
        cycles.append(cycle)
    return cycles


def _staircase_weights(faces: np.ndarray, normals: np.ndarray,
                       grid_ix: np.ndarray, grid_iy: np.ndarray) -> np.ndarray:
    """Factor de longitud por cara para que Σ medida ≈ ℋ¹(∂Ω).

    Una escalera de huellas de largo a y contrahuellas de largo b mide a+b
    celdas por periodo pero recorre sqrt(a²+b²); cada tramo de la escalera
    pesa su largo sobre esa hipotenusa. Los lados de rectángulos (giros del
    mismo signo en ambos extremos o tramos vecinos largos) pesan 1.
    """
    weights = np.ones(faces.shape[0])
    if faces.shape[0] == 0:
        return weights
    directions = np.column_stack((-normals[:, 1], normals[:, 0])).astype(np.intp)

    for cycle in _trace_contours(faces, normals, grid_ix, grid_iy):
        dirs = [tuple(directions[f]) for f in cycle]
        turn_at = [k for k in range(len(cycle)) if dirs[k] != dirs[k - 1]]
        if len(turn_at) < 2:
            continue
        # Tramos maximales de caras con la misma dirección
        runs = []
        for i, k in enumerate(turn_at):
            stop = turn_at[i + 1] if i + 1 < len(turn_at) else turn_at[0] + len(cycle)
            runs.append([cycle[j % len(cycle)] for j in range(k, stop)])

        n_runs = len(runs)
        for r, run in enumerate(runs):
            prev_run, next_run = runs[r - 1], runs[(r + 1) % n_runs]
            d_prev, d_cur, d_next = (directions[prev_run[0]], directions[run[0]],
                                     directions[next_run[0]])
            turn_in = np.sign(d_prev[0] * d_cur[1] - d_prev[1] * d_cur[0])
            turn_out = np.sign(d_cur[0] * d_next[1] - d_cur[1] * d_next[0])
            length = len(run)
            neighbours = (len(prev_run), len(next_run))
            if turn_in == turn_out:
                continue
            if length != 1 and max(neighbours) != 1:
                continue
            rise = 0.5 * (neighbours[0] + neighbours[1])
            weights[run] = length / math.hypot(length, rise)
    return weights


def distance_field(dom: Domain) -> DistanceResult:
    """Distancia euclídea exacta a la frontera discreta.

    La transformada se calcula sobre la malla refinada h/2, donde los
    puntos medios de las caras son nodos; la distancia se reconstruye desde
    el índice del punto más cercano como (h/2)·sqrt(entero), de modo que un
    oráculo de fuerza bruta la reproduce bit a bit.
    """
    nx, ny = dom.shape
    refined_shape = (2 * nx - 1, 2 * ny - 1)
    seeds = dom.boundary_refined

    background = np.ones(refined_shape, dtype=bool)
    background[seeds[:, 0], seeds[:, 1]] = False
    _, (near_a, near_b) = ndimage.distance_transform_edt(background, return_indices=True)

    lookup = np.full(refined_shape, -1, dtype=np.intp)
    lookup[seeds[:, 0], seeds[:, 1]] = np.arange(seeds.shape[0])

    ra, rb = 2 * dom.grid_ix, 2 * dom.grid_iy
    na, nb = near_a[ra, rb], near_b[ra, rb]
    sq_half = (ra - na) ** 2 + (rb - nb) ** 2
    d = 0.5 * dom.h * np.sqrt(sq_half.astype(float))

    field_d = ScalarField(dom, d)
    result = DistanceResult(
        d=field_d,
        nearest=_frozen(lookup[na, nb]),
        sq_half=_frozen(sq_half.astype(np.int64)),
        grad=_frozen(gradient(dom, field_d)),
    )
    logger.debug(f"Distancia calculada: max d = {d.max():.6f}")
    return result


def brute_force_distance(dom: Domain, chunk: int = 2048) -> tuple[np.ndarray, np.ndarray]:
    """Oráculo exhaustivo O(N·B): (distancia² en unidades (h/2)², distancia)"""
    pts = dom.boundary_refined.astype(np.int64)
    ra = 2 * dom.grid_ix.astype(np.int64)
    rb = 2 * dom.grid_iy.astype(np.int64)
    sq = np.empty(dom.n_vertices, dtype=np.int64)
    for start in range(0, dom.n_vertices, chunk):
        stop = min(start + chunk, dom.n_vertices)
        da = ra[start:stop, None] - pts[None, :, 0]
        db = rb[start:stop, None] - pts[None, :, 1]
        sq[start:stop] = (da * da + db * db).min(axis=1)
    return sq, 0.5 * dom.h * np.sqrt(sq.astype(float))


def boundary_distance_at(dom: Domain, points) -> np.ndarray:
    """Distancia exacta a la frontera discreta en puntos arbitrarios del plano"""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[-1] != 2:
        raise ValueError(f"Se esperaban puntos (N, 2), recibido {pts.shape}")
    dist, _ = dom.boundary_tree.query(pts)
    return dist


def inradius(dom: Domain) -> float:
    """R_Ω = ‖d(·,∂Ω)‖_∞"""
    return float(dom.distance.d.values.max())


def lambda_infinity(dom: Domain, beta: float) -> float:
    """Valor geométrico Λ∞ = 1/(1/β + R_Ω)"""
    if not beta > 0:
        raise ValueError(f"beta debe ser positivo, recibido {beta}")
    return 1.0 / (1.0 / beta + inradius(dom))


def ridge_set(dom: Domain, tol: Optional[float] = None,
              min_angle_deg: float = LabConstants.RIDGE_MIN_ANGLE_DEG) -> RidgeSet:
    """Vértices cuya distancia se realiza en dos puntos de frontera separados.

    Para cada vértice x con d(x) ≥ RIDGE_MIN_DEPTH·h y punto más cercano y1,
    se buscan (de forma exhaustiva dentro de la bola de radio d(x) + tol)
    puntos y2 con |y1 − y2| > max(tol, c·d(x)) que formen con y1 un ángulo
    de al menos min_angle_deg visto desde x. La separación crece con d: un
    arco suave de la escalera dentro de la bola mide del orden de
    sqrt(2·d·tol), que queda por debajo de c·d lejos de la frontera.
    """
    tol = LabConstants.RIDGE_TOL_FACTOR * dom.h if tol is None else float(tol)
    dist = dom.distance
    d = dist.d.values
    pts = dom.boundary_points
    coords = dom.coords
    cos_max = math.cos(math.radians(min_angle_deg))

    deep = d >= LabConstants.RIDGE_MIN_DEPTH * dom.h
    candidates = np.flatnonzero(deep & ~dom.is_boundary)
    balls = dom.boundary_tree.query_ball_point(coords[candidates], r=d[candidates] + tol)

    members = []
    for vertex, ball in zip(candidates, balls):
        if len(ball) < 2:
            continue
        x = coords[vertex]
        y1 = pts[dist.nearest[vertex]]
        ys = pts[np.asarray(ball, dtype=np.intp)]
        v1 = y1 - x
        vs = ys - x
        spread = max(tol, LabConstants.RIDGE_SPREAD_FACTOR * d[vertex])
        separated = np.hypot(*(ys - y1).T) > spread
        if not separated.any():
            continue
        cosines = (vs @ v1) / (np.hypot(*vs.T) * math.hypot(*v1))
        if np.any(separated & (cosines <= cos_max)):
            members.append(int(vertex))

    # Verificación cruzada: caída de |∇d| en triángulos incidentes
    tri_norm = np.hypot(dist.grad[:, 0], dist.grad[:, 1])
    low = tri_norm < LabConstants.RIDGE_GRAD_DROP
    flagged = np.unique(dom.triangles[low].ravel()) if low.any() else np.array([], dtype=np.intp)
    flagged = flagged[~dom.is_boundary[flagged]]

    ridge = RidgeSet(
        members=frozenset(members),
        tol=tol,
        min_angle_deg=float(min_angle_deg),
        grad_flagged=frozenset(int(v) for v in flagged),
    )
    logger.debug(f"Cresta: {len(ridge)} vértices (tol={tol:.4g}), {len(ridge.grad_flagged)} marcados por |∇d|")
    return ridge


def trace_to_ridge(dom: Domain, x0, ridge: Optional[RidgeSet] = None,
                   max_steps: Optional[int] = None) -> TracePath:
    """Sigue η = ∇d desde x0 con pasos h/2 hasta alcanzar la cresta"""
    ridge = ridge if ridge is not None else ridge_set(dom)
    start_vertex = dom.nearest_vertex(x0)
    if start_vertex < 0:
        raise ValueError(f"El punto {tuple(x0)} no está en el dominio")
    if start_vertex in ridge:
        raise ValueError(f"El vértice inicial {start_vertex} pertenece a la cresta")

    dist = dom.distance
    vectors, _ = vertex_gradient(dom, dist.d)
    xs, ys = dom.axes
    grad_interp = RegularGridInterpolator(
        (xs, ys),
        np.stack((dom.to_grid(vectors[:, 0], 0.0), dom.to_grid(vectors[:, 1], 0.0)), axis=-1),
        bounds_error=False, fill_value=0.0,
    )
    d_interp = RegularGridInterpolator((xs, ys), dom.to_grid(dist.d.values, 0.0),
                                       bounds_error=False, fill_value=0.0)

    start = dom.coords[start_vertex].copy()
    g0 = grad_interp(start[None, :])[0]
    if math.hypot(*g0) < LabConstants.TRACE_MIN_GRAD:
        raise NoProgress(f"|∇d| = {math.hypot(*g0):.3f} en el punto inicial")

    step = LabConstants.TRACE_STEP_FACTOR * dom.h
    max_steps = max_steps or int(math.ceil(4.0 * inradius(dom) / step)) + 10
    points = [start]
    x = start
    reached = False
    for _ in range(max_steps):
        g = grad_interp(x[None, :])[0]
        norm = math.hypot(*g)
        if norm < LabConstants.TRACE_MIN_GRAD:
            reached = True
            break
        x = x + step * g / norm
        vertex = dom.nearest_vertex(x)
        if vertex < 0:
            break
        points.append(x)
        if vertex in ridge:
            reached = True
            break

    path = np.asarray(points)
    endpoint = path[-1]
    length = float(np.sum(np.hypot(*np.diff(path, axis=0).T))) if len(path) > 1 else 0.0
    chord = endpoint - start
    chord_norm = math.hypot(*chord)
    if chord_norm > 0:
        rel = path - start
        deviation = float(np.max(np.abs(rel[:, 0] * chord[1] - rel[:, 1] * chord[0])) / chord_norm)
    else:
        deviation = 0.0
    gain = float(d_interp(endpoint[None, :])[0] - d_interp(start[None, :])[0])

    if not reached:
        logger.warning(f"Trazado desde {tuple(start)} terminó sin alcanzar la cresta")
    return TracePath(start=start, endpoint=endpoint, length=length, path=path,
                     reached_ridge=reached, deviation=deviation, distance_gain=gain)


def equal_area_disk(dom: Domain) -> Domain:
    """Disco con la misma área discreta y el mismo paso"""
    from numerics.shapes import disk_domain
    radius = math.sqrt(dom.area / math.pi)
    return disk_domain(radius, dom.h)
