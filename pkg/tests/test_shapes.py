"""
Pruebas de los generadores de máscaras y del formato P1
"""

import numpy as np
import pytest

from numerics.domain import build_grid_domain
from numerics.shapes import (
    annulus_domain,
    build_named_domain,
    random_connected_mask,
    read_mask_file,
    rectangle_domain,
    write_mask_file,
)
from utils.error_handler import ConfigError


def test_disk_is_centered_at_origin(disk16):
    center = disk16.nearest_vertex((0.0, 0.0))
    assert center >= 0
    assert tuple(disk16.coords[center]) == (0.0, 0.0)


def test_rectangle_spans_box():
    dom = rectangle_domain(2.0, 1.0, 0.25)
    assert dom.area == pytest.approx(2.0)
    assert dom.coords[:, 0].min() == 0.0
    assert dom.coords[:, 0].max() == pytest.approx(2.0)
    assert dom.coords[:, 1].max() == pytest.approx(1.0)


def test_rectangle_rejects_incommensurate_side():
    with pytest.raises(ValueError):
        rectangle_domain(1.1, 1.0, 0.25)


def test_l_shape_area(lshape16):
    assert lshape16.area == pytest.approx(3.0)


def test_annulus_has_hole():
    dom = annulus_domain(0.5, 1.0, 1.0 / 16.0)
    assert dom.nearest_vertex((0.0, 0.0)) == -1
    assert dom.nearest_vertex((0.75, 0.0)) >= 0
    with pytest.raises(ValueError):
        annulus_domain(1.0, 0.5, 1.0 / 16.0)


def test_build_named_domain():
    dom = build_named_domain("square", 0.25, side=1.0)
    assert dom.area == pytest.approx(1.0)
    with pytest.raises(ValueError):
        build_named_domain("hexagon", 0.25)


def test_random_mask_is_single_component():
    rng = np.random.default_rng(3)
    for _ in range(5):
        mask = random_connected_mask(rng, 33)
        dom = build_grid_domain(mask, 1.0 / 32.0)
        assert dom.n_components == 1
        assert not mask[0, :].any() and not mask[:, -1].any()


def test_mask_file_round_trip(tmp_path):
    rng = np.random.default_rng(11)
    mask = random_connected_mask(rng, 17)
    path = write_mask_file(tmp_path / "forma.pbm", mask, 0.0625)

    loaded, h = read_mask_file(path)

    assert h == 0.0625
    assert np.array_equal(loaded, mask)


def test_mask_file_top_row_is_max_y(tmp_path):
    path = tmp_path / "tira.pbm"
    path.write_text("P1\n2 3\n1 1\n0 0\n0 0\nh=0.5\n", encoding="utf-8")

    mask, h = read_mask_file(path)

    assert h == 0.5
    assert mask.shape == (2, 3)
    assert mask[:, 2].all() and not mask[:, :2].any()


@pytest.mark.parametrize("text", [
    "P2\n2 2\n1 1\n1 1\nh=0.5\n",
    "P1\n2 2\n1 1\n1\nh=0.5\n",
    "P1\n2 2\n1 1\n1 1\n",
    "P1\n2 2\n1 1\n1 1\nh=abc\n",
])
def test_malformed_mask_file(tmp_path, text):
    path = tmp_path / "mala.pbm"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigError):
        read_mask_file(path)
