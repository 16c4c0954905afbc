"""
Pruebas del ejecutor de tareas y del monitor de recursos
"""

import threading
import time

from config.settings import LabConfig
from core.task_runner import TaskRunner
from utils.health_check import ResourceMonitor


def _tasks():
    def slow(value, delay):
        def run():
            time.sleep(delay)
            return value
        return run

    def broken():
        raise ValueError("tarea rota")

    return [("a", slow(1, 0.05)), ("b", broken), ("c", slow(3, 0.0))]


def test_sequential_run_keeps_order_and_captures_errors():
    outcomes = TaskRunner(max_workers=1).run_all(_tasks())

    assert [o.name for o in outcomes] == ["a", "b", "c"]
    assert [o.ok for o in outcomes] == [True, False, True]
    assert outcomes[0].value == 1 and outcomes[2].value == 3
    assert isinstance(outcomes[1].error, ValueError)


def test_threaded_run_matches_sequential():
    outcomes = TaskRunner(max_workers=3).run_all(_tasks())

    assert [o.name for o in outcomes] == ["a", "b", "c"]
    assert [o.value for o in outcomes] == [1, None, 3]


def test_threads_come_from_config():
    assert TaskRunner(LabConfig(THREADS=4)).max_workers == 4
    assert TaskRunner(max_workers=0).max_workers >= 1


def test_threaded_run_uses_several_threads():
    seen = set()
    lock = threading.Lock()

    def record():
        with lock:
            seen.add(threading.get_ident())
        time.sleep(0.05)

    TaskRunner(max_workers=2).run_all([(str(i), record) for i in range(4)])

    assert len(seen) == 2


def test_empty_task_list():
    assert TaskRunner().run_all([]) == []


def test_resource_monitor_tracks_blocks():
    monitor = ResourceMonitor()
    with monitor.track("bloque"):
        sum(range(1000))

    stats = monitor.samples["bloque"]
    assert stats["wall_seconds"] >= 0.0
    assert stats["rss_mb"] > 0.0
    assert monitor.get_health_report()["tasks"]["bloque"] == stats
