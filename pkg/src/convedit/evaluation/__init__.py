from .bench import BenchReport, latency_bench
from .metrics import EvalReport, TaskResult, evaluate, exact_match, task_name
from .sweep import SweepPoint, composition_sweep, write_sweep

__all__ = [
    "BenchReport", "latency_bench",
    "EvalReport", "TaskResult", "evaluate", "exact_match", "task_name",
    "SweepPoint", "composition_sweep", "write_sweep",
]
