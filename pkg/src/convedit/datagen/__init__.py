from .catalogs import load_catalogs
from .dataset import LabeledExample, read_dataset, stats_report, write_dataset
from .generate import CHALLENGE_PAIRS, generate_all, generate_compositional, generate_single_task
from .templates import QueryTemplate, instantiate, load_builtin_templates, parse_templates

__all__ = [
    "load_catalogs", "LabeledExample", "read_dataset", "write_dataset", "stats_report",
    "CHALLENGE_PAIRS", "generate_all", "generate_compositional", "generate_single_task",
    "QueryTemplate", "instantiate", "load_builtin_templates", "parse_templates",
]
