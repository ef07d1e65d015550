from .complexity import FORMULAS, complexity_eval, required_parameters
from .config import ConfigError, load_sweep_spec, parse_epsilon
from .metrics import nmse, to_db
from .persistence import load_scene, read_results, save_scene, write_results
from .sweep import SCHEMES, SweepResult, SweepRow, SweepSpec, run_sweep

__all__ = [
    "FORMULAS", "complexity_eval", "required_parameters",
    "ConfigError", "load_sweep_spec", "parse_epsilon",
    "nmse", "to_db",
    "load_scene", "read_results", "save_scene", "write_results",
    "SCHEMES", "SweepResult", "SweepRow", "SweepSpec", "run_sweep",
]
