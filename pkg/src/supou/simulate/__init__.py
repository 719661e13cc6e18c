"""Path simulation of supOU processes and their integrals."""
from .core import (COMPONENTS, ComponentPaths, PathEnsemble, SamplePath, SimConfig, SimulationError,
                   UnsupportedBDLP, build_drivers, integrate_ou_identity, integrate_path, levy_ito_split,
                   ou_exact_step, replication_seed, run_ensemble, sample_rates, simulate_supou,
                   stationary_init, write_csv)

__all__ = [
    "COMPONENTS", "ComponentPaths", "PathEnsemble", "SamplePath", "SimConfig", "SimulationError",
    "UnsupportedBDLP", "build_drivers", "integrate_ou_identity", "integrate_path", "levy_ito_split",
    "ou_exact_step", "replication_seed", "run_ensemble", "sample_rates", "simulate_supou",
    "stationary_init", "write_csv",
]
