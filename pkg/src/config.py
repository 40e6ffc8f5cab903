"""Centralized configuration for the toolkit.

Environment
-----------
Values are read from the process environment after loading ``repo/.env``
(see ``.env.example``).  ``MSE_THREADS`` caps the number of worker threads
used for multistart and batch evaluation; ``MSE_SEED`` replaces the default
seed for the solver and the oracles.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Paths
PROJECT_ROOT = Path(__file__).resolve().parent.parent

# Load .env from the project root (explicit path so it works from any cwd)
load_dotenv(PROJECT_ROOT / ".env")


def _env_int(key: str, default: int) -> int:
    raw = os.getenv(key)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        return default


# Worker cap for multistart / batch evaluation. Values < 1 mean sequential.
MSE_THREADS: int = max(1, _env_int("MSE_THREADS", 1))

# Reproducibility
RANDOM_SEED: int = _env_int("MSE_SEED", 42)

# Tolerance gates
HERMITIAN_GATE: float = 1e-8        # reject above, symmetrize below
DENSITY_TOL: float = 1e-10          # trace = 1 and min eigenvalue >= -tol
IMAG_TOL: float = 1e-10             # |Im <L>| accepted before discarding
DETECTION_TOL: float = 1e-10        # witness / criterion margins
PHASE_TIE_TOL: float = 1e-12        # "first component of largest modulus"
DEGENERACY_TOL: float = 1e-9        # relative gap treated as a degenerate eigenvalue
OVERLAP_FLOOR: float = 1e-6         # below this the degenerate tie-break falls back to index order

# Solver defaults (SolverConfig fields)
SOLVER_CONFIG: dict = {
    "mode": "sup",
    "tol_g": 1e-10,
    "tol_residual": 1e-8,
    "max_iter": 500,
    "n_starts": 64,
    "seed": RANDOM_SEED,
    "dedup_tol": 1e-7,
}

# Oracle defaults
ORACLE_CONFIG: dict = {
    "n_samples": 4000,
    "n_polish": 8,
    "grid_steps": 24,
    "max_total_dim": 256,
    "max_grid_evaluations": 2e10,
    "polish_min_step": 1e-8,
    "polish_max_moves": 20000,
}
