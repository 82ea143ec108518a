"""Tunable constants and environment-driven settings."""

import os
from fractions import Fraction

# Working-accuracy rescale: eps = eps0 / max(EPS_DENOM_FLOOR, c_scale * h^3 * ceil(log2 D)).
# C_SCALE_DEFAULT was tuned by bisection on the acceptance grid corpus (see README,
# "Tuning c_scale"): it is the smallest power of two for which stretch stays within
# 1 + eps0 at both eps0 = 0.5 and eps0 = 0.1 with a 2x safety margin.
C_SCALE_DEFAULT = Fraction(1, 1024)
EPS_DENOM_FLOOR = Fraction(3, 2)

# Size budget for the bootstrapped fast build: stop when n < 4 * kappa * |T|,
# r defaults to kappa^4 capped at n. Calibrated on an 8x8 grid (README).
KAPPA_DEFAULT = 4

# Round-count slack for the fast build: per-round eps' = eps0 / (ROUND_SLACK * rounds_est).
ROUND_SLACK = 1

# Hard cap for generated grids (w*h), guards accidental huge allocations.
GRID_CELL_CAP = 1_000_000


def worker_count() -> int:
    """Worker cap for parallelizable harness loops, from DAMKIT_THREADS (default 1)."""
    raw = os.environ.get("DAMKIT_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        return 1
    return max(1, value)
