"""Seeded random instances shared by the optimizer tests and the acceptance suite."""

import numpy as np

from fsomimo.optimizer import feasible_interval
from fsomimo.performance import BPSK, DPSK, QPSK, Modulation

MODULATIONS = (BPSK, QPSK, Modulation.mpsk(8), DPSK)


def optimizer_instances(count=20, seed=20):
    """``(mod, MN, A0, gamma_avg, xi_probe)`` tuples; xi_probe lies inside the feasible interval."""
    rng = np.random.Generator(np.random.Philox(key=seed))
    out = []
    for k in range(count):
        mn = int(rng.integers(1, 37))
        A0 = float(rng.uniform(0.3, 1.0))
        g = float(10.0 ** rng.uniform(0.0, 3.0))
        hi = feasible_interval(mn)[1]
        out.append((MODULATIONS[k % 4], mn, A0, g, float(rng.uniform(0.05 * hi, 0.95 * hi))))
    return out
