"""Independent checks on the closed forms: Monte Carlo and quadrature.

Random stream
-------------
Monte Carlo draws are split into fixed blocks of :data:`BLOCK_SIZE` samples.
Block ``b`` under master seed ``s`` reads from numpy's ``Philox`` bit
generator (Philox4x64-10) with 128-bit key ``(s, b)``, i.e.
``key = s + (b << 64)``, and counter starting at 0. numpy increments the
counter before each 4-word output, so the first raw words are the
Random123 reference output for counter 1. Uniform doubles are
``(word >> 11) * 2**-53``, as produced by ``Generator.random``.

Within a block the uniforms are consumed as in
:func:`fsomimo.channel.draw_irradiance`. Every draw is therefore a pure
function of ``(seed, block, position)``. ``chunks`` only sets how many
threads share the blocks. Block summaries (count, mean, centred sum of
squares) are merged in block order with the pairwise update of Chan et al.,
so estimates are bit-identical for any ``chunks``.

The estimator averages the conditional BER over sampled irradiance
(Rao-Blackwellized) instead of simulating symbol decisions.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math
import warnings

import numpy as np

from .channel import ChannelParams, PdfVariant, combined_pdf, draw_irradiance
from .exceptions import PaperDiscrepancyWarning
from .performance import (
    DPSK,
    DpskForm,
    Modulation,
    _gamma_avg,
    ber_conditional,
    ber_closed,
    mpsk_params,
)
from .specfun import integrate_semi_infinite
from .table import CsvTable

__all__ = [
    "BLOCK_SIZE",
    "McEstimate",
    "Instance",
    "REPORT_HEADER",
    "block_generator",
    "mc_ber",
    "mc_outage",
    "quad_ber",
    "discrepancy_report",
    "acceptance_grid",
    "random_mc_instances",
    "gate_report",
]

BLOCK_SIZE = 1 << 16
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_samples: int
    seed: int


def block_generator(seed, block):
    """numpy Generator for block ``block`` of master seed ``seed``."""
    if not 0 <= seed <= _MASK64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    return np.random.Generator(np.random.Philox(key=int(seed) + (int(block) << 64)))


def _run_blocks(kernel, n, seed, chunks, block_size):
    if n < 1:
        raise ValueError(f"need at least one sample, got n={n!r}")
    if chunks < 1:
        raise ValueError(f"chunks must be >= 1, got {chunks!r}")
    n_blocks = -(-n // block_size)

    def summarize(b):
        size = min(block_size, n - b * block_size)
        vals = kernel(block_generator(seed, b), size)
        mean = float(np.mean(vals))
        return size, mean, float(np.sum((vals - mean) ** 2))

    if chunks == 1:
        summaries = [summarize(b) for b in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=chunks) as pool:
            summaries = list(pool.map(summarize, range(n_blocks)))

    count, mean, m2 = summaries[0]
    for size, block_mean, block_m2 in summaries[1:]:
        total = count + size
        delta = block_mean - mean
        mean += delta * size / total
        m2 += block_m2 + delta * delta * count * size / total
        count = total
    std_error = math.sqrt(m2 / (count - 1) / count) if count > 1 else 0.0
    return McEstimate(mean=mean, std_error=std_error, n_samples=count, seed=int(seed))


def mc_ber(mod, snr, p, n, seed=0, chunks=1, block_size=BLOCK_SIZE):
    """Monte Carlo average of the conditional BER over ``I = h I'``."""
    g = _gamma_avg(snr)
    return _run_blocks(
        lambda rng, size: ber_conditional(mod, draw_irradiance(rng, p, size), g),
        n,
        seed,
        chunks,
        block_size,
    )


def mc_outage(gamma_th, snr, p, n, seed=0, chunks=1, block_size=BLOCK_SIZE):
    """Empirical ``P(gamma_avg I² <= gamma_th)``."""
    g = _gamma_avg(snr)
    if not gamma_th >= 0:
        raise ValueError(f"gamma_th must be >= 0, got {gamma_th!r}")
    level = math.sqrt(gamma_th / g)
    return _run_blocks(
        lambda rng, size: (draw_irradiance(rng, p, size) <= level).astype(float),
        n,
        seed,
        chunks,
        block_size,
    )


def _ber_scale(mod, g, p, variant):
    if mod.is_dpsk:
        scale = 1.0 / math.sqrt(g)
    else:
        scale = 1.0 / (min(mpsk_params(mod.order).a) * math.sqrt(g / 2.0))
    if variant is PdfVariant.EXACT:
        scale = min(scale, p.A0 * p.paths_MN)
    return scale


def quad_ber(mod, snr, p, variant=PdfVariant.EXACT, tol=0.0, rel_tol=1e-11):
    """``∫ combined_pdf(I) * ber_conditional(I) dI`` over ``(0, inf)``.

    Returns the :class:`~fsomimo.specfun.QuadratureResult`. The defaults
    ask for 1e-11 relative accuracy, which is what the 1e-8 consistency
    gates rely on.
    """
    variant = PdfVariant(variant)
    g = _gamma_avg(snr)
    if variant is PdfVariant.EXACT:
        p.require_exact()

    def integrand(x):
        return combined_pdf(x, p, variant) * ber_conditional(mod, x, g)

    return integrate_semi_infinite(
        integrand, tol, rel_tol=rel_tol, scale=_ber_scale(mod, g, p, variant)
    )


@dataclass(frozen=True)
class Instance:
    mod: Modulation
    gamma_avg: float
    params: ChannelParams
    mc: bool = False


REPORT_HEADER = (
    "modulation",
    "MN",
    "xi2",
    "A0",
    "gamma_avg",
    "ber_paper",
    "ber_derived",
    "quad_paper",
    "quad_paper_err",
    "quad_exact",
    "quad_exact_err",
    "mc_mean",
    "mc_stderr",
    "gap_derived_vs_quad",
    "gap_paper_vs_quad",
    "ratio_paper_model_vs_exact",
    "mc_z",
)


def _rel(a, b):
    return abs(a - b) / abs(b)


def discrepancy_report(instances, n_samples=1_000_000, seed=0, chunks=1, rel_tol=1e-11):
    """Compare every route to the average BER on each instance.

    One row per instance (columns in :data:`REPORT_HEADER`):

    * ``ber_paper`` is the formula as published (for DPSK the printed form);
      ``ber_derived`` is the re-derived one. The two coincide for M-PSK.
    * ``quad_paper`` and ``quad_exact`` integrate the conditional BER against
      the power-law and the exact-conditioning densities. ``quad_exact`` is
      ``nan`` where ``xi² >= MN``.
    * Monte Carlo runs only for instances with ``mc=True``, using ``n_samples``
      draws and seed ``seed + row index``; otherwise the MC columns are ``nan``.
    * ``gap_*`` columns are relative differences against ``quad_paper``,
      ``ratio_paper_model_vs_exact`` is ``ber_derived / quad_exact``, and
      ``mc_z`` is ``|mc_mean - quad_exact| / mc_stderr``.
    """
    table = CsvTable(REPORT_HEADER)
    nan = math.nan
    for k, inst in enumerate(instances):
        p, g, mod = inst.params, inst.gamma_avg, inst.mod
        derived = ber_closed(mod, g, p)
        if mod.is_dpsk:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", PaperDiscrepancyWarning)
                printed = ber_closed(mod, g, p, DpskForm.AS_PRINTED)
        else:
            printed = derived
        qp = quad_ber(mod, g, p, PdfVariant.PAPER_EQ13, rel_tol=rel_tol)
        if p.xi2 < p.paths_MN:
            qe = quad_ber(mod, g, p, PdfVariant.EXACT, rel_tol=rel_tol)
            quad_exact, quad_exact_err = qe.value, qe.abs_error_estimate
        else:
            quad_exact = quad_exact_err = nan
        mc_mean = mc_stderr = mc_z = nan
        if inst.mc:
            est = mc_ber(mod, g, p, n_samples, seed=seed + k, chunks=chunks)
            mc_mean, mc_stderr = est.mean, est.std_error
            if not math.isnan(quad_exact) and mc_stderr > 0:
                mc_z = abs(mc_mean - quad_exact) / mc_stderr
        table.append(
            (
                mod.label,
                p.paths_MN,
                p.xi2,
                p.A0,
                g,
                printed,
                derived,
                qp.value,
                qp.abs_error_estimate,
                quad_exact,
                quad_exact_err,
                mc_mean,
                mc_stderr,
                _rel(derived, qp.value),
                _rel(printed, qp.value),
                derived / quad_exact if not math.isnan(quad_exact) else nan,
                mc_z,
            )
        )
    return table


GRID_XI2 = (0.5, 1.0, 2.0, 4.0)
GRID_MN = (1, 4, 16, 36)
GRID_GAMMA = (1.0, 10.0, 100.0, 1000.0)
GRID_MODULATIONS = (Modulation.mpsk(2), Modulation.mpsk(4), Modulation.mpsk(8), DPSK)


def acceptance_grid(A0=1.0):
    """Closed-form consistency grid: xi² x MN x gamma_avg x modulation, xi² < MN + 1."""
    out = []
    for mod in GRID_MODULATIONS:
        for mn in GRID_MN:
            for xi2 in GRID_XI2:
                if not xi2 < mn + 1:
                    continue
                for g in GRID_GAMMA:
                    out.append(Instance(mod, g, ChannelParams.from_xi2(mn, xi2, A0)))
    return out


def random_mc_instances(count=10, seed=2024, min_ber=1e-5):
    """Reproducible random instances whose exact-channel BER is at least ``min_ber``."""
    rng = np.random.Generator(np.random.Philox(key=seed))
    out = []
    while len(out) < count:
        mod = GRID_MODULATIONS[int(rng.integers(len(GRID_MODULATIONS)))]
        mn = int(rng.choice((1, 2, 4, 6, 9)))
        xi2 = float(rng.uniform(0.2, min(mn, 4.0) - 0.05))
        A0 = float(rng.uniform(0.4, 1.0))
        g = float(10.0 ** rng.uniform(0.0, 1.5))
        inst = Instance(mod, g, ChannelParams.from_xi2(mn, xi2, A0), mc=True)
        if quad_ber(mod, g, inst.params, PdfVariant.EXACT).value >= min_ber:
            out.append(inst)
    return out


def gate_report(table, tol=1e-8, sigmas=4.0):
    """Per-row pass flags and overall verdict.

    A row passes when its derived closed form is within ``tol`` (relative) of
    the power-law quadrature and, if it carries a Monte Carlo estimate, that
    estimate lies within ``sigmas`` standard errors of the exact quadrature.
    Model-gap columns never gate.
    """
    gap = table.header.index("gap_derived_vs_quad")
    z = table.header.index("mc_z")
    flags = []
    for row in table.rows:
        ok = row[gap] <= tol
        if not math.isnan(row[z]):
            ok = ok and row[z] <= sigmas
        flags.append(ok)
    return flags, all(flags)
