"""Beam-width optimization: minimize the closed-form BER over ``xi``.

``xi`` mode holds ``A0`` fixed and solves ``d ln BER / d xi = 0`` on
``(eps, sqrt(MN + 1) - eps)``:

* M-PSK with one constellation term (BPSK, QPSK)::

      xi * [-2 psi(MN - xi² + 1) + psi((xi² + 1)/2) - ln(A0² a² gamma_avg / 2)]

  The published stationarity condition is the bracket alone. The outer
  ``xi`` factor does not move the root.
* M-PSK with several terms: softmax-weighted sum of the per-term slopes.
* DPSK (re-derived form)::

      2/xi + xi * [-2 psi(MN - xi² + 1) + psi(xi²/2) - ln(A0² gamma_avg)]

The root is bracketed on a 64-point log-spaced grid and then refined by
:func:`find_root`. If no minimizing sign change is found, golden-section
search on ``ln BER`` runs over the whole interval instead.

Beam mode (:func:`optimize_beam_width`) works on the physical beam width.
Both ``xi`` and ``A0`` move with ``w_z`` through the geometry map.
"""

from dataclasses import dataclass
import enum
import math

import numpy as np

from . import specfun
from .channel import ChannelParams
from .exceptions import ConvergenceError, DomainError
from .geometry import BeamGeometry, pointing_params
from .performance import (
    DpskForm,
    _gamma_avg,
    ber_closed,
    log_ber_closed,
    mpsk_params,
)

__all__ = [
    "Method",
    "OptimizationResult",
    "BeamOptimizationResult",
    "FEASIBILITY_MARGIN",
    "dlog_ber_dxi",
    "published_stationarity",
    "find_root",
    "golden_section",
    "feasible_interval",
    "optimize_xi",
    "optimize_beam_width",
]

FEASIBILITY_MARGIN = 1e-4
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class Method(enum.Enum):
    STATIONARITY_ROOT = "StationarityRoot"
    GOLDEN_SECTION = "GoldenSection"


@dataclass(frozen=True)
class OptimizationResult:
    xi_star: float
    ber_at_optimum: float
    method: Method
    derivative_residual: float
    iterations: int


@dataclass(frozen=True)
class BeamOptimizationResult:
    wz_star: float
    xi_star: float
    A0_at_star: float
    ber: float
    iterations: int
    at_boundary: bool


def _check_xi(xi, paths_MN):
    if not (math.isfinite(xi) and xi > 0):
        raise DomainError(f"xi must be finite and > 0, got {xi!r}", "xi")
    if not xi * xi < paths_MN + 1:
        raise DomainError(
            f"xi^2 must be < M*N + 1 (xi^2 = {xi * xi:.6g}, M*N = {paths_MN})", "xi^2"
        )


def dlog_ber_dxi(mod, xi, snr, paths_MN, A0=1.0, dpsk_form=DpskForm.DERIVED_EXACT):
    """Analytic ``d ln BER / d xi`` of the closed form at fixed ``A0``."""
    _check_xi(xi, paths_MN)
    g = _gamma_avg(snr)
    xi2 = xi * xi
    psi_n = specfun.digamma(paths_MN - xi2 + 1.0, "M*N - xi^2 + 1")
    if mod.is_dpsk:
        form = DpskForm(dpsk_form)
        log_coeff = 1.0 if form is DpskForm.DERIVED_EXACT else 0.5
        return 2.0 / xi + xi * (
            -2.0 * psi_n + specfun.digamma(xi2 / 2.0) - log_coeff * math.log(A0 * A0 * g)
        )
    mp = mpsk_params(mod.order)
    logs = np.array([math.log(2.0 / (A0 * A0 * a * a * g)) for a in mp.a])
    weights = np.exp(0.5 * xi2 * (logs - logs.max()))
    weights /= weights.sum()
    return xi * (-2.0 * psi_n + specfun.digamma((xi2 + 1.0) / 2.0) + float(weights @ logs))


def published_stationarity(mod, xi, snr, paths_MN, A0=1.0):
    """The stationarity expressions as originally published, for comparison.

    M-PSK returns ``-2 psi(MN-xi²+1) + psi((xi²+1)/2) - ln(A0² a_1² gamma_avg/2)``.
    DPSK returns ``xi²(½ psi(xi²/2) - psi(MN-xi²+1)) - ½ ln(sqrt2 P_T rho A0/sigma_n) + 1``
    with ``P_T rho / sigma_n = sqrt(gamma_avg / 2)``. Its root does not, in
    general, coincide with the minimizer of either DPSK form.
    """
    _check_xi(xi, paths_MN)
    g = _gamma_avg(snr)
    xi2 = xi * xi
    psi_n = specfun.digamma(paths_MN - xi2 + 1.0, "M*N - xi^2 + 1")
    if mod.is_dpsk:
        return xi2 * (0.5 * specfun.digamma(xi2 / 2.0) - psi_n) - 0.5 * math.log(
            math.sqrt(g) * A0
        ) + 1.0
    a1 = mpsk_params(mod.order).a[0]
    return -2.0 * psi_n + specfun.digamma((xi2 + 1.0) / 2.0) - math.log(A0 * A0 * a1 * a1 * g / 2.0)


def find_root(f, a, b, fa=None, fb=None, xtol=1e-13, ftol=1e-13, maxiter=200):
    """Bracketed root by Illinois-modified secant with a bisection safeguard.

    A bisection step is forced whenever three consecutive secant steps fail
    to halve the bracket. Returns ``(root, iterations)``.
    """
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    if fa == 0.0:
        return a, 0
    if fb == 0.0:
        return b, 0
    if (fa > 0) == (fb > 0):
        raise ConvergenceError("find_root needs a sign change on [a, b]")
    width_ref = abs(b - a)
    stalled = 0
    for it in range(1, maxiter + 1):
        if stalled >= 3:
            c = 0.5 * (a + b)
            stalled = 0
        else:
            c = (a * fb - b * fa) / (fb - fa)
            if not min(a, b) < c < max(a, b):
                c = 0.5 * (a + b)
        fc = f(c)
        if fc == 0.0 or abs(fc) <= ftol:
            return c, it
        if (fc > 0) == (fb > 0):
            # c replaces b on the same side; Illinois halves the stale end
            fa *= 0.5
        else:
            a, fa = b, fb
        b, fb = c, fc
        width = abs(b - a)
        if width <= xtol:
            return (a if abs(fa) < abs(fb) else b), it
        if width <= 0.5 * width_ref:
            width_ref = width
            stalled = 0
        else:
            stalled += 1
    raise ConvergenceError(f"find_root: no convergence in {maxiter} iterations")


def golden_section(f, a, b, xtol):
    """Minimize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x), iterations)``."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while b - a > xtol:
        it += 1
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
        if not (math.isfinite(fc) and math.isfinite(fd)):
            raise ConvergenceError("objective is not finite inside the interval")
    return (c, fc, it) if fc <= fd else (d, fd, it)


def feasible_interval(paths_MN, eps=FEASIBILITY_MARGIN):
    lo, hi = eps, math.sqrt(paths_MN + 1.0) - eps
    if not lo < hi:
        raise DomainError(f"feasible xi interval ({lo}, {hi}) is empty", "xi")
    return lo, hi


def optimize_xi(
    mod,
    snr,
    paths_MN,
    A0=1.0,
    method="auto",
    dpsk_form=DpskForm.DERIVED_EXACT,
    tol=1e-9,
    eps=FEASIBILITY_MARGIN,
    grid_points=64,
):
    """BER-minimizing ``xi`` at fixed ``A0``.

    Parameters
    ----------
    method : {"auto", "root", "golden"}
        ``"auto"`` tries the stationarity root and falls back to golden
        section; ``"root"`` raises instead of falling back.
    tol : float
        Bound on the returned derivative residual (root) and on the golden
        section bracket width.
    """
    if method not in ("auto", "root", "golden"):
        raise ValueError(f"unknown method {method!r}")
    if not 0 < A0 <= 1:
        raise DomainError(f"A0 must lie in (0, 1], got {A0!r}", "A0")
    g = _gamma_avg(snr)
    lo, hi = feasible_interval(paths_MN, eps)

    def log_ber(xi):
        return log_ber_closed(mod, g, ChannelParams(paths_MN, xi, A0), dpsk_form)

    def deriv(xi):
        return dlog_ber_dxi(mod, xi, g, paths_MN, A0, dpsk_form)

    if method != "golden":
        grid = np.geomspace(lo, hi, grid_points)
        slopes = [deriv(x) for x in grid]
        if not all(math.isfinite(s) for s in slopes):
            raise ConvergenceError("d ln BER / d xi is not finite inside the interval")
        candidates = []
        evals = grid_points
        for k in range(grid_points - 1):
            if slopes[k] < 0.0 <= slopes[k + 1]:
                root, it = find_root(deriv, grid[k], grid[k + 1], slopes[k], slopes[k + 1])
                candidates.append((log_ber(root), root))
                evals += it
        if candidates:
            best_log, xi_star = min(candidates)
            residual = abs(deriv(xi_star))
            if best_log < log_ber(lo) and best_log < log_ber(hi) and residual <= tol:
                return OptimizationResult(
                    xi_star=float(xi_star),
                    ber_at_optimum=math.exp(best_log),
                    method=Method.STATIONARITY_ROOT,
                    derivative_residual=float(residual),
                    iterations=evals,
                )
        if method == "root":
            raise ConvergenceError(
                "no interior stationary minimum of ln BER on the feasible interval"
            )

    xi_star, best_log, it = golden_section(log_ber, lo, hi, tol)
    return OptimizationResult(
        xi_star=float(xi_star),
        ber_at_optimum=math.exp(best_log),
        method=Method.GOLDEN_SECTION,
        derivative_residual=float(abs(deriv(xi_star))),
        iterations=it,
    )


def optimize_beam_width(
    mod,
    snr,
    paths_MN,
    r,
    sigma_s,
    wz_bracket,
    dpsk_form=DpskForm.DERIVED_EXACT,
    samples=257,
    rtol=1e-8,
):
    """Minimize the closed-form BER over the physical beam width ``w_z``.

    Every one of ``samples`` evenly spaced widths in the bracket must map to
    ``xi² < MN + 1``. The best sample seeds a golden-section search on its
    two neighbouring cells, run to ``|dw| <= rtol * (hi - lo)``.
    ``at_boundary`` is set when the optimum sits on a bracket end.
    """
    lo, hi = (float(x) for x in wz_bracket)
    if not (0 < lo < hi and math.isfinite(hi)):
        raise DomainError(
            f"beam width bracket must satisfy 0 < lo < hi, got {wz_bracket!r}", "bracket"
        )
    g = _gamma_avg(snr)

    def channel(wz):
        pp = pointing_params(BeamGeometry(r, wz, sigma_s))
        if not pp.xi**2 < paths_MN + 1:
            raise DomainError(
                f"xi^2 must be < M*N + 1 across the bracket: w_z = {wz:.6g} m gives "
                f"xi^2 = {pp.xi**2:.6g} (M*N = {paths_MN})",
                "xi^2",
            )
        return ChannelParams(paths_MN, pp.xi, min(pp.A0, 1.0))

    def objective(wz):
        return log_ber_closed(mod, g, channel(wz), dpsk_form)

    grid = np.linspace(lo, hi, samples)
    values = [objective(w) for w in grid]
    if not all(math.isfinite(v) for v in values):
        raise ConvergenceError("ln BER is not finite inside the bracket")
    k = int(np.argmin(values))
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, samples - 1)]
    xtol = rtol * (hi - lo)
    wz_star, best, it = golden_section(objective, a, b, xtol)
    for edge, val in ((lo, values[0]), (hi, values[-1])):
        if val <= best:
            wz_star, best = edge, val
    p = channel(wz_star)
    return BeamOptimizationResult(
        wz_star=float(wz_star),
        xi_star=p.xi,
        A0_at_star=p.A0,
        ber=ber_closed(mod, g, p, dpsk_form),
        iterations=it + samples,
        at_boundary=bool(min(wz_star - lo, hi - wz_star) <= 2 * xtol),
    )
