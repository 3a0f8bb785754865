"""Beam/aperture/jitter geometry and the pointing-error parameters it induces.

For a Gaussian beam of waist ``w_z`` at the receiver, a circular aperture of
radius ``r`` and radial jitter deviation ``sigma_s``::

    v      = sqrt(pi) * r / (sqrt(2) * w_z)
    A0     = erf(v)**2
    w_zeq² = w_z² * sqrt(pi) * erf(v) / (2 v exp(-v²))
    xi     = w_zeq / (2 sigma_s)

All lengths are meters.

``xi`` is not monotone in ``w_z``. Writing ``w_z = c / v`` with
``c = sqrt(pi/2) r``, ``xi² ∝ erf(v) exp(v²) / v³``, which has a single
minimum at :data:`V_TURN`. Beams wider than ``c / V_TURN`` sit on the "wide"
branch where ``xi`` grows with ``w_z``. Narrower beams sit on the "narrow"
branch where ``xi`` grows as the beam shrinks and the aperture starts to
capture almost all of the power.
"""

from dataclasses import dataclass
import math
import numbers

from scipy import optimize

from . import specfun
from .exceptions import ConvergenceError, DomainError

__all__ = [
    "BeamGeometry",
    "PointingParams",
    "V_TURN",
    "pointing_params",
    "xi_of_beam_width",
    "turning_beam_width",
    "beam_width_for_xi",
]


def _positive(value, name):
    if not (isinstance(value, numbers.Real) and math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be finite and > 0, got {value!r}", name)


@dataclass(frozen=True)
class BeamGeometry:
    """Physical link inputs.

    ``distance_d`` and ``wavelength_lambda`` only enter the link budget.
    """

    aperture_radius_r: float
    beam_waist_wz: float
    jitter_sigma_s: float
    distance_d: float = 1000.0
    wavelength_lambda: float = 1550e-9

    def __post_init__(self):
        for name in (
            "aperture_radius_r",
            "beam_waist_wz",
            "jitter_sigma_s",
            "distance_d",
            "wavelength_lambda",
        ):
            _positive(getattr(self, name), name)


@dataclass(frozen=True)
class PointingParams:
    v: float
    A0: float
    w_zeq: float
    xi: float


def _log_wzeq_sq(wz, v):
    # ln w_zeq² with exp(v²) kept in the exponent
    return (
        2.0 * math.log(wz)
        + math.log(math.sqrt(math.pi) * specfun.erf(v))
        - math.log(2.0 * v)
        + v * v
    )


def pointing_params(geom):
    """Derive ``(v, A0, w_zeq, xi)`` from a :class:`BeamGeometry`."""
    r, wz, sigma_s = geom.aperture_radius_r, geom.beam_waist_wz, geom.jitter_sigma_s
    v = math.sqrt(math.pi) * r / (math.sqrt(2.0) * wz)
    erf_v = specfun.erf(v)
    A0 = erf_v * erf_v
    log_sq = _log_wzeq_sq(wz, v)
    try:
        w_zeq = math.exp(0.5 * log_sq)
        xi = math.exp(0.5 * log_sq - math.log(2.0 * sigma_s))
    except OverflowError:
        w_zeq = xi = math.inf
    if not (math.isfinite(w_zeq) and math.isfinite(xi)) or not 0.0 < A0 or w_zeq <= 0:
        raise DomainError(
            f"v = sqrt(pi) r / (sqrt(2) w_z) = {v:.6g} is too large: the "
            "exp(-v^2) normalization of w_zeq overflows; widen beam_waist_wz",
            "v",
        )
    return PointingParams(v=v, A0=A0, w_zeq=w_zeq, xi=xi)


def xi_of_beam_width(wz, r, sigma_s):
    """Shorthand for ``pointing_params(BeamGeometry(r, wz, sigma_s)).xi``."""
    return pointing_params(BeamGeometry(r, wz, sigma_s)).xi


def _turn_condition(v):
    # d/dv [ln erf(v) + v² - 3 ln v]
    return 2.0 / math.sqrt(math.pi) * math.exp(-v * v) / specfun.erf(v) + 2.0 * v - 3.0 / v


V_TURN = optimize.brentq(_turn_condition, 0.5, 3.0, xtol=1e-15)
"""Value of ``v`` at which ``xi(w_z)`` is minimal for any ``r`` and ``sigma_s``."""


def turning_beam_width(r):
    """Beam width at which ``xi`` is smallest for aperture radius ``r``."""
    return math.sqrt(math.pi / 2.0) * r / V_TURN


def beam_width_for_xi(xi_target, r, sigma_s, bracket, branch="wide", rtol=1e-12):
    """Invert ``xi(w_z)`` on one monotone branch inside ``bracket``.

    Parameters
    ----------
    xi_target : float
        Desired ``xi``.
    r, sigma_s : float
        Aperture radius and jitter deviation (m).
    bracket : tuple of float
        ``(wz_lo, wz_hi)`` search interval in meters.
    branch : {"wide", "narrow"}
        Which side of the turning width :func:`turning_beam_width` to search.
        The bracket is clipped to that side before the sign-change check.

    Returns
    -------
    float
        ``w_z`` with ``|xi(w_z) - xi_target| <= 1e-9 * xi_target``.
    """
    _positive(xi_target, "xi_target")
    _positive(r, "r")
    _positive(sigma_s, "sigma_s")
    lo, hi = (float(b) for b in bracket)
    _positive(lo, "wz_lo")
    _positive(hi, "wz_hi")
    if not lo < hi:
        raise DomainError(f"degenerate bracket ({lo!r}, {hi!r}): need wz_lo < wz_hi", "bracket")
    if branch not in ("wide", "narrow"):
        raise ValueError(f"branch must be 'wide' or 'narrow', got {branch!r}")

    w_turn = turning_beam_width(r)
    if branch == "wide":
        lo = max(lo, w_turn)
    else:
        hi = min(hi, w_turn)
    if not lo < hi:
        raise DomainError(
            f"bracket does not reach the {branch} branch (turning width {w_turn:.6g} m)",
            "bracket",
        )

    def g(wz):
        return xi_of_beam_width(wz, r, sigma_s) - xi_target

    g_lo, g_hi = g(lo), g(hi)
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    if (g_lo > 0) == (g_hi > 0):
        raise DomainError(
            f"xi_target={xi_target!r} is not reached on the {branch} branch within "
            f"[{lo:.6g}, {hi:.6g}] m (xi spans {g_lo + xi_target:.6g} .. "
            f"{g_hi + xi_target:.6g}); widen the bracket",
            "bracket",
        )
    wz, info = optimize.brentq(g, lo, hi, xtol=1e-300, rtol=rtol, full_output=True)
    if not info.converged or abs(g(wz)) > 1e-9 * xi_target:
        raise ConvergenceError(f"beam width inversion did not converge: {info.flag}")
    return wz
