"""Statistics of the combined irradiance ``I = h * I'``.

``h`` is the pointing-error gain on ``[0, A0]`` with CDF ``(h / A0)**xi²``;
``I'`` is the equal-gain sum of ``MN`` independent unit-mean exponential
paths, i.e. Gamma(MN, 1).

Two densities for ``I`` are provided:

``PdfVariant.PAPER_EQ13``
    The published power law ``xi² Γ(MN-xi²+1) / (A0^xi² Γ(MN)) I^(xi²-1)``.
    It is what the closed-form BER and outage expressions integrate against.
    It has no upper cutoff and does not normalize on ``(0, inf)``; treat it
    as a small-``I`` approximation.

``PdfVariant.EXACT``
    The conditioning integral with the Jacobian ``1/I'`` and the support
    constraint ``I' >= I / A0`` kept:
    ``xi² I^(xi²-1) Γ(MN-xi², I/A0) / (A0^xi² Γ(MN))``. Needs ``xi² < MN``.
    It is the law the samplers draw from.

As ``I -> 0`` the ratio power-law/exact tends to ``MN - xi²``.
"""

from dataclasses import dataclass
import enum
import math
import numbers

import numpy as np

from . import specfun
from .exceptions import DomainError

__all__ = [
    "ChannelParams",
    "PdfVariant",
    "pointing_pdf",
    "pointing_cdf",
    "turbulence_pdf",
    "turbulence_mgf",
    "combined_pdf",
    "combined_cdf_paper",
    "sample_pointing",
    "sample_turbulence",
    "draw_irradiance",
]


class PdfVariant(enum.Enum):
    PAPER_EQ13 = "paper"
    EXACT = "exact"


@dataclass(frozen=True)
class ChannelParams:
    """``(MN, xi, A0)``: path count, beam-to-jitter ratio, collected fraction.

    Construction enforces ``xi² < MN + 1`` so every ``Γ(MN - xi² + 1)`` in
    the closed forms has a positive argument.
    """

    paths_MN: int
    xi: float
    A0: float = 1.0

    def __post_init__(self):
        if not isinstance(self.paths_MN, numbers.Integral) or self.paths_MN < 1:
            raise DomainError(f"M*N must be a positive integer, got {self.paths_MN!r}", "MN")
        if not (math.isfinite(self.xi) and self.xi > 0):
            raise DomainError(f"xi must be finite and > 0, got {self.xi!r}", "xi")
        if not (math.isfinite(self.A0) and 0 < self.A0 <= 1):
            raise DomainError(f"A0 must lie in (0, 1], got {self.A0!r}", "A0")
        if not self.xi2 < self.paths_MN + 1:
            raise DomainError(
                f"xi^2 must be < M*N + 1 (xi^2 = {self.xi2:.6g}, M*N = {self.paths_MN})",
                "xi^2",
            )

    @classmethod
    def from_apertures(cls, m, n, xi, A0=1.0):
        """Build from receive count ``m`` and transmit count ``n``."""
        return cls(int(m) * int(n), float(xi), float(A0))

    @classmethod
    def from_xi2(cls, paths_MN, xi2, A0=1.0):
        return cls(paths_MN, math.sqrt(xi2), A0)

    @property
    def xi2(self):
        return self.xi * self.xi

    def require_exact(self):
        """Raise unless the exact-conditioning density is defined."""
        if not self.xi2 < self.paths_MN:
            raise DomainError(
                f"exact conditioning needs xi^2 < M*N (xi^2 = {self.xi2:.6g}, "
                f"M*N = {self.paths_MN})",
                "xi^2",
            )


def _log_power_law_coeff(p):
    # ln[Γ(MN - xi² + 1) / (A0^xi² Γ(MN))]
    return (
        specfun.ln_gamma(p.paths_MN - p.xi2 + 1, "M*N - xi^2 + 1")
        - specfun.ln_gamma(p.paths_MN, "M*N")
        - p.xi2 * math.log(p.A0)
    )


def pointing_pdf(h, p):
    """Density of the pointing gain: ``xi²/A0^xi² h^(xi²-1)`` on ``(0, A0]``."""
    h = np.asarray(h, dtype=float)
    inside = (h > 0) & (h <= p.A0)
    safe = np.where(inside, h, p.A0)
    out = np.where(inside, p.xi2 / p.A0**p.xi2 * safe ** (p.xi2 - 1.0), 0.0)
    return float(out) if out.ndim == 0 else out


def pointing_cdf(h, p):
    h = np.clip(np.asarray(h, dtype=float), 0.0, p.A0)
    out = (h / p.A0) ** p.xi2
    return float(out) if out.ndim == 0 else out


def turbulence_pdf(i, paths_MN):
    """Gamma(MN, 1) density of the aggregate turbulence ``I'``."""
    i = np.asarray(i, dtype=float)
    if np.any(i < 0):
        raise DomainError("irradiance must be >= 0", "i")
    if paths_MN == 1:
        out = np.exp(-i)
    else:
        with np.errstate(divide="ignore"):
            out = np.exp((paths_MN - 1) * np.log(i) - i - specfun.ln_gamma(paths_MN, "M*N"))
    return float(out) if out.ndim == 0 else out


def turbulence_mgf(s, paths_MN):
    """``E[exp(-s I')] = (1 + s)^-MN`` for ``s > -1``."""
    if not s > -1:
        raise DomainError(f"MGF argument must be > -1, got {s!r}", "s")
    return (1.0 / (s + 1.0)) ** paths_MN


def combined_pdf(i, p, variant=PdfVariant.EXACT):
    """Density of ``I = h I'`` under the chosen :class:`PdfVariant`."""
    variant = PdfVariant(variant)
    i = np.asarray(i, dtype=float)
    if np.any(i <= 0):
        raise DomainError("combined pdf is defined for I > 0", "i")
    if variant is PdfVariant.PAPER_EQ13:
        out = np.exp(math.log(p.xi2) + _log_power_law_coeff(p) + (p.xi2 - 1.0) * np.log(i))
    else:
        p.require_exact()
        tail = specfun.upper_incomplete_gamma(p.paths_MN - p.xi2, i / p.A0)
        with np.errstate(divide="ignore"):
            out = np.exp(
                math.log(p.xi2)
                + (p.xi2 - 1.0) * np.log(i)
                + np.log(tail)
                - p.xi2 * math.log(p.A0)
                - specfun.ln_gamma(p.paths_MN, "M*N")
            )
    return float(out) if out.ndim == 0 else out


def combined_cdf_paper(i, p):
    """Published CDF ``Γ(MN-xi²+1)/(A0^xi² Γ(MN)) I^xi²``.

    Not clamped: it exceeds 1 once ``I`` leaves the small-``I`` regime, so
    callers that need a probability must check the range themselves.
    """
    i = np.asarray(i, dtype=float)
    if np.any(i < 0):
        raise DomainError("irradiance must be >= 0", "i")
    with np.errstate(divide="ignore"):
        out = np.exp(_log_power_law_coeff(p) + p.xi2 * np.log(i))
    return float(out) if out.ndim == 0 else out


def sample_pointing(u, p):
    """Inverse-CDF map from uniforms in ``[0, 1]`` to ``h = A0 u^(1/xi²)``."""
    u = np.asarray(u, dtype=float)
    out = p.A0 * u ** (1.0 / p.xi2)
    return float(out) if out.ndim == 0 else out


def sample_turbulence(u):
    """Sum of unit exponentials ``-ln(1 - u)`` over the last axis of ``u``.

    ``u`` has shape ``(..., MN)``; one uniform per path.
    """
    u = np.asarray(u, dtype=float)
    out = -np.log1p(-u).sum(axis=-1)
    return float(out) if out.ndim == 0 else out


def draw_irradiance(rng, p, size):
    """Draw ``size`` samples of ``I = h I'`` from a numpy Generator.

    Uniform consumption order is fixed: ``size`` pointing uniforms, then a
    ``(size, MN)`` block for the turbulence paths.
    """
    u_point = rng.random(size)
    u_turb = rng.random((size, p.paths_MN))
    return sample_pointing(u_point, p) * sample_turbulence(u_turb)
