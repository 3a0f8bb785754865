"""SNR, link budget, outage probability and BER closed forms.

Everything here is expressed in terms of the electrical average SNR
``gamma_avg = 2 (P_T rho / sigma_n)²``. The instantaneous SNR at irradiance
``I`` is ``gamma_avg * I²``. The physical chain ``LinkBudget -> gamma_avg``
is a separate explicit step (:func:`snr_from_link_budget`).

Closed forms average the conditional BER against the power-law density
``PdfVariant.PAPER_EQ13``:

* M-PSK::

      sum_p zeta/(2 sqrt(pi)) Γ(MN-xi²+1) Γ((xi²+1)/2) / Γ(MN)
            * (2 / (A0² a_p² gamma_avg))**(xi²/2)

* DPSK. The published expression (``DpskForm.AS_PRINTED``) uses ``2 sqrt 2``
  and exponent ``xi²/4``. Integrating ``½ exp(-gamma_avg I²)`` against the
  same density gives ``DpskForm.DERIVED_EXACT``::

      xi² Γ(MN-xi²+1) Γ(xi²/2) / (4 Γ(MN)) * (A0² gamma_avg)**(-xi²/2)

  ``DERIVED_EXACT`` is the default everywhere.
"""

from dataclasses import dataclass, field
import enum
import math
import numbers
import warnings

import numpy as np

from . import specfun
from .channel import combined_cdf_paper
from .exceptions import DomainError, ModelRangeWarning, PaperDiscrepancyWarning

__all__ = [
    "ELECTRON_CHARGE",
    "PLANCK",
    "SPEED_OF_LIGHT",
    "SnrSpec",
    "Modulation",
    "BPSK",
    "QPSK",
    "PSK8",
    "DPSK",
    "MpskParams",
    "DpskForm",
    "Provenance",
    "BerEstimate",
    "LinkBudget",
    "received_power",
    "responsivity",
    "photocurrent",
    "snr_from_link_budget",
    "outage_probability",
    "mpsk_params",
    "ber_conditional",
    "ber_mpsk_closed",
    "ber_dpsk_closed",
    "ber_closed",
    "log_ber_closed",
]

ELECTRON_CHARGE = 1.602176634e-19  # C
PLANCK = 6.626069e-34  # J s, the 7-digit value the model was published with
SPEED_OF_LIGHT = 2.99792458e8  # m/s


@dataclass(frozen=True)
class SnrSpec:
    """Electrical average SNR as a linear power ratio."""

    gamma_avg: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma_avg) and self.gamma_avg > 0):
            raise DomainError(
                f"gamma_avg must be finite and > 0, got {self.gamma_avg!r}", "gamma_avg"
            )

    @classmethod
    def from_db(cls, snr_db):
        return cls(10.0 ** (snr_db / 10.0))

    @classmethod
    def from_components(cls, P_T, rho, sigma_n):
        """``2 (P_T rho / sigma_n)²`` from optical power, responsivity, noise std."""
        for name, val in (("P_T", P_T), ("rho", rho), ("sigma_n", sigma_n)):
            if not val > 0:
                raise DomainError(f"{name} must be > 0, got {val!r}", name)
        return cls(2.0 * (P_T * rho / sigma_n) ** 2)

    @property
    def db(self):
        return 10.0 * math.log10(self.gamma_avg)


def _gamma_avg(snr):
    if isinstance(snr, SnrSpec):
        return snr.gamma_avg
    return SnrSpec(float(snr)).gamma_avg


@dataclass(frozen=True)
class Modulation:
    """Either M-PSK of order ``order`` (a power of two) or binary DPSK."""

    kind: str
    order: int = 2

    def __post_init__(self):
        if self.kind not in ("mpsk", "dpsk"):
            raise ValueError(f"unknown modulation kind {self.kind!r}")
        if self.kind == "mpsk":
            M = self.order
            if not isinstance(M, numbers.Integral) or M < 2 or M & (M - 1):
                raise DomainError(f"MPSK order must be a power of two >= 2, got {M!r}", "M")

    @classmethod
    def mpsk(cls, M):
        return cls("mpsk", M)

    @classmethod
    def dpsk(cls):
        return cls("dpsk", 2)

    @classmethod
    def parse(cls, name):
        """``'bpsk' | 'qpsk' | '8psk' | '<M>psk' | 'dpsk'``."""
        key = name.strip().lower()
        if key == "dpsk" or key == "dbpsk":
            return DPSK
        aliases = {"bpsk": 2, "qpsk": 4}
        if key in aliases:
            return cls.mpsk(aliases[key])
        if key.endswith("psk") and key[:-3].isdigit():
            return cls.mpsk(int(key[:-3]))
        raise ValueError(f"unknown modulation {name!r}")

    @property
    def is_dpsk(self):
        return self.kind == "dpsk"

    @property
    def label(self):
        if self.is_dpsk:
            return "dpsk"
        return {2: "bpsk", 4: "qpsk"}.get(self.order, f"{self.order}psk")


BPSK = Modulation("mpsk", 2)
QPSK = Modulation("mpsk", 4)
PSK8 = Modulation("mpsk", 8)
DPSK = Modulation("dpsk", 2)


@dataclass(frozen=True)
class MpskParams:
    zeta: float
    tau: int
    a: tuple


def mpsk_params(M):
    """``zeta = 2/max(log2 M, 2)``, ``tau = max(M/4, 1)``, ``a_p = sqrt2 sin((2p-1)pi/M)``."""
    Modulation.mpsk(M)  # validates M
    zeta = 2.0 / max(math.log2(M), 2.0)
    tau = max(M // 4, 1)
    a = tuple(math.sqrt(2.0) * math.sin((2 * p - 1) * math.pi / M) for p in range(1, tau + 1))
    return MpskParams(zeta=zeta, tau=tau, a=a)


class DpskForm(enum.Enum):
    AS_PRINTED = "printed"
    DERIVED_EXACT = "derived"


class Provenance(enum.Enum):
    CLOSED_FORM_PAPER = "closed-form-paper"
    CLOSED_FORM_DERIVED = "closed-form-derived"
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class BerEstimate:
    """A BER value tagged with how it was obtained.

    ``std_error`` is the Monte Carlo standard error, or the quadrature error
    estimate; 0 for closed forms.
    """

    value: float
    provenance: Provenance
    std_error: float = 0.0
    note: str = field(default="", compare=False)


@dataclass(frozen=True)
class LinkBudget:
    """Deterministic factors of the received-power product.

    ``P_b_background`` and ``I_d_dark`` are carried for completeness; the
    receiver is assumed to compensate both, so they never reach the
    photocurrent.
    """

    P_T: float
    G_T: float = 1.0
    G_R: float = 1.0
    eta_T: float = 1.0
    eta_R: float = 1.0
    L_A: float = 1.0
    L_T: float = 1.0
    eta_q: float = 1.0
    P_b_background: float = 0.0
    I_d_dark: float = 0.0

    def __post_init__(self):
        for name in ("P_T", "G_T", "G_R"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be > 0", name)
        for name in ("eta_T", "eta_R", "L_A", "L_T", "eta_q"):
            if not 0 < getattr(self, name) <= 1:
                raise DomainError(f"{name} must lie in (0, 1]", name)
        for name in ("P_b_background", "I_d_dark"):
            if not getattr(self, name) >= 0:
                raise DomainError(f"{name} must be >= 0", name)


def received_power(lb, geom, h, I_prime, simplified=False):
    """Received optical power in watts.

    Full mode multiplies ``P_T h I'`` by the efficiencies, gains, losses and
    the free-space factor ``(lambda / (4 pi d))²``. ``simplified=True`` keeps
    only ``P_T h I'``.
    """
    power = lb.P_T * np.asarray(h, dtype=float) * np.asarray(I_prime, dtype=float)
    if not simplified:
        free_space = (geom.wavelength_lambda / (4.0 * math.pi * geom.distance_d)) ** 2
        power = power * lb.eta_T * lb.eta_R * free_space * lb.G_T * lb.G_R * lb.L_A * lb.L_T
    return float(power) if np.ndim(power) == 0 else power


def responsivity(eta_q, wavelength):
    """Detector responsivity ``eta_q q lambda / (h0 c)`` in A/W."""
    if not 0 < eta_q <= 1:
        raise DomainError(f"quantum efficiency must lie in (0, 1], got {eta_q!r}", "eta_q")
    if not wavelength > 0:
        raise DomainError(f"wavelength must be > 0, got {wavelength!r}", "wavelength")
    return eta_q * ELECTRON_CHARGE * wavelength / (PLANCK * SPEED_OF_LIGHT)


def photocurrent(lb, geom, h, I_prime, noise=0.0, simplified=False):
    """Detector current ``rho P_R + n`` after background/dark compensation."""
    rho = responsivity(lb.eta_q, geom.wavelength_lambda)
    return rho * received_power(lb, geom, h, I_prime, simplified) + noise


def snr_from_link_budget(lb, geom, sigma_n, simplified=True):
    """Average electrical SNR for a link budget and receiver noise std ``sigma_n`` (A).

    The deterministic power factor (everything except ``h`` and ``I'``) takes
    the place of ``P_T`` in ``2 (P_T rho / sigma_n)²``.
    """
    rho = responsivity(lb.eta_q, geom.wavelength_lambda)
    p_eff = received_power(lb, geom, 1.0, 1.0, simplified)
    return SnrSpec.from_components(p_eff, rho, sigma_n)


def outage_probability(gamma_th, snr, p):
    """``P(gamma_avg I² <= gamma_th)`` under the published power-law CDF.

    Equals ``combined_cdf_paper(sqrt(gamma_th / gamma_avg), p)``. Values above
    1 are returned unchanged with a :class:`ModelRangeWarning`.
    """
    if not gamma_th > 0:
        raise DomainError(f"gamma_th must be > 0, got {gamma_th!r}", "gamma_th")
    value = combined_cdf_paper(math.sqrt(gamma_th / _gamma_avg(snr)), p)
    if value > 1.0:
        warnings.warn(
            f"outage closed form is {value:.6g} > 1: threshold lies outside the "
            "range where the power-law CDF is a probability",
            ModelRangeWarning,
            stacklevel=2,
        )
    return value


def ber_conditional(mod, I, snr):
    """BER conditioned on irradiance ``I`` (scalar or array)."""
    g = _gamma_avg(snr)
    I = np.asarray(I, dtype=float)
    if np.any(I < 0):
        raise DomainError("irradiance must be >= 0", "I")
    if mod.is_dpsk:
        out = 0.5 * np.exp(-g * I * I)
    else:
        mp = mpsk_params(mod.order)
        k = math.sqrt(g / 2.0)
        out = 0.5 * mp.zeta * sum(specfun.erfc(a * k * I) for a in mp.a)
    return float(out) if np.ndim(out) == 0 else out


def _log_gamma_ratio(p):
    # ln Γ(MN - xi² + 1) - ln Γ(MN)
    return specfun.ln_gamma(p.paths_MN - p.xi2 + 1, "M*N - xi^2 + 1") - specfun.ln_gamma(
        p.paths_MN, "M*N"
    )


def _mpsk_log_terms(mp, g, p):
    base = (
        math.log(mp.zeta / (2.0 * math.sqrt(math.pi)))
        + _log_gamma_ratio(p)
        + specfun.ln_gamma((p.xi2 + 1.0) / 2.0)
    )
    return [base + 0.5 * p.xi2 * math.log(2.0 / (p.A0**2 * a * a * g)) for a in mp.a]


def ber_mpsk_closed(M, snr, p):
    """Average M-PSK BER against the power-law density."""
    terms = _mpsk_log_terms(mpsk_params(M), _gamma_avg(snr), p)
    return math.fsum(math.exp(t) for t in terms)


def _dpsk_log(g, p, form):
    common = math.log(p.xi2) + _log_gamma_ratio(p) + specfun.ln_gamma(p.xi2 / 2.0)
    if form is DpskForm.DERIVED_EXACT:
        return common - math.log(4.0) - 0.5 * p.xi2 * math.log(p.A0**2 * g)
    return common - math.log(2.0 * math.sqrt(2.0)) - 0.25 * p.xi2 * math.log(p.A0**2 * g)


def ber_dpsk_closed(snr, p, form=DpskForm.DERIVED_EXACT):
    """Average DPSK BER against the power-law density.

    ``form=DpskForm.AS_PRINTED`` returns the published expression and warns
    with :class:`PaperDiscrepancyWarning` whenever it departs from the
    re-derived value by more than 1e-6 relative.
    """
    form = DpskForm(form)
    g = _gamma_avg(snr)
    value = math.exp(_dpsk_log(g, p, form))
    if form is DpskForm.AS_PRINTED:
        exact = math.exp(_dpsk_log(g, p, DpskForm.DERIVED_EXACT))
        rel = abs(value - exact) / exact
        if rel > 1e-6:
            warnings.warn(
                f"printed DPSK form gives {value:.6g}, re-derived integral gives "
                f"{exact:.6g} (relative gap {rel:.3g})",
                PaperDiscrepancyWarning,
                stacklevel=2,
            )
    return value


def ber_closed(mod, snr, p, dpsk_form=DpskForm.DERIVED_EXACT):
    """Dispatch to :func:`ber_mpsk_closed` or :func:`ber_dpsk_closed`."""
    if mod.is_dpsk:
        return ber_dpsk_closed(snr, p, dpsk_form)
    return ber_mpsk_closed(mod.order, snr, p)


def log_ber_closed(mod, snr, p, dpsk_form=DpskForm.DERIVED_EXACT):
    """Natural log of :func:`ber_closed`, evaluated without leaving log space."""
    g = _gamma_avg(snr)
    if mod.is_dpsk:
        return _dpsk_log(g, p, DpskForm(dpsk_form))
    terms = _mpsk_log_terms(mpsk_params(mod.order), g, p)
    top = max(terms)
    return top + math.log(math.fsum(math.exp(t - top) for t in terms))
