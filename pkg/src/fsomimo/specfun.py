"""Special functions and semi-infinite adaptive quadrature.

The error function family, log-gamma, gamma, digamma and the regularized
incomplete gamma are thin, domain-checked wrappers over ``scipy.special``.
They accept scalars or arrays and raise :class:`DomainError` instead of
returning ``nan``.

:func:`integrate_semi_infinite` is self-contained: it maps ``(0, inf)`` onto
``(0, 1)`` with ``x = s * t / (1 - t)`` and runs globally adaptive bisection,
estimating each panel's error by comparing a 10-point Gauss-Legendre rule on
the panel with the same rule applied to its two halves.
"""

from dataclasses import dataclass
import heapq
import math

import numpy as np
from scipy import special as _sp

from .exceptions import DomainError, QuadratureError

__all__ = [
    "QuadratureResult",
    "erf",
    "erfc",
    "ln_gamma",
    "gamma",
    "digamma",
    "upper_incomplete_gamma",
    "integrate_semi_infinite",
]


def _as_checked(x, name, positive=False):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite, got {x!r}", name)
    if positive and np.any(arr <= 0):
        raise DomainError(f"{name} must be > 0, got {x!r}", name)
    return arr


def _out(values):
    # 0-d arrays come back as plain floats
    return float(values) if np.ndim(values) == 0 else values


def erf(x):
    """Error function; rejects non-finite input."""
    return _out(_sp.erf(_as_checked(x, "x")))


def erfc(x):
    """Complementary error function, ``1 - erf(x)`` without cancellation.

    scipy's erfc evaluates the Gaussian tail directly, so ``erfc(10)`` is
    ~2.1e-45 rather than 0.
    """
    return _out(_sp.erfc(_as_checked(x, "x")))


def ln_gamma(x, name="x"):
    """Natural log of the gamma function for ``x > 0``.

    ``name`` is echoed in the :class:`DomainError` so formula code can report
    which gamma argument went non-positive (e.g. ``"MN - xi^2 + 1"``).
    """
    return _out(_sp.gammaln(_as_checked(x, name, positive=True)))


def gamma(x, name="x"):
    """Gamma function for ``x > 0``; overflows to ``inf`` past ~171.6."""
    return _out(_sp.gamma(_as_checked(x, name, positive=True)))


def digamma(x, name="x"):
    """Logarithmic derivative of the gamma function for ``x > 0``."""
    return _out(_sp.psi(_as_checked(x, name, positive=True)))


def upper_incomplete_gamma(s, x):
    """Non-regularized upper incomplete gamma ``Gamma(s, x)``.

    Parameters
    ----------
    s : float or array_like
        Shape, strictly positive.
    x : float or array_like
        Lower integration limit, ``x >= 0``.
    """
    s_arr = _as_checked(s, "s", positive=True)
    x_arr = _as_checked(x, "x")
    if np.any(x_arr < 0):
        raise DomainError(f"x must be >= 0, got {x!r}", "x")
    q = _sp.gammaincc(s_arr, x_arr)
    # assemble in log space so large shapes do not overflow gamma(s)
    with np.errstate(divide="ignore"):
        out = np.exp(np.log(q) + _sp.gammaln(s_arr))
    return _out(out)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.abs_error_estimate < 0:
            raise ValueError("abs_error_estimate must be >= 0")
        if self.evaluations < 1:
            raise ValueError("evaluations must be >= 1")


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


def integrate_semi_infinite(
    f,
    tol=1e-10,
    *,
    rel_tol=0.0,
    scale=1.0,
    max_evaluations=400_000,
    initial_panels=16,
):
    """Integrate ``f`` over ``(0, inf)``.

    Parameters
    ----------
    f : callable
        Vectorized integrand; receives a 1-d float array of abscissae and
        must return an array of the same shape. It is never evaluated at 0
        or at infinity, so integrable endpoint singularities are fine.
    tol : float
        Absolute tolerance on the returned error estimate.
    rel_tol : float, optional
        Relative tolerance; the loop stops once the estimate is below
        ``max(tol, rel_tol * |value|)``.
    scale : float, optional
        Length scale of the map ``x = scale * t / (1 - t)``. Put it near
        where the integrand's mass lives to save evaluations.
    max_evaluations : int, optional
        Budget of integrand evaluations before :class:`QuadratureError`.

    Returns
    -------
    QuadratureResult
    """
    if not (tol >= 0 and rel_tol >= 0) or (tol == 0 and rel_tol == 0):
        raise ValueError("need tol > 0 or rel_tol > 0")
    if not scale > 0:
        raise ValueError("scale must be > 0")

    evaluations = 0

    def rule(a, b):
        nonlocal evaluations
        half = 0.5 * (b - a)
        t = 0.5 * (a + b) + half * _GL_NODES
        one_minus = 1.0 - t
        x = scale * t / one_minus
        y = np.asarray(f(x), dtype=float) * (scale / (one_minus * one_minus))
        evaluations += t.size
        if not np.all(np.isfinite(y)):
            bad = x[~np.isfinite(y)][0]
            raise ValueError(f"integrand is not finite at x={bad!r}")
        return half * float(np.dot(_GL_WEIGHTS, y))

    def refine(a, b, coarse):
        m = 0.5 * (a + b)
        left, right = rule(a, m), rule(m, b)
        fine = left + right
        return (-abs(fine - coarse), a, b, fine, left, right)

    edges = np.linspace(0.0, 1.0, initial_panels + 1)
    heap = [refine(a, b, rule(a, b)) for a, b in zip(edges[:-1], edges[1:])]
    heapq.heapify(heap)

    while True:
        value = math.fsum(p[3] for p in heap)
        err = math.fsum(-p[0] for p in heap)
        if err <= max(tol, rel_tol * abs(value)):
            return QuadratureResult(value, err, evaluations)
        if evaluations >= max_evaluations:
            raise QuadratureError(
                f"no convergence within {max_evaluations} evaluations "
                f"(value={value!r}, error estimate={err!r})",
                value,
                err,
                evaluations,
            )
        _, a, b, _, left, right = heapq.heappop(heap)
        m = 0.5 * (a + b)
        if not a < m < b:
            raise QuadratureError(
                f"panel at t={a!r} cannot be bisected further "
                f"(value={value!r}, error estimate={err!r})",
                value,
                err,
                evaluations,
            )
        heapq.heappush(heap, refine(a, m, left))
        heapq.heappush(heap, refine(m, b, right))
