"""Analytic limit laws of the (distorted) waiting-time processes.

For ``0 < alpha < 1`` and ``c = sin(pi alpha) / pi`` the densities are

    phi     c / (x (x-1)^alpha)                                   x > 1
    eta     c (1 - max(1-x, 0)^alpha) / x^(1+alpha)               x > 0
    lambda  c/(1-alpha) (1 - max(1 - x^(1/(1-alpha)), 0)^alpha) / x^(1/(1-alpha))
    gamma   c/alpha (1 - max(1 - x^(-1/alpha), 0)^alpha)
    delta   c/(1-alpha) / (1 + x^(1/(1-alpha)))
    theta   c/alpha / (1 - x^(1/alpha))^alpha                     0 < x < 1

with ``lambda = eta^(1-alpha)``, ``gamma = eta^(-alpha)``,
``delta = (phi-1)^(1-alpha)`` and ``theta = phi^(-alpha)`` in distribution.
(The lambda law is also written zeta, and theta also chi, in the
literature; they are the same laws.)

``cdf`` integrates the phi and eta densities by adaptive quadrature after a
substitution that removes the endpoint singularity, and derives the four
distorted laws through the power identities above. ``cdf_direct``
integrates each density as written, which serves as the independent check.

At ``alpha`` in {0, 1} the laws degenerate: see :func:`limit_law`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

__all__ = [
    "LimitLaw",
    "limit_law",
    "uniform01",
    "pdf",
    "cdf",
    "cdf_direct",
    "total_mass",
    "tabulate",
    "ld_rate_H",
    "ld_rate_joint",
    "QuadratureError",
    "PARAMETRIC_KINDS",
]

PARAMETRIC_KINDS = ("phi", "eta", "lambda", "gamma", "delta", "theta")
_KINDS = PARAMETRIC_KINDS + ("uniform01", "pointmass")

_TOL = 1e-9  # fixed: backs the analytic acceptance checks
_DIRECT_TOL = 1e-9


class QuadratureError(ArithmeticError):
    pass


@dataclass(frozen=True)
class LimitLaw:
    kind: str
    alpha: float | None = None
    point: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown law {self.kind!r}")
        if self.kind in PARAMETRIC_KINDS:
            if self.alpha is None or not 0 < self.alpha < 1:
                raise ValueError(f"{self.kind} needs 0 < alpha < 1; use limit_law() for the boundary")
        if self.kind == "pointmass" and self.point is None:
            raise ValueError("pointmass needs a point (may be math.inf)")

    @property
    def support(self) -> tuple[float, float]:
        return {
            "phi": (1.0, math.inf),
            "theta": (0.0, 1.0),
            "uniform01": (0.0, 1.0),
        }.get(self.kind, (0.0, math.inf))

    def pdf(self, x):
        return pdf(self, x)

    def cdf(self, x):
        return cdf(self, x)


uniform01 = LimitLaw("uniform01")

# degenerate members at the ends of the parameter range
_BOUNDARY = {
    ("phi", 0): math.inf, ("phi", 1): 1.0,
    ("eta", 0): math.inf, ("eta", 1): 0.0,
    ("lambda", 0): math.inf, ("lambda", 1): "uniform",
    ("gamma", 0): "uniform", ("gamma", 1): math.inf,
    ("delta", 0): math.inf, ("delta", 1): "uniform",
    ("theta", 0): "uniform", ("theta", 1): 1.0,
}


def limit_law(kind: str, alpha: float) -> LimitLaw:
    """The limit of the named process for wandering exponent ``1 - alpha``.

    ``alpha`` in (0, 1) gives the parametric law. At ``alpha`` 0 or 1 the
    result is a point mass, or the uniform law on [0, 1] in the critical
    cases (lambda and delta at 1, gamma and theta at 0).
    """
    if 0 < alpha < 1:
        return LimitLaw(kind, float(alpha))
    key = (kind, int(alpha)) if alpha in (0, 1) else None
    if key not in _BOUNDARY:
        raise ValueError(f"alpha must lie in [0, 1] for {kind!r}, got {alpha}")
    v = _BOUNDARY[key]
    if v == "uniform":
        return uniform01
    return LimitLaw("pointmass", point=v)


def _c(alpha):
    return math.sin(math.pi * alpha) / math.pi


def _one_minus_pow(y, alpha):
    # 1 - (1 - y)^alpha without cancellation for small y
    return -math.expm1(alpha * math.log1p(-y))


def _pdf_scalar(law: LimitLaw, x: float) -> float:
    k, a = law.kind, law.alpha
    if k == "uniform01":
        return 1.0 if 0 <= x <= 1 else 0.0
    if k == "pointmass":
        raise ValueError("a point mass has no density")
    c = _c(a)
    if k == "phi":
        if x < 1:
            return 0.0
        if x == 1:
            return math.inf
        return c / (x * (x - 1) ** a)
    if k == "theta":
        if x <= 0 or x > 1:
            return 0.0
        if x == 1:
            return math.inf
        return c / a / (1 - x ** (1 / a)) ** a
    if x < 0:
        return 0.0
    if k == "eta":
        if x == 0:
            return math.inf
        num = _one_minus_pow(x, a) if x < 1 else 1.0
        return c * num / x ** (1 + a)
    if k == "lambda":
        p = 1 / (1 - a)
        if x == 0:
            return c * p * a
        y = x ** p
        num = _one_minus_pow(y, a) if y < 1 else 1.0
        return c * p * num / y
    if k == "gamma":
        if x <= 1:
            return c / a
        return c / a * _one_minus_pow(x ** (-1 / a), a)
    if k == "delta":
        return c / (1 - a) / (1 + x ** (1 / (1 - a)))
    raise AssertionError(k)


def pdf(law: LimitLaw, x):
    """Density of ``law`` at ``x``; 0 off the support, inf at singular endpoints."""
    if np.ndim(x) == 0:
        return _pdf_scalar(law, float(x))
    return np.vectorize(lambda v: _pdf_scalar(law, float(v)), otypes=[float])(x)


def _quad(f, a, b, tol=_TOL):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(f, a, b, epsabs=tol * 1e-2, epsrel=tol * 1e-2, limit=500)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(str(exc)) from None
    if err > tol:
        raise QuadratureError(f"quadrature error estimate {err:.2e} exceeds {tol:.0e}")
    return val


def _phi_excess(e, a):
    """``P(phi <= 1 + e)``; taking the excess keeps tiny ``e`` from rounding away."""
    if e <= 0:
        return 0.0
    if math.isinf(e):
        return 1.0
    c = _c(a)
    if e <= 1:
        # t = e^(1-alpha) absorbs the singularity at 1
        p = 1 / (1 - a)
        return c * p * _quad(lambda t: 1 / (1 + t ** p), 0.0, e ** (1 - a))
    # tail through s = x^(-alpha): smooth on [0, 2^-alpha]
    tail = c / a * _quad(lambda s: (1 - s ** (1 / a)) ** (-a), 0.0, (1 + e) ** (-a))
    return 1.0 - tail


def _eta_below_one(t, a):
    """``P(eta <= t^(1/(1-alpha)))`` for ``0 <= t <= 1``."""
    if t <= 0:
        return 0.0
    c = _c(a)
    p = 1 / (1 - a)

    def g(u):
        if u == 0:
            return a
        y = u ** p
        return _one_minus_pow(y, a) / y

    # t = x^(1-alpha) absorbs the x^-alpha singularity at 0
    return c * p * _quad(g, 0.0, t)


def _eta_tail(x, a):
    # closed form on [1, inf)
    return 1.0 - _c(a) / a * x ** (-a)


def _cdf_scalar(law: LimitLaw, x: float) -> float:
    k, a = law.kind, law.alpha
    if math.isnan(x):
        return math.nan
    if k == "uniform01":
        return min(max(x, 0.0), 1.0)
    if k == "pointmass":
        return 1.0 if x >= law.point else 0.0
    if k == "phi":
        return _phi_excess(x - 1.0, a)
    if x <= 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    p = 1 / (1 - a)
    if k == "eta":
        return _eta_below_one(x ** (1 - a), a) if x < 1 else _eta_tail(x, a)
    if k == "lambda":
        # F_eta(x^p); the eta substitution variable is x itself
        return _eta_below_one(x, a) if x < 1 else _eta_tail(x ** p, a)
    if k == "gamma":
        # 1 - F_eta(x^(-1/alpha))
        if x <= 1:
            return _c(a) / a * x
        return 1.0 - _eta_below_one(x ** (-(1 - a) / a), a)
    if k == "delta":
        # F_phi(1 + x^p); below 1 the substitution variable is x itself
        if x <= 1:
            return _c(a) * p * _quad(lambda t: 1 / (1 + t ** p), 0.0, x)
        return _phi_excess(x ** p, a)
    if k == "theta":
        # 1 - F_phi(x^(-1/alpha))
        if x >= 1:
            return 1.0
        return 1.0 - _phi_excess(math.expm1(-math.log(x) / a), a)
    raise AssertionError(k)


def cdf(law: LimitLaw, x):
    """Distribution function ``P(law <= x)`` (the laws are atomless)."""
    if np.ndim(x) == 0:
        return _cdf_scalar(law, float(x))
    return np.vectorize(lambda v: _cdf_scalar(law, float(v)), otypes=[float])(x)


def _quad_weighted(g, a, b, wvar, tol):
    # QAWS: integrates g(t) (t-a)^wvar[0] (b-t)^wvar[1]
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(g, a, b, weight="alg", wvar=wvar,
                                      epsabs=tol * 1e-2, epsrel=tol * 1e-2, limit=500)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(str(exc)) from None
    if err > tol:
        raise QuadratureError(f"quadrature error estimate {err:.2e} exceeds {tol:.0e}")
    return val


# endpoint singularity of each density: (location, side)
_SINGULAR = {"phi": (1.0, "left"), "eta": (0.0, "left"), "theta": (1.0, "right")}


def _integrate_density(law: LimitLaw, lo: float, hi: float) -> float:
    """Integral of the density over [lo, hi] split at 1 and 2.

    A piece touching the singular endpoint of phi, eta or theta is handed
    to the algebraic-weight rule with the singular power factored out;
    everything else is plain adaptive quadrature of the formula.
    """
    a = law.alpha
    f = lambda v: _pdf_scalar(law, v)
    pts = [lo] + [b for b in (1.0, 2.0) if lo < b < hi] + [hi]
    sing = _SINGULAR.get(law.kind)
    total = 0.0
    for u, v in zip(pts, pts[1:]):
        if sing and sing[1] == "left" and u == sing[0]:
            s0 = sing[0]
            total += _quad_weighted(lambda t: f(t) * (t - s0) ** a if t > s0 else _lim(law),
                                    u, v, (-a, 0.0), _DIRECT_TOL)
        elif sing and sing[1] == "right" and v == sing[0]:
            total += _quad_weighted(lambda t: f(t) * (1 - t) ** a if t < 1 else _lim(law),
                                    u, v, (0.0, -a), _DIRECT_TOL)
        else:
            total += _quad(f, u, v, _DIRECT_TOL)
    return total


def _lim(law: LimitLaw) -> float:
    # limit of density * |t - s|^alpha at the singular endpoint s
    c, a = _c(law.alpha), law.alpha
    return {"phi": c, "eta": c * a, "theta": c / a * a ** a}[law.kind]


def cdf_direct(law: LimitLaw, x: float) -> float:
    """``P(law <= x)`` by integrating the density formula itself.

    No change of variables and no distributional identities; algebraic
    endpoint singularities go to a weighted quadrature rule. Slower than
    :func:`cdf` and meant as its cross-check.
    """
    if law.kind not in PARAMETRIC_KINDS:
        return _cdf_scalar(law, x)
    lo, hi = law.support
    if x <= lo:
        return 0.0
    if x >= hi:
        return total_mass(law)
    return _integrate_density(law, lo, x)


def total_mass(law: LimitLaw) -> float:
    """Integral of the density over its support (should be 1)."""
    lo, hi = law.support
    if not math.isinf(hi):
        return _integrate_density(law, lo, hi)
    f = lambda v: _pdf_scalar(law, v)
    # algebraic tail on [2, inf) goes to quad's infinite-range rule
    return _integrate_density(law, lo, 2.0) + _quad(f, 2.0, math.inf, _DIRECT_TOL)


def tabulate(law: LimitLaw, grid) -> np.ndarray:
    """Rows ``(x, pdf, cdf)`` over ``grid``."""
    grid = np.asarray(grid, dtype=float)
    if law.kind == "pointmass":
        dens = np.where(grid == law.point, math.inf, 0.0)
    else:
        dens = pdf(law, grid)
    return np.column_stack([grid, dens, cdf(law, grid)])


def ld_rate_H(x):
    """``H(x) = 1 - log x`` on (0, 1) and ``1/x`` on [1, inf)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("H is defined for x > 0")
    out = np.where(x < 1, 1 - np.log(np.minimum(x, 1)), 1 / x)
    return float(out) if out.ndim == 0 else out


def ld_rate_joint(x: float, y: float) -> float:
    """``log((1 + y) / (x + y))`` for the joint (age, residual) deviation."""
    if not (0 <= x < 1 and y >= 0):
        raise ValueError("need 0 <= x < 1 and y >= 0")
    if x + y == 0:
        raise ValueError("x + y must be nonzero")
    return math.log((1 + y) / (x + y))
