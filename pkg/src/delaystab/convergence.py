"""Rate of convergence of the stable linearised system as a function of delay.

The decay rate sigma(tau) is the smallest of three candidates:

* sigma1 = a + 1/tau,
* sigma2, the root of (sigma - a)*tau*exp((a - sigma)*tau) = b*tau*exp(a*tau)
  (exists for tau < tau*),
* sigma3 = a + u2/(tau*tan(u2)) where g(u2) = b*tau*exp(a*tau), u2 in (0, pi)
  (exists for tau > tau*),

with tau* the unique delay at which b*tau*exp(a*tau) = 1/e.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, Unstable
from .models import LinearCoefficients
from .stability import tau_critical, tau_non_oscillatory

_RTOL = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class ConvergenceResult:
    sigma: float
    branch: str
    tau_star: float
    u2: Optional[float] = None


def g_function(u: float) -> float:
    """(u/sin u) * exp(-u/tan u), increasing from 1/e at 0+ to infinity at pi-."""
    if not 0.0 < u < math.pi:
        raise DomainError(f"g(u) is defined on (0, pi), got u={u!r}")
    s = math.sin(u)
    try:
        return u / s * math.exp(-u * math.cos(u) / s)
    except OverflowError:
        return math.inf


def _log_g(u: float) -> float:
    s = math.sin(u)
    return math.log(u / s) - u * math.cos(u) / s


def tau_star(lin: LinearCoefficients) -> float:
    """Delay of peak convergence rate; same equation and solver as tau_noc."""
    return tau_non_oscillatory(lin, 1.0)


def _scaled(lin: LinearCoefficients, eta: float) -> LinearCoefficients:
    return lin if eta == 1.0 else LinearCoefficients(eta * lin.a, eta * lin.b)


def _solve_u2(K: float) -> float:
    target = math.log(K)
    lo = 1e-9
    hi_gap = 1e-3
    while _log_g(math.pi - hi_gap) < target:
        hi_gap *= 1e-2
        if hi_gap < 1e-300:
            raise DomainError(f"g(u) = {K:g} has no representable solution")
    return brentq(lambda u: _log_g(u) - target, lo, math.pi - hi_gap, xtol=1e-15, rtol=_RTOL)


def rate_of_convergence(lin: LinearCoefficients, tau: float, eta: float = 1.0) -> ConvergenceResult:
    lin = _scaled(lin, eta)
    a, b = lin.a, lin.b
    if a < 0 or b <= 0:
        raise DomainError(f"rate_of_convergence needs a >= 0 and b > 0 (a={a}, b={b})")
    if tau < 0:
        raise DomainError(f"tau must be >= 0, got {tau}")
    if lin.hopf_possible:
        tc = tau_critical(lin).tau_c
        if tau >= tc:
            raise Unstable(f"tau={tau} >= tau_c={tc}: equilibrium is not asymptotically stable")
    ts = tau_star(lin)
    if tau == 0.0:
        return ConvergenceResult(a + b, "sigma2", ts)
    if tau == ts:
        return ConvergenceResult(a + 1.0 / tau, "sigma1", ts)
    # assumed regime a >= 0, b > 0: p < 1 and p < -q hold automatically
    assert -a * tau < 1 and -a * tau < b * tau
    K = b * tau * math.exp(a * tau)
    if tau < ts:
        # s = (sigma - a)*tau solves s*exp(-s) = K on (0, 1)
        if K >= math.exp(-1.0):  # rounding right at tau*
            return ConvergenceResult(a + 1.0 / tau, "sigma1", ts)
        s = brentq(lambda s: s * math.exp(-s) - K, 0.0, 1.0, xtol=1e-16, rtol=_RTOL)
        return ConvergenceResult(a + s / tau, "sigma2", ts)
    if K <= math.exp(-1.0) or _log_g(1e-9) >= math.log(K):  # rounding right at tau*
        return ConvergenceResult(a + 1.0 / tau, "sigma1", ts)
    u2 = _solve_u2(K)
    sigma3 = a + u2 * math.cos(u2) / (tau * math.sin(u2))
    return ConvergenceResult(sigma3, "sigma3", ts, u2)


def roc_curve(lin: LinearCoefficients, tau_range: tuple[float, float], resolution: int,
              eta: float = 1.0) -> list[tuple[float, float, str]]:
    """(tau, sigma, branch) rows on an even grid over ``tau_range``."""
    lo, hi = tau_range
    if resolution < 2 or lo < 0 or hi <= lo:
        raise DomainError(f"bad tau range {tau_range} / resolution {resolution}")
    rows = []
    for tau in np.linspace(lo, hi, resolution):
        r = rate_of_convergence(lin, float(tau), eta)
        rows.append((float(tau), r.sigma, r.branch))
    return rows
