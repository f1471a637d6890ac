"""Delay thresholds for u'(t) = -eta*a*u(t) - eta*b*u(t - tau).

Everything here is computed from the generic (a, b, eta) form.  The printed
model-specific inequalities are kept in :func:`mackey_glass_printed_forms`
and :func:`lasota_printed_forms` purely as cross-checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NoHopf
from .models import (LinearCoefficients, ModelKind, ModelParameters, linearize,
                     select_equilibrium)

_RTOL = 4 * np.finfo(float).eps

TAU_XTOL = 1e-14


class CriticalDelay(NamedTuple):
    tau_c: float
    omega0: float
    period: float


@dataclass(frozen=True)
class StabilityThresholds:
    tau_noc: float
    tau_suff: float
    tau_c: float
    hopf_period: float
    omega0: float


def tau_sufficient(lin: LinearCoefficients, eta: float = 1.0) -> float:
    """Largest delay of the sufficient condition eta*b*tau < pi/2."""
    if lin.b <= 0:
        raise DomainError(f"tau_sufficient needs b > 0, got b={lin.b}")
    return math.pi / (2.0 * eta * lin.b)


def tau_critical(lin: LinearCoefficients, eta: float = 1.0) -> CriticalDelay:
    a, b = lin.a, lin.b
    if not (b > a >= 0):
        raise NoHopf(f"no finite stability crossing: need b > a >= 0 (a={a}, b={b})")
    root = math.sqrt(b * b - a * a)
    omega0 = eta * root
    tau_c = math.acos(-a / b) / omega0
    return CriticalDelay(tau_c, omega0, 2.0 * math.pi / omega0)


def tau_non_oscillatory(lin: LinearCoefficients, eta: float = 1.0) -> float:
    """Unique tau with eta*b*tau*exp(eta*a*tau) = 1/e.

    Solved as log(eta*b*tau) + eta*a*tau + 1 = 0, which is strictly increasing
    in tau; the root lies in (0, 1/(e*eta*b)].
    """
    a, b = eta * lin.a, eta * lin.b
    if b <= 0 or a < 0:
        raise DomainError(f"tau_non_oscillatory needs b > 0 and a >= 0 (a={lin.a}, b={lin.b})")
    hi = 1.0 / (math.e * b)
    if a == 0.0:
        return hi

    def f(tau):
        return math.log(b * tau) + a * tau + 1.0

    return brentq(f, hi * 1e-300, hi, xtol=TAU_XTOL, rtol=_RTOL)


def thresholds(lin: LinearCoefficients, eta: float = 1.0) -> StabilityThresholds:
    crit = tau_critical(lin, eta)
    return StabilityThresholds(
        tau_noc=tau_non_oscillatory(lin, eta),
        tau_suff=tau_sufficient(lin, eta),
        tau_c=crit.tau_c,
        hopf_period=crit.period,
        omega0=crit.omega0,
    )


def model_thresholds(kind, params: ModelParameters, index: Optional[int] = None) -> StabilityThresholds:
    eq = select_equilibrium(kind, params, index)
    return thresholds(linearize(kind, params, eq), params.eta)


def mackey_glass_printed_forms(beta: float, gamma: float, n: float, tau: float) -> dict:
    """Model-specific closed forms for Mackey-Glass, evaluated verbatim.

    ``necessary_lhs`` and ``period`` come out negative when beta > gamma;
    compare their absolute values with the generic results.
    """
    g = n * (gamma - beta)
    root = math.sqrt(1.0 + 2.0 * beta / g)
    return {
        "necessary_lhs": gamma * n * tau / beta * (gamma - beta) * root,
        "necessary_rhs": math.acos(beta / (beta + g)),
        "period": 2.0 * math.pi * beta / (gamma * g * root),
        "sufficient_lhs": gamma * tau / beta * (n * (beta - gamma) - beta),
        "non_oscillatory_lhs": gamma * tau / beta * math.exp(gamma * tau) * (n * (beta - gamma) - beta),
    }


def lasota_printed_forms(gamma: float, n: float, x_star: float, tau: float) -> dict:
    root = math.sqrt((x_star - n) ** 2 - 1.0)
    return {
        "necessary_lhs": gamma * tau * root,
        "necessary_rhs": math.acos(1.0 / (n - x_star)),
        "period": 2.0 * math.pi / (gamma * math.sqrt((n - x_star) ** 2 - 1.0)),
        "sufficient_lhs": gamma * tau * (x_star - n),
        "non_oscillatory_lhs": gamma * tau * (x_star - n) * math.exp(gamma * tau),
    }


def model_period(kind, params: ModelParameters, index: Optional[int] = None) -> float:
    """Limit-cycle period at the Hopf point from the per-model closed form.

    Returned in absolute value; the Mackey-Glass form is negative for beta > gamma.
    """
    kind = ModelKind.parse(kind)
    eq = select_equilibrium(kind, params, index)
    lin = linearize(kind, params, eq)
    if not lin.hopf_possible:
        raise NoHopf(f"no Hopf point: b={lin.b:.6g} <= a={lin.a:.6g}")
    if kind is ModelKind.MACKEY_GLASS:
        raw = mackey_glass_printed_forms(params.beta, params.gamma, params.n, 1.0)["period"]
    else:
        raw = lasota_printed_forms(params.gamma, params.n, eq.x_star, 1.0)["period"]
    return abs(raw) / params.eta


# -- charts -----------------------------------------------------------------

CHART_SWEEPS = ("beta", "n", "gamma", "b")


@dataclass(frozen=True)
class ChartRow:
    """One chart grid point; ``None`` marks an unbounded threshold."""

    value: float
    tau_noc: Optional[float]
    tau_suff: Optional[float]
    tau_c: Optional[float]
    period: Optional[float]


def _row_from_lin(value: float, lin: LinearCoefficients, eta: float) -> ChartRow:
    if lin.b <= 0:
        return ChartRow(value, None, None, None, None)
    tau_noc = tau_non_oscillatory(lin, eta)
    tau_suff = tau_sufficient(lin, eta)
    if not lin.hopf_possible:
        return ChartRow(value, tau_noc, tau_suff, None, None)
    crit = tau_critical(lin, eta)
    return ChartRow(value, tau_noc, tau_suff, crit.tau_c, crit.period)


def chart_point(sweep: str, value: float, fixed: dict, kind=None, eta: float = 1.0,
                index: Optional[int] = None) -> ChartRow:
    if sweep == "b":
        return _row_from_lin(value, LinearCoefficients(a=fixed["a"], b=value), eta)
    params = ModelParameters(**{**fixed, sweep: value, "eta": eta})
    eq = select_equilibrium(kind, params, index)
    return _row_from_lin(value, linearize(kind, params, eq), eta)


def stability_chart(sweep: str, values: Sequence[float], fixed: dict, kind=None,
                    eta: float = 1.0, index: Optional[int] = None, mapper=map) -> list[ChartRow]:
    """Thresholds along a one-parameter sweep.

    ``sweep`` is one of beta, n, gamma (needs ``kind`` and the other two model
    parameters in ``fixed``) or b (generic, needs ``fixed['a']``).
    ``mapper`` lets callers substitute a parallel map; row order is preserved.
    """
    if sweep not in CHART_SWEEPS:
        raise DomainError(f"sweep must be one of {CHART_SWEEPS}, got {sweep!r}")
    if sweep == "b":
        if "a" not in fixed:
            raise DomainError("generic sweep over b needs a fixed 'a'")
    else:
        if kind is None:
            raise DomainError(f"sweep over {sweep} needs a model")
        kind = ModelKind.parse(kind)
        missing = {"beta", "gamma", "n"} - {sweep} - set(fixed)
        if missing:
            raise DomainError(f"sweep over {sweep} missing fixed values {sorted(missing)}")
        fixed = {k: fixed[k] for k in ("beta", "gamma", "n", "tau") if k in fixed and k != sweep}
    return list(mapper(_ChartTask(sweep, fixed, kind, eta, index), values))


@dataclass(frozen=True)
class _ChartTask:
    sweep: str
    fixed: dict
    kind: Optional[ModelKind]
    eta: float
    index: Optional[int]

    def __call__(self, value):
        return chart_point(self.sweep, float(value), self.fixed, self.kind, self.eta, self.index)


@dataclass(frozen=True)
class BoundaryRow:
    a: float
    b_noc: float
    b_suff: float
    b_crit: float


def critical_b(a: float, tau: float, eta: float = 1.0) -> float:
    """b on the necessary-and-sufficient boundary for given a and tau."""
    if tau <= 0:
        raise DomainError("critical_b needs tau > 0")
    if a == 0.0:
        return math.pi / (2.0 * eta * tau)

    def h(b):
        return eta * tau * math.sqrt(b * b - a * a) - math.acos(-a / b)

    hi = max(2.0 * a, 1.0)
    while h(hi) <= 0:
        hi *= 2.0
    return brentq(h, a, hi, xtol=1e-14, rtol=_RTOL)


def boundary_chart(a_values: Sequence[float], tau: float = 1.0, eta: float = 1.0) -> list[BoundaryRow]:
    """Generic (a, b) stability chart at fixed delay.

    The region below each b-curve satisfies the corresponding condition.
    """
    rows = []
    for a in a_values:
        a = float(a)
        b_noc = math.exp(-1.0 - eta * a * tau) / (eta * tau)
        rows.append(BoundaryRow(a, b_noc, math.pi / (2.0 * eta * tau), critical_b(a, tau, eta)))
    return rows
