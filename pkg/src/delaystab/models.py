"""Mackey-Glass and Lasota production terms, equilibria and local expansions.

Both models share the form

    x'(t) = eta * (beta * F(x(t - tau)) - gamma * x(t))

with F(y) = y / (1 + y**n) (Mackey-Glass) or F(y) = y**n * exp(-y) (Lasota).
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NoEquilibrium

log = logging.getLogger(__name__)

EQUILIBRIUM_RESIDUAL_TOL = 1e-10
_RTOL = 4 * np.finfo(float).eps
# bracket scan for Lasota roots
_SCAN_LO, _SCAN_HI, _SCAN_POINTS = 1e-6, 50.0, 4001


class ModelKind(str, enum.Enum):
    MACKEY_GLASS = "mackey-glass"
    LASOTA = "lasota"

    @classmethod
    def parse(cls, value: "ModelKind | str") -> "ModelKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {"mg": cls.MACKEY_GLASS, "mackeyglass": cls.MACKEY_GLASS}
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown model {value!r}") from None


@dataclass(frozen=True)
class ModelParameters:
    """Rates in 1/day, delay in days; ``eta`` is the dimensionless gain."""

    beta: float
    gamma: float
    n: float
    tau: float = 0.0
    eta: float = 1.0

    def __post_init__(self):
        for name in ("beta", "gamma", "n", "eta"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be finite and > 0, got {value!r}")
        if not (math.isfinite(self.tau) and self.tau >= 0):
            raise DomainError(f"tau must be finite and >= 0, got {self.tau!r}")

    def with_(self, **changes) -> "ModelParameters":
        return replace(self, **changes)


@dataclass(frozen=True)
class Equilibrium:
    x_star: float
    residual: float


@dataclass(frozen=True)
class LinearCoefficients:
    """Coefficients of u'(t) = -a u(t) - b u(t - tau)."""

    a: float
    b: float

    @property
    def hopf_possible(self) -> bool:
        return self.b > self.a >= 0


@dataclass(frozen=True)
class TaylorCoefficients:
    xi_x: float
    xi_y: float
    xi_yy: float
    xi_yyy: float


def _is_integer(n: float) -> bool:
    return float(n).is_integer()


def _power(y: float, n: float) -> float:
    if y > 0:
        return math.exp(n * math.log(y))
    if _is_integer(n):
        return float(y) ** int(n)
    raise DomainError(f"y**n undefined for y={y!r} with non-integer n={n!r}")


def _check_domain(kind: ModelKind, y: float, n: float) -> None:
    if y <= 0 and (kind is ModelKind.LASOTA or not _is_integer(n)):
        raise DomainError(f"{kind.value}: F requires y > 0 (got y={y!r}, n={n!r})")


def nonlinear_F(kind: ModelKind | str, y: float, n: float) -> float:
    """Evaluate the production nonlinearity F at concentration ``y``."""
    kind = ModelKind.parse(kind)
    _check_domain(kind, y, n)
    if kind is ModelKind.MACKEY_GLASS:
        p = _power(y, n)
        denom = 1.0 + p
        if denom == 0:
            raise DomainError("Mackey-Glass pole at 1 + y**n = 0")
        return y / denom
    return _power(y, n) * math.exp(-y)


def F_derivatives(kind: ModelKind | str, y: float, n: float, order: int) -> float:
    """Closed-form k-th derivative of F, k in {1, 2, 3}."""
    kind = ModelKind.parse(kind)
    if order not in (1, 2, 3):
        raise DomainError(f"order must be 1, 2 or 3, got {order!r}")
    _check_domain(kind, y, n)
    if kind is ModelKind.MACKEY_GLASS:
        p = _power(y, n)
        q = 1.0 + p
        if order == 1:
            return (1.0 + (1.0 - n) * p) / q**2
        if order == 2:
            return n * p * ((n - 1.0) * p - (n + 1.0)) / (y * q**3)
        num = (1.0 - n * n) * p * p + (4.0 * n * n + 2.0) * p + (1.0 - n * n)
        return n * p * num / (y * y * q**4)
    base = _power(y, n - order) * math.exp(-y)
    if order == 1:
        poly = n - y
    elif order == 2:
        poly = y * y - 2.0 * n * y + n * (n - 1.0)
    else:
        poly = (n * (n - 1.0) * (n - 2.0) - 3.0 * n * (n - 1.0) * y
                + 3.0 * n * y * y - y**3)
    return base * poly


def _residual(kind: ModelKind, params: ModelParameters, x: float) -> float:
    return abs(params.beta * nonlinear_F(kind, x, params.n) - params.gamma * x)


def solve_equilibrium(kind: ModelKind | str, params: ModelParameters) -> list[Equilibrium]:
    """All positive equilibria, ascending.

    Mackey-Glass has the single root (beta/gamma - 1)**(1/n).  Lasota roots of
    beta * x**(n-1) * exp(-x) = gamma are bracketed on a log-spaced scan of
    [1e-6, 50] and refined with Brent's method.  The gain ``eta`` plays no role.
    """
    kind = ModelKind.parse(kind)
    beta, gamma, n = params.beta, params.gamma, params.n
    if kind is ModelKind.MACKEY_GLASS:
        if beta <= gamma:
            raise NoEquilibrium(
                f"no positive equilibrium: Mackey-Glass needs beta > gamma "
                f"(beta={beta}, gamma={gamma})")
        roots = [(beta / gamma - 1.0) ** (1.0 / n)]
    else:
        # log form keeps the scan well scaled across the bracket
        def h(x):
            return math.log(beta / gamma) + (n - 1.0) * math.log(x) - x

        grid = np.geomspace(_SCAN_LO, _SCAN_HI, _SCAN_POINTS)
        vals = np.array([h(x) for x in grid])
        roots = []
        for i in range(len(grid) - 1):
            if vals[i] == 0.0:
                roots.append(float(grid[i]))
            elif vals[i] * vals[i + 1] < 0:
                roots.append(brentq(h, grid[i], grid[i + 1], xtol=1e-14, rtol=_RTOL))
        if not roots:
            raise NoEquilibrium(
                f"no positive equilibrium for Lasota with beta={beta}, gamma={gamma}, n={n}")
    out = []
    for x in sorted(roots):
        res = _residual(kind, params, x)
        if res >= EQUILIBRIUM_RESIDUAL_TOL:
            raise NoEquilibrium(f"equilibrium residual {res:.3g} above tolerance at x={x}")
        out.append(Equilibrium(x_star=float(x), residual=res))
    return out


def select_equilibrium(kind, params: ModelParameters, index: int | None = None) -> Equilibrium:
    """Pick one equilibrium; ambiguous multi-root cases require ``index``."""
    roots = solve_equilibrium(kind, params)
    if index is None:
        if len(roots) > 1:
            xs = ", ".join(f"{r.x_star:.6g}" for r in roots)
            raise DomainError(f"{len(roots)} equilibria ({xs}); select one explicitly")
        return roots[0]
    try:
        return roots[index]
    except IndexError:
        raise DomainError(f"equilibrium index {index} out of range ({len(roots)} roots)") from None


def linearize(kind: ModelKind | str, params: ModelParameters, eq: Equilibrium) -> LinearCoefficients:
    kind = ModelKind.parse(kind)
    a = params.gamma
    b = -params.beta * F_derivatives(kind, eq.x_star, params.n, 1)
    lin = LinearCoefficients(a=a, b=b)
    if not lin.hopf_possible:
        log.warning("b=%.6g <= a=%.6g: critical delay and Hopf point are undefined", b, a)
    return lin


def taylor_coefficients(kind: ModelKind | str, params: ModelParameters,
                        eq: Equilibrium) -> TaylorCoefficients:
    """Linear, quadratic and cubic coefficients of the expansion about x*.

    Closed forms per model, written with the equilibrium condition already
    substituted (so they agree with beta*F^(k)(x*)/k! only at a true root).
    """
    kind = ModelKind.parse(kind)
    beta, gamma, n = params.beta, params.gamma, params.n
    x = eq.x_star
    if kind is ModelKind.MACKEY_GLASS:
        d = beta - gamma
        xi_y = gamma**2 / beta * ((1.0 - n) * beta / gamma + n)
        xi_yy = gamma * n * d * (d * (n - 1.0) - gamma * (n + 1.0)) / (2.0 * beta**2 * x)
        xi_yyy = (gamma * n * d
                  * (d**2 * (1.0 - n**2) + gamma * d * (4.0 * n**2 + 2.0)
                     + gamma**2 * (1.0 - n**2))
                  / (6.0 * beta**3 * x**2))
    else:
        xi_y = gamma * (n - x)
        xi_yy = gamma * (x**2 - 2.0 * x * n + n * (n - 1.0)) / (2.0 * x)
        xi_yyy = gamma * ((n - x) ** 3 + n * (2.0 - 3.0 * (n - x))) / (6.0 * x**2)
    return TaylorCoefficients(xi_x=-gamma, xi_y=xi_y, xi_yy=xi_yy, xi_yyy=xi_yyy)


def analyse_point(kind, params: ModelParameters, index: int | None = None):
    """Convenience: (equilibrium, linear coefficients) for one parameter set."""
    eq = select_equilibrium(kind, params, index)
    return eq, linearize(kind, params, eq)
