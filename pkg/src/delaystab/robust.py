"""Delay bounds that guarantee local stability under interval uncertainty.

The point condition b*tau < 1 is a Kharitonov-style sufficient test.  Taking
the worst case of b over a box of (beta, gamma, n) gives a delay below which
every parameter realisation in the box is locally stable.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Literal

from .errors import DomainError, NoEquilibrium, Unbounded
from .models import LinearCoefficients, ModelKind, ModelParameters, solve_equilibrium

Interval = tuple[float, float]


def _check_interval(name: str, iv: Interval) -> Interval:
    lo, hi = (float(v) for v in iv)
    if not (math.isfinite(lo) and math.isfinite(hi) and 0 < lo <= hi):
        raise DomainError(f"{name} interval must satisfy 0 < lo <= hi, got {iv!r}")
    return lo, hi


@dataclass(frozen=True)
class IntervalParameters:
    beta: Interval
    gamma: Interval
    n: Interval

    def __post_init__(self):
        for name in ("beta", "gamma", "n"):
            object.__setattr__(self, name, _check_interval(name, getattr(self, name)))

    def corners(self):
        """The 8 vertex parameter sets of the box (fewer if intervals are degenerate)."""
        seen = []
        for beta, gamma, n in itertools.product(self.beta, self.gamma, self.n):
            if (beta, gamma, n) not in seen:
                seen.append((beta, gamma, n))
        return [ModelParameters(beta, gamma, n) for beta, gamma, n in seen]

    def midpoint(self) -> ModelParameters:
        return ModelParameters(sum(self.beta) / 2, sum(self.gamma) / 2, sum(self.n) / 2)


def kharitonov_sufficient(lin: LinearCoefficients, tau: float) -> bool:
    """True iff b*tau < 1, a stricter test than b*tau < pi/2."""
    if lin.b <= 0:
        raise DomainError(f"kharitonov_sufficient needs b > 0, got b={lin.b}")
    return lin.b * tau < 1.0


def _mackey_glass_bound(iv: IntervalParameters) -> float:
    b_lo, b_hi = iv.beta
    g_lo, g_hi = iv.gamma
    n_hi = iv.n[1]
    excess = n_hi * (b_hi - g_lo) - b_lo
    if excess <= 0:
        raise Unbounded(
            f"robust condition holds for every delay: n_hi*(beta_hi - gamma_lo) = "
            f"{n_hi * (b_hi - g_lo):.6g} <= beta_lo = {b_lo:.6g}")
    return b_lo / (g_hi * excess)


def lasota_equilibrium(iv: IntervalParameters,
                       equilibrium: Literal["worst-case", "nominal"] = "worst-case") -> float:
    """The x* that enters the Lasota robust bound.

    ``worst-case`` takes every positive root at every corner of the box and
    keeps the largest one, which maximises gamma_hi * (x* - n_lo).
    ``nominal`` uses the single root at the interval midpoints.
    """
    kind = ModelKind.LASOTA
    if equilibrium == "nominal":
        roots = solve_equilibrium(kind, iv.midpoint())
        if len(roots) > 1:
            raise DomainError("nominal Lasota parameters have several equilibria")
        return roots[0].x_star
    if equilibrium != "worst-case":
        raise DomainError(f"equilibrium must be 'worst-case' or 'nominal', got {equilibrium!r}")
    best = None
    for p in iv.corners():
        try:
            roots = solve_equilibrium(kind, p)
        except NoEquilibrium:
            continue
        for r in roots:
            if best is None or r.x_star > best:
                best = r.x_star
    if best is None:
        raise NoEquilibrium("no corner of the parameter box has a positive equilibrium")
    return best


def robust_delay_bound(kind: ModelKind | str, iv: IntervalParameters,
                       equilibrium: Literal["worst-case", "nominal"] = "worst-case") -> float:
    """Largest delay for which stability is guaranteed across the whole box.

    Mackey-Glass:  beta_lo / (gamma_hi * (n_hi*(beta_hi - gamma_lo) - beta_lo)).
    Lasota:        1 / (gamma_hi * (x* - n_lo)), with x* from
    :func:`lasota_equilibrium`.

    Raises
    ------
    Unbounded
        When the worst-case b is not positive, so any delay satisfies the test.
    """
    kind = ModelKind.parse(kind)
    if kind is ModelKind.MACKEY_GLASS:
        return _mackey_glass_bound(iv)
    x_star = lasota_equilibrium(iv, equilibrium)
    g_hi, n_lo = iv.gamma[1], iv.n[0]
    if x_star - n_lo <= 0:
        raise Unbounded(f"robust condition holds for every delay: x*={x_star:.6g} <= n_lo={n_lo:.6g}")
    return 1.0 / (g_hi * (x_star - n_lo))
