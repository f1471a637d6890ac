"""Direct integration of the nonlinear delay equations and trajectory analytics.

Fixed-step classical RK4 by the method of steps.  Delayed values come from
cubic Hermite interpolation of the stored solution (values and derivatives
at the nodes); before t = 0 the history is the constant ``x0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import _backend
from .errors import DomainError, NonPositiveState, StepTooLarge, WindowTooShort
from .hopf import alpha_prime, hopf_gain
from .models import (LinearCoefficients, ModelKind, ModelParameters, linearize,
                     select_equilibrium, solve_equilibrium)

_MODEL_CODES = {ModelKind.MACKEY_GLASS: 0, ModelKind.LASOTA: 1}

# explicit-scheme guards; see integrate()
MAX_STEP_FRACTION_OF_TAU = 0.1
MAX_STEP_STIFFNESS = 0.5
DEFAULT_TRANSIENT = 0.5
CONVERGED_REL = 1e-4


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Uniform-step solution on [0, t_end] with constant history before 0."""

    kind: ModelKind
    params: ModelParameters
    history_value: float
    h: float
    t: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    dx: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.x)

    def value_at(self, times) -> np.ndarray:
        """Hermite-interpolated x at arbitrary times (history for t <= 0)."""
        times = np.asarray(times, dtype=float)
        pos = times / self.h
        out = np.full(times.shape, self.history_value, dtype=float)
        inside = pos > 0.0
        p = pos[inside]
        j = np.minimum(np.floor(p).astype(np.int64), len(self.x) - 2)
        s = p - j
        s2, s3 = s * s, s * s * s
        h = self.h
        out[inside] = ((2 * s3 - 3 * s2 + 1) * self.x[j] + (s3 - 2 * s2 + s) * h * self.dx[j]
                       + (-2 * s3 + 3 * s2) * self.x[j + 1] + (s3 - s2) * h * self.dx[j + 1])
        return out

    def delayed(self) -> np.ndarray:
        """x(t - tau) on the trajectory grid."""
        return self.value_at(self.t - self.params.tau)


@dataclass(frozen=True)
class LimitCycleMetrics:
    amplitude: float
    period: Optional[float]
    converged_to_equilibrium: bool
    x_min: float
    x_max: float


def _lipschitz_scale(kind: ModelKind, params: ModelParameters) -> float:
    """eta * (gamma + max |b|) over all equilibria; bounds the linear stiffness."""
    try:
        roots = solve_equilibrium(kind, params)
    except DomainError:
        return params.eta * params.gamma
    bs = [abs(linearize(kind, params, r).b) for r in roots] if roots else [0.0]
    return params.eta * (params.gamma + max(bs))


def default_step(tau: float) -> float:
    return min(tau / 40.0, 0.01)


def integrate(kind: ModelKind | str, params: ModelParameters, x0: float, t_end: float,
              h: Optional[float] = None) -> Trajectory:
    """Integrate from the constant history ``x0`` up to ``t_end``.

    Raises
    ------
    StepTooLarge
        If h > tau/10 or h*eta*(gamma + |b|) > 0.5.
    NonPositiveState
        If the state leaves x > 0.
    """
    kind = ModelKind.parse(kind)
    tau = params.tau
    if tau <= 0:
        raise DomainError("integrate needs tau > 0 (the undelayed equation is an ODE)")
    if not (math.isfinite(x0) and x0 > 0):
        raise DomainError(f"initial history must be positive, got x0={x0!r}")
    if not (math.isfinite(t_end) and t_end > 0):
        raise DomainError(f"t_end must be positive, got {t_end!r}")
    h = default_step(tau) if h is None else float(h)
    if not h > 0:
        raise DomainError(f"step must be positive, got h={h}")
    if h > MAX_STEP_FRACTION_OF_TAU * tau * (1 + 1e-12):
        raise StepTooLarge(f"h={h} exceeds tau/10={tau / 10}")
    scale = _lipschitz_scale(kind, params)
    if h * scale > MAX_STEP_STIFFNESS:
        raise StepTooLarge(f"h*eta*(gamma+|b|)={h * scale:.3g} exceeds {MAX_STEP_STIFFNESS}")
    nsteps = int(round(t_end / h))
    x, dx, failed = _backend.integrate_kernel(
        _MODEL_CODES[kind], params.beta, params.gamma, params.n, params.eta,
        tau, float(x0), h, nsteps)
    if failed >= 0:
        raise NonPositiveState(f"state left x > 0 at t={failed * h:.6g} (x={x[failed]:.3g})")
    t = np.arange(nsteps + 1) * h
    return Trajectory(kind, params, float(x0), h, t, np.asarray(x), np.asarray(dx))


def _window(traj: Trajectory, transient_fraction: float) -> slice:
    if not 0.0 <= transient_fraction < 1.0:
        raise DomainError(f"transient_fraction must be in [0, 1), got {transient_fraction}")
    return slice(int(len(traj.x) * transient_fraction), None)


def count_sign_changes(traj: Trajectory, x_star: float,
                       transient_fraction: float = DEFAULT_TRANSIENT,
                       deadband: float = 1e-12) -> int:
    """Sign changes of x - x* after the transient.

    Samples within ``deadband * x_star`` of the equilibrium keep the previous
    sign, so rounding noise around a converged state is not counted.
    """
    dev = traj.x[_window(traj, transient_fraction)] - x_star
    band = deadband * abs(x_star)
    signs = np.sign(dev[np.abs(dev) > band])
    if len(signs) < 2:
        return 0
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def _upward_crossings(t: np.ndarray, y: np.ndarray, level: float) -> np.ndarray:
    below = y[:-1] < level
    above = y[1:] >= level
    idx = np.nonzero(below & above)[0]
    frac = (level - y[idx]) / (y[idx + 1] - y[idx])
    return t[idx] + frac * (t[idx + 1] - t[idx])


def limit_cycle_metrics(traj: Trajectory, transient_fraction: float = DEFAULT_TRANSIENT,
                        x_star: Optional[float] = None, min_periods: int = 5) -> LimitCycleMetrics:
    """Amplitude and period of the post-transient window.

    The period is the mean spacing of upward crossings of the window mean,
    located by linear interpolation.  A window whose peak-to-peak range is
    below 1e-4 * x* counts as converged and has no period.
    """
    w = _window(traj, transient_fraction)
    y, t = traj.x[w], traj.t[w]
    if len(y) < 2:
        raise WindowTooShort("post-transient window has fewer than two samples")
    lo, hi = float(y.min()), float(y.max())
    ref = float(np.mean(y)) if x_star is None else x_star
    amplitude = (hi - lo) / 2.0
    if hi - lo < CONVERGED_REL * abs(ref):
        return LimitCycleMetrics(amplitude, None, True, lo, hi)
    ups = _upward_crossings(t, y, float(np.mean(y)))
    if len(ups) < min_periods + 1:
        raise WindowTooShort(
            f"{max(len(ups) - 1, 0)} periods in the window, need {min_periods}; increase t_end")
    period = float(np.mean(np.diff(ups)))
    return LimitCycleMetrics(amplitude, period, False, lo, hi)


def phase_portrait(traj: Trajectory, transient_fraction: float = 0.0) -> np.ndarray:
    """(x(t), x(t - tau)) pairs on the grid, shape (m, 2)."""
    if traj.t[-1] <= traj.params.tau:
        raise DomainError("phase portrait needs a trajectory longer than tau")
    w = _window(traj, transient_fraction)
    return np.column_stack([traj.x[w], traj.delayed()[w]])


# -- bifurcation sweeps -------------------------------------------------------

@dataclass(frozen=True)
class BifurcationRow:
    eta: float
    x_min: float
    x_max: float
    amplitude: float
    converged: bool
    t_end: float


def sweep_duration(lin: LinearCoefficients, tau: float, eta: float, x_star: float,
                   perturbation: float, max_periods: float = 4000.0) -> float:
    """Run length for one sweep point.

    At least 100*tau and 50 predicted periods.  Near the crossing the linear
    growth or decay rate alpha'*|eta - eta_c| is tiny, so the run is also
    stretched to cover the time needed to grow from ``perturbation`` to order
    one, twice over (half the run is discarded as transient).
    """
    eta_c, omega_c = hopf_gain(lin, tau)
    period = 2.0 * math.pi / (omega_c * eta / eta_c)
    t_end = max(100.0 * tau, 50.0 * period)
    gap = abs(eta - eta_c)
    if gap > 1e-9 * eta_c:
        rate = alpha_prime(lin, tau, eta_c, omega_c) * gap
        growth = (math.log(1.0 / perturbation) + 3.0) / rate
        t_end = max(t_end, min(4.0 * growth, max_periods * period))
    return t_end


@dataclass(frozen=True)
class _SweepTask:
    kind: ModelKind
    params: ModelParameters
    x_star: float
    lin: LinearCoefficients
    perturbation: float
    h: Optional[float]
    transient_fraction: float

    def __call__(self, eta: float) -> BifurcationRow:
        p = self.params.with_(eta=float(eta))
        t_end = sweep_duration(self.lin, p.tau, p.eta, self.x_star, self.perturbation)
        traj = integrate(self.kind, p, self.x_star * (1.0 + self.perturbation), t_end, self.h)
        m = limit_cycle_metrics(traj, self.transient_fraction, x_star=self.x_star)
        return BifurcationRow(float(eta), m.x_min, m.x_max, m.amplitude,
                              m.converged_to_equilibrium, t_end)


def bifurcation_sweep(kind: ModelKind | str, params: ModelParameters, etas: Iterable[float],
                      h: Optional[float] = None, perturbation: float = 1e-5,
                      transient_fraction: float = DEFAULT_TRANSIENT,
                      index: Optional[int] = None,
                      mapper: Callable = map) -> list[BifurcationRow]:
    """Post-transient (x_min, x_max) for each gain in ``etas``.

    Each run starts from the constant history x*(1 + perturbation), a small
    kick off the equilibrium.  ``params.tau`` should be the critical delay at
    eta = 1.  Rows come back in the order of ``etas``.
    """
    kind = ModelKind.parse(kind)
    eq = select_equilibrium(kind, params, index)
    lin = linearize(kind, params, eq)
    task = _SweepTask(kind, params, eq.x_star, lin, perturbation, h, transient_fraction)
    return list(mapper(task, list(etas)))


def eta_grid(lo: float, hi: float, steps: int) -> Sequence[float]:
    if steps < 2 or not hi > lo:
        raise DomainError(f"bad eta range [{lo}, {hi}] with {steps} steps")
    return [float(v) for v in np.linspace(lo, hi, steps)]
