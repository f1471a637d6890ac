"""Stability, convergence and Hopf analysis for Mackey-Glass and Lasota delay equations."""
from ._backend import BACKEND
from .convergence import ConvergenceResult, g_function, rate_of_convergence, roc_curve, tau_star
from .errors import (DegenerateCrossing, DelayStabError, DomainError, NoConvergence, NoEquilibrium,
                     NoHopf, NonPositiveState, ResonantDenominator, StepTooLarge, Unbounded,
                     Unstable, WindowTooShort)
from .hopf import HopfReport, alpha_prime, hopf_point, normal_form
from .models import (Equilibrium, LinearCoefficients, ModelKind, ModelParameters,
                     TaylorCoefficients, F_derivatives, linearize, nonlinear_F,
                     select_equilibrium, solve_equilibrium, taylor_coefficients)
from .robust import IntervalParameters, kharitonov_sufficient, robust_delay_bound
from .simulator import (LimitCycleMetrics, Trajectory, bifurcation_sweep, count_sign_changes,
                        integrate, limit_cycle_metrics, phase_portrait)
from .spectral import CharacteristicRoot, crossing_frequency, rightmost_root
from .stability import (StabilityThresholds, model_period, stability_chart, tau_critical,
                        tau_non_oscillatory, tau_sufficient, thresholds)

__version__ = "0.1.0"
