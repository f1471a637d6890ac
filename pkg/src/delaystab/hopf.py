"""Hopf bifurcation in the gain eta: crossing point and normal-form coefficients.

With eta = eta_c + mu the system is reduced to its two-dimensional centre
manifold.  The first Lyapunov coefficient c1(0) then gives

* mu2 = -Re c1(0) / alpha'(0): supercritical when mu2 > 0,
* beta2 = 2 Re c1(0): the bifurcating orbits are stable when beta2 < 0,

where alpha'(0) = Re dlambda/deta at the crossing.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass
from typing import Optional

from .errors import DegenerateCrossing, NoHopf, ResonantDenominator
from .models import (LinearCoefficients, ModelKind, ModelParameters, TaylorCoefficients,
                     linearize, select_equilibrium, taylor_coefficients)

DENOM_TOL = 1e-12


@dataclass(frozen=True)
class HopfReport:
    eta: float
    tau: float
    eta_c: float
    omega0: float
    D: complex
    g20: complex
    g11: complex
    g02: complex
    g21: complex
    w20_at_0: complex
    w20_at_minus_tau: complex
    w11_at_0: complex
    w11_at_minus_tau: complex
    E1: complex
    E2: complex
    c1_0: complex
    alpha_prime: float
    mu2: float
    beta2: float
    bifurcation_type: str
    orbit_stable: bool
    period: float

    def to_dict(self) -> dict:
        return asdict(self)


def hopf_gain(lin: LinearCoefficients, tau: float) -> tuple[float, float]:
    """(eta_c, omega0) for the generic linearisation at fixed delay ``tau``."""
    a, b = lin.a, lin.b
    if not lin.hopf_possible:
        raise NoHopf(f"no Hopf point: need b > a >= 0 (a={a}, b={b})")
    if tau <= 0:
        raise NoHopf("no Hopf point without delay")
    root = math.sqrt(b * b - a * a)
    eta_c = math.acos(-a / b) / (tau * root)
    return eta_c, eta_c * root


def hopf_point(kind: ModelKind | str, params: ModelParameters,
               index: Optional[int] = None) -> tuple[float, float]:
    """Critical gain eta_c and crossing frequency omega0 at ``params.tau``."""
    eq = select_equilibrium(kind, params, index)
    return hopf_gain(linearize(kind, params, eq), params.tau)


def alpha_prime(lin: LinearCoefficients, tau: float, eta_c: float, omega0: float,
                eta: Optional[float] = None) -> float:
    """Re dlambda/deta at lambda = i*omega0, from implicit differentiation.

    ``eta`` defaults to ``eta_c``; passing another gain evaluates the same
    closed form there while keeping the crossing frequency fixed.
    """
    eta = eta_c if eta is None else eta
    denom = 1.0 - eta * lin.b * tau * cmath.exp(-1j * omega0 * tau)
    if abs(denom) < DENOM_TOL:
        raise DegenerateCrossing(f"|1 - eta*b*tau*exp(-i*omega0*tau)| = {abs(denom):.3g}")
    return ((1j * omega0 / eta) / denom).real


def _expi(theta: float) -> complex:
    return cmath.rect(1.0, theta)


def normal_form_coefficients(taylor: TaylorCoefficients, tau: float, eta: float, eta_c: float,
                             omega0: float) -> HopfReport:
    """Centre-manifold coefficients for the scalar delay equation.

    ``omega0`` and ``eta_c`` describe the crossing and fix alpha'(0); ``eta``
    scales the Taylor coefficients, so eta == eta_c is the formal expansion point.
    """
    I = 1j
    xx, xy, xyy, xyyy = taylor.xi_x, taylor.xi_y, taylor.xi_yy, taylor.xi_yyy
    w = omega0
    e1, e2 = _expi(w * tau), _expi(2.0 * w * tau)
    em1, em2 = e1.conjugate(), e2.conjugate()

    D = 1.0 / (1.0 + tau * eta * xy * e1)
    qs0 = D.conjugate()
    q0 = 1.0

    g20 = 2.0 * qs0 * eta * xyy * em2
    g11 = 2.0 * qs0 * eta * xyy
    g02 = 2.0 * qs0 * eta * xyy * e2
    g02c, g11c = g02.conjugate(), g11.conjugate()

    theta1 = ((eta * xx - 2.0 * I * w) * (g20 / (I * w) + g02c / (3.0 * I * w))
              + eta * xy * (g20 / (I * w) * em1 + g02c / (3.0 * I * w) * e1)
              + (g20 + g02c) * q0 - 2.0 * eta * xyy * em2)
    theta2 = (-eta * xx * (g11 / (I * w) - g11c / (I * w))
              - eta * xy * (g11 / (I * w) * em1 - g11c / (I * w) * e1)
              + (g11 + g11c) * q0 - 2.0 * eta * xyy)
    den1 = eta * xx + eta * xy * em2 - 2.0 * I * w
    den2 = eta * (xx + xy)
    if abs(den1) < DENOM_TOL or abs(den2) < DENOM_TOL:
        raise ResonantDenominator(f"normal-form denominators {abs(den1):.3g}, {abs(den2):.3g}")
    E1 = theta1 / den1
    E2 = theta2 / den2

    def w20(th):
        return (-g20 / (I * w) * q0 * _expi(w * th) - g02c / (3.0 * I * w) * q0 * _expi(-w * th)
                + E1 * _expi(2.0 * w * th))

    def w11(th):
        return g11 / (I * w) * q0 * _expi(w * th) - g11c / (I * w) * q0 * _expi(-w * th) + E2

    w20_0, w20_m, w11_0, w11_m = w20(0.0), w20(-tau), w11(0.0), w11(-tau)
    g21 = qs0 * eta * (xyy * (4.0 * w11_m * em1 + 2.0 * w20_m * e1) + 6.0 * xyyy * em1)
    c1 = I / (2.0 * w) * (g20 * g11 - 2.0 * abs(g11) ** 2 - abs(g02) ** 2 / 3.0) + g21 / 2.0

    lin = LinearCoefficients(a=-xx, b=-xy)
    ap = alpha_prime(lin, tau, eta_c, w)
    mu2 = -c1.real / ap
    beta2 = 2.0 * c1.real
    return HopfReport(
        eta=eta, tau=tau, eta_c=eta_c, omega0=w, D=D,
        g20=g20, g11=g11, g02=g02, g21=g21,
        w20_at_0=w20_0, w20_at_minus_tau=w20_m, w11_at_0=w11_0, w11_at_minus_tau=w11_m,
        E1=E1, E2=E2, c1_0=c1, alpha_prime=ap, mu2=mu2, beta2=beta2,
        bifurcation_type="supercritical" if mu2 > 0 else "subcritical",
        orbit_stable=beta2 < 0,
        period=2.0 * math.pi / w,
    )


def normal_form(kind: ModelKind | str, params: ModelParameters,
                taylor: Optional[TaylorCoefficients] = None,
                index: Optional[int] = None) -> HopfReport:
    """Hopf classification for a model at delay ``params.tau``.

    The crossing (eta_c, omega0) is computed from the delay; ``params.eta``
    is the gain used in the coefficient formulas.  Set it to eta_c for the
    formal expansion point.
    """
    kind = ModelKind.parse(kind)
    eq = select_equilibrium(kind, params, index)
    lin = linearize(kind, params, eq)
    eta_c, omega0 = hopf_gain(lin, params.tau)
    if taylor is None:
        taylor = taylor_coefficients(kind, params, eq)
    return normal_form_coefficients(taylor, params.tau, params.eta, eta_c, omega0)
