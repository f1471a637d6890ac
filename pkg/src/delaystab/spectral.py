"""Characteristic roots of lambda + eta*a + eta*b*exp(-lambda*tau) = 0.

Used as an independent oracle for the closed-form stability and
convergence results: Newton iteration from a grid of starting points,
deduplication, and selection of the root with the largest real part.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NoHopf
from .models import LinearCoefficients

RESIDUAL_TOL = 1e-10
DEDUP_DIST = 1e-8
MAX_ITER = 200
REAL_STARTS = 9
# imaginary starts every pi/tau up to IMAG_SPAN * eta * b
IMAG_SPAN = 4.0


@dataclass(frozen=True)
class CharacteristicRoot:
    re: float
    im: float
    residual: float

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


def characteristic(lam: complex, lin: LinearCoefficients, tau: float, eta: float = 1.0) -> complex:
    return lam + eta * lin.a + eta * lin.b * cmath.exp(-lam * tau)


def _newton(z: complex, A: float, B: float, tau: float):
    try:
        return _newton_iter(z, A, B, tau)
    except (OverflowError, ZeroDivisionError):
        return None


def _newton_iter(z: complex, A: float, B: float, tau: float):
    f = z + A + B * cmath.exp(-z * tau)
    res = abs(f)
    for _ in range(MAX_ITER):
        e = B * cmath.exp(-z * tau)
        df = 1.0 - tau * e
        if df == 0:
            return None
        step = f / df
        z_new = z - step
        f_new = z_new + A + B * cmath.exp(-z_new * tau)
        # damp while the residual grows
        damp = 0
        while abs(f_new) > res and damp < 30:
            step *= 0.5
            z_new = z - step
            f_new = z_new + A + B * cmath.exp(-z_new * tau)
            damp += 1
        z, f = z_new, f_new
        res = abs(f)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return None
        if abs(step) <= 1e-15 * max(1.0, abs(z)) or res == 0.0:
            break
    return z if res < RESIDUAL_TOL else None


def characteristic_roots(lin: LinearCoefficients, tau: float, eta: float = 1.0,
                         imag_span: float = IMAG_SPAN) -> list[CharacteristicRoot]:
    """Distinct roots reachable from the multistart grid, im >= 0 representatives."""
    if tau <= 0:
        raise ValueError("characteristic_roots needs tau > 0")
    A, B = eta * lin.a, eta * lin.b
    re_starts = np.linspace(-A - abs(B) - 2.0 / tau, abs(B), REAL_STARTS)
    k_max = max(1, math.ceil(imag_span * abs(B) * tau / math.pi))
    found: list[complex] = []
    for k in range(k_max + 1):
        for r in re_starts:
            z = _newton(complex(r, k * math.pi / tau), A, B, tau)
            if z is None:
                continue
            if z.imag < 0:
                z = z.conjugate()
            if abs(z.imag) < 1e-12:
                z = complex(z.real, 0.0)
            if all(abs(z - w) >= DEDUP_DIST for w in found):
                found.append(z)
    roots = [CharacteristicRoot(z.real, z.imag, abs(z + A + B * cmath.exp(-z * tau))) for z in found]
    roots.sort(key=lambda r: -r.re)
    return roots


def rightmost_root(lin: LinearCoefficients, tau: float, eta: float = 1.0) -> CharacteristicRoot:
    roots = characteristic_roots(lin, tau, eta)
    if not roots:
        raise NoConvergence(f"no Newton start converged (a={lin.a}, b={lin.b}, tau={tau}, eta={eta})")
    return roots[0]


def crossing_frequency(lin: LinearCoefficients, eta: float = 1.0) -> float:
    if not lin.hopf_possible:
        raise NoHopf(f"no crossing frequency: b={lin.b} <= a={lin.a}")
    return eta * math.sqrt(lin.b**2 - lin.a**2)
