import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from delaystab import (LinearCoefficients, g_function, rate_of_convergence, rightmost_root,
                       roc_curve, tau_critical, tau_star)
from delaystab.errors import DomainError, Unstable

MG_LIN = LinearCoefficients(0.3, 1.575)


def test_g_function_examples():
    assert g_function(1e-8) == pytest.approx(1 / math.e, rel=1e-12)
    assert g_function(math.pi / 2) == pytest.approx(math.pi / 2, rel=1e-15)
    assert g_function(3.0) > g_function(2.0) > g_function(1.0)
    assert g_function(math.pi - 1e-6) > 1e6
    for u in (0.0, math.pi, -1.0):
        with pytest.raises(DomainError):
            g_function(u)


def test_g_function_increasing():
    u = np.linspace(1e-4, math.pi - 1e-2, 2000)
    g = np.array([g_function(v) for v in u])
    assert np.all(np.diff(g) > 0)


def test_tau_star_examples():
    assert tau_star(LinearCoefficients(0.0, 1.0)) == pytest.approx(1 / math.e, rel=1e-15)
    assert tau_star(MG_LIN) == pytest.approx(0.22, abs=0.005)


def test_rate_examples(oracle):
    assert rate_of_convergence(MG_LIN, 0.0).sigma == pytest.approx(1.875, rel=1e-15)
    ts = tau_star(MG_LIN)
    r = rate_of_convergence(MG_LIN, ts)
    assert r.branch == "sigma1"
    assert r.sigma == pytest.approx(0.3 + 1 / ts, rel=1e-15)
    assert r.sigma == pytest.approx(oracle["mg_sigma_at_tau_star"], rel=1e-12)
    r = rate_of_convergence(MG_LIN, 0.5)
    assert r.sigma == pytest.approx(-oracle["mg_root_tau_0.5"].real, abs=1e-6)
    assert r.sigma == pytest.approx(-rightmost_root(MG_LIN, 0.5).re, abs=1e-6)


def test_branch_handoff_at_tau_star():
    ts = tau_star(MG_LIN)
    at = rate_of_convergence(MG_LIN, ts).sigma
    below = rate_of_convergence(MG_LIN, ts * (1 - 1e-9))
    above = rate_of_convergence(MG_LIN, ts * (1 + 1e-9))
    assert below.branch == "sigma2" and below.u2 is None
    assert above.branch == "sigma3" and 0 < above.u2 < math.pi
    # sigma2 approaches with a square-root profile, so the gap shrinks slowly
    gaps = [at - rate_of_convergence(MG_LIN, ts * (1 - e)).sigma for e in (1e-8, 1e-10, 1e-12, 1e-14)]
    assert all(g1 > g2 > 0 for g1, g2 in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-6
    assert abs(above.sigma - at) < 1e-6


def test_rate_continuous_across_tau_star_rounding():
    ts = tau_star(MG_LIN)
    for k in range(-40, 41):
        tau = ts + k * 1e-17
        r = rate_of_convergence(MG_LIN, tau)
        assert abs(r.sigma - (0.3 + 1 / ts)) < 1e-6


@settings(max_examples=200, deadline=None)
@given(a=st.floats(0.0, 3.0), ratio=st.floats(1.01, 10.0), frac=st.floats(0.001, 0.999))
def test_branch_labels_and_positivity(a, ratio, frac):
    lin = LinearCoefficients(a, max(a * ratio, 0.05))
    tau = frac * tau_critical(lin).tau_c
    r = rate_of_convergence(lin, tau)
    assert r.sigma > 0
    ts = tau_star(lin)
    if tau < ts:
        assert r.branch in ("sigma1", "sigma2")
    elif tau > ts:
        assert r.branch == "sigma3"
        assert 0 < r.u2 < math.pi


def test_rate_vanishes_near_tau_c():
    tc = tau_critical(MG_LIN).tau_c
    peak = rate_of_convergence(MG_LIN, tau_star(MG_LIN)).sigma
    assert rate_of_convergence(MG_LIN, 0.999 * tc).sigma < 0.05 * peak


def test_unstable_at_and_beyond_tau_c():
    tc = tau_critical(MG_LIN).tau_c
    for tau in (tc, 1.3):
        with pytest.raises(Unstable):
            rate_of_convergence(MG_LIN, tau)


def test_invalid_inputs():
    with pytest.raises(DomainError):
        rate_of_convergence(LinearCoefficients(-0.1, 1.0), 0.1)
    with pytest.raises(DomainError):
        rate_of_convergence(MG_LIN, -0.1)


def test_b_below_a_has_no_upper_delay_limit():
    # no crossing exists, so every delay is stable
    lin = LinearCoefficients(0.3, 0.168)
    r = rate_of_convergence(lin, 50.0)
    assert r.sigma == pytest.approx(-rightmost_root(lin, 50.0).re, abs=1e-6)


def test_eta_scales_rate():
    assert rate_of_convergence(MG_LIN, 0.25, eta=2.0).sigma == pytest.approx(
        2 * rate_of_convergence(MG_LIN, 0.5).sigma, rel=1e-12)


def test_roc_curve_unimodal_with_peak_near_tau_star():
    rng = random.Random(4)
    for _ in range(20):
        a = rng.uniform(0.05, 2.0)
        lin = LinearCoefficients(a, a * rng.uniform(1.2, 8.0))
        hi = 0.95 * tau_critical(lin).tau_c
        rows = roc_curve(lin, (0.0, hi), 200)
        s = np.array([r[1] for r in rows])
        k = int(np.argmax(s))
        assert np.all(np.diff(s[:k + 1]) > 0) and np.all(np.diff(s[k:]) < 0)
        assert abs(rows[k][0] - tau_star(lin)) <= hi / 199


def test_roc_curve_rejects_bad_grid():
    with pytest.raises(DomainError):
        roc_curve(MG_LIN, (0.5, 0.1), 10)
    with pytest.raises(DomainError):
        roc_curve(MG_LIN, (0.0, 0.5), 1)
