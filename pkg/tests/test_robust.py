import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from delaystab import (IntervalParameters, LinearCoefficients, ModelKind, ModelParameters,
                       kharitonov_sufficient, linearize, robust_delay_bound, select_equilibrium,
                       solve_equilibrium, thresholds)
from delaystab.errors import DomainError, NoEquilibrium, Unbounded
from delaystab.robust import lasota_equilibrium

MG, LS = ModelKind.MACKEY_GLASS, ModelKind.LASOTA


def test_kharitonov_examples():
    lin = LinearCoefficients(0.3, 1.575)
    assert kharitonov_sufficient(lin, 0.5)
    assert not kharitonov_sufficient(lin, 0.997)
    assert 0.997 < thresholds(lin).tau_suff
    assert kharitonov_sufficient(LinearCoefficients(0.0, 1e6), 0.0)
    with pytest.raises(DomainError):
        kharitonov_sufficient(LinearCoefficients(0.3, 0.0), 1.0)


def test_interval_validation():
    for bad in [(0.0, 1.0), (2.0, 1.0), (float("nan"), 1.0), (1.0, float("inf"))]:
        with pytest.raises(DomainError):
            IntervalParameters(bad, (0.1, 2.0), (7.0, 8.0))


def test_corners_deduplicate_degenerate_intervals():
    assert len(IntervalParameters((0.1, 2.0), (0.1, 2.0), (7.0, 9.0)).corners()) == 8
    assert len(IntervalParameters((0.8, 0.8), (0.3, 0.3), (7.0, 9.0)).corners()) == 2


def test_mackey_glass_example():
    iv = IntervalParameters((0.1, 2.0), (0.1, 2.0), (7.0, 7.0))
    assert robust_delay_bound(MG, iv) == pytest.approx(0.1 / (2 * (7 * 1.9 - 0.1)), rel=1e-15)
    assert robust_delay_bound(MG, iv) == pytest.approx(0.00379, abs=1e-5)


@pytest.mark.parametrize("kind,params", [
    (MG, ModelParameters(0.8, 0.3, 10.0)),
    (LS, ModelParameters(0.9, 0.1, 0.1)),
    (LS, ModelParameters(0.4, 0.3, 0.1)),
])
def test_degenerate_interval_is_point_bound(kind, params):
    iv = IntervalParameters(*[(v, v) for v in (params.beta, params.gamma, params.n)])
    lin = linearize(kind, params, select_equilibrium(kind, params))
    assert robust_delay_bound(kind, iv) == pytest.approx(1.0 / lin.b, rel=1e-12)


def test_mackey_glass_unbounded():
    iv = IntervalParameters((1.0, 1.0), (0.9, 1.0), (1.0, 1.05))
    with pytest.raises(Unbounded):
        robust_delay_bound(MG, iv)


def _mg_box():
    lo = st.floats(0.05, 2.0)
    width = st.floats(0.0, 1.5)
    return st.builds(
        lambda bl, bw, gl, gw, nl, nw: IntervalParameters((bl, bl + bw), (gl, gl + gw), (nl, nl + nw)),
        lo, width, lo, width, st.floats(1.0, 20.0), st.floats(0.0, 10.0))


@settings(max_examples=150, deadline=None)
@given(iv=_mg_box(), fracs=st.tuples(*[st.floats(0, 1)] * 3))
def test_mackey_glass_dominance(iv, fracs):
    try:
        bound = robust_delay_bound(MG, iv)
    except Unbounded:
        return
    beta, gamma, n = (lo + f * (hi - lo) for (lo, hi), f in zip((iv.beta, iv.gamma, iv.n), fracs))
    assume(beta > gamma)
    p = ModelParameters(beta, gamma, n)
    lin = linearize(MG, p, select_equilibrium(MG, p))
    assume(lin.hopf_possible)
    th = thresholds(lin)
    assert bound <= 1.0 / lin.b * (1 + 1e-12)
    assert 1.0 / lin.b < th.tau_suff < th.tau_c


@settings(max_examples=150, deadline=None)
@given(iv=_mg_box(), which=st.sampled_from(["beta", "gamma", "n"]), side=st.sampled_from([0, 1]),
       amount=st.floats(0.0, 1.0))
def test_mackey_glass_widening_never_increases_bound(iv, which, side, amount):
    try:
        bound = robust_delay_bound(MG, iv)
    except Unbounded:
        return
    lo, hi = getattr(iv, which)
    new = (lo * (1 - 0.9 * amount), hi) if side == 0 else (lo, hi * (1 + amount))
    wider = IntervalParameters(**{**{k: getattr(iv, k) for k in ("beta", "gamma", "n")}, which: new})
    assert robust_delay_bound(MG, wider) <= bound


def test_lasota_worst_case_dominates_every_realisation():
    iv = IntervalParameters((0.1, 2.0), (0.1, 2.0), (0.3, 0.9))
    bound = robust_delay_bound(LS, iv)
    grid = np.linspace(0, 1, 5)
    for fb, fg, fn in itertools.product(grid, grid, grid):
        p = ModelParameters(0.1 + 1.9 * fb, 0.1 + 1.9 * fg, 0.3 + 0.6 * fn)
        try:
            roots = solve_equilibrium(LS, p)
        except NoEquilibrium:
            continue
        for eq in roots:
            lin = linearize(LS, p, eq)
            if lin.b > 0:
                assert bound <= 1.0 / lin.b * (1 + 1e-12)


def test_lasota_nominal_and_worst_case():
    iv = IntervalParameters((0.8, 1.0), (0.08, 0.12), (0.05, 0.15))
    assert lasota_equilibrium(iv, "worst-case") >= lasota_equilibrium(iv, "nominal")
    assert robust_delay_bound(LS, iv) <= robust_delay_bound(LS, iv, "nominal")
    with pytest.raises(DomainError):
        lasota_equilibrium(iv, "median")


def test_lasota_bound_increases_with_n_lo():
    bounds = [robust_delay_bound(LS, IntervalParameters((0.1, 2.0), (0.1, 2.0), (n, 0.9)))
              for n in np.linspace(0.1, 0.9, 33)]
    assert all(a < b for a, b in zip(bounds, bounds[1:]))


def test_lasota_degenerate_n_interval_is_not_monotone_at_top():
    # with n_hi tied to n_lo, the corner maximising x* moves and the curve
    # flattens; the swept family therefore fixes n_hi (see README)
    bounds = [robust_delay_bound(LS, IntervalParameters((0.1, 2.0), (0.1, 2.0), (n, n)))
              for n in np.linspace(0.1, 0.9, 81)]
    assert bounds[0] == pytest.approx(0.231, abs=1e-3)
    assert bounds[-1] > bounds[0]
    assert not all(a < b for a, b in zip(bounds, bounds[1:]))
