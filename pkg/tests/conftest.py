import re

import pytest

from delaystab import ModelParameters

MG_PARAMS = ModelParameters(beta=0.8, gamma=0.3, n=10.0)
LASOTA_PARAMS = ModelParameters(beta=0.9, gamma=0.1, n=0.1)
LASOTA_ROC_PARAMS = ModelParameters(beta=0.4, gamma=0.3, n=0.1)

# Reference values computed at 40 significant digits with mpmath, independently of
# the package (closed forms, findroot, Lambert W).  test_oracles.py recomputes them.
ORACLE = {
    "mg_x_star": 1.0524097791489254102,
    "mg_b": 1.575,
    "mg_tau_noc": 0.21873880878089998423,
    "mg_tau_c": 1.1398809097167968008,
    "mg_omega0": 1.5461646096066227062,
    "mg_period": 4.0637234018557461301,
    "mg_sigma_at_tau_star": 4.8716624570340936455,
    "mg_root_tau_0.1": complex(-2.2779236608920635988, 0.0),
    "mg_root_tau_0.5": complex(-1.059996023896079897, 2.5656152498087984303),
    "mg_root_tau_1.0": complex(-0.083176343953146262699, 1.6978161567723820776),
    "lasota_x_star": 1.7128708415613911737,
    "lasota_b": 0.16128708415613912577,
    "lasota_tau_c": 17.69775837675870876,
    "lasota_omega0": 0.12654455150495220943,
    "lasota_period": 49.651962352039309735,
    "lasota_roc_x_star": 0.66069658470359635199,
    "lasota_roc_b": 0.16820897541107889771,
    "lasota_roc_tau_noc": 1.425875010946248193,
}


@pytest.fixture
def oracle():
    return ORACLE


_CRITERION = re.compile(r"test_criterion_(\d+)([a-z]?)_")


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    results: dict[int, list[tuple[str, bool]]] = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call" and outcome == "passed":
                continue
            m = _CRITERION.search(getattr(rep, "nodeid", ""))
            if not m or "test_acceptance" not in rep.nodeid:
                continue
            name = rep.nodeid.split("::")[-1]
            results.setdefault(int(m.group(1)), []).append((name, outcome == "passed"))
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        parts = results[num]
        ok = all(p for _, p in parts)
        failing = [n for n, p in parts if not p]
        detail = f"  (failing: {', '.join(failing)})" if failing else ""
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}{detail}")
