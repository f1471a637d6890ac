"""Command-line interface.

Every command resolves its arguments (and an optional figure preset) into a
flat config dict, runs, and writes CSV or JSON whose header echoes that
config.  ``--from-file`` reads the config back and reruns it.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from typing import Any, Optional

import numpy as np

from . import __version__
from .convergence import rate_of_convergence, roc_curve, tau_star
from .errors import DelayStabError, DomainError, Unbounded
from .hopf import alpha_prime, hopf_gain, normal_form
from .models import (LinearCoefficients, ModelKind, ModelParameters, linearize,
                     solve_equilibrium)
from .robust import IntervalParameters, robust_delay_bound
from .simulator import bifurcation_sweep, eta_grid, integrate, phase_portrait
from .spectral import rightmost_root
from .stability import (_row_from_lin, boundary_chart, stability_chart, tau_critical,
                        thresholds)

log = logging.getLogger("delaystab")

MG, LS = ModelKind.MACKEY_GLASS.value, ModelKind.LASOTA.value
_MG_BASE = {"model": MG, "beta": 0.8, "gamma": 0.3, "n": 10.0}
_LS_BASE = {"model": LS, "beta": 0.9, "gamma": 0.1, "n": 0.1}

# figure presets: values from the figure captions and the text around them
PRESETS: dict[str, dict[str, Any]] = {
    "fig1": {"command": "chart", "model": None, "sweep": "a", "range": [0.0, 3.0],
             "resolution": 61, "tau": 1.0},
    "fig2a": {"command": "chart", **_MG_BASE, "sweep": "beta", "range": [0.5, 1.0], "resolution": 51},
    "fig2b": {"command": "chart", **_MG_BASE, "sweep": "n", "range": [10.0, 100.0], "resolution": 91},
    "fig2c": {"command": "chart", **_LS_BASE, "sweep": "beta", "range": [0.5, 1.0], "resolution": 51},
    "fig2d": {"command": "chart", **_LS_BASE, "sweep": "n", "range": [0.001, 1.0], "resolution": 100},
    "fig3a-noc": {"command": "simulate", **_MG_BASE, "tau": 0.1, "x0": 0.5, "t_end": 50.0},
    "fig3a-damped": {"command": "simulate", **_MG_BASE, "tau": 0.5, "x0": 0.5, "t_end": 50.0},
    "fig3a-cycle": {"command": "simulate", **_MG_BASE, "tau": 1.3, "x0": 0.5, "t_end": 50.0},
    "fig3b-noc": {"command": "simulate", **_LS_BASE, "tau": 1.0, "x0": 0.5, "t_end": 600.0, "h": 0.025},
    "fig3b-damped": {"command": "simulate", **_LS_BASE, "tau": 8.0, "x0": 0.5, "t_end": 600.0, "h": 0.05},
    "fig3b-cycle": {"command": "simulate", **_LS_BASE, "tau": 21.69, "x0": 0.5, "t_end": 600.0, "h": 0.05},
    "fig4a": {"command": "roc", **_MG_BASE, "tau_range": [0.0, 0.5], "resolution": 201},
    "fig4b": {"command": "roc", "model": LS, "beta": 0.4, "gamma": 0.3, "n": 0.1,
              "tau_range": [0.0, 5.0], "resolution": 201},
    "fig5a": {"command": "robust", "model": MG, "beta_interval": [0.1, 2.0],
              "gamma_interval": [0.1, 2.0], "n_interval": [7.0, 7.0], "sweep": "n_hi",
              "range": [7.0, 20.0], "resolution": 53},
    "fig5b": {"command": "robust", "model": LS, "beta_interval": [0.1, 2.0],
              "gamma_interval": [0.1, 2.0], "n_interval": [0.1, 0.9], "sweep": "n_lo",
              "range": [0.1, 0.9], "resolution": 81},
    "fig6": {"command": "bifurcate", **_MG_BASE, "eta_range": [0.9, 1.2], "steps": 31},
    "fig7a": {"command": "phase", **_MG_BASE, "tau": 1.0, "x0": 0.5, "t_end": 200.0},
    "fig7b": {"command": "phase", **_MG_BASE, "tau": 1.3, "x0": 0.5, "t_end": 200.0},
    "fig8a": {"command": "chart", **_MG_BASE, "sweep": "beta", "range": [0.5, 1.0], "resolution": 51},
    "fig8b": {"command": "chart", **_MG_BASE, "sweep": "gamma", "range": [0.05, 0.6], "resolution": 56},
    "fig8c": {"command": "chart", **_LS_BASE, "sweep": "beta", "range": [0.5, 1.0], "resolution": 51},
    "fig8d": {"command": "chart", **_LS_BASE, "sweep": "gamma", "range": [0.02, 0.25], "resolution": 47},
    "fig9": {"command": "bifurcate", **_LS_BASE, "eta_range": [0.9, 1.2], "steps": 31, "h": 0.05},
    "fig10a": {"command": "phase", **_LS_BASE, "tau": 13.69, "x0": 0.5, "t_end": 2000.0, "h": 0.05},
    "fig10b": {"command": "phase", **_LS_BASE, "tau": 21.69, "x0": 0.5, "t_end": 2000.0, "h": 0.05},
    "hopf-mg": {"command": "hopf", **_MG_BASE, "tau": 1.14, "eta": 1.05},
    "hopf-lasota": {"command": "hopf", **_LS_BASE, "tau": 17.69, "eta": 1.05},
}

DEFAULT_FORMAT = {"hopf": "json", "verify": "text"}


# -- formatting ---------------------------------------------------------------

def canonical(config: dict) -> str:
    return json.dumps(config, sort_keys=True, separators=(",", ":"))


def _fmt(v) -> str:
    if v is None:
        return "unbounded"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return "%.12g" % (v + 0.0)  # folds -0.0 into 0
    return str(v)


def _jsonable(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def render(config: dict, result: dict) -> str:
    fmt = config["format"]
    if fmt == "json":
        body = {"config": config, **_jsonable(result)}
        return json.dumps(body, indent=2, sort_keys=False) + "\n"
    if "columns" not in result:
        result = _flatten(result)
    lines = [f"# config: {canonical(config)}", ",".join(result["columns"])]
    lines += [",".join(_fmt(v) for v in row) for row in result["rows"]]
    return "\n".join(lines) + "\n"


def _flatten(result: dict) -> dict:
    cols, vals = [], []
    for k, v in result.items():
        if isinstance(v, dict):
            continue
        if isinstance(v, complex):
            cols += [f"{k}_re", f"{k}_im"]
            vals += [v.real, v.imag]
        else:
            cols.append(k)
            vals.append(v)
    return {"columns": cols, "rows": [vals]}


def read_config(path: str) -> dict:
    with open(path) as fh:
        text = fh.read()
    first = text.lstrip().splitlines()[0] if text.strip() else ""
    if first.startswith("# config:"):
        return json.loads(first[len("# config:"):])
    try:
        return json.loads(text)["config"]
    except (ValueError, KeyError, TypeError):
        raise DomainError(f"{path}: no config header found") from None


# -- helpers ------------------------------------------------------------------

def _params(cfg: dict) -> ModelParameters:
    return ModelParameters(cfg["beta"], cfg["gamma"], cfg["n"], cfg.get("tau") or 0.0,
                           cfg.get("eta", 1.0))


def _select(cfg: dict, params: ModelParameters):
    kind = ModelKind.parse(cfg["model"])
    roots = solve_equilibrium(kind, params)
    idx = cfg.get("root")
    if idx is None:
        if len(roots) > 1:
            xs = ", ".join(f"{r.x_star:.6g}" for r in roots)
            raise DomainError(f"{len(roots)} equilibria ({xs}); pick one with --root")
        idx = 0
    if not 0 <= idx < len(roots):
        raise DomainError(f"--root {idx} out of range ({len(roots)} equilibria)")
    eq = roots[idx]
    return kind, eq, linearize(kind, params, eq)


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("DELAYSTAB_WORKERS", "1")))
    except ValueError:
        raise DomainError("DELAYSTAB_WORKERS must be an integer") from None


@contextmanager
def _mapper():
    n = _workers()
    if n == 1:
        yield map
        return
    with ProcessPoolExecutor(max_workers=n) as pool:
        # Executor.map yields results in submission order
        yield pool.map


def _linspace(lo: float, hi: float, count: int) -> list[float]:
    if count < 1 or (count > 1 and not hi > lo):
        raise DomainError(f"bad range [{lo}, {hi}] with resolution {count}")
    return [float(v) for v in np.linspace(lo, hi, count)]


# -- commands -----------------------------------------------------------------

def cmd_equilibrium(cfg):
    params = _params(cfg)
    kind = ModelKind.parse(cfg["model"])
    rows = []
    for i, eq in enumerate(solve_equilibrium(kind, params)):
        lin = linearize(kind, params, eq)
        rows.append([i, eq.x_star, eq.residual, lin.a, lin.b, lin.hopf_possible])
    return {"columns": ["index", "x_star", "residual", "a", "b", "hopf_possible"], "rows": rows}


def cmd_thresholds(cfg):
    params = _params(cfg)
    _, _, lin = _select(cfg, params)
    r = _row_from_lin(params.tau, lin, params.eta)
    return {"columns": ["tau", "tau_noc", "tau_suff", "tau_c", "period"],
            "rows": [[params.tau, r.tau_noc, r.tau_suff, r.tau_c, r.period]]}


def cmd_chart(cfg):
    sweep = cfg["sweep"]
    values = _linspace(*cfg["range"], cfg["resolution"])
    eta = cfg.get("eta", 1.0)
    if sweep == "a":
        rows = boundary_chart(values, tau=cfg.get("tau") or 1.0, eta=eta)
        return {"columns": ["a", "b_noc", "b_suff", "b_crit"],
                "rows": [[r.a, r.b_noc, r.b_suff, r.b_crit] for r in rows]}
    if sweep == "b":
        fixed = {"a": cfg["a"]}
        kind = None
    else:
        kind = ModelKind.parse(cfg["model"])
        fixed = {k: cfg[k] for k in ("beta", "gamma", "n") if k != sweep}
    with _mapper() as m:
        rows = stability_chart(sweep, values, fixed, kind, eta, cfg.get("root"), mapper=m)
    return {"columns": [sweep, "tau_noc", "tau_suff", "tau_c", "period"],
            "rows": [[r.value, r.tau_noc, r.tau_suff, r.tau_c, r.period] for r in rows]}


def cmd_roc(cfg):
    params = _params(cfg)
    _, _, lin = _select(cfg, params)
    lo, hi = cfg["tau_range"]
    rows = roc_curve(lin, (lo, hi), cfg["resolution"], params.eta)
    return {"columns": ["tau", "sigma", "branch"], "rows": [list(r) for r in rows]}


def _robust_row(kind, beta_iv, gamma_iv, n_iv):
    iv = IntervalParameters(tuple(beta_iv), tuple(gamma_iv), tuple(n_iv))
    out = []
    for eq in ("worst-case", "nominal"):
        try:
            out.append(robust_delay_bound(kind, iv, eq))
        except Unbounded:
            out.append(None)
    return out


def cmd_robust(cfg):
    kind = ModelKind.parse(cfg["model"])
    b_iv, g_iv, n_iv = cfg["beta_interval"], cfg["gamma_interval"], cfg["n_interval"]
    sweep = cfg.get("sweep")
    if sweep is None:
        return {"columns": ["tau_rob", "tau_rob_nominal"], "rows": [_robust_row(kind, b_iv, g_iv, n_iv)]}
    if sweep not in ("n_lo", "n_hi"):
        raise DomainError(f"robust sweep must be n_lo or n_hi, got {sweep!r}")
    rows = []
    for v in _linspace(*cfg["range"], cfg["resolution"]):
        if sweep == "n_hi":
            n = [min(n_iv[0], v), v]
        else:
            # a degenerate input interval moves as a whole
            n = [v, v] if n_iv[0] == n_iv[1] else [v, max(n_iv[1], v)]
        rows.append([v] + _robust_row(kind, b_iv, g_iv, n))
    return {"columns": [sweep, "tau_rob", "tau_rob_nominal"], "rows": rows}


def cmd_hopf(cfg):
    params = _params(cfg)
    kind = ModelKind.parse(cfg["model"])
    report = normal_form(kind, params, index=cfg.get("root"))
    at_c = normal_form(kind, params.with_(eta=report.eta_c), index=cfg.get("root"))
    return {**report.to_dict(), "at_eta_c": at_c.to_dict()}


def _trajectory(cfg):
    params = _params(cfg)
    kind = ModelKind.parse(cfg["model"])
    return integrate(kind, params, cfg["x0"], cfg["t_end"], cfg.get("h"))


def cmd_simulate(cfg):
    traj = _trajectory(cfg)
    k = cfg.get("every") or 1
    return {"columns": ["t", "x"], "rows": [[t, x] for t, x in zip(traj.t[::k], traj.x[::k])]}


def cmd_phase(cfg):
    traj = _trajectory(cfg)
    k = cfg.get("every") or 1
    pairs = phase_portrait(traj, cfg.get("transient") or 0.0)[::k]
    return {"columns": ["x_t", "x_t_minus_tau"], "rows": pairs.tolist()}


def cmd_bifurcate(cfg):
    params = _params(cfg)
    kind, eq, lin = _select(cfg, params)
    if not cfg.get("tau"):
        params = params.with_(tau=tau_critical(lin, 1.0).tau_c)
    if cfg.get("etas"):
        etas = [float(e) for e in cfg["etas"]]
    else:
        etas = eta_grid(*cfg["eta_range"], cfg["steps"])
    with _mapper() as m:
        rows = bifurcation_sweep(kind, params, etas, h=cfg.get("h"), index=cfg.get("root"), mapper=m)
    return {"columns": ["eta", "x_min", "x_max"], "rows": [[r.eta, r.x_min, r.x_max] for r in rows]}


def cmd_verify(cfg):
    """Spectral-oracle cross-checks on seeded random draws."""
    rng = random.Random(cfg.get("seed", 0))
    samples = cfg.get("samples", 50)
    checks = []

    worst = 0.0
    for _ in range(samples):
        a = rng.uniform(0.05, 2.0)
        b = a * rng.uniform(1.05, 6.0)
        lin = LinearCoefficients(a, b)
        tau = rng.uniform(0.01, 0.95) * tau_critical(lin).tau_c
        worst = max(worst, abs(rate_of_convergence(lin, tau).sigma + rightmost_root(lin, tau).re))
    checks.append(("rate of convergence vs rightmost root", worst < 1e-6, worst))

    worst = 0.0
    for _ in range(samples):
        a = rng.uniform(0.05, 2.0)
        lin = LinearCoefficients(a, a * rng.uniform(1.05, 6.0))
        tc = tau_critical(lin).tau_c
        lo, hi = rightmost_root(lin, tc * 0.999).re, rightmost_root(lin, tc * 1.001).re
        worst = max(worst, 0.0 if lo < 0 < hi else 1.0)
    checks.append(("rightmost root changes sign at tau_c", worst == 0.0, worst))

    worst = 0.0
    for _ in range(samples):
        a = rng.uniform(0.05, 2.0)
        lin = LinearCoefficients(a, a * rng.uniform(1.05, 6.0))
        tau = rng.uniform(0.2, 3.0)
        eta_c, w = hopf_gain(lin, tau)
        step = 1e-5
        fd = (rightmost_root(lin, tau, eta_c + step).re - rightmost_root(lin, tau, eta_c - step).re) / (2 * step)
        worst = max(worst, abs(fd - alpha_prime(lin, tau, eta_c, w)))
    checks.append(("alpha' vs finite difference", worst < 1e-5, worst))

    worst = 0.0
    for _ in range(samples):
        a = rng.uniform(0.0, 2.0)
        lin = LinearCoefficients(a, max(a, 0.01) * rng.uniform(1.05, 6.0))
        worst = max(worst, abs(tau_star(lin) * lin.b * math.exp(lin.a * tau_star(lin)) - math.exp(-1)))
    checks.append(("tau* solves b*tau*exp(a*tau) = 1/e", worst < 1e-12, worst))

    rows = [[name, ok, err] for name, ok, err in checks]
    return {"columns": ["check", "passed", "max_error"], "rows": rows}


COMMANDS = {
    "equilibrium": cmd_equilibrium,
    "thresholds": cmd_thresholds,
    "chart": cmd_chart,
    "roc": cmd_roc,
    "robust": cmd_robust,
    "hopf": cmd_hopf,
    "simulate": cmd_simulate,
    "phase": cmd_phase,
    "bifurcate": cmd_bifurcate,
    "verify": cmd_verify,
}


def execute(config: dict) -> dict:
    return COMMANDS[config["command"]](config)


# -- argument parsing ---------------------------------------------------------

def _model_args(p, tau=True):
    p.add_argument("--model", help="mackey-glass or lasota")
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--n", type=float)
    if tau:
        p.add_argument("--tau", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--root", type=int, help="equilibrium index when several exist")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="delaystab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, model=True, tau=True):
        p = sub.add_parser(name, help=help_)
        if model:
            _model_args(p, tau)
        p.add_argument("--preset", choices=sorted(k for k, v in PRESETS.items() if v["command"] == name) or None)
        p.add_argument("--format", choices=["csv", "json"] + (["text"] if name == "verify" else []))
        p.add_argument("-o", "--output", help="write here instead of stdout")
        p.add_argument("--from-file", help="rerun the config recorded in a previous output")
        return p

    add("equilibrium", "positive equilibria and linear coefficients")
    add("thresholds", "tau_noc, tau_suff, tau_c and Hopf period")
    p = add("chart", "threshold grid over one parameter")
    p.add_argument("--sweep", choices=["beta", "n", "gamma", "b", "a"])
    p.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--resolution", type=int)
    p.add_argument("--a", type=float, help="fixed a for a generic sweep over b")
    p = add("roc", "rate of convergence against delay")
    p.add_argument("--tau-range", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--resolution", type=int)
    p = add("robust", "robust delay bound under interval uncertainty", tau=False)
    for name in ("beta", "gamma", "n"):
        p.add_argument(f"--{name}-interval", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--sweep", choices=["n_lo", "n_hi"])
    p.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--resolution", type=int)
    add("hopf", "Hopf normal-form report")
    for name in ("simulate", "phase"):
        p = add(name, "integrate the delay equation" if name == "simulate" else "(x(t), x(t-tau)) pairs")
        p.add_argument("--x0", type=float, help="constant initial history")
        p.add_argument("--t-end", type=float)
        p.add_argument("--h", type=float, help="step size")
        p.add_argument("--every", type=int, help="keep every k-th sample")
        if name == "phase":
            p.add_argument("--transient", type=float, help="fraction of the run to drop")
    p = add("bifurcate", "post-transient min/max against eta at tau_c")
    p.add_argument("--eta-range", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--steps", type=int)
    p.add_argument("--etas", type=float, nargs="+")
    p.add_argument("--h", type=float)
    p = add("verify", "spectral-oracle cross-checks", model=False)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    return parser


_DEFAULTS = {
    "eta": 1.0, "tau": None, "root": None,
    "resolution": 101, "x0": 0.5, "t_end": 200.0, "h": None, "every": 1,
    "steps": 31, "eta_range": [0.9, 1.2], "samples": 50, "seed": 0, "transient": 0.0,
}
_NON_CONFIG = {"preset", "output", "from_file", "verbose", "format", "command"}


def resolve_config(ns: argparse.Namespace) -> dict:
    cfg: dict[str, Any] = {"command": ns.command}
    for k, v in _DEFAULTS.items():
        if hasattr(ns, k):
            cfg[k] = v
    if ns.preset:
        cfg.update({k: v for k, v in PRESETS[ns.preset].items() if k != "command"})
        cfg["preset"] = ns.preset
    for k, v in vars(ns).items():
        if k in _NON_CONFIG or v is None:
            continue
        cfg[k] = list(v) if isinstance(v, (list, tuple)) else v
    cfg["format"] = ns.format or cfg.get("format") or DEFAULT_FORMAT.get(ns.command, "csv")
    if "model" in cfg and cfg["model"] is not None:
        cfg["model"] = ModelKind.parse(cfg["model"]).value
    _validate(cfg)
    return cfg


_REQUIRED = {
    "equilibrium": ["model", "beta", "gamma", "n"],
    "thresholds": ["model", "beta", "gamma", "n"],
    "chart": ["sweep", "range"],
    "roc": ["model", "beta", "gamma", "n", "tau_range"],
    "robust": ["model", "beta_interval", "gamma_interval", "n_interval"],
    "hopf": ["model", "beta", "gamma", "n", "tau"],
    "simulate": ["model", "beta", "gamma", "n", "tau"],
    "phase": ["model", "beta", "gamma", "n", "tau"],
    "bifurcate": ["model", "beta", "gamma", "n"],
    "verify": [],
}


def _validate(cfg: dict) -> None:
    required = list(_REQUIRED[cfg["command"]])
    if cfg["command"] == "chart":
        sweep = cfg.get("sweep")
        if sweep == "b":
            required.append("a")
        elif sweep in ("beta", "n", "gamma"):
            required += ["model"] + [k for k in ("beta", "gamma", "n") if k != sweep]
    if cfg["command"] == "robust" and cfg.get("sweep"):
        required.append("range")
    missing = [k for k in required if cfg.get(k) is None]
    if missing:
        raise DomainError("missing required option(s): " + ", ".join("--" + k.replace("_", "-") for k in missing))


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if ns.from_file:
            config = read_config(ns.from_file)
            if config.get("command") != ns.command:
                raise DomainError(f"{ns.from_file} records command {config.get('command')!r}, not {ns.command!r}")
        else:
            config = resolve_config(ns)
        result = execute(config)
    except DelayStabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if config["format"] == "text":
        text = "".join(f"{'PASS' if ok else 'FAIL'}  {name}  (max error {_fmt(err)})\n"
                       for name, ok, err in result["rows"])
    else:
        text = render(config, result)
    if ns.output:
        with open(ns.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if config["command"] == "verify" and not all(r[1] for r in result["rows"]):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
