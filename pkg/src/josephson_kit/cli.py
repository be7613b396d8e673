"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 violated physical
precondition, 3 acceptance failure (``reproduce`` only).
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import acceptance, dynamics, oracle, thermal
from . import potentials as pot
from . import wellmodes as wm
from ._version import __version__
from .constants import beta_delta_e
from .density import EffectiveDensityMatrixLR, to_zero_one
from .errors import ConfigError, InvalidInitialState, PhysicsError
from .io import csv_text, dumps, provenance, write_csv, write_json

DEFAULTS = {
    "modes": {"family": "gaussian", "param": [], "V0": 0.0, "n": None, "no_convergence_check": False},
    "simulate": {"engine": "generalized", "family": None, "param": [], "deltaE": 1.0, "V0": 0.0,
                 "N": 100.0, "Z0": 0.3, "theta0": 0.0, "A0": None, "f": None, "thermal_x": None,
                 "kick": 0.0, "periods": 10.0, "samples_per_period": 100,
                 "steps_per_period": dynamics.DEFAULT_STEPS_PER_PERIOD, "backend": None},
    "thermal": {"N": 100, "x_range": None, "T_range": None, "points": 200, "scale": "log",
                "deltaE_over_hbar": 1000.0, "convention": "angular"},
    "limits": {"deltaE_over_hbar": 1000.0, "convention": "angular", "scenarios": None},
    "isolines": {"f_values": [0.2, 0.4, 0.6, 0.8, 1.0], "v_ratio": 0.0, "resolution": 200},
    "oracle": {"N": 4, "lift": "thermal", "x": 1.0, "kick": 0.3, "V0_ratio": 0.05, "Z0": 0.4,
               "theta0": 0.9, "periods": 10.0, "samples": 201, "tolerance": 1e-8, "backend": None},
    "reproduce": {"criteria": None, "backend": None},
}
COMMON = {"out": None, "seed": None, "emit_plot_script": False}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _floats(text):
    try:
        return [float(v) for v in str(text).replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"expected a list of numbers, got {text!r}") from None


def _range(text):
    parts = str(text).split(":")
    if len(parts) != 2:
        raise ConfigError(f"expected a range a:b, got {text!r}")
    lo, hi = (float(p) for p in parts)
    if not 0 < lo < hi:
        raise ConfigError(f"range {text!r} must satisfy 0 < a < b")
    return lo, hi


def _params(pairs):
    out = {}
    for item in pairs or []:
        if isinstance(item, dict):
            out.update(item)
            continue
        key, sep, value = str(item).partition("=")
        if not sep:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"--param {key} needs a number") from None
    for k, v in out.items():
        if k == "n":
            out[k] = int(v)
    return out


def build_parser():
    p = _Parser(prog="josephson-kit", description="Two-mode Josephson dynamics of non-interacting bosons.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON file with option values (flags win)")
    common.add_argument("--out", type=Path, help="output directory (default: print to stdout)")
    common.add_argument("--seed", type=int)
    common.add_argument("--emit-plot-script", action="store_true", default=None,
                        help="also write a small matplotlib script next to the data")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("modes", parents=[common], help="two lowest modes and junction parameters")
    m.add_argument("--family", choices=sorted(pot.FAMILIES))
    m.add_argument("--potential", type=Path, help="JSON/CSV potential file instead of a family")
    m.add_argument("--param", action="append", help="family parameter key=value (repeatable)")
    m.add_argument("--V0", type=float)
    m.add_argument("--n", type=int, help="grid nodes")
    m.add_argument("--no-convergence-check", action="store_true", default=None)

    s = sub.add_parser("simulate", parents=[common], help="integrate the Josephson flow")
    s.add_argument("--engine", choices=["standard", "generalized", "liouville"])
    s.add_argument("--family", choices=sorted(pot.FAMILIES), help="take DeltaE from a potential family")
    s.add_argument("--param", action="append")
    s.add_argument("--deltaE", type=float)
    s.add_argument("--V0", type=float)
    s.add_argument("--N", type=float)
    s.add_argument("--Z0", type=float)
    s.add_argument("--theta0", type=float)
    s.add_argument("--A0", type=float)
    s.add_argument("--f", type=float, help="set A0 from f = sqrt(Z0^2 + (2 A0 / N)^2)")
    s.add_argument("--thermal-x", type=float, help="start from the thermal state at x = beta DeltaE")
    s.add_argument("--kick", type=float, help="left/right kick deltaN_LR / N added to the thermal state")
    s.add_argument("--periods", type=float)
    s.add_argument("--samples-per-period", type=int)
    s.add_argument("--steps-per-period", type=int)
    s.add_argument("--backend", choices=["numba", "numpy"])

    t = sub.add_parser("thermal", parents=[common], help="condensation degree versus temperature")
    t.add_argument("--N", type=int)
    t.add_argument("--x-range", help="a:b range of x = DeltaE / k_B T")
    t.add_argument("--T-range", help="a:b temperature range in kelvin (uses --deltaE-over-hbar)")
    t.add_argument("--points", type=int)
    t.add_argument("--scale", choices=["log", "linear"])
    t.add_argument("--deltaE-over-hbar", type=float)
    t.add_argument("--convention", choices=["angular", "cyclic"])

    lim = sub.add_parser("limits", parents=[common], help="maximum imbalance / minimum f table")
    lim.add_argument("--deltaE-over-hbar", type=float)
    lim.add_argument("--convention", choices=["angular", "cyclic"])

    iso = sub.add_parser("isolines", parents=[common], help="contours of constant f")
    iso.add_argument("--f-values", type=_floats)
    iso.add_argument("--v-ratio", type=float)
    iso.add_argument("--resolution", type=int)

    o = sub.add_parser("oracle", parents=[common], help="many-body verification report")
    o.add_argument("--N", type=int)
    o.add_argument("--lift", choices=["thermal", "product"])
    o.add_argument("--x", type=float)
    o.add_argument("--kick", type=float, help="kick as a fraction of the largest admissible one")
    o.add_argument("--V0-ratio", type=float)
    o.add_argument("--Z0", type=float)
    o.add_argument("--theta0", type=float)
    o.add_argument("--periods", type=float)
    o.add_argument("--samples", type=int)
    o.add_argument("--tolerance", type=float)
    o.add_argument("--backend", choices=["numba", "numpy"])

    r = sub.add_parser("reproduce", parents=[common], help="run the acceptance suite")
    r.add_argument("--criteria", type=lambda s: [int(v) for v in _floats(s)])
    r.add_argument("--backend", choices=["numba", "numpy"])
    return p


def _merge(args):
    cmd = args.command
    cfg = {}
    if getattr(args, "config", None):
        path = args.config
        if not path.exists():
            raise ConfigError(f"config file {path} not found")
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path}: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
        cfg = {k: v for k, v in raw.items() if not isinstance(v, dict) or k == "param"}
        cfg.update(raw.get(cmd, {}))
    allowed = set(DEFAULTS[cmd]) | set(COMMON) | {"potential", "f_values"}
    unknown = set(cfg) - allowed - set(DEFAULTS) - {"command", "config"}
    if unknown:
        raise ConfigError(f"unknown config keys for {cmd}: {sorted(unknown)}")
    opts = {**COMMON, **DEFAULTS[cmd], **{k: v for k, v in cfg.items() if k in allowed}}
    for k, v in vars(args).items():
        if v is not None and k not in ("command", "config"):
            opts[k] = v
    if isinstance(opts.get("out"), str):
        opts["out"] = Path(opts["out"])
    return opts


def _emit(opts, name, columns, rows, config, stdout):
    prov = provenance(config, command=config.get("command"))
    if opts["out"] is None:
        stdout.write(csv_text(columns, rows, prov))
        return None
    return write_csv(opts["out"] / name, columns, rows, prov)


PLOT_TEMPLATE = '''"""Plot {name} (generated by josephson-kit; needs matplotlib)."""
import csv
import matplotlib.pyplot as plt

with open({path!r}) as fh:
    rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
head, body = rows[0], rows[1:]
cols = {{h: [float(r[i]) for r in body] for i, h in enumerate(head) if h not in ("label",)}}
plt.plot(cols[{x!r}], cols[{y!r}])
plt.xlabel({x!r})
plt.ylabel({y!r})
plt.savefig({png!r}, dpi=150)
'''


def _plot_script(opts, csv_path, x, y):
    if not opts.get("emit_plot_script") or csv_path is None:
        return
    script = csv_path.with_suffix(".plot.py")
    script.write_text(PLOT_TEMPLATE.format(name=csv_path.name, path=str(csv_path), x=x, y=y,
                                           png=str(csv_path.with_suffix(".png"))))


# ------------------------------------------------------------- commands

def _load_modes(opts):
    if opts.get("potential"):
        spec = pot.load_potential(opts["potential"])
    else:
        kw = _params(opts.get("param"))
        if opts.get("n"):
            kw["n"] = int(opts["n"])
        spec = pot.build_family(opts["family"], **kw)
    return wm.solve_lowest_modes(spec, check_convergence=not opts.get("no_convergence_check"))


def cmd_modes(opts, config, stdout):
    modes = _load_modes(opts)
    V0 = float(opts["V0"])
    params = wm.two_mode_params(modes, V0)
    report = {"E0": modes.E0, "E1": modes.E1, "deltaE": modes.deltaE, "Emean": modes.Emean,
              "overlapL": modes.overlapL, "epsilon": modes.epsilon, "grid_points": int(modes.grid.size),
              "convergence_estimate": modes.convergence_estimate, "two_mode_params": params.to_dict()}
    if V0:
        pm = wm.perturbed_modes(modes, V0)
        report["perturbed"] = {"Etilde0": pm.Etilde0, "Etilde1": pm.Etilde1, "normC": pm.normC,
                               "mixing": pm.mixing}
    report["provenance"] = provenance(config, command="modes")
    if opts["out"] is None:
        stdout.write(dumps(report, indent=2) + "\n")
        return 0
    write_json(opts["out"] / "modes.json", report)
    phiL, phiR = wm.left_right_states(modes)
    path = write_csv(opts["out"] / "modes.csv", ("x", "V", "phi0", "phi1", "phiL", "phiR"),
                     np.column_stack([modes.grid, modes.spec.values, modes.phi0, modes.phi1, phiL, phiR]),
                     provenance(config, command="modes"))
    _plot_script(opts, path, "x", "phi0")
    return 0


def _simulation_setup(opts):
    if opts.get("family"):
        modes = _load_modes({**opts, "n": None, "no_convergence_check": False})
        params = wm.two_mode_params(modes, float(opts["V0"]))
    else:
        if not opts["deltaE"] > 0:
            raise ConfigError("--deltaE must be positive")
        params = wm.TwoModeParams.from_gap(float(opts["deltaE"]), float(opts["V0"]))
    N = float(opts["N"])
    if opts.get("thermal_x") is not None:
        if float(N) != int(N):
            raise ConfigError("--thermal-x needs an integer N")
        ens = thermal.canonical_alphas(int(N), float(opts["thermal_x"]))
        init = thermal.kicked_state(thermal.equilibrium_state(ens, params.v_ratio), float(opts["kick"]) * N)
        return params, init
    Z0, th0 = float(opts["Z0"]), float(opts["theta0"])
    if opts.get("A0") is not None and opts.get("f") is not None:
        raise ConfigError("give either --A0 or --f, not both")
    if opts.get("A0") is not None:
        A0 = float(opts["A0"])
    else:
        f = 1.0 if opts.get("f") is None else float(opts["f"])
        if not abs(Z0) <= f <= 1:
            raise InvalidInitialState(f"need |Z0| <= f <= 1, got Z0 = {Z0}, f = {f}")
        A0 = 0.5 * N * np.sqrt(f * f - Z0 * Z0)
    return params, EffectiveDensityMatrixLR.from_polar(N, Z0, th0, A0)


def cmd_simulate(opts, config, stdout):
    params, init = _simulation_setup(opts)
    engine = opts["engine"]
    if engine == "standard" and abs(init.f - 1) > 1e-9:
        raise InvalidInitialState(f"the standard engine needs a pure state (f = 1), got f = {init.f:.12g}")
    n = int(round(float(opts["periods"]) * int(opts["samples_per_period"])))
    t = np.linspace(0, float(opts["periods"]) * params.period, n + 1)
    kw = {"steps_per_period": int(opts["steps_per_period"]), "backend": opts.get("backend")}
    traj = dynamics.integrate(engine, params, init, t, **kw)
    if opts["out"] is None:
        stdout.write(csv_text(dynamics.CSV_COLUMNS, traj.columns(), provenance(config, command="simulate")))
        return 0
    path = traj.to_csv(opts["out"] / "trajectory.csv", config)
    traj.write_sidecar(opts["out"] / "trajectory.json", config)
    _plot_script(opts, path, "t", "Z")
    return 0


def cmd_thermal(opts, config, stdout):
    N = int(opts["N"])
    npts = int(opts["points"])
    space = np.geomspace if opts["scale"] == "log" else np.linspace
    if opts.get("T_range"):
        lo, hi = _range(opts["T_range"])
        T = space(lo, hi, npts)
        omega = thermal.angular_frequency(opts["deltaE_over_hbar"], opts["convention"])
        x = beta_delta_e(T, omega)
    else:
        lo, hi = _range(opts.get("x_range") or "0.001:10")
        x = space(lo, hi, npts)
        T = None
    g = thermal.condensation_curve(N, x)
    cols = ("x", "kT_over_deltaE", "f")
    rows = np.column_stack([x, 1 / x, g])
    if T is not None:
        cols = ("T",) + cols
        rows = np.column_stack([T, rows])
    path = _emit(opts, "thermal.csv", cols, rows, config, stdout)
    _plot_script(opts, path, "kT_over_deltaE", "f")
    return 0


def cmd_limits(opts, config, stdout):
    scen = opts.get("scenarios")
    scen = None if scen is None else [(s[0], float(s[1]), int(s[2])) for s in scen]
    rows = thermal.limits_table(scen, float(opts["deltaE_over_hbar"]), opts["convention"])
    _emit(opts, "limits.csv", ("label", "T", "N", "max_imbalance", "min_f"),
          [(r.label, r.T, r.N, r.max_imbalance, r.min_f) for r in rows], config, stdout)
    return 0


def cmd_isolines(opts, config, stdout):
    levels = [float(f) for f in opts["f_values"]]
    v = float(opts["v_ratio"])
    lines = thermal.isolines(levels, v, int(opts["resolution"]))
    if opts["out"] is None:
        rows = [(f, g, d) for f, pts in zip(levels, lines) for g, d in pts]
        stdout.write(csv_text(("f", "dN01_frac", "dNLR_frac"), rows, provenance(config, command="isolines")))
        return 0
    manifest = {"provenance": provenance(config, command="isolines"), "v_ratio": v,
                "forbidden_region": "f > 1 (outside the f = 1 contour)", "contours": []}
    for i, (f, pts) in enumerate(zip(levels, lines)):
        name = f"isoline_{i:02d}.csv"
        path = write_csv(opts["out"] / name, ("dN01_frac", "dNLR_frac"), pts, provenance(config, f=f))
        _plot_script(opts, path, "dN01_frac", "dNLR_frac")
        manifest["contours"].append({"f": f, "file": name, "points": int(len(pts))})
    write_json(opts["out"] / "isolines.json", manifest)
    return 0


def cmd_oracle(opts, config, stdout):
    N = int(opts["N"])
    params = wm.TwoModeParams.from_gap(1.0, float(opts["V0_ratio"]))
    if opts["lift"] == "thermal":
        ens = thermal.canonical_alphas(N, float(opts["x"]))
        eq = thermal.equilibrium_state(ens, params.v_ratio, exact=True)
        init = thermal.kicked_state(eq, float(opts["kick"]) * thermal.max_kick(eq))
        r01 = to_zero_one(init, params.xi)
        lift = oracle.thermal_lift(r01, params)
    else:
        Z0 = float(opts["Z0"])
        init = EffectiveDensityMatrixLR.from_polar(N, Z0, float(opts["theta0"]), 0.5 * N * np.sqrt(1 - Z0 * Z0))
        r01 = to_zero_one(init, params.xi)
        lift = oracle.product_lift(r01, params)
    t = np.linspace(0, float(opts["periods"]) * params.period, int(opts["samples"]))
    report = oracle.oracle_check(r01, lift, params, t, float(opts["tolerance"]), backend=opts.get("backend"))
    report.update(lift=opts["lift"], provenance=provenance(config, command="oracle"))
    if opts["out"] is None:
        stdout.write(dumps(report, indent=2) + "\n")
    else:
        write_json(opts["out"] / "oracle.json", report)
    return 0


def cmd_reproduce(opts, config, stdout):
    results = acceptance.run_all(backend=opts.get("backend"), seed=opts.get("seed"),
                                 numbers=opts.get("criteria"))
    for r in results:
        stdout.write(r.line() + "\n")
    passed = sum(r.passed for r in results)
    stdout.write(f"{passed}/{len(results)} criteria passed\n")
    if opts["out"] is not None:
        write_json(opts["out"] / "acceptance.json",
                   {"provenance": provenance(config, command="reproduce"),
                    "criteria": [r.to_dict() for r in results]})
        (opts["out"] / "acceptance.txt").write_text("".join(r.line() + "\n" for r in results))
    return 0 if passed == len(results) else 3


COMMANDS = {"modes": cmd_modes, "simulate": cmd_simulate, "thermal": cmd_thermal, "limits": cmd_limits,
            "isolines": cmd_isolines, "oracle": cmd_oracle, "reproduce": cmd_reproduce}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        opts = _merge(args)
        config = {k: v for k, v in opts.items() if k not in ("out", "emit_plot_script")}
        config["command"] = args.command
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return COMMANDS[args.command](opts, config, stdout)
    except ConfigError as exc:
        stderr.write(f"configuration error: {exc}\n")
        return 1
    except PhysicsError as exc:
        stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 2
    except OSError as exc:
        stderr.write(f"I/O error: {exc}\n")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
