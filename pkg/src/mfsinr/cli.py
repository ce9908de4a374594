"""Command-line front end.

Every output file is CSV preceded by ``# key=value`` lines holding the fully
resolved run configuration, so ``--config <output file>`` reproduces a run.
Flags override config-file entries, which override defaults.
"""
import argparse
import sys

import numpy as np

from . import __version__
from . import experiments as ex
from .charfn import SystemConfig
from .errors import DomainError
from .inversion import QuadratureSpec
from .montecarlo import McSpec
from .selftest import run_selftest

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_SELFTEST = 0, 1, 2, 3

DEFAULTS = {
    "L": 8, "K": 4, "pt": 10.0, "pt_unit": "linear", "sigma2": 1.0, "gamma": 0.8,
    "grid": None, "methods": None, "samples": None, "seed": 2024, "shards": 1,
    "mc_method": None, "max_panels": QuadratureSpec.max_panels, "out": None,
}

METHODS = {
    "cdf": "exact,beta_approx,monte_carlo",
    "pdf": "exact,monte_carlo",
    "outage": "exact,beta_approx,monte_carlo",
    "rate": "monte_carlo,robust,jensen,asymptotic",
    "fig1": "exact,beta_approx,monte_carlo",
    "fig2": "exact,limit,monte_carlo",
    "fig3": "monte_carlo,robust,jensen,asymptotic",
}

# keys that shape results; these are written to every output header
_RECORDED = ("L", "K", "pt", "pt_unit", "sigma2", "gamma", "grid", "methods", "samples",
             "seed", "mc_method", "max_panels", "L_values")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def parse_grid(spec):
    """``start:stop:points:{lin,log}`` to an array."""
    try:
        start, stop, points, scale = spec.split(":")
        start, stop, points = float(start), float(stop), int(points)
    except ValueError:
        raise UsageError(f"grid must look like start:stop:points:lin|log, got {spec!r}")
    if points < 1:
        raise UsageError("grid needs at least one point")
    if scale == "lin":
        return np.linspace(start, stop, points)
    if scale == "log":
        if start <= 0 or stop <= 0:
            raise UsageError("log grid needs positive end points")
        return np.geomspace(start, stop, points)
    raise UsageError(f"grid scale must be lin or log, got {scale!r}")


def read_config(path):
    """``key=value`` entries, with or without a leading ``#``; other lines are ignored."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip().lstrip("#").strip()
            if "=" not in line or "," in line.split("=", 1)[0]:
                continue
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def _coerce(key, value):
    if value is None or value == "None":
        return None
    if key in ("L", "K", "seed", "shards", "max_panels"):
        return int(value)
    if key == "samples":
        return int(float(value))
    if key in ("pt", "sigma2", "gamma"):
        return float(value)
    return value


def resolve(args):
    """Merge defaults, config file and flags (flags win)."""
    cfg = dict(DEFAULTS)
    if args.config:
        for k, v in read_config(args.config).items():
            if k in cfg or k == "L_values":
                cfg[k] = v
    for k, v in vars(args).items():
        if k in ("config", "command") or v is None:
            continue
        cfg[k] = v
    cfg = {k: _coerce(k, v) for k, v in cfg.items()}
    cfg["command"] = args.command
    if cfg["methods"] is None:
        cfg["methods"] = METHODS.get(args.command)
    if cfg["mc_method"] is None:
        cfg["mc_method"] = "decomposed" if args.command == "fig2" else "direct"
    if cfg["samples"] is None:
        cfg["samples"] = 10_000_000 if args.command == "selftest" else 1_000_000
    return cfg


def _power(value, unit):
    return float(ex.db_to_linear(value)) if unit == "db" else float(value)


def _powers(grid, unit):
    return ex.db_to_linear(grid) if unit == "db" else np.asarray(grid, dtype=float)


def _format(v):
    return repr(float(v))


def write_table(table, rc, out):
    lines = [f"# tool=mfsinr {__version__}"]
    for k in ("command",) + _RECORDED:
        if k in rc and rc[k] is not None:
            lines.append(f"# {k}={rc[k]}")
    lines.append(f"# columns={' '.join(table.columns)}")
    for note in table.failures:
        lines.append(f"# failure: {note}")
    lines.append(",".join(table.columns))
    for row in table.data:
        lines.append(",".join(_format(v) for v in row))
    text = "\n".join(lines) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _with_unit(table, unit):
    """Relabel the power column as dB when requested; values follow the label."""
    if unit == "db" and table.columns[0] == "pt":
        table.columns[0] = "pt_db"
        table.data[:, 0] = 10.0 * np.log10(table.data[:, 0])
    return table


def _sys(rc, p_t=None):
    return SystemConfig(rc["L"], rc["K"], _power(rc["pt"], rc["pt_unit"]) if p_t is None else p_t, rc["sigma2"])


def _methods(rc):
    return [m.strip() for m in rc["methods"].split(",") if m.strip()]


def run(rc):
    """Execute a resolved run configuration; returns the tables written."""
    cmd = rc["command"]
    mc = McSpec(rc["samples"], rc["seed"], rc["shards"])
    quad = QuadratureSpec(max_panels=rc["max_panels"])
    methods = _methods(rc)
    mc_method = rc["mc_method"]
    if cmd in ("cdf", "pdf"):
        if rc["grid"] is None:
            raise UsageError(f"{cmd} needs --grid")
        grid = parse_grid(rc["grid"])
        return [ex.distribution_table(_sys(rc), grid, cmd, methods, mc, quad, mc_method)]
    if cmd == "outage":
        powers = _powers(parse_grid(rc["grid"]), rc["pt_unit"]) if rc["grid"] else [_power(rc["pt"], rc["pt_unit"])]
        t = ex.outage_table(_sys(rc, 1.0), rc["gamma"], powers, methods, mc, quad, mc_method)
        return [_with_unit(t, rc["pt_unit"])]
    if cmd == "rate":
        powers = _powers(parse_grid(rc["grid"]), rc["pt_unit"]) if rc["grid"] else [_power(rc["pt"], rc["pt_unit"])]
        t = ex.rate_table(_sys(rc, 1.0), powers, methods, mc, mc_method)
        return [_with_unit(t, rc["pt_unit"])]
    if cmd == "fig1":
        L_values = _int_list(rc.get("L_values") or "4,8")
        rc["L_values"] = ",".join(map(str, L_values))
        powers = _powers(parse_grid(rc["grid"]) if rc["grid"] else ex.FIG1_PT_DB, rc["pt_unit"] if rc["grid"] else "db")
        t = ex.fig1(L_values, rc["K"], rc["sigma2"], rc["gamma"], powers, mc, methods, quad, mc_method)
        return [_with_unit(t, rc["pt_unit"])]
    if cmd == "fig2":
        L_values = _int_list(rc.get("L_values") or "16,64,256")
        rc["L_values"] = ",".join(map(str, L_values))
        left = ex.fig2_left(rc["L"], rc["K"], rc["sigma2"], mc=mc, quad=quad,
                            methods=[m for m in methods if m in ("exact", "limit", "monte_carlo")],
                            mc_method=mc_method)
        right = ex.fig2_right(L_values, rc["K"], _power(rc["pt"], rc["pt_unit"]), rc["sigma2"], mc=mc, quad=quad,
                              methods=[m for m in methods if m in ("limit", "monte_carlo")],
                              mc_method=mc_method)
        return [left, right]
    if cmd == "fig3":
        L_values = _int_list(rc.get("L_values") or "8,12")
        rc["L_values"] = ",".join(map(str, L_values))
        powers = _powers(parse_grid(rc["grid"]) if rc["grid"] else ex.FIG3_PT_DB, rc["pt_unit"] if rc["grid"] else "db")
        t = ex.fig3(L_values, rc["K"], rc["sigma2"], powers, mc, methods, mc_method)
        return [_with_unit(t, rc["pt_unit"])]
    raise UsageError(f"unknown command {cmd!r}")


def _int_list(text):
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}")


def _second_path(out):
    if out in (None, "-"):
        return out
    stem, dot, ext = out.rpartition(".")
    return f"{stem}_right.{ext}" if dot else f"{out}_right"


def build_parser():
    p = _Parser(prog="mfsinr", description="SINR distribution and ergodic rate under matched-filter precoding.")
    p.add_argument("--version", action="version", version=f"mfsinr {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, helptext in [("cdf", "SINR CDF on a grid"), ("pdf", "SINR density on a grid"),
                           ("outage", "outage probability versus transmit power"),
                           ("rate", "ergodic rate versus transmit power"),
                           ("fig1", "outage versus power for several L"),
                           ("fig2", "high-SNR and massive-MIMO limit laws (two files)"),
                           ("fig3", "ergodic rate estimators versus power"),
                           ("selftest", "run the validation suite")]:
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--L", type=int)
        s.add_argument("--K", type=int)
        s.add_argument("--pt", type=float, help="transmit power (see --pt-unit)")
        s.add_argument("--pt-unit", dest="pt_unit", choices=("linear", "db"))
        s.add_argument("--sigma2", type=float)
        s.add_argument("--gamma", type=float, help="SINR threshold for outage")
        s.add_argument("--grid", help="start:stop:points:{lin,log}")
        s.add_argument("--methods", help="comma-separated method list")
        s.add_argument("--samples", type=lambda v: int(float(v)))
        s.add_argument("--seed", type=int)
        s.add_argument("--shards", type=int)
        s.add_argument("--mc-method", dest="mc_method", choices=("direct", "decomposed"))
        s.add_argument("--max-panels", dest="max_panels", type=int)
        s.add_argument("--config", help="key=value file; an earlier output file works")
        s.add_argument("--out", help="output path (default stdout)")
        if name in ("fig1", "fig2", "fig3"):
            s.add_argument("--L-values", dest="L_values", help="comma-separated antenna counts")
        if name == "selftest":
            s.add_argument("--flip-branch", dest="flip_branch", action="store_true",
                           help="use the wrong square-root branch in the noise CF (negative control)")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rc = resolve(args)
        if rc["command"] == "selftest":
            branch = "flipped" if getattr(args, "flip_branch", False) else "principal"
            results = run_selftest(rc["samples"], rc["seed"], branch)
            for c in results:
                print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
            return EXIT_OK if all(c.passed for c in results) else EXIT_SELFTEST
        tables = run(rc)
    except (UsageError, DomainError, ValueError) as exc:
        sys.stderr.write(f"mfsinr: {exc}\n")
        return EXIT_USAGE
    outs = [rc["out"], _second_path(rc["out"])]
    for table, out in zip(tables, outs):
        write_table(table, rc, out)
    if any(t.failures for t in tables):
        for t in tables:
            for note in t.failures:
                sys.stderr.write(f"mfsinr: {note}\n")
        return EXIT_BUDGET
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
