"""Command-line front end.

Subcommands ``simulate``, ``analytic``, ``figures``, ``sweep`` and ``validate``.
Options may also come from a ``key = value`` config file (``--config``); a
flag given on the command line wins over the file.

Exit status: 0 success, 1 a validation failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import analytic, protocol, qmath, validate
from .channel import ChannelParams

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

MAX_SWEEP = 10**6
SIM_TOL = 1e-10

FIG_THETA = math.pi / 6
FIG_P = 0.9
FIG_DELTA = 0.1
FIG4_THETAS = (math.pi / 16, math.pi / 8, 3 * math.pi / 16)
FIG4_DELTAS = (0.1, 0.5, 1.0)

_PI_EXPR = re.compile(r"^([-+]?[0-9]*\.?[0-9]*(?:[eE][-+]?[0-9]+)?)\s*\*?\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+))?$")


class ConfigError(ValueError):
    pass


def parse_number(text: str) -> float:
    """Parse a float, also accepting multiples of pi such as ``pi/6`` or ``3pi/16``."""
    s = str(text).strip().lower()
    try:
        return float(s)
    except ValueError:
        pass
    m = _PI_EXPR.match(s)
    if not m:
        raise ConfigError(f"cannot parse number {text!r}")
    coef = m.group(1)
    if coef in ("", "+"):
        k = 1.0
    elif coef == "-":
        k = -1.0
    else:
        k = float(coef)
    div = float(m.group(2)) if m.group(2) else 1.0
    return k * math.pi / div


def parse_list(text: str) -> list[float]:
    text = str(text).strip()
    if not text:
        return []
    return [parse_number(x) for x in text.split(",")]


def parse_int(text: str) -> int:
    v = parse_number(text)
    if v != int(v):
        raise ConfigError(f"expected an integer, got {text!r}")
    return int(v)


def parse_int_list(text: str) -> list[int]:
    text = str(text).strip()
    if not text:
        return []
    out = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            lo, hi = part.split(":")
            out.extend(range(parse_int(lo), parse_int(hi) + 1))
        else:
            out.append(parse_int(part))
    return out


# name -> (parser, default)
OPTIONS = {
    "theta": (parse_number, FIG_THETA),
    "phi": (parse_number, 0.0),
    "p": (parse_number, FIG_P),
    "tau": (parse_number, 1.0),
    "delta": (parse_number, 0.1),
    "steps": (parse_int, 50),
    "bit": (parse_int, 0),
    "t": (parse_number, None),
    "out": (str, None),
    "seed": (parse_int, 42),
    "samples": (parse_int, 200),
    "precision": (parse_int, 17),
    "which": (str, "all"),
    "thetas": (parse_list, None),
    "deltas": (parse_list, None),
    "steps_list": (parse_int_list, None),
}


def read_config(path: str) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in OPTIONS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Fill options not given as flags from the config file, then defaults."""
    file_values = read_config(args.config) if args.config else {}
    for name, (parse, default) in OPTIONS.items():
        given = getattr(args, name, None)
        if given is not None:
            value = parse(given)
        elif name in file_values:
            value = parse(file_values[name])
        else:
            value = default
        setattr(args, name, value)
    if not 1 <= args.precision <= 17:
        raise ConfigError("precision must be between 1 and 17")
    return args


class CsvTable:
    def __init__(self, header: list[str], precision: int = 17):
        self.header = list(header)
        self.rows: list[list] = []
        self.precision = precision

    def add(self, *values) -> None:
        if len(values) != len(self.header):
            raise ValueError("row width does not match header")
        self.rows.append(list(values))

    def _fmt(self, v) -> str:
        if isinstance(v, (bool, np.bool_)):
            return str(int(v))
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        return f"{float(v):.{self.precision}g}"

    def render(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([self._fmt(v) for v in row])
        return buf.getvalue()

    def write(self, out: str | None) -> None:
        text = self.render()
        if out is None or out == "-":
            sys.stdout.write(text)
        else:
            Path(out).write_text(text, encoding="utf-8")


def _config(args) -> protocol.ProtocolConfig:
    params = ChannelParams(args.p, args.tau)
    basis = qmath.make_basis(args.theta, args.phi)
    steps = args.steps
    if args.t is not None:
        steps = analytic.commensurate_steps(args.t, args.delta)
    return protocol.ProtocolConfig(params, basis, args.delta, steps, args.bit)


def cmd_simulate(args) -> int:
    cfg = _config(args)
    series = protocol.run(cfg)
    a0 = 1 - cfg.initial_bit
    table = CsvTable(["step", "time", "a_simulated", "a_analytic", "abs_error"], args.precision)
    worst = 0.0
    for k in range(cfg.steps + 1):
        t = k * cfg.delta
        ref = analytic.a_general(t, cfg.delta, args.theta, cfg.channel.p, cfg.channel.tau, a0)
        err = abs(series.a[k] - ref)
        worst = max(worst, err)
        table.add(k, t, series.a[k], ref, err)
    table.write(args.out)
    print(f"max_abs_error={worst:.3e}", file=sys.stderr)
    return EXIT_OK if worst <= SIM_TOL else EXIT_FAILED


def cmd_analytic(args) -> int:
    cfg = _config(args)
    p, tau, delta, theta = cfg.channel.p, cfg.channel.tau, cfg.delta, args.theta
    a0 = 1 - cfg.initial_bit
    table = CsvTable(
        ["step", "time", "a_general", "a_zeno", "a_first_order", "a_free",
         "p_suc_general", "p_suc_zeno", "p_suc_first", "p_suc_free"],
        args.precision,
    )
    for k in range(cfg.steps + 1):
        t = k * delta
        table.add(
            k, t,
            analytic.a_general(t, delta, theta, p, tau, a0),
            analytic.a_zeno(t, theta, p, tau, a0),
            analytic.first_order(t, delta, theta, p, tau, a0),
            analytic.a_free(t, theta, p, tau, a0),
            analytic.p_suc_general(t, delta, theta, tau),
            analytic.p_suc_zeno(t, theta, tau),
            analytic.p_suc_first(t, delta, theta, tau),
            analytic.p_suc_free(t, theta, tau),
        )
    table.write(args.out)
    return EXIT_OK


def _time_grid(t_max: float, tau: float, step: float = 0.01) -> np.ndarray:
    n = int(round(t_max / step))
    return tau * np.arange(n + 1) / round(1 / step)


def figure_tables(tau: float = 1.0, precision: int = 17) -> dict[str, CsvTable]:
    """CSV tables behind the four figures, keyed by file name."""
    th, p = FIG_THETA, FIG_P
    tables = {}

    # run long enough to pass 5 tau_eff
    t1 = _time_grid(10.0, tau)
    fig1 = CsvTable(["t", "a_zeno_a0_1", "a_zeno_a0_0"], precision)
    z1, z0 = analytic.a_zeno(t1, th, p, tau, 1), analytic.a_zeno(t1, th, p, tau, 0)
    for row in zip(t1, z1, z0):
        fig1.add(*row)
    tables["figure1.csv"] = fig1

    t = _time_grid(5.0, tau)
    fig2 = CsvTable(["t", "a_zeno_a0_1", "a_first_order_a0_1", "a_zeno_a0_0", "a_first_order_a0_0"], precision)
    delta = FIG_DELTA * tau
    cols = [analytic.a_zeno(t, th, p, tau, 1), analytic.first_order(t, delta, th, p, tau, 1),
            analytic.a_zeno(t, th, p, tau, 0), analytic.first_order(t, delta, th, p, tau, 0)]
    for row in zip(t, *cols):
        fig2.add(*row)
    tables["figure2.csv"] = fig2

    fig3 = CsvTable(["t", "a_zeno_a0_1", "a_free_a0_1", "a_free_published_a0_1",
                     "a_zeno_a0_0", "a_free_a0_0", "a_free_published_a0_0"], precision)
    cols = []
    for a0 in (1, 0):
        cols += [analytic.a_zeno(t, th, p, tau, a0), analytic.a_free(t, th, p, tau, a0),
                 analytic.a_free_published(t, th, p, tau, a0)]
    for row in zip(t, *cols):
        fig3.add(*row)
    tables["figure3.csv"] = fig3

    fig4 = CsvTable(["theta", "t", "p_suc_zeno", "p_suc_free"], precision)
    fig4g = CsvTable(["theta", "delta", "step", "t", "p_suc_general"], precision)
    for theta in FIG4_THETAS:
        for row in zip(t, analytic.p_suc_zeno(t, theta, tau), analytic.p_suc_free(t, theta, tau)):
            fig4.add(theta, *row)
        for d in FIG4_DELTAS:
            delta = d * tau
            n_max = int(round(5.0 / d))
            for n in range(n_max + 1):
                fig4g.add(theta, delta, n, n * delta, analytic.p_suc_general(n * delta, delta, theta, tau))
    tables["figure4.csv"] = fig4
    tables["figure4_general.csv"] = fig4g
    return tables


FIGURE_FILES = {
    "1": ("figure1.csv",),
    "2": ("figure2.csv",),
    "3": ("figure3.csv",),
    "4": ("figure4.csv", "figure4_general.csv"),
}


def cmd_figures(args) -> int:
    if args.which != "all" and args.which not in FIGURE_FILES:
        raise ConfigError(f"unknown figure id {args.which!r} (expected 1, 2, 3, 4 or all)")
    wanted = [f for k, files in FIGURE_FILES.items() if args.which in ("all", k) for f in files]
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    tables = figure_tables(args.tau, args.precision)
    for name in wanted:
        tables[name].write(str(out_dir / name))
        print(f"wrote {out_dir / name}", file=sys.stderr)
    return EXIT_OK


DEFAULT_SWEEP_THETAS = list(np.linspace(0.0, math.pi / 2, 17))
DEFAULT_SWEEP_DELTAS = [0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0]
DEFAULT_SWEEP_STEPS = list(range(51))


def sweep_table(thetas, deltas, steps_list, tau: float = 1.0, precision: int = 17) -> CsvTable:
    size = len(thetas) * len(deltas) * len(steps_list)
    if size > MAX_SWEEP:
        raise ConfigError(f"sweep grid has {size} points, limit is {MAX_SWEEP}")
    table = CsvTable(["theta", "delta", "t", "p_suc_general", "p_suc_zeno", "p_suc_free", "within_bounds"], precision)
    for theta in thetas:
        for delta in deltas:
            for n in steps_list:
                if n < 0:
                    raise ConfigError("steps must be non-negative")
                t = n * delta
                gen = analytic.p_suc_general(t, delta, theta, tau)
                zeno = analytic.p_suc_zeno(t, theta, tau)
                free = analytic.p_suc_free(t, theta, tau)
                ok = zeno - analytic.BOUND_SLACK <= gen <= free + analytic.BOUND_SLACK
                table.add(theta, delta, t, gen, zeno, free, int(ok))
    return table


def cmd_sweep(args) -> int:
    thetas = DEFAULT_SWEEP_THETAS if args.thetas is None else args.thetas
    deltas = DEFAULT_SWEEP_DELTAS if args.deltas is None else args.deltas
    steps = DEFAULT_SWEEP_STEPS if args.steps_list is None else args.steps_list
    table = sweep_table(thetas, deltas, steps, args.tau, args.precision)
    table.write(args.out)
    bad = sum(1 for row in table.rows if not row[-1])
    return EXIT_OK if bad == 0 else EXIT_FAILED


def validation_report(seed: int, samples: int) -> tuple[str, bool]:
    results = validate.run_all(seed, samples)
    lines = [r.line() for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"SUMMARY seed={seed} samples={samples} passed={len(results) - failed} failed={failed}")
    return "\n".join(lines) + "\n", failed == 0


def cmd_validate(args) -> int:
    if args.samples < 1:
        raise ConfigError("samples must be >= 1")
    report, ok = validation_report(args.seed, args.samples)
    if args.out:
        Path(args.out).write_text(report, encoding="utf-8")
    else:
        sys.stdout.write(report)
    return EXIT_OK if ok else EXIT_FAILED


COMMANDS = {
    "simulate": cmd_simulate,
    "analytic": cmd_analytic,
    "figures": cmd_figures,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--theta", help="angle to the pointer basis, radians (pi/6 style accepted)")
    common.add_argument("--phi", help="relative phase, radians")
    common.add_argument("--p", help="thermal ground-state population in [0.5, 1]")
    common.add_argument("--tau", help="relaxation time (default 1)")
    common.add_argument("--delta", help="interval between measurements")
    common.add_argument("--steps", help="number of measurement rounds")
    common.add_argument("--bit", help="stored bit, 0 or 1")
    common.add_argument("--t", help="total time; must be a multiple of delta (overrides --steps)")
    common.add_argument("--out", help="output file (directory for figures); stdout if omitted")
    common.add_argument("--seed", help="validate: RNG seed")
    common.add_argument("--samples", help="validate: samples per check")
    common.add_argument("--precision", help="significant digits in CSV output (default 17)")

    parser = argparse.ArgumentParser(prog="zenotherm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="run the density-matrix simulator")
    sub.add_parser("analytic", parents=[common], help="tabulate the closed forms")
    fig = sub.add_parser("figures", parents=[common], help="write figure CSVs")
    fig.add_argument("--which", help="1, 2, 3, 4 or all")
    sw = sub.add_parser("sweep", parents=[common], help="success-probability bounds over a grid")
    sw.add_argument("--thetas", help="comma-separated angles")
    sw.add_argument("--deltas", help="comma-separated intervals")
    sw.add_argument("--steps-list", dest="steps_list", help="comma-separated step counts; a:b ranges allowed")
    sub.add_parser("validate", parents=[common], help="run the invariant suite")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        args = resolve(args)
        return COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"zenotherm {args.command}: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
