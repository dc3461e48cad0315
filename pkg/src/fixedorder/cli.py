"""Command-line front end: one subcommand per module, CSV or JSON on the chosen stream.

Exit codes: 0 success, 1 usage error, 2 a residual exceeded its tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import shlex
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

EXIT_OK, EXIT_USAGE, EXIT_RESIDUAL = 0, 1, 2
DIGITS = 15
FE_TOLERANCE = 1e-8


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- configuration ------------------------------------------------------------------

@dataclass
class RunConfig:
    subcommand: str
    j: int | None = None
    Q: float | None = None
    Q_list: list[float] = field(default_factory=list)
    alpha: float = 0.0
    phi: str = "default"
    max_conductor: int | None = None
    max_norm: int | None = None
    s: complex = 0.5
    w: complex | None = None
    m: str | None = None
    n: str | None = None
    conductor: int | None = None
    index: int = 0
    identities: str = "all"
    which: str = "all"
    samples: int = 100
    count_only: bool = False
    inject_sign_bug: bool = False
    mellin_point: float = 1.0
    emit_plot: str | None = None
    threads: int | None = None
    output: str | None = None
    format: str | None = None
    seed: int = 0

    def validate(self) -> "RunConfig":
        self.s = complex(self.s)
        self.w = None if self.w is None else complex(self.w)
        orders = {"symbol": (2, 3, 4, 6)}.get(self.subcommand, (3, 4, 6))
        if self.j is not None and self.j not in orders:
            raise UsageError(f"--j must be one of {orders}")
        if self.threads is not None and self.threads < 1:
            raise UsageError("--threads must be positive")
        if not 0 <= self.alpha < 0.5:
            raise UsageError("--alpha must lie in [0, 1/2)")
        if self.subcommand in ("moment", "nonvanishing") and (self.Q is None or self.Q < 10):
            raise UsageError("--Q must be at least 10")
        if self.subcommand == "scan":
            if len(self.Q_list) < 3 or any(b <= a for a, b in zip(self.Q_list, self.Q_list[1:])):
                raise UsageError("--Q-list needs at least three strictly ascending values")
        if self.emit_plot and self.subcommand != "scan":
            raise UsageError("--emit-plot applies to scan only")
        if self.inject_sign_bug and self.subcommand != "gauss-check":
            raise UsageError("--inject-sign-bug applies to gauss-check only")
        if self.mellin_point not in (0.0, 1.0):
            raise UsageError("--mellin-point must be 0 or 1")
        return self


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def parse_q_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def expand_args_from(argv: Sequence[str]) -> list[str]:
    """Replace ``--args-from FILE`` by the flags in FILE, one flag (and its value) per line."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok == "--args-from" or tok.startswith("--args-from="):
            path = tok.split("=", 1)[1] if "=" in tok else next(it, None)
            if path is None:
                raise UsageError("--args-from needs a file")
            try:
                lines = Path(path).read_text().splitlines()
            except OSError as exc:
                raise UsageError(f"cannot read {path}: {exc}") from None
            for line in lines:
                line = line.strip()
                if line and not line.startswith("#"):
                    out.extend(shlex.split(line))
        else:
            out.append(tok)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--threads", type=int, help="worker processes (default $NUM_THREADS, else 1)")
    common.add_argument("--output", help="write to this file instead of stdout")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--seed", type=int, default=0)

    parser = _Parser(prog="fixedorder", description="Order-3/4/6 characters, Gauss sums, L-values and moments.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("enumerate", parents=[common], help="list family characters")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--max-conductor", type=int, required=True)
    p.add_argument("--count-only", action="store_true")

    p = sub.add_parser("symbol", parents=[common], help="residue symbol (m/n)_j")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--m", required=True, help='e.g. "3+2*i" or "-1+3*w"')
    p.add_argument("--n", required=True)

    p = sub.add_parser("gauss-check", parents=[common], help="Gauss-sum identities")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--max-norm", type=int, default=500)
    p.add_argument("--identities", default="all", help="all, or a comma-separated list")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--inject-sign-bug", action="store_true", help="negate every right-hand side")

    p = sub.add_parser("lvalue", parents=[common], help="L(s, chi) for one character")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--conductor", type=int, required=True)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--s", type=parse_complex, default=0.5)

    p = sub.add_parser("fe-check", parents=[common], help="functional-equation residuals")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--max-conductor", type=int, required=True)
    p.add_argument("--s", type=parse_complex, default=0.5)

    p = sub.add_parser("constants", parents=[common], help="the main-term constant and its parts")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.0)

    p = sub.add_parser("identities", parents=[common], help="double Dirichlet series rearrangements")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--which", choices=("mobius", "euler", "sumd", "all"), default="all")
    p.add_argument("--s", type=parse_complex, default=3)
    p.add_argument("--w", type=parse_complex)

    for name, help_ in (("moment", "smoothed first moment at one Q"), ("nonvanishing", "count of nonvanishing central values")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--j", type=int, required=True)
        p.add_argument("--Q", type=float, required=True)
        p.add_argument("--alpha", type=float, default=0.0)
        if name == "moment":
            p.add_argument("--phi", default="default", choices=("default", "narrow", "wide"))
            p.add_argument("--mellin-point", type=float, default=1.0)

    p = sub.add_parser("scan", parents=[common], help="first moment over a grid of Q")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--Q-list", type=parse_q_list, default=[1000, 2000, 4000, 8000])
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--phi", default="default", choices=("default", "narrow", "wide"))
    p.add_argument("--mellin-point", type=float, default=1.0)
    p.add_argument("--emit-plot", metavar="PATH", help="write (log Q, log|lhs - main_term|) pairs")
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    ns = vars(build_parser().parse_args(expand_args_from(argv)))
    known = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in ns.items() if k in known and v is not None}).validate()


# -- output ---------------------------------------------------------------------------

def fmt(x: Any) -> Any:
    """15 significant digits for floats; complex numbers become [re, im]."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if not math.isfinite(x) else float(f"{x:.{DIGITS}g}")
    if isinstance(x, complex):
        return [fmt(x.real), fmt(x.imag)]
    if isinstance(x, dict):
        return {k: fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [fmt(v) for v in x]
    return x


def _csv_cell(x: Any) -> str:
    if isinstance(x, float):
        return f"{x:.{DIGITS}g}"
    if isinstance(x, list):
        return ";".join(_csv_cell(v) for v in x)
    return str(x)


@dataclass
class Report:
    """What a subcommand produces: table rows, optional summary, and whether it passed."""

    rows: list[dict]
    columns: Sequence[str] | None = None
    summary: dict | None = None
    passed: bool = True
    text: str | None = None


def render(report: Report, form: str) -> str:
    if form == "json":
        body: Any = fmt(report.rows)
        if report.summary is not None:
            body = {"rows": body, "summary": fmt(report.summary)}
        elif len(report.rows) == 1:
            body = body[0]
        return json.dumps(body, indent=2) + "\n"
    if report.text is not None:
        return report.text
    buf = io.StringIO()
    cols = list(report.columns or (report.rows[0].keys() if report.rows else []))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in report.rows:
        writer.writerow([_csv_cell(fmt(row.get(c))) for c in cols])
    for k, v in (report.summary or {}).items():
        buf.write(f"# {k}={_csv_cell(fmt(v))}\n")
    return buf.getvalue()


# -- subcommands ----------------------------------------------------------------------

def _need(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))


def run_enumerate(cfg: RunConfig) -> Report:
    from .characters import enumerate_characters
    from .quadratic_ring import format_qint

    if cfg.max_conductor < 2:
        raise UsageError("--max-conductor must be at least 2")
    chars = enumerate_characters(cfg.j, cfg.max_conductor)
    if cfg.count_only:
        return Report([{"j": cfg.j, "max_conductor": cfg.max_conductor, "count": len(chars)}],
                      text=f"{len(chars)}\n")
    rows = [{"conductor": c.q, "n": format_qint(c.n), "parity": c.parity} for c in chars]
    return Report(rows, columns=("conductor", "n", "parity"))


def run_symbol(cfg: RunConfig) -> Report:
    from .power_residue import residue_symbol
    from .quadratic_ring import parse_qint, ring_for_order

    ring = ring_for_order(cfg.j)
    try:
        m, n = parse_qint(cfg.m, ring), parse_qint(cfg.n, ring)
        value = residue_symbol(m, n, cfg.j)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    row = {"j": cfg.j, "m": cfg.m, "n": cfg.n, "k": 0 if value.is_zero else value.k, "is_zero": value.is_zero}
    return Report([row], columns=("j", "m", "n", "k", "is_zero"))


def run_gauss_check(cfg: RunConfig) -> Report:
    from .gauss_sums import GATING_IDENTITIES, IDENTITIES, check_identity, identity_instances

    names = GATING_IDENTITIES if cfg.identities == "all" else tuple(x.strip() for x in cfg.identities.split(","))
    known = set(IDENTITIES) | {"modulus_2_1_zero"}
    bad = [x for x in names if x not in known]
    if bad:
        raise UsageError(f"unknown identities {bad}; choose from {sorted(known)}")
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for name in names:
        inst = identity_instances(name, cfg.j, cfg.max_norm, rng, cfg.samples)
        r = check_identity(name, cfg.j, inst, sign_flip=cfg.inject_sign_bug)
        rows.append({**asdict(r), "passed": r.passed})
    return Report(rows, columns=("name", "j", "instances", "max_residual", "tolerance", "passed"),
                  passed=all(r["passed"] for r in rows))


def run_lvalue(cfg: RunConfig) -> Report:
    from .characters import characters_of_conductor
    from .lfun import l_values_of_conductor

    chars = characters_of_conductor(cfg.j, cfg.conductor)
    if not chars:
        raise UsageError(f"no order-{cfg.j} family character has conductor {cfg.conductor}")
    if not 0 <= cfg.index < len(chars):
        raise UsageError(f"--index must lie in [0, {len(chars)})")
    chi = chars[cfg.index]
    lv = l_values_of_conductor(cfg.s, [chi])[0]
    row = {"j": cfg.j, "conductor": cfg.conductor, "index": cfg.index, "label": chi.label(),
           "s_re": lv.s.real, "s_im": lv.s.imag, "value_re": lv.value.real, "value_im": lv.value.imag,
           "abs_error_bound": lv.abs_error_bound}
    return Report([row])


def fe_worker(job: tuple[int, int, complex]) -> tuple[int, int, float]:
    from .characters import characters_of_conductor
    from .lfun import fe_residuals_of_conductor

    j, q, s = job
    res = fe_residuals_of_conductor(s, characters_of_conductor(j, q))
    return q, len(res), max(res, default=0.0)


def run_fe_check(cfg: RunConfig) -> Report:
    from .characters import admissible_conductors
    from .parallel import make_mapper

    if not 0 < cfg.s.real < 1:
        raise UsageError("--s needs 0 < Re(s) < 1")
    jobs = [(cfg.j, q, cfg.s) for q in admissible_conductors(cfg.j, cfg.max_conductor)]
    results = make_mapper(cfg.threads)(fe_worker, jobs)
    worst = max((r[2] for r in results), default=0.0)
    worst_q = max(results, key=lambda r: r[2])[0] if results else None
    row = {"j": cfg.j, "max_conductor": cfg.max_conductor, "s_re": cfg.s.real, "s_im": cfg.s.imag,
           "characters": sum(r[1] for r in results), "max_residual": worst,
           "worst_conductor": worst_q, "tolerance": FE_TOLERANCE, "passed": worst <= FE_TOLERANCE}
    return Report([row], passed=row["passed"])


def run_constants(cfg: RunConfig) -> Report:
    from .constants import main_constant

    return Report([main_constant(cfg.j, cfg.alpha).as_dict()])


def run_identities(cfg: RunConfig) -> Report:
    from .dds_identities import euler_examples, euler_product_check, mobius_check, sumd_check

    s = cfg.s
    w = cfg.w if cfg.w is not None else s
    rows = []
    try:
        if cfg.which in ("mobius", "all"):
            rows.append(mobius_check(s, w, cfg.j))
        if cfg.which in ("euler", "all"):
            rows.extend(euler_product_check(m, d, s.real, cfg.j) for m, d in euler_examples(cfg.j))
        if cfg.which in ("sumd", "all"):
            rows.extend(sumd_check(m, s.real, cfg.j) for m in range(1, 21))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = [{"name": c.name, "j": cfg.j, "lhs": c.lhs, "rhs": c.rhs, "residual": c.residual,
            "bound": float(c.bound), "passed": c.passed} for c in rows]
    return Report(out, passed=all(c.passed for c in rows))


def run_moment(cfg: RunConfig) -> Report:
    from .moment_harness import LValueCache, MomentRow, first_moment
    from .parallel import make_mapper

    row = first_moment(cfg.j, cfg.Q, cfg.alpha, cfg.phi, make_mapper(cfg.threads), LValueCache(), cfg.mellin_point)
    return Report([row.as_dict()], columns=MomentRow.CSV_COLUMNS)


def run_scan(cfg: RunConfig) -> Report:
    from .moment_harness import MomentRow, scan, two_term_fit
    from .parallel import make_mapper

    result = scan(cfg.j, cfg.Q_list, cfg.alpha, cfg.phi, make_mapper(cfg.threads), mellin_point=cfg.mellin_point)
    fit = two_term_fit(result.rows, cfg.phi)
    summary = {
        "fitted_exponent": result.exponent, "exponent_stderr": result.exponent_stderr,
        "predicted_exponent": result.predicted_exponent, "secondary_pole": result.secondary_exponent,
        "deviations": result.deviations, "deviation_decreased": result.deviation_decreased,
        "two_term_leading": fit.leading, "two_term_secondary": fit.secondary,
    }
    if cfg.emit_plot:
        lines = ["log_Q,log_abs_gap"] + [f"{x:.{DIGITS}g},{y:.{DIGITS}g}" for x, y in result.plot_points()]
        Path(cfg.emit_plot).write_text("\n".join(lines) + "\n")
    return Report([r.as_dict() for r in result.rows], columns=MomentRow.CSV_COLUMNS, summary=summary)


def run_nonvanishing(cfg: RunConfig) -> Report:
    from .moment_harness import nonvanishing_report
    from .parallel import make_mapper

    return Report([asdict(nonvanishing_report(cfg.j, cfg.Q, cfg.alpha, make_mapper(cfg.threads)))])


COMMANDS = {
    "enumerate": (run_enumerate, "csv"),
    "symbol": (run_symbol, "csv"),
    "gauss-check": (run_gauss_check, "json"),
    "lvalue": (run_lvalue, "csv"),
    "fe-check": (run_fe_check, "json"),
    "constants": (run_constants, "json"),
    "identities": (run_identities, "json"),
    "moment": (run_moment, "csv"),
    "scan": (run_scan, "csv"),
    "nonvanishing": (run_nonvanishing, "csv"),
}


def dispatch(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    fn, default_format = COMMANDS[cfg.subcommand]
    report = fn(cfg)
    text = render(report, cfg.format or default_format)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        stdout.write(text)
    return EXIT_OK if report.passed else EXIT_RESIDUAL


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = parse_config(argv)
        return dispatch(cfg)
    except UsageError as exc:
        print(f"fixedorder: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
