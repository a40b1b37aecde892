"""Command-line front end.

Subcommands: eval (tabulate a builtin function on a grid), certify (run a
sign-pattern certification on a builtin), theorem (run a named harness),
laplace (transform a measure), semigroup (transform-side semigroup check),
table (several builtins side by side, plot-ready).

Exit codes: 0 all checks consistent / evaluation succeeded; 1 a certification
found a violation (the report is still written); 2 usage or domain error.

Output is deterministic: identical configurations produce byte-identical
files.  CSV uses comma separators, `.` decimals, LF line endings and UTF-8,
with a provenance footer (q, order, grid, tolerances, library version) and
no timestamps.  Relative --out paths resolve against $QMONO_OUT_DIR when set.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from ._serialize import format17, render_json
from .certify import (
    CertProperty,
    CertSpec,
    Grid,
    Verdict,
    bernstein_iff_check,
    certify,
    closure_checks,
    difference_check,
    report_to_csv,
    report_to_tree,
    thm31_harness,
    thm32_harness,
)
from .qcore import (
    ConvergenceError,
    InputError,
    QParam,
    SeriesControl,
    eq_power,
)
from .qdiff import RealFunction
from .qmeasure import (
    DiscreteMeasure,
    KernelKind,
    measure_from_text,
    q_convolve,
    q_laplace,
    semigroup_check,
)
from .qspecial import (
    GammaParams,
    RatioParams,
    f_abq,
    g_ab,
    g_ratio,
    h_aux,
    polylog,
    q_gamma,
    q_gamma_jackson,
    q_psi,
    q_psi_k,
)

_USAGE_EXIT = 2
_VIOLATION_EXIT = 1

#: Series depth for builtins whose series converge slowly at the small grid
#: points reached by order-N shrinking (dilogarithm / Lambert-type sums).
_DEEP_CTRL = SeriesControl(rel_term_tol=1e-16, max_terms=400_000)


# --------------------------------------------------------------------------
# builtin function registry


@dataclass(frozen=True)
class ParamSpec:
    name: str       # CLI flag without the leading dashes
    kind: str       # "float" | "int" | "floats"
    default: object
    help: str


@dataclass(frozen=True)
class Builtin:
    name: str
    summary: str
    params: tuple[ParamSpec, ...]
    deep_series: bool
    build: Callable[[QParam, SeriesControl, dict], RealFunction]


def _b_identity(q, ctrl, p):
    return lambda x: x


def _b_constant(q, ctrl, p):
    c = p["value"]
    return lambda x: c


def _b_square(q, ctrl, p):
    return lambda x: x * x


def _b_reciprocal_shift(q, ctrl, p):
    c = p["shift"]
    return lambda x: 1.0 / (x + c)


def _b_exp_decay(q, ctrl, p):
    c = p["rate"]
    return lambda x: math.exp(-c * x)


def _b_eq_decay(q, ctrl, p):
    c = p["rate"]
    return lambda x: eq_power(-c * x, q, ctrl)


def _b_one_minus_eq_decay(q, ctrl, p):
    c = p["rate"]
    return lambda x: 1.0 - eq_power(-c * x, q, ctrl)


def _b_q_gamma(q, ctrl, p):
    return lambda x: q_gamma(x, q, ctrl)


def _b_q_gamma_jackson(q, ctrl, p):
    n_lo, n_hi = p["n-lo"], p["n-hi"]
    return lambda x: q_gamma_jackson(x, q, n_lo, n_hi, ctrl)


def _b_q_psi(q, ctrl, p):
    return lambda x: q_psi(x, q, ctrl)


def _b_q_psi_prime(q, ctrl, p):
    return lambda x: q_psi_k(x, q, 1, ctrl)


def _b_q_psi_k(q, ctrl, p):
    k = p["k"]
    return lambda x: q_psi_k(x, q, k, ctrl)


def _b_polylog_qx(q, ctrl, p):
    s = p["s"]
    lq = math.log(q.q)
    return lambda x: polylog(s, math.exp(x * lq), ctrl)


def _b_h_aux(q, ctrl, p):
    return lambda x: h_aux(x, q, ctrl)


def _b_f_abq(q, ctrl, p):
    gp = GammaParams(p["alpha"], p["beta"], q)
    return lambda x: f_abq(x, gp, ctrl)


def _b_g_ab(q, ctrl, p):
    alpha, beta = p["alpha"], p["beta"]
    return lambda t: g_ab(t, alpha, beta)


def _b_g_ratio(q, ctrl, p):
    rp = RatioParams(tuple(p["a"]), tuple(p["b"]), allow_violations=True)
    return lambda x: g_ratio(x, rp, q, ctrl)


BUILTINS: dict[str, Builtin] = {
    b.name: b
    for b in (
        Builtin("identity", "f(x) = x", (), False, _b_identity),
        Builtin(
            "constant",
            "f(x) = value",
            (ParamSpec("value", "float", 1.0, "constant value"),),
            False,
            _b_constant,
        ),
        Builtin("square", "f(x) = x^2", (), False, _b_square),
        Builtin(
            "reciprocal_shift",
            "f(x) = 1/(x + shift)",
            (ParamSpec("shift", "float", 1.0, "denominator shift"),),
            False,
            _b_reciprocal_shift,
        ),
        Builtin(
            "exp_decay",
            "f(x) = exp(-rate x)",
            (ParamSpec("rate", "float", 1.0, "decay rate"),),
            False,
            _b_exp_decay,
        ),
        Builtin(
            "eq_decay",
            "f(x) = E_q(1)^(-rate x)",
            (ParamSpec("rate", "float", 1.0, "decay rate"),),
            False,
            _b_eq_decay,
        ),
        Builtin(
            "one_minus_eq_decay",
            "f(x) = 1 - E_q(1)^(-rate x)",
            (ParamSpec("rate", "float", 1.0, "decay rate"),),
            False,
            _b_one_minus_eq_decay,
        ),
        Builtin("q_gamma", "q-gamma (product form)", (), False, _b_q_gamma),
        Builtin(
            "q_gamma_jackson",
            "q-gamma (Jackson-sum form)",
            (
                ParamSpec("n-lo", "int", 200, "small-t lattice cutoff exponent"),
                ParamSpec("n-hi", "int", 40, "large-t lattice cutoff exponent"),
            ),
            False,
            _b_q_gamma_jackson,
        ),
        Builtin("q_psi", "q-digamma", (), True, _b_q_psi),
        Builtin("q_psi_prime", "first derivative of the q-digamma", (), True, _b_q_psi_prime),
        Builtin(
            "q_psi_k",
            "k-th derivative of the q-digamma",
            (ParamSpec("k", "int", 1, "derivative order, k >= 1"),),
            True,
            _b_q_psi_k,
        ),
        Builtin(
            "polylog_qx",
            "Li_s(q^x)",
            (ParamSpec("s", "float", 2.0, "polylogarithm order"),),
            True,
            _b_polylog_qx,
        ),
        Builtin("h_aux", "dilogarithm correction term", (), True, _b_h_aux),
        Builtin(
            "f_abq",
            "gamma-based composite (1-q)^x e^h(x) Gamma_q(x+beta) / [x]^(x+beta-alpha)",
            (
                ParamSpec("alpha", "float", 0.5, "exponent alpha"),
                ParamSpec("beta", "float", 1.0, "exponent beta (>= 0)"),
            ),
            True,
            _b_f_abq,
        ),
        Builtin(
            "g_ab",
            "positivity witness t + ((beta-alpha)t - 1)(e^(beta t) - e^((beta-1)t))",
            (
                ParamSpec("alpha", "float", 0.5, "exponent alpha"),
                ParamSpec("beta", "float", 1.0, "exponent beta"),
            ),
            False,
            _b_g_ab,
        ),
        Builtin(
            "g_ratio",
            "gamma-ratio product prod Gamma_q(x+a_i)/Gamma_q(x+b_i)",
            (
                ParamSpec("a", "floats", (1.0,), "numerator shifts, comma-separated"),
                ParamSpec("b", "floats", (2.0,), "denominator shifts, comma-separated"),
            ),
            False,
            _b_g_ratio,
        ),
    )
}

THEOREM_NAMES = ("thm31", "thm32", "bernstein_iff", "difference", "closure")

#: Corpus used by `theorem closure`: positive builtins with known patterns.
_CLOSURE_CORPUS = ("identity", "constant", "one_minus_eq_decay", "reciprocal_shift", "eq_decay")


def build_function(name: str, q: QParam, params: dict) -> RealFunction:
    """Instantiate a builtin by name with explicit parameter values."""
    if name not in BUILTINS:
        raise InputError(
            f"unknown function {name!r}; available: {', '.join(sorted(BUILTINS))}"
        )
    b = BUILTINS[name]
    values = {}
    for ps in b.params:
        given = params.get(ps.name)
        values[ps.name] = ps.default if given is None else given
    ctrl = _DEEP_CTRL if b.deep_series else SeriesControl()
    return b.build(q, ctrl, values)


# --------------------------------------------------------------------------
# configuration and output plumbing


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters shared by every subcommand."""

    command: str
    q: float
    grid_min: float
    grid_max: float
    grid_count: int
    grid_spacing: str  # "linear" | "log"
    order: int
    tol_abs: float
    tol_rel: float
    fmt: str  # "csv" | "json"
    out: str | None
    negative_control: bool

    def qparam(self) -> QParam:
        return QParam(self.q)

    def grid(self) -> Grid:
        if self.grid_spacing == "log":
            return Grid.log_spaced(self.grid_min, self.grid_max, self.grid_count)
        return Grid.linear(self.grid_min, self.grid_max, self.grid_count)

    def cert_spec(self, prop: CertProperty) -> CertSpec:
        return CertSpec(
            property=prop,
            max_order=self.order,
            grid=self.grid(),
            tol_abs=self.tol_abs,
            tol_rel=self.tol_rel,
        )

    def lambda_points(self) -> tuple[float, ...]:
        # transform grids may start at 0, so bypass the positive-grid check
        lo, hi, count = self.grid_min, self.grid_max, self.grid_count
        if self.grid_spacing == "log":
            return Grid.log_spaced(lo, hi, count).points
        if count < 2:
            return (lo,)
        pts = [lo + i * (hi - lo) / (count - 1) for i in range(count)]
        pts[0], pts[-1] = lo, hi
        return tuple(pts)

    def provenance(self) -> dict:
        return {
            "q": self.q,
            "order": self.order,
            "grid": f"{format17(self.grid_min)}:{format17(self.grid_max)}:{self.grid_count}:{self.grid_spacing}",
            "tol_abs": self.tol_abs,
            "tol_rel": self.tol_rel,
            "version": __version__,
        }


def _footer(cfg: RunConfig) -> str:
    p = cfg.provenance()
    parts = [
        f"q={format17(p['q'])}",
        f"order={p['order']}",
        f"grid={p['grid']}",
        f"tol_abs={format17(p['tol_abs'])}",
        f"tol_rel={format17(p['tol_rel'])}",
        f"version={p['version']}",
    ]
    return "# " + " ".join(parts) + "\n"


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format17(v) if math.isfinite(v) else ""
    return str(v)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence], cfg: RunConfig) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n" + _footer(cfg)


def _resolve_out(out: str | None) -> Path | None:
    if out is None:
        return None
    path = Path(out)
    if not path.is_absolute():
        base = os.environ.get("QMONO_OUT_DIR")
        if base:
            path = Path(base) / path
    return path


def _emit(text: str, out: str | None) -> None:
    path = _resolve_out(out)
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _emit_tree(tree: dict, cfg: RunConfig, out: str | None) -> None:
    tree = dict(tree)
    tree["provenance"] = cfg.provenance()
    _emit(render_json(tree), out)


def _emit_report(report, cfg: RunConfig, out: str | None) -> None:
    if cfg.fmt == "json":
        _emit_tree(report_to_tree(report), cfg, out)
    else:
        _emit(report_to_csv(report) + _footer(cfg), out)


def _emit_composite(rep, cfg: RunConfig, out: str | None) -> None:
    if cfg.fmt == "json":
        _emit_tree(rep.to_tree(), cfg, out)
    else:
        header, rows = rep.csv_rows()
        _emit(_csv_text(header, rows, cfg), out)


# --------------------------------------------------------------------------
# argument parsing


def _add_common(sub: argparse.ArgumentParser, *, grid_min=0.1, grid_max=5.0,
                grid_count=64, spacing="log") -> None:
    sub.add_argument("--q", type=float, default=0.5, help="base q (> 0, != 1)")
    sub.add_argument("--grid-min", type=float, default=grid_min)
    sub.add_argument("--grid-max", type=float, default=grid_max)
    sub.add_argument("--grid-count", type=int, default=grid_count)
    sub.add_argument("--grid-spacing", choices=("linear", "log"), default=spacing)
    sub.add_argument("--order", type=int, default=6, help="max q-derivative order N")
    sub.add_argument("--tol-abs", type=float, default=1e-9)
    sub.add_argument("--tol-rel", type=float, default=1e-7)
    sub.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    sub.add_argument("--out", default=None, help="output path (stdout when omitted)")
    sub.add_argument(
        "--negative-control",
        action="store_true",
        help="run hypothesis-violating parameters on purpose",
    )


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip() != "")
    except ValueError as exc:
        raise InputError(f"expected comma-separated reals, got {text!r}") from exc


def _add_fn_params(sub: argparse.ArgumentParser) -> None:
    seen: dict[str, str] = {}
    for b in BUILTINS.values():
        for ps in b.params:
            if ps.name in seen:
                continue
            seen[ps.name] = ps.kind
            flag = "--" + ps.name
            if ps.kind == "float":
                sub.add_argument(flag, type=float, default=None, help=ps.help)
            elif ps.kind == "int":
                sub.add_argument(flag, type=int, default=None, help=ps.help)
            else:
                sub.add_argument(flag, type=_parse_floats, default=None, help=ps.help)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmono",
        description="q-calculus numerics and q-monotonicity certification",
        epilog="builtin functions: " + ", ".join(sorted(BUILTINS)),
    )
    parser.add_argument("--version", action="version", version=f"qmono {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p_eval = subs.add_parser("eval", help="tabulate a builtin function on a grid")
    p_eval.add_argument("function", help="builtin function name")
    _add_common(p_eval)
    _add_fn_params(p_eval)

    p_cert = subs.add_parser("certify", help="certify a sign pattern for a builtin")
    p_cert.add_argument("function", help="builtin function name")
    p_cert.add_argument(
        "--property",
        dest="prop",
        choices=tuple(p.value for p in CertProperty),
        default="qcm",
    )
    _add_common(p_cert)
    _add_fn_params(p_cert)

    p_thm = subs.add_parser("theorem", help="run a named theorem harness")
    p_thm.add_argument("name", choices=THEOREM_NAMES)
    p_thm.add_argument("--fn", default=None, help="target builtin (bernstein_iff, difference)")
    p_thm.add_argument("--ts", type=_parse_floats, default=(0.5, 1.0, 2.0),
                       help="transform parameters t, comma-separated")
    p_thm.add_argument("--offset", type=float, default=1.0, help="difference shift a")
    _add_common(p_thm)
    _add_fn_params(p_thm)

    p_lap = subs.add_parser("laplace", help="q-Laplace transform of a measure")
    src = p_lap.add_mutually_exclusive_group(required=True)
    src.add_argument("--measure", default=None, help="measure file (t w per line)")
    src.add_argument("--atoms", default=None, help='inline atoms "t:w,t:w,..."')
    p_lap.add_argument("--kernel", choices=("power", "jackson"), default="power")
    _add_common(p_lap, grid_min=0.0, grid_max=2.0, grid_count=9, spacing="linear")

    p_semi = subs.add_parser("semigroup", help="transform-side semigroup check")
    p_semi.add_argument("--family", choices=("delta", "broken-delta", "conv"), default="delta")
    p_semi.add_argument("--speed", type=float, default=1.0, help="delta family location speed")
    p_semi.add_argument("--measure", default=None, help="base measure file for --family conv")
    p_semi.add_argument("--ts", type=_parse_floats, default=(1.0, 2.0, 3.0))
    p_semi.add_argument("--kernel", choices=("power", "jackson"), default="power")
    p_semi.add_argument("--tol", type=float, default=1e-12)
    _add_common(p_semi, grid_min=0.0, grid_max=2.0, grid_count=5, spacing="linear")

    p_table = subs.add_parser("table", help="tabulate several builtins side by side")
    p_table.add_argument("functions", nargs="+", help="builtin function names")
    _add_common(p_table)
    _add_fn_params(p_table)

    return parser


def _config_from(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        q=ns.q,
        grid_min=ns.grid_min,
        grid_max=ns.grid_max,
        grid_count=ns.grid_count,
        grid_spacing=ns.grid_spacing,
        order=ns.order,
        tol_abs=ns.tol_abs,
        tol_rel=ns.tol_rel,
        fmt=ns.fmt,
        out=ns.out,
        negative_control=ns.negative_control,
    )


def _fn_params(ns: argparse.Namespace) -> dict:
    out = {}
    for b in BUILTINS.values():
        for ps in b.params:
            attr = ps.name.replace("-", "_")
            if hasattr(ns, attr) and getattr(ns, attr) is not None:
                out[ps.name] = getattr(ns, attr)
    return out


# --------------------------------------------------------------------------
# subcommand drivers


def _run_eval(ns: argparse.Namespace, cfg: RunConfig) -> int:
    f = build_function(ns.function, cfg.qparam(), _fn_params(ns))
    pts = cfg.grid().points
    rows = [(x, f(x)) for x in pts]
    if cfg.fmt == "json":
        tree = {
            "kind": "eval_table",
            "function": ns.function,
            "rows": [{"x": x, "value": v} for x, v in rows],
        }
        _emit_tree(tree, cfg, cfg.out)
    else:
        _emit(_csv_text(("x", ns.function), rows, cfg), cfg.out)
    return 0


def _run_table(ns: argparse.Namespace, cfg: RunConfig) -> int:
    q = cfg.qparam()
    params = _fn_params(ns)
    fns = [(name, build_function(name, q, params)) for name in ns.functions]
    pts = cfg.grid().points
    rows = [tuple([x] + [f(x) for _, f in fns]) for x in pts]
    header = ("x",) + tuple(name for name, _ in fns)
    if cfg.fmt == "json":
        tree = {
            "kind": "table",
            "columns": list(header),
            "rows": [list(r) for r in rows],
        }
        _emit_tree(tree, cfg, cfg.out)
    else:
        _emit(_csv_text(header, rows, cfg), cfg.out)
    return 0


def _run_certify(ns: argparse.Namespace, cfg: RunConfig) -> int:
    q = cfg.qparam()
    f = build_function(ns.function, q, _fn_params(ns))
    spec = cfg.cert_spec(CertProperty(ns.prop))
    report = certify(f, q, spec)
    _emit_report(report, cfg, cfg.out)
    return 0 if report.verdict is Verdict.CONSISTENT else _VIOLATION_EXIT


def _run_theorem(ns: argparse.Namespace, cfg: RunConfig) -> int:
    q = cfg.qparam()
    spec = cfg.cert_spec(CertProperty.QCM)
    params = _fn_params(ns)
    if ns.name == "thm31":
        alpha = params.get("alpha", 0.5)
        beta = params.get("beta", 1.0)
        gp = GammaParams(alpha, beta, q)
        report = thm31_harness(gp, spec, negative_control=cfg.negative_control)
        _emit_report(report, cfg, cfg.out)
        return 0 if report.verdict is Verdict.CONSISTENT else _VIOLATION_EXIT
    if ns.name == "thm32":
        a = tuple(params.get("a", (1.0,)))
        b = tuple(params.get("b", (2.0,)))
        rp = RatioParams(a, b, allow_violations=cfg.negative_control)
        report = thm32_harness(rp, q, spec, negative_control=cfg.negative_control)
        _emit_report(report, cfg, cfg.out)
        return 0 if report.verdict is Verdict.CONSISTENT else _VIOLATION_EXIT
    if ns.name == "bernstein_iff":
        if ns.fn is None:
            raise InputError("bernstein_iff needs --fn NAME")
        f = build_function(ns.fn, q, params)
        rep = bernstein_iff_check(f, ns.ts, q, spec)
        _emit_composite(rep, cfg, cfg.out)
        return 0 if not rep.any_violation else _VIOLATION_EXIT
    if ns.name == "difference":
        if ns.fn is None:
            raise InputError("difference needs --fn NAME")
        f = build_function(ns.fn, q, params)
        f_rep = certify(f, q, spec)
        report = difference_check(f, ns.offset, q, spec, f_report=f_rep)
        _emit_report(report, cfg, cfg.out)
        violated = report.verdict is Verdict.VIOLATED or f_rep.verdict is Verdict.VIOLATED
        return _VIOLATION_EXIT if violated else 0
    # closure
    corpus = {name: build_function(name, q, params) for name in _CLOSURE_CORPUS}
    rep = closure_checks(corpus, q, spec, ts=ns.ts)
    _emit_composite(rep, cfg, cfg.out)
    return 0 if rep.all_ok else _VIOLATION_EXIT


def _parse_atoms(text: str) -> DiscreteMeasure:
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" not in chunk:
            raise InputError(f'atoms must look like "t:w", got {chunk!r}')
        t_s, w_s = chunk.split(":", 1)
        pairs.append((float(t_s), float(w_s)))
    if not pairs:
        raise InputError("no atoms given")
    return DiscreteMeasure.from_pairs(pairs)


def _load_measure(ns: argparse.Namespace) -> DiscreteMeasure:
    if ns.measure is not None:
        path = Path(ns.measure)
        return measure_from_text(path.read_text(encoding="utf-8"))
    return _parse_atoms(ns.atoms)


def _kernel_of(name: str) -> KernelKind:
    return KernelKind.POWER_E if name == "power" else KernelKind.JACKSON_E


def _run_laplace(ns: argparse.Namespace, cfg: RunConfig) -> int:
    q = cfg.qparam()
    mu = _load_measure(ns)
    kernel = _kernel_of(ns.kernel)
    lams = cfg.lambda_points()
    rows = [(lam, q_laplace(mu, lam, q, kernel)) for lam in lams]
    if cfg.fmt == "json":
        tree = {
            "kind": "laplace_table",
            "kernel": kernel.value,
            "mass": mu.mass,
            "rows": [{"lambda": lam, "value": v} for lam, v in rows],
        }
        _emit_tree(tree, cfg, cfg.out)
    else:
        _emit(_csv_text(("lambda", "value"), rows, cfg), cfg.out)
    return 0


def _run_semigroup(ns: argparse.Namespace, cfg: RunConfig) -> int:
    q = cfg.qparam()
    kernel = _kernel_of(ns.kernel)
    ts = tuple(ns.ts)
    sums = sorted({t + s for i, t in enumerate(ts) for s in ts[i:]})
    needed = sorted(set(ts) | set(sums))
    if ns.family == "conv":
        if ns.measure is None:
            raise InputError("--family conv needs --measure FILE")
        base = _load_measure(ns)
        for t in needed:
            if abs(t - round(t)) > 1e-9 or round(t) < 1:
                raise InputError(f"conv family needs positive integer times, got {t}")
        family: dict[float, DiscreteMeasure] = {}
        power = base
        for m in range(1, int(round(max(needed))) + 1):
            if m > 1:
                power = q_convolve(power, base)
            if float(m) in needed or m in needed:
                family[float(m)] = power
        family = {float(t): family[float(round(t))] for t in needed}
    elif ns.family == "delta":
        family = {float(t): DiscreteMeasure.delta(ns.speed * t) for t in needed}
    else:  # broken-delta: correct on the input times, offset on the sums
        family = {
            float(t): DiscreteMeasure.delta(
                ns.speed * t + (0.0 if t in ts else 0.1)
            )
            for t in needed
        }
    lams = cfg.lambda_points()
    report = semigroup_check(family, ts, lams, q, kernel, ns.tol)
    _emit_composite(report, cfg, cfg.out)
    return 0 if report.passed else _VIOLATION_EXIT


def run(ns: argparse.Namespace) -> int:
    """Dispatch a parsed command line; returns the process exit code."""
    cfg = _config_from(ns)
    if ns.command == "eval":
        return _run_eval(ns, cfg)
    if ns.command == "certify":
        return _run_certify(ns, cfg)
    if ns.command == "theorem":
        return _run_theorem(ns, cfg)
    if ns.command == "laplace":
        return _run_laplace(ns, cfg)
    if ns.command == "semigroup":
        return _run_semigroup(ns, cfg)
    if ns.command == "table":
        return _run_table(ns, cfg)
    raise InputError(f"unknown command {ns.command!r}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return run(ns)
    except (ValueError, ConvergenceError, OSError) as exc:
        # ValueError covers DomainError, InputError, EvaluationError and
        # malformed numeric input alike: all usage/domain problems.
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
