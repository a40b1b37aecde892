"""Numerical certification of q-monotonicity sign patterns.

Three properties are certified on finite grids up to a finite q-derivative
order N:

  QCM         (-1)^n D_q^n f >= 0          for n = 0..N (q-complete monotonicity)
  QLOGCM      the same pattern applied to Log_q f, for n = 1..N
  QBERNSTEIN  f >= 0 and (-1)^(n-1) D_q^n f >= 0 for n = 1..N

A `Consistent` verdict means "no violation found at this order / grid /
tolerance" and never claims a proof; reports therefore carry the order,
grid and tolerances that produced them.  A value is sign-checked only when
|value| > tol_abs + tol_rel * scale, where scale is the q-difference-table
row magnitude: high-order cancellation must not produce spurious verdicts.

Grid points are independent, so they may be evaluated concurrently; reports
aggregate in grid order and are byte-identical across schedules.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping, NamedTuple, Sequence

from ._serialize import format17, render_json
from .qcore import (
    DEFAULT_CTRL,
    DomainError,
    InputError,
    QParam,
    SeriesControl,
    eq_power,
    log_q,
)
from .qdiff import MAX_TABLE_ORDER, QDiffTable, RealFunction
from .qspecial import GammaParams, RatioParams, f_abq, g_ab, g_ratio

__all__ = [
    "CertProperty",
    "Verdict",
    "Grid",
    "CertSpec",
    "Counterexample",
    "CertReport",
    "certify",
    "BernsteinIffReport",
    "bernstein_iff_check",
    "difference_check",
    "ClosureCheck",
    "ClosureReport",
    "closure_checks",
    "thm31_harness",
    "thm32_harness",
    "report_to_tree",
    "report_to_json",
    "report_to_csv",
    "HARNESS_CTRL",
]


class CertProperty(Enum):
    QCM = "qcm"
    QLOGCM = "qlogcm"
    QBERNSTEIN = "qbernstein"


class Verdict(Enum):
    CONSISTENT = "Consistent"
    VIOLATED = "Violated"


def _log_spaced(lo: float, hi: float, count: int) -> tuple[float, ...]:
    if count < 2:
        return (lo,)
    llo, lhi = math.log(lo), math.log(hi)
    pts = [math.exp(llo + i * (lhi - llo) / (count - 1)) for i in range(count)]
    pts[0], pts[-1] = lo, hi
    return tuple(pts)


def _linear(lo: float, hi: float, count: int) -> tuple[float, ...]:
    if count < 2:
        return (lo,)
    pts = [lo + i * (hi - lo) / (count - 1) for i in range(count)]
    pts[0], pts[-1] = lo, hi
    return tuple(pts)


_DEFAULT_POINTS = _log_spaced(0.1, 5.0, 64)


@dataclass(frozen=True)
class Grid:
    """Strictly increasing positive evaluation points.

    D_q is undefined at 0, so the grid stays strictly inside (0, inf); the
    default is 64 log-spaced points on [0.1, 5].
    """

    points: tuple[float, ...] = _DEFAULT_POINTS

    def __post_init__(self) -> None:
        pts = tuple(float(p) for p in self.points)
        if not pts:
            raise DomainError("grid must be nonempty")
        for p in pts:
            if not (math.isfinite(p) and p > 0.0):
                raise DomainError(f"grid points must be finite and > 0, got {p!r}")
        if any(a >= b for a, b in zip(pts, pts[1:])):
            raise DomainError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def log_spaced(cls, lo: float, hi: float, count: int) -> "Grid":
        return cls(_log_spaced(lo, hi, count))

    @classmethod
    def linear(cls, lo: float, hi: float, count: int) -> "Grid":
        return cls(_linear(lo, hi, count))


DEFAULT_GRID = Grid()


@dataclass(frozen=True)
class CertSpec:
    """What to certify and how hard to look.

    max_order N defaults to 6 (hard cap 8): the difference table loses about
    one decimal digit per order, and the tolerance pair (tol_abs, tol_rel)
    decides when a table value counts as numerically zero.
    """

    property: CertProperty
    max_order: int = 6
    grid: Grid = DEFAULT_GRID
    tol_abs: float = 1e-9
    tol_rel: float = 1e-7

    def __post_init__(self) -> None:
        if not 1 <= self.max_order <= MAX_TABLE_ORDER:
            raise DomainError(
                f"max_order must be in [1, {MAX_TABLE_ORDER}], got {self.max_order}"
            )
        if not (self.tol_abs > 0.0 and self.tol_rel > 0.0):
            raise DomainError("tolerances must be positive")


class Counterexample(NamedTuple):
    x: float
    n: int
    value: float  # the signed quantity that should have been >= 0
    scale: float  # difference-table row magnitude behind the tolerance test


@dataclass(frozen=True)
class CertReport:
    """Outcome of a sign-pattern certification.

    Violated exactly when counterexamples is nonempty; counterexamples are
    ordered by (grid index, order) regardless of evaluation schedule.
    min_margin is the smallest signed slack seen over all checks (0 for
    checks inside the numerical-zero band).  The spec echo (property, q,
    order, grid, tolerances) makes the claim reproducible.
    """

    property: CertProperty
    q: float
    max_order: int
    tol_abs: float
    tol_rel: float
    grid: tuple[float, ...]
    verdict: Verdict
    counterexamples: tuple[Counterexample, ...]
    min_margin: float
    checks_run: int
    notes: tuple[str, ...] = ()


def _signs_and_orders(prop: CertProperty, n_max: int) -> list[tuple[int, float]]:
    if prop is CertProperty.QCM:
        return [(n, (-1.0) ** n) for n in range(0, n_max + 1)]
    if prop is CertProperty.QLOGCM:
        return [(n, (-1.0) ** n) for n in range(1, n_max + 1)]
    # QBERNSTEIN: nonnegativity at order 0, then (-1)^(n-1)
    return [(0, 1.0)] + [(n, (-1.0) ** (n - 1)) for n in range(1, n_max + 1)]


def _certification_target(
    f: RealFunction, q: QParam, prop: CertProperty, ctrl: SeriesControl
) -> RealFunction:
    """Wrap f with evaluability checks; for QLOGCM, compose with Log_q."""

    def checked(y: float) -> float:
        v = f(y)
        if not (isinstance(v, (int, float)) and math.isfinite(v)):
            raise InputError(f"function not evaluable at x = {y!r}: got {v!r}")
        return float(v)

    if prop is not CertProperty.QLOGCM:
        return checked

    def log_target(y: float) -> float:
        v = checked(y)
        if v <= 0.0:
            raise InputError(f"Log_q needs a positive function: f({y!r}) = {v!r}")
        return log_q(v, q, ctrl)

    return log_target


class _Check(NamedTuple):
    n: int
    signed: float
    scale: float
    margin: float
    neutral: bool


def _point_checks(
    g: RealFunction, x: float, q: QParam, spec: CertSpec
) -> list[_Check]:
    table = QDiffTable.build(g, x, q, spec.max_order)
    out: list[_Check] = []
    for n, sign in _signs_and_orders(spec.property, spec.max_order):
        v = table.value(n, 0)
        scale = table.row_scale(n)
        signed = sign * v
        neutral = abs(v) <= spec.tol_abs + spec.tol_rel * scale
        margin = 0.0 if neutral else signed
        out.append(_Check(n, signed, scale, margin, neutral))
    return out


def certify(
    f: RealFunction,
    q: QParam,
    spec: CertSpec,
    *,
    ctrl: SeriesControl = DEFAULT_CTRL,
    workers: int | None = None,
) -> CertReport:
    """Certify the sign pattern named by spec.property for f on spec.grid.

    f must be evaluable at every q^j x for x in the grid and j = 0..N (and
    positive there for QLOGCM).  With workers > 1, grid points run on a
    thread pool; results aggregate in grid order, so the report is identical
    to a serial run.
    """
    g = _certification_target(f, q, spec.property, ctrl)
    pts = spec.grid.points

    def at_point(x: float) -> list[_Check]:
        return _point_checks(g, x, q, spec)

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_point = list(pool.map(at_point, pts))
    else:
        per_point = [at_point(x) for x in pts]

    counterexamples: list[Counterexample] = []
    min_margin = math.inf
    checks_run = 0
    for x, checks in zip(pts, per_point):
        for c in checks:
            checks_run += 1
            if c.margin < min_margin:
                min_margin = c.margin
            if not c.neutral and c.signed < 0.0:
                counterexamples.append(Counterexample(x, c.n, c.signed, c.scale))
    return CertReport(
        property=spec.property,
        q=q.q,
        max_order=spec.max_order,
        tol_abs=spec.tol_abs,
        tol_rel=spec.tol_rel,
        grid=pts,
        verdict=Verdict.VIOLATED if counterexamples else Verdict.CONSISTENT,
        counterexamples=tuple(counterexamples),
        min_margin=min_margin,
        checks_run=checks_run,
    )


@dataclass(frozen=True)
class BernsteinIffReport:
    """Both sides of `f is q-Bernstein iff every E_q(1)^(-t f) is q-CM`.

    agree is True when the verdicts match in the testable direction: either
    both sides Consistent, or violations on both.  One-sided violations are
    flagged for inspection rather than judged.
    """

    f_report: CertReport
    cm_reports: tuple[tuple[float, CertReport], ...]
    agree: bool
    flagged: tuple[str, ...]

    @property
    def any_violation(self) -> bool:
        return self.f_report.verdict is Verdict.VIOLATED or any(
            r.verdict is Verdict.VIOLATED for _, r in self.cm_reports
        )

    def to_tree(self) -> dict:
        return {
            "kind": "bernstein_iff_report",
            "agree": self.agree,
            "flagged": list(self.flagged),
            "bernstein_side": report_to_tree(self.f_report),
            "cm_side": [
                {"t": t, "report": report_to_tree(r)} for t, r in self.cm_reports
            ],
        }

    def csv_rows(self) -> tuple[tuple[str, ...], list[tuple]]:
        header = ("side", "t", "verdict", "min_margin", "checks_run", "counterexamples")
        rows: list[tuple] = [
            (
                "qbernstein",
                math.nan,
                self.f_report.verdict.value,
                self.f_report.min_margin,
                self.f_report.checks_run,
                len(self.f_report.counterexamples),
            )
        ]
        for t, r in self.cm_reports:
            rows.append(
                ("qcm", t, r.verdict.value, r.min_margin, r.checks_run, len(r.counterexamples))
            )
        return header, rows


def bernstein_iff_check(
    f: RealFunction,
    ts: Sequence[float],
    q: QParam,
    spec: CertSpec,
    *,
    ctrl: SeriesControl = DEFAULT_CTRL,
    workers: int | None = None,
) -> BernsteinIffReport:
    """Certify f as QBERNSTEIN and each x -> E_q(1)^(-t f(x)) as QCM."""
    f_spec = replace(spec, property=CertProperty.QBERNSTEIN)
    cm_spec = replace(spec, property=CertProperty.QCM)
    f_report = certify(f, q, f_spec, ctrl=ctrl, workers=workers)
    cm_reports: list[tuple[float, CertReport]] = []
    for t in ts:
        if not t > 0.0:
            raise InputError(f"transform parameters must be positive, got t = {t!r}")
        target = _scaled_eq_decay(f, t, q, ctrl)
        cm_reports.append((t, certify(target, q, cm_spec, ctrl=ctrl, workers=workers)))
    f_ok = f_report.verdict is Verdict.CONSISTENT
    cm_ok = all(r.verdict is Verdict.CONSISTENT for _, r in cm_reports)
    flagged: list[str] = []
    if not f_ok:
        ce = f_report.counterexamples[0]
        flagged.append(
            f"qbernstein side violated at x={format17(ce.x)} n={ce.n} value={format17(ce.value)}"
        )
    for t, r in cm_reports:
        if r.verdict is Verdict.VIOLATED:
            ce = r.counterexamples[0]
            flagged.append(
                f"qcm side violated at t={format17(t)} x={format17(ce.x)} n={ce.n}"
            )
    return BernsteinIffReport(
        f_report=f_report,
        cm_reports=tuple(cm_reports),
        agree=f_ok == cm_ok,
        flagged=tuple(flagged),
    )


def _scaled_eq_decay(
    f: RealFunction, t: float, q: QParam, ctrl: SeriesControl
) -> RealFunction:
    def target(x: float) -> float:
        return eq_power(-t * f(x), q, ctrl)

    return target


def difference_check(
    f: RealFunction,
    a: float,
    q: QParam,
    spec: CertSpec,
    *,
    f_report: CertReport | None = None,
    ctrl: SeriesControl = DEFAULT_CTRL,
    workers: int | None = None,
) -> CertReport:
    """Certify x -> f(x) - f(x+a) as QCM.

    The conclusion is only meaningful when f itself is nonnegative and q-CM;
    certifying f first is the caller's duty.  Pass that report as f_report;
    a skipped or failed precondition is recorded in the notes.
    """
    if not a > 0.0:
        raise InputError(f"difference shift must be positive, got a = {a!r}")
    diff_spec = replace(spec, property=CertProperty.QCM)

    def diff(x: float) -> float:
        return f(x) - f(x + a)

    report = certify(diff, q, diff_spec, ctrl=ctrl, workers=workers)
    notes: tuple[str, ...]
    if f_report is None:
        notes = ("precondition not checked: no QCM report for f was supplied",)
    elif f_report.verdict is Verdict.VIOLATED:
        notes = ("precondition failed: the supplied QCM report for f is Violated",)
    else:
        notes = ("precondition: supplied QCM report for f is Consistent",)
    return replace(report, notes=notes)


@dataclass(frozen=True)
class ClosureCheck:
    kind: str  # "composition" | "logcm_implies_cm" | "power_stays_cm" | "decay_is_logcm"
    f_name: str
    g_name: str | None
    t: float | None
    verdict: Verdict
    ok: bool  # whether the predicted outcome held


@dataclass(frozen=True)
class ClosureReport:
    """Base certifications of a named corpus plus the closure-law checks
    that apply to the members that certified cleanly."""

    base: tuple[tuple[str, str, str], ...]  # (name, property, verdict-or-inapplicable)
    checks: tuple[ClosureCheck, ...]
    all_ok: bool

    def to_tree(self) -> dict:
        return {
            "kind": "closure_report",
            "all_ok": self.all_ok,
            "base": [
                {"name": n, "property": p, "verdict": v} for n, p, v in self.base
            ],
            "checks": [
                {
                    "kind": c.kind,
                    "f": c.f_name,
                    "g": c.g_name,
                    "t": c.t,
                    "verdict": c.verdict.value,
                    "ok": c.ok,
                }
                for c in self.checks
            ],
        }

    def csv_rows(self) -> tuple[tuple[str, ...], list[tuple]]:
        header = ("kind", "f", "g", "t", "verdict", "ok")
        rows = [
            (c.kind, c.f_name, c.g_name or "", c.t if c.t is not None else math.nan, c.verdict.value, c.ok)
            for c in self.checks
        ]
        return header, rows


def closure_checks(
    fs: Mapping[str, RealFunction],
    q: QParam,
    spec: CertSpec,
    *,
    ts: Sequence[float] = (0.5, 1.0, 2.0),
    ctrl: SeriesControl = DEFAULT_CTRL,
    workers: int | None = None,
) -> ClosureReport:
    """Run the closure laws over a named corpus.

    Base pass: certify every function as QBERNSTEIN, QCM and (where positive)
    QLOGCM.  Closure pass, driven by the base verdicts:

      * composition      g o f is QBERNSTEIN for every certified pair (f, g);
      * logcm_implies_cm a QLOGCM-Consistent f must be QCM-Consistent;
      * power_stays_cm   E_q(1)^(-t f) is QCM for certified Bernstein f, t in ts;
      * decay_is_logcm   E_q(1)^(-f) is QLOGCM for certified Bernstein f.
    """
    names = sorted(fs)
    base: list[tuple[str, str, str]] = []
    verdicts: dict[tuple[str, CertProperty], Verdict | None] = {}
    for name in names:
        f = fs[name]
        for prop in (CertProperty.QBERNSTEIN, CertProperty.QCM, CertProperty.QLOGCM):
            try:
                rep = certify(f, q, replace(spec, property=prop), ctrl=ctrl, workers=workers)
                verdicts[(name, prop)] = rep.verdict
                base.append((name, prop.value, rep.verdict.value))
            except InputError:
                verdicts[(name, prop)] = None
                base.append((name, prop.value, "inapplicable"))

    bernstein_names = [
        n for n in names if verdicts[(n, CertProperty.QBERNSTEIN)] is Verdict.CONSISTENT
    ]
    checks: list[ClosureCheck] = []

    for f_name in bernstein_names:
        for g_name in bernstein_names:
            composed = _compose(fs[g_name], fs[f_name])
            rep = certify(
                composed, q, replace(spec, property=CertProperty.QBERNSTEIN),
                ctrl=ctrl, workers=workers,
            )
            checks.append(
                ClosureCheck(
                    "composition", f_name, g_name, None, rep.verdict,
                    rep.verdict is Verdict.CONSISTENT,
                )
            )

    for name in names:
        if verdicts[(name, CertProperty.QLOGCM)] is Verdict.CONSISTENT:
            cm = verdicts[(name, CertProperty.QCM)]
            checks.append(
                ClosureCheck(
                    "logcm_implies_cm", name, None, None,
                    cm if cm is not None else Verdict.VIOLATED,
                    cm is Verdict.CONSISTENT,
                )
            )

    for name in bernstein_names:
        for t in ts:
            target = _scaled_eq_decay(fs[name], t, q, ctrl)
            rep = certify(
                target, q, replace(spec, property=CertProperty.QCM),
                ctrl=ctrl, workers=workers,
            )
            checks.append(
                ClosureCheck(
                    "power_stays_cm", name, None, t, rep.verdict,
                    rep.verdict is Verdict.CONSISTENT,
                )
            )
        target1 = _scaled_eq_decay(fs[name], 1.0, q, ctrl)
        rep = certify(
            target1, q, replace(spec, property=CertProperty.QLOGCM),
            ctrl=ctrl, workers=workers,
        )
        checks.append(
            ClosureCheck(
                "decay_is_logcm", name, None, None, rep.verdict,
                rep.verdict is Verdict.CONSISTENT,
            )
        )

    return ClosureReport(
        base=tuple(base),
        checks=tuple(checks),
        all_ok=all(c.ok for c in checks),
    )


def _compose(g: RealFunction, f: RealFunction) -> RealFunction:
    def composed(x: float) -> float:
        return g(f(x))

    return composed


#: Harness-facing series policy: certification grids shrink points down to
#: x ~ 1e-3, where the dilogarithm / Lambert-type series need several tens of
#: thousands of terms.  The primitive-layer default stays at 10_000.
HARNESS_CTRL = SeriesControl(rel_term_tol=1e-16, max_terms=400_000)

#: Witness sweep for the gamma-based composite: 200 log-spaced points on (0, 50].
_WITNESS_POINTS = _log_spaced(1e-6, 50.0, 200)


def thm31_harness(
    p: GammaParams,
    spec: CertSpec,
    *,
    negative_control: bool = False,
    ctrl: SeriesControl = HARNESS_CTRL,
    workers: int | None = None,
) -> CertReport:
    """Certify the gamma-based composite f_abq(., p) as QLOGCM.

    Requires the hypothesis 2*alpha <= 1 <= beta unless negative_control is
    set.  When the hypothesis holds, the elementary witness g_ab is also
    swept over 200 log-spaced points on (0, 50]; a nonpositive witness value
    is appended as a counterexample row with order -1.
    """
    if not (p.hypothesis_ok or negative_control):
        raise InputError(
            "parameters violate 2*alpha <= 1 <= beta; pass negative_control=True to run anyway"
        )

    def f(x: float) -> float:
        return f_abq(x, p, ctrl)

    report = certify(
        f, p.q, replace(spec, property=CertProperty.QLOGCM), ctrl=ctrl, workers=workers
    )
    notes = list(report.notes)
    extra: list[Counterexample] = []
    if p.hypothesis_ok:
        for t in _WITNESS_POINTS:
            g = g_ab(t, p.alpha, p.beta)
            if not g > 0.0:
                extra.append(Counterexample(t, -1, g, 1.0))
        if extra:
            notes.append(
                "positivity witness failed on (0, 50]; rows with order -1 are witness points"
            )
        else:
            notes.append("positivity witness > 0 at all 200 sweep points on (0, 50]")
    else:
        notes.append("negative control: hypothesis 2*alpha <= 1 <= beta violated by request")
    if extra:
        ces = report.counterexamples + tuple(extra)
        return replace(
            report, counterexamples=ces, verdict=Verdict.VIOLATED, notes=tuple(notes)
        )
    return replace(report, notes=tuple(notes))


def thm32_harness(
    rp: RatioParams,
    q: QParam,
    spec: CertSpec,
    *,
    negative_control: bool = False,
    ctrl: SeriesControl = HARNESS_CTRL,
    workers: int | None = None,
) -> CertReport:
    """Certify the gamma-ratio product g_ratio(., rp, q) as QCM.

    Requires sorted shift sequences with prefix-sum dominance unless
    negative_control is set.
    """
    if not (rp.hypothesis_ok or negative_control):
        raise InputError(
            "shift sequences violate the sorted/prefix-dominance hypothesis; "
            "pass negative_control=True to run anyway"
        )

    def f(x: float) -> float:
        return g_ratio(x, rp, q, ctrl)

    report = certify(
        f, q, replace(spec, property=CertProperty.QCM), ctrl=ctrl, workers=workers
    )
    if not rp.hypothesis_ok:
        return replace(
            report,
            notes=report.notes
            + ("negative control: shift-sequence hypothesis violated by request",),
        )
    return report


def report_to_tree(report: CertReport) -> dict:
    """Key-value tree form of a certification report (JSON-renderable)."""
    return {
        "kind": "cert_report",
        "property": report.property.value,
        "q": report.q,
        "max_order": report.max_order,
        "tol_abs": report.tol_abs,
        "tol_rel": report.tol_rel,
        "grid": {"count": len(report.grid), "points": list(report.grid)},
        "verdict": report.verdict.value,
        "checks_run": report.checks_run,
        "min_margin": report.min_margin,
        "counterexamples": [
            {"x": c.x, "n": c.n, "value": c.value, "scale": c.scale}
            for c in report.counterexamples
        ],
        "notes": list(report.notes),
    }


def report_to_json(report: CertReport) -> str:
    """Deterministic JSON text; floats at 17 significant digits."""
    return render_json(report_to_tree(report))


def report_to_csv(report: CertReport) -> str:
    """Counterexample rows as CSV: x, n, value, scale, margin.

    The margin of a violation equals its signed value.  A Consistent report
    yields only the header.
    """
    lines = ["x,n,value,scale,margin"]
    for c in report.counterexamples:
        lines.append(
            ",".join(
                (format17(c.x), str(c.n), format17(c.value), format17(c.scale), format17(c.value))
            )
        )
    return "\n".join(lines) + "\n"
