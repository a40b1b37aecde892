"""Exact higher-order q-differentiation of black-box functions.

D_q f(x) = (f(qx) - f(x)) / (x(q-1)) is a two-point formula: no limits and
no step-size choice.  Iterating it only ever samples f on the geometric
points q^j x, so the n-th q-derivative comes from a triangular difference
table over n+1 samples with O(n^2) arithmetic.  On top of the table sit the
q-partial Bell polynomials and the q-analogue composition (Faa di Bruno)
rule for D_q^n of g(h(x)).

Tables are built per call and nothing is shared, so concurrent sweeps over
x-grids are safe and schedule-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .qcore import CompensatedSum, DomainError, EvaluationError, QParam, q_number

__all__ = [
    "RealFunction",
    "MAX_TABLE_ORDER",
    "QDiffTable",
    "q_derive",
    "q_derive_n",
    "q_bell",
    "q_faa_di_bruno",
    "q_faa_di_bruno_gap",
]

#: Pointwise-evaluable, deterministic map from positive reals to reals.
RealFunction = Callable[[float], float]

#: Hard cap on black-box q-differentiation order: the difference table loses
#: roughly one decimal digit per order as q -> 1.
MAX_TABLE_ORDER = 8


@dataclass(frozen=True)
class QDiffTable:
    """Triangular q-difference table rooted at x0.

    Row 0 holds the raw samples f(q^j x0) for j = 0..n; row m, column j holds
    (D_q^m f)(q^j x0), computed by the recurrence

        (m, j) = [ (m-1, j+1) - (m-1, j) ] / (q^j x0 (q - 1)).

    The sample points are built by iterated multiplication (x0, q*x0, ...)
    so the table reproduces a naive recursive D_q evaluation bit for bit.

    A companion condition table runs the same recurrence with |a| + |b| in
    place of a - b, seeded with the sample magnitudes: its row m bounds the
    magnitude that may have cancelled to produce row m, which is what the
    certifier's numerical-zero test is anchored to.  A value row that is
    pure correlated rounding noise says nothing about its own error; the
    propagated magnitude does.
    """

    x0: float
    q: QParam
    rows: tuple[tuple[float, ...], ...]
    mag_rows: tuple[tuple[float, ...], ...]

    @classmethod
    def build(cls, f: RealFunction, x0: float, q: QParam, order: int) -> "QDiffTable":
        if x0 == 0.0:
            raise DomainError("q-derivative is undefined at x = 0")
        if order < 0:
            raise DomainError(f"table order must be nonnegative, got {order}")
        if order > MAX_TABLE_ORDER:
            raise DomainError(
                f"table order {order} exceeds the cap {MAX_TABLE_ORDER}"
            )
        pts = [float(x0)]
        for _ in range(order):
            pts.append(q.q * pts[-1])
        samples = []
        for p in pts:
            v = f(p)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise EvaluationError(f"function not finite at x = {p!r}: got {v!r}")
            samples.append(float(v))
        rows = [tuple(samples)]
        mags = [tuple(abs(v) for v in samples)]
        qm1 = q.q - 1.0
        for m in range(1, order + 1):
            prev = rows[m - 1]
            pmag = mags[m - 1]
            rows.append(
                tuple(
                    (prev[j + 1] - prev[j]) / (pts[j] * qm1)
                    for j in range(len(prev) - 1)
                )
            )
            mags.append(
                tuple(
                    (pmag[j + 1] + pmag[j]) / abs(pts[j] * qm1)
                    for j in range(len(pmag) - 1)
                )
            )
        return cls(float(x0), q, tuple(rows), tuple(mags))

    @property
    def order(self) -> int:
        return len(self.rows) - 1

    def value(self, m: int, j: int = 0) -> float:
        """(D_q^m f)(q^j x0)."""
        return self.rows[m][j]

    def row_scale(self, m: int) -> float:
        """Largest entry of condition row m.

        Consumers treat |value| <= tol_abs + tol_rel * scale as numerically
        zero; eps * scale bounds the rounding noise the value can carry, so
        the test keeps high-order cancellation from producing spurious sign
        verdicts.
        """
        return max(v for v in self.mag_rows[m])


def q_derive(f: RealFunction, x: float, q: QParam) -> float:
    """First q-derivative (f(qx) - f(x)) / (x(q-1)); x = 0 is rejected."""
    if x == 0.0:
        raise DomainError("q-derivative is undefined at x = 0")
    return (f(q.q * x) - f(x)) / (x * (q.q - 1.0))


def q_derive_n(f: RealFunction, x: float, q: QParam, n: int) -> float:
    """n-th q-derivative at x via the triangular table; n = 0 returns f(x).

    Costs n+1 evaluations of f plus O(n^2) arithmetic.
    """
    if n < 0:
        raise DomainError(f"derivative order must be nonnegative, got {n}")
    if n == 0:
        return f(x)
    return QDiffTable.build(f, x, q, n).value(n, 0)


def _compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Compositions of n into k parts >= 1, in lexicographic order.

    There are C(n-1, k-1) of them; the fixed order makes every sum in this
    module reproducible bit for bit under serial accumulation.
    """
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def _qnum_qfact(n: int, q: QParam) -> tuple[list[float], list[float]]:
    """[m] for m = 0..n and [m]! built by ascending multiplication."""
    qnum = [0.0] * (n + 1)
    qfact = [1.0] * (n + 1)
    for m in range(1, n + 1):
        qnum[m] = q_number(float(m), q)
        qfact[m] = qfact[m - 1] * qnum[m]
    return qnum, qfact


def q_bell(n: int, k: int, q: QParam, xs: Sequence[float]) -> float:
    """q-partial Bell polynomial B_{n,k,q}(x_1, ..., x_{n-k+1}).

    Exact finite sum over the compositions b_1 + ... + b_k = n (b_i >= 1):

        sum  [n]! prod_j x_{b_j} / ( prod_j [b_1+...+b_j] * prod_j [b_j - 1]! ).

    The single-composition cases telescope: B_{n,1} = x_n and B_{n,n} = x_1^n.
    """
    if not 1 <= k <= n:
        raise DomainError(f"q-Bell needs 1 <= k <= n, got n={n}, k={k}")
    if len(xs) < n - k + 1:
        raise DomainError(
            f"q-Bell needs at least {n - k + 1} arguments, got {len(xs)}"
        )
    qnum, qfact = _qnum_qfact(n, q)
    total = CompensatedSum()
    for comp in _compositions(n, k):
        denom = 1.0
        prefix = 0
        for b in comp:
            prefix += b
            denom *= qnum[prefix]
        for b in comp:
            denom *= qfact[b - 1]
        term = qfact[n] / denom
        for b in comp:
            term *= xs[b - 1]
        total.add(term)
    return total.value


def q_faa_di_bruno(
    gk: Callable[[int], RealFunction],
    h: RealFunction,
    x: float,
    q: QParam,
    n: int,
) -> float:
    """q-analogue composition rule for D_q^n of g(h(x)), evaluated literally.

    The caller supplies the outer derivatives as an indexed family
    gk(k) = D_q^k g; the inner derivatives D_q^{b_j} h are taken at the
    prefix-shifted points q^{b_1+...+b_{j-1}} x via q_derive_n.  Each term
    carries the same q-factorial weight as q_bell.

    The formula is applied exactly as stated; for nonlinear inner h its
    agreement with a direct D_q^n of the composition is not guaranteed.
    Use q_faa_di_bruno_gap to measure the discrepancy.
    """
    if n < 1:
        raise DomainError(f"composition rule needs n >= 1, got {n}")
    if x == 0.0:
        raise DomainError("q-derivative is undefined at x = 0")
    qnum, qfact = _qnum_qfact(n, q)
    hx = h(x)
    cache: dict[tuple[int, int], float] = {}

    def dh(order: int, shift: int) -> float:
        key = (order, shift)
        if key not in cache:
            cache[key] = q_derive_n(h, (q.q**shift) * x, q, order)
        return cache[key]

    total = CompensatedSum()
    for k in range(1, n + 1):
        gval = gk(k)(hx)
        inner = CompensatedSum()
        for comp in _compositions(n, k):
            num = qfact[n]
            denom = 1.0
            prefix = 0
            for b in comp:
                num *= dh(b, prefix)
                prefix += b
                denom *= qnum[prefix]
            for b in comp:
                denom *= qfact[b - 1]
            inner.add(num / denom)
        total.add(gval * inner.value)
    return total.value


def q_faa_di_bruno_gap(
    gk: Callable[[int], RealFunction],
    h: RealFunction,
    composed: RealFunction,
    x: float,
    q: QParam,
    n: int,
) -> tuple[float, float, float]:
    """Diagnostic: (direct, formula, |direct - formula|) for D_q^n g(h(x)).

    `composed` must evaluate x -> g(h(x)).  For linear h the gap is pure
    rounding; for general h it is reported, not judged.
    """
    direct = q_derive_n(composed, x, q, n)
    formula = q_faa_di_bruno(gk, h, x, q, n)
    return direct, formula, abs(direct - formula)
