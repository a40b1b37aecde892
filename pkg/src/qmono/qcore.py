"""Primitive q-objects.

Everything else in the package is built from the functions here: q-numbers
[x] = (1-q^x)/(1-q), their products and ratios (q-factorial, q-binomial),
the two q-exponentials e_q and E_q, powers of the constant E_q(1), and the
infinite q-Pochhammer product (a;q)_inf.

All functions are pure and keep no shared mutable state, so concurrent use
is safe.  The base q = 1 is rejected at construction; classical q -> 1
behaviour is exercised only by tests with q close to 1, which keeps every
formula single-cased.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

__all__ = [
    "DomainError",
    "ConvergenceError",
    "EvaluationError",
    "InputError",
    "Regime",
    "QParam",
    "SeriesControl",
    "DEFAULT_CTRL",
    "CompensatedSum",
    "ExpKind",
    "q_number",
    "q_pochhammer",
    "q_factorial",
    "q_binomial",
    "q_exp",
    "eq_power",
    "log_q",
    "qpoch_inf",
]


class DomainError(ValueError):
    """Argument outside the mathematical domain of the requested quantity."""


class ConvergenceError(RuntimeError):
    """A truncated series failed its stopping rule within max_terms."""


class EvaluationError(ValueError):
    """A supplied function produced a non-finite or unusable value."""


class InputError(ValueError):
    """Structurally invalid input (bad certification target, missing family member)."""


class Regime(Enum):
    SUB_ONE = "sub_one"      # 0 < q < 1
    SUPER_ONE = "super_one"  # q > 1


@dataclass(frozen=True)
class QParam:
    """The base q together with its regime tag.

    Requires q > 0 and q != 1; the regime is SUB_ONE exactly when q < 1.
    """

    q: float
    regime: Regime = field(init=False)

    def __post_init__(self) -> None:
        q = self.q
        if not (isinstance(q, (int, float)) and math.isfinite(q)):
            raise DomainError(f"q must be a finite real, got {q!r}")
        if q <= 0.0 or q == 1.0:
            raise DomainError(f"q must satisfy q > 0 and q != 1, got {q}")
        object.__setattr__(self, "q", float(q))
        object.__setattr__(
            self, "regime", Regime.SUB_ONE if q < 1.0 else Regime.SUPER_ONE
        )

    @property
    def is_sub_one(self) -> bool:
        return self.regime is Regime.SUB_ONE


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for infinite sums and products.

    Series stop once |term| <= rel_term_tol * |partial sum|, with max_terms a
    hard cap.  Infinite products are governed by product_tail_tol alone: the
    factors 1 - a q^j are dropped once |a q^j| falls below it.  All the series
    in this package are eventually dominated by a geometric ratio, so the
    relative stopping rule is sound.
    """

    rel_term_tol: float = 1e-16
    max_terms: int = 10_000
    product_tail_tol: float = 1e-18

    def __post_init__(self) -> None:
        if not self.rel_term_tol > 0.0:
            raise DomainError("rel_term_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be at least 1")
        if not self.product_tail_tol > 0.0:
            raise DomainError("product_tail_tol must be positive")


DEFAULT_CTRL = SeriesControl()


class CompensatedSum:
    """Neumaier-compensated accumulator.

    The alternating E_q(-x) series cancels heavily; plain summation would
    dominate the error budget long before the stopping rule fires.
    """

    __slots__ = ("_s", "_c")

    def __init__(self) -> None:
        self._s = 0.0
        self._c = 0.0

    def add(self, term: float) -> None:
        s = self._s
        t = s + term
        if abs(s) >= abs(term):
            self._c += (s - t) + term
        else:
            self._c += (term - t) + s
        self._s = t

    @property
    def value(self) -> float:
        return self._s + self._c


def q_number(x: float, q: QParam) -> float:
    """The q-analogue [x] = (1 - q^x)/(1 - q); tends to x as q -> 1.

    Evaluated through expm1 so the heavy cancellation in 1 - q^x at small
    x*log(q) costs no relative accuracy.
    """
    return -math.expm1(x * math.log(q.q)) / (1.0 - q.q)


def q_pochhammer(x: float, k: int, q: QParam) -> float:
    """Rising product [x]_k = [x][x+1]...[x+k-1]; empty product for k = 0."""
    if k < 0:
        raise DomainError(f"q-Pochhammer length must be nonnegative, got {k}")
    p = 1.0
    for j in range(k):
        p *= q_number(x + j, q)
    return p


def q_factorial(n: int, q: QParam) -> float:
    """[n]! = [1][2]...[n], with [0]! = 1."""
    if n < 0:
        raise DomainError(f"q-factorial needs n >= 0, got {n}")
    return q_pochhammer(1.0, n, q)


def q_binomial(n: int, k: int, q: QParam) -> float:
    """Gaussian binomial [n]! / ([k]! [n-k]!) for 0 <= k <= n."""
    if not 0 <= k <= n:
        raise DomainError(f"q-binomial needs 0 <= k <= n, got n={n}, k={k}")
    return q_factorial(n, q) / (q_factorial(k, q) * q_factorial(n - k, q))


class ExpKind(Enum):
    SMALL_E = "e"  # e_q(x) = sum x^n/[n]!          (radius 1/(1-q) for q < 1)
    BIG_E = "E"    # E_q(x) = sum q^C(n,2) x^n/[n]! (entire for q < 1)


def q_exp(x: float, q: QParam, kind: ExpKind, ctrl: SeriesControl = DEFAULT_CTRL) -> float:
    """Truncated q-exponential series of either kind.

    e_q carries the term ratio x/[n]; E_q carries an extra factor q^(n-1) so
    its n-th term is q^(n(n-1)/2) x^n/[n]!.  Since E_q(x) = e_{1/q}(x), the
    finite convergence radius 1/(1-q) belongs to e_q when q < 1 and to E_q
    (as q/(q-1)) when q > 1; arguments outside it are rejected.
    """
    if not math.isfinite(x):
        raise DomainError(f"q-exponential argument must be finite, got {x!r}")
    qq = q.q
    if kind is ExpKind.SMALL_E and qq < 1.0:
        radius = 1.0 / (1.0 - qq)
        if not abs(x) < radius:
            raise DomainError(
                f"e_q series diverges for |x| >= 1/(1-q) = {radius}, got x={x}"
            )
    if kind is ExpKind.BIG_E and qq > 1.0:
        radius = qq / (qq - 1.0)
        if not abs(x) < radius:
            raise DomainError(
                f"E_q series (q > 1) diverges for |x| >= q/(q-1) = {radius}, got x={x}"
            )
    acc = CompensatedSum()
    acc.add(1.0)
    term = 1.0
    qpow = 1.0  # q^(n-1) for the E_q weight
    for n in range(1, ctrl.max_terms + 1):
        term *= x / q_number(n, q)
        if kind is ExpKind.BIG_E:
            term *= qpow
            qpow *= qq
        acc.add(term)
        if abs(term) <= ctrl.rel_term_tol * abs(acc.value):
            return acc.value
    raise ConvergenceError(
        f"q-exponential series did not settle within {ctrl.max_terms} terms"
    )


@lru_cache(maxsize=128)
def _log_eq_base(qval: float, rel_term_tol: float, max_terms: int) -> float:
    """log E_q(1), the logarithm base behind eq_power and log_q.

    Cached per (q, policy): certification sweeps call eq_power millions of
    times with the same base.
    """
    e1 = q_exp(1.0, QParam(qval), ExpKind.BIG_E, SeriesControl(rel_term_tol, max_terms))
    return math.log(e1)


def eq_power(x: float, q: QParam, ctrl: SeriesControl = DEFAULT_CTRL) -> float:
    """The ordinary power E_q(1)^x of the constant E_q(1)."""
    return math.exp(x * _log_eq_base(q.q, ctrl.rel_term_tol, ctrl.max_terms))


def log_q(y: float, q: QParam, ctrl: SeriesControl = DEFAULT_CTRL) -> float:
    """Logarithm to base E_q(1); exact inverse of eq_power.  Needs y > 0."""
    if not y > 0.0:
        raise DomainError(f"logarithm base E_q(1) needs y > 0, got {y!r}")
    return math.log(y) / _log_eq_base(q.q, ctrl.rel_term_tol, ctrl.max_terms)


def qpoch_inf(a: float, q: QParam, ctrl: SeriesControl = DEFAULT_CTRL) -> float:
    """Infinite q-Pochhammer product (a;q)_inf = prod_{j>=0} (1 - a q^j).

    Converges only for 0 < q < 1; callers in the q > 1 regime must transform
    to base 1/q first.  The tail is cut once |a q^j| < ctrl.product_tail_tol.
    """
    if not q.is_sub_one:
        raise DomainError(
            "infinite q-Pochhammer product needs 0 < q < 1; map q > 1 inputs to base 1/q"
        )
    if not math.isfinite(a):
        raise DomainError(f"(a;q)_inf needs finite a, got {a!r}")
    p = 1.0
    aj = float(a)
    while abs(aj) >= ctrl.product_tail_tol:
        p *= 1.0 - aj
        if p == 0.0:
            return 0.0
        aj *= q.q
    return p


def _log_qpoch_inf(a: float, q: QParam, ctrl: SeriesControl = DEFAULT_CTRL) -> float:
    """log (a;q)_inf for 0 <= a < 1, where every factor is positive.

    This is the log-space workhorse behind the q-gamma ratios; the same
    tail rule as qpoch_inf applies.
    """
    if not 0.0 <= a < 1.0:
        raise DomainError(f"log (a;q)_inf needs 0 <= a < 1, got {a!r}")
    if not q.is_sub_one:
        raise DomainError("log (a;q)_inf needs 0 < q < 1")
    acc = CompensatedSum()
    aj = float(a)
    while aj >= ctrl.product_tail_tol:
        acc.add(math.log1p(-aj))
        aj *= q.q
    return acc.value
