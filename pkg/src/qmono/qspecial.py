"""q-special functions: q-gamma (product form, both regimes, and Jackson-sum
form), the q-digamma and its derivatives, the polylogarithm, and the
gamma-based composite functions whose sign patterns the certifier checks.

Products and ratios of q-gammas, and the [x]-power in the composite, are
assembled in log space and exponentiated once: [x]^(x+beta-alpha) overflows
quickly while the logs stay small and the ratios cancel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .qcore import (
    DEFAULT_CTRL,
    CompensatedSum,
    ConvergenceError,
    DomainError,
    EvaluationError,
    QParam,
    SeriesControl,
    _log_qpoch_inf,
    q_number,
)
from .qmeasure import JacksonIntegralResult, jackson_integral_info

__all__ = [
    "GammaParams",
    "RatioParams",
    "log_q_gamma",
    "q_gamma",
    "q_gamma_jackson",
    "q_gamma_jackson_info",
    "q_psi",
    "q_psi_k",
    "polylog",
    "h_aux",
    "log_f_abq",
    "f_abq",
    "g_ab",
    "g_ratio",
]


@dataclass(frozen=True)
class GammaParams:
    """Exponent pair (alpha, beta) of the gamma-based composite.

    beta must be nonnegative; hypothesis_ok records whether the
    log-monotonicity hypothesis 2*alpha <= 1 <= beta holds.
    """

    alpha: float
    beta: float
    q: QParam

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise DomainError("alpha and beta must be finite")
        if self.beta < 0.0:
            raise DomainError(f"beta must be nonnegative, got {self.beta}")

    @property
    def hypothesis_ok(self) -> bool:
        return 2.0 * self.alpha <= 1.0 <= self.beta


@dataclass(frozen=True)
class RatioParams:
    """Shift sequences (a_i), (b_i) of the q-gamma ratio product.

    The monotonicity hypothesis requires both sequences positive, sorted
    nondecreasing, and prefix-sum dominated: sum_{i<=k} a_i <= sum_{i<=k} b_i
    for every k.  Construction enforces this unless allow_violations is set
    (deliberate negative controls); hypothesis_ok reports the actual status.
    """

    a: tuple[float, ...]
    b: tuple[float, ...]
    allow_violations: bool = False

    def __post_init__(self) -> None:
        a = tuple(float(v) for v in self.a)
        b = tuple(float(v) for v in self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if len(a) != len(b):
            raise DomainError("shift sequences must have equal length")
        for v in a + b:
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"shifts must be positive reals, got {v!r}")
        if not (self.allow_violations or self.hypothesis_ok):
            raise DomainError(
                "shift sequences must be sorted nondecreasing with prefix-sum "
                "dominance sum(a[:k]) <= sum(b[:k]); pass allow_violations=True "
                "for a deliberate negative control"
            )

    @property
    def hypothesis_ok(self) -> bool:
        a, b = self.a, self.b
        if any(x > y for x, y in zip(a, a[1:])) or any(x > y for x, y in zip(b, b[1:])):
            return False
        pa = pb = 0.0
        for x, y in zip(a, b):
            pa += x
            pb += y
            if pa > pb:
                return False
        return True


def log_q_gamma(x: float, q: QParam, ctrl: SeriesControl = DEFAULT_CTRL) -> float:
    """log Gamma_q(x) for x > 0 via the infinite-product form.

    0 < q < 1:  Gamma_q(x) = (q;q)_inf / (q^x;q)_inf * (1-q)^(1-x).
    q > 1:      the base-1/q product with the extra factors (q-1)^(1-x) and
                q^(x(x-1)/2).
    """
    if not x > 0.0:
        raise DomainError(f"q-gamma needs x > 0, got {x!r}")
    qq = q.q
    if q.is_sub_one:
        return (
            _log_qpoch_inf(qq, q, ctrl)
            - _log_qpoch_inf(qq**x, q, ctrl)
            + (1.0 - x) * math.log1p(-qq)
        )
    qh = QParam(1.0 / qq)
    return (
        _log_qpoch_inf(qh.q, qh, ctrl)
        - _log_qpoch_inf(qh.q**x, qh, ctrl)
        + (1.0 - x) * math.log(qq - 1.0)
        + 0.5 * x * (x - 1.0) * math.log(qq)
    )


def q_gamma(x: float, q: QParam, ctrl: SeriesControl = DEFAULT_CTRL) -> float:
    """q-analogue of the gamma function; satisfies Gamma_q(x+1) = [x] Gamma_q(x)
    and Gamma_q(n+1) = [n]!."""
    return math.exp(log_q_gamma(x, q, ctrl))


def _big_e_neg_log(t: float, q: QParam, ctrl: SeriesControl) -> tuple[float, float]:
    """E_q(-q t) for t >= 0 as (sign, log magnitude) via its factor product
    prod_j (1 - (1-q) q^(j+1) t).

    Sign 0.0 flags an exact zero factor (the kernel's lattice zeros).  The
    power-series route overflows long before these arguments do, so the
    Jackson-sum gamma uses this form internally.
    """
    v = (1.0 - q.q) * q.q * t
    sign = 1.0
    logmag = 0.0
    while v >= ctrl.product_tail_tol:
        factor = 1.0 - v
        if factor == 0.0:
            return 0.0, -math.inf
        if factor < 0.0:
            sign = -sign
            logmag += math.log(-factor)
        elif v > 0.5:
            logmag += math.log(factor)
        else:
            logmag += math.log1p(-v)
        v *= q.q
    return sign, logmag


def q_gamma_jackson_info(
    x: float,
    q: QParam,
    n_lo: int = 200,
    n_hi: int = 40,
    ctrl: SeriesControl = DEFAULT_CTRL,
) -> JacksonIntegralResult:
    """Jackson-sum form of the q-gamma: (1-q) sum q^n t^(x-1) E_q(-q t) at
    t = q^n over the window n in [-n_hi, n_lo], with end-term magnitudes.

    Only 0 < q < 1 has this form.  Agreement with the product-form q_gamma
    depends on where the kernel's zeros fall relative to the lattice (exact
    for q = 1/2); the reported end terms say how trustworthy a window is.
    """
    if not q.is_sub_one:
        raise DomainError("the Jackson-sum gamma exists only for 0 < q < 1")
    if not x > 0.0:
        raise DomainError(f"q-gamma needs x > 0, got {x!r}")

    def integrand(t: float) -> float:
        sign, logmag = _big_e_neg_log(t, q, ctrl)
        if sign == 0.0:
            return 0.0
        logterm = (x - 1.0) * math.log(t) + logmag
        try:
            mag = math.exp(logterm)
        except OverflowError as exc:
            raise EvaluationError(
                f"Jackson-sum integrand overflows at t = {t!r}; shrink n_hi"
            ) from exc
        return sign * mag

    return jackson_integral_info(integrand, q, n_lo, n_hi)


def q_gamma_jackson(
    x: float,
    q: QParam,
    n_lo: int = 200,
    n_hi: int = 40,
    ctrl: SeriesControl = DEFAULT_CTRL,
) -> float:
    """Value of the Jackson-sum q-gamma; see q_gamma_jackson_info."""
    return q_gamma_jackson_info(x, q, n_lo, n_hi, ctrl).value


def q_psi(x: float, q: QParam, ctrl: SeriesControl = DEFAULT_CTRL) -> float:
    """q-digamma, the logarithmic derivative of the q-gamma.

    0 < q < 1:  -log(1-q) + log(q) sum_{n>=1} q^(nx) / (1 - q^n).
    q > 1:      -log(q-1) + log(q) (x - 1/2 - sum_{n>=1} q^(-nx)/(1 - q^(-n))).

    Both series converge geometrically in n with ratio q^x (or q^-x).
    """
    if not x > 0.0:
        raise DomainError(f"q-digamma needs x > 0, got {x!r}")
    qq = q.q
    lq = math.log(qq)
    acc = CompensatedSum()
    if q.is_sub_one:
        for n in range(1, ctrl.max_terms + 1):
            term = math.exp(n * x * lq) / -math.expm1(n * lq)
            acc.add(term)
            if term <= ctrl.rel_term_tol * acc.value:
                return -math.log1p(-qq) + lq * acc.value
        raise ConvergenceError(f"q-digamma series did not settle within {ctrl.max_terms} terms")
    for n in range(1, ctrl.max_terms + 1):
        term = math.exp(-n * x * lq) / -math.expm1(-n * lq)
        acc.add(term)
        if term <= ctrl.rel_term_tol * acc.value:
            return -math.log(qq - 1.0) + lq * (x - 0.5 - acc.value)
    raise ConvergenceError(f"q-digamma series did not settle within {ctrl.max_terms} terms")


def q_psi_k(x: float, q: QParam, k: int, ctrl: SeriesControl = DEFAULT_CTRL) -> float:
    """k-th derivative (in x) of the q-digamma, k >= 1, by termwise
    differentiation of the q_psi series.

    0 < q < 1:  log(q)^(k+1) sum n^k q^(nx) / (1 - q^n); every term has the
                fixed sign of log(q)^(k+1).
    q > 1:      (-1)^(k+1) log(q)^(k+1) sum n^k q^(-nx) / (1 - q^(-n)), plus
                the constant log(q) surviving from the linear term when k = 1.
    """
    if not x > 0.0:
        raise DomainError(f"q-digamma derivatives need x > 0, got {x!r}")
    if k < 1:
        raise DomainError(f"derivative order must be >= 1, got {k}")
    qq = q.q
    lq = math.log(qq)
    acc = CompensatedSum()
    if q.is_sub_one:
        for n in range(1, ctrl.max_terms + 1):
            term = float(n) ** k * math.exp(n * x * lq) / -math.expm1(n * lq)
            acc.add(term)
            if term <= ctrl.rel_term_tol * acc.value:
                return lq ** (k + 1) * acc.value
        raise ConvergenceError(
            f"q-digamma derivative series did not settle within {ctrl.max_terms} terms"
        )
    for n in range(1, ctrl.max_terms + 1):
        term = float(n) ** k * math.exp(-n * x * lq) / -math.expm1(-n * lq)
        acc.add(term)
        if term <= ctrl.rel_term_tol * acc.value:
            value = (-1.0) ** (k + 1) * lq ** (k + 1) * acc.value
            if k == 1:
                value += lq
            return value
    raise ConvergenceError(
        f"q-digamma derivative series did not settle within {ctrl.max_terms} terms"
    )


def polylog(s: float, z: float, ctrl: SeriesControl = DEFAULT_CTRL) -> float:
    """Polylogarithm Li_s(z) = sum_{k>=1} z^k / k^s on |z| < 1.

    Arguments on or outside the unit circle are rejected; the package only
    ever needs z = q^x in (0, 1).
    """
    if not abs(z) < 1.0:
        raise DomainError(f"polylogarithm series needs |z| < 1, got z={z!r}")
    if z == 0.0:
        return 0.0
    acc = CompensatedSum()
    zk = 1.0
    for k in range(1, ctrl.max_terms + 1):
        zk *= z
        term = zk / float(k) ** s
        acc.add(term)
        if abs(term) <= ctrl.rel_term_tol * abs(acc.value):
            return acc.value
    raise ConvergenceError(f"polylogarithm series did not settle within {ctrl.max_terms} terms")


def h_aux(x: float, q: QParam, ctrl: SeriesControl = DEFAULT_CTRL) -> float:
    """Dilogarithm correction -(Li_2(q^x) + x log(q) log(1-q^x)) / log(q).

    Decays to 0 as x grows (both numerator terms vanish with q^x); its
    classical derivative is x q^x log(q) / (1 - q^x).
    """
    if not q.is_sub_one:
        raise DomainError("h is defined for 0 < q < 1")
    if not x > 0.0:
        raise DomainError(f"h needs x > 0, got {x!r}")
    lq = math.log(q.q)
    z = math.exp(x * lq)
    one_minus_z = -math.expm1(x * lq)
    return -(polylog(2.0, z, ctrl) + x * lq * math.log(one_minus_z)) / lq


def log_f_abq(x: float, p: GammaParams, ctrl: SeriesControl = DEFAULT_CTRL) -> float:
    """Log-space pipeline for the gamma-based composite

        f(x) = (1-q)^x e^(h(x)) Gamma_q(x+beta) / [x]^(x+beta-alpha),

    i.e. x log(1-q) + h(x) + log Gamma_q(x+beta) - (x+beta-alpha) log [x].
    """
    q = p.q
    if not q.is_sub_one:
        raise DomainError("the gamma-based composite is defined for 0 < q < 1")
    if not x > 0.0:
        raise DomainError(f"the gamma-based composite needs x > 0, got {x!r}")
    bracket = q_number(x, q)
    return (
        x * math.log1p(-q.q)
        + h_aux(x, q, ctrl)
        + log_q_gamma(x + p.beta, q, ctrl)
        - (x + p.beta - p.alpha) * math.log(bracket)
    )


def f_abq(x: float, p: GammaParams, ctrl: SeriesControl = DEFAULT_CTRL) -> float:
    """The gamma-based composite itself (always positive); overflow in the
    final exponentiation is reported rather than returned as inf."""
    lf = log_f_abq(x, p, ctrl)
    try:
        return math.exp(lf)
    except OverflowError as exc:
        raise EvaluationError(
            f"gamma-based composite overflows at x = {x!r} (log value {lf!r})"
        ) from exc


def g_ab(t: float, alpha: float, beta: float) -> float:
    """Elementary positivity witness

        g(t) = t + ((beta-alpha) t - 1) (e^(beta t) - e^((beta-1) t)),

    strictly positive on t > 0 whenever 2*alpha <= 1 <= beta.

    The exponential difference is evaluated as e^((beta-1)t) expm1(t): near
    t = 0 the whole expression cancels down to O(t^2), which the naive form
    buries under exp() rounding noise.
    """
    if not t > 0.0:
        raise DomainError(f"positivity witness needs t > 0, got {t!r}")
    return t + ((beta - alpha) * t - 1.0) * math.exp((beta - 1.0) * t) * math.expm1(t)


def g_ratio(x: float, rp: RatioParams, q: QParam, ctrl: SeriesControl = DEFAULT_CTRL) -> float:
    """Gamma-ratio product prod_i Gamma_q(x+a_i) / Gamma_q(x+b_i) in log space;
    the empty product is 1."""
    if not x > 0.0:
        raise DomainError(f"gamma-ratio product needs x > 0, got {x!r}")
    if not q.is_sub_one:
        raise DomainError("the gamma-ratio product is defined for 0 < q < 1")
    acc = CompensatedSum()
    for ai, bi in zip(rp.a, rp.b):
        acc.add(log_q_gamma(x + ai, q, ctrl))
        acc.add(-log_q_gamma(x + bi, q, ctrl))
    return math.exp(acc.value)
