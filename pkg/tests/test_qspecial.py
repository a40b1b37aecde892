"""q-gamma, q-digamma, polylogarithm and the composite functions."""

import math

import pytest

from _oracles import central_diff
from qmono import (
    DomainError,
    GammaParams,
    QParam,
    RatioParams,
    SeriesControl,
    f_abq,
    g_ab,
    g_ratio,
    h_aux,
    log_f_abq,
    log_q_gamma,
    polylog,
    q_factorial,
    q_gamma,
    q_gamma_jackson,
    q_gamma_jackson_info,
    q_number,
    q_psi,
    q_psi_k,
)

Q5 = QParam(0.5)
Q9 = QParam(0.9)
DEEP = SeriesControl(rel_term_tol=1e-16, max_terms=400_000)


def fd5(f, x, h=1e-2):
    """Five-point central first-derivative stencil, O(h^4)."""
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


class TestQGamma:
    def test_at_one(self):
        assert q_gamma(1.0, Q5) == pytest.approx(1.0, abs=1e-12)

    def test_matches_q_factorial(self):
        for qv in (0.5, 0.9):
            q = QParam(qv)
            for n in range(0, 7):
                assert q_gamma(n + 1.0, q) == pytest.approx(
                    q_factorial(n, q), rel=1e-10
                )

    @pytest.mark.parametrize("qv", [0.5, 0.9, 2.0])
    def test_recurrence(self, qv):
        # Gamma_q(x+1) = [x] Gamma_q(x), both regimes
        q = QParam(qv)
        for i in range(1, 11):
            x = 0.5 * i
            assert q_gamma(x + 1.0, q) == pytest.approx(
                q_number(x, q) * q_gamma(x, q), rel=1e-10
            )

    def test_classical_limit(self):
        q = QParam(0.999)
        assert q_gamma(4.0, q) == pytest.approx(6.0, rel=0.01)
        for x in (1.0, 1.5, 2.0, 2.5, 3.0):
            assert q_gamma(x, q) == pytest.approx(math.gamma(x), rel=0.01)

    def test_nonpositive_rejected(self):
        with pytest.raises(DomainError):
            q_gamma(0.0, Q5)
        with pytest.raises(DomainError):
            log_q_gamma(-1.0, Q5)


class TestQGammaJackson:
    def test_matches_product_form_at_half(self):
        # at q = 1/2 the lattice contains the kernel zeros, so the bilateral
        # sum reproduces the product form essentially exactly
        for x in (1.0, 2.0, 3.0):
            v = q_gamma_jackson(x, Q5)
            assert v == pytest.approx(q_gamma(x, Q5), rel=1e-6)
        info = q_gamma_jackson_info(2.0, Q5)
        assert info.tails_ok()

    def test_cross_evaluation_q09(self):
        # window chosen by the reported end terms (n_hi = 22 sits just before
        # the kernel starts oscillating); measured truncation quality ~ 8e-7
        v = q_gamma_jackson(3.0, Q9, 200, 22)
        assert v == pytest.approx(q_gamma(3.0, Q9), rel=1e-5)

    def test_tail_report_flags_wide_window(self):
        # the default window is only trustworthy where the kernel has lattice
        # zeros; at q = 0.9 the large-t end term must be visibly nonzero
        info = q_gamma_jackson_info(3.0, Q9, 200, 22)
        assert info.large_end_term > 0.0
        assert not info.tails_ok()

    def test_non_integer_x_reported_not_asserted(self):
        # agreement at non-integer x is reported via the end terms only
        info = q_gamma_jackson_info(2.5, Q9, 200, 22)
        assert math.isfinite(info.value)
        assert info.large_end_term >= 0.0

    def test_super_one_rejected(self):
        with pytest.raises(DomainError):
            q_gamma_jackson(1.0, QParam(2.0))


class TestQPsi:
    def test_value_at_one(self):
        assert q_psi(1.0, Q5) == pytest.approx(-0.4206, abs=1e-3)

    def test_large_x_limit(self):
        # series tail vanishes, leaving -log(1-q)
        assert q_psi(50.0, Q5) == pytest.approx(-math.log(0.5), abs=1e-6)

    @pytest.mark.parametrize("qv", [0.5, 0.9, 2.0])
    def test_recurrence(self, qv):
        # psi_q(x+1) - psi_q(x) = -log(q) q^x / (1 - q^x), by telescoping
        q = QParam(qv)
        for x in (0.25, 1.0, 2.5, 4.0):
            lhs = q_psi(x + 1.0, q, DEEP) - q_psi(x, q, DEEP)
            rhs = -math.log(qv) * qv**x / (1.0 - qv**x)
            assert lhs == pytest.approx(rhs, abs=1e-8)

    def test_nonpositive_rejected(self):
        with pytest.raises(DomainError):
            q_psi(0.0, Q5)


class TestQPsiK:
    @pytest.mark.parametrize("qv", [0.5, 0.9, 2.0])
    def test_first_derivative_matches_fd(self, qv):
        q = QParam(qv)
        for x in (0.7, 1.5, 3.0):
            got = q_psi_k(x, q, 1, DEEP)
            fd = fd5(lambda y: q_psi(y, q, DEEP), x)
            assert got == pytest.approx(fd, rel=1e-6)

    @pytest.mark.parametrize("qv", [0.5, 0.9, 2.0])
    @pytest.mark.parametrize("k", [2, 3])
    def test_higher_orders_match_fd_of_previous(self, qv, k):
        q = QParam(qv)
        for x in (0.8, 1.6, 3.0):
            got = q_psi_k(x, q, k, DEEP)
            fd = fd5(lambda y: q_psi_k(y, q, k - 1, DEEP), x)
            assert got == pytest.approx(fd, rel=1e-5)

    def test_sign_pattern(self):
        # every series term carries the fixed sign of log(q)^(k+1)
        for x in (0.2, 1.0, 3.0, 5.0):
            assert q_psi_k(x, Q5, 1) > 0.0
            assert q_psi_k(x, Q5, 2) < 0.0
            assert q_psi_k(x, Q5, 3) > 0.0

    def test_far_tail_single_term(self):
        # at x = 50 the n = 1 term dominates the whole series
        expected = math.log(0.5) ** 2 * 0.5**50 / (1.0 - 0.5)
        assert q_psi_k(50.0, Q5, 1) == pytest.approx(expected, rel=1e-10)

    def test_classical_cm_pattern_of_psi_prime(self):
        # (-1)^n (psi_q')^(n) > 0, classical finite-difference screen, n <= 4
        f = lambda x: q_psi_k(x, Q5, 1, DEEP)
        for x in (0.5, 1.0, 2.0, 3.5, 5.0):
            for n in range(0, 5):
                est = central_diff(f, x, n, 2e-2) if n else f(x)
                assert (-1.0) ** n * est > 0.0

    def test_rejects_bad_order(self):
        with pytest.raises(DomainError):
            q_psi_k(1.0, Q5, 0)


class TestPolylog:
    def test_empty_sum(self):
        assert polylog(2.0, 0.0) == 0.0

    def test_li1_closed_form(self):
        # Li_1(z) = -log(1-z)
        assert polylog(1.0, 0.5) == pytest.approx(math.log(2.0), abs=1e-9)

    def test_li2_closed_form(self):
        # Li_2(1/2) = pi^2/12 - log(2)^2/2
        expected = math.pi**2 / 12.0 - math.log(2.0) ** 2 / 2.0
        assert polylog(2.0, 0.5) == pytest.approx(expected, abs=1e-7)
        assert polylog(2.0, 0.5) == pytest.approx(0.5822405, abs=1e-7)

    def test_unit_circle_rejected(self):
        for z in (1.0, -1.0, 1.5):
            with pytest.raises(DomainError):
                polylog(2.0, z)


class TestHAux:
    def test_decays_at_large_x(self):
        assert abs(h_aux(40.0, Q5)) < 1e-10

    def test_value_at_one(self):
        # -(Li2(1/2) + log(1/2)^2)/log(1/2), componentwise oracle
        li2 = math.pi**2 / 12.0 - math.log(2.0) ** 2 / 2.0
        expected = -(li2 + math.log(0.5) ** 2) / math.log(0.5)
        assert h_aux(1.0, Q5) == pytest.approx(expected, abs=1e-9)
        assert h_aux(1.0, Q5) == pytest.approx(1.5331, abs=1e-4)

    def test_classical_derivative_closed_form(self):
        # h'(x) = x q^x log(q) / (1 - q^x)
        for x in (0.5, 1.0, 2.0):
            fd = (h_aux(x + 1e-5, Q5) - h_aux(x - 1e-5, Q5)) / 2e-5
            closed = x * 0.5**x * math.log(0.5) / (1.0 - 0.5**x)
            assert fd == pytest.approx(closed, abs=1e-4)

    def test_domain(self):
        with pytest.raises(DomainError):
            h_aux(0.0, Q5)
        with pytest.raises(DomainError):
            h_aux(1.0, QParam(2.0))


class TestGammaParams:
    def test_hypothesis_flag(self):
        assert GammaParams(0.5, 1.0, Q5).hypothesis_ok
        assert GammaParams(-1.0, 2.0, Q5).hypothesis_ok
        assert not GammaParams(0.7, 1.0, Q5).hypothesis_ok
        assert not GammaParams(0.0, 0.5, Q5).hypothesis_ok

    def test_negative_beta_rejected(self):
        with pytest.raises(DomainError):
            GammaParams(0.0, -0.1, Q5)


class TestFAbq:
    def test_power_term_dies_at_x_one(self):
        # [1] = 1 kills the denominator power; alpha = beta case
        p = GammaParams(1.0, 1.0, Q5)
        expected = 0.5 * math.exp(h_aux(1.0, Q5)) * q_gamma(2.0, Q5)
        assert f_abq(1.0, p) == pytest.approx(expected, rel=1e-12)

    def test_componentwise_value(self):
        p = GammaParams(0.5, 1.0, Q5)
        assert f_abq(1.0, p) == pytest.approx(2.3164, abs=1e-3)

    def test_positive_on_grid(self):
        p = GammaParams(0.5, 1.0, Q5)
        for i in range(1, 20):
            assert f_abq(0.25 * i, p) > 0.0

    def test_log_pipeline_matches_components(self):
        # recompute log f from separately exponentiated components
        p = GammaParams(0.5, 1.0, Q5)
        for x in (0.3, 1.0, 2.7):
            direct = (
                x * math.log(0.5)
                + h_aux(x, Q5)
                + math.log(q_gamma(x + 1.0, Q5))
                - (x + 0.5) * math.log(q_number(x, Q5))
            )
            assert log_f_abq(x, p) == pytest.approx(direct, abs=1e-10)

    def test_domain(self):
        p = GammaParams(0.5, 1.0, Q5)
        with pytest.raises(DomainError):
            f_abq(0.0, p)
        with pytest.raises(DomainError):
            f_abq(1.0, GammaParams(0.5, 1.0, QParam(2.0)))


class TestGAb:
    def test_vanishes_at_origin(self):
        assert abs(g_ab(1e-8, 0.5, 1.0)) < 1e-7

    def test_reference_value(self):
        # 1 + (0.5 - 1)(e - 1)
        assert g_ab(1.0, 0.5, 1.0) == pytest.approx(0.140859, abs=1e-6)

    def test_positive_under_hypothesis(self):
        # 5x5 hypothesis grid (2*alpha <= 1 <= beta), 200 log points on (0, 50]
        alphas = (-1.0, -0.5, 0.0, 0.25, 0.5)
        betas = (1.0, 1.5, 2.0, 2.5, 3.0)
        pts = [1e-6 * (50.0 / 1e-6) ** (i / 199.0) for i in range(200)]
        for alpha in alphas:
            for beta in betas:
                for t in pts:
                    assert g_ab(t, alpha, beta) > 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            g_ab(0.0, 0.5, 1.0)


class TestRatioParams:
    def test_valid_construction(self):
        rp = RatioParams((1.0, 2.0), (2.0, 3.0))
        assert rp.hypothesis_ok

    def test_empty_allowed(self):
        assert RatioParams((), ()).hypothesis_ok

    def test_dominance_violation_rejected(self):
        with pytest.raises(DomainError):
            RatioParams((2.0,), (1.0,))
        with pytest.raises(DomainError):
            RatioParams((1.0, 0.5), (2.0, 3.0))  # not sorted

    def test_override_flag(self):
        rp = RatioParams((2.0,), (1.0,), allow_violations=True)
        assert not rp.hypothesis_ok

    def test_length_mismatch_rejected(self):
        with pytest.raises(DomainError):
            RatioParams((1.0,), (1.0, 2.0))


class TestGRatio:
    def test_empty_product_is_one(self):
        assert g_ratio(1.0, RatioParams((), ()), Q5) == 1.0

    def test_single_ratio_recurrence(self):
        # Gamma_q(2)/Gamma_q(3) = 1/[2]
        rp = RatioParams((1.0,), (2.0,))
        assert g_ratio(1.0, rp, Q5) == pytest.approx(2.0 / 3.0, rel=1e-10)

    def test_cancellation_case(self):
        # a=(1,1), b=(1,2) at x=2: everything cancels to 1/[3]
        rp = RatioParams((1.0, 1.0), (1.0, 2.0))
        q7 = QParam(0.7)
        expected = 1.0 / q_number(3.0, q7)
        assert g_ratio(2.0, rp, q7, DEEP) == pytest.approx(expected, rel=1e-10)

    def test_matches_reciprocal_bracket_on_grid(self):
        # ((1),(2)): G(x) = 1/[x+1]
        rp = RatioParams((1.0,), (2.0,))
        for i in range(1, 21):
            x = 0.25 * i
            assert g_ratio(x, rp, Q5) == pytest.approx(
                1.0 / q_number(x + 1.0, Q5), rel=1e-10
            )

    def test_domain(self):
        rp = RatioParams((1.0,), (2.0,))
        with pytest.raises(DomainError):
            g_ratio(0.0, rp, Q5)
        with pytest.raises(DomainError):
            g_ratio(1.0, rp, QParam(2.0))
