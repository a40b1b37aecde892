"""Sign-pattern certifier: verdicts, soundness, determinism, harnesses."""

import math

import pytest

from _oracles import classical_logcm_screen, reciprocal_q_derive_sign
from qmono import (
    CertProperty,
    CertReport,
    CertSpec,
    DomainError,
    ExpKind,
    GammaParams,
    Grid,
    InputError,
    QParam,
    RatioParams,
    SeriesControl,
    Verdict,
    bernstein_iff_check,
    certify,
    closure_checks,
    difference_check,
    eq_power,
    g_ratio,
    q_derive_n,
    q_exp,
    q_number,
    q_psi_k,
    report_to_csv,
    report_to_json,
    thm31_harness,
    thm32_harness,
)

Q5 = QParam(0.5)
QCM = CertProperty.QCM
QLOGCM = CertProperty.QLOGCM
QBERNSTEIN = CertProperty.QBERNSTEIN


class TestGrid:
    def test_default(self):
        g = Grid()
        assert len(g.points) == 64
        assert g.points[0] == 0.1 and g.points[-1] == 5.0

    def test_validation(self):
        with pytest.raises(DomainError):
            Grid(())
        with pytest.raises(DomainError):
            Grid((0.0, 1.0))
        with pytest.raises(DomainError):
            Grid((2.0, 1.0))

    def test_constructors(self):
        lin = Grid.linear(1.0, 3.0, 5)
        assert lin.points == (1.0, 1.5, 2.0, 2.5, 3.0)
        log = Grid.log_spaced(0.1, 10.0, 7)
        assert log.points[0] == 0.1 and log.points[-1] == 10.0


class TestCertSpec:
    def test_defaults(self):
        spec = CertSpec(QCM)
        assert spec.max_order == 6
        assert spec.tol_abs == 1e-9 and spec.tol_rel == 1e-7

    def test_order_cap(self):
        with pytest.raises(DomainError):
            CertSpec(QCM, max_order=9)
        with pytest.raises(DomainError):
            CertSpec(QCM, max_order=0)


class TestCertify:
    def test_identity_violates_qcm(self):
        rep = certify(lambda x: x, Q5, CertSpec(QCM, max_order=4))
        assert rep.verdict is Verdict.VIOLATED
        first = rep.counterexamples[0]
        assert first.x == rep.grid[0]
        assert first.n == 1
        assert first.value == -1.0
        assert rep.min_margin == -1.0

    def test_identity_is_qbernstein(self):
        rep = certify(lambda x: x, Q5, CertSpec(QBERNSTEIN, max_order=6))
        assert rep.verdict is Verdict.CONSISTENT

    def test_reciprocal_is_qcm_with_closed_form_spots(self):
        f = lambda x: 1.0 / (x + 1.0)
        rep = certify(f, Q5, CertSpec(QCM, max_order=5))
        assert rep.verdict is Verdict.CONSISTENT
        for x in (0.5, 1.0, 2.3, 5.0):
            for n in range(0, 6):
                signed = (-1.0) ** n * q_derive_n(f, x, Q5, n)
                assert signed == pytest.approx(
                    reciprocal_q_derive_sign(n, x, 1.0, Q5), rel=1e-10
                )

    def test_checks_run_counts(self):
        grid = Grid.linear(1.0, 2.0, 5)
        rep = certify(lambda x: x, Q5, CertSpec(QCM, max_order=3, grid=grid))
        assert rep.checks_run == 5 * 4  # orders 0..3
        rep = certify(lambda x: x, Q5, CertSpec(QLOGCM, max_order=3, grid=grid))
        assert rep.checks_run == 5 * 3  # orders 1..3
        rep = certify(lambda x: x, Q5, CertSpec(QBERNSTEIN, max_order=3, grid=grid))
        assert rep.checks_run == 5 * 4  # nonnegativity plus orders 1..3

    def test_report_echoes_spec(self):
        spec = CertSpec(QCM, max_order=2, grid=Grid.linear(1.0, 2.0, 3), tol_abs=1e-8)
        rep = certify(lambda x: x, Q5, spec)
        assert rep.q == 0.5
        assert rep.max_order == 2
        assert rep.tol_abs == 1e-8
        assert rep.grid == spec.grid.points

    def test_qlogcm_needs_positive_function(self):
        spec = CertSpec(QLOGCM, max_order=2, grid=Grid.linear(0.5, 2.0, 4))
        with pytest.raises(InputError) as err:
            certify(lambda x: x - 1.0, Q5, spec)
        assert "0.5" in str(err.value) or "0.25" in str(err.value) or "0.125" in str(err.value)

    def test_non_evaluable_function_is_input_error(self):
        with pytest.raises(InputError):
            certify(lambda x: math.nan, Q5, CertSpec(QCM, max_order=2))

    def test_constant_is_neutral_everywhere(self):
        rep = certify(lambda x: 4.5, Q5, CertSpec(QCM, max_order=6))
        assert rep.verdict is Verdict.CONSISTENT
        assert rep.min_margin == 0.0  # every order >= 1 sits in the zero band


class TestSoundness:
    """Certifier verdicts must match the analytically known sign patterns."""

    QS = (0.3, 0.5, 0.7, 0.9)

    @pytest.mark.parametrize("qv", QS)
    def test_monomials(self, qv):
        q = QParam(qv)
        for m, bernstein_expected in ((1, Verdict.CONSISTENT), (2, Verdict.VIOLATED), (3, Verdict.VIOLATED)):
            f = lambda x, m=m: x**m
            assert certify(f, q, CertSpec(QCM, max_order=6)).verdict is Verdict.VIOLATED
            rep = certify(f, q, CertSpec(QBERNSTEIN, max_order=6))
            assert rep.verdict is bernstein_expected
            if m > 1:
                # the sign break is D_q^2 x^m = -[m][m-1] x^(m-2), order 2
                assert rep.counterexamples[0].n == 2

    @pytest.mark.parametrize("qv", QS)
    def test_small_e_decay_is_qcm(self, qv):
        # D_q^n e_q(ax) = a^n e_q(ax) with a < 0 alternates correctly
        q = QParam(qv)
        f = lambda x: q_exp(-0.2 * x, q, ExpKind.SMALL_E)
        assert certify(f, q, CertSpec(QCM, max_order=6)).verdict is Verdict.CONSISTENT

    @pytest.mark.parametrize("qv", QS)
    def test_small_e_growth_is_not_qcm(self, qv):
        q = QParam(qv)
        f = lambda x: q_exp(0.2 * x, q, ExpKind.SMALL_E)
        rep = certify(f, q, CertSpec(QCM, max_order=6))
        assert rep.verdict is Verdict.VIOLATED
        assert rep.counterexamples[0].n == 1

    @pytest.mark.parametrize("qv", QS)
    def test_big_e_decay_is_qcm(self, qv):
        q = QParam(qv)
        f = lambda x: q_exp(-0.2 * x, q, ExpKind.BIG_E)
        assert certify(f, q, CertSpec(QCM, max_order=6)).verdict is Verdict.CONSISTENT

    @pytest.mark.parametrize("qv", QS)
    def test_reciprocal_is_qcm(self, qv):
        q = QParam(qv)
        f = lambda x: 1.0 / (x + 1.0)
        assert certify(f, q, CertSpec(QCM, max_order=6)).verdict is Verdict.CONSISTENT


class TestDeterminism:
    def test_byte_identical_reports_across_runs(self):
        spec = CertSpec(QCM, max_order=5)
        f = lambda x: 1.0 / (x + 1.0)
        a = report_to_json(certify(f, Q5, spec))
        b = report_to_json(certify(f, Q5, spec))
        assert a == b

    def test_serial_matches_parallel(self):
        spec = CertSpec(QCM, max_order=5)
        for f in (lambda x: x, lambda x: 1.0 / (x + 1.0)):
            serial = certify(f, Q5, spec)
            parallel = certify(f, Q5, spec, workers=4)
            assert report_to_json(serial) == report_to_json(parallel)
            assert report_to_csv(serial) == report_to_csv(parallel)

    def test_counterexamples_sorted_by_grid_index_then_order(self):
        rep = certify(lambda x: x * x, Q5, CertSpec(QBERNSTEIN, max_order=4), workers=3)
        keys = [(c.x, c.n) for c in rep.counterexamples]
        order = {x: i for i, x in enumerate(rep.grid)}
        assert keys == sorted(keys, key=lambda p: (order[p[0]], p[1]))

    def test_every_counterexample_fails_the_tolerance_test(self):
        for f in (lambda x: x * x, lambda x: x):
            rep = certify(f, Q5, CertSpec(QCM, max_order=5))
            assert rep.counterexamples
            for c in rep.counterexamples:
                assert c.value < 0.0
                assert abs(c.value) > rep.tol_abs + rep.tol_rel * c.scale


class TestSerialization:
    def test_json_shape(self):
        rep = certify(lambda x: x, Q5, CertSpec(QCM, max_order=2, grid=Grid.linear(1.0, 2.0, 2)))
        text = report_to_json(rep)
        assert text.startswith('{"kind": "cert_report"')
        assert '"verdict": "Violated"' in text
        assert text.endswith("\n")

    def test_csv_rows(self):
        rep = certify(lambda x: x, Q5, CertSpec(QCM, max_order=2, grid=Grid.linear(1.0, 2.0, 2)))
        lines = report_to_csv(rep).splitlines()
        assert lines[0] == "x,n,value,scale,margin"
        assert len(lines) == 1 + len(rep.counterexamples)
        first = lines[1].split(",")
        assert first[0] == "1"  # x = 1 at 17 significant digits
        assert first[1] == "1"
        assert first[2] == "-1"

    def test_consistent_report_has_header_only_csv(self):
        rep = certify(lambda x: 1.0 / (x + 1.0), Q5, CertSpec(QCM, max_order=3))
        assert report_to_csv(rep) == "x,n,value,scale,margin\n"


class TestBernsteinIff:
    TS = (0.5, 1.0, 2.0)

    @pytest.mark.parametrize(
        "name,f",
        [
            ("identity", lambda x: x),
            ("constant", lambda x: 3.0),
            ("one_minus_decay", lambda x: 1.0 - eq_power(-x, Q5)),
        ],
    )
    def test_bernstein_functions_agree(self, name, f):
        rep = bernstein_iff_check(f, self.TS, Q5, CertSpec(QCM, max_order=6))
        assert rep.f_report.verdict is Verdict.CONSISTENT
        assert all(r.verdict is Verdict.CONSISTENT for _, r in rep.cm_reports)
        assert rep.agree and not rep.any_violation

    def test_square_negative_control(self):
        rep = bernstein_iff_check(lambda x: x * x, self.TS, Q5, CertSpec(QCM, max_order=6))
        assert rep.f_report.verdict is Verdict.VIOLATED
        # D_q^2 x^2 = [2][1], so the signed order-2 value is -[2]!
        first = rep.f_report.counterexamples[0]
        assert first.n == 2
        assert first.value == pytest.approx(-q_number(2.0, Q5), rel=1e-12)
        assert rep.any_violation and rep.flagged

    def test_nonpositive_t_rejected(self):
        with pytest.raises(InputError):
            bernstein_iff_check(lambda x: x, (0.0,), Q5, CertSpec(QCM))


class TestDifferenceCheck:
    def test_constant_difference_is_zero(self):
        rep = difference_check(lambda x: 2.0, 1.0, Q5, CertSpec(QCM, max_order=4))
        assert rep.verdict is Verdict.CONSISTENT
        assert rep.min_margin == 0.0

    def test_reciprocal_difference_is_qcm(self):
        f = lambda x: 1.0 / (x + 1.0)
        f_rep = certify(f, Q5, CertSpec(QCM, max_order=5))
        rep = difference_check(f, 1.0, Q5, CertSpec(QCM, max_order=5), f_report=f_rep)
        assert rep.verdict is Verdict.CONSISTENT
        assert any("Consistent" in note for note in rep.notes)

    def test_identity_negative_control(self):
        # f(x) - f(x+1) = -1: nonnegativity already fails at order 0
        rep = difference_check(lambda x: x, 1.0, Q5, CertSpec(QCM, max_order=3))
        assert rep.verdict is Verdict.VIOLATED
        assert rep.counterexamples[0].n == 0
        assert rep.counterexamples[0].value == -1.0

    def test_skipped_precondition_is_noted(self):
        rep = difference_check(lambda x: 2.0, 0.5, Q5, CertSpec(QCM, max_order=2))
        assert any("not checked" in note for note in rep.notes)

    def test_bad_shift_rejected(self):
        with pytest.raises(InputError):
            difference_check(lambda x: x, 0.0, Q5, CertSpec(QCM))


class TestClosureChecks:
    def make_corpus(self):
        return {
            "identity": lambda x: x,
            "constant": lambda x: 2.0,
            "one_minus_eq_decay": lambda x: 1.0 - eq_power(-x, Q5),
            "reciprocal_shift": lambda x: 1.0 / (x + 1.0),
            "eq_decay": lambda x: eq_power(-x, Q5),
        }

    def test_closure_laws_hold_on_corpus(self):
        rep = closure_checks(self.make_corpus(), Q5, CertSpec(QCM, max_order=5))
        assert rep.all_ok
        kinds = {c.kind for c in rep.checks}
        assert kinds == {"composition", "logcm_implies_cm", "power_stays_cm", "decay_is_logcm"}

    def test_base_verdicts_match_theory(self):
        rep = closure_checks(self.make_corpus(), Q5, CertSpec(QCM, max_order=5))
        base = {(n, p): v for n, p, v in rep.base}
        assert base[("identity", "qbernstein")] == "Consistent"
        assert base[("identity", "qcm")] == "Violated"
        assert base[("eq_decay", "qcm")] == "Consistent"
        assert base[("eq_decay", "qlogcm")] == "Consistent"
        assert base[("eq_decay", "qbernstein")] == "Violated"
        assert base[("reciprocal_shift", "qcm")] == "Consistent"

    def test_composition_includes_canonical_pair(self):
        # identity composed into 1 - E_q(1)^(-x) stays q-Bernstein
        rep = closure_checks(
            {"identity": lambda x: x, "one_minus_eq_decay": lambda x: 1.0 - eq_power(-x, Q5)},
            Q5,
            CertSpec(QCM, max_order=5),
        )
        pairs = {(c.f_name, c.g_name) for c in rep.checks if c.kind == "composition"}
        assert ("identity", "one_minus_eq_decay") in pairs
        assert rep.all_ok

    def test_logcm_implies_cm_over_corpus(self):
        rep = closure_checks(self.make_corpus(), Q5, CertSpec(QCM, max_order=5))
        rows = [c for c in rep.checks if c.kind == "logcm_implies_cm"]
        assert rows, "corpus must exercise the implication"
        assert all(c.ok for c in rows)


class TestClassicalTransfer:
    """Classical log-CM (finite-difference screen) implies the q-pattern."""

    def test_screen_passers_certify_qlogcm(self):
        corpus = {
            "reciprocal_shift": lambda x: 1.0 / (x + 1.0),
            "exp_decay": lambda x: math.exp(-x),
            "eq_decay": lambda x: eq_power(-x, Q5),
            "constant": lambda x: 2.0,
        }
        xs = (0.5, 1.0, 2.0, 3.5, 5.0)
        screened = {n for n, f in corpus.items() if classical_logcm_screen(f, xs)}
        assert screened == set(corpus), "all four are classically log-CM"
        for name in screened:
            rep = certify(corpus[name], Q5, CertSpec(QLOGCM, max_order=6))
            assert rep.verdict is Verdict.CONSISTENT, name

    def test_screen_rejects_non_logcm(self):
        # x + 1 is increasing: (log f)' > 0 breaks the pattern at n = 1
        assert not classical_logcm_screen(lambda x: x + 1.0, (0.5, 1.0, 2.0))


class TestThm31Harness:
    def test_consistent_for_hypothesis_points(self):
        for qv in (0.3, 0.7):
            for alpha, beta in ((0.5, 1.0), (0.0, 2.0)):
                p = GammaParams(alpha, beta, QParam(qv))
                rep = thm31_harness(p, CertSpec(QLOGCM, max_order=4))
                assert rep.verdict is Verdict.CONSISTENT
                assert any("witness" in n for n in rep.notes)

    def test_hypothesis_gate(self):
        p = GammaParams(0.7, 1.0, Q5)  # 2*alpha > 1
        with pytest.raises(InputError):
            thm31_harness(p, CertSpec(QLOGCM, max_order=3))
        rep = thm31_harness(p, CertSpec(QLOGCM, max_order=3), negative_control=True)
        assert isinstance(rep, CertReport)
        assert any("negative control" in n for n in rep.notes)


class TestThm32Harness:
    def test_single_pair(self):
        rp = RatioParams((1.0,), (2.0,))
        rep = thm32_harness(rp, Q5, CertSpec(QCM, max_order=5))
        assert rep.verdict is Verdict.CONSISTENT

    def test_equal_sequences_give_exact_ones(self):
        # a = b: the ratio collapses to 1 exactly, every order >= 1 is 0
        rp = RatioParams((1.0, 2.0), (1.0, 2.0))
        rep = thm32_harness(rp, Q5, CertSpec(QCM, max_order=5))
        assert rep.verdict is Verdict.CONSISTENT
        assert rep.min_margin == 0.0
        f = lambda x: g_ratio(x, rp, Q5)
        for n in range(1, 6):
            assert q_derive_n(f, 1.0, Q5, n) == 0.0

    def test_hypothesis_gate(self):
        rp = RatioParams((2.0,), (1.0,), allow_violations=True)
        with pytest.raises(InputError):
            thm32_harness(rp, Q5, CertSpec(QCM, max_order=3))
        rep = thm32_harness(rp, Q5, CertSpec(QCM, max_order=3), negative_control=True)
        assert any("negative control" in n for n in rep.notes)


class TestPsiPrimeCertification:
    def test_psi_prime_is_qcm_to_order_six(self):
        ctrl = SeriesControl(rel_term_tol=1e-16, max_terms=400_000)
        f = lambda x: q_psi_k(x, Q5, 1, ctrl)
        rep = certify(f, Q5, CertSpec(QCM, max_order=6), ctrl=ctrl)
        assert rep.verdict is Verdict.CONSISTENT
        assert len(rep.counterexamples) == 0
