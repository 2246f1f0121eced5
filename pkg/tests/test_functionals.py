import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardylab import corpus as C
from hardylab.constants import CaseParams, ValidityError, hardy_constant
from hardylab.functionals import (REGISTRY, Integrator, InequalityCase,
                                  evaluate_case, hyperbolic_weight_constant,
                                  identity_residual, quantitative_case,
                                  remainder_rp, remainder_rp_integral_form,
                                  sharpness_sweep)
from hardylab.corpus import ExtremizerFamily
from hardylab.jets import ContractError

PI_SQ = math.pi ** 2


class TestRemainderRp:
    def test_equality_case(self):
        for xi in (-2.0, 0.0, 0.7, 5.0):
            assert remainder_rp(xi, xi, 2.7) == pytest.approx(
                0.0, abs=1e-14 * (1.0 + abs(xi) ** 2.7))

    def test_p2_closed_form(self):
        assert remainder_rp(1.0, 3.0, 2.0) == pytest.approx(2.0, abs=0)

    def test_p3_half_case(self):
        assert remainder_rp(1.0, 0.0, 3.0) == pytest.approx(2.0 / 3.0, rel=1e-15)

    @given(st.floats(-20, 20), st.floats(-20, 20),
           st.floats(min_value=1.05, max_value=5.0))
    @settings(max_examples=300, deadline=None)
    def test_nonnegative(self, xi, eta, p):
        assert remainder_rp(xi, eta, p) >= -1e-12 * (abs(xi) ** p + abs(eta) ** p + 1)

    def test_integral_form_matches(self):
        assert remainder_rp_integral_form(1.0, 3.0, 2.0) == pytest.approx(2.0, rel=1e-12)
        assert remainder_rp_integral_form(1.0, 0.0, 3.0) == pytest.approx(
            2.0 / 3.0, rel=1e-10)
        assert remainder_rp_integral_form(2.0, -1.0, 2.5) == pytest.approx(
            remainder_rp(2.0, -1.0, 2.5), rel=1e-9)


class TestEvaluateCase:
    def test_worked_example(self, itg):
        f = C.polynomial_bump(1.0, 2)
        rep = evaluate_case("HARDY_SUB", CaseParams(3, 2.0, 0.0, 0.0), f, integrator=itg)
        assert rep.lhs == pytest.approx(128.0 / 315.0, abs=1e-11)
        assert rep.rhs == pytest.approx(128.0 / 315.0, abs=1e-11)
        assert rep.constant == 4.0
        assert rep.slack == pytest.approx(3.0 * 128.0 / 315.0, abs=1e-10)
        # b = 0 kills the density term; the R_p term carries the full slack
        terms = dict(rep.remainder_terms)
        assert terms["density_term"] == 0.0
        assert terms["rp_term"] == pytest.approx(rep.slack, rel=1e-10)
        assert abs(rep.identity_residual) < 1e-12

    def test_inequality_case_object(self, itg, bump4):
        case = InequalityCase("HARDY_SUB", CaseParams(4, 2.0, 0.0, 1.0))
        rep = evaluate_case(case, f=bump4, integrator=itg)
        assert rep.status == "pass"

    def test_critical_extremizer_example(self, itg):
        prm = CaseParams(3, 2.0, 1.0, 0.0)
        f = C.critical_extremizer(prm, 0.2)
        rep = evaluate_case("CRIT_HARDY", prm, f, integrator=itg)
        scale = max(abs(rep.lhs), abs(rep.constant * rep.rhs))
        assert rep.slack >= 0.0
        assert abs(rep.identity_residual) <= 1e-10 * scale

    def test_rellich2_orientation(self, itg, bump4):
        rep = evaluate_case("RELLICH_2", CaseParams(5, 2.0, 0.0, 0.0), bump4,
                            integrator=itg)
        assert rep.constant == pytest.approx(16.0 / 25.0, rel=1e-15)
        assert rep.slack >= 0.0

    def test_validity_gate(self, itg, bump4):
        with pytest.raises(ValidityError):
            evaluate_case("HARDY_SUB", CaseParams(4, 2.0, 2.0, 0.0), bump4,
                          integrator=itg)

    def test_smoothness_gate(self, itg):
        rough = C.polynomial_bump(1.0, 2)
        with pytest.raises(ContractError):
            evaluate_case("RELLICH_2", CaseParams(5, 2.0, 0.0, 0.0), rough,
                          integrator=itg)

    def test_critical_support_gate(self, itg):
        wide = C.polynomial_bump(1.5, 4)
        with pytest.raises(ValidityError):
            evaluate_case("CRIT_HARDY", CaseParams(3, 2.0, 1.0, 0.0), wide,
                          integrator=itg)

    def test_zero_function_passes(self, itg):
        z = C.zero_function(1.0)
        rep = evaluate_case("HARDY_SUB", CaseParams(3, 2.0, 0.0, 1.0), z, integrator=itg)
        assert rep.status == "pass"
        assert rep.lhs == 0.0 and rep.rhs == 0.0 and rep.slack == 0.0
        assert rep.identity_residual == 0.0

    def test_perturbed_constant_fails_identity(self, itg, bump4):
        rep = evaluate_case("HARDY_SUB", CaseParams(3, 2.0, 0.0, 0.0), bump4,
                            integrator=Integrator(), constant_perturbation=1e-3)
        assert rep.status == "fail"

    def test_numerical_failure_status(self, bump4):
        from hardylab.quadrature import QuadratureError, QuadratureResult

        class Exploding(Integrator):
            def power(self, *args, **kwargs):
                raise QuadratureError("forced", QuadratureResult(0.0, 1.0, 0, False))

        rep = evaluate_case("HARDY_SUB", CaseParams(3, 2.0, 0.0, 0.0), bump4,
                            integrator=Exploding())
        assert rep.status.startswith("numerical-failure")
        assert math.isnan(rep.slack)

    def test_rellich2_quant_flags_rather_than_fails(self, bump4):
        # a negative-slack outcome for this one composed-constant case is
        # flagged as suspect instead of failing the run
        rep = evaluate_case("RELLICH_2_QUANT", CaseParams(5, 2.0, 0.0, 1.0), bump4,
                            integrator=Integrator(), constant_perturbation=50.0)
        assert rep.slack < 0
        assert rep.status == "printed-constant-suspect"


class TestIdentityResidual:
    def test_onetwo_flat_density_term_vanishes(self, itg, bump4):
        rep = evaluate_case("ONETWO", CaseParams(3, 2.0, 0.0, 0.0), bump4,
                            integrator=itg)
        terms = dict(rep.remainder_terms)
        assert terms["density_term"] == 0.0
        scale = max(abs(rep.lhs), abs(rep.constant * rep.rhs))
        assert abs(rep.identity_residual) <= 1e-12 * scale

    def test_hardy_curved_both_remainders_positive(self, itg, bump4):
        rep = evaluate_case("HARDY_SUB", CaseParams(4, 2.0, 0.0, 1.0), bump4,
                            integrator=itg)
        terms = dict(rep.remainder_terms)
        assert terms["density_term"] > 0.0
        assert terms["rp_term"] > 0.0
        scale = max(abs(rep.lhs), abs(rep.constant * rep.rhs))
        assert abs(rep.identity_residual) <= 1e-12 * scale

    def test_zero_function(self, itg):
        assert identity_residual("ONETWO", CaseParams(3, 2.0, 0.0, 1.0),
                                 C.zero_function(), integrator=itg) == 0.0

    def test_only_identity_cases(self, itg, bump4):
        with pytest.raises(KeyError):
            identity_residual("RELLICH_2", CaseParams(5, 2.0, 0.0, 0.0), bump4,
                              integrator=itg)


class TestQuantitativeCases:
    def test_flat_reduces_to_base(self, itg, bump4):
        # b = 0: improvement terms vanish and the report matches the base case
        quant = quantitative_case("HARDY_QUANT_PI", CaseParams(4, 2.0, 0.0, 0.0),
                                  bump4, integrator=itg)
        terms = dict(quant.remainder_terms)
        assert terms["improvement_pi"] == 0.0
        base = evaluate_case("HARDY_SUB", CaseParams(4, 2.0, 0.0, 0.0), bump4,
                             integrator=itg)
        # base orientation: lhs <= C rhs; quant orientation folds A = 1/C left
        assert quant.slack == pytest.approx(base.slack / base.constant, rel=1e-12)

    def test_hardy_quant_pi_positive(self, itg, bump4):
        rep = quantitative_case("HARDY_QUANT_PI", CaseParams(4, 2.0, 0.0, 1.0),
                                bump4, integrator=itg)
        assert rep.status == "pass" and rep.slack >= 0.0

    def test_rellich12_quant_positive(self, itg, bump4):
        rep = quantitative_case("RELLICH_12_QUANT", CaseParams(5, 2.0, 1.0, 1.0),
                                bump4, integrator=itg)
        assert rep.status == "pass" and rep.slack >= 0.0

    def test_improvement_monotone_in_b(self, itg, bump4):
        imps = []
        for b in (0.0, 0.5, 1.0):
            rep = quantitative_case("HARDY_QUANT_PI", CaseParams(4, 2.0, 0.0, b),
                                    bump4, integrator=itg)
            imps.append(dict(rep.remainder_terms)["improvement_pi"])
        assert imps[0] <= imps[1] <= imps[2]
        assert imps[2] > 0.0

    def test_remainder_nonnegativity(self, itg, acceptance_corpus):
        for f in acceptance_corpus:
            for cid, prm in (("HARDY_QUANT_D", CaseParams(5, 2.0, 1.0, 1.0)),
                             ("ONETWO_QUANT", CaseParams(4, 1.5, 0.0, 1.0)),
                             ("CRIT_QUANT_D", CaseParams(3, 2.0, 1.0, 1.0)),
                             ("CRIT_QUANT_PI", CaseParams(5, 3.0, 2.0, 1.0))):
                rep = evaluate_case(cid, prm, f, integrator=itg)
                for name, val in rep.remainder_terms:
                    assert val >= -rep.quad_error_budget, (cid, name)

    def test_not_quantitative_rejected(self, itg, bump4):
        with pytest.raises(KeyError):
            quantitative_case("HARDY_SUB", CaseParams(3, 2.0, 0.0, 0.0), bump4,
                              integrator=itg)


class TestOffGridRobustness:
    # parameter corners the acceptance grid does not reach
    def test_strong_curvature_identities(self, itg, bump4, cutoff_half):
        for cid, prm, f in (
            ("HARDY_SUB", CaseParams(4, 2.0, 0.0, 4.0), bump4),
            ("ONETWO", CaseParams(3, 2.0, 0.0, 4.0), cutoff_half),
            ("CRIT_HARDY", CaseParams(5, 2.0, 3.0, 4.0), bump4),
        ):
            rep = evaluate_case(cid, prm, f, integrator=itg)
            scale = max(abs(rep.lhs), abs(rep.constant * rep.rhs))
            assert rep.status == "pass"
            assert abs(rep.identity_residual) <= 1e-10 * scale

    def test_exponent_extremes(self, itg, bump4):
        for prm in (CaseParams(4, 1.1, 0.0, 1.0), CaseParams(8, 6.0, 0.0, 1.0)):
            rep = evaluate_case("HARDY_SUB", prm, bump4, integrator=itg)
            scale = max(abs(rep.lhs), abs(rep.constant * rep.rhs))
            assert rep.status == "pass"
            assert abs(rep.identity_residual) <= 1e-10 * scale

    def test_high_order_cases(self, itg):
        from hardylab import corpus as CC
        rep = evaluate_case("RELLICH_EVEN", CaseParams(13, 2.0, 0.0, 1.0, l=3),
                            CC.polynomial_bump(1.0, 8), integrator=itg)
        assert rep.status == "pass" and rep.slack > 0
        rep = evaluate_case("CRIT_ODD", CaseParams(13, 1.5, 0.0, 1.0, l=3),
                            CC.polynomial_bump(1.0, 9), integrator=itg)
        assert rep.status == "pass" and rep.slack > 0


class TestMeasureBookkeeping:
    def test_hyperbolic_ball_volume(self):
        # n = 3, b = 1: radial measure weight is sinh^2, with closed antiderivative
        from hardylab.geometry import ModelManifold, measure_weight
        from hardylab.quadrature import integrate
        m = ModelManifold(3, 1.0)
        for R in (0.5, 1.0, 2.0):
            val = integrate(lambda r: measure_weight(m, r), 0.0, R).value
            exact = math.sinh(2 * R) / 4.0 - R / 2.0
            assert val == pytest.approx(exact, rel=1e-11)

    def test_lebesgue_radial_weight(self):
        # the dx reduction r^(n-1)(1-r^2)/2 drho integrates to r(R)^n / n
        from hardylab.functionals import _leb_factor
        from hardylab.quadrature import integrate
        for n in (3, 5, 8):
            for R in (0.7, 1.5):
                val = integrate(lambda rho: _leb_factor(n, rho) * rho ** (n - 1),
                                0.0, R).value
                exact = math.tanh(R / 2.0) ** n / n
                assert val == pytest.approx(exact, rel=1e-11)


class TestQuantDTiedToIdentity:
    # dropping only the R_p term in the exact identities gives the D-form
    # improvements, so their slack must equal the (rescaled) R_p integral
    def test_hardy_quant_d_slack_is_rp_term(self, itg, acceptance_corpus):
        for f in acceptance_corpus:
            for prm in (CaseParams(4, 2.0, 0.0, 1.0), CaseParams(5, 1.5, 1.0, 1.0),
                        CaseParams(8, 3.0, -1.0, 1.0)):
                quant = evaluate_case("HARDY_QUANT_D", prm, f, integrator=itg)
                base = evaluate_case("HARDY_SUB", prm, f, integrator=itg)
                rp = dict(base.remainder_terms)["rp_term"]
                A = ((prm.n - prm.p - prm.beta) / prm.p) ** prm.p
                budget = quant.quad_error_budget + A * base.quad_error_budget
                assert quant.slack == pytest.approx(A * rp, abs=20 * budget + 1e-12)

    def test_crit_quant_d_slack_is_rp_term(self, itg, acceptance_corpus):
        for f in acceptance_corpus:
            for prm in (CaseParams(4, 2.0, 2.0, 1.0), CaseParams(3, 1.5, 1.5, 1.0)):
                quant = evaluate_case("CRIT_QUANT_D", prm, f, integrator=itg)
                base = evaluate_case("CRIT_HARDY", prm, f, integrator=itg)
                rp = dict(base.remainder_terms)["rp_term"]
                A = ((prm.p - 1.0) / prm.p) ** prm.p
                budget = quant.quad_error_budget + A * base.quad_error_budget
                assert quant.slack == pytest.approx(A * rp, abs=20 * budget + 1e-12)


class TestChainConsistency:
    def test_rellich2_decomposes(self, itg, acceptance_corpus):
        # slack_R2 = (p/(n-2p-beta))^p * slack_R12(beta) + slack_Hardy(beta+p)
        for f in acceptance_corpus:
            for n, p, beta, b in ((5, 2.0, 0.0, 0.0), (5, 2.0, 0.0, 1.0),
                                  (8, 3.0, 1.0, 1.0), (6, 1.5, -1.0, 1.0)):
                r2 = evaluate_case("RELLICH_2", CaseParams(n, p, beta, b), f,
                                   integrator=itg)
                r12 = evaluate_case("RELLICH_12", CaseParams(n, p, beta, b), f,
                                    integrator=itg)
                hardy = evaluate_case("HARDY_SUB", CaseParams(n, p, beta + p, b), f,
                                      integrator=itg)
                h = hardy_constant(n, p, beta + p)
                combined = h * r12.slack + hardy.slack
                budget = (r2.quad_error_budget + h * r12.quad_error_budget
                          + hardy.quad_error_budget)
                assert r2.slack == pytest.approx(combined, abs=10 * budget + 1e-12)


class TestHyperbolicWeightConstant:
    def test_bounds(self):
        for n in range(3, 9):
            c = hyperbolic_weight_constant(n)
            assert 0.0 < c <= 1.0 / PI_SQ + 1e-16

    def test_monotone_pair(self):
        assert hyperbolic_weight_constant(3) <= hyperbolic_weight_constant(4) + 1e-15

    def test_admissible_on_grid(self):
        # the returned constant never exceeds the ratio anywhere
        for n in (3, 5, 8):
            c = hyperbolic_weight_constant(n)
            rho = np.geomspace(1e-6, 50.0, 20000)
            ratio = np.cosh(rho / 2.0) ** (2 * n) / (PI_SQ + rho * rho)
            assert np.all(ratio >= c - 1e-15)


class TestAq:
    def test_slack_nonnegative_on_corpus(self, itg, acceptance_corpus):
        for f in acceptance_corpus:
            for n, beta in ((8, 1.0), (6, 0.0), (7, -1.0)):
                rep = evaluate_case("AQ", CaseParams(n, 2.0, beta, 1.0), f,
                                    integrator=itg)
                assert rep.status == "pass" and rep.slack >= 0.0


class TestSharpnessSweep:
    def test_hardy_gap_monotone(self, itg):
        fam = ExtremizerFamily("hardy", CaseParams(4, 2.0, 0.0, 0.0))
        rows = sharpness_sweep(fam, [1e-2, 1e-4, 1e-6], integrator=itg)
        gaps = [r.gap for r in rows]
        assert all(g > 0 for g in gaps)
        assert gaps[0] > gaps[1] > gaps[2]

    def test_critical_limit(self, itg):
        fam = ExtremizerFamily("critical", CaseParams(3, 2.0, 1.0, 0.0))
        rows = sharpness_sweep(fam, [0.2, 0.1, 0.05], integrator=itg)
        qs = [r.quotient for r in rows]
        assert qs[0] > qs[1] > qs[2] > 0.25

    def test_b1_same_limit_trend(self, itg):
        fam0 = ExtremizerFamily("hardy", CaseParams(4, 2.0, 0.0, 0.0))
        fam1 = ExtremizerFamily("hardy", CaseParams(4, 2.0, 0.0, 1.0))
        r0 = sharpness_sweep(fam0, [1e-4, 1e-6], integrator=itg)
        r1 = sharpness_sweep(fam1, [1e-4, 1e-6], integrator=itg)
        # same sharp constant, both gaps positive and shrinking
        assert r1[1].gap < r1[0].gap
        assert abs(r0[1].quotient - r1[1].quotient) < r0[0].gap + r1[0].gap


class TestRegistryCoverage:
    def test_all_cases_evaluate_somewhere(self, itg, bump6):
        # every registry entry has at least one valid parameter cell
        cells = {
            "HARDY_SUB": CaseParams(4, 2.0, 0.0, 1.0),
            "HARDY_QUANT_D": CaseParams(4, 2.0, 0.0, 1.0),
            "HARDY_QUANT_PI": CaseParams(4, 2.0, 0.0, 1.0),
            "CRIT_HARDY": CaseParams(4, 2.0, 2.0, 1.0),
            "CRIT_QUANT_D": CaseParams(4, 2.0, 2.0, 1.0),
            "CRIT_QUANT_PI": CaseParams(4, 2.0, 2.0, 1.0),
            "CRIT_N": CaseParams(3, 3.0, 0.0, 1.0),
            "ONETWO": CaseParams(4, 2.0, 0.0, 1.0),
            "ONETWO_QUANT": CaseParams(4, 2.0, 0.0, 1.0),
            "RELLICH_12": CaseParams(4, 2.0, 0.0, 1.0),
            "RELLICH_12_QUANT": CaseParams(4, 2.0, 0.0, 1.0),
            "RELLICH_2": CaseParams(5, 2.0, 0.0, 1.0),
            "RELLICH_2_QUANT": CaseParams(5, 2.0, 0.0, 1.0),
            "CRIT_RELLICH_2": CaseParams(5, 2.0, 1.0, 1.0),
            "CRIT_RELLICH_2_QUANT": CaseParams(5, 2.0, 1.0, 1.0),
            "RELLICH_EVEN": CaseParams(8, 1.5, 0.0, 1.0, l=2),
            "RELLICH_EVEN_QUANT": CaseParams(8, 1.5, 0.0, 1.0, l=2),
            "RELLICH_ODD": CaseParams(8, 2.0, 0.0, 1.0, l=1),
            "RELLICH_ODD_QUANT": CaseParams(8, 2.0, 0.0, 1.0, l=1),
            "CRIT_EVEN": CaseParams(8, 1.5, 2.0, 1.0, l=2),
            "CRIT_EVEN_QUANT": CaseParams(8, 1.5, 2.0, 1.0, l=2),
            "CRIT_ODD": CaseParams(8, 2.0, 2.0, 1.0, l=1),
            "CRIT_ODD_QUANT": CaseParams(8, 2.0, 2.0, 1.0, l=1),
            "HYP_HARDY": CaseParams(4, 2.0, 0.0, 1.0),
            "HYP_CRIT": CaseParams(4, 2.0, 2.0, 1.0),
            "KO_RELLICH": CaseParams(8, 2.0, 1.0, 1.0),
            "HYP_IMPROVE": CaseParams(8, 2.0, 1.0, 1.0),
            "AQ": CaseParams(8, 2.0, 1.0, 1.0),
            "HYP_IMPROVE_SAO": CaseParams(8, 2.0, 1.0, 1.0),
            "HYP_IMPROVED_R": CaseParams(8, 2.0, 1.0, 1.0),
            "HYP_HIGH_EVEN": CaseParams(8, 2.0, 1.0, 1.0, l=1),
            "HYP_HIGH_ODD": CaseParams(8, 2.0, 1.0, 1.0, l=1),
        }
        assert set(cells) == set(REGISTRY)
        for cid, prm in cells.items():
            rep = evaluate_case(cid, prm, bump6, integrator=itg)
            assert rep.status == "pass", (cid, rep.slack, rep.status)
