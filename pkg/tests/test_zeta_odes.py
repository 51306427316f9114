"""Reduced-flow integration, closed forms, and along-trajectory identities.

1. Algebraic layer at the frozen phase point (1, 2) with (m, rho, lambda)
   = (2, 0, 1): Q = -5, X = 2.2, (zeta2', zeta3') = (-3.2, -7.6), R = -1.6,
   compatibility obstruction -4.032.
2. Vanishing-locus classification: generic points, each of the four loci,
   and the q_zero/pole interplay of the obstruction.
3. The obstruction equals d/ds[X] + 2 zeta3 X along the flow (jet check).
4. Integration: single-step consistency with the vector field, exact
   preservation of the zeta3 = 0 locus, and all four termination causes.
5. Closed forms: the three constant-h branches match the integrated flow at
   1e-6 (measured ~1e-13); halving the step shrinks the error 2^4-fold.
6. First-order system residuals vanish at arbitrary phase points;
   second-order (finite-differenced) residuals vanish on flow-invariant
   loci at the stencil's truncation floor and are order 1 off them.
7. Reconstruction: trajectories on the loci realize warped-product metrics
   with constant fiber curvature and small quasi-Einstein residual;
   generic trajectories raise InconsistentK.
8. Single-zeta (conformally flat) system: closed profiles satisfy all four
   equations, parameter detuning shifts residuals by (+d, +d, -d, 0).
9. CSV serialization with the frozen column set.
"""

import csv
import io
import math

import numpy as np
import numpy.testing as npt
import pytest

from qem.errors import (
    DomainError,
    EmptyDomain,
    InconsistentK,
    QSingular,
    ZeroDenominator,
)
from qem.jets import Jet, jet_space
from qem.qe_residual import QEParams, qe_residual
from qem.zeta_odes import (
    BLOWUP_LIMIT,
    BRANCH_LABELS,
    CSV_COLUMNS,
    Q,
    Q_MIN,
    X_of,
    ZetaState,
    branch_classify,
    closed_form_match,
    closed_form_zeta2,
    double_prime_residuals,
    f_prime_of,
    f_second_of,
    harmonic_branch_check,
    integrate,
    lcf_closed_profile,
    lcf_residuals,
    reconstruct_warped,
    scalar_curvature,
    scalar_curvature_prime,
    system_residuals,
    trajectory_to_csv,
    zeta_rhs,
)

P1 = QEParams(2.0, 0.0, 1.0)     # Lambda = 1/3
P3 = QEParams(2.0, 0.0, 3.0)     # Lambda = 1
PN = QEParams(2.0, 0.0, -3.0)    # Lambda = -1
P0 = QEParams(2.0, 0.0, 0.0)     # power-law locus parameters

GENERIC_POINTS = [
    (1.0, 2.0, P1),
    (0.3, -0.7, P1),
    (-1.5, 0.4, QEParams(3.0, -0.2, -0.7)),
    (0.8, 1.7, QEParams(-3.0, 0.0, 1.5)),
]


def cot_branch_start(lam_params, s0):
    big_l = lam_params.Lambda
    return ZetaState(s0, closed_form_zeta2("cot", big_l, s0), 0.0)


# ---------------------------------------------------------------------------
# 1. Frozen algebraic values
# ---------------------------------------------------------------------------

class TestAlgebraicLayer:
    def test_frozen_point(self):
        assert Q(1.0, 2.0, P1) == pytest.approx(-5.0, abs=0.0)
        assert X_of(1.0, 2.0, P1) == pytest.approx(2.2, abs=1e-15)
        npt.assert_allclose(zeta_rhs(1.0, 2.0, P1), (-3.2, -7.6), atol=1e-15)
        assert scalar_curvature(1.0, 2.0, P1) == pytest.approx(-1.6, abs=1e-14)
        assert harmonic_branch_check(1.0, 2.0, P1) == pytest.approx(-4.032,
                                                                    abs=1e-14)
        assert f_prime_of(1.0, 2.0, P1) == pytest.approx(2.8, abs=1e-14)

    def test_q_singular_guard(self):
        # (1, -3) solves zeta3 (m-1)(4rho-1) + zeta2 denom = 0 for P1
        assert Q(1.0, -3.0, P1) == 0.0
        for fun in (X_of, zeta_rhs, scalar_curvature, harmonic_branch_check):
            with pytest.raises(QSingular):
                fun(1.0, -3.0, P1)

    def test_f_prime_zeta2_floor(self):
        with pytest.raises(ZeroDenominator):
            f_prime_of(1e-9, 2.0, P1)

    def test_branch_values_on_zeta3_locus(self):
        """h-constant locus: R = 2 (m+2) Lambda and f' zeta2 = m Lambda."""
        big_l = P1.Lambda
        for z2 in (0.4, 1.0, -2.3):
            assert scalar_curvature(z2, 0.0, P1) == pytest.approx(
                2.0 * 4.0 * big_l, rel=1e-13)
            assert X_of(z2, 0.0, P1) == pytest.approx(-3.0 * big_l, rel=1e-13)
            assert f_prime_of(z2, 0.0, P1) * z2 == pytest.approx(
                2.0 * big_l, rel=1e-13)

    def test_analytic_flow_derivatives(self):
        """R' and f'' from jets agree with centered differences in s."""
        t = integrate(ZetaState(0.0, 1.0, 2.0), 0.02, 1e-5, P1)
        i = t.n // 2
        h = float(t.s[1] - t.s[0])
        rp_fd = (scalar_curvature(t.zeta2[i + 1], t.zeta3[i + 1], P1)
                 - scalar_curvature(t.zeta2[i - 1], t.zeta3[i - 1], P1)) / (2 * h)
        assert scalar_curvature_prime(t.zeta2[i], t.zeta3[i], P1) == (
            pytest.approx(rp_fd, rel=1e-7))
        fp_fd = (f_prime_of(t.zeta2[i + 1], t.zeta3[i + 1], P1)
                 - f_prime_of(t.zeta2[i - 1], t.zeta3[i - 1], P1)) / (2 * h)
        assert f_second_of(t.zeta2[i], t.zeta3[i], P1) == (
            pytest.approx(fp_fd, rel=1e-7))


# ---------------------------------------------------------------------------
# 2/3. Vanishing loci and the compatibility obstruction
# ---------------------------------------------------------------------------

class TestBranchClassification:
    def test_labels(self):
        assert BRANCH_LABELS == ("zeta3_zero", "product_locus",
                                 "quadratic_locus", "q_zero")

    def test_generic_point_values(self):
        tag = branch_classify(1.0, 2.0, P1)
        npt.assert_allclose(tag.values, (2.0, -7.0, 3.0, -5.0), atol=1e-14)
        assert tag.generic and tag.labels() == ()

    def test_each_locus_flags(self):
        assert branch_classify(0.7, 0.0, P1).labels() == ("zeta3_zero",)
        # product locus: -3 zeta2 zeta3 = lambda
        assert "product_locus" in branch_classify(1.0, -1.0 / 3.0, P1).labels()
        # quadratic locus: the power-law phase point at rho = lambda = 0
        assert "quadratic_locus" in branch_classify(1 / 9, 2 / 3, P0).labels()
        assert "q_zero" in branch_classify(1.0, -3.0, P1).labels()

    def test_obstruction_vanishes_on_loci(self):
        assert harmonic_branch_check(0.7, 0.0, P1) == pytest.approx(0.0,
                                                                    abs=1e-13)
        assert harmonic_branch_check(1.0, -1.0 / 3.0, P1) == pytest.approx(
            0.0, abs=1e-13)
        assert harmonic_branch_check(1 / 9, 2 / 3, P0) == pytest.approx(
            0.0, abs=1e-13)

    @pytest.mark.parametrize("z2,z3,params", GENERIC_POINTS)
    def test_obstruction_is_flow_derivative_of_x(self, z2, z3, params):
        """harmonic_branch_check == d/ds[X] + 2 zeta3 X, via order-3 jets."""
        z2j, z3j = Jet.seed_point(jet_space(2), (z2, z3))
        xj = X_of(z2j, z3j, params)
        xdot = float(np.asarray(xj.grad) @ np.array(zeta_rhs(z2, z3, params)))
        x = X_of(z2, z3, params)
        want = xdot + 2.0 * z3 * x
        got = harmonic_branch_check(z2, z3, params)
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


# ---------------------------------------------------------------------------
# 4. Integration mechanics
# ---------------------------------------------------------------------------

class TestIntegration:
    def test_step_guard(self):
        with pytest.raises(ValueError):
            integrate(ZetaState(0.0, 1.0, 2.0), 1.0, 0.0, P1)

    def test_zero_span(self):
        t = integrate(ZetaState(0.3, 1.0, 2.0), 0.3, 1e-3, P1)
        assert t.n == 1 and t.termination == "reached_end"

    def test_single_step_consistency(self):
        """One RK step stays within O(h^2) of the Euler prediction."""
        h = 1e-3
        t = integrate(ZetaState(0.0, 1.0, 2.0), h, h, P1)
        assert t.n == 2
        assert abs(t.zeta2[1] - (1.0 + h * (-3.2))) <= 20.0 * h * h
        assert abs(t.zeta3[1] - (2.0 + h * (-7.6))) <= 40.0 * h * h
        assert abs(t.log_p[1] - h * 1.0) <= 20.0 * h * h
        assert abs(t.log_h[1] - h * 2.0) <= 40.0 * h * h
        assert abs(t.f[1] - h * 2.8) <= 40.0 * h * h

    def test_zeta3_locus_is_exactly_invariant(self):
        t = integrate(cot_branch_start(P1, 0.4), 1.4, 1e-3, P1)
        assert t.termination == "reached_end"
        assert np.all(t.zeta3 == 0.0)
        assert np.all(t.log_h == 0.0)

    def test_uniform_step_rounding(self):
        """The span divides into round(span/step) equal pieces."""
        t = integrate(ZetaState(0.0, 1.0, 2.0), 0.0105, 1e-3, P1)
        assert t.n == 11  # 10 steps of 1.05e-3 each
        npt.assert_allclose(np.diff(t.s), 0.00105, rtol=1e-12)

    def test_termination_reached_end(self):
        t = integrate(ZetaState(0.0, 1.0, 2.0), 0.3, 1e-3, P1)
        assert t.termination == "reached_end" and t.n == 301
        assert t.s[-1] == pytest.approx(0.3, abs=1e-12)

    def test_termination_q_singular_at_start(self):
        t = integrate(ZetaState(0.0, 1.0, -3.0), 1.0, 1e-3, P1)
        assert t.termination == "Q_singular" and t.n == 1

    def test_termination_blowup(self):
        """zeta2' ~ -zeta2^2 from -10: pole at s = 0.1 inside the range."""
        t = integrate(ZetaState(0.0, -10.0, 0.0), 0.2, 1e-4, P1)
        assert t.termination == "blowup"
        assert float(t.s[-1]) < 0.2
        assert np.all(np.abs(t.zeta2) <= BLOWUP_LIMIT)

    def test_termination_branch_locus(self):
        """|zeta2| at the floor while Q stays regular stops the flow."""
        assert abs(Q(1e-9, 2.0, P1)) > 1.0
        t = integrate(ZetaState(0.0, 1e-9, 2.0), 1.0, 1e-3, P1)
        assert t.termination == "branch_locus" and t.n == 1

    def test_trajectory_accessors(self):
        t = integrate(ZetaState(0.0, 1.0, 2.0), 0.05, 1e-3, P1)
        npt.assert_allclose(t.p, np.exp(t.log_p), atol=0.0)
        npt.assert_allclose(t.h, np.exp(t.log_h), atol=0.0)
        assert t.q_values[0] == pytest.approx(-5.0, abs=0.0)
        npt.assert_allclose(t.k_nodes, -t.X * t.h ** 2, atol=0.0)
        st = t.state(3)
        assert (st.s, st.zeta2) == (float(t.s[3]), float(t.zeta2[3]))
        flags = t.branch_flags()
        assert flags.shape == (t.n, 4) and not flags.any()


# ---------------------------------------------------------------------------
# 5. Closed forms
# ---------------------------------------------------------------------------

class TestClosedForms:
    @pytest.mark.parametrize("case,big_l,s", [
        ("cot", 1.0, 0.7), ("tanh", -1.0, 0.7), ("coth", -1.0, 0.7),
        ("cot", 0.25, 1.3), ("tanh", -4.0, -0.4), ("coth", -0.81, 1.1),
    ])
    def test_profiles_solve_branch_equation(self, case, big_l, s):
        """zeta2' = -(zeta2^2 + Lambda) on the h-constant branch."""
        h = 1e-6
        z = closed_form_zeta2(case, big_l, s)
        zp_fd = (closed_form_zeta2(case, big_l, s + h)
                 - closed_form_zeta2(case, big_l, s - h)) / (2.0 * h)
        assert zp_fd == pytest.approx(-(z * z + big_l), rel=1e-8, abs=1e-8)

    @pytest.mark.parametrize("case,big_l", [
        ("cot", -1.0), ("tanh", 1.0), ("coth", 1.0)])
    def test_sign_guards(self, case, big_l):
        with pytest.raises(DomainError):
            closed_form_zeta2(case, big_l, 0.5)

    def test_pole_and_unknown_case(self):
        with pytest.raises(DomainError):
            closed_form_zeta2("cot", 1.0, 0.0)
        with pytest.raises(ValueError):
            closed_form_zeta2("sec", 1.0, 0.5)

    @pytest.mark.parametrize("case,params,s0,s_end,ceiling", [
        ("cot", P1, 0.4, 1.4, 1e-11),
        ("tanh", PN, -1.2, -0.2, 1e-12),
        ("coth", PN, 1.0, 2.0, 1e-12),
    ])
    def test_integrated_flow_matches(self, case, params, s0, s_end, ceiling):
        z0 = closed_form_zeta2(case, params.Lambda, s0)
        t = integrate(ZetaState(s0, z0, 0.0), s_end, 1e-3, params)
        assert t.termination == "reached_end"
        rep = closed_form_match(t, case)
        assert rep["pass"] and rep["tolerance"] == 1e-6
        assert rep["max_mismatch"] < ceiling
        assert rep["samples"] == t.n

    def test_match_rejects_wrong_case(self):
        t = integrate(cot_branch_start(P1, 0.4), 1.4, 1e-3, P1)
        with pytest.raises(DomainError):
            closed_form_match(t, "tanh")  # Lambda > 0 for these params

    def test_match_range_guards(self):
        z_in = 0.5  # inside (-1, 1): not a coth value of |a| = 1
        t = integrate(ZetaState(0.0, z_in, 0.0), 0.05, 1e-3, PN)
        with pytest.raises(DomainError):
            closed_form_match(t, "coth")
        z_out = 1.5
        t2 = integrate(ZetaState(0.0, z_out, 0.0), 0.05, 1e-3, PN)
        with pytest.raises(DomainError):
            closed_form_match(t2, "tanh")

    def test_match_needs_defined_lambda(self):
        degenerate = QEParams(0.5, 0.3, 1.0)
        t = integrate(ZetaState(0.0, 1.0, 2.0), 0.01, 1e-3, degenerate)
        with pytest.raises(DomainError):
            closed_form_match(t, "cot")

    def test_fourth_order_convergence(self):
        """Halving the step cuts the sup error by ~2^4 on a steep window."""
        errs = []
        for step in (2e-3, 1e-3):
            t = integrate(cot_branch_start(P3, 0.2), 0.9, step, P3)
            pred = np.array([closed_form_zeta2("cot", 1.0, float(s))
                             for s in t.s])
            errs.append(float(np.max(np.abs(t.zeta2 - pred))))
        ratio = errs[0] / errs[1]
        assert ratio == pytest.approx(16.0, rel=0.25)


# ---------------------------------------------------------------------------
# 6. System identities along trajectories
# ---------------------------------------------------------------------------

class TestSystemResiduals:
    @pytest.mark.parametrize("z2,z3,params", GENERIC_POINTS)
    def test_first_order_identities_everywhere(self, z2, z3, params):
        res = system_residuals(z2, z3, params)
        assert set(res) == {"r1ii1", "riccicurv", "lastone"}
        for name, value in res.items():
            assert abs(value) <= 1e-12 * (1.0 + abs(z2) + abs(z3)) * 10, (
                f"{name} residual {value} at ({z2}, {z3})")

    def test_double_prime_on_h_constant_locus(self):
        t = integrate(cot_branch_start(P3, 0.9), 2.2, 1e-3, P3)
        dd = double_prime_residuals(t)
        assert dd["double2"] <= 1e-5
        assert dd["double3"] <= 1e-12
        assert dd["stencil_nodes"] == t.n - 2

    def test_double_prime_on_power_law_locus(self):
        t = integrate(ZetaState(1.0, 1 / 9, 2 / 3), 3.0, 1e-3, P0)
        assert t.termination == "reached_end"
        dd = double_prime_residuals(t)
        assert dd["double2"] <= 1e-5 and dd["double3"] <= 1e-5

    def test_power_law_phase_is_exact(self):
        """On the locus, zeta2 = 1/(9s) and zeta3 = 2/(3s) for m = 2."""
        t = integrate(ZetaState(1.0, 1 / 9, 2 / 3), 3.0, 1e-3, P0)
        npt.assert_allclose(t.zeta2, 1.0 / (9.0 * t.s), atol=1e-14)
        npt.assert_allclose(t.zeta3, 2.0 / (3.0 * t.s), atol=1e-13)

    def test_double_prime_fails_off_loci(self):
        """Generic phase points admit no metric: the identities break O(1)."""
        t = integrate(ZetaState(0.0, 1.0, 2.0), 0.3, 1e-3, P1)
        dd = double_prime_residuals(t)
        assert dd["double2"] > 1e-1 and dd["double3"] > 1e-1

    def test_double_prime_needs_three_nodes(self):
        t = integrate(ZetaState(0.0, 1.0, 2.0), 1e-3, 1e-3, P1)
        with pytest.raises(DomainError):
            double_prime_residuals(t)


# ---------------------------------------------------------------------------
# 7. Reconstruction
# ---------------------------------------------------------------------------

class TestReconstruction:
    def test_h_constant_locus_roundtrip(self):
        t = integrate(cot_branch_start(P1, 0.9), 2.2, 2e-3, P1)
        metric, f_field, k = reconstruct_warped(t)
        assert k == pytest.approx(1.0, abs=1e-9)   # k = (m+1) Lambda h^2
        worst = 0.0
        for s_val in (1.1, 1.6, 2.1):
            pt = [s_val + 1.234e-3, 0.3, 1.0, 2.0]  # off the spline nodes
            res = qe_residual(metric, f_field, P1, pt)
            worst = max(worst, float(np.max(np.abs(res))))
        assert worst <= 1e-8, f"reconstructed qe residual {worst}"

    def test_power_law_locus_roundtrip(self):
        t = integrate(ZetaState(1.0, 1 / 9, 2 / 3), 3.0, 2e-3, P0)
        metric, f_field, k = reconstruct_warped(t)
        assert k == pytest.approx(0.0, abs=1e-12)
        pt = [2.0 + 1.234e-3, 0.3, 1.0, 2.0]
        res = qe_residual(metric, f_field, P0, pt)
        assert float(np.max(np.abs(res))) <= 1e-8

    def test_descending_range_is_flipped(self):
        z0 = closed_form_zeta2("tanh", -1.0, -0.2)
        t = integrate(ZetaState(-0.2, z0, 0.0), -1.2, 2e-3, PN)
        metric, f_field, k = reconstruct_warped(t)
        assert k == pytest.approx(-3.0, abs=1e-9)
        assert metric.admissible([-0.7, 0.3, 1.0, 2.0])

    def test_generic_trajectory_rejected(self):
        t = integrate(ZetaState(0.0, 1.0, 2.0), 0.1, 1e-3, P1)
        assert t.termination == "reached_end"
        with pytest.raises(InconsistentK):
            reconstruct_warped(t)

    def test_terminated_trajectory_rejected(self):
        t = integrate(ZetaState(0.0, -10.0, 0.0), 0.2, 1e-4, P1)
        assert t.termination == "blowup"
        with pytest.raises(DomainError):
            reconstruct_warped(t)

    def test_single_node_rejected(self):
        t = integrate(ZetaState(0.0, 1.0, -3.0), 1.0, 1e-3, P1)
        assert t.n == 1
        with pytest.raises(EmptyDomain):
            reconstruct_warped(t)


# ---------------------------------------------------------------------------
# 8. Single-zeta system
# ---------------------------------------------------------------------------

class TestSingleZetaSystem:
    def test_hand_oracle_at_quarter_period(self):
        d = lcf_closed_profile("sin", 1.0, 2.0, 0.0, math.pi / 4)
        assert d["zeta"] == pytest.approx(1.0, rel=1e-14)
        assert d["zeta_prime"] == pytest.approx(-2.0, rel=1e-14)
        assert d["zeta_second"] == pytest.approx(4.0, rel=1e-14)
        assert d["X"] == d["zeta_prime"]
        assert d["f_prime"] == pytest.approx(2.0, rel=1e-14)
        assert d["f_second"] == pytest.approx(4.0, rel=1e-14)
        assert d["R"] == 12.0 and d["R_prime"] == 0.0
        assert d["lam"] == pytest.approx(5.0, rel=1e-14)

    @pytest.mark.parametrize("case,kappa", [
        ("sin", 1.0), ("sin", 0.49), ("cosh", -1.0), ("cosh", -0.36),
        ("sinh", -1.0), ("sinh", -2.25),
    ])
    @pytest.mark.parametrize("m,rho", [(2.0, 0.0), (3.0, -0.1), (5.0, 0.05)])
    def test_profiles_satisfy_all_equations(self, case, kappa, m, rho):
        s = 0.8 if case != "sin" else min(0.8, 0.6 / math.sqrt(abs(kappa)))
        d = lcf_closed_profile(case, kappa, m, rho, s)
        res = lcf_residuals(d["zeta"], d["zeta_prime"], d["X"], d["f_prime"],
                            d["f_second"], d["R"], d["R_prime"], d["params"],
                            zeta_second=d["zeta_second"])
        npt.assert_allclose(res, 0.0, atol=1e-11,
                            err_msg=f"{case} profile at kappa={kappa}")

    def test_fourth_residual_optional(self):
        d = lcf_closed_profile("cosh", -1.0, 2.0, 0.0, 0.8)
        res = lcf_residuals(d["zeta"], d["zeta_prime"], d["X"], d["f_prime"],
                            d["f_second"], d["R"], d["R_prime"], d["params"])
        assert res[3] is None
        npt.assert_allclose(res[:3], 0.0, atol=1e-12)

    def test_lambda_detuning_signature(self):
        """lambda -> lambda + d moves the residuals by (+d, +d, -d, 0)."""
        d = lcf_closed_profile("sin", 1.0, 2.0, 0.0, 0.6)
        delta = 1e-3
        wrong = QEParams(2.0, 0.0, d["lam"] + delta)
        res = lcf_residuals(d["zeta"], d["zeta_prime"], d["X"], d["f_prime"],
                            d["f_second"], d["R"], d["R_prime"], wrong,
                            zeta_second=d["zeta_second"])
        npt.assert_allclose(res, (delta, delta, -delta, 0.0), atol=1e-12)

    def test_zero_denominator_guard(self):
        with pytest.raises(ZeroDenominator):
            lcf_residuals(1.0, -2.0, -2.0, 0.0, 4.0, 12.0, 1.0, P1,
                          zeta_second=4.0)

    def test_critical_profile_points(self):
        with pytest.raises(ZeroDenominator):
            lcf_closed_profile("sin", 1.0, 2.0, 0.0, math.pi / 2)
        with pytest.raises(DomainError):
            lcf_closed_profile("sin", 1.0, 2.0, 0.0, math.pi)
        with pytest.raises(DomainError):
            lcf_closed_profile("sin", -1.0, 2.0, 0.0, 0.5)
        with pytest.raises(DomainError):
            lcf_closed_profile("cosh", 1.0, 2.0, 0.0, 0.5)
        with pytest.raises(DomainError):
            lcf_closed_profile("sinh", 1.0, 2.0, 0.0, 0.5)
        with pytest.raises(ValueError):
            lcf_closed_profile("tan", 1.0, 2.0, 0.0, 0.5)


# ---------------------------------------------------------------------------
# 9. CSV serialization
# ---------------------------------------------------------------------------

class TestCSV:
    def test_columns_and_values(self, tmp_path):
        t = integrate(ZetaState(0.0, 1.0, 2.0), 0.01, 1e-3, P1)
        dest = tmp_path / "flow.csv"
        trajectory_to_csv(t, str(dest))
        with open(dest, newline="") as fh:
            rows = list(csv.reader(fh))
        assert tuple(rows[0]) == CSV_COLUMNS
        assert len(rows) == t.n + 1
        first = dict(zip(CSV_COLUMNS, rows[1]))
        assert float(first["s"]) == 0.0
        assert float(first["zeta2"]) == 1.0
        assert float(first["Q"]) == -5.0
        assert float(first["X"]) == pytest.approx(2.2, abs=1e-15)
        assert [first[f"branch{i}"] for i in range(1, 5)] == ["0"] * 4
        # round-trip precision: repr of float
        assert float(rows[2][1]) == t.zeta2[1]

    def test_branch_flags_marked_on_locus(self):
        t = integrate(cot_branch_start(P1, 0.4), 0.41, 1e-3, P1)
        buf = io.StringIO()
        trajectory_to_csv(t, buf)
        rows = list(csv.reader(io.StringIO(buf.getvalue())))
        assert rows[1][CSV_COLUMNS.index("branch1")] == "1"
