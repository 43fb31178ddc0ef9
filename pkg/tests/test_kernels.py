import mpmath as mp
import numpy as np
import pytest

from frbf.errors import (
    DomainError,
    NoNegativeTermError,
    RestrictionError,
    SingularSystemError,
)
from frbf.kernels import (
    FALSE_TPS,
    FAMILIES,
    FOUR_TERM,
    THREE_TERM_TPS,
    TWO_TERM,
    KernelSpec,
    MonomialSum,
    condition_matrix,
    cpd_order,
    default_c0,
    evaluate,
    family_conditions,
    fractionalize,
    make_kernel,
    perturb,
    solve_coefficients,
    sweep_cpd_order,
    validate_restrictions,
)
from frbf.specfun import MonomialTerm

mp.mp.dps = 40


def random_spec_draws(count, seed=0):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        N = float(rng.uniform(2.05, 7.95))
        if abs(N - round(N)) < 0.02:
            N += 0.03
        b = float(rng.uniform(0.5, 2.0))
        c0 = float(rng.choice([1.0, 4.0, 18.0]))
        yield N, b, c0


class TestSolveCoefficients:
    @pytest.mark.parametrize("N,b", [(3.22, 0.7), (2.55, 1.48), (6.1, 1.0)])
    def test_two_term_closed_form(self, N, b):
        a = solve_coefficients([N + 1, N], [0, 1], [0.0, 1.0], b)
        assert a[0] == pytest.approx(b**-N, rel=1e-12)
        assert a[1] == pytest.approx(-(b ** (1 - N)), rel=1e-12)

    def test_false_tps_c0_4(self):
        N = 3.22
        a = solve_coefficients([N + 2, N + 1, N], [0, 1, 2], [0.0, 0.0, -4.0], 1.0)
        assert a == pytest.approx([-2.0, 4.0, -2.0], rel=1e-12)

    def test_four_term_c0_18(self):
        N = 2.55
        a = solve_coefficients(
            [N + 3, N + 2, N + 1, N], [0, 1, 2, 3], [0.0, 0.0, 0.0, 18.0], 1.0
        )
        assert a == pytest.approx([3.0, -9.0, 9.0, -3.0], rel=1e-12)

    def test_repeated_powers_rejected(self):
        with pytest.raises(SingularSystemError):
            solve_coefficients([3.2, 3.2], [0, 1], [0.0, 1.0], 1.0)

    def test_zero_scale_rejected(self):
        with pytest.raises(SingularSystemError):
            solve_coefficients([4.2, 3.2], [0, 1], [0.0, 1.0], 0.0)

    def test_length_mismatch(self):
        with pytest.raises(DomainError):
            solve_coefficients([4.2, 3.2], [0, 1, 2], [0.0, 1.0], 1.0)


class TestClosedFormsAgainstSolver:
    def test_all_families_random_draws(self):
        for N, b, c0 in random_spec_draws(50, seed=1):
            for family in FAMILIES:
                spec = KernelSpec(
                    family, N, 0.0, b,
                    None if family == THREE_TERM_TPS else c0, frac_mode="none",
                )
                powers, orders, rhs = family_conditions(spec)
                solved = solve_coefficients(powers, orders, rhs, b)
                closed = make_kernel(spec).coefficients
                assert np.max(np.abs(solved - closed) / np.abs(solved)) < 1e-10


class TestDeterminantIdentities:
    def test_identities(self):
        rng = np.random.default_rng(2)
        for _ in range(60):
            N = float(rng.uniform(2.0, 7.0))
            b = float(rng.uniform(0.5, 2.0))
            cases = {
                TWO_TERM: -(b ** (2 * N)),
                FALSE_TPS: -2.0 * b ** (3 * N),
                FOUR_TERM: 12.0 * b ** (4 * N),
            }
            for family, want in cases.items():
                spec = KernelSpec(family, N, 0.0, b, frac_mode="none")
                powers, orders, _ = family_conditions(spec)
                det = np.linalg.det(condition_matrix(powers, orders, b))
                assert det == pytest.approx(want, rel=1e-9)


class TestMakeKernel:
    def test_false_tps_generic(self):
        N, b, c0 = 3.22, 1.3, 4.0
        k = make_kernel(KernelSpec(FALSE_TPS, N, 0.0, b, c0, frac_mode="none"))
        assert list(k.powers) == pytest.approx([N + 2, N + 1, N])
        assert list(k.coefficients) == pytest.approx(
            [-c0 / 2 * b**-N, c0 * b ** (1 - N), -c0 / 2 * b ** (2 - N)], rel=1e-12
        )

    def test_three_term_unit_scale(self):
        k = make_kernel(KernelSpec(THREE_TERM_TPS, 3.22, 0.0, 1.0, frac_mode="none"))
        assert list(k.coefficients) == pytest.approx([-0.5, 2.0, -1.5], rel=1e-12)

    def test_two_term_unit_scale(self):
        k = make_kernel(KernelSpec(TWO_TERM, 4.31, 0.0, 1.0, 1.0, frac_mode="none"))
        assert list(k.coefficients) == pytest.approx([1.0, -1.0])
        assert list(k.powers) == pytest.approx([5.31, 4.31])

    def test_integer_N_rejected(self):
        with pytest.raises(RestrictionError):
            make_kernel(KernelSpec(FALSE_TPS, 3.0, 0.0, 1.0))

    def test_alpha_outside_mode_range_rejected_at_build(self):
        spec = KernelSpec(FALSE_TPS, 3.55, 2.0, 1.0, frac_mode="full_fractional")
        with pytest.raises(DomainError):
            make_kernel(spec)

    def test_boundary_conditions_by_construction(self):
        for N, b, c0 in random_spec_draws(10, seed=3):
            for family in FAMILIES:
                spec = KernelSpec(
                    family, N, 0.0, b,
                    None if family == THREE_TERM_TPS else c0, frac_mode="none",
                )
                k = make_kernel(spec)
                _, orders, rhs = family_conditions(spec)
                for order, want in zip(orders, rhs):
                    got = k.derivative(order).evaluate(b)
                    assert got == pytest.approx(want, abs=1e-8 * max(1.0, abs(want)))

    def test_tps_proximity_three_term_beats_two_term(self):
        r = np.linspace(0.05, 1.0, 400)
        for N in (2.01, 4.01, 6.01):
            tps = r**N * np.log(r)
            two = make_kernel(KernelSpec(TWO_TERM, N, 0.0, 1.0, 1.0, frac_mode="none"))
            three = make_kernel(KernelSpec(THREE_TERM_TPS, N, 0.0, 1.0, frac_mode="none"))
            err_two = np.max(np.abs(two.evaluate(r) - tps))
            err_three = np.max(np.abs(three.evaluate(r) - tps))
            assert err_three < err_two

    def test_scale_covariance(self):
        rho = np.linspace(0.05, 0.95, 40)
        b = 1.7
        k1 = make_kernel(KernelSpec(TWO_TERM, 3.22, 0.0, 1.0, 1.0, frac_mode="none"))
        kb = make_kernel(KernelSpec(TWO_TERM, 3.22, 0.0, b, 1.0, frac_mode="none"))
        assert kb.evaluate(b * rho) == pytest.approx(b * k1.evaluate(rho), rel=1e-12)
        for family in (FALSE_TPS, FOUR_TERM):
            k1 = make_kernel(KernelSpec(family, 3.22, 0.0, 1.0, frac_mode="none"))
            kb = make_kernel(KernelSpec(family, 3.22, 0.0, b, frac_mode="none"))
            ratio = kb.evaluate(b * rho) / k1.evaluate(rho)
            assert np.ptp(ratio) < 1e-9 * np.abs(ratio[0])


class TestDefaultC0:
    def test_concrete_values(self):
        assert default_c0(FALSE_TPS) == 4.0
        assert default_c0(FOUR_TERM) == 18.0
        assert default_c0(TWO_TERM) == 1.0

    def test_no_default_for_three_term(self):
        with pytest.raises(DomainError):
            default_c0(THREE_TERM_TPS)

    def test_sign_rule_gives_tps_like_bowl(self):
        # the chosen sign keeps the kernel non-positive on (0,1) with a
        # convex bowl mid-domain, like r^N log r; the negated sign flips it
        r = np.linspace(0.0, 1.0, 66)[1:-1]
        mid = (r > 0.35) & (r < 0.6)
        for family in (FALSE_TPS, FOUR_TERM, TWO_TERM):
            c0 = default_c0(family)
            k = make_kernel(KernelSpec(family, 2.01, 0.0, 1.0, c0, frac_mode="none"))
            v = k.evaluate(r)
            sd = v[2:] - 2 * v[1:-1] + v[:-2]
            assert np.all(v < 0)
            assert np.all(sd[mid[1:-1]] > 0)
            flipped = make_kernel(
                KernelSpec(family, 2.01, 0.0, 1.0, -c0, frac_mode="none")
            )
            vf = flipped.evaluate(r)
            sdf = vf[2:] - 2 * vf[1:-1] + vf[:-2]
            assert np.all(vf > 0)
            assert np.all(sdf[mid[1:-1]] < 0)


class TestPerturb:
    def test_false_tps_example(self):
        base = make_kernel(KernelSpec(FALSE_TPS, 3.22, 0.0, 1.0, frac_mode="none"))
        shifted = perturb(base, 0.3, 1.0)
        assert list(shifted.powers) == pytest.approx([3.22 + 1.7, 4.22, 3.22])
        assert list(shifted.coefficients) == pytest.approx([-2.0, 4.0, -2.0])

    def test_four_term_example(self):
        base = make_kernel(KernelSpec(FOUR_TERM, 2.55, 0.0, 1.0, frac_mode="none"))
        shifted = perturb(base, 0.4, 1.0)
        assert list(shifted.powers) == pytest.approx([5.55, 4.15, 3.55, 2.55])
        assert list(shifted.coefficients) == pytest.approx([3.0, -9.0, 9.0, -3.0])

    def test_scale_exponent_grows_with_alpha(self):
        b, alpha = 1.48, 0.3
        base = make_kernel(KernelSpec(FALSE_TPS, 3.22, 0.0, b, frac_mode="none"))
        shifted = perturb(base, alpha, b)
        assert shifted.coefficients[0] == pytest.approx(
            base.coefficients[0] * b**alpha, rel=1e-13
        )

    def test_two_term_targets_lowest_power(self):
        base = make_kernel(KernelSpec(TWO_TERM, 4.31, 0.0, 1.0, frac_mode="none"))
        shifted = perturb(base, 0.25, 1.0)
        assert list(shifted.powers) == pytest.approx([5.31, 4.06])

    def test_zero_alpha_is_identity(self):
        base = make_kernel(KernelSpec(FALSE_TPS, 3.22, 0.0, 1.0, frac_mode="none"))
        assert perturb(base, 0.0, 1.0) is base

    def test_no_negative_term(self):
        positive = MonomialSum((MonomialTerm(1.0, 3.5), MonomialTerm(2.0, 2.5)))
        with pytest.raises(NoNegativeTermError):
            perturb(positive, 0.2, 1.0)

    def test_alpha_range(self):
        base = make_kernel(KernelSpec(FALSE_TPS, 3.22, 0.0, 1.0, frac_mode="none"))
        with pytest.raises(DomainError):
            perturb(base, 1.0, 1.0)


class TestFractionalize:
    def test_zero_alpha_full_is_identity(self):
        spec0 = KernelSpec(FALSE_TPS, 3.22, 0.0, 1.3, frac_mode="none")
        spec = KernelSpec(FALSE_TPS, 3.22, 0.0, 1.3, frac_mode="full_fractional")
        base, frac = make_kernel(spec0), fractionalize(spec)
        assert list(frac.powers) == list(base.powers)
        assert np.max(np.abs(frac.coefficients - base.coefficients)) <= 1e-12 * np.max(
            np.abs(base.coefficients)
        )

    def test_partial_transforms_only_dominant_negative_term(self):
        N, a = 3.22, 0.3
        spec = KernelSpec(FALSE_TPS, N, a, 1.0, frac_mode="partial_fractional")
        k = fractionalize(spec)
        # frozen: -2 * Gamma(6.22)/Gamma(5.92) at power 4.92
        assert k.coefficients[0] == pytest.approx(-3.3492297085756277183, rel=1e-12)
        assert k.powers[0] == pytest.approx(N + 2 - a)
        assert list(k.coefficients[1:]) == pytest.approx([4.0, -2.0])
        assert list(k.powers[1:]) == pytest.approx([N + 1, N])

    def test_full_four_term_against_gamma_oracle(self):
        spec = KernelSpec(FOUR_TERM, 2.55, 0.5, 1.0, frac_mode="full_fractional")
        k = fractionalize(spec)
        base = [(3.0, 5.55), (-9.0, 4.55), (9.0, 3.55), (-3.0, 2.55)]
        for term, (c, p) in zip(k.terms, base):
            ratio = float(mp.gamma(p + 1) / mp.gamma(p + 0.5))
            assert term.coefficient == pytest.approx(c * ratio, rel=1e-12)
            assert term.power == pytest.approx(p - 0.5)

    def test_scale_exponent_shift(self):
        b, a = 1.48, 0.4
        spec1 = KernelSpec(FALSE_TPS, 3.22, a, b, frac_mode="full_fractional")
        spec2 = KernelSpec(FALSE_TPS, 3.22, a, 1.0, frac_mode="full_fractional")
        kb, k1 = fractionalize(spec1), fractionalize(spec2)
        base = make_kernel(KernelSpec(FALSE_TPS, 3.22, 0.0, b, frac_mode="none"))
        base1 = make_kernel(KernelSpec(FALSE_TPS, 3.22, 0.0, 1.0, frac_mode="none"))
        # every coefficient carries the b**alpha factor on top of its own scale
        want = base.coefficients / base1.coefficients * b**a * k1.coefficients
        assert list(kb.coefficients) == pytest.approx(list(want), rel=1e-12)

    def test_requires_fractional_mode(self):
        with pytest.raises(DomainError):
            fractionalize(KernelSpec(FALSE_TPS, 3.22, 0.1, 1.0))

    def test_nonpositive_power_rejected(self):
        spec = KernelSpec(TWO_TERM, 0.8, 0.9, 1.0, frac_mode="full_fractional")
        with pytest.raises(RestrictionError):
            fractionalize(spec)


class TestEvaluate:
    def test_zero_at_scale_for_homogeneous_families(self):
        two = make_kernel(KernelSpec(TWO_TERM, 4.31, 0.0, 1.0, frac_mode="none"))
        assert evaluate(two, 1.0) == pytest.approx(0.0, abs=1e-15)
        false = make_kernel(KernelSpec(FALSE_TPS, 3.22, 0.0, 1.0, frac_mode="none"))
        assert evaluate(false, 1.0) == pytest.approx(0.0, abs=1e-15)

    def test_zero_at_origin(self):
        k = make_kernel(KernelSpec(FALSE_TPS, 3.22, 0.2, 1.48))
        assert evaluate(k, 0.0) == 0.0

    def test_frozen_value(self):
        k = make_kernel(KernelSpec(FALSE_TPS, 2.55, 0.0, 1.0))
        assert evaluate(k, 0.5) == pytest.approx(-0.085377516047149719928, rel=1e-14)

    def test_vectorized(self):
        k = make_kernel(KernelSpec(FALSE_TPS, 2.55, 0.0, 1.0))
        r = np.array([0.0, 0.5, 1.0])
        out = evaluate(k, r)
        assert out.shape == (3,)
        assert out[1] == pytest.approx(-0.085377516047149719928, rel=1e-13)

    def test_negative_radius_rejected(self):
        k = make_kernel(KernelSpec(FALSE_TPS, 2.55, 0.0, 1.0))
        with pytest.raises(DomainError):
            evaluate(k, -0.1)


class TestCpdOrder:
    def test_worked_values(self):
        assert cpd_order(make_kernel(KernelSpec(FALSE_TPS, 3.22, 0.0, 1.0))) == 3
        assert cpd_order(make_kernel(KernelSpec(FOUR_TERM, 2.55, 0.0, 1.0))) == 3

    def test_sweep_worked_values(self):
        false = KernelSpec(FALSE_TPS, 3.22, 0.0, 1.0)
        assert sweep_cpd_order(false, 0.0, 1.0) == 3
        four = KernelSpec(FOUR_TERM, 2.55, 0.0, 1.0)
        assert sweep_cpd_order(four, 0.0, 1.0) == 3
        frac = KernelSpec(FALSE_TPS, 3.22, 0.0, 1.0, frac_mode="partial_fractional")
        assert sweep_cpd_order(frac, -1.0, 1.0) == 4
        full = KernelSpec(FALSE_TPS, 4.255, 0.0, 1.0, frac_mode="full_fractional")
        assert sweep_cpd_order(full, -2.0, 2.0) == 5

    def test_monotone_in_added_power(self):
        k = make_kernel(KernelSpec(FALSE_TPS, 3.22, 0.0, 1.0))
        m = cpd_order(k)
        bigger = MonomialSum(k.terms + (MonomialTerm(1.0, 8.4),))
        assert cpd_order(bigger) >= m

    def test_integer_power_rejected(self):
        with pytest.raises(RestrictionError):
            cpd_order(MonomialSum((MonomialTerm(1.0, 4.0),)))


class TestValidateRestrictions:
    def test_paper_checks(self):
        ok1 = KernelSpec(FALSE_TPS, 3.55, 2.0, 1.0, frac_mode="full_fractional")
        validate_restrictions(ok1, q=1.5)
        ok2 = KernelSpec(FALSE_TPS, 4.255, 2.0, 1.0, frac_mode="full_fractional")
        validate_restrictions(ok2, q=2.15)
        ok3 = KernelSpec(FALSE_TPS, 2.25, 2.0, 1.48, frac_mode="full_fractional")
        validate_restrictions(ok3, q=0.0)

    def test_integer_N_rejected(self):
        with pytest.raises(RestrictionError):
            validate_restrictions(KernelSpec(FALSE_TPS, 3.0, 0.5, 1.0))

    def test_integer_N_minus_alpha_rejected(self):
        spec = KernelSpec(FALSE_TPS, 3.5, 0.5, 1.0)
        with pytest.raises(RestrictionError):
            validate_restrictions(spec)

    def test_operator_order_bound(self):
        spec = KernelSpec(FALSE_TPS, 3.55, 2.1, 1.0, frac_mode="full_fractional")
        with pytest.raises(RestrictionError):
            validate_restrictions(spec, q=1.5)

    def test_alpha_bound_when_q_nonpositive(self):
        spec = KernelSpec(FALSE_TPS, 2.25, 2.3, 1.0, frac_mode="full_fractional")
        with pytest.raises(RestrictionError):
            validate_restrictions(spec, q=0.0)

    def test_near_integer_counts_as_integer(self):
        spec = KernelSpec(FALSE_TPS, 3.0 + 1e-12, 0.0, 1.0)
        with pytest.raises(RestrictionError):
            validate_restrictions(spec)


class TestSpecValidation:
    def test_unknown_family(self):
        with pytest.raises(DomainError):
            KernelSpec("gaussian", 3.22, 0.0, 1.0)

    def test_bad_scale(self):
        with pytest.raises(DomainError):
            KernelSpec(FALSE_TPS, 3.22, 0.0, 0.0)

    def test_c0_on_three_term(self):
        with pytest.raises(DomainError):
            KernelSpec(THREE_TERM_TPS, 3.22, 0.0, 1.0, c0=4.0)

    def test_alpha_range_checks(self):
        KernelSpec(FALSE_TPS, 3.22, 0.99, 1.0).check_alpha_range()
        with pytest.raises(DomainError):
            KernelSpec(FALSE_TPS, 3.22, -0.1, 1.0).check_alpha_range()
        with pytest.raises(DomainError):
            KernelSpec(
                FALSE_TPS, 3.22, 0.5, 1.0, frac_mode="none"
            ).check_alpha_range()
        KernelSpec(
            FALSE_TPS, 3.22, -1.9, 1.0, frac_mode="full_fractional"
        ).check_alpha_range()
        with pytest.raises(DomainError):
            KernelSpec(
                FALSE_TPS, 3.22, -1.5, 1.0, frac_mode="partial_fractional"
            ).check_alpha_range()


def test_monomial_sum_sorts_and_rejects_duplicates():
    ms = MonomialSum((MonomialTerm(1.0, 2.5), MonomialTerm(2.0, 4.5)))
    assert list(ms.powers) == [4.5, 2.5]
    with pytest.raises(DomainError):
        MonomialSum((MonomialTerm(1.0, 2.5), MonomialTerm(2.0, 2.5)))


def test_monomial_sum_drops_zero_coefficients():
    ms = MonomialSum((MonomialTerm(0.0, 2.5), MonomialTerm(2.0, 4.5)))
    assert len(ms.terms) == 1
