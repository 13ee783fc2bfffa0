"""Exact and floating checks of the eigenvalue product identity."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mirrorspec import DegenerateInputError, DomainError, MirrorJacobiSpec
from mirrorspec import eigenproduct as ep


def free_chain(M):
    return MirrorJacobiSpec.from_arrays([-1.0] * M, [2.0] * M)


def random_integer_spec(rng, M):
    a = (rng.integers(1, 10, M) * rng.choice([-1, 1], M)).astype(float)
    b = rng.integers(-9, 10, M).astype(float)
    return MirrorJacobiSpec(M=M, a=a, b=b)


class TestClosedFormRhs:
    def test_m1(self):
        r = ep.closed_form_rhs(MirrorJacobiSpec.from_arrays([5.0], [7.0]))
        assert r.sign == 1
        assert math.isclose(r.log_abs, math.log(10.0), rel_tol=1e-15)

    def test_m2_sign_flip(self):
        r = ep.closed_form_rhs(MirrorJacobiSpec.from_arrays([1.0, 2.0], [3.0, 4.0]))
        assert r.sign == -1
        assert math.isclose(r.log_abs, math.log(16.0), rel_tol=1e-14)

    def test_free_chain_m3(self):
        r = ep.closed_form_rhs(free_chain(3))
        assert math.isclose(r.value, 8.0, rel_tol=1e-13)

    def test_zero_coupling_rejected(self):
        with pytest.raises(DegenerateInputError):
            ep.closed_form_rhs(MirrorJacobiSpec.from_arrays([0.0, 1.0], [0.0, 0.0]))

    @given(st.integers(1, 12), st.integers(0, 2**31))
    @settings(max_examples=40, deadline=None)
    def test_exact_and_float_agree(self, M, seed):
        rng = np.random.default_rng(seed)
        spec = random_integer_spec(rng, M)
        exact = ep.closed_form_rhs_exact(spec)
        sl = ep.closed_form_rhs(spec)
        assert (exact > 0) == (sl.sign > 0)
        assert math.isclose(math.log(abs(exact)), sl.log_abs, rel_tol=1e-12, abs_tol=1e-12)


class TestSpectralLhs:
    def test_m1(self):
        l = ep.spectral_lhs(MirrorJacobiSpec.from_arrays([5.0], [7.0]))
        assert l.sign == 1
        assert math.isclose(l.log_abs, math.log(10.0), abs_tol=1e-12)

    @pytest.mark.parametrize("M", [1, 2, 3, 5, 8, 12])
    def test_free_chain_closed_form(self, M):
        l = ep.spectral_lhs(free_chain(M))
        assert l.sign == (-1) ** (M * (M + 1) // 2)
        assert abs(l.log_abs - M * math.log(2.0)) < 1e-10

    def test_matches_exact_resultant(self):
        rng = np.random.default_rng(101)
        for _ in range(30):
            M = int(rng.integers(1, 7))
            spec = random_integer_spec(rng, M)
            res = ep.resultant_exact(spec)
            l = ep.spectral_lhs(spec)
            assert (res > 0) == (l.sign > 0)
            assert abs(l.log_abs - math.log(abs(res))) < 1e-8


class TestExactResultant:
    def test_m1(self):
        spec = MirrorJacobiSpec.from_arrays([5.0], [7.0])
        assert ep.resultant_exact(spec) == 10
        assert ep.check_exact(spec)

    def test_m2_hand_value(self):
        spec = MirrorJacobiSpec.from_arrays([1.0, 2.0], [3.0, 4.0])
        assert ep.resultant_exact(spec) == -16
        assert ep.check_exact(spec)

    def test_property_sweep(self):
        rng = np.random.default_rng(77)
        for _ in range(200):
            M = int(rng.integers(1, 11))
            assert ep.check_exact(random_integer_spec(rng, M))

    def test_noninteger_rejected(self):
        with pytest.raises(DomainError):
            ep.resultant_exact(MirrorJacobiSpec.from_arrays([0.5], [1.0]))

    def test_homogeneity_in_couplings(self):
        rng = np.random.default_rng(55)
        for M in (1, 2, 3, 5):
            spec = random_integer_spec(rng, M)
            base = ep.resultant_exact(spec)
            for t in (2, 3):
                scaled = MirrorJacobiSpec(M=M, a=t * spec.a, b=spec.b)
                assert ep.resultant_exact(scaled) == t ** (M * M) * base

    def test_independent_of_diagonal(self):
        rng = np.random.default_rng(56)
        for M in (2, 4):
            a = (rng.integers(1, 10, M) * rng.choice([-1, 1], M)).astype(float)
            values = set()
            for _ in range(4):
                spec = MirrorJacobiSpec(M=M, a=a, b=rng.integers(-9, 10, M).astype(float))
                values.add(ep.resultant_exact(spec))
            assert len(values) == 1


class TestReport:
    def test_integer_spec_has_exact_flag(self):
        rep = ep.report(MirrorJacobiSpec.from_arrays([1.0, 2.0], [3.0, 4.0]))
        assert rep.exact_match is True
        assert rep.lhs_sign == rep.rhs_sign == -1
        assert rep.residual < 1e-10

    def test_real_spec_has_no_exact_flag(self):
        rep = ep.report(MirrorJacobiSpec.from_arrays([1.25], [0.5]))
        assert rep.exact_match is None
        assert rep.residual < 1e-10

    def test_b_independence(self):
        rng = np.random.default_rng(303)
        for M in (2, 4, 6):
            a = rng.uniform(0.3, 2, M) * rng.choice([-1, 1], M)
            logs, signs = [], []
            for _ in range(5):
                spec = MirrorJacobiSpec(M=M, a=a, b=rng.uniform(-2, 2, M))
                l = ep.spectral_lhs(spec)
                logs.append(l.log_abs)
                signs.append(l.sign)
            assert len(set(signs)) == 1
            assert max(logs) - min(logs) < 1e-8 * M * M


class TestDegenerateScaling:
    """Couplings driven to zero: the product vanishes at a known exponent."""

    M = 3
    B = np.array([3.0, -1.0, 4.0])

    def exact_log10_product(self, j_target, s):
        # Q at a = (1,..,10^-s,..,1) recovered by scaling integer input:
        # homogeneity divides 10^(s M^2) back out of Res(10^s a).
        a = np.full(self.M, 10.0**s)
        a[j_target - 1] = 1.0
        spec = MirrorJacobiSpec(M=self.M, a=a, b=self.B)
        res = ep.resultant_exact(spec)
        return math.log10(abs(res)) - s * self.M**2

    @pytest.mark.parametrize("j_target,exponent", [(1, 2), (2, 4), (3, 3)])
    def test_exponent_via_exact_path(self, j_target, exponent):
        # slope of log10 Q vs log10 eps between eps = 1e-3 and 1e-4
        r3 = self.exact_log10_product(j_target, 3)
        r4 = self.exact_log10_product(j_target, 4)
        slope = r3 - r4  # d log10 Q / d log10 eps
        assert abs(slope - exponent) < 0.05

    @pytest.mark.parametrize("j_target,exponent", [(1, 2), (3, 3)])
    def test_exponent_via_floating_path(self, j_target, exponent):
        eps_values = (1e-2, 3e-3)
        logs = []
        for eps in eps_values:
            a = np.ones(self.M)
            a[j_target - 1] = eps
            spec = MirrorJacobiSpec(M=self.M, a=a, b=self.B)
            logs.append(ep.spectral_lhs(spec).log_abs)
        slope = (logs[0] - logs[1]) / (math.log(eps_values[0]) - math.log(eps_values[1]))
        assert abs(slope - exponent) < 0.05


class TestTrigIdentities:
    def test_free_chain_m1_exact_value(self):
        # the single factor is 4 sin^2(pi/6) - 4 sin^2(pi/3) = 1 - 3 = -2
        lhs = ep.free_chain_product(1)
        assert lhs.sign == -1
        assert round(lhs.value) == -2
        assert ep.free_chain_product_residual(1) < 1e-14

    def test_free_chain_m2(self):
        lhs = ep.free_chain_product(2)
        assert lhs.sign == -1  # 2^2 * (-1)^3 = -4
        assert ep.free_chain_product_residual(2) < 1e-12

    def test_free_chain_m40(self):
        assert ep.free_chain_product_residual(40) < 1e-9

    def test_shifted_sine_alpha_zero(self):
        # at alpha = 0 both sides equal 4
        for M in (1, 4, 9):
            for n in (0, 2, 5):
                assert ep.shifted_sine_product_residual(M, n, 0.0) < 1e-12

    def test_shifted_sine_point(self):
        assert ep.shifted_sine_product_residual(3, 2, 0.37) < 1e-12

    def test_shifted_sine_double_zero(self):
        M = 3
        alpha = math.pi / (2 * (2 * M + 1))
        assert ep.shifted_sine_product_residual(M, 2, alpha) < 1e-12

    def test_shifted_sine_alpha_grid(self):
        alphas = np.linspace(0.0, math.pi, 100)
        for M in range(1, 11):
            worst = max(ep.shifted_sine_product_residual(M, 2, float(a)) for a in alphas)
            assert worst < 1e-12

    def test_cosine_product_small(self):
        assert ep.cosine_product_residual(1) < 1e-15
        assert ep.cosine_product_residual(2) < 1e-15

    def test_cosine_product_m30_log_residual(self):
        k = np.arange(1, 31)
        log_prod = float(np.sum(np.log(np.cos(np.pi * k / 61))))
        assert abs(log_prod + 30 * math.log(2.0)) < 1e-12
        assert ep.cosine_product_residual(30) < 1e-12
