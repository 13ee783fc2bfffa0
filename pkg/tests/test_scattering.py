"""Jost construction, phase function, and the discrete spectrum."""

import math
from fractions import Fraction

import numpy as np
import pytest

from mirrorspec import (
    AdmissibilityError,
    ConvergenceError,
    DomainError,
    JostPolynomial,
    Potential,
    delta_of_lambda,
    discrete_spectrum,
    fundamental_solution,
    jost_polynomial,
    phase_function,
    wronskian,
)


def backward_jost_sequence(pot, p, j_max):
    """Out-wave solution: exact tail z^j beyond the support, recursed inward."""
    z = complex(math.cos(p), math.sin(p))
    lam = 2.0 - 2.0 * math.cos(p)
    f = np.zeros(j_max + 1, dtype=complex)
    f[j_max] = z**j_max
    f[j_max - 1] = z ** (j_max - 1)
    for j in range(j_max - 1, 0, -1):
        f[j - 1] = (2.0 + pot.value(j) - lam) * f[j] - f[j + 1]
    return f


def random_potential(rng, J):
    v = rng.uniform(-2.0, 2.0, J)
    if abs(v[-1]) < 0.1:
        v[-1] = 0.5
    return Potential.from_values(list(v))


class TestFundamentalSolution:
    def test_zero_potential_sine_values(self):
        # lambda = 1 corresponds to p = pi/3; phi(j) = sin(p j)/sin(p)
        phi = fundamental_solution(Potential.from_values([]), 1.0, 6)
        np.testing.assert_allclose(phi, [0, 1, 1, 0, -1, -1, 0], atol=1e-14)

    def test_single_step(self):
        pot = Potential.from_values([0.7, -0.3])
        lam = 1.234
        phi = fundamental_solution(pot, lam, 2)
        assert math.isclose(phi[2], 2 + 0.7 - lam, rel_tol=1e-15)

    def test_polynomial_degree_in_energy(self):
        # phi(j) evaluated at degree+1 energies is fit exactly by degree j-1
        pot = Potential.from_values([0.5, 0.25])
        for j in (2, 3, 5):
            lams = np.linspace(-1, 5, j + 2)
            vals = [fundamental_solution(pot, lam, j)[j] for lam in lams]
            coeffs = np.polyfit(lams, vals, j - 1)
            recon = np.polyval(coeffs, lams)
            np.testing.assert_allclose(recon, vals, rtol=1e-8, atol=1e-10)

    def test_bad_jmax(self):
        with pytest.raises(DomainError):
            fundamental_solution(Potential.from_values([]), 1.0, 0)


class TestWronskian:
    def test_identical_sequences_vanish(self):
        x = np.array([1.0, 2.0, 3.0])
        assert wronskian(x, x, 1) == 0.0

    def test_sin_cos_pair(self):
        p = 0.83
        j = np.arange(8)
        s, c = np.sin(p * j), np.cos(p * j)
        for idx in range(7):
            assert math.isclose(wronskian(s, c, idx), math.sin(p), rel_tol=1e-12)

    def test_constant_in_j_for_solutions(self):
        rng = np.random.default_rng(4)
        pot = random_potential(rng, 5)
        p = 1.1
        lam = 2 - 2 * math.cos(p)
        phi = fundamental_solution(pot, lam, 12)
        f = backward_jost_sequence(pot, p, 12)
        values = [wronskian(phi, f, j) for j in range(12)]
        spread = max(abs(v - values[0]) for v in values)
        assert spread < 1e-12 * max(1.0, abs(values[0]))

    def test_index_out_of_range(self):
        with pytest.raises(DomainError):
            wronskian(np.ones(3), np.ones(3), 2)


class TestJostPolynomial:
    def test_single_site(self):
        for c in (0.5, -0.25, 2.0):
            jost = jost_polynomial(Potential.from_values([c]))
            np.testing.assert_allclose(jost.coeffs, [1.0, c], atol=0)
            np.testing.assert_allclose(jost.roots, [-1.0 / c], atol=1e-12)
            assert jost.admissible == (abs(c) < 1)

    def test_two_site_coefficients_exact(self):
        v1, v2 = Fraction(1, 3), Fraction(2, 5)
        jost = jost_polynomial(Potential.from_values([v1, v2]))
        assert jost.exact_coeffs == (1, v1 + v2, v1 * v2, v2)
        np.testing.assert_allclose(jost.coeffs, [1.0, float(v1 + v2), float(v1 * v2), float(v2)], atol=0)

    def test_wronskian_sampling_reproduces_coefficients(self):
        rng = np.random.default_rng(8)
        for _ in range(12):
            J = int(rng.integers(1, 9))
            pot = random_potential(rng, J)
            jost = jost_polynomial(pot)
            n = 64
            samples = []
            for i in range(n):
                p = 2 * math.pi * i / n
                phi = fundamental_solution(pot, 2 - 2 * math.cos(p), J + 6)
                f = backward_jost_sequence(pot, p, J + 6)
                samples.append(wronskian(phi, f, 0))
            recovered = np.fft.fft(np.array(samples)) / n
            scale = np.abs(jost.coeffs).max()
            assert np.abs(np.real(recovered[: jost.degree + 1]) - jost.coeffs).max() < 1e-10 * scale
            assert np.abs(np.imag(recovered)).max() < 1e-12 * scale

    def test_degree_bound_tight(self):
        rng = np.random.default_rng(12)
        for _ in range(10):
            J = int(rng.integers(1, 7))
            pot = random_potential(rng, J)
            assert jost_polynomial(pot).degree == 2 * pot.J - 1

    def test_trailing_zeros_trimmed(self):
        pot = Potential.from_values([0.5, 0.0, 0.0])
        assert pot.J == 1
        assert jost_polynomial(pot).degree == 1

    def test_roots_reproduce_coefficients(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            pot = random_potential(rng, int(rng.integers(2, 9)))
            jost = jost_polynomial(pot)
            rebuilt = np.array([1.0 + 0j])
            for r in jost.roots:
                rebuilt = np.convolve(rebuilt, [1.0, -1.0 / r])
            assert np.abs(rebuilt - jost.coeffs).max() < 1e-8 * np.abs(jost.coeffs).max()

    def test_conjugate_pairing(self):
        rng = np.random.default_rng(14)
        for _ in range(10):
            jost = jost_polynomial(random_potential(rng, 6))
            paired = np.sort_complex(np.conj(jost.roots))
            assert np.abs(np.sort_complex(jost.roots) - paired).max() < 1e-8

    def test_conjugation_symmetry_on_circle(self):
        jost = jost_polynomial(Potential.from_values([0.4, -0.2, 0.9]))
        p = np.linspace(0.1, 3.0, 40)
        plus = jost.at_momentum(p)
        minus = jost.at_momentum(-p)
        assert np.abs(minus - np.conj(plus)).max() < 1e-15 * np.abs(plus).max()

    def test_wave_decomposition_beyond_support(self):
        rng = np.random.default_rng(15)
        for _ in range(6):
            pot = random_potential(rng, int(rng.integers(1, 7)))
            jost = jost_polynomial(pot)
            for p in np.linspace(0.2, 2.9, 12):
                lam = 2 - 2 * math.cos(p)
                j_max = pot.J + 5
                phi = fundamental_solution(pot, lam, j_max)
                z = complex(math.cos(p), math.sin(p))
                F = complex(jost(z))
                j = np.arange(j_max + 1)
                recon = (1j / (2 * math.sin(p))) * (F * z ** (-j) - np.conj(F) * z**j)
                err = np.abs(recon[pot.J + 1 :] - phi[pot.J + 1 :]).max()
                assert err < 1e-9


class TestPhaseFunction:
    def test_zero_potential_trivial(self):
        phase = phase_function(jost_polynomial(Potential.from_values([])))
        assert np.all(phase.eta == 0.0)
        assert np.all(phase.sigma == 0.0)

    def test_single_site_value(self):
        phase = phase_function(jost_polynomial(Potential.from_values([0.5])))
        assert math.isclose(float(phase.eta_exact(math.pi / 2)), -math.atan(0.5), abs_tol=1e-14)

    def test_boundary_zeros(self):
        rng = np.random.default_rng(16)
        from mirrorspec.sampling import admissible_potential

        for _ in range(8):
            pot = admissible_potential(rng, 6)
            phase = phase_function(jost_polynomial(pot))
            assert abs(phase.eta[0]) < 1e-10
            assert abs(phase.eta[-1]) < 1e-10

    def test_oddness_through_conjugation(self):
        jost = jost_polynomial(Potential.from_values([0.3, -0.2]))
        phase = phase_function(jost)
        p = np.linspace(0.05, 3.1, 50)
        eta_plus = -np.angle(jost.at_momentum(p))
        eta_minus = -np.angle(jost.at_momentum(2 * np.pi - p))
        assert np.abs(eta_plus + eta_minus).max() < 1e-12

    def test_polar_factorization_matches_direct_values(self):
        jost = jost_polynomial(Potential.from_values([0.4, 0.1, -0.3]))
        phase = phase_function(jost)
        direct = jost.at_momentum(phase.grid)
        recon = np.exp(phase.sigma) * np.exp(-1j * phase.eta)
        assert np.abs(recon - direct).max() < 1e-10

    def test_nonadmissible_rejected(self):
        with pytest.raises(AdmissibilityError):
            phase_function(jost_polynomial(Potential.from_values([-2.0])))

    def test_small_grid_rejected(self):
        with pytest.raises(DomainError):
            phase_function(jost_polynomial(Potential.from_values([0.5])), 128)

    def test_winding_inconsistency_detected(self):
        # mislabel a bound-state polynomial as admissible: unwrap cannot close
        bad = jost_polynomial(Potential.from_values([-2.0]))
        forged = JostPolynomial(coeffs=bad.coeffs, roots=bad.roots, admissible=True)
        with pytest.raises(ConvergenceError):
            phase_function(forged)


class TestDeltaOfLambda:
    def test_band_edges_vanish(self):
        phase = phase_function(jost_polynomial(Potential.from_values([0.5])))
        assert abs(delta_of_lambda(phase, 0.0)) < 1e-12
        assert abs(delta_of_lambda(phase, 4.0)) < 1e-12

    def test_zero_potential(self):
        phase = phase_function(jost_polynomial(Potential.from_values([])))
        for lam in (0.0, 1.3, 2.0, 4.0):
            assert delta_of_lambda(phase, lam) == 0.0

    def test_band_center_is_quarter_turn(self):
        phase = phase_function(jost_polynomial(Potential.from_values([0.5])))
        assert math.isclose(
            delta_of_lambda(phase, 2.0), float(phase.eta_exact(math.pi / 2)), abs_tol=1e-14
        )

    def test_interpolated_close_to_exact(self):
        phase = phase_function(jost_polynomial(Potential.from_values([0.5, -0.2])))
        for lam in (0.7, 1.9, 3.2):
            exact = delta_of_lambda(phase, lam)
            interp = delta_of_lambda(phase, lam, interpolated=True)
            assert abs(exact - interp) < 1e-6

    def test_domain_error(self):
        phase = phase_function(jost_polynomial(Potential.from_values([0.5])))
        with pytest.raises(DomainError):
            delta_of_lambda(phase, -0.1)
        with pytest.raises(DomainError):
            delta_of_lambda(phase, 4.1)


class TestDiscreteSpectrum:
    def test_attractive_single_site(self):
        jost = jost_polynomial(Potential.from_values([-2.0]))
        assert not jost.admissible
        np.testing.assert_allclose(discrete_spectrum(jost), [-0.5], atol=1e-12)

    def test_admissible_empty(self):
        jost = jost_polynomial(Potential.from_values([0.5]))
        assert discrete_spectrum(jost).size == 0

    def test_root_outside_disk_ignored(self):
        jost = jost_polynomial(Potential.from_values([0.5]))
        # the only root is -2, outside the disk
        assert discrete_spectrum(jost).size == 0

    def test_matches_direct_eigensolve(self):
        # deep attractive well: compare against a large truncated matrix
        from scipy.linalg import eigh_tridiagonal

        pot = Potential.from_values([-2.0, -1.0])
        jost = jost_polynomial(pot)
        bound = discrete_spectrum(jost)
        n = 4000
        d = np.full(n, 2.0)
        d[: pot.J] += pot.v
        e = np.full(n - 1, -1.0)
        low = eigh_tridiagonal(d, e, select="v", select_range=(-50.0, -1e-9))[0]
        np.testing.assert_allclose(bound[bound < -1e-6], low, atol=1e-8)
