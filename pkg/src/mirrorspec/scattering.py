"""Half-line discrete Schrodinger scattering for compactly supported potentials.

The operator acts on sequences psi(1), psi(2), ... as
v_j psi(j) + 2 psi(j) - psi(j+1) - psi(j-1) with psi(0) = 0, where the
potential v vanishes beyond its support bound J.  On the continuous band
lambda = 2 - 2 cos p, the Jost function written in z = e^{ip} is a real
polynomial of degree at most 2J - 1 with constant term 1; its roots outside
the closed unit disk certify the absence of bound and semi-bound states, and
its boundary values carry the scattering amplitude and phase.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Optional

import numpy as np

from .errors import AdmissibilityError, ConvergenceError, DomainError

# Margins converting the open admissibility conditions (|z_n| > 1 and
# F(+-1) != 0) into testable predicates.
ROOT_RADIUS_MARGIN = 1e-9
BAND_EDGE_MARGIN = 1e-9
DEFAULT_PHASE_GRID = 4096
ROOT_RECONSTRUCTION_TOL = 1e-8


@dataclass(frozen=True)
class Potential:
    """Compact-support real potential v_1..v_J; trailing zeros are trimmed."""

    v: np.ndarray
    exact: Optional[tuple] = None  # Fractions, kept when construction was exact

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.v, dtype=float))
        if arr.size and not np.all(np.isfinite(arr)):
            raise DomainError("potential entries must be finite")
        while arr.size and arr[-1] == 0.0:
            arr = arr[:-1]
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "v", arr)
        if self.exact is not None:
            ex = tuple(Fraction(x) for x in self.exact)
            while ex and ex[-1] == 0:
                ex = ex[:-1]
            if len(ex) != arr.size or any(float(f) != x for f, x in zip(ex, arr)):
                raise DomainError("exact coefficients disagree with float values")
            object.__setattr__(self, "exact", ex)

    @classmethod
    def from_values(cls, values) -> "Potential":
        """Build from a sequence; int/Fraction entries keep an exact copy."""
        values = list(values)
        if all(isinstance(x, (int, Rational)) for x in values):
            return cls(v=np.array([float(x) for x in values]), exact=tuple(values))
        return cls(v=np.asarray(values, dtype=float))

    @classmethod
    def from_dict(cls, data: dict) -> "Potential":
        try:
            return cls.from_values(data["v"])
        except KeyError as exc:
            raise DomainError(f"potential file missing key {exc}") from exc

    def to_dict(self) -> dict:
        return {"v": self.v.tolist()}

    @property
    def J(self) -> int:
        return self.v.size

    def value(self, j: int) -> float:
        """v_j with v = 0 beyond the support (1-based site index)."""
        return float(self.v[j - 1]) if 1 <= j <= self.J else 0.0


def fundamental_solution(pot: Potential, lam, j_max: int):
    """Solution of the recurrence with psi(0) = 0, psi(1) = 1, up to site j_max.

    Returns an array indexed by site, entry [j] = phi(j), j = 0..j_max; the
    dtype follows lam (complex lam gives a complex array).  As a function of
    lam, phi(j) is a polynomial of degree j - 1.
    """
    if j_max < 1:
        raise DomainError("j_max must be >= 1")
    dtype = complex if isinstance(lam, complex) else float
    phi = np.zeros(j_max + 1, dtype=dtype)
    phi[1] = 1.0
    for j in range(1, j_max):
        phi[j + 1] = (2.0 + pot.value(j) - lam) * phi[j] - phi[j - 1]
    return phi


def wronskian(psi1, psi2, j: int):
    """Discrete Wronskian -[psi1(j) psi2(j+1) - psi1(j+1) psi2(j)].

    Constant in j whenever both sequences solve the same equation.
    """
    if j < 0 or j + 1 >= len(psi1) or j + 1 >= len(psi2):
        raise DomainError(f"index {j} out of range for the given sequences")
    return -(psi1[j] * psi2[j + 1] - psi1[j + 1] * psi2[j])


def _jost_coefficients(v: list) -> list:
    """Coefficients c_0..c_D of the Jost polynomial in z, generic arithmetic.

    Carries the fundamental solution symbolically through the substitution
    lambda = 2 - z - 1/z: with psi_j the resulting Laurent polynomial of
    phi(j), the recurrence is psi_{j+1} = (v_j + z + 1/z) psi_j - psi_{j-1}
    and the Jost polynomial is 1 + sum_j v_j z^j psi_j, in which every power
    of z is nonnegative.
    """
    J = len(v)
    zero = 0 * (v[0] if J else 0)
    one = zero + 1 if J else 1
    coeffs = [one] + [zero] * (2 * J - 1 if J else 0)
    # psi_j stored centered: psi[i] is the coefficient of z^(i - (j-1)).
    psi_prev: list = []  # psi_0 = 0
    psi = [one]  # psi_1
    for j in range(1, J + 1):
        # contribution v_j * z^j * psi_j covers powers z^1 .. z^(2j-1)
        if v[j - 1] != 0:
            for i, c in enumerate(psi):
                coeffs[1 + i] = coeffs[1 + i] + v[j - 1] * c
        if j == J:
            break
        nxt = [zero] * (2 * j + 1)
        for i, c in enumerate(psi):
            nxt[i] += c  # 1/z term (center shifts by one)
            nxt[i + 1] += v[j - 1] * c
            nxt[i + 2] += c  # z term
        for i, c in enumerate(psi_prev):
            nxt[i + 2] -= c
        psi_prev, psi = psi, nxt
    return coeffs


def _poly_roots(coeffs: np.ndarray) -> np.ndarray:
    """All roots of a polynomial with ascending coefficients and c_0 = 1.

    Eigenvalues of the companion matrix of the monic reversal give the
    reciprocals of the roots (the reversal is monic because c_0 = 1), which
    avoids dividing by a possibly small leading coefficient; a few Newton
    steps polish each root on the original polynomial.
    """
    degree = coeffs.size - 1
    if degree == 0:
        return np.zeros(0, dtype=complex)
    # reversal r(w) = w^D + c_1 w^(D-1) + ... + c_D
    comp = np.zeros((degree, degree))
    if degree > 1:
        comp[1:, :-1] = np.eye(degree - 1)
    comp[:, -1] = -coeffs[1:][::-1]
    with np.errstate(all="ignore"):
        w = np.linalg.eigvals(comp)
    if np.any(w == 0) or not np.all(np.isfinite(w)):
        raise ConvergenceError("companion eigenvalues degenerate; root finding failed")
    roots = 1.0 / w.astype(complex)
    deriv = coeffs[1:] * np.arange(1, degree + 1)
    for _ in range(3):
        val = np.polynomial.polynomial.polyval(roots, coeffs)
        dval = np.polynomial.polynomial.polyval(roots, deriv)
        step = np.where(dval != 0, val / np.where(dval == 0, 1.0, dval), 0.0)
        # keep Newton from jumping across the plane on near-multiple roots
        step = np.where(np.abs(step) < 0.5 * (1.0 + np.abs(roots)), step, 0.0)
        roots = roots - step
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]


def _reconstruct_from_roots(roots: np.ndarray) -> np.ndarray:
    coeffs = np.array([1.0 + 0.0j])
    for r in roots:
        coeffs = np.convolve(coeffs, np.array([1.0, -1.0 / r]))
    return coeffs


@dataclass(frozen=True)
class JostPolynomial:
    """Real-coefficient Jost polynomial in z with all roots located."""

    coeffs: np.ndarray  # ascending, coeffs[0] = 1
    roots: np.ndarray  # complex, all of them
    admissible: bool
    exact_coeffs: Optional[tuple] = None

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float).copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)
        r = np.asarray(self.roots, dtype=complex).copy()
        r.flags.writeable = False
        object.__setattr__(self, "roots", r)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def derivative(self, z):
        if self.degree == 0:
            return np.zeros_like(np.asarray(z, dtype=complex))
        d = self.coeffs[1:] * np.arange(1, self.degree + 1)
        return np.polynomial.polynomial.polyval(z, d)

    def second_derivative(self, z):
        if self.degree < 2:
            return np.zeros_like(np.asarray(z, dtype=complex))
        d2 = self.coeffs[2:] * np.arange(2, self.degree + 1) * np.arange(1, self.degree)
        return np.polynomial.polynomial.polyval(z, d2)

    def at_momentum(self, p):
        """Value on the unit circle, z = e^{ip}."""
        return self(np.exp(1j * np.asarray(p, dtype=float)))


def jost_polynomial(pot: Potential) -> JostPolynomial:
    """Build the Jost polynomial of a potential, locate its roots, and
    classify admissibility (all roots outside the closed unit disk and
    nonvanishing band-edge values, both with a small safety margin)."""
    float_coeffs = np.array(_jost_coefficients([float(x) for x in pot.v]), dtype=float)
    exact: Optional[tuple] = None
    if pot.exact is not None:
        exact = tuple(_jost_coefficients(list(pot.exact)))
    roots = _poly_roots(float_coeffs)
    if roots.size:
        rebuilt = _reconstruct_from_roots(roots)
        scale = np.abs(float_coeffs).max()
        err = np.abs(rebuilt - float_coeffs).max() / scale
        if err > ROOT_RECONSTRUCTION_TOL:
            raise ConvergenceError(
                f"roots do not reproduce coefficients (relative error {err:.3e}); "
                f"roots={roots!r}"
            )
    edge_plus = abs(float(np.polynomial.polynomial.polyval(1.0, float_coeffs)))
    edge_minus = abs(float(np.polynomial.polynomial.polyval(-1.0, float_coeffs)))
    min_radius = float(np.abs(roots).min()) if roots.size else math.inf
    admissible = (
        min_radius > 1.0 + ROOT_RADIUS_MARGIN
        and edge_plus > BAND_EDGE_MARGIN
        and edge_minus > BAND_EDGE_MARGIN
    )
    return JostPolynomial(coeffs=float_coeffs, roots=roots, admissible=admissible, exact_coeffs=exact)


def inside_roots(jost: JostPolynomial) -> np.ndarray:
    """Roots strictly inside the unit disk (diagnostics for bound states)."""
    if jost.roots.size == 0:
        return np.zeros(0, dtype=complex)
    return jost.roots[np.abs(jost.roots) < 1.0]


def discrete_spectrum(jost: JostPolynomial) -> np.ndarray:
    """Bound-state energies 2 - alpha - 1/alpha from real roots inside the disk.

    Complex roots inside the disk (which a genuine real potential never
    produces alone) are excluded here; inspect inside_roots for diagnostics.
    """
    alphas = inside_roots(jost)
    real = alphas[np.abs(alphas.imag) < 1e-12 * np.maximum(1.0, np.abs(alphas.real))]
    lam = np.sort(2.0 - real.real - 1.0 / real.real)
    return lam


@dataclass(frozen=True)
class PhaseFunction:
    """Continuous-branch scattering phase and log-amplitude on a p-grid.

    grid/eta/sigma sample [0, pi] uniformly; evaluation methods go back to
    the Jost polynomial for full accuracy, using the grid only to select the
    branch of the argument.
    """

    grid: np.ndarray
    eta: np.ndarray
    sigma: np.ndarray
    jost: JostPolynomial

    def __post_init__(self):
        for name in ("grid", "eta", "sigma"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def eta_exact(self, p):
        """Phase at arbitrary p in [0, pi], exact up to branch selection."""
        p = np.asarray(p, dtype=float)
        vals = self.jost.at_momentum(p)
        principal = -np.angle(vals)
        reference = np.interp(p, self.grid, self.eta)
        branch = np.round((reference - principal) / (2.0 * np.pi))
        return principal + 2.0 * np.pi * branch

    def sigma_exact(self, p):
        return np.log(np.abs(self.jost.at_momentum(p)))

    def eta_deriv(self, p):
        """d eta / d p, from the logarithmic derivative of the Jost polynomial."""
        z = np.exp(1j * np.asarray(p, dtype=float))
        g = z * self.jost.derivative(z) / self.jost(z)
        return -np.real(g)

    def eta_deriv2(self, p):
        z = np.exp(1j * np.asarray(p, dtype=float))
        f = self.jost(z)
        g = z * self.jost.derivative(z) / f
        x = g + z * z * self.jost.second_derivative(z) / f - g * g
        return np.imag(x)

    def delta(self, lam):
        """Scattering phase as a function of the band energy lambda in [0, 4]."""
        lam_arr = np.asarray(lam, dtype=float)
        if np.any(lam_arr < 0.0) or np.any(lam_arr > 4.0):
            raise DomainError("band energy must lie in [0, 4]")
        p = np.arccos(np.clip(1.0 - lam_arr / 2.0, -1.0, 1.0))
        return self.eta_exact(p)

    def delta_deriv(self, lam):
        lam_arr = np.asarray(lam, dtype=float)
        if np.any(lam_arr <= 0.0) or np.any(lam_arr >= 4.0):
            raise DomainError("the phase derivative needs lambda strictly inside (0, 4)")
        p = np.arccos(np.clip(1.0 - lam_arr / 2.0, -1.0, 1.0))
        return self.eta_deriv(p) / (2.0 * np.sin(p))

    def delta_interpolated(self, lam):
        """Grid interpolation of the phase; adequate for plotting only."""
        lam_arr = np.asarray(lam, dtype=float)
        if np.any(lam_arr < 0.0) or np.any(lam_arr > 4.0):
            raise DomainError("band energy must lie in [0, 4]")
        p = np.arccos(np.clip(1.0 - lam_arr / 2.0, -1.0, 1.0))
        return np.interp(p, self.grid, self.eta)

    def max_eta_slope(self) -> float:
        return float(np.abs(self.eta_deriv(self.grid)).max())


def phase_function(jost: JostPolynomial, grid_size: int = DEFAULT_PHASE_GRID) -> PhaseFunction:
    """Amplitude and continuous-branch phase of the Jost polynomial on |z|=1.

    The branch is fixed by eta(0) = 0; for admissible input the unwrapped
    phase must return to zero at p = pi (zero winding), which is verified and
    refined by grid doubling if needed.
    """
    if not jost.admissible:
        raise AdmissibilityError("phase construction requires an admissible Jost polynomial")
    if grid_size < 256:
        raise DomainError("grid_size must be at least 256")
    g = grid_size
    while True:
        p = np.linspace(0.0, np.pi, g)
        vals = jost.at_momentum(p)
        sigma = np.log(np.abs(vals))
        eta = -np.unwrap(np.angle(vals))
        eta -= eta[0]  # exact zero at p = 0 (the value there is real positive)
        if abs(eta[-1]) < 1e-10:
            return PhaseFunction(grid=p, eta=eta, sigma=sigma, jost=jost)
        if g >= 2**20:
            raise ConvergenceError(
                f"residual winding {eta[-1]:.3e} after unwrapping; "
                "roots on or inside the unit circle were likely missed"
            )
        g *= 2


def delta_of_lambda(phase: PhaseFunction, lam: float, interpolated: bool = False) -> float:
    """Scattering phase at band energy lam; exact by default."""
    if interpolated:
        return float(phase.delta_interpolated(lam))
    return float(phase.delta(lam))
