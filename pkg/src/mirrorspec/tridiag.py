"""Reflection-symmetric Jacobi matrices and symmetric-tridiagonal spectra.

A mirror-symmetric Jacobi matrix of even dimension 2M is determined by M
diagonal seeds b_1..b_M and M coupling seeds a_1..a_M: the second half of the
diagonal mirrors the first, and the off-diagonal mirrors around its middle
entry a_M.  Folding such a matrix onto the first M sites produces two M x M
tridiagonal blocks that differ only in the bottom-right corner (b_M +/- a_M);
their spectra are the even- and odd-parity halves of the full spectrum.

Eigenvalues are computed by bisection on the Sturm sign count, so the number
of eigenvalues in an interval is always consistent with the returned values.
An exact (rational) sign count is provided for certifying disjointness of
spectra on integer inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateInputError, DomainError, SpectralAmbiguityError

DEFAULT_REL_TOL = 1e-12
# Multiplier turning rel_tol into the near-degeneracy threshold used when two
# spectra must be kept apart (parity classification, log-products).
DEGENERACY_FACTOR = 1e3
# Exact characteristic polynomials are capped here; coefficients grow roughly
# exponentially in n but stay exact in arbitrary precision.
EXACT_CHAR_POLY_MAX_N = 64


def _as_readonly(x) -> np.ndarray:
    arr = np.array(x, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class MirrorJacobiSpec:
    """The M free parameters (a_1..a_M, b_1..b_M) of a 2M x 2M mirror matrix."""

    M: int
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        if self.M < 1:
            raise DomainError(f"M must be >= 1, got {self.M}")
        object.__setattr__(self, "a", _as_readonly(self.a))
        object.__setattr__(self, "b", _as_readonly(self.b))
        if self.a.shape != (self.M,) or self.b.shape != (self.M,):
            raise DomainError("a and b must both have length M")
        if not (np.all(np.isfinite(self.a)) and np.all(np.isfinite(self.b))):
            raise DomainError("spec entries must be finite")

    @classmethod
    def from_arrays(cls, a, b) -> "MirrorJacobiSpec":
        a = np.atleast_1d(np.asarray(a, dtype=float))
        return cls(M=a.size, a=a, b=b)

    @classmethod
    def from_dict(cls, data: dict) -> "MirrorJacobiSpec":
        try:
            return cls(M=int(data["M"]), a=data["a"], b=data["b"])
        except KeyError as exc:
            raise DomainError(f"spec file missing key {exc}") from exc

    def to_dict(self) -> dict:
        return {"M": self.M, "a": self.a.tolist(), "b": self.b.tolist()}

    @property
    def is_integer(self) -> bool:
        return bool(np.all(self.a == np.rint(self.a)) and np.all(self.b == np.rint(self.b)))

    @property
    def couplings_nonzero(self) -> bool:
        return bool(np.all(self.a != 0.0))


@dataclass(frozen=True)
class TridiagMatrix:
    """Symmetric tridiagonal matrix stored as diagonal + one off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "diag", _as_readonly(self.diag))
        object.__setattr__(self, "offdiag", _as_readonly(self.offdiag))
        if self.diag.ndim != 1 or self.diag.size < 1:
            raise DomainError("diag must be a nonempty 1-d array")
        if self.offdiag.shape != (self.diag.size - 1,):
            raise DomainError("offdiag must have length n - 1")

    @property
    def n(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        m = np.diag(self.diag)
        if self.n > 1:
            m += np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)
        return m


@dataclass(frozen=True)
class Spectrum:
    """Sorted eigenvalues plus a flag telling whether they are provably simple."""

    values: np.ndarray
    simple: bool

    def __post_init__(self):
        object.__setattr__(self, "values", _as_readonly(self.values))

    def __len__(self) -> int:
        return self.values.size


def expand(spec: MirrorJacobiSpec) -> TridiagMatrix:
    """Expand the M seeds into the full 2M x 2M mirror-symmetric matrix."""
    diag = np.concatenate([spec.b, spec.b[::-1]])
    offdiag = np.concatenate([spec.a, spec.a[-2::-1]])
    return TridiagMatrix(diag=diag, offdiag=offdiag)


def fold_even(spec: MirrorJacobiSpec) -> TridiagMatrix:
    """M x M block whose eigenvectors extend to reflection-even states."""
    diag = spec.b.copy()
    diag[-1] += spec.a[-1]
    return TridiagMatrix(diag=diag, offdiag=spec.a[:-1])


def fold_odd(spec: MirrorJacobiSpec) -> TridiagMatrix:
    """M x M block whose eigenvectors extend to reflection-odd states."""
    diag = spec.b.copy()
    diag[-1] -= spec.a[-1]
    return TridiagMatrix(diag=diag, offdiag=spec.a[:-1])


def _sturm_counts(diag, off2, shifts, pivmin):
    """Number of eigenvalues below each shift, via the LDL^T sign count."""
    q = diag[0] - shifts
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count = (q < 0).astype(np.int64)
    for i in range(1, diag.size):
        q = diag[i] - shifts - off2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0
    return count


def eigenvalue_count_below(T: TridiagMatrix, x) -> np.ndarray:
    """Sturm count of eigenvalues below x (scalar or array)."""
    shifts = np.atleast_1d(np.asarray(x, dtype=float))
    off2 = T.offdiag**2
    pivmin = np.finfo(float).tiny * max(1.0, float(off2.max(initial=0.0)))
    return _sturm_counts(T.diag, off2, shifts, pivmin)


def eigenvalue_count_below_exact(T: TridiagMatrix, x) -> int:
    """Exact rational Sturm count for integer-valued matrices.

    Raises ZeroDivisionError when x hits an eigenvalue of a leading principal
    minor; callers should nudge x and retry.
    """
    diag = _integer_entries(T.diag, "diag")
    off = _integer_entries(T.offdiag, "offdiag")
    x = Fraction(x)
    q = Fraction(diag[0]) - x
    if q == 0:
        raise ZeroDivisionError("x is an eigenvalue of a leading principal minor")
    count = 1 if q < 0 else 0
    for i in range(1, len(diag)):
        q = Fraction(diag[i]) - x - Fraction(off[i - 1] ** 2) / q
        if q == 0:
            raise ZeroDivisionError("x is an eigenvalue of a leading principal minor")
        if q < 0:
            count += 1
    return count


def eigenvalues(T: TridiagMatrix, rel_tol: float = DEFAULT_REL_TOL) -> Spectrum:
    """All eigenvalues of T, ascending, by Sturm-count bisection.

    Each value is accurate to about rel_tol * max(1, |lambda|); bisection is
    continued to the floating-point resolution of the enclosing interval, so
    interval counts taken at the returned values are consistent.
    """
    if not rel_tol > 0:
        raise DomainError("rel_tol must be positive")
    if not (np.all(np.isfinite(T.diag)) and np.all(np.isfinite(T.offdiag))):
        raise DomainError("matrix entries must be finite")
    n = T.n
    off2 = T.offdiag**2
    pivmin = np.finfo(float).tiny * max(1.0, float(off2.max(initial=0.0)))

    radius = np.zeros(n)
    if n > 1:
        radius[:-1] += np.abs(T.offdiag)
        radius[1:] += np.abs(T.offdiag)
    lo = np.full(n, float(np.min(T.diag - radius)))
    hi = np.full(n, float(np.max(T.diag + radius)))
    span = hi[0] - lo[0]
    lo -= 1e-3 * span + 1e-12
    hi += 1e-3 * span + 1e-12

    idx = np.arange(n)
    tol = min(rel_tol, 1e-14)
    for _ in range(220):
        mid = 0.5 * (lo + hi)
        # Stop once no interval can shrink further in floating point.
        active = (mid > lo) & (mid < hi) & (hi - lo > tol * np.maximum(1.0, np.abs(mid)) * 0.25)
        if not active.any():
            break
        counts = _sturm_counts(T.diag, off2, mid[active], pivmin)
        below = counts <= idx[active]
        sel = np.where(active)[0]
        lo[sel[below]] = mid[active][below]
        hi[sel[~below]] = mid[active][~below]
    values = 0.5 * (lo + hi)
    values = np.maximum.accumulate(values)  # enforce nondecreasing despite rounding
    simple = bool(np.all(T.offdiag != 0.0))
    return Spectrum(values=values, simple=simple)


def parity_spectra(spec: MirrorJacobiSpec, rel_tol: float = DEFAULT_REL_TOL):
    """Spectra (mu, nu) of the even/odd folds; disjoint whenever all a_j != 0."""
    return eigenvalues(fold_even(spec), rel_tol), eigenvalues(fold_odd(spec), rel_tol)


def ambiguity_threshold(values: np.ndarray, rel_tol: float) -> float:
    diameter = float(values.max() - values.min()) if values.size > 1 else 0.0
    return DEGENERACY_FACTOR * rel_tol * max(diameter, 1e-300)


def parity_signs(spec: MirrorJacobiSpec, rel_tol: float = DEFAULT_REL_TOL) -> np.ndarray:
    """Parity label (+1 even / -1 odd) of each full-matrix eigenvalue, ascending.

    Labels are assigned by matching each eigenvalue of the full matrix against
    the folded spectra; they alternate as (-1)^n sign(a_M) for nondegenerate
    real input, which callers may assert independently.
    """
    if not spec.couplings_nonzero:
        raise DegenerateInputError("parity classification requires all a_j != 0")
    lam = eigenvalues(expand(spec), rel_tol).values
    mu, nu = parity_spectra(spec, rel_tol)
    threshold = ambiguity_threshold(lam, rel_tol)
    gap = np.abs(mu.values[:, None] - nu.values[None, :]).min()
    if gap < threshold:
        raise SpectralAmbiguityError(
            f"even/odd spectra closer than {threshold:.3e} (min gap {gap:.3e}); "
            "some a_j is too close to zero"
        )
    signs = np.empty(lam.size, dtype=np.int64)
    for i, x in enumerate(lam):
        dmu = np.abs(mu.values - x).min()
        dnu = np.abs(nu.values - x).min()
        if abs(dmu - dnu) < threshold:
            raise SpectralAmbiguityError(f"eigenvalue {x!r} matches both parities")
        signs[i] = 1 if dmu < dnu else -1
    return signs


def _integer_entries(arr: np.ndarray, name: str) -> list:
    if not np.all(arr == np.rint(arr)):
        raise DomainError(f"{name} entries must be integers for the exact path")
    return [int(v) for v in np.rint(arr)]


def char_poly_exact(T: TridiagMatrix) -> list:
    """Monic characteristic polynomial det(lambda - T), exact integer coefficients.

    Returns coefficients in ascending powers, c[0] + c[1]*lambda + ... + lambda^n,
    computed with the three-term recurrence in arbitrary-precision integers.
    """
    if T.n > EXACT_CHAR_POLY_MAX_N:
        raise DomainError(f"exact characteristic polynomial capped at n = {EXACT_CHAR_POLY_MAX_N}")
    diag = _integer_entries(T.diag, "diag")
    off = _integer_entries(T.offdiag, "offdiag")
    p_prev: list = [1]  # p_0
    p_prev2: list = []  # p_{-1} = 0
    for k in range(T.n):
        # p_k = (lambda - d_k) * p_{k-1} - e_{k-1}^2 * p_{k-2}
        new = [0] * (len(p_prev) + 1)
        for i, c in enumerate(p_prev):
            new[i + 1] += c
            new[i] -= diag[k] * c
        if k > 0 and p_prev2:
            e2 = off[k - 1] ** 2
            for i, c in enumerate(p_prev2):
                new[i] -= e2 * c
        p_prev2, p_prev = p_prev, new
    return p_prev
