"""The eigenvalue product identity for mirror-symmetric Jacobi matrices.

For a 2M x 2M mirror matrix with couplings a_1..a_M, the product of all
pairwise differences between even-parity and odd-parity eigenvalues collapses
to a closed form in the couplings alone:

    prod_{m,n} (mu_m - nu_n) = (-1)^(M(M-1)/2) * (2 a_M)^M * prod_{j<M} a_j^(2j)

The left side equals the resultant of the characteristic polynomials of the
two folded blocks, which gives an exact big-integer verification path for
integer input; a floating path accumulates the product in log space from the
bisection spectra.  The module also verifies the trigonometric product
identities that pin down the constant via the free chain (a_j = -1, b_j = 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import tridiag
from .errors import DegenerateInputError, DomainError, SpectralAmbiguityError
from .tridiag import DEFAULT_REL_TOL, MirrorJacobiSpec, char_poly_exact, fold_even, fold_odd

RESULTANT_MAX_M = 64


class SignedLog(NamedTuple):
    """A nonzero real number stored as (sign, log of absolute value)."""

    sign: int
    log_abs: float

    @property
    def value(self) -> float:
        return self.sign * math.exp(self.log_abs)


@dataclass(frozen=True)
class ProductIdentityReport:
    """Floating (and, for integer input, exact) comparison of the two sides."""

    lhs_sign: int
    lhs_log_abs: float
    rhs_sign: int
    rhs_log_abs: float
    exact_match: Optional[bool]
    residual: float

    def to_dict(self) -> dict:
        return {
            "lhs_sign": self.lhs_sign,
            "lhs_log_abs": self.lhs_log_abs,
            "rhs_sign": self.rhs_sign,
            "rhs_log_abs": self.rhs_log_abs,
            "exact_match": self.exact_match,
            "residual": self.residual,
        }


def _require_nonzero_couplings(spec: MirrorJacobiSpec):
    if not spec.couplings_nonzero:
        raise DegenerateInputError(
            "a_j = 0 makes the closed form vanish; degenerate specs are reported separately"
        )


def closed_form_rhs(spec: MirrorJacobiSpec) -> SignedLog:
    """Closed form (-1)^(M(M-1)/2) (2 a_M)^M prod_{j<M} a_j^(2j) as sign + log."""
    _require_nonzero_couplings(spec)
    M = spec.M
    sign = (-1) ** (M * (M - 1) // 2)
    if spec.a[-1] < 0 and M % 2 == 1:
        sign = -sign
    log_abs = M * math.log(2.0 * abs(spec.a[-1]))
    for j in range(1, M):
        log_abs += 2 * j * math.log(abs(spec.a[j - 1]))
    return SignedLog(sign, log_abs)


def spectral_lhs(spec: MirrorJacobiSpec, rel_tol: float = DEFAULT_REL_TOL) -> SignedLog:
    """prod_{m,n} (mu_m - nu_n) from the folded spectra, in log space."""
    _require_nonzero_couplings(spec)
    mu, nu = tridiag.parity_spectra(spec, rel_tol)
    diffs = mu.values[:, None] - nu.values[None, :]
    all_values = np.concatenate([mu.values, nu.values])
    threshold = tridiag.ambiguity_threshold(all_values, rel_tol)
    min_gap = float(np.abs(diffs).min())
    if min_gap < threshold:
        raise SpectralAmbiguityError(
            f"min |mu - nu| = {min_gap:.3e} below threshold {threshold:.3e}"
        )
    negatives = int(np.count_nonzero(diffs < 0))
    sign = -1 if negatives % 2 else 1
    log_abs = float(np.sum(np.log(np.abs(diffs))))
    return SignedLog(sign, log_abs)


def _integer_spec_arrays(spec: MirrorJacobiSpec):
    if not spec.is_integer:
        raise DomainError("exact path requires integer-valued spec entries")
    return [int(v) for v in np.rint(spec.a)], [int(v) for v in np.rint(spec.b)]


def closed_form_rhs_exact(spec: MirrorJacobiSpec) -> int:
    """The closed form as an exact integer (integer specs only)."""
    a, _ = _integer_spec_arrays(spec)
    _require_nonzero_couplings(spec)
    M = spec.M
    value = (-1) ** (M * (M - 1) // 2) * (2 * a[-1]) ** M
    for j in range(1, M):
        value *= a[j - 1] ** (2 * j)
    return value


def _bareiss_det(m: list) -> int:
    """Fraction-free determinant of a square integer matrix (consumes m)."""
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i = m[i]
            row_k = m[k]
            factor = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[-1][-1]


def _sylvester(p: list, q: list) -> list:
    """Sylvester matrix of two polynomials given in ascending coefficients."""
    dp = len(p) - 1
    dq = len(q) - 1
    n = dp + dq
    rows = []
    pd = p[::-1]  # descending
    qd = q[::-1]
    for i in range(dq):
        rows.append([0] * i + pd + [0] * (n - i - dp - 1))
    for i in range(dp):
        rows.append([0] * i + qd + [0] * (n - i - dq - 1))
    return rows


def resultant_exact(spec: MirrorJacobiSpec) -> int:
    """Exact resultant of the even/odd fold characteristic polynomials.

    Equals prod_{m,n}(mu_m - nu_n) since both polynomials are monic; computed
    by fraction-free elimination on the Sylvester matrix, so no rationals ever
    appear.
    """
    _require_nonzero_couplings(spec)
    if spec.M > RESULTANT_MAX_M:
        raise DomainError(f"exact resultant capped at M = {RESULTANT_MAX_M}")
    _integer_spec_arrays(spec)  # domain check
    p_ev = char_poly_exact(fold_even(spec))
    p_od = char_poly_exact(fold_odd(spec))
    if spec.M == 0:
        return 1
    return _bareiss_det(_sylvester(p_ev, p_od))


def check_exact(spec: MirrorJacobiSpec) -> bool:
    """Exact big-integer test of the product identity; False flags a bug."""
    return resultant_exact(spec) == closed_form_rhs_exact(spec)


def report(spec: MirrorJacobiSpec, rel_tol: float = DEFAULT_REL_TOL) -> ProductIdentityReport:
    """Compare both sides in floating point, plus exactly when the spec is integer."""
    lhs = spectral_lhs(spec, rel_tol)
    rhs = closed_form_rhs(spec)
    exact: Optional[bool] = None
    if spec.is_integer and spec.M <= RESULTANT_MAX_M:
        exact = check_exact(spec)
    residual = abs(lhs.log_abs - rhs.log_abs) + (0.0 if lhs.sign == rhs.sign else 1.0)
    return ProductIdentityReport(
        lhs_sign=lhs.sign,
        lhs_log_abs=lhs.log_abs,
        rhs_sign=rhs.sign,
        rhs_log_abs=rhs.log_abs,
        exact_match=exact,
        residual=residual,
    )


# ---------------------------------------------------------------------------
# Trigonometric product identities behind the free-chain normalization.
# ---------------------------------------------------------------------------


def free_chain_product(M: int) -> SignedLog:
    """prod_{m,n<=M} [4 sin^2((2m-1)pi/(2(2M+1))) - 4 sin^2(2n pi/(2(2M+1)))]."""
    if M < 1:
        raise DomainError("M must be >= 1")
    m = np.arange(1, M + 1)
    mu = 4.0 * np.sin((2 * m - 1) * np.pi / (2 * (2 * M + 1))) ** 2
    nu = 4.0 * np.sin(2 * m * np.pi / (2 * (2 * M + 1))) ** 2
    diffs = mu[:, None] - nu[None, :]
    negatives = int(np.count_nonzero(diffs < 0))
    sign = -1 if negatives % 2 else 1
    return SignedLog(sign, float(np.sum(np.log(np.abs(diffs)))))


def free_chain_product_residual(M: int) -> float:
    """Log-domain residual of the free-chain product against 2^M (-1)^(M(M+1)/2)."""
    lhs = free_chain_product(M)
    expected_sign = (-1) ** (M * (M + 1) // 2)
    residual = abs(lhs.log_abs - M * math.log(2.0))
    if lhs.sign != expected_sign:
        residual += 1.0
    return residual


def shifted_sine_product_residual(M: int, n: int, alpha: float) -> float:
    """Residual of the (2M+1)-term shifted product against 4 cos^2(alpha(2M+1)).

    The product runs over m = 1..2M+1 of
    4 sin^2((2m-1)pi/(2(2M+1)) - alpha) - 4 sin^2(2n pi / (2(2M+1))),
    which telescopes to 4 cos^2(alpha (2M+1)) for every integer n.
    """
    if M < 1:
        raise DomainError("M must be >= 1")
    m = np.arange(1, 2 * M + 2)
    shift = 2 * n * np.pi / (2 * (2 * M + 1))
    factors = 4.0 * np.sin((2 * m - 1) * np.pi / (2 * (2 * M + 1)) - alpha) ** 2
    factors -= 4.0 * np.sin(shift) ** 2
    lhs = float(np.prod(factors))
    rhs = 4.0 * math.cos(alpha * (2 * M + 1)) ** 2
    return abs(lhs - rhs)


def cosine_product_residual(M: int) -> float:
    """Residual of prod_{k=1..M} cos(pi k / (2M+1)) against 2^(-M)."""
    if M < 1:
        raise DomainError("M must be >= 1")
    k = np.arange(1, M + 1)
    prod = float(np.prod(np.cos(np.pi * k / (2 * M + 1))))
    return abs(prod - 2.0 ** (-M))
