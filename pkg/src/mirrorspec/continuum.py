"""Continuum probe: Dirichlet interval with a delta interface at the midpoint.

The pair of operators -d^2/dz^2 +- A delta(z - pi/2) on [0, pi] with
Dirichlet ends splits by parity about the midpoint.  Odd states vanish at the
interface and keep the free energies (2m)^2 for either sign; even states
satisfy a scalar matching condition obtained from the derivative jump
psi'(pi/2+) - psi'(pi/2-) = +- A psi(pi/2).  With psi = sin(kz) mirrored
evenly, the condition reads

    2 k cos(k pi/2) + s A sin(k pi/2) = 0,        energy = k^2,

with one root per free gap; for the attractive sign and A > 4/pi the lowest
even state dives below zero and the root moves to the hyperbolic branch
2 kappa cosh(kappa pi/2) = A sinh(kappa pi/2) with energy -kappa^2.

The regularized double products over (even - odd) energy differences are then
compared between the two signs, normalizing each factor by a free-spectrum
difference.  The free-difference pairing is computed both ways (matching
even energies to odd-index free values, and the transposed reading) because
only one of them can make the products converge factor-by-factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DegenerateInputError, DomainError

# Attractive coupling at which the lowest even state reaches zero energy.
CRITICAL_STRENGTH = 4.0 / math.pi


@dataclass(frozen=True)
class ContinuumSpectra:
    """Truncated parity-resolved spectrum of one interface operator."""

    strength: float
    sign: int
    mu: np.ndarray  # even-parity energies, ascending
    nu: np.ndarray  # odd-parity energies, ascending (free: (2m)^2)
    count: int

    def __post_init__(self):
        for name in ("mu", "nu"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def _even_matching(k: float, strength: float, sign: int) -> float:
    return 2.0 * k * math.cos(k * math.pi / 2.0) + sign * strength * math.sin(k * math.pi / 2.0)


def _hyperbolic_matching(kappa: float, strength: float) -> float:
    return 2.0 * kappa * math.cosh(kappa * math.pi / 2.0) - strength * math.sinh(kappa * math.pi / 2.0)


def _ground_even_energy(strength: float) -> float:
    """Lowest even energy of the attractive operator, any strength > 0."""
    if abs(strength - CRITICAL_STRENGTH) < 1e-13:
        return 0.0
    if strength < CRITICAL_STRENGTH:
        k = brentq(_even_matching, 1e-12, 1.0 - 1e-12, args=(strength, -1), xtol=1e-14, rtol=8.9e-16)
        return k * k
    hi = max(strength, 1.0)
    while _hyperbolic_matching(hi, strength) <= 0.0:
        hi *= 2.0
        if hi > 1e8:
            raise ConvergenceError("no hyperbolic bracket found for the ground state")
    kappa = brentq(_hyperbolic_matching, 1e-12, hi, args=(strength,), xtol=1e-14, rtol=8.9e-16)
    return -kappa * kappa


def delta_spectra(strength: float, sign: int, count: int) -> ContinuumSpectra:
    """First `count` even and odd energies of -d^2 + sign*A*delta at strength A.

    Even roots are bracketed between consecutive free levels and solved to
    about 1e-12; odd energies are exactly (2m)^2, independent of the
    interface.
    """
    if not strength > 0.0:
        raise DomainError("strength must be positive")
    if sign not in (-1, 1):
        raise DomainError("sign must be +1 or -1")
    if count < 1:
        raise DomainError("count must be >= 1")
    m = np.arange(1, count + 1)
    nu = (2.0 * m) ** 2
    mu = np.empty(count)
    for i, mm in enumerate(m):
        if sign == 1:
            lo, hi = 2 * mm - 1, 2 * mm
        else:
            if mm == 1:
                mu[0] = _ground_even_energy(strength)
                continue
            lo, hi = 2 * mm - 2, 2 * mm - 1
        k = brentq(
            _even_matching,
            lo + 1e-12,
            hi - 1e-12,
            args=(strength, sign),
            xtol=1e-14,
            rtol=8.9e-16,
        )
        mu[i] = k * k
    return ContinuumSpectra(strength=strength, sign=sign, mu=mu, nu=nu, count=count)


@dataclass(frozen=True)
class PairingGap:
    """Log-space comparison of the two regularized products for one pairing.

    tail_deviation measures how far the outermost factors of the left product
    sit from 1; an infinite double product only converges when this decays,
    which is what singles out the pairing that actually carries the identity
    (under a square cutoff the two pairings give the same magnitudes, being
    negative transposes of each other, so the gap alone cannot tell them
    apart).
    """

    lhs_sign: int
    lhs_log: float
    rhs_sign: int
    rhs_log: float
    gap: float
    tail_deviation: float

    def to_dict(self) -> dict:
        return {
            "lhs_sign": self.lhs_sign,
            "lhs_log": self.lhs_log,
            "rhs_sign": self.rhs_sign,
            "rhs_log": self.rhs_log,
            "gap": self.gap,
            "tail_deviation": self.tail_deviation,
        }


def _signed_log_product(values: np.ndarray):
    if float(np.abs(values).min()) == 0.0:
        raise DegenerateInputError("zero factor in the spectral product")
    negatives = int(np.count_nonzero(values < 0))
    sign = -1 if negatives % 2 else 1
    return sign, float(np.sum(np.log(np.abs(values))))


def spectral_product_gap(strength: float, count: int) -> Dict[str, PairingGap]:
    """Compare the truncated products between the two interface signs.

    For each free-difference pairing D, forms
      lhs = prod (mu+_m - nu_n) / D_mn   and   rhs = prod D_mn / (mu-_m - nu_n)
    over m, n <= count in log space, and reports gap = |lhs/rhs - 1|.  The
    "parity" pairing D_mn = (2m-1)^2 - (2n)^2 matches each even energy to its
    own zero-strength limit; "transposed" is the index-swapped alternative
    D_mn = (2m)^2 - (2n-1)^2.  Only the pairing whose gap shrinks with count
    carries the identity.
    """
    if not 0.1 <= strength <= 10.0:
        raise DomainError("strength must lie in [0.1, 10]")
    if count < 10:
        raise DomainError("count must be >= 10")
    plus = delta_spectra(strength, +1, count)
    minus = delta_spectra(strength, -1, count)
    m = np.arange(1, count + 1, dtype=float)
    n = np.arange(1, count + 1, dtype=float)
    diff_plus = plus.mu[:, None] - plus.nu[None, :]
    diff_minus = minus.mu[:, None] - minus.nu[None, :]
    pairings = {
        "parity": (2 * m[:, None] - 1) ** 2 - (2 * n[None, :]) ** 2,
        "transposed": (2 * m[:, None]) ** 2 - (2 * n[None, :] - 1) ** 2,
    }
    out: Dict[str, PairingGap] = {}
    for name, denom in pairings.items():
        factors = diff_plus / denom
        ls, ll = _signed_log_product(factors)
        rs, rl = _signed_log_product(denom / diff_minus)
        ratio = (ls * rs) * math.exp(ll - rl)
        edge = np.concatenate([factors[-1, :], factors[:, -1]])
        out[name] = PairingGap(
            lhs_sign=ls,
            lhs_log=ll,
            rhs_sign=rs,
            rhs_log=rl,
            gap=abs(ratio - 1.0),
            tail_deviation=float(np.abs(edge - 1.0).max()),
        )
    return out


def converging_pairing(strength: float, counts) -> str:
    """Name of the pairing whose outer factors approach 1 along the counts."""
    counts = sorted(counts)
    tails = {name: [] for name in ("parity", "transposed")}
    for n in counts:
        for name, res in spectral_product_gap(strength, n).items():
            tails[name].append(res.tail_deviation)
    for name, seq in tails.items():
        if all(b < a for a, b in zip(seq, seq[1:])) and seq[-1] < 0.5:
            return name
    # fall back to whichever ends with the smallest deviation
    return min(tails, key=lambda name: tails[name][-1])
