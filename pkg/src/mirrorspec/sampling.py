"""Documented random generators for the property sweeps.

Exact sweeps draw integer couplings uniformly from [-9, 9] without 0 and
integer diagonals from [-9, 9]; floating sweeps draw reals from [-2, 2] with
couplings bounded away from zero by 0.1.  Potentials are drawn uniformly and
rescaled until admissible.  Everything is a pure function of the supplied
generator, so a fixed seed reproduces a sweep entry by entry.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError
from .scattering import Potential, jost_polynomial
from .tridiag import MirrorJacobiSpec


def integer_spec(rng: np.random.Generator, M: int) -> MirrorJacobiSpec:
    """Integer spec with couplings in [-9, 9] \\ {0} and diagonals in [-9, 9]."""
    a = rng.integers(1, 10, M) * rng.choice([-1.0, 1.0], M)
    b = rng.integers(-9, 10, M).astype(float)
    return MirrorJacobiSpec(M=M, a=a, b=b)


def real_spec(rng: np.random.Generator, M: int) -> MirrorJacobiSpec:
    """Real spec in [-2, 2] with |a_j| >= 0.1 (rejection on the couplings)."""
    a = np.empty(M)
    for j in range(M):
        x = rng.uniform(-2.0, 2.0)
        while abs(x) < 0.1:
            x = rng.uniform(-2.0, 2.0)
        a[j] = x
    b = rng.uniform(-2.0, 2.0, M)
    return MirrorJacobiSpec(M=M, a=a, b=b)


def admissible_potential(
    rng: np.random.Generator,
    max_support: int = 6,
    amplitude: float = 1.0,
    min_margin: float = 0.0,
    max_tries: int = 60,
) -> Potential:
    """Random admissible potential with support <= max_support.

    Draws uniform values of the given amplitude and shrinks by 0.7 until the
    Jost polynomial is admissible; the last entry is kept away from zero so
    the stated support is tight.  min_margin > 0 additionally keeps every
    root at radius > 1 + min_margin, which bounds the phase slope and lets
    fixed quadrature budgets converge (barely admissible draws have roots
    arbitrarily close to the circle).
    """
    J = int(rng.integers(1, max_support + 1))
    v = rng.uniform(-1.0, 1.0, J)
    if abs(v[-1]) < 0.2:
        v[-1] = 0.2 * (1.0 if v[-1] >= 0 else -1.0)
    scale = amplitude
    for _ in range(max_tries):
        pot = Potential(v=v * scale)
        if pot.J == J:
            jost = jost_polynomial(pot)
            radius = float(np.abs(jost.roots).min()) if jost.roots.size else np.inf
            if jost.admissible and radius > 1.0 + min_margin:
                return pot
        scale *= 0.7
    raise ConvergenceError("failed to draw an admissible potential")
