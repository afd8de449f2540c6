"""Trace-power entanglement invariants of bipartite pure states.

For a state with amplitude matrix A the quantities

    I_n = Tr[(A A^dag)^(n+1)],  n = 0, ..., d-1

are invariant under local unitaries.  I_0 = 1 is the normalization condition,
so a d x d state carries d-1 nontrivial invariants.  For qutrits (d = 3) two
derived quantities are used throughout:

    I1' = (3/2)(1 - I_1),  I2' = (9/8)(1 - I_2)      (both in [0, 1])
    K   = (I_2 - (3/2) I_1 + (1/2) I_0) / 3 = det(A A^dag)   (in [0, 1/27])

K equals the product of the three squared Schmidt coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadParams, DimensionMismatch, KInconsistent
from .states import BipartiteState, SchmidtVector, reduced_density_A

SQRT3 = math.sqrt(3.0)
K_MAX = 1.0 / 27.0

# The determinant cross-check guards against numerical corruption; round-off
# alone keeps the two K computations within ~1e-14 of each other.
K_CROSS_CHECK_TOL = 1e-8
K_CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class InvariantSet:
    """Invariants I_0..I_{d-1} plus the d = 3 extras.

    ``I1_prime``, ``I2_prime`` and ``K`` are populated only when d = 3.
    """

    d: int
    I: np.ndarray
    I1_prime: float | None = None
    I2_prime: float | None = None
    K: float | None = None

    def __post_init__(self) -> None:
        vals = np.array(self.I, dtype=float)
        if vals.shape != (self.d,):
            raise BadParams(f"expected {self.d} invariants, got shape {vals.shape}")
        if abs(vals[0] - 1.0) > 1e-9:
            raise BadParams(f"I_0 = {vals[0]!r} violates the normalization condition")
        vals.setflags(write=False)
        object.__setattr__(self, "I", vals)


def _invariants_from_eigenvalues(d: int, lam: np.ndarray) -> InvariantSet:
    powers = lam[None, :] ** (np.arange(1, d + 1)[:, None])
    inv = powers.sum(axis=1)
    if d != 3:
        return InvariantSet(d, inv)
    k = (inv[2] - 1.5 * inv[1] + 0.5 * inv[0]) / 3.0
    if -K_CLAMP_TOL <= k < 0.0:
        k = 0.0
    return InvariantSet(
        d,
        inv,
        I1_prime=1.5 * (1.0 - inv[1]),
        I2_prime=1.125 * (1.0 - inv[2]),
        K=k,
    )


def compute_invariants(state: BipartiteState) -> InvariantSet:
    """Invariants of a state, computed from the spectrum of A A^dag.

    A Hermitian eigensolve is used instead of repeated matrix powers for
    accuracy near degenerate spectra.  For d = 3 the K invariant is computed
    from the I_n and cross-checked against det(A A^dag); a disagreement beyond
    1e-8 signals numerical corruption and raises :class:`KInconsistent`.
    """
    rho = reduced_density_A(state)
    lam = np.linalg.eigvalsh(rho)
    result = _invariants_from_eigenvalues(state.d, lam)
    if state.d == 3:
        det = float(np.linalg.det(rho).real)
        if abs(result.K - det) > K_CROSS_CHECK_TOL:
            raise KInconsistent(
                f"K from invariants ({result.K!r}) and det rho_A ({det!r}) disagree"
            )
    return result


def invariants_from_schmidt(kappa: SchmidtVector) -> InvariantSet:
    """Invariants of a Schmidt-form state: I_n = sum_j kappa_j^(2(n+1))."""
    return _invariants_from_eigenvalues(kappa.d, kappa.kappa**2)


def invariants_from_alt_params(
    p1: float, p2: float, p3: float, theta: float
) -> tuple[float, float, float]:
    """(I_0, I_1, I_2) of the qutrit canonical form with parameters (p, theta).

    Closed forms for the upper-triangular canonical state:

        I_1 = 1 - (2/3) p1^2 - (1/2) p2^4 + (2/sqrt(3)) p1 p2^2 p3 cos(theta)
        I_2 = 1 - p1^2 + p1^6/9 - (3/4) p2^4 + sqrt(3) p1 p2^2 p3 cos(theta)

    These satisfy I_2 - (3/2) I_1 = -1/2 + p1^6/9 identically.
    """
    if min(p1, p2, p3) < -1e-12:
        raise BadParams(f"weights must be nonnegative, got ({p1}, {p2}, {p3})")
    norm2 = p1 * p1 + p2 * p2 + p3 * p3
    if abs(norm2 - 1.0) > 1e-10:
        raise BadParams(f"squared weights sum to {norm2!r}, expected 1")
    cross = p1 * p2 * p2 * p3 * math.cos(theta)
    i1 = 1.0 - (2.0 / 3.0) * p1 * p1 - 0.5 * p2**4 + (2.0 / SQRT3) * cross
    i2 = 1.0 - p1 * p1 + p1**6 / 9.0 - 0.75 * p2**4 + SQRT3 * cross
    return (1.0, i1, i2)


def k_from_schmidt(kappa: SchmidtVector) -> float:
    """Product of the squared Schmidt coefficients (d = 3 only)."""
    if kappa.d != 3:
        raise DimensionMismatch(f"K is defined for d=3, got d={kappa.d}")
    return float(np.prod(kappa.kappa**2))
