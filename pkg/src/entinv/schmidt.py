"""Schmidt decomposition with deterministic ordering and phase conventions.

The decomposition here is stated in the amplitude-matrix convention: the
returned unitaries satisfy U_A A U_B^T = diag(kappa) with kappa sorted
descending and nonnegative.  Conventions are pinned so that repeated runs on
identical input produce identical output:

* coefficients below 1e-12 are clamped to exactly 0,
* in each singular-vector pair the largest-magnitude entry of the left
  column is made real positive (the phase is pushed into the right factor),
* exactly tied singular values are ordered by a lexicographic key on the
  rounded, phase-fixed left-column entries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NumericalFailure
from .states import BipartiteState, SchmidtVector, UnitaryMatrix

COEFF_CLAMP = 1e-12
TIE_TOL = 1e-12


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Result of :func:`schmidt_decompose`: U_A A U_B^T = diag(kappa)."""

    kappa: SchmidtVector
    U_A: UnitaryMatrix
    U_B: UnitaryMatrix


def _fix_phases(u: np.ndarray, vh: np.ndarray) -> None:
    """Make the largest entry of each left column real positive, in place."""
    for k in range(u.shape[1]):
        col = u[:, k]
        i = int(np.argmax(np.abs(col)))
        pivot = col[i]
        if pivot != 0:
            phase = pivot / abs(pivot)
            u[:, k] *= phase.conjugate()
            vh[k, :] *= phase


def _tie_break(s: np.ndarray, u: np.ndarray, vh: np.ndarray):
    """Deterministically order columns within groups of tied singular values.

    The key prefers larger (real, imag) entries at earlier rows, so exactly
    diagonal inputs keep their identity singular vectors.
    """
    order = np.arange(s.size)
    start = 0
    while start < s.size:
        stop = start + 1
        while stop < s.size and s[start] - s[stop] <= TIE_TOL:
            stop += 1
        if stop - start > 1:
            keys = {
                k: tuple(
                    (-round(float(x.real), 9), -round(float(x.imag), 9))
                    for x in u[:, k]
                )
                for k in range(start, stop)
            }
            order[start:stop] = sorted(range(start, stop), key=keys.__getitem__)
        start = stop
    return s[order], u[:, order], vh[order, :]


def schmidt_decompose(state: BipartiteState) -> SchmidtDecomposition:
    """Schmidt-decompose a state via complex SVD.

    Returns coefficients sorted descending together with the local unitaries
    that map the input onto its diagonal Schmidt form.  An SVD convergence
    failure is surfaced as :class:`NumericalFailure`, never swallowed.
    """
    try:
        u, s, vh = np.linalg.svd(state.amplitudes)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    s = np.where(s < COEFF_CLAMP, 0.0, s)
    u = u.copy()
    vh = vh.copy()
    _fix_phases(u, vh)
    s, u, vh = _tie_break(s, u, vh)
    u_a = u.conj().T
    u_b = vh.conj()
    return SchmidtDecomposition(
        kappa=SchmidtVector(s),
        U_A=UnitaryMatrix(state.d, u_a),
        U_B=UnitaryMatrix(state.d, u_b),
    )


def schmidt_residual(state: BipartiteState, dec: SchmidtDecomposition) -> float:
    """max|U_A A U_B^T - diag(kappa)|, the decomposition acceptance gate."""
    if dec.U_A.d != state.d or dec.kappa.d != state.d:
        raise DimensionMismatch(
            f"decomposition is for d={dec.U_A.d}, state has d={state.d}"
        )
    recon = dec.U_A.entries @ state.amplitudes @ dec.U_B.entries.T
    return float(np.max(np.abs(recon - np.diag(dec.kappa.kappa))))
