"""Triangular canonical decompositions for two qubits and two qutrits.

Every two-qubit pure state is locally equivalent to

    p1 (|00> + |11>)/sqrt(2) + p2 |01>,          p1^4 = 2(I_0 - I_1),

and every two-qutrit pure state to

    p1 (|00> + |11> + |22>)/sqrt(3)
        + p2 (|01> + |12>)/sqrt(2) + p3 e^{i theta} |02>,   p1^6 = 27 det(rho_A),

with p_i >= 0 and a single surviving phase theta.  The leading weight p1 is
itself a local-unitary invariant.  Only p1 is pinned by the invariants; the
remaining freedom is fixed by a reproducible convention: theta is restricted
to {0, pi}, preferring theta = 0, and among solutions the smaller product
weight p3 is taken.

:func:`find_local_unitaries` constructs an explicit local-unitary pair
mapping one state onto another with the same Schmidt spectrum, by composing
the two singular value decompositions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadParams,
    DimensionMismatch,
    Infeasible,
    InvariantMismatch,
    NoConvergence,
    OutOfRange,
    RefinementFailed,
)
from .extremal import i1_of_p3, p_form_bounds_for_p1
from .invariants import InvariantSet, K_MAX, compute_invariants
from .states import BipartiteState, UnitaryMatrix, make_state

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)

P3_BISECT_TOL = 1e-12
P3_BISECT_MAX_ITER = 200
FEASIBILITY_TOL = 1e-9

# Singular values closer than this are treated as one degenerate group when
# composing local-unitary maps.
DEGENERACY_TOL = 1e-8
REFINE_MAX_ITER = 500
REFINE_RESIDUAL_CAP = 1e-6


@dataclass(frozen=True)
class AltDecomposition:
    """Canonical-form parameters plus the explicitly built canonical state."""

    d: int
    p: np.ndarray
    theta: float
    canonical_state: BipartiteState

    def __post_init__(self) -> None:
        weights = np.array(self.p, dtype=float)
        weights.setflags(write=False)
        object.__setattr__(self, "p", weights)


@dataclass(frozen=True)
class LocalUnitaryMap:
    """Result of :func:`find_local_unitaries`.

    Satisfies max|U_A A U_B^T - e^{i gamma} A_target| = residual.
    """

    U_A: UnitaryMatrix
    U_B: UnitaryMatrix
    gamma: float
    residual: float


def build_alt_state(p, theta: float, d: int) -> BipartiteState:
    """Build the explicit canonical state from its parameters.

    For d = 3 the amplitude matrix is upper triangular with constant diagonal
    p1/sqrt(3), superdiagonal p2/sqrt(2), and corner entry p3 e^{i theta}.
    For d = 2 it is [[p1/sqrt(2), p2], [0, p1/sqrt(2)]]; the phase does not
    enter the two-qubit form.  The returned state is renormalized exactly.
    """
    weights = np.asarray(p, dtype=float)
    if d not in (2, 3):
        raise BadParams(f"canonical forms exist for d in {{2, 3}}, got d={d}")
    if weights.shape != (d,):
        raise BadParams(f"expected {d} weights, got shape {weights.shape}")
    if np.any(weights < -1e-12):
        raise BadParams(f"weights must be nonnegative, got {weights.tolist()}")
    norm2 = float(np.sum(weights**2))
    if abs(norm2 - 1.0) > 1e-10:
        raise BadParams(f"squared weights sum to {norm2!r}, expected 1")
    weights = np.maximum(weights, 0.0)

    a = np.zeros((d, d), dtype=complex)
    if d == 2:
        a[0, 0] = a[1, 1] = weights[0] / SQRT2
        a[0, 1] = weights[1]
    else:
        a[0, 0] = a[1, 1] = a[2, 2] = weights[0] / SQRT3
        a[0, 1] = a[1, 2] = weights[1] / SQRT2
        a[0, 2] = weights[2] * complex(math.cos(theta), math.sin(theta))
    a /= np.linalg.norm(a)
    return make_state(d, a)


def solve_p1_qubit(inv: InvariantSet) -> float:
    """Leading canonical weight for two qubits: p1 = (2(I_0 - I_1))^(1/4)."""
    if inv.d != 2:
        raise DimensionMismatch(f"expected d=2 invariants, got d={inv.d}")
    p14 = 2.0 * (inv.I[0] - inv.I[1])
    if not (-1e-10 <= p14 <= 1.0 + 1e-10):
        raise OutOfRange(f"2(I_0 - I_1) = {p14!r} lies outside [0, 1]")
    return min(1.0, max(0.0, p14)) ** 0.25


def qubit_alt_decomposition(state: BipartiteState) -> AltDecomposition:
    """Canonical decomposition of a two-qubit state."""
    if state.d != 2:
        raise DimensionMismatch(f"expected d=2, got d={state.d}")
    p1 = solve_p1_qubit(compute_invariants(state))
    p2 = math.sqrt(max(0.0, 1.0 - p1 * p1))
    weights = np.array([p1, p2])
    return AltDecomposition(2, weights, 0.0, build_alt_state(weights, 0.0, 2))


def solve_p1_qutrit(k: float) -> float:
    """Leading canonical weight for two qutrits: p1 = (27 K)^(1/6)."""
    if not (-1e-12 <= k <= K_MAX + 1e-12):
        raise OutOfRange(f"K = {k!r} lies outside [0, 1/27]")
    return (27.0 * min(K_MAX, max(0.0, k))) ** (1.0 / 6.0)


def _solve_p2_p3_theta(p1: float, target_i1: float) -> tuple[float, float, float]:
    """Solve (p2, p3, theta) with theta in {0, pi} matching the target I_1.

    The two phase branches meet at p3 = 0 and jointly sweep the full
    attainable interval: the theta = 0 curve rises from its p3 = 0 value to
    the maximum, the theta = pi curve descends to the minimum.  Each branch
    is monotone between p3 = 0 and its stationary weight, so bisection
    applies; the branch choice prefers theta = 0, and bisecting the rising
    segment selects the smaller admissible p3.
    """
    if p1 >= 1.0 - 1e-12:
        if abs(target_i1 - 1.0 / 3.0) > FEASIBILITY_TOL:
            raise Infeasible(
                f"p1 = 1 forces I_1 = 1/3, got target {target_i1!r}"
            )
        return 0.0, 0.0, 0.0

    bounds = p_form_bounds_for_p1(p1)
    if not (
        bounds.I1_min - FEASIBILITY_TOL
        <= target_i1
        <= bounds.I1_max + FEASIBILITY_TOL
    ):
        raise Infeasible(
            f"target I_1 = {target_i1!r} outside attainable "
            f"[{bounds.I1_min!r}, {bounds.I1_max!r}] at p1 = {p1!r}"
        )
    target = min(bounds.I1_max, max(bounds.I1_min, target_i1))
    p3_cap = math.sqrt(max(0.0, 1.0 - p1 * p1))

    value_at_zero = i1_of_p3(p1, 0.0, 1.0)  # theta-independent at p3 = 0
    if target >= value_at_zero:
        cos_theta, theta = 1.0, 0.0
        hi = min(bounds.p3_argmax, p3_cap)
        orient = 1.0  # I_1 increases with p3 on this segment
    else:
        cos_theta, theta = -1.0, math.pi
        hi = min(bounds.p3_argmin, p3_cap)
        orient = -1.0

    lo = 0.0
    iterations = 0
    while hi - lo > P3_BISECT_TOL:
        if iterations >= P3_BISECT_MAX_ITER:
            raise NoConvergence(
                f"p3 bisection did not reach {P3_BISECT_TOL} in "
                f"{P3_BISECT_MAX_ITER} iterations"
            )
        mid = 0.5 * (lo + hi)
        if orient * (i1_of_p3(p1, mid, cos_theta) - target) < 0.0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    p3 = 0.5 * (lo + hi)
    p2 = math.sqrt(max(0.0, 1.0 - p1 * p1 - p3 * p3))
    return p2, p3, theta


def solve_p2_theta(p1: float, target_i1: float) -> tuple[float, float]:
    """Remaining canonical weight and phase reproducing the target I_1."""
    p2, _, theta = _solve_p2_p3_theta(p1, target_i1)
    return p2, theta


def qutrit_alt_decomposition(state: BipartiteState) -> AltDecomposition:
    """Canonical decomposition of a two-qutrit state.

    Composes the invariant computation, the sixth-root solve for p1, and the
    bisection solve for (p2, p3, theta), then builds the canonical state.
    The canonical state reproduces the input invariants to ~1e-12.
    """
    if state.d != 3:
        raise DimensionMismatch(f"expected d=3, got d={state.d}")
    inv = compute_invariants(state)
    p1 = solve_p1_qutrit(inv.K)
    p2, p3, theta = _solve_p2_p3_theta(p1, float(inv.I[1]))
    weights = np.array([p1, p2, p3])
    return AltDecomposition(3, weights, theta, build_alt_state(weights, theta, 3))


def _phase_align(candidate: np.ndarray, target: np.ndarray) -> tuple[float, float]:
    """Global phase from the largest-magnitude target entry, plus residual."""
    idx = np.unravel_index(int(np.argmax(np.abs(target))), target.shape)
    gamma = float(np.angle(candidate[idx]) - np.angle(target[idx]))
    residual = float(np.max(np.abs(candidate - np.exp(1j * gamma) * target)))
    return gamma, residual


def _degenerate_groups(s: np.ndarray) -> list[range]:
    groups = []
    start = 0
    for i in range(1, s.size + 1):
        if i == s.size or s[i - 1] - s[i] > DEGENERACY_TOL:
            if i - start > 1:
                groups.append(range(start, i))
            start = i
    return groups


def find_local_unitaries(
    source: BipartiteState, target: BipartiteState
) -> LocalUnitaryMap:
    """Construct (U_A, U_B, gamma) with U_A A U_B^T = e^{i gamma} A_target.

    Requires the two Schmidt spectra to agree within 1e-8 (states with equal
    spectra are exactly the locally equivalent ones); otherwise raises
    :class:`InvariantMismatch`.  The construction composes the two singular
    value decompositions, which is exact up to the spectral mismatch.  When
    the spectrum has degenerate groups and the direct residual is poor, a
    bounded alternating refinement over the residual block freedom is run;
    if it cannot reach 1e-6 the achieved residual is reported via
    :class:`RefinementFailed`, never silently accepted.
    """
    if source.d != target.d:
        raise DimensionMismatch(f"d={source.d} versus d={target.d}")
    a_s = source.amplitudes
    a_t = target.amplitudes
    u1, s1, v1h = np.linalg.svd(a_s)
    u2, s2, v2h = np.linalg.svd(a_t)
    gap = float(np.max(np.abs(s1 - s2)))
    if gap > DEGENERACY_TOL:
        raise InvariantMismatch(
            f"Schmidt spectra differ by {gap:.3e}; states are not locally equivalent"
        )

    u_a = u2 @ u1.conj().T
    u_bt = v1h.conj().T @ v2h
    gamma, residual = _phase_align(u_a @ a_s @ u_bt, a_t)

    groups = _degenerate_groups(s1)
    if groups and residual > 1e-9:
        u_a, u_bt, gamma, residual = _refine_degenerate(
            a_s, a_t, u1, s1, v1h, u2, v2h, groups, u_a, u_bt, gamma, residual
        )
        if residual > REFINE_RESIDUAL_CAP:
            raise RefinementFailed(
                f"degenerate-spectrum refinement stalled at residual {residual:.3e}",
                residual,
            )
    return LocalUnitaryMap(
        U_A=UnitaryMatrix(source.d, u_a),
        U_B=UnitaryMatrix(source.d, u_bt.T),
        gamma=gamma,
        residual=residual,
    )


def _refine_degenerate(
    a_s, a_t, u1, s1, v1h, u2, v2h, groups, u_a, u_bt, gamma, residual
):
    """Alternate phase alignment with per-group eigenbasis alignment.

    Inserting a block unitary W (supported on the degenerate groups) into the
    source SVD maps the candidate to U_2 W diag(s1) W^dag V_2h, so the best W
    aligns W diag(s1) W^dag with the Hermitian part of the target expressed
    in the SVD frame.  Improvements are accepted greedily.
    """
    best = (u_a, u_bt, gamma, residual)
    w = np.eye(s1.size, dtype=complex)
    for _ in range(REFINE_MAX_ITER):
        frame = u2.conj().T @ (np.exp(-1j * best[2]) * a_t) @ v2h.conj().T
        herm = 0.5 * (frame + frame.conj().T)
        w_new = np.eye(s1.size, dtype=complex)
        for grp in groups:
            block = herm[np.ix_(grp, grp)]
            _, vecs = np.linalg.eigh(block)
            w_new[np.ix_(grp, grp)] = vecs[:, ::-1]  # descending, matching s1
        if np.allclose(w_new, w, atol=1e-15):
            break
        w = w_new
        u_a_try = u2 @ w @ u1.conj().T
        u_bt_try = v1h.conj().T @ w.conj().T @ v2h
        gamma_try, residual_try = _phase_align(u_a_try @ a_s @ u_bt_try, a_t)
        if residual_try < best[3]:
            best = (u_a_try, u_bt_try, gamma_try, residual_try)
        else:
            break
    return best
