"""Bipartite pure states, local unitary action, and deterministic sampling.

A pure state of two d-level systems is stored as the d x d complex matrix of
amplitudes: entry (i, j) is the coefficient of |i>_A |j>_B.  A local unitary
pair acts on the amplitude matrix as A -> U_A A U_B^T, which is the matrix
form of (U_A tensor U_B)|psi>.

All types are immutable values and all operations are pure functions, so
concurrent use needs no locking.  Every sampler takes its own seed; there is
no shared random-number state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import BadShape, DimensionMismatch, NotNormalized

# Text-serialized inputs are accepted with a looser norm tolerance than the
# one internally constructed objects are held to.
NORM_TOL_INGEST = 1e-9
NORM_TOL_INTERNAL = 1e-12
UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class BipartiteState:
    """Pure state of two d-level systems.

    Attributes
    ----------
    d : int
        Local dimension (at least 2).
    amplitudes : np.ndarray
        d x d complex matrix; entry (i, j) is the coefficient of |i>_A |j>_B.
        Squared magnitudes sum to one.  The array is read-only.
    """

    d: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.amplitudes, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise BadShape(f"amplitude matrix must be square, got shape {a.shape}")
        if self.d < 2:
            raise BadShape(f"local dimension must be at least 2, got {self.d}")
        if a.shape[0] != self.d:
            raise BadShape(f"matrix shape {a.shape} does not match d={self.d}")
        norm2 = float(np.sum(np.abs(a) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL_INGEST:
            raise NotNormalized(
                f"squared amplitudes sum to {norm2!r}, expected 1 within {NORM_TOL_INGEST}"
            )
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)


@dataclass(frozen=True)
class UnitaryMatrix:
    """A d x d unitary, validated to ``max|U U^dag - 1| <= 1e-10``."""

    d: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        u = np.array(self.entries, dtype=complex)
        if u.ndim != 2 or u.shape != (self.d, self.d):
            raise BadShape(f"expected a {self.d} x {self.d} matrix, got shape {u.shape}")
        dev = float(np.max(np.abs(u @ u.conj().T - np.eye(self.d))))
        if dev > UNITARY_TOL:
            raise BadShape(f"matrix is not unitary: max|U U^dag - 1| = {dev:.3e}")
        u.setflags(write=False)
        object.__setattr__(self, "entries", u)


@dataclass(frozen=True)
class SchmidtVector:
    """Schmidt coefficients, sorted descending, nonnegative, unit 2-norm."""

    kappa: np.ndarray

    def __post_init__(self) -> None:
        k = np.array(self.kappa, dtype=float)
        if k.ndim != 1 or k.size < 2:
            raise BadShape(f"expected a vector of length >= 2, got shape {k.shape}")
        if np.any(k < 0):
            raise NotNormalized("Schmidt coefficients must be nonnegative")
        if np.any(np.diff(k) > 0):
            raise NotNormalized("Schmidt coefficients must be sorted descending")
        total = float(np.sum(k**2))
        if abs(total - 1.0) > NORM_TOL_INTERNAL:
            raise NotNormalized(f"squared coefficients sum to {total!r}, expected 1")
        k.setflags(write=False)
        object.__setattr__(self, "kappa", k)

    @property
    def d(self) -> int:
        return int(self.kappa.size)


def make_state(d: int, amplitudes) -> BipartiteState:
    """Validate and wrap an amplitude matrix.

    The matrix is never renormalized: amplitudes whose squared magnitudes do
    not sum to one within 1e-9 are rejected with :class:`NotNormalized`.
    """
    return BipartiteState(d, np.asarray(amplitudes, dtype=complex))


def basis_state(d: int, i: int, j: int) -> BipartiteState:
    """Product basis state |i>_A |j>_B."""
    a = np.zeros((d, d), dtype=complex)
    a[i, j] = 1.0
    return BipartiteState(d, a)


def maximally_entangled_state(d: int) -> BipartiteState:
    """The state (|00> + |11> + ... + |d-1,d-1>)/sqrt(d)."""
    return BipartiteState(d, np.eye(d, dtype=complex) / np.sqrt(d))


def reduced_density_A(state: BipartiteState) -> np.ndarray:
    """Reduced density matrix of subsystem A, equal to A A^dag.

    The result is Hermitian, positive semidefinite, and has unit trace.
    """
    a = state.amplitudes
    return a @ a.conj().T


def apply_local_unitaries(
    state: BipartiteState, u_a: UnitaryMatrix, u_b: UnitaryMatrix
) -> BipartiteState:
    """Apply U_A tensor U_B, i.e. map the amplitude matrix to U_A A U_B^T.

    The output is renormalized exactly (the correction is at round-off level
    for genuinely unitary inputs).
    """
    if u_a.d != state.d or u_b.d != state.d:
        raise DimensionMismatch(
            f"state has d={state.d} but unitaries have d={u_a.d}, {u_b.d}"
        )
    a = u_a.entries @ state.amplitudes @ u_b.entries.T
    a = a / np.linalg.norm(a)
    return BipartiteState(state.d, a)


def random_haar_state(d: int, seed) -> BipartiteState:
    """Haar-uniform random pure state, deterministic for a fixed seed.

    Amplitudes are i.i.d. standard complex Gaussians normalized to the unit
    sphere, which is exactly the Haar (Fubini-Study) measure.
    """
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    z /= np.linalg.norm(z)
    return BipartiteState(d, z)


def random_schmidt_vector(d: int, seed) -> SchmidtVector:
    """Random Schmidt vector with squared coefficients uniform on the simplex.

    Uses the exponential-normalization (flat Dirichlet) construction, then
    sorts descending.  Deterministic for a fixed seed.
    """
    rng = np.random.default_rng(seed)
    w = rng.standard_exponential(d)
    w /= w.sum()
    w[::-1].sort()
    return SchmidtVector(np.sqrt(w))


def random_unitary(d: int, seed) -> UnitaryMatrix:
    """Haar-random d x d unitary via the phase-fixed QR construction."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    q = q * (diag / np.abs(diag))
    return UnitaryMatrix(d, q)


# ---------------------------------------------------------------------------
# JSON serialization.
#
# State schema: {"d": <int>, "amplitudes": [[[re, im], ...], ...]} with row
# index = subsystem-A basis index and column index = subsystem-B basis index.
# Floats are emitted with Python's shortest round-trip repr, which preserves
# every bit of an IEEE double (the information content of 17 significant
# digits).


def complex_matrix_to_lists(m: np.ndarray) -> list:
    """Encode a complex matrix as nested [re, im] pairs."""
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(m)]


def complex_matrix_from_lists(data) -> np.ndarray:
    """Decode nested [re, im] pairs into a complex matrix."""
    try:
        m = np.asarray(
            [[complex(entry[0], entry[1]) for entry in row] for row in data],
            dtype=complex,
        )
    except (TypeError, IndexError, ValueError) as exc:
        raise BadShape(f"malformed complex-matrix payload: {exc}") from exc
    return m


def state_to_json(state: BipartiteState, pretty: bool = False) -> str:
    """Serialize a state to its JSON wire format."""
    obj = {"d": state.d, "amplitudes": complex_matrix_to_lists(state.amplitudes)}
    if pretty:
        return json.dumps(obj, indent=2)
    return json.dumps(obj)


def state_from_json(text: str) -> BipartiteState:
    """Parse the JSON wire format back into a validated state."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadShape(f"not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "d" not in obj or "amplitudes" not in obj:
        raise BadShape('state JSON must be an object with "d" and "amplitudes"')
    return make_state(int(obj["d"]), complex_matrix_from_lists(obj["amplitudes"]))


def read_state_file(path) -> BipartiteState:
    """Load a state from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_json(fh.read())
