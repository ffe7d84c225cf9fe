"""Mode unitaries: optical-circuit composition, block partitioning, sampling.

Mode indices are 1-based at every public entry point (circuit elements,
JSON files) and converted to 0-based internally.

A circuit applies its elements left to right and the composed matrix is
``E_k ... E_2 E_1``.  The resulting matrix is consumed as the mode unitary
``U`` of ``c_i^dag = sum_j (U^dag)_ij a_j^dag``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

UNITARY_TOL = 1e-10


def validate_unitary(M, tol: float | None = None) -> float:
    """Max-entry residual of ``M^dag M - I``.

    ``tol`` is accepted for call-site symmetry; the caller compares the
    returned residual against it.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return float(np.max(np.abs(M.conj().T @ M - np.eye(M.shape[0]))))


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ModeUnitary:
    """n x n unitary acting on creation operators of n modes."""

    matrix: np.ndarray
    tol: float = field(default=UNITARY_TOL, compare=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        res = validate_unitary(m)
        if res > self.tol:
            raise ValueError(f"matrix is not unitary: max|U^dag U - I| = {res:.3e} > {self.tol:.1e}")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def as_matrix(U) -> np.ndarray:
    if isinstance(U, ModeUnitary):
        return U.matrix
    return np.asarray(U, dtype=complex)


# --- circuits -------------------------------------------------------------


@dataclass(frozen=True)
class BeamSplitter:
    mode_a: int
    mode_b: int
    theta: float
    phi: float = 0.0


@dataclass(frozen=True)
class PhaseShifter:
    mode: int
    phi: float


@dataclass(frozen=True)
class ModeSwap:
    mode_a: int
    mode_b: int


CircuitElement = Union[BeamSplitter, PhaseShifter, ModeSwap]


def _check_mode(m: int, n: int) -> int:
    if not (1 <= m <= n):
        raise IndexError(f"mode index {m} outside [1, {n}]")
    return m - 1


def _check_pair(a: int, b: int, n: int) -> tuple[int, int]:
    i, j = _check_mode(a, n), _check_mode(b, n)
    if i == j:
        raise ValueError(f"two-mode element needs distinct modes, got ({a}, {b})")
    return i, j


@dataclass(frozen=True)
class OpticalCircuit:
    n: int
    elements: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("mode count must be positive")
        object.__setattr__(self, "elements", tuple(self.elements))
        for el in self.elements:
            element_matrix(el, self.n)

    def __add__(self, other: "OpticalCircuit") -> "OpticalCircuit":
        if other.n != self.n:
            raise ValueError("cannot concatenate circuits on different mode counts")
        return OpticalCircuit(self.n, self.elements + other.elements)


def beam_splitter_block(theta: float, phi: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, np.exp(1j * phi) * s], [-np.exp(-1j * phi) * s, c]], dtype=complex)


def element_matrix(el: CircuitElement, n: int) -> np.ndarray:
    E = np.eye(n, dtype=complex)
    if isinstance(el, BeamSplitter):
        i, j = _check_pair(el.mode_a, el.mode_b, n)
        E[np.ix_([i, j], [i, j])] = beam_splitter_block(el.theta, el.phi)
    elif isinstance(el, PhaseShifter):
        i = _check_mode(el.mode, n)
        E[i, i] = np.exp(1j * el.phi)
    elif isinstance(el, ModeSwap):
        i, j = _check_pair(el.mode_a, el.mode_b, n)
        E[[i, j]] = E[[j, i]]
    else:
        raise TypeError(f"unknown circuit element {el!r}")
    return E


def compose_circuit(circuit: OpticalCircuit) -> ModeUnitary:
    U = np.eye(circuit.n, dtype=complex)
    for el in circuit.elements:
        U = element_matrix(el, circuit.n) @ U
    return ModeUnitary(U)


# --- block structure --------------------------------------------------------


@dataclass(frozen=True)
class BlockPartition:
    """Row blocks of U: A (first qudit modes), B (second qudit modes), D (rest)."""

    A: np.ndarray
    B: np.ndarray
    D: np.ndarray

    @property
    def d(self) -> int:
        return self.A.shape[0]

    def stacked(self) -> np.ndarray:
        return np.vstack([self.A, self.B, self.D])


def partition_blocks(U, d: int, tol: float = UNITARY_TOL) -> BlockPartition:
    U = as_matrix(U)
    n = U.shape[0]
    if d < 1 or n < 2 * d:
        raise ValueError(f"need n >= 2d, got n={n}, d={d}")
    A, B, D = U[:d], U[d : 2 * d], U[2 * d :]
    cross = np.max(np.abs(A @ B.conj().T))
    if cross > tol:
        raise ValueError(f"rows of A and B are not orthogonal: max|A B^dag| = {cross:.3e}")
    return BlockPartition(_frozen(A), _frozen(B), _frozen(D))


def swap_unitary(n: int, d: int) -> ModeUnitary:
    """Exchange the two qudit mode blocks, identity on the remaining modes."""
    if n < 2 * d:
        raise ValueError(f"need n >= 2d, got n={n}, d={d}")
    U = np.eye(n, dtype=complex)
    perm = np.r_[np.arange(d, 2 * d), np.arange(d), np.arange(2 * d, n)]
    return ModeUnitary(U[perm])


def block_diag_unitary(*blocks) -> ModeUnitary:
    from scipy.linalg import block_diag

    return ModeUnitary(block_diag(*[as_matrix(b) for b in blocks if np.size(b)]))


# --- generation -------------------------------------------------------------


def haar_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_unitary(n: int, seed=None) -> ModeUnitary:
    """Haar-random unitary (Ginibre + QR with phase-fixed R diagonal).

    ``seed`` may be an int or a ``numpy.random.Generator``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    return ModeUnitary(haar_matrix(n, np.random.default_rng(seed)))


def mesh_pairs(n: int) -> list[tuple[int, int]]:
    """0-based mode pairs of the rotation mesh, in application order."""
    return [(p, q) for p in range(n - 1) for q in range(p + 1, n)]


def parametrized_unitary(n: int, params: Sequence[float]) -> ModeUnitary:
    """Smooth surjective map from R^(n^2) onto U(n).

    Layout: ``(theta_1, phi_1, ..., theta_K, phi_K, alpha_1, ..., alpha_n)``
    with K = n(n-1)/2 rotations on the pairs of :func:`mesh_pairs`, followed
    by output phases ``diag(exp(i alpha))``.  The ordering matches a
    column-by-column Givens elimination, which is what makes every unitary
    reachable.
    """
    return ModeUnitary(parametrized_matrix(n, params))


def parametrized_matrix(n: int, params: Sequence[float]) -> np.ndarray:
    params = np.asarray(params, dtype=float).ravel()
    if params.size != n * n:
        raise ValueError(f"expected {n * n} parameters for n={n}, got {params.size}")
    U = np.eye(n, dtype=complex)
    for k, (p, q) in enumerate(mesh_pairs(n)):
        theta, phi = params[2 * k], params[2 * k + 1]
        U[[p, q]] = beam_splitter_block(theta, phi) @ U[[p, q]]
    return np.exp(1j * params[n * (n - 1) :])[:, None] * U


def neumark_unitary(vectors, tol: float = UNITARY_TOL) -> ModeUnitary:
    """Dilate a rank-1 POVM {v_i v_i^dag} on C^d to a unitary on n = len(vectors) modes.

    Rows 1..d of U carry the conjugated vectors, ``U[k, i] = conj(v_i[k])``,
    so that a single particle in mode k <= d clicks at output i with
    probability ``|<v_i|alpha>|^2``.  The remaining rows complete an
    orthonormal basis.
    """
    V = np.array([np.asarray(v, dtype=complex).ravel() for v in vectors]).T  # d x n
    d, n = V.shape
    if n < d:
        raise ValueError(f"need at least d={d} vectors, got {n}")
    res = np.max(np.abs(V @ V.conj().T - np.eye(d)))
    if res > tol:
        raise ValueError(f"POVM is not complete: max|sum v v^dag - I| = {res:.3e}")
    top = V.conj()
    # orthonormal complement of the row space of `top`
    _, _, vh = np.linalg.svd(top)
    rest = vh[d:]
    U = np.vstack([top, rest])
    return ModeUnitary(U)
