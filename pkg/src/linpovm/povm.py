"""POVMs induced on one or two dual-rail qudits by a mode unitary and detectors.

For two qudits with ``A``, ``B`` the first and second ``d`` rows of ``U``,
the click pattern ``(i, j)`` has rank-1 element ``F^ij = |P^ij><P^ij|`` with

    P^ij = A^* (|i><j| +- |j><i|) B^dag = a_i b_j^T +- a_j b_i^T,

``a_i``/``b_i`` the i-th columns of ``A^*``/``B^*``, ``+`` for bosons and
``-`` for fermions.  Bosonic double clicks ``(i, i)`` carry an extra
``1/sqrt(2)``; fermionic double clicks do not occur.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fock
from .modes import ModeUnitary, as_matrix, partition_blocks
from .states import BOSON, FERMION, Statistics, TwoQuditState

NULL_TOL = 1e-12
COMPLETENESS_TOL = 1e-10


@dataclass(frozen=True, order=True)
class ClickPattern:
    """Detector pair (1-based), ``i <= j``."""

    i: int
    j: int

    def __post_init__(self):
        if not (1 <= self.i <= self.j):
            raise ValueError(f"click pattern must satisfy 1 <= i <= j, got ({self.i}, {self.j})")

    @property
    def double_click(self) -> bool:
        return self.i == self.j

    def __iter__(self):
        return iter((self.i, self.j))


@dataclass(frozen=True)
class PovmElement:
    pattern: ClickPattern
    P: np.ndarray = field(repr=False)
    statistics: Statistics = BOSON

    def __post_init__(self):
        if self.pattern.double_click and self.statistics is FERMION:
            raise ValueError("fermions cannot produce double clicks (Pauli exclusion)")
        P = np.array(self.P, dtype=complex)
        P.setflags(write=False)
        object.__setattr__(self, "P", P)

    @property
    def d(self) -> int:
        return self.P.shape[0]

    @property
    def weight(self) -> float:
        """``<P|P> = Tr F``."""
        return float(np.real(np.vdot(self.P, self.P)))

    @property
    def is_null(self) -> bool:
        return bool(np.sqrt(self.weight) < NULL_TOL)

    def operator(self) -> np.ndarray:
        """``F = |P><P|`` as a d^2 x d^2 matrix (row-major product basis)."""
        p = self.P.reshape(-1)
        return np.outer(p, p.conj())


@dataclass(frozen=True)
class SingleQuditPovm:
    vectors: np.ndarray  # shape (n, d): row i is v_i

    def __post_init__(self):
        V = np.array(self.vectors, dtype=complex)
        V.setflags(write=False)
        object.__setattr__(self, "vectors", V)

    def elements(self) -> np.ndarray:
        return np.einsum("ik,il->ikl", self.vectors, self.vectors.conj())

    def completeness_residual(self) -> float:
        d = self.vectors.shape[1]
        return float(np.max(np.abs(self.elements().sum(axis=0) - np.eye(d))))


def single_qudit_povm(U, d: int) -> SingleQuditPovm:
    """One particle in modes 1..d: click at output i has ``F^i = |v_i><v_i|``, ``v_i = conj(U[:d, i])``."""
    U = as_matrix(U)
    n = U.shape[0]
    if n < d:
        raise ValueError(f"need n >= d, got n={n}, d={d}")
    return SingleQuditPovm(U[:d].conj().T)


def click_patterns(n: int, statistics) -> list[ClickPattern]:
    return [ClickPattern(i, j) for i, j in fock.basis_pairs(n, statistics)]


def element_matrices(U, d: int, statistics) -> tuple[list[ClickPattern], np.ndarray]:
    """All P^ij stacked as an array of shape (patterns, d, d)."""
    statistics = Statistics.parse(statistics)
    blocks = partition_blocks(U, d)
    a, b = blocks.A.conj(), blocks.B.conj()  # columns a_i, b_i
    n = a.shape[1]
    patterns = click_patterns(n, statistics)
    ii = np.array([p.i - 1 for p in patterns])
    jj = np.array([p.j - 1 for p in patterns])
    ai, aj = a[:, ii].T, a[:, jj].T
    bi, bj = b[:, ii].T, b[:, jj].T
    P = np.einsum("pk,pl->pkl", ai, bj) + statistics.sign * np.einsum("pk,pl->pkl", aj, bi)
    P[ii == jj] /= np.sqrt(2)
    return patterns, P


def povm_elements(U, d: int, statistics) -> list[PovmElement]:
    statistics = Statistics.parse(statistics)
    patterns, P = element_matrices(U, d, statistics)
    return [PovmElement(pat, Pk, statistics) for pat, Pk in zip(patterns, P)]


def outcome_probability(element: PovmElement, state: TwoQuditState) -> float:
    """``|<P|C>|^2 = Tr(|C><C| F)``."""
    if element.d != state.d:
        raise ValueError(f"dimension mismatch: element d={element.d}, state d={state.d}")
    if element.statistics is not state.statistics:
        raise ValueError("element and state have different particle statistics")
    return float(abs(np.vdot(element.P, state.C)) ** 2)


def completeness_check(elements, d: int) -> float:
    """Max-entry residual of ``sum |P><P| - I_{d^2}``."""
    total = np.zeros((d * d, d * d), dtype=complex)
    for el in elements:
        total += el.operator()
    return float(np.max(np.abs(total - np.eye(d * d))))


def formula_probabilities(U, state: TwoQuditState) -> dict[tuple[int, int], float]:
    patterns, P = element_matrices(U, state.d, state.statistics)
    amps = np.einsum("pkl,kl->p", P.conj(), state.C)
    return {(p.i, p.j): float(abs(a) ** 2) for p, a in zip(patterns, amps)}


def oracle_crosscheck(U, state: TwoQuditState, statistics=None) -> float:
    """Max |formula - Fock oracle| detection probability over all click patterns."""
    if statistics is not None:
        statistics = Statistics.parse(statistics)
        if statistics is not state.statistics:
            state = TwoQuditState(state.C, statistics)
    Um = as_matrix(U)
    formula = formula_probabilities(Um, state)
    oracle = fock.detection_probabilities(fock.evolve(fock.encode(state, Um.shape[0]), Um))
    keys = set(formula) | set(oracle)
    return max(abs(formula.get(k, 0.0) - oracle.get(k, 0.0)) for k in keys)
