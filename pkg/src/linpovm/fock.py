"""Brute-force two-particle Fock-space simulator.

Works directly with occupation-basis amplitudes and never touches the
block/bilinear-form machinery, so it serves as the reference for every
amplitude and normalization computed elsewhere.

Basis conventions (1-based mode pairs ``(i, j)``, ``i <= j``):

* ``i < j``: ``a_i^dag a_j^dag |0>`` for both statistics;
* ``i == j`` (bosons only): ``(a_i^dag)^2 |0> / sqrt(2)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .modes import as_matrix
from .states import BOSON, FERMION, Statistics, TwoQuditState

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True, order=True)
class OccupationBasisState:
    i: int
    j: int
    statistics: Statistics = field(default=BOSON, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "statistics", Statistics.parse(self.statistics))
        if self.i < 1 or self.j < 1:
            raise ValueError("mode indices are 1-based")
        if self.i > self.j:
            raise ValueError(f"pair must be ordered i <= j, got ({self.i}, {self.j})")
        if self.i == self.j and self.statistics is FERMION:
            raise ValueError(f"double occupation ({self.i}, {self.i}) is forbidden for fermions (Pauli exclusion)")

    @property
    def pair(self) -> tuple[int, int]:
        return (self.i, self.j)


def basis_pairs(n: int, statistics) -> list[tuple[int, int]]:
    statistics = Statistics.parse(statistics)
    lo = 0 if statistics is BOSON else 1
    return [(i, j) for i in range(1, n + 1) for j in range(i + lo, n + 1)]


@dataclass(frozen=True)
class FockVector:
    n: int
    statistics: Statistics
    amplitudes: Mapping[tuple[int, int], complex]

    def __post_init__(self):
        stats = Statistics.parse(self.statistics)
        amps = {}
        for key, amp in dict(self.amplitudes).items():
            OccupationBasisState(*key, stats)
            if key[1] > self.n:
                raise ValueError(f"pair {key} outside {self.n} modes")
            amps[tuple(key)] = complex(amp)
        object.__setattr__(self, "statistics", stats)
        object.__setattr__(self, "amplitudes", MappingProxyType(amps))

    def norm_sq(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def amplitude(self, i: int, j: int) -> complex:
        return self.amplitudes.get((i, j), 0j)


def _add_monomial(out: dict, i: int, j: int, coeff: complex, statistics: Statistics):
    """Accumulate ``coeff * c_i^dag c_j^dag |0>`` (0-based i, j) into the basis map."""
    if i == j:
        if statistics is FERMION:
            return
        key, coeff = (i + 1, i + 1), coeff * SQRT2
    elif i < j:
        key = (i + 1, j + 1)
    else:
        key, coeff = (j + 1, i + 1), coeff * statistics.sign
    out[key] = out.get(key, 0j) + coeff


def encode(state: TwoQuditState, n: int) -> FockVector:
    """Dual-rail encoding: qudit 1 in modes 1..d, qudit 2 in modes d+1..2d."""
    d = state.d
    if n < 2 * d:
        raise ValueError(f"need n >= 2d, got n={n}, d={d}")
    amps = {}
    for k in range(d):
        for l in range(d):
            if state.C[k, l] != 0:
                amps[(k + 1, d + l + 1)] = complex(state.C[k, l])
    return FockVector(n, state.statistics, amps)


def evolve(v: FockVector, U) -> FockVector:
    """Substitute ``a_p^dag = sum_i U_pi c_i^dag`` in every basis monomial."""
    U = as_matrix(U)
    if U.shape != (v.n, v.n):
        raise ValueError(f"unitary of shape {U.shape} applied to {v.n} modes")
    out: dict = {}
    for (p, q), amp in v.amplitudes.items():
        if amp == 0:
            continue
        norm = 1 / SQRT2 if p == q else 1.0
        row_p, row_q = U[p - 1], U[q - 1]
        for i in range(v.n):
            for j in range(v.n):
                _add_monomial(out, i, j, amp * norm * row_p[i] * row_q[j], v.statistics)
    return FockVector(v.n, v.statistics, out)


def detection_probabilities(v: FockVector) -> dict[tuple[int, int], float]:
    return {key: abs(a) ** 2 for key, a in v.amplitudes.items()}
