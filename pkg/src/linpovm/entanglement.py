"""Schmidt analysis of click elements, maximal-entanglement classification,
Bell-state discrimination and the maximally-entangled success probability."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .modes import as_matrix, partition_blocks
from .povm import PovmElement, outcome_probability, povm_elements
from .states import Statistics, TwoQuditState, bell_basis

RANK_TOL = 1e-9
ME_TOL = 1e-7
IMPOSSIBLE_TOL = 1e-10


@dataclass(frozen=True)
class SchmidtData:
    singular_values: np.ndarray
    numerical_rank: int


@dataclass(frozen=True)
class MEClassification:
    is_me: bool
    kappa: float = 0.0
    spread: float = float("nan")


def schmidt(P, rel_tol: float = RANK_TOL) -> SchmidtData:
    s = np.linalg.svd(np.asarray(P, dtype=complex), compute_uv=False)
    if s[0] == 0:
        raise ValueError("Schmidt data of a zero matrix is undefined")
    rank = int(np.sum(s > rel_tol * s[0]))
    s.setflags(write=False)
    return SchmidtData(s, rank)


def is_maximally_entangled(P, rel_tol: float = ME_TOL) -> MEClassification:
    """ME iff P is proportional to a unitary, i.e. all singular values agree.

    ``spread = (s_1 - s_d) / s_1``; ``kappa = s_1`` when ME.
    """
    s = np.linalg.svd(np.asarray(P, dtype=complex), compute_uv=False)
    if s[0] <= 0:
        return MEClassification(False)
    spread = float((s[0] - s[-1]) / s[0])
    if spread <= rel_tol:
        return MEClassification(True, float(s[0]), spread)
    return MEClassification(False, 0.0, spread)


def _non_null(elements):
    return [el for el in elements if not el.is_null]


def me_success_probability(elements, d: int, rel_tol: float = ME_TOL) -> float:
    """Probability that ``rho = I/d^2`` lands on a maximally entangled element."""
    return float(sum(el.weight for el in _non_null(elements)
                     if is_maximally_entangled(el.P, rel_tol).is_me) / d**2)


def me_success_from_matrices(P: np.ndarray, rel_tol: float = ME_TOL) -> float:
    """Vectorized :func:`me_success_probability` on a stack of P matrices."""
    d = P.shape[-1]
    s = np.linalg.svd(P, compute_uv=False)
    live = s[:, 0] >= 1e-12
    spread = np.where(live, (s[:, 0] - s[:, -1]) / np.where(live, s[:, 0], 1.0), np.inf)
    me = live & (spread <= rel_tol)
    return float(np.sum(s[me] ** 2) / d**2)


@dataclass(frozen=True)
class DetectorShare:
    mode: int
    total: float
    maximally_entangled: float
    bound: float  # (|a_i|^2 + |b_i|^2) / (2 d^2)


def detector_contributions(U, elements, d: int, rel_tol: float = ME_TOL) -> list[DetectorShare]:
    """Split each element's weight ``<P|P>/d^2`` between its two detectors.

    Double clicks go entirely to their single detector.  ``bound`` is the
    per-detector ceiling on the maximally-entangled share; for d=2 it reads
    ``(|a_i|^2 + |b_i|^2)/8`` and the ceilings add up to 1/2.
    """
    blocks = partition_blocks(U, d)
    n = blocks.A.shape[1]
    col = np.sum(np.abs(blocks.A) ** 2, axis=0) + np.sum(np.abs(blocks.B) ** 2, axis=0)
    tot, me = np.zeros(n), np.zeros(n)
    for el in _non_null(elements):
        w = el.weight / d**2
        is_me = is_maximally_entangled(el.P, rel_tol).is_me
        modes = [el.pattern.i] if el.pattern.double_click else [el.pattern.i, el.pattern.j]
        for m in modes:
            tot[m - 1] += w / len(modes)
            if is_me:
                me[m - 1] += w / len(modes)
    return [DetectorShare(i + 1, float(tot[i]), float(me[i]), float(col[i] / (2 * d**2))) for i in range(n)]


@dataclass(frozen=True)
class PatternBellRow:
    pattern: tuple[int, int]
    probabilities: dict  # (m, k) -> probability
    identified_state: tuple[int, int] | None
    weight: float
    schmidt_values: np.ndarray
    me: MEClassification


@dataclass(frozen=True)
class BellReport:
    d: int
    statistics: Statistics
    rows: list = field(default_factory=list)
    success_uniform_bell: float = 0.0
    success_maximally_mixed: float = 0.0

    @property
    def identified_states(self) -> list[tuple[int, int]]:
        return sorted({r.identified_state for r in self.rows if r.identified_state is not None})


def bell_discrimination(U, d: int, statistics, rel_tol: float = ME_TOL,
                        impossible_tol: float = IMPOSSIBLE_TOL) -> BellReport:
    statistics = Statistics.parse(statistics)
    elements = povm_elements(U, d, statistics)
    bells = bell_basis(d, statistics)
    rows = []
    heralded = 0.0
    for el in elements:
        probs = {key: outcome_probability(el, st) for key, st in bells.items()}
        possible = [key for key, p in probs.items() if p >= impossible_tol]
        ident = possible[0] if len(possible) == 1 and not el.is_null else None
        if ident is not None:
            heralded += probs[ident]
        sv = np.linalg.svd(el.P, compute_uv=False)
        me = is_maximally_entangled(el.P, rel_tol) if not el.is_null else MEClassification(False)
        rows.append(PatternBellRow((el.pattern.i, el.pattern.j), probs, ident, el.weight, sv, me))
    return BellReport(
        d=d,
        statistics=statistics,
        rows=rows,
        success_uniform_bell=heralded / d**2,
        success_maximally_mixed=me_success_probability(elements, d, rel_tol),
    )
