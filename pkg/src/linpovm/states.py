"""Two-qudit states as d x d matrices and their two-particle bilinear forms.

``|C> = sum_ij C_ij |i>|j>`` (row-major: ``C_ij`` is the coefficient of
``|i>|j>``).  With this ordering ``A (x) B |C> = |A C B^T>``,
``<X|Y> = Tr(X^dag Y)`` and the reductions are ``C C^dag`` and ``C^T C^*``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .modes import as_matrix

NORM_TOL = 1e-10
SYMMETRY_TOL = 1e-12


class Statistics(enum.Enum):
    BOSONIC = "boson"
    FERMIONIC = "fermion"

    @property
    def sign(self) -> int:
        """+1 for bosons, -1 for fermions (the exchange sign)."""
        return 1 if self is Statistics.BOSONIC else -1

    @classmethod
    def parse(cls, value) -> "Statistics":
        if isinstance(value, cls):
            return value
        key = str(value).lower()
        aliases = {"boson": cls.BOSONIC, "bosonic": cls.BOSONIC, "b": cls.BOSONIC,
                   "fermion": cls.FERMIONIC, "fermionic": cls.FERMIONIC, "f": cls.FERMIONIC}
        if key not in aliases:
            raise ValueError(f"unknown particle statistics {value!r}; expected 'boson' or 'fermion'")
        return aliases[key]


BOSON = Statistics.BOSONIC
FERMION = Statistics.FERMIONIC


@dataclass(frozen=True)
class TwoQuditState:
    """Matrix C of a two-qudit pure state.

    Normalization is checked by :meth:`check_normalized` at encoding and
    measurement entry points; :func:`apply_local` returns unnormalized values.
    """

    C: np.ndarray
    statistics: Statistics = BOSON

    def __post_init__(self):
        C = np.array(self.C, dtype=complex)
        if C.ndim != 2 or C.shape[0] != C.shape[1]:
            raise ValueError(f"state matrix must be square, got shape {C.shape}")
        C.setflags(write=False)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "statistics", Statistics.parse(self.statistics))

    @property
    def d(self) -> int:
        return self.C.shape[0]

    @property
    def norm_sq(self) -> float:
        return float(np.real(np.trace(self.C.conj().T @ self.C)))

    def check_normalized(self, tol: float = NORM_TOL) -> "TwoQuditState":
        if abs(self.norm_sq - 1) > tol:
            raise ValueError(f"state is not normalized: Tr(C^dag C) = {self.norm_sq:.12g}")
        return self

    def vector(self) -> np.ndarray:
        """Coefficients in the product basis |i>|j>, row-major."""
        return self.C.reshape(-1)

    @classmethod
    def normalized(cls, C, statistics=BOSON) -> "TwoQuditState":
        C = np.asarray(C, dtype=complex)
        return cls(C / np.linalg.norm(C), statistics)


@dataclass(frozen=True)
class BilinearForm:
    """(Anti)symmetric N with ``|Psi> = a^T N a |0>``."""

    N: np.ndarray
    statistics: Statistics = BOSON

    def __post_init__(self):
        N = np.array(self.N, dtype=complex)
        stats = Statistics.parse(self.statistics)
        if N.ndim != 2 or N.shape[0] != N.shape[1]:
            raise ValueError(f"bilinear form must be square, got shape {N.shape}")
        asym = np.max(np.abs(N - stats.sign * N.T), initial=0.0)
        if asym > SYMMETRY_TOL * max(1.0, np.max(np.abs(N), initial=0.0)):
            kind = "symmetric" if stats is BOSON else "antisymmetric"
            raise ValueError(f"bilinear form is not {kind} (residual {asym:.3e})")
        N.setflags(write=False)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "statistics", stats)

    @property
    def n(self) -> int:
        return self.N.shape[0]


def embed_bilinear(state: TwoQuditState, n: int) -> BilinearForm:
    d = state.d
    if n < 2 * d:
        raise ValueError(f"need n >= 2d, got n={n}, d={d}")
    N = np.zeros((n, n), dtype=complex)
    N[:d, d : 2 * d] = state.C / 2
    N[d : 2 * d, :d] = state.statistics.sign * state.C.T / 2
    return BilinearForm(N, state.statistics)


def transform_bilinear(form: BilinearForm, U) -> BilinearForm:
    """Output-mode form ``M = U^T N U``."""
    U = as_matrix(U)
    if U.shape != form.N.shape:
        raise ValueError(f"unitary shape {U.shape} does not match form of size {form.n}")
    return BilinearForm(U.T @ form.N @ U, form.statistics)


def apply_local(Amat, Bmat, state: TwoQuditState) -> TwoQuditState:
    """``A (x) B |C> = |A C B^T>``; the result is not renormalized."""
    Amat, Bmat = np.asarray(Amat, dtype=complex), np.asarray(Bmat, dtype=complex)
    if Amat.shape[1] != state.d or Bmat.shape[1] != state.d:
        raise ValueError("local operators do not match the qudit dimension")
    return TwoQuditState(Amat @ state.C @ Bmat.T, state.statistics)


def inner_product(X: TwoQuditState, Y: TwoQuditState) -> complex:
    if X.d != Y.d:
        raise ValueError(f"dimension mismatch: {X.d} vs {Y.d}")
    return complex(np.trace(X.C.conj().T @ Y.C))


def reduced_density(state: TwoQuditState, subsystem: int) -> np.ndarray:
    C = state.C
    if subsystem == 1:
        return C @ C.conj().T
    if subsystem == 2:
        return C.T @ C.conj()
    raise ValueError(f"subsystem must be 1 or 2, got {subsystem!r}")


def bell_state(d: int, m: int, k: int, statistics=BOSON) -> TwoQuditState:
    """Generalized Bell state ``(1/sqrt d) sum_j w^(jm) |j>|j+k>``, w = exp(2 pi i/d)."""
    if not (0 <= m < d and 0 <= k < d):
        raise ValueError(f"Bell indices (m={m}, k={k}) out of range for d={d}")
    C = np.zeros((d, d), dtype=complex)
    j = np.arange(d)
    C[j, (j + k) % d] = np.exp(2j * np.pi * j * m / d) / np.sqrt(d)
    return TwoQuditState(C, statistics)


def bell_basis(d: int, statistics=BOSON) -> dict[tuple[int, int], TwoQuditState]:
    return {(m, k): bell_state(d, m, k, statistics) for m in range(d) for k in range(d)}


def random_state(d: int, seed=None, statistics=BOSON) -> TwoQuditState:
    rng = np.random.default_rng(seed)
    C = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return TwoQuditState.normalized(C, statistics)
