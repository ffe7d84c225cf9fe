import itertools

import numpy as np
import pytest

from linpovm.fock import FockVector, OccupationBasisState, basis_pairs, detection_probabilities, encode, evolve
from linpovm.modes import BeamSplitter, OpticalCircuit, compose_circuit, random_unitary
from linpovm.states import BOSON, FERMION, TwoQuditState, bell_state, random_state

S2 = 1 / np.sqrt(2)


def perm2(M):
    return M[0, 0] * M[1, 1] + M[0, 1] * M[1, 0]


def det2(M):
    return M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]


def transition(U, inp, out, stats):
    """<out| U |inp> for two particles via 2x2 permanent/determinant."""
    sub = U[np.ix_([inp[0] - 1, inp[1] - 1], [out[0] - 1, out[1] - 1])]
    if stats is FERMION:
        return det2(sub)
    mult = (2 if inp[0] == inp[1] else 1) * (2 if out[0] == out[1] else 1)
    return perm2(sub) / np.sqrt(mult)


@pytest.fixture
def splitter():
    return compose_circuit(OpticalCircuit(2, [BeamSplitter(1, 2, np.pi / 4, 0)]))


class TestBasis:
    def test_fermion_double_occupation_rejected(self):
        with pytest.raises(ValueError, match="Pauli"):
            OccupationBasisState(2, 2, FERMION)

    def test_ordering(self):
        with pytest.raises(ValueError):
            OccupationBasisState(3, 1)

    def test_counts(self):
        assert len(basis_pairs(5, BOSON)) == 15
        assert len(basis_pairs(5, FERMION)) == 10


class TestEncode:
    def test_single_mode_qudits(self):
        assert dict(encode(TwoQuditState([[1]]), 2).amplitudes) == {(1, 2): 1}

    def test_phi_plus(self):
        amps = encode(bell_state(2, 0, 0), 4).amplitudes
        assert set(amps) == {(1, 3), (2, 4)}
        assert all(abs(a - S2) < 1e-15 for a in amps.values())

    def test_norm(self, rng):
        for stats in (BOSON, FERMION):
            assert abs(encode(random_state(3, rng, stats), 7).norm_sq() - 1) < 1e-14

    def test_too_few_modes(self):
        with pytest.raises(ValueError):
            encode(bell_state(2, 0, 0), 3)


class TestEvolve:
    def test_identity(self, rng):
        v = encode(random_state(2, rng), 5)
        out = evolve(v, np.eye(5))
        for k, a in v.amplitudes.items():
            assert abs(out.amplitude(*k) - a) < 1e-15

    def test_hong_ou_mandel(self, splitter):
        out = evolve(FockVector(2, BOSON, {(1, 2): 1}), splitter)
        probs = detection_probabilities(out)
        assert abs(probs[(1, 1)] - 0.5) < 1e-15 and abs(probs[(2, 2)] - 0.5) < 1e-15
        assert abs(out.amplitude(1, 2)) < 1e-15

    def test_fermion_antibunching(self, splitter):
        out = evolve(FockVector(2, FERMION, {(1, 2): 1}), splitter)
        assert abs(abs(out.amplitude(1, 2)) - 1) < 1e-15

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            evolve(FockVector(3, BOSON, {(1, 2): 1}), np.eye(4))

    @pytest.mark.parametrize("stats", [BOSON, FERMION])
    def test_matches_permanent_and_determinant(self, rng, stats):
        for n in (2, 3, 5):
            U = random_unitary(n, rng).matrix
            pairs = basis_pairs(n, stats)
            for inp in pairs:
                out = evolve(FockVector(n, stats, {inp: 1}), U)
                for o in pairs:
                    expected = transition(U, inp, o, stats)
                    # fermionic amplitudes are compared up to the sign convention of ordered pairs
                    if stats is FERMION:
                        assert abs(abs(out.amplitude(*o)) - abs(expected)) < 1e-12
                    else:
                        assert abs(out.amplitude(*o) - expected) < 1e-12

    @pytest.mark.parametrize("stats", [BOSON, FERMION])
    def test_norm_preserved(self, rng, stats):
        for _ in range(100):
            n = int(rng.integers(2, 9))
            pairs = basis_pairs(n, stats)
            c = rng.standard_normal(len(pairs)) + 1j * rng.standard_normal(len(pairs))
            c /= np.linalg.norm(c)
            out = evolve(FockVector(n, stats, dict(zip(pairs, c))), random_unitary(n, rng))
            assert abs(out.norm_sq() - 1) <= 1e-10
            assert abs(sum(detection_probabilities(out).values()) - 1) <= 1e-10

    @pytest.mark.parametrize("stats", [BOSON, FERMION])
    def test_composition(self, rng, stats):
        for _ in range(10):
            n = int(rng.integers(2, 6))
            U1, U2 = random_unitary(n, rng).matrix, random_unitary(n, rng).matrix
            pairs = basis_pairs(n, stats)
            c = rng.standard_normal(len(pairs)) + 1j * rng.standard_normal(len(pairs))
            v = FockVector(n, stats, dict(zip(pairs, c / np.linalg.norm(c))))
            two_step, one_step = evolve(evolve(v, U1), U2), evolve(v, U1 @ U2)
            for k in pairs:
                assert abs(two_step.amplitude(*k) - one_step.amplitude(*k)) < 1e-10

    def test_unoccupied_rows_irrelevant(self, rng):
        for stats in (BOSON, FERMION):
            U = random_unitary(6, rng).matrix
            # replace the last two rows by another orthonormal completion
            W = random_unitary(2, rng).matrix
            U2 = U.copy()
            U2[4:] = W @ U[4:]
            s = random_state(2, rng, stats)
            p1 = detection_probabilities(evolve(encode(s, 6), U))
            p2 = detection_probabilities(evolve(encode(s, 6), U2))
            for k in set(p1) | set(p2):
                assert abs(p1.get(k, 0) - p2.get(k, 0)) <= 1e-12


def test_detection_of_encoded_bell_state():
    probs = detection_probabilities(evolve(encode(bell_state(2, 0, 0), 4), np.eye(4)))
    assert {k: round(v, 15) for k, v in probs.items() if v > 0} == {(1, 3): 0.5, (2, 4): 0.5}
