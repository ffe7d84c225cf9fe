"""Generalized measurements on two dual-rail qudits realized by linear mode
transformations and particle detectors."""

__version__ = "0.1.0"

from .modes import (BeamSplitter, BlockPartition, ModeSwap, ModeUnitary, OpticalCircuit, PhaseShifter,
                    compose_circuit, neumark_unitary, parametrized_unitary, partition_blocks,
                    random_unitary, swap_unitary, validate_unitary)
from .states import (BOSON, FERMION, BilinearForm, Statistics, TwoQuditState, apply_local, bell_state,
                     embed_bilinear, inner_product, reduced_density, transform_bilinear)
from .fock import FockVector, OccupationBasisState, detection_probabilities, encode, evolve
from .povm import (ClickPattern, PovmElement, SingleQuditPovm, completeness_check, oracle_crosscheck,
                   outcome_probability, povm_elements, single_qudit_povm)
from .entanglement import (BellReport, MEClassification, SchmidtData, bell_discrimination,
                           is_maximally_entangled, me_success_probability, schmidt)
from .optimize import OptimizationResult, OptimizerConfig, optimize, surrogate_objective, verify_bound
