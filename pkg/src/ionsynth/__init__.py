"""Pulse-sequence synthesis of two-mode motional states of a trapped ion."""

from .coupling import (FullInteraction, SidebandCoupling, TrapConfig, build_full_interaction,
                       build_resonant_hamiltonian, rabi_exact, rabi_paper)
from .errors import (InputError, PlannerError, ProtocolViolation, SimulationError,
                     SynthesisError, TruncationError, TruncationLeakWarning)
from .fock import (ElectronicLevel, JLIndex, ModeIndex, StateVector, TargetSpec, basis_state,
                   coeffs_to_d, jl_to_mn, mn_to_jl, random_target, target_state)
from .planner import Pulse, PulseSequence, diagonal_order, plan, scheme_comparison
from .simulator import (IntegratorOptions, SimResult, SimTier, apply_full, apply_ideal,
                        apply_resonant, fidelity, run_sequence)
from .spectrum import SidebandLine, check_separation, enumerate_lines

__version__ = "0.1.0"
