"""Adiabatic transfer in a bichromatically driven three-level ladder.

The package models two exchange-coupled spins driven by two delayed Gaussian
pulses of nearby carrier frequencies, in the rotating-wave three-level
picture and in the lab frame. It computes final populations, quasienergy
surfaces of the two-frequency Floquet operator, adiabatic-path predictions,
regime classification with closed-form island boundaries, and parameter maps.
"""
__version__ = "0.1.0"

from ._backend import NAME as BACKEND
from .errors import (AmbiguousContinuation, BichromaError, ConvergenceFailure, DimensionMismatch,
                     DomainError, LostBranch, NonHermitianError, NormError, SingularDenominator,
                     StepSizeUnderflow, ValidationError)
from .floquet import (FloquetLabel, IntersectionRecord, QuasienergySurface,
                      build_quasienergy_operator, compute_surface, eigensolve,
                      find_axis_intersections, pulse_path, track_adiabatic_path, track_pulse)
from .model import (DriveParams, PulsePair, RegimeLabel, SpinParams, StateAmplitudes,
                    apply_T_symmetry, effective_floquet_Dprime, effective_hamiltonian,
                    full_hamiltonian, rwa_hamiltonian)
from .propagator import (PropagationConfig, TransferResult, propagate, simulate_full,
                         simulate_transfer, verify_T_invariance)
from .regimes import (BoundaryCurve, boundaries_Dprime, boundaries_regime_A, boundary_D,
                      classify_regime, classify_weak_field, dynamical_resonance, resonance_23,
                      weak_field_limit_boundaries)
from .scan import ScanConfig, TransferMap, run_transfer_map

__all__ = [
    "__version__", "BACKEND",
    "BichromaError", "SingularDenominator", "DomainError", "DimensionMismatch", "NonHermitianError",
    "NormError", "StepSizeUnderflow", "ConvergenceFailure", "LostBranch", "ValidationError",
    "AmbiguousContinuation",
    "SpinParams", "DriveParams", "PulsePair", "StateAmplitudes", "RegimeLabel",
    "rwa_hamiltonian", "full_hamiltonian", "apply_T_symmetry", "effective_hamiltonian",
    "effective_floquet_Dprime",
    "PropagationConfig", "TransferResult", "propagate", "simulate_transfer", "simulate_full",
    "verify_T_invariance",
    "FloquetLabel", "IntersectionRecord", "QuasienergySurface", "build_quasienergy_operator",
    "eigensolve", "compute_surface", "pulse_path", "track_adiabatic_path", "track_pulse",
    "find_axis_intersections",
    "BoundaryCurve", "classify_weak_field", "classify_regime", "boundaries_regime_A",
    "resonance_23", "dynamical_resonance", "boundary_D", "boundaries_Dprime",
    "weak_field_limit_boundaries",
    "ScanConfig", "TransferMap", "run_transfer_map",
]
