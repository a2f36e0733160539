"""Coherent states for Pöschl-Teller potentials: construction, kernels and identity checks."""
from .coherent import (
    CoherentState,
    PhasePoint,
    big_f,
    coherent_state,
    lowering_symbol_A,
    lowering_symbol_H,
    lowering_symbol_invsin2,
    lowering_symbol_kinetic,
    normalization,
    overlap,
)
from .numerics import QuadratureResult, integrate_interval, integrate_line, log_gamma_complex
from .ptmodel import DomainError, EnergyLevel, PTParams, energy, f_seq, ground_state, potential, superpotential
from .frames import verify_resolution
from .quantization import PSymbol, check_identity, quadratic_form
from .reports import VerificationReport
from .sgp import SGPState, evaluate, inner_product
from .susy import eigenstate, partner_shift

__version__ = "0.1.0"

__all__ = [
    "CoherentState",
    "DomainError",
    "EnergyLevel",
    "PTParams",
    "PSymbol",
    "PhasePoint",
    "QuadratureResult",
    "SGPState",
    "VerificationReport",
    "big_f",
    "check_identity",
    "coherent_state",
    "eigenstate",
    "energy",
    "evaluate",
    "f_seq",
    "ground_state",
    "inner_product",
    "integrate_interval",
    "integrate_line",
    "log_gamma_complex",
    "lowering_symbol_A",
    "lowering_symbol_H",
    "lowering_symbol_invsin2",
    "lowering_symbol_kinetic",
    "normalization",
    "overlap",
    "partner_shift",
    "potential",
    "quadratic_form",
    "superpotential",
    "verify_resolution",
]
