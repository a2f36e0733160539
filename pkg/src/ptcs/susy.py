"""Eigenstates from the SUSY chain and checks of the partner relations."""
from __future__ import annotations

import math
from dataclasses import replace
from functools import lru_cache

from .ptmodel import DomainError, PTParams, energy, f_seq, gegenbauer_state, ground_state
from .reports import VerificationReport
from .sgp import (
    SGPState,
    apply_hamiltonian,
    apply_lowering,
    apply_raising,
    fix_phase,
    norm,
)

__all__ = [
    "partner_shift",
    "eigenstate",
    "chain_drift",
    "check_intertwining",
    "check_factorization",
    "check_eigen_residual",
    "check_gegenbauer",
]

MAX_N = 30


def partner_shift(params: PTParams) -> PTParams:
    """Parameters of the SUSY partner Hamiltonian: nu -> nu + 1."""
    return replace(params, nu=params.nu + 1.0)


@lru_cache(maxsize=512)
def _chain(params: PTParams, n: int) -> tuple[SGPState, float]:
    """phi_n in the chain phase, and the norm drift before renormalization.

    phi_{n} = A^dag_nu phi_{n-1}^{(nu+1)} / sqrt(2 m e0 f_n), starting from
    the quadrature-normalized ground state of nu + n.
    """
    if n == 0:
        return ground_state(params), 0.0
    inner, _ = _chain(partner_shift(params), n - 1)
    raised = apply_raising(params, inner)
    raised = raised * (1.0 / math.sqrt(2.0 * params.m * params.e0 * f_seq(params, n)))
    size = norm(raised)
    return raised * (1.0 / size), abs(size - 1.0)


def eigenstate(params: PTParams, n: int, phase: str = "positive") -> SGPState:
    """Unit-norm eigenstate phi_n of H_{nu,beta} built by the SUSY chain.

    ``phase="positive"`` makes the state positive just right of x = 0 (the
    leading cot coefficient is real positive).  ``phase="chain"`` keeps the
    phase produced by repeated A^dagger, for which the intertwining relation
    A phi_{n+1} = sqrt(2 m e0 f_{n+1}) phi_n^{(nu+1)} holds with a plus sign;
    the two conventions differ by (-1)^n.
    """
    if not 0 <= n <= MAX_N:
        raise DomainError(f"n must be in [0, {MAX_N}]")
    state, _ = _chain(params, n)
    if phase == "chain":
        return state
    if phase == "positive":
        return fix_phase(state)
    raise ValueError(f"unknown phase convention {phase!r}")


def chain_drift(params: PTParams, n: int) -> float:
    """|norm - 1| of the chain output before renormalization (a health metric)."""
    return _chain(params, n)[1]


def check_intertwining(params: PTParams, n: int, tol: float = 1e-10) -> VerificationReport:
    """|| A phi_{n+1} - sqrt(2 m e0 f_{n+1}) phi_n^{(nu+1)} || in the chain phase."""
    upper = eigenstate(params, n + 1, phase="chain")
    lower = eigenstate(partner_shift(params), n, phase="chain")
    coef = math.sqrt(2.0 * params.m * params.e0 * f_seq(params, n + 1))
    lhs = apply_lowering(params, upper)
    residual = norm(lhs - lower * coef)
    return VerificationReport(
        identity="intertwining",
        inputs={"params": params.echo(), "n": n},
        residual=residual,
        tolerance=tol,
        strategy="sgp-algebra",
        lhs=norm(lhs),
        rhs=coef,
        details={"chain_drift": chain_drift(params, n + 1)},
    )


def check_factorization(params: PTParams, state: SGPState, tol: float = 1e-10) -> VerificationReport:
    """|| H st - (1/2m) A^dag A st - E_0 st || relative to || st ||."""
    h_state = apply_hamiltonian(params, state)
    e0_level = energy(params, 0).value
    factored = apply_raising(params, apply_lowering(params, state)) * (1.0 / (2.0 * params.m))
    factored = factored + state * e0_level
    scale = norm(state)
    residual = norm(h_state - factored) / scale
    return VerificationReport(
        identity="factorization",
        inputs={"params": params.echo(), "state_degree": state.degree, "state_s": state.s},
        residual=residual,
        tolerance=tol,
        strategy="sgp-algebra",
    )


def check_eigen_residual(params: PTParams, n: int, tol: float = 1e-10) -> VerificationReport:
    """|| H phi_n - E_n phi_n || / |E_n|."""
    phi = eigenstate(params, n)
    e_n = energy(params, n).value
    residual = norm(apply_hamiltonian(params, phi) - phi * e_n) / abs(e_n)
    return VerificationReport(
        identity="eigen-residual",
        inputs={"params": params.echo(), "n": n},
        residual=residual,
        tolerance=tol,
        strategy="sgp-algebra",
        rhs=e_n,
    )


def check_gegenbauer(params: PTParams, n: int, tol: float = 1e-9) -> VerificationReport:
    """Distance (up to sign) between the chain state and the Gegenbauer state at beta = 0."""
    if params.beta != 0.0:
        raise DomainError("the Gegenbauer form covers beta = 0 only")
    chain = eigenstate(params, n)
    ref = gegenbauer_state(params.nu, n, params.L)
    if chain.s != ref.s:
        raise ValueError("chain and Gegenbauer states disagree on the sin exponent")
    residual = min(norm(chain - ref), norm(chain + ref))
    return VerificationReport(
        identity="gegenbauer",
        inputs={"params": params.echo(), "n": n},
        residual=residual,
        tolerance=tol,
        strategy="sgp-algebra",
    )
