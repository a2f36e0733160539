"""Coherent states of the Pöschl-Teller lowering operator, F_nu and lowering symbols.

The states are eta_{q,p}(x) = N_nu(q) sin^{nu+1}(pi x/L) exp((W_{nu,0}(q) + i p) x / hbar).
They depend on nu but not on beta, and A_{nu,beta} eta = (W_{nu,beta}(q) + i p) eta.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .numerics import PoleError, log_abs_gamma_scaled, log_gamma_complex
from .ptmodel import DomainError, PTParams, trig
from .sgp import (
    SGPState,
    apply_hamiltonian,
    apply_kinetic,
    apply_lowering,
    inner_product,
    multiply,
    normalized,
)

__all__ = [
    "PhasePoint",
    "CoherentState",
    "big_f",
    "log_big_f",
    "normalization",
    "log_normalization",
    "normalization_via_f",
    "coherent_state",
    "overlap",
    "lam_q",
    "w0",
    "lowering_symbol_A",
    "lowering_symbol_H",
    "lowering_symbol_invsin2",
    "lowering_symbol_kinetic",
    "expectation",
    "big_f_test_grid",
    "f_by_quadrature",
    "check_big_f_closed_form",
]


@dataclass(frozen=True)
class PhasePoint:
    """A point of the strip (0, L) x R; ``qc = L - q`` may be given for precision."""

    q: float
    p: float = 0.0
    qc: float | None = None

    def complement(self, L: float) -> float:
        return L - self.q if self.qc is None else self.qc

    def check(self, L: float) -> None:
        if not (self.q > 0 and self.complement(L) > 0):
            raise DomainError(f"q = {self.q!r} must lie strictly inside (0, {L!r})")


@dataclass(frozen=True)
class CoherentState:
    nu: float
    L: float
    point: PhasePoint
    norm_const: float
    body: SGPState
    hbar: float = 1.0


# ---------------------------------------------------------------------------
# F_nu(z) = int_0^1 sin^{2nu+2}(pi x) e^{z x} dx


def log_big_f(nu: float, z: complex) -> complex:
    """log F_nu(z); ``-inf`` where F vanishes (a pole of one Gamma factor)."""
    if not nu > -1.5:
        raise DomainError("F_nu requires nu > -3/2")
    z = complex(z)
    shift = 1j * z / (2.0 * math.pi)
    try:
        lg = log_gamma_complex(np.array([nu + 2.0 + shift, nu + 2.0 - shift]))
    except PoleError:
        return complex(-math.inf, 0.0)
    return math.lgamma(2.0 * nu + 3.0) + 0.5 * z - (nu + 1.0) * math.log(4.0) - lg[0] - lg[1]


def big_f(nu: float, z: complex) -> complex:
    """Closed form Gamma(2nu+3) e^{z/2} / (4^{nu+1} Gamma(nu+2+iz/2pi) Gamma(nu+2-iz/2pi))."""
    lf = log_big_f(nu, z)
    if lf.real == -math.inf:
        return 0j
    out = cmath.exp(lf)
    if complex(z).imag == 0.0:
        # real argument: the integral is real and positive
        return complex(abs(out), 0.0)
    return out


# ---------------------------------------------------------------------------
# normalization


def lam_q(L: float, q, qc=None):
    """lambda_q = -cot(pi q / L)."""
    s, c = trig(q, L, qc)
    return -c / s


def w0(nu: float, L: float, q, hbar: float = 1.0, qc=None):
    """W_{nu,0}(q) = hbar (pi/L) (nu+1) lambda_q."""
    return hbar * (math.pi / L) * (nu + 1.0) * lam_q(L, q, qc)


def log_normalization(nu: float, L: float, q, qc=None):
    """log N_nu(q), stable for lambda_q of any size (vectorized in q)."""
    if not nu > -1.5:
        raise DomainError("N_nu requires nu > -3/2")
    y = (nu + 1.0) * lam_q(L, q, qc)
    out = (
        (nu + 1.0) * math.log(2.0)
        + log_abs_gamma_scaled(nu + 2.0, y)
        - math.pi * np.maximum(y, 0.0)
        - 0.5 * math.log(L)
        - 0.5 * math.lgamma(2.0 * nu + 3.0)
    )
    return out


def normalization(nu: float, L: float, q: float, qc: float | None = None) -> float:
    """N_nu(q) = 2^{nu+1} |Gamma(nu+2+i(nu+1)lambda_q)| e^{-(pi/2)(nu+1)lambda_q} / (sqrt(L) sqrt(Gamma(2nu+3)))."""
    PhasePoint(q, 0.0, qc).check(L)
    return math.exp(float(log_normalization(nu, L, q, qc)))


def normalization_via_f(nu: float, L: float, q: float, qc: float | None = None) -> float:
    """The second form, 1 / sqrt(L F_nu(2 W_{nu,0}(q) L / hbar)); hbar cancels."""
    PhasePoint(q, 0.0, qc).check(L)
    z = 2.0 * L * float(w0(nu, L, q, 1.0, qc))
    return math.exp(-0.5 * (math.log(L) + log_big_f(nu, z).real))


# ---------------------------------------------------------------------------
# states and kernels


def coherent_state(nu: float, L: float, point: PhasePoint, hbar: float = 1.0, renormalize: bool = False) -> CoherentState:
    """eta_{q,p} as an SGP state with the closed-form normalization.

    ``renormalize=True`` additionally normalizes by quadrature (debugging aid).
    """
    point.check(L)
    if not nu > -1.5:
        raise DomainError("coherent states require nu > -3/2")
    qc = point.complement(L)
    n_const = normalization(nu, L, point.q, qc)
    if not 0.0 < n_const < math.inf:
        # the prefactor is representable only through log_normalization here
        raise OverflowError(f"N_nu(q) is not representable in floating point at q = {point.q!r}")
    gamma = (float(w0(nu, L, point.q, hbar, qc)) + 1j * point.p) / hbar
    body = SGPState(nu + 1.0, gamma, [n_const], L)
    if renormalize:
        body = normalized(body)
    return CoherentState(nu, L, point, n_const, body, hbar)


def overlap(a: CoherentState, b: CoherentState) -> complex:
    """<eta_a, eta_b> = L N_nu(q) N_nu'(q') F_{(nu+nu')/2}(L alpha / hbar)."""
    if a.L != b.L or a.hbar != b.hbar:
        raise ValueError("coherent states use different L or hbar")
    if not a.nu + b.nu > -3.0:
        raise DomainError("overlap requires nu + nu' > -3")
    L, hbar = a.L, a.hbar
    qa, qb = a.point, b.point
    alpha = (
        float(w0(a.nu, L, qa.q, hbar, qa.complement(L)))
        + float(w0(b.nu, L, qb.q, hbar, qb.complement(L)))
        + 1j * (qb.p - qa.p)
    )
    lf = log_big_f(0.5 * (a.nu + b.nu), L * alpha / hbar)
    if lf.real == -math.inf:
        return 0j
    log_n = log_normalization(a.nu, L, qa.q, qa.complement(L)) + log_normalization(b.nu, L, qb.q, qb.complement(L))
    return cmath.exp(math.log(L) + float(log_n) + lf)


# ---------------------------------------------------------------------------
# lowering symbols


def _point_trig(L: float, point: PhasePoint):
    point.check(L)
    s, c = trig(point.q, L, point.complement(L))
    return float(s), float(c)


def lowering_symbol_A(params: PTParams, point: PhasePoint) -> complex:
    """<eta, A eta> = W_{nu,beta}(q) + i p."""
    s, c = _point_trig(params.L, point)
    nu1 = params.nu + 1.0
    w = -params.hbar * params.k * (nu1 * c / s - params.beta / nu1)
    return complex(w, point.p)


def lowering_symbol_H(params: PTParams, point: PhasePoint) -> float:
    """p^2/2m + e0 (nu+1)^2 / sin^2(pi q/L) - 2 e0 beta cot(pi q/L)."""
    s, c = _point_trig(params.L, point)
    e0 = params.e0
    return point.p**2 / (2.0 * params.m) + e0 * (params.nu + 1.0) ** 2 / s**2 - 2.0 * e0 * params.beta * c / s


def _check_low_range(nu: float) -> None:
    if not nu > -0.5:
        raise DomainError("the 1/sin^2 and kinetic symbols need nu > -1/2")


def lowering_symbol_invsin2(nu: float, L: float, point: PhasePoint) -> float:
    """<eta, sin^{-2}(pi x/L) eta> = (2nu+2)/(2nu+1) / sin^2(pi q/L)."""
    _check_low_range(nu)
    s, _ = _point_trig(L, point)
    return (2.0 * nu + 2.0) / (2.0 * nu + 1.0) / s**2


def lowering_symbol_kinetic(params: PTParams, point: PhasePoint) -> float:
    """<eta, P^2/2m eta> = p^2/2m + e0 (nu+1)^2 / ((2nu+1) sin^2(pi q/L))."""
    _check_low_range(params.nu)
    s, _ = _point_trig(params.L, point)
    nu = params.nu
    return point.p**2 / (2.0 * params.m) + params.e0 * (nu + 1.0) ** 2 / ((2.0 * nu + 1.0) * s**2)


def expectation(params: PTParams, point: PhasePoint, operator: str) -> complex:
    """<eta, O eta> by quadrature, with O applied exactly in SGP form.

    ``operator`` is one of ``"A"``, ``"H"``, ``"invsin2"``, ``"kinetic"``;
    the coherent state has index ``params.nu``.
    """
    eta = coherent_state(params.nu, params.L, point, params.hbar).body
    if operator == "A":
        image = apply_lowering(params, eta)
    elif operator == "H":
        image = apply_hamiltonian(params, eta)
    elif operator == "invsin2":
        image = multiply(eta, [1.0, 0.0, 1.0])
    elif operator == "kinetic":
        image = apply_kinetic(params, eta)
    else:
        raise ValueError(f"unknown operator {operator!r}")
    return inner_product(eta, image)


# ---------------------------------------------------------------------------
# the closed form of F_nu against its defining integral


def big_f_test_grid() -> list[complex]:
    """25 points with Re z, Im z in {-20, -10, 0, 10, 20}."""
    vals = (-20.0, -10.0, 0.0, 10.0, 20.0)
    return [complex(a, b) for a in vals for b in vals]


def f_by_quadrature(nu: float, z: complex, rtol: float = 1e-15) -> complex:
    """int_0^1 sin^{2nu+2}(pi x) e^{z x} dx by tanh-sinh quadrature."""
    from .numerics import integrate_interval

    def f(x, xc):
        s, _ = trig(x, 1.0, xc)
        return s ** (2.0 * nu + 2.0) * np.exp(z * x)

    return integrate_interval(f, 0.0, rtol=rtol, with_complement=True, max_level=14).value


def check_big_f_closed_form(nu: float, zs=None, tol: float = 1e-11):
    """Largest relative error of :func:`big_f` against quadrature over ``zs``."""
    from .reports import VerificationReport, relative_residual

    zs = big_f_test_grid() if zs is None else list(zs)
    worst, at = 0.0, zs[0]
    for z in zs:
        res = relative_residual(big_f(nu, z), f_by_quadrature(nu, z))
        if res >= worst:
            worst, at = res, z
    return VerificationReport(
        identity="big-f-closed-form",
        inputs={"nu": nu, "points": len(zs)},
        residual=worst,
        tolerance=tol,
        strategy="tanh-sinh",
        lhs=big_f(nu, at),
        rhs=f_by_quadrature(nu, at),
        details={"worst_z": [at.real, at.imag]},
    )
