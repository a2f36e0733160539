"""Pöschl-Teller parameters, potential, superpotential and spectrum."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "PTParams",
    "EnergyLevel",
    "DomainError",
    "trig",
    "potential",
    "superpotential",
    "energy",
    "f_seq",
    "ground_state",
    "gegenbauer_coefficients",
    "gegenbauer_state",
]


class DomainError(ValueError):
    """A position or parameter lies outside the region where a formula holds."""


@dataclass(frozen=True)
class PTParams:
    """Physical configuration of a Pöschl-Teller problem on [0, L].

    ``extended=True`` admits ``-1 < nu < 0`` and ``beta < 0``.
    """

    nu: float = 0.0
    beta: float = 0.0
    L: float = 1.0
    m: float = 1.0
    hbar: float = 1.0
    extended: bool = False

    def __post_init__(self) -> None:
        for name in ("L", "m", "hbar"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if not math.isfinite(self.nu) or not math.isfinite(self.beta):
            raise DomainError("nu and beta must be finite")
        if self.extended:
            if self.nu <= -1:
                raise DomainError("nu must exceed -1")
        else:
            if self.nu < 0:
                raise DomainError("nu must be >= 0 (pass extended=True for nu > -1)")
            if self.beta < 0:
                raise DomainError("beta must be >= 0 (pass extended=True for beta < 0)")

    @property
    def e0(self) -> float:
        """Zero-point energy of the infinite well, hbar^2 pi^2 / (2 m L^2)."""
        return self.hbar**2 * math.pi**2 / (2.0 * self.m * self.L**2)

    @property
    def k(self) -> float:
        return math.pi / self.L

    def with_nu(self, nu: float) -> PTParams:
        return replace(self, nu=nu)

    def echo(self) -> dict:
        return {"nu": self.nu, "beta": self.beta, "L": self.L, "m": self.m, "hbar": self.hbar}


@dataclass(frozen=True)
class EnergyLevel:
    n: int
    value: float


def trig(x, L: float, xc=None):
    """sin and cos of pi x / L, using the complement L - x near the right end."""
    x = np.asarray(x, dtype=float)
    xc = L - x if xc is None else np.asarray(xc, dtype=float)
    right = x > 0.5 * L
    near = np.where(right, xc, x)
    theta = np.pi * near / L
    s = np.sin(theta)
    c = np.where(right, -np.cos(theta), np.cos(theta))
    return s, c


def _check_inside(x, L: float, xc=None) -> None:
    x = np.asarray(x, dtype=float)
    xc = L - x if xc is None else np.asarray(xc, dtype=float)
    if np.any(~(x > 0)) or np.any(~(xc > 0)):
        raise DomainError("position must lie strictly inside (0, L)")


def cot(x, L: float, xc=None):
    s, c = trig(x, L, xc)
    return c / s


def potential(params: PTParams, x, xc=None):
    """V = e0 nu (nu+1) / sin^2(pi x/L) - 2 e0 beta cot(pi x/L)."""
    _check_inside(x, params.L, xc)
    s, c = trig(x, params.L, xc)
    out = params.e0 * (params.nu * (params.nu + 1.0) / s**2 - 2.0 * params.beta * c / s)
    return out[()] if np.ndim(out) == 0 else out


def superpotential(params: PTParams, x, xc=None):
    """W = -(hbar pi / L) ((nu+1) cot(pi x/L) - beta/(nu+1))."""
    _check_inside(x, params.L, xc)
    nu1 = params.nu + 1.0
    out = -params.hbar * params.k * (nu1 * cot(x, params.L, xc) - params.beta / nu1)
    return out[()] if np.ndim(out) == 0 else out


def _level(params: PTParams, n: int) -> float:
    a = (params.nu + n) + 1.0
    return params.e0 * (a * a - params.beta**2 / (a * a))


def energy(params: PTParams, n: int) -> EnergyLevel:
    if n < 0:
        raise DomainError("n must be non-negative")
    return EnergyLevel(n, _level(params, n))


def f_seq(params: PTParams, n: int) -> float:
    """(E_n - E_0) / e0; zero at n = 0 and positive beyond."""
    if n < 0:
        raise DomainError("n must be non-negative")
    if n == 0:
        return 0.0
    a = (params.nu + n) + 1.0
    b = params.nu + 1.0
    return (a * a - b * b) - params.beta**2 * (1.0 / (a * a) - 1.0 / (b * b))


def ground_state(params: PTParams):
    """Unit-norm ground state sin^{nu+1}(pi x/L) exp(-beta pi x/(L (nu+1))).

    The exponential sign is the one annihilated by A = W + hbar d/dx.
    """
    from .sgp import SGPState, normalized

    nu1 = params.nu + 1.0
    raw = SGPState(nu1, -params.beta * params.k / nu1, np.array([1.0 + 0j]), params.L)
    return normalized(raw)


def gegenbauer_coefficients(alpha: float, n: int) -> np.ndarray:
    """Power-basis coefficients of C_n^alpha(c) from the three-term recurrence."""
    if n < 0:
        raise DomainError("n must be non-negative")
    prev = np.array([1.0])
    if n == 0:
        return prev
    cur = np.array([0.0, 2.0 * alpha])
    for j in range(2, n + 1):
        shifted = np.concatenate(([0.0], cur))
        back = np.concatenate((prev, [0.0, 0.0]))
        nxt = (2.0 * (j + alpha - 1.0) * shifted - (j + 2.0 * alpha - 2.0) * back) / j
        prev, cur = cur, nxt
    return cur


def gegenbauer_state(nu: float, n: int, L: float = 1.0):
    """sin^{nu+1}(pi x/L) C_n^{nu+1}(cos(pi x/L)), normalized by quadrature.

    C_n has the parity of n, so each cos^j term equals
    sin^n lambda^j (1 + lambda^2)^((n - j) / 2) with an integer power, giving
    an SGP state with sin exponent nu + 1 + n.
    """
    from .sgp import SGPState, normalized

    if n > 30:
        raise DomainError("gegenbauer_state supports n <= 30")
    c = gegenbauer_coefficients(nu + 1.0, n)
    P = np.polynomial.polynomial
    out = np.zeros(n + 1)
    one_plus = np.array([1.0, 0.0, 1.0])
    for j in range(n % 2, n + 1, 2):
        term = P.polymul(np.eye(1, j + 1, j).ravel(), P.polypow(one_plus, (n - j) // 2))
        out[: term.size] += c[j] * term
    raw = SGPState(nu + 1.0 + n, 0.0, out.astype(complex), L)
    return normalized(raw)
