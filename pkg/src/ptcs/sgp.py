"""Closed family sin^s(pi x/L) e^{gamma x} P(cot(pi x/L)) and exact calculus on it.

Every wavefunction used by the library (eigenstates, SUSY partners, coherent
states and their images under A, A^dagger and H) lives in this family, so the
operators act on the coefficient list of P and never on sampled values.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .numerics import integrate_interval
from .ptmodel import DomainError, PTParams, trig

__all__ = [
    "SGPState",
    "IntegrabilityError",
    "evaluate",
    "differentiate",
    "apply_lowering",
    "apply_raising",
    "apply_hamiltonian",
    "apply_momentum",
    "apply_kinetic",
    "multiply",
    "inner_product",
    "norm",
    "normalized",
    "to_json",
    "from_json",
]

P = np.polynomial.polynomial
TRIM_RTOL = 1e-14
_ENDPOINT_GUARD = 1e-12


class IntegrabilityError(DomainError):
    """The product of two states is not integrable at the endpoints."""


@dataclass(frozen=True, eq=False)
class SGPState:
    """sin^s(pi x/L) * exp(gamma x) * sum_j coeffs[j] cot^j(pi x/L) on (0, L)."""

    s: float
    gamma: complex
    coeffs: np.ndarray = field(repr=False)
    L: float = 1.0

    def __post_init__(self) -> None:
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("coeffs must be non-empty")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "gamma", complex(self.gamma))
        object.__setattr__(self, "s", float(self.s))
        if not self.s > -0.5:
            raise DomainError("sin exponent must exceed -1/2")
        if not self.L > 0:
            raise DomainError("L must be positive")

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def with_coeffs(self, coeffs) -> SGPState:
        return SGPState(self.s, self.gamma, coeffs, self.L)

    def __mul__(self, factor) -> SGPState:
        return self.with_coeffs(self.coeffs * complex(factor))

    __rmul__ = __mul__

    def __add__(self, other: SGPState) -> SGPState:
        return _combine_same(self, other, 1.0)

    def __sub__(self, other: SGPState) -> SGPState:
        return _combine_same(self, other, -1.0)

    def __repr__(self) -> str:
        return f"SGPState(s={self.s:g}, gamma={self.gamma:.6g}, degree={self.degree}, L={self.L:g})"


def _trim(c: np.ndarray, scale: float) -> np.ndarray:
    """Drop trailing coefficients at or below TRIM_RTOL * scale."""
    c = np.asarray(c, dtype=complex)
    if scale <= 0:
        return np.zeros(1, dtype=complex)
    keep = np.nonzero(np.abs(c) > TRIM_RTOL * scale)[0]
    if keep.size == 0:
        return np.zeros(1, dtype=complex)
    return c[: keep[-1] + 1].copy()


def _sum_parts(parts) -> np.ndarray:
    size = max(p.size for p in parts)
    out = np.zeros(size, dtype=complex)
    scale = 0.0
    for p in parts:
        out[: p.size] += p
        scale = max(scale, float(np.max(np.abs(p))))
    return _trim(out, scale)


def _combine_same(a: SGPState, b: SGPState, sign: float) -> SGPState:
    if a.s != b.s or a.gamma != b.gamma or a.L != b.L:
        raise ValueError("states must share s, gamma and L to be added")
    return a.with_coeffs(_sum_parts([a.coeffs, sign * b.coeffs]))


# ---------------------------------------------------------------------------
# evaluation


def _values(state: SGPState, x, xc=None) -> np.ndarray:
    """Unchecked evaluation in the mixed form sum c_j cos^j sin^(s-j) e^{gamma x}."""
    x = np.asarray(x, dtype=float)
    sn, cs = trig(x, state.L, xc)
    c = state.coeffs
    d = c.size - 1
    # homogeneous Horner: sum_j c_j cos^j sin^(d-j)
    acc = np.full(x.shape, c[d], dtype=complex)
    spow = np.ones(x.shape)
    for j in range(d - 1, -1, -1):
        spow = spow * sn
        acc = acc * cs + c[j] * spow
    with np.errstate(divide="ignore", over="ignore"):
        lead = np.exp((state.s - d) * np.log(sn) + state.gamma * x)
    return acc * lead


def evaluate(state: SGPState, x, xc=None):
    """Value of the state at x in (0, L)."""
    x = np.asarray(x, dtype=float)
    xc_arr = state.L - x if xc is None else np.asarray(xc, dtype=float)
    if np.any(~(x > 0)) or np.any(~(xc_arr > 0)):
        raise DomainError("evaluate requires 0 < x < L")
    if state.s - state.degree < 0 and np.any(np.minimum(x, xc_arr) < _ENDPOINT_GUARD * state.L):
        raise OverflowError("state is singular at the endpoint and x is within 1e-12 L of it")
    out = _values(state, x, xc_arr)
    if not np.all(np.isfinite(out)):
        raise OverflowError("state value overflowed")
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# exact calculus on coefficient lists


def _d_parts(state: SGPState, coeffs=None):
    """Pieces of d/dx acting on P: gamma P + s k lam P - k (1 + lam^2) P'."""
    c = state.coeffs if coeffs is None else coeffs
    k = np.pi / state.L
    parts = [state.gamma * c, state.s * k * P.polymulx(c)]
    if c.size > 1:
        parts.append(-k * P.polymul([1.0, 0.0, 1.0], P.polyder(c)))
    return parts


def differentiate(state: SGPState) -> SGPState:
    """Exact derivative; the polynomial degree rises by at most one."""
    return state.with_coeffs(_sum_parts(_d_parts(state)))


def _w_poly(params: PTParams) -> np.ndarray:
    nu1 = params.nu + 1.0
    return params.hbar * params.k * np.array([params.beta / nu1, -nu1])


def _check_L(params: PTParams, state: SGPState) -> None:
    if params.L != state.L:
        raise ValueError("state and parameters use different interval lengths")


def apply_lowering(params: PTParams, state: SGPState) -> SGPState:
    """A = W(x) + hbar d/dx."""
    _check_L(params, state)
    parts = [P.polymul(_w_poly(params), state.coeffs)]
    parts += [params.hbar * p for p in _d_parts(state)]
    return state.with_coeffs(_sum_parts(parts))


def apply_raising(params: PTParams, state: SGPState) -> SGPState:
    """A^dagger = W(x) - hbar d/dx."""
    _check_L(params, state)
    parts = [P.polymul(_w_poly(params), state.coeffs)]
    parts += [-params.hbar * p for p in _d_parts(state)]
    return state.with_coeffs(_sum_parts(parts))


def _second_derivative_parts(state: SGPState):
    first = np.zeros(state.coeffs.size + 1, dtype=complex)
    for p in _d_parts(state):
        first[: p.size] += p
    return _d_parts(state, first)


def apply_kinetic(params: PTParams, state: SGPState) -> SGPState:
    """-(hbar^2 / 2m) d^2/dx^2."""
    _check_L(params, state)
    f = -params.hbar**2 / (2.0 * params.m)
    return state.with_coeffs(_sum_parts([f * p for p in _second_derivative_parts(state)]))


def apply_momentum(params: PTParams, state: SGPState) -> SGPState:
    """-i hbar d/dx."""
    _check_L(params, state)
    return state.with_coeffs(_sum_parts([-1j * params.hbar * p for p in _d_parts(state)]))


def multiply(state: SGPState, poly) -> SGPState:
    """Multiply by a polynomial in cot(pi x/L) (ascending coefficients)."""
    return state.with_coeffs(_sum_parts([P.polymul(np.asarray(poly, dtype=complex), state.coeffs)]))


def apply_hamiltonian(params: PTParams, state: SGPState) -> SGPState:
    """tau = -(hbar^2/2m) d^2/dx^2 + V, with 1/sin^2 = 1 + cot^2."""
    _check_L(params, state)
    if state.s < 1:
        raise DomainError("apply_hamiltonian requires s >= 1")
    e0 = params.e0
    nn = params.nu * (params.nu + 1.0)
    v_poly = e0 * np.array([nn, -2.0 * params.beta, nn])
    f = -params.hbar**2 / (2.0 * params.m)
    parts = [f * p for p in _second_derivative_parts(state)]
    parts.append(P.polymul(v_poly, state.coeffs))
    return state.with_coeffs(_sum_parts(parts))


# ---------------------------------------------------------------------------
# quadrature


def inner_product(a: SGPState, b: SGPState, rtol: float = 1e-13) -> complex:
    """<a, b> = integral over (0, L) of conj(a) b, by tanh-sinh quadrature."""
    if a.L != b.L:
        raise ValueError("states live on different intervals")
    worst = a.s + b.s - a.degree - b.degree
    if worst <= -1:
        raise IntegrabilityError(f"mixed sin exponent {worst:g} is not integrable")
    L = a.L

    def integrand(t, tc):
        x, xc = L * t, L * tc
        return np.conj(_values(a, x, xc)) * _values(b, x, xc)

    res = integrate_interval(integrand, 0.0, rtol=rtol, with_complement=True, max_level=12)
    return L * res.value


def norm(state: SGPState) -> float:
    if state.is_zero:
        return 0.0
    return float(np.sqrt(max(inner_product(state, state).real, 0.0)))


def normalized(state: SGPState) -> SGPState:
    n = norm(state)
    if n == 0:
        raise ValueError("cannot normalize the zero state")
    return state * (1.0 / n)


def fix_phase(state: SGPState) -> SGPState:
    """Make the top coefficient real and positive (state positive near x = 0)."""
    top = state.coeffs[-1]
    if top == 0:
        return state
    return state * (abs(top) / top)


# ---------------------------------------------------------------------------
# serialization


def to_dict(state: SGPState) -> dict:
    return {
        "s": state.s,
        "gamma": [state.gamma.real, state.gamma.imag],
        "coeffs": [[c.real, c.imag] for c in state.coeffs.tolist()],
        "L": state.L,
    }


def to_json(state: SGPState) -> str:
    return json.dumps(to_dict(state), sort_keys=True)


def from_json(text: str) -> SGPState:
    data = json.loads(text) if isinstance(text, str) else text
    coeffs = [complex(re, im) for re, im in data["coeffs"]]
    return SGPState(data["s"], complex(*data["gamma"]), coeffs, data["L"])
