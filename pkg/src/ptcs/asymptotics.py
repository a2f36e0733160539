"""Large-L behaviour of the coherent states (beta = 0, interval centred at zero).

On the translated interval X = x - L/2 in (-L/2, L/2) the superpotential is
W(X) = hbar (pi/L)(nu+1) tan(pi X/L), nearly linear for |X| << L, and eta_{Q,p}
is compared with the Gaussian obtained from the quadratic expansion of its
exponent.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .coherent import PhasePoint, coherent_state
from .numerics import integrate_interval
from .ptmodel import DomainError
from .sgp import _values

__all__ = [
    "GaussianApprox",
    "DegradedLimitWarning",
    "harmonic_approx",
    "limit_fidelity",
    "linearization_constant",
    "to_interval",
]


class DegradedLimitWarning(UserWarning):
    """The phase point is not small compared with L, so the limit is poor."""


@dataclass(frozen=True)
class GaussianApprox:
    """amplitude * exp(-(X - center)^2 / (2 width^2) + i momentum X / hbar), up to a constant phase."""

    center: float
    width: float
    momentum: float
    amplitude: float
    hbar: float = 1.0

    def __call__(self, X):
        X = np.asarray(X, dtype=float)
        return self.amplitude * np.exp(-0.5 * ((X - self.center) / self.width) ** 2 + 1j * self.momentum * X / self.hbar)


def to_interval(L: float, point: PhasePoint) -> PhasePoint:
    """Map a translated point (Q in (-L/2, L/2)) to the (0, L) picture."""
    if not abs(point.q) < 0.5 * L:
        raise DomainError("translated q must lie in (-L/2, L/2)")
    return PhasePoint(0.5 * L + point.q, point.p, 0.5 * L - point.q)


def harmonic_approx(nu: float, L: float, point: PhasePoint, hbar: float = 1.0) -> GaussianApprox:
    """Gaussian read off exp(-(nu+1) pi^2 X^2/(2L^2) + (nu+1) pi^2 Q X/L^2 + i p X/hbar).

    ``point.q`` is the translated position Q.  The amplitude is the limiting
    normalization 2^{nu+1} Gamma(nu+2) / (sqrt(L) sqrt(Gamma(2nu+3))).
    """
    if not nu > -1.0:
        raise DomainError("nu must exceed -1")
    to_interval(L, point)
    width = L / (math.pi * math.sqrt(nu + 1.0))
    amp = math.exp((nu + 1.0) * math.log(2.0) + math.lgamma(nu + 2.0) - 0.5 * math.log(L) - 0.5 * math.lgamma(2.0 * nu + 3.0))
    return GaussianApprox(point.q, width, point.p, amp, hbar)


def limit_fidelity(nu: float, L: float, point: PhasePoint, hbar: float = 1.0, rtol: float = 1e-13) -> float:
    """|<eta, g>|^2 / (||eta||^2 ||g||^2) on the interval, g the harmonic Gaussian.

    Both norms are taken over the interval itself.  A
    :class:`DegradedLimitWarning` is issued when |Q| > L/10.
    """
    if abs(point.q) > 0.1 * L:
        warnings.warn(
            f"|q| = {abs(point.q):g} exceeds L/10 = {0.1 * L:g}; the harmonic limit is degraded",
            DegradedLimitWarning,
            stacklevel=2,
        )
    gauss = harmonic_approx(nu, L, point, hbar)
    eta = coherent_state(nu, L, to_interval(L, point), hbar).body

    def parts(t, tc):
        x, xc = L * t, L * tc
        X = np.where(t < 0.5, x - 0.5 * L, 0.5 * L - xc)
        e = _values(eta, x, xc)
        g = gauss(X)
        return np.stack([np.conj(e) * g, np.abs(e) ** 2, np.abs(g) ** 2])

    cross = integrate_interval(lambda t, tc: parts(t, tc)[0], 0.0, rtol=rtol, with_complement=True, max_level=12).value
    ee = integrate_interval(lambda t, tc: parts(t, tc)[1], 0.0, rtol=rtol, with_complement=True, max_level=12).value.real
    gg = integrate_interval(lambda t, tc: parts(t, tc)[2], 0.0, rtol=rtol, with_complement=True, max_level=12).value.real
    return min(1.0, abs(cross) ** 2 / (ee * gg))


def linearization_constant(nu: float, L: float, hbar: float = 1.0, samples: int = 201) -> float:
    """max |W(X) - (nu+1) hbar pi^2 X / L^2| * L^4 / |X|^3 over 0 < |X| <= L/10."""
    X = np.linspace(-0.1 * L, 0.1 * L, samples)
    X = X[X != 0.0]
    w = hbar * (math.pi / L) * (nu + 1.0) * np.tan(math.pi * X / L)
    lin = (nu + 1.0) * hbar * math.pi**2 * X / L**2
    return float(np.max(np.abs(w - lin) * L**4 / np.abs(X) ** 3))
