"""Resolution of unity, frame functions and reproducing-kernel checks.

Phase-space integrals of the form  int dq dp/(2 pi hbar) p^k <phi, eta><eta, psi>
are reduced to position space: with g_q(x) = N(q) sin^{nu+1} e^{W(q) x/hbar} psi(x)
the p-integral is <g^phi_q, (-i hbar d/dx)^k g^psi_q>, and what is left is a
two-dimensional (q, x) quadrature of the density

    D(q, x) = N(q)^2 sin^{2nu+2}(pi x/L) exp(2 W_{nu,0}(q) x / hbar)

against phi, psi and their derivatives.  D integrates to one in x (for fixed q)
and in q (for fixed x).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .coherent import PhasePoint, coherent_state, lam_q, log_normalization, overlap
from .numerics import (
    NonConvergenceError,
    TruncationWarning,
    compensated_sum,
    gauss_legendre_rule,
    integrate_line,
    log_abs_gamma_scaled,
    tanh_sinh_rule,
)
from .ptmodel import DomainError, PTParams, trig
from .reports import VerificationReport, relative_residual
from .sgp import SGPState, _values, differentiate, inner_product
from .susy import eigenstate

__all__ = [
    "MomentIntegrals",
    "density",
    "moment_integrals",
    "verify_resolution",
    "frame_function",
    "frame_inner",
    "kernel_reproducing_check",
    "fourier_weight_integrand",
    "check_fourier_weight",
]

_LOG_TINY = -740.0


def _log_density(nu: float, L: float, q, qc, x, xc):
    """log D(q, x) for q <= L/2 (all arguments broadcast)."""
    s, _ = trig(x, L, xc)
    y = (nu + 1.0) * lam_q(L, q, qc)
    with np.errstate(divide="ignore"):
        log_s = np.log(s)
    return 2.0 * log_normalization(nu, L, q, qc) + (2.0 * nu + 2.0) * log_s + 2.0 * math.pi * y * x / L


def log_density(nu: float, L: float, q, qc, x, xc):
    """log D(q, x); the half q > L/2 uses D(q, x) = D(L - q, L - x)."""
    q, qc, x, xc = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (q, qc, x, xc)))
    right = q > qc
    return np.where(
        right,
        _log_density(nu, L, np.where(right, qc, q), np.where(right, q, qc), np.where(right, xc, x), np.where(right, x, xc)),
        _log_density(nu, L, q, qc, x, xc),
    )


def density(nu: float, L: float, q, x, qc=None, xc=None):
    """D(q, x) = |eta_{q,p}(x)|^2 (independent of p and hbar)."""
    qc = L - np.asarray(q, dtype=float) if qc is None else qc
    xc = L - np.asarray(x, dtype=float) if xc is None else xc
    with np.errstate(under="ignore"):
        return np.exp(log_density(nu, L, q, qc, x, xc))


# ---------------------------------------------------------------------------
# moment engine


@dataclass(frozen=True)
class MomentIntegrals:
    """I[j, k] = int dq lambda_q^j M_k(q), with M_k the p^k moment at fixed q.

    ``error`` is the change between the last two refinements (absolute, max over
    entries) and ``level`` the tanh-sinh level of the final (q, x) grid.
    """

    values: np.ndarray
    error: float
    level: int

    def combine(self, profile_poly, k: int) -> complex:
        """int dq g(q) M_k(q) for g a polynomial in lambda_q (ascending)."""
        poly = np.asarray(profile_poly, dtype=complex)
        return complex(np.sum(poly * self.values[: poly.size, k]))


def _moments_at_levels(nu, L, hbar, phi, psi, level: int, need_p: bool, max_j: int = 2):
    """I[j, k] on a tanh-sinh tensor grid in (q, x).

    With rho = a (lambda_q + cot x), a = (pi/L)(nu+1), each p^k integrand is a
    polynomial in lambda_q whose coefficients depend on x only, so the double
    sum reduces to row-weights (q) @ D @ column-weights (x).  Entries with
    j > max_j (or k > 0 without ``need_p``) are left as NaN.
    """
    t, tc, w, _ = tanh_sinh_rule(level)
    q, qc, wq = L * t, L * tc, L * w
    x, xc, wx = q, qc, wq
    with np.errstate(under="ignore"):
        dmat = np.exp(log_density(nu, L, q[:, None], qc[:, None], x[None, :], xc[None, :]))
    a_f, b_f = _values(phi, x, xc), _values(psi, x, xc)
    # columns[k][i]: x-coefficient of lambda_q^i in the p^k integrand
    columns = [[np.conj(a_f) * b_f]]
    if need_p:
        a = (math.pi / L) * (nu + 1.0)
        s_x, c_x = trig(x, L, xc)
        cot_x = c_x / s_x
        u = _values(differentiate(phi), x, xc) + a * cot_x * a_f
        v = _values(differentiate(psi), x, xc) + a * cot_x * b_f
        columns.append([-1j * hbar * np.conj(a_f) * v, -1j * hbar * a * np.conj(a_f) * b_f])
        columns.append(
            [
                hbar**2 * np.conj(u) * v,
                hbar**2 * a * (np.conj(u) * b_f + np.conj(a_f) * v),
                hbar**2 * a * a * np.conj(a_f) * b_f,
            ]
        )
    lq = lam_q(L, q, qc)
    # q-integral of lambda_q^m D at each x
    kern = [compensated_sum((wq * lq**m)[:, None] * dmat, axis=0) for m in range(max_j + len(columns[-1]))]
    out = np.full((3, 3), complex(math.nan, math.nan))
    scale = 0.0
    for k, cols in enumerate(columns):
        for j in range(max_j + 1):
            terms = np.concatenate([wx * kern[j + i] * col for i, col in enumerate(cols)])
            out[j, k] = compensated_sum(terms)
            scale = max(scale, float(compensated_sum(np.abs(terms))))
    if not np.all(np.isfinite(out[: max_j + 1, : len(columns)])):
        raise NonConvergenceError("moment integrand overflowed")
    return out, scale


def moment_integrals(
    nu: float,
    L: float,
    phi: SGPState,
    psi: SGPState,
    hbar: float = 1.0,
    tol: float = 1e-10,
    need_p: bool = True,
    max_j: int = 2,
    start: int = 4,
    max_level: int = 8,
) -> MomentIntegrals:
    """Base integrals I[j, k] for j, k in 0..2, refined until they settle.

    Convergence means the largest change in any I[j, k] between successive
    levels is below ``tol`` times the largest absolute mass of the summed
    terms (a natural scale of the pair).  Only j <= ``max_j`` and, without
    ``need_p``, only k = 0 are computed; the lambda_q^2 integrals diverge for
    nu <= -1/2, so the resolution of unity asks for j = 0 alone.
    """
    if phi.L != L or psi.L != L:
        raise ValueError("states live on a different interval")
    if not nu > -1.0:
        raise DomainError("the resolution of unity needs nu > -1")
    prev = None
    for level in range(start, max_level + 1):
        cur, scale = _moments_at_levels(nu, L, hbar, phi, psi, level, need_p, max_j)
        if prev is not None:
            used = (slice(0, max_j + 1), slice(0, 3 if need_p else 1))
            err = float(np.max(np.abs(cur[used] - prev[used])))
            if err <= tol * max(scale, np.max(np.abs(cur[used])), 1e-300):
                return MomentIntegrals(cur, err, level)
        prev = cur
    raise NonConvergenceError(f"moment integrals did not settle to {tol:g} by level {max_level}")


# ---------------------------------------------------------------------------
# resolution of unity


def _direct2d(nu, L, hbar, psi, tol, p_max=None, q_level=5, x_panels=64):
    """int dq int dp/(2 pi hbar) |<eta_{q,p}, psi>|^2 on a truncated p window."""
    t, tc, wt, _ = tanh_sinh_rule(q_level)
    q, qc, wq = L * t, L * tc, L * wt
    xs, wx = gauss_legendre_rule(0.0, L, x_panels)
    xcs = L - xs
    logd = log_density(nu, L, q[:, None], qc[:, None], xs[None, :], xcs[None, :])
    with np.errstate(under="ignore"):
        # g_q(x) = sqrt(D) psi(x); the e^{-ipx/hbar} factor lives in the p matrix
        g = np.exp(0.5 * logd) * _values(psi, xs, xcs)[None, :] * wx[None, :]
    # algebraic endpoint order of g decides the p-tail: |g^(p)|^2 ~ p^(-2 sigma - 2)
    sigma = nu + 1.0 + psi.s - psi.degree
    p_scale = 2.0 * math.pi * hbar / L
    p_cut = p_max if p_max is not None else 32.0 * p_scale
    for _ in range(8):
        panels = int(math.ceil(2.0 * p_cut / p_scale))
        ps, wp = gauss_legendre_rule(-p_cut, p_cut, panels)
        phase = np.exp(-1j * np.outer(xs, ps) / hbar)
        ghat = g @ phase
        dens = np.abs(ghat) ** 2
        edge = 0.5 * (dens[:, 0] + dens[:, -1])
        tail = 2.0 * compensated_sum(wq * edge * p_cut / (2.0 * sigma + 1.0)).real / (2.0 * math.pi * hbar)
        if p_max is not None or tail <= tol / 10.0:
            break
        p_cut *= 2.0
    else:
        warnings.warn(f"direct2d tail bound {tail:.3g} exceeds tol/10", TruncationWarning, stacklevel=3)
    inner = compensated_sum(dens * wp[None, :], axis=1).real
    value = compensated_sum(wq * inner).real / (2.0 * math.pi * hbar)
    return value, tail, p_cut


def verify_resolution(
    nu: float,
    L: float,
    psi: SGPState,
    strategy: str = "parseval",
    tol: float = 1e-8,
    hbar: float = 1.0,
) -> VerificationReport:
    """Check int dq dp/(2 pi hbar) |<eta_{q,p}, psi>|^2 = ||psi||^2.

    ``parseval`` removes the p-integral exactly; ``direct2d`` integrates over a
    truncated momentum window and records the estimated tail in the report.
    """
    if not nu > -1.0:
        raise DomainError("the resolution of unity needs nu > -1")
    target = inner_product(psi, psi).real
    inputs = {"nu": nu, "L": L, "hbar": hbar, "psi_s": psi.s, "psi_degree": psi.degree}
    if strategy == "parseval":
        mi = moment_integrals(nu, L, psi, psi, hbar, tol=tol / 10.0, need_p=False, max_j=0)
        value = mi.values[0, 0].real
        details = {"level": mi.level, "quadrature_error": mi.error}
    elif strategy == "direct2d":
        value, tail, p_cut = _direct2d(nu, L, hbar, psi, tol)
        details = {"p_max": p_cut, "tail_estimate": tail}
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return VerificationReport(
        identity="resolution-of-unity",
        inputs=inputs,
        residual=abs(value - target),
        tolerance=tol,
        strategy=strategy,
        lhs=value,
        rhs=target,
        details=details,
    )


# ---------------------------------------------------------------------------
# frames and kernels


def frame_function(nu: float, params: PTParams, n: int, point: PhasePoint) -> complex:
    """psi_n(q, p) = <eta_{q,p}, phi_n> with eta of index ``nu``."""
    eta = coherent_state(nu, params.L, point, params.hbar)
    return inner_product(eta.body, eigenstate(params, n))


def frame_inner(nu: float, params: PTParams, m: int, n: int, tol: float = 1e-10) -> complex:
    """int dq dp/(2 pi hbar) conj(psi_m) psi_n, with the p-integral done exactly."""
    mi = moment_integrals(
        nu, params.L, eigenstate(params, m), eigenstate(params, n), params.hbar, tol=tol, need_p=False, max_j=0
    )
    return complex(mi.values[0, 0])


def kernel_reproducing_check(
    nu: float,
    L: float,
    sample_points: list[PhasePoint],
    tol: float = 1e-6,
    hbar: float = 1.0,
) -> VerificationReport:
    """K(a; c) = int K(a; b) K(b; c) db/(2 pi hbar) for all ordered sample pairs.

    K(a; b) = <eta_a, eta_b> in closed form; the b-integral is reduced to
    position space and done by quadrature.  The report carries the largest
    residual over the pairs.
    """
    if len(sample_points) < 2:
        raise ValueError("kernel_reproducing_check needs at least two points")
    states = [coherent_state(nu, L, pt, hbar) for pt in sample_points]
    worst, pairs = 0.0, []
    for i, a in enumerate(states):
        for j, c in enumerate(states):
            direct = overlap(a, c)
            mi = moment_integrals(nu, L, a.body, c.body, hbar, tol=tol / 100.0, need_p=False, max_j=0)
            reproduced = complex(mi.values[0, 0])
            res = abs(direct - reproduced)
            pairs.append({"a": i, "c": j, "residual": res})
            worst = max(worst, res)
    return VerificationReport(
        identity="reproducing-kernel",
        inputs={"nu": nu, "L": L, "hbar": hbar, "points": [[pt.q, pt.p] for pt in sample_points]},
        residual=worst,
        tolerance=tol,
        strategy="parseval",
        details={"pairs": pairs},
    )


# ---------------------------------------------------------------------------
# the Fourier identity behind the q-side of the resolution


def fourier_weight_integrand(nu: float, x: float):
    """k -> 4^nu |Gamma(nu+1+ik/2pi)|^2 e^{-k/2} e^{kx} / (pi^2 Gamma(2nu+2)) on L = 1."""
    if not 0.0 < x < 1.0:
        raise DomainError("x must lie in (0, 1)")
    const = nu * math.log(4.0) - 2.0 * math.log(math.pi) - math.lgamma(2.0 * nu + 2.0)

    def f(k):
        k = np.asarray(k, dtype=float)
        u = k / (2.0 * math.pi)
        log_g2 = 2.0 * log_abs_gamma_scaled(nu + 1.0, u) - 0.5 * np.abs(k)
        with np.errstate(under="ignore"):
            return np.exp(const + log_g2 - 0.5 * k + k * x)

    return f


def check_fourier_weight(nu: float, x: float, tol: float = 1e-8) -> VerificationReport:
    """int dk (weight) e^{kx} = 1 / sin^{2nu+2}(pi x), relative residual."""
    f = fourier_weight_integrand(nu, x)
    res = integrate_line(f, tol=1e-14, decay_scale=1.0 / min(x, 1.0 - x), rtol=1e-14)
    exact = math.sin(math.pi * x) ** (-(2.0 * nu + 2.0))
    return VerificationReport(
        identity="fourier-weight",
        inputs={"nu": nu, "x": x},
        residual=relative_residual(res.value, exact),
        tolerance=tol,
        strategy="line-quadrature",
        lhs=res.value,
        rhs=exact,
    )
