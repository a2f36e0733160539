import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptcs.coherent import (
    PhasePoint,
    big_f_test_grid,
    big_f,
    check_big_f_closed_form,
    coherent_state,
    expectation,
    f_by_quadrature,
    log_normalization,
    log_big_f,
    lowering_symbol_A,
    lowering_symbol_H,
    lowering_symbol_invsin2,
    lowering_symbol_kinetic,
    normalization,
    normalization_via_f,
    overlap,
    w0,
)
from ptcs.ptmodel import DomainError, PTParams, energy, ground_state
from ptcs.sgp import SGPState, apply_lowering, evaluate, inner_product, norm

E0 = math.pi**2 / 2


def f_mpmath(nu, z):
    with mpmath.workdps(30):
        g = lambda x: mpmath.sin(mpmath.pi * x) ** (2 * nu + 2) * mpmath.exp(z * x)
        return complex(mpmath.quad(g, [0, 0.25, 0.5, 0.75, 1]))


# --- F_nu ------------------------------------------------------------------


def test_big_f_examples():
    assert abs(big_f(0, 0) - 0.5) < 1e-15
    assert abs(big_f(1, 0) - 0.375) < 1e-14
    assert abs(big_f(0, 2) - f_mpmath(0, 2)) < 1e-13
    assert abs(big_f(0, 2) - 1.4503) < 1e-4
    with pytest.raises(DomainError):
        big_f(-1.5, 0)


@pytest.mark.parametrize("nu", [-0.9, -0.25, 0.0, 0.5, 1.7])
@pytest.mark.parametrize("z", [3 - 4j, -12 + 7j, 15j, -19.5])
def test_big_f_against_mpmath(nu, z):
    ref = f_mpmath(nu, z)
    assert abs(big_f(nu, z) - ref) <= 1e-11 * abs(ref)


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.5])
def test_big_f_on_complex_grid(nu):
    rep = check_big_f_closed_form(nu)
    assert len(big_f_test_grid()) == 25
    assert rep.passed, rep.summary()


def test_big_f_zero_at_gamma_pole():
    # nu + 2 - i z / 2 pi = 0 at z = -2 pi i (nu + 2)
    assert big_f(0.0, -4j * math.pi) == 0
    assert abs(f_by_quadrature(0.0, -4j * math.pi)) < 1e-14
    assert log_big_f(0.0, 4j * math.pi).real == -math.inf


@given(st.floats(-0.9, 3), st.floats(-30, 30))
def test_big_f_real_positive_for_real_argument(nu, z):
    v = big_f(nu, z)
    assert v.imag == 0 and v.real > 0


@given(st.floats(-0.9, 3), st.floats(-20, 20), st.floats(-20, 20))
def test_big_f_conjugation_and_reflection(nu, a, b):
    z = complex(a, b)
    f = big_f(nu, z)
    assert abs(big_f(nu, z.conjugate()) - f.conjugate()) <= 1e-12 * abs(f)
    # x -> 1 - x in the integral
    assert abs(big_f(nu, -z) * cmath.exp(z) - f) <= 1e-11 * abs(f)


# --- normalization -------------------------------------------------------------


def test_normalization_examples():
    assert normalization(0, 1, 0.5) == pytest.approx(math.sqrt(2), rel=1e-14)
    assert normalization(1, 1, 0.5) == pytest.approx(8 / math.sqrt(24), rel=1e-14)
    n = normalization(0, 1, 0.25)
    ref = 1 / math.sqrt(f_mpmath(0, 2 * float(w0(0, 1, 0.25))).real)
    assert n == pytest.approx(ref, rel=1e-11)
    with pytest.raises(DomainError):
        normalization(0, 1, 1.0)


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.5])
def test_normalization_two_forms(nu):
    for L in (1.0, 3.0):
        for q in np.linspace(0.05, 0.95, 19) * L:
            a, b = normalization(nu, L, q), normalization_via_f(nu, L, q)
            assert abs(a - b) <= 1e-11 * a


def test_normalization_extreme_q():
    q = 1e-9
    logs = [float(log_normalization(1.0, 1.0, q, 1 - q)), float(log_normalization(1.0, 1.0, 1 - q, q))]
    assert all(math.isfinite(v) for v in logs)
    # N grows like |lambda|^{nu+3/2} on the left and decays like exp(-pi y) on the right
    assert logs[0] > 0 > logs[1]
    assert normalization(1.0, 1.0, q, 1 - q) == pytest.approx(math.exp(logs[0]), rel=1e-12)
    with pytest.raises(OverflowError):
        coherent_state(1.0, 1.0, PhasePoint(1 - q, 0.0, q))


# --- states ---------------------------------------------------------------------


def test_centre_state_is_well_ground_state():
    for L in (1.0, 2.5):
        eta = coherent_state(0.0, L, PhasePoint(L / 2))
        x = np.linspace(0.05, 0.95, 7) * L
        g = ground_state(PTParams(L=L))
        assert np.allclose(evaluate(eta.body, x), evaluate(g, x), atol=1e-13)
        assert np.allclose(evaluate(eta.body, x), math.sqrt(2 / L) * np.sin(np.pi * x / L), atol=1e-13)


@given(st.floats(-0.9, 3), st.floats(0.02, 0.98), st.floats(-20, 20), st.floats(0.5, 3))
def test_coherent_state_unit_norm(nu, t, p, L):
    eta = coherent_state(nu, L, PhasePoint(t * L, p))
    assert eta.body.s == nu + 1
    assert abs(norm(eta.body) - 1) < 1e-12


@given(st.floats(0, 3), st.floats(0, 3), st.floats(0.03, 0.97), st.floats(-15, 15))
def test_eigenvector_property(nu, beta, q, p):
    params = PTParams(nu=nu, beta=beta)
    pt = PhasePoint(q, p)
    eta = coherent_state(nu, 1.0, pt).body
    rhs = eta * lowering_symbol_A(params, pt)
    assert norm(apply_lowering(params, eta) - rhs) < 1e-10 * max(1.0, abs(lowering_symbol_A(params, pt)))


def test_state_independent_of_beta():
    pt = PhasePoint(0.3, 1.5)
    eta = coherent_state(0.5, 1.0, pt).body
    for beta in (0.0, 2.0):
        params = PTParams(nu=0.5, beta=beta)
        res = norm(apply_lowering(params, eta) - eta * lowering_symbol_A(params, pt))
        assert res < 1e-10


def test_renormalize_is_consistent():
    pt = PhasePoint(0.2, -3.0)
    a = coherent_state(1.2, 1.0, pt)
    b = coherent_state(1.2, 1.0, pt, renormalize=True)
    assert np.allclose(a.body.coeffs, b.body.coeffs, rtol=1e-12)


# --- overlaps ------------------------------------------------------------------


def test_overlap_examples():
    a = coherent_state(0.0, 1.0, PhasePoint(0.5))
    assert abs(overlap(a, a) - 1) < 1e-14
    b = coherent_state(0.0, 1.0, PhasePoint(0.5, 2 * math.pi))
    assert abs(overlap(a, b) - inner_product(a.body, b.body)) < 1e-12
    c = coherent_state(2.0, 1.0, PhasePoint(0.5))
    assert abs(overlap(a, c) - 0.9487) < 1e-4
    assert abs(overlap(a, c) - inner_product(a.body, c.body)) < 1e-12


@given(
    st.floats(-0.9, 2.5), st.floats(-0.9, 2.5),
    st.floats(0.05, 0.95), st.floats(0.05, 0.95),
    st.floats(-10, 10), st.floats(-10, 10), st.floats(0.5, 2.0),
)
def test_overlap_matches_quadrature_and_is_hermitian(nu1, nu2, q1, q2, p1, p2, L):
    a = coherent_state(nu1, L, PhasePoint(q1 * L, p1))
    b = coherent_state(nu2, L, PhasePoint(q2 * L, p2))
    ab = overlap(a, b)
    assert abs(ab - inner_product(a.body, b.body)) < 1e-11
    assert abs(ab - overlap(b, a).conjugate()) < 1e-13
    if nu1 == nu2:
        assert abs(ab) <= 1 + 1e-13


def test_gram_matrix_positive_semidefinite():
    rng = np.random.default_rng(7)
    pts = [PhasePoint(q, p) for q, p in zip(rng.uniform(0.05, 0.95, 6), rng.uniform(-8, 8, 6))]
    states = [coherent_state(0.7, 1.0, pt) for pt in pts]
    gram = np.array([[overlap(a, b) for b in states] for a in states])
    assert np.allclose(gram, gram.conj().T, atol=1e-14)
    assert np.min(np.linalg.eigvalsh(gram)) > -1e-10


# --- lowering symbols -------------------------------------------------------------


def test_symbol_a_examples():
    assert lowering_symbol_A(PTParams(), PhasePoint(0.5, 3.0)) == pytest.approx(3j, abs=1e-15)
    assert lowering_symbol_A(PTParams(nu=1, beta=2), PhasePoint(0.5)) == pytest.approx(math.pi, rel=1e-14)
    p = PTParams(nu=0.4, beta=1.0)
    assert lowering_symbol_A(p, PhasePoint(0.3, -2.0)) == lowering_symbol_A(p, PhasePoint(0.3, 2.0)).conjugate()


def test_symbol_h_examples():
    assert lowering_symbol_H(PTParams(), PhasePoint(0.5)) == pytest.approx(E0, rel=1e-14)
    assert lowering_symbol_H(PTParams(), PhasePoint(0.5, math.pi)) == pytest.approx(math.pi**2 / 2 + E0, rel=1e-14)


@given(st.floats(0, 3), st.floats(0.01, 0.99), st.floats(-30, 30))
def test_symbol_h_variational_bound(nu, q, p):
    params = PTParams(nu=nu)
    assert lowering_symbol_H(params, PhasePoint(q, p)) >= energy(params, 0).value * (1 - 1e-14)


def test_symbol_invsin2_and_kinetic_examples():
    assert lowering_symbol_invsin2(0, 1, PhasePoint(0.5)) == pytest.approx(2)
    assert lowering_symbol_invsin2(1, 1, PhasePoint(0.5)) == pytest.approx(4 / 3)
    assert lowering_symbol_invsin2(0, 1, PhasePoint(0.25)) == pytest.approx(4)
    assert lowering_symbol_kinetic(PTParams(), PhasePoint(0.5)) == pytest.approx(E0)
    assert lowering_symbol_kinetic(PTParams(nu=1), PhasePoint(0.5)) == pytest.approx(4 / 3 * E0)
    for nu in (-0.5, -0.7):
        with pytest.raises(DomainError):
            lowering_symbol_invsin2(nu, 1, PhasePoint(0.5))
        with pytest.raises(DomainError):
            lowering_symbol_kinetic(PTParams(nu=nu, extended=True), PhasePoint(0.5))


@given(st.floats(0, 3), st.floats(0.05, 0.95), st.floats(-10, 10))
def test_kinetic_symbol_momentum_shift_and_composition(nu, q, p):
    params = PTParams(nu=nu)
    pt0, pt = PhasePoint(q), PhasePoint(q, p)
    diff = lowering_symbol_kinetic(params, pt) - lowering_symbol_kinetic(params, pt0)
    assert diff == pytest.approx(p * p / 2, rel=1e-12, abs=1e-12)
    # H = P^2/2m + e0 nu (nu+1) / sin^2 at beta = 0
    h = lowering_symbol_kinetic(params, pt) + params.e0 * nu * (nu + 1) * lowering_symbol_invsin2(nu, 1.0, pt)
    assert h == pytest.approx(lowering_symbol_H(params, pt), rel=1e-10)


@pytest.mark.parametrize("nu,beta,q,p", [(0, 0, 0.5, 0), (0.5, 2.0, 0.3, 1.5), (1.5, 0.7, 0.8, -4.0)])
def test_symbols_match_quadrature(nu, beta, q, p):
    params = PTParams(nu=nu, beta=beta)
    pt = PhasePoint(q, p)
    a = lowering_symbol_A(params, pt)
    assert abs(expectation(params, pt, "A") - a) < 1e-10 * max(1, abs(a))
    h = lowering_symbol_H(params, pt)
    assert abs(expectation(params, pt, "H") - h) < 1e-9 * abs(h)
    s = lowering_symbol_invsin2(nu, 1.0, pt)
    assert abs(expectation(params, pt, "invsin2") - s) < 1e-10 * s
    k = lowering_symbol_kinetic(params, pt)
    assert abs(expectation(params, pt, "kinetic") - k) < 1e-10 * k
