import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptcs.coherent import PhasePoint, big_f, coherent_state
from ptcs.ptmodel import DomainError, PTParams, energy, ground_state
from ptcs.sgp import (
    IntegrabilityError,
    SGPState,
    apply_hamiltonian,
    apply_kinetic,
    apply_lowering,
    apply_momentum,
    apply_raising,
    differentiate,
    evaluate,
    from_json,
    inner_product,
    multiply,
    norm,
    to_json,
)
from ptcs.susy import eigenstate, partner_shift


def random_state(rng, s, degree, L=1.0, complex_gamma=True):
    coeffs = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    gamma = rng.normal() * 2 + (1j * rng.normal() * 3 if complex_gamma else 0)
    return SGPState(s, gamma, coeffs, L)


def test_state_validation():
    with pytest.raises(DomainError):
        SGPState(-0.5, 0, [1.0])
    with pytest.raises(ValueError):
        SGPState(1.0, 0, [])
    st_ = SGPState(1.0, 0, [1.0, 2.0])
    with pytest.raises(ValueError):
        st_.coeffs[0] = 3.0


def test_evaluate_examples():
    assert evaluate(SGPState(1.0, 0, [math.sqrt(2)]), 0.5) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert evaluate(SGPState(1.0, 0, [math.sqrt(2)]), 0.25) == pytest.approx(1.0, rel=1e-15)
    assert evaluate(SGPState(2.0, 1j, [1.0]), 0.5) == pytest.approx(np.exp(0.5j), rel=1e-15)


def test_evaluate_errors():
    st_ = SGPState(1.0, 0, [1.0])
    for x in (0.0, 1.0, -0.2, 1.3):
        with pytest.raises(DomainError):
            evaluate(st_, x)
    singular = SGPState(1.0, 0, [0.0, 0.0, 1.0])
    with pytest.raises(OverflowError):
        evaluate(singular, 1e-13)
    # finite away from the guard band
    assert np.isfinite(evaluate(singular, 1e-6))


def test_evaluate_mixed_form_near_endpoint():
    st_ = SGPState(5.0, 0.0, [0.0, 0.0, 0.0, 1.0])
    x = 1e-9
    expected = np.cos(np.pi * x) ** 3 * np.sin(np.pi * x) ** 2
    assert evaluate(st_, x) == pytest.approx(expected, rel=1e-12)


def test_differentiate_examples():
    d = differentiate(SGPState(1.0, 0, [1.0]))
    assert np.allclose(d.coeffs, [0, np.pi])
    g = 0.7 - 0.3j
    assert np.allclose(differentiate(SGPState(0.0, g, [1.0])).coeffs, [g])
    assert np.allclose(differentiate(SGPState(2.0, 0, [1.0])).coeffs, [0, 2 * np.pi])


@given(st.integers(0, 2**31), st.integers(0, 4), st.floats(1.0, 4.0))
def test_differentiate_matches_finite_difference(seed, degree, extra):
    rng = np.random.default_rng(seed)
    st_ = random_state(rng, degree + extra, degree, L=1.7)
    d = differentiate(st_)
    assert d.s == st_.s and d.gamma == st_.gamma and d.degree <= st_.degree + 1
    x = np.linspace(0.1, 1.6, 13)
    h = 1e-5
    fd = (evaluate(st_, x + h) - evaluate(st_, x - h)) / (2 * h)
    exact = evaluate(d, x)
    scale = np.max(np.abs(exact))
    assert np.max(np.abs(fd - exact)) <= 1e-7 * scale


@given(st.floats(0, 3), st.floats(0, 3), st.integers(0, 2**31))
def test_ladder_adjointness(nu, beta, seed):
    rng = np.random.default_rng(seed)
    p = PTParams(nu=nu, beta=beta, L=1.3)
    a = random_state(rng, 3 + rng.uniform(), 1, L=1.3)
    b = random_state(rng, 3 + rng.uniform(), 2, L=1.3)
    lhs = inner_product(apply_raising(p, a), b)
    rhs = inner_product(a, apply_lowering(p, b))
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_lowering_examples():
    p = PTParams(nu=1.5, beta=2.0)
    assert apply_lowering(p, ground_state(p)).is_zero or np.max(
        np.abs(apply_lowering(p, ground_state(p)).coeffs)
    ) < 1e-12
    pt = PhasePoint(0.3, 2.0)
    eta = coherent_state(p.nu, p.L, pt, p.hbar).body
    out = apply_lowering(p, eta)
    s, c = math.sin(0.3 * math.pi), math.cos(0.3 * math.pi)
    w = -math.pi * ((p.nu + 1) * c / s - p.beta / (p.nu + 1))
    assert out.s == eta.s and out.gamma == eta.gamma
    assert np.allclose(out.coeffs, eta.coeffs * (w + 2j), rtol=1e-13)


def test_lowering_on_first_excited_state():
    p = PTParams(nu=0.5, beta=1.0)
    lhs = apply_lowering(p, eigenstate(p, 1, phase="chain"))
    rhs = eigenstate(partner_shift(p), 0, phase="chain") * math.sqrt(2 * p.m * (energy(p, 1).value - energy(p, 0).value))
    assert norm(lhs - rhs) < 1e-10 * norm(rhs)


def test_raising_builds_first_excited_state():
    p = PTParams(nu=0.8, beta=0.4)
    raised = apply_raising(p, ground_state(partner_shift(p)))
    assert raised.degree == 1
    target = eigenstate(p, 1)
    ovl = inner_product(target, raised)
    assert abs(abs(ovl) - norm(raised)) < 1e-12 * norm(raised)


def test_hamiltonian_examples():
    p = PTParams()
    g = ground_state(p)
    out = apply_hamiltonian(p, g)
    assert norm(out - g * p.e0) < 1e-12
    with pytest.raises(DomainError):
        apply_hamiltonian(p, SGPState(0.8, 0, [1.0]))


@given(st.floats(0, 3), st.floats(0, 3), st.integers(0, 2**31), st.integers(0, 3))
def test_factorization_and_shape_invariance(nu, beta, seed, degree):
    rng = np.random.default_rng(seed)
    p = PTParams(nu=nu, beta=beta)
    # endpoint order s - degree = nu + 1 keeps every image square integrable
    st_ = random_state(rng, nu + 1 + degree, degree)
    e0 = energy(p, 0).value
    h = apply_hamiltonian(p, st_)
    assert h.s == st_.s and h.degree <= st_.degree + 2
    fact = apply_raising(p, apply_lowering(p, st_)) * (1 / (2 * p.m)) + st_ * e0
    scale = norm(st_)
    assert norm(h - fact) < 1e-10 * scale
    shifted = apply_lowering(p, apply_raising(p, st_)) * (1 / (2 * p.m)) + st_ * e0
    assert norm(apply_hamiltonian(partner_shift(p), st_) - shifted) < 1e-10 * scale


@given(st.integers(0, 2**31))
def test_hamiltonian_linear(seed):
    rng = np.random.default_rng(seed)
    p = PTParams(nu=0.5, beta=1.0)
    a = random_state(rng, 3.5, 2)
    b = a.with_coeffs(rng.normal(size=2) + 0j)
    c1, c2 = complex(rng.normal(), rng.normal()), complex(rng.normal(), rng.normal())
    lhs = apply_hamiltonian(p, a * c1 + b * c2)
    rhs = apply_hamiltonian(p, a) * c1 + apply_hamiltonian(p, b) * c2
    assert norm(lhs - rhs) <= 1e-12 * (norm(lhs) + 1)


def test_kinetic_and_momentum_consistent():
    p = PTParams(nu=1.0, L=2.0, m=0.7, hbar=1.3)
    st_ = SGPState(3.0, 0.4 + 1j, [1.0, 0.5j], 2.0)
    kin = apply_kinetic(p, st_)
    mom2 = apply_momentum(p, apply_momentum(p, st_)) * (1 / (2 * p.m))
    assert norm(kin - mom2) < 1e-12 * norm(kin)


def test_multiply_by_invsin2():
    st_ = SGPState(3.0, 0.0, [1.0], 1.0)
    out = multiply(st_, [1.0, 0.0, 1.0])
    x = np.linspace(0.1, 0.9, 5)
    assert np.allclose(evaluate(out, x), np.sin(np.pi * x), rtol=1e-13)


def test_inner_product_examples():
    p = PTParams(nu=0.3, beta=1.1)
    g = ground_state(p)
    assert abs(inner_product(g, g) - 1) < 1e-12
    assert abs(inner_product(eigenstate(p, 0), eigenstate(p, 1))) < 1e-10
    a = SGPState(1.0, 0, [1.0])
    b = SGPState(1.0, 2.0, [1.0])
    assert abs(inner_product(a, b) - big_f(0.0, 2.0)) < 1e-12
    with pytest.raises(IntegrabilityError):
        inner_product(SGPState(0.0, 0, [1.0, 1.0]), SGPState(0.0, 0, [1.0]))


@given(st.integers(0, 2**31))
def test_inner_product_hermitian_and_positive(seed):
    rng = np.random.default_rng(seed)
    a = random_state(rng, 1 + 2 * rng.uniform(), 1, L=0.8)
    b = random_state(rng, 2.5, 2, L=0.8)
    assert abs(inner_product(a, b) - np.conj(inner_product(b, a))) < 1e-13 * (1 + abs(inner_product(a, b)))
    assert inner_product(a, a).real > 0 and abs(inner_product(a, a).imag) < 1e-14 * inner_product(a, a).real


@given(st.integers(0, 2**31), st.integers(0, 3))
def test_endpoint_decay(seed, degree):
    rng = np.random.default_rng(seed)
    st_ = random_state(rng, degree + 1 + rng.uniform(), degree, complex_gamma=False)
    x = np.linspace(0.001, 0.999, 999)
    peak = np.max(np.abs(evaluate(st_, x)))
    for end in (1e-6, 1 - 1e-6):
        assert abs(evaluate(st_, end)) < 1e-4 * peak


def test_json_round_trip():
    st_ = SGPState(2.5, 0.3 - 1.25j, [1.0, -2j, 0.5 + 0.25j], 3.0)
    back = from_json(to_json(st_))
    assert back.s == st_.s and back.gamma == st_.gamma and back.L == st_.L
    assert np.array_equal(back.coeffs, st_.coeffs)
    assert '"coeffs"' in to_json(st_)
