import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptcs.ptmodel import DomainError, PTParams, energy, ground_state
from ptcs.sgp import SGPState, apply_lowering, evaluate, inner_product, norm
from ptcs.susy import (
    chain_drift,
    check_eigen_residual,
    check_factorization,
    check_gegenbauer,
    check_intertwining,
    eigenstate,
    partner_shift,
)


def test_partner_shift():
    p = PTParams(nu=0.5, beta=2.0, L=3.0)
    q = partner_shift(p)
    assert q.nu == 1.5 and q.beta == 2.0 and q.L == 3.0


def test_intertwining_coefficient_example():
    p = PTParams()
    lhs = apply_lowering(p, eigenstate(p, 1, phase="chain"))
    rhs = eigenstate(partner_shift(p), 0, phase="chain")
    # sqrt(2 m e0 f_1) = sqrt(pi^2 * 3) = pi sqrt(3)
    assert norm(lhs - rhs * (math.pi * math.sqrt(3))) < 1e-10
    assert check_intertwining(p, 0).passed


@pytest.mark.parametrize("nu,beta", [(0, 0), (0.5, 1.0), (2.0, 3.0), (1.0, 0.0)])
def test_intertwining_chain(nu, beta):
    p = PTParams(nu=nu, beta=beta)
    for n in range(6):
        rep = check_intertwining(p, n)
        assert rep.passed, rep.summary()
        assert rep.details["chain_drift"] < 1e-10


def test_phase_conventions_differ_by_sign():
    p = PTParams(nu=0.3, beta=0.7)
    for n in range(5):
        pos, chain = eigenstate(p, n), eigenstate(p, n, phase="chain")
        assert norm(pos - chain * (-1) ** n) < 1e-12
        x = np.array([1e-3])
        assert evaluate(pos, x)[0].real > 0
    with pytest.raises(ValueError):
        eigenstate(p, 1, phase="other")
    with pytest.raises(DomainError):
        eigenstate(p, 31)


def test_eigen_residual_and_factorization_examples():
    p = PTParams(nu=1.0, beta=2.0)
    assert check_factorization(p, ground_state(p), tol=1e-12).passed
    assert check_factorization(p, eigenstate(p, 2)).passed
    for n in range(6):
        assert check_eigen_residual(p, n).passed


@given(st.floats(0, 3), st.floats(0, 3), st.integers(0, 2**31))
def test_factorization_random_states(nu, beta, seed):
    rng = np.random.default_rng(seed)
    p = PTParams(nu=nu, beta=beta)
    c = rng.normal(size=4) + 1j * rng.normal(size=4)
    state = SGPState(nu + 1 + 3, rng.normal(), c)
    rep = check_factorization(p, state, tol=1e-9)
    assert rep.passed and rep.to_dict()["pass"] is True


def test_energy_chain_exact():
    p = PTParams(nu=0.37, beta=1.9)
    for n in range(20):
        assert energy(p, n).value == energy(PTParams(nu=p.nu + n, beta=p.beta), 0).value


@pytest.mark.parametrize("nu,beta", [(0, 0), (0.5, 2.0)])
def test_gram_matrix_identity(nu, beta):
    p = PTParams(nu=nu, beta=beta)
    states = [eigenstate(p, n) for n in range(9)]
    gram = np.array([[inner_product(a, b) for b in states] for a in states])
    assert np.max(np.abs(gram - np.eye(9))) < 1e-9


def test_beta_reflection():
    a = PTParams(nu=0.6, beta=1.4, extended=True)
    b = PTParams(nu=0.6, beta=-1.4, extended=True)
    x = np.linspace(0.02, 0.98, 49)
    for n in range(5):
        fa = evaluate(eigenstate(a, n), 1 - x, x)
        fb = evaluate(eigenstate(b, n), x)
        ratio = fa[24] / fb[24]
        assert abs(abs(ratio) - 1) < 1e-9
        assert np.max(np.abs(fa - ratio * fb)) < 1e-9


def test_gegenbauer_agreement():
    p = PTParams(nu=1.0)
    for n in range(6):
        assert check_gegenbauer(p, n).passed
    with pytest.raises(DomainError):
        check_gegenbauer(PTParams(nu=1.0, beta=1.0), 0)


def test_chain_drift_small():
    p = PTParams(nu=0.0, beta=0.5)
    assert chain_drift(p, 0) == 0.0
    assert max(chain_drift(p, n) for n in range(1, 12)) < 1e-10


def test_report_json_shape():
    d = check_eigen_residual(PTParams(), 1).to_dict()
    for key in ("identity", "params", "n", "residual", "tolerance", "pass"):
        assert key in d
    assert d["n"] == 1 and d["params"]["nu"] == 0.0
