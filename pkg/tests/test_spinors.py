import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from weylmod import spinors
from weylmod.errors import ZeroMomentumError
from weylmod.spinors import SIGMA, dirac_matrices

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False, allow_subnormal=False)
vec4 = arrays(float, 4, elements=finite)
nonzero3 = arrays(float, 3, elements=finite).filter(lambda p: np.linalg.norm(p) > 1e-3)


@given(vec4)
def test_slash_determinant_is_minkowski_square(x):
    for variant in ("under", "tilde"):
        d = np.linalg.det(spinors.slash2(x, variant))
        assert abs(d - spinors.minkowski_square(x)) <= 1e-12 * max(1.0, np.sum(x**2))


@given(vec4)
def test_slash_matches_explicit_matrix(x):
    expected = np.array([[x[0] + x[3], x[1] - 1j * x[2]], [x[1] + 1j * x[2], x[0] - x[3]]])
    assert np.allclose(spinors.slash2(x), expected, atol=1e-14)


def test_slash_rejects_unknown_variant():
    with pytest.raises(ValueError):
        spinors.slash2(np.zeros(4), "hat")


@given(nonzero3)
def test_onshell_matrices_are_rank_one_projections(p):
    pp, pm = spinors.onshell_matrices(p)
    n = np.linalg.norm(p)
    assert np.allclose(pp @ pp, 2 * n * pp, atol=1e-11 * n**2)
    assert np.allclose(pp @ pm, 0, atol=1e-11 * n**2)
    assert abs(np.linalg.det(pp)) < 1e-10 * n**2


@given(nonzero3)
def test_nu0_is_the_positive_helicity_eigenvector(p):
    nu = spinors.nu0(p)
    n = np.linalg.norm(p)
    assert abs(np.linalg.norm(nu) - 1) < 1e-13
    assert np.allclose(spinors.sigma_dot(p) @ nu, n * nu, atol=1e-12 * n)
    # independent oracle: eigenvector from numpy, equal up to a phase
    w, v = np.linalg.eigh(spinors.sigma_dot(p))
    assert abs(abs(np.vdot(v[:, 1], nu)) - 1) < 1e-10


def test_nu0_on_the_negative_axis():
    assert np.allclose(spinors.nu0(np.array([0.0, 0.0, -2.0])), [0, 1])


@given(nonzero3)
def test_iota_matrix_squares_to_minus_one(p):
    io = spinors.iota_matrix(p)
    assert np.allclose(io @ io, -np.eye(2), atol=1e-13)
    assert np.allclose(io.conj().T, -io, atol=1e-13)


def test_zero_momentum_is_rejected():
    for fn in (spinors.onshell_matrices, spinors.nu0, spinors.iota_matrix):
        with pytest.raises(ZeroMomentumError):
            fn(np.zeros(3))


def test_pauli_algebra():
    for j in range(3):
        for k in range(3):
            anti = SIGMA[j] @ SIGMA[k] + SIGMA[k] @ SIGMA[j]
            assert np.allclose(anti, 2 * (j == k) * np.eye(2))


def test_dirac_matrices_clifford_and_charge_conjugation():
    m = dirac_matrices()
    eta = np.diag([1, -1, -1, -1])
    for a in range(4):
        for b in range(4):
            assert np.allclose(m.gamma[a] @ m.gamma[b] + m.gamma[b] @ m.gamma[a], 2 * eta[a, b] * np.eye(4))
    for k in range(1, 4):
        assert np.allclose(m.C @ m.gamma[0] @ m.gamma[k].conj(), m.gamma[k] @ m.gamma[0] @ m.C)
    assert not m.gamma.flags.writeable


@settings(max_examples=50)
@given(st.floats(-4, 4), st.floats(-4, 4))
def test_e_matrix_group_law_and_invariance(a, b):
    e = spinors.e_matrix
    assert np.allclose(e(a) @ e(b), e(a + b), rtol=1e-12, atol=1e-12 * np.cosh(4))
    B = dirac_matrices().B
    assert np.allclose(e(a) @ B @ e(a).conj().T, B, atol=1e-12 * np.cosh(a) ** 2)
    assert abs(np.linalg.det(e(a)) - 1) < 1e-10


def test_p_matrix_preserves_B():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    a /= np.sqrt(np.linalg.det(a))
    g = spinors.p_matrix(a, rng.normal(size=4))
    B = dirac_matrices().B
    assert np.allclose(g @ B @ g.conj().T, B, atol=1e-12)
    assert abs(np.linalg.det(g) - 1) < 1e-12
