import numpy as np
import pytest

from weylmod.errors import AdmissibilityError
from weylmod.flow import f_profile
from weylmod.modular import (_admissible, e_lambda, generator_convergence, lambda_max, modular_apply,
                             modular_generator, neville_zero, observed_orders, relative_error)
from weylmod.suites import modular_state, modular_test_function
from weylmod.testfunctions import wave_from_pointwise, wave_from_testfunction
from weylmod.waves import inner, norm


@pytest.fixture(scope="module")
def phi32(grid32):
    return modular_state(grid32)


def test_lambda_max_is_the_admissibility_edge():
    lm = lambda_max(0.8, 2.5)
    assert 0.1 < lm < 0.2
    # coth(pi lam) > 2R is one of the conditions
    assert 1 / np.tanh(np.pi * lm) > 1.6
    # the edge separates admissible from inadmissible values
    assert _admissible(0.999 * lm, 0.8, 2.5)
    assert not _admissible(1.001 * lm, 0.8, 2.5)
    with pytest.raises(ValueError):
        lambda_max(3.0, 2.5)


def test_zero_lambda_is_the_identity(phi32):
    assert np.array_equal(modular_apply(0.0, phi32).values, phi32.values)


def test_inadmissible_lambda_raises(phi32):
    with pytest.raises(AdmissibilityError):
        modular_apply(0.5, phi32)


def test_unitarity_and_group_law(phi32):
    a = modular_apply(0.05, phi32)
    assert abs(norm(a) - norm(phi32)) < 1e-4 * norm(phi32)
    psi = modular_state(phi32.grid, (0.2, 1.0), (0.05, 0.0, 0.0))
    b = modular_apply(0.05, psi)
    assert abs(inner(b, a) - inner(psi, phi32)) < 1e-4 * norm(psi) * norm(phi32)
    twice = modular_apply(0.02, modular_apply(0.03, phi32))
    assert relative_error(twice, a) < 1e-2


def test_support_radius_declared_by_the_flow(phi32):
    out = modular_apply(-0.05, phi32)
    assert out.support_radius == pytest.approx(float(f_profile(-2 * np.pi * 0.05, 0.8)))
    assert out.leak() < 1e-6


def test_generator_is_the_derivative(phi32):
    rows = generator_convergence(phi32, [0.02, 0.01])
    assert rows[1].central_error < rows[0].central_error / 3
    assert rows[1].forward_error < rows[0].forward_error / 1.8
    assert rows[1].central_error < 0.02


def test_generator_is_skew(phi32):
    k = modular_generator(phi32)
    assert abs(inner(phi32, k).real) < 1e-8 * norm(phi32) * norm(k)


def test_observed_orders_on_a_power_law():
    lams = [0.08, 0.04, 0.02]
    assert np.allclose(observed_orders([3 * l**2 for l in lams], lams), 2.0)


def test_neville_reproduces_polynomials():
    xs = [0.4, 0.1, 0.025]
    vals = [1.5 - 2 * x + 0.5 * x * x for x in xs]
    assert neville_zero(xs, vals) == pytest.approx(1.5, abs=1e-13)


def test_e_lambda_at_zero_is_the_identity():
    f = modular_test_function()
    x = np.random.default_rng(0).uniform(-0.3, 0.3, size=(10, 4))
    assert np.allclose(e_lambda(0.0, f, x), f(x))


def test_pointwise_wave_matches_closed_form(grid48):
    # spatial sampling of a width-0.18 Gaussian limits agreement to ~1e-8 at N = 48
    f = modular_test_function()
    closed = wave_from_testfunction(f, grid48, 0.8)
    quad = wave_from_pointwise(f, grid48, 0.8, -1.0, 1.0, 200)
    assert relative_error(quad, closed) < 1e-7
