import numpy as np
import pytest

from weylmod.errors import GridMismatchError, SupportOverflowError
from weylmod.profiles import ProfileTerm, radial_transform, synthesize_cauchy
from weylmod.waves import (GridSpec, WeylCauchyData, apply_iota, evaluate, evolve, fft3, ifft3,
                           inner, norm, spectral_gradient, v_inverse, v_map, v_norm2)


def gaussian(grid, width=0.25, spinor=(1.0, 0.3j), center=(0.1, 0.0, -0.05), R=1.6):
    return synthesize_cauchy(grid, [ProfileTerm("gaussian", width, spinor, center)], R)


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(0.9, 32)
    with pytest.raises(ValueError):
        GridSpec(2.5, 33)
    with pytest.raises(ValueError):
        GridSpec(2.5, 12)
    assert GridSpec(2.0, 12, coarse=True).N == 12


def test_transform_round_trip_and_parseval(grid32):
    rng = np.random.default_rng(0)
    v = rng.normal(size=grid32.shape + (2,)) + 1j * rng.normal(size=grid32.shape + (2,))
    hat = fft3(v, grid32)
    assert np.allclose(ifft3(hat, grid32), v, atol=1e-12)
    x_side = np.sum(np.abs(v) ** 2) * grid32.h**3
    p_side = np.sum(np.abs(hat) ** 2) * (grid32.dp / (2 * np.pi)) ** 3
    assert abs(x_side - p_side) < 1e-10 * x_side


def test_gaussian_transform_matches_closed_form(grid48):
    w = 0.22
    term = ProfileTerm("gaussian", w, (1.0, 0.0))
    phi = synthesize_cauchy(grid48, [term], 1.5)
    hat = fft3(phi.values, grid48)[..., 0]
    exact = radial_transform("gaussian", grid48.pnorm, w)
    assert np.abs(hat - exact).max() < 1e-9 * np.abs(exact).max()


def test_values_are_validated(grid32):
    with pytest.raises(ValueError):
        WeylCauchyData(grid32, np.zeros((4, 4, 4, 2)), 1.0)
    with pytest.raises(SupportOverflowError):
        WeylCauchyData(grid32, np.zeros(grid32.shape + (2,)), 3.0)


def test_evolution_is_unitary_and_composes(grid32):
    phi = gaussian(grid32)
    a = evolve(evolve(phi, 0.3), 0.2)
    b = evolve(phi, 0.5)
    assert np.allclose(a.values, b.values, atol=1e-12)
    assert abs(norm(b) - norm(phi)) < 1e-12 * norm(phi)
    with pytest.raises(SupportOverflowError):
        evolve(phi, 1.0)


def test_evaluate_agrees_with_evolve(grid32):
    phi = gaussian(grid32)
    t = 0.4
    g = grid32
    idx = [(3, 5, 7), (16, 16, 16), (20, 11, 9)]
    x = np.array([[t, *g.X[i]] for i in idx])
    direct = evaluate(phi, x)
    ref = evolve(phi, t).values
    assert np.allclose(direct, [ref[i] for i in idx], atol=1e-12)


def test_inner_product_sign_convention(grid32):
    phi = gaussian(grid32)
    centred = phi - phi.replace(np.broadcast_to(phi.values.mean(axis=(0, 1, 2)), phi.values.shape))
    n2 = inner(centred, centred).real
    assert abs(inner(apply_iota(centred), centred) + 1j * n2) < 1e-12 * n2
    assert abs(inner(centred, apply_iota(centred)) - 1j * n2) < 1e-12 * n2


def test_iota_squares_to_minus_one_off_the_zero_mode(grid32):
    phi = gaussian(grid32)
    twice = apply_iota(apply_iota(phi)).values
    hat = fft3(phi.values, grid32)
    hat[0, 0, 0] = 0
    assert np.abs(twice + ifft3(hat, grid32)).max() < 1e-12 * np.abs(phi.values).max()


def test_v_map_is_unitary(grid32):
    phi = gaussian(grid32)
    l, h = v_map(phi)
    assert abs(v_norm2(l, h, grid32) - inner(phi, phi).real) < 1e-10 * norm(phi) ** 2
    back = v_inverse(l, h, grid32, phi.support_radius)
    assert np.allclose(back.values, phi.values, atol=1e-12)


def test_spectral_gradient_of_a_plane_wave(grid32):
    g = grid32
    k = g.k[3]
    v = np.exp(1j * k * g.X[..., 1])[..., None] * np.ones(2)
    grad = spectral_gradient(v, g)
    assert np.allclose(grad[1], 1j * k * v, atol=1e-10)
    assert np.allclose(grad[0], 0, atol=1e-10)


def test_grid_mismatch(grid32, grid48):
    with pytest.raises(GridMismatchError):
        inner(gaussian(grid32), gaussian(grid48))
