"""Four-component Dirac waves, the Majorana embedding and K_D.

Layout is chiral, (right, left): the upper pair evolves with e^{-i t sigma.p},
the lower pair with e^{+i t sigma.p}.  In this layout gamma^0 gamma^k is
diag(sigma_k, -sigma_k), so every spectral multiplier is block diagonal.
"""

from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from .spinors import SIGMA, dirac_matrices
from .errors import SupportOverflowError
from .modular import modular_generator
from .waves import (
    CauchyData,
    WeylCauchyData,
    _same_grid,
    _spectral_inner,
    apply_matrix,
    fft3,
    fixed_sum,
    ifft3,
    propagator,
    spectral_gradient,
)

TINY = 1e-300


class DiracCauchyData(CauchyData):
    """Cauchy data Psi_0 of a massless Dirac wave (right block first)."""

    ncomp: ClassVar[int] = 4

    @property
    def right(self):
        return WeylCauchyData(self.grid, self.values[..., :2], self.support_radius)

    @property
    def left(self):
        return WeylCauchyData(self.grid, self.values[..., 2:], self.support_radius)


@dataclass(frozen=True, eq=False)
class MajoranaState:
    """A Majorana Dirac wave together with the Weyl wave it was built from."""

    dirac: DiracCauchyData
    weyl: WeylCauchyData

    @property
    def grid(self):
        return self.dirac.grid

    def scaled(self, factor):
        return MajoranaState(self.dirac * factor, self.weyl * factor)


def assemble(phi_r, phi_l):
    _same_grid(phi_r, phi_l)
    values = np.concatenate([phi_r.values, phi_l.values], axis=-1)
    return DiracCauchyData(phi_r.grid, values, max(phi_r.support_radius, phi_l.support_radius))


def parity_reflect(phi):
    """Cauchy data x -> Phi_0(-x) (exact on the centred grid)."""
    r = phi.grid.reflect
    return phi.replace(phi.values[np.ix_(r, r, r)])


def _alpha_blocks(grid):
    """(N,N,N,4,4) multiplier d_k gamma^0 gamma^k with d = p/|p| (0 at p = 0)."""
    return np.einsum("...k,kab->...ab", grid.direction, dirac_matrices().alpha)


def dirac_propagator(grid, t):
    U = np.zeros(grid.shape + (4, 4), dtype=complex)
    U[..., :2, :2] = propagator(grid, t, 1)
    U[..., 2:, 2:] = propagator(grid, t, -1)
    return U


def evolve_dirac(psi, t):
    if abs(t) + psi.support_radius > psi.grid.L:
        raise SupportOverflowError(f"|t| + R = {abs(t) + psi.support_radius:g} exceeds L")
    hat = apply_matrix(dirac_propagator(psi.grid, t), fft3(psi.values, psi.grid))
    return psi.replace(ifft3(hat, psi.grid), psi.support_radius + abs(t))


def majorana_conjugate(values):
    """gamma^0 C Psi-bar applied samplewise."""
    m = dirac_matrices()
    return apply_matrix(m.gamma[0] @ m.C, np.conj(values))


def majorana_embed(phi):
    """Psi = (Phi, sigma_2 Phi-bar) / sqrt 2."""
    lower = apply_matrix(SIGMA[1], np.conj(phi.values))
    values = np.concatenate([phi.values, lower], axis=-1) / np.sqrt(2.0)
    return MajoranaState(DiracCauchyData(phi.grid, values, phi.support_radius), phi)


def majorana_defect(psi):
    """||Psi_0 - gamma^0 C Psi_0-bar|| / ||Psi_0|| in the sampled L^2 norm."""
    if isinstance(psi, MajoranaState):
        psi = psi.dirac
    v = psi.values
    num = np.sqrt(fixed_sum(np.abs(v - majorana_conjugate(v)) ** 2))
    den = np.sqrt(fixed_sum(np.abs(v) ** 2))
    return float(num / max(den, TINY))


def _dirac_projectors(grid):
    A = _alpha_blocks(grid)
    eye = np.eye(4)
    return 0.5 * (eye + A), 0.5 * (eye - A)


def inner_dirac(psi, phi):
    """<Psi, Phi> with weights gamma^0 p-slash_pm / (+-2|p|) (1/2 at p = 0)."""
    if isinstance(psi, MajoranaState):
        psi = psi.dirac
    if isinstance(phi, MajoranaState):
        phi = phi.dirac
    _same_grid(psi, phi)
    g = psi.grid
    qp, qm = _dirac_projectors(g)
    return _spectral_inner(fft3(psi.values, g), fft3(phi.values, g), g, qp, qm)


def norm_dirac(psi):
    return float(np.sqrt(max(inner_dirac(psi, psi).real, 0.0)))


def apply_iota_dirac(psi):
    """i (p_k/|p|) gamma^0 gamma^k as a spectral multiplier (zero mode -> 0)."""
    g = psi.grid
    hat = apply_matrix(1j * _alpha_blocks(g), fft3(psi.values, g))
    return psi.replace(ifft3(hat, g))


def k_dirac(psi):
    """(K_D Psi)_0 = -pi [(1 - r^2) d_k - x_k] gamma^0 gamma^k Psi_0."""
    if isinstance(psi, MajoranaState):
        return MajoranaState(k_dirac(psi.dirac), modular_generator(psi.weyl))
    g = psi.grid
    alpha = dirac_matrices().alpha
    grad = spectral_gradient(psi.values, g)
    out = np.zeros_like(grad[0])
    for k in range(3):
        term = (1.0 - g.r2)[..., None] * grad[k] - g.X[..., k, None] * psi.values
        out += apply_matrix(alpha[k], term)
    return psi.replace(-np.pi * out)

