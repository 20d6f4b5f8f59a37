"""Pauli/Dirac matrix constructions and helicity spinors.

Conventions: Minkowski vectors are arrays whose last axis holds
``(x0, x1, x2, x3)``; 3-vectors hold ``(p1, p2, p3)``.  Every function
broadcasts over leading axes, so a whole momentum grid can be passed at once.
The chiral gamma matrices and the charge conjugation matrix follow the
right/left block layout used throughout the package.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ZeroMomentumError

ID2 = np.eye(2, dtype=complex)
SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
# sigma_0 = identity followed by the three Pauli matrices
PAULI4 = np.concatenate([ID2[None], SIGMA])


def minkowski_square(x):
    """x0^2 - |x|^2 along the last axis."""
    x = np.asarray(x)
    return x[..., 0] ** 2 - np.sum(x[..., 1:] ** 2, axis=-1)


def slash2(x, variant="under"):
    """Hermitian 2x2 matrix of a 4-vector.

    ``under`` gives x0 + x.sigma, ``tilde`` gives x0 - x.sigma.  For complex
    input (points of the tube) the same linear formula is used.
    """
    x = np.asarray(x)
    if variant == "under":
        sign = 1.0
    elif variant == "tilde":
        sign = -1.0
    else:
        raise ValueError(f"unknown variant {variant!r}")
    out = x[..., 0, None, None] * ID2
    out = out + sign * np.einsum("...j,jab->...ab", x[..., 1:], SIGMA)
    return out


def sigma_dot(v):
    """v.sigma for 3-vectors (real or complex)."""
    return np.einsum("...j,jab->...ab", np.asarray(v), SIGMA)


def _momentum_norm(p):
    p = np.asarray(p, dtype=float)
    norm = np.linalg.norm(p, axis=-1)
    if np.any(norm == 0):
        raise ZeroMomentumError("p = 0 is a singular direction for this construction")
    return p, norm


def onshell_matrices(p):
    """Return the pair (p_+ under, p_- under) for p_pm = (+-|p|, p)."""
    p, norm = _momentum_norm(p)
    sp = sigma_dot(p)
    eye = norm[..., None, None] * ID2
    return eye + sp, -eye + sp


def nu0(p):
    """Unit positive-helicity spinor (cos(theta/2), sin(theta/2) e^{i phi}).

    On the 3-axis phi is taken to be 0, so p = (0, 0, -a) maps to (0, 1).
    """
    p, norm = _momentum_norm(p)
    perp = np.hypot(p[..., 0], p[..., 1])
    # half angles from atan2 stay accurate near both poles
    half = 0.5 * np.arctan2(perp, p[..., 2])
    cos_half, sin_half = np.cos(half), np.sin(half)
    on_axis = perp == 0
    safe = np.where(on_axis, 1.0, perp)
    phase = np.where(on_axis, 1.0 + 0j, (p[..., 0] + 1j * p[..., 1]) / safe)
    return np.stack([cos_half + 0j, sin_half * phase], axis=-1)


def iota_matrix(p):
    """The complex structure i (p.sigma)/|p| acting on momentum-space spinors."""
    p, norm = _momentum_norm(p)
    return 1j * sigma_dot(p / norm[..., None])


@dataclass(frozen=True)
class DiracMatrices:
    """Chiral-representation matrices used by the 4-component layer.

    ``gamma[mu]`` are gamma^0..gamma^3, ``alpha[k] = gamma^0 gamma^k``,
    ``sigma_jk[j, k] = (i/2)[gamma^j, gamma^k]`` for spatial j, k (indices 0..2
    standing for 1..3), ``Sigma[h] = 1/2 eps_hjk sigma_jk`` and ``B`` is the
    form preserved by SU(2,2).
    """

    gamma: np.ndarray
    C: np.ndarray
    alpha: np.ndarray
    sigma_jk: np.ndarray
    Sigma: np.ndarray
    B: np.ndarray

    @staticmethod
    def e(lam):
        return e_matrix(lam)

    @staticmethod
    def p(a, y):
        return p_matrix(a, y)


def _blocks(a, b, c, d):
    return np.block([[a, b], [c, d]])


@lru_cache(maxsize=None)
def dirac_matrices():
    Z = np.zeros((2, 2), dtype=complex)
    g0 = _blocks(Z, -ID2, -ID2, Z)
    gk = [_blocks(Z, s, -s, Z) for s in SIGMA]
    gamma = np.array([g0, *gk])
    C = _blocks(-SIGMA[1], Z, Z, SIGMA[1])
    alpha = np.array([g0 @ g for g in gk])
    sjk = np.zeros((3, 3, 4, 4), dtype=complex)
    for j in range(3):
        for k in range(3):
            sjk[j, k] = 0.5j * (gk[j] @ gk[k] - gk[k] @ gk[j])
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
    Sigma = 0.5 * np.einsum("hjk,jkab->hab", eps, sjk)
    B = _blocks(Z, -1j * ID2, 1j * ID2, Z)
    for arr in (gamma, C, alpha, sjk, Sigma, B):
        arr.setflags(write=False)
    return DiracMatrices(gamma=gamma, C=C, alpha=alpha, sigma_jk=sjk, Sigma=Sigma, B=B)


def e_matrix(lam):
    """The one-parameter subgroup e(lambda) of SU(2,2) fixing the unit double cone."""
    c, s = np.cosh(lam / 2), np.sinh(lam / 2)
    return _blocks(c * ID2, -s * ID2, -s * ID2, c * ID2)


def p_matrix(a, y):
    """Poincare element p(a, y) for a in SL(2,C) and a translation y."""
    a = np.asarray(a, dtype=complex)
    a_dag_inv = np.linalg.inv(a.conj().T)
    Z = np.zeros((2, 2), dtype=complex)
    return _blocks(a, slash2(np.asarray(y, dtype=complex)) @ a_dag_inv, Z, a_dag_inv)
