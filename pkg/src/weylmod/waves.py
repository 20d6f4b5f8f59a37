"""Sampled Cauchy data of Weyl waves and their spectral calculus.

Grid conventions
----------------
Nodes are ``x_j = -L + j h`` with ``h = 2L/N`` (so the origin is a node) and
momenta are ``k_m = (pi/L) m`` with ``m`` in fft order.  The continuum transform
``g^(p) = int g(x) e^{-i p.x} dx`` is discretised as ``h^3 (-1)^{m1+m2+m3} fftn``;
with this choice ``sum |g|^2 h^3 = (2 pi)^-3 sum |g^|^2 dp^3`` holds exactly.

The helicity direction ``p/|p|`` is set to 0 at ``p = 0``: the zero mode enters
the scalar product with the helicity-averaged weight 1/2 (so only its real part
contributes and Parseval stays exact) and the complex structure annihilates it.
The unitary V uses the 3-axis as the zero-mode direction of its helicity basis.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import ClassVar

import numpy as np
import scipy.fft

from .errors import GridMismatchError, SupportOverflowError
from .spinors import ID2, SIGMA, nu0
from .threads import thread_count


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@lru_cache(maxsize=8)
def _grid_arrays(L, N):
    h = 2 * L / N
    idx = np.arange(N) - N // 2
    x = h * idx
    m = np.rint(np.fft.fftfreq(N, 1.0 / N)).astype(int)
    k = (np.pi / L) * m
    P = np.stack(np.meshgrid(k, k, k, indexing="ij"), axis=-1)
    pn = np.linalg.norm(P, axis=-1)
    d = P / np.where(pn > 0, pn, 1.0)[..., None]
    sgn1 = 1.0 - 2.0 * (m % 2)
    sgn = sgn1[:, None, None] * sgn1[None, :, None] * sgn1[None, None, :]
    X = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1)
    n2 = (idx[:, None, None] ** 2 + idx[None, :, None] ** 2 + idx[None, None, :] ** 2)
    dsig = np.einsum("...a,aij->...ij", d, SIGMA)
    out = dict(
        h=h, x=x, m=m, k=k, P=P, pnorm=pn, direction=d, sign=sgn, X=X,
        n2=n2, r2=h * h * n2.astype(float), dsig=dsig,
        proj_plus=0.5 * (ID2 + dsig), proj_minus=0.5 * (ID2 - dsig),
        reflect=(-np.arange(N)) % N,
    )
    return {key: (_frozen(v) if isinstance(v, np.ndarray) else v) for key, v in out.items()}


@dataclass(frozen=True)
class GridSpec:
    """Periodic box [-L, L)^3 with N points per axis."""

    L: float = 2.5
    N: int = 48
    # coarse grids (N < 16) are only for brute-force validation oracles
    coarse: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        if not self.L > 1:
            raise ValueError("half-width L must exceed 1")
        n_min = 4 if self.coarse else 16
        if self.N < n_min or self.N % 2:
            raise ValueError(f"N must be an even integer >= {n_min}")
        object.__setattr__(self, "L", float(self.L))
        object.__setattr__(self, "N", int(self.N))

    def __getattr__(self, name):
        # derived arrays are shared between equal grids
        if name.startswith("_"):
            raise AttributeError(name)
        arrays = _grid_arrays(self.L, self.N)
        if name in arrays:
            return arrays[name]
        raise AttributeError(name)

    @property
    def dp(self):
        return np.pi / self.L

    @property
    def shape(self):
        return (self.N,) * 3

    def as_dict(self):
        return {"L": self.L, "N": self.N}


def fft3(values, grid):
    """Continuum-normalised forward transform of an (N,N,N,c) array."""
    out = scipy.fft.fftn(values, axes=(0, 1, 2), workers=thread_count())
    return out * (grid.h**3 * grid.sign)[..., None]


def ifft3(values, grid):
    v = np.asarray(values) * grid.sign[..., None]
    return scipy.fft.ifftn(v, axes=(0, 1, 2), workers=thread_count()) / grid.h**3


def apply_matrix(mat, vec):
    """Pointwise matrix-vector product over leading axes."""
    return np.einsum("...ij,...j->...i", mat, vec)


def fixed_sum(a):
    """Sum in a fixed (pairwise, C-order) reduction order."""
    return np.sum(np.ascontiguousarray(a).reshape(-1))


@dataclass(frozen=True, eq=False)
class CauchyData:
    """Spinor samples on a grid with a declared support radius."""

    grid: GridSpec
    values: np.ndarray
    support_radius: float

    ncomp: ClassVar[int] = 2

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        expected = self.grid.shape + (self.ncomp,)
        if v.shape != expected:
            raise ValueError(f"values must have shape {expected}, got {v.shape}")
        if not self.support_radius < self.grid.L:
            raise SupportOverflowError("support radius must be smaller than the half-width")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "support_radius", float(self.support_radius))

    def replace(self, values, support_radius=None):
        R = self.support_radius if support_radius is None else support_radius
        return type(self)(self.grid, values, R)

    def l2_norm2(self):
        """sum |Phi_0|^2 h^3 over the grid."""
        return float(fixed_sum(np.abs(self.values) ** 2) * self.grid.h**3)

    def leak(self, radius=None):
        """Fraction of sum |Phi_0|^2 at nodes with |x| > radius."""
        radius = self.support_radius if radius is None else radius
        w = np.abs(self.values) ** 2
        total = fixed_sum(w)
        if total == 0:
            return 0.0
        outside = np.where(self.grid.r2 > radius**2, w.sum(axis=-1), 0.0)
        return float(fixed_sum(outside) / total)

    def __add__(self, other):
        _same_grid(self, other)
        return self.replace(self.values + other.values,
                            max(self.support_radius, other.support_radius))

    def __sub__(self, other):
        _same_grid(self, other)
        return self.replace(self.values - other.values,
                            max(self.support_radius, other.support_radius))

    def __mul__(self, scalar):
        return self.replace(self.values * scalar)

    __rmul__ = __mul__


class WeylCauchyData(CauchyData):
    """Cauchy data of a right-handed Weyl wave."""

    ncomp: ClassVar[int] = 2


@dataclass(frozen=True, eq=False)
class SpectralData:
    grid: GridSpec
    values: np.ndarray


def _same_grid(a, b):
    if a.grid != b.grid:
        raise GridMismatchError(f"grids differ: {a.grid} vs {b.grid}")


def transform(data):
    return SpectralData(data.grid, fft3(data.values, data.grid))


def inverse_transform(spec, support_radius, cls=WeylCauchyData):
    return cls(spec.grid, ifft3(spec.values, spec.grid), support_radius)


def zeros(grid, support_radius=0.0, cls=WeylCauchyData):
    return cls(grid, np.zeros(grid.shape + (cls.ncomp,), dtype=complex), support_radius)


def propagator(grid, t, chirality=1):
    """exp(-i chirality t sigma.p) on the momentum grid, (N,N,N,2,2)."""
    wt = grid.pnorm * t
    return np.cos(wt)[..., None, None] * ID2 - 1j * chirality * np.sin(wt)[..., None, None] * grid.dsig


def evolve(data, t, chirality=1):
    """Cauchy data at time t of the Weyl wave (right-handed by default)."""
    if abs(t) + data.support_radius > data.grid.L:
        raise SupportOverflowError(f"|t| + R = {abs(t) + data.support_radius:g} exceeds L")
    hat = apply_matrix(propagator(data.grid, t, chirality), fft3(data.values, data.grid))
    return data.replace(ifft3(hat, data.grid), data.support_radius + abs(t))


def _phase_table(k, coords):
    return np.exp(1j * np.multiply.outer(coords, k))


def _evaluate_slice(coeff, grid, xyz, chunk):
    """sum_m e^{i k.x} coeff_m at spatial points (P,3); coeff is (N,N,N,c)."""
    N = grid.N
    c = coeff.shape[-1]
    # (N1, N2, c, N3) so the m3 contraction is one matrix product
    G = np.ascontiguousarray(np.moveaxis(coeff, 2, 3)).reshape(N * N * c, N)
    out = np.empty((len(xyz), c), dtype=complex)
    for s in range(0, len(xyz), chunk):
        pts = xyz[s:s + chunk]
        e1, e2, e3 = (_phase_table(grid.k, pts[:, a]) for a in range(3))
        t3 = (G @ e3.T).reshape(N, N, c, len(pts))
        t2 = np.einsum("abcp,pb->acp", t3, e2)
        out[s:s + chunk] = np.einsum("acp,pa->pc", t2, e1)
    return out


def evaluate(data, x, chirality=1, chunk=1024):
    """Value of the wave at arbitrary spacetime points x (...,4).

    Direct summation of the inverse transform over the momentum grid; points
    sharing the same time coordinate share one propagated spectrum.
    """
    x = np.asarray(x, dtype=float)
    lead = x.shape[:-1]
    pts = x.reshape(-1, 4)
    grid = data.grid
    if len(pts) and np.max(np.abs(pts[:, 0])) + data.support_radius > grid.L:
        raise SupportOverflowError("|x0| + R exceeds the half-width")
    hat = fft3(data.values, grid) / (2 * grid.L) ** 3
    times, inverse = np.unique(pts[:, 0], return_inverse=True)
    out = np.empty((len(pts), data.ncomp), dtype=complex)
    for i, t in enumerate(times):
        sel = np.flatnonzero(inverse == i)
        coeff = hat if t == 0 else apply_matrix(propagator(grid, t, chirality), hat)
        out[sel] = _evaluate_slice(coeff, grid, pts[sel, 1:], chunk)
    return out.reshape(lead + (data.ncomp,))


def apply_iota(data):
    """The complex structure i (p.sigma)/|p|; the zero mode is mapped to 0."""
    hat = apply_matrix(1j * data.grid.dsig, fft3(data.values, data.grid))
    return data.replace(ifft3(hat, data.grid))


def _spectral_inner(a_hat, b_hat, grid, proj_plus, proj_minus):
    s = fixed_sum(np.einsum("...i,...ij,...j->...", a_hat.conj(), proj_plus, b_hat))
    s += fixed_sum(np.einsum("...i,...ij,...j->...", b_hat.conj(), proj_minus, a_hat))
    return complex(s * (grid.dp / (2 * np.pi)) ** 3)


def inner(psi, phi):
    """Scalar product <psi, phi>, antilinear in psi and linear in phi w.r.t. iota."""
    _same_grid(psi, phi)
    g = psi.grid
    return _spectral_inner(fft3(psi.values, g), fft3(phi.values, g), g, g.proj_plus, g.proj_minus)


def norm(phi):
    return float(np.sqrt(max(inner(phi, phi).real, 0.0)))


def reflect_modes(a, grid):
    """a(-m) with the grid's periodic index reflection (also x -> -x on nodes)."""
    r = grid.reflect
    return a[np.ix_(r, r, r)]


@lru_cache(maxsize=4)
def _helicity_basis(L, N):
    d = np.array(GridSpec(L, N).direction)
    d[0, 0, 0] = (0.0, 0.0, 1.0)
    return _frozen(nu0(d)), _frozen(nu0(-d))


def v_map(phi):
    """The unitary V: Phi -> (l, h), two scalar functions on the momentum grid."""
    g = phi.grid
    hat = fft3(phi.values, g)
    up, down = _helicity_basis(g.L, g.N)
    c = (2 * np.pi) ** -1.5
    l = -c * np.einsum("...i,...i->...", up.conj(), hat)
    # conj(nu0(-d_n)^dag hat_n) read at n = reflect(m)
    h = c * reflect_modes(np.einsum("...i,...i->...", down.conj(), hat), g).conj()
    return l, h


def v_norm2(l, h, grid):
    return float(fixed_sum(np.abs(l) ** 2 + np.abs(h) ** 2) * grid.dp**3)


def v_inverse(l, h, grid, support_radius):
    """Solve A(p) Phi^(p) = (psi_1(p), conj psi_2(-p)) with A unitary, A^-1 = A^dag."""
    up, down = _helicity_basis(grid.L, grid.N)
    c = (2 * np.pi) ** 1.5
    a = -c * np.asarray(l)
    b = c * reflect_modes(np.asarray(h), grid).conj()
    hat = up * a[..., None] + down * b[..., None]
    return WeylCauchyData(grid, ifft3(hat, grid), support_radius)


def spectral_gradient(values, grid):
    """(3, N, N, N, c) array of partial derivatives via multiplication by i p.

    The Nyquist wavenumber has no partner of opposite sign, so its derivative
    is set to zero; this keeps the derivative of real data real.
    """
    hat = fft3(values, grid)
    k = np.where(grid.m == -(grid.N // 2), 0.0, grid.k)
    ks = np.meshgrid(k, k, k, indexing="ij")
    return np.stack([ifft3(1j * ks[a][..., None] * hat, grid) for a in range(3)])
