"""Spacetime test functions f and the waves Phi^f they generate.

A test function is a finite sum of separable terms g(x0) b(x) c with g, b from
the closed-form profile families and c in C^2.  The 4-d transform uses the
Minkowski kernel f^(p) = int f(x) e^{i p.x} d^4x with p.x = p0 x0 - p.x.
"""

from dataclasses import dataclass

import numpy as np

from .profiles import KINDS, radial_profile, radial_transform
from .waves import WeylCauchyData, apply_matrix, fft3, ifft3


@dataclass(frozen=True)
class SeparableTerm:
    time_kind: str
    time_center: float
    time_width: float
    space_kind: str
    space_center: tuple
    space_width: float
    spinor: tuple
    time_degree: int = 0
    space_degree: int = 0

    def __post_init__(self):
        for kind in (self.time_kind, self.space_kind):
            if kind not in KINDS:
                raise ValueError(f"transform family {kind!r} has no closed form")
        object.__setattr__(self, "space_center", tuple(float(c) for c in self.space_center))
        object.__setattr__(self, "spinor", tuple(complex(c) for c in self.spinor))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        g = radial_profile(self.time_kind, (x[..., 0] - self.time_center) ** 2,
                           self.time_width, self.time_degree)
        d = x[..., 1:] - np.asarray(self.space_center)
        b = radial_profile(self.space_kind, np.sum(d * d, axis=-1),
                           self.space_width, self.space_degree)
        return (g * b)[..., None] * np.asarray(self.spinor)

    def transform(self, p0, p, conjugate=False):
        """4-d transform of this term (of its complex conjugate if ``conjugate``)."""
        p0 = np.asarray(p0, dtype=float)
        g = radial_transform(self.time_kind, p0, self.time_width, self.time_degree, dim=1)
        g = g * np.exp(1j * p0 * self.time_center)
        q = np.linalg.norm(p, axis=-1)
        b = radial_transform(self.space_kind, q, self.space_width, self.space_degree, dim=3)
        b = b * np.exp(-1j * (p @ np.asarray(self.space_center)))
        c = np.asarray(self.spinor)
        return (g * b)[..., None] * (c.conj() if conjugate else c)


@dataclass(frozen=True)
class TestFunctionSpec:
    """A finite sum of separable terms."""

    __test__ = False  # not a pytest class

    terms: tuple = ()

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1] + (2,), dtype=complex)
        for t in self.terms:
            out += t(x)
        return out

    def transform(self, p0, p, conjugate=False):
        p = np.asarray(p, dtype=float)
        out = np.zeros(p.shape[:-1] + (2,), dtype=complex)
        for t in self.terms:
            out += t.transform(p0, p, conjugate)
        return out

    def conj_transform_onshell(self, grid):
        """(f-bar)^ at p_+ and p_- on the momentum grid."""
        pn = grid.pnorm
        return (self.transform(pn, grid.P, conjugate=True),
                self.transform(-pn, grid.P, conjugate=True))


def spectrum_from_onshell(grid, f_plus, f_minus):
    """Phi^(p) = P_+ F(p_+) + P_- F(p_-) with the helicity projections P_pm."""
    return apply_matrix(grid.proj_plus, f_plus) + apply_matrix(grid.proj_minus, f_minus)


def wave_from_testfunction(f, grid, support_radius):
    """Cauchy data of Phi^f from the closed-form transform of f-bar."""
    fp, fm = f.conj_transform_onshell(grid)
    return WeylCauchyData(grid, ifft3(spectrum_from_onshell(grid, fp, fm), grid), support_radius)


def onshell_quadrature(func, grid, t_min, t_max, steps):
    """(f-bar)^ at p_pm by quadrature in time and FFT in space.

    ``func`` maps points (..., 4) to spinors (..., 2).  The time integral uses
    the trapezoid rule on ``steps`` intervals, which is spectrally accurate for
    integrands vanishing smoothly at both ends.
    """
    ts = np.linspace(t_min, t_max, steps + 1)
    w = np.full(ts.shape, (t_max - t_min) / steps)
    w[0] *= 0.5
    w[-1] *= 0.5
    X = grid.X
    f_plus = np.zeros(grid.shape + (2,), dtype=complex)
    f_minus = np.zeros_like(f_plus)
    for t, wt in zip(ts, w):
        pts = np.concatenate([np.full(grid.shape + (1,), t), X], axis=-1)
        slab = fft3(np.conj(func(pts)), grid)
        ph = np.exp(1j * grid.pnorm * t)[..., None]
        f_plus += wt * ph * slab
        f_minus += wt * ph.conj() * slab
    return f_plus, f_minus


def wave_from_pointwise(func, grid, support_radius, t_min=-1.0, t_max=1.0, steps=200):
    """Cauchy data of Phi^f for a pointwise-evaluable f (no closed form needed)."""
    fp, fm = onshell_quadrature(func, grid, t_min, t_max, steps)
    return WeylCauchyData(grid, ifft3(spectrum_from_onshell(grid, fp, fm), grid), support_radius)

