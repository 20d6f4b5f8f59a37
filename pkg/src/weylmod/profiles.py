"""Closed-form radial profiles and their Fourier transforms.

Two families are supported, both radial about a centre:

* ``gaussian``: exp(-r^2 / (2 w^2))
* ``bump``:     (1 - r^2/w^2)^k for r < w, zero outside

Transforms use the kernel e^{-i q.x} in ``dim`` dimensions, centred profiles;
a shift of the centre only contributes a phase that callers add themselves.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, gamma, jv

from .errors import AdmissibilityError, SupportOverflowError
from .waves import WeylCauchyData

KINDS = ("gaussian", "bump")
DEFAULT_LEAK_TOL = 1e-12


def radial_profile(kind, r2, width, degree=0):
    """Profile value as a function of r^2."""
    if kind == "gaussian":
        return np.exp(-0.5 * r2 / width**2)
    if kind == "bump":
        s = 1.0 - r2 / width**2
        return np.where(s > 0, np.clip(s, 0.0, None) ** degree, 0.0)
    raise ValueError(f"unknown profile kind {kind!r}")


def radial_transform(kind, q, width, degree=0, dim=3):
    """int_{R^dim} profile(|x|) e^{-i q.x} dx as a function of |q| (real, even)."""
    q = np.abs(np.asarray(q, dtype=float))
    if kind == "gaussian":
        return (2 * np.pi * width**2) ** (dim / 2) * np.exp(-0.5 * (width * q) ** 2)
    if kind == "bump":
        nu = degree + dim / 2
        z = q * width
        small = z < 1e-8
        zs = np.where(small, 1.0, z)
        core = np.where(small, 1.0 / gamma(nu + 1), (2.0 / zs) ** nu * jv(nu, zs))
        return width**dim * np.pi ** (dim / 2) * gamma(degree + 1) * core
    raise ValueError(f"unknown profile kind {kind!r}")


def gaussian_tail_fraction(width, radius):
    """Fraction of int exp(-r^2/w^2) d^3x lying outside |x| > radius."""
    a = radius / width
    return float(erfc(a) + 2.0 / np.sqrt(np.pi) * a * np.exp(-a * a))


@dataclass(frozen=True)
class ProfileTerm:
    """One term profile(|x - center|) e^{i k.(x - center)} * spinor."""

    kind: str
    width: float
    spinor: tuple
    center: tuple = (0.0, 0.0, 0.0)
    degree: int = 0
    wavevector: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"profile kind must be one of {KINDS}, got {self.kind!r}")
        if not self.width > 0:
            raise ValueError("profile width must be positive")
        if self.kind == "bump" and self.degree < 1:
            raise ValueError("bump degree must be >= 1")
        object.__setattr__(self, "spinor", tuple(complex(c) for c in self.spinor))
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        object.__setattr__(self, "wavevector", tuple(float(c) for c in self.wavevector))

    def reach(self):
        """Radius about the origin beyond which the term is (numerically) negligible."""
        c = float(np.linalg.norm(self.center))
        return c + (self.width if self.kind == "bump" else 0.0)

    def sample(self, X):
        c = np.asarray(self.center)
        d = X - c
        r2 = np.sum(d * d, axis=-1)
        amp = radial_profile(self.kind, r2, self.width, self.degree)
        k = np.asarray(self.wavevector)
        if np.any(k):
            amp = amp * np.exp(1j * (d @ k))
        return amp[..., None] * np.asarray(self.spinor)

    def fourier(self, P):
        """Closed-form transform at momenta P (..., 3)."""
        k = np.asarray(self.wavevector)
        q = np.linalg.norm(P - k, axis=-1)
        amp = radial_transform(self.kind, q, self.width, self.degree)
        amp = amp * np.exp(-1j * (P @ np.asarray(self.center)))
        return amp[..., None] * np.asarray(self.spinor)


def synthesize_cauchy(grid, terms, support_radius, leak_tol=DEFAULT_LEAK_TOL):
    """Sample a superposition of profile terms as Weyl Cauchy data.

    Bumps vanish identically outside their radius.  Gaussians are sampled
    without truncation; the state is admitted only when the sampled mass
    outside ``support_radius`` is below ``leak_tol`` (relative).
    """
    terms = tuple(terms)
    if not support_radius < grid.L:
        raise SupportOverflowError("support radius must be smaller than the half-width")
    for t in terms:
        if t.kind == "bump" and t.reach() > grid.L:
            raise SupportOverflowError("bump profile exceeds the grid")
        if len(t.spinor) != 2:
            raise ValueError("Weyl profile spinors need two components")
    values = np.zeros(grid.shape + (2,), dtype=complex)
    for t in terms:
        values += t.sample(grid.X)
    data = WeylCauchyData(grid, values, support_radius)
    leak = data.leak()
    if leak > leak_tol:
        raise AdmissibilityError(
            f"mass fraction {leak:.3e} outside R = {support_radius:g} exceeds {leak_tol:g}"
        )
    return data
