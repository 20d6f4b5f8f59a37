"""The conformal flow nu_lambda preserving the unit double cone.

Points are arrays with last axis (x0, x1, x2, x3).  ``tau`` and ``nu`` accept
complex input as well, which is how the tube action is cross-checked.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotInGroupError, SingularPointError
from .spinors import SIGMA, dirac_matrices, slash2

EPS_SINGULAR = 1e-9
GROUP_TOL = 1e-10


def tau(lam, x):
    x = np.asarray(x)
    x2 = x[..., 0] ** 2 - np.sum(x[..., 1:] ** 2, axis=-1)
    ch, sh = np.cosh(lam), np.sinh(lam)
    return 0.5 * (1 + ch) - 0.5 * x2 * (1 - ch) - x[..., 0] * sh


def _check_regular(t, eps):
    if np.any(np.abs(t) <= eps):
        raise SingularPointError(f"|tau| <= {eps:g}: point on the singular set")


def nu_unchecked(lam, x):
    """nu_lambda without the singular-set guard; returns (image, tau)."""
    x = np.asarray(x)
    t = tau(lam, x)
    x2 = x[..., 0] ** 2 - np.sum(x[..., 1:] ** 2, axis=-1)
    x0 = x[..., 0] * np.cosh(lam) - 0.5 * (1 + x2) * np.sinh(lam)
    out = np.concatenate([x0[..., None], x[..., 1:]], axis=-1) / t[..., None]
    return out, t


def nu(lam, x, eps=EPS_SINGULAR):
    out, t = nu_unchecked(lam, x)
    _check_regular(t, eps)
    return out


def jacobian(lam, x, eps=EPS_SINGULAR):
    """Jacobian determinant sgn(tau)/tau^4 of nu_lambda."""
    t = tau(lam, x)
    _check_regular(t, eps)
    return np.sign(t) / t**4


@dataclass(frozen=True)
class LightconeCoords:
    u: np.ndarray
    v: np.ndarray
    theta: np.ndarray
    phi: np.ndarray


def lightcone_coords(x):
    """(u, v, theta, phi) with u = x0 + |x|, v = x0 - |x|; angles are 0 where undefined."""
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x[..., 1:], axis=-1)
    safe = np.where(r > 0, r, 1.0)
    theta = np.where(r > 0, np.arccos(np.clip(x[..., 3] / safe, -1.0, 1.0)), 0.0)
    phi = np.mod(np.arctan2(x[..., 2], x[..., 1]), 2 * np.pi)
    return LightconeCoords(x[..., 0] + r, x[..., 0] - r, theta, phi)


def from_lightcone(c):
    x0 = 0.5 * (c.u + c.v)
    r = 0.5 * (c.u - c.v)
    st = np.sin(c.theta)
    return np.stack(
        [x0, r * st * np.cos(c.phi), r * st * np.sin(c.phi), r * np.cos(c.theta)], axis=-1
    )


def f_profile(lam, u):
    """Radial profile ((1+u) - e^lam (1-u)) / ((1+u) + e^lam (1-u))."""
    u = np.asarray(u, dtype=float)
    e = np.exp(lam)
    den = (1 + u) + e * (1 - u)
    if np.any(den == 0):
        raise SingularPointError("pole of the flow profile")
    return ((1 + u) - e * (1 - u)) / den


def singular_parameters(x):
    """Flow parameters at which tau(lambda, x) vanishes, sorted.

    From the light-cone factorisation of tau, the zeros are
    lambda = log((w+1)/(w-1)) for each light-cone coordinate w with |w| > 1.
    """
    c = lightcone_coords(np.asarray(x, dtype=float))
    out = []
    for w in (float(c.u), float(c.v)):
        if abs(w) > 1:
            out.append(float(np.log((w + 1) / (w - 1))))
    return sorted(out)


@dataclass(frozen=True)
class TubePoint:
    """z = x + i y with y in the open forward cone."""

    z0: complex
    z: tuple

    @classmethod
    def from_array(cls, a):
        a = np.asarray(a, dtype=complex)
        return cls(complex(a[0]), tuple(complex(v) for v in a[1:]))

    def as_array(self):
        return np.array([self.z0, *self.z], dtype=complex)

    def in_tube(self):
        y = self.as_array().imag
        return y[0] > np.linalg.norm(y[1:])


def check_su22(g, tol=GROUP_TOL):
    g = np.asarray(g, dtype=complex)
    B = dirac_matrices().B
    if g.shape != (4, 4):
        raise NotInGroupError(f"expected a 4x4 matrix, got shape {g.shape}")
    if np.max(np.abs(g @ B @ g.conj().T - B)) > tol or abs(np.linalg.det(g) - 1) > tol:
        raise NotInGroupError("matrix does not preserve B or has det != 1")


def mobius(g, z):
    """Action (a z + b)(c z + d)^-1 of g in SU(2,2) on a tube point."""
    check_su22(g)
    g = np.asarray(g, dtype=complex)
    a, b, c, d = g[:2, :2], g[:2, 2:], g[2:, :2], g[2:, 2:]
    zm = slash2(z.as_array())
    den = c @ zm + d
    if abs(np.linalg.det(den)) < 1e-14 * max(1.0, np.linalg.norm(den) ** 2):
        raise SingularPointError("c z + d is not invertible")
    w = (a @ zm + b) @ np.linalg.inv(den)
    z0 = 0.5 * np.trace(w)
    zs = [0.5 * np.trace(s @ w) for s in SIGMA]
    return TubePoint(complex(z0), tuple(complex(v) for v in zs))


def trace_flow(lambda_max, steps, seeds, eps=EPS_SINGULAR):
    """Sample nu_lambda(seed) on a uniform lambda grid in [-lambda_max, lambda_max].

    Returns a list of row dicts with keys seed, lambda, x0..x3, branch, marker.
    ``branch`` is sgn(tau).  A row with marker ``"singular"`` is emitted instead of
    a point when |tau| <= eps, and a ``"branch"`` row (lambda at the midpoint of the
    step) precedes the first point after tau changes sign.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    lams = np.linspace(-lambda_max, lambda_max, steps)
    rows = []
    for i, seed in enumerate(np.asarray(seeds, dtype=float)):
        img, t = nu_unchecked(lams, np.broadcast_to(seed, (steps, 4)))
        prev = None
        for j, lam in enumerate(lams):
            sgn = int(np.sign(t[j]))
            if abs(t[j]) <= eps:
                rows.append(_row(i, lam, [np.nan] * 4, 0, "singular"))
                continue
            if prev is not None and sgn != prev:
                mid = 0.5 * (lams[j - 1] + lam)
                rows.append(_row(i, mid, [np.nan] * 4, sgn, "branch"))
            rows.append(_row(i, lam, img[j], sgn, ""))
            prev = sgn
    return rows


def _row(i, lam, x, branch, marker):
    return {
        "seed": i,
        "lambda": float(lam),
        "x0": float(x[0]),
        "x1": float(x[1]),
        "x2": float(x[2]),
        "x3": float(x[3]),
        "branch": branch,
        "marker": marker,
    }
