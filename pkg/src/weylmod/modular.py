"""The modular group of the unit double cone acting on Weyl waves.

``modular_apply`` implements the geometric action
(Delta^{i lam} Phi)_0(x) = tau^-2 (c + s x.sigma) Phi(nu_{-2 pi lam}(0, x)),
``modular_generator`` its generator K, and ``e_lambda`` the corresponding map
on spacetime test functions.
"""

from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError
from .flow import f_profile, nu, tau
from .spinors import SIGMA, slash2
from .waves import apply_matrix, evaluate, norm, spectral_gradient


def _flow_preimages(lam, r2):
    """Time coordinate, spatial scale 1/tau and tau of nu_{-2 pi lam}(0, x) at |x|^2 = r2."""
    c2 = np.cosh(np.pi * lam) ** 2
    s2 = np.sinh(np.pi * lam) ** 2
    t = c2 - r2 * s2
    x0 = 0.5 * (1.0 - r2) * np.sinh(2 * np.pi * lam) / t
    return x0, 1.0 / t, t


def _grid_containment(lam, R, L):
    """Largest value of |x0'| + |x'| + R over preimages of the ball B_{2R}, minus the limit."""
    r = np.linspace(0.0, 2 * R, 401)
    x0, scale, t = _flow_preimages(lam, r * r)
    if np.any(t <= 0):
        return np.inf
    reach = np.max(np.abs(x0) + r * scale) + R
    return max(reach - 2 * L, np.max(np.abs(x0)) + R - L)


def _admissible(lam, R, L):
    a = abs(lam)
    if a == 0:
        return True
    if not 1.0 / np.tanh(np.pi * a) > 2 * R:
        return False
    for sgn in (1.0, -1.0):
        if not f_profile(sgn * 4 * np.pi * a, R) < 2 * R:
            return False
    return _grid_containment(a, R, L) < 0 and _grid_containment(-a, R, L) < 0


def lambda_max(R, L=2.5):
    """Largest |lambda| for which both signs are admissible for support radius R.

    Conditions: coth(pi |lam|) > 2R, f_{+-4 pi |lam|}(R) < 2R, and the flowed
    preimages of B_{2R} stay clear of the periodic images of the support
    (|x0'| + |x'| + R < 2L and |x0'| + R <= L).
    """
    if not 0 < R < L:
        raise ValueError("support radius must satisfy 0 < R < L")
    hi = np.arctanh(min(1.0, 1.0 / (2 * R))) / np.pi if 2 * R > 1 else 1.0
    lo = 0.0
    # the admissible set is an interval around 0; bisect its edge
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _admissible(mid, R, L):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class ModularApplication:
    lam: float
    input: object
    output: object
    support_radius_out: float
    norm_in: float
    norm_out: float


def modular_apply(lam, phi, details=False):
    """Delta^{i lam} Phi on the grid.

    Nodes outside B_{2R} (and beyond coth(pi |lam|)) are zero-filled; the exact
    value is zero there.  The output declares the support radius f_{-2 pi |lam|}(R),
    which bounds the image of B_R for either sign of lam.
    """
    grid = phi.grid
    R = phi.support_radius
    if lam == 0:
        out = phi.replace(phi.values)
        return _wrap(lam, phi, out, details)
    lmax = lambda_max(R, grid.L)
    if abs(lam) > lmax:
        raise AdmissibilityError(f"|lambda| = {abs(lam):g} exceeds lambda_max({R:g}) = {lmax:g}")
    fill = min(2 * R, 1.0 / np.tanh(np.pi * abs(lam)))
    n2 = grid.n2
    inside = grid.r2 < fill**2
    shells, inv = np.unique(n2[inside], return_inverse=True)
    r2 = grid.h**2 * shells.astype(float)
    x0, scale, t = _flow_preimages(lam, r2)
    X = grid.X[inside]
    pts = np.concatenate([x0[inv, None], X * scale[inv, None]], axis=-1)
    vals = evaluate(phi, pts)
    c, s = np.cosh(np.pi * lam), np.sinh(np.pi * lam)
    pref = (c * np.eye(2) + s * np.einsum("pa,aij->pij", X, SIGMA)) / (t[inv] ** 2)[:, None, None]
    out = np.zeros(grid.shape + (2,), dtype=complex)
    out[inside] = apply_matrix(pref, vals)
    R_out = float(f_profile(-2 * np.pi * abs(lam), R))
    res = phi.replace(out, max(R_out, 1e-12))
    return _wrap(lam, phi, res, details)


def _wrap(lam, phi, out, details):
    if not details:
        return out
    return ModularApplication(lam, phi, out, out.support_radius, norm(phi), norm(out))


def modular_generator(phi):
    """(K Phi)_0 = -pi [(1 - r^2) sigma.grad Phi_0 - (x.sigma) Phi_0]."""
    grid = phi.grid
    grad = spectral_gradient(phi.values, grid)
    sg = sum(apply_matrix(SIGMA[a], grad[a]) for a in range(3))
    xs = np.einsum("...a,aij->...ij", grid.X, SIGMA)
    val = -np.pi * ((1.0 - grid.r2)[..., None] * sg - apply_matrix(xs, phi.values))
    return phi.replace(val)


def e_lambda_prefactor(lam, x):
    """tau(-2 pi lam, x)^-2 [c - s slash(nu_{-2 pi lam}(x))] (before transposition)."""
    y = nu(-2 * np.pi * lam, x)
    t = tau(-2 * np.pi * lam, x)
    c, s = np.cosh(np.pi * lam), np.sinh(np.pi * lam)
    m = c * np.eye(2) - s * slash2(y)
    return m / (t**2)[..., None, None], y


def e_lambda(lam, f, x):
    """(E_lam f)(x) = tau^-2 [c - s slash(nu(x))]^t f(nu_{-2 pi lam}(x))."""
    m, y = e_lambda_prefactor(lam, np.asarray(x, dtype=float))
    return np.einsum("...ji,...j->...i", m, f(y))


def e_lambda_masked(lam, f, x, eps=1e-6):
    """e_lambda with points where |tau| < eps set to zero.

    Near the singular set nu sends x to infinity, where a test function of
    (numerically) compact support vanishes.
    """
    x = np.asarray(x, dtype=float)
    t = tau(-2 * np.pi * lam, x)
    ok = np.abs(t) > eps
    out = np.zeros(x.shape[:-1] + (2,), dtype=complex)
    out[ok] = e_lambda(lam, f, x[ok])
    return out


def relative_error(a, b):
    """||a - b|| / ||b|| in the wave norm (0 when both vanish)."""
    nb = norm(b)
    d = norm(a - b)
    if nb == 0:
        return 0.0 if d == 0 else np.inf
    return d / nb


@dataclass(frozen=True)
class ConvergenceRow:
    lam: float
    forward_error: float
    central_error: float


def generator_convergence(phi, lambdas):
    """Difference quotients of Delta^{i lam} Phi against K Phi.

    For each lam returns the forward error ||(D(lam) - 1)/lam - K|| / ||K||
    and the symmetric one ||(D(lam) - D(-lam))/(2 lam) - K|| / ||K||.
    """
    k = modular_generator(phi)
    kn = norm(k)
    rows = []
    for lam in lambdas:
        if kn == 0:
            rows.append(ConvergenceRow(lam, 0.0, 0.0))
            continue
        plus = modular_apply(lam, phi)
        minus = modular_apply(-lam, phi)
        fwd = (plus - phi) * (1.0 / lam) - k
        cen = (plus - minus) * (0.5 / lam) - k
        rows.append(ConvergenceRow(lam, norm(fwd) / kn, norm(cen) / kn))
    return rows


def observed_orders(errors, lambdas):
    """log2-style orders log(e_i / e_{i+1}) / log(lam_i / lam_{i+1})."""
    e = np.asarray(errors, dtype=float)
    lam = np.asarray(lambdas, dtype=float)
    return np.log(e[:-1] / e[1:]) / np.log(lam[:-1] / lam[1:])


def neville_zero(xs, values):
    """Value at x = 0 of the polynomial interpolating (xs, values) (Neville's scheme)."""
    xs = list(xs)
    col = list(values)
    for level in range(1, len(xs)):
        col = [
            (col[j + 1] * xs[j] - col[j] * xs[j + level]) * (1.0 / (xs[j] - xs[j + level]))
            for j in range(len(col) - 1)
        ]
    return col[0]


def richardson_central(phi, lambdas):
    """Richardson extrapolation of the symmetric quotient to lam -> 0.

    The symmetric quotient has an even expansion in lam, so the quotients at
    all given lambdas are extrapolated as a polynomial in lam^2.  Returns the
    relative distance ||lim - K Phi|| / ||K Phi||.
    """
    lams = sorted(set(abs(float(l)) for l in lambdas))
    if len(lams) < 2:
        raise ValueError("need at least two distinct lambdas")
    quotients = [(modular_apply(a, phi) - modular_apply(-a, phi)) * (0.5 / a) for a in lams]
    lim = neville_zero([a * a for a in lams], quotients)
    return relative_error(lim, modular_generator(phi))
