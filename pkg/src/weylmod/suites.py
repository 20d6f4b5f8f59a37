"""Verification suites driven by the command line harness.

Each suite takes a ``RunConfig`` and returns a list of ``Check`` records.
Random instances come from ``numpy.random.default_rng(seed)``, so a fixed seed
gives identical numbers on every run.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from . import flow, spinors
from .errors import ConfigError, WeylmodError
from .report import Check
from .spinors import SIGMA, dirac_matrices
from .waves import GridSpec

SUITES = ("spinor", "flow", "wave", "modular", "entropy")
DEFAULT_LAMBDAS = (0.08, 0.04, 0.02, 0.01)


@dataclass(frozen=True)
class RunConfig:
    suite: str
    grid: GridSpec = GridSpec()
    seed: int = 0
    lambdas: tuple = DEFAULT_LAMBDAS
    tolerances: dict = field(default_factory=dict)
    state_path: str = None
    instances: int = 10_000

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {SUITES}", "suite")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer", "seed")
        lams = tuple(float(l) for l in self.lambdas)
        if not lams or any(l <= 0 for l in lams):
            raise ConfigError("lambdas must be positive", "lambdas")
        object.__setattr__(self, "lambdas", lams)

    def rng(self, stream=0):
        return np.random.default_rng([int(self.seed), stream])

    def tol(self, name, default):
        return float(self.tolerances.get(name, default))


def run_suite(config):
    """Run the configured suite; returns (checks, extra) where extra holds diagnostics."""
    result = SUITE_FUNCTIONS[config.suite](config)
    if isinstance(result, tuple):
        return result
    return result, {}


# ---------------------------------------------------------------- spinor suite


def _unit_ball(rng, n, dim):
    v = rng.normal(size=(n, dim))
    v /= np.linalg.norm(v, axis=-1, keepdims=True)
    return v * rng.uniform(0.0, 1.0, size=(n, 1)) ** (1.0 / dim)


def _maxabs(a):
    return float(np.max(np.abs(a)))


def spinor_suite(cfg):
    rng = cfg.rng(1)
    n = cfg.instances
    tol = cfg.tol("spinor", 1e-12)
    checks = []

    def add(name, value):
        checks.append(Check(name, value, 0.0, tol, "max"))

    x = rng.uniform(-1, 1, size=(n, 4))
    add("det_slash_minkowski", _maxabs(np.linalg.det(spinors.slash2(x)) - spinors.minkowski_square(x)))
    add("det_slash_tilde", _maxabs(np.linalg.det(spinors.slash2(x, "tilde")) - spinors.minkowski_square(x)))

    p = rng.uniform(-1, 1, size=(n, 3))
    pn = np.linalg.norm(p, axis=-1)[:, None, None]
    pp, pm = spinors.onshell_matrices(p)
    add("ppm_square_plus", _maxabs(pp @ pp - 2 * pn * pp))
    add("ppm_square_minus", _maxabs(pm @ pm + 2 * pn * pm))
    add("ppm_orthogonal", _maxabs(pp @ pm))
    add("ppm_difference", _maxabs(pp - pm - 2 * pn * np.eye(2)))

    s2 = SIGMA[1]
    for sgn, under in (("plus", pp), ("minus", pm)):
        e = pn[:, 0, 0] if sgn == "plus" else -pn[:, 0, 0]
        tilde = spinors.slash2(np.concatenate([e[:, None], p], axis=-1), "tilde")
        add(f"sigma2p_{sgn}", _maxabs(s2 @ tilde @ s2 - under.conj()))

    nu = spinors.nu0(p)
    dyad = nu[..., :, None] * nu[..., None, :].conj()
    add("nu0_dyad", _maxabs(dyad - pp / (2 * pn)))
    add("nu0_unit", _maxabs(np.linalg.norm(nu, axis=-1) - 1))
    add("nu0_kernel", _maxabs(np.einsum("...ij,...j->...i", pm, nu)))

    io = spinors.iota_matrix(p)
    add("iota_square", _maxabs(io @ io + np.eye(2)))
    add("iota_plus", _maxabs(pp @ io - 1j * pp))
    add("iota_minus", _maxabs(np.swapaxes(io.conj(), -1, -2) @ pm - 1j * pm))

    m = dirac_matrices()
    eta = np.diag([1.0, -1.0, -1.0, -1.0])
    anti = max(_maxabs(m.gamma[a] @ m.gamma[b] + m.gamma[b] @ m.gamma[a] - 2 * eta[a, b] * np.eye(4))
               for a in range(4) for b in range(4))
    add("gamma_anticommutator", anti)
    add("alpha_product", max(
        _maxabs(m.alpha[j] @ m.alpha[k] - (j == k) * np.eye(4) - 1j * m.sigma_jk[j, k])
        for j in range(3) for k in range(3)))
    add("charge_conjugation", max(
        _maxabs(m.C @ m.gamma[0] @ m.gamma[k].conj() - m.gamma[k] @ m.gamma[0] @ m.C)
        for k in range(1, 4)))

    lam = rng.uniform(-3, 3, size=n)
    mu = rng.uniform(-3, 3, size=n)
    el = np.array([spinors.e_matrix(a) for a in lam])
    em = np.array([spinors.e_matrix(b) for b in mu])
    elm = np.array([spinors.e_matrix(a + b) for a, b in zip(lam, mu)])
    # entries grow like cosh(3/2)^2, so compare relative to the largest entry
    scale = np.max(np.abs(elm), axis=(-1, -2))
    add("e_group_law", float(np.max(np.max(np.abs(el @ em - elm), axis=(-1, -2)) / scale)))
    eBe = el @ m.B @ np.swapaxes(el.conj(), -1, -2)
    add("e_preserves_B", float(np.max(np.max(np.abs(eBe - m.B), axis=(-1, -2))
                                      / np.max(np.abs(el), axis=(-1, -2)) ** 2)))
    add("e_det", _maxabs(np.linalg.det(el) - 1))
    return checks


# ------------------------------------------------------------------ flow suite


def sample_double_cone(rng, n, shrink=1.0):
    """Uniform points of the open double cone |x0| + |x| < shrink."""
    out = np.empty((0, 4))
    while len(out) < n:
        x = rng.uniform(-shrink, shrink, size=(2 * n, 4))
        ok = np.abs(x[:, 0]) + np.linalg.norm(x[:, 1:], axis=-1) < shrink
        out = np.concatenate([out, x[ok]])
    return out[:n]


def _fd_jacobian(lam, x, step=1e-5):
    """Central-difference 4x4 Jacobian determinant of nu_lam at each row of x."""
    cols = []
    for k in range(4):
        e = np.zeros(4)
        e[k] = step
        cols.append((flow.nu(lam, x + e) - flow.nu(lam, x - e)) / (2 * step))
    return np.linalg.det(np.stack(cols, axis=-1))


def flow_suite(cfg):
    rng = cfg.rng(2)
    n = cfg.instances
    checks = []

    lam = rng.uniform(-3, 3, size=n)
    x = rng.uniform(-2, 2, size=(n, 4))
    c, s = np.cosh(lam / 2), np.sinh(lam / 2)
    det = np.linalg.det(c[:, None, None] * np.eye(2) - s[:, None, None] * spinors.slash2(x))
    t = flow.tau(lam, x)
    checks.append(Check("tau_determinant", float(np.max(np.abs(t - det.real) / np.maximum(1, np.abs(t)))),
                        0.0, cfg.tol("tau_determinant", 1e-12), "max"))

    xin = sample_double_cone(rng, n)
    a = rng.uniform(-1, 1, size=n)
    b = rng.uniform(-1, 1, size=n)
    lhs = flow.nu(a, flow.nu(b, xin))
    rhs = flow.nu(a + b, xin)
    checks.append(Check("nu_group_law", _maxabs(lhs - rhs), 0.0, cfg.tol("nu_group_law", 1e-10), "max"))

    lam3 = rng.uniform(-3, 3, size=n)
    img = flow.nu(lam3, xin)
    margin = 1.0 - (np.abs(img[:, 0]) + np.linalg.norm(img[:, 1:], axis=-1))
    checks.append(Check("double_cone_invariance_margin", float(np.min(margin)), 0.0, 0.0, "min",
                        "min over samples of 1 - (|x0'| + |x'|); must stay positive"))

    m = min(n, 500)
    lj = rng.uniform(-1, 1, size=m)
    xj = sample_double_cone(rng, m, 0.9)
    fd = np.array([_fd_jacobian(l, xx[None])[0] for l, xx in zip(lj, xj)])
    an = flow.jacobian(lj, xj)
    checks.append(Check("jacobian_fd", float(np.max(np.abs(an - fd) / np.abs(an))), 0.0,
                        cfg.tol("jacobian_fd", 1e-6), "max"))

    lt = rng.uniform(-3, 3, size=n)
    xt = rng.uniform(-2, 2, size=(n, 4))
    keep = np.abs(flow.tau(lt, xt)) > 1e-3
    lt, xt = lt[keep], xt[keep]
    t1 = flow.tau(lt, xt)
    t2 = flow.tau(-lt, flow.nu(lt, xt))
    checks.append(Check("tau_inverse_product", _maxabs(t1 * t2 - 1.0), 0.0,
                        cfg.tol("tau_inverse_product", 1e-10), "max"))
    checks.append(Check("tau_inverse_sign_mismatch", float(np.sum(np.sign(t1) != np.sign(t2))),
                        0.0, 0.0, "max", "count of samples where the two tau factors differ in sign"))

    checks.append(Check("mobius_boundary_limit", _mobius_limit(rng, min(n, 500)), 0.0,
                        cfg.tol("mobius_boundary_limit", 1e-8), "max"))
    checks.append(Check("lightcone_flow_form", _lightcone_form(rng, n), 0.0,
                        cfg.tol("lightcone_flow_form", 1e-10), "max"))

    xr = rng.uniform(-2, 2, size=(n, 4))
    back = flow.from_lightcone(flow.lightcone_coords(xr))
    checks.append(Check("lightcone_round_trip", _maxabs(back - xr), 0.0,
                        cfg.tol("lightcone_round_trip", 1e-13), "max"))

    lf = rng.uniform(-3, 3, size=n)
    u = rng.uniform(-0.999, 0.999, size=n)
    checks.append(Check("f_profile_inverse", _maxabs(flow.f_profile(-lf, flow.f_profile(lf, u)) - u),
                        0.0, cfg.tol("f_profile_inverse", 1e-12), "max"))

    worst = 0.0
    for xs in rng.uniform(-3, 3, size=(min(n, 2000), 4)):
        for ls in flow.singular_parameters(xs):
            worst = max(worst, abs(float(flow.tau(ls, xs))) / max(1.0, float(np.cosh(ls))))
    checks.append(Check("singular_parameters_zero", worst, 0.0,
                        cfg.tol("singular_parameters_zero", 1e-12), "max"))
    return checks


def _mobius_limit(rng, n, eps=1e-10):
    worst = 0.0
    lams = rng.uniform(-0.5, 0.5, size=n)
    xs = sample_double_cone(rng, n)
    for lam, x in zip(lams, xs):
        g = spinors.e_matrix(2 * np.pi * lam)
        z = flow.TubePoint.from_array(x + 1j * eps * np.array([1.0, 0, 0, 0]))
        w = flow.mobius(g, z).as_array()
        worst = max(worst, float(np.max(np.abs(w.real - flow.nu(2 * np.pi * lam, x)))))
    return worst


def _lightcone_form(rng, n):
    """Compare nu with the light-cone description u' = f(u), v' = f(v) (swapped when tau < 0)."""
    lam = rng.uniform(-2, 2, size=n)
    x = rng.uniform(-2, 2, size=(n, 4))
    t = flow.tau(lam, x)
    keep = np.abs(t) > 0.05
    lam, x, t = lam[keep], x[keep], t[keep]
    c = flow.lightcone_coords(x)
    img = flow.nu(lam, x)
    ci = flow.lightcone_coords(img)
    fu, fv = flow.f_profile(lam, c.u), flow.f_profile(lam, c.v)
    pos = t > 0
    u_pred = np.where(pos, fu, fv)
    v_pred = np.where(pos, fv, fu)
    scale = np.maximum(1.0, np.maximum(np.abs(u_pred), np.abs(v_pred)))
    err = np.maximum(np.abs(ci.u - u_pred), np.abs(ci.v - v_pred)) / scale
    # direction of x' is x/|x| for tau > 0 and -x/|x| for tau < 0
    r = np.linalg.norm(x[:, 1:], axis=-1)
    ri = np.linalg.norm(img[:, 1:], axis=-1)
    ok = (r > 1e-6) & (ri > 1e-6)
    d = x[ok, 1:] / r[ok, None]
    di = img[ok, 1:] / ri[ok, None]
    ang = np.max(np.abs(di - np.sign(t[ok])[:, None] * d), axis=-1)
    return float(max(np.max(err), np.max(ang)))


SUITE_FUNCTIONS = {
    "spinor": spinor_suite,
    "flow": flow_suite,
}


# ------------------------------------------------------------------ wave suite

RESIDUAL_GRIDS = (24, 32, 48)


def _gaussian_state(grid, width, spinor, center=(0.0, 0.0, 0.0), R=1.5, leak_tol=1e-12):
    from .profiles import ProfileTerm, synthesize_cauchy

    return synthesize_cauchy(grid, [ProfileTerm("gaussian", width, spinor, center)], R, leak_tol)


def random_states(grid, rng, count, R=1.6):
    """Superpositions of two Gaussians (width 0.2..0.24) with random spinors and centres."""
    from .profiles import ProfileTerm, synthesize_cauchy

    out = []
    for _ in range(count):
        terms = []
        for _ in range(2):
            spinor = rng.normal(size=2) + 1j * rng.normal(size=2)
            centre = rng.uniform(-0.15, 0.15, size=3)
            terms.append(ProfileTerm("gaussian", rng.uniform(0.2, 0.24), tuple(spinor), tuple(centre)))
        out.append(synthesize_cauchy(grid, terms, R))
    return out


def weyl_residual(N, order=2, L=2.5, t0=0.3, width=0.25):
    """Relative residual ||D_t Phi + sigma.grad Phi|| at t0 with a centred time difference.

    Spatial derivatives are spectral; the time step equals the grid spacing.
    ``order`` 2 uses (Phi(t+h/2) - Phi(t-h/2))/h, order 4 the five-point stencil.
    """
    from .waves import evolve, spectral_gradient

    g = GridSpec(L, N)
    phi = _gaussian_state(g, width, (1.0, 0.4j), (0.1, -0.05, 0.0), R=1.7)
    dt = g.h
    if order == 2:
        d0 = (evolve(phi, t0 + dt / 2).values - evolve(phi, t0 - dt / 2).values) / dt
    elif order == 4:
        f = {k: evolve(phi, t0 + k * dt).values for k in (-2, -1, 1, 2)}
        d0 = (f[-2] - 8 * f[-1] + 8 * f[1] - f[2]) / (12 * dt)
    else:
        raise ValueError("order must be 2 or 4")
    grad = spectral_gradient(evolve(phi, t0).values, g)
    sg = sum(np.einsum("ij,...j->...i", SIGMA[k], grad[k]) for k in range(3))
    return float(np.sqrt(np.sum(np.abs(d0 + sg) ** 2) / np.sum(np.abs(sg) ** 2)))


def residual_orders(order=2, grids=RESIDUAL_GRIDS):
    r = [weyl_residual(N, order) for N in grids]
    orders = [np.log(r[i] / r[i + 1]) / np.log(grids[i + 1] / grids[i]) for i in range(len(r) - 1)]
    return r, orders


def default_test_function():
    """Gaussian in time times a degree-4 bump in space."""
    from .testfunctions import SeparableTerm, TestFunctionSpec

    return TestFunctionSpec((
        SeparableTerm("gaussian", 0.0, 0.15, "bump", (0.05, 0.0, -0.05), 0.6, (1.0, 0.5 - 0.2j),
                      space_degree=4),
    ))


def wave_suite(cfg):
    from .spinors import nu0
    from .testfunctions import wave_from_testfunction
    from .waves import (apply_iota, evaluate, evolve, fft3, ifft3, inner, norm, v_inverse, v_map,
                        v_norm2)

    g = cfg.grid
    rng = cfg.rng(3)
    checks = []
    states = random_states(g, rng, 20)

    pars = [abs(inner(s, s).real - s.l2_norm2()) / s.l2_norm2() for s in states]
    checks.append(Check("parseval", max(pars), 0.0, cfg.tol("parseval", 1e-10), "max"))

    gauss = _gaussian_state(g, 0.22, (1.0, 0.0))
    ft = fft3(gauss.values, g)[..., 0]
    exact = (2 * np.pi * 0.22**2) ** 1.5 * np.exp(-0.5 * 0.22**2 * g.pnorm**2)
    checks.append(Check("gaussian_transform", _maxabs(ft - exact) / _maxabs(exact), 0.0,
                        cfg.tol("gaussian_transform", 1e-8), "max"))
    rt = max(_maxabs(ifft3(fft3(s.values, g), g) - s.values) / _maxabs(s.values) for s in states)
    checks.append(Check("round_trip", rt, 0.0, cfg.tol("round_trip", 1e-12), "max"))

    res2, ord2 = residual_orders(2)
    checks.append(Check("weyl_residual_order", min(ord2), 2.0, 0.0, "min",
                        "centred second-order time difference, N = 24, 32, 48"))
    res4, ord4 = residual_orders(4)
    checks.append(Check("weyl_residual_order_five_point", min(ord4), 2.0, 0.0, "min",
                        "five-point time difference, N = 24, 32, 48"))
    checks.append(Check("weyl_residual_decreasing", float(max(np.diff(res2))), 0.0, 0.0, "max"))

    hu = _gaussian_state(g, 0.22, (1.0, 0.4j), (0.1, -0.05, 0.0), R=1.5)
    worst = 0.0
    for t in (0.3, 0.7):
        d = rng.normal(size=(300, 3))
        d /= np.linalg.norm(d, axis=1)[:, None]
        r = rng.uniform(hu.support_radius + t + 0.2, g.L - 0.05, size=300)
        pts = np.concatenate([np.full((300, 1), t), d * r[:, None]], axis=1)
        worst = max(worst, _maxabs(evaluate(hu, pts)) / norm(hu))
    checks.append(Check("huygens_exterior", worst, 0.0, cfg.tol("huygens_exterior", 1e-8), "max"))

    s0 = states[0]
    t = 0.4
    ev = evolve(s0, t)
    idx = rng.integers(0, g.N, size=(50, 3))
    pts = np.concatenate([np.full((50, 1), t), g.x[idx]], axis=1)
    val = evaluate(s0, pts)
    ref = ev.values[idx[:, 0], idx[:, 1], idx[:, 2]]
    checks.append(Check("evaluate_vs_evolve", _maxabs(val - ref) / _maxabs(ev.values), 0.0,
                        cfg.tol("evaluate_vs_evolve", 1e-10), "max"))
    comp = _maxabs(evolve(evolve(s0, 0.3), 0.5).values - evolve(s0, 0.8).values) / _maxabs(s0.values)
    checks.append(Check("evolve_composition", comp, 0.0, cfg.tol("evolve_composition", 1e-12), "max"))

    iso, inv = 0.0, 0.0
    for s in states:
        l, h = v_map(s)
        n2 = inner(s, s).real
        iso = max(iso, abs(v_norm2(l, h, g) - n2) / n2)
        back = v_inverse(l, h, g, s.support_radius)
        inv = max(inv, _maxabs(back.values - s.values) / _maxabs(s.values))
    checks.append(Check("v_isometry", iso, 0.0, cfg.tol("v_isometry", 1e-10), "max"))
    checks.append(Check("v_inverse", inv, 0.0, cfg.tol("v_inverse", 1e-10), "max"))

    # complex structure on zero-mean data (the zero mode is annihilated)
    z = states[1]
    hat = fft3(z.values, g)
    hat[0, 0, 0] = 0
    z = z.replace(ifft3(hat, g))
    iz = apply_iota(z)
    n2 = inner(z, z).real
    checks.append(Check("iota_square", _maxabs(apply_iota(iz).values + z.values) / _maxabs(z.values),
                        0.0, cfg.tol("iota_square", 1e-12), "max"))
    checks.append(Check("iota_norm", abs(norm(iz) ** 2 - n2) / n2, 0.0, cfg.tol("iota_norm", 1e-12), "max"))
    checks.append(Check("iota_sesquilinear", abs(inner(iz, z) + 1j * n2) / n2, 0.0,
                        cfg.tol("iota_sesquilinear", 1e-10), "max",
                        "<iota Phi, Phi> = -i ||Phi||^2 for a product antilinear in the first slot"))

    f = default_test_function()
    phif = wave_from_testfunction(f, g, 1.5)
    fp, fm = f.conj_transform_onshell(g)
    ok = g.pnorm > 0
    pm = np.where(ok[..., None, None], -g.pnorm[..., None, None] * np.eye(2) + g.dsig * g.pnorm[..., None, None], 0)
    lhs = np.einsum("...ij,...j->...i", pm, fft3(phif.values, g))
    rhs = np.einsum("...ij,...j->...i", pm, fm)
    checks.append(Check("onshell_identity", _maxabs(lhs - rhs) / _maxabs(rhs), 0.0,
                        cfg.tol("onshell_identity", 1e-10), "max"))

    l, h = v_map(phif)
    # h reads Phi^ at -p, which has no grid partner on the Nyquist planes
    ny = g.m == -(g.N // 2)
    inner_modes = ok & ~(ny[:, None, None] | ny[None, :, None] | ny[None, None, :])
    P = np.where(ok[..., None], g.P, np.array([0.0, 0.0, 1.0]))
    n0 = nu0(P)
    c = (2 * np.pi) ** -1.5
    l_f = -c * np.einsum("...i,...i->...", n0.conj(), fp)
    h_f = c * np.einsum("...i,...i->...", f.transform(g.pnorm, g.P), n0)
    err = max(_maxabs((l - l_f)[inner_modes]) / _maxabs(l_f),
              _maxabs((h - h_f)[inner_modes]) / _maxabs(h_f))
    checks.append(Check("v_of_test_function", err, 0.0, cfg.tol("v_of_test_function", 1e-8), "max",
                        "p = 0 and the Nyquist planes excluded"))
    return checks


SUITE_FUNCTIONS["wave"] = wave_suite


# --------------------------------------------------------------- modular suite

MODULAR_WIDTH = 0.18
MODULAR_RADIUS = 0.8
MODULAR_LEAK_TOL = 1e-6
MODULAR_LAMBDA = 0.1


def modular_state(grid, spinor=(1.0, 0.3j), center=(0.0, 0.0, 0.0), width=MODULAR_WIDTH):
    """Gaussian data declared with support radius 0.8 (tail mass ~1e-8 beyond it)."""
    from .profiles import ProfileTerm, synthesize_cauchy

    return synthesize_cauchy(grid, [ProfileTerm("gaussian", width, spinor, center)],
                             MODULAR_RADIUS, MODULAR_LEAK_TOL)


def modular_test_function():
    """Gaussian in time and space, concentrated well inside the double cone."""
    from .testfunctions import SeparableTerm, TestFunctionSpec

    return TestFunctionSpec((
        SeparableTerm("gaussian", 0.0, 0.08, "gaussian", (0.0, 0.0, 0.0), 0.18, (1.0, 0.3j)),
    ))


def modular_suite(cfg):
    from .flow import f_profile
    from .modular import (generator_convergence, lambda_max, modular_apply, observed_orders,
                          relative_error, richardson_central)
    from .waves import apply_iota, inner, norm

    g = cfg.grid
    lam = MODULAR_LAMBDA
    checks = []
    extra = {}
    phi = modular_state(g)
    psi = modular_state(g, (0.4 - 0.2j, 1.0), (0.05, -0.03, 0.02))
    lmax = lambda_max(MODULAR_RADIUS, g.L)
    extra["lambda_max"] = lmax
    checks.append(Check("lambda_admissible", lmax, lam, 0.0, "min", "lambda_max(R) >= 0.1"))

    outs = {}
    for sgn in (1, -1):
        outs[sgn] = modular_apply(sgn * lam, phi)
    n0 = norm(phi)
    drift = max(abs(norm(outs[s]) - n0) / n0 for s in (1, -1))
    checks.append(Check("unitarity_norm", drift, 0.0, cfg.tol("unitarity_norm", 1e-5), "max"))

    dpsi = modular_apply(lam, psi)
    scale = norm(psi) * n0
    pair = abs(inner(dpsi, outs[1]) - inner(psi, phi)) / scale
    checks.append(Check("unitarity_pair", pair, 0.0, cfg.tol("unitarity_pair", 1e-5), "max"))

    # Im<a, b> = -Re<a, iota b>; the imaginary part carries the complex structure,
    # including the helicity-averaged p = 0 cell that apply_iota annihilates
    before = inner(psi, phi)
    after = inner(dpsi, outs[1])
    checks.append(Check("iota_linearity", abs(after.imag - before.imag) / scale, 0.0,
                        cfg.tol("iota_linearity", 1e-5), "max",
                        "Im<D Psi, D Phi> = Im<Psi, Phi>"))
    extra["iota_pairing_without_zero_mode"] = abs(
        inner(dpsi, apply_iota(outs[1])) - inner(psi, apply_iota(phi))) / scale
    try:
        extra["iota_linearity_pointwise"] = relative_error(
            modular_apply(lam, apply_iota(phi)), apply_iota(outs[1]))
    except WeylmodError as exc:
        extra["iota_linearity_pointwise"] = f"not computable: {exc}"

    a, b = 0.05, 0.04
    composed = modular_apply(a, modular_apply(b, phi))
    direct = modular_apply(a + b, phi)
    checks.append(Check("group_law", relative_error(composed, direct), 0.0,
                        cfg.tol("group_law", 1e-4), "max"))

    R = MODULAR_RADIUS
    for sgn, name in ((1, "plus"), (-1, "minus")):
        literal = f_profile(2 * np.pi * sgn * lam, R)
        checks.append(Check(f"support_bound_literal_{name}", outs[sgn].leak(float(literal)), 0.0,
                            cfg.tol("support_bound", 1e-6), "max",
                            f"mass fraction outside f_(2 pi lam)(R) = {float(literal):.6f}"))
        sym = f_profile(-2 * np.pi * abs(lam), R)
        checks.append(Check(f"support_bound_{name}", outs[sgn].leak(float(sym)), 0.0,
                            cfg.tol("support_bound", 1e-6), "max",
                            f"mass fraction outside f_(-2 pi |lam|)(R) = {float(sym):.6f}"))

    lams = sorted(cfg.lambdas, reverse=True)
    rows = generator_convergence(phi, lams)
    fwd = [r.forward_error for r in rows]
    cen = [r.central_error for r in rows]
    extra["convergence"] = [{"lambda": r.lam, "forward": r.forward_error, "central": r.central_error}
                            for r in rows]
    checks.append(Check("forward_order", float(np.min(observed_orders(fwd, lams))), 1.0, 0.0, "min",
                        "smallest observed order over successive lambda pairs"))
    checks.append(Check("central_order", float(np.min(observed_orders(cen, lams))), 2.0, 0.0, "min",
                        "smallest observed order over successive lambda pairs"))
    extra["forward_orders"] = [float(v) for v in observed_orders(fwd, lams)]
    extra["central_orders"] = [float(v) for v in observed_orders(cen, lams)]
    checks.append(Check("richardson_limit", richardson_central(phi, lams), 0.0,
                        cfg.tol("richardson_limit", 1e-4), "max"))

    checks.append(Check("test_function_route", _test_function_route(g, lam), 0.0,
                        cfg.tol("test_function_route", 1e-4), "max"))
    return checks, extra


def _test_function_route(grid, lam):
    """||Delta^{i lam} Phi^f - Phi^{E_lam f}|| / ||Phi^{E_lam f}||."""
    from .modular import e_lambda_masked, modular_apply, relative_error
    from .testfunctions import wave_from_pointwise, wave_from_testfunction

    f = modular_test_function()
    phif = wave_from_testfunction(f, grid, MODULAR_RADIUS)
    lhs = modular_apply(lam, phif)
    rhs = wave_from_pointwise(lambda x: e_lambda_masked(lam, f, x), grid, MODULAR_RADIUS,
                              -1.0, 1.0, 400)
    return relative_error(lhs, rhs)


SUITE_FUNCTIONS["modular"] = modular_suite


# --------------------------------------------------------------- entropy suite

ENTROPY_STATES = 5
ENTROPY_CHECK_GRID = 64
ORACLE_GRID = GridSpec(2.0, 12, coarse=True)


def entropy_states(grid, rng, count=ENTROPY_STATES):
    """Normalized Majorana states from one Gaussian (width 0.14..0.18) inside the unit ball."""
    from .dirac import majorana_embed
    from .entropy import normalize
    from .profiles import ProfileTerm, synthesize_cauchy

    out = []
    for _ in range(count):
        spinor = rng.normal(size=2) + 1j * rng.normal(size=2)
        centre = rng.uniform(-0.05, 0.05, size=3)
        term = ProfileTerm("gaussian", rng.uniform(0.14, 0.18), tuple(spinor), tuple(centre))
        phi = synthesize_cauchy(grid, [term], 1.0, 1e-9)
        out.append(normalize(majorana_embed(phi))[0])
    return out


def entropy_suite(cfg):
    from .dirac import majorana_embed
    from .entropy import (energy_density_oracle, energy_density_profile, entropy_report,
                          normalize)
    from .profiles import ProfileTerm, synthesize_cauchy

    checks = []
    extra = {"states": []}
    states = entropy_states(cfg.grid, cfg.rng(5))
    reports = []
    for psi in states:
        rep = entropy_report(psi)
        prof = energy_density_profile(psi)
        reports.append((rep, prof))
        extra["states"].append(rep.as_dict())

    def worst(fn):
        return float(max(fn(r, p) for r, p in reports))

    checks.append(Check("generator_vs_fourier", worst(lambda r, p: r.dev_generator_fourier), 0.0,
                        cfg.tol("generator_vs_fourier", 1e-6), "max"))
    checks.append(Check("generator_vs_energy", worst(lambda r, p: r.dev_generator_energy), 0.0,
                        cfg.tol("generator_vs_energy", 1e-4), "max",
                        f"energy prefactor {reports[0][0].energy_prefactor:.6g}"))
    checks.append(Check("generator_vs_energy_consistent",
                        worst(lambda r, p: r.dev_generator_energy_consistent), 0.0,
                        cfg.tol("generator_vs_energy", 1e-4), "max", "energy prefactor pi"))
    s_min = float(min(min(r.s_generator, r.s_fourier) for r, _ in reports))
    checks.append(Check("positivity", s_min, 0.0, cfg.tol("positivity", 1e-6), "min"))
    checks.append(Check("energy_exterior_ratio", worst(lambda r, p: p.exterior_ratio(1.0)), 0.0,
                        cfg.tol("energy_exterior_ratio", 1e-6), "max"))
    checks.append(Check("energy_integral", worst(
        lambda r, p: abs(r.energy_integral - r.spectral_energy) / abs(r.spectral_energy)), 0.0,
        cfg.tol("energy_integral", 1e-6), "max", "sum t h^3 against the momentum diagonal"))
    checks.append(Check("energy_imag_residue", worst(lambda r, p: p.imag_residue), 0.0,
                        cfg.tol("energy_imag_residue", 1e-10), "max"))

    # a finer grid for the first state: routes agree and the entropy is converged
    fine = replace(cfg.grid, N=ENTROPY_CHECK_GRID)
    fine_state = entropy_states(fine, cfg.rng(5), 1)[0]
    fine_rep = entropy_report(fine_state)
    extra["fine_grid"] = fine_rep.as_dict()
    checks.append(Check("generator_vs_fourier_fine", fine_rep.dev_generator_fourier, 0.0,
                        cfg.tol("generator_vs_fourier", 1e-6), "max", f"N = {ENTROPY_CHECK_GRID}"))
    first = reports[0][0]
    for name, attr in (("fourier", "dev_generator_fourier"),
                       ("energy_consistent", "dev_generator_energy_consistent")):
        coarse_dev, fine_dev = getattr(first, attr), getattr(fine_rep, attr)
        checks.append(Check(f"{name}_improves_on_refinement", fine_dev, 0.0,
                            max(coarse_dev, cfg.tol("roundoff_floor", 1e-13)), "max",
                            f"N = {ENTROPY_CHECK_GRID} deviation at most the N = {cfg.grid.N} one"))
    s0 = first.s_generator
    checks.append(Check("grid_convergence", abs(fine_rep.s_generator - s0) / abs(s0), 0.0,
                        cfg.tol("grid_convergence", 1e-6), "max",
                        f"N = {cfg.grid.N} against N = {ENTROPY_CHECK_GRID}"))

    # brute-force double momentum sum on a coarse grid
    term = ProfileTerm("gaussian", 0.3, (1.0, 0.3j), (0.1, 0.0, 0.05))
    coarse = normalize(majorana_embed(synthesize_cauchy(ORACLE_GRID, [term], 1.0, 1e-2)))[0]
    t = energy_density_profile(coarse, check=False).values
    o = energy_density_oracle(coarse)
    checks.append(Check("energy_oracle", float(np.abs(o - t).max() / np.abs(t).max()), 0.0,
                        cfg.tol("energy_oracle", 1e-6), "max", "N = 12 double momentum sum"))
    return checks, extra


SUITE_FUNCTIONS["entropy"] = entropy_suite
