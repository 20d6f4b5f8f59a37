"""Relative entropy of one-particle Majorana states localized in the unit ball.

Three routes are provided:

* ``entropy_via_generator``: S = -2 Im <Psi, K_D Psi>;
* ``entropy_fourier``: a momentum-space quadrature with p-derivatives of Psi^_0;
* ``entropy_energy_density``: a (1 - r^2)-weighted integral of the energy
  density t(x) = <Psi, T_00(0, x) Psi>.

The energy-density prefactor defaults to 1/4 pi^2.  The prefactor for which
this route agrees with the other two is pi (``CONSISTENT_PREFACTOR``); reports
carry both values, and no entropy is clamped.
"""

import csv
from dataclasses import asdict, dataclass

import numpy as np

from .dirac import MajoranaState, apply_matrix, inner_dirac, k_dirac
from .errors import NotNormalizedError, SupportViolationError
from .spinors import dirac_matrices
from .waves import fft3, fixed_sum, ifft3

NORM_TOL = 1e-8
LEAK_TOL = 1e-8
THEOREM_PREFACTOR = 1.0 / (4 * np.pi**2)
CONSISTENT_PREFACTOR = np.pi
ORACLE_MAX_N = 16


def _dirac(psi):
    return psi.dirac if isinstance(psi, MajoranaState) else psi


def support_leak(psi):
    """Mass fraction of Psi_0 at nodes outside the closed unit ball."""
    return _dirac(psi).leak(1.0)


def check_state(psi, norm_tol=NORM_TOL, leak_tol=LEAK_TOL):
    """Raise unless ||Psi|| = 1 and Psi_0 is supported in the unit ball."""
    d = _dirac(psi)
    if d.support_radius > 1.0:
        raise SupportViolationError(f"declared support radius {d.support_radius:g} exceeds 1")
    leak = support_leak(d)
    if not leak < leak_tol:
        raise SupportViolationError(f"mass fraction {leak:.3e} outside the unit ball")
    n2 = inner_dirac(d, d).real
    if not abs(n2 - 1.0) <= norm_tol:
        raise NotNormalizedError(f"||Psi||^2 = {n2:.17g}, expected 1")
    return n2, leak


def normalize(psi):
    """Return (psi / ||psi||, 1 / ||psi||)."""
    n2 = inner_dirac(psi, psi).real
    if not n2 > 0:
        raise NotNormalizedError("cannot normalize the zero state")
    factor = 1.0 / np.sqrt(n2)
    if isinstance(psi, MajoranaState):
        return psi.scaled(factor), factor
    return psi * factor, factor


def entropy_via_generator(psi):
    check_state(psi)
    return -2.0 * inner_dirac(psi, k_dirac(_dirac(psi))).imag


def entropy_fourier(psi):
    """Momentum-space quadrature of the three-term integrand (p = 0 dropped).

    p-derivatives of Psi^_0 are the transforms of -i x_k Psi_0 and of
    -|x|^2 Psi_0.
    """
    check_state(psi)
    d = _dirac(psi)
    g = d.grid
    v = d.values
    hat = fft3(v, g)
    dhat = [fft3(-1j * g.X[..., k, None] * v, g) for k in range(3)]
    lap = fft3(-g.r2[..., None] * v, g)
    sjk = dirac_matrices().sigma_jk
    P = g.P
    integrand = g.pnorm**2 * np.einsum("...i,...i->...", hat.conj(), hat + lap)
    for k in range(3):
        integrand = integrand + P[..., k] * np.einsum("...i,...i->...", hat.conj(), dhat[k])
    for j in range(3):
        for k in range(3):
            if j != k:
                integrand = integrand + 1j * P[..., j] * np.einsum(
                    "...i,ij,...j->...", hat.conj(), sjk[j, k], dhat[k])
    pn = g.pnorm
    weighted = np.where(pn > 0, integrand / np.where(pn > 0, pn, 1.0), 0.0)
    total = fixed_sum(weighted) * g.dp**3
    return float(total.real / (4 * np.pi**2))


@dataclass(frozen=True, eq=False)
class EnergyDensityProfile:
    """t(x) on the grid; ``imag_residue`` is max |Im| / max |t| before discarding Im."""

    grid: object
    values: np.ndarray
    imag_residue: float

    def integral(self):
        return float(fixed_sum(self.values) * self.grid.h**3)

    def weighted_integral(self):
        """sum (1 - r^2) t(x) h^3."""
        return float(fixed_sum((1.0 - self.grid.r2) * self.values) * self.grid.h**3)

    def exterior_ratio(self, radius=1.0):
        """max |t| outside radius over max |t| inside."""
        a = np.abs(self.values)
        outside = self.grid.r2 > radius**2
        inside_max = a[~outside].max() if np.any(~outside) else 0.0
        if inside_max == 0:
            return 0.0
        return float(a[outside].max() / inside_max) if np.any(outside) else 0.0

    def to_csv(self, path):
        X = self.grid.X.reshape(-1, 3)
        t = self.values.reshape(-1)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x1", "x2", "x3", "t"])
            for (a, b, c), val in zip(X, t):
                w.writerow([f"{a:.17g}", f"{b:.17g}", f"{c:.17g}", f"{val:.17g}"])


def _chiral_parts(hat, grid):
    """psi_pm(x): inverse transforms of (1 +- d_j gamma^0 gamma^j)/2 Psi^_0."""
    alpha = dirac_matrices().alpha
    A = np.einsum("...k,kab->...ab", grid.direction, alpha)
    Ahat = apply_matrix(A, hat)
    return {sg: 0.5 * (hat + sg * Ahat) for sg in (1, -1)}


def energy_density_profile(psi, check=True):
    """t(x) = (i/2)(d_x - d_y) <Psi, :psi^+(x) gamma^0 gamma^k psi(y): Psi> at y = x.

    The bilinear is 2 [psi_+^+ a^k psi_+ - psi_-^+ a^k psi_-] (a^k = gamma^0 gamma^k),
    with psi_pm the spectral projections of Psi_0; derivatives are spectral.
    """
    if check:
        check_state(psi)
    d = _dirac(psi)
    g = d.grid
    alpha = dirac_matrices().alpha
    hat = fft3(d.values, g)
    t = np.zeros(g.shape, dtype=complex)
    for sg, part in _chiral_parts(hat, g).items():
        f = ifft3(part, g)
        for k in range(3):
            df = ifft3(1j * g.P[..., k, None] * part, g)
            af = apply_matrix(alpha[k], f)
            adf = apply_matrix(alpha[k], df)
            # (i/2)[(d psi)^+ a psi - psi^+ a d psi], doubled
            t += sg * 1j * (np.einsum("...i,...i->...", df.conj(), af)
                            - np.einsum("...i,...i->...", f.conj(), adf))
    scale = np.abs(t.real).max()
    resid = float(np.abs(t.imag).max() / scale) if scale > 0 else 0.0
    return EnergyDensityProfile(g, np.ascontiguousarray(t.real), resid)


def spectral_energy(psi):
    """Diagonal (p = q) value of the double-integral energy density: 2 (2 pi)^-3 int |p| |Psi^|^2.

    This is twice <Psi, H Psi> in the Dirac scalar product.
    """
    d = _dirac(psi)
    g = d.grid
    hat = fft3(d.values, g)
    e = fixed_sum(g.pnorm * np.sum(np.abs(hat) ** 2, axis=-1))
    return float(2.0 * e * (g.dp / (2 * np.pi)) ** 3)


def energy_density_oracle(psi):
    """Brute-force double momentum sum for t(x) on a coarse grid (N <= 16).

    t(x) = 1/(2 (2 pi)^6) sum_{p,q} e^{i(q-p).x} Psi^(p)^+ M(p, q) Psi^(q) dp^3 dq^3,
    M = (|p| + |q|) + (1/|p| + 1/|q|)[p.q + i (p x q).Sigma].  In the second term
    p/|p| is taken as 0 at p = 0 (the helicity direction convention of the grid).
    """
    d = _dirac(psi)
    g = d.grid
    if g.N > ORACLE_MAX_N:
        raise ValueError(f"oracle is limited to N <= {ORACLE_MAX_N}")
    hat = fft3(d.values, g).reshape(-1, 4)
    P = g.P.reshape(-1, 3)
    pn = g.pnorm.reshape(-1)
    inv = np.where(pn > 0, 1.0 / np.where(pn > 0, pn, 1.0), 0.0)
    Sigma = dirac_matrices().Sigma
    # scalar part of M between spinors
    overlap = hat.conj() @ hat.T
    M = (pn[:, None] + pn[None, :]) * overlap
    M = M + (inv[:, None] + inv[None, :]) * (P @ P.T) * overlap
    cross = np.cross(P[:, None, :], P[None, :, :])
    spin = np.einsum("pa,hab,qb->pqh", hat.conj(), Sigma, hat)
    M = M + 1j * (inv[:, None] + inv[None, :]) * np.einsum("pqh,pqh->pq", cross, spin)
    X = g.X.reshape(-1, 3)
    E = np.exp(1j * (P @ X.T))
    t = np.einsum("px,px->x", E.conj(), M @ E)
    t = t * g.dp**6 / (2 * (2 * np.pi) ** 6)
    return t.reshape(g.shape)


def entropy_energy_density(psi, prefactor=THEOREM_PREFACTOR, profile=None):
    """S = prefactor * sum (1 - r^2) t(x) h^3."""
    if profile is None:
        profile = energy_density_profile(psi)
    else:
        check_state(psi)
    return prefactor * profile.weighted_integral()


def _rel(a, b):
    den = max(abs(a), abs(b))
    return abs(a - b) / den if den > 0 else 0.0


@dataclass(frozen=True)
class EntropyReport:
    s_generator: float
    s_fourier: float
    s_energy: float
    s_energy_consistent: float
    energy_prefactor: float
    norm_check: float
    support_leak: float
    energy_integral: float
    spectral_energy: float
    dev_generator_fourier: float
    dev_generator_energy: float
    dev_fourier_energy: float
    dev_generator_energy_consistent: float

    def as_dict(self):
        return asdict(self)


def entropy_report(psi, prefactor=THEOREM_PREFACTOR):
    """Run all three routes on a normalized Majorana state."""
    n2, leak = check_state(psi)
    s_gen = entropy_via_generator(psi)
    s_four = entropy_fourier(psi)
    prof = energy_density_profile(psi)
    weighted = prof.weighted_integral()
    s_en = prefactor * weighted
    s_cons = CONSISTENT_PREFACTOR * weighted
    return EntropyReport(
        s_generator=s_gen,
        s_fourier=s_four,
        s_energy=s_en,
        s_energy_consistent=s_cons,
        energy_prefactor=prefactor,
        norm_check=abs(n2 - 1.0),
        support_leak=leak,
        energy_integral=prof.integral(),
        spectral_energy=spectral_energy(psi),
        dev_generator_fourier=_rel(s_gen, s_four),
        dev_generator_energy=_rel(s_gen, s_en),
        dev_fourier_energy=_rel(s_four, s_en),
        dev_generator_energy_consistent=_rel(s_gen, s_cons),
    )
