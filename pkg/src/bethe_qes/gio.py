"""Generalized isotonic oscillator in the pseudospin-symmetric Dirac equation.

Conventions (hbar = c = 1):

* Delta(r) = omega^2 r^2 + 2 g (r^2 - a^2) / (r^2 + a^2)^2, Sigma(r) = C_ps.
* beta^2 = E - mu - C_ps, b = (-1 - sqrt(1 + 4 beta^2 g)) / 2.
* The lower component is G(r) = r^(kappa + 2 nu) (r^2+a^2)^(b+1)
  exp(-beta omega r^2 / 2) phi(t), t = beta omega (r^2 + a^2), and phi solves
  the QES equation with P = t(t - w), Q = -t^2 + q1 t + q0, w = beta omega a^2.

Two workflows are kept apart.  *Table mode* solves the energy equation alone
for beta given (mu, omega, g, C_ps); the width ``a`` never enters.  *State
mode* fixes (omega, a, g), solves the Bethe equations together with the sum
rule for (beta, t_1..t_n), and only then reads off 2 mu + C_ps from the energy
equation.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import sl2
from .bethe import (BetheSolution, QesCoefficients, SolverConfig, _package,
                    _residual_and_jacobian, r0_from_roots)
from .errors import (ComplexExponent, ComplexRoot, InvalidLabel, NoPositiveRoot,
                     NoRealState)


class Sector(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class Potential:
    """Shape parameters of Delta(r)."""

    omega: float
    a: float
    g: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if not self.a > 0:
            raise ValueError("a must be positive")

    def delta(self, r):
        r2 = np.asarray(r, dtype=float) ** 2
        a2 = self.a**2
        return self.omega**2 * r2 + 2 * self.g * (r2 - a2) / (r2 + a2) ** 2


@dataclass(frozen=True)
class GioParameters(Potential):
    """Full physical input.  Field order: omega, a, g, mu, c_ps.

    The energy equation does not involve ``a``; table-mode callers may leave
    it at its default.
    """

    omega: float = 1.0
    a: float = 1.0
    g: float = 0.0
    mu: float = 1.0
    c_ps: float = 0.0

    def __post_init__(self):
        super().__post_init__()
        if not self.mu > 0:
            raise ValueError("mu must be positive")

    @property
    def potential(self) -> Potential:
        return Potential(self.omega, self.a, self.g)

    @property
    def two_mu_plus_cps(self) -> float:
        return 2 * self.mu + self.c_ps


@dataclass(frozen=True)
class StateLabel:
    n: int
    kappa: int
    sector: Sector = Sector.EVEN

    def __post_init__(self):
        object.__setattr__(self, "sector", Sector(self.sector))
        if self.n < 0:
            raise InvalidLabel("n must be non-negative")
        if self.kappa == 0:
            raise InvalidLabel("kappa must be a nonzero integer")
        if self.sector is Sector.EVEN and self.kappa < 0:
            raise InvalidLabel("even sector requires kappa > 0")
        if self.sector is Sector.ODD and self.kappa > 0:
            raise InvalidLabel("odd sector requires kappa < 0")

    @property
    def nu(self) -> float:
        return 0.0 if self.sector is Sector.EVEN else 0.5 - self.kappa

    @property
    def power(self) -> float:
        """Exponent of r in G near the origin: kappa (even) or 1 - kappa (odd)."""
        return self.kappa + 2 * self.nu

    @property
    def level(self) -> float:
        """n + nu + kappa/2 + 3/4; the energy equation depends on the label only
        through this number, hence the (n, kappa) ~ (n-1, kappa+2) degeneracy."""
        return self.n + self.nu + self.kappa / 2 + 0.75


def angular_numbers(kappa: int) -> tuple[int, int]:
    """Orbital and pseudo-orbital numbers (l, l~) with kappa(kappa+1) = l(l+1)
    and kappa(kappa-1) = l~(l~+1)."""
    if kappa == 0:
        raise InvalidLabel("kappa must be nonzero")
    return (kappa, kappa - 1) if kappa > 0 else (-kappa - 1, -kappa)


@dataclass(frozen=True)
class SpectralPoint:
    beta: float
    b: float
    energy: float
    two_mu_plus_cps: float

    def alpha(self, omega: float) -> float:
        return -(self.beta**2 + self.two_mu_plus_cps) * self.beta / (4 * omega)


# -- elementary maps -----------------------------------------------------------

def exponent_b(beta: float, g: float) -> float:
    disc = 1 + 4 * beta**2 * g
    if disc < 0:
        raise ComplexExponent(f"1 + 4 beta^2 g = {disc:.6g} < 0")
    return (-1 - math.sqrt(disc)) / 2


def energy_from_beta(p: GioParameters, beta: float) -> float:
    return p.mu + p.c_ps + beta**2


def qes_coefficients(p: Potential, beta: float, label: StateLabel) -> QesCoefficients:
    b = exponent_b(beta, p.g)
    w = beta * p.omega * p.a**2
    return QesCoefficients(
        p2=1.0,
        p1=-w,
        p0=0.0,
        q2=-1.0,
        q1=2.5 + 2 * b + label.kappa + 2 * label.nu + w,
        q0=-2 * w * (b + 1),
    )


def r0_model(p: Potential, label: StateLabel, beta: float) -> float:
    """r0 read off from the GIO equation: -[beta^2 g/2 - (b+1)(kappa+b+2nu+w+1/2)]."""
    b = exponent_b(beta, p.g)
    w = beta * p.omega * p.a**2
    return -(beta**2 * p.g / 2 - (b + 1) * (label.kappa + b + 2 * label.nu + w + 0.5))


def r1_model(p: Potential, label: StateLabel, beta: float, two_mu_plus_cps: float) -> float:
    """r1 = -(alpha + b + nu + kappa/2 + 5/4)."""
    b = exponent_b(beta, p.g)
    alpha = -(beta**2 + two_mu_plus_cps) * beta / (4 * p.omega)
    return -(alpha + b + label.nu + label.kappa / 2 + 1.25)


def energy_equation_residual(p: GioParameters, label: StateLabel, beta: float) -> float:
    """rhs - lhs of 4 omega level = (beta^2 + 2mu + C_ps) beta + 2 omega sqrt(1 + 4 g beta^2)."""
    lhs = 4 * p.omega * label.level
    return (beta**2 + p.two_mu_plus_cps) * beta + 2 * p.omega * math.sqrt(1 + 4 * p.g * beta**2) - lhs


def two_mu_plus_cps_from_beta(p: Potential, label: StateLabel, beta: float) -> float:
    """The energy equation solved for 2 mu + C_ps."""
    root = math.sqrt(1 + 4 * p.g * beta**2)
    return (4 * p.omega * label.level - 2 * p.omega * root) / beta - beta**2


# -- table mode ----------------------------------------------------------------

def energy_search_domain(p: GioParameters, label: StateLabel) -> tuple[float, bool]:
    """Upper end of the beta scan and whether it was clipped by g < 0."""
    beta_max = 10 * (1 + abs(4 * p.omega * label.level) ** (1 / 3))
    if p.g < 0:
        edge = 1 / (2 * math.sqrt(-p.g))
        if edge < beta_max:
            return edge * (1 - 1e-12), True
    return beta_max, False


def beta_from_energy_eq(p: GioParameters, label: StateLabel, panels: int = 1024) -> list[float]:
    """All positive roots of the energy equation, ascending.

    Scans ``panels`` equal panels of (0, beta_max] and refines every sign
    change with Brent's method.

    Raises:
        NoPositiveRoot: no sign change was found.
    """
    beta_max, _ = energy_search_domain(p, label)
    grid = np.linspace(0.0, beta_max, panels + 1)
    f = [energy_equation_residual(p, label, x) for x in grid]
    roots = []
    for i in range(panels):
        lo, hi, flo, fhi = grid[i], grid[i + 1], f[i], f[i + 1]
        if flo == 0.0 and lo > 0:
            roots.append(lo)
        elif flo * fhi < 0:
            roots.append(brentq(lambda x: energy_equation_residual(p, label, x), lo, hi,
                                xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200))
    if f[-1] == 0.0:
        roots.append(grid[-1])
    if not roots:
        raise NoPositiveRoot(f"no positive beta for {label} with {p}")
    return roots


# -- closed forms for n = 0 and n = 1 -------------------------------------------

def ground_state_constraint(p: Potential, kappa: int, sector: Sector, beta: float) -> float:
    """Quadratic in beta whose positive roots are the n=0 QES points."""
    sector = Sector(sector)
    StateLabel(0, kappa, sector)
    w2 = p.omega * p.a**2
    lead = 4 * w2**2 - p.g
    if sector is Sector.EVEN:
        return lead * beta**2 + 2 * w2 * (1 + 4 * kappa) * beta + 2 * kappa * (2 * kappa + 1)
    return lead * beta**2 + 2 * w2 * (5 - 4 * kappa) * beta + (4 * kappa - 6) * (kappa - 1)


def ground_state_sum_rule(p: Potential, kappa: int, sector: Sector, beta: float) -> float:
    """beta^2 g/2 - (b+1)(kappa + b + 2nu + beta omega a^2 + 1/2), i.e. -r0 at n=0."""
    return -r0_model(p, StateLabel(0, kappa, sector), beta)


def first_excited_t1(p: Potential, kappa: int, nu: float, beta: float) -> tuple[float, float]:
    """Both roots of (2b+kappa+2nu+w+5/2) t - t^2 - 2w(b+1) = 0, w = beta omega a^2.

    Returned as (minus branch, plus branch).
    """
    b = exponent_b(beta, p.g)
    w = beta * p.omega * p.a**2
    A = 2 * b + kappa + 2 * nu + w + 2.5
    disc = A * A - 8 * w * (b + 1)
    if disc < 0:
        raise ComplexRoot(f"discriminant {disc:.6g} < 0")
    s = math.sqrt(disc)
    return (A - s) / 2, (A + s) / 2


def printed_t1_discriminant(p: Potential, kappa: int, nu: float, beta: float) -> float:
    """The radicand as typeset in the source for the n=1 root.

    Kept for comparison only: its term linear in beta omega a^2 does not match
    the discriminant of the quadratic it is meant to solve.
    """
    b = exponent_b(beta, p.g)
    w = beta * p.omega * p.a**2
    return (2 * (b + nu) * (2 * b + 2 * nu + 2 * kappa + 5)
            - w * (4 * b + 8 * kappa + 16 * nu - w + 3) + (kappa + 2.5) ** 2)


def first_excited_constraint(p: Potential, kappa: int, sector: Sector, beta: float) -> float:
    """The printed degree-6 condition on beta for n = 1, term for term.

    The odd-sector ``2 beta^4`` term is read as ``2 beta_1^4``.  Compare with
    :func:`first_excited_constraint_derived`, which differs by a few terms.
    """
    sector = Sector(sector)
    StateLabel(1, kappa, sector)
    B, g, k = beta, p.g, kappa
    w = p.omega * p.a**2
    common = g * B**6 * (16 * w**4 + g**2 - 8 * g * w**2)
    if sector is Sector.EVEN:
        return (common
                + 16 * g * w * B**5 * (4 * w**2 - g) * (k + 1)
                + B**4 * (4 * w**2 * g * (24 * k**2 + 48 * k + 11 - 8 * w**2)
                          - 2 * g**2 * (4 * k**2 + 8 * k - 9))
                + B**3 * (4 * g * w * (16 * k**3 + 48 * k**2 - 38 * k - 9) - 16 * w**3 * (8 * k + 11))
                + B**2 * (2 * g * (8 * k**4 + 32 * k**3 + 54 * k**2 + 26 * k + 3)
                          - 24 * w**2 * (8 * k**2 + 18 * k + 11))
                - 4 * w * B * (32 * k**3 + 84 * k**2 + 64 * k + 15)
                - 4 * k * (8 * k**3 + 20 * k**2 + 16 * k + 3))
    return (common
            + 16 * g * w * B**5 * (-4 * k * w**2 + 8 * w**2 + k * g - 2 * g)
            + 2 * B**4 * (g**2 * (4 * k**2 + 16 * k - 21) + 2 * g * w**2 * (24 * k**2 - 96 * k + 83)
                          - 16 * w**4)
            + B**3 * (4 * g * w * (-16 * k**3 + 96 * k**2 - 182 * k + 93) - 16 * w**3 * (8 * k + 19))
            + B**2 * (4 * g * (4 * k**4 - 32 * k**3 + 99 * k**2 - 131 * k + 66)
                      + 8 * w**2 * (-24 * k**2 + 102 * k - 111))
            + 4 * w * B * (32 * k**3 - 180 * k**2 + 328 * k - 195)
            + 4 * (-8 * k**4 + 52 * k**3 - 122 * k**2 + 123 * k - 45))


def _n1_branch_value(p: Potential, label: StateLabel, beta, root_sign: float):
    # t1 from the sum rule, substituted into the n=1 Bethe equation, with b on
    # the branch b = (-1 - root_sign * sqrt(1 + 4 g beta^2)) / 2; accepts
    # complex beta so the sextic can be sampled off the real axis
    s = root_sign * np.sqrt(1 + 4 * p.g * beta**2 + 0j)
    b = (-1 - s) / 2
    w = beta * p.omega * p.a**2
    k, nu = label.kappa, label.nu
    t1 = 2.5 + 2 * b + 2 * nu + k + w - beta**2 * p.g / 2 + (b + 1) * (k + b + 2 * nu + w + 0.5)
    A = 2 * b + k + 2 * nu + w + 2.5
    return -t1 * t1 + A * t1 - 2 * w * (b + 1)


def first_excited_constraint_derived(p: Potential, kappa: int, sector: Sector, beta: float) -> float:
    """Degree-6 condition for n = 1 obtained by eliminating the square root.

    With h(s) the n=1 Bethe equation after inserting t1 from the sum rule, as a
    function of s = +-sqrt(1 + 4 g beta^2), the product h(+s) h(-s) is a
    polynomial in beta; scaled by 16/(g beta^2) its leading term matches the
    printed one.
    """
    label = StateLabel(1, kappa, sector)
    if beta == 0 or p.g == 0:
        raise ValueError("needs beta != 0 and g != 0")
    prod = _n1_branch_value(p, label, beta, 1.0) * _n1_branch_value(p, label, beta, -1.0)
    value = 16 * prod / (p.g * beta**2)
    return float(value.real) if np.isrealobj(beta) else value


def sextic_coefficients(p: Potential, kappa: int, sector: Sector, printed: bool = True) -> np.ndarray:
    """Ascending coefficients c_0..c_6 of the n=1 sextic in beta.

    Sampled on the unit circle and recovered with an FFT (exact up to
    rounding for a polynomial of degree < 8).
    """
    z = np.exp(2j * np.pi * np.arange(8) / 8)
    if printed:
        vals = [first_excited_constraint(p, kappa, sector, zi) for zi in z]
    else:
        vals = [first_excited_constraint_derived(p, kappa, sector, zi) for zi in z]
    return (np.fft.fft(np.array(vals, dtype=complex)).real / 8)[:7]


def sextic_relative_residual(p: Potential, kappa: int, sector: Sector, beta: float,
                             printed: bool = True) -> float:
    """|sextic(beta)| divided by sum_k |c_k| |beta|^k."""
    c = sextic_coefficients(p, kappa, sector, printed)
    scale = float(np.sum(np.abs(c) * abs(beta) ** np.arange(7)))
    f = first_excited_constraint if printed else first_excited_constraint_derived
    return abs(f(p, kappa, sector, beta)) / scale


# -- state mode ------------------------------------------------------------------

@dataclass(frozen=True)
class StateConfig:
    """Search settings for :func:`solve_state`."""

    beta_min: float = 1e-4
    beta_max: float = 100.0
    samples: int = 4000
    newton_tol: float = 1e-12
    accept_tol: float = 1e-9
    solver: SolverConfig = SolverConfig()


def _spectral_mismatch(p: Potential, label: StateLabel, beta: float) -> float:
    # det(H + r0 I) with the geometric-mean magnitude, continuous in beta
    c = qes_coefficients(p, beta, label)
    n = label.n
    r0 = r0_model(p, label, beta)
    if n == 0:
        return r0
    H = sl2.hamiltonian_direct(c, float(n), n) + r0 * np.eye(n + 1)
    sign, logabs = np.linalg.slogdet(H)
    return float(sign * math.exp(logabs / (n + 1))) if sign != 0 else 0.0


def _roots_from_eigenvector(p: Potential, label: StateLabel, beta: float):
    c = qes_coefficients(p, beta, label)
    n = label.n
    H = sl2.hamiltonian_direct(c, float(n), n)
    target = -r0_model(p, label, beta)
    vals, vecs = np.linalg.eig(H)
    k = int(np.argmin(np.abs(vals - target)))
    v = np.real_if_close(vecs[:, k], tol=1e6)
    if np.iscomplexobj(v):
        return None
    v = v / v[-1]
    roots = np.polynomial.polynomial.polyroots(v)
    if np.max(np.abs(np.imag(roots))) > 1e-6 * (1 + np.max(np.abs(roots))):
        return None
    return np.sort(np.real(roots))


def _coupled_residual(p, label, x):
    beta, t = x[0], x[1:]
    c = qes_coefficients(p, beta, label)
    F, J = _residual_and_jacobian(c, t)
    sum_rule = r0_from_roots(c, label.n, list(t)) - r0_model(p, label, beta)
    return np.append(F, sum_rule), J


def _coupled_newton(p, label, beta, roots, cfg: StateConfig):
    x = np.append(beta, roots)
    n = label.n
    F, _ = _coupled_residual(p, label, x)
    norm = np.max(np.abs(F))
    for _ in range(60):
        if norm < cfg.newton_tol:
            break
        Ft, Jt = _coupled_residual(p, label, x)
        jac = np.zeros((n + 1, n + 1))
        jac[:n, 1:] = Jt
        jac[n, 1:] = 1.0  # d(sum rule)/dt_i = -q2 = 1
        h = 1e-7 * max(1.0, abs(x[0]))
        xp, xm = x.copy(), x.copy()
        xp[0] += h
        xm[0] -= h
        jac[:, 0] = (_coupled_residual(p, label, xp)[0] - _coupled_residual(p, label, xm)[0]) / (2 * h)
        try:
            step = np.linalg.solve(jac, -Ft)
        except np.linalg.LinAlgError:
            return None, norm
        lam = 1.0
        while lam > 1e-4:
            trial = x + lam * step
            try:
                Fn, _ = _coupled_residual(p, label, trial)
                nn = np.max(np.abs(Fn))
            except Exception:  # complex b or collision while line searching
                nn = math.inf
            if nn < norm:
                break
            lam *= 0.5
        else:
            break
        x, norm = trial, nn
    return x, norm


def solve_state(pot: Potential, label: StateLabel, config: StateConfig = StateConfig(),
                mu: float = 1.0) -> list[tuple[SpectralPoint, BetheSolution]]:
    """Solve the QES constraint system for (beta, t_1..t_n).

    Candidate beta values are where -r0(beta) crosses an eigenvalue of the
    (n+1)x(n+1) matrix of the QES operator; each is polished by Newton on the
    n Bethe equations plus the sum rule.  Solutions whose polynomial part has
    complex roots are discarded.  2 mu + C_ps follows from the energy
    equation; ``mu`` only fixes the reported energy.

    Raises:
        NoRealState: no positive beta with real Bethe roots exists.
    """
    pot = Potential(pot.omega, pot.a, pot.g)
    n = label.n
    if pot.g == 0 and n == 0:
        raise ValueError("for g = 0 the n = 0 sum rule holds for every beta")
    hi = config.beta_max
    if pot.g < 0:
        hi = min(hi, (1 - 1e-12) / (2 * math.sqrt(-pot.g)))
    grid = np.geomspace(config.beta_min, hi, config.samples)
    vals = np.array([_spectral_mismatch(pot, label, x) for x in grid])
    betas = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            betas.append(grid[i])
        elif vals[i] * vals[i + 1] < 0:
            betas.append(brentq(lambda x: _spectral_mismatch(pot, label, x), grid[i], grid[i + 1],
                                xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))
    out = []
    for beta in betas:
        roots = np.array([]) if n == 0 else _roots_from_eigenvector(pot, label, beta)
        if roots is None:
            continue
        if n > 0:
            x, res = _coupled_newton(pot, label, beta, roots, config)
            if x is None or res > config.accept_tol:
                continue
            beta, roots = float(x[0]), np.sort(x[1:])
        c = qes_coefficients(pot, beta, label)
        try:
            sol = _package(c, n, roots, config.solver)
        except Exception:
            continue
        b = exponent_b(beta, pot.g)
        s = two_mu_plus_cps_from_beta(pot, label, beta)
        point = SpectralPoint(beta=beta, b=b, energy=s - mu + beta**2, two_mu_plus_cps=s)
        out.append((point, sol))
    if not out:
        info = {"n": n, "kappa": label.kappa, "sector": label.sector.value,
                "beta_range": [config.beta_min, hi]}
        if n == 0:
            w2 = pot.omega * pot.a**2
            lead = 4 * w2**2 - pot.g
            info["quadratic_leading_coefficient"] = lead
            info["constraint_at_beta_min"] = ground_state_constraint(pot, label.kappa, label.sector, config.beta_min)
            info["constraint_at_beta_max"] = ground_state_constraint(pot, label.kappa, label.sector, hi)
            msg = "no positive beta satisfies the n=0 constraint"
            if abs(lead) <= 1e-12 * (4 * w2**2 + abs(pot.g)):
                msg += " (leading coefficient 4 omega^2 a^4 - g vanishes; the quadratic is linear with a negative root)"
        else:
            msg = f"no positive beta with real Bethe roots for n={n}"
        raise NoRealState(msg, info)
    return out
