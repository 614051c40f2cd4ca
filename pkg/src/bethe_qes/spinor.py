"""Radial spinor components built from a solved QES state."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import quad

from .bethe import BetheSolution
from .errors import NonNormalizable, UnsupportedDegree
from .gio import GioParameters, Potential, Sector, SpectralPoint, StateLabel
from .polynomial import Polynomial


@dataclass(frozen=True)
class SpinorState:
    """A solved state together with the overall constant of its spinor.

    ``phi`` is monic in t = beta omega (r^2 + a^2) and ``normalization`` is
    the constant N multiplying both components.
    """

    params: GioParameters
    label: StateLabel
    point: SpectralPoint
    phi: Polynomial = field(default_factory=lambda: Polynomial((1.0,)))
    normalization: float = 1.0

    def __post_init__(self):
        if not self.normalization > 0:
            raise ValueError("normalization must be positive")
        if self.phi.degree != self.label.n:
            raise ValueError(f"phi has degree {self.phi.degree}, label says n={self.label.n}")

    @property
    def beta_omega(self) -> float:
        return self.point.beta * self.params.omega

    @property
    def t_min(self) -> float:
        """Image of r = 0 in the t variable, beta omega a^2."""
        return self.beta_omega * self.params.a**2

    def scaled(self, factor: float) -> "SpinorState":
        return replace(self, normalization=self.normalization * factor)


def make_state(pot: Potential, label: StateLabel, point: SpectralPoint,
               solution: BetheSolution | None = None, mu: float = 1.0) -> SpinorState:
    """Bundle a solve_state result into a :class:`SpinorState` for a chosen mu."""
    params = GioParameters(omega=pot.omega, a=pot.a, g=pot.g, mu=mu,
                           c_ps=point.two_mu_plus_cps - 2 * mu)
    roots = solution.roots if solution is not None else ()
    return SpinorState(params, label, point, Polynomial.from_roots(roots))


class LowerComponent:
    """G(r) = N r^k (r^2+a^2)^(b+1) exp(-beta omega r^2/2) phi(beta omega (r^2+a^2))
    with analytic first and second derivatives."""

    def __init__(self, state: SpinorState):
        self.state = state
        self.k = state.label.power
        self.a2 = state.params.a**2
        self.b1 = state.point.b + 1
        self.bw = state.beta_omega
        self.phi = state.phi
        self.dphi = state.phi.deriv(1)
        self.ddphi = state.phi.deriv(2)
        self.N = state.normalization

    def _parts(self, r):
        r = np.asarray(r, dtype=float)
        u = r * r + self.a2
        env = self.N * np.exp(self.k * np.log(r) + self.b1 * np.log(u) - 0.5 * self.bw * r * r)
        t = self.bw * u
        return r, u, env, t

    def __call__(self, r):
        r, u, env, t = self._parts(r)
        return env * self.phi(t)

    def derivative(self, r, order: int = 1):
        r, u, env, t = self._parts(r)
        L1 = self.k / r + 2 * self.b1 * r / u - self.bw * r
        ph = self.phi(t)
        dt = 2 * self.bw * r
        ph_r = self.dphi(t) * dt
        if order == 1:
            return env * (L1 * ph + ph_r)
        if order == 2:
            L2 = -self.k / r**2 + 2 * self.b1 * (self.a2 - r * r) / u**2 - self.bw
            ph_rr = self.ddphi(t) * dt * dt + self.dphi(t) * 2 * self.bw
            return env * ((L2 + L1 * L1) * ph + 2 * L1 * ph_r + ph_rr)
        raise ValueError("order must be 1 or 2")


class UpperComponent:
    """F(r) = -(G'(r) - kappa G(r)/r) / beta^2, from the second first-order
    equation with mu - E + C_ps = -beta^2."""

    def __init__(self, lower: LowerComponent):
        self.G = lower
        self.kappa = lower.state.label.kappa
        self.beta2 = lower.state.point.beta ** 2
        if self.beta2 == 0:
            raise ValueError("beta must be nonzero")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return -(self.G.derivative(r, 1) - self.kappa * self.G(r) / r) / self.beta2

    def derivative(self, r, order: int = 1):
        if order != 1:
            raise ValueError("only the first derivative is available")
        r = np.asarray(r, dtype=float)
        G, G1, G2 = self.G(r), self.G.derivative(r, 1), self.G.derivative(r, 2)
        return -(G2 - self.kappa * G1 / r + self.kappa * G / r**2) / self.beta2


def build_lower(state: SpinorState) -> LowerComponent:
    return LowerComponent(state)


def derive_upper(state: SpinorState) -> UpperComponent:
    return UpperComponent(LowerComponent(state))


def closed_form_spinors(state: SpinorState):
    """The printed n = 0 and n = 1 spinors ``(F, G)``, unnormalized and verbatim.

    For n = 1 the root t1 is the single root of ``state.phi``.  The printed
    n = 1 expressions agree with :func:`build_lower` / :func:`derive_upper`
    only when beta omega = 1 (even sector); see the tests for details.
    """
    n = state.label.n
    if n not in (0, 1):
        raise UnsupportedDegree(f"closed forms exist for n in {{0, 1}}, got {n}")
    kap = state.label.kappa
    a2 = state.params.a**2
    b = state.point.b
    beta = state.point.beta
    bw = state.beta_omega
    t1 = state.phi.roots()[0].real if n == 1 else 0.0
    odd = state.label.sector is Sector.ODD

    def pref(r):
        r = np.asarray(r, dtype=float)
        return r ** (-kap if odd else kap) * (r * r + a2) ** b * np.exp(-0.5 * bw * r * r)

    if n == 0 and not odd:
        def F(r):
            return pref(r) * (bw * r**3 - (2 * b - bw * a2 + 2) * r) / beta**2

        def G(r):
            return pref(r) * (r * r + a2)
    elif n == 0:
        def F(r):
            return pref(r) * (bw * r**4 - (2 * b - 2 * kap - bw * a2 + 3) * r**2 + (2 * kap - 1) * a2) / beta**2

        def G(r):
            return pref(r) * r * (r * r + a2)
    elif not odd:
        def F(r):
            poly = (bw * r**5 - bw * (2 * b - 2 * bw * a2 + t1 + 4) * r**3
                    - (bw * a2 * (2 * b - bw * a2 + t1 + 4) - 2 * t1 * (b + 1)) * r)
            return pref(r) * poly / beta**2

        def G(r):
            u = r * r + a2
            return pref(r) * u * (u - t1)
    else:
        def F(r):
            u = r * r + a2
            poly = (u * (bw**2 * r**4 + bw * (bw * a2 + kap - t1 - 2) * r**2 + kap * (bw * a2 - t1))
                    - 2 * r * (b + 1))
            return pref(r) * poly / beta**2

        def G(r):
            u = r * r + a2
            return pref(r) * r * u * (u - t1)
    return F, G


def default_grid(state: SpinorState, points: int = 2048) -> np.ndarray:
    """Log-spaced near the origin, linear further out, over
    [1e-3, 20] * max(1, 1/sqrt(beta omega))."""
    s = max(1.0, 1.0 / np.sqrt(state.beta_omega))
    half = points // 2
    inner = np.geomspace(1e-3 * s, s, half, endpoint=False)
    outer = np.linspace(s, 20 * s, points - half)
    return np.concatenate([inner, outer])


def count_nodes(f, grid) -> int:
    """Sign changes of f on the grid, ignoring values below 1e-300."""
    v = np.asarray(f(grid))
    v = v[np.abs(v) > 1e-300]
    return int(np.sum(np.signbit(v[1:]) != np.signbit(v[:-1])))


def expected_nodes(state: SpinorState) -> int:
    """Roots of phi inside the image (beta omega a^2, inf) of r > 0."""
    return int(sum(1 for t in state.phi.roots() if abs(t.imag) < 1e-12 and t.real > state.t_min))


def norm_integral(state: SpinorState, r_max: float | None = None) -> tuple[float, float]:
    """(integral of F^2 + G^2 over (0, r_max), quadrature error estimate)."""
    if r_max is None:
        r_max = 20 * max(1.0, 1.0 / np.sqrt(state.beta_omega))
    G = build_lower(state)
    F = UpperComponent(G)

    def density(r):
        return float(F(r) ** 2 + G(r) ** 2)

    # break points around the Gaussian scale help the adaptive rule
    scale = 1.0 / np.sqrt(state.beta_omega)
    cuts = [x for x in (0.25 * scale, scale, 2 * scale, 4 * scale, 8 * scale) if x < r_max]
    edges = [0.0] + cuts + [r_max]
    total, err = 0.0, 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, e = quad(density, lo, hi, epsabs=0.0, epsrel=1e-13, limit=400)
        total += val
        err += e
    return total, err


def normalize(state: SpinorState, r_max: float | None = None) -> float:
    """Factor N such that scaling ``state`` by N gives unit norm of (F, G).

    Raises:
        NonNormalizable: the integral is not finite and positive, or the
            quadrature error exceeds 1e-9 relative.
    """
    if not state.point.beta > 0:
        raise NonNormalizable("beta must be positive")
    total, err = norm_integral(state, r_max)
    if not np.isfinite(total) or total <= 0:
        raise NonNormalizable(f"norm integral = {total}")
    if err > 1e-9 * total:
        raise NonNormalizable(f"quadrature error {err:.2e} too large for integral {total:.6e}")
    return float(1.0 / np.sqrt(total))
