"""Independent numerical checks of the radial Dirac equations.

The residual functions take radial components exposing ``__call__(r)`` and
``derivative(r, order)``; the finite-difference eigensolver knows nothing
about the QES construction at all.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from .errors import NoEigenvalueInWindow
from .gio import GioParameters


class DegenerateResidualWarning(UserWarning):
    """The function under test vanishes identically on the grid."""


@dataclass(frozen=True)
class RadialGrid:
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.size < 128:
            raise ValueError("need at least 128 grid points")
        if pts[0] < 1e-6:
            raise ValueError("grid must start at r >= 1e-6")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("grid must be strictly increasing")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))

    @classmethod
    def uniform(cls, r_min: float, r_max: float, size: int = 2048) -> "RadialGrid":
        r = np.linspace(r_min, r_max, size)
        w = np.full(size, r[1] - r[0])
        w[0] = w[-1] = 0.5 * (r[1] - r[0])
        return cls(r, w)

    @classmethod
    def from_points(cls, r) -> "RadialGrid":
        r = np.asarray(r, dtype=float)
        w = np.zeros_like(r)
        d = np.diff(r)
        w[:-1] += 0.5 * d
        w[1:] += 0.5 * d
        return cls(r, w)


def _ratio(num: np.ndarray, den: np.ndarray) -> float:
    top, bottom = float(np.max(np.abs(num))), float(np.max(den))
    if bottom == 0.0:
        warnings.warn("residual of an identically zero function", DegenerateResidualWarning)
        return 0.0
    return top / bottom


def second_order_residual(G, p: GioParameters, E: float, kappa: int, grid: RadialGrid) -> float:
    """Relative sup-norm residual of
    G'' - kappa(kappa-1)/r^2 G - [mu + E - Delta][mu - E + C_ps] G = 0.

    Normalized by the largest pointwise sum of the magnitudes of the three
    terms, so the value is invariant under G -> c G.
    """
    r = grid.points
    g0, g2 = G(r), G.derivative(r, 2)
    cent = kappa * (kappa - 1) / r**2 * g0
    pot = (p.mu + E - p.delta(r)) * (p.mu - E + p.c_ps) * g0
    return _ratio(g2 - cent - pot, np.abs(g2) + np.abs(cent) + np.abs(pot))


def coupled_residual(F, G, p: GioParameters, E: float, kappa: int, grid: RadialGrid) -> tuple[float, float]:
    """Relative residuals of the first-order pair

        (d/dr + kappa/r) F = [mu + E - Delta] G
        (d/dr - kappa/r) G = [mu - E + C_ps] F
    """
    r = grid.points
    f0, f1 = F(r), F.derivative(r, 1)
    g0, g1 = G(r), G.derivative(r, 1)
    upper = (p.mu + E - p.delta(r)) * g0
    lower = (p.mu - E + p.c_ps) * f0
    res_a = _ratio(f1 + kappa * f0 / r - upper, np.abs(f1) + np.abs(kappa * f0 / r) + np.abs(upper))
    res_b = _ratio(g1 - kappa * g0 / r - lower, np.abs(g1) + np.abs(kappa * g0 / r) + np.abs(lower))
    return res_a, res_b


@dataclass(frozen=True)
class FdProblem:
    """Central-difference discretization of the lower-component equation on
    r_i = i h, i = 1..N, with G = 0 at r = 0 and r = R."""

    params: GioParameters
    kappa: int
    r: np.ndarray
    h: float

    def matrix(self, E: float):
        """Diagonal and off-diagonal of -D2 + kappa(kappa-1)/r^2 + (mu+E-Delta)(mu-E+C_ps)."""
        p = self.params
        diag = (2.0 / self.h**2 + self.kappa * (self.kappa - 1) / self.r**2
                + (p.mu + E - p.delta(self.r)) * (p.mu - E + p.c_ps))
        off = np.full(self.r.size - 1, -1.0 / self.h**2)
        return diag, off

    def eigenvalue(self, E: float, index: int) -> float:
        d, e = self.matrix(E)
        return float(eigh_tridiagonal(d, e, eigvals_only=True, select="i",
                                      select_range=(index, index))[0])

    def eigenvalues(self, E: float, count: int) -> np.ndarray:
        d, e = self.matrix(E)
        return eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=(0, count - 1))


def truncation_radius(params: GioParameters, E_low: float, tail: float = 1e-14) -> float:
    """R with exp(-beta omega R^2 / 2) < tail at the weakest decay in the window."""
    beta2 = E_low - params.mu - params.c_ps
    if beta2 <= 0:
        raise ValueError("window must lie above mu + C_ps (bound states need beta^2 > 0)")
    beta = math.sqrt(beta2)
    return math.sqrt(2 * math.log(1 / tail) / (beta * params.omega))


def fd_problem(params: GioParameters, kappa: int, r_max: float, points: int) -> FdProblem:
    h = r_max / (points + 1)
    return FdProblem(params, kappa, h * np.arange(1, points + 1), h)


def fd_eigensolve(params: GioParameters, kappa: int, window: tuple[float, float],
                  points: int = 16000, r_max: float | None = None,
                  max_index: int = 6, samples: int = 48) -> list[float]:
    """Energies E in ``window`` for which the discretized lower-component
    operator is singular.

    E enters the equation both linearly and through a product, so this is a
    nonlinear eigenproblem.  For each index k < ``max_index`` the k-th
    eigenvalue lambda_k(E) of the symmetric tridiagonal matrix is followed
    across the window (index tracking keeps the branch continuous) and its
    sign changes are refined with Brent's method.

    Raises:
        NoEigenvalueInWindow: no lambda_k changes sign in the window.
    """
    lo, hi = window
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError("window must be a finite interval")
    if r_max is None:
        r_max = truncation_radius(params, lo)
    prob = fd_problem(params, kappa, r_max, points)
    Es = np.linspace(lo, hi, samples)
    table = np.array([prob.eigenvalues(E, max_index) for E in Es])
    found = []
    for k in range(max_index):
        col = table[:, k]
        for i in range(samples - 1):
            if col[i] == 0.0:
                found.append(Es[i])
            elif col[i] * col[i + 1] < 0:
                found.append(brentq(prob.eigenvalue, Es[i], Es[i + 1], args=(k,),
                                    xtol=1e-13, rtol=1e-14))
    if not found:
        raise NoEigenvalueInWindow(f"no eigenvalue in [{lo}, {hi}]")
    return sorted(found)
