"""Bethe-ansatz solver for the canonical QES equation

    [P(t) d^2/dt^2 + Q(t) d/dt + R(t)] S(t) = 0,

with deg P = deg Q = 2 and deg R = 1.  A monic degree-n polynomial solution
S(t) = prod(t - t_i) exists iff r1 = -n q2, r0 = -(q2 sum(t_i) + n(n-1) p2 + n q1)
and the roots t_i satisfy the Bethe ansatz equations

    sum_{j != i} 2 / (t_i - t_j) + Q(t_i) / P(t_i) = 0.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ComplexPair, DuplicateRoots, NoConvergence, SingularRoot
from .polynomial import Polynomial


@dataclass(frozen=True)
class QesCoefficients:
    """Coefficients of P(t) = p2 t^2 + p1 t + p0 and Q(t) = q2 t^2 + q1 t + q0."""

    p2: float
    p1: float
    p0: float
    q2: float
    q1: float
    q0: float

    def __post_init__(self):
        if self.p2 == 0 and self.p1 == 0:
            raise ValueError("P(t) must be at least linear (p2 or p1 nonzero)")

    @property
    def P(self) -> Polynomial:
        return Polynomial((self.p0, self.p1, self.p2))

    @property
    def Q(self) -> Polynomial:
        return Polynomial((self.q0, self.q1, self.q2))

    def p_zeros(self) -> np.ndarray:
        """Real zeros of P, ascending (complex ones are dropped)."""
        z = self.P.roots()
        return np.sort(z[np.abs(np.imag(z)) < 1e-14].real) if len(z) else z


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for :func:`solve_bethe_roots`.

    ``tol`` is the Newton target on max |residual|; a start is accepted when
    it ends below ``accept_tol``.
    """

    tol: float = 1e-12
    accept_tol: float = 1e-10
    max_iter: int = 60
    seed: int = 0
    random_starts: int = 16
    dedup_tol: float = 1e-7
    separation_floor: float = 1e-8
    exclusion_radius: float = 1e-10


@dataclass(frozen=True)
class BetheSolution:
    n: int
    roots: tuple[float, ...]
    r1: float
    r0: float
    bae_residuals: tuple[float, ...]
    ode_residual_norm: float
    polynomial: Polynomial = field(repr=False, compare=False, default=None)


def r1_condition(c: QesCoefficients, n: int) -> float:
    if n < 0:
        raise ValueError("n must be non-negative")
    return -n * c.q2


def r0_from_roots(c: QesCoefficients, n: int, roots: Sequence[float]) -> float:
    if len(roots) != n:
        raise ValueError(f"expected {n} roots, got {len(roots)}")
    if n == 0:
        return 0.0
    return -(c.q2 * math.fsum(roots) + n * (n - 1) * c.p2 + n * c.q1)


def check_roots(c: QesCoefficients, roots, cfg: SolverConfig = SolverConfig()) -> None:
    """Raise if roots collide with each other or with a zero of P."""
    t = np.asarray(roots, dtype=float)
    if t.size == 0:
        return
    P = c.P(t)
    bad = np.abs(P) < cfg.exclusion_radius * (1.0 + np.abs(t))
    if np.any(bad):
        raise SingularRoot(f"P(t) vanishes at root(s) {t[bad].tolist()}")
    if t.size > 1:
        st = np.sort(t)
        floor = cfg.separation_floor * (1.0 + np.max(np.abs(t)))
        if np.min(np.diff(st)) <= floor:
            raise DuplicateRoots(f"roots closer than {floor:.3g}")


def _residual_and_jacobian(c: QesCoefficients, t: np.ndarray):
    P = c.p2 * t**2 + c.p1 * t + c.p0
    dP = 2 * c.p2 * t + c.p1
    Q = c.q2 * t**2 + c.q1 * t + c.q0
    dQ = 2 * c.q2 * t + c.q1
    diff = t[:, None] - t[None, :]
    np.fill_diagonal(diff, np.inf)
    inv = 2.0 / diff
    F = inv.sum(axis=1) + Q / P
    J = 0.5 * inv**2  # d/dt_j of 2/(t_i - t_j) = 2/(t_i - t_j)^2
    np.fill_diagonal(J, 0.0)
    diag = -J.sum(axis=1) + (dQ * P - Q * dP) / P**2
    J[np.diag_indices_from(J)] = diag
    return F, J


def bae_residuals(c: QesCoefficients, roots: Sequence[float],
                  cfg: SolverConfig = SolverConfig()) -> list[float]:
    """Left-hand sides of the Bethe ansatz equations, one per root."""
    t = np.asarray(roots, dtype=float)
    if t.size == 0:
        return []
    check_roots(c, t, cfg)
    F, _ = _residual_and_jacobian(c, t)
    return F.tolist()


def ode_residual(c: QesCoefficients, r0: float, r1: float, s: Polynomial) -> float:
    """Relative max-norm of the coefficients of P S'' + Q S' + (r1 t + r0) S.

    The scale is the same expression built from absolute values of every
    factor, so the result measures cancellation error rather than magnitude.
    """
    R = Polynomial((r0, r1))
    d1, d2 = s.deriv(1), s.deriv(2)
    image = c.P * d2 + c.Q * d1 + R * s

    def absp(p):
        return Polynomial(tuple(abs(x) for x in p.coeffs))

    scale = absp(c.P) * absp(d2) + absp(c.Q) * absp(d1) + absp(R) * absp(s)
    if not scale.coeffs:
        return 0.0
    num = max((abs(x) for x in image.coeffs), default=0.0)
    return num / max(abs(x) for x in scale.coeffs)


def determinant_condition_n1(c: QesCoefficients) -> tuple[float, float]:
    """The two r0 values for which a degree-1 solution exists.

    Roots of det([[-r0, -q0], [-r1, -r0 - q1]]) with r1 = -q2.
    """
    if c.q2 == 0:
        raise ValueError("q2 must be nonzero")
    disc = c.q1**2 - 4 * c.q0 * c.q2
    if disc < 0:
        raise ComplexPair(f"discriminant {disc:.6g} < 0")
    s = math.sqrt(disc)
    return ((-c.q1 - s) / 2, (-c.q1 + s) / 2)


def newton_bae(c: QesCoefficients, start, cfg: SolverConfig = SolverConfig()):
    """Damped Newton on the Bethe ansatz equations from one start.

    Returns ``(roots, max_abs_residual, iterations)``; ``roots`` is ``None``
    when the iteration broke down (singular Jacobian, collision, blow-up).
    """
    t = np.array(start, dtype=float)
    n = t.size
    if n == 0:
        return t, 0.0, 0

    def valid(x):
        if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > 1e12:
            return False
        try:
            check_roots(c, x, cfg)
        except (SingularRoot, DuplicateRoots):
            return False
        return True

    if not valid(t):
        return None, math.inf, 0
    F, J = _residual_and_jacobian(c, t)
    norm = np.max(np.abs(F))
    for it in range(1, cfg.max_iter + 1):
        if norm < cfg.tol:
            return t, norm, it - 1
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return None, norm, it
        lam = 1.0
        while lam > 1e-6:
            trial = t + lam * step
            if valid(trial):
                Ft, Jt = _residual_and_jacobian(c, trial)
                nt = np.max(np.abs(Ft))
                if nt < (1 - 1e-4 * lam) * norm:
                    break
            lam *= 0.5
        else:
            return t, norm, it
        t, F, J, norm = trial, Ft, Jt, nt
    return t, norm, cfg.max_iter


def _scale(c: QesCoefficients) -> tuple[float, float]:
    """Rough centre and width of the region where roots live."""
    pts = [z.real for z in c.P.roots()] + [z.real for z in c.Q.roots()]
    pts = [p for p in pts if np.isfinite(p)]
    if not pts:
        return 0.0, 1.0
    lo, hi = min(pts), max(pts)
    return 0.5 * (lo + hi), max(hi - lo, 1.0, 0.5 * max(abs(lo), abs(hi)))


def _intervals(c: QesCoefficients) -> list[tuple[float, float]]:
    centre, width = _scale(c)
    z = list(c.p_zeros())
    edges = [centre - 4 * width] + z + [centre + 4 * width]
    edges = sorted(edges)
    out = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi - lo > 1e-9:
            out.append((lo, hi))
    return out


def _start_points(c: QesCoefficients, n: int, prev: list[np.ndarray],
                  rng: np.random.Generator, cfg: SolverConfig):
    intervals = _intervals(c)
    centre, width = _scale(c)
    # (i) perturbed uniform spacings, distributing roots over the intervals
    for counts in itertools.product(range(n + 1), repeat=len(intervals)):
        if sum(counts) != n:
            continue
        pts = []
        for (lo, hi), m in zip(intervals, counts):
            if m:
                u = (np.arange(1, m + 1) / (m + 1))
                pts.extend(lo + (hi - lo) * u)
        pts = np.array(pts)
        yield pts + 1e-3 * width * rng.standard_normal(n)
    # (ii) scaled Chebyshev points
    k = np.arange(n)
    cheb = np.cos((2 * k + 1) * np.pi / (2 * n))
    for span in (0.5, 1.0, 2.0, 4.0, 8.0):
        yield centre + span * width * cheb + 1e-3 * width * rng.standard_normal(n)
    # (iii) continuation: (n-1)-root solutions with one root appended
    for roots in prev:
        anchors = sorted(list(roots) + list(c.p_zeros())) or [centre]
        cand = [anchors[0] - width, anchors[-1] + width]
        cand += [0.5 * (x + y) for x, y in zip(anchors[:-1], anchors[1:])]
        # roots can sit close to a zero of P, inside a narrow basin
        cand += [z + s * d * width for z in c.p_zeros() for s in (-1, 1) for d in (1e-3, 1e-2, 1e-1)]
        # zeros of Q solve the one-root equation exactly
        cand += [z.real for z in c.Q.roots() if abs(z.imag) < 1e-12]
        for x in cand:
            yield np.append(roots, x) + 1e-6 * width * rng.standard_normal(n)
    for _ in range(cfg.random_starts):
        yield centre + 2 * width * rng.standard_normal(n)


def _dedup(found: list[np.ndarray], tol: float) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for r in found:
        if all(np.max(np.abs(r - o)) >= tol for o in out):
            out.append(r)
    return out


def _package(c: QesCoefficients, n: int, roots: np.ndarray, cfg: SolverConfig) -> BetheSolution:
    roots = np.sort(roots)
    r1 = r1_condition(c, n)
    r0 = r0_from_roots(c, n, list(roots))
    S = Polynomial.from_roots(roots)
    return BetheSolution(
        n=n,
        roots=tuple(roots.tolist()),
        r1=r1,
        r0=r0,
        bae_residuals=tuple(bae_residuals(c, roots, cfg)),
        ode_residual_norm=ode_residual(c, r0, r1, S),
        polynomial=S,
    )


def _solve_exact_n(c, n, prev, rng, cfg, diagnostics):
    found = []
    for start in _start_points(c, n, prev, rng, cfg):
        roots, res, its = newton_bae(c, start, cfg)
        diagnostics.append((tuple(np.round(start, 6)), its, res))
        if roots is not None and res <= cfg.accept_tol:
            found.append(np.sort(roots))
    return _dedup(found, cfg.dedup_tol)


def solve_bethe_roots(c: QesCoefficients, n: int,
                      config: SolverConfig = SolverConfig()) -> list[BetheSolution]:
    """All real-root solutions of the Bethe ansatz equations that multi-start
    Newton can find, sorted by the sum of the roots.

    The search is best effort for n >= 2: starts come from uniform placements
    over the intervals cut by the zeros of P, Chebyshev points, random draws,
    and continuation from the (n-1)-root solutions of the same equations.

    Raises:
        NoConvergence: no start converged (for n >= 1).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if c.q2 == 0:
        raise ValueError("q2 must be nonzero")
    if n == 0:
        return [_package(c, 0, np.array([]), config)]
    rng = np.random.default_rng(config.seed)
    prev: list[np.ndarray] = [np.array([])]
    diagnostics: list = []
    for k in range(1, n + 1):
        diagnostics = []
        prev = _solve_exact_n(c, k, prev, rng, config, diagnostics)
    if not prev:
        raise NoConvergence(f"no start converged for n={n}", diagnostics)
    sols = [_package(c, n, r, config) for r in prev]
    sols.sort(key=lambda s: math.fsum(s.roots))
    return sols
