"""sl(2) generators acting on polynomials of degree <= n.

Matrices act on coefficient vectors in the monomial basis (1, t, ..., t^n):
column j holds the image of t^j.  In this convention J- (degree lowering) is
strictly upper triangular and J+ strictly lower triangular.

Passing ``exact=True`` builds object arrays of :class:`fractions.Fraction`,
which makes the commutator and Casimir identities exact.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .bethe import QesCoefficients
from .errors import SubspaceLeak

LEAK_TOL = 1e-12


def _zeros(dim, exact):
    if exact:
        m = np.empty((dim, dim), dtype=object)
        m[...] = Fraction(0)
        return m
    return np.zeros((dim, dim))


def identity(n: int, exact: bool = False):
    m = _zeros(n + 1, exact)
    for j in range(n + 1):
        m[j, j] = Fraction(1) if exact else 1.0
    return m


def generators(n: int, exact: bool = False):
    """Return ``(J_minus, J_plus, J_zero)`` for the (n+1)-dimensional module.

    J- = d/dt, J+ = t^2 d/dt - n t, J0 = t d/dt - n/2.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    num = Fraction if exact else float
    jm, jp, j0 = _zeros(n + 1, exact), _zeros(n + 1, exact), _zeros(n + 1, exact)
    for j in range(n + 1):
        if j >= 1:
            jm[j - 1, j] = num(j)
        if j < n:
            jp[j + 1, j] = num(j - n)
        j0[j, j] = num(j) - num(n) / 2
    return jm, jp, j0


def commutator(a, b):
    return a @ b - b @ a


def casimir(n: int, exact: bool = False):
    """J0 J0 - (J+ J- + J- J+)/2; equals (n/2)(n/2 + 1) times the identity."""
    jm, jp, j0 = generators(n, exact)
    half = Fraction(1, 2) if exact else 0.5
    return j0 @ j0 - half * (jp @ jm + jm @ jp)


def hamiltonian_direct(c: QesCoefficients, r1: float, n: int, exact: bool = False):
    """Matrix of P(t) d^2 + Q(t) d + r1 t on polynomials of degree <= n.

    Raises:
        SubspaceLeak: the image of t^n has a t^(n+1) component n q2 + r1
            larger than ``LEAK_TOL`` in magnitude.
    """
    leak = n * c.q2 + r1
    if abs(leak) > LEAK_TOL:
        raise SubspaceLeak(f"degree-{n + 1} coefficient {leak:.3e} (need r1 = -n q2)")
    H = _zeros(n + 1, exact)
    cv = Fraction if exact else float
    p2, p1, p0 = cv(c.p2), cv(c.p1), cv(c.p0)
    q2, q1, q0 = cv(c.q2), cv(c.q1), cv(c.q0)
    r1 = cv(r1)
    for j in range(n + 1):
        # P t^j''
        if j >= 2:
            H[j, j] += p2 * j * (j - 1)
            H[j - 1, j] += p1 * j * (j - 1)
            H[j - 2, j] += p0 * j * (j - 1)
        # Q t^j'
        if j >= 1:
            H[j - 1, j] += q0 * j
            H[j, j] += q1 * j
        if j + 1 <= n:
            H[j + 1, j] += q2 * j + r1
    return H


def generator_weights(c: QesCoefficients, n: int, exact: bool = False) -> dict:
    """Coefficients of H = P d^2 + Q d - n q2 t in the enveloping algebra.

    For P = t^2 + p1 t (the case of the GIO equation) this reduces to
    J0J0 + p1 J0J- + q2 J+ + (q1 + n - 1) J0 + (q0 + n p1/2) J- + const.
    The p0 J-J- term and the p2 factors cover general P.
    """
    cv = Fraction if exact else float
    p2, p1, p0, q2, q1, q0 = (cv(x) for x in (c.p2, c.p1, c.p0, c.q2, c.q1, c.q0))
    half = cv(1) / 2
    j0 = q1 + p2 * (n - 1)
    return {
        "J0J0": p2,
        "J0J-": p1,
        "J-J-": p0,
        "J+": q2,
        "J0": j0,
        "J-": q0 + n * p1 * half,
        "1": n * half * j0 - p2 * n * n * half * half,
    }


def hamiltonian_from_generators(c: QesCoefficients, n: int, exact: bool = False):
    jm, jp, j0 = generators(n, exact)
    w = generator_weights(c, n, exact)
    return (w["J0J0"] * (j0 @ j0) + w["J0J-"] * (j0 @ jm) + w["J-J-"] * (jm @ jm)
            + w["J+"] * jp + w["J0"] * j0 + w["J-"] * jm + w["1"] * identity(n, exact))


def spectrum(c: QesCoefficients, n: int) -> np.ndarray:
    """Eigenvalues of the direct matrix; each real one is a value of -r0."""
    H = hamiltonian_direct(c, -n * c.q2, n)
    return np.linalg.eigvals(H.astype(float))
