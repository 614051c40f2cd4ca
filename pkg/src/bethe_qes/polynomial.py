"""Dense real polynomials in ascending coefficient order."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly


def _trim(coeffs: Iterable[float]) -> tuple[float, ...]:
    c = [float(x) for x in coeffs]
    while c and c[-1] == 0.0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial ``sum(coeffs[k] * t**k)``.

    Trailing zeros are stripped on construction, so the zero polynomial has an
    empty coefficient tuple and ``degree`` is ``None``.
    """

    coeffs: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def from_roots(cls, roots: Sequence[float]) -> "Polynomial":
        """Monic polynomial with the given roots; ``()`` gives the constant 1."""
        if len(roots) == 0:
            return cls((1.0,))
        return cls(tuple(npoly.polyfromroots(np.asarray(roots, dtype=float))))

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    def __call__(self, t):
        # Horner, works elementwise on arrays
        acc = np.zeros_like(np.asarray(t, dtype=float))
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc if np.ndim(acc) else float(acc)

    def deriv(self, m: int = 1) -> "Polynomial":
        if len(self.coeffs) <= m:
            return Polynomial()
        return Polynomial(tuple(npoly.polyder(self.coeffs, m)))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(tuple(npoly.polyadd(self.coeffs or (0.0,), other.coeffs or (0.0,))))

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if not self.coeffs or not other.coeffs:
                return Polynomial()
            return Polynomial(tuple(npoly.polymul(self.coeffs, other.coeffs)))
        return Polynomial(tuple(float(other) * c for c in self.coeffs))

    __rmul__ = __mul__

    def coefficient(self, k: int) -> float:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0.0

    def roots(self) -> np.ndarray:
        if self.degree is None or self.degree == 0:
            return np.array([])
        return npoly.polyroots(self.coeffs)
