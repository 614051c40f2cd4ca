"""Exception hierarchy shared by all modules."""


class QesError(Exception):
    """Base class for every error raised by :mod:`bethe_qes`."""


class SingularRoot(QesError):
    """A Bethe root sits on (or too close to) a zero of P(t)."""


class DuplicateRoots(QesError):
    """Two Bethe roots are closer than the separation floor."""


class NoConvergence(QesError):
    """No Newton start converged.

    ``diagnostics`` holds one ``(start, iterations, final_residual)`` tuple per
    attempted start point.
    """

    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


class ComplexPair(QesError):
    """The n=1 determinant condition has a negative discriminant."""


class ComplexExponent(QesError):
    """1 + 4 beta^2 g < 0, so the exponent b is complex."""


class ComplexRoot(QesError):
    """The quadratic for the first-excited Bethe root has no real solution."""


class NoPositiveRoot(QesError):
    """The energy equation has no positive root beta."""


class NoRealState(QesError):
    """The QES constraint system has no positive-beta solution.

    ``constraint_values`` maps a short label to the values that were inspected,
    so callers (the CLI in particular) can report why.
    """

    def __init__(self, message, constraint_values=None):
        super().__init__(message)
        self.constraint_values = dict(constraint_values or {})


class UnsupportedDegree(QesError):
    """Closed forms exist only for n in {0, 1}."""


class NonNormalizable(QesError):
    """The spinor norm integral diverges or is not finite."""


class SubspaceLeak(QesError):
    """The operator does not preserve the degree-n polynomial space."""


class NoEigenvalueInWindow(QesError):
    """The finite-difference oracle found no eigenvalue in the energy window."""


class InvalidLabel(QesError, ValueError):
    """Sector and kappa sign are inconsistent, or kappa == 0."""
