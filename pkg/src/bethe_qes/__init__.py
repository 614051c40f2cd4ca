"""Bethe-ansatz solutions of quasi-exactly solvable ODEs, applied to the
pseudospin-symmetric Dirac equation with a generalized isotonic oscillator."""

from .bethe import (BetheSolution, QesCoefficients, SolverConfig, bae_residuals,
                    determinant_condition_n1, ode_residual, r0_from_roots,
                    r1_condition, solve_bethe_roots)
from .gio import (GioParameters, Potential, Sector, SpectralPoint, StateConfig,
                  StateLabel, beta_from_energy_eq, energy_from_beta, qes_coefficients,
                  solve_state)
from .polynomial import Polynomial

__all__ = [
    "BetheSolution", "GioParameters", "Polynomial", "Potential", "QesCoefficients",
    "Sector", "SolverConfig", "SpectralPoint", "StateConfig", "StateLabel",
    "bae_residuals", "beta_from_energy_eq", "determinant_condition_n1",
    "energy_from_beta", "ode_residual", "qes_coefficients", "r0_from_roots",
    "r1_condition", "solve_bethe_roots", "solve_state",
]
