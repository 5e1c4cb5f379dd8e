"""Reflecting-wall Riesz fractional diffusion on [0, 1]."""

from fradex._backend import BACKEND
from fradex.evolve import (
    SourceSpec,
    StepperConfig,
    Trajectory,
    boundary_flux,
    mass,
    solve_inhomogeneous_duhamel,
    step_homogeneous,
)
from fradex.operator import Grid, OperatorMatrix, RieszParams, assemble, eigenvalues

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Grid",
    "OperatorMatrix",
    "RieszParams",
    "SourceSpec",
    "StepperConfig",
    "Trajectory",
    "assemble",
    "boundary_flux",
    "eigenvalues",
    "mass",
    "solve_inhomogeneous_duhamel",
    "step_homogeneous",
]
