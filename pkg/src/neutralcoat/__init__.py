"""Polarization tensors of perturbed core-shell inclusions and shells that cancel them."""

from .coater import CoatOptions, CoatResult, find_core, find_shell
from .geometry import GeometryError, Perturbation, ShellParams, StarBoundary
from .kernels import KernelPair
from .nystrom import Material, SolverError
from .oracles import NeutralConfig, NoNeutralPair
from .ptensor import PolarizationTensor, polarization_tensor

__all__ = [
    "CoatOptions", "CoatResult", "find_core", "find_shell",
    "GeometryError", "Perturbation", "ShellParams", "StarBoundary",
    "KernelPair", "Material", "SolverError", "NeutralConfig", "NoNeutralPair",
    "PolarizationTensor", "polarization_tensor",
]
