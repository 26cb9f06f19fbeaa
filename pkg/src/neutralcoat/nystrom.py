"""Trapezoid-rule Nystrom discretization of the core-shell transmission system."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .geometry import TWO_PI
from .kernels import KernelPair, kernel_A, kernel_B, kernel_C, kernel_D

MIN_NODES = 16
MAX_NODES = 4096
COND_LIMIT = 1e12


class SolverError(RuntimeError):
    """The discrete system is singular or too ill-conditioned to trust."""


@dataclass(frozen=True)
class Material:
    sigma_c: float
    sigma_s: float
    sigma_m: float

    def __post_init__(self):
        sig = (self.sigma_c, self.sigma_s, self.sigma_m)
        if not all(np.isfinite(s) and s > 0 for s in sig):
            raise ValueError(f"conductivities must be positive, got {sig}")
        if self.sigma_c == self.sigma_s or self.sigma_s == self.sigma_m:
            raise ValueError("need sigma_c != sigma_s and sigma_s != sigma_m")

    @property
    def lam(self) -> float:
        return (self.sigma_c + self.sigma_s) / (2.0 * (self.sigma_c - self.sigma_s))

    @property
    def mu(self) -> float:
        return (self.sigma_s + self.sigma_m) / (2.0 * (self.sigma_s - self.sigma_m))

    def scaled(self, c: float) -> Material:
        return Material(c * self.sigma_c, c * self.sigma_s, c * self.sigma_m)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.sigma_c, self.sigma_s, self.sigma_m)


def nodes(n: int) -> np.ndarray:
    return np.arange(n) * (TWO_PI / n)


def _check_n(n: int) -> int:
    if int(n) != n or n % 2 or not MIN_NODES <= n <= MAX_NODES:
        raise ValueError(f"node count must be even and in [{MIN_NODES}, {MAX_NODES}], got {n}")
    return int(n)


@dataclass(frozen=True)
class DiscreteSystem:
    pair: KernelPair
    material: Material
    n: int
    nodes: np.ndarray
    matrix: np.ndarray  # (2n, 2n)
    rhs: np.ndarray  # (2, 2n), one row per field direction
    deflated: bool = False


def operator_blocks(pair: KernelPair, n: int) -> tuple[np.ndarray, ...]:
    """Weighted quadrature blocks (A, C, D, B), without the contrast shifts."""
    t = nodes(n)
    E, T = np.meshgrid(t, t, indexing="ij")
    w = TWO_PI / n
    return (
        w * kernel_A(pair.inner, E, T),
        w * kernel_C(pair, E, T),
        w * kernel_D(pair, E, T),
        w * kernel_B(pair.outer, E, T),
    )


def assemble_matrix(pair: KernelPair, material: Material, n: int, deflate: bool = False) -> np.ndarray:
    A, C, D, B = operator_blocks(pair, n)
    eye = np.eye(n)
    if deflate:
        # rank-one mean term; leaves zero-mean solutions unchanged
        A = A + 1.0 / n
        B = B + 1.0 / n
    return np.block([[A - material.lam * eye, C], [D, B - material.mu * eye]])


def rhs(pair: KernelPair, l: int, n: int) -> np.ndarray:
    """Right-hand side -(nu_l J) sampled on both curves, stacked as a 2n-vector."""
    if l not in (1, 2):
        raise ValueError("field direction l must be 1 or 2")
    t = nodes(n)
    nuJ_i, _ = pair.inner.normal_jacobian(t)
    nuJ_e, _ = pair.outer.normal_jacobian(t)
    return -np.concatenate((nuJ_i[:, l - 1], nuJ_e[:, l - 1]))


def assemble(pair: KernelPair, material: Material, n: int = 256, deflate: bool = False) -> DiscreteSystem:
    n = _check_n(n)
    matrix = assemble_matrix(pair, material, n, deflate)
    if not np.all(np.isfinite(matrix)):
        raise SolverError("non-finite entries in the assembled matrix")
    g = np.stack((rhs(pair, 1, n), rhs(pair, 2, n)))
    return DiscreteSystem(pair, material, n, nodes(n), matrix, g, deflate)


@dataclass(frozen=True)
class Densities:
    """Jacobian-weighted densities f^(l) = (f1, f2) at the nodes, one row per l."""

    n: int
    values: np.ndarray  # (2, 2n)
    residual: float  # max_l |A f - g|_inf / |g|_inf
    cond: float  # 1-norm condition estimate

    def f1(self, l: int) -> np.ndarray:
        return self.values[l - 1, : self.n]

    def f2(self, l: int) -> np.ndarray:
        return self.values[l - 1, self.n :]

    def mean_defect(self) -> float:
        """Largest block mean relative to the density size."""
        worst = 0.0
        for l in (1, 2):
            scale = np.max(np.abs(self.values[l - 1])) or 1.0
            worst = max(worst, abs(self.f1(l).mean()) / scale, abs(self.f2(l).mean()) / scale)
        return worst


def solve_densities(system: DiscreteSystem) -> Densities:
    a = system.matrix
    lu, piv = sla.lu_factor(a, check_finite=False)
    if np.any(np.diag(lu) == 0.0):
        raise SolverError("matrix is exactly singular")
    anorm = np.linalg.norm(a, 1)
    rcond, info = sla.lapack.dgecon(lu, anorm, norm="1")
    cond = np.inf if rcond == 0 else 1.0 / rcond
    if info != 0 or cond > COND_LIMIT:
        raise SolverError(
            f"condition estimate {cond:.3g} exceeds {COND_LIMIT:.0e}; "
            "parameters are likely outside the perturbative regime"
        )
    f = sla.lu_solve((lu, piv), system.rhs.T, check_finite=False).T
    res = np.max(np.abs(f @ a.T - system.rhs), axis=1) / np.max(np.abs(system.rhs), axis=1)
    return Densities(system.n, f, float(np.max(res)), float(cond))
