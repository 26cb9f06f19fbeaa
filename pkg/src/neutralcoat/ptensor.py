"""Polarization tensor and exterior field of a solved core-shell system.

Sign convention: with M_{ll'} = sum of int x_{l'} phi^{(l)} ds over both curves
and u_l = x_l + S[phi^{(l)}], the exterior perturbation behaves like

    u_l(x) - x_l = -<M e_l, x> / (2 pi |x|^2) + O(|x|^-2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import TWO_PI
from .kernels import KernelPair
from .nystrom import Densities, Material, assemble, nodes, solve_densities


@dataclass(frozen=True)
class PolarizationTensor:
    m11: float
    m12: float
    m21: float
    m22: float
    n: int = 0

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def residual_vector(self) -> np.ndarray:
        """(m11, m22, m12), the ordering used by the coating Jacobian."""
        return np.array([self.m11, self.m22, self.m12])

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.matrix))

    def symmetry_defect(self) -> float:
        return abs(self.m12 - self.m21) / max(1.0, abs(self.m11), abs(self.m22))

    def to_dict(self) -> dict:
        return {"m11": self.m11, "m12": self.m12, "m21": self.m21, "m22": self.m22, "N": self.n}


def tensor_from_densities(pair: KernelPair, dens: Densities) -> PolarizationTensor:
    t = nodes(dens.n)
    w = TWO_PI / dens.n
    ri = pair.inner.radius(t)
    re = pair.outer.radius(t)
    psi = (np.cos(t), np.sin(t))
    m = np.empty((2, 2))
    for l in (1, 2):
        p = ri * dens.f1(l), re * dens.f2(l)
        for lp in (1, 2):
            m[l - 1, lp - 1] = w * np.sum(psi[lp - 1] * (p[0] + p[1]))
    return PolarizationTensor(m[0, 0], m[0, 1], m[1, 0], m[1, 1], dens.n)


def solve(pair: KernelPair, material: Material, n: int = 256, deflate: bool = False):
    """Assemble, solve, and return (tensor, densities)."""
    dens = solve_densities(assemble(pair, material, n, deflate))
    return tensor_from_densities(pair, dens), dens


def polarization_tensor(pair: KernelPair, material: Material, n: int = 256,
                        deflate: bool = False) -> PolarizationTensor:
    return solve(pair, material, n, deflate)[0]


def far_field_perturbation(pair: KernelPair, dens: Densities, x, l: int):
    """u_l(x) - x_l at exterior points ``x`` (shape (..., 2)) by trapezoid single layers."""
    x = np.asarray(x, dtype=float)
    if l not in (1, 2):
        raise ValueError("field direction l must be 1 or 2")
    rmax = pair.outer.max_radius()
    dist = np.linalg.norm(x, axis=-1) - rmax
    if np.any(dist < 0.5 * pair.outer.r0):
        raise ValueError("evaluation points must lie at least 0.5 r_e outside the shell")
    t = nodes(dens.n)
    w = TWO_PI / dens.n
    out = np.zeros(x.shape[:-1])
    for ycurve, f in ((pair.inner, dens.f1(l)), (pair.outer, dens.f2(l))):
        y = ycurve.point(t)
        r = np.linalg.norm(x[..., None, :] - y, axis=-1)
        out = out + (w / TWO_PI) * np.sum(np.log(r) * f, axis=-1)
    return out


def ring(radius: float, count: int) -> np.ndarray:
    phi = np.arange(count) * (TWO_PI / count)
    return radius * np.stack((np.cos(phi), np.sin(phi)), axis=-1)


def dipole_fit(pair: KernelPair, dens: Densities, radius: float | None = None,
               count: int = 32) -> np.ndarray:
    """Least-squares M from far-field samples on a ring (default radius 10 r_e)."""
    radius = 10.0 * pair.outer.r0 if radius is None else radius
    x = ring(radius, count)
    design = -x / (TWO_PI * np.sum(x * x, axis=-1, keepdims=True))
    fit = np.empty((2, 2))
    for l in (1, 2):
        vals = far_field_perturbation(pair, dens, x, l)
        fit[l - 1], *_ = np.linalg.lstsq(design, vals, rcond=None)
    return fit
