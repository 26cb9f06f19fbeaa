"""Parametrized kernels of the two-curve Neumann-Poincare system.

All kernels share the form

    K(eta, theta) = <x(eta) - y(theta), nu(eta)> J(eta) / (2 pi |x(eta) - y(theta)|^2)

with x on the evaluation curve and y on the source curve; they are evaluated
elementwise on broadcast arrays of angles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import StarBoundary, check_admissible

FOUR_PI = 4.0 * np.pi


def _polar_kernel(target: StarBoundary, source: StarBoundary, eta, theta):
    # written in radii and sin^2(d/2) to avoid the 1 - cos(d) cancellation
    eta, theta = np.broadcast_arrays(np.asarray(eta, float), np.asarray(theta, float))
    r = target.radius(eta)
    dr = target.radius(eta, 1)
    q = source.radius(theta)
    d = eta - theta
    s2 = np.sin(0.5 * d) ** 2
    num = r * (r - q) + 2.0 * r * q * s2 - dr * q * np.sin(d)
    den = (r - q) ** 2 + 4.0 * r * q * s2
    return num, den, eta, s2


def _self_kernel(curve: StarBoundary, eta, theta):
    num, den, eta, s2 = _polar_kernel(curve, curve, eta, theta)
    diag = s2 < 1e-28
    out = np.empty(num.shape)
    off = ~diag
    out[off] = num[off] / (2.0 * np.pi * den[off])
    if np.any(diag):
        _, J = curve.normal_jacobian(eta[diag])
        out[diag] = curve.curvature(eta[diag]) * J / FOUR_PI
    return out


def kernel_A(inner: StarBoundary, eta, theta):
    """Self kernel of the core curve; the diagonal is its limit kappa J / (4 pi)."""
    return _self_kernel(inner, eta, theta)


def kernel_B(outer: StarBoundary, eta, theta):
    """Self kernel of the shell curve."""
    return _self_kernel(outer, eta, theta)


@dataclass(frozen=True)
class KernelPair:
    """Core curve nested strictly inside the shell curve."""

    inner: StarBoundary
    outer: StarBoundary

    def __post_init__(self):
        check_admissible(self.inner, self.outer)

    def min_separation_sq(self, n: int = 512) -> float:
        """min over the grid of |x_i(eta) - x_e(theta)|^2."""
        t = np.arange(n) * (2 * np.pi / n)
        xi = self.inner.point(t)
        xe = self.outer.point(t)
        diff = xi[:, None, :] - xe[None, :, :]
        return float(np.min(np.sum(diff * diff, axis=-1)))

    def rotated(self, phi: float) -> KernelPair:
        return KernelPair(self.inner.rotated(phi), self.outer.rotated(phi))

    def scaled(self, s: float) -> KernelPair:
        return KernelPair(self.inner.scaled(s), self.outer.scaled(s))


def kernel_C(pair: KernelPair, eta, theta):
    """Normal derivative on the core of the single layer on the shell curve."""
    num, den, _, _ = _polar_kernel(pair.inner, pair.outer, eta, theta)
    return num / (2.0 * np.pi * den)


def kernel_D(pair: KernelPair, eta, theta):
    """Normal derivative on the shell curve of the single layer on the core."""
    num, den, _, _ = _polar_kernel(pair.outer, pair.inner, eta, theta)
    return num / (2.0 * np.pi * den)
