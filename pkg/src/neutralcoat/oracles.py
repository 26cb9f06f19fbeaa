"""Closed-form reference values for concentric disks.

Everything here is independent of the Nystrom path: neutrality arithmetic,
Poisson-kernel multipliers, the analytic densities and operator derivatives at
the neutral pair, the coating Jacobian, and a radial transmission solve for
concentric disks of arbitrary radii.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .nystrom import Material
from .ptensor import PolarizationTensor


class NoNeutralPair(ValueError):
    """The conductivities admit no neutral concentric-disk pair."""


def neutral_ratio(material: Material) -> float:
    """rho^2 = (r_i / r_e)^2 making concentric disks neutral."""
    sc, ss, sm = material.as_tuple()
    ratio = (ss + sc) * (ss - sm) / ((ss - sc) * (sm + ss))
    if not 0.0 < ratio < 1.0:
        raise NoNeutralPair(f"neutral radius ratio rho^2 = {ratio:.6g} is not in (0, 1)")
    return ratio


@dataclass(frozen=True)
class NeutralConfig:
    """Reference disks r_i < r_e; ``r_i`` defaults to the neutral value rho r_e."""

    material: Material
    r_e: float = 1.0
    r_i: float = field(default=None)

    def __post_init__(self):
        if self.r_i is None:
            object.__setattr__(self, "r_i", float(np.sqrt(neutral_ratio(self.material)) * self.r_e))
        if not 0.0 < self.r_i < self.r_e:
            raise ValueError(f"need 0 < r_i < r_e, got r_i={self.r_i}, r_e={self.r_e}")

    @property
    def rho(self) -> float:
        return self.r_i / self.r_e

    @property
    def is_neutral(self) -> bool:
        try:
            return bool(np.isclose(self.rho ** 2, neutral_ratio(self.material), rtol=1e-12))
        except NoNeutralPair:
            return False

    @property
    def tau(self) -> float:
        mu = self.material.mu
        return self.r_e / ((0.5 - mu) * (0.5 + mu))


def poisson_multiplier(m: int, rho: float) -> float:
    """Fourier coefficient rho^|m| of P_rho."""
    return rho ** abs(m)


def poisson_kernel(t, rho: float):
    """P_rho(t) = (1 - rho^2) / (1 - 2 rho cos t + rho^2)."""
    return (1 - rho ** 2) / (1 - 2 * rho * np.cos(t) + rho ** 2)


def c00_multiplier(m: int, rho: float) -> float:
    return -0.5 * poisson_multiplier(m, rho)


def d00_multiplier(m: int, rho: float) -> float:
    return 0.5 * poisson_multiplier(m, rho)


def disk_dipole(r_i: float, r_e: float, material: Material) -> float:
    """Coefficient c of the exterior field (r + c / r) cos t for concentric disks.

    Unknowns (A, B, C, c): u = A r cos t in the core, (B r + C / r) cos t in the
    shell; continuity of u and sigma du/dr is imposed at both interfaces.
    """
    if not 0.0 < r_i < r_e:
        raise ValueError("need 0 < r_i < r_e")
    sc, ss, sm = material.as_tuple()
    a = np.array([
        [r_i, -r_i, -1.0 / r_i, 0.0],
        [sc, -ss, ss / r_i ** 2, 0.0],
        [0.0, r_e, 1.0 / r_e, -1.0 / r_e],
        [0.0, ss, -ss / r_e ** 2, sm / r_e ** 2],
    ])
    rhs = np.array([0.0, 0.0, r_e, sm])
    return float(np.linalg.solve(a, rhs)[3])


def disk_pt(r_i: float, r_e: float, material: Material) -> PolarizationTensor:
    """Isotropic tensor M = -2 pi c I, with c from :func:`disk_dipole`."""
    m = -2.0 * np.pi * disk_dipole(r_i, r_e, material)
    return PolarizationTensor(m, 0.0, 0.0, m)


def density_vector(config: NeutralConfig) -> np.ndarray:
    """V with f^(1) = cos t V and f^(2) = sin t V at the neutral disks."""
    rho, mu = config.rho, config.material.mu
    gamma2 = 1.0 / (rho ** 2 * (0.5 + mu))
    return gamma2 * config.r_i * np.array([-1.0, rho])


def analytic_jacobian(config: NeutralConfig) -> np.ndarray:
    """d(m11, m22, m12)/d(b1, b2, b3) at the neutral disks."""
    mu = config.material.mu
    return 0.5 * config.tau * np.pi * np.array([
        [-4 * mu, 1.0, 0.0],
        [-4 * mu, -1.0, 0.0],
        [0.0, 0.0, 1.0],
    ])


def analytic_jacobian_det(config: NeutralConfig) -> float:
    return (0.5 * config.tau * np.pi) ** 3 * 8.0 * config.material.mu


def dA_action(j: int, a: float, b: float, config: NeutralConfig) -> dict[int, np.ndarray]:
    """d/db_j of the block operator at (0, 0) applied to (a e^{it}, b e^{it}).

    Returned as {m: complex 2-vector}: the result is sum_m vec_m e^{i m eta}.
    These are the transcribed closed forms; the discrete operator follows
    :func:`dA_action_exact` instead, which differs in the C and D block terms.
    """
    ri, rho = config.r_i, config.rho
    if j == 1:
        return {1: np.array([b, -a], dtype=complex) / (2 * ri)}
    low = np.array([b, -a * (1 - 2 * rho ** 2) + 2 * b * rho], dtype=complex) / (4 * ri)
    if j == 2:
        high = np.array([3 * b * rho ** 2, -a * (1 + 2 * rho ** 2)], dtype=complex) / (4 * ri)
        return {3: high, -1: low}
    if j == 3:
        high = np.array([-3 * b * rho ** 2, a * (1 + 2 * rho ** 2)], dtype=complex) / (4 * ri)
        return {3: 1j * high, -1: 1j * low}
    raise ValueError("j must be 1, 2 or 3")


def dA_action_exact(j: int, a: float, b: float, config: NeutralConfig) -> dict[int, np.ndarray]:
    """Same quantity as :func:`dA_action`, with the C and D block terms rederived.

    d_1 C(0,0) multiplies e^{it} by d/dR (-(r_i / R) / 2) = rho^2 / (2 r_i), not
    1 / (2 r_i); carrying that factor through the cos 2t, sin 2t splittings gives
    the coefficients below. The B-block terms are unchanged.
    """
    ri, rho = config.r_i, config.rho
    r2 = rho ** 2
    if j == 1:
        return {1: r2 * np.array([b, -a], dtype=complex) / (2 * ri)}
    low = np.array([b * r2, a * r2 + 2 * b * rho], dtype=complex) / (4 * ri)
    if j == 2:
        high = np.array([3 * b * r2 ** 2, -3 * a * r2], dtype=complex) / (4 * ri)
        return {3: high, -1: low}
    if j == 3:
        high = np.array([-3 * b * r2 ** 2, 3 * a * r2], dtype=complex) / (4 * ri)
        return {3: 1j * high, -1: 1j * low}
    raise ValueError("j must be 1, 2 or 3")


def dB0_action(j: int, config: NeutralConfig) -> dict[int, complex]:
    """d/db_j B(0) applied to e^{it}, as {m: coefficient of e^{i m eta}}."""
    re = config.r_e
    if j == 1:
        return {}
    if j == 2:
        return {-1: 1.0 / (2 * re)}
    if j == 3:
        return {-1: 1j / (2 * re)}
    raise ValueError("j must be 1, 2 or 3")


def trig_samples(coeffs: dict, eta: np.ndarray) -> np.ndarray:
    """Evaluate sum_m c_m e^{i m eta}; vector coefficients give shape (dim, len(eta))."""
    out = 0.0
    for m, c in coeffs.items():
        out = out + np.multiply.outer(np.asarray(c), np.exp(1j * m * eta))
    if np.isscalar(out):
        return np.zeros(len(eta), dtype=complex)
    return out
