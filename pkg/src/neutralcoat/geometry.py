"""Star-shaped boundaries r(theta) = r0 + f(theta) with truncated Fourier perturbations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi

# dense grid used for positivity, admissibility and sup-norm sampling
CHECK_SAMPLES = 4096


class GeometryError(ValueError):
    """Raised when a boundary or a pair of boundaries is not admissible."""


def _as_tuple(values) -> tuple[float, ...]:
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class Perturbation:
    """f(t) = a0 + sum_k (cos[k-1] cos kt + sin[k-1] sin kt)."""

    a0: float = 0.0
    cos: tuple[float, ...] = ()
    sin: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "cos", _as_tuple(self.cos))
        object.__setattr__(self, "sin", _as_tuple(self.sin))
        coeffs = (self.a0,) + self.cos + self.sin
        if not all(np.isfinite(coeffs)):
            raise GeometryError("perturbation coefficients must be finite")

    @property
    def degree(self) -> int:
        return max(len(self.cos), len(self.sin))

    def coefficients(self) -> tuple[np.ndarray, np.ndarray]:
        """Cosine and sine coefficient arrays, both padded to length ``degree``."""
        K = self.degree
        a = np.zeros(K)
        b = np.zeros(K)
        a[: len(self.cos)] = self.cos
        b[: len(self.sin)] = self.sin
        return a, b

    def __call__(self, t, deriv: int = 0):
        """Evaluate f or its ``deriv``-th derivative (0, 1 or 2) by term-wise differentiation."""
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, self.a0 if deriv == 0 else 0.0)
        a, b = self.coefficients()
        for k in range(1, self.degree + 1):
            ak, bk = a[k - 1], b[k - 1]
            if ak == 0.0 and bk == 0.0:
                continue
            c, s = np.cos(k * t), np.sin(k * t)
            if deriv == 0:
                out = out + ak * c + bk * s
            elif deriv == 1:
                out = out + k * (bk * c - ak * s)
            elif deriv == 2:
                out = out - k * k * (ak * c + bk * s)
            else:
                raise ValueError("only derivatives up to order 2 are supported")
        return out

    def rotated(self, phi: float) -> Perturbation:
        """The perturbation t -> f(t - phi), i.e. the curve rotated by ``phi``."""
        a, b = self.coefficients()
        k = np.arange(1, self.degree + 1)
        c, s = np.cos(k * phi), np.sin(k * phi)
        return Perturbation(self.a0, a * c - b * s, a * s + b * c)

    def scaled(self, s: float) -> Perturbation:
        return Perturbation(s * self.a0, [s * v for v in self.cos], [s * v for v in self.sin])

    def __add__(self, other: Perturbation) -> Perturbation:
        a1, b1 = self.coefficients()
        a2, b2 = other.coefficients()
        K = max(len(a1), len(a2))
        a = np.zeros(K)
        b = np.zeros(K)
        a[: len(a1)] += a1
        a[: len(a2)] += a2
        b[: len(b1)] += b1
        b[: len(b2)] += b2
        return Perturbation(self.a0 + other.a0, a, b)

    def to_dict(self) -> dict:
        return {"a0": self.a0, "cos": list(self.cos), "sin": list(self.sin)}

    @classmethod
    def from_dict(cls, data: dict) -> Perturbation:
        unknown = set(data) - {"a0", "cos", "sin"}
        if unknown:
            raise GeometryError(f"unknown perturbation keys: {sorted(unknown)}")
        return cls(data.get("a0", 0.0), data.get("cos", ()), data.get("sin", ()))


ZERO = Perturbation()


@dataclass(frozen=True)
class ShellParams:
    """Coordinates of b(t) = b1 + b2 cos 2t + b3 sin 2t."""

    b1: float = 0.0
    b2: float = 0.0
    b3: float = 0.0

    @classmethod
    def from_array(cls, values) -> ShellParams:
        b1, b2, b3 = (float(v) for v in values)
        return cls(b1, b2, b3)

    def as_array(self) -> np.ndarray:
        return np.array([self.b1, self.b2, self.b3])

    def sup_norm(self) -> float:
        """|b|_inf, the largest coordinate in absolute value."""
        return float(np.max(np.abs(self.as_array())))

    def to_perturbation(self) -> Perturbation:
        return Perturbation(self.b1, (0.0, self.b2), (0.0, self.b3))


def w2inf_norm(f: Perturbation, samples: int | None = None) -> tuple[float, float, float, float]:
    """Sampled (|f|_inf, |f'|_inf, |f''|_inf, |f|_{2,inf})."""
    n = samples or max(CHECK_SAMPLES, 64 * f.degree)
    t = np.arange(n) * (TWO_PI / n)
    norms = tuple(float(np.max(np.abs(f(t, d)))) for d in range(3))
    return norms + (sum(norms),)


@dataclass(frozen=True)
class StarBoundary:
    """Closed curve (r0 + f(t)) (cos t, sin t); ``r0`` is the base radius."""

    r0: float
    perturbation: Perturbation = field(default=ZERO)

    def __post_init__(self):
        object.__setattr__(self, "r0", float(self.r0))
        if not (np.isfinite(self.r0) and self.r0 > 0):
            raise GeometryError(f"base radius must be positive, got {self.r0}")
        t = np.arange(CHECK_SAMPLES) * (TWO_PI / CHECK_SAMPLES)
        rmin = float(np.min(self.radius(t)))
        if rmin <= 0.0:
            raise GeometryError(f"radius is not positive (min {rmin:.3g})")

    def radius(self, t, deriv: int = 0):
        r = self.perturbation(t, deriv)
        return r + self.r0 if deriv == 0 else r

    def point(self, t) -> np.ndarray:
        """x(t), shape ``t.shape + (2,)``."""
        t = np.asarray(t, dtype=float)
        r = self.radius(t)
        return np.stack((r * np.cos(t), r * np.sin(t)), axis=-1)

    def normal_jacobian(self, t) -> tuple[np.ndarray, np.ndarray]:
        """Unnormalized outward normal nu*J and the speed J = |x'(t)|."""
        t = np.asarray(t, dtype=float)
        r = self.radius(t)
        dr = self.radius(t, 1)
        c, s = np.cos(t), np.sin(t)
        nuJ = np.stack((r * c + dr * s, r * s - dr * c), axis=-1)
        return nuJ, np.hypot(r, dr)

    def curvature(self, t):
        t = np.asarray(t, dtype=float)
        r = self.radius(t)
        dr = self.radius(t, 1)
        d2r = self.radius(t, 2)
        return (r * r + 2 * dr * dr - r * d2r) / (r * r + dr * dr) ** 1.5

    def max_radius(self) -> float:
        t = np.arange(CHECK_SAMPLES) * (TWO_PI / CHECK_SAMPLES)
        return float(np.max(self.radius(t)))

    def rotated(self, phi: float) -> StarBoundary:
        return StarBoundary(self.r0, self.perturbation.rotated(phi))

    def scaled(self, s: float) -> StarBoundary:
        return StarBoundary(s * self.r0, self.perturbation.scaled(s))


def eval_point(boundary: StarBoundary, t):
    return boundary.point(t)


def eval_normal_jacobian(boundary: StarBoundary, t):
    return boundary.normal_jacobian(t)


def curvature(boundary: StarBoundary, t):
    return boundary.curvature(t)


def check_admissible(inner: StarBoundary, outer: StarBoundary, margin: float = 0.1) -> float:
    """Return the minimal radial gap, raising if it is below ``margin * (r_e - r_i)``."""
    base_gap = outer.r0 - inner.r0
    if base_gap <= 0:
        raise GeometryError("outer base radius must exceed the inner one")
    t = np.arange(CHECK_SAMPLES) * (TWO_PI / CHECK_SAMPLES)
    gap = float(np.min(outer.radius(t) - inner.radius(t)))
    if gap < margin * base_gap:
        raise GeometryError(
            f"boundaries too close: min radial gap {gap:.4g} < {margin * base_gap:.4g}"
        )
    return gap
