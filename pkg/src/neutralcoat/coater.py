"""Damped Newton search for the three shell (or core) coefficients that cancel the PT."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .geometry import GeometryError, Perturbation, ShellParams, StarBoundary
from .kernels import KernelPair
from .nystrom import SolverError
from .oracles import NeutralConfig, neutral_ratio
from .ptensor import PolarizationTensor, polarization_tensor

log = logging.getLogger(__name__)

MODES = ("shell", "core")


@dataclass(frozen=True)
class CoatOptions:
    n: int = 256
    tol: float = 1e-10  # on |M|_F, length^2
    max_iter: int = 50
    fd_step: float = 1e-5  # length
    damping: float = 0.5
    max_halvings: int = 30

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not self.fd_step > 0:
            raise ValueError("fd_step must be positive")
        if not 0 < self.damping < 1:
            raise ValueError("damping must lie in (0, 1)")


@dataclass
class CoatResult:
    b: ShellParams
    residual: float
    iterations: int
    converged: bool
    mode: str = "shell"
    message: str = ""
    tensor: PolarizationTensor | None = None
    trace: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "b": self.b.as_array().tolist(),
            "residual": self.residual,
            "iterations": self.iterations,
            "converged": self.converged,
            "mode": self.mode,
            "message": self.message,
            "tensor": self.tensor.to_dict() if self.tensor else None,
            "trace": self.trace,
        }


def make_pair(given: Perturbation, b, config: NeutralConfig, mode: str = "shell") -> KernelPair:
    """Pair with ``given`` on one curve and the W3 function of ``b`` on the other."""
    w3 = ShellParams.from_array(b).to_perturbation()
    if mode == "shell":
        return KernelPair(StarBoundary(config.r_i, given), StarBoundary(config.r_e, w3))
    if mode == "core":
        return KernelPair(StarBoundary(config.r_i, w3), StarBoundary(config.r_e, given))
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def residual_tensor(given, b, config, opts: CoatOptions, mode="shell", n=None) -> PolarizationTensor:
    pair = make_pair(given, b, config, mode)
    return polarization_tensor(pair, config.material, n or opts.n)


def fd_jacobian(given: Perturbation, b, config: NeutralConfig, opts: CoatOptions,
                mode: str = "shell") -> np.ndarray:
    """Central differences of (m11, m22, m12) in (b1, b2, b3)."""
    b = np.asarray(b, dtype=float)
    jac = np.empty((3, 3))
    for k in range(3):
        step = opts.fd_step
        for _ in range(6):
            e = np.zeros(3)
            e[k] = step
            try:
                fp = residual_tensor(given, b + e, config, opts, mode).residual_vector()
                fm = residual_tensor(given, b - e, config, opts, mode).residual_vector()
                break
            except GeometryError:
                step *= 0.5
        else:
            raise GeometryError(f"finite-difference stencil inadmissible at b={b.tolist()}")
        jac[:, k] = (fp - fm) / (2 * step)
    return jac


def _newton(given: Perturbation, config: NeutralConfig, opts: CoatOptions, mode: str) -> CoatResult:
    neutral_ratio(config.material)
    b = np.zeros(3)
    pt = residual_tensor(given, b, config, opts, mode)
    res = pt.frobenius()
    trace = [{"iteration": 0, "b": b.tolist(), "residual": res}]
    if res <= opts.tol:
        return CoatResult(ShellParams.from_array(b), res, 0, True, mode, "initial guess", pt, trace)

    message = "maximum iterations reached"
    converged = False
    it = 0
    for it in range(1, opts.max_iter + 1):
        jac = fd_jacobian(given, b, config, opts, mode)
        step = -np.linalg.solve(jac, pt.residual_vector())
        t = 1.0
        accepted = None
        for _ in range(opts.max_halvings + 1):
            trial = b + t * step
            try:
                trial_pt = residual_tensor(given, trial, config, opts, mode)
            except (GeometryError, SolverError):
                trial_pt = None
            if trial_pt is not None and trial_pt.frobenius() < res:
                accepted = trial, trial_pt
                break
            t *= opts.damping
        if accepted is None:
            message = "line search failed to reduce the residual"
            trace.append({"iteration": it, "b": b.tolist(), "residual": res,
                          "det_jacobian": float(np.linalg.det(jac)), "step_length": 0.0})
            break
        b, pt = accepted
        res = pt.frobenius()
        trace.append({"iteration": it, "b": b.tolist(), "residual": res,
                      "det_jacobian": float(np.linalg.det(jac)), "step_length": t})
        log.debug("newton %d: residual %.3e, step %.3g", it, res, t)
        if res <= opts.tol:
            converged = True
            message = "converged"
            break
    return CoatResult(ShellParams.from_array(b), res, it, converged, mode, message, pt, trace)


def find_shell(h: Perturbation, config: NeutralConfig, opts: CoatOptions | None = None) -> CoatResult:
    """Coefficients b of the shell r_e + b(t) cancelling the PT of the core r_i + h(t)."""
    return _newton(h, config, opts or CoatOptions(), "shell")


def find_core(h_outer: Perturbation, config: NeutralConfig, opts: CoatOptions | None = None) -> CoatResult:
    """Coefficients b of the core r_i + b(t) inside the given shell r_e + h_outer(t)."""
    return _newton(h_outer, config, opts or CoatOptions(), "core")


def coat(given: Perturbation, config: NeutralConfig, opts: CoatOptions | None = None,
         mode: str = "shell") -> CoatResult:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return _newton(given, config, opts or CoatOptions(), mode)
