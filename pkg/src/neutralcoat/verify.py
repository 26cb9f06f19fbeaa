"""Oracle suite: each check compares the Nystrom path against closed-form values."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .coater import CoatOptions, fd_jacobian
from .geometry import Perturbation, ShellParams, StarBoundary
from .kernels import KernelPair
from .nystrom import Material, assemble, nodes, operator_blocks, solve_densities
from .oracles import (
    NeutralConfig,
    analytic_jacobian,
    analytic_jacobian_det,
    c00_multiplier,
    d00_multiplier,
    dA_action_exact,
    dB0_action,
    density_vector,
    disk_pt,
    trig_samples,
)
from .ptensor import polarization_tensor


@dataclass
class Check:
    name: str
    passed: bool
    error: float
    tol: float
    detail: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _check(name, error, tol, detail="") -> Check:
    error = float(error)
    return Check(name, bool(error <= tol), error, tol, detail)


def neutral_pair(config: NeutralConfig, b=(0.0, 0.0, 0.0)) -> KernelPair:
    outer = StarBoundary(config.r_e, ShellParams.from_array(b).to_perturbation())
    return KernelPair(StarBoundary(config.r_i), outer)


def neutral_zero_error(config: NeutralConfig, n: int = 256) -> float:
    pt = polarization_tensor(neutral_pair(config), config.material, n)
    return float(np.max(np.abs(pt.matrix))) / config.r_e ** 2


def multiplier_error(config: NeutralConfig, n: int = 256, max_mode: int = 8) -> float:
    """Largest deviation of discrete C(0,0), D(0,0) on e^{im t} from -+rho^|m|/2."""
    _, C, D, _ = operator_blocks(neutral_pair(config), n)
    t = nodes(n)
    worst = 0.0
    for m in range(-max_mode, max_mode + 1):
        if m == 0:
            continue
        e = np.exp(1j * m * t)
        worst = max(worst,
                    np.max(np.abs(C @ e - c00_multiplier(m, config.rho) * e)),
                    np.max(np.abs(D @ e - d00_multiplier(m, config.rho) * e)))
    return float(worst)


def density_error(config: NeutralConfig, n: int = 256) -> float:
    dens = solve_densities(assemble(neutral_pair(config), config.material, n))
    V = density_vector(config)
    t = nodes(n)
    worst = 0.0
    for l, psi in ((1, np.cos(t)), (2, np.sin(t))):
        worst = max(worst, np.max(np.abs(dens.f1(l) - psi * V[0])),
                    np.max(np.abs(dens.f2(l) - psi * V[1])))
    return float(worst)


def fd_jacobian_at_origin(config: NeutralConfig, n: int = 256, step: float = 1e-5,
                          mode: str = "shell") -> np.ndarray:
    opts = CoatOptions(n=n, fd_step=step * config.r_e)
    return fd_jacobian(Perturbation(), np.zeros(3), config, opts, mode)


def jacobian_errors(config: NeutralConfig, n: int = 256, step: float = 1e-5):
    """(entrywise relative error, determinant relative error) of the FD Jacobian.

    Entries that vanish analytically are measured relative to the largest entry.
    """
    fd = fd_jacobian_at_origin(config, n, step)
    ref = analytic_jacobian(config)
    scale = np.where(ref != 0, np.abs(ref), np.max(np.abs(ref)))
    entry = float(np.max(np.abs(fd - ref) / scale))
    det_ref = analytic_jacobian_det(config)
    det = float(abs(np.linalg.det(fd) - det_ref) / abs(det_ref))
    return entry, det


def operator_fd(config: NeutralConfig, j: int, n: int = 256, step: float = 1e-6) -> np.ndarray:
    """Central difference in b_j of the assembled 2n x 2n operator at (0, 0)."""
    e = np.zeros(3)
    e[j - 1] = step
    mats = []
    for sgn in (1, -1):
        blocks = operator_blocks(neutral_pair(config, sgn * e), n)
        A, C, D, B = blocks
        mats.append(np.block([[A, C], [D, B]]))
    return (mats[0] - mats[1]) / (2 * step)


def derivative_action_errors(config: NeutralConfig, n: int = 256, step: float = 1e-6,
                             action=dA_action_exact):
    """Worst errors of FD d_j(operator) against ``action``, over (a, b) pairs, and of d_j B alone."""
    t = nodes(n)
    e = np.exp(1j * t)
    block_err = 0.0
    b_err = 0.0
    for j in (1, 2, 3):
        dA = operator_fd(config, j, n, step)
        for a, b in ((1.0, 0.0), (0.0, 1.0), (0.7, -0.3)):
            got = dA @ np.concatenate((a * e, b * e))
            want = trig_samples(action(j, a, b, config), t).reshape(-1)
            block_err = max(block_err, np.max(np.abs(got - want)))
        dB = dA[n:, n:]
        b_err = max(b_err, np.max(np.abs(dB @ e - trig_samples(dB0_action(j, config), t))))
    return float(block_err), float(b_err)


def disk_oracle_error(material: Material, r_i: float = 0.5, r_e: float = 1.0, n: int = 256) -> float:
    pair = KernelPair(StarBoundary(r_i), StarBoundary(r_e))
    got = polarization_tensor(pair, material, n).matrix
    want = disk_pt(r_i, r_e, material).matrix
    return float(np.max(np.abs(got - want)) / np.max(np.abs(want)))


def density_refinement(pair: KernelPair, material: Material, n_max: int = 256, n_min: int = 16,
                       floor: float = 1e-12):
    """Differences d(N) of densities at N and 2N on common nodes, N = n_min, 2 n_min, ..., n_max.

    Returns (ladder, diffs, passed): passed when every doubling shrinks d by at least 10x
    or d has reached ``floor`` relative to the density size.
    """
    ladder = []
    N = n_min
    while N <= n_max:
        ladder.append(N)
        N *= 2
    dens = {N: solve_densities(assemble(pair, material, N)).values for N in ladder + [2 * ladder[-1]]}
    scale = float(np.max(np.abs(dens[2 * ladder[-1]])))
    diffs = []
    for N in ladder:
        fine = dens[2 * N].reshape(2, 2, 2 * N)[:, :, ::2].reshape(2, 2 * N)
        diffs.append(float(np.max(np.abs(dens[N] - fine))) / scale)
    passed = all(
        d1 <= floor or d0 / d1 >= 10.0 for d0, d1 in zip(diffs, diffs[1:])
    )
    return ladder, diffs, passed


def symmetry_error(pair: KernelPair, material: Material, n: int = 256) -> float:
    return polarization_tensor(pair, material, n).symmetry_defect()


SPECTRAL_PAIR_H = Perturbation(0.0, (0.0, 0.0, 0.03), (0.0, 0.02))


def run_checks(material: Material | None = None, r_e: float = 1.0, r_i: float | None = None,
               n: int = 256) -> list[Check]:
    material = material or Material(5.0, 2.0, 3.0)
    config = NeutralConfig(material, r_e, r_i)
    checks = [
        _check("neutral_zero", neutral_zero_error(config, n), 1e-10, "max |M(0,0)| / r_e^2"),
        _check("multipliers", multiplier_error(config, n), 1e-10, "C(0,0), D(0,0) on e^{imt}, |m|<=8"),
        _check("analytic_density", density_error(config, n), 1e-11, "f^(l) vs psi_l V1 nodewise"),
    ]
    entry, det = jacobian_errors(config, n)
    checks.append(_check("jacobian_entries", entry, 1e-6, "FD vs analytic, relative"))
    checks.append(_check("jacobian_det", det, 1e-5, "determinant, relative"))
    block_err, b_err = derivative_action_errors(config, n)
    checks.append(_check("derivative_actions", block_err, 1e-5, "FD d_j(operator) on (a, b) e^{it}"))
    checks.append(_check("dB0_actions", b_err, 1e-5, "FD d_j B(0) on e^{it}"))
    checks.append(_check("disk_oracle", disk_oracle_error(material, 0.5 * r_e, r_e, n), 1e-8,
                         "r_i = r_e / 2 vs radial transmission solve"))
    pair = KernelPair(StarBoundary(config.r_i, SPECTRAL_PAIR_H.scaled(r_e)),
                      StarBoundary(r_e, ShellParams(0.01 * r_e, 0.02 * r_e, -0.01 * r_e).to_perturbation()))
    ladder, diffs, ok = density_refinement(pair, material, n_max=n)
    checks.append(Check("spectral_convergence", ok, diffs[-1], 10.0,
                        f"N={ladder}, d(N)={['%.2e' % d for d in diffs]}, tol is the min ratio"))
    checks.append(_check("symmetry", symmetry_error(pair, material, n), 1e-10, "|m12 - m21|"))
    return checks


def summarize(checks: list[Check]) -> dict:
    return {"all_passed": all(c.passed for c in checks), "checks": [c.to_dict() for c in checks]}
