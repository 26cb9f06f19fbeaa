"""End-to-end criteria at their stated tolerances.

Each test records one PASS/FAIL line, printed in the terminal summary. Two
criteria check closed forms the discrete operator does not satisfy; they are
marked strict xfail so that they report FAIL without turning the suite red,
and would flag loudly if they ever started to pass.
"""

import time

import numpy as np
import pytest

from conftest import record_acceptance
from neutralcoat.coater import CoatOptions, find_core, find_shell, residual_tensor
from neutralcoat.geometry import Perturbation, ShellParams, StarBoundary
from neutralcoat.kernels import KernelPair
from neutralcoat.nystrom import Material
from neutralcoat.oracles import NeutralConfig, analytic_jacobian, dA_action
from neutralcoat.ptensor import far_field_perturbation, polarization_tensor, ring, solve
from neutralcoat.verify import (
    density_error,
    density_refinement,
    derivative_action_errors,
    disk_oracle_error,
    fd_jacobian_at_origin,
    jacobian_errors,
    multiplier_error,
    neutral_pair,
)

N = 256
H3 = Perturbation(cos=(0.0, 0.0, 0.02))


def _rot(phi):
    return np.array([[np.cos(phi), -np.sin(phi)], [np.sin(phi), np.cos(phi)]])


@pytest.fixture(scope="module")
def coated(neutral):
    opts = CoatOptions(n=N)
    start = time.perf_counter()
    res = find_shell(H3, neutral, opts)
    elapsed = time.perf_counter() - start
    return res, elapsed, opts


def test_neutral_zero(neutral):
    start = time.perf_counter()
    pt = polarization_tensor(neutral_pair(neutral), neutral.material, N)
    elapsed = time.perf_counter() - start
    worst = float(np.max(np.abs(pt.matrix)))
    ok = worst <= 1e-10 and elapsed < 1.0
    record_acceptance("neutral zero", ok, f"max|M| = {worst:.2e} (tol 1e-10), {elapsed:.2f} s (< 1 s)")
    assert ok


def test_multiplier_suite(neutral):
    err = multiplier_error(neutral, N, max_mode=8)
    record_acceptance("multipliers", err <= 1e-10, f"max error {err:.2e} (tol 1e-10), |m| <= 8")
    assert err <= 1e-10


def test_analytic_density(neutral):
    err = density_error(neutral, N)
    record_acceptance("analytic density", err <= 1e-11, f"nodewise error {err:.2e} (tol 1e-11)")
    assert err <= 1e-11


def test_jacobian_oracle(neutral):
    entry, det = jacobian_errors(neutral, N, step=1e-5)
    ok = entry <= 1e-6 and det <= 1e-5
    det_val = float(np.linalg.det(fd_jacobian_at_origin(neutral, N)))
    record_acceptance("jacobian", ok, f"entrywise rel {entry:.2e} (tol 1e-6), det {det_val:.9f} "
                      f"rel {det:.2e} (tol 1e-5)")
    assert ok


@pytest.mark.xfail(strict=True, reason="transcribed C/D terms miss a factor rho^2; see dA_action_exact")
def test_derivative_actions_transcribed(neutral):
    err, _ = derivative_action_errors(neutral, N, action=dA_action)
    record_acceptance("derivative actions (block operator)", err <= 1e-5,
                      f"max error {err:.2e} (tol 1e-5)")
    assert err <= 1e-5


def test_derivative_actions_shell_block(neutral):
    _, err = derivative_action_errors(neutral, N, action=dA_action)
    record_acceptance("derivative actions (shell self-kernel)", err <= 1e-5,
                      f"max error {err:.2e} (tol 1e-5)")
    assert err <= 1e-5


def test_concentric_disk_oracle(reference_material):
    err = disk_oracle_error(reference_material, 0.5, 1.0, N)
    record_acceptance("disk oracle", err <= 1e-8, f"relative error {err:.2e} (tol 1e-8)")
    assert err <= 1e-8


def test_coating_run(neutral, coated):
    res, elapsed, opts = coated
    fine = residual_tensor(H3, res.b.as_array(), neutral, opts, n=2 * N).frobenius()
    ok = res.converged and res.iterations <= 20 and res.residual <= 1e-8 and fine <= 1e-7 and elapsed < 10
    record_acceptance("coating run", ok,
                      f"{res.iterations} iterations, |M|_F = {res.residual:.2e}, at 2N {fine:.2e}, "
                      f"{elapsed:.2f} s, b = {np.array2string(res.b.as_array(), precision=4)}")
    assert ok


def test_far_field_decay(neutral, coated):
    res = coated[0]
    pair = KernelPair(StarBoundary(neutral.r_i, H3), StarBoundary(neutral.r_e, res.b.to_perturbation()))
    _, dens = solve(pair, neutral.material, N)

    def rms(radius):
        x = ring(radius * neutral.r_e, 64)
        vals = np.concatenate([far_field_perturbation(pair, dens, x, l) for l in (1, 2)])
        return float(np.sqrt(np.mean(vals ** 2)))

    ratio = rms(20.0) / rms(10.0)
    ok = 0.225 <= ratio <= 0.275
    record_acceptance("far-field decay", ok, f"ratio 20 r_e / 10 r_e = {ratio:.4f} (in [0.225, 0.275])")
    assert ok


def test_swapped_mode_converges(neutral):
    opts = CoatOptions(n=N)
    start = time.perf_counter()
    res = find_core(H3, neutral, opts)
    elapsed = time.perf_counter() - start
    fine = residual_tensor(H3, res.b.as_array(), neutral, opts, mode="core", n=2 * N).frobenius()
    ok = res.converged and res.iterations <= 20 and res.residual <= 1e-8 and fine <= 1e-7 and elapsed < 10
    record_acceptance("swapped mode (convergence)", ok,
                      f"{res.iterations} iterations, |M|_F = {res.residual:.2e}, at 2N {fine:.2e}, "
                      f"{elapsed:.2f} s")
    assert ok


@pytest.mark.xfail(strict=True, reason="the core-dilation column scales by -(r_e/r_i), not its cube")
def test_swapped_mode_jacobian(neutral):
    core = fd_jacobian_at_origin(neutral, N, mode="core")
    want = -(neutral.r_e / neutral.r_i) ** 3 * analytic_jacobian(neutral)
    scale = np.where(want != 0, np.abs(want), np.max(np.abs(want)))
    err = float(np.max(np.abs(core - want) / scale))
    record_acceptance("swapped mode (jacobian)", err <= 1e-5, f"entrywise rel {err:.2e} (tol 1e-5)")
    assert err <= 1e-5


def _battery_configs():
    bump = Perturbation(0.0, (0.0, 0.0, 0.03), (0.0, 0.02))
    return [
        ("reference coated", Material(5, 2, 3), np.sqrt(7 / 15), 1.0, H3, ShellParams(3.8e-4, 0, 0)),
        ("strong core", Material(10, 0.5, 1), 0.7, 1.0, bump, ShellParams(0.01, 0.02, -0.01)),
        ("weak core", Material(0.2, 1, 5), 0.4, 1.0, Perturbation(0.01, (0.02,), (0.0, 0.0, 0.01)),
         ShellParams(0.0, -0.03, 0.02)),
        ("thin shell", Material(1, 4, 2), 0.8, 1.0, Perturbation(0.0, (), (0.0, 0.0, 0.0, 0.01)),
         ShellParams(0.0, 0.01, 0.0)),
        ("large scale", Material(3, 1, 2), 1.2, 2.0, bump.scaled(2.0), ShellParams(0.02, 0.0, 0.04)),
    ]


@pytest.mark.parametrize("name,mat,r_i,r_e,h,b", _battery_configs(),
                         ids=[c[0].replace(" ", "-") for c in _battery_configs()])
def test_property_battery(name, mat, r_i, r_e, h, b):
    pair = KernelPair(StarBoundary(r_i, h), StarBoundary(r_e, b.to_perturbation()))
    M = polarization_tensor(pair, mat, N).matrix
    size = max(float(np.max(np.abs(M))), 1e-300)

    sym = abs(M[0, 1] - M[1, 0])
    s = 1.7
    scale = float(np.max(np.abs(polarization_tensor(pair.scaled(s), mat, N).matrix - s ** 2 * M))) / (s ** 2 * size)
    cond = float(np.max(np.abs(polarization_tensor(pair, mat.scaled(13.0), N).matrix - M))) / size
    phi = 0.7
    R = _rot(phi)
    rot = float(np.max(np.abs(polarization_tensor(pair.rotated(phi), mat, N).matrix - R @ M @ R.T)))
    _, diffs, spectral = density_refinement(pair, mat, n_max=N)

    checks = {
        "symmetry": sym <= 1e-10,
        "scale": scale <= 1e-9,
        "conductivity": cond <= 1e-12,
        "rotation": rot <= 1e-10,
        "spectral": spectral,
    }
    ok = all(checks.values())
    record_acceptance(f"properties [{name}]", ok,
                      f"sym {sym:.1e}, scale {scale:.1e}, cond {cond:.1e}, rot {rot:.1e}, "
                      f"d(N) {' '.join('%.0e' % d for d in diffs)}")
    assert ok, checks
