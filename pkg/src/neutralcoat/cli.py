"""Command-line front end: ``pt``, ``coat``, ``verify`` and ``field``.

Exit codes: 0 success, 2 configuration error, 3 no convergence, 4 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .coater import MODES, CoatOptions, coat
from .geometry import GeometryError, Perturbation, ShellParams, StarBoundary
from .kernels import KernelPair
from .nystrom import Material, SolverError, nodes
from .oracles import NeutralConfig, NoNeutralPair
from .ptensor import far_field_perturbation, ring, solve
from .verify import run_checks, summarize

log = logging.getLogger("neutralcoat")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NO_CONVERGENCE = 3
EXIT_SOLVER = 4

FIELD_RINGS = (2.0, 5.0, 10.0, 20.0)
FIELD_ANGLES = 64

_CONFIG_KEYS = {"sigma", "r_e", "r_i", "h", "b", "mode", "N", "solver", "sweep"}


class ConfigError(ValueError):
    pass


def _perturbation(value, name: str) -> Perturbation:
    if isinstance(value, dict):
        return Perturbation.from_dict(value)
    if isinstance(value, (list, tuple)) and len(value) == 3:
        return ShellParams.from_array(value).to_perturbation()
    raise ConfigError(f"{name} must be a perturbation object or a list of 3 shell coefficients")


@dataclass
class RunConfig:
    sigma: tuple[float, float, float] = (5.0, 2.0, 3.0)
    r_e: float = 1.0
    r_i: float | None = None
    h: Perturbation = field(default_factory=Perturbation)
    b: Perturbation = field(default_factory=Perturbation)
    mode: str = "shell"
    n: int = 256
    solver: CoatOptions = field(default_factory=CoatOptions)
    sweep: list[Perturbation] = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            sigma = tuple(float(s) for s in data.get("sigma", cls.sigma))
            if len(sigma) != 3:
                raise ConfigError("sigma must list (sigma_c, sigma_s, sigma_m)")
            solver = data.get("solver", {})
            if not isinstance(solver, dict):
                raise ConfigError("solver must be an object")
            n = int(data.get("N", 256))
            cfg = cls(
                sigma=sigma,
                r_e=float(data.get("r_e", 1.0)),
                r_i=None if data.get("r_i") is None else float(data["r_i"]),
                h=_perturbation(data.get("h", {}), "h"),
                b=_perturbation(data.get("b", {}), "b"),
                mode=str(data.get("mode", "shell")),
                n=n,
                solver=CoatOptions(**{"n": n, **solver}),
                sweep=[_perturbation(v, "sweep entry") for v in data.get("sweep", [])],
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        cfg.validate()
        return cfg

    def validate(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        try:
            self.neutral_config()
        except (ValueError, NoNeutralPair) as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def material(self) -> Material:
        return Material(*self.sigma)

    def neutral_config(self) -> NeutralConfig:
        return NeutralConfig(self.material, self.r_e, self.r_i)

    def pair(self, b: Perturbation | None = None) -> KernelPair:
        """Geometry: ``h`` on the core (shell mode) or on the shell (core mode), ``b`` on the other curve."""
        b = self.b if b is None else b
        nc = self.neutral_config()
        if self.mode == "shell":
            return KernelPair(StarBoundary(nc.r_i, self.h), StarBoundary(nc.r_e, b))
        return KernelPair(StarBoundary(nc.r_i, b), StarBoundary(nc.r_e, self.h))

    def resolved(self) -> dict:
        nc = self.neutral_config()
        return {
            "sigma": list(self.sigma),
            "r_e": self.r_e,
            "r_i": nc.r_i,
            "r_i_neutral": self.r_i is None,
            "h": self.h.to_dict(),
            "b": self.b.to_dict(),
            "mode": self.mode,
            "N": self.n,
            "solver": asdict(self.solver),
            "sweep": [s.to_dict() for s in self.sweep],
        }


def load_config(path: str | None, overrides: dict | None = None) -> RunConfig:
    data = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
    return RunConfig.from_dict(data)


def _write_json(path: Path, payload: dict):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def _write_csv(path: Path, header: list[str], rows, config: dict):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def cmd_pt(cfg: RunConfig, out: Path) -> int:
    pair = cfg.pair()
    pt, dens = solve(pair, cfg.material, cfg.n)
    fine, _ = solve(pair, cfg.material, 2 * cfg.n)
    delta = float(np.max(np.abs(fine.matrix - pt.matrix)))
    payload = {
        "tensor": pt.to_dict(),
        "symmetry_defect": pt.symmetry_defect(),
        "refinement_delta": delta,
        "solve_residual": dens.residual,
        "condition_estimate": dens.cond,
        "config": cfg.resolved(),
    }
    _write_json(out / "pt.json", payload)
    print(f"M = [[{pt.m11:.12e}, {pt.m12:.12e}], [{pt.m21:.12e}, {pt.m22:.12e}]]")
    print(f"symmetry defect {pt.symmetry_defect():.3e}; N -> 2N delta {delta:.3e}")
    return EXIT_OK


def boundary_rows(pair: KernelPair, n: int):
    t = nodes(n)
    for name, curve in (("inner", pair.inner), ("outer", pair.outer)):
        pts = curve.point(t)
        for ti, (x, y) in zip(t, pts):
            yield [name, repr(float(ti)), repr(float(x)), repr(float(y))]


def _coat_one(cfg: RunConfig, h: Perturbation):
    run = RunConfig(**{**cfg.__dict__, "h": h, "sweep": []})
    result = coat(h, run.neutral_config(), cfg.solver, cfg.mode)
    return run, result


def _emit_coat(run: RunConfig, result, out: Path, stem: str):
    payload = {**result.to_dict(), "config": run.resolved()}
    _write_json(out / f"{stem}.json", payload)
    pair = run.pair(result.b.to_perturbation())
    _write_csv(out / f"{stem}_boundary.csv", ["curve", "theta", "x", "y"],
               boundary_rows(pair, run.n), run.resolved())
    print(f"{stem}: b = {result.b.as_array().tolist()}, |M|_F = {result.residual:.3e}, "
          f"iterations {result.iterations}, {result.message}")


def cmd_coat(cfg: RunConfig, out: Path, jobs: int = 1) -> int:
    if cfg.sweep:
        with ProcessPoolExecutor(max_workers=max(1, jobs)) as pool:
            runs = list(pool.map(_coat_one, [cfg] * len(cfg.sweep), cfg.sweep))
        for k, (run, result) in enumerate(runs):
            _emit_coat(run, result, out, f"coat_{k:03d}")
        ok = all(r.converged for _, r in runs)
    else:
        run, result = _coat_one(cfg, cfg.h)
        _emit_coat(run, result, out, "coat")
        ok = result.converged
    return EXIT_OK if ok else EXIT_NO_CONVERGENCE


def cmd_verify(cfg: RunConfig, out: Path) -> int:
    checks = run_checks(cfg.material, cfg.r_e, cfg.r_i, cfg.n)
    report = {**summarize(checks), "config": cfg.resolved()}
    _write_json(out / "verify.json", report)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<22} error {c.error:.3e}  tol {c.tol:.1e}")
    return EXIT_OK if report["all_passed"] else 1


def field_samples(pair: KernelPair, dens, r_e: float, rings=FIELD_RINGS, count=FIELD_ANGLES):
    """Rows (x, y, l, value) and RMS amplitude per ring."""
    rows = []
    amps = []
    for k in rings:
        x = ring(k * r_e, count)
        vals = [far_field_perturbation(pair, dens, x, l) for l in (1, 2)]
        for l, v in zip((1, 2), vals):
            rows.extend([repr(float(p[0])), repr(float(p[1])), l, repr(float(u))] for p, u in zip(x, v))
        amps.append(float(np.sqrt(np.mean(np.concatenate(vals) ** 2))))
    return rows, amps


def decay_exponents(rings, amps) -> list[float | None]:
    out = []
    for (r0, a0), (r1, a1) in zip(zip(rings, amps), zip(rings[1:], amps[1:])):
        out.append(float(np.log(a1 / a0) / np.log(r1 / r0)) if a0 > 0 and a1 > 0 else None)
    return out


def cmd_field(cfg: RunConfig, out: Path, coat_first: bool = False) -> int:
    status = EXIT_OK
    if coat_first:
        _, result = _coat_one(cfg, cfg.h)
        cfg = RunConfig(**{**cfg.__dict__, "b": result.b.to_perturbation()})
        if not result.converged:
            status = EXIT_NO_CONVERGENCE
    pair = cfg.pair()
    pt, dens = solve(pair, cfg.material, cfg.n)
    rows, amps = field_samples(pair, dens, cfg.r_e)
    exps = decay_exponents(FIELD_RINGS, amps)
    _write_csv(out / "field.csv", ["x", "y", "l", "value"], rows, cfg.resolved())
    _write_json(out / "field.json", {
        "rings": [k * cfg.r_e for k in FIELD_RINGS],
        "rms_amplitude": amps,
        "decay_exponents": exps,
        "tensor": pt.to_dict(),
        "config": cfg.resolved(),
    })
    for k, a in zip(FIELD_RINGS, amps):
        print(f"|x| = {k:g} r_e: rms |u - a.x| = {a:.3e}")
    print("decay exponents:", ", ".join("n/a" if e is None else f"{e:.3f}" for e in exps))
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="neutralcoat", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("pt", "polarization tensor of the configured pair"),
                        ("coat", "Newton search for the coating coefficients"),
                        ("verify", "run the closed-form oracle suite"),
                        ("field", "sample u - a.x on exterior rings")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--N", type=int, dest="n", help="quadrature nodes per curve")
        p.add_argument("--mode", choices=MODES)
        if name == "coat":
            p.add_argument("--jobs", type=int, default=1, help="workers for a sweep")
        if name == "field":
            p.add_argument("--coat", action="store_true", help="coat first, then sample the field")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    out = Path(args.out)
    try:
        cfg = load_config(args.config, {"N": args.n, "mode": args.mode})
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "pt":
            return cmd_pt(cfg, out)
        if args.command == "coat":
            return cmd_coat(cfg, out, args.jobs)
        if args.command == "verify":
            return cmd_verify(cfg, out)
        return cmd_field(cfg, out, args.coat)
    except (GeometryError, NoNeutralPair, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
