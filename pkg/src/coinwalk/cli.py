"""
Command-line harness: run walks, tabulate limit densities, export data.

Subcommands
-----------
walk       distribution of the discrete walk at step n       -> CSV + manifest
cwalk      continuous-time snapshots at a list of times      -> CSVs + manifest
density    limit density table and law metadata              -> CSV + JSON
semigroup  dispersion/axis dump and positivity report        -> CSV + JSON
verify     full invariant suite, machine- and human-readable -> JSON, exit 2 on failure

Configuration is a JSON document (``--config``); the five bundled presets
(``fig3.1`` .. ``fig3.5``, via ``--preset``) reproduce the reference
superposition and snapshot experiments.  Complex numbers are written as
``[re, im]`` pairs; an initial state is either ``{"qubit": [a, b], "site": x}``
or ``{"sites": [[x, a, b], ...]}``.

Outputs are deterministic: CSV floats carry 17 significant digits and JSON is
key-sorted, so identical configs diff clean.  Exit codes: 0 ok, 1 validation
error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import continuous, limitlaw, semigroup, spectral, walk
from .core import (
    Coin,
    CoinWalkError,
    MomentumGrid,
    ValidationError,
    WaveFunction,
    hadamard_switched,
    normalize_phase,
    position_distribution,
)
from .verify import run_verification

__all__ = ["RunConfig", "PRESETS", "main", "parse_config", "serialize_config"]

ENV_OUT_DIR = "COINWALK_OUT"

_SQ2 = 1.0 / math.sqrt(2.0)

PRESETS: dict[str, dict] = {
    "fig3.1": {
        "mode": "walk",
        "coin": "hadamard-switched",
        "initial": {"qubit": [[0.0, 0.0], [1.0, 0.0]], "site": 10},
        "steps": 1000,
    },
    "fig3.2": {
        "mode": "walk",
        "coin": "hadamard-switched",
        "initial": {"qubit": [[1.0, 0.0], [0.0, 0.0]], "site": -10},
        "steps": 1000,
    },
    "fig3.3": {
        "mode": "walk",
        "coin": "hadamard-switched",
        "initial": {
            "sites": [[10, [0.0, 0.0], [_SQ2, 0.0]], [-10, [_SQ2, 0.0], [0.0, 0.0]]]
        },
        "steps": 1000,
    },
    "fig3.4": {
        "mode": "walk",
        "coin": "hadamard-switched",
        "initial": {"qubit": [[_SQ2, 0.0], [_SQ2, 0.0]], "site": 0},
        "steps": 1000,
    },
    "fig3.5": {
        "mode": "cwalk",
        "coin": "hadamard-switched",
        "initial": {
            "sites": [[10, [0.0, 0.0], [_SQ2, 0.0]], [-10, [_SQ2, 0.0], [0.0, 0.0]]]
        },
        "times": [99.25, 99.5, 99.75, 100.0],
    },
}

_MODES = ("walk", "cwalk", "density", "semigroup", "verify")


@dataclass(frozen=True)
class RunConfig:
    """A validated run description; round-trips through JSON unchanged."""

    mode: str
    coin_spec: object = "hadamard-switched"
    initial_spec: dict | None = None
    steps: int | None = None
    times: tuple[float, ...] | None = None
    time: float = 1.0
    grid_size: int | None = None
    y_points: int = 201
    seed: int = 0
    out_dir: str | None = None
    trajectory: bool = False
    quick: bool = False

    def coin(self) -> Coin:
        return _parse_coin(self.coin_spec)

    def initial_state(self) -> WaveFunction:
        if self.initial_spec is None:
            raise ValidationError("config field 'initial': required for this mode")
        return _parse_initial(self.initial_spec)


def _as_complex(value, field_name: str) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) for v in value)
    ):
        raise ValidationError(
            f"config field '{field_name}': complex numbers are [re, im] pairs, got {value!r}"
        )
    return complex(float(value[0]), float(value[1]))


def _parse_coin(spec) -> Coin:
    if spec == "hadamard-switched":
        return hadamard_switched()
    if isinstance(spec, str):
        raise ValidationError(f"config field 'coin': unknown preset {spec!r}")
    if not isinstance(spec, (list, tuple)) or len(spec) != 2:
        raise ValidationError("config field 'coin': expected a 2x2 matrix of [re, im] pairs")
    rows = []
    for i, row in enumerate(spec):
        if not isinstance(row, (list, tuple)) or len(row) != 2:
            raise ValidationError("config field 'coin': expected a 2x2 matrix of [re, im] pairs")
        rows.append([_as_complex(entry, f"coin[{i}][{j}]") for j, entry in enumerate(row)])
    try:
        return normalize_phase(np.array(rows))
    except ValidationError as exc:
        raise ValidationError(f"config field 'coin': {exc}") from exc


def _parse_initial(spec) -> WaveFunction:
    if not isinstance(spec, dict):
        raise ValidationError("config field 'initial': expected an object")
    if "qubit" in spec:
        pair = spec["qubit"]
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValidationError("config field 'initial.qubit': expected [a, b]")
        a = _as_complex(pair[0], "initial.qubit[0]")
        b = _as_complex(pair[1], "initial.qubit[1]")
        site = spec.get("site", 0)
        if not isinstance(site, int):
            raise ValidationError("config field 'initial.site': expected an integer")
        psi = WaveFunction.qubit(a, b, site=site)
    elif "sites" in spec:
        entries = spec["sites"]
        if not isinstance(entries, (list, tuple)) or not entries:
            raise ValidationError("config field 'initial.sites': expected a nonempty list")
        pairs = []
        for entry in entries:
            if not isinstance(entry, (list, tuple)) or len(entry) != 3 or not isinstance(entry[0], int):
                raise ValidationError(
                    "config field 'initial.sites': entries are [x, [re, im], [re, im]]"
                )
            pairs.append(
                (
                    entry[0],
                    (
                        _as_complex(entry[1], "initial.sites[..][1]"),
                        _as_complex(entry[2], "initial.sites[..][2]"),
                    ),
                )
            )
        psi = WaveFunction.from_sites(pairs)
    else:
        raise ValidationError("config field 'initial': needs 'qubit' or 'sites'")
    nrm = psi.norm()
    if abs(nrm - 1.0) > 1e-8:
        raise ValidationError(f"config field 'initial': state norm is {nrm!r}, expected 1")
    return psi


def parse_config(data: dict) -> RunConfig:
    """Validate a raw config dict; error messages name the offending field."""
    if not isinstance(data, dict):
        raise ValidationError("config: expected a JSON object")
    known = {
        "mode", "coin", "initial", "steps", "times", "time",
        "grid", "y_points", "seed", "out", "trajectory", "quick",
    }
    for key in data:
        if key not in known:
            raise ValidationError(f"config field {key!r}: unknown field")
    mode = data.get("mode")
    if mode not in _MODES:
        raise ValidationError(f"config field 'mode': expected one of {_MODES}, got {mode!r}")

    def _opt_int(name, minimum, default=None):
        value = data.get(name, default)
        if value is None:
            return None
        if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
            raise ValidationError(f"config field {name!r}: expected an integer >= {minimum}")
        return value

    steps = _opt_int("steps", 0)
    grid_size = _opt_int("grid", 1)
    y_points = _opt_int("y_points", 3, default=201)
    seed = _opt_int("seed", 0, default=0)

    times = data.get("times")
    if times is not None:
        if not isinstance(times, (list, tuple)) or not times or not all(
            isinstance(t, (int, float)) and not isinstance(t, bool) and t >= 0 for t in times
        ):
            raise ValidationError("config field 'times': expected a list of nonnegative numbers")
        if any(b <= a for a, b in zip(times, list(times)[1:])):
            raise ValidationError("config field 'times': must be strictly ascending")
        times = tuple(float(t) for t in times)

    time_value = data.get("time", 1.0)
    if not isinstance(time_value, (int, float)) or isinstance(time_value, bool) or time_value < 0:
        raise ValidationError("config field 'time': expected a nonnegative number")

    out_dir = data.get("out")
    if out_dir is not None and not isinstance(out_dir, str):
        raise ValidationError("config field 'out': expected a string path")
    trajectory = data.get("trajectory", False)
    if not isinstance(trajectory, bool):
        raise ValidationError("config field 'trajectory': expected a boolean")
    quick = data.get("quick", False)
    if not isinstance(quick, bool):
        raise ValidationError("config field 'quick': expected a boolean")

    config = RunConfig(
        mode=mode,
        coin_spec=data.get("coin", "hadamard-switched"),
        initial_spec=data.get("initial"),
        steps=steps,
        times=times,
        time=float(time_value),
        grid_size=grid_size,
        y_points=y_points,
        seed=seed,
        out_dir=out_dir,
        trajectory=trajectory,
        quick=quick,
    )
    # fail fast on malformed coin/initial rather than mid-run
    config.coin()
    if config.initial_spec is not None:
        config.initial_state()
    if mode == "walk" and steps is None:
        raise ValidationError("config field 'steps': required for mode 'walk'")
    if mode == "cwalk" and times is None:
        raise ValidationError("config field 'times': required for mode 'cwalk'")
    if mode in ("walk", "cwalk", "density") and config.initial_spec is None:
        raise ValidationError(f"config field 'initial': required for mode {mode!r}")
    return config


def serialize_config(config: RunConfig) -> dict:
    """The JSON form of a config; ``parse_config`` inverts it exactly."""
    data: dict = {"mode": config.mode, "coin": config.coin_spec}
    if config.initial_spec is not None:
        data["initial"] = config.initial_spec
    if config.steps is not None:
        data["steps"] = config.steps
    if config.times is not None:
        data["times"] = list(config.times)
    if config.mode == "semigroup":
        data["time"] = config.time
    if config.grid_size is not None:
        data["grid"] = config.grid_size
    data["y_points"] = config.y_points
    data["seed"] = config.seed
    if config.out_dir is not None:
        data["out"] = config.out_dir
    if config.trajectory:
        data["trajectory"] = True
    if config.quick:
        data["quick"] = True
    return data


# --------------------------------------------------------------------------
# output helpers
# --------------------------------------------------------------------------


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _write_csv(path: Path, header: str, rows) -> None:
    lines = [header]
    lines.extend(rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _resolve_out_dir(config: RunConfig, override: str | None) -> Path:
    # precedence: --out flag, then the environment override, then the config
    chosen = override or os.environ.get(ENV_OUT_DIR) or config.out_dir or "out"
    path = Path(chosen)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _coin_as_rows(coin: Coin) -> list[list[list[float]]]:
    return [
        [[c.real, c.imag] for c in (coin.l1, coin.l2)],
        [[c.real, c.imag] for c in (coin.r1, coin.r2)],
    ]


def _distribution_rows(psi: WaveFunction):
    p = position_distribution(psi)
    return [f"{x},{_fmt(v)}" for x, v in zip(psi.sites, p)]


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_walk(config: RunConfig, out_dir: Path) -> list[Path]:
    coin = config.coin()
    psi0 = config.initial_state()
    run = walk.WalkRun(coin, psi0, config.steps, store_trajectory=config.trajectory)
    written = []
    if run.store_trajectory:
        rows = []
        final = psi0
        for i, psi in walk.iter_evolution(run):
            final = psi
            rows.extend(
                f"{i},{x},{_fmt(v)}"
                for x, v in zip(psi.sites, position_distribution(psi))
            )
        trajectory_path = out_dir / "trajectory.csv"
        _write_csv(trajectory_path, "n,x,p", rows)
        written.append(trajectory_path)
    else:
        final = walk.evolve(run)
    dist_path = out_dir / f"distribution_n{config.steps}.csv"
    _write_csv(dist_path, "x,p", _distribution_rows(final))
    written.append(dist_path)
    manifest = out_dir / "manifest.json"
    _write_json(
        manifest,
        {
            "mode": "walk",
            "coin": _coin_as_rows(coin),
            "steps": config.steps,
            "norm": final.norm(),
            "support": [final.x_min, final.x_max],
            "files": [p.name for p in written],
            "config": serialize_config(config),
        },
    )
    written.append(manifest)
    return written


def cmd_cwalk(config: RunConfig, out_dir: Path) -> list[Path]:
    coin = config.coin()
    psi0 = config.initial_state()
    grid = MomentumGrid(config.grid_size) if config.grid_size else None
    run = continuous.ContinuousRun(coin, psi0, config.times, grid=grid)
    written = []
    norms = {}
    for t, psi in continuous.snapshots(run):
        path = out_dir / f"snapshot_t{t:g}.csv"
        _write_csv(path, "x,p", _distribution_rows(psi))
        written.append(path)
        norms[f"{t:g}"] = psi.norm()
    manifest = out_dir / "manifest.json"
    _write_json(
        manifest,
        {
            "mode": "cwalk",
            "coin": _coin_as_rows(coin),
            "times": list(config.times),
            "norms": norms,
            "files": [p.name for p in written],
            "config": serialize_config(config),
        },
    )
    written.append(manifest)
    return written


def cmd_density(config: RunConfig, out_dir: Path) -> list[Path]:
    coin = config.coin()
    psi0 = config.initial_state()
    law = limitlaw.weak_limit_law(coin, psi0)
    written = []
    meta: dict = {"kind": law.kind, "config": serialize_config(config)}
    if law.kind == "density":
        lo, hi = law.support()
        ys = np.linspace(lo, hi, config.y_points + 2)[1:-1]
        rho = law.pdf(ys)
        path = out_dir / "density.csv"
        _write_csv(path, "y,rho", [f"{_fmt(y)},{_fmt(r)}" for y, r in zip(ys, rho)])
        written.append(path)
        meta.update(
            {
                "support": [lo, hi],
                "beta": law.beta,
                "mass": law.mass(),
                "mean": law.mean(),
            }
        )
    else:
        meta.update(
            {
                "atoms": [
                    [float(a), float(w)]
                    for a, w in zip(law.atoms.atoms, law.atoms.weights)
                ],
                "routing": "degenerate coin: point-mass law emitted instead of a density",
            }
        )
    law_path = out_dir / "law.json"
    _write_json(law_path, meta)
    written.append(law_path)
    return written


def cmd_semigroup(config: RunConfig, out_dir: Path) -> list[Path]:
    coin = config.coin()
    grid = MomentumGrid(config.grid_size or 256)
    t = config.time
    g, h = spectral.dispersion(grid.nodes, coin)
    rows = [
        f"{_fmt(k)},{_fmt(gv)},{_fmt(h1)},{_fmt(h2)},{_fmt(h3)},{_fmt(2.0 * gv * t)}"
        for k, gv, (h1, h2, h3) in zip(grid.nodes, g, h)
    ]
    flow_path = out_dir / f"flow_t{t:g}.csv"
    _write_csv(flow_path, "k,gamma,h1,h2,h3,angle", rows)

    rng = np.random.default_rng(config.seed)
    psd = semigroup.random_psd_observable(grid, rng)
    report = semigroup.positivity_check(psd, t, coin)
    herm = semigroup.random_hermitian_observable(grid, rng)
    evolved = semigroup.heisenberg_evolve(herm, t, coin).matrices()
    mats = herm.matrices()
    residual = 0.0
    for i in range(0, grid.size, max(1, grid.size // 32)):
        direct = semigroup.conjugate_evolve(grid.nodes[i], t, mats[i], coin)
        residual = max(residual, float(np.abs(direct - evolved[i]).max()))
    report_path = out_dir / "semigroup_report.json"
    _write_json(
        report_path,
        {
            "mode": "semigroup",
            "time": t,
            "grid": grid.size,
            "seed": config.seed,
            "positivity": report,
            "flow_vs_conjugation_max_residual": residual,
            "config": serialize_config(config),
        },
    )
    return [flow_path, report_path]


def cmd_verify(config: RunConfig, out_dir: Path) -> tuple[list[Path], bool]:
    results = run_verification(seed=config.seed, quick=config.quick)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name:<32} residual={r.residual:.3e} tol={r.tolerance:.1e} {r.detail}")
    passed = all(r.passed for r in results)
    report_path = out_dir / "verify_report.json"
    _write_json(
        report_path,
        {
            "mode": "verify",
            "seed": config.seed,
            "quick": config.quick,
            "passed": passed,
            "checks": [r.to_dict() for r in results],
        },
    )
    print(f"{'OK' if passed else 'FAILED'}: {sum(r.passed for r in results)}/{len(results)} checks")
    return [report_path], passed


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------


def _load_config(args, mode: str) -> RunConfig:
    if args.config and args.preset:
        raise ValidationError("give either --config or --preset, not both")
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ValidationError(f"config file not found: {args.config}")
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config is not valid JSON: {exc}")
    elif args.preset:
        if args.preset not in PRESETS:
            raise ValidationError(
                f"unknown preset {args.preset!r}; available: {sorted(PRESETS)}"
            )
        # a preset bundles coin + initial state; the subcommand decides what
        # to do with them, so its mode wins
        data = dict(PRESETS[args.preset])
        data["mode"] = mode
    else:
        data = {}
    data.setdefault("mode", mode)
    if data["mode"] != mode:
        raise ValidationError(
            f"config field 'mode': {data['mode']!r} does not match subcommand {mode!r}"
        )
    if args.grid is not None:
        data["grid"] = args.grid
    if args.seed is not None:
        data["seed"] = args.seed
    if getattr(args, "steps", None) is not None:
        data["steps"] = args.steps
    if getattr(args, "trajectory", False):
        data["trajectory"] = True
    if getattr(args, "quick", False):
        data["quick"] = True
    return parse_config(data)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coinwalk", description="one-dimensional coined quantum walk toolkit"
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in _MODES:
        p = sub.add_parser(mode, help=f"run the {mode} command")
        p.add_argument("--config", help="path to a JSON config")
        p.add_argument("--preset", help=f"bundled preset name ({', '.join(sorted(PRESETS))})")
        p.add_argument("--out", help=f"output directory (or ${ENV_OUT_DIR})")
        p.add_argument("--grid", type=int, help="momentum grid size override")
        p.add_argument("--seed", type=int, help="seed for randomised checks")
        if mode == "walk":
            p.add_argument("--steps", type=int, help="step count override")
            p.add_argument("--trajectory", action="store_true", help="export every step")
        if mode == "verify":
            p.add_argument("--quick", action="store_true", help="reduced-size invariants")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _load_config(args, args.mode)
        out_dir = _resolve_out_dir(config, args.out)
        if args.mode == "walk":
            files = cmd_walk(config, out_dir)
        elif args.mode == "cwalk":
            files = cmd_cwalk(config, out_dir)
        elif args.mode == "density":
            files = cmd_density(config, out_dir)
        elif args.mode == "semigroup":
            files = cmd_semigroup(config, out_dir)
        else:
            files, passed = cmd_verify(config, out_dir)
            if not passed:
                return 2
        for path in files:
            print(f"wrote {path}")
        return 0
    except (ValidationError, CoinWalkError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
