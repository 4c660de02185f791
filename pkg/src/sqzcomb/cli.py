"""Command-line front end.

Settings are resolved in increasing priority from built-in defaults, an INI
file given with ``--config`` (sections ``[RunConfig]``, ``[GasConditions]``,
``[CombConfig]``), ``SQZCOMB_<KEY>`` environment variables and finally the
command-line flags.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 validation
failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import hashlib
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .comb import CombConfig, squeeze_db_to_s, tooth_amplitudes
from .errors import HitranError, SqzCombError
from .hitran import read_par, select_window
from .inversion import PhaseSweepTrace, calibrate_kappa, invert_trace
from .lineshape import (
    GasConditions,
    ToothResponse,
    complex_transmission,
    hz_to_wavenumber,
    line_center,
    sample_teeth,
)
from .montecarlo import RNG_ALGORITHM, moment_suite, noisy_trace
from .response import classical_power_terms, snr_table, variance

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_VALIDATION = 4

ENV_PREFIX = "SQZCOMB_"
COMMANDS = ("line-profile", "comb", "spectrum", "invert", "validate", "calibrate")


class ConfigError(SqzCombError):
    pass


class DataError(SqzCombError):
    pass


def default_line_file() -> str:
    return str(resources.files("sqzcomb") / "data" / "c2h2_p9.par")


@dataclass
class RunConfig:
    line_file: str = field(default_factory=default_line_file)
    molecule_id: int = 26
    nu_min: float = 6530.0
    nu_max: float = 6540.0
    # GasConditions
    pressure_total: float = 1.0
    mole_fraction: float = 1e-3
    temperature: float = 296.0
    path_length: float = 1.0
    # CombConfig; carrier_nu = None puts the carrier on the line centre
    carrier_nu: float | None = None
    omega_mod_hz: float = 500e6
    depth: float = 2.0
    n_teeth: int = 33
    squeeze_db: list[float] = field(default_factory=lambda: [0.0, 5.0, 10.0, 15.0])
    squeeze_theta: float = 0.0
    alpha_mag: float = 1e3
    beta_mag: float = 1e3
    eta_d: float = 1.0
    # sweeps, Monte Carlo and output
    lo_points: int = 64
    profile_points: int = 401
    profile_halfwidth: float = 0.4
    seed: int = 20231
    shots: int = 100_000
    points: int = 20
    noiseless: bool = False
    delta_phi: float | None = None
    output: str | None = None
    format: str = "csv"

    def gas(self) -> GasConditions:
        return GasConditions(
            pressure_total=self.pressure_total,
            mole_fraction=self.mole_fraction,
            temperature=self.temperature,
            path_length=self.path_length,
        )

    def comb(self, carrier_nu: float, squeeze_db: float) -> CombConfig:
        return CombConfig(
            carrier_nu=carrier_nu,
            omega_mod_hz=self.omega_mod_hz,
            depth=self.depth,
            n_teeth=self.n_teeth,
            squeeze_s=squeeze_db_to_s(squeeze_db),
            squeeze_theta=self.squeeze_theta,
            alpha_mag=self.alpha_mag,
            beta_mag=self.beta_mag,
            eta_d=self.eta_d,
        )

    def digest(self) -> str:
        payload = json.dumps(dataclasses.asdict(self), sort_keys=True, default=str)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_SECTIONS = ("RunConfig", "GasConditions", "CombConfig")


def _coerce(name: str, raw):
    if raw is None:
        return None
    default = RunConfig.__dataclass_fields__[name]
    kind = default.type
    text = str(raw).strip()
    try:
        if name == "squeeze_db":
            if isinstance(raw, (list, tuple)):
                return [float(v) for v in raw]
            return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]
        if text.lower() in ("none", "") and "None" in str(kind):
            return None
        if "bool" in str(kind):
            if text.lower() in ("1", "true", "yes", "on"):
                return True
            if text.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if "int" in str(kind) and "float" not in str(kind):
            try:
                return int(text)
            except ValueError:
                as_float = float(text)
                if not as_float.is_integer():
                    raise
                return int(as_float)
        if "float" in str(kind):
            return float(text)
        return text
    except ValueError:
        raise ConfigError(f"bad value for {name}: {raw!r}") from None


def _apply(cfg: RunConfig, values: dict, origin: str) -> None:
    for key, raw in values.items():
        name = key.strip().lower().replace("-", "_")
        if name not in _FIELDS:
            raise ConfigError(f"unknown setting {key!r} in {origin}")
        setattr(cfg, name, _coerce(name, raw))


def load_config(path: str | None, env=None, overrides: dict | None = None) -> RunConfig:
    cfg = RunConfig()
    if path is not None:
        if not os.path.isfile(path):
            raise ConfigError(f"config file not found: {path}")
        parser = configparser.ConfigParser()
        try:
            parser.read(path)
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from None
        for section in parser.sections():
            if section not in _SECTIONS:
                raise ConfigError(f"unknown section [{section}] in {path}")
            _apply(cfg, dict(parser.items(section)), path)
    env = os.environ if env is None else env
    from_env = {k[len(ENV_PREFIX):]: v for k, v in env.items() if k.startswith(ENV_PREFIX)}
    _apply(cfg, from_env, "environment")
    if overrides:
        _apply(cfg, {k: v for k, v in overrides.items() if v is not None}, "command line")
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig) -> None:
    if not os.path.isfile(cfg.line_file):
        raise ConfigError(f"line file not found: {cfg.line_file}")
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg.format!r}")
    if not cfg.nu_min < cfg.nu_max:
        raise ConfigError("nu_min must be below nu_max")
    if cfg.shots < 1 or cfg.lo_points < 16 or cfg.profile_points < 2 or cfg.points < 1:
        raise ConfigError("shots >= 1, lo_points >= 16, profile_points >= 2 and points >= 1 required")
    if not 0 <= cfg.seed < 2**64:
        raise ConfigError("seed must be an unsigned 64-bit integer")
    if any(db < 0 for db in cfg.squeeze_db):
        raise ConfigError("squeezing levels must be >= 0 dB")
    try:
        cfg.gas()
        cfg.comb(cfg.carrier_nu or 1.0, cfg.squeeze_db[0] if cfg.squeeze_db else 0.0)
    except SqzCombError as exc:
        raise ConfigError(str(exc)) from None


def _load_line(cfg: RunConfig):
    try:
        lines = read_par(cfg.line_file)
    except HitranError as exc:
        raise DataError(str(exc)) from None
    window = select_window(lines, cfg.nu_min, cfg.nu_max, cfg.molecule_id)
    if not len(window):
        raise DataError(
            f"no line found for molecule {cfg.molecule_id} in [{cfg.nu_min}, {cfg.nu_max}] cm^-1"
        )
    gas = cfg.gas()
    mid = 0.5 * (cfg.nu_min + cfg.nu_max) if cfg.carrier_nu is None else cfg.carrier_nu
    line = window.nearest(mid)
    carrier = line_center(line, gas) if cfg.carrier_nu is None else cfg.carrier_nu
    return line, gas, carrier


# -- commands ---------------------------------------------------------------


def cmd_line_profile(cfg: RunConfig) -> tuple[list[dict], dict]:
    line, gas, carrier = _load_line(cfg)
    spacing = hz_to_wavenumber(cfg.omega_mod_hz)
    centre = line_center(line, gas)
    rows = []
    for nu in np.linspace(centre - cfg.profile_halfwidth, centre + cfg.profile_halfwidth, cfg.profile_points):
        t = complex_transmission(line, gas, float(nu))
        rows.append({"kind": "profile", "n": "", "nu": float(nu), "eta": t.eta, "phi": t.phi})
    n_max = (cfg.n_teeth - 1) // 2
    for n in range(-n_max, n_max + 1):
        nu = carrier + n * spacing
        t = complex_transmission(line, gas, nu)
        rows.append({"kind": "tooth", "n": n, "nu": nu, "eta": t.eta, "phi": t.phi})
    for row in rows:
        row["tooth_spacing"] = spacing
    meta = {"line_nu0": line.nu0, "line_center": centre, "carrier_nu": carrier, "tooth_spacing": spacing}
    return rows, meta


def cmd_comb(cfg: RunConfig) -> tuple[list[dict], dict]:
    comb = cfg.comb(cfg.carrier_nu or 1.0, 0.0)
    rows = []
    for tooth in tooth_amplitudes(comb):
        entries = [(tooth.n, tooth.amplitude)]
        if tooth.n:
            entries.insert(0, (-tooth.n, tooth.lower_amplitude))
        for n, amp in entries:
            if amp == 0.0:
                continue
            rows.append({"n": n, "amplitude": amp, "power": amp * amp})
    rows.sort(key=lambda r: r["n"])
    return rows, {"depth": comb.depth, "n_teeth": comb.n_teeth}


def cmd_spectrum(cfg: RunConfig) -> tuple[list[dict], dict]:
    line, gas, carrier = _load_line(cfg)
    rows = []
    teeth = None
    for db in cfg.squeeze_db:
        comb = cfg.comb(carrier, db)
        if teeth is None:
            teeth = sample_teeth(line, gas, comb)
        rows.extend(r.as_dict() for r in snr_table(teeth, comb))
    worst = max((abs(t.delta_phi) for t in teeth), default=0.0)
    return rows, {"carrier_nu": carrier, "squeeze_db": cfg.squeeze_db, "max_abs_delta_phi": worst}


def _phase_grid(points: int) -> np.ndarray:
    return np.arange(points) * (2.0 * math.pi / points)


def _sweep(tooth: ToothResponse, comb: CombConfig, phases, seed, cfg: RunConfig, delta_phi):
    """Measured trace and its noise-floor estimate (zero when noiseless)."""
    if cfg.noiseless:
        kappa = comb.kappa(tooth.n)
        powers = classical_power_terms(
            tooth.sqrt_eta_plus, tooth.sqrt_eta_minus, tooth.n, kappa, phases, delta_phi, warn=False
        )
        return PhaseSweepTrace(phases, powers, tooth.n), 0.0
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    seeds = seed.generate_state(2, np.uint64)
    trace = noisy_trace(tooth, comb, phases, int(seeds[0]), cfg.shots, delta_phi=delta_phi)
    # probe blocked: the same sweep without coherent amplitude measures the floor
    dark = dataclasses.replace(comb, alpha_mag=0.0)
    floor = noisy_trace(tooth, dark, phases, int(seeds[1]), cfg.shots, delta_phi=delta_phi)
    return trace, float(floor.powers.mean())


def _calibration(cfg: RunConfig, comb: CombConfig, phases, seeds) -> list[float]:
    kappas = []
    for n in range(comb.n_max + 1):
        empty = ToothResponse(n=n, sqrt_eta_plus=1.0, sqrt_eta_minus=1.0)
        trace, floor = _sweep(empty, comb, phases, seeds[n], cfg, 0.0)
        kappas.append(calibrate_kappa(trace, floor))
    return kappas


def _seed_tree(cfg: RunConfig, n_teeth: int):
    cal, meas = np.random.SeedSequence(cfg.seed).spawn(2)
    return cal.spawn(n_teeth), meas.spawn(n_teeth)


def cmd_calibrate(cfg: RunConfig) -> tuple[list[dict], dict]:
    _, _, carrier = _load_line(cfg)
    comb = cfg.comb(carrier, cfg.squeeze_db[0] if cfg.squeeze_db else 0.0)
    cal_seeds, _ = _seed_tree(cfg, comb.n_max + 1)
    kappas = _calibration(cfg, comb, _phase_grid(cfg.lo_points), cal_seeds)
    rows = []
    for n, k in enumerate(kappas):
        nominal = comb.kappa(n)
        rows.append({"n": n, "kappa": k, "kappa_nominal": nominal, "rel_error": k / nominal - 1.0 if nominal else math.nan})
    return rows, {"noiseless": cfg.noiseless, "shots": cfg.shots}


def cmd_invert(cfg: RunConfig) -> tuple[list[dict], dict]:
    line, gas, carrier = _load_line(cfg)
    comb = cfg.comb(carrier, cfg.squeeze_db[0] if cfg.squeeze_db else 0.0)
    teeth = sample_teeth(line, gas, comb)
    phases = _phase_grid(cfg.lo_points)
    cal_seeds, meas_seeds = _seed_tree(cfg, comb.n_max + 1)
    kappas = _calibration(cfg, comb, phases, cal_seeds)
    # the sideband farther from the line transmits more
    upper_brighter = carrier >= line_center(line, gas)
    rows = []
    for tooth, kappa, seed in zip(teeth, kappas, meas_seeds):
        dphi = tooth.delta_phi if cfg.delta_phi is None else cfg.delta_phi
        trace, floor = _sweep(tooth, comb, phases, seed, cfg, dphi)
        if kappa <= 0:
            continue
        rec = invert_trace(trace, kappa, floor, upper_brighter=upper_brighter)
        rows.append(
            {
                "n": tooth.n,
                "kappa": kappa,
                "delta_phi": dphi,
                "sqrt_eta_plus_true": tooth.sqrt_eta_plus,
                "sqrt_eta_minus_true": tooth.sqrt_eta_minus,
                "sqrt_eta_plus": rec.sqrt_eta_plus,
                "sqrt_eta_minus": rec.sqrt_eta_minus,
                "error_plus": rec.sqrt_eta_plus - tooth.sqrt_eta_plus,
                "error_minus": rec.sqrt_eta_minus - tooth.sqrt_eta_minus,
                "clamped": rec.clamped,
            }
        )
    return rows, {"noiseless": cfg.noiseless, "shots": cfg.shots, "carrier_nu": carrier}


def _corrupted_variance(tooth, comb):
    return 1.5 * variance(tooth, comb)


def cmd_validate(cfg: RunConfig, inject_fault: bool = False) -> tuple[list[dict], dict]:
    results = moment_suite(
        seed=cfg.seed,
        points=cfg.points,
        count=cfg.shots,
        variance_fn=_corrupted_variance if inject_fault else None,
    )
    rows = []
    for i, r in enumerate(results):
        c = r.check
        rows.append(
            {
                "point": i,
                "n": r.tooth.n,
                "depth": r.comb.depth,
                "squeeze_s": r.comb.squeeze_s,
                "eta_d": r.comb.eta_d,
                "eta_plus": r.tooth.eta_plus,
                "eta_minus": r.tooth.eta_minus,
                "mean_expected": c.expected_mean,
                "mean_sample": c.sample_mean,
                "z_mean": c.z_mean,
                "var_expected": c.expected_var,
                "var_sample": c.sample_var,
                "z_var": c.z_var,
                "passed": c.passed(3.0),
            }
        )
    return rows, {"points": cfg.points, "shots": cfg.shots, "all_passed": all(r["passed"] for r in rows)}


# -- output -----------------------------------------------------------------


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def render(rows: list[dict], meta: dict, fmt: str) -> str:
    if fmt == "json":
        doc = {"metadata": meta, "rows": [{k: _jsonable(v) for k, v in r.items()} for r in rows]}
        return json.dumps(doc, indent=1, default=_jsonable) + "\n"
    buf = io.StringIO()
    for key, value in meta.items():
        buf.write(f"# {key}: {json.dumps(value, default=_jsonable)}\n")
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH")
    common.add_argument("--output", metavar="DIR", help="write <command>.<format> here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--seed", type=int, metavar="U64")
    common.add_argument("--shots", type=int, metavar="N")
    common.add_argument("--squeeze-db", metavar="LIST", help="comma-separated squeezing levels in dB")
    common.add_argument("--mod-depth", type=float, metavar="M")
    common.add_argument("--mod-freq-hz", type=float, metavar="OMEGA")
    common.add_argument("--teeth", type=int, metavar="N")
    common.add_argument("--line-file", metavar="PAR")
    common.add_argument("--mole-fraction", type=float)
    common.add_argument("--path-length", type=float, metavar="CM")
    common.add_argument("--carrier-nu", type=float, metavar="CM-1")

    parser = argparse.ArgumentParser(prog="sqzcomb", description="Squeezed frequency-comb absorption spectroscopy model")
    parser.add_argument("--version", action="version", version=f"sqzcomb {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("line-profile", parents=[common], help="transmission and phase across the line")
    sub.add_parser("comb", parents=[common], help="Bessel tooth amplitudes")
    sub.add_parser("spectrum", parents=[common], help="power, noise and SNR per tooth and squeezing level")
    p = sub.add_parser("invert", parents=[common], help="recover sideband transmissions from LO sweeps")
    p.add_argument("--noiseless", action="store_true")
    p.add_argument("--delta-phi", type=float, help="override the dispersion difference of every tooth")
    p = sub.add_parser("calibrate", parents=[common], help="measure kappa with an empty cell")
    p.add_argument("--noiseless", action="store_true")
    p = sub.add_parser("validate", parents=[common], help="Monte Carlo moment-matching suite")
    p.add_argument("--points", type=int)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {
        "output": args.output,
        "format": args.format,
        "seed": args.seed,
        "shots": args.shots,
        "squeeze_db": args.squeeze_db,
        "depth": args.mod_depth,
        "omega_mod_hz": args.mod_freq_hz,
        "n_teeth": args.teeth,
        "line_file": args.line_file,
        "mole_fraction": args.mole_fraction,
        "path_length": args.path_length,
        "carrier_nu": args.carrier_nu,
        "noiseless": True if getattr(args, "noiseless", False) else None,
        "delta_phi": getattr(args, "delta_phi", None),
        "points": getattr(args, "points", None),
    }
    try:
        cfg = load_config(args.config, overrides=overrides)
    except (ConfigError, SqzCombError) as exc:
        print(f"sqzcomb: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    handlers = {
        "line-profile": cmd_line_profile,
        "comb": cmd_comb,
        "spectrum": cmd_spectrum,
        "invert": cmd_invert,
        "calibrate": cmd_calibrate,
        "validate": lambda c: cmd_validate(c, inject_fault=args.inject_fault),
    }
    try:
        rows, meta = handlers[args.command](cfg)
    except (DataError, SqzCombError) as exc:
        print(f"sqzcomb: data error: {exc}", file=sys.stderr)
        return EXIT_DATA

    header = {
        "version": __version__,
        "command": args.command,
        "config_hash": cfg.digest(),
        "seed": cfg.seed,
        "rng": RNG_ALGORITHM,
        "config": dataclasses.asdict(cfg),
    }
    header.update(meta)
    text = render(rows, header, cfg.format)
    if cfg.output:
        out_dir = Path(cfg.output)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / f"{args.command}.{cfg.format}").write_text(text)
    else:
        sys.stdout.write(text)

    if args.command == "validate":
        for row in rows:
            status = "PASS" if row["passed"] else "FAIL"
            print(
                f"[{status}] point {row['point']:2d} n={row['n']:2d} M={row['depth']:g} "
                f"z_mean={row['z_mean']:+.2f} z_var={row['z_var']:+.2f}",
                file=sys.stderr,
            )
        if not meta["all_passed"]:
            return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
