"""Config parsing, experiment presets, and CSV/manifest emission.

Config files are plain text, one `key = value` per line with `#`
comments.  Keys: model, alpha, nt, nr, code, constellation, snr_db,
receivers, seed, min_errors, max_trials, workers.  Unknown keys are
errors; missing keys take the documented defaults.

The CSV schema is fixed:
    kind,receiver,model,alpha,nt,nr,snr_db,ber,ci_lo,ci_hi,trials,bit_errors
with kind either "sim" or "theory" (theory rows leave trials/bit_errors
empty), floats printed with 9 significant digits and rows sorted by
(receiver, snr_db).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .montecarlo import BerCurve, SimConfig, run_sweep
from .stable import NoiseModel
from .theory import pep_asymptote

CSV_HEADER = "kind,receiver,model,alpha,nt,nr,snr_db,ber,ci_lo,ci_hi,trials,bit_errors"

_DEFAULTS = {
    "model": "I",
    "alpha": 1.43,
    "nr": 1,
    "code": "alamouti",
    "constellation": "bpsk",
    "snr_db": (10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0),
    "receivers": ("gar", "mdr", "ml", "aor"),
    "seed": 0,
    "min_errors": 200,
    "max_trials": 10_000_000,
    "workers": 1,
}

_KNOWN_KEYS = ("model", "alpha", "nt", "nr", "code", "constellation", "snr_db",
               "receivers", "seed", "min_errors", "max_trials", "workers")


class ConfigError(ValueError):
    """Malformed or invalid sweep configuration."""


@dataclass(frozen=True)
class TheoryCurve:
    """Closed-form PEP asymptote evaluated over an SNR grid."""

    receiver: str
    model: NoiseModel
    alpha: float
    n_t: int
    n_r: int
    snr_grid_db: tuple[float, ...]
    values: tuple[float, ...]


def theory_curve(
    receiver: str,
    model: NoiseModel,
    n_t: int,
    n_r: int,
    alpha: float,
    snr_grid_db,
) -> TheoryCurve:
    """Evaluate the (G_c * rho)^(-G_d) asymptote on a dB grid."""
    asym = pep_asymptote(receiver, model, n_t, n_r, alpha)
    grid = tuple(float(s) for s in snr_grid_db)
    rho = 10.0 ** (np.array(grid) / 10.0)
    return TheoryCurve(
        receiver=receiver,
        model=model,
        alpha=alpha,
        n_t=n_t,
        n_r=n_r,
        snr_grid_db=grid,
        values=tuple(float(v) for v in asym.evaluate(rho)),
    )


def _parse_value(key: str, raw: str, line_no: int):
    try:
        if key == "model":
            if raw not in ("I", "II"):
                raise ValueError("must be I or II")
            return NoiseModel(raw)
        if key == "alpha":
            return float(raw)
        if key in ("nt", "nr", "seed", "min_errors", "max_trials", "workers"):
            return int(raw)
        if key in ("code", "constellation"):
            return raw.lower()
        if key == "snr_db":
            return tuple(float(v) for v in raw.split(","))
        if key == "receivers":
            return tuple(v.strip().lower() for v in raw.split(","))
    except ValueError as exc:
        raise ConfigError(f"line {line_no}: bad value for {key}: {raw!r} ({exc})") from None
    raise AssertionError(key)


def parse_config(text: str) -> SimConfig:
    """Parse the key-value config schema into a validated SimConfig."""
    values = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {line!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip().lower()
        raw = raw.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {line_no}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {line_no}: duplicate key {key!r}")
        values[key] = _parse_value(key, raw, line_no)

    merged = dict(_DEFAULTS)
    nt_declared = values.pop("nt", None)
    merged.update(values)
    try:
        config = SimConfig(
            model=merged["model"] if isinstance(merged["model"], NoiseModel)
            else NoiseModel(merged["model"]),
            alpha=merged["alpha"],
            n_r=merged["nr"],
            snr_grid_db=merged["snr_db"],
            code=merged["code"],
            constellation=merged["constellation"],
            receivers=merged["receivers"],
            master_seed=merged["seed"],
            min_errors=merged["min_errors"],
            max_trials=merged["max_trials"],
            workers=merged["workers"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if nt_declared is not None and nt_declared != config.n_t:
        raise ConfigError(
            f"nt = {nt_declared} inconsistent with code {config.code!r} "
            f"(nt = {config.n_t})"
        )
    return config


def serialize_config(config: SimConfig) -> str:
    """Render a SimConfig in the parse_config schema (round-trips)."""
    lines = [
        f"model = {config.model.value}",
        f"alpha = {config.alpha:g}",
        f"nt = {config.n_t}",
        f"nr = {config.n_r}",
        f"code = {config.code}",
        f"constellation = {config.constellation}",
        "snr_db = " + ", ".join(f"{s:g}" for s in config.snr_grid_db),
        "receivers = " + ", ".join(config.receivers),
        f"seed = {config.master_seed}",
        f"min_errors = {config.min_errors}",
        f"max_trials = {config.max_trials}",
        f"workers = {config.workers}",
    ]
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _curve_rows(curve) -> list[tuple]:
    rows = []
    if isinstance(curve, BerCurve):
        cfg = curve.config
        for rx, pts in curve.points.items():
            for p in pts:
                rows.append(
                    (
                        rx,
                        p.snr_db,
                        cfg.model.value,
                        (
                            "sim",
                            rx,
                            cfg.model.value,
                            _fmt(cfg.alpha),
                            str(cfg.n_t),
                            str(cfg.n_r),
                            _fmt(p.snr_db),
                            _fmt(p.ber),
                            _fmt(p.ci_lo),
                            _fmt(p.ci_hi),
                            str(p.trials),
                            str(p.bit_errors),
                        ),
                    )
                )
    elif isinstance(curve, TheoryCurve):
        for snr, val in zip(curve.snr_grid_db, curve.values):
            rows.append(
                (
                    curve.receiver,
                    snr,
                    curve.model.value,
                    (
                        "theory",
                        curve.receiver,
                        curve.model.value,
                        _fmt(curve.alpha),
                        str(curve.n_t),
                        str(curve.n_r),
                        _fmt(snr),
                        _fmt(val),
                        "",
                        "",
                        "",
                        "",
                    ),
                )
            )
    else:
        raise TypeError(f"cannot emit {type(curve).__name__}")
    return rows


def emit_csv(curves, destination) -> None:
    """Write one or more curves to a CSV file in the fixed schema."""
    if isinstance(curves, (BerCurve, TheoryCurve)):
        curves = [curves]
    rows = []
    for curve in curves:
        rows.extend(_curve_rows(curve))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    with open(destination, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for _, _, _, fields in rows:
            fh.write(",".join(fields) + "\n")


@dataclass(frozen=True)
class ExperimentPreset:
    """Named experiment reproducing one published scenario."""

    name: str
    configs: tuple[SimConfig, ...]
    theory_receivers: tuple[str, ...]
    full_max_trials: int = 10_000_000


def _grid(lo: float, hi: float, step: float) -> tuple[float, ...]:
    return tuple(np.arange(lo, hi + step / 2, step))

def _preset(name, alpha, n_r, models, snr, seed, max_trials, theory):
    configs = tuple(
        SimConfig(
            model=m,
            alpha=alpha,
            n_r=n_r,
            snr_grid_db=snr,
            master_seed=seed,
            max_trials=max_trials,
        )
        for m in models
    )
    return ExperimentPreset(name=name, configs=configs, theory_receivers=theory)


PRESETS = {
    p.name: p
    for p in (
        _preset("fig1_alamouti_2x1_alpha05", 0.5, 1, (NoiseModel.SHARED,),
                _grid(10, 50, 5), 101, 2_000_000, ("gar", "mdr")),
        _preset("fig2_alamouti_2x2_alpha05", 0.5, 2, (NoiseModel.SHARED,),
                _grid(10, 50, 5), 102, 2_000_000, ("gar", "mdr")),
        _preset("fig3_alamouti_2x1_alpha143", 1.43, 1, (NoiseModel.SHARED,),
                _grid(0, 30, 5), 103, 4_000_000, ("gar", "mdr")),
        _preset("fig4_alamouti_2x2_alpha143", 1.43, 2, (NoiseModel.SHARED,),
                _grid(0, 30, 5), 104, 4_000_000, ("gar", "mdr")),
        _preset("fig5_model_compare_alpha05", 0.5, 2,
                (NoiseModel.SHARED, NoiseModel.IID),
                _grid(10, 40, 5), 105, 2_000_000, ("mdr",)),
        _preset("fig6_model_compare_alpha143", 1.43, 2,
                (NoiseModel.SHARED, NoiseModel.IID),
                _grid(0, 30, 5), 106, 4_000_000, ("mdr",)),
    )
}

_ALIASES = {f"fig{i}": name for i, name in enumerate(PRESETS, start=1)}


def resolve_preset(name: str) -> ExperimentPreset:
    key = _ALIASES.get(name, name)
    try:
        return PRESETS[key]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise ValueError(f"unknown preset {name!r}; known: {known}") from None


def run_preset(name: str, overrides: dict | None = None, out_dir: str = ".",
               full: bool = False) -> dict:
    """Run a named preset: simulation CSV, theory CSV, and a run manifest.

    overrides may set seed, workers, min_errors, max_trials.  Returns the
    mapping of artifact names to paths.
    """
    import os

    preset = resolve_preset(name)
    overrides = dict(overrides or {})
    allowed = {"seed", "workers", "min_errors", "max_trials"}
    unknown = set(overrides) - allowed
    if unknown:
        raise ValueError(f"unknown overrides: {sorted(unknown)}")

    configs = []
    for cfg in preset.configs:
        kwargs = {}
        if "seed" in overrides:
            kwargs["master_seed"] = int(overrides["seed"])
        if "workers" in overrides:
            kwargs["workers"] = int(overrides["workers"])
        if "min_errors" in overrides:
            kwargs["min_errors"] = int(overrides["min_errors"])
        kwargs["max_trials"] = int(
            overrides.get(
                "max_trials",
                preset.full_max_trials if full else cfg.max_trials,
            )
        )
        configs.append(replace(cfg, **kwargs))

    os.makedirs(out_dir, exist_ok=True)
    t0 = time.time()
    curves = [run_sweep(cfg) for cfg in configs]
    wall = time.time() - t0

    sim_path = os.path.join(out_dir, f"{preset.name}_sim.csv")
    emit_csv(curves, sim_path)

    theory_curves = []
    for cfg in configs:
        for rx in preset.theory_receivers:
            if rx == "gar" and cfg.model is not NoiseModel.SHARED:
                continue
            theory_curves.append(
                theory_curve(rx, cfg.model, cfg.n_t, cfg.n_r, cfg.alpha,
                             cfg.snr_grid_db)
            )
    theory_path = os.path.join(out_dir, f"{preset.name}_theory.csv")
    emit_csv(theory_curves, theory_path)

    manifest = {
        "preset": preset.name,
        "package_version": __version__,
        "numpy_version": np.__version__,
        "overrides": {k: overrides[k] for k in sorted(overrides)},
        "full": full,
        "wall_time_s": wall,
        "runs": [
            {
                "config": serialize_config(cfg).splitlines(),
                "seed": cfg.master_seed,
                "stopping": {
                    rx: [
                        {"snr_db": p.snr_db, "trials": p.trials,
                         "stopped_on": p.stopped_on}
                        for p in curve.points[rx]
                    ]
                    for rx in cfg.receivers
                },
            }
            for cfg, curve in zip(configs, curves)
        ],
        "artifacts": {"sim": sim_path, "theory": theory_path},
    }
    manifest_path = os.path.join(out_dir, f"{preset.name}_manifest.json")
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=2)

    return {"sim": sim_path, "theory": theory_path, "manifest": manifest_path}
