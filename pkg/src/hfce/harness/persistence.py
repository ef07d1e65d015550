"""CSV/JSON persistence for sweep results and scenes."""
from __future__ import annotations

import csv
import json
from dataclasses import asdict, fields
from pathlib import Path

import numpy as np

from ..channel import PathComponent, Scene, SystemConfig
from .sweep import SweepResult, SweepRow

HEADER = ("scheme", "snr_db", "mean_nmse", "mean_iterations", "mean_runtime_s", "trials",
          "stderr_nmse", "failures")
_INT_FIELDS = {"trials", "failures"}


def plot_data_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".plot.json")


def write_results(result: SweepResult, path) -> None:
    """Write the CSV table plus a per-scheme plot-data JSON next to it."""
    path = Path(path)
    rows = sorted(result.rows, key=lambda r: (r.scheme, r.snr_db))
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(HEADER)
            for r in rows:
                writer.writerow([_fmt(getattr(r, name)) for name in HEADER])
        curves = {}
        for r in rows:
            c = curves.setdefault(r.scheme, {name: [] for name in HEADER[1:]})
            for name in HEADER[1:]:
                c[name].append(getattr(r, name))
        with plot_data_path(path).open("w") as fh:
            json.dump(curves, fh, indent=1, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def read_results(path) -> SweepResult:
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            reader = csv.DictReader(fh)
            rows = []
            for rec in reader:
                kw = {}
                for f in fields(SweepRow):
                    raw = rec[f.name]
                    if f.name == "scheme":
                        kw[f.name] = raw
                    elif f.name in _INT_FIELDS:
                        kw[f.name] = int(raw)
                    else:
                        kw[f.name] = float(raw)
                rows.append(SweepRow(**kw))
    except OSError as exc:
        raise OSError(f"cannot read results from {path}: {exc}") from exc
    return SweepResult(rows)


def config_to_dict(config: SystemConfig) -> dict:
    d = asdict(config)
    d["distance_range"] = list(config.distance_range)
    d["angle_range"] = list(config.angle_range)
    return d


def config_from_dict(d: dict) -> SystemConfig:
    d = dict(d)
    d["distance_range"] = tuple(d["distance_range"])
    d["angle_range"] = tuple(d["angle_range"])
    return SystemConfig(**d)


def scene_to_dict(scene: Scene) -> dict:
    return {
        "config": config_to_dict(scene.config),
        "paths": [
            {"kind": p.kind.value, "gain": [p.gain.real, p.gain.imag], "angle": p.angle,
             "distance": p.distance}
            for p in scene.paths
        ],
        "channel": {"re": scene.channel.real.tolist(), "im": scene.channel.imag.tolist()},
    }


def scene_from_dict(d: dict) -> Scene:
    config = config_from_dict(d["config"])
    paths = tuple(
        PathComponent(p["kind"], complex(*p["gain"]), p["angle"], p["distance"]) for p in d["paths"]
    )
    ch = d["channel"]
    channel = np.asarray(ch["re"], dtype=float) + 1j * np.asarray(ch["im"], dtype=float)
    return Scene(paths=paths, channel=channel, config=config)


def save_scene(scene: Scene, path) -> None:
    path = Path(path)
    try:
        with path.open("w") as fh:
            json.dump(scene_to_dict(scene), fh)
    except OSError as exc:
        raise OSError(f"cannot write scene to {path}: {exc}") from exc


def load_scene(path) -> Scene:
    path = Path(path)
    try:
        with path.open() as fh:
            return scene_from_dict(json.load(fh))
    except OSError as exc:
        raise OSError(f"cannot read scene from {path}: {exc}") from exc
