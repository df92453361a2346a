"""Experiment configuration: parsing, validation and the resolved record.

Two encodings are accepted. The ``.cfg`` form is INI-style::

    [drift]
    breakpoints = 0.0

    [drift.segment.0]
    kind = constant
    value = 1.0

    [drift.segment.1]
    kind = constant
    value = -1.0

    [grid]
    T = 200
    dt = 1e-3

Anything else (``.json``) is read as the nested dictionary produced by
:meth:`ExperimentConfig.resolved`, so every output JSON can be fed back in.
"""

from __future__ import annotations

import configparser
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .drift import BVDrift
from .errors import ConfigError

DEFAULTS = {
    "run": {"initial_points": [0.0], "seed": 0, "n_paths": 1},
    "estimators": {
        "epsilon": None,
        "h": 0.01,
        "levels": None,
        "z_grid": [0.0],
        "bins": 100,
        "n_quad_points": 21,
    },
    "lyapunov": {"x1": -0.5, "x2": 0.5, "n_seeds": 20, "floor": None},
}

_SEGMENT_FIELDS = {
    "constant": {"value": float},
    "affine": {"slope": float, "intercept": float},
    "tanh_scaled": {"amplitude": float, "scale": float, "shift": float, "offset": float},
    "tabulated": {"knots": list, "values": list},
}


def _floats(text):
    return [float(v) for v in str(text).replace(",", " ").split()]


def _cfg_to_dict(text):
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config: cannot parse ({exc})") from None
    raw = {}
    segments = {}
    for name in parser.sections():
        sec = dict(parser[name])
        if name.startswith("drift.segment."):
            try:
                idx = int(name.rsplit(".", 1)[1])
            except ValueError:
                raise ConfigError(f"config: bad section name [{name}]") from None
            kind = sec.get("kind")
            rec = {"kind": kind}
            for key, val in sec.items():
                if key == "kind":
                    continue
                kinds = _SEGMENT_FIELDS.get(kind, {})
                rec[key] = _floats(val) if kinds.get(key) is list else val
            segments[idx] = rec
        else:
            raw[name] = sec
    drift = raw.setdefault("drift", {})
    if "breakpoints" in drift:
        drift["breakpoints"] = _floats(drift["breakpoints"])
    if segments:
        drift["segments"] = [segments[i] for i in sorted(segments)]
    run = raw.get("run", {})
    if "initial_points" in run:
        run["initial_points"] = _floats(run["initial_points"])
    est = raw.get("estimators", {})
    for key in ("levels", "z_grid"):
        if key in est:
            est[key] = _floats(est[key])
    for sec in raw.values():
        for key, val in list(sec.items()):
            if isinstance(val, str) and val.strip().lower() in ("", "none"):
                sec[key] = None
    return raw


def _number(section, key, value, kind=float, positive=False):
    try:
        out = kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"config: {section}.{key} must be a {kind.__name__}, got {value!r}") from None
    if kind is float and not math.isfinite(out):
        raise ConfigError(f"config: {section}.{key} must be finite")
    if positive and not out > 0:
        raise ConfigError(f"config: {section}.{key} must be positive")
    return out


def _int(section, key, value, positive=True):
    try:
        f = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"config: {section}.{key} must be an integer, got {value!r}") from None
    if f != int(f):
        raise ConfigError(f"config: {section}.{key} must be an integer, got {value!r}")
    out = int(f)
    if positive and out <= 0:
        raise ConfigError(f"config: {section}.{key} must be positive")
    return out


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """Validated experiment parameters; ``resolved()`` is the canonical record."""

    drift: BVDrift
    T: float
    dt: float
    initial_points: list
    seed: int
    n_paths: int
    estimators: dict = field(default_factory=dict)
    lyapunov: dict = field(default_factory=dict)

    def resolved(self):
        return {
            "drift": self.drift.to_records(),
            "grid": {"T": self.T, "dt": self.dt},
            "run": {"initial_points": list(self.initial_points), "seed": self.seed, "n_paths": self.n_paths},
            "estimators": dict(self.estimators),
            "lyapunov": dict(self.lyapunov),
        }

    def with_overrides(self, seed=None, **lyap):
        est = dict(self.estimators)
        ly = dict(self.lyapunov)
        ly.update({k: v for k, v in lyap.items() if v is not None})
        return ExperimentConfig(
            self.drift, self.T, self.dt, list(self.initial_points),
            self.seed if seed is None else int(seed), self.n_paths, est, ly,
        )


def from_dict(raw):
    """Validate a nested dictionary into an :class:`ExperimentConfig`.

    Raises
    ------
    ConfigError
        Naming the first offending field.
    """
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be a mapping")
    drift_raw = raw.get("drift")
    if not drift_raw or "segments" not in drift_raw:
        raise ConfigError("config: missing field drift.segments")
    try:
        drift = BVDrift.from_records(drift_raw.get("breakpoints", []), drift_raw["segments"])
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"config: invalid drift ({exc})") from None

    grid = raw.get("grid") or {}
    for key in ("T", "dt"):
        if grid.get(key) is None:
            raise ConfigError(f"config: missing field grid.{key}")
    T = _number("grid", "T", grid["T"], positive=True)
    dt = _number("grid", "dt", grid["dt"], positive=True)
    if dt > T:
        raise ConfigError("config: grid.dt must not exceed grid.T")

    run = {**DEFAULTS["run"], **(raw.get("run") or {})}
    pts = run["initial_points"]
    if isinstance(pts, (int, float)):
        pts = [pts]
    try:
        pts = [float(p) for p in pts]
    except (TypeError, ValueError):
        raise ConfigError("config: run.initial_points must be numbers") from None
    if not pts or any(b <= a for a, b in zip(pts, pts[1:])) or not all(map(math.isfinite, pts)):
        raise ConfigError("config: run.initial_points must be finite and strictly increasing")
    seed = _int("run", "seed", run["seed"], positive=False)
    if not 0 <= seed < 2**64:
        raise ConfigError("config: run.seed must be an unsigned 64-bit integer")
    n_paths = _int("run", "n_paths", run["n_paths"])

    est = {**DEFAULTS["estimators"], **(raw.get("estimators") or {})}
    if est["epsilon"] is not None:
        est["epsilon"] = _number("estimators", "epsilon", est["epsilon"], positive=True)
    est["h"] = _number("estimators", "h", est["h"], positive=True)
    est["bins"] = _int("estimators", "bins", est["bins"])
    est["n_quad_points"] = _int("estimators", "n_quad_points", est["n_quad_points"])
    if est["n_quad_points"] < 2:
        raise ConfigError("config: estimators.n_quad_points must be at least 2")
    if est["levels"] is not None:
        lv = [float(v) for v in est["levels"]]
        if len(lv) != 3 or not lv[0] < lv[1] or lv[2] < 2 or lv[2] != int(lv[2]):
            raise ConfigError("config: estimators.levels must be 'lo, hi, count' with lo < hi, count >= 2")
        est["levels"] = [lv[0], lv[1], int(lv[2])]
    try:
        est["z_grid"] = [float(z) for z in est["z_grid"]]
    except (TypeError, ValueError):
        raise ConfigError("config: estimators.z_grid must be numbers") from None
    unknown = set(est) - set(DEFAULTS["estimators"])
    if unknown:
        raise ConfigError(f"config: unknown field estimators.{sorted(unknown)[0]}")

    ly = {**DEFAULTS["lyapunov"], **(raw.get("lyapunov") or {})}
    ly["x1"] = _number("lyapunov", "x1", ly["x1"])
    ly["x2"] = _number("lyapunov", "x2", ly["x2"])
    if not ly["x1"] < ly["x2"]:
        raise ConfigError("config: lyapunov.x1 must be smaller than lyapunov.x2")
    ly["n_seeds"] = _int("lyapunov", "n_seeds", ly["n_seeds"])
    if ly["floor"] is not None:
        ly["floor"] = _number("lyapunov", "floor", ly["floor"], positive=True)
    return ExperimentConfig(drift, T, dt, pts, seed, n_paths, est, ly)


def load_config(path):
    """Read a ``.cfg`` or ``.json`` experiment file.

    Raises
    ------
    ConfigError
        On unreadable files and invalid content.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path} ({exc.strerror})") from None
    if path.suffix.lower() == ".json":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON ({exc})") from None
        if isinstance(raw, dict) and "config" in raw and "grid" not in raw:
            raw = raw["config"]
    else:
        raw = _cfg_to_dict(text)
    return from_dict(raw)


def shipped_config(name="example_ab.cfg"):
    """Path of a configuration bundled with the package."""
    return Path(__file__).with_name("configs") / name
