"""Strict parsing of experiment configs (JSON documents).

Angles are radians. Any angle key may instead be given with a ``_deg`` suffix
(``"phi_deg": 30``); it is converted once here and never seen downstream.
Unknown keys anywhere are errors.

Example::

    {
      "experiment": "verify_1q",
      "pulse": {"j": 1.0, "phi": 0.0, "theta_deg": 90, "varphi": 0.0},
      "tolerances": {"condition": 1e-10},
      "output": {"report": "verify.json"}
    }
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .hamiltonians import OneQubitPulse, TwoQubitPulse

EXPERIMENTS = ("verify_1q", "verify_2q", "synthesize_1q", "synthesize_2q", "noise_sweep",
               "robustness_sweep", "selftest")

PULSE_1Q = ("j", "phi", "theta", "varphi", "tau")
PULSE_2Q = ("lambda", "zeta", "alpha", "beta", "tau")
ANGLES = {"phi", "theta", "varphi", "zeta", "alpha", "beta", "gamma"}
TARGET_KEYS = ("axis", "gamma", "energy")
NOISE_KEYS = ("kappa_t", "state", "mode", "samples", "trotter_steps")
ROBUSTNESS_KEYS = ("epsilons",)
OUTPUT_KEYS = ("report", "csv")
TOP_KEYS = ("experiment", "pulse", "target", "noise", "robustness", "tolerances", "seed", "output")

DEFAULT_TOLERANCES = {
    "condition": 1e-10,
    "leakage": 1e-8,
    "fidelity": 1e-10,
    "dark_state": 1e-12,
    "survival": 1e-12,
    "dephased_gate": 1e-8,
}


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""


def _number(key: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key}: expected a number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        raise ConfigError(f"{key}: must be finite, got {value!r}")
    return v


def _section(name: str, raw, allowed) -> dict:
    if not isinstance(raw, dict):
        raise ConfigError(f"{name}: expected an object")
    out = {}
    for key, value in raw.items():
        base = key[:-4] if key.endswith("_deg") else key
        if base not in allowed or (key != base and base not in ANGLES):
            raise ConfigError(f"{name}.{key}: unknown key")
        if base in out:
            raise ConfigError(f"{name}.{key}: given both in radians and degrees")
        if base in ANGLES:
            v = _number(f"{name}.{key}", value)
            out[base] = math.radians(v) if key != base else v
        else:
            out[base] = value
    return out


def _pulse_kind(keys) -> str:
    has1 = any(k in keys for k in ("j", "phi", "theta", "varphi"))
    has2 = any(k in keys for k in ("lambda", "zeta", "alpha", "beta"))
    if has1 and has2:
        raise ConfigError("pulse: mixes one-qubit and two-qubit parameters")
    return "two_qubit" if has2 else "one_qubit"


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    pulse: dict | None = None
    pulse_kind: str | None = None
    target: dict | None = None
    noise: dict | None = None
    robustness: dict | None = None
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    seed: int = 0
    output: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Effective config (defaults applied, radians) in a form ``parse_config`` accepts."""
        out: dict = {"experiment": self.experiment}
        for name in ("pulse", "target", "noise", "robustness"):
            value = getattr(self, name)
            if value is not None:
                out[name] = _plain(value)
        out["tolerances"] = dict(self.tolerances)
        out["seed"] = self.seed
        out["output"] = dict(self.output)
        return out


def _plain(d: dict) -> dict:
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in d.items()}


def _float_list(key: str, raw, *, nonempty: bool = True) -> tuple[float, ...]:
    if not isinstance(raw, list):
        raise ConfigError(f"{key}: expected a list of numbers")
    if nonempty and not raw:
        raise ConfigError(f"{key}: grid must be non-empty")
    return tuple(_number(f"{key}[{i}]", v) for i, v in enumerate(raw))


def _parse_pulse(raw, kind: str | None) -> tuple[dict, str]:
    sec = _section("pulse", raw, set(PULSE_1Q) | set(PULSE_2Q))
    found = _pulse_kind(sec)
    if kind is not None and sec and found != kind:
        raise ConfigError(f"pulse: expected {kind} parameters ({', '.join(PULSE_1Q if kind == 'one_qubit' else PULSE_2Q)})")
    kind = kind or found
    names = PULSE_1Q if kind == "one_qubit" else PULSE_2Q
    for key in sec:
        if key not in names:
            raise ConfigError(f"pulse.{key}: not a {kind} parameter")
    energy = "j" if kind == "one_qubit" else "lambda"
    out = {energy: 1.0}
    for key in names:
        if key in sec:
            out[key] = _number(f"pulse.{key}", sec[key])
    if out[energy] <= 0:
        raise ConfigError(f"pulse.{energy}: must be positive")
    for key in names[1:4]:
        out.setdefault(key, 0.0)
    out.setdefault("tau", math.pi / out[energy])
    out = {key: out[key] for key in names}  # canonical key order in reports
    try:
        build_pulse(out, kind)
    except ValueError as exc:
        raise ConfigError(f"pulse: {exc}") from exc
    return out, kind


def build_pulse(params: dict, kind: str):
    if kind == "one_qubit":
        return OneQubitPulse(params["j"], params["phi"], params["theta"], params["varphi"], params["tau"])
    return TwoQubitPulse(params["lambda"], params["zeta"], params["alpha"], params["beta"], params["tau"])


def _parse_target(raw) -> dict:
    sec = _section("target", raw, set(TARGET_KEYS))
    for key in ("axis", "gamma"):
        if key not in sec:
            raise ConfigError(f"target.{key}: required")
    axis = _float_list("target.axis", sec["axis"])
    if len(axis) != 3:
        raise ConfigError("target.axis: needs three components")
    if math.sqrt(sum(a * a for a in axis)) == 0:
        raise ConfigError("target.axis: zero vector")
    gamma = sec["gamma"]
    if not 0 <= gamma <= 2 * math.pi:
        raise ConfigError("target.gamma: must lie in [0, 2pi]")
    energy = _number("target.energy", sec.get("energy", 1.0))
    if energy <= 0:
        raise ConfigError("target.energy: must be positive")
    # kept as written (normalized at use) so configs round-trip exactly
    return {"axis": axis, "gamma": gamma, "energy": energy}


def _parse_noise(raw) -> dict:
    sec = _section("noise", raw, set(NOISE_KEYS))
    if "kappa_t" not in sec:
        raise ConfigError("noise.kappa_t: required")
    grid = _float_list("noise.kappa_t", sec["kappa_t"])
    if any(k < 0 for k in grid):
        raise ConfigError("noise.kappa_t: values must be non-negative")
    state = sec.get("state", ["010", "001"])
    if not isinstance(state, list) or not state or not all(isinstance(s, str) for s in state):
        raise ConfigError("noise.state: expected a non-empty list of bitstrings")
    if any(set(s) - {"0", "1"} or len(s) != len(state[0]) or not s for s in state):
        raise ConfigError("noise.state: bitstrings must be equal-length strings of 0/1")
    if len(set(state)) != len(state):
        raise ConfigError("noise.state: duplicate bitstrings")
    if len(state[0]) > 10:
        raise ConfigError("noise.state: at most 10 qubits")
    mode = sec.get("mode", "exact_sector")
    if mode not in ("exact_sector", "monte_carlo"):
        raise ConfigError("noise.mode: must be exact_sector or monte_carlo")
    samples = sec.get("samples", 100_000)
    steps = sec.get("trotter_steps", 100)
    for key, v in (("samples", samples), ("trotter_steps", steps)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise ConfigError(f"noise.{key}: expected a positive integer")
    return {"kappa_t": grid, "state": list(state), "mode": mode, "samples": samples, "trotter_steps": steps}


def parse_config(raw: dict, experiment: str | None = None) -> ExperimentConfig:
    """Validate a decoded config document.

    ``experiment`` (from the CLI subcommand) takes precedence; a conflicting
    ``experiment`` key in the document is an error.
    """
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be an object")
    for key in raw:
        if key not in TOP_KEYS:
            raise ConfigError(f"{key}: unknown key")
    exp = raw.get("experiment", experiment)
    if experiment is not None and exp != experiment:
        raise ConfigError(f"experiment: config says {exp!r} but subcommand is {experiment!r}")
    if exp not in EXPERIMENTS:
        raise ConfigError(f"experiment: must be one of {', '.join(EXPERIMENTS)}; got {exp!r}")

    pulse = kind = target = noise = robustness = None
    if exp in ("verify_1q", "verify_2q", "robustness_sweep") or "pulse" in raw:
        want = {"verify_1q": "one_qubit", "verify_2q": "two_qubit"}.get(exp)
        pulse, kind = _parse_pulse(raw.get("pulse", {}), want)
    if exp in ("synthesize_1q", "synthesize_2q"):
        if "target" not in raw:
            raise ConfigError("target: required for synthesis")
        target = _parse_target(raw["target"])
    elif "target" in raw:
        raise ConfigError(f"target: not used by {exp}")
    if exp == "noise_sweep":
        if "noise" not in raw:
            raise ConfigError("noise: required for noise_sweep")
        noise = _parse_noise(raw["noise"])
    elif "noise" in raw:
        raise ConfigError(f"noise: not used by {exp}")
    if exp == "robustness_sweep":
        sec = _section("robustness", raw.get("robustness", {}), set(ROBUSTNESS_KEYS))
        if "epsilons" not in sec:
            raise ConfigError("robustness.epsilons: required")
        robustness = {"epsilons": _float_list("robustness.epsilons", sec["epsilons"], nonempty=False)}
    elif "robustness" in raw:
        raise ConfigError(f"robustness: not used by {exp}")

    tolerances = dict(DEFAULT_TOLERANCES)
    for key, value in _section("tolerances", raw.get("tolerances", {}), set(DEFAULT_TOLERANCES)).items():
        v = _number(f"tolerances.{key}", value)
        if v < 0:
            raise ConfigError(f"tolerances.{key}: must be non-negative")
        tolerances[key] = v

    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ConfigError("seed: expected an unsigned 64-bit integer")
    output = _section("output", raw.get("output", {}), set(OUTPUT_KEYS))
    for key, value in output.items():
        if not isinstance(value, str) or not value:
            raise ConfigError(f"output.{key}: expected a path string")
    return ExperimentConfig(exp, pulse, kind, target, noise, robustness, tolerances, seed, output)


def load_config(path: str | Path, experiment: str | None = None) -> ExperimentConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: not valid JSON ({exc.msg} at line {exc.lineno})") from exc
    return parse_config(raw, experiment)
