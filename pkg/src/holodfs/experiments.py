"""Experiment orchestration and report/CSV emission for the command line."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .acceptance import SD1, SD2, run_all
from .config import ExperimentConfig, build_pulse
from .dfs import (Subspace, check_condition_a, check_condition_b, check_condition_c,
                  check_condition_d)
from .gates import (closed_form_u1, closed_form_u2, controlled_locality_test,
                    controlled_rotation_form, ideal_gate, projected_gate, restricted_propagator,
                    synthesize_1q, synthesize_2q, target_gate_1q)
from .hamiltonians import (GateTarget, OneQubitPulse, bright_dark_states, build_hamiltonian,
                           couplings_for, encoding_for, two_qubit_states)
from .linalg import expm_hermitian, fidelity_gate, max_norm
from .noise import (DephasingChannel, bare_gate_under_dephasing, control_error_sweep,
                    dfs_survival, gate_under_dephasing)
from .qubits import basis_state, collective_z, hamming_weight


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    witness: object = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "value": self.value, "tolerance": self.tolerance, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.value!r} (tolerance {self.tolerance!r})"


def at_most(name: str, value: float, tol: float, witness=None) -> Check:
    return Check(name, float(value), float(tol), bool(value <= tol), witness)


@dataclass
class Report:
    experiment: str
    config: dict
    results: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    csv_header: list | None = None
    csv_rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def worst_failure(self) -> Check | None:
        failed = [c for c in self.checks if not c.passed]
        return max(failed, key=lambda c: c.value - c.tolerance) if failed else None

    def to_dict(self) -> dict:
        return {
            "artifact": "holodfs",
            "version": __version__,
            "experiment": self.experiment,
            "config": self.config,
            "results": self.results,
            "checks": [c.to_dict() for c in self.checks],
            "passed": self.passed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"


def matrix_json(m: np.ndarray) -> dict:
    m = np.asarray(m)
    return {"real": [[float(x) for x in row] for row in m.real],
            "imag": [[float(x) for x in row] for row in m.imag]}


def emit_csv(path: str | Path, header, rows) -> None:
    """Header plus one row per grid point; floats in shortest round-trip form, LF newlines."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def _condition_checks(report: Report, pulse, tol: float) -> None:
    n, sd = (3, SD1) if isinstance(pulse, OneQubitPulse) else (6, SD2)
    h = build_hamiltonian(couplings_for(pulse))
    dfs = Subspace.from_bitstrings(sd)
    comp = Subspace.from_bitstrings(encoding_for(pulse).logical_basis)
    reps = [check_condition_a([collective_z(n)], dfs, tol), check_condition_b(h, dfs, tol),
            check_condition_c(expm_hermitian(h, pulse.tau), comp, tol), check_condition_d(h, comp, tol=tol)]
    report.results["conditions"] = [r.to_dict() for r in reps]
    for r in reps:
        worst = [list(r.witnesses[0][0]), r.witnesses[0][1]] if r.witnesses else None
        report.checks.append(Check(f"condition_{r.condition}", r.max_violation, tol, r.passed, worst))


def _gate_checks(report: Report, pulse, target: np.ndarray, tol: dict) -> np.ndarray:
    block, leak = projected_gate(pulse, check_leakage=False)
    report.results["logical_gate"] = matrix_json(block)
    report.results["leakage"] = leak
    report.checks.append(at_most("leakage", leak, tol["leakage"]))
    report.checks.append(at_most("gate_infidelity", 1.0 - fidelity_gate(target, block), tol["fidelity"]))
    return block


def _verify(cfg: ExperimentConfig) -> Report:
    tol = cfg.tolerances
    pulse = build_pulse(cfg.pulse, cfg.pulse_kind)
    rep = Report(cfg.experiment, cfg.to_dict())
    rep.results["pulse"] = pulse.to_dict()
    rep.results["gamma"] = pulse.gamma
    rep.results["couplings"] = couplings_for(pulse).to_dict()
    _condition_checks(rep, pulse, tol["condition"])
    h = build_hamiltonian(couplings_for(pulse))
    if isinstance(pulse, OneQubitPulse):
        closed = closed_form_u1(pulse)
        darks = [bright_dark_states(pulse)[1]]
    else:
        closed = closed_form_u2(pulse)
        _, d1, _, d2, _, _ = two_qubit_states(pulse)
        darks = [d1, d2]
    err = max_norm(restricted_propagator(pulse) - closed)
    rep.results["closed_form_error"] = err
    rep.checks.append(at_most("closed_form_error", err, tol["condition"]))
    dark = max(float(np.linalg.norm(h @ d)) for d in darks)
    rep.results["dark_state_energy_norm"] = dark
    rep.checks.append(at_most("dark_state_energy_norm", dark, tol["dark_state"]))
    block = _gate_checks(rep, pulse, ideal_gate(pulse), tol)
    if not isinstance(pulse, OneQubitPulse):
        form = controlled_rotation_form(pulse.gamma, _bloch(pulse.alpha, pulse.beta))
        ferr = max_norm(form - block)
        rep.results["controlled_form_error"] = ferr
        rep.checks.append(at_most("controlled_form_error", ferr, tol["condition"]))
        rep.results["locality"] = controlled_locality_test(block).to_dict()
    return rep


def _bloch(polar: float, az: float) -> tuple[float, float, float]:
    return (math.sin(polar) * math.cos(az), math.sin(polar) * math.sin(az), math.cos(polar))


def _unit(axis) -> tuple[float, float, float]:
    v = np.asarray(axis, dtype=float)
    return tuple(float(x) for x in v / np.linalg.norm(v))


def _synthesize(cfg: ExperimentConfig) -> Report:
    t = cfg.target
    axis = _unit(t["axis"])
    rep = Report(cfg.experiment, cfg.to_dict())
    if cfg.experiment == "synthesize_1q":
        target = GateTarget(axis, t["gamma"])
        pulse = synthesize_1q(target, t["energy"])
        want = target_gate_1q(target)
    else:
        pulse = synthesize_2q(t["gamma"], axis, t["energy"])
        want = controlled_rotation_form(t["gamma"], axis)
    rep.results["pulse"] = pulse.to_dict()
    rep.results["couplings"] = couplings_for(pulse).to_dict()
    rep.results["target_gate"] = matrix_json(want)
    _gate_checks(rep, pulse, want, cfg.tolerances)
    return rep


def _sector_of(bitstrings) -> int | None:
    weights = {hamming_weight(s) for s in bitstrings}
    return weights.pop() if len(weights) == 1 else None


def _noise_sweep(cfg: ExperimentConfig) -> Report:
    nz, tol = cfg.noise, cfg.tolerances
    state = sum(basis_state(s) for s in nz["state"]) / math.sqrt(len(nz["state"]))
    n = len(nz["state"][0])
    pulse = build_pulse(cfg.pulse, cfg.pulse_kind) if cfg.pulse is not None else None
    seeds = np.random.SeedSequence(cfg.seed).generate_state(len(nz["kappa_t"]), dtype=np.uint64)
    rep = Report(cfg.experiment, cfg.to_dict())
    header = ["kappa_t", "survival_fidelity"] + (["gate_fidelity", "bare_gate_fidelity"] if pulse else [])
    rows = []
    for kt, seed in zip(nz["kappa_t"], seeds):
        ch = DephasingChannel(n, kt, nz["mode"], nz["samples"], int(seed))
        row = [kt, dfs_survival(state, ch)]
        if pulse is not None:
            enc_ch = DephasingChannel(encoding_for(pulse).n, kt, nz["mode"], nz["samples"], int(seed))
            row.append(gate_under_dephasing(pulse, enc_ch, nz["trotter_steps"]))
            row.append(bare_gate_under_dephasing(pulse, kt, nz["trotter_steps"], nz["mode"],
                                                 nz["samples"], int(seed)))
        rows.append(row)
    rep.csv_header, rep.csv_rows = header, rows
    rep.results["rows"] = [dict(zip(header, r)) for r in rows]
    weight = _sector_of(nz["state"])
    rep.results["state_sector_weight"] = weight
    if weight is not None:
        worst = max(abs(1.0 - r[1]) for r in rows)
        rep.checks.append(at_most("dfs_survival_deficit", worst, tol["survival"]))
    if pulse is not None:
        worst = max(1.0 - r[2] for r in rows)
        rep.checks.append(at_most("encoded_gate_infidelity", worst, tol["dephased_gate"]))
    return rep


def _robustness_sweep(cfg: ExperimentConfig) -> Report:
    pulse = build_pulse(cfg.pulse, cfg.pulse_kind)
    sweep = control_error_sweep(pulse, cfg.robustness["epsilons"])
    rep = Report(cfg.experiment, cfg.to_dict())
    rep.csv_header = ["epsilon", "fidelity", "leakage"]
    rep.csv_rows = [list(r) for r in sweep.rows()]
    rep.results["rows"] = [dict(zip(rep.csv_header, r)) for r in rep.csv_rows]
    for eps, fid in zip(sweep.epsilons, sweep.fidelities):
        if eps == 0.0:
            rep.checks.append(at_most("infidelity_at_zero_error", 1.0 - fid, cfg.tolerances["fidelity"]))
            break
    return rep


def _selftest(cfg: ExperimentConfig) -> Report:
    rep = Report("selftest", {"experiment": "selftest", "seed": cfg.seed})
    results = run_all(cfg.seed)
    rep.results["criteria"] = [r.to_dict() for r in results]
    for r in results:
        rep.checks.append(Check(f"criterion_{r.number}: {r.title}", r.measured, r.tolerance, r.passed))
    return rep


RUNNERS = {
    "verify_1q": _verify,
    "verify_2q": _verify,
    "synthesize_1q": _synthesize,
    "synthesize_2q": _synthesize,
    "noise_sweep": _noise_sweep,
    "robustness_sweep": _robustness_sweep,
    "selftest": _selftest,
}


def run(cfg: ExperimentConfig) -> Report:
    return RUNNERS[cfg.experiment](cfg)
