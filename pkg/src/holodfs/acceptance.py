"""Acceptance criteria as callable checks.

Each ``criterion_*`` function draws its random inputs from its own child of
the master seed and returns a :class:`CriterionResult`. ``run_all`` is what
``holodfs selftest`` executes; the pytest acceptance module calls the same
functions.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .dfs import (Subspace, check_condition_a, check_condition_b, check_condition_c,
                  check_condition_d, enumerate_dephasing_dfs)
from .gates import (closed_form_u1, closed_form_u2, controlled_locality_test,
                    controlled_rotation_form, logical_gate_1q, logical_gate_2q,
                    restricted_propagator, schmidt_rank, synthesize_1q, synthesize_2q,
                    target_gate_1q)
from .hamiltonians import (ONE_QUBIT_ENCODING, TWO_QUBIT_ENCODING, GateTarget, OneQubitPulse,
                           TwoQubitPulse, bright_dark_states, build_hamiltonian,
                           one_qubit_couplings, two_qubit_couplings, two_qubit_states)
from .linalg import expm_hermitian, fidelity_gate, max_norm
from .noise import (DephasingChannel, apply_dephasing, bare_gate_under_dephasing,
                    density_matrix, dfs_survival, gate_under_dephasing)
from .qubits import collective_z

N_CRITERIA = 10


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    measured: float
    tolerance: float
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "measured": self.measured, "tolerance": self.tolerance, "details": self.details}

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d}. {self.title}: measured={self.measured!r} tolerance={self.tolerance!r}"


def random_one_qubit_pulse(rng, j: float = 1.0) -> OneQubitPulse:
    return OneQubitPulse(j=j, phi=rng.uniform(-math.pi / 2, math.pi / 2),
                         theta=rng.uniform(0, math.pi), varphi=rng.uniform(0, 2 * math.pi))


def random_two_qubit_pulse(rng, lam: float = 1.0) -> TwoQubitPulse:
    return TwoQubitPulse(lam=lam, zeta=rng.uniform(-math.pi / 2, math.pi / 2),
                         alpha=rng.uniform(0, math.pi), beta=rng.uniform(0, 2 * math.pi))


def random_unit_vector(rng) -> tuple[float, float, float]:
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return tuple(float(x) for x in v)


def random_sector_state(rng, sector: Subspace) -> np.ndarray:
    c = rng.normal(size=sector.dim) + 1j * rng.normal(size=sector.dim)
    c /= np.linalg.norm(c)
    return sector.basis @ c


SD1 = ("100", "010", "001")
SD2 = ("010010", "010001", "001010", "001001", "011000", "000011")


def criterion_1(rng, trials: int = 100) -> CriterionResult:
    worst = max(max_norm(restricted_propagator(p) - closed_form_u1(p))
                for p in (random_one_qubit_pulse(rng) for _ in range(trials)))
    return CriterionResult(1, "one-qubit closed-form equivalence", worst <= 1e-10, worst, 1e-10,
                           {"trials": trials})


def criterion_2(rng, trials: int = 100) -> CriterionResult:
    worst = max(max_norm(restricted_propagator(p) - closed_form_u2(p))
                for p in (random_two_qubit_pulse(rng) for _ in range(trials)))
    return CriterionResult(2, "two-qubit closed-form equivalence", worst <= 1e-10, worst, 1e-10,
                           {"trials": trials})


def condition_reports(pulse, tol: float = 1e-10):
    """Conditions (a)-(d) for a pulse on its own decoherence-free/computational pair."""
    if isinstance(pulse, OneQubitPulse):
        n, sd, sl, c = 3, SD1, ONE_QUBIT_ENCODING.logical_basis, one_qubit_couplings(pulse)
    else:
        n, sd, sl, c = 6, SD2, TWO_QUBIT_ENCODING.logical_basis, two_qubit_couplings(pulse)
    h = build_hamiltonian(c)
    dfs, comp = Subspace.from_bitstrings(sd), Subspace.from_bitstrings(sl)
    return [
        check_condition_a([collective_z(n)], dfs, tol),
        check_condition_b(h, dfs, tol),
        check_condition_c(expm_hermitian(h, pulse.tau), comp, tol),
        check_condition_d(h, comp, tol=tol),
    ]


def criterion_3(rng, trials: int = 20) -> CriterionResult:
    pulses = [OneQubitPulse(), TwoQubitPulse()]
    pulses += [random_one_qubit_pulse(rng) for _ in range(trials)]
    pulses += [random_two_qubit_pulse(rng) for _ in range(trials)]
    worst, ok = 0.0, True
    per_condition = {c: 0.0 for c in "abcd"}
    for p in pulses:
        for rep in condition_reports(p):
            ok &= rep.passed
            worst = max(worst, rep.max_violation)
            per_condition[rep.condition] = max(per_condition[rep.condition], rep.max_violation)
    return CriterionResult(3, "conditions (a)-(d) on both encodings", bool(ok), worst, 1e-10,
                           {"pulses": len(pulses), "max_violation_by_condition": per_condition})


def criterion_4(rng, trials: int = 100) -> CriterionResult:
    worst = 0.0
    for _ in range(trials):
        p = random_one_qubit_pulse(rng)
        d = bright_dark_states(p)[1]
        worst = max(worst, float(np.linalg.norm(build_hamiltonian(one_qubit_couplings(p)) @ d)))
        q = random_two_qubit_pulse(rng)
        h6 = build_hamiltonian(two_qubit_couplings(q))
        _, d1, _, d2, _, _ = two_qubit_states(q)
        worst = max(worst, float(np.linalg.norm(h6 @ d1)), float(np.linalg.norm(h6 @ d2)))
    return CriterionResult(4, "dark states have zero energy", worst <= 1e-12, worst, 1e-12,
                           {"trials": trials})


HOLONOMY_SCALES = ((1.0, math.pi), (2.0, math.pi / 2), (0.5, 2 * math.pi))


def criterion_5(rng, trials: int = 20) -> CriterionResult:
    worst = 0.0
    for _ in range(trials):
        p = random_one_qubit_pulse(rng)
        gates = [logical_gate_1q(OneQubitPulse(j, p.phi, p.theta, p.varphi, tau))
                 for j, tau in HOLONOMY_SCALES]
        q = random_two_qubit_pulse(rng)
        gates2 = [logical_gate_2q(TwoQubitPulse(lam, q.zeta, q.alpha, q.beta, tau))
                  for lam, tau in HOLONOMY_SCALES]
        for gs in (gates, gates2):
            for i in range(len(gs)):
                for k in range(i + 1, len(gs)):
                    worst = max(worst, max_norm(gs[i] - gs[k]))
    return CriterionResult(5, "holonomy invariance under (J, tau) rescaling", worst <= 1e-12, worst,
                           1e-12, {"trials": trials, "scales": [list(s) for s in HOLONOMY_SCALES]})


def criterion_6(rng, trials: int = 100) -> CriterionResult:
    worst = 0.0
    for _ in range(trials):
        t = GateTarget(random_unit_vector(rng), float(rng.uniform(0, 2 * math.pi)))
        g1 = logical_gate_1q(synthesize_1q(t))
        worst = max(worst, 1.0 - fidelity_gate(target_gate_1q(t), g1))
        axis, gamma = random_unit_vector(rng), float(rng.uniform(0, 2 * math.pi))
        g2 = logical_gate_2q(synthesize_2q(gamma, axis))
        worst = max(worst, 1.0 - fidelity_gate(controlled_rotation_form(gamma, axis), g2))
    zeta_at_pi = synthesize_2q(math.pi, (0.0, 0.0, 1.0)).zeta
    ok = worst <= 1e-10 and zeta_at_pi == 0.0
    return CriterionResult(6, "synthesis round trip", bool(ok), worst, 1e-10,
                           {"trials": trials, "zeta_at_gamma_pi": zeta_at_pi})


def criterion_7(rng, trials: int = 100, mc_samples: int = 100_000, mc_seed: int = 42) -> CriterionResult:
    sectors = [Subspace.from_bitstrings(SD1), _weight_sector(6, 2)]
    worst = 0.0
    for kt in (0.1, 1.0, 10.0):
        for sector, n in zip(sectors, (3, 6)):
            ch = DephasingChannel(n, kt)
            for _ in range(trials):
                worst = max(worst, abs(1.0 - dfs_survival(random_sector_state(rng, sector), ch)))
    plus = density_matrix(np.array([1.0, 1.0]) / math.sqrt(2))
    expected = 0.5 * math.exp(-2.0)
    exact = apply_dephasing(plus, DephasingChannel(1, 1.0))[0, 1]
    mc = apply_dephasing(plus, DephasingChannel(1, 1.0, "monte_carlo", mc_samples, mc_seed))[0, 1]
    exact_err, mc_err = abs(exact - expected), abs(mc - expected)
    ok = worst <= 1e-12 and exact_err <= 1e-12 and mc_err <= 5e-2
    return CriterionResult(7, "DFS immunity under collective dephasing", bool(ok), worst, 1e-12,
                           {"bare_coherence_exact_error": float(exact_err),
                            "bare_coherence_monte_carlo_error": float(mc_err),
                            "monte_carlo_tolerance": 5e-2, "monte_carlo_samples": mc_samples})


def _weight_sector(n: int, w: int) -> Subspace:
    return enumerate_dephasing_dfs(n)[w]


def criterion_8(rng, steps: int = 100, kappa_t: float = 1.0) -> CriterionResult:
    pulses = [OneQubitPulse(theta=math.pi / 2)] + [random_one_qubit_pulse(rng) for _ in range(3)]
    holo = [gate_under_dephasing(p, DephasingChannel(3, kappa_t), steps) for p in pulses]
    bare = [bare_gate_under_dephasing(p, kappa_t, steps) for p in pulses]
    worst_holo = 1.0 - min(holo)
    ok = worst_holo <= 1e-8 and max(bare) < 0.9
    return CriterionResult(8, "encoded gate survives dephasing, bare gate does not", bool(ok),
                           worst_holo, 1e-8, {"encoded_fidelities": holo, "bare_fidelities": bare,
                                              "bare_threshold": 0.9, "trotter_steps": steps})


def criterion_9(rng) -> CriterionResult:
    cases = []
    for zeta in (-math.pi / 2, -0.7, 0.0, 0.4, math.pi / 2):
        cases.append(("alpha=0", TwoQubitPulse(zeta=zeta, alpha=0.0, beta=float(rng.uniform(0, 2 * math.pi))), True))
    for gamma in (0.0, 2 * math.pi):
        for alpha in (0.3, math.pi / 4, 1.2, math.pi):
            cases.append((f"gamma={gamma!r}", synthesize_2q(gamma, (math.sin(alpha), 0.0, math.cos(alpha))), True))
    cases.append(("alpha=pi/4,beta=0,gamma=pi", TwoQubitPulse(zeta=0.0, alpha=math.pi / 4, beta=0.0), False))
    ok, rows, entangling = True, [], 0.0
    for label, p, want_local in cases:
        g = logical_gate_2q(p)
        res = controlled_locality_test(g)
        rank = schmidt_rank(g)
        ok &= res.is_local == want_local and (rank == 1) == res.is_local
        if not want_local:
            entangling = res.entangling_measure
            ok &= res.entangling_measure > 0.1
        rows.append({"case": label, "is_local": res.is_local, "measure": res.entangling_measure,
                     "schmidt_rank": rank})
    return CriterionResult(9, "entangling-power map", bool(ok), entangling, 0.1, {"cases": rows})


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9)


def run_criteria(seed: int) -> list[CriterionResult]:
    children = np.random.SeedSequence(seed).spawn(len(CRITERIA))
    return [fn(np.random.default_rng(ss)) for fn, ss in zip(CRITERIA, children)]


def _serialize(results) -> str:
    return json.dumps([r.to_dict() for r in results], sort_keys=True)


def run_all(seed: int) -> list[CriterionResult]:
    """Criteria 1-9, then criterion 10: a second pass must serialize identically."""
    first = run_criteria(seed)
    second = run_criteria(seed)
    same = _serialize(first) == _serialize(second)
    return first + [CriterionResult(10, "deterministic re-run", same, 0.0 if same else 1.0, 0.0,
                                    {"seed": seed})]
