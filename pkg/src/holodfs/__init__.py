"""Simulation and verification of single-shot nonadiabatic holonomic gates in
decoherence-free subspaces of collectively dephased qubits."""

__version__ = "0.1.0"

from .dfs import (ConditionReport, Subspace, check_condition_a, check_condition_b,  # noqa: E402
                  check_condition_c, check_condition_d, enumerate_dephasing_dfs)
from .gates import (LeakageError, closed_form_u1, closed_form_u2,  # noqa: E402
                    controlled_locality_test, logical_gate_1q, logical_gate_2q, propagator,
                    synthesize_1q, synthesize_2q)
from .hamiltonians import (ONE_QUBIT_ENCODING, TWO_QUBIT_ENCODING, CouplingSet,  # noqa: E402
                           GateTarget, LogicalEncoding, OneQubitPulse, TwoQubitPulse,
                           bright_dark_states, build_hamiltonian, one_qubit_couplings,
                           two_qubit_couplings, two_qubit_states)
from .linalg import eig_hermitian, expm_hermitian, fidelity_gate, kron  # noqa: E402
from .noise import (DephasingChannel, RobustnessSweep, apply_dephasing,  # noqa: E402
                    control_error_sweep, dfs_survival, gate_under_dephasing)
from .qubits import QubitRegister, collective_z, dm_term, pauli_at, xy_term  # noqa: E402
