"""Pauli-subgroup decoherence-free subspaces with fault-tolerant encoded gates.

The package covers Pauli algebra, stabilizer standard forms, synthesis of
encoded gates from one- and two-body Pauli exponentials, Heisenberg-picture
fault-tolerance checks, a dense statevector simulator and ancilla-based
syndrome measurement.
"""

from __future__ import annotations

from .circuit import (
    Angle,
    Circuit,
    Clifford1q,
    Cnot,
    ControlledPauli,
    MeasureZ,
    ParallelPauliExp,
    PauliExp,
    load_circuit,
    parse_angle,
    parse_circuit,
    save_circuit,
)
from .codes import BUILTIN_CODES, builtin_code, load_code, parse_stab, save_code
from .injection import exhaustive_fault_injection, inject_single
from .pauli import PauliOperator, PauliSum, commutes, multiply, pauli_from_string
from .stabilizer import (
    StabilizerCode,
    classify_error,
    codespace_projector,
    enumerate_group,
    logical_basis,
    tensor_codes,
    validate,
)
from .statevec import StateVector, apply_gate, encoded_action, run_circuit, trotter_error
from .syndrome import (
    audit_measurement_ft,
    build_syndrome_table,
    measure_syndrome,
    prepare_logical_ancilla,
    synth_measurement_circuit,
)
from .synthesis import (
    bitwise_cnot,
    rotation_plan,
    synth_css_cnot,
    synth_euler,
    synth_general_cnot,
    synth_joint_zx,
    synth_logical_rotation,
    synth_logical_zz,
)
from .verifier import (
    reproduce_appendix_a,
    trace_heisenberg,
    verify_detection_only_weight1,
    verify_errors_correctable,
    verify_per_block,
    verify_theorem2,
)

__version__ = "0.1.0"

__all__ = [
    "Angle",
    "Circuit",
    "Clifford1q",
    "Cnot",
    "ControlledPauli",
    "MeasureZ",
    "ParallelPauliExp",
    "PauliExp",
    "load_circuit",
    "parse_angle",
    "parse_circuit",
    "save_circuit",
    "BUILTIN_CODES",
    "builtin_code",
    "load_code",
    "parse_stab",
    "save_code",
    "exhaustive_fault_injection",
    "inject_single",
    "PauliOperator",
    "PauliSum",
    "commutes",
    "multiply",
    "pauli_from_string",
    "StabilizerCode",
    "classify_error",
    "codespace_projector",
    "enumerate_group",
    "logical_basis",
    "tensor_codes",
    "validate",
    "StateVector",
    "apply_gate",
    "encoded_action",
    "run_circuit",
    "trotter_error",
    "audit_measurement_ft",
    "build_syndrome_table",
    "measure_syndrome",
    "prepare_logical_ancilla",
    "synth_measurement_circuit",
    "bitwise_cnot",
    "rotation_plan",
    "synth_css_cnot",
    "synth_euler",
    "synth_general_cnot",
    "synth_joint_zx",
    "synth_logical_rotation",
    "synth_logical_zz",
    "reproduce_appendix_a",
    "trace_heisenberg",
    "verify_detection_only_weight1",
    "verify_errors_correctable",
    "verify_per_block",
    "verify_theorem2",
]
