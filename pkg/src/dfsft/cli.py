"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 verification failure.
Every subcommand accepts ``--report FILE`` for a JSON report; when it is not
given and ``DFSFT_REPORT_DIR`` is set, the report goes to
``$DFSFT_REPORT_DIR/<command>.json``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .circuit import Circuit, format_circuit, load_circuit, parse_angle
from .codes import BUILTIN_CODES, load_code
from .dense import DenseCapError, apply_pauli
from .injection import MEASUREMENT_MODES, exhaustive_fault_injection, task_rng
from .pauli import PauliOperator, pauli_from_string
from .stabilizer import CapExceededError, StabilizerCode, StabilizerError, tensor_codes
from .statevec import StateVector, cnot_frame_distance, encoded_action, logical_state
from .synthesis import (
    bitwise_cnot,
    synth_css_cnot,
    synth_euler,
    synth_general_cnot,
    synth_joint_zx,
    synth_logical_rotation,
    synth_logical_zz,
)
from .syndrome import LAYOUTS, audit_measurement_ft, measure_element, prepare_logical_ancilla, synth_measurement_circuit
from .verifier import (
    ANTICOMMUTES,
    CssCodeGiven,
    format_ledger,
    reproduce_appendix_a,
    stabilizer_restored,
    trace_heisenberg,
    verify_detection_only_weight1,
    verify_errors_correctable,
    verify_per_block,
    verify_theorem2,
)

__all__ = ["main", "run", "build_parser", "EXIT_OK", "EXIT_USAGE", "EXIT_DOMAIN", "EXIT_VERIFY"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_VERIFY = 3
REPORT_DIR_ENV = "DFSFT_REPORT_DIR"
BUILTIN_CIRCUITS = ("bitwise_cnot", "general_cnot")
FIDELITY_TOL = 1e-9
LEAKAGE_TOL = 1e-9
PURITY_TOL = 1e-10

log = logging.getLogger("dfsft")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# -- shared helpers -------------------------------------------------------------


def _code(args) -> StabilizerCode:
    return load_code(args.code)


def _circuit(args, code: StabilizerCode) -> tuple[Circuit, StabilizerCode]:
    """Resolve ``--circuit``: a file, or a built-in two-block construction."""
    name = args.circuit
    if name in BUILTIN_CIRCUITS:
        pair = tensor_codes(code, code)
        if name == "bitwise_cnot":
            return bitwise_cnot(code.n_qubits), pair
        return synth_general_cnot(code, code, 0, 0, args.trotter_steps), pair
    circuit = load_circuit(name, theta=args.theta)
    if circuit.n_qubits == 2 * code.n_qubits:
        return circuit, tensor_codes(code, code)
    return circuit, code


def _fmt_matrix(m: np.ndarray) -> str:
    def cell(z: complex) -> str:
        re, im = round(z.real, 6) + 0.0, round(z.imag, 6) + 0.0
        return f"{re:+.6f}{im:+.6f}j"

    return "\n".join("  " + " ".join(cell(z) for z in row) for row in m)


def _write_report(args, payload: dict) -> None:
    path = getattr(args, "report", None)
    if path is None and os.environ.get(REPORT_DIR_ENV):
        path = Path(os.environ[REPORT_DIR_ENV]) / f"{args.command}.json"
    if path is None:
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")


# -- analyze ----------------------------------------------------------------------


def cmd_analyze(args) -> int:
    code = _code(args)
    m = len(code.generators)
    print(f"code {code.name or args.code}: K={code.n_qubits}, {m} generators, group size {1 << m}")
    print(f"encoded qubits l={code.encoded_count}, r={code.r}, CSS={code.css}")
    print("generators: " + ", ".join(str(g) for g in code.generators))
    print("base qubits: " + ", ".join(str(q) for q in code.base_qubits))
    for j in range(code.encoded_count):
        print(f"  Z{j} = {code.standard_z[j]}   X{j} = {code.standard_x[j]}")
    _write_report(
        args,
        {
            "command": "analyze",
            "code": code.name or str(args.code),
            "n_qubits": code.n_qubits,
            "generators": [str(g) for g in code.generators],
            "group_size": 1 << m,
            "encoded_qubits": code.encoded_count,
            "r": code.r,
            "css": code.css,
            "base_qubits": list(code.base_qubits),
            "z_bar": [str(z) for z in code.standard_z],
            "x_bar": [str(x) for x in code.standard_x],
        },
    )
    return EXIT_OK


# -- synth ------------------------------------------------------------------------


def cmd_synth(args) -> int:
    code = _code(args)
    axis = args.axis
    need_angle = axis in ("Z", "X", "ZZ", "ZX")
    if need_angle and args.angle is None:
        raise UsageError(f"--angle is required for axis {axis}")
    angle = parse_angle(args.angle, args.theta) if args.angle is not None else None
    if axis in ("Z", "X"):
        circuit = synth_logical_rotation(code, axis, args.qubit, angle, mode=args.mode, central=args.central)
    elif axis == "ZZ":
        circuit = synth_logical_zz(code, args.qubit, args.qubit2, angle, mode=args.mode)
    elif axis == "ZX":
        other = load_code(args.code_b) if args.code_b else code
        circuit = synth_joint_zx(code, other, angle, args.qubit, args.qubit2, mode=args.mode)
    elif axis == "euler":
        if not args.euler:
            raise UsageError("--euler a,b,c is required for axis euler")
        parts = [parse_angle(p, args.theta).value for p in args.euler.split(",")]
        if len(parts) != 3:
            raise UsageError("--euler needs three comma-separated angles")
        circuit = synth_euler(code, args.qubit, tuple(parts))
    else:
        other = load_code(args.code_b) if args.code_b else code
        if code.css and other.css and not args.general:
            circuit = synth_css_cnot(code, other)
        else:
            circuit = synth_general_cnot(code, other, args.qubit, args.qubit2, args.trotter_steps)
    text = format_circuit(circuit, comment=f"code {code.name or args.code}; {circuit.label}")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {len(circuit)} gates on {circuit.n_qubits} qubits to {args.out}")
    else:
        sys.stdout.write(text)
    _write_report(
        args,
        {
            "command": "synth",
            "code": code.name or str(args.code),
            "axis": axis,
            "label": circuit.label,
            "n_qubits": circuit.n_qubits,
            "gates": len(circuit),
            "circuit": text,
        },
    )
    return EXIT_OK


# -- verify -----------------------------------------------------------------------


def _verify_payload(trace, t2, corr, restored, bad, detection) -> dict:
    return {
        "theorem2": {
            "passed": t2.passed,
            "checked": t2.checked,
            "exhaustive": t2.exhaustive,
            "violations": [
                {"location": loc, "source": name, "image": str(image)} for loc, name, image in t2.violations
            ],
        },
        "correctable": {"passed": corr.passed, "undetectable": [[loc, str(e)] for loc, e in corr.undetectable]},
        "stabilizer_restored": restored,
        "unrestored": [[i, str(p)] for i, p in bad],
        "detection": None
        if detection is None
        else {
            "passed": detection.passed,
            "undetected": [[loc, str(w), kind] for loc, w, kind in detection.undetected],
            "indistinguishable": [[loc, str(a), str(b)] for loc, a, b in detection.indistinguishable],
        },
        "locations": len(trace.locations),
    }


def cmd_verify(args) -> int:
    code = _code(args)
    circuit, target = _circuit(args, code)
    trace = trace_heisenberg(circuit, target)
    t2 = verify_theorem2(trace, target, coset_cap=args.group_cap)
    corr = verify_errors_correctable(trace, target, group_cap=args.group_cap)
    restored, bad = stabilizer_restored(trace)
    detection = verify_detection_only_weight1(trace) if args.detection else None
    two_block = target.n_qubits == 2 * code.n_qubits
    per_block = verify_per_block(trace, [code, code]) if two_block else None
    if args.per_block and not two_block:
        raise UsageError("--per-block needs a two-block circuit")
    print(f"circuit {circuit.label or args.circuit}: {len(circuit)} gates on {circuit.n_qubits} qubits")
    print(t2.summary())
    for loc, name, image in t2.violations[:10]:
        print(f"  VIOLATION at location {loc}: image of {name} is {image}")
    print(corr.summary())
    for loc, e in corr.undetectable[:10]:
        print(f"  location {loc}: error {e} is an undetectable logical")
    if per_block is not None:
        print(per_block.summary())
        for loc, name, block, part in per_block.violations[:10]:
            print(f"  location {loc}: {name} has block-{'AB'[block]} part {part} with no anticommuting original")
    if restored:
        print("final stabilizer: restored")
    else:
        print(f"final stabilizer: NOT restored ({len(bad)} generators left the original group)")
        for i, p in bad[:10]:
            print(f"  generator {i} -> {p}")
    if detection is not None:
        print(detection.summary())
        for loc, a, b in detection.indistinguishable[:10]:
            print(f"  location {loc}: {a} and {b} share a syndrome")
    if args.ledger:
        names = list(trace.source_names)
        if args.ledger not in names:
            raise UsageError(f"unknown ledger {args.ledger!r}; choose from {names[:8]}")
        print(format_ledger(trace, names.index(args.ledger)))
    appendix = None
    if args.circuit == "bitwise_cnot" and not code.css:
        try:
            appendix = reproduce_appendix_a(code, t2, corr)
            print("bitwise CNOT on a non-CSS code:")
            print("  " + appendix.summary().replace("\n", "\n  "))
        except CssCodeGiven:
            appendix = None
    if args.per_block:
        ok = per_block.passed and restored
    else:
        ok = t2.passed and corr.passed and restored
    ok = ok and (detection is None or detection.passed)
    print("RESULT: " + ("PASS" if ok else "VIOLATION"))
    payload = {"command": "verify", "code": code.name or str(args.code), "circuit": str(args.circuit), "passed": ok}
    payload.update(_verify_payload(trace, t2, corr, restored, bad, detection))
    payload["mode"] = "per_block" if args.per_block else "exhaustive"
    if per_block is not None:
        payload["per_block"] = {
            "passed": per_block.passed,
            "violations": [[loc, name, block, str(part)] for loc, name, block, part in per_block.violations],
        }
    if appendix is not None:
        payload["bitwise_non_css"] = {
            "copied": str(appendix.copied),
            "copied_in_stabilizer": appendix.copied_in_stabilizer,
            "undetectable": len(appendix.undetectable),
        }
    _write_report(args, payload)
    return EXIT_OK if ok else EXIT_VERIFY


# -- simulate / inject ----------------------------------------------------------


def _parse_injection(spec: str, n: int) -> tuple[PauliOperator, int]:
    label, sep, loc = spec.partition("@")
    if not sep:
        raise UsageError("--inject expects 'all' or <pauli>@<location>")
    p = pauli_from_string(label)
    if p.n_qubits != n:
        raise ValueError(f"injected error has {p.n_qubits} qubits, the code has {n}")
    try:
        return p, int(loc)
    except ValueError:
        raise UsageError(f"bad fault location {loc!r}") from None


def _sweep(args, circuit, target, errors=None, locations=None):
    return exhaustive_fault_injection(
        circuit,
        target,
        errors,
        locations=locations,
        measurement=args.measurement,
        seed=args.seed,
        repeat=args.repeat,
        jobs=args.jobs,
        cap=args.max_qubits,
    )


def cmd_simulate(args) -> int:
    code = _code(args)
    circuit, target = _circuit(args, code)
    action = encoded_action(circuit, target, cap=args.max_qubits)
    ok = action.leakage < LEAKAGE_TOL
    print(f"circuit {circuit.label or args.circuit}: {len(circuit)} gates on {circuit.n_qubits} qubits")
    print(f"encoded action ({action.matrix.shape[0]}x{action.matrix.shape[0]}), leakage {action.leakage:.3e}:")
    print(_fmt_matrix(action.matrix))
    phases = np.angle(np.linalg.eigvals(action.matrix))
    print("eigenphases: " + ", ".join(f"{p:+.12f}" for p in sorted(phases)))
    payload = {
        "command": "simulate",
        "code": code.name or str(args.code),
        "circuit": str(args.circuit),
        "leakage": action.leakage,
        "matrix_real": np.round(action.matrix.real, 12).tolist(),
        "matrix_imag": np.round(action.matrix.imag, 12).tolist(),
        "eigenphases": sorted(float(p) for p in phases),
    }
    if target.encoded_count == 2 and args.circuit in BUILTIN_CIRCUITS:
        dist, phi = cnot_frame_distance(action.matrix)
        print(f"distance to encoded CNOT (frame phase {phi:+.6f}): {dist:.3e}")
        payload["cnot_distance"] = dist
        payload["cnot_frame_phase"] = phi
    if args.inject:
        if args.inject == "all":
            report = _sweep(args, circuit, target)
        else:
            p, loc = _parse_injection(args.inject, target.n_qubits)
            report = _sweep(args, circuit, target, [p], [loc])
            r = report.results[0]
            print(f"injected {p} at location {loc}: syndrome {r.syndrome}, correction {r.correction}")
        print(report.summary(FIDELITY_TOL))
        ok = ok and report.passed(FIDELITY_TOL)
        payload["injection"] = report.to_dict()
    payload["passed"] = ok
    _write_report(args, payload)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_inject(args) -> int:
    code = _code(args)
    circuit, target = _circuit(args, code)
    report = _sweep(args, circuit, target)
    print(report.summary(FIDELITY_TOL))
    if report.ambiguous_locations:
        print("locations with ambiguous syndromes: " + ", ".join(map(str, report.ambiguous_locations)))
    for r in report.failures(FIDELITY_TOL)[:10]:
        print(f"  location {r.location}: {r.error} -> syndrome {r.syndrome}, fidelity {r.fidelity:.6f}")
    payload = {"command": "inject"}
    payload.update(report.to_dict())
    _write_report(args, payload)
    return EXIT_OK if report.passed(FIDELITY_TOL) else EXIT_VERIFY


# -- measure --------------------------------------------------------------------


def _load_state(spec: str, code: StabilizerCode, cap: int) -> StateVector:
    if Path(spec).is_file():
        path = Path(spec)
        amps = np.load(path) if path.suffix == ".npy" else np.loadtxt(path, dtype=complex).reshape(-1)
        amps = np.asarray(amps, dtype=complex)
        if amps.shape[0] == 1 << code.encoded_count:
            return logical_state(code, amps, cap)
        if amps.shape[0] != 1 << code.n_qubits:
            raise ValueError(f"state file has {amps.shape[0]} amplitudes; expected 2^l or 2^K")
        return StateVector(code.n_qubits, amps / np.linalg.norm(amps))
    try:
        index = int(spec)
    except ValueError:
        raise FileNotFoundError(f"no state file {spec!r} and not a logical index") from None
    return prepare_logical_ancilla(code, index, cap)


def cmd_measure(args) -> int:
    code = _code(args)
    ancilla = load_code(args.ancilla) if args.ancilla else code
    element = pauli_from_string(args.element)
    state = _load_state(args.state, code, args.max_qubits)
    if args.error:
        err = pauli_from_string(args.error)
        state = StateVector(code.n_qubits, apply_pauli(err, state.amplitudes))
    anc_state = prepare_logical_ancilla(ancilla, 0, args.max_qubits)
    if args.ancilla_error:
        aerr = pauli_from_string(args.ancilla_error)
        anc_state = StateVector(ancilla.n_qubits, apply_pauli(aerr, anc_state.amplitudes))
    circuit = synth_measurement_circuit(code, element, ancilla, layout=args.layout)
    print(f"measuring {element} with a {ancilla.name or 'custom'} ancilla ({args.layout} layout): {len(circuit)} gates")
    counts = [0, 0]
    worst = 1.0
    for shot in range(args.shots):
        rng = task_rng(args.seed, 2, shot)
        votes = 0
        for rep in range(args.repeat):
            rec = measure_element(
                state, code, element, rng, ancilla, ancilla_state=anc_state, layout=args.layout, cap=args.max_qubits
            )
            votes += rec.bit
            worst = min(worst, rec.purity)
        counts[1 if 2 * votes > args.repeat else 0] += 1
    print(f"outcomes over {args.shots} shots: +1 x {counts[0]}, -1 x {counts[1]}")
    print(f"minimum data purity: {worst:.15f}")
    audit = audit_measurement_ft(code, element, args.layout)
    print(audit.summary())
    ok = worst >= 1 - PURITY_TOL
    _write_report(
        args,
        {
            "command": "measure",
            "code": code.name or str(args.code),
            "element": str(element),
            "layout": args.layout,
            "shots": args.shots,
            "seed": args.seed,
            "counts": {"+1": counts[0], "-1": counts[1]},
            "min_purity": worst,
            "audit_passed": audit.passed,
            "gates": format_circuit(circuit),
        },
    )
    return EXIT_OK if ok else EXIT_VERIFY


# -- demo -------------------------------------------------------------------------


def _two_row_ledger(trace, index: int) -> list[str]:
    rows = []
    for snap in trace.locations:
        image = snap.normalizer[index]
        verdict = snap.verdicts[index] if snap.verdicts else None
        image_s = str(image.single()) if image.is_single else str(image)
        below = str(verdict.witness) if verdict and verdict.tag == ANTICOMMUTES else (verdict.tag if verdict else "")
        rows.append(f"  [{snap.location:>2}] {image_s:<20} | {below}")
    return rows


def _demo_rotation(args, mode: str) -> tuple[list[str], dict, bool]:
    code = load_code(args.code or "q2x")
    theta = args.theta if args.theta is not None else 0.7
    circuit = synth_logical_rotation(code, "Z", 0, theta, mode=mode)
    trace = trace_heisenberg(circuit, code)
    t2 = verify_theorem2(trace, code)
    action = encoded_action(circuit, code)
    lines = [f"exp(i theta Z_bar) on {code.name}, theta={theta}, {mode} form", format_circuit(circuit).rstrip()]
    lines.append("transformed Z_bar at each location | original normalizer element it anticommutes with")
    lines += _two_row_ledger(trace, 0)
    lines.append(t2.summary())
    lines.append(f"encoded action (leakage {action.leakage:.2e}):")
    lines.append(_fmt_matrix(action.matrix))
    ok = t2.passed and action.leakage < LEAKAGE_TOL
    return lines, {"theorem2": t2.passed, "leakage": action.leakage, "gates": len(circuit)}, ok


def _demo_fig3(args) -> tuple[list[str], dict, bool]:
    code = load_code(args.code or "q2x")
    theta = args.theta if args.theta is not None else 0.7
    pair = tensor_codes(code, code)
    circuit = synth_joint_zx(code, code, theta, mode="series")
    trace = trace_heisenberg(circuit, pair)
    t2 = verify_theorem2(trace, pair)
    names = list(trace.source_names)
    want = f"Z0X{code.encoded_count}"
    index = names.index(want) if want in names else 0
    action = encoded_action(circuit, pair)
    lines = [f"exp(i theta Z_bar_A X_bar_B) on two {code.name} blocks, theta={theta}", format_circuit(circuit).rstrip()]
    lines.append(f"ledger of {names[index]} = {trace.sources[index]}")
    lines += _two_row_ledger(trace, index)
    lines.append(t2.summary())
    lines.append(f"encoded action (leakage {action.leakage:.2e}):")
    lines.append(_fmt_matrix(action.matrix))
    ok = t2.passed and action.leakage < LEAKAGE_TOL
    return lines, {"theorem2": t2.passed, "leakage": action.leakage, "gates": len(circuit)}, ok


def _demo_fig4(args) -> tuple[list[str], dict, bool]:
    code = load_code(args.code or "fig4")
    element = pauli_from_string(args.element or "XZYX")
    lines = [f"measurement of {element} on {code.name} with a {code.name} ancilla"]
    for layout in LAYOUTS:
        circuit = synth_measurement_circuit(code, element, code, layout=layout)
        lines.append(f"{layout} layout:")
        lines.append(format_circuit(circuit).rstrip())
        lines.append(audit_measurement_ft(code, element, layout).summary())
    anticommuting = next(
        PauliOperator.single(code.n_qubits, q, ch)
        for q in range(code.n_qubits)
        for ch in "XYZ"
        if not PauliOperator.single(code.n_qubits, q, ch).commutes(element)
    )
    worst = 1.0
    ok = True
    for index in range(1 << code.encoded_count):
        state = prepare_logical_ancilla(code, index)
        clean = measure_element(state, code, element, task_rng(args.seed, 3, index))
        bad = StateVector(code.n_qubits, apply_pauli(anticommuting, state.amplitudes))
        flipped = measure_element(bad, code, element, task_rng(args.seed, 4, index))
        worst = min(worst, clean.purity, flipped.purity)
        ok = ok and clean.bit == 0 and flipped.bit == 1
        lines.append(f"|{index}_L>: bit {clean.bit}; after {anticommuting}: bit {flipped.bit}")
    lines.append(f"minimum data purity {worst:.15f}")
    ok = ok and worst >= 1 - PURITY_TOL
    return lines, {"element": str(element), "min_purity": worst}, ok


def cmd_demo(args) -> int:
    if args.figure == "fig1":
        lines, data, ok = _demo_rotation(args, "series")
    elif args.figure == "fig2":
        lines, data, ok = _demo_rotation(args, "parallel")
    elif args.figure == "fig3":
        lines, data, ok = _demo_fig3(args)
    else:
        lines, data, ok = _demo_fig4(args)
    print("\n".join(lines))
    payload = {"command": "demo", "figure": args.figure, "passed": ok, "text": "\n".join(lines)}
    payload.update(data)
    _write_report(args, payload)
    return EXIT_OK if ok else EXIT_VERIFY


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dfsft", description="Stabilizer decoherence-free subspaces with fault-tolerant gates.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(p, circuit: bool = False):
        p.add_argument("--report", type=Path, help="write a JSON report here")
        p.add_argument("--max-qubits", type=int, default=14, help="dense simulation cap (default 14)")
        p.add_argument("--group-cap", type=int, default=1 << 16, help="largest group or coset set to enumerate")
        p.add_argument("--theta", type=float, help="value substituted for 'theta' in angles")
        if circuit:
            p.add_argument("--circuit", required=True, help=f"circuit file or one of {', '.join(BUILTIN_CIRCUITS)}")
            p.add_argument("--trotter-steps", type=int, default=8, help="steps for general_cnot (default 8)")

    code_help = f"stabilizer file or built-in code ({', '.join(BUILTIN_CODES)})"

    p = sub.add_parser("analyze", help="standard form and logical operators of a code")
    p.add_argument("code", help=code_help)
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synth", help="synthesize an encoded gate as a circuit file")
    p.add_argument("--code", required=True, help=code_help)
    p.add_argument("--axis", choices=["Z", "X", "ZZ", "ZX", "euler", "cnot"], default="Z")
    p.add_argument("--qubit", type=int, default=0, help="encoded qubit (control block for cnot/ZX)")
    p.add_argument("--qubit2", type=int, default=0, help="second encoded qubit (ZZ) or target-block qubit")
    p.add_argument("--angle", help="k*pi/4, c*theta or a decimal")
    p.add_argument("--euler", help="three angles alpha,theta,beta")
    p.add_argument("--mode", choices=["series", "parallel"], default="series")
    p.add_argument("--central", choices=["one_body", "two_body"], default="one_body")
    p.add_argument("--code-b", help="target block code for cnot/ZX (default: same code)")
    p.add_argument("--general", action="store_true", help="use the Trotter CNOT even for CSS codes")
    p.add_argument("--trotter-steps", type=int, default=8)
    p.add_argument("--out", help="write the circuit file here instead of stdout")
    common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="Heisenberg-picture fault-tolerance audit of a circuit")
    p.add_argument("--code", required=True, help=code_help)
    p.add_argument("--detection", action="store_true", help="also run the weight-1 detection audit")
    p.add_argument("--ledger", help="print the ledger of one tracked logical, e.g. Z0")
    p.add_argument(
        "--per-block",
        action="store_true",
        help="judge a two-block circuit by the block-local check of the standard logicals only",
    )
    common(p, circuit=True)
    p.set_defaults(func=cmd_verify)

    for name, func, helptext in (
        ("simulate", cmd_simulate, "statevector run: encoded action and optional fault injection"),
        ("inject", cmd_inject, "exhaustive fault injection with measure-and-correct"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--code", required=True, help=code_help)
        if name == "simulate":
            p.add_argument("--inject", help="'all' or <pauli>@<location>")
        p.add_argument("--measurement", choices=MEASUREMENT_MODES, default="ancilla")
        p.add_argument("--repeat", type=int, default=1, help="majority vote over this many measurements")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1, help="worker processes for the sweep")
        common(p, circuit=True)
        p.set_defaults(func=func)

    p = sub.add_parser("measure", help="ancilla measurement of a stabilizer element")
    p.add_argument("--code", required=True, help=code_help)
    p.add_argument("--state", default="0", help="logical index, or a file of 2^l or 2^K amplitudes")
    p.add_argument("--element", required=True, help="stabilizer element, e.g. XZYX")
    p.add_argument("--ancilla", help="ancilla code (default: same as data)")
    p.add_argument("--error", help="Pauli error applied to the data before measuring")
    p.add_argument("--ancilla-error", help="Pauli error applied to the fresh ancilla")
    p.add_argument("--layout", choices=LAYOUTS, default="interleaved")
    p.add_argument("--shots", type=int, default=1)
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("demo", help="text reproductions of the four figure scenarios")
    p.add_argument("figure", choices=["fig1", "fig2", "fig3", "fig4"])
    p.add_argument("--code", help="override the demo code")
    p.add_argument("--element", help="stabilizer element for fig4")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_demo)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
        if getattr(args, "repeat", 1) < 1 or getattr(args, "repeat", 1) % 2 == 0:
            raise UsageError("--repeat must be a positive odd number")
        if getattr(args, "shots", 1) < 1:
            raise UsageError("--shots must be positive")
        return args.func(args)
    except UsageError as exc:
        print(f"dfsft: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StabilizerError, CapExceededError, DenseCapError, FileNotFoundError, ValueError, KeyError, OSError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(f"dfsft: error: {message}", file=sys.stderr)
        return EXIT_DOMAIN


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
