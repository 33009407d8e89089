"""
Line-oriented text format for circuits.

    # circuit <label>
    # n_qubits 4
    # global_phase 0.0
    H 3
    CP 2 3 1.5707963267948966
    DIAG 0 1 0.0 0.0 0.0 3.141592653589793

One op per line: ``KIND q0 [q1 ...] [params ...]``. Phases are written with
``repr`` so they parse back to the same double.
"""

from src.exceptions import DomainError

from .schemas import GATE_ARITY, Circuit, GateKind, GateOp


def _format_param(kind: GateKind, value: float) -> str:
    if kind is GateKind.TABLE_BIT_SET:
        return str(int(value))
    return repr(float(value))


def format_op(op: GateOp) -> str:
    fields = [op.kind.value, *map(str, op.operands)]
    fields += [_format_param(op.kind, p) for p in op.params]
    return " ".join(fields)


def dumps(circuit: Circuit) -> str:
    lines = [
        f"# circuit {circuit.label}".rstrip(),
        f"# n_qubits {circuit.n_qubits}",
        f"# global_phase {circuit.global_phase!r}",
        f"# gates {circuit.gate_count}",
    ]
    lines += [format_op(op) for op in circuit.ops]
    return "\n".join(lines) + "\n"


def parse_op(line: str, n_qubits: int) -> GateOp:
    kind_text, *fields = line.split()
    try:
        kind = GateKind(kind_text)
    except ValueError:
        raise DomainError(f"unknown gate kind {kind_text!r}") from None
    n_operands, n_params = GATE_ARITY[kind]
    if n_operands is None:
        n_operands = n_qubits
    if len(fields) != n_operands + n_params:
        raise DomainError(f"malformed {kind} line: {line!r}")
    operands = tuple(int(f) for f in fields[:n_operands])
    params = tuple(float(f) for f in fields[n_operands:])
    return GateOp(kind=kind, operands=operands, params=params)


def loads(text: str) -> Circuit:
    header: dict[str, str] = {}
    body: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(" ")
            header[key] = value.strip()
        else:
            body.append(line)
    if "n_qubits" not in header:
        raise DomainError("circuit text lacks an n_qubits header")
    n_qubits = int(header["n_qubits"])
    return Circuit(
        n_qubits=n_qubits,
        ops=tuple(parse_op(line, n_qubits) for line in body),
        global_phase=float(header.get("global_phase", 0.0)),
        label=header.get("circuit", ""),
    )
