"""
Schemas for gate operations and circuits.
"""

import math
from collections import Counter
from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator


class GateKind(StrEnum):
    """Gate species; the value is the mnemonic used by the text format."""

    HADAMARD = "H"
    PHASE_SHIFT = "P"
    CNOT = "CNOT"
    CONTROLLED_PHASE = "CP"
    TWO_QUBIT_DIAGONAL = "DIAG"
    TABLE_BIT_SET = "TABLE"
    RELABEL = "RELABEL"


# (operand count, parameter count); None = variable
GATE_ARITY: dict[GateKind, tuple[int | None, int]] = {
    GateKind.HADAMARD: (1, 0),
    GateKind.PHASE_SHIFT: (1, 1),
    GateKind.CNOT: (2, 0),
    GateKind.CONTROLLED_PHASE: (2, 1),
    GateKind.TWO_QUBIT_DIAGONAL: (2, 4),
    GateKind.TABLE_BIT_SET: (1, 2),
    GateKind.RELABEL: (None, 0),
}

ELEMENTARY_KINDS = frozenset(
    {GateKind.HADAMARD, GateKind.PHASE_SHIFT, GateKind.CNOT}
)


class GateOp(BaseModel):
    """One operation of a circuit.

    ``TABLE`` flips its target qubit on the single branch where the low
    ``width`` data qubits hold the value ``x`` (params = (x, width)).
    ``RELABEL`` moves the content of qubit ``operands[q]`` to qubit ``q``; it
    is bookkeeping and is not counted as a gate.
    """

    model_config = ConfigDict(frozen=True)

    kind: GateKind
    operands: tuple[int, ...] = Field(..., description="Qubit indices")
    params: tuple[float, ...] = Field(default=(), description="Real gate parameters")

    @model_validator(mode="after")
    def check_shape(self) -> "GateOp":
        n_operands, n_params = GATE_ARITY[self.kind]
        if n_operands is not None and len(self.operands) != n_operands:
            raise ValueError(f"{self.kind} takes {n_operands} operands")
        if len(self.params) != n_params:
            raise ValueError(f"{self.kind} takes {n_params} parameters")
        if any(q < 0 for q in self.operands):
            raise ValueError("operand indices must be non-negative")
        if not all(math.isfinite(p) for p in self.params):
            raise ValueError("gate parameters must be finite")
        # i == j is a single-qubit diagonal
        distinct = self.kind is not GateKind.TWO_QUBIT_DIAGONAL
        if distinct and len(set(self.operands)) != len(self.operands):
            raise ValueError(f"{self.kind} operands must be distinct")
        if self.kind is GateKind.RELABEL and sorted(self.operands) != list(
            range(len(self.operands))
        ):
            raise ValueError("relabel order must be a permutation of all qubits")
        return self

    @property
    def is_gate(self) -> bool:
        return self.kind is not GateKind.RELABEL

    @property
    def elementary_cost(self) -> int:
        """Cost in elementary gates; a table bit-set is charged its control width."""
        if self.kind is GateKind.RELABEL:
            return 0
        if self.kind is GateKind.TABLE_BIT_SET:
            return int(self.params[1])
        return 1

    @property
    def table_index(self) -> int:
        return int(self.params[0])

    @property
    def table_width(self) -> int:
        return int(self.params[1])


class Circuit(BaseModel):
    """Immutable ordered list of operations on an n-qubit register."""

    model_config = ConfigDict(frozen=True)

    n_qubits: int = Field(..., ge=1, description="Register width")
    ops: tuple[GateOp, ...] = Field(default=(), description="Operations in order")
    global_phase: float = Field(
        default=0.0, description="Phase exp(i phi) applied after the last op"
    )
    label: str = Field(default="", description="Free-form name used in dumps")

    @model_validator(mode="after")
    def check_operands(self) -> "Circuit":
        for op in self.ops:
            if any(q >= self.n_qubits for q in op.operands):
                raise ValueError(
                    f"{op.kind} on {op.operands} exceeds the {self.n_qubits}-qubit register"
                )
            if op.kind is GateKind.RELABEL and len(op.operands) != self.n_qubits:
                raise ValueError("relabel must list every qubit")
        return self

    @computed_field
    @property
    def counts(self) -> dict[str, int]:
        """Per-kind tally of counted gates."""
        tally = Counter(op.kind.value for op in self.ops if op.is_gate)
        return dict(sorted(tally.items()))

    @property
    def gate_count(self) -> int:
        return sum(1 for op in self.ops if op.is_gate)

    @property
    def elementary_count(self) -> int:
        return sum(op.elementary_cost for op in self.ops)

    def then(self, other: "Circuit", label: str | None = None) -> "Circuit":
        """Concatenate ``other`` after this circuit."""
        if other.n_qubits != self.n_qubits:
            raise ValueError(
                f"cannot join {self.n_qubits}- and {other.n_qubits}-qubit circuits"
            )
        return Circuit(
            n_qubits=self.n_qubits,
            ops=self.ops + other.ops,
            global_phase=self.global_phase + other.global_phase,
            label=self.label if label is None else label,
        )


class AncillaLayout(BaseModel):
    """Data register on qubits 0..n-1, ancilla register on n..n+m-1.

    ``function_table[x]`` is the m-bit integer f(x); the ancilla construction
    imprints exp(i * value_scale * f(x)) on |x>.
    """

    model_config = ConfigDict(frozen=True)

    data_qubits: int = Field(..., ge=1, description="Data register width n")
    ancilla_qubits: int = Field(..., ge=1, description="Ancilla register width m")
    value_scale: float = Field(..., description="Phase per unit of f")
    function_table: tuple[int, ...] = Field(..., description="f(x) for x in [0, 2^n)")

    @model_validator(mode="after")
    def check_table(self) -> "AncillaLayout":
        if len(self.function_table) != 1 << self.data_qubits:
            raise ValueError(
                f"function table needs {1 << self.data_qubits} entries, "
                f"got {len(self.function_table)}"
            )
        if not math.isfinite(self.value_scale):
            raise ValueError("value_scale must be finite")
        return self

    @property
    def total_qubits(self) -> int:
        return self.data_qubits + self.ancilla_qubits

    def ancilla_qubit(self, bit: int) -> int:
        return self.data_qubits + bit
