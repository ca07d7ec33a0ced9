"""Circuit representation shared by both backends, plus the JSON file
formats for circuits, gate sequences and symplectic matrices.

A circuit is a list of operations over ``n`` qudits, each qudit a copy of
one base group.  Measurements observe a Pauli vector on selected slots and
write an exponent outcome to a named register; classically controlled
corrections reference registers by name and a built-in correction function
(the measurement-based CX and magic-injection fix-ups are built-ins).

All documents are JSON with integers only; phases are "num/den" strings.
Matrices over groups can be written in the natural residue convention
(default) or the embedded one, where a factor of order q is carried as the
multiples of q0/q inside the leading factor; the convention is an explicit
top-level field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .clifford import (AutomorphismGate, CXGate, FourierGate, Gate, PauliGate,
                       QuadraticGate)
from .errors import PreconditionFailedError
from .forms import Character, QuadraticForm, fit_quadratic_table
from .groups import Group, GroupElement, HomMatrix, parse_group, product_group
from .pauli import PauliOperator, PauliVector
from .phases import Phase

FORMAT_VERSION = 1


@dataclass(frozen=True)
class GateOp:
    gate: Gate
    slots: tuple[int, ...]


@dataclass(frozen=True)
class MeasureOp:
    register: str
    slots: tuple[int, ...]
    x: tuple[int, ...]
    z: tuple[int, ...]

    def observable(self, base: Group) -> PauliVector:
        local = product_group(base, len(self.slots))
        return PauliVector(local, GroupElement(local, self.x),
                           Character(local, self.z))


@dataclass(frozen=True)
class CorrectionOp:
    builtin: str
    args: tuple[str, ...]
    slots: tuple[int, ...]
    table: tuple | None = None  # phase table parameter for magic fix-ups


@dataclass(frozen=True)
class MagicPrepOp:
    slot: int
    table: tuple  # ((residues, Phase), ...) covering the base group


Op = GateOp | MeasureOp | CorrectionOp | MagicPrepOp


@dataclass(frozen=True)
class Circuit:
    base: Group
    n: int
    ops: tuple[Op, ...]

    def __post_init__(self):
        written: set[str] = set()
        prepared: set[int] = set()
        touched: set[int] = set()
        for op in self.ops:
            if isinstance(op, GateOp):
                self._check_slots(op.slots)
                touched.update(op.slots)
            elif isinstance(op, MeasureOp):
                self._check_slots(op.slots)
                touched.update(op.slots)
                if op.register in written:
                    raise ValueError(f"register {op.register!r} written twice")
                written.add(op.register)
            elif isinstance(op, CorrectionOp):
                self._check_slots(op.slots)
                touched.update(op.slots)
                missing = [a for a in op.args if a not in written]
                if missing:
                    raise ValueError(f"correction reads unwritten registers {missing}")
            elif isinstance(op, MagicPrepOp):
                self._check_slots((op.slot,))
                if op.slot in touched or op.slot in prepared:
                    raise ValueError("magic preparation must come first on its slot")
                prepared.add(op.slot)
            else:
                raise TypeError(f"unknown op {op!r}")

    def _check_slots(self, slots) -> None:
        for s in slots:
            if not 0 <= s < self.n:
                raise ValueError(f"slot {s} out of range")
        if len(set(slots)) != len(slots):
            raise ValueError("repeated slot in one operation")

    @property
    def group(self) -> Group:
        return product_group(self.base, self.n)


# ---------------------------------------------------------------------------
# correction built-ins

def _group_element_from_registers(base: Group, values) -> GroupElement:
    if len(values) != base.num_factors:
        raise ValueError("register count does not match the base group")
    return GroupElement(base, tuple(values))


def _corr_z_char(base: Group, values, table) -> Gate:
    return PauliGate(PauliOperator.z_char(Character(base, tuple(values))))


def _corr_x_neg(base: Group, values, table) -> Gate:
    return PauliGate(PauliOperator.x_shift(-_group_element_from_registers(base, values)))


def _corr_x_sub(base: Group, values, table) -> Gate:
    k = base.num_factors
    p = _group_element_from_registers(base, values[:k])
    q = _group_element_from_registers(base, values[k:])
    return PauliGate(PauliOperator.x_shift(p - q))


def _corr_magic_quadratic(base: Group, values, table) -> Gate:
    if table is None:
        raise ValueError("magic correction needs its phase table parameter")
    phases = decode_phase_table(base, table)
    k = _group_element_from_registers(base, values)
    residual = {g: phases[k + g] - phases[k] - phases[g] for g in base.elements()}
    corr = {g: -residual[g] for g in base.elements()}
    try:
        form = fit_quadratic_table(base, corr)
    except ValueError as exc:
        raise PreconditionFailedError(
            f"correction for outcome {k} is not a quadratic form",
            detail=k.residues) from exc
    return QuadraticGate(form)


CORRECTION_BUILTINS = {
    "z-char": _corr_z_char,
    "x-neg": _corr_x_neg,
    "x-sub": _corr_x_sub,
    "magic-quadratic": _corr_magic_quadratic,
}


def resolve_correction(op: CorrectionOp, base: Group, record: dict) -> Gate:
    fn = CORRECTION_BUILTINS.get(op.builtin)
    if fn is None:
        raise ValueError(f"unknown correction builtin {op.builtin!r}")
    values = [record[a] for a in op.args]
    return fn(base, values, op.table)


# ---------------------------------------------------------------------------
# phase tables

def encode_phase_table(table: dict) -> list:
    items = sorted(table.items(), key=lambda kv: kv[0].residues)
    return [[list(g.residues), ph.as_string()] for g, ph in items]


def decode_phase_table(base: Group, data) -> dict:
    out = {}
    for residues, text in data:
        out[base.element(tuple(residues))] = Phase.parse(text)
    return out


# ---------------------------------------------------------------------------
# matrix conventions

def matrix_embedded_to_natural(orders, entries):
    """Convert matrix entries from the embedded convention (all slots seen
    inside Z_{q0} as multiples of q0/q) to natural residues."""
    out = []
    for i, row in enumerate(entries):
        qi = orders[i]
        new_row = []
        for j, v in enumerate(row):
            qj = orders[j]
            val = v * qi
            if val % qj:
                raise ValueError(
                    f"embedded entry {v} at ({i},{j}) is not convertible")
            new_row.append((val // qj) % qi)
        out.append(new_row)
    return out


def matrix_natural_to_embedded(orders, entries):
    out = []
    for i, row in enumerate(entries):
        qi = orders[i]
        new_row = []
        for j, v in enumerate(row):
            qj = orders[j]
            val = v * qj
            if val % qi:
                raise ValueError(f"entry {v} at ({i},{j}) is not a valid residue")
            new_row.append(val // qi)
        out.append(new_row)
    return out


# ---------------------------------------------------------------------------
# gate (de)serialization

def gate_to_json(gate: Gate) -> dict:
    if isinstance(gate, AutomorphismGate):
        return {"kind": "automorphism",
                "matrix": [list(r) for r in gate.tau.entries]}
    if isinstance(gate, QuadraticGate):
        form = gate.form
        cross = [[i, j, form.cross[i][j]]
                 for i in range(len(form.diag)) for j in range(i + 1, len(form.diag))
                 if form.cross[i][j]]
        return {"kind": "quadratic", "diag": list(form.diag), "cross": cross,
                "linear": list(form.linear)}
    if isinstance(gate, FourierGate):
        return {"kind": "fourier", "matrix": [list(r) for r in gate.matrix.entries],
                "dagger": gate.dagger}
    if isinstance(gate, PauliGate):
        return {"kind": "pauli", "x": list(gate.op.x.residues),
                "z": list(gate.op.z.residues),
                "phase": gate.op.phase.as_string()}
    if isinstance(gate, CXGate):
        return {"kind": "cx", "dagger": gate.dagger}
    raise TypeError(f"unknown gate {gate!r}")


def gate_from_json(data: dict, group: Group) -> Gate:
    kind = data.get("kind")
    if kind == "automorphism":
        return AutomorphismGate(HomMatrix(group, group,
                                          tuple(tuple(r) for r in data["matrix"])))
    if kind == "quadratic":
        n = group.num_factors
        cross = [[0] * n for _ in range(n)]
        for i, j, c in data.get("cross", []):
            cross[i][j] = c
        return QuadraticGate(QuadraticForm(group, tuple(data["diag"]),
                                           tuple(tuple(r) for r in cross),
                                           tuple(data["linear"])))
    if kind == "fourier":
        return FourierGate(HomMatrix(group, group,
                                     tuple(tuple(r) for r in data["matrix"])),
                           bool(data.get("dagger", False)))
    if kind == "pauli":
        return PauliGate(PauliOperator(group, Phase.parse(data["phase"]),
                                       GroupElement(group, tuple(data["x"])),
                                       Character(group, tuple(data["z"]))))
    if kind == "cx":
        return CXGate(bool(data.get("dagger", False)))
    raise ValueError(f"unknown gate kind {kind!r}")


def _slot_group(base: Group, nslots: int) -> Group:
    return product_group(base, nslots) if nslots > 1 else base


def op_to_json(op: Op) -> dict:
    if isinstance(op, GateOp):
        return {"op": "gate", "slots": list(op.slots), "gate": gate_to_json(op.gate)}
    if isinstance(op, MeasureOp):
        return {"op": "measure", "register": op.register, "slots": list(op.slots),
                "x": list(op.x), "z": list(op.z)}
    if isinstance(op, CorrectionOp):
        out = {"op": "correct", "builtin": op.builtin, "args": list(op.args),
               "slots": list(op.slots)}
        if op.table is not None:
            out["table"] = [list(entry) if not isinstance(entry, list) else entry
                            for entry in op.table]
        return out
    if isinstance(op, MagicPrepOp):
        return {"op": "prepare_magic", "slot": op.slot,
                "table": [list(entry) if not isinstance(entry, list) else entry
                          for entry in op.table]}
    raise TypeError(f"unknown op {op!r}")


def op_from_json(data: dict, base: Group) -> Op:
    kind = data.get("op")
    if kind == "gate":
        slots = tuple(data["slots"])
        local = _slot_group(base, len(slots))
        return GateOp(gate_from_json(data["gate"], local), slots)
    if kind == "measure":
        return MeasureOp(data["register"], tuple(data["slots"]),
                         tuple(data["x"]), tuple(data["z"]))
    if kind == "correct":
        table = data.get("table")
        return CorrectionOp(data["builtin"], tuple(data["args"]),
                            tuple(data["slots"]),
                            tuple(tuple(e) if isinstance(e, list) else e
                                  for e in table) if table is not None else None)
    if kind == "prepare_magic":
        return MagicPrepOp(data["slot"],
                           tuple(tuple(e) if isinstance(e, list) else e
                                 for e in data["table"]))
    raise ValueError(f"unknown op {kind!r}")


# ---------------------------------------------------------------------------
# documents

def circuit_to_json(circuit: Circuit) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "type": "circuit",
        "group": circuit.base.literal(),
        "qudits": circuit.n,
        "operations": [op_to_json(op) for op in circuit.ops],
    }


def circuit_from_json(data: dict) -> Circuit:
    _expect(data, "circuit")
    base = parse_group(data["group"])
    n = int(data["qudits"])
    ops = tuple(op_from_json(o, base) for o in data["operations"])
    return Circuit(base, n, ops)


def sequence_to_json(gates, group: Group) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "type": "gate_sequence",
        "group": group.literal(),
        "gates": [gate_to_json(g) for g in gates],
    }


def sequence_from_json(data: dict):
    _expect(data, "gate_sequence")
    group = parse_group(data["group"])
    return [gate_from_json(g, group) for g in data["gates"]], group


def symplectic_to_json(group: Group, entries, convention: str = "natural") -> dict:
    orders = group.orders + group.orders
    mat = [list(r) for r in entries]
    if convention == "embedded":
        mat = matrix_natural_to_embedded(orders, mat)
    elif convention != "natural":
        raise ValueError(f"unknown convention {convention!r}")
    return {
        "format_version": FORMAT_VERSION,
        "type": "symplectic_map",
        "group": group.literal(),
        "convention": convention,
        "matrix": mat,
    }


def symplectic_from_json(data: dict):
    from .symplectic import SymplecticMap
    from .clifford import doubled_group
    _expect(data, "symplectic_map")
    group = parse_group(data["group"])
    orders = group.orders + group.orders
    mat = [list(r) for r in data["matrix"]]
    convention = data.get("convention", "natural")
    if convention == "embedded":
        mat = matrix_embedded_to_natural(orders, mat)
    elif convention != "natural":
        raise ValueError(f"unknown convention {convention!r}")
    big = doubled_group(group)
    return SymplecticMap(group, HomMatrix(big, big, tuple(tuple(r) for r in mat)))


def tableau_to_json(tableau) -> dict:
    def pauli_json(p):
        return {"x": list(p.x.residues), "z": list(p.z.residues),
                "phase": p.phase.as_string()}
    return {
        "format_version": FORMAT_VERSION,
        "type": "clifford_tableau",
        "group": tableau.group.literal(),
        "x_images": [pauli_json(p) for p in tableau.x_images],
        "z_images": [pauli_json(p) for p in tableau.z_images],
    }


def tableau_from_json(data: dict):
    from .clifford import CliffordTableau
    _expect(data, "clifford_tableau")
    group = parse_group(data["group"])

    def pauli(d):
        return PauliOperator(group, Phase.parse(d["phase"]),
                             GroupElement(group, tuple(d["x"])),
                             Character(group, tuple(d["z"])))

    return CliffordTableau(group,
                           tuple(pauli(d) for d in data["x_images"]),
                           tuple(pauli(d) for d in data["z_images"]))


def _expect(data: dict, typ: str) -> None:
    if data.get("type") != typ:
        raise ValueError(f"document is not a {typ!r}")
    if data.get("format_version") != FORMAT_VERSION:
        raise ValueError("unsupported format_version")


def dump_document(doc: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_document(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
