"""Dense (state-vector) backend: exact definitional matrices for every
gate, projective measurement, and full branch enumeration.

This backend is the desk-scale oracle: every symbolic identity in the
package is checked against it at small dimensions.  States are numpy
complex vectors indexed by residue tuples in mixed radix, first factor
most significant.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .clifford import (AutomorphismGate, CXGate, CliffordTableau, FourierGate,
                       Gate, PauliGate, QuadraticGate, cx_matrix)
from .errors import ResourceCapError
from .forms import Character
from .groups import Group, GroupElement, product_group
from .pauli import PauliOperator, PauliVector
from .phases import Phase

DEFAULT_DENSE_CAP = 4096


def element_index(group: Group, residues) -> int:
    idx = 0
    for r, q in zip(residues, group.orders):
        idx = idx * q + (r % q)
    return idx


def index_residues(group: Group, idx: int) -> tuple[int, ...]:
    out = []
    for q in reversed(group.orders):
        out.append(idx % q)
        idx //= q
    return tuple(reversed(out))


def _check_cap(dim: int, cap: int) -> None:
    if dim > cap:
        raise ResourceCapError(f"dense dimension {dim} exceeds the cap {cap}")


def basis_state(group: Group, residues) -> np.ndarray:
    state = np.zeros(group.order, dtype=complex)
    state[element_index(group, residues)] = 1.0
    return state


def pauli_matrix(p: PauliOperator, cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    group = p.group
    dim = group.order
    _check_cap(dim, cap)
    mat = np.zeros((dim, dim), dtype=complex)
    w = p.phase.to_complex()
    for h in group.elements():
        col = element_index(group, h.residues)
        row = element_index(group, (p.x + h).residues)
        mat[row, col] = w * p.z.eval(h).to_complex()
    return mat


_GROUP_TABLES: dict = {}


def _group_tables(group: Group):
    """Cached (residues, strides, orders) arrays for vectorized Pauli action."""
    key = group.orders
    hit = _GROUP_TABLES.get(key)
    if hit is not None:
        return hit
    orders = np.array(key, dtype=np.int64)
    m = len(key)
    strides = np.ones(m, dtype=np.int64)
    for i in range(m - 2, -1, -1):
        strides[i] = strides[i + 1] * key[i + 1]
    dim = int(np.prod(orders))
    idx = np.arange(dim, dtype=np.int64)
    residues = np.empty((dim, m), dtype=np.int64)
    rem = idx
    for i in range(m):
        residues[:, i] = (rem // strides[i]) % key[i]
    result = (residues, strides, orders)
    _GROUP_TABLES[key] = result
    return result


def pauli_apply(p: PauliOperator, state: np.ndarray) -> np.ndarray:
    """Apply a Pauli over the state's full group without materialising it."""
    group = p.group
    residues, strides, orders = _group_tables(group)
    den = math.lcm(*group.orders)
    xv = np.array(p.x.residues, dtype=np.int64)
    perm = ((residues + xv) % orders) @ strides
    zco = np.array([z * (den // q) for z, q in zip(p.z.residues, group.orders)],
                   dtype=np.int64)
    expo = (residues @ zco) % den
    phases = np.exp(2j * np.pi * (expo / den)) * p.phase.to_complex()
    out = np.zeros_like(state)
    out[perm] = phases * state
    return out


def gate_matrix(gate: Gate, group: Group, cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """The unitary of a gate over ``group`` (for CX, ``group`` is the
    two-slot product), straight from the definitional formulas."""
    dim = group.order
    _check_cap(dim, cap)
    if isinstance(gate, AutomorphismGate):
        mat = np.zeros((dim, dim), dtype=complex)
        for g in group.elements():
            mat[element_index(group, gate.tau.apply(g).residues),
                element_index(group, g.residues)] = 1.0
        return mat
    if isinstance(gate, QuadraticGate):
        diag = np.array([gate.form.eval(g).to_complex() for g in group.elements()])
        return np.diag(diag)
    if isinstance(gate, FourierGate):
        mat = np.zeros((dim, dim), dtype=complex)
        scale = 1.0 / math.sqrt(dim)
        for g in group.elements():
            col = element_index(group, g.residues)
            for chi_el in group.elements():
                chi = Character(group, chi_el.residues)
                row = element_index(group, gate.matrix.apply(chi_el).residues)
                mat[row, col] += scale * (-chi.eval(g)).to_complex()
        return mat.conj().T if gate.dagger else mat
    if isinstance(gate, PauliGate):
        return pauli_matrix(gate.op, cap)
    if isinstance(gate, CXGate):
        k = group.num_factors // 2
        base = Group(group.orders[:k])
        return gate_matrix(AutomorphismGate(cx_matrix(base, gate.dagger)), group, cap)
    raise TypeError(f"unknown gate {gate!r}")


def apply_gate(state: np.ndarray, gate: Gate, slots, base: Group, n: int,
               cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """Apply a gate supported on ``slots`` to an n-qudit state over base^n."""
    k = base.num_factors
    local = Group(base.orders * len(slots))
    mat = gate_matrix(gate, local, cap)
    full_shape = tuple(base.orders) * n
    tensor = state.reshape(full_shape)
    axes = [s * k + f for s in slots for f in range(k)]
    moved = np.moveaxis(tensor, axes, range(len(axes)))
    rest = moved.shape[len(axes):]
    flat = moved.reshape(local.order, -1)
    flat = mat @ flat
    moved = flat.reshape(tuple(local.orders) + rest)
    out = np.moveaxis(moved, range(len(axes)), axes)
    return np.ascontiguousarray(out).reshape(-1)


def states_equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    if a.shape != b.shape:
        raise ValueError("dimension mismatch")
    return abs(np.vdot(a, b)) >= 1.0 - tol


def canonical_measurement_unitary(vec: PauliVector) -> tuple[PauliOperator, int]:
    """The order-m unitary measured for a Pauli vector observable.

    m is the order of the vector; the phase is fixed so the unitary's m-th
    power is exactly the identity, making outcomes plain m-th-root
    exponents.
    """
    m = vec.order
    bare = PauliOperator.from_vector(vec)
    residue = bare.pow(m)
    if not (residue.x.is_zero() and residue.z.is_trivial()):
        raise AssertionError("vector order computation is wrong")
    correction = Phase.from_fraction(-residue.phase.frac / m)
    return bare.with_phase(correction), m


def measurement_projections(state: np.ndarray, vec: PauliVector,
                            tol: float = 1e-12):
    """All (outcome, probability, normalized post-state) triples with
    nonzero probability for measuring the canonical unitary of ``vec``."""
    op, m = canonical_measurement_unitary(vec)
    powers = [state]
    current = state
    for _ in range(m - 1):
        current = pauli_apply(op, current)
        powers.append(current)
    branches = []
    for s in range(m):
        proj = np.zeros_like(state)
        for t in range(m):
            proj += cmath.exp(-2j * cmath.pi * s * t / m) * powers[t]
        proj /= m
        prob = float(np.vdot(proj, proj).real)
        if prob > tol:
            branches.append((s, prob, proj / math.sqrt(prob)))
    return branches


@dataclass
class DenseState:
    base: Group
    n: int
    vector: np.ndarray

    @property
    def group(self) -> Group:
        return product_group(self.base, self.n)

    @classmethod
    def zeros(cls, base: Group, n: int, cap: int = DEFAULT_DENSE_CAP) -> "DenseState":
        big = product_group(base, n)
        _check_cap(big.order, cap)
        return cls(base, n, basis_state(big, (0,) * big.num_factors))

    def norm_check(self, tol: float = 1e-9) -> bool:
        return abs(float(np.vdot(self.vector, self.vector).real) - 1.0) <= tol


def tableau_faithful(tableau: CliffordTableau, gate: Gate, group: Group,
                     cap: int = DEFAULT_DENSE_CAP, tol: float = 1e-9) -> bool:
    """Dense check that conjugation by the gate's unitary matches the
    tableau prediction on every Pauli generator."""
    u = gate_matrix(gate, group, cap)
    n = group.num_factors
    gens = [PauliOperator.x_shift(group.generator(i)) for i in range(n)]
    gens += [PauliOperator.z_char(Character.generator(group, i)) for i in range(n)]
    for p in gens:
        lhs = u @ pauli_matrix(p, cap) @ u.conj().T
        rhs = pauli_matrix(tableau.conjugate(p), cap)
        if np.max(np.abs(lhs - rhs)) > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# circuit execution

def embed_vector(local: PauliVector, slots, base: Group, n: int) -> PauliVector:
    """Place a slot-local Pauli vector into the full n-qudit group."""
    k = base.num_factors
    big = product_group(base, n)
    xres = [0] * (n * k)
    zres = [0] * (n * k)
    for pos, s in enumerate(slots):
        xres[s * k:(s + 1) * k] = local.x.residues[pos * k:(pos + 1) * k]
        zres[s * k:(s + 1) * k] = local.z.residues[pos * k:(pos + 1) * k]
    return PauliVector(big, GroupElement(big, tuple(xres)),
                       Character(big, tuple(zres)))


def _initial_vector(circuit, cap: int) -> np.ndarray:
    from .circuits import MagicPrepOp, decode_phase_table
    base = circuit.base
    _check_cap(base.order ** circuit.n, cap)
    per_slot = []
    magic = {op.slot: op for op in circuit.ops if isinstance(op, MagicPrepOp)}
    for s in range(circuit.n):
        if s in magic:
            table = decode_phase_table(base, magic[s].table)
            vec = np.zeros(base.order, dtype=complex)
            for g, ph in table.items():
                vec[element_index(base, g.residues)] = ph.to_complex()
            vec /= np.linalg.norm(vec)
        else:
            vec = basis_state(base, (0,) * base.num_factors)
        per_slot.append(vec)
    state = per_slot[0]
    for vec in per_slot[1:]:
        state = np.kron(state, vec)
    return state


def sample_outcome(rng, pairs):
    """Shared sampling discipline: cumulative scan over ascending labels."""
    r = rng.random()
    acc = 0.0
    for label, prob in pairs:
        acc += float(prob)
        if r < acc:
            return label
    return pairs[-1][0]


def run_circuit(circuit, rng=None, seed=None, cap: int = DEFAULT_DENSE_CAP):
    """Run one dense trajectory; returns (DenseState, measurement record)."""
    import random as _random
    from .circuits import (CorrectionOp, GateOp, MagicPrepOp, MeasureOp,
                           resolve_correction)
    if rng is None:
        rng = _random.Random(seed)
    state = _initial_vector(circuit, cap)
    record: dict[str, int] = {}
    for op in circuit.ops:
        if isinstance(op, MagicPrepOp):
            continue
        if isinstance(op, GateOp):
            state = apply_gate(state, op.gate, op.slots, circuit.base, circuit.n, cap)
        elif isinstance(op, MeasureOp):
            vec = embed_vector(op.observable(circuit.base), op.slots,
                               circuit.base, circuit.n)
            branches = measurement_projections(state, vec)
            outcome = sample_outcome(rng, [(s, p) for s, p, _ in branches])
            state = next(st for s, _, st in branches if s == outcome)
            record[op.register] = outcome
        elif isinstance(op, CorrectionOp):
            gate = resolve_correction(op, circuit.base, record)
            state = apply_gate(state, gate, op.slots, circuit.base, circuit.n, cap)
        else:
            raise TypeError(f"unknown op {op!r}")
    return DenseState(circuit.base, circuit.n, state), record


def enumerate_branches(circuit, cap: int = DEFAULT_DENSE_CAP, tol: float = 1e-12):
    """Every measurement branch as (record, DenseState, probability)."""
    from .circuits import (CorrectionOp, GateOp, MagicPrepOp, MeasureOp,
                           resolve_correction)
    results = []

    def walk(state, idx, record, prob):
        for i in range(idx, len(circuit.ops)):
            op = circuit.ops[i]
            if isinstance(op, MagicPrepOp):
                continue
            if isinstance(op, GateOp):
                state = apply_gate(state, op.gate, op.slots, circuit.base,
                                   circuit.n, cap)
            elif isinstance(op, CorrectionOp):
                gate = resolve_correction(op, circuit.base, record)
                state = apply_gate(state, gate, op.slots, circuit.base,
                                   circuit.n, cap)
            elif isinstance(op, MeasureOp):
                vec = embed_vector(op.observable(circuit.base), op.slots,
                                   circuit.base, circuit.n)
                for s, p, st in measurement_projections(state, vec, tol):
                    walk(st, i + 1, {**record, op.register: s}, prob * p)
                return
            else:
                raise TypeError(f"unknown op {op!r}")
        results.append((record, DenseState(circuit.base, circuit.n, state), prob))

    walk(_initial_vector(circuit, cap), 0, {}, 1.0)
    return results
