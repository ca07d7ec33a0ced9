"""Polynomial-time stabilizer simulation over G^n with exact phases.

The state is a list of commuting Pauli generators whose group has order
|G|^n and contains no nontrivial phase times the identity.  Generators are
kept as raw residue rows (x part, z part, phase); gates act by local
tableau conjugation of each generator, touching only the factors the gate
lives on.

Measurement bookkeeping works on the integer lattice spanned by the
generator vectors together with the factor moduli: a modular column
echelon form (with the generator products carried along each column op)
answers membership queries exactly, finds the smallest power of the
observable inside the stabilizer group, and produces the replacement
generating set after a collapse.  Correctness is established against the
dense oracle rather than by theory alone.
"""

from __future__ import annotations

import random as _random
from fractions import Fraction
from math import gcd, lcm

from .clifford import Gate, gate_tableau
from .errors import BackendCapabilityError
from .forms import Character
from .groups import Group, GroupElement, product_group
from .intmat import ext_gcd
from .pauli import PauliOperator, PauliVector
from .phases import Phase

__all__ = ["StabilizerState", "run_circuit", "enumerate_branches"]

# gate tableaux and conjugation images are pure data; share them across
# states (keys are frozen gate values plus the local factor orders)
_TABLEAU_CACHE: dict = {}
_CONJ_CACHE: dict = {}


class StabilizerState:
    """Pure stabilizer state of n qudits over a base group."""

    def __init__(self, base: Group, n: int, _init: bool = True):
        self.base = base
        self.n = n
        self.orders = base.orders * n
        self.m = len(self.orders)
        self.big = product_group(base, n)
        self.den = lcm(*self.orders)
        self.gens: list[list] = []
        self._pivots = None
        if _init:
            for r in range(self.m):
                z = [0] * self.m
                z[r] = 1
                self.gens.append([[0] * self.m, z, Phase()])

    # -- raw generator algebra ------------------------------------------

    def _mul(self, a, b):
        orders = self.orders
        den = self.den
        cross = 0
        az, bx = a[1], b[0]
        for i in range(self.m):
            if az[i] and bx[i]:
                cross += az[i] * bx[i] * (den // orders[i])
        phase = a[2] + b[2]
        if cross:
            phase = phase + Phase(cross, den)
        x = [(a[0][i] + b[0][i]) % orders[i] for i in range(self.m)]
        z = [(a[1][i] + b[1][i]) % orders[i] for i in range(self.m)]
        return [x, z, phase]

    def _inv(self, a):
        orders = self.orders
        den = self.den
        cross = sum(a[1][i] * a[0][i] * (den // orders[i]) for i in range(self.m))
        phase = -a[2] + Phase(cross, den)
        x = [(-v) % orders[i] for i, v in enumerate(a[0])]
        z = [(-v) % orders[i] for i, v in enumerate(a[1])]
        return [x, z, phase]

    def _pow(self, a, k: int):
        if k < 0:
            return self._pow(self._inv(a), -k)
        out = self._identity()
        base = a
        while k:
            if k & 1:
                out = self._mul(out, base)
            base = self._mul(base, base)
            k >>= 1
        return out

    def _identity(self):
        return [[0] * self.m, [0] * self.m, Phase()]

    # -- conversions ------------------------------------------------------

    def generator_operators(self) -> list[PauliOperator]:
        return [PauliOperator(self.big, g[2],
                              GroupElement(self.big, tuple(g[0])),
                              Character(self.big, tuple(g[1]))) for g in self.gens]

    def clone(self) -> "StabilizerState":
        out = StabilizerState(self.base, self.n, _init=False)
        out.gens = [[g[0][:], g[1][:], g[2]] for g in self.gens]
        return out

    # -- gates -------------------------------------------------------------

    def apply_gate(self, gate: Gate, slots) -> None:
        k = self.base.num_factors
        local = product_group(self.base, len(slots))
        cache_key = (gate, local.orders)
        tab = _TABLEAU_CACHE.get(cache_key)
        if tab is None:
            if len(_TABLEAU_CACHE) > 4096:
                _TABLEAU_CACHE.clear()
                _CONJ_CACHE.clear()
            tab = gate_tableau(gate, local)
            _TABLEAU_CACHE[cache_key] = tab
        conj_memo = _CONJ_CACHE.setdefault(cache_key, {})
        idxs = [s * k + f for s in slots for f in range(k)]
        for gen in self.gens:
            gx, gz = gen[0], gen[1]
            if all(gx[i] == 0 and gz[i] == 0 for i in idxs):
                continue
            lx = tuple(gx[i] for i in idxs)
            lz = tuple(gz[i] for i in idxs)
            hit = conj_memo.get((lx, lz))
            if hit is None:
                img = tab.conjugate(PauliOperator(
                    local, Phase(), GroupElement(local, lx), Character(local, lz)))
                hit = (img.x.residues, img.z.residues, img.phase)
                conj_memo[(lx, lz)] = hit
            for pos, i in enumerate(idxs):
                gx[i] = hit[0][pos]
                gz[i] = hit[1][pos]
            gen[2] = gen[2] + hit[2]
        self._pivots = None

    # -- lattice structure ---------------------------------------------------

    def _vector_of(self, gen) -> list[int]:
        return gen[0] + gen[1]

    def _ensure_pivots(self) -> None:
        if self._pivots is not None:
            return
        lorders = list(self.orders) + list(self.orders)
        rows = 2 * self.m
        work = [[self._vector_of(g), [g[0][:], g[1][:], g[2]]] for g in self.gens]
        pivots = []
        for r in range(rows):
            mr = lorders[r]
            bucket = [c for c in work if c[0][r] % mr]
            rest = [c for c in work if not c[0][r] % mr]
            while len(bucket) > 1:
                c1, c2 = bucket[-2], bucket[-1]
                # column Euclid on the row-r entries
                while c2[0][r] % mr:
                    q = (c1[0][r] % mr) // (c2[0][r] % mr)
                    if q:
                        c1[1] = self._mul(c1[1], self._pow(c2[1], -q))
                        c1[0] = [(c1[0][i] - q * c2[0][i]) % lorders[i]
                                 for i in range(rows)]
                    c1, c2 = c2, c1
                # c2 now has a zero entry at row r
                if any(c2[0]):
                    rest.append(c2)
                else:
                    self._assert_trivial(c2[1])
                bucket = bucket[:-2] + [c1]
            if bucket:
                piv = bucket[0]
                p = piv[0][r] % mr
                pivots.append((r, p, piv[0], piv[1]))
                t = mr // gcd(p, mr)
                scaled_vec = [(t * v) % lorders[i] for i, v in enumerate(piv[0])]
                if any(scaled_vec):
                    rest.append([scaled_vec, self._pow(piv[1], t)])
                else:
                    self._assert_trivial(self._pow(piv[1], t))
            work = rest
        for c in work:
            if any(c[0]):
                raise AssertionError("echelon pass left an unreduced column")
            self._assert_trivial(c[1])
        self._pivots = pivots

    def _assert_trivial(self, pauli) -> None:
        if any(pauli[0]) or any(pauli[1]) or not pauli[2].is_zero():
            raise AssertionError(
                "stabilizer invariant violated: a product of generators is a "
                "nontrivial phase times the identity")

    def _membership(self, w):
        """A generator product whose vector is ``w`` (mod the factor
        orders), or None when ``w`` is outside the stabilizer lattice."""
        self._ensure_pivots()
        lorders = list(self.orders) + list(self.orders)
        residual = [w[i] % lorders[i] for i in range(2 * self.m)]
        acc = self._identity()
        for (r, p, vec, pauli) in self._pivots:
            mr = lorders[r]
            rem = residual[r] % mr
            if not rem:
                continue
            g = gcd(p, mr)
            if rem % g:
                return None
            xcoef = (rem // g) * pow(p // g, -1, mr // g) % (mr // g)
            residual = [(residual[i] - xcoef * vec[i]) % lorders[i]
                        for i in range(2 * self.m)]
            acc = self._mul(acc, self._pow(pauli, xcoef))
        if any(residual):
            return None
        return acc

    # -- measurement -----------------------------------------------------------

    def _canonical_observable(self, vec: PauliVector):
        order = vec.order
        bare = [list(vec.x.residues), list(vec.z.residues), Phase()]
        residue = self._pow(bare, order)
        correction = Phase.from_fraction(-residue[2].frac / order)
        return [bare[0], bare[1], correction], order

    def outcome_support(self, vec: PauliVector):
        """(sorted outcome labels, probability of each) without collapsing."""
        if vec.group != self.big:
            raise ValueError("observable is not over the state's group")
        op, order = self._canonical_observable(vec)
        v = list(vec.x.residues) + list(vec.z.residues)
        t0 = None
        for t in sorted(d for d in range(1, order + 1) if order % d == 0):
            w = [t * val for val in v]
            witness = self._membership(w)
            if witness is not None:
                t0 = t
                break
        assert t0 is not None
        power = self._pow(op, t0)
        rel = self._mul(power, self._inv(witness))
        if any(rel[0]) or any(rel[1]):
            raise AssertionError("membership witness does not match the power")
        cfrac = rel[2].frac * order / t0
        if cfrac.denominator != 1:
            raise AssertionError("outcome class is not an integer")
        c = int(cfrac) % (order // t0)
        outcomes = sorted((c + j * (order // t0)) % order for j in range(t0))
        return outcomes, Fraction(1, t0), (op, order, t0, v)

    def measure(self, vec: PauliVector, rng=None, forced: int | None = None):
        """Measure a Pauli vector observable; returns (outcome, probability).

        The observable's canonical unitary has exact order m; outcomes are
        exponents s with eigenvalue exp(2*pi*i*s/m).  With ``forced`` the
        given branch is projected instead of sampling.
        """
        outcomes, prob, (op, order, t0, v) = self.outcome_support(vec)
        if forced is not None:
            if forced not in outcomes:
                raise ValueError(f"outcome {forced} has probability zero")
            s = forced
        elif t0 == 1:
            s = outcomes[0]
        else:
            from .dense import sample_outcome
            if rng is None:
                rng = _random.Random()
            s = sample_outcome(rng, [(o, prob) for o in outcomes])
        if t0 > 1:
            self._collapse(op, order, t0, v, s)
        return s, prob

    def _collapse(self, op, order, t0, v, outcome: int) -> None:
        # pairing values of each generator against the observable, as
        # integers over 1/order (exact: the observable has that order)
        den = self.den
        bvals = []
        for gen in self.gens:
            total = 0
            for i in range(self.m):
                q = self.orders[i]
                total += (gen[1][i] * v[i] - v[self.m + i] * gen[0][i]) * (den // q)
            scaled = total * order
            if scaled % den:
                raise AssertionError("pairing against the observable is not "
                                     "a multiple of 1/order")
            bvals.append((scaled // den) % order)
        k = len(self.gens)
        new_gens: list[list] = []
        if any(bvals):
            first = next(j for j in range(k) if bvals[j])
            g = bvals[first]
            u = [0] * k
            u[first] = 1
            for j in range(first + 1, k):
                if bvals[j]:
                    g2, xc, yc = ext_gcd(g, bvals[j])
                    u = [xc * val for val in u]
                    u[j] += yc
                    g = g2
            for j in range(k):
                coeffs = [0] * k
                coeffs[j] = 1
                step = bvals[j] // g
                if step:
                    coeffs = [coeffs[i] - step * u[i] for i in range(k)]
                if any(coeffs):
                    new_gens.append(self._combine(coeffs))
            scale = order // gcd(g, order)
            if scale:
                coeffs = [scale * val for val in u]
                if any(coeffs):
                    new_gens.append(self._combine(coeffs))
        else:
            new_gens = [[g[0][:], g[1][:], g[2]] for g in self.gens]
        # the measured operator joins the group with its outcome phase
        w = [op[0][:], op[1][:], op[2] + Phase(-outcome, order)]
        new_gens.append(w)
        self.gens = new_gens
        self._pivots = None
        self._reduce_generators()

    def _combine(self, coeffs):
        out = self._identity()
        for j, c in enumerate(coeffs):
            if c:
                out = self._mul(out, self._pow(self.gens[j], c))
        return out

    def _reduce_generators(self) -> None:
        """Replace the generator list by the echelon pivot products; this
        bounds the generator count by 2*m and re-checks the invariants."""
        self._ensure_pivots()
        self.gens = [[pauli[0][:], pauli[1][:], pauli[2]]
                     for (_r, _p, _vec, pauli) in self._pivots]
        self._pivots = None

    # -- validation --------------------------------------------------------

    def validate(self) -> None:
        for a in self.gens:
            va = PauliVector(self.big, GroupElement(self.big, tuple(a[0])),
                             Character(self.big, tuple(a[1])))
            order = va.order
            residue = self._pow(a, order)
            if any(residue[0]) or any(residue[1]) or not residue[2].is_zero():
                raise AssertionError("generator power relation violated")
        from .pauli import beta
        ops = self.generator_operators()
        for i in range(len(ops)):
            for j in range(i + 1, len(ops)):
                if not beta(ops[i].vector(), ops[j].vector()).is_zero():
                    raise AssertionError("generators do not commute")
        self._ensure_pivots()
        lorders = list(self.orders) + list(self.orders)
        size = 1
        for (r, p, _vec, _pauli) in self._pivots:
            size *= lorders[r] // gcd(p, lorders[r])
        if size != self.big.order:
            raise AssertionError(
                f"stabilizer group has order {size}, expected {self.big.order}")


def run_circuit(circuit, rng=None, seed=None):
    """Run a Clifford circuit on the stabilizer backend."""
    from .circuits import (CorrectionOp, GateOp, MagicPrepOp, MeasureOp,
                           resolve_correction)
    from .dense import embed_vector
    if rng is None:
        rng = _random.Random(seed)
    state = StabilizerState(circuit.base, circuit.n)
    record: dict[str, int] = {}
    for op in circuit.ops:
        if isinstance(op, MagicPrepOp):
            raise BackendCapabilityError(
                "magic state preparation is not a stabilizer operation")
        if isinstance(op, GateOp):
            state.apply_gate(op.gate, op.slots)
        elif isinstance(op, MeasureOp):
            vec = embed_vector(op.observable(circuit.base), op.slots,
                               circuit.base, circuit.n)
            outcome, _ = state.measure(vec, rng=rng)
            record[op.register] = outcome
        elif isinstance(op, CorrectionOp):
            gate = resolve_correction(op, circuit.base, record)
            state.apply_gate(gate, op.slots)
        else:
            raise TypeError(f"unknown op {op!r}")
    return state, record


def enumerate_branches(circuit):
    """Every measurement branch as (record, StabilizerState, exact prob)."""
    from .circuits import (CorrectionOp, GateOp, MagicPrepOp, MeasureOp,
                           resolve_correction)
    from .dense import embed_vector
    results = []

    def walk(state: StabilizerState, idx: int, record: dict, prob: Fraction):
        for i in range(idx, len(circuit.ops)):
            op = circuit.ops[i]
            if isinstance(op, MagicPrepOp):
                raise BackendCapabilityError(
                    "magic state preparation is not a stabilizer operation")
            if isinstance(op, GateOp):
                state.apply_gate(op.gate, op.slots)
            elif isinstance(op, CorrectionOp):
                gate = resolve_correction(op, circuit.base, record)
                state.apply_gate(gate, op.slots)
            elif isinstance(op, MeasureOp):
                vec = embed_vector(op.observable(circuit.base), op.slots,
                                   circuit.base, circuit.n)
                outcomes, p, _ = state.outcome_support(vec)
                for s in outcomes:
                    branch = state.clone()
                    branch.measure(vec, forced=s)
                    walk(branch, i + 1, {**record, op.register: s}, prob * p)
                return
            else:
                raise TypeError(f"unknown op {op!r}")
        results.append((record, state, prob))

    walk(StabilizerState(circuit.base, circuit.n), 0, {}, Fraction(1))
    return results
