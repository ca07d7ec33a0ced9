"""Acceptance suite: one test per criterion, each printing a pass/fail line
with its runtime and asserting its stated tolerance and budget."""

import itertools
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from gclifford.clifford import (AutomorphismGate, FourierGate, PauliGate,
                                QuadraticGate, gate_tableau,
                                two_local_factorize)
from gclifford.dense import (enumerate_branches, pauli_apply,
                             pauli_matrix, tableau_faithful)
from gclifford.elementary import random_automorphism
from gclifford.errors import PreconditionFailedError
from gclifford.forms import (Character, is_nondegenerate,
                             standard_nondegenerate_form)
from gclifford.groups import (HomMatrix, canonicalize, make_group,
                              product_group)
from gclifford.pauli import PauliOperator, PauliVector
from gclifford.phases import Phase
from gclifford.protocols import (check_cx_protocol, check_magic_injection,
                                 check_split_fourier, check_triple_identity,
                                 cx_insufficiency_certificate)
from gclifford.stabilizer import StabilizerState
from gclifford.stabilizer import enumerate_branches as tableau_branches
from gclifford.symplectic import (SymplecticMap, decompose, doubled_group,
                                  is_symplectic, random_symplectic,
                                  sequence_image)
from gclifford.verify import (random_clifford_circuit, random_quadratic_form,
                              random_pauli_operator)

SIX_GROUPS = [(2,), (3,), (4,), (6,), (2, 2), (2, 4)]


def _report(name: str, started: float, budget: float) -> None:
    elapsed = time.monotonic() - started
    print(f"\n[acceptance] {name}: PASS ({elapsed:.2f}s / budget {budget:.0f}s)")
    assert elapsed < budget, f"{name} exceeded its runtime budget"


def test_criterion_1_pauli_algebra():
    started = time.monotonic()
    rng = random.Random(101)
    for orders in SIX_GROUPS:
        g = make_group(orders)
        # (2) products within the X and Z families, exact
        for a in g.elements():
            for b in g.elements():
                assert PauliOperator.x_shift(a) * PauliOperator.x_shift(b) \
                    == PauliOperator.x_shift(a + b)
                ca, cb = Character(g, a.residues), Character(g, b.residues)
                assert PauliOperator.z_char(ca) * PauliOperator.z_char(cb) \
                    == PauliOperator.z_char(ca + cb)
                # (3) the commutation phase is chi(g)
                lhs = PauliOperator.z_char(ca) * PauliOperator.x_shift(b)
                rhs = (PauliOperator.x_shift(b) * PauliOperator.z_char(ca)
                       ).times_phase(ca.eval(b))
                assert lhs == rhs
        # (1) unitarity and dense faithfulness of the product
        for _ in range(8):
            p, q = random_pauli_operator(g, rng), random_pauli_operator(g, rng)
            mp = pauli_matrix(p)
            assert np.max(np.abs(mp @ mp.conj().T - np.eye(g.order))) < 1e-9
            assert np.max(np.abs(mp @ pauli_matrix(q)
                                 - pauli_matrix(p * q))) < 1e-9
    # (4)/(5): centralizer and phase-commutant dimensions on Z2, Z3, Z4
    from test_pauli import _conjugation_phase_constraints, _nullspace_dim
    for orders in [(2,), (3,), (4,)]:
        g = make_group(orders)
        zero = (0,) * g.num_factors
        assert _nullspace_dim(_conjugation_phase_constraints(g, zero, zero)) == 1
        for ge in g.elements():
            for chi in g.elements():
                assert _nullspace_dim(_conjugation_phase_constraints(
                    g, ge.residues, chi.residues)) == 1
    _report("criterion 1 (Pauli algebra)", started, 10)


def test_criterion_2_conjugation_rules():
    started = time.monotonic()
    rng = random.Random(202)
    for orders in SIX_GROUPS:
        g = make_group(orders)
        gates = [FourierGate(HomMatrix.identity(g)),
                 FourierGate(HomMatrix.identity(g), dagger=True),
                 QuadraticGate(standard_nondegenerate_form(g)),
                 AutomorphismGate(HomMatrix.identity(g)),
                 PauliGate(random_pauli_operator(g, rng))]
        for _ in range(4):
            gates.append(AutomorphismGate(random_automorphism(g, rng)))
            gates.append(QuadraticGate(random_quadratic_form(g, rng)))
            gates.append(FourierGate(random_automorphism(g, rng),
                                     rng.random() < 0.3))
        for gate in gates:
            tab = gate_tableau(gate, g)
            tab.validate()
            assert tableau_faithful(tab, gate, g, tol=1e-9), (orders, gate)
    _report("criterion 2 (conjugation rules)", started, 30)


def test_criterion_3_decomposition():
    started = time.monotonic()
    max_ratio = 0.0
    # exhaustive over Z2: the full symplectic group
    z2 = make_group([2])
    big = doubled_group(z2)
    count = 0
    for entries in itertools.product(range(2), repeat=4):
        mat = ((entries[0], entries[1]), (entries[2], entries[3]))
        try:
            sigma = SymplecticMap(z2, HomMatrix(big, big, mat))
        except ValueError:
            continue
        if not is_symplectic(sigma):
            continue
        count += 1
        seq = decompose(sigma)
        assert sequence_image(seq, z2).matrix.entries == sigma.matrix.entries
        max_ratio = max(max_ratio, len(seq) / 1.0)
    assert count == 6
    for orders in [(4,), (6,), (2, 2), (2, 4)]:
        group = make_group(orders)
        canon = group if group.canonical else canonicalize(group)[0]
        rng = random.Random(303 + sum(orders))
        d1 = canon.num_factors
        for _ in range(100):
            sigma = random_symplectic(canon, rng)
            seq = decompose(sigma)
            assert sequence_image(seq, canon).matrix.entries \
                == sigma.matrix.entries
            max_ratio = max(max_ratio, len(seq) / (d1 * d1))
    print(f"\n[acceptance] decompose gate-count constant c = {max_ratio:.2f} "
          f"(bound: length <= c*(d+1)^2)")
    assert max_ratio <= 16.0
    _report("criterion 3 (symplectic decomposition)", started, 60)


def test_criterion_4_two_local_factorization():
    started = time.monotonic()
    for orders in [(2,), (2, 4)]:
        base = make_group(orders)
        k = base.num_factors
        rng = random.Random(404 + sum(orders))
        for n in (2, 3):
            big = product_group(base, n)
            for _ in range(25):
                tau = random_automorphism(big, rng)
                factors = two_local_factorize(tau, base, n)
                acc = HomMatrix.identity(big)
                for f in factors:
                    acc = acc.compose(f)
                assert acc.entries == tau.entries
                for f in factors:
                    touched = set()
                    for i in range(big.num_factors):
                        for j in range(big.num_factors):
                            if f.entries[i][j] != (1 if i == j else 0):
                                touched.update((i // k, j // k))
                    assert len(touched) <= 2
    _report("criterion 4 (two-local factorization)", started, 30)


def test_criterion_5_cx_protocol():
    started = time.monotonic()
    for orders in [(2,), (3,), (4,), (2, 4)]:
        report = check_cx_protocol(make_group(orders), tol=1e-9)
        assert report.passed, (orders, report.failures[:3])
        assert report.branch_count > 0
    _report("criterion 5 (measurement-based CX)", started, 60)


def test_criterion_6_magic_injection():
    started = time.monotonic()
    z2 = make_group([2])
    t_like = {z2.zero(): Phase(), z2.element((1,)): Phase(1, 8)}
    report = check_magic_injection(z2, t_like, tol=1e-9)
    assert report.passed, report.failures
    z3 = make_group([3])
    cubic = {z3.element((r,)): Phase(r ** 3, 9) for r in range(3)}
    report = check_magic_injection(z3, cubic, tol=1e-9)
    assert report.passed, report.failures
    # precondition check rejects a table whose correction is not quadratic
    z4 = make_group([4])
    bad = {z4.element((r,)): Phase(r ** 3, 16) for r in range(4)}
    with pytest.raises(PreconditionFailedError):
        from gclifford.protocols import build_magic_injection
        build_magic_injection(z4, bad)
    _report("criterion 6 (magic state injection)", started, 30)


def test_criterion_7_fourier_identities():
    started = time.monotonic()
    rng = random.Random(707)
    for orders in [(2,), (3,), (4,), (2, 4)]:
        group = make_group(orders)
        forms = [standard_nondegenerate_form(group)]
        while len(forms) < 3:
            cand = random_quadratic_form(group, rng)
            if is_nondegenerate(cand):
                forms.append(cand)
        for xi in forms:
            report = check_triple_identity(xi, tol=1e-9)
            assert report.passed, (orders, report.failures)
    for gorders, horders in [((2,), (2,)), ((4,), (2,))]:
        xi = standard_nondegenerate_form(make_group(gorders))
        report = check_split_fourier(xi, make_group(horders), tol=1e-9)
        assert report.passed, report.failures
    _report("criterion 7 (Fourier/quadratic identities)", started, 30)


def test_criterion_8_insufficiency_certificate():
    started = time.monotonic()
    report = cx_insufficiency_certificate(run_bfs=False)
    assert report.passed, report.failures
    assert report.details["one_slot_count"] == 8
    _report("criterion 8 (two-qudit insufficiency, invariant path)", started, 10)
    bfs_started = time.monotonic()
    report = cx_insufficiency_certificate(run_bfs=True, bfs_cap=1 << 20)
    assert report.passed, report.failures
    assert not report.details["bfs_capped"]
    print(f"\n[acceptance] BFS closure size {report.details['bfs_closure_size']} "
          f"({time.monotonic() - bfs_started:.2f}s, cap 2^20)")


def test_criterion_9_backend_equivalence():
    started = time.monotonic()
    total = 0
    for orders in [(2,), (2, 4)]:
        base = make_group(orders)
        rng = random.Random(909 + sum(orders))
        for i in range(100):
            n = rng.choice([1, 2, 3]) if base.order ** 3 <= 1024 else rng.choice([1, 2])
            circuit = random_clifford_circuit(
                base, n, rng, num_gates=rng.randint(4, 12),
                num_measurements=rng.randint(1, 4))
            dense_by_record = {}
            dense_states = {}
            for record, state, prob in enumerate_branches(circuit):
                key = tuple(sorted(record.items()))
                dense_by_record[key] = dense_by_record.get(key, 0.0) + prob
                dense_states[key] = state
            tab_by_record = {}
            for record, stab, prob in tableau_branches(circuit):
                key = tuple(sorted(record.items()))
                tab_by_record[key] = tab_by_record.get(key, Fraction(0)) + prob
                vec = dense_states[key].vector
                for gen in stab.generator_operators():
                    dev = np.linalg.norm(pauli_apply(gen, vec) - vec)
                    assert dev < 1e-9 * (len(vec) ** 0.5 + 1), (orders, i)
            keys = set(dense_by_record) | set(tab_by_record)
            tv = 0.5 * sum(abs(dense_by_record.get(k, 0.0)
                               - float(tab_by_record.get(k, 0))) for k in keys)
            assert tv < 1e-9, (orders, i, tv)
            total += 1
    assert total == 200
    _report("criterion 9 (backend equivalence, 200 circuits)", started, 120)


def test_criterion_9_large_instance_runtime():
    started = time.monotonic()
    base = make_group([2, 4])
    n = 50
    rng = random.Random(5050)
    state = StabilizerState(base, n)
    big = product_group(base, n)
    from gclifford.clifford import CXGate
    for _ in range(500):
        kind = rng.randrange(4)
        if kind == 0:
            state.apply_gate(CXGate(), tuple(rng.sample(range(n), 2)))
        elif kind == 1:
            state.apply_gate(FourierGate(HomMatrix.identity(base)),
                             (rng.randrange(n),))
        elif kind == 2:
            state.apply_gate(QuadraticGate(standard_nondegenerate_form(base)),
                             (rng.randrange(n),))
        else:
            state.apply_gate(CXGate(dagger=True), tuple(rng.sample(range(n), 2)))
    for _ in range(4):
        z = [0] * big.num_factors
        z[rng.randrange(big.num_factors)] = 1
        state.measure(PauliVector(big, big.zero(), Character(big, tuple(z))),
                      rng=rng)
    elapsed = time.monotonic() - started
    print(f"\n[acceptance] 50-qudit 500-gate tableau run: {elapsed:.2f}s")
    assert elapsed < 5.0
    state.validate()
