import json
import random

import pytest

from gclifford.circuits import (circuit_from_json, circuit_to_json,
                                dump_document, gate_from_json, gate_to_json,
                                load_document, matrix_embedded_to_natural,
                                matrix_natural_to_embedded, sequence_from_json,
                                sequence_to_json, symplectic_from_json,
                                symplectic_to_json, tableau_from_json,
                                tableau_to_json)
from gclifford.clifford import gate_tableau, sequence_tableau
from gclifford.groups import make_group
from gclifford.protocols import build_cx_protocol, build_magic_injection
from gclifford.phases import Phase
from gclifford.symplectic import decompose, random_symplectic
from gclifford.verify import random_clifford_circuit


def test_gate_json_roundtrip():
    rng = random.Random(3)
    from test_clifford import random_gate
    for orders in [(2,), (4, 2)]:
        g = make_group(orders)
        for _ in range(12):
            gate = random_gate(g, rng)
            back = gate_from_json(json.loads(json.dumps(gate_to_json(gate))), g)
            assert gate_tableau(back, g) == gate_tableau(gate, g)


def test_circuit_json_roundtrip(tmp_path):
    base = make_group([4, 2])
    rng = random.Random(5)
    circ = random_clifford_circuit(base, 2, rng, num_gates=5, num_measurements=2)
    doc = circuit_to_json(circ)
    path = tmp_path / "circ.json"
    dump_document(doc, path)
    back = circuit_from_json(load_document(path))
    assert back.base == circ.base and back.n == circ.n
    assert circuit_to_json(back) == doc


def test_protocol_circuits_serialize(tmp_path):
    base = make_group([2])
    circ = build_cx_protocol(base)
    doc = circuit_to_json(circ)
    back = circuit_from_json(doc)
    assert circuit_to_json(back) == doc

    table = {base.zero(): Phase(), base.element((1,)): Phase(1, 8)}
    magic, spec = build_magic_injection(base, table)
    doc2 = circuit_to_json(magic)
    back2 = circuit_from_json(doc2)
    assert circuit_to_json(back2) == doc2
    assert spec["slot"] == 1


def test_sequence_json_roundtrip():
    g = make_group([4, 2])
    rng = random.Random(7)
    sigma = random_symplectic(g, rng)
    seq = decompose(sigma)
    doc = sequence_to_json(seq, g)
    back, group = sequence_from_json(json.loads(json.dumps(doc)))
    assert group == g
    assert sequence_tableau(back, g) == sequence_tableau(seq, g)


def test_symplectic_json_roundtrip_both_conventions():
    g = make_group([4, 2])
    rng = random.Random(9)
    sigma = random_symplectic(g, rng)
    for convention in ("natural", "embedded"):
        doc = symplectic_to_json(g, sigma.matrix.entries, convention)
        assert doc["convention"] == convention
        back = symplectic_from_json(doc)
        assert back.matrix.entries == sigma.matrix.entries


def test_embedded_conversion_worked_example():
    orders = (4, 2, 4, 2)
    embedded = [[2, 1, 3, 0], [2, 0, 2, 0], [1, 0, 0, 1], [0, 1, 0, 1]]
    natural = matrix_embedded_to_natural(orders, embedded)
    assert natural == [[2, 2, 3, 0], [1, 0, 1, 0], [1, 0, 0, 2], [0, 1, 0, 1]]
    # embedding back is total on valid natural matrices
    assert matrix_embedded_to_natural(orders,
                                      matrix_natural_to_embedded(orders, natural)) \
        == natural


def test_tableau_json_roundtrip():
    g = make_group([4, 2])
    rng = random.Random(11)
    from test_clifford import random_gate
    tab = sequence_tableau([random_gate(g, rng) for _ in range(5)], g)
    back = tableau_from_json(tableau_to_json(tab))
    assert back == tab


def test_bad_documents_rejected():
    with pytest.raises(ValueError):
        circuit_from_json({"type": "circuit", "format_version": 99,
                           "group": "2", "qudits": 1, "operations": []})
    with pytest.raises(ValueError):
        symplectic_from_json({"type": "gate_sequence", "format_version": 1})
