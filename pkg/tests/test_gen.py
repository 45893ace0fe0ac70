import collections

import pytest

from serprop import (emit_bench, has_reconvergence, parse_bench, random_dag,
                     random_tree)


def _fanout_counts(nl):
    counts = collections.Counter()
    for net in range(nl.n_nets):
        for src in nl.gate_inputs[net]:
            counts[src] += 1
    return counts


def _depth(nl):
    depth = [0] * nl.n_nets
    for net in nl.topo:
        ins = nl.gate_inputs[net]
        if ins:
            depth[net] = 1 + max(depth[s] for s in ins)
    return max(depth, default=0)


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("n_inputs", [2, 5, 16])
def test_random_tree_is_fanout_free(n_inputs, seed):
    nl = random_tree(n_inputs, seed=seed)
    assert all(c <= 1 for c in _fanout_counts(nl).values())
    assert not has_reconvergence(nl)


@pytest.mark.parametrize("seed", range(8))
def test_random_tree_respects_depth_bound(seed):
    nl = random_tree(16, seed=seed, max_depth=8)
    assert _depth(nl) <= 8


def test_random_tree_uses_every_input_and_has_one_output():
    nl = random_tree(7, seed=3)
    assert len(nl.pseudo_inputs) == 7
    assert len(nl.po_order) == 1
    used = {s for net in range(nl.n_nets) for s in nl.gate_inputs[net]}
    assert set(nl.pseudo_inputs) <= used


def test_random_tree_is_deterministic():
    a = emit_bench(random_tree(9, seed=42))
    b = emit_bench(random_tree(9, seed=42))
    c = emit_bench(random_tree(9, seed=43))
    assert a == b
    assert a != c


def test_random_tree_rejects_bad_sizes():
    with pytest.raises(ValueError):
        random_tree(0, seed=1)
    with pytest.raises(ValueError):
        random_tree(3, seed=1, max_depth=0)


@pytest.mark.parametrize("seed", range(6))
def test_random_dag_counts_and_reconvergence(seed):
    nl = random_dag(8, 40, seed=seed)
    assert len(nl.pseudo_inputs) == 8
    n_gates = sum(1 for k in range(nl.n_nets) if nl.gate_inputs[k])
    assert n_gates == 40
    assert has_reconvergence(nl)
    assert len(nl.po_order) >= 1


@pytest.mark.parametrize("seed", range(6))
def test_random_dag_has_no_dangling_nets(seed):
    nl = random_dag(8, 40, seed=seed)
    driven = {s for net in range(nl.n_nets) for s in nl.gate_inputs[net]}
    for net in range(nl.n_nets):
        assert net in driven or net in nl.capture_points


def test_random_dag_is_deterministic():
    a = emit_bench(random_dag(8, 30, seed=7))
    b = emit_bench(random_dag(8, 30, seed=7))
    assert a == b


def test_random_dag_round_trips_through_bench():
    nl = random_dag(8, 30, seed=7)
    again = parse_bench(emit_bench(nl), name=nl.name)
    assert emit_bench(again) == emit_bench(nl)


def test_has_reconvergence_hand_cases():
    tree = parse_bench("INPUT(A)\nINPUT(B)\nOUTPUT(Y)\nY = AND(A, B)\n")
    assert not has_reconvergence(tree)
    diamond = parse_bench(
        "INPUT(A)\nOUTPUT(Y)\nP = NOT(A)\nQ = BUFF(A)\nY = AND(P, Q)\n")
    assert has_reconvergence(diamond)
    # shared input counts: AND(A, B) and OR(A, B) both see A
    shared = parse_bench(
        "INPUT(A)\nINPUT(B)\nOUTPUT(Y)\n"
        "P = AND(A, B)\nQ = OR(A, B)\nY = XOR(P, Q)\n")
    assert has_reconvergence(shared)
