import math

import numpy as np
import pytest

from serprop import (analyze_all, exhaustive_epp, mc_epp, parse_bench,
                     random_dag, sample_vectors, simulate_pair,
                     simulate_vector, sp_independent)
from serprop.sigprob import EXACT_INPUT_LIMIT

AND_TOY = "INPUT(A)\nINPUT(B)\nOUTPUT(Y)\nY = AND(A, B)\n"
XOR_TOY = "INPUT(A)\nINPUT(B)\nOUTPUT(Y)\nY = XOR(A, B)\n"


def _vec(nl, **by_name):
    return {nl.id_of(k): v for k, v in by_name.items()}


def test_simulate_vector_evaluates_all_gates():
    nl = parse_bench(
        "INPUT(A)\nINPUT(B)\nOUTPUT(Y)\n"
        "U = NAND(A, B)\nV = XOR(U, A)\nY = NOR(V, B)\n")
    values = simulate_vector(nl, _vec(nl, A=1, B=0))
    assert values[nl.id_of("U")] == 1
    assert values[nl.id_of("V")] == 0
    assert values[nl.id_of("Y")] == 1


def test_simulate_vector_truth_tables():
    nl = parse_bench(
        "INPUT(A)\nINPUT(B)\nOUTPUT(Y)\n"
        "G1 = AND(A, B)\nG2 = OR(A, B)\nG3 = XOR(A, B)\nG4 = NAND(A, B)\n"
        "G5 = NOR(A, B)\nG6 = XNOR(A, B)\nG7 = NOT(A)\nG8 = BUFF(A)\n"
        "Y = OR(G1, G2, G3, G4, G5, G6, G7, G8)\n")
    for a in (0, 1):
        for b in (0, 1):
            v = simulate_vector(nl, _vec(nl, A=a, B=b))
            assert v[nl.id_of("G1")] == (a & b)
            assert v[nl.id_of("G2")] == (a | b)
            assert v[nl.id_of("G3")] == (a ^ b)
            assert v[nl.id_of("G4")] == 1 - (a & b)
            assert v[nl.id_of("G5")] == 1 - (a | b)
            assert v[nl.id_of("G6")] == 1 - (a ^ b)
            assert v[nl.id_of("G7")] == 1 - a
            assert v[nl.id_of("G8")] == a


def test_simulate_vector_coverage_validation():
    nl = parse_bench(AND_TOY)
    with pytest.raises(ValueError, match="missing"):
        simulate_vector(nl, _vec(nl, A=1))
    with pytest.raises(ValueError, match="extra"):
        simulate_vector(nl, {**_vec(nl, A=1, B=0), nl.id_of("Y"): 1})
    with pytest.raises(ValueError, match="non-binary"):
        simulate_vector(nl, _vec(nl, A=2, B=0))


def test_simulate_pair_xor_always_propagates():
    nl = parse_bench(XOR_TOY)
    a, y = nl.id_of("A"), nl.id_of("Y")
    for bits in range(4):
        vec = _vec(nl, A=bits & 1, B=bits >> 1)
        golden, faulty, flipped = simulate_pair(nl, vec, a)
        assert flipped == {y}
        assert faulty[a] == 1 - golden[a]


def test_simulate_pair_and_gate_masks():
    nl = parse_bench(AND_TOY)
    a = nl.id_of("A")
    _, _, flipped = simulate_pair(nl, _vec(nl, A=1, B=0), a)
    assert flipped == frozenset()
    _, _, flipped = simulate_pair(nl, _vec(nl, A=1, B=1), a)
    assert flipped == {nl.id_of("Y")}


def test_simulate_pair_flip_at_capture_point():
    nl = parse_bench(AND_TOY)
    y = nl.id_of("Y")
    _, faulty, flipped = simulate_pair(nl, _vec(nl, A=0, B=0), y)
    assert flipped == {y}
    assert faulty[y] == 1


def test_exhaustive_epp_and_toy():
    nl = parse_bench(AND_TOY)
    res = exhaustive_epp(nl, nl.id_of("A"))
    assert res.per_output == {nl.id_of("Y"): pytest.approx(0.5)}
    assert res.aggregate_any == pytest.approx(0.5)
    assert res.n_vectors == 4
    assert res.method == "exhaustive"


def test_exhaustive_epp_weighted_inputs():
    nl = parse_bench(AND_TOY)
    b = nl.id_of("B")
    res = exhaustive_epp(nl, nl.id_of("A"), input_sp={b: 0.7})
    assert res.aggregate_any == pytest.approx(0.7)


def test_exhaustive_epp_site_at_capture():
    nl = parse_bench(AND_TOY)
    y = nl.id_of("Y")
    res = exhaustive_epp(nl, y)
    assert res.per_output[y] == 1.0


def test_exhaustive_matches_pairwise_scalar_oracle():
    # the packed kernel against the plain dict-based simulator, all
    # vectors, all sites
    nl = random_dag(5, 20, seed=13)
    n_in = len(nl.pseudo_inputs)
    for site in range(nl.n_nets):
        packed = exhaustive_epp(nl, site)
        counts = {c: 0 for c in nl.capture_points}
        any_count = 0
        for v in range(1 << n_in):
            vec = {int(net): (v >> k) & 1
                   for k, net in enumerate(nl.pseudo_inputs)}
            _, _, flipped = simulate_pair(nl, vec, site)
            for c in flipped:
                counts[c] += 1
            any_count += bool(flipped)
        total = 1 << n_in
        assert packed.aggregate_any == pytest.approx(any_count / total)
        for c, e in packed.per_output.items():
            assert e == pytest.approx(counts[c] / total)


def test_exhaustive_input_limit_guard():
    lines = [f"INPUT(I{k})" for k in range(EXACT_INPUT_LIMIT + 1)]
    lines += ["OUTPUT(Y)", "Y = AND(I0, I1)"]
    with pytest.warns(UserWarning):
        nl = parse_bench("\n".join(lines) + "\n")
    with pytest.raises(ValueError, match=str(EXACT_INPUT_LIMIT)):
        exhaustive_epp(nl, 0)


def test_mc_epp_is_deterministic_per_seed():
    nl = random_dag(8, 40, seed=1)
    a = mc_epp(nl, 3, 5_000, seed=42)
    b = mc_epp(nl, 3, 5_000, seed=42)
    assert a == b
    c = mc_epp(nl, 3, 5_000, seed=43)
    assert a != c


def test_mc_epp_converges_to_exhaustive():
    nl = random_dag(8, 40, seed=2)
    n = 100_000
    for site in range(0, nl.n_nets, 6):
        exact = exhaustive_epp(nl, site)
        mc = mc_epp(nl, site, n, seed=7)
        assert set(mc.per_output) == set(exact.per_output)
        for c, p in exact.per_output.items():
            sigma = math.sqrt(p * (1 - p) / n)
            assert abs(mc.per_output[c] - p) <= max(4 * sigma, 1e-12)


def test_mc_epp_deterministic_inputs_match_single_vector():
    nl = random_dag(7, 35, seed=9)
    rng = np.random.default_rng(3)
    bits = {int(net): int(rng.integers(0, 2)) for net in nl.pseudo_inputs}
    input_sp = {net: float(v) for net, v in bits.items()}
    for site in range(nl.n_nets):
        mc = mc_epp(nl, site, 256, seed=11, input_sp=input_sp)
        _, _, flipped = simulate_pair(nl, bits, site)
        for c, e in mc.per_output.items():
            assert e == (1.0 if c in flipped else 0.0)


def test_mc_epp_validation():
    nl = parse_bench(AND_TOY)
    with pytest.raises(ValueError):
        mc_epp(nl, 0, 0, seed=1)
    with pytest.raises(ValueError):
        mc_epp(nl, 99, 100, seed=1)


def test_mc_epp_dangling_site_sees_nothing():
    with pytest.warns(UserWarning):
        nl = parse_bench(
            "INPUT(A)\nINPUT(B)\nOUTPUT(Y)\nY = NOT(A)\nZ = NOT(B)\n")
    res = mc_epp(nl, nl.id_of("Z"), 128, seed=0)
    assert res.per_output == {}
    assert res.aggregate_any == 0.0


def test_analytical_tracks_exhaustive_on_small_dag():
    # not a tolerance claim, just that the two pipelines describe the same
    # circuit: zero/one cells must agree exactly
    nl = random_dag(6, 25, seed=17)
    sp = sp_independent(nl)
    for rep in analyze_all(nl, sp):
        exact = exhaustive_epp(nl, rep.site)
        assert set(rep.per_output) == set(exact.per_output)
        for c, p in exact.per_output.items():
            if p in (0.0, 1.0) and rep.per_output[c] in (0.0, 1.0):
                continue
            assert 0.0 <= rep.per_output[c] <= 1.0


def test_sample_vectors_shape_and_determinism():
    nl = parse_bench(AND_TOY)
    vs = sample_vectors(nl, 10, seed=5)
    assert len(vs) == 10
    assert all(set(v) == set(nl.pseudo_inputs) for v in vs)
    assert vs == sample_vectors(nl, 10, seed=5)
    for v in vs:
        simulate_vector(nl, v)
