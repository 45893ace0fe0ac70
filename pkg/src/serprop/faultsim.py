"""Fault-injection baselines for the analytical EPP engine.

Golden/faulty pair simulation of a single bit-flip per run: Monte Carlo
over weighted random vectors, and exact weighted enumeration of the whole
input space for small circuits.  Both report the observed propagation
fraction per capture point so they compose with the same downstream code
as the analytical reports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _bits
from .netlist import GateKind, Netlist, fanout_cone
from .sigprob import EXACT_INPUT_LIMIT

Vector = dict[int, int]


@dataclass(frozen=True)
class SimEppResult:
    """Observed propagation of one injected flip over many vectors."""

    site: int
    n_vectors: int
    per_output: dict[int, float]
    aggregate_any: float
    aggregate_max: float
    method: str


def _eval_gate(kind: GateKind, ins: list[int]) -> int:
    if kind in (GateKind.AND, GateKind.NAND):
        v = int(all(ins))
    elif kind in (GateKind.OR, GateKind.NOR):
        v = int(any(ins))
    elif kind in (GateKind.XOR, GateKind.XNOR):
        v = 0
        for b in ins:
            v ^= b
    else:  # NOT / BUFF
        v = ins[0]
    if kind in (GateKind.NAND, GateKind.NOR, GateKind.XNOR, GateKind.NOT):
        v ^= 1
    return v


def _check_vector(netlist: Netlist, vector: Vector):
    want = set(netlist.pseudo_inputs)
    got = set(vector)
    if got != want:
        missing = sorted(want - got)
        extra = sorted(got - want)
        raise ValueError(
            f"vector must assign exactly the pseudo-primary inputs; "
            f"missing {missing}, extra {extra}")
    for net, b in vector.items():
        if b not in (0, 1):
            raise ValueError(f"net {net} assigned non-binary value {b!r}")


def simulate_vector(netlist: Netlist, vector: Vector) -> dict[int, int]:
    """Evaluate one input vector; returns the value of every net."""
    _check_vector(netlist, vector)
    values = dict(vector)
    for u in netlist.topo:
        kind = netlist.kinds[u]
        if kind in (GateKind.INPUT, GateKind.DFF):
            continue
        values[u] = _eval_gate(kind, [values[v] for v in netlist.gate_inputs[u]])
    return values


def simulate_pair(netlist: Netlist, vector: Vector, site: int,
                  ) -> tuple[dict[int, int], dict[int, int], frozenset[int]]:
    """Golden and faulty evaluation of one vector with a flip at ``site``.

    Only the fan-out cone is re-evaluated.  Returns both value maps and
    the set of capture points whose values differ.
    """
    golden = simulate_vector(netlist, vector)
    cone = fanout_cone(netlist, site)
    faulty = dict(golden)
    faulty[site] = golden[site] ^ 1
    for u in netlist.topo:
        if u in cone.on_path_gates:
            faulty[u] = _eval_gate(
                netlist.kinds[u], [faulty[v] for v in netlist.gate_inputs[u]])
    flipped = frozenset(
        c for c in netlist.capture_points if faulty[c] != golden[c])
    return golden, faulty, flipped


def sample_vectors(netlist: Netlist, n: int, seed: int,
                   input_sp: dict[int, float] | None = None) -> list[Vector]:
    """Independent weighted random vectors (defaults to sp 0.5 each)."""
    from .sigprob import _input_probs

    probs = _input_probs(netlist, input_sp)
    rng = _bits.sample_chunk_rng(seed, 0)
    draws = rng.random((n, len(probs))) < probs
    return [
        {net: int(draws[i, j]) for j, net in enumerate(netlist.pseudo_inputs)}
        for i in range(n)
    ]


def _run_packed(netlist: Netlist, site: int, words_for_chunk,
                weight_for_chunk, n_vectors: int, method: str) -> SimEppResult:
    """Shared chunk loop: golden eval + cone-only faulty re-eval per chunk.

    ``words_for_chunk(chunk_index, v0, take)`` yields packed input rows;
    ``weight_for_chunk`` is None for uniform counting or yields per-vector
    weights that sum to 1 over all chunks.
    """
    from . import _kernels

    cone = fanout_cone(netlist, site)
    captures = netlist.captures_arr
    reach = [i for i, c in enumerate(captures)
             if int(c) in cone.reachable_outputs]

    counting = weight_for_chunk is None
    cap_acc = np.zeros(len(captures), dtype=np.int64 if counting else np.float64)
    any_acc: float | int = 0
    done = 0
    chunk_index = 0
    while done < n_vectors:
        take = min(_bits.CHUNK, n_vectors - done)
        words = words_for_chunk(chunk_index, done, take)
        values = np.zeros((netlist.n_nets, words.shape[1]), dtype=np.uint64)
        for i, net in enumerate(netlist.pseudo_inputs):
            values[net] = words[i]
        _kernels.eval_words(netlist.kind_codes, netlist.topo_arr,
                            netlist.in_offsets, netlist.in_flat, values)
        diff, anyw = _kernels.pair_diff_words(
            netlist.kind_codes, netlist.topo_arr, netlist.topo_pos,
            netlist.maxreach, netlist.in_offsets, netlist.in_flat, values,
            site, captures)
        if counting:
            cap_acc += _bits.popcount_rows(diff, take)
            any_acc += _bits.popcount_words(anyw, take)
        else:
            weights = weight_for_chunk(done, take)
            cap_acc += _bits.unpack_rows(diff, take).astype(np.float64) @ weights
            any_acc += float(_bits.unpack_row(anyw, take).astype(np.float64) @ weights)
        done += take
        chunk_index += 1

    denom = float(n_vectors) if counting else 1.0
    per_output = {int(captures[i]): float(cap_acc[i]) / denom for i in reach}
    agg_any = float(any_acc) / denom
    agg_max = max(per_output.values(), default=0.0)
    return SimEppResult(site=site, n_vectors=n_vectors, per_output=per_output,
                        aggregate_any=agg_any, aggregate_max=agg_max,
                        method=method)


def mc_epp(netlist: Netlist, site: int, n_vectors: int, seed: int,
           input_sp: dict[int, float] | None = None) -> SimEppResult:
    """Monte Carlo EPP estimate for one site.

    Bit-parallel over 64-vector words in fixed-size chunks with
    chunk-indexed substreams: the estimate depends only on the seed and
    vector count, never on scheduling.
    """
    if n_vectors < 1:
        raise ValueError("n_vectors must be positive")
    if not 0 <= site < netlist.n_nets:
        raise ValueError(f"unknown net id {site}")
    from .sigprob import _input_probs

    probs = _input_probs(netlist, input_sp)

    def words_for_chunk(chunk_index: int, v0: int, take: int) -> np.ndarray:
        return _bits.bernoulli_words(seed, chunk_index, take, probs)

    return _run_packed(netlist, site, words_for_chunk, None, n_vectors,
                       method="montecarlo")


def exhaustive_epp(netlist: Netlist, site: int,
                   input_sp: dict[int, float] | None = None) -> SimEppResult:
    """Exact EPP for one site by weighted enumeration of all input vectors.

    With non-uniform input probabilities each vector contributes its
    occurrence probability instead of 1/2^n.
    """
    if not 0 <= site < netlist.n_nets:
        raise ValueError(f"unknown net id {site}")
    n_in = len(netlist.pseudo_inputs)
    if n_in > EXACT_INPUT_LIMIT:
        raise ValueError(
            f"exhaustive enumeration supports at most {EXACT_INPUT_LIMIT} "
            f"pseudo-primary inputs, circuit has {n_in}")
    from .sigprob import _input_probs

    probs = _input_probs(netlist, input_sp)
    total = 1 << n_in

    def words_for_chunk(chunk_index: int, v0: int, take: int) -> np.ndarray:
        return _bits.enum_input_words(n_in, v0, take)

    def weight_for_chunk(v0: int, take: int) -> np.ndarray:
        return _bits.enum_weights(probs, v0, take)

    return _run_packed(netlist, site, words_for_chunk, weight_for_chunk,
                       total, method="exhaustive")
