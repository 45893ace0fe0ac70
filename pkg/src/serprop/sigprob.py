"""Static signal probability of every net.

Three estimators with one output shape: ``independent`` is the classic
single-pass product rule (exact on fan-out-free logic, biased under
reconvergence), ``montecarlo`` samples packed random vectors, ``exact``
enumerates the weighted input space and is capped at 24 pseudo-inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _bits
from .netlist import GateKind, Netlist

EXACT_INPUT_LIMIT = 24


@dataclass(frozen=True)
class SpMap:
    """Signal probability per net id, tagged with how it was computed."""

    values: np.ndarray
    method: str

    def __post_init__(self):
        self.values.setflags(write=False)

    def __getitem__(self, net: int) -> float:
        return float(self.values[net])


def _input_probs(netlist: Netlist, input_sp: dict[int, float] | None) -> np.ndarray:
    probs = np.full(len(netlist.pseudo_inputs), 0.5)
    if input_sp:
        pos = {net: i for i, net in enumerate(netlist.pseudo_inputs)}
        for net, p in input_sp.items():
            if net not in pos:
                raise ValueError(f"net {net} is not a pseudo-primary input")
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"signal probability {p} outside [0, 1]")
            probs[pos[net]] = p
    return probs


def sp_independent(netlist: Netlist,
                   input_sp: dict[int, float] | None = None) -> SpMap:
    """One topological pass assuming all gate inputs are independent."""
    probs = _input_probs(netlist, input_sp)
    sp = np.zeros(netlist.n_nets)
    for i, net in enumerate(netlist.pseudo_inputs):
        sp[net] = probs[i]
    for u in netlist.topo:
        kind = netlist.kinds[u]
        if kind in (GateKind.INPUT, GateKind.DFF):
            continue
        ins = [sp[v] for v in netlist.gate_inputs[u]]
        if kind in (GateKind.AND, GateKind.NAND):
            p = 1.0
            for q in ins:
                p *= q
        elif kind in (GateKind.OR, GateKind.NOR):
            p = 1.0
            for q in ins:
                p *= 1.0 - q
            p = 1.0 - p
        elif kind in (GateKind.XOR, GateKind.XNOR):
            p = ins[0]
            for q in ins[1:]:
                p = p * (1.0 - q) + q * (1.0 - p)
        else:  # NOT / BUFF
            p = ins[0]
        if kind in (GateKind.NAND, GateKind.NOR, GateKind.XNOR, GateKind.NOT):
            p = 1.0 - p
        sp[u] = p
    return SpMap(values=sp, method="independent")


def sp_montecarlo(netlist: Netlist, n_vectors: int, seed: int,
                  input_sp: dict[int, float] | None = None) -> SpMap:
    """Estimate by simulating ``n_vectors`` weighted random vectors.

    Packed 64-vector-per-word simulation in fixed-size chunks with
    chunk-indexed substreams, so the result depends only on the seed and
    the vector count.
    """
    if n_vectors < 1:
        raise ValueError("n_vectors must be positive")
    from . import _kernels

    probs = _input_probs(netlist, input_sp)
    counts = np.zeros(netlist.n_nets, dtype=np.int64)
    done = 0
    chunk_index = 0
    while done < n_vectors:
        take = min(_bits.CHUNK, n_vectors - done)
        words = _bits.bernoulli_words(seed, chunk_index, take, probs)
        values = np.zeros((netlist.n_nets, words.shape[1]), dtype=np.uint64)
        for i, net in enumerate(netlist.pseudo_inputs):
            values[net] = words[i]
        _kernels.eval_words(netlist.kind_codes, netlist.topo_arr,
                            netlist.in_offsets, netlist.in_flat, values)
        counts += _bits.popcount_rows(values, take)
        done += take
        chunk_index += 1
    return SpMap(values=counts / float(n_vectors), method="montecarlo")


def sp_exact(netlist: Netlist,
             input_sp: dict[int, float] | None = None) -> SpMap:
    """Exact signal probability by weighted exhaustive enumeration."""
    n_in = len(netlist.pseudo_inputs)
    if n_in > EXACT_INPUT_LIMIT:
        raise ValueError(
            f"exact enumeration supports at most {EXACT_INPUT_LIMIT} "
            f"pseudo-primary inputs, circuit has {n_in}")
    from . import _kernels

    probs = _input_probs(netlist, input_sp)
    total = 1 << n_in
    acc = np.zeros(netlist.n_nets)
    v0 = 0
    while v0 < total:
        take = min(_bits.CHUNK, total - v0)
        words = _bits.enum_input_words(n_in, v0, take)
        weights = _bits.enum_weights(probs, v0, take)
        values = np.zeros((netlist.n_nets, words.shape[1]), dtype=np.uint64)
        for i, net in enumerate(netlist.pseudo_inputs):
            values[net] = words[i]
        _kernels.eval_words(netlist.kind_codes, netlist.topo_arr,
                            netlist.in_offsets, netlist.in_flat, values)
        bits = _bits.unpack_rows(values, take)
        acc += bits.astype(np.float64) @ weights
        v0 += take
    return SpMap(values=acc, method="exact")
