"""Seeded random circuit generators.

Two families: fan-out-free trees, where the analytical EPP method is
exact, and reconvergent DAGs, where its independence assumption is
actually stressed.  Both are deterministic functions of their seed so
generated corpora can be regenerated bit-for-bit.
"""

from __future__ import annotations

import heapq

import numpy as np

from .netlist import GateKind, Netlist

_BINARY_KINDS = (GateKind.AND, GateKind.NAND, GateKind.OR, GateKind.NOR,
                 GateKind.XOR, GateKind.XNOR)
_UNARY_KINDS = (GateKind.NOT, GateKind.BUFF)

# gate mix for generated DAGs: mostly AND/OR family, XOR kept rare since
# every XOR doubles observability and washes out masking effects
_DAG_KIND_WEIGHTS = (
    (GateKind.AND, 0.22), (GateKind.NAND, 0.22),
    (GateKind.OR, 0.22), (GateKind.NOR, 0.22),
    (GateKind.XOR, 0.07), (GateKind.XNOR, 0.05),
)


def _rng(seed: int, attempt: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed & 0xFFFFFFFFFFFFFFFF,
                                spawn_key=(attempt,))
    return np.random.Generator(np.random.PCG64(ss))


def has_reconvergence(netlist: Netlist) -> bool:
    """True when some gate joins two inputs that share an ancestor net.

    That shared ancestor fans out along paths which remerge at the gate,
    which is exactly the structure the independence assumption gets wrong.
    """
    anc = [0] * netlist.n_nets
    for u in netlist.topo:
        bits = 1 << u
        for v in netlist.gate_inputs[u]:
            if netlist.kinds[u] is GateKind.DFF:
                continue
            bits |= anc[v]
        anc[u] = bits
        ins = netlist.gate_inputs[u]
        if netlist.kinds[u] is not GateKind.DFF and len(ins) >= 2:
            for i in range(len(ins)):
                for j in range(i + 1, len(ins)):
                    if anc[ins[i]] & anc[ins[j]]:
                        return True
    return False


def random_tree(n_inputs: int, seed: int, *, max_depth: int = 8,
                p_unary: float = 0.1, name: str = "tree") -> Netlist:
    """Fan-out-free circuit: every net drives exactly one gate input.

    Built by repeatedly merging the shallowest subtrees, so the depth cap
    holds for any input count up to 2**max_depth.
    """
    if n_inputs < 1:
        raise ValueError("need at least one input")
    if n_inputs > (1 << max_depth):
        raise ValueError(f"{n_inputs} inputs cannot fit in depth {max_depth}")
    for attempt in range(64):
        rng = _rng(seed, attempt)
        names = [f"i{j}" for j in range(n_inputs)]
        kinds = [GateKind.INPUT] * n_inputs
        gate_inputs: list[tuple[int, ...]] = [()] * n_inputs
        # heap of (depth, tiebreak, net id); merging the two shallowest
        # keeps the tree near-balanced
        roots = [(0, j, j) for j in range(n_inputs)]
        heapq.heapify(roots)
        serial = n_inputs

        def emit(kind: GateKind, ins: tuple[int, ...], depth: int):
            nonlocal serial
            net = len(names)
            names.append(f"n{serial}")
            kinds.append(kind)
            gate_inputs.append(ins)
            heapq.heappush(roots, (depth, serial, net))
            serial += 1

        while len(roots) > 1:
            d1, _, a = heapq.heappop(roots)
            d2, _, b = heapq.heappop(roots)
            if len(roots) >= 1 and rng.random() < 0.25:
                d3, _, c = heapq.heappop(roots)
                ins, depth = (a, b, c), max(d1, d2, d3) + 1
            else:
                ins, depth = (a, b), max(d1, d2) + 1
            emit(_BINARY_KINDS[rng.integers(len(_BINARY_KINDS))], ins, depth)
            # bump only while the merges still to come (at most
            # ceil(log2 r) more levels) cannot overflow the cap
            top = roots[0]
            headroom = top[0] + 1 + (len(roots) - 1).bit_length()
            if headroom <= max_depth and rng.random() < p_unary:
                heapq.heappop(roots)
                emit(_UNARY_KINDS[rng.integers(2)], (top[2],), top[0] + 1)
        depth, _, root = roots[0]
        if depth <= max_depth:
            return Netlist(name, names, kinds, gate_inputs, po_order=[root])
    raise RuntimeError(f"depth cap {max_depth} not met after 64 attempts")


def random_dag(n_inputs: int, n_gates: int, seed: int, *,
               p_unary: float = 0.06, p_ternary: float = 0.3,
               locality: float = 0.12, name: str = "dag",
               require_reconvergence: bool = True) -> Netlist:
    """Random reconvergent DAG with ``n_gates`` combinational gates.

    Sources are drawn with a geometric bias toward recently created nets
    (``locality``), which produces deep logic with heavy shared fan-in.
    Unused primary inputs are consumed first so nothing dangles.  With
    ``require_reconvergence`` the build retries deterministically until
    the structural check passes.
    """
    if n_inputs < 2 or n_gates < 1:
        raise ValueError("need at least 2 inputs and 1 gate")
    for attempt in range(64):
        rng = _rng(seed, attempt)
        names = [f"i{j}" for j in range(n_inputs)]
        kinds = [GateKind.INPUT] * n_inputs
        gate_inputs: list[tuple[int, ...]] = [()] * n_inputs
        unused = list(range(n_inputs))
        kind_names, kind_w = zip(*_DAG_KIND_WEIGHTS)
        kind_p = np.array(kind_w) / sum(kind_w)

        def pick_source(taken: set[int]) -> int:
            if unused and rng.random() < 0.5:
                k = int(rng.integers(len(unused)))
                net = unused.pop(k)
                if net not in taken:
                    return net
            for _ in range(32):
                back = int(rng.geometric(locality)) - 1
                net = len(names) - 1 - back
                if net >= 0 and net not in taken:
                    return net
            for net in range(len(names) - 1, -1, -1):
                if net not in taken:
                    return net
            raise AssertionError("source pool exhausted")

        for g in range(n_gates):
            if rng.random() < p_unary:
                kind = _UNARY_KINDS[int(rng.integers(2))]
                arity = 1
            else:
                kind = kind_names[int(rng.choice(len(kind_p), p=kind_p))]
                arity = 3 if (rng.random() < p_ternary
                              and len(names) >= 3) else 2
            taken: set[int] = set()
            ins = []
            for _ in range(arity):
                s = pick_source(taken)
                taken.add(s)
                ins.append(s)
            names.append(f"n{n_inputs + g}")
            kinds.append(kind)
            gate_inputs.append(tuple(ins))

        used = {v for ins in gate_inputs for v in ins}
        po = [i for i in range(len(names)) if i not in used]
        netlist = Netlist(name, names, kinds, gate_inputs, po_order=po)
        if not require_reconvergence or has_reconvergence(netlist):
            return netlist
    raise RuntimeError(
        f"no reconvergent structure after 64 attempts (seed {seed}); "
        f"raise n_gates or lower locality")
