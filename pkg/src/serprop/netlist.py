"""Gate-level circuit graphs parsed from the BENCH structural format.

The :class:`Netlist` is the immutable substrate every analysis in this
package runs on.  Nets are dense integer ids assigned in declaration order;
names live in a side table for reporting.  Flip-flops cut the combinational
graph: a DFF output acts as a pseudo primary input and the net feeding its
D pin becomes a capture point, so all analyses are single-frame.

Accepted BENCH syntax (case-insensitive keywords, whitespace-insensitive)::

    # comment
    INPUT(a)
    OUTPUT(y)
    y = NAND(a, b, c)

Gate keywords: AND, NAND, OR, NOR, XOR, XNOR, NOT, BUFF (alias BUF), DFF.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np


class GateKind(Enum):
    AND = "AND"
    NAND = "NAND"
    OR = "OR"
    NOR = "NOR"
    XOR = "XOR"
    XNOR = "XNOR"
    NOT = "NOT"
    BUFF = "BUFF"
    INPUT = "INPUT"
    DFF = "DFF"


# numeric opcodes shared with the jit kernels
KIND_CODE = {k: i for i, k in enumerate(GateKind)}

_MULTI_INPUT = {GateKind.AND, GateKind.NAND, GateKind.OR, GateKind.NOR,
                GateKind.XOR, GateKind.XNOR}
_SINGLE_INPUT = {GateKind.NOT, GateKind.BUFF, GateKind.DFF}


class NetlistError(Exception):
    """Base class for netlist parse and validation failures."""


class BenchSyntaxError(NetlistError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UndefinedSignalError(NetlistError):
    pass


class MultipleDriverError(NetlistError):
    pass


class CycleError(NetlistError):
    pass


class UnsupportedGateError(NetlistError):
    pass


class ArityError(NetlistError):
    pass


class ValidationError(NetlistError):
    pass


@dataclass(frozen=True)
class ConeInfo:
    """Structural fan-out cone of one error site.

    ``on_path_nets`` is the forward transitive fan-out of the site plus the
    site itself (DFF boundaries cut).  ``on_path_gates`` holds the output
    nets of gates having at least one on-path input.  ``off_path_nets`` are
    inputs of on-path gates that are not themselves on-path.
    """

    site: int
    on_path_nets: frozenset[int]
    on_path_gates: frozenset[int]
    off_path_nets: frozenset[int]
    reachable_outputs: frozenset[int]


class Netlist:
    """Immutable gate-level circuit graph.

    Net ``i`` is driven by a gate of ``kinds[i]`` reading ``gate_inputs[i]``.
    Primary inputs carry :attr:`GateKind.INPUT` and an empty input tuple; a
    DFF output net carries :attr:`GateKind.DFF` with the D-pin net as its
    single input, but that edge is excluded from the combinational graph.

    Instances validate themselves on construction and must not be mutated
    afterwards; they are safe to share across threads.
    """

    def __init__(self, name: str, names: Sequence[str],
                 kinds: Sequence[GateKind],
                 gate_inputs: Sequence[Sequence[int]],
                 po_order: Sequence[int]):
        n = len(names)
        if not (len(kinds) == len(gate_inputs) == n):
            raise ValidationError("names, kinds and gate_inputs disagree in length")
        if len(set(names)) != n:
            raise ValidationError("duplicate net names")

        self.name = name
        self.names: tuple[str, ...] = tuple(names)
        self.kinds: tuple[GateKind, ...] = tuple(kinds)
        self.gate_inputs: tuple[tuple[int, ...], ...] = tuple(
            tuple(ins) for ins in gate_inputs)
        self.po_order: tuple[int, ...] = tuple(dict.fromkeys(po_order))
        self.pi_order: tuple[int, ...] = tuple(
            i for i, k in enumerate(self.kinds) if k is GateKind.INPUT)

        self._check_arity()
        for out, ins in enumerate(self.gate_inputs):
            for i in ins:
                if not 0 <= i < n:
                    raise ValidationError(
                        f"gate {self.names[out]} references undefined net id {i}")
        for i in self.po_order:
            if not 0 <= i < n:
                raise ValidationError(f"primary output id {i} out of range")

        self.primary_inputs = frozenset(self.pi_order)
        self.primary_outputs = frozenset(self.po_order)
        self.ff_outputs = frozenset(
            i for i, k in enumerate(self.kinds) if k is GateKind.DFF)
        self.ff_inputs = frozenset(
            self.gate_inputs[i][0] for i in self.ff_outputs)
        self.capture_points = frozenset(self.primary_outputs | self.ff_inputs)
        if not self.capture_points:
            raise ValidationError("netlist has no primary output or flip-flop input")
        # pseudo inputs: where logic values enter the combinational frame
        self.pseudo_inputs: tuple[int, ...] = tuple(
            i for i, k in enumerate(self.kinds)
            if k in (GateKind.INPUT, GateKind.DFF))

        self._name_to_id = {nm: i for i, nm in enumerate(self.names)}
        self.topo: tuple[int, ...] = self._topo_sort()
        self._build_arrays()
        self._warn_dangling()

    # -- construction helpers -------------------------------------------

    def _check_arity(self):
        for out, (kind, ins) in enumerate(zip(self.kinds, self.gate_inputs)):
            n_in = len(ins)
            if kind is GateKind.INPUT and n_in != 0:
                raise ArityError(f"INPUT {self.names[out]} cannot have inputs")
            if kind in _SINGLE_INPUT and n_in != 1:
                raise ArityError(
                    f"{kind.value} {self.names[out]} needs exactly 1 input, got {n_in}")
            if kind in _MULTI_INPUT and n_in < 2:
                raise ArityError(
                    f"{kind.value} {self.names[out]} needs at least 2 inputs, got {n_in}")

    def _comb_inputs(self, out: int) -> tuple[int, ...]:
        # DFF boundary: the D-pin edge is sequential, not combinational
        if self.kinds[out] is GateKind.DFF:
            return ()
        return self.gate_inputs[out]

    def _topo_sort(self) -> tuple[int, ...]:
        n = len(self.names)
        indeg = [0] * n
        fanout: list[list[int]] = [[] for _ in range(n)]
        for out in range(n):
            ins = self._comb_inputs(out)
            indeg[out] = len(ins)
            for i in ins:
                fanout[i].append(out)
        # FIFO over sources in id order keeps the order deterministic and
        # places all pseudo inputs before any gate.
        queue = [i for i in range(n) if indeg[i] == 0]
        order = []
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            order.append(u)
            for v in fanout[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue.append(v)
        if len(order) != n:
            stuck = [self.names[i] for i in range(n) if indeg[i] > 0]
            raise CycleError(
                "combinational cycle through: " + ", ".join(sorted(stuck)[:8]))
        self._fanout = tuple(tuple(f) for f in fanout)
        return tuple(order)

    def _build_arrays(self):
        """Dense arrays consumed by the jit kernels; frozen after build."""
        n = len(self.names)
        self.kind_codes = np.array([KIND_CODE[k] for k in self.kinds], dtype=np.int8)
        flat: list[int] = []
        off = np.zeros(n + 1, dtype=np.int32)
        for i in range(n):
            ins = self._comb_inputs(i)
            flat.extend(ins)
            off[i + 1] = len(flat)
        self.in_offsets = off
        self.in_flat = np.array(flat, dtype=np.int32) if flat else np.zeros(0, np.int32)
        self.topo_arr = np.array(self.topo, dtype=np.int32)
        pos = np.empty(n, dtype=np.int32)
        pos[self.topo_arr] = np.arange(n, dtype=np.int32)
        self.topo_pos = pos
        self.captures_arr = np.array(sorted(self.capture_points), dtype=np.int32)
        self.pseudo_arr = np.array(self.pseudo_inputs, dtype=np.int32)
        # highest topo position reachable from each net through the
        # combinational graph; bounds the sweep when propagating from a site
        maxreach = pos.copy()
        for t in range(n - 1, -1, -1):
            g = self.topo[t]
            mg = maxreach[g]
            for v in self._comb_inputs(g):
                if maxreach[v] < mg:
                    maxreach[v] = mg
        self.maxreach = maxreach
        for a in (self.kind_codes, self.in_offsets, self.in_flat,
                  self.topo_arr, self.topo_pos, self.captures_arr,
                  self.pseudo_arr, self.maxreach):
            a.setflags(write=False)

    def _warn_dangling(self):
        dangling = [self.names[i] for i in range(len(self.names))
                    if not self._fanout[i] and i not in self.capture_points]
        if dangling:
            warnings.warn(
                f"netlist {self.name!r} has dangling nets (EPP will be 0): "
                + ", ".join(dangling), stacklevel=3)

    # -- queries ---------------------------------------------------------

    @property
    def n_nets(self) -> int:
        return len(self.names)

    @property
    def gates(self) -> list[tuple[int, GateKind, tuple[int, ...]]]:
        return [(i, self.kinds[i], self.gate_inputs[i]) for i in range(self.n_nets)]

    def id_of(self, name: str) -> int:
        try:
            return self._name_to_id[name]
        except KeyError:
            raise UndefinedSignalError(f"no net named {name!r}") from None

    def has_net(self, name: str) -> bool:
        return name in self._name_to_id

    def fanout_of(self, net: int) -> tuple[int, ...]:
        return self._fanout[net]


# -- BENCH parsing --------------------------------------------------------

_NAME = r"[A-Za-z0-9_.$\[\]]+"
_RE_INPUT = re.compile(rf"^(INPUT|OUTPUT)\s*\(\s*({_NAME})\s*\)$", re.IGNORECASE)
_RE_ASSIGN = re.compile(
    rf"^({_NAME})\s*=\s*([A-Za-z]+)\s*\(\s*({_NAME}(?:\s*,\s*{_NAME})*)\s*\)$")

_KEYWORD_TO_KIND = {k.value: k for k in GateKind if k is not GateKind.INPUT}
_KEYWORD_TO_KIND["BUF"] = GateKind.BUFF


def parse_bench(text: str, name: str = "netlist") -> Netlist:
    """Parse BENCH-format text into a validated :class:`Netlist`.

    Net ids are assigned in declaration order (INPUT lines and assignment
    left-hand sides, as they appear in the source).  Raises a subclass of
    :class:`NetlistError` on any malformed or inconsistent input.
    """
    decl_order: list[str] = []          # definition order = net id order
    decl_kind: dict[str, GateKind] = {}
    decl_inputs: dict[str, list[str]] = {}
    decl_line: dict[str, int] = {}
    outputs: list[tuple[str, int]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _RE_INPUT.match(line)
        if m:
            keyword, sig = m.group(1).upper(), m.group(2)
            if keyword == "INPUT":
                if sig in decl_kind:
                    raise MultipleDriverError(
                        f"line {line_no}: net {sig!r} already driven "
                        f"(line {decl_line[sig]})")
                decl_order.append(sig)
                decl_kind[sig] = GateKind.INPUT
                decl_inputs[sig] = []
                decl_line[sig] = line_no
            else:
                outputs.append((sig, line_no))
            continue
        m = _RE_ASSIGN.match(line)
        if m:
            lhs, keyword, args = m.group(1), m.group(2).upper(), m.group(3)
            kind = _KEYWORD_TO_KIND.get(keyword)
            if kind is None:
                raise UnsupportedGateError(
                    f"line {line_no}: unsupported gate keyword {keyword!r}")
            if lhs in decl_kind:
                raise MultipleDriverError(
                    f"line {line_no}: net {lhs!r} already driven "
                    f"(line {decl_line[lhs]})")
            decl_order.append(lhs)
            decl_kind[lhs] = kind
            decl_inputs[lhs] = [a.strip() for a in args.split(",")]
            decl_line[lhs] = line_no
            continue
        col = len(raw) - len(raw.lstrip()) + 1
        raise BenchSyntaxError(f"cannot parse {line!r}", line_no, col)

    ids = {sig: i for i, sig in enumerate(decl_order)}
    for sig, refs in decl_inputs.items():
        for ref in refs:
            if ref not in ids:
                raise UndefinedSignalError(
                    f"line {decl_line[sig]}: gate {sig!r} reads undefined "
                    f"signal {ref!r}")
    po_ids = []
    for sig, line_no in outputs:
        if sig not in ids:
            raise UndefinedSignalError(
                f"line {line_no}: OUTPUT names undefined signal {sig!r}")
        po_ids.append(ids[sig])

    return Netlist(
        name=name,
        names=decl_order,
        kinds=[decl_kind[s] for s in decl_order],
        gate_inputs=[[ids[r] for r in decl_inputs[s]] for s in decl_order],
        po_order=po_ids,
    )


def emit_bench(netlist: Netlist) -> str:
    """Serialize a netlist back to BENCH text.

    Declarations are grouped INPUT / OUTPUT / gates with the original
    declaration order preserved inside each group, so emitting is a
    structural fixpoint under re-parsing.
    """
    lines = [f"INPUT({netlist.names[i]})" for i in netlist.pi_order]
    lines += [f"OUTPUT({netlist.names[i]})" for i in netlist.po_order]
    for i in range(netlist.n_nets):
        kind = netlist.kinds[i]
        if kind is GateKind.INPUT:
            continue
        args = ", ".join(netlist.names[j] for j in netlist.gate_inputs[i])
        lines.append(f"{netlist.names[i]} = {kind.value}({args})")
    return "\n".join(lines) + "\n"


def structurally_equal(a: Netlist, b: Netlist) -> bool:
    """Name-based structural equality: same nets, kinds, wiring, PIs, POs."""
    if set(a.names) != set(b.names):
        return False
    for nm in a.names:
        ia, ib = a.id_of(nm), b.id_of(nm)
        if a.kinds[ia] is not b.kinds[ib]:
            return False
        if tuple(a.names[j] for j in a.gate_inputs[ia]) != \
           tuple(b.names[j] for j in b.gate_inputs[ib]):
            return False
    if [a.names[i] for i in a.pi_order] != [b.names[i] for i in b.pi_order]:
        return False
    if [a.names[i] for i in a.po_order] != [b.names[i] for i in b.po_order]:
        return False
    return True


# -- graph services --------------------------------------------------------

def topo_order(netlist: Netlist) -> list[int]:
    """Topological order over all nets; pseudo inputs precede every gate."""
    return list(netlist.topo)


def fanout_cone(netlist: Netlist, site: int) -> ConeInfo:
    """Forward fan-out cone of ``site`` with on/off-path classification.

    The cone never crosses a DFF: the net feeding a flip-flop is a capture
    point and propagation stops there for this frame.
    """
    if not 0 <= site < netlist.n_nets:
        raise ValueError(f"unknown net id {site}")
    on_path = {site}
    stack = [site]
    while stack:
        u = stack.pop()
        for v in netlist.fanout_of(u):
            if v not in on_path:
                on_path.add(v)
                stack.append(v)
    on_gates = frozenset(on_path - {site})
    off_path = frozenset(
        i for g in on_gates for i in netlist.gate_inputs[g]) - on_path
    return ConeInfo(
        site=site,
        on_path_nets=frozenset(on_path),
        on_path_gates=on_gates,
        off_path_nets=off_path,
        reachable_outputs=frozenset(on_path & netlist.capture_points),
    )
