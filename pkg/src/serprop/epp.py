"""Four-valued error propagation: the analytical EPP engine.

An SEU at an error site replaces the site's value by an unknown erroneous
Boolean ``a``.  Every net downstream then carries a distribution over four
symbols: the error with even polarity (``a``), with odd polarity (its
complement), or blocked at constant 1 or 0.  Off-path inputs enter as
(0, 0, sp, 1-sp) lifts of their signal probability.  One topological sweep
of the fan-out cone yields the propagation probability to every reachable
capture point as P(a) + P(odd-a) there.

Treating ``a`` as a free Boolean variable makes the per-gate symbol tables
exact Boolean identities, which is what cancels first-order reconvergent
fan-out correlation (a AND its complement can never both propagate).  The
remaining approximation is the independence assumption where two on-path
distributions join.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .netlist import ConeInfo, GateKind, Netlist, fanout_cone
from .sigprob import SpMap

# symbol indices: even-polarity error, odd-polarity error, blocked-1, blocked-0
A, ABAR, ONE, ZERO = 0, 1, 2, 3

# Two-input symbol tables, a treated as an unknown Boolean and its
# complement tracked explicitly.  AND_TABLE[x][y] is the output symbol.
AND_TABLE = np.array([
    [A,    ZERO, A,    ZERO],
    [ZERO, ABAR, ABAR, ZERO],
    [A,    ABAR, ONE,  ZERO],
    [ZERO, ZERO, ZERO, ZERO],
], dtype=np.int8)
OR_TABLE = np.array([
    [A,    ONE,  ONE,  A],
    [ONE,  ABAR, ONE,  ABAR],
    [ONE,  ONE,  ONE,  ONE],
    [A,    ABAR, ONE,  ZERO],
], dtype=np.int8)
XOR_TABLE = np.array([
    [ZERO, ONE,  ABAR, A],
    [ONE,  ZERO, A,    ABAR],
    [ABAR, A,    ZERO, ONE],
    [A,    ABAR, ONE,  ZERO],
], dtype=np.int8)
for _t in (AND_TABLE, OR_TABLE, XOR_TABLE):
    _t.setflags(write=False)

_BASE_TABLE = {
    GateKind.AND: AND_TABLE, GateKind.NAND: AND_TABLE,
    GateKind.OR: OR_TABLE, GateKind.NOR: OR_TABLE,
    GateKind.XOR: XOR_TABLE, GateKind.XNOR: XOR_TABLE,
}
_INVERTING = {GateKind.NAND, GateKind.NOR, GateKind.XNOR, GateKind.NOT}

_NORM_TOL = 1e-6


class FourValueDist(NamedTuple):
    """Probability mass over the four propagation symbols on one net."""

    p_a: float
    p_abar: float
    p_one: float
    p_zero: float

    @property
    def epp(self) -> float:
        """Probability the error reaches this net with either polarity."""
        # the two roundings can overshoot 1 by an ulp together
        return min(self.p_a + self.p_abar, 1.0)


ERROR_SEED = FourValueDist(1.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class EppReport:
    """Per-site propagation summary.

    ``per_output`` maps each reachable capture point to its EPP.
    ``aggregate_any`` assumes independent captures (1 - prod(1 - e));
    ``aggregate_max`` is the strongest single capture.
    """

    site: int
    per_output: dict[int, float]
    aggregate_any: float
    aggregate_max: float


def lift_off_path(sp: float) -> FourValueDist:
    """Off-path lift: a net the error never visits is 1 with its signal
    probability and 0 otherwise."""
    if not 0.0 <= sp <= 1.0:
        raise ValueError(f"signal probability {sp} outside [0, 1]")
    return FourValueDist(0.0, 0.0, sp, 1.0 - sp)


def _check_dist(d: FourValueDist):
    s = d.p_a + d.p_abar + d.p_one + d.p_zero
    if abs(s - 1.0) > _NORM_TOL:
        raise ValueError(f"distribution not normalized (sum {s!r}): {d}")
    if min(d) < -1e-12:
        raise ValueError(f"negative component in distribution: {d}")


def _invert(v: list[float]) -> list[float]:
    return [v[ABAR], v[A], v[ZERO], v[ONE]]


def _fold(table: np.ndarray, x: Sequence[float], y: Sequence[float]) -> list[float]:
    out = [0.0, 0.0, 0.0, 0.0]
    for i in range(4):
        for j in range(4):
            out[table[i, j]] += x[i] * y[j]
    return out


def gate_rule(kind: GateKind, inputs: Sequence[FourValueDist]) -> FourValueDist:
    """Propagate symbol distributions through one gate.

    Inputs fold pairwise left to right through the two-input table for the
    gate's base operation, treating them as independent; inverting kinds
    swap the polarity and blocking symbols afterwards.  The result is
    renormalized.
    """
    if kind in (GateKind.INPUT, GateKind.DFF):
        raise ValueError(f"{kind.value} is not a combinational gate")
    if kind in (GateKind.NOT, GateKind.BUFF):
        if len(inputs) != 1:
            raise ValueError(f"{kind.value} takes exactly 1 input, got {len(inputs)}")
    elif len(inputs) < 2:
        raise ValueError(f"{kind.value} takes at least 2 inputs, got {len(inputs)}")
    for d in inputs:
        _check_dist(d)

    acc = list(inputs[0])
    table = _BASE_TABLE.get(kind)
    if table is not None:
        for nxt in inputs[1:]:
            acc = _fold(table, acc, nxt)
    if kind in _INVERTING:
        acc = _invert(acc)
    # x * (1/t) may land one ulp above the true quotient; clamp so every
    # component stays a probability
    inv = 1.0 / (acc[0] + acc[1] + acc[2] + acc[3])
    return FourValueDist(min(acc[0] * inv, 1.0), min(acc[1] * inv, 1.0),
                         min(acc[2] * inv, 1.0), min(acc[3] * inv, 1.0))


def propagate_from_site(netlist: Netlist, cone: ConeInfo, sp: SpMap,
                        seed: FourValueDist = ERROR_SEED,
                        ) -> dict[int, FourValueDist]:
    """Sweep the cone once in topological order.

    Returns the symbol distribution of every on-path net; off-path and
    out-of-cone nets carry none.  ``seed`` is the distribution injected at
    the site (pure even-polarity error by default).
    """
    dists: dict[int, FourValueDist] = {cone.site: seed}
    values = sp.values
    for u in netlist.topo:
        if u == cone.site or u not in cone.on_path_gates:
            continue
        ins = [
            dists[v] if v in dists else lift_off_path(float(values[v]))
            for v in netlist.gate_inputs[u]
        ]
        dists[u] = gate_rule(netlist.kinds[u], ins)
    return dists


def epp_of(dists: dict[int, FourValueDist], output: int) -> float:
    """EPP at a net: total error mass of either polarity.

    An output outside the propagated cone cannot observe the error; that
    case returns 0 and warns, since it usually indicates a caller bug.
    """
    d = dists.get(output)
    if d is None:
        warnings.warn(f"net {output} is not on-path; EPP is 0 by contract",
                      stacklevel=2)
        return 0.0
    return min(d.p_a + d.p_abar, 1.0)


def _aggregate(per_output: dict[int, float]) -> tuple[float, float]:
    prod_blocked = 1.0
    best = 0.0
    for e in per_output.values():
        prod_blocked *= 1.0 - e
        if e > best:
            best = e
    any_agg = 1.0 - prod_blocked
    # 1 - (1 - e) can round one ulp under e; the any-aggregate must
    # dominate the max
    if any_agg < best:
        any_agg = best
    return any_agg, best


def analyze_site(netlist: Netlist, sp: SpMap, site: int) -> EppReport:
    """Full analytical EPP analysis of one error site."""
    cone = fanout_cone(netlist, site)
    dists = propagate_from_site(netlist, cone, sp)
    per_output = {o: dists[o].epp for o in sorted(cone.reachable_outputs)}
    any_agg, max_agg = _aggregate(per_output)
    return EppReport(site=site, per_output=per_output,
                     aggregate_any=any_agg, aggregate_max=max_agg)


def _reports_from_arrays(netlist: Netlist, sites: np.ndarray, epp, reach,
                         any_agg, max_agg) -> list[EppReport]:
    captures = netlist.captures_arr
    out = []
    for i, site in enumerate(sites):
        per_output = {int(captures[j]): float(epp[i, j])
                      for j in range(len(captures)) if reach[i, j]}
        out.append(EppReport(site=int(site), per_output=per_output,
                             aggregate_any=float(any_agg[i]),
                             aggregate_max=float(max_agg[i])))
    return out


def analyze_all(netlist: Netlist, sp: SpMap,
                sites: Iterable[int] | None = None,
                jobs: int = 1) -> list[EppReport]:
    """Analytical EPP for every error site (or a chosen subset).

    Runs the batched propagation kernel; with ``jobs > 1`` the sites are
    split across threads.  Results are identical for any job count.
    """
    from . import _kernels

    if sites is None:
        site_arr = np.arange(netlist.n_nets, dtype=np.int32)
    else:
        site_arr = np.array(sorted(sites), dtype=np.int32)
    for s in site_arr:
        if not 0 <= s < netlist.n_nets:
            raise ValueError(f"unknown net id {int(s)}")

    def run(chunk: np.ndarray):
        return _kernels.epp_sites(
            netlist.kind_codes, netlist.topo_arr, netlist.topo_pos,
            netlist.maxreach, netlist.in_offsets, netlist.in_flat,
            sp.values, netlist.captures_arr, chunk)

    if jobs <= 1 or len(site_arr) < 2:
        epp, reach, any_agg, max_agg = run(site_arr)
        return _reports_from_arrays(netlist, site_arr, epp, reach,
                                    any_agg, max_agg)

    chunks = np.array_split(site_arr, min(jobs, len(site_arr)))
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(run, chunks))
    reports: list[EppReport] = []
    for chunk, (epp, reach, any_agg, max_agg) in zip(chunks, parts):
        reports.extend(_reports_from_arrays(netlist, chunk, epp, reach,
                                            any_agg, max_agg))
    return reports
