"""Numba kernels: packed-word logic evaluation and batched four-valued
error propagation.  Internal; all inputs are the dense arrays a
:class:`~serprop.netlist.Netlist` builds at construction.

Gate opcodes follow ``netlist.KIND_CODE``: AND=0, NAND=1, OR=2, NOR=3,
XOR=4, XNOR=5, NOT=6, BUFF=7, INPUT=8, DFF=9.  Codes 0..5 share a base
operation (code >> 1) and invert when odd; 8/9 are value sources.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def eval_words(kinds, topo, in_off, in_flat, values):
    """Evaluate all gates over packed words, in place.

    ``values`` is (n_nets, n_words) uint64 with pseudo-input rows already
    loaded; gate rows are overwritten in topological order.
    """
    nw = values.shape[1]
    for t in range(topo.shape[0]):
        u = topo[t]
        k = kinds[u]
        if k >= 8:
            continue
        lo = in_off[u]
        hi = in_off[u + 1]
        v0 = in_flat[lo]
        if k == 7:
            for w in range(nw):
                values[u, w] = values[v0, w]
        elif k == 6:
            for w in range(nw):
                values[u, w] = ~values[v0, w]
        else:
            for w in range(nw):
                values[u, w] = values[v0, w]
            for idx in range(lo + 1, hi):
                v = in_flat[idx]
                if k < 2:
                    for w in range(nw):
                        values[u, w] &= values[v, w]
                elif k < 4:
                    for w in range(nw):
                        values[u, w] |= values[v, w]
                else:
                    for w in range(nw):
                        values[u, w] ^= values[v, w]
            if k & 1:
                for w in range(nw):
                    values[u, w] = ~values[u, w]


@njit(cache=True, nogil=True)
def pair_diff_words(kinds, topo, topo_pos, maxreach, in_off, in_flat, golden,
                    site, captures):
    """Fault the ``site`` row and re-evaluate its cone over packed words.

    Only the fan-out cone is recomputed; off-path reads come from the
    golden array.  Returns the per-capture XOR-difference words and their
    OR across captures (any-output-differs mask).
    """
    n = kinds.shape[0]
    nw = golden.shape[1]
    on = np.zeros(n, dtype=np.uint8)
    fvals = np.empty((n, nw), dtype=np.uint64)
    on[site] = 1
    for w in range(nw):
        fvals[site, w] = ~golden[site, w]
    for t in range(topo_pos[site] + 1, maxreach[site] + 1):
        u = topo[t]
        k = kinds[u]
        if k >= 8:
            continue
        lo = in_off[u]
        hi = in_off[u + 1]
        has_on = False
        for idx in range(lo, hi):
            if on[in_flat[idx]] == 1:
                has_on = True
                break
        if not has_on:
            continue
        on[u] = 1
        v0 = in_flat[lo]
        src0 = fvals[v0] if on[v0] == 1 else golden[v0]
        if k == 7:
            for w in range(nw):
                fvals[u, w] = src0[w]
        elif k == 6:
            for w in range(nw):
                fvals[u, w] = ~src0[w]
        else:
            for w in range(nw):
                fvals[u, w] = src0[w]
            for idx in range(lo + 1, hi):
                v = in_flat[idx]
                src = fvals[v] if on[v] == 1 else golden[v]
                if k < 2:
                    for w in range(nw):
                        fvals[u, w] &= src[w]
                elif k < 4:
                    for w in range(nw):
                        fvals[u, w] |= src[w]
                else:
                    for w in range(nw):
                        fvals[u, w] ^= src[w]
            if k & 1:
                for w in range(nw):
                    fvals[u, w] = ~fvals[u, w]
    n_cap = captures.shape[0]
    diff = np.zeros((n_cap, nw), dtype=np.uint64)
    anyw = np.zeros(nw, dtype=np.uint64)
    for ci in range(n_cap):
        c = captures[ci]
        if on[c] == 1:
            for w in range(nw):
                d = fvals[c, w] ^ golden[c, w]
                diff[ci, w] = d
                anyw[w] |= d
    return diff, anyw


@njit(cache=True, nogil=True)
def epp_sites(kinds, topo, topo_pos, maxreach, in_off, in_flat, sp, captures,
              sites):
    """Four-valued error propagation for a batch of error sites.

    For each site, sweeps the topological order once: a gate joins the cone
    when any input is on-path; on-path inputs contribute their propagated
    distribution, off-path inputs the (0, 0, sp, 1-sp) lift.  Distributions
    index as [even-polarity error, odd-polarity error, blocked-1, blocked-0]
    and are renormalized after every gate.

    The three 16-term folds below are the four-valued AND/OR/XOR tables
    unrolled in x-major order; the tests pin them against the table-driven
    scalar path bit for bit.

    Returns (epp, reach, any_agg, max_agg): per-capture propagation
    probabilities, reachability flags, and the two per-site aggregates.
    """
    n = kinds.shape[0]
    n_sites = sites.shape[0]
    n_cap = captures.shape[0]
    epp = np.zeros((n_sites, n_cap), dtype=np.float64)
    reach = np.zeros((n_sites, n_cap), dtype=np.uint8)
    any_agg = np.zeros(n_sites, dtype=np.float64)
    max_agg = np.zeros(n_sites, dtype=np.float64)

    on = np.zeros(n, dtype=np.uint8)
    dist = np.empty((n, 4), dtype=np.float64)
    cone = np.empty(n, dtype=np.int32)

    for si in range(n_sites):
        site = sites[si]
        on[site] = 1
        dist[site, 0] = 1.0
        dist[site, 1] = 0.0
        dist[site, 2] = 0.0
        dist[site, 3] = 0.0
        cone[0] = site
        cone_n = 1
        for t in range(topo_pos[site] + 1, maxreach[site] + 1):
            u = topo[t]
            k = kinds[u]
            if k >= 8:
                continue
            lo = in_off[u]
            hi = in_off[u + 1]
            has_on = False
            for idx in range(lo, hi):
                if on[in_flat[idx]] == 1:
                    has_on = True
                    break
            if not has_on:
                continue
            v0 = in_flat[lo]
            if on[v0] == 1:
                a0 = dist[v0, 0]
                a1 = dist[v0, 1]
                a2 = dist[v0, 2]
                a3 = dist[v0, 3]
            else:
                a0 = 0.0
                a1 = 0.0
                a2 = sp[v0]
                a3 = 1.0 - sp[v0]
            if k == 7:
                pass
            elif k == 6:
                tmp = a0
                a0 = a1
                a1 = tmp
                tmp = a2
                a2 = a3
                a3 = tmp
            else:
                base = k >> 1
                for idx in range(lo + 1, hi):
                    v = in_flat[idx]
                    if on[v] == 1:
                        b0 = dist[v, 0]
                        b1 = dist[v, 1]
                        b2 = dist[v, 2]
                        b3 = dist[v, 3]
                    else:
                        b0 = 0.0
                        b1 = 0.0
                        b2 = sp[v]
                        b3 = 1.0 - sp[v]
                    o0 = 0.0
                    o1 = 0.0
                    o2 = 0.0
                    o3 = 0.0
                    if base == 0:
                        o0 += a0 * b0
                        o3 += a0 * b1
                        o0 += a0 * b2
                        o3 += a0 * b3
                        o3 += a1 * b0
                        o1 += a1 * b1
                        o1 += a1 * b2
                        o3 += a1 * b3
                        o0 += a2 * b0
                        o1 += a2 * b1
                        o2 += a2 * b2
                        o3 += a2 * b3
                        o3 += a3 * b0
                        o3 += a3 * b1
                        o3 += a3 * b2
                        o3 += a3 * b3
                    elif base == 1:
                        o0 += a0 * b0
                        o2 += a0 * b1
                        o2 += a0 * b2
                        o0 += a0 * b3
                        o2 += a1 * b0
                        o1 += a1 * b1
                        o2 += a1 * b2
                        o1 += a1 * b3
                        o2 += a2 * b0
                        o2 += a2 * b1
                        o2 += a2 * b2
                        o2 += a2 * b3
                        o0 += a3 * b0
                        o1 += a3 * b1
                        o2 += a3 * b2
                        o3 += a3 * b3
                    else:
                        o3 += a0 * b0
                        o2 += a0 * b1
                        o1 += a0 * b2
                        o0 += a0 * b3
                        o2 += a1 * b0
                        o3 += a1 * b1
                        o0 += a1 * b2
                        o1 += a1 * b3
                        o1 += a2 * b0
                        o0 += a2 * b1
                        o3 += a2 * b2
                        o2 += a2 * b3
                        o0 += a3 * b0
                        o1 += a3 * b1
                        o2 += a3 * b2
                        o3 += a3 * b3
                    a0 = o0
                    a1 = o1
                    a2 = o2
                    a3 = o3
                if k & 1:
                    tmp = a0
                    a0 = a1
                    a1 = tmp
                    tmp = a2
                    a2 = a3
                    a3 = tmp
            inv = 1.0 / (a0 + a1 + a2 + a3)
            dist[u, 0] = min(a0 * inv, 1.0)
            dist[u, 1] = min(a1 * inv, 1.0)
            dist[u, 2] = min(a2 * inv, 1.0)
            dist[u, 3] = min(a3 * inv, 1.0)
            on[u] = 1
            cone[cone_n] = u
            cone_n += 1
        prod_blocked = 1.0
        best = 0.0
        for ci in range(n_cap):
            c = captures[ci]
            if on[c] == 1:
                e = dist[c, 0] + dist[c, 1]
                if e > 1.0:  # two roundings can overshoot 1 by an ulp
                    e = 1.0
                epp[si, ci] = e
                reach[si, ci] = 1
                prod_blocked *= 1.0 - e
                if e > best:
                    best = e
        a = 1.0 - prod_blocked
        if a < best:  # keep any >= max under fp rounding
            a = best
        any_agg[si] = a
        max_agg[si] = best
        for i in range(cone_n):
            on[cone[i]] = 0
    return epp, reach, any_agg, max_agg
