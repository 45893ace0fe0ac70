"""SER report composition.

A node's soft error rate factors into three terms: the raw upset rate
``r_seu``, the latching probability ``p_latched``, and the sensitization
probability ``p_sensitized``.  The first two are user-supplied (device
physics and timing windows are out of scope here, so both default to 1.0
and the default report is a pure sensitization profile in relative,
unit-agnostic rates).  ``p_sensitized`` comes from an EPP analysis.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .epp import EppReport
from .netlist import Netlist, ValidationError

AGGREGATION_MODES = ("any", "max")


def _check_prob(p: float, what: str):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{what} {p} outside [0, 1]")


def _check_rate(r: float, what: str):
    if r < 0.0:
        raise ValueError(f"{what} {r} is negative")


@dataclass(frozen=True)
class SerConfig:
    """Per-run SER parameters; name-keyed overrides beat the defaults."""

    default_r_seu: float = 1.0
    default_p_latched: float = 1.0
    r_seu: Mapping[str, float] = field(default_factory=dict)
    p_latched: Mapping[str, float] = field(default_factory=dict)
    aggregation_mode: str = "any"

    def __post_init__(self):
        _check_rate(self.default_r_seu, "default_r_seu")
        _check_prob(self.default_p_latched, "default_p_latched")
        for name, r in self.r_seu.items():
            _check_rate(r, f"r_seu[{name}]")
        for name, p in self.p_latched.items():
            _check_prob(p, f"p_latched[{name}]")
        if self.aggregation_mode not in AGGREGATION_MODES:
            raise ValueError(
                f"aggregation_mode must be one of {AGGREGATION_MODES}, "
                f"got {self.aggregation_mode!r}")


@dataclass(frozen=True)
class SerRow:
    """One net's report row; sensitization is None when the net was
    excluded from analysis by a site filter."""

    name: str
    r_seu: float
    p_latched: float
    p_sensitized: float | None
    ser: float | None


@dataclass(frozen=True)
class SerReport:
    """Rows in net declaration order plus a ranking by descending SER.

    ``ranking`` lists analyzed net names, highest contribution first,
    ties broken by declaration order.  Skipped rows never rank.
    """

    circuit: str
    sp_method: str
    aggregation_mode: str
    rows: tuple[SerRow, ...]
    total_ser: float
    ranking: tuple[str, ...]


def node_ser(r_seu: float, p_latched: float, p_sensitized: float) -> float:
    """Three-term product: upset rate x latch probability x EPP."""
    _check_rate(r_seu, "r_seu")
    _check_prob(p_latched, "p_latched")
    _check_prob(p_sensitized, "p_sensitized")
    return r_seu * p_latched * p_sensitized


def build_report(netlist: Netlist, epp: Iterable[EppReport], cfg: SerConfig,
                 sp_method: str,
                 sites: Iterable[int] | None = None) -> SerReport:
    """Compose EPP analyses into the per-net SER table.

    ``epp`` must cover every net, or exactly the ``sites`` subset when one
    is given; the remaining rows are then marked skipped (null
    sensitization) and contribute nothing to ``total_ser``.
    """
    for name in list(cfg.r_seu) + list(cfg.p_latched):
        if not netlist.has_net(name):
            raise ValidationError(f"override names unknown net {name!r}")

    by_site: dict[int, EppReport] = {}
    for rep in epp:
        if rep.site in by_site:
            raise ValidationError(f"duplicate EppReport for net {rep.site}")
        if not 0 <= rep.site < netlist.n_nets:
            raise ValidationError(f"EppReport for unknown net id {rep.site}")
        by_site[rep.site] = rep

    wanted = (set(range(netlist.n_nets)) if sites is None
              else {int(s) for s in sites})
    missing = sorted(wanted - set(by_site))
    if missing:
        names = [netlist.names[i] for i in missing[:5]]
        raise ValidationError(
            f"no EppReport for {len(missing)} net(s), first: {names}")

    rows = []
    total = 0.0
    ranked: list[tuple[float, int, str]] = []
    for net in range(netlist.n_nets):
        name = netlist.names[net]
        r = cfg.r_seu.get(name, cfg.default_r_seu)
        p_l = cfg.p_latched.get(name, cfg.default_p_latched)
        rep = by_site.get(net)
        if rep is None or net not in wanted:
            rows.append(SerRow(name, r, p_l, None, None))
            continue
        p_s = (rep.aggregate_any if cfg.aggregation_mode == "any"
               else rep.aggregate_max)
        s = node_ser(r, p_l, p_s)
        rows.append(SerRow(name, r, p_l, p_s, s))
        total += s
        ranked.append((-s, net, name))
    ranked.sort()
    return SerReport(circuit=netlist.name, sp_method=sp_method,
                     aggregation_mode=cfg.aggregation_mode,
                     rows=tuple(rows), total_ser=total,
                     ranking=tuple(name for _, _, name in ranked))


def report_to_json(report: SerReport) -> str:
    """Serialize to the exchange schema.  Key order and float reprs are
    fixed, so equal reports serialize to identical bytes."""
    doc = {
        "circuit": report.circuit,
        "sp_method": report.sp_method,
        "aggregation_mode": report.aggregation_mode,
        "nodes": [
            {"name": row.name, "r_seu": row.r_seu, "p_latched": row.p_latched,
             "p_sensitized": row.p_sensitized, "ser": row.ser}
            for row in report.rows
        ],
        "total_ser": report.total_ser,
    }
    return json.dumps(doc, indent=2) + "\n"


def report_to_csv(report: SerReport) -> str:
    """Node rows only, same columns and numbers as the JSON ``nodes``
    list; skipped cells are empty."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "r_seu", "p_latched", "p_sensitized", "ser"])
    for row in report.rows:
        w.writerow([
            row.name, repr(row.r_seu), repr(row.p_latched),
            "" if row.p_sensitized is None else repr(row.p_sensitized),
            "" if row.ser is None else repr(row.ser),
        ])
    return buf.getvalue()
