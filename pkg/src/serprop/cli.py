"""Command-line front end.

Four subcommands over one pipeline: ``analyze`` (analytical SER report),
``simulate`` (fault-injection baseline), ``compare`` (both, with per-site
differences and a summary), ``sp`` (signal probabilities alone).

Runs are reproducible artifacts: a JSON config file can carry input SPs
and SER parameters (flags override it), every random stage takes an
explicit seed with default 0, and output files are byte-identical across
reruns and ``--jobs`` settings.  Wall-clock timings go to stderr only,
precisely so they cannot perturb output bytes.

Exit status: 0 success, 1 runtime or analysis failure (unreadable or
malformed netlist), 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

from . import epp, faultsim, report, sigprob
from .netlist import Netlist, NetlistError, ValidationError, parse_bench
from .sigprob import EXACT_INPUT_LIMIT

SP_METHODS = ("independent", "montecarlo", "exact")


class UsageError(Exception):
    """Bad flags or configuration; maps to exit status 2."""


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read config: {e}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"config is not valid JSON: {e}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    known = {"input_sp", "r_seu", "p_latched", "default_r_seu",
             "default_p_latched", "sp_method", "vectors", "seed",
             "aggregation", "jobs"}
    unknown = sorted(set(cfg) - known)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    return cfg


def _setting(args: argparse.Namespace, cfg: dict, key: str, default):
    """Flag beats config file beats hard default."""
    v = getattr(args, key, None)
    if v is not None:
        return v
    if key in cfg:
        return cfg[key]
    return default


def _int_setting(args: argparse.Namespace, cfg: dict, key: str,
                 default: int | None) -> int | None:
    v = _setting(args, cfg, key, default)
    if v is None:
        return None
    try:
        return int(v)
    except (TypeError, ValueError):
        raise UsageError(f"{key} must be an integer, got {v!r}") from None


def _vector_count(args: argparse.Namespace, cfg: dict) -> int | None:
    v = _int_setting(args, cfg, "vectors", None)
    if v is not None and v < 1:
        raise UsageError(f"--vectors must be at least 1, got {v}")
    return v


def _read_netlist(path: str) -> Netlist:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise NetlistError(f"cannot read netlist: {e}") from None
    name = path.rsplit("/", 1)[-1]
    if name.endswith(".bench"):
        name = name[:-6]
    return parse_bench(text, name=name)


def _resolve_sites(netlist: Netlist, arg: str | None) -> list[int] | None:
    if arg is None:
        return None
    names = [s.strip() for s in arg.split(",") if s.strip()]
    if not names:
        raise UsageError("--sites given but names no nets")
    sites = []
    for nm in names:
        if not netlist.has_net(nm):
            raise UsageError(f"--sites names unknown net {nm!r}")
        sites.append(netlist.id_of(nm))
    return sorted(set(sites))


def _resolve_input_sp(netlist: Netlist, by_name: dict) -> dict[int, float]:
    pseudo = set(netlist.pseudo_inputs)
    out = {}
    for nm, p in by_name.items():
        if not netlist.has_net(nm):
            raise UsageError(f"input_sp names unknown net {nm!r}")
        net = netlist.id_of(nm)
        if net not in pseudo:
            raise UsageError(f"input_sp net {nm!r} is not a primary input")
        if not isinstance(p, (int, float)) or not 0.0 <= p <= 1.0:
            raise UsageError(f"input_sp[{nm!r}] = {p!r} is not in [0, 1]")
        out[net] = float(p)
    return out


def _check_exact_bound(netlist: Netlist, what: str):
    n = len(netlist.pseudo_inputs)
    if n > EXACT_INPUT_LIMIT:
        raise UsageError(
            f"{what} enumerates all input vectors and supports at most "
            f"{EXACT_INPUT_LIMIT} inputs; this circuit has {n}")


def _sp_pass(netlist: Netlist, method: str, input_sp: dict[int, float],
             vectors: int | None, seed: int) -> sigprob.SpMap:
    if method == "independent":
        return sigprob.sp_independent(netlist, input_sp)
    if method == "montecarlo":
        if vectors is None:
            raise UsageError("--sp-method montecarlo requires --vectors")
        return sigprob.sp_montecarlo(netlist, vectors, seed, input_sp)
    if method == "exact":
        _check_exact_bound(netlist, "sp_method=exact")
        return sigprob.sp_exact(netlist, input_sp)
    raise UsageError(f"unknown sp method {method!r}")


def _ser_config(cfg: dict, aggregation: str) -> report.SerConfig:
    try:
        return report.SerConfig(
            default_r_seu=float(cfg.get("default_r_seu", 1.0)),
            default_p_latched=float(cfg.get("default_p_latched", 1.0)),
            r_seu={str(k): float(v) for k, v in cfg.get("r_seu", {}).items()},
            p_latched={str(k): float(v)
                       for k, v in cfg.get("p_latched", {}).items()},
            aggregation_mode=aggregation)
    except (TypeError, ValueError) as e:
        raise UsageError(f"bad SER parameters: {e}") from None


def _write_out(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _note(msg: str):
    print(msg, file=sys.stderr)


def _simulate_sites(netlist: Netlist, sites: list[int], exact: bool,
                    vectors: int | None, seed: int,
                    input_sp: dict[int, float], jobs: int,
                    ) -> list[faultsim.SimEppResult]:
    if exact:
        _check_exact_bound(netlist, "simulation with sp_method=exact")

        def run(site: int) -> faultsim.SimEppResult:
            return faultsim.exhaustive_epp(netlist, site, input_sp)
    else:
        if vectors is None:
            raise UsageError("Monte Carlo simulation requires --vectors")

        def run(site: int) -> faultsim.SimEppResult:
            return faultsim.mc_epp(netlist, site, vectors, seed, input_sp)

    if jobs <= 1:
        return [run(s) for s in sites]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run, sites))


# -- subcommands -----------------------------------------------------------


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    netlist = _read_netlist(args.netlist)
    method = _setting(args, cfg, "sp_method", "independent")
    if method not in SP_METHODS:
        raise UsageError(f"--sp-method must be one of {SP_METHODS}")
    seed = _int_setting(args, cfg, "seed", 0)
    vectors = _vector_count(args, cfg)
    aggregation = _setting(args, cfg, "aggregation", "any")
    jobs = _int_setting(args, cfg, "jobs", 1)
    input_sp = _resolve_input_sp(netlist, cfg.get("input_sp", {}))
    sites = _resolve_sites(netlist, args.sites)
    ser_cfg = _ser_config(cfg, aggregation)

    sp = _sp_pass(netlist, method, input_sp, vectors, seed)
    t0 = time.perf_counter()
    reports = epp.analyze_all(netlist, sp, sites=sites, jobs=jobs)
    _note(f"epp phase: {time.perf_counter() - t0:.3f}s "
          f"({len(reports)} sites, jobs={jobs})")
    try:
        ser = report.build_report(netlist, reports, ser_cfg,
                                  sp_method=method, sites=sites)
    except ValidationError as e:
        raise UsageError(str(e)) from None
    text = (report.report_to_json(ser) if args.format != "csv"
            else report.report_to_csv(ser))
    _write_out(args.out, text)
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    netlist = _read_netlist(args.netlist)
    method = _setting(args, cfg, "sp_method", "independent")
    if method not in SP_METHODS:
        raise UsageError(f"--sp-method must be one of {SP_METHODS}")
    seed = _int_setting(args, cfg, "seed", 0)
    vectors = _vector_count(args, cfg)
    jobs = _int_setting(args, cfg, "jobs", 1)
    input_sp = _resolve_input_sp(netlist, cfg.get("input_sp", {}))
    sites = _resolve_sites(netlist, args.sites)
    if sites is None:
        sites = list(range(netlist.n_nets))

    t0 = time.perf_counter()
    results = _simulate_sites(netlist, sites, method == "exact",
                              vectors, seed, input_sp, jobs)
    _note(f"simulation: {time.perf_counter() - t0:.3f}s "
          f"({len(sites)} sites, jobs={jobs})")

    if args.format == "json":
        doc = {
            "circuit": netlist.name,
            "method": results[0].method if results else "montecarlo",
            "vectors": None if method == "exact" else vectors,
            "seed": None if method == "exact" else seed,
            "sites": [
                {"name": netlist.names[r.site],
                 "n_vectors": r.n_vectors,
                 "aggregate_any": r.aggregate_any,
                 "aggregate_max": r.aggregate_max,
                 "per_output": {netlist.names[c]: e
                                for c, e in r.per_output.items()}}
                for r in results
            ],
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = ["site,method,n_vectors,aggregate_any,aggregate_max"]
        for r in results:
            lines.append(f"{netlist.names[r.site]},{r.method},{r.n_vectors},"
                         f"{r.aggregate_any!r},{r.aggregate_max!r}")
        text = "\n".join(lines) + "\n"
    _write_out(args.out, text)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    netlist = _read_netlist(args.netlist)
    method = _setting(args, cfg, "sp_method", "exact")
    if method not in SP_METHODS:
        raise UsageError(f"--sp-method must be one of {SP_METHODS}")
    seed = _int_setting(args, cfg, "seed", 0)
    vectors = _vector_count(args, cfg)
    jobs = _int_setting(args, cfg, "jobs", 1)
    input_sp = _resolve_input_sp(netlist, cfg.get("input_sp", {}))
    sites = _resolve_sites(netlist, args.sites)
    if sites is None:
        sites = list(range(netlist.n_nets))

    sp = _sp_pass(netlist, method, input_sp, vectors, seed)
    t0 = time.perf_counter()
    analytical = epp.analyze_all(netlist, sp, sites=sites, jobs=jobs)
    t_epp = time.perf_counter() - t0

    t0 = time.perf_counter()
    baseline = _simulate_sites(netlist, sites, method == "exact",
                               vectors, seed, input_sp, jobs)
    t_sim = time.perf_counter() - t0

    rows = ["site,epp_any,epp_max,sim_epp,abs_diff,rel_diff"]
    diffs = []
    for a, b in zip(analytical, baseline):
        d = abs(a.aggregate_any - b.aggregate_any)
        diffs.append(d)
        rel = "" if b.aggregate_any == 0.0 else repr(d / b.aggregate_any)
        rows.append(f"{netlist.names[a.site]},{a.aggregate_any!r},"
                    f"{a.aggregate_max!r},{b.aggregate_any!r},{d!r},{rel}")
    table = "\n".join(rows) + "\n"

    summary = {
        "circuit": netlist.name,
        "sp_method": method,
        "baseline": baseline[0].method if baseline else "montecarlo",
        "vectors": None if method == "exact" else vectors,
        "seed": None if method == "exact" else seed,
        "n_sites": len(sites),
        "mean_abs_diff": sum(diffs) / len(diffs) if diffs else 0.0,
        "max_abs_diff": max(diffs, default=0.0),
    }
    summary_text = json.dumps(summary, indent=2) + "\n"

    speed = t_sim / t_epp if t_epp > 0 else float("inf")
    _note(f"epp phase: {t_epp:.3f}s, simulation: {t_sim:.3f}s, "
          f"speedup: {speed:.1f}x")

    if args.out is None:
        sys.stdout.write(table)
        sys.stderr.write(summary_text)
    else:
        _write_out(args.out, table)
        base = args.out[:-4] if args.out.endswith(".csv") else args.out
        _write_out(base + ".summary.json", summary_text)
    return 0


def cmd_sp(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    netlist = _read_netlist(args.netlist)
    method = _setting(args, cfg, "sp_method", "independent")
    if method not in SP_METHODS:
        raise UsageError(f"--sp-method must be one of {SP_METHODS}")
    seed = _int_setting(args, cfg, "seed", 0)
    vectors = _vector_count(args, cfg)
    input_sp = _resolve_input_sp(netlist, cfg.get("input_sp", {}))

    sp = _sp_pass(netlist, method, input_sp, vectors, seed)
    if args.format == "json":
        doc = {
            "circuit": netlist.name,
            "sp_method": method,
            "sp": {netlist.names[i]: float(sp.values[i])
                   for i in range(netlist.n_nets)},
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = ["net_name,sp"]
        lines += [f"{netlist.names[i]},{float(sp.values[i])!r}"
                  for i in range(netlist.n_nets)]
        text = "\n".join(lines) + "\n"
    _write_out(args.out, text)
    return 0


# -- argument parsing ------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, fmt_default: str):
    p.add_argument("netlist", help="BENCH netlist file")
    p.add_argument("--config", help="JSON config file "
                   '({"input_sp": {...}, "r_seu": {...}, "p_latched": {...}, '
                   '"default_r_seu": 1.0, "default_p_latched": 1.0, ...}); '
                   "flags override it")
    p.add_argument("--sp-method", dest="sp_method", choices=SP_METHODS,
                   help="signal probability estimator (default: independent; "
                   "compare defaults to exact); exact also switches "
                   "simulation to exhaustive enumeration")
    p.add_argument("--vectors", type=int,
                   help="random vectors per Monte Carlo stage "
                   "(required when one is selected)")
    p.add_argument("--seed", type=int, help="base RNG seed (default 0)")
    p.add_argument("--sites", help="comma-separated net names to analyze "
                   "(default: every net)")
    p.add_argument("--aggregation", choices=report.AGGREGATION_MODES,
                   help="multi-output sensitization aggregate (default any)")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default=fmt_default,
                   help=f"output format (default {fmt_default})")
    p.add_argument("--jobs", type=int, help="worker threads (default 1); "
                   "results never depend on this")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="serprop",
        description="Analytical soft-error-rate estimation for gate-level "
        "circuits, with fault-injection baselines")
    sub = ap.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser(
        "analyze", help="analytical per-net SER report"), "json")
    _add_common(sub.add_parser(
        "simulate", help="fault-injection EPP per site"), "csv")
    _add_common(sub.add_parser(
        "compare", help="analytical vs simulated EPP with summary"), "csv")
    _add_common(sub.add_parser(
        "sp", help="signal probability of every net"), "csv")
    return ap


_COMMANDS = {"analyze": cmd_analyze, "simulate": cmd_simulate,
             "compare": cmd_compare, "sp": cmd_sp}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except NetlistError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
