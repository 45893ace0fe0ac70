"""Accuracy and speed of the analytical model, measured.

Two questions decide whether the four-valued propagation earns its place:
how close it lands to brute-force fault injection, and how much faster it
gets there.  This script reproduces both studies at desk scale.
"""

import time

import numpy as np

from serprop import analyze_all, exhaustive_epp, mc_epp, random_dag, sp_exact, sp_independent

# --- accuracy: analytical vs exhaustive on reconvergent circuits --------
print("accuracy vs exhaustive (exact signal probabilities):")
print(f"{'gates':>6} {'sites':>6} {'mean |diff|':>12} {'max |diff|':>12}")
for n_gates in (30, 60, 100, 150):
    diffs = []
    for seed in range(5):
        nl = random_dag(10, n_gates, seed=seed, locality=0.2)
        sp = sp_exact(nl)
        for rep in analyze_all(nl, sp):
            exact = exhaustive_epp(nl, rep.site)
            diffs.append(abs(rep.aggregate_any - exact.aggregate_any))
    print(f"{n_gates:>6} {len(diffs):>6} {np.mean(diffs):>12.4f} "
          f"{np.max(diffs):>12.4f}")

print("\nexactness checks:")
# On a tree there is no reconvergence and the model is not approximate.
from serprop import random_tree

worst = 0.0
for seed in range(20):
    nl = random_tree(8, seed=seed)
    for rep in analyze_all(nl, sp_exact(nl)):
        exact = exhaustive_epp(nl, rep.site)
        for out, e in rep.per_output.items():
            worst = max(worst, abs(e - exact.per_output[out]))
print(f"  fanout-free circuits: worst per-output |diff| = {worst:.2e}")

# --- speed: one topological pass per site vs thousands of vectors -------
nl = random_dag(64, 2000, seed=77, name="big", locality=0.5)
sp = sp_independent(nl)
analyze_all(nl, sp, sites=[0])       # JIT warmup
mc_epp(nl, 0, 1000, seed=0)

t0 = time.perf_counter()
analyze_all(nl, sp)
t_epp = time.perf_counter() - t0

sample = list(range(0, nl.n_nets, 16))
t0 = time.perf_counter()
for s in sample:
    mc_epp(nl, s, 10_000, seed=1)
t_mc = (time.perf_counter() - t0) / len(sample) * nl.n_nets

print(f"\nspeed on a {nl.n_nets}-net circuit, all sites:")
print(f"  analytical pass : {t_epp * 1e3:8.1f} ms")
print(f"  Monte Carlo 10k : {t_mc:8.1f} s   (extrapolated from "
      f"{len(sample)} sites)")
print(f"  ratio           : {t_mc / t_epp:8.0f} x")
print("\nthe committed figures live in results/accuracy.json and "
      "results/speedup.json")
