"""Fault injection: the measured ground truth.

Simulation answers the same question as the analytical model by brute
force: apply a vector, flip one net, re-evaluate its cone, and see which
capture points changed.  Exhaustive enumeration gives the exact EPP on
small circuits; Monte Carlo scales to wide ones.
"""

import numpy as np

from serprop import (exhaustive_epp, mc_epp, parse_bench, random_dag,
                     sample_vectors, simulate_pair)

TEXT = """\
INPUT(a)
INPUT(b)
INPUT(c)
OUTPUT(y)
OUTPUT(z)
m = AND(a, b)
y = OR(m, c)
z = XOR(m, a)
"""
nl = parse_bench(TEXT, name="demo4")
site = nl.id_of("m")

# One pair at a time: golden run vs faulted run on the same vector.
print(f"flipping {nl.names[site]!r} under each vector:")
for vec in sample_vectors(nl, 4, seed=9):
    golden, faulty, flipped = simulate_pair(nl, vec, site)
    shown = {nl.names[k]: v for k, v in sorted(vec.items())}
    names = sorted(nl.names[f] for f in flipped) or ["nothing"]
    print(f"  {shown} -> flips {names}")

# Exhausting all 8 vectors gives the exact propagation probability.
exact = exhaustive_epp(nl, site)
print(f"\nexhaustive: any-output EPP = {exact.aggregate_any:.4f} "
      f"over {exact.n_vectors} vectors")
per = {nl.names[o]: round(e, 4) for o, e in exact.per_output.items()}
print(f"  per output: {per}")

# Monte Carlo converges to the same number; the error shrinks like
# 1/sqrt(N) and a fixed seed makes every run repeatable.
nl = random_dag(12, 80, seed=21, name="wide")
# pick a site whose fate genuinely depends on the vector
site = next(s for s in range(nl.n_nets)
            if 0.2 < exhaustive_epp(nl, s).aggregate_any < 0.8)
exact = exhaustive_epp(nl, site)
print(f"\nrandom 80-gate circuit, site {nl.names[site]!r}, "
      f"exact EPP {exact.aggregate_any:.5f}:")
for n in (1_000, 10_000, 100_000):
    runs = [mc_epp(nl, site, n, seed=s).aggregate_any for s in range(5)]
    spread = np.ptp(runs)
    print(f"  N={n:>6}: estimates {[f'{r:.5f}' for r in runs]} "
          f"(spread {spread:.5f})")

again = mc_epp(nl, site, 10_000, seed=0).aggregate_any
assert again == mc_epp(nl, site, 10_000, seed=0).aggregate_any
print("same seed, same estimate, bit for bit")
