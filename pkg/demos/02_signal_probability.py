"""Signal probability: three ways to ask how often a net is 1.

The error-propagation model needs, for every net, the probability that it
carries logic 1 under random inputs.  Three estimators are available:

* ``sp_independent``: one topological pass assuming gate inputs are
  independent.  Exact on fanout-free logic, biased under reconvergence.
* ``sp_exact``: enumerate all input vectors (feasible to 24 inputs).
* ``sp_montecarlo``: sample vectors; converges at the usual 1/sqrt(N) rate.
"""

import numpy as np

from serprop import parse_bench, sp_exact, sp_independent, sp_montecarlo

# The classic failure case for the independence assumption: a net ANDed
# with its own complement is never 1, but treating the two branches as
# independent predicts 0.25.
TEXT = """\
INPUT(a)
OUTPUT(y)
n = NOT(a)
y = AND(a, n)
"""
nl = parse_bench(TEXT, name="contradiction")
y = nl.id_of("y")

print("AND(a, NOT(a)):")
print(f"  independent: {sp_independent(nl)[y]:.4f}   (wrong, correlation ignored)")
print(f"  exact      : {sp_exact(nl)[y]:.4f}   (the truth)")

# On a larger reconvergent circuit the independent pass is a fast
# approximation; Monte Carlo brackets the exact answer as N grows.
from serprop import random_dag

nl = random_dag(10, 60, seed=4, name="dag")
exact = sp_exact(nl)
indep = sp_independent(nl)

err = np.abs(indep.values - exact.values)
print(f"\nrandom 60-gate reconvergent circuit, {nl.n_nets} nets:")
print(f"  independent vs exact: mean |err| {err.mean():.4f}, max {err.max():.4f}")

for n in (1_000, 10_000, 100_000):
    mc = sp_montecarlo(nl, n_vectors=n, seed=7)
    err = np.abs(mc.values - exact.values)
    print(f"  montecarlo N={n:>6}: mean |err| {err.mean():.5f}, max {err.max():.5f}")

# Same seed, same answer: sampling is deterministic and chunk-stable.
a = sp_montecarlo(nl, n_vectors=50_000, seed=3).values
b = sp_montecarlo(nl, n_vectors=50_000, seed=3).values
assert (a == b).all()
print("\nfixed seed reproduces bit-identical estimates")
