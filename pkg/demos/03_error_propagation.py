"""The four-valued error propagation calculus, step by step.

A transient flip at a net either travels toward an output or dies at a
gate whose other inputs block it.  Instead of simulating vectors, each net
in the fan-out cone gets a distribution over four symbols:

* ``a``    - carries the error, same polarity as injected
* ``abar`` - carries the error, inverted polarity
* ``1``    - error-free constant 1
* ``0``    - error-free constant 0

Gates combine input distributions through 4x4 tables that are just the
Boolean operators lifted to these symbols; tracking polarity separately is
what keeps reconvergent paths honest to first order.
"""

from serprop import (AND_TABLE, ERROR_SEED, FourValueDist, GateKind,
                     analyze_site, fanout_cone, gate_rule, lift_off_path,
                     parse_bench, propagate_from_site, sp_exact)

SYM = ("a", "abar", "1", "0")

print("AND table (row = left symbol, column = right symbol):")
print("      " + "  ".join(f"{s:>4}" for s in SYM))
for x in range(4):
    row = "  ".join(f"{SYM[AND_TABLE[x, y]]:>4}" for y in range(4))
    print(f"{SYM[x]:>4}  {row}")

# Example: the error meets an AND gate whose side input is 1 with
# probability 0.7.  Only the error-and-1 cell lets it through.
err_in = ERROR_SEED                      # (1, 0, 0, 0): pure same-polarity error
side = lift_off_path(0.7)                # (0, 0, 0.7, 0.3): plain signal
out = gate_rule(GateKind.AND, [err_in, side])
print(f"\nerror AND (sp=0.7 side input) -> {tuple(round(p, 3) for p in out)}")
print(f"  survives with p={out.epp:.3f}, else the gate forces a clean 0")

# An inverter flips polarity but never absorbs the error.
flipped = gate_rule(GateKind.NOT, [out])
print(f"after NOT -> {tuple(round(p, 3) for p in flipped)} (epp unchanged: {flipped.epp:.3f})")

# Polarity is the whole point.  Below, the flip reaches the AND twice:
# once directly and once inverted.  Whatever value the upset takes, one
# branch is 0, so the AND output is a clean 0: EPP must be exactly 0.
TEXT = """\
INPUT(t)
OUTPUT(y)
p = NOT(t)
q = BUFF(t)
y = AND(p, q)
"""
nl = parse_bench(TEXT, name="reconv")
sp = sp_exact(nl)
site = nl.id_of("t")
dists = propagate_from_site(nl, fanout_cone(nl, site), sp)
d_y = dists[nl.id_of("y")]
print(f"\nreconvergent AND(NOT(t), BUFF(t)), upset at t:")
print(f"  y distribution: {tuple(round(p, 3) for p in d_y)}")
print(f"  EPP at y = {d_y.epp}  (a polarity-blind model would say 0.25)")

# Swap the AND for XOR and the cancellation is even cleaner: the branches
# always disagree, so the XOR output is a constant 1 no matter which value
# the upset takes.  The calculus lands on exactly that symbol.
nl2 = parse_bench(TEXT.replace("AND", "XOR"), name="reconv_xor")
dists2 = propagate_from_site(nl2, fanout_cone(nl2, nl2.id_of("t")),
                             sp_exact(nl2))
d_y2 = dists2[nl2.id_of("y")]
print(f"  with XOR instead: y = {tuple(round(p, 3) for p in d_y2)} "
      f"(constant 1, EPP = {d_y2.epp})")

# By contrast a single XOR path never blocks: y = XOR(t, b) re-encodes the
# flip regardless of b, so the upset is always visible.
nl3 = parse_bench("INPUT(t)\nINPUT(b)\nOUTPUT(y)\ny = XOR(t, b)\n",
                  name="xor_path")
rep = analyze_site(nl3, sp_exact(nl3), nl3.id_of("t"))
print(f"  single XOR path : EPP = {rep.aggregate_any}  (always visible)")

# analyze_site wraps the sweep and aggregates across all capture points.
rep = analyze_site(nl, sp, site)
named = {nl.names[o]: e for o, e in rep.per_output.items()}
print(f"\nfull site report: per_output={named}, "
      f"any={rep.aggregate_any}, max={rep.aggregate_max}")
