"""Parsing BENCH netlists and walking fan-out cones.

A netlist arrives as ISCAS-style text: INPUT/OUTPUT declarations plus one
gate assignment per line.  Parsing gives an immutable graph whose nets are
dense integer ids; everything downstream (probabilities, propagation,
simulation) works on those ids.
"""

from serprop import GateKind, emit_bench, fanout_cone, parse_bench

TEXT = """\
# a tiny mixed design: one register, one reconvergent branch
INPUT(a)
INPUT(b)
OUTPUT(y)
OUTPUT(z)
s   = XOR(a, b)
q   = DFF(s)
na  = NOT(a)
y   = AND(q, na)
z   = OR(s, b)
"""

nl = parse_bench(TEXT, name="demo1")

print(f"circuit {nl.name!r}: {nl.n_nets} nets")
for i in range(nl.n_nets):
    ins = ", ".join(nl.names[v] for v in nl.gate_inputs[i])
    print(f"  [{i}] {nl.names[i]:<3} {nl.kinds[i].name:<5} ({ins})")

# The flip-flop cuts the graph into a combinational frame: its output acts
# as one more input, its D pin as one more observation point.
print("\npseudo inputs :", [nl.names[i] for i in nl.pseudo_inputs])
print("capture points:", sorted(nl.names[i] for i in nl.capture_points))

# A fan-out cone answers: if net X suddenly carried the wrong value, which
# gates could see it, and which outputs could record it?
for net_name in ("a", "s"):
    cone = fanout_cone(nl, nl.id_of(net_name))
    print(f"\ncone of {net_name!r}:")
    print("  on-path :", sorted(nl.names[i] for i in cone.on_path_nets))
    print("  off-path:", sorted(nl.names[i] for i in cone.off_path_nets))
    print("  reaches :", sorted(nl.names[i] for i in cone.reachable_outputs))

# Note the cone of 's' stops at the flip-flop: an upset on 's' can be
# captured at the D pin this cycle, but propagation beyond it belongs to
# the next cycle's analysis.
assert nl.id_of("q") not in fanout_cone(nl, nl.id_of("s")).on_path_nets

# Round-trip: emit produces canonical text that parses back identically.
print("\ncanonical form:")
print(emit_bench(nl))
