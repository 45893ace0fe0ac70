"""From propagation probabilities to a soft-error-rate report.

Per net, the contribution to the observable error rate factors into three
terms:

    SER(net) = R_SEU(net) * P_latched(net) * P_sensitized(net)

The first two are technology inputs (strike rate and latching-window
derating); the third is what the analysis computes.  With the defaults of
1.0 the report is a pure sensitization profile, useful for ranking nets
before any technology data exists.
"""

from serprop import (SerConfig, analyze_all, build_report, parse_bench,
                     report_to_csv, report_to_json, sp_exact)

TEXT = """\
INPUT(a)
INPUT(b)
INPUT(c)
OUTPUT(y)
OUTPUT(z)
m = AND(a, b)
n = OR(b, c)
y = XOR(m, n)
z = AND(n, c)
"""
nl = parse_bench(TEXT, name="demo5")
sp = sp_exact(nl)
reports = analyze_all(nl, sp)

# Defaults: every net equally struck, every arrival latched.
plain = build_report(nl, reports, SerConfig(), sp_method="exact")
print("sensitization ranking (uniform technology inputs):")
for name in plain.ranking:
    row = next(r for r in plain.rows if r.name == name)
    print(f"  {name:<2} p_sensitized={row.p_sensitized:.4f}")

# Now weight in technology data: say the two wide gates sit in a region
# with triple the strike rate, and the latch window derates everything
# to 40%.
cfg = SerConfig(
    default_r_seu=1e-6,
    default_p_latched=0.4,
    r_seu={"m": 3e-6, "n": 3e-6},
)
weighted = build_report(nl, reports, cfg, sp_method="exact")
print(f"\nweighted total SER: {weighted.total_ser:.3e}")
print(f"ranking moved: {list(plain.ranking)} -> {list(weighted.ranking)}")

# Both serializations carry the same rows; JSON nests, CSV flattens.
print("\nJSON:")
print(report_to_json(weighted))
print("CSV:")
print(report_to_csv(weighted))
