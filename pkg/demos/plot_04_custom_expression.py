"""
Decomposing a hand-written amplitude
====================================

Any amplitude can be typed as an expression in ``p`` and ``q``. Here a
Gaussian with a tilted correlation: the more it is squeezed along ``p + q``,
the more modes it needs.
"""
import cvschmidt as cs

rule = cs.gauss_rule("gauss-hermite", 140)
for r in (0.0, 0.3, 0.6, 0.9):
    src = f"exp(-(1+{r})*(p+q)^2/4 - (p-q)^2/(4*(1+{r})))"
    amp = cs.normalize(cs.parse_expression(src), rule, rule)
    dec = cs.schmidt_decompose(amp, cs.BasisFamily(), m0=25, order=140)
    print(f"r={r:.1f}  K={cs.schmidt_number(dec.lambdas):.4f}  d2={cs.distance_d2(dec):.2e}")

##############################################################################
# The same run from the shell::
#
#     cvschmidt decompose --expr "exp(-(1.9)*(p+q)^2/4 - (p-q)^2/(4*1.9))" --out run/
