"""
Cases with known answers
========================

Two limits bracket everything else: a product state has one Schmidt weight,
and a delta correlation spreads the weight evenly over every basis pair.
"""
import math

import numpy as np

import cvschmidt as cs

##############################################################################
# The delta ``delta(p - q)`` has the identity as its coefficient matrix. It is
# not normalizable, so only the renormalized weights mean anything.

for n_max in (1, 3, 7):
    dec = cs.decompose(cs.delta_coefficients(n_max))
    print(f"n_max={n_max}: S = {cs.entropy(dec.lambdas):.4f} (log2 = {math.log2(n_max + 1):.4f}), "
          f"K = {cs.schmidt_number(dec.lambdas):.1f}")

##############################################################################
# A product of two unrelated profiles.

amp = cs.product_amplitude(lambda x: np.exp(-(x - 0.3) ** 2), lambda x: 1 / np.cosh(x))
rule = cs.gauss_rule("gauss-hermite", 120)
dec = cs.schmidt_decompose(cs.normalize(amp, rule, rule), cs.BasisFamily(), m0=20)
print("nonzero weights:", np.count_nonzero(dec.lambdas), " S =", cs.entropy(dec.lambdas))
