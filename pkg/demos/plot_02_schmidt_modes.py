"""
Schmidt modes and their polynomial form
=======================================

Each Schmidt mode is a finite combination of Hermite functions, so it is a
Gaussian envelope times a polynomial. We sample the first few modes, check
their parity and print the monomial coefficients of two of them.
"""
import numpy as np

import cvschmidt as cs

amp = cs.normalize(cs.pdc_amplitude(cs.pdc_from_physical(**cs.DEFAULT_PHYSICAL)))
dec = cs.schmidt_decompose(amp, cs.BasisFamily.hermite(1.0), m0=25)

k = np.linspace(-5, 5, 1001)
modes = {(side, i): cs.eval_mode(dec, side, i, k) for side in (1, 2) for i in range(4)}

##############################################################################
# The amplitude is invariant under ``(p, q) -> (-p, -q)``, so every mode is
# either even or odd.

for (side, i), psi in modes.items():
    even = np.max(np.abs(psi - psi[::-1]))
    odd = np.max(np.abs(psi + psi[::-1]))
    print(f"psi{side}_{i}: {'even' if even < odd else 'odd'}")

##############################################################################
# Prefactor polynomials; the envelope is ``exp(-(beta k)^2 / 2)``. The overall
# sign of a mode is arbitrary.

for side, i in [(1, 0), (2, 1)]:
    c = cs.mode_to_monomial(dec, side, i, 6)
    print(f"psi{side}_{i}:", " ".join(f"{v:+.5f}" for v in c))

##############################################################################
# Plot, if matplotlib is around.

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5), sharey=True)
    for side, ax in zip((1, 2), axes):
        for i in range(4):
            ax.plot(k, modes[(side, i)].real, label=f"n = {i}")
        ax.set_xlabel("k")
        ax.set_title(f"side {side}")
    axes[0].legend()
    fig.tight_layout()
    fig.savefig("schmidt_modes.png", dpi=120)
    print("wrote schmidt_modes.png")
