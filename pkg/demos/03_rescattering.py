"""
A photon that scatters twice
============================

After its first scattering Alice's photon is described by its reduced state,
which then scatters again. This probability does not depend on which Kraus
representation is used at any stage.
"""

# %%
import numpy as np

from ckn_channel import (
    PSI_PLUS,
    PairGeometry,
    RngStream,
    ScatteringGeometry,
    haar_unitary,
    naive_sequential_probability,
    second_scatter_probability,
)

gen = RngStream(1).generator()
pg = PairGeometry.from_angles(np.radians(82), np.radians(82), np.radians(30), 0.0)
g2 = ScatteringGeometry.canonical(np.radians(60), np.radians(45))

p = second_scatter_probability(pg, g2, PSI_PLUS)
print("reduced-state rule:", p)
for _ in range(3):
    u = haar_unitary(2, gen)
    print("  remixed first stage:", second_scatter_probability(pg, g2, PSI_PLUS, mixing_a=u))

# %%
# Composing the operators K_c K_a and summing over every intermediate error
# gives the same number. Keeping only one intermediate error makes the result
# depend on the representation.
print("composed, all intermediates:", naive_sequential_probability(pg, g2, PSI_PLUS))
for _ in range(3):
    u = haar_unitary(2, gen)
    print("  single intermediate, remixed:",
          naive_sequential_probability(pg, g2, PSI_PLUS, mixing=u, intermediate=2))
