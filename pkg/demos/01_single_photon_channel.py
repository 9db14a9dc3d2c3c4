"""
Single-photon CKN channel
=========================

A 511 keV photon that Compton scatters is described by three Kraus
operators acting on its polarization qubit. K1 and K2 describe the observed
scattering, and K3 is the weight lost to the environment.
"""

# %%
# Build the Kraus set for a photon scattered by 82 degrees and check that it
# is trace preserving.
import numpy as np

from ckn_channel import (
    H,
    UNPOLARIZED,
    V,
    ScatteringGeometry,
    error_probabilities,
    extremal_pure_probabilities,
    klein_nishina_oracle,
    kraus_set,
    single_scatter_probability,
)

g = ScatteringGeometry.canonical(np.radians(82), 0.0)
ks = kraus_set(g)
print("completeness defect:", ks.completeness_defect())

# %%
# Error probabilities for an unpolarized photon versus scattering angle
# (the first panel of the single-photon figure). The loss p3 reaches about
# 80% near 82 degrees and peaks at 2*sqrt(2) - 2 around 114 degrees.
print(f"{'theta':>6} {'p1':>8} {'p2':>8} {'p3':>8}")
for theta in (0, 10, 30, 60, 82, 114.47, 150, 180):
    p = error_probabilities(kraus_set(ScatteringGeometry.canonical(np.radians(theta))), UNPOLARIZED)
    print(f"{theta:6.1f} {p[0]:8.4f} {p[1]:8.4f} {p[2]:8.4f}")

# %%
# For polarized photons the probabilities oscillate with the azimuth. The
# envelopes are the extreme eigenvalues of K_l^dag K_l, i.e. the range over
# every pure input state.
for theta in (10, 82, 170):
    ks = kraus_set(ScatteringGeometry.canonical(np.radians(theta)))
    lo, hi = extremal_pure_probabilities(ks, 2)
    p_h = [error_probabilities(kraus_set(ScatteringGeometry.canonical(np.radians(theta), phi)), H)[1]
           for phi in np.linspace(0, np.pi, 91)]
    p_v = [error_probabilities(kraus_set(ScatteringGeometry.canonical(np.radians(theta), phi)), V)[1]
           for phi in np.linspace(0, np.pi, 91)]
    print(f"theta={theta:3d}: p2 envelope [{lo:.4f}, {hi:.4f}], "
          f"|H> spans [{min(p_h):.4f}, {max(p_h):.4f}], |V> spans [{min(p_v):.4f}, {max(p_v):.4f}]")

# %%
# The observed scattering probability equals half the Klein-Nishina cross
# section (in units of r_e^2) at 511 keV.
theta = np.linspace(0, np.pi, 1000)
p = np.array([single_scatter_probability(ScatteringGeometry.canonical(t), UNPOLARIZED) for t in theta])
print("max |p - KN/2| =", np.max(np.abs(p - 0.5 * klein_nishina_oracle(theta))))
