"""Klein-Nishina differential cross section at 511 keV, in units of r_e^2 / 2.

Written from the textbook formula only; it shares no code with the Kraus
operators and serves as an independent check of them.
"""

from __future__ import annotations

import numpy as np


def energy_ratio(theta):
    """k'/k for a photon at the electron rest energy: ``1 / (2 - cos theta)``."""
    return 1.0 / (2.0 - np.cos(theta))


def klein_nishina_oracle(theta, eta=None):
    """Dimensionless Klein-Nishina cross section for 511 keV photons.

    Args:
        theta: scattering angle in radians.
        eta: angle between the incident polarization vector and the scattering
            plane, or ``None`` for an unpolarized beam.

    Returns:
        ``r^2 (1/r + r - 2 sin^2(theta) cos^2(eta))`` with ``r = k'/k``, or the
        polarization average ``r^2 (1/r + r - sin^2(theta))``.
    """
    r = energy_ratio(theta)
    s2 = np.sin(theta) ** 2
    if eta is None:
        return r**2 * (1 / r + r - s2)
    return r**2 * (1 / r + r - 2 * s2 * np.cos(eta) ** 2)
