import numpy as np
import pytest

from ckn_channel import H, UNPOLARIZED, ScatteringGeometry, klein_nishina_oracle, single_scatter_probability


def test_forward_and_backward():
    assert klein_nishina_oracle(0.0) == 2.0
    assert klein_nishina_oracle(np.pi) == pytest.approx(10 / 27, abs=1e-15)


def test_polarized_average_is_unpolarized():
    theta = np.linspace(0, np.pi, 11)
    avg = 0.5 * (klein_nishina_oracle(theta, 0.0) + klein_nishina_oracle(theta, np.pi / 2))
    assert np.allclose(avg, klein_nishina_oracle(theta), atol=1e-15)


def test_unpolarized_equivalence_on_grid():
    theta = np.linspace(0, np.pi, 1000)
    p = np.array([single_scatter_probability(ScatteringGeometry.canonical(t), UNPOLARIZED) for t in theta])
    assert np.max(np.abs(p - 0.5 * klein_nishina_oracle(theta))) < 1e-12
    c = np.cos(theta)
    assert np.allclose(p, (3 - 3 * c + 3 * c**2 - c**3) / (2 * (2 - c) ** 3), atol=1e-14)


def test_polarized_h_matches_oracle():
    # |H> is polarized perpendicular to the phi_a = 0 scattering plane
    theta = np.radians(82)
    for phi in np.linspace(0, 2 * np.pi, 73):
        p = single_scatter_probability(ScatteringGeometry.canonical(theta, phi), H)
        assert p == pytest.approx(0.5 * klein_nishina_oracle(theta, phi + np.pi / 2), abs=1e-12)
