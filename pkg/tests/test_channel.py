import numpy as np
import pytest

from ckn_channel import (
    H,
    UNPOLARIZED,
    V,
    KrausSet,
    RngStream,
    ScatteringGeometry,
    error_probabilities,
    extremal_pure_probabilities,
    haar_unitary,
    k1_scalar,
    k3_coefficients,
    kraus_k1,
    kraus_k2,
    kraus_k3_canonical,
    kraus_k3_general,
    kraus_set,
    mix_kraus_set,
    random_pure_state,
    single_scatter_probability,
)
from ckn_channel.errors import ContractError
from ckn_channel.linalg import dagger, random_mixed_state

from conftest import random_geometry

DEG82 = np.radians(82)
# closed forms at theta_a = 82 deg, evaluated with mpmath at 30 digits
P_82 = (0.057502104155166299, 0.14719380787760679, 0.79530408796722691)


# Literal transcriptions of the printed closed forms, used as oracles.
def k1_printed(ts, ps, ta, pa):
    x = np.sin(ts) * np.sin(ta) * np.cos(ps - pa) + np.cos(ts) * np.cos(ta)
    return ((x - 1) ** 2 / (-x + 2)) ** 1.5 / (np.sqrt(2) * (-x + 1) ** 2)


def k2_printed(ts, ps, ta, pa):
    d = ps - pa
    den = np.sin(ts) * np.sin(ta) * np.cos(d) + np.cos(ts) * np.cos(ta) - 2
    return np.array([
        [1 / ((np.cos(ts) * np.cos(ta) - 2) / np.cos(d) + np.sin(ts) * np.sin(ta)),
         -1j * np.cos(ts) * np.sin(d) / den],
        [1j * np.cos(ta) * np.sin(d) / den,
         -(np.cos(ts) * np.cos(ta) * np.cos(d) + np.sin(ts) * np.sin(ta)) / den],
    ])


def k3_printed(ta, phi):
    c = np.cos(ta)
    A = (15 * c - 6 * (np.cos(2 * ta) + 3) + np.cos(3 * ta)) / (8 * (c - 2) ** 3)
    B = np.sin(ta) ** 2 / (2 * (c - 2) ** 2)
    r = np.sqrt((1 - A) ** 2 - B ** 2)
    return np.sqrt(1 - A - r) / np.sqrt(2) * np.array([
        [(1 - A - B * np.cos(2 * phi) + r) / B, 1j * np.sin(2 * phi)],
        [1j * np.sin(2 * phi), -(1 - A + B * np.cos(2 * phi) + r) / B],
    ])


def test_geometry_normalizes_and_validates():
    g = ScatteringGeometry(0, -np.pi / 2, 1.0, 7.0)
    assert 0 <= g.phi_s < 2 * np.pi and 0 <= g.phi_a < 2 * np.pi
    assert g.denominator <= -1 + 1e-12
    with pytest.raises(ContractError):
        ScatteringGeometry(0, 0, 4.0, 0)
    with pytest.raises(ContractError):
        ScatteringGeometry(-0.1, 0, 1.0, 0)


def test_k1_forward_is_zero():
    assert np.array_equal(kraus_k1(ScatteringGeometry.canonical(0.0, 1.3)), np.zeros((2, 2)))


def test_k1_at_82_degrees():
    k = kraus_k1(ScatteringGeometry.canonical(DEG82, 0.4))
    c = np.cos(DEG82)
    assert np.allclose(k, k[0, 0] * np.eye(2)) and k[0, 0].real >= 0
    assert abs(k[0, 0] ** 2 - (1 - c) ** 2 / (2 * (2 - c) ** 3)) < 1e-15
    assert abs(k[0, 0] ** 2 - 0.0575) < 1e-4
    assert abs(k[0, 0] - k1_scalar(DEG82)) < 1e-15


def test_k1_matches_printed_form(gen):
    for _ in range(1000):
        g = random_geometry(gen)
        assert abs(kraus_k1(g)[0, 0] - k1_printed(g.theta_s, g.phi_s, g.theta_a, g.phi_a)) < 1e-12


@pytest.mark.parametrize("phi", np.linspace(0, 2 * np.pi, 7))
def test_k1_independent_of_phi_in_canonical_frame(phi):
    assert kraus_k1(ScatteringGeometry.canonical(1.1, phi))[0, 0] == kraus_k1(ScatteringGeometry.canonical(1.1, 0))[0, 0]


def test_k2_forward_is_unitary():
    k = kraus_k2(ScatteringGeometry(0, 0, 0, 0))
    assert np.allclose(k, np.diag([-1, 1]))
    assert np.allclose(np.linalg.svd(k, compute_uv=False), 1)


def test_k2_canonical_reduced_form(gen):
    for _ in range(200):
        ta, pa = gen.uniform(0, np.pi), gen.uniform(0, 2 * np.pi)
        c, d = np.cos(ta), -pa
        expected = np.array([[np.cos(d), -1j * np.sin(d)], [1j * c * np.sin(d), -c * np.cos(d)]]) / (c - 2)
        assert np.allclose(kraus_k2(ScatteringGeometry.canonical(ta, pa)), expected, atol=1e-14)


def test_k2_matches_printed_form_where_sec_is_finite(gen):
    for _ in range(1000):
        g = random_geometry(gen)
        if abs(np.cos(g.delta)) < 1e-3:
            continue
        assert np.allclose(kraus_k2(g), k2_printed(g.theta_s, g.phi_s, g.theta_a, g.phi_a), atol=1e-10)


def test_k2_continuous_across_quarter_turn():
    below = kraus_k2(ScatteringGeometry(0.3, 0.0, 1.2, -np.pi / 2 + 1e-7))
    at = kraus_k2(ScatteringGeometry(0.3, 0.0, 1.2, -np.pi / 2))
    assert np.all(np.isfinite(at))
    assert np.max(np.abs(below - at)) < 1e-6


def test_k2_unpolarized_weight():
    c = np.cos(DEG82)
    k = kraus_k2(ScatteringGeometry.canonical(DEG82, 0.9))
    p = 0.5 * np.trace(dagger(k) @ k).real
    assert abs(p - (1 + c**2) / (2 * (2 - c) ** 2)) < 1e-15
    assert abs(p - 0.147) < 1e-3


def test_k3_coefficients_closed_forms(gen):
    for ta in gen.uniform(0, np.pi, 200):
        c = np.cos(ta)
        coef = k3_coefficients(ta)
        # A is the unpolarized scattering probability
        assert abs(coef.A - (3 - 3 * c + 3 * c**2 - c**3) / (2 * (2 - c) ** 3)) < 1e-14
        assert coef.B > 0
        assert coef.radicand >= -1e-12


def test_k3_matches_printed_form_with_aligned_azimuth(gen):
    for _ in range(500):
        ta, pa = gen.uniform(0.05, np.pi - 0.05), gen.uniform(0, 2 * np.pi)
        assert np.allclose(kraus_k3_canonical(ta, pa), k3_printed(ta, -pa), atol=1e-10)


def test_printed_k3_with_literal_azimuth_is_incomplete():
    # Reading the printed azimuth literally breaks completeness away from
    # phi_a = 0, pi/2, ...; the implementation takes the aligned sign.
    g = ScatteringGeometry.canonical(DEG82, 0.4)
    k1, k2, k3 = kraus_k1(g), kraus_k2(g), k3_printed(DEG82, 0.4)
    defect = np.linalg.norm(sum(dagger(k) @ k for k in (k1, k2, k3)) - np.eye(2))
    assert defect > 1e-2


def test_k3_forward_and_backward_limits():
    assert np.array_equal(kraus_k3_canonical(0.0, 0.7), np.zeros((2, 2)))
    ks = kraus_set(ScatteringGeometry.canonical(np.pi, 0.7))
    assert ks.completeness_defect() < 1e-10
    assert np.all(np.isfinite(ks[2]))


def test_k3_unpolarized_loss_at_82():
    k = kraus_k3_canonical(DEG82, 0.0)
    assert abs(0.5 * np.trace(dagger(k) @ k).real - P_82[2]) < 1e-12
    assert abs(P_82[2] - 0.795) < 1e-3


def test_completeness_grid():
    for ta in np.linspace(0, np.pi, 61):
        for pa in np.linspace(0, 2 * np.pi, 37):
            assert kraus_set(ScatteringGeometry.canonical(ta, pa)).completeness_defect() < 1e-10


def test_general_k3_matches_canonical_up_to_unitary(gen):
    for _ in range(500):
        ta, pa = gen.uniform(0, np.pi), gen.uniform(0, 2 * np.pi)
        kg = kraus_k3_general(ScatteringGeometry.canonical(ta, pa))
        kc = kraus_k3_canonical(ta, pa)
        assert np.linalg.norm(dagger(kg) @ kg - dagger(kc) @ kc) < 1e-10


def test_general_k3_any_frame(gen):
    for _ in range(1000):
        assert kraus_set(random_geometry(gen), "general").completeness_defect() < 1e-10
    assert np.allclose(kraus_k3_general(ScatteringGeometry(0, 0, 0, 0)), 0, atol=1e-12)


def test_canonical_k3_requires_canonical_frame():
    with pytest.raises(ContractError):
        kraus_set(ScatteringGeometry(0.2, 0, 1, 1), "canonical")


def test_canonical_k3_follows_source_azimuth():
    a = kraus_set(ScatteringGeometry(0, 0.3, 1.0, 1.1))
    b = kraus_set(ScatteringGeometry(0, 0, 1.0, 0.8))
    for x, y in zip(a, b):
        assert np.allclose(x, y, atol=1e-14)


def test_kraus_set_contracts():
    with pytest.raises(ContractError):
        KrausSet((np.eye(2), np.eye(2)), "full")
    with pytest.raises(ContractError):
        KrausSet((np.eye(2) * 1.1,), "sub-channel")
    sub = kraus_set(ScatteringGeometry.canonical(1.0, 0.2), None)
    assert sub.completeness == "sub-channel"
    with pytest.raises(ContractError):
        error_probabilities(sub, H)


def test_error_probabilities_unpolarized_82():
    p = error_probabilities(kraus_set(ScatteringGeometry.canonical(DEG82, 1.0)), UNPOLARIZED)
    assert np.allclose(p, P_82, atol=1e-12)


@pytest.mark.parametrize("rho", [H, V, UNPOLARIZED])
def test_error_probabilities_forward(rho):
    p = error_probabilities(kraus_set(ScatteringGeometry.canonical(0.0, 0.5)), rho)
    assert np.allclose(p, [0, 1, 0], atol=1e-15)


def test_h_oscillation_has_period_pi():
    phis = np.linspace(0, np.pi, 50)
    p = [error_probabilities(kraus_set(ScatteringGeometry.canonical(DEG82, x)), H)[1] for x in phis]
    q = [error_probabilities(kraus_set(ScatteringGeometry.canonical(DEG82, x + np.pi)), H)[1] for x in phis]
    assert np.allclose(p, q, atol=1e-12)
    assert max(p) - min(p) > 0.05


def test_unpolarized_probabilities_independent_of_azimuth(gen):
    for ta in gen.uniform(0, np.pi, 50):
        ref = error_probabilities(kraus_set(ScatteringGeometry.canonical(ta, 0)), UNPOLARIZED)
        for pa in gen.uniform(0, 2 * np.pi, 5):
            p = error_probabilities(kraus_set(ScatteringGeometry.canonical(ta, pa)), UNPOLARIZED)
            assert np.allclose(p, ref, atol=1e-12)


def test_positivity_and_normalization(gen):
    for i in range(2000):
        rho = random_pure_state(2, gen) if i % 2 else random_mixed_state(2, gen)
        p = error_probabilities(kraus_set(random_geometry(gen), "general"), rho)
        assert p.min() >= -1e-12 and p.max() <= 1 + 1e-12
        assert abs(p.sum() - 1) < 1e-10


def test_single_scatter_is_p1_plus_p2(gen):
    for _ in range(200):
        g = random_geometry(gen, canonical=True)
        rho = random_mixed_state(2, gen)
        p = error_probabilities(kraus_set(g), rho)
        assert abs(single_scatter_probability(g, rho) - p[0] - p[1]) < 1e-12
    assert single_scatter_probability(ScatteringGeometry.canonical(0.0), H) == pytest.approx(1, abs=1e-15)


def test_extremal_probabilities():
    ks = kraus_set(ScatteringGeometry.canonical(DEG82, 0.3))
    lo, hi = extremal_pure_probabilities(ks, 1)
    assert lo == pytest.approx(hi, abs=1e-15) == pytest.approx(P_82[0], abs=1e-12)
    assert extremal_pure_probabilities(kraus_set(ScatteringGeometry.canonical(0, 0)), 2) == pytest.approx((1, 1), abs=1e-15)
    with pytest.raises(ContractError):
        extremal_pure_probabilities(ks, 4)


def test_extremal_probabilities_bound_random_states():
    gen = RngStream(9).generator()
    ks = kraus_set(ScatteringGeometry.canonical(DEG82, 0.3))
    bounds = [extremal_pure_probabilities(ks, l) for l in (1, 2, 3)]
    for _ in range(10_000):
        p = error_probabilities(ks, random_pure_state(2, gen))
        for (lo, hi), x in zip(bounds, p):
            assert lo - 1e-10 <= x <= hi + 1e-10


def test_remixing_preserves_channel(gen):
    for _ in range(100):
        g = random_geometry(gen, canonical=True)
        ks = kraus_set(g)
        mixed = mix_kraus_set(ks, haar_unitary(3, gen))
        rho = random_mixed_state(2, gen)
        out_a = sum(k @ rho @ dagger(k) for k in ks)
        out_b = sum(k @ rho @ dagger(k) for k in mixed)
        assert np.linalg.norm(out_a - out_b) < 1e-10
        sub = kraus_set(g, None)
        remixed = mix_kraus_set(sub, haar_unitary(2, gen))
        assert abs(sum(np.trace(k @ rho @ dagger(k)) for k in remixed).real
                   - single_scatter_probability(g, rho)) < 1e-10
