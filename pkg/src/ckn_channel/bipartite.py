"""Two-photon CKN scattering: double scattering, rescattering and envelopes.

Both photons use the canonical source frame ``theta_s = phi_s = 0`` about
their own propagation axis. The photons fly back to back, so an azimuth
``phi_b`` measured in the common lab frame appears as ``-phi_b`` in Bob's own
right-handed frame. With this convention the Bell state ``psi+`` depends on
the azimuths only through ``phi_a - phi_b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _product

import numpy as np

from .channel import (
    KrausSet,
    ScatteringGeometry,
    kraus_set,
    mix_kraus_set,
    scatter_effect,
)
from .errors import ContractError, ConvergenceError, DegeneratePostselectionError
from .linalg import RngStream, dagger, herm_eigen, partial_trace_b, tensor
from .states import validate_density_matrix

DEGENERATE_NORM = 1e-14
FAMILIES = ("all", "product-pure", "entangled-pure", "maximally-entangled")


@dataclass(frozen=True)
class PairGeometry:
    """Scattering geometries of Alice's and Bob's photon, each in its own frame."""

    alice: ScatteringGeometry
    bob: ScatteringGeometry

    @classmethod
    def from_angles(cls, theta_a, theta_b, phi_a, phi_b=0.0) -> "PairGeometry":
        """Build from lab-frame angles; Bob's azimuth is mirrored into his frame."""
        return cls(ScatteringGeometry.canonical(theta_a, phi_a),
                   ScatteringGeometry.canonical(theta_b, -phi_b))

    @property
    def phi_b(self) -> float:
        """Bob's azimuth in the lab frame."""
        return (-self.bob.phi_a) % (2 * np.pi)

    @property
    def delta_phi(self) -> float:
        return (self.alice.phi_a - self.phi_b) % (2 * np.pi)


def _observed(g, mixing=None) -> KrausSet:
    ks = kraus_set(g, k3=None)
    return ks if mixing is None else mix_kraus_set(ks, mixing)


def _pair_sum(kraus_a, kraus_b, rho):
    total = 0.0
    for ka, kb in _product(kraus_a, kraus_b):
        k = tensor(ka, kb)
        total += np.trace(k @ rho @ dagger(k)).real
    return float(total)


def double_scatter_probability(pg: PairGeometry, rho, *, mixing_a=None, mixing_b=None) -> float:
    """Probability that both photons are observed to scatter into ``pg``.

    ``Tr(sum_{i,j=1,2} (K_i x K_j) rho (K_i x K_j)^dag)``. Optional 2x2
    unitaries remix each photon's ``(K1, K2)`` pair.
    """
    rho = validate_density_matrix(rho, dim=4)
    return _pair_sum(_observed(pg.alice, mixing_a), _observed(pg.bob, mixing_b), rho)


def loss_probability(pg: PairGeometry, rho) -> float:
    """Total weight of all Kraus pairs containing at least one ``K3``."""
    rho = validate_density_matrix(rho, dim=4)
    ka, kb = kraus_set(pg.alice), kraus_set(pg.bob)
    total = 0.0
    for i, j in _product(range(3), range(3)):
        if i == 2 or j == 2:
            k = tensor(ka[i], kb[j])
            total += np.trace(k @ rho @ dagger(k)).real
    return float(total)


def pair_channel_output(pg: PairGeometry, rho, mode: str = "full", k3: str = "canonical"):
    """Two-photon state after both photons pass the CKN channel.

    Args:
        mode: ``"full"`` applies all nine Kraus pairs (trace preserving);
            ``"accessible"`` keeps the four observed pairs and renormalizes.
        k3: which third Kraus operator to use in full mode.

    Raises:
        DegeneratePostselectionError: accessible mode with an observed
            probability below ``DEGENERATE_NORM``.
    """
    rho = validate_density_matrix(rho, dim=4)
    if mode == "full":
        ka, kb = kraus_set(pg.alice, k3), kraus_set(pg.bob, k3)
    elif mode == "accessible":
        ka, kb = _observed(pg.alice), _observed(pg.bob)
    else:
        raise ContractError(f"unknown mode {mode!r}")
    out = np.zeros((4, 4), dtype=complex)
    for a, b in _product(ka, kb):
        k = tensor(a, b)
        out += k @ rho @ dagger(k)
    out = 0.5 * (out + dagger(out))
    if mode == "accessible":
        norm = np.trace(out).real
        if norm < DEGENERATE_NORM:
            raise DegeneratePostselectionError(f"observed probability {norm:.3e} too small to renormalize")
        out /= norm
    return out


def second_scatter_probability(pg: PairGeometry, g2: ScatteringGeometry, rho, *,
                               mixing_a=None, mixing_b=None, mixing_second=None) -> float:
    """Probability that Alice's photon scatters twice and Bob's once.

    After the first scattering Alice's photon is described by her reduced
    state, which then enters a second CKN scattering with geometry ``g2``
    given in the frame of the once-scattered photon:
    ``sum_{c,a,b} Tr(K_c Tr_B((K_a x K_b) rho (K_a x K_b)^dag) K_c^dag)``.
    """
    rho = validate_density_matrix(rho, dim=4)
    ka, kb = _observed(pg.alice, mixing_a), _observed(pg.bob, mixing_b)
    kc = _observed(g2, mixing_second)
    first = np.zeros((4, 4), dtype=complex)
    for a, b in _product(ka, kb):
        k = tensor(a, b)
        first += k @ rho @ dagger(k)
    reduced = partial_trace_b(first)
    return float(sum(np.trace(c @ reduced @ dagger(c)).real for c in kc))


def naive_sequential_probability(pg: PairGeometry, g2: ScatteringGeometry, rho,
                                 mixing=None, intermediate=None) -> float:
    """Composed-operator rescattering probability, kept to show representation dependence.

    ``sum_{c,a,b} Tr((K_c K_a x K_b) rho (K_c K_a x K_b)^dag)`` where
    ``mixing`` remixes Alice's first-stage pair ``F_l = sum_k U_lk K_k``. With
    ``intermediate`` set to 1 or 2 only that first-stage error ``F_z`` is
    kept. Summed over all intermediate errors the mixing cancels; for a single
    intermediate error it does not.
    """
    rho = validate_density_matrix(rho, dim=4)
    ka, kb, kc = _observed(pg.alice, mixing), _observed(pg.bob), _observed(g2)
    if intermediate is None:
        firsts = list(ka)
    elif intermediate in (1, 2):
        firsts = [ka[intermediate - 1]]
    else:
        raise ContractError(f"intermediate must be 1, 2 or None, got {intermediate!r}")
    total = 0.0
    for c, a, b in _product(kc, firsts, kb):
        k = tensor(c @ a, b)
        total += np.trace(k @ rho @ dagger(k)).real
    return float(total)


def pair_effect(pg: PairGeometry) -> np.ndarray:
    """``M = sum_{i,j=1,2} (K_i x K_j)^dag (K_i x K_j)``; ``p_double = Tr(M rho)``."""
    m = np.zeros((4, 4), dtype=complex)
    for a, b in _product(_observed(pg.alice), _observed(pg.bob)):
        k = tensor(a, b)
        m += dagger(k) @ k
    return m


def _start_vector(rng, k):
    gen = rng.generator(k) if isinstance(rng, RngStream) else rng
    v = gen.standard_normal(2) + 1j * gen.standard_normal(2)
    return v / np.linalg.norm(v)


def _alternate(m4, chi, sense, tol, max_iter):
    """Alternating eigen-iteration for an extremum of <psi x chi|M|psi x chi>."""
    pick = 0 if sense == "max" else -1
    value = None
    for _ in range(max_iter):
        ma = np.einsum("aibj,i,j->ab", m4, chi.conj(), chi)
        w, v = herm_eigen(0.5 * (ma + dagger(ma)))
        psi = v[:, pick]
        mb = np.einsum("iajb,i,j->ab", m4, psi.conj(), psi)
        w, v = herm_eigen(0.5 * (mb + dagger(mb)))
        chi = v[:, pick]
        new = float(w[pick])
        if value is not None and abs(new - value) < tol:
            return new, True
        value = new
    return value, False


def _product_envelope(m, rng, starts, tol, max_iter):
    m4 = m.reshape(2, 2, 2, 2)
    if rng is None:
        rng = RngStream(0)
    lo, hi = np.inf, -np.inf
    failed = []
    for k in range(starts):
        chi = _start_vector(rng, k)
        vmax, ok_max = _alternate(m4, chi, "max", tol, max_iter)
        vmin, ok_min = _alternate(m4, chi, "min", tol, max_iter)
        hi, lo = max(hi, vmax), min(lo, vmin)
        if not (ok_max and ok_min):
            failed.append(k)
    if len(failed) == starts:
        raise ConvergenceError(f"no start converged within {max_iter} alternations", best=(lo, hi))
    return lo, hi


def _maximally_entangled_envelope(pg):
    """Range over maximally entangled states ``(I x U)|Phi+>``.

    ``p = Tr(E_a^T U E_b U^dag) / 2``; over unitaries this ranges between the
    anti-sorted and sorted eigenvalue pairings of ``E_a`` and ``E_b``.
    """
    la = herm_eigen(scatter_effect(pg.alice))[0]
    lb = herm_eigen(scatter_effect(pg.bob))[0]
    return 0.5 * float(la @ lb[::-1]), 0.5 * float(la @ lb)


def probability_envelope(pg: PairGeometry, family: str = "all", *, rng=None,
                         starts: int = 20, tol: float = 1e-10, max_iter: int = 1000):
    """Smallest and largest double-scattering probability over a family of states.

    Families:
        ``"all"``: every two-photon state; extreme eigenvalues of ``M``.
        ``"entangled-pure"``: pure entangled states; their closure reaches the
        same extremes as ``"all"``.
        ``"product-pure"``: ``psi x chi``, by alternating eigen-iteration from
        ``starts`` Haar-random starts.
        ``"maximally-entangled"``: local-unitary orbit of a Bell state.

    Returns:
        ``(p_min, p_max)``.
    """
    if family not in FAMILIES:
        raise ContractError(f"unknown family {family!r}; choose from {FAMILIES}")
    m = pair_effect(pg)
    if family in ("all", "entangled-pure"):
        w, _ = herm_eigen(0.5 * (m + dagger(m)))
        return float(w[-1]), float(w[0])
    if family == "product-pure":
        return _product_envelope(m, rng, starts, tol, max_iter)
    return _maximally_entangled_envelope(pg)
