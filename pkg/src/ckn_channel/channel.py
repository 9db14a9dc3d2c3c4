"""Compton-Klein-Nishina (CKN) scattering of a 511 keV photon as a qubit channel.

A scattering event is described by two directions: ``(theta_s, phi_s)`` fixes
the coordinate system of the source polarization and ``(theta_a, phi_a)`` is
the change of propagation direction. Two Kraus operators ``K1`` (polarization
blind, proportional to the identity) and ``K2`` describe the observed
scattering; together they reproduce the polarized Klein-Nishina cross section.
A third operator ``K3`` completes the set to a trace-preserving channel and
carries the weight lost to the environment.

All angles are in radians.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import ContractError, ModelViolationError, NotPSDError
from .linalg import I2, SIGMA_Z, dagger, herm_eigen, is_psd, psd_sqrt
from .states import validate_density_matrix

TWO_PI = 2.0 * np.pi
ANGLE_TOL = 1e-12
COMPLETENESS_TOL = 1e-10
RADICAND_TOL = 1e-12


@dataclass(frozen=True)
class ScatteringGeometry:
    """Angles of one CKN scattering event.

    Polar angles must lie in ``[0, pi]``; azimuths are reduced to ``[0, 2 pi)``.
    """

    theta_s: float
    phi_s: float
    theta_a: float
    phi_a: float

    def __post_init__(self):
        for name in ("theta_s", "theta_a"):
            t = float(getattr(self, name))
            if not np.isfinite(t) or t < -ANGLE_TOL or t > np.pi + ANGLE_TOL:
                raise ContractError(f"{name}={t!r} outside [0, pi]")
            object.__setattr__(self, name, min(max(t, 0.0), np.pi))
        for name in ("phi_s", "phi_a"):
            p = float(getattr(self, name))
            if not np.isfinite(p):
                raise ContractError(f"{name} must be finite")
            object.__setattr__(self, name, p % TWO_PI)
        if self.denominator > -1 + 1e-12:
            raise ContractError(f"denominator {self.denominator!r} is not <= -1")

    @classmethod
    def canonical(cls, theta_a: float, phi_a: float = 0.0) -> "ScatteringGeometry":
        """Geometry in the source frame ``theta_s = phi_s = 0``."""
        return cls(0.0, 0.0, theta_a, phi_a)

    @property
    def delta(self) -> float:
        """Azimuth difference ``phi_s - phi_a``."""
        return self.phi_s - self.phi_a

    @property
    def cos_between(self) -> float:
        """Cosine of the angle between source axis and scattered direction."""
        return (np.sin(self.theta_s) * np.sin(self.theta_a) * np.cos(self.delta)
                + np.cos(self.theta_s) * np.cos(self.theta_a))

    @property
    def denominator(self) -> float:
        """``sin ts sin ta cos(ps - pa) + cos ts cos ta - 2``, always in [-3, -1]."""
        return self.cos_between - 2.0

    @property
    def is_canonical(self) -> bool:
        return self.theta_s == 0.0


@dataclass(frozen=True)
class CanonicalK3Coefficients:
    A: float
    B: float

    @property
    def radicand(self) -> float:
        """``(1 - A)^2 - B^2``, evaluated as a product to limit cancellation."""
        a = 1.0 - self.A
        return (a - self.B) * (a + self.B)


def k3_coefficients(theta_a: float) -> CanonicalK3Coefficients:
    c = np.cos(theta_a)
    A = (15 * c - 6 * (np.cos(2 * theta_a) + 3) + np.cos(3 * theta_a)) / (8 * (c - 2) ** 3)
    B = np.sin(theta_a) ** 2 / (2 * (c - 2) ** 2)
    return CanonicalK3Coefficients(float(A), float(B))


def k1_scalar(theta_a: float) -> float:
    """K1 coefficient in the canonical frame, ``(1 - c) / (sqrt 2 (2 - c)^(3/2))``."""
    c = np.cos(theta_a)
    return float((1 - c) / (np.sqrt(2) * (2 - c) ** 1.5))


def kraus_k1(g: ScatteringGeometry) -> np.ndarray:
    """Polarization-blind Kraus operator, a nonnegative multiple of the identity.

    The closed form ``((X-1)^2/(2-X))^(3/2) / (sqrt 2 (1-X)^2)`` with ``X`` the
    cosine between the two directions is reduced to ``(1-X)/(sqrt 2 (2-X)^(3/2))``,
    which is finite at forward scattering.
    """
    x = g.cos_between
    return (1 - x) / (np.sqrt(2) * (2 - x) ** 1.5) * I2


def kraus_k2(g: ScatteringGeometry) -> np.ndarray:
    """Polarization-sensitive Kraus operator.

    Entry (0, 0) is written as ``cos(delta) / D`` rather than through
    ``sec(delta)`` so it stays finite at ``delta = pi/2``.
    """
    cs, ss = np.cos(g.theta_s), np.sin(g.theta_s)
    ca, sa = np.cos(g.theta_a), np.sin(g.theta_a)
    cd, sd = np.cos(g.delta), np.sin(g.delta)
    d = g.denominator
    return np.array(
        [[cd / d, -1j * cs * sd / d],
         [1j * ca * sd / d, -(cs * ca * cd + ss * sa) / d]],
        dtype=complex,
    )


def kraus_k3_canonical(theta_a: float, phi_a: float) -> np.ndarray:
    """Environment-loss Kraus operator in the source frame ``theta_s = phi_s = 0``.

    Built from the coefficients ``A``, ``B`` of :func:`k3_coefficients`. The
    azimuth enters with the sign matching ``delta = phi_s - phi_a`` of
    :func:`kraus_k2`; with the opposite sign the completeness relation fails.
    The prefactor ``sqrt(1 - A - r) / B`` is rewritten as ``1/sqrt(2 (1 - A + r))``
    (``r = sqrt((1-A)^2 - B^2)``), removing the 0/0 at ``theta_a = pi``. At
    forward scattering the operator vanishes.
    """
    if not (-ANGLE_TOL <= theta_a <= np.pi + ANGLE_TOL):
        raise ContractError(f"theta_a={theta_a!r} outside [0, pi]")
    coef = k3_coefficients(theta_a)
    rad = coef.radicand
    if rad < -RADICAND_TOL:
        raise ModelViolationError(f"K3 radicand {rad:.3e} is negative")
    a = 1.0 - coef.A
    s = a + np.sqrt(max(rad, 0.0))
    if s <= 0.0:
        return np.zeros((2, 2), dtype=complex)
    phi = -phi_a
    c2, s2 = np.cos(2 * phi), np.sin(2 * phi)
    rot = np.array([[c2, -1j * s2], [-1j * s2, c2]], dtype=complex)
    return (s * SIGMA_Z - coef.B * rot) / np.sqrt(2 * s)


def kraus_k3_general(g: ScatteringGeometry) -> np.ndarray:
    """Environment-loss operator in any frame: the PSD root of the completeness deficit."""
    k1, k2 = kraus_k1(g), kraus_k2(g)
    deficit = I2 - dagger(k1) @ k1 - dagger(k2) @ k2
    try:
        return psd_sqrt(deficit)
    except NotPSDError as exc:
        raise ModelViolationError(f"K1, K2 exceed the identity at {g}: {exc}") from exc


@dataclass(frozen=True)
class KrausSet:
    """Ordered Kraus operators with a declared completeness contract.

    ``"full"`` sets satisfy ``sum K^dag K = I``; ``"sub-channel"`` sets only
    ``sum K^dag K <= I``. The contract is checked at construction.
    """

    operators: tuple
    completeness: Literal["full", "sub-channel"] = "full"

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.operators)
        if not ops:
            raise ContractError("a Kraus set needs at least one operator")
        dim = ops[0].shape[0]
        if any(k.shape != (dim, dim) for k in ops):
            raise ContractError("Kraus operators must share one square shape")
        object.__setattr__(self, "operators", ops)
        if self.completeness == "full":
            if self.completeness_defect() >= COMPLETENESS_TOL:
                raise ContractError(f"completeness defect {self.completeness_defect():.3e}")
        elif self.completeness == "sub-channel":
            if not is_psd(np.eye(dim) - self.effect(), COMPLETENESS_TOL):
                raise ContractError("sum of K^dag K exceeds the identity")
        else:
            raise ContractError(f"unknown completeness flag {self.completeness!r}")

    def __len__(self):
        return len(self.operators)

    def __getitem__(self, i):
        return self.operators[i]

    def __iter__(self):
        return iter(self.operators)

    def effect(self) -> np.ndarray:
        """``sum_l K_l^dag K_l``."""
        return sum(dagger(k) @ k for k in self.operators)

    def completeness_defect(self) -> float:
        return float(np.linalg.norm(self.effect() - np.eye(self.operators[0].shape[0])))


def kraus_set(g: ScatteringGeometry, k3: str | None = "canonical") -> KrausSet:
    """Kraus set for one scattering event.

    Args:
        g: scattering geometry.
        k3: ``"canonical"`` (closed-form K3, requires ``theta_s = 0``),
            ``"general"`` (PSD root of the deficit, any frame) or ``None`` for
            the observed sub-channel ``{K1, K2}``.
    """
    ops = [kraus_k1(g), kraus_k2(g)]
    if k3 is None:
        return KrausSet(tuple(ops), "sub-channel")
    if k3 == "canonical":
        if not g.is_canonical:
            raise ContractError("the closed-form K3 needs theta_s = 0; use k3='general'")
        ops.append(kraus_k3_canonical(g.theta_a, g.phi_a - g.phi_s))
    elif k3 == "general":
        ops.append(kraus_k3_general(g))
    else:
        raise ContractError(f"unknown K3 choice {k3!r}")
    return KrausSet(tuple(ops), "full")


def scatter_effect(g: ScatteringGeometry) -> np.ndarray:
    """``K1^dag K1 + K2^dag K2``: the POVM element of an observed scattering."""
    k1, k2 = kraus_k1(g), kraus_k2(g)
    return dagger(k1) @ k1 + dagger(k2) @ k2


def mix_kraus_set(ks: KrausSet, u: np.ndarray) -> KrausSet:
    """Unitarily remixed set ``F_l = sum_k U_lk K_k``; describes the same channel."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (len(ks), len(ks)):
        raise ContractError(f"mixing table must be {len(ks)}x{len(ks)}, got {u.shape}")
    stack = np.stack(ks.operators)
    return KrausSet(tuple(np.tensordot(u, stack, axes=1)), ks.completeness)


def apply_channel(ks: KrausSet | Sequence[np.ndarray], rho: np.ndarray) -> np.ndarray:
    """``sum_l K_l rho K_l^dag``."""
    return sum(k @ rho @ dagger(k) for k in ks)


def error_probabilities(ks: KrausSet, rho: np.ndarray) -> np.ndarray:
    """Probabilities ``p_l = Tr(K_l rho K_l^dag)`` of each error of a full set.

    Values are returned unclamped so transcription errors stay visible.
    """
    if ks.completeness != "full":
        raise ContractError("error probabilities need a full (trace-preserving) Kraus set")
    rho = validate_density_matrix(rho)
    return np.array([np.trace(k @ rho @ dagger(k)).real for k in ks])


def single_scatter_probability(g: ScatteringGeometry, rho: np.ndarray) -> float:
    """Probability of an observed scattering into ``g``, ``sum_{i=1,2} Tr(K_i rho K_i^dag)``."""
    rho = validate_density_matrix(rho, dim=2)
    return float(np.trace(scatter_effect(g) @ rho).real)


def extremal_pure_probabilities(ks: KrausSet, l: int) -> tuple[float, float]:
    """Range of ``Tr(K_l psi psi^dag K_l^dag)`` over all pure states ``psi``.

    The functional is linear in the state, so the extremes are the extreme
    eigenvalues of ``K_l^dag K_l``. ``l`` is 1-based.
    """
    if not 1 <= l <= len(ks):
        raise ContractError(f"operator index {l} outside 1..{len(ks)}")
    k = ks[l - 1]
    w, _ = herm_eigen(dagger(k) @ k)
    return float(w[-1]), float(w[0])
