"""Polarization states used throughout: |H>, |V>, Bell states and the mixed state.

Basis order is (H, V) for one photon and (HH, HV, VH, VV) for a pair.
"""

from __future__ import annotations

import numpy as np

from .errors import ContractError
from .linalg import HERMITIAN_TOL, PSD_CLAMP, herm_eigen, hermiticity_defect

TRACE_TOL = 1e-12


def _frozen(m):
    m = np.array(m, dtype=complex)
    m.flags.writeable = False
    return m


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


H = _frozen(projector([1, 0]))
V = _frozen(projector([0, 1]))
UNPOLARIZED = _frozen(np.eye(2) / 2)

PSI_PLUS = _frozen(projector([0, 1, 1, 0]))
PSI_MINUS = _frozen(projector([0, 1, -1, 0]))
RHO_MIXED = _frozen(0.5 * (PSI_PLUS + PSI_MINUS))


def validate_density_matrix(rho, dim=None, tol=TRACE_TOL) -> np.ndarray:
    """Check that ``rho`` is a density matrix and return it as a complex array.

    Hermitian within ``HERMITIAN_TOL``, unit trace within ``tol`` and no
    eigenvalue below ``-PSD_CLAMP``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] not in (2, 4):
        raise ContractError(f"density matrix must be 2x2 or 4x4, got shape {rho.shape}")
    if dim is not None and rho.shape[0] != dim:
        raise ContractError(f"expected a {dim}x{dim} density matrix, got {rho.shape[0]}x{rho.shape[0]}")
    if hermiticity_defect(rho) > HERMITIAN_TOL:
        raise ContractError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise ContractError(f"density matrix trace is {np.trace(rho).real!r}, expected 1")
    if herm_eigen(rho)[0][-1] < -PSD_CLAMP:
        raise ContractError("density matrix has a negative eigenvalue")
    return rho
