"""Small dense complex linear algebra for one- and two-photon polarization.

Matrices are plain ``numpy`` arrays of shape (2, 2) or (4, 4). Two-photon
operators use the Kronecker convention ``row = 2 * i_alice + i_bob``, i.e. the
first tensor factor is Alice and the second is Bob.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, NotPSDError

HERMITIAN_TOL = 1e-12
PSD_CLAMP = 1e-12

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

for _m in (I2, I4, SIGMA_X, SIGMA_Y, SIGMA_Z):
    _m.flags.writeable = False


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def _require_square(m, dims, name="matrix"):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in dims:
        raise ContractError(f"{name} must be square with dimension in {sorted(dims)}, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractError(f"{name} has non-finite entries")
    return m


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entrywise deviation ``max |m_ij - conj(m_ji)|``."""
    return float(np.max(np.abs(m - dagger(m))))


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two single-photon operators (Alice first)."""
    a = _require_square(a, {2}, "a")
    b = _require_square(b, {2}, "b")
    return np.kron(a, b)


def partial_trace_b(m: np.ndarray) -> np.ndarray:
    """Trace out Bob (the second factor) of a 4x4 operator."""
    m = _require_square(m, {4})
    return np.einsum("ikjk->ij", m.reshape(2, 2, 2, 2))


def herm_eigen(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns:
        ``(eigenvalues, eigenvectors)`` with real eigenvalues sorted in
        descending order and the matching orthonormal eigenvectors as columns.

    Raises:
        ContractError: if ``m`` is not Hermitian within ``HERMITIAN_TOL``.
    """
    m = _require_square(m, {2, 3, 4})
    if hermiticity_defect(m) > HERMITIAN_TOL:
        raise ContractError(f"matrix is not Hermitian (defect {hermiticity_defect(m):.3e})")
    w, v = np.linalg.eigh(0.5 * (m + dagger(m)))
    return w[::-1].copy(), v[:, ::-1].copy()


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Hermitian positive square root of a positive semidefinite matrix.

    Eigenvalues in ``[-PSD_CLAMP, 0)`` are treated as zero; anything more
    negative raises ``NotPSDError``.
    """
    w, v = herm_eigen(m)
    if w[-1] < -PSD_CLAMP:
        raise NotPSDError(f"smallest eigenvalue {w[-1]:.3e} is below -{PSD_CLAMP:g}")
    root = np.sqrt(np.clip(w, 0.0, None))
    return (v * root) @ dagger(v)


def is_psd(m: np.ndarray, tol: float = PSD_CLAMP) -> bool:
    return bool(herm_eigen(m)[0][-1] >= -tol)


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream addressed by ``(seed, stream)``.

    Every call to :meth:`generator` builds a fresh generator, so the same
    address always yields the same samples no matter how work is scheduled.
    Extra integers address independent child streams, e.g. one per Monte-Carlo
    sample.
    """

    seed: int
    stream: int = 0

    def generator(self, *child: int) -> np.random.Generator:
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream, *child))
        return np.random.Generator(np.random.PCG64(seq))


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")


def haar_unitary(dim: int, rng) -> np.ndarray:
    """Haar-random unitary of size ``dim`` in {2, 3, 4}.

    QR decomposition of a complex Ginibre matrix, with the phases of the
    diagonal of R pushed into Q so the distribution is exactly Haar.
    """
    if dim not in (2, 3, 4):
        raise ContractError(f"dim must be 2, 3 or 4, got {dim}")
    gen = _as_generator(rng)
    z = (gen.standard_normal((dim, dim)) + 1j * gen.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_pure_state(dim: int, rng) -> np.ndarray:
    """Haar-random pure density matrix of dimension 2 or 4."""
    if dim not in (2, 4):
        raise ContractError(f"dim must be 2 or 4, got {dim}")
    gen = _as_generator(rng)
    psi = gen.standard_normal(dim) + 1j * gen.standard_normal(dim)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def random_mixed_state(dim: int, rng) -> np.ndarray:
    """Hilbert-Schmidt random mixed state, handy for positivity scans."""
    gen = _as_generator(rng)
    g = gen.standard_normal((dim, dim)) + 1j * gen.standard_normal((dim, dim))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real
