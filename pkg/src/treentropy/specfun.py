"""Spectral functions of real symmetric matrices.

Eigenvalues below ``zero_threshold`` are treated as exact zeros: the
logarithm is taken on the support only (``0 ln 0 = 0``), and a relative
entropy whose first argument leaks mass onto the kernel of the second is
``+inf``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from treentropy.graphcore import DENSITY_TOL, check_symmetric

ZERO_RTOL = 1e-10
SUPPORT_FACTOR = 10.0
NEGATIVE_CLAMP = 1e-9


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # orthonormal columns


def spectral_decompose(M) -> SpectralDecomposition:
    M = check_symmetric(M)
    w, V = np.linalg.eigh(M)
    return SpectralDecomposition(w, V)


def zero_threshold(dec: SpectralDecomposition) -> float:
    """Cut-off below which an eigenvalue counts as zero: ``1e-10 * max(1, lambda_max)``."""
    lam_max = float(dec.eigenvalues[-1]) if len(dec.eigenvalues) else 0.0
    return ZERO_RTOL * max(1.0, lam_max)


def _log_eigenvalues(dec: SpectralDecomposition) -> np.ndarray:
    theta = zero_threshold(dec)
    w = dec.eigenvalues
    if len(w) and w[0] < -theta:
        raise ValueError(f"matrix is not PSD (eigenvalue {w[0]:.3e} below -{theta:.1e})")
    out = np.zeros_like(w)
    support = w >= theta
    out[support] = np.log(w[support])
    return out


def log_on_support(M) -> np.ndarray:
    """Matrix logarithm restricted to the support; kernel directions map to 0."""
    dec = spectral_decompose(M)
    V = dec.eigenvectors
    return (V * _log_eigenvalues(dec)) @ V.T


def von_neumann_entropy(rho) -> float:
    dec = _density_decompose(rho, "density matrix")
    w = dec.eigenvalues
    w = w[w >= zero_threshold(dec)]
    return max(0.0, float(-np.sum(w * np.log(w))))


def relative_entropy(rho1, rho2) -> float:
    """Quantum relative entropy ``Tr(r1 ln r1) - Tr(r1 ln r2)`` in nats.

    Returns ``math.inf`` when the support of ``rho1`` is not contained in the
    support of ``rho2``. Containment is measured as the mass of ``rho1`` on
    the numerical kernel of ``rho2``, compared with ``10 * theta``.
    """
    dec1 = _density_decompose(rho1, "first argument")
    dec2 = _density_decompose(rho2, "second argument")
    if dec1.eigenvectors.shape != dec2.eigenvectors.shape:
        raise ValueError(
            f"dimension mismatch: {dec1.eigenvectors.shape} vs {dec2.eigenvectors.shape}"
        )
    rho1 = np.asarray(rho1, dtype=float)

    theta = zero_threshold(dec2)
    kernel = dec2.eigenvectors[:, dec2.eigenvalues < theta]
    leak = float(np.sum(kernel * (rho1 @ kernel))) if kernel.size else 0.0
    if leak > SUPPORT_FACTOR * theta:
        return math.inf

    w1 = dec1.eigenvalues
    w1 = w1[w1 >= zero_threshold(dec1)]
    tr_r1_log_r1 = float(np.sum(w1 * np.log(w1)))

    # Tr(rho1 ln rho2) in the eigenbasis of rho2
    V2 = dec2.eigenvectors
    diag = np.einsum("ij,ik,kj->j", V2, rho1, V2)
    tr_r1_log_r2 = float(np.dot(diag, _log_eigenvalues(dec2)))

    value = tr_r1_log_r1 - tr_r1_log_r2
    if value < 0:
        if value < -NEGATIVE_CLAMP:
            raise ArithmeticError(f"relative entropy evaluated to {value:.3e} < 0")
        value = 0.0
    return value


def _density_decompose(rho, name: str) -> SpectralDecomposition:
    M = check_symmetric(rho, name)
    tr = float(np.trace(M))
    if abs(tr - 1.0) > DENSITY_TOL:
        raise ValueError(f"{name} has trace {tr!r}, expected 1")
    dec = spectral_decompose(M)
    w = dec.eigenvalues
    if w[0] < -DENSITY_TOL * max(float(w[-1]), 0.0) - 1e-15:
        raise ValueError(f"{name} is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    return dec


def principal_submatrix(M, ell: int) -> np.ndarray:
    """Delete row and column ``ell`` (1-based)."""
    M = np.asarray(M)
    n = M.shape[0]
    if not 1 <= ell <= n:
        raise ValueError(f"index {ell} out of range 1..{n}")
    keep = np.arange(n) != ell - 1
    return M[np.ix_(keep, keep)]


def det_sym(M) -> float:
    """Determinant by LU factorization; the empty matrix has determinant 1."""
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 1.0
    return float(np.linalg.det(M))


def det_int(M) -> int:
    """Exact determinant of an integer matrix (fraction-free Bareiss elimination)."""
    A = [list(map(int, row)) for row in M]
    n = len(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        rowk = A[k]
        for i in range(k + 1, n):
            rowi = A[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1] if n else 1
