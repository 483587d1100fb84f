"""Pinching channels on real symmetric matrices.

``pinch(M, l)`` applies ``Pi M Pi + Q M Q`` with ``Q = |l><l|`` and
``Pi = I - Q``: it zeroes the off-diagonal entries of row and column ``l``.
The uniform mixture of all ``n`` pinchings scales every off-diagonal entry
by ``(n - 2) / n`` and leaves the diagonal alone.
"""

from __future__ import annotations

import numpy as np

from treentropy.graphcore import (
    Multigraph,
    adjacency_matrix,
    check_symmetric,
    degree_matrix,
    density_matrix,
    volume,
)


def _check_index(n: int, ell: int) -> None:
    if not 1 <= ell <= n:
        raise ValueError(f"pinch index {ell} out of range 1..{n}")


def projector_off(n: int, ell: int) -> np.ndarray:
    """Projector onto the span of every basis vector except ``|ell>``."""
    _check_index(n, ell)
    P = np.eye(n)
    P[ell - 1, ell - 1] = 0.0
    return P


def pinch(M, ell: int) -> np.ndarray:
    M = check_symmetric(M)
    _check_index(M.shape[0], ell)
    out = M.copy()
    k = ell - 1
    diag = out[k, k]
    out[k, :] = 0.0
    out[:, k] = 0.0
    out[k, k] = diag
    return out


def pinch_literal(M, ell: int) -> np.ndarray:
    """``Pi M Pi + Q M Q`` by explicit projector products (test oracle)."""
    M = check_symmetric(M)
    P = projector_off(M.shape[0], ell)
    Q = np.eye(M.shape[0]) - P
    return P @ M @ P + Q @ M @ Q


def averaged_pinch(M) -> np.ndarray:
    return averaged_pinch_power(M, 1)


def averaged_pinch_literal(M) -> np.ndarray:
    """Mean of ``pinch(M, l)`` over all ``l``, summed in index order."""
    M = check_symmetric(M)
    n = M.shape[0]
    if n < 2:
        raise ValueError("averaged pinching needs n >= 2")
    total = np.zeros_like(M)
    for ell in range(1, n + 1):
        total += pinch(M, ell)
    return total / n


def averaged_pinch_power(M, k: int) -> np.ndarray:
    """Apply the averaged pinching ``k`` times in closed form.

    Off-diagonal entries are multiplied by ``((n - 2) / n) ** k``.
    """
    M = check_symmetric(M)
    n = M.shape[0]
    if n < 2:
        raise ValueError("averaged pinching needs n >= 2")
    if k < 0:
        raise ValueError(f"power must be nonnegative, got {k}")
    if k == 0:
        return M.copy()
    factor = ((n - 2) / n) ** k
    out = M * factor
    np.fill_diagonal(out, np.diag(M))
    return out


def sigma_state(G: Multigraph) -> np.ndarray:
    """Average of all pinchings of the graph state, ``Delta/d - (n-2)/n * A/d``."""
    if G.n < 2:
        raise ValueError("sigma state needs n >= 2")
    density_matrix(G)  # raises on edgeless graphs
    d = volume(G)
    n = G.n
    return degree_matrix(G) / d - ((n - 2) / n) * adjacency_matrix(G) / d


def sigma_state_alt(G: Multigraph) -> np.ndarray:
    """Second closed form ``L/d + (2/n) A/d``."""
    rho = density_matrix(G)
    return rho + (2.0 / G.n) * adjacency_matrix(G) / volume(G)
