"""Small dense linear algebra over the prime field F_p (numpy int64 arrays)."""

from __future__ import annotations

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = np.array(m, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        f = a[:, c].copy()
        f[r] = 0
        a = (a - np.outer(f, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def row_space(m: np.ndarray, p: int) -> np.ndarray:
    """RREF basis (nonzero rows only) of the row space."""
    a, piv = rref(m, p)
    return a[: len(piv)]


def nullspace(m: np.ndarray, p: int) -> np.ndarray:
    """Basis, as rows, of ``{x : m @ x == 0 (mod p)}``."""
    a, piv = rref(m, p)
    n = a.shape[1]
    free = [c for c in range(n) if c not in piv]
    out = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        out[i, f] = 1
        for r, c in enumerate(piv):
            out[i, c] = (-a[r, f]) % p
    return out


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    a, piv = rref(np.hstack([m % p, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular mod p")
    return a[:, n:]


def det_nonzero_batch(ms: np.ndarray, p: int) -> np.ndarray:
    """Boolean mask of invertible matrices in a batch (n, k, k).

    Entries are below p, so for k <= 3 the float determinant is an integer of
    magnitude < 6 p^3 and rounding it is exact.
    """
    if ms.shape[1] <= 3:
        d = np.rint(np.linalg.det(ms.astype(np.float64))).astype(np.int64)
        return d % p != 0
    return np.array([rank(m, p) == m.shape[0] for m in ms], dtype=bool)


def standard_form(g: int) -> np.ndarray:
    """Gram matrix of the basis e_1..e_g, f_1..f_g with <e_i, f_j> = delta_ij."""
    j = np.zeros((2 * g, 2 * g), dtype=np.int64)
    j[:g, g:] = np.eye(g, dtype=np.int64)
    j[g:, :g] = -np.eye(g, dtype=np.int64)
    return j


def all_vectors(n: int, p: int) -> np.ndarray:
    """All vectors of F_p^n; row index equals the base-p code of the vector."""
    idx = np.arange(p**n, dtype=np.int64)
    out = np.empty((p**n, n), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        out[:, i] = idx % p
        idx //= p
    return out


def all_matrices(rows: int, cols: int, p: int) -> np.ndarray:
    return all_vectors(rows * cols, p).reshape(-1, rows, cols)


def general_linear(g: int, p: int) -> np.ndarray:
    ms = all_matrices(g, g, p)
    return ms[det_nonzero_batch(ms, p)]


def gl_order(g: int, p: int) -> int:
    out = 1
    for i in range(g):
        out *= p**g - p**i
    return out


def sp_order(g: int, p: int) -> int:
    out = p ** (g * g)
    for i in range(1, g + 1):
        out *= p ** (2 * i) - 1
    return out


def lagrangian_count(g: int, p: int) -> int:
    out = 1
    for i in range(1, g + 1):
        out *= p**i + 1
    return out


def gaussian_binomial(n: int, k: int, p: int) -> int:
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den
