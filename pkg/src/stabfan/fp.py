"""Exact linear algebra over a prime field F_p with int64 numpy arrays.

Entries are kept reduced in [0, p).  Products are split into 16-bit halves so
that p up to 2**31 never overflows int64 accumulation.
"""
from __future__ import annotations

import numpy as np

MERSENNE31 = 2147483647


def red(a, p: int) -> np.ndarray:
    return np.mod(np.asarray(a, dtype=np.int64), p)


def inv_scalar(x: int, p: int) -> int:
    x = int(x) % p
    if x == 0:
        raise ZeroDivisionError("inverse of zero in F_p")
    return pow(x, p - 2, p)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) mod p for reduced inputs."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[-1] == 0:
        return np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    # small primes: direct product cannot overflow
    if (p - 1) * (p - 1) * a.shape[-1] < 2**62:
        return np.mod(a @ b, p)
    lo = b & 0xFFFF
    hi = b >> 16
    out = np.mod(a @ lo, p)
    t = np.mod(a @ hi, p)
    t = np.mod(t * 65536, p)
    return np.mod(out + t, p)


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    a = red(a, p).copy()
    if a.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        piv = inv_scalar(a[r, c], p)
        a[r] = np.mod(a[r] * piv, p)
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = np.mod(a[hit] - np.mod(np.outer(col[hit], a[r]), p), p)
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(a: np.ndarray, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    if a.shape[0] > a.shape[1]:
        a = a.T
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {x : a @ x = 0}."""
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    r, piv = rref(a, p)
    free = [j for j in range(n) if j not in set(piv)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for k, j in enumerate(free):
        out[k, j] = 1
        for i, pc in enumerate(piv):
            out[k, pc] = (-r[i, j]) % p
    return out


def left_nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {y : y @ a = 0}."""
    return nullspace(np.asarray(a).T, p)


def row_basis(a: np.ndarray, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    if a.shape[0] == 0:
        return a.reshape(0, a.shape[1])
    return rref(a, p)[0]


def solve(a: np.ndarray, b: np.ndarray, p: int):
    """One solution x of a @ x = b (b a vector or matrix), or None."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    m, n = a.shape
    aug = np.concatenate([a, b], axis=1)
    r, piv = rref(aug, p)
    if any(c >= n for c in piv):
        return None
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = r[i, n:]
    return x[:, 0] if vec else x


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    r, piv = rref(np.concatenate([red(a, p), np.eye(n, dtype=np.int64)], axis=1), p)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return r[:, n:]


def complement_rows(sub: np.ndarray, ambient_dim: int, p: int) -> np.ndarray:
    """Standard basis vectors completing the row space of `sub` to everything."""
    if sub.shape[0] == 0:
        return np.eye(ambient_dim, dtype=np.int64)
    _, piv = rref(sub, p)
    free = [j for j in range(ambient_dim) if j not in set(piv)]
    out = np.zeros((len(free), ambient_dim), dtype=np.int64)
    out[np.arange(len(free)), free] = 1
    return out


def reduce_mod_rows(v: np.ndarray, rr: np.ndarray, piv: list[int], p: int) -> np.ndarray:
    """Reduce row vector(s) v modulo the span of an RREF block (rr, piv)."""
    v = red(v, p).copy()
    single = v.ndim == 1
    if single:
        v = v[None, :]
    for i, c in enumerate(piv):
        coef = v[:, c].copy()
        hit = np.flatnonzero(coef)
        if hit.size:
            v[hit] = np.mod(v[hit] - np.mod(np.outer(coef[hit], rr[i]), p), p)
    return v[0] if single else v


def first_dependency(vectors: list[np.ndarray], p: int):
    """Smallest k with vectors[k] in span(vectors[:k]); returns (k, coeffs)."""
    basis_rows: list[np.ndarray] = []
    for k, v in enumerate(vectors):
        if basis_rows:
            m = np.stack(basis_rows, axis=1)
            x = solve(m, v, p)
            if x is not None:
                return k, x
        elif not np.any(red(v, p)):
            return 0, np.zeros(0, dtype=np.int64)
        basis_rows.append(red(v, p))
    return None


def centered(a, p: int) -> np.ndarray:
    a = red(a, p)
    return np.where(a > p // 2, a - p, a)
