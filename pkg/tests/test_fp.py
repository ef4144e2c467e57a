import numpy as np
import pytest

from stabfan import fp

P = fp.MERSENNE31


def test_matmul_no_overflow():
    rng = np.random.default_rng(1)
    a = rng.integers(0, P, size=(7, 9))
    b = rng.integers(0, P, size=(9, 5))
    expect = np.array([[sum(int(a[i, k]) * int(b[k, j]) for k in range(9)) % P for j in range(5)]
                       for i in range(7)])
    assert np.array_equal(fp.matmul(a, b, P), expect)


def test_rank_nullspace_solve():
    m = np.array([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert fp.rank(m, P) == 2
    ns = fp.nullspace(m, P)
    assert ns.shape[0] == 1
    assert not np.any(fp.matmul(m, ns.T, P))
    x = fp.solve(m, np.array([6, 12, 2]), P)
    assert np.array_equal(fp.matmul(m, x[:, None], P)[:, 0], np.array([6, 12, 2]))
    assert fp.solve(m, np.array([1, 0, 0]), P) is None


def test_inverse():
    m = np.array([[2, 1], [1, 1]])
    inv = fp.inverse(m, P)
    assert np.array_equal(fp.matmul(m, inv, P), np.eye(2, dtype=np.int64))
    with pytest.raises(Exception):
        fp.inverse(np.array([[1, 2], [2, 4]]), P)


def test_centered():
    assert fp.centered(np.array([P - 1, 3]), P).tolist() == [-1, 3]


def test_small_prime():
    m = np.array([[1, 1], [1, 1]])
    assert fp.rank(m, 2) == 1
    assert fp.rank(np.array([[1, 1], [1, -1]]), 2) == 1
    assert fp.rank(np.array([[1, 1], [1, -1]]), 3) == 2
