from __future__ import annotations

import numpy as np
import pytest

from stabfan.algebra import QuiverSpec, build_algebra, injective, projective, quotient, quotient_by_vertices
from stabfan.errors import InvalidRelation, NotFiniteDimensional
from stabfan.library import a2_spec


def test_a2_basis(a2):
    assert a2.dim == 3
    assert sorted(a2.label(b) for b in range(a2.dim)) == ["a", "e1", "e2"]
    assert a2.check_associativity()


def test_projective_and_injective_dims(a2, a3):
    assert projective(a2, 0).dimv == (1, 1)
    assert projective(a2, 1).dimv == (0, 1)
    assert injective(a2, 0).dimv == (1, 0)
    assert injective(a2, 1).dimv == (1, 1)
    assert projective(a3, 0).dimv == (1, 1, 1)
    assert injective(a3, 2).dimv == (1, 1, 1)


def test_algebra_b(alg_b):
    assert alg_b.n == 3
    assert projective(alg_b, 0).dimv == (1, 3, 3)
    assert alg_b.check_associativity()


def test_atilde_dimension(at3):
    # three idempotents, six arrows, six surviving paths of length two
    assert at3.dim == 15
    assert at3.check_associativity()


def test_kronecker_cartan(kron3):
    assert kron3.cartan().tolist() == [[1, 3], [0, 1]]


def test_quotient_by_vertices(at3, a3):
    Q = quotient_by_vertices(at3, [3])
    assert Q.n == 2
    Q2 = quotient_by_vertices(a3, [2])
    assert Q2.n == 2 and Q2.arrows == []
    assert Q2.dim == 2


def test_quotient_by_arrow(kron):
    Q, keep = quotient(kron, kill_arrows=("a2",))
    assert keep == [0, 1]
    assert [a[0] for a in Q.arrows] == ["a1"]
    assert Q.dim == 3


def test_paths_compose_left_to_right(a3):
    v = a3.mul(a3.path_vector("a"), a3.path_vector("b"))
    assert np.array_equal(v, a3.path_vector(("a", "b")))
    assert not a3.mul(a3.path_vector("b"), a3.path_vector("a")).any()


def test_invalid_relations():
    spec = QuiverSpec((1, 2), (("a", 1, 2),), (((1, ("a", "a")),),), 3)
    with pytest.raises(InvalidRelation):
        build_algebra(spec)
    loop = QuiverSpec((1,), (("x", 1, 1),), (((1, ("x", "x")), (1, ("x", "x", "x"))),), 4)
    with pytest.raises(InvalidRelation):
        build_algebra(loop)
    with pytest.raises(InvalidRelation):
        build_algebra(QuiverSpec((1,), (("x", 1, 2),), ()))


def test_not_finite_dimensional():
    loop = QuiverSpec((1,), (("x", 1, 1),), (), 5)
    with pytest.raises(NotFiniteDimensional):
        build_algebra(loop)


def test_spec_roundtrip():
    s = a2_spec()
    assert QuiverSpec.from_dict(s.to_dict()) == s


def test_small_prime_reduction():
    A = build_algebra(a2_spec(), 3)
    assert A.prime == 3 and A.dim == 3
