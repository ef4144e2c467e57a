from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from stabfan.algebra import quotient_by_vertices
from stabfan.atilde import (Band, CoxeterWord, band_I_sets, band_module, build_atilde, coxeter_act,
                            coxeter_matrix, decompose_H, enumerate_bands, enumerate_group, eta_of_band,
                            halfspace_chambers, hexagon_svg, locate)
from stabfan.candecomp import canonical_decomposition
from stabfan.cones import ConeQ
from stabfan.einv import is_rigid
from stabfan.errors import NotStringAlgebra
from stabfan.repmod import is_brick
from stabfan.stability import d_eta, wall_of


@pytest.fixture(scope="module")
def bands(at3):
    return enumerate_bands(at3, 12)


def eta(i, j):
    v = [0, 0, 0]
    v[i - 1] += 1
    v[j - 1] -= 1
    return tuple(v)


def test_build_sizes(at3):
    assert at3.n == 3 and len(at3.arrows) == 6
    A2 = build_atilde(2)
    assert A2.n == 2 and len(A2.arrows) == 4
    assert quotient_by_vertices(at3, [3]).n == 2


def test_coxeter_action():
    s1 = CoxeterWord((1,), 3)
    assert coxeter_act(s1, (1, 0, 0)) == (-1, 1, 1)
    assert coxeter_act(s1, (0, 1, 0)) == (0, 1, 0)
    assert coxeter_act(CoxeterWord((1, 1), 3), (3, -2, 5)) == (3, -2, 5)
    with pytest.raises(ValueError):
        CoxeterWord((4,), 3)


def test_coxeter_preserves_h():
    h = np.ones(3, dtype=np.int64)
    for w in enumerate_group(3, (1, 2, 3), 4):
        assert np.array_equal(h @ coxeter_matrix(w), h)


def test_parabolic_group_is_s3():
    assert len(enumerate_group(3, (1, 2), 6)) == 6


def test_decompose_H():
    cones = decompose_H(3)
    dims = sorted(c.dim for _, c in cones)
    assert dims == [0] + [1] * 6 + [2] * 6
    rays = {c.rays()[0] for _, c in cones if c.dim == 1}
    assert rays == {eta(i, j) for i in range(1, 4) for j in range(1, 4) if i != j}
    assert [c.dim for (J, _), c in cones if J == ()] == [0]


def test_decompose_H_partitions_disc():
    cones = decompose_H(3)
    rng = np.random.default_rng(0)
    for _ in range(2000):
        a, b = (Fraction(int(x), 7) for x in rng.integers(-50, 51, size=2))
        theta = (a, b, -a - b)
        assert len(locate(cones, theta)) == 1


def test_halfspace_chambers():
    cones = halfspace_chambers(3, 2)
    orth = ConeQ.from_generators([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 3)
    assert any(c == orth for _, c in cones)
    ray = ConeQ.from_generators([(-1, 1, 1)], 3)
    assert any(tag[:3] == ((1,), "s1", 1) and c == ray for tag, c in cones)
    hits = locate(halfspace_chambers(3, 3), (3, 2, 1))
    assert len(hits) == 1


def test_not_string_algebra(kron3):
    with pytest.raises(NotStringAlgebra):
        enumerate_bands(kron3, 4)


def test_brick_bands_have_dimv_111(at3, bands):
    bricks = [b for b in bands if is_brick(band_module(at3, b, 2))]
    assert len(bricks) == 6
    assert all(band_module(at3, b).dimv == (1, 1, 1) for b in bricks)
    for b in bricks:
        plus, minus = band_I_sets(at3, b)
        assert plus | minus == {1, 2, 3} and not plus & minus


def test_eta_independent_of_lambda(at3, bands):
    for b in bands[:10]:
        classes = {eta_of_band(at3, b, lam) for lam in (1, 2, 3, 5, 7)}
        assert len(classes) == 1


def test_band_eta_in_H(at3, bands):
    for b in bands:
        if band_module(at3, b).dimv == (1, 1, 1):
            assert sum(eta_of_band(at3, b)) == 0


def find_band(at3, bands, plus, minus):
    for b in bands:
        if band_module(at3, b).dimv == (1, 1, 1) and band_I_sets(at3, b) == (plus, minus):
            return b
    raise AssertionError("band not found")


def test_band_eta_12(at3, bands):
    b = find_band(at3, bands, {1}, {2, 3})
    assert eta_of_band(at3, b) == eta(1, 2)
    gray = ConeQ.from_generators([eta(1, 3), eta(3, 2)], 3)
    assert wall_of(band_module(at3, b, 1)) == gray


def test_band_rays_indecomposable_not_rigid(at3):
    for i, j in [(1, 2), (2, 3), (3, 1), (2, 1)]:
        e = eta(i, j)
        assert canonical_decomposition(at3, e).classes() == [e]
        assert not is_rigid(at3, e)[0]


def test_d_eta_matches_wall(at3, bands):
    D = d_eta(at3, eta(1, 2))
    assert D == ConeQ.from_generators([eta(1, 3), eta(3, 2)], 3)


def test_band_string_roundtrip():
    b = Band((("al1", 1), ("be3", -1)))
    assert b.inverse().inverse() == b
    assert str(b) == "al1 be3^-1"


def test_hexagon_svg():
    svg = hexagon_svg(decompose_H(3), ConeQ.from_generators([eta(1, 3), eta(3, 2)], 3))
    assert svg.startswith("<svg") and svg.count("<line") == 6 and "#cccccc" in svg
