"""Small algebras and modules used throughout the tests and examples."""
from __future__ import annotations

import numpy as np

from .algebra import Algebra, QuiverSpec, build_algebra
from .fp import MERSENNE31
from .repmod import ProjMap, Rep


def a2_spec() -> QuiverSpec:
    return QuiverSpec((1, 2), (("a", 1, 2),), (), 3, "A2")


def a3_spec() -> QuiverSpec:
    return QuiverSpec((1, 2, 3), (("a", 1, 2), ("b", 2, 3)), (), 4, "A3 linear")


def kronecker_spec(m: int = 2) -> QuiverSpec:
    name = "Kronecker" if m == 2 else f"{m}-Kronecker"
    return QuiverSpec((1, 2), tuple((f"a{i}", 1, 2) for i in range(1, m + 1)), (), 3, name)


def algebra_b_spec() -> QuiverSpec:
    """Three arrows 0 -> 1 and three arrows 1 -> 2 with six quadratic relations;
    the top projective has dimension vector (1, 3, 3)."""
    arrows = (("ap", 0, 1), ("bp", 0, 1), ("cp", 0, 1), ("a", 1, 2), ("b", 1, 2), ("c", 1, 2))
    rels = (
        ((1, ("ap", "b")),),
        ((1, ("bp", "c")),),
        ((1, ("cp", "a")),),
        ((1, ("ap", "a")), (1, ("cp", "b"))),
        ((1, ("bp", "b")), (1, ("ap", "c"))),
        ((1, ("bp", "a")), (1, ("cp", "c"))),
    )
    return QuiverSpec((0, 1, 2), arrows, rels, 4, "B")


def atilde_spec(n: int) -> QuiverSpec:
    """Double of the cyclic quiver on 1..n with alpha_i: i -> i+1, beta_i: i -> i-1,
    alpha^n = beta^n = 0 and alpha_i beta_{i+1} = beta_{i+1} alpha_i = 0."""
    if n < 2:
        raise ValueError("n must be at least 2")

    def al(i):
        return f"al{(i - 1) % n + 1}"

    def be(i):
        return f"be{(i - 1) % n + 1}"

    arrows = []
    for i in range(1, n + 1):
        arrows.append((al(i), i, i % n + 1))
        arrows.append((be(i), i, (i - 2) % n + 1))
    rels = []
    for i in range(1, n + 1):
        rels.append(((1, tuple(al(i + k) for k in range(n))),))
        rels.append(((1, tuple(be(i - k) for k in range(n))),))
        rels.append(((1, (al(i), be(i + 1))),))
        rels.append(((1, (be(i + 1), al(i))),))
    return QuiverSpec(tuple(range(1, n + 1)), tuple(arrows), tuple(rels), n + 1, f"Atilde{n - 1} string quotient")


SPECS = {
    "a2": a2_spec,
    "a3_linear": a3_spec,
    "kronecker": lambda: kronecker_spec(2),
    "kronecker3": lambda: kronecker_spec(3),
    "counter_ray_b3": algebra_b_spec,
    "atilde2": lambda: atilde_spec(3),
}


def named(name: str, prime: int = MERSENNE31) -> Algebra:
    return build_algebra(SPECS[name](), prime)


def skew_module(A: Algebra) -> Rep:
    """Over the m-Kronecker (m odd): X_1 = X_2 = k^m with a_i acting by E_{i,i+1} - E_{i+1,i}."""
    m = len(A.arrows)
    mats = {}
    for i, (name, _, _) in enumerate(A.arrows):
        F = np.zeros((m, m), dtype=np.int64)
        F[i, (i + 1) % m] = 1
        F[(i + 1) % m, i] = -1
        mats[name] = F % A.prime
    return Rep(A, (m, m), mats, integral=True)


def kronecker_map(A: Algebra, rows) -> ProjMap:
    """P(2)^l -> P(1)^l with entry (r, c) the sum of the listed arrows."""
    l = len(rows)
    ent = np.zeros((l, l, A.dim), dtype=np.int64)
    for r in range(l):
        for c in range(l):
            if rows[r][c]:
                ent[r, c] = A.element([(1, (a,)) for a in rows[r][c]])
    return ProjMap(A, (1,) * l, (0,) * l, ent)


def skew_witnesses(A: Algebra) -> dict:
    """Explicit maps for l = 2, 3 with Hom(f, X) bijective on the skew module (m odd)."""
    m = len(A.arrows)
    x = [f"a{2 * i}" for i in range(1, (m - 1) // 2 + 1)]
    y = [f"a{2 * i - 1}" for i in range(1, (m - 1) // 2 + 1)]
    an = [f"a{m}"]
    z2 = kronecker_map(A, [[x, an], [an, y]])
    z3 = kronecker_map(A, [[x, an, []], [an, y, y], [[], y + an, x]])
    return {2: [z2], 3: [z3]}
