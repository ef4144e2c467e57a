"""Rational polyhedral cones with both generator and facet descriptions.

The conversion between the two uses the double description method in exact
integer/rational arithmetic; dimensions here are small (n <= 6).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd


def _prim(v) -> tuple:
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def dot(a, b):
    return sum(Fraction(x) * Fraction(y) for x, y in zip(a, b))


def _echelon(rows: list, n: int) -> tuple[list, list]:
    """Row echelon form over Q; returns (reduced rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    piv = []
    r = 0
    for c in range(n):
        k = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                t = m[i][c]
                m[i] = [a - t * b for a, b in zip(m[i], m[r])]
        piv.append(c)
        r += 1
    return m[:r], piv


def qrank(rows: list, n: int | None = None) -> int:
    if not rows:
        return 0
    return len(_echelon(rows, n or len(rows[0]))[1])


def qnullspace(rows: list, n: int) -> list:
    if not rows:
        return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    m, piv = _echelon(rows, n)
    free = [j for j in range(n) if j not in piv]
    out = []
    for j in free:
        v = [Fraction(0)] * n
        v[j] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -m[i][j]
        out.append(_prim(v))
    return out


def double_description(A: list, n: int) -> tuple[list, list]:
    """Extreme rays and a lineality basis of {x : a.x >= 0 for a in A}."""
    A = [tuple(a) for a in {_prim(a) for a in A} if any(a)]
    A.sort()
    lin = qnullspace(A, n)
    if not A:
        return [], lin
    # independent starting rows
    K = []
    for i, a in enumerate(A):
        if qrank([A[k] for k in K] + [a], n) > len(K):
            K.append(i)
    r = len(K)
    AK = [[Fraction(x) for x in A[k]] for k in K]
    # rays x_k in the row space with A_K x_k = e_k
    gram = [[dot(a, b) for b in AK] for a in AK]
    rays = []
    for k in range(r):
        rhs = [Fraction(1 if i == k else 0) for i in range(r)]
        aug = [gram[i] + [rhs[i]] for i in range(r)]
        m, piv = _echelon(aug, r + 1)
        y = [m[i][r] for i in range(r)]
        x = [sum(y[i] * AK[i][j] for i in range(r)) for j in range(n)]
        rays.append(_prim(x))
    done = list(K)
    for i, a in enumerate(A):
        if i in K:
            continue
        vals = [dot(a, x) for x in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zero = [k for k, v in enumerate(vals) if v == 0]
        new = [rays[k] for k in pos + zero]
        if neg and pos:
            zsets = [frozenset(j for j in done if dot(A[j], x) == 0) for x in rays]
            for kp in pos:
                for kn in neg:
                    common = zsets[kp] & zsets[kn]
                    if len(common) < r - 2:
                        continue
                    if any(k not in (kp, kn) and common <= zsets[k] for k in range(len(rays))):
                        continue
                    if qrank([A[j] for j in common], n) != r - 2:
                        continue
                    x = [vals[kp] * Fraction(rn) - vals[kn] * Fraction(rp)
                         for rp, rn in zip(rays[kp], rays[kn])]
                    new.append(_prim(x))
        rays = sorted(set(new))
        done.append(i)
    return sorted(set(rays)), lin


@dataclass
class ConeQ:
    generators: list  # primitive integer vectors; lineality appears as +/- pairs
    inequalities: list  # a with a.x >= 0; equations appear as +/- pairs
    ambient_dim: int
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_generators(cls, gens, n: int) -> "ConeQ":
        gens = sorted({_prim(g) for g in gens if any(Fraction(x) != 0 for x in g)})
        rays, lin = double_description(gens, n)
        ineq = set(rays)
        for l in lin:
            ineq.add(tuple(l))
            ineq.add(tuple(-x for x in l))
        # re-derive generators irredundantly
        grays, glin = double_description(sorted(ineq), n)
        g = set(grays)
        for l in glin:
            g.add(tuple(l))
            g.add(tuple(-x for x in l))
        return cls(sorted(g), sorted(ineq), n)

    @classmethod
    def from_inequalities(cls, ineqs, n: int, equations=()) -> "ConeQ":
        rows = [_prim(a) for a in ineqs]
        for e in equations:
            rows.append(_prim(e))
            rows.append(tuple(-x for x in _prim(e)))
        rays, lin = double_description(rows, n)
        gens = set(rays)
        for l in lin:
            gens.add(tuple(l))
            gens.add(tuple(-x for x in l))
        return cls.from_generators(sorted(gens), n)

    @classmethod
    def zero(cls, n: int) -> "ConeQ":
        return cls.from_generators([], n)

    # -- queries --------------------------------------------------------
    @property
    def dim(self) -> int:
        return qrank(list(self.generators), self.ambient_dim)

    def contains(self, x) -> bool:
        return all(dot(a, x) >= 0 for a in self.inequalities)

    def implicit_equalities(self) -> list:
        return [a for a in self.inequalities if all(dot(a, g) == 0 for g in self.generators)]

    def relint_contains(self, x) -> bool:
        if not self.contains(x):
            return False
        for a in self.inequalities:
            if dot(a, x) == 0 and any(dot(a, g) != 0 for g in self.generators):
                return False
        return True

    def subset_of(self, other: "ConeQ") -> bool:
        return all(other.contains(g) for g in self.generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConeQ):
            return NotImplemented
        return self.subset_of(other) and other.subset_of(self)

    def __hash__(self):
        return hash((tuple(self.generators), self.ambient_dim))

    def interior_point(self) -> tuple:
        n = self.ambient_dim
        return tuple(sum(Fraction(g[i]) for g in self.generators) for i in range(n))

    def rays(self) -> list:
        """Generators that are not part of the lineality space."""
        lin = [g for g in self.generators if tuple(-x for x in g) in set(self.generators)]
        return [g for g in self.generators if g not in lin]

    def segment_interval(self, a, b):
        """The set {t in [0,1] : (1-t)a + t b in cone} as (lo, hi) or None."""
        lo, hi = Fraction(0), Fraction(1)
        for q in self.inequalities:
            u, v = dot(q, a), dot(q, b)
            # (1-t)u + t v >= 0  <=>  u + t (v - u) >= 0
            slope = v - u
            if slope == 0:
                if u < 0:
                    return None
            elif slope > 0:
                lo = max(lo, -u / slope)
            else:
                hi = min(hi, -u / slope)
            if lo > hi:
                return None
        return lo, hi

    def to_dict(self) -> dict:
        out = {"ambient_dim": self.ambient_dim, "dim": self.dim,
               "generators": [list(g) for g in self.generators],
               "inequalities": [list(a) for a in self.inequalities]}
        if self.meta:
            out["meta"] = self.meta
        return out


def smith_unimodular(vectors: list) -> bool:
    """True iff the integer vectors extend to a Z-basis (all invariant factors equal 1)."""
    if not vectors:
        return True
    from sympy import Matrix
    from sympy.matrices.normalforms import smith_normal_form
    from sympy.polys.domains import ZZ

    M = Matrix([[int(x) for x in v] for v in vectors])
    if M.rank() < len(vectors):
        return False
    S = smith_normal_form(M, domain=ZZ)
    return all(abs(S[i, i]) == 1 for i in range(len(vectors)))
