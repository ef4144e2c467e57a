"""Type affine-A atlas: the string quotient of the preprojective algebra,
the affine Coxeter action on K0(proj), band modules and TF cones in H.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .algebra import Algebra, build_algebra
from .cones import ConeQ
from .errors import NotStringAlgebra
from .fp import MERSENNE31
from .library import atilde_spec
from .repmod import Rep, min_proj_presentation


def build_atilde(n: int, prime: int = MERSENNE31) -> Algebra:
    return build_algebra(atilde_spec(n), prime)


# ---------------------------------------------------------------------------
# Coxeter group

@dataclass(frozen=True)
class CoxeterWord:
    letters: tuple  # generator indices 1..n, applied right to left
    n: int
    parabolic: frozenset = frozenset()

    def __post_init__(self):
        if any(not 1 <= j <= self.n for j in self.letters):
            raise ValueError(f"letters out of range for n={self.n}")

    def __str__(self) -> str:
        return "".join(f"s{j}" for j in self.letters) or "1"


def reflection(n: int, j: int) -> np.ndarray:
    """Matrix of s_j on coordinates in the basis [P(1)], ..., [P(n)] (column vectors)."""
    S = np.eye(n, dtype=np.int64)
    k = j - 1
    S[k, k] = -1
    S[(k - 1) % n, k] += 1
    S[(k + 1) % n, k] += 1
    return S


def coxeter_matrix(word: CoxeterWord) -> np.ndarray:
    M = np.eye(word.n, dtype=np.int64)
    for j in word.letters:
        M = M @ reflection(word.n, j)
    return M


def coxeter_act(word: CoxeterWord, theta) -> tuple:
    v = np.array([int(x) for x in theta], dtype=np.int64)
    return tuple(int(x) for x in coxeter_matrix(word) @ v)


def enumerate_group(n: int, gens, bound: int) -> list:
    """Distinct elements of <s_j : j in gens> with a shortest word of length <= bound (BFS)."""
    seen = {np.eye(n, dtype=np.int64).tobytes(): CoxeterWord((), n)}
    frontier = [((), np.eye(n, dtype=np.int64))]
    for _ in range(bound):
        nxt = []
        for letters, M in frontier:
            for j in gens:
                if letters and letters[-1] == j:
                    continue
                N = M @ reflection(n, j)
                key = N.tobytes()
                if key not in seen:
                    seen[key] = CoxeterWord(letters + (j,), n)
                    nxt.append((letters + (j,), N))
        frontier = nxt
    return list(seen.values())


def h_vector(n: int) -> tuple:
    return (1,) * n


# ---------------------------------------------------------------------------
# cones in H and in the half spaces

def _dedupe(tagged: list) -> list:
    out = []
    for tag, cone in tagged:
        if not any(cone == c for _, c in out):
            out.append((tag, cone))
    return out


def decompose_H(n: int, word_length_bound: int | None = None) -> list:
    """TF classes in H: w(cone°{[P(j)] - [P(n)] : j in J}) for J in {1..n-1}, w in W'."""
    bound = word_length_bound if word_length_bound is not None else n * (n - 1) // 2
    group = enumerate_group(n, range(1, n), bound)
    base = []
    for j in range(1, n):
        v = [0] * n
        v[j - 1] += 1
        v[n - 1] -= 1
        base.append(tuple(v))
    tagged = []
    for k in range(n):
        for J in combinations(range(1, n), k):
            for w in group:
                gens = [coxeter_act(w, base[j - 1]) for j in J]
                cone = ConeQ.from_generators(gens, n)
                cone.meta = {"J": list(J), "word": str(w), "open": True}
                tagged.append(((tuple(J), str(w)), cone))
    return _dedupe(tagged)


def halfspace_chambers(n: int, word_length_bound: int = 3) -> list:
    """w(C°(P_J)) and -w(C°(P_J)) for nonempty J and w up to the word bound (a partial atlas)."""
    group = enumerate_group(n, range(1, n + 1), word_length_bound)
    tagged = []
    for k in range(1, n + 1):
        for J in combinations(range(1, n + 1), k):
            for w in group:
                gens = []
                for j in J:
                    e = [0] * n
                    e[j - 1] = 1
                    gens.append(coxeter_act(w, e))
                for sign in (1, -1):
                    cone = ConeQ.from_generators([tuple(sign * x for x in g) for g in gens], n)
                    cone.meta = {"J": list(J), "word": str(w), "sign": sign, "open": True,
                                 "bound": word_length_bound}
                    tagged.append(((tuple(J), str(w), sign), cone))
    return _dedupe(tagged)


def locate(cones: list, theta) -> list:
    """Tags of the cones whose relative interior contains theta."""
    return [tag for tag, c in cones if c.relint_contains(theta)]


# ---------------------------------------------------------------------------
# string algebra combinatorics

def check_string_algebra(A: Algebra) -> None:
    for rel in A.spec.relations:
        if len(rel) != 1:
            raise NotStringAlgebra("relations must be monomial")
    for v in range(A.n):
        if sum(1 for _, s, _ in A.arrows if s == v) > 2 or sum(1 for _, _, t in A.arrows if t == v) > 2:
            raise NotStringAlgebra(f"vertex {A.vertices[v]} has more than two arrows in or out")
    for a, s, t in A.arrows:
        after = [b for b, s2, _ in A.arrows if s2 == t and A.path_vector((a, b)).any()]
        before = [b for b, _, t2 in A.arrows if t2 == s and A.path_vector((b, a)).any()]
        if len(after) > 1 or len(before) > 1:
            raise NotStringAlgebra(f"arrow {a} has two nonzero continuations")


@dataclass(frozen=True)
class Band:
    letters: tuple  # (arrow name, +1 direct | -1 inverse)
    reduced: bool = True

    def inverse(self) -> "Band":
        return Band(tuple((a, -e) for a, e in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return " ".join(a if e > 0 else f"{a}^-1" for a, e in self.letters)


def _ends(A: Algebra, letter) -> tuple:
    a, e = letter
    _, s, t = A.arrows[A._aidx[a]]
    return (s, t) if e > 0 else (t, s)


def _is_string(A: Algebra, word: tuple) -> bool:
    for x, y in zip(word, word[1:]):
        if _ends(A, x)[1] != _ends(A, y)[0]:
            return False
        if x[0] == y[0] and x[1] == -y[1]:
            return False
    # every maximal run of direct (or inverse) letters is a nonzero path
    k = 0
    while k < len(word):
        e = word[k][1]
        m = k
        while m + 1 < len(word) and word[m + 1][1] == e:
            m += 1
        if m > k:
            run = [a for a, _ in word[k:m + 1]]
            path = run if e > 0 else run[::-1]
            if not A.path_vector(tuple(path)).any():
                return False
        k = m + 1
    return True


def _canonical(word: tuple) -> tuple:
    inv = tuple((a, -e) for a, e in reversed(word))
    rots = [w[k:] + w[:k] for w in (word, inv) for k in range(len(w))]
    return min(rots)


def _is_power(word: tuple) -> bool:
    L = len(word)
    return any(L % d == 0 and word == word[:d] * (L // d) for d in range(1, L))


def is_band(A: Algebra, word: tuple) -> bool:
    if not word or _ends(A, word[-1])[1] != _ends(A, word[0])[0]:
        return False
    if len({e for _, e in word}) < 2:
        return False
    return not _is_power(word) and _is_string(A, word + word)


def enumerate_bands(A: Algebra, max_len: int) -> list:
    """Bands up to rotation and inversion, canonical representatives, by length."""
    check_string_algebra(A)
    letters = [(a, e) for a, _, _ in A.arrows for e in (1, -1)]
    found = set()

    def extend(word):
        if len(word) >= 1 and _ends(A, word[-1])[1] == _ends(A, word[0])[0] and is_band(A, word):
            c = _canonical(word)
            if c == word:
                found.add(word)
        if len(word) == max_len:
            return
        for l in letters:
            w = word + (l,)
            if _ends(A, l)[0] == _ends(A, word[-1])[1] and _is_string(A, w):
                extend(w)

    for l in letters:
        extend((l,))
    return [Band(w) for w in sorted(found, key=lambda w: (len(w), w))]


def band_module(A: Algebra, b: Band, lam: int = 1) -> Rep:
    """Band module: one basis vector per position, the last letter scaled by lam."""
    L = len(b.letters)
    pos_vertex = [_ends(A, l)[0] for l in b.letters]
    dims = [0] * A.n
    index = []
    for v in pos_vertex:
        index.append(dims[v])
        dims[v] += 1
    mats = {a: np.zeros((dims[s], dims[t]), dtype=np.int64) for a, s, t in A.arrows}
    for k, (a, e) in enumerate(b.letters):
        c = lam if k == L - 1 else 1
        here, there = k, (k + 1) % L
        if e > 0:
            mats[a][index[here], index[there]] += c
        else:
            mats[a][index[there], index[here]] += c
    return Rep(A, dims, {k: v % A.prime for k, v in mats.items()}, integral=abs(lam) <= 64)


def eta_of_band(A: Algebra, b: Band, lam: int = 1) -> tuple:
    return min_proj_presentation(band_module(A, b, lam)).klass()


def band_I_sets(A: Algebra, b: Band) -> tuple[set, set]:
    """Edges i -> i+1 crossed by an alpha (I+) or by an inverse beta (I-), reading b in the
    direction in which it winds forward around the cycle."""
    n = A.n
    for word in (b, b.inverse()):
        plus, minus = set(), set()
        for a, e in word.letters:
            s, t = _ends(A, (a, e))
            if (t - s) % n == 1:
                (plus if e > 0 else minus).add(int(A.vertices[s]))
        if plus or minus:
            return plus, minus
    return set(), set()


# ---------------------------------------------------------------------------
# figure

def _project_H(v) -> tuple:
    """Coordinates of a vector of H (n = 3) in an orthonormal basis of H."""
    x = (v[0] - v[1]) / math.sqrt(2)
    y = (v[0] + v[1] - 2 * v[2]) / math.sqrt(6)
    return x, y


def hexagon_svg(cones: list, highlight: ConeQ | None = None, size: int = 420) -> str:
    """SVG of the decomposition of H for n = 3: sectors, labelled rays eta_ij, optional gray region."""
    c = size / 2
    r = size * 0.36

    def pt(v):
        x, y = _project_H([float(t) for t in v])
        nrm = math.hypot(x, y) or 1.0
        return c + r * x / nrm, c - r * y / nrm

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
           '<rect width="100%" height="100%" fill="white"/>']
    rays = [cone for _, cone in cones if cone.dim == 1]
    hexpts = sorted((pt(cone.rays()[0]) for cone in rays), key=lambda p: math.atan2(c - p[1], p[0] - c))
    if highlight is not None:
        poly = [(c, c)] + [pt(g) for g in sorted(highlight.rays(), key=lambda g: math.atan2(*_project_H(g)[::-1]))]
        out.append('<polygon points="{}" fill="#cccccc" stroke="none"/>'.format(
            " ".join(f"{x:.2f},{y:.2f}" for x, y in poly)))
    if hexpts:
        out.append('<polygon points="{}" fill="none" stroke="black" stroke-dasharray="6,4"/>'.format(
            " ".join(f"{x:.2f},{y:.2f}" for x, y in hexpts)))
    for cone in rays:
        g = cone.rays()[0]
        x, y = pt(g)
        i = g.index(1) + 1
        j = g.index(-1) + 1
        out.append(f'<line x1="{c}" y1="{c}" x2="{x:.2f}" y2="{y:.2f}" stroke="black" stroke-width="2"/>')
        lx, ly = c + (x - c) * 1.15, c + (y - c) * 1.15
        out.append(f'<text x="{lx:.2f}" y="{ly:.2f}" font-size="14" text-anchor="middle">η{i},{j}</text>')
    out.append(f'<circle cx="{c}" cy="{c}" r="3" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out)
