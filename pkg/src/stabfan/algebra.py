"""Finite-dimensional quiver algebras kQ/I over a prime field.

Paths compose left to right: the path (a, b) means a then b.  Basis elements
are residue paths; trivial paths come first, then paths by length and name.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import fp
from .errors import InvalidRelation, NotFiniteDimensional


@dataclass(frozen=True)
class QuiverSpec:
    vertices: tuple
    arrows: tuple  # (name, source, target)
    relations: tuple = ()  # each: tuple of (coeff, tuple of arrow names)
    max_path_length: int = 8
    name: str = ""

    @classmethod
    def from_dict(cls, d: dict) -> "QuiverSpec":
        rels = []
        for rel in d.get("relations", []):
            rels.append(tuple((int(c), tuple(path)) for c, path in rel))
        return cls(
            vertices=tuple(d["vertices"]),
            arrows=tuple((str(a), s, t) for a, s, t in d["arrows"]),
            relations=tuple(rels),
            max_path_length=int(d.get("max_path_length", 8)),
            name=str(d.get("name", "")),
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "vertices": list(self.vertices),
            "arrows": [list(a) for a in self.arrows],
            "relations": [[[c, list(path)] for c, path in rel] for rel in self.relations],
            "max_path_length": self.max_path_length,
        }


def load_spec(path) -> QuiverSpec:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".toml":
        import tomllib

        data = tomllib.loads(text)
    else:
        data = json.loads(text)
    if "algebra" in data:
        data = data["algebra"]
    return QuiverSpec.from_dict(data)


@dataclass(frozen=True)
class ProjectiveLabel:
    multiplicities: tuple

    def summands(self) -> tuple:
        """Vertex index of each summand, in vertex order."""
        out = []
        for i, m in enumerate(self.multiplicities):
            out.extend([i] * int(m))
        return tuple(out)

    @classmethod
    def of(cls, n: int, counts: dict | None = None) -> "ProjectiveLabel":
        m = [0] * n
        for i, c in (counts or {}).items():
            m[i] += c
        return cls(tuple(m))


class Algebra:
    """Basis, structure constants and vertex data of kQ/I over F_p."""

    def __init__(self, spec: QuiverSpec, prime: int):
        self.spec = spec
        self.prime = p = int(prime)
        self.vertices = list(spec.vertices)
        self.n = len(self.vertices)
        self._vidx = {v: i for i, v in enumerate(self.vertices)}
        if len(self._vidx) != self.n:
            raise InvalidRelation("duplicate vertex labels")
        self.arrows = []
        for name, s, t in spec.arrows:
            if s not in self._vidx or t not in self._vidx:
                raise InvalidRelation(f"arrow {name} uses an undeclared vertex")
            self.arrows.append((name, self._vidx[s], self._vidx[t]))
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names):
            raise InvalidRelation("duplicate arrow names")
        self._aidx = {a[0]: k for k, a in enumerate(self.arrows)}
        self._check_relations()
        self._build(p)

    # -- construction -------------------------------------------------
    def vertex_index(self, v) -> int:
        if v in self._vidx:
            return self._vidx[v]
        if isinstance(v, str) and v.isdigit() and int(v) in self._vidx:
            return self._vidx[int(v)]
        if str(v) in self._vidx:
            return self._vidx[str(v)]
        raise KeyError(v)

    def _path_ends(self, path: tuple) -> tuple[int, int]:
        for a in path:
            if a not in self._aidx:
                raise InvalidRelation(f"unknown arrow {a!r}")
        for a, b in zip(path, path[1:]):
            if self.arrows[self._aidx[a]][2] != self.arrows[self._aidx[b]][1]:
                raise InvalidRelation(f"path {'*'.join(path)} is not composable")
        return self.arrows[self._aidx[path[0]]][1], self.arrows[self._aidx[path[-1]]][2]

    def _check_relations(self) -> None:
        self._rels = []
        for rel in self.spec.relations:
            if not rel:
                continue
            ends = set()
            lengths = set()
            for _, path in rel:
                if len(path) < 2:
                    raise InvalidRelation("relation terms must have length >= 2")
                ends.add(self._path_ends(path))
                lengths.add(len(path))
            if len(ends) != 1:
                raise InvalidRelation("relation terms must share source and target")
            if len(lengths) != 1:
                raise InvalidRelation("relations must be homogeneous in path length")
            self._rels.append((lengths.pop(), [(c, tuple(self._aidx[a] for a in path)) for c, path in rel]))

    def _build(self, p: int) -> None:
        L = self.spec.max_path_length
        arrows = self.arrows
        name_key = lambda q: tuple(arrows[a][0] for a in q)
        out_of = [[k for k, a in enumerate(arrows) if a[1] == v] for v in range(self.n)]

        all_paths = {1: sorted(((k,) for k in range(len(arrows))), key=name_key)}
        basis_by_len = {1: list(all_paths[1])}
        nf: dict[int, dict] = {1: {q: {q: 1} for q in all_paths[1]}}
        ideal_rows: dict[int, list[dict]] = {1: []}
        top = 1 if arrows else 0
        if arrows:
            ell = 1
            while True:
                ell += 1
                if ell > L:
                    raise NotFiniteDimensional(
                        f"paths of length {L} survive; raise max_path_length or check relations"
                    )
                prev = all_paths[ell - 1]
                paths = [q + (a,) for q in prev for a in out_of[arrows[q[-1]][2]]]
                paths.sort(key=name_key)
                all_paths[ell] = paths
                if not paths:
                    top = ell - 1
                    break
                col = {q: i for i, q in enumerate(reversed(paths))}
                gens = []
                for row in ideal_rows[ell - 1]:
                    for a in range(len(arrows)):
                        right = {q + (a,): c for q, c in row.items() if arrows[q[-1]][2] == arrows[a][1]}
                        if right:
                            gens.append(right)
                        left = {(a,) + q: c for q, c in row.items() if arrows[a][2] == arrows[q[0]][1]}
                        if left:
                            gens.append(left)
                for length, terms in self._rels:
                    if length == ell:
                        g: dict = {}
                        for c, q in terms:
                            g[q] = (g.get(q, 0) + c) % p
                        gens.append(g)
                if gens:
                    mat = np.zeros((len(gens), len(paths)), dtype=np.int64)
                    for i, g in enumerate(gens):
                        for q, c in g.items():
                            mat[i, col[q]] = c % p
                    rr, piv = fp.rref(mat, p)
                else:
                    rr, piv = np.zeros((0, len(paths)), dtype=np.int64), []
                rev = list(reversed(paths))
                pivset = set(piv)
                survivors = sorted((rev[j] for j in range(len(paths)) if j not in pivset), key=name_key)
                table = {}
                for q in survivors:
                    table[q] = {q: 1}
                for i, c in enumerate(piv):
                    vec = {}
                    for j in np.flatnonzero(rr[i]):
                        if j != c:
                            vec[rev[j]] = (-int(rr[i, j])) % p
                    table[rev[c]] = vec
                nf[ell] = table
                basis_by_len[ell] = survivors
                ideal_rows[ell] = [{rev[j]: int(rr[i, j]) for j in np.flatnonzero(rr[i])} for i in range(len(piv))]
                if not survivors:
                    top = ell - 1
                    break
        self.top_degree = top

        # basis: trivial paths, then by length
        basis: list[tuple] = []  # (src, tgt, arrow tuple)
        for v in range(self.n):
            basis.append((v, v, ()))
        for ell in range(1, top + 1):
            for q in basis_by_len[ell]:
                basis.append((arrows[q[0]][1], arrows[q[-1]][2], q))
        self.basis = basis
        self.dim = d = len(basis)
        self.src = np.array([b[0] for b in basis], dtype=np.int64)
        self.tgt = np.array([b[1] for b in basis], dtype=np.int64)
        self.length = np.array([len(b[2]) for b in basis], dtype=np.int64)
        pos = {b[2]: i for i, b in enumerate(basis) if b[2]}
        self.trivial = list(range(self.n))
        self.arrow_basis = {arrows[k][0]: pos[(k,)] for k in range(len(arrows))}

        mult = np.zeros((d, d, d), dtype=np.int64)
        for x, (sx, tx, qx) in enumerate(basis):
            for y, (sy, ty, qy) in enumerate(basis):
                if tx != sy:
                    continue
                if not qx:
                    mult[x, y, y] = 1
                    continue
                if not qy:
                    mult[x, y, x] = 1
                    continue
                ell = len(qx) + len(qy)
                if ell > top:
                    continue
                for q, c in nf[ell][qx + qy].items():
                    mult[x, y, pos[q]] = c % p
        self.mult = mult
        self._mult_flat = mult.reshape(d, d * d)
        self._nf = nf
        self._pos = pos

    # -- basic queries -------------------------------------------------
    def label(self, b: int) -> str:
        s, _, q = self.basis[b]
        if not q:
            return f"e{self.vertices[s]}"
        return "*".join(self.arrows[a][0] for a in q)

    def paths_between(self, i: int, j: int) -> np.ndarray:
        """Basis indices of e_i A e_j (paths from i to j)."""
        return np.flatnonzero((self.src == i) & (self.tgt == j))

    def path_vector(self, names) -> np.ndarray:
        """Residue of a path given by arrow names (or a vertex for a trivial path)."""
        v = np.zeros(self.dim, dtype=np.int64)
        if isinstance(names, (str, int)) and names not in self._aidx:
            v[self.vertex_index(names)] = 1
            return v
        if isinstance(names, str):
            names = (names,)
        q = tuple(self._aidx[a] for a in names)
        self._path_ends(tuple(names))
        if len(q) > self.top_degree:
            return v
        for path, c in self._nf[len(q)][q].items():
            v[self._pos[path]] = c % self.prime
        return v

    def element(self, terms) -> np.ndarray:
        """Linear combination [(coeff, path names), ...] as a coefficient vector."""
        v = np.zeros(self.dim, dtype=np.int64)
        for c, names in terms:
            v = (v + (int(c) % self.prime) * self.path_vector(names)) % self.prime
        return v

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return fp.matmul(self.left_matrix(x), np.asarray(y, dtype=np.int64), self.prime)

    def left_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> x*y (columns indexed by y's basis)."""
        t = fp.matmul(np.asarray(x, dtype=np.int64)[None, :], self._mult_flat, self.prime)
        return t.reshape(self.dim, self.dim).T

    def right_matrix(self, y: np.ndarray) -> np.ndarray:
        """Matrix of x -> x*y (columns indexed by x's basis)."""
        d = self.dim
        t = fp.matmul(np.asarray(y, dtype=np.int64)[None, :], self.mult.transpose(1, 0, 2).reshape(d, d * d), self.prime)
        return t.reshape(d, d).T

    def cartan(self) -> np.ndarray:
        c = np.zeros((self.n, self.n), dtype=np.int64)
        for s, t in zip(self.src, self.tgt):
            c[s, t] += 1
        return c

    def is_integral(self, bound: int = 64) -> bool:
        """Structure constants are small integers (so modules built from them reduce to other primes)."""
        if not hasattr(self, "_integral"):
            self._integral = bool(np.all(np.abs(fp.centered(self.mult, self.prime)) <= bound))
        return self._integral

    def check_associativity(self) -> bool:
        d, p = self.dim, self.prime
        # (xy)z vs x(yz) on all basis triples
        lhs = fp.matmul(self.mult.reshape(d * d, d), self._mult_flat, p).reshape(d, d, d, d)
        yz = self.mult.reshape(d * d, d)
        for x in range(d):
            rhs = fp.matmul(yz, self.mult[x], p).reshape(d, d, d)
            if not np.array_equal(lhs[x], rhs):
                return False
        return True

    def __repr__(self) -> str:
        return f"Algebra({self.spec.name or 'unnamed'}, n={self.n}, dim={self.dim}, p={self.prime})"


def build_algebra(spec: QuiverSpec, prime: int = fp.MERSENNE31) -> Algebra:
    return Algebra(spec, prime)


def projective(A: Algebra, label):
    """The right module (+) e_i A^{m_i}; label is a ProjectiveLabel or a vertex index."""
    from .repmod import proj_rep

    if isinstance(label, ProjectiveLabel):
        summ = label.summands()
    else:
        summ = (int(label),)
    return proj_rep(A, summ)


def injective(A: Algebra, i: int):
    from .repmod import inj_rep

    return inj_rep(A, (int(i),))


def quotient(A: Algebra, kill_vertices=(), kill_arrows=()) -> tuple[Algebra, list[int]]:
    """A modulo the ideal generated by the given idempotents and arrows.

    Returns the quotient and the list of surviving vertex indices, which is the
    induced map on classes (drop killed coordinates)."""
    kv = {A.vertex_index(v) for v in kill_vertices}
    ka = set(kill_arrows)
    spec = A.spec
    keep_arrows = []
    for name, s, t in spec.arrows:
        if name in ka or A.vertex_index(s) in kv or A.vertex_index(t) in kv:
            ka.add(name)
            continue
        keep_arrows.append((name, s, t))
    rels = []
    for rel in spec.relations:
        terms = tuple((c, path) for c, path in rel if not (set(path) & ka))
        if terms:
            rels.append(terms)
    keep = [i for i in range(A.n) if i not in kv]
    new = QuiverSpec(
        vertices=tuple(A.vertices[i] for i in keep),
        arrows=tuple(keep_arrows),
        relations=tuple(rels),
        max_path_length=spec.max_path_length,
        name=(spec.name + "/quot") if spec.name else "",
    )
    return Algebra(new, A.prime), keep


def quotient_by_vertices(A: Algebra, kill) -> Algebra:
    return quotient(A, kill_vertices=kill)[0]


def restrict_class(theta, keep: list[int]) -> tuple:
    return tuple(theta[i] for i in keep)
