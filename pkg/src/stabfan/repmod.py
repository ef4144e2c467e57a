"""Right modules given by vertex spaces and arrow matrices.

Row-vector convention: an arrow a: s -> t carries a matrix of shape
(dim_s, dim_t) and acts by x -> x @ M_a, so a path [a, b] acts by M_a @ M_b.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from . import fp
from .algebra import Algebra
from .errors import EnumerationBudgetExceeded, InvalidModule

DEFAULT_BUDGET = 2**16  # vectors of the module over the enumeration field
MAX_SUBMODULES = 20000


class Rep:
    def __init__(self, algebra: Algebra, dims, mats: dict, prime: int | None = None,
                 integral: bool = False, check: bool = True):
        self.algebra = algebra
        self.prime = int(prime or algebra.prime)
        self.dims = tuple(int(x) for x in dims)
        self.integral = integral
        p = self.prime
        self.mats = {}
        for name, s, t in algebra.arrows:
            m = mats.get(name)
            if m is None:
                m = np.zeros((self.dims[s], self.dims[t]), dtype=np.int64)
            m = fp.red(np.asarray(m, dtype=np.int64).reshape(self.dims[s], self.dims[t]), p)
            self.mats[name] = m
        self.offsets = np.concatenate([[0], np.cumsum(self.dims)]).astype(int)
        self._act = {}
        if check:
            self.check_relations()

    @property
    def dimv(self) -> tuple:
        return self.dims

    @property
    def total(self) -> int:
        return int(sum(self.dims))

    def is_zero(self) -> bool:
        return self.total == 0

    def path_matrix(self, names) -> np.ndarray:
        A = self.algebra
        s = A.arrows[A._aidx[names[0]]][1]
        m = np.eye(self.dims[s], dtype=np.int64)
        for a in names:
            m = fp.matmul(m, self.mats[a], self.prime)
        return m

    def check_relations(self) -> None:
        A = self.algebra
        for rel in A.spec.relations:
            acc = None
            for c, path in rel:
                term = (int(c) % self.prime) * self.path_matrix(path) % self.prime
                acc = term if acc is None else (acc + term) % self.prime
            if acc is not None and np.any(acc):
                raise InvalidModule("relation does not vanish on module")

    def act(self, b: int) -> np.ndarray:
        """Action matrix of basis element b from its source space to its target space."""
        if b not in self._act:
            A = self.algebra
            s, t, q = A.basis[b]
            if not q:
                m = np.eye(self.dims[s], dtype=np.int64)
            else:
                m = self.path_matrix([A.arrows[a][0] for a in q])
            self._act[b] = m
        return self._act[b]

    def element_action(self, x: np.ndarray, i: int, j: int) -> np.ndarray:
        """Action of x in e_i A e_j as a (dim_i, dim_j) matrix."""
        A = self.algebra
        out = np.zeros((self.dims[i], self.dims[j]), dtype=np.int64)
        for b in A.paths_between(i, j):
            c = int(x[b]) % self.prime
            if c:
                out = (out + c * self.act(b)) % self.prime
        return out

    def big_arrow(self, name: str) -> np.ndarray:
        A = self.algebra
        _, s, t = A.arrows[A._aidx[name]]
        T = np.zeros((self.total, self.total), dtype=np.int64)
        o = self.offsets
        T[o[s]:o[s + 1], o[t]:o[t + 1]] = self.mats[name]
        return T

    def over(self, q: int) -> "Rep":
        """Reduce an integrally defined module to characteristic q."""
        if q == self.prime:
            return self
        if not self.integral:
            raise InvalidModule("module is not integrally defined; cannot change the field")
        mats = {k: fp.centered(v, self.prime) % q for k, v in self.mats.items()}
        return Rep(self.algebra, self.dims, mats, prime=q, integral=True)

    def to_dict(self) -> dict:
        return {"dims": list(self.dims),
                "arrows": {k: fp.centered(v, self.prime).tolist() for k, v in self.mats.items()}}

    def __repr__(self) -> str:
        return f"Rep(dimv={self.dims}, p={self.prime})"


def load_module(path, A: Algebra) -> Rep:
    data = json.loads(Path(path).read_text())
    return module_from_dict(data, A)


def module_from_dict(data: dict, A: Algebra) -> Rep:
    mats = {}
    known = {name for name, _, _ in A.arrows}
    for name, m in data.get("arrows", {}).items():
        if name not in known:
            raise InvalidModule(f"unknown arrow {name!r}")
        mats[name] = np.array(m, dtype=np.int64) if len(m) else None
    if "dims" not in data or len(data["dims"]) != A.n:
        raise InvalidModule(f"module needs a dims list of length {A.n}")
    dims = data["dims"]
    for name, s, t in A.arrows:
        if mats.get(name) is None:
            mats[name] = np.zeros((dims[s], dims[t]), dtype=np.int64)
        elif mats[name].size == 0:
            mats[name] = mats[name].reshape(dims[s], dims[t])
    return Rep(A, dims, {k: v % A.prime for k, v in mats.items()}, integral=True)


def zero_rep(A: Algebra, prime: int | None = None) -> Rep:
    return Rep(A, [0] * A.n, {}, prime=prime, integral=True)


def simple(A: Algebra, i: int) -> Rep:
    dims = [0] * A.n
    dims[i] = 1
    return Rep(A, dims, {}, integral=True)


def direct_sum(*mods: Rep) -> Rep:
    A = mods[0].algebra
    dims = [sum(m.dims[v] for m in mods) for v in range(A.n)]
    mats = {}
    for name, s, t in A.arrows:
        big = np.zeros((dims[s], dims[t]), dtype=np.int64)
        r = c = 0
        for m in mods:
            big[r:r + m.dims[s], c:c + m.dims[t]] = m.mats[name]
            r += m.dims[s]
            c += m.dims[t]
        mats[name] = big
    return Rep(A, dims, mats, prime=mods[0].prime, integral=all(m.integral for m in mods), check=False)


# ---------------------------------------------------------------------------
# homomorphisms

@dataclass
class ModHom:
    src: Rep
    tgt: Rep
    maps: list  # per vertex, shape (src.dims[v], tgt.dims[v])


def hom_space(M: Rep, N: Rep) -> tuple[int, list]:
    """Basis of Hom_A(M, N) as lists of per-vertex matrices."""
    A = M.algebra
    p = M.prime
    n = A.n
    sizes = [M.dims[v] * N.dims[v] for v in range(n)]
    off = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    nvar = int(off[-1])
    if nvar == 0:
        return 0, []
    blocks = []
    for name, s, t in A.arrows:
        rows = M.dims[s] * N.dims[t]
        if rows == 0:
            continue
        eq = np.zeros((rows, nvar), dtype=np.int64)
        if sizes[t]:
            eq[:, off[t]:off[t + 1]] = np.kron(M.mats[name], np.eye(N.dims[t], dtype=np.int64))
        if sizes[s]:
            eq[:, off[s]:off[s + 1]] = (eq[:, off[s]:off[s + 1]]
                                        - np.kron(np.eye(M.dims[s], dtype=np.int64), N.mats[name].T)) % p
        blocks.append(eq % p)
    if blocks:
        ns = fp.nullspace(np.concatenate(blocks, axis=0), p)
    else:
        ns = np.eye(nvar, dtype=np.int64)
    basis = []
    for vec in ns:
        basis.append([vec[off[v]:off[v + 1]].reshape(M.dims[v], N.dims[v]) for v in range(n)])
    return len(basis), basis


def hom_dim(M: Rep, N: Rep) -> int:
    return hom_space(M, N)[0]


def is_brick(M: Rep) -> bool:
    return hom_dim(M, M) == 1


def find_isomorphism(M: Rep, N: Rep, seed: int = 0):
    """A random combination of Hom(M, N) that is invertible at every vertex, or None."""
    if M.dims != N.dims:
        return None
    dim, basis = hom_space(M, N)
    if M.total == 0:
        return []
    if dim == 0:
        return None
    rng = np.random.default_rng(seed)
    p = M.prime
    for _ in range(8):
        c = rng.integers(0, min(p, 2**31 - 1), size=dim)
        maps = []
        ok = True
        for v in range(M.algebra.n):
            m = np.zeros((M.dims[v], N.dims[v]), dtype=np.int64)
            for k in range(dim):
                m = (m + int(c[k]) * basis[k][v]) % p
            if fp.rank(m, p) != M.dims[v]:
                ok = False
                break
            maps.append(m)
        if ok:
            return maps
    return None


def sub_rep(M: Rep, rows: list) -> Rep:
    """Submodule spanned by the given per-vertex row bases (assumed closed)."""
    A = M.algebra
    p = M.prime
    dims = [r.shape[0] for r in rows]
    mats = {}
    for name, s, t in A.arrows:
        if dims[s] == 0 or dims[t] == 0:
            mats[name] = np.zeros((dims[s], dims[t]), dtype=np.int64)
            continue
        img = fp.matmul(rows[s], M.mats[name], p)
        x = fp.solve(rows[t].T, img.T, p)
        if x is None:
            raise InvalidModule("subspace is not a submodule")
        mats[name] = x.T
    return Rep(A, dims, mats, prime=p, integral=False, check=False)


def quotient_rep(M: Rep, rows: list) -> tuple[Rep, list]:
    """Quotient M / S for a submodule S given by per-vertex row spans.

    Returns the quotient and the projection matrices (dim M_v x dim Q_v)."""
    A = M.algebra
    p = M.prime
    ech = []
    proj = []
    dims = []
    for v in range(A.n):
        m = M.dims[v]
        r = rows[v]
        if r.shape[0]:
            rr, piv = fp.rref(r, p)
        else:
            rr, piv = np.zeros((0, m), dtype=np.int64), []
        free = [j for j in range(m) if j not in set(piv)]
        red = fp.reduce_mod_rows(np.eye(m, dtype=np.int64), rr, piv, p) if m else np.zeros((0, 0), dtype=np.int64)
        proj.append(red[:, free] if m else np.zeros((0, 0), dtype=np.int64))
        ech.append((rr, piv, free))
        dims.append(len(free))
    mats = {}
    for name, s, t in A.arrows:
        free_s = ech[s][2]
        mats[name] = fp.matmul(M.mats[name][free_s, :], proj[t], p) if free_s and dims[t] else \
            np.zeros((dims[s], dims[t]), dtype=np.int64)
    return Rep(A, dims, mats, prime=p, integral=False, check=False), proj


def kernel(h: ModHom) -> tuple[Rep, list]:
    p = h.src.prime
    rows = [fp.left_nullspace(h.maps[v], p) if h.src.dims[v] else np.zeros((0, 0), dtype=np.int64)
            for v in range(h.src.algebra.n)]
    rows = [r.reshape(r.shape[0], h.src.dims[v]) for v, r in enumerate(rows)]
    return sub_rep(h.src, rows), rows


def image_rows(h: ModHom) -> list:
    p = h.src.prime
    out = []
    for v in range(h.src.algebra.n):
        m = h.maps[v]
        if m.shape[0] == 0 or m.shape[1] == 0:
            out.append(np.zeros((0, h.tgt.dims[v]), dtype=np.int64))
        else:
            out.append(fp.row_basis(m, p))
    return out


def cokernel_of_hom(h: ModHom) -> tuple[Rep, list]:
    return quotient_rep(h.tgt, image_rows(h))


def radical_rows(M: Rep) -> list:
    A = M.algebra
    out = []
    for v in range(A.n):
        parts = [M.mats[name] for name, s, t in A.arrows if t == v and M.dims[s]]
        if parts and M.dims[v]:
            out.append(fp.row_basis(np.concatenate(parts, axis=0), M.prime))
        else:
            out.append(np.zeros((0, M.dims[v]), dtype=np.int64))
    return out


def top_generators(M: Rep) -> list:
    """Per vertex, rows of M_v whose classes form a basis of the top at v."""
    rad = radical_rows(M)
    out = []
    for v in range(M.algebra.n):
        out.append(fp.complement_rows(rad[v], M.dims[v], M.prime) if M.dims[v] else
                   np.zeros((0, 0), dtype=np.int64))
    return out


# ---------------------------------------------------------------------------
# projectives, injectives and maps between projectives

class ProjCoords:
    """Basis of (+)_r e_{i_r} A: pairs (r, b) with src(b) = i_r, grouped by target."""

    def __init__(self, A: Algebra, summands: tuple, dual: bool = False):
        self.summands = tuple(summands)
        self.at = [[] for _ in range(A.n)]
        for r, i in enumerate(self.summands):
            if dual:
                idx = np.flatnonzero(A.tgt == i)
                for b in idx:
                    self.at[A.src[b]].append((r, int(b)))
            else:
                idx = np.flatnonzero(A.src == i)
                for b in idx:
                    self.at[A.tgt[b]].append((r, int(b)))
        self.index = [{rb: k for k, rb in enumerate(lst)} for lst in self.at]
        self.dims = tuple(len(x) for x in self.at)


def proj_rep(A: Algebra, summands: tuple) -> Rep:
    C = ProjCoords(A, summands)
    mats = {}
    for name, s, t in A.arrows:
        a = A.arrow_basis[name]
        m = np.zeros((C.dims[s], C.dims[t]), dtype=np.int64)
        for k, (r, b) in enumerate(C.at[s]):
            prod = A.mult[b, a]
            for z in np.flatnonzero(prod):
                m[k, C.index[t][(r, int(z))]] = prod[z]
        mats[name] = m
    R = Rep(A, C.dims, mats, integral=A.is_integral(), check=False)
    R.coords = C
    return R


def inj_rep(A: Algebra, summands: tuple) -> Rep:
    """(+)_c D(A e_{j_c}); dual basis element of path z sits at src(z)."""
    C = ProjCoords(A, summands, dual=True)
    mats = {}
    for name, v, w in A.arrows:
        a = A.arrow_basis[name]
        m = np.zeros((C.dims[v], C.dims[w]), dtype=np.int64)
        for k, (c, z) in enumerate(C.at[v]):
            for l, (c2, y) in enumerate(C.at[w]):
                if c2 == c:
                    m[k, l] = A.mult[a, y, z]
        mats[name] = m
    R = Rep(A, C.dims, mats, integral=A.is_integral(), check=False)
    R.coords = C
    return R


@dataclass
class ProjMap:
    """f: P1 -> P0 as a matrix of algebra elements (rows: P0 summands, columns: P1 summands)."""

    algebra: Algebra
    dom: tuple
    cod: tuple
    entries: np.ndarray = field(default=None)

    def __post_init__(self):
        A = self.algebra
        self.dom = tuple(int(x) for x in self.dom)
        self.cod = tuple(int(x) for x in self.cod)
        if self.entries is None:
            self.entries = np.zeros((len(self.cod), len(self.dom), A.dim), dtype=np.int64)
        self.entries = fp.red(np.asarray(self.entries, dtype=np.int64).reshape(len(self.cod), len(self.dom), A.dim),
                              A.prime)
        for r, i in enumerate(self.cod):
            for c, j in enumerate(self.dom):
                bad = (A.src != i) | (A.tgt != j)
                if np.any(self.entries[r, c][bad]):
                    raise InvalidModule(f"entry ({r},{c}) is not in e_{i} A e_{j}")

    def klass(self) -> tuple:
        n = self.algebra.n
        out = [0] * n
        for i in self.cod:
            out[i] += 1
        for j in self.dom:
            out[j] -= 1
        return tuple(out)

    def compose(self, g: "ProjMap") -> "ProjMap":
        """self o g."""
        A = self.algebra
        assert self.dom == g.cod
        out = np.zeros((len(self.cod), len(g.dom), A.dim), dtype=np.int64)
        for r in range(len(self.cod)):
            for k in range(len(self.dom)):
                x = self.entries[r, k]
                if not np.any(x):
                    continue
                L = A.left_matrix(x)
                out[r] = (out[r] + fp.matmul(g.entries[k], L.T, A.prime)) % A.prime
        return ProjMap(A, g.dom, self.cod, out)

    def is_zero(self) -> bool:
        return not np.any(self.entries)

    def to_dict(self) -> dict:
        A = self.algebra
        ent = []
        for r in range(len(self.cod)):
            row = []
            for c in range(len(self.dom)):
                x = self.entries[r, c]
                row.append([[int(fp.centered(x[b], A.prime)), A.label(b)] for b in np.flatnonzero(x)])
            ent.append(row)
        return {"domain": list(self.dom), "codomain": list(self.cod), "entries": ent}


def projmap_from_dict(A: Algebra, d: dict) -> ProjMap:
    dom, cod = tuple(d["domain"]), tuple(d["codomain"])
    labels = {A.label(b): b for b in range(A.dim)}
    ent = np.zeros((len(cod), len(dom), A.dim), dtype=np.int64)
    for r, row in enumerate(d["entries"]):
        for c, terms in enumerate(row):
            for coef, lab in terms:
                ent[r, c, labels[lab]] = int(coef) % A.prime
    return ProjMap(A, dom, cod, ent)


def identity_map(A: Algebra, summands: tuple) -> ProjMap:
    ent = np.zeros((len(summands), len(summands), A.dim), dtype=np.int64)
    for r, i in enumerate(summands):
        ent[r, r, i] = 1
    return ProjMap(A, summands, summands, ent)


def direct_sum_maps(f: ProjMap, g: ProjMap) -> ProjMap:
    """f (+) g with summands re-sorted into vertex order."""
    A = f.algebra
    dom = f.dom + g.dom
    cod = f.cod + g.cod
    ent = np.zeros((len(cod), len(dom), A.dim), dtype=np.int64)
    ent[:len(f.cod), :len(f.dom)] = f.entries
    ent[len(f.cod):, len(f.dom):] = g.entries
    rp = sorted(range(len(cod)), key=lambda k: (cod[k], k))
    cp = sorted(range(len(dom)), key=lambda k: (dom[k], k))
    return ProjMap(A, tuple(dom[k] for k in cp), tuple(cod[k] for k in rp), ent[rp][:, cp])


def projmap_hom(f: ProjMap) -> ModHom:
    """f as a module map between the explicit projective representations."""
    A = f.algebra
    P1, P0 = proj_rep(A, f.dom), proj_rep(A, f.cod)
    C1, C0 = P1.coords, P0.coords
    lefts = {}
    for r in range(len(f.cod)):
        for c in range(len(f.dom)):
            if np.any(f.entries[r, c]):
                lefts[r, c] = A.left_matrix(f.entries[r, c])
    maps = []
    for v in range(A.n):
        m = np.zeros((C1.dims[v], C0.dims[v]), dtype=np.int64)
        for k, (c, b) in enumerate(C1.at[v]):
            for l, (r, z) in enumerate(C0.at[v]):
                L = lefts.get((r, c))
                if L is not None:
                    m[k, l] = L[z, b]
        maps.append(m)
    return ModHom(P1, P0, maps)


def cokernel(f: ProjMap) -> Rep:
    h = projmap_hom(f)
    C, proj = cokernel_of_hom(h)
    C.projection = proj
    return C


def nu_hom(f: ProjMap) -> ModHom:
    """Nakayama image of f: (+) I(j_c) -> (+) I(i_r)."""
    A = f.algebra
    I1, I0 = inj_rep(A, f.dom), inj_rep(A, f.cod)
    C1, C0 = I1.coords, I0.coords
    rights = {}
    for r in range(len(f.cod)):
        for c in range(len(f.dom)):
            if np.any(f.entries[r, c]):
                rights[r, c] = A.right_matrix(f.entries[r, c])
    maps = []
    for v in range(A.n):
        m = np.zeros((C1.dims[v], C0.dims[v]), dtype=np.int64)
        for k, (c, z) in enumerate(C1.at[v]):
            for l, (r, y) in enumerate(C0.at[v]):
                R = rights.get((r, c))
                if R is not None:
                    m[k, l] = R[z, y]
        maps.append(m)
    return ModHom(I1, I0, maps)


def kernel_nu(f: ProjMap) -> Rep:
    K, incl = kernel(nu_hom(f))
    K.inclusion = incl
    return K


def A_integral_map(f: ProjMap, bound: int = 64) -> bool:
    A = f.algebra
    return A.is_integral() and bool(np.all(np.abs(fp.centered(f.entries, A.prime)) <= bound))


def min_proj_presentation(M: Rep) -> ProjMap:
    A = M.algebra
    p = M.prime
    gens = top_generators(M)
    cod = []
    gvec = []
    for v in range(A.n):
        for g in gens[v]:
            cod.append(v)
            gvec.append(g)
    cod = tuple(cod)
    if not cod:
        return ProjMap(A, (), ())
    P0 = proj_rep(A, cod)
    C0 = P0.coords
    maps = []
    for w in range(A.n):
        m = np.zeros((C0.dims[w], M.dims[w]), dtype=np.int64)
        for k, (r, b) in enumerate(C0.at[w]):
            m[k] = fp.matmul(gvec[r][None, :], M.act(b), p)[0]
        maps.append(m)
    K, krows = kernel(ModHom(P0, M, maps))
    kg = top_generators(K)
    dom = []
    cols = []
    for w in range(A.n):
        for g in kg[w]:
            vec = fp.matmul(g[None, :], krows[w], p)[0]
            dom.append(w)
            cols.append((w, vec))
    ent = np.zeros((len(cod), len(dom), A.dim), dtype=np.int64)
    for c, (w, vec) in enumerate(cols):
        for k in np.flatnonzero(vec):
            r, b = C0.at[w][k]
            ent[r, c, b] = vec[k]
    return ProjMap(A, tuple(dom), cod, ent)


def hom_eval_matrix(f: ProjMap, X: Rep) -> np.ndarray:
    """Matrix of Hom(f, X): Hom(P0, X) -> Hom(P1, X), rows (r, X_{i_r}), cols (c, X_{j_c})."""
    A = f.algebra
    ro = np.concatenate([[0], np.cumsum([X.dims[i] for i in f.cod])]).astype(int)
    co = np.concatenate([[0], np.cumsum([X.dims[j] for j in f.dom])]).astype(int)
    out = np.zeros((ro[-1], co[-1]), dtype=np.int64)
    for r, i in enumerate(f.cod):
        for c, j in enumerate(f.dom):
            out[ro[r]:ro[r + 1], co[c]:co[c + 1]] = X.element_action(f.entries[r, c], i, j)
    return out


# ---------------------------------------------------------------------------
# submodule enumeration

@dataclass
class Submodule:
    rows: np.ndarray  # basis in total coordinates of the ambient module
    dimv: tuple
    key: bytes = b""

    def per_vertex(self, M: Rep) -> list:
        out = []
        o = M.offsets
        for v in range(M.algebra.n):
            blk = self.rows[:, o[v]:o[v + 1]]
            keep = np.flatnonzero(np.any(blk, axis=1))
            out.append(blk[keep] if keep.size else np.zeros((0, M.dims[v]), dtype=np.int64))
        return out


def _dimv_of(rows: np.ndarray, M: Rep) -> tuple:
    o = M.offsets
    out = []
    for v in range(M.algebra.n):
        blk = rows[:, o[v]:o[v + 1]] if rows.shape[0] else np.zeros((0, M.dims[v]), dtype=np.int64)
        out.append(int(np.count_nonzero(np.any(blk, axis=1))) if blk.size else 0)
    return tuple(out)


def _closure(vecs: np.ndarray, arrows: list, q: int) -> np.ndarray:
    basis = np.zeros((0, vecs.shape[1]), dtype=np.int64)
    queue = [v for v in vecs]
    rr, piv = basis, []
    while queue:
        v = queue.pop()
        rv = fp.reduce_mod_rows(v, rr, piv, q) if piv else fp.red(v, q)
        if not np.any(rv):
            continue
        rr, piv = fp.rref(np.concatenate([rr, rv[None, :]], axis=0), q)
        for T in arrows:
            w = fp.matmul(v[None, :], T, q)[0]
            if np.any(w):
                queue.append(w)
    return rr


def is_01(M: Rep) -> bool:
    return all(d in (0, 1) for d in M.dims)


def submodule_reps(M: Rep, prime: int = 2, budget: int = DEFAULT_BUDGET) -> list:
    """All submodules with their dimension vectors.

    For dimv in {0,1}^n the answer is combinatorial and independent of the field.
    Otherwise M is reduced to F_prime (it must be integrally defined) unless it
    already lives over a field small enough to enumerate."""
    A = M.algebra
    n = A.n
    if is_01(M):
        supp = [v for v in range(n) if M.dims[v]]
        edges = [(s, t) for name, s, t in A.arrows if M.dims[s] and M.dims[t] and np.any(M.mats[name])]
        out = []
        for mask in range(1 << len(supp)):
            U = {supp[k] for k in range(len(supp)) if mask >> k & 1}
            if any(s in U and t not in U for s, t in edges):
                continue
            rows = np.zeros((len(U), M.total), dtype=np.int64)
            for k, v in enumerate(sorted(U)):
                rows[k, M.offsets[v]] = 1
            dv = tuple(1 if v in U else 0 for v in range(n))
            sub = Submodule(rows, dv, rows.tobytes())
            sub.field = None
            sub.module = M
            out.append(sub)
        out.sort(key=lambda s: (sum(s.dimv), s.dimv))
        return out
    if M.prime ** M.total <= budget:
        Mq = M
    elif prime ** M.total <= budget:
        Mq = M.over(prime)
    else:
        raise EnumerationBudgetExceeded(f"{prime}^{M.total} exceeds the enumeration budget")
    q = Mq.prime
    arrows = [Mq.big_arrow(name) for name, _, _ in A.arrows]
    T = Mq.total
    cyclic = {}
    for v in range(n):
        d = Mq.dims[v]
        if d == 0:
            continue
        for coeffs in product(range(q), repeat=d):
            nz = [c for c in coeffs if c]
            if not nz or nz[0] != 1:
                continue
            x = np.zeros(T, dtype=np.int64)
            x[Mq.offsets[v]:Mq.offsets[v + 1]] = coeffs
            C = _closure(x[None, :], arrows, q)
            cyclic.setdefault(C.tobytes(), C)
    zero = np.zeros((0, T), dtype=np.int64)
    subs = {zero.tobytes(): zero}
    for C in cyclic.values():
        for key, S in list(subs.items()):
            R = fp.rref(np.concatenate([S, C], axis=0), q)[0] if S.shape[0] else C
            subs.setdefault(R.tobytes(), R)
            if len(subs) > MAX_SUBMODULES:
                raise EnumerationBudgetExceeded(f"more than {MAX_SUBMODULES} submodules")
    out = [Submodule(S, _dimv_of(S, Mq), key) for key, S in subs.items()]
    out.sort(key=lambda s: (sum(s.dimv), s.dimv, s.key))
    for s in out:
        s.field = q
        s.module = Mq
    return out


def quotient_by_sub(S: Submodule) -> tuple[Rep, list]:
    return quotient_rep(S.module, S.per_vertex(S.module))


def sub_of(S: Submodule) -> Rep:
    return sub_rep(S.module, S.per_vertex(S.module))
