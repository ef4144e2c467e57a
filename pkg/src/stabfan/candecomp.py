"""Canonical decompositions: split a generic presentation into indecomposable complexes.

A chain endomorphism (u1, u0) of P_f is stored as a pair of square matrices
acting on the underlying vector spaces of P1 and P0 (column convention), which
makes composition a plain matrix product.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor, gf_gcdex, gf_mul, gf_pow, gf_quo

from . import fp
from .algebra import Algebra
from .einv import HomCoords, e_generic, e_of_pair, post_matrix, pre_matrix, sample_presentation
from .errors import PrimeTooSmall, SplitFailed
from .kgrp import is_integral, kclass, scale
from .repmod import ProjMap, proj_rep

MAX_SPLIT_TRIES = 32


# ---------------------------------------------------------------------------
# endomorphisms of a projective as matrices

class EndRep:
    """Faithful matrix realisation of End((+)_r P(i_r))."""

    def __init__(self, A: Algebra, summands: tuple):
        self.A = A
        self.summands = tuple(summands)
        P = proj_rep(A, self.summands)
        self.coords = P.coords
        self.flat = [rb for v in range(A.n) for rb in P.coords.at[v]]
        self.pos = {rb: k for k, rb in enumerate(self.flat)}
        self.D = len(self.flat)
        self.H = HomCoords(A, self.summands, self.summands)
        self.gen_cols = [self.pos[(r, i)] for r, i in enumerate(self.summands)]
        self._cols = []
        self._rows = []
        for c in range(len(self.summands)):
            ks = [k for k, (cc, b) in enumerate(self.flat) if cc == c]
            bs = [self.flat[k][1] for k in ks]
            self._cols.append((ks, bs))
            self._rows.append((bs, ks))

    def to_matrix(self, vec: np.ndarray) -> np.ndarray:
        """Matrix of the endomorphism with HomCoords vector vec (column convention)."""
        A = self.A
        U = np.zeros((self.D, self.D), dtype=np.int64)
        ent = self.H.from_vec(vec)
        for r in range(len(self.summands)):
            rows_r = self._rows[r]
            for c in range(len(self.summands)):
                x = ent[r, c]
                if not np.any(x):
                    continue
                ks, bs = self._cols[c]
                zs, kr = rows_r
                U[np.ix_(kr, ks)] = A.left_matrix(x)[np.ix_(zs, bs)]
        return U

    def to_entries(self, U: np.ndarray) -> np.ndarray:
        """Read the algebra-element matrix off the images of the generators e_{i_r}."""
        A = self.A
        m = len(self.summands)
        ent = np.zeros((m, m, A.dim), dtype=np.int64)
        for c in range(m):
            col = U[:, self.gen_cols[c]]
            for k in np.flatnonzero(col):
                r, z = self.flat[k]
                ent[r, c, z] = col[k]
        return ent


# ---------------------------------------------------------------------------

@dataclass
class HomotopyEnd:
    f: ProjMap
    ambient: np.ndarray  # rows: chain maps in (End P1 coords, End P0 coords)
    nullhomotopic: np.ndarray  # rows: spanning set of the nullhomotopic subspace (reduced)
    split_at: int  # number of End P1 coordinates
    dim_ambient: int
    dim_null: int
    E1: EndRep = None
    E0: EndRep = None

    @property
    def dim(self) -> int:
        return self.dim_ambient - self.dim_null

    def matrices(self, vec: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return self.E1.to_matrix(vec[:self.split_at]), self.E0.to_matrix(vec[self.split_at:])

    def coords_of(self, X: tuple) -> np.ndarray:
        return np.concatenate([self.E1.H.to_vec(self.E1.to_entries(X[0])),
                               self.E0.H.to_vec(self.E0.to_entries(X[1]))])

    def quotient(self) -> np.ndarray:
        """Structure constants of End in K^b(proj A) on a basis complementary to the homotopies."""
        p = self.f.algebra.prime
        if self.dim_null:
            Nr, npiv = fp.rref(self.nullhomotopic, p)
            Zr = fp.reduce_mod_rows(self.ambient, Nr, npiv, p)
        else:
            Nr, Zr = self.nullhomotopic, self.ambient
        Q = fp.row_basis(Zr, p)
        k = Q.shape[0]
        basis = np.concatenate([Q, Nr], axis=0).T
        mats = [self.matrices(q) for q in Q]
        out = np.zeros((k, k, k), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                prod = (fp.matmul(mats[i][0], mats[j][0], p), fp.matmul(mats[i][1], mats[j][1], p))
                x = fp.solve(basis, self.coords_of(prod), p)
                out[i, j] = x[:k]
        return out


def homotopy_end(f: ProjMap) -> HomotopyEnd:
    A = f.algebra
    p = A.prime
    E1, E0 = EndRep(A, f.dom), EndRep(A, f.cod)
    M1, _ = post_matrix(f, E1.H)  # u1 -> f u1
    M0, _ = pre_matrix(f, E0.H)  # u0 -> u0 f
    M = np.concatenate([M1, (-M0) % p], axis=1)
    n1 = E1.H.dim
    if M.shape[0]:
        Z = fp.nullspace(M, p)
    else:
        Z = np.eye(M.shape[1], dtype=np.int64)
    Hh = HomCoords(A, f.cod, f.dom)
    if Hh.dim:
        a, _ = pre_matrix(f, Hh)  # h -> h f in End P1
        b, _ = post_matrix(f, Hh)  # h -> f h in End P0
        N = fp.row_basis(np.concatenate([a, b], axis=0).T, p)
    else:
        N = np.zeros((0, M.shape[1]), dtype=np.int64)
    return HomotopyEnd(f, Z, N, n1, Z.shape[0], N.shape[0], E1, E0)


# ---------------------------------------------------------------------------
# polynomial helpers over F_p (coefficient lists, highest degree first)

def _poly_eval(poly: list, X: tuple, p: int) -> tuple:
    """Evaluate poly at the matrix pair X by Horner."""
    U1, U0 = X
    R1 = np.zeros_like(U1)
    R0 = np.zeros_like(U0)
    I1 = np.eye(U1.shape[0], dtype=np.int64)
    I0 = np.eye(U0.shape[0], dtype=np.int64)
    for c in poly:
        c = int(c) % p
        R1 = (fp.matmul(R1, U1, p) + c * I1) % p
        R0 = (fp.matmul(R0, U0, p) + c * I0) % p
    return R1, R0


def minpoly_pair(X: tuple, p: int) -> list:
    """Minimal polynomial (monic, highest first) of a block-diagonal matrix pair."""
    U1, U0 = X
    P1 = np.eye(U1.shape[0], dtype=np.int64)
    P0 = np.eye(U0.shape[0], dtype=np.int64)
    rows, pivs, combos = [], [], []
    D = U1.shape[0] + U0.shape[0]
    for k in range(D + 2):
        v = np.concatenate([P1.ravel(), P0.ravel()]) % p
        c = np.zeros(D + 2, dtype=np.int64)
        c[k] = 1
        for row, pv, cb in zip(rows, pivs, combos):
            t = int(v[pv])
            if t:
                v = (v - t * row) % p
                c = (c - t * cb) % p
        nz = np.flatnonzero(v)
        if nz.size == 0:
            coeffs = [int(x) for x in c[:k + 1]]  # low to high, leading 1
            return list(reversed(coeffs))
        pv = int(nz[0])
        inv = fp.inv_scalar(v[pv], p)
        rows.append(v * inv % p)
        combos.append(c * inv % p)
        pivs.append(pv)
        P1 = fp.matmul(P1, U1, p)
        P0 = fp.matmul(P0, U0, p)
    raise RuntimeError("minimal polynomial search did not terminate")


# ---------------------------------------------------------------------------

@dataclass
class Summand:
    map: ProjMap
    galois_degree: int = 1
    evidence: dict = field(default_factory=dict)

    def klass(self) -> tuple:
        c = self.map.klass()
        if self.galois_degree == 1:
            return c
        return kclass(Fraction(x, self.galois_degree) for x in c)


def _radical_info(H: HomotopyEnd, mats: list) -> tuple[np.ndarray, int]:
    """Radical of the chain-endomorphism algebra via the trace form in its faithful representation."""
    p = H.f.algebra.prime
    D = H.E1.D + H.E0.D
    if p <= max(H.dim_ambient, D):
        raise PrimeTooSmall(f"prime {p} must exceed {max(H.dim_ambient, D)}")
    F = np.stack([np.concatenate([a.ravel(), b.ravel()]) for a, b in mats])
    Ft = np.stack([np.concatenate([a.T.ravel(), b.T.ravel()]) for a, b in mats])
    G = fp.matmul(F, Ft.T, p)
    rad = fp.nullspace(G, p)  # coefficient vectors over the ambient basis
    return rad, H.dim_ambient - rad.shape[0]


def _top_columns(ent: np.ndarray, summands: tuple, p: int) -> list:
    """Columns of an idempotent whose reductions modulo the radical are independent."""
    chosen = []
    for v in sorted(set(summands)):
        idx = [r for r, i in enumerate(summands) if i == v]
        top = np.array([[ent[r, c, v] for c in idx] for r in idx], dtype=np.int64)
        cur = np.zeros((len(idx), 0), dtype=np.int64)
        for k, c in enumerate(idx):
            cand = np.concatenate([cur, top[:, k:k + 1]], axis=1)
            if fp.rank(cand, p) > cur.shape[1]:
                cur = cand
                chosen.append(c)
    return chosen


def _piece(f: ProjMap, H: HomotopyEnd, e: tuple) -> ProjMap:
    A = f.algebra
    p = A.prime
    e1 = H.E1.to_entries(e[0]) if len(f.dom) else np.zeros((0, 0, A.dim), dtype=np.int64)
    e0 = H.E0.to_entries(e[1]) if len(f.cod) else np.zeros((0, 0, A.dim), dtype=np.int64)
    S1 = _top_columns(e1, f.dom, p)
    S0 = _top_columns(e0, f.cod, p)
    dom = tuple(f.dom[c] for c in S1)
    cod = tuple(f.cod[r] for r in S0)
    iota0 = ProjMap(A, cod, f.cod, e0[:, S0] if len(S0) else None)
    iota1 = ProjMap(A, dom, f.dom, e1[:, S1] if len(S1) else None)
    Hx = HomCoords(A, dom, cod)
    if Hx.dim == 0:
        return ProjMap(A, dom, cod)
    M, tgt = post_matrix(iota0, Hx)
    rhs = HomCoords(A, dom, f.cod).to_vec(f.compose(iota1).entries)
    x = fp.solve(M, rhs, p)
    if x is None:
        raise SplitFailed("idempotent image is not a subcomplex")
    return Hx.to_map(x)


def split_indecomposables(f: ProjMap, seed: int = 0, _depth: int = 0) -> list:
    """Krull-Schmidt splitting of the complex P_f into Summand objects."""
    A = f.algebra
    p = A.prime
    if not f.dom or not f.cod:
        out = []
        for i in f.cod:
            out.append(Summand(ProjMap(A, (), (i,)), 1, {"kind": "projective", "dim_end": 1, "dim_top": 1, "local": True}))
        for j in f.dom:
            out.append(Summand(ProjMap(A, (j,), ()), 1, {"kind": "shifted projective", "dim_end": 1, "dim_top": 1, "local": True}))
        return out
    H = homotopy_end(f)
    mats = [H.matrices(z) for z in H.ambient]
    rad, top = _radical_info(H, mats)
    ev = {"kind": "complex", "dim_end": H.dim_ambient, "dim_null": H.dim_null,
          "dim_rad": int(rad.shape[0]), "dim_top": int(top)}
    if top == 1:
        ev["local"] = True
        return [Summand(f, 1, ev)]
    rng = np.random.default_rng([int(seed) & 0xFFFFFFFF, 7919, _depth])
    for attempt in range(MAX_SPLIT_TRIES):
        coef = rng.integers(0, p, size=len(mats))
        X1 = np.zeros_like(mats[0][0])
        X0 = np.zeros_like(mats[0][1])
        for c, (a, b) in zip(coef, mats):
            X1 = (X1 + int(c) * a) % p
            X0 = (X0 + int(c) * b) % p
        m = minpoly_pair((X1, X0), p)
        _, facs = gf_factor([int(c) for c in m], p, ZZ)
        if len(facs) >= 2:
            g, k = facs[0]
            ge = gf_pow([int(c) for c in g], k, p, ZZ)
            h = gf_quo([int(c) for c in m], ge, p, ZZ)
            s, t, one = gf_gcdex(ge, h, p, ZZ)
            proj = gf_mul(s, ge, p, ZZ)  # 0 on the g-part, 1 on the h-part
            e = _poly_eval(proj, (X1, X0), p)
            one_e = ((np.eye(X1.shape[0], dtype=np.int64) - e[0]) % p, (np.eye(X0.shape[0], dtype=np.int64) - e[1]) % p)
            out = []
            for idem in (e, one_e):
                piece = _piece(f, H, idem)
                out.extend(split_indecomposables(piece, seed + attempt + 1, _depth + 1))
            return out
        g, k = facs[0]
        if len(g) - 1 == top:
            ev["local"] = False
            ev["galois_degree"] = int(top)
            return [Summand(f, int(top), ev)]
    raise SplitFailed(f"no splitting idempotent found after {MAX_SPLIT_TRIES} tries")


# ---------------------------------------------------------------------------

@dataclass
class CanonicalDecomposition:
    theta: tuple
    summands: list  # Summand objects (a Galois-fused summand stands for several classes)
    certificates: list = field(default_factory=list)
    seed: int = 0
    prime: int = 0
    chosen_index: int = 0
    e_self: int = 0

    def classes(self) -> list:
        out = []
        for s in self.summands:
            out.extend([s.klass()] * s.galois_degree)
        return sorted(out)

    def distinct(self) -> list:
        return sorted(set(self.classes()))

    def certified(self) -> bool:
        return all(c["ok"] for c in self.certificates)

    def to_dict(self) -> dict:
        return {
            "theta": list(self.theta),
            "summands": [[x if isinstance(x, int) else str(x) for x in c] for c in self.classes()],
            "prime": self.prime,
            "seed": self.seed,
            "sample_index": self.chosen_index,
            "e_self": self.e_self,
            "witnesses": [
                {"map": s.map.to_dict(), "galois_degree": s.galois_degree, "evidence": s.evidence}
                for s in self.summands
            ],
            "certificates": self.certificates,
        }


def pair_certificates(A: Algebra, summands: list, seed: int = 0) -> list:
    certs = []
    for i in range(len(summands)):
        si = summands[i]
        if si.galois_degree > 1:
            cls = tuple(int(x) for x in si.klass()) if is_integral(si.klass()) else None
            est = e_generic(A, cls, cls, samples=5, seed=seed) if cls is not None else None
            certs.append({"pair": [i, i], "kind": "conjugate copies",
                          "e": est.value if est else None, "ok": bool(est and est.certified_zero)})
        for j in range(i + 1, len(summands)):
            sj = summands[j]
            a = e_of_pair(si.map, sj.map)
            b = e_of_pair(sj.map, si.map)
            certs.append({"pair": [i, j], "e_ij": a, "e_ji": b, "ok": a == 0 and b == 0})
    return certs


def canonical_decomposition(A: Algebra, theta, samples: int = 5, seed: int = 0) -> CanonicalDecomposition:
    theta = tuple(int(x) for x in theta)
    if not any(theta):
        return CanonicalDecomposition(theta, [], [], seed, A.prime)
    cands = []
    for k in range(samples):
        f = sample_presentation(A, theta, seed, k).map
        cands.append((e_of_pair(f, f), k, f))
        if not f.dom or not f.cod:
            break
    cands.sort(key=lambda t: (t[0], t[1]))
    best = cands[0][0]
    chosen = None
    for e, k, f in cands:
        if e != best:
            break
        pieces = split_indecomposables(f, seed * 1000 + k)
        if chosen is None:
            chosen = (k, pieces)
        if all(s.galois_degree == 1 for s in pieces):
            chosen = (k, pieces)
            break
    k, pieces = chosen
    pieces.sort(key=lambda s: (s.klass(), s.galois_degree))
    dec = CanonicalDecomposition(theta, pieces, [], seed, A.prime, k, best)
    dec.certificates = pair_certificates(A, pieces, seed)
    total = [Fraction(0)] * A.n
    for c in dec.classes():
        for i, x in enumerate(c):
            total[i] += Fraction(x)
    assert tuple(total) == tuple(Fraction(x) for x in theta)
    return dec


def ind_N(A: Algebra, theta, l_max: int, samples: int = 5, seed: int = 0) -> dict:
    return {l: canonical_decomposition(A, scale(l, theta), samples, seed) for l in range(1, l_max + 1)}


@dataclass
class RayProbe:
    verdict: str  # "fails", "holds", "vacuous", "not indecomposable"
    first_failure: int | None
    table: dict

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "first_failure": self.first_failure,
                "table": {str(k): v for k, v in self.table.items()}}


def ray_condition_probe(A: Algebra, theta, l_max: int, samples: int = 5, seed: int = 0) -> RayProbe:
    base = canonical_decomposition(A, theta, samples, seed)
    table = {1: [list(c) for c in base.classes()]}
    if len(base.classes()) != 1:
        return RayProbe("not indecomposable", None, table)
    if base.e_self == 0:
        return RayProbe("vacuous (rigid)", None, table)
    est = e_generic(A, theta, theta, samples, seed)
    if est.certified_zero:
        return RayProbe("vacuous (tame)", None, table)
    for l in range(2, l_max + 1):
        dec = canonical_decomposition(A, scale(l, theta), samples, seed)
        table[l] = [list(c) for c in dec.classes()]
        if len(dec.classes()) != 1:
            return RayProbe("fails", l, table)
    return RayProbe("holds", None, table)
