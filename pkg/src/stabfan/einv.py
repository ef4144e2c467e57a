"""Presentation spaces Hom(theta), random sampling and E-invariants."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import fp
from .algebra import Algebra
from .kgrp import split_parts
from .repmod import ProjMap, cokernel, hom_dim, kernel_nu


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("STABFAN_THREADS", "1")))
    except ValueError:
        return 1


def pmap(fn, items):
    items = list(items)
    n = worker_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


class HomCoords:
    """Coordinates of Hom((+)_c P(dom_c), (+)_r P(cod_r)): entry (r, c) in e_{cod_r} A e_{dom_c}."""

    def __init__(self, A: Algebra, dom: tuple, cod: tuple):
        self.A = A
        self.dom, self.cod = tuple(dom), tuple(cod)
        self.blocks = {}
        start = 0
        for r, i in enumerate(self.cod):
            for c, j in enumerate(self.dom):
                bs = A.paths_between(i, j)
                self.blocks[r, c] = (start, bs)
                start += len(bs)
        self.dim = start

    def to_vec(self, entries: np.ndarray) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        for (r, c), (s, bs) in self.blocks.items():
            v[s:s + len(bs)] = entries[r, c, bs]
        return v

    def from_vec(self, v: np.ndarray) -> np.ndarray:
        ent = np.zeros((len(self.cod), len(self.dom), self.A.dim), dtype=np.int64)
        for (r, c), (s, bs) in self.blocks.items():
            ent[r, c, bs] = v[s:s + len(bs)]
        return ent

    def to_map(self, v: np.ndarray) -> ProjMap:
        return ProjMap(self.A, self.dom, self.cod, self.from_vec(v))


def _entry_mats(f: ProjMap, side: str) -> dict:
    A = f.algebra
    out = {}
    for r in range(len(f.cod)):
        for c in range(len(f.dom)):
            x = f.entries[r, c]
            if np.any(x):
                out[r, c] = A.left_matrix(x) if side == "L" else A.right_matrix(x)
    return out


def post_matrix(g: ProjMap, src: HomCoords) -> tuple[np.ndarray, HomCoords]:
    """Matrix of u -> g o u from Hom(X, Q1) = src to Hom(X, Q0)."""
    A = g.algebra
    assert src.cod == g.dom
    tgt = HomCoords(A, src.dom, g.cod)
    M = np.zeros((tgt.dim, src.dim), dtype=np.int64)
    Ls = _entry_mats(g, "L")
    for (r, k), L in Ls.items():
        for c in range(len(src.dom)):
            ts, zs = tgt.blocks[r, c]
            ss, bs = src.blocks[k, c]
            if len(zs) and len(bs):
                M[ts:ts + len(zs), ss:ss + len(bs)] = L[np.ix_(zs, bs)]
    return M, tgt


def pre_matrix(f: ProjMap, src: HomCoords) -> tuple[np.ndarray, HomCoords]:
    """Matrix of v -> v o f from Hom(P0, Y) = src to Hom(P1, Y)."""
    A = f.algebra
    assert src.dom == f.cod
    tgt = HomCoords(A, f.dom, src.cod)
    M = np.zeros((tgt.dim, src.dim), dtype=np.int64)
    Rs = _entry_mats(f, "R")
    for (k, c), R in Rs.items():
        for r in range(len(src.cod)):
            ts, zs = tgt.blocks[r, c]
            ss, bs = src.blocks[r, k]
            if len(zs) and len(bs):
                M[ts:ts + len(zs), ss:ss + len(bs)] = R[np.ix_(zs, bs)]
    return M, tgt


def e_matrix(f: ProjMap, g: ProjMap) -> tuple[np.ndarray, int]:
    """Matrix of (u, v) -> g u - v f into Hom(P1, Q0) and the target dimension."""
    A = f.algebra
    p = A.prime
    h11 = HomCoords(A, f.dom, g.dom)
    h00 = HomCoords(A, f.cod, g.cod)
    M1, t1 = post_matrix(g, h11)
    M0, t0 = pre_matrix(f, h00)
    return np.concatenate([M1, (-M0) % p], axis=1), t1.dim


def e_of_pair(f: ProjMap, g: ProjMap) -> int:
    """dim Hom_{K^b}(P_f, P_g[1])."""
    M, target = e_matrix(f, g)
    if target == 0:
        return 0
    return target - fp.rank(M, f.algebra.prime)


def e_serre(f: ProjMap, g: ProjMap) -> int:
    """The same number computed as dim Hom(C_g, K_{nu f})."""
    return hom_dim(cokernel(g), kernel_nu(f))


@dataclass
class SampledPresentation:
    map: ProjMap
    seed: int
    index: int
    prime: int


def rng_for(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) & 0xFFFFFFFF, int(index)])


def random_map(A: Algebra, dom: tuple, cod: tuple, rng: np.random.Generator, bound: int | None = None) -> ProjMap:
    """Uniform over F_p, or with coefficients in [-bound, bound] (small integral lifts)."""
    H = HomCoords(A, dom, cod)
    if bound is None:
        v = rng.integers(0, A.prime, size=H.dim, dtype=np.int64)
    else:
        v = rng.integers(-bound, bound + 1, size=H.dim, dtype=np.int64) % A.prime
    return H.to_map(v)


def sample_presentation(A: Algebra, theta, seed: int = 0, index: int = 0,
                        bound: int | None = None) -> SampledPresentation:
    P0, P1 = split_parts(theta)
    f = random_map(A, P1.summands(), P0.summands(), rng_for(seed, index), bound)
    return SampledPresentation(f, seed, index, A.prime)


@dataclass
class EEstimate:
    value: int
    certified_zero: bool
    samples: int
    witnesses: tuple | None = None
    prime: int = 0
    seed: int = 0
    values: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"value": self.value, "certified_zero": self.certified_zero, "samples": self.samples,
                "witnesses": list(self.witnesses) if self.witnesses else None, "prime": self.prime,
                "seed": self.seed, "status": "certified" if self.certified_zero else "upper bound, generic w.h.p."}


def e_generic(A: Algebra, eta, theta, samples: int = 5, seed: int = 0, stop_at_zero: bool = True) -> EEstimate:
    best = None
    wit = None
    vals = []
    for k in range(samples):
        f = sample_presentation(A, eta, seed, 2 * k).map
        g = sample_presentation(A, theta, seed, 2 * k + 1).map
        e = e_of_pair(f, g)
        vals.append(e)
        if best is None or e < best:
            best, wit = e, ((seed, 2 * k), (seed, 2 * k + 1))
        if best == 0 and stop_at_zero:
            break
    return EEstimate(best, best == 0, len(vals), wit, A.prime, seed, vals)


def is_presilting(f: ProjMap) -> bool:
    return e_of_pair(f, f) == 0


def is_rigid(A: Algebra, theta, samples: int = 5, seed: int = 0):
    """(True, f) with P_f presilting if one is found among the samples, else (False, None)."""
    for k in range(samples):
        f = sample_presentation(A, theta, seed, k).map
        if is_presilting(f):
            return True, f
    return False, None


def is_tame(A: Algebra, theta, samples: int = 5, seed: int = 0) -> tuple[bool, EEstimate]:
    est = e_generic(A, theta, theta, samples, seed)
    return est.certified_zero, est
