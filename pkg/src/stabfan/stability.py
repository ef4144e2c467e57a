"""Semistable torsion classes, walls, D-cones, HN filtrations and TF comparison.

Membership questions are answered from the list of submodules of a module.
Modules with dimension vector in {0,1}^n have a combinatorial submodule
lattice; other modules are enumerated over a small prime field.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import fp
from .algebra import Algebra
from .candecomp import canonical_decomposition
from .cones import ConeQ, qrank, smith_unimodular
from .einv import e_generic, e_of_pair, pmap, sample_presentation
from .errors import (EnumerationBudgetExceeded, InvalidModule, NotInTbar, NotPresilting,
                     NotSemistable, VerificationFailed)
from .kgrp import euler_pair, primitive, scale
from .repmod import (DEFAULT_BUDGET, ProjMap, Rep, A_integral_map, cokernel, hom_dim, hom_eval_matrix,
                     inj_rep, is_01, kernel_nu, proj_rep, quotient_rep, simple, sub_rep, submodule_reps)

KINDS = ("T", "Tbar", "F", "Fbar", "W")
CROSS_CHECK_PRIME = 3


def _fr(theta) -> list:
    return [Fraction(x) for x in theta]


def _pair(theta, d) -> Fraction:
    return sum((t * x for t, x in zip(theta, d)), Fraction(0))


def _sub(a, b) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# submodule data

def enumerate_subs(X: Rep, p_enum: int = 2, budget: int = DEFAULT_BUDGET) -> tuple[list, int | None]:
    """Submodules of X and the field they were enumerated over (None: field independent)."""
    try:
        subs = submodule_reps(X, p_enum, budget)
    except InvalidModule as exc:
        raise EnumerationBudgetExceeded(f"cannot enumerate submodules: {exc}") from exc
    return subs, subs[0].field


def factor_dims(X: Rep, p_enum: int = 2, budget: int = DEFAULT_BUDGET) -> list:
    """Dimension vectors of the nonzero factor modules of X."""
    subs, _ = enumerate_subs(X, p_enum, budget)
    top = X.dimv
    return sorted({_sub(top, s.dimv) for s in subs if s.dimv != top})


def sub_dims(X: Rep, p_enum: int = 2, budget: int = DEFAULT_BUDGET) -> list:
    subs, _ = enumerate_subs(X, p_enum, budget)
    return sorted({s.dimv for s in subs if any(s.dimv)})


def _contained(S, Y, q: int) -> bool:
    if S.rows.shape[0] == 0:
        return True
    return fp.rank(np.concatenate([Y.rows, S.rows], axis=0), q) == Y.rows.shape[0]


def subquotient(M: Rep, big, small) -> Rep:
    """big / small for submodules small <= big of M (Submodule objects)."""
    Yrows = big.per_vertex(M)
    Srows = small.per_vertex(M)
    Y = sub_rep(M, Yrows)
    coords = []
    for v in range(M.algebra.n):
        if Srows[v].shape[0] == 0:
            coords.append(np.zeros((0, Y.dims[v]), dtype=np.int64))
            continue
        x = fp.solve(Yrows[v].T, Srows[v].T, M.prime)
        if x is None:
            raise InvalidModule("subquotient: not contained")
        coords.append(x.T)
    return quotient_rep(Y, coords)[0]


# ---------------------------------------------------------------------------
# semistable membership

@dataclass
class MembershipVerdict:
    value: str  # "In", "Out", "Unknown"
    certificate: dict
    field_tag: int | None
    field_independent: bool = False

    def to_dict(self) -> dict:
        return {"value": self.value, "certificate": self.certificate,
                "field": self.field_tag, "field_independent": self.field_independent}


def _judge(theta, which: str, top: tuple, subs: list) -> tuple[str, dict]:
    th = _fr(theta)
    if which not in KINDS:
        raise ValueError(f"unknown class {which}")
    if which == "W" and _pair(th, top) != 0:
        return "Out", {"reason": "theta(X) != 0", "theta_X": str(_pair(th, top))}
    checks = []
    if which in ("T", "Tbar", "W"):
        strict = which == "T"
        for s in subs:
            if s.dimv == top:
                continue
            d = _sub(top, s.dimv)
            v = _pair(th, d)
            if v < 0 or (strict and v == 0):
                return "Out", {"violating_factor": list(d), "value": str(v)}
        checks.append("factors")
    if which in ("F", "Fbar", "W"):
        strict = which == "F"
        for s in subs:
            if not any(s.dimv):
                continue
            v = _pair(th, s.dimv)
            if v > 0 or (strict and v == 0):
                return "Out", {"violating_sub": list(s.dimv), "value": str(v)}
        checks.append("subs")
    return "In", {"checked": checks, "submodules": len(subs)}


def semistable_membership(X: Rep, theta, which: str = "Tbar", p_enum: int = 2,
                          cross_check: int | None = CROSS_CHECK_PRIME,
                          budget: int = DEFAULT_BUDGET) -> MembershipVerdict:
    if X.total == 0:
        return MembershipVerdict("In", {"reason": "zero module"}, None, True)
    try:
        subs, tag = enumerate_subs(X, p_enum, budget)
    except EnumerationBudgetExceeded as exc:
        return MembershipVerdict("Unknown", {"reason": str(exc)}, p_enum)
    value, cert = _judge(theta, which, X.dimv, subs)
    if tag is None:
        return MembershipVerdict(value, cert, None, True)
    if cross_check and cross_check != tag and X.integral:
        try:
            subs2, tag2 = enumerate_subs(X, cross_check, budget)
        except EnumerationBudgetExceeded:
            subs2 = None
        if subs2 is not None:
            value2, cert2 = _judge(theta, which, X.dimv, subs2)
            cert["cross_check"] = {"field": tag2, "value": value2}
            if value2 != value:
                return MembershipVerdict("Unknown", {"disagreement": {str(tag): cert, str(tag2): cert2}}, tag)
    return MembershipVerdict(value, cert, tag)


def morphism_membership(X: Rep, f: ProjMap, which: str = "Tbar") -> bool:
    """Rank test on Hom(f, X): surjective for Tbar, injective for Fbar, bijective for W."""
    M = hom_eval_matrix(f, X)
    rows, cols = M.shape
    r = fp.rank(M, X.prime) if M.size else 0
    surj = r == cols
    inj = r == rows
    if which == "Tbar":
        return surj
    if which == "Fbar":
        return inj
    if which == "W":
        return surj and inj
    raise ValueError(f"unknown class {which}")


# ---------------------------------------------------------------------------
# the monoid S_{X, theta}

@dataclass
class MonoidEntry:
    l: int
    status: str  # "Certified-In", "Certified-Out", "Sampled-Out"
    witness: dict | None
    samples: int

    def to_dict(self) -> dict:
        return {"l": self.l, "status": self.status, "witness": self.witness, "samples": self.samples}


def monoid_probe(X: Rep, theta, l_max: int = 3, samples: int = 100, seed: int = 0,
                 candidates: dict | None = None) -> dict:
    """For each l <= l_max, look for f in Hom(l theta) with Hom(f, X) surjective."""
    A = X.algebra
    tX = _pair(_fr(theta), X.dimv)
    candidates = candidates or {}

    def probe(l: int) -> MonoidEntry:
        if X.total == 0:
            return MonoidEntry(l, "Certified-In", {"reason": "zero module"}, 0)
        if l * tX < 0:
            return MonoidEntry(l, "Certified-Out", {"reason": "theta(X) < 0"}, 0)
        for k, f in enumerate(candidates.get(l, [])):
            if morphism_membership(X, f, "Tbar"):
                return MonoidEntry(l, "Certified-In", {"source": "candidate", "index": k, "map": f.to_dict()}, k + 1)
        lt = scale(l, theta)
        for k in range(samples):
            f = sample_presentation(A, lt, seed, k).map
            if morphism_membership(X, f, "Tbar"):
                return MonoidEntry(l, "Certified-In", {"source": "sample", "seed": seed, "index": k,
                                                       "map": f.to_dict()}, k + 1)
        return MonoidEntry(l, "Sampled-Out", None, samples)

    return {e.l: e for e in pmap(probe, range(1, l_max + 1))}


# ---------------------------------------------------------------------------
# walls and cones

def wall_of(X: Rep, p_enum: int = 2, budget: int = DEFAULT_BUDGET) -> ConeQ:
    n = X.algebra.n
    if X.total == 0:
        return ConeQ.from_generators([tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
                                     + [tuple(-1 if i == j else 0 for i in range(n)) for j in range(n)], n)
    subs, tag = enumerate_subs(X, p_enum, budget)
    facs = sorted({_sub(X.dimv, s.dimv) for s in subs if s.dimv != X.dimv})
    cone = ConeQ.from_inequalities(facs, n, equations=[X.dimv])
    cone.meta = {"module_dimv": list(X.dimv), "field": tag}
    return cone


def wall_interior_contains(X: Rep, theta, p_enum: int = 2) -> bool:
    """theta in the relative interior of the wall: theta(X) = 0 and theta(d) > 0
    for every factor dimension d off the line through dimv X."""
    th = _fr(theta)
    if _pair(th, X.dimv) != 0:
        return False
    for d in factor_dims(X, p_enum):
        if qrank([d, X.dimv]) == 2 and _pair(th, d) <= 0:
            return False
        if qrank([d, X.dimv]) < 2 and _pair(th, d) < 0:
            return False
    return True


def cone_of_presilting(U: list, openness: str = "closed") -> ConeQ:
    """Cone on the classes of a presilting family, after checking E vanishes on all pairs."""
    if not U:
        raise NotPresilting("empty family")
    A = U[0].algebra
    for i, u in enumerate(U):
        if e_of_pair(u, u):
            raise NotPresilting(f"summand {i} has E(u, u) != 0")
        for j in range(i + 1, len(U)):
            if e_of_pair(u, U[j]) or e_of_pair(U[j], u):
                raise NotPresilting(f"summands {i} and {j} are not compatible")
    classes = sorted({u.klass() for u in U})
    if not smith_unimodular(classes):
        raise VerificationFailed("presilting classes do not extend to a Z-basis")
    cone = ConeQ.from_generators(classes, A.n)
    cone.meta = {"open": openness != "closed", "classes": [list(c) for c in classes], "z_basis": True}
    return cone


# ---------------------------------------------------------------------------
# D-cones

_ALGEBRAS: dict = {}


def algebra_over(A: Algebra, q: int) -> Algebra | None:
    """The same quiver algebra over F_q, if its path basis agrees with A's."""
    key = (id(A), q)
    if key not in _ALGEBRAS:
        Aq = Algebra(A.spec, q)
        _ALGEBRAS[key] = (A, Aq if list(Aq.basis) == list(A.basis) else None)
    return _ALGEBRAS[key][1]


def reduce_map(f: ProjMap, q: int) -> ProjMap:
    if not A_integral_map(f):
        raise EnumerationBudgetExceeded("map has no small integral lift")
    Aq = algebra_over(f.algebra, q)
    if Aq is None:
        raise EnumerationBudgetExceeded(f"algebra basis changes over F_{q}")
    return ProjMap(Aq, f.dom, f.cod, fp.centered(f.entries, f.algebra.prime) % q)


def _enumerable(build, f: ProjMap, p_enum: int) -> Rep:
    M = build(f)
    if is_01(M) or f.algebra.prime ** M.total <= DEFAULT_BUDGET:
        return M
    R = build(reduce_map(f, p_enum))
    if R.dimv != M.dimv:
        raise EnumerationBudgetExceeded(f"reduction mod {p_enum} changes the dimension vector")
    return R


def d_cone(f: ProjMap, p_enum: int = 2) -> ConeQ:
    """{theta : C_f in Tbar_theta and K_{nu f} in Fbar_theta}."""
    n = f.algebra.n
    C = _enumerable(cokernel, f, p_enum)
    K = _enumerable(kernel_nu, f, p_enum)
    ineq = [d for d in factor_dims(C, p_enum)]
    ineq += [tuple(-x for x in d) for d in sub_dims(K, p_enum)]
    if not ineq:
        cone = ConeQ.from_generators([tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
                                     + [tuple(-1 if i == j else 0 for i in range(n)) for j in range(n)], n)
    else:
        cone = ConeQ.from_inequalities(sorted(set(ineq)), n)
    cone.meta = {"class": list(f.klass()), "cokernel_dimv": list(C.dimv), "kernel_nu_dimv": list(K.dimv)}
    return cone


def d_eta(A: Algebra, eta, samples: int = 5, seed: int = 0, e_tame_certified: bool = False,
          p_enum: int = 2, small_tries: int = 20) -> ConeQ:
    """D-cone of a generic presentation.

    Uniform samples rarely have enumerable cokernels, so small-coefficient maps are
    tried as well; one is accepted only if E(f, f) matches the generic minimum."""
    generic = []
    for k in range(samples):
        f = sample_presentation(A, eta, seed, k).map
        generic.append((e_of_pair(f, f), k, f))
    e_min = min(e for e, _, _ in generic)
    pool = [(k, f, "uniform") for e, k, f in generic if e == e_min]
    if A.is_integral():
        for k in range(small_tries):
            f = sample_presentation(A, eta, seed, samples + k, bound=2).map
            if e_of_pair(f, f) == e_min:
                pool.append((samples + k, f, "small"))
    best = None
    for k, f, kind in pool:
        try:
            c = d_cone(f, p_enum)
        except EnumerationBudgetExceeded:
            continue
        if best is None or c.dim > best[0].dim:
            best = (c, k, kind)
    if best is None:
        raise EnumerationBudgetExceeded("no generic sample had enumerable cokernel and kernel")
    cone, k, kind = best
    cone.meta.update({"sample_index": k, "seed": seed, "sampler": kind, "e_self": e_min,
                      "certified": bool(e_tame_certified)})
    return cone


# ---------------------------------------------------------------------------
# Harder-Narasimhan filtrations along theta(t) = (1-t) theta - t rho

def theta_t(theta, t) -> tuple:
    t = Fraction(t)
    return tuple((1 - t) * x - t for x in _fr(theta))


@dataclass
class HNFiltration:
    theta: tuple
    layers: list  # (t, subquotient Rep)
    chain: list  # Submodule objects X = X_0 > X_1 > ... > X_l = 0
    field_tag: int | None = None
    module_dimv: tuple = ()

    def verify(self, p_enum: int = 2) -> bool:
        ts = [t for t, _ in self.layers]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            return False
        if any(not (0 <= t < 1) for t in ts):
            return False
        total = [0] * len(self.module_dimv)
        for t, Q in self.layers:
            if Q.total == 0:
                return False
            v = semistable_membership(Q, theta_t(self.theta, t), "W", p_enum, cross_check=None)
            if v.value != "In":
                return False
            total = [a + b for a, b in zip(total, Q.dimv)]
        return tuple(total) == tuple(self.module_dimv)

    def to_dict(self) -> dict:
        return {"theta": [str(x) for x in self.theta], "field": self.field_tag,
                "layers": [{"t": str(t), "dimv": list(Q.dimv)} for t, Q in self.layers],
                "chain": [list(S.dimv) for S in self.chain]}


def hn_filtration(X: Rep, theta, p_enum: int = 2, budget: int = DEFAULT_BUDGET) -> HNFiltration:
    th = _fr(theta)
    theta = tuple(theta)
    if X.total == 0:
        return HNFiltration(theta, [], [], None, X.dimv)
    subs, tag = enumerate_subs(X, p_enum, budget)
    M = subs[0].module
    q = M.prime
    Y = subs[-1]
    for S in subs[:-1]:
        if _pair(th, _sub(Y.dimv, S.dimv)) < 0:
            raise NotInTbar(f"factor of dimension {_sub(Y.dimv, S.dimv)} has theta < 0")
    chain = [Y]
    layers = []
    while any(Y.dimv):
        inside = [S for S in subs if S is not Y and sum(S.dimv) < sum(Y.dimv) and _contained(S, Y, q)]
        roots = []
        for S in inside:
            d = _sub(Y.dimv, S.dimv)
            a = _pair(th, d)
            roots.append(a / (a + sum(d)))
        t1 = min(roots)
        X1 = next(S for S, r in zip(inside, roots) if r == t1)
        layers.append((t1, subquotient(M, Y, X1)))
        chain.append(X1)
        Y = X1
    return HNFiltration(theta, layers, chain, tag, X.dimv)


# ---------------------------------------------------------------------------
# semistable composition factors

def semistable_composition_factors(X: Rep, theta, p_enum: int = 2, budget: int = DEFAULT_BUDGET) -> list:
    """theta-stable factors of a theta-semistable module, smallest first."""
    v = semistable_membership(X, theta, "W", p_enum, cross_check=None, budget=budget)
    if v.value != "In":
        raise NotSemistable(f"module is not theta-semistable ({v.value})")
    return _stable_factors(X, _fr(theta), p_enum, budget)


def _stable_factors(X: Rep, th: list, p_enum: int, budget: int) -> list:
    if X.total == 0:
        return []
    subs, _ = enumerate_subs(X, p_enum, budget)
    M = subs[0].module
    for S in subs[1:-1]:
        if _pair(th, S.dimv) == 0:
            return [sub_rep(M, S.per_vertex(M))] + _stable_factors(subquotient(M, subs[-1], S), th,
                                                                  p_enum, budget)
    return [M]


def semistable_span(X: Rep, theta, p_enum: int = 2) -> int:
    """Rank of the span of the stable factors' dimension vectors (a lower bound for dim W_{theta,X})."""
    facs = semistable_composition_factors(X, theta, p_enum)
    return qrank([Q.dimv for Q in facs]) if facs else 0


# ---------------------------------------------------------------------------
# TF comparison

@dataclass
class TFVerdict:
    value: str  # "Equivalent", "Distinct", "Unknown"
    certificate: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"value": self.value, "certificate": self.certificate}


def _ind_keys(A: Algebra, theta, samples: int, seed: int) -> tuple[set, list]:
    dec = canonical_decomposition(A, theta, samples, seed)
    keys = set()
    for c in dec.distinct():
        ci = tuple(int(x) for x in c) if all(Fraction(x).denominator == 1 for x in c) else None
        tame = ci is not None and e_generic(A, ci, ci, samples, seed).certified_zero
        keys.add(("ray", primitive(c)[0]) if tame else ("class", tuple(c)))
    return keys, dec.distinct()


def _segment_candidates(A: Algebra, theta, eta, seed: int, points: int):
    n = A.n
    for i in range(n):
        yield f"S({i})", lambda i=i: simple(A, i)
    for i in range(n):
        yield f"P({i})", lambda i=i: proj_rep(A, (i,))
    for i in range(n):
        yield f"I({i})", lambda i=i: inj_rep(A, (i,))
    for k in range(points + 1):
        pt = tuple((points - k) * a + k * b for a, b in zip(theta, eta))
        if not any(pt):
            continue
        f = sample_presentation(A, pt, seed, k).map
        yield f"C_f at {list(pt)}", lambda f=f: cokernel(f)
        yield f"K_nu f at {list(pt)}", lambda f=f: kernel_nu(f)


def tf_compare(A: Algebra, theta, eta, samples: int = 5, seed: int = 0, l_max: int = 2,
               points: int = 4, p_enum: int = 2) -> TFVerdict:
    n = A.n
    pt, _ = primitive(theta)
    pe, _ = primitive(eta)
    if pt == pe:
        return TFVerdict("Equivalent", {"reason": "positive multiples"})
    if any(pt) and any(pe):
        kt, dt = _ind_keys(A, pt, samples, seed)
        ke, de = _ind_keys(A, pe, samples, seed)
        if kt == ke:
            return TFVerdict("Equivalent", {"reason": "equal ind", "ind": [list(c) for c in dt]})
        for l in range(1, l_max + 1):
            for a, b, name in ((pt, pe, "theta"), (pe, pt, "eta")):
                dec = canonical_decomposition(A, scale(l, a), samples, seed)
                cone = ConeQ.from_generators(dec.distinct(), n)
                if cone.relint_contains(b):
                    return TFVerdict("Equivalent", {"reason": f"inside cone of ind({l} {name})",
                                                    "generators": [list(c) for c in dec.distinct()]})
    tried = 0
    for label, build in _segment_candidates(A, pt, pe, seed, points):
        try:
            S = build()
            if S.total == 0 or hom_dim(S, S) != 1:
                continue
            wall = wall_of(S, p_enum)
        except EnumerationBudgetExceeded:
            continue
        tried += 1
        hit = wall.segment_interval(pt, pe)
        if hit is not None and hit[0] == hit[1]:
            return TFVerdict("Distinct", {"brick": label, "dimv": list(S.dimv), "t": str(hit[0]),
                                          "wall": wall.to_dict()})
    return TFVerdict("Unknown", {"bricks_tried": tried})


def nakayama_identity(X: Rep, f: ProjMap) -> bool:
    """theta(X) = dim Hom(C_f, X) - dim Hom(X, K_{nu f}) for theta = [f]."""
    lhs = euler_pair(f.klass(), X.dimv)
    return lhs == hom_dim(cokernel(f), X) - hom_dim(X, kernel_nu(f))
