"""Acceptance gate: one pass/fail line per criterion, with its time limit.

Run directly (``python tests/test_acceptance.py``) for the report, or through pytest.
"""
from __future__ import annotations

import itertools
import json
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from stabfan import fp
from stabfan.algebra import quotient
from stabfan.atilde import band_module, build_atilde, decompose_H, enumerate_bands, locate
from stabfan.candecomp import canonical_decomposition, ray_condition_probe
from stabfan.cli import main as cli_main
from stabfan.cli import verify_document
from stabfan.cones import ConeQ, qrank
from stabfan.einv import e_generic, e_of_pair, e_serre, random_map, rng_for, sample_presentation
from stabfan.errors import EnumerationBudgetExceeded
from stabfan.kgrp import sign_coherent
from stabfan.library import named, skew_module, skew_witnesses
from stabfan.repmod import Rep, direct_sum, hom_eval_matrix, is_brick, simple
from stabfan.stability import (cone_of_presilting, d_eta, hn_filtration, monoid_probe, nakayama_identity,
                               semistable_membership, wall_of)

LIMITS = {1: 5.0, 2: 30.0, 3: 300.0, 4: 1.0, 5: 120.0, 6: 600.0}
SEEDS = range(5)


class Check:
    """Collects named sub-results for one criterion."""

    def __init__(self):
        self.failures = []
        self.notes = []

    def expect(self, cond, what: str):
        if not cond:
            self.failures.append(what)

    def note(self, text: str):
        self.notes.append(text)


def _timed(k, body) -> tuple[bool, str, float]:
    chk = Check()
    t0 = time.perf_counter()
    body(chk)
    dt = time.perf_counter() - t0
    ok = not chk.failures and dt < LIMITS[k]
    detail = "; ".join(chk.notes)
    if chk.failures:
        detail += " | failed: " + "; ".join(chk.failures[:5])
    if dt >= LIMITS[k]:
        detail += " | over time limit"
    return ok, detail, dt


def _report(k, res):
    ok, detail, dt = res
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {detail} ({dt:.2f}s vs limit {LIMITS[k]:.0f}s)")
    return ok


# ---------------------------------------------------------------------------

def _a3_modules(A):
    def interval(lo, hi):
        dims = [1 if lo <= v <= hi else 0 for v in range(3)]
        mats = {name: np.array([[1]]) for name, s, t in A.arrows if dims[s] and dims[t]}
        return Rep(A, dims, mats, integral=True)

    inds = [interval(i, j) for i in range(3) for j in range(i, 3)]
    return inds + [direct_sum(inds[0], inds[3]), direct_sum(inds[1], inds[5]), direct_sum(inds[2], inds[2]),
                   direct_sum(inds[0], inds[0])]


def criterion_1(chk: Check):
    A = named("kronecker3")
    p = A.prime
    X = skew_module(A)
    rng = np.random.default_rng(2024)
    singular = 0
    for _ in range(100):
        coeffs = rng.integers(0, p, size=3)
        M = sum(int(c) * X.mats[name] for c, (name, _, _) in zip(coeffs, A.arrows)) % p
        singular += fp.rank(M, p) < 3
    chk.expect(singular == 100, f"{singular}/100 singular")
    chk.note(f"{singular}/100 random combinations singular")
    wits = skew_witnesses(A)
    for l, size in ((2, 6), (3, 9)):
        E = hom_eval_matrix(wits[l][0], X)
        ok = E.shape == (size, size) and fp.rank(E, p) == size
        chk.expect(ok, f"z{l} not invertible")
        chk.note(f"z{l} {E.shape[0]}x{E.shape[1]} invertible={ok}")
    res = monoid_probe(X, (1, -1), 3, samples=100, seed=0, candidates=wits)
    st = {l: e.status for l, e in res.items()}
    chk.expect(st == {1: "Sampled-Out", 2: "Certified-In", 3: "Certified-In"} and res[1].samples >= 100,
               f"monoid {st}")
    chk.note(f"monoid {st}")


def criterion_2(chk: Check):
    B = named("counter_ray_b3")
    eta = (1, 1, -1)
    P0 = (1, 0, 0)
    for l in (1, 2, 3):
        vals = set()
        certs = set()
        for seed in range(20):
            est = e_generic(B, (0, l, -l), P0, samples=5, seed=seed)
            vals.add(est.value)
            certs.add(est.certified_zero)
        if l == 1:
            chk.expect(min(vals) > 0 and certs == {False}, f"l=1 values {vals}")
        else:
            chk.expect(vals == {0} and certs == {True}, f"l={l} values {vals}")
        chk.note(f"E(l={l}) over 20 seeds: {sorted(vals)}")
    d1 = canonical_decomposition(B, eta)
    d2 = canonical_decomposition(B, (2, 2, -2))
    chk.expect(d1.classes() == [eta], f"ind eta = {d1.classes()}")
    chk.expect(d2.classes() == [(0, 2, -2), (1, 0, 0), (1, 0, 0)], f"ind 2eta = {d2.classes()}")
    chk.expect(d2.certified(), "2eta pair certificates")
    probe = ray_condition_probe(B, eta, 3)
    chk.expect(probe.verdict == "fails" and probe.first_failure == 2, f"ray probe {probe.verdict}")
    c1 = ConeQ.from_generators(d1.distinct(), 3)
    c2 = ConeQ.from_generators(d2.distinct(), 3)
    strict = c1.subset_of(c2) and not c2.subset_of(c1)
    chk.expect(strict, "cone inclusion not strict")
    chk.note(f"ind 2eta={[list(c) for c in d2.classes()]}, ray fails at {probe.first_failure}, strict={strict}")


def criterion_3(chk: Check):
    A = named("a3_linear")
    thetas = [t for t in itertools.product(range(-3, 4), repeat=3) if any(t)]
    chk.expect(len(thetas) == 342, "grid size")
    ind = {}
    disagree = incoherent = dependent = too_many = 0
    for th in thetas:
        runs = [canonical_decomposition(A, th, samples=1, seed=s) for s in SEEDS]
        cls = [d.classes() for d in runs]
        if any(c != cls[0] for c in cls):
            disagree += 1
        distinct = runs[0].distinct()
        ind[th] = distinct
        if not sign_coherent(distinct):
            incoherent += 1
        if qrank([list(c) for c in distinct], 3) != len(distinct):
            dependent += 1
        if len(distinct) > 3:
            too_many += 1
    chk.expect(disagree == 0, f"{disagree} seed disagreements")
    chk.expect(incoherent == 0, f"{incoherent} not sign-coherent")
    chk.expect(dependent == 0, f"{dependent} dependent")
    chk.expect(too_many == 0, f"{too_many} with more than 3 summands")
    rng = np.random.default_rng(7)
    picks = rng.choice(len(thetas), size=50, replace=False)
    mismatch = 0
    for i in picks:
        th = thetas[int(i)]
        parts = ind[th]
        coef = rng.integers(1, 5, size=len(parts))
        eta = tuple(int(sum(int(c) * v[j] for c, v in zip(coef, parts))) for j in range(3))
        cone = ConeQ.from_generators(parts, 3)
        if not cone.relint_contains(eta) or canonical_decomposition(A, eta, samples=1, seed=0).distinct() != parts:
            mismatch += 1
    chk.expect(mismatch == 0, f"{mismatch}/50 cone samples changed ind")
    chk.note(f"342 theta x 5 seeds: disagreements={disagree}, incoherent={incoherent}, dependent={dependent}, "
             f">3 summands={too_many}; 50 cone samples mismatches={mismatch}")


def criterion_4(chk: Check):
    K = named("kronecker")
    th = (2, -1)
    dec = canonical_decomposition(K, th)
    chk.expect(dec.classes() == [th] and dec.e_self == 0, f"Kronecker ind {dec.classes()} e={dec.e_self}")
    Q, keep = quotient(K, kill_arrows=("a2",))
    qd = canonical_decomposition(Q, tuple(th[i] for i in keep))
    chk.expect(qd.classes() == [(1, -1), (1, 0)], f"quotient ind {qd.classes()}")
    chk.note(f"Kronecker ind={[list(c) for c in dec.classes()]} rigid={dec.e_self == 0}; "
             f"quotient ind={[list(c) for c in qd.classes()]}")


def _eta(i, j):
    v = [0, 0, 0]
    v[i - 1] += 1
    v[j - 1] -= 1
    return tuple(v)


def criterion_5(chk: Check):
    A = build_atilde(3)
    bands = enumerate_bands(A, 12)
    bricks = [b for b in bands if is_brick(band_module(A, b, 2))]
    dims = {band_module(A, b, 2).dimv for b in bricks}
    chk.expect(bricks and dims == {(1, 1, 1)}, f"brick band dims {dims}")
    chk.note(f"{len(bands)} bands, {len(bricks)} bricks, dims {sorted(dims)}")
    H = decompose_H(3)
    by_dim = sorted(c.dim for _, c in H)
    chk.expect(by_dim == [0] + [1] * 6 + [2] * 6, f"H cone dims {by_dim}")
    rays = {c.rays()[0] for _, c in H if c.dim == 1}
    chk.expect(rays == {_eta(i, j) for i in range(1, 4) for j in range(1, 4) if i != j}, "rays")
    sectors = [c for _, c in H if c.dim == 2]
    rng = np.random.default_rng(5)
    bad = 0
    for _ in range(10000):
        a, b = (Fraction(int(x), 97) for x in rng.integers(-400, 401, size=2))
        theta = (a, b, -a - b)
        if len(locate(H, theta)) != 1 or not any(s.contains(theta) for s in sectors):
            bad += 1
    chk.expect(bad == 0, f"{bad} points not tiled")
    chk.note(f"H: 1 point, {len(rays)} rays, {len(sectors)} sectors, tiling failures {bad}/10000")
    gray = ConeQ.from_generators([_eta(1, 3), _eta(3, 2)], 3)
    D = d_eta(A, _eta(1, 2))
    chk.expect(D == gray, f"D(eta12) = {D.generators}")
    chk.note(f"D(eta12) generators {D.rays()}")
    for i, j in itertools.permutations(range(1, 4), 2):
        e = _eta(i, j)
        dec = canonical_decomposition(A, e)
        wall_dim = d_eta(A, e).dim
        chk.expect(dec.classes() == [e] and dec.e_self > 0 and wall_dim == 2,
                   f"eta{i}{j}: ind {dec.classes()} e={dec.e_self} wall dim {wall_dim}")
    walls = {wall_of(band_module(A, b, 1)).dim for b in bricks}
    chk.expect(walls == {2}, f"brick band wall dims {walls}")
    chk.note("each eta_ij indecomposable, non-rigid, wall dim 2")


def criterion_6(chk: Check):
    algs = {name: named(name) for name in ("a2", "a3_linear", "kronecker", "kronecker3", "counter_ray_b3")}
    algs["atilde2"] = build_atilde(3)
    # (a) Serre duality
    pairs = fails = 0
    for name, A in algs.items():
        rng = rng_for(100, hash(name) % 1000)
        for _ in range(40):
            th = tuple(int(x) for x in rng.integers(-2, 3, size=A.n))
            et = tuple(int(x) for x in rng.integers(-2, 3, size=A.n))
            f = sample_presentation(A, et, int(rng.integers(1 << 30)), 0).map
            g = sample_presentation(A, th, int(rng.integers(1 << 30)), 1).map
            pairs += 1
            fails += e_of_pair(f, g) != e_serre(f, g)
    chk.expect(pairs >= 200 and fails == 0, f"serre {fails}/{pairs}")
    chk.note(f"(a) Serre {pairs} pairs, {fails} failures")
    # (b) Nakayama identity
    A3 = algs["a3_linear"]
    mods = _a3_modules(A3)
    kmods = [skew_module(algs["kronecker3"]), simple(algs["kronecker3"], 0), simple(algs["kronecker3"], 1)]
    triples = fails = 0
    rng = rng_for(200, 0)
    for _ in range(25):
        dom = tuple(int(x) for x in rng.integers(0, 3, size=int(rng.integers(0, 3))))
        cod = tuple(int(x) for x in rng.integers(0, 3, size=int(rng.integers(1, 3))))
        f = random_map(A3, dom, cod, rng)
        for X in mods:
            triples += 1
            fails += not nakayama_identity(X, f)
    for k in range(10):
        f = sample_presentation(algs["kronecker3"], (k % 3 + 1, -(k % 2) - 1), 300, k).map
        for X in kmods:
            triples += 1
            fails += not nakayama_identity(X, f)
    chk.expect(triples >= 200 and fails == 0, f"nakayama {fails}/{triples}")
    chk.note(f"(b) Nakayama {triples} triples, {fails} failures")
    # (c) HN filtrations
    hn_pairs = fails = 0
    grid = [t for t in itertools.product(range(-2, 3), repeat=3) if any(t)]
    for th in grid:
        for X in mods:
            if semistable_membership(X, th, "Tbar").value != "In":
                continue
            hn_pairs += 1
            fails += not hn_filtration(X, th).verify()
    At = algs["atilde2"]
    band_mods = [band_module(At, b, 1) for b in enumerate_bands(At, 6)[:8]]
    for th in [(1, 1, 1), (2, -1, 1), (3, 1, -2), (1, 0, 0)]:
        for X in band_mods:
            try:
                if semistable_membership(X, th, "Tbar").value != "In":
                    continue
                h = hn_filtration(X, th)
            except EnumerationBudgetExceeded:
                continue
            hn_pairs += 1
            fails += not h.verify()
    chk.expect(hn_pairs >= 100 and fails == 0, f"hn {fails}/{hn_pairs}")
    chk.note(f"(c) HN {hn_pairs} pairs, {fails} failures")
    # (d) presilting cones pass the Smith test (cone_of_presilting raises otherwise)
    cones = 0
    for th in itertools.product(range(-2, 3), repeat=3):
        if not any(th):
            continue
        dec = canonical_decomposition(A3, th, samples=1)
        if dec.e_self != 0:
            continue
        c = cone_of_presilting([s.map for s in dec.summands])
        cones += 1
        chk.expect(c.dim == len(dec.distinct()), f"cone dim for {th}")
    for A, th in ((algs["kronecker"], (2, -1)), (algs["a2"], (2, -1)), (algs["counter_ray_b3"], (2, 2, -2))):
        dec = canonical_decomposition(A, th)
        if dec.e_self == 0:
            cone_of_presilting([s.map for s in dec.summands])
            cones += 1
    chk.note(f"(d) Smith test on {cones} presilting sets")
    # (e) certificates re-verify through the CLI
    docs = ok = 0
    with tempfile.TemporaryDirectory() as tmp:
        for alg, th in (("a3_linear", "2,-1,1"), ("counter_ray_b3", "1,1,-1"), ("kronecker3", "1,-1"),
                        ("a2", "2,-1"), ("atilde2", "1,-1,0")):
            out = Path(tmp) / f"{alg}.json"
            rc = cli_main(["decompose", alg, "--theta", th, "--lmax", "2", "--json", str(out)])
            res = verify_document(json.loads(out.read_text()))
            docs += 1
            ok += rc == 0 and res["ok"]
    chk.expect(ok == docs, f"verify {ok}/{docs}")
    chk.note(f"(e) verify {ok}/{docs} documents")


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6}


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    res = _timed(k, CRITERIA[k])
    assert _report(k, res), res[1]


if __name__ == "__main__":
    t0 = time.perf_counter()
    results = [_report(k, _timed(k, fn)) for k, fn in CRITERIA.items()]
    total = time.perf_counter() - t0
    print(f"{sum(results)}/{len(results)} criteria passed in {total:.1f}s")
    sys.exit(0 if all(results) else 1)
