"""Command line front end.

Every subcommand prints one JSON document (or writes it with --json) that
embeds the algebra, the prime, p_enum and the seed, so results can be
re-checked later with `stabfan verify`.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .algebra import Algebra, QuiverSpec, build_algebra, load_spec
from .atilde import (band_I_sets, band_module, build_atilde, decompose_H, enumerate_bands, eta_of_band,
                     halfspace_chambers, hexagon_svg)
from .candecomp import Summand, canonical_decomposition, pair_certificates, ray_condition_probe
from .cones import ConeQ
from .einv import e_generic, e_of_pair, sample_presentation
from .errors import StabfanError, VerificationFailed
from .fp import MERSENNE31
from .kgrp import parse_class, to_json
from .library import SPECS
from .repmod import (cokernel, hom_dim, inj_rep, module_from_dict, proj_rep, projmap_from_dict,
                     simple)
from .stability import (d_cone, d_eta, hn_filtration, monoid_probe, semistable_membership, tf_compare,
                        wall_of)

DATA_DIR = Path(__file__).resolve().parents[2] / "data"


class UsageError(StabfanError):
    exit_code = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


@dataclass
class RunConfig:
    command: str
    algebra_path: str | None = None
    theta: tuple | None = None
    eta: tuple | None = None
    prime: int = MERSENNE31
    p_enum: int = 2
    samples: int = 5
    seed: int = 0
    l_max: int = 1
    word_bound: int = 3
    band_length: int = 6
    output: str | None = None
    json_out: str | None = None
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# loading

def resolve_algebra_file(name: str) -> Path | None:
    p = Path(name)
    if p.exists():
        return p
    for cand in (DATA_DIR / name, DATA_DIR / f"{name}.json"):
        if cand.exists():
            return cand
    return None


def load_algebra(name: str, prime: int) -> tuple[Algebra, dict]:
    path = resolve_algebra_file(name)
    if path is not None:
        raw = json.loads(path.read_text()) if path.suffix == ".json" else {}
        return build_algebra(load_spec(path), prime), raw
    if name in SPECS:
        return build_algebra(SPECS[name](), prime), {}
    raise UsageError(f"no algebra file or builtin named {name!r}")


def load_module_arg(A: Algebra, cfg: RunConfig, raw: dict):
    ex = cfg.extra
    if ex.get("module"):
        data = json.loads(Path(ex["module"]).read_text())
        return module_from_dict(data.get("module", data), A), data
    if "module" in raw:
        return module_from_dict(raw["module"], A), raw
    for key, build in (("simple", lambda i: simple(A, i)), ("projective", lambda i: proj_rep(A, (i,))),
                       ("injective", lambda i: inj_rep(A, (i,)))):
        if ex.get(key) is not None:
            return build(A.vertex_index(ex[key])), {}
    raise UsageError("a module is required (--module FILE, --simple V, --projective V or --injective V)")


def _class(text, n: int, what: str) -> tuple:
    if text is None:
        raise UsageError(f"--{what} is required")
    c = parse_class(text)
    if len(c) != n:
        raise UsageError(f"--{what} needs {n} entries")
    return c


def _header(cfg: RunConfig, A: Algebra) -> dict:
    return {"command": cfg.command, "algebra": A.spec.to_dict(), "prime": A.prime,
            "p_enum": cfg.p_enum, "seed": cfg.seed, "samples": cfg.samples}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, set):
        return sorted(_jsonable(v) for v in x)
    return x


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# commands

def cmd_algebra_check(cfg: RunConfig) -> dict:
    A, _ = load_algebra(cfg.algebra_path, cfg.prime)
    out = _header(cfg, A)
    out.update({
        "n": A.n, "dim": A.dim, "basis": [A.label(b) for b in range(A.dim)],
        "cartan": A.cartan().tolist(), "associative": A.check_associativity(),
        "integral": A.is_integral(),
        "projectives": [list(proj_rep(A, (i,)).dimv) for i in range(A.n)],
        "injectives": [list(inj_rep(A, (i,)).dimv) for i in range(A.n)],
    })
    return out


def cmd_decompose(cfg: RunConfig) -> dict:
    A, _ = load_algebra(cfg.algebra_path, cfg.prime)
    theta = _class(cfg.theta, A.n, "theta")
    out = _header(cfg, A)
    out["theta"] = to_json(theta)
    decs = []
    for l in range(1, cfg.l_max + 1):
        d = canonical_decomposition(A, tuple(l * int(x) for x in theta), cfg.samples, cfg.seed)
        decs.append({"l": l, **d.to_dict()})
    out["decompositions"] = decs
    if cfg.l_max > 1:
        out["ray_probe"] = ray_condition_probe(A, theta, cfg.l_max, cfg.samples, cfg.seed).to_dict()
        c1 = ConeQ.from_generators(canonical_decomposition(A, theta, cfg.samples, cfg.seed).distinct(), A.n)
        c2 = ConeQ.from_generators(canonical_decomposition(A, tuple(2 * int(x) for x in theta),
                                                          cfg.samples, cfg.seed).distinct(), A.n)
        out["cone_ind_vs_2"] = {"cone_ind": c1.to_dict(), "cone_ind_2": c2.to_dict(),
                                "subset": c1.subset_of(c2), "equal": c1 == c2}
    return out


def cmd_einv(cfg: RunConfig) -> dict:
    A, _ = load_algebra(cfg.algebra_path, cfg.prime)
    eta = _class(cfg.eta, A.n, "eta")
    theta = _class(cfg.theta, A.n, "theta")
    out = _header(cfg, A)
    res = {}
    for name, (x, y) in (("E(eta,theta)", (eta, theta)), ("E(theta,eta)", (theta, eta))):
        est = e_generic(A, x, y, cfg.samples, cfg.seed)
        d = est.to_dict()
        (s1, i1), (s2, i2) = est.witnesses
        d["witness_maps"] = [sample_presentation(A, x, s1, i1).map.to_dict(),
                             sample_presentation(A, y, s2, i2).map.to_dict()]
        res[name] = d
    out.update({"eta": to_json(eta), "theta": to_json(theta), "results": res})
    return out


def cmd_wall(cfg: RunConfig) -> dict:
    A, raw = load_algebra(cfg.algebra_path, cfg.prime)
    X, _ = load_module_arg(A, cfg, raw)
    out = _header(cfg, A)
    out.update({"module_dimv": list(X.dimv), "wall": wall_of(X, cfg.p_enum).to_dict()})
    return out


def cmd_dcone(cfg: RunConfig) -> dict:
    A, _ = load_algebra(cfg.algebra_path, cfg.prime)
    out = _header(cfg, A)
    if cfg.extra.get("map"):
        f = projmap_from_dict(A, json.loads(Path(cfg.extra["map"]).read_text()))
        out["map"] = f.to_dict()
        out["cone"] = d_cone(f, cfg.p_enum).to_dict()
    else:
        eta = _class(cfg.eta, A.n, "eta")
        out["eta"] = to_json(eta)
        out["cone"] = d_eta(A, eta, cfg.samples, cfg.seed, p_enum=cfg.p_enum).to_dict()
    return out


def cmd_hn(cfg: RunConfig) -> dict:
    A, raw = load_algebra(cfg.algebra_path, cfg.prime)
    X, _ = load_module_arg(A, cfg, raw)
    theta = _class(cfg.theta, A.n, "theta")
    H = hn_filtration(X, theta, cfg.p_enum)
    out = _header(cfg, A)
    out.update({"module_dimv": list(X.dimv), "filtration": H.to_dict(), "verified": H.verify(cfg.p_enum)})
    return out


def cmd_tf(cfg: RunConfig) -> dict:
    A, _ = load_algebra(cfg.algebra_path, cfg.prime)
    theta = _class(cfg.theta, A.n, "theta")
    eta = _class(cfg.eta, A.n, "eta")
    out = _header(cfg, A)
    out.update({"theta": to_json(theta), "eta": to_json(eta),
                "result": tf_compare(A, theta, eta, cfg.samples, cfg.seed, p_enum=cfg.p_enum).to_dict()})
    return out


def cmd_monoid(cfg: RunConfig) -> dict:
    A, raw = load_algebra(cfg.algebra_path, cfg.prime)
    X, mdata = load_module_arg(A, cfg, raw)
    theta = _class(cfg.theta, A.n, "theta")
    cands = {}
    for k, maps in (mdata.get("candidates") or {}).items():
        cands[int(k)] = [projmap_from_dict(A, m) for m in maps]
    res = monoid_probe(X, theta, cfg.l_max, cfg.samples, cfg.seed, cands)
    out = _header(cfg, A)
    out.update({"module_dimv": list(X.dimv), "theta": to_json(theta),
                "membership_W": semistable_membership(X, theta, "W", cfg.p_enum).to_dict(),
                "monoid": {str(l): e.to_dict() for l, e in sorted(res.items())}})
    return out


def _plane_polygon(cone: ConeQ, h, radius: int):
    """Vertices of cone ∩ {theta.h = 1} clipped to a box, as points of that plane."""
    n = cone.ambient_dim
    ineq = list(cone.inequalities) + [tuple(h)]
    for i in range(n):
        for s in (1, -1):
            ineq.append(tuple(radius * hj + (s if j == i else 0) for j, hj in enumerate(h)))
    clip = ConeQ.from_inequalities(ineq, n)
    pts = []
    for g in clip.generators:
        w = sum(Fraction(a) * b for a, b in zip(g, h))
        if w > 0:
            pts.append(tuple(float(Fraction(x) / w) for x in g))
    return pts


def _plane_svg(polys: list, walls: list, h, size: int = 480, radius: int = 3) -> str:
    h = np.array(h, dtype=float)
    u = np.array([1.0, -1.0, 0.0])
    u -= u.dot(h) / h.dot(h) * h
    u /= np.linalg.norm(u)
    v = np.cross(h / np.linalg.norm(h), u)
    scale = size / (2.2 * radius)
    c = size / 2

    def xy(p):
        p = np.array(p)
        return c + scale * p.dot(u), c - scale * p.dot(v)

    def ordered(pts):
        if not pts:
            return []
        P = [xy(p) for p in pts]
        mx = sum(x for x, _ in P) / len(P)
        my = sum(y for _, y in P) / len(P)
        return sorted(P, key=lambda q: math.atan2(q[1] - my, q[0] - mx))

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
           '<rect width="100%" height="100%" fill="white"/>']
    for pts in polys:
        P = ordered(pts)
        if len(P) >= 3:
            out.append('<polygon points="{}" fill="#dde8f5" stroke="#6b8fb8" stroke-width="1"/>'.format(
                " ".join(f"{x:.2f},{y:.2f}" for x, y in P)))
    for pts in walls:
        P = ordered(pts)
        if len(P) >= 2:
            out.append('<polyline points="{}" fill="none" stroke="black" stroke-width="1.5"/>'.format(
                " ".join(f"{x:.2f},{y:.2f}" for x, y in P)))
    out.append("</svg>")
    return "\n".join(out)


def cmd_scan(cfg: RunConfig) -> dict:
    A, _ = load_algebra(cfg.algebra_path, cfg.prime)
    if A.n != 3 or not cfg.extra.get("rank3"):
        raise UsageError("scan currently supports --rank3 on algebras with three vertices")
    radius = int(cfg.extra.get("radius") or 2)
    h = tuple(int(x) for x in parse_class(cfg.extra.get("plane") or "1,1,1"))
    chambers, walls = [], []
    seen_walls = set()
    pts = [(a, b, c) for a in range(-radius, radius + 1) for b in range(-radius, radius + 1)
           for c in range(-radius, radius + 1) if (a, b, c) != (0, 0, 0)]
    for theta in pts:
        dec = canonical_decomposition(A, theta, cfg.samples, cfg.seed)
        if all(s.evidence.get("local") for s in dec.summands) and dec.e_self == 0 and len(dec.distinct()) == 3:
            cone = ConeQ.from_generators(dec.distinct(), 3)
            if not any(cone == c for c in chambers):
                chambers.append(cone)
        for s in dec.summands:
            try:
                M = cokernel(s.map)
                if M.total == 0 or hom_dim(M, M) != 1:
                    continue
                w = wall_of(M, cfg.p_enum)
            except StabfanError:
                continue
            key = tuple(w.generators)
            if key not in seen_walls:
                seen_walls.add(key)
                walls.append(w)
    svg = _plane_svg([_plane_polygon(c, h, radius) for c in chambers],
                     [_plane_polygon(w, h, radius) for w in walls], h, radius=radius)
    if cfg.output:
        Path(cfg.output).write_text(svg)
    out = _header(cfg, A)
    out.update({"plane": list(h), "chambers": [c.to_dict() for c in chambers],
                "walls": [w.to_dict() for w in walls], "svg": cfg.output})
    return out


def cmd_atilde(cfg: RunConfig) -> dict:
    n = int(cfg.extra.get("n") or 3)
    A = build_atilde(n, cfg.prime)
    H = decompose_H(n)
    bands = []
    for b in enumerate_bands(A, cfg.band_length):
        M = band_module(A, b, 2)
        brick = hom_dim(M, M) == 1
        row = {"band": str(b), "length": len(b), "brick": brick, "dimv": list(M.dimv)}
        if brick:
            plus, minus = band_I_sets(A, b)
            row.update({"eta": list(eta_of_band(A, b, 2)), "I_plus": sorted(plus), "I_minus": sorted(minus)})
        bands.append(row)
    half = halfspace_chambers(n, cfg.word_bound)
    out = {"command": "atilde", "algebra": A.spec.to_dict(), "prime": A.prime, "p_enum": cfg.p_enum,
           "seed": cfg.seed, "n": n,
           "H": [{"J": c.meta["J"], "word": c.meta["word"], "dim": c.dim, "rays": [list(r) for r in c.rays()]}
                 for _, c in H],
           "bands": bands,
           "halfspace": {"word_bound": cfg.word_bound, "cones": len(half)}}
    if n == 3:
        hl = d_eta(A, (1, -1, 0), cfg.samples, cfg.seed, p_enum=cfg.p_enum)
        out["D_eta_12"] = hl.to_dict()
        if cfg.output:
            Path(cfg.output).write_text(hexagon_svg(H, hl))
            out["svg"] = cfg.output
    return out


def verify_document(doc: dict) -> dict:
    """Re-check the certificates embedded in a JSON result without drawing new samples."""
    A = build_algebra(QuiverSpec.from_dict(doc["algebra"]), int(doc["prime"]))
    checks = []
    if doc.get("command") == "decompose":
        for d in doc["decompositions"]:
            summands = [Summand(projmap_from_dict(A, w["map"]), int(w["galois_degree"]), w["evidence"])
                        for w in d["witnesses"]]
            certs = pair_certificates(A, summands, int(d["seed"]))
            same = dumps(certs) == dumps(d["certificates"])
            total = [Fraction(0)] * A.n
            for s in summands:
                for i, x in enumerate(s.klass()):
                    total[i] += Fraction(x) * s.galois_degree
            sums = [Fraction(x) for x in d["theta"]] == total
            checks.append({"l": d["l"], "certificates_identical": same, "classes_sum": sums,
                           "all_ok": all(c["ok"] for c in certs)})
    elif doc.get("command") == "e-inv":
        for name, r in doc["results"].items():
            f = projmap_from_dict(A, r["witness_maps"][0])
            g = projmap_from_dict(A, r["witness_maps"][1])
            checks.append({"pair": name, "recomputed": e_of_pair(f, g), "claimed": r["value"],
                           "ok": e_of_pair(f, g) == r["value"]})
    else:
        raise UsageError(f"nothing to verify for command {doc.get('command')!r}")
    ok = all(all(v for k, v in c.items() if isinstance(v, bool)) for c in checks)
    return {"command": "verify", "checks": checks, "ok": ok}


def cmd_verify(cfg: RunConfig) -> dict:
    doc = json.loads(Path(cfg.extra["file"]).read_text())
    res = verify_document(doc)
    res.update({"prime": doc.get("prime"), "p_enum": doc.get("p_enum"), "seed": doc.get("seed")})
    if not res["ok"]:
        sys.stdout.write(dumps(res))
        raise VerificationFailed("certificate re-verification failed")
    return res


COMMANDS = {
    "algebra-check": cmd_algebra_check, "decompose": cmd_decompose, "e-inv": cmd_einv, "wall": cmd_wall,
    "dcone": cmd_dcone, "hn": cmd_hn, "tf": cmd_tf, "monoid": cmd_monoid, "scan": cmd_scan,
    "atilde": cmd_atilde, "verify": cmd_verify,
}


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="stabfan", description="Stability, wall-chamber and canonical decomposition computations.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, algebra=True):
        if algebra:
            p.add_argument("algebra", help="algebra file (JSON/TOML) or builtin name")
        p.add_argument("--prime", type=int, default=MERSENNE31)
        p.add_argument("--p-enum", type=int, default=2, help="prime for submodule enumeration")
        p.add_argument("--samples", type=int, default=5)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--json", dest="json_out", help="write JSON here instead of stdout")

    def module_opts(p):
        p.add_argument("--module", help="module file")
        p.add_argument("--simple")
        p.add_argument("--projective")
        p.add_argument("--injective")

    common(sub.add_parser("algebra-check", help="basis, Cartan matrix and indecomposable projectives"))
    p = sub.add_parser("decompose", help="canonical decomposition of theta (and l*theta)")
    common(p)
    p.add_argument("--theta", required=True)
    p.add_argument("--lmax", type=int, default=1)
    p = sub.add_parser("e-inv", help="generic E-invariant in both orders")
    common(p)
    p.add_argument("--eta", required=True)
    p.add_argument("--theta", required=True)
    p = sub.add_parser("wall", help="the wall of a module")
    common(p)
    module_opts(p)
    p = sub.add_parser("dcone", help="D-cone of a map or of a generic presentation")
    common(p)
    p.add_argument("--eta")
    p.add_argument("--map", help="map file")
    p = sub.add_parser("hn", help="Harder-Narasimhan filtration")
    common(p)
    module_opts(p)
    p.add_argument("--theta", required=True)
    p = sub.add_parser("tf", help="compare TF classes of two vectors")
    common(p)
    p.add_argument("--theta", required=True)
    p.add_argument("--eta", required=True)
    p = sub.add_parser("monoid", help="probe the monoid of l with X in the union of Tbar_f")
    common(p)
    module_opts(p)
    p.add_argument("--theta", required=True)
    p.add_argument("--lmax", type=int, default=3)
    p = sub.add_parser("scan", help="draw chambers and walls on an affine plane")
    common(p)
    p.add_argument("--rank3", action="store_true")
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--plane", help="normal vector h of the plane theta.h = 1")
    p.add_argument("--out", help="SVG output path")
    p = sub.add_parser("atilde", help="TF atlas for the affine type A string quotient")
    common(p, algebra=False)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--bound", type=int, default=3, help="word length bound for the half-space atlas")
    p.add_argument("--bands", type=int, default=6, help="maximal band length")
    p.add_argument("--out", help="SVG output path")
    p = sub.add_parser("verify", help="re-check certificates in a JSON result")
    p.add_argument("file")
    p.add_argument("--json", dest="json_out")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    g = vars(ns)
    cfg = RunConfig(command=ns.command, algebra_path=g.get("algebra"), theta=g.get("theta"), eta=g.get("eta"),
                    prime=g.get("prime", MERSENNE31), p_enum=g.get("p_enum", 2), samples=g.get("samples", 5),
                    seed=g.get("seed", 0), l_max=g.get("lmax") or 1, word_bound=g.get("bound") or 3,
                    band_length=g.get("bands") or 6, output=g.get("out"), json_out=g.get("json_out"))
    for key in ("module", "simple", "projective", "injective", "map", "rank3", "radius", "plane", "n", "file"):
        if key in g:
            cfg.extra[key] = g[key]
    if cfg.samples < 1:
        raise UsageError("--samples must be at least 1")
    return cfg


def run(cfg: RunConfig) -> int:
    result = COMMANDS[cfg.command](cfg)
    text = dumps(result)
    if cfg.json_out:
        Path(cfg.json_out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return run(config_from_args(ns))
    except StabfanError as exc:
        print(f"stabfan: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError) as exc:
        print(f"stabfan: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
