"""Classes in K0(proj A) (basis [P(i)]) and dimension vectors (basis [S(i)])."""
from __future__ import annotations

from fractions import Fraction
from math import gcd

from .algebra import ProjectiveLabel
from .errors import NonIntegral

KClass = tuple
DimVector = tuple


def kclass(values) -> KClass:
    out = []
    for x in values:
        f = Fraction(x)
        out.append(int(f) if f.denominator == 1 else f)
    return tuple(out)


def parse_class(text: str) -> KClass:
    return kclass(Fraction(t.strip()) for t in text.split(",") if t.strip())


def is_integral(theta) -> bool:
    return all(Fraction(x).denominator == 1 for x in theta)


def euler_pair(theta, d) -> Fraction | int:
    if len(theta) != len(d):
        raise ValueError("length mismatch")
    s = sum(Fraction(t) * int(x) for t, x in zip(theta, d))
    return int(s) if s.denominator == 1 else s


def split_parts(theta) -> tuple[ProjectiveLabel, ProjectiveLabel]:
    if not is_integral(theta):
        raise NonIntegral(f"{theta} is not integral")
    pos = tuple(max(int(x), 0) for x in theta)
    neg = tuple(max(-int(x), 0) for x in theta)
    return ProjectiveLabel(pos), ProjectiveLabel(neg)


def class_of_map(f) -> KClass:
    return f.klass()


def add(*classes) -> KClass:
    return kclass(sum(Fraction(c[i]) for c in classes) for i in range(len(classes[0])))


def scale(c, theta) -> KClass:
    return kclass(Fraction(c) * Fraction(x) for x in theta)


def primitive(theta) -> tuple[KClass, Fraction]:
    """Primitive integral vector on the ray of theta, and the factor t with theta = t * primitive."""
    fr = [Fraction(x) for x in theta]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        return tuple(0 for _ in theta), Fraction(0)
    return tuple(x // g for x in ints), Fraction(g, den)


def sign_coherent(classes) -> bool:
    n = len(classes[0]) if classes else 0
    for i in range(n):
        pos = any(c[i] > 0 for c in classes)
        neg = any(c[i] < 0 for c in classes)
        if pos and neg:
            return False
    return True


def h_pairing(theta) -> Fraction | int:
    return euler_pair(theta, (1,) * len(theta))


def to_json(theta) -> list:
    return [x if isinstance(x, int) else str(x) for x in theta]
