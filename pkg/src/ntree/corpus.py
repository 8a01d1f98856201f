"""Test corpus: the worked examples plus seeded random families.

Random members are binomial towers (quasi-ordinary by construction, up to
reducedness), products of towers with distinct first slopes, and controls that
are not quasi-ordinary.  Everything is reproducible from the seed.
"""

from __future__ import annotations

import random
from math import gcd
from dataclasses import dataclass, field

from .polyring import SparsePoly, parse_poly


@dataclass(frozen=True)
class Entry:
    name: str
    text: str
    dim: int
    tags: frozenset = field(default_factory=frozenset)

    def poly(self) -> SparsePoly:
        return parse_poly(self.text, self.dim)


def _e(name, text, dim, *tags):
    return Entry(name, text, dim, frozenset(tags))


WORKED = [
    _e("cusp", "z^2-x1^3", 1, "worked"),
    _e("cusp-pair", "(z^2-x1^3)*(z^3-x1^2)", 1, "worked"),
    _e("two-cusps", "(z^2-x1^3)*(z^2-2*x1^3)", 1, "worked"),
    _e("cusp-tower", "(z^2-x1^3)^2-x1^7", 1, "worked"),
    _e("cusp-tower-z", "(z^2-x1^3)^2-x1^7*z", 1, "worked"),
    _e("a1-surface", "z^2-x1*x2", 2, "worked"),
    _e("binomial", "z^2-x1^2*x2^3", 2, "worked"),
    _e("binomial-tower", "(z^2-x1^2*x2^3)^2-x1^5*x2^8", 2, "worked"),
    _e("sec-trans-1", "(z^2-x1^3*x2)*(z^2-x1^3*x2^4)*(z^2-x1^5*x2^6)", 2, "worked"),
    _e("sec-trans-2", "(z^7-x1^2)^2*(z^3-x1^5*x2*x3)+x1^10*x2*x3", 3, "worked"),
    _e("sec-trans-3", "((z^7-x1^2*x2^3)^2-x1^5*x2^6)^2+x1^11*x2^13", 2, "worked", "slow"),
    _e("sec-trans-4", "(z^2-x1^2*x2^3)^6+(z^2-x1^2*x2^3)^3*x1^7*x2^9+x1^15*x2^19", 2, "worked"),
    _e("duple-f1", "((z^3-x1^2)^2+x1^25*x2^11)*((z^3-x1^4)^2+x1^25*x2^5)", 2, "worked", "duple"),
    _e("duple-f2", "((z^3-x1^2)^2+x1^25*x2^5)*((z^3-x1^4)^2+x1^25*x2^11)", 2, "worked", "duple"),
    _e("duple1-f1", "((z^2-x1^3*x2)^2+x1^5*x2^3*z)*((z^2-x1^3*x2^4)^2+x1^6*x2^9*z)", 2, "worked", "duple1"),
    _e("duple1-f2", "((z^2-x1^3*x2^4)^2+x1^5*x2^9*z)*((z^2-x1^3*x2)^2+x1^6*x2^3*z)", 2, "worked", "duple1"),
] + [_e(f"f{n}", f"z^{n}-x1*x2", 2, "worked", "fn") for n in range(2, 7)]

CONTROLS = [
    _e("many-shadow", "z^2-x1^3-x2^3", 2, "control"),
    _e("non-reduced-1", "(z^2-x1^3)^2", 1, "control", "non-reduced"),
    _e("non-reduced-2", "(z^2-x1*x2)^2", 2, "control", "non-reduced"),
    _e("non-reduced-3", "(z-x1)^2*(z^2-x1^3*x2)", 2, "control", "non-reduced"),
    _e("eliminable", "(z-x1-x1^2)^3+x1^7", 1, "control"),
]


def _mono(exps):
    parts = [f"x{k + 1}^{a}" if a > 1 else f"x{k + 1}" for k, a in enumerate(exps) if a]
    return "*".join(parts) if parts else "1"


def _term(coeff, exps, zpow=0):
    body = _mono(exps)
    if zpow:
        body = (body + "*" if body != "1" else "") + (f"z^{zpow}" if zpow > 1 else "z")
    if coeff == 1:
        return body
    return f"{coeff}*{body}" if body != "1" else str(coeff)


def _tower(rng: random.Random, dim: int, levels: int):
    """(((z^n1 - x^A)^2 - c x^B)^2 - ...) with every new term strictly inside.

    First-level exponents keep gcd(n1, A) <= 2 and added coefficients are
    squares, so every face polynomial splits over the rationals.
    """
    n = rng.choice([2, 3])
    A = [0] * dim
    while not any(A) or gcd(n, *A) > (2 if n == 2 else 1):
        A = [rng.randint(0, 4) for _ in range(dim)]
    text = f"(z^{n}-{_term(1, A)})"
    last = A
    for _ in range(levels - 1):
        bump = [0] * dim
        while not any(bump):
            bump = [rng.randint(0, 3) for _ in range(dim)]
        B = [2 * a + b for a, b in zip(last, bump)]
        c = rng.choice([1, 4, 9])
        text = f"({text}^2-{_term(c, B)})"
        last = B
    return text


def _non_qo(rng: random.Random, dim: int):
    """Reduced but not quasi-ordinary: two incomparable terms in some shadow."""
    a, b = rng.randint(1, 5), rng.randint(1, 5)
    if rng.random() < 0.5:
        n = rng.choice([2, 3])
        u = [0] * dim
        v = [0] * dim
        u[0], v[1] = a, b
        return f"z^{n}-{_term(1, u)}-{_term(1, v)}"
    base = [0] * dim
    base[0], base[1] = 1 + 2 * rng.randint(0, 1), 1
    lo, hi = rng.randint(1, 2), rng.randint(3, 4)
    u = [2 * e for e in base]
    v = [2 * e for e in base]
    u[0] += hi
    u[1] += lo
    v[0] += lo
    v[1] += hi
    return f"(z^2-{_term(1, base)})^2-{_term(1, u)}-{_term(1, v)}"


def random_members(seed=2024, towers=40, products=24, controls=16):
    rng = random.Random(seed)
    out = []
    for k in range(towers):
        dim = rng.choice([1, 2, 2, 3])
        levels = rng.choice([1, 2, 2])
        out.append(_e(f"tower-{k}", _tower(rng, dim, levels), dim, "random", "tower"))
    made = 0
    while made < products:
        dim = rng.choice([1, 2, 2])
        a = _tower(rng, dim, rng.choice([1, 1, 2]))
        b = _tower(rng, dim, 1)
        if a == b:
            continue
        out.append(_e(f"product-{made}", f"{a}*{b}", dim, "random", "product"))
        made += 1
    for k in range(controls):
        dim = rng.choice([2, 2, 3])
        out.append(_e(f"control-{k}", _non_qo(rng, dim), dim, "random", "control"))
    return out


def corpus(seed=2024):
    return WORKED + CONTROLS + random_members(seed)


def separated_pairs(seed=7, count=20):
    """Pairs (f, g) of distinct towers with a separated colored tree and one
    non-dead end per factor, so the resultant rule applies."""
    from .analysis import build_colored_tree, is_separated, resultant_exponent
    from .errors import NTreeError

    rng = random.Random(seed)
    pairs = []
    seen = set()
    while len(pairs) < count:
        dim = rng.choice([1, 2])
        f = _tower(rng, dim, rng.choice([1, 2]))
        g = _tower(rng, dim, 1)
        if f == g or (f, g) in seen:
            continue
        seen.add((f, g))
        k = len(pairs)
        fe, ge = Entry(f"pair-{k}-f", f, dim), Entry(f"pair-{k}-g", g, dim)
        try:
            ct = build_colored_tree(fe.poly(), ge.poly())
            if not is_separated(ct):
                continue
            resultant_exponent(ct)
        except NTreeError:
            continue
        pairs.append((fe, ge))
    return pairs
