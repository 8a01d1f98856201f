"""Newton maps and the bookkeeping of total transforms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .diagram import PathStep
from .errors import InternalInconsistency, PreconditionError
from .polyring import (
    MonomialMap,
    SparsePoly,
    monomial_substitute,
    partial_z,
    regular_order,
    shift_z,
    x_content,
)


def solve_diophantine(q, p):
    """Canonical nonnegative solution of 1 + u.q = u0*p.

    Minimal u0 first, then minimal sum(u), then the lexicographically
    largest u (weight pushed onto the earliest variables).
    """
    q = tuple(int(v) for v in q)
    if p < 1 or gcd(p, *q) != 1:
        raise PreconditionError(f"gcd(q, p) must be 1, got q={q}, p={p}")
    d = len(q)
    u0 = 1
    while True:
        target = u0 * p - 1
        best = _best_combination(q, target)
        if best is not None:
            return best, u0
        u0 += 1
        if u0 > p * (max(q, default=0) + 1) + 1:
            raise PreconditionError(f"no solution for q={q}, p={p}")


def _best_combination(q, target):
    """Among u >= 0 with u.q == target: min sum, then lex largest."""
    d = len(q)
    # reach[k][t]: min total count using coordinates k.. to hit t
    INF = float("inf")
    reach = [[INF] * (target + 1) for _ in range(d + 1)]
    reach[d][0] = 0
    for k in range(d - 1, -1, -1):
        for t in range(target + 1):
            best = reach[k + 1][t]
            if q[k] and t >= q[k] and reach[k][t - q[k]] + 1 < best:
                best = reach[k][t - q[k]] + 1
            reach[k][t] = best
    if reach[0][target] == INF:
        return None
    u = []
    t = target
    for k in range(d):
        # largest u_k keeping the remaining optimum
        need = reach[k][t]
        uk = t // q[k] if q[k] else 0
        while uk >= 0:
            rest = t - uk * q[k]
            if reach[k + 1][rest] + uk == need:
                break
            uk -= 1
        u.append(uk)
        t -= uk * q[k]
    return tuple(u)


@dataclass(frozen=True)
class NewtonMapData:
    step: PathStep
    mu: Fraction
    c: tuple
    p_vec: tuple
    q_prime: tuple
    u: tuple
    u0: int
    stripped_exponent: tuple

    def monomial_part(self):
        """delta followed by epsilon, as one monomial map."""
        return MonomialMap.diagonal(
            [self.mu ** k for k in self.u], self.p_vec, z_prefactor=self.q_prime
        )

    @property
    def shift(self):
        return self.mu ** self.u0


@dataclass(frozen=True)
class TransformRecord:
    source: SparsePoly
    data: NewtonMapData
    total: SparsePoly
    stripped: SparsePoly
    order: int
    acc_exp: tuple


def map_data(step: PathStep, mu, u=None, u0=None) -> NewtonMapData:
    p, q = step.p, step.q
    c = tuple(gcd(p, qi) for qi in q)
    if u is None:
        u, u0 = solve_diophantine(q, p)
    elif 1 + sum(a * b for a, b in zip(u, q)) != u0 * p:
        raise PreconditionError("supplied (u, u0) does not solve 1 + u.q = u0 p")
    return NewtonMapData(
        step=step,
        mu=Fraction(mu),
        c=c,
        p_vec=tuple(p // ci for ci in c),
        q_prime=tuple(qi // ci for qi, ci in zip(q, c)),
        u=tuple(u),
        u0=int(u0),
        stripped_exponent=tuple(n // ci for n, ci in zip(step.N, c)),
    )


def apply_map(f: SparsePoly, data: NewtonMapData) -> SparsePoly:
    """Total transform f o sigma (no monomial removed)."""
    g = monomial_substitute(f, data.monomial_part())
    return shift_z(g, SparsePoly.const(f.dim, data.shift))


def newton_map(f: SparsePoly, step: PathStep, mu, acc_prev=None, u=None, u0=None) -> TransformRecord:
    mults = dict(step.roots)
    mu = Fraction(mu)
    if mu not in mults:
        raise PreconditionError(f"{mu} is not a root of the edge polynomial")
    data = map_data(step, mu, u, u0)
    total = apply_map(f, data)
    content = x_content(total)
    if content != data.stripped_exponent:
        raise InternalInconsistency(
            f"transform content {content} differs from the predicted {data.stripped_exponent}"
        )
    stripped = total.shift_monomial(tuple(-v for v in content), 0)
    order = regular_order(stripped)
    if order != mults[mu]:
        raise InternalInconsistency(f"transform has order {order}, root multiplicity is {mults[mu]}")
    if acc_prev is None:
        acc_prev = (0,) * f.dim
    acc = tuple(pi * a + s for pi, a, s in zip(data.p_vec, acc_prev, data.stripped_exponent))
    return TransformRecord(f, data, total, stripped, order, acc)


def chain_rule_holds(rec: TransformRecord) -> bool:
    """d/dz2 (f o sigma) == y^{q'} * ((df/dz) o sigma)."""
    lhs = partial_z(rec.total)
    rhs = apply_map(partial_z(rec.source), rec.data).shift_monomial(rec.data.q_prime, 0)
    return lhs == rhs


def apply_map_to_part(part: SparsePoly, data: NewtonMapData):
    """Transform a factor of f and strip its own monomial content."""
    total = apply_map(part, data)
    content = x_content(total)
    return total.shift_monomial(tuple(-v for v in content), 0), content
