"""Newton diagram geometry: apex shadows, the monotone path and face polynomials."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Optional

from .errors import EliminationBudgetExceeded, NonRationalRoots, NuStatusMany, PreconditionError
from .polyring import (
    SparsePoly,
    content_and_order,
    partial_z,
    series_root,
    shift_z,
    shift_z_trunc,
    to_text,
)

DEFAULT_BUDGET = 64


@dataclass(frozen=True)
class NuStatus:
    kind: str  # "Void" | "OneVertex" | "Many"
    vertex: Optional[tuple] = None  # projected point (Fractions)
    attained_by: Optional[tuple] = None  # support point realizing it

    @property
    def is_one_vertex(self):
        return self.kind == "OneVertex"


@dataclass(frozen=True)
class PathStep:
    start: tuple  # A_{l-1} as (alpha..., beta)
    end: tuple  # A_l
    p: int
    q: tuple
    N: tuple
    roots: tuple = ()  # ((mu, m), ...) in increasing mu
    a: Fraction = Fraction(1)
    z_factor_exp: int = 0
    x_factor_exp: tuple = ()
    irrational: tuple = ()  # ((coeffs, m), ...) kept only when explicitly allowed

    @property
    def drop(self):
        return self.start[-1] - self.end[-1]

    def value(self, point):
        """The linear form p*alpha + q*beta, coordinatewise."""
        return tuple(self.p * point[k] + self.q[k] * point[-1] for k in range(len(self.q)))


@dataclass(frozen=True)
class PathResult:
    steps: tuple
    terminal: str  # "NW1" | "NW2" | "NW3"
    terminal_order: int


def _project(apex, point):
    b_a = apex[-1]
    s = Fraction(b_a, b_a - point[-1])
    return tuple(apex[k] + s * (point[k] - apex[k]) for k in range(len(apex) - 1))


def status_at(f: SparsePoly, apex) -> NuStatus:
    """Shadow status of the support below ``apex`` projected from it."""
    below = [e for e in f.terms if e[-1] < apex[-1]]
    if not below:
        return NuStatus("Void")
    projected = [(_project(apex, e), e) for e in below]
    best = None
    for v, e in projected:
        if best is None or all(a <= b for a, b in zip(v, best[0])):
            best = (v, e)
    v = best[0]
    if all(all(a <= b for a, b in zip(v, w)) for w, _ in projected):
        # prefer the on-ray point of least beta as witness
        on_ray = [e for w, e in projected if w == v]
        return NuStatus("OneVertex", v, min(on_ray, key=lambda e: e[-1]))
    return NuStatus("Many")


def apex_of(f: SparsePoly):
    n, order, _ = content_and_order(f)
    return tuple(n) + (order,)


def nu_status(f: SparsePoly) -> NuStatus:
    return status_at(f, apex_of(f))


def _step_from(f: SparsePoly, apex, status: NuStatus) -> PathStep:
    d = f.dim
    b_a = apex[-1]
    slopes = [(status.vertex[k] - apex[k]) / b_a for k in range(d)]
    p = lcm(*(s.denominator for s in slopes)) if slopes else 1
    q = tuple(int(s * p) for s in slopes)
    g = gcd(p, *q)
    p, q = p // g, tuple(v // g for v in q)
    N = tuple(p * apex[k] + q[k] * b_a for k in range(d))
    on_edge = [e for e in f.terms if e[-1] <= b_a and all(p * e[k] + q[k] * e[-1] == N[k] for k in range(d))]
    end = min(on_edge, key=lambda e: e[-1])
    return PathStep(start=tuple(apex), end=end, p=p, q=q, N=N)


def polygonal_path(f: SparsePoly, with_roots: bool = True, allow_irrational: bool = False) -> PathResult:
    apex = apex_of(f)
    status = status_at(f, apex)
    if status.kind == "Many":
        raise NuStatusMany("shadow at the apex has several vertices")
    if status.kind == "Void":
        raise PreconditionError("nothing below the apex; there is no path")
    steps = []
    while True:
        step = _step_from(f, apex, status)
        if with_roots:
            step = factor_edge(f, step, allow_irrational)
        steps.append(step)
        apex = step.end
        if apex[-1] == 0:
            return PathResult(tuple(steps), "NW1", 0)
        status = status_at(f, apex)
        if status.kind == "Void":
            return PathResult(tuple(steps), "NW2", apex[-1])
        if status.kind == "Many":
            return PathResult(tuple(steps), "NW3", apex[-1])


def face_points(f: SparsePoly, step: PathStep):
    lo, hi = step.end[-1], step.start[-1]
    return {
        e: c
        for e, c in f.terms.items()
        if lo <= e[-1] <= hi and step.value(e) == step.N
    }


def face_univariate(f: SparsePoly, step: PathStep):
    """Coefficients (low to high) of the edge polynomial in t = z^p / x^q."""
    pts = face_points(f, step)
    K = step.drop // step.p
    coeffs = [Fraction(0)] * (K + 1)
    for e, c in pts.items():
        j, r = divmod(e[-1] - step.end[-1], step.p)
        if r:
            raise PreconditionError("support point on the edge off the lattice")
        coeffs[j] = c
    return coeffs


def rational_factorization(coeffs):
    """Factor a univariate rational polynomial as a * prod (t - mu)^m.

    Returns ``(a, [(mu, m), ...], residual)`` with roots sorted increasingly;
    ``residual`` lists the irreducible nonlinear factors (coefficient lists).
    """
    import sympy

    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * t**j for j, c in enumerate(coeffs))
    lead, factors = sympy.Poly(expr, t, domain="QQ").factor_list()
    a = Fraction(int(sympy.numer(lead)), int(sympy.denom(lead)))
    roots = []
    residual = []
    for fac, m in factors:
        if fac.degree() == 1:
            c1, c0 = fac.all_coeffs()
            mu = -sympy.Rational(c0) / sympy.Rational(c1)
            roots.append((Fraction(int(mu.p), int(mu.q)), int(m)))
            # make the factor monic and move the scale into a
            a *= Fraction(int(sympy.numer(c1)), int(sympy.denom(c1))) ** m
        else:
            lc = fac.LC()
            a *= Fraction(int(sympy.numer(lc)), int(sympy.denom(lc))) ** m
            residual.append(([Fraction(int(sympy.numer(c)), int(sympy.denom(c))) for c in reversed(fac.all_coeffs())], int(m)))
    roots.sort()
    return a, roots, residual


def factor_edge(f: SparsePoly, step: PathStep, allow_irrational: bool = False) -> PathStep:
    coeffs = face_univariate(f, step)
    a, roots, residual = rational_factorization(coeffs)
    if residual and not allow_irrational:
        text = "; ".join(
            " + ".join(f"{c}*t^{j}" for j, c in enumerate(cs) if c) + (f" (mult {m})" if m > 1 else "")
            for cs, m in residual
        )
        raise NonRationalRoots(f"edge polynomial has an irreducible nonlinear factor: {text}", residual=residual)
    return PathStep(
        start=step.start,
        end=step.end,
        p=step.p,
        q=step.q,
        N=step.N,
        roots=tuple(roots),
        a=a,
        z_factor_exp=step.end[-1],
        x_factor_exp=tuple(step.start[:-1]),
        irrational=tuple((tuple(cs), m) for cs, m in residual),
    )


def edge_polynomial(f: SparsePoly, step: PathStep):
    """Return (face polynomial, univariate coefficients, factored step)."""
    pts = face_points(f, step)
    face = SparsePoly(f.dim, pts)
    coeffs = face_univariate(f, step)
    return face, coeffs, factor_edge(f, step)


def eliminable(f: SparsePoly, step: PathStep) -> Optional[SparsePoly]:
    if not step.roots and not step.irrational:
        step = factor_edge(f, step, allow_irrational=True)
    if step.p != 1 or len(step.roots) != 1 or step.irrational or step.z_factor_exp != 0:
        return None
    apex = apex_of(f)
    mu, m = step.roots[0]
    if tuple(step.start) != apex or m != apex[-1]:
        return None
    return SparsePoly.monomial(f.dim, step.q, 0, mu)


@dataclass
class Suitable:
    poly: SparsePoly
    shifts: list = field(default_factory=list)
    status: NuStatus = None
    precision: Optional[int] = None  # set when a truncated series shift was used


def series_precision_cap(f: SparsePoly) -> int:
    """Largest working x-degree tried for series shifts."""
    _, order, _ = content_and_order(f)
    low = max((sum(e[:-1]) for e in f.terms if e[-1] <= order), default=0)
    return int(os.environ.get("NTREE_SERIES_PRECISION", 0)) or 2 * low + 8


def _monomial_elimination(f, budget, shifts):
    while True:
        apex = apex_of(f)
        status = status_at(f, apex)
        if status.kind != "OneVertex":
            return f, status
        step = factor_edge(f, _step_from(f, apex, status), allow_irrational=True)
        h = eliminable(f, step)
        if h is None:
            return f, status
        if len(shifts) >= budget:
            raise EliminationBudgetExceeded(
                f"more than {budget} eliminating shifts (z-degree {f.z_degree()}, {len(f)} terms)"
            )
        shifts.append(h)
        f = shift_z(f, h)


def ensure_suitable(f: SparsePoly, budget: int = DEFAULT_BUDGET) -> Suitable:
    shifts = []
    g, status = _monomial_elimination(f, budget, shifts)
    if status.kind != "Many" or not shifts:
        return Suitable(g, shifts, status)
    # Monomial shifts can stop on a shadow that only looks like a 2-dimensional
    # face because the eliminating root is a genuine series.  Shift once by the
    # series root of the (m-1)-th z-derivative, which kills the z^(m-1) term.
    _, m, _ = content_and_order(f)
    d = f
    for _ in range(m - 1):
        d = partial_z(d)
    cap = series_precision_cap(f)
    prec = 16
    while True:
        prec = min(prec, cap)
        h, exact = series_root(d, prec)
        if exact:
            return Suitable(g, shifts, status)
        g2 = shift_z_trunc(f, h, prec)
        status2 = status_at(g2, apex_of(g2))
        # accept once the shadow vertex sits well inside the reliable range
        if status2.kind == "OneVertex" and 2 * sum(status2.attained_by[:-1]) <= prec:
            break
        if prec >= cap:
            if status2.kind == "Many":
                return Suitable(g, shifts, status)
            break
        prec *= 2
    more = [h]
    g2, status2 = _monomial_elimination(g2, budget, more)
    return Suitable(g2, more, status2, prec)
