"""Exact sparse polynomials in x1..xd, z over the rationals.

Terms are stored as ``{(a1, ..., ad, b): Fraction}`` where ``b`` is the
exponent of ``z``.  Also hosts the text parser/printer and the Sylvester
resultant used as the verification oracle.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

try:
    import flint
except ImportError:  # pragma: no cover - optional accelerator
    flint = None

from .errors import DimensionMismatch, NotRegular, ParseError, PreconditionError

Exp = tuple  # (alpha_1, ..., alpha_d, beta)


def _grlex_key(e):
    # x1 > x2 > ... > xd > z, higher total degree first
    return (-sum(e), tuple(-v for v in e))


class SparsePoly:
    """Immutable sparse polynomial in ``dim`` x-variables and ``z``."""

    __slots__ = ("dim", "terms", "_hash")

    def __init__(self, dim: int, terms: Mapping[Exp, object] | Iterable = ()):
        if dim < 0:
            raise ValueError("dim must be nonnegative")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for e, c in items:
            e = tuple(int(v) for v in e)
            if len(e) != dim + 1:
                raise DimensionMismatch(f"exponent {e} does not have length {dim + 1}")
            if any(v < 0 for v in e):
                raise ValueError(f"negative exponent in {e}")
            c = Fraction(c)
            if c:
                c = clean.get(e, 0) + c
                if c:
                    clean[e] = c
                else:
                    clean.pop(e, None)
        self.dim = dim
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def _raw(cls, dim, terms):
        p = cls.__new__(cls)
        p.dim = dim
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, dim):
        return cls._raw(dim, {})

    @classmethod
    def const(cls, dim, c):
        c = Fraction(c)
        return cls._raw(dim, {(0,) * (dim + 1): c} if c else {})

    @classmethod
    def monomial(cls, dim, alpha, beta=0, coeff=1):
        return cls(dim, {tuple(alpha) + (beta,): coeff})

    @classmethod
    def z(cls, dim):
        return cls.monomial(dim, (0,) * dim, 1)

    @classmethod
    def x(cls, dim, i):
        """The variable x_{i+1} (0-based index)."""
        alpha = [0] * dim
        alpha[i] = 1
        return cls.monomial(dim, alpha, 0)

    # -- basic protocol -------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        """Iterate ``(exp, coeff)`` in graded lexicographic order."""
        for e in sorted(self.terms, key=_grlex_key):
            yield e, self.terms[e]

    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            return self.dim == other.dim and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == SparsePoly.const(self.dim, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"SparsePoly({self.dim}, {to_text(self)!r})"

    def __str__(self):
        return to_text(self)

    def _coerce(self, other):
        if isinstance(other, SparsePoly):
            if other.dim != self.dim:
                raise DimensionMismatch(f"dimension mismatch: {self.dim} vs {other.dim}")
            return other
        if isinstance(other, (int, Fraction)):
            return SparsePoly.const(self.dim, other)
        return None

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return SparsePoly._raw(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._raw(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        n = self.dim + 1
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(e1[k] + e2[k] for k in range(n))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return SparsePoly._raw(self.dim, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = SparsePoly.const(self.dim, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return SparsePoly.zero(self.dim)
        return SparsePoly._raw(self.dim, {e: v * c for e, v in self.terms.items()})

    def shift_monomial(self, alpha, beta=0):
        """Multiply by x^alpha z^beta (exponents may be negative if divisible)."""
        shift = tuple(alpha) + (beta,)
        out = {}
        for e, c in self.terms.items():
            ne = tuple(a + b for a, b in zip(e, shift))
            if min(ne) < 0:
                raise ValueError("monomial shift leaves the polynomial ring")
            out[ne] = c
        return SparsePoly._raw(self.dim, out)

    # -- inspection -----------------------------------------------------
    def z_degree(self):
        return max((e[-1] for e in self.terms), default=-1)

    def is_z_free(self):
        return all(e[-1] == 0 for e in self.terms)

    def coeff(self, alpha, beta=0):
        return self.terms.get(tuple(alpha) + (beta,), Fraction(0))

    def z_coefficients(self):
        """Return the list of x-polynomials c_b with f = sum c_b z^b."""
        deg = self.z_degree()
        out = [dict() for _ in range(deg + 1)]
        for e, c in self.terms.items():
            out[e[-1]][e[:-1] + (0,)] = c
        return [SparsePoly._raw(self.dim, t) for t in out]

    def support(self):
        return list(self.terms)

    def drop_variable(self, i):
        """Polynomial in one fewer x-variable; requires x_i not to occur."""
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                raise ValueError(f"x{i + 1} occurs in the polynomial")
            out[e[:i] + e[i + 1:]] = c
        return SparsePoly._raw(self.dim - 1, out)

    def specialize(self, i, value):
        """Substitute the constant ``value`` for x_{i+1}; result has dim-1 variables."""
        value = Fraction(value)
        out = {}
        for e, c in self.terms.items():
            ne = e[:i] + e[i + 1:]
            v = out.get(ne, 0) + c * value ** e[i]
            if v:
                out[ne] = v
            else:
                out.pop(ne, None)
        return SparsePoly._raw(self.dim - 1, out)

    def denominator_lcm(self):
        return lcm(*(c.denominator for c in self.terms.values())) if self.terms else 1


def arith(a: SparsePoly, b: SparsePoly, kind: str) -> SparsePoly:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}")
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown operation {kind!r}")


def partial_z(f: SparsePoly) -> SparsePoly:
    out = {}
    for e, c in f.terms.items():
        if e[-1]:
            out[e[:-1] + (e[-1] - 1,)] = c * e[-1]
    return SparsePoly._raw(f.dim, out)


def shift_z(f: SparsePoly, h: SparsePoly) -> SparsePoly:
    """Return f(x, z + h(x))."""
    if not h.is_z_free():
        raise PreconditionError("shift_z: h must not contain z")
    if h.dim != f.dim:
        raise DimensionMismatch(f"dimension mismatch: {f.dim} vs {h.dim}")
    if not h:
        return f
    coeffs = f.z_coefficients()
    zh = SparsePoly.z(f.dim) + h
    # Horner in z + h
    result = SparsePoly.zero(f.dim)
    for c in reversed(coeffs):
        result = result * zh + c
    return result


def x_degree(e) -> int:
    return sum(e[:-1])


def truncate(f: SparsePoly, precision: int) -> SparsePoly:
    """Drop every term whose total x-degree exceeds ``precision``."""
    return SparsePoly._raw(f.dim, {e: c for e, c in f.terms.items() if x_degree(e) <= precision})


def mul_trunc(f: SparsePoly, g: SparsePoly, precision: int) -> SparsePoly:
    out = {}
    gt = [(e, x_degree(e), c) for e, c in g.terms.items()]
    for e1, c1 in f.terms.items():
        d1 = x_degree(e1)
        if d1 > precision:
            continue
        for e2, d2, c2 in gt:
            if d1 + d2 > precision:
                continue
            e = tuple(a + b for a, b in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return SparsePoly._raw(f.dim, out)


def shift_z_trunc(f: SparsePoly, h: SparsePoly, precision: int) -> SparsePoly:
    """f(x, z + h(x)) modulo terms of x-degree above ``precision``."""
    zh = SparsePoly.z(f.dim) + h
    result = SparsePoly.zero(f.dim)
    for c in reversed(f.z_coefficients()):
        result = mul_trunc(result, zh, precision) + truncate(c, precision)
    return result


def _eval_z_trunc(f: SparsePoly, h: SparsePoly, precision: int) -> SparsePoly:
    result = SparsePoly.zero(f.dim)
    for c in reversed(f.z_coefficients()):
        result = mul_trunc(result, h, precision) + truncate(c, precision)
    return result


def series_inverse(u: SparsePoly, precision: int) -> SparsePoly:
    """Inverse of a z-free unit modulo x-degree above ``precision``."""
    c0 = u.coeff((0,) * u.dim)
    if not c0:
        raise PreconditionError("series_inverse: not a unit")
    v = SparsePoly.const(u.dim, 1 / Fraction(c0))
    two = SparsePoly.const(u.dim, 2)
    reached = 0
    while reached <= precision:
        v = mul_trunc(v, two - mul_trunc(u, v, precision), precision)
        reached = 2 * reached + 1
    return v


def series_root(g: SparsePoly, precision: int) -> tuple:
    """Root h(x) with h(0) = 0 of g, where g(0, z) has a simple zero at z = 0.

    Returns ``(h, exact)``; ``exact`` is True when g(x, h) vanishes identically.
    """
    gz = partial_z(g)
    h = SparsePoly.zero(g.dim)
    reached = 0
    while True:
        val = _eval_z_trunc(g, h, precision)
        if not val:
            return h, _eval_z_trunc(g, h, 10 ** 9) == SparsePoly.zero(g.dim)
        if reached > precision:
            return h, False
        inv = series_inverse(_eval_z_trunc(gz, h, precision), precision)
        h = h - mul_trunc(val, inv, precision)
        reached = 2 * reached + 1


@dataclass(frozen=True)
class MonomialMap:
    """x_i -> scalars[i] * y^{exponents[i]},  z -> z_scalar * y^{z_prefactor} * z."""

    scalars: tuple
    exponents: tuple  # d x d nonnegative integer matrix, row i = image exponents of x_i
    z_prefactor: tuple
    z_scalar: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "scalars", tuple(Fraction(c) for c in self.scalars))
        object.__setattr__(self, "exponents", tuple(tuple(int(v) for v in row) for row in self.exponents))
        object.__setattr__(self, "z_prefactor", tuple(int(v) for v in self.z_prefactor))
        object.__setattr__(self, "z_scalar", Fraction(self.z_scalar))
        if not self.z_scalar:
            raise ValueError("z_scalar must be nonzero")
        d = len(self.scalars)
        if len(self.exponents) != d or any(len(r) != d for r in self.exponents) or len(self.z_prefactor) != d:
            raise DimensionMismatch("malformed monomial map")

    @property
    def dim(self):
        return len(self.scalars)

    @classmethod
    def identity(cls, d):
        return cls((1,) * d, tuple(tuple(int(i == j) for j in range(d)) for i in range(d)), (0,) * d, 1)

    @classmethod
    def diagonal(cls, scalars, powers, z_prefactor=None, z_scalar=1):
        d = len(powers)
        mat = tuple(tuple(powers[i] if i == j else 0 for j in range(d)) for i in range(d))
        return cls(tuple(scalars), mat, tuple(z_prefactor or (0,) * d), z_scalar)

    def then(self, other: "MonomialMap") -> "MonomialMap":
        """The map equal to applying ``self`` first and then ``other``."""
        d = self.dim
        if other.dim != d:
            raise DimensionMismatch("composing maps of different dimensions")
        scal = []
        mat = []
        for i in range(d):
            c = self.scalars[i]
            row = [0] * d
            for k in range(d):
                m = self.exponents[i][k]
                if m:
                    c *= other.scalars[k] ** m
                    for j in range(d):
                        row[j] += m * other.exponents[k][j]
            scal.append(c)
            mat.append(row)
        zs = self.z_scalar * other.z_scalar
        pref = list(other.z_prefactor)
        for k in range(d):
            m = self.z_prefactor[k]
            if m:
                zs *= other.scalars[k] ** m
                for j in range(d):
                    pref[j] += m * other.exponents[k][j]
        return MonomialMap(tuple(scal), tuple(mat), tuple(pref), zs)


def monomial_substitute(f: SparsePoly, m: MonomialMap) -> SparsePoly:
    if m.dim != f.dim:
        raise DimensionMismatch("map dimension does not match polynomial")
    d = f.dim
    out = {}
    for e, c in f.terms.items():
        coeff = c * m.z_scalar ** e[-1]
        new = [m.z_prefactor[j] * e[-1] for j in range(d)]
        for i in range(d):
            a = e[i]
            if a:
                coeff *= m.scalars[i] ** a
                row = m.exponents[i]
                for j in range(d):
                    new[j] += a * row[j]
        key = tuple(new) + (e[-1],)
        v = out.get(key, 0) + coeff
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return SparsePoly._raw(d, out)


def x_content(f: SparsePoly) -> tuple:
    """Componentwise minimum of the x-exponents (the monomial content)."""
    if not f:
        raise PreconditionError("content of the zero polynomial")
    return tuple(min(e[i] for e in f.terms) for i in range(f.dim))


def regular_order(g: SparsePoly):
    """Minimal z-exponent among terms with no x, or None when g(0, z) == 0."""
    zero = (0,) * g.dim
    orders = [e[-1] for e in g.terms if e[:-1] == zero]
    return min(orders) if orders else None


def content_and_order(f: SparsePoly):
    """Split f = x^n g with g regular; return (n, order of g, g)."""
    n = x_content(f)
    g = f.shift_monomial(tuple(-v for v in n), 0) if any(n) else f
    order = regular_order(g)
    if order is None:
        raise NotRegular(f"g(0, z) vanishes identically for {to_text(f)}")
    return n, order, g


def monomial_unit_split(h: SparsePoly):
    """Return D with h = x^D * u(x), u(0) != 0, or None if h is not of that form."""
    if not h:
        raise PreconditionError("monomial_unit_split of the zero polynomial")
    if not h.is_z_free():
        raise PreconditionError("monomial_unit_split expects a z-free polynomial")
    D = x_content(h)
    return D if h.coeff(D, 0) else None


# -- Sylvester resultant (fraction-free Bareiss over Z[x]) -----------------

def _pmul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(u + v for u, v in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def _psub(a, b):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) - c
        if v:
            out[e] = v
        else:
            del out[e]
    return out


def _lead(a):
    return min(a, key=_grlex_key)


def _pdiv_exact(a, b):
    """Exact quotient a / b in Z[x]; raises if the division is not exact."""
    if not a:
        return {}
    if len(b) == 1:
        (eb, cb), = b.items()
        out = {}
        for e, c in a.items():
            q, r = divmod(c, cb)
            ne = tuple(u - v for u, v in zip(e, eb))
            if r or any(v < 0 for v in ne):
                raise ArithmeticError("inexact division")
            out[ne] = q
        return out
    lb = _lead(b)
    cb = b[lb]
    rem = dict(a)
    quo = {}
    while rem:
        lr = _lead(rem)
        ne = tuple(u - v for u, v in zip(lr, lb))
        q, r = divmod(rem[lr], cb)
        if r or any(v < 0 for v in ne):
            raise ArithmeticError("inexact division")
        quo[ne] = q
        rem = _psub(rem, {tuple(u + v for u, v in zip(e, ne)): c * q for e, c in b.items()})
    return quo


def _bareiss(m, zero, exact_div):
    n = len(m)
    m = [list(row) for row in m]
    sign = 1
    prev = None
    for k in range(n - 1):
        if not m[k][k]:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return zero, 1
        pivot = m[k][k]
        for i in range(k + 1, n):
            a = m[i][k]
            for j in range(k + 1, n):
                val = m[i][j] * pivot - a * m[k][j] if a else m[i][j] * pivot
                m[i][j] = exact_div(val, prev) if prev is not None else val
            m[i][k] = zero
        prev = pivot
    return m[n - 1][n - 1], sign


class _DictPoly:
    """Minimal Z[x] element over exponent dicts; fallback entry ring."""

    __slots__ = ("d",)

    def __init__(self, d):
        self.d = d

    def __bool__(self):
        return bool(self.d)

    def __mul__(self, other):
        return _DictPoly(_pmul(self.d, other.d))

    def __sub__(self, other):
        return _DictPoly(_psub(self.d, other.d))


def _bareiss_python(matrix):
    rows = [[_DictPoly(e) for e in row] for row in matrix]
    det, sign = _bareiss(rows, _DictPoly({}), lambda a, b: _DictPoly(_pdiv_exact(a.d, b.d)))
    return {e: sign * c for e, c in det.d.items()}


def _bareiss_flint(matrix, nvars):
    ctx = flint.fmpz_mpoly_ctx.get(tuple(f"x{i + 1}" for i in range(nvars)), "lex")
    rows = [[ctx.from_dict(e) for e in row] for row in matrix]
    det, sign = _bareiss(rows, ctx.from_dict({}), lambda a, b: a / b)
    return {tuple(e): sign * int(c) for e, c in det.to_dict().items()}


def bareiss_det(matrix, backend=None):
    """Determinant of a square matrix of integer polynomial dicts.

    Entries map x-exponent tuples to ints.  The arithmetic runs in python-flint
    when it is installed (``backend="flint"``); ``backend="python"`` forces
    the pure dict implementation.
    """
    n = len(matrix)
    if n == 0:
        return {(): 1}
    if backend is None:
        backend = "flint" if flint is not None else "python"
    nvars = next((len(e) for row in matrix for entry in row for e in entry), 0)
    if backend == "flint" and nvars > 0:
        return _bareiss_flint(matrix, nvars)
    return _bareiss_python(matrix)


def sylvester_matrix(f: SparsePoly, g: SparsePoly):
    """Sylvester matrix (f rows first) with entries as x-polynomials."""
    fc = f.z_coefficients()
    gc = g.z_coefficients()
    m, n = len(fc) - 1, len(gc) - 1
    size = m + n
    zero = SparsePoly.zero(f.dim)
    rows = []
    for i in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[i + k] = fc[m - k]
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[i + k] = gc[n - k]
        rows.append(row)
    return rows


def sylvester_resultant(f: SparsePoly, g: SparsePoly, backend=None) -> SparsePoly:
    """res_z(f, g) as the Sylvester determinant, f rows first."""
    if f.dim != g.dim:
        raise DimensionMismatch(f"dimension mismatch: {f.dim} vs {g.dim}")
    d = f.dim
    if not f or not g:
        return SparsePoly.zero(d)
    m, n = f.z_degree(), g.z_degree()
    if m == 0 and n == 0:
        const = (0,) * (d + 1)
        if set(f.terms) == {const} and set(g.terms) == {const}:
            return SparsePoly.const(d, 1)
        raise PreconditionError("resultant of two z-free polynomials is undefined")
    if m == 0:
        return f ** n
    if n == 0:
        return g ** m
    # clear denominators so Bareiss runs over Z[x]
    lf, lg = f.denominator_lcm(), g.denominator_lcm()
    fi, gi = f.scale(lf), g.scale(lg)
    mat = sylvester_matrix(fi, gi)
    imat = [[{e[:-1]: int(c) for e, c in entry.terms.items()} for entry in row] for row in mat]
    det = bareiss_det(imat, backend)
    scale = Fraction(1, lf ** n * lg ** m)
    return SparsePoly._raw(d, {e + (0,): Fraction(c) * scale for e, c in det.items()})


# -- text format ----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(x)(\d+)|(z)|(.))")


class _Parser:
    def __init__(self, text, dim):
        self.text = text
        self.dim = dim
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m.group(0).strip() == "":
                break
            start = m.start(0) + (len(m.group(0)) - len(m.group(0).lstrip()))
            if m.group(1) is not None:
                self.tokens.append(("int", int(m.group(1)), start))
            elif m.group(2) is not None:
                self.tokens.append(("x", int(m.group(3)), start))
            elif m.group(4) is not None:
                self.tokens.append(("z", None, start))
            else:
                ch = m.group(5)
                if ch not in "+-*/^()":
                    raise ParseError(f"unexpected character {ch!r}", start)
                self.tokens.append((ch, None, start))
            pos = m.end(0)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", None, len(self.text))

    def take(self, kind=None):
        tok = self.peek()
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise ParseError("empty expression", 0)
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[0]!r}", tok[2])
        return e

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-" and self.peek()[0] != "end":
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term().scale(sign)
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self):
        base = self.base()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] == "-":
                raise ParseError("negative exponent", tok[2])
            k = self.take("int")[1]
            return base ** k
        return base

    def base(self):
        tok = self.peek()
        kind = tok[0]
        if kind == "z":
            self.take()
            return SparsePoly.z(self.dim)
        if kind == "x":
            self.take()
            idx = tok[1]
            if idx < 1 or idx > self.dim:
                raise ParseError(f"unknown variable x{idx} (dimension {self.dim})", tok[2])
            return SparsePoly.x(self.dim, idx - 1)
        if kind == "int":
            self.take()
            num = tok[1]
            # a '/' directly after an integer literal belongs to the rational literal
            if self.peek()[0] == "/":
                self.take()
                den_tok = self.take("int")
                if den_tok[1] == 0:
                    raise ParseError("zero denominator", den_tok[2])
                return SparsePoly.const(self.dim, Fraction(num, den_tok[1]))
            return SparsePoly.const(self.dim, num)
        if kind == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        raise ParseError(f"unexpected token {kind!r}", tok[2])


def parse_poly(text: str, dim: int) -> SparsePoly:
    if dim < 1:
        raise ParseError("dimension must be at least 1")
    return _Parser(text, dim).parse()


def _monomial_text(e):
    parts = []
    for i, a in enumerate(e[:-1]):
        if a:
            parts.append(f"x{i + 1}" if a == 1 else f"x{i + 1}^{a}")
    b = e[-1]
    if b:
        parts.append("z" if b == 1 else f"z^{b}")
    return "*".join(parts)


def to_text(f: SparsePoly) -> str:
    """Canonical printer; the output re-parses to the same polynomial."""
    if not f:
        return "0"
    chunks = []
    for e, c in f:
        mono = _monomial_text(e)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not chunks:
            chunks.append(("-" if c < 0 else "") + body)
        else:
            chunks.append((" - " if c < 0 else " + ") + body)
    return "".join(chunks)


def univariate_in_z(f: SparsePoly) -> list:
    """Coefficients (low to high) of a polynomial with no x-dependence."""
    out = [Fraction(0)] * (f.z_degree() + 1)
    for e, c in f.terms.items():
        if any(e[:-1]):
            raise PreconditionError("polynomial depends on x")
        out[e[-1]] = c
    return out
