"""Colored trees, resultant and discriminant exponents, quasi-ordinarity."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .diagram import PathStep
from .errors import BlackBoxPresent, InternalInconsistency, NotPGood, NotSeparated, PreconditionError
from .pgood import is_pgood, to_pgood
from .polyring import SparsePoly, monomial_unit_split, partial_z, sylvester_resultant
from .tree import ARROW, BLACKBOX, End, NewtonTree, build_tree, build_tree_of_parts, primed_N
from .univariate import poly_degree, poly_exact_div, poly_gcd

BLUE = "blue"
RED = "red"
BOTH = "both"


def _color(orders):
    f_ord, g_ord = orders
    if f_ord and g_ord:
        return BOTH
    if f_ord:
        return BLUE
    if g_ord:
        return RED
    return None


@dataclass
class ColoredTree:
    tree: NewtonTree
    f: SparsePoly
    g: SparsePoly

    def line_color(self, lid):
        f_ord, g_ord = self.tree.lines[lid].part_orders
        if g_ord == 0:
            return BLUE
        if f_ord == 0:
            return RED
        return BOTH

    def end_color(self, end: End):
        return _color(end.part_orders)

    def colored_ends(self):
        return [(e, v, self.end_color(e)) for e, v in self.tree.ends() if not e.dead]

    def horizontal_colors(self, vid):
        """Colors of the horizontal edges leaving ``vid``, in child order."""
        out = []
        for ch in self.tree.vertices[vid].children:
            if isinstance(ch, End):
                out.append(self.end_color(ch))
            else:
                out.append(self.line_color(ch[1]))
        return out


def build_colored_tree(f: SparsePoly, g: SparsePoly, budget=None, max_depth=None) -> ColoredTree:
    return ColoredTree(build_tree_of_parts([f, g], budget, max_depth), f, g)


def is_separated(ct: ColoredTree) -> bool:
    return all(color in (BLUE, RED) for _, _, color in ct.colored_ends())


def _part_face(part: SparsePoly, step: PathStep):
    vals = {e: step.value(e) for e in part.terms}
    mins = tuple(min(v[k] for v in vals.values()) for k in range(part.dim))
    pts = [e for e, v in vals.items() if v == mins]
    lo = min(e[-1] for e in pts)
    coeffs = [Fraction(0)] * ((max(e[-1] for e in pts) - lo) // step.p + 1)
    for e in pts:
        coeffs[(e[-1] - lo) // step.p] = part.terms[e]
    return coeffs


def _separation_from_faces(f_hat, g_hat, p):
    common = poly_gcd(f_hat, g_hat)
    return p * poly_degree(poly_exact_div(f_hat, common))


def separation_order(f: SparsePoly, g: SparsePoly, step: PathStep) -> int:
    """z-degree of f^ / gcd(f^, g^) for the faces of f and g along ``step``."""
    f_hat = _part_face(f, step)
    g_hat = _part_face(g, step)
    if poly_degree(f_hat) < 1 or poly_degree(g_hat) < 1:
        raise PreconditionError("the edge is not common to f and g")
    return _separation_from_faces(f_hat, g_hat, step.p)


def separation_order_at(ct: ColoredTree, vid) -> int:
    f_hat, g_hat = ct.tree.vertices[vid].part_faces
    return _separation_from_faces(list(f_hat), list(g_hat), ct.tree.vertices[vid].p)


# -- the path rule ---------------------------------------------------------------

def _adjacency(tree: NewtonTree):
    """Incident edges of every vertex as (edge key, near-vertex decoration)."""
    dec = tree.decorations()
    adj = {v: [] for v in tree.iter_vertices()}
    one = (1,) * tree.dim
    for lid in tree.iter_lines():
        line = tree.lines[lid]
        first = line.vertices[0]
        up_key = ("top",) if line.parent is None else ("h", line.parent, first)
        adj[first].append((up_key, dec[first].Q))
        if line.parent is not None:
            adj[line.parent].append((up_key, one))
        for a, b in zip(line.vertices, line.vertices[1:]):
            key = ("v", a, b)
            adj[a].append((key, (tree.vertices[a].p,) * tree.dim))
            adj[b].append((key, dec[b].Q))
        last = line.vertices[-1]
        adj[last].append((("end", id(line.bottom)), (tree.vertices[last].p,) * tree.dim))
        for vid in line.vertices:
            for ch in tree.vertices[vid].children:
                if isinstance(ch, End):
                    adj[vid].append((("end", id(ch)), one))
    return adj


def _neighbors(adj, key, vid):
    tag = key[0]
    if tag == "v" or tag == "h":
        return key[2] if key[1] == vid else key[1]
    return None


def _path(tree: NewtonTree, adj, start_vid, start_key, end_key):
    """Vertex path from the vertex of the first end to the one of the second."""
    target = None
    for v, edges in adj.items():
        if any(k == end_key for k, _ in edges):
            target = v
    prev = {start_vid: None}
    queue = [start_vid]
    while queue:
        v = queue.pop(0)
        if v == target:
            break
        for key, _ in adj[v]:
            w = _neighbors(adj, key, v)
            if w is not None and w not in prev:
                prev[w] = (v, key)
                queue.append(w)
    verts = [target]
    keys = []
    while prev[verts[-1]] is not None:
        v, key = prev[verts[-1]]
        keys.append(key)
        verts.append(v)
    verts.reverse()
    keys.reverse()
    return verts, keys


def resultant_exponent(ct: ColoredTree) -> tuple:
    tree = ct.tree
    if not is_separated(ct):
        raise NotSeparated("the colored tree has a bicolored non-dead end")
    ends = ct.colored_ends()
    blue = [(e, v) for e, v, c in ends if c == BLUE]
    red = [(e, v) for e, v, c in ends if c == RED]
    if len(blue) != 1 or len(red) != 1:
        raise PreconditionError(
            f"each factor needs exactly one non-dead end (blue: {len(blue)}, red: {len(red)})"
        )
    (be, bv), (re_, rv) = blue[0], red[0]
    if bv is None or rv is None:
        raise PreconditionError("the product tree has no vertex")
    adj = _adjacency(tree)
    bkey, rkey = ("end", id(be)), ("end", id(re_))
    verts, keys = _path(tree, adj, bv, bkey, rkey)
    on_path = set(keys) | {bkey, rkey}
    out = [be.decoration * re_.decoration] * tree.dim
    for v in verts:
        for key, val in adj[v]:
            if key not in on_path:
                out = [a * b for a, b in zip(out, val)]
    # the vertex where the path turns is the one closest to the root
    sep = min(verts, key=lambda v: (len(tree.chain(v)), tree.lines[tree.vertices[v].line].vertices.index(v)))
    dec = tree.decorations()
    for w in tree.chain(sep)[:-1]:
        out = [a * b for a, b in zip(out, dec[w].c)]
    return tuple(out)


# -- quasi-ordinarity ---------------------------------------------------------------

@dataclass
class QOVerdict:
    qo: bool
    reason: str = ""
    tree: Optional[NewtonTree] = None


def qo_by_tree_report(f: SparsePoly, budget=None, max_depth=None) -> QOVerdict:
    t = build_tree(f, budget, max_depth)
    for e, v in t.ends():
        if e.kind == BLACKBOX:
            level = 0 if v is None else len(t.chain(v)) - (1 if e.orientation == "bottom" else 0)
            return QOVerdict(False, f"black box at depth {level}", t)
    tp = to_pgood(t)
    bad = [e.decoration for e, _ in tp.ends() if e.decoration not in (0, 1)]
    if bad:
        return QOVerdict(False, f"arrow decorated ({max(bad)})", tp)
    return QOVerdict(True, "", tp)


def qo_by_tree(f: SparsePoly, budget=None, max_depth=None) -> bool:
    return qo_by_tree_report(f, budget, max_depth).qo


@dataclass
class OracleVerdict:
    qo: bool
    exponent: Optional[tuple] = None
    non_reduced: bool = False
    discriminant: Optional[SparsePoly] = None


def qo_oracle(f: SparsePoly) -> OracleVerdict:
    if f.z_degree() < 1:
        raise PreconditionError("the oracle needs positive z-degree")
    delta = sylvester_resultant(f, partial_z(f))
    if not delta:
        return OracleVerdict(False, None, True, delta)
    D = monomial_unit_split(delta)
    return OracleVerdict(D is not None, D, False, delta)


def oracle_resultant_exponent(f: SparsePoly, g: SparsePoly):
    r = sylvester_resultant(f, g)
    if not r:
        return None
    return monomial_unit_split(r)


# -- discriminant ---------------------------------------------------------------------

def discriminant_exponent(t: NewtonTree) -> tuple:
    if t.has_black_box():
        raise BlackBoxPresent("the discriminant formula needs a tree without black boxes")
    if not is_pgood(t):
        raise NotPGood("the discriminant formula is stated for P-good trees")
    if any(t.top):
        raise PreconditionError("the formula is stated for polynomials without monomial content")
    if any(e.decoration > 1 for e, _ in t.ends()):
        raise PreconditionError("the tree is not the tree of a quasi-ordinary polynomial")
    if t.root_line is None:
        return (0,) * t.dim
    total = [0] * t.dim
    for vid in t.iter_vertices():
        Np = primed_N(t, vid)
        k = t.valency(vid) - 2
        total = [a + k * n for a, n in zip(total, Np)]
        if t.is_leaf(vid):
            p = t.vertices[vid].p
            if any(n % p for n in Np):
                raise InternalInconsistency(f"N' of leaf vertex {vid} is not divisible by p")
            total = [a - n // p for a, n in zip(total, Np)]
    return tuple(total)


def discriminant_of(f: SparsePoly, budget=None, max_depth=None) -> tuple:
    """Formula exponent for f, going through its P-good tree."""
    return discriminant_exponent(to_pgood(build_tree(f, budget, max_depth)))


# -- polar separation -------------------------------------------------------------------

@dataclass
class PolarVertexReport:
    vertex: int
    leaf: bool
    k: int
    p: int
    order: int
    expected: Optional[int]
    d1_ok: Optional[bool]

    @property
    def ok(self):
        if self.leaf:
            return None
        return self.order == self.expected and bool(self.d1_ok)


@dataclass
class PolarReport:
    vertices: list = field(default_factory=list)
    leaf_total: int = 0

    @property
    def ok(self):
        return all(r.ok is not False for r in self.vertices)


def polar_separation_report(f: SparsePoly, budget=None, max_depth=None) -> PolarReport:
    if not qo_by_tree(f, budget, max_depth):
        raise PreconditionError("the polar report needs a quasi-ordinary polynomial")
    ct = build_colored_tree(f, partial_z(f), budget, max_depth)
    t = ct.tree
    report = PolarReport()
    for lid in t.iter_lines():
        if ct.line_color(lid) == RED:
            continue
        line = t.lines[lid]
        f_vertices = [v for v in line.vertices if poly_degree(list(t.vertices[v].part_faces[0])) >= 1]
        for i, vid in enumerate(f_vertices):
            v = t.vertices[vid]
            f_hat = list(v.part_faces[0])
            k = len(_distinct_roots(f_hat))
            leaf = vid == f_vertices[-1] and line.bottom.part_orders[0] == 0
            order = separation_order_at(ct, vid)
            d1 = None
            if not leaf:
                # no polar-only vertex may sit on the edge below a non-leaf vertex
                lo = line.vertices.index(vid)
                hi = line.vertices.index(f_vertices[i + 1]) if i + 1 < len(f_vertices) else len(line.vertices)
                d1 = hi == lo + 1
                report.vertices.append(PolarVertexReport(vid, False, k, v.p, order, k * v.p, d1))
            else:
                report.leaf_total += order
                report.vertices.append(PolarVertexReport(vid, True, k, v.p, order, None, None))
    return report


def _distinct_roots(coeffs):
    from .diagram import rational_factorization

    _, roots, residual = rational_factorization(coeffs)
    return [mu for mu, _ in roots] + [tuple(r) for r, _ in residual]
