"""Transversal sections of Newton trees and reconstruction from curve sections.

Section trees are produced combinatorially.  Prime decorations R travel from
the tree of f to the section (dropping a coordinate and making the pair
coprime); vertical data of the section are then recovered from R along the
section's own preceding-vertex chains.
"""

from __future__ import annotations

import json
import random
import sys
from contextlib import contextmanager
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Optional

from .errors import (
    BlackBoxPresent,
    InconsistentSections,
    InternalInconsistency,
    NonRationalRoots,
    PreconditionError,
    RetryBudgetExceeded,
    UnsupportedMultiArrow,
)
from .polyring import SparsePoly, shift_z
from .tree import (
    ARROW,
    End,
    Line,
    NewtonTree,
    Vertex,
    OPAQUE,
    build_tree,
    build_tree_of_parts,
    canonical_json,
    from_json_obj,
    to_json_obj,
)


# -- intermediate section structure -------------------------------------------------

@dataclass
class _SV:
    R: tuple
    p: int
    children: list = field(default_factory=list)  # _SL or End


@dataclass
class _SL:
    vertices: list
    bottom: End


def _drop(vec, i):
    return tuple(vec[:i]) + tuple(vec[i + 1:])


def _section_entry(tree: NewtonTree, entry, i):
    """Fragments (each an End or a _SL) of a child entry, with multiplicities."""
    if isinstance(entry, End):
        if entry.kind != ARROW:
            raise BlackBoxPresent("sections are defined for trees without black boxes")
        return [(End(ARROW, entry.decoration, "horizontal"), 1)]
    return _section_line(tree, entry[1], i)


def _section_line(tree: NewtonTree, lid, i):
    line = tree.lines[lid]
    if line.bottom.kind != ARROW:
        raise BlackBoxPresent("sections are defined for trees without black boxes")
    dec = tree.decorations()
    frags = []
    verts = list(line.vertices)
    h = 0
    while h < len(verts) and not any(_drop(tree.vertices[verts[h]].q, i)):
        h += 1
    # bunches: factors based away from z = 0
    for vid in verts[:h]:
        pv = tree.vertices[vid].p
        for ch in tree.vertices[vid].children:
            for frag, cnt in _section_entry(tree, ch, i):
                frags.append((frag, cnt * pv))
    rest = verts[h:]
    if not rest:
        if line.bottom.decoration > 0:
            frags.append((End(ARROW, line.bottom.decoration, "horizontal"), 1))
        return frags
    svs = []
    for vid in rest:
        v = tree.vertices[vid]
        R = _drop(dec[vid].R, i)
        g = gcd(v.p, *R)
        sv = _SV(tuple(r // g for r in R), v.p // g)
        for ch in v.children:
            for frag, cnt in _section_entry(tree, ch, i):
                sv.children.extend([frag] * (cnt * g))
        if svs and svs[-1].R == sv.R and svs[-1].p == sv.p:
            svs[-1].children.extend(sv.children)
        else:
            svs.append(sv)
    frags.append((_SL(svs, End(ARROW, line.bottom.decoration, "bottom")), 1))
    return frags


def _materialize(frag, dim, top) -> NewtonTree:
    """Turn a root fragment into a NewtonTree, recovering q from R."""
    t = NewtonTree(dim, top)
    if isinstance(frag, End):
        t.root = End(ARROW, frag.decoration, "bottom")
        return t
    counters = {"v": 1, "l": 1}
    Rof = {}

    def add_line(sl: _SL, parent):
        lid = counters["l"]
        counters["l"] += 1
        line = Line(lid, [], parent, End(sl.bottom.kind, sl.bottom.decoration, "bottom"))
        t.lines[lid] = line
        for sv in sl.vertices:
            vid = counters["v"]
            counters["v"] += 1
            if parent is None:
                q = sv.R
            else:
                Rw, pw = Rof[parent], t.vertices[parent].p
                q = []
                for r, rw in zip(sv.R, Rw):
                    num = sv.p * rw * pw
                    den = gcd(rw, pw) ** 2
                    if num % den:
                        raise InternalInconsistency("prime decorations do not invert to integers")
                    q.append(r - num // den)
                q = tuple(q)
                if min(q, default=0) < 0:
                    raise InternalInconsistency("transported prime decorations give a negative slope")
            v = Vertex(vid, lid, q, sv.p)
            t.vertices[vid] = v
            line.vertices.append(vid)
            Rof[vid] = sv.R
            for ch in sv.children:
                if isinstance(ch, End):
                    v.children.append(End(ch.kind, ch.decoration, "horizontal"))
                else:
                    v.children.append(("line", add_line(ch, vid)))
        return lid

    t.root = ("line", add_line(frag, None))
    dec = t.decorations()
    for vid, R in Rof.items():
        if dec[vid].R != R:
            raise InternalInconsistency("section decorations are not self-consistent")
    return t


@dataclass
class SectionForest:
    variable: int  # 0-based index of the coordinate treated as a constant
    entries: list  # [(NewtonTree, count)]

    def to_json_obj(self):
        return {
            "variable": self.variable + 1,
            "entries": [{"count": c, "tree": to_json_obj(t, include_shifts=False)} for t, c in self.entries],
        }

    def to_json(self):
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj):
        return cls(obj["variable"] - 1, [(from_json_obj(e["tree"]), e["count"]) for e in obj["entries"]])

    def _merged(self):
        acc = {}
        trees = {}
        for t, c in self.entries:
            key = canonical_json(t)
            acc[key] = acc.get(key, 0) + c
            trees[key] = t
        return [(trees[k], acc[k]) for k in acc]

    def canonical(self):
        return sorted((canonical_json(t), c) for t, c in self._merged())

    def total(self):
        return sum(c for _, c in self.entries)


def _group(trees_with_counts):
    acc = {}
    order = []
    for t, c in trees_with_counts:
        key = canonical_json(t)
        if key not in acc:
            acc[key] = [t, 0]
            order.append(key)
        acc[key][1] += c
    return [(acc[k][0], acc[k][1]) for k in sorted(order)]


def section_forest(t: NewtonTree, i: int) -> SectionForest:
    """Forest of the section in which x_{i+1} is a generic constant."""
    if t.dim < 2:
        raise PreconditionError("sections need at least two x-variables")
    if not 0 <= i < t.dim:
        raise PreconditionError(f"variable index {i + 1} out of range")
    if t.has_black_box():
        raise BlackBoxPresent("sections are defined for trees without black boxes")
    top = _drop(t.top, i)
    if isinstance(t.root, End):
        frags = [(End(ARROW, t.root.decoration, "bottom"), 1)]
    else:
        frags = _section_line(t, t.root_line, i)
    out = []
    for frag, cnt in frags:
        # only the z = 0 remnant keeps the top arrow
        keeps_top = isinstance(frag, _SL) or (isinstance(frag, End) and cnt == 1 and len(frags) == 1)
        out.append((_materialize(frag, t.dim - 1, top if keeps_top else (0,) * (t.dim - 1)), cnt))
    return SectionForest(i, _group(out))


def section_of_forest(forest: SectionForest, i: int, variable_label=None) -> SectionForest:
    acc = []
    for t, c in forest.entries:
        sub = section_forest(t, i)
        acc.extend((s, c * k) for s, k in sub.entries)
    return SectionForest(variable_label if variable_label is not None else i, _group(acc))


def curve_sections(t: NewtonTree):
    """For each j, the forest of curve trees keeping only x_{j+1}."""
    out = []
    for j in range(t.dim):
        forest = SectionForest(-1, [(t, 1)])
        for i in range(t.dim - 1, -1, -1):
            if i != j:
                forest = section_of_forest(forest, i)
        out.append(SectionForest(j, forest.entries))
    return out


# -- reconstruction -------------------------------------------------------------------------

def _subtree_key(tree: NewtonTree, entry):
    """Structural key of a child entry including its transported decorations."""
    if isinstance(entry, End):
        return json.dumps(["end", entry.kind, entry.decoration])
    dec = tree.decorations()
    line = tree.lines[entry[1]]
    parts = []
    for vid in line.vertices:
        v = tree.vertices[vid]
        kids = sorted(_subtree_key(tree, ch) for ch in v.children)
        parts.append([list(dec[vid].R), v.p, kids])
    return json.dumps(["line", parts, line.bottom.kind, line.bottom.decoration])


@dataclass
class _Item:
    tree: NewtonTree
    entry: object  # End or ("line", id)


def _bunch(items_with_counts):
    """Check that a bunch consists of identical items; return (item, total count)."""
    keys = {_subtree_key(it.tree, it.entry) for it, _ in items_with_counts}
    if len(keys) != 1:
        raise UnsupportedMultiArrow("a bunch of section trees is not made of identical trees")
    return items_with_counts[0][0], sum(c for _, c in items_with_counts)


def _root_item(t: NewtonTree):
    return _Item(t, t.root)


def reconstruct(forests) -> NewtonTree:
    """Rebuild the tree of f from its curve sections (one non-dead arrow only)."""
    forests = sorted(forests, key=lambda fo: fo.variable)
    d = len(forests)
    if d < 1:
        raise PreconditionError("no sections given")
    for fo in forests:
        for t, _ in fo.entries:
            if t.dim != 1:
                raise PreconditionError("reconstruction expects curve sections")
            if t.has_black_box():
                raise BlackBoxPresent("sections contain a black box")
    if [fo.variable for fo in forests] != list(range(d)):
        raise InconsistentSections("need exactly one curve section per variable")
    top = []
    for fo in forests:
        singles = [t for t, c in fo.entries if c == 1 and len(fo.entries) == 1]
        top.append(singles[0].top[0] if singles else 0)
    state = []
    for fo in forests:
        state.append(_bunch([(_root_item(t), c) for t, c in fo.entries]))
    chain = []  # [(q, p)]
    R_prev = None
    p_prev = None
    final = None
    while True:
        items = [it for it, _ in state]
        counts = [n for _, n in state]
        all_ends = all(isinstance(it.entry, End) for it in items)
        if all_ends and all(n == 1 for n in counts):
            decos = {it.entry.decoration for it in items}
            if len(decos) != 1:
                raise InconsistentSections("sections end with different arrow decorations")
            final = decos.pop()
            break
        J = [j for j in range(d) if counts[j] == 1 and not isinstance(items[j].entry, End)]
        if not J:
            raise UnsupportedMultiArrow("the sections do not come from a tree with a single non-dead arrow")
        firsts = {}
        for j in J:
            it = items[j]
            line = it.tree.lines[it.entry[1]]
            if len(line.vertices) != 1 or line.bottom.decoration != 0:
                raise UnsupportedMultiArrow("section line is not a single-vertex chain link")
            firsts[j] = line.vertices[0]
        p = lcm(*(items[j].tree.vertices[firsts[j]].p for j in J))
        R = [0] * d
        for j in J:
            it = items[j]
            u = firsts[j]
            pt = it.tree.vertices[u].p
            if p % pt:
                raise InconsistentSections("section p does not divide the combined p")
            R[j] = it.tree.decoration(u).R[0] * (p // pt)
        q = []
        for j in range(d):
            if R_prev is None:
                base = 0
            else:
                base = p * R_prev[j] * p_prev // gcd(R_prev[j], p_prev) ** 2
            if j in firsts:
                qj = R[j] - base
            else:
                qj = 0
                R[j] = base
            if qj < 0:
                raise InconsistentSections("sections imply a negative slope")
            q.append(qj)
        if gcd(p, *q) != 1:
            raise InconsistentSections("recovered vertex data are not coprime")
        chain.append((tuple(q), p))
        new_state = []
        for j in range(d):
            it, n = state[j]
            if j in firsts:
                c = p // it.tree.vertices[firsts[j]].p
                kids = it.tree.vertices[firsts[j]].children
                if len(kids) % c:
                    raise InconsistentSections("horizontal edges are not a multiple of the gcd")
                item, total = _bunch([(_Item(it.tree, ch), 1) for ch in kids])
                new_state.append((item, total // c))
            else:
                if n % p:
                    raise InconsistentSections("bunch size is not a multiple of p")
                new_state.append((it, n // p))
        state = new_state
        R_prev, p_prev = tuple(R), p
    tree = _chain_tree(d, tuple(top), chain, final)
    check = curve_sections(tree)
    for a, b in zip(check, forests):
        if a.canonical() != b.canonical():
            raise InconsistentSections("the rebuilt tree does not reproduce the given sections")
    return tree


def _chain_tree(dim, top, chain, final) -> NewtonTree:
    t = NewtonTree(dim, top)
    if not chain:
        t.root = End(ARROW, final, "bottom")
        return t
    parent = None
    for k, (q, p) in enumerate(chain, start=1):
        t.lines[k] = Line(k, [k], parent, End(ARROW, 0, "bottom"))
        t.vertices[k] = Vertex(k, k, q, p)
        if parent is None:
            t.root = ("line", k)
        else:
            t.vertices[parent].children.append(("line", k))
        parent = k
    t.vertices[parent].children.append(End(ARROW, final, "horizontal"))
    t.decorations()
    return t


# -- numeric cross-check ----------------------------------------------------------------------

def _rational_roots_at_origin(g: SparsePoly):
    """Factor g(0, z) over Q: rational roots with multiplicity and the other factors."""
    from .diagram import rational_factorization

    coeffs = [Fraction(0)] * (g.z_degree() + 1)
    zero = (0,) * g.dim
    for e, c in g.terms.items():
        if e[:-1] == zero:
            coeffs[e[-1]] = c
    _, roots, residual = rational_factorization(coeffs)
    return roots, residual


@dataclass
class CrosscheckResult:
    ok: bool
    L: int
    detail: str = ""


def section_crosscheck(f: SparsePoly, i: int, seed=0, retries=3, budget=None, max_depth=None) -> CrosscheckResult:
    """Compare the combinatorial section with trees of an actual specialization."""
    from .pgood import to_pgood

    if f.dim < 2:
        raise PreconditionError("sections need at least two x-variables")
    rng = random.Random(seed)
    tree = to_pgood(build_tree(f, budget, max_depth))
    predicted = SectionForest(i, [(to_pgood(t), c) for t, c in section_forest(tree, i).entries])
    predicted = SectionForest(i, _group(predicted.entries))
    base_L = _root_exponent(tree)
    for attempt in range(retries):
        L = base_L * (attempt + 1)
        r = Fraction(rng.choice([2, 3, 5]), 1)
        g = f.specialize(i, r ** L)
        try:
            with _big_ints():
                found, unresolved = _direct_forest(g, budget, max_depth)
        except NonRationalRoots:
            continue
        pool = [t for t, c in predicted.entries for _ in range(c)]
        used = _assign(found, pool)
        if used is None:
            return CrosscheckResult(False, L, "a directly computed tree is missing from the section")
        # what is left must be accounted for by irrational points with matching orders
        left = Counter(_tree_order(t) for k, t in enumerate(pool) if k not in used)
        if left != unresolved:
            return CrosscheckResult(False, L, f"unmatched orders {dict(left)} vs {dict(unresolved)}")
        return CrosscheckResult(True, L)
    raise RetryBudgetExceeded(f"no rational specialization found after {retries} attempts")


def _root_exponent(tree: NewtonTree) -> int:
    """lcm over vertices of the product of p along their chains."""
    L = 1
    for vid in tree.iter_vertices():
        prod = 1
        for w in tree.chain(vid):
            prod *= tree.vertices[w].p
        L = lcm(L, prod)
    return L


@contextmanager
def _big_ints():
    get = getattr(sys, "get_int_max_str_digits", None)
    if get is None:
        yield
        return
    old = get()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)


def _tree_order(t: NewtonTree):
    return t.child_order(t.root)


def _entry_matches(pt, pe, dt, de):
    """Does the predicted entry match the direct one; opaque ends match any subtree of their order."""
    if isinstance(de, End) and de.kind == OPAQUE:
        return pt.child_order(pe) == de.decoration
    if isinstance(pe, End) or isinstance(de, End):
        return (
            isinstance(pe, End)
            and isinstance(de, End)
            and (pe.kind, pe.decoration) == (de.kind, de.decoration)
        )
    pl, dl = pt.lines[pe[1]], dt.lines[de[1]]
    if len(pl.vertices) != len(dl.vertices):
        return False
    if (pl.bottom.kind, pl.bottom.decoration) != (dl.bottom.kind, dl.bottom.decoration):
        return False
    for pv, dv in zip(pl.vertices, dl.vertices):
        a, b = pt.vertices[pv], dt.vertices[dv]
        if (a.q, a.p) != (b.q, b.p) or len(a.children) != len(b.children):
            return False
        if not _match_children(pt, a.children, dt, b.children):
            return False
    return True


def _match_children(pt, pkids, dt, dkids):
    def go(k, free):
        if k == len(dkids):
            return True
        for j in list(free):
            if _entry_matches(pt, pkids[j], dt, dkids[k]):
                free.remove(j)
                if go(k + 1, free):
                    return True
                free.add(j)
        return False

    return go(0, set(range(len(pkids))))


def _tree_matches(pt: NewtonTree, dt: NewtonTree):
    return pt.top == dt.top and _entry_matches(pt, pt.root, dt, dt.root)


def _assign(found, pool):
    """Injectively match direct trees to predicted ones; return the used indices."""
    used = set()

    def go(k):
        if k == len(found):
            return True
        for j, t in enumerate(pool):
            if j not in used and _tree_matches(t, found[k]):
                used.add(j)
                if go(k + 1):
                    return True
                used.discard(j)
        return False

    return used if go(0) else None


def _direct_forest(g: SparsePoly, budget, max_depth):
    """Trees of g at each rational root of g(0, z); orders of the other roots."""
    from .pgood import to_pgood

    roots, residual = _rational_roots_at_origin(g)
    found = []
    for mu, m in roots:
        shifted = shift_z(g, SparsePoly.const(g.dim, mu)) if mu else g
        found.append(to_pgood(build_tree_of_parts([shifted], budget, max_depth, opaque=True)))
    unresolved = Counter()
    for coeffs, m in residual:
        unresolved[m] += len(coeffs) - 1
    return found, unresolved
