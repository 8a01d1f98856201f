"""Decorated Newton trees: construction, decorations and rendering.

A tree stores only what the Newton process decides: for every vertex its
vertical data ``(q, p)``, how vertices sit on vertical lines, which vertex a
line hangs from, and the ends.  All numerical decorations (vertical N, Q, R,
gcds, accumulated exponents, global N) are derived from that structure.
"""

from __future__ import annotations

import copy
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Callable, Optional

from .diagram import (
    DEFAULT_BUDGET,
    PathStep,
    ensure_suitable,
    polygonal_path,
    rational_factorization,
)
from .errors import (
    InternalInconsistency,
    MaxDepthExceeded,
    NotPGood,
    NTreeError,
    PreconditionError,
)
from .polyring import (
    SparsePoly,
    content_and_order,
    regular_order,
    shift_z,
    shift_z_trunc,
    to_text,
    x_content,
)
from .process import apply_map_to_part, newton_map

DEFAULT_MAX_DEPTH = 32

ARROW = "arrow"
BLACKBOX = "blackbox"
OPAQUE = "opaque"  # subtree at an irrational root, known only by its order


def default_budget():
    return int(os.environ.get("NTREE_ELIM_BUDGET", DEFAULT_BUDGET))


def default_max_depth():
    return int(os.environ.get("NTREE_MAX_DEPTH", DEFAULT_MAX_DEPTH))


@dataclass
class End:
    kind: str
    decoration: int
    orientation: str  # "bottom" | "horizontal"
    part_orders: Optional[tuple] = None

    @property
    def dead(self):
        return self.decoration == 0


@dataclass
class Vertex:
    id: int
    line: int
    q: tuple
    p: int
    children: list = field(default_factory=list)  # ("line", id) or End
    part_faces: Optional[tuple] = None


@dataclass
class Line:
    id: int
    vertices: list
    parent: Optional[int]
    bottom: End
    part_orders: Optional[tuple] = None


@dataclass(frozen=True)
class Decoration:
    verticalN: tuple
    Q: tuple
    R: tuple
    c: tuple
    accExp: tuple
    globalN: tuple


def _vmul(a, b):
    return tuple(x * y for x, y in zip(a, b))


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


class NewtonTree:
    def __init__(self, dim, top):
        self.dim = dim
        self.top = tuple(top)
        self.root = None  # ("line", id) or End for Cases 1 and 2
        self.lines = {}
        self.vertices = {}
        self.shifts = []
        self.colored = False
        self.built = {}  # values measured during construction, for cross-checks
        self._decor = None

    # -- structure ------------------------------------------------------
    def copy(self):
        t = copy.deepcopy(self)
        t._decor = None
        return t

    def invalidate(self):
        self._decor = None

    @property
    def root_line(self):
        return self.root[1] if isinstance(self.root, tuple) else None

    def pred(self, vid):
        return self.lines[self.vertices[vid].line].parent

    def chain(self, vid):
        """Preceding-vertex chain [v_i, ..., v_1, v]."""
        out = [vid]
        w = self.pred(vid)
        while w is not None:
            out.append(w)
            w = self.pred(w)
        return out[::-1]

    def child_order(self, entry):
        if isinstance(entry, End):
            return entry.decoration
        return self.line_order(entry[1])

    def vertex_multiplicity(self, vid):
        return sum(self.child_order(ch) for ch in self.vertices[vid].children)

    def line_order(self, lid):
        line = self.lines[lid]
        total = line.bottom.decoration
        for vid in line.vertices:
            total += self.vertices[vid].p * self.vertex_multiplicity(vid)
        return total

    def valency(self, vid):
        return 2 + len(self.vertices[vid].children)

    def is_bottom(self, vid):
        return self.lines[self.vertices[vid].line].vertices[-1] == vid

    def is_leaf(self, vid):
        line = self.lines[self.vertices[vid].line]
        return line.vertices[-1] == vid and line.bottom.kind == ARROW and line.bottom.decoration == 0

    def line_of_top(self, vid):
        line = self.lines[self.vertices[vid].line]
        return line.vertices[0] == vid

    def iter_lines(self):
        """Lines in depth-first order from the root line."""
        if self.root_line is None:
            return
        stack = [self.root_line]
        while stack:
            lid = stack.pop()
            yield lid
            kids = []
            for vid in self.lines[lid].vertices:
                for ch in self.vertices[vid].children:
                    if not isinstance(ch, End):
                        kids.append(ch[1])
            stack.extend(reversed(kids))

    def iter_vertices(self):
        for lid in self.iter_lines():
            yield from self.lines[lid].vertices

    def ends(self):
        """All non-top ends as (End, vertex id or None)."""
        if isinstance(self.root, End):
            yield self.root, None
            return
        for lid in self.iter_lines():
            line = self.lines[lid]
            for vid in line.vertices:
                for ch in self.vertices[vid].children:
                    if isinstance(ch, End):
                        yield ch, vid
            yield line.bottom, line.vertices[-1]

    def has_black_box(self):
        return any(e.kind == BLACKBOX for e, _ in self.ends())

    def non_dead_ends(self):
        return [(e, v) for e, v in self.ends() if not e.dead]

    # -- decorations ----------------------------------------------------
    def decorations(self):
        if self._decor is None:
            self._decor = compute_decorations(self)
        return self._decor

    def decoration(self, vid) -> Decoration:
        return self.decorations()[vid]


def _vertical_N(tree: NewtonTree):
    out = {}
    for lid in tree.iter_lines():
        line = tree.lines[lid]
        alpha = tree.top if line.parent is None else (0,) * tree.dim
        beta = tree.line_order(lid)
        for vid in line.vertices:
            v = tree.vertices[vid]
            out[vid] = tuple(v.p * a + qk * beta for a, qk in zip(alpha, v.q))
            mult = tree.vertex_multiplicity(vid)
            alpha = tuple(a + qk * mult for a, qk in zip(alpha, v.q))
            beta -= v.p * mult
        if beta != line.bottom.decoration:
            raise InternalInconsistency("vertical line orders do not add up")
    return out


def closed_form_Q(tree: NewtonTree, chain):
    """Local data of the last vertex of ``chain`` by the closed formula."""
    v0 = tree.vertices[chain[-1]]
    if len(chain) == 1:
        return tuple(v0.q)
    top = tree.vertices[chain[0]]
    sub = chain[1:]
    inner = [closed_form_Q(tree, sub[: j + 1]) for j in range(len(sub))]
    out = []
    for k in range(tree.dim):
        num = top.p * top.q[k] * v0.p
        den = gcd(top.p, top.q[k])
        for j, w in enumerate(sub[:-1]):
            pw = tree.vertices[w].p
            num *= pw * pw
            den *= gcd(pw, inner[j][k])
        if num % den:
            raise InternalInconsistency("closed form for Q is not integral")
        out.append(num // den + inner[-1][k])
    return tuple(out)


def compute_decorations(tree: NewtonTree, check=True):
    """Derive every numerical decoration; cross-check the Q closed form."""
    vN = _vertical_N(tree)
    dec = {}
    for vid in tree.iter_vertices():
        v = tree.vertices[vid]
        w = tree.pred(vid)
        c = tuple(gcd(qk, v.p) for qk in v.q)
        pv = tuple(v.p // ck for ck in c)
        if w is None:
            Q = tuple(v.q)
            R = tuple(v.q)
            acc_prev = (0,) * tree.dim
        else:
            dw = dec[w]
            pw = tree.vertices[w].p
            Q = tuple(pw * Qk * v.p // gcd(pw, Qk) + qk for Qk, qk in zip(dw.Q, v.q))
            R = tuple(qk + v.p * Rk * pw // gcd(Rk, pw) ** 2 for Rk, qk in zip(dw.R, v.q))
            acc_prev = dw.accExp
        cQ = tuple(gcd(Qk, v.p) for Qk in Q)
        if cQ != c:
            raise InternalInconsistency("gcd of the vertex differs from its vertical gcd")
        acc = tuple(pk * a + n // ck for pk, a, n, ck in zip(pv, acc_prev, vN[vid], c))
        dec[vid] = Decoration(vN[vid], Q, R, c, acc, _vmul(c, acc))
        if check:
            if closed_form_Q(tree, tree.chain(vid)) != Q:
                raise InternalInconsistency(f"closed form and recursion disagree at vertex {vid}")
            built = tree.built.get(vid)
            if built is not None and (
                built["N"] != vN[vid] or (built["acc"] is not None and built["acc"] != acc)
            ):
                raise InternalInconsistency(f"derived decorations disagree with the Newton process at {vid}")
    return dec


def primed_N(tree: NewtonTree, vid):
    """N'_v = (prod of c_w over preceding w) * globalN_v."""
    dec = tree.decorations()
    out = dec[vid].globalN
    for w in tree.chain(vid)[:-1]:
        out = _vmul(out, dec[w].c)
    return out


def check_growth(tree: NewtonTree, strict=True) -> bool:
    """Growth condition Q'_k > p Q_k p' / gcd(p, Q_k) for every vertex and k.

    With ``strict=False`` equality is accepted; it occurs exactly at the
    coordinates where the later vertex has q_k = 0.
    """
    dec = tree.decorations()
    for vid in tree.iter_vertices():
        w = tree.pred(vid)
        if w is None:
            continue
        pw = tree.vertices[w].p
        pv = tree.vertices[vid].p
        for Qk, Qw in zip(dec[vid].Q, dec[w].Q):
            bound = pw * Qw * pv // gcd(pw, Qw)
            if Qk < bound or (strict and Qk == bound):
                return False
    return True


def growth_holds_for(Q_prev, p_prev, Q_new, p_new) -> bool:
    return all(a > p_prev * b * p_new // gcd(p_prev, b) for a, b in zip(Q_new, Q_prev))


def depth(tree: NewtonTree) -> int:
    from .pgood import is_pgood

    if not is_pgood(tree):
        raise NotPGood("depth is defined on P-good trees")
    return horizontal_depth(tree)


def horizontal_depth(tree: NewtonTree) -> int:
    """Maximal number of horizontal edges on a path from the root."""
    if tree.root_line is None:
        return 0

    def line_depth(lid):
        best = 0
        for vid in tree.lines[lid].vertices:
            for ch in tree.vertices[vid].children:
                best = max(best, 1 if isinstance(ch, End) else 1 + line_depth(ch[1]))
        return best

    return line_depth(tree.root_line)


def tree_multiplicity(tree: NewtonTree) -> int:
    return sum(len(tree.vertices[v].children) for v in tree.iter_vertices())


# -- construction ------------------------------------------------------------

def _product(parts, dim):
    return reduce(lambda a, b: a * b, parts, SparsePoly.const(dim, 1))


def _strip(part):
    n = x_content(part)
    return part.shift_monomial(tuple(-v for v in n), 0) if any(n) else part


def _part_face(part: SparsePoly, step: PathStep):
    """Lowest beta and edge-polynomial coefficients of a factor along ``step``."""
    vals = {e: step.value(e) for e in part.terms}
    mins = tuple(min(v[k] for v in vals.values()) for k in range(part.dim))
    pts = [e for e, v in vals.items() if v == mins]
    lo = min(e[-1] for e in pts)
    hi = max(e[-1] for e in pts)
    coeffs = [Fraction(0)] * ((hi - lo) // step.p + 1)
    for e in pts:
        coeffs[(e[-1] - lo) // step.p] = part.terms[e]
    return lo, tuple(coeffs)


class _Builder:
    def __init__(self, dim, budget, max_depth, on_transform, u_override, opaque=False):
        self.dim = dim
        self.opaque = opaque
        self.budget = budget
        self.max_depth = max_depth
        self.on_transform = on_transform
        self.u_override = u_override
        self.tree = None
        self.next_vertex = 1
        self.next_line = 1
        self.truncated = False

    def run(self, parts):
        f = _product(parts, self.dim)
        n, _, _ = content_and_order(f)
        self.tree = NewtonTree(self.dim, n)
        self.tree.colored = len(parts) > 1
        self.tree.root = self.stage(parts, None, 0, "root", None)
        return self.tree

    def stage(self, parts, acc_prev, depth, label, parent):
        if depth > self.max_depth:
            raise MaxDepthExceeded(f"Newton process deeper than {self.max_depth}", stage=label)
        try:
            return self._stage(parts, acc_prev, depth, label, parent)
        except NTreeError as exc:
            if exc.stage is None:
                exc.stage = label
            raise

    def _stage(self, parts, acc_prev, depth, label, parent):
        f = _product(parts, self.dim)
        _, order, _ = content_and_order(f)
        if order == 1:
            # z - h(x) with h a series: the infinite shift leaves a single vertex
            part_orders = tuple(regular_order(_strip(p)) for p in parts)
            return End(ARROW, 1, "bottom" if parent is None else "horizontal", part_orders)
        suit = ensure_suitable(f, self.budget)
        if suit.shifts:
            self.tree.shifts.append({"stage": label, "shifts": [to_text(h) for h in suit.shifts]})
            if suit.precision is None:
                for h in suit.shifts:
                    parts = [shift_z(p, h) for p in parts]
            else:
                self.truncated = True
                parts = [shift_z_trunc(p, suit.shifts[0], suit.precision) for p in parts]
                for h in suit.shifts[1:]:
                    parts = [shift_z(p, h) for p in parts]
        f = suit.poly
        _, order, _ = content_and_order(f)
        part_orders = tuple(regular_order(_strip(p)) for p in parts)
        if suit.status.kind == "Void":
            return End(ARROW, order, "bottom" if parent is None else "horizontal", part_orders)
        if suit.status.kind == "Many":
            return End(BLACKBOX, order, "bottom" if parent is None else "horizontal", part_orders)
        path = polygonal_path(f, allow_irrational=self.opaque)
        lid = self.next_line
        self.next_line += 1
        line = Line(lid, [], parent, None, part_orders)
        self.tree.lines[lid] = line
        for idx, step in enumerate(path.steps):
            vid = self.next_vertex
            self.next_vertex += 1
            v = Vertex(vid, lid, step.q, step.p)
            if self.tree.colored:
                v.part_faces = tuple(_part_face(_strip(p), step)[1] for p in parts)
            self.tree.vertices[vid] = v
            line.vertices.append(vid)
            acc = None
            for mu, m in step.roots:
                u = self.u_override(step) if self.u_override else None
                rec = newton_map(f, step, mu, acc_prev, *(u or (None, None)))
                acc = rec.acc_exp
                if self.on_transform is not None:
                    self.on_transform(rec)
                if self.tree.colored:
                    child_parts = [apply_map_to_part(p, rec.data)[0] for p in parts]
                    if not self.truncated and _product(child_parts, self.dim) != rec.stripped:
                        raise InternalInconsistency("factor transforms do not multiply to the transform")
                else:
                    child_parts = [rec.stripped]
                child = self.stage(child_parts, rec.acc_exp, depth + 1, f"{label}/v{vid}/mu={mu}", vid)
                v.children.append(child)
                if self.child_order_of(child) != m:
                    raise InternalInconsistency("child order differs from the root multiplicity")
            for coeffs, m in step.irrational:
                v.children.extend(End(OPAQUE, m, "horizontal") for _ in range(len(coeffs) - 1))
            self.tree.built[vid] = {"N": step.N, "acc": acc}
        last = path.steps[-1]
        bottom_parts = tuple(_part_face(_strip(p), last)[0] for p in parts)
        if path.terminal == "NW3":
            line.bottom = End(BLACKBOX, path.terminal_order, "bottom", bottom_parts)
        else:
            line.bottom = End(ARROW, path.terminal_order, "bottom", bottom_parts)
        return ("line", lid)

    def child_order_of(self, child):
        return self.tree.child_order(child)


def build_tree(
    f: SparsePoly,
    budget: Optional[int] = None,
    max_depth: Optional[int] = None,
    on_transform: Optional[Callable] = None,
    u_override: Optional[Callable] = None,
) -> NewtonTree:
    """Run the Newton process on ``f`` and return its decorated tree."""
    return build_tree_of_parts([f], budget, max_depth, on_transform, u_override)


def build_tree_of_parts(parts, budget=None, max_depth=None, on_transform=None, u_override=None, opaque=False):
    if not parts:
        raise PreconditionError("no polynomial given")
    dim = parts[0].dim
    b = _Builder(
        dim,
        default_budget() if budget is None else budget,
        default_max_depth() if max_depth is None else max_depth,
        on_transform,
        u_override,
        opaque,
    )
    tree = b.run(list(parts))
    tree.decorations()
    return tree


# -- serialization -------------------------------------------------------------

def _shape(tree: NewtonTree, entry):
    """Nested structural key of a child entry, used for canonical ordering."""
    if isinstance(entry, End):
        return ["end", entry.kind, entry.decoration]
    line = tree.lines[entry[1]]
    verts = []
    for vid in line.vertices:
        v = tree.vertices[vid]
        kids = sorted((_shape(tree, ch) for ch in v.children), key=lambda s: json.dumps(s))
        verts.append([list(v.q), v.p, kids])
    return ["line", verts, [line.bottom.kind, line.bottom.decoration]]


def canonical(tree: NewtonTree) -> NewtonTree:
    """Copy with children sorted structurally and ids renumbered depth-first."""
    t = NewtonTree(tree.dim, tree.top)
    t.colored = tree.colored
    if isinstance(tree.root, End):
        t.root = copy.deepcopy(tree.root)
        return t
    counters = {"v": 1, "l": 1}

    def copy_line(lid, parent):
        src = tree.lines[lid]
        nid = counters["l"]
        counters["l"] += 1
        new = Line(nid, [], parent, copy.deepcopy(src.bottom), src.part_orders)
        t.lines[nid] = new
        for vid in src.vertices:
            v = tree.vertices[vid]
            nv = Vertex(counters["v"], nid, tuple(v.q), v.p, [], v.part_faces)
            counters["v"] += 1
            t.vertices[nv.id] = nv
            new.vertices.append(nv.id)
            kids = sorted(v.children, key=lambda ch: json.dumps(_shape(tree, ch)))
            for ch in kids:
                if isinstance(ch, End):
                    nv.children.append(copy.deepcopy(ch))
                else:
                    nv.children.append(("line", copy_line(ch[1], nv.id)))
        return nid

    t.root = ("line", copy_line(tree.root_line, None))
    return t


def to_json_obj(tree: NewtonTree, include_shifts=True):
    dec = tree.decorations()
    vertices = []
    vedges = []
    hedges = []
    ends = [{"kind": ARROW, "decoration": list(tree.top), "at": None, "orientation": "top"}]
    if isinstance(tree.root, End):
        ends.append({"kind": tree.root.kind, "decoration": tree.root.decoration, "at": None, "orientation": "bottom"})
    for lid in tree.iter_lines():
        line = tree.lines[lid]
        if line.parent is not None:
            hedges.append([line.parent, line.vertices[0]])
        for a, b in zip(line.vertices, line.vertices[1:]):
            vedges.append([a, b])
        for vid in line.vertices:
            v = tree.vertices[vid]
            d = dec[vid]
            order = []
            for ch in v.children:
                if isinstance(ch, End):
                    ends.append({"kind": ch.kind, "decoration": ch.decoration, "at": vid, "orientation": "horizontal"})
                    order.append(f"e{len(ends) - 1}")
                else:
                    order.append(f"v{tree.lines[ch[1]].vertices[0]}")
            vertices.append(
                {
                    "id": vid,
                    "line": lid,
                    "q": list(v.q),
                    "p": v.p,
                    "verticalN": list(d.verticalN),
                    "Q": list(d.Q),
                    "R": list(d.R),
                    "c": list(d.c),
                    "accExp": list(d.accExp),
                    "globalN": list(d.globalN),
                    "children": order,
                }
            )
        ends.append(
            {"kind": line.bottom.kind, "decoration": line.bottom.decoration, "at": line.vertices[-1], "orientation": "bottom"}
        )
    obj = {
        "dim": tree.dim,
        "vertices": vertices,
        "verticalEdges": vedges,
        "horizontalEdges": hedges,
        "ends": ends,
    }
    if include_shifts:
        obj["shifts"] = tree.shifts
    return obj


def to_json(tree: NewtonTree) -> str:
    return json.dumps(to_json_obj(tree), sort_keys=True)


def canonical_json(tree: NewtonTree) -> str:
    return json.dumps(to_json_obj(canonical(tree), include_shifts=False), sort_keys=True)


def from_json_obj(obj) -> NewtonTree:
    ends = obj["ends"]
    top = [e for e in ends if e["orientation"] == "top"]
    tree = NewtonTree(obj["dim"], tuple(top[0]["decoration"]) if top else (0,) * obj["dim"])
    tree.shifts = obj.get("shifts", [])
    if not obj["vertices"]:
        bottom = [e for e in ends if e["orientation"] == "bottom"][0]
        tree.root = End(bottom["kind"], bottom["decoration"], "bottom")
        return tree
    below = {a: b for a, b in obj["verticalEdges"]}
    above = {b: a for a, b in obj["verticalEdges"]}
    parent_of = {b: a for a, b in obj["horizontalEdges"]}
    vinfo = {v["id"]: v for v in obj["vertices"]}
    for v in obj["vertices"]:
        tree.vertices[v["id"]] = Vertex(v["id"], v["line"], tuple(v["q"]), v["p"])
    for vid, v in vinfo.items():
        if vid in above:
            continue
        chain = [vid]
        while chain[-1] in below:
            chain.append(below[chain[-1]])
        lid = v["line"]
        tree.lines[lid] = Line(lid, chain, parent_of.get(vid), None)
        if parent_of.get(vid) is None:
            tree.root = ("line", lid)
    for idx, e in enumerate(ends):
        if e["orientation"] == "bottom" and e["at"] is not None:
            tree.lines[vinfo[e["at"]]["line"]].bottom = End(e["kind"], e["decoration"], "bottom")
    for vid, v in vinfo.items():
        for tok in v.get("children", []):
            if tok.startswith("e"):
                e = ends[int(tok[1:])]
                tree.vertices[vid].children.append(End(e["kind"], e["decoration"], "horizontal"))
            else:
                tree.vertices[vid].children.append(("line", vinfo[int(tok[1:])]["line"]))
    return tree


def from_json(text: str) -> NewtonTree:
    return from_json_obj(json.loads(text))


# -- rendering -------------------------------------------------------------------

def _vec(v):
    return "(" + ",".join(str(x) for x in v) + ")"


def _num(v):
    return str(v[0]) if len(v) == 1 else _vec(v)


def render_ascii(tree: NewtonTree) -> str:
    out = []
    if isinstance(tree.root, End):
        mark = "v" if tree.root.kind == ARROW else "#"
        return "\n".join([f"^ {_vec(tree.top)}", "|", f"{mark} ({tree.root.decoration})"])
    dec = tree.decorations()

    def end_text(e):
        return ("-> " if e.kind == ARROW else "[#] ") + f"({e.decoration})"

    def emit_line(lid, pad, head):
        line = tree.lines[lid]
        out.append(pad + head)
        for vid in line.vertices:
            v = tree.vertices[vid]
            d = dec[vid]
            out.append(f"{pad}|  {_num(d.Q)}")
            out.append(f"{pad}* v{vid} {_vec(d.verticalN)}")
            for ch in v.children:
                if isinstance(ch, End):
                    out.append(f"{pad}|`-- {end_text(ch)}")
                else:
                    emit_line(ch[1], pad + "|    ", "`-+")
            out.append(f"{pad}|  {v.p}")
        b = line.bottom
        out.append(pad + ("v" if b.kind == ARROW else "#") + f" ({b.decoration})")

    emit_line(tree.root_line, "", f"^ {_vec(tree.top)}")
    return "\n".join(out)


def render_dot(tree: NewtonTree) -> str:
    lines = ["digraph newton_tree {", "  node [shape=circle, fontsize=10];", "  edge [arrowhead=none];"]
    lines.append(f'  top [shape=plaintext, label="{_vec(tree.top)}"];')
    if isinstance(tree.root, End):
        shape = "plaintext" if tree.root.kind == ARROW else "box"
        lines.append(f'  end0 [shape={shape}, label="({tree.root.decoration})"];')
        lines.append("  top -> end0 [arrowhead=normal];")
        lines.append("}")
        return "\n".join(lines)
    dec = tree.decorations()
    n_end = 0
    for lid in tree.iter_lines():
        line = tree.lines[lid]
        lines.append(f"  subgraph line{lid} {{ rank=same; }}")
        for vid in line.vertices:
            lines.append(f'  v{vid} [label="{_vec(dec[vid].verticalN)}"];')
    for lid in tree.iter_lines():
        line = tree.lines[lid]
        first = line.vertices[0]
        if line.parent is None:
            lines.append(f'  top -> v{first} [dir=back, arrowtail=normal, headlabel="{_num(dec[first].Q)}"];')
        else:
            lines.append(
                f'  v{line.parent} -> v{first} [constraint=false, headlabel="{_num(dec[first].Q)}"];'
            )
        for a, b in zip(line.vertices, line.vertices[1:]):
            lines.append(
                f'  v{a} -> v{b} [taillabel="{tree.vertices[a].p}", headlabel="{_num(dec[b].Q)}"];'
            )
        for vid in line.vertices:
            for ch in tree.vertices[vid].children:
                if isinstance(ch, End):
                    n_end += 1
                    shape = "plaintext" if ch.kind == ARROW else "box"
                    lines.append(f'  end{n_end} [shape={shape}, label="({ch.decoration})"];')
                    lines.append(f"  v{vid} -> end{n_end} [arrowhead=normal, constraint=false];")
        last = line.vertices[-1]
        n_end += 1
        shape = "plaintext" if line.bottom.kind == ARROW else "box"
        lines.append(f'  end{n_end} [shape={shape}, label="({line.bottom.decoration})"];')
        lines.append(f'  v{last} -> end{n_end} [arrowhead=normal, taillabel="{tree.vertices[last].p}"];')
    lines.append("}")
    return "\n".join(lines)


def render(tree: NewtonTree, fmt: str = "ascii") -> str:
    if fmt == "ascii":
        return render_ascii(tree)
    if fmt == "dot":
        return render_dot(tree)
    if fmt == "json":
        return to_json(tree)
    raise ValueError(f"unknown format {fmt!r}")
