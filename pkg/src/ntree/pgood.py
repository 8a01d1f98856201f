"""P-good normalization performed directly on trees."""

from __future__ import annotations

from .errors import BlackBoxPresent
from .tree import ARROW, End, Line, NewtonTree


def _require_arrows(tree: NewtonTree):
    if tree.has_black_box():
        raise BlackBoxPresent("P-good normalization needs a tree without black boxes")


def _violation(tree: NewtonTree, vid):
    """Which rewrite a p = 1 vertex needs, or None when it is already fine."""
    v = tree.vertices[vid]
    if v.p != 1:
        return None
    line = tree.lines[v.line]
    if line.vertices[-1] != vid:
        return "cut"
    b = line.bottom
    if b.kind != ARROW or b.decoration != 0:
        return "cut"
    if tree.valency(vid) > 3:
        return None
    return "rotate"


def is_pgood(tree: NewtonTree) -> bool:
    _require_arrows(tree)
    return all(_violation(tree, v) is None for v in tree.iter_vertices())


def _horizontal_level(tree, vid):
    return len(tree.chain(vid))


def _next_violation(tree: NewtonTree):
    order = list(tree.iter_vertices())
    rank = {v: i for i, v in enumerate(order)}
    bad = [v for v in order if _violation(tree, v) is not None]
    if not bad:
        return None

    def key(v):
        line = tree.lines[tree.vertices[v].line]
        return (-_horizontal_level(tree, v), -line.vertices.index(v), rank[v])

    return min(bad, key=key)


def _cut(tree: NewtonTree, vid):
    """Sub-case 1: the part of the line below ``vid`` becomes a horizontal subtree."""
    v = tree.vertices[vid]
    line = tree.lines[v.line]
    idx = line.vertices.index(vid)
    lower = line.vertices[idx + 1:]
    if lower:
        nid = max(tree.lines) + 1
        new = Line(nid, lower, vid, line.bottom)
        tree.lines[nid] = new
        for wid in lower:
            w = tree.vertices[wid]
            w.line = nid
            w.q = tuple(qw - w.p * qv for qw, qv in zip(w.q, v.q))
            if min(w.q) < 0:
                raise AssertionError("slopes along a vertical line must increase")
        v.children.append(("line", nid))
    else:
        b = line.bottom
        v.children.append(End(b.kind, b.decoration, "horizontal", b.part_orders))
    line.vertices = line.vertices[: idx + 1]
    line.bottom = End(ARROW, 0, "bottom")


def _rotate(tree: NewtonTree, vid):
    """Sub-case 2: drop the dead arrow and turn the single horizontal edge vertical."""
    v = tree.vertices[vid]
    line = tree.lines[v.line]
    (child,) = v.children
    line.vertices.remove(vid)
    del tree.vertices[vid]
    if isinstance(child, End):
        end = End(child.kind, child.decoration, "bottom", child.part_orders)
        if line.vertices:
            line.bottom = end
            return
        # the whole line disappears
        del tree.lines[line.id]
        if line.parent is None:
            tree.root = end
        else:
            par = tree.vertices[line.parent]
            par.children = [
                End(end.kind, end.decoration, "horizontal", end.part_orders)
                if (not isinstance(ch, End) and ch[1] == line.id)
                else ch
                for ch in par.children
            ]
        return
    sub = tree.lines.pop(child[1])
    for wid in sub.vertices:
        w = tree.vertices[wid]
        w.line = line.id
        w.q = tuple(qw + w.p * qv for qw, qv in zip(w.q, v.q))
    line.vertices.extend(sub.vertices)
    line.bottom = sub.bottom


def to_pgood(tree: NewtonTree, log=None) -> NewtonTree:
    """Return the P-good tree obtained from ``tree`` by the two rewritings."""
    _require_arrows(tree)
    t = tree.copy()
    t.built = {}
    while True:
        vid = _next_violation(t)
        if vid is None:
            break
        kind = _violation(t, vid)
        if log is not None:
            log.append((kind, vid))
        if kind == "cut":
            _cut(t, vid)
        else:
            _rotate(t, vid)
        t.invalidate()
        t.decorations()
    return t
