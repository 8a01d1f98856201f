import json
from math import gcd

import pytest

from ntree.corpus import corpus, separated_pairs
from ntree.diagram import ensure_suitable, polygonal_path
from ntree.errors import MaxDepthExceeded
from ntree.pgood import to_pgood
from ntree.polyring import content_and_order, parse_poly
from ntree.process import newton_map
from ntree.tree import (
    ARROW,
    BLACKBOX,
    End,
    build_tree,
    build_tree_of_parts,
    canonical_json,
    check_growth,
    closed_form_Q,
    depth,
    from_json,
    growth_holds_for,
    render,
    to_json,
    tree_multiplicity,
)


def T(text, d=1):
    return build_tree(parse_poly(text, d))


def root_vertices(t):
    return [t.vertices[v] for v in t.lines[t.root_line].vertices]


def fast_corpus():
    return [e for e in corpus() if "slow" not in e.tags and "non-reduced" not in e.tags]


def test_cusp_tree():
    t = T("z^2-x1^3")
    (v,) = root_vertices(t)
    assert (v.q, v.p) == ((3,), 2)
    assert t.decoration(v.id).verticalN == (6,)
    assert t.top == (0,)
    assert t.lines[t.root_line].bottom.decoration == 0
    assert [(ch.kind, ch.decoration) for ch in v.children] == [(ARROW, 1)]


def test_black_box_at_apex():
    t = T("z^2-x1^3-x2^3", 2)
    assert isinstance(t.root, End) and t.root.kind == BLACKBOX and t.root.decoration == 2


def test_case_one_single_arrow():
    t = T("x1^3*z")
    assert isinstance(t.root, End) and t.root.kind == ARROW
    assert t.top == (3,) and t.root.decoration == 1
    assert depth(to_pgood(t)) == 0


def test_two_line_tree():
    # by hand: x = y^2, z = y^3 (z + 1) gives y^12 ((z^2 + 2z)^2 - y^5 (z + 1))
    t = T("(z^2-x1^3)^2-x1^7*z")
    (v1,) = root_vertices(t)
    assert (v1.q, v1.p) == ((3,), 2)
    assert t.decoration(v1.id).verticalN == (12,)
    (child,) = v1.children
    (v2_id,) = t.lines[child[1]].vertices
    v2 = t.vertices[v2_id]
    assert (v2.q, v2.p) == ((5,), 2)
    assert t.decoration(v2_id).Q == (17,) and t.decoration(v2_id).R == (17,)
    assert t.lines[t.root_line].bottom.decoration == 0
    assert t.lines[child[1]].bottom.decoration == 0
    assert check_growth(t)
    assert depth(to_pgood(t)) == 2


def test_decorations_with_common_factor():
    # chain (q=(2,3), p=2) then (q=(1,4), p=2): Q = (2*2*2/2+1, 2*3*2/1+4) = (5, 16), c = (1, 2)
    t = T("(z^2-x1^2*x2^3)^2-x1^5*x2^8", 2)
    (v1,) = root_vertices(t)
    (child,) = v1.children
    (v2,) = t.lines[child[1]].vertices
    d = t.decoration(v2)
    assert t.vertices[v2].q == (1, 4) and t.vertices[v2].p == 2
    assert d.Q == (5, 16) and d.c == (1, 2)
    assert closed_form_Q(t, t.chain(v2)) == (5, 16)


def test_growth_violation_detected():
    assert growth_holds_for((3,), 2, (17,), 2)
    assert not growth_holds_for((3,), 2, (12,), 2)
    assert check_growth(T("z^2-x1^3"))


def test_growth_is_only_weak_where_q_vanishes():
    # second edge of the transform (z^2+2z)^6 + y1 (z^2+2z)^3 + y1^3 y2^2 has q = (1, 0)
    t = T("(z^2-x1^2*x2^3)^6+(z^2-x1^2*x2^3)^3*x1^7*x2^9+x1^15*x2^19", 2)
    assert not check_growth(t)
    assert check_growth(t, strict=False)


def test_tree_multiplicity():
    assert tree_multiplicity(T("z^2-x1^3")) == 1
    assert tree_multiplicity(T("(z^2-x1^3)*(z^2-2*x1^3)")) == 2
    assert tree_multiplicity(T("(z^2-x1^3)*(z^3-x1^2)")) == 2


def test_depths():
    assert depth(to_pgood(T("z^2-x1^3"))) == 1
    assert depth(to_pgood(T("(z^2-x1^3)^2-x1^7*z"))) == 2


def test_render_formats():
    t = T("z^2-x1^3")
    dot = render(t, "dot")
    assert '[label="(6)"]' in dot and 'headlabel="3"' in dot and 'taillabel="2"' in dot
    assert dot.count("end") == 4  # two ends, each declared and linked
    assert len(render(build_tree(parse_poly("x1*z", 1)), "ascii").splitlines()) == 3
    assert render(t, "ascii") == render(T("z^2-x1^3"), "ascii")


def test_json_roundtrip():
    for text, d in [("z^2-x1^3", 1), ("(z^2-x1^3)^2-x1^7*z", 1), ("z^2-x1^3-x2^3", 2),
                    ("(z^2-x1^3*x2)*(z^2-x1^3*x2^4)*(z^2-x1^5*x2^6)", 2)]:
        t = T(text, d)
        back = from_json(to_json(t))
        assert to_json(back) == to_json(t)
        obj = json.loads(to_json(t))
        assert set(obj) == {"dim", "vertices", "verticalEdges", "horizontalEdges", "ends", "shifts"}


def test_max_depth():
    with pytest.raises(MaxDepthExceeded):
        build_tree(parse_poly("(z^2-x1^3)^2-x1^7*z", 1), max_depth=0)


def test_convention_independence():
    def second_solution(step):
        from ntree.process import solve_diophantine

        u, u0 = solve_diophantine(step.q, step.p)
        k = max(range(len(u)), key=lambda i: step.q[i])
        u = list(u)
        u[k] += step.p
        return tuple(u), u0 + step.q[k]

    for text, d in [("(z^2-x1^3)^2-x1^7*z", 1), ("(z^2-x1^2*x2^3)^2-x1^5*x2^8", 2),
                    ("(z^2-x1^3*x2)*(z^2-x1^3*x2^4)*(z^2-x1^5*x2^6)", 2)]:
        f = parse_poly(text, d)
        a = canonical_json(to_pgood(build_tree(f)))
        b = canonical_json(to_pgood(build_tree(f, u_override=second_solution)))
        assert a == b


def test_corpus_trees_are_consistent():
    for e in fast_corpus():
        f = e.poly()
        t = build_tree(f)
        _, order, _ = content_and_order(f)
        assert check_growth(t, strict=False), e.name
        for vid in t.iter_vertices():
            w = t.pred(vid)
            if w is None:
                continue
            pw, pv = t.vertices[w].p, t.vertices[vid].p
            for k, qk in enumerate(t.vertices[vid].q):
                Qw, Qv = t.decoration(w).Q[k], t.decoration(vid).Q[k]
                assert (Qv > pw * Qw * pv // gcd(pw, Qw)) == (qk > 0)
        if t.root_line is not None:
            assert t.line_order(t.root_line) == order, e.name
        for vid in t.iter_vertices():
            d = t.decoration(vid)
            assert closed_form_Q(t, t.chain(vid)) == d.Q
            assert tuple(g // c for g, c in zip(d.globalN, d.c)) == d.accExp


def test_depth_decreases_under_newton_maps():
    from ntree.analysis import qo_by_tree

    checked = 0
    for e in fast_corpus():
        f = e.poly()
        if not qo_by_tree(f):
            continue
        g = ensure_suitable(f).poly
        if content_and_order(g)[1] <= 1:
            continue
        try:
            path = polygonal_path(g)
        except Exception:
            continue
        base = depth(to_pgood(build_tree(f)))
        for step in path.steps:
            for mu, _ in step.roots:
                child = newton_map(g, step, mu).stripped
                assert depth(to_pgood(build_tree(child))) < base, e.name
                checked += 1
    assert checked >= 50


def test_colored_tree_keeps_factor_data():
    for f_entry, g_entry in separated_pairs(count=10):
        f, g = f_entry.poly(), g_entry.poly()
        whole = build_tree_of_parts([f, g])
        tf, tg = build_tree(f), build_tree(g)
        slopes = {(v.q, v.p) for v in root_vertices(whole)}
        own = {(v.q, v.p) for v in root_vertices(tf)} | {(v.q, v.p) for v in root_vertices(tg)}
        assert slopes == own
