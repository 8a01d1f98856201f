import pytest

from ntree.analysis import (
    BLUE,
    BOTH,
    RED,
    build_colored_tree,
    discriminant_of,
    is_separated,
    oracle_resultant_exponent,
    polar_separation_report,
    qo_by_tree,
    qo_by_tree_report,
    qo_oracle,
    resultant_exponent,
    separation_order,
)
from ntree.corpus import corpus, separated_pairs
from ntree.diagram import polygonal_path
from ntree.errors import NonRationalRoots, NotSeparated
from ntree.polyring import monomial_unit_split, parse_poly, sylvester_resultant


def P(text, d=1):
    return parse_poly(text, d)


def CT(a, b, d=1):
    return build_colored_tree(P(a, d), P(b, d))


def root_line_vertices(ct):
    t = ct.tree
    return t.lines[t.root_line].vertices


# colored trees

def test_cusp_pair_colors():
    ct = CT("z^2-x1^3", "z^3-x1^2")
    upper, lower = root_line_vertices(ct)
    assert ct.line_color(ct.tree.root_line) == BOTH
    assert ct.horizontal_colors(upper) == [RED]
    assert ct.horizontal_colors(lower) == [BLUE]
    assert is_separated(ct)


def test_trivial_partner_is_blue():
    ct = CT("z-x1", "1")
    assert [c for _, _, c in ct.colored_ends()] == [BLUE]


def test_common_vertex_splits_roots():
    ct = CT("z^2-x1^3", "z^2-2*x1^3")
    (v,) = root_line_vertices(ct)
    assert sorted(ct.horizontal_colors(v)) == sorted([BLUE, RED])
    assert is_separated(ct)


def test_separation_predicate():
    assert not is_separated(CT("z^2-x1^3", "z^2-x1^3"))
    assert is_separated(CT("z^2-x1^3", "z^2-x1^3+x1^5"))


def test_separation_order():
    def at_first_edge(a, b):
        f, g = P(a), P(b)
        step = polygonal_path(f * g).steps[0]
        return separation_order(f, g, step)

    assert at_first_edge("z^2-x1^3", "z^2-2*x1^3") == 2
    assert at_first_edge("z^2-x1^3", "z^2-x1^3") == 0
    assert at_first_edge("(z^2-x1^3)^2", "(z^2-x1^3)*(z^2-2*x1^3)") == 2


# resultants

@pytest.mark.parametrize("f,g,d,expected", [
    ("z^2-x1^3", "z^3-x1^2", 1, (4,)),
    ("z-x1", "z-2*x1", 1, (1,)),
    ("z^2-x1*x2", "z^2-2*x1*x2", 2, (2, 2)),
])
def test_resultant_examples(f, g, d, expected):
    ct = CT(f, g, d)
    assert resultant_exponent(ct) == expected
    assert oracle_resultant_exponent(P(f, d), P(g, d)) == expected


def test_resultant_needs_separation():
    with pytest.raises(NotSeparated):
        resultant_exponent(CT("z^2-x1^3", "z^2-x1^3"))


def test_resultant_rule_on_random_pairs():
    for fe, ge in separated_pairs(seed=11, count=15):
        f, g = fe.poly(), ge.poly()
        ct = build_colored_tree(f, g)
        assert resultant_exponent(ct) == oracle_resultant_exponent(f, g), (fe.text, ge.text)


def test_separated_pairs_are_comparable():
    for fe, ge in separated_pairs(seed=3, count=10):
        r = sylvester_resultant(fe.poly(), ge.poly())
        assert monomial_unit_split(r) is not None


# quasi-ordinarity

def test_qo_examples():
    assert qo_by_tree(P("z^2-x1^3*x2", 2))
    v = qo_by_tree_report(P("z^2-x1^3-x2^3", 2))
    assert not v.qo and "black box" in v.reason
    assert qo_by_tree(P("(z^2-x1^3)^2-x1^7*z"))


def test_oracle_examples():
    o = qo_oracle(P("z^2-x1^3*x2", 2))
    assert o.qo and o.exponent == (3, 1)
    assert o.discriminant == P("-4*x1^3*x2", 2)
    assert not qo_oracle(P("z^2-x1^3-x2^3", 2)).qo
    o = qo_oracle(P("(z-x1)^2"))
    assert not o.qo and o.non_reduced


def test_non_reduced_input_has_big_arrow():
    v = qo_by_tree_report(P("(z^2-x1*x2)^2", 2))
    assert not v.qo and "arrow" in v.reason


def test_tree_criterion_matches_oracle_on_fast_corpus():
    n = 0
    for e in corpus():
        if "slow" in e.tags or "duple" in e.tags:
            continue
        f = e.poly()
        o = qo_oracle(f)
        if o.non_reduced:
            continue
        assert qo_by_tree(f) == o.qo, e.name
        n += 1
    assert n >= 90


# discriminants

@pytest.mark.parametrize("text,d,expected", [
    ("z^2-x1^3", 1, (3,)),
    ("(z^2-x1^3)^2-x1^7*z", 1, (23,)),
    ("(z^2-x1^2*x2^3)^2-x1^5*x2^8", 2, (14, 22)),
    ("z^2-x1*x2", 2, (1, 1)),
    ("(z^2-x1^3)*(z^2-2*x1^3)", 1, (18,)),
])
def test_discriminant_examples(text, d, expected):
    assert discriminant_of(P(text, d)) == expected
    assert qo_oracle(P(text, d)).exponent == expected


def test_discriminant_matches_oracle_on_corpus():
    for e in corpus():
        if "slow" in e.tags or "duple" in e.tags:
            continue
        f = e.poly()
        o = qo_oracle(f)
        if o.qo:
            assert discriminant_of(f) == o.exponent, e.name


def test_discriminant_of_product():
    for fe, ge in separated_pairs(seed=5, count=8):
        f, g = fe.poly(), ge.poly()
        if not (qo_by_tree(f) and qo_by_tree(g)):
            continue
        r = resultant_exponent(build_colored_tree(f, g))
        expected = tuple(a + b + 2 * c for a, b, c in zip(discriminant_of(f), discriminant_of(g), r))
        assert discriminant_of(f * g) == expected


# polar

def test_polar_report_upper_vertex():
    rep = polar_separation_report(P("(z^2-x1^3)*(z^3-x1^2)"))
    (upper,) = [r for r in rep.vertices if not r.leaf]
    assert (upper.k, upper.p, upper.order) == (1, 3, 3)
    assert rep.ok


def test_polar_report_leaf_only():
    rep = polar_separation_report(P("z^2-x1^3"))
    assert all(r.leaf for r in rep.vertices) and rep.ok
    rep = polar_separation_report(P("(z^2-x1^3)^2-x1^7*z"))
    assert rep.ok and rep.leaf_total >= 0


def test_polar_report_on_corpus():
    checked = 0
    for e in corpus():
        if "slow" in e.tags or "random" not in e.tags:
            continue
        f = e.poly()
        if not qo_by_tree(f):
            continue
        try:
            rep = polar_separation_report(f)
        except NonRationalRoots:
            continue  # polar roots outside the rationals
        assert rep.ok, e.name
        checked += 1
    assert checked >= 10
