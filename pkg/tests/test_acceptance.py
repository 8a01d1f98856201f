import csv
import io
import time
from math import gcd

from ntree.analysis import (
    build_colored_tree,
    discriminant_of,
    oracle_resultant_exponent,
    qo_by_tree,
    qo_oracle,
    resultant_exponent,
)
from ntree.cli import run
from ntree.corpus import corpus, separated_pairs
from ntree.diagram import ensure_suitable, polygonal_path
from ntree.errors import NTreeError
from ntree.pgood import to_pgood
from ntree.polyring import content_and_order, parse_poly
from ntree.process import chain_rule_holds, newton_map
from ntree.sections import curve_sections, reconstruct, section_crosscheck, section_forest
from ntree.tree import build_tree, canonical_json, closed_form_Q, depth

from oracles import admissible_preshifts


def built_corpus():
    for e in corpus():
        try:
            yield e, build_tree(e.poly())
        except NTreeError:
            continue


def test_discriminant_examples(verdict):
    cases = [
        ("z^2-x1^3", 1, (3,)),
        ("z^2-x1*x2", 2, (1, 1)),
        ("z^2-x1^2*x2^3", 2, (2, 3)),
        ("(z^2-x1^3)^2-x1^7", 1, (20,)),
        ("(z^2-x1^3)^2-x1^7*z", 1, (23,)),
        ("(z^2-x1^2*x2^3)^2-x1^5*x2^8", 2, (14, 22)),
        ("(z^2-x1^3)*(z^3-x1^2)", 1, (15,)),
        ("(z^2-x1^3)*(z^2-2*x1^3)", 1, (18,)),
    ]
    t0 = time.perf_counter()
    wrong = []
    for text, d, expected in cases:
        f = parse_poly(text, d)
        D, o = discriminant_of(f), qo_oracle(f).exponent
        if not D == o == expected:
            wrong.append((text, D, o))
    elapsed = time.perf_counter() - t0
    ok = verdict(1, not wrong and elapsed < 60, f"{len(cases) - len(wrong)}/{len(cases)} exact, {elapsed:.1f} s")
    assert ok, wrong


def test_resultant_rule(verdict):
    f, g = parse_poly("z^2-x1^3", 1), parse_poly("z^3-x1^2", 1)
    first = resultant_exponent(build_colored_tree(f, g)) == oracle_resultant_exponent(f, g) == (4,)
    pairs = separated_pairs(count=50)
    mismatches = []
    for fe, ge in pairs:
        a, b = fe.poly(), ge.poly()
        if resultant_exponent(build_colored_tree(a, b)) != oracle_resultant_exponent(a, b):
            mismatches.append((fe.text, ge.text))
    ok = verdict(2, first and len(pairs) == 50 and not mismatches,
                 f"cusp pair {'ok' if first else 'wrong'}, {len(pairs)} pairs, {len(mismatches)} MISMATCH")
    assert ok, mismatches


def test_tree_criterion_equivalence(verdict):
    total, disagree = 0, []
    for e in corpus():
        f = e.poly()
        o = qo_oracle(f)
        try:
            mine = qo_by_tree(f)
        except NTreeError as exc:
            disagree.append((e.name, type(exc).__name__))
            continue
        total += 1
        if mine != o.qo:
            disagree.append((e.name, mine, o.qo))
    ok = verdict(3, total >= 100 and not disagree, f"{total} polynomials, {len(disagree)} disagreements")
    assert ok, disagree


def test_pgood_uniqueness(verdict):
    members, failures = 0, []
    for e, t in built_corpus():
        if t.has_black_box() or t.root_line is None:
            continue
        members += 1
        ref = canonical_json(to_pgood(t))
        shifted = admissible_preshifts(e.poly())
        if len(shifted) < 2 or any(canonical_json(to_pgood(s)) != ref for _, s in shifted):
            failures.append(e.name)
    ok = verdict(4, members > 0 and not failures, f"{members} members, 2 pre-shifts each, {len(failures)} failures")
    assert ok, failures


def test_section_roundtrip(verdict):
    members, failures = 0, []
    for e, t in built_corpus():
        if t.has_black_box():
            continue
        tp = to_pgood(t)
        if len(tp.non_dead_ends()) != 1:
            continue
        members += 1
        if canonical_json(reconstruct(curve_sections(tp))) != canonical_json(tp):
            failures.append(e.name)
    by_name = {e.name: e for e in corpus()}
    t1 = to_pgood(build_tree(by_name["duple-f1"].poly()))
    t2 = to_pgood(build_tree(by_name["duple-f2"].poly()))
    duple = canonical_json(t1) != canonical_json(t2) and all(
        section_forest(t1, i).canonical() == section_forest(t2, i).canonical() for i in range(2)
    )
    ok = verdict(5, members > 0 and not failures and duple,
                 f"{members} round trips, {len(failures)} failures, duple control {'ok' if duple else 'broken'}")
    assert ok, failures


def test_section_crosscheck(verdict):
    checked, failures = 0, []
    for e, t in built_corpus():
        if e.dim < 2 or t.has_black_box():
            continue
        for i in range(e.dim):
            checked += 1
            try:
                r = section_crosscheck(e.poly(), i, retries=3)
                if not r.ok:
                    failures.append((e.name, i, r.detail))
            except NTreeError as exc:
                failures.append((e.name, i, str(exc)))
    ok = verdict(6, checked > 0 and not failures, f"{checked} (member, variable) pairs, {len(failures)} failures")
    assert ok, failures


def test_invariants(verdict):
    problems = []
    maps = 0

    def watch(rec):
        nonlocal maps
        maps += 1
        if not chain_rule_holds(rec):
            problems.append("chain rule")

    trees = 0
    for e in corpus():
        if "slow" in e.tags:
            continue
        f = e.poly()
        try:
            t = build_tree(f, on_transform=watch)
        except NTreeError:
            continue
        trees += 1
        for vid in t.iter_vertices():
            w = t.pred(vid)
            d = t.decoration(vid)
            if closed_form_Q(t, t.chain(vid)) != d.Q:
                problems.append(("Q", e.name))
            if w is None:
                continue
            pw, pv = t.vertices[w].p, t.vertices[vid].p
            for k, Qw in enumerate(t.decoration(w).Q):
                if d.Q[k] < pw * Qw * pv // gcd(pw, Qw):
                    problems.append(("growth", e.name))
        if not qo_by_tree(f):
            continue
        g = ensure_suitable(f).poly
        if content_and_order(g)[1] <= 1:
            continue
        base = depth(to_pgood(t))
        for step in polygonal_path(g).steps:
            for mu, _ in step.roots:
                child = newton_map(g, step, mu).stripped
                if depth(to_pgood(build_tree(child))) >= base:
                    problems.append(("depth", e.name))

    pairs = 0
    for fe, ge in separated_pairs(seed=21, count=60):
        a, b = fe.poly(), ge.poly()
        if not (qo_by_tree(a) and qo_by_tree(b)):
            continue
        r = resultant_exponent(build_colored_tree(a, b))
        lhs = discriminant_of(a * b)
        rhs = tuple(x + y + 2 * z for x, y, z in zip(discriminant_of(a), discriminant_of(b), r))
        if lhs != rhs or lhs != qo_oracle(a * b).exponent:
            problems.append(("product", fe.text, ge.text))
        pairs += 1
        if pairs == 20:
            break
    ok = verdict(7, maps > 0 and pairs == 20 and not problems,
                 f"{trees} trees, {maps} Newton maps, {pairs} product pairs, {len(problems)} violations")
    assert ok, problems


def test_bench(verdict):
    out = io.StringIO()
    assert run(["bench", "--max-degree", "12"], out) == 0
    rows = list(csv.DictReader(io.StringIO(out.getvalue())))
    top = rows[-1]
    speedup = int(top["oracle_micros"]) / max(1, int(top["formula_micros"]))
    exact = all(r["match"] == "match" for r in rows)
    ok = verdict(8, exact and int(top["z-degree"]) == 12 and top["d"] == "2",
                 f"{len(rows)} rows up to z-degree {top['z-degree']}, all exponents equal: {exact}, "
                 f"speedup at top {speedup:.0f}x (reported)")
    assert ok, rows
