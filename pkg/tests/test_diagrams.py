"""Slice building, degrees, bubble evaluation, and the Grassmannian check."""

import pytest

from catq.cartan import Weight, build_cartan, path_graph
from catq.diagrams import (
    DOWN,
    UP,
    BubbleSymbol,
    DiagramBuilder,
    DiagramError,
    bp_const,
    eval_bubble,
    expand_bubbles,
    fake_expand,
    format_diagram,
    grassmannian_check,
    parse_diagram,
)
from catq.field import MINUS_ONE, ONE, FieldElem
from catq.params import symbolic_paramset
from catq.relations import instantiate_relation


def a2():
    return build_cartan(path_graph(2))


def wt(p1, p2, name="w"):
    return Weight.make(name, {1: p1, 2: p2})


def test_generator_degrees():
    datum = a2()
    w = wt(2, 0)
    b = DiagramBuilder(datum, w, [(UP, 1)])
    b.dot(1)
    assert b.slices[-1].degree(datum) == 2
    b2 = DiagramBuilder(datum, w, [(UP, 1), (UP, 2)])
    b2.cross(1)
    assert b2.slices[-1].degree(datum) == 1  # adjacent colors
    b3 = DiagramBuilder(datum, w, [])
    b3.cup_fe(1, 1)
    assert b3.slices[-1].degree(datum) == 1 + 2  # 1 + w_1
    b4 = DiagramBuilder(datum, w, [])
    b4.cup_ef(1, 1)
    assert b4.slices[-1].degree(datum) == 1 - 2


def test_builder_tracks_region_weights():
    datum = a2()
    w = wt(1, -1)
    b = DiagramBuilder(datum, w, [(DOWN, 1), (DOWN, 2)])
    b.cup_fe(2, 1)
    # region right of the insertion point crosses F_1 and F_2
    assert b.slices[-1].weight == w.shifted(1, -1).shifted(2, -1)
    b.cup_fe(1, 2)
    assert b.slices[-1].weight == w.shifted(1, -1)
    b.cross(3)
    assert b.slices[-1].weight == w.shifted(1, -1).shifted(2, -1)
    assert b.slices[-1].orients == (UP, UP)


def test_cap_requires_matching_strands():
    datum = a2()
    b = DiagramBuilder(datum, wt(0, 0), [(UP, 1), (UP, 1)])
    with pytest.raises(DiagramError):
        b.cap(1)


def test_eval_bubble_degree_zero_and_vanishing():
    datum = a2()
    p = symbolic_paramset(datum)
    w = wt(3, 0)
    assert eval_bubble(1, w, 2, "cw", p) == bp_const(p.cplus(1, w))
    assert eval_bubble(1, w, 1, "cw", p) == {}
    assert eval_bubble(1, w, 0, "cw", p) == {}
    out = eval_bubble(1, w, 3, "cw", p)
    assert out == {(BubbleSymbol(1, "cw", 1, w),): ONE}


def test_eval_bubble_nonfree_orientation_eliminates():
    datum = a2()
    p = symbolic_paramset(datum)
    w = wt(2, 0)
    # ccw at positive pairing is not free: its positive-degree bubbles are
    # polynomials in the clockwise family
    out = eval_bubble(1, w, -3 + 1, "ccw", p)  # star offset 1 at pairing 2
    cw1 = (BubbleSymbol(1, "cw", 1, w),)
    expected = {cw1: MINUS_ONE / p.cplus(1, w) * p.cminus(1, w)}
    assert out == expected


def test_fake_expand_examples():
    datum = a2()
    p = symbolic_paramset(datum)
    w = wt(-2, 1)
    # degree-zero fake bubble
    assert fake_expand(1, w, 0, "cw", p) == bp_const(p.cplus(1, w))
    # one induction step: the only product has the free ccw(*+1) factor
    out = fake_expand(1, w, 1, "cw", p)
    ccw1 = (BubbleSymbol(1, "ccw", 1, w),)
    assert out == {ccw1: MINUS_ONE * p.cplus(1, w) / p.cminus(1, w)}
    # negative star offsets vanish
    assert fake_expand(1, w, -1, "cw", p) == {}


def test_fake_expand_rejects_real_side():
    datum = a2()
    p = symbolic_paramset(datum)
    with pytest.raises(DiagramError):
        fake_expand(1, wt(2, 0), 1, "cw", p)
    with pytest.raises(DiagramError):
        fake_expand(1, wt(-2, 0), 1, "ccw", p)


@pytest.mark.parametrize("pairing", range(-5, 6))
def test_grassmannian_symbolic(pairing):
    datum = a2()
    p = symbolic_paramset(datum)
    ok, residuals = grassmannian_check(1, wt(pairing, 0), 10, p)
    assert ok and residuals == {}


def test_grassmannian_t0_is_inversion_law():
    datum = a2()
    p = symbolic_paramset(datum)
    w = wt(1, 1)
    ok, _ = grassmannian_check(1, w, 0, p)
    assert ok
    assert p.cplus(1, w) * p.cminus(1, w) == MINUS_ONE / p.beta(1, w)


def test_grassmannian_corrupted_prefactor_fails_at_t1():
    datum = a2()
    p = symbolic_paramset(datum)
    ok, residuals = grassmannian_check(1, wt(0, 0), 3, p, prefactor_scale=FieldElem.from_int(2))
    assert not ok
    assert 1 in residuals and residuals[1]


def test_expand_bubbles_splits_terms():
    datum = a2()
    p = symbolic_paramset(datum)
    w = wt(1, 0)
    b = DiagramBuilder(datum, w, [])
    b.bubble(1, "cw", 0)  # degree zero: evaluates to c+
    fm = expand_bubbles(__import__("catq.diagrams", fromlist=["Formal2Mor"]).Formal2Mor({b.term(): ONE}), p)
    (term, coeff), = fm.items()
    assert term.raw == () and term.syms == ()
    assert coeff == p.cplus(1, w)


def test_relation_degree_homogeneity():
    datum = a2()
    p = symbolic_paramset(datum)
    from catq.relations import CORPUS, InapplicableRelation

    for w in [wt(a, b) for a in range(-3, 4) for b in range(-2, 3)]:
        for template in CORPUS:
            for i, j in [(1, 2), (2, 1)]:
                if not template.applicable(datum, i, j):
                    continue
                try:
                    eqs = instantiate_relation(template, i, j, w, p)
                except InapplicableRelation:
                    continue
                for lhs, rhs in eqs:
                    degs = {t.degree(datum) for t, _ in lhs.items()} | {
                        t.degree(datum) for t, _ in rhs.items()
                    }
                    assert len(degs) <= 1, (template.name, i, j, w.label(), degs)


def test_grammar_round_trip():
    datum = a2()
    text = """
    src: E_1 F_2 @ 1,0
    cup_l(2)@1
    cross(2,1)@2
    cap_l(2)@3
    dot(2)@1
    """
    term = parse_diagram(text, datum)
    assert len(term.slices) == 4
    out = format_diagram(term, datum)
    term2 = parse_diagram(out, datum)
    assert term2 == term


def test_grammar_gl_weight():
    datum = a2()
    term = parse_diagram("src: E_1 @ (2,0,1)", datum)
    assert term.src.weight.entries == (2, 0, 1)
