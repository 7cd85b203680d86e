"""The defining relations of the 2-category as instantiable templates.

Each template names one relation family and, given a parameter set, a choice
of colors, and a weight, produces the two sides as formal sums of diagram
terms.  The corpus covers exactly: biadjunction (4), dot cyclicity, crossing
cyclicity, the two sideways-crossing definitions, the three quadratic cases,
the two dot-slide families, the two cubic cases, the two mixed relations, the
bubble vanishing/degree-zero axioms, the Grassmannian truncations, and the
two EF/FE decompositions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagrams import DOWN, UP, DiagramBuilder, Formal2Mor
from .field import MINUS_ONE, ONE


@dataclass(frozen=True)
class RelationTemplate:
    name: str
    arity: str  # "i" (one color) or "ij" (ordered pair)
    build: callable  # (datum, p, i, j, weight) -> [(Formal2Mor, Formal2Mor)]
    applies: callable = None

    def applicable(self, datum, i, j):
        if self.arity == "ij" and i == j:
            return False
        return self.applies(datum, i, j) if self.applies else True


class InapplicableRelation(ValueError):
    pass


def _one(term):
    return Formal2Mor({term: ONE})


def _b(datum, w, profile):
    return DiagramBuilder(datum, w, profile)


# -- biadjunction ------------------------------------------------------------


def _biadjoint_1l(datum, p, i, j, w):
    zig = _b(datum, w, [(UP, i)]).cup_fe(i, 2).cap(1).term()
    ident = _b(datum, w, [(UP, i)]).term()
    return [(_one(zig), _one(ident))]


def _biadjoint_1r(datum, p, i, j, w):
    zig = _b(datum, w, [(DOWN, i)]).cup_fe(i, 1).cap(2).term()
    ident = _b(datum, w, [(DOWN, i)]).term()
    return [(_one(zig), _one(ident))]


def _biadjoint_2l(datum, p, i, j, w):
    zig = _b(datum, w, [(UP, i)]).cup_ef(i, 1).cap(2).term()
    ident = _b(datum, w, [(UP, i)]).term()
    return [(_one(zig), _one(ident))]


def _biadjoint_2r(datum, p, i, j, w):
    zig = _b(datum, w, [(DOWN, i)]).cup_ef(i, 2).cap(1).term()
    ident = _b(datum, w, [(DOWN, i)]).term()
    return [(_one(zig), _one(ident))]


# -- cyclicity ---------------------------------------------------------------


def _dot_cyclicity(datum, p, i, j, w):
    lhs = _b(datum, w, [(DOWN, i)]).cup_ef(i, 2).dot(2).cap(1).term()
    rhs = _b(datum, w, [(DOWN, i)]).cup_fe(i, 1).dot(2).cap(2).term()
    return [(_one(lhs), _one(rhs))]


def _rotation_cw(datum, w, i, j):
    """Clockwise full rotation of the upward (i, j) crossing: F_iF_j -> F_jF_i."""
    return (
        _b(datum, w, [(DOWN, i), (DOWN, j)])
        .cup_fe(j, 1)
        .cup_fe(i, 2)
        .cross(3)
        .cap(4)
        .cap(3)
        .term()
    )


def _rotation_ccw(datum, w, i, j):
    """Counterclockwise full rotation of the same crossing."""
    return (
        _b(datum, w, [(DOWN, i), (DOWN, j)])
        .cup_ef(i, 3)
        .cup_ef(j, 4)
        .cross(3)
        .cap(2)
        .cap(1)
        .term()
    )


def _crossing_cyclicity(datum, p, i, j, w):
    return [(_one(_rotation_cw(datum, w, i, j)), _one(_rotation_ccw(datum, w, i, j)))]


# -- sideways crossings ------------------------------------------------------


def sideways_up_down(datum, w, i, j):
    """The composite defining the crossing on (E_i, F_j): E_iF_j -> F_jE_i."""
    return _b(datum, w, [(UP, i), (DOWN, j)]).cup_fe(j, 1).cross(2).cap(3)


def sideways_down_up(datum, w, i, j):
    """The composite defining the crossing on (F_i, E_j): F_iE_j -> E_jF_i."""
    return _b(datum, w, [(DOWN, i), (UP, j)]).cup_ef(i, 3).cross(2).cap(1)


def _sideways_def_lr(datum, p, i, j, w):
    prim = _b(datum, w, [(UP, i), (DOWN, j)]).cross(1).term()
    return [(_one(prim), _one(sideways_up_down(datum, w, i, j).term()))]


def _sideways_def_rl(datum, p, i, j, w):
    prim = _b(datum, w, [(DOWN, i), (UP, j)]).cross(1).term()
    return [(_one(prim), _one(sideways_down_up(datum, w, i, j).term()))]


# -- KLR relations on upward strands ------------------------------------------


def _psi_sq(datum, w, i, j):
    return _b(datum, w, [(UP, i), (UP, j)]).cross(1).cross(1).term()


def _klr_quadratic_same(datum, p, i, j, w):
    return [(_one(_psi_sq(datum, w, i, i)), Formal2Mor())]


def _klr_quadratic_distant(datum, p, i, j, w):
    ident = _b(datum, w, [(UP, i), (UP, j)]).term()
    return [(_one(_psi_sq(datum, w, i, j)), Formal2Mor({ident: p.t(i, j)}))]


def _klr_quadratic_adjacent(datum, p, i, j, w):
    x1 = _b(datum, w, [(UP, i), (UP, j)]).dot(1).term()
    x2 = _b(datum, w, [(UP, i), (UP, j)]).dot(2).term()
    rhs = Formal2Mor({x1: p.t(i, j), x2: p.t(j, i)})
    return [(_one(_psi_sq(datum, w, i, j)), rhs)]


def _dot_slide_same(datum, p, i, j, w):
    def mk(*ops):
        b = _b(datum, w, [(UP, i), (UP, i)])
        for op, pos in ops:
            getattr(b, op)(pos)
        return b.term()

    ident = _b(datum, w, [(UP, i), (UP, i)]).term()
    # psi x_1 - x_2 psi = e  and  x_1 psi - psi x_2 = e
    eq_a = (
        Formal2Mor({mk(("dot", 1), ("cross", 1)): ONE, mk(("cross", 1), ("dot", 2)): MINUS_ONE}),
        _one(ident),
    )
    eq_b = (
        Formal2Mor({mk(("cross", 1), ("dot", 1)): ONE, mk(("dot", 2), ("cross", 1)): MINUS_ONE}),
        _one(ident),
    )
    return [eq_a, eq_b]


def _dot_slide_distant(datum, p, i, j, w):
    def mk(*ops):
        b = _b(datum, w, [(UP, i), (UP, j)])
        for op, pos in ops:
            getattr(b, op)(pos)
        return b.term()

    return [
        (_one(mk(("dot", 1), ("cross", 1))), _one(mk(("cross", 1), ("dot", 2)))),
        (_one(mk(("dot", 2), ("cross", 1))), _one(mk(("cross", 1), ("dot", 1)))),
    ]


def _triple(datum, w, word, order):
    b = _b(datum, w, [(UP, c) for c in word])
    for pos in order:
        b.cross(pos)
    return b.term()


def _klr_cubic_braid(datum, p, i, j, w):
    out = []
    words = [(i, i, j), (j, i, i)]
    if datum.a(i, j) != -1:
        words.append((i, j, i))
    for word in words:
        out.append((_one(_triple(datum, w, word, (1, 2, 1))), _one(_triple(datum, w, word, (2, 1, 2)))))
    return out


def _klr_cubic_adjacent(datum, p, i, j, w):
    word = (i, j, i)
    lhs = Formal2Mor(
        {_triple(datum, w, word, (1, 2, 1)): ONE, _triple(datum, w, word, (2, 1, 2)): MINUS_ONE}
    )
    ident = _b(datum, w, [(UP, c) for c in word]).term()
    return [(lhs, Formal2Mor({ident: p.t(i, j)}))]


# -- mixed relations -----------------------------------------------------------


def _double_sideways_fe_first(datum, w, i, j):
    """(E_i, F_j): up-strand crossing right then back: sideways_up_down then
    sideways_down_up stacked."""
    b = _b(datum, w, [(UP, i), (DOWN, j)])
    b.cup_fe(j, 1).cross(2).cap(3)
    b.cup_ef(j, 3).cross(2).cap(1)
    return b.term()


def _double_sideways_ef_first(datum, w, i, j):
    """(F_j, E_i): the other stacking order."""
    b = _b(datum, w, [(DOWN, j), (UP, i)])
    b.cup_ef(j, 3).cross(2).cap(1)
    b.cup_fe(j, 1).cross(2).cap(3)
    return b.term()


def _mixed_ef(datum, p, i, j, w):
    ident = _b(datum, w, [(DOWN, j), (UP, i)]).term()
    return [(_one(_double_sideways_ef_first(datum, w, i, j)), _one(ident))]


def _mixed_fe(datum, p, i, j, w):
    ident = _b(datum, w, [(UP, i), (DOWN, j)]).term()
    return [(_one(_double_sideways_fe_first(datum, w, i, j)), _one(ident))]


# -- bubble axioms -------------------------------------------------------------


def _bubble_vanishing(datum, p, i, j, w):
    w_i = w.pairing(datum, i)
    out = []
    for m in range(max(w_i - 1, 0)):
        lhs = _b(datum, w, []).bubble(i, "cw", m).term()
        out.append((_one(lhs), Formal2Mor()))
    for m in range(max(-w_i - 1, 0)):
        lhs = _b(datum, w, []).bubble(i, "ccw", m).term()
        out.append((_one(lhs), Formal2Mor()))
    if not out:
        raise InapplicableRelation(f"no vanishing bubbles at pairing {w_i}")
    return out


def _bubble_degree_zero(datum, p, i, j, w):
    w_i = w.pairing(datum, i)
    empty = _b(datum, w, []).term()
    out = []
    if w_i >= 1:
        lhs = _b(datum, w, []).bubble(i, "cw", w_i - 1).term()
        out.append((_one(lhs), Formal2Mor({empty: p.cplus(i, w)})))
    if w_i <= -1:
        lhs = _b(datum, w, []).bubble(i, "ccw", -w_i - 1).term()
        out.append((_one(lhs), Formal2Mor({empty: p.cminus(i, w)})))
    if not out:
        raise InapplicableRelation(f"no degree-zero real bubbles at pairing {w_i}")
    return out


GRASSMANNIAN_CORPUS_DEPTH = 4


def _grassmannian(datum, p, i, j, w, depth=None):
    w_i = w.pairing(datum, i)
    empty = _b(datum, w, []).term()
    out = []
    for n in range(0, (depth or GRASSMANNIAN_CORPUS_DEPTH) + 1):
        lhs = Formal2Mor()
        for x in range(n + 1):
            term = (
                _b(datum, w, [])
                .bubble(i, "cw", w_i - 1 + x)
                .bubble(i, "ccw", -w_i - 1 + (n - x))
                .term()
            )
            lhs.add(term, ONE)
        rhs = Formal2Mor({empty: MINUS_ONE / p.beta(i, w)}) if n == 0 else Formal2Mor()
        out.append((lhs, rhs))
    return out


# -- EF / FE decompositions ----------------------------------------------------


def _curl_term_ef(datum, w, i, f1, f2, f3):
    """Cap off E_iF_i with f1 dots, a middle counterclockwise bubble, then a
    cup with f3 dots (dots sit on the downward legs)."""
    w_i = w.pairing(datum, i)
    b = _b(datum, w, [(UP, i), (DOWN, i)])
    for _ in range(f1):
        b.dot(2)
    b.cap(1)
    b.bubble(i, "ccw", -w_i - 1 + f2)
    b.cup_ef(i, 1)
    for _ in range(f3):
        b.dot(2)
    return b.term()


def _curl_term_fe(datum, w, i, f1, f2, f3):
    w_i = w.pairing(datum, i)
    b = _b(datum, w, [(DOWN, i), (UP, i)])
    for _ in range(f1):
        b.dot(2)
    b.cap(1)
    b.bubble(i, "cw", w_i - 1 + f2)
    b.cup_fe(i, 1)
    for _ in range(f3):
        b.dot(2)
    return b.term()


def _compositions(total):
    if total < 0:
        return
    for f1 in range(total + 1):
        for f2 in range(total - f1 + 1):
            yield f1, f2, total - f1 - f2


def _sl2_ef(datum, p, i, j, w):
    """Id_{E_iF_i} = beta * (double sideways) - beta * sum of curl terms."""
    beta = p.beta(i, w)
    ident = _b(datum, w, [(UP, i), (DOWN, i)]).term()
    rhs = Formal2Mor({_double_sideways_fe_first(datum, w, i, i): beta})
    for f1, f2, f3 in _compositions(w.pairing(datum, i) - 1):
        rhs.add(_curl_term_ef(datum, w, i, f1, f2, f3), -beta)
    return [(_one(ident), rhs)]


def _sl2_fe(datum, p, i, j, w):
    beta = p.beta(i, w)
    ident = _b(datum, w, [(DOWN, i), (UP, i)]).term()
    rhs = Formal2Mor({_double_sideways_ef_first(datum, w, i, i): beta})
    for f1, f2, f3 in _compositions(-w.pairing(datum, i) - 1):
        rhs.add(_curl_term_fe(datum, w, i, f1, f2, f3), -beta)
    return [(_one(ident), rhs)]


# -- the corpus ----------------------------------------------------------------


def _adjacent(datum, i, j):
    return datum.a(i, j) == -1


def _distant(datum, i, j):
    return datum.a(i, j) == 0


CORPUS = [
    RelationTemplate("biadjoint_1l", "i", _biadjoint_1l),
    RelationTemplate("biadjoint_1r", "i", _biadjoint_1r),
    RelationTemplate("biadjoint_2l", "i", _biadjoint_2l),
    RelationTemplate("biadjoint_2r", "i", _biadjoint_2r),
    RelationTemplate("dot_cyclicity", "i", _dot_cyclicity),
    RelationTemplate("crossing_cyclicity", "ij", _crossing_cyclicity),
    RelationTemplate("sideways_def_lr", "ij", _sideways_def_lr),
    RelationTemplate("sideways_def_rl", "ij", _sideways_def_rl),
    RelationTemplate("klr_quadratic_same", "i", _klr_quadratic_same),
    RelationTemplate("klr_quadratic_distant", "ij", _klr_quadratic_distant, _distant),
    RelationTemplate("klr_quadratic_adjacent", "ij", _klr_quadratic_adjacent, _adjacent),
    RelationTemplate("dot_slide_same", "i", _dot_slide_same),
    RelationTemplate("dot_slide_distant", "ij", _dot_slide_distant),
    RelationTemplate("klr_cubic_braid", "ij", _klr_cubic_braid),
    RelationTemplate("klr_cubic_adjacent", "ij", _klr_cubic_adjacent, _adjacent),
    RelationTemplate("mixed_ef", "ij", _mixed_ef),
    RelationTemplate("mixed_fe", "ij", _mixed_fe),
    RelationTemplate("bubble_vanishing", "i", _bubble_vanishing),
    RelationTemplate("bubble_degree_zero", "i", _bubble_degree_zero),
    RelationTemplate("grassmannian", "i", _grassmannian),
    RelationTemplate("sl2_ef", "i", _sl2_ef),
    RelationTemplate("sl2_fe", "i", _sl2_fe),
]

CORPUS_BY_NAME = {r.name: r for r in CORPUS}


def instantiate_relation(template, i, j, weight, p):
    """Both sides of every equation of the template at (i, j, weight),
    coefficients evaluated in p, raw bubbles kept symbolic."""
    if isinstance(template, str):
        template = CORPUS_BY_NAME[template]
    if not template.applicable(p.datum, i, j):
        raise InapplicableRelation(f"{template.name} does not apply to ({i}, {j})")
    return template.build(p.datum, p, i, j, weight)
