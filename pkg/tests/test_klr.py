"""The KLR rewriting engine: defining relations, normal forms, dimensions."""

import itertools
import random

import pytest

import _polyrep
from catq.cartan import build_cartan, path_graph
from catq.field import MINUS_ONE, ONE
from catq.klr import (
    KLRAlgebra,
    apply_gimel,
    canonical_word,
    graded_dim,
    multiply,
    normal_form,
    perm_length,
    top_word,
    word_perm,
)
from catq.params import ScalarChoice, symbolic_t


def algebra(n=2, prefix="t"):
    datum = build_cartan(path_graph(n))
    beta = {i: MINUS_ONE for i in datum.vertices}
    return KLRAlgebra(datum, ScalarChoice(datum, symbolic_t(datum, prefix), beta))


A2 = algebra(2)
A3 = algebra(3)


def seq(alg, word, *items):
    return alg.from_sequence(tuple(word), list(items))


def test_canonical_word_is_lex_least():
    import itertools as it

    for m in (2, 3, 4):
        for perm in it.permutations(range(m)):
            cw = canonical_word(perm)
            assert word_perm(m, cw) == perm
            assert len(cw) == perm_length(perm)
            reduced = [
                w
                for w in it.product(range(m - 1), repeat=len(cw))
                if word_perm(m, list(w)) == perm
            ]
            assert cw == min(reduced) if reduced else cw == ()


def test_quadratic_same_color():
    out = seq(A2, (1, 1), ("s", 0), ("s", 0))
    assert out.is_zero()


def test_quadratic_distant():
    alg = A3
    out = seq(alg, (1, 3), ("s", 0), ("s", 0))
    assert out == alg.idempotent((1, 3)).scaled(alg.q.t(1, 3))


def test_quadratic_adjacent():
    alg = A2
    out = seq(alg, (1, 2), ("s", 0), ("s", 0))
    expected = alg.dot((1, 2), 0).scaled(alg.q.t(1, 2)) + alg.dot((1, 2), 1).scaled(alg.q.t(2, 1))
    assert out == expected


def test_dot_slide_same_color():
    alg = A2
    # psi x_1 - x_2 psi = e(ii)
    lhs = seq(alg, (1, 1), ("x", 0), ("s", 0)) - seq(alg, (1, 1), ("s", 0), ("x", 1))
    assert lhs == alg.idempotent((1, 1))
    # x_1 psi - psi x_2 = e(ii)
    lhs2 = seq(alg, (1, 1), ("s", 0), ("x", 0)) - seq(alg, (1, 1), ("x", 1), ("s", 0))
    assert lhs2 == alg.idempotent((1, 1))


def test_dot_slide_distant_colors():
    alg = A2
    assert seq(alg, (1, 2), ("x", 0), ("s", 0)) == seq(alg, (1, 2), ("s", 0), ("x", 1))
    assert seq(alg, (1, 2), ("x", 1), ("s", 0)) == seq(alg, (1, 2), ("s", 0), ("x", 0))


def test_cubic_braid_free():
    for word in [(1, 1, 2), (2, 1, 1), (1, 3, 1)]:
        alg = A3 if 3 in word else A2
        a = seq(alg, word, ("s", 0), ("s", 1), ("s", 0))
        b = seq(alg, word, ("s", 1), ("s", 0), ("s", 1))
        assert a == b


def test_cubic_adjacent_correction():
    alg = A2
    word = (1, 2, 1)
    a = seq(alg, word, ("s", 0), ("s", 1), ("s", 0))
    b = seq(alg, word, ("s", 1), ("s", 0), ("s", 1))
    assert a - b == alg.idempotent(word).scaled(alg.q.t(1, 2))


def test_cubic_spec_normal_orientation():
    alg = A2
    word = (1, 2, 1)
    a = seq(alg, word, ("s", 0), ("s", 1), ("s", 0))
    b = seq(alg, word, ("s", 1), ("s", 0), ("s", 1))
    expected = b + alg.idempotent(word).scaled(alg.q.t(1, 2))
    assert a == expected


def _random_terms(alg, rng, strands, count, max_word_items=5):
    verts = list(alg.datum.vertices)
    out = []
    for _ in range(count):
        word = tuple(rng.choice(verts) for _ in range(strands))
        items = []
        for _ in range(rng.randint(0, max_word_items)):
            if rng.random() < 0.5:
                items.append(("s", rng.randrange(strands - 1)))
            else:
                items.append(("x", rng.randrange(strands)))
        out.append(alg.from_sequence(word, items))
    return out


def test_multiply_associative_random():
    rng = random.Random(11)
    alg = A2
    checked = 0
    for _ in range(120):
        (u,) = _random_terms(alg, rng, 3, 1, 3)
        if u.is_zero():
            continue
        key = next(iter(u.terms))
        mid_word = u.top_word(key)
        v = alg.from_sequence(
            mid_word,
            [("s", rng.randrange(2)) for _ in range(rng.randint(0, 2))]
            + [("x", rng.randrange(3)) for _ in range(rng.randint(0, 2))],
        )
        if v.is_zero():
            continue
        vkey = next(iter(v.terms))
        topw = v.top_word(vkey)
        w = alg.from_sequence(topw, [("s", rng.randrange(2))])
        left = multiply(multiply(w, v), u)
        right = multiply(w, multiply(v, u))
        assert left == right
        checked += 1
    assert checked >= 60


def test_multiply_respects_degree():
    rng = random.Random(5)
    alg = A2
    for _ in range(60):
        (u,) = _random_terms(alg, rng, 3, 1, 4)
        if u.is_zero():
            continue
        key = next(iter(u.terms))
        v = alg.from_sequence(u.top_word(key), [("s", 0), ("x", 1)])
        prod = multiply(v, u)
        if prod.is_zero() or v.is_zero():
            continue
        assert prod.degree() == u.degree() + v.degree()


def test_mismatched_blocks_multiply_to_zero():
    alg = A2
    u = alg.idempotent((1, 2))
    v = alg.idempotent((2, 2))
    assert multiply(u, v).is_zero()


def test_normal_form_idempotent():
    rng = random.Random(3)
    alg = A2
    for _ in range(40):
        (u,) = _random_terms(alg, rng, 3, 1, 5)
        nf = normal_form(u)
        assert nf == u
        assert normal_form(nf) == nf


def test_confluence_incremental_vs_whole_word():
    # same element built one crossing at a time vs normalized as one word:
    # two genuinely different rule application orders
    rng = random.Random(23)
    alg = A2
    verts = list(alg.datum.vertices)
    for _ in range(120):
        strands = rng.choice([2, 3, 4])
        word = tuple(rng.choice(verts) for _ in range(strands))
        letters = [rng.randrange(strands - 1) for _ in range(rng.randint(0, 6))]
        incremental = alg.from_sequence(word, [("s", k) for k in letters])
        whole = alg.normalize_word(letters, word)
        direct = alg.idempotent(word)
        from catq.klr import KLRElement

        whole_elem = KLRElement(alg, {(word, perm, dots): c for (dots, perm), c in whole.items()})
        assert incremental == whole_elem, (word, letters)
        assert not direct.is_zero()


def test_polynomial_oracle_agrees_with_engine():
    # independent check: the polynomial action of u.v equals acting twice
    rng = random.Random(41)
    alg = A2
    m = 3
    ok = 0
    for _ in range(80):
        verts = list(alg.datum.vertices)
        word = tuple(rng.choice(verts) for _ in range(m))
        items_v = [("s", rng.randrange(m - 1)) for _ in range(rng.randint(0, 3))]
        v = alg.from_sequence(word, items_v)
        if v.is_zero():
            continue
        topw = v.top_word(next(iter(v.terms)))
        items_u = [("s", rng.randrange(m - 1)) for _ in range(rng.randint(0, 3))] + [
            ("x", rng.randrange(m))
        ]
        u = alg.from_sequence(topw, items_u)
        if u.is_zero():
            continue
        prod = multiply(u, v)
        for f in ({(0,) * m: ONE}, {(1, 0, 2): ONE}):
            via_engine = _polyrep.act(prod, f) if not prod.is_zero() else {}
            via_oracle = {}
            mid = _polyrep.act(v, f)
            if mid:
                via_oracle = _polyrep.act(u, mid) if not u.is_zero() else {}
            keys = set(via_engine) | set(via_oracle)
            from catq.field import ZERO

            for k in keys:
                assert via_engine.get(k, ZERO) == via_oracle.get(k, ZERO)
        ok += 1
    assert ok >= 40


def test_graded_dim_examples():
    datum = A2.datum
    assert graded_dim(datum, (1, 1), -2) == 1
    assert graded_dim(datum, (1, 1), 0) == 3
    for k in range(4):
        assert graded_dim(datum, (1,), 2 * k) == 1
    assert graded_dim(datum, (1,), 1) == 0


def test_graded_dim_matches_basis_enumeration():
    datum = A2.datum
    word = (1, 2)
    for d in range(-2, 5):
        count = 0
        for perm in itertools.permutations(range(2)):
            for a0 in range(6):
                for a1 in range(6):
                    deg = 2 * (a0 + a1)
                    if perm != (0, 1):
                        deg -= datum.a(1, 2)
                    if deg == d:
                        count += 1
        assert graded_dim(datum, word, d) == count


def test_gimel_is_algebra_map_on_relations():
    datum = A3.datum
    beta = {i: MINUS_ONE for i in datum.vertices}
    q = ScalarChoice(datum, symbolic_t(datum, "t"), beta)
    q2 = ScalarChoice(datum, symbolic_t(datum, "u"), beta)
    alg = KLRAlgebra(datum, q)
    for root in datum.vertices:
        # quadratic, adjacent pair
        lhs = seq(alg, (1, 2), ("s", 0), ("s", 0))
        rhs = alg.dot((1, 2), 0).scaled(q.t(1, 2)) + alg.dot((1, 2), 1).scaled(q.t(2, 1))
        img_l = apply_gimel(lhs, q, q2, root)
        img_r = apply_gimel(rhs, q, q2, root)
        # the image must satisfy the target quadratic relation
        alg2 = KLRAlgebra(datum, q2)
        lhs2 = seq(alg2, (1, 2), ("s", 0), ("s", 0))
        scale = img_l.terms[next(iter(img_l.terms))] / lhs2.terms[next(iter(lhs2.terms))]
        # img_l = scale * (target psi^2) must equal img_r rewritten in target
        target_rhs = alg2.dot((1, 2), 0).scaled(q2.t(1, 2) * scale) + alg2.dot((1, 2), 1).scaled(
            q2.t(2, 1) * scale
        )
        assert set(img_r.terms) == set(target_rhs.terms)
        for key in img_r.terms:
            assert img_r.terms[key] == target_rhs.terms[key]
