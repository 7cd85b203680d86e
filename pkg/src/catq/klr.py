"""Arithmetic in the KLR algebra by rewriting to the dots-on-top basis.

A basis term is ``x^a . psi_w . e(word)``: an idempotent for the bottom color
word, the crossings of the canonical reduced word of w (bottom to top), and
dots at the top positions.  The canonical reduced word peels the minimal
right descent first, so it is the lexicographically smallest reduced word
read bottom to top.

Multiplication threads dot polynomials up through crossings (spawning
crossing-free correction terms at equal colors), concatenates crossing words,
and reduces: the first length drop is exposed as a doubled letter (braid
moves with their t-corrections), killed by the quadratic relation, and the
survivors are rewritten to canonical words.  Local relations used:

* psi^2 = 0 / t_ij / t_ij x_1 + t_ji x_2   on e(..ij..) by i.j = 2 / 0 / -1,
* psi x_1 - x_2 psi = e = x_1 psi - psi x_2  at equal colors, free slides
  otherwise,
* psi_1 psi_2 psi_1 - psi_2 psi_1 psi_2 = t_ij e  on e(iji) with i.j = -1,
  braid moves free in every other case.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .field import ONE, ZERO, FieldElem


class KLRError(ValueError):
    pass


# -- permutations (tuples, 0-based one-line notation) -------------------------


def identity_perm(m):
    return tuple(range(m))


def apply_s_top(perm, k):
    """s_k composed on top: strands ending at k, k+1 swap targets."""
    out = [k + 1 if t == k else k if t == k + 1 else t for t in perm]
    return tuple(out)


def apply_s_bottom(perm, k):
    """s_k composed at the bottom: perm o s_k."""
    out = list(perm)
    out[k], out[k + 1] = out[k + 1], out[k]
    return tuple(out)


def perm_length(perm):
    n = len(perm)
    return sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])


@lru_cache(maxsize=None)
def canonical_word(perm):
    """Lex-least bottom-to-top reduced word: peel the minimal right descent."""
    word = []
    p = list(perm)
    while True:
        for k in range(len(p) - 1):
            if p[k] > p[k + 1]:
                word.append(k)
                p[k], p[k + 1] = p[k + 1], p[k]
                break
        else:
            return tuple(word)


def word_perm(m, word):
    p = identity_perm(m)
    for k in word:
        p = apply_s_top(p, k)
    return p


def top_word(colors, perm):
    out = [None] * len(colors)
    for b, t in enumerate(perm):
        out[t] = colors[b]
    return tuple(out)


# -- dot polynomials -----------------------------------------------------------
# a dot polynomial maps exponent tuples to FieldElem coefficients


def dp_add(p1, p2):
    out = dict(p1)
    for e, c in p2.items():
        nc = out.get(e, ZERO) + c
        if nc.is_zero():
            out.pop(e, None)
        else:
            out[e] = nc
    return out


def dp_scale(p, c):
    if c.is_zero():
        return {}
    return {e: co * c for e, co in p.items()}


def dp_mul(p1, p2):
    out = {}
    for e1, c1 in p1.items():
        for e2, c2 in p2.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            nc = out.get(e, ZERO) + c1 * c2
            if nc.is_zero():
                out.pop(e, None)
            else:
                out[e] = nc
    return out


def _swap_exp(e, k):
    out = list(e)
    out[k], out[k + 1] = out[k + 1], out[k]
    return tuple(out)


def _divided_difference(e, k):
    """(x^e - s_k x^e) / (x_k - x_{k+1}) as a dot polynomial."""
    p, q = e[k], e[k + 1]
    if p == q:
        return {}
    sign = 1 if p > q else -1
    lo, hi = min(p, q), max(p, q)
    out = {}
    for u in range(lo, hi):
        ee = list(e)
        ee[k], ee[k + 1] = u, p + q - 1 - u
        out[tuple(ee)] = FieldElem.from_fraction(Fraction(sign))
    return out


class KLRAlgebra:
    """The KLR algebra over a Cartan datum for one choice of scalars."""

    def __init__(self, datum, q):
        self.datum = datum
        self.q = q  # ScalarChoice: only the off-diagonal t_ij are used

    # -- threading dots through crossing words --------------------------------

    def _thread(self, word, poly, colors):
        """Push a dot polynomial up through a bottom-to-top crossing word.

        Yields (poly_at_top, surviving_subword); corrections at equal-color
        crossings drop the crossing.
        """
        if not word or not poly:
            yield poly, []
            return
        k = word[0]
        c1, c2 = colors[k], colors[k + 1]
        swapped = {_swap_exp(e, k): c for e, c in poly.items()}
        new_colors = list(colors)
        new_colors[k], new_colors[k + 1] = new_colors[k + 1], new_colors[k]
        for top, sub in self._thread(word[1:], swapped, tuple(new_colors)):
            yield top, [k] + sub
        if c1 == c2:
            corr = {}
            for e, c in poly.items():
                corr = dp_add(corr, dp_scale(_divided_difference(e, k), c))
            if corr:
                yield from self._thread(word[1:], corr, colors)

    # -- exposing descents -----------------------------------------------------

    def _expose_top(self, word, k, colors):
        """Rewrite a reduced bottom-to-top word to end with the top-exposable
        letter k.  Returns (principal_word, corrections) where corrections are
        (coeff, word) pairs with three fewer letters (possibly non-reduced)."""
        if word[-1] == k:
            return list(word), []
        t = word[-1]
        if abs(t - k) >= 2:
            principal, corrs = self._expose_top(word[:-1], k, colors)
            return principal[:-1] + [t, k], [(c, w + [t]) for c, w in corrs]
        # adjacent letters: build ... t k t and braid
        q_word, corrs1 = self._expose_top(word[:-1], k, colors)
        r_word, corrs2 = self._expose_top(q_word[:-1], t, colors)
        base = r_word[:-1]
        principal = base + [k, t, k]
        out_corr = [(c, w + [t]) for c, w in corrs1]
        out_corr += [(c, w + [k, t]) for c, w in corrs2]
        # braid correction on the patch above `base`
        p = min(t, k)
        gamma = top_word(colors, word_perm(len(colors), base))
        a, b, c3 = gamma[p], gamma[p + 1], gamma[p + 2]
        if a == c3 and self.datum.a(a, b) == -1:
            coeff = self.q.t(a, b) if t == p else -self.q.t(a, b)
            out_corr.append((coeff, list(base)))
        return principal, out_corr

    def _expose_bottom(self, word, j, colors):
        """Mirror of _expose_top: rewrite a reduced word to start with j."""
        if word[0] == j:
            return list(word), []
        t = word[0]
        if abs(t - j) >= 2:
            principal, corrs = self._expose_bottom(word[1:], j, colors)
            return [j, t] + principal[1:], [(c, [t] + w) for c, w in corrs]
        q_word, corrs1 = self._expose_bottom(word[1:], j, colors)
        r_word, corrs2 = self._expose_bottom(q_word[1:], t, colors)
        base = r_word[1:]
        principal = [j, t, j] + base
        out_corr = [(c, [t] + w) for c, w in corrs1]
        out_corr += [(c, [t, j] + w) for c, w in corrs2]
        p = min(t, j)
        a, b, c3 = colors[p], colors[p + 1], colors[p + 2]
        if a == c3 and self.datum.a(a, b) == -1:
            # bottom-to-top [t, j, t] -> [j, t, j]
            coeff = self.q.t(a, b) if t == p else -self.q.t(a, b)
            out_corr.append((coeff, list(base)))
        return principal, out_corr

    # -- word normalization ------------------------------------------------------

    def normalize_word(self, word, colors):
        """An arbitrary crossing word over e(colors) as a normal element
        {(dots, perm): coeff} (dots at the top)."""
        word = list(word)
        m = len(colors)
        # find the first letter (bottom up) that drops the length
        p = identity_perm(m)
        length = 0
        for idx, k in enumerate(word):
            nxt = apply_s_top(p, k)
            nl = perm_length(nxt)
            if nl < length:
                return self._reduce_at(word, idx, colors)
            p, length = nxt, nl
        return self._element_of_reduced(word, colors)

    def _reduce_at(self, word, idx, colors):
        k = word[idx]
        prefix, rest = word[:idx], word[idx + 1:]
        principal, corrs = self._expose_top(prefix, k, colors)
        out = {}
        # principal: ... k k ... -> quadratic
        base = principal[:-1]
        gamma = top_word(colors, word_perm(len(colors), base))
        c1, c2 = gamma[k], gamma[k + 1]
        if c1 != c2:
            coeff = self.q.t(c1, c2)
            if self.datum.a(c1, c2) == 0:
                sub = self.normalize_word(base + rest, colors)
                out = _elem_add(out, _elem_scale(sub, coeff))
            else:
                e1 = [0] * len(colors)
                e1[k] = 1
                e2 = [0] * len(colors)
                e2[k + 1] = 1
                poly = {tuple(e1): self.q.t(c1, c2), tuple(e2): self.q.t(c2, c1)}
                for top, sub_rest in self._thread(rest, poly, gamma):
                    piece = self.normalize_word(base + sub_rest, colors)
                    out = _elem_add(out, _elem_dots(piece, top))
        # corrections from the exposure
        for coeff, cw in corrs:
            piece = self.normalize_word(cw + [k] + rest, colors)
            out = _elem_add(out, _elem_scale(piece, coeff))
        return out

    def _element_of_reduced(self, word, colors):
        if not word:
            zero_dots = tuple([0] * len(colors))
            return {(zero_dots, identity_perm(len(colors))): ONE}
        perm = word_perm(len(colors), word)
        cw = canonical_word(perm)
        if tuple(word) == cw:
            zero_dots = tuple([0] * len(colors))
            return {(zero_dots, perm): ONE}
        j = cw[0]
        principal, corrs = self._expose_bottom(word, j, colors)
        swapped = list(colors)
        swapped[j], swapped[j + 1] = swapped[j + 1], swapped[j]
        inner = self._element_of_reduced(principal[1:], tuple(swapped))
        out = {}
        for (dots, u), coeff in inner.items():
            piece = self.normalize_word([j] + list(canonical_word(u)), colors)
            out = _elem_add(out, _elem_scale(_elem_dots(piece, {dots: ONE}), coeff))
        for coeff, cw2 in corrs:
            piece = self.normalize_word(cw2, colors)
            out = _elem_add(out, _elem_scale(piece, coeff))
        return out

    # -- public element API -------------------------------------------------------

    def term(self, word, perm=None, dots=None, coeff=ONE):
        word = tuple(word)
        m = len(word)
        perm = tuple(perm) if perm is not None else identity_perm(m)
        dots = tuple(dots) if dots is not None else tuple([0] * m)
        if len(perm) != m or len(dots) != m:
            raise KLRError("word, perm, dots must share one length")
        return KLRElement(self, {(word, perm, dots): coeff})

    def idempotent(self, word):
        return self.term(word)

    def crossing(self, word, k):
        """psi_k e(word) (0-based position)."""
        m = len(word)
        if not 0 <= k < m - 1:
            raise KLRError(f"crossing position {k} out of range")
        return self.term(word, apply_s_top(identity_perm(m), k))

    def dot(self, word, pos):
        """x_pos e(word) (0-based position, dot at the top = bottom here)."""
        dots = [0] * len(word)
        dots[pos] = 1
        return self.term(word, None, dots)

    def from_sequence(self, word, items):
        """Build e(word) then stack items bottom-to-top: ('s', k) or ('x', pos)."""
        elem = self.idempotent(word)
        for kind, pos in items:
            if kind == "x":
                out = {}
                for (bw, perm, dots), coeff in elem.terms.items():
                    nd = list(dots)
                    nd[pos] += 1
                    out[(bw, perm, tuple(nd))] = coeff
                elem = KLRElement(self, out)
            elif kind == "s":
                acc = KLRElement(self, {})
                for (bw, perm, dots), coeff in elem.terms.items():
                    tw = top_word(bw, perm)
                    single = KLRElement(self, {(bw, perm, dots): coeff})
                    acc = acc + self.crossing(tw, pos).mul(single)
                elem = acc
            else:
                raise KLRError(f"unknown item {(kind, pos)!r}")
        return elem


def _elem_add(e1, e2):
    out = dict(e1)
    for key, c in e2.items():
        nc = out.get(key, ZERO) + c
        if nc.is_zero():
            out.pop(key, None)
        else:
            out[key] = nc
    return out


def _elem_scale(e, c):
    if c.is_zero():
        return {}
    return {k: co * c for k, co in e.items()}


def _elem_dots(e, poly):
    """Multiply a {(dots, perm): coeff} element by a top dot polynomial."""
    out = {}
    for (dots, perm), c in e.items():
        for extra, c2 in poly.items():
            nd = tuple(a + b for a, b in zip(dots, extra))
            key = (nd, perm)
            nc = out.get(key, ZERO) + c * c2
            if nc.is_zero():
                out.pop(key, None)
            else:
                out[key] = nc
    return out


class KLRElement:
    """A finite sum of basis terms {(word, perm, dots): coeff}."""

    def __init__(self, algebra, terms):
        self.algebra = algebra
        self.terms = {k: v for k, v in terms.items() if not v.is_zero()}

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            nv = out.get(k, ZERO) + v
            if nv.is_zero():
                out.pop(k, None)
            else:
                out[k] = nv
        return KLRElement(self.algebra, out)

    def __sub__(self, other):
        return self + other.scaled(-ONE)

    def scaled(self, c):
        return KLRElement(self.algebra, {k: v * c for k, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, KLRElement):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    def top_word(self, key):
        word, perm, _ = key
        return top_word(word, perm)

    def degree(self):
        """Common degree of all terms; None for zero, error if inhomogeneous."""
        deg = None
        datum = self.algebra.datum
        for (word, perm, dots), _ in self.terms.items():
            d = 2 * sum(dots)
            for a in range(len(word)):
                for b in range(a + 1, len(word)):
                    if perm[a] > perm[b]:
                        d -= datum.a(word[a], word[b])
            if deg is None:
                deg = d
            elif deg != d:
                raise KLRError("element is not homogeneous")
        return deg

    def mul(self, other):
        """Stack self on top of other (self . other)."""
        alg = self.algebra
        out = {}
        for (wu, pu, au), cu in self.terms.items():
            for (wv, pv, av), cv in other.terms.items():
                if top_word(wv, pv) != wu:
                    continue
                coeff = cu * cv
                word_u = list(canonical_word(pu))
                poly = {av: ONE}
                for top_poly, sub in alg._thread(word_u, poly, wu):
                    full = list(canonical_word(pv)) + sub
                    norm = alg.normalize_word(full, wv)
                    norm = _elem_dots(norm, top_poly)
                    norm = _elem_dots(norm, {au: ONE})
                    for (dots, perm), c in norm.items():
                        key = (wv, perm, dots)
                        nc = out.get(key, ZERO) + coeff * c
                        if nc.is_zero():
                            out.pop(key, None)
                        else:
                            out[key] = nc
        return KLRElement(alg, out)

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: repr(kv[0]))


def multiply(u, v):
    """Product u . v (u stacked on top); mismatched blocks multiply to zero."""
    return u.mul(v)


def normal_form(elem):
    """Re-normalize an element (idempotent on engine output)."""
    alg = elem.algebra
    out = KLRElement(alg, {})
    for (word, perm, dots), coeff in elem.terms.items():
        norm = alg.normalize_word(list(canonical_word(perm)), word)
        norm = _elem_dots(norm, {dots: ONE})
        out = out + KLRElement(alg, {(word, p, d): c * coeff for (d, p), c in norm.items()})
    return out


def graded_dim(datum, word, d):
    """Number of basis terms x^a psi_w e(word) of degree exactly d."""
    import itertools
    import math

    m = len(word)
    if m == 0:
        return 1 if d == 0 else 0
    count = 0
    for perm in itertools.permutations(range(m)):
        degw = 0
        for a in range(m):
            for b in range(a + 1, m):
                if perm[a] > perm[b]:
                    degw -= datum.a(word[a], word[b])
        rem = d - degw
        if rem >= 0 and rem % 2 == 0:
            count += math.comb(rem // 2 + m - 1, m - 1)
    return count


def gimel_crossing_scalar(datum, q, q2, D, root, c1, c2):
    """The rescaling of one crossing with bottom colors (c1, c2): inverse
    units at equal colors, a cocycle ratio when the left color precedes in
    the rooted tree order, and 1 otherwise."""
    from .params import tree_precedes

    if c1 == c2:
        return D[c1] ** (-1)
    if tree_precedes(datum, root, c1, c2):
        scalar = q.t(c2, c1) * q2.t(c2, c1) ** (-1)
        if datum.a(c1, c2) == -1:
            scalar = scalar * D[c2]
        return scalar
    return ONE


def gimel_term_scalar(datum, q, q2, D, root, key):
    """The rescaling unit attached to one basis term by the tree isomorphism."""
    word, perm, dots = key
    scalar = ONE
    tw = top_word(word, perm)
    for pos, a in enumerate(dots):
        if a:
            scalar = scalar * D[tw[pos]] ** a
    colors = list(word)
    for k in canonical_word(perm):
        scalar = scalar * gimel_crossing_scalar(datum, q, q2, D, root, colors[k], colors[k + 1])
        colors[k], colors[k + 1] = colors[k + 1], colors[k]
    return scalar


def apply_gimel(elem, q, q2, root):
    """The KLR isomorphism for tree graphs: rescale each basis term."""
    from .params import tree_D

    datum = elem.algebra.datum
    if not datum.graph.is_tree():
        raise KLRError("the KLR rescaling isomorphism needs a tree graph")
    D = tree_D(datum, q, q2, root)
    target = KLRAlgebra(datum, q2)
    out = {}
    for key, coeff in elem.terms.items():
        out[key] = coeff * gimel_term_scalar(datum, q, q2, D, root, key)
    return KLRElement(target, out)
