"""Rescaling 2-functors as scalar tables on the generating 2-morphisms.

Every functor here fixes objects and 1-morphisms (or maps weights through an
explicit weight map) and multiplies each generator by an invertible scalar,
so the image of a diagram term is a single scalar times the same term: the
scalar tables below are the whole functor.  Scalars for downward dots,
downward and sideways crossings, and closed bubbles are derived from their
defining composites, so each table only covers upward dots, upward
crossings, and the four caps/cups.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagrams import DOWN, UP, DiagramError
from .field import MINUS_ONE, ONE, FieldElem
from .params import ParamError, nilhecke_rescale, tree_D, tree_precedes


class FunctorError(ValueError):
    pass


MUTATION_BRANCHES = {
    "digamma": [
        "cap_ef_special",
        "cap_ef_other",
        "cap_fe_special",
        "cap_fe_other",
        "cup_ef_special",
        "cup_ef_other",
        "cup_fe_special",
        "cup_fe_other",
    ],
    "beth": ["dot", "cross_same"],
    "gimel": ["dot", "cross_same", "cross_low_adjacent", "cross_low_distant", "cap_ef", "cup_fe"],
}

_MUTANT = FieldElem.from_int(2)


@dataclass
class GeneratorScaling:
    """A 2-functor presented by its scalar on each generating 2-morphism.

    ``rules`` maps the primitive kinds (updot, upcross, cup_ef, cup_fe,
    cap_ef, cap_fe) to callables; everything else is derived.
    """

    name: str
    source: object  # ParamSet
    target: object  # ParamSet or None (recorded-only functors)
    rules: dict
    object_map: callable = None
    mutated_branch: str = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.object_map is None:
            self.object_map = lambda w: w

    @property
    def datum(self):
        return self.source.datum

    # -- primitive scalars --------------------------------------------------

    def updot(self, i, w):
        return self.rules["updot"](i, w)

    def upcross(self, a, b, w):
        return self.rules["upcross"](a, b, w)

    def cup_ef(self, i, w):
        return self.rules["cup_ef"](i, w)

    def cup_fe(self, i, w):
        return self.rules["cup_fe"](i, w)

    def cap_ef(self, i, w):
        return self.rules["cap_ef"](i, w)

    def cap_fe(self, i, w):
        return self.rules["cap_fe"](i, w)

    # -- derived scalars ------------------------------------------------------

    def downdot(self, i, w):
        """Dot on a downward strand whose right region is w."""
        return self.cup_ef(i, w) * self.updot(i, w.shifted(i, -1)) * self.cap_fe(i, w.shifted(i, -1))

    def downcross(self, a, b, w):
        """Downward (a, b) crossing via its clockwise rotation."""
        wa = w.shifted(a, -1)
        return (
            self.cup_fe(b, wa.shifted(b, -1))
            * self.cup_fe(a, wa)
            * self.upcross(a, b, wa.shifted(b, -1))
            * self.cap_ef(a, w.shifted(b, -1))
            * self.cap_ef(b, w)
        )

    def sideways_ud(self, a, b, w):
        """Crossing on (E_a, F_b) with right region w."""
        return (
            self.cup_fe(b, w.shifted(a, 1).shifted(b, -1))
            * self.upcross(b, a, w.shifted(b, -1))
            * self.cap_ef(b, w)
        )

    def sideways_du(self, a, b, w):
        """Crossing on (F_a, E_b) with right region w."""
        return (
            self.cup_ef(a, w)
            * self.upcross(b, a, w.shifted(a, -1))
            * self.cap_fe(a, w.shifted(b, 1).shifted(a, -1))
        )

    def bubble(self, orient, i, dots, w):
        """A closed bubble with ``dots`` dots (fake counts included) at w."""
        d = self.updot(i, w) ** dots
        if orient == "cw":
            return d * self.cap_ef(i, w) * self.cup_ef(i, w)
        return d * self.cap_fe(i, w) * self.cup_fe(i, w)

    def slice_scale(self, s):
        if s.kind == "dot":
            return self.updot(s.colors[0], s.weight) if s.orients[0] == UP else self.downdot(s.colors[0], s.weight)
        if s.kind == "cross":
            a, b = s.colors
            if s.orients == (UP, UP):
                return self.upcross(a, b, s.weight)
            if s.orients == (DOWN, DOWN):
                return self.downcross(a, b, s.weight)
            if s.orients == (UP, DOWN):
                return self.sideways_ud(a, b, s.weight)
            return self.sideways_du(a, b, s.weight)
        if s.kind in ("cup_ef", "cup_fe", "cap_ef", "cap_fe"):
            return self.rules[s.kind](s.colors[0], s.weight)
        raise FunctorError(f"unknown slice kind {s.kind}")

    def image_scalar(self, term):
        """Product of the generator scalars over one diagram term."""
        out = ONE
        for s in term.slices:
            out = out * self.slice_scale(s)
        for rb in term.raw:
            out = out * self.bubble(rb.orient, rb.color, rb.dots, rb.weight)
        for sym in term.syms:
            datum = self.datum
            w_i = sym.weight.pairing(datum, sym.color)
            base = w_i - 1 if sym.orient == "cw" else -w_i - 1
            out = out * self.bubble(sym.orient, sym.color, base + sym.r, sym.weight)
        return out


def image_scalar(f, term):
    return f.image_scalar(term)


def _const_rules():
    one = lambda *args: ONE
    return {k: one for k in ("updot", "upcross", "cup_ef", "cup_fe", "cap_ef", "cap_fe")}


def identity_scaling(p):
    return GeneratorScaling("identity", p, p, _const_rules())


def _require_cyclic(p):
    for key, val in p.q.beta_items():
        if val != MINUS_ONE:
            raise FunctorError("source must be the cyclic specialization (all beta = -1)")


def digamma(source, target, mutate=None):
    """From the cyclic form to general bubble parameters over the same Q.

    Upward dots and crossings are fixed; the four cap/cup families rescale
    with branches split on the weight pairing mod 4.
    """
    _require_cyclic(source)
    if source.datum is not target.datum and source.datum != target.datum:
        raise FunctorError("source and target must share the Cartan datum")
    for (i, j), val in source.q.items():
        if target.t(i, j) != val:
            raise FunctorError("source and target must share the scalars t_ij")
    if mutate is not None and mutate not in MUTATION_BRANCHES["digamma"]:
        raise FunctorError(f"unknown digamma branch {mutate!r}")

    c = source.cplus  # cyclic bubble value; its inverse is source cminus
    datum = source.datum

    def mut(branch, val):
        return val * _MUTANT if mutate == branch else val

    def cap_ef(i, w):
        if w.pairing(datum, i) % 4 in (0, 1):
            return mut("cap_ef_special", c(i, w) / target.cplus(i, w))
        return mut("cap_ef_other", c(i, w))

    def cap_fe(i, w):
        if w.pairing(datum, i) % 4 in (0, 1):
            return mut("cap_fe_special", ONE / target.cminus(i, w))
        return mut("cap_fe_other", ONE)

    def cup_ef(i, w):
        if w.pairing(datum, i) % 4 in (2, 3):
            return mut("cup_ef_special", ONE / target.cplus(i, w))
        return mut("cup_ef_other", ONE)

    def cup_fe(i, w):
        if w.pairing(datum, i) % 4 in (2, 3):
            return mut("cup_fe_special", c(i, w).inv() / target.cminus(i, w))
        return mut("cup_fe_other", c(i, w).inv())

    rules = {
        "updot": lambda i, w: ONE,
        "upcross": lambda a, b, w: ONE,
        "cap_ef": cap_ef,
        "cap_fe": cap_fe,
        "cup_ef": cup_ef,
        "cup_fe": cup_fe,
    }
    return GeneratorScaling("digamma", source, target, rules, mutated_branch=mutate)


def m_scaling(source):
    """The recorded passage from the cyclic form to the original sign
    conventions: caps/cups of the E_iF_i family pick up the bubble value.

    Recorded only: the target theory's relations are not represented here,
    so this scaling is not verifiable by the relation harness.
    """
    _require_cyclic(source)
    c = source.cplus
    rules = {
        "updot": lambda i, w: ONE,
        "upcross": lambda a, b, w: ONE,
        "cap_ef": lambda i, w: c(i, w),
        "cap_fe": lambda i, w: ONE,
        "cup_ef": lambda i, w: ONE,
        "cup_fe": lambda i, w: c(i, w).inv(),
    }
    return GeneratorScaling("m", source, None, rules)


def beth_scaling(source, D, mutate=None):
    """Rescale dots by D_i and same-color crossings by 1/D_i; the target
    parameters are the hatted family."""
    for i in source.datum.vertices:
        if i not in D or not D[i].is_invertible():
            raise FunctorError(f"rescaling unit D[{i}] missing or not invertible")
    if mutate is not None and mutate not in MUTATION_BRANCHES["beth"]:
        raise FunctorError(f"unknown beth branch {mutate!r}")

    def mut(branch, val):
        return val * _MUTANT if mutate == branch else val

    rules = {
        "updot": lambda i, w: mut("dot", D[i]),
        "upcross": lambda a, b, w: mut("cross_same", D[a].inv()) if a == b else ONE,
        "cap_ef": lambda i, w: ONE,
        "cap_fe": lambda i, w: ONE,
        "cup_ef": lambda i, w: ONE,
        "cup_fe": lambda i, w: ONE,
    }
    target = nilhecke_rescale(source, D)
    return GeneratorScaling("beth", source, target, rules, mutated_branch=mutate, meta={"D": D})


def gimel_2cat(source, target, root, mutate=None):
    """Extend the tree KLR isomorphism to the 2-category by rescaling the
    E_iF_i cap and the F_iE_i cup; the other cap/cup are fixed."""
    datum = source.datum
    if not datum.graph.is_tree():
        raise FunctorError("the KLR rescaling needs a tree graph")
    if target.datum is not datum and target.datum != datum:
        raise FunctorError("source and target must share the Cartan datum")
    if mutate is not None and mutate not in MUTATION_BRANCHES["gimel"]:
        raise FunctorError(f"unknown gimel branch {mutate!r}")
    D = tree_D(datum, source.q, target.q, root)

    def mut(branch, val):
        return val * _MUTANT if mutate == branch else val

    def upcross(a, b, w):
        if a == b:
            return mut("cross_same", D[a].inv())
        if tree_precedes(datum, root, a, b):
            base = source.t(b, a) * target.t(b, a).inv()
            if datum.a(a, b) == -1:
                return mut("cross_low_adjacent", base * D[b])
            return mut("cross_low_distant", base)
        return ONE

    def cap_ef(i, w):
        w_i = w.pairing(datum, i)
        return mut("cap_ef", D[i] ** (-w_i + 1) * source.cplus(i, w) / target.cplus(i, w))

    def cup_fe(i, w):
        w_i = w.pairing(datum, i)
        up = w.shifted(i, 1)
        return mut("cup_fe", D[i] ** (w_i + 1) * target.cplus(i, up) / source.cplus(i, up))

    rules = {
        "updot": lambda i, w: mut("dot", D[i]),
        "upcross": upcross,
        "cap_ef": cap_ef,
        "cap_fe": lambda i, w: ONE,
        "cup_ef": lambda i, w: ONE,
        "cup_fe": cup_fe,
    }
    return GeneratorScaling("gimel", source, target, rules, mutated_branch=mutate, meta={"D": D, "root": root})


def sl_to_gl_scaling(p_gl, n, d):
    """The weight-map functor: identity scalars, objects through the gl lift.

    Weights that fail to lift map to the starred value; image_scalar is
    untouched since every scalar is 1.
    """
    from .cartan import NO_SOLUTION, gl_from_sl, sl_from_gl

    def object_map(w):
        datum = p_gl.datum
        mu = tuple(w.pairing(datum, i) for i in datum.vertices)
        return gl_from_sl(n, d, mu)

    return GeneratorScaling("phi", p_gl, p_gl, _const_rules(), object_map=object_map)


def compose(f, g):
    """The composite f after g; g's target parameters must feed f's source."""
    if f.source is not g.target:
        if g.target is None or f.source.datum != g.target.datum:
            raise FunctorError("cannot compose: parameter sets do not chain")
    rules = {}

    def make(kind):
        def rule(*args):
            w = args[-1]
            gval = g.rules[kind](*args)
            fval = f.rules[kind](*args[:-1], g.object_map(w))
            return gval * fval

        return rule

    for kind in ("updot", "upcross", "cup_ef", "cup_fe", "cap_ef", "cap_fe"):
        rules[kind] = make(kind)
    return GeneratorScaling(
        f"{f.name}.{g.name}",
        g.source,
        f.target,
        rules,
        object_map=lambda w: f.object_map(g.object_map(w)),
    )


def inverse(f):
    """Pointwise-inverted scalars with source and target swapped."""
    rules = {}

    def make(kind):
        def rule(*args):
            return f.rules[kind](*args).inv()

        return rule

    for kind in ("updot", "upcross", "cup_ef", "cup_fe", "cap_ef", "cap_fe"):
        rules[kind] = make(kind)
    return GeneratorScaling(f"{f.name}^-1", f.target, f.source, rules)
