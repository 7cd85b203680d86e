"""Diagram terms for 2-morphisms: slices, region weights, and bubble calculus.

A diagram term is a bottom-to-top sequence of elementary slices (dots,
crossings, caps, cups) acting on a strand profile, together with a multiset
of closed bubbles.  Every slice records the weight of the region immediately
to its right, which is the only geometric data the rescaling functors consume.

Orientation conventions (strands read left to right, regions from the far
right):

* an upward strand at a slice is an E, a downward strand an F;
* ``cup_ef`` creates the pair (E_i, F_i) with degree ``1 - w_i``, the matching
  cap is ``cap_ef``; ``cup_fe`` / ``cap_fe`` create and close (F_i, E_i) with
  degree ``1 + w_i``;
* a clockwise bubble is the composite cap_ef . dots . cup_ef, degree-zero at
  ``w_i - 1`` dots; counterclockwise is cap_fe . dots . cup_fe, degree-zero at
  ``-w_i - 1`` dots.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import MINUS_ONE, ONE, ZERO, FieldElem

UP = 1
DOWN = -1


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class OneMorSignature:
    """A 1-morphism: rightmost weight, strand profile, grading shift."""

    weight: object
    profile: tuple  # ((orient, color), ...) left to right
    shift: int = 0

    def label(self):
        syms = " ".join(("E" if o == UP else "F") + f"_{c}" for o, c in self.profile)
        return f"{syms or '1'} @ {self.weight.label()}"


@dataclass(frozen=True)
class Slice:
    """One elementary generator at a height: kind, position, bottom colors,
    bottom orientations, and the weight of the region to its right."""

    kind: str  # dot | cross | cup_ef | cup_fe | cap_ef | cap_fe
    pos: int   # 1-based strand position (insertion slot for cups)
    colors: tuple
    orients: tuple
    weight: object

    def degree(self, datum):
        if self.kind == "dot":
            return 2
        if self.kind == "cross":
            if self.orients == (UP, UP) or self.orients == (DOWN, DOWN):
                return -datum.a(self.colors[0], self.colors[1])
            return 0  # sideways crossings are degree zero composites
        i = self.colors[0]
        w_i = self.weight.pairing(datum, i)
        if self.kind in ("cup_ef", "cap_ef"):
            return 1 - w_i
        if self.kind in ("cup_fe", "cap_fe"):
            return 1 + w_i
        raise DiagramError(f"unknown slice kind {self.kind}")


@dataclass(frozen=True)
class RawBubble:
    """A closed bubble with an explicit dot count, not yet evaluated."""

    color: object
    orient: str  # "cw" | "ccw"
    dots: int
    weight: object

    def star_offset(self, datum):
        w_i = self.weight.pairing(datum, self.color)
        base = w_i - 1 if self.orient == "cw" else -w_i - 1
        return self.dots - base


@dataclass(frozen=True)
class BubbleSymbol:
    """A positive-degree bubble of the weight's free orientation (degree 2r)."""

    color: object
    orient: str
    r: int
    weight: object

    def label(self):
        return f"{self.orient}({self.color},*+{self.r})@{self.weight.label()}"


@dataclass(frozen=True)
class DiagramTerm:
    src: OneMorSignature
    slices: tuple
    raw: tuple = ()
    syms: tuple = ()

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((self.src, self.slices, self.raw, self.syms))
            object.__setattr__(self, "_h", h)
        return h

    def degree(self, datum):
        deg = sum(s.degree(datum) for s in self.slices)
        deg += sum(2 * rb.star_offset(datum) for rb in self.raw)
        deg += sum(2 * b.r for b in self.syms)
        return deg

    def sort_key(self):
        return repr((self.src, self.slices, self.raw, self.syms))


class DiagramBuilder:
    """Builds a diagram term slice by slice, tracking the strand profile and
    the region weight to the right of each generator."""

    def __init__(self, datum, weight, profile):
        self.datum = datum
        self.weight = weight
        self.src = OneMorSignature(weight, tuple(profile))
        self.profile = list(profile)
        self.slices = []
        self.raw = []

    def _region_right_of(self, idx):
        """Weight of the region right of the 1-based strand ``idx`` (idx = 0
        gives the region left of everything)."""
        w = self.weight
        for o, c in self.profile[idx:]:
            w = w.shifted(c, o)
        return w

    def _check_pos(self, pos, span):
        if not 1 <= pos <= len(self.profile) - span + 1:
            raise DiagramError(f"position {pos} out of range for profile {self.profile}")

    def dot(self, pos):
        self._check_pos(pos, 1)
        o, c = self.profile[pos - 1]
        self.slices.append(Slice("dot", pos, (c,), (o,), self._region_right_of(pos)))
        return self

    def cross(self, pos):
        self._check_pos(pos, 2)
        (o1, c1), (o2, c2) = self.profile[pos - 1], self.profile[pos]
        self.slices.append(Slice("cross", pos, (c1, c2), (o1, o2), self._region_right_of(pos + 1)))
        self.profile[pos - 1], self.profile[pos] = (o2, c2), (o1, c1)
        return self

    def cup_ef(self, color, slot):
        if not 1 <= slot <= len(self.profile) + 1:
            raise DiagramError(f"slot {slot} out of range")
        w = self._region_right_of(slot - 1)
        self.slices.append(Slice("cup_ef", slot, (color,), (UP, DOWN), w))
        self.profile[slot - 1:slot - 1] = [(UP, color), (DOWN, color)]
        return self

    def cup_fe(self, color, slot):
        if not 1 <= slot <= len(self.profile) + 1:
            raise DiagramError(f"slot {slot} out of range")
        w = self._region_right_of(slot - 1)
        self.slices.append(Slice("cup_fe", slot, (color,), (DOWN, UP), w))
        self.profile[slot - 1:slot - 1] = [(DOWN, color), (UP, color)]
        return self

    def cap(self, pos):
        self._check_pos(pos, 2)
        (o1, c1), (o2, c2) = self.profile[pos - 1], self.profile[pos]
        if c1 != c2 or o1 == o2:
            raise DiagramError(f"cannot cap strands {self.profile[pos - 1]}, {self.profile[pos]}")
        kind = "cap_ef" if (o1, o2) == (UP, DOWN) else "cap_fe"
        self.slices.append(Slice(kind, pos, (c1,), (o1, o2), self._region_right_of(pos + 1)))
        del self.profile[pos - 1:pos + 1]
        return self

    def bubble(self, color, orient, dots, weight=None):
        self.raw.append(RawBubble(color, orient, dots, weight if weight is not None else self.weight))
        return self

    def dst(self):
        return OneMorSignature(self.weight, tuple(self.profile))

    def term(self):
        return DiagramTerm(self.src, tuple(self.slices), tuple(self.raw), ())


class Formal2Mor:
    """A finite formal sum of diagram terms with FieldElem coefficients."""

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for t, c in terms.items() if isinstance(terms, dict) else terms:
                self.add(t, c)

    def add(self, term, coeff):
        cur = self.terms.get(term, ZERO) + coeff
        if cur.is_zero():
            self.terms.pop(term, None)
        else:
            self.terms[term] = cur
        return self

    def scaled(self, coeff):
        out = Formal2Mor()
        for t, c in self.terms.items():
            out.add(t, c * coeff)
        return out

    def __add__(self, other):
        out = Formal2Mor(dict(self.terms))
        for t, c in other.terms.items():
            out.add(t, c)
        return out

    def __sub__(self, other):
        return self + other.scaled(MINUS_ONE)

    def is_zero(self):
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __eq__(self, other):
        if not isinstance(other, Formal2Mor):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[t] == other.terms[t] for t in self.terms)

    def __len__(self):
        return len(self.terms)


def degree(term, datum):
    """Total degree of a diagram term (sum of its generator degrees)."""
    return term.degree(datum)


# -- bubble evaluation -------------------------------------------------------
#
# End(1_w) is the polynomial algebra on the bubbles of the weight's *free*
# orientation (clockwise for w_i >= 0, counterclockwise for w_i < 0).  All
# other bubbles -- negative-degree, degree-zero, fake, and positive-degree
# real bubbles of the opposite orientation -- evaluate through the
# infinite-Grassmannian recursion
#
#     sum_{x+y=n} cw(*+x) ccw(*+y)  =  -1/beta   (n = 0),   0   (n >= 1),
#
# whose n >= 1 rows solve for the non-free orientation:
#
#     nonfree(*+n) = -(1/c0) sum over the remaining products,
#
# with c0 the free orientation's degree-zero value.  A bubble polynomial maps
# a sorted tuple of BubbleSymbols to its coefficient.


def bp_zero():
    return {}


def bp_const(c):
    return {(): c} if not c.is_zero() else {}


def bp_add(p1, p2):
    out = dict(p1)
    for m, c in p2.items():
        nc = out.get(m, ZERO) + c
        if nc.is_zero():
            out.pop(m, None)
        else:
            out[m] = nc
    return out


def bp_scale(p, c):
    if c.is_zero():
        return {}
    return {m: co * c for m, co in p.items()}


def bp_mul(p1, p2):
    out = {}
    for m1, c1 in p1.items():
        for m2, c2 in p2.items():
            m = tuple(sorted(m1 + m2, key=repr))
            nc = out.get(m, ZERO) + c1 * c2
            if nc.is_zero():
                out.pop(m, None)
            else:
                out[m] = nc
    return out


def free_orientation(pairing_value):
    return "cw" if pairing_value >= 0 else "ccw"


class BubbleCalculus:
    """Evaluates bubbles over one parameter set, with memoization.

    ``prefactor_scale`` deliberately corrupts the Grassmannian recursion; it
    exists only so tests can watch the corruption get caught.
    """

    def __init__(self, p, prefactor_scale=ONE):
        self.p = p
        self.datum = p.datum
        self.prefactor_scale = prefactor_scale
        self.memo = {}

    def value(self, orient, i, weight, r):
        """The bubble of star offset ``r`` as a polynomial in free symbols."""
        key = (orient, i, weight, r)
        if key in self.memo:
            return self.memo[key]
        if r < 0:
            out = bp_zero()
        elif r == 0:
            out = bp_const(self.p.cplus(i, weight) if orient == "cw" else self.p.cminus(i, weight))
        else:
            w_i = weight.pairing(self.datum, i)
            if orient == free_orientation(w_i):
                out = {(BubbleSymbol(i, orient, r, weight),): ONE}
            elif orient == "ccw":
                # eliminated against the free clockwise family
                acc = bp_zero()
                for x in range(1, r + 1):
                    acc = bp_add(acc, bp_mul(self.value("cw", i, weight, x), self.value("ccw", i, weight, r - x)))
                pref = MINUS_ONE / self.p.cplus(i, weight) * self.prefactor_scale
                out = bp_scale(acc, pref)
            else:
                acc = bp_zero()
                for y in range(1, r + 1):
                    acc = bp_add(acc, bp_mul(self.value("cw", i, weight, r - y), self.value("ccw", i, weight, y)))
                pref = MINUS_ONE / self.p.cminus(i, weight) * self.prefactor_scale
                out = bp_scale(acc, pref)
        self.memo[key] = out
        return out

    def value_dots(self, orient, i, weight, dots):
        w_i = weight.pairing(self.datum, i)
        base = w_i - 1 if orient == "cw" else -w_i - 1
        return self.value(orient, i, weight, dots - base)


def _calculus(p, prefactor_scale=ONE):
    # cache one evaluator per BubbleChoice (safe: parameters are immutable)
    if not prefactor_scale.is_one():
        return BubbleCalculus(p, prefactor_scale)
    cache = getattr(p.b, "_bubble_calculus", None)
    if cache is None or cache.p is not p:
        cache = BubbleCalculus(p)
        p.b._bubble_calculus = cache
    return cache


def eval_bubble(i, weight, dots, orient, p):
    """Evaluate a closed bubble with ``dots`` dots: zero, a degree-zero value,
    a free BubbleSymbol, or a polynomial in free symbols."""
    if orient not in ("cw", "ccw"):
        raise DiagramError(f"bad orientation {orient!r}")
    return _calculus(p).value_dots(orient, i, weight, dots)


def fake_expand(i, weight, star_offset, orient, p):
    """Expand a fake bubble (formal negative dot count) by star offset.

    Clockwise fake bubbles live at w_i <= 0, counterclockwise ones at
    w_i >= 0; calling on the real side is an error.
    """
    w_i = weight.pairing(p.datum, i)
    if orient == "cw" and w_i > 0:
        raise DiagramError(f"clockwise fake bubbles need w_{i} <= 0, got {w_i}")
    if orient == "ccw" and w_i < 0:
        raise DiagramError(f"counterclockwise fake bubbles need w_{i} >= 0, got {w_i}")
    return _calculus(p).value(orient, i, weight, star_offset)


def grassmannian_check(i, weight, N, p, prefactor_scale=ONE):
    """Truncated product of the two bubble series against -1/beta.

    Returns (ok, residuals): residuals maps each degree n in 0..N to the
    difference between the t^n coefficient and its required value.
    """
    calc = _calculus(p, prefactor_scale)
    residuals = {}
    ok = True
    for n in range(N + 1):
        coeff = bp_zero()
        for x in range(n + 1):
            coeff = bp_add(coeff, bp_mul(calc.value("cw", i, weight, x), calc.value("ccw", i, weight, n - x)))
        target = bp_const(MINUS_ONE / p.beta(i, weight)) if n == 0 else bp_zero()
        diff = bp_add(coeff, bp_scale(target, MINUS_ONE))
        if diff:
            ok = False
            residuals[n] = diff
    return ok, residuals


def expand_bubbles(fm, p):
    """Evaluate every raw bubble of every term with the given parameters."""
    calc = _calculus(p)
    out = Formal2Mor()
    for term, coeff in fm.terms.items():
        if not term.raw:
            out.add(term, coeff)
            continue
        poly = bp_const(ONE)
        for rb in term.raw:
            poly = bp_mul(poly, calc.value_dots(rb.orient, rb.color, rb.weight, rb.dots))
            if not poly:
                break
        for mono, c in poly.items():
            syms = tuple(sorted(term.syms + mono, key=repr))
            out.add(DiagramTerm(term.src, term.slices, (), syms), coeff * c)
    return out


# -- textual grammar ---------------------------------------------------------
#
#   header:  src: E_1 F_2 @ 0,1        (weight = base pairings, sl-style)
#            src: E_1 @ (2,0,1)        (gl weight tuple)
#   slices:  dot(i)@k | cross(i,j)@k | cup_r(i)@k | cup_l(i)@k
#            | cap_r(i)@k | cap_l(i)@k
#
# cup_r/cap_l are the (E_i, F_i) cup and cap; cup_l/cap_r the (F_i, E_i) ones.


def parse_weight(text, datum):
    from .cartan import GlWeight, Weight

    text = text.strip()
    if text.startswith("("):
        entries = [int(x) for x in text.strip("()").split(",")]
        return GlWeight.make(entries)
    vals = [int(x) for x in text.split(",")]
    if len(vals) != len(datum.vertices):
        raise DiagramError(f"weight needs {len(datum.vertices)} pairings")
    return Weight.make("w", dict(zip(datum.vertices, vals)))


_KIND_IN = {"cup_r": "cup_ef", "cup_l": "cup_fe", "cap_l": "cap_ef", "cap_r": "cap_fe"}
_KIND_OUT = {v: k for k, v in _KIND_IN.items()}


def parse_diagram(text, datum):
    """Parse the slice-list grammar into a DiagramTerm."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("src:"):
        raise DiagramError("diagram must start with a 'src:' header")
    head = lines[0][4:]
    if "@" not in head:
        raise DiagramError("header needs '@ weight'")
    syms_part, weight_part = head.rsplit("@", 1)
    weight = parse_weight(weight_part, datum)
    profile = []
    for tok in syms_part.split():
        if "_" not in tok or tok[0] not in "EF":
            raise DiagramError(f"bad 1-morphism symbol {tok!r}")
        kind, col = tok.split("_", 1)
        col = int(col) if col.lstrip("-").isdigit() else col
        profile.append((UP if kind == "E" else DOWN, col))
    b = DiagramBuilder(datum, weight, profile)
    for ln in lines[1:]:
        if "@" not in ln:
            raise DiagramError(f"slice {ln!r} needs '@ position'")
        call, pos = ln.rsplit("@", 1)
        pos = int(pos)
        call = call.strip()
        name, _, args = call.partition("(")
        args = [a.strip() for a in args.rstrip(")").split(",") if a.strip()]
        cols = [int(a) if a.lstrip("-").isdigit() else a for a in args]
        if name == "dot":
            b.dot(pos)
        elif name == "cross":
            b.cross(pos)
        elif name in ("cup_r", "cup_l"):
            (b.cup_ef if name == "cup_r" else b.cup_fe)(cols[0], pos)
        elif name in ("cap_r", "cap_l"):
            want = _KIND_IN[name]
            before = b.profile[pos - 1]
            b.cap(pos)
            got = b.slices[-1].kind
            if got != want:
                raise DiagramError(f"{name} at {pos} does not match strands ({before} ...): built {got}")
        else:
            raise DiagramError(f"unknown slice {name!r}")
    return b.term()


def format_diagram(term, datum):
    w = term.src.weight
    from .cartan import GlWeight

    if isinstance(w, GlWeight):
        wtxt = "(" + ",".join(str(x) for x in w.entries) + ")"
    else:
        wtxt = ",".join(str(w.pairing(datum, i)) for i in datum.vertices)
    syms = " ".join(("E" if o == UP else "F") + f"_{c}" for o, c in term.src.profile)
    out = [f"src: {syms} @ {wtxt}"]
    for s in term.slices:
        if s.kind == "dot":
            out.append(f"dot({s.colors[0]})@{s.pos}")
        elif s.kind == "cross":
            out.append(f"cross({s.colors[0]},{s.colors[1]})@{s.pos}")
        else:
            out.append(f"{_KIND_OUT[s.kind]}({s.colors[0]})@{s.pos}")
    return "\n".join(out)
