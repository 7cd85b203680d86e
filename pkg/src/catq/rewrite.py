"""Bounded directed reduction of diagram terms.

``reduce_local`` applies a fixed family of oriented rules for at most
``depth`` passes: closed bubbles evaluate, zigzags straighten, uniformly
upward diagrams normalize through the KLR engine, and the corpus composites
(sideways definitions, crossing rotations, double sideways crossings) collapse
to their primitive or decomposed forms.  The result is always equal to the
input in the 2-category; no confluence or completeness is claimed, and curl
or bubble-slide identities beyond these rules are out of scope.
"""

from __future__ import annotations

from .diagrams import DOWN, UP, DiagramBuilder, DiagramTerm, Formal2Mor, expand_bubbles
from .field import ONE


def _trace(term):
    """Strand story of a term: per-slice strand ids plus cup/cap events.

    Returns (events, final_ids) where events[i] describes slice i:
      ('dot', strand_id) | ('cross', id_left, id_right)
      | ('cup', kind, color, left_id, right_id, left_neighbor_id)
      | ('cap', kind, color, left_id, right_id)
    """
    ids = list(range(len(term.src.profile)))
    fresh = len(ids)
    events = []
    for s in term.slices:
        p = s.pos - 1
        if s.kind == "dot":
            events.append(("dot", ids[p]))
        elif s.kind == "cross":
            events.append(("cross", ids[p], ids[p + 1]))
            ids[p], ids[p + 1] = ids[p + 1], ids[p]
        elif s.kind in ("cup_ef", "cup_fe"):
            left, right = fresh, fresh + 1
            fresh += 2
            neighbor = ids[p - 1] if p > 0 else None
            events.append(("cup", s.kind, s.colors[0], left, right, neighbor))
            ids[p:p] = [left, right]
        else:
            events.append(("cap", s.kind, s.colors[0], ids[p], ids[p + 1]))
            del ids[p:p + 2]
    return events, ids


def _segment_is_quiet(events, start, end, watched):
    """Only dots touch the watched strands strictly between two slices."""
    dots = 0
    for ev in events[start + 1:end]:
        if ev[0] == "dot" and ev[1] in watched:
            dots += 1
        elif ev[0] == "cross" and (ev[1] in watched or ev[2] in watched):
            return None
        elif ev[0] == "cup" and ev[5] in watched:
            continue
        elif ev[0] == "cap" and (ev[3] in watched or ev[4] in watched):
            return None
    return dots


def _rebuild(term, datum, skip, substitute, extra_dots):
    """Replay the slices of a term, dropping ``skip`` indices, renaming
    strand ids through ``substitute``, and inserting ``extra_dots[id]`` dots
    the first time a surviving strand appears after a removed pair."""
    def resolve(sid):
        while sid in substitute:
            sid = substitute[sid]
        return sid

    b = DiagramBuilder(datum, term.src.weight, term.src.profile)
    ids = list(range(len(term.src.profile)))
    fresh = len(ids)
    pending = dict(extra_dots)
    for sid in list(pending):
        root = resolve(sid)
        if root != sid:
            pending[root] = pending.pop(sid) + pending.get(root, 0)
    # drop pending dots immediately for ids already on the boundary
    for idx, sid in enumerate(ids):
        if pending.get(sid):
            for _ in range(pending.pop(sid)):
                b.dot(idx + 1)
    for i, s in enumerate(term.slices):
        if i in skip:
            if s.kind in ("cup_ef", "cup_fe"):
                fresh += 2
            continue
        if s.kind == "dot":
            sid = resolve(_orig_dot_id(term, i))
            b.dot(ids.index(sid) + 1)
        elif s.kind == "cross":
            a, bb = _orig_cross_ids(term, i)
            a, bb = resolve(a), resolve(bb)
            pa = ids.index(a)
            b.cross(pa + 1)
            ids[pa], ids[pa + 1] = ids[pa + 1], ids[pa]
        elif s.kind in ("cup_ef", "cup_fe"):
            left, right = fresh, fresh + 1
            fresh += 2
            neighbor = _orig_cup_neighbor(term, i)
            if neighbor is None:
                slot = 1
            else:
                slot = ids.index(resolve(neighbor)) + 2
            (b.cup_ef if s.kind == "cup_ef" else b.cup_fe)(s.colors[0], slot)
            ids[slot - 1:slot - 1] = [left, right]
            for leg_pos, leg in ((slot - 1, left), (slot, right)):
                if pending.get(leg):
                    for _ in range(pending.pop(leg)):
                        b.dot(leg_pos + 1)
        else:
            a, bb = _orig_cap_ids(term, i)
            pa = ids.index(resolve(a))
            b.cap(pa + 1)
            del ids[pa:pa + 2]
    out = b.term()
    return DiagramTerm(out.src, out.slices, term.raw, term.syms)


def _orig_events(term):
    cache = term.__dict__.get("_events")
    if cache is None:
        cache = _trace(term)[0]
        object.__setattr__(term, "_events", cache)
    return cache


def _orig_dot_id(term, i):
    return _orig_events(term)[i][1]


def _orig_cross_ids(term, i):
    ev = _orig_events(term)[i]
    return ev[1], ev[2]


def _orig_cup_neighbor(term, i):
    return _orig_events(term)[i][5]


def _orig_cap_ids(term, i):
    ev = _orig_events(term)[i]
    return ev[3], ev[4]


def _extract_bubble(term, datum):
    """Find one closed loop (cup whose both legs die in one cap, only dots in
    between) and pull it out as a raw bubble."""
    events = _orig_events(term)
    cups = {i: ev for i, ev in enumerate(events) if ev[0] == "cup"}
    for ci, ev in cups.items():
        _, kind, color, left, right, _ = ev
        for cj in range(ci + 1, len(events)):
            cap = events[cj]
            if cap[0] != "cap":
                continue
            if {cap[3], cap[4]} == {left, right}:
                dots = _segment_is_quiet(events, ci, cj, {left, right})
                if dots is None:
                    break
                orient = "cw" if kind == "cup_ef" else "ccw"
                weight = term.slices[ci].weight
                skip = {ci, cj} | _dot_indices(events, ci, cj, {left, right})
                rebuilt = _rebuild(term, datum, skip, {}, {})
                bubble = _raw_type()(color, orient, dots, weight)
                return DiagramTerm(rebuilt.src, rebuilt.slices, rebuilt.raw + (bubble,), rebuilt.syms)
    return None


def _raw_type():
    from .diagrams import RawBubble

    return RawBubble


def _dot_indices(events, start, end, watched):
    return {
        k
        for k in range(start + 1, end)
        if events[k][0] == "dot" and events[k][1] in watched
    }


def _straighten_zigzag(term, datum):
    """Find one cup/cap pair of opposite kinds sharing exactly one strand."""
    events = _orig_events(term)
    partner = {"cup_ef": "cap_fe", "cup_fe": "cap_ef"}
    for ci, ev in enumerate(events):
        if ev[0] != "cup":
            continue
        _, kind, color, left, right, _ = ev
        for cj in range(ci + 1, len(events)):
            cap = events[cj]
            if cap[0] != "cap" or cap[1] != partner[kind]:
                continue
            legs = {cap[3], cap[4]}
            shared = legs & {left, right}
            if len(shared) != 1:
                continue
            shared_id = shared.pop()
            other_leg = right if shared_id == left else left
            through = (legs - {shared_id}).pop()
            dots = _segment_is_quiet(events, ci, cj, {shared_id})
            if dots is None:
                continue
            skip = {ci, cj} | _dot_indices(events, ci, cj, {shared_id})
            extra = {through: dots} if dots else {}
            return _rebuild(term, datum, skip, {other_leg: through}, extra)
    return None


def _all_upward(term):
    return all(o == UP for o, _ in term.src.profile) and all(
        s.kind in ("dot", "cross") for s in term.slices
    ) and term.src.profile


def _klr_normalize_term(term, datum, p):
    from .klr import KLRAlgebra, canonical_word

    word = tuple(c for _, c in term.src.profile)
    items = []
    for s in term.slices:
        items.append(("x" if s.kind == "dot" else "s", s.pos - 1))
    alg = KLRAlgebra(datum, p.q)
    elem = alg.from_sequence(word, items)
    out = Formal2Mor()
    for (bw, perm, dots), coeff in elem.terms.items():
        b = DiagramBuilder(datum, term.src.weight, term.src.profile)
        for k in canonical_word(perm):
            b.cross(k + 1)
        for pos, a in enumerate(dots):
            for _ in range(a):
                b.dot(pos + 1)
        new = b.term()
        out.add(DiagramTerm(new.src, new.slices, term.raw, term.syms), coeff)
    return out


def _match_composites(term, datum, p):
    """Whole-term collapse of the corpus composites."""
    from .relations import (
        _compositions,
        _curl_term_ef,
        _curl_term_fe,
        _double_sideways_ef_first,
        _double_sideways_fe_first,
        _rotation_ccw,
        _rotation_cw,
        sideways_down_up,
        sideways_up_down,
    )

    if term.raw or term.syms:
        bare = DiagramTerm(term.src, term.slices)
    else:
        bare = term
    prof = term.src.profile
    w = term.src.weight
    if len(prof) != 2:
        return None

    def with_bubbles(fm):
        out = Formal2Mor()
        for t, c in fm.terms.items():
            out.add(DiagramTerm(t.src, t.slices, t.raw + term.raw, t.syms + term.syms), c)
        return out

    (o1, c1), (o2, c2) = prof
    if o1 == UP and o2 == DOWN:
        i, j = c1, c2
        if bare == _double_sideways_fe_first(datum, w, i, j):
            if i != j:
                ident = DiagramBuilder(datum, w, prof).term()
                return with_bubbles(Formal2Mor({ident: ONE}))
            beta = p.beta(i, w)
            out = Formal2Mor({DiagramBuilder(datum, w, prof).term(): beta.inv()})
            for f1, f2, f3 in _compositions(w.pairing(datum, i) - 1):
                out.add(_curl_term_ef(datum, w, i, f1, f2, f3), ONE)
            return with_bubbles(out)
        if bare == sideways_up_down(datum, w, i, j).term():
            prim = DiagramBuilder(datum, w, prof).cross(1).term()
            return with_bubbles(Formal2Mor({prim: ONE}))
    if o1 == DOWN and o2 == UP:
        a, b = c1, c2
        if bare == _double_sideways_ef_first(datum, w, b, a):
            if a != b:
                ident = DiagramBuilder(datum, w, prof).term()
                return with_bubbles(Formal2Mor({ident: ONE}))
            beta = p.beta(a, w)
            out = Formal2Mor({DiagramBuilder(datum, w, prof).term(): beta.inv()})
            for f1, f2, f3 in _compositions(-w.pairing(datum, a) - 1):
                out.add(_curl_term_fe(datum, w, a, f1, f2, f3), ONE)
            return with_bubbles(out)
        if bare == sideways_down_up(datum, w, a, b).term():
            prim = DiagramBuilder(datum, w, prof).cross(1).term()
            return with_bubbles(Formal2Mor({prim: ONE}))
    if o1 == DOWN and o2 == DOWN:
        i, j = c1, c2
        for pattern in (_rotation_cw, _rotation_ccw):
            if bare == pattern(datum, w, i, j):
                prim = DiagramBuilder(datum, w, prof).cross(1).term()
                return with_bubbles(Formal2Mor({prim: ONE}))
    return None


def reduce_step(term, datum, p):
    """One rule application; None when no rule matches."""
    hit = _extract_bubble(term, datum)
    if hit is not None:
        return Formal2Mor({hit: ONE})
    hit = _straighten_zigzag(term, datum)
    if hit is not None:
        return Formal2Mor({hit: ONE})
    if _all_upward(term) and any(
        s.kind == "cross" or s.kind == "dot" for s in term.slices
    ):
        out = _klr_normalize_term(term, datum, p)
        # only report progress when something actually changed
        if len(out.terms) != 1 or next(iter(out.terms)) != term:
            return out
    return _match_composites(term, datum, p)


def reduce_local(fm, p, depth=8):
    """Apply the oriented rules at most ``depth`` passes, then evaluate all
    bubbles with the given parameters."""
    datum = p.datum
    cur = fm
    for _ in range(depth):
        progress = False
        nxt = Formal2Mor()
        for term, coeff in cur.terms.items():
            step = reduce_step(term, datum, p)
            if step is None:
                nxt.add(term, coeff)
            else:
                progress = True
                for t, c in step.terms.items():
                    nxt.add(t, c * coeff)
        cur = nxt
        if not progress:
            break
    return expand_bubbles(cur, p)
