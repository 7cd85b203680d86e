"""Scalar choices, bubble parameters, compatibility laws, presets, rescalings.

A parameter set consists of invertible scalars ``t_ij`` (one per ordered pair
of distinct vertices), bubble constants ``beta_i`` (stored per coset of the
root lattice, since the sliding law forces them constant along cosets), and
degree-zero bubble values ``c+_{i,w}`` / ``c-_{i,w}``.  The two compatibility
laws are

    c+_{i,w} c-_{i,w} = 1 / t_ii        (t_ii := -beta_i)
    c+_{i,w + a_j} = t_ij c+_{i,w}   and   c-_{i,w - a_j} = t_ij c-_{i,w}

and everything downstream (bubble evaluation, functor verification) leans on
them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .cartan import CartanDatum, GlWeight, StructureError, Weight, build_cartan, graph_from_dict, graph_to_dict, path_graph
from .field import ONE, FieldElem, parse_expr


class ParamError(ValueError):
    pass


def root_offsets(weight, datum):
    """Root-lattice coordinates of the weight relative to its coset representative."""
    if isinstance(weight, Weight):
        return dict(weight.offsets)
    if isinstance(weight, GlWeight):
        # representative of the sum-d coset is (d, 0, ..., 0)
        d = sum(weight.entries)
        out, acc = {}, 0
        for j in range(1, weight.n):
            acc += weight.entries[j - 1] - (d if j == 1 else 0)
            if acc:
                out[j] = acc
        return out
    raise TypeError(f"unsupported weight type {type(weight)!r}")


class ScalarChoice:
    """The scalars ``t_ij`` plus the per-coset bubble constants ``beta_i``."""

    def __init__(self, datum, t, beta):
        self.datum = datum
        self._t = dict(t)
        # beta keys: (i, coset_key) for coset-specific values, or i for a
        # value shared by every coset
        self._beta = dict(beta)
        for (i, j), val in self._t.items():
            if not val.is_invertible():
                raise ParamError(f"t[{i},{j}] must be invertible")
            if datum.a(i, j) == 0 and (j, i) in self._t and self._t[(j, i)] != val:
                raise ParamError(f"t[{i},{j}] must equal t[{j},{i}] when a_ij = 0")

    def t(self, i, j):
        if i == j:
            raise ParamError("use t_ii(i, weight) for the diagonal value")
        try:
            return self._t[(i, j)]
        except KeyError:
            raise ParamError(f"no scalar t[{i},{j}]") from None

    def beta(self, i, weight):
        key = (i, weight.coset_key())
        if key in self._beta:
            return self._beta[key]
        if i in self._beta:
            return self._beta[i]
        raise ParamError(f"no bubble constant beta for vertex {i}, coset {weight.coset_key()}")

    def set_beta(self, i, coset_key, value):
        key = (i, coset_key)
        if key in self._beta and self._beta[key] != value:
            raise ParamError(f"conflicting beta for {key}")
        self._beta[key] = value

    def t_ii(self, i, weight):
        return -self.beta(i, weight)

    def t_at(self, i, j, weight):
        """t_ij extended to the diagonal by t_ii = -beta_i."""
        return self.t_ii(i, weight) if i == j else self.t(i, j)

    def items(self):
        return sorted(self._t.items(), key=repr)

    def beta_items(self):
        return sorted(self._beta.items(), key=repr)


class BubbleChoice:
    """Degree-zero bubble values: either seeded per coset or closed-form."""

    def __init__(self, datum, q, cplus_seeds=None, cplus_fn=None, cminus_fn=None, seed_factory=None, tag=None):
        if cplus_seeds is None and cplus_fn is None and seed_factory is None:
            raise ParamError("bubble choice needs seeds, a seed factory, or a closed form")
        self.datum = datum
        self.q = q
        self.seeds = dict(cplus_seeds or {})
        self.seed_factory = seed_factory
        self.cplus_fn = cplus_fn
        self.cminus_fn = cminus_fn
        self.tag = tag
        for key, val in self.seeds.items():
            if not val.is_invertible():
                raise ParamError(f"seed {key} must be invertible")

    def _seed(self, i, coset):
        key = (i, coset)
        if key not in self.seeds:
            if self.seed_factory is None:
                raise ParamError(f"no c+ seed for vertex {i}, coset {coset}")
            self.seeds[key] = self.seed_factory(i, coset)
        return self.seeds[key]

    def cplus(self, i, weight):
        if self.cplus_fn is not None:
            return self.cplus_fn(i, weight)
        val = self._seed(i, weight.coset_key())
        for j, k in sorted(root_offsets(weight, self.datum).items(), key=repr):
            val = val * self.q.t_at(i, j, weight) ** k
        return val

    def cminus(self, i, weight):
        if self.cminus_fn is not None:
            return self.cminus_fn(i, weight)
        # determined by the inversion law c+ c- = 1/t_ii
        return ONE / (self.q.t_ii(i, weight) * self.cplus(i, weight))


@dataclass
class ParamSet:
    """A Cartan datum together with compatible scalars and bubble values."""

    datum: CartanDatum
    q: ScalarChoice
    b: BubbleChoice

    def t(self, i, j):
        return self.q.t(i, j)

    def t_at(self, i, j, weight):
        return self.q.t_at(i, j, weight)

    def beta(self, i, weight):
        return self.q.beta(i, weight)

    def cplus(self, i, weight):
        return self.b.cplus(i, weight)

    def cminus(self, i, weight):
        return self.b.cminus(i, weight)


@dataclass(frozen=True)
class Violation:
    law: str
    vertex: object
    other: object
    weight: str
    lhs: str
    rhs: str

    def as_dict(self):
        return {
            "law": self.law,
            "vertex": self.vertex,
            "other": self.other,
            "weight": self.weight,
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


def check_compat(p, weights):
    """Check both compatibility laws on a sample of weights.

    Returns the list of violations; empty means compatible on the sample.
    """
    weights = list(weights)
    if not weights:
        raise ParamError("weight sample must be nonempty")
    out = []
    for w in weights:
        for i in p.datum.vertices:
            lhs = p.cplus(i, w) * p.cminus(i, w)
            rhs = ONE / p.q.t_ii(i, w)
            if lhs != rhs:
                out.append(Violation("inversion", i, None, w.label(), str(lhs), str(rhs)))
            for j in p.datum.vertices:
                t = p.t_at(i, j, w)
                up = p.cplus(i, w.shifted(j, 1))
                if up != t * p.cplus(i, w):
                    out.append(Violation("slide+", i, j, w.label(), str(up), str(t * p.cplus(i, w))))
                dn = p.cminus(i, w.shifted(j, -1))
                if dn != t * p.cminus(i, w):
                    out.append(Violation("slide-", i, j, w.label(), str(dn), str(t * p.cminus(i, w))))
    return out


def extend_from_seeds(datum, q, seeds):
    """Bubble values from one c+ seed per coset, extended by the sliding law."""
    return BubbleChoice(datum, q, cplus_seeds=dict(seeds))


def preset_cyclic(datum, t, seeds, seed_factory=None):
    """All beta_i = -1: c- = 1/c+ and c+ constant along sl2-strings."""
    from .field import MINUS_ONE

    beta = {i: MINUS_ONE for i in datum.vertices}
    q = ScalarChoice(datum, t, beta)
    b = BubbleChoice(datum, q, cplus_seeds=seeds, seed_factory=seed_factory)
    return ParamSet(datum, q, b)


def preset_msv(n):
    """The gl_n parameter choice with signs read off the weight entries.

    Path quiver oriented i -> i+1; t_ii = -1 (beta = 1), t_{i,i+1} = -1,
    every other t_ij = +1; c+_{i,w} = (-1)^{w_{i+1}} and
    c-_{i,w} = (-1)^{w_{i+1} - 1} on all gl_n weights.
    """
    if n < 2:
        raise ParamError("n must be >= 2")
    datum = build_cartan(path_graph(n - 1, oriented=True))
    t = {}
    for i in datum.vertices:
        for j in datum.vertices:
            if i == j:
                continue
            if datum.a(i, j) == -1 and datum.graph.oriented(i, j):
                t[(i, j)] = FieldElem.from_int(-1)
            else:
                t[(i, j)] = ONE
    beta = {i: ONE for i in datum.vertices}
    q = ScalarChoice(datum, t, beta)

    def cp(i, w):
        return FieldElem.from_int((-1) ** (w.entries[i] % 2))

    def cm(i, w):
        return FieldElem.from_int((-1) ** ((w.entries[i] - 1) % 2))

    b = BubbleChoice(datum, q, cplus_fn=cp, cminus_fn=cm, tag=("msv", n))
    return ParamSet(datum, q, b)


def nilhecke_rescale(p, D):
    """Rescale by units D_i: dots by D_i forces the hatted parameter family.

    t_ii -> D_i^-2 t_ii, t_ij -> D_i t_ij on edges, t_ik fixed when a_ik = 0;
    c+ -> D_i^(-w_i+1) c+, c- -> D_i^(w_i+1) c-, beta -> D_i^-2 beta.
    """
    datum = p.datum
    for i in datum.vertices:
        if i not in D or not D[i].is_invertible():
            raise ParamError(f"rescaling unit D[{i}] missing or not invertible")
    t_hat = {}
    for (i, j), val in p.q._t.items():
        t_hat[(i, j)] = D[i] * val if datum.a(i, j) == -1 else val
    beta_hat = {}
    for key, val in p.q._beta.items():
        i = key[0] if isinstance(key, tuple) else key
        beta_hat[key] = D[i] ** (-2) * val
    q_hat = ScalarChoice(datum, t_hat, beta_hat)

    def cp(i, w):
        return D[i] ** (-w.pairing(datum, i) + 1) * p.cplus(i, w)

    def cm(i, w):
        return D[i] ** (w.pairing(datum, i) + 1) * p.cminus(i, w)

    b_hat = BubbleChoice(datum, q_hat, cplus_fn=cp, cminus_fn=cm, tag=("rescaled", p.b.tag))
    return ParamSet(datum, q_hat, b_hat)


def cocycle(q, i, j):
    """v_ij = t_ij^-1 t_ji, the edge cocycle governing the KLR algebra."""
    return q.t(i, j) ** (-1) * q.t(j, i)


def tree_order(datum, root):
    """Levels and parent links for the tree rooted at ``root``.

    Returns (level, parent) dicts.  Raises unless the graph is a tree.
    """
    if not datum.graph.is_tree():
        raise StructureError("graph is not a tree")
    if root not in datum.vertices:
        raise StructureError(f"unknown root {root}")
    level = {root: 0}
    parent = {root: None}
    frontier = [root]
    while frontier:
        nxt = []
        for v in frontier:
            for w in datum.graph.neighbors(v):
                if w not in level:
                    level[w] = level[v] + 1
                    parent[w] = v
                    nxt.append(w)
        frontier = nxt
    return level, parent


def tree_precedes(datum, root, i, j):
    """The total order used by the KLR rescaling: by level, ties by vertex order.

    The level order of the rooted tree compares adjacent vertices already;
    the vertex-order tie-break fixes the (otherwise ambiguous) split of the
    cocycle factor between the two crossings of a distant pair.
    """
    level, _ = tree_order(datum, root)
    idx = datum.vertices.index
    return (level[i], idx(i)) < (level[j], idx(j))


def tree_D(datum, q, q2, root):
    """Path products D_i = prod over the root-to-i path of v'_{s t} v_{t s}."""
    level, parent = tree_order(datum, root)
    D = {root: ONE}
    for v in sorted(level, key=lambda x: (level[x], datum.vertices.index(x))):
        if v == root:
            continue
        par = parent[v]
        D[v] = cocycle(q2, par, v) * cocycle(q, v, par) * D[par]
    return D


# -- symbolic parameter families --------------------------------------------


def symbolic_t(datum, prefix="t"):
    from .field import sym

    t = {}
    for i in datum.vertices:
        for j in datum.vertices:
            if i == j:
                continue
            if datum.a(i, j) == 0:
                a, b = sorted((i, j), key=datum.vertices.index)
                t[(i, j)] = sym(f"{prefix}_{a}_{b}")
            else:
                t[(i, j)] = sym(f"{prefix}_{i}_{j}")
    return t


def symbolic_paramset(datum, t_prefix="t", beta_prefix="b", seed_prefix="cp", cyclic=False):
    """Fully generic parameters: every t, beta, and c+ seed a fresh symbol.

    Seeds are created on demand per (vertex, coset), so any weight sample
    works.  With ``cyclic=True`` all beta_i are pinned to -1 instead.
    """
    from .field import MINUS_ONE, sym

    t = symbolic_t(datum, t_prefix)
    if cyclic:
        beta = {i: MINUS_ONE for i in datum.vertices}
    else:
        beta = {i: sym(f"{beta_prefix}_{i}") for i in datum.vertices}
    q = ScalarChoice(datum, t, beta)
    b = BubbleChoice(datum, q, seed_factory=lambda i, coset: sym(f"{seed_prefix}_{i}_{coset}"))
    return ParamSet(datum, q, b)


# -- JSON ------------------------------------------------------------------


def params_to_dict(p):
    if p.b.tag and p.b.tag[0] == "msv":
        return {"preset": "msv", "n": p.b.tag[1]}
    out = {"datum": graph_to_dict(p.datum.graph)}
    out["t"] = {f"{i},{j}": str(val) for (i, j), val in p.q.items()}
    beta = {}
    for key, val in p.q.beta_items():
        beta[f"{key[0]},{key[1]}" if isinstance(key, tuple) else str(key)] = str(val)
    out["beta"] = beta
    if p.b.cplus_fn is not None:
        raise ParamError("closed-form bubble values have no generic JSON form")
    out["cplus_seeds"] = {f"{i},{coset}": str(val) for (i, coset), val in sorted(p.b.seeds.items(), key=repr)}
    return out


def _parse_vertex(s):
    s = s.strip()
    return int(s) if s.lstrip("-").isdigit() else s


def params_from_dict(data):
    if data.get("preset") == "msv":
        return preset_msv(int(data["n"]))
    datum = build_cartan(graph_from_dict(data["datum"]))
    t = {}
    for key, expr in data.get("t", {}).items():
        i, j = (_parse_vertex(x) for x in key.split(","))
        t[(i, j)] = parse_expr(expr)
    beta = {}
    for key, expr in data.get("beta", {}).items():
        if "," in key:
            i, coset = key.split(",", 1)
            beta[(_parse_vertex(i), coset)] = parse_expr(expr)
        else:
            beta[_parse_vertex(key)] = parse_expr(expr)
    q = ScalarChoice(datum, t, beta)
    seeds = {}
    for key, expr in data.get("cplus_seeds", {}).items():
        i, coset = key.split(",", 1)
        seeds[(_parse_vertex(i), coset)] = parse_expr(expr)
    b = BubbleChoice(datum, q, cplus_seeds=seeds)
    return ParamSet(datum, q, b)


def load_params(path):
    with open(path) as fh:
        return params_from_dict(json.load(fh))


def save_params(p, path):
    with open(path, "w") as fh:
        json.dump(params_to_dict(p), fh, indent=2, sort_keys=True)
        fh.write("\n")
