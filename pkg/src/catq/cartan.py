"""Simply-laced Cartan data, weights, and the sl_n <-> gl_n weight maps."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


class StructureError(ValueError):
    """Raised for structurally invalid graphs, weights, or lookups."""


@dataclass(frozen=True)
class SimplyLacedGraph:
    """A finite simple graph: vertex set, undirected edges, optional orientation.

    Edges are unordered pairs with no loops and no multi-edges.  When an
    orientation is supplied it must cover every edge exactly once.
    """

    vertices: tuple
    edges: frozenset
    orientation: tuple = ()

    @staticmethod
    def make(vertices, edges, orientation=None):
        vertices = tuple(vertices)
        if len(set(vertices)) != len(vertices):
            raise StructureError("duplicate vertices")
        vset = set(vertices)
        seen = set()
        for e in edges:
            i, j = e
            if i == j:
                raise StructureError(f"loop edge at {i}")
            if i not in vset or j not in vset:
                raise StructureError(f"edge {e} uses unknown vertex")
            key = frozenset((i, j))
            if key in seen:
                raise StructureError(f"multi-edge {e}")
            seen.add(key)
        orient = tuple(tuple(e) for e in orientation) if orientation else ()
        if orient:
            keys = {frozenset(e) for e in orient}
            if keys != seen or len(orient) != len(seen):
                raise StructureError("orientation must cover every edge exactly once")
        return SimplyLacedGraph(vertices, frozenset(seen), orient)

    def has_edge(self, i, j):
        return frozenset((i, j)) in self.edges

    def neighbors(self, i):
        return sorted(
            (j for j in self.vertices if self.has_edge(i, j)),
            key=self.vertices.index,
        )

    def is_tree(self):
        verts = list(self.vertices)
        if not verts:
            return True
        if len(self.edges) != len(verts) - 1:
            return False
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            v = stack.pop()
            for w in self.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(verts)

    def oriented(self, i, j):
        """True if the edge {i, j} is oriented i -> j."""
        return (i, j) in self.orientation


@dataclass(frozen=True)
class CartanDatum:
    """A simply-laced Cartan datum: the graph together with its Cartan matrix."""

    graph: SimplyLacedGraph

    @property
    def vertices(self):
        return self.graph.vertices

    def a(self, i, j):
        """Cartan matrix entry ``a_ij``, also the symmetric form alpha_i . alpha_j."""
        if i not in self.vertices or j not in self.vertices:
            raise StructureError(f"unknown vertex in pairing ({i}, {j})")
        if i == j:
            return 2
        return -1 if self.graph.has_edge(i, j) else 0

    def matrix(self):
        return [[self.a(i, j) for j in self.vertices] for i in self.vertices]


def build_cartan(graph):
    """Validate the graph and wrap it in a CartanDatum."""
    # re-run the structural checks in case the graph was built by hand
    SimplyLacedGraph.make(graph.vertices, [tuple(e) for e in graph.edges], graph.orientation or None)
    return CartanDatum(graph)


def path_graph(n, oriented=False):
    """The type-A path 1 - 2 - ... - n, optionally oriented i -> i+1."""
    edges = [(i, i + 1) for i in range(1, n)]
    return SimplyLacedGraph.make(range(1, n + 1), edges, edges if oriented else None)


@dataclass(frozen=True)
class Weight:
    """A weight written as coset representative plus root-lattice offset.

    ``base`` names a chosen representative of a coset of the root lattice;
    ``base_pairings`` lists its pairings ``<h_i, base>``; ``offsets`` are the
    root-lattice coordinates, so the weight is base + sum offsets_i alpha_i.
    """

    base: str
    base_pairings: tuple  # sorted ((vertex, int), ...)
    offsets: tuple = ()   # sorted ((vertex, int), ...), zero entries dropped

    @staticmethod
    def make(base, base_pairings, offsets=None):
        bp = tuple(sorted(dict(base_pairings).items(), key=repr))
        off = tuple(sorted(((v, k) for v, k in dict(offsets or {}).items() if k), key=repr))
        return Weight(base, bp, off)

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((self.base, self.base_pairings, self.offsets))
            object.__setattr__(self, "_h", h)
        return h

    def offset(self, i):
        return dict(self.offsets).get(i, 0)

    def pairing(self, datum, i):
        if i not in datum.vertices:
            raise StructureError(f"unknown vertex {i}")
        base = dict(self.base_pairings)
        val = base.get(i, 0)
        for j, k in self.offsets:
            val += datum.a(i, j) * k
        return val

    def shifted(self, i, k):
        if not k:
            return self
        out = []
        placed = False
        ri = repr(i)
        for v, cur in self.offsets:
            if v == i:
                if cur + k:
                    out.append((v, cur + k))
                placed = True
            elif not placed and repr(v) > ri:
                out.append((i, k))
                placed = True
                out.append((v, cur))
            else:
                out.append((v, cur))
        if not placed:
            out.append((i, k))
        return Weight(self.base, self.base_pairings, tuple(out))

    def coset_key(self):
        return self.base

    def label(self):
        off = "".join(f"{k:+d}a{v}" for v, k in self.offsets)
        return self.base + off


def pairing(datum, i, weight):
    """The integer <h_i, weight> (``lambda_i``)."""
    return weight.pairing(datum, i)


def shift(weight, i, k):
    """weight + k * alpha_i."""
    return weight.shifted(i, k)


def is_dominant(datum, weight):
    return all(weight.pairing(datum, i) >= 0 for i in datum.vertices)


@dataclass(frozen=True)
class GlWeight:
    """A gl_n weight: an integer tuple (lambda_1, ..., lambda_n), n >= 2.

    Simple roots are alpha_i = eps_i - eps_{i+1} for vertices i = 1..n-1, and
    the pairing <h_i, lambda> is lambda_i - lambda_{i+1} (lambda-bar).
    """

    entries: tuple

    def __hash__(self):
        return hash(self.entries)

    @staticmethod
    def make(entries):
        entries = tuple(int(x) for x in entries)
        if len(entries) < 2:
            raise StructureError("gl weight needs length >= 2")
        return GlWeight(entries)

    @property
    def n(self):
        return len(self.entries)

    def pairing(self, datum, i):
        if not 1 <= i <= self.n - 1:
            raise StructureError(f"vertex {i} out of range for gl_{self.n}")
        return self.entries[i - 1] - self.entries[i]

    def shifted(self, i, k):
        e = list(self.entries)
        e[i - 1] += k
        e[i] -= k
        return GlWeight(tuple(e))

    def coset_key(self):
        return f"d{sum(self.entries)}"

    def label(self):
        return "(" + ",".join(str(x) for x in self.entries) + ")"


class NoSolution:
    """Marker for an unsolvable sl -> gl lift (the starred value)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NoSolution"


NO_SOLUTION = NoSolution()


def gl_from_sl(n, d, mu):
    """Lift an sl_n weight mu to the gl_n weight with coordinate sum d.

    Solves lambda_i - lambda_{i+1} = mu_i with sum lambda_i = d; returns
    NO_SOLUTION when the unique rational solution is not integral.
    """
    if n < 2:
        raise StructureError("n must be >= 2")
    mu = tuple(int(x) for x in mu)
    if len(mu) != n - 1:
        raise StructureError(f"mu must have length {n - 1}")
    # lambda_k = lambda_n + sum_{j >= k} mu_j; the coordinate sum fixes
    # n * lambda_n = d - sum_k k * mu_k
    tail = d - sum(k * mu[k - 1] for k in range(1, n))
    if tail % n:
        return NO_SOLUTION
    lam_n = tail // n
    out = [lam_n] * n
    for k in range(n - 1, 0, -1):
        out[k - 1] = out[k] + mu[k - 1]
    return GlWeight.make(out)


def congruence_target(n, mu):
    """The residue class of d mod n for which gl_from_sl(n, d, mu) is solvable.

    Equal to sum_k k * mu_k mod n, i.e. minus the weighted sum
    (n-1) mu_1 + ... + mu_{n-1}; solvability forces this sign.
    """
    mu = tuple(int(x) for x in mu)
    return sum(k * mu[k - 1] for k in range(1, len(mu) + 1)) % n


def sl_from_gl(lam):
    """The sl weight (lambda_1 - lambda_2, ..., lambda_{n-1} - lambda_n)."""
    e = lam.entries
    return tuple(e[k] - e[k + 1] for k in range(len(e) - 1))


# -- JSON ------------------------------------------------------------------


def graph_from_dict(data):
    return SimplyLacedGraph.make(
        data["vertices"],
        [tuple(e) for e in data.get("edges", [])],
        [tuple(e) for e in data["orientation"]] if data.get("orientation") else None,
    )


def graph_to_dict(graph):
    out = {
        "vertices": list(graph.vertices),
        "edges": sorted([sorted(e, key=graph.vertices.index) for e in graph.edges]),
    }
    if graph.orientation:
        out["orientation"] = [list(e) for e in graph.orientation]
    return out


def load_graph(path):
    with open(path) as fh:
        return graph_from_dict(json.load(fh))
