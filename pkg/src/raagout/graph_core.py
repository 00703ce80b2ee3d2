"""Finite simplicial graphs and the graph-theoretic predicates behind Out(A_Γ).

Vertex sets are handled internally as integer bitmasks over the construction
order of the vertices; every public function returns plain tuples of vertex
names in that same order so output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Iterator, Sequence

VertexSet = tuple  # tuple of vertex names, canonical (construction) order

MAX_SYMMETRY_VERTICES = 10


class GraphError(ValueError):
    """Malformed graph input or an unknown vertex."""


class PreconditionError(ValueError):
    """A constructive step was invoked outside its hypotheses."""


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable simple graph with ordered, named vertices."""

    __slots__ = ("vertices", "_index", "_nbr", "_edges", "cache")

    def __init__(self, vertices: Sequence[str], edges: Iterable[tuple[str, str]] = ()):
        vertices = tuple(str(v) for v in vertices)
        if len(set(vertices)) != len(vertices):
            raise GraphError("duplicate vertex name")
        index = {v: i for i, v in enumerate(vertices)}
        nbr = [0] * len(vertices)
        edge_set = set()
        for a, b in edges:
            if a not in index or b not in index:
                raise GraphError(f"edge {a}-{b} mentions an unknown vertex")
            if a == b:
                raise GraphError(f"self-loop at {a}")
            i, j = index[a], index[b]
            nbr[i] |= 1 << j
            nbr[j] |= 1 << i
            edge_set.add((min(i, j), max(i, j)))
        self.vertices = vertices
        self._index = index
        self._nbr = tuple(nbr)
        self._edges = frozenset(edge_set)
        # scratch space for per-graph memo tables (normal forms etc.)
        self.cache = {}

    @classmethod
    def from_masks(cls, vertices: Sequence[str], nbr: Sequence[int]) -> "Graph":
        edges = [(vertices[i], vertices[j]) for i in range(len(vertices))
                 for j in _bits(nbr[i]) if i < j]
        return cls(vertices, edges)

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in self._index

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self._edges == other._edges

    def __hash__(self):
        return hash((self.vertices, self._edges))

    def __repr__(self):
        return f"Graph({list(self.vertices)!r}, {self.edges()!r})"

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def nbr(self) -> tuple[int, ...]:
        return self._nbr

    @property
    def all_mask(self) -> int:
        return (1 << len(self.vertices)) - 1

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for v in names:
            m |= 1 << self.index(v)
        return m

    def names(self, mask: int) -> VertexSet:
        return tuple(self.vertices[i] for i in _bits(mask))

    def edges(self) -> list[tuple[str, str]]:
        return [(self.vertices[i], self.vertices[j]) for i, j in sorted(self._edges)]

    def adjacent(self, a: str, b: str) -> bool:
        return bool(self._nbr[self.index(a)] >> self.index(b) & 1)

    # bitmask-level helpers used throughout the package
    def lk(self, i: int) -> int:
        return self._nbr[i]

    def st(self, i: int) -> int:
        return self._nbr[i] | (1 << i)

    def dom(self, i: int, j: int) -> bool:
        """Vertex i dominates vertex j (indices)."""
        return not (self._nbr[j] & ~self.st(i))

    def components_mask(self, allowed: int) -> list[int]:
        """Connected components of the subgraph induced on ``allowed``,
        ordered by their smallest vertex."""
        comps = []
        rest = allowed
        while rest:
            low = rest & -rest
            comp = frontier = low
            while frontier:
                grow = 0
                for i in _bits(frontier):
                    grow |= self._nbr[i]
                grow &= rest & ~comp
                comp |= grow
                frontier = grow
            comps.append(comp)
            rest &= ~comp
        return comps

    def component_of(self, i: int, allowed: int) -> int:
        comp = frontier = 1 << i
        while frontier:
            grow = 0
            for j in _bits(frontier):
                grow |= self._nbr[j]
            grow &= allowed & ~comp
            comp |= grow
            frontier = grow
        return comp


# ---------------------------------------------------------------------------
# links, stars, domination


def link(g: Graph, v: str) -> VertexSet:
    return g.names(g.lk(g.index(v)))


def star(g: Graph, v: str) -> VertexSet:
    return g.names(g.st(g.index(v)))


def dominates(g: Graph, y: str, x: str) -> bool:
    """True iff ``y >= x``, i.e. lk(x) is contained in st(y)."""
    return g.dom(g.index(y), g.index(x))


def domination_equivalent_pairs(g: Graph) -> list[tuple[str, str]]:
    out = []
    for i, j in combinations(range(g.n), 2):
        if g.dom(i, j) and g.dom(j, i):
            out.append((g.vertices[i], g.vertices[j]))
    return out


def components_excluding(g: Graph, removed: Iterable[str]) -> list[VertexSet]:
    allowed = g.all_mask & ~g.mask(removed)
    return [g.names(c) for c in g.components_mask(allowed)]


# ---------------------------------------------------------------------------
# separating intersections of links


@dataclass(frozen=True)
class SilWitness:
    x: str
    y: str
    component: VertexSet

    def validate(self, g: Graph) -> None:
        i, j = g.index(self.x), g.index(self.y)
        if i == j:
            raise PreconditionError("SIL needs two distinct vertices")
        if g.nbr[i] >> j & 1:
            raise PreconditionError(f"{self.x} and {self.y} are adjacent")
        comp = g.mask(self.component)
        cut = g.lk(i) & g.lk(j)
        if not comp:
            raise PreconditionError("empty SIL component")
        if comp & (cut | (1 << i) | (1 << j)):
            raise PreconditionError("SIL component meets the cut or the pair")
        low = (comp & -comp).bit_length() - 1
        if g.component_of(low, g.all_mask & ~cut) != comp:
            raise PreconditionError("SIL component is not a connected component")

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "component": list(self.component)}


def _sil_for_pair(g: Graph, i: int, j: int) -> int:
    cut = g.lk(i) & g.lk(j)
    pair = (1 << i) | (1 << j)
    for comp in g.components_mask(g.all_mask & ~cut):
        if not comp & pair:
            return comp
    return 0


def find_sil(g: Graph) -> SilWitness | None:
    for i, j in combinations(range(g.n), 2):
        if g.nbr[i] >> j & 1:
            continue
        comp = _sil_for_pair(g, i, j)
        if comp:
            return SilWitness(g.vertices[i], g.vertices[j], g.names(comp))
    return None


def _separates(g: Graph, cut: int, a: int, b: int) -> bool:
    """``cut`` separates vertices a and b (neither lies in the cut)."""
    if cut >> a & 1 or cut >> b & 1:
        return False
    return not (g.component_of(a, g.all_mask & ~cut) >> b & 1)


def sil_from_double_separation(g: Graph, x: str, y: str, z: str) -> SilWitness:
    """Build the SIL promised when lk(x) separates y from z and lk(y)
    separates x from z (x, y non-adjacent): the component of z in
    Γ∖(lk(x)∩lk(y)) avoids both x and y."""
    i, j, k = g.index(x), g.index(y), g.index(z)
    if i == j or g.nbr[i] >> j & 1:
        raise PreconditionError(f"{x} and {y} must be distinct and non-adjacent")
    if not _separates(g, g.lk(i), j, k):
        raise PreconditionError(f"lk({x}) does not separate {y} from {z}")
    if not _separates(g, g.lk(j), i, k):
        raise PreconditionError(f"lk({y}) does not separate {x} from {z}")
    cut = g.lk(i) & g.lk(j)
    comp = g.component_of(k, g.all_mask & ~cut)
    w = SilWitness(x, y, g.names(comp))
    w.validate(g)
    return w


def sil_from_nonadjacent_domination(g: Graph, x: str, y: str) -> SilWitness:
    """x >= y non-adjacent and st(y) separating gives the SIL (x, y, C) for
    any component C of Γ∖st(y) missing x, since lk(x)∩lk(y) = lk(y)."""
    i, j = g.index(x), g.index(y)
    if i == j or g.nbr[i] >> j & 1:
        raise PreconditionError(f"{x} and {y} must be distinct and non-adjacent")
    if not g.dom(i, j):
        raise PreconditionError(f"{x} does not dominate {y}")
    comps = g.components_mask(g.all_mask & ~g.st(j))
    for comp in comps:
        if not comp >> i & 1 and len(comps) > 1:
            w = SilWitness(x, y, g.names(comp))
            w.validate(g)
            return w
    raise PreconditionError(f"st({y}) does not separate the graph")


# ---------------------------------------------------------------------------
# domination chains and depth


@dataclass(frozen=True)
class DominationChain:
    """Distinct vertices x_1, ..., x_m with x_{i+1} >= x_i."""

    vertices: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def validate(self, g: Graph) -> None:
        idx = [g.index(v) for v in self.vertices]
        if len(set(idx)) != len(idx):
            raise PreconditionError("domination chain repeats a vertex")
        for lo, hi in zip(idx, idx[1:]):
            if not g.dom(hi, lo):
                raise PreconditionError("consecutive chain entries fail domination")


class _DominationOrder:
    """Domination preorder of a graph, quotiented by domination equivalence.

    Domination is transitive, so a chain of distinct vertices is any
    sequence that descends weakly through the quotient order; the longest
    chain between two vertices is found by a weighted longest-path pass over
    the (acyclic) class order.
    """

    def __init__(self, g: Graph):
        n = g.n
        self.g = g
        cls = [-1] * n
        classes: list[list[int]] = []
        for i in range(n):
            if cls[i] >= 0:
                continue
            members = [j for j in range(i, n) if cls[j] < 0 and g.dom(i, j) and g.dom(j, i)]
            for j in members:
                cls[j] = len(classes)
            classes.append(members)
        self.cls = cls
        self.classes = classes
        c = len(classes)
        below = [[False] * c for _ in range(c)]  # below[a][b]: class a strictly dominates b
        for a in range(c):
            for b in range(c):
                if a != b and g.dom(classes[a][0], classes[b][0]):
                    below[a][b] = True
        self.below = below
        # best[a][b]: max number of vertices on a strictly descending class path a..b
        order = sorted(range(c), key=lambda a: sum(below[a]))  # bottoms first
        best = [[0] * c for _ in range(c)]
        nxt = [[-1] * c for _ in range(c)]
        for a in order:
            best[a][a] = len(classes[a])
            for b in range(c):
                if b == a:
                    continue
                for m in order:
                    if below[a][m] and best[m][b] and (m == b or below[m][b]):
                        cand = len(classes[a]) + best[m][b]
                        if cand > best[a][b] or (cand == best[a][b] and
                                                 classes[m][0] < classes[nxt[a][b]][0]):
                            best[a][b] = cand
                            nxt[a][b] = m
        self.best = best
        self.nxt = nxt

    def longest(self, top: int, bottom: int) -> int:
        """Length of the longest chain with dominant member ``top`` and
        bottom member ``bottom``; -1 if no chain exists."""
        if top == bottom:
            return 0
        a, b = self.cls[top], self.cls[bottom]
        if a == b:
            return len(self.classes[a]) - 1
        if not self.best[a][b] or not self.below[a][b]:
            return -1
        return self.best[a][b] - 1

    def chain(self, top: int, bottom: int) -> list[int]:
        """The canonical longest chain, listed dominant member first."""
        if top == bottom:
            return [top]
        a, b = self.cls[top], self.cls[bottom]
        if a == b:
            rest = [v for v in self.classes[a] if v not in (top, bottom)]
            return [top, *rest, bottom]
        out = [top] + [v for v in self.classes[a] if v != top]
        m = self.nxt[a][b]
        while m != b:
            out.extend(self.classes[m])
            m = self.nxt[m][b]
        out.extend(v for v in self.classes[b] if v != bottom)
        out.append(bottom)
        return out


def _order(g: Graph) -> _DominationOrder:
    order = g.cache.get("domination_order")
    if order is None:
        order = g.cache["domination_order"] = _DominationOrder(g)
    return order


def _domination_depth(g: Graph, i: int) -> tuple[int, int]:
    order = _order(g)
    best, arg = -1, i
    for j in range(g.n):
        length = order.longest(i, j)
        if length > best:
            best, arg = length, j
    return best, arg


def _star_separated_pairs(g: Graph, bottom: int, top: int) -> tuple[int, int] | None:
    comps = g.components_mask(g.all_mask & ~g.st(bottom))
    escaping = [c for c in comps if c & ~g.st(top)]
    if len(escaping) >= 2:
        return escaping[0], escaping[1]
    return None


def _star_separation_depth(g: Graph, i: int) -> tuple[int, int]:
    order = _order(g)
    best, arg = -1, -1
    for j in range(g.n):
        length = order.longest(i, j)
        if length < 0 or length <= best:
            continue
        if _star_separated_pairs(g, j, i) is not None:
            best, arg = length, j
    return (best + 1 if arg >= 0 else 0), arg


def domination_depth(g: Graph, x: str) -> int:
    return _domination_depth(g, g.index(x))[0]


def star_separation_depth(g: Graph, x: str) -> int:
    return _star_separation_depth(g, g.index(x))[0]


def domination_chain(g: Graph, top: str, bottom: str) -> DominationChain | None:
    """Longest domination chain from ``bottom`` up to ``top``."""
    order = _order(g)
    i, j = g.index(top), g.index(bottom)
    if order.longest(i, j) < 0:
        return None
    return DominationChain(tuple(g.vertices[v] for v in reversed(order.chain(i, j))))


@dataclass(frozen=True)
class VertexDepth:
    vertex: str
    domination_depth: int
    star_separation_depth: int
    domination_bottom: str
    star_separation_bottom: str | None

    @property
    def depth(self) -> int:
        return max(self.domination_depth, self.star_separation_depth)


@dataclass(frozen=True)
class DepthReport:
    per_vertex: tuple[VertexDepth, ...]
    graph_depth: int

    def depth(self, v: str) -> int:
        for row in self.per_vertex:
            if row.vertex == v:
                return row.depth
        raise GraphError(f"unknown vertex {v!r}")

    def as_map(self) -> dict[str, int]:
        return {row.vertex: row.depth for row in self.per_vertex}

    def witness_chain(self, g: Graph, v: str) -> tuple[str, DominationChain]:
        """Chain realising depth(v): ("domination", chain) or
        ("star_separation", chain)."""
        row = next(r for r in self.per_vertex if r.vertex == v)
        if row.domination_depth >= row.star_separation_depth:
            return "domination", domination_chain(g, v, row.domination_bottom)
        return "star_separation", domination_chain(g, v, row.star_separation_bottom)

    def to_dict(self) -> dict:
        return {
            "graph_depth": self.graph_depth,
            "vertices": [
                {"vertex": r.vertex, "domination_depth": r.domination_depth,
                 "star_separation_depth": r.star_separation_depth, "depth": r.depth}
                for r in self.per_vertex
            ],
        }


def depth_report(g: Graph) -> DepthReport:
    cached = g.cache.get("depth_report")
    if cached is not None:
        return cached
    rows = []
    for i, v in enumerate(g.vertices):
        dd, dbot = _domination_depth(g, i)
        sd, sbot = _star_separation_depth(g, i)
        rows.append(VertexDepth(v, dd, sd, g.vertices[dbot],
                                g.vertices[sbot] if sbot >= 0 else None))
    rep = DepthReport(tuple(rows), max((r.depth for r in rows), default=0))
    g.cache["depth_report"] = rep
    return rep


# ---------------------------------------------------------------------------
# sufficient conditions and special cases


@dataclass(frozen=True)
class ConditionHit:
    tag: str
    witness: dict
    reduction: object  # ("equivalent_pair", (x, y)) or SilWitness

    def to_dict(self) -> dict:
        if isinstance(self.reduction, SilWitness):
            red = {"kind": "sil", **self.reduction.to_dict()}
        else:
            red = {"kind": "equivalent_pair", "pair": list(self.reduction)}
        return {"condition": self.tag, "witness": self.witness, "reduction": red}


def _disconnected(g: Graph) -> ConditionHit | None:
    comps = g.components_mask(g.all_mask)
    if len(comps) < 2:
        return None
    witness = {"components": [list(g.names(c)) for c in comps]}
    if not any(g.nbr):
        pair = (g.vertices[0], g.vertices[1])
        return ConditionHit("disconnected", witness, pair)
    for c in comps:
        for i, j in combinations(list(_bits(c)), 2):
            if not g.nbr[i] >> j & 1:
                other = next(d for d in comps if d != c)
                sil = SilWitness(g.vertices[i], g.vertices[j], g.names(other))
                sil.validate(g)
                return ConditionHit("disconnected", witness, sil)
    # every component is complete; some has two vertices
    c = next(c for c in comps if c & (c - 1))
    i, j = list(_bits(c))[:2]
    return ConditionHit("disconnected", witness, (g.vertices[i], g.vertices[j]))


def _cut_vertex(g: Graph) -> ConditionHit | None:
    base = len(g.components_mask(g.all_mask))
    for z in range(g.n):
        comps = g.components_mask(g.all_mask & ~(1 << z))
        if len(comps) < base + 2:
            continue
        touching = [c for c in comps if c & g.lk(z)]
        # z's own component splits into >= 3 pieces, each touching z
        first, second, third = touching[0], touching[1], touching[2]
        x = (first & g.lk(z) & -(first & g.lk(z))).bit_length() - 1
        y = (second & g.lk(z) & -(second & g.lk(z))).bit_length() - 1
        sil = SilWitness(g.vertices[x], g.vertices[y], g.names(third))
        sil.validate(g)
        witness = {"cut_vertex": g.vertices[z],
                   "components": [list(g.names(c)) for c in touching]}
        return ConditionHit("cut_vertex", witness, sil)
    return None


def _nonadjacent_separating_domination(g: Graph) -> ConditionHit | None:
    for i in range(g.n):
        for j in range(g.n):
            if i == j or g.nbr[i] >> j & 1 or not g.dom(i, j):
                continue
            if len(g.components_mask(g.all_mask & ~g.st(j))) >= 2:
                x, y = g.vertices[i], g.vertices[j]
                return ConditionHit("nonadjacent_domination_separating_star",
                                    {"x": x, "y": y},
                                    sil_from_nonadjacent_domination(g, x, y))
    return None


def _nonadjacent_triple(g: Graph) -> ConditionHit | None:
    for i in range(g.n):
        for j in range(g.n):
            if i == j or g.nbr[i] >> j & 1 or not g.dom(i, j):
                continue
            for k in range(g.n):
                if k in (i, j) or (g.nbr[k] >> i & 1) or (g.nbr[k] >> j & 1):
                    continue
                if g.dom(j, k):
                    x, y, z = g.vertices[i], g.vertices[j], g.vertices[k]
                    return ConditionHit("nonadjacent_domination_triple",
                                        {"x": x, "y": y, "z": z},
                                        sil_from_nonadjacent_domination(g, x, y))
    return None


def corollary_conditions(g: Graph) -> list[ConditionHit]:
    hits = []
    for check in (_disconnected, _cut_vertex, _nonadjacent_separating_domination,
                  _nonadjacent_triple):
        hit = check(g)
        if hit is not None:
            hits.append(hit)
    return hits


@dataclass(frozen=True)
class SpecialFlags:
    out_finite: bool
    virtually_abelian: bool

    def to_dict(self) -> dict:
        return {"out_finite": self.out_finite, "virtually_abelian": self.virtually_abelian}


def classify_special(g: Graph) -> SpecialFlags:
    some_domination = any(g.dom(i, j) for i in range(g.n) for j in range(g.n) if i != j)
    some_separating = any(len(g.components_mask(g.all_mask & ~g.st(i))) >= 2
                          for i in range(g.n))
    out_finite = not some_domination and not some_separating
    free = bool(domination_equivalent_pairs(g)) or find_sil(g) is not None
    virtually_abelian = not free and depth_report(g).graph_depth <= 1
    return SpecialFlags(out_finite, virtually_abelian)


# ---------------------------------------------------------------------------
# named families, symmetries, isomorphism classes


def gamma_k(k: int) -> Graph:
    """The graph with x_0..x_k and y_0..y_k, cliques on each side and
    x_i - y_j whenever i + j > k; a single vertex for k = 0."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return Graph(["x0"])
    xs = [f"x{i}" for i in range(k + 1)]
    ys = [f"y{i}" for i in range(k + 1)]
    edges = list(combinations(xs, 2)) + list(combinations(ys, 2))
    edges += [(xs[i], ys[j]) for i in range(k + 1) for j in range(k + 1) if i + j > k]
    return Graph(xs + ys, edges)


def path_graph(names: Sequence[str]) -> Graph:
    return Graph(names, list(zip(names, names[1:])))


def cycle_graph(names: Sequence[str]) -> Graph:
    return Graph(names, list(zip(names, names[1:])) + [(names[-1], names[0])])


def _refined_colors(n: int, nbr: Sequence[int]) -> list[int]:
    """Colour refinement (1-WL) with isomorphism-invariant colour names."""
    colors = [bin(nbr[i]).count("1") for i in range(n)]
    while True:
        sigs = [(colors[i], tuple(sorted(colors[j] for j in _bits(nbr[i])))) for i in range(n)]
        palette = {s: c for c, s in enumerate(sorted(set(sigs)))}
        new = [palette[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def _cell_orderings(n: int, colors: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Every vertex order that lists colour classes in increasing colour."""
    cells = [[i for i in range(n) if colors[i] == c] for c in sorted(set(colors))]

    def rec(k):
        if k == len(cells):
            yield ()
            return
        for head in permutations(cells[k]):
            for tail in rec(k + 1):
                yield head + tail

    yield from rec(0)


def canonical_code(g: Graph) -> tuple[int, tuple[int, ...]]:
    """Isomorphism invariant that determines g up to isomorphism: the least
    upper-triangle adjacency bit-vector over colour-respecting labellings."""
    n = g.n
    nbr = g.nbr
    colors = _refined_colors(n, nbr)
    best = None
    for order in _cell_orderings(n, colors):
        pos = [0] * n
        for p, v in enumerate(order):
            pos[v] = p
        rows = []
        for p, v in enumerate(order):
            r = 0
            for u in _bits(nbr[v]):
                r |= 1 << pos[u]
            rows.append(r)
        code = tuple(rows)
        if best is None or code < best:
            best = code
    return n, best or ()


def nonisomorphic_graphs(n: int) -> list[Graph]:
    """One representative per isomorphism class of graphs on n vertices,
    built by vertex augmentation and deduplicated by canonical code."""
    names = [f"v{i}" for i in range(n)]
    if n <= 1:
        return [Graph(names)]
    smaller = nonisomorphic_graphs(n - 1)
    seen = {}
    for h in smaller:
        base = list(h.nbr)
        for sub in range(1 << (n - 1)):
            nbr = [b | ((sub >> i & 1) << (n - 1)) for i, b in enumerate(base)] + [sub]
            cand = Graph.from_masks(names, nbr)
            code = canonical_code(cand)
            if code not in seen:
                seen[code] = cand
    return [seen[c] for c in sorted(seen)]


def graphs_up_to(max_n: int) -> list[Graph]:
    out = []
    for n in range(1, max_n + 1):
        out.extend(nonisomorphic_graphs(n))
    return out


def enumerate_graph_symmetries(g: Graph, bound: int = MAX_SYMMETRY_VERTICES) -> list[tuple[str, ...]]:
    """All adjacency-preserving permutations, as image tuples in vertex
    order; identity first, then lexicographic by image indices."""
    n = g.n
    if n > bound:
        raise GraphError(f"symmetry enumeration limited to {bound} vertices, got {n}")
    nbr = g.nbr
    deg = [bin(m).count("1") for m in nbr]
    colors = _refined_colors(n, nbr)
    found = []
    image = [-1] * n
    used = [False] * n

    def rec(i):
        if i == n:
            found.append(tuple(image))
            return
        for t in range(n):
            if used[t] or deg[t] != deg[i] or colors[t] != colors[i]:
                continue
            ok = True
            for j in range(i):
                if (nbr[i] >> j & 1) != (nbr[t] >> image[j] & 1):
                    ok = False
                    break
            if ok:
                image[i] = t
                used[t] = True
                rec(i + 1)
                used[t] = False
        image[i] = -1

    rec(0)
    found.sort()
    return [tuple(g.vertices[t] for t in perm) for perm in found]


# ---------------------------------------------------------------------------
# text format


def parse_graph(text: str, allow_empty: bool = False) -> Graph:
    """Parse ``name: neighbour neighbour ...`` lines; adjacency must be
    listed symmetrically."""
    order: list[str] = []
    adj: dict[str, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise GraphError(f"line {lineno}: expected 'name: neighbours'")
        head, tail = line.split(":", 1)
        name = head.strip()
        if not name or len(name.split()) != 1:
            raise GraphError(f"line {lineno}: bad vertex name {head!r}")
        if name in adj:
            raise GraphError(f"line {lineno}: duplicate vertex {name!r}")
        nbrs = tail.split()
        if name in nbrs:
            raise GraphError(f"line {lineno}: self-loop at {name!r}")
        if len(set(nbrs)) != len(nbrs):
            raise GraphError(f"line {lineno}: repeated neighbour of {name!r}")
        adj[name] = nbrs
        order.append(name)
    if not order and not allow_empty:
        raise GraphError("empty graph (pass allow_empty to accept it)")
    for v, nbrs in adj.items():
        for u in nbrs:
            if u not in adj:
                raise GraphError(f"neighbour {u!r} of {v!r} has no line of its own")
            if v not in adj[u]:
                raise GraphError(f"asymmetric adjacency: {v!r} lists {u!r} but not conversely")
    edges = [(v, u) for v in order for u in adj[v] if order.index(v) < order.index(u)]
    return Graph(order, edges)


def serialize_graph(g: Graph) -> str:
    lines = []
    for i, v in enumerate(g.vertices):
        nb = " ".join(g.vertices[j] for j in _bits(g.nbr[i]))
        lines.append(f"{v}: {nb}".rstrip())
    return "\n".join(lines) + "\n"
