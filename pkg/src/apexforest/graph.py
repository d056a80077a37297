"""Labelled simple graphs on {1..n} stored as adjacency bit rows, plus the
structural primitives the rest of the package is built on.

Vertices are 1-based everywhere in the public API.  Internally vertex ``v``
is bit ``v - 1`` of a Python int; ``rows[i]`` is the neighbourhood bitset of
internal vertex ``i``.  A graph also carries ``vmask``, the set of vertices
that are present, so induced subgraphs keep their original labels.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import SizeGuardError

VertexSet = frozenset  # frozenset[int] of 1-based labels

CHORDLESS_LIMIT = 16
MASK_LIMIT = 64


# ---------------------------------------------------------------------------
# bitset helpers


def iter_bits(x: int) -> Iterator[int]:
    """Yield the indices of set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def mask_of(labels: Iterable[int]) -> int:
    m = 0
    for v in labels:
        m |= 1 << (v - 1)
    return m


def labels_of(mask: int) -> VertexSet:
    return frozenset(i + 1 for i in iter_bits(mask))


def sorted_labels(mask: int) -> list[int]:
    return [i + 1 for i in iter_bits(mask)]


# ---------------------------------------------------------------------------
# graph types


class LabeledGraph:
    """Simple undirected graph on a subset of the labels 1..n.

    Treat instances as immutable values; every operation returns a new graph.
    """

    __slots__ = ("n", "rows", "vmask")

    def __init__(self, n: int, rows: Sequence[int], vmask: int | None = None):
        self.n = n
        self.rows = tuple(rows)
        self.vmask = (1 << n) - 1 if vmask is None else vmask

    # -- basic queries -----------------------------------------------------
    @property
    def order(self) -> int:
        return self.vmask.bit_count()

    @property
    def size(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def vertices(self) -> list[int]:
        return sorted_labels(self.vmask)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for i in iter_bits(self.vmask):
            for j in iter_bits(self.rows[i] >> (i + 1)):
                out.append((i + 1, i + j + 2))
        return out

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u - 1] >> (v - 1) & 1)

    def degree(self, v: int) -> int:
        return self.rows[v - 1].bit_count()

    def degrees(self) -> dict[int, int]:
        return {i + 1: self.rows[i].bit_count() for i in iter_bits(self.vmask)}

    def neighbors(self, v: int) -> list[int]:
        return sorted_labels(self.rows[v - 1])

    # -- derived graphs ----------------------------------------------------
    def induced(self, labels: Iterable[int] | int) -> LabeledGraph:
        """Subgraph induced on ``labels`` (a label iterable or an internal mask)."""
        keep = labels if isinstance(labels, int) else mask_of(labels)
        keep &= self.vmask
        return LabeledGraph(self.n, _restrict(self.rows, keep), keep)

    def delete(self, labels: Iterable[int] | int) -> LabeledGraph:
        drop = labels if isinstance(labels, int) else mask_of(labels)
        return self.induced(self.vmask & ~drop)

    def to_mask(self) -> int:
        """Census encoding; only defined for graphs on the full label set."""
        return graph_to_mask(self)

    # -- value semantics ---------------------------------------------------
    def _key(self):
        return (self.n, self.vmask, self.rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, LabeledGraph) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"LabeledGraph(n={self.n}, vertices={self.vertices()}, edges={self.edges()})"


@dataclass(frozen=True)
class Multigraph:
    """Small multigraph; ``edges`` maps ``(u, v)`` with ``u <= v`` to a multiplicity.

    A loop ``(u, u)`` contributes 2 to the degree of ``u``.
    """

    vertices: frozenset
    edges: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        for (u, v), m in self.edges.items():
            if u > v or m < 1 or u not in self.vertices or v not in self.vertices:
                raise ValueError(f"bad multigraph edge {(u, v)}x{m}")

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def size(self) -> int:
        return sum(self.edges.values())

    def multiplicity(self, u: int, v: int) -> int:
        return self.edges.get((min(u, v), max(u, v)), 0)

    def degree(self, v: int) -> int:
        d = 0
        for (a, b), m in self.edges.items():
            if a == v:
                d += m
            if b == v:
                d += m
        return d

    def has_loops(self) -> bool:
        return any(u == v for u, v in self.edges)

    def is_simple(self) -> bool:
        return not self.has_loops() and all(m == 1 for m in self.edges.values())

    def neighbors(self, v: int) -> set[int]:
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out

    def delete_vertex(self, v: int) -> Multigraph:
        return Multigraph(
            self.vertices - {v},
            {e: m for e, m in self.edges.items() if v not in e},
        )

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        start = min(self.vertices)
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.vertices)

    def relabel(self, mapping: dict[int, int]) -> Multigraph:
        edges: Counter = Counter()
        for (u, v), m in self.edges.items():
            a, b = mapping[u], mapping[v]
            edges[(min(a, b), max(a, b))] += m
        return Multigraph(frozenset(mapping[v] for v in self.vertices), dict(edges))

    def edge_list(self) -> list[list[int]]:
        return [[u, v, m] for (u, v), m in sorted(self.edges.items())]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Multigraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.vertices, tuple(sorted(self.edges.items()))))


# ---------------------------------------------------------------------------
# construction and serialisation


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> LabeledGraph:
    """Graph on labels 1..n with the given edges; duplicate pairs collapse."""
    if n < 0:
        raise ValueError("vertex count must be non-negative")
    rows = [0] * n
    for pair in edges:
        u, v = pair
        if not (1 <= u <= n and 1 <= v <= n):
            raise ValueError(f"edge {(u, v)} has a vertex outside 1..{n}")
        if u == v:
            raise ValueError(f"loop at vertex {u} is not allowed in a simple graph")
        rows[u - 1] |= 1 << (v - 1)
        rows[v - 1] |= 1 << (u - 1)
    return LabeledGraph(n, rows)


def pair_index(u: int, v: int) -> int:
    """Colex position of the pair {u, v} (1-based labels)."""
    i, j = sorted((u - 1, v - 1))
    return j * (j - 1) // 2 + i


def pair_table(n: int) -> list[tuple[int, int]]:
    """Internal (0-based) pairs in colex order: (0,1), (0,2), (1,2), (0,3), ..."""
    return [(i, j) for j in range(n) for i in range(j)]


def graph_from_mask(n: int, mask: int) -> LabeledGraph:
    if n > MASK_LIMIT:
        raise SizeGuardError("mask encoding", n, MASK_LIMIT)
    rows = [0] * n
    for idx, (i, j) in enumerate(pair_table(n)):
        if mask >> idx & 1:
            rows[i] |= 1 << j
            rows[j] |= 1 << i
    return LabeledGraph(n, rows)


def graph_to_mask(g: LabeledGraph) -> int:
    if g.vmask != (1 << g.n) - 1:
        raise ValueError("mask encoding needs a graph on the full label set")
    mask = 0
    for u, v in g.edges():
        mask |= 1 << pair_index(u, v)
    return mask


def parse_edge_list(text: str) -> LabeledGraph:
    """Parse ``n m`` followed by ``m`` whitespace-separated 1-based pairs."""
    tokens = text.split()
    if len(tokens) < 2:
        raise ValueError("edge list needs an 'n m' header")
    n, m = int(tokens[0]), int(tokens[1])
    body = [int(t) for t in tokens[2:]]
    if len(body) != 2 * m:
        raise ValueError(f"header announces {m} edges but {len(body) / 2:g} were given")
    return build_graph(n, zip(body[0::2], body[1::2]))


def format_edge_list(g: LabeledGraph) -> str:
    es = g.edges()
    lines = [f"{g.n} {len(es)}"] + [f"{u} {v}" for u, v in es]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# fast internal primitives on (rows, mask)


def _restrict(rows: Sequence[int], keep: int) -> tuple[int, ...]:
    return tuple((r & keep) if keep >> i & 1 else 0 for i, r in enumerate(rows))


def core_mask(rows: Sequence[int], mask: int) -> int:
    """Vertex mask of the 2-core of the subgraph induced on ``mask``."""
    while True:
        drop = 0
        m = mask
        while m:
            low = m & -m
            m ^= low
            r = rows[low.bit_length() - 1] & mask
            if not r & (r - 1):  # fewer than two neighbours left
                drop |= low
        if not drop:
            return mask
        mask ^= drop


def is_acyclic_mask(rows: Sequence[int], mask: int) -> bool:
    """Forest test by counting: acyclic iff edges = vertices - components.

    Linear in the size of the subgraph, unlike leaf peeling, which needs one
    pass per layer of a deep tree.
    """
    twice_edges = 0
    m = mask
    while m:
        low = m & -m
        twice_edges += (rows[low.bit_length() - 1] & mask).bit_count()
        m ^= low
    return twice_edges // 2 == mask.bit_count() - len(component_masks(rows, mask))


def component_masks(rows: Sequence[int], mask: int) -> list[int]:
    """Components of the induced subgraph, ordered by least vertex."""
    comps = []
    while mask:
        comp = frontier = mask & -mask
        while frontier:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= rows[low.bit_length() - 1]
                f ^= low
            frontier = nxt & mask & ~comp
            comp |= frontier
        comps.append(comp)
        mask &= ~comp
    return comps


def iter_chordless_cycles(rows: Sequence[int], mask: int, core: bool = False) -> Iterator[int]:
    """Yield vertex masks of the induced cycles inside ``mask``, each once.

    Paths grow from their least vertex ``s`` through larger vertices and stay
    induced; a cycle is emitted when the path closes back to ``s`` with the
    second vertex smaller than the last, which fixes one orientation.  Pass
    ``core=True`` when ``mask`` is already a 2-core.
    """
    if not core:
        mask = core_mask(rows, mask)
    m = mask
    while m:
        sbit = m & -m
        m ^= sbit
        s = sbit.bit_length() - 1
        higher = m
        ns = rows[s] & higher
        f = ns
        while f:
            b1 = f & -f
            f ^= b1
            v1 = b1.bit_length() - 1
            # (last vertex, path mask, neighbours of the path interior)
            stack = [(v1, sbit | b1, 0)]
            while stack:
                last, path, blocked = stack.pop()
                cand = rows[last] & higher & ~path & ~blocked
                while cand:
                    wbit = cand & -cand
                    cand ^= wbit
                    if ns & wbit:
                        if b1 < wbit:
                            yield path | wbit
                        continue
                    stack.append((wbit.bit_length() - 1, path | wbit, blocked | rows[last]))


def chordless_cycle_list(rows: Sequence[int], mask: int) -> list[int]:
    return list(iter_chordless_cycles(rows, mask))


# ---------------------------------------------------------------------------
# public structural operations


class Components(NamedTuple):
    blocks: list[VertexSet]
    big: VertexSet
    frag: VertexSet


def is_forest(g: LabeledGraph) -> bool:
    return core_mask(g.rows, g.vmask) == 0


def is_tree(g: LabeledGraph) -> bool:
    return g.order > 0 and is_forest(g) and g.size == g.order - 1


def is_connected(g: LabeledGraph) -> bool:
    return len(component_masks(g.rows, g.vmask)) <= 1


def components(g: LabeledGraph) -> Components:
    """Connected components plus the Big/Frag split.

    Big is the lexicographically first component among those with the most
    vertices; Frag is the union of all the others.
    """
    comps = component_masks(g.rows, g.vmask)
    if not comps:
        return Components([], frozenset(), frozenset())
    big = max(comps, key=lambda c: c.bit_count())  # first maximum wins
    return Components(
        [labels_of(c) for c in comps], labels_of(big), labels_of(g.vmask & ~big)
    )


def two_core(g: LabeledGraph) -> LabeledGraph:
    return g.induced(core_mask(g.rows, g.vmask))


def topological_core(g: LabeledGraph) -> Multigraph:
    """Suppress the degree-2 vertices of the 2-core.

    A component of the core that is a bare cycle becomes its least vertex
    carrying one loop; paths between branch vertices become (possibly
    parallel or loop) edges between their end vertices.
    """
    verts, edges = suppress_mask(g.rows, core_mask(g.rows, g.vmask))
    return Multigraph(frozenset(verts), edges)


def suppress_mask(rows: Sequence[int], core: int) -> tuple[set[int], dict]:
    """Topological core of an induced 2-core as (labels, {(u, v): multiplicity})."""
    branch = 0
    for v in iter_bits(core):
        if (rows[v] & core).bit_count() >= 3:
            branch |= 1 << v
    edges: dict = {}
    verts = set()
    if core & ~branch:
        for comp in component_masks(rows, core):
            if not comp & branch:
                least = (comp & -comp).bit_length()
                verts.add(least)
                edges[(least, least)] = 1
    seen_internal = 0
    for b in iter_bits(branch):
        verts.add(b + 1)
        for w in iter_bits(rows[b] & core):
            wbit = 1 << w
            if branch & wbit:
                if b < w:
                    key = (b + 1, w + 1)
                    edges[key] = edges.get(key, 0) + 1
                continue
            if seen_internal & wbit:
                continue
            prev, cur = b, w
            while not branch >> cur & 1:
                seen_internal |= 1 << cur
                nxt = rows[cur] & core & ~(1 << prev)
                prev, cur = cur, nxt.bit_length() - 1
            key = (b + 1, cur + 1) if b < cur else (cur + 1, b + 1)
            edges[key] = edges.get(key, 0) + 1
    return verts, edges


def spikes(g: LabeledGraph) -> list[tuple[int, int]]:
    """Pairs ``(leaf, v)`` with ``v`` of degree 2, excluding 3-vertex path components."""
    rows = g.rows
    out = []
    for u in iter_bits(g.vmask):
        if rows[u].bit_count() != 1:
            continue
        v = rows[u].bit_length() - 1
        if rows[v].bit_count() != 2:
            continue
        w = (rows[v] & ~(1 << u)).bit_length() - 1
        if rows[w].bit_count() == 1:
            continue  # component is the path u-v-w
        out.append((u + 1, v + 1))
    return out


def chordless_cycles(g: LabeledGraph) -> list[VertexSet]:
    if g.order > CHORDLESS_LIMIT:
        raise SizeGuardError("chordless_cycles", g.order, CHORDLESS_LIMIT)
    return [labels_of(c) for c in iter_chordless_cycles(g.rows, g.vmask)]


def all_graphs(n: int) -> Iterator[LabeledGraph]:
    """Every labelled graph on 1..n, in census mask order."""
    for mask in range(1 << (n * (n - 1) // 2)):
        yield graph_from_mask(n, mask)


def complete_graph(n: int) -> LabeledGraph:
    return build_graph(n, combinations(range(1, n + 1), 2))


def cycle_graph(n: int) -> LabeledGraph:
    return build_graph(n, [(i, i % n + 1) for i in range(1, n + 1)])


def path_graph(n: int) -> LabeledGraph:
    return build_graph(n, [(i, i + 1) for i in range(1, n)])
