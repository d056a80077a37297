"""Disjoint cycle packing, minimum blockers (feedback vertex sets), and the
redundant-blocker construction.

A *blocker* of G is a vertex set B with G - B acyclic.  A blocker is
k-redundant when B - {v} is still a blocker for all but at most k of its
vertices v.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import NotABlockerError, NotInClassError, SizeGuardError
from .graph import (
    LabeledGraph,
    VertexSet,
    chordless_cycle_list,
    component_masks,
    iter_chordless_cycles,
    core_mask,
    iter_bits,
    labels_of,
    mask_of,
    sorted_labels,
)

EXACT_LIMIT = 16


@dataclass(frozen=True)
class PackingWitness:
    cycles: tuple[VertexSet, ...]

    def __len__(self) -> int:
        return len(self.cycles)


@dataclass(frozen=True)
class BlockerCertificate:
    Q: VertexSet
    S: VertexSet
    A: VertexSet
    B: VertexSet
    k: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "Q": sorted(self.Q),
                "S": sorted(self.S),
                "A": sorted(self.A),
                "B": sorted(self.B),
                "k": self.k,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> BlockerCertificate:
        d = json.loads(text)
        return cls(*(frozenset(d[key]) for key in "QSAB"), k=int(d["k"]))


def _guard(g: LabeledGraph, what: str) -> None:
    if g.order > EXACT_LIMIT:
        raise SizeGuardError(what, g.order, EXACT_LIMIT)


# ---------------------------------------------------------------------------
# cycle packing


def packing_masks(rows: Sequence[int], mask: int, cap: int | None = None) -> list[int]:
    """Maximum family of vertex-disjoint chordless cycles inside ``mask``.

    Every cycle contains an induced cycle on a subset of its vertices, so a
    packing of induced cycles is as large as any cycle packing.  With ``cap``
    the search stops as soon as ``cap`` disjoint cycles are found.
    """
    cycles = chordless_cycle_list(rows, mask)
    if not cycles:
        return []
    cycles.sort(key=lambda c: (c.bit_count(), c))
    free_all = 0
    for c in cycles:
        free_all |= c

    best: list[int] = []
    chosen: list[int] = []
    for c in cycles:  # greedy lower bound
        if not any(c & d for d in chosen):
            chosen.append(c)
    best = chosen[:]
    limit = cap if cap is not None else len(cycles)
    if len(best) >= limit:
        return best[:limit]

    def search(cands: list[int], free: int, picked: list[int]) -> bool:
        nonlocal best
        if len(picked) > len(best):
            best = picked[:]
            if len(best) >= limit:
                return True
        if not cands:
            return False
        if len(picked) + min(len(cands), free.bit_count() // 3) <= len(best):
            return False
        c = cands[0]
        rest = cands[1:]
        picked.append(c)
        if search([d for d in rest if not d & c], free & ~c, picked):
            return True
        picked.pop()
        return search(rest, free, picked)

    search(cycles, free_all, [])
    return best


def has_two_disjoint_cycles(rows: Sequence[int], core: int) -> bool:
    """Early-exit test for two disjoint cycles inside a 2-core mask."""
    for c in iter_chordless_cycles(rows, core, core=True):
        if core_mask(rows, core & ~c):
            return True
    return False


def cycle_packing_number(g: LabeledGraph) -> tuple[int, PackingWitness]:
    _guard(g, "cycle_packing_number")
    best = packing_masks(g.rows, g.vmask)
    witness = PackingWitness(tuple(labels_of(c) for c in sorted(best)))
    return len(best), witness


def is_in_ex_cycles(g: LabeledGraph, k: int) -> bool:
    """True iff G has no k+1 pairwise vertex-disjoint cycles."""
    if k < 0:
        raise ValueError("k must be non-negative")
    _guard(g, "is_in_ex_cycles")
    return len(packing_masks(g.rows, g.vmask, cap=k + 1)) <= k


# ---------------------------------------------------------------------------
# blockers


def is_blocker(g: LabeledGraph, b: VertexSet | set | list) -> bool:
    return core_mask(g.rows, g.vmask & ~mask_of(b)) == 0


def _some_cycle(rows: Sequence[int], core: int) -> int:
    """Mask of a short induced cycle inside a non-empty 2-core."""
    for v in iter_bits(core):
        nv = rows[v] & core
        for u in iter_bits(nv >> (v + 1)):
            u += v + 1
            common = rows[u] & nv
            if common:
                w = (common & -common).bit_length() - 1
                return (1 << v) | (1 << u) | (1 << w)
    # triangle-free: walk until a vertex repeats, then shortcut chords
    start = (core & -core).bit_length() - 1
    path = [start]
    pos = {start: 0}
    prev = -1
    cur = start
    while True:
        nxt_mask = rows[cur] & core
        if prev >= 0:
            nxt_mask &= ~(1 << prev)
        nxt = (nxt_mask & -nxt_mask).bit_length() - 1
        if nxt in pos:
            cyc = path[pos[nxt]:]
            break
        pos[nxt] = len(path)
        path.append(nxt)
        prev, cur = cur, nxt
    changed = True
    while changed:
        changed = False
        ln = len(cyc)
        for i in range(ln):
            for j in range(i + 2, ln):
                if i == 0 and j == ln - 1:
                    continue
                if rows[cyc[i]] >> cyc[j] & 1:
                    inner = cyc[i : j + 1]
                    outer = cyc[j:] + cyc[: i + 1]
                    cyc = inner if len(inner) <= len(outer) else outer
                    changed = True
                    break
            if changed:
                break
    m = 0
    for v in cyc:
        m |= 1 << v
    return m


def fvs_exists(rows: Sequence[int], mask: int, allowed: int, budget: int) -> bool:
    """Is there X within ``allowed``, |X| <= budget, with mask - X acyclic?

    Branches on the vertices of one induced cycle: any blocker meets it.
    """
    core = core_mask(rows, mask)
    if not core:
        return True
    if budget <= 0:
        return False
    cyc = _some_cycle(rows, core)
    for v in iter_bits(cyc & allowed):
        if fvs_exists(rows, core & ~(1 << v), allowed, budget - 1):
            return True
    return False


def min_blocker_size(rows: Sequence[int], mask: int, allowed: int | None = None) -> int | None:
    core = core_mask(rows, mask)
    if allowed is None:
        allowed = core
    s = 0
    while s <= core.bit_count():
        if fvs_exists(rows, core, allowed, s):
            return s
        s += 1
    return None


def min_blocker(g: LabeledGraph) -> VertexSet:
    """Lexicographically least minimum-cardinality blocker."""
    _guard(g, "min_blocker")
    rows = g.rows
    core = core_mask(rows, g.vmask)
    size = min_blocker_size(rows, core)
    chosen = 0
    last = -1
    for slot in range(size):
        for v in iter_bits(core >> (last + 1)):
            v += last + 1
            later = core & ~((1 << (v + 1)) - 1)
            if fvs_exists(rows, core & ~chosen & ~(1 << v), later, size - slot - 1):
                chosen |= 1 << v
                last = v
                break
    return labels_of(chosen)


def is_apex_forest(g: LabeledGraph, k: int) -> tuple[bool, VertexSet | None]:
    """Does G have a blocker of size at most k?  Returns a witness blocker.

    Only 2-core vertices are tried: deleting anything else destroys no cycle.
    The witness is the first blocker by (size, lexicographic order).
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    rows = g.rows
    core = core_mask(rows, g.vmask)
    if not core:
        return True, frozenset()
    verts = list(iter_bits(core))
    for size in range(1, min(k, len(verts)) + 1):
        for combo in combinations(verts, size):
            drop = 0
            for v in combo:
                drop |= 1 << v
            if not core_mask(rows, core & ~drop):
                return True, frozenset(v + 1 for v in combo)
    return False, None


def non_redundant_vertices(g: LabeledGraph, b: VertexSet | set | list) -> list[int]:
    """Vertices v of B such that B - {v} is not a blocker."""
    bm = mask_of(b)
    return [
        v + 1
        for v in iter_bits(bm)
        if core_mask(g.rows, g.vmask & ~(bm & ~(1 << v)))
    ]


def verify_redundant(g: LabeledGraph, b: VertexSet | set | list, k: int) -> bool:
    if not is_blocker(g, b):
        return False
    return len(non_redundant_vertices(g, b)) <= k


# ---------------------------------------------------------------------------
# redundant blocker construction


def _tree_data(rows: Sequence[int], tree: int, root: int):
    """BFS parents, depths and order of a tree given as a vertex mask."""
    parent = {root: -1}
    depth = {root: 0}
    order = [root]
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for y in iter_bits(rows[x] & tree):
            if y not in parent:
                parent[y] = x
                depth[y] = depth[x] + 1
                order.append(y)
    return parent, depth, order


def _heavy_attachment(rows: Sequence[int], q: int, part: int) -> int:
    """Least vertex of ``q`` with at least two neighbours in ``part``, or -1."""
    for x in iter_bits(q):
        if (rows[x] & part).bit_count() >= 2:
            return x
    return -1


def _redundant(rows: Sequence[int], mask: int, q: int, k: int) -> tuple[int, int]:
    q &= mask
    forest = mask & ~q
    for tree in component_masks(rows, forest):
        if _heavy_attachment(rows, q, tree) >= 0:
            break
    else:
        return 0, 0
    if k == 0:
        raise NotInClassError("graph has more disjoint cycles than allowed by k")

    root = (tree & -tree).bit_length() - 1
    parent, depth, order = _tree_data(rows, tree, root)
    sub = {}
    for v in reversed(order):
        sub[v] = sub.get(v, 0) | (1 << v)
        p = parent[v]
        if p >= 0:
            sub[p] = sub.get(p, 0) | sub[v]
    u = -1
    for v in order:
        if _heavy_attachment(rows, q, sub[v]) >= 0:
            if u < 0 or depth[v] > depth[u] or (depth[v] == depth[u] and v < u):
                u = v
    z = _heavy_attachment(rows, q, sub[u])
    s_rest, a_rest = _redundant(rows, mask & ~sub[u] & ~(1 << z), q & ~(1 << z), k - 1)
    return s_rest | (1 << z), a_rest | (1 << u)


def redundant_blocker(g: LabeledGraph, k: int, q: VertexSet | set | list) -> BlockerCertificate:
    """Extend blocker Q by at most k vertices to a k-redundant blocker.

    Follows the inductive construction: locate a tree T of G - Q that some
    x in Q meets twice, take the deepest vertex u of T whose subtree is still
    met twice by some z in Q, and recurse on G - (T_u + z) with Q - z and
    k - 1.  All choices are resolved towards the least label.

    Raises ``NotABlockerError`` if Q is not a blocker and ``NotInClassError``
    when the recursion would need more than k levels, which certifies that G
    has k+1 disjoint cycles.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    qm = mask_of(q)
    if qm & ~g.vmask:
        raise ValueError("Q contains vertices outside the graph")
    if core_mask(g.rows, g.vmask & ~qm):
        raise NotABlockerError(f"{sorted_labels(qm)} is not a blocker")
    s, a = _redundant(g.rows, g.vmask, qm, k)
    return BlockerCertificate(
        Q=labels_of(qm), S=labels_of(s), A=labels_of(a), B=labels_of(qm | a), k=k
    )


def certificate_ok(g: LabeledGraph, cert: BlockerCertificate) -> bool:
    """Check every structural invariant of a certificate against G."""
    Q, S, A, B, k = cert.Q, cert.S, cert.A, cert.B, cert.k
    if not (S <= Q and not (A & Q) and len(S) <= k and len(A) <= k and B == Q | A):
        return False
    if not is_blocker(g, B):
        return False
    return set(non_redundant_vertices(g, B)) <= set(S)
