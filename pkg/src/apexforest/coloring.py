"""Exact chromatic and clique numbers.

Given a blocker S (so G - S is a forest) both numbers reduce to work on S:
a clique meets the forest in at most two adjacent vertices, and a colouring
of G[S] extends to the forest iff a bottom-up pass over each tree leaves
every vertex at least one colour.  Without a blocker a plain exact search
runs under a size guard.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import NotABlockerError, SizeGuardError
from .graph import LabeledGraph, is_acyclic_mask, iter_bits, mask_of

UNSTRUCTURED_LIMIT = 20


@dataclass(frozen=True)
class ColoringResult:
    chi: int
    omega: int

    def __post_init__(self):
        if self.omega > self.chi:
            raise AssertionError(f"clique number {self.omega} exceeds chromatic number {self.chi}")


# ---------------------------------------------------------------------------
# cliques


def max_clique_in(rows, cand: int) -> int:
    """Size of a largest clique inside the vertex mask ``cand`` (Tomita pivoting)."""
    best = 0

    def expand(size: int, p: int, x: int) -> None:
        nonlocal best
        if not p:
            if not x and size > best:
                best = size
            return
        if size + p.bit_count() <= best:
            return
        px = p | x
        pivot, most = -1, -1
        for u in iter_bits(px):
            c = (rows[u] & p).bit_count()
            if c > most:
                pivot, most = u, c
        for v in iter_bits(p & ~rows[pivot]):
            bit = 1 << v
            expand(size + 1, p & rows[v], x & rows[v])
            p &= ~bit
            x |= bit

    expand(0, cand, 0)
    return best


def _hint_mask(g: LabeledGraph, hint: Iterable[int] | None) -> int | None:
    if hint is None:
        return None
    s = mask_of(hint)
    if s & ~g.vmask:
        raise NotABlockerError("blocker hint contains vertices outside the graph")
    if not is_acyclic_mask(g.rows, g.vmask & ~s):
        raise NotABlockerError("blocker hint leaves a cycle")
    return s


def _clique_with_blocker(g: LabeledGraph, s: int) -> int:
    rows = g.rows
    memo: dict[int, int] = {}

    def inside(cand: int) -> int:
        got = memo.get(cand)
        if got is None:
            got = memo[cand] = max_clique_in(rows, cand)
        return got

    best = inside(s)
    forest = g.vmask & ~s
    # only forest vertices with a neighbour in S can push past 1 or 2
    touched = 0
    f = forest
    while f:
        low = f & -f
        if rows[low.bit_length() - 1] & s:
            touched |= low
        f ^= low
    if forest:
        best = max(best, 1)
    for v in iter_bits(forest):
        if rows[v] & forest:
            best = max(best, 2)
            break
    for v in iter_bits(touched):
        nv = rows[v]
        best = max(best, 1 + inside(s & nv))
        for u in iter_bits(nv & touched & ~((2 << v) - 1)):
            best = max(best, 2 + inside(s & nv & rows[u]))
    return best


def clique_number(g: LabeledGraph, blocker_hint: Iterable[int] | None = None) -> int:
    s = _hint_mask(g, blocker_hint)
    if s is not None:
        return _clique_with_blocker(g, s)
    if g.order > UNSTRUCTURED_LIMIT:
        raise SizeGuardError("clique_number without blocker", g.order, UNSTRUCTURED_LIMIT)
    return max_clique_in(g.rows, g.vmask)


# ---------------------------------------------------------------------------
# colourings


def _colourable(rows, vmask: int, k: int) -> bool:
    """Backtracking k-colouring, picking the most constrained vertex first."""
    verts = list(iter_bits(vmask))
    if not verts:
        return True
    if k <= 0:
        return False
    colour: dict[int, int] = {}

    def step(used: int) -> bool:
        if len(colour) == len(verts):
            return True
        pick, pick_sat, pick_deg, pick_forbid = -1, -1, -1, 0
        for v in verts:
            if v in colour:
                continue
            forbid = 0
            for u in iter_bits(rows[v] & vmask):
                c = colour.get(u)
                if c is not None:
                    forbid |= 1 << c
            sat = forbid.bit_count()
            deg = (rows[v] & vmask).bit_count()
            if sat > pick_sat or (sat == pick_sat and deg > pick_deg):
                pick, pick_sat, pick_deg, pick_forbid = v, sat, deg, forbid
        # a fresh colour is interchangeable with any other fresh colour
        for c in range(min(used + 1, k)):
            if pick_forbid >> c & 1:
                continue
            colour[pick] = c
            if step(max(used, c + 1)):
                return True
            del colour[pick]
        return False

    return step(0)


def _forest_plan(g: LabeledGraph, s: int):
    """BFS order and parents of the forest G - S, plus S-neighbour lists."""
    rows = g.rows
    forest = g.vmask & ~s
    parent: dict[int, int] = {}
    order: list[int] = []
    left = forest
    while left:
        root = (left & -left).bit_length() - 1
        parent[root] = -1
        start = len(order)
        order.append(root)
        left &= ~(1 << root)
        i = start
        while i < len(order):
            x = order[i]
            i += 1
            nxt = rows[x] & left
            left &= ~nxt
            for y in iter_bits(nxt):
                parent[y] = x
                order.append(y)
    s_list = list(iter_bits(s))
    s_pos = {v: i for i, v in enumerate(s_list)}
    attach = {
        v: [s_pos[u] for u in iter_bits(rows[v] & s)] for v in order if rows[v] & s
    }
    return order, parent, s_list, attach


def _extends(order, parent, attach, colours: list[int], k: int) -> bool:
    full = (1 << k) - 1
    feas = dict.fromkeys(order, full)
    for v, idx in attach.items():
        m = full
        for i in idx:
            m &= ~(1 << colours[i])
        feas[v] = m
    for v in reversed(order):
        f = feas[v]
        if not f:
            return False
        p = parent[v]
        if p >= 0 and not f & (f - 1):
            # the child is pinned to one colour, so the parent must avoid it
            feas[p] &= ~f
    return True


def _s_colourings(rows, s_list: list[int], k: int):
    """Proper colourings of G[S] with at most k colours, up to renaming."""
    n = len(s_list)
    colours = [0] * n
    back = [[j for j in range(i) if rows[s_list[i]] >> s_list[j] & 1] for i in range(n)]

    def rec(i: int, used: int):
        if i == n:
            yield colours
            return
        for c in range(min(used + 1, k)):
            if any(colours[j] == c for j in back[i]):
                continue
            colours[i] = c
            yield from rec(i + 1, max(used, c + 1))

    yield from rec(0, 0)


def _chi_with_blocker(g: LabeledGraph, s: int, lower: int) -> int:
    if g.order == 0:
        return 0
    order, parent, s_list, attach = _forest_plan(g, s)
    k = max(lower, 1)
    while True:
        for colours in _s_colourings(g.rows, s_list, k):
            if _extends(order, parent, attach, colours, k):
                return k
        k += 1


def chromatic_number(g: LabeledGraph, blocker_hint: Iterable[int] | None = None) -> int:
    s = _hint_mask(g, blocker_hint)
    if s is not None:
        return _chi_with_blocker(g, s, _clique_with_blocker(g, s))
    if g.order > UNSTRUCTURED_LIMIT:
        raise SizeGuardError("chromatic_number without blocker", g.order, UNSTRUCTURED_LIMIT)
    k = max_clique_in(g.rows, g.vmask)
    while not _colourable(g.rows, g.vmask, k):
        k += 1
    return k


def coloring_invariants(g: LabeledGraph, blocker_hint: Iterable[int] | None = None) -> ColoringResult:
    """Both numbers at once; with a blocker of size k checks chi <= k + 2."""
    s = _hint_mask(g, blocker_hint)
    if s is None:
        result = ColoringResult(chromatic_number(g), clique_number(g))
    else:
        omega = _clique_with_blocker(g, s)
        result = ColoringResult(_chi_with_blocker(g, s, omega), omega)
        bound = s.bit_count() + 2
        if result.chi > bound or result.omega > bound:
            raise AssertionError(f"invariants exceed apex bound {bound}: {result}")
    return result
