"""Seeded random generators: uniform labelled trees and forests, the
three-step apex construction, and an exactly uniform sampler for graphs
without k+1 disjoint cycles on a handful of vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import mpmath
import numpy as np

from .blockers import has_two_disjoint_cycles, packing_masks
from .enumeration import CENSUS_LIMIT, KMAX_LIMIT, forest_count, iter_mask_rows, tree_count
from .errors import SizeGuardError
from .graph import LabeledGraph, core_mask, graph_from_mask, iter_bits

RNG_ID = f"numpy-{np.__version__}/PCG64/SeedSequence"


class SeededRng:
    """PCG64 stream keyed by (seed, worker_id); ``split`` derives a child
    stream for another worker or sample index."""

    def __init__(self, seed: int = 0, worker_id: int | tuple[int, ...] = 0):
        if seed < 0 or seed >= 1 << 64:
            raise ValueError("seed must fit in 64 unsigned bits")
        key = worker_id if isinstance(worker_id, tuple) else (worker_id,)
        self.seed = seed
        self.key = key
        self.gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))

    def split(self, worker_id: int) -> SeededRng:
        return SeededRng(self.seed, self.key + (worker_id,))

    def describe(self) -> dict:
        return {"rng": RNG_ID, "seed": str(self.seed), "stream": list(self.key)}

    def integers(self, lo: int, hi: int, size=None):
        """Uniform integers in [lo, hi)."""
        return self.gen.integers(lo, hi, size=size)

    def coin_bits(self, count: int) -> np.ndarray:
        """``count`` independent fair bits as a bool array."""
        return self.gen.integers(0, 2, size=count, dtype=np.uint8).astype(bool)

    def below(self, bound: int) -> int:
        """Exactly uniform integer in [0, bound) for any positive Python int."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        if bound <= 1 << 62:
            return int(self.gen.integers(0, bound))
        bits = (bound - 1).bit_length()
        nbytes = (bits + 7) // 8
        excess = nbytes * 8 - bits
        while True:
            x = int.from_bytes(self.gen.bytes(nbytes), "little") >> excess
            if x < bound:
                return x

    def subset(self, n: int, k: int) -> list[int]:
        """Uniform k-subset of range(n), sorted."""
        return sorted(int(v) for v in self.gen.choice(n, size=k, replace=False))


# ---------------------------------------------------------------------------
# trees and forests


def prufer_decode(seq, n: int) -> list[tuple[int, int]]:
    """Edges (0-based) of the tree on range(n) with Prüfer sequence ``seq``."""
    if n == 1:
        return []
    if n == 2:
        return [(0, 1)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    for x in seq:
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1 and x < ptr:
            leaf = x
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    edges.append((leaf, n - 1))
    return edges


def _tree_edges(labels: list[int], rng: SeededRng) -> list[tuple[int, int]]:
    m = len(labels)
    seq = [int(x) for x in rng.integers(0, m, size=m - 2)] if m > 2 else []
    return [(labels[a], labels[b]) for a, b in prufer_decode(seq, m)]


def _graph(n: int, edges) -> LabeledGraph:
    rows = [0] * n
    for u, v in edges:
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return LabeledGraph(n, rows)


def random_tree(n: int, rng: SeededRng) -> LabeledGraph:
    """Uniform labelled tree on {1..n} via a uniform Prüfer sequence."""
    if n < 1:
        raise ValueError("a tree needs at least one vertex")
    return _graph(n, _tree_edges(list(range(n)), rng))


EXACT_WALK = 256  # component sizes of forests up to this order are drawn exactly
_DRAW_BITS = 224
_MP = mpmath.mp.clone()
_MP.dps = 70


@lru_cache(maxsize=None)
def _forest_mp(n: int):
    """forest_count(n) to about 65 significant digits.

    Small n convert the exact count.  Otherwise the closed form is summed in
    floating point: its b-th term is (2b-1)!! C(n-2, 2b) (n-1)(2b+2)/(n-1-2b)
    (n+1)^(n-2-2b), roughly n^(n-2) (2b+2) / (2^b b!), so a few dozen terms
    settle every digit.
    """
    ctx = _MP
    if n <= EXACT_WALK:
        return ctx.mpf(forest_count(n))
    base = ctx.mpf(n + 1)
    total = ctx.mpf(0)
    tol = ctx.mpf(10) ** (-(ctx.dps + 5))
    b = 0
    while True:
        j = 2 * b
        term = (
            ctx.fac2(j - 1)
            * ctx.binomial(n - 2, j)
            * (n - 1) * (j + 2) / (n - 1 - j)
            * ctx.power(base, n - 2 - j)
        )
        total += -term if b & 1 else term
        if b > 4 and term < tol * abs(total):
            return total
        b += 1


def _component_size(r: int, rng: SeededRng) -> int:
    """Size of the tree holding the least of r vertices in a uniform forest.

    The weights C(r-1, m-1) m^(m-2) f(r-m) sum to f(r) and most of the mass
    sits at m near r, so the search walks down from m = r.  Up to EXACT_WALK
    vertices one exact integer draw below f(r) is located among the exact
    weights.  Beyond that the weights become 70-digit ratios to f(r) and are
    compared with a 224-bit uniform draw; the rounding bias is below 1e-60.
    """
    if r <= EXACT_WALK:
        u = rng.below(forest_count(r))
        for m in range(r, 0, -1):
            w = comb(r - 1, m - 1) * tree_count(m) * forest_count(r - m)
            if u < w:
                return m
            u -= w
        raise AssertionError("component weights do not sum to the forest count")
    ctx = _MP
    u = ctx.mpf(rng.below(1 << _DRAW_BITS)) / (1 << _DRAW_BITS)
    whole = _forest_mp(r)
    acc = ctx.mpf(0)
    for m in range(r, 1, -1):
        acc += ctx.binomial(r - 1, m - 1) * ctx.power(m, m - 2) * _forest_mp(r - m) / whole
        if u < acc:
            return m
    return 1


def _forest_edges(labels: list[int], rng: SeededRng) -> list[tuple[int, int]]:
    edges: list[tuple[int, int]] = []
    rest = list(labels)
    while rest:
        m = _component_size(len(rest), rng)
        first, others = rest[0], rest[1:]
        if m == 1:
            picked: list[int] = []
        else:
            idx = set(int(i) for i in rng.gen.choice(len(others), size=m - 1, replace=False))
            picked = [others[i] for i in sorted(idx)]
            others = [v for i, v in enumerate(others) if i not in idx]
        edges.extend(_tree_edges([first] + picked, rng))
        rest = others
    return edges


def random_forest(n: int, rng: SeededRng) -> LabeledGraph:
    """Uniform labelled forest on {1..n}."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _graph(n, _forest_edges(list(range(n)), rng))


# ---------------------------------------------------------------------------
# apex construction


@dataclass(frozen=True)
class ApexConstruction:
    """Record of one run of the three-step construction.

    ``S`` is the apex set; ``s_edges`` the graph put on it; ``forest`` the
    forest on the remaining labels; ``cross[i]`` the label mask of the
    neighbours outside S of the i-th apex vertex (in increasing order).
    """

    n: int
    S: frozenset
    s_edges: tuple[tuple[int, int], ...]
    forest: LabeledGraph
    cross: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.S)

    def bipartite_edges(self) -> list[tuple[int, int]]:
        out = []
        for s, m in zip(sorted(self.S), self.cross):
            out.extend((s, v + 1) for v in iter_bits(m))
        return out


def random_apex_construction(n: int, k: int, rng: SeededRng) -> tuple[LabeledGraph, ApexConstruction]:
    """Uniform k-set S, fair coins on pairs inside S, a uniform forest on the
    rest, and fair coins on every pair between S and the rest."""
    if k < 0 or n <= k:
        raise ValueError("need n > k >= 0")
    s_idx = rng.subset(n, k)
    s_set = set(s_idx)
    outside = [v for v in range(n) if v not in s_set]
    rows = [0] * n
    forest_edges = _forest_edges(outside, rng)
    for u, v in forest_edges:
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    forest_rows = list(rows)

    s_edges = []
    if k >= 2:
        coins = rng.coin_bits(k * (k - 1) // 2)
        pos = 0
        for j in range(k):
            for i in range(j):
                if coins[pos]:
                    a, b = s_idx[i], s_idx[j]
                    rows[a] |= 1 << b
                    rows[b] |= 1 << a
                    s_edges.append((a + 1, b + 1))
                pos += 1

    cross = []
    if k:
        out_arr = np.array(outside, dtype=np.int64)
        coins = rng.coin_bits(k * len(outside)).reshape(k, len(outside))
        for i, s in enumerate(s_idx):
            flags = np.zeros(n, dtype=bool)
            flags[out_arr[coins[i]]] = True
            m = int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")
            cross.append(m)
            rows[s] |= m
            sbit = 1 << s
            for v in out_arr[coins[i]].tolist():
                rows[v] |= sbit

    graph = LabeledGraph(n, rows)
    out_mask = 0
    for v in outside:
        out_mask |= 1 << v
    forest = LabeledGraph(n, forest_rows, out_mask)
    record = ApexConstruction(
        n=n,
        S=frozenset(v + 1 for v in s_idx),
        s_edges=tuple(s_edges),
        forest=forest,
        cross=tuple(cross),
    )
    return graph, record


# ---------------------------------------------------------------------------
# exact uniform sampling at tiny n


@lru_cache(maxsize=8)
def ex_member_masks(n: int, k: int) -> tuple[int, ...]:
    """Census masks of all graphs on n vertices with no k+1 disjoint cycles."""
    if n > CENSUS_LIMIT:
        raise SizeGuardError("exact_uniform_ex", n, CENSUS_LIMIT)
    if k > KMAX_LIMIT:
        raise SizeGuardError("exact_uniform_ex k", k, KMAX_LIMIT)
    if k < 0:
        raise ValueError("k must be non-negative")
    full = (1 << n) - 1
    out = []
    for mask, rows in iter_mask_rows(n):
        core = core_mask(rows, full)
        if not core:
            out.append(mask)
        elif k == 1:
            if not has_two_disjoint_cycles(rows, core):
                out.append(mask)
        elif k >= 2:
            if len(packing_masks(rows, core, cap=k + 1)) <= k:
                out.append(mask)
    return tuple(out)


def exact_uniform_ex(n: int, k: int, rng: SeededRng) -> LabeledGraph:
    """Exactly uniform graph on {1..n} without k+1 disjoint cycles."""
    members = ex_member_masks(n, k)
    return graph_from_mask(n, members[rng.below(len(members))])

