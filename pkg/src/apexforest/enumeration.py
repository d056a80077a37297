"""Exact counting: tree and forest numbers, forests by component count, and
exhaustive censuses of all labelled graphs on a few vertices.

Everything here is integer arithmetic; nothing is rounded.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterator

from .blockers import has_two_disjoint_cycles, packing_masks
from .errors import SizeGuardError
from .graph import component_masks, core_mask, pair_table
from .structure import Ex2CClass, family_labels, wheel_hub_count

CENSUS_LIMIT = 7
CENSUS_LIMIT_LARGE = 8
KMAX_LIMIT = 2


# ---------------------------------------------------------------------------
# closed-form and recursive counts


def tree_count(n: int) -> int:
    """Labelled trees on n vertices (Cayley)."""
    if n < 1:
        raise ValueError("tree_count needs n >= 1")
    return 1 if n == 1 else n ** (n - 2)


_FOREST_TABLE = [1]
_BY_COMPONENTS: list[tuple[int, ...]] = [(1,)]


@lru_cache(maxsize=4096)
def forest_count(n: int) -> int:
    """Labelled forests on n vertices.

    Lagrange inversion of exp(T) with T = R - R^2/2 and R = z e^R gives

        f(n) = sum_b (-1)^b (2b-1)!! [C(n-1, 2b) (n+1)^(n-1-2b)
                                      - (n-1) C(n-2, 2b) (n+1)^(n-2-2b)],

    a single sum of n/2 terms; ``forest_count_recursive`` is the
    independent check.
    """
    if n < 0:
        raise ValueError("forest_count needs n >= 0")
    if n < 2:
        return 1
    base = n + 1
    powers = [1] * n
    for e in range(1, n):
        powers[e] = powers[e - 1] * base
    total = 0
    dfact = 1
    c1, c2 = 1, 1  # C(n-1, 2b) and C(n-2, 2b), updated in place
    for b in range(n // 2 + 1):
        j = 2 * b
        if b:
            dfact *= j - 1
            c1 = c1 * (n - j + 1) * (n - j) // ((j - 1) * j)
            c2 = c2 * (n - j) * (n - j - 1) // ((j - 1) * j)
        term = 0
        if n - 1 - j >= 0:
            term += c1 * powers[n - 1 - j]
        if n - 2 - j >= 0:
            term -= (n - 1) * c2 * powers[n - 2 - j]
        total += -dfact * term if b & 1 else dfact * term
    return total


def forest_count_recursive(n: int) -> int:
    """Forest numbers from the split at the tree containing vertex 1
    (quadratic in n; meant for cross-checks)."""
    if n < 0:
        raise ValueError("forest_count needs n >= 0")
    table = _FOREST_TABLE
    while len(table) <= n:
        r = len(table)
        table.append(
            sum(comb(r - 1, m - 1) * tree_count(m) * table[r - m] for m in range(1, r + 1))
        )
    return table[n]


def _by_components_row(n: int) -> tuple[int, ...]:
    """Row j -> number of forests on n vertices with exactly j trees."""
    rows = _BY_COMPONENTS
    while len(rows) <= n:
        r = len(rows)
        row = [0] * (r + 1)
        for m in range(1, r + 1):
            w = comb(r - 1, m - 1) * tree_count(m)
            for j, c in enumerate(rows[r - m]):
                row[j + 1] += w * c
        rows.append(tuple(row))
    return rows[n]


def forest_count_by_components(n: int, j: int) -> int:
    """Labelled forests on n vertices with exactly j components."""
    if n < 0 or j < 0:
        raise ValueError("n and j must be non-negative")
    if j > n:
        raise ValueError(f"a forest on {n} vertices cannot have {j} components")
    return _by_components_row(n)[j]


def forest_component_tail(n: int, t: int) -> int:
    """Forests on n vertices with at least t + 1 components."""
    row = _by_components_row(n)
    return sum(row[t + 1 :])


# ---------------------------------------------------------------------------
# mask iteration


def iter_mask_rows(n: int, lo: int = 0, hi: int | None = None) -> Iterator[tuple[int, list[int]]]:
    """Yield ``(mask, rows)`` for census masks in [lo, hi).

    ``rows`` is one list updated in place between steps (consecutive masks
    differ in two bits on average); copy it if it must outlive the step.
    """
    pairs = pair_table(n)
    flips = [((1 << j), i, (1 << i), j) for i, j in pairs]
    total = 1 << len(pairs)
    hi = total if hi is None else min(hi, total)
    rows = [0] * n
    for idx, (ibit, i, jbit, j) in enumerate(flips):
        if lo >> idx & 1:
            rows[i] |= ibit
            rows[j] |= jbit
    mask = lo
    while mask < hi:
        yield mask, rows
        if mask + 1 >= hi:
            break
        diff = mask ^ (mask + 1)
        mask += 1
        while diff:
            low = diff & -diff
            jb, i, ib, j = flips[low.bit_length() - 1]
            rows[i] ^= jb
            rows[j] ^= ib
            diff ^= low


# ---------------------------------------------------------------------------
# census


@dataclass
class CountRecord:
    """Exact class sizes among all labelled graphs on {1..n}.

    ``apex[k]``, ``ex[k]`` and ``diff[k]`` are the numbers of graphs with a
    blocker of size at most k, with no k+1 disjoint cycles, and the
    difference of the two.  The family counts (``wheel``, ``b_type``,
    ``k_type``) cover graphs with no two disjoint cycles; ``wheel_connected``
    restricts to connected graphs and ``wheel_hubs`` weights each of those by
    its number of admissible hubs.
    """

    n: int
    kmax: int
    total: int = 0
    forests: int = 0
    trees: int = 0
    apex: list[int] = field(default_factory=list)
    ex: list[int] = field(default_factory=list)
    wheel: int = 0
    b_type: int = 0
    k_type: int = 0
    wheel_connected: int = 0
    wheel_hubs: int = 0

    def __post_init__(self):
        if not self.apex:
            self.apex = [0] * (self.kmax + 1)
        if not self.ex:
            self.ex = [0] * (self.kmax + 1)

    @property
    def diff(self) -> list[int]:
        return [e - a for e, a in zip(self.ex, self.apex)]

    def merge(self, other: CountRecord) -> CountRecord:
        if (self.n, self.kmax) != (other.n, other.kmax):
            raise ValueError("cannot merge records of different shape")
        out = CountRecord(self.n, self.kmax)
        for name in ("total", "forests", "trees", "wheel", "b_type", "k_type",
                     "wheel_connected", "wheel_hubs"):
            setattr(out, name, getattr(self, name) + getattr(other, name))
        out.apex = [a + b for a, b in zip(self.apex, other.apex)]
        out.ex = [a + b for a, b in zip(self.ex, other.ex)]
        return out

    def rows(self) -> list[dict]:
        """Flat rows ``{n, class, k, count}`` with counts as decimal strings."""
        out = [
            {"n": self.n, "class": "all", "k": None, "count": str(self.total)},
            {"n": self.n, "class": "forest", "k": None, "count": str(self.forests)},
            {"n": self.n, "class": "tree", "k": None, "count": str(self.trees)},
        ]
        for k in range(self.kmax + 1):
            out.append({"n": self.n, "class": f"apex{k}F", "k": k, "count": str(self.apex[k])})
            out.append({"n": self.n, "class": f"ex{k + 1}C", "k": k, "count": str(self.ex[k])})
            out.append({"n": self.n, "class": f"D{k}", "k": k, "count": str(self.diff[k])})
        if self.kmax >= 1:
            for name, value in (
                ("W", self.wheel),
                ("B", self.b_type),
                ("K", self.k_type),
                ("W_connected", self.wheel_connected),
                ("W_hubs", self.wheel_hubs),
            ):
                out.append({"n": self.n, "class": name, "k": 1, "count": str(value)})
        return out

    def to_json(self) -> str:
        return json.dumps(self.rows())


def _max_blocker_edges(n: int, k: int) -> int:
    # forest on n-k vertices, all edges at the apex set, and inside it
    return max(n - k - 1, 0) + k * (n - k) + k * (k - 1) // 2


def _has_blocker(rows, core: int, verts: list[int], size: int) -> bool:
    for combo in combinations(verts, size):
        drop = 0
        for v in combo:
            drop |= 1 << v
        if not core_mask(rows, core & ~drop):
            return True
    return False


def census_range(n: int, kmax: int, lo: int, hi: int) -> CountRecord:
    rec = CountRecord(n, kmax)
    full = (1 << n) - 1
    edge_caps = [_max_blocker_edges(n, k) for k in range(kmax + 1)]
    W, B, K = Ex2CClass.WHEEL, Ex2CClass.B_TYPE, Ex2CClass.K_TYPE
    apex, ex = rec.apex, rec.ex
    for mask, rows in iter_mask_rows(n, lo, hi):
        core = core_mask(rows, full)
        if not core:
            rec.forests += 1
            if mask.bit_count() == n - 1:
                rec.trees += 1
            continue
        # smallest blocker (capped at kmax + 1) and packing number (capped likewise)
        m = mask.bit_count()
        verts = [v for v in range(n) if core >> v & 1]
        blocker = kmax + 1
        for size in range(1, kmax + 1):
            if m <= edge_caps[size] and _has_blocker(rows, core, verts, size):
                blocker = size
                break
        if blocker == 1:
            nu = 1  # a cycle exists and one vertex meets them all
        elif kmax == 0:
            nu = 1
        elif not has_two_disjoint_cycles(rows, core):
            nu = 1
        elif kmax >= 2 and len(verts) >= 9:
            nu = len(packing_masks(rows, core, cap=kmax + 1))
        else:
            nu = 2
        for k in range(1, kmax + 1):
            if nu <= k:
                ex[k] += 1
            if blocker <= k:
                apex[k] += 1
        if kmax >= 1 and nu == 1:
            labels = family_labels(rows, core)
            if B in labels:
                rec.b_type += 1
            if K in labels:
                rec.k_type += 1
            if W in labels:
                rec.wheel += 1
                if len(component_masks(rows, full)) == 1:
                    rec.wheel_connected += 1
                    rec.wheel_hubs += wheel_hub_count(rows, full)
    rec.total = hi - lo
    # forests lie in every class
    for k in range(kmax + 1):
        apex[k] += rec.forests
        ex[k] += rec.forests
    return rec


def _census_chunk(args):
    return census_range(*args)


def census(n: int, kmax: int = 1, workers: int = 1, allow_large: bool = False) -> CountRecord:
    """Classify every labelled graph on n vertices.

    Work is split into contiguous mask ranges; the merged record does not
    depend on the split.
    """
    if n < 0 or kmax < 0:
        raise ValueError("n and kmax must be non-negative")
    limit = CENSUS_LIMIT_LARGE if allow_large else CENSUS_LIMIT
    if n > limit:
        raise SizeGuardError("census", n, limit)
    if kmax > KMAX_LIMIT:
        raise SizeGuardError("census kmax", kmax, KMAX_LIMIT)
    total = 1 << (n * (n - 1) // 2)
    workers = max(1, min(workers, total))
    if workers == 1:
        return census_range(n, kmax, 0, total)
    step = -(-total // (workers * 4))
    chunks = [(n, kmax, lo, min(lo + step, total)) for lo in range(0, total, step)]
    rec = CountRecord(n, kmax)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_census_chunk, chunks):
            rec = rec.merge(part)
    return rec


# ---------------------------------------------------------------------------
# brute-force oracle for coloured hairy cycles


def is_hairy_cycle(rows, full: int) -> int:
    """Cycle length if the graph is a hairy cycle, else 0.

    Hairy cycle: connected, 2-core a single cycle, every vertex off the
    cycle of degree 1 or 2.
    """
    core = core_mask(rows, full)
    if not core:
        return 0
    if len(component_masks(rows, full)) != 1:
        return 0
    v = full
    while v:
        low = v & -v
        i = low.bit_length() - 1
        if core & low:
            if (rows[i] & core).bit_count() != 2:
                return 0
        elif rows[i].bit_count() > 2:
            return 0
        v ^= low
    return core.bit_count()


def coloured_hairy_cycle_count(n: int, min_special: int = 0) -> int:
    """Brute-force count of coloured hairy cycles on {1..n}.

    Each cycle vertex is coloured black or white.  With ``min_special`` only
    colourings with at least that many *special* cycle vertices (black, or
    of degree at least 3) are counted.
    """
    if n > CENSUS_LIMIT:
        raise SizeGuardError("coloured_hairy_cycle_count", n, CENSUS_LIMIT)
    full = (1 << n) - 1
    total = 0
    for _, rows in iter_mask_rows(n):
        length = is_hairy_cycle(rows, full)
        if not length:
            continue
        if min_special == 0:
            total += 1 << length
            continue
        core = core_mask(rows, full)
        hairy = sum(1 for i in range(n) if core >> i & 1 and rows[i].bit_count() >= 3)
        plain = length - hairy
        # hairy vertices are special in either colour; choose the black plain ones
        total += (1 << hairy) * sum(
            comb(plain, b) for b in range(plain + 1) if hairy + b >= min_special
        )
    return total
