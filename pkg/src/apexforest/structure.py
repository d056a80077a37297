"""Recognition of graphs with no two disjoint cycles.

A graph has no two disjoint cycles exactly when it is an apex forest, or its
2-core is a subdivision of one of three multigraph families: wheels whose
spokes may be multiplied, K_{3,t} with extra edges inside the 3-side, or K5.
Classification suppresses the 2-core to its topological core and matches
those families directly, so each family check is a few degree tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Sequence

from .blockers import has_two_disjoint_cycles
from .errors import SizeGuardError
from .graph import LabeledGraph, Multigraph, core_mask, iter_bits, suppress_mask


class Ex2CClass(str, Enum):
    APEX_FOREST = "APEX_FOREST"
    WHEEL = "WHEEL"
    B_TYPE = "B_TYPE"
    K_TYPE = "K_TYPE"


LABEL_ORDER = tuple(Ex2CClass)
ORACLE_LIMIT = 7


@dataclass(frozen=True)
class Ex2CLabel:
    member: bool
    labels: frozenset
    witness: dict = field(default_factory=dict, hash=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "member": self.member,
            "labels": [c.value for c in LABEL_ORDER if c in self.labels],
            "witness": self.witness,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


# ---------------------------------------------------------------------------
# multigraph pattern tests; ``edges`` maps (u, v), u <= v, to a multiplicity


def _degrees(verts, edges) -> dict[int, int]:
    deg = dict.fromkeys(verts, 0)
    for (u, v), m in edges.items():
        deg[u] += m
        deg[v] += m
    return deg


def _adjacency(verts, edges) -> dict[int, dict[int, int]]:
    adj: dict[int, dict[int, int]] = {v: {} for v in verts}
    for (u, v), m in edges.items():
        adj[u][v] = m
        adj[v][u] = m
    return adj


def _connected(verts, adj) -> bool:
    if not verts:
        return True
    start = next(iter(verts))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(verts)


def is_k5_core(verts, edges, deg) -> bool:
    # five vertices, ten simple edges, all degrees 4: nothing but K5 fits
    return (
        len(verts) == 5
        and len(edges) == 10
        and all(m == 1 and u != v for (u, v), m in edges.items())
        and all(d == 4 for d in deg.values())
    )


def wheel_hubs(verts, edges, adj) -> list[int]:
    """Vertices h such that the core minus h is a simple cycle (the rim) on at
    least three vertices, each rim vertex joined to h by one or more edges."""
    if len(verts) < 4:
        return []
    rim_size = len(verts) - 1
    hubs = []
    for h in sorted(verts):
        nbrs = adj[h]
        if h in nbrs or len(nbrs) != rim_size:
            continue
        ok = True
        for x in verts:
            if x == h:
                continue
            rim = [y for y in adj[x] if y != h]
            if len(rim) != 2 or x in rim or any(adj[x][y] != 1 for y in rim):
                ok = False
                break
        if not ok:
            continue
        # every rim vertex has rim-degree 2; a single cycle iff connected
        rim_verts = [x for x in verts if x != h]
        seen = {rim_verts[0]}
        stack = [rim_verts[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y != h and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) == rim_size:
            hubs.append(h)
    return hubs


def b_type_left(verts, edges, adj, deg) -> tuple[int, ...] | None:
    """A left part L for the K_{3,t}-with-left-edges form, or None.

    A core that is a bare cycle (a single loop vertex) is the degenerate t = 0
    case; otherwise the core must be loopless and connected, every vertex
    outside L must have degree 3 with one edge to each vertex of L, and every
    other edge lies inside L.  Cores on at most three vertices take L = V.
    """
    if len(verts) == 1 and len(edges) == 1:
        (u, v), m = next(iter(edges.items()))
        if u == v and m == 1:
            return tuple(verts)
    if any(u == v for u, v in edges):
        return None
    if not _connected(verts, adj):
        return None
    if len(verts) <= 3:
        return tuple(sorted(verts))
    forced = [v for v in verts if deg[v] != 3]
    if len(forced) > 3:
        return None
    spare = sorted(v for v in verts if deg[v] == 3)
    for extra in combinations(spare, 3 - len(forced)):
        left = set(forced) | set(extra)
        good = True
        for r in verts:
            if r in left:
                continue
            nb = adj[r]
            if len(nb) != 3 or set(nb) != left or any(m != 1 for m in nb.values()):
                good = False
                break
        if good:
            return tuple(sorted(left))
    return None


# ---------------------------------------------------------------------------
# classification


def core_labels(rows: Sequence[int], vmask: int, want_witness: bool = False):
    """Label set (and optional witness) of the graph given by (rows, vmask)."""
    witness: dict = {}
    core = core_mask(rows, vmask)
    if not core:
        if want_witness:
            witness["blocker"] = []
        return {Ex2CClass.APEX_FOREST}, witness
    labels = set()
    for v in iter_bits(core):
        if not core_mask(rows, core & ~(1 << v)):
            labels.add(Ex2CClass.APEX_FOREST)
            if want_witness:
                witness["blocker"] = [v + 1]
            break
    labels |= family_labels(rows, core, witness if want_witness else None)
    return labels, witness


def family_labels(rows: Sequence[int], core: int, witness: dict | None = None) -> set:
    """WHEEL / B_TYPE / K_TYPE labels decided on the topological core of a
    non-empty 2-core mask."""
    labels = set()
    verts, edges = suppress_mask(rows, core)
    deg = _degrees(verts, edges)
    adj = _adjacency(verts, edges)
    if is_k5_core(verts, edges, deg):
        labels.add(Ex2CClass.K_TYPE)
    hubs = wheel_hubs(verts, edges, adj)
    if hubs:
        labels.add(Ex2CClass.WHEEL)
    left = b_type_left(verts, edges, adj, deg)
    if left is not None:
        labels.add(Ex2CClass.B_TYPE)
    if witness is not None:
        witness["core"] = {
            "vertices": sorted(verts),
            "edges": [[u, v, m] for (u, v), m in sorted(edges.items())],
        }
        if hubs:
            witness["hubs"] = hubs
        if left is not None:
            witness["left"] = list(left)
    return labels


def wheel_hub_count(rows: Sequence[int], vmask: int) -> int:
    """Number of valid hubs of the core's wheel form (0 if not a wheel)."""
    core = core_mask(rows, vmask)
    if not core:
        return 0
    verts, edges = suppress_mask(rows, core)
    return len(wheel_hubs(verts, edges, _adjacency(verts, edges)))


def classify_ex2c(g: LabeledGraph) -> Ex2CLabel:
    labels, witness = core_labels(g.rows, g.vmask, want_witness=True)
    return Ex2CLabel(bool(labels), frozenset(labels), witness)


def core_multigraph_labels(m: Multigraph) -> set:
    """Family labels of a topological core given directly as a multigraph."""
    deg = _degrees(m.vertices, m.edges)
    adj = _adjacency(m.vertices, m.edges)
    out = set()
    if is_k5_core(m.vertices, m.edges, deg):
        out.add(Ex2CClass.K_TYPE)
    if wheel_hubs(m.vertices, m.edges, adj):
        out.add(Ex2CClass.WHEEL)
    if b_type_left(m.vertices, m.edges, adj, deg) is not None:
        out.add(Ex2CClass.B_TYPE)
    return out


@dataclass
class OracleReport:
    n: int
    graphs: int
    agree: int
    mismatches: list[int]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "graphs": self.graphs,
            "agree": self.agree,
            "mismatches": self.mismatches,
        }


def ex2c_oracle_check(n: int, lo: int = 0, hi: int | None = None) -> OracleReport:
    """Compare classifier membership with exact cycle packing on every graph
    with n vertices (or the census mask range [lo, hi))."""
    from .enumeration import iter_mask_rows

    if n > ORACLE_LIMIT:
        raise SizeGuardError("ex2c_oracle_check", n, ORACLE_LIMIT)
    total = 1 << (n * (n - 1) // 2)
    hi = total if hi is None else hi
    full = (1 << n) - 1
    agree = 0
    bad = []
    for mask, rows in iter_mask_rows(n, lo, hi):
        member = bool(core_labels(rows, full)[0])
        exact = not has_two_disjoint_cycles(rows, core_mask(rows, full))
        if member == exact:
            agree += 1
        else:
            bad.append(mask)
    return OracleReport(n, hi - lo, agree, bad)
