"""Monte Carlo experiments on the apex construction sampler.

Sample i always uses the stream ``SeededRng(seed).split(i)``, and workers
return exact integer tallies that are summed afterwards, so a report depends
only on its parameters (not on the worker count or on scheduling).
"""

from __future__ import annotations

import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .blockers import min_blocker_size
from .coloring import chromatic_number, clique_number, coloring_invariants
from .constants import connectivity_constant
from .graph import all_graphs, core_mask, is_connected
from .samplers import RNG_ID, SeededRng, random_apex_construction

CAVEAT = (
    "samples come from the three-step apex construction (uniform k-set, "
    "uniform graph on it, uniform forest on the rest, uniform bipartite "
    "edges), which is within exponentially small total variation distance "
    "of the uniform model for large n"
)
AVOID_LIMIT = 16


def _num(x: float) -> float:
    """Round estimates to 12 significant digits for stable output."""
    return float(f"{x:.12g}")


@dataclass
class Statistic:
    name: str
    count: int
    samples: int
    target: float | None = None

    @property
    def estimate(self) -> float:
        return self.count / self.samples

    @property
    def stderr(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1 - p) / self.samples)

    def within(self, width: float) -> bool | None:
        """Is the target inside estimate +- width?"""
        if self.target is None:
            return None
        return abs(self.estimate - self.target) <= width

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "count": str(self.count),
            "samples": str(self.samples),
            "estimate": _num(self.estimate),
            "stderr": _num(self.stderr),
        }
        if self.target is not None:
            out["target"] = _num(self.target)
            out["deviation"] = _num(abs(self.estimate - self.target))
            out["within_3se"] = bool(abs(self.estimate - self.target) <= 3 * self.stderr)
        return out


@dataclass
class ExperimentReport:
    experiment: str
    params: dict
    stats: list[Statistic]
    extra: dict = field(default_factory=dict)

    def stat(self, name: str) -> Statistic:
        for s in self.stats:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "version": __version__,
            "rng": RNG_ID,
            "params": {k: (str(v) if isinstance(v, int) else v) for k, v in self.params.items()},
            "caveat": CAVEAT,
            "stats": [s.to_dict() for s in self.stats],
            "extra": self.extra,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def csv_rows(self) -> list[dict]:
        rows = []
        for s in self.stats:
            d = s.to_dict()
            d["experiment"] = self.experiment
            rows.append(d)
        return rows


# ---------------------------------------------------------------------------
# per-sample kernels; each returns a hashable outcome tallied in a Counter


def _connectivity_outcome(n: int, k: int, rng: SeededRng):
    g, _ = random_apex_construction(n, k, rng)
    return is_connected(g)


def _degree_outcome(n: int, k: int, eps: float, rng: SeededRng):
    g, _ = random_apex_construction(n, k, rng)
    threshold = n / math.log(n)
    rows = g.rows
    big = [v for v in range(n) if rows[v].bit_count() > threshold]
    s_mask = 0
    for v in big:
        s_mask |= 1 << v
    event_i = len(big) == k and not core_mask(rows, g.vmask & ~s_mask)
    lo, hi = (0.5 - eps) * n, (0.5 + eps) * n
    event_iii = all(lo <= rows[v].bit_count() <= hi for v in big)
    avoid = -1
    if n <= AVOID_LIMIT and big:
        # smallest blocker leaving out at least one vertex of S_n
        core = core_mask(rows, g.vmask)
        sizes = [min_blocker_size(rows, core, core & ~(1 << v)) for v in big]
        sizes = [s for s in sizes if s is not None]
        avoid = min(sizes) if sizes else -1
    return (len(big), event_i, event_iii, avoid)


def _chi_omega_outcome(n: int, k: int, rng: SeededRng):
    g, rec = random_apex_construction(n, k, rng)
    res = coloring_invariants(g, rec.S)
    return (res.omega, res.chi)


_KERNELS = {
    "connectivity": _connectivity_outcome,
    "degrees": _degree_outcome,
    "chi_omega": _chi_omega_outcome,
}


def _run_block(args) -> Counter:
    kind, params, seed, lo, hi = args
    kernel = _KERNELS[kind]
    base = SeededRng(seed)
    tally: Counter = Counter()
    for i in range(lo, hi):
        tally[kernel(*params, base.split(i))] += 1
    return tally


def _tally(kind: str, params: tuple, samples: int, seed: int, workers: int) -> Counter:
    if samples < 1:
        raise ValueError("samples must be positive")
    workers = max(1, min(workers, samples))
    if workers == 1:
        return _run_block((kind, params, seed, 0, samples))
    step = -(-samples // (workers * 4))
    blocks = [(kind, params, seed, lo, min(lo + step, samples)) for lo in range(0, samples, step)]
    total: Counter = Counter()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_run_block, blocks):
            total.update(part)
    return total


def _check(n: int, k: int) -> None:
    if k < 0 or n <= k:
        raise ValueError("need n > k >= 0")


# ---------------------------------------------------------------------------
# experiments


def experiment_connectivity(n: int, k: int, samples: int, seed: int = 0, workers: int = 1) -> ExperimentReport:
    """Fraction of connected samples against exp(-T(1/(2^k e)))."""
    _check(n, k)
    tally = _tally("connectivity", (n, k), samples, seed, workers)
    target = float(connectivity_constant(k))
    stat = Statistic("connected", tally[True], samples, target)
    params = {"n": n, "k": k, "samples": samples, "seed": seed, "workers": workers}
    return ExperimentReport("connectivity", params, [stat])


def experiment_degrees(
    n: int, k: int, samples: int, seed: int = 0, eps: float = 0.05, workers: int = 1
) -> ExperimentReport:
    """Vertices of degree above n/ln n: how often they are exactly k and form
    a blocker (event i), and how often all their degrees lie within eps*n of
    n/2 (event iii).  At n <= 16 also records the smallest blocker that
    misses some vertex of that set."""
    _check(n, k)
    if n < 3:
        raise ValueError("degree threshold n/ln n needs n >= 3")
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    tally = _tally("degrees", (n, k, eps), samples, seed, workers)
    ev_i = sum(c for (_, a, _, _), c in tally.items() if a)
    ev_iii = sum(c for (_, _, b, _), c in tally.items() if b)
    empty = sum(c for (size, _, _, _), c in tally.items() if size == 0)
    sizes = Counter()
    for (size, _, _, _), c in tally.items():
        sizes[size] += c
    stats = [
        Statistic("event_i", ev_i, samples),
        Statistic("event_iii", ev_iii, samples),
        Statistic("standout_empty", empty, samples),
    ]
    extra = {
        "threshold": _num(n / math.log(n)),
        "standout_sizes": {str(s): str(c) for s, c in sorted(sizes.items())},
    }
    if n <= AVOID_LIMIT:
        avoid = [a for (_, _, _, a), c in tally.items() if a >= 0]
        extra["min_avoiding_blocker"] = str(min(avoid)) if avoid else None
    params = {"n": n, "k": k, "samples": samples, "seed": seed, "eps": eps, "workers": workers}
    return ExperimentReport("degrees", params, stats, extra)


def reference_chi_omega(k: int) -> dict[tuple[int, int], Fraction]:
    """Exact law of (omega(R) + 2, chi(R) + 2) for R uniform on graphs with k
    labelled vertices."""
    if not 1 <= k <= 4:
        raise ValueError("reference distribution is enumerated for 1 <= k <= 4")
    counts: Counter = Counter()
    for g in all_graphs(k):
        counts[(clique_number(g) + 2, chromatic_number(g) + 2)] += 1
    total = 2 ** (k * (k - 1) // 2)
    return {key: Fraction(c, total) for key, c in sorted(counts.items())}


def experiment_chi_omega(n: int, k: int, samples: int, seed: int = 0, workers: int = 1) -> ExperimentReport:
    """Joint law of (omega, chi) on samples against the shifted law on
    uniform k-vertex graphs."""
    _check(n, k)
    if not 1 <= k <= 4:
        raise ValueError("experiment_chi_omega needs 1 <= k <= 4")
    tally = _tally("chi_omega", (n, k), samples, seed, workers)
    ref = reference_chi_omega(k)
    stats = []
    for i in range(1, k + 3):
        for j in range(i, k + 3):
            key = (i, j)
            if key not in ref and key not in tally:
                continue
            target = float(ref.get(key, 0))
            stats.append(Statistic(f"omega={i},chi={j}", tally.get(key, 0), samples, target))
    extra = {
        "reference": {f"omega={i},chi={j}": str(p) for (i, j), p in ref.items()},
        "max_chi": str(max(chi for _, chi in tally)),
    }
    params = {"n": n, "k": k, "samples": samples, "seed": seed, "workers": workers}
    return ExperimentReport("chi_omega", params, stats, extra)
