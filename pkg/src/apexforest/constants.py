"""High-precision constants: the tree function at a point, limiting
connection probabilities of random apex forests, the apex growth factor,
and the radius of the wheel series.

All evaluation runs in a local mpmath context at ``DPS`` decimal digits;
every root comes back with its residual so callers can certify it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial

import mpmath

DPS = 50
RESIDUAL_TOL = mpmath.mpf("1e-25")


def _ctx():
    ctx = mpmath.mp.clone()
    ctx.dps = DPS
    return ctx


def _root_r(ctx, z):
    """Principal solution of R = z e^R for 0 <= z <= 1/e.

    Newton from R = z climbs monotonically (the map R - z e^R is concave
    and increasing below the root); near z = 1/e the root is double and
    convergence turns linear, so a bisection pass finishes the job if
    Newton stalls.
    """
    if z == 0:
        return ctx.mpf(0)
    tol = ctx.mpf(10) ** (-(ctx.dps - 5))
    r = z
    for _ in range(400):
        ez = z * ctx.exp(r)
        f = r - ez
        if abs(f) < tol:
            return r
        slope = 1 - ez
        if slope <= 0:
            break
        step = f / slope
        r -= step
        if abs(step) < tol:
            return r
    lo, hi = ctx.mpf(0), ctx.mpf(1)
    for _ in range(4 * ctx.prec):
        mid = (lo + hi) / 2
        if mid - z * ctx.exp(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def tree_function_point(z) -> tuple[mpmath.mpf, mpmath.mpf]:
    """(R(z), T(z)) with R = z e^R and T = R - R^2/2, for z in [0, 1/e].

    Inputs within 1e-15 above 1/e (a rounded float 1/e, say) are taken as 1/e.
    """
    ctx = _ctx()
    z = ctx.mpf(z)
    edge = 1 / ctx.e
    if z < 0:
        raise ValueError("tree function needs z >= 0")
    if z > edge:
        if z - edge > ctx.mpf("1e-15"):
            raise ValueError("tree function diverges beyond z = 1/e")
        z = edge
    r = _root_r(ctx, z)
    return +r, r - r * r / 2


def tree_function_residual(z, r) -> mpmath.mpf:
    ctx = _ctx()
    return abs(ctx.mpf(r) - ctx.mpf(z) * ctx.exp(ctx.mpf(r)))


def connectivity_constant(k: int) -> mpmath.mpf:
    """exp(-T(1 / (2^k e))): limiting probability that a random graph with
    a k-vertex blocker is connected."""
    if k < 0:
        raise ValueError("k must be non-negative")
    ctx = _ctx()
    _, t = tree_function_point(1 / (ctx.mpf(2) ** k * ctx.e))
    return ctx.exp(-t)


def apex_constant(k: int) -> mpmath.mpf:
    """1 / (2^C(k+1, 2) e^k k!)."""
    if k < 1:
        raise ValueError("apex_constant needs k >= 1")
    ctx = _ctx()
    return 1 / (ctx.mpf(2) ** comb(k + 1, 2) * ctx.e ** k * factorial(k))


def spider_value(x) -> mpmath.mpf:
    """S(x) = 2x exp(x / (1 - x)) for 0 <= x < 1."""
    ctx = _ctx()
    x = ctx.mpf(x)
    return 2 * x * ctx.exp(x / (1 - x))


@dataclass(frozen=True)
class GfConstants:
    """Radius data of the wheel series: S(x) = 1, R(r) = x, gamma = 1/r, c = x/2."""

    x: mpmath.mpf
    r: mpmath.mpf
    gamma: mpmath.mpf
    c: mpmath.mpf
    residuals: dict = field(default_factory=dict, compare=False)

    def certified(self) -> bool:
        return all(v < RESIDUAL_TOL for v in self.residuals.values())

    def to_dict(self, digits: int = 30) -> dict:
        out = {
            name: mpmath.nstr(getattr(self, name), digits)
            for name in ("x", "r", "gamma", "c")
        }
        out["residuals"] = {k: mpmath.nstr(v, 5) for k, v in self.residuals.items()}
        return out


def wheel_constants() -> GfConstants:
    ctx = _ctx()
    tol = ctx.mpf(10) ** (-(ctx.dps - 5))

    def g(x):
        return 2 * x * ctx.exp(x / (1 - x)) - 1

    def dg(x):
        # d/dx of 2x e^{x/(1-x)} is 2 e^{x/(1-x)} (1 + x/(1-x)^2)
        return 2 * ctx.exp(x / (1 - x)) * (1 + x / (1 - x) ** 2)

    # g is increasing and convex on (0, 1/2) with g(1/2) = e - 1 > 0, so
    # Newton from the right end decreases monotonically to the root
    x = ctx.mpf(1) / 2
    for _ in range(200):
        step = g(x) / dg(x)
        x -= step
        if abs(step) < tol:
            break
    if not (0 < x < ctx.mpf(1) / 2):
        raise ArithmeticError("root of S(x) = 1 left its bracket")
    lo, hi = x * (1 - ctx.mpf("1e-20")), x * (1 + ctx.mpf("1e-20"))
    if not (g(lo) < 0 < g(hi)):
        raise ArithmeticError("root of S(x) = 1 failed its bracket certificate")
    r = x * ctx.exp(-x)
    r_check, _ = tree_function_point(r)
    gamma = 1 / r
    c = x / 2
    if not (ctx.e < gamma < 2 * ctx.e):
        raise ArithmeticError("growth constant outside (e, 2e)")
    residuals = {
        "spider": abs(g(x)),
        "tree": abs(r_check - x),
    }
    return GfConstants(x=x, r=r, gamma=gamma, c=c, residuals=residuals)
