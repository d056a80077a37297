"""Exact truncated power series over the rationals.

Coefficients are held in exponential scaling: a series of order N stores
integers ``num[0..N]`` and one positive integer ``den`` with

    a_n = num[n] / (den * n!).

Labelled counting series then have small denominators, and a product is a
binomial convolution of integers.  Every operation keeps the order of the
result at most the order of its inputs; asking for a coefficient past it
raises ``TruncationError``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd
from typing import Iterable, Sequence

from .errors import TruncationError

Number = int | Fraction


@lru_cache(maxsize=None)
def _binomial_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _binomial_row(n - 1)
    return (1,) + tuple(prev[i] + prev[i + 1] for i in range(n - 1)) + (1,)


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    return factorial(n)


class RationalSeries:
    """Power series a_0 + a_1 z + ... + a_N z^N with exact rational coefficients."""

    __slots__ = ("order", "num", "den")

    def __init__(self, num: Sequence[int], den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if not num:
            raise ValueError("a series needs at least the constant coefficient")
        num = [int(x) for x in num]
        if den < 0:
            num = [-x for x in num]
            den = -den
        g = gcd(den, *num)
        if g > 1:
            num = [x // g for x in num]
            den //= g
        self.order = len(num) - 1
        self.num = tuple(num)
        self.den = den

    # -- construction --------------------------------------------------------

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[Number], order: int | None = None) -> RationalSeries:
        """Ordinary coefficients a_0, a_1, ...; padded with zeros up to ``order``."""
        vals = [Fraction(c) for c in coeffs]
        if order is not None:
            if len(vals) > order + 1:
                vals = vals[: order + 1]
            vals += [Fraction(0)] * (order + 1 - len(vals))
        return cls.from_egf([v * _factorial(n) for n, v in enumerate(vals)])

    @classmethod
    def from_egf(cls, values: Iterable[Number]) -> RationalSeries:
        """Exponentially scaled coefficients n! a_n."""
        vals = [Fraction(v) for v in values]
        den = 1
        for v in vals:
            den = den * v.denominator // gcd(den, v.denominator)
        return cls([v.numerator * (den // v.denominator) for v in vals], den)

    @classmethod
    def constant(cls, c: Number, order: int) -> RationalSeries:
        return cls.from_coefficients([c], order)

    @classmethod
    def variable(cls, order: int) -> RationalSeries:
        """The series z (order >= 1 keeps it non-zero)."""
        return cls.from_coefficients([0, 1], order)

    # -- access --------------------------------------------------------------

    def _check(self, n: int) -> None:
        if n < 0:
            raise IndexError("negative coefficient index")
        if n > self.order:
            raise TruncationError(f"coefficient {n} beyond truncation order {self.order}")

    def coeff(self, n: int) -> Fraction:
        """[z^n] of the series."""
        self._check(n)
        return Fraction(self.num[n], self.den * _factorial(n))

    def egf(self, n: int) -> Fraction:
        """n! [z^n], the labelled count when the series is exponential."""
        self._check(n)
        return Fraction(self.num[n], self.den)

    def coefficients(self) -> list[Fraction]:
        return [self.coeff(n) for n in range(self.order + 1)]

    def __getitem__(self, n: int) -> Fraction:
        return self.coeff(n)

    def __len__(self) -> int:
        return self.order + 1

    def __repr__(self) -> str:
        shown = ", ".join(str(c) for c in self.coefficients()[:6])
        more = ", ..." if self.order >= 6 else ""
        return f"RationalSeries([{shown}{more}], order={self.order})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalSeries):
            return NotImplemented
        return self.order == other.order and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def truncate(self, order: int) -> RationalSeries:
        if order > self.order:
            raise TruncationError(f"cannot extend order {self.order} to {order}")
        return RationalSeries(self.num[: order + 1], self.den)

    def evaluate(self, z, ctx=None):
        """Sum of the truncated series at a real point, in mpmath precision."""
        import mpmath

        ctx = ctx or mpmath.mp
        z = ctx.mpf(z)
        total = ctx.mpf(0)
        power = ctx.mpf(1)
        for n, a in enumerate(self.num):
            if a:
                total += ctx.mpf(a) / (self.den * _factorial(n)) * power
            power *= z
        return total

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> RationalSeries:
        if isinstance(other, RationalSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other) -> RationalSeries:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = min(self.order, other.order)
        d = self.den * other.den // gcd(self.den, other.den)
        fa, fb = d // self.den, d // other.den
        return RationalSeries(
            [self.num[i] * fa + other.num[i] * fb for i in range(n + 1)], d
        )

    __radd__ = __add__

    def __neg__(self) -> RationalSeries:
        return RationalSeries([-x for x in self.num], self.den)

    def __sub__(self, other) -> RationalSeries:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> RationalSeries:
        return (-self) + other

    def scale(self, c: Number) -> RationalSeries:
        c = Fraction(c)
        return RationalSeries([x * c.numerator for x in self.num], self.den * c.denominator)

    def __mul__(self, other) -> RationalSeries:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, RationalSeries):
            return NotImplemented
        n = min(self.order, other.order)
        a, b = self.num, other.num
        out = []
        for k in range(n + 1):
            row = _binomial_row(k)
            s = 0
            for i in range(k + 1):
                ai = a[i]
                if ai:
                    bj = b[k - i]
                    if bj:
                        s += row[i] * ai * bj
            out.append(s)
        return RationalSeries(out, self.den * other.den)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> RationalSeries:
        if k < 0:
            return self.reciprocal() ** (-k)
        result = RationalSeries.constant(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other) -> RationalSeries:
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        if not isinstance(other, RationalSeries):
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> RationalSeries:
        return self.reciprocal() * other

    # -- calculus ------------------------------------------------------------

    def derivative(self) -> RationalSeries:
        """Formal derivative; the order drops by one (a shift in EGF scaling)."""
        if self.order == 0:
            return RationalSeries([0], 1)
        return RationalSeries(self.num[1:], self.den)

    def integral(self) -> RationalSeries:
        """Antiderivative with zero constant term; the order grows by one."""
        return RationalSeries((0,) + self.num, self.den)

    def reciprocal(self) -> RationalSeries:
        """1 / A, defined when a_0 != 0."""
        a, d = self.num, self.den
        a0 = a[0]
        if a0 == 0:
            raise ZeroDivisionError("reciprocal of a series with zero constant term")
        n = self.order
        # beta[k] = (k! [z^k] 1/A) * a0^(k+1), an integer
        beta = [d]
        powers = [1]
        for _ in range(n):
            powers.append(powers[-1] * a0)
        for k in range(1, n + 1):
            row = _binomial_row(k)
            s = 0
            for i in range(1, k + 1):
                if a[i]:
                    s += row[i] * a[i] * beta[k - i] * powers[i - 1]
            beta.append(-s)
        top = powers[n] * a0
        return RationalSeries([beta[k] * powers[n - k] for k in range(n + 1)], top)

    def exp(self) -> RationalSeries:
        """exp(A) for a_0 = 0, from E' = A'E."""
        if self.num[0] != 0:
            raise ValueError("exp needs a zero constant term")
        a, d = self.num, self.den
        n = self.order
        # eps[k] = (k! [z^k] E) * d^k
        eps = [1]
        powers = [1]
        for _ in range(n):
            powers.append(powers[-1] * d)
        for k in range(n):
            row = _binomial_row(k)
            s = 0
            for i in range(k + 1):
                if a[i + 1]:
                    s += row[i] * a[i + 1] * eps[k - i] * powers[i]
            eps.append(s)
        return RationalSeries([eps[k] * powers[n - k] for k in range(n + 1)], powers[n])

    def log(self) -> RationalSeries:
        """log(A) for a_0 = 1 (any other positive constant has an irrational log)."""
        if self.num[0] != self.den:
            if self.num[0] * self.den <= 0:
                raise ValueError("log needs a positive constant term")
            raise ValueError("log is only exact for constant term 1")
        if self.order == 0:
            return RationalSeries([0], 1)
        return (self.derivative() * self.truncate(self.order - 1).reciprocal()).integral()

    def compose(self, inner: RationalSeries) -> RationalSeries:
        """F(G) for G with zero constant term, by Horner's rule.

        Cost is cubic in the order; the wheel series below avoid it.
        """
        if inner.num[0] != 0:
            raise ValueError("composition needs an inner series with zero constant term")
        n = min(self.order, inner.order)
        inner = inner.truncate(n)
        acc = RationalSeries.constant(self.coeff(n), n)
        for k in range(n - 1, -1, -1):
            acc = acc * inner + self.coeff(k)
        return acc


# ---------------------------------------------------------------------------
# named series


class SeriesToolkit:
    """The tree function and the hairy-cycle building blocks to one order."""

    def __init__(self, order: int):
        if order < 0:
            raise ValueError("order must be non-negative")
        self.order = order
        N = order
        self.one = RationalSeries.constant(1, N)
        self.z = RationalSeries.from_egf([0, 1] + [0] * (N - 1)) if N >= 1 else RationalSeries([0])
        # R: n^(n-1) rooted labelled trees
        self.R = RationalSeries.from_egf([0] + [k ** (k - 1) for k in range(1, N + 1)])
        self.T = self.R - self.R * self.R * Fraction(1, 2)
        self.S = self.spider(self.z)

    def geometric(self, u: RationalSeries) -> RationalSeries:
        """1 / (1 - u)."""
        return (self.one.truncate(u.order) - u).reciprocal()

    def spider(self, u: RationalSeries) -> RationalSeries:
        """2u exp(u / (1 - u)): a two-coloured root with a set of hanging paths."""
        return u * 2 * (u * self.geometric(u)).exp()

    def C(self, u: RationalSeries) -> RationalSeries:
        """-1/2 log(1 - u) - u/2 - u^2/4: undirected cycles of length >= 3."""
        one = self.one.truncate(u.order)
        return (one - u).log() * Fraction(-1, 2) - u * Fraction(1, 2) - u * u * Fraction(1, 4)

    def C1(self, u: RationalSeries) -> RationalSeries:
        """C'(u) = 1/(2(1-u)) - 1/2 - u/2, from the closed form."""
        return self.geometric(u) * Fraction(1, 2) - Fraction(1, 2) - u * Fraction(1, 2)

    def C2(self, u: RationalSeries) -> RationalSeries:
        """C''(u) = 1/(2(1-u)^2) - 1/2."""
        g = self.geometric(u)
        return g * g * Fraction(1, 2) - Fraction(1, 2)

    def hairy_plus(self, u: RationalSeries) -> RationalSeries:
        """Coloured hairy cycles with vertex variable u: C(spider(u))."""
        return self.C(self.spider(u))

    def hairy(self, u: RationalSeries) -> RationalSeries:
        """Coloured hairy cycles with at least three special cycle vertices.

        A cycle vertex is plain exactly when its spider is a bare white root,
        contributing u.  Expanding C(u + w (spider - u)) in the marker w and
        dropping the w^0, w^1, w^2 terms leaves the wanted cycles.
        """
        s = self.spider(u)
        d = s - u
        return self.C(s) - self.C(u) - self.C1(u) * d - self.C2(u) * d * d * Fraction(1, 2)


def series_toolkit(order: int) -> SeriesToolkit:
    return SeriesToolkit(order)


class WheelSeries:
    """Exponential series of hairy cycles and of the wheel classes."""

    def __init__(self, order: int):
        if order < 1:
            raise ValueError("order must be at least 1")
        kit = SeriesToolkit(order)
        self.order = order
        self.hairy_plus = kit.hairy_plus(kit.z)
        self.hairy = kit.hairy(kit.z)
        R = kit.R
        # hub z on top of a hairy cycle, then a rooted tree at every vertex
        self.wheel_plus = R * kit.hairy_plus(R)
        self.wheel = R * kit.hairy(R)

    def as_dict(self) -> dict[str, RationalSeries]:
        return {
            "hairy_plus": self.hairy_plus,
            "hairy": self.hairy,
            "wheel_plus": self.wheel_plus,
            "wheel": self.wheel,
        }


def wheel_series(order: int) -> WheelSeries:
    return WheelSeries(order)
