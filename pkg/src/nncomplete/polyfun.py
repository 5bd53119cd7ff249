"""Exact univariate polynomials and rational functions over the rationals.

Used to track how matrix entries and polygon vertices move as a single
parameter t varies.  Provides exact arithmetic, evaluation, rational root
extraction, and Sturm-sequence isolation of irrational real roots.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class Poly:
    """Univariate polynomial with Fraction coefficients, low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial mapped to -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def leading(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __eq__(self, other) -> bool:
        other = _as_poly(other)
        return other is not None and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(
            [
                (self.coeffs[i] if i < len(self.coeffs) else 0)
                + (other.coeffs[i] if i < len(other.coeffs) else 0)
                for i in range(n)
            ]
        )

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Poly":
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(len(self.coeffs) - len(other.coeffs) + 1, 1)
        rem = list(self.coeffs)
        d = other.degree
        lead = other.leading()
        while len(rem) - 1 >= d and any(c != 0 for c in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            k = len(rem) - 1 - d
            f = rem[-1] / lead
            q[k] = f
            for i, c in enumerate(other.coeffs):
                rem[k + i] -= f * c
            rem.pop()
        return Poly(q), Poly(rem)

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.leading()
        return Poly([c / lead for c in self.coeffs])

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def __repr__(self) -> str:
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*t")
            else:
                terms.append(f"{c}*t^{i}")
        return "Poly(" + " + ".join(terms) + ")"

    # -- roots --------------------------------------------------------

    def rational_roots(self) -> list[Fraction]:
        """All rational roots, each listed once, sorted."""
        if self.is_zero():
            raise ValueError("zero polynomial has every root")
        cs = list(self.coeffs)
        roots = set()
        # factor out t^k
        k = 0
        while cs[0] == 0:
            cs.pop(0)
            k += 1
        if k:
            roots.add(Fraction(0))
        if len(cs) <= 1:
            return sorted(roots)
        # clear denominators to integer coefficients
        denom_lcm = 1
        for c in cs:
            denom_lcm = denom_lcm * c.denominator // gcd(denom_lcm, c.denominator)
        ics = [int(c * denom_lcm) for c in cs]
        g = 0
        for c in ics:
            g = gcd(g, c)
        ics = [c // g for c in ics]
        for p in _divisors(abs(ics[0])):
            for q in _divisors(abs(ics[-1])):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if self(cand) == 0:
                        roots.add(cand)
        return sorted(roots)

    def sturm_sequence(self) -> list["Poly"]:
        seq = [self, self.derivative()]
        while not seq[-1].is_zero():
            seq.append(-(seq[-2] % seq[-1]))
        seq.pop()
        return seq

    def count_roots(self, a: Fraction, b: Fraction) -> int:
        """Number of distinct real roots in (a, b], a < b, via Sturm."""
        sq = self.squarefree()
        seq = sq.sturm_sequence()

        def variations(x):
            signs = [p(x) for p in seq]
            signs = [s for s in signs if s != 0]
            return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))

        return variations(Fraction(a)) - variations(Fraction(b))

    def squarefree(self) -> "Poly":
        if self.degree < 1:
            return self
        g = self.gcd(self.derivative())
        if g.degree < 1:
            return self
        return self // g

    def root_bound(self) -> Fraction:
        """Cauchy bound: all real roots lie in (-B, B)."""
        if self.degree < 1:
            return Fraction(1)
        lead = abs(self.leading())
        return 1 + max(abs(c) for c in self.coeffs[:-1]) / lead

    def isolate_real_roots(self) -> list[tuple[Fraction, Fraction]]:
        """Disjoint rational intervals (a, b], one per distinct real root.

        A rational root r yields the degenerate interval (r, r].
        """
        if self.is_zero():
            raise ValueError("zero polynomial has every root")
        if self.degree < 1:
            return []
        sq = self.squarefree()
        out = []
        for r in sq.rational_roots():
            out.append((r, r))
        lin = Poly([1])
        for r in sq.rational_roots():
            lin = lin * Poly([-r, 1])
        rational = set(sq.rational_roots())
        rest = sq // lin
        if rest.degree >= 1:
            b = rest.root_bound()
            stack = [(-b, b)]
            while stack:
                lo, hi = stack.pop()
                n = rest.count_roots(lo, hi)
                if n == 0:
                    continue
                # keep bisecting until each bracket holds one root and no
                # rational root of the original polynomial (disjointness)
                if n == 1 and not any(lo < r <= hi for r in rational):
                    out.append((lo, hi))
                    continue
                mid = (lo + hi) / 2
                if rest(mid) == 0:
                    # only irrational roots remain, so mid cannot be a root
                    raise AssertionError("unexpected rational root")
                stack.append((lo, mid))
                stack.append((mid, hi))
        return sorted(out)


def _as_poly(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly([x])
    return None


def _divisors(n: int) -> list[int]:
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


class RationalFunction:
    """Quotient of two polynomials, kept in lowest terms with monic
    denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=Poly([1])):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = num.gcd(den)
        if g.degree >= 1:
            num = num // g
            den = den // g
        lead = den.leading()
        if lead != 1:
            num = num * Poly([1 / lead])
            den = den * Poly([1 / lead])
        self.num = num
        self.den = den

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls(Poly([c]))

    @classmethod
    def t(cls) -> "RationalFunction":
        return cls(Poly.x())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        d = self.den(t)
        if d == 0:
            raise ZeroDivisionError(f"pole at t = {t}")
        return self.num(t) / d

    def defined_at(self, t) -> bool:
        return self.den(t) != 0

    def __eq__(self, other) -> bool:
        other = _as_rf(other)
        return (
            other is not None
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __add__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        if other is None:
            return NotImplemented
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        if other is None:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        if other is None:
            return NotImplemented
        return other / self

    def __repr__(self) -> str:
        if self.den == Poly([1]):
            return f"RationalFunction({self.num!r})"
        return f"RationalFunction({self.num!r} / {self.den!r})"


def _as_rf(x):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Poly):
        return RationalFunction(x)
    if isinstance(x, (int, Fraction)):
        return RationalFunction(Poly([x]))
    return None
