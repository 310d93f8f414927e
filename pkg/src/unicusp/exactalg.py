"""Exact arithmetic substrate.

Rationals are :class:`fractions.Fraction`.  On top of them this module
provides dense univariate polynomials, power series truncated at a fixed
order, valuation-echelon subspaces of such series and a small amount of
row-reduction over the rationals.  Everything is immutable.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DenominatorVanishesAtZero

NEG_INF = float("-inf")

ZERO = Fraction(0)
ONE = Fraction(1)


def to_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def format_rational(x: Fraction) -> str:
    """Canonical text form: ``"p/q"``, or ``"p"`` when the denominator is 1."""
    x = to_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class Poly:
    """Dense polynomial in ``t`` with rational coefficients, ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def _raw(cls, cs: list) -> "Poly":
        while cs and cs[-1] == 0:
            cs.pop()
        p = object.__new__(cls)
        p.coeffs = tuple(cs)
        return p

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def t(cls) -> "Poly":
        return cls.monomial(1)

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    # -- basic attributes ---------------------------------------------------

    @property
    def degree(self):
        """Degree, or ``-inf`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def valuation(self):
        """Order of vanishing at ``t = 0`` (``inf`` for zero)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return math.inf

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return ZERO

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else ZERO

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        return Poly._raw([c / lc for c in self.coeffs])

    def __call__(self, x):
        x = to_rational(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly([other])

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        cs = list(a)
        for i, c in enumerate(b):
            cs[i] += c
        return Poly._raw(cs)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = to_rational(other)
            return Poly._raw([x * c for x in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        cs = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                cs[i + j] += x * y
        return Poly._raw(cs)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers of polynomials are not polynomials")
        result = Poly([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "Poly":
        """Multiply by ``t**k``."""
        if not self.coeffs:
            return self
        return Poly._raw([ZERO] * k + list(self.coeffs))

    def __divmod__(self, other):
        other = self._coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        lc = other.coeffs[-1]
        if len(rem) - 1 < db:
            return Poly(), Poly._raw(rem)
        quot = [ZERO] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] / lc
            quot[k] = c
            if c:
                for j, y in enumerate(other.coeffs):
                    rem[k + j] -= c * y
        return Poly._raw(quot), Poly._raw(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == Poly([other]).coeffs
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    # -- text -----------------------------------------------------------------

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "Poly":
        return cls(to_rational(c) for c in data)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return format_poly(self)


def format_poly(p: Poly, var: str = "t") -> str:
    if not p.coeffs:
        return "0"
    parts = []
    for k, c in enumerate(p.coeffs):
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{format_rational(mag)}*{mono}"
        else:
            body = format_rational(mag)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def poly_xgcd(p: Poly, q: Poly) -> tuple[Poly, Poly, Poly]:
    """Extended Euclid: returns ``(g, s, u)`` with ``s*p + u*q == g`` and ``g`` monic."""
    r0, r1 = p, q
    s0, s1 = Poly([1]), Poly()
    u0, u1 = Poly(), Poly([1])
    while r1:
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        u0, u1 = u1, u0 - quo * u1
    if not r0:
        return r0, s0, u0
    lc = r0.lead()
    return r0 * (1 / lc), s0 * (1 / lc), u0 * (1 / lc)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic greatest common divisor; ``gcd(0, 0) = 0``."""
    while q:
        p, q = q, p % q
    return p.monic()


def poly_gcd_many(polys: Iterable[Poly]) -> Poly:
    g = Poly()
    for p in polys:
        g = poly_gcd(g, p)
        if g.degree == 0:
            break
    return g


def poly_lcm(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return Poly()
    return (p * q // poly_gcd(p, q)).monic()


# ---------------------------------------------------------------------------
# Truncated power series
# ---------------------------------------------------------------------------


class TruncSeries:
    """Power series in ``t`` known modulo ``t**order``."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable, order: int):
        if order < 1:
            raise ValueError("truncation order must be at least 1")
        cs = [to_rational(c) for c in coeffs][:order]
        cs += [ZERO] * (order - len(cs))
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self.order = order

    @classmethod
    def _raw(cls, cs: list, order: int) -> "TruncSeries":
        s = object.__new__(cls)
        s.coeffs = tuple(cs)
        s.order = order
        return s

    @classmethod
    def from_poly(cls, p: Poly, order: int) -> "TruncSeries":
        cs = list(p.coeffs[:order])
        cs += [ZERO] * (order - len(cs))
        return cls._raw(cs, order)

    @classmethod
    def zero(cls, order: int) -> "TruncSeries":
        return cls._raw([ZERO] * order, order)

    @classmethod
    def monomial(cls, k: int, order: int) -> "TruncSeries":
        cs = [ZERO] * order
        if k < order:
            cs[k] = ONE
        return cls._raw(cs, order)

    @property
    def valuation(self) -> int:
        """Least index with a nonzero coefficient; ``order`` means "at least order"."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return self.order

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise ValueError(f"cannot raise truncation order from {self.order} to {order}")
        return TruncSeries._raw(list(self.coeffs[:order]), order)

    def to_poly(self) -> Poly:
        return Poly(self.coeffs)

    def _check(self, other: "TruncSeries"):
        if other.order != self.order:
            raise ValueError(f"truncation orders differ: {self.order} vs {other.order}")

    def __add__(self, other):
        self._check(other)
        return TruncSeries._raw([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __sub__(self, other):
        self._check(other)
        return TruncSeries._raw([a - b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __neg__(self):
        return TruncSeries._raw([-a for a in self.coeffs], self.order)

    def scale(self, c) -> "TruncSeries":
        c = to_rational(c)
        return TruncSeries._raw([a * c for a in self.coeffs], self.order)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        self._check(other)
        return TruncSeries._raw(mul_trunc(self.coeffs, other.coeffs, self.order), self.order)

    __rmul__ = __mul__

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by ``t**k`` (k >= 0), dropping what falls past the order."""
        n = self.order
        return TruncSeries._raw(([ZERO] * k + list(self.coeffs))[:n], n)

    def padded(self, k: int) -> "TruncSeries":
        """Multiply by ``t**k`` and raise the order by ``k`` (no information lost)."""
        return TruncSeries._raw([ZERO] * k + list(self.coeffs), self.order + k)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.order))

    def __repr__(self):
        return f"TruncSeries({format_poly(Poly(self.coeffs))} + O(t^{self.order}))"


def mul_trunc(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> list[Fraction]:
    out = [ZERO] * order
    for i, x in enumerate(a[:order]):
        if not x:
            continue
        lim = order - i
        for j, y in enumerate(b[:lim]):
            if y:
                out[i + j] += x * y
    return out


def series_expand(num: Poly, den: Poly, order: int) -> TruncSeries:
    """First ``order`` coefficients of ``num/den`` by exact long division."""
    d0 = den[0]
    if d0 == 0:
        raise DenominatorVanishesAtZero(f"denominator {den} vanishes at t = 0")
    n = [num[k] for k in range(order)]
    dc = den.coeffs
    out = [ZERO] * order
    inv = 1 / d0
    for k in range(order):
        acc = n[k]
        for j in range(1, min(k, len(dc) - 1) + 1):
            if dc[j]:
                acc -= dc[j] * out[k - j]
        out[k] = acc * inv if acc else ZERO
    return TruncSeries._raw(out, order)


# ---------------------------------------------------------------------------
# Valuation echelon subspaces
# ---------------------------------------------------------------------------


class ValuedSubspace:
    """Subspace of ``k[[t]]/t^order`` in reduced echelon form by valuation.

    Each basis vector is monic at its valuation and has zero coefficient at
    the valuations of the other basis vectors, so the basis is unique.
    """

    __slots__ = ("order", "_rows")

    def __init__(self, order: int, rows: dict | None = None):
        self.order = order
        self._rows: dict[int, list[Fraction]] = dict(rows or {})

    @property
    def basis(self) -> list[TruncSeries]:
        return [TruncSeries._raw(list(self._rows[v]), self.order) for v in sorted(self._rows)]

    @property
    def value_set(self) -> list[int]:
        return sorted(self._rows)

    @property
    def dim(self) -> int:
        return len(self._rows)

    def element(self, v: int) -> TruncSeries:
        return TruncSeries._raw(list(self._rows[v]), self.order)

    def reduce_vector(self, vec: Sequence[Fraction]) -> list[Fraction]:
        out = list(vec)
        for p in sorted(self._rows):
            c = out[p]
            if c:
                row = self._rows[p]
                for k in range(p, self.order):
                    if row[k]:
                        out[k] -= c * row[k]
        return out

    def reduce(self, s: TruncSeries) -> TruncSeries:
        if s.order != self.order:
            s = s.truncate(self.order)
        return TruncSeries._raw(self.reduce_vector(s.coeffs), self.order)

    def contains(self, s: TruncSeries) -> bool:
        return not any(self.reduce(s).coeffs)

    def _insert(self, vec: list[Fraction]) -> bool:
        """Add ``vec`` to the span in place; returns whether the span grew."""
        vec = self.reduce_vector(vec)
        piv = next((i for i, c in enumerate(vec) if c), None)
        if piv is None:
            return False
        inv = 1 / vec[piv]
        vec = [c * inv if c else ZERO for c in vec]
        for p, row in self._rows.items():
            c = row[piv]
            if c:
                for k in range(piv, self.order):
                    if vec[k]:
                        row[k] -= c * vec[k]
        self._rows[piv] = vec
        return True

    def extended(self, spanning: Iterable[TruncSeries]) -> "ValuedSubspace":
        out = ValuedSubspace(self.order, {v: list(r) for v, r in self._rows.items()})
        for s in spanning:
            out._insert(list(_fit(s, self.order).coeffs))
        return out

    def __eq__(self, other):
        if not isinstance(other, ValuedSubspace):
            return NotImplemented
        return self.order == other.order and self._rows == other._rows

    def __repr__(self):
        return f"ValuedSubspace(order={self.order}, values={self.value_set})"


def _fit(s: TruncSeries, order: int) -> TruncSeries:
    if s.order == order:
        return s
    return s.truncate(order)


def echelonize(spanning: Iterable[TruncSeries], order: int) -> ValuedSubspace:
    """Reduced valuation-echelon basis of the span of ``spanning`` mod ``t^order``."""
    return ValuedSubspace(order).extended(spanning)


# ---------------------------------------------------------------------------
# Row reduction over the rationals
# ---------------------------------------------------------------------------


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and their pivot columns."""
    m = [[to_rational(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv if x else ZERO for x in m[r]]
        pivot_row = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y if y else x for x, y in zip(m[i], pivot_row)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : A x = 0}``, one vector per free column (free entry = 1)."""
    red, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int) -> list[Fraction] | None:
    """One solution of ``A x = b`` (free variables set to 0), or ``None``."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [ZERO] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


class RatFunc:
    """A rational function ``num/den`` in lowest terms.

    The lowest nonzero coefficient of the denominator is 1, so a function
    regular at ``t = 0`` has ``den(0) = 1``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly([num])
        den = Poly([1]) if den is None else (den if isinstance(den, Poly) else Poly([den]))
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        lc = den[den.valuation]
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        self.num = num
        self.den = den

    @property
    def valuation(self):
        if not self.num:
            return math.inf
        return self.num.valuation - self.den.valuation

    def is_zero(self) -> bool:
        return not self.num

    def series(self, order: int) -> TruncSeries:
        """Expansion at ``t = 0``; the caller ensures there is no pole there."""
        v = self.valuation
        if v == math.inf:
            return TruncSeries.zero(order)
        if v < 0:
            from .errors import PoleAtCusp

            raise PoleAtCusp(f"{self} has a pole of order {-v} at t = 0")
        a, b = self.num.valuation, self.den.valuation
        n = Poly(self.num.coeffs[a:])
        d = Poly(self.den.coeffs[b:])
        if v >= order:
            return TruncSeries.zero(order)
        return series_expand(n, d, order - v).padded(v)

    def __add__(self, other):
        other = _as_ratfunc(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_ratfunc(other))

    def __rsub__(self, other):
        return _as_ratfunc(other) - self

    def __mul__(self, other):
        other = _as_ratfunc(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfunc(other)
        if not other.num:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_ratfunc(other) / self

    def __eq__(self, other):
        if not isinstance(other, (RatFunc, Poly, int, Fraction)):
            return NotImplemented
        other = _as_ratfunc(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "RatFunc":
        return cls(Poly.from_json(data["num"]), Poly.from_json(data.get("den", ["1"])))

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den == Poly([1]):
            return str(self.num)
        return f"({self.num})/({self.den})"


def _as_ratfunc(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    return RatFunc(x)
