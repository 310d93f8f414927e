"""Numerical semigroups and the invariants attached to a cusp's value semigroup."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

from .errors import InvalidSemigroup, NotCofinite


class NumericalSemigroup:
    """A cofinite submonoid of the naturals, stored up to its conductor.

    ``membership[i]`` tells whether ``i`` is a member for ``0 <= i < conductor``;
    everything from the conductor on is a member.
    """

    __slots__ = ("conductor", "membership", "generators", "__dict__")

    def __init__(self, conductor: int, membership: Iterable[bool], generators=None):
        table = tuple(bool(b) for b in membership)
        if len(table) != conductor:
            raise InvalidSemigroup(f"membership table has {len(table)} entries, expected {conductor}")
        if conductor > 0:
            if not table[0]:
                raise InvalidSemigroup("0 must be a member")
            if table[-1]:
                raise InvalidSemigroup(f"conductor {conductor} is not minimal: {conductor - 1} is a member")
        members = [i for i, b in enumerate(table) if b]
        for i in members:
            for j in members:
                if i + j >= conductor:
                    break
                if not table[i + j]:
                    raise InvalidSemigroup(f"not closed under addition: {i} + {j} = {i + j} missing")
        self.conductor = conductor
        self.membership = table
        self.generators = tuple(generators) if generators is not None else None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_generators(cls, gens: Iterable[int]) -> "NumericalSemigroup":
        gens = sorted(set(int(g) for g in gens))
        if not gens or gens[0] <= 0:
            raise InvalidSemigroup("generators must be a nonempty list of positive integers")
        if math.gcd(*gens) != 1:
            raise NotCofinite(f"gcd of generators {gens} is {math.gcd(*gens)}")
        a = gens[0]
        member = [True]
        run = 1
        n = 0
        # once a consecutive members appear, every larger integer is a member
        while run < a:
            n += 1
            ok = any(n - g >= 0 and member[n - g] for g in gens)
            member.append(ok)
            run = run + 1 if ok else 0
        conductor = n - a + 1
        S = cls._from_table(member[:conductor])
        S.generators = tuple(S.minimal_generators())
        return S

    @classmethod
    def from_members(cls, members: Iterable[int], conductor: int) -> "NumericalSemigroup":
        """Semigroup whose members below ``conductor`` are ``members`` (the rest implied).

        The stated conductor may be larger than the true one; it is shrunk.
        """
        ms = set(int(x) for x in members)
        if any(x < 0 for x in ms):
            raise InvalidSemigroup("members must be natural numbers")
        table = [i in ms or i >= conductor for i in range(conductor)]
        if conductor > 0 and not table[0]:
            raise InvalidSemigroup("0 must be a member")
        return cls._from_table(table)

    @classmethod
    def _from_table(cls, table: list[bool]) -> "NumericalSemigroup":
        c = len(table)
        while c > 0 and table[c - 1]:
            c -= 1
        return cls(c, table[:c])

    # -- queries --------------------------------------------------------------

    def __contains__(self, n: int) -> bool:
        if n < 0:
            return False
        return n >= self.conductor or self.membership[n]

    @cached_property
    def small_members(self) -> tuple[int, ...]:
        """Members strictly below the conductor (``S°``)."""
        return tuple(i for i, b in enumerate(self.membership) if b)

    @cached_property
    def gaps(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.membership) if not b)

    @property
    def genus(self) -> int:
        return len(self.gaps)

    @property
    def multiplicity(self) -> int:
        for i in range(1, self.conductor):
            if self.membership[i]:
                return i
        return max(self.conductor, 1)

    alpha = multiplicity

    @property
    def beta(self) -> int:
        return self.conductor

    @property
    def frobenius(self) -> int:
        return self.conductor - 1

    def minimal_generators(self) -> list[int]:
        bound = self.conductor + self.multiplicity
        pos = [x for x in range(1, bound) if x in self]
        sums = {x + y for x in pos for y in pos}
        return [x for x in pos if x not in sums]

    def explicit(self) -> str:
        """Text form such as ``{0,4,5,8,->}``."""
        return "{" + ",".join(str(x) for x in self.small_members + (self.conductor,)) + ",->}"

    def __eq__(self, other):
        if not isinstance(other, NumericalSemigroup):
            return NotImplemented
        return self.conductor == other.conductor and self.membership == other.membership

    def __hash__(self):
        return hash((self.conductor, self.membership))

    def __repr__(self):
        return f"NumericalSemigroup({self.explicit()})"


def from_generators(gens: Iterable[int]) -> NumericalSemigroup:
    return NumericalSemigroup.from_generators(gens)


_EXPLICIT = re.compile(r"^\{(.*)\}$")


def parse_semigroup(text: str) -> NumericalSemigroup:
    """Parse ``"3,7,8"`` (generators) or ``"{0,4,5,8,->}"`` (explicit members)."""
    text = text.strip()
    m = _EXPLICIT.match(text)
    try:
        if m:
            items = [s.strip() for s in m.group(1).split(",") if s.strip()]
            if not items or not (items[-1].endswith("->") or items[-1].endswith("→")):
                raise InvalidSemigroup("explicit form must end with 'c->'")
            last = items[-1].rstrip(">").rstrip("-").rstrip("→").strip()
            if last:
                cond = int(last)
                members = [int(x) for x in items[:-1]] + [cond]
            else:
                members = [int(x) for x in items[:-1]]
                cond = members[-1]
            return NumericalSemigroup.from_members(members, cond)
        gens = [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise InvalidSemigroup(f"cannot parse semigroup {text!r}: {exc}") from None
    return NumericalSemigroup.from_generators(gens)


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------


class Invariants(NamedTuple):
    alpha: int
    beta: int
    genus: int
    gaps: tuple
    gap_sum: int
    weight: int


def invariants(S: NumericalSemigroup) -> Invariants:
    gaps = S.gaps
    g = len(gaps)
    gap_sum = sum(gaps)
    return Invariants(S.multiplicity, S.conductor, g, gaps, gap_sum, gap_sum - g * (g + 1) // 2)


@dataclass(frozen=True)
class KSet:
    """The canonical value set, stored through its part below the conductor."""

    conductor: int
    below_conductor: tuple

    def __contains__(self, a: int) -> bool:
        return a >= self.conductor or a in self.below_conductor


def kset(S: NumericalSemigroup) -> KSet:
    beta = S.conductor
    ko = tuple(a for a in range(beta) if (beta - 1 - a) not in S)
    return KSet(beta, ko)


def eta(S: NumericalSemigroup) -> int:
    return sum(1 for a in kset(S).below_conductor if a not in S)


def is_symmetric(S: NumericalSemigroup) -> bool:
    return eta(S) == 0


is_gorenstein = is_symmetric


def _sumset(A: Iterable[int], B: Iterable[int], bound: int) -> set[int]:
    B = list(B)
    return {a + b for a in A for b in B if a + b < bound}


def nfold_below(S: NumericalSemigroup, n: int) -> set[int]:
    """Sums of ``n`` elements of K that fall below the conductor."""
    ko = kset(S).below_conductor
    beta = S.conductor
    acc = set(ko)
    for _ in range(n - 1):
        acc = _sumset(acc, ko, beta)
    return acc


def _closure_below(values: Iterable[int], bound: int) -> set[int]:
    vals = [v for v in values if 0 < v < bound]
    out = {0}
    frontier = {0}
    while frontier:
        new = {a + v for a in frontier for v in vals if a + v < bound} - out
        out |= new
        frontier = new
    return out


def sigma(S: NumericalSemigroup) -> int:
    beta = S.conductor
    target = _closure_below(kset(S).below_conductor, beta)
    n = 1
    acc = set(kset(S).below_conductor)
    while acc != target:
        acc = _sumset(acc, kset(S).below_conductor, beta)
        n += 1
    return n


def shat(S: NumericalSemigroup) -> tuple[NumericalSemigroup, int]:
    """The semigroup generated by K, and its genus."""
    beta = S.conductor
    members = _closure_below(kset(S).below_conductor, beta)
    H = NumericalSemigroup.from_members(members, beta)
    return H, H.genus


def is_nearly_normal(S: NumericalSemigroup) -> bool:
    """Maximal ideal equal to the conductor, for a non-Gorenstein cusp.

    ``{0, 2, ->}`` also has multiplicity equal to conductor but is symmetric,
    and is not counted.
    """
    return S.multiplicity == S.conductor and S.genus >= 2
