"""The local ring at the cusp ``t = 0`` and finitely generated modules over it.

Everything is computed inside ``k[[t]]`` modulo a power of ``t``.  The ring
contains ``t^beta k[[t]]`` (the conductor), so a module containing a unit
multiple of the ring also contains a full monomial tail and truncated
computations are exact once the tail is put in explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ClosureDiverges, PoleAtCusp
from .exactalg import Poly, RatFunc, TruncSeries, ValuedSubspace
from .semigroups import NumericalSemigroup

# doubling stops here when hunting for the conductor
MAX_CLOSURE_ORDER = 256


@dataclass(frozen=True)
class CuspRing:
    """``O_P`` modulo its conductor.

    ``basis`` has order ``beta``: one element per member of S below the
    conductor, each a polynomial of degree < beta.  Adding the monomials
    ``t^beta, t^(beta+1), ...`` recovers the ring at any truncation.
    """

    conductor: int
    basis: ValuedSubspace
    semigroup: NumericalSemigroup
    ratios: tuple = field(default=(), compare=False)

    @property
    def beta(self) -> int:
        return self.conductor

    def default_order(self) -> int:
        return max(3 * self.conductor, 1)

    def elements(self) -> list[Poly]:
        return [s.to_poly() for s in self.basis.basis]

    def basis_at(self, order: int) -> ValuedSubspace:
        """The ring modulo ``t^order`` (``order >= beta``)."""
        return _with_tail(self.elements(), [RatFunc(1)], self.conductor, order)


def _closure(ratios: Sequence[RatFunc], order: int) -> ValuedSubspace:
    gens = [r.series(order) for r in ratios]
    space = ValuedSubspace(order)
    one = TruncSeries.monomial(0, order)
    space._insert(list(one.coeffs))
    pending = [one]
    while pending:
        e = pending.pop()
        for x in gens:
            prod = e * x
            if space._insert(list(prod.coeffs)):
                pending.append(prod)
    return space


def cusp_ring_from_ratios(ratios: Sequence[RatFunc]) -> CuspRing:
    """Algebra generated by the given functions (all regular and vanishing at 0)."""
    vals = [r.valuation for r in ratios if not r.is_zero()]
    if not vals or min(vals) <= 0:
        raise ClosureDiverges("generators must vanish at t = 0")
    alpha = min(vals)
    order = max(4 * alpha, 8)
    while True:
        space = _closure(ratios, order)
        values = set(space.value_set)
        # conductor = start of the final run of consecutive values
        c = order
        while c > 0 and (c - 1) in values:
            c -= 1
        if order - c >= alpha and math.gcd(*values) == 1:
            break
        if order >= MAX_CLOSURE_ORDER:
            raise ClosureDiverges(
                f"value set does not become cofinite below t^{order}; gcd = {math.gcd(*values)}"
            )
        order = min(2 * order, MAX_CLOSURE_ORDER)
    S = NumericalSemigroup.from_members([v for v in values if v < c], c)
    beta = S.conductor
    chopped = ValuedSubspace(beta).extended(
        [TruncSeries(space.element(v).coeffs[:beta], beta) for v in space.value_set if v < beta]
    ) if beta > 0 else ValuedSubspace(0)
    return CuspRing(beta, chopped, S, tuple(ratios))


def cusp_ring(curve) -> CuspRing:
    """Local ring at the cusp of a parametrized curve (anything with ``coords``)."""
    coords = curve.coords if hasattr(curve, "coords") else curve
    f0 = coords[0]
    ratios = [RatFunc(f, f0) for f in coords[1:]]
    return cusp_ring_from_ratios([r for r in ratios if not r.is_zero()])


# ---------------------------------------------------------------------------
# modules
# ---------------------------------------------------------------------------


def _with_tail(ring_elems: Sequence[Poly], gens: Sequence[RatFunc], beta: int, order: int) -> ValuedSubspace:
    vmin = min(g.valuation for g in gens)
    tail_from = beta + vmin
    if order < tail_from:
        raise ValueError(f"truncation {order} is below the module's tail t^{tail_from}")
    space = ValuedSubspace(order)
    for k in range(tail_from, order):
        space._insert(list(TruncSeries.monomial(k, order).coeffs))
    gser = [g.series(order) for g in gens]
    for b in ring_elems:
        bs = TruncSeries.from_poly(b, order)
        for gs in gser:
            space._insert(list((bs * gs).coeffs))
    return space


@dataclass(frozen=True)
class LocalModule:
    ring: CuspRing
    generators: tuple
    span: ValuedSubspace

    @property
    def order(self) -> int:
        return self.span.order

    @property
    def min_valuation(self) -> int:
        return min(g.valuation for g in self.generators)


def _check_gens(gens) -> list[RatFunc]:
    out = [g if isinstance(g, RatFunc) else RatFunc(g) for g in gens]
    out = [g for g in out if not g.is_zero()]
    if not out:
        raise ValueError("a module needs at least one nonzero generator")
    for g in out:
        if g.valuation < 0:
            raise PoleAtCusp(f"generator {g} has a pole at the cusp")
    return out


def module_span(ring: CuspRing, gens, order: int | None = None) -> LocalModule:
    gens = _check_gens(gens)
    vmin = min(g.valuation for g in gens)
    if order is None:
        order = max(ring.default_order(), ring.conductor + vmin + 1)
    span = _with_tail(ring.elements(), gens, ring.conductor, order)
    return LocalModule(ring, tuple(gens), span)


def d_set(module: LocalModule) -> list[int]:
    S = module.ring.semigroup
    return [v for v in module.span.value_set if v not in S]


def local_degree(module: LocalModule) -> int:
    """``dim F/O`` for a module containing the ring."""
    return len(d_set(module))


def contains(module: LocalModule, x) -> bool:
    x = x if isinstance(x, RatFunc) else RatFunc(x)
    if x.is_zero():
        return True
    if x.valuation < 0:
        raise PoleAtCusp(f"{x} has a pole at the cusp")
    return module.span.contains(x.series(module.order))


def maximal_ideal_times(module: LocalModule) -> ValuedSubspace:
    """``m_P F`` at the module's truncation."""
    ring, order = module.ring, module.order
    gser = [g.series(order) for g in module.generators]
    space = ValuedSubspace(order)
    for k in range(ring.conductor + module.min_valuation, order):
        space._insert(list(TruncSeries.monomial(k, order).coeffs))
    for b in ring.elements():
        if b.valuation == 0:
            continue
        bs = TruncSeries.from_poly(b, order)
        for gs in gser:
            space._insert(list((bs * gs).coeffs))
    return space


def minimal_generator_count(module: LocalModule) -> int:
    return module.span.dim - maximal_ideal_times(module).dim


def is_free(module: LocalModule) -> bool:
    return minimal_generator_count(module) == 1
