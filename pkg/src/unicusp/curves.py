"""Rational curves ``(F_0 : ... : F_N)`` with a single cusp at ``t = 0``.

The canonical model is computed as the space of polynomials of degree at
most ``beta - 2`` whose product with every element of the local ring has no
``t^(beta-1)`` term.  That space is the set of global differentials seen
through the residue pairing, so its dimension must be the genus.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    BadBaseCoordinate,
    DuplicateValuation,
    InternalDimensionMismatch,
    NotUnicuspidalSemigroup,
    UnicuspError,
)
from .exactalg import Poly, TruncSeries, ValuedSubspace, format_rational, nullspace, rref, to_rational
from .localring import CuspRing, cusp_ring
from .semigroups import NumericalSemigroup, kset


@dataclass(frozen=True)
class ParamCurve:
    coords: tuple
    ring: CuspRing = field(compare=False, repr=False)

    @property
    def semigroup(self) -> NumericalSemigroup:
        return self.ring.semigroup

    @property
    def conductor(self) -> int:
        return self.ring.conductor

    beta = conductor

    @property
    def alpha(self) -> int:
        return self.semigroup.multiplicity

    @property
    def genus(self) -> int:
        return self.semigroup.genus

    def to_json(self) -> dict:
        return {"coords": [p.to_json() for p in self.coords]}

    def __str__(self):
        return "(" + " : ".join(str(p) for p in self.coords) + ")"


def _as_poly(p) -> Poly:
    if isinstance(p, Poly):
        return p
    if isinstance(p, (list, tuple)):
        return Poly(to_rational(c) for c in p)
    return Poly([p])


def validate(coords: Iterable) -> ParamCurve:
    polys = [_as_poly(p) for p in coords]
    if len(polys) < 2:
        raise UnicuspError("a curve needs at least two coordinates")
    f0 = polys[0]
    if f0[0] == 0:
        raise BadBaseCoordinate(f"F_0 = {f0} vanishes at t = 0")
    polys = [p * (1 / f0[0]) for p in polys]
    vals = []
    for i, p in enumerate(polys[1:], start=1):
        if not p:
            raise DuplicateValuation(f"coordinate {i} is identically zero")
        v = p.valuation
        if v == 0:
            raise DuplicateValuation(f"coordinate {i} does not vanish at t = 0, same valuation as F_0")
        vals.append(v)
    if len(set(vals)) != len(vals):
        raise DuplicateValuation(f"coordinate valuations repeat: {vals}")
    if math.gcd(*vals) != 1:
        raise NotUnicuspidalSemigroup(f"coordinate valuations {vals} have gcd {math.gcd(*vals)}")
    return ParamCurve(tuple(polys), cusp_ring(polys))


def curve_from_json(data: dict) -> ParamCurve:
    try:
        coords = [Poly.from_json(c) for c in data["coords"]]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise UnicuspError(f"malformed curve JSON: {exc}") from None
    return validate(coords)


def genus(curve: ParamCurve) -> int:
    return curve.genus


# ---------------------------------------------------------------------------
# canonical model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalModel:
    coords: tuple
    valuations: tuple

    @property
    def genus(self) -> int:
        return len(self.coords)

    def to_json(self) -> dict:
        return {"coords": [p.to_json() for p in self.coords], "valuations": list(self.valuations)}

    def __str__(self):
        return "(" + " : ".join(str(p) for p in self.coords) + ")"


def echelon_polys(polys: Sequence[Poly]) -> list[Poly]:
    """Reduced valuation-echelon basis of the span of ``polys``."""
    polys = [p for p in polys if p]
    if not polys:
        return []
    n = max(p.degree for p in polys) + 1
    space = ValuedSubspace(n).extended(TruncSeries.from_poly(p, n) for p in polys)
    return [s.to_poly() for s in space.basis]


def canonical_model(curve: ParamCurve) -> CanonicalModel:
    beta = curve.conductor
    g = curve.genus
    if g < 1:
        raise UnicuspError("the canonical model needs genus at least 1")
    n = beta - 1  # unknowns c_0 .. c_{beta-2}
    rows = []
    for u in curve.ring.elements():
        rows.append([u[beta - 1 - k] for k in range(n)])
    kernel = nullspace(rows, n)
    if len(kernel) != g:
        raise InternalDimensionMismatch(f"residue kernel has dimension {len(kernel)}, genus is {g}")
    coords = echelon_polys([Poly(v) for v in kernel])
    vals = tuple(p.valuation for p in coords)
    if vals != kset(curve.semigroup).below_conductor:
        raise InternalDimensionMismatch(f"model valuations {vals} differ from K {kset(curve.semigroup).below_conductor}")
    return CanonicalModel(tuple(coords), vals)


def models_equivalent(A: Sequence[Poly], B: Sequence[Poly]) -> bool:
    """Whether two coordinate lists span the same space of polynomials."""
    A = [_as_poly(p) for p in A]
    B = [_as_poly(p) for p in B]
    if len(A) != len(B):
        return False
    ea, eb = echelon_polys(A), echelon_polys(B)
    return len(ea) == len(A) and ea == eb


def change_of_coordinates(source: Sequence[Poly], target: Sequence[Poly]) -> list[list[Fraction]] | None:
    """Matrix ``M`` with ``target[i] = sum_j M[i][j] * source[j]``, if it exists."""
    source = [_as_poly(p) for p in source]
    target = [_as_poly(p) for p in target]
    n = max([p.degree for p in source + target if p] + [0]) + 1
    k = len(source)
    # columns = source polynomials, rows = coefficients; augmented by each target
    out = []
    for q in target:
        aug = [[p[d] for p in source] + [q[d]] for d in range(n)]
        red, piv = rref(aug, k + 1)
        if k in piv:
            return None
        x = [Fraction(0)] * k
        for row, p in zip(red, piv):
            x[p] = row[k]
        out.append(x)
    return out


# ---------------------------------------------------------------------------
# point samples
# ---------------------------------------------------------------------------


def sample_points(coords: Sequence, t_values: Iterable) -> list[tuple]:
    """Points of the curve in the chart ``x0 = 1``.

    Where ``F_0`` vanishes the projective point is scaled by its first
    nonzero coordinate instead.
    """
    polys = [_as_poly(p) for p in (coords.coords if hasattr(coords, "coords") else coords)]
    out = []
    for t in t_values:
        t = to_rational(t)
        vals = [p(t) for p in polys]
        pivot = next((v for v in vals if v), None)
        if pivot is None:
            raise UnicuspError(f"all coordinates vanish at t = {t}")
        out.append(tuple(v / pivot for v in vals))
    return out


def points_csv(coords: Sequence, t_values: Sequence) -> str:
    t_values = [to_rational(t) for t in t_values]
    pts = sample_points(coords, t_values)
    width = len(pts[0]) if pts else len(coords.coords if hasattr(coords, "coords") else coords)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t"] + [f"x{i}" for i in range(width)])
    for t, p in zip(t_values, pts):
        w.writerow([format_rational(t)] + [format_rational(x) for x in p])
    return buf.getvalue()
