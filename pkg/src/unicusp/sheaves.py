"""Rank one torsion-free sheaves ``O<g_1, ..., g_k>`` on a unicuspidal rational curve.

A sheaf is given by rational functions in ``t``.  Its degree is the sum of
the local lengths ``F_R / O_R``; away from the cusp the curve is smooth and
the lengths are pole orders, which add up to polynomial gcd degrees.  At the
cusp the length is the number of new values ``#D``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import CertificateFailure, NormalFormViolation, UnsupportedFamily
from .exactalg import Poly, RatFunc, nullspace, poly_gcd, poly_gcd_many, poly_lcm, series_expand, solve
from .localring import LocalModule, d_set, is_free, module_span

ONE = Poly([1])


@dataclass(frozen=True)
class FractionalSheaf:
    """Generators after division by a unit of least valuation at the cusp.

    ``generators[0]`` is 1 and every generator is regular at ``t = 0``.  The
    sheaf the user supplied is ``unit`` times this one; degree and ``h0`` do
    not see the difference.
    """

    generators: tuple
    unit: RatFunc
    common_denominator: Poly
    numerators: tuple

    def to_json(self) -> dict:
        return {"gens": [g.to_json() for g in self.generators], "unit": self.unit.to_json()}

    def __str__(self):
        return "O<" + ", ".join(str(g) for g in self.generators) + ">"


def make_sheaf(gens: Sequence) -> FractionalSheaf:
    gs = [g if isinstance(g, RatFunc) else RatFunc(g) for g in gens]
    gs = [g for g in gs if not g.is_zero()]
    if not gs:
        raise ValueError("a sheaf needs a nonzero generator")
    k = min(range(len(gs)), key=lambda i: (gs[i].valuation, i))
    unit = gs[k]
    rest = [g / unit for i, g in enumerate(gs) if i != k]
    normalized = [RatFunc(1)] + [g for g in rest if g != RatFunc(1)]
    H = ONE
    for g in normalized:
        H = poly_lcm(H, g.den)
    nums = tuple(g.num * (H // g.den) for g in normalized)
    return FractionalSheaf(tuple(normalized), unit, H, nums)


def sheaf_from_json(data: dict) -> FractionalSheaf:
    return make_sheaf([RatFunc.from_json(g) for g in data["gens"]])


def pencil(r: int, f: Poly, h: Poly) -> FractionalSheaf:
    """The sheaf ``O<1, t^r f/h>``."""
    if r <= 0:
        raise NormalFormViolation(f"r = {r}: need r > 0")
    if not f or f[0] == 0:
        raise NormalFormViolation("f(0) = 0: need f(0) != 0")
    if not h or h[0] == 0:
        raise NormalFormViolation("h(0) = 0: need h(0) != 0")
    if poly_gcd(f, h).degree > 0:
        raise NormalFormViolation(f"gcd(f, h) = {poly_gcd(f, h)}: need gcd 1")
    return make_sheaf([RatFunc(1), RatFunc(f.shift(r), h)])


# ---------------------------------------------------------------------------
# degree
# ---------------------------------------------------------------------------


def _gcd_all(sheaf: FractionalSheaf) -> Poly:
    return poly_gcd_many([sheaf.common_denominator, *sheaf.numerators])


def infinity_allowance(sheaf: FractionalSheaf) -> int:
    H = sheaf.common_denominator
    return max(0, max(n.degree for n in sheaf.numerators) - H.degree)


def degree_away(sheaf: FractionalSheaf) -> int:
    """Degree over the curve minus the cusp (finite points and the point at infinity)."""
    H = sheaf.common_denominator
    return H.degree - _gcd_all(sheaf).degree + infinity_allowance(sheaf)


def pencil_degree_away(r: int, f: Poly, h: Poly) -> int:
    """Two-generator special case ``deg h + max(0, r + deg f - deg h)``."""
    return h.degree + max(0, r + f.degree - h.degree)


def local_module(sheaf: FractionalSheaf, curve, order: int | None = None) -> LocalModule:
    return module_span(curve.ring, sheaf.generators, order)


def degree(sheaf: FractionalSheaf, curve, order: int | None = None) -> int:
    return degree_away(sheaf) + len(d_set(local_module(sheaf, curve, order)))


# ---------------------------------------------------------------------------
# global sections
# ---------------------------------------------------------------------------


def h0(sheaf: FractionalSheaf, curve, order: int | None = None) -> tuple[int, list[RatFunc]]:
    """Dimension and a basis of the global sections.

    A section is ``M * G / H`` with ``G`` the gcd of the numerators (and
    ``H``), ``M`` a polynomial whose degree is bounded by the pole allowed at
    infinity, subject to lying in the stalk at the cusp.
    """
    module = local_module(sheaf, curve, order)
    H = sheaf.common_denominator
    G = _gcd_all(sheaf)
    dmax = H.degree - G.degree + infinity_allowance(sheaf)
    T = module.order
    base = series_expand(G, H, T)
    cols = []
    for k in range(dmax + 1):
        cols.append(module.span.reduce_vector(base.shift(k).coeffs))
    rows = [[c[i] for c in cols] for i in range(T)]
    kernel = nullspace([r for r in rows if any(r)], dmax + 1)
    basis = []
    for v in kernel:
        M = Poly(v)
        basis.append(RatFunc(M * G, H) * sheaf.unit)
    return len(kernel), basis


def canonical_sheaf(model_coords: Sequence[Poly]) -> FractionalSheaf:
    """The sheaf ``O<p_i / p_0>`` spanned by a canonical model's coordinates."""
    p0 = model_coords[0]
    return make_sheaf([RatFunc(p, p0) for p in model_coords])


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PencilCertificate:
    sheaf: FractionalSheaf
    degree: int
    h0: int
    free_at_cusp: bool
    degree_away: int
    d_set: tuple = field(default=())

    @property
    def has_base_point(self) -> bool:
        return not self.free_at_cusp

    def to_json(self) -> dict:
        return {
            "sheaf": self.sheaf.to_json(),
            "degree": self.degree,
            "degree_away": self.degree_away,
            "d_set": list(self.d_set),
            "h0": self.h0,
            "free_at_cusp": self.free_at_cusp,
        }


def inspect(curve, sheaf: FractionalSheaf, order: int | None = None) -> PencilCertificate:
    """All quantities ``certify`` checks, without checking them."""
    module = local_module(sheaf, curve, order)
    D = tuple(d_set(module))
    away = degree_away(sheaf)
    dim, _ = h0(sheaf, curve, order)
    return PencilCertificate(sheaf, away + len(D), dim, is_free(module), away, D)


def certify(curve, sheaf: FractionalSheaf, claim: tuple[int, bool]) -> PencilCertificate:
    d, needs_base_point = claim
    cert = inspect(curve, sheaf)
    if cert.degree != d:
        raise CertificateFailure("degree", cert.degree, d)
    if cert.h0 != 2:
        raise CertificateFailure("h0", cert.h0, 2)
    if cert.free_at_cusp == bool(needs_base_point):
        raise CertificateFailure("free_at_cusp", cert.free_at_cusp, not needs_base_point)
    return cert


# ---------------------------------------------------------------------------
# base point free pencils of degree alpha
# ---------------------------------------------------------------------------


def bpf_denominator(alpha: int, ell: int, m: int, a: Sequence) -> Poly:
    """The polynomial ``h`` with ``t^alpha / h`` in the local ring, by recursion."""
    if alpha < 2 or ell < 1 or m < 1 or len(a) != ell * m:
        raise UnsupportedFamily(f"expected one-block parameters with {ell * m} coefficients")
    A = [Fraction(1)] + [Fraction(x) for x in a]

    def ax(i):
        return A[i] if 0 <= i < len(A) else Fraction(0)

    top = ell + m - 1
    b = [Fraction(1)] + [Fraction(0)] * top
    for i in range(1, top + 1):
        if i <= ell - 1:
            b[i] = ax(i)
        elif i <= ell + m - 2:
            b[i] = ax(i) - sum(ax(m + j) * b[i - j] for j in range(ell, i + 1))
        else:
            b[i] = ax(i) - sum(ax(j + ell + m - 1) * b[m - j] for j in range(1, m))
    return Poly(b)


def bpf_alpha_pencil(alpha: int, ell: int, m: int, a: Sequence) -> FractionalSheaf:
    h = bpf_denominator(alpha, ell, m, a)
    return make_sheaf([RatFunc(1), RatFunc(Poly.monomial(alpha), h)])


def _free_pencil_setup(curve):
    ring = curve.ring
    alpha, beta = curve.alpha, curve.conductor
    elems = {p.valuation: p for p in ring.elements()}
    extra = [elems[s] for s in sorted(elems) if alpha < s < beta]
    return alpha, beta, elems[alpha], extra


def free_pencil_is_linear(curve) -> bool:
    """Whether the conditions solved by :func:`free_pencil_search` are affine.

    Products of two corrections only reach degree ``2 (s - alpha)`` in ``h``
    for the least value ``s`` above alpha; when that is past ``beta - alpha``
    the affine solve is exhaustive, so a failure proves that no pencil of
    that degree exists.
    """
    alpha, beta, _, extra = _free_pencil_setup(curve)
    if not extra:
        return True
    return 2 * (extra[0].valuation - alpha) >= beta - alpha


def free_pencil_search(curve, degree: int | None = None) -> FractionalSheaf | None:
    """A pencil ``O<1, t^alpha/h>`` with ``t^alpha/h`` in the local ring and ``deg h <= degree``.

    ``degree`` defaults to alpha.  ``h`` is read off from ``t^alpha / u`` for
    a ring element ``u`` of valuation alpha, modulo ``t^(beta-alpha)``.  The
    coefficients of ``h`` above ``degree`` must vanish; ``u`` is corrected by
    ring elements of larger valuation, solving the resulting conditions as an
    affine system and checking the answer exactly.  Returns ``None`` if that
    fails.
    """
    alpha, beta, u0, extra = _free_pencil_setup(curve)
    if alpha >= beta:
        return None
    d = alpha if degree is None else degree
    if d < alpha:
        return None
    n = beta - alpha  # h is determined modulo t^n

    def h_of(u: Poly) -> Poly:
        unit = Poly(u.coeffs[alpha:])  # u / t^alpha
        return series_expand(ONE, unit, n).to_poly()

    def residual(h: Poly) -> list[Fraction]:
        return [h[k] for k in range(d + 1, n)]

    base = h_of(u0)
    r0 = residual(base)
    if any(r0):
        cols = []
        for e in extra:
            r1 = residual(h_of(u0 + e))
            cols.append([x - y for x, y in zip(r1, r0)])
        rows = [[c[i] for c in cols] for i in range(len(r0))]
        sol = solve(rows, [-x for x in r0], len(extra)) if extra else None
        if sol is None:
            return None
        u = u0
        for c, e in zip(sol, extra):
            u = u + e * c
        base = h_of(u)
        if any(residual(base)):
            return None
    h = Poly(base.coeffs[: d + 1])
    return make_sheaf([RatFunc(1), RatFunc(Poly.monomial(alpha), h)])
