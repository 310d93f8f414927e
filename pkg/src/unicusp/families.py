"""The one-block and two-block curve families and their closed-form results.

One block: ``S = {0, alpha, ..., alpha+ell-1, alpha+ell+m, ->}``.
Two blocks: ``S = {0, alpha, alpha+m+1, ..., alpha+m+ell-1, alpha+m+ell+1, ->}``.

Coefficient lists are 0-based in Python but the docstrings use the 1-based
names ``a_1, a_2, ...``; ``a_0 = 1`` throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .curves import ParamCurve, validate
from .errors import (
    CertificateFailure,
    InvalidBlockParams,
    NearlyNormalOutOfTemplate,
    UnicuspError,
    UnsupportedFamily,
)
from .exactalg import Poly, RatFunc, series_expand
from .semigroups import NumericalSemigroup, eta
from .sheaves import PencilCertificate, bpf_alpha_pencil, certify, free_pencil_is_linear, free_pencil_search, make_sheaf

T = Poly.t()
ZERO = Fraction(0)


def _coeffs(a: Sequence) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in a)


class _Indexed:
    """1-based access ``A[k] = a_k`` with ``a_0 = 1`` and zero outside the list."""

    def __init__(self, a: Sequence[Fraction]):
        self.a = a

    def __getitem__(self, k: int) -> Fraction:
        if k == 0:
            return Fraction(1)
        if 1 <= k <= len(self.a):
            return self.a[k - 1]
        return ZERO


def inverse_coeffs(F0: Poly, n: int) -> list[Fraction]:
    """``d_0, ..., d_{n-1}`` with ``1/F_0 = sum d_k t^k``."""
    return list(series_expand(Poly([1]), F0, n).coeffs)


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OneBlockParams:
    alpha: int
    ell: int
    m: int
    a: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "a", _coeffs(self.a) if self.a else (ZERO,) * (self.ell * self.m))

    @property
    def beta(self) -> int:
        return self.alpha + self.ell + self.m

    def semigroup(self) -> NumericalSemigroup:
        members = [0] + list(range(self.alpha, self.alpha + self.ell))
        return NumericalSemigroup.from_members(members, self.beta)

    def validate(self) -> None:
        al, l, m = self.alpha, self.ell, self.m
        if al < 2 or l < 1 or m < 1:
            raise InvalidBlockParams(f"need alpha >= 2, ell >= 1, m >= 1; got ({al}, {l}, {m})")
        if al < l + m:
            # alpha + alpha would be a gap just below the conductor
            raise InvalidBlockParams(f"need alpha >= ell + m for a semigroup; got ({al}, {l}, {m})")
        if len(self.a) != l * m:
            raise InvalidBlockParams(f"expected {l * m} coefficients, got {len(self.a)}")

    def to_json(self) -> dict:
        return {"family": "one_block", "alpha": self.alpha, "ell": self.ell, "m": self.m,
                "a": [_fmt(x) for x in self.a]}


@dataclass(frozen=True)
class TwoBlockParams:
    alpha: int
    ell: int
    m: int
    a: tuple = field(default=())
    branch: int = 1

    def __post_init__(self):
        object.__setattr__(self, "a", _coeffs(self.a) if self.a else (ZERO,) * (self.u + self.v))

    @property
    def u(self) -> int:
        return max(self.ell, self.m + 1)

    @property
    def v(self) -> int:
        return min(self.ell - 1, self.m)

    @property
    def n(self) -> int:
        return self.ell + self.m

    @property
    def beta(self) -> int:
        return self.alpha + self.m + self.ell + 1

    def semigroup_members(self) -> list[int]:
        al, l, m = self.alpha, self.ell, self.m
        return [0, al] + list(range(al + m + 1, al + m + l))

    def semigroup(self) -> NumericalSemigroup:
        return NumericalSemigroup.from_members(self.semigroup_members(), self.beta)

    def validate(self) -> None:
        al, l, m = self.alpha, self.ell, self.m
        if al < 2 or l < 2 or m < 1:
            raise InvalidBlockParams(f"need alpha >= 2, ell >= 2, m >= 1; got ({al}, {l}, {m})")
        if self.branch not in (1, 2):
            raise InvalidBlockParams(f"branch must be 1 or 2, got {self.branch}")
        if len(self.a) != self.u + self.v:
            raise InvalidBlockParams(f"expected {self.u + self.v} coefficients, got {len(self.a)}")
        try:
            S = self.semigroup()
        except UnicuspError as exc:
            raise InvalidBlockParams(f"({al}, {l}, {m}) does not give a semigroup: {exc}") from None
        if S.conductor != self.beta or S.multiplicity != al:
            raise InvalidBlockParams(f"({al}, {l}, {m}) does not give the expected conductor")

    def to_json(self) -> dict:
        return {"family": "two_block", "alpha": self.alpha, "ell": self.ell, "m": self.m,
                "a": [_fmt(x) for x in self.a], "branch": self.branch}


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def params_from_json(data: dict):
    try:
        fam = data["family"]
        args = (int(data["alpha"]), int(data["ell"]), int(data["m"]), tuple(Fraction(str(x)) for x in data.get("a", ())))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidBlockParams(f"malformed family JSON: {exc}") from None
    if fam == "one_block":
        p = OneBlockParams(*args)
    elif fam == "two_block":
        p = TwoBlockParams(*args, branch=int(data.get("branch", 1)))
    else:
        raise InvalidBlockParams(f"unknown family {fam!r}")
    p.validate()
    return p


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def _fix_infinity(polys: list[Poly], insert_below: bool) -> list[Poly]:
    """Make the two largest degrees consecutive so the point at infinity is smooth."""
    degs = sorted({p.degree for p in polys}, reverse=True)
    if len(degs) >= 2 and degs[0] - degs[1] > 1:
        extra = degs[0] - 1 if insert_below else degs[0] + 1
        polys = polys + [Poly.monomial(extra)]
    return sorted(polys, key=lambda p: (p.valuation, p.degree))


def one_block_coordinates(p: OneBlockParams) -> list[Poly]:
    al, l, m = p.alpha, p.ell, p.m
    A = _Indexed(p.a)
    beta = p.beta
    F0 = Poly([1] + [A[k] for k in range(1, l + m)])
    coords = [F0]
    for i in range(al, al + l - 1):
        Fi = Poly.monomial(i)
        for j in range(1, m):
            Fi = Fi + Poly.monomial(al + l + j - 1, A[l + (i - al + 1) * (m - 1) + j])
        coords.append(Fi)
    coords.append(Poly.monomial(al + l - 1))
    tail = list(range(beta, 2 * al))
    if l <= m:
        tail += list(range(2 * al + 2 * l - 1, beta + al))
    rest = [Poly.monomial(e) for e in sorted(set(tail))]
    return [coords[0]] + _fix_infinity(coords[1:] + rest, insert_below=l <= m)


def _window_fallback(coords: list[Poly], S: NumericalSemigroup, alpha: int) -> list[Poly]:
    """The coordinates with values in S below the conductor, plus every monomial
    from the conductor for alpha steps."""
    beta = S.conductor
    keep = [q for q in coords if q.valuation < beta and q.valuation in S]
    return keep + [Poly.monomial(e) for e in range(beta, beta + alpha) if all(q != Poly.monomial(e) for q in keep)]


def _build(coords: list[Poly], p) -> ParamCurve:
    curve = validate(coords)
    if curve.semigroup != p.semigroup():
        # the tail rule does not reach every value above the conductor here
        curve = validate(_window_fallback(coords, p.semigroup(), p.alpha))
    return curve


def build_one_block(p: OneBlockParams) -> ParamCurve:
    p.validate()
    curve = _build(one_block_coordinates(p), p)
    if curve.semigroup != p.semigroup():
        raise InvalidBlockParams(f"built curve has semigroup {curve.semigroup}, expected {p.semigroup()}")
    return curve


def two_block_F0_Falpha(p: TwoBlockParams) -> tuple[Poly, Poly]:
    al, u, v, n = p.alpha, p.u, p.v, p.n
    A = _Indexed(p.a)
    if p.branch == 1:
        F0 = Poly([1] + [A[i] for i in range(1, u + 1)])
        Fa = Poly.monomial(al) + sum((Poly.monomial(al + i, A[u + i]) for i in range(1, v + 1)), Poly())
        return F0, Fa
    F0 = Poly([1] + [A[i] for i in range(1, u)]) + Poly.monomial(n, A[u])
    d = inverse_coeffs(F0, v + 1)
    last = A[v] + sum(A[j] * d[v - j] - d[j] * A[n - j] for j in range(1, v))
    Fa = Poly.monomial(al) + sum((Poly.monomial(al + i, A[u + i]) for i in range(1, v)), Poly())
    Fa = Fa + Poly.monomial(al + v, last)
    return F0, Fa


def two_block_coordinates(p: TwoBlockParams) -> list[Poly]:
    al, l, m, n, beta = p.alpha, p.ell, p.m, p.n, p.beta
    F0, Fa = two_block_F0_Falpha(p)
    exps = set(range(al + m + 1, beta - 1))
    exps |= set(range(beta, 2 * al + m + 1))
    if l <= m + 1:
        exps |= set(range(2 * al + n, 2 * (al + m) + 2))
    exps.discard(2 * al)
    rest = [Poly.monomial(e) for e in sorted(exps)]
    return [F0] + _fix_infinity([Fa] + rest, insert_below=True)


def build_two_block(p: TwoBlockParams) -> ParamCurve:
    p.validate()
    curve = _build(two_block_coordinates(p), p)
    if curve.semigroup != p.semigroup():
        raise InvalidBlockParams(f"built curve has semigroup {curve.semigroup}, expected {p.semigroup()}")
    return curve


def build(p) -> ParamCurve:
    return build_one_block(p) if isinstance(p, OneBlockParams) else build_two_block(p)


# ---------------------------------------------------------------------------
# local normal form coefficients
# ---------------------------------------------------------------------------


def a_to_b(p: OneBlockParams) -> list[list[Fraction]]:
    """``b[i-1][j-1] = b_{i,j}``: the ring element of valuation ``alpha+i-1`` is
    ``t^(alpha+i-1) + sum_j b_{i,j} t^(alpha+ell+j-1)`` modulo the conductor."""
    p.validate()
    l, m = p.ell, p.m
    A = _Indexed(p.a)
    F0 = Poly([1] + [A[k] for k in range(1, l + m)])
    d = inverse_coeffs(F0, l + m + 1)

    def D(k):
        return d[k] if 0 <= k < len(d) else ZERO

    def coef(i, s, idx):
        # coefficients of F_{alpha+i+s-1}; the last coordinate has none
        return A[idx] if i + s <= l - 1 else ZERO

    b = [[ZERO] * m for _ in range(l)]
    for i in range(1, l):
        for j in range(1, m):
            b[i - 1][j - 1] = sum(
                A[s] * (D(l - i + j - s) + sum(D(k) * coef(i, s, l + (i + s) * (m - 1) + j - k) for k in range(j)))
                for s in range(0, l - i + 1)
            )
        b[i - 1][m - 1] = sum(
            A[s] * (D(l + m - i - s) + sum(D(k) * coef(i, s, l + (i + s) * (m - 1) + m - k) for k in range(1, m)))
            for s in range(0, l - i + 1)
        )
    for j in range(1, m + 1):
        b[l - 1][j - 1] = D(j)
    return b


def b_from_curve(curve: ParamCurve, p: OneBlockParams) -> list[list[Fraction]]:
    """The same coefficients read off the reduced ring basis of a built curve."""
    al, l, m = p.alpha, p.ell, p.m
    elems = {q.valuation: q for q in curve.ring.elements()}
    return [[elems[al + i - 1][al + l + j - 1] for j in range(1, m + 1)] for i in range(1, l + 1)]


def _b_unknown_order(l: int, m: int) -> list[int]:
    """1-based indices of a, in the order the b equations determine them."""
    order = list(range(1, m + 1))
    for i in range(l - 1, 0, -1):
        order += [l + i * (m - 1) + j for j in range(1, m)]
        order.append(l + m - i)
    return order


def b_to_a(b: Sequence[Sequence], alpha: int, ell: int, m: int) -> list[Fraction]:
    """Invert :func:`a_to_b`.

    Each ``b`` equation is affine in one new coefficient once the earlier
    ones are known (``b_{ell,j}`` fixes ``a_1..a_m``, then ``b_{i,j}`` for
    ``i = ell-1, ..., 1`` fixes the coefficients of ``F_{alpha+i-1}`` and
    ``a_{ell+m-i}``), so the coefficients are solved for one at a time.
    """
    b = [[Fraction(x) for x in row] for row in b]
    if len(b) != ell or any(len(row) != m for row in b):
        raise InvalidBlockParams(f"expected an {ell} x {m} matrix of b coefficients")
    a = [ZERO] * (ell * m)
    targets = [(ell, j) for j in range(1, m + 1)]
    for i in range(ell - 1, 0, -1):
        targets += [(i, j) for j in range(1, m + 1)]
    for idx, (i, j) in zip(_b_unknown_order(ell, m), targets):
        a[idx - 1] = ZERO
        y0 = a_to_b(OneBlockParams(alpha, ell, m, a))[i - 1][j - 1]
        a[idx - 1] = Fraction(1)
        y1 = a_to_b(OneBlockParams(alpha, ell, m, a))[i - 1][j - 1]
        slope = y1 - y0
        if slope == 0:
            raise UnicuspError(f"b_{{{i},{j}}} does not determine a_{idx}")
        a[idx - 1] = (b[i - 1][j - 1] - y0) / slope
    return a


# ---------------------------------------------------------------------------
# closed-form canonical models
# ---------------------------------------------------------------------------


def closed_form_canonical(p) -> list[Poly]:
    if isinstance(p, TwoBlockParams):
        return _closed_two_block(p)
    p.validate()
    al, l, m = p.alpha, p.ell, p.m
    A = _Indexed(p.a)
    if m == 1:
        h0 = Poly([1] + [A[i] for i in range(1, l + 1)])
        return [h0] + [Poly.monomial(i) for i in range(l + 1, al + l)]
    if l == 1:
        h0 = Poly([1] + [A[i] for i in range(1, m + 1)])
        hs = [sum((Poly.monomial(i + j, A[j]) for j in range(0, m - i + 1)), Poly()) for i in range(1, m)]
        return [h0] + hs + [Poly.monomial(i) for i in range(m + 1, al + m)]
    if m == 2:
        F0 = Poly([1] + [A[k] for k in range(1, l + 2)])
        d = inverse_coeffs(F0, l + 3)

        def bb(i):  # b_{2i-1}
            return -sum(A[j] * (d[l - i - j + 1] + (A[l + i + j + 1] if l + i + j + 1 <= l * m else ZERO))
                        for j in range(0, l - i + 1))

        h1 = Poly.monomial(1) + sum((Poly.monomial(i + 1, bb(l - i + 1)) for i in range(1, l + 1)), Poly())
        coords = one_block_coordinates(p)
        Fs = {q.valuation: q for q in coords[1:]}
        hs = []
        for i in range(l + 2, al + l + 1):
            if al <= i <= al + l - 2:
                hs.append(Fs[i])
            else:
                hs.append(Poly.monomial(i))
        return [F0, h1] + hs
    raise UnsupportedFamily(f"no closed form for ell = {l}, m = {m}")


def _closed_two_block(p: TwoBlockParams) -> list[Poly]:
    p.validate()
    al, l, n, v, beta = p.alpha, p.ell, p.n, p.v, p.beta
    F0, Fa = two_block_F0_Falpha(p)
    c = [F0[i] for i in range(n + 1)]
    f = [Fa[al + j] for j in range(v + 1)]
    e = [Fraction(1)] + [ZERO] * n
    for i in range(1, n + 1):
        e[i] = c[i] - sum(f[j] * e[i - j] for j in range(1, v + 1) if i - j >= 0)
    coords = [F0]
    for i in list(range(l, n)) + list(range(n + 1, beta - 1)):
        if i == al:
            coords.append(Fa)
        elif i < n:
            coords.append(Poly.monomial(i) + sum((Poly.monomial(i + j, e[j]) for j in range(1, n - i + 1)), Poly()))
        else:
            coords.append(Poly.monomial(i))
    return coords


# ---------------------------------------------------------------------------
# gonality
# ---------------------------------------------------------------------------


@dataclass
class Classification:
    d_b: int
    d_f: int
    certificates: dict
    failures: list = field(default_factory=list)
    criterion: str = ""
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "d_b": self.d_b,
            "d_f": self.d_f,
            "criterion": self.criterion,
            "notes": list(self.notes),
            "certificates": {k: v.to_json() for k, v in self.certificates.items()},
            "failures": [{"certificate": k, "check": f.check, "observed": _plain(f.observed),
                          "expected": _plain(f.expected)} for k, f in self.failures],
        }


def _plain(x):
    return x if isinstance(x, (int, bool, str)) or x is None else str(x)


def _certify_into(result: Classification, name: str, curve, sheaf, claim) -> None:
    try:
        result.certificates[name] = certify(curve, sheaf, claim)
    except CertificateFailure as f:
        result.failures.append((name, f))


def m2_criterion(p: OneBlockParams) -> bool:
    """``a_{ell+i} = 0`` for ``2 <= i <= ell``."""
    A = _Indexed(p.a)
    return all(A[p.ell + i] == 0 for i in range(2, p.ell + 1))


def _require_non_gorenstein(curve: ParamCurve) -> None:
    S = curve.semigroup
    if S.multiplicity == S.conductor:
        raise NearlyNormalOutOfTemplate("multiplicity equals conductor")
    if eta(S) == 0:
        raise UnsupportedFamily(f"{S.explicit()} is symmetric; the classification covers non-Gorenstein cusps")


def classify_one_block(p: OneBlockParams, curve: ParamCurve | None = None) -> Classification:
    if p.ell == 0:
        raise NearlyNormalOutOfTemplate("ell = 0 gives a nearly normal semigroup")
    if p.ell >= 2 and p.m >= 3:
        raise UnsupportedFamily(f"ell = {p.ell}, m = {p.m}: gonality is only classified for m = 1, ell = 1 or m = 2")
    curve = curve or build_one_block(p)
    _require_non_gorenstein(curve)
    if p.m == 1 or p.ell == 1:
        d_b, why = 3, "m = 1" if p.m == 1 else "ell = 1"
    elif m2_criterion(p):
        d_b, why = 3, "m = 2 and a_{ell+i} = 0 for 2 <= i <= ell"
    else:
        d_b, why = 4, "m = 2 and some a_{ell+i} != 0 with 2 <= i <= ell"
    result = Classification(d_b, p.alpha, {}, criterion=why)
    _certify_into(result, "base_point", curve, make_sheaf([RatFunc(1), RatFunc(T)]), (d_b, True))
    _certify_into(result, "base_point_free", curve, bpf_alpha_pencil(p.alpha, p.ell, p.m, p.a), (p.alpha, False))
    return result


def trigonal_two_block_sheaf(curve: ParamCurve):
    """``O<1, t^2/(1 + c t)>`` with ``c`` chosen to keep ``alpha + 3`` out of D."""
    al = curve.alpha
    elems = {q.valuation: q for q in curve.ring.elements()}
    u_a, u_b = elems[al], elems[al + 2]
    c = u_a[al + 1] - u_b[al + 3]
    return make_sheaf([RatFunc(1), RatFunc(Poly.monomial(2), Poly([1, c]))])


def classify_two_block(p: TwoBlockParams, curve: ParamCurve | None = None) -> Classification:
    curve = curve or build_two_block(p)
    _require_non_gorenstein(curve)
    return classify_two_block_curve(curve, p.m == 1 and p.ell == 2)


def base_point_sheaf(curve: ParamCurve, trigonal_two_block: bool = False):
    """``O<1, t>``, or the two-block trigonal pencil when asked for."""
    if trigonal_two_block:
        return trigonal_two_block_sheaf(curve)
    return make_sheaf([RatFunc(1), RatFunc(T)])


def classify_free_pencils(curve: ParamCurve, result: Classification) -> None:
    """Certify a base point free pencil of degree alpha, or the least degree found.

    Sets ``result.d_f``.  When no pencil of degree alpha exists and the
    search conditions are affine, the failure is a proof and is recorded in
    the notes; otherwise a construction failure is recorded.
    """
    al = curve.alpha
    result.d_f = al
    free = free_pencil_search(curve)
    if free is not None:
        _certify_into(result, "base_point_free", curve, free, (al, False))
        return
    if not free_pencil_is_linear(curve):
        result.failures.append(("base_point_free", CertificateFailure("construction", None, al)))
        return
    result.notes.append(f"no base point free pencil of degree {al}: the conditions on h are inconsistent")
    for d in range(al + 1, curve.conductor - al):
        free = free_pencil_search(curve, d)
        if free is not None:
            result.d_f = d
            if d > al + 1:
                result.notes.append(f"degrees {al + 1}..{d - 1} were not excluded")
            _certify_into(result, "base_point_free", curve, free, (d, False))
            return
    result.failures.append(("base_point_free", CertificateFailure("construction", None, al)))


def classify_two_block_curve(curve: ParamCurve, trigonal: bool) -> Classification:
    al = curve.alpha
    if trigonal:
        result = Classification(3, al, {}, criterion="S = {0, alpha, alpha+2, alpha+4, ->}")
    else:
        result = Classification(4, al, {}, criterion="two blocks, not of the form {0, alpha, alpha+2, alpha+4, ->}")
    _certify_into(result, "base_point", curve, base_point_sheaf(curve, trigonal), (result.d_b, True))
    classify_free_pencils(curve, result)
    return result


def classify(p) -> Classification:
    if isinstance(p, OneBlockParams):
        return classify_one_block(p)
    return classify_two_block(p)
