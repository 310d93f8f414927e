"""Hypersurfaces of a fixed degree containing a canonical model.

A degree-n form vanishes on the model exactly when its composition with the
polynomial parametrization is zero, so ``I_n`` is the kernel of a finite
linear map on monomials and needs no truncation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Sequence

from .errors import ConsistencyFailure
from .exactalg import Poly, format_rational, nullspace, rank, rref, to_rational
from .semigroups import eta, shat, sigma

Form = dict  # exponent tuple -> Fraction


def dim_formula(g: int, n: int, eta_: int, g_prime: int) -> int:
    """Dimension of ``I_n`` predicted from the genus and the cusp invariants (for ``n >= sigma``)."""
    return comb(g + n - 1, n) - n * (2 * g - 2 - eta_) - 1 + g_prime


def monomials(nvars: int, n: int) -> list[tuple[int, ...]]:
    """Exponent tuples of degree ``n``, largest first in graded lex order."""
    out = []
    for combo in combinations_with_replacement(range(nvars), n):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def evaluate_form(form: Form, coords: Sequence[Poly]) -> Poly:
    total = Poly()
    for exps, c in form.items():
        term = Poly([c])
        for p, e in zip(coords, exps):
            if e:
                term = term * p ** e
        total = total + term
    return total


@dataclass(frozen=True)
class IdealSlice:
    n: int
    dimension: int
    basis: tuple  # of Form

    def to_json(self) -> dict:
        return {"n": self.n, "dimension": self.dimension, "basis": [form_to_json(f) for f in self.basis]}


def _coords(model) -> list[Poly]:
    return list(model.coords if hasattr(model, "coords") else model)


def in_basis(model, n: int) -> IdealSlice:
    if n < 1:
        raise ValueError("degree must be positive")
    coords = _coords(model)
    mons = monomials(len(coords), n)
    # memoize powers; products are built incrementally from smaller monomials
    cache: dict[tuple, Poly] = {tuple([0] * len(coords)): Poly([1])}

    def value(e: tuple) -> Poly:
        if e in cache:
            return cache[e]
        i = next(k for k, x in enumerate(e) if x)
        prev = list(e)
        prev[i] -= 1
        cache[e] = value(tuple(prev)) * coords[i]
        return cache[e]

    vals = [value(e) for e in mons]
    top = max((v.degree for v in vals if v), default=0) + 1
    rows = [[v[d] for v in vals] for d in range(top)]
    kernel = nullspace([r for r in rows if any(r)], len(mons))
    basis = []
    if kernel:
        red, _ = rref(kernel, len(mons))
        for row in red:
            basis.append({mons[j]: c for j, c in enumerate(row) if c})
    return IdealSlice(n, len(basis), tuple(basis))


def in_span(form: Form, ideal: IdealSlice) -> bool:
    if not form:
        return True
    mons = sorted({e for f in ideal.basis for e in f} | set(form), reverse=True)
    rows = [[f.get(e, Fraction(0)) for e in mons] for f in ideal.basis]
    target = [form.get(e, Fraction(0)) for e in mons]
    return rank(rows + [target], len(mons)) == rank(rows, len(mons)) if rows else False


@dataclass
class ConsistencyRow:
    n: int
    formula: int
    direct: int
    asserted: bool


@dataclass
class ConsistencyReport:
    genus: int
    sigma: int
    eta: int
    g_prime: int
    rows: list

    @property
    def ok(self) -> bool:
        return all(r.formula == r.direct for r in self.rows if r.asserted)

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "sigma": self.sigma,
            "eta": self.eta,
            "g_prime": self.g_prime,
            "rows": [{"n": r.n, "formula": r.formula, "direct": r.direct, "asserted": r.asserted} for r in self.rows],
        }


def check_consistency(curve, n_max: int, n_min: int = 1, model=None, strict: bool = True) -> ConsistencyReport:
    """Compare the dimension formula with the kernel computation for ``n_min <= n <= n_max``.

    Only degrees ``n >= sigma`` are asserted; smaller ones are recorded.
    """
    from .curves import canonical_model

    S = curve.semigroup
    g = S.genus
    model = model or canonical_model(curve)
    e, s, gp = eta(S), sigma(S), shat(S)[1]
    rows = []
    for n in range(max(1, n_min), n_max + 1):
        direct = in_basis(model, n).dimension
        formula = dim_formula(g, n, e, gp)
        asserted = n >= s and e > 0
        rows.append(ConsistencyRow(n, formula, direct, asserted))
        if strict and asserted and formula != direct:
            raise ConsistencyFailure(n, formula, direct)
    return ConsistencyReport(g, s, e, gp, rows)


# ---------------------------------------------------------------------------
# text forms
# ---------------------------------------------------------------------------


def variable_names(nvars: int) -> list[str]:
    if nvars <= 4:
        return ["w", "x", "y", "z"][:nvars]
    return [f"x{i}" for i in range(nvars)]


def format_form(form: Form, names: Sequence[str] | None = None) -> str:
    if not form:
        return "0"
    nvars = len(next(iter(form)))
    names = list(names or variable_names(nvars))
    parts = []
    for exps in sorted(form, reverse=True):
        c = form[exps]
        mon = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e)
        mag = abs(c)
        if mag == 1 and mon:
            body = mon
        else:
            body = format_rational(mag) + ("*" + mon if mon else "")
        parts.append(("- " if c < 0 else "+ ") + body)
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[1:]


_TERM = re.compile(r"\s*([+-]?)\s*([^+-]+)")


def parse_form(text: str, names: Sequence[str], params: dict | None = None) -> Form:
    """Parse a form such as ``"b*y^2 + x*y - z*w"``.

    ``names`` are the variables; ``params`` maps coefficient symbols to values.
    Juxtaposed single letters (``"2bxzw"``) are split into factors.
    """
    params = {k: to_rational(v) for k, v in (params or {}).items()}
    idx = {n: i for i, n in enumerate(names)}
    out: Form = {}
    for sign, body in _TERM.findall(text.replace(" ", "")):
        coeff = Fraction(-1 if sign == "-" else 1)
        exps = [0] * len(names)
        for token in re.findall(r"\d+(?:/\d+)?|[A-Za-z]\d*(?:\^\d+)?", body):
            if token[0].isdigit():
                coeff *= Fraction(token)
                continue
            base, _, power = token.partition("^")
            e = int(power) if power else 1
            if base in idx:
                exps[idx[base]] += e
            elif base in params:
                coeff *= params[base] ** e
            else:
                raise ValueError(f"unknown symbol {base!r} in {text!r}")
        key = tuple(exps)
        out[key] = out.get(key, Fraction(0)) + coeff
    return {k: v for k, v in out.items() if v}


def form_to_json(form: Form) -> list[dict]:
    return [{"exponents": list(e), "coeff": format_rational(form[e])} for e in sorted(form, reverse=True)]


def form_from_json(data: list[dict]) -> Form:
    return {tuple(int(x) for x in d["exponents"]): to_rational(d["coeff"]) for d in data}
