"""The genus <= 6 classification table and a harness that re-derives each row.

Each row stores curve and canonical-model templates whose coefficients are
named slots (``a1``, ``a2``, ...).  Verification instantiates the templates
with random nonzero integers and checks the semigroup, the genus, the
canonical model, and the two gonality numbers by explicit certificates.
"""

from __future__ import annotations

import ast
import json
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Mapping

from .curves import canonical_model, models_equivalent, validate
from .errors import DatasetCorrupt, UnicuspError
from .exactalg import Poly, format_rational
from .families import Classification, _certify_into, base_point_sheaf, classify_free_pencils
from .ideals import check_consistency
from .semigroups import parse_semigroup, sigma

SUPPORTED_VERSION = 1
COEFF_RANGE = 1000
SLOT = re.compile(r"\b(a\d+s*|b\d+)\b")

# ---------------------------------------------------------------------------
# template expressions
# ---------------------------------------------------------------------------

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Pow)


def _to_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly([x])


def _eval(node, env: Mapping[str, object]):
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Fraction(node.value)
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise DatasetCorrupt(f"unknown symbol {node.id!r}")
        return env[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
        left = _eval(node.left, env)
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)) or node.right.value < 0:
                raise DatasetCorrupt("exponents must be non-negative integer literals")
            return left ** node.right.value
        right = _eval(node.right, env)
        if isinstance(left, Poly) or isinstance(right, Poly):
            left, right = _to_poly(left), _to_poly(right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        return left * right
    raise DatasetCorrupt(f"unsupported expression element {type(node).__name__}")


def evaluate(expr: str, values: Mapping[str, Fraction], allow_t: bool = True):
    """Evaluate a template such as ``"1 + a1*t + (a2 - a4)*t^3"``."""
    try:
        tree = ast.parse(expr.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise DatasetCorrupt(f"cannot parse template {expr!r}: {exc.msg}") from None
    env = dict(values)
    if allow_t:
        env["t"] = Poly.t()
    return _eval(tree, env)


def template_poly(expr: str, values: Mapping[str, Fraction]) -> Poly:
    return _to_poly(evaluate(expr, values))


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Alternative:
    label: str
    branch: int
    curve: tuple
    model: tuple
    definitions: tuple = ()  # (name, expr) in evaluation order
    constraints: tuple = ()
    erratum: dict | None = None

    @property
    def free_slots(self) -> list[str]:
        names = set()
        for expr in self.curve + self.model + tuple(e for _, e in self.definitions + self.constraints):
            names |= set(SLOT.findall(expr))
        bound = {n for n, _ in self.definitions + self.constraints}
        return sorted(names - bound, key=lambda s: (len(s), s))

    def instantiate(self, free: Mapping[str, Fraction]) -> dict[str, Fraction]:
        values = dict(free)
        for name, expr in self.constraints + self.definitions:
            values[name] = evaluate(expr, values, allow_t=False)
        return values


@dataclass(frozen=True)
class CaseRecord:
    id: str
    genus: int
    semigroup: str
    family: dict
    expected_db: int
    expected_df: int
    alternatives: tuple
    db_rule: dict | None = None

    @property
    def alpha(self) -> int:
        return self.family["alpha"]

    @property
    def trigonal_two_block(self) -> bool:
        f = self.family
        return f["kind"] == "two_block" and f["m"] == 1 and f["ell"] == 2

    def theory_db(self, values: Mapping[str, Fraction]) -> int:
        """Base point gonality predicted by the family criterion."""
        if self.db_rule:
            zero = all(values.get(s, Fraction(0)) == 0 for s in self.db_rule["zero"])
            return self.db_rule["then"] if zero else self.db_rule["else"]
        if self.family["kind"] == "two_block":
            return 3 if self.trigonal_two_block else 4
        return 3


def _alternative(data: dict, label: str) -> Alternative:
    return Alternative(
        label=label,
        branch=int(data.get("branch", 1)),
        curve=tuple(data["curve"]),
        model=tuple(data["model"]),
        definitions=tuple(data.get("definitions", {}).items()),
        constraints=tuple(data.get("constraints", {}).items()),
        erratum=data.get("erratum"),
    )


def _record(data: dict) -> CaseRecord:
    alts = tuple(_alternative(a, "first" if i == 0 else "second") for i, a in enumerate(data["alternatives"]))
    rec = CaseRecord(
        id=data["id"],
        genus=int(data["genus"]),
        semigroup=data["semigroup"],
        family=dict(data["family"]),
        expected_db=int(data["expected_db"]),
        expected_df=int(data["expected_df"]),
        alternatives=alts,
        db_rule=data.get("db_rule"),
    )
    S = parse_semigroup(rec.semigroup)
    if S.genus != rec.genus:
        raise DatasetCorrupt(f"case {rec.id}: genus {rec.genus} but {rec.semigroup} has {S.genus} gaps")
    if S.multiplicity != rec.expected_df:
        raise DatasetCorrupt(f"case {rec.id}: expected d_f {rec.expected_df} differs from multiplicity {S.multiplicity}")
    if S.multiplicity != rec.alpha:
        raise DatasetCorrupt(f"case {rec.id}: family alpha {rec.alpha} differs from multiplicity {S.multiplicity}")
    for alt in alts:
        if len(alt.model) != rec.genus:
            raise DatasetCorrupt(f"case {rec.id}: model template has {len(alt.model)} coordinates, genus is {rec.genus}")
    return rec


def load_cases(path=None) -> list[CaseRecord]:
    try:
        if path is None:
            text = resources.files("unicusp").joinpath("data/table.json").read_text()
        else:
            with open(path) as fh:
                text = fh.read()
        data = json.loads(text)
        if data.get("format") != "unicusp-table" or data.get("version") != SUPPORTED_VERSION:
            raise DatasetCorrupt(f"unsupported dataset format/version: {data.get('format')!r} {data.get('version')!r}")
        cases = [_record(c) for c in data["cases"]]
    except DatasetCorrupt:
        raise
    except (OSError, ValueError, KeyError, TypeError, UnicuspError) as exc:
        raise DatasetCorrupt(f"cannot load dataset: {exc}") from None
    if len(cases) != 23 or len({c.id for c in cases}) != 23:
        raise DatasetCorrupt(f"expected 23 distinct cases, found {len(cases)}")
    return cases


def case_by_id(cid: str, cases=None) -> CaseRecord:
    key = cid.strip().strip("()").lower()
    for c in cases or load_cases():
        if c.id == key:
            return c
    raise KeyError(f"no case {cid!r}")


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass
class SampleResult:
    alternative: str
    sample: int
    kind: str  # "random" or "criterion"
    values: dict
    semigroup_ok: bool = False
    genus_ok: bool = False
    model_ok: bool = False
    db_observed: int | None = None
    db_theory: int | None = None
    db_expected: int | None = None
    df_observed: int | None = None
    df_expected: int | None = None
    ideal_ok: bool | None = None
    certificates: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "alternative": self.alternative,
            "sample": self.sample,
            "kind": self.kind,
            "values": {k: format_rational(v) for k, v in sorted(self.values.items(), key=lambda kv: (len(kv[0]), kv[0]))},
            "semigroup_ok": self.semigroup_ok,
            "genus_ok": self.genus_ok,
            "model_ok": self.model_ok,
            "d_b": {"observed": self.db_observed, "theory": self.db_theory, "expected": self.db_expected},
            "d_f": {"observed": self.df_observed, "expected": self.df_expected},
            "ideal_ok": self.ideal_ok,
            "certificates": self.certificates,
            "notes": list(self.notes),
            "errors": list(self.errors),
        }


@dataclass
class VerificationReport:
    case: str
    seed: int
    samples: int
    results: list
    discrepancies: list

    @property
    def failures(self) -> list:
        return [d for d in self.discrepancies if d["kind"] == "FAILURE"]

    @property
    def status(self) -> str:
        if self.failures:
            return "FAIL"
        if any(d["kind"] == "DOCUMENTED_CONDITIONAL" for d in self.discrepancies):
            return "DOCUMENTED_CONDITIONAL"
        return "PASS"

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "seed": self.seed,
            "samples": self.samples,
            "status": self.status,
            "results": [r.to_json() for r in self.results],
            "discrepancies": list(self.discrepancies),
        }


def _random_values(rng: random.Random, slots: list[str]) -> dict[str, Fraction]:
    out = {}
    for s in slots:
        v = 0
        while v == 0:
            v = rng.randint(-COEFF_RANGE, COEFF_RANGE)
        out[s] = Fraction(v)
    return out


def _check_sample(rec: CaseRecord, alt: Alternative, free: dict, res: SampleResult, ideals: bool) -> None:
    values = alt.instantiate(free)
    res.values = dict(values)
    curve = validate([template_poly(e, values) for e in alt.curve])
    expected_S = parse_semigroup(rec.semigroup)
    res.semigroup_ok = curve.semigroup == expected_S
    res.genus_ok = curve.genus == rec.genus
    model = canonical_model(curve)
    res.model_ok = models_equivalent(model.coords, [template_poly(e, values) for e in alt.model])
    if alt.erratum:
        printed = alt.erratum.get("model_as_printed")
        if printed:
            res.notes.append(
                "model as printed is "
                + ("equivalent" if models_equivalent(model.coords, [template_poly(e, values) for e in printed]) else "not equivalent")
                + " to the computed model"
            )

    res.db_theory = rec.theory_db(values)
    res.db_expected = rec.expected_db
    res.df_expected = rec.expected_df
    cls = Classification(res.db_theory, curve.alpha, {})
    _certify_into(cls, "base_point", curve, base_point_sheaf(curve, rec.trigonal_two_block), (res.db_theory, True))
    classify_free_pencils(curve, cls)
    if "base_point" in cls.certificates:
        res.db_observed = cls.certificates["base_point"].degree
    if "base_point_free" in cls.certificates:
        res.df_observed = cls.certificates["base_point_free"].degree
    res.certificates = {k: v.to_json() for k, v in cls.certificates.items()}
    res.notes.extend(cls.notes)
    for name, f in cls.failures:
        res.errors.append(f"{name} certificate: {f}")

    if ideals:
        s = sigma(curve.semigroup)
        rep = check_consistency(curve, s + 1, n_min=s, model=model, strict=False)
        res.ideal_ok = rep.ok


def _discrepancies(rec: CaseRecord, res: SampleResult) -> list[dict]:
    out = []
    where = {"alternative": res.alternative, "sample": res.sample}

    def add(kind, check, observed, expected, detail=""):
        out.append({"kind": kind, "check": check, **where, "observed": observed, "expected": expected, "detail": detail})

    for e in res.errors:
        add("FAILURE", "error", None, None, e)
    if not res.semigroup_ok:
        add("FAILURE", "semigroup", None, rec.semigroup)
    if not res.genus_ok:
        add("FAILURE", "genus", None, rec.genus)
    if not res.model_ok:
        add("FAILURE", "canonical_model", False, True)
    if res.ideal_ok is False:
        add("FAILURE", "ideal_dimension", False, True)
    if res.db_observed is not None and res.db_observed != rec.expected_db:
        if rec.db_rule and res.db_observed == res.db_theory:
            add("DOCUMENTED_CONDITIONAL", "d_b", res.db_observed, rec.expected_db,
                "table value holds only where " + ", ".join(rec.db_rule["zero"]) + " vanish")
        else:
            add("FAILURE", "d_b", res.db_observed, rec.expected_db)
    if res.df_observed is not None and res.df_observed != rec.expected_df:
        add("FAILURE", "d_f", res.df_observed, rec.expected_df, "; ".join(res.notes))
    return out


def verify_case(cid: str, samples: int = 5, seed: int = 0, ideals: bool = True, cases=None) -> VerificationReport:
    rec = case_by_id(cid, cases)
    rng = random.Random(f"{seed}:{rec.id}")
    results, disc = [], []
    for alt in rec.alternatives:
        slots = alt.free_slots
        draws = [("random", _random_values(rng, slots)) for _ in range(samples)]
        if rec.db_rule and samples:
            # one more sample on the stratum where the table's d_b applies
            stratum = dict(draws[0][1])
            stratum.update({s: Fraction(0) for s in rec.db_rule["zero"] if s in stratum})
            draws.append(("criterion", stratum))
        for k, (kind, free) in enumerate(draws):
            res = SampleResult(alt.label, k, kind, {})
            try:
                _check_sample(rec, alt, free, res, ideals)
            except UnicuspError as exc:
                res.errors.append(f"{type(exc).__name__}: {exc}")
            results.append(res)
            disc.extend(_discrepancies(rec, res))
    return VerificationReport(rec.id, seed, samples, results, disc)


@dataclass
class SummaryReport:
    seed: int
    samples: int
    reports: list

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)

    def counts(self) -> dict:
        out = {"PASS": 0, "DOCUMENTED_CONDITIONAL": 0, "FAIL": 0}
        for r in self.reports:
            out[r.status] += 1
        return out

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "ok": self.ok,
            "counts": self.counts(),
            "cases": [r.to_json() for r in self.reports],
        }


def verify_all(samples: int = 5, seed: int = 42, ideals: bool = True, cases=None) -> SummaryReport:
    cases = cases if cases is not None else load_cases()
    return SummaryReport(seed, samples, [verify_case(c.id, samples, seed, ideals, cases) for c in cases])


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _coords_text(exprs) -> str:
    return "(" + " : ".join(exprs) + ")"


def markdown_report(summary: SummaryReport, cases=None) -> str:
    cases = {c.id: c for c in (cases or load_cases())}
    lines = ["| case | C and C' | d_b | d_f | status |", "|---|---|---|---|---|"]
    for rep in summary.reports:
        rec = cases[rep.case]
        cc = "<br>or ".join(f"{_coords_text(a.curve)} {_coords_text(a.model)}" for a in rec.alternatives)
        lines.append(f"| ({rec.id}) | {cc} | {rec.expected_db} | {rec.expected_df} | {rep.status} |")
    lines.append("")
    counts = summary.counts()
    lines.append(f"seed {summary.seed}, {summary.samples} samples per alternative: "
                 + ", ".join(f"{k} {v}" for k, v in counts.items()))
    flagged = [(rep.case, d) for rep in summary.reports for d in rep.discrepancies]
    if flagged:
        lines += ["", "| case | kind | check | alternative | sample | observed | expected | detail |",
                  "|---|---|---|---|---|---|---|---|"]
        for cid, d in flagged:
            lines.append(f"| ({cid}) | {d['kind']} | {d['check']} | {d['alternative']} | {d['sample']} | "
                         f"{d['observed']} | {d['expected']} | {d['detail']} |")
    return "\n".join(lines) + "\n"
