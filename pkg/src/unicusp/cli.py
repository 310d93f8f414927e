"""Command line interface: ``unicusp <command> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on invalid
input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import classification, families, ideals, semigroups, sheaves
from .curves import ParamCurve, canonical_model, points_csv, sample_points, validate
from .errors import CertificateFailure, DatasetCorrupt, UnicuspError
from .exactalg import Poly, RatFunc, format_rational, to_rational

OK, VERIFY_FAILED, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# input
# ---------------------------------------------------------------------------


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _poly(item) -> Poly:
    """A polynomial from a coefficient list or an expression in ``t``."""
    if isinstance(item, str):
        return classification.template_poly(item, {})
    if isinstance(item, list):
        return Poly.from_json(item)
    if isinstance(item, int) and not isinstance(item, bool):
        return Poly([item])
    raise InputError(f"cannot read a polynomial from {item!r}")


def load_curve(path: str) -> ParamCurve:
    data = _read_json(path)
    coords = data.get("coords") if isinstance(data, dict) else data
    if not isinstance(coords, list):
        raise InputError("curve JSON needs a 'coords' list")
    try:
        return validate([_poly(c) for c in coords])
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        if isinstance(exc, UnicuspError):
            raise
        raise InputError(f"bad curve coordinates: {exc}") from None


def load_sheaf(path: str) -> sheaves.FractionalSheaf:
    data = _read_json(path)
    gens = data.get("gens") if isinstance(data, dict) else data
    if not isinstance(gens, list) or not gens:
        raise InputError("sheaf JSON needs a nonempty 'gens' list")
    out = []
    for g in gens:
        if isinstance(g, dict):
            out.append(RatFunc(_poly(g["num"]), _poly(g.get("den", [1]))))
        else:
            out.append(RatFunc(_poly(g)))
    return sheaves.make_sheaf(out)


def _parse_t_values(text: str) -> list:
    try:
        return [to_rational(x) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad --t list {text!r}: {exc}") from None


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _emit(args, payload: dict, markdown: str, text: str | None = None) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    elif args.markdown:
        print(markdown, end="" if markdown.endswith("\n") else "\n")
    else:
        out = text if text is not None else markdown
        print(out, end="" if out.endswith("\n") else "\n")


def _kv_markdown(title: str, rows: Sequence[tuple]) -> str:
    lines = [f"## {title}", "", "| field | value |", "|---|---|"]
    lines += [f"| {k} | {v} |" for k, v in rows]
    return "\n".join(lines) + "\n"


def _kv_text(rows: Sequence[tuple]) -> str:
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows) + "\n"


def _set_text(xs) -> str:
    return "{" + ", ".join(str(x) for x in xs) + "}"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _semigroup_payload(S: semigroups.NumericalSemigroup) -> dict:
    inv = semigroups.invariants(S)
    K = semigroups.kset(S)
    H, gp = semigroups.shat(S)
    return {
        "semigroup": S.explicit(),
        "minimal_generators": S.minimal_generators(),
        "multiplicity": inv.alpha,
        "conductor": inv.beta,
        "frobenius": S.frobenius,
        "genus": inv.genus,
        "gaps": list(inv.gaps),
        "k_below_conductor": list(K.below_conductor),
        "eta": semigroups.eta(S),
        "sigma": semigroups.sigma(S),
        "shat": H.explicit(),
        "g_prime": gp,
        "symmetric": semigroups.is_symmetric(S),
        "nearly_normal": semigroups.is_nearly_normal(S),
    }


def _payload_rows(payload: dict) -> list[tuple]:
    rows = []
    for k, v in payload.items():
        if isinstance(v, list):
            v = _set_text(v)
        elif isinstance(v, bool):
            v = "yes" if v else "no"
        rows.append((k, v))
    return rows


def cmd_semigroup(args) -> int:
    S = semigroups.parse_semigroup(args.text)
    payload = _semigroup_payload(S)
    rows = _payload_rows(payload)
    _emit(args, payload, _kv_markdown("semigroup", rows), _kv_text(rows))
    return OK


def cmd_analyze(args) -> int:
    curve = load_curve(args.curve)
    payload = {"curve": str(curve), **_semigroup_payload(curve.semigroup)}
    if curve.genus >= 1:
        payload["canonical_model"] = str(canonical_model(curve))
    rows = _payload_rows(payload)
    _emit(args, payload, _kv_markdown("curve", rows), _kv_text(rows))
    return OK


def cmd_canonical(args) -> int:
    curve = load_curve(args.curve)
    model = canonical_model(curve)
    payload = {"genus": model.genus, "valuations": list(model.valuations), "coords": [str(p) for p in model.coords],
               "coeffs": model.to_json()["coords"]}
    md = "## canonical model\n\n" + "\n".join(f"- `{p}`" for p in model.coords) + "\n"
    _emit(args, payload, md, str(model) + "\n")
    return OK


def cmd_ideal(args) -> int:
    curve = load_curve(args.curve)
    if args.n < 1:
        raise InputError("--n must be at least 1")
    model = canonical_model(curve)
    S = curve.semigroup
    s = semigroups.sigma(S)
    sl = ideals.in_basis(model, args.n)
    e, gp = semigroups.eta(S), semigroups.shat(S)[1]
    formula = ideals.dim_formula(S.genus, args.n, e, gp) if args.n >= s else None
    names = ideals.variable_names(model.genus)
    forms = [ideals.format_form(f, names) for f in sl.basis]
    payload = {"n": args.n, "sigma": s, "eta": e, "g_prime": gp, "dimension": sl.dimension,
               "formula": formula, "variables": names, "model": [str(p) for p in model.coords],
               "basis": [ideals.form_to_json(f) for f in sl.basis], "basis_text": forms}
    note = "" if formula is not None else f"(formula applies from n = sigma = {s})"
    head = f"dim I_{args.n} = {sl.dimension}; formula: {formula if formula is not None else 'n/a'} {note}".rstrip()
    coords = " : ".join(names)
    text = f"model ({coords}) = {model}\n{head}\n" + "".join(f"  {f}\n" for f in forms)
    md = f"## I_{args.n}\n\n{head}\n\n" + "".join(f"- `{f}`\n" for f in forms)
    _emit(args, payload, md, text)
    status = OK if formula is None or formula == sl.dimension or e == 0 else VERIFY_FAILED
    return status


def cmd_gonality(args) -> int:
    data = _read_json(args.family)
    if not isinstance(data, dict):
        raise InputError("family JSON must be an object")
    p = families.params_from_json(data)
    result = families.classify(p)
    payload = {"family": p.to_json(), "curve": str(families.build(p)), **result.to_json()}
    rows = [("family", data.get("family")), ("d_b", result.d_b), ("d_f", result.d_f), ("criterion", result.criterion)]
    rows += [(f"certificate {k}", f"{c.sheaf} degree {c.degree}, h0 {c.h0}, free {c.free_at_cusp}")
             for k, c in result.certificates.items()]
    rows += [(f"failure {k}", str(f)) for k, f in result.failures]
    rows += [("note", n) for n in result.notes]
    _emit(args, payload, _kv_markdown("gonality", rows), _kv_text(rows))
    return VERIFY_FAILED if result.failures else OK


def cmd_certify(args) -> int:
    curve = load_curve(args.curve)
    sheaf = load_sheaf(args.sheaf)
    claim = (args.degree, args.base_point == "yes")
    cert = sheaves.inspect(curve, sheaf)
    try:
        sheaves.certify(curve, sheaf, claim)
        failure = None
    except CertificateFailure as f:
        failure = f
    payload = {"claim": {"degree": args.degree, "base_point": claim[1]}, "certificate": cert.to_json(),
               "ok": failure is None,
               "failure": None if failure is None else {"check": failure.check, "observed": str(failure.observed),
                                                          "expected": str(failure.expected)}}
    rows = [("sheaf", str(sheaf)), ("degree", cert.degree), ("degree away from cusp", cert.degree_away),
            ("D", _set_text(cert.d_set)), ("h0", cert.h0), ("free at cusp", "yes" if cert.free_at_cusp else "no"),
            ("result", "ok" if failure is None else f"failed: {failure}")]
    _emit(args, payload, _kv_markdown("certificate", rows), _kv_text(rows))
    return OK if failure is None else VERIFY_FAILED


def cmd_points(args) -> int:
    curve = load_curve(args.curve)
    ts = _parse_t_values(args.t)
    if args.json:
        pts = sample_points(curve, ts)
        print(json.dumps({"points": [{"t": format_rational(t), "coords": [format_rational(x) for x in p]}
                                     for t, p in zip(ts, pts)]}, indent=2))
    else:
        print(points_csv(curve, ts), end="")
    return OK


def cmd_verify_table(args) -> int:
    cases = classification.load_cases()
    if args.case:
        try:
            rec = classification.case_by_id(args.case, cases)
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
        summary = classification.SummaryReport(
            args.seed, args.samples, [classification.verify_case(rec.id, args.samples, args.seed, cases=cases)])
    else:
        summary = classification.verify_all(args.samples, args.seed, cases=cases)
    md = classification.markdown_report(summary, cases)
    text_lines = [f"({r.case}) {r.status}" for r in summary.reports]
    counts = summary.counts()
    text_lines.append(", ".join(f"{k} {v}" for k, v in counts.items()))
    _emit(args, summary.to_json(), md, "\n".join(text_lines) + "\n")
    return OK if summary.ok else VERIFY_FAILED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unicusp", description="Exact tools for unicuspidal rational curves.")
    fmt = argparse.ArgumentParser(add_help=False)
    group = fmt.add_mutually_exclusive_group()
    group.add_argument("--json", action="store_true", help="print a JSON report")
    group.add_argument("--markdown", action="store_true", help="print a markdown report")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("semigroup", parents=[fmt], help="invariants of a numerical semigroup")
    p.add_argument("text", metavar="SEMIGROUP", help="generators '3,7,8' or explicit '{0,3,6,->}'")
    p.set_defaults(func=cmd_semigroup)

    p = sub.add_parser("analyze", parents=[fmt], help="semigroup and canonical model of a curve")
    p.add_argument("curve")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("canonical", parents=[fmt], help="canonical model of a curve")
    p.add_argument("curve")
    p.set_defaults(func=cmd_canonical)

    p = sub.add_parser("ideal", parents=[fmt], help="degree-n forms vanishing on the canonical model")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("curve")
    p.set_defaults(func=cmd_ideal)

    p = sub.add_parser("gonality", parents=[fmt], help="classify a one-block or two-block family member")
    p.add_argument("family")
    p.set_defaults(func=cmd_gonality)

    p = sub.add_parser("certify", parents=[fmt], help="check a pencil certificate")
    p.add_argument("curve")
    p.add_argument("sheaf")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--base-point", choices=["yes", "no"], required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("points", parents=[fmt], help="sample points as CSV")
    p.add_argument("curve")
    p.add_argument("--t", required=True, help="comma separated parameter values, e.g. '0,1/2,-3'")
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("verify-table", parents=[fmt], help="re-derive the genus <= 6 classification table")
    p.add_argument("--case")
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_verify_table)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        return args.func(args)
    except (InputError, UnicuspError, DatasetCorrupt) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
