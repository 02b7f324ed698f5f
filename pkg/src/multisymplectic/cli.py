"""Command-line interface.

Subcommands::

    classify DOC        predicates of a subspace (G2 report or generic report)
    complement DOC      Type-I or Type-II complement basis
    verify SUITE...     run property suites, one JSON record per suite
    cross-table         e_i x e_j for the standard G2 form

``DOC`` is a JSON file (``-`` for stdin)::

    {"ambient_dim": 7,
     "form": [{"indices": [1, 2, 3], "coeff": "1"}, ...],   # optional, default phi0
     "g2": true,                                            # optional
     "subspace": [["1", "0", "0", "0", "0", "0", "0"], ...],
     "params": {"l": 2, "r": 2, "trials": 200, "seed": 0, "type": "i"}}

Exit codes: 0 success, 1 a suite reported failures, 2 malformed input or
unknown suite, 3 a mathematical precondition was violated.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .exterior import AlternatingForm, form_from_records, to_records
from .g2 import G2ClassificationReport, G2Space, classify_g2_subspace, phi0
from .linalg import Subspace, format_rational, parse_rational
from .spaces import (
    MultisymplecticSpace,
    Verdict,
    fully_nondegenerate_on,
    is_multisymplectic_subspace,
    r_nondegenerate,
    type_i_complement,
    type_i_predicates,
    type_ii_coisotropic,
    type_ii_complement,
    type_ii_isotropic,
)
from .verify import SUITES, SuiteConfig, UnknownSuiteError, run_suite

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3

TYPE_II_NOTE = "span of W_II^{perp,l}; members are the decomposables herein"


class InputError(ValueError):
    """Malformed input document."""


@dataclass
class InputDocument:
    ambient_dim: int
    form: AlternatingForm
    g2: bool
    subspace: Subspace
    params: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def parse(cls, data: Any, form_override: AlternatingForm | None = None) -> "InputDocument":
        if not isinstance(data, dict):
            raise InputError("input document must be a JSON object")
        form = form_override
        if form is None and data.get("form") is not None:
            form = _parse_form(data["form"], data.get("ambient_dim"))
        n = data.get("ambient_dim", form.n if form is not None else 7)
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise InputError("ambient_dim must be a positive integer")
        if form is None:
            form = phi0()
        if form.n != n:
            raise InputError(f"form lives on Q^{form.n} but ambient_dim is {n}")
        g2 = data.get("g2", form == phi0())
        if not isinstance(g2, bool):
            raise InputError("g2 must be a boolean")
        rows = data.get("subspace", [])
        if not isinstance(rows, list):
            raise InputError("subspace must be a list of rows")
        parsed = []
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != n:
                raise InputError(f"subspace row {i} must have {n} entries")
            parsed.append([_rational(x) for x in row])
        params = data.get("params", {})
        if not isinstance(params, dict):
            raise InputError("params must be an object")
        return cls(n, form, g2, Subspace.span(parsed, n), params)


def _rational(x) -> Fraction:
    try:
        return parse_rational(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {x!r}: {exc}") from None


def _parse_form(data, n) -> AlternatingForm:
    if isinstance(data, dict):
        n = data.get("ambient_dim", n)
        data = data.get("form")
    if not isinstance(data, list) or not isinstance(n, int):
        raise InputError("form must be a list of records with a known ambient_dim")
    try:
        return form_from_records(data, n)
    except (TypeError, ValueError, KeyError, ZeroDivisionError) as exc:
        raise InputError(f"bad form: {exc}") from None


def _load_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None


# ---------------------------------------------------------------- rendering

def rows_out(w: Subspace) -> list[list[str]]:
    return [[format_rational(c) for c in row] for row in w.basis]


def verdict_out(v: Verdict) -> dict:
    out: dict[str, Any] = {"status": v.status.value, "method": v.method}
    if v.witness is not None:
        out["witness"] = to_records(v.witness)
    if v.trials:
        out["trials"] = v.trials
    return out


def g2_report_out(r: G2ClassificationReport) -> dict:
    return {
        "dim": r.dim,
        "label": r.label,
        "branch": r.branch,
        "type_i": {
            "isotropic2": r.type_i.isotropic2,
            "coisotropic2": r.type_i.coisotropic2,
            "lagrangian2": r.type_i.lagrangian2,
            "lagrangian1": r.type_i.lagrangian1,
            "coisotropic1": r.type_i.coisotropic1,
        },
        "type_ii": {
            "isotropic2": r.type_ii.isotropic2,
            "coisotropic2": verdict_out(r.type_ii.coisotropic2),
        },
        "multisymplectic1": r.multisymplectic1,
        "multisymplectic2": verdict_out(r.multisymplectic2),
        "associative_witness": None if r.associative_witness is None else rows_out(r.associative_witness),
        "consistent": r.consistent,
        "discrepancies": list(r.discrepancies),
    }


def generic_report_out(space: MultisymplecticSpace, w: Subspace, levels: Sequence[int],
                       trials: int, seed) -> dict:
    type_i = {}
    type_ii = {}
    for l in levels:
        p = type_i_predicates(space, w, l)
        type_i[str(l)] = {"isotropic": p.isotropic, "coisotropic": p.coisotropic,
                          "lagrangian": p.lagrangian}
        type_ii[str(l)] = {
            "isotropic": type_ii_isotropic(space, w, l),
            "coisotropic": verdict_out(type_ii_coisotropic(space, w, l, trials=trials, seed=seed)),
        }
    return {
        "dim": w.dim,
        "n": space.n,
        "degree": space.degree,
        "type_i": type_i,
        "type_ii": type_ii,
        "multisymplectic": is_multisymplectic_subspace(space, w),
        "fully_nondegenerate": verdict_out(fully_nondegenerate_on(space, w, trials=trials, seed=seed)),
    }


def _signed_basis(v: Sequence[Fraction]) -> str:
    terms = []
    for i, c in enumerate(v, start=1):
        if c == 0:
            continue
        mag = "" if abs(c) == 1 else format_rational(abs(c)) + "*"
        terms.append(("-" if c < 0 else "+") + f"{mag}e{i}")
    if not terms:
        return "0"
    return "".join(terms).lstrip("+")


# ---------------------------------------------------------------- commands

def _params(doc: InputDocument, args) -> dict:
    p = dict(doc.params)
    for key in ("l", "trials", "seed", "type"):
        val = getattr(args, key, None)
        if val is not None:
            p[key] = val
    p.setdefault("trials", 200)
    p.setdefault("seed", 0)
    return p


def cmd_classify(doc: InputDocument, args) -> dict:
    p = _params(doc, args)
    if doc.g2:
        if doc.ambient_dim != 7 or doc.form.degree != 3:
            raise ValueError("G2 path needs a 3-form on Q^7")
        space = G2Space(doc.form, _standard_volume())
        report = classify_g2_subspace(space, doc.subspace, trials=p["trials"], seed=p["seed"])
        return {"kind": "g2", **g2_report_out(report)}
    space = MultisymplecticSpace(doc.form)
    levels = [p["l"]] if "l" in p else list(range(1, space.k + 1))
    for l in levels:
        if not 1 <= l <= space.k:
            raise ValueError(f"l={l} outside 1..{space.k}")
    out = {"kind": "generic", **generic_report_out(space, doc.subspace, levels, p["trials"], p["seed"])}
    if "r" in p:
        out["r_nondegenerate"] = {"r": p["r"], **verdict_out(
            r_nondegenerate(doc.form, p["r"], trials=p["trials"], seed=p["seed"]))}
    return out


def _standard_volume():
    from .g2 import standard_volume

    return standard_volume(7)


def cmd_complement(doc: InputDocument, args) -> dict:
    p = _params(doc, args)
    if "l" not in p:
        raise InputError("complement needs l (params.l or --l)")
    l = p["l"]
    if not isinstance(l, int) or isinstance(l, bool):
        raise InputError("l must be an integer")
    kind = str(p.get("type", "i")).lower()
    metric = G2Space(doc.form, _standard_volume()).metric if doc.g2 else None
    space = MultisymplecticSpace(doc.form, metric)
    if kind == "i":
        comp = type_i_complement(space, doc.subspace, l)
        return {"type": "I", "l": l, "dim": comp.dim, "basis": rows_out(comp)}
    if kind == "ii":
        comp = type_ii_complement(space, doc.subspace, l)
        return {
            "type": "II",
            "l": l,
            "note": TYPE_II_NOTE,
            "dim": comp.span.dim,
            "basis": [to_records(x) for x in comp.basis()],
        }
    raise InputError(f"type must be 'i' or 'ii', got {kind!r}")


def cmd_cross_table() -> dict:
    space = G2Space.standard()
    table = space.cross_table
    return {
        "rows": [[_signed_basis(table[i][j]) for j in range(7)] for i in range(7)],
        "text": "\n".join(
            f"e{i + 1} x e{j + 1} = {_signed_basis(table[i][j])}"
            for i in range(7) for j in range(7) if i < j
        ),
    }


def cmd_verify(names: Sequence[str], trials: int, seed, form: str, coeff_bound: int):
    if "all" in names:
        names = list(SUITES)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise UnknownSuiteError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)} or 'all'")
    form_choice: Any = form
    if form not in ("phi0",) and not form.startswith("volume:"):
        form_choice = _parse_form(_load_json(form), None)
    return [run_suite(SuiteConfig(name, trials=trials, seed=seed, coeff_bound=coeff_bound,
                                  form=form_choice)) for name in names]


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multisym", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_doc=True):
        if with_doc:
            p.add_argument("input", help="input document (JSON), '-' for stdin")
            p.add_argument("--form", metavar="FILE", help="form records overriding the document's form")
            p.add_argument("--l", type=int, dest="l")
            p.add_argument("--trials", type=int)
            p.add_argument("--seed", type=int)
        p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")

    common(sub.add_parser("classify", help="classify a subspace"))
    pc = sub.add_parser("complement", help="Type-I or Type-II complement")
    common(pc)
    pc.add_argument("--type", choices=["i", "ii"], dest="type")

    pv = sub.add_parser("verify", help="run verification suites")
    pv.add_argument("suites", nargs="+", help=f"suite names ({', '.join(SUITES)}) or 'all'")
    pv.add_argument("--trials", type=int, default=25)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--coeff-bound", type=int, default=9)
    pv.add_argument("--form", default="phi0", help="phi0, volume:N, or a form file")
    common(pv, with_doc=False)

    common(sub.add_parser("cross-table", help="print e_i x e_j for the standard G2 form"),
           with_doc=False)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        if args.command == "verify":
            reports = cmd_verify(args.suites, args.trials, args.seed, args.form, args.coeff_bound)
            _emit("\n".join(r.to_json() for r in reports), args.out)
            for r in reports:
                print(r.summary(), file=sys.stderr)
            return EXIT_OK if all(r.ok for r in reports) else EXIT_FAILURES
        if args.command == "cross-table":
            table = cmd_cross_table()
            _emit(table["text"], args.out)
            return EXIT_OK
        override = _parse_form(_load_json(args.form), None) if args.form else None
        doc = InputDocument.parse(_load_json(args.input), override)
        result = cmd_classify(doc, args) if args.command == "classify" else cmd_complement(doc, args)
        _emit(json.dumps(result, indent=2), args.out)
        return EXIT_OK
    except (InputError, UnknownSuiteError) as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
