"""Command-line interface: ``invsemi validate|analyze|munn|compare|catalog``.

Output is JSON on stdout (``--pretty`` gives a readable summary instead).
Exit codes: 0 success, 1 invalid input, 2 theory or invariant violation,
3 resource cap reached.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io as sio
from .catalog import build_catalog
from .config import load_limits
from .connectivity import (
    find_short_bypass, find_tight_bypass, is_shortly_connected, is_tightly_connected,
    order_ideal_check,
)
from .errors import CapExceeded, InputError, InvariantFailure, TheoryViolation
from .isomorphism import find_isomorphism
from .lattice import verify_lattice_determinability
from .munn import munn_semigroup
from .pa import verify_pa_determinability, verify_psa_determinability
from .semigroup import FiniteInverseSemigroup, monogenic

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION, EXIT_CAP = 0, 1, 2, 3
SCHEMA = 1


def _default(v):
    if isinstance(v, (set, frozenset)):
        return sorted(v)
    if hasattr(v, "item"):
        return v.item()
    return str(v)


def _dump(obj):
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, default=_default)


def _jsonable(w):
    return json.loads(_dump(w))


def _as_inverse(obj):
    """Semilattices are analysed as inverse semigroups via their meet table."""
    if isinstance(obj, FiniteInverseSemigroup) or not hasattr(obj, "meet"):
        return obj
    return FiniteInverseSemigroup(obj.meet, labels=obj.labels)


# -- commands -------------------------------------------------------------------


def cmd_validate(args, limits, out):
    fmt, obj, digest = sio.read_input(args.path, inverse=not args.any)
    report = {"schema": SCHEMA, "valid": True, "format": fmt, "order": obj.order,
              "input_digest": digest}
    if fmt == sio.SGP:
        report["inverse"] = isinstance(obj, FiniteInverseSemigroup)
    out.append(report)
    return EXIT_OK


def analysis_report(S, digest=None):
    """Everything the ``analyze`` command reports, as a JSON-ready dict."""
    report = {"schema": SCHEMA, "order": S.order, "labels": [S.label(x) for x in range(S.order)]}
    if digest is not None:
        report["input_digest"] = digest
    report["idempotent_count"] = len(S.idempotents)
    green = {}
    for tag in ("H", "L", "R", "D"):
        part = S.green(tag)
        green[tag] = {"classes": len(part.blocks), "sizes": sorted(part.sizes(), reverse=True)}
    report["green"] = green
    preds = S.structural_predicates()
    report["flags"] = {
        "combinatorial": preds.is_combinatorial,
        "fundamental": preds.is_fundamental,
        "shortly_connected": is_shortly_connected(S),
        "tightly_connected": is_tightly_connected(S),
        "order_ideal": order_ideal_check(S),
        "nontrivial_isolated_subgroups": preds.has_nontrivial_isolated_subgroup,
        "completely_semisimple": preds.completely_semisimple,
    }
    report["isolated_idempotents"] = list(preds.isolated_idempotents)
    report["nongroup"] = sorted(S.nongroup)
    report["notes"] = ["completely_semisimple is constant for finite input: "
                       "a finite semigroup has no bicyclic subsemigroup"]
    mono = []
    for x in range(S.order):
        m = monogenic(S, x)
        mono.append({"x": x, "case": m.case, "order": len(m.elements),
                     "kernel": sorted(m.kernel), "kernel_kind": m.kernel_kind})
    report["monogenic"] = mono
    return report


def cmd_analyze(args, limits, out):
    fmt, obj, digest = sio.read_input(args.path)
    S = _as_inverse(obj)
    report = analysis_report(S, digest)
    report["format"] = fmt
    if args.bypass is not None:
        e, x = args.bypass
        for v in (e, x):
            if not 0 <= v < S.order:
                raise InputError(f"element {v} out of range")
        finder = find_tight_bypass if args.tight else find_short_bypass
        bp = finder(S, e, x)
        report["bypass"] = "none" if bp is None else json.loads(bp.to_json())
    out.append(report)
    return EXIT_OK


def cmd_munn(args, limits, out):
    E = sio.parse_slt(sio.read_text(args.path))
    T = munn_semigroup(E, cap=limits.munn_cap)
    out.append(sio.format_sgp(T))
    return EXIT_OK


def _status_code(report):
    return {"violation": EXIT_VIOLATION, "inconclusive": EXIT_CAP}.get(report.get("status"), EXIT_OK)


def cmd_compare(args, limits, out):
    psa = args.mode == "psa"
    _, a, _ = sio.read_input(args.path_a)
    _, b, _ = sio.read_input(args.path_b, inverse=not psa)
    S, T = _as_inverse(a), _as_inverse(b)
    if args.mode == "iso":
        phi = find_isomorphism(S, T, max_steps=limits.search_steps)
        report = {"schema": SCHEMA, "mode": "iso", "isomorphic": phi is not None,
                  "isomorphism": None if phi is None else list(phi), "status": "verified"}
    elif args.mode == "lattice":
        report = verify_lattice_determinability(
            S, T, lattice_cap=limits.lattice_cap, search_limit=limits.search_steps,
            max_isomorphisms=args.max_records,
        )
    elif args.mode == "pa":
        if not isinstance(T, FiniteInverseSemigroup):
            raise InputError("PA mode needs an inverse semigroup as the second input")
        report = verify_pa_determinability(
            S, T, cap=limits.pa_cap, search_limit=limits.search_steps, max_records=args.max_records,
        )
    else:
        report = verify_psa_determinability(
            S, T, cap=limits.pa_cap, search_limit=limits.search_steps, max_records=args.max_records,
        )
    out.append(report)
    return _status_code(report)


def cmd_catalog(args, limits, out):
    cat = build_catalog(args.max_order, bound=limits.catalog_max_order)
    text = cat.to_json() + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        out.append({"schema": SCHEMA, "max_order": args.max_order,
                    "members": len(cat.members), "output": args.output})
    else:
        out.append(text)
    return EXIT_OK


# -- plumbing ---------------------------------------------------------------------


def _pretty(report):
    """Flat ``key: value`` lines for a report dict."""
    lines = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}{k}.", v[k])
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            for i, item in enumerate(v):
                walk(f"{prefix}{i}.", item)
        else:
            lines.append(f"{prefix[:-1]}: {v}")

    walk("", report)
    return "\n".join(lines)


def build_parser():
    limits = argparse.ArgumentParser(add_help=False)
    g = limits.add_argument_group("limits (override invsemi.env)")
    g.add_argument("--munn-cap", type=int)
    g.add_argument("--lattice-cap", type=int)
    g.add_argument("--search-steps", type=int)
    g.add_argument("--pa-cap", type=int)
    g.add_argument("--catalog-bound", type=int, dest="catalog_max_order")
    g.add_argument("--pretty", action="store_true", help="human-readable summary instead of JSON")

    p = argparse.ArgumentParser(prog="invsemi", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", parents=[limits], help="check a .sgp or .slt file")
    v.add_argument("path")
    v.add_argument("--any", action="store_true", help="accept non-inverse semigroup tables")

    a = sub.add_parser("analyze", parents=[limits], help="structure report for a semigroup")
    a.add_argument("path", help="file, or - for stdin")
    a.add_argument("--bypass", nargs=2, type=int, metavar=("E", "X"))
    a.add_argument("--tight", action="store_true", help="search for a tight bypass")

    m = sub.add_parser("munn", parents=[limits], help="Cayley table of the Munn semigroup")
    m.add_argument("path")

    c = sub.add_parser("compare", parents=[limits], help="run a determinability harness on a pair")
    c.add_argument("path_a")
    c.add_argument("path_b")
    c.add_argument("--mode", choices=("iso", "lattice", "pa", "psa"), default="iso")
    c.add_argument("--max-records", type=int)

    k = sub.add_parser("catalog", parents=[limits], help="inverse semigroups up to isomorphism")
    k.add_argument("--max-order", type=int, required=True)
    k.add_argument("--output", "-o")
    return p


COMMANDS = {
    "validate": cmd_validate, "analyze": cmd_analyze, "munn": cmd_munn,
    "compare": cmd_compare, "catalog": cmd_catalog,
}


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    overrides = {k: getattr(args, k) for k in
                 ("munn_cap", "lattice_cap", "search_steps", "pa_cap", "catalog_max_order")}
    out = []
    try:
        limits = load_limits().override(**overrides)
        code = COMMANDS[args.command](args, limits, out)
    except InputError as exc:
        witness = getattr(exc, "witness", None)
        print(f"invalid input: {exc}", file=stderr)
        if witness is not None:
            print(f"witness: {_jsonable(witness)}", file=stderr)
        out = [{"schema": SCHEMA, "error": "invalid-input", "message": str(exc),
                "witness": _jsonable(witness)}]
        code = EXIT_INPUT
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=stderr)
        out = [{"schema": SCHEMA, "error": "cap-exceeded", "message": str(exc)}]
        code = EXIT_CAP
    except (TheoryViolation, InvariantFailure) as exc:
        print(f"violation: {exc}", file=stderr)
        out = [{"schema": SCHEMA, "error": "violation", "message": str(exc),
                "witness": _jsonable(getattr(exc, "witness", None))}]
        code = EXIT_VIOLATION
    for item in out:
        if isinstance(item, str):
            stdout.write(item)
        elif args.pretty:
            print(_pretty(item), file=stdout)
        else:
            print(_dump(item), file=stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
