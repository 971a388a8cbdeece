"""Command-line front end.

Every command takes a diagram as a library name, a PD code or a JSON
object.  ``--format json`` prints machine-readable output; half-integer
exponents appear doubled there and as ``t^(1/2)`` in tables.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .alexander import alexander_single
from .detector import detect_hopf
from .homalg import COEFFS
from .khovanov import jones_polynomial, kh, khr, module_action
from .koszul import khi_rank_bound
from .library import LIBRARY, get_diagram
from .linkdiag import DiagramError, LinkDiagram, load_diagram, parse_json

__all__ = ["main", "resolve_input"]


def resolve_input(text: str) -> LinkDiagram:
    """A library name, a ``PD[...]`` code or a JSON diagram."""
    s = text.strip()
    if s in LIBRARY:
        return get_diagram(s)
    if s.startswith(("PD", "{")):
        return load_diagram(s)
    raise DiagramError(f"unknown diagram {text!r}; use a library name, PD[...] or JSON")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _cmd_kh(args, reduced=False) -> str:
    d = resolve_input(args.input)
    if reduced or args.reduced:
        group = khr(d, args.component, args.coeff)
    else:
        group = kh(d, args.coeff)
    return _dump(group.to_json()) if args.format == "json" else group.table()


def _cmd_jones(args) -> str:
    j = jones_polynomial(kh(resolve_input(args.input), "Q"))
    return _dump(j.to_json()) if args.format == "json" else j.format("q")


def _cmd_action(args) -> str:
    act = module_action(resolve_input(args.input), args.component)
    if args.format == "json":
        return _dump({"distinguished": act.distinguished,
                      "basis": [list(b) for b in act.basis],
                      "matrices": act.to_json()})
    lines = [f"distinguished component: {act.distinguished}",
             f"dim Khr(Q): {act.dim}"]
    for c in sorted(act.matrices):
        lines.append(f"x_{c}: rank {act.rank(c)} (second edge: {act.edge_agreement.get(c, '-')})")
    return "\n".join(lines)


def _cmd_koszul(args) -> str:
    n = khi_rank_bound(resolve_input(args.input), args.component)
    return _dump(n) if args.format == "json" else str(n)


def _cmd_alexander(args) -> str:
    p = alexander_single(resolve_input(args.input))
    return _dump(p.to_json()) if args.format == "json" else p.format("t")


def _detect_one(text: str) -> tuple[bool, str, str]:
    """(ok, json, table) for one census line; errors are reported, not raised."""
    try:
        s = text.strip()
        d = parse_json(s) if s.startswith("{") else resolve_input(s)
        cert = detect_hopf(d)
        return True, cert.dumps(), cert.table()
    except (DiagramError, KeyError, ValueError) as exc:
        msg = str(exc)
        return False, _dump({"error": msg, "input": text.strip()}), f"error: {msg}"


def _cmd_detect(args) -> tuple[str, int]:
    if args.file:
        return _census(args)
    if args.input is None:
        raise DiagramError("detect needs a diagram or --file")
    cert = detect_hopf(resolve_input(args.input))
    return (cert.dumps() if args.format == "json" else cert.table()), 0


def _census(args) -> tuple[str, int]:
    with open(args.file, encoding="utf-8") as fh:
        lines = [ln for ln in fh if ln.strip()]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_detect_one, lines))
    else:
        results = [_detect_one(ln) for ln in lines]
    status = 0 if all(ok for ok, _, _ in results) else 1
    pick = 1 if args.format == "json" else 2
    return "\n".join(r[pick] for r in results), status


def _cmd_list(args) -> str:
    rows = [(n, len(d.crossings), len(d.components)) for n, d in LIBRARY.items()]
    if args.format == "json":
        return _dump([{"name": n, "crossings": c, "components": r} for n, c, r in rows])
    width = max(len(n) for n, _, _ in rows)
    return "\n".join(f"{n.ljust(width)}  {c:>2} crossings  {r} components" for n, c, r in rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="khdetect", description="Khovanov homology and Hopf link certificates")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, needs_input=True, optional_input=False):
        p = sub.add_parser(name, help=help_text)
        if needs_input:
            p.add_argument("input", nargs="?" if optional_input else None,
                           help="library name, PD[...] code or JSON diagram")
        p.add_argument("--format", choices=("json", "table"), default="table")
        return p

    for name, text in (("kh", "Khovanov homology"), ("khr", "reduced Khovanov homology")):
        p = add(name, text)
        p.add_argument("--coeff", choices=COEFFS, default="Z")
        p.add_argument("--reduced", action="store_true")
        p.add_argument("--component", type=int, default=None,
                       help="distinguished component for reduced homology")
    add("jones", "unnormalized Jones polynomial (q + 1/q) V(q)")
    for name, text in (("action", "x_i action on Khr(L;Q)"),
                       ("koszul-bound", "Koszul rank bound for the instanton rank")):
        p = add(name, text)
        p.add_argument("--component", type=int, default=None)
    add("alexander", "single-variable Alexander polynomial")
    for name in ("detect", "census"):
        p = add(name, "Hopf link certificate", optional_input=True)
        p.add_argument("--file", help="JSONL file with one diagram per line")
        p.add_argument("--jobs", type=int, default=1)
    add("list", "built-in diagrams", needs_input=False)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        status = 0
        if args.command == "kh":
            out = _cmd_kh(args)
        elif args.command == "khr":
            out = _cmd_kh(args, reduced=True)
        elif args.command == "jones":
            out = _cmd_jones(args)
        elif args.command == "action":
            out = _cmd_action(args)
        elif args.command == "koszul-bound":
            out = _cmd_koszul(args)
        elif args.command == "alexander":
            out = _cmd_alexander(args)
        elif args.command == "detect":
            out, status = _cmd_detect(args)
        elif args.command == "census":
            if not args.file:
                raise DiagramError("census needs --file")
            out, status = _census(args)
        else:
            out = _cmd_list(args)
    except (DiagramError, KeyError, ValueError, IndexError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1
    print(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
