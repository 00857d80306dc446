"""The ``orderlab`` command line.

Every command prints one JSON document.  Exit codes: 0 success, 2 not
found or inconclusive, 1 error (with ``{"error": ...}``).  By default the
handlers run in-process; ``--server URL`` sends the same request to a
running ``orderlab.service`` instead.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from .handlers import COMMANDS, ERROR, Outcome, run


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not JSON: {exc}") from None


def _tables(path: str) -> list:
    data = _load(path)
    if isinstance(data, dict):
        data = data.get("action", data.get("generators"))
    if not isinstance(data, list):
        raise UsageError(f"{path} must hold a list of lift or matrix tables")
    return data


def _split_elements(text: str) -> list:
    sep = ";" if ";" in text else ","
    return [chunk.strip() for chunk in text.split(sep) if chunk.strip()]


def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(0), help="seed for any sampling (default 0)")
    parser.add_argument("--threads", type=int, default=d(1), help="worker threads")
    parser.add_argument("--tol", default=d("1/1000"), help="refinement tolerance, a rational")
    parser.add_argument("--pretty", action="store_true", default=d(False), help="indented output")
    parser.add_argument("--server", default=d(None), metavar="URL", help="send the request to a running service")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="orderlab", description="Orders, circular orders and Euler classes of group actions.")
    _globals(p, suppress=False)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def leaf(parent, name, **kw):
        q = parent.add_parser(name, **kw)
        _globals(q, suppress=True)
        return q

    q = leaf(sub, "lo-cert", help="search for a non-left-orderability certificate")
    q.add_argument("--presentation", required=True, help="presentation JSON file")
    q.add_argument("--depth", type=int, default=9)
    q.add_argument("--base", help='base words: "a b c t" or comma-separated words')

    q = leaf(sub, "cone-check", help="check a positive cone on a ball")
    q.add_argument("--group", choices=["braid", "z2"], default="braid")
    q.add_argument("--n", type=int, default=3)
    q.add_argument("--radius", type=int, default=4)
    q.add_argument("--cone", choices=["dehornoy", "lex", "first-coordinate"], default=None)

    q = leaf(sub, "realize", help="dynamical realization of a circular order")
    q.add_argument("--order", required=True, help="circular order JSON file")

    q = leaf(sub, "blowup", help="blow up an orbit of a PL circle action")
    q.add_argument("--action", required=True, help="lift tables JSON file")
    q.add_argument("--point", required=True)
    q.add_argument("--weights", help="space-separated lengths, one per orbit point")

    euler = sub.add_parser("euler", help="Euler numbers")
    esub = euler.add_subparsers(dest="which", parser_class=_Parser)
    q = leaf(esub, "pair", help="pair the Ghys cocycle with a surface cycle")
    q.add_argument("--action", required=True)
    q.add_argument("--genus", type=int, required=True)
    q.add_argument("--elements", help='generator images "a1; b1; ..." (default: the action generators)')
    q = leaf(esub, "bestvina", help="planar Euler number of the dilation-twist action")
    q.add_argument("--index", type=int, default=1)
    q = leaf(esub, "genus2", help="planar Euler number of the genus-2 family")
    q.add_argument("--i", type=int, default=1)
    q = leaf(esub, "rays", help="Euler number from an arc and two rays")
    q.add_argument("--delta", required=True)
    q.add_argument("--tau-plus", required=True)
    q.add_argument("--tau-minus", required=True)

    q = leaf(sub, "alexander", help="Alexander and self-intersection series")
    q.add_argument("example", choices=["twist-row", "bestvina"])
    q.add_argument("--window", type=int, default=8)
    q.add_argument("--tau", help="arc JSON file")
    q.add_argument("--reading", choices=["conjugate-then-apply", "left-to-right"], default="conjugate-then-apply")

    braid = sub.add_parser("braid", help="braid orders")
    bsub = braid.add_subparsers(dest="which", parser_class=_Parser)
    q = leaf(bsub, "cmp", help="Dehornoy comparison of two braids")
    q.add_argument("--n", type=int, default=3)
    q.add_argument("left")
    q.add_argument("right")
    q = leaf(bsub, "circ", help="circular order on B_n modulo the full twist")
    q.add_argument("--n", type=int, default=3)
    q.add_argument("words", nargs=3)

    mcg = sub.add_parser("mcg", help="mapping class orders")
    msub = mcg.add_subparsers(dest="which", parser_class=_Parser)
    q = leaf(msub, "circ", help="circular order from attracting endpoints")
    q.add_argument("--n", type=int, default=3)
    q.add_argument("words", nargs=3)
    return p


def _request(args) -> tuple:
    """Turn parsed arguments into (command name, request model)."""
    name = args.command if getattr(args, "which", None) is None else f"{args.command} {args.which}"
    if name not in COMMANDS:
        raise UsageError(f"unknown or incomplete command {name!r}")
    common = {"seed": args.seed, "threads": args.threads, "tol": args.tol}
    if name == "lo-cert":
        fields = {"presentation": _load(args.presentation), "depth": args.depth, "base": args.base}
    elif name == "cone-check":
        cone = args.cone or ("dehornoy" if args.group == "braid" else "lex")
        fields = {"group": args.group, "n": args.n, "radius": args.radius, "cone": cone}
    elif name == "realize":
        fields = {"order": _load(args.order)}
    elif name == "blowup":
        fields = {"action": _tables(args.action), "point": args.point,
                  "weights": args.weights.split() if args.weights else None}
    elif name == "euler pair":
        fields = {"action": _tables(args.action), "genus": args.genus,
                  "elements": _split_elements(args.elements) if args.elements else None}
    elif name == "euler bestvina":
        fields = {"index": args.index}
    elif name == "euler genus2":
        fields = {"i": args.i}
    elif name == "euler rays":
        fields = {"delta": _load(args.delta), "tau_plus": _load(args.tau_plus), "tau_minus": _load(args.tau_minus)}
    elif name == "alexander":
        fields = {"example": args.example, "window": args.window, "reading": args.reading,
                  "tau": _load(args.tau) if args.tau else None}
    elif name == "braid cmp":
        fields = {"n": args.n, "left": args.left, "right": args.right}
    else:
        fields = {"n": args.n, "words": list(args.words)}
    model = COMMANDS[name][0]
    return name, model(**common, **fields)


def _remote(url: str, name: str, req) -> Outcome:
    import httpx

    from .service import CODES, route_path

    try:
        resp = httpx.post(url.rstrip("/") + route_path(name), json=req.model_dump(mode="json"), timeout=None)
    except httpx.HTTPError as exc:
        return Outcome(ERROR, {"error": "ConnectionError", "detail": str(exc)})
    return Outcome(CODES.get(resp.status_code, ERROR), resp.json())


def render(payload, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(payload, indent=2, sort_keys=True)
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def dispatch(argv: Optional[Sequence[str]] = None) -> tuple:
    """Run one command line; returns (exit code, output text)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    pretty = "--pretty" in argv
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("no command given")
        name, req = _request(args)
    except UsageError as exc:
        return ERROR, render({"error": "usage", "detail": str(exc)}, pretty)
    except ValidationError as exc:
        return ERROR, render({"error": "invalid input", "detail": exc.errors(include_url=False)}, pretty)
    out = _remote(args.server, name, req) if args.server else run(name, req)
    return out.code, render(out.payload, pretty)


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, text = dispatch(argv)
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
