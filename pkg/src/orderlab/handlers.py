"""Command handlers: validated request in, JSON-ready payload and exit code out.

Both the HTTP service and the in-process command line call these, so the
two routes produce the same bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Callable

from . import models as m
from .braid import BraidOracle, BraidWord, braid_compare, braid_to_free_auto, circular_compare_bn_prime
from .cocycle import element_key, fundamental_cycle, ghys_e, pair
from .cones import NotFound, bits_to_signs, check_positive_cone, search_non_lo_certificate, verify_certificate
from .fuchsian import mcg_circular_compare
from .order_core import Incompatibility, circular_from_triples
from .planar import (
    OrbitNotProper,
    PolylineArc,
    alexander_series,
    euler_from_series,
    euler_via_rays,
    make_example,
    rescaled_euler,
)
from .realize import MobiusAction, PLAction, PLHomeo, blow_up, dynamical_realization, frac, frac_str, mat, orbit_closure
from .words import GroupPresentation, RewriteOracle, enumerate_ball, power, z2_presentation

OK, ERROR, INCONCLUSIVE = 0, 1, 2


@dataclass
class Outcome:
    code: int
    payload: object


class CommandError(Exception):
    """Bad input that the core library would not catch by itself."""


def _presentation(model: m.PresentationModel) -> GroupPresentation:
    return GroupPresentation.from_json(model.model_dump())


def lo_cert(req: m.LoCertRequest) -> Outcome:
    p = _presentation(req.presentation)
    oracle = RewriteOracle.from_presentation(p, max_rule_len=req.max_rule_len, max_rules=req.max_rules)
    if req.base is None:
        base = [p.parse(g) for g in p.generators]
    elif "," in req.base:
        base = [p.parse(chunk) for chunk in req.base.split(",")]
    else:
        base = [p.parse(tok) for tok in req.base.split()]
    found = search_non_lo_certificate(oracle, base, req.depth)
    if isinstance(found, NotFound):
        return Outcome(INCONCLUSIVE, {"verdict": "not-found", "depth": found.depth, "missing": found.missing})
    report = verify_certificate(oracle, found)
    witnesses = {}
    lengths = {}
    for bits in sorted(found.witnesses):
        w = found.witnesses[bits]
        signs = bits_to_signs(bits)
        word: tuple = ()
        for i in w.factors:
            word += power(found.base[i], signs[i])
        witnesses[bits] = p.format(word)
        lengths[bits] = len(w.factors)
    return Outcome(OK, {
        "verdict": "certificate",
        "depth": found.depth,
        "verified": report.ok,
        "witnesses": witnesses,
        "lengths": lengths,
    })


def _exponent_sums(w) -> tuple:
    sums = [0, 0]
    for g, s in w:
        sums[g] += s
    return tuple(sums)


def cone_check(req: m.ConeCheckRequest) -> Outcome:
    if req.group == "braid":
        if req.cone != "dehornoy":
            raise CommandError("braid groups only support the dehornoy cone")
        p = GroupPresentation(tuple(f"s{i}" for i in range(1, req.n)))
        oracle = BraidOracle(req.n)
        cone: Callable = oracle.positive
    else:
        p = z2_presentation()
        oracle = RewriteOracle.from_presentation(p)
        if req.cone == "lex":
            cone = lambda w: _exponent_sums(w) > (0, 0)
        elif req.cone == "first-coordinate":
            cone = lambda w: _exponent_sums(w)[0] > 0
        else:
            raise CommandError("z2 supports the lex and first-coordinate cones")
    ball = enumerate_ball(p, oracle, req.radius)
    report = check_positive_cone(oracle, cone, ball)
    payload = {"verdict": report.verdict, "ball_size": len(ball)}
    if report.violation is not None:
        words, axiom = report.violation
        payload["violation"] = {"axiom": axiom, "words": [p.format(w) for w in words]}
    if report.unresolved:
        payload["unresolved"] = len(report.unresolved)
    return Outcome(INCONCLUSIVE if report.verdict == "inconclusive" else OK, payload)


def _orient_table(carrier: list, triples: list) -> dict:
    table = {}
    for row in triples:
        if len(row) != 4 or row[3] not in (1, -1):
            raise CommandError(f"bad triple {row!r}")
        x, y, z, s = row
        for perm in permutations((x, y, z)):
            parity = sum(1 for a, b in combinations(range(3), 2) if (x, y, z).index(perm[a]) > (x, y, z).index(perm[b]))
            table[perm] = s if parity % 2 == 0 else -s
    for trip in combinations(carrier, 3):
        if trip not in table:
            raise CommandError(f"missing orientation for {list(trip)!r}")
    return table


def realize(req: m.RealizeRequest) -> Outcome:
    carrier = list(req.order.carrier)
    co = circular_from_triples(carrier, _orient_table(carrier, req.order.triples))
    if isinstance(co, Incompatibility):
        return Outcome(ERROR, {"error": "not a circular order", "subset": list(co.subset), "detail": str(co)})
    emb = dynamical_realization(co, req.enumeration)
    return Outcome(OK, {"points": {str(k): frac_str(v) for k, v in emb.points.items()}})


def _pl_action(tables: list) -> PLAction:
    gens = {}
    for t in tables:
        if not isinstance(t, m.LiftTable):
            raise CommandError("expected piecewise-linear lift tables")
        gens[t.element] = PLHomeo([(frac(x), frac(y)) for x, y in t.breakpoints])
    return PLAction(gens)


def blowup(req: m.BlowUpRequest) -> Outcome:
    action = _pl_action(req.action)
    weights = req.weights
    if weights is None:
        weights = ["1"] * len(orbit_closure(action, frac(req.point)))
    new, data = blow_up(action, frac(req.point), [frac(w) for w in weights])
    return Outcome(OK, {
        "action": [{"element": name, "breakpoints": h.table()} for name, h in new.gens.items()],
        "orbit": [frac_str(o) for o in data.orbit],
        "intervals": {frac_str(o): [frac_str(a), frac_str(b)] for o, (a, b) in data.intervals.items()},
    })


def _circle_action(tables: list):
    if all(isinstance(t, m.LiftTable) for t in tables):
        return _pl_action(tables)
    if all(isinstance(t, m.MobiusTable) for t in tables):
        return MobiusAction({t.element: mat(t.matrix) for t in tables})
    raise CommandError("mixed lift and matrix tables")


def euler_pair(req: m.EulerPairRequest) -> Outcome:
    action = _circle_action(req.action)
    names = list(action.generators)
    shell = GroupPresentation(tuple(names))
    elements = req.elements if req.elements is not None else names
    if len(elements) != 2 * req.genus:
        raise CommandError(f"need {2 * req.genus} elements, got {len(elements)}")
    words = [shell.parse(e) for e in elements]
    cycle = fundamental_cycle(req.genus, words, key=lambda w: element_key(action, w))
    value = pair(lambda g, h: ghys_e(action, g, h), cycle)
    return Outcome(OK, int(value))


def euler_bestvina(req: m.EulerBestvinaRequest) -> Outcome:
    bundle = make_example("bestvina", index=req.index)
    return Outcome(OK, {"euler": bundle.euler(tol=frac(req.tol))})


def euler_genus2(req: m.EulerGenus2Request) -> Outcome:
    bundle = make_example("genus2", i=req.i)
    rep = bundle.report(tol=frac(req.tol))
    return Outcome(OK, {"euler": rep.euler, "index": rep.index})


def _arc(model: m.ArcModel) -> PolylineArc:
    return PolylineArc.from_json(model.model_dump())


def euler_rays(req: m.EulerRaysRequest) -> Outcome:
    return Outcome(OK, {"euler": euler_via_rays(_arc(req.delta), _arc(req.tau_plus), _arc(req.tau_minus))})


def alexander(req: m.AlexanderRequest) -> Outcome:
    kind = "twist_row" if req.example == "twist-row" else "bestvina"
    bundle = make_example(kind)
    tau = _arc(req.tau) if req.tau is not None else bundle.tau
    tol = frac(req.tol)
    try:
        res = alexander_series(bundle.maps[bundle.fixer], bundle.maps[bundle.mover], bundle.basepoint, tau,
                               req.window, tol, reading=req.reading, threads=req.threads)
    except OrbitNotProper as exc:
        return Outcome(INCONCLUSIVE, {"verdict": "orbit-not-proper", "detail": str(exc)})
    series = euler_from_series(res.A, res.B)
    polygon = bundle.euler(tol=tol)
    return Outcome(OK, {
        "A": res.A.to_json(),
        "B": res.B.to_json(),
        "euler_series": series,
        "euler_polygon": polygon,
        "rescaled": [rescaled_euler(res.A, res.B, n) for n in range(req.rescaled_up_to + 1)],
        "identities": {"A1": res.A(1) == 0, "antisym": res.B.is_antisymmetric()},
        "window": req.window,
    })


def braid_cmp(req: m.BraidCmpRequest) -> Outcome:
    u, v = BraidWord.parse(req.n, req.left), BraidWord.parse(req.n, req.right)
    # braid_compare(a, b) says how b sits relative to a; the command reads left-vs-right
    return Outcome(OK, {"verdict": braid_compare(v, u).cls})


def braid_circ(req: m.BraidTripleRequest) -> Outcome:
    ws = [BraidWord.parse(req.n, w) for w in req.words]
    return Outcome(OK, {"orientation": circular_compare_bn_prime(*ws)})


def mcg_circ(req: m.BraidTripleRequest) -> Outcome:
    autos = [braid_to_free_auto(BraidWord.parse(req.n, w)) for w in req.words]
    return Outcome(OK, {"orientation": mcg_circular_compare(*autos)})


COMMANDS: dict = {
    "lo-cert": (m.LoCertRequest, lo_cert),
    "cone-check": (m.ConeCheckRequest, cone_check),
    "realize": (m.RealizeRequest, realize),
    "blowup": (m.BlowUpRequest, blowup),
    "euler pair": (m.EulerPairRequest, euler_pair),
    "euler bestvina": (m.EulerBestvinaRequest, euler_bestvina),
    "euler genus2": (m.EulerGenus2Request, euler_genus2),
    "euler rays": (m.EulerRaysRequest, euler_rays),
    "alexander": (m.AlexanderRequest, alexander),
    "braid cmp": (m.BraidCmpRequest, braid_cmp),
    "braid circ": (m.BraidTripleRequest, braid_circ),
    "mcg circ": (m.BraidTripleRequest, mcg_circ),
}


def run(command: str, req) -> Outcome:
    """Dispatch one request; library errors become ``{"error": ...}`` with code 1."""
    try:
        _, handler = COMMANDS[command]
    except KeyError:
        return Outcome(ERROR, {"error": f"unknown command {command!r}"})
    try:
        return handler(req)
    except Exception as exc:  # every failure is reported, none is fatal
        return Outcome(ERROR, {"error": type(exc).__name__, "detail": str(exc)})
