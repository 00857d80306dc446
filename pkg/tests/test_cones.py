import random
from dataclasses import replace

import pytest

from orderlab.braid import BraidOracle
from orderlab.cones import (
    NonLOCertificate,
    NotFound,
    certificate_ball,
    check_positive_cone,
    search_non_lo_certificate,
    verify_certificate,
)
from orderlab.words import (
    FreeGroupOracle,
    GroupPresentation,
    RewriteOracle,
    enumerate_ball,
    inverse,
    seifert_presentation,
    z2_presentation,
)

SEIFERT = seifert_presentation()


@pytest.fixture(scope="module")
def seifert_cert():
    oracle = RewriteOracle.from_presentation(SEIFERT)
    base = [SEIFERT.parse(g) for g in SEIFERT.generators]
    return oracle, search_non_lo_certificate(oracle, base, 9)


def _sums(w):
    s = [0, 0]
    for g, e in w:
        s[g] += e
    return tuple(s)


def test_seifert_certificate(seifert_cert):
    oracle, cert = seifert_cert
    assert isinstance(cert, NonLOCertificate)
    assert len(cert.witnesses) == 16
    assert cert.depth <= 9
    assert verify_certificate(oracle, cert).ok


def test_seifert_witness_lengths(seifert_cert):
    # frozen from the breadth-first search, cross-checked by replaying each trace
    _, cert = seifert_cert
    lengths = {bits: len(w.factors) for bits, w in cert.witnesses.items()}
    assert lengths == {
        "0000": 9, "0001": 3, "0010": 5, "0011": 3, "0100": 4, "0101": 3, "0110": 4, "0111": 3,
        "1000": 3, "1001": 4, "1010": 3, "1011": 4, "1100": 3, "1101": 5, "1110": 3, "1111": 9,
    }


def test_search_is_deterministic(seifert_cert):
    oracle, cert = seifert_cert
    again = search_non_lo_certificate(oracle, cert.base, cert.depth)
    assert {k: w.factors for k, w in again.witnesses.items()} == {k: w.factors for k, w in cert.witnesses.items()}


def test_orderable_groups_have_no_certificate():
    z2 = z2_presentation()
    res = search_non_lo_certificate(RewriteOracle.from_presentation(z2), [z2.parse("a"), z2.parse("b")], 6)
    assert isinstance(res, NotFound) and res.depth == 6 and len(res.missing) == 4
    res = search_non_lo_certificate(FreeGroupOracle(2), [((0, 1),), ((1, 1),)], 6)
    assert isinstance(res, NotFound)


def test_wrong_sign_witness_fails(seifert_cert):
    oracle, cert = seifert_cert
    w = cert.witnesses["1111"]
    flipped = inverse(w.word[:1]) + w.word[1:]
    bad = NonLOCertificate(cert.base, {**cert.witnesses, "1111": replace(w, word=flipped)})
    rep = verify_certificate(oracle, bad)
    assert not rep.ok and rep.counterexample[0] == "1111"


def test_trace_not_reaching_identity_fails(seifert_cert):
    oracle, cert = seifert_cert
    w = cert.witnesses["0001"]
    bad = NonLOCertificate(cert.base, {**cert.witnesses, "0001": replace(w, trace=[])})
    rep = verify_certificate(oracle, bad)
    assert rep.counterexample == ("0001", "trace")


def test_z2_lex_cone_passes():
    z2 = z2_presentation()
    oracle = RewriteOracle.from_presentation(z2)
    ball = enumerate_ball(z2, oracle, 3)
    assert check_positive_cone(oracle, lambda w: _sums(w) > (0, 0), ball).ok


def test_z2_half_plane_is_not_a_cone():
    z2 = z2_presentation()
    oracle = RewriteOracle.from_presentation(z2)
    rep = check_positive_cone(oracle, lambda w: _sums(w)[0] > 0, enumerate_ball(z2, oracle, 3))
    assert rep.verdict == "fail" and rep.violation[1] == "partition"


def test_braid_dehornoy_cone_radius_3():
    p = GroupPresentation(("s1", "s2"))
    oracle = BraidOracle(3)
    assert check_positive_cone(oracle, oracle.positive, enumerate_ball(p, oracle, 3)).ok


def test_random_cones_fail_on_certificate_ball(seifert_cert):
    oracle, cert = seifert_cert
    ball = certificate_ball(cert)
    rng = random.Random(7)
    for _ in range(120):
        signs = {}

        def cone(w):
            k, ki = oracle.key(w), oracle.key(inverse(w))
            if k == ():
                return False
            if k not in signs:
                s = rng.random() < 0.5
                signs[k], signs[ki] = s, not s
            return signs[k]

        assert check_positive_cone(oracle, cone, ball).verdict != "pass"
