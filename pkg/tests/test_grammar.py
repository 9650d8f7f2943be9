"""Text grammar for polynomials, factored elements, covers and prime
certificates. Round-trips must be the identity and encodings must be
deterministic, since report bytes are compared verbatim."""

import json

import pytest

from nodetame import ff
from nodetame.node_ring import TrivariatePoly, validate_certificate
from nodetame.cft import kummer_cover, unramified_cover
from nodetame.grammar import (
    cert_from_json,
    cert_to_json,
    encode_cover,
    encode_element,
    encode_poly,
    parse_cover,
    parse_element,
    parse_poly,
)
from nodetame.errors import ParseError, UnknownPrime


def test_poly_roundtrip(f5, f9):
    p = TrivariatePoly.make(f5, {(0, 0, 0): 1, (1, 0, 0): 3, (0, 0, 2): 2})
    assert encode_poly(p) == "1 + 3*x + 2*u^2"
    assert parse_poly(f5, encode_poly(p)) == p
    # extension coefficients are parenthesized component lists
    p9 = TrivariatePoly.make(f9, {(0, 0, 0): f9.gen(), (2, 1, 0): f9.one() + f9.gen()})
    assert encode_poly(p9) == "(0,1) + (1,1)*x^2*y"
    assert parse_poly(f9, encode_poly(p9)) == p9


def test_poly_parse_forms(f5):
    one = TrivariatePoly.const(f5, f5.one())
    assert parse_poly(f5, "1") == one
    assert parse_poly(f5, "x*y") == TrivariatePoly.make(f5, {(1, 1, 0): 1})
    assert parse_poly(f5, "4*u^3") == TrivariatePoly.make(f5, {(0, 0, 3): 4})
    # whitespace is free around '+' and '*'
    assert parse_poly(f5, " 1+ 3 * x ") == TrivariatePoly.make(f5, {(0, 0, 0): 1, (1, 0, 0): 3})


def test_poly_parse_errors(f5):
    for bad in ("", "x +", "3*z", "x^", "((1)", "1 + + x"):
        with pytest.raises(ParseError):
            parse_poly(f5, bad)


def test_element_roundtrip(cfg5):
    h = cfg5.element(
        unit={(0, 0, 0): 1, (1, 0, 0): 3, (0, 0, 2): 2},
        e_x=1, e_u=-2, primes={"P(1,3)": 1, "Q2(2)": -1},
    )
    text = encode_element(h)
    assert text == "unit[1 + 3*x + 2*u^2] * x * u^-2 * P(1,3) * Q2(2)^-1"
    assert parse_element(cfg5, text) == h
    assert encode_element(cfg5.element()) == "unit[1]"
    assert parse_element(cfg5, "unit[1]") == cfg5.element()
    assert encode_element(cfg5.u() ** -1) == "u^-1"
    assert parse_element(cfg5, "u^-1") == cfg5.u() ** -1


def test_element_roundtrip_with_denominator(cfg5):
    num = cfg5.element(unit={(0, 0, 0): 1, (0, 1, 0): 2})
    den = cfg5.element(unit={(0, 0, 0): 3, (0, 0, 1): 1})
    h = num * den ** -1
    text = encode_element(h)
    assert "^-1" in text
    assert parse_element(cfg5, text) == h


def test_element_parse_shorthands(cfg5, ledger):
    assert parse_element(cfg5, "P(2,2)") == ledger["f"]
    assert parse_element(cfg5, "u") == cfg5.u()
    assert parse_element(cfg5, "x * y") == cfg5.element(e_x=1, e_y=1)
    assert parse_element(cfg5, "unit[2] * u^3") == cfg5.element(unit=2, e_u=3)
    # pid text is normalized through the registry
    assert parse_element(cfg5, "P(2, 2)") == ledger["f"]


def test_element_parse_errors(cfg5):
    with pytest.raises(UnknownPrime):
        parse_element(cfg5, "P(9,9)")
    for bad in ("", "unit[", "x^^2", "w", "unit[x]"):
        with pytest.raises(Exception):
            parse_element(cfg5, bad)


def test_element_encoding_deterministic(cfg5):
    h1 = cfg5.element(unit=2, e_x=1, primes={"P(1,1)": 1, "P(2,3)": 2})
    h2 = cfg5.element(unit=2, e_x=1, primes={"P(2,3)": 2, "P(1,1)": 1})
    assert encode_element(h1) == encode_element(h2)


def test_cover_roundtrip():
    for c in (kummer_cover("x", 4), kummer_cover("u", 2), unramified_cover(5)):
        assert parse_cover(encode_cover(c)) == c
    with pytest.raises(ParseError):
        parse_cover("Artin(3)")
    with pytest.raises(ParseError):
        parse_cover("Kummer(x)")


def test_cert_json_roundtrip(cfg5):
    for pid in ("P(1,3)", "Q2(2)"):
        cert = cfg5.prime(pid)
        data = cert_to_json(cert)
        # survives a real serialization hop
        data = json.loads(json.dumps(data))
        back = cert_from_json(cfg5, data)
        assert back.pid == cert.pid and back.d == cert.d
        assert back.phi_x == cert.phi_x and back.defining == cert.defining
        validate_certificate(cfg5, back)


def test_cert_json_shape(cfg5):
    data = cert_to_json(cfg5.prime("P(2,2)"))
    assert sorted(data) == ["axis_mults", "d", "defining", "id", "phi_u", "phi_x", "phi_y"]
    assert data["id"] == "P(2,2)" and data["d"] == 1
    assert data["defining"] == "x + 3*u^2"
