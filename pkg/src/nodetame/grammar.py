"""Text forms: elements, covers, certificates.

The element grammar is a product of factors separated by ' * ':

    unit[1 + 3*x + 2*u^2] * x * u^-2 * P(1,3) * Q2(2)^-1

Factors are unit[<poly>] (a trivariate polynomial with invertible constant
term), the coordinates x, y, u, and registered primes P(<a>,<c>) or
Q2(<gamma>), each with an optional integer exponent. Printing is
deterministic: unit numerator, unit denominator (as unit[..]^-1), x, y, u,
then primes by id; polynomial terms ride in degree order; coefficients are
canonical digits (comma lists for extension fields). parse(encode(e))
reproduces e on the nose.
"""

from __future__ import annotations

from . import ff
from .errors import ParseError, UnknownPrime
from .node_ring import FactoredElement, PrimeCertificate, RingConfig, TrivariatePoly
from .series import SeriesRing, encode_series, parse_series

_VARS = ("x", "y", "u")


def _enc_coeff(c: ff.FqElt) -> str:
    text = ff.encode_elt(c)
    return f"({text})" if c.spec.e > 1 else text


def encode_poly(poly: TrivariatePoly) -> str:
    if not poly.terms:
        return "0"
    parts = []
    one = poly.spec.one()
    for (i, j, k), c in poly.terms:
        mono = []
        for name, e in (("x", i), ("y", j), ("u", k)):
            if e == 1:
                mono.append(name)
            elif e:
                mono.append(f"{name}^{e}")
        if not mono:
            parts.append(_enc_coeff(c))
        elif c == one:
            parts.append("*".join(mono))
        else:
            parts.append("*".join([_enc_coeff(c)] + mono))
    return " + ".join(parts)


def parse_poly(spec: ff.FieldSpec, text: str) -> TrivariatePoly:
    text = text.strip()
    if text == "0":
        return TrivariatePoly.make(spec, {})
    acc: dict = {}
    for raw in text.split("+"):
        term = raw.strip()
        if not term:
            raise ParseError(f"empty term in polynomial {text!r}")
        coeff = spec.one()
        exps = {"x": 0, "y": 0, "u": 0}
        for tok in _split_outside(term, "*"):
            tok = tok.strip()
            if not tok:
                raise ParseError(f"empty factor in term {term!r}")
            if tok[0] in "0123456789(":
                try:
                    coeff = coeff * ff.parse_elt(spec, tok.strip("()"))
                except Exception as exc:
                    raise ParseError(f"bad coefficient {tok!r}") from exc
                continue
            name, caret, etext = tok.partition("^")
            if name not in _VARS:
                raise ParseError(f"unknown variable {name!r} in {term!r}")
            try:
                e = int(etext) if caret else 1
            except ValueError as exc:
                raise ParseError(f"bad exponent in {tok!r}") from exc
            if e < 0:
                raise ParseError("polynomial exponents must be nonnegative")
            exps[name] += e
        key = (exps["x"], exps["y"], exps["u"])
        acc[key] = acc[key] + coeff if key in acc else coeff
    return TrivariatePoly.make(spec, acc)


def _split_outside(text: str, sep: str) -> list[str]:
    """Split on sep at bracket depth zero (respects [] and ())."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced brackets in {text!r}")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise ParseError(f"unbalanced brackets in {text!r}")
    parts.append("".join(cur))
    return parts


def encode_element(f: FactoredElement) -> str:
    spec = f.config.spec
    one = TrivariatePoly.const(spec, 1)
    parts = []
    if f.unit_num != one:
        parts.append(f"unit[{encode_poly(f.unit_num)}]")
    if f.unit_den != one:
        parts.append(f"unit[{encode_poly(f.unit_den)}]^-1")
    for name, e in (("x", f.e_x), ("y", f.e_y), ("u", f.e_u)):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    for pid, e in f.prime_exps:
        parts.append(pid if e == 1 else f"{pid}^{e}")
    if not parts:
        return "unit[1]"
    return " * ".join(parts)


def parse_element(cfg: RingConfig, text: str) -> FactoredElement:
    spec = cfg.spec
    num = TrivariatePoly.const(spec, 1)
    den = TrivariatePoly.const(spec, 1)
    exps = {"x": 0, "y": 0, "u": 0}
    primes: dict = {}
    for raw in _split_outside(text, "*"):
        tok = raw.strip()
        if not tok:
            raise ParseError(f"empty factor in {text!r}")
        # split off a trailing ^k that sits outside brackets
        e = 1
        body = tok
        if "^" in tok:
            head, _, tail = tok.rpartition("^")
            if head.count("[") == head.count("]") and head.count("(") == head.count(")"):
                try:
                    e = int(tail)
                except ValueError as exc:
                    raise ParseError(f"bad exponent in {tok!r}") from exc
                body = head.strip()
        if body.startswith("unit[") and body.endswith("]"):
            poly = parse_poly(spec, body[5:-1])
            if e >= 0:
                num = num * poly ** e
            else:
                den = den * poly ** -e
        elif body in _VARS:
            exps[body] += e
        elif body.startswith(("P(", "Q2(")) and body.endswith(")"):
            pid = _canonical_pid(cfg, body)
            primes[pid] = primes.get(pid, 0) + e
        else:
            raise ParseError(f"unrecognized factor {body!r}")
    f = cfg.element(unit=num, e_x=exps["x"], e_y=exps["y"], e_u=exps["u"], primes=primes)
    if den != TrivariatePoly.const(spec, 1):
        f = FactoredElement(cfg, f.unit_num, den, f.e_x, f.e_y, f.e_u, f.prime_exps)
    return f


def _canonical_pid(cfg: RingConfig, body: str) -> str:
    """Normalize a prime factor to its registered id (canonical digits)."""
    inner = body[body.index("(") + 1:-1]
    if body.startswith("P("):
        bits = [b.strip() for b in inner.split(",")]
        if len(bits) < 2:
            raise ParseError(f"P needs a shift and a constant: {body!r}")
        try:
            a = int(bits[0])
        except ValueError as exc:
            raise ParseError(f"bad shift in {body!r}") from exc
        c = ff.parse_elt(cfg.spec, ",".join(bits[1:]))
        pid = f"P({a},{ff.encode_elt(c)})"
    else:
        gamma = ff.parse_elt(cfg.spec, inner)
        pid = f"Q2({ff.encode_elt(gamma)})"
    cfg.prime(pid)
    return pid


# ---------------------------------------------------------------------------
# covers


def encode_cover(cover) -> str:
    return cover.label


def parse_cover(text: str):
    from .cft import kummer_cover, unramified_cover

    body = text.strip()
    if body.startswith("Kummer(") and body.endswith(")"):
        inner = body[7:-1]
        h, _, ntext = inner.partition(",")
        try:
            return kummer_cover(h.strip(), int(ntext))
        except ValueError as exc:
            raise ParseError(f"bad cover level in {text!r}") from exc
    if body.startswith("Unramified(") and body.endswith(")"):
        try:
            return unramified_cover(int(body[11:-1]))
        except ValueError as exc:
            raise ParseError(f"bad cover degree in {text!r}") from exc
    raise ParseError(f"unrecognized cover {text!r}")


# ---------------------------------------------------------------------------
# certificates as JSON-ready dicts


def cert_to_json(cert: PrimeCertificate) -> dict:
    return {
        "id": cert.pid,
        "d": cert.d,
        "phi_u": encode_series(cert.phi_u),
        "phi_x": encode_series(cert.phi_x),
        "phi_y": encode_series(cert.phi_y),
        "defining": encode_poly(cert.defining),
        "axis_mults": list(cert.axis_mults),
    }


def cert_from_json(cfg: RingConfig, data: dict) -> PrimeCertificate:
    try:
        d = int(data["d"])
        pid = str(data["id"])
        mults = tuple(int(m) for m in data["axis_mults"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed certificate: {exc}") from exc
    if len(mults) != 2:
        raise ParseError("axis_mults must have exactly two entries")
    ext, _ = ff.ensure_extension(cfg.spec, d) if d > 1 else (cfg.spec, None)
    ring = SeriesRing(ext, "s", cfg.precision)
    try:
        return PrimeCertificate(
            pid=pid,
            d=d,
            ext=ext,
            phi_u=parse_series(ring, str(data["phi_u"])),
            phi_x=parse_series(ring, str(data["phi_x"])),
            phi_y=parse_series(ring, str(data["phi_y"])),
            defining=parse_poly(cfg.spec, str(data["defining"])),
            axis_mults=mults,  # type: ignore[arg-type]
        )
    except KeyError as exc:
        raise ParseError(f"malformed certificate: missing {exc}") from exc
