"""Degree-one class field theory on the node ring, at finite level.

A level is a pair (n, d_frob) with n | M and n | q-1: the group
G = mu_n x Z/d_frob receives, from every place of the boundary divisor
(certified primes plus the two axis branches), a local character of the
symbol boundary. The product formula says the product of the Kummer values
is 1 in mu_n and the Frobenius contributions sum to zero, exactly, for
every pair {f, g}.

Axis characters for the named coordinate covers are written with explicit
orientation constants; flipping either constant is the canonical way to
break the theory on purpose, and the tests do exactly that.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ff
from .errors import SpecMismatch, TamenessViolated
from .milnor import (
    LocalInvariant,
    axis_u_boundary,
    k2_axis_invariant,
    tame_symbol_at_prime,
    tame_symbol_local,
    triple_tame_axis,
)
from .node_ring import AXES, FactoredElement, RingConfig, ord_at, restrict
from .series import LaurentSeries, nth_root
from .errors import NotAnNthPower

# Sign of the exponent on the residue-coordinate pairing [cbar, t]:
# +1 on the X branch (residue coordinate y), -1 on the Y branch (residue
# coordinate x). The u-cover runs through the degree-3 boundary instead and
# carries its own uniform orientation.
AXIS_ORIENT = {"X": +1, "Y": -1}
U_COVER_ORIENT = -1

COVER_NAMES = ("x", "y", "u")


@dataclass(frozen=True)
class CoverSpec:
    """A cyclic cover at fixed level: either the Kummer cover obtained by
    adjoining an n-th root of one coordinate, or the unramified constant
    field extension of degree d."""

    kind: str  # "kummer" | "unramified"
    h: str     # coordinate name for kummer covers, "" otherwise
    n: int     # kummer level, or the degree d for unramified

    def __post_init__(self) -> None:
        if self.kind == "kummer":
            if self.h not in COVER_NAMES:
                raise SpecMismatch(f"kummer cover coordinate must be one of {COVER_NAMES}")
        elif self.kind == "unramified":
            if self.h:
                raise SpecMismatch("unramified covers take no coordinate")
        else:
            raise SpecMismatch(f"unknown cover kind {self.kind!r}")
        if self.n < 1:
            raise SpecMismatch("cover level must be positive")

    @property
    def label(self) -> str:
        if self.kind == "kummer":
            return f"Kummer({self.h},{self.n})"
        return f"Unramified({self.n})"

    def __repr__(self) -> str:
        return self.label


def kummer_cover(h: str, n: int) -> CoverSpec:
    return CoverSpec("kummer", h, n)


def unramified_cover(d: int) -> CoverSpec:
    return CoverSpec("unramified", "", d)


def check_level(cfg: RingConfig, n: int) -> None:
    if n < 1:
        raise TamenessViolated("level must be positive")
    if cfg.M % n != 0:
        raise TamenessViolated(f"level n={n} must divide M={cfg.M}")
    if (cfg.spec.q - 1) % n != 0:
        raise TamenessViolated(f"level n={n} must divide q-1={cfg.spec.q - 1}")


@dataclass(frozen=True)
class GaloisLevelN:
    """The finite quotient mu_n x Z/d_frob that the level-(n, d) characters
    land in, with mu_n realized inside F_q^x."""

    spec: ff.FieldSpec
    n: int
    d_frob: int

    @property
    def zeta(self) -> ff.FqElt:
        return self.spec.generator ** ((self.spec.q - 1) // self.n)

    @property
    def mu_n(self) -> tuple:
        return ff.roots_of_unity(self.spec, self.n)

    def order(self) -> int:
        return self.n * self.d_frob

    def kummer_index(self, z: ff.FqElt) -> int:
        """Discrete log of a mu_n value against the canonical zeta."""
        if z ** self.n != self.spec.one():
            raise SpecMismatch("value is not an n-th root of unity")
        if self.n == 1:
            return 0
        step = (self.spec.q - 1) // self.n
        return (ff.dlog(z) // step) % self.n

    def __repr__(self) -> str:
        return f"mu_{self.n} x Z/{self.d_frob}"


# ---------------------------------------------------------------------------
# boundary data


@dataclass(frozen=True)
class BoundaryData:
    """The full symbol boundary of one pair {f, g}: one residue-field unit
    per supporting prime, one (rho, b, lambda) per axis, plus the raw axis
    u-boundaries (needed by the coordinate pairings)."""

    cfg: RingConfig
    f: FactoredElement
    g: FactoredElement
    prime_parts: tuple  # ((pid, LaurentSeries), ...)
    axis_parts: tuple   # ((axis, LocalInvariant), ...)
    cbars: tuple        # ((axis, LaurentSeries), ...)

    def prime_part(self, pid: str) -> LaurentSeries:
        for q, a in self.prime_parts:
            if q == pid:
                return a
        raise SpecMismatch(f"no boundary stored at {pid!r}")

    def axis_invariant(self, axis: str) -> LocalInvariant:
        for ax, inv in self.axis_parts:
            if ax == axis:
                return inv
        raise SpecMismatch(f"no boundary stored at axis {axis!r}")

    def cbar(self, axis: str) -> LaurentSeries:
        for ax, c in self.cbars:
            if ax == axis:
                return c
        raise SpecMismatch(f"no boundary stored at axis {axis!r}")

    def places(self) -> tuple:
        return tuple(pid for pid, _ in self.prime_parts) + AXES

    def level(self, n: int) -> dict:
        """Level-n view: every component reduced to integers mod n (valuation
        classes and discrete-log classes), ready for serialization."""
        check_level(self.cfg, n)
        out: dict = {}
        for pid, a in self.prime_parts:
            v, lc = a.val_lc()
            ext = a.ring.coeff_dom
            out[pid] = {"v": v % n, "lc": ff.dlog(lc, ext.generator) % n}
        for ax, inv in self.axis_parts:
            g = self.cfg.spec.generator
            out[ax] = {
                "rho": ff.dlog(inv.rho, g) % n,
                "b": inv.b % n,
                "lam": ff.dlog(inv.lam, g) % n,
            }
        return out


def boundary_map(cfg: RingConfig, f: FactoredElement, g: FactoredElement,
                 prec: int | None = None) -> BoundaryData:
    """Boundary of the symbol {f, g} at every place it can see: the primes
    in the supports of f and g, and both axis branches (always)."""
    pids = sorted(set(f.supp_primes()) | set(g.supp_primes()))
    primes = tuple((pid, tame_symbol_at_prime(cfg, f, g, pid, prec)) for pid in pids)
    axes = tuple((ax, k2_axis_invariant(cfg, f, g, ax, prec)) for ax in AXES)
    cbars = tuple((ax, axis_u_boundary(cfg, f, g, ax, prec)) for ax in AXES)
    return BoundaryData(cfg, f, g, primes, axes, cbars)


# ---------------------------------------------------------------------------
# local characters


def _cover_element(cfg: RingConfig, name: str) -> FactoredElement:
    return {"x": cfg.x(), "y": cfg.y(), "u": cfg.u()}[name]


def kummer_character(cfg: RingConfig, bd: BoundaryData, h: FactoredElement,
                     n: int, place: str, prec: int | None = None) -> ff.FqElt:
    """Value at one place of the level-n Kummer character attached to a
    general element h, evaluated on the boundary of bd's pair.

    At a prime p: pair the boundary unit a with h|_p one step down and push
    the result into mu_n by norm and (q-1)/n power. At an axis: the value is
    the degree-3 boundary of {f, g, h} raised to the same power, with the
    uniform orientation."""
    check_level(cfg, n)
    e = (cfg.spec.q - 1) // n
    if place in AXES:
        t = triple_tame_axis(cfg, bd.f, bd.g, h, place, prec)
        return t ** (U_COVER_ORIENT * e)
    a = bd.prime_part(place)
    hp = restrict(h, place, prec)
    t = tame_symbol_local(a, hp)
    return ff.norm(t, cfg.spec) ** e if t.spec != cfg.spec else t ** e


def local_character(cfg: RingConfig, bd: BoundaryData, cover: CoverSpec,
                    place: str, prec: int | None = None):
    """Local value of a named cover's character on the boundary of one pair.

    Kummer covers return an element of mu_n inside F_q^x; the unramified
    cover returns the integer Frobenius contribution (exact, not reduced).
    """
    if cover.kind == "unramified":
        if place in AXES:
            return bd.axis_invariant(place).b
        a = bd.prime_part(place)
        v, _ = a.val_lc()
        return cfg.prime(place).d * v
    n = cover.n
    check_level(cfg, n)
    e = (cfg.spec.q - 1) // n
    if place not in AXES:
        return kummer_character(cfg, bd, _cover_element(cfg, cover.h), n, place, prec)
    if cover.h == "u":
        t = triple_tame_axis(cfg, bd.f, bd.g, _cover_element(cfg, "u"), place, prec)
        return t ** (U_COVER_ORIENT * e)
    pairing = tame_symbol_local(bd.cbar(place), cfg.residue_ring(place, prec).gen())
    sign = AXIS_ORIENT[place] if cover.h == "y" else -AXIS_ORIENT[place]
    return pairing ** (sign * e)


# ---------------------------------------------------------------------------
# the reciprocity statement


def product_formula(cfg: RingConfig, f: FactoredElement, g: FactoredElement,
                    n: int, d_frob: int = 1, prec: int | None = None) -> dict:
    """Evaluate every level-(n, d_frob) cover character at every place of
    the boundary of {f, g} and check the two global identities: Kummer
    values multiply to 1, Frobenius contributions sum to 0 in Z."""
    check_level(cfg, n)
    if d_frob < 1:
        raise SpecMismatch("d_frob must be >= 1")
    bd = boundary_map(cfg, f, g, prec)
    places = bd.places()
    covers = [kummer_cover(h, n) for h in COVER_NAMES] + [unramified_cover(d_frob)]
    report: dict = {"places": list(places), "covers": {}, "ok": True}
    one = cfg.spec.one()
    for cover in covers:
        vals = {place: local_character(cfg, bd, cover, place, prec) for place in places}
        if cover.kind == "kummer":
            prod = one
            for v in vals.values():
                prod = prod * v
            ok = prod == one
            report["covers"][cover.label] = {
                "values": {p: ff.encode_elt(v) for p, v in vals.items()},
                "product": ff.encode_elt(prod),
                "ok": ok,
            }
        else:
            total = sum(vals.values())
            ok = total == 0 and total % d_frob == 0
            report["covers"][cover.label] = {
                "values": {p: int(v) for p, v in vals.items()},
                "sum": int(total),
                "ok": ok,
            }
        report["ok"] = report["ok"] and ok
    return report


# ---------------------------------------------------------------------------
# cover identification


def is_nth_power(cfg: RingConfig, h: FactoredElement, n: int) -> bool:
    """Whether h is an n-th power in the unit group of the total fraction
    field, up to the defining relation. The one-unit part is always an n-th
    power in the tame range, so only the exponents and the leading constant
    matter: the x and y exponents must agree mod n, the u exponent must be
    congruent to 0 once the relation is used, every prime exponent must be
    divisible, and the constant term must sit in (F_q^x)^n."""
    check_level(cfg, n)
    if (h.e_x - h.e_y) % n != 0:
        return False
    if (h.e_u + cfg.M * h.e_x) % n != 0:
        return False
    for _, e in h.prime_exps:
        if e % n != 0:
            return False
    c = h.unit_num.constant_term() * h.unit_den.constant_term().inv()
    return c ** ((cfg.spec.q - 1) // n) == cfg.spec.one()


def same_kummer_cover(cfg: RingConfig, h1: FactoredElement, h2: FactoredElement, n: int) -> bool:
    """Two elements cut out the same degree-n cyclic cover when their ratio
    or their product is an n-th power."""
    return is_nth_power(cfg, h1 * h2 ** -1, n) or is_nth_power(cfg, h1 * h2, n)


# ---------------------------------------------------------------------------
# structural models


def prop21_check(cfg: RingConfig, n: int) -> dict:
    """Exhaustive constant-pair patterns over F_q^x.

    For every unit xi: the invariant of {xi, x} has rho pattern
    (xi^-1 at X, xi at Y) with b = 0 and lambda = 1; {xi, y} mirrors it;
    {xi, u} is diagonal with lambda = xi on both branches; and the u-cover
    axis values of all four constant pairs cancel across the two branches.
    The lambda classes of {xi, u} generate a cyclic group of order exactly
    n in F_q^x / (F_q^x)^n at level n.
    """
    check_level(cfg, n)
    spec = cfg.spec
    one = spec.one()
    x, y, u = cfg.x(), cfg.y(), cfg.u()
    xy = cfg.element(e_x=1, e_y=1)
    out = {
        "rho_antidiagonal_x": True,
        "rho_antidiagonal_y": True,
        "lambda_diagonal_u": True,
        "u_cover_cancellation": True,
        "u_cover_separates": True,
        "cyclic_order": 0,
    }
    e = (spec.q - 1) // n
    lams = []
    for xi_raw in spec.elements():
        if xi_raw.is_zero():
            continue
        xi = cfg.const(xi_raw)
        ix = (k2_axis_invariant(cfg, xi, x, "X"), k2_axis_invariant(cfg, xi, x, "Y"))
        if not (ix[0].rho == xi_raw ** -1 and ix[1].rho == xi_raw
                and ix[0].b == ix[1].b == 0 and ix[0].lam == ix[1].lam == one):
            out["rho_antidiagonal_x"] = False
        iy = (k2_axis_invariant(cfg, xi, y, "X"), k2_axis_invariant(cfg, xi, y, "Y"))
        if not (iy[0].rho == xi_raw and iy[1].rho == xi_raw ** -1
                and iy[0].b == iy[1].b == 0 and iy[0].lam == iy[1].lam == one):
            out["rho_antidiagonal_y"] = False
        iu = (k2_axis_invariant(cfg, xi, u, "X"), k2_axis_invariant(cfg, xi, u, "Y"))
        if not (iu[0].rho == iu[1].rho == one and iu[0].b == iu[1].b == 0
                and iu[0].lam == iu[1].lam == xi_raw):
            out["lambda_diagonal_u"] = False
        lams.append(iu[0].lam)
        for other in (x, y, u, xy):
            tx = triple_tame_axis(cfg, xi, other, u, "X") ** (U_COVER_ORIENT * e)
            ty = triple_tame_axis(cfg, xi, other, u, "Y") ** (U_COVER_ORIENT * e)
            if tx * ty != one:
                out["u_cover_cancellation"] = False
    # the u-cover value tells {g, x} and {g, u} apart for g a generator
    if n > 1:
        gen = cfg.const(spec.generator)
        tx = triple_tame_axis(cfg, gen, x, u, "X") ** (U_COVER_ORIENT * e)
        tu = triple_tame_axis(cfg, gen, u, u, "X") ** (U_COVER_ORIENT * e)
        out["u_cover_separates"] = tx != tu
    # the level-n image of the {xi, u} lambda classes inside mu_n
    gln = GaloisLevelN(spec, n, 1)
    image = {gln.kummer_index(lam ** e) for lam in lams}
    out["cyclic_order"] = len(image)
    out["ok"] = (out["rho_antidiagonal_x"] and out["rho_antidiagonal_y"]
                 and out["lambda_diagonal_u"] and out["u_cover_cancellation"]
                 and out["u_cover_separates"] and out["cyclic_order"] == n)
    return out


def thm41_model(cfg: RingConfig, n: int, d_frob: int, sample_pids: tuple = ()) -> dict:
    """Finite model of the level-(n, d_frob) abelianized structure.

    Checks that mu_n x Z/d_frob has the right shape, that the x- and
    y-covers agree as covers (their product is the M-th power of u), and
    that the splitting pattern of the x-cover at sample primes matches the
    n-th root test in the residue field. The inertia of the u-cover at the
    node itself is reported unresolved: nothing at finite level pins it.
    """
    check_level(cfg, n)
    if d_frob < 1:
        raise SpecMismatch("d_frob must be >= 1")
    spec = cfg.spec
    gln = GaloisLevelN(spec, n, d_frob)
    mu = gln.mu_n
    shape_ok = len(mu) == n and len(set(mu)) == n
    if n > 1:
        shape_ok = shape_ok and ff.element_order(gln.zeta) == n
    covers_match = same_kummer_cover(cfg, cfg.x(), cfg.y(), n)
    samples = {}
    for pid in sample_pids:
        cert = cfg.prime(pid)
        hx = restrict(cfg.x(), pid)
        v, _ = hx.val_lc()
        predicted = "unramified" if v % n == 0 else "ramified"
        try:
            nth_root(hx, n)
            observed = "split"
        except NotAnNthPower:
            observed = "unramified" if v % n == 0 else "ramified"
        agree = (predicted == "ramified" and observed == "ramified") or (
            predicted == "unramified" and observed in ("split", "unramified"))
        samples[pid] = {"v": v, "predicted": predicted, "observed": observed, "ok": agree}
    out = {
        "group": repr(gln),
        "order": gln.order(),
        "shape_ok": bool(shape_ok),
        "xy_covers_agree": covers_match,
        "samples": samples,
        "u_cover_inertia": "unresolved",
    }
    out["ok"] = out["shape_ok"] and covers_match and all(s["ok"] for s in samples.values())
    return out
