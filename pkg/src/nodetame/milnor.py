"""Tame symbols and K2 boundary data on the node ring.

Everything here reduces to one primitive: for a discretely valued field with
residue field k, the symbol {f, g} has boundary

    (-1)^(v(f) v(g)) * lc(f)^v(g) * lc(g)^(-v(f))  in  k^x.

Applied once at a height-one prime it lands in k(p)^x = F_{q^d}((s))^x.
Applied twice down the flag at an axis (first in u, then in the residue
coordinate) it produces the exact invariant (rho, b, lambda) that the class
field theory layer consumes.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ff
from .node_ring import FactoredElement, RingConfig, embed_at_axis, ord_at, restrict_away_from
from .series import LaurentSeries


def _tame_sign(dom, a: int, b: int):
    """(-1)^(a*b) as an element of dom. Split out so the sign convention is
    testable in isolation (and breakable on purpose by the negative controls)."""
    if (a * b) % 2:
        return dom.from_int(-1)
    return dom.from_int(1)


def tame_symbol_local(F: LaurentSeries, G: LaurentSeries):
    """Boundary of {F, G} for one valuation step; lands in the coefficient
    domain (an FqElt, or one level down in a nested series field)."""
    a, lf = F.val_lc()
    b, lg = G.val_lc()
    out = lf ** b * lg ** -a
    sign = _tame_sign(F.ring.coeff_dom, a, b)
    return out * sign


def tame_symbol_at_prime(cfg: RingConfig, f: FactoredElement, g: FactoredElement,
                         pid: str, prec: int | None = None) -> LaurentSeries:
    """The symbol boundary at a certified prime, in k(p)^x = F_{q^d}((s))^x.

    The uniformizer powers inside f^v(g) * g^(-v(f)) cancel identically, so
    the residue is computed from the prime-free factors alone; no series
    division by something vanishing at s=0 ever happens.
    """
    of = ord_at(f, pid)
    og = ord_at(g, pid)
    rf = restrict_away_from(f, pid, prec)
    rg = restrict_away_from(g, pid, prec)
    out = rf ** og * rg ** -of
    return out * out.ring.const(_tame_sign(out.ring.coeff_dom, of, og))


@dataclass(frozen=True)
class LocalInvariant:
    """Exact axis data of a symbol {f, g}: rho is the doubled-down boundary
    of the unit parts, and (b, lam) is the valuation and leading coefficient
    of the one-step boundary in the residue coordinate."""

    rho: ff.FqElt
    b: int
    lam: ff.FqElt

    def as_tuple(self) -> tuple[ff.FqElt, int, ff.FqElt]:
        return (self.rho, self.b, self.lam)

    def __repr__(self) -> str:
        return f"({ff.encode_elt(self.rho)}, {self.b}, {ff.encode_elt(self.lam)})"


def k2_axis_invariant(cfg: RingConfig, f: FactoredElement, g: FactoredElement,
                      axis: str, prec: int | None = None) -> LocalInvariant:
    """(rho, b, lambda) at an axis branch.

    With F = u^a w, G = u^b w' in the completed field: cbar is the u-boundary
    (-1)^(ab) wbar^b wbar'^(-a), a unit of F_q((t)) in the residue coordinate
    t; rho is the t-boundary of {wbar, wbar'}; (b, lambda) = val_lc(cbar).
    """
    F = embed_at_axis(f, axis, prec)
    G = embed_at_axis(g, axis, prec)
    _, wf = F.val_lc()
    _, wg = G.val_lc()
    cbar = tame_symbol_local(F, G)
    rho = tame_symbol_local(wf, wg)
    b, lam = cbar.val_lc()
    return LocalInvariant(rho=rho, b=b, lam=lam)


def axis_u_boundary(cfg: RingConfig, f: FactoredElement, g: FactoredElement,
                    axis: str, prec: int | None = None) -> LaurentSeries:
    """Just the one-step u-boundary cbar at the axis (a residue-coordinate unit)."""
    F = embed_at_axis(f, axis, prec)
    G = embed_at_axis(g, axis, prec)
    return tame_symbol_local(F, G)


def triple_tame_axis(cfg: RingConfig, f: FactoredElement, g: FactoredElement,
                     h: FactoredElement, axis: str, prec: int | None = None) -> ff.FqElt:
    """Two-step boundary of the degree-3 symbol {f, g, h} at an axis, in F_q^x.

    Writing F_i = u^(a_i) w_i, the u-boundary of {F1, F2, F3} expands
    multilinearly (using {c, c} = {c, -1} and antisymmetry) into seven
    degree-2 symbols of residue units:

        a1 {w2, w3} - a2 {w1, w3} + a3 {w1, w2}
        + a1 a2 {-1, w3} - a1 a3 {-1, w2} - a2 a3 {w1, -1}
        - a1 a2 a3 {-1, -1}

    and each term is then collapsed by the residue-coordinate boundary.
    """
    L = cfg.axis_ring(axis, prec)
    inner = L.coeff_dom
    a1, w1 = embed_at_axis(f, axis, prec).val_lc()
    a2, w2 = embed_at_axis(g, axis, prec).val_lc()
    a3, w3 = embed_at_axis(h, axis, prec).val_lc()
    neg = inner.from_int(-1)

    def term(u, v, e):
        return tame_symbol_local(u, v) ** e

    out = term(w2, w3, a1)
    out = out * term(w1, w3, -a2)
    out = out * term(w1, w2, a3)
    out = out * term(neg, w3, a1 * a2)
    out = out * term(neg, w2, -(a1 * a3))
    out = out * term(w1, neg, -(a2 * a3))
    out = out * term(neg, neg, -(a1 * a2 * a3))
    return out
