"""The node ring R = F_q[[u, x, y]] / (x*y - u^M) and its height-one primes.

Elements are kept in factored form: a unit (fraction of trivariate
polynomials with invertible constant terms) times monomials in x, y, u times
powers of certified primes. Orders at every place are then exact integer
bookkeeping, and restriction to a prime's residue field k(p) = F_{q^d}((s))
is polynomial evaluation along the prime's curve parametrization.

The two axis branches get uniformizer u after completing: x maps to
u^M * y^(-1) at X and y maps to u^M * x^(-1) at Y, so the completed fields
are F_q((y))((u)) and F_q((x))((u)).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from . import ff
from .errors import (
    CertificateInvalid,
    NotAUnit,
    NotAUnitAtPrime,
    SpecMismatch,
    UnknownPrime,
)
from .series import DEFAULT_PREC, LaurentSeries, SeriesRing, _coeff_nth_root, _z3

AXES = ("X", "Y")


@dataclass(frozen=True)
class TrivariatePoly:
    """Polynomial in x, y, u over F_q; keys are (deg_x, deg_y, deg_u)."""

    spec: ff.FieldSpec
    terms: tuple  # sorted tuple of ((i, j, k), FqElt), zero coeffs dropped

    @staticmethod
    def make(spec: ff.FieldSpec, mapping) -> "TrivariatePoly":
        items = []
        for key, c in mapping.items():
            if not isinstance(c, ff.FqElt):
                c = spec.from_int(c)
            if not c.is_zero():
                items.append(((int(key[0]), int(key[1]), int(key[2])), c))
        items.sort(key=lambda t: (sum(t[0]), t[0]))
        return TrivariatePoly(spec, tuple(items))

    @staticmethod
    def const(spec: ff.FieldSpec, c) -> "TrivariatePoly":
        return TrivariatePoly.make(spec, {(0, 0, 0): c})

    def constant_term(self) -> ff.FqElt:
        for key, c in self.terms:
            if key == (0, 0, 0):
                return c
        return self.spec.zero()

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "TrivariatePoly") -> "TrivariatePoly":
        acc = {k: c for k, c in self.terms}
        for k, c in other.terms:
            acc[k] = acc[k] + c if k in acc else c
        return TrivariatePoly.make(self.spec, acc)

    def __neg__(self) -> "TrivariatePoly":
        return TrivariatePoly(self.spec, tuple((k, -c) for k, c in self.terms))

    def __mul__(self, other: "TrivariatePoly") -> "TrivariatePoly":
        acc: dict = {}
        for (i1, j1, k1), c1 in self.terms:
            for (i2, j2, k2), c2 in other.terms:
                key = (i1 + i2, j1 + j2, k1 + k2)
                prod = c1 * c2
                acc[key] = acc[key] + prod if key in acc else prod
        return TrivariatePoly.make(self.spec, acc)

    def __pow__(self, n: int) -> "TrivariatePoly":
        if n < 0:
            raise NotAUnit("negative power of a bare polynomial")
        acc = TrivariatePoly.const(self.spec, 1)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    def __repr__(self) -> str:
        from .grammar import encode_poly

        return encode_poly(self)


@dataclass(frozen=True)
class PrimeCertificate:
    """A height-one prime away from the axes, presented by a curve.

    phi_* give the parametrization R -> F_{q^d}[[s]] (as series over ext);
    defining is an element of R generating the prime, with declared orders
    axis_mults = (ord at X, ord at Y).
    """

    pid: str
    d: int
    ext: ff.FieldSpec
    phi_u: LaurentSeries
    phi_x: LaurentSeries
    phi_y: LaurentSeries
    defining: TrivariatePoly
    axis_mults: tuple[int, int]

    def __repr__(self) -> str:
        return f"<prime {self.pid} (d={self.d})>"


class RingConfig:
    """Fixed choice of F_q, the exponent M, precision, and the prime registry."""

    def __init__(self, spec: ff.FieldSpec, M: int, precision: int = DEFAULT_PREC):
        if M < 2:
            raise SpecMismatch("M must be >= 2")
        if (spec.q - 1) % M != 0:
            raise SpecMismatch(f"M={M} must divide q-1={spec.q - 1}")
        self.spec = spec
        self.M = M
        self.precision = precision
        self.primes: dict[str, PrimeCertificate] = {}
        self._axis_rings: dict = {}
        self._prime_rings: dict = {}
        self._pow_cache: dict = {}
        self._embed_cache: dict = {}
        self._restrict_cache: dict = {}

    @cached_property
    def generator(self) -> ff.FqElt:
        return self.spec.generator

    def axis_ring(self, axis: str, prec: int | None = None) -> SeriesRing:
        """The completed field at an axis: F_q((y))((u)) at X, F_q((x))((u)) at Y."""
        if axis not in AXES:
            raise SpecMismatch(f"axis must be X or Y, got {axis!r}")
        prec = prec or self.precision
        key = (axis, prec)
        if key not in self._axis_rings:
            inner = SeriesRing(self.spec, "y" if axis == "X" else "x", prec)
            self._axis_rings[key] = SeriesRing(inner, "u", prec)
        return self._axis_rings[key]

    def residue_ring(self, axis: str, prec: int | None = None) -> SeriesRing:
        return self.axis_ring(axis, prec).coeff_dom

    def prime_ring(self, pid: str, prec: int | None = None) -> SeriesRing:
        cert = self.prime(pid)
        prec = prec or self.precision
        key = (pid, prec)
        if key not in self._prime_rings:
            self._prime_rings[key] = SeriesRing(cert.ext, "s", prec)
        return self._prime_rings[key]

    def prime(self, pid: str) -> PrimeCertificate:
        if pid not in self.primes:
            raise UnknownPrime(f"prime {pid!r} is not registered")
        return self.primes[pid]

    def register_prime(self, cert: PrimeCertificate, validate: bool = True) -> PrimeCertificate:
        if validate:
            validate_certificate(self, cert)
        if cert.pid in self.primes:
            raise SpecMismatch(f"prime id {cert.pid!r} already registered")
        self.primes[cert.pid] = cert
        return cert

    def install_standard_primes(self, quadratics: bool = True) -> None:
        """Register the full built-in pool: x - c*u^a for 0 < a < M, c != 0,
        plus the degree-2 primes x - gamma*y for every non-square gamma."""
        for a in range(1, self.M):
            for c in self.spec.elements():
                if c.is_zero():
                    continue
                self.register_prime(axis_shift_prime(self, a, c))
        if quadratics and self.M % 2 == 0:
            half = (self.spec.q - 1) // 2
            for gamma in self.spec.elements():
                if gamma.is_zero():
                    continue
                if gamma ** half != self.spec.one():
                    self.register_prime(quadratic_prime(self, gamma))

    # -- element constructors ------------------------------------------------

    def element(self, unit=1, e_x: int = 0, e_y: int = 0, e_u: int = 0,
                primes: dict | None = None) -> "FactoredElement":
        if isinstance(unit, TrivariatePoly):
            num = unit
        elif isinstance(unit, dict):
            num = TrivariatePoly.make(self.spec, unit)
        elif isinstance(unit, ff.FqElt):
            num = TrivariatePoly.const(self.spec, unit)
        else:
            num = TrivariatePoly.const(self.spec, self.spec.from_int(unit))
        den = TrivariatePoly.const(self.spec, 1)
        pe = tuple(sorted((pid, int(e)) for pid, e in (primes or {}).items() if e != 0))
        for pid, _ in pe:
            self.prime(pid)
        return FactoredElement(self, num, den, e_x, e_y, e_u, pe)

    def x(self) -> "FactoredElement":
        return self.element(e_x=1)

    def y(self) -> "FactoredElement":
        return self.element(e_y=1)

    def u(self) -> "FactoredElement":
        return self.element(e_u=1)

    def const(self, c) -> "FactoredElement":
        return self.element(unit=c)

    def prime_elt(self, pid: str) -> "FactoredElement":
        """The defining element of a registered prime, in factored form."""
        return self.element(primes={pid: 1})

    def __repr__(self) -> str:
        return f"RingConfig(q={self.spec.q}, M={self.M}, primes={len(self.primes)})"


@dataclass(frozen=True)
class FactoredElement:
    """unit_num/unit_den * x^e_x * y^e_y * u^e_u * prod(prime^exp)."""

    config: RingConfig
    unit_num: TrivariatePoly
    unit_den: TrivariatePoly
    e_x: int
    e_y: int
    e_u: int
    prime_exps: tuple  # sorted tuple of (pid, nonzero int)

    def __post_init__(self) -> None:
        if self.unit_num.constant_term().is_zero() or self.unit_den.constant_term().is_zero():
            raise NotAUnit("unit part must have an invertible constant term")

    def __hash__(self) -> int:
        return hash((self.unit_num.terms, self.unit_den.terms,
                     self.e_x, self.e_y, self.e_u, self.prime_exps))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FactoredElement)
            and other.config is self.config
            and other.unit_num == self.unit_num
            and other.unit_den == self.unit_den
            and (other.e_x, other.e_y, other.e_u) == (self.e_x, self.e_y, self.e_u)
            and other.prime_exps == self.prime_exps
        )

    def prime_exp(self, pid: str) -> int:
        for q, e in self.prime_exps:
            if q == pid:
                return e
        return 0

    def supp_primes(self) -> tuple[str, ...]:
        return tuple(pid for pid, _ in self.prime_exps)

    def __mul__(self, other: "FactoredElement") -> "FactoredElement":
        if other.config is not self.config:
            raise SpecMismatch("elements from different ring configs")
        acc = {pid: e for pid, e in self.prime_exps}
        for pid, e in other.prime_exps:
            acc[pid] = acc.get(pid, 0) + e
        pe = tuple(sorted((pid, e) for pid, e in acc.items() if e != 0))
        return FactoredElement(
            self.config,
            self.unit_num * other.unit_num,
            self.unit_den * other.unit_den,
            self.e_x + other.e_x,
            self.e_y + other.e_y,
            self.e_u + other.e_u,
            pe,
        )

    def __pow__(self, n: int) -> "FactoredElement":
        if n == 0:
            return self.config.element()
        num, den = (self.unit_num, self.unit_den) if n > 0 else (self.unit_den, self.unit_num)
        k = abs(n)
        return FactoredElement(
            self.config,
            num ** k,
            den ** k,
            self.e_x * n,
            self.e_y * n,
            self.e_u * n,
            tuple((pid, e * n) for pid, e in self.prime_exps),
        )

    def inverse(self) -> "FactoredElement":
        return self ** -1

    def __repr__(self) -> str:
        from .grammar import encode_element

        return encode_element(self)


# ---------------------------------------------------------------------------
# orders


def ord_at(f: FactoredElement, place: str) -> int:
    """Order of f at an axis ("X"/"Y") or at a registered prime id.

    The unit part contributes nothing anywhere; x has order M at X because
    x = u^M * y^(-1) there, and a prime's defining element carries its
    declared axis multiplicities.
    """
    cfg = f.config
    if place == "X":
        base = cfg.M * f.e_x + f.e_u
        return base + sum(e * cfg.prime(pid).axis_mults[0] for pid, e in f.prime_exps)
    if place == "Y":
        base = cfg.M * f.e_y + f.e_u
        return base + sum(e * cfg.prime(pid).axis_mults[1] for pid, e in f.prime_exps)
    cfg.prime(place)
    return f.prime_exp(place)


# ---------------------------------------------------------------------------
# completion at the axes


def _eval_poly_at_axis(cfg: RingConfig, poly: TrivariatePoly, axis: str, L: SeriesRing) -> LaurentSeries:
    # x^i y^j u^k -> u^(M*i + k) * y^(j - i) at X; mirror at Y
    inner: SeriesRing = L.coeff_dom
    M = cfg.M
    groups: dict[int, dict[int, ff.FqElt]] = {}
    for (i, j, k), c in poly.terms:
        if axis == "X":
            m, r = M * i + k, j - i
        else:
            m, r = M * j + k, i - j
        row = groups.setdefault(m, {})
        row[r] = row[r] + c if r in row else c
    if not groups:
        return L.zero()
    lo, hi = min(groups), max(groups)
    coeffs = []
    for m in range(lo, hi + 1):
        row = groups.get(m)
        if not row:
            coeffs.append(inner.zero())
            continue
        rlo, rhi = min(row), max(row)
        coeffs.append(inner.from_coeffs(rlo, [row.get(r, cfg.spec.zero()) for r in range(rlo, rhi + 1)]))
    return L.from_coeffs(lo, coeffs)


def embed_at_axis(f: FactoredElement, axis: str, prec: int | None = None) -> LaurentSeries:
    """Image of f in the completed field at the axis (exact for polynomials,
    default-precision windows once denominators or negative powers appear)."""
    cfg = f.config
    key = (f, axis, prec)
    hit = cfg._embed_cache.get(key)
    if hit is not None:
        return hit
    L = cfg.axis_ring(axis, prec)
    inner: SeriesRing = L.coeff_dom
    out = _eval_poly_at_axis(cfg, f.unit_num, axis, L)
    den = _eval_poly_at_axis(cfg, f.unit_den, axis, L)
    if den != L.one():
        out = out * den.inv()
    if axis == "X":
        mono_outer, mono_inner = cfg.M * f.e_x + f.e_u, f.e_y - f.e_x
    else:
        mono_outer, mono_inner = cfg.M * f.e_y + f.e_u, f.e_x - f.e_y
    if mono_outer or mono_inner:
        out = out * L.monomial(inner.gen(mono_inner), mono_outer)
    for pid, e in f.prime_exps:
        out = out * _defining_at_axis(cfg, pid, axis, prec) ** e
    cfg._embed_cache[key] = out
    return out


def _defining_at_axis(cfg: RingConfig, pid: str, axis: str, prec: int | None) -> LaurentSeries:
    key = ("defax", pid, axis, prec)
    hit = cfg._pow_cache.get(key)
    if hit is None:
        hit = _eval_poly_at_axis(cfg, cfg.prime(pid).defining, axis, cfg.axis_ring(axis, prec))
        cfg._pow_cache[key] = hit
    return hit


# ---------------------------------------------------------------------------
# restriction to a prime's residue field


def _embed_coeff(cfg: RingConfig, cert: PrimeCertificate, c: ff.FqElt) -> ff.FqElt:
    if cert.ext == cfg.spec:
        return c
    return ff.get_embedding(cfg.spec, cert.ext).apply(c)


def _phi_pow(cfg: RingConfig, pid: str, var: str, n: int, prec: int | None) -> LaurentSeries:
    key = (pid, var, n, prec)
    hit = cfg._pow_cache.get(key)
    if hit is None:
        cert = cfg.prime(pid)
        base = {"u": cert.phi_u, "x": cert.phi_x, "y": cert.phi_y}[var]
        ring = cfg.prime_ring(pid, prec)
        base = ring.from_coeffs(base.v, base.coeffs, base.frontier)
        hit = base ** n
        cfg._pow_cache[key] = hit
    return hit


def _eval_poly_at_prime(cfg: RingConfig, poly: TrivariatePoly, pid: str, prec: int | None) -> LaurentSeries:
    ring = cfg.prime_ring(pid, prec)
    cert = cfg.prime(pid)
    acc = ring.zero()
    for (i, j, k), c in poly.terms:
        term = ring.const(_embed_coeff(cfg, cert, c))
        if i:
            term = term * _phi_pow(cfg, pid, "x", i, prec)
        if j:
            term = term * _phi_pow(cfg, pid, "y", j, prec)
        if k:
            term = term * _phi_pow(cfg, pid, "u", k, prec)
        acc = acc + term
    return acc


def restrict_away_from(f: FactoredElement, pid: str, prec: int | None = None) -> LaurentSeries:
    """Evaluate every factor of f except pid's own defining element along
    pid's parametrization. This is the symbolic-cancellation workhorse: each
    remaining factor restricts to a provably nonzero series."""
    cfg = f.config
    key = (f, pid, prec)
    hit = cfg._restrict_cache.get(key)
    if hit is not None:
        return hit
    ring = cfg.prime_ring(pid, prec)
    out = _eval_poly_at_prime(cfg, f.unit_num, pid, prec)
    den = _eval_poly_at_prime(cfg, f.unit_den, pid, prec)
    if den != ring.one():
        out = out * den.inv()
    for var, e in (("x", f.e_x), ("y", f.e_y), ("u", f.e_u)):
        if e:
            out = out * _phi_pow(cfg, pid, var, e, prec)
    for other, e in f.prime_exps:
        if other == pid:
            continue
        out = out * _defining_at_prime(cfg, other, pid, prec) ** e
    cfg._restrict_cache[key] = out
    return out


def _defining_at_prime(cfg: RingConfig, other: str, pid: str, prec: int | None) -> LaurentSeries:
    key = ("defpr", other, pid, prec)
    hit = cfg._pow_cache.get(key)
    if hit is None:
        hit = _eval_poly_at_prime(cfg, cfg.prime(other).defining, pid, prec)
        cfg._pow_cache[key] = hit
    return hit


def restrict(f: FactoredElement, pid: str, prec: int | None = None) -> LaurentSeries:
    """Residue of f in k(p)^x = F_{q^d}((s))^x. Requires net order 0 at pid
    (the defining element must have cancelled symbolically beforehand)."""
    if ord_at(f, pid) != 0:
        raise NotAUnitAtPrime(f"element has order {ord_at(f, pid)} at {pid}")
    return restrict_away_from(f, pid, prec)


# ---------------------------------------------------------------------------
# the defining relation


def relation_rewrite(f: FactoredElement, k: int) -> FactoredElement:
    """Resolve x*y = u^M: shift (e_x, e_y, e_u) by (k, k, -k*M).

    The result is the same element of the ring; every order, embedding and
    restriction is unchanged.
    """
    return FactoredElement(
        f.config, f.unit_num, f.unit_den,
        f.e_x + k, f.e_y + k, f.e_u - k * f.config.M,
        f.prime_exps,
    )


# ---------------------------------------------------------------------------
# certificates


def validate_certificate(cfg: RingConfig, cert: PrimeCertificate) -> None:
    """Consistency checks; raises CertificateInvalid with the failed rule."""
    spec = cfg.spec
    if cert.d < 1 or cert.ext.q != spec.q ** cert.d:
        raise CertificateInvalid(f"{cert.pid}: residue degree d={cert.d} does not match the series field")
    if cert.d > 1:
        try:
            ff.get_embedding(spec, cert.ext)
        except SpecMismatch as exc:
            raise CertificateInvalid(f"{cert.pid}: no registered embedding for d={cert.d}") from exc
    for name, phi in (("phi_u", cert.phi_u), ("phi_x", cert.phi_x), ("phi_y", cert.phi_y)):
        try:
            v, _ = phi.val_lc()
        except Exception as exc:
            raise CertificateInvalid(f"{cert.pid}: {name} has no decidable valuation") from exc
        if v < 1:
            raise CertificateInvalid(f"{cert.pid}: {name} must vanish at s=0 (valuation >= 1)")
    lhs = cert.phi_x * cert.phi_y
    rhs = cert.phi_u ** cfg.M
    if not lhs.agrees_with(rhs):
        raise CertificateInvalid(f"{cert.pid}: phi_x * phi_y != phi_u^{cfg.M}")
    if _z3(lhs - rhs) is False:
        raise CertificateInvalid(f"{cert.pid}: phi_x * phi_y != phi_u^{cfg.M}")
    # evaluate the defining element along phi without touching the registry
    ring = SeriesRing(cert.ext, "s", cfg.precision)
    acc = ring.zero()
    for (i, j, k), c in cert.defining.terms:
        term = ring.const(_embed_coeff(cfg, cert, c))
        for phi, e in ((cert.phi_x, i), (cert.phi_y, j), (cert.phi_u, k)):
            if e:
                term = term * phi ** e
        acc = acc + term
    if _z3(acc) is False:
        raise CertificateInvalid(f"{cert.pid}: defining element does not vanish along the parametrization")
    for axis, declared in zip(AXES, cert.axis_mults):
        emb = _eval_poly_at_axis(cfg, cert.defining, axis, cfg.axis_ring(axis))
        v, _ = emb.val_lc()
        if v != declared:
            raise CertificateInvalid(
                f"{cert.pid}: axis multiplicity at {axis} is {v}, certificate says {declared}")


def axis_shift_prime(cfg: RingConfig, a: int, c: ff.FqElt) -> PrimeCertificate:
    """Built-in family x - c*u^a (0 < a < M, c a unit): d=1, curve
    u=s, x=c*s^a, y=c^(-1)*s^(M-a)."""
    if not isinstance(c, ff.FqElt):
        c = cfg.spec.from_int(c)
    if not 0 < a < cfg.M:
        raise CertificateInvalid(f"axis shift needs 0 < a < M, got a={a}")
    if c.is_zero():
        raise CertificateInvalid("axis shift needs a unit c")
    ring = SeriesRing(cfg.spec, "s", cfg.precision)
    pid = f"P({a},{ff.encode_elt(c)})"
    return PrimeCertificate(
        pid=pid,
        d=1,
        ext=cfg.spec,
        phi_u=ring.gen(),
        phi_x=ring.monomial(c, a),
        phi_y=ring.monomial(c.inv(), cfg.M - a),
        defining=TrivariatePoly.make(cfg.spec, {(1, 0, 0): cfg.spec.one(), (0, 0, a): -c}),
        axis_mults=(a, 0),
    )


def quadratic_prime(cfg: RingConfig, gamma: ff.FqElt) -> PrimeCertificate:
    """Built-in degree-2 family x - gamma*y for gamma a non-square:
    residue field F_{q^2}, curve u=s, x=delta*s^(M/2), y=delta^(-1)*s^(M/2)
    with delta the canonical square root of gamma upstairs."""
    if not isinstance(gamma, ff.FqElt):
        gamma = cfg.spec.from_int(gamma)
    if cfg.M % 2 != 0:
        raise CertificateInvalid("quadratic primes need M even")
    if gamma.is_zero() or gamma ** ((cfg.spec.q - 1) // 2) == cfg.spec.one():
        raise CertificateInvalid(f"gamma={gamma!r} must be a non-square unit")
    ext, emb = ff.ensure_extension(cfg.spec, 2)
    delta = _coeff_nth_root(emb.apply(gamma), 2)
    ring = SeriesRing(ext, "s", cfg.precision)
    half = cfg.M // 2
    pid = f"Q2({ff.encode_elt(gamma)})"
    return PrimeCertificate(
        pid=pid,
        d=2,
        ext=ext,
        phi_u=ring.gen(),
        phi_x=ring.monomial(delta, half),
        phi_y=ring.monomial(delta.inv(), half),
        defining=TrivariatePoly.make(cfg.spec, {(1, 0, 0): cfg.spec.one(), (0, 1, 0): -gamma}),
        axis_mults=(0, 0),
    )
