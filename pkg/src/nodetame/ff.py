"""Exact finite field arithmetic F_{p^e} in a fixed polynomial basis.

Elements are coefficient vectors over F_p reduced mod an irreducible monic
modulus. Everything is integer arithmetic; no floats anywhere. Scale is
deliberately small (q <= 2^20) so discrete logs run by baby-step giant-step
and embeddings between registered fields can be tabulated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import NotAGenerator, NotAUnit, SpecMismatch, TamenessViolated

MAX_Q = 1 << 20

# Monic irreducible moduli (coefficients low degree first, including the
# leading 1). The (3,2) and (5,2) entries are chosen so that w^2 = -1 and
# w^2 = 2 respectively, matching the documented worked values.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (0, 1), (2, 2): (1, 1, 1), (2, 3): (1, 0, 1, 1), (2, 4): (1, 0, 0, 1, 1),
    (3, 1): (0, 1), (3, 2): (1, 0, 1), (3, 3): (1, 0, 2, 1), (3, 4): (1, 0, 1, 1, 1),
    (5, 1): (0, 1), (5, 2): (3, 0, 1), (5, 3): (1, 0, 1, 1), (5, 4): (1, 0, 1, 1, 1),
    (7, 1): (0, 1), (7, 2): (1, 0, 1), (7, 3): (1, 0, 1, 1), (7, 4): (1, 0, 0, 1, 1),
}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _poly_mul_mod(a: list[int], b: list[int], mod: tuple[int, ...], p: int) -> list[int]:
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    e = len(mod) - 1
    while len(res) > e:
        lead = res.pop()
        if lead:
            shift = len(res) - e
            for k in range(e):
                res[shift + k] = (res[shift + k] - lead * mod[k]) % p
    while len(res) < e:
        res.append(0)
    return res


def _poly_is_irreducible(mod: tuple[int, ...], p: int) -> bool:
    # Rabin test: x^(p^d) = x must fail for proper divisors d of e and hold at e.
    e = len(mod) - 1
    if e == 1:
        return True
    fr = ([0, 1] + [0] * (e - 2))[:e]
    for d in range(1, e + 1):
        acc = [1] + [0] * (e - 1)
        base = fr
        n = p
        while n:
            if n & 1:
                acc = _poly_mul_mod(acc, base, mod, p)
            base = _poly_mul_mod(base, base, mod, p)
            n >>= 1
        fr = acc
        is_x = fr == ([0, 1] + [0] * (e - 2))[:e]
        if d < e and e % d == 0 and is_x:
            return False
        if d == e and not is_x:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Immutable description of F_{p^e}: characteristic, degree, modulus."""

    p: int
    e: int
    modulus: tuple[int, ...]

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise SpecMismatch(f"p={self.p} is not prime")
        if self.e < 1:
            raise SpecMismatch("extension degree must be >= 1")
        if self.p ** self.e > MAX_Q:
            raise SpecMismatch(f"q = {self.p}^{self.e} exceeds the desk-scale bound 2^20")
        if len(self.modulus) != self.e + 1 or self.modulus[-1] != 1:
            raise SpecMismatch("modulus must be monic of degree e")
        if any(not (0 <= c < self.p) for c in self.modulus):
            raise SpecMismatch("modulus coefficients must be reduced mod p")
        if not _poly_is_irreducible(self.modulus, self.p):
            raise SpecMismatch(f"modulus {list(self.modulus)} is reducible over F_{self.p}")

    @cached_property
    def q(self) -> int:
        return self.p ** self.e

    def zero(self) -> "FqElt":
        return FqElt(self, (0,) * self.e)

    def one(self) -> "FqElt":
        return self.from_int(1)

    def from_int(self, n: int) -> "FqElt":
        """Constant element n * 1 (n taken mod p)."""
        coeffs = [0] * self.e
        coeffs[0] = n % self.p
        return FqElt(self, tuple(coeffs))

    def from_coeffs(self, coeffs) -> "FqElt":
        cs = [c % self.p for c in coeffs]
        if len(cs) > self.e:
            raise SpecMismatch("coefficient vector longer than extension degree")
        cs += [0] * (self.e - len(cs))
        return FqElt(self, tuple(cs))

    def gen(self) -> "FqElt":
        """Residue of the modulus variable w (zero in a prime field)."""
        if self.e == 1:
            return self.zero()
        coeffs = [0] * self.e
        coeffs[1] = 1
        return FqElt(self, tuple(coeffs))

    def elements(self):
        """All q elements, ordered by integer encoding sum c_i p^i."""
        for n in range(self.q):
            cs = []
            m = n
            for _ in range(self.e):
                cs.append(m % self.p)
                m //= self.p
            yield FqElt(self, tuple(cs))

    @cached_property
    def generator(self) -> "FqElt":
        """Canonical generator of F_q^x: smallest by integer encoding."""
        factors = _prime_factors(self.q - 1)
        for a in self.elements():
            if a.is_zero():
                continue
            if all(a ** ((self.q - 1) // f) != self.one() for f in factors):
                return a
        raise NotAGenerator("no generator found (unreachable for a field)")

    def __repr__(self) -> str:
        return f"F_{self.q}" if self.e == 1 else f"F_{self.q}(p={self.p},mod={list(self.modulus)})"


def field_spec(p: int, e: int = 1, modulus=None) -> FieldSpec:
    """Build a FieldSpec, defaulting the modulus from the built-in table."""
    if not _is_prime(p):
        raise SpecMismatch(f"p={p} is not prime")
    if modulus is None:
        key = (p, e)
        if key not in DEFAULT_MODULI:
            raise SpecMismatch(f"no default modulus for p={p}, e={e}; pass one explicitly")
        modulus = DEFAULT_MODULI[key]
    return FieldSpec(p, e, tuple(int(c) % p for c in modulus))


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class FqElt:
    """One element of F_{p^e}, as a reduced coefficient tuple."""

    spec: FieldSpec
    coeffs: tuple[int, ...]

    def _check(self, other: "FqElt") -> None:
        if not isinstance(other, FqElt) or other.spec != self.spec:
            raise SpecMismatch("operands belong to different field specs")

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def int_encoding(self) -> int:
        n = 0
        for c in reversed(self.coeffs):
            n = n * self.spec.p + c
        return n

    def __add__(self, other: "FqElt") -> "FqElt":
        self._check(other)
        p = self.spec.p
        return FqElt(self.spec, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FqElt") -> "FqElt":
        self._check(other)
        p = self.spec.p
        return FqElt(self.spec, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FqElt":
        p = self.spec.p
        return FqElt(self.spec, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other: "FqElt") -> "FqElt":
        self._check(other)
        if self.spec.e == 1:
            return FqElt(self.spec, ((self.coeffs[0] * other.coeffs[0]) % self.spec.p,))
        prod = _poly_mul_mod(list(self.coeffs), list(other.coeffs), self.spec.modulus, self.spec.p)
        return FqElt(self.spec, tuple(prod))

    def inv(self) -> "FqElt":
        if self.is_zero():
            raise NotAUnit("inverse of zero")
        if self.spec.e == 1:
            return FqElt(self.spec, (pow(self.coeffs[0], -1, self.spec.p),))
        # extended Euclid in F_p[x] against the modulus
        p = self.spec.p
        r0, r1 = list(self.spec.modulus), list(self.coeffs)
        s0, s1 = [0], [1]
        while any(r1):
            q, r = _poly_divmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1, p), p)
        lead = _poly_trim(r0)
        c = pow(lead[-1], -1, p)
        inv = [(c * x) % p for x in s0]
        inv = inv[: self.spec.e] + [0] * max(0, self.spec.e - len(inv))
        return FqElt(self.spec, tuple(inv[: self.spec.e]))

    def __truediv__(self, other: "FqElt") -> "FqElt":
        return self * other.inv()

    def __pow__(self, n: int) -> "FqElt":
        if n < 0:
            return self.inv() ** (-n)
        acc = self.spec.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, FqElt) and other.spec == self.spec and other.coeffs == self.coeffs

    def __hash__(self) -> int:
        return hash((self.spec.p, self.spec.e, self.coeffs))

    def __repr__(self) -> str:
        return encode_elt(self)


def _poly_trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return a


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return [(x - y) % p for x, y in zip(a, b)]


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    return res


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    if b == [0]:
        raise ZeroDivisionError
    q = [0] * max(1, len(a) - len(b) + 1)
    inv_lead = pow(b[-1], -1, p)
    r = list(a)
    while len(_poly_trim(r)) >= len(b) and _poly_trim(r) != [0]:
        r = _poly_trim(r)
        d = len(r) - len(b)
        c = (r[-1] * inv_lead) % p
        q[d] = c
        for k in range(len(b)):
            r[d + k] = (r[d + k] - c * b[k]) % p
        r = r[:-1]
    return q, _poly_trim(r)


def fq_arith(kind: str, a: FqElt, b: FqElt | None = None) -> FqElt:
    """Uniform dispatcher: kind in add|sub|mul|inv|neg|div."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    if kind == "neg":
        return -a
    if kind == "inv":
        return a.inv()
    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# discrete logs, roots of unity


def dlog(a: FqElt, base: FqElt | None = None) -> int:
    """Discrete log of a to the given base (default: canonical generator).

    Baby-step giant-step; raises NotAUnit on zero and NotAGenerator when the
    base does not generate F_q^x.
    """
    spec = a.spec
    if a.is_zero():
        raise NotAUnit("dlog of zero")
    if base is None:
        base = spec.generator
    if base.spec != spec:
        raise SpecMismatch("dlog base from a different field")
    order = spec.q - 1
    if _element_order(base) != order:
        raise NotAGenerator(f"{base!r} does not generate F_{spec.q}^x")
    m = 1
    while m * m < order:
        m += 1
    table = _baby_table(spec, base, m)
    giant = (base ** m).inv()
    cur = a
    for i in range(m + 1):
        j = table.get(cur.coeffs)
        if j is not None:
            return (i * m + j) % order
        cur = cur * giant
    raise NotAGenerator("dlog failed (base is not a generator)")


def _baby_table(spec: FieldSpec, base: FqElt, m: int) -> dict:
    cache = spec.__dict__.setdefault("_baby_cache", {})
    key = (base.coeffs, m)
    if key not in cache:
        table = {}
        cur = spec.one()
        for j in range(m):
            table.setdefault(cur.coeffs, j)
            cur = cur * base
        cache[key] = table
    return cache[key]


def _element_order(a: FqElt) -> int:
    n = a.spec.q - 1
    order = n
    for f in _prime_factors(n):
        while order % f == 0 and a ** (order // f) == a.spec.one():
            order //= f
    return order


def element_order(a: FqElt) -> int:
    if a.is_zero():
        raise NotAUnit("order of zero")
    return _element_order(a)


def roots_of_unity(spec: FieldSpec, n: int) -> tuple[FqElt, ...]:
    """mu_n as (zeta^0, zeta^1, ..., zeta^(n-1)) for zeta = g^((q-1)/n).

    Tame levels only: n must divide q - 1.
    """
    if n < 1 or (spec.q - 1) % n != 0:
        raise TamenessViolated(f"n={n} does not divide q-1={spec.q - 1}")
    zeta = spec.generator ** ((spec.q - 1) // n)
    return tuple(zeta ** i for i in range(n))


# ---------------------------------------------------------------------------
# embeddings and norms between registered specs

_EMBEDDINGS: dict[tuple, "Embedding"] = {}


def _spec_key(spec: FieldSpec) -> tuple:
    return (spec.p, spec.e, spec.modulus)


@dataclass(frozen=True)
class Embedding:
    """Tabulated field embedding F_q -> F_{q^d} (canonical root choice)."""

    base: FieldSpec
    ext: FieldSpec
    gen_image: FqElt

    @cached_property
    def _table(self) -> dict[tuple[int, ...], FqElt]:
        out = {}
        for a in self.base.elements():
            img = self.ext.zero()
            power = self.ext.one()
            for c in a.coeffs:
                img = img + power * self.ext.from_int(c)
                power = power * self.gen_image
            out[a.coeffs] = img
        return out

    @cached_property
    def _inverse(self) -> dict[tuple[int, ...], FqElt]:
        return {img.coeffs: FqElt(self.base, src) for src, img in self._table.items()}

    def apply(self, a: FqElt) -> FqElt:
        if a.spec != self.base:
            raise SpecMismatch("element not in the embedding's base field")
        return self._table[a.coeffs]

    def pull_back(self, b: FqElt) -> FqElt:
        if b.spec != self.ext:
            raise SpecMismatch("element not in the embedding's extension field")
        got = self._inverse.get(b.coeffs)
        if got is None:
            raise SpecMismatch("element is not in the embedded image of the base field")
        return got


def register_embedding(base: FieldSpec, ext: FieldSpec) -> Embedding:
    """Find the canonical root of the base modulus in ext and tabulate.

    Canonical choice: the root with the smallest integer encoding, so every
    run of every implementation picks the same embedding.
    """
    key = (_spec_key(base), _spec_key(ext))
    if key in _EMBEDDINGS:
        return _EMBEDDINGS[key]
    if ext.p != base.p or ext.e % base.e != 0:
        raise SpecMismatch(f"{ext!r} is not an extension of {base!r}")
    root = None
    for cand in ext.elements():
        acc = ext.zero()
        power = ext.one()
        for c in base.modulus:
            acc = acc + power * ext.from_int(c)
            power = power * cand
        if acc.is_zero():
            root = cand
            break
    if root is None:
        raise SpecMismatch("base modulus has no root in the extension")
    emb = Embedding(base, ext, root)
    _EMBEDDINGS[key] = emb
    return emb


def get_embedding(base: FieldSpec, ext: FieldSpec) -> Embedding:
    emb = _EMBEDDINGS.get((_spec_key(base), _spec_key(ext)))
    if emb is None:
        raise SpecMismatch("no registered embedding between these specs")
    return emb


def ensure_extension(base: FieldSpec, d: int) -> tuple[FieldSpec, Embedding]:
    """Degree-d extension of base with its embedding, built from defaults."""
    if d == 1:
        ident = register_embedding(base, base)
        return base, ident
    ext = field_spec(base.p, base.e * d)
    return ext, register_embedding(base, ext)


def norm(a: FqElt, base: FieldSpec) -> FqElt:
    """Field norm down to base: product of the Gal(F_{q^d}/F_q) conjugates.

    Computed as a^((q^d-1)/(q-1)); the result is pulled back through the
    registered embedding, so register_embedding must have run first.
    """
    emb = get_embedding(base, a.spec)
    if a.is_zero():
        return base.zero()
    exp = (a.spec.q - 1) // (base.q - 1)
    return emb.pull_back(a ** exp)


# ---------------------------------------------------------------------------
# text encoding


def encode_elt(a: FqElt) -> str:
    """Spec text form: plain integer for prime fields, "c0,c1,..." otherwise."""
    if a.spec.e == 1:
        return str(a.coeffs[0])
    return ",".join(str(c) for c in a.coeffs)


def parse_elt(spec: FieldSpec, text: str) -> FqElt:
    parts = [p.strip() for p in text.replace(":", ",").split(",") if p.strip() != ""]
    if not parts:
        raise SpecMismatch(f"empty field element text {text!r}")
    try:
        coeffs = [int(p) for p in parts]
    except ValueError as exc:
        raise SpecMismatch(f"bad field element text {text!r}") from exc
    return spec.from_coeffs(coeffs)


def encode_spec(spec: FieldSpec) -> str:
    s = f"p={spec.p},e={spec.e}"
    if spec.modulus != DEFAULT_MODULI.get((spec.p, spec.e)):
        s += ",mod=" + ",".join(str(c) for c in spec.modulus)
    return s


def parse_spec(text: str) -> FieldSpec:
    """Parse "p=5,e=1" or "p=3,e=2,mod=1,0,1"."""
    p = e = None
    modulus = None
    body = text.strip()
    if "mod=" in body:
        body, modtail = body.split("mod=", 1)
        modulus = [int(c) for c in modtail.strip().split(",") if c.strip() != ""]
        body = body.rstrip(", ")
    for item in body.split(","):
        item = item.strip()
        if not item:
            continue
        k, _, v = item.partition("=")
        if k == "p":
            p = int(v)
        elif k == "e":
            e = int(v)
        else:
            raise SpecMismatch(f"unknown field spec item {item!r}")
    if p is None:
        raise SpecMismatch(f"field spec {text!r} lacks p=")
    return field_spec(p, e if e is not None else 1, modulus)
