"""Truncated Laurent series with explicit precision tracking.

A series is stored normalized: valuation v, a coefficient window starting at
v, and a frontier (the first unknown exponent; None means the series is an
exact finite sum). Coefficients live in any domain with field-like operators,
which is how the nested two-variable fields k((y))((u)) are built: the
coefficients of the outer series are themselves LaurentSeries.

Zero never hides: a window that cancels to all zeros stays "0 + O(s^f)" and
val_lc / inv on it raise AmbiguousZero instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Union

from . import ff
from .errors import (
    AmbiguousZero,
    NotAnNthPower,
    ParseError,
    PrecisionExhausted,
    SpecMismatch,
    WildRoot,
)

DEFAULT_PREC = 24

CoeffDom = Union[ff.FieldSpec, "SeriesRing"]


class SeriesRing:
    """Handle for F((var)) over a coefficient domain (a FieldSpec or a SeriesRing)."""

    def __init__(self, coeff_dom: CoeffDom, var: str, default_prec: int = DEFAULT_PREC):
        if default_prec < 1:
            raise SpecMismatch("default precision must be >= 1")
        self.coeff_dom = coeff_dom
        self.var = var
        self.default_prec = default_prec

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SeriesRing)
            and other.coeff_dom == self.coeff_dom
            and other.var == self.var
        )

    def __hash__(self) -> int:
        return hash((self.coeff_dom, self.var))

    def __repr__(self) -> str:
        return f"{self.coeff_dom!r}(({self.var}))"

    def base_prime(self) -> int:
        dom = self.coeff_dom
        while isinstance(dom, SeriesRing):
            dom = dom.coeff_dom
        return dom.p

    def coeff_zero(self):
        return self.coeff_dom.zero()

    def coeff_one(self):
        return self.coeff_dom.one()

    def zero(self) -> "LaurentSeries":
        return LaurentSeries(self, 0, (), None)

    def one(self) -> "LaurentSeries":
        return self.const(self.coeff_one())

    def from_int(self, n: int) -> "LaurentSeries":
        return self.const(self.coeff_dom.from_int(n))

    def const(self, c) -> "LaurentSeries":
        return self.monomial(c, 0)

    def monomial(self, c, k: int) -> "LaurentSeries":
        if _z3(c) is True:
            return self.zero()
        return LaurentSeries(self, k, (c,), None)

    def gen(self, k: int = 1) -> "LaurentSeries":
        """The series var^k."""
        return self.monomial(self.coeff_one(), k)

    def from_coeffs(self, v: int, coeffs, frontier: int | None = None) -> "LaurentSeries":
        """Build from a window of coefficients starting at exponent v.
        Plain integers are coerced into the coefficient domain."""
        coeffs = tuple(c if isinstance(c, (ff.FqElt, LaurentSeries)) else self.coeff_dom.from_int(c)
                       for c in coeffs)
        if frontier is not None and frontier != v + len(coeffs):
            raise SpecMismatch("frontier must equal v + len(coeffs)")
        return _make(self, v, list(coeffs), frontier)

    def unknown_zero(self, frontier: int) -> "LaurentSeries":
        """The value 0 + O(var^frontier): nothing known below the frontier."""
        return LaurentSeries(self, frontier, (), frontier)


def _z3(c) -> bool | None:
    """Three-valued zero test: True / False / None (ambiguous)."""
    if isinstance(c, LaurentSeries):
        ambiguous = c.frontier is not None
        for cc in c.coeffs:
            z = _z3(cc)
            if z is False:
                return False
            if z is None:
                ambiguous = True
        return None if ambiguous else True
    return c.is_zero()


def _make(ring: SeriesRing, v: int, coeffs: list, frontier: int | None) -> "LaurentSeries":
    """Normalize: strip provably-zero leading coeffs, trim exact tails."""
    while coeffs:
        z = _z3(coeffs[0])
        if z is True:
            coeffs.pop(0)
            v += 1
        else:
            break
    if frontier is None:
        while coeffs and _z3(coeffs[-1]) is True:
            coeffs.pop()
        if not coeffs:
            return LaurentSeries(ring, 0, (), None)
    else:
        if not coeffs:
            return LaurentSeries(ring, frontier, (), frontier)
    return LaurentSeries(ring, v, tuple(coeffs), frontier)


@dataclass(frozen=True)
class LaurentSeries:
    """Normalized truncated Laurent series over ring.coeff_dom."""

    ring: SeriesRing
    v: int
    coeffs: tuple
    frontier: int | None  # first unknown exponent; None = exact

    # -- predicates ---------------------------------------------------------

    def is_exact(self) -> bool:
        return self.frontier is None

    def is_zero(self) -> bool:
        """True only for the provably exact zero; ambiguous windows raise."""
        z = _z3(self)
        if z is None:
            where = self.frontier if self.frontier is not None else self.v
            raise AmbiguousZero(f"zero to O({self.ring.var}^{where}), not exactly zero")
        return z

    def _frontier_or_inf(self) -> float:
        return float("inf") if self.frontier is None else self.frontier

    def window(self) -> int:
        """Number of known coefficients from the valuation (large if exact)."""
        if self.frontier is None:
            return max(self.ring.default_prec, len(self.coeffs))
        return len(self.coeffs)

    def coeff(self, k: int):
        """Coefficient of var^k; known-zero below v, error at/after the frontier."""
        if self.frontier is not None and k >= self.frontier:
            raise PrecisionExhausted(f"coefficient of {self.ring.var}^{k} beyond O({self.ring.var}^{self.frontier})")
        if not self.coeffs or k < self.v:
            return self.ring.coeff_zero()
        if k >= self.v + len(self.coeffs):
            return self.ring.coeff_zero()
        return self.coeffs[k - self.v]

    def val_lc(self):
        """(valuation, leading coefficient); AmbiguousZero when undecidable."""
        if not self.coeffs:
            if self.frontier is None:
                raise AmbiguousZero("val_lc of the exact zero")
            raise AmbiguousZero(f"val_lc of 0 + O({self.ring.var}^{self.frontier})")
        if _z3(self.coeffs[0]) is None:
            raise AmbiguousZero("leading coefficient is itself zero to precision")
        return self.v, self.coeffs[0]

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "LaurentSeries") -> None:
        if not isinstance(other, LaurentSeries) or other.ring != self.ring:
            raise SpecMismatch("series from different rings")

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        if not self.coeffs and self.frontier is None:
            return other
        if not other.coeffs and other.frontier is None:
            return self
        fa, fb = self._frontier_or_inf(), other._frontier_or_inf()
        frontier = min(fa, fb)
        va = self.v if self.coeffs else self.frontier
        vb = other.v if other.coeffs else other.frontier
        v = min(va, vb)
        if frontier == float("inf"):
            hi = max(va + len(self.coeffs), vb + len(other.coeffs))
            out_frontier = None
        else:
            hi = int(frontier)
            out_frontier = int(frontier)
            if hi <= v:
                if not self.coeffs or not other.coeffs:
                    return self.ring.unknown_zero(hi)
                raise PrecisionExhausted("sum has no known coefficients")
        coeffs = [self._padded(k) + other._padded(k) for k in range(v, hi)]
        return _make(self.ring, v, coeffs, out_frontier)

    def _padded(self, k: int):
        if not self.coeffs or k < self.v or k >= self.v + len(self.coeffs):
            return self.ring.coeff_zero()
        return self.coeffs[k - self.v]

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.ring, self.v, tuple(-c for c in self.coeffs), self.frontier)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        if (not self.coeffs and self.frontier is None) or (not other.coeffs and other.frontier is None):
            return self.ring.zero()
        if not self.coeffs or not other.coeffs:
            # an unknown-zero factor: only a valuation lower bound survives
            va = self.v if self.coeffs else self.frontier
            vb = other.v if other.coeffs else other.frontier
            return self.ring.unknown_zero(va + vb)
        fa, fb = self._frontier_or_inf(), other._frontier_or_inf()
        frontier = min(fa + other.v, fb + self.v)
        v = self.v + other.v
        if frontier == float("inf"):
            hi = v + len(self.coeffs) + len(other.coeffs) - 1
            out_frontier = None
        else:
            hi = int(frontier)
            out_frontier = int(frontier)
        n = hi - v
        zero = self.ring.coeff_zero()
        out = [zero] * n
        for i, a in enumerate(self.coeffs):
            az = _z3(a)
            if az is True:
                continue
            jmax = min(len(other.coeffs), n - i)
            for j in range(jmax):
                out[i + j] = out[i + j] + a * other.coeffs[j]
        return _make(self.ring, v, out, out_frontier)

    def inv(self) -> "LaurentSeries":
        """Multiplicative inverse; window length is preserved (default for exact)."""
        v, lc = self.val_lc()
        lc_inv = lc.inv()
        if len(self.coeffs) == 1 and self.frontier is None:
            return LaurentSeries(self.ring, -v, (lc_inv,), None)
        n = self.window()
        out = [lc_inv]
        # b_k = -lc^-1 * sum_{i=1..k} a_i b_{k-i}, standard recurrence
        for k in range(1, n):
            acc = self.ring.coeff_zero()
            for i in range(1, min(k, len(self.coeffs) - 1) + 1):
                acc = acc + self.coeffs[i] * out[k - i]
            out.append(-(lc_inv * acc))
        return _make(self.ring, -v, out, -v + n)

    def __pow__(self, n: int) -> "LaurentSeries":
        if n == 0:
            return self.ring.one()
        base = self if n > 0 else self.inv()
        n = abs(n)
        acc = None
        while n:
            if n & 1:
                acc = base if acc is None else acc * base
            n >>= 1
            if n:
                base = base * base
        return acc

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by var^k."""
        if not self.coeffs:
            if self.frontier is None:
                return self
            return self.ring.unknown_zero(self.frontier + k)
        return LaurentSeries(self.ring, self.v + k, self.coeffs,
                             None if self.frontier is None else self.frontier + k)

    def truncate(self, frontier: int) -> "LaurentSeries":
        """Forget every coefficient at or above the given exponent."""
        if self.frontier is not None and self.frontier <= frontier:
            return self
        if not self.coeffs:
            return self.ring.unknown_zero(min(frontier, self.frontier if self.frontier is not None else frontier))
        keep = [c for k, c in enumerate(self.coeffs) if self.v + k < frontier]
        return _make(self.ring, self.v, keep, frontier)

    def __eq__(self, other) -> bool:
        """Exact structural equality (same window, same coefficients)."""
        return (
            isinstance(other, LaurentSeries)
            and other.ring == self.ring
            and other.v == self.v
            and other.coeffs == self.coeffs
            and other.frontier == self.frontier
        )

    def __hash__(self) -> int:
        return hash((self.v, self.coeffs, self.frontier))

    def agrees_with(self, other: "LaurentSeries") -> bool:
        """Equality on the shared known window (precision-tolerant compare)."""
        self._check(other)
        lo = min(self.v if self.coeffs else 10**9, other.v if other.coeffs else 10**9)
        hi = min(self._frontier_or_inf(), other._frontier_or_inf())
        if hi == float("inf"):
            hi = max(
                (self.v + len(self.coeffs)) if self.coeffs else lo,
                (other.v + len(other.coeffs)) if other.coeffs else lo,
            )
        if lo == 10**9:
            return True
        k = lo
        while k < hi:
            if _z3(self._padded(k) - other._padded(k)) is False:
                return False
            k += 1
        return True

    def __repr__(self) -> str:
        return encode_series(self)


def ls_arith(kind: str, a: LaurentSeries, b: LaurentSeries | None = None) -> LaurentSeries:
    """Uniform dispatcher: kind in add|sub|mul|inv|neg|pow."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "neg":
        return -a
    if kind == "inv":
        return a.inv()
    raise ValueError(f"unknown kind {kind!r}")


def val_lc(a: LaurentSeries):
    return a.val_lc()


def nth_root(a: LaurentSeries, n: int) -> LaurentSeries:
    """Canonical n-th root: n | v, leading coefficient rooted by smallest dlog,
    the 1-unit tail rooted by Hensel lifting (unique since gcd(n, p) = 1)."""
    if n < 1:
        raise NotAnNthPower("root index must be positive")
    if n == 1:
        return a
    p = a.ring.base_prime()
    if gcd(n, p) != 1:
        raise WildRoot(f"gcd(n={n}, p={p}) != 1")
    v, lc = a.val_lc()
    if v % n != 0:
        raise NotAnNthPower(f"valuation {v} is not divisible by {n}")
    lc_root = _coeff_nth_root(lc, n)
    # peel off lc * var^v, then root the 1-unit remainder coefficientwise
    base = a.ring.monomial(lc, v)
    tail = a * base.inv()
    root_tail = _one_unit_root(tail, n)
    return a.ring.monomial(lc_root, v // n) * root_tail


def _coeff_nth_root(lc, n: int):
    if isinstance(lc, LaurentSeries):
        return nth_root(lc, n)
    spec = lc.spec
    g = spec.generator
    t = ff.dlog(lc, g)
    order = spec.q - 1
    d = gcd(n, order)
    if t % d != 0:
        raise NotAnNthPower(f"{lc!r} is not an n-th power in F_{spec.q}")
    # solve n*k = t (mod order); smallest k gives the canonical root
    n_red, ord_red = n // d, order // d
    k0 = (t // d) * pow(n_red, -1, ord_red) % ord_red
    k = min((k0 + j * ord_red) % order for j in range(d))
    return g ** k


def _one_unit_root(f: LaurentSeries, n: int) -> LaurentSeries:
    # f = 1 + epsilon; solve g^n = f one coefficient at a time (Hensel).
    ring = f.ring
    prec = f.frontier if f.frontier is not None else max(ring.default_prec, len(f.coeffs))
    n_inv = ring.coeff_dom.from_int(n).inv()
    g_coeffs = [ring.coeff_one()]
    for m in range(1, prec):
        g = _make(ring, 0, list(g_coeffs), None)
        delta = f - g ** n
        if delta.frontier is None and not delta.coeffs:
            break
        g_coeffs.append(delta._padded(m) * n_inv)
    g = _make(ring, 0, list(g_coeffs), None)
    if f.frontier is None and _z3(f - g ** n) is True:
        return g
    return _make(ring, 0, list(g_coeffs), prec)


# ---------------------------------------------------------------------------
# text encoding: "v=<val>; c0,c1,..." with an optional "; O=<frontier>" tail


def encode_series(a: LaurentSeries) -> str:
    if not a.coeffs:
        return "0" if a.frontier is None else f"0; O={a.frontier}"
    parts = []
    for c in a.coeffs:
        if isinstance(c, LaurentSeries):
            parts.append("(" + encode_series(c) + ")")
        else:
            parts.append(ff.encode_elt(c).replace(",", ":"))
    s = f"v={a.v}; " + ",".join(parts)
    if a.frontier is not None:
        s += f"; O={a.frontier}"
    return s


def parse_series(ring: SeriesRing, text: str) -> LaurentSeries:
    """Parse the encode_series format over a single-level coefficient field."""
    text = text.strip()
    if text in ("0", ""):
        return ring.zero()
    frontier = None
    chunks = [c.strip() for c in text.split(";")]
    try:
        if chunks and chunks[-1].startswith("O="):
            frontier = int(chunks[-1][2:])
            chunks = chunks[:-1]
        if len(chunks) != 2 or not chunks[0].startswith("v="):
            raise ParseError(f"bad series text {text!r} (want 'v=<int>; c0,c1,...')")
        if not isinstance(ring.coeff_dom, ff.FieldSpec):
            raise SpecMismatch("text parsing is only defined over a finite field")
        v = int(chunks[0][2:])
        coeffs = [ff.parse_elt(ring.coeff_dom, tok) for tok in chunks[1].split(",") if tok.strip() != ""]
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad series text {text!r}: {exc}") from exc
    if frontier is not None and frontier != v + len(coeffs):
        coeffs = coeffs + [ring.coeff_zero()] * (frontier - v - len(coeffs))
    return ring.from_coeffs(v, coeffs, frontier)
