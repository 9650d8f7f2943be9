"""Randomized reciprocity campaigns and the deterministic selfcheck.

The trial stream is fully pinned so reports are byte-identical across runs
and machines. One 64-bit linear generator drives everything:

    state' = (6364136223846793005 * state + 1442695040888963407) mod 2^64
    output = state' >> 33          (31 usable bits)
    below(n) = output mod n

Trial i of a campaign with master seed s uses the substream seeded by
state0 = (s + (i+1) * 0x9E3779B97F4A7C15) mod 2^64, so trials do not depend
on scheduling and any single trial can be replayed in isolation.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

from . import ff
from .cft import (
    COVER_NAMES,
    boundary_map,
    kummer_cover,
    local_character,
    product_formula,
    prop21_check,
    same_kummer_cover,
    thm41_model,
    unramified_cover,
)
from .errors import NodetameError, SpecMismatch
from .grammar import encode_element, parse_element
from .milnor import k2_axis_invariant, tame_symbol_at_prime, triple_tame_axis
from .node_ring import RingConfig, TrivariatePoly, ord_at, relation_rewrite, restrict
from .series import SeriesRing, nth_root

MMIX_MUL = 6364136223846793005
MMIX_ADD = 1442695040888963407
GOLDEN = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1


class TameRng:
    """The pinned 64-bit linear generator (see module docstring)."""

    def __init__(self, state: int):
        self.state = state & _MASK

    def next_u31(self) -> int:
        self.state = (MMIX_MUL * self.state + MMIX_ADD) & _MASK
        return self.state >> 33

    def below(self, n: int) -> int:
        if n < 1:
            raise SpecMismatch("below() needs a positive bound")
        return self.next_u31() % n

    @staticmethod
    def for_trial(seed: int, index: int) -> "TameRng":
        return TameRng((seed + (index + 1) * GOLDEN) & _MASK)


@dataclass(frozen=True)
class CampaignConfig:
    q: int
    e: int = 1
    M: int = 4
    n: int = 4
    d_frob: int = 2
    trials: int = 100
    seed: int = 0
    prec: int = 8

    def __post_init__(self) -> None:
        p = round(self.q ** (1.0 / self.e))
        if p ** self.e != self.q or not ff._is_prime(p):
            raise SpecMismatch(f"q={self.q} is not a prime power with e={self.e}")

    @property
    def p(self) -> int:
        return round(self.q ** (1.0 / self.e))


def build_ring(cc: CampaignConfig) -> RingConfig:
    spec = ff.field_spec(cc.p, cc.e)
    cfg = RingConfig(spec, cc.M, precision=cc.prec)
    cfg.install_standard_primes()
    return cfg


# ---------------------------------------------------------------------------
# random elements (the exact recipe is part of the report contract)


def _rand_unit(cfg: RingConfig, rng: TameRng, elts: tuple) -> TrivariatePoly:
    terms = {(0, 0, 0): elts[1 + rng.below(cfg.spec.q - 1)]}
    for _ in range(rng.below(3)):
        key = (rng.below(2), rng.below(2), rng.below(3))
        coeff = elts[rng.below(cfg.spec.q)]
        if key == (0, 0, 0) or coeff.is_zero():
            continue
        terms[key] = coeff
    return TrivariatePoly.make(cfg.spec, terms)


def _rand_element(cfg: RingConfig, rng: TameRng, pool: tuple, elts: tuple):
    primes: dict = {}
    for _ in range(rng.below(4)):
        pid = pool[rng.below(len(pool))]
        exp = rng.below(5) - 2
        primes[pid] = primes.get(pid, 0) + exp
    return cfg.element(
        unit=_rand_unit(cfg, rng, elts),
        e_x=rng.below(5) - 2,
        e_y=rng.below(5) - 2,
        e_u=rng.below(5) - 2,
        primes={k: v for k, v in primes.items() if v},
    )


# ---------------------------------------------------------------------------
# campaign


def run_campaign(cc: CampaignConfig, cfg: RingConfig | None = None) -> dict:
    """Run the reciprocity campaign and return the schema-1 report.

    Each trial draws a random pair, computes its full boundary, evaluates
    the x/y/u Kummer characters at level n and the degree-d_frob Frobenius
    at every place, and checks the product and sum identities exactly. The
    report carries per-trial rows, per-cover and per-place aggregates, and
    verbose records for any failures. Nothing time-dependent goes in.
    """
    if cfg is None:
        cfg = build_ring(cc)
    pool = tuple(sorted(cfg.primes))
    elts = tuple(cfg.spec.elements())
    cover_labels = [kummer_cover(h, cc.n).label for h in COVER_NAMES]
    cover_labels.append(unramified_cover(cc.d_frob).label)
    covers_agg: dict = {
        lbl: {"pass": 0, "fail": 0, "values": {}} for lbl in cover_labels
    }
    places_agg: dict = {}
    trials = []
    failures = []
    passes = 0
    for i in range(cc.trials):
        rng = TameRng.for_trial(cc.seed, i)
        f = _rand_element(cfg, rng, pool, elts)
        g = _rand_element(cfg, rng, pool, elts)
        rep = product_formula(cfg, f, g, n=cc.n, d_frob=cc.d_frob)
        row = {
            "trial": i,
            "f": encode_element(f),
            "g": encode_element(g),
            "places": rep["places"],
            "ok": rep["ok"],
        }
        trials.append(row)
        if rep["ok"]:
            passes += 1
        else:
            failures.append({"trial": i, "f": row["f"], "g": row["g"], "report": rep})
        for place in rep["places"]:
            slot = places_agg.setdefault(place, {
                "kind": "axis" if place in ("X", "Y") else "prime",
                "d": 1 if place in ("X", "Y") else cfg.prime(place).d,
                "seen": 0,
                "fail": 0,
                "values": {lbl: {} for lbl in cover_labels},
            })
            slot["seen"] += 1
            if not rep["ok"]:
                slot["fail"] += 1
        for lbl in cover_labels:
            cov = rep["covers"][lbl]
            if cov["ok"]:
                covers_agg[lbl]["pass"] += 1
            else:
                covers_agg[lbl]["fail"] += 1
            for place, value in cov["values"].items():
                vtext = str(value)
                hist = covers_agg[lbl]["values"]
                hist[vtext] = hist.get(vtext, 0) + 1
                phist = places_agg[place]["values"][lbl]
                phist[vtext] = phist.get(vtext, 0) + 1
    return {
        "schema": 1,
        "kind": "campaign",
        "config": asdict(cc),
        "experimental": {"u_cover": True},
        "passes": passes,
        "trials": trials,
        "aggregates": {"covers": covers_agg, "places": places_agg},
        "failures": failures,
        "ok": not failures and passes == cc.trials,
    }


def report_to_json(report: dict) -> str:
    """Canonical byte form of a report: sorted keys, two-space indent."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# selfcheck: the frozen example suite, runnable from the CLI


def _check(results: list, name: str, fn) -> None:
    try:
        ok = bool(fn())
        results.append({"name": name, "ok": ok})
    except NodetameError as exc:
        results.append({"name": name, "ok": False, "error": f"{type(exc).__name__}: {exc}"})
    except Exception as exc:  # a crash is a failure, not an abort
        results.append({"name": name, "ok": False, "error": f"{type(exc).__name__}: {exc}"})


def run_selfcheck() -> dict:
    """Replay the frozen worked examples end to end; returns a report dict
    with one named line per check."""
    results: list = []
    ck = lambda name, fn: _check(results, name, fn)

    # base field arithmetic
    f5 = ff.field_spec(5, 1)
    ck("ff.inv4", lambda: f5.from_int(4).inv() == f5.from_int(4))
    ck("ff.gen5", lambda: f5.generator == f5.from_int(2))
    ck("ff.dlog4", lambda: ff.dlog(f5.from_int(4)) == 2)
    ck("ff.mu4", lambda: tuple(ff.encode_elt(z) for z in ff.roots_of_unity(f5, 4)) == ("1", "2", "4", "3"))
    f9 = ff.field_spec(3, 2)
    ck("ff.f9-gen-sq", lambda: f9.gen() * f9.gen() == f9.from_int(-1))
    f25, emb25 = ff.ensure_extension(f5, 2)
    ck("ff.f25-delta", lambda: f25.gen() * f25.gen() == f25.from_int(2))
    ck("ff.norm-delta", lambda: ff.norm(f25.gen(), f5) == f5.from_int(3))
    # z^((q^2-1)/n) lands in the base field and equals N(z)^((q-1)/n), n = 2
    ck("ff.norm-power", lambda: all(
        emb25.pull_back(z ** 12) == ff.norm(z, f5) ** 2
        for z in tuple(f25.elements()) if not z.is_zero()))

    # series layer
    R5 = SeriesRing(f5, "s", 12)
    one_minus_s = R5.from_coeffs(0, [1, -1])
    ck("series.geom", lambda: (one_minus_s.inv() * one_minus_s).agrees_with(R5.one()))
    ck("series.vallc", lambda: R5.from_coeffs(-2, [3, 0, 1]).val_lc() == (-2, f5.from_int(3)))
    ck("series.sqrt", lambda: nth_root(R5.from_coeffs(2, [4]), 2) == R5.monomial(f5.from_int(2), 1))
    ck("series.root-roundtrip", lambda: nth_root(R5.from_coeffs(0, [1, 1]) ** 4, 4) == R5.from_coeffs(0, [1, 1]))

    # ring, symbols, invariants: the F5, M=4 ledger
    cfg = RingConfig(f5, 4, precision=12)
    cfg.install_standard_primes()
    f = cfg.prime_elt("P(2,2)")
    u, x, y = cfg.u(), cfg.x(), cfg.y()
    xi = cfg.const(2)
    xy = cfg.element(e_x=1, e_y=1)
    ck("ring.ords", lambda: (ord_at(f, "X"), ord_at(f, "Y"), ord_at(f, "P(2,2)"),
                             ord_at(x, "X"), ord_at(u, "X")) == (2, 0, 1, 4, 1))
    ck("ring.rewrite", lambda: ord_at(relation_rewrite(x, -1), "X") == 4)
    ck("ring.restrict-u", lambda: repr(restrict(u, "P(2,2)")) == "v=1; 1")
    ck("symbol.prime", lambda: repr(tame_symbol_at_prime(cfg, f, u, "P(2,2)")) == "v=-1; 1")
    ck("inv.fu.X", lambda: repr(k2_axis_invariant(cfg, f, u, "X")) == "(1, 0, 3)")
    ck("inv.fu.Y", lambda: repr(k2_axis_invariant(cfg, f, u, "Y")) == "(1, 1, 1)")
    ck("inv.xix.X", lambda: repr(k2_axis_invariant(cfg, xi, x, "X")) == "(3, 0, 1)")
    ck("inv.xix.Y", lambda: repr(k2_axis_invariant(cfg, xi, x, "Y")) == "(2, 0, 1)")
    ck("inv.xiu", lambda: repr(k2_axis_invariant(cfg, xi, u, "X")) == "(1, 0, 2)"
       and repr(k2_axis_invariant(cfg, xi, u, "Y")) == "(1, 0, 2)")
    ck("inv.xixy", lambda: repr(k2_axis_invariant(cfg, xi, xy, "X")) == "(1, 0, 1)"
       and repr(k2_axis_invariant(cfg, xi, xy, "Y")) == "(1, 0, 1)")
    ck("triple.fuu", lambda: (ff.encode_elt(triple_tame_axis(cfg, f, u, u, "X")),
                              ff.encode_elt(triple_tame_axis(cfg, f, u, u, "Y"))) == ("1", "4"))
    ck("triple.xixu", lambda: (ff.encode_elt(triple_tame_axis(cfg, xi, x, u, "X")),
                               ff.encode_elt(triple_tame_axis(cfg, xi, x, u, "Y"))) == ("3", "2"))

    # characters and reciprocity
    bd = boundary_map(cfg, f, u)
    want = {"x": ("2", "2", "4"), "y": ("3", "3", "4"), "u": ("4", "1", "4")}
    for h, expect in want.items():
        ck(f"cover.{h}", lambda h=h, expect=expect: tuple(
            ff.encode_elt(local_character(cfg, bd, kummer_cover(h, 4), pl))
            for pl in ("P(2,2)", "X", "Y")) == expect)
    ck("cover.frob", lambda: tuple(local_character(cfg, bd, unramified_cover(3), pl)
                                   for pl in ("P(2,2)", "X", "Y")) == (-1, 0, 1))
    ck("product.fu", lambda: product_formula(cfg, f, u, n=4, d_frob=3)["ok"])
    ck("product.fx", lambda: product_formula(cfg, f, x, n=4, d_frob=2)["ok"])
    ck("product.xy", lambda: product_formula(cfg, x, y, n=2, d_frob=1)["ok"])
    ck("product.q2", lambda: product_formula(cfg, cfg.prime_elt("Q2(2)"), u, n=4, d_frob=2)["ok"])
    ck("prop21", lambda: prop21_check(cfg, 4)["ok"])
    ck("thm41", lambda: thm41_model(cfg, 4, 3, sample_pids=("P(1,1)", "P(2,2)"))["ok"])
    ck("covers.xy-same", lambda: same_kummer_cover(cfg, x, y, 4))
    ck("covers.xu-differ", lambda: not same_kummer_cover(cfg, x, u, 4))

    # grammar round-trips
    h = cfg.element(unit={(0, 0, 0): 1, (1, 0, 0): 3, (0, 0, 2): 2}, e_x=1, e_u=-2,
                    primes={"P(1,3)": 1, "Q2(2)": -1})
    ck("grammar.roundtrip", lambda: parse_element(cfg, encode_element(h)) == h)
    ck("grammar.unit1", lambda: encode_element(cfg.element()) == "unit[1]")
    ck("grammar.ledger-pair", lambda: parse_element(cfg, "P(2,2)") == f)

    # campaign determinism: identical bytes for identical config
    cc = CampaignConfig(q=5, e=1, M=4, n=2, d_frob=2, trials=5, seed=11, prec=8)
    ck("campaign.deterministic", lambda: report_to_json(run_campaign(cc)) == report_to_json(run_campaign(cc)))
    ck("campaign.small-green", lambda: run_campaign(cc)["ok"])

    # F9 cross-check: one exact product formula over an extension base field
    cfg9 = RingConfig(f9, 4, precision=8)
    cfg9.install_standard_primes()
    pid9 = sorted(cfg9.primes)[0]
    ck("product.f9", lambda: product_formula(cfg9, cfg9.prime_elt(pid9), cfg9.u(),
                                             n=4, d_frob=2)["ok"])

    passed = sum(1 for r in results if r["ok"])
    return {
        "schema": 1,
        "kind": "selfcheck",
        "experimental": {"u_cover": True},
        "checks": results,
        "passed": passed,
        "failed": len(results) - passed,
        "ok": passed == len(results),
    }
