"""Covers, local characters, and the reciprocity identities. The named
cover values for the worked F_5 pair are frozen; everything else is checked
through algebraic identities (cocycle, inversion, product = 1, sum = 0)."""

import pytest

from nodetame import ff
from nodetame.cft import (
    AXIS_ORIENT,
    BoundaryData,
    CoverSpec,
    GaloisLevelN,
    boundary_map,
    check_level,
    is_nth_power,
    kummer_character,
    kummer_cover,
    local_character,
    product_formula,
    prop21_check,
    same_kummer_cover,
    thm41_model,
    unramified_cover,
)
from nodetame.errors import SpecMismatch, TamenessViolated


def test_cover_spec():
    c = kummer_cover("x", 4)
    assert c.label == "Kummer(x,4)" and c.kind == "kummer"
    f = unramified_cover(3)
    assert f.label == "Unramified(3)" and f.kind == "unramified"
    with pytest.raises(SpecMismatch):
        kummer_cover("z", 4)
    with pytest.raises(SpecMismatch):
        CoverSpec(kind="kummer", h="x", n=0)
    with pytest.raises(SpecMismatch):
        unramified_cover(0)


def test_check_level(cfg5, cfg7):
    check_level(cfg5, 4)
    check_level(cfg5, 2)
    check_level(cfg7, 6)
    with pytest.raises(TamenessViolated):
        check_level(cfg5, 8)
    with pytest.raises(TamenessViolated):
        check_level(cfg5, 5)


def test_galois_level(f5):
    lvl = GaloisLevelN(f5, 4, 2)
    assert lvl.zeta == f5.from_int(2)
    assert lvl.order() == 8
    assert [lvl.kummer_index(f5.from_int(k)) for k in (1, 2, 4, 3)] == [0, 1, 2, 3]
    # at n = 2 only 1 and 4 are roots of unity, so 2 must be rejected
    lvl2 = GaloisLevelN(f5, 2, 1)
    assert [lvl2.kummer_index(f5.from_int(k)) for k in (1, 4)] == [0, 1]
    with pytest.raises(SpecMismatch):
        lvl2.kummer_index(f5.from_int(2))


def test_boundary_data_shape(cfg5, ledger):
    bd = boundary_map(cfg5, ledger["f"], ledger["u"])
    assert bd.places() == ("P(2,2)", "X", "Y")
    assert bd.prime_part("P(2,2)").val_lc()[0] == -1
    assert bd.axis_invariant("X").lam == cfg5.spec.from_int(3)
    with pytest.raises(SpecMismatch):
        bd.prime_part("P(1,1)")
    lv = bd.level(4)
    assert lv["P(2,2)"] == {"v": 3, "lc": 0}
    assert lv["X"] == {"rho": 0, "b": 0, "lam": 3}
    assert lv["Y"] == {"rho": 0, "b": 1, "lam": 0}


def test_ledger_cover_values(cfg5, ledger):
    bd = boundary_map(cfg5, ledger["f"], ledger["u"])
    want = {"x": ("2", "2", "4"), "y": ("3", "3", "4"), "u": ("4", "1", "4")}
    for h, expect in want.items():
        got = tuple(ff.encode_elt(local_character(cfg5, bd, kummer_cover(h, 4), pl))
                    for pl in ("P(2,2)", "X", "Y"))
        assert got == expect, f"cover {h}"
    frob = tuple(local_character(cfg5, bd, unramified_cover(3), pl)
                 for pl in ("P(2,2)", "X", "Y"))
    assert frob == (-1, 0, 1)


def test_product_formula_ledger(cfg5, ledger):
    rep = product_formula(cfg5, ledger["f"], ledger["u"], n=4, d_frob=3)
    assert rep["ok"]
    assert rep["places"] == ["P(2,2)", "X", "Y"]
    assert set(rep["covers"]) == {"Kummer(x,4)", "Kummer(y,4)", "Kummer(u,4)", "Unramified(3)"}
    assert rep["covers"]["Kummer(x,4)"]["product"] == "1"
    assert rep["covers"]["Unramified(3)"]["sum"] == 0
    assert rep["covers"]["Kummer(u,4)"]["values"]["P(2,2)"] == "4"


def test_product_formula_more_pairs(cfg5, cfg7, cfg9, ledger):
    assert product_formula(cfg5, ledger["f"], ledger["x"], n=4, d_frob=2)["ok"]
    assert product_formula(cfg5, ledger["x"], ledger["y"], n=2, d_frob=1)["ok"]
    assert product_formula(cfg5, cfg5.prime_elt("Q2(2)"), ledger["u"], n=4, d_frob=2)["ok"]
    h = cfg5.element(unit={(0, 0, 0): 2, (1, 0, 1): 3}, e_u=1, primes={"P(1,4)": 1})
    k = cfg5.element(unit={(0, 0, 0): 4, (0, 1, 0): 1}, e_x=-1, primes={"P(2,3)": 2})
    assert product_formula(cfg5, h, k, n=4, d_frob=2)["ok"]
    assert product_formula(cfg5, h, k, n=2, d_frob=5)["ok"]
    pid7 = sorted(cfg7.primes)[2]
    assert product_formula(cfg7, cfg7.prime_elt(pid7), cfg7.x(), n=6, d_frob=2)["ok"]
    pid9 = sorted(cfg9.primes)[0]
    assert product_formula(cfg9, cfg9.prime_elt(pid9), cfg9.u(), n=4, d_frob=2)["ok"]


def test_product_formula_guards(cfg5, ledger):
    with pytest.raises(TamenessViolated):
        product_formula(cfg5, ledger["f"], ledger["u"], n=8)
    with pytest.raises(SpecMismatch):
        product_formula(cfg5, ledger["f"], ledger["u"], n=4, d_frob=0)


def test_generic_character_agrees_with_named(cfg5, ledger):
    bd = boundary_map(cfg5, ledger["f"], ledger["u"])
    for name, h in (("x", cfg5.x()), ("y", cfg5.y()), ("u", cfg5.u())):
        cover = kummer_cover(name, 4)
        for place in bd.places():
            named = local_character(cfg5, bd, cover, place)
            generic = kummer_character(cfg5, bd, h, 4, place)
            assert named == generic, (name, place)


def test_character_cocycle(cfg5, ledger):
    bd = boundary_map(cfg5, ledger["f"], ledger["u"])
    h1 = cfg5.element(unit={(0, 0, 0): 2, (0, 0, 1): 1}, e_x=1)
    h2 = cfg5.element(unit={(0, 0, 0): 3}, e_u=2, primes={"P(1,1)": 1})
    for place in bd.places():
        a = kummer_character(cfg5, bd, h1, 4, place)
        b = kummer_character(cfg5, bd, h2, 4, place)
        ab = kummer_character(cfg5, bd, h1 * h2, 4, place)
        assert ab == a * b, place
        inv = kummer_character(cfg5, bd, h1 ** -1, 4, place)
        assert inv == a.inv(), place


def test_character_of_nth_power_is_trivial(cfg5, ledger):
    bd = boundary_map(cfg5, ledger["f"], ledger["u"])
    for h in (cfg5.element(unit=2) ** 4, cfg5.u() ** 4, ledger["xy"]):
        assert is_nth_power(cfg5, h, 4)
        for place in bd.places():
            assert kummer_character(cfg5, bd, h, 4, place) == cfg5.spec.one()


def test_is_nth_power_and_same_cover(cfg5):
    x, y, u = cfg5.x(), cfg5.y(), cfg5.u()
    assert is_nth_power(cfg5, cfg5.element(), 4)
    assert not is_nth_power(cfg5, u, 4)
    assert is_nth_power(cfg5, u ** 4, 4)
    assert is_nth_power(cfg5, x * y, 4)  # = u^M with M = 4
    assert not is_nth_power(cfg5, cfg5.const(2), 4)
    assert is_nth_power(cfg5, cfg5.const(2), 1)
    assert same_kummer_cover(cfg5, x, y, 4)
    assert not same_kummer_cover(cfg5, x, u, 4)
    assert not same_kummer_cover(cfg5, x, cfg5.const(2), 4)
    one_unit = cfg5.element(unit={(0, 0, 0): 1, (0, 0, 1): 2})
    h = cfg5.element(unit=3, e_x=1, primes={"P(1,2)": 4})
    assert same_kummer_cover(cfg5, h, h * one_unit, 4)
    assert same_kummer_cover(cfg5, h, h ** -1, 4)


def test_orientation_constants():
    # the two axis branches pair the coordinate covers with opposite signs,
    # and the u-cover carries its own global orientation
    assert AXIS_ORIENT == {"X": 1, "Y": -1}


def test_prop21(cfg5, cfg7):
    for cfg, levels in ((cfg5, (2, 4)), (cfg7, (2, 3, 6))):
        for n in levels:
            out = prop21_check(cfg, n)
            assert out["ok"], (cfg.spec.q, n, out)
            assert out["rho_antidiagonal_x"] and out["rho_antidiagonal_y"]
            assert out["lambda_diagonal_u"]
            assert out["u_cover_cancellation"]
            assert out["cyclic_order"] == n
            if n > 1:
                assert out["u_cover_separates"]


def test_thm41(cfg5, cfg7):
    out = thm41_model(cfg5, 4, 3, sample_pids=("P(1,1)", "P(2,2)", "Q2(2)"))
    assert out["ok"]
    assert out["xy_covers_agree"]
    assert out["u_cover_inertia"] == "unresolved"
    out7 = thm41_model(cfg7, 3, 2, sample_pids=("P(1,1)", "P(3,2)"))
    assert out7["ok"]


def test_frobenius_sum_is_exact_zero(cfg5, ledger):
    # the unramified contributions cancel in Z before any reduction mod d
    for d in (1, 2, 3, 7, 12):
        rep = product_formula(cfg5, ledger["f"], ledger["u"], n=2, d_frob=d)
        assert rep["covers"][f"Unramified({d})"]["sum"] == 0
