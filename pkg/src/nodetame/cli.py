"""Command line front end.

    nodetame selfcheck [--json]
    nodetame campaign --q 5 --M 4 --n 4 [--e 1] [--dfrob 2] [--trials 300]
                      [--seed 0] [--prec 8] [--out report.json] [--figures]
    nodetame eval symbol    --q 5 --M 4 --place "P(2,2)" "P(2,2)" "u"
    nodetame eval invariant --q 5 --M 4 --axis X "P(2,2)" "u"
    nodetame eval character --q 5 --M 4 --cover "Kummer(x,4)" --place X "P(2,2)" "u"
    nodetame eval boundary  --q 5 --M 4 [--n 4] "P(2,2)" "u"

Exit codes: 0 success, 1 a check or campaign trial failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import ff
from .campaign import CampaignConfig, build_ring, run_campaign, run_selfcheck
from .cft import boundary_map, kummer_character, local_character
from .errors import NodetameError
from .grammar import parse_cover, parse_element
from .milnor import axis_u_boundary, k2_axis_invariant, tame_symbol_at_prime
from .node_ring import AXES, RingConfig
from .series import encode_series


def _field_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=int, required=True, help="base field size (prime power)")
    p.add_argument("--e", type=int, default=1, help="extension degree of q over its prime")
    p.add_argument("--M", type=int, required=True, help="node exponent (x*y = u^M)")
    p.add_argument("--prec", type=int, default=24, help="series window length")


def _make_ring(args) -> RingConfig:
    p = round(args.q ** (1.0 / args.e))
    if p ** args.e != args.q:
        raise NodetameError(f"q={args.q} is not a prime power with e={args.e}")
    spec = ff.field_spec(p, args.e)
    cfg = RingConfig(spec, args.M, precision=args.prec)
    cfg.install_standard_primes()
    return cfg


def _cmd_selfcheck(args) -> int:
    rep = run_selfcheck()
    if args.json:
        print(json.dumps(rep, indent=2, sort_keys=True))
    else:
        for check in rep["checks"]:
            line = f"ok   {check['name']}" if check["ok"] else f"FAIL {check['name']}"
            if not check["ok"] and "error" in check:
                line += f"  ({check['error']})"
            print(line)
        print(f"{rep['passed']} passed, {rep['failed']} failed")
    return 0 if rep["ok"] else 1


def _cmd_campaign(args) -> int:
    cc = CampaignConfig(q=args.q, e=args.e, M=args.M, n=args.n, d_frob=args.dfrob,
                        trials=args.trials, seed=args.seed, prec=args.prec)
    t0 = time.monotonic()
    rep = run_campaign(cc)
    elapsed = time.monotonic() - t0
    for label, agg in rep["aggregates"]["covers"].items():
        print(f"{label}: {agg['pass']} pass, {agg['fail']} fail")
    print(f"{rep['passes']}/{cc.trials} trials ok "
          f"({len(rep['aggregates']['places'])} places, {elapsed:.2f}s, u-cover experimental)")
    if args.out:
        from .report import render_figures, write_json, write_places_csv

        write_json(args.out, rep)
        print(f"wrote {args.out}")
        if args.figures:
            out_dir = os.path.dirname(os.path.abspath(args.out))
            csv_path = os.path.join(out_dir, "base_places.csv")
            write_places_csv(csv_path, rep)
            print(f"wrote {csv_path}")
            for path in render_figures(out_dir, rep):
                print(f"wrote {path}")
    elif args.figures:
        raise NodetameError("--figures needs --out to pick a directory")
    return 0 if rep["ok"] else 1


def _parse_pair(cfg: RingConfig, args):
    return parse_element(cfg, args.f), parse_element(cfg, args.g)


def _cmd_eval(args) -> int:
    cfg = _make_ring(args)
    f, g = _parse_pair(cfg, args)
    if args.what == "symbol":
        place = args.place
        if place is None:
            raise NodetameError("eval symbol needs --place (a prime id, X, or Y)")
        if place in AXES:
            print(encode_series(axis_u_boundary(cfg, f, g, place)))
        else:
            print(encode_series(tame_symbol_at_prime(cfg, f, g, place)))
        return 0
    if args.what == "invariant":
        if args.axis not in AXES:
            raise NodetameError("eval invariant needs --axis X or --axis Y")
        inv = k2_axis_invariant(cfg, f, g, args.axis)
        print(repr(inv))
        return 0
    if args.what == "character":
        if not args.cover or not args.place:
            raise NodetameError("eval character needs --cover and --place")
        cover = parse_cover(args.cover)
        bd = boundary_map(cfg, f, g)
        value = local_character(cfg, bd, cover, args.place)
        out = {"value": ff.encode_elt(value) if isinstance(value, ff.FqElt) else int(value),
               "cover": cover.label, "place": args.place}
        if cover.kind == "kummer" and cover.h == "u":
            out["experimental"] = True
        print(json.dumps(out, sort_keys=True))
        return 0
    if args.what == "boundary":
        bd = boundary_map(cfg, f, g)
        places: dict = {}
        for pid, a in bd.prime_parts:
            places[pid] = encode_series(a)
        for ax, inv in bd.axis_parts:
            places[ax] = {"rho": ff.encode_elt(inv.rho), "b": inv.b,
                          "lam": ff.encode_elt(inv.lam)}
        out = {"schema": 1, "kind": "boundary", "pair": [args.f, args.g],
               "experimental": {"u_cover": True}, "places": places}
        if args.n:
            out["level"] = bd.level(args.n)
        print(json.dumps(out, indent=2, sort_keys=True))
        return 0
    raise NodetameError(f"unknown eval target {args.what!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nodetame",
                                 description="exact tame symbols and reciprocity checks "
                                             "on the node ring F_q[[u,x,y]]/(xy - u^M)")
    sub = ap.add_subparsers(dest="command", required=True)

    sc = sub.add_parser("selfcheck", help="replay the frozen worked examples")
    sc.add_argument("--json", action="store_true", help="emit the full JSON report")
    sc.set_defaults(fn=_cmd_selfcheck)

    camp = sub.add_parser("campaign", help="randomized reciprocity campaign")
    camp.add_argument("--q", type=int, required=True)
    camp.add_argument("--e", type=int, default=1)
    camp.add_argument("--M", type=int, required=True)
    camp.add_argument("--n", type=int, required=True, help="Kummer level (divides M and q-1)")
    camp.add_argument("--dfrob", type=int, default=2, help="unramified cover degree")
    camp.add_argument("--trials", type=int, default=300)
    camp.add_argument("--seed", type=int, default=0)
    camp.add_argument("--prec", type=int, default=8)
    camp.add_argument("--out", help="write the JSON report here")
    camp.add_argument("--figures", action="store_true",
                      help="also write base_places.csv and PNG figures next to --out")
    camp.set_defaults(fn=_cmd_campaign)

    ev = sub.add_parser("eval", help="evaluate one symbol, invariant, character, or boundary")
    ev.add_argument("what", choices=("symbol", "invariant", "character", "boundary"))
    _field_args(ev)
    ev.add_argument("--n", type=int, help="level for the boundary view")
    ev.add_argument("--place", help="prime id, X, or Y")
    ev.add_argument("--axis", help="X or Y (for invariant)")
    ev.add_argument("--cover", help='e.g. "Kummer(x,4)" or "Unramified(3)"')
    ev.add_argument("f", help="first element, in the element grammar")
    ev.add_argument("g", help="second element, in the element grammar")
    ev.set_defaults(fn=_cmd_eval)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except NodetameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
