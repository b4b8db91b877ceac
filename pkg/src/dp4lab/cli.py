"""Command-line front end: ``dp4 <subcommand> [options]``.

Results go to standard output as JSON (or CSV with ``--format csv``); ``--out PATH`` also writes
the CSV form to a file.  Wall-clock timings live in a separate "timing" object so the "result"
payload is byte-identical across reruns with the same configuration and seed.

Exit codes: 0 success, 1 a verification check failed, 2 invalid class or configuration,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from fractions import Fraction
from typing import Sequence

from . import __version__
from . import picard as pc
from . import posetq as P
from . import strata as st
from . import zeta as zt
from .ffpoly import ConfigurationError, PointConfig, PreconditionError, rational_point

log = logging.getLogger("dp4lab")

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_CAP = 0, 1, 2, 3
SURFACE_COMMANDS = {"lines", "nef", "count", "sweep"}


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 already; keep the message on stderr
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, help="field size (prime power)")
    common.add_argument("--config", help="JSON configuration file; flags override its values")
    common.add_argument("--seed", type=int, help="seed for sampled checks")
    common.add_argument("--jobs", type=int, help="parallel width")
    common.add_argument("--format", choices=["json", "csv"], help="emission format")
    common.add_argument("--out", help="also write CSV to this path")
    common.add_argument("--no-timing", action="store_true", help="omit the timing object")

    p = _Parser(prog="dp4", description="Rational curves on split degree-4 del Pezzo surfaces over F_q.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("lines", parents=[common], help="the 16 lines and the disjoint triples")

    s = sub.add_parser("nef", parents=[common], help="nef cone data, or invariants of one class")
    s.add_argument("--class", dest="cls", help="class as a,a',k1,k2,k3,k4")
    s.add_argument("--eps", type=_fraction, default=Fraction(0))

    s = sub.add_parser("alpha", parents=[common], help="the alpha constant")
    s.add_argument("--mode", choices=["exact", "lattice"], default="exact")
    s.add_argument("--dilation", type=int, default=30)
    s.add_argument("--eps", type=_fraction, default=Fraction(0))

    s = sub.add_parser("count", parents=[common], help="count curves of a class")
    s.add_argument("--class", dest="cls", required=True, help="class as a,a',k1,k2,k3,k4")
    s.add_argument("--method", choices=["naive", "fibered", "sieve", "virtual"], default="fibered")
    s.add_argument("--gamma-max", type=int)
    s.add_argument("--deg-max", type=int)

    s = sub.add_parser("zeta", parents=[common], help="Euler products")
    s.add_argument("--what", choices=["tamagawa", "residue", "factor", "coefficient", "predictor"],
                   required=True)
    s.add_argument("--truncation", type=int, help="degree truncation D")
    s.add_argument("--d", type=int, default=1, help="point degree (factor) or height (predictor)")
    s.add_argument("--t", help="four comma-separated rationals, or 'formal'")
    s.add_argument("--k", help="four comma-separated degrees (coefficient)")
    s.add_argument("--deg-max", type=int)
    s.add_argument("--eps", type=_fraction, default=Fraction(0))

    s = sub.add_parser("verify", parents=[common], help="run internal consistency checks")
    s.add_argument("--suite", choices=["poset", "strata", "zeta", "all"], default="all")

    s = sub.add_parser("sweep", parents=[common], help="count all nef classes up to a height")
    s.add_argument("--hmax", type=int, required=True)
    s.add_argument("--method", choices=["naive", "fibered", "sieve"], default="fibered")

    s = sub.add_parser("chain", parents=[common], help="chain data and Moebius values")
    s.add_argument("chains", nargs="+", help='one chain, or a pair f0 f, e.g. "1[0]" or "2[l1,1+l1,2]"')
    return p


DEFAULTS = {"q": 3, "seed": 0, "jobs": 1, "format": "json", "out": None,
            "naive_budget": st.NAIVE_BUDGET, "fiber_budget": st.FIBER_BUDGET,
            "w_budget": st.W_BUDGET, "lattice_cap": st.LATTICE_CAP,
            "truncation": zt.DEFAULT_D, "gamma_max": None, "deg_max": 2, "points": None}


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read configuration: {exc}") from exc
        unknown = set(doc) - set(DEFAULTS)
        if unknown:
            raise ConfigurationError(f"unknown configuration keys: {sorted(unknown)}")
        cfg.update(doc)
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def point_config(cfg: dict) -> PointConfig | None:
    pts = cfg.get("points")
    if pts is None:
        return None
    try:
        return PointConfig(cfg["q"], tuple(pts["p"]), tuple(pts["pprime"]))
    except (KeyError, TypeError) as exc:
        raise ConfigurationError('points must be {"p": [4 codes], "pprime": [4 codes]}') from exc


def _parse_class(text: str) -> pc.PicClass:
    alpha = pc.PicClass.parse(text)
    if not pc.is_nef(alpha):
        raise pc.InvalidClassError(f"class {text} is not nef")
    return alpha


def _ints(text: str, n: int) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"expected {n} integers, got {text!r}") from exc
    if len(vals) != n:
        raise UsageError(f"expected {n} integers, got {text!r}")
    return vals


def _frac_json(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator, "decimal": float(x)}


# -- subcommands --------------------------------------------------------------------

def cmd_lines(args, cfg):
    lines = pc.minus_one_classes()
    triples = pc.disjoint_triples()
    return {"count": len(lines), "lines": [c.text() for c in lines], "triples": len(triples)}, None


def cmd_nef(args, cfg):
    if args.cls:
        alpha = _parse_class(args.cls)
        inv = pc.class_invariants(alpha)
        ch = pc.chamber_decompose(alpha)
        rep = pc.ell_and_cone(alpha, args.eps)
        return {"class": alpha.text(), "h": inv.h, "a": inv.a, "aprime": inv.aprime, "k": list(inv.k),
                "chamber": list(ch.coefficients), "ell": str(rep.ell), "in_shrunk_cone": rep.member_of_shrunk_cone}, None
    cone = pc.nef_cone()
    return {"rays": [list(r) for r in cone.rays], "ray_count": len(cone.rays),
            "facets": len(cone.inequalities)}, None


def cmd_alpha(args, cfg):
    cone = None if args.eps == 0 else pc.ShrunkCone(args.eps)
    res = pc.alpha_constant(cone, mode=args.mode, dilation=args.dilation)
    return {"eps": str(args.eps), "mode": res.mode, "value": _frac_json(res.value), "warning": res.warning}, None


def _predicted(q: int, a: int, ap: int, k: Sequence[int], cfg: dict) -> Fraction:
    mt = st.main_term_virtual(q, k, cfg["gamma_max"], cfg["deg_max"])
    return Fraction(q) ** (2 * a + 2 * ap + 4) * mt / (q - 1) ** 2


def _run_count(q, alpha, method, cfg, pcfg):
    if method == "naive":
        return st.count_naive(q, alpha, budget=cfg["naive_budget"], jobs=cfg["jobs"], cfg=pcfg)
    if method == "fibered":
        return st.count_fibered(q, alpha, budget=cfg["fiber_budget"], w_budget=cfg["w_budget"],
                                jobs=cfg["jobs"], cfg=pcfg)
    return st.count_sieve_exact(q, alpha, cap=cfg["lattice_cap"], w_budget=cfg["w_budget"], cfg=pcfg)


def cmd_count(args, cfg):
    q = cfg["q"]
    alpha = _parse_class(args.cls)
    pcfg = point_config(cfg)
    inv = pc.class_invariants(alpha)
    if args.method == "virtual":
        t0 = time.perf_counter()
        pred = _predicted(q, inv.a, inv.aprime, inv.k, cfg)
        res = {"q": q, "class": alpha.text(), "method": "virtual", "gamma_max": cfg["gamma_max"],
               "deg_max": cfg["deg_max"], "predicted_curve_count": _frac_json(pred)}
        return res, {"seconds": time.perf_counter() - t0}
    rep = _run_count(q, alpha, args.method, cfg, pcfg)
    d = rep.to_dict()
    secs = d.pop("seconds")
    row = rep.csv_row()
    return d, {"seconds": secs, "_csv": [row]}


def cmd_zeta(args, cfg):
    q = cfg["q"]
    D = cfg["truncation"]
    if args.what == "tamagawa":
        return zt.tamagawa(q, D).to_dict(), None
    if args.what == "residue":
        r = zt.residue_compare(q, D)
        diff = r.difference
        return {"q": q, "D": D, "closed_form": r.closed_form.to_dict(), "abel_limit": r.abel_limit.to_dict(),
                "difference": str(diff), "per_factor_exact": r.per_factor_exact}, None
    if args.what == "factor":
        if args.t in (None, "formal"):
            caps = _ints(args.k, 4) if args.k else (4, 4, 4, 4)
            S = zt.virtual_zeta_factor_formal(q, args.d, caps)
            return {"q": q, "d": args.d, "series": zt.format_series(S)}, None
        t = tuple(_fraction(x) for x in args.t.split(","))
        return {"q": q, "d": args.d, "value": _frac_json(zt.virtual_zeta_factor(q, args.d, t))}, None
    if args.what == "coefficient":
        if not args.k:
            raise UsageError("--k is required for --what coefficient")
        c = zt.mobius_coefficient_compare(q, _ints(args.k, 4), cfg["deg_max"])
        return {"q": q, "k": list(c.k), "deg_max": c.deg_max, "poset_sum": str(c.poset_sum),
                "product_coefficient": str(c.product_coefficient), "difference": str(c.difference)}, None
    rep = zt.manin_predictor(q, args.eps, args.d, D)
    return rep.to_dict(), None


def _verify_poset() -> dict:
    T = P.TRIVIAL
    return {
        "euler_trivial": P.local_euler_polynomial(T, 12) == {0: 1, 2: -6, 3: 8, 4: -3},
        "euler_atom": all(P.local_euler_polynomial(P.atom_chain(d, 0), 2 * d + 8)
                          == {2 * d: 1, 2 * d + 1: -2, 2 * d + 3: 2, 2 * d + 4: -1} for d in range(1, 5)),
        "mobius_trivial_zero": P.mobius_local(T, P.Chain.parse("1[0]")) == -3,
    }


def _verify_strata(cfg) -> dict:
    F = pc.F_CLASS
    return {
        "forced_zero_q3": st.count_fibered(3, F).curve_count == 0,
        "forced_value_q4": st.count_fibered(4, F).curve_count == 60,
        "naive_equals_fibered": st.count_naive(3, pc.MINUS_K + F + pc.FPRIME).curve_count
        == st.count_fibered(3, pc.MINUS_K + F + pc.FPRIME).curve_count,
        "obstructed_probe": not st.stratum_dim(
            1, 1, P.SaturatedElement.from_dict({rational_point(3, 0): P.atom_chain(3, 0)}), 3).unobstructed,
    }


def _verify_zeta() -> dict:
    return {
        "residue_exact": all(zt.residue_compare(q, 4).difference == 0 for q in (2, 3, 4, 5)),
        "tamagawa_D1": zt.tamagawa(3, 1).exact == Fraction(6561, 64) * (Fraction(2, 3) ** 6 * Fraction(28, 9)) ** 4,
        "coefficient_q2": zt.mobius_coefficient_compare(2, (1, 0, 0, 0), 2).difference == 0,
        "betti": zt.betti_constant(4, (2, 2)) == 2**32,
    }


def cmd_verify(args, cfg):
    suites = ["poset", "strata", "zeta"] if args.suite == "all" else [args.suite]
    out = {}
    for s in suites:
        out[s] = {"poset": _verify_poset, "zeta": _verify_zeta}.get(s, lambda: _verify_strata(cfg))()
    ok = all(v for d in out.values() for v in d.values())
    return {"suites": out, "passed": ok}, {"_exit": EXIT_OK if ok else EXIT_FAILED}


def nef_classes_up_to(hmax: int) -> list[tuple[int, int, tuple[int, ...]]]:
    out = []
    for chunk in pc.nef_invariant_points(hmax):
        for row in chunk.tolist():
            out.append((row[0], row[1], tuple(row[2:])))
    return sorted(out, key=lambda r: (2 * r[0] + 2 * r[1] - sum(r[2]), r))


def cmd_sweep(args, cfg):
    q = cfg["q"]
    pcfg = point_config(cfg)
    rows, results, skipped = [], [], []
    t0 = time.perf_counter()
    for a, ap, k in nef_classes_up_to(args.hmax):
        alpha = pc.PicClass.from_invariants(a, ap, k)
        try:
            rep = _run_count(q, alpha, args.method, cfg, pcfg)
        except st.ResourceCapError as exc:
            skipped.append({"class": alpha.text(), "reason": str(exc)})
            continue
        pred = _predicted(q, a, ap, k, cfg)
        rows.append(rep.csv_row(float(pred)))
        d = rep.to_dict()
        d.pop("seconds")
        d["predicted"] = float(pred)
        results.append(d)
    return ({"q": q, "hmax": args.hmax, "method": args.method, "counts": results, "skipped": skipped},
            {"seconds": time.perf_counter() - t0, "_csv": rows})


def cmd_chain(args, cfg):
    chains = [P.Chain.parse(c) for c in args.chains]
    info = [{"chain": str(c), "gamma": c.gamma, "rank": c.rank,
             "covers": [str(x) for x in P.chain_covers(c)]} for c in chains]
    res = {"chains": info}
    if len(chains) == 2:
        res["mobius"] = P.mobius_local(chains[0], chains[1])
    return res, None


COMMANDS = {"lines": cmd_lines, "nef": cmd_nef, "alpha": cmd_alpha, "count": cmd_count, "zeta": cmd_zeta,
            "verify": cmd_verify, "sweep": cmd_sweep, "chain": cmd_chain}


def dispatch(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        cfg = resolve_config(args)
        random.seed(cfg["seed"])
        if args.command in SURFACE_COMMANDS and cfg["q"] < 3:
            raise st.InvalidSurfaceError(f"the surface model needs q >= 3 (got q={cfg['q']})")
        result, extra = COMMANDS[args.command](args, cfg)
    except (UsageError, ConfigurationError, PreconditionError, pc.InvalidClassError, zt.DomainError) as exc:
        print(f"dp4: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except st.ResourceCapError as exc:
        print(f"dp4: resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    extra = dict(extra or {})
    code = extra.pop("_exit", EXIT_OK)
    csv_rows = extra.pop("_csv", None)
    if cfg["format"] == "csv" and csv_rows is not None:
        stdout.write(st.reports_to_csv(csv_rows))
    else:
        doc = {"command": args.command, "result": result}
        if extra and not args.no_timing:
            doc["timing"] = extra
        stdout.write(json.dumps(doc, sort_keys=True, default=str) + "\n")
    if cfg["out"] and csv_rows is not None:
        with open(cfg["out"], "w") as fh:
            fh.write(st.reports_to_csv(csv_rows))
    return code


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
