"""Command-line surface: reproducible experiments emitting machine-readable
JSON reports.

Verbs: build, verify, character-field, end-algebra, descend, norm-solve,
theta, hilbert, p2, table.  Reports are byte-identical across reruns with
the same config and seed (timing is added only under --timing).  Exit
codes: 0 ok, 1 certification failure, 2 config-invalid, 3 too-large,
4 not-found-within-bound."""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import __version__
from .errors import (
    ConfigInvalid,
    NotFoundWithinBound,
    TooLarge,
    WeilError,
)
from .fields import (
    GaloisAut,
    MODULAR,
    RATIONAL,
    SubfieldTag,
    cyclonum_from_json,
    field_make,
    is_prime,
)
from .finite import sp_enumerate, sp_order
from .linalg import Matrix
from .rationality import character_field, endomorphism_algebra, iso_test
from .descent import (
    build_weil,
    realise_even,
    realise_full,
    realise_modular,
    realise_odd,
    solve_norm_equation,
)
from .symbols import (
    A_CLASSES,
    INF,
    compute_A_for_Q2,
    describe_subfield,
    hilbert_symbol,
    p2_field_tables,
    quaternion_ramification,
    schur_index_decision,
)
from .theta import CommutingPair, theta_lift, theta_unitarity
from .weil import (
    cocycle_certificate,
    even_odd_split,
    heisenberg_hom_check,
    heisenberg_rep,
    intertwining_check,
    semilinearity_check,
    weil_twist_check,
)

SIZE_CAP = 200
SP_CAP = 10**5

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_TOO_LARGE = 3
EXIT_NOT_FOUND = 4


def _model_args(args, need_m=True):
    p, f, m = args.p, args.f, args.m
    if not (is_prime(p) and p % 2 == 1):
        raise ConfigInvalid(f"p = {p} must be an odd prime")
    if f < 1 or (need_m and m < 1):
        raise ConfigInvalid("f and m must be positive")
    q = p**f
    if need_m and q**m > args.cap and not args.force:
        raise ConfigInvalid(
            f"q^m = {q ** m} exceeds the size cap {args.cap}; pass --force to override"
        )
    ell = getattr(args, "ell", None)
    if ell is not None and (not is_prime(ell) or ell == 2 or ell == p):
        raise ConfigInvalid(f"ell = {ell} must be an odd prime different from p")
    if args.twist % p == 0:
        raise ConfigInvalid("twist must be a unit")
    return p, f, m, ell


def _transcript(report, name, ok, detail=None):
    entry = {"check": name, "pass": bool(ok)}
    if detail is not None:
        entry["detail"] = detail
    report["transcript"].append(entry)
    if not ok:
        report["failed"] = True


def cmd_build(args, report):
    p, f, m, ell = _model_args(args)
    psi, space, rep = build_weil(p, f, m, args.twist, ell=ell)
    rng = random.Random(args.seed)
    order = sp_order(m, p**f)
    if order <= 30:
        els = list(sp_enumerate(space, SP_CAP))
        pairs = [(a, b) for a in els for b in els]
        mode = "exhaustive"
    else:
        els = list(sp_enumerate(space, SP_CAP))
        pairs = [(rng.choice(els), rng.choice(els)) for _ in range(args.pairs)]
        mode = f"{args.pairs} seeded pairs"
    cert = cocycle_certificate(rep, pairs)
    _transcript(report, "cocycle_values_pm1", cert.all_pm_one(), cert.summary())
    out = rep.to_json()
    out["cocycle"] = {"mode": mode, **cert.summary()}
    report["results"] = out
    return EXIT_OK


def cmd_verify(args, report):
    p, f, m, ell = _model_args(args)
    q = p**f
    rng = random.Random(args.seed)
    psi, space, rep = build_weil(p, f, m, args.twist, ell=ell)
    hrep = heisenberg_rep(psi, space)
    K = rep.field

    exhaustive_h = args.exhaustive or q ** (2 * m + 1) <= 729
    npairs = heisenberg_hom_check(hrep, exhaustive_h, rng=rng, samples=args.pairs)
    _transcript(report, "heisenberg_homomorphism", True, {"pairs": npairs})

    from .linalg import intertwiner_space

    comm = intertwiner_space(hrep.gens_images(), hrep.gens_images())
    _transcript(report, "stone_von_neumann_commutant", len(comm) == 1, {"dim": len(comm)})
    conj_hits = []
    for u in K.galois_exponents():
        if u == 1:
            continue
        if iso_test(hrep.conjugate(GaloisAut(K, u)), hrep) is not None:
            conj_hits.append(u)
    _transcript(report, "heisenberg_galois_rigidity", not conj_hits, {"fixing": conj_hits})

    intertwining_check(rep, hrep)
    _transcript(report, "weil_intertwines_heisenberg", True)

    order = sp_order(m, q)
    els = list(sp_enumerate(space, SP_CAP))
    if args.exhaustive or order <= 30:
        pairs = [(a, b) for a in els for b in els]
    else:
        pairs = [(rng.choice(els), rng.choice(els)) for _ in range(args.pairs)]
    cert = cocycle_certificate(rep, pairs)
    _transcript(report, "cocycle_values_pm1", cert.all_pm_one(), cert.summary())

    for u in K.galois_exponents():
        if u != 1:
            semilinearity_check(psi, space, GaloisAut(K, u))
    _transcript(report, "galois_semilinearity", True)

    twists = [g for g in space.fq.elements()[1:3] if not g.is_zero()]
    for g in twists:
        weil_twist_check(psi, space, g)
    _transcript(report, "twisting_identities", True, {"twists": len(twists)})

    even, odd = even_odd_split(rep)
    dims_ok = even.dim == (q**m + 1) // 2 and odd.dim == (q**m - 1) // 2
    for tok in rep.gen_names:
        even.image(tok)
        odd.image(tok)
    _transcript(report, "even_odd_split", dims_ok, {"even": even.dim, "odd": odd.dim})
    report["results"] = {"q": q, "m": m, "checks_run": len(report["transcript"])}
    return EXIT_CHECK_FAILED if report.get("failed") else EXIT_OK


def cmd_character_field(args, report):
    p, f, m, ell = _model_args(args)
    psi, space, rep = build_weil(p, f, m, args.twist, ell=ell)
    if args.part == "heisenberg":
        target = heisenberg_rep(psi, space)
    elif args.part == "full":
        target = rep
    else:
        even, odd = even_odd_split(rep)
        target = even if args.part == "even" else odd
    tag = character_field(target, bound=SP_CAP)
    report["results"] = {
        "part": args.part,
        "tag": tag.to_json(),
        "name": describe_subfield(tag),
        "degree_over_prime": tag.degree_over_prime(),
    }
    return EXIT_OK


def cmd_end_algebra(args, report):
    p, f, m, ell = _model_args(args)
    psi, space, rep = build_weil(p, f, m, args.twist, ell=ell)
    even, odd = even_odd_split(rep)
    target = {"even": even, "odd": odd, "full": rep, "heisenberg": None}[args.part]
    if target is None:
        target = heisenberg_rep(psi, space)
    K = rep.field
    if args.subfield == "Q":
        tag = K.full_tag()
    elif args.subfield == "char":
        tag = character_field(target, bound=SP_CAP)
    else:
        gens = [int(x) for x in args.subfield.split(",")]
        tag = SubfieldTag(K, gens)
    alg = endomorphism_algebra(target, tag, bound=SP_CAP)
    report["results"] = alg.to_json()
    report["results"]["subfield_name"] = describe_subfield(tag)
    return EXIT_OK


def cmd_descend(args, report):
    p, f, m, ell = _model_args(args)
    extras = {}
    if ell is not None:
        if args.part == "full":
            raise ConfigInvalid("modular descent takes --part even or odd")
        result, extras = realise_modular(p, f, m, ell, args.part, args.twist, args.bound)
    elif args.part == "full":
        result = realise_full(p, f, m, args.twist)
    elif args.part == "even":
        result = realise_even(p, f, m, args.twist)
    elif args.part == "odd":
        result, extras = realise_odd(p, f, m, args.twist, args.bound)
    else:
        raise ConfigInvalid(f"unknown part {args.part}")
    out = result.to_json()
    out.update({k: v for k, v in extras.items() if k != "obstruction"})
    if extras.get("obstruction"):
        out["obstruction"] = extras["obstruction"]
    out["target_name"] = describe_subfield(result.target)
    report["results"] = out
    _transcript(report, "descent_certified", True, result.transcript)
    return EXIT_OK


def cmd_norm_solve(args, report):
    n = args.n
    K = field_make(RATIONAL, n) if args.ell is None else field_make(MODULAR, n, args.ell)
    top = SubfieldTag(K, [int(x) for x in args.top.split(",")])
    bottom = SubfieldTag(K, [int(x) for x in args.bottom.split(",")])
    target = K.from_int(args.target)
    lam, transcript = solve_norm_equation(K, top, bottom, target, args.bound)
    report["results"] = {"lambda": lam.to_json(), "transcript": transcript}
    _transcript(report, "norm_verified", True, {"target": args.target})
    return EXIT_OK


def cmd_theta(args, report):
    with open(args.pair) as fh:
        desc = json.load(fh)
    fld = desc["field"]
    K = (
        field_make(RATIONAL, fld["n"])
        if fld["char"] == 0
        else field_make(MODULAR, fld["n"], fld["char"])
    )

    def parse_gens(obj):
        return {
            name: Matrix(K, [[cyclonum_from_json(e, K) for e in row] for row in mat])
            for name, mat in obj.items()
        }

    pair = CommutingPair(K, desc["dim"], parse_gens(desc["h1"]), parse_gens(desc["h2"]))
    lifts = []
    results = []
    for entry in desc["pi1"]:
        pi1 = parse_gens(entry["gens"])
        lift = theta_lift(pair, pi1)
        lifts.append((entry.get("label", f"pi{len(lifts)}"), lift))
        results.append({"label": lifts[-1][0], **lift.to_json()})
    uni = []
    for i in range(len(lifts)):
        for j in range(i + 1, len(lifts)):
            uni.append(
                {
                    "pair": [lifts[i][0], lifts[j][0]],
                    **theta_unitarity(lifts[i][1], lifts[j][1]),
                }
            )
    report["results"] = {"lifts": results, "unitarity": uni}
    return EXIT_OK


def cmd_hilbert(args, report):
    if args.place is not None:
        v = INF if args.place == "inf" else int(args.place)
        s = hilbert_symbol(args.a, args.b, v)
        report["results"] = {"a": args.a, "b": args.b, "place": args.place, "symbol": s}
    else:
        ram = quaternion_ramification(args.a, args.b)
        report["results"] = {
            "a": args.a,
            "b": args.b,
            "ramification": sorted(str(v) for v in ram),
        }
    return EXIT_OK


def cmd_p2(args, report):
    if args.A == "auto":
        a_class = compute_A_for_Q2()
        report["results"] = {"A_for_Q2": a_class, **p2_field_tables(a_class)}
    else:
        report["results"] = p2_field_tables(args.A)
    return EXIT_OK


def cmd_table(args, report):
    ps = [int(x) for x in args.p.split(",")]
    fs = [int(x) for x in args.f.split(",")]
    rows = []
    for p in ps:
        if not (is_prime(p) and p % 2 == 1):
            raise ConfigInvalid(f"p = {p} must be an odd prime")
        for f in fs:
            rows.append(schur_index_decision(p, f))
    report["results"] = {"rows": rows}
    if args.csv:
        lines = ["q,char_field,even_realisation,odd_realisation,odd_index"]
        for r in rows:
            lines.append(
                "%d,%s,%s,%s,%d"
                % (
                    r["q"],
                    r["char_field"]["name"],
                    r["even"]["realisation_name"],
                    r["odd"]["realisation_name"],
                    r["odd"]["schur_index"],
                )
            )
        with open(args.csv, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "character-field": cmd_character_field,
    "end-algebra": cmd_end_algebra,
    "descend": cmd_descend,
    "norm-solve": cmd_norm_solve,
    "theta": cmd_theta,
    "hilbert": cmd_hilbert,
    "p2": cmd_p2,
    "table": cmd_table,
}


def make_parser():
    ap = argparse.ArgumentParser(
        prog="weil",
        description="Exact Weil representations, their Galois descent, and the"
        " associated field/index invariants.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, need_model=True):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None, help="write the JSON report here")
        sp.add_argument("--timing", action="store_true")
        if need_model:
            sp.add_argument("--p", type=int, required=True)
            sp.add_argument("--f", type=int, default=1)
            sp.add_argument("--m", type=int, default=1)
            sp.add_argument("--twist", type=int, default=1)
            sp.add_argument("--ell", type=int, default=None)
            sp.add_argument("--cap", type=int, default=SIZE_CAP)
            sp.add_argument("--force", action="store_true")

    sp = sub.add_parser("build", help="emit the Weil model as JSON")
    common(sp)
    sp.add_argument("--pairs", type=int, default=50)

    sp = sub.add_parser("verify", help="run the exact property suite")
    common(sp)
    sp.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--pairs", type=int, default=200)

    sp = sub.add_parser("character-field", help="character field of a part")
    common(sp)
    sp.add_argument(
        "--part", choices=["even", "odd", "full", "heisenberg"], default="odd"
    )

    sp = sub.add_parser("end-algebra", help="endomorphism algebra over a subfield")
    common(sp)
    sp.add_argument(
        "--part", choices=["even", "odd", "full", "heisenberg"], default="odd"
    )
    sp.add_argument(
        "--subfield",
        default="char",
        help="'char', 'Q', or comma-separated stabilizer generators",
    )

    sp = sub.add_parser("descend", help="realise a part over its predicted field")
    common(sp)
    sp.add_argument("--part", choices=["full", "even", "odd"], default="full")
    sp.add_argument("--bound", type=int, default=20)

    sp = sub.add_parser("norm-solve", help="bounded relative norm equation")
    common(sp, need_model=False)
    sp.add_argument("--n", type=int, required=True, help="ambient cyclotomic order")
    sp.add_argument("--ell", type=int, default=None)
    sp.add_argument("--top", required=True, help="stabilizer generators of the top")
    sp.add_argument("--bottom", required=True, help="stabilizer generators of the bottom")
    sp.add_argument("--target", type=int, default=-1)
    sp.add_argument("--bound", type=int, default=20)

    sp = sub.add_parser("theta", help="theta lifts for a commuting pair")
    common(sp, need_model=False)
    sp.add_argument("--pair", required=True, help="pair description JSON file")

    sp = sub.add_parser("hilbert", help="Hilbert symbol / ramification set")
    common(sp, need_model=False)
    sp.add_argument("a", type=int)
    sp.add_argument("b", type=int)
    sp.add_argument("-v", "--place", default=None, help="prime or 'inf'")

    sp = sub.add_parser("p2", help="p = 2 field/index tables")
    common(sp, need_model=False)
    sp.add_argument("--A", choices=list(A_CLASSES) + ["auto"], default="auto")

    sp = sub.add_parser("table", help="character/realisation field table rows")
    common(sp, need_model=False)
    sp.add_argument("--p", required=True, help="comma-separated odd primes")
    sp.add_argument("--f", default="1", help="comma-separated exponents")
    sp.add_argument("--csv", default=None, help="also write a CSV artifact")

    return ap


def run(argv):
    args = make_parser().parse_args(argv)
    report = {
        "version": __version__,
        "command": args.command,
        "config": {
            k: v for k, v in sorted(vars(args).items()) if k not in ("out", "timing")
        },
        "transcript": [],
    }
    t0 = time.time()
    try:
        code = COMMANDS[args.command](args, report)
    except ConfigInvalid as exc:
        report["error"] = {"kind": "config-invalid", "message": str(exc)}
        code = EXIT_CONFIG
    except TooLarge as exc:
        report["error"] = {"kind": "too-large", "message": str(exc)}
        code = EXIT_TOO_LARGE
    except NotFoundWithinBound as exc:
        report["error"] = {"kind": "not-found-within-bound", "transcript": exc.args[0]}
        code = EXIT_NOT_FOUND
    except WeilError as exc:
        report["error"] = {"kind": type(exc).__name__, "message": str(exc)}
        code = EXIT_CHECK_FAILED
    except AssertionError as exc:
        report["error"] = {"kind": "certification-failed", "message": str(exc)}
        code = EXIT_CHECK_FAILED
    if args.timing:
        report["timing_seconds"] = round(time.time() - t0, 3)
    text = json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
