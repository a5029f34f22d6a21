"""Command line interface: ``debruijn <subcommand> ...``.

Exit codes: 0 ok, 2 input error, 3 verification failure, 4 resource cap.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import matrices, specials, spectrum, stationary, verify
from .simulator import simulate_many, total_variation
from .words import RateError, RateSystem, format_rational, format_word, parse_rational

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_CAP = 0, 2, 3, 4


class InputError(Exception):
    pass


def _fractions(text: str) -> list[Fraction]:
    return [parse_rational(part) for part in text.split(",") if part.strip()]


def _ints(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise InputError(f"expected comma separated integers, got {text!r}") from exc


def _add_rate_source(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("rate source (exactly one of --rates / --special)")
    g.add_argument("--rates", help="rate file (JSON)")
    g.add_argument("--special", choices=["bernoulli", "skin-deep"])
    g.add_argument("--y", help="bernoulli letter weights, e.g. 1,3")
    g.add_argument("--x", help="skin-deep depth-one rate, e.g. 1/3")
    g.add_argument("--n", type=int, help="alphabet size (skin-deep)")
    g.add_argument("--L", type=int, help="word length (special models)")


def rates_from_args(args) -> RateSystem:
    if bool(args.rates) == bool(args.special):
        raise InputError("give exactly one of --rates or --special")
    if args.rates:
        return RateSystem.load(args.rates)
    if args.L is None:
        raise InputError("--special needs --L")
    if args.special == "bernoulli":
        if not args.y:
            raise InputError("--special bernoulli needs --y")
        return specials.bernoulli_rates(specials.BernoulliSpec(tuple(_fractions(args.y)), args.L))
    if args.x is None or args.n is None:
        raise InputError("--special skin-deep needs --n and --x")
    return specials.skin_deep_rates(specials.SkinDeepSpec(parse_rational(args.x), args.n, args.L))


def _emit(payload, fmt: str, rows_key: str | None = None) -> None:
    if fmt == "csv" and rows_key:
        rows = payload[rows_key]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        print(json.dumps(payload, indent=2))


def cmd_stationary(args) -> int:
    R = rates_from_args(args)
    mu = stationary.stationary_vector(R)
    vec = list(mu.values())
    pf = stationary.partition_function(R)
    payload = {
        "n": R.n,
        "L": R.L,
        "rows": [{"word": format_word(w, R.n), "prob": format_rational(p)} for w, p in mu.items()],
        "partition_function": {
            "formula": format_rational(pf.formula),
            "formula_short_range": format_rational(pf.formula_short_range),
            "denominator_lcm": format_rational(pf.denominator_lcm),
            "matches": pf.matches,
        },
    }
    _emit(payload, args.format, "rows")
    M = matrices.transition_matrix(R)
    ok = sum(vec) == 1 and M.matvec(vec) == matrices.delta_matrix(R).matvec(vec)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_spectrum(args) -> int:
    R = rates_from_args(args)
    rep = spectrum.spectrum_verify(R, cap=args.cap, check_recursion=not args.no_recursion)
    rows = [
        {"eigenvalue": format_rational(v), "multiplicity": m}
        for v, m in sorted(rep.claimed.items(), reverse=True)
    ]
    payload = {
        "eigenvalues": rows,
        "verified": rep.verified,
        "claimed_degree": rep.degree_check[0],
        "dimension": rep.degree_check[1],
        "recursion": rep.recursion,
        "charpoly": str(rep.charpoly),
    }
    _emit(payload, args.format, "eigenvalues")
    return EXIT_OK if rep.verified else EXIT_VERIFY


def cmd_correlate(args) -> int:
    letters = _ints(args.letters) if args.letters else None
    if args.model == "skin-deep":
        if args.n is None or args.x is None or args.i is None or args.j is None:
            raise InputError("skin-deep correlate needs --n, --x, --i and --j")
        a, b = letters if letters else (1, 1)
        x = parse_rational(args.x)
        L = args.L if args.L is not None else args.j
        R = specials.skin_deep_rates(specials.SkinDeepSpec(x, args.n, L))
        closed = specials.two_point(args.n, x, args.i, args.j, a == b)
        enum = stationary.correlation([(args.i, a), (args.j, b)], R)
    else:
        R = rates_from_args(args) if args.model == "rates" else None
        if args.model == "bernoulli":
            if not args.y or args.L is None:
                raise InputError("bernoulli correlate needs --y and --L")
            spec = specials.BernoulliSpec(tuple(_fractions(args.y)), args.L)
            R = specials.bernoulli_rates(spec)
        sites = _ints(args.sites) if args.sites else [args.i, args.j]
        if letters is None or None in sites or len(sites) != len(letters):
            raise InputError("give --sites (or --i/--j) and matching --letters")
        query = list(zip(sites, letters))
        enum = stationary.correlation(query, R)
        if args.model == "bernoulli":
            rho = spec.densities()
            closed = Fraction(1)
            for a in letters:
                closed *= rho[a - 1]
        elif sites == list(range(R.L - len(sites) + 1, R.L + 1)):
            closed = stationary.last_k_correlation(letters, R)
        else:
            closed = None
    payload = {
        "closed_form": format_rational(closed) if closed is not None else None,
        "enumeration": format_rational(enum),
        "match": closed == enum if closed is not None else None,
    }
    _emit(payload, "json")
    return EXIT_VERIFY if closed is not None and closed != enum else EXIT_OK


def cmd_simulate(args) -> int:
    R = rates_from_args(args)
    if args.time <= args.burn_in or args.burn_in < 0:
        raise InputError("need --time > --burn-in >= 0")
    emp = simulate_many(R, args.seed, args.time, args.burn_in, args.trajectories)
    dist = emp.distribution()
    exact = stationary.stationary_vector(R)
    tv = total_variation(dist, exact)
    payload = {
        "total_time": float(f"{emp.total_time:.12g}"),
        "measure": [
            {"word": format_word(w, R.n), "empirical": float(f"{p:.12g}"), "exact": format_rational(exact[w])}
            for w, p in dist.items()
        ],
        "tv": float(f"{tv:.12g}"),
    }
    _emit(payload, args.format, "measure")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify.run_grid(
        max_n=args.max_n,
        max_L=args.max_L,
        points=args.points,
        seed=args.seed,
        cap=args.cap,
        degenerate=not args.no_degenerate,
        jobs=args.jobs,
    )
    report = verify.summarize(results)
    if args.format == "csv":
        _emit(report, "csv", "checks")
    else:
        print(json.dumps(report, indent=2))
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def cmd_export_matrix(args) -> int:
    R = rates_from_args(args)
    M = {
        "transition": matrices.transition_matrix,
        "kirchhoff": matrices.generator,
        "delta": matrices.delta_matrix,
    }[args.which](R)
    if args.format == "csv":
        sys.stdout.write(matrices.to_csv(M, R.n))
    else:
        if M.nrows > matrices.DENSE_EXPORT_CAP:
            print(f"dense export limited to {matrices.DENSE_EXPORT_CAP} states", file=sys.stderr)
            return EXIT_CAP
        print(matrices.to_dense_json(M, R.n))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="debruijn", description="Exact analysis of the de Bruijn process.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stationary", help="closed-form stationary distribution")
    _add_rate_source(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_stationary)

    p = sub.add_parser("spectrum", help="closed-form eigenvalues checked against the characteristic polynomial")
    _add_rate_source(p)
    p.add_argument("--cap", type=int, default=spectrum.DEFAULT_ORACLE_CAP)
    p.add_argument("--no-recursion", action="store_true")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("correlate", help="correlation functions, closed form vs enumeration")
    p.add_argument("--model", choices=["skin-deep", "bernoulli", "rates"], default="skin-deep")
    _add_rate_source(p)
    p.add_argument("--i", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--sites", help="comma separated sites (general query)")
    p.add_argument("--letters", help="comma separated letters, one per site")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("simulate", help="Gillespie simulation and distance to the exact law")
    _add_rate_source(p)
    p.add_argument("--time", type=float, required=True)
    p.add_argument("--burn-in", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trajectories", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run every identity over a grid of rate points")
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--max-L", type=int, default=4)
    p.add_argument("--points", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=spectrum.DEFAULT_ORACLE_CAP)
    p.add_argument("--no-degenerate", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-matrix", help="write M, its Kirchhoff matrix or the diagonal of column sums")
    _add_rate_source(p)
    p.add_argument("--which", choices=["transition", "kirchhoff", "delta"], default="kirchhoff")
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.set_defaults(func=cmd_export_matrix)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except spectrum.OracleCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, RateError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
