"""Command-line interface.

Exit codes: 0 success, 1 a verification came out negative, 2 usage error.
Every run is determined by its configuration (flags over an optional JSON
config file over defaults); the seed is echoed in every JSON report.
"""

import argparse
import json
import sys
from dataclasses import asdict, dataclass

from . import bounds, chern, constructions, search as search_mod
from .exactmath import is_prime
from .pencil import (
    ExhaustivePrimes,
    NonConstantRankError,
    RandomRational,
    SymbolicCharts,
    line_splitting_type,
    load_space,
    random_lines,
    save_space,
    space_to_json,
    transpose_dual,
    verify_constant_rank,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    primes: tuple = (5, 7, 11, 13)
    random_trials: int = 500
    seed: int = 0
    enumeration_ceiling: int = search_mod.DEFAULT_CEILING
    format: str = "text"
    workers: int = 1

    def __post_init__(self):
        self.primes = tuple(int(p) for p in self.primes)
        for p in self.primes:
            if not is_prime(p) or p >= 2 ** 16:
                raise UsageError(f"{p} is not a prime below 2^16")
        if int(self.seed) < 0:
            raise UsageError("seed must be non-negative")
        if self.format not in ("text", "json"):
            raise UsageError(f"unknown output format {self.format!r}")
        if self.workers < 1:
            raise UsageError("workers must be at least 1")


_CONFIG_FLAGS = {"primes": "primes", "trials": "random_trials", "seed": "seed",
                 "ceiling": "enumeration_ceiling", "format": "format",
                 "workers": "workers"}


def _load_config(args):
    fields = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
        unknown = set(data) - set(RunConfig.__dataclass_fields__)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        fields.update(data)
    for flag, key in _CONFIG_FLAGS.items():
        v = getattr(args, flag, None)
        if v is not None:
            fields[key] = v
    return RunConfig(**fields)


def _int_list(text):
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def _emit(obj, out=None):
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# construct


def cmd_construct(args, cfg):
    kind = args.kind
    need = {"banded": ("a", "b", "n"), "embedded": ("r", "a"),
            "skew-search": ("a",), "sl2-skew": ("a",)}.get(kind, ())
    missing = [f"--{k}" for k in need if getattr(args, k) is None]
    if missing:
        raise UsageError(f"construct {kind} needs {', '.join(missing)}")
    if kind == "banded":
        S = constructions.banded(args.a, args.b, args.n)
    elif kind == "embedded":
        S = constructions.embedded(args.r, args.a)
    elif kind == "skew3":
        S = constructions.skew3()
    elif kind == "westwick5":
        S = constructions.westwick5()
    elif kind == "sl2-skew":
        S = constructions.sl2_skew_pencil(args.a)
    else:
        outcome = constructions.skew_search_candidate(args.a, seed=cfg.seed)
        if not outcome.found:
            sys.stderr.write(f"no skew witness for a={args.a}: {outcome.note}\n")
            return EXIT_NEGATIVE
        S = outcome.space
        sys.stderr.write(f"{S.name}: {outcome.method} ({outcome.certificate.soundness})\n")
    if args.transpose:
        S = transpose_dual(S)
    if args.output:
        save_space(S, args.output)
    else:
        sys.stdout.write(space_to_json(S))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify / splitting


def _strategy(name, cfg):
    if name == "exhaustive":
        return ExhaustivePrimes(cfg.primes)
    if name == "random":
        return RandomRational(trials=cfg.random_trials, seed=cfg.seed)
    return SymbolicCharts()


def _load(path):
    try:
        return load_space(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")


def cmd_verify(args, cfg):
    S = _load(args.file)
    cert = verify_constant_rank(S, args.rank, _strategy(args.strategy, cfg))
    report = cert.to_dict()
    if report["seed"] is None:
        report["seed"] = cfg.seed
    _emit(report)
    return EXIT_OK if cert.ok else EXIT_NEGATIVE


def _parse_line(text):
    try:
        p, q = text.split(";")
        return tuple(_int_list(p)), tuple(_int_list(q))
    except (ValueError, argparse.ArgumentTypeError):
        raise UsageError(f"--line expects 'p0,p1,..;q0,q1,..', got {text!r}")


def cmd_splitting(args, cfg):
    S = _load(args.file)
    if args.line:
        lines = [_parse_line(args.line)]
    else:
        lines = random_lines(S.n, args.lines, seed=cfg.seed)
    results = []
    failure = None
    for p, q in lines:
        if len(p) != S.n + 1 or len(q) != S.n + 1:
            raise UsageError(f"line points need {S.n + 1} coordinates")
        try:
            st = line_splitting_type(S, args.rank, p, q)
        except NonConstantRankError as exc:
            failure = {"p": list(p), "q": list(q), "error": str(exc)}
            break
        results.append({"p": list(p), "q": list(q), "type": str(st), "c": st.c})
    types = sorted({r["type"] for r in results})
    report = {"name": S.name, "rank": args.rank, "seed": cfg.seed,
              "lines": len(results), "types": types,
              "uniform": failure is None and len(types) == 1}
    if failure:
        report["failure"] = failure
    if args.verbose:
        report["per_line"] = results
    if cfg.format == "json":
        _emit(report)
    else:
        print(f"{S.name or args.file}: rank {args.rank}, {len(results)} line(s)")
        for t in types:
            print(f"  splitting type {t}")
        if failure:
            print(f"  failure: {failure['error']}")
        print("  uniform" if report["uniform"] else "  not uniform")
    return EXIT_OK if failure is None else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# chern


def _cp(args, values):
    n = args.n if args.n is not None else len(values) - 1
    return chern.ChernPoly(n, values)


def cmd_chern(args, cfg):
    op = args.op
    if op == "mul":
        if args.x is None or args.y is None:
            raise UsageError("chern mul needs --x and --y")
        res = _cp(args, args.x) * _cp(args, args.y)
    elif op == "inv":
        if args.x is None:
            raise UsageError("chern inv needs --x")
        res = _cp(args, args.x).inverse()
    elif op == "power":
        if None in (args.e, args.a, args.n):
            raise UsageError("chern power needs --e, --a and --n")
        res = chern.cp_line_power(args.e, args.a, args.n)
    elif op == "tangent":
        if args.n is None or args.twist is None:
            raise UsageError("chern tangent needs --n and --twist")
        res = chern.chern_of_twisted_tangent(args.n, args.twist, dual=args.dual)
    else:
        if args.x is None or args.a is None:
            raise UsageError("chern kernel needs --x (cokernel classes) and --a")
        res = chern.kernel_chern(_cp(args, args.x), args.a)
    if cfg.format == "json":
        _emit({"n": res.n, "coeffs": list(res.coeffs), "text": str(res)})
    else:
        print(res)
    return EXIT_OK


# ---------------------------------------------------------------------------
# obstruct


def _psi_report(a, s_min, s_max):
    triples = chern.psi_feasible_triples(a, s_min, s_max)
    per_s = []
    for s in range(s_min, s_max + 1):
        u, v, w, solvable = chern.psi_linear_condition(a, s)
        cands = []
        for f in _triples_with_sum(s):
            p = chern.PsiParams.from_triple(a, f)
            cands.append({"triple": list(f), "lhs": u * p.d - v * p.t})
        per_s.append({"s": s, "u": u, "v": v, "w": str(w), "solvable": solvable,
                      "candidates": cands})
    return {"a": a, "s_min": s_min, "s_max": s_max,
            "feasible": [list(f) for f in triples], "per_s": per_s}


def _triples_with_sum(s):
    return [(f1, f2, s - f1 - f2) for f1 in range(s + 1)
            for f2 in range(f1, s + 1) if s - f1 - f2 >= f2]


def _fmt_lin(u, v, w):
    left = f"{'' if u == 1 else u}d - {'' if v == 1 else v}t"
    return f"{left} = {w}"


def cmd_obstruct(args, cfg):
    kind = args.kind
    if kind == "rank2":
        if args.a is None or args.n is None:
            raise UsageError("obstruct rank2 needs --a and --n")
        sol = chern.rank2_cokernel_constraints(args.a, args.n)
        report = {"a": args.a, "n": args.n, "empty": sol.is_empty(),
                  "infinite": sol.infinite, "pairs": sorted(list(p) for p in sol.pairs),
                  "t1_residues_mod_6": list(sol.t1_residues)}
        if cfg.format == "json":
            _emit(report)
        elif sol.is_empty():
            print(f"rank2 a={args.a} n={args.n}: no integer (t1, t2)")
        elif sol.infinite:
            print(f"rank2 a={args.a} n=3: t2 = (a-1)(3 t1 - a + 2)/6 with "
                  f"t1 mod 6 in {list(sol.t1_residues)}")
        else:
            for t1, t2 in sorted(sol.pairs):
                print(f"rank2 a={args.a} n={args.n}: (t1, t2) = ({t1}, {t2})")
        return EXIT_OK
    if kind == "psi":
        if args.a is None:
            raise UsageError("obstruct psi needs --a")
        rep = _psi_report(args.a, args.s_min, args.s_max)
        if cfg.format == "json":
            _emit(rep)
            return EXIT_OK
        if rep["feasible"]:
            print(f"psi a={args.a}: feasible triples {rep['feasible']}")
        else:
            print(f"psi a={args.a}: no feasible triples with f_i >= 0, "
                  f"{args.s_min} <= s <= {args.s_max}")
        for row in rep["per_s"]:
            cond = _fmt_lin(row["u"], row["v"], row["w"])
            if not row["solvable"]:
                print(f"  s={row['s']}: {cond} has no integer solution")
                continue
            vals = ", ".join(f"({','.join(map(str, c['triple']))}): {c['lhs']}"
                             for c in row["candidates"])
            verdict = "unsatisfiable" if not any(
                str(c["lhs"]) == row["w"] for c in row["candidates"]) else "satisfied"
            print(f"  s={row['s']}: {cond} {verdict}; values {vals}")
        return EXIT_OK
    if kind == "dim5":
        if args.max_a is None:
            raise UsageError("obstruct dim5 needs --max-a")
        cands = chern.dim5_candidates(args.max_a)
        detail = []
        for a in cands:
            c2 = chern.normalized_c2(a)
            detail.append({"a": a, "c2": c2, "schwarzenberger": chern.schwarzenberger(c2)})
        report = {"max_a": args.max_a, "candidates": cands, "detail": detail}
        if cfg.format == "json":
            _emit(report)
        else:
            print(f"dim5 candidates up to {args.max_a}: {cands}")
            for d in detail:
                print(f"  a={d['a']}: normalized c2 = {d['c2']}, Schwarzenberger "
                      f"{'pass' if d['schwarzenberger'] else 'fail'}")
        return EXIT_OK
    if kind == "omega-kernel":
        if args.a is None or args.n is None:
            raise UsageError("obstruct omega-kernel needs --n and --a")
        c_prev, c_top = chern.omega_kernel_obstruction(args.n, args.a)
        report = {"n": args.n, "a": args.a, "c_n_minus_1": c_prev, "c_n": c_top,
                  "obstructed": bool(c_prev or c_top)}
        if cfg.format == "json":
            _emit(report)
        else:
            print(f"omega-kernel n={args.n} a={args.a}: c_{args.n - 1} = {c_prev}, "
                  f"c_{args.n} = {c_top}")
        return EXIT_OK
    if args.c2 is None:
        raise UsageError("obstruct schwarz needs --c2")
    ok = chern.schwarzenberger(args.c2)
    if cfg.format == "json":
        _emit({"c2": args.c2, "pass": ok})
    else:
        print(f"c2 = {args.c2}: c2(c2+1) mod 12 = {args.c2 * (args.c2 + 1) % 12} "
              f"({'pass' if ok else 'fail'})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# table / explain / search


def cmd_table(args, cfg):
    if args.max_a < 1:
        raise UsageError("--max-a must be at least 1")
    sys.stdout.write(bounds.format_table(bounds.table(args.max_a), args.table_format))
    return EXIT_OK


def cmd_explain(args, cfg):
    if cfg.format == "json":
        _emit(bounds.bound(args.r, args.a).to_dict())
    else:
        print(bounds.explain(args.r, args.a))
    return EXIT_OK


def cmd_search(args, cfg):
    mode = "random" if args.random is not None else "exhaustive"
    spec = search_mod.SearchSpec(
        a=args.a, b=args.b if args.b is not None else args.a, r=args.r,
        dim=args.dim, p=args.p, mode=mode,
        trials=args.random if args.random is not None else cfg.random_trials,
        seed=cfg.seed, ansatz=args.ansatz, ceiling=cfg.enumeration_ceiling,
        limit=args.limit)
    try:
        rep = search_mod.search(spec, workers=cfg.workers)
    except search_mod.CeilingExceeded as exc:
        raise UsageError(f"{exc}; raise --ceiling or use --random T")
    _emit(rep.to_dict(), args.output)
    return EXIT_OK


def cmd_maxdim(args, cfg):
    res = search_mod.max_dim_over_Fp(
        args.a, args.r, args.p, ceiling=cfg.enumeration_ceiling,
        ansatz=args.ansatz, trials=cfg.random_trials, seed=cfg.seed,
        workers=cfg.workers)
    d = res.to_dict()
    d["seed"] = cfg.seed
    _emit(d)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields; flags win")
    common.add_argument("--seed", type=int)
    common.add_argument("--primes", type=_int_list)
    common.add_argument("--trials", type=int, help="random trials")
    common.add_argument("--ceiling", type=int, help="exhaustive enumeration ceiling")
    common.add_argument("--workers", type=int)
    common.add_argument("--json", dest="format", action="store_const", const="json",
                        help="machine-readable output")

    ap = argparse.ArgumentParser(prog="constrank", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="write a pencil JSON")
    p.add_argument("kind", choices=["banded", "embedded", "skew3", "westwick5",
                                    "skew-search", "sl2-skew"])
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--transpose", action="store_true", help="emit the transpose dual")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="certify constant rank")
    p.add_argument("file")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--strategy", choices=["exhaustive", "random", "symbolic"],
                   default="exhaustive")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("splitting", parents=[common], help="splitting types along lines")
    p.add_argument("file")
    p.add_argument("--rank", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--lines", type=int, default=20)
    g.add_argument("--line", help="'p0,p1,..;q0,q1,..'")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_splitting)

    p = sub.add_parser("chern", parents=[common], help="Chern polynomial arithmetic")
    p.add_argument("op", choices=["mul", "inv", "power", "tangent", "kernel"])
    p.add_argument("--n", type=int, help="truncation order (P^n)")
    p.add_argument("--x", type=_int_list, help="coefficients c0,c1,...")
    p.add_argument("--y", type=_int_list)
    p.add_argument("--e", type=int, help="line bundle degree")
    p.add_argument("--a", type=int)
    p.add_argument("--twist", type=int)
    p.add_argument("--dual", action="store_true", help="cotangent instead of tangent")
    p.set_defaults(func=cmd_chern)

    p = sub.add_parser("obstruct", parents=[common], help="Chern class obstructions")
    p.add_argument("kind", choices=["rank2", "psi", "dim5", "omega-kernel", "schwarz"])
    p.add_argument("--a", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--max-a", type=int)
    p.add_argument("--c2", type=int)
    p.add_argument("--s-min", type=int, default=3)
    p.add_argument("--s-max", type=int, default=5)
    p.set_defaults(func=cmd_obstruct)

    p = sub.add_parser("table", parents=[common], help="table of l(r;a)")
    p.add_argument("--max-a", type=int, default=10)
    p.add_argument("--format", dest="table_format", choices=["md", "csv", "json"],
                   default="md")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("explain", parents=[common], help="rules behind one l(r;a)")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("search", parents=[common], help="constant-rank search over F_p")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--random", type=int, metavar="T")
    p.add_argument("--ansatz", choices=list(search_mod.ANSATZE), default="general")
    p.add_argument("--limit", type=int, default=10)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("maxdim", parents=[common],
                       help="largest constant-rank dimension over F_p")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--ansatz", choices=list(search_mod.ANSATZE), default="general")
    p.set_defaults(func=cmd_maxdim)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = _load_config(args)
        return args.func(args, cfg)
    except (UsageError, ValueError, TypeError) as exc:
        sys.stderr.write(f"constrank {args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
