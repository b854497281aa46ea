"""Command-line entry point.

Exit status: 0 when every check passes, 1 on a mathematical disagreement,
2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

from . import __version__, backend
from .identity import (
    DEFAULT_MAX_NUMERIC_K,
    DEFAULT_MAX_SYMBOLIC_K,
    BudgetExceeded,
    build_lhs,
    verify_numeric,
    verify_symbolic,
)
from .integral import METHODS, RNG_NAME, RationalExponentVector, cross_check
from .qlimit import ExponentVector, check_limit_identity

TOOL = "antisymid"
NUMERIC_RNG = "mt19937 (python random.Random)"

EXIT_OK = 0
EXIT_DISAGREE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog=TOOL, description="Verify the antisymmetrization identity, its q -> 1 limit and the simplex integral.")
    p.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    p.add_argument("--backend", choices=backend.available(), help="kernel backend (default: compiled if built)")
    p.add_argument("--workers", type=_nonneg, default=1, help="worker processes; 0 means one per CPU")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="check LHS == RHS for one k")
    v.add_argument("--k", type=_positive, required=True)
    v.add_argument("--mode", choices=("symbolic", "numeric"))
    v.add_argument("--trials", type=_positive, default=20)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-symbolic-k", type=_positive, default=DEFAULT_MAX_SYMBOLIC_K)
    v.add_argument("--max-numeric-k", type=_positive, default=DEFAULT_MAX_NUMERIC_K)
    v.add_argument("--json", action="store_true")

    lim = sub.add_parser("limit", help="q -> 1 limit of both sides for integer exponents")
    lim.add_argument("--a", required=True, help="comma-separated positive integers, e.g. 1,2,5")
    lim.add_argument("--json", action="store_true")

    i = sub.add_parser("integral", help="closed form, permutation sum, nested integral, Monte Carlo")
    i.add_argument("--a", required=True, help="comma-separated integers or p/q rationals")
    i.add_argument("--method", choices=(*METHODS, "all"), default="all")
    i.add_argument("--samples", type=_positive, default=100_000)
    i.add_argument("--seed", type=int, default=0)
    i.add_argument("--json", action="store_true")

    b = sub.add_parser("bench", help="CSV timings per k")
    b.add_argument("--max-k", type=_positive, required=True)
    b.add_argument("--trials", type=_positive, default=5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--max-symbolic-k", type=_positive, default=DEFAULT_MAX_SYMBOLIC_K)
    b.add_argument("--max-numeric-k", type=_positive, default=DEFAULT_MAX_NUMERIC_K)
    return p


def emit_json(command: str, params: dict, body: dict, elapsed: float) -> str:
    """One JSON object; exact values are strings, floats have 12 significant digits."""
    out = {"tool": TOOL, "version": __version__, "command": command, "params": params}
    out.update(body)
    out["elapsed"] = round(elapsed, 6)
    return json.dumps(out, sort_keys=False, separators=(",", ":"))


def _verify(args) -> tuple[int, dict, dict, str]:
    mode = args.mode or ("symbolic" if args.k <= 4 else "numeric")
    if mode == "symbolic":
        rep = verify_symbolic(args.k, max_k=args.max_symbolic_k, workers=args.workers)
        params = {"k": args.k, "mode": mode}
    else:
        rep = verify_numeric(args.k, trials=args.trials, seed=args.seed, max_k=args.max_numeric_k, workers=args.workers)
        params = {"k": args.k, "mode": mode, "trials": args.trials, "seed": args.seed}
    body = rep.to_dict()
    body.pop("elapsed", None)
    if mode == "numeric":
        body["rng"] = NUMERIC_RNG
    line = f"verify k={rep.k} mode={mode} equal={str(rep.equal).lower()} lhs_terms={rep.lhs_term_count}"
    if rep.numerator_monomials is not None:
        line += f" numerator_monomials={rep.numerator_monomials}"
    if rep.points_tested is not None:
        line += f" points={rep.points_tested}"
    if rep.witness:
        line += f" witness={json.dumps(rep.witness)}"
    return (EXIT_OK if rep.equal else EXIT_DISAGREE), params, body, line


def _limit(args):
    try:
        a = ExponentVector.parse(args.a)
    except ValueError as e:
        raise UsageError(str(e)) from None
    rep = check_limit_identity(a, workers=args.workers)
    body = rep.to_dict()
    line = f"limit a=({a}) lhs_limit={body['lhs_limit']} rhs_limit={body['rhs_limit']} equal={str(rep.equal).lower()}"
    return (EXIT_OK if rep.equal else EXIT_DISAGREE), {"a": list(a.a)}, body, line


def _integral(args):
    try:
        a = RationalExponentVector.parse(args.a)
    except (ValueError, TypeError) as e:
        raise UsageError(str(e)) from None
    methods = METHODS if args.method == "all" else (args.method,)
    if not a.is_integral():
        if "nested" in methods and args.method != "all":
            raise UsageError("--method nested needs integer exponents")
        methods = tuple(m for m in methods if m != "nested")
    rep = cross_check(a, n=args.samples, seed=args.seed, methods=methods, workers=args.workers)
    body = rep.to_dict()
    params = {"a": [str(v) for v in body["a"]], "method": args.method}
    if "mc" in methods:
        params.update(samples=args.samples, seed=args.seed)
        body["rng"] = RNG_NAME
    parts = [f"integral a=({a})"]
    for key in ("closed_form", "perm_sum", "nested"):
        if key in body:
            parts.append(f"{key}={body[key]}")
    if rep.mc is not None:
        parts.append(f"mc={rep.mc.estimate:.6f}+-{rep.mc.stderr:.2g}")
    parts.append(f"sign_factor={rep.sign_factor} agree={str(rep.agree).lower()}")
    line = " ".join(parts)
    for f in rep.failures:
        line += f"\n  FAIL {f}"
    return (EXIT_OK if rep.agree else EXIT_DISAGREE), params, body, line


def bench(max_k: int, trials: int = 5, seed: int = 0, max_symbolic_k=DEFAULT_MAX_SYMBOLIC_K,
          max_numeric_k=DEFAULT_MAX_NUMERIC_K, workers: int = 1, out=None) -> int:
    """Timing rows ``k, mode, terms, monomials, seconds`` as CSV."""
    out = out or sys.stdout
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["k", "mode", "terms", "monomials", "seconds"])
    status = EXIT_OK
    for k in range(1, max_k + 1):
        if k <= max_symbolic_k:
            t0 = time.perf_counter()
            lhs = build_lhs(k, workers=workers)
            w.writerow([k, "build_lhs", _fact(k), len(lhs.numerator), f"{time.perf_counter() - t0:.6f}"])
            rep = verify_symbolic(k, max_k=max_symbolic_k, workers=workers)
            w.writerow([k, "symbolic", rep.lhs_term_count, rep.numerator_monomials, f"{rep.elapsed:.6f}"])
            if not rep.equal:
                status = EXIT_DISAGREE
        if k <= max_numeric_k:
            rep = verify_numeric(k, trials=trials, seed=seed, max_k=max_numeric_k, workers=workers)
            w.writerow([k, "numeric", rep.lhs_term_count, "", f"{rep.elapsed:.6f}"])
            if not rep.equal:
                status = EXIT_DISAGREE
        out.flush()
    return status


def _fact(k: int) -> int:
    r = 1
    for i in range(2, k + 1):
        r *= i
    return r


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.backend:
            backend.set_backend(args.backend)
        if args.command == "bench":
            return bench(args.max_k, args.trials, args.seed, args.max_symbolic_k, args.max_numeric_k, args.workers)
        t0 = time.perf_counter()
        handler = {"verify": _verify, "limit": _limit, "integral": _integral}[args.command]
        code, params, body, line = handler(args)
        elapsed = time.perf_counter() - t0
    except (UsageError, BudgetExceeded) as e:
        print(f"{TOOL}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(emit_json(args.command, params, body, elapsed))
    else:
        print(f"{line} ({elapsed:.3f} s, backend={backend.name()})")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
