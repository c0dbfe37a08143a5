"""Command-line entry point: ``ffconsensus <verb> ...``.

Errors are reported on stderr as ``error=<Token>: message`` with exit status 1.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import generators as gen
from .admissibility import check_admissible, similar_transform
from .dynamics import AgentSystem, simulate_lti, simulate_scalar, stabilizing_gain, staircase
from .errors import FFError, ParseError
from .ffmatrix import FMatrix, format_matrices, format_matrix, parse_matrix
from .field import FieldSpec, is_prime

ENUM_SETS = {
    "mrs": "m_rs",
    "grs": "g_rs",
    "grs-nonperm": "g_rs_nonperm",
    "urs": "u_rs_upper",
    "urs-lower": "u_rs_lower",
    "perm": "perms",
}

FORMULAS = ("m_all", "gl", "m_rs", "g_rs", "u_rs", "perms", "delta")


def parse_matrix_file(path) -> FMatrix:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_matrix(text)


def _field(p: int) -> FieldSpec:
    return FieldSpec(p)


def _vector(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise ParseError(f"bad vector {text!r}") from None


def _range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    try:
        return int(lo), int(hi or lo)
    except ValueError:
        raise ParseError(f"bad range {text!r}, expected lo:hi") from None


def _fmt_value(v, approx: bool) -> str:
    if isinstance(v, Fraction):
        return f"{float(v):.6f}" if approx else f"{v.numerator}/{v.denominator}"
    return str(v)


# -- verbs --------------------------------------------------------------------

def cmd_check(args, out):
    E = parse_matrix_file(args.matrix)
    out.write(check_admissible(E).as_text())


def cmd_gen(args, out):
    cfg = gen.GenConfig(N=args.n, field=_field(args.p), seed=args.seed,
                        max_attempts=args.max_attempts, variant=args.method.replace("-", "_"),
                        strict_permutation=args.strict_permutation)
    mats = gen.generate(cfg, args.count, dedup_cosets=args.dedup_cosets)
    out.write(format_matrices(mats))


def cmd_enumerate(args, out):
    sets = gen.enumerate_sets(args.n, _field(args.p), budget=args.budget)
    mats = getattr(sets, ENUM_SETS[args.set])
    if mats:
        out.write(format_matrices(mats) + "\n")
    out.write(f"# count={len(mats)}\n")


def cmd_stats(args, out):
    if args.sweep:
        (nlo, nhi), (plo, phi) = _range(args.sweep[0]), _range(args.sweep[1])
        primes = [p for p in range(plo, phi + 1) if is_prime(p)]
        names = FORMULAS if args.formula == "all" else (args.formula,)
        header = "formula,N,p,value" if args.formula == "all" else "N,p,value"
        out.write(header + "\n")
        for name in names:
            for N in range(nlo, nhi + 1):
                for p in primes:
                    v = _fmt_value(getattr(gen.cardinalities(N, p), name), args.approx)
                    prefix = f"{name}," if args.formula == "all" else ""
                    out.write(f"{prefix}{N},{p},{v}\n")
        return
    if args.n is None or args.p is None:
        raise ParseError("stats needs --n and --p, or --sweep")
    out.write(gen.cardinalities(args.n, _field(args.p)).as_lines(approx=args.approx))


def cmd_transform(args, out):
    E = parse_matrix_file(args.E)
    T = parse_matrix_file(args.T)
    out.write(format_matrix(similar_transform(E, T)))


def cmd_gain(args, out):
    A = parse_matrix_file(args.A)
    B = parse_matrix_file(args.B)
    v = staircase(A, B).verdict
    out.write(f"controllable_dim={v.controllable_dim}\n"
              f"stabilizable={str(v.stabilizable).lower()}\n"
              f"reason={v.reason}\n")
    K = stabilizing_gain(A, B)
    out.write(format_matrix(K))


def cmd_simulate(args, out):
    E = parse_matrix_file(args.E)
    x0 = _vector(args.x0)
    if args.mode == "scalar":
        trace = simulate_scalar(E, x0, args.kmax)
    else:
        if not (args.A and args.B):
            raise ParseError("lti mode needs -A and -B")
        A, B = parse_matrix_file(args.A), parse_matrix_file(args.B)
        K = parse_matrix_file(args.K) if args.K else None
        sys_ = AgentSystem(A, B, K).with_gain(K)
        trace = simulate_lti(E, sys_, x0, args.kmax)
    if args.out:
        Path(args.out).write_text(trace.to_csv())
    else:
        out.write(trace.to_csv())
    dest = out if args.out else sys.stderr
    sync = "none" if trace.sync_step is None else trace.sync_step
    dest.write(f"sync_step={sync}\n")
    if trace.alpha_traj is not None:
        a0 = ",".join(map(str, trace.alpha_traj[0]))
        dest.write(f"alpha={a0}\n")


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ffconsensus",
                                 description="Consensus and synchronization over GF(p).")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("check", help="admissibility report for a graph matrix")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="generate transformation matrices T")
    p.add_argument("--method", required=True, choices=["sar", "tf-upper", "tf-lower", "stabilizer"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-attempts", type=int, default=10**6)
    p.add_argument("--dedup-cosets", action="store_true")
    p.add_argument("--strict-permutation", action="store_true",
                   help="SAR rejects only permutations, not every T with T^T T = I")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("enumerate", help="exhaustively list a matrix set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--set", required=True, choices=sorted(ENUM_SETS))
    p.add_argument("--budget", type=int, default=gen.DEFAULT_BUDGET)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("stats", help="closed-form cardinalities")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--sweep", nargs=2, metavar=("NMIN:NMAX", "PMIN:PMAX"))
    p.add_argument("--formula", default="delta", choices=FORMULAS + ("all",))
    p.add_argument("--approx", action="store_true", help="print delta as a decimal")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("transform", help="print T^-1 E T")
    p.add_argument("-E", required=True)
    p.add_argument("-T", required=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("gain", help="synthesize a nilpotent-placing gain K")
    p.add_argument("-A", required=True)
    p.add_argument("-B", required=True)
    p.set_defaults(func=cmd_gain)

    p = sub.add_parser("simulate", help="simulate consensus or synchronization")
    p.add_argument("--mode", required=True, choices=["scalar", "lti"])
    p.add_argument("-E", required=True)
    p.add_argument("-A")
    p.add_argument("-B")
    p.add_argument("-K")
    p.add_argument("--x0", required=True, help="comma-separated (stacked) initial state")
    p.add_argument("--kmax", type=int)
    p.add_argument("--out", help="trace CSV path (default: stdout)")
    p.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        args.func(args, out)
    except FFError as exc:
        print(f"error={exc.token}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error=ValueError: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
