"""Command-line front end.

Every subcommand renders its whole output before writing it, so a failed
run never leaves a partial CSV behind.  Exit codes: 0 success, 1 runtime
failure, 2 bad flags.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from typing import Optional, Sequence

import numpy as np

from . import entanglement as ent
from . import experiments as exp
from .scheme import DEFAULT_PHI, SchemeConfig, column_step, input_rng, mbqc_column_oracle, oracle_branch_probabilities
from .statevec import fidelity

PHISCAN_DEFAULT = tuple(k * math.pi / 8 for k in (1, 3, 5, 7, 8, 16))

_PI_RE = re.compile(r"^\s*(?P<num>[0-9]*\.?[0-9]*)\s*\*?\s*pi\s*(?:/\s*(?P<den>[0-9]*\.?[0-9]+))?\s*$")


def parse_phi(text: str) -> float:
    """Radians as a decimal, or a multiple of pi such as ``pi``, ``5pi/8``, ``2*pi``."""
    m = _PI_RE.match(text.lower())
    if m:
        num = float(m.group("num")) if m.group("num") else 1.0
        den = float(m.group("den")) if m.group("den") else 1.0
        if den == 0:
            raise argparse.ArgumentTypeError(f"invalid angle {text!r}")
        value = num * math.pi / den
    else:
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid angle {text!r}") from None
    if not 0.0 < value <= 2 * math.pi + 1e-12:
        raise argparse.ArgumentTypeError(f"phi must lie in (0, 2pi], got {text!r}")
    return value


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _seed(text: str) -> int:
    v = _nonneg_int(text)
    if v >= 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _stratify(text: str):
    return "auto" if text == "auto" else _nonneg_int(text)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = _Parser(prog="wgsrandom", description="Random circuits from measurements on weighted graph states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        p = sub.add_parser(name, help=help_, description=help_, formatter_class=fmt)
        p.add_argument("--out", default=None, help="output file (default: standard output)")
        return p

    def lattice(p, many_n=False, many_phi=False):
        if many_n:
            p.add_argument("--n", type=_positive_int, nargs="+", default=[4], help="numbers of rows N")
        else:
            p.add_argument("--n", type=_positive_int, default=4, help="number of rows N")
        p.add_argument("--na", type=_positive_int, default=1, help="rows in subsystem A")
        if many_phi:
            p.add_argument("--phi", type=parse_phi, nargs="+", default=list(PHISCAN_DEFAULT), help="vertical gate angles")
        else:
            p.add_argument("--phi", type=parse_phi, default=DEFAULT_PHI, help="vertical gate angle (radians, or e.g. 5pi/8)")
        p.add_argument("--seed", type=_seed, required=True, help="root seed (required)")
        p.add_argument("--threads", type=_positive_int, default=1, help="worker threads; output does not depend on it")

    p = add("run", "Entropy after each step of one circuit of a given length.")
    lattice(p)
    p.add_argument("--length", type=_nonneg_int, default=100, help="number of column steps")
    p.add_argument("--input", choices=exp.INPUT_KINDS, default="haar", help="input state")

    p = add("burnin", "Entropy series of one trajectory after burn-in.")
    lattice(p)
    p.add_argument("--burnin", type=_nonneg_int, default=10_000, help="unrecorded steps")
    p.add_argument("--samples", type=_positive_int, default=10_000, help="recorded steps")
    p.add_argument("--input", choices=exp.INPUT_KINDS, default="haar", help="input state")

    p = add("histogram", "Histogram of post-burn-in entropies.")
    lattice(p)
    p.add_argument("--burnin", type=_nonneg_int, default=10_000, help="burn-in steps (depth per trajectory in independent mode)")
    p.add_argument("--samples", type=_positive_int, default=10_000, help="recorded steps in trajectory mode")
    p.add_argument("--trials", type=_positive_int, default=10_000, help="trajectories in independent mode")
    p.add_argument("--bins", type=_positive_int, default=500, help="number of bins over [0, N_A]")
    p.add_argument("--mode", choices=exp.SAMPLING_MODES, default="trajectory", help="sampling mode")
    p.add_argument("--input", choices=exp.INPUT_KINDS, default="haar", help="input state")

    p = add("converge", "Depth at which the mean entropy settles within epsilon of Page.")
    lattice(p, many_n=True)
    p.add_argument("--epsilon", type=_positive_float, nargs="+", default=[0.01], help="accuracy levels")
    p.add_argument("--trials", type=_positive_int, default=10_000, help="independent trajectories")
    p.add_argument("--window", type=_positive_int, default=10, help="consecutive depths required within epsilon")
    p.add_argument("--max-depth", type=_nonneg_int, default=200, help="deepest circuit examined")
    p.add_argument("--input", choices=exp.INPUT_KINDS, default="zeros", help="input state")
    p.add_argument("--stratify", type=_stratify, default="auto", help="leading columns whose outcomes are enumerated rather than sampled ('auto' or a count; 0 is plain Monte Carlo)")

    p = add("phiscan", "Deviation from Page at a fixed depth for several angles.")
    lattice(p, many_phi=True)
    p.add_argument("--length", type=_nonneg_int, default=20, help="fixed depth")
    p.add_argument("--trials", type=_positive_int, default=2000, help="independent trajectories")
    p.add_argument("--input", choices=exp.INPUT_KINDS, default="zeros", help="input state")
    p.add_argument("--stratify", type=_stratify, default="auto", help="leading columns whose outcomes are enumerated rather than sampled ('auto' or a count; 0 is plain Monte Carlo)")

    p = add("page", "Haar-average entropy in bits.")
    p.add_argument("--na", type=_positive_int, required=True, help="qubits in A")
    p.add_argument("--nb", type=_positive_int, required=True, help="qubits in B")

    p = add("stabpmf", "Entropy distribution of random stabilizer states.")
    p.add_argument("--n", type=_positive_int, required=True, help="total qubits")
    p.add_argument("--na", type=_positive_int, required=True, help="qubits in A")

    p = add("oracle-check", "Compare the literal 2N-qubit measurement simulation with the column step.")
    p.add_argument("--n", type=_positive_int, nargs="+", default=[1, 2, 3], help="row counts to check")
    p.add_argument("--trials", type=_positive_int, default=100, help="random inputs per row count")
    p.add_argument("--phi", type=parse_phi, default=DEFAULT_PHI, help="vertical gate angle")
    p.add_argument("--seed", type=_seed, default=0, help="root seed")
    return parser


class _FlagError(Exception):
    pass


def _scheme(args, n: int, length: int = 0, phi: Optional[float] = None) -> SchemeConfig:
    try:
        return SchemeConfig(rows=n, length=length, phi=args.phi if phi is None else phi, partition_size=args.na, seed=args.seed)
    except ValueError as exc:
        raise _FlagError(str(exc)) from None


def _check_page_cut(n: int, na: int) -> None:
    if n < 2 or not 1 <= na <= n - 1:
        raise _FlagError(f"--na must lie in [1, n-1] for n={n}")


def _oracle_check(args) -> str:
    lines = []
    failed_total = 0
    for n in args.n:
        if 2 * n > 16:
            raise _FlagError("oracle-check supports n <= 8")
        passed = failed = 0
        for trial in range(args.trials):
            rng = input_rng(args.seed, (n << 32) + trial)
            psi = ent.haar_sample(n, rng)
            bits, got = mbqc_column_oracle(psi, args.phi, rng)
            ok = 1 - fidelity(got, column_step(psi, bits, args.phi)) <= 1e-10
            ok &= bool(np.all(np.abs(oracle_branch_probabilities(psi, args.phi) - 2.0**-n) <= 1e-10))
            passed += ok
            failed += not ok
        failed_total += failed
        lines.append(f"n={n} passed={passed} failed={failed}")
    lines.append("PASS" if failed_total == 0 else "FAIL")
    return "\n".join(lines) + "\n"


def _execute(args) -> str:
    cmd = args.command
    if cmd == "page":
        if args.na > args.nb:
            raise _FlagError("page needs --na <= --nb")
        return exp.format_float(ent.page_average(args.na, args.nb)) + "\n"
    if cmd == "stabpmf":
        if not 1 <= args.na <= args.n - args.na:
            raise _FlagError("stabpmf needs 1 <= --na <= --n - --na")
        return exp.to_csv(exp.StabilizerPmf(args.n, args.na, ent.stabilizer_entropy_pmf(args.n, args.na)))
    if cmd == "oracle-check":
        return _oracle_check(args)

    if cmd in ("run", "burnin", "histogram"):
        _check_page_cut(args.n, args.na)
        cfg = _scheme(args, args.n, length=getattr(args, "length", 0))
        if cmd == "run":
            return exp.to_csv(exp.circuit_entropy_series(cfg, args.input))
        spec = exp.ExperimentSpec(
            cfg,
            burnin_steps=args.burnin,
            sample_steps=args.samples,
            trajectories=getattr(args, "trials", 1),
            bins=getattr(args, "bins", 500),
            input_kind=args.input,
            mode=getattr(args, "mode", "trajectory"),
            threads=args.threads,
        )
        if cmd == "burnin":
            return exp.to_csv(exp.burnin_series(spec))
        return exp.to_csv(exp.entropy_histogram_experiment(spec))

    if cmd == "converge":
        if args.trials < 100:
            raise _FlagError("converge needs --trials >= 100")
        results = []
        for n in args.n:
            _check_page_cut(n, args.na)
            _scheme(args, n)
            results += exp.convergence_time(
                n, args.na, args.phi, list(args.epsilon), args.trials, args.window, args.max_depth,
                args.seed, args.input, args.threads, args.stratify,
            )
        return exp.to_csv(results)

    if cmd == "phiscan":
        _check_page_cut(args.n, args.na)
        rows = exp.phi_scan(args.n, args.na, args.phi, args.length, args.trials, args.seed, args.input, args.threads, args.stratify)
        return exp.to_csv(rows)
    raise _FlagError(f"unknown command {cmd!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = _execute(args)
    except _FlagError as exc:
        print(f"wgsrandom {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - single-line diagnostic contract
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"wgsrandom {args.command}: {msg}", file=sys.stderr)
        return 1
    try:
        if args.out is None:
            sys.stdout.write(text)
            sys.stdout.flush()
        else:
            exp.emit_csv_text(text, args.out)
    except OSError as exc:
        print(f"wgsrandom {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
