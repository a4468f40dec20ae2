"""Command-line entry point.

``rldc <group> <command> [options]``; `cli_dispatch` returns the exit status:
0 on success, 1 when a decode or a claim check fails, 2 on usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .codes.greedy import blow_up, build_greedy_code
from .codes.inner import build_dense_codebook
from .core.bitseq import BitString
from .core.bounds import METHODS, dg_bound, greedy_search
from .core.channels import (
    ChannelSpec,
    TrimMode,
    make_runlength_channel,
    make_threshold_channel,
    transition_dist,
    transmit,
)
from .core.errors import ConfigInvalid, DecodeFailure, WorkbenchError
from .core.experiment import ExperimentConfig
from .services.claims import CLAIMS, run_claims
from .services.export import SweepSettings, sweep_bounds
from .services.multi_trace import MultiTraceScheme
from .services.trials import build_scheme, run_trials
from .utils.logs import configure_logging
from .utils.seeding import derive_seed

logger = logging.getLogger(__name__)


def _float_list(text: str) -> list[float]:
    try:
        return [float(Fraction(tok.strip())) for tok in text.split(",") if tok.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _bits(text: str) -> BitString:
    try:
        return BitString(text.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_channel_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--d-table", type=_float_list, help="deletion probabilities d(1..M)")
    g.add_argument("--tau", type=int, help="threshold channel BDC-Thr(tau, d)")
    p.add_argument("--d", type=float, default=0.0, help="deletion probability for --tau")
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--trim", choices=[m.value for m in TrimMode], default="none")


def _channel_from(args: argparse.Namespace) -> ChannelSpec:
    if args.tau is not None:
        return make_threshold_channel(args.tau, args.d, args.mu, args.trim)
    if args.mu is None:
        raise ConfigInvalid("--mu is required with --d-table")
    return make_runlength_channel(args.d_table, args.mu, trim_mode=args.trim)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rldc", description="Runlength deletion-channel coding workbench")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    groups = parser.add_subparsers(dest="group", required=True)

    bound = groups.add_parser("bound", help="capacity lower bounds").add_subparsers(dest="command", required=True)
    p = bound.add_parser("dg")
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--d", type=float, required=True)
    p = bound.add_parser("greedy")
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--M-max", dest="M_max", type=int, default=None, help="default grows with d")
    p.add_argument("--beta-step", type=float, default=0.01)
    p = bound.add_parser("sweep")
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--d-grid", type=_float_list, default=None)
    p.add_argument("--methods", default=",".join(METHODS))
    p.add_argument("--M-max", dest="M_max", type=int, default=None, help="default grows with d")
    p.add_argument("--beta-step", type=float, default=0.01)

    channel = groups.add_parser("channel", help="sample or enumerate channel outputs").add_subparsers(
        dest="command", required=True
    )
    p = channel.add_parser("sample")
    _add_channel_args(p)
    p.add_argument("--input", type=_bits, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p = channel.add_parser("oracle")
    _add_channel_args(p)
    p.add_argument("--input", type=_bits, required=True)

    code = groups.add_parser("code", help="build inner codebooks").add_subparsers(dest="command", required=True)
    p = code.add_parser("build-dense")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--zeta", type=float, default=0.5)
    p.add_argument("--gamma", type=float, default=0.1)
    p.add_argument("--prefix-bit", type=int, choices=(0, 1), default=None)
    p.add_argument("--suffix-bit", type=int, choices=(0, 1), default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    p = code.add_parser("build-greedy")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--beta", type=_float_list, required=True)
    p.add_argument("--delta", type=Fraction, required=True)
    p.add_argument("--M", type=int, default=None, help="also write the code blown up to M")
    p.add_argument("--out", type=Path, required=True)

    scheme = groups.add_parser("scheme", help="encode, decode and simulate schemes").add_subparsers(
        dest="command", required=True
    )
    p = scheme.add_parser("encode")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--msg", type=_int_list, required=True)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--transmit", action="store_true", help="also pass it through the configured channel")
    p = scheme.add_parser("decode")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--input", type=Path, required=True, help="file with one trace per line")
    p = scheme.add_parser("trial")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)

    claims = groups.add_parser("claims", help="empirical claim checks").add_subparsers(dest="command", required=True)
    p = claims.add_parser("check")
    p.add_argument("--only", nargs="*", choices=sorted(CLAIMS), default=None)
    return parser


# -- handlers -----------------------------------------------------------------
def _bound(args: argparse.Namespace) -> int:
    if args.command == "dg":
        print(f"{dg_bound(args.tau, args.d):.5f}")
    elif args.command == "greedy":
        best = greedy_search(args.tau, args.d, args.M_max, args.beta_step)
        beta = ";".join(f"{b:g}" for b in best.beta)
        print(f"{best.rate:.5f} M={best.M} beta={beta}")
    else:
        methods = tuple(m for m in args.methods.split(",") if m)
        settings = SweepSettings(methods=methods, M_max=args.M_max, beta_step=args.beta_step)
        rows = sweep_bounds(args.tau, args.d_grid, args.out, settings)
        print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _channel(args: argparse.Namespace) -> int:
    spec = _channel_from(args)
    logger.info("channel %s", spec.describe())
    if args.command == "sample":
        for i in range(args.count):
            print(transmit(spec, args.input, derive_seed(args.seed, i)).bits)
        return 0
    law = transition_dist(spec, args.input)
    for y, p in sorted(law.items(), key=lambda kv: (-kv[1], str(kv[0]))):
        print(f"{y}\t{p:.10g}")
    return 0


def _code(args: argparse.Namespace) -> int:
    if args.command == "build-dense":
        book = build_dense_codebook(
            args.n, args.count, args.zeta, args.gamma, args.prefix_bit, args.suffix_bit, args.seed
        )
        book.save(args.out)
        print(f"{len(book)} codewords, n={book.n}, rate={book.rate():.4f} -> {args.out}")
        return 0
    book = build_greedy_code(args.N, args.tau, args.beta, float(args.delta))
    book.save(args.out)
    print(f"{len(book)} codewords, N={book.n}, rate={book.rate():.4f} -> {args.out}")
    if args.M is not None:
        blown = blow_up(book, args.tau, args.M)
        blown_path = args.out.with_name(args.out.stem + f".M{args.M}" + args.out.suffix)
        blown.save(blown_path)
        print(f"blown up to M={args.M}: n={blown.n}, rate={blown.rate():.4f} -> {blown_path}")
    return 0


def _read_traces(path: Path) -> list[BitString]:
    return [BitString(line.strip()) for line in path.read_text().splitlines()]


def _scheme(args: argparse.Namespace) -> int:
    cfg = ExperimentConfig.load(args.config)
    logger.info("config: %s", json.dumps(cfg.to_dict(), sort_keys=True))
    if args.command == "trial":
        if args.trials is not None:
            cfg.trials = args.trials
        if args.seed is not None:
            cfg.seed = args.seed
        if args.threads is not None:
            cfg.threads = args.threads
        report = run_trials(cfg)
        text = json.dumps(report.to_dict(), indent=2)
        if cfg.output:
            Path(cfg.output).write_text(text)
        print(text)
        return 0

    scheme = build_scheme(cfg)
    multi = isinstance(scheme, MultiTraceScheme)
    if args.command == "encode":
        x = scheme.encode(args.msg)
        lines = [x.bits]
        if args.transmit:
            spec = cfg.channel.with_traces(cfg.scheme.T) if multi else cfg.channel
            count = spec.traces if multi else 1
            lines = [transmit(spec, x, derive_seed(cfg.seed, t)).bits for t in range(count)]
        if args.out:
            args.out.write_text("\n".join(lines) + "\n")
        else:
            print("\n".join(lines))
        return 0

    traces = _read_traces(args.input)
    if multi:
        report = scheme.decode_report(cfg.channel, traces)
    else:
        report = scheme.decode_report(cfg.channel, traces[0] if traces else BitString())
    print(json.dumps(report.to_dict(), indent=2))
    return 0 if report.success else 1


def _claims(args: argparse.Namespace) -> int:
    results = run_claims(args.only)
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


HANDLERS = {"bound": _bound, "channel": _channel, "code": _code, "scheme": _scheme, "claims": _claims}


def cli_dispatch(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    configure_logging(args.verbose)
    try:
        return HANDLERS[args.group](args)
    except DecodeFailure as exc:
        print(f"decode failed: {exc}", file=sys.stderr)
        return 1
    except (ConfigInvalid, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (WorkbenchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


__all__ = ["build_parser", "cli_dispatch", "run"]
