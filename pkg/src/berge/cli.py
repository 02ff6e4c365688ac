"""Command-line front end: reproducible JSON-emitting runs.

Subcommands: partition (build and self-verify a covering certificate),
adversary (emit a blocking colouring plus its containment-check report),
verify (re-check a certificate), brutecheck (exact cover search on a tiny
window) and chain (clique-chain diagnostics). JSON results go to --out or
stdout; diagnostics go to stderr. Exit codes: 0 success, 1 semantic failure
(verification failed / not coverable), 2 usage error, 3 budget exceeded.

Log verbosity is controlled by the BERGE_LOG environment variable
(error, info or debug; default error).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .adversary import BlockLayout, brute_force_cover_check, check_eq1, lex_subsets
from .core import Params
from .errors import (
    BergeError,
    BudgetExceededError,
    Inconclusive,
    OracleLoadError,
    ParameterError,
    SizeGuardError,
)
from .oracles import ColouringOracle, RandomOracle, load_colouring
from .partition import BuildConfig, Certificate, cover_prefix, default_q_schedule
from .ramsey import DEFAULT_NODE_BUDGET, ColourBlocks, build_clique_chain

log = logging.getLogger("berge.cli")

EXIT_OK = 0
EXIT_SEMANTIC = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _configure_logging():
    level = os.environ.get("BERGE_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(stream=sys.stderr, level=levels.get(level, logging.ERROR),
                        format="%(levelname)s %(name)s: %(message)s")


def _emit(obj: dict, out: str | None):
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _add_params(sub, with_prefix=False, with_window=False):
    sub.add_argument("--s", type=int, required=True, help="number of paths")
    sub.add_argument("--k", type=int, required=True, help="edge uniformity")
    sub.add_argument("--t", type=int, required=True, help="tightness (2 <= t <= k)")
    if with_prefix:
        sub.add_argument("--prefix", type=int, required=True, help="prefix [1, n] to cover")
    if with_window:
        sub.add_argument("--window", type=int, required=True, help="vertex window [1, N]")


def _add_colouring_source(sub):
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--random-seed", type=int, help="seeded reproducible colouring")
    group.add_argument("--colouring", help="colouring JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="berge",
        description="Monochromatic tight Berge-path coverings and blocking colourings.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("partition", help="cover a prefix and emit a verified certificate")
    _add_params(p, with_prefix=True)
    _add_colouring_source(p)
    p.add_argument("--out", help="certificate output path (default stdout)")
    p.add_argument("--window", type=int, help="initial working window (default 8*n*k)")
    p.add_argument("--max-window", type=int, default=2000, help="window growth ceiling")
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET, help="search node budget")

    a = subs.add_parser("adversary", help="emit a blocking colouring and its check report")
    _add_params(a, with_window=True)
    a.add_argument("--out", required=True, help="colouring output path")

    v = subs.add_parser("verify", help="re-check a certificate against its colouring")
    v.add_argument("certificate", help="certificate JSON file")
    v.add_argument("--colouring", help="override the colouring embedded in the certificate")
    v.add_argument("--out", help="report output path (default stdout)")

    b = subs.add_parser("brutecheck", help="exact cover search on a small window")
    _add_params(b, with_window=True)
    _add_colouring_source(b)
    b.add_argument("--out", help="result output path (default stdout)")
    b.add_argument("--budget", type=int, default=200_000, help="edge-count guard")

    c = subs.add_parser("chain", help="emit clique-chain diagnostics")
    _add_params(c, with_prefix=True)
    _add_colouring_source(c)
    c.add_argument("--out", help="diagnostics output path (default stdout)")
    c.add_argument("--window", type=int, help="working window (default 8*n*k)")
    c.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET, help="search node budget")

    return parser


def _oracle_for(args, params: Params) -> ColouringOracle:
    if args.colouring:
        oracle = load_colouring(args.colouring)
        if oracle.k != params.k:
            raise ParameterError(f"colouring has k={oracle.k}, expected {params.k}")
        if oracle.r != params.r:
            raise ParameterError(f"colouring has r={oracle.r}, expected r={params.r}")
        return oracle
    if args.random_seed is None:
        raise ParameterError("one colouring source required: --random-seed or --colouring")
    return RandomOracle(r=params.r, k=params.k, seed=args.random_seed)


def _cmd_partition(args) -> int:
    params = Params.partition_mode(args.s, args.k, args.t)
    oracle = _oracle_for(args, params)
    config = BuildConfig(
        initial_window=args.window,
        max_window=args.max_window,
        node_budget=args.budget,
    )
    cert = cover_prefix(oracle, params, args.prefix, config)
    report = cert.verify(oracle)
    if not report.ok:
        log.error("emitted certificate failed verification: %s", report)
        return EXIT_SEMANTIC
    _emit(cert.to_json(), args.out)
    return EXIT_OK


def _cmd_adversary(args) -> int:
    layout = BlockLayout.default(args.s, args.k, args.t, args.window)
    _emit(layout.descriptor(), args.out)
    subsets = []
    all_ok = True
    for C in lex_subsets(layout.r, layout.s):
        report = check_eq1(layout, C, args.window)
        subsets.append({"C": list(C), "ok": report.ok,
                        "violations": [v.to_json() for v in report.violations]})
        all_ok = all_ok and report.ok
    _emit({"eq1_ok": all_ok, "window": args.window, "subsets": subsets}, None)
    return EXIT_OK if all_ok else EXIT_SEMANTIC


def _cmd_verify(args) -> int:
    try:
        obj = json.loads(Path(args.certificate).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise OracleLoadError(f"cannot read certificate {args.certificate}: {exc}") from None
    cert = Certificate.from_json(obj)
    oracle = load_colouring(args.colouring) if args.colouring else load_colouring(cert.colouring)
    report = cert.verify(oracle)
    _emit(report.to_json(), args.out)
    return EXIT_OK if report.ok else EXIT_SEMANTIC


def _cmd_brutecheck(args) -> int:
    params = Params.adversary_mode(args.s, args.k, args.t)
    if args.colouring:
        oracle = load_colouring(args.colouring)
        if oracle.k != params.k:
            raise ParameterError(f"colouring has k={oracle.k}, expected {params.k}")
        params = Params(args.s, args.k, args.t, oracle.r)
    elif args.random_seed is not None:
        oracle = RandomOracle(r=params.r, k=params.k, seed=args.random_seed)
    else:
        from .adversary import AdversarialOracle

        layout = BlockLayout.default(args.s, args.k, args.t)
        if layout.window < args.window:
            layout = layout.with_window(args.window)
        oracle = AdversarialOracle(layout)
    result = brute_force_cover_check(oracle, args.window, params, max_edges=args.budget)
    _emit(result.to_json(), args.out)
    return EXIT_OK if result.coverable else EXIT_SEMANTIC


def _cmd_chain(args) -> int:
    params = Params.partition_mode(args.s, args.k, args.t)
    oracle = _oracle_for(args, params)
    window = args.window if args.window is not None else 8 * args.prefix * args.k
    if oracle.window_hint is not None:
        window = min(window, oracle.window_hint)
    blocks = ColourBlocks.default(params.s, params.k - params.t + 1)
    chain = build_clique_chain(
        oracle, window, params, blocks,
        default_q_schedule(args.prefix, params.t),
        node_budget=args.budget,
    )
    _emit({
        "window": window,
        "selected_block": chain.selected_block,
        "anchors": chain.to_json_records(),
    }, args.out)
    return EXIT_OK


_COMMANDS = {
    "partition": _cmd_partition,
    "adversary": _cmd_adversary,
    "verify": _cmd_verify,
    "brutecheck": _cmd_brutecheck,
    "chain": _cmd_chain,
}


def run(argv=None) -> int:
    """Parse argv, dispatch and map errors to exit codes."""
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (ParameterError, OracleLoadError) as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetExceededError, SizeGuardError, Inconclusive) as exc:
        log.error("%s", exc)
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except BergeError as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
