"""``verify`` command line driver.

Usage: verify <suite> [--n N --m M] [--odd] [--ranks FILE] [--extended] [--cutoff K]
                      [--seed S] [--format text|json] [--out FILE] [--figure FILE]
                      [--config FILE] [--workers W]

Exit status: 0 if every check passes, 1 on any failure, 2 on any error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Dict, List, Optional, Sequence, Tuple

from .suites import DEFAULT_RANKS, EXTENDED_RANKS, SUITES, SuiteOptions, emit_report, exit_code, run_suite

Rank = Tuple[int, int]


def parse_ranks(text: str) -> List[Rank]:
    """Rank pairs such as ``1,1 2,1`` or one ``n m`` pair per line; ``#`` starts a comment."""
    nums = [int(tok) for line in text.splitlines()
            for tok in line.split("#", 1)[0].replace(",", " ").replace(";", " ").split()]
    if len(nums) % 2:
        raise ValueError("odd number of integers in rank list")
    return list(zip(nums[0::2], nums[1::2]))


def read_config(path: str) -> Dict[str, str]:
    """Plain ``key = value`` lines; ``#`` comments and blank lines are ignored."""
    cfg: Dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for num, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{num}: expected key = value")
            key, value = line.split("=", 1)
            cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="verify", description="Exact verification of superoscillator Lax matrices.")
    p.add_argument("suite", choices=sorted(SUITES), help="suite to run")
    p.add_argument("--n", type=int, help="rank n (or N for ybe and odd-conjecture); needs --m")
    p.add_argument("--m", type=int, help="rank m")
    p.add_argument("--odd", action="store_true", help="osp-quadratic: use N = 2n+1 (the odd-N family)")
    p.add_argument("--ranks", metavar="FILE", help="file with rank pairs, one 'n m' or 'n,m' per line")
    p.add_argument("--extended", action="store_true", help="append the opt-in larger ranks to the default sweep")
    p.add_argument("--cutoff", type=int, help="bosonic Fock cutoff (default 4)")
    p.add_argument("--seed", type=int, help="seed for random states and twist samples (default 0)")
    p.add_argument("--format", choices=("text", "json"), help="report format (default text)")
    p.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    p.add_argument("--figure", metavar="FILE", help="save a timing/verdict figure")
    p.add_argument("--config", metavar="FILE", help="key = value file with defaults")
    p.add_argument("--workers", type=int, help="worker processes per suite (default 1)")
    return p


def _pick(cli_value, cfg: Dict[str, str], key: str, default, cast=str):
    if cli_value is not None:
        return cli_value
    if key in cfg:
        return cast(cfg[key])
    return default


def _truthy(s: str) -> bool:
    return s.strip().lower() in ("1", "true", "yes", "on")


def resolve_ranks(args, cfg: Dict[str, str]) -> List[Rank]:
    if (args.n is None) != (args.m is None):
        raise ValueError("--n and --m must be given together")
    if args.n is not None:
        return [(args.n, args.m)]
    if args.ranks:
        with open(args.ranks, encoding="utf-8") as fh:
            return parse_ranks(fh.read())
    key = f"ranks.{args.suite}"
    ranks = parse_ranks(cfg[key]) if key in cfg else list(DEFAULT_RANKS[args.suite])
    if args.extended or _truthy(cfg.get("extended", "no")):
        ranks += EXTENDED_RANKS.get(args.suite, [])
    return ranks


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = read_config(args.config) if args.config else {}
        ranks = resolve_ranks(args, cfg)
    except (OSError, ValueError) as exc:
        parser.error(str(exc))
    opt = SuiteOptions(
        seed=_pick(args.seed, cfg, "seed", 0, int),
        cutoff=_pick(args.cutoff, cfg, "cutoff", 4, int),
        odd=args.odd or _truthy(cfg.get("odd", "no")),
        workers=_pick(args.workers, cfg, "workers", 1, int),
    )
    fmt = _pick(args.format, cfg, "format", "text")
    reports = run_suite(args.suite, ranks, opt)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            emit_report(reports, fmt, fh, suite=args.suite)
    else:
        emit_report(reports, fmt, sys.stdout, suite=args.suite)
    if args.figure:
        from .plotting import plot_reports
        plot_reports(reports, args.figure, title=f"verify {args.suite}")
    return exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
