"""
Command-line frontend: map, sort, stats, enumerate, verify and render.

Permutations come from the positional arguments (all of them together form
one permutation), one per line from --input FILE, or one per line on stdin.
`enumerate --from-table` re-renders a saved count table. Data goes to
stdout or --out; logs go to stderr.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import List, Literal, Optional, Sequence

from pydantic import BaseModel, Field, ValidationError, model_validator

from stacksort_bijection import __version__
from stacksort_bijection.core import catalan_structs as cs
from stacksort_bijection.core import perm_core as pc
from stacksort_bijection.core.enumerate_verify import (
    EXTRA_PREDICATES,
    check_names,
    count_table,
    verify_suite,
)
from stacksort_bijection.core.perm_core import Permutation
from stacksort_bijection.core.upsilon import STEPS, upsilon_inverse_trace, upsilon_trace
from stacksort_bijection.parsers.parse_permutation import (
    parse_permutation_file,
    parse_permutation_lines,
    parse_permutation_stream,
)
from stacksort_bijection.parsers.parse_table import parse_table_file
from stacksort_bijection.utils.config import get_settings
from stacksort_bijection.utils.logger import get_logger, set_level

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2

COMMANDS = ("map", "sort", "stats", "enumerate", "verify", "render")
FORMATS = {
    "map": ("text", "json"),
    "sort": ("text", "json"),
    "stats": ("text", "json"),
    "enumerate": ("text", "json", "csv"),
    "verify": ("text", "json"),
    "render": ("text", "dot"),
}


class CliConfig(BaseModel):
    command: Literal["map", "sort", "stats", "enumerate", "verify", "render"]
    permutations: List[str] = Field(default_factory=list)
    input_file: Optional[str] = None
    n_values: List[int] = Field(default_factory=list)
    t_values: Optional[List[int]] = None
    patterns: List[List[int]] = Field(default_factory=list)
    statistics: List[str] = Field(default_factory=list)
    extra: List[str] = Field(default_factory=list)
    format: Literal["text", "json", "csv", "dot"] = "text"
    jobs: int = Field(default=1, ge=1)
    out: Optional[str] = None
    step: Optional[Literal["rho", "tau", "phi", "gamma", "lambda"]] = None
    inverse: bool = False
    trace: bool = False
    tree_n: Optional[int] = Field(default=None, ge=1)
    only: List[str] = Field(default_factory=list)
    progress: bool = False
    from_table: Optional[str] = None

    @model_validator(mode="after")
    def _check_combination(self) -> "CliConfig":
        if self.format not in FORMATS[self.command]:
            raise ValueError(f"format {self.format!r} is not available for {self.command}; "
                             f"choose from {', '.join(FORMATS[self.command])}")
        if self.permutations and self.input_file:
            raise ValueError("give permutations as arguments or with --input, not both")
        if self.command == "enumerate" and bool(self.n_values) == bool(self.from_table):
            raise ValueError("enumerate needs exactly one of --n and --from-table")
        for name in self.statistics:
            if name not in pc.STAT_FUNCTIONS:
                raise ValueError(f"unknown statistic {name!r}")
        for name in self.only:
            if name not in check_names():
                raise ValueError(f"unknown check {name!r}")
        return self


def _int_range(text: str) -> List[int]:
    """`k` or `a-b`."""
    try:
        if "-" in text:
            low, high = (int(part) for part in text.split("-", 1))
        else:
            low = high = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected k or a-b, got {text!r}")
    if low < 0 or high < low:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return list(range(low, high + 1))


def _pattern(text: str) -> List[int]:
    try:
        return list(pc.parse_permutation(text).values)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad pattern {text!r}: {e}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", default="text", choices=("text", "json", "csv", "dot"),
                        help="Output format (default: text)")
    common.add_argument("--out", help="Write output to this file instead of stdout")
    common.add_argument("--jobs", type=int, default=None,
                        help="Worker processes (default: STACKSORT_JOBS or 1)")
    common.add_argument("--progress", action="store_true", help="Progress bars on stderr")
    common.add_argument("--verbose", "-v", action="store_true", help="Log at INFO on stderr")

    perm_input = argparse.ArgumentParser(add_help=False)
    perm_input.add_argument("perm", nargs="*",
                            help="Permutation values, e.g. 3 1 2 or 312 (default: read stdin)")
    perm_input.add_argument("--input", metavar="FILE",
                            help="Read one permutation per line from this file")

    ranges = argparse.ArgumentParser(add_help=False)
    ranges.add_argument("--n", type=_int_range, help="Length k or range a-b")
    ranges.add_argument("--t", type=_int_range, help="Sortability bound k or range a-b")

    parser = argparse.ArgumentParser(
        prog="stacksort",
        description="Stack-sorting bijection between 321- and 213-avoiding permutations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_map = sub.add_parser("map", parents=[common, perm_input],
                           help="Apply Upsilon, its inverse, or one step")
    p_map.add_argument("--step", choices=STEPS, help="Print only the object this step produces")
    p_map.add_argument("--inverse", action="store_true",
                       help="Map a 213-avoider back to its 321-avoider")
    p_map.add_argument("--trace", action="store_true", help="Print every intermediate object")

    sub.add_parser("sort", parents=[common, perm_input],
                   help="Stack-sort repeatedly and report the sort depth")
    sub.add_parser("stats", parents=[common, perm_input], help="Permutation statistics")

    p_enum = sub.add_parser("enumerate", parents=[common, ranges], help="Counting tables")
    p_enum.add_argument("--patterns", nargs="+", type=_pattern, default=[],
                        help="Forbidden patterns, e.g. 321 2341")
    p_enum.add_argument("--stats", nargs="+", default=[], dest="statistics",
                        choices=sorted(pc.STAT_FUNCTIONS), metavar="STAT",
                        help="Statistics for the joint distribution")
    p_enum.add_argument("--extra", nargs="+", default=[], choices=sorted(EXTRA_PREDICATES),
                        help="Additional class predicates")
    p_enum.add_argument("--from-table", dest="from_table", metavar="FILE",
                        help="Re-render a saved .csv or .json table instead of counting")

    p_verify = sub.add_parser("verify", parents=[common, ranges],
                              help="Run the exhaustive verification suite")
    p_verify.add_argument("--tree-n", type=int, dest="tree_n",
                          help="Size cap for the doubly exhaustive tree checks")
    p_verify.add_argument("--only", nargs="+", default=[], metavar="CHECK",
                          help="Run only these checks")

    sub.add_parser("render", parents=[common, perm_input],
                   help="DOT for lambda(perm) (--format dot) or ASCII lattice path of rho(perm)")
    return parser


def _config_from_args(args: argparse.Namespace) -> CliConfig:
    jobs = args.jobs if args.jobs is not None else get_settings().jobs
    perm_tokens = getattr(args, "perm", [])
    return CliConfig(
        command=args.command,
        permutations=[" ".join(perm_tokens)] if perm_tokens else [],
        input_file=getattr(args, "input", None),
        n_values=getattr(args, "n", None) or [],
        t_values=getattr(args, "t", None),
        patterns=getattr(args, "patterns", []),
        statistics=getattr(args, "statistics", []),
        extra=getattr(args, "extra", []),
        format=args.format,
        jobs=jobs,
        out=args.out,
        step=getattr(args, "step", None),
        inverse=getattr(args, "inverse", False),
        trace=getattr(args, "trace", False),
        tree_n=getattr(args, "tree_n", None),
        only=getattr(args, "only", []),
        progress=args.progress,
        from_table=getattr(args, "from_table", None),
    )


def _read_permutations(config: CliConfig) -> List[Permutation]:
    if config.permutations:
        return parse_permutation_lines(config.permutations)
    if config.input_file:
        perms = parse_permutation_file(config.input_file)
    else:
        perms = parse_permutation_stream(sys.stdin)
    if not perms:
        raise ValueError(f"no permutation given in {config.input_file or 'stdin'}")
    return perms


def _dump(items: list) -> str:
    return json.dumps(items[0] if len(items) == 1 else items, indent=2)


def _cmd_map(config: CliConfig) -> str:
    blocks, items = [], []
    for perm in _read_permutations(config):
        trace = upsilon_inverse_trace(perm) if config.inverse else upsilon_trace(perm)
        if config.step:
            value = trace.stage(config.step)
            items.append({"input": str(perm), "step": config.step, "output": value})
            blocks.append(value)
        else:
            body = trace.to_dict()
            items.append(body)
            if config.trace:
                blocks.append("\n".join(f"{key}: {value}" for key, value in body.items()))
            else:
                blocks.append(str(trace.result))
    if config.format == "json":
        return _dump(items)
    return "\n".join(blocks)


def _cmd_sort(config: CliConfig) -> str:
    blocks, items = [], []
    for perm in _read_permutations(config):
        iterates = pc.sort_iterates(perm)[1:]
        depth = len(iterates)
        items.append({"input": str(perm), "iterates": [str(p) for p in iterates],
                      "sort_depth": depth})
        blocks.append("\n".join([*(str(p) for p in iterates), f"sort_depth: {depth}"]))
    if config.format == "json":
        return _dump(items)
    return "\n\n".join(blocks)


def _cmd_stats(config: CliConfig) -> str:
    blocks, items = [], []
    for perm in _read_permutations(config):
        summary = pc.stats_summary(perm)
        items.append(summary)
        classic = pc.classic_stats(perm)
        refined = pc.refined_stats(perm)
        lines = [f"{key}: {value}" for key, value in summary.items()]
        lines.append(f"descent_tops: {' '.join(map(str, classic.dt_set))}")
        lines.append(f"rmi_values: {' '.join(map(str, classic.rmi_set))}")
        lines.append(f"rma_values: {' '.join(map(str, classic.rma_set))}")
        lines.append(f"tail: {' '.join(map(str, pc.tail(perm)))}")
        if refined.lw:
            lines.append("lw: " + " ".join(f"{j}:{v}" for j, v in sorted(refined.lw.items())))
        blocks.append("\n".join(lines))
    if config.format == "json":
        return _dump(items)
    return "\n\n".join(blocks)


def _cmd_enumerate(config: CliConfig) -> str:
    if config.from_table:
        table = parse_table_file(config.from_table)
    else:
        table = count_table(config.n_values, config.t_values, patterns=config.patterns,
                            statistics=config.statistics, extra=config.extra,
                            jobs=config.jobs, progress=config.progress)
    if config.format == "csv":
        return table.to_csv().rstrip("\n")
    if config.format == "json":
        return table.to_json()
    return table.to_text()


def _cmd_render(config: CliConfig) -> str:
    blocks = []
    for perm in _read_permutations(config):
        if config.format == "dot":
            blocks.append(cs.to_dot(cs.lambda_map(perm)))
        else:
            blocks.append(cs.render_path(cs.rho(perm), perm))
    return "\n\n".join(blocks)


def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text + "\n")


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Execute one command.

    Returns:
        0 on success, 1 when verification fails, 2 on usage or input errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    if args.verbose:
        set_level("INFO")

    try:
        config = _config_from_args(args)
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"stacksort: error: {messages}\n")
        return EXIT_USAGE

    logger.info(f"Running {config.command}")
    try:
        if config.command == "verify":
            n_max = max(config.n_values) if config.n_values else 6
            t_max = max(config.t_values) if config.t_values else None
            report = verify_suite(n_max=n_max, t_max=t_max, jobs=config.jobs,
                                  tree_n_max=config.tree_n, only=config.only or None,
                                  progress=config.progress)
            _emit(report.to_json() if config.format == "json" else report.summary_text(),
                  config.out)
            return EXIT_OK if report.passed else EXIT_VERIFY_FAILED

        handlers = {
            "map": _cmd_map,
            "sort": _cmd_sort,
            "stats": _cmd_stats,
            "enumerate": _cmd_enumerate,
            "render": _cmd_render,
        }
        _emit(handlers[config.command](config), config.out)
        return EXIT_OK
    except (ValueError, OSError) as e:
        logger.error(f"{config.command} failed: {str(e)}")
        sys.stderr.write(f"stacksort: error: {e}\n")
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
