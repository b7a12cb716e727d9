"""Command line entry point: ``genrigid check | gen | batch``.

Exit codes for ``check``: 0 globally rigid, 1 not globally rigid, 2 input
error. ``batch`` exits 2 if any entry failed to load, else 0.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from .config import TestConfig
from .graph import FAMILIES, Graph, GraphFormatError, format_graph, generate, parse_graph
from .report import RigidityReport, analyze, render_text

log = logging.getLogger("genrigid")

EXIT_RIGID, EXIT_NOT_RIGID, EXIT_INPUT_ERROR = 0, 1, 2
GEN_PREFIX = "gen:"


class InputError(Exception):
    pass


def _parse_params(tokens: Sequence[str]) -> list[int]:
    out = []
    for tok in tokens:
        for piece in tok.split(","):
            if piece:
                try:
                    out.append(int(piece))
                except ValueError:
                    raise InputError(f"graph parameters must be integers, got {piece!r}") from None
    return out


def load_graph(source: str) -> Graph:
    """Read a graph from a file path or an inline spec such as ``gen:complete_bipartite:5,5``."""
    if source.startswith(GEN_PREFIX):
        family, _, params = source[len(GEN_PREFIX):].partition(":")
        try:
            return generate(family, _parse_params([params]))
        except ValueError as exc:
            raise InputError(str(exc)) from None
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror or exc}") from None
    try:
        return parse_graph(text)
    except GraphFormatError as exc:
        raise InputError(f"{source}: {exc}") from None


def _config(args: argparse.Namespace) -> TestConfig:
    try:
        return TestConfig(dim=args.dim, rounds=args.rounds, seed=args.seed, mode=args.mode,
                          N=args.N, fmt="json" if args.json else "text", force=args.force)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _emit(text: str, out: Optional[str]) -> None:
    if out and out != "-":
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_check(args: argparse.Namespace) -> int:
    try:
        cfg = _config(args)
        g = load_graph(args.graph)
        report = analyze(g, cfg)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    text = report.to_json() + "\n" if cfg.fmt == "json" else render_text(report, args.graph)
    _emit(text, args.out)
    if args.figure:
        from .plotting import plot_rounds

        plot_rounds(report, args.figure, args.graph)
    return EXIT_RIGID if report.globally_rigid else EXIT_NOT_RIGID


def cmd_gen(args: argparse.Namespace) -> int:
    *params, out = args.args
    try:
        g = generate(args.family, _parse_params(params))
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    _emit(format_graph(g), out)
    return 0


def collect_inputs(items: Sequence[str]) -> list[str]:
    """Expand directories into their regular files; the result is sorted by name."""
    found: list[str] = []
    for item in items:
        path = Path(item)
        if not item.startswith(GEN_PREFIX) and path.is_dir():
            found.extend(str(p) for p in path.iterdir() if p.is_file() and not p.name.startswith("."))
        else:
            found.append(item)
    return sorted(found, key=lambda s: (Path(s).name, s))


def _batch_entry(source: str, cfg: TestConfig) -> dict:
    try:
        report = analyze(load_graph(source), cfg)
    except (InputError, ValueError) as exc:
        return {"name": source, "error": str(exc)}
    return {"name": source, "report": report.to_dict()}


def run_batch(sources: Sequence[str], cfg: TestConfig, jobs: int = 1) -> list[dict]:
    if jobs > 1 and len(sources) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(sources))) as pool:
            return list(pool.map(_batch_entry, sources, [cfg] * len(sources)))
    return [_batch_entry(s, cfg) for s in sources]


SUMMARY_COLUMNS = ("name", "v", "e", "local", "global", "k_min", "k_sh", "connectivity_ok", "redundant_ok", "error")


def summary_table(entries: Sequence[dict]) -> str:
    """Tab-separated verdict table, one row per input."""
    rows = ["\t".join(SUMMARY_COLUMNS)]
    for entry in entries:
        if "error" in entry:
            rows.append("\t".join([entry["name"]] + ["-"] * 8 + [entry["error"]]))
            continue
        r = entry["report"]
        diag = r["diagnostics"]
        cells = [entry["name"], r["graph"]["v"], r["graph"]["e"], r["verdicts"]["local"]["kind"],
                 r["verdicts"]["global"]["kind"], diag["k_min"], diag["k_sh"],
                 diag["hendrickson"]["connectivity_ok"], diag["hendrickson"]["redundant_ok"], ""]
        rows.append("\t".join("-" if c is None else str(c) for c in cells))
    return "\n".join(rows) + "\n"


def cmd_batch(args: argparse.Namespace) -> int:
    try:
        cfg = _config(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    sources = collect_inputs(args.inputs)
    jobs = args.jobs or os.cpu_count() or 1
    entries = run_batch(sources, cfg, jobs)
    if cfg.fmt == "json":
        text = json.dumps({"entries": entries}, indent=2) + "\n"
    else:
        text = summary_table(entries)
    _emit(text, args.out)
    if args.figure:
        from .plotting import plot_batch

        reports = [RigidityReport.from_dict(e["report"]) if "report" in e else None for e in entries]
        plot_batch([Path(e["name"]).name for e in entries], reports, args.figure)
    failed = [e for e in entries if "error" in e]
    for e in failed:
        print(f"error: {e['error']}", file=sys.stderr)
    return EXIT_INPUT_ERROR if failed else 0


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, default=2, help="ambient dimension d (default 2)")
    p.add_argument("--rounds", type=int, default=40, help="independent rounds per test (default 40)")
    p.add_argument("--seed", type=int, default=0, help="master seed, unsigned 64-bit")
    p.add_argument("--mode", choices=("modular", "rational"), default="modular")
    p.add_argument("--N", type=int, default=None, help="override the coordinate sampling bound")
    p.add_argument("--force", action="store_true", help="allow rational mode on large graphs")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.add_argument("--out", default=None, help="write the report here instead of standard output")
    p.add_argument("--figure", default=None, help="also render a PNG/PDF figure to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="genrigid",
                                     description="Randomized tests for generic local and global rigidity.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="analyze one graph")
    check.add_argument("graph", help="edge-list file or inline spec like gen:complete_bipartite:5,5")
    _add_run_flags(check)
    check.set_defaults(func=cmd_check)

    gen = sub.add_parser("gen", help="write a generated graph as an edge list")
    gen.add_argument("family", choices=sorted(FAMILIES))
    gen.add_argument("args", nargs="+", metavar="PARAM... OUT",
                     help="integer parameters followed by the output path ('-' for standard output)")
    gen.set_defaults(func=cmd_gen)

    batch = sub.add_parser("batch", help="analyze every graph in directories or lists")
    batch.add_argument("inputs", nargs="*", help="directories, edge-list files or gen: specs")
    batch.add_argument("--jobs", type=int, default=None, help="worker processes (default: CPU count)")
    _add_run_flags(batch)
    batch.set_defaults(func=cmd_batch)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
