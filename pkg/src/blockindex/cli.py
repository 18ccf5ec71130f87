"""Command-line driver.

Subcommands
    normalize  raw corpus lines -> docstream
    index      docstream -> saved index image
    query      run a query file against an image (conj or topk)
    workload   run an interleaved insert/query script
    collate    rewrite an image with contiguous chains
    stats      JSON space report (optionally with figures)
    overhead   growth-policy overhead simulation: TSV plus a figure

Results go to stdout as tab-separated lines; summaries and timing go
to stderr so stdout stays machine-readable.  Exit status 0 on
success, 2 on any error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .collate import collate
from .growth import GROWTH_KINDS, GrowthPolicy, overhead_cycles
from .index import DynamicIndex, IndexConfig
from .metrics import posting_size_histogram, space_report
from .query import conjunction, topk_disjunctive
from .text import docstream_line, normalize_text, read_docstream

QUERY_OPS = ("conj", "topk")


def _policy_from_args(args) -> GrowthPolicy:
    return GrowthPolicy(args.growth, args.block_size, k=args.growth_k)


def _config_from_args(args) -> IndexConfig:
    return IndexConfig(
        policy=_policy_from_args(args),
        word_level=(args.mode == "word"),
        fold=args.fold,
    )


def _add_build_flags(sub, growth_k_flag: str = "--k") -> None:
    sub.add_argument("--mode", choices=("document", "word"), default="document")
    sub.add_argument("--block-size", type=int, default=64, metavar="B")
    sub.add_argument("--growth", choices=GROWTH_KINDS, default="const")
    sub.add_argument(
        growth_k_flag, dest="growth_k", type=float, default=1.1, help="expon growth factor"
    )
    sub.add_argument(
        "--F", dest="fold", type=int, default=0,
        help="pack threshold (default 4 document-level, 3 word-level)",
    )


def cmd_normalize(args) -> int:
    with open(args.input, encoding="utf-8") as src, open(args.output, "w", encoding="utf-8") as dst:
        for line in src:
            fields = line.split(None, 1)
            if not fields:
                continue
            docid = fields[0]
            terms = normalize_text(fields[1]) if len(fields) > 1 else []
            dst.write(docstream_line(docid, terms) + "\n")
    return 0


def cmd_index(args) -> int:
    index = DynamicIndex(_config_from_args(args))
    started = time.perf_counter()
    with open(args.docstream, encoding="utf-8") as fh:
        for docid, terms in read_docstream(fh):
            index.add_document(docid, terms)
    elapsed = time.perf_counter() - started
    index.save(args.out)
    report = space_report(index)
    print(
        f"docs: {index.doc_count} postings: {index.postings_count} "
        f"seconds: {elapsed:.3f} bytes_per_posting: {report.bytes_per_posting:.4f}",
        file=sys.stderr,
    )
    return 0


def _run_query(index: DynamicIndex, op: str, terms: list[str], k: int):
    if op == "conj":
        return [(index.docids[d - 1], None) for d in conjunction(index, terms)]
    return [(index.docids[s.docnum - 1], s.score) for s in topk_disjunctive(index, terms, k)]


def _emit_results(qidx: int, results, out) -> None:
    for docid, score in results:
        if score is None:
            out.write(f"{qidx}\t{docid}\n")
        else:
            out.write(f"{qidx}\t{docid}\t{score:.6f}\n")


def _timing_summary(label: str, times_ms: list[float]) -> None:
    if not times_ms:
        print(f"{label}: 0 queries", file=sys.stderr)
        return
    ordered = sorted(times_ms)
    mean = sum(ordered) / len(ordered)
    p95 = ordered[max(0, -(-len(ordered) * 95 // 100) - 1)]
    print(
        f"{label}: {len(ordered)} queries mean_ms: {mean:.3f} p95_ms: {p95:.3f}",
        file=sys.stderr,
    )


def cmd_query(args) -> int:
    index = DynamicIndex.load(args.image)
    times = []
    qidx = 0
    with open(args.queries, encoding="utf-8") as fh:
        for line in fh:
            terms = line.split()
            if not terms:
                continue
            qidx += 1
            started = time.perf_counter()
            results = _run_query(index, args.op, terms, args.k)
            times.append((time.perf_counter() - started) * 1000.0)
            _emit_results(qidx, results, sys.stdout)
    _timing_summary(f"{args.op}", times)
    return 0


def cmd_workload(args) -> int:
    if args.image:
        index = DynamicIndex.load(args.image)
    else:
        index = DynamicIndex(_config_from_args(args))
    inserts = 0
    qidx = 0
    times = []
    with open(args.script, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            fields = line.split()
            if not fields:
                continue
            tag = fields[0]
            if tag == "I":
                if len(fields) < 2:
                    raise ValueError(f"line {lineno}: insert without a docid")
                index.add_document(fields[1], fields[2:])
                inserts += 1
            elif tag == "Q":
                if len(fields) < 2 or fields[1] not in QUERY_OPS:
                    raise ValueError(f"line {lineno}: expected 'Q conj|topk terms...'")
                qidx += 1
                started = time.perf_counter()
                results = _run_query(index, fields[1], fields[2:], args.k)
                times.append((time.perf_counter() - started) * 1000.0)
                _emit_results(qidx, results, sys.stdout)
            else:
                raise ValueError(f"line {lineno}: unknown operation {tag!r}")
    if args.save_image:
        index.save(args.save_image)
    print(f"inserts: {inserts}", file=sys.stderr)
    _timing_summary("queries", times)
    return 0


def cmd_collate(args) -> int:
    index = DynamicIndex.load(args.image)
    collate(index, via_disk=args.via_disk)
    index.save(args.out or args.image)
    return 0


def cmd_stats(args) -> int:
    index = DynamicIndex.load(args.image)
    report = space_report(index).as_dict()
    if args.histogram:
        report["posting_size_histogram"] = posting_size_histogram(index)
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    if args.figures:
        from . import figures

        os.makedirs(args.figures, exist_ok=True)
        render = os.path.join(args.figures, "space_breakdown.png")
        figures.render_space_figure(report, render)
        paths = [render]
        if args.histogram:
            hist_path = os.path.join(args.figures, "posting_sizes.png")
            figures.render_histogram_figure(report["posting_size_histogram"], hist_path)
            paths.append(hist_path)
        print("figures: " + " ".join(paths), file=sys.stderr)
    return 0


def cmd_overhead(args) -> int:
    # the simulation studies the pure schedules, so the index-machinery
    # block-size and ordinal caps default to effectively unlimited here
    caps = {"link_bytes": args.link_bytes, "max_block": args.max_block, "max_ordinal": args.max_ordinal}
    policies = [
        GrowthPolicy("const", args.block_size, **caps),
        GrowthPolicy("expon", args.block_size, k=args.k, **caps),
        GrowthPolicy("triangle", args.block_size, **caps),
    ]
    for policy in policies:
        for cycle in overhead_cycles(policy, args.n_max):
            if not cycle["complete"]:
                continue
            sys.stdout.write(
                f"{policy.kind}\t{cycle['n_start']}\t{cycle['n_end']}\t"
                f"{cycle['mean_overhead']:.3f}\t{cycle['ratio']:.8f}\n"
            )
    if args.figure:
        from . import figures

        figures.render_overhead_figure(policies, args.n_max, args.figure)
        print(f"figure: {args.figure}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockindex",
        description="Dynamic in-memory inverted index over fixed-size block chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="convert raw corpus lines to a docstream")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("index", help="build an index image from a docstream")
    p.add_argument("docstream")
    p.add_argument("--out", required=True)
    _add_build_flags(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("query", help="run a query file against an image")
    p.add_argument("image")
    p.add_argument("queries")
    p.add_argument("--op", choices=QUERY_OPS, default="conj")
    p.add_argument("--k", type=int, default=10, help="answers per topk query")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("workload", help="run an interleaved insert/query script")
    p.add_argument("script")
    p.add_argument("--image", help="start from an existing image instead of empty")
    p.add_argument("--save-image", help="write the final index image here")
    p.add_argument("--k", type=int, default=10, help="answers per topk query")
    _add_build_flags(p, growth_k_flag="--growth-k")
    p.set_defaults(func=cmd_workload)

    p = sub.add_parser("collate", help="rewrite an image with contiguous chains")
    p.add_argument("image")
    p.add_argument("--out", help="default: rewrite in place")
    p.add_argument("--via-disk", action="store_true", help="stage through a temporary file")
    p.set_defaults(func=cmd_collate)

    p = sub.add_parser("stats", help="JSON space report for an image")
    p.add_argument("image")
    p.add_argument("--histogram", action="store_true", help="include the posting-size tally")
    p.add_argument("--figures", metavar="DIR", help="also render figures into DIR")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("overhead", help="simulate growth-policy overhead (TSV + figure)")
    p.add_argument("--block-size", type=int, default=16, metavar="B")
    p.add_argument("--k", type=float, default=1.1)
    p.add_argument("--link-bytes", type=int, default=1)
    p.add_argument("--n-max", type=int, default=50000)
    p.add_argument("--max-block", type=int, default=1 << 30)
    p.add_argument("--max-ordinal", type=int, default=1 << 30)
    p.add_argument("--figure", metavar="PNG", help="render the overhead curves here")
    p.set_defaults(func=cmd_overhead)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        # keep the interpreter's shutdown flush from reporting the pipe
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
