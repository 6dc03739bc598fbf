"""Command line frontend: compress, decompress, stats, corpus generation,
index dump and a theta sweep.

Exit codes: 0 ok, 2 usage (argparse), 3 I/O, 4 bad input text, 5 bad
container, 6 invalid coding, 7 budget/stream failure.
"""

import argparse
import json
import os
import random
import sys

from . import codec, streamkit
from .decompress import (PjMetrics, build_dep_streams, decompress, graph_stats)
from .factorizer import ScanStats, lower_bound_text, pipeline_compress
from .scheme import CodingError, Threshold
from .text_index import TextError, build_index, dump_index, make_text

EXIT_IO = 3
EXIT_TEXT = 4
EXIT_CODEC = 5
EXIT_CODING = 6
EXIT_BUDGET = 7


def _parse_mem(s):
    """Byte count with optional K/M/G suffix."""
    s = s.strip().lower()
    mult = 1
    for suf, m in (("k", 1 << 10), ("m", 1 << 20), ("g", 1 << 30)):
        if s.endswith(suf):
            s, mult = s[:-1], m
            break
    return int(float(s) * mult)


def _budget(args):
    tmp = getattr(args, "tmp", None)  # MemoryBudget falls back to PLCPZ_TMP
    mem = getattr(args, "mem", None)
    if mem is None:
        return streamkit.MemoryBudget.unbounded(tmp_dir=tmp)
    return streamkit.MemoryBudget(_parse_mem(mem), tmp_dir=tmp)


def _read_input(path):
    if path is None or path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as f:
        return f.read()


def _write_output(path, data):
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(path, "wb") as f:
            f.write(data)


def _metrics_sink(args):
    path = getattr(args, "metrics", None)
    if path is None:
        return None
    return open(path, "w")


def _emit(sink, record):
    if sink is not None:
        sink.write(json.dumps(record, sort_keys=True) + "\n")


def _text_from_raw(raw):
    if b"\x00" in raw:
        raise TextError("input contains the reserved byte 0")
    return make_text(raw)


# -- commands ---------------------------------------------------------------

def cmd_compress(args):
    raw = _read_input(args.input)
    t = _text_from_raw(raw)
    budget = _budget(args)
    sink = _metrics_sink(args)
    try:
        b = build_index(t)
        stats = ScanStats()
        f = pipeline_compress(t, b, Threshold(args.theta).theta,
                              budget=budget, stats=stats)
        _write_output(args.output, codec.encode_bytes(f))
        _emit(sink, {"event": "compress", **stats.as_dict(),
                     "factors": len(f.factors),
                     "references": len(f.references()),
                     "io": budget.stats.as_dict()})
    finally:
        if sink:
            sink.close()
    return 0


def cmd_decompress(args):
    blob = _read_input(args.input)
    f = codec.decode_bytes(blob)
    budget = _budget(args)
    sink = _metrics_sink(args)
    try:
        met = PjMetrics()
        t = decompress(f, strategy=args.strategy, budget=budget, metrics=met)
        _write_output(args.output, t.data[:-1])  # drop the sentinel
        for it in met.per_iteration:
            _emit(sink, {"event": "pj-iteration", **it})
        _emit(sink, {"event": "decompress", "strategy": args.strategy,
                     "n": f.n, "iterations": met.iterations,
                     "requests": met.requests, "splits": met.splits,
                     "pq_peak": met.pq_peak,
                     "io": budget.stats.as_dict()})
    finally:
        if sink:
            sink.close()
    return 0


def cmd_stats(args):
    raw = _read_input(args.input)
    budget = _budget(args)
    if raw[:8] == codec.MAGIC:
        f = codec.decode_bytes(raw)
        scan = None
    else:
        t = _text_from_raw(raw)
        b = build_index(t)
        scan = ScanStats()
        f = pipeline_compress(t, b, Threshold(args.theta).theta,
                              budget=budget, stats=scan)
    g = graph_stats(build_dep_streams(f, budget))
    report = {
        "n": f.n,
        "theta": f.theta,
        "factors": len(f.factors),
        "references": len(f.references()),
        "literals": len(f.factors) - len(f.references()),
        "depth": g.depth,
        "multi_dependent": g.multi_dependent_count,
    }
    if scan is not None:
        report["max_peak_list"] = scan.max_peak_list
        report["plcp_point_reads"] = scan.plcp_point_reads
    print(json.dumps(report, sort_keys=True))
    return 0


def repetitive_corpus(size, seed, sigma=4, phrase_len=64, mutate=0.02):
    """Seeded repetitive byte corpus: a random phrase copied with sparse
    point mutations, the usual shape for compression experiments."""
    rng = random.Random(seed)
    phrase = bytearray(rng.randint(1, sigma) for _ in range(phrase_len))
    out = bytearray()
    while len(out) < size:
        piece = bytearray(phrase)
        for k in range(len(piece)):
            if rng.random() < mutate:
                piece[k] = rng.randint(1, sigma)
        out += piece
    return bytes(out[:size])


def cmd_gen_corpus(args):
    if args.kind == "lower-bound":
        data = lower_bound_text(args.m).data[:-1]
    else:
        data = repetitive_corpus(_parse_mem(args.size), args.seed)
    _write_output(args.output, data)
    return 0


def cmd_index(args):
    raw = _read_input(args.input)
    t = _text_from_raw(raw)
    b = build_index(t)
    if args.output is None:
        raise FileNotFoundError("index needs an output path (-o)")
    dump_index(b, args.output)
    return 0


def cmd_theta_sweep(args):
    raw = _read_input(args.input)
    t = _text_from_raw(raw)
    b = build_index(t)
    budget = _budget(args)
    lo, hi = (int(x) for x in args.range.split(":"))
    for theta in range(lo, hi + 1):
        f = pipeline_compress(t, b, Threshold(theta).theta, budget=budget)
        print(json.dumps({"theta": theta, "factors": len(f.factors),
                          "references": len(f.references())}))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="plcpz",
                                description="PLCP-driven bidirectional "
                                            "compression")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, theta=False, strategy=False):
        sp.add_argument("input", nargs="?", default=None,
                        help="input path, '-' or absent for stdin")
        sp.add_argument("-o", "--output", default=None,
                        help="output path, absent for stdout")
        sp.add_argument("--mem", default=None,
                        help="memory budget, e.g. 64M (default unbounded)")
        sp.add_argument("--tmp", default=None,
                        help="spill directory (overrides PLCPZ_TMP)")
        sp.add_argument("--metrics", default=None,
                        help="write JSON-lines metrics to this path")
        if theta:
            sp.add_argument("--theta", type=int, default=2,
                            help="minimum reference length (default 2)")
        if strategy:
            sp.add_argument("--strategy", default="pj",
                            choices=["oracle", "pj", "compact-pj"])

    common(sub.add_parser("compress", help="compress text to a container"),
           theta=True)
    common(sub.add_parser("decompress", help="decode and resolve a container"),
           strategy=True)
    common(sub.add_parser("stats",
                          help="factor and dependency census of a text or "
                               "container"), theta=True)

    g = sub.add_parser("gen-corpus", help="write a benchmark corpus")
    g.add_argument("kind", choices=["lower-bound", "repetitive"])
    g.add_argument("-o", "--output", default=None)
    g.add_argument("--m", type=int, default=100,
                   help="lower-bound alphabet size (text length m*m)")
    g.add_argument("--size", default="1M", help="repetitive corpus size")
    g.add_argument("--seed", type=int, default=0)

    common(sub.add_parser("index", help="build and dump the text index"))

    s = sub.add_parser("theta-sweep",
                       help="factor counts across a theta range")
    common(s)
    s.add_argument("--range", default="2:8", help="inclusive lo:hi")
    return p


_HANDLERS = {
    "compress": cmd_compress,
    "decompress": cmd_decompress,
    "stats": cmd_stats,
    "gen-corpus": cmd_gen_corpus,
    "index": cmd_index,
    "theta-sweep": cmd_theta_sweep,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (OSError, FileNotFoundError) as e:
        print("plcpz: %s" % e, file=sys.stderr)
        return EXIT_IO
    except TextError as e:
        print("plcpz: bad input text: %s" % e, file=sys.stderr)
        return EXIT_TEXT
    except codec.CodecError as e:
        print("plcpz: bad container: %s" % e, file=sys.stderr)
        return EXIT_CODEC
    except CodingError as e:
        print("plcpz: invalid coding: %s" % e, file=sys.stderr)
        return EXIT_CODING
    except streamkit.StreamError as e:
        print("plcpz: stream failure: %s" % e, file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as e:
        print("plcpz: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
