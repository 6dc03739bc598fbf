"""Decompression of cycle-free bidirectional codings.

Three routes with one contract: the fixed-point oracle (test baseline),
chain compaction of the coding (in-memory and stream variants), and the
pointer-jumping decompressor that halves dependency depth per pass.
"""

import bisect
import math
import random
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import streamkit
from .scheme import (CodingError, Factor, Factorization, char_source_map,
                     coalesce_literals, verify_cycle_free)
from .text_index import Text

MAX_PJ_SLACK = 2  # iterations beyond ceil(log2 n) imply a cycle


# ---------------------------------------------------------------------------
# fixed-point oracle

def decompress_oracle(f: Factorization) -> Text:
    return _oracle(f)[0]


def oracle_rounds(f: Factorization) -> int:
    """Number of full sweeps the fixed-point oracle needs."""
    return _oracle(f)[1]


def _oracle(f):
    f.validate()
    n = f.n
    text = np.zeros(n, dtype=np.uint8)
    resolved = np.zeros(n, dtype=bool)
    for fac in f.factors:
        if not fac.is_reference:
            d0 = fac.dst - 1
            text[d0: d0 + fac.length] = np.frombuffer(fac.literal,
                                                      dtype=np.uint8)
            resolved[d0: d0 + fac.length] = True
    src_map = char_source_map(f)
    open_pos = np.flatnonzero(~resolved)
    rounds = 0
    while open_pos.size:
        ready = resolved[src_map[open_pos]]
        if not ready.any():
            raise CodingError("cyclic coding: no progress with %d open"
                              % open_pos.size)
        hit = open_pos[ready]
        text[hit] = text[src_map[hit]]
        resolved[hit] = True
        open_pos = open_pos[~ready]
        rounds += 1
    return Text(text.tobytes()), rounds


# ---------------------------------------------------------------------------
# dependency graph

@dataclass
class DepEdgeStreams:
    """EM picture of the dependency graph: requests and factor spans, each
    sorted by its first component."""

    requests: streamkit.TupleStream
    factors: streamkit.TupleStream
    form: str = "tree"  # "tree": (src,len,id)/(dst,len,id); "pj": see build


@dataclass
class DepGraphStats:
    node_count: int
    depth: int
    multi_dependent_count: int


def build_dep_streams(f: Factorization, budget=None,
                      form: str = "tree") -> DepEdgeStreams:
    """Tree form: requests (src, len, id) and factors (dst, len, id), the
    latter including literal factors.  PJ form: requests (src, dst, len)
    sorted by source and factors (dst, src, len) sorted by destination,
    references only."""
    budget = budget or streamkit.MemoryBudget.unbounded()
    req = streamkit.TupleStream(3, budget)
    fac = streamkit.TupleStream(3, budget)
    if form == "tree":
        for i, x in enumerate(f.factors, start=1):
            fac.append((x.dst, x.length, i))
            if x.is_reference:
                req.append((x.src, x.length, i))
    elif form == "pj":
        for x in f.factors:
            if x.is_reference:
                req.append((x.src, x.dst, x.length))
                fac.append((x.dst, x.src, x.length))
    else:
        raise ValueError("unknown form %r" % form)
    req = streamkit.sort_stream(req.finalize(), budget, key=(0,))
    fac = streamkit.sort_stream(fac.finalize(), budget, key=(0,))
    return DepEdgeStreams(requests=req, factors=fac, form=form)


def _parents(f: Factorization):
    """For each factor index (1-based): the index of the unique factor wholly
    containing its source span, or None for literals and multi-dependent
    references."""
    starts = [x.dst for x in f.factors]
    parent = [None] * (len(f.factors) + 1)
    for i, x in enumerate(f.factors, start=1):
        if not x.is_reference:
            continue
        j = bisect.bisect_right(starts, x.src)  # 1-based factor index
        p = f.factors[j - 1]
        if x.src + x.length <= p.dst + p.length:
            parent[i] = j
    return parent


def graph_stats(streams: DepEdgeStreams) -> DepGraphStats:
    """Node census and iterative resolution depth of the dependency graph."""
    if streams.form != "tree":
        raise ValueError("graph stats need tree-form streams")
    fac = streams.factors.to_array()  # (dst, len, id) sorted by dst
    req = streams.requests.to_array()
    b = len(fac)
    is_ref = np.zeros(b + 1, dtype=bool)
    if len(req):
        is_ref[req[:, 2]] = True
    dsts = fac[:, 0]
    # edges: request id -> every other factor its source span overlaps;
    # factors tile the text, so overlapped factors form a contiguous range
    multi = 0
    for src, l, i in req.tolist():
        lo = int(np.searchsorted(dsts, src, side="right")) - 1
        hi = int(np.searchsorted(dsts, src + l - 1, side="right")) - 1
        outdeg = sum(1 for k in range(lo, hi + 1) if int(fac[k, 2]) != i)
        if outdeg > 1:
            multi += 1

    # Depth by character-level iterative resolution: multi-dependent factors
    # may form factor-level cycles even though the coding itself is fine, so
    # the factor graph alone cannot be swept to a fixed point.
    n = int((fac[:, 0] + fac[:, 1]).max()) - 1 if b else 0
    src_map = np.arange(n, dtype=np.int64)
    resolved = np.ones(n, dtype=bool)
    by_id = {int(i): (int(d), int(l)) for d, l, i in fac.tolist()}
    for src, l, i in req.tolist():
        d0 = by_id[int(i)][0] - 1
        src_map[d0: d0 + l] = np.arange(src - 1, src - 1 + l)
        resolved[d0: d0 + l] = False
    open_pos = np.flatnonzero(~resolved)
    depth = 0
    while open_pos.size:
        ready = resolved[src_map[open_pos]]
        if not ready.any():
            raise CodingError("cyclic coding")
        resolved[open_pos[ready]] = True
        open_pos = open_pos[~ready]
        depth += 1
    return DepGraphStats(node_count=b, depth=depth,
                         multi_dependent_count=multi)


# ---------------------------------------------------------------------------
# compaction

def compact_im(f: Factorization) -> Factorization:
    """Redirect every single-dependent reference chain straight to its root:
    the first ancestor that is a literal or multi-dependent factor."""
    f.validate()
    parent = _parents(f)
    factors = f.factors
    memo = {}  # factor idx -> compacted src (single-dependent refs only)

    def final_src(i):
        if i in memo:
            return memo[i]
        s = factors[i - 1].src
        j = parent[i]
        hops = 0
        while True:
            pj = factors[j - 1]
            if not pj.is_reference or parent[j] is None:
                break  # literal or multi-dependent root
            if j in memo:
                s = memo[j] + (s - pj.dst)
                break
            hops += 1
            if hops > len(factors):
                raise CodingError("cycle in single-dependent chain")
            s = pj.src + (s - pj.dst)
            j = parent[j]
        memo[i] = s
        return s

    out = []
    for i, x in enumerate(factors, start=1):
        if x.is_reference and parent[i] is not None \
                and factors[parent[i] - 1].is_reference:
            out.append(Factor(x.dst, x.length, src=final_src(i)))
        else:
            out.append(x)
    return Factorization(f.n, f.theta, out).validate()


def _euler_depths(parent, b):
    """Depths of nodes 1..b under a virtual root 0, via an Euler tour ranked
    by pointer jumping.  parent[i] is the tree parent (0 for top level)."""
    par = np.zeros(b + 1, dtype=np.int64)
    for i in range(1, b + 1):
        par[i] = parent[i]
    order = np.argsort(par[1:], kind="stable") + 1  # children grouped by parent
    # tour elements: 2*i = enter(i), 2*i+1 = leave(i); root enters at 0
    first_child = {}
    next_sib = np.full(b + 1, -1, dtype=np.int64)
    prev = {}
    for i in order.tolist():
        p = int(par[i])
        if p not in first_child:
            first_child[p] = i
        else:
            next_sib[prev[p]] = i
        prev[p] = i
    nxt = np.full(2 * (b + 1), -1, dtype=np.int64)
    val = np.zeros(2 * (b + 1), dtype=np.int64)
    for i in range(b + 1):
        val[2 * i] = 1
        val[2 * i + 1] = -1
        c = first_child.get(i, None)
        nxt[2 * i] = 2 * c if c is not None else 2 * i + 1
        s = next_sib[i]
        if i == 0:
            continue
        nxt[2 * i + 1] = 2 * s if s >= 0 else 2 * int(par[i]) + 1
    # Wyllie ranking: prefix sums along the tour by pointer doubling
    rank = val.copy()
    link = nxt.copy()
    # walk from the tour head; compute prefix sums by doubling from each node
    # backwards is awkward, so rank suffix sums and convert
    while True:
        has = link >= 0
        if not has.any():
            break
        l2 = link.copy()
        r2 = rank.copy()
        idx = np.flatnonzero(has)
        r2[idx] = rank[idx] + rank[link[idx]]
        l2[idx] = link[link[idx]]
        rank, link = r2, l2
    # rank[e] now holds the suffix sum from e to the tour end (total 0),
    # so the prefix sum up to and including e equals -rank[nxt0[e]] resolved
    # directly: prefix(e) = total - suffix(after e) = rank[e] ... using
    # suffix(e) = sum from e to end, prefix incl e = total - suffix(e) + val[e]
    depth = np.zeros(b + 1, dtype=np.int64)
    total = 0  # tour sums to zero: every enter has a leave
    for i in range(1, b + 1):
        depth[i] = total - rank[2 * i] + val[2 * i]
    return depth


def compact_em(f: Factorization, budget=None) -> Factorization:
    """Stream variant of chain compaction: gather children by sorted scans,
    depth via Euler-tour list ranking, updates delivered time-forward
    through a priority queue.  Output equals compact_im."""
    budget = budget or streamkit.MemoryBudget.unbounded()
    f.validate()
    streams = build_dep_streams(f, budget, form="tree")
    fac_arr = streams.factors.to_array()   # (dst, len, id) sorted by dst
    req_arr = streams.requests.to_array()  # (src, len, id) sorted by src
    b = len(fac_arr)
    factors = f.factors

    # Step 2: children by simultaneous scan; wholly contained => tree edge.
    # Sources that cross a factor boundary, overlap their own span or sit in
    # a literal hang off the virtual root: no compaction flows through them,
    # and keeping them out of the tree keeps the tour acyclic even when such
    # factors overlap each other's sources mutually.
    contained = np.zeros(b + 1, dtype=bool)
    parent = np.zeros(b + 1, dtype=np.int64)  # 0 = virtual root
    fi = 0
    for src, l, i in req_arr.tolist():
        while fi + 1 < b and fac_arr[fi + 1, 0] <= src:
            fi += 1
        dstp, lnp, idp = (int(v) for v in fac_arr[fi])
        if idp != i and src + l <= dstp + lnp:
            parent[i] = idp
            contained[i] = True

    # Step 3: depths on the virtual-rooted tree
    tree_parent = [0] * (b + 1)
    is_ref = np.zeros(b + 1, dtype=bool)
    for _, _, i in req_arr.tolist():
        is_ref[i] = True
        tree_parent[i] = int(parent[i])
    depth = _euler_depths(tree_parent, b)

    # Step 4: annotate with depth, process layer-wise left-to-right,
    # forwarding final referred positions to contained children
    sched = streamkit.TupleStream(2, budget)
    for i in range(1, b + 1):
        sched.append((int(depth[i]), i))
    sched = streamkit.sort_stream(sched.finalize(), budget)
    children = [[] for _ in range(b + 1)]
    for _, _, i in req_arr.tolist():
        if contained[i]:
            children[int(parent[i])].append(int(i))
    pq = streamkit.SpillingPriorityQueue(4, budget, key=(0, 1))  # (d, id, ...)
    new_src = {}
    for d, i in sched:
        x = factors[i - 1]
        src = x.src if x.is_reference else None
        if len(pq) and pq.peek_key() == (d, i):
            _, _, src1, dst1 = pq.pop()
            src = src1 + src - dst1
            new_src[i] = src
        if x.is_reference and contained[i]:
            # single-dependent references forward their (final) source
            for j in children[i]:
                pq.push((d + 1, j, src, x.dst))
    sched.close()
    streams.requests.close()
    streams.factors.close()

    out = []
    for i, x in enumerate(factors, start=1):
        if i in new_src:
            out.append(Factor(x.dst, x.length, src=new_src[i]))
        else:
            out.append(x)
    return Factorization(f.n, f.theta, out).validate()


# ---------------------------------------------------------------------------
# pointer-jumping decompressor

@dataclass
class PjMetrics:
    iterations: int = 0
    requests: int = 0
    splits: int = 0
    resolutions: int = 0
    pq_peak: int = 0
    per_iteration: List[dict] = field(default_factory=list)


def decompress_pj(f: Factorization, budget=None,
                  metrics: Optional[PjMetrics] = None,
                  engine: Optional[str] = None) -> Text:
    """Resolve all references by pointer jumping over sorted request and
    reference lists, halving dependency depth per iteration.

    ``engine`` "scalar" processes requests one by one with a spilling
    priority queue for same-pass splits; "batch" performs the identical
    resolve/split/jump events in vectorized waves.  Both produce the same
    text in the same number of iterations; the default picks by input size.
    """
    budget = budget or streamkit.MemoryBudget.unbounded()
    f.validate()
    n = f.n
    text = np.zeros(n, dtype=np.uint8)
    met = metrics if metrics is not None else PjMetrics()
    if engine is None:
        engine = "batch" if n > (1 << 16) else "scalar"
    if engine not in ("scalar", "batch"):
        raise ValueError("unknown engine %r" % engine)

    # the reference list is the request list with dst and src swapped; the
    # batch engine rebuilds it per pass as flat arrays instead of keeping a
    # second stream alive
    l_req = streamkit.TupleStream(3, budget)  # (src, dst, len)
    l_ref = streamkit.TupleStream(3, budget) if engine == "scalar" else None
    for x in f.factors:
        if x.is_reference:
            l_req.append((x.src, x.dst, x.length))
            if l_ref is not None:
                l_ref.append((x.dst, x.src, x.length))
        else:
            d0 = x.dst - 1
            text[d0: d0 + x.length] = np.frombuffer(x.literal, dtype=np.uint8)
    l_req = streamkit.sort_stream(l_req.finalize(), budget, key=(0,))
    if l_ref is not None:
        l_ref.finalize()

    max_iter = max(1, math.ceil(math.log2(max(2, n)))) + MAX_PJ_SLACK
    while l_req.length:
        met.iterations += 1
        if met.iterations > max_iter:
            raise CodingError("pointer jumping does not converge: cycle")
        it_stats = {"iteration": met.iterations, "requests": 0, "splits": 0,
                    "resolutions": 0, "jumps": 0}
        req_new = streamkit.TupleStream(3, budget)
        res = streamkit.TupleStream(3, budget)  # (src, dst, len)
        if engine == "scalar":
            ref_new = streamkit.TupleStream(3, budget)
            _pj_pass_scalar(l_req, l_ref, req_new, ref_new, res, budget,
                            met, it_stats)
        else:
            ref_new = None
            _pj_pass_batch(l_req, req_new, res, met, it_stats)

        # materialize this iteration's resolutions: everything they read is
        # final by now, and later iterations may read what they write
        met.resolutions += res.length
        _apply_resolutions(text, res.finalize(), budget)
        res.close()
        # release each stream before sorting the next: the passes over big
        # inputs keep several request-sized buffers otherwise
        l_req.close()
        l_req = streamkit.sort_stream(req_new.finalize(), budget, key=(0,))
        req_new.close()
        if l_ref is not None:
            l_ref.close()
            l_ref = streamkit.sort_stream(ref_new.finalize(), budget,
                                          key=(0,))
            ref_new.close()
        it_stats["io"] = budget.stats.as_dict()
        met.per_iteration.append(it_stats)
    l_req.close()
    if l_ref is not None:
        l_ref.close()
    return Text(text.tobytes())


def _pj_pass_scalar(l_req, l_ref, req_new, ref_new, res, budget, met,
                    it_stats):
    """One pass over the requests in source order, splits delivered back
    into the pass through a priority queue keyed by source position."""
    pq = streamkit.SpillingPriorityQueue(3, budget, key=(0,))
    ref_it = iter(l_ref)
    head = next(ref_it, None)
    req_it = iter(l_req)
    pending = next(req_it, None)
    while pending is not None or len(pq):
        if len(pq) and (pending is None or pq.peek_key() <= (pending[0],)):
            src0, dst0, ell0 = pq.pop()
        else:
            src0, dst0, ell0 = pending
            pending = next(req_it, None)
        met.requests += 1
        it_stats["requests"] += 1
        # parent candidate: smallest dst with dst + len > src0
        while head is not None and head[0] + head[2] <= src0:
            head = next(ref_it, None)
        if head is None or src0 + ell0 <= head[0]:
            res.append((src0, dst0, ell0))
            it_stats["resolutions"] += 1
            continue
        dst1, src1, ell1 = head
        if src0 < dst1:
            # prefix up to the parent is already decodable
            res.append((src0, dst0, dst1 - src0))
            it_stats["resolutions"] += 1
            dst0 += dst1 - src0
            ell0 -= dst1 - src0
            src0 = dst1
        if dst1 + ell1 - src0 < ell0:
            # split: the tail continues behind the parent this iteration
            tail = ell0 - (dst1 + ell1 - src0)
            pq.push((dst1 + ell1, dst0 + dst1 + ell1 - src0, tail))
            met.pq_peak = max(met.pq_peak, len(pq))
            met.splits += 1
            it_stats["splits"] += 1
            ell0 = dst1 + ell1 - src0
        # jump: re-point at the parent's source
        src0 = src1 + src0 - dst1
        req_new.append((src0, dst0, ell0))
        ref_new.append((dst0, src0, ell0))
        it_stats["jumps"] += 1


def _pj_pass_batch(l_req, req_new, res, met, it_stats):
    """The scalar pass's events in vectorized waves.

    Request processing order within a pass is immaterial (all reads hit
    this pass's reference list, writes land afterwards), so each wave
    resolves, splits and jumps every live request at once and the split
    tails form the next wave.  The reference list is the request list with
    dst and src swapped, gathered here into dst-sorted int32 arrays (all
    positions fit) instead of a second full stream.
    """
    k = l_req.length
    srcc = np.empty(k, dtype=np.int32)
    dstc = np.empty(k, dtype=np.int32)
    lenc = np.empty(k, dtype=np.int32)
    pos = 0
    for chunk in l_req.chunk_iter(chunk_items=1 << 20):
        m = len(chunk)
        srcc[pos: pos + m] = chunk[:, 0]
        dstc[pos: pos + m] = chunk[:, 1]
        lenc[pos: pos + m] = chunk[:, 2]
        pos += m
    order = np.argsort(dstc)  # dsts are disjoint, ties impossible
    dst1 = dstc[order]
    src1 = srcc[order]
    ends = dst1 + lenc[order]
    del srcc, dstc, lenc, order
    for chunk in l_req.chunk_iter(chunk_items=1 << 20):
        _pj_batch_waves(chunk, dst1, src1, ends, k, req_new, res,
                        met, it_stats)


def _pj_batch_waves(cur, dst1, src1, ends, k, req_new, res, met, it_stats):
    while len(cur):
        met.requests += len(cur)
        it_stats["requests"] += len(cur)
        src0 = cur[:, 0]
        # parent candidate: smallest dst with dst + len > src
        i = np.searchsorted(ends, src0, side="right")
        safe = np.minimum(i, max(k - 1, 0))
        hasp = (i < k) & (src0 + cur[:, 2] > dst1[safe]) if k else \
            np.zeros(len(cur), dtype=bool)
        done = cur[~hasp]
        if len(done):
            res.extend_array(done)
            it_stats["resolutions"] += len(done)
        cur = cur[hasp]
        i = i[hasp]
        src0 = cur[:, 0].copy()
        dst0 = cur[:, 1].copy()
        ell0 = cur[:, 2].copy()
        d1 = dst1[i]
        s1 = src1[i]
        e1 = ends[i]
        pre = np.maximum(0, d1 - src0)  # decodable prefix before the parent
        pr = pre > 0
        if pr.any():
            res.extend_array(np.column_stack((src0[pr], dst0[pr], pre[pr])))
            it_stats["resolutions"] += int(pr.sum())
            src0 += pre
            dst0 += pre
            ell0 -= pre
        overlap = np.minimum(ell0, e1 - src0)
        tail_len = ell0 - overlap
        tl = tail_len > 0
        jumped = np.column_stack((s1 + src0 - d1, dst0, overlap))
        req_new.extend_array(jumped)
        it_stats["jumps"] += len(jumped)
        nsplit = int(tl.sum())
        met.splits += nsplit
        it_stats["splits"] += nsplit
        cur = np.column_stack((e1[tl], dst0[tl] + overlap[tl], tail_len[tl]))
        met.pq_peak = max(met.pq_peak, len(cur))


def _apply_resolutions(text, res, budget):
    """Copy T[src..src+len-1] to dst for each tuple: entries sorted by src,
    expanded to per-character (dst, char) pairs, written in dst order."""
    res_sorted = streamkit.sort_stream(res, budget, key=(0,))
    for chunk in res_sorted.chunk_iter(chunk_items=1 << 15):
        l = chunk[:, 2]
        # within-run offsets 0..l-1 for every run, flattened
        off = np.arange(int(l.sum()), dtype=np.int64) \
            - np.repeat(np.cumsum(l) - l, l)
        alld = np.repeat(chunk[:, 1] - 1, l) + off
        alls = np.repeat(chunk[:, 0] - 1, l) + off
        allc = text[alls]  # copies: reads precede all writes
        # destinations are written once over the whole decompression
        text[alld] = allc
    res_sorted.close()


# ---------------------------------------------------------------------------
# generators and strategy dispatch

def random_bidirectional_coding(seed: int, n: int,
                                max_len: int = 32) -> Tuple[Text, Factorization]:
    """A deterministic text plus a valid cycle-free bidirectional coding of
    it, with references in both directions and multi-dependent factors."""
    rng = random.Random(seed)
    sigma = rng.choice([2, 3, 4])
    phrase = bytes(rng.randint(97, 96 + sigma)
                   for _ in range(rng.randint(3, 12)))
    buf = bytearray()
    while len(buf) < n:
        if rng.random() < 0.7:
            buf += phrase
        else:
            buf.append(rng.randint(97, 96 + sigma))
    raw = bytes(buf[:n])
    t = Text(raw + b"\x00") if not raw.endswith(b"\x00") else Text(raw)
    data = t.data
    nn = t.n

    tiles = []
    pos = 1
    while pos <= nn:
        rem = nn - pos + 1
        l = rng.randint(1, min(max_len, rem))
        sub = data[pos - 1: pos - 1 + l]
        src = None
        if l >= 2 and rng.random() < 0.75:
            # look for another occurrence, forward or backward
            hay = data
            cand = []
            a = hay.find(sub)
            while a != -1 and len(cand) < 8:
                # keep sources disjoint from the factor's own span
                if a + 1 + l <= pos or a + 1 >= pos + l:
                    cand.append(a + 1)
                a = hay.find(sub, a + 1)
            if cand:
                src = rng.choice(cand)
        if src is not None:
            tiles.append((pos, l, src, None))
        else:
            tiles.append((pos, l, None, sub))
        pos += l
    fz = coalesce_literals(nn, 2, tiles).validate()

    # degrade cycle participants to literals until resolution terminates
    while not verify_cycle_free(fz):
        src_map = char_source_map(fz)
        resolved = np.zeros(nn, dtype=bool)
        for x in fz.factors:
            if not x.is_reference:
                resolved[x.dst - 1: x.end - 1] = True
        open_pos = np.flatnonzero(~resolved)
        while open_pos.size:
            ready = resolved[src_map[open_pos]]
            if not ready.any():
                break
            resolved[open_pos[ready]] = True
            open_pos = open_pos[~ready]
        stuck = set(open_pos.tolist())
        out = []
        for x in fz.factors:
            if x.is_reference and any(p in stuck
                                      for p in range(x.dst - 1, x.end - 1)):
                out.append(Factor(x.dst, x.length,
                                  literal=data[x.dst - 1: x.end - 1]))
            else:
                out.append(x)
        fz = Factorization(nn, 2, out).validate()
    return t, fz


def chain_coding(depth: int, block_len: int = 8,
                 seed: int = 0) -> Tuple[Text, Factorization]:
    """Text of depth+1 equal blocks where block i references block i+1 and
    the last block is literal: dependency depth is exactly ``depth``."""
    rng = random.Random(seed)
    block = bytes(rng.randint(97, 99) for _ in range(block_len))
    raw = block * (depth + 1)
    t = Text(raw + b"\x00")
    factors = []
    for i in range(depth):
        factors.append(Factor(i * block_len + 1, block_len,
                              src=(i + 1) * block_len + 1))
    tail_start = depth * block_len + 1
    factors.append(Factor(tail_start, t.n - tail_start + 1,
                          literal=t.data[tail_start - 1:]))
    return t, Factorization(t.n, 2, factors).validate()


def decompress(f: Factorization, strategy: str = "pj", budget=None,
               metrics=None) -> Text:
    if strategy == "oracle":
        return decompress_oracle(f)
    if strategy == "pj":
        return decompress_pj(f, budget, metrics=metrics)
    if strategy in ("compact-pj", "compact+pj"):
        return decompress_pj(compact_em(f, budget), budget, metrics=metrics)
    raise ValueError("unknown strategy %r" % strategy)
