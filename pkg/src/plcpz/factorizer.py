"""Streaming plcpcomp factorization: one left-to-right scan of PLCP with a
list of interesting peaks, followed by the sort/merge/substitute pipeline.

The scanner keeps only the interesting peaks seen since the last factor
batch.  A batch fires when the scan clears the window of the highest peak
(which is then provably a maximal peak); the batch factors that peak, clips
the remaining peaks (Rule D), and recursively factors the survivors from the
highest down.  The only PLCP values ever revisited are the single positions
succeeding an inner factor, fetched by positional read.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import streamkit
from .scheme import Factorization, coalesce_literals
from .text_index import IndexBundle, Text


@dataclass
class ScanStats:
    """Factorizer metrics for one run."""

    n: int = 0
    theta: int = 0
    pairs: int = 0
    max_peak_list: int = 0
    successor_insertions: int = 0
    plcp_point_reads: int = 0

    def as_dict(self):
        return self.__dict__.copy()


class PlcpSource:
    """Sequential + positional access to a PLCP sequence (1-based)."""

    def __init__(self, backing, n=None):
        self._arr = None
        self._stream = None
        if isinstance(backing, streamkit.TupleStream):
            self._stream = backing.finalize()
            self.n = backing.length
        else:
            self._arr = np.asarray(backing)
            self.n = len(self._arr)
        if n is not None and n != self.n:
            raise ValueError("length mismatch")

    def chunks(self):
        if self._arr is not None:
            step = 1 << 18
            for i in range(0, self.n, step):
                yield self._arr[i: i + step]
        else:
            for chunk in self._stream.chunk_iter(chunk_items=1 << 18):
                yield chunk[:, 0]

    def value_at(self, pos):
        """1-based positional read."""
        if self._arr is not None:
            return int(self._arr[pos - 1])
        return int(self._stream.read_at(pos - 1))


class _PeakScanner:
    """Single pass of Algorithm-style peak processing.

    ``emit(dst, length)`` receives factor pairs in discovery order.
    ``flags`` (optional) is a dict pos -> [peak, interesting, maximal].
    """

    def __init__(self, plcp: PlcpSource, theta: int, emit, stats: ScanStats,
                 flags=None):
        self.plcp = plcp
        self.theta = theta
        self.emit = emit
        self.stats = stats
        self.flags = flags
        # scan-level peak list: [pos, val, end]; vals strictly ascending
        self.L: List[list] = []
        self.batch_factors: List[Tuple[int, int]] = []
        self.last_factor_end = 0  # 1-based end position of last top factor

    def _flag(self, pos, j):
        if self.flags is not None:
            self.flags.setdefault(pos, [False, False, False])[j] = True

    def run(self):
        theta = self.theta
        L = self.L
        stats = self.stats
        prev = 0
        i = 1
        for chunk in self.plcp.chunks():
            for v in chunk.tolist():
                if L and i >= L[-1][2]:
                    self._run_batch()
                if v >= theta and (i == 1 or prev < v
                                   or self.last_factor_end == i - 1):
                    self._flag(i, 0)
                    if not L or v > L[-1][1]:
                        self._flag(i, 1)
                        L.append([i, v, i + v])
                prev = v
                i += 1
        while L:
            self._run_batch()

    # -- batch processing -------------------------------------------------

    def _emit(self, dst, length):
        self._flag(dst, 0)
        self._flag(dst, 1)
        self._flag(dst, 2)
        self.emit(dst, length)
        self.stats.pairs += 1

    def _run_batch(self):
        """Factor the maximal peak on top of L, then resolve the rest."""
        # |L| metric: peaks buffered while searching for this maximal peak
        waiting = len(self.L) - 1
        if waiting > self.stats.max_peak_list:
            self.stats.max_peak_list = waiting
        p, v, _ = self.L.pop()
        self._emit(p, v)
        self.last_factor_end = p + v - 1
        self.batch_factors = [(p, v)]
        seg = self._apply_rule_d(self.L, p, v)
        self.L.clear()
        self._resolve(seg)
        self.batch_factors = []

    def _apply_rule_d(self, entries, dst, ell):
        """Clip peaks overlapped by factor (dst, ell) and drop the ones that
        fall below theta or lose interestingness."""
        theta = self.theta
        lo = dst - ell
        out = []
        for e in entries:
            pos, val = e[0], e[1]
            if pos >= lo:
                cap = dst - pos
                if cap < val:
                    val = cap
            if val < theta:
                continue
            if out and pos < out[-1][0] + out[-1][1] and val <= out[-1][1]:
                continue  # covered by a surviving peak of at least its height
            out.append([pos, val])
        return out

    def _resolve(self, seg):
        """Factor the surviving peaks of a batch segment, highest first.

        Each factored peak splits its segment: the left part gets clipped
        (Rule D), the right part only loses entries swallowed by the new
        factor (Rule R), and the factor's window-end successor may join the
        right part.  The parts are independent afterwards.
        """
        stack = [seg]
        while stack:
            seg = stack.pop()
            if not seg:
                continue
            best = 0
            for k in range(1, len(seg)):  # leftmost among equal maxima
                if seg[k][1] > seg[best][1]:
                    best = k
            p, v = seg[best]
            self._emit(p, v)
            self.batch_factors.append((p, v))
            right = [e for e in seg[best + 1:] if e[0] >= p + v]
            left = self._apply_rule_d(seg[:best], p, v)
            if not (right and right[0][0] == p + v):
                succ = self._successor_peak(p, v)
                if succ is not None:
                    right.insert(0, succ)
            stack.append(left)
            stack.append(right)  # popped first: right before left

    def _successor_peak(self, p, v):
        """The single position that may become a new interesting peak after
        factoring (p, v): its window-end successor.

        Called only when p + v is not already in the peak list.  Positions
        further right need no attention here: if they resurface, they do so
        at the window end of a later factor and are caught by its successor.
        """
        d2 = p + v
        if d2 > self.plcp.n:
            return None
        for fd, fl in self.batch_factors:
            if fd <= d2 < fd + fl:
                return None  # inside an emitted factor, value is zeroed
        self.stats.plcp_point_reads += 1
        u = self.plcp.value_at(d2)
        # Rule (D) from every factor of this batch that overlaps d2
        for fd, fl in self.batch_factors:
            if fd > d2 >= fd - fl and fd - d2 < u:
                u = fd - d2
        if u < self.theta:
            return None
        self.stats.successor_insertions += 1
        self._flag(d2, 0)
        self._flag(d2, 1)
        return [d2, u]


def stream_factorize(plcp, theta: int, budget=None,
                     stats: Optional[ScanStats] = None) -> streamkit.TupleStream:
    """Scan PLCP once and emit referencing-factor pairs (dst, len) in
    discovery order.  The pair set equals the plcpcomp scheme's."""
    budget = budget or streamkit.MemoryBudget.unbounded()
    src = plcp if isinstance(plcp, PlcpSource) else PlcpSource(plcp)
    stats = stats if stats is not None else ScanStats()
    stats.n = src.n
    stats.theta = theta
    pairs = streamkit.TupleStream(2, budget)
    scanner = _PeakScanner(src, theta, lambda d, l: pairs.append((d, l)), stats)
    scanner.run()
    return pairs.finalize()


def detect_peaks(plcp, theta: int):
    """Classify every position: (pos, is_peak, is_interesting, is_maximal),
    in position order, as the streaming scan evaluates them."""
    src = plcp if isinstance(plcp, PlcpSource) else PlcpSource(plcp)
    flags = {}
    stats = ScanStats()
    scanner = _PeakScanner(src, theta, lambda d, l: None, stats, flags=flags)
    scanner.run()
    return [(pos, *flags.get(pos, [False, False, False]))
            for pos in range(1, src.n + 1)]


def process_peak_list(L, dst, ell, plcp, theta, n=None):
    """Apply the post-factor recursion to a standalone peak list.

    ``L`` is a list of (pos, val) pairs of interesting peaks left of ``dst``;
    returns (emitted pairs, remaining list).  Exposed for targeted testing of
    the batch machinery against oracle prefix replays.
    """
    src = plcp if isinstance(plcp, PlcpSource) else PlcpSource(plcp)
    emitted = []
    stats = ScanStats()
    scanner = _PeakScanner(src, theta, lambda d, l: emitted.append((d, l)),
                           stats)
    scanner.L = [[p, v, p + v] for p, v in L]
    scanner.batch_factors = [(dst, ell)]
    seg = scanner._apply_rule_d(scanner.L, dst, ell)
    scanner.L = []
    scanner._resolve(seg)
    return emitted, seg


def pipeline_compress(t: Text, b: IndexBundle, theta: int,
                      budget=None, stats: Optional[ScanStats] = None
                      ) -> Factorization:
    """Full compression pipeline: scan PLCP for pairs, sort by destination,
    merge with phi for sources, substitute into the text."""
    budget = budget or streamkit.MemoryBudget.unbounded()
    n = t.n

    # Step 1: factor pairs in discovery order, PLCP scanned once
    plcp_stream = streamkit.stream_from_array(b.plcp, budget)
    pairs = stream_factorize(PlcpSource(plcp_stream), theta, budget,
                             stats=stats)

    # Step 2: text order
    pairs_sorted = streamkit.sort_stream(pairs, budget, key=(0,))
    pairs.close()
    plcp_stream.close()

    # Step 3: simultaneous scan with phi -> (dst, src, len) triples
    phi_stream = streamkit.stream_from_array(b.phi, budget)
    triples = streamkit.TupleStream(3, budget)
    pair_chunks = pairs_sorted.chunk_iter(chunk_items=1 << 16)
    pending = np.empty((0, 2), dtype=np.int64)
    base = 1  # text position of the next phi chunk start
    for phi_chunk in phi_stream.chunk_iter(chunk_items=1 << 18):
        hi = base + len(phi_chunk)
        while True:
            take = pending[pending[:, 0] < hi] if len(pending) else pending
            if len(take):
                srcs = phi_chunk[(take[:, 0] - base)]
                if srcs.ndim > 1:
                    srcs = srcs[:, 0]
                out = np.column_stack((take[:, 0], srcs, take[:, 1]))
                triples.extend_array(out)
                pending = pending[len(take):]
            if len(pending):
                break
            nxt = next(pair_chunks, None)
            if nxt is None:
                break
            pending = nxt
        base = hi
    if len(pending):
        raise streamkit.StreamError("factor pair beyond text end")
    triples.finalize()
    pairs_sorted.close()
    phi_stream.close()

    # Step 4: simultaneous scan with T, coalescing literal gaps
    tiles = []
    pos = 1
    data = t.data
    for dst, src, ln in triples:
        if dst > pos:
            tiles.append((pos, dst - pos, None, data[pos - 1: dst - 1]))
        tiles.append((dst, ln, src, None))
        pos = dst + ln
    if pos <= n:
        tiles.append((pos, n - pos + 1, None, data[pos - 1: n]))
    triples.close()

    discovery = None
    return coalesce_literals(n, theta, tiles, discovery_refs=discovery).validate()


def lower_bound_text(m: int) -> Text:
    """Nested-alphabet text of length m*m (plus sentinel) on which the scan
    accumulates exactly m-2 interesting peaks before the first batch."""
    if not 2 <= m <= 255:
        raise ValueError("m must be in [2, 255]")
    f = bytes([m])
    parts = [f]
    for i in range(m - 1, 0, -1):
        f = bytes([i]) + f + bytes([i])
        parts.append(f)
    from .text_index import make_text
    return make_text(b"".join(parts))
