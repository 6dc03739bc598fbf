"""Budgeted streaming primitives: spill-to-disk tuple streams, a k-way merge
sorter, and a spilling priority queue.

All record-oriented I/O in the toolkit goes through this module so that the
number of logical block transfers is observable and deterministic.  Records
are fixed-width little-endian int64 tuples stored in numpy chunks; a stream
spills its chunks to a temporary file once the in-core byte count exceeds its
share of the memory budget.
"""

import heapq
import os
import tempfile

import numpy as np

MIN_BLOCK_SIZE = 4096

_ITEM_DTYPE = np.int64
_ITEM_BYTES = 8


class StreamError(Exception):
    pass


class BudgetError(StreamError):
    """Configuration violates the memory budget invariants."""


class IoStats:
    """Logical transfer counters. Blocks are counted in units of block_size
    bytes, independent of what the OS actually does."""

    __slots__ = ("items_read", "items_written", "blocks_read", "blocks_written",
                 "spill_events")

    def __init__(self):
        self.items_read = 0
        self.items_written = 0
        self.blocks_read = 0
        self.blocks_written = 0
        self.spill_events = 0

    def merge(self, other):
        self.items_read += other.items_read
        self.items_written += other.items_written
        self.blocks_read += other.blocks_read
        self.blocks_written += other.blocks_written
        self.spill_events += other.spill_events

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__slots__}

    def __repr__(self):
        return "IoStats(%s)" % ", ".join(
            "%s=%d" % (k, getattr(self, k)) for k in self.__slots__)


class MemoryBudget:
    """In-core byte allowance, spill directory and transfer block size.

    bytes_in_core must be at least 4 blocks so the sorter always has a
    nontrivial merge fan-in.  ``unbounded()`` gives a budget that never
    spills, used as the oracle configuration in tests.
    """

    def __init__(self, bytes_in_core, tmp_dir=None, block_size=65536):
        if block_size < MIN_BLOCK_SIZE:
            raise BudgetError("block_size must be >= %d" % MIN_BLOCK_SIZE)
        if bytes_in_core < 4 * block_size:
            raise BudgetError("bytes_in_core must be >= 4 * block_size")
        self.bytes_in_core = int(bytes_in_core)
        self.block_size = int(block_size)
        self.tmp_dir = tmp_dir or os.environ.get("PLCPZ_TMP") or tempfile.gettempdir()
        self.stats = IoStats()
        self._token = "plcpz-%d" % os.getpid()
        self._seq = 0

    @classmethod
    def unbounded(cls, tmp_dir=None):
        return cls(1 << 62, tmp_dir=tmp_dir)

    @property
    def block_items(self):
        return max(1, self.block_size // _ITEM_BYTES)

    def spill_path(self):
        self._seq += 1
        return os.path.join(self.tmp_dir, "%s-%06d.spill" % (self._token, self._seq))

    def merge_fan_in(self):
        # one block per input run plus one output block
        return max(2, self.bytes_in_core // self.block_size - 1)


class TupleStream:
    """Append-only sequence of fixed-arity int64 tuples.

    Lives in core until the budget share is exceeded, then spills to a raw
    file of little-endian records.  After ``finalize()`` the stream is
    read-only and supports repeated sequential scans plus positional reads
    (``read_at``), each accounted in io_stats.
    """

    def __init__(self, arity, budget, share=0.25):
        if arity < 1:
            raise StreamError("arity must be positive")
        self.arity = arity
        self.budget = budget
        self.io_stats = IoStats()
        self._limit_items = max(
            budget.block_items,
            int(budget.bytes_in_core * share) // (arity * _ITEM_BYTES))
        self._chunks = []
        self._pending = []
        self._core_items = 0
        self._file = None
        self._path = None
        self._file_items = 0
        self._finalized = False
        self.length = 0

    # -- writing ---------------------------------------------------------

    def append(self, item):
        self._pending.append(item)
        self.length += 1
        if len(self._pending) >= self.budget.block_items:
            self._flush_pending()
            self._maybe_spill()

    def extend_array(self, arr):
        """Bulk append from an (m, arity) or flat int array."""
        arr = np.ascontiguousarray(arr, dtype=_ITEM_DTYPE).reshape(-1, self.arity)
        if len(arr) == 0:
            return
        self._flush_pending()
        self._chunks.append(arr)
        self._core_items += len(arr)
        self.length += len(arr)
        self._maybe_spill()

    def _flush_pending(self):
        if self._pending:
            arr = np.array(self._pending, dtype=_ITEM_DTYPE).reshape(-1, self.arity)
            self._chunks.append(arr)
            self._core_items += len(arr)
            self._pending = []

    def _maybe_spill(self):
        if self._core_items > self._limit_items:
            self._spill()

    def _spill(self):
        if self._file is None:
            self._path = self.budget.spill_path()
            self._file = open(self._path, "w+b")
            self.io_stats.spill_events += 1
            self.budget.stats.spill_events += 1
        for chunk in self._chunks:
            self._file.write(chunk.astype("<i8", copy=False).tobytes())
            self._count_blocks_written(len(chunk))
        self._file_items += self._core_items
        self._chunks = []
        self._core_items = 0

    def finalize(self):
        if not self._finalized:
            self._flush_pending()
            if self._file is not None and self._chunks:
                self._spill()
            if self._file is not None:
                self._file.flush()
            self._finalized = True
        return self

    # -- reading ---------------------------------------------------------

    def _require_finalized(self):
        if not self._finalized:
            raise StreamError("stream must be finalized before reading")

    def chunk_iter(self, chunk_items=None):
        """Yield numpy (m, arity) chunks in stream order."""
        self._require_finalized()
        chunk_items = chunk_items or self.budget.block_items
        if self._file is not None:
            row_bytes = self.arity * _ITEM_BYTES
            pos = 0
            while pos < self._file_items:
                take = min(chunk_items, self._file_items - pos)
                self._file.seek(pos * row_bytes)
                raw = self._file.read(take * row_bytes)
                arr = np.frombuffer(raw, dtype="<i8").astype(
                    _ITEM_DTYPE, copy=False).reshape(-1, self.arity)
                self._count_blocks_read(len(arr))
                pos += take
                yield arr
        for chunk in self._chunks:
            self.io_stats.items_read += len(chunk)
            yield chunk

    def __iter__(self):
        for chunk in self.chunk_iter():
            if self.arity == 1:
                yield from chunk[:, 0].tolist()
            else:
                yield from map(tuple, chunk.tolist())

    def __len__(self):
        return self.length

    def read_at(self, index):
        """Positional read of one record (block-granular I/O accounting)."""
        self._require_finalized()
        if not 0 <= index < self.length:
            raise IndexError(index)
        if index < self._file_items:
            row_bytes = self.arity * _ITEM_BYTES
            self._file.seek(index * row_bytes)
            raw = self._file.read(row_bytes)
            self.io_stats.blocks_read += 1
            self.io_stats.items_read += 1
            row = np.frombuffer(raw, dtype="<i8")
        else:
            offset = index - self._file_items
            for chunk in self._chunks:
                if offset < len(chunk):
                    row = chunk[offset]
                    break
                offset -= len(chunk)
            self.io_stats.items_read += 1
        if self.arity == 1:
            return int(row[0])
        return tuple(int(v) for v in row)

    def to_array(self):
        """Materialize as one numpy array (tests and desk-scale helpers)."""
        parts = list(self.chunk_iter(chunk_items=1 << 20))
        if not parts:
            return np.empty((0, self.arity), dtype=_ITEM_DTYPE)
        return np.concatenate(parts)

    # -- accounting ------------------------------------------------------

    def _count_blocks_written(self, items):
        self.io_stats.items_written += items
        nblocks = -(-items * self.arity * _ITEM_BYTES // self.budget.block_size)
        self.io_stats.blocks_written += nblocks
        self.budget.stats.items_written += items
        self.budget.stats.blocks_written += nblocks

    def _count_blocks_read(self, items):
        self.io_stats.items_read += items
        nblocks = -(-items * self.arity * _ITEM_BYTES // self.budget.block_size)
        self.io_stats.blocks_read += nblocks
        self.budget.stats.items_read += items
        self.budget.stats.blocks_read += nblocks

    def close(self):
        self._chunks = []
        self._pending = []
        if self._file is not None:
            self._file.close()
            self._file = None
            try:
                os.remove(self._path)
            except OSError:
                pass

    def __del__(self):
        try:
            self.close()
        except Exception:
            pass


def stream_from_array(arr, budget, share=0.25):
    """Wrap a numpy array (1-D or 2-D) as a finalized TupleStream."""
    arr = np.asarray(arr, dtype=_ITEM_DTYPE)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    s = TupleStream(arr.shape[1], budget, share=share)
    step = max(budget.block_items, 1 << 16)
    for i in range(0, len(arr), step):
        s.extend_array(arr[i:i + step])
    return s.finalize()


def _sort_chunk(arr, key):
    """Stable sort of a record chunk by the given field order."""
    if len(arr) <= 1:
        return arr
    cols = key if key is not None else range(arr.shape[1])
    keys = tuple(arr[:, c] for c in reversed(list(cols)))
    order = np.lexsort(keys)
    return arr[order]


def sort_stream(stream, budget, key=None):
    """Budgeted stable merge sort of a finalized TupleStream.

    ``key`` is a tuple of field indices (default: all fields, left to
    right).  Runs of at most ``bytes_in_core`` bytes are sorted in core;
    spilled runs are combined with a k-way block merge whose fan-in is
    derived from the budget.
    """
    stream.finalize()
    arity = stream.arity
    row_bytes = arity * _ITEM_BYTES
    run_items = max(budget.block_items, budget.bytes_in_core // row_bytes)
    if row_bytes > budget.bytes_in_core:
        raise BudgetError("item width exceeds budget")

    runs = []
    buf = []
    buf_items = 0
    for chunk in stream.chunk_iter(chunk_items=min(run_items, 1 << 20)):
        buf.append(chunk)
        buf_items += len(chunk)
        while buf_items >= run_items:
            whole = np.concatenate(buf)
            runs.append(_sort_chunk(whole[:run_items], key))
            rest = whole[run_items:]
            buf = [rest] if len(rest) else []
            buf_items = len(rest)
    if buf_items:
        runs.append(_sort_chunk(np.concatenate(buf), key))

    out = TupleStream(arity, budget)
    if len(runs) <= 1:
        if runs:
            out.extend_array(runs[0])
        return out.finalize()

    # spill every run; merge in passes bounded by the fan-in
    run_streams = []
    for r in runs:
        rs = TupleStream(arity, budget, share=0.0)
        rs.extend_array(r)
        run_streams.append(rs.finalize())
    del runs

    fan_in = budget.merge_fan_in()
    while True:
        group = run_streams[:fan_in]
        rest = run_streams[fan_in:]
        if not rest:
            _merge_runs(group, out, budget, key)
            for g in group:
                g.close()
            break
        merged = TupleStream(arity, budget, share=0.0)
        _merge_runs(group, merged, budget, key)
        for g in group:
            g.close()
        # merged holds the earliest input runs; keep it in front so the
        # run-index tie break stays consistent with input order
        run_streams = [merged.finalize()] + rest
    return out.finalize()


def _merge_runs(run_streams, out, budget, key):
    """Block-wise stable k-way merge of sorted runs into ``out``.

    Emits only records whose key is strictly below the smallest key that
    may still be unloaded in some run; a tie crossing a block boundary is
    pulled into the buffer first.  Equal keys then always leave one block
    together, sorted by run index, which preserves input order.  Buffers
    can grow to the widest equal-key group.
    """
    arity = run_streams[0].arity
    cols = list(key) if key is not None else list(range(arity))
    iters = [rs.chunk_iter() for rs in run_streams]
    heads = []
    done = []  # iterator drained: heads[i] is the complete remainder
    for it in iters:
        chunk = next(it, None)
        heads.append(chunk)
        done.append(chunk is None)

    def fetch(idx):
        nxt = next(iters[idx], None)
        if nxt is None:
            done[idx] = True
        return nxt

    def tail_key(idx):
        return tuple(int(heads[idx][-1, c]) for c in cols)

    while True:
        for idx, h in enumerate(heads):
            if h is not None and len(h) == 0:
                heads[idx] = None if done[idx] else fetch(idx)
        live = [i for i, h in enumerate(heads) if h is not None and len(h)]
        if not live:
            break
        bound = None
        for idx in live:
            if not done[idx]:
                k = tail_key(idx)
                if bound is None or k < bound:
                    bound = k
        parts = []
        for idx in live:
            h = heads[idx]
            take = (_count_lt([h[:, c] for c in cols], bound)
                    if bound is not None else len(h))
            if take:
                parts.append((h[:take], np.full(take, idx, dtype=_ITEM_DTYPE)))
                heads[idx] = h[take:]
        if not parts:
            # every loaded row ties the bound: extend the runs holding it
            for idx in live:
                if not done[idx] and tail_key(idx) == bound:
                    nxt = fetch(idx)
                    if nxt is not None:
                        heads[idx] = np.concatenate([heads[idx], nxt])
            continue
        block = np.concatenate([p for p, _ in parts])
        tags = np.concatenate([t for _, t in parts])
        sort_keys = [tags] + [block[:, c] for c in reversed(cols)]
        order = np.lexsort(tuple(sort_keys))
        out.extend_array(block[order])


def _count_lt(key_cols, bound):
    """Number of leading rows whose key tuple is < bound, rows sorted by
    that key."""
    lo, hi = 0, len(key_cols[0])
    while lo < hi:
        mid = (lo + hi) // 2
        k = tuple(int(col[mid]) for col in key_cols)
        if k < bound:
            lo = mid + 1
        else:
            hi = mid
    return lo


def scan_zip(a, b, visitor, key_a=0, key_b=0):
    """Visit the items of two key-sorted streams in merged key order.

    ``visitor(source, item)`` is called once per item with source "a" or
    "b"; ties go to ``a`` first.  Raises on key regressions.
    """
    a.finalize()
    b.finalize()
    it_a = iter(a)
    it_b = iter(b)
    cur_a = next(it_a, None)
    cur_b = next(it_b, None)
    last_a = last_b = None

    def key_of(item, k):
        return item[k] if isinstance(item, tuple) else item

    while cur_a is not None or cur_b is not None:
        ka = key_of(cur_a, key_a) if cur_a is not None else None
        kb = key_of(cur_b, key_b) if cur_b is not None else None
        if kb is None or (ka is not None and ka <= kb):
            if last_a is not None and ka < last_a:
                raise StreamError("stream a is not sorted")
            last_a = ka
            visitor("a", cur_a)
            cur_a = next(it_a, None)
        else:
            if last_b is not None and kb < last_b:
                raise StreamError("stream b is not sorted")
            last_b = kb
            visitor("b", cur_b)
            cur_b = next(it_b, None)


class SpillingPriorityQueue:
    """Min-priority queue over int64 tuples, stable for equal keys.

    Keeps a binary heap in core; when the heap outgrows its budget share it
    is flushed into a sorted spill run, and ``pop`` merges the heap with the
    run heads.  ``key`` selects the ordering fields (default all).
    """

    def __init__(self, arity, budget, key=None, share=0.25):
        self.arity = arity
        self.budget = budget
        self.key = list(key) if key is not None else list(range(arity))
        self._heap = []
        self._seq = 0
        self._limit = max(
            1024, int(budget.bytes_in_core * share) // (arity * _ITEM_BYTES))
        self._runs = []  # list of (iterator, current head entry)
        self.size = 0
        self.io_stats = IoStats()

    def _entry(self, item):
        k = tuple(item[c] for c in self.key)
        self._seq += 1
        return (k, self._seq, item)

    def push(self, item):
        heapq.heappush(self._heap, self._entry(item))
        self.size += 1
        if len(self._heap) > self._limit:
            self._spill_heap()

    def _spill_heap(self):
        # record layout on disk: (item fields..., seq)
        entries = sorted(self._heap)
        run = TupleStream(self.arity + 1, self.budget, share=0.0)
        arr = np.empty((len(entries), self.arity + 1), dtype=_ITEM_DTYPE)
        for i, (k, seq, item) in enumerate(entries):
            arr[i, :self.arity] = item
            arr[i, self.arity] = seq
        run.extend_array(arr)
        run.finalize()
        self.io_stats.merge(run.io_stats)
        it = iter(run)
        head = next(it, None)
        if head is not None:
            self._runs.append([it, head, run])
        self._heap = []

    def _run_key(self, head):
        return (tuple(head[c] for c in self.key), head[self.arity])

    def pop(self):
        if self.size == 0:
            raise IndexError("pop from empty priority queue")
        best = None  # (key, seq, origin)
        if self._heap:
            k, seq, item = self._heap[0]
            best = (k, seq, "heap", item)
        best_run = None
        for run in self._runs:
            k, seq = self._run_key(run[1])
            cand = (k, seq, "run", run)
            if best is None or (k, seq) < (best[0], best[1]):
                best = cand
                best_run = run
        self.size -= 1
        if best[2] == "heap":
            return heapq.heappop(self._heap)[2]
        item = tuple(best_run[1][:self.arity])
        nxt = next(best_run[0], None)
        if nxt is None:
            best_run[2].close()
            self._runs.remove(best_run)
        else:
            best_run[1] = nxt
        return item

    def peek_key(self):
        if self.size == 0:
            return None
        best = None
        if self._heap:
            best = (self._heap[0][0], self._heap[0][1])
        for run in self._runs:
            k = self._run_key(run[1])
            if best is None or k < best:
                best = k
        return best[0]

    def __len__(self):
        return self.size
