"""Reference implementation of the greedy plcpcomp scheme and the shared
factorization types.

The oracle keeps a rewritable PLCP copy and a max-heap of candidate
positions, repeatedly factoring the leftmost position of maximal PLCP value.
It is deliberately O(n) in RAM: it exists to validate the streaming
factorizer and to exercise the decompressors, not to scale.
"""

import heapq
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .text_index import IndexBundle, Text

MIN_THETA = 2


class CodingError(ValueError):
    """A factorization violates tiling, bounds or cycle-freeness."""


@dataclass(frozen=True)
class Threshold:
    theta: int = MIN_THETA

    def __post_init__(self):
        if self.theta < MIN_THETA:
            raise ValueError("theta must be >= %d" % MIN_THETA)


@dataclass(frozen=True)
class Factor:
    """One tile of the text: a literal byte run or a reference (src, len)."""

    dst: int                      # 1-based start
    length: int
    src: Optional[int] = None     # None for literals
    literal: Optional[bytes] = None

    @property
    def is_reference(self):
        return self.src is not None

    @property
    def end(self):
        """1-based position one past the factor."""
        return self.dst + self.length


@dataclass
class Factorization:
    """Factors in text order, tiling [1..n]."""

    n: int
    theta: int
    factors: List[Factor]
    # references in the order the producing algorithm discovered them
    discovery_refs: List[Tuple[int, int, int]] = field(default_factory=list)

    def references(self):
        return [f for f in self.factors if f.is_reference]

    def reference_triples(self):
        """(dst, src, length) per reference, in text order."""
        return [(f.dst, f.src, f.length) for f in self.references()]

    def validate(self):
        pos = 1
        for f in self.factors:
            if f.dst != pos or f.length < 1:
                raise CodingError("factors do not tile the text at %d" % pos)
            if f.is_reference:
                if not (1 <= f.src and f.src + f.length - 1 <= self.n):
                    raise CodingError("reference out of bounds at %d" % f.dst)
                if f.src == f.dst:
                    raise CodingError("self-reference at %d" % f.dst)
            elif f.literal is None or len(f.literal) != f.length:
                raise CodingError("bad literal at %d" % f.dst)
            pos = f.end
        if pos != self.n + 1:
            raise CodingError("factor lengths sum to %d, expected %d"
                              % (pos - 1, self.n))
        return self


def coalesce_literals(n, theta, tiles, discovery_refs=None):
    """Build a Factorization from (dst, length, src, literal_bytes) tiles,
    merging adjacent literal tiles."""
    out = []
    for dst, length, src, lit in tiles:
        if src is None and out and not out[-1].is_reference:
            prev = out[-1]
            out[-1] = Factor(prev.dst, prev.length + length,
                             literal=prev.literal + lit)
        else:
            out.append(Factor(dst, length, src=src, literal=lit))
    return Factorization(n, theta, out, discovery_refs=discovery_refs or [])


def scheme_factorize(t: Text, b: IndexBundle, theta: Threshold) -> Factorization:
    """Greedy plcpcomp factorization by global PLCP maxima.

    Repeatedly factor the leftmost position dst of maximal PLCP value as
    (src=phi[dst], len=PLCP[dst]), decrease overlapped values to the left
    and zero the factored range, until the maximum drops below theta.
    """
    n = t.n
    th = theta.theta
    plcp = b.plcp.astype(np.int64).copy()
    phi = b.phi
    heap = [(-int(plcp[i]), i + 1) for i in range(n) if plcp[i] >= th]
    heapq.heapify(heap)
    factored = np.zeros(n + 2, dtype=bool)
    refs = []

    while heap:
        negv, dst = heapq.heappop(heap)
        v = -negv
        if plcp[dst - 1] != v or v < th:
            continue  # stale entry
        refs.append((dst, int(phi[dst - 1]), v))
        # Rule (D): clip values overlapping the new factor from the left
        lo = max(1, dst - v)
        for j in range(lo, dst):
            cap = dst - j
            if plcp[j - 1] > cap:
                plcp[j - 1] = cap
                if cap >= th:
                    heapq.heappush(heap, (-cap, j))
        # Rule (R): remove the factored positions
        plcp[dst - 1: dst - 1 + v] = 0
        factored[dst: dst + v] = True

    tiles = []
    data = t.data
    covered = {dst: (src, ln) for dst, src, ln in refs}
    pos = 1
    while pos <= n:
        if pos in covered:
            src, ln = covered[pos]
            tiles.append((pos, ln, src, None))
            pos += ln
        else:
            tiles.append((pos, 1, None, data[pos - 1: pos]))
            pos += 1
    return coalesce_literals(n, th, tiles, discovery_refs=refs).validate()


def char_source_map(f: Factorization) -> np.ndarray:
    """0-based array mapping each referenced character position to its
    source position; literal positions map to themselves."""
    src_map = np.arange(f.n, dtype=np.int64)
    for fac in f.factors:
        if fac.is_reference:
            d0 = fac.dst - 1
            s0 = fac.src - 1
            if s0 < 0 or s0 + fac.length > f.n:
                raise CodingError("reference out of bounds at %d" % fac.dst)
            src_map[d0: d0 + fac.length] = np.arange(s0, s0 + fac.length)
    return src_map


def verify_cycle_free(f: Factorization) -> bool:
    """True iff the per-character dependency relation has no cycle.

    Iterative resolution: a referenced position resolves once its source is
    resolved; a full sweep without progress while positions remain open
    means a cycle.
    """
    f.validate()
    src_map = char_source_map(f)
    resolved = np.zeros(f.n, dtype=bool)
    for fac in f.factors:
        if not fac.is_reference:
            resolved[fac.dst - 1: fac.end - 1] = True
    open_pos = np.flatnonzero(~resolved)
    while open_pos.size:
        ready = resolved[src_map[open_pos]]
        if not ready.any():
            return False
        resolved[open_pos[ready]] = True
        open_pos = open_pos[~ready]
    return True
