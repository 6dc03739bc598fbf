"""Suffix array, inverse, phi and PLCP construction for sentinel-terminated
byte texts, plus the BWT run count.

Positions are 1-based everywhere: ``sa[i]`` (numpy index i, 0-based) is the
1-based start of the (i+1)-th smallest suffix.  The sentinel is byte 0,
appended by :func:`make_text` and required to be unique.
"""

import struct
from dataclasses import dataclass

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a hard dep in practice
    njit = None

SENTINEL = 0
INDEX_MAGIC = b"PLCPIDX1"


class TextError(ValueError):
    """Input violates the text invariants (sentinel placement)."""


@dataclass(frozen=True)
class Text:
    """Byte sequence whose final byte is the unique sentinel 0."""

    data: bytes

    def __post_init__(self):
        if len(self.data) < 1 or self.data[-1] != SENTINEL:
            raise TextError("text must end with the sentinel byte 0")
        if SENTINEL in self.data[:-1]:
            raise TextError("sentinel byte 0 must be unique")

    @property
    def n(self):
        return len(self.data)

    def char(self, pos):
        """1-based character access."""
        return self.data[pos - 1]


def make_text(raw: bytes) -> Text:
    """Wrap raw bytes as a Text, appending the sentinel if missing."""
    if raw.endswith(b"\x00"):
        return Text(raw)
    return Text(raw + b"\x00")


@dataclass
class IndexBundle:
    """sa, isa, phi and plcp arrays (1-based values) plus the BWT run count."""

    sa: np.ndarray
    isa: np.ndarray
    phi: np.ndarray
    plcp: np.ndarray
    bwt_runs: int

    @property
    def n(self):
        return len(self.sa)


def _suffix_array_doubling(data: np.ndarray) -> np.ndarray:
    """Prefix-doubling suffix array (0-based result) via stable radix sorts.

    O(n log n) argsort rounds; stops as soon as all ranks are distinct,
    which for texts without very long repeats happens early.
    """
    n = len(data)
    # int32 ranks keep the working set tolerable for ~64 MiB texts
    rank = data.astype(np.int32)
    k = 1
    tmp = np.empty(n, dtype=np.int32)
    while True:
        key2 = np.full(n, -1, dtype=np.int32)
        key2[: n - k] = rank[k:]
        order = np.lexsort((key2, rank))
        r1 = rank[order]
        r2 = key2[order]
        del key2
        changed = np.empty(n, dtype=np.int32)
        changed[0] = 0
        changed[1:] = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        del r1, r2
        np.cumsum(changed, out=changed)
        tmp[order] = changed
        del changed
        rank, tmp = tmp, rank
        if rank[order[-1]] == n - 1:
            break
        del order
        k *= 2
    return order


def _plcp_from_phi_py(data, phi0):
    n = len(data)
    plcp = np.zeros(n, dtype=np.int32)
    l = 0
    for i in range(n):
        j = phi0[i]
        while i + l < n and j + l < n and data[i + l] == data[j + l]:
            l += 1
        plcp[i] = l
        if l > 0:
            l -= 1
    return plcp


if njit is not None:
    _plcp_from_phi = njit(cache=True)(_plcp_from_phi_py)
else:  # pragma: no cover
    _plcp_from_phi = _plcp_from_phi_py


def build_index(t: Text) -> IndexBundle:
    """Build sa/isa/phi/plcp and the BWT run count for ``t``.

    phi follows the cyclic convention: the position holding the smallest
    suffix gets phi = sa[n] (the lexicographically largest suffix), so phi
    is a permutation and plcp at that position is 0 by sentinel uniqueness.
    """
    data = np.frombuffer(t.data, dtype=np.uint8)
    n = len(data)
    sa0 = _suffix_array_doubling(data).astype(np.int32)
    isa0 = np.empty(n, dtype=np.int32)
    isa0[sa0] = np.arange(n, dtype=np.int32)
    phi0 = np.empty(n, dtype=np.int32)
    phi0[sa0[0]] = sa0[n - 1]
    if n > 1:
        phi0[sa0[1:]] = sa0[:-1]
    plcp = _plcp_from_phi(data, phi0)

    # BWT[i] = T[sa[i]-1] with wraparound for the first suffix position
    prev = sa0 - 1
    prev[prev < 0] = n - 1
    bwt = data[prev]
    bwt_runs = int(1 + np.count_nonzero(bwt[1:] != bwt[:-1])) if n > 0 else 0

    return IndexBundle(
        sa=sa0 + 1,
        isa=isa0 + 1,
        phi=phi0 + 1,
        plcp=plcp,
        bwt_runs=bwt_runs,
    )


def lcp_from_plcp(b: IndexBundle) -> np.ndarray:
    """LCP in suffix-array order: LCP[i] = plcp[sa[i]]."""
    return b.plcp[b.sa - 1]


def dump_index(b: IndexBundle, path):
    """Write the bundle as magic + n + bwt_runs + raw LE 64-bit arrays
    (sa, isa, phi, plcp)."""
    with open(path, "wb") as f:
        f.write(INDEX_MAGIC)
        f.write(struct.pack("<QQ", b.n, b.bwt_runs))
        for arr in (b.sa, b.isa, b.phi, b.plcp):
            f.write(arr.astype("<i8", copy=False).tobytes())


def load_index(path) -> IndexBundle:
    with open(path, "rb") as f:
        magic = f.read(8)
        if magic != INDEX_MAGIC:
            raise TextError("bad index magic")
        n, bwt_runs = struct.unpack("<QQ", f.read(16))
        arrays = []
        for _ in range(4):
            raw = f.read(8 * n)
            if len(raw) != 8 * n:
                raise TextError("truncated index file")
            arrays.append(np.frombuffer(raw, dtype="<i8").astype(np.int64))
    return IndexBundle(sa=arrays[0], isa=arrays[1], phi=arrays[2],
                       plcp=arrays[3], bwt_runs=bwt_runs)
