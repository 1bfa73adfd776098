"""Sums of two arithmetic progressions as hyperedges on [N].

A hyperedge template is the sumset
``E = {j1*d1 + j2*d2 : 0 <= j1 < l1, 0 <= j2 < l2}`` (both progressions
start at 0); translates ``a + E`` intersected with ``[1, N]`` are the
hyperedges of the full hypergraph.  Colorings are +-1 on [1, N] and 0
elsewhere, so the color value of a translate is a plain finite sum.

``enumerate_canonical_edges`` lists every distinct nonempty hyperedge at
small N.  It does not iterate the naive parameter space (which is
astronomically redundant); instead it enumerates canonical representatives:

* plain progression windows with both endpoints visible inside [1, N], and
* genuine two-progression windows (both lengths >= 2, distinct differences)
  in which all four boundary rows/columns of the lattice rectangle
  contribute a visible element.

Any (d1, l1, d2, l2, offset) window reduces to one of these forms by
repeatedly dropping an invisible boundary row or column (which never
changes the visible set) and by collapsing equal differences into a single
progression, so the canonical sweep reaches every distinct hyperedge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .numtheory import gcd

ENUMERATION_CAP = 64


class CapExceeded(ValueError):
    """Raised when an exhaustive operation is asked to run beyond its cap."""


@dataclass(frozen=True)
class APSpec:
    """Arithmetic progression {start + j*diff : 0 <= j < length}."""

    start: int
    diff: int
    length: int

    def __post_init__(self) -> None:
        if self.diff < 1 or self.length < 1:
            raise ValueError("diff and length must be positive")

    def elements(self) -> list[int]:
        return [self.start + j * self.diff for j in range(self.length)]


@dataclass(frozen=True)
class SumEdge:
    """Sumset of two zero-based progressions, keyed by (d1, l1, d2, l2)."""

    d1: int
    l1: int
    d2: int
    l2: int

    def __post_init__(self) -> None:
        if min(self.d1, self.l1, self.d2, self.l2) < 1:
            raise ValueError("differences and lengths must be positive")

    @property
    def span(self) -> int:
        """Largest element; the edge lives in [0, span]."""
        return (self.l1 - 1) * self.d1 + (self.l2 - 1) * self.d2

    def to_json(self) -> str:
        return json.dumps({"d1": self.d1, "l1": self.l1, "d2": self.d2, "l2": self.l2})

    @classmethod
    def from_json(cls, text: str) -> "SumEdge":
        rec = json.loads(text)
        return cls(d1=rec["d1"], l1=rec["l1"], d2=rec["d2"], l2=rec["l2"])


@dataclass(frozen=True)
class CardinalityResult:
    value: int
    collision_free: bool


def edge_elements_array(e: SumEdge) -> np.ndarray:
    """Sorted distinct elements of the sumset as an int64 array."""
    j1 = np.arange(e.l1, dtype=np.int64) * e.d1
    j2 = np.arange(e.l2, dtype=np.int64) * e.d2
    return np.unique(np.add.outer(j1, j2))


def edge_elements(e: SumEdge) -> list[int]:
    """Sorted distinct elements of the sumset."""
    return edge_elements_array(e).tolist()


def edge_cardinality(e: SumEdge) -> CardinalityResult:
    """Number of distinct elements, plus whether the grid maps injectively.

    If one progression is shorter than the other difference divided by the
    gcd of the differences, no two lattice points collide and the size is
    exactly l1*l2; otherwise the size is computed by enumeration.
    """
    g = gcd(e.d1, e.d2)
    if e.l1 * g <= e.d2 or e.l2 * g <= e.d1:
        return CardinalityResult(value=e.l1 * e.l2, collision_free=True)
    value = int(edge_elements_array(e).size)
    return CardinalityResult(value=value, collision_free=value == e.l1 * e.l2)


class Coloring:
    """A +-1 coloring of [1, N], implicitly 0 outside that range."""

    __slots__ = ("n", "values")

    def __init__(self, n: int, values: Iterable[int]):
        if n < 1:
            raise ValueError("n must be >= 1")
        arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                         dtype=np.int8)
        if arr.shape != (n,):
            raise ValueError(f"expected {n} color values, got shape {arr.shape}")
        if not np.all(np.abs(arr) == 1):
            raise ValueError("color values must be +1 or -1")
        self.n = n
        self.values = arr

    def __call__(self, z: int) -> int:
        if 1 <= z <= self.n:
            return int(self.values[z - 1])
        return 0

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Coloring) and self.n == other.n
                and bool(np.array_equal(self.values, other.values)))

    def __repr__(self) -> str:
        return f"Coloring(n={self.n})"

    @classmethod
    def all_plus(cls, n: int) -> "Coloring":
        return cls(n, np.ones(n, dtype=np.int8))

    @classmethod
    def alternating(cls, n: int) -> "Coloring":
        """+1 on odd vertices, -1 on even vertices."""
        v = np.where(np.arange(1, n + 1) % 2 == 1, 1, -1).astype(np.int8)
        return cls(n, v)

    @classmethod
    def block(cls, n: int) -> "Coloring":
        """+1 on the first half, -1 on the second half."""
        v = np.ones(n, dtype=np.int8)
        v[n // 2:] = -1
        return cls(n, v)

    @classmethod
    def random(cls, n: int, seed: int) -> "Coloring":
        rng = np.random.default_rng(seed)
        v = rng.choice(np.array([-1, 1], dtype=np.int8), size=n)
        return cls(n, v)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "values": self.values.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "Coloring":
        rec = json.loads(text)
        return cls(rec["n"], rec["values"])


@dataclass(frozen=True)
class TranslatedEdgeValue:
    """Color value of one translate: value == sum of chi over (offset + E)."""

    edge: SumEdge
    offset: int
    value: int


def color_value(chi: Coloring, e: SumEdge, a: int) -> int:
    """Sum of chi over the translate a + E, with chi read as 0 off [1, N]."""
    z = edge_elements_array(e) + a
    inside = z[(z >= 1) & (z <= chi.n)]
    if inside.size == 0:
        return 0
    return int(chi.values[inside - 1].sum())


def translate_values(chi: Coloring, e: SumEdge) -> np.ndarray:
    """Color values of all translates a + E for a in [-span, N], as int64.

    Index i corresponds to offset a = i - span.  Offsets outside this range
    give empty intersections, hence value 0.
    """
    span = e.span
    els = edge_elements_array(e)
    # ext[span + z] = chi(z), zero elsewhere
    ext = np.zeros(2 * span + chi.n + 1, dtype=np.int64)
    ext[span + 1: span + 1 + chi.n] = chi.values
    out = np.zeros(span + chi.n + 1, dtype=np.int64)
    for x in els.tolist():
        # out[i] = value at offset a = i - span; reads ext[span + a + x]
        out += ext[x: x + span + chi.n + 1]
    return out


# ---------------------------------------------------------------------------
# canonical enumeration of all distinct hyperedges at small N
# ---------------------------------------------------------------------------


def _emit_chunks(n: int):
    """Collector for packed bitmask rows with incremental dedup."""
    row_words = (n + 63) // 64
    row_bytes = 8 * row_words
    state = {"buf": [], "rows": 0, "chunks": []}
    limit = 1 << 21

    def unique(arr: np.ndarray) -> np.ndarray:
        if row_words == 1:
            return np.unique(arr.reshape(-1, 8).view(np.uint64).ravel())
        void = np.ascontiguousarray(arr.reshape(-1, row_bytes)).view(
            np.dtype((np.void, row_bytes)))
        return np.unique(void.ravel())

    def emit(packed: np.ndarray) -> None:
        if packed.shape[1] < row_bytes:
            packed = np.pad(packed, ((0, 0), (0, row_bytes - packed.shape[1])))
        state["buf"].append(packed)
        state["rows"] += len(packed)
        if state["rows"] >= limit:
            flush()

    def flush() -> None:
        if state["buf"]:
            state["chunks"].append(unique(np.concatenate(state["buf"], axis=0)))
            state["buf"] = []
            state["rows"] = 0

    def finish() -> np.ndarray:
        flush()
        if not state["chunks"]:
            return np.zeros((0, row_bytes), dtype=np.uint8)
        merged = state["chunks"][0]
        for extra in state["chunks"][1:]:
            merged = np.unique(np.concatenate([merged, extra]))
        merged = np.unique(merged)
        return merged.view(np.uint8).reshape(-1, row_bytes)

    return emit, finish


def canonical_edge_masks(n: int, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """All distinct nonempty hyperedges of [1, n] as packed little-endian
    bitmask rows (bit z-1 set iff vertex z in the edge), lexicographically
    sorted as unsigned words.  Deterministic for a given n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise CapExceeded(
            f"canonical enumeration at n={n} exceeds cap={cap}; the distinct "
            "edge count grows like n**4.3 and is out of reach well above 64")
    emit, finish = _emit_chunks(n)
    pad = n - 1

    # Plain progression windows: both endpoints inside [1, n].
    for d in range(1, n + 1):
        lmax = (n - 1) // d + 1
        for length in range(1, lmax + 1):
            s = (length - 1) * d
            pres = np.zeros(s + 1 + 2 * pad, dtype=bool)
            pres[pad + np.arange(length) * d] = True
            windows = sliding_window_view(pres, n)
            starts = pad + np.arange(1 - (n - s), 1)
            emit(np.packbits(windows[starts], axis=1, bitorder="little"))

    # Two-progression windows, d2 < d1, both lengths >= 2, all four boundary
    # rows/columns visible.  Equal differences collapse to plain progressions.
    for d1 in range(2, n + 1):
        for d2 in range(1, d1):
            for l2 in range(2, n + 1):
                s2 = (l2 - 1) * d2
                # spans must differ by at most n-1 for all four boundaries
                l1_lo = max(2, (s2 - (n - 1) + d1 - 1) // d1 + 1)
                l1_hi = min(n, (s2 + n - 1) // d1 + 1)
                if l1_lo > l1_hi:
                    continue
                s1_hi = (l1_hi - 1) * d1
                col = np.arange(l2) * d2
                pres = np.zeros(s1_hi + s2 + 1 + 2 * pad, dtype=np.int16)
                init = (np.arange(l1_lo)[:, None] * d1 + col[None, :]).ravel()
                np.add.at(pres, pad + init, 1)
                for l1 in range(l1_lo, l1_hi + 1):
                    s1 = (l1 - 1) * d1
                    if l1 > l1_lo:
                        np.add.at(pres, pad + s1 + col, 1)
                    mn, mx = (s1, s2) if s1 <= s2 else (s2, s1)
                    region = pres[pad + mx - n + 1: pad + mn + n] > 0
                    windows = sliding_window_view(region, n)
                    emit(np.packbits(windows, axis=1, bitorder="little"))
    return finish()


def masks_to_sets(masks: np.ndarray, n: int) -> list[frozenset[int]]:
    """Decode packed bitmask rows into vertex sets."""
    out = []
    for row in masks:
        bits = np.unpackbits(row, bitorder="little")[:n]
        out.append(frozenset((np.nonzero(bits)[0] + 1).tolist()))
    return out


def enumerate_canonical_edges(n: int, cap: int = ENUMERATION_CAP) -> list[frozenset[int]]:
    """All distinct nonempty hyperedges of [1, n], deduplicated by set
    equality, in a deterministic order."""
    return masks_to_sets(canonical_edge_masks(n, cap=cap), n)
