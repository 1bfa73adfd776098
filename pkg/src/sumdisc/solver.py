"""Discrepancy computation: exact small-N search, heuristic upper bounds,
and the squared-imbalance averaging lower bound over the structured family.

The averaging bound evaluates
``S = sum over family edges E, offsets a of chi(a + E)**2`` exactly.  For
each edge, S_E collapses to a dot product between the autocorrelation of
the coloring and the difference profile of the edge (how often each gap u
occurs between two edge elements), so a whole-family evaluation is two
correlations and a dot product per coloring once the profiles are built.
S >= n**3 / 90000 holds for every coloring, and the offset maximizer
always exceeds sqrt(n)/1200 in absolute color value; both facts are
asserted on every call.
"""

from __future__ import annotations

import logging
import math
import weakref
from dataclasses import dataclass

import numpy as np

from .family import FamilyE0
from .hypergraph import (CapExceeded, Coloring, SumEdge, TranslatedEdgeValue,
                         canonical_edge_masks, edge_cardinality,
                         edge_elements_array, translate_values,
                         ENUMERATION_CAP)

log = logging.getLogger(__name__)

EXACT_CAP = 24


class FamilyMismatch(ValueError):
    """Coloring and family were built for different n."""


@dataclass(frozen=True)
class DiscReport:
    n: int
    method: str
    disc_value: int
    n_edges: int
    witness_coloring: list[int] | None = None
    witness_edge: tuple[int, ...] | None = None
    trials: int | None = None
    restarts: int | None = None
    seed: int | None = None
    envelope: float | None = None
    envelope_ok: bool | None = None

    def to_json_dict(self) -> dict:
        rec = {"n": self.n, "method": self.method, "disc": self.disc_value,
               "n_edges": self.n_edges}
        for name in ("trials", "restarts", "seed", "envelope", "envelope_ok"):
            val = getattr(self, name)
            if val is not None:
                rec[name] = val
        if self.witness_coloring is not None:
            rec["witness_coloring"] = self.witness_coloring
        if self.witness_edge is not None:
            rec["witness_edge"] = list(self.witness_edge)
        return rec


@dataclass(frozen=True)
class TwoNormBound:
    """Result of the averaging lower bound for one coloring."""

    n: int
    total: int
    n_edges: int
    derived_disc_lb: float
    witness: TranslatedEdgeValue

    @property
    def witness_edge(self) -> SumEdge:
        return self.witness.edge

    @property
    def witness_offset(self) -> int:
        return self.witness.offset

    @property
    def witness_value(self) -> int:
        return abs(self.witness.value)


def _edge_difference_profile(e: SumEdge) -> np.ndarray:
    """Occurrence counts of each nonnegative gap u between ordered element
    pairs (x, x+u) of the edge, dense over [0, span]."""
    card = edge_cardinality(e)
    if card.collision_free:
        j1 = np.arange(-(e.l1 - 1), e.l1, dtype=np.int64)
        j2 = np.arange(-(e.l2 - 1), e.l2, dtype=np.int64)
        w = np.outer(e.l1 - np.abs(j1), e.l2 - np.abs(j2)).ravel()
        u = np.add.outer(j1 * e.d1, j2 * e.d2).ravel()
        keep = u >= 0
        return np.bincount(u[keep], weights=w[keep],
                           minlength=e.span + 1).astype(np.int64)
    els = edge_elements_array(e)
    diffs = (els[None, :] - els[:, None]).ravel()
    keep = diffs >= 0
    return np.bincount(diffs[keep], minlength=e.span + 1).astype(np.int64)


class TwoNormEngine:
    """Precomputed difference profiles for one family, reusable across
    many colorings."""

    def __init__(self, family: FamilyE0):
        self.family = family
        self.n = family.n
        self.edges = list(family.all_edges())
        self.n_edges = len(self.edges)
        fam_profile = np.zeros(self.n, dtype=np.int64)
        lag_parts, weight_parts, seg_lengths = [], [], []
        for e in self.edges:
            prof = _edge_difference_profile(e)
            # double positive lags so S_E is a single dot with lags >= 0
            prof2 = prof * 2
            prof2[0] = prof[0]
            fam_profile[: prof2.size] += prof2
            lags = np.nonzero(prof2)[0]
            lag_parts.append(lags)
            weight_parts.append(prof2[lags])
            seg_lengths.append(lags.size)
        self.fam_profile = fam_profile
        self.lags = np.concatenate(lag_parts)
        self.weights = np.concatenate(weight_parts)
        self.seg_starts = np.concatenate(
            [[0], np.cumsum(seg_lengths[:-1])]).astype(np.int64)

    def evaluate(self, chi: Coloring) -> TwoNormBound:
        if chi.n != self.n:
            raise FamilyMismatch(f"coloring n={chi.n}, family n={self.n}")
        v = chi.values.astype(np.int64)
        autocorr = np.correlate(v, v, "full")[self.n - 1:]
        total = int(np.dot(self.fam_profile, autocorr))
        assert 90000 * total >= self.n ** 3, \
            f"squared-imbalance total {total} < n^3/90000 at n={self.n}"
        per_edge = np.add.reduceat(self.weights * autocorr[self.lags],
                                   self.seg_starts)
        best_edge = self.edges[int(np.argmax(per_edge))]
        values = translate_values(chi, best_edge)
        idx = int(np.argmax(np.abs(values)))
        witness = TranslatedEdgeValue(edge=best_edge,
                                      offset=idx - best_edge.span,
                                      value=int(values[idx]))
        witness_value = abs(witness.value)
        denom = 2 * self.n * self.n_edges
        # witness**2 * 2n*m >= S: the max over at most 2n offsets of the
        # densest edge dominates the family average
        assert witness_value ** 2 * denom >= total
        assert 1440000 * witness_value ** 2 > self.n, \
            f"witness value {witness_value} <= sqrt(n)/1200 at n={self.n}"
        return TwoNormBound(
            n=self.n,
            total=total,
            n_edges=self.n_edges,
            derived_disc_lb=math.sqrt(total / denom),
            witness=witness,
        )


_engines: "weakref.WeakKeyDictionary[FamilyE0, TwoNormEngine]" = \
    weakref.WeakKeyDictionary()


def two_norm_lower(chi: Coloring, family: FamilyE0) -> TwoNormBound:
    """Averaging lower bound for one coloring; profiles are cached per
    family object."""
    engine = _engines.get(family)
    if engine is None:
        engine = TwoNormEngine(family)
        _engines[family] = engine
    return engine.evaluate(chi)


# ---------------------------------------------------------------------------
# canonical-edge representations for the search-based solvers
# ---------------------------------------------------------------------------

_mask_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _packed_edges(n: int, cap: int = ENUMERATION_CAP) -> tuple[np.ndarray, np.ndarray]:
    """Packed canonical edge masks and their sizes, cached per n."""
    cached = _mask_cache.get(n)
    if cached is None:
        packed = canonical_edge_masks(n, cap=cap)
        sizes = np.bitwise_count(packed).sum(axis=1).astype(np.int64)
        cached = (packed, sizes)
        _mask_cache[n] = cached
    return cached


def _pack_signs(signs: np.ndarray, row_bytes: int) -> np.ndarray:
    pos = np.packbits(signs > 0, bitorder="little")
    if pos.size < row_bytes:
        pos = np.pad(pos, (0, row_bytes - pos.size))
    return pos


def _max_imbalance(packed: np.ndarray, sizes: np.ndarray,
                   signs: np.ndarray) -> tuple[int, int]:
    """Max |color value| over the packed edges and the argmax row."""
    pos = _pack_signs(signs, packed.shape[1])
    inter = np.bitwise_count(packed & pos).sum(axis=1).astype(np.int64)
    imb = np.abs(2 * inter - sizes)
    idx = int(np.argmax(imb))
    return int(imb[idx]), idx


def _decode_row(row: np.ndarray, n: int) -> tuple[int, ...]:
    bits = np.unpackbits(row, bitorder="little")[:n]
    return tuple(int(z) for z in np.nonzero(bits)[0] + 1)


def exact_discrepancy(n: int) -> DiscReport:
    """Exact minimum over all colorings of the maximum edge imbalance.

    Exhausts the 2**(n-1) colorings with chi(1) = +1 (global sign flip is a
    symmetry), pruning a coloring as soon as one edge already matches the
    incumbent.  Edges are scanned largest first.
    """
    if n > EXACT_CAP:
        raise CapExceeded(f"exact search capped at n={EXACT_CAP}")
    packed, sizes = _packed_edges(n)
    order = np.argsort(-sizes, kind="stable")
    edges = [(int.from_bytes(packed[i].tobytes(), "little"), int(sizes[i]))
             for i in order]
    best = n + 1
    best_pos = 1
    for x in range(1 << (n - 1)):
        pos = (x << 1) | 1
        cur = 0
        pruned = False
        for mask, size in edges:
            imb = abs(2 * (pos & mask).bit_count() - size)
            if imb >= best:
                pruned = True
                break
            if imb > cur:
                cur = imb
        if not pruned:
            best = cur
            best_pos = pos
    signs = np.array([1 if best_pos >> (z - 1) & 1 else -1
                      for z in range(1, n + 1)], dtype=np.int8)
    _, idx = _max_imbalance(packed, sizes, signs)
    return DiscReport(n=n, method="exhaustive", disc_value=best,
                      n_edges=len(packed),
                      witness_coloring=signs.tolist(),
                      witness_edge=_decode_row(packed[idx], n))


def random_coloring_upper(n: int, trials: int = 100, seed: int = 0,
                          cap: int = ENUMERATION_CAP) -> DiscReport:
    """Best-of-``trials`` uniform random colorings over the canonical edges.

    Also reports the harness envelope 4*sqrt(n*ln(2m)) for m distinct
    edges; the comparison is logged, not enforced here.
    """
    packed, sizes = _packed_edges(n, cap=cap)
    rng = np.random.default_rng(seed)
    best = None
    best_signs = None
    best_idx = 0
    for _ in range(max(1, trials)):
        signs = rng.choice(np.array([-1, 1], dtype=np.int8), size=n)
        value, idx = _max_imbalance(packed, sizes, signs)
        if best is None or value < best:
            best, best_signs, best_idx = value, signs, idx
    envelope = 4.0 * math.sqrt(n * math.log(2 * len(packed)))
    ok = best <= envelope
    log.info("random upper bound at n=%d: disc=%d envelope=%.2f ok=%s",
             n, best, envelope, ok)
    return DiscReport(n=n, method="random", disc_value=int(best),
                      n_edges=len(packed),
                      witness_coloring=best_signs.tolist(),
                      witness_edge=_decode_row(packed[best_idx], n),
                      trials=trials, seed=seed,
                      envelope=envelope, envelope_ok=bool(ok))


def local_search_upper(n: int, restarts: int = 20, seed: int = 0,
                       cap: int = ENUMERATION_CAP) -> DiscReport:
    """Single-flip hill climbing on the max edge imbalance, random restarts.

    The objective after every accepted flip is recomputed by a full edge
    scan, so the reported value is a valid upper bound by construction.
    """
    packed, sizes = _packed_edges(n, cap=cap)
    rng = np.random.default_rng(seed)
    best = None
    best_signs = None
    best_idx = 0
    for _ in range(max(1, restarts)):
        signs = rng.choice(np.array([-1, 1], dtype=np.int8), size=n)
        value, idx = _max_imbalance(packed, sizes, signs)
        improved = True
        while improved:
            improved = False
            for z in rng.permutation(n):
                signs[z] = -signs[z]
                cand, cidx = _max_imbalance(packed, sizes, signs)
                if cand < value:
                    value, idx = cand, cidx
                    improved = True
                else:
                    signs[z] = -signs[z]
        if best is None or value < best:
            best, best_signs, best_idx = value, signs.copy(), idx
    check, _ = _max_imbalance(packed, sizes, best_signs)
    assert check == best, "re-verification scan disagrees with search value"
    return DiscReport(n=n, method="local_search", disc_value=int(best),
                      n_edges=len(packed),
                      witness_coloring=best_signs.tolist(),
                      witness_edge=_decode_row(packed[best_idx], n),
                      restarts=restarts, seed=seed)
