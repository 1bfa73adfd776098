"""The structured O(N)-size edge family used by the certification argument.

The family splits into three parts:

* ``e1``: single progressions with difference d1 in [1, 24] and length
  ceil(N / (6*d1)).
* ``e2``: for d1 in [25, floor(sqrt(N))], length ceil(N / (12*d1)), paired
  with every second difference d2 in [1, d1 - 1] and second length
  ceil((d1 - 1) / 12).
* ``e3``: for every d1 up to floor(sqrt(N)) and every dyadic scale
  k in [0, kbar(d1)], second differences drawn from congruence classes
  b mod 2^(2k)*d1 (b coprime to d1) inside the open interval
  (2^k sqrt(N), 2^(k+1) sqrt(N) + 2^(2k) d1); lengths are
  ceil(2^k sqrt(N) / 12) and ceil(2^-k sqrt(N) / 12).

All interval endpoints involve sqrt(N), which is irrational for most N, so
membership tests are carried out exactly by integer squaring.  Every edge
in the family fits inside [0, N-1]; the total counts obey |e3| <= 6N and
|e1| + |e2| + |e3| <= 7N.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from .hypergraph import SumEdge, edge_cardinality
from .numtheory import isqrt_ceil, isqrt_floor, totatives

log = logging.getLogger(__name__)

# Below this N the count bounds are meaningless (e1 alone has 24 edges) and
# the family is only useful for exercising degenerate-input handling.
COUNT_CHECK_MIN_N = 25


class BadK(ValueError):
    """Raised when a dyadic scale k exceeds kbar for the given difference."""


class ContainmentViolation(RuntimeError):
    """An edge of the built family escapes [0, N-1]; construction bug."""


@dataclass(frozen=True)
class FamilyConfig:
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")


class Provenance(NamedTuple):
    delta1: int
    k: int
    b: int


def kbar(n: int, delta1: int) -> int:
    """Largest k >= 0 with 2^k * delta1 <= sqrt(n), exactly.

    Requires delta1 <= sqrt(n) so that k = 0 qualifies.
    """
    if delta1 < 1 or delta1 * delta1 > n:
        raise ValueError(f"delta1={delta1} exceeds sqrt({n})")
    k = 0
    while ((delta1 << (k + 1)) ** 2) <= n:
        k += 1
    return k


def length1_at_scale(n: int, k: int) -> int:
    """ceil(2^k * sqrt(n) / 12) computed exactly."""
    return (isqrt_ceil((4 ** k) * n) + 11) // 12


def length2_at_scale(n: int, k: int) -> int:
    """ceil(2^-k * sqrt(n) / 12) computed exactly."""
    step = 12 << k
    return (isqrt_ceil(n) + step - 1) // step


def in_m_interval(n: int, delta1: int, k: int, d2: int) -> bool:
    """Exact test for d2 in the open interval
    (2^k sqrt(n), 2^(k+1) sqrt(n) + 2^(2k) delta1)."""
    if d2 * d2 <= (4 ** k) * n:
        return False
    rest = d2 - (4 ** k) * delta1
    return rest <= 0 or rest * rest < (4 ** (k + 1)) * n


@dataclass(frozen=True)
class MSet:
    """Second differences congruent to b mod 2^(2k)*delta1 inside the open
    dyadic interval at scale k."""

    delta1: int
    b: int
    k: int
    members: tuple[int, ...]


def build_m_set(n: int, delta1: int, b: int, k: int) -> MSet:
    """Enumerate the congruence class of b inside the scale-k interval.

    Consecutive members differ by exactly 2^(2k)*delta1; the member count
    never exceeds 3 * 2^-k * sqrt(n) / delta1.
    """
    if delta1 < 1 or delta1 * delta1 > n:
        raise ValueError(f"delta1={delta1} exceeds sqrt({n})")
    if b < 1 or b > delta1 or math.gcd(b, delta1) != 1:
        raise ValueError(f"b={b} is not a totative of {delta1}")
    if k < 0 or k > kbar(n, delta1):
        raise BadK(f"k={k} outside [0, {kbar(n, delta1)}] for delta1={delta1}")
    step = (4 ** k) * delta1
    lo = isqrt_floor((4 ** k) * n) + 1  # smallest integer > 2^k sqrt(n)
    first = lo + ((b - lo) % step)
    members = []
    d2 = first
    while True:
        rest = d2 - step
        if rest > 0 and rest * rest >= (4 ** (k + 1)) * n:
            break
        members.append(d2)
        d2 += step
    count = len(members)
    # count <= 3 * 2^-k sqrt(n) / delta1, checked by squaring
    if (count * (1 << k) * delta1) ** 2 > 9 * n:
        raise AssertionError(
            f"M({b},{k}) for delta1={delta1}, n={n} has {count} members, "
            "more than 3*2^-k*sqrt(n)/delta1")
    return MSet(delta1=delta1, b=b, k=k, members=tuple(members))


@dataclass(eq=False)
class FamilyE0:
    """The built family; treat as immutable after construction."""

    n: int
    e1: list[SumEdge]
    e2: list[SumEdge]
    e3: list[tuple[SumEdge, Provenance]]
    clipped: list[SumEdge] = field(default_factory=list, repr=False)

    @property
    def counts(self) -> tuple[int, int, int]:
        return (len(self.e1), len(self.e2), len(self.e3))

    def __len__(self) -> int:
        return len(self.e1) + len(self.e2) + len(self.e3)

    def all_edges(self) -> Iterator[SumEdge]:
        yield from self.e1
        yield from self.e2
        for edge, _ in self.e3:
            yield edge

    def sub_family_of(self, edge: SumEdge) -> str | None:
        """Which part of the family contains this exact edge record."""
        if edge in self._edge_sets()[0]:
            return "e1"
        if edge in self._edge_sets()[1]:
            return "e2"
        if edge in self._edge_sets()[2]:
            return "e3"
        return None

    def _edge_sets(self) -> tuple[frozenset, frozenset, frozenset]:
        cached = getattr(self, "_sets", None)
        if cached is None:
            cached = (frozenset(self.e1), frozenset(self.e2),
                      frozenset(e for e, _ in self.e3))
            object.__setattr__(self, "_sets", cached)
        return cached


def _e1_edges(n: int) -> list[SumEdge]:
    return [SumEdge(d1=d1, l1=(n + 6 * d1 - 1) // (6 * d1), d2=1, l2=1)
            for d1 in range(1, 25)]


def _e2_edges(n: int) -> list[SumEdge]:
    out = []
    for d1 in range(25, isqrt_floor(n) + 1):
        l1 = (n + 12 * d1 - 1) // (12 * d1)
        l2 = (d1 - 1 + 11) // 12
        for d2 in range(1, d1):
            out.append(SumEdge(d1=d1, l1=l1, d2=d2, l2=l2))
    return out


def _e3_edges(n: int) -> list[tuple[SumEdge, Provenance]]:
    out = []
    for d1 in range(1, isqrt_floor(n) + 1):
        for k in range(0, kbar(n, d1) + 1):
            l1 = length1_at_scale(n, k)
            l2 = length2_at_scale(n, k)
            for b in totatives(d1):
                for d2 in build_m_set(n, d1, b, k).members:
                    out.append((SumEdge(d1=d1, l1=l1, d2=d2, l2=l2),
                                Provenance(delta1=d1, k=k, b=b)))
    return out


def build_family(cfg: FamilyConfig) -> FamilyE0:
    """Construct the full family and validate its containment and counts.

    Every edge must fit in [0, n-1].  For n >= 576 a violation raises
    ContainmentViolation (it would indicate a construction bug); for the
    degenerate small-n regime offending edges are clipped out and logged.
    The count bounds |e3| <= 6n and |e1|+|e2|+|e3| <= 7n are asserted for
    n >= 25 (below that even the 24 fixed e1 records exceed n).
    """
    n = cfg.n
    clipped: list[SumEdge] = []

    def keep(edge: SumEdge) -> bool:
        if edge.span <= n - 1:
            return True
        if n >= 576:
            raise ContainmentViolation(
                f"edge {edge} spans {edge.span} > {n - 1} at n={n}")
        log.warning("clipping edge %s (span %d) out of family at n=%d",
                    edge, edge.span, n)
        clipped.append(edge)
        return False

    e1 = [e for e in _e1_edges(n) if keep(e)]
    e2 = [e for e in _e2_edges(n) if keep(e)]
    e3 = [(e, prov) for e, prov in _e3_edges(n) if keep(e)]

    if n >= COUNT_CHECK_MIN_N:
        assert len(e3) <= 6 * n, f"|e3|={len(e3)} > 6n at n={n}"
        assert len(e1) + len(e2) < n, \
            f"|e1|+|e2|={len(e1) + len(e2)} >= n at n={n}"
        assert len(e1) + len(e2) + len(e3) <= 7 * n, \
            f"family size {len(e1) + len(e2) + len(e3)} > 7n at n={n}"
    return FamilyE0(n=n, e1=e1, e2=e2, e3=e3, clipped=clipped)


@dataclass(frozen=True)
class FamilyStats:
    n: int
    count_e1: int
    count_e2: int
    count_e3: int
    total: int
    max_element: int
    min_size_e2: int | None
    min_size_e3: int | None
    clipped: int


def family_stats(f: FamilyE0) -> FamilyStats:
    """Summary counts plus the guaranteed minimum edge sizes.

    Where the injectivity criterion applies, e2 edges have at least n/150
    elements and e3 edges at least n/144; both bounds are re-checked here
    with integer arithmetic.
    """
    max_el = max((e.span for e in f.all_edges()), default=0)
    min_e2: int | None = None
    for e in f.e2:
        card = edge_cardinality(e)
        if card.collision_free:
            assert 150 * card.value >= f.n, \
                f"e2 edge {e} has {card.value} < n/150 elements"
        min_e2 = card.value if min_e2 is None else min(min_e2, card.value)
    min_e3: int | None = None
    for e, _ in f.e3:
        card = edge_cardinality(e)
        assert card.collision_free, f"e3 edge {e} has colliding lattice points"
        assert 144 * card.value >= f.n, \
            f"e3 edge {e} has {card.value} < n/144 elements"
        min_e3 = card.value if min_e3 is None else min(min_e3, card.value)
    return FamilyStats(
        n=f.n,
        count_e1=len(f.e1),
        count_e2=len(f.e2),
        count_e3=len(f.e3),
        total=len(f),
        max_element=max_el,
        min_size_e2=min_e2,
        min_size_e3=min_e3,
        clipped=len(f.clipped),
    )


def family_records(f: FamilyE0) -> Iterator[dict]:
    """JSON-ready records, one per edge, with provenance."""
    for e in f.e1:
        yield {"sub": "e1", "d1": e.d1, "l1": e.l1, "d2": e.d2, "l2": e.l2}
    for e in f.e2:
        yield {"sub": "e2", "d1": e.d1, "l1": e.l1, "d2": e.d2, "l2": e.l2}
    for e, prov in f.e3:
        yield {"sub": "e3", "d1": e.d1, "l1": e.l1, "d2": e.d2, "l2": e.l2,
               "k": prov.k, "b": prov.b}


def write_family_jsonl(f: FamilyE0, stream) -> None:
    for rec in family_records(f):
        stream.write(json.dumps(rec) + "\n")
