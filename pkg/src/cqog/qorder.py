"""Total quasi-orders on carrier universes and the convexity vocabulary.

A quasi-order is stored as a rank function onto dense levels 0..k-1, which
makes totality and transitivity structural.  Quasi-orders built from a
comparator carry the comparator key so that exact elements outside the
enumerated window can still be compared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from .carrier import DomainError, GroupCarrier, InvalidParameterError

Element = Any


class QuasiOrder:
    """Total quasi-order on a carrier universe, realized as a rank function."""

    def __init__(
        self,
        carrier: GroupCarrier,
        rank: dict,
        key_fn: Optional[Callable[[Element], Any]] = None,
        closed_forms: Optional[dict] = None,
        name: str = "",
    ) -> None:
        self.carrier = carrier
        self.rank = dict(rank)
        self.key_fn = key_fn
        self.closed_forms = closed_forms or {}
        self.name = name
        missing = [x for x in carrier.universe if x not in self.rank]
        if missing:
            raise InvalidParameterError(
                f"rank function is not total; missing {carrier.label(missing[0])}"
            )
        ranks = sorted(set(self.rank.values()))
        if ranks != list(range(len(ranks))):
            raise InvalidParameterError("ranks must be dense 0..k-1")
        self.level_count = len(ranks)
        self.levels: list[list] = [[] for _ in range(self.level_count)]
        for x in carrier.universe:
            self.levels[self.rank[x]].append(x)
        for lvl in self.levels:
            lvl.sort(key=carrier.index.__getitem__)

    # -- comparisons --------------------------------------------------------
    def rank_of(self, x: Element) -> int:
        r = self.rank.get(x)
        if r is None:
            raise DomainError(f"element {self.carrier.label(x)} outside the universe")
        return r

    def cmp(self, a: Element, b: Element) -> Optional[int]:
        """-1/0/1 comparison; works on exact out-of-window elements when a
        comparator key is available, else None for undecidable."""
        ra, rb = self.rank.get(a), self.rank.get(b)
        if ra is not None and rb is not None:
            return (ra > rb) - (ra < rb)
        if self.key_fn is not None:
            ka, kb = self.key_fn(a), self.key_fn(b)
            return (ka > kb) - (ka < kb)
        return None

    def leq(self, a: Element, b: Element) -> bool:
        return self.rank_of(a) <= self.rank_of(b)

    def sim(self, a: Element, b: Element) -> bool:
        return self.rank_of(a) == self.rank_of(b)

    def lt(self, a: Element, b: Element) -> bool:
        return self.rank_of(a) < self.rank_of(b)

    def between(self, a: Element, c: Element, b: Element) -> bool:
        ra, rc, rb = self.rank_of(a), self.rank_of(c), self.rank_of(b)
        return min(ra, rb) <= rc <= max(ra, rb)

    def strictly_between(self, a: Element, c: Element, b: Element) -> bool:
        ra, rc, rb = self.rank_of(a), self.rank_of(c), self.rank_of(b)
        return min(ra, rb) < rc < max(ra, rb)

    def class_of(self, x: Element) -> list:
        return self.levels[self.rank_of(x)]

    # -- extrema -------------------------------------------------------------
    def min_of(self, S) -> list:
        S = list(S)
        if not S:
            return []
        r = min(self.rank_of(x) for x in S)
        return sorted((x for x in S if self.rank[x] == r), key=self.carrier.index.__getitem__)

    def max_of(self, S) -> list:
        S = list(S)
        if not S:
            return []
        r = max(self.rank_of(x) for x in S)
        return sorted((x for x in S if self.rank[x] == r), key=self.carrier.index.__getitem__)

    # -- convexity ------------------------------------------------------------
    def _span(self, S) -> tuple[int, int, dict]:
        ranks = [self.rank_of(x) for x in S]
        per_level: dict[int, int] = {}
        for r in ranks:
            per_level[r] = per_level.get(r, 0) + 1
        return min(ranks), max(ranks), per_level

    def _covers_levels(self, S_set, lo: int, hi: int) -> bool:
        if lo > hi:
            return True
        return all(x in S_set for r in range(lo, hi + 1) for x in self.levels[r])

    def is_convex(self, S) -> bool:
        S = set(S)
        if not S:
            return True
        lo, hi, _ = self._span(S)
        return self._covers_levels(S, lo, hi)

    def is_initial_segment(self, S) -> bool:
        S = set(S)
        if not S:
            return True
        _, hi, _ = self._span(S)
        return self._covers_levels(S, 0, hi)

    def is_left_convex(self, S) -> bool:
        S = set(S)
        if not S:
            return True
        lo, hi, _ = self._span(S)
        return self._covers_levels(S, lo, hi - 1)

    def is_right_convex(self, S) -> bool:
        S = set(S)
        if not S:
            return True
        lo, hi, _ = self._span(S)
        return self._covers_levels(S, lo + 1, hi)

    def is_strictly_convex(self, S) -> bool:
        S = set(S)
        if not S:
            return True
        lo, hi, _ = self._span(S)
        return self._covers_levels(S, lo + 1, hi - 1)

    def convexity_complement(self, S) -> list:
        """Smallest T disjoint from S with S ∪ T convex; domain-error if S is
        not strictly convex."""
        c = self.classify_strict_convex(S)
        if c.case == "not_strictly_convex":
            raise DomainError("convexity complement of a non-strictly-convex set")
        return list(c.complement)

    def classify_strict_convex(self, S) -> "SubsetClassification":
        S_set = set(S)
        if not S_set:
            return SubsetClassification("convex", (), None)
        lo, hi, _ = self._span(S_set)
        if self._covers_levels(S_set, lo, hi):
            return SubsetClassification("convex", (), None)
        key = self.carrier.index.__getitem__
        lo_cl = set(self.levels[lo])
        hi_cl = set(self.levels[hi])
        if self._covers_levels(S_set | lo_cl, lo, hi):
            comp = tuple(sorted(lo_cl - S_set, key=key))
            return SubsetClassification("right_convex_min", comp, None)
        if self._covers_levels(S_set | hi_cl, lo, hi):
            comp = tuple(sorted(hi_cl - S_set, key=key))
            return SubsetClassification("left_convex_max", comp, None)
        if self._covers_levels(S_set | lo_cl | hi_cl, lo, hi):
            comp = tuple(sorted((lo_cl | hi_cl) - S_set, key=key))
            return SubsetClassification("both_ends", comp, None)
        witness = self._strictness_witness(S_set, lo, hi)
        return SubsetClassification("not_strictly_convex", (), witness)

    def _strictness_witness(self, S_set, lo: int, hi: int):
        for a in self.carrier.universe:
            if a in S_set:
                continue
            ra = self.rank[a]
            if lo < ra < hi:
                s = next(x for x in self.carrier.universe if x in S_set and self.rank[x] < ra)
                t = next(x for x in self.carrier.universe if x in S_set and self.rank[x] > ra)
                return (s, a, t)
        return None

    # -- misc ------------------------------------------------------------------
    def same_as(self, other: "QuasiOrder") -> bool:
        """Pointwise equality of the induced relations on the shared universe."""
        if self.carrier.universe != other.carrier.universe:
            return False
        if self.level_count != other.level_count:
            return False
        return all(self.rank[x] == other.rank[x] for x in self.carrier.universe)

    def as_levels(self) -> list[list]:
        return [list(lvl) for lvl in self.levels]

    def __repr__(self) -> str:
        tag = self.name or "qo"
        return f"<QuasiOrder {tag} levels={self.level_count} on {self.carrier.name}>"


@dataclass(frozen=True)
class SubsetClassification:
    """Outcome of the strict-convexity case analysis."""

    case: str  # convex | right_convex_min | left_convex_max | both_ends | not_strictly_convex
    complement: tuple
    witness: Optional[tuple]


# -- constructors --------------------------------------------------------------


def qo_from_key(
    carrier: GroupCarrier,
    key_fn: Callable[[Element], Any],
    closed_forms: Optional[dict] = None,
    name: str = "",
) -> QuasiOrder:
    """Materialize ranks by sorting the window under a comparator key."""
    keys = sorted({key_fn(x) for x in carrier.universe})
    pos = {k: i for i, k in enumerate(keys)}
    rank = {x: pos[key_fn(x)] for x in carrier.universe}
    return QuasiOrder(carrier, rank, key_fn=key_fn, closed_forms=closed_forms, name=name)


def qo_from_levels(carrier: GroupCarrier, levels: Sequence[Sequence[Element]], name: str = "") -> QuasiOrder:
    rank: dict = {}
    for i, lvl in enumerate(levels):
        for x in lvl:
            if x in rank:
                raise InvalidParameterError("levels overlap")
            rank[x] = i
    return QuasiOrder(carrier, rank, name=name)


def trivial_qo(carrier: GroupCarrier) -> QuasiOrder:
    """One equivalence class."""
    return QuasiOrder(carrier, {x: 0 for x in carrier.universe}, key_fn=lambda x: 0, name="trivial")


# -- coarsening ------------------------------------------------------------------


def coarsen(q: QuasiOrder, merges) -> QuasiOrder:
    """Merge adjacent levels; ``merges`` is a set of (i, i+1) pairs."""
    parent = list(range(q.level_count))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in merges:
        if j != i + 1:
            raise InvalidParameterError(f"merge ({i},{j}) is not an adjacent pair")
        if not (0 <= i and j < q.level_count):
            raise InvalidParameterError(f"merge ({i},{j}) out of range")
        parent[find(j)] = find(i)
    groups = sorted({find(i) for i in range(q.level_count)})
    new_of_old = {old: groups.index(find(old)) for old in range(q.level_count)}
    rank = {x: new_of_old[r] for x, r in q.rank.items()}
    key_fn = None
    if q.key_fn is not None:
        old_keys = [q.key_fn(lvl[0]) for lvl in q.levels]
        lo_of_group = {g: min(i for i in range(q.level_count) if find(i) == g) for g in groups}
        merged_key = {old_keys[i]: old_keys[lo_of_group[find(i)]] for i in range(q.level_count)}
        base_key = q.key_fn

        def key_fn(x, _m=merged_key, _k=base_key):
            k = _k(x)
            return _m.get(k, k)

    return QuasiOrder(q.carrier, rank, key_fn=key_fn, closed_forms=dict(q.closed_forms), name=q.name + "*")


def is_coarsening(coarse: QuasiOrder, fine: QuasiOrder) -> bool:
    """True iff a ≾_fine b implies a ≾_coarse b for all pairs."""
    if coarse.carrier.universe != fine.carrier.universe:
        return False
    image: dict[int, int] = {}
    for x in fine.carrier.universe:
        rf, rc = fine.rank[x], coarse.rank[x]
        if image.setdefault(rf, rc) != rc:
            return False
    vals = [image[r] for r in range(fine.level_count)]
    return all(vals[i] <= vals[i + 1] for i in range(len(vals) - 1))


# -- total orders -------------------------------------------------------------------


class TotalOrder:
    """Strict total order on a carrier universe (antisymmetry is structural)."""

    def __init__(
        self,
        carrier: GroupCarrier,
        key_fn: Optional[Callable[[Element], Any]] = None,
        positions: Optional[dict] = None,
        name: str = "",
    ) -> None:
        self.carrier = carrier
        self.key_fn = key_fn
        self.name = name
        if positions is None:
            if key_fn is None:
                raise InvalidParameterError("need a key or explicit positions")
            order = sorted(carrier.universe, key=key_fn)
            positions = {x: i for i, x in enumerate(order)}
        self.position = dict(positions)
        if len(set(self.position.values())) != len(self.position):
            raise InvalidParameterError("order is not antisymmetric (duplicate positions)")
        for x in carrier.universe:
            if x not in self.position:
                raise InvalidParameterError("order is not total on the universe")

    def cmp(self, a: Element, b: Element) -> Optional[int]:
        pa, pb = self.position.get(a), self.position.get(b)
        if pa is not None and pb is not None:
            return (pa > pb) - (pa < pb)
        if self.key_fn is not None:
            ka, kb = self.key_fn(a), self.key_fn(b)
            return (ka > kb) - (ka < kb)
        return None

    def lt(self, a: Element, b: Element) -> bool:
        c = self.cmp(a, b)
        if c is None:
            raise DomainError("comparison outside the materialized order")
        return c < 0

    def leq(self, a: Element, b: Element) -> bool:
        c = self.cmp(a, b)
        if c is None:
            raise DomainError("comparison outside the materialized order")
        return c <= 0

    def sorted_universe(self) -> list:
        return sorted(self.carrier.universe, key=self.position.__getitem__)

    def __repr__(self) -> str:
        return f"<TotalOrder {self.name or 'leq'} on {self.carrier.name}>"


def natural_order(carrier: GroupCarrier) -> TotalOrder:
    """Lexicographic order on vector payloads (the usual order for rank 1)."""
    return TotalOrder(carrier, key_fn=lambda x: x, name="natural")
