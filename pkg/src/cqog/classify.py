"""C-quasi-order recognition: CQ axioms, element typing, welding detection,
elementary-kind classification, and the compatible-quasi-order bridge."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .carrier import DomainError, GroupCarrier, InvalidParameterError, WindowPolicy
from .crel import INF, AxiomReport, Valuation, _Coder, _first_true, check_og
from .qorder import QuasiOrder, TotalOrder, qo_from_key

Element = Any


class ElementType(enum.Enum):
    IDENTITY = "identity"
    V_TYPE = "v_type"
    O_PLUS = "o_plus"
    O_MINUS = "o_minus"

    def is_o_type(self) -> bool:
        return self in (ElementType.O_PLUS, ElementType.O_MINUS)


@dataclass
class TypeReport:
    types: dict
    welding_points: frozenset
    is_welded: bool

    def of_type(self, t: ElementType) -> list:
        return [x for x, tx in self.types.items() if tx is t]

    def o_welding_points(self) -> set:
        return {x for x in self.welding_points if self.types[x].is_o_type()}

    def v_welding_points(self) -> set:
        return {x for x in self.welding_points if self.types[x] is ElementType.V_TYPE}


# ---------------------------------------------------------------------------
# CQ axioms
# ---------------------------------------------------------------------------


def check_cqo_axioms(q: QuasiOrder, policy: WindowPolicy) -> AxiomReport:
    """CQ1 (identity strictly minimal), CQ2 and CQ3 in their one-directional
    forms, swept over window-closed tuples."""
    car = q.carrier
    rep = AxiomReport("c-quasi-order", carrier=car)

    one = car.identity
    cex1 = None
    if q.rank[one] != 0:
        cex1 = (one,)
    else:
        for x in q.levels[0]:
            if x != one:
                cex1 = (x,)
                break
    rep.add("CQ1", cex1, len(car.universe), 0)

    ev = car.eval_universe(policy)
    n = len(ev)
    coder = _Coder(q, policy)
    inv = [car.inv(x) for x in ev]
    diffs = [[car.op(x, yi) for yi in inv] for x in ev]
    for x in ev:
        coder.add(x)
    for yi in inv:
        coder.add(yi)
    for row in diffs:
        for p in row:
            coder.add(p)
    coder.finalize()
    R = coder.array(ev)
    RI = coder.array(inv)
    D = coder.matrix(diffs)

    ok2 = (D >= 0) & (RI[None, :] >= 0) & (R[:, None] >= 0) & (R[None, :] >= 0)
    m = ok2 & (R[:, None] <= R[None, :]) & (D > RI[None, :])
    w = _first_true(m)
    rep.add("CQ2", None if w is None else (ev[w[0]], ev[w[1]]), int(ok2.sum()), n * n - int(ok2.sum()))

    checked3 = 0
    cex3 = None
    for zi, z in enumerate(ev):
        conj = [car.conjugate(x, z) for x in ev]
        c3 = _Coder(q, policy)
        for x in ev:
            c3.add(x)
        for p in conj:
            c3.add(p)
        c3.finalize()
        Rz = c3.array(ev)
        CZ = c3.array(conj)
        ok = (CZ >= 0) & (Rz >= 0)
        pair_ok = ok[:, None] & ok[None, :]
        checked3 += int(pair_ok.sum())
        if cex3 is None:
            m = pair_ok & (Rz[:, None] <= Rz[None, :]) & (CZ[:, None] > CZ[None, :])
            w = _first_true(m)
            if w is not None:
                cex3 = (ev[w[0]], ev[w[1]], z)
    rep.add("CQ3", cex3, checked3, n ** 3 - checked3)
    return rep


def is_cqo(q: QuasiOrder, policy: WindowPolicy) -> bool:
    return check_cqo_axioms(q, policy).ok


# ---------------------------------------------------------------------------
# element types and welding
# ---------------------------------------------------------------------------


def element_type(q: QuasiOrder, g: Element) -> ElementType:
    car = q.carrier
    if g == car.identity:
        return ElementType.IDENTITY
    c = q.cmp(g, car.inv(g))
    if c is None:
        raise DomainError(
            f"type of {car.label(g)} undecidable: inverse leaves the window"
        )
    if c == 0:
        return ElementType.V_TYPE
    return ElementType.O_MINUS if c < 0 else ElementType.O_PLUS


def type_report(q: QuasiOrder) -> TypeReport:
    tfn = q.closed_forms.get("element_type")
    types = {}
    for x in q.carrier.universe:
        types[x] = tfn(x) if tfn is not None else element_type(q, x)
    welded = set()
    for lvl in q.levels:
        tags = {types[x] for x in lvl}
        has_o = any(t.is_o_type() for t in tags)
        has_v = ElementType.V_TYPE in tags
        if has_o and has_v:
            welded.update(x for x in lvl if types[x] is not ElementType.IDENTITY)
    return TypeReport(types, frozenset(welded), bool(welded))


def level_types(q: QuasiOrder, report: Optional[TypeReport] = None) -> list[set]:
    report = report or type_report(q)
    return [{report.types[x] for x in lvl} for lvl in q.levels]


# ---------------------------------------------------------------------------
# elementary kinds
# ---------------------------------------------------------------------------


@dataclass
class ElementaryKind:
    tag: str  # valuational | order_type | neither
    order: Optional[TotalOrder] = None
    valuation: Optional[Valuation] = None


def elementary_kind(q: QuasiOrder) -> ElementaryKind:
    tr = type_report(q)
    non_id = [x for x in q.carrier.universe if x != q.carrier.identity]
    if all(tr.types[x] is ElementType.V_TYPE for x in non_id):
        return ElementaryKind("valuational", valuation=extract_valuation(q, _checked=True))
    if all(tr.types[x].is_o_type() for x in non_id):
        minus_levels = {q.rank[x] for x in non_id if tr.types[x] is ElementType.O_MINUS}
        if len(minus_levels) == 1:
            return ElementaryKind("order_type", order=extract_order(q, _checked=True))
    return ElementaryKind("neither")


def extract_valuation(q: QuasiOrder, _checked: bool = False) -> Valuation:
    """Value set = the levels in reversed order, identity level at infinity."""
    if not _checked:
        kind_tag = _kind_tag(q)
        if kind_tag != "valuational":
            raise DomainError(f"quasi-order is {kind_tag}, not valuational")
    car = q.carrier
    top = q.level_count - 1
    values = {
        x: (INF if x == car.identity else top - q.rank[x]) for x in car.universe
    }
    labels = [car.label(q.levels[top - g][0]) for g in range(q.level_count - 1)] or None
    val_fn = None
    if q.key_fn is not None:
        level_keys = {q.key_fn(lvl[0]): top - r for r, lvl in enumerate(q.levels)}
        ident = car.identity
        kf = q.key_fn

        def val_fn(x, _lk=level_keys, _kf=kf, _one=ident):
            if x == _one:
                return INF
            return _lk.get(_kf(x))

    gamma_size = max(1, q.level_count - 1)
    return Valuation(car, values, gamma_size, labels=labels, val_fn=val_fn, name=f"v({q.name})")


def extract_order(q: QuasiOrder, _checked: bool = False) -> TotalOrder:
    """Recover the group order from an order-type quasi-order."""
    if not _checked:
        kind_tag = _kind_tag(q)
        if kind_tag != "order_type":
            raise DomainError(f"quasi-order is {kind_tag}, not order-type")
    car = q.carrier
    one = car.identity

    if q.key_fn is not None:
        kf = q.key_fn

        def key_fn(x, _kf=kf, _car=car, _one=one):
            if x == _one:
                return (1, 0)
            ki, kx = _kf(_car.inv(x)), _kf(x)
            if kx == ki:
                raise DomainError("element equivalent to its inverse; not order-type")
            if kx < ki:
                return (0, _NegKey(ki))
            return (2, kx)

        base_key = key_fn
    else:
        key_fn = None

        def base_key(x):
            if x == one:
                return (1, 0)
            xi = car.inv(x)
            ri = q.rank.get(xi)
            if ri is None:
                raise DomainError("inverse leaves the window; order not recoverable")
            rx = q.rank[x]
            if rx == ri:
                raise DomainError("element equivalent to its inverse; not order-type")
            if rx < ri:
                return (0, _NegKey(ri))
            return (2, rx)

    return TotalOrder(car, key_fn=key_fn,
                      positions={x: i for i, x in enumerate(sorted(car.universe, key=base_key))},
                      name=f"leq({q.name})")


class _NegKey:
    """Order-reversing wrapper so heterogeneous keys sort descending."""

    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __eq__(self, other):
        return isinstance(other, _NegKey) and self.k == other.k

    def __lt__(self, other):
        return other.k < self.k

    def __le__(self, other):
        return other.k <= self.k

    def __gt__(self, other):
        return other.k > self.k

    def __ge__(self, other):
        return other.k >= self.k

    def __hash__(self):
        return hash(("neg", self.k))

    def __repr__(self):
        return f"~{self.k!r}"


def _kind_tag(q: QuasiOrder) -> str:
    tr = type_report(q)
    non_id = [x for x in q.carrier.universe if x != q.carrier.identity]
    if all(tr.types[x] is ElementType.V_TYPE for x in non_id):
        return "valuational"
    if all(tr.types[x].is_o_type() for x in non_id):
        minus = {q.rank[x] for x in non_id if tr.types[x] is ElementType.O_MINUS}
        if len(minus) == 1:
            return "order_type"
    return "neither"


def order_cqo_from_order(order: TotalOrder, policy: Optional[WindowPolicy] = None) -> QuasiOrder:
    """The C-quasi-order of a group order: identity strictly minimal, all
    negatives one class, positives ordered by the order itself."""
    if policy is not None:
        rep = check_og(order, policy)
        if not rep.ok:
            raise InvalidParameterError(
                f"order is not translation-invariant: {rep.check('OG').counterexample}"
            )
    car = order.carrier
    one = car.identity

    if order.key_fn is not None:
        one_key = order.key_fn(one)

        def key(x, _kf=order.key_fn, _ok=one_key, _one=one):
            if x == _one:
                return (0,)
            kx = _kf(x)
            return (1,) if kx < _ok else (2, kx)

    else:
        pos_one = order.position[one]

        def key(x, _p=order.position, _po=pos_one, _one=one):
            if x == _one:
                return (0,)
            px = _p[x]
            return (1,) if px < _po else (2, px)

    return qo_from_key(car, key, name=f"cqo({order.name})")


# ---------------------------------------------------------------------------
# elementary-type-likeness on subsets
# ---------------------------------------------------------------------------


def is_valuational_like(q: QuasiOrder, T, policy: Optional[WindowPolicy] = None) -> bool:
    """g·h stays below the larger of g and h, for all pairs in T."""
    members = list(T)
    for g in members:
        for h in members:
            gh = q.carrier.op(g, h)
            upper = h if q.rank_of(g) <= q.rank_of(h) else g
            c = q.cmp(gh, upper)
            if c is None:
                continue
            if c > 0:
                return False
    return True


def is_order_type_like(q: QuasiOrder, T, policy: Optional[WindowPolicy] = None) -> bool:
    """T splits as T+ ∪ T- with T- the inverses of T+, T- strictly below T+,
    and the quasi-order trivial on T-."""
    members = list(T)
    plus, minus = [], []
    for x in members:
        t = element_type(q, x)
        if t is ElementType.O_PLUS:
            plus.append(x)
        elif t is ElementType.O_MINUS:
            minus.append(x)
        else:
            return False
    if set(q.carrier.inv(x) for x in plus) != set(minus):
        return False
    if not minus or not plus:
        return not members
    ranks_minus = {q.rank_of(x) for x in minus}
    if len(ranks_minus) != 1:
        return False
    return max(ranks_minus) < min(q.rank_of(x) for x in plus)


# ---------------------------------------------------------------------------
# compatible quasi-orders (abelian bridge)
# ---------------------------------------------------------------------------


def check_compatible_qo_axioms(q: QuasiOrder, policy: WindowPolicy) -> AxiomReport:
    """Q1: only the identity is equivalent to the identity.  Q2: translation
    by z preserves x ≾ y whenever y is not equivalent to z's inverse-free
    translate (the abelian compatibility axiom)."""
    car = q.carrier
    if not car.is_abelian:
        raise DomainError("compatible quasi-order axioms require an abelian carrier")
    rep = AxiomReport("compatible-qo", carrier=car)

    one = car.identity
    cex = None
    for x in car.universe:
        if x != one and q.rank[x] == q.rank[one]:
            cex = (x,)
            break
    rep.add("Q1", cex, len(car.universe), 0)

    ev = car.eval_universe(policy)
    n = len(ev)
    coder = _Coder(q, policy)
    sums = [[car.op(x, z) for z in ev] for x in ev]
    for x in ev:
        coder.add(x)
    for row in sums:
        for p in row:
            coder.add(p)
    coder.finalize()
    R = coder.array(ev)
    S = coder.matrix(sums)

    checked = 0
    cex2 = None
    for zi in range(n):
        xz = S[:, zi]
        ok = (xz[:, None] >= 0) & (xz[None, :] >= 0)
        applicable = (R[:, None] <= R[None, :]) & (R[None, :] != R[zi])
        checked += int(ok.sum())
        if cex2 is None:
            m = ok & applicable & (xz[:, None] > xz[None, :])
            w = _first_true(m)
            if w is not None:
                cex2 = (ev[w[0]], ev[w[1]], ev[zi])
    rep.add("Q2", cex2, checked, n ** 3 - checked)
    return rep


def cqo_from_compatible_qo(q: QuasiOrder, policy: WindowPolicy) -> QuasiOrder:
    """Rebuild a compatible quasi-order into a C-quasi-order: order-type
    structure on the o-type subgroup, untouched on the v-type part, with the
    o-part strictly below the v-part and the identity alone at the bottom."""
    car = q.carrier
    if not car.is_abelian:
        raise DomainError("the transform requires an abelian carrier")
    rep = check_compatible_qo_axioms(q, policy)
    if not rep.ok:
        bad = next(c for c in rep.checks if c.status == "fails")
        raise DomainError(f"not a compatible quasi-order: {bad.name} fails at {bad.counterexample}")
    one = car.identity
    rank_one = q.rank[one]

    def is_v(x) -> bool:
        return x != one and q.rank[x] == q.rank[car.inv(x)]

    key_map = {}
    for x in car.universe:
        if x == one:
            key_map[x] = (0,)
        elif is_v(x):
            key_map[x] = (3, q.rank[x])
        elif q.rank[x] < rank_one:
            key_map[x] = (1,)
        else:
            key_map[x] = (2, q.rank[x])
    return qo_from_key(car, key_map.__getitem__, name=f"cqo*({q.name})")
