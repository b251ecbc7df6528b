"""Ternary C-relations, group valuations, and the conversions between
orders, valuations, C-relations and quasi-orders.

Axiom sweeps quantify variables over the eval window and count an instance
as checkable only when every derived term stays inside the term window;
reports carry exact (checked, skipped) totals and the enumeration-least
counterexample when an axiom fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from .carrier import DomainError, GroupCarrier, InvalidParameterError, WindowPolicy
from .qorder import QuasiOrder, TotalOrder

Element = Any

INF = float("inf")
_INF_CODE = 1 << 60


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class AxiomCheck:
    name: str
    status: str  # holds | fails | partially_checked
    counterexample: Optional[tuple]
    checked: int
    skipped: int


@dataclass
class AxiomReport:
    subject: str
    checks: list[AxiomCheck] = field(default_factory=list)
    carrier: Optional[GroupCarrier] = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != "fails" for c in self.checks)

    @property
    def fully_checked(self) -> bool:
        return all(c.status == "holds" for c in self.checks)

    def check(self, name: str) -> AxiomCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def add(self, name: str, counterexample, checked: int, skipped: int) -> AxiomCheck:
        if counterexample is not None:
            status = "fails"
        elif skipped > 0:
            status = "partially_checked"
        else:
            status = "holds"
        c = AxiomCheck(name, status, counterexample, checked, skipped)
        self.checks.append(c)
        return c

    def as_dict(self) -> dict:
        enc = self.carrier.encode if self.carrier is not None else (lambda x: x)
        return {
            "subject": self.subject,
            "ok": self.ok,
            "checks": [
                {
                    "name": c.name,
                    "status": c.status,
                    "counterexample": None
                    if c.counterexample is None
                    else [enc(t) for t in c.counterexample],
                    "checked": c.checked,
                    "skipped": c.skipped,
                }
                for c in self.checks
            ],
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# rank coding (shared comparable integer codes for one sweep)
# ---------------------------------------------------------------------------


class _Coder:
    """Assigns comparable integer codes to exact elements for one sweep.

    Out-of-term-window payloads code to -1 (skipped instance) regardless of
    whether a comparator key could rank them.
    """

    def __init__(self, q: QuasiOrder, policy: WindowPolicy) -> None:
        self.q = q
        self.policy = policy
        self._pending: set = set()
        self._codes: dict = {}

    def add(self, p) -> None:
        if p is not None:
            self._pending.add(p)

    def finalize(self) -> None:
        q, pol = self.q, self.policy
        if q.key_fn is not None:
            keyed = {}
            for p in self._pending:
                if q.carrier.in_window(p, pol.term_radius):
                    keyed[p] = q.key_fn(p)
            order = sorted(set(keyed.values()))
            pos = {k: i for i, k in enumerate(order)}
            self._codes = {p: pos[k] for p, k in keyed.items()}
        else:
            for p in self._pending:
                if q.carrier.in_window(p, pol.term_radius):
                    r = q.rank.get(p)
                    if r is not None:
                        self._codes[p] = r

    def code(self, p) -> int:
        if p is None:
            return -1
        return self._codes.get(p, -1)

    def array(self, payloads) -> np.ndarray:
        return np.array([self.code(p) for p in payloads], dtype=np.int64)

    def matrix(self, rows) -> np.ndarray:
        return np.array([[self.code(p) for p in row] for row in rows], dtype=np.int64)


def _first_true(mask: np.ndarray) -> Optional[tuple]:
    idx = np.argwhere(mask)
    if idx.size == 0:
        return None
    return tuple(int(v) for v in idx[0])


# ---------------------------------------------------------------------------
# valuations
# ---------------------------------------------------------------------------


class Valuation:
    """Map onto an integer-indexed value chain 0..m-1 plus the infinity
    sentinel (reserved for the identity in a valid valuation)."""

    def __init__(
        self,
        carrier: GroupCarrier,
        values: dict,
        gamma_size: int,
        labels: Optional[list] = None,
        val_fn: Optional[Callable[[Element], Any]] = None,
        name: str = "",
    ) -> None:
        self.carrier = carrier
        self.values = dict(values)
        self.gamma_size = gamma_size
        self.labels = labels
        self.val_fn = val_fn
        self.name = name
        for x in carrier.universe:
            if x not in self.values:
                raise InvalidParameterError("valuation is not total on the universe")
        if labels is not None and len(labels) != gamma_size:
            raise InvalidParameterError("labels length must equal the value-set size")

    def value_of(self, x):
        """Value of an exact element; None when undecidable."""
        v = self.values.get(x)
        if v is not None:
            return v
        if self.val_fn is not None:
            return self.val_fn(x)
        return None

    def label_of(self, v) -> str:
        if v == INF:
            return "∞"
        if self.labels is not None:
            return str(self.labels[int(v)])
        return str(v)

    def subgroup_at_least(self, gamma: int) -> list:
        """Elements with value >= gamma (the upper subgroup at gamma)."""
        return [x for x in self.carrier.universe if self.values[x] >= gamma]

    def subgroup_above(self, gamma: int) -> list:
        """Elements with value > gamma (the lower subgroup at gamma)."""
        return [x for x in self.carrier.universe if self.values[x] > gamma]

    def induced_qo(self) -> QuasiOrder:
        """g ≾ h iff v(g) >= v(h)."""

        def key(x, _v=self.value_of):
            val = _v(x)
            if val is None:
                raise DomainError("valuation undecidable outside the window")
            return (0,) if val == INF else (1, -val)

        from .qorder import qo_from_key

        return qo_from_key(self.carrier, key, name=f"qo({self.name or 'v'})")

    def __repr__(self) -> str:
        return f"<Valuation {self.name or 'v'} |Γ|={self.gamma_size} on {self.carrier.name}>"


def trivial_valuation(carrier: GroupCarrier) -> Valuation:
    values = {x: (INF if x == carrier.identity else 0) for x in carrier.universe}
    return Valuation(carrier, values, 1, val_fn=lambda x, _c=carrier: INF if x == _c.identity else 0, name="trivial")


def valuation_from_levels(carrier: GroupCarrier, levels, labels=None, name: str = "") -> Valuation:
    """Levels listed in ascending value order; the identity maps to infinity."""
    values: dict = {carrier.identity: INF}
    for g, lvl in enumerate(levels):
        for x in lvl:
            if x == carrier.identity:
                raise InvalidParameterError("identity cannot carry a finite value")
            values[x] = g
    return Valuation(carrier, values, len(levels), labels=labels, name=name)


def _val_code(v) -> int:
    if v is None:
        return -1
    if v == INF:
        return _INF_CODE
    return int(v)


def check_valuation_axioms(v: Valuation, policy: WindowPolicy) -> AxiomReport:
    """Verify axioms (ii)-(iv) plus the standard consequences: conjugation
    preserves strict inequality and equality of values, and a strictly
    smaller factor fixes the value of the product on both sides."""
    car = v.carrier
    rep = AxiomReport("valuation", carrier=car)

    # (ii) infinity exactly at the identity
    cex = None
    for x in car.universe:
        val = v.values[x]
        if (x == car.identity) != (val == INF):
            cex = (x,)
            break
    rep.add("V2", cex, len(car.universe), 0)

    ev = car.eval_universe(policy)
    n = len(ev)
    term_r = policy.term_radius

    def vc(p) -> int:
        if not car.in_window(p, term_r):
            return -1
        return _val_code(v.value_of(p))

    V = np.array([_val_code(v.values[x]) for x in ev], dtype=np.int64)
    inv = [car.inv(x) for x in ev]
    # (iii) v(g h^-1) >= min(v(g), v(h))
    D = np.array([[vc(car.op(g, hi)) for hi in inv] for g in ev], dtype=np.int64)
    valid = D >= 0
    viol = valid & (D < np.minimum(V[:, None], V[None, :]))
    w = _first_true(viol)
    rep.add("V3", None if w is None else (ev[w[0]], ev[w[1]]), int(valid.sum()), n * n - int(valid.sum()))

    # (iv) v(g) <= v(h) implies v(g^z) <= v(h^z); plus strict/equality forms
    checked4 = skipped4 = 0
    cex4 = cexa = None
    checkeda = skippeda = 0
    for zi, z in enumerate(ev):
        CZ = np.array([vc(car.conjugate(x, z)) for x in ev], dtype=np.int64)
        ok = CZ >= 0
        pair_ok = ok[:, None] & ok[None, :]
        c = int(pair_ok.sum())
        checked4 += c
        skipped4 += n * n - c
        checkeda += c
        skippeda += n * n - c
        if cex4 is None:
            m = pair_ok & (V[:, None] <= V[None, :]) & (CZ[:, None] > CZ[None, :])
            w = _first_true(m)
            if w is not None:
                cex4 = (ev[w[0]], ev[w[1]], z)
        if cexa is None:
            strict = pair_ok & (V[:, None] < V[None, :]) & ~(CZ[:, None] < CZ[None, :])
            equal = pair_ok & (V[:, None] == V[None, :]) & (CZ[:, None] != CZ[None, :])
            w = _first_true(strict | equal)
            if w is not None:
                cexa = (ev[w[0]], ev[w[1]], z)
    rep.add("V4", cex4, checked4, skipped4)
    rep.add("V4-strict", cexa, checkeda, skippeda)

    # smaller factor wins: v(g) < v(h) implies v(gh) = v(g) = v(hg)
    GH = np.array([[vc(car.op(g, h)) for h in ev] for g in ev], dtype=np.int64)
    HG = GH.T if car.is_abelian else np.array(
        [[vc(car.op(h, g)) for h in ev] for g in ev], dtype=np.int64
    )
    ok = (GH >= 0) & (HG >= 0)
    lt = V[:, None] < V[None, :]
    viol = ok & lt & ((GH != V[:, None]) | (HG != V[:, None]))
    w = _first_true(viol)
    rep.add("V-dominant-factor", None if w is None else (ev[w[0]], ev[w[1]]), int(ok.sum()), n * n - int(ok.sum()))
    return rep


# ---------------------------------------------------------------------------
# C-relations
# ---------------------------------------------------------------------------


class CRelation:
    """Ternary relation on a carrier, derived lazily from a quasi-order,
    a total order, a valuation, or an explicit predicate."""

    def __init__(
        self,
        carrier: GroupCarrier,
        source: str,
        qo: Optional[QuasiOrder] = None,
        order: Optional[TotalOrder] = None,
        valuation: Optional[Valuation] = None,
        predicate: Optional[Callable[[Element, Element, Element], bool]] = None,
        name: str = "",
    ) -> None:
        if source not in ("qo", "order", "valuation", "predicate"):
            raise InvalidParameterError(f"unknown C-relation source {source!r}")
        self.carrier = carrier
        self.source = source
        self.qo = qo
        self.order = order
        self.valuation = valuation
        self.predicate = predicate
        self.name = name

    # -- evaluation ----------------------------------------------------------
    def holds_or_none(self, x, y, z) -> Optional[bool]:
        car = self.carrier
        if self.source == "qo":
            zi = car.inv(z)
            c = self.qo.cmp(car.op(y, zi), car.op(x, zi))
            return None if c is None else c < 0
        if self.source == "order":
            if y == z:
                return x != y
            cy, cz = self.order.cmp(y, x), self.order.cmp(z, x)
            if cy is None or cz is None:
                return None
            return cy < 0 and cz < 0
        if self.source == "valuation":
            zi = car.inv(z)
            vy = self.valuation.value_of(car.op(y, zi))
            vx = self.valuation.value_of(car.op(x, zi))
            if vy is None or vx is None:
                return None
            return vy > vx
        return bool(self.predicate(x, y, z))

    def holds(self, x, y, z) -> bool:
        r = self.holds_or_none(x, y, z)
        if r is None:
            raise DomainError("C-relation undecidable on this triple")
        return r

    # -- tensors ---------------------------------------------------------------
    def tensor(self, elems, policy: WindowPolicy) -> tuple[np.ndarray, np.ndarray]:
        """(truth, valid) boolean tensors of the relation over elems^3."""
        n = len(elems)
        car = self.carrier
        if self.source == "qo":
            coder = _Coder(self.qo, policy)
            inv = [car.inv(x) for x in elems]
            prods = [[car.op(a, bi) for bi in inv] for a in elems]
            for row in prods:
                for p in row:
                    coder.add(p)
            coder.finalize()
            D = coder.matrix(prods)
            valid = (D[None, :, :] >= 0) & (D[:, None, :] >= 0)
            truth = (D[None, :, :] < D[:, None, :]) & valid
            return truth, valid
        if self.source == "order":
            codes = []
            for x in elems:
                c = self.order.position.get(x)
                codes.append(-1 if c is None else c)
            P = np.array(codes, dtype=np.int64)
            valid = (P[:, None, None] >= 0) & (P[None, :, None] >= 0) & (P[None, None, :] >= 0)
            less_yx = P[None, :, None] < P[:, None, None]
            less_zx = P[None, None, :] < P[:, None, None]
            eq_yz = np.arange(n)[None, :, None] == np.arange(n)[None, None, :]
            neq_xy = np.arange(n)[:, None, None] != np.arange(n)[None, :, None]
            truth = ((less_yx & less_zx) | (eq_yz & neq_xy)) & valid
            return truth, valid
        if self.source == "valuation":
            inv = [car.inv(x) for x in elems]

            def vc(p):
                if not car.in_window(p, policy.term_radius):
                    return -1
                return _val_code(self.valuation.value_of(p))

            D = np.array([[vc(car.op(a, bi)) for bi in inv] for a in elems], dtype=np.int64)
            valid = (D[None, :, :] >= 0) & (D[:, None, :] >= 0)
            truth = (D[None, :, :] > D[:, None, :]) & valid
            return truth, valid
        if n ** 3 > 1 << 24:
            raise InvalidParameterError("predicate relation too large to tabulate")
        truth = np.zeros((n, n, n), dtype=bool)
        for i, x in enumerate(elems):
            for j, y in enumerate(elems):
                for k, z in enumerate(elems):
                    truth[i, j, k] = bool(self.predicate(x, y, z))
        return truth, np.ones((n, n, n), dtype=bool)

    def equals(self, other: "CRelation", policy: WindowPolicy) -> tuple[bool, Optional[tuple]]:
        """Pointwise comparison over eval-window triples where both sides are
        decidable; returns (equal, first differing triple)."""
        ev = self.carrier.eval_universe(policy)
        t1, v1 = self.tensor(ev, policy)
        t2, v2 = other.tensor(ev, policy)
        both = v1 & v2
        diff = both & (t1 != t2)
        w = _first_true(diff)
        if w is None:
            return True, None
        return False, (ev[w[0]], ev[w[1]], ev[w[2]])

    def __repr__(self) -> str:
        return f"<CRelation {self.name or self.source} on {self.carrier.name}>"


# -- constructors ---------------------------------------------------------------


def crel_from_order(order: TotalOrder, name: str = "") -> CRelation:
    """C(x,y,z) iff (y<x and z<x) or (y=z≠x)."""
    return CRelation(order.carrier, "order", order=order, name=name or "order-type")


def crel_from_valuation(v: Valuation, name: str = "") -> CRelation:
    """C(x,y,z) iff v(y z^-1) > v(x z^-1)."""
    return CRelation(v.carrier, "valuation", valuation=v, name=name or "valuational")


def crel_from_qo(q: QuasiOrder, name: str = "") -> CRelation:
    """The unique compatible C-relation inducing q: C(x,y,z) iff yz^-1 ≺ xz^-1."""
    return CRelation(q.carrier, "qo", qo=q, name=name or (q.name and f"C({q.name})") or "C")


def qo_from_crel(C: CRelation, name: str = "") -> QuasiOrder:
    """Materialize the quasi-order x ≾ y iff not C(x,y,1) over the universe."""
    car = C.carrier
    if C.source == "qo":
        return QuasiOrder(
            car, dict(C.qo.rank), key_fn=C.qo.key_fn,
            closed_forms=dict(C.qo.closed_forms), name=name or C.qo.name,
        )
    one = car.identity
    n = len(car.universe)
    leq = [[False] * n for _ in range(n)]
    for i, x in enumerate(car.universe):
        for j, y in enumerate(car.universe):
            h = C.holds_or_none(x, y, one)
            if h is None:
                raise DomainError("relation undecidable on universe pairs at z=1")
            leq[i][j] = not h
    # rank = number of strictly-below classes; verify total/transitive afterwards
    import functools

    def cmp_idx(i: int, j: int) -> int:
        if leq[i][j] and leq[j][i]:
            return 0
        if leq[i][j]:
            return -1
        if leq[j][i]:
            return 1
        raise DomainError("induced relation is not total; not a compatible C-relation")

    order = sorted(range(n), key=functools.cmp_to_key(cmp_idx))
    rank: dict = {}
    r = 0
    for pos, i in enumerate(order):
        if pos > 0 and cmp_idx(order[pos - 1], i) != 0:
            r += 1
        rank[car.universe[i]] = r
    for i in range(n):
        for j in range(n):
            ri, rj = rank[car.universe[i]], rank[car.universe[j]]
            if leq[i][j] != (ri <= rj):
                raise DomainError("induced relation is not a total quasi-order")
    key_fn = None
    if C.source == "order":
        okey = C.order.key_fn
        if okey is not None:
            one_key = okey(one)

            def key_fn(x, _k=okey, _ok=one_key, _one=one):
                if x == _one:
                    return (0,)
                kx = _k(x)
                return (1,) if kx < _ok else (2, kx)

    elif C.source == "valuation" and C.valuation.val_fn is not None:

        def key_fn(x, _v=C.valuation.val_fn):
            val = _v(x)
            return (0,) if val == INF else (1, -val)

    return QuasiOrder(car, rank, key_fn=key_fn, name=name or f"qo({C.name})")


# ---------------------------------------------------------------------------
# axiom sweeps
# ---------------------------------------------------------------------------


def check_c_axioms(C: CRelation, policy: WindowPolicy) -> AxiomReport:
    """C1, C2, C4 over eval-window triples and C3 over quadruples."""
    car = C.carrier
    ev = car.eval_universe(policy)
    n = len(ev)
    rep = AxiomReport("c-relation", carrier=car)
    truth, valid = C.tensor(ev, policy)

    v1 = valid & valid.transpose(0, 2, 1)
    m = truth & ~truth.transpose(0, 2, 1) & v1
    w = _first_true(m)
    rep.add("C1", None if w is None else (ev[w[0]], ev[w[1]], ev[w[2]]), int(v1.sum()), n ** 3 - int(v1.sum()))

    v2 = valid & valid.transpose(1, 0, 2)
    m = truth & truth.transpose(1, 0, 2) & v2
    w = _first_true(m)
    rep.add("C2", None if w is None else (ev[w[0]], ev[w[1]], ev[w[2]]), int(v2.sum()), n ** 3 - int(v2.sum()))

    checked3 = 0
    cex3 = None
    for wi in range(n):
        v3 = valid & valid[wi, :, :][None, :, :] & valid[:, wi, :][:, None, :]
        checked3 += int(v3.sum())
        if cex3 is None:
            m = truth & ~truth[wi, :, :][None, :, :] & ~truth[:, wi, :][:, None, :] & v3
            hit = _first_true(m)
            if hit is not None:
                cand = (hit[0], hit[1], hit[2], wi)
                if cex3 is None or cand < cex3:
                    cex3 = cand
    rep.add(
        "C3",
        None if cex3 is None else tuple(ev[i] for i in cex3),
        checked3,
        n ** 4 - checked3,
    )

    diag = np.arange(n)
    c4 = truth[:, diag, diag]  # C(x,y,y)
    v4 = valid[:, diag, diag]
    neq = np.arange(n)[:, None] != np.arange(n)[None, :]
    m = neq & ~c4 & v4
    w = _first_true(m)
    rep.add("C4", None if w is None else (ev[w[0]], ev[w[1]]), int(v4.sum()), n * n - int(v4.sum()))
    return rep


def check_compatibility(C: CRelation, policy: WindowPolicy) -> AxiomReport:
    """C(x,y,z) implies C(vxu, vyu, vzu), swept over eval-window 5-tuples.

    Pairs (u,v) inducing the same translation x ↦ vxu are checked once; the
    instance counts still range over all 5-tuples.
    """
    car = C.carrier
    ev = car.eval_universe(policy)
    n = len(ev)
    rep = AxiomReport("compatibility", carrier=car)
    truth, valid = C.tensor(ev, policy)
    term_r = policy.term_radius

    maps: dict[tuple, list] = {}
    for vi, v in enumerate(ev):
        left = [car.op(v, x) for x in ev]
        for ui, u in enumerate(ev):
            m = tuple(car.op(lx, u) for lx in left)
            entry = maps.get(m)
            if entry is None:
                maps[m] = [1, (ui, vi)]
            else:
                entry[0] += 1

    checked = 0
    cex = None
    for m, (mult, (ui, vi)) in maps.items():
        W = np.array([car.in_window(p, term_r) for p in m], dtype=bool)
        mt, mv = _mapped_tensor(C, m, policy)
        v5 = (
            W[:, None, None] & W[None, :, None] & W[None, None, :]
            & mv[:, None, :] & mv[None, :, :] & valid
        )
        checked += mult * int(v5.sum())
        if cex is None:
            bad = truth & v5 & ~mt
            hit = _first_true(bad)
            if hit is not None:
                cex = (ev[hit[0]], ev[hit[1]], ev[hit[2]], ev[ui], ev[vi])
    total = n ** 5
    rep.add("compatibility", cex, checked, total - checked)
    return rep


def _mapped_tensor(C: CRelation, mapped, policy: WindowPolicy):
    """(truth tensor, pairwise-valid matrix) of C on a translated element
    tuple; the valid matrix is indexed (a, z) for the pair a·z^-1."""
    car = C.carrier
    n = len(mapped)
    if C.source == "qo":
        coder = _Coder(C.qo, policy)
        inv = [car.inv(p) for p in mapped]
        prods = [[car.op(a, bi) for bi in inv] for a in mapped]
        for row in prods:
            for p in row:
                coder.add(p)
        coder.finalize()
        D = coder.matrix(prods)
        mv = D >= 0
        mt = (D[None, :, :] < D[:, None, :]) & mv[None, :, :] & mv[:, None, :]
        return mt, mv
    if C.source == "valuation":
        inv = [car.inv(p) for p in mapped]

        def vc(p):
            if not car.in_window(p, policy.term_radius):
                return -1
            return _val_code(C.valuation.value_of(p))

        D = np.array([[vc(car.op(a, bi)) for bi in inv] for a in mapped], dtype=np.int64)
        mv = D >= 0
        mt = (D[None, :, :] > D[:, None, :]) & mv[None, :, :] & mv[:, None, :]
        return mt, mv
    if C.source == "order":
        order = C.order
        if order.key_fn is not None:
            inside = [p for p in mapped if car.in_window(p, policy.term_radius)]
            keys = sorted({order.key_fn(p) for p in inside})
            kpos = {k: i for i, k in enumerate(keys)}

            def pcode(p):
                if not car.in_window(p, policy.term_radius):
                    return -1
                return kpos[order.key_fn(p)]

        else:

            def pcode(p):
                if not car.in_window(p, policy.term_radius):
                    return -1
                c = order.position.get(p)
                return -1 if c is None else c

        P = np.array([pcode(p) for p in mapped], dtype=np.int64)
        ok = P >= 0
        mv = ok[:, None] & ok[None, :]
        eye = np.eye(n, dtype=bool)
        less_yx = P[None, :, None] < P[:, None, None]
        less_zx = P[None, None, :] < P[:, None, None]
        mt = (less_yx & less_zx) | (eye[None, :, :] & ~eye[:, :, None])
        mt &= ok[:, None, None] & ok[None, :, None] & ok[None, None, :]
        return mt, mv
    mt = np.zeros((n, n, n), dtype=bool)
    for i, x in enumerate(mapped):
        for j, y in enumerate(mapped):
            for k, z in enumerate(mapped):
                mt[i, j, k] = bool(C.predicate(x, y, z))
    return mt, np.ones((n, n), dtype=bool)


# ---------------------------------------------------------------------------
# density, order axiom
# ---------------------------------------------------------------------------


@dataclass
class DensityResult:
    dense: bool
    witness: Optional[tuple]
    window_limited: bool


def is_dense(C: CRelation, policy: WindowPolicy) -> DensityResult:
    """Both density axioms over the window: every distinct pair admits a
    third point branching below, and the universe is non-trivial."""
    car = C.carrier
    if len(car.universe) < 2:
        return DensityResult(False, None, False)
    ev = car.eval_universe(policy)
    n = len(ev)
    truth, valid = C.tensor(ev, policy)
    zneq = np.arange(n)[None, None, :] != np.arange(n)[None, :, None]
    found = (truth & zneq).any(axis=2)
    xy_neq = np.arange(n)[:, None] != np.arange(n)[None, :]
    missing = xy_neq & ~found
    w = _first_true(missing)
    windowed = car.window_radius is not None
    if w is None:
        return DensityResult(True, None, False)
    return DensityResult(False, (ev[w[0]], ev[w[1]]), windowed)


def check_og(order: TotalOrder, policy: WindowPolicy) -> AxiomReport:
    """Translation invariance of a total order on both sides."""
    car = order.carrier
    ev = car.eval_universe(policy)
    n = len(ev)
    rep = AxiomReport("ordered-group", carrier=car)

    def code(p) -> int:
        if not car.in_window(p, policy.term_radius):
            return -1
        c = order.position.get(p)
        return -1 if c is None else c

    if order.key_fn is not None:
        prods = [[car.op(a, b) for b in ev] for a in ev]
        keys = sorted({order.key_fn(p) for row in prods for p in row if car.in_window(p, policy.term_radius)}
                      | {order.key_fn(x) for x in ev})
        pos = {k: i for i, k in enumerate(keys)}

        def pcode(p):
            if not car.in_window(p, policy.term_radius):
                return -1
            return pos[order.key_fn(p)]

        PP = np.array([[pcode(p) for p in row] for row in prods], dtype=np.int64)
        P = np.array([pcode(x) for x in ev], dtype=np.int64)
    else:
        PP = np.array([[code(car.op(a, b)) for b in ev] for a in ev], dtype=np.int64)
        P = np.array([code(x) for x in ev], dtype=np.int64)

    checked = 0
    cex = None
    le = P[:, None] <= P[None, :]
    for zi in range(n):
        r = PP[:, zi]
        l = PP[zi, :]
        ok = (r[:, None] >= 0) & (r[None, :] >= 0) & (l[:, None] >= 0) & (l[None, :] >= 0)
        checked += int(ok.sum())
        if cex is None:
            m = le & ok & ((r[:, None] > r[None, :]) | (l[:, None] > l[None, :]))
            w = _first_true(m)
            if w is not None:
                cex = (ev[w[0]], ev[w[1]], ev[zi])
    rep.add("OG", cex, checked, n ** 3 - checked)
    return rep
