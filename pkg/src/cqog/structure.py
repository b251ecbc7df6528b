"""Type-components, their subgroup pairs, quotient quasi-orders, lifting,
welding, and the decompose/reconstruct round trip.

Components are computed from the level structure: a level never mixes
element types except where an o-minus class is welded to a v-class, so
o-components are maximal runs of pure o-plus levels together with the
o-minus part of the level just below, and v-components are the v-elements
of maximal runs free of o-plus levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .carrier import (
    DomainError,
    GroupCarrier,
    InternalConsistencyError,
    InvalidParameterError,
    QuotientCarrier,
    WindowPolicy,
)
from .classify import (
    ElementaryKind,
    ElementType,
    TypeReport,
    element_type,
    elementary_kind,
    type_report,
)
from .crel import INF, AxiomReport, CRelation, Valuation
from .qorder import QuasiOrder, coarsen, is_coarsening, qo_from_key

Element = Any

_VERIFY_BUDGET = 2_000_000


# ---------------------------------------------------------------------------
# type-components
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TypeComponent:
    anchor: Element
    kind: str  # identity_component | v_component | o_component
    members: frozenset
    plus: Optional[frozenset]
    minus: Optional[frozenset]
    level_range: tuple
    complement: tuple  # convexity complement within the window

    def sort_key(self) -> tuple:
        return (self.level_range[1], self.level_range[0])


def components_partition(q: QuasiOrder, report: Optional[TypeReport] = None) -> list[TypeComponent]:
    """All type-components, in ascending component order (identity first)."""
    cached = getattr(q, "_cqog_components", None)
    if cached is not None:
        return cached
    tr = report or type_report(q)
    car = q.carrier
    one = car.identity
    L = q.level_count
    lvl_types = [frozenset(tr.types[x] for x in lvl) for lvl in q.levels]
    for ell, ts in enumerate(lvl_types):
        if ElementType.O_PLUS in ts and len(ts) > 1:
            raise InternalConsistencyError(
                f"level {ell} mixes o-plus with other types"
            )
    if q.rank[one] != 0 or len(q.levels[0]) != 1:
        raise DomainError("identity is not strictly minimal; not a C-quasi-order")

    comps: list[TypeComponent] = [
        TypeComponent(one, "identity_component", frozenset([one]), None, None, (0, 0), ())
    ]
    key = car.index.__getitem__

    # o-components: maximal runs of pure o-plus levels plus the o-minus part
    # of the level immediately below.
    ell = 1
    while ell < L:
        if lvl_types[ell] == frozenset([ElementType.O_PLUS]):
            j = ell
            while j + 1 < L and lvl_types[j + 1] == frozenset([ElementType.O_PLUS]):
                j += 1
            below = ell - 1
            minus = frozenset(
                x for x in q.levels[below] if tr.types[x] is ElementType.O_MINUS
            )
            if not minus:
                raise InternalConsistencyError(
                    f"o-plus run at levels {ell}..{j} has no o-minus class below "
                    "(window truncation)"
                )
            plus = frozenset(x for r in range(ell, j + 1) for x in q.levels[r])
            members = plus | minus
            comp_f = tuple(
                sorted(
                    (x for x in q.levels[below] if tr.types[x] is ElementType.V_TYPE),
                    key=key,
                )
            )
            anchor = min(members, key=key)
            comps.append(
                TypeComponent(anchor, "o_component", members, plus, minus, (below, j), comp_f)
            )
            ell = j + 1
        else:
            ell += 1

    # v-components: v-elements of maximal runs of levels containing no o-plus
    # level (the identity level bounds runs from below).
    ell = 1
    while ell < L:
        if ElementType.O_PLUS in lvl_types[ell]:
            ell += 1
            continue
        j = ell
        while j + 1 < L and ElementType.O_PLUS not in lvl_types[j + 1]:
            j += 1
        vmem = [
            x
            for r in range(ell, j + 1)
            for x in q.levels[r]
            if tr.types[x] is ElementType.V_TYPE
        ]
        if vmem:
            ranks = [q.rank[x] for x in vmem]
            top = max(ranks)
            comp_f = tuple(
                sorted(
                    (x for x in q.levels[top] if tr.types[x] is ElementType.O_MINUS),
                    key=key,
                )
            )
            anchor = min(vmem, key=key)
            comps.append(
                TypeComponent(
                    anchor,
                    "v_component",
                    frozenset(vmem),
                    None,
                    None,
                    (min(ranks), top),
                    comp_f,
                )
            )
        ell = j + 1

    comps.sort(key=TypeComponent.sort_key)
    assigned = 0
    for c in comps:
        assigned += len(c.members)
    if assigned != len(car.universe):
        raise InternalConsistencyError("type-components do not partition the universe")
    for a, b in zip(comps, comps[1:]):
        if a.level_range[1] > b.level_range[0]:
            raise InternalConsistencyError("component order is not total")
    q._cqog_components = comps
    return comps


def type_component(q: QuasiOrder, g: Element) -> TypeComponent:
    for comp in components_partition(q):
        if g in comp.members:
            return comp
    raise DomainError(f"{q.carrier.label(g)} not in any component")


def component_order(components: list[TypeComponent]) -> list[TypeComponent]:
    """Components sorted ascending; verifies the order is total."""
    comps = sorted(components, key=TypeComponent.sort_key)
    for a, b in zip(comps, comps[1:]):
        if a.level_range[1] > b.level_range[0]:
            raise InternalConsistencyError("component order is not total")
    return comps


# ---------------------------------------------------------------------------
# the subgroups attached to a component
# ---------------------------------------------------------------------------


@dataclass
class SubgroupPair:
    lower: frozenset  # everything strictly below the component, plus identity
    upper: frozenset  # lower together with the component
    closure_ok: bool
    normal_ok: bool
    fully_verified: bool
    violations: list


def _gamma_sets(comps_asc: list[TypeComponent], position: int) -> tuple[frozenset, frozenset]:
    lower = frozenset().union(*(c.members for c in comps_asc[:position]))
    upper = lower | comps_asc[position].members
    return lower, upper


def component_subgroups(
    q: QuasiOrder, g: Element, policy: Optional[WindowPolicy] = None
) -> SubgroupPair:
    comps = components_partition(q)
    pos = next(i for i, c in enumerate(comps) if g in c.members)
    if comps[pos].kind == "identity_component":
        one = frozenset([q.carrier.identity])
        return SubgroupPair(one, one, True, True, True, [])
    lower, upper = _gamma_sets(comps, pos)
    ok_c, ok_n, full, viols = _verify_subgroup(q.carrier, lower, upper)
    return SubgroupPair(lower, upper, ok_c, ok_n, full, viols)


def _verify_subgroup(car: GroupCarrier, H: frozenset, ambient: frozenset):
    """Window-checked closure of H and ambient, and normality of H in the
    ambient; out-of-window products are skipped, budget overruns sampled."""
    violations = []
    h_list = sorted(H, key=car.index.__getitem__)
    a_list = sorted(ambient, key=car.index.__getitem__)

    def cap(xs, other_len):
        if len(xs) * other_len <= _VERIFY_BUDGET:
            return xs, True
        k = max(1, _VERIFY_BUDGET // max(other_len, 1))
        step = max(1, len(xs) // k)
        return xs[::step], False

    full = True
    hs, f = cap(h_list, len(h_list))
    full &= f
    closure_ok = True
    for a in hs:
        for b in hs:
            p = car.op(a, car.inv(b))
            if car.contains(p) and p not in H:
                closure_ok = False
                violations.append(("closure", a, b, p))
                break
        if not closure_ok:
            break
    amb, f = cap(a_list, len(h_list))
    full &= f
    normal_ok = True
    for z in amb:
        for h in hs:
            p = car.conjugate(h, z)
            if car.contains(p) and p not in H:
                normal_ok = False
                violations.append(("normality", h, z, p))
                break
        if not normal_ok:
            break
    return closure_ok, normal_ok, full, violations


# ---------------------------------------------------------------------------
# quotient quasi-orders
# ---------------------------------------------------------------------------


def quotient_qo(
    q: QuasiOrder,
    H,
    domain=None,
    member_fn: Optional[Callable[[Element], Optional[bool]]] = None,
    policy: Optional[WindowPolicy] = None,
    verify: bool = True,
    name: str = "",
) -> QuasiOrder:
    """Quasi-order induced on the coset space of a strictly convex normal
    subgroup: gH ≾ hH iff g is in H, or h is outside H and g ≾ h."""
    car = q.carrier
    Hset = frozenset(H)
    if verify:
        amb = frozenset(domain) if domain is not None else frozenset(car.universe)
        ok_c, ok_n, _full, viols = _verify_subgroup(car, Hset, amb)
        if not ok_c:
            raise DomainError(f"not a subgroup: {viols[0]}")
        if not ok_n:
            raise DomainError(f"not normal: {viols[0]}")
        cls = q.classify_strict_convex(Hset)
        if cls.case == "not_strictly_convex":
            raise DomainError(f"not strictly convex: witness {cls.witness}")

    members = sorted(Hset, key=car.index.__getitem__)
    if domain is None:
        dom = list(car.universe)
    else:
        dom = sorted(domain, key=car.index.__getitem__)

    def member(p) -> Optional[bool]:
        if p in Hset:
            return True
        if car.contains(p):
            return False
        if member_fn is not None:
            return member_fn(p)
        return None

    id_rep = members[0]
    assignment: dict = {}
    notes = []
    reps_by_level: dict[int, list] = {}
    for g in dom:
        if g in Hset:
            assignment[g] = id_rep
            continue
        lvl = q.rank[g]
        reps = reps_by_level.setdefault(lvl, [])
        for r in reps:
            d = car.op(car.inv(r), g)
            m = member(d)
            if m:
                assignment[g] = r
                break
            if m is None and not notes:
                notes.append("window-incomplete: coset membership undecidable for some pairs")
        else:
            reps.append(g)
            assignment[g] = g

    qc = QuotientCarrier(car, Hset, assignment, member_fn=member, name=name or f"{car.name}/H")
    qc.window_incomplete = bool(notes)

    ranks: dict = {id_rep: 0}
    others = sorted((r for r in qc.universe if r != id_rep), key=lambda r: q.rank[r])
    rr = 0
    prev = None
    for r in others:
        if prev is not None and q.rank[r] != prev:
            rr += 1
        elif prev is None:
            rr = 1
        ranks[r] = rr
        prev = q.rank[r]

    key_fn = None
    if q.key_fn is not None:
        base = q.key_fn

        def key_fn(x, _b=base, _m=member):
            inside = _m(x)
            if inside is None:
                raise DomainError("coset key undecidable outside the window")
            return (0,) if inside else (1, _b(x))

    return QuasiOrder(qc, ranks, key_fn=key_fn, name=name or f"{q.name}/H")


# ---------------------------------------------------------------------------
# type-valuation
# ---------------------------------------------------------------------------


def type_valuation(q: QuasiOrder) -> Valuation:
    """Valuation whose fibers are the type-components, valued by reversed
    component order (topmost component = 0, identity = infinity)."""
    comps = components_partition(q)
    gamma_comps = [c for c in reversed(comps) if c.kind != "identity_component"]
    car = q.carrier
    values: dict = {car.identity: INF}
    for g, comp in enumerate(gamma_comps):
        for x in comp.members:
            values[x] = g
    labels = [_component_label(q, c) for c in gamma_comps]
    val_fn = _component_val_fn(q, gamma_comps)
    return Valuation(car, values, max(1, len(gamma_comps)), labels=labels, val_fn=val_fn, name=f"tv({q.name})")


def _component_label(q: QuasiOrder, comp: TypeComponent) -> str:
    cf = q.closed_forms.get("component_of")
    if cf is not None:
        return str(cf(comp.anchor))
    return f"T[{q.carrier.label(comp.anchor)}]"


def _component_val_fn(q: QuasiOrder, gamma_comps: list[TypeComponent]):
    cf = q.closed_forms.get("component_of")
    if cf is None:
        return None
    key_to_gamma: dict = {}
    for g, comp in enumerate(gamma_comps):
        keys = {cf(x) for x in comp.members}
        if len(keys) != 1:
            raise InternalConsistencyError(
                f"closed-form component id disagrees on {q.carrier.label(comp.anchor)}"
            )
        key_to_gamma[keys.pop()] = g
    one = q.carrier.identity
    id_key = cf(one)

    def val_fn(x, _cf=cf, _m=key_to_gamma, _ik=id_key):
        k = _cf(x)
        if k == _ik:
            return INF
        return _m.get(k)

    return val_fn


# ---------------------------------------------------------------------------
# lifting
# ---------------------------------------------------------------------------


def lift_from_tables(
    carrier: GroupCarrier,
    gamma_of: Callable[[Element], Any],
    fiber_rank_of: Callable[[Element], int],
    key_fn=None,
    name: str = "",
) -> QuasiOrder:
    """Materialize the lift: g ≾ h iff v(g) > v(h), or the values agree and
    the fiber ranks compare."""

    def key(x):
        g = gamma_of(x)
        if g == INF:
            return (0,)
        return (1, -g, fiber_rank_of(x))

    keys = sorted({key(x) for x in carrier.universe})
    pos = {k: i for i, k in enumerate(keys)}
    rank = {x: pos[key(x)] for x in carrier.universe}
    return QuasiOrder(carrier, rank, key_fn=key_fn, name=name)


def lift(
    v: Valuation,
    fibers: dict,
    policy: Optional[WindowPolicy] = None,
    check: bool = True,
    name: str = "",
) -> QuasiOrder:
    """Lift fiber quasi-orders through a valuation.

    ``fibers`` maps each finite value to a quasi-order on the corresponding
    quotient carrier (a :class:`QuotientCarrier` whose assignment covers the
    upper subgroup at that value).
    """
    car = v.carrier
    if check and policy is not None:
        _check_lift_hypothesis(v, fibers, policy)

    def gamma_of(x):
        return v.values[x]

    def fiber_rank_of(x):
        g = v.values[x]
        fq = fibers[g]
        rep = fq.carrier.assignment.get(x)
        if rep is None:
            raise InternalConsistencyError(
                f"{car.label(x)} not covered by the fiber at value {g}"
            )
        return fq.rank[rep]

    key_fn = None
    if v.val_fn is not None and all(fq.key_fn is not None for fq in fibers.values()):
        vf = v.val_fn
        fiber_keys = {g: fq.key_fn for g, fq in fibers.items()}

        def key_fn(x, _vf=vf, _fk=fiber_keys):
            g = _vf(x)
            if g == INF:
                return (0,)
            if g is None or g not in _fk:
                raise DomainError("lift key undecidable outside the window")
            return (1, -g, _fk[g](x))

    return lift_from_tables(car, gamma_of, fiber_rank_of, key_fn=key_fn, name=name or f"lift({v.name})")


def _check_lift_hypothesis(v: Valuation, fibers: dict, policy: WindowPolicy) -> None:
    """Conjugation must carry fibers to fibers preserving their quasi-orders."""
    car = v.carrier
    if car.is_abelian:
        return
    ev = car.eval_universe(policy)
    for g, fq in sorted(fibers.items()):
        reps = [r for r in fq.carrier.universe if r != fq.carrier.identity]
        reps = reps[:40]
        for z in ev:
            pairs = []
            for r in reps:
                c = car.conjugate(r, z)
                val = v.value_of(c)
                if val is None:
                    continue
                pairs.append((r, c, val))
            for i, (r1, c1, v1) in enumerate(pairs):
                for r2, c2, v2 in pairs[i + 1 :]:
                    if v1 != v2 or v1 not in fibers:
                        continue
                    fq2 = fibers[v1]
                    t1 = fq2.carrier.canonical(c1)
                    t2 = fq2.carrier.canonical(c2)
                    a = fq.rank[fq.carrier.canonical(r1)] - fq.rank[fq.carrier.canonical(r2)]
                    b1, b2 = fq2.rank.get(t1), fq2.rank.get(t2)
                    if b1 is None or b2 is None:
                        continue
                    if (a > 0) != (b1 > b2) or (a == 0) != (b1 == b2):
                        raise DomainError(
                            f"conjugation by {car.label(z)} does not preserve the fiber at {g}: "
                            f"({car.label(r1)}, {car.label(r2)})"
                        )


def semidirect_lift(
    qG: QuasiOrder,
    qH: QuasiOrder,
    carrier: GroupCarrier,
    policy: Optional[WindowPolicy] = None,
    check: bool = True,
    name: str = "",
) -> QuasiOrder:
    """Quasi-order on a semidirect product: compare left parts, and right
    parts only over the identity of the left factor."""
    left, right = carrier.left, carrier.right
    if qG.carrier is not left or qH.carrier is not right:
        raise InvalidParameterError("fiber quasi-orders must live on the product factors")
    if check and policy is not None:
        evL = left.eval_universe(policy)
        evR = right.eval_universe(policy)
        for g in evL:
            phi = carrier.action(g)
            for i, h1 in enumerate(evR):
                for h2 in evR[i + 1 :]:
                    c = qH.cmp(h1, h2)
                    c2 = qH.cmp(phi(h1), phi(h2))
                    if c is None or c2 is None:
                        continue
                    if c != c2:
                        raise DomainError(
                            f"action of {left.label(g)} does not preserve the right quasi-order "
                            f"at ({right.label(h1)}, {right.label(h2)})"
                        )

    one_l = left.identity

    def base_key(x):
        g, h = x
        if g == one_l:
            return (0, qH.rank[h])
        return (1, qG.rank[g])

    key_fn = None
    if qG.key_fn is not None and qH.key_fn is not None:
        kg, kh = qG.key_fn, qH.key_fn

        def key_fn(x, _kg=kg, _kh=kh, _one=one_l):
            g, h = x
            if g == _one:
                return (0, _kh(h))
            return (1, _kg(g))

    keys = sorted({base_key(x) for x in carrier.universe})
    pos = {k: i for i, k in enumerate(keys)}
    rank = {x: pos[base_key(x)] for x in carrier.universe}
    return QuasiOrder(carrier, rank, key_fn=key_fn, name=name or "semidirect-lift")


# ---------------------------------------------------------------------------
# welding
# ---------------------------------------------------------------------------


def weld(q: QuasiOrder, g: Element, policy: WindowPolicy) -> QuasiOrder:
    """Coarsen by merging the class of every window conjugate of g with the
    maximum of its lower subgroup; idempotent where they already meet."""
    t = element_type(q, g)
    if t is not ElementType.O_MINUS:
        raise DomainError(f"{q.carrier.label(g)} is not o-minus-type")
    car = q.carrier
    conjugators = [car.identity] if car.is_abelian else car.eval_universe(policy)
    tr = type_report(q)
    merges = set()
    for z in conjugators:
        gz = car.conjugate(g, z)
        lvl = q.rank.get(gz)
        if lvl is None:
            continue
        if any(tr.types[x] is ElementType.V_TYPE for x in q.levels[lvl]):
            continue  # maximum already sits in the class of gz
        if lvl - 1 <= 0:
            raise DomainError(
                "welding would merge the identity class; the lower subgroup is trivial"
            )
        merges.add((lvl - 1, lvl))
    if not merges:
        return coarsen(q, set())
    out = coarsen(q, merges)
    out.name = (q.name or "qo") + "+weld"
    return out


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------


@dataclass
class Fiber:
    gamma: int
    component: TypeComponent
    carrier: QuotientCarrier
    qo: QuasiOrder
    kind: ElementaryKind


@dataclass
class WeldSite:
    v_class: tuple
    o_class: tuple


@dataclass
class Decomposition:
    qo: QuasiOrder
    valuation: Valuation
    components: list[TypeComponent]  # indexed by gamma (reversed component order)
    fibers: list[Fiber]
    welds: list[WeldSite]
    lifted: QuasiOrder
    notes: list[str] = field(default_factory=list)
    policy: Optional[WindowPolicy] = None

    @property
    def is_welded(self) -> bool:
        return bool(self.welds)

    def fiber_kinds(self) -> list[str]:
        return [f.kind.tag for f in self.fibers]


def decompose(q: QuasiOrder, policy: Optional[WindowPolicy] = None) -> Decomposition:
    """Split a C-quasi-order into its type-valuation, per-value elementary
    fibers, and the weld sites where it differs from the plain lift."""
    car = q.carrier
    tr = type_report(q)
    comps_asc = components_partition(q, tr)
    gamma_comps = [c for c in reversed(comps_asc) if c.kind != "identity_component"]
    v = type_valuation(q)
    notes: list[str] = []

    cf = q.closed_forms.get("component_of")
    csk = q.closed_forms.get("component_sort_key")
    key_to_gamma = None
    id_key = None
    if cf is not None and csk is None:
        key_to_gamma = {}
        for g, comp in enumerate(gamma_comps):
            key_to_gamma[cf(comp.anchor)] = g
        id_key = cf(car.identity)

    fibers: list[Fiber] = []
    comps_by_pos = {id(c): i for i, c in enumerate(comps_asc)}
    for g, comp in enumerate(gamma_comps):
        pos = comps_by_pos[id(comp)]
        lower, upper = _gamma_sets(comps_asc, pos)
        member_fn = None
        if cf is not None and csk is not None:
            bound = csk(cf(comp.anchor))

            def member_fn(p, _cf=cf, _csk=csk, _b=bound):
                return _csk(_cf(p)) < _b

        elif key_to_gamma is not None:

            def member_fn(p, _g=g, _m=key_to_gamma, _cf=cf, _ik=id_key):
                k = _cf(p)
                if k == _ik:
                    return True
                gg = _m.get(k)
                if gg is None:
                    return None
                return gg > _g

        fq = quotient_qo(
            q,
            lower | {car.identity},
            domain=upper | {car.identity},
            member_fn=member_fn,
            verify=False,
            name=f"{q.name}@{g}",
        )
        kind = elementary_kind(fq)
        if kind.tag == "neither":
            raise InternalConsistencyError(
                f"fiber at value {g} (component {car.label(comp.anchor)}) "
                "classifies as neither elementary kind"
            )
        if fq.carrier.window_incomplete:
            notes.append(f"fiber {g}: window-incomplete coset assignment")
        fibers.append(Fiber(g, comp, fq.carrier, fq, kind))

    for a, b in zip(fibers, fibers[1:]):
        if a.kind.tag == "valuational" and b.kind.tag == "valuational":
            raise InternalConsistencyError(
                f"adjacent valuational fibers at values {a.gamma} and {b.gamma}"
            )

    lifted = lift(v, {f.gamma: f.qo for f in fibers}, check=False, name=f"lift({q.name})")
    if not is_coarsening(q, lifted):
        raise InternalConsistencyError("source quasi-order does not coarsen its own lift")

    welds = _detect_welds(q, lifted, tr)
    rebuilt = reconstruct_from(lifted, welds)
    if not rebuilt.same_as(q):
        raise InternalConsistencyError("lift plus welds does not reproduce the input")
    return Decomposition(q, v, list(gamma_comps), fibers, welds, lifted, notes, policy)


def _detect_welds(q: QuasiOrder, lifted: QuasiOrder, tr: TypeReport) -> list[WeldSite]:
    car = q.carrier
    key = car.index.__getitem__
    welds: list[WeldSite] = []
    groups: dict[int, set] = {}
    for x in car.universe:
        groups.setdefault(q.rank[x], set()).add(lifted.rank[x])
    for q_lvl in sorted(groups):
        lift_lvls = sorted(groups[q_lvl])
        if len(lift_lvls) == 1:
            continue
        if len(lift_lvls) != 2 or lift_lvls[1] != lift_lvls[0] + 1:
            raise InternalConsistencyError(
                f"q-level {q_lvl} merges lift-levels {lift_lvls}; not a weld pattern"
            )
        lo, hi = lift_lvls
        lo_members = [x for x in q.levels[q_lvl] if lifted.rank[x] == lo]
        hi_members = [x for x in q.levels[q_lvl] if lifted.rank[x] == hi]
        if not all(tr.types[x] is ElementType.V_TYPE for x in lo_members):
            raise InternalConsistencyError(
                f"merged lower class at q-level {q_lvl} is not purely v-type"
            )
        if not all(tr.types[x] is ElementType.O_MINUS for x in hi_members):
            raise InternalConsistencyError(
                f"merged upper class at q-level {q_lvl} is not purely o-minus-type"
            )
        if set(lo_members) != set(lifted.levels[lo]) or set(hi_members) != set(lifted.levels[hi]):
            raise InternalConsistencyError(
                f"weld at q-level {q_lvl} does not merge full lift classes"
            )
        welds.append(WeldSite(tuple(sorted(lo_members, key=key)), tuple(sorted(hi_members, key=key))))
    return welds


def reconstruct_from(lifted: QuasiOrder, welds: list[WeldSite]) -> QuasiOrder:
    merges = set()
    for w in welds:
        lo = lifted.rank[w.v_class[0]]
        hi = lifted.rank[w.o_class[0]]
        if hi != lo + 1:
            raise InvalidParameterError("weld classes are not adjacent in the lift")
        merges.add((lo, hi))
    return coarsen(lifted, merges)


def reconstruct(d: Decomposition) -> QuasiOrder:
    """Lift the fibers through the type-valuation and re-apply the welds."""
    return reconstruct_from(d.lifted, d.welds)


# ---------------------------------------------------------------------------
# quotient C-relations
# ---------------------------------------------------------------------------


def quotient_crel(C: CRelation, d: Decomposition, gamma: int) -> CRelation:
    """C-relation induced on the fiber at ``gamma``: classes branch when the
    first argument leaves the subgroup and the inner pair either collapses
    into it or already branches upstairs."""
    if gamma < 0 or gamma >= len(d.fibers):
        raise DomainError(f"no fiber at value {gamma}")
    qc = d.fibers[gamma].carrier
    parent = qc.parent

    def pred(f, g, h):
        fh = parent.op(f, parent.inv(h))
        gh = parent.op(g, parent.inv(h))
        m_fh = qc._member(fh)
        m_gh = qc._member(gh)
        if m_fh is None or m_gh is None:
            raise DomainError("quotient relation undecidable outside the window")
        if m_fh:
            return False
        return bool(m_gh) or C.holds(f, g, h)

    return CRelation(qc, "predicate", predicate=pred, name=f"C@{gamma}")
