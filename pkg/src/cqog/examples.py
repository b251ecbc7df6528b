"""Built-in generator fixtures on Z², a Hahn window over it, and the shifted
semidirect product, each carrying closed-form keys, element types, and
type-component ids so answers extend beyond the enumerated window."""

from __future__ import annotations

from typing import Optional

from .carrier import (
    FreeAbelianCarrier,
    GroupCarrier,
    HahnCarrier,
    InvalidParameterError,
    WindowPolicy,
    make_free_abelian,
    make_hahn,
    make_semidirect,
)
from .classify import ElementType, order_cqo_from_order
from .crel import INF, Valuation
from .qorder import QuasiOrder, natural_order, qo_from_key

EXAMPLE_NAMES = ("a", "b", "c", "d", "e")
DEFAULT_RADIUS = {"a": 4, "b": 4, "c": 4, "d": 1, "e": 1}
DEFAULT_INDEX_SPAN = (-2, 2)

EXAMPLE_METADATA = {
    "a": {
        "carrier": "Z^2",
        "v_type": "{0} x (Z \\ {0})",
        "o_minus": "(-N) x Z",
        "o_plus": "N x Z",
        "welding_points": "none",
    },
    "b": {
        "carrier": "Z^2",
        "v_type": "{0} x (Z \\ {0})",
        "o_minus": "(-N) x Z (welded to the v-class)",
        "o_plus": "N x Z",
        "welding_points": "(x,y) with x<0 (o-side) and (0,y), y!=0 (v-side)",
    },
    "c": {
        "carrier": "Z^2",
        "v_type": "only the identity",
        "o_minus": "{0} x (-N) and (-N) x Z",
        "o_plus": "{0} x N and N x Z",
        "welding_points": "none",
    },
    "d": {
        "carrier": "hahn window over Z^2",
        "types": "type of the coefficient at the support minimum",
    },
    "e": {
        "carrier": "Z shift-semidirect the hahn window",
        "types": "(k,h) with k!=0 v-type; (0,h) as in the hahn window",
    },
}


# -- closed forms on Z^2 ----------------------------------------------------


def _key_a(x):
    a, b = x
    if a == 0 and b == 0:
        return (0, 0)
    if a == 0:
        return (1, 0)
    if a < 0:
        return (2, 0)
    return (3, a)


def _key_b(x):
    a, b = x
    if a == 0 and b == 0:
        return (0, 0)
    if a <= 0:
        return (1, 0)
    return (2, a)


def _key_c(x):
    a, b = x
    if a == 0 and b == 0:
        return (0, 0)
    if a == 0 and b < 0:
        return (1, 0)
    if a == 0:
        return (2, b)
    if a < 0:
        return (3, 0)
    return (4, a)


def _type_ab(x):
    a, b = x
    if a == 0 and b == 0:
        return ElementType.IDENTITY
    if a == 0:
        return ElementType.V_TYPE
    return ElementType.O_MINUS if a < 0 else ElementType.O_PLUS


def _type_c(x):
    a, b = x
    if a == 0 and b == 0:
        return ElementType.IDENTITY
    if a == 0:
        return ElementType.O_MINUS if b < 0 else ElementType.O_PLUS
    return ElementType.O_MINUS if a < 0 else ElementType.O_PLUS


def _comp_ab(x):
    a, b = x
    if a == 0 and b == 0:
        return "1"
    return "v2" if a == 0 else "o1"


def _comp_c(x):
    a, b = x
    if a == 0 and b == 0:
        return "1"
    return "o2" if a == 0 else "o1"


def _comp_key_abc(c):
    return {"1": (0,), "v2": (1,), "o2": (1,), "o1": (2,)}[c]


# -- closed forms on the hahn window and the semidirect product --------------


def _key_d(h):
    if not h:
        return (0,)
    i, c = h[0]
    return (1, -i, _key_a(c))


def _type_d(h):
    if not h:
        return ElementType.IDENTITY
    return _type_ab(h[0][1])


def _comp_d(h):
    if not h:
        return "1"
    i, c = h[0]
    return (i, 1 if c[0] != 0 else 2)


def _comp_key_d(c):
    if c == "1":
        return (0,)
    return (1, -c[0], -c[1])


def _comp_key_e(c):
    if c == "a":
        return (2,)
    return _comp_key_d(c)


def _key_e(x):
    g, h = x
    if g[0] != 0:
        return (2,)
    if not h:
        return (0,)
    return (1, _key_d(h))


def _type_e(x):
    g, h = x
    if g[0] != 0:
        return ElementType.V_TYPE
    return _type_d(h)


def _comp_e(x):
    g, h = x
    if g[0] != 0:
        return "a"
    return _comp_d(h)


# -- generators ---------------------------------------------------------------


def example_policy(name: str, radius: Optional[int] = None) -> WindowPolicy:
    if name not in EXAMPLE_NAMES:
        raise InvalidParameterError(f"unknown example {name!r}")
    return WindowPolicy.default(radius if radius is not None else DEFAULT_RADIUS[name])


def example_qo(
    name: str,
    radius: Optional[int] = None,
    index_span: tuple = DEFAULT_INDEX_SPAN,
    policy: Optional[WindowPolicy] = None,
) -> QuasiOrder:
    """One of the five built-in C-quasi-ordered groups, materialized on the
    window the policy's term radius spans."""
    if name not in EXAMPLE_NAMES:
        raise InvalidParameterError(f"unknown example {name!r}")
    if policy is None:
        policy = example_policy(name, radius)
    term = policy.term_radius
    if name in ("a", "b", "c"):
        carrier = make_free_abelian(2, term)
        key = {"a": _key_a, "b": _key_b, "c": _key_c}[name]
        etype = {"a": _type_ab, "b": _type_ab, "c": _type_c}[name]
        comp = {"a": _comp_ab, "b": _comp_ab, "c": _comp_c}[name]
        ckey = _comp_key_abc
    elif name == "d":
        base = make_free_abelian(2, term)
        carrier = make_hahn(range(index_span[0], index_span[1] + 1), base, term)
        key, etype, comp, ckey = _key_d, _type_d, _comp_d, _comp_key_d
    else:
        base = make_free_abelian(2, term)
        hahn = make_hahn(range(index_span[0], index_span[1] + 1), base, term)
        left = make_free_abelian(1, term)
        carrier = make_semidirect(left, hahn, "shift")
        key, etype, comp, ckey = _key_e, _type_e, _comp_e, _comp_key_e
    forms = {"element_type": etype, "component_of": comp, "component_sort_key": ckey}
    return qo_from_key(carrier, key, closed_forms=forms, name=f"example-{name}")


# -- companion structures -------------------------------------------------------


def vg_valuation(carrier: FreeAbelianCarrier) -> Valuation:
    """The two-value valuation on Z²: first coordinate nonzero below the
    second-coordinate-only part."""
    if getattr(carrier, "rank", None) != 2:
        raise InvalidParameterError("expected a rank-2 lattice carrier")

    def vf(x):
        a, b = x
        if a == 0 and b == 0:
            return INF
        return 0 if a != 0 else 1

    values = {x: vf(x) for x in carrier.universe}
    return Valuation(carrier, values, 2, labels=[1, 2], val_fn=vf, name="vG")


def support_min_valuation(carrier: HahnCarrier) -> Valuation:
    """Valuation by the minimum of the support, valued in the index set."""
    idx = carrier.index_set
    pos = {i: p for p, i in enumerate(idx)}

    def vf(h):
        if not h:
            return INF
        return pos.get(h[0][0])

    values = {h: vf(h) for h in carrier.universe}
    return Valuation(carrier, values, len(idx), labels=list(idx), val_fn=vf, name="wH")


def order_type_qo(carrier: GroupCarrier) -> QuasiOrder:
    """C-quasi-order of the natural (lexicographic) order."""
    q = order_cqo_from_order(natural_order(carrier))
    one = carrier.identity

    def etype(x, _one=one):
        if x == _one:
            return ElementType.IDENTITY
        return ElementType.O_MINUS if x < _one else ElementType.O_PLUS

    def comp(x, _one=one):
        return "1" if x == _one else "o"

    q.closed_forms = {
        "element_type": etype,
        "component_of": comp,
        "component_sort_key": lambda c: (0,) if c == "1" else (1,),
    }
    return q


def trivial_valuation_qo(carrier: GroupCarrier) -> QuasiOrder:
    """Two levels: the identity strictly below one class of everything else."""
    one = carrier.identity
    q = qo_from_key(carrier, lambda x, _one=one: (0,) if x == _one else (1,), name="trivial-valuation")
    q.closed_forms = {
        "element_type": lambda x, _one=one: ElementType.IDENTITY if x == _one else ElementType.V_TYPE,
        "component_of": lambda x, _one=one: "1" if x == _one else "v",
        "component_sort_key": lambda c: (0,) if c == "1" else (1,),
    }
    return q
