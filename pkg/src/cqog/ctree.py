"""Canonical tree of a C-quasi-ordered group, the right group action on it,
orbit computation, and the chain/antichain trichotomy."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .carrier import DomainError, GroupCarrier, WindowPolicy
from .classify import ElementType, type_report
from .qorder import QuasiOrder
from .structure import components_partition, component_subgroups

Element = Any


@dataclass
class TreeNode:
    rep: tuple  # canonical unordered pair (x, y), x first in enumeration
    members: tuple  # all window pairs in the node's class

    def is_leaf(self) -> bool:
        return self.rep[0] == self.rep[1]


class CanonicalTree:
    """Quotient of window pairs by mutual comparability, with the induced
    partial order and the leaf map x ↦ class of (x, x)."""

    def __init__(self, q: QuasiOrder, elements: list, nodes: list[TreeNode],
                 node_of_pair: dict, leq_matrix: np.ndarray) -> None:
        self.qo = q
        self.elements = elements
        self.nodes = nodes
        self._node_of_pair = node_of_pair
        self._leq = leq_matrix
        self.leaf_map = {x: node_of_pair[(x, x)] for x in elements}

    def node_of(self, x: Element, y: Element) -> Optional[int]:
        p = _canon_pair(self.qo.carrier, x, y)
        return self._node_of_pair.get(p)

    def leq(self, i: int, j: int) -> bool:
        return bool(self._leq[i, j])

    def comparable(self, i: int, j: int) -> bool:
        return bool(self._leq[i, j] or self._leq[j, i])

    def hasse_edges(self) -> list[tuple[int, int]]:
        """Cover pairs (i, j) with node i covered by node j."""
        strict = self._leq & ~self._leq.T
        reach = strict.astype(np.float32)
        two_step = (reach @ reach) > 0.5
        covers = strict & ~two_step
        return [(int(i), int(j)) for i, j in np.argwhere(covers)]

    def __len__(self) -> int:
        return len(self.nodes)


def _canon_pair(carrier: GroupCarrier, x: Element, y: Element) -> tuple:
    ix, iy = carrier.index.get(x), carrier.index.get(y)
    if ix is None or iy is None:
        return (x, y) if str(x) <= str(y) else (y, x)
    return (x, y) if ix <= iy else (y, x)


def build_tree(q: QuasiOrder, policy: WindowPolicy, elements: Optional[list] = None) -> CanonicalTree:
    """Tree over pairs from the eval window (or an explicit element list):
    (x,y) ≤ (u,v) iff both u·y⁻¹ and v·y⁻¹ sit at or below x·y⁻¹."""
    car = q.carrier
    ev = list(elements) if elements is not None else car.eval_universe(policy)
    n = len(ev)
    inv = [car.inv(x) for x in ev]
    prods = [[car.op(ev[i], inv[j]) for j in range(n)] for i in range(n)]
    missing = any(p not in q.rank for row in prods for p in row)
    if missing and q.key_fn is None:
        raise DomainError("pair heights undecidable: products leave the window")
    if missing:
        order = {k: m for m, k in enumerate(sorted({q.key_fn(p) for row in prods for p in row}))}
        D = np.array([[order[q.key_fn(p)] for p in row] for row in prods], dtype=np.int64)
    else:
        D = np.array([[q.rank[p] for p in row] for row in prods], dtype=np.int64)

    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    P = len(pairs)
    U = np.array([p[0] for p in pairs], dtype=np.int64)
    V = np.array([p[1] for p in pairs], dtype=np.int64)
    # pair order: (x,y) <= (u,v)  iff  D[u,y] <= D[x,y] and D[v,y] <= D[x,y]
    leq_pairs = np.zeros((P, P), dtype=bool)
    for a, (i, j) in enumerate(pairs):
        ok = D[:, j] <= D[i, j]
        leq_pairs[a] = ok[U] & ok[V]
    sim = leq_pairs & leq_pairs.T

    node_id = [-1] * P
    reps: list[int] = []
    for a in range(P):
        if node_id[a] >= 0:
            continue
        nid = len(reps)
        reps.append(a)
        same = np.nonzero(sim[a])[0]
        for b in same:
            node_id[b] = nid
    nodes = []
    node_of_pair: dict = {}
    members_by_node: list[list] = [[] for _ in reps]
    for a, (i, j) in enumerate(pairs):
        members_by_node[node_id[a]].append((ev[i], ev[j]))
    for nid, rep_a in enumerate(reps):
        i, j = pairs[rep_a]
        members = tuple(members_by_node[nid])
        nodes.append(TreeNode((ev[i], ev[j]), members))
        for m in members:
            node_of_pair[m] = nid
    k = len(nodes)
    leq_nodes = np.zeros((k, k), dtype=bool)
    for a, ra in enumerate(reps):
        leq_nodes[a] = leq_pairs[ra][reps]
    if (leq_nodes & leq_nodes.T & ~np.eye(k, dtype=bool)).any():
        raise DomainError("pair order is not antisymmetric on classes")
    return CanonicalTree(q, ev, nodes, node_of_pair, leq_nodes)


def act(tree: CanonicalTree, node: int, g: Element) -> Optional[int]:
    """Right action (x,y).g = (xg, yg); None when the image leaves the window."""
    car = tree.qo.carrier
    x, y = tree.nodes[node].rep
    return tree.node_of(car.op(x, g), car.op(y, g))


@dataclass
class Orbit:
    nodes: tuple
    classification: str  # singleton | antichain | nontrivial_chain | neither
    complete: bool


def orbits(tree: CanonicalTree, acting: list) -> list[Orbit]:
    """Partition of the tree nodes into window orbit fragments under the
    right action of ``acting``; fragments clipped by the window are flagged."""
    k = len(tree.nodes)
    seen = [False] * k
    out: list[Orbit] = []
    for start in range(k):
        if seen[start]:
            continue
        frontier = [start]
        seen[start] = True
        members = [start]
        complete = True
        while frontier:
            cur = frontier.pop()
            for g in acting:
                nxt = act(tree, cur, g)
                if nxt is None:
                    complete = False
                    continue
                if not seen[nxt]:
                    seen[nxt] = True
                    members.append(nxt)
                    frontier.append(nxt)
        members.sort()
        out.append(Orbit(tuple(members), _classify_nodes(tree, members), complete))
    return out


def _classify_nodes(tree: CanonicalTree, members: list[int]) -> str:
    if len(members) == 1:
        return "singleton"
    comparable = 0
    total = 0
    for a in range(len(members)):
        for b in range(a + 1, len(members)):
            total += 1
            if tree.comparable(members[a], members[b]):
                comparable += 1
    if comparable == 0:
        return "antichain"
    if comparable == total:
        return "nontrivial_chain"
    return "neither"


@dataclass
class PairClassification:
    predicted: str  # antichain | nontrivial_chain | not_chain
    empirical: str
    empirical_full_group: str
    complete: bool


def classify_pair(q: QuasiOrder, x: Element, y: Element, policy: WindowPolicy) -> PairClassification:
    """Predict the orbit class of (x, y) from element types, and compare with
    the orbit fragments computed in the window."""
    car = q.carrier
    sub = component_subgroups(q, x)
    if y not in sub.upper:
        raise DomainError(f"{car.label(y)} is not in the upper subgroup of {car.label(x)}")
    d = car.op(x, car.inv(y))
    t = type_report(q).types
    comps = components_partition(q)
    t_x = next(c for c in comps if x in c.members)
    td = t.get(d)
    if td is None:
        td = ElementType.V_TYPE if q.cmp(d, car.inv(d)) == 0 else ElementType.O_PLUS
    if td in (ElementType.V_TYPE, ElementType.IDENTITY):
        predicted = "antichain"
    elif t[x].is_o_type() and d in t_x.members:
        predicted = "nontrivial_chain"
    else:
        predicted = "not_chain"

    ev = car.eval_universe(policy)
    evset = set(ev)
    tree = build_tree(q, policy)
    start = tree.node_of(x, y)
    if start is None:
        raise DomainError("pair lies outside the eval window")
    acting_sub = [g for g in ev if g in sub.upper]
    frag_sub = _orbit_of(tree, start, acting_sub)
    frag_all = _orbit_of(tree, start, ev)
    return PairClassification(
        predicted,
        _classify_nodes(tree, sorted(frag_sub[0])),
        _classify_nodes(tree, sorted(frag_all[0])),
        frag_sub[1] and frag_all[1],
    )


def _orbit_of(tree: CanonicalTree, start: int, acting: list) -> tuple[set, bool]:
    seen = {start}
    frontier = [start]
    complete = True
    while frontier:
        cur = frontier.pop()
        for g in acting:
            nxt = act(tree, cur, g)
            if nxt is None:
                complete = False
            elif nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen, complete


def orbit_trichotomy(q: QuasiOrder) -> str:
    """all_antichains when every element is v-type; has_chain when the top
    type-component is o-type; mixed otherwise."""
    tr = type_report(q)
    non_id = [x for x in q.carrier.universe if x != q.carrier.identity]
    if all(tr.types[x] is ElementType.V_TYPE for x in non_id):
        return "all_antichains"
    comps = components_partition(q, tr)
    top = comps[-1]
    if top.kind == "o_component":
        return "has_chain"
    return "mixed"


def export_dot(tree: CanonicalTree) -> str:
    """DOT digraph of the Hasse cover; edges point from covered node up to
    cover, leaves drawn as boxes."""
    car = tree.qo.carrier
    lines = ["digraph ctree {", "  rankdir=BT;"]
    for i, node in enumerate(tree.nodes):
        x, y = node.rep
        label = f"({car.label(x)},{car.label(y)})"
        shape = " shape=box" if node.is_leaf() else ""
        lines.append(f'  n{i} [label="{label}"{shape}];')
    for i, j in sorted(tree.hasse_edges()):
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines)
