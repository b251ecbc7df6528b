"""Exact group arithmetic over finite and windowed universes.

A carrier enumerates a finite window of a (possibly infinite) group in a
fixed lexicographic order and exposes exact operations that remain valid
outside the window.  A :class:`WindowPolicy` decides which axiom instances
are checkable: quantified variables range over the eval window, derived
terms must stay inside the term window.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional, Sequence

Element = Any


class InvalidParameterError(ValueError):
    """A constructor or operation received unusable input."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class InternalConsistencyError(RuntimeError):
    """A computed structure violates an invariant it is supposed to satisfy."""


@dataclass(frozen=True)
class WindowPolicy:
    """Quantification bounds for universally quantified checks.

    Variables range over elements of size <= ``eval_radius``; an axiom
    instance counts as checkable only if every derived term has size
    <= ``term_radius``.
    """

    eval_radius: int
    term_radius: int

    def __post_init__(self) -> None:
        if self.eval_radius < 0:
            raise InvalidParameterError("eval_radius must be >= 0")
        if self.term_radius < self.eval_radius:
            raise InvalidParameterError("term_radius must be >= eval_radius")

    @classmethod
    def default(cls, eval_radius: int = 4) -> "WindowPolicy":
        return cls(eval_radius, 2 * eval_radius)


class GroupCarrier:
    """Base class: an enumerated universe plus exact group operations."""

    kind = "abstract"

    def __init__(
        self,
        name: str,
        universe: Sequence[Element],
        identity: Element,
        is_abelian: bool,
        window_radius: Optional[int],
    ) -> None:
        self.name = name
        self.universe = list(universe)
        self.identity = identity
        self.is_abelian = is_abelian
        self.window_radius = window_radius
        self.index = {x: i for i, x in enumerate(self.universe)}
        if len(self.index) != len(self.universe):
            raise InvalidParameterError("universe contains duplicate elements")
        self._eval_cache: dict[int, list] = {}

    # -- exact operations -------------------------------------------------
    def op(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def inv(self, a: Element) -> Element:
        raise NotImplementedError

    def conjugate(self, g: Element, z: Element) -> Element:
        """z * g * z^-1."""
        return self.op(self.op(z, g), self.inv(z))

    def power(self, g: Element, n: int) -> Element:
        if n < 0:
            return self.power(self.inv(g), -n)
        out = self.identity
        for _ in range(n):
            out = self.op(out, g)
        return out

    # -- window bookkeeping ------------------------------------------------
    def size_of(self, x: Element) -> int:
        """Window norm of an exact element; 0 for finite kinds."""
        return 0

    def in_window(self, x: Element, radius: int) -> bool:
        return self.size_of(x) <= radius

    def contains(self, x: Element) -> bool:
        return x in self.index

    def eval_universe(self, policy: WindowPolicy) -> list:
        r = policy.eval_radius
        if r not in self._eval_cache:
            self._eval_cache[r] = [x for x in self.universe if self.in_window(x, r)]
        return self._eval_cache[r]

    def is_window_closed(self, terms: Iterable[Element], policy: WindowPolicy) -> bool:
        return all(self.in_window(t, policy.term_radius) for t in terms)

    # -- presentation / serialization ---------------------------------------
    def label(self, x: Element) -> str:
        return str(x)

    def encode(self, x: Element):
        """JSON payload for an element."""
        return x

    def decode(self, payload) -> Element:
        return payload

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} |G∩W|={len(self.universe)}>"


def is_window_closed(carrier: GroupCarrier, terms: Iterable[Element], policy: WindowPolicy) -> bool:
    """True iff every term lies within the policy's term radius."""
    return carrier.is_window_closed(terms, policy)


def conjugate(carrier: GroupCarrier, g: Element, z: Element) -> Element:
    return carrier.conjugate(g, z)


# ---------------------------------------------------------------------------
# finite table carriers
# ---------------------------------------------------------------------------


class TableCarrier(GroupCarrier):
    """Finite group given by a multiplication table over indices 0..n-1."""

    kind = "table"

    def __init__(
        self,
        name: str,
        mul_table: Sequence[Sequence[int]],
        labels: Optional[Sequence[str]] = None,
        verify: bool = True,
    ) -> None:
        n = len(mul_table)
        if n == 0:
            raise InvalidParameterError("empty multiplication table")
        self.mul_table = [list(map(int, row)) for row in mul_table]
        for row in self.mul_table:
            if len(row) != n or any(v < 0 or v >= n for v in row):
                raise InvalidParameterError("malformed multiplication table")
        identity = self._find_identity()
        if identity != 0:
            raise InvalidParameterError("identity must be element 0")
        self.inv_table = self._build_inverses()
        if labels is not None and len(labels) != n:
            raise InvalidParameterError("labels length does not match order")
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        abelian = all(
            self.mul_table[a][b] == self.mul_table[b][a] for a in range(n) for b in range(n)
        )
        super().__init__(name, range(n), 0, abelian, None)
        if verify:
            self._verify_associativity()

    def _find_identity(self) -> int:
        n = len(self.mul_table)
        for e in range(n):
            if all(self.mul_table[e][x] == x and self.mul_table[x][e] == x for x in range(n)):
                return e
        raise InvalidParameterError("table has no two-sided identity")

    def _build_inverses(self) -> list[int]:
        n = len(self.mul_table)
        inv = [-1] * n
        for a in range(n):
            for b in range(n):
                if self.mul_table[a][b] == 0 and self.mul_table[b][a] == 0:
                    inv[a] = b
                    break
            if inv[a] < 0:
                raise InvalidParameterError(f"element {a} has no inverse")
        return inv

    def _verify_associativity(self) -> None:
        n = len(self.mul_table)
        m = self.mul_table
        for a in range(n):
            for b in range(n):
                ab = m[a][b]
                for c in range(n):
                    if m[ab][c] != m[a][m[b][c]]:
                        raise InvalidParameterError(
                            f"table is not associative at ({a},{b},{c})"
                        )

    def op(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        return self.inv_table[a]

    def label(self, x: int) -> str:
        return self.labels[x]

    def encode(self, x: int):
        return int(x)

    def decode(self, payload) -> int:
        x = int(payload)
        if x < 0 or x >= len(self.universe):
            raise DomainError(f"table index {x} out of range")
        return x


def make_cyclic(n: int) -> TableCarrier:
    """Z_n with table semantics."""
    if n < 1:
        raise InvalidParameterError("cyclic order must be >= 1")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return TableCarrier(f"Z{n}", table, labels=[str(i) for i in range(n)], verify=n <= 64)


def make_table(name: str, mul_table: Sequence[Sequence[int]], labels=None) -> TableCarrier:
    """Finite group from an explicit multiplication table (fully verified)."""
    return TableCarrier(name, mul_table, labels=labels, verify=True)


def direct_product(left: TableCarrier, right: TableCarrier, name: Optional[str] = None) -> TableCarrier:
    """Direct product of two table carriers, elements packed as a*|right|+b."""
    nl, nr = len(left.universe), len(right.universe)
    n = nl * nr

    def enc(a: int, b: int) -> int:
        return a * nr + b

    table = [
        [
            enc(left.op(x // nr, y // nr), right.op(x % nr, y % nr))
            for y in range(n)
        ]
        for x in range(n)
    ]
    labels = [f"({left.label(x // nr)},{right.label(x % nr)})" for x in range(n)]
    return TableCarrier(name or f"{left.name}x{right.name}", table, labels=labels, verify=n <= 64)


# ---------------------------------------------------------------------------
# windowed carriers
# ---------------------------------------------------------------------------


class FreeAbelianCarrier(GroupCarrier):
    """Z^rank with componentwise addition; window = sup-norm box."""

    kind = "free_abelian"

    def __init__(self, rank: int, radius: int) -> None:
        if rank < 1:
            raise InvalidParameterError("rank must be >= 1")
        if radius < 1:
            raise InvalidParameterError("radius must be >= 1")
        self.rank = rank
        universe = list(itertools.product(range(-radius, radius + 1), repeat=rank))
        super().__init__(f"Z^{rank}[r{radius}]", universe, (0,) * rank, True, radius)

    def op(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def size_of(self, x) -> int:
        return max(abs(c) for c in x)

    def label(self, x) -> str:
        return "(" + ",".join(str(c) for c in x) + ")"

    def encode(self, x):
        return list(x)

    def decode(self, payload):
        if not isinstance(payload, (list, tuple)) or len(payload) != self.rank:
            raise DomainError(f"expected a vector of length {self.rank}")
        return tuple(int(c) for c in payload)


def make_free_abelian(rank: int, radius: int) -> FreeAbelianCarrier:
    return FreeAbelianCarrier(rank, radius)


class HahnCarrier(GroupCarrier):
    """Finitely supported sequences over an index set with abelian coefficients.

    Elements are sorted tuples of (index, coefficient) pairs with nonzero
    coefficients.  The window norm of an element is
    max(|support|, max coefficient norm); universe elements additionally have
    support inside the index set.  Operations are exact for any support.
    """

    kind = "hahn_window"

    def __init__(self, index_set: Sequence[int], base: GroupCarrier, radius: int) -> None:
        if not base.is_abelian:
            raise InvalidParameterError("hahn base must be abelian")
        if radius < 1:
            raise InvalidParameterError("radius must be >= 1")
        idx = tuple(sorted(set(int(i) for i in index_set)))
        if not idx:
            raise InvalidParameterError("index set must be non-empty")
        self.index_set = idx
        self.base = base
        coeffs = [
            g for g in base.universe if g != base.identity and base.size_of(g) <= radius
        ]
        universe = [()]
        for s in range(1, min(radius, len(idx)) + 1):
            for sites in itertools.combinations(idx, s):
                for vals in itertools.product(coeffs, repeat=s):
                    universe.append(tuple(zip(sites, vals)))
        universe.sort()
        super().__init__(
            f"Hahn[{idx[0]}..{idx[-1]}]({base.name})", universe, (), True, radius
        )

    def op(self, a, b):
        acc = dict(a)
        for i, c in b:
            if i in acc:
                s = self.base.op(acc[i], c)
                if s == self.base.identity:
                    del acc[i]
                else:
                    acc[i] = s
            else:
                acc[i] = c
        return tuple(sorted(acc.items()))

    def inv(self, a):
        return tuple((i, self.base.inv(c)) for i, c in a)

    def size_of(self, x) -> int:
        if not x:
            return 0
        return max(len(x), max(self.base.size_of(c) for _, c in x))

    def in_window(self, x, radius: int) -> bool:
        return self.size_of(x) <= radius and all(i in self.index_set for i, _ in x)

    def support(self, x) -> tuple:
        return tuple(i for i, _ in x)

    def support_min(self, x):
        """Minimum of the support; None for the identity (valuation infinity)."""
        if not x:
            return None
        return x[0][0]

    def leading(self, x):
        """Coefficient at the minimum of the support (identity for zero)."""
        if not x:
            return self.base.identity
        return x[0][1]

    def label(self, x) -> str:
        if not x:
            return "0"
        return " + ".join(f"{self.base.label(c)}·t{i}" for i, c in x)

    def encode(self, x):
        return [[i, self.base.encode(c)] for i, c in x]

    def decode(self, payload):
        if not isinstance(payload, (list, tuple)):
            raise DomainError("expected a list of [index, coefficient] pairs")
        acc = {}
        for entry in payload:
            if not isinstance(entry, (list, tuple)) or len(entry) != 2:
                raise DomainError("expected [index, coefficient] pairs")
            i, c = int(entry[0]), self.base.decode(entry[1])
            if c != self.base.identity:
                acc[i] = c
        return tuple(sorted(acc.items()))


def make_hahn(index_set: Sequence[int], base: GroupCarrier, radius: int) -> HahnCarrier:
    return HahnCarrier(index_set, base, radius)


class SemidirectCarrier(GroupCarrier):
    """Semidirect product left ⋉ right with an automorphism family.

    ``action(g)`` is an automorphism of the right factor's universe closure;
    multiplication is (g1,h1)(g2,h2) = (g1 g2, h1 · action(g1)(h2)).
    """

    kind = "semidirect"

    def __init__(
        self,
        left: GroupCarrier,
        right: GroupCarrier,
        action: Callable[[Element], Callable[[Element], Element]],
        name: Optional[str] = None,
        verify_samples: int = 12,
    ) -> None:
        self.left = left
        self.right = right
        self.action = action
        self._verify_action(verify_samples)
        universe = [
            (g, h) for g in left.universe for h in right.universe
        ]
        universe.sort()
        abelian = left.is_abelian and right.is_abelian and self._action_trivial()
        radius = None
        if left.window_radius is not None or right.window_radius is not None:
            radius = max(left.window_radius or 0, right.window_radius or 0)
        super().__init__(
            name or f"{left.name}⋉{right.name}", universe, (left.identity, right.identity),
            abelian, radius,
        )

    def _sample(self, xs: Sequence[Element], k: int) -> list:
        if len(xs) <= k:
            return list(xs)
        step = max(1, len(xs) // k)
        return list(xs[::step][:k])

    def _verify_action(self, k: int) -> None:
        rights = self._sample(self.right.universe, k)
        for g in self._sample(self.left.universe, k):
            phi = self.action(g)
            if phi(self.right.identity) != self.right.identity:
                raise InvalidParameterError(f"action({g}) does not fix the identity")
            for a in rights:
                if phi(self.right.inv(a)) != self.right.inv(phi(a)):
                    raise InvalidParameterError(f"action({g}) does not commute with inverse")
                for b in rights:
                    if phi(self.right.op(a, b)) != self.right.op(phi(a), phi(b)):
                        raise InvalidParameterError(f"action({g}) is not a homomorphism")

    def _action_trivial(self) -> bool:
        rights = self._sample(self.right.universe, 8)
        return all(
            self.action(g)(h) == h for g in self._sample(self.left.universe, 8) for h in rights
        )

    def op(self, a, b):
        g1, h1 = a
        g2, h2 = b
        return (self.left.op(g1, g2), self.right.op(h1, self.action(g1)(h2)))

    def inv(self, a):
        g, h = a
        gi = self.left.inv(g)
        return (gi, self.action(gi)(self.right.inv(h)))

    def size_of(self, x) -> int:
        g, h = x
        return max(self.left.size_of(g), self.right.size_of(h))

    def in_window(self, x, radius: int) -> bool:
        g, h = x
        return self.left.in_window(g, radius) and self.right.in_window(h, radius)

    def label(self, x) -> str:
        g, h = x
        return f"({self.left.label(g)} | {self.right.label(h)})"

    def encode(self, x):
        g, h = x
        return [self.left.encode(g), self.right.encode(h)]

    def decode(self, payload):
        if not isinstance(payload, (list, tuple)) or len(payload) != 2:
            raise DomainError("expected a [left, right] pair")
        return (self.left.decode(payload[0]), self.right.decode(payload[1]))


def identity_action(_g: Element) -> Callable[[Element], Element]:
    return lambda h: h


def shift_action(hahn: HahnCarrier) -> Callable[[Element], Callable[[Element], Element]]:
    """Shift family for left = windowed Z (rank-1 vectors), right = hahn.

    The k-th shift moves the coefficient at index n to index n+k.
    """

    def act(g: Element) -> Callable[[Element], Element]:
        k = g[0] if isinstance(g, tuple) else int(g)

        def phi(h: Element) -> Element:
            return tuple((i + k, c) for i, c in h)

        return phi

    return act


def make_semidirect(
    left: GroupCarrier,
    right: GroupCarrier,
    action: Callable[[Element], Callable[[Element], Element]] | str = "identity",
    name: Optional[str] = None,
) -> SemidirectCarrier:
    if isinstance(action, str):
        if action == "identity":
            action = identity_action
        elif action == "shift":
            if not isinstance(right, HahnCarrier):
                raise InvalidParameterError("shift action requires a hahn right factor")
            action = shift_action(right)
        else:
            raise InvalidParameterError(f"unknown built-in action {action!r}")
    return SemidirectCarrier(left, right, action, name=name)


# ---------------------------------------------------------------------------
# quotient carriers
# ---------------------------------------------------------------------------


class QuotientCarrier(GroupCarrier):
    """Coset space of a normal subgroup, restricted to a window domain.

    ``assignment`` maps every known domain element to the enumeration-least
    representative of its coset; ``member_fn`` (optional) decides subgroup
    membership for exact elements outside the window.
    """

    kind = "quotient"

    def __init__(
        self,
        parent: GroupCarrier,
        subgroup: frozenset,
        assignment: dict,
        member_fn: Optional[Callable[[Element], Optional[bool]]] = None,
        name: Optional[str] = None,
    ) -> None:
        self.parent = parent
        self.subgroup = subgroup
        self.assignment = dict(assignment)
        self.member_fn = member_fn
        reps = sorted(set(self.assignment.values()))
        id_rep = self.assignment[parent.identity]
        sizes: dict = {}
        for x, r in self.assignment.items():
            s = parent.size_of(x)
            sizes[r] = min(sizes.get(r, s), s)
        self._rep_size = sizes
        self.window_incomplete = False
        abelian = parent.is_abelian
        super().__init__(
            name or f"{parent.name}/H", reps, id_rep, abelian,
            parent.window_radius,
        )
        if not abelian:
            self.is_abelian = all(
                self.op(a, b) == self.op(b, a) for a in reps for b in reps
            )

    def _member(self, x: Element) -> Optional[bool]:
        if x in self.subgroup:
            return True
        if self.parent.contains(x):
            return False
        if self.member_fn is not None:
            return self.member_fn(x)
        return None

    def canonical(self, x: Element) -> Element:
        """Coset representative of an exact parent element."""
        r = self.assignment.get(x)
        if r is not None:
            return r
        m = self._member(x)
        if m:
            return self.identity
        # unknown or out-of-window coset: the exact payload stands for it
        return x

    def op(self, a, b):
        return self.canonical(self.parent.op(a, b))

    def inv(self, a):
        return self.canonical(self.parent.inv(a))

    def size_of(self, x) -> int:
        if x in self._rep_size:
            return self._rep_size[x]
        return self.parent.size_of(x)

    def in_window(self, x, radius: int) -> bool:
        return self.size_of(x) <= radius

    def label(self, x) -> str:
        return f"[{self.parent.label(x)}]"

    def encode(self, x):
        return self.parent.encode(x)

    def decode(self, payload):
        return self.canonical(self.parent.decode(payload))
