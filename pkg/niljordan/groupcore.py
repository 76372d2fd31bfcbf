"""
Generic finite-group engine

A group is enumerated once into an ``Ambient`` element store: the canonical
element list, right multiplication by the generators recorded during the
breadth-first closure, and (for small orders) a full Cayley table. Every
subgroup, center, kernel or stabilizer is a ``FiniteGroup`` view onto its
ambient: a sorted array of ambient indices together with generators.

Conventions used throughout the package:
    - commutator [a, b] = a^-1 b^-1 a b
    - permutations compose as functions, (xy)(i) = x(y(i))
"""

from __future__ import annotations

import itertools
import logging
import math
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy.combinatorics import Permutation

from .config import Caps
from .errors import (
    CapExceeded,
    CensusCapExceeded,
    ElementNotInGroup,
    IncompatibleGenerators,
    InvalidParameter,
    MalformedInput,
    NotAHomomorphism,
    NotNormal,
    ParseError,
    VerificationFailed,
)

logger = logging.getLogger(__name__)


# --------------------------------------------------------------------------
# Element payloads
# --------------------------------------------------------------------------


class GroupElement(ABC):
    """Element of a finite group with a canonical, hashable form."""

    kind = "abstract"
    __slots__ = ("_key",)

    def key(self) -> tuple:
        return self._key

    @abstractmethod
    def __mul__(self, other: "GroupElement") -> "GroupElement":
        ...

    @abstractmethod
    def inverse(self) -> "GroupElement":
        ...

    @abstractmethod
    def identity_like(self) -> "GroupElement":
        ...

    @abstractmethod
    def ambient_params(self) -> tuple:
        """Parameters two elements must share to live in one group."""

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GroupElement)
            and self.kind == other.kind
            and self._key == other._key
        )

    def __hash__(self) -> int:
        return hash((self.kind, self._key))

    def __pow__(self, k: int) -> "GroupElement":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = self.identity_like()
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return self == self.identity_like()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"


_CYCLE = re.compile(r"\(([^()]*)\)")


class PermutationElement(GroupElement):
    """Permutation of the points 1..d; stored 0-based in a sympy Permutation."""

    kind = "permutation"
    __slots__ = ("perm",)

    def __init__(self, perm: Union[Permutation, Sequence[int]]):
        self.perm = perm if isinstance(perm, Permutation) else Permutation(list(perm))
        self._key = tuple(self.perm.array_form)

    @classmethod
    def identity(cls, degree: int) -> "PermutationElement":
        return cls(list(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], degree: int) -> "PermutationElement":
        """Build from 1-based cycles."""
        image = list(range(degree))
        used = set()
        for cycle in cycles:
            for point in cycle:
                if not 1 <= point <= degree:
                    raise ParseError(f"point {point} outside 1..{degree}")
                if point in used:
                    raise ParseError(f"point {point} appears in two cycles")
                used.add(point)
            for a, b in zip(cycle, list(cycle[1:]) + list(cycle[:1])):
                image[a - 1] = b - 1
        return cls(image)

    @classmethod
    def parse(cls, text: str, degree: int) -> "PermutationElement":
        compact = text.strip()
        if _CYCLE.sub("", compact).strip():
            raise ParseError(f"bad cycle notation {text!r}")
        cycles = []
        for body in _CYCLE.findall(compact):
            tokens = body.replace(",", " ").split()
            try:
                cycles.append([int(tok) for tok in tokens])
            except ValueError as e:
                raise ParseError(f"bad cycle notation {text!r}") from e
        return cls.from_cycles([c for c in cycles if c], degree)

    @property
    def degree(self) -> int:
        return self.perm.size

    def __call__(self, point: int) -> int:
        """0-based image of a 0-based point."""
        return self.perm.array_form[point]

    def __mul__(self, other: "PermutationElement") -> "PermutationElement":
        # sympy composes left to right
        return PermutationElement(other.perm * self.perm)

    def inverse(self) -> "PermutationElement":
        return PermutationElement(~self.perm)

    def identity_like(self) -> "PermutationElement":
        return PermutationElement.identity(self.degree)

    def ambient_params(self) -> tuple:
        return ("permutation", self.degree)

    def __str__(self) -> str:
        cycles = self.perm.cyclic_form
        if not cycles:
            return "()"
        return "".join("(" + " ".join(str(p + 1) for p in c) + ")" for c in cycles)


class HeisenbergElement(GroupElement):
    """Triple (a, b, c) mod p with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')."""

    kind = "heisenberg"
    __slots__ = ("a", "b", "c", "p")

    def __init__(self, a: int, b: int, c: int, p: int):
        self.a, self.b, self.c, self.p = a % p, b % p, c % p, p
        self._key = (self.a, self.b, self.c)

    def __mul__(self, other: "HeisenbergElement") -> "HeisenbergElement":
        return HeisenbergElement(
            self.a + other.a, self.b + other.b, self.c + other.c + self.a * other.b, self.p
        )

    def inverse(self) -> "HeisenbergElement":
        return HeisenbergElement(-self.a, -self.b, self.a * self.b - self.c, self.p)

    def identity_like(self) -> "HeisenbergElement":
        return HeisenbergElement(0, 0, 0, self.p)

    def ambient_params(self) -> tuple:
        return ("heisenberg", self.p)

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


class TupleElement(GroupElement):
    """Component-wise product of elements; only the direct twist is supported."""

    kind = "tuple"
    __slots__ = ("components", "twist")

    def __init__(self, components: Sequence[GroupElement], twist: str = "direct"):
        if twist != "direct":
            raise InvalidParameter(f"unsupported product twist: {twist}")
        self.components = tuple(components)
        self.twist = twist
        self._key = tuple((c.kind, c.key()) for c in self.components)

    def __mul__(self, other: "TupleElement") -> "TupleElement":
        return TupleElement([x * y for x, y in zip(self.components, other.components)], self.twist)

    def inverse(self) -> "TupleElement":
        return TupleElement([x.inverse() for x in self.components], self.twist)

    def identity_like(self) -> "TupleElement":
        return TupleElement([x.identity_like() for x in self.components], self.twist)

    def ambient_params(self) -> tuple:
        return ("tuple", self.twist, tuple(c.ambient_params() for c in self.components))

    def __str__(self) -> str:
        return "<" + ", ".join(str(c) for c in self.components) + ">"


class CosetSpace:
    """Left cosets gN of a normal subgroup, labelled by their least ambient index."""

    def __init__(self, group: "FiniteGroup", normal: "FiniteGroup", labels: np.ndarray):
        self.group = group
        self.normal = normal
        self.labels = labels
        self.labels.setflags(write=False)

    def product(self, a: int, b: int) -> int:
        return int(self.labels[self.group.ambient.mul(a, b)])

    def inverse(self, a: int) -> int:
        return int(self.labels[self.group.ambient.inv[a]])


class CosetElement(GroupElement):
    """Coset of a normal subgroup, canonical representative = least ambient index."""

    kind = "coset"
    __slots__ = ("rep", "space")

    def __init__(self, rep: int, space: CosetSpace):
        self.rep = int(rep)
        self.space = space
        self._key = (self.rep,)

    def __mul__(self, other: "CosetElement") -> "CosetElement":
        return CosetElement(self.space.product(self.rep, other.rep), self.space)

    def inverse(self) -> "CosetElement":
        return CosetElement(self.space.inverse(self.rep), self.space)

    def identity_like(self) -> "CosetElement":
        return CosetElement(int(self.space.labels[self.space.group.ambient.identity]), self.space)

    def ambient_params(self) -> tuple:
        return ("coset", id(self.space))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CosetElement)
            and other.space is self.space
            and other.rep == self.rep
        )

    def __hash__(self) -> int:
        return hash(("coset", self.rep))

    def __str__(self) -> str:
        return f"[{self.space.group.ambient.elements[self.rep]}]"


# --------------------------------------------------------------------------
# Ambient element store
# --------------------------------------------------------------------------


class Ambient:
    """
    Fully enumerated finite group

    Elements are numbered in breadth-first order from the identity (index 0),
    so lower indices have shorter words in the generators. All arrays are
    populated here and never modified afterwards.
    """

    def __init__(self, generators: Sequence[GroupElement], caps: Caps):
        self.caps = caps
        identity = generators[0].identity_like()
        elements: List[GroupElement] = [identity]
        index: Dict[GroupElement, int] = {identity: 0}
        parent, parent_slot = [-1], [-1]
        right: List[List[int]] = [[] for _ in generators]

        pos = 0
        while pos < len(elements):
            x = elements[pos]
            for slot, g in enumerate(generators):
                y = x * g
                j = index.get(y)
                if j is None:
                    j = len(elements)
                    if j >= caps.max_order:
                        raise CapExceeded(
                            f"closure exceeds the order cap of {caps.max_order}"
                        )
                    elements.append(y)
                    index[y] = j
                    parent.append(pos)
                    parent_slot.append(slot)
                right[slot].append(j)
            pos += 1

        self.elements: Tuple[GroupElement, ...] = tuple(elements)
        self.index = index
        self.size = len(elements)
        self.identity = 0
        self.generator_indices = tuple(index[g] for g in generators)
        self.right = tuple(np.asarray(r, dtype=np.int64) for r in right)
        self._right_by_index = {}
        for slot, g in enumerate(self.generator_indices):
            self._right_by_index.setdefault(g, self.right[slot])

        n = self.size
        self.table: Optional[np.ndarray] = None
        if n <= caps.table_cap:
            table = np.empty((n, n), dtype=np.int64)
            table[:, 0] = np.arange(n)
            for j in range(1, n):
                table[:, j] = self.right[parent_slot[j]][table[:, parent[j]]]
            self.table = table
            has_inverse = (table == 0).any(axis=1)
            if not has_inverse.all():
                bad = self.elements[int(np.flatnonzero(~has_inverse)[0])]
                raise IncompatibleGenerators(f"generators do not close into a group: {bad} has no inverse")
            self.inv = np.argmax(table == 0, axis=1).astype(np.int64)
            self.orders = self._orders_from_table()
        else:
            self.inv = np.fromiter(
                (index[e.inverse()] for e in elements), dtype=np.int64, count=n
            )
            self.orders = None

        ranked = sorted(range(n), key=lambda i: self.elements[i].key())
        self.rank = np.empty(n, dtype=np.int64)
        self.rank[ranked] = np.arange(n)

        for arr in (self.inv, self.rank, *self.right):
            arr.setflags(write=False)
        if self.table is not None:
            self.table.setflags(write=False)
            self.orders.setflags(write=False)
        logger.debug(
            f"Enumerated {n} elements from {len(generators)} generators"
            f" (table={'yes' if self.table is not None else 'no'})"
        )

    def _orders_from_table(self) -> np.ndarray:
        n = self.size
        orders = np.zeros(n, dtype=np.int64)
        ar = np.arange(n)
        cur = ar.copy()
        for k in range(1, n + 1):
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            if orders.all():
                return orders
            cur = self.table[cur, ar]
        raise IncompatibleGenerators("some element has no finite order: the closure is not a group")

    # products

    def mul(self, a: int, b: int) -> int:
        if self.table is not None:
            return int(self.table[a, b])
        return self.index[self.elements[a] * self.elements[b]]

    def mul_many(self, a, b) -> np.ndarray:
        """Element-wise products of broadcast index arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.table is not None:
            return self.table[a, b]
        if b.ndim == 0 and int(b) in self._right_by_index:
            return self._right_by_index[int(b)][a]
        a, b = np.broadcast_arrays(a, b)
        flat = np.fromiter(
            (self.index[self.elements[i] * self.elements[j]] for i, j in zip(a.ravel(), b.ravel())),
            dtype=np.int64,
            count=a.size,
        )
        return flat.reshape(a.shape)

    def commutator(self, a: int, b: int) -> int:
        return self.mul(self.mul(int(self.inv[a]), int(self.inv[b])), self.mul(a, b))

    def commutator_many(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return self.mul_many(self.mul_many(self.inv[a], self.inv[b]), self.mul_many(a, b))

    def conjugate_many(self, x, g) -> np.ndarray:
        """g^-1 x g."""
        g = np.asarray(g, dtype=np.int64)
        return self.mul_many(self.mul_many(self.inv[g], x), g)

    def element_order(self, a: int) -> int:
        if self.orders is not None:
            return int(self.orders[a])
        k, cur = 1, a
        while cur != self.identity:
            cur = self.mul(cur, a)
            k += 1
        return k

    def locate(self, element: GroupElement) -> int:
        j = self.index.get(element)
        if j is None:
            raise ElementNotInGroup(f"{element} is not an element of this group")
        return j

    # closures

    def closure(self, gens: Iterable[int]) -> np.ndarray:
        gens = np.asarray(sorted(set(int(g) for g in gens)), dtype=np.int64)
        seen = np.zeros(self.size, dtype=bool)
        seen[self.identity] = True
        frontier = np.array([self.identity], dtype=np.int64)
        while frontier.size and gens.size:
            prods = self.mul_many(frontier[:, None], gens[None, :]).ravel()
            prods = np.unique(prods)
            fresh = prods[~seen[prods]]
            seen[fresh] = True
            frontier = fresh
        return np.flatnonzero(seen)

    def spanning_tree(self, gens: Sequence[int]) -> List[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
        """
        Shortest-word tree of the subgroup generated by gens

        Returns:
            Levels of (children, parents, generator slots) with
            child = parent * gens[slot]
        """
        gens = np.asarray(gens, dtype=np.int64)
        seen = np.zeros(self.size, dtype=bool)
        seen[self.identity] = True
        frontier = np.array([self.identity], dtype=np.int64)
        levels = []
        while frontier.size and gens.size:
            k = frontier.size
            parents = np.tile(frontier, gens.size)
            slots = np.repeat(np.arange(gens.size), k)
            prods = self.mul_many(parents, gens[slots])
            uniq, first = np.unique(prods, return_index=True)
            fresh = ~seen[uniq]
            children = uniq[fresh]
            pos = first[fresh]
            seen[children] = True
            if children.size:
                levels.append((children, parents[pos], slots[pos]))
            frontier = children
        return levels

    def generated(self, candidates: Iterable[int], name: str = "") -> "FiniteGroup":
        """Subgroup generated by candidates, keeping a small greedy generating set."""
        cand = np.unique(np.asarray(list(candidates), dtype=np.int64))
        mask = np.zeros(self.size, dtype=bool)
        mask[self.identity] = True
        gens: List[int] = []
        members = np.array([self.identity], dtype=np.int64)
        for c in cand:
            if not mask[c]:
                gens.append(int(c))
                members = self.closure(gens)
                mask[:] = False
                mask[members] = True
        return FiniteGroup(self, members, gens, name)

    def whole(self, name: str = "") -> "FiniteGroup":
        return FiniteGroup(self, np.arange(self.size), self.generator_indices, name)


# --------------------------------------------------------------------------
# Groups as views
# --------------------------------------------------------------------------


class FiniteGroup:
    """Subgroup of an enumerated ambient group."""

    def __init__(self, ambient: Ambient, members: np.ndarray, generators: Sequence[int], name: str = ""):
        self.ambient = ambient
        self.members = np.asarray(members, dtype=np.int64)
        self.members.setflags(write=False)
        self.mask = np.zeros(ambient.size, dtype=bool)
        self.mask[self.members] = True
        self.mask.setflags(write=False)
        gens = tuple(int(g) for g in generators if int(g) != ambient.identity)
        self.generators = gens or (ambient.identity,)
        self.caps = ambient.caps
        self.name = name

    @property
    def order(self) -> int:
        return int(self.members.size)

    def __len__(self) -> int:
        return self.order

    @property
    def identity(self) -> int:
        return self.ambient.identity

    def signature(self) -> bytes:
        return self.members.tobytes()

    def sort_key(self) -> Tuple[int, ...]:
        """Sorted canonical-form ranks; orders subgroup lists deterministically."""
        return tuple(np.sort(self.ambient.rank[self.members]).tolist())

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteGroup)
            and other.ambient is self.ambient
            and np.array_equal(other.members, self.members)
        )

    def __hash__(self) -> int:
        return hash(self.signature())

    def __contains__(self, x: Union[int, GroupElement]) -> bool:
        if isinstance(x, GroupElement):
            j = self.ambient.index.get(x)
            return j is not None and bool(self.mask[j])
        return bool(self.mask[int(x)])

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<FiniteGroup{label} order={self.order}>"

    def element(self, i: int) -> GroupElement:
        return self.ambient.elements[int(i)]

    def elements(self) -> List[GroupElement]:
        return [self.ambient.elements[i] for i in self.members]

    def generator_elements(self) -> List[GroupElement]:
        return [self.ambient.elements[i] for i in self.generators]

    def index_of(self, x: Union[int, GroupElement]) -> int:
        j = self.ambient.locate(x) if isinstance(x, GroupElement) else int(x)
        if not (0 <= j < self.ambient.size) or not self.mask[j]:
            raise ElementNotInGroup(f"{self.ambient.elements[j] if 0 <= j < self.ambient.size else j} is not in {self!r}")
        return j

    def subgroup(self, gens: Iterable[int], name: str = "") -> "FiniteGroup":
        gens = [self.index_of(g) for g in gens]
        return FiniteGroup(self.ambient, self.ambient.closure(gens), gens, name)

    def span(self, candidates: Iterable[int], name: str = "") -> "FiniteGroup":
        return self.ambient.generated(candidates, name)

    def trivial_subgroup(self) -> "FiniteGroup":
        return FiniteGroup(self.ambient, np.array([self.identity]), (), "1")

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_subgroup_of(self, other: "FiniteGroup") -> bool:
        return other.ambient is self.ambient and bool(other.mask[self.members].all())

    def is_abelian(self) -> bool:
        amb = self.ambient
        return all(
            amb.mul(a, b) == amb.mul(b, a)
            for a, b in itertools.combinations(self.generators, 2)
        )

    def element_order(self, x: Union[int, GroupElement]) -> int:
        return self.ambient.element_order(self.index_of(x))

    def index_in(self, other: "FiniteGroup") -> int:
        return other.order // self.order

    @cached_property
    def word_tree(self) -> List[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
        # Deterministic in (ambient, generators); a concurrent first access
        # computes an identical tree, so sharing a group between threads is safe.
        return self.ambient.spanning_tree(self.generators)

    def with_generators(self, gens: Sequence[int]) -> "FiniteGroup":
        """Same subgroup presented on other generators (which must generate it)."""
        view = self.subgroup(gens, self.name)
        if view != self:
            raise InvalidParameter("generators do not generate the group")
        return view


# --------------------------------------------------------------------------
# Homomorphisms
# --------------------------------------------------------------------------


class Homomorphism:
    """Total map between two enumerated groups, stored as an index array."""

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, images: np.ndarray, verified: bool = False):
        self.domain = domain
        self.codomain = codomain
        self.images = np.asarray(images, dtype=np.int64)
        self.images.setflags(write=False)
        self.verified = verified

    def __call__(self, x: Union[int, GroupElement]) -> int:
        return int(self.images[self.domain.index_of(x)])

    def apply(self, x: GroupElement) -> GroupElement:
        return self.codomain.element(self(x))

    def kernel(self, name: str = "") -> FiniteGroup:
        dom = self.domain.members
        return self.domain.span(dom[self.images[dom] == self.codomain.identity], name or "ker")

    def image(self, name: str = "") -> FiniteGroup:
        return self.codomain.span(np.unique(self.images[self.domain.members]), name or "im")

    def preimage(self, subgroup: FiniteGroup, name: str = "") -> FiniteGroup:
        dom = self.domain.members
        return self.domain.span(dom[subgroup.mask[self.images[dom]]], name or "preimage")

    def is_injective(self) -> bool:
        return np.unique(self.images[self.domain.members]).size == self.domain.order

    def is_bijective(self) -> bool:
        return self.is_injective() and self.domain.order == self.codomain.order

    def check(self, exhaustive: bool = True) -> bool:
        return _images_are_homomorphic(self.domain, self.codomain, self.images, exhaustive)


def _images_are_homomorphic(domain: FiniteGroup, codomain: FiniteGroup, images: np.ndarray, exhaustive: bool = True) -> bool:
    dom = domain.members
    img = images[dom]
    if (img < 0).any() or not codomain.mask[img].all():
        return False
    if images[domain.identity] != codomain.identity:
        return False
    da, ca = domain.ambient, codomain.ambient
    n = domain.order
    if exhaustive and da.table is not None and ca.table is not None and n * n <= domain.caps.tuple_budget:
        step = max(1, (1 << 22) // n)
        for start in range(0, n, step):
            rows = dom[start:start + step]
            lhs = images[da.table[np.ix_(rows, dom)]]
            rhs = ca.table[np.ix_(images[rows], img)]
            if not np.array_equal(lhs, rhs):
                return False
        return True
    # f(xs) = f(x) f(s) for every x and generator s already forces f(xy) = f(x) f(y)
    for g in domain.generators:
        lhs = images[da.mul_many(dom, g)]
        rhs = ca.mul_many(img, images[g])
        if not np.array_equal(lhs, rhs):
            return False
    return True


def _extend_along_tree(domain: FiniteGroup, codomain: FiniteGroup, gen_images: np.ndarray, tree) -> np.ndarray:
    images = np.full(domain.ambient.size, -1, dtype=np.int64)
    images[domain.identity] = codomain.identity
    for children, parents, slots in tree:
        images[children] = codomain.ambient.mul_many(images[parents], gen_images[slots])
    return images


def homomorphism_from_images(
    domain: FiniteGroup,
    codomain: FiniteGroup,
    generator_images: Sequence[Union[int, GroupElement]],
) -> Homomorphism:
    """
    Extend an assignment on the domain generators multiplicatively

    The extension follows the shortest-word tree of the generators and is then
    checked on all products; an inconsistent assignment raises NotAHomomorphism.
    """
    if len(generator_images) != len(domain.generators):
        raise MalformedInput(
            f"expected {len(domain.generators)} generator images, got {len(generator_images)}"
        )
    gen_images = np.asarray([codomain.index_of(x) for x in generator_images], dtype=np.int64)
    images = _extend_along_tree(domain, codomain, gen_images, domain.word_tree)
    if not _images_are_homomorphic(domain, codomain, images):
        raise NotAHomomorphism("generator images do not extend to a homomorphism")
    return Homomorphism(domain, codomain, images, verified=True)


# --------------------------------------------------------------------------
# Construction
# --------------------------------------------------------------------------


def enumerate_group(
    generators: Sequence[GroupElement],
    cap: Optional[int] = None,
    caps: Optional[Caps] = None,
    name: str = "",
) -> FiniteGroup:
    """Closure of the generators under product and inverse."""
    if not generators:
        raise MalformedInput("at least one generator is required")
    params = None
    for g in generators:
        if not isinstance(g, GroupElement):
            raise IncompatibleGenerators(f"not a group element: {g!r}")
        if params is None:
            params = g.ambient_params()
        elif g.ambient_params() != params:
            raise IncompatibleGenerators(
                f"generator {g} does not share ambient parameters {params}"
            )
    caps = caps or Caps.default()
    if cap is not None:
        caps = replace(caps, max_order=cap)
    return Ambient(generators, caps).whole(name)


def symmetric_group(degree: int, caps: Optional[Caps] = None) -> FiniteGroup:
    if degree < 1:
        raise InvalidParameter(f"degree must be positive, got {degree}")
    if degree == 1:
        gens = [PermutationElement.identity(1)]
    elif degree == 2:
        gens = [PermutationElement([1, 0])]
    else:
        gens = [
            PermutationElement.from_cycles([[1, 2]], degree),
            PermutationElement.from_cycles([list(range(1, degree + 1))], degree),
        ]
    return enumerate_group(gens, caps=caps, name=f"Sym({degree})")


def direct_product(first: FiniteGroup, second: FiniteGroup, name: str = "") -> FiniteGroup:
    e1 = first.element(first.identity)
    e2 = second.element(second.identity)
    gens = [TupleElement([g, e2]) for g in first.generator_elements()]
    gens += [TupleElement([e1, h]) for h in second.generator_elements()]
    return enumerate_group(gens, caps=first.caps, name=name or f"{first.name}x{second.name}")


# --------------------------------------------------------------------------
# Subgroup machinery
# --------------------------------------------------------------------------


def center(G: FiniteGroup) -> FiniteGroup:
    return centralizer(G, G.generators, name=f"Z({G.name})" if G.name else "Z")


def centralizer(G: FiniteGroup, S: Iterable[Union[int, GroupElement]], name: str = "") -> FiniteGroup:
    """All g in G commuting with every element of S."""
    if isinstance(S, FiniteGroup):
        S = S.generators
    amb = G.ambient
    members = G.members
    keep = np.ones(members.size, dtype=bool)
    for s in S:
        s = G.index_of(s)
        keep &= amb.mul_many(members, s) == amb.mul_many(s, members)
    return G.span(members[keep], name or "C")


def is_normal(N: FiniteGroup, G: FiniteGroup) -> bool:
    if not N.is_subgroup_of(G):
        return False
    amb = G.ambient
    ngens = np.asarray(N.generators, dtype=np.int64)
    return all(N.mask[amb.conjugate_many(ngens, g)].all() for g in G.generators)


def normal_closure(S: Iterable[int], G: FiniteGroup, name: str = "") -> FiniteGroup:
    """Smallest subgroup containing S and normalized by G."""
    amb = G.ambient
    gens = sorted(set(int(s) for s in S) - {amb.identity})
    mask = np.zeros(amb.size, dtype=bool)
    mask[amb.closure(gens)] = True
    changed = True
    while changed:
        changed = False
        for g in G.generators:
            conj = amb.conjugate_many(np.asarray(gens, dtype=np.int64), g)
            for x in conj:
                if not mask[x]:
                    gens.append(int(x))
                    mask[:] = False
                    mask[amb.closure(gens)] = True
                    changed = True
    return FiniteGroup(amb, np.flatnonzero(mask), gens, name)


def commutator_subgroup(A: FiniteGroup, B: FiniteGroup, name: str = "") -> FiniteGroup:
    """
    [A, B], the subgroup generated by all [a, b]

    Computed as the normal closure in <A, B> of the generator commutators,
    which yields the same subgroup.
    """
    if A.ambient is not B.ambient:
        raise MalformedInput("commutator of subgroups of different groups")
    amb = A.ambient
    a = np.asarray(A.generators, dtype=np.int64)
    b = np.asarray(B.generators, dtype=np.int64)
    seeds = amb.commutator_many(a[:, None], b[None, :]).ravel()
    joint = amb.generated(list(A.generators) + list(B.generators))
    return normal_closure(seeds, joint, name or f"[{A.name or 'A'},{B.name or 'B'}]")


def quotient(G: FiniteGroup, N: FiniteGroup, name: str = "") -> Tuple[FiniteGroup, Homomorphism]:
    """G/N with coset elements and the verified projection."""
    if not is_normal(N, G):
        raise NotNormal(f"{N!r} is not a normal subgroup of {G!r}")
    amb = G.ambient
    labels = np.full(amb.size, -1, dtype=np.int64)
    for g in G.members:
        if labels[g] < 0:
            coset = amb.mul_many(g, N.members)
            labels[coset] = coset.min()
    space = CosetSpace(G, N, labels)
    gens = [CosetElement(int(labels[g]), space) for g in G.generators]
    Q = enumerate_group(gens, caps=G.caps, name=name or f"{G.name or 'G'}/{N.name or 'N'}")

    reps = np.unique(labels[G.members])
    rep_to_q = np.full(amb.size, -1, dtype=np.int64)
    for r in reps:
        rep_to_q[r] = Q.ambient.locate(CosetElement(int(r), space))
    images = np.full(amb.size, -1, dtype=np.int64)
    images[G.members] = rep_to_q[labels[G.members]]
    projection = Homomorphism(G, Q, images)
    if Q.order * N.order != G.order or not projection.check():
        raise VerificationFailed("quotient projection failed verification")
    projection.verified = True
    logger.debug(f"Quotient of order {G.order} by {N.order} has order {Q.order}")
    return Q, projection


def conjugacy_classes(G: FiniteGroup) -> List[np.ndarray]:
    amb = G.ambient
    labels = np.full(amb.size, -1, dtype=np.int64)
    classes = []
    for x in G.members:
        if labels[x] >= 0:
            continue
        orbit = np.array([x], dtype=np.int64)
        labels[x] = x
        frontier = orbit
        while frontier.size:
            found = np.unique(np.concatenate([amb.conjugate_many(frontier, g) for g in G.generators]))
            fresh = found[labels[found] < 0]
            labels[fresh] = x
            orbit = np.concatenate([orbit, fresh])
            frontier = fresh
        classes.append(np.sort(orbit))
    return classes


def _cyclic_generators(amb: Ambient, x: int) -> np.ndarray:
    """Every generator x^k (k prime to the order) of the cyclic subgroup <x>."""
    order = amb.element_order(x)
    power, powers = x, []
    for k in range(1, order + 1):
        if math.gcd(k, order) == 1:
            powers.append(power)
        power = amb.mul(power, x)
    return np.asarray(powers, dtype=np.int64)


def cyclic_subgroups(G: FiniteGroup) -> List[FiniteGroup]:
    """One entry per cyclic subgroup, generated by its least-index generator."""
    amb = G.ambient
    covered = np.zeros(amb.size, dtype=bool)
    out = []
    for x in G.members:
        if covered[x]:
            continue
        covered[_cyclic_generators(amb, int(x))] = True
        out.append(G.subgroup([int(x)]))
    return out


def maximal_order_abelian_subgroups(G: FiniteGroup) -> List[FiniteGroup]:
    """
    All abelian subgroups of largest order

    Depth-first search over abelian subgroups containing Z(G), extending by
    one centralizing element at a time. A branch is dropped once its
    centralizer is smaller than the best order found, since every abelian
    subgroup containing S lies in C(S).
    """
    amb = G.ambient
    best = 0
    found: Dict[bytes, FiniteGroup] = {}
    visited = set()
    stack = [center(G)]
    while stack:
        S = stack.pop()
        sig = S.signature()
        if sig in visited:
            continue
        visited.add(sig)
        if len(visited) > G.caps.census_budget:
            raise CensusCapExceeded(f"abelian subgroup search exceeded {G.caps.census_budget} nodes")
        C = centralizer(G, S.generators)
        if C.order < best:
            continue
        if S.order > best:
            best, found = S.order, {}
        if S.order == best:
            found[sig] = S
        covered = S.mask.copy()
        for x in C.members:
            if covered[x]:
                continue
            # x^k s gives the same extension for k prime to ord(x) and s in S
            same = amb.mul_many(_cyclic_generators(amb, int(x))[:, None], S.members[None, :])
            covered[same.ravel()] = True
            stack.append(G.subgroup(list(S.generators) + [int(x)]))
    logger.debug(f"{len(found)} abelian subgroups of maximal order {best} ({len(visited)} visited)")
    return sort_subgroups(found.values())


def sort_subgroups(groups: Iterable[FiniteGroup]) -> List[FiniteGroup]:
    return sorted(groups, key=lambda H: H.sort_key())


def _join_search(G: FiniteGroup, target: Optional[int], budget: int) -> Dict[bytes, FiniteGroup]:
    """Subgroups reachable by joining cyclic subgroups; orders restricted to divisors of target."""
    bound = target or G.order
    pieces = [C for C in cyclic_subgroups(G) if bound % C.order == 0]
    trivial = G.trivial_subgroup()
    seen: Dict[bytes, FiniteGroup] = {trivial.signature(): trivial}
    queue = [trivial]
    while queue:
        H = queue.pop()
        if target is not None and H.order == target:
            continue
        for C in pieces:
            if H.mask[C.generators[0]]:
                continue
            K = G.subgroup(list(H.generators) + list(C.generators))
            if bound % K.order:
                continue
            sig = K.signature()
            if sig in seen:
                continue
            seen[sig] = K
            if len(seen) > budget:
                raise CensusCapExceeded(f"subgroup search exceeded {budget} subgroups")
            queue.append(K)
    return seen


def all_subgroups(G: FiniteGroup) -> List[FiniteGroup]:
    """Every subgroup of G, ordered by (order, canonical forms)."""
    if G.order > G.caps.search_cap:
        raise CensusCapExceeded(f"|G| = {G.order} exceeds the search cap {G.caps.search_cap}")
    found = _join_search(G, None, G.caps.census_budget)
    logger.debug(f"Subgroup lattice of order-{G.order} group has {len(found)} members")
    return sorted(found.values(), key=lambda H: (H.order, H.sort_key()))


def subgroups_of_index_direct(G: FiniteGroup, J: int) -> List[FiniteGroup]:
    """Extend-and-close search restricted to subgroups of order dividing |G|/J."""
    if J < 1:
        raise InvalidParameter(f"index must be positive, got {J}")
    if G.order % J:
        return []
    if J == 1:
        return [G]
    target = G.order // J
    found = _join_search(G, target, G.caps.census_budget)
    return sort_subgroups(H for H in found.values() if H.order == target)


@dataclass(frozen=True)
class ActionCensus:
    """Outcome of the coset-action encoding of index-J subgroups."""

    subgroups: Tuple[FiniteGroup, ...]
    candidates: int
    homomorphisms: int
    transitive: int
    rank: int


def subgroups_of_index_by_action(G: FiniteGroup, J: int) -> ActionCensus:
    """
    Index-J subgroups as point stabilizers of transitive actions on J points

    Homomorphisms G -> Sym(J) are enumerated by backtracking over images of a
    minimal generating set, restricted to elements whose order divides the
    generator's order.
    """
    if J < 1:
        raise InvalidParameter(f"index must be positive, got {J}")
    gens = minimal_generating_set(G)
    if G.order % J:
        return ActionCensus((), 0, 0, 0, len(gens))
    S = symmetric_group(J, caps=G.caps)
    s_amb = S.ambient
    s_orders = np.array([s_amb.element_order(k) for k in range(s_amb.size)], dtype=np.int64)
    choices = [
        np.flatnonzero(G.element_order(g) % s_orders == 0) for g in gens
    ]
    total = math.prod(len(c) for c in choices)
    if total > G.caps.census_budget:
        raise CensusCapExceeded(
            f"{total} candidate actions of degree {J} exceed the census budget {G.caps.census_budget}"
        )

    domain = G.with_generators(gens)
    tree = domain.word_tree
    perms = [s_amb.elements[k] for k in range(s_amb.size)]
    fixes_zero = np.array([p(0) == 0 for p in perms], dtype=bool)

    stabilizers: Dict[bytes, FiniteGroup] = {}
    homs = transitive = 0
    for combo in itertools.product(*choices):
        gen_images = np.asarray(combo, dtype=np.int64)
        images = _extend_along_tree(domain, S, gen_images, tree)
        if not _images_are_homomorphic(domain, S, images, exhaustive=False):
            continue
        homs += 1
        orbit, frontier = {0}, [0]
        while frontier:
            point = frontier.pop()
            for k in combo:
                nxt = perms[k](point)
                if nxt not in orbit:
                    orbit.add(nxt)
                    frontier.append(nxt)
        if len(orbit) != J:
            continue
        transitive += 1
        stab = G.members[fixes_zero[images[G.members]]]
        sig = stab.tobytes()
        if sig not in stabilizers:
            stabilizers[sig] = G.span(stab)
    logger.debug(
        f"Coset-action census J={J}: {total} candidates, {homs} homomorphisms, {transitive} transitive"
    )
    return ActionCensus(tuple(sort_subgroups(stabilizers.values())), total, homs, transitive, len(gens))


def subgroups_of_index(G: FiniteGroup, J: int, method: str = "both") -> List[FiniteGroup]:
    if method == "direct":
        return subgroups_of_index_direct(G, J)
    if method == "action":
        return list(subgroups_of_index_by_action(G, J).subgroups)
    if method != "both":
        raise InvalidParameter(f"unknown census method: {method}")
    direct = subgroups_of_index_direct(G, J)
    action = list(subgroups_of_index_by_action(G, J).subgroups)
    if [H.signature() for H in direct] != [H.signature() for H in action]:
        raise VerificationFailed(f"census methods disagree at index {J}")
    return direct


def minimal_generating_set(G: FiniteGroup) -> Tuple[int, ...]:
    """
    A generating set of least size

    The first generator ranges over conjugacy class representatives, the rest
    over one generator per cyclic subgroup; subgroups already reached with at
    least as many remaining slots are not revisited.
    """
    if G.order > G.caps.search_cap:
        raise CensusCapExceeded(f"|G| = {G.order} exceeds the search cap {G.caps.search_cap}")
    if G.is_trivial():
        return (G.identity,)
    cyclics = [C for C in cyclic_subgroups(G) if not C.is_trivial()]
    for C in cyclics:
        if C.order == G.order:
            return (C.generators[0],)
    reps = [C.generators[0] for C in cyclics]
    firsts = [int(cls[0]) for cls in conjugacy_classes(G) if cls[0] != G.identity]

    def search(chosen: List[int], H: FiniteGroup, slots: int, seen: Dict[bytes, int]) -> Optional[List[int]]:
        if H.order == G.order:
            return chosen
        if slots == 0:
            return None
        for x in reps:
            if H.mask[x]:
                continue
            K = G.subgroup(chosen + [x])
            sig = K.signature()
            if seen.get(sig, -1) >= slots - 1:
                continue
            seen[sig] = slots - 1
            found = search(chosen + [x], K, slots - 1, seen)
            if found:
                return found
        return None

    for k in range(2, len(G.members).bit_length() + 1):
        seen: Dict[bytes, int] = {}
        for x in firsts:
            found = search([x], G.subgroup([x]), k - 1, seen)
            if found:
                logger.debug(f"Minimal generating set of size {k} for order {G.order}")
                return tuple(found)
    raise VerificationFailed("no generating set found within log2|G| elements")


def min_generator_count(G: FiniteGroup) -> int:
    return len(minimal_generating_set(G))


def automorphism_group(G: FiniteGroup) -> List[Homomorphism]:
    """All automorphisms, by backtracking over order-preserving generator images."""
    if G.order > G.caps.automorphism_cap:
        raise CensusCapExceeded(
            f"|G| = {G.order} exceeds the automorphism cap {G.caps.automorphism_cap}"
        )
    gens = minimal_generating_set(G)
    orders = np.array([G.ambient.element_order(int(x)) for x in G.members], dtype=np.int64)
    choices = [G.members[orders == G.element_order(g)] for g in gens]
    total = math.prod(len(c) for c in choices)
    if total > G.caps.census_budget:
        raise CensusCapExceeded(f"{total} candidate automorphisms exceed the census budget")

    domain = G.with_generators(gens)
    tree = domain.word_tree
    auts = []
    for combo in itertools.product(*choices):
        images = _extend_along_tree(domain, G, np.asarray(combo, dtype=np.int64), tree)
        if np.unique(images[G.members]).size != G.order:
            continue
        if not _images_are_homomorphic(domain, G, images, exhaustive=False):
            continue
        auts.append(Homomorphism(G, G, images, verified=True))
    logger.debug(f"Found {len(auts)} automorphisms of a group of order {G.order}")
    return auts


def is_characteristic(H: FiniteGroup, automorphisms: Sequence[Homomorphism]) -> bool:
    return all(H.mask[aut.images[H.members]].all() for aut in automorphisms)
