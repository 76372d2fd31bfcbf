"""
Central series, nilpotency class and iterated commutators

Indexing: gamma_0 = G, gamma_{i+1} = [gamma_i, G]; Z_0 = 1, Z_{i+1}/Z_i = Z(G/Z_i).
A group has class c when gamma_c = 1 (equivalently Z_c = G), so the trivial
group has class 0 and a nontrivial abelian group class 1.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ClassTooLarge, NotCentral, VerificationFailed
from .groupcore import (
    FiniteGroup,
    GroupElement,
    Homomorphism,
    center,
    commutator_subgroup,
    quotient,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CentralSeriesReport:
    kind: str
    chain: Tuple[FiniteGroup, ...]
    nilpotency_class: Optional[int]

    @property
    def orders(self) -> List[int]:
        return [H.order for H in self.chain]


def lower_central_series(G: FiniteGroup) -> CentralSeriesReport:
    chain = [G]
    while not chain[-1].is_trivial():
        nxt = commutator_subgroup(chain[-1], G, name=f"gamma_{len(chain)}")
        if nxt == chain[-1]:
            break
        chain.append(nxt)
    cls = len(chain) - 1 if chain[-1].is_trivial() else None
    return CentralSeriesReport("lower", tuple(chain), cls)


def upper_central_series(G: FiniteGroup) -> CentralSeriesReport:
    chain = [G.trivial_subgroup()]
    while chain[-1] != G:
        Q, projection = quotient(G, chain[-1])
        nxt = projection.preimage(center(Q), name=f"Z_{len(chain)}")
        if nxt == chain[-1]:
            break
        chain.append(nxt)
    cls = len(chain) - 1 if chain[-1] == G else None
    return CentralSeriesReport("upper", tuple(chain), cls)


def nilpotency_class(G: FiniteGroup) -> Optional[int]:
    return lower_central_series(G).nilpotency_class


def central_series_agree(G: FiniteGroup) -> bool:
    return lower_central_series(G).nilpotency_class == upper_central_series(G).nilpotency_class


def iterated_commutator(*elements: GroupElement) -> GroupElement:
    """Left-nested commutator [[...[g1, g2], g3]..., gk] with [a, b] = a^-1 b^-1 a b."""
    if not elements:
        raise ValueError("iterated_commutator needs at least one element")
    acc = elements[0]
    for g in elements[1:]:
        acc = acc.inverse() * g.inverse() * acc * g
    return acc


def _nested_indices(G: FiniteGroup, sequence: Sequence[Union[int, np.ndarray]]) -> np.ndarray:
    amb = G.ambient
    acc = np.asarray(sequence[0], dtype=np.int64)
    for item in sequence[1:]:
        acc = amb.commutator_many(acc, item)
    return acc


@dataclass(frozen=True)
class NilpotencyVerdict:
    """
    Answer to "is G nilpotent of class at most n"

    ``witness`` is a tuple of ambient indices whose nested commutator is
    nontrivial, present whenever ``holds`` is false.
    """

    holds: bool
    n: int
    series_class: Optional[int]
    method: str
    tuples_checked: int
    witness: Optional[Tuple[int, ...]] = None


def _exhaustive_witness(G: FiniteGroup, n: int) -> Optional[Tuple[int, ...]]:
    """
    Least nonvanishing (n+1)-tuple, or None

    Iterates value sets S_1 = G, S_{k+1} = {[s, g]}, remembering for every
    value the lexicographically least tuple that produces it.
    """
    amb = G.ambient
    members = G.members
    prefix = {int(g): (int(g),) for g in members}
    for _ in range(n):
        nxt = {}
        for s in sorted(prefix, key=prefix.get):
            values = amb.commutator_many(s, members)
            for g, v in zip(members, values):
                v = int(v)
                if v not in nxt:
                    nxt[v] = prefix[s] + (int(g),)
        prefix = nxt
    bad = [t for v, t in prefix.items() if v != amb.identity]
    return min(bad) if bad else None


def _sampled_witness(G: FiniteGroup, n: int, samples: int, seed: int) -> Optional[Tuple[int, ...]]:
    rng = random.Random(seed)
    members = G.members.tolist()
    found = None
    for _ in range(samples):
        tup = tuple(rng.choice(members) for _ in range(n + 1))
        if int(_nested_indices(G, tup)) != G.identity:
            if found is None or tup < found:
                found = tup
    return found


def _generator_witness(G: FiniteGroup, n: int) -> Optional[Tuple[int, ...]]:
    # gamma_n is generated by weight-(n+1) commutators of generators
    for tup in itertools.product(G.generators, repeat=n + 1):
        if int(_nested_indices(G, tup)) != G.identity:
            return tup
    return None


def is_nilpotent_of_class_at_most(G: FiniteGroup, n: int) -> NilpotencyVerdict:
    """
    Class test by the lower central series, cross-checked on commutator tuples

    All (n+1)-tuples are evaluated when |G|^(n+1) fits the tuple budget,
    otherwise a seeded random sample is.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    series_class = nilpotency_class(G)
    holds = series_class is not None and series_class <= n
    caps = G.caps
    total = G.order ** (n + 1)
    if total <= caps.tuple_budget:
        method, checked = "exhaustive", total
        witness = _exhaustive_witness(G, n)
        if (witness is None) != holds:
            raise VerificationFailed(
                f"commutator tuples disagree with the lower central series at n={n}"
            )
    else:
        method, checked = "sampled", caps.sample_tuples
        witness = _sampled_witness(G, n, caps.sample_tuples, caps.seed)
        if witness is not None and holds:
            raise VerificationFailed(f"sampled commutator tuple contradicts class <= {n}")
        if witness is None and not holds:
            witness = _generator_witness(G, n)
    logger.debug(f"class <= {n}: {holds} ({method}, {checked} tuples)")
    return NilpotencyVerdict(holds, n, series_class, method, checked, witness)


def phi_homomorphism(G: FiniteGroup, n: int, fixed: Sequence[int], slot: int) -> Homomorphism:
    """
    g -> nested commutator of fixed[0..], with g inserted at position slot (1-based)

    For class(G) <= n this is a homomorphism into gamma_{n-1}(G); it is
    verified exhaustively. With n = 1 the map is g -> g.
    """
    lower = lower_central_series(G)
    if lower.nilpotency_class is None or lower.nilpotency_class > n:
        raise ClassTooLarge(f"group is not nilpotent of class <= {n}")
    if not 1 <= slot <= n:
        raise ValueError(f"slot must lie in 1..{n}")
    if len(fixed) != n - 1:
        raise ValueError(f"expected {n - 1} fixed elements, got {len(fixed)}")
    fixed = [G.index_of(g) for g in fixed]
    sequence: List[Union[int, np.ndarray]] = list(fixed)
    sequence.insert(slot - 1, G.members)
    values = _nested_indices(G, [np.broadcast_to(np.asarray(x), G.members.shape) for x in sequence])
    images = np.full(G.ambient.size, -1, dtype=np.int64)
    images[G.members] = values
    codomain = lower.chain[n - 1] if n - 1 < len(lower.chain) else G.trivial_subgroup()
    hom = Homomorphism(G, codomain, images)
    if not hom.check():
        raise VerificationFailed(f"commutator map at slot {slot} is not a homomorphism")
    hom.verified = True
    return hom


@dataclass(frozen=True)
class CentralExtensionReport:
    quotient_class: Optional[int]
    group_class: Optional[int]
    holds: bool


def central_extension_check(G: FiniteGroup, A: FiniteGroup) -> CentralExtensionReport:
    """class(G) <= class(G/A) + 1 for central A."""
    amb = G.ambient
    if not A.is_subgroup_of(G) or any(
        amb.mul(a, g) != amb.mul(g, a) for a in A.generators for g in G.generators
    ):
        raise NotCentral("subgroup is not central")
    Q, _ = quotient(G, A)
    q_cls = nilpotency_class(Q)
    g_cls = nilpotency_class(G)
    holds = q_cls is None or (g_cls is not None and g_cls <= q_cls + 1)
    return CentralExtensionReport(q_cls, g_cls, holds)


def _prime_factors(n: int) -> List[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def sylow_subgroup(G: FiniteGroup, p: int) -> FiniteGroup:
    """A Sylow p-subgroup: any inclusion-maximal p-subgroup is one."""
    P = G.trivial_subgroup()
    for x in G.members:
        if P.mask[x] or not _is_power_of(G.ambient.element_order(int(x)), p):
            continue
        K = G.subgroup(list(P.generators) + [int(x)])
        if _is_power_of(K.order, p):
            P = K
    return P


@dataclass(frozen=True)
class SylowReport:
    primes: Tuple[int, ...]
    orders: Tuple[int, ...]
    commute: bool
    bijective: bool
    holds: bool


def sylow_product_check(G: FiniteGroup) -> SylowReport:
    """Is G the internal direct product of one Sylow subgroup per prime?"""
    amb = G.ambient
    primes = tuple(_prime_factors(G.order))
    sylows = [sylow_subgroup(G, p) for p in primes]
    commute = all(
        amb.mul(a, b) == amb.mul(b, a)
        for P, Q in itertools.combinations(sylows, 2)
        for a in P.generators
        for b in Q.generators
    )
    products = np.array([G.identity], dtype=np.int64)
    for P in sylows:
        products = np.unique(amb.mul_many(products[:, None], P.members[None, :]).ravel())
    bijective = math.prod(P.order for P in sylows) == G.order and products.size == G.order
    holds = commute and bijective
    nilpotent = nilpotency_class(G) is not None
    if holds != nilpotent:
        raise VerificationFailed("Sylow decomposition disagrees with the central series")
    return SylowReport(primes, tuple(P.order for P in sylows), commute, bijective, holds)
