"""
Group families used as witnesses and test inputs

Heisenberg p-groups show that no abelian subgroup of uniformly bounded index
exists across a family of class-2 groups; the semilinear catalog holds small
finite subgroups of GL(n, K) x| Aut(K) that satisfy the extraction pipeline's
hypotheses.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict
from sympy import isprime

from .config import Caps
from .cyclo import Cyclotomic, FieldAut
from .errors import InvalidParameter
from .groupcore import (
    FiniteGroup,
    HeisenbergElement,
    PermutationElement,
    direct_product,
    enumerate_group,
    symmetric_group,
)
from .matgrp import ExactMatrix, MatrixElement, SemilinearElement

logger = logging.getLogger(__name__)

Family = Literal[
    "heisenberg",
    "cyclic",
    "elementary_abelian",
    "dihedral",
    "quaternion",
    "symmetric",
    "direct_product",
    "semilinear_example",
]


class FamilySpec(BaseModel):
    """Family name plus its integer parameters; mirrors the witness subcommand flags."""

    model_config = ConfigDict(extra="forbid")

    family: Family
    p: Optional[int] = None
    n: Optional[int] = None
    index: Optional[int] = None
    factors: Optional[List["FamilySpec"]] = None


FamilySpec.model_rebuild()


def _require(value: Optional[int], name: str, family: str, minimum: int = 1) -> int:
    if value is None:
        raise InvalidParameter(f"{family} needs --{name}")
    if value < minimum:
        raise InvalidParameter(f"{family}: {name} must be at least {minimum}, got {value}")
    return value


def _prime(value: Optional[int], family: str) -> int:
    p = _require(value, "p", family, 2)
    if not isprime(p):
        raise InvalidParameter(f"{family}: p = {p} is not prime")
    return p


def heisenberg(p: int, caps: Optional[Caps] = None) -> FiniteGroup:
    p = _prime(p, "heisenberg")
    gens = [HeisenbergElement(1, 0, 0, p), HeisenbergElement(0, 1, 0, p)]
    return enumerate_group(gens, caps=caps, name=f"Heis({p})")


def cyclic(n: int, caps: Optional[Caps] = None) -> FiniteGroup:
    n = _require(n, "n", "cyclic")
    if n == 1:
        return enumerate_group([PermutationElement.identity(1)], caps=caps, name="C1")
    gen = PermutationElement.from_cycles([list(range(1, n + 1))], n)
    return enumerate_group([gen], caps=caps, name=f"C{n}")


def elementary_abelian(p: int, n: int, caps: Optional[Caps] = None) -> FiniteGroup:
    """(Z/p)^n as disjoint p-cycles on p*n points."""
    p = _prime(p, "elementary_abelian")
    n = _require(n, "n", "elementary_abelian")
    degree = p * n
    gens = [
        PermutationElement.from_cycles([list(range(k * p + 1, (k + 1) * p + 1))], degree)
        for k in range(n)
    ]
    return enumerate_group(gens, caps=caps, name=f"E({p}^{n})")


def dihedral(n: int, caps: Optional[Caps] = None) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    n = _require(n, "n", "dihedral", 3)
    rotation = PermutationElement.from_cycles([list(range(1, n + 1))], n)
    reflection = PermutationElement([(-i) % n for i in range(n)])
    return enumerate_group([rotation, reflection], caps=caps, name=f"D{n}")


def quaternion(n: int, caps: Optional[Caps] = None) -> FiniteGroup:
    """Dicyclic group of order 4n in GL(2, Q(z_2n)); n = 2 gives Q8."""
    n = _require(n, "n", "quaternion", 2)
    m = 2 * n
    a = ExactMatrix.diagonal([Cyclotomic.zeta(m), Cyclotomic.zeta(m, -1)], m)
    b = ExactMatrix.from_rows([[0, -1], [1, 0]], m)
    gens = [MatrixElement(a), MatrixElement(b)]
    return enumerate_group(gens, caps=caps, name=f"Q{4 * n}")


# --------------------------------------------------------------------------
# Semilinear catalog
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    """
    One curated finite subgroup of a semilinear group

    ``c`` is the class bound the extraction pipeline is run with; the image
    in Aut(K) has class ``gamma_class`` <= c.
    """

    name: str
    group: FiniteGroup
    c: int
    order: int
    gamma_order: int
    gamma_class: int
    expected_index: int
    description: str


def _semi(rows: Sequence[Sequence], m: int, transcendental: bool, galois: int = 1, mobius=None) -> SemilinearElement:
    return SemilinearElement(
        ExactMatrix.from_rows(rows, m, transcendental),
        FieldAut.create(m, galois, mobius, transcendental),
    )


_NEGATE_T = (-1, 0, 0, 1)
_INVERT_T = (0, 1, 1, 0)


def _catalog_specs() -> List[Tuple[str, list, int, int, int, int, int, str]]:
    z4 = Cyclotomic.zeta(4)
    z8 = Cyclotomic.zeta(8)
    z24_8 = Cyclotomic.zeta(24, 3)
    one, zero = 1, 0

    d4_rotation = _semi([[z4, zero], [zero, -z4]], 4, True)
    d4_flip = _semi([[zero, one], [one, zero]], 4, True, mobius=_NEGATE_T)
    invert_t = _semi([[one, zero], [zero, one]], 4, True, mobius=_INVERT_T)
    swap = [[zero, one, zero], [one, zero, zero], [zero, zero, one]]
    cycle = [[zero, zero, one], [one, zero, zero], [zero, one, zero]]
    scalar8 = [[z24_8 if i == j else zero for j in range(3)] for i in range(3)]

    return [
        ("d4-function-field", [d4_rotation, d4_flip], 1, 8, 2, 1, 2,
         "diag(z4, -z4) and the coordinate swap twisted by t -> -t over Q(z4)(t)"),
        ("monomial-s3", [_semi(scalar8, 24, False), _semi(swap, 24, False), _semi(cycle, 24, False)], 0, 48, 1, 0, 2,
         "z8 times the identity with the 3x3 permutation matrices over Q(z24)"),
        ("cyclic-kl1", [_semi([[z4]], 4, False)], 0, 4, 1, 0, 1,
         "z4 acting on the line over Q(z4)"),
        ("d4-klein", [d4_rotation, d4_flip, invert_t], 1, 16, 4, 1, 2,
         "the d4-function-field group extended by t -> 1/t"),
        ("diagonal-z8", [_semi([[z8, zero], [zero, z8**3]], 8, False)], 0, 8, 1, 0, 1,
         "diag(z8, z8^3) over Q(z8)"),
        ("scalar-swap", [_semi([[z4, zero], [zero, z4]], 4, False), _semi([[zero, one], [one, zero]], 4, False)],
         1, 8, 1, 0, 1,
         "z4 times the identity and the coordinate swap over Q(z4)"),
        ("kl1-function-field", [_semi([[z4]], 4, True), _semi([[one]], 4, True, mobius=_NEGATE_T)], 1, 8, 2, 1, 1,
         "z4 on the line together with t -> -t over Q(z4)(t)"),
        ("q8-function-field",
         [_semi([[z4, zero], [zero, -z4]], 4, True), _semi([[zero, -1], [one, zero]], 4, True),
          _semi([[one, zero], [zero, one]], 4, True, mobius=_NEGATE_T)],
         1, 16, 2, 1, 1,
         "Q8 together with t -> -t over Q(z4)(t)"),
    ]


_CATALOG_LOCK = threading.Lock()


@lru_cache(maxsize=None)
def _build_semilinear_catalog() -> Tuple[CatalogEntry, ...]:
    entries = []
    for name, gens, c, order, gamma_order, gamma_class, index, description in _catalog_specs():
        G = enumerate_group(gens, name=name)
        if G.order != order:
            raise InvalidParameter(f"catalog entry {name} has order {G.order}, expected {order}")
        entries.append(CatalogEntry(name, G, c, order, gamma_order, gamma_class, index, description))
    logger.debug(f"Built {len(entries)} semilinear catalog entries")
    return tuple(entries)


def semilinear_catalog() -> Tuple[CatalogEntry, ...]:
    """The curated entries, built once per process; the lock keeps concurrent first calls on one copy."""
    with _CATALOG_LOCK:
        return _build_semilinear_catalog()


def semilinear_example(index: int) -> CatalogEntry:
    catalog = semilinear_catalog()
    if index is None or not 0 <= index < len(catalog):
        raise InvalidParameter(f"semilinear example index must lie in 0..{len(catalog) - 1}")
    return catalog[index]


# --------------------------------------------------------------------------
# Dispatch
# --------------------------------------------------------------------------


def build(spec: FamilySpec, caps: Optional[Caps] = None) -> FiniteGroup:
    family = spec.family
    if family == "heisenberg":
        return heisenberg(spec.p, caps)
    if family == "cyclic":
        return cyclic(spec.n, caps)
    if family == "elementary_abelian":
        return elementary_abelian(spec.p, spec.n, caps)
    if family == "dihedral":
        return dihedral(spec.n, caps)
    if family == "quaternion":
        return quaternion(spec.n, caps)
    if family == "symmetric":
        return symmetric_group(_require(spec.n, "n", family), caps)
    if family == "direct_product":
        if not spec.factors or len(spec.factors) != 2:
            raise InvalidParameter("direct_product needs exactly two factors")
        first, second = (build(f, caps) for f in spec.factors)
        return direct_product(first, second)
    if family == "semilinear_example":
        return semilinear_example(spec.index).group
    raise InvalidParameter(f"unknown family: {family}")


def series_catalog(caps: Optional[Caps] = None) -> List[FiniteGroup]:
    """Mixed nilpotent and non-nilpotent groups of order at most 512."""
    specs = [
        FamilySpec(family="cyclic", n=1),
        FamilySpec(family="cyclic", n=12),
        FamilySpec(family="elementary_abelian", p=2, n=3),
        FamilySpec(family="elementary_abelian", p=3, n=2),
        FamilySpec(family="heisenberg", p=3),
        FamilySpec(family="heisenberg", p=5),
        FamilySpec(family="dihedral", n=3),
        FamilySpec(family="dihedral", n=4),
        FamilySpec(family="dihedral", n=6),
        FamilySpec(family="dihedral", n=8),
        FamilySpec(family="dihedral", n=16),
        FamilySpec(family="quaternion", n=2),
        FamilySpec(family="quaternion", n=3),
        FamilySpec(family="quaternion", n=4),
        FamilySpec(family="symmetric", n=3),
        FamilySpec(family="symmetric", n=4),
        FamilySpec(family="symmetric", n=5),
        FamilySpec(
            family="direct_product",
            factors=[FamilySpec(family="dihedral", n=4), FamilySpec(family="cyclic", n=3)],
        ),
        FamilySpec(
            family="direct_product",
            factors=[FamilySpec(family="heisenberg", p=3), FamilySpec(family="cyclic", n=2)],
        ),
        FamilySpec(
            family="direct_product",
            factors=[FamilySpec(family="symmetric", n=3), FamilySpec(family="cyclic", n=4)],
        ),
        FamilySpec(
            family="direct_product",
            factors=[FamilySpec(family="quaternion", n=2), FamilySpec(family="dihedral", n=4)],
        ),
    ]
    return [build(spec, caps) for spec in specs]
