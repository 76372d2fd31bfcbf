#!/usr/bin/env python3
"""
Test suite for the witness families and catalogs
"""

import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

# Add parent directory to path to import niljordan modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from niljordan.errors import InvalidParameter
from niljordan.groupcore import quotient
from niljordan.jordan import _linear_kernel
from niljordan.nilpo import nilpotency_class
from niljordan.witness import (
    FamilySpec,
    _build_semilinear_catalog,
    build,
    cyclic,
    dihedral,
    elementary_abelian,
    heisenberg,
    quaternion,
    semilinear_catalog,
    semilinear_example,
    series_catalog,
)


class TestFamilies:
    """Test the parametrized group families"""

    @pytest.mark.parametrize(
        "build_group, order, name",
        [
            (lambda: heisenberg(7), 343, "Heis(7)"),
            (lambda: cyclic(1), 1, "C1"),
            (lambda: cyclic(10), 10, "C10"),
            (lambda: elementary_abelian(3, 3), 27, "E(3^3)"),
            (lambda: dihedral(5), 10, "D5"),
            (lambda: quaternion(2), 8, "Q8"),
            (lambda: quaternion(3), 12, "Q12"),
        ],
    )
    def test_orders_and_names(self, build_group, order, name):
        """Each family has the advertised order"""
        G = build_group()
        assert G.order == order
        assert G.name == name

    def test_quaternion_has_one_involution(self):
        """Q8 has a unique element of order 2"""
        G = quaternion(2)
        assert sum(1 for x in G.members if G.element_order(int(x)) == 2) == 1

    @pytest.mark.parametrize(
        "call",
        [
            lambda: heisenberg(4),
            lambda: heisenberg(1),
            lambda: cyclic(0),
            lambda: elementary_abelian(6, 2),
            lambda: dihedral(2),
            lambda: quaternion(1),
        ],
    )
    def test_invalid_parameters(self, call):
        """Non-primes and out-of-range sizes are refused"""
        with pytest.raises(InvalidParameter):
            call()


class TestFamilySpec:
    """Test building groups from family specifications"""

    def test_direct_product(self):
        """Two factors multiply their orders"""
        spec = FamilySpec(
            family="direct_product",
            factors=[FamilySpec(family="heisenberg", p=3), FamilySpec(family="cyclic", n=2)],
        )
        G = build(spec)
        assert G.order == 54
        assert nilpotency_class(G) == 2

    def test_direct_product_needs_two_factors(self):
        with pytest.raises(InvalidParameter):
            build(FamilySpec(family="direct_product", factors=[FamilySpec(family="cyclic", n=2)]))

    def test_missing_parameter(self):
        """A family without its parameter names the missing flag"""
        with pytest.raises(InvalidParameter, match="--n"):
            build(FamilySpec(family="symmetric"))

    def test_unknown_fields_rejected(self):
        """Unknown keys and families fail validation"""
        with pytest.raises(ValidationError):
            FamilySpec(family="cyclic", n=3, colour="red")
        with pytest.raises(ValidationError):
            FamilySpec(family="tetrahedral", n=3)

    def test_semilinear_example(self):
        """Catalog entries are addressed by index"""
        G = build(FamilySpec(family="semilinear_example", index=0))
        assert G is semilinear_catalog()[0].group
        with pytest.raises(InvalidParameter):
            semilinear_example(len(semilinear_catalog()))
        with pytest.raises(InvalidParameter):
            semilinear_example(None)


class TestCatalogs:
    """Test the curated catalogs"""

    @pytest.mark.parametrize("entry", semilinear_catalog(), ids=[e.name for e in semilinear_catalog()])
    def test_semilinear_entry(self, entry):
        """Recorded orders and classes of the image in Aut(K)"""
        G = entry.group
        assert G.order == entry.order
        N = _linear_kernel(G)
        Gamma, _ = quotient(G, N)
        assert Gamma.order == entry.gamma_order
        assert nilpotency_class(Gamma) == entry.gamma_class
        assert entry.gamma_class <= entry.c
        assert entry.description

    def test_series_catalog(self):
        """Twenty-odd groups of order at most 512, nilpotent and not"""
        groups = series_catalog()
        assert len(groups) >= 20
        assert len({G.name for G in groups}) == len(groups)
        classes = [nilpotency_class(G) for G in groups]
        assert None in classes
        assert {0, 1, 2, 3, 4} <= set(classes)


class TestSharedCaches:
    """Test lazily built caches under concurrent first access"""

    def test_semilinear_catalog_built_once(self):
        """Concurrent first calls all receive the same catalog"""
        _build_semilinear_catalog.cache_clear()
        with ThreadPoolExecutor(max_workers=4) as pool:
            results = list(pool.map(lambda _: semilinear_catalog(), range(8)))
        assert all(result is results[0] for result in results)

    def test_word_tree_from_threads(self):
        """Threads sharing a group see identical spanning trees"""
        G = heisenberg(5)
        with ThreadPoolExecutor(max_workers=4) as pool:
            trees = list(pool.map(lambda _: G.word_tree, range(4)))
        for tree in trees:
            assert len(tree) == len(trees[0])
            for level, first in zip(tree, trees[0]):
                assert all(np.array_equal(a, b) for a, b in zip(level, first))
