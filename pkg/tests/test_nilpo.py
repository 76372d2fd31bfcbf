#!/usr/bin/env python3
"""
Test suite for central series, class checks and commutator maps
"""

import itertools
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

# Add parent directory to path to import niljordan modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from niljordan.config import Caps
from niljordan.errors import ClassTooLarge, NotCentral
from niljordan.groupcore import HeisenbergElement, center, commutator_subgroup, symmetric_group
from niljordan.nilpo import (
    central_extension_check,
    central_series_agree,
    is_nilpotent_of_class_at_most,
    iterated_commutator,
    lower_central_series,
    nilpotency_class,
    phi_homomorphism,
    sylow_product_check,
    upper_central_series,
)
from niljordan.witness import (
    cyclic,
    dihedral,
    elementary_abelian,
    heisenberg,
    quaternion,
    series_catalog,
)


@pytest.fixture(scope="module")
def catalog():
    return series_catalog()


class TestCentralSeries:
    """Test lower and upper central series"""

    @pytest.mark.parametrize("p", [3, 5, 7, 11])
    def test_heisenberg(self, p):
        """Heis(p) has order p^3, class 2 and gamma_1 = Z"""
        G = heisenberg(p)
        lower = lower_central_series(G)
        upper = upper_central_series(G)
        assert G.order == p**3
        assert lower.nilpotency_class == upper.nilpotency_class == 2
        assert lower.orders == [p**3, p, 1]
        assert upper.orders == [1, p, p**3]
        assert lower.chain[1] == center(G)

    def test_class_conventions(self):
        """The trivial group has class 0, nontrivial abelian groups class 1"""
        assert nilpotency_class(cyclic(1)) == 0
        assert nilpotency_class(cyclic(12)) == 1
        assert nilpotency_class(elementary_abelian(3, 2)) == 1

    def test_dihedral_classes(self):
        """D(2^k) has class k - 1"""
        assert nilpotency_class(dihedral(4)) == 2
        assert nilpotency_class(dihedral(8)) == 3
        assert nilpotency_class(dihedral(16)) == 4

    def test_non_nilpotent(self):
        """Sym(3): the lower series stalls at A3, the upper series at 1"""
        G = symmetric_group(3)
        lower = lower_central_series(G)
        upper = upper_central_series(G)
        assert lower.nilpotency_class is None
        assert upper.nilpotency_class is None
        assert lower.orders == [6, 3]
        assert upper.orders == [1]

    def test_series_agree_on_catalog(self, catalog):
        """Both series give the same class on every catalog group"""
        assert len(catalog) >= 20
        assert any(nilpotency_class(G) is None for G in catalog)
        assert any(nilpotency_class(G) is not None for G in catalog)
        for G in catalog:
            assert G.order <= 512
            assert central_series_agree(G), G.name

    def test_lower_series_terms_are_commutators(self):
        """gamma_{i+1} = [gamma_i, G] term by term"""
        G = dihedral(8)
        chain = lower_central_series(G).chain
        for prev, nxt in zip(chain, chain[1:]):
            assert commutator_subgroup(prev, G) == nxt


class TestClassPredicate:
    """Test the class predicate and its witnesses"""

    def test_witness_for_d4(self):
        """D4 is not abelian: the witness is the least non-commuting pair"""
        G = dihedral(4)
        verdict = is_nilpotent_of_class_at_most(G, 1)
        assert not verdict.holds
        assert verdict.method == "exhaustive"
        amb = G.ambient
        pairs = [
            (int(a), int(b))
            for a, b in itertools.product(G.members, repeat=2)
            if amb.commutator(int(a), int(b)) != amb.identity
        ]
        assert verdict.witness == min(pairs)
        assert is_nilpotent_of_class_at_most(G, 2).holds

    def test_catalog_agreement(self, catalog):
        """The tuple check agrees with the series at n = class - 1 and n = class"""
        for G in catalog:
            k = nilpotency_class(G)
            if k is None:
                for n in (1, 2):
                    verdict = is_nilpotent_of_class_at_most(G, n)
                    assert not verdict.holds
                    assert verdict.witness is not None
                continue
            assert is_nilpotent_of_class_at_most(G, k).holds
            if k >= 1:
                verdict = is_nilpotent_of_class_at_most(G, k - 1)
                assert not verdict.holds
                assert verdict.witness is not None

    def test_sampled_mode(self):
        """Past the tuple budget a seeded sample is used"""
        caps = replace(Caps.default(), tuple_budget=10, sample_tuples=500, seed=7)
        G = heisenberg(3, caps)
        verdict = is_nilpotent_of_class_at_most(G, 1)
        assert verdict.method == "sampled"
        assert not verdict.holds
        assert verdict.witness is not None
        assert is_nilpotent_of_class_at_most(G, 2).holds

    def test_sampled_mode_is_reproducible(self):
        """The same seed gives the same witness"""
        caps = replace(Caps.default(), tuple_budget=10, sample_tuples=200, seed=3)
        first = is_nilpotent_of_class_at_most(dihedral(8, caps), 2)
        second = is_nilpotent_of_class_at_most(dihedral(8, caps), 2)
        assert first.witness == second.witness

    def test_negative_n(self):
        """n must be non-negative"""
        with pytest.raises(ValueError):
            is_nilpotent_of_class_at_most(cyclic(3), -1)


class TestCommutatorMaps:
    """Test iterated commutators and the maps g -> [.., g, ..]"""

    def test_iterated_commutator(self):
        """[x, y] is central in Heis(p), so [x, y, x] = 1"""
        x, y = HeisenbergElement(1, 0, 0, 5), HeisenbergElement(0, 1, 0, 5)
        assert iterated_commutator(x, y) == HeisenbergElement(0, 0, 1, 5)
        assert iterated_commutator(x, y, x).is_identity()
        assert iterated_commutator(x) == x

    def test_phi_is_homomorphism_on_catalog(self, catalog):
        """Every slot and generator tuple gives a verified homomorphism into gamma_{n-1}"""
        checked = 0
        for G in catalog:
            n = nilpotency_class(G)
            if not n or G.order > 128:
                continue
            gamma = lower_central_series(G).chain[n - 1]
            for fixed in itertools.product(G.generators[:2], repeat=n - 1):
                for slot in range(1, n + 1):
                    phi = phi_homomorphism(G, n, fixed, slot)
                    assert phi.verified
                    assert gamma.mask[phi.images[G.members]].all()
                    checked += 1
        assert checked >= 20

    def test_phi_identity_for_n_one(self):
        """With n = 1 the map is g -> g"""
        G = cyclic(6)
        phi = phi_homomorphism(G, 1, [], 1)
        assert np.array_equal(phi.images[G.members], G.members)

    def test_phi_class_too_large(self):
        """D4 has class 2, so no weight-1 map exists"""
        with pytest.raises(ClassTooLarge):
            phi_homomorphism(dihedral(4), 1, [], 1)
        with pytest.raises(ClassTooLarge):
            phi_homomorphism(symmetric_group(3), 3, [1, 1], 1)

    def test_phi_bad_arguments(self):
        """Slot range and fixed-tuple length are checked"""
        G = heisenberg(3)
        with pytest.raises(ValueError):
            phi_homomorphism(G, 2, [G.generators[0]], 3)
        with pytest.raises(ValueError):
            phi_homomorphism(G, 2, [], 1)


class TestCentralExtensions:
    """Test class(G) <= class(G/A) + 1 for central A"""

    NILPOTENT = [
        lambda: cyclic(12),
        lambda: elementary_abelian(2, 3),
        lambda: heisenberg(3),
        lambda: heisenberg(5),
        lambda: dihedral(4),
        lambda: dihedral(8),
        lambda: dihedral(16),
        lambda: quaternion(2),
        lambda: quaternion(4),
        lambda: symmetric_group(2),
        lambda: elementary_abelian(3, 2),
        lambda: quaternion(8),
    ]

    @pytest.mark.parametrize("build", NILPOTENT)
    def test_center_extensions(self, build):
        """Quotients by the center and by every central subgroup of prime order"""
        G = build()
        Z = center(G)
        report = central_extension_check(G, Z)
        assert report.holds
        assert report.group_class <= report.quotient_class + 1
        for z in Z.members[1:]:
            A = G.subgroup([int(z)])
            sub = central_extension_check(G, A)
            assert sub.holds
            assert sub.group_class <= sub.quotient_class + 1

    def test_non_central(self):
        """A3 is not central in Sym(3)"""
        G = symmetric_group(3)
        A3 = commutator_subgroup(G, G)
        with pytest.raises(NotCentral):
            central_extension_check(G, A3)


class TestSylow:
    """Test the Sylow direct-product criterion"""

    def test_nilpotent_product(self, catalog):
        """Nilpotent exactly when the Sylow subgroups give a direct product"""
        for G in catalog:
            report = sylow_product_check(G)
            assert report.holds == (nilpotency_class(G) is not None)

    def test_d4_times_c3(self):
        """D4 x C3 splits as 8 * 3"""
        by_name = {G.name: G for G in series_catalog()}
        report = sylow_product_check(by_name["D4xC3"])
        assert report.holds
        assert report.primes == (2, 3)
        assert report.orders == (8, 3)

    def test_sym3(self):
        """Sym(3) has non-commuting Sylow subgroups"""
        report = sylow_product_check(symmetric_group(3))
        assert not report.holds
        assert report.orders == (2, 3)
