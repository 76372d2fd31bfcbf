#!/usr/bin/env python3
"""
Test suite for exact cyclotomic and rational-function arithmetic
"""

import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add parent directory to path to import niljordan modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from niljordan.cyclo import (
    Cyclotomic,
    FieldAut,
    RatFunc,
    aut_compose,
    apply_aut,
    cyclo_arith,
    field_degree,
    format_cyclotomic,
    format_scalar,
    is_root_of_unity,
    parse_cyclotomic,
    parse_scalar,
    roots_of_unity,
)
from niljordan.errors import DivisionByZero, InvalidParameter, MalformedInput, ParseError

CONDUCTORS = (1, 3, 4, 5, 8, 12)


def random_cyclotomic(rng: random.Random, m: int) -> Cyclotomic:
    coeffs = [Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2, 3))) for _ in range(field_degree(m))]
    return Cyclotomic.from_coeffs(coeffs, m)


def random_ratfunc(rng: random.Random, m: int) -> RatFunc:
    num = [random_cyclotomic(rng, m) for _ in range(rng.randint(1, 3))]
    den = [random_cyclotomic(rng, m) for _ in range(rng.randint(1, 2))]
    if all(c.is_zero() for c in den):
        den = [Cyclotomic.one(m)]
    return RatFunc.from_parts(num, den, m)


def random_mobius(rng: random.Random):
    while True:
        a, b, c, d = (rng.randint(-2, 2) for _ in range(4))
        if a * d - b * c:
            return (a, b, c, d)


class TestCyclotomicArithmetic:
    """Test field operations in Q(z_m)"""

    def test_zeta_relations(self):
        """z4^2 = -1 and 1 + z3 + z3^2 = 0"""
        assert Cyclotomic.zeta(4) ** 2 == Cyclotomic.from_rational(-1, 4)
        total = Cyclotomic.one(3) + Cyclotomic.zeta(3) + Cyclotomic.zeta(3, 2)
        assert total.is_zero()

    def test_zeta_exponent_reduced_mod_m(self):
        """zeta(m, k) depends only on k mod m"""
        assert Cyclotomic.zeta(8, 11) == Cyclotomic.zeta(8, 3)
        assert Cyclotomic.zeta(8, -1) == Cyclotomic.zeta(8, 7)

    def test_embed_into_larger_conductor(self):
        """z4 is z8^2 inside Q(z8)"""
        assert Cyclotomic.zeta(4).embed(8) == Cyclotomic.zeta(8) ** 2

    def test_embed_rejects_non_multiple(self):
        """Q(z4) does not embed in Q(z6)"""
        with pytest.raises(MalformedInput):
            Cyclotomic.zeta(4).embed(6)

    def test_mixed_conductors_meet_at_lcm(self):
        """Adding elements of Q(z4) and Q(z3) lands in Q(z12)"""
        total = Cyclotomic.zeta(4) + Cyclotomic.zeta(3)
        assert total.conductor == 12
        assert total.equals(Cyclotomic.zeta(12, 3) + Cyclotomic.zeta(12, 4))

    def test_inverse_of_zero(self):
        """Inverting zero raises a DivisionByZero that is also a ZeroDivisionError"""
        with pytest.raises(DivisionByZero):
            Cyclotomic.zero(5).inverse()
        with pytest.raises(ZeroDivisionError):
            Cyclotomic.one(5) / Cyclotomic.zero(5)

    def test_field_axioms_random(self):
        """Seeded random check of the field axioms across several conductors"""
        rng = random.Random(0)
        checks = 0
        for _ in range(1000):
            m = rng.choice(CONDUCTORS)
            x, y, z = (random_cyclotomic(rng, m) for _ in range(3))
            assert x + y == y + x
            assert x * y == y * x
            assert (x + y) + z == x + (y + z)
            assert (x * y) * z == x * (y * z)
            assert x * (y + z) == x * y + x * z
            assert (x - x).is_zero()
            assert x + Cyclotomic.zero(m) == x
            assert x * Cyclotomic.one(m) == x
            assert -(-x) == x
            if not x.is_zero():
                assert x * x.inverse() == Cyclotomic.one(m)
                assert (y / x) * x == y
            checks += 11
        assert checks >= 10000

    def test_galois_action_is_a_ring_map(self):
        """z -> z^k preserves sums and products"""
        rng = random.Random(1)
        for _ in range(200):
            m = rng.choice((5, 8, 12))
            k = rng.choice([u for u in range(1, m) if Fraction(u, m).denominator == m])
            x, y = random_cyclotomic(rng, m), random_cyclotomic(rng, m)
            assert (x * y).apply_galois(k) == x.apply_galois(k) * y.apply_galois(k)
            assert (x + y).apply_galois(k) == x.apply_galois(k) + y.apply_galois(k)

    def test_cyclo_arith_dispatch(self):
        """The named-operation entry point mirrors the operators"""
        x, y = Cyclotomic.zeta(8), Cyclotomic.zeta(8, 3)
        assert cyclo_arith("add", x, y) == x + y
        assert cyclo_arith("mul", x, y) == x * y
        assert cyclo_arith("neg", x) == -x
        assert cyclo_arith("inv", x) == Cyclotomic.zeta(8, 7)
        assert cyclo_arith("equals", x, x) is True
        with pytest.raises(InvalidParameter):
            cyclo_arith("pow", x, y)


class TestRootsOfUnity:
    """Test root-of-unity recognition"""

    @pytest.mark.parametrize(
        "value, order",
        [
            (Cyclotomic.zeta(8), 8),
            (Cyclotomic.zeta(8, 2), 4),
            (Cyclotomic.from_rational(-1, 3), 2),
            (-Cyclotomic.zeta(3), 6),
            (Cyclotomic.one(5), 1),
        ],
    )
    def test_orders(self, value, order):
        """Orders of roots of unity"""
        assert is_root_of_unity(value) == order

    @pytest.mark.parametrize(
        "value",
        [Cyclotomic.from_rational(2, 4), Cyclotomic.zero(4), Cyclotomic.one(4) + Cyclotomic.zeta(4)],
    )
    def test_non_roots(self, value):
        """Zero, 2 and 1 + i are not roots of unity"""
        assert is_root_of_unity(value) is None

    def test_roots_of_unity_listing(self):
        """Q(z_m) holds exactly lcm(2, m) roots of unity, each listed with its order"""
        for m in (1, 3, 4, 5, 12):
            roots = roots_of_unity(m)
            assert len(roots) == (m if m % 2 == 0 else 2 * m)
            for _, order, value in roots:
                assert is_root_of_unity(value) == order


class TestRationalFunctions:
    """Test arithmetic in Q(z_m)(t)"""

    def test_cancellation(self):
        """(t + 1)/(t + 1) reduces to 1"""
        t = RatFunc.variable(4)
        assert ((t + 1) / (t + 1)).equals(1)

    def test_denominator_is_monic(self):
        """Canonical form keeps a monic denominator"""
        t = RatFunc.variable(4)
        f = t / (t * 2 + 2)
        assert f.den[-1] == Cyclotomic.one(4)
        assert f.equals((t / (t + 1)) * Fraction(1, 2))

    def test_zero_denominator(self):
        """A zero denominator is rejected"""
        with pytest.raises(DivisionByZero):
            RatFunc.from_parts((Cyclotomic.one(4),), (), 4)

    def test_inversion_is_an_involution(self):
        """Substituting t -> 1/t twice gives back the function"""
        t = RatFunc.variable(4)
        f = (t**2 + 1) / (t + 3)
        invert = [Cyclotomic.from_rational(v, 4) for v in (0, 1, 1, 0)]
        assert f.substitute(invert).substitute(invert) == f

    def test_field_axioms_random(self):
        """Seeded random ring laws and inverses for rational functions"""
        rng = random.Random(2)
        for _ in range(150):
            m = rng.choice((1, 3, 4))
            f, g, h = (random_ratfunc(rng, m) for _ in range(3))
            assert f * (g + h) == f * g + f * h
            assert (f * g) * h == f * (g * h)
            if not f.is_zero():
                assert (f * f.inverse()).equals(1)


class TestFieldAutomorphisms:
    """Test automorphisms of Q(z_m) and Q(z_m)(t)"""

    def test_non_unit_galois_rejected(self):
        """z -> z^2 is not an automorphism of Q(z4)"""
        with pytest.raises(InvalidParameter):
            FieldAut.create(4, 2)

    def test_mobius_needs_function_field(self):
        """A Mobius part over a constant field is rejected"""
        with pytest.raises(InvalidParameter):
            FieldAut.create(4, 1, (0, 1, 1, 0))

    def test_singular_mobius_rejected(self):
        """ad - bc = 0 is rejected"""
        with pytest.raises(InvalidParameter):
            FieldAut.create(4, 1, (1, 1, 1, 1), True)

    def test_fixes_roots_of_unity(self):
        """Only galois = 1 fixes the roots of unity once m > 2"""
        assert FieldAut.create(8, 1).fixes_roots_of_unity()
        assert not FieldAut.create(8, 3).fixes_roots_of_unity()
        assert FieldAut.create(2, 1).fixes_roots_of_unity()
        assert FieldAut.create(4, 1, (-1, 0, 0, 1), True).fixes_roots_of_unity()

    def test_automorphism_is_a_homomorphism(self):
        """sigma(f g) = sigma(f) sigma(g) and sigma(f + g) = sigma(f) + sigma(g)"""
        rng = random.Random(3)
        for _ in range(60):
            m = rng.choice((4, 5, 8))
            units = [k for k in range(1, m) if Fraction(k, m).denominator == m]
            sigma = FieldAut.create(m, rng.choice(units), random_mobius(rng), True)
            f, g = random_ratfunc(rng, m), random_ratfunc(rng, m)
            assert sigma.apply(f * g) == sigma.apply(f) * sigma.apply(g)
            assert sigma.apply(f + g) == sigma.apply(f) + sigma.apply(g)

    def test_composition_law(self):
        """(sigma o tau)(x) = sigma(tau(x)) and sigma o sigma^-1 = id"""
        rng = random.Random(4)
        for _ in range(60):
            m = rng.choice((4, 5, 8))
            units = [k for k in range(1, m) if Fraction(k, m).denominator == m]
            sigma = FieldAut.create(m, rng.choice(units), random_mobius(rng), True)
            tau = FieldAut.create(m, rng.choice(units), random_mobius(rng), True)
            x = random_ratfunc(rng, m)
            assert apply_aut(aut_compose(sigma, tau), x) == apply_aut(sigma, apply_aut(tau, x))
            assert sigma.compose(sigma.inverse()).is_identity()
            assert sigma.inverse().apply(sigma.apply(x)) == x

    def test_constant_field_rejects_variable(self):
        """A constant-field automorphism does not act on t"""
        with pytest.raises(MalformedInput):
            FieldAut.create(4, 3).apply(RatFunc.variable(4))


class TestTextSyntax:
    """Test the literal syntax of scalars"""

    def test_format_cyclotomic(self):
        """Canonical strings"""
        assert format_cyclotomic(Cyclotomic.zeta(4)) == "z"
        assert format_cyclotomic(-Cyclotomic.zeta(8, 3)) == "-z^3"
        assert format_cyclotomic(Cyclotomic.from_coeffs([Fraction(1, 2), 0, 2], 8)) == "1/2 + 2*z^2"
        assert format_cyclotomic(Cyclotomic.from_coeffs([1, -1], 4)) == "1 - z"
        assert format_cyclotomic(Cyclotomic.zero(4)) == "0"

    def test_parse_cyclotomic(self):
        """Literals reduce modulo the cyclotomic polynomial"""
        assert parse_cyclotomic("1/2 + 2*z^2", 8) == Cyclotomic.from_coeffs([Fraction(1, 2), 0, 2], 8)
        assert parse_cyclotomic("z^4", 4) == Cyclotomic.one(4)
        assert parse_cyclotomic("-z", 4) == -Cyclotomic.zeta(4)

    def test_large_exponents_reduce(self):
        """Exponents of z reduce modulo the conductor before expansion"""
        assert parse_cyclotomic("z^1000000000", 4) == Cyclotomic.one(4)
        assert parse_cyclotomic("z^1000000001", 8) == Cyclotomic.zeta(8)
        assert parse_cyclotomic("3*z^7", 1) == Cyclotomic.from_coeffs([3], 1)

    def test_zero_denominator(self):
        with pytest.raises(ParseError):
            parse_cyclotomic("1/0", 4)
        with pytest.raises(ParseError):
            parse_cyclotomic("z - 2/0*z^2", 8)

    def test_t_degree_limit(self):
        """Powers of t are bounded"""
        assert parse_scalar("t^256", 4, True) == RatFunc.variable(4) ** 256
        with pytest.raises(ParseError):
            parse_scalar("t^1000000000", 4, True)
        with pytest.raises(ParseError):
            parse_scalar("((1)*t^257)/((1))", 4, True)

    @pytest.mark.parametrize("text", ["", "z^", "2**z", "z+", "x"])
    def test_bad_cyclotomic_literals(self, text):
        """Malformed literals raise ParseError"""
        with pytest.raises(ParseError):
            parse_cyclotomic(text, 4)

    def test_format_ratfunc(self):
        """t/(t+1) prints with parenthesised coefficients"""
        t = RatFunc.variable(4)
        assert format_scalar(t / (t + 1)) == "((1)*t)/((1) + (1)*t)"
        assert format_scalar(RatFunc.constant(0, 4)) == "(0)"
        assert format_scalar(RatFunc.constant(1, 4)) == "(1)"

    @pytest.mark.parametrize("text", ["(1", "((1))/((1))/((1))", "(1)*s", "(z)/(t)"])
    def test_bad_ratfunc_literals(self, text):
        """Malformed rational functions raise ParseError"""
        with pytest.raises(ParseError):
            parse_scalar(text, 4, True)

    def test_parse_print_stability(self):
        """Fifty random scalars print to the same text after a parse"""
        rng = random.Random(5)
        for i in range(50):
            m = rng.choice((3, 4, 8, 12))
            transcendental = i % 2 == 1
            x = random_ratfunc(rng, m) if transcendental else random_cyclotomic(rng, m)
            text = format_scalar(x)
            again = parse_scalar(text, m, transcendental)
            assert again == x
            assert format_scalar(again) == text
