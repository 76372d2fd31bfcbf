"""
Exact arithmetic in cyclotomic fields Q(z_m) and in Q(z_m)(t)

Elements are kept in canonical form at all times: a Cyclotomic is a
coefficient vector in the power basis 1, z, ..., z^(phi(m)-1) reduced
modulo the m-th cyclotomic polynomial; a RatFunc is a reduced fraction of
polynomials in t with monic denominator.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import List, Optional, Sequence, Tuple, Union

from sympy import Poly, QQ, Rational, cyclotomic_poly, symbols

from .errors import DivisionByZero, InvalidParameter, MalformedInput, ParseError

logger = logging.getLogger(__name__)

_X = symbols("x")

Number = Union[int, Fraction]


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def _phi_coeffs(m: int) -> Tuple[int, ...]:
    """Coefficients of the m-th cyclotomic polynomial, lowest degree first."""
    if m < 1:
        raise InvalidParameter(f"conductor must be positive, got {m}")
    poly = cyclotomic_poly(m, _X, polys=True)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def field_degree(m: int) -> int:
    return len(_phi_coeffs(m)) - 1


def _reduce(coeffs: Sequence[Number], m: int) -> Tuple[Fraction, ...]:
    phi = _phi_coeffs(m)
    d = len(phi) - 1
    c = [Fraction(v) for v in coeffs]
    for k in range(len(c) - 1, d - 1, -1):
        lead = c[k]
        if lead:
            for i in range(d + 1):
                c[k - d + i] -= lead * phi[i]
    c = c[:d]
    c.extend(Fraction(0) for _ in range(d - len(c)))
    return tuple(c)


def _to_sympy(q: Fraction) -> Rational:
    return Rational(q.numerator, q.denominator)


@dataclass(frozen=True)
class Cyclotomic:
    """Element of Q(z_m) in canonical reduced form."""

    conductor: int
    coeffs: Tuple[Fraction, ...]

    # construction

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[Number], m: int) -> "Cyclotomic":
        return cls(m, _reduce(coeffs, m))

    @classmethod
    def zero(cls, m: int = 1) -> "Cyclotomic":
        return cls(m, (Fraction(0),) * field_degree(m))

    @classmethod
    def one(cls, m: int = 1) -> "Cyclotomic":
        return cls.from_rational(1, m)

    @classmethod
    def from_rational(cls, q: Number, m: int = 1) -> "Cyclotomic":
        return cls.from_coeffs([Fraction(q)], m)

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "Cyclotomic":
        """z_m ** k for any integer k."""
        k %= m
        return cls.from_coeffs([0] * k + [1], m)

    def embed(self, target: int) -> "Cyclotomic":
        """Image of this element in Q(z_target); requires conductor | target."""
        if target == self.conductor:
            return self
        if target % self.conductor:
            raise MalformedInput(
                f"cannot embed Q(z_{self.conductor}) into Q(z_{target})"
            )
        step = target // self.conductor
        spread = [Fraction(0)] * (step * len(self.coeffs) or 1)
        for j, c in enumerate(self.coeffs):
            spread[j * step] = c
        return Cyclotomic.from_coeffs(spread, target)

    def _coerce(self, other: object) -> Tuple["Cyclotomic", "Cyclotomic"]:
        if isinstance(other, (int, Fraction)):
            return self, Cyclotomic.from_rational(other, self.conductor)
        if isinstance(other, Cyclotomic):
            if other.conductor == self.conductor:
                return self, other
            m = lcm(self.conductor, other.conductor)
            return self.embed(m), other.embed(m)
        raise TypeError(f"cannot combine Cyclotomic with {type(other).__name__}")

    # predicates

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def equals(self, other: object) -> bool:
        """Field equality, embedding both sides into a common conductor."""
        if isinstance(other, RatFunc):
            return other.equals(self)
        try:
            a, b = self._coerce(other)
        except TypeError:
            return False
        return a.coeffs == b.coeffs

    # arithmetic

    def __add__(self, other: object) -> "Cyclotomic":
        if isinstance(other, RatFunc):
            return NotImplemented
        a, b = self._coerce(other)
        return Cyclotomic(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.conductor, tuple(-x for x in self.coeffs))

    def __sub__(self, other: object) -> "Cyclotomic":
        if isinstance(other, RatFunc):
            return NotImplemented
        a, b = self._coerce(other)
        return Cyclotomic(a.conductor, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other: object) -> "Cyclotomic":
        return (-self) + other

    def __mul__(self, other: object) -> "Cyclotomic":
        if isinstance(other, RatFunc):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.conductor, tuple(x * other for x in self.coeffs))
        a, b = self._coerce(other)
        prod = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic.from_coeffs(prod, a.conductor)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise DivisionByZero(f"inverse of zero in Q(z_{self.conductor})")
        if self.is_rational():
            return Cyclotomic.from_rational(1 / self.coeffs[0], self.conductor)
        f = Poly([_to_sympy(c) for c in reversed(self.coeffs)], _X, domain=QQ)
        g = Poly(list(reversed(_phi_coeffs(self.conductor))), _X, domain=QQ)
        inv = f.invert(g)
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(inv.all_coeffs())]
        return Cyclotomic.from_coeffs(coeffs, self.conductor)

    def __truediv__(self, other: object) -> "Cyclotomic":
        if isinstance(other, RatFunc):
            return NotImplemented
        a, b = self._coerce(other)
        return a * b.inverse()

    def __rtruediv__(self, other: object) -> "Cyclotomic":
        return self.inverse() * other

    def __pow__(self, k: int) -> "Cyclotomic":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = Cyclotomic.one(self.conductor)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def apply_galois(self, k: int) -> "Cyclotomic":
        """Image under z_m -> z_m ** k."""
        m = self.conductor
        if m <= 2 or k % m == 1:
            return self
        spread = [Fraction(0)] * m
        for j, c in enumerate(self.coeffs):
            if c:
                spread[(j * k) % m] += c
        return Cyclotomic.from_coeffs(spread, m)

    def key(self) -> tuple:
        return (self.conductor, self.coeffs)

    def __str__(self) -> str:
        return format_cyclotomic(self)


# roots of unity


def root_of_unity(m: int, j: int) -> Cyclotomic:
    """exp(2 pi i j / L) with L = lcm(2, m), expressed in Q(z_m)."""
    big = lcm(2, m)
    j %= big
    if big == m:
        return Cyclotomic.zeta(m, j)
    # m odd: z_2m = -z_m ** ((m + 1) / 2)
    sign = -1 if j % 2 else 1
    return Cyclotomic.zeta(m, j * (m + 1) // 2) * sign


@lru_cache(maxsize=None)
def roots_of_unity(m: int) -> Tuple[Tuple[int, int, Cyclotomic], ...]:
    """
    All roots of unity of Q(z_m)

    Returns:
        Tuples (exponent j, order, value) with value = exp(2 pi i j / lcm(2, m)),
        ordered by exponent
    """
    big = lcm(2, m)
    return tuple((j, big // gcd(j, big), root_of_unity(m, j)) for j in range(big))


def root_exponent(x: Cyclotomic) -> Optional[int]:
    """The exponent j with x = exp(2 pi i j / lcm(2, m)), or None."""
    for j, _, value in roots_of_unity(x.conductor):
        if value == x:
            return j
    return None


def is_root_of_unity(x: Cyclotomic) -> Optional[int]:
    """Multiplicative order of x if it is a root of unity, else None."""
    if x.is_zero():
        return None
    big = lcm(2, x.conductor)
    one = Cyclotomic.one(x.conductor)
    power = x
    for d in range(1, big + 1):
        if power == one:
            return d
        power = power * x
    return None


def cyclo_arith(op: str, x: Cyclotomic, y: Optional[Cyclotomic] = None):
    """Dispatch one of add, mul, neg, inv, equals."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    if op == "inv":
        return x.inverse()
    if op == "equals":
        return x.equals(y)
    raise InvalidParameter(f"unknown cyclotomic operation: {op}")


# polynomials in t over Q(z_m), lowest degree first

CPoly = Tuple[Cyclotomic, ...]


def _ptrim(p: Sequence[Cyclotomic]) -> CPoly:
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return tuple(p)


def _padd(a: CPoly, b: CPoly, m: int) -> CPoly:
    n = max(len(a), len(b))
    zero = Cyclotomic.zero(m)
    return _ptrim(
        (a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero) for i in range(n)
    )


def _pneg(a: CPoly) -> CPoly:
    return tuple(-c for c in a)


def _pscale(a: CPoly, s: Cyclotomic) -> CPoly:
    return _ptrim(c * s for c in a)


def _pmul(a: CPoly, b: CPoly, m: int) -> CPoly:
    if not a or not b:
        return ()
    out = [Cyclotomic.zero(m)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _ptrim(out)


def _pdivmod(a: CPoly, b: CPoly, m: int) -> Tuple[CPoly, CPoly]:
    if not b:
        raise DivisionByZero("polynomial division by zero")
    rem = list(a)
    quot = [Cyclotomic.zero(m)] * max(len(a) - len(b) + 1, 0)
    lead_inv = b[-1].inverse()
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        coef = rem[-1] * lead_inv
        quot[shift] = coef
        for i, c in enumerate(b):
            rem[shift + i] = rem[shift + i] - coef * c
        rem = list(_ptrim(rem))
    return _ptrim(quot), tuple(rem)


def _pmonic(a: CPoly) -> CPoly:
    return _pscale(a, a[-1].inverse()) if a else a


def _pgcd(a: CPoly, b: CPoly, m: int) -> CPoly:
    while b:
        a, b = b, _pdivmod(a, b, m)[1]
    return _pmonic(a)


def _ppow(a: CPoly, k: int, m: int) -> CPoly:
    out: CPoly = (Cyclotomic.one(m),)
    for _ in range(k):
        out = _pmul(out, a, m)
    return out


@dataclass(frozen=True)
class RatFunc:
    """Element of Q(z_m)(t): reduced fraction with monic denominator."""

    conductor: int
    num: CPoly
    den: CPoly

    @classmethod
    def from_parts(cls, num: Sequence[Cyclotomic], den: Sequence[Cyclotomic], m: int) -> "RatFunc":
        num = _ptrim(c.embed(m) for c in num)
        den = _ptrim(c.embed(m) for c in den)
        if not den:
            raise DivisionByZero("rational function with zero denominator")
        if not num:
            return cls(m, (), (Cyclotomic.one(m),))
        g = _pgcd(num, den, m)
        if len(g) > 1:
            num = _pdivmod(num, g, m)[0]
            den = _pdivmod(den, g, m)[0]
        lead_inv = den[-1].inverse()
        return cls(m, _pscale(num, lead_inv), _pscale(den, lead_inv))

    @classmethod
    def constant(cls, c: Union[Cyclotomic, Number], m: Optional[int] = None) -> "RatFunc":
        if not isinstance(c, Cyclotomic):
            c = Cyclotomic.from_rational(c, m or 1)
        m = m or c.conductor
        return cls.from_parts((c.embed(m),), (Cyclotomic.one(m),), m)

    @classmethod
    def variable(cls, m: int = 1) -> "RatFunc":
        return cls.from_parts((Cyclotomic.zero(m), Cyclotomic.one(m)), (Cyclotomic.one(m),), m)

    def embed(self, target: int) -> "RatFunc":
        if target == self.conductor:
            return self
        return RatFunc(
            target,
            tuple(c.embed(target) for c in self.num),
            tuple(c.embed(target) for c in self.den),
        )

    def _coerce(self, other: object) -> Tuple["RatFunc", "RatFunc"]:
        if isinstance(other, (int, Fraction)):
            return self, RatFunc.constant(other, self.conductor)
        if isinstance(other, Cyclotomic):
            m = lcm(self.conductor, other.conductor)
            return self.embed(m), RatFunc.constant(other.embed(m), m)
        if isinstance(other, RatFunc):
            m = lcm(self.conductor, other.conductor)
            return self.embed(m), other.embed(m)
        raise TypeError(f"cannot combine RatFunc with {type(other).__name__}")

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def constant_value(self) -> Cyclotomic:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num[0] if self.num else Cyclotomic.zero(self.conductor)

    def equals(self, other: object) -> bool:
        try:
            a, b = self._coerce(other)
        except TypeError:
            return False
        return a == b

    def __add__(self, other: object) -> "RatFunc":
        a, b = self._coerce(other)
        m = a.conductor
        num = _padd(_pmul(a.num, b.den, m), _pmul(b.num, a.den, m), m)
        return RatFunc.from_parts(num, _pmul(a.den, b.den, m), m)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(self.conductor, _pneg(self.num), self.den)

    def __sub__(self, other: object) -> "RatFunc":
        a, b = self._coerce(other)
        return a + (-b)

    def __rsub__(self, other: object) -> "RatFunc":
        return (-self) + other

    def __mul__(self, other: object) -> "RatFunc":
        a, b = self._coerce(other)
        m = a.conductor
        return RatFunc.from_parts(_pmul(a.num, b.num, m), _pmul(a.den, b.den, m), m)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise DivisionByZero("inverse of the zero rational function")
        return RatFunc.from_parts(self.den, self.num, self.conductor)

    def __truediv__(self, other: object) -> "RatFunc":
        a, b = self._coerce(other)
        return a * b.inverse()

    def __rtruediv__(self, other: object) -> "RatFunc":
        return self.inverse() * other

    def __pow__(self, k: int) -> "RatFunc":
        base = self if k >= 0 else self.inverse()
        result = RatFunc.constant(1, self.conductor)
        for _ in range(abs(k)):
            result = result * base
        return result

    def apply_galois(self, k: int) -> "RatFunc":
        return RatFunc.from_parts(
            [c.apply_galois(k) for c in self.num],
            [c.apply_galois(k) for c in self.den],
            self.conductor,
        )

    def substitute(self, mobius: Sequence[Cyclotomic]) -> "RatFunc":
        """Image under t -> (a t + b) / (c t + d)."""
        m = self.conductor
        a, b, c, d = (x.embed(m) for x in mobius)
        top: CPoly = _ptrim((b, a))
        bottom: CPoly = _ptrim((d, c))
        degree = max(len(self.num), len(self.den)) - 1

        def homogenize(p: CPoly) -> CPoly:
            acc: CPoly = ()
            for i, coef in enumerate(p):
                term = _pmul(_ppow(top, i, m), _ppow(bottom, degree - i, m), m)
                acc = _padd(acc, _pscale(term, coef), m)
            return acc

        return RatFunc.from_parts(homogenize(self.num), homogenize(self.den), m)

    def key(self) -> tuple:
        return (
            self.conductor,
            tuple(c.coeffs for c in self.num),
            tuple(c.coeffs for c in self.den),
        )

    def __str__(self) -> str:
        return format_ratfunc(self)


FieldScalar = Union[Cyclotomic, RatFunc]


# field automorphisms


def _mobius_normalize(mobius: Sequence[Cyclotomic], m: int) -> Tuple[Cyclotomic, ...]:
    a, b, c, d = (x.embed(m) for x in mobius)
    if (a * d - b * c).is_zero():
        raise InvalidParameter("Mobius matrix must be invertible (ad - bc != 0)")
    scale = c if not c.is_zero() else d
    inv = scale.inverse()
    return (a * inv, b * inv, c * inv, d * inv)


def _mobius_mul(x: Sequence[Cyclotomic], y: Sequence[Cyclotomic]) -> Tuple[Cyclotomic, ...]:
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


@dataclass(frozen=True)
class FieldAut:
    """
    Automorphism of Q(z_m) or Q(z_m)(t)

    Acts as z_m -> z_m ** galois on coefficients, then t -> (a t + b) / (c t + d).
    """

    conductor: int
    galois: int
    mobius: Tuple[Cyclotomic, ...]
    function_field: bool

    @classmethod
    def create(
        cls,
        m: int,
        galois: int = 1,
        mobius: Optional[Sequence[Union[Cyclotomic, Number]]] = None,
        function_field: bool = False,
    ) -> "FieldAut":
        k = galois % m if m > 2 else 1
        if gcd(k, m) != 1:
            raise InvalidParameter(f"Galois exponent {galois} is not a unit modulo {m}")
        identity = _mobius_normalize(_identity_mobius(m), m)
        if mobius is None:
            return cls(m, k, identity, function_field)
        entries = _mobius_normalize(
            [x if isinstance(x, Cyclotomic) else Cyclotomic.from_rational(x, m) for x in mobius], m
        )
        if not function_field and entries != identity:
            raise InvalidParameter("a Mobius part requires a function field")
        return cls(m, k, entries, function_field)

    @classmethod
    def identity(cls, m: int, function_field: bool = False) -> "FieldAut":
        return cls.create(m, 1, None, function_field)

    def apply(self, x: FieldScalar) -> FieldScalar:
        if x.conductor != self.conductor:
            if self.conductor % x.conductor:
                raise MalformedInput(
                    f"automorphism of Q(z_{self.conductor}) applied to Q(z_{x.conductor})"
                )
            x = x.embed(self.conductor)
        if isinstance(x, Cyclotomic):
            return x.apply_galois(self.galois)
        if not self.function_field and not x.is_constant():
            raise MalformedInput("automorphism of a constant field applied to a rational function")
        return x.apply_galois(self.galois).substitute(self.mobius)

    def compose(self, other: "FieldAut") -> "FieldAut":
        """self after other: (self o other)(x) = self(other(x))."""
        if self.conductor != other.conductor:
            raise MalformedInput("automorphisms over different conductors")
        twisted = [c.apply_galois(self.galois) for c in other.mobius]
        return FieldAut.create(
            self.conductor,
            (self.galois * other.galois) % self.conductor,
            _mobius_mul(twisted, self.mobius),
            self.function_field or other.function_field,
        )

    def inverse(self) -> "FieldAut":
        m = self.conductor
        k_inv = pow(self.galois, -1, m) if m > 2 else 1
        a, b, c, d = self.mobius
        adjugate = (d, -b, -c, a)
        return FieldAut.create(
            m, k_inv, [x.apply_galois(k_inv) for x in adjugate], self.function_field
        )

    def is_identity(self) -> bool:
        return self == FieldAut.identity(self.conductor, self.function_field)

    def fixes_roots_of_unity(self) -> bool:
        return self.conductor <= 2 or self.galois % self.conductor == 1

    def key(self) -> tuple:
        return (self.conductor, self.galois, tuple(c.coeffs for c in self.mobius), self.function_field)


def _identity_mobius(m: int) -> Tuple[Cyclotomic, ...]:
    return (Cyclotomic.one(m), Cyclotomic.zero(m), Cyclotomic.zero(m), Cyclotomic.one(m))


def apply_aut(sigma: FieldAut, x: FieldScalar) -> FieldScalar:
    return sigma.apply(x)


def aut_compose(sigma: FieldAut, tau: FieldAut) -> FieldAut:
    return sigma.compose(tau)


# text syntax

_TERM = re.compile(r"^(?:(\d+(?:/\d+)?)\*?)?(z(?:\^(\d+))?)?$")


def _format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_cyclotomic(x: Cyclotomic) -> str:
    terms = []
    for k, c in enumerate(x.coeffs):
        if not c:
            continue
        if k == 0:
            terms.append(_format_rational(c))
            continue
        power = "z" if k == 1 else f"z^{k}"
        if c == 1:
            terms.append(power)
        elif c == -1:
            terms.append(f"-{power}")
        else:
            terms.append(f"{_format_rational(c)}*{power}")
    if not terms:
        return "0"
    out = terms[0]
    for term in terms[1:]:
        out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
    return out


_SIGNED_TERM = re.compile(r"([+-]?)([^+-]+)")


def parse_cyclotomic(text: str, m: int) -> Cyclotomic:
    compact = text.replace(" ", "")
    if not compact:
        raise ParseError("empty cyclotomic literal")
    matches = list(_SIGNED_TERM.finditer(compact))
    if "".join(match.group(0) for match in matches) != compact:
        raise ParseError(f"bad cyclotomic literal {text!r}")
    coeffs: List[Fraction] = []
    for match in matches:
        sign, body = match.groups()
        term = _TERM.match(body)
        if term is None or (term.group(1) is None and term.group(2) is None):
            raise ParseError(f"bad cyclotomic term {body!r} in {text!r}")
        try:
            coef = Fraction(term.group(1)) if term.group(1) else Fraction(1)
        except ZeroDivisionError as e:
            raise ParseError(f"zero denominator in {text!r}") from e
        if sign == "-":
            coef = -coef
        power = 0
        if term.group(2):
            power = (int(term.group(3)) if term.group(3) else 1) % m
        coeffs.extend(Fraction(0) for _ in range(power + 1 - len(coeffs)))
        coeffs[power] += coef
    return Cyclotomic.from_coeffs(coeffs, m)


def _format_cpoly(p: CPoly) -> str:
    if not p:
        return "(0)"
    terms = []
    for k, c in enumerate(p):
        if c.is_zero():
            continue
        power = "" if k == 0 else ("*t" if k == 1 else f"*t^{k}")
        terms.append(f"({format_cyclotomic(c)}){power}")
    return " + ".join(terms)


def format_ratfunc(x: RatFunc) -> str:
    if len(x.den) == 1:
        return _format_cpoly(x.num)
    return f"({_format_cpoly(x.num)})/({_format_cpoly(x.den)})"


def _split_top_level(text: str, sep: str) -> List[str]:
    parts, depth, start, i = [], 0, 0, 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {text!r}")
        elif depth == 0 and text.startswith(sep, i):
            parts.append(text[start:i])
            i += len(sep)
            start = i
            continue
        i += 1
    if depth:
        raise ParseError(f"unbalanced parentheses in {text!r}")
    parts.append(text[start:])
    return parts


_POLY_TERM = re.compile(
    r"^\((?P<coef>.*)\)(?P<var>\*t(?:\^(?P<exp>\d+))?)?$|^t(?:\^(?P<bare>\d+))?$"
)


_MAX_T_DEGREE = 256


def _parse_cpoly(text: str, m: int) -> CPoly:
    coeffs: List[Cyclotomic] = []
    for raw in _split_top_level(text.strip(), "+"):
        body = raw.strip()
        match = _POLY_TERM.match(body)
        if match is None:
            raise ParseError(f"bad polynomial term {body!r}")
        if match.group("coef") is not None:
            coef = parse_cyclotomic(match.group("coef"), m)
            power = 0
            if match.group("var"):
                power = int(match.group("exp")) if match.group("exp") else 1
        else:
            coef = Cyclotomic.one(m)
            power = int(match.group("bare")) if match.group("bare") else 1
        if power > _MAX_T_DEGREE:
            raise ParseError(f"degree {power} in t exceeds {_MAX_T_DEGREE}")
        coeffs.extend(Cyclotomic.zero(m) for _ in range(power + 1 - len(coeffs)))
        coeffs[power] = coeffs[power] + coef
    return _ptrim(coeffs)


def parse_ratfunc(text: str, m: int) -> RatFunc:
    pieces = _split_top_level(text.strip(), "/")
    if len(pieces) == 1:
        return RatFunc.from_parts(_parse_cpoly(pieces[0], m), (Cyclotomic.one(m),), m)
    if len(pieces) != 2:
        raise ParseError(f"bad rational function {text!r}")
    num_text, den_text = (p.strip() for p in pieces)
    for part in (num_text, den_text):
        if not (part.startswith("(") and part.endswith(")")):
            raise ParseError(f"numerator and denominator must be parenthesised in {text!r}")
    return RatFunc.from_parts(_parse_cpoly(num_text[1:-1], m), _parse_cpoly(den_text[1:-1], m), m)


def parse_scalar(text: str, m: int, transcendental: bool = False) -> FieldScalar:
    if not isinstance(text, str):
        raise ParseError(f"scalar must be a string, got {text!r}")
    return parse_ratfunc(text, m) if transcendental else parse_cyclotomic(text, m)


def format_scalar(x: FieldScalar) -> str:
    return format_ratfunc(x) if isinstance(x, RatFunc) else format_cyclotomic(x)
