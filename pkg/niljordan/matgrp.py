"""
Exact matrices over cyclotomic and function fields, semilinear elements and
the common-eigenspace machinery for finite abelian matrix groups
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .cyclo import (
    Cyclotomic,
    FieldAut,
    FieldScalar,
    RatFunc,
    format_scalar,
    roots_of_unity,
)
from .errors import (
    IncompleteSplit,
    InvalidParameter,
    MalformedInput,
    NotInvariant,
    NotNormal,
    Singular,
)
from .groupcore import (
    FiniteGroup,
    GroupElement,
    Homomorphism,
    PermutationElement,
    homomorphism_from_images,
    is_normal,
    symmetric_group,
)

logger = logging.getLogger(__name__)

Vector = Tuple[FieldScalar, ...]


def coerce_scalar(x: Union[int, Fraction, FieldScalar], m: int, transcendental: bool) -> FieldScalar:
    """Bring a number into the uniform scalar kind of a matrix over Q(z_m) or Q(z_m)(t)."""
    if isinstance(x, RatFunc):
        if not transcendental:
            if not x.is_constant():
                raise MalformedInput(f"rational function {x} in a constant-field matrix")
            return x.constant_value().embed(m)
        return x.embed(m)
    if isinstance(x, Cyclotomic):
        x = x.embed(m)
    else:
        x = Cyclotomic.from_rational(x, m)
    return RatFunc.constant(x, m) if transcendental else x


def _zero(m: int, transcendental: bool) -> FieldScalar:
    return coerce_scalar(0, m, transcendental)


def _one(m: int, transcendental: bool) -> FieldScalar:
    return coerce_scalar(1, m, transcendental)


# --------------------------------------------------------------------------
# Matrices
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ExactMatrix:
    """Square matrix with entries of one scalar kind over one conductor."""

    rows: Tuple[Tuple[FieldScalar, ...], ...]
    conductor: int
    transcendental: bool = False

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], m: int, transcendental: bool = False) -> "ExactMatrix":
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise MalformedInput("matrix must be square and nonempty")
        return cls(
            tuple(tuple(coerce_scalar(x, m, transcendental) for x in r) for r in rows),
            m,
            transcendental,
        )

    @classmethod
    def identity(cls, n: int, m: int, transcendental: bool = False) -> "ExactMatrix":
        return cls.scalar(1, n, m, transcendental)

    @classmethod
    def scalar(cls, value, n: int, m: int, transcendental: bool = False) -> "ExactMatrix":
        zero = _zero(m, transcendental)
        value = coerce_scalar(value, m, transcendental)
        return cls(
            tuple(tuple(value if i == j else zero for j in range(n)) for i in range(n)),
            m,
            transcendental,
        )

    @classmethod
    def diagonal(cls, values: Sequence, m: int, transcendental: bool = False) -> "ExactMatrix":
        n = len(values)
        return cls.from_rows(
            [[values[i] if i == j else 0 for j in range(n)] for i in range(n)], m, transcendental
        )

    @property
    def n(self) -> int:
        return len(self.rows)

    def _check(self, other: "ExactMatrix") -> None:
        if (other.n, other.conductor, other.transcendental) != (self.n, self.conductor, self.transcendental):
            raise MalformedInput("matrix dimensions or fields do not match")

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        cols = list(zip(*other.rows))
        zero = _zero(self.conductor, self.transcendental)
        out = []
        for row in self.rows:
            new_row = []
            for col in cols:
                acc = zero
                for a, b in zip(row, col):
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                new_row.append(acc)
            out.append(tuple(new_row))
        return ExactMatrix(tuple(out), self.conductor, self.transcendental)

    __mul__ = __matmul__

    def apply(self, vector: Sequence[FieldScalar]) -> Vector:
        if len(vector) != self.n:
            raise MalformedInput("vector length does not match matrix dimension")
        zero = _zero(self.conductor, self.transcendental)
        out = []
        for row in self.rows:
            acc = zero
            for a, v in zip(row, vector):
                if not a.is_zero() and not v.is_zero():
                    acc = acc + a * v
            out.append(acc)
        return tuple(out)

    def map_entries(self, f) -> "ExactMatrix":
        return ExactMatrix(
            tuple(tuple(f(x) for x in r) for r in self.rows), self.conductor, self.transcendental
        )

    def det(self) -> FieldScalar:
        """Bareiss fraction-free elimination."""
        n = self.n
        a = [list(r) for r in self.rows]
        one = _one(self.conductor, self.transcendental)
        sign, prev = 1, one
        for k in range(n - 1):
            if a[k][k].is_zero():
                swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
                if swap is None:
                    return _zero(self.conductor, self.transcendental)
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
            prev = a[k][k]
        det = a[n - 1][n - 1]
        return det if sign == 1 else -det

    def inverse(self) -> "ExactMatrix":
        """Gauss-Jordan on [A | I]."""
        n = self.n
        m, tr = self.conductor, self.transcendental
        zero, one = _zero(m, tr), _one(m, tr)
        aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
            if pivot is None:
                raise Singular("matrix is not invertible")
            aug[col], aug[pivot] = aug[pivot], aug[col]
            inv = aug[col][col].inverse()
            aug[col] = [x * inv for x in aug[col]]
            for r in range(n):
                if r != col and not aug[r][col].is_zero():
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        return ExactMatrix(tuple(tuple(r[n:]) for r in aug), m, tr)

    def is_identity(self) -> bool:
        return self == ExactMatrix.identity(self.n, self.conductor, self.transcendental)

    def key(self) -> tuple:
        return tuple(tuple(x.key() for x in r) for r in self.rows)

    def to_strings(self) -> List[List[str]]:
        return [[format_scalar(x) for x in r] for r in self.rows]

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(r) + "]" for r in self.to_strings()) + "]"


def mat_arith(op: str, a: ExactMatrix, b=None):
    """Dispatch one of mul, inv, det, apply_to_vector."""
    if op == "mul":
        return a @ b
    if op == "inv":
        return a.inverse()
    if op == "det":
        return a.det()
    if op == "apply_to_vector":
        return a.apply(b)
    raise InvalidParameter(f"unknown matrix operation: {op}")


class MatrixElement(GroupElement):
    """Invertible matrix as a group element."""

    kind = "matrix"
    __slots__ = ("matrix",)

    def __init__(self, matrix: ExactMatrix):
        self.matrix = matrix
        self._key = matrix.key()

    def __mul__(self, other: "MatrixElement") -> "MatrixElement":
        return MatrixElement(self.matrix @ other.matrix)

    def inverse(self) -> "MatrixElement":
        return MatrixElement(self.matrix.inverse())

    def identity_like(self) -> "MatrixElement":
        mat = self.matrix
        return MatrixElement(ExactMatrix.identity(mat.n, mat.conductor, mat.transcendental))

    def ambient_params(self) -> tuple:
        mat = self.matrix
        return ("matrix", mat.n, mat.conductor, mat.transcendental)

    def act(self, vector: Sequence[FieldScalar]) -> Vector:
        return self.matrix.apply(vector)

    def __str__(self) -> str:
        return str(self.matrix)


class SemilinearElement(GroupElement):
    """
    Pair (A, sigma) acting on K^n by v -> A sigma(v)

    (A, s)(B, t) = (A s(B), s t) and (A, s)^-1 = (s^-1(A^-1), s^-1).
    """

    kind = "semilinear"
    __slots__ = ("matrix", "aut")

    def __init__(self, matrix: ExactMatrix, aut: FieldAut):
        if aut.conductor != matrix.conductor:
            raise MalformedInput("automorphism and matrix use different conductors")
        if aut.function_field != matrix.transcendental:
            aut = FieldAut.create(aut.conductor, aut.galois, aut.mobius, matrix.transcendental)
        self.matrix = matrix
        self.aut = aut
        self._key = (matrix.key(), aut.key())

    def __mul__(self, other: "SemilinearElement") -> "SemilinearElement":
        twisted = other.matrix.map_entries(self.aut.apply)
        return SemilinearElement(self.matrix @ twisted, self.aut.compose(other.aut))

    def inverse(self) -> "SemilinearElement":
        inv_aut = self.aut.inverse()
        return SemilinearElement(self.matrix.inverse().map_entries(inv_aut.apply), inv_aut)

    def identity_like(self) -> "SemilinearElement":
        mat = self.matrix
        return SemilinearElement(
            ExactMatrix.identity(mat.n, mat.conductor, mat.transcendental),
            FieldAut.identity(mat.conductor, mat.transcendental),
        )

    def ambient_params(self) -> tuple:
        mat = self.matrix
        return ("semilinear", mat.n, mat.conductor, mat.transcendental)

    def act(self, vector: Sequence[FieldScalar]) -> Vector:
        return semilinear_action(self, vector)

    def __str__(self) -> str:
        return f"({self.matrix}, galois={self.aut.galois}, mobius=[{', '.join(format_scalar(x) for x in self.aut.mobius)}])"


def semilinear_action(element: SemilinearElement, vector: Sequence[FieldScalar]) -> Vector:
    return element.matrix.apply([element.aut.apply(v) for v in vector])


def matrix_of(element: GroupElement) -> ExactMatrix:
    """Linear part of a matrix element, or of a semilinear element with trivial automorphism."""
    if isinstance(element, MatrixElement):
        return element.matrix
    if isinstance(element, SemilinearElement):
        if not element.aut.is_identity():
            raise MalformedInput(f"{element} is not linear")
        return element.matrix
    raise MalformedInput(f"{element} is not a matrix element")


def act(element: GroupElement, vector: Sequence[FieldScalar]) -> Vector:
    if isinstance(element, (MatrixElement, SemilinearElement)):
        return element.act(vector)
    raise MalformedInput(f"{element} does not act on vectors")


def element_order(g: Union[ExactMatrix, GroupElement], cap: int) -> Optional[int]:
    """Least d <= cap with g^d = 1, else None."""
    if isinstance(g, ExactMatrix):
        g = MatrixElement(g)
    one = g.identity_like()
    power = g
    for d in range(1, cap + 1):
        if power == one:
            return d
        power = power * g
    return None


# --------------------------------------------------------------------------
# Linear algebra over the scalar field
# --------------------------------------------------------------------------


def _rref(rows: List[List[FieldScalar]]) -> Tuple[List[List[FieldScalar]], List[int]]:
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def normalize_vector(v: Sequence[FieldScalar]) -> Vector:
    """Scale so the first nonzero coordinate is 1."""
    lead = next((x for x in v if not x.is_zero()), None)
    if lead is None:
        return tuple(v)
    inv = lead.inverse()
    return tuple(x * inv for x in v)


def nullspace(rows: Sequence[Sequence[FieldScalar]], ncols: int, zero: FieldScalar, one: FieldScalar) -> List[Vector]:
    """Basis of {x : rows x = 0}, each vector normalized."""
    reduced, pivots = _rref([list(r) for r in rows])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [zero] * ncols
        x[f] = one
        for row, p in zip(reduced, pivots):
            x[p] = -row[f]
        basis.append(normalize_vector(x))
    return basis


def rank(vectors: Sequence[Sequence[FieldScalar]]) -> int:
    if not vectors:
        return 0
    return len(_rref([list(v) for v in vectors])[1])


def subspace_equal(first: Sequence[Sequence[FieldScalar]], second: Sequence[Sequence[FieldScalar]]) -> bool:
    r = rank(first)
    return r == rank(second) == rank(list(first) + list(second))


def scalar_action(matrix: ExactMatrix, basis: Sequence[Sequence[FieldScalar]]) -> Optional[FieldScalar]:
    """The scalar by which matrix acts on span(basis), if it acts by one."""
    value = None
    for v in basis:
        image = matrix.apply(v)
        k = next(i for i, x in enumerate(v) if not x.is_zero())
        lam = image[k] / v[k]
        if value is None:
            value = lam
        elif not (lam - value).is_zero():
            return None
        if any(not (a - lam * b).is_zero() for a, b in zip(image, v)):
            return None
    return value


# --------------------------------------------------------------------------
# Common eigenspaces
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EigenSpace:
    basis: Tuple[Vector, ...]
    character: Tuple[int, ...]
    values: Tuple[Cyclotomic, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class EigenDecomposition:
    """
    Splitting of K^n into common eigenspaces

    ``character`` entries are exponents j of exp(2 pi i j / L), L = lcm(2, m),
    one per generator in ``generators``.
    """

    subspaces: Tuple[EigenSpace, ...]
    generators: Tuple[int, ...]
    n: int
    conductor: int

    @property
    def r(self) -> int:
        return len(self.subspaces)


def _eigen_restricted(matrix: ExactMatrix, basis: Sequence[Vector], lam: FieldScalar) -> List[Vector]:
    """Vectors of span(basis) on which matrix acts as lam."""
    m, tr = matrix.conductor, matrix.transcendental
    zero, one = _zero(m, tr), _one(m, tr)
    columns = [tuple(a - lam * b for a, b in zip(matrix.apply(v), v)) for v in basis]
    rows = [list(r) for r in zip(*columns)]
    coords = nullspace(rows, len(basis), zero, one)
    out = []
    for x in coords:
        vec = [zero] * matrix.n
        for coef, v in zip(x, basis):
            if not coef.is_zero():
                vec = [a + coef * b for a, b in zip(vec, v)]
        out.append(normalize_vector(vec))
    return out


def simultaneous_eigenspaces(A: FiniteGroup) -> EigenDecomposition:
    """
    Common eigenspaces of a finite abelian matrix group

    Each generator splits the current pieces into eigenspaces for the roots of
    unity whose order divides the generator's order. A piece that does not
    split completely means the conductor is too small.
    """
    if not A.is_abelian():
        raise MalformedInput("simultaneous eigenspaces need an abelian group")
    sample = matrix_of(A.element(A.identity))
    n, m, tr = sample.n, sample.conductor, sample.transcendental
    zero, one = _zero(m, tr), _one(m, tr)
    full = tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))
    pieces: List[Tuple[Tuple[Vector, ...], Tuple[int, ...], Tuple[Cyclotomic, ...]]] = [(full, (), ())]
    gens = tuple(g for g in A.generators if g != A.identity)
    roots = roots_of_unity(m)

    for g in gens:
        mat = matrix_of(A.element(g))
        d = A.element_order(g)
        candidates = [(j, value) for j, order, value in roots if d % order == 0]
        refined = []
        for basis, character, values in pieces:
            covered = 0
            for j, value in candidates:
                sub = _eigen_restricted(mat, basis, coerce_scalar(value, m, tr))
                if sub:
                    refined.append((tuple(sub), character + (j,), values + (value,)))
                    covered += len(sub)
            if covered != len(basis):
                raise IncompleteSplit(
                    f"generator {A.element(g)} does not split over Q(z_{m}); enlarge the conductor"
                )
        pieces = refined

    pieces.sort(key=lambda piece: piece[1])
    subspaces = tuple(EigenSpace(basis, character, values) for basis, character, values in pieces)
    if sum(s.dim for s in subspaces) != n:
        raise IncompleteSplit("eigenspace dimensions do not sum to n")
    logger.debug(f"Split K^{n} into {len(subspaces)} common eigenspaces")
    return EigenDecomposition(subspaces, gens, n, m)


def eigenspace_permutation_action(
    G: FiniteGroup, D: EigenDecomposition, A: FiniteGroup
) -> Tuple[Homomorphism, FiniteGroup]:
    """
    Permutation action of G on the common eigenspaces D of a normal abelian subgroup A

    A is always checked for normality in G before any image is computed.

    Returns:
        The homomorphism G -> Sym(r) and its kernel G1
    """
    if not is_normal(A, G):
        raise NotNormal("the abelian subgroup is not normal")
    spaces = [list(s.basis) for s in D.subspaces]
    images = []
    for g in G.generators:
        element = G.element(g)
        perm = []
        for basis in spaces:
            moved = [act(element, v) for v in basis]
            target = next(
                (j for j, other in enumerate(spaces) if len(other) == len(moved) and subspace_equal(moved, other)),
                None,
            )
            if target is None:
                raise NotInvariant(f"{element} does not permute the eigenspaces")
            perm.append(target)
        images.append(PermutationElement(perm))
    S = symmetric_group(D.r, caps=G.caps)
    hom = homomorphism_from_images(G, S, images)
    G1 = hom.kernel(name="G1")
    logger.debug(f"Eigenspace action: r={D.r}, |G:G1| = {G.order // G1.order}")
    return hom, G1
