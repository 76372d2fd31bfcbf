"""
Extraction pipelines for bounded-index nilpotent subgroups

Every pipeline returns an ``ExtractionCertificate``: the subgroup found, the
class it is claimed and verified to have, its index and the bound the index
was proven against, plus a trace of the intermediate groups that
``verify_certificate`` can replay.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .cyclo import roots_of_unity
from .errors import (
    CensusCapExceeded,
    ClassHypothesisViolated,
    GammaNotNilpotent,
    InvalidParameter,
    MalformedInput,
    NilJordanError,
    NotCentral,
    RootsOfUnityMoved,
    VerificationFailed,
)
from .groupcore import (
    FiniteGroup,
    GroupElement,
    all_subgroups,
    automorphism_group,
    centralizer,
    is_characteristic,
    maximal_order_abelian_subgroups,
    min_generator_count,
    minimal_generating_set,
    quotient,
    subgroups_of_index_by_action,
    subgroups_of_index_direct,
)
from .matgrp import (
    MatrixElement,
    SemilinearElement,
    eigenspace_permutation_action,
    matrix_of,
    scalar_action,
    simultaneous_eigenspaces,
)
from .nilpo import lower_central_series, nilpotency_class, phi_homomorphism, upper_central_series

logger = logging.getLogger(__name__)

MODES = ("dn", "jor", "groupmain", "groupmain-nogen")


@dataclass(frozen=True)
class TraceStep:
    """One named pipeline step: the group it produced and its index in the group the step started from."""

    name: str
    order: int
    index: int
    detail: str = ""


@dataclass(frozen=True)
class ExtractionCertificate:
    mode: str
    inputs: Dict[str, int]
    group_order: int
    subgroup: FiniteGroup
    claimed_class_bound: int
    verified_class: int
    index: int
    bound_value: int
    trace: Tuple[TraceStep, ...]
    input_generators: Tuple[int, ...] = ()
    characteristic: Optional[str] = None
    hypothesis_m: Optional[int] = None


# --------------------------------------------------------------------------
# Characteristic abelian subgroup
# --------------------------------------------------------------------------


def characteristic_abelian(N: FiniteGroup) -> ExtractionCertificate:
    """
    Intersection of all abelian subgroups of maximal order

    The set of those subgroups is permuted by every automorphism, so the
    intersection is characteristic. For groups within the automorphism cap
    this is also checked against the enumerated automorphisms.
    """
    S = maximal_order_abelian_subgroups(N)
    mask = N.mask.copy()
    for B in S:
        mask &= B.mask
    A = N.span(np.flatnonzero(mask), name="A")
    J0 = N.order // S[0].order
    L = len(S)

    tag = "by-construction"
    if N.order <= N.caps.automorphism_cap:
        try:
            auts = automorphism_group(N)
        except CensusCapExceeded as e:
            logger.debug(f"Skipping automorphism check: {e}")
        else:
            if not is_characteristic(A, auts):
                raise VerificationFailed("intersection of maximal abelian subgroups is not characteristic")
            tag = "verified"

    index = N.order // A.order
    bound = J0**L
    if index > bound:
        raise VerificationFailed(f"abelian core index {index} exceeds {bound}")
    trace = (
        TraceStep("abelian-subgroups", S[0].order, J0, f"{L} of maximal order"),
        TraceStep("intersection", A.order, index),
    )
    logger.info(f"Characteristic abelian subgroup of order {A.order}, index {index}")
    return ExtractionCertificate(
        mode="jor",
        inputs={"J": J0, "L": L},
        group_order=N.order,
        subgroup=A,
        claimed_class_bound=1,
        verified_class=nilpotency_class(A),
        index=index,
        bound_value=bound,
        trace=trace,
        characteristic=tag,
    )


# --------------------------------------------------------------------------
# Intersection of commutator-map kernels
# --------------------------------------------------------------------------


def dn_extract(G: FiniteGroup, gens: Sequence[Union[int, GroupElement]], c: int) -> ExtractionCertificate:
    """
    Class <= c subgroup of a class <= c+1 group

    H is the intersection of the kernels of g -> [[...[x1, x2]...], xc], g]
    over all m^c sequences of generators; each kernel has index at most
    |gamma_c(G)| = J, so |G:H| <= J^(m^c).
    """
    if c < 0:
        raise InvalidParameter("class bound must be non-negative")
    gens = tuple(G.index_of(g) for g in gens)
    if not gens or G.subgroup(gens) != G:
        raise InvalidParameter("the given elements do not generate the group")
    lower = lower_central_series(G)
    cls = lower.nilpotency_class
    if cls is None or cls > c + 1:
        raise ClassHypothesisViolated(f"class {cls} exceeds {c + 1}")
    J = lower.chain[c].order if c < len(lower.chain) else 1
    m = len(gens)

    mask = G.mask.copy()
    for seq in itertools.product(gens, repeat=c):
        phi = phi_homomorphism(G, c + 1, seq, c + 1)
        mask &= phi.kernel().mask
    H = G.span(np.flatnonzero(mask), name="H")

    verified = nilpotency_class(H)
    if verified is None or verified > c:
        raise VerificationFailed(f"kernel intersection has class {verified} > {c}")
    index = G.order // H.order
    bound = J ** (m**c)
    if index > bound:
        raise VerificationFailed(f"index {index} exceeds {bound}")
    trace = (
        TraceStep("class-check", G.order, 1, f"class {cls} <= {c + 1}"),
        TraceStep(f"gamma_{c}", J, G.order // J),
        TraceStep("kernels", H.order, index, f"{m**c} commutator maps"),
    )
    logger.info(f"Kernel intersection: |G:H| = {index} <= {bound}")
    return ExtractionCertificate(
        mode="dn",
        inputs={"c": c, "m": m, "J": J},
        group_order=G.order,
        subgroup=H,
        claimed_class_bound=c,
        verified_class=verified,
        index=index,
        bound_value=bound,
        trace=trace,
        input_generators=gens,
    )


# --------------------------------------------------------------------------
# Index-J census
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CensusResult:
    index: int
    subgroups: Tuple[FiniteGroup, ...]
    rank: int
    bound: int
    candidates: int
    homomorphisms: int
    transitive: int

    @property
    def count(self) -> int:
        return len(self.subgroups)


def subgroup_census(G: FiniteGroup, J: int) -> CensusResult:
    """Index-J subgroups from transitive actions on J points, checked against direct enumeration."""
    action = subgroups_of_index_by_action(G, J)
    direct = subgroups_of_index_direct(G, J)
    if [H.signature() for H in direct] != [H.signature() for H in action.subgroups]:
        raise VerificationFailed(f"census methods disagree at index {J}")
    bound = math.factorial(J) ** action.rank
    if len(direct) > bound:
        raise VerificationFailed(f"{len(direct)} subgroups of index {J} exceed (J!)^r = {bound}")
    return CensusResult(
        J, action.subgroups, action.rank, bound, action.candidates, action.homomorphisms, action.transitive
    )


# --------------------------------------------------------------------------
# Semilinear pipeline
# --------------------------------------------------------------------------


def _field_part(element: GroupElement):
    if isinstance(element, SemilinearElement):
        return element.aut
    if isinstance(element, MatrixElement):
        return None
    raise MalformedInput(f"{element} is not a matrix or semilinear element")


def _linear_kernel(G: FiniteGroup) -> FiniteGroup:
    keep = []
    for x in G.members:
        aut = _field_part(G.element(x))
        if aut is None or aut.is_identity():
            keep.append(int(x))
    return G.span(keep, name="N")


def _check_roots_fixed(G: FiniteGroup) -> None:
    sample = G.element(G.identity)
    m = sample.matrix.conductor
    roots = roots_of_unity(m)
    for g in G.generators:
        aut = _field_part(G.element(g))
        if aut is None:
            continue
        for _, order, value in roots:
            if not aut.apply(value).equals(value):
                raise RootsOfUnityMoved(
                    f"{G.element(g)} moves a root of unity of order {order}"
                )


def _max_generator_count(groups: Sequence[FiniteGroup]) -> Optional[int]:
    best = None
    for K in groups:
        if K.order > K.caps.search_cap:
            logger.warning(
                f"Skipping {K!r} in the generator count: order {K.order} exceeds search_cap {K.caps.search_cap}"
            )
            continue
        k = min_generator_count(K)
        best = k if best is None else max(best, k)
    return best


def groupmain_extract(G: FiniteGroup, c: int, mode: str = "groupmain") -> ExtractionCertificate:
    """
    Class <= c+1 subgroup of bounded index in a finite semilinear group

    Steps: split off the linear kernel N and check the field-automorphism
    image; take a characteristic abelian A of N and its common eigenspaces;
    pass to the kernel G1 of the eigenspace permutation action, where A is
    central; in G1/A, the centralizer C of the image of N has class <= c+1.
    Mode ``groupmain`` runs the kernel intersection on C and lifts the result
    (class <= c+1); ``groupmain-nogen`` lifts C itself (class <= c+2).
    """
    if mode not in ("groupmain", "groupmain-nogen"):
        raise InvalidParameter(f"unknown pipeline mode: {mode}")
    if c < 0:
        raise InvalidParameter("class bound must be non-negative")
    trace: List[TraceStep] = []

    N = _linear_kernel(G)
    Gamma, _ = quotient(G, N, name="Gamma")
    gamma_class = nilpotency_class(Gamma)
    if gamma_class is None or gamma_class > c:
        raise GammaNotNilpotent(f"automorphism image has class {gamma_class}, expected <= {c}")
    _check_roots_fixed(G)
    trace.append(TraceStep("linear-kernel", N.order, G.order // N.order, f"Gamma class {gamma_class}"))

    jor = characteristic_abelian(N)
    A = jor.subgroup
    trace.append(TraceStep("characteristic-abelian", A.order, N.order // A.order, jor.characteristic))

    D = simultaneous_eigenspaces(A)
    r, n = D.r, D.n
    for a in A.generators:
        matrix = matrix_of(A.element(a))
        if any(scalar_action(matrix, W.basis) is None for W in D.subspaces):
            raise VerificationFailed(f"{A.element(a)} does not act by scalars on its eigenspaces")
    _, G1 = eigenspace_permutation_action(G, D, A)
    idx1 = G.order // G1.order
    if idx1 > math.factorial(r) or r > n:
        raise VerificationFailed(f"|G:G1| = {idx1} exceeds r! with r = {r}, n = {n}")
    trace.append(TraceStep("eigenspace-kernel", G1.order, idx1, f"r = {r}"))

    amb = G.ambient
    if any(amb.mul(a, g) != amb.mul(g, a) for a in A.generators for g in G1.generators):
        raise NotCentral("the abelian subgroup is not central in G1")

    Gbar, projection = quotient(G1, A, name="G1/A")
    N1 = G1.span(G1.members[N.mask[G1.members]], name="N1")
    Nbar = Gbar.span(np.unique(projection.images[N1.members]), name="Nbar")
    C = centralizer(Gbar, Nbar, name="C")
    idx2 = Gbar.order // C.order
    c_class = nilpotency_class(C)
    if c_class is None or c_class > c + 1:
        raise VerificationFailed(f"centralizer has class {c_class} > {c + 1}")
    if idx2 > math.factorial(Nbar.order):
        raise VerificationFailed(f"centralizer index {idx2} exceeds |Nbar|!")
    trace.append(TraceStep("centralizer", C.order, idx2, f"|Nbar| = {Nbar.order}"))

    bound = math.factorial(r) * math.factorial(Nbar.order)
    formula, factors = "r! * |Nbar|!", f"{r}! * {Nbar.order}!"
    inputs = {"c": c, "n": n, "r": r, "nbar": Nbar.order}
    if mode == "groupmain":
        gens = minimal_generating_set(C)
        dn = dn_extract(C, gens, c)
        H = projection.preimage(dn.subgroup, name="H")
        bound *= dn.bound_value
        claimed = max(c + 1, 1)
        inputs.update(m=len(gens), J=dn.inputs["J"])
        formula += " * J^(m^c)"
        factors += f" * {dn.inputs['J']}^({len(gens)}^{c})"
        trace.append(TraceStep("kernel-intersection", dn.subgroup.order, dn.index, f"{len(gens)} generators"))
    else:
        H = projection.preimage(C, name="H")
        claimed = c + 2
    trace.append(TraceStep("lift", H.order, G.order // H.order, f"bound {formula} = {factors} = {bound}"))

    verified = nilpotency_class(H)
    if verified is None or verified > claimed:
        raise VerificationFailed(f"extracted subgroup has class {verified} > {claimed}")
    index = G.order // H.order
    if index > bound:
        raise VerificationFailed(f"index {index} exceeds the composed bound {bound}")
    logger.info(f"Pipeline {mode}: |G| = {G.order}, |H| = {H.order}, class {verified}")
    return ExtractionCertificate(
        mode=mode,
        inputs=inputs,
        group_order=G.order,
        subgroup=H,
        claimed_class_bound=claimed,
        verified_class=verified,
        index=index,
        bound_value=bound,
        trace=tuple(trace),
        characteristic=jor.characteristic,
        hypothesis_m=_max_generator_count([G, N, A, G1, Gbar, C, H]),
    )


def extract(G: FiniteGroup, mode: str, c: int = 1, gens: Optional[Sequence[int]] = None) -> ExtractionCertificate:
    """Dispatch on the pipeline mode."""
    if mode == "jor":
        return characteristic_abelian(G)
    if mode == "dn":
        return dn_extract(G, gens if gens is not None else minimal_generating_set(G), c)
    if mode in ("groupmain", "groupmain-nogen"):
        return groupmain_extract(G, c, mode)
    raise InvalidParameter(f"unknown pipeline mode: {mode}")


# --------------------------------------------------------------------------
# Verification
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    checks: Tuple[CheckResult, ...]

    @property
    def valid(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed(self) -> Optional[str]:
        return next((check.name for check in self.checks if not check.passed), None)


def _replay(cert: ExtractionCertificate, G: FiniteGroup) -> ExtractionCertificate:
    if cert.mode == "dn":
        return dn_extract(G, cert.input_generators, cert.inputs["c"])
    return extract(G, cert.mode, cert.inputs.get("c", 1))


def verify_certificate(cert: ExtractionCertificate, G: FiniteGroup) -> VerificationReport:
    """Re-check a certificate against G from scratch; never raises for a bad certificate."""
    H = cert.subgroup
    checks: List[CheckResult] = []

    member = H.ambient is G.ambient and H.is_subgroup_of(G)
    checks.append(CheckResult("membership", member))
    if not member:
        return VerificationReport(tuple(checks))

    closed = np.array_equal(G.ambient.closure(H.generators), H.members)
    checks.append(CheckResult("closure", closed))

    lower, upper = lower_central_series(H), upper_central_series(H)
    agree = lower.nilpotency_class == upper.nilpotency_class == cert.verified_class
    checks.append(
        CheckResult("class", agree, f"lower {lower.nilpotency_class}, upper {upper.nilpotency_class}")
    )
    checks.append(CheckResult("class-bound", cert.verified_class <= cert.claimed_class_bound))

    arithmetic = (
        cert.group_order == G.order
        and G.order % H.order == 0
        and cert.index == G.order // H.order
    )
    checks.append(CheckResult("index", arithmetic, f"|G| = {G.order}, |H| = {H.order}"))
    checks.append(CheckResult("bound", cert.index <= cert.bound_value))

    try:
        again = _replay(cert, G)
    except NilJordanError as e:
        checks.append(CheckResult("replay", False, f"{type(e).__name__}: {e}"))
    else:
        same = again.subgroup == H and again.trace == cert.trace
        checks.append(CheckResult("replay", same))
    report = VerificationReport(tuple(checks))
    if not report.valid:
        logger.info(f"Certificate rejected at check {report.failed}")
    return report


# --------------------------------------------------------------------------
# Brute-force constants
# --------------------------------------------------------------------------


def min_nilpotent_index(G: FiniteGroup, c: int) -> int:
    """Least index of a class <= c subgroup, searching subgroups from the largest order down."""
    if c < 0:
        raise InvalidParameter("class bound must be non-negative")
    cls = nilpotency_class(G)
    if cls is not None and cls <= c:
        return 1
    if c == 0:
        return G.order
    if c == 1:
        return G.order // maximal_order_abelian_subgroups(G)[0].order
    for H in reversed(all_subgroups(G)):
        k = nilpotency_class(H)
        if k is not None and k <= c:
            return G.order // H.order
    return G.order


def jordan_abelian_bound(G: FiniteGroup) -> int:
    """Least index of an abelian subgroup."""
    return min_nilpotent_index(G, 1)
