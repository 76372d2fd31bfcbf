"""
JSON group files and certificates

A group file names the element kind in its header, lists generators in that
kind's text syntax and may override caps. Certificates store their subgroup
by generators in the same syntax, so they can be checked against a freshly
enumerated copy of the group.
"""

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, ValidationError
from pydantic.alias_generators import to_camel

from .config import Caps
from .cyclo import FieldAut, format_cyclotomic, parse_cyclotomic, parse_scalar
from .errors import MalformedInput, ParseError, Singular
from .groupcore import (
    FiniteGroup,
    GroupElement,
    HeisenbergElement,
    PermutationElement,
    TupleElement,
    enumerate_group,
)
from .jordan import MODES, ExtractionCertificate, TraceStep
from .matgrp import ExactMatrix, MatrixElement, SemilinearElement

logger = logging.getLogger(__name__)

Kind = Literal["permutation", "matrix", "semilinear", "heisenberg", "product"]


class GroupHeader(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Kind
    degree: Optional[int] = None
    n: Optional[int] = None
    conductor: Optional[int] = None
    transcendental: bool = False
    p: Optional[int] = None
    factors: Optional[List["GroupHeader"]] = None


GroupHeader.model_rebuild()


class SemilinearGenerator(BaseModel):
    """Matrix rows plus the field automorphism z -> z^galois, t -> (a t + b)/(c t + d)."""

    model_config = ConfigDict(extra="forbid")

    matrix: List[List[str]]
    galois: int = 1
    mobius: Optional[List[str]] = None


RawElement = Union[str, SemilinearGenerator, List[Any]]


class CapsBlock(BaseModel):
    model_config = ConfigDict(extra="forbid")

    max_order: Optional[int] = None
    table_cap: Optional[int] = None
    search_cap: Optional[int] = None
    automorphism_cap: Optional[int] = None
    census_budget: Optional[int] = None
    tuple_budget: Optional[int] = None
    sample_tuples: Optional[int] = None
    seed: Optional[int] = None

    def overrides(self) -> Dict[str, int]:
        return self.model_dump(exclude_none=True)


class GroupFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    header: GroupHeader
    generators: List[RawElement]
    caps: Optional[CapsBlock] = None


class TraceStepModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    order: int
    index: int
    detail: str = ""


class CertificateModel(BaseModel):
    """Certificate JSON; field names are camelCase on disk."""

    model_config = ConfigDict(extra="forbid", alias_generator=to_camel, populate_by_name=True)

    mode: Literal["dn", "jor", "groupmain", "groupmain-nogen"]
    inputs: Dict[str, int]
    group_order: int
    subgroup_order: int
    subgroup_generators: List[RawElement]
    claimed_class_bound: int
    verified_class: int
    index: int
    bound_value: int
    trace: List[TraceStepModel]
    input_generators: List[RawElement] = []
    characteristic: Optional[str] = None
    hypothesis_m: Optional[int] = None


# --------------------------------------------------------------------------
# Element codec
# --------------------------------------------------------------------------


_TRIPLE = re.compile(r"^\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$")


def _need(value: Optional[int], name: str, kind: str) -> int:
    if value is None or value < 1:
        raise MalformedInput(f"{kind} header needs a positive {name}")
    return value


def _matrix(rows: Any, header: GroupHeader) -> ExactMatrix:
    n = _need(header.n, "n", header.kind)
    m = _need(header.conductor, "conductor", header.kind)
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise MalformedInput(f"expected a {n}x{n} matrix, got {rows!r}")
    matrix = ExactMatrix.from_rows(
        [[parse_scalar(x, m, header.transcendental) for x in r] for r in rows], m, header.transcendental
    )
    if matrix.det().is_zero():
        raise Singular(f"generator {rows!r} is not invertible")
    return matrix


def parse_element(raw: RawElement, header: GroupHeader) -> GroupElement:
    kind = header.kind
    if kind == "permutation":
        if not isinstance(raw, str):
            raise MalformedInput(f"permutation generators are cycle strings, got {raw!r}")
        return PermutationElement.parse(raw, _need(header.degree, "degree", kind))
    if kind == "heisenberg":
        match = _TRIPLE.match(raw) if isinstance(raw, str) else None
        if match is None:
            raise ParseError(f"expected a triple (a,b,c), got {raw!r}")
        return HeisenbergElement(*(int(x) for x in match.groups()), _need(header.p, "p", kind))
    if kind == "matrix":
        if not isinstance(raw, list):
            raise MalformedInput(f"matrix generators are lists of rows, got {raw!r}")
        return MatrixElement(_matrix(raw, header))
    if kind == "semilinear":
        if isinstance(raw, dict):
            raw = SemilinearGenerator.model_validate(raw)
        if not isinstance(raw, SemilinearGenerator):
            raise MalformedInput(f"semilinear generators are objects, got {raw!r}")
        m = _need(header.conductor, "conductor", kind)
        mobius = [parse_cyclotomic(x, m) for x in raw.mobius] if raw.mobius is not None else None
        if mobius is not None and len(mobius) != 4:
            raise MalformedInput("mobius needs four entries a, b, c, d")
        aut = FieldAut.create(m, raw.galois, mobius, header.transcendental)
        return SemilinearElement(_matrix(raw.matrix, header), aut)
    if kind == "product":
        factors = header.factors or []
        if not factors or not isinstance(raw, list) or len(raw) != len(factors):
            raise MalformedInput(f"product generators need one component per factor, got {raw!r}")
        return TupleElement([parse_element(x, h) for x, h in zip(raw, factors)])
    raise MalformedInput(f"unknown element kind {kind}")


def format_element(element: GroupElement) -> Any:
    if isinstance(element, PermutationElement):
        return str(element)
    if isinstance(element, HeisenbergElement):
        return f"({element.a},{element.b},{element.c})"
    if isinstance(element, MatrixElement):
        return element.matrix.to_strings()
    if isinstance(element, SemilinearElement):
        aut = element.aut
        identity = FieldAut.identity(aut.conductor, aut.function_field)
        out: Dict[str, Any] = {"matrix": element.matrix.to_strings(), "galois": aut.galois}
        if aut.mobius != identity.mobius:
            out["mobius"] = [format_cyclotomic(x) for x in aut.mobius]
        return out
    if isinstance(element, TupleElement):
        return [format_element(x) for x in element.components]
    raise MalformedInput(f"no file syntax for {type(element).__name__}")


def header_for(element: GroupElement) -> GroupHeader:
    if isinstance(element, PermutationElement):
        return GroupHeader(kind="permutation", degree=element.degree)
    if isinstance(element, HeisenbergElement):
        return GroupHeader(kind="heisenberg", p=element.p)
    if isinstance(element, (MatrixElement, SemilinearElement)):
        mat = element.matrix
        kind = "matrix" if isinstance(element, MatrixElement) else "semilinear"
        return GroupHeader(kind=kind, n=mat.n, conductor=mat.conductor, transcendental=mat.transcendental)
    if isinstance(element, TupleElement):
        return GroupHeader(kind="product", factors=[header_for(x) for x in element.components])
    raise MalformedInput(f"no file syntax for {type(element).__name__}")


# --------------------------------------------------------------------------
# Files
# --------------------------------------------------------------------------


def dumps(data: Any) -> str:
    """Stable JSON text: insertion-ordered keys, two-space indent, trailing newline."""
    return json.dumps(data, indent=2) + "\n"


def _read_json(path: Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise MalformedInput(f"Cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise MalformedInput(f"{path} is not valid JSON: {e}") from e


def read_group_file(path: Path) -> GroupFile:
    try:
        return GroupFile.model_validate(_read_json(path))
    except ValidationError as e:
        raise MalformedInput(f"Invalid group file {path}: {e}") from e


def group_from_file(
    model: GroupFile,
    caps: Optional[Caps] = None,
    overrides: Optional[Dict[str, int]] = None,
    name: str = "",
) -> FiniteGroup:
    """Enumerate a group file; caps precedence is caps < file caps block < overrides."""
    caps = (caps or Caps.default()).merged(model.caps.overrides() if model.caps else None).merged(overrides)
    if not model.generators:
        raise MalformedInput("a group file needs at least one generator")
    gens = [parse_element(raw, model.header) for raw in model.generators]
    G = enumerate_group(gens, caps=caps, name=name)
    logger.info(f"Enumerated {model.header.kind} group of order {G.order}")
    return G


def group_file_for(G: FiniteGroup) -> GroupFile:
    gens = G.generator_elements()
    return GroupFile(header=header_for(gens[0]), generators=[format_element(g) for g in gens])


def group_file_json(G: FiniteGroup) -> str:
    return dumps(group_file_for(G).model_dump(exclude_none=True, mode="json"))


# --------------------------------------------------------------------------
# Certificates
# --------------------------------------------------------------------------


def certificate_to_model(cert: ExtractionCertificate) -> CertificateModel:
    H = cert.subgroup
    amb = H.ambient
    return CertificateModel(
        mode=cert.mode,
        inputs=dict(cert.inputs),
        group_order=cert.group_order,
        subgroup_order=H.order,
        subgroup_generators=[format_element(g) for g in H.generator_elements()],
        claimed_class_bound=cert.claimed_class_bound,
        verified_class=cert.verified_class,
        index=cert.index,
        bound_value=cert.bound_value,
        trace=[TraceStepModel(name=s.name, order=s.order, index=s.index, detail=s.detail) for s in cert.trace],
        input_generators=[format_element(amb.elements[g]) for g in cert.input_generators],
        characteristic=cert.characteristic,
        hypothesis_m=cert.hypothesis_m,
    )


def certificate_json(cert: ExtractionCertificate) -> str:
    model = certificate_to_model(cert)
    return dumps(model.model_dump(by_alias=True, exclude_none=True, mode="json"))


def _locate_all(raws: List[RawElement], G: FiniteGroup) -> Tuple[int, ...]:
    header = header_for(G.element(G.identity))
    return tuple(G.index_of(parse_element(raw, header)) for raw in raws)


def certificate_from_model(model: CertificateModel, G: FiniteGroup) -> ExtractionCertificate:
    """Rebuild a certificate inside G; its subgroup is the span of the listed generators."""
    if model.mode not in MODES:
        raise MalformedInput(f"unknown certificate mode {model.mode}")
    gens = _locate_all(model.subgroup_generators, G)
    return ExtractionCertificate(
        mode=model.mode,
        inputs=dict(model.inputs),
        group_order=model.group_order,
        subgroup=G.subgroup(gens),
        claimed_class_bound=model.claimed_class_bound,
        verified_class=model.verified_class,
        index=model.index,
        bound_value=model.bound_value,
        trace=tuple(TraceStep(s.name, s.order, s.index, s.detail) for s in model.trace),
        input_generators=_locate_all(model.input_generators, G),
        characteristic=model.characteristic,
        hypothesis_m=model.hypothesis_m,
    )


def read_certificate(path: Path) -> CertificateModel:
    try:
        return CertificateModel.model_validate(_read_json(path))
    except ValidationError as e:
        raise MalformedInput(f"Invalid certificate {path}: {e}") from e
