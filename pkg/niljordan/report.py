"""
Report payloads and their text rendering

Every subcommand builds a plain dict (the JSON report); text output renders
the same dict through a Jinja2 template.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

from jinja2 import Environment, FileSystemLoader

from .fileformat import certificate_to_model, format_element, group_file_for
from .groupcore import FiniteGroup, center, min_generator_count
from .jordan import CensusResult, ExtractionCertificate, VerificationReport
from .nilpo import lower_central_series, sylow_product_check, upper_central_series

logger = logging.getLogger(__name__)


def analysis_report(G: FiniteGroup, name: str = "") -> Dict[str, Any]:
    lower = lower_central_series(G)
    upper = upper_central_series(G)
    sylow = sylow_product_check(G)
    return {
        "name": name or G.name,
        "order": G.order,
        "abelian": G.is_abelian(),
        "centerOrder": center(G).order,
        "lowerCentralSeries": lower.orders,
        "upperCentralSeries": upper.orders,
        "class": lower.nilpotency_class,
        "seriesAgree": lower.nilpotency_class == upper.nilpotency_class,
        "sylow": {
            "primes": list(sylow.primes),
            "orders": list(sylow.orders),
            "directProduct": sylow.holds,
        },
        "minGeneratorCount": min_generator_count(G),
    }


def certificate_report(cert: ExtractionCertificate) -> Dict[str, Any]:
    return certificate_to_model(cert).model_dump(by_alias=True, exclude_none=True, mode="json")


def census_report(result: CensusResult) -> Dict[str, Any]:
    return {
        "index": result.index,
        "count": result.count,
        "rank": result.rank,
        "bound": result.bound,
        "candidates": result.candidates,
        "homomorphisms": result.homomorphisms,
        "transitive": result.transitive,
        "subgroups": [
            {"order": H.order, "generators": [format_element(g) for g in H.generator_elements()]}
            for H in result.subgroups
        ],
    }


def verification_report(report: VerificationReport) -> Dict[str, Any]:
    return {
        "valid": report.valid,
        "failed": report.failed,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in report.checks],
    }


def group_report(G: FiniteGroup) -> Dict[str, Any]:
    return group_file_for(G).model_dump(exclude_none=True, mode="json")


class ReportRenderer:
    """Renders report dicts with the text templates shipped in the package."""

    def __init__(self, templates_dir: Optional[Path] = None):
        self.templates_dir = templates_dir or Path(__file__).parent / "templates"
        self.env = Environment(
            loader=FileSystemLoader(self.templates_dir),
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )

    def render(self, kind: str, data: Any) -> str:
        """
        Render one report

        Args:
            kind: template stem (analysis, certificate, census, verification, group, error)
            data: the report dict, or a list of them
        """
        template = self.env.get_template(f"{kind}.txt.j2")
        return template.render(report=data)
