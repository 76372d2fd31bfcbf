#!/usr/bin/env python3
"""
niljordan CLI - analyze groups, extract nilpotent subgroups and verify certificates
"""

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

from pydantic import ValidationError

from .config import Caps, NilJordanConfig
from .errors import InvalidParameter, MalformedInput, NilJordanError, VerificationFailed
from .fileformat import (
    certificate_from_model,
    dumps,
    group_from_file,
    read_certificate,
    read_group_file,
)
from .jordan import MODES, extract, subgroup_census, verify_certificate
from .report import (
    ReportRenderer,
    analysis_report,
    census_report,
    certificate_report,
    group_report,
    verification_report,
)
from .witness import FamilySpec, build

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class NilJordanCLI:
    """Main CLI class for niljordan"""

    def __init__(
        self,
        output_format: str = "json",
        caps: Optional[Caps] = None,
        overrides: Optional[Dict[str, int]] = None,
        stdout: Optional[TextIO] = None,
    ):
        self.output_format = output_format
        self.caps = caps or Caps.default()
        self.overrides = overrides or {}
        self.stdout = stdout or sys.stdout
        self.renderer = ReportRenderer()

    def emit(self, kind: str, data: Any) -> None:
        """Write one report to stdout as JSON or rendered text"""
        if self.output_format == "text":
            self.stdout.write(self.renderer.render(kind, data))
        else:
            self.stdout.write(dumps(data))

    def load_group(self, path: Path):
        model = read_group_file(path)
        return group_from_file(model, self.caps, self.overrides, name=Path(path).stem)

    def analyze(self, paths: List[Path], jobs: int = 1) -> int:
        """Series, class, Sylow verdict and generator count for each file"""

        def one(path: Path) -> Dict[str, Any]:
            G = self.load_group(path)
            return analysis_report(G, name=Path(path).stem)

        if jobs > 1 and len(paths) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                reports = list(pool.map(one, paths))
        else:
            reports = [one(p) for p in paths]
        self.emit("analysis", reports[0] if len(reports) == 1 else reports)
        return 0

    def extract(self, path: Path, mode: str, class_bound: int) -> int:
        """Run one extraction pipeline and print its certificate"""
        G = self.load_group(path)
        cert = extract(G, mode, class_bound)
        self.emit("certificate", certificate_report(cert))
        return 0

    def census(self, path: Path, index: int) -> int:
        """Index-J subgroups by both census methods"""
        G = self.load_group(path)
        self.emit("census", census_report(subgroup_census(G, index)))
        return 0

    def witness(self, spec: FamilySpec) -> int:
        """Print the group file of a family member"""
        G = build(spec, self.caps.merged(self.overrides))
        self.emit("group", group_report(G))
        return 0

    def verify(self, cert_path: Path, group_path: Path) -> int:
        """Re-check a certificate; a rejected certificate exits like a failed verification"""
        G = self.load_group(group_path)
        cert = certificate_from_model(read_certificate(cert_path), G)
        report = verify_certificate(cert, G)
        self.emit("verification", verification_report(report))
        return 0 if report.valid else VerificationFailed.exit_code

    def fail(self, error: NilJordanError) -> int:
        logger.error(f"{type(error).__name__}: {error}")
        self.emit("error", {"error": type(error).__name__, "message": str(error)})
        return error.exit_code


def _family_spec(args: argparse.Namespace) -> FamilySpec:
    if args.spec:
        try:
            return FamilySpec.model_validate(json.loads(Path(args.spec).read_text()))
        except (OSError, json.JSONDecodeError, ValidationError) as e:
            raise MalformedInput(f"Invalid family spec {args.spec}: {e}") from e
    if not args.family:
        raise InvalidParameter("witness needs a family name or --spec")
    try:
        return FamilySpec(family=args.family, p=args.p, n=args.n, index=args.index)
    except ValidationError as e:
        raise InvalidParameter(f"unknown family {args.family}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="niljordan",
        description="niljordan - bounded-index nilpotent subgroups of finite groups",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exit codes:
  0 success, 2 malformed input, 3 cap exceeded,
  4 hypothesis violated, 5 verification failed

Examples:
  niljordan analyze heisenberg5.json
  niljordan census e2_3.json --index 2
  niljordan extract semilinear8.json --mode groupmain --class-bound 1
  niljordan witness heisenberg --p 5 > heisenberg5.json
  niljordan verify cert.json semilinear8.json
""",
    )
    parser.add_argument("--format", choices=["json", "text"], default="json", help="Report format")
    parser.add_argument("--max-order", type=int, help="Enumeration cap (overrides config and group files)")
    parser.add_argument("--seed", type=int, help="Seed for sampled commutator checks")
    parser.add_argument("--config", type=Path, help="YAML file with cap overrides")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="Log progress (twice for debug)")

    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="Central series, class and Sylow verdict")
    analyze.add_argument("files", nargs="+", type=Path)
    analyze.add_argument("--jobs", type=int, default=1, help="Analyze files in parallel")

    ext = sub.add_parser("extract", help="Emit an extraction certificate")
    ext.add_argument("file", type=Path)
    ext.add_argument("--mode", choices=MODES, required=True)
    ext.add_argument("--class-bound", type=int, default=1)

    census = sub.add_parser("census", help="Subgroups of a given index")
    census.add_argument("file", type=Path)
    census.add_argument("--index", type=int, required=True)

    witness = sub.add_parser("witness", help="Emit the group file of a family member")
    witness.add_argument("family", nargs="?")
    witness.add_argument("--p", type=int)
    witness.add_argument("--n", type=int)
    witness.add_argument("--index", type=int)
    witness.add_argument("--spec", type=Path, help="FamilySpec JSON (needed for direct_product)")

    verify = sub.add_parser("verify", help="Re-check a certificate against a group file")
    verify.add_argument("certificate", type=Path)
    verify.add_argument("file", type=Path)
    return parser


def _configure_logging(verbose: int) -> None:
    level = NilJordanConfig.LOG_LEVEL.upper()
    if verbose == 1:
        level = "INFO"
    elif verbose >= 2:
        level = "DEBUG"
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def main(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """Main entry point for the CLI"""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)

    cli = NilJordanCLI(output_format=args.format, stdout=stdout)
    try:
        cli.caps = Caps.default().merged(NilJordanConfig.load_overrides(args.config))
        if args.max_order is not None:
            cli.overrides["max_order"] = args.max_order
        if args.seed is not None:
            cli.overrides["seed"] = args.seed

        if args.command == "analyze":
            return cli.analyze(args.files, jobs=max(1, args.jobs))
        elif args.command == "extract":
            return cli.extract(args.file, args.mode, args.class_bound)
        elif args.command == "census":
            return cli.census(args.file, args.index)
        elif args.command == "witness":
            return cli.witness(_family_spec(args))
        else:
            return cli.verify(args.certificate, args.file)
    except NilJordanError as e:
        return cli.fail(e)


if __name__ == "__main__":
    sys.exit(main())
