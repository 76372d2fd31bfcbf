"""
Configuration for niljordan

Environment-based caps and budgets for enumeration and search. A YAML file
may override any of them (see ``load_overrides``).
"""

import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from .errors import MalformedInput


class NilJordanConfig:
    """Configuration for niljordan computations."""

    # Enumeration
    MAX_ORDER: int = int(os.getenv("NILJORDAN_MAX_ORDER", "100000"))
    TABLE_CAP: int = int(os.getenv("NILJORDAN_TABLE_CAP", "4096"))

    # Searches over subgroups and generating sets
    SEARCH_CAP: int = int(os.getenv("NILJORDAN_SEARCH_CAP", "2000"))
    AUTOMORPHISM_CAP: int = int(os.getenv("NILJORDAN_AUTOMORPHISM_CAP", "512"))
    CENSUS_BUDGET: int = int(os.getenv("NILJORDAN_CENSUS_BUDGET", "200000"))

    # Commutator tuple checks
    TUPLE_BUDGET: int = int(os.getenv("NILJORDAN_TUPLE_BUDGET", str(10**7)))
    SAMPLE_TUPLES: int = int(os.getenv("NILJORDAN_SAMPLE_TUPLES", str(10**5)))
    SEED: int = int(os.getenv("NILJORDAN_SEED", "0"))

    LOG_LEVEL: str = os.getenv("NILJORDAN_LOG_LEVEL", "WARNING")

    @classmethod
    def get_caps(cls) -> Dict[str, int]:
        """Get all caps and budgets keyed by their YAML / group-file names."""
        return {
            "max_order": cls.MAX_ORDER,
            "table_cap": cls.TABLE_CAP,
            "search_cap": cls.SEARCH_CAP,
            "automorphism_cap": cls.AUTOMORPHISM_CAP,
            "census_budget": cls.CENSUS_BUDGET,
            "tuple_budget": cls.TUPLE_BUDGET,
            "sample_tuples": cls.SAMPLE_TUPLES,
            "seed": cls.SEED,
        }

    @classmethod
    def load_overrides(cls, path: Optional[Path]) -> Dict[str, int]:
        """
        Read cap overrides from a YAML file.

        Args:
            path: YAML file with a flat mapping of cap names to integers

        Returns:
            Mapping of the overridden caps only
        """
        if path is None:
            return {}
        try:
            data: Any = yaml.safe_load(Path(path).read_text())
        except (OSError, yaml.YAMLError) as e:
            raise MalformedInput(f"Cannot read config file {path}: {e}") from e
        if data is None:
            return {}
        if not isinstance(data, dict):
            raise MalformedInput(f"Config file {path} must contain a mapping")

        known = cls.get_caps()
        overrides = {}
        for key, value in data.items():
            if key not in known:
                raise MalformedInput(f"Unknown config key: {key}")
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise MalformedInput(f"Config key {key} must be a non-negative integer")
            overrides[key] = value
        return overrides


@dataclass(frozen=True)
class Caps:
    """Budgets attached to an enumerated group and inherited by everything derived from it."""

    max_order: int = NilJordanConfig.MAX_ORDER
    table_cap: int = NilJordanConfig.TABLE_CAP
    search_cap: int = NilJordanConfig.SEARCH_CAP
    automorphism_cap: int = NilJordanConfig.AUTOMORPHISM_CAP
    census_budget: int = NilJordanConfig.CENSUS_BUDGET
    tuple_budget: int = NilJordanConfig.TUPLE_BUDGET
    sample_tuples: int = NilJordanConfig.SAMPLE_TUPLES
    seed: int = NilJordanConfig.SEED

    @classmethod
    def default(cls) -> "Caps":
        return cls(**NilJordanConfig.get_caps())

    def merged(self, overrides: Optional[Dict[str, int]]) -> "Caps":
        if not overrides:
            return self
        unknown = set(overrides) - set(NilJordanConfig.get_caps())
        if unknown:
            raise MalformedInput(f"Unknown cap(s): {', '.join(sorted(unknown))}")
        return replace(self, **overrides)
