"""Exact verification of freezing sets and cold sets for digital images."""

from .core import Adjacency, DigitalImage, ImageError, adjacent, box, projection
from .maps import SelfMap, format_map, parse_map
from .verify import (REFUTED, UNKNOWN, VERIFIED, Verdict, cold_defect, find_fixing_map,
                     fixing_tables, is_freezing, is_minimal, is_s_cold)

__version__ = "0.1.0"

__all__ = [
    "Adjacency", "DigitalImage", "ImageError", "adjacent", "box", "projection",
    "SelfMap", "format_map", "parse_map",
    "VERIFIED", "REFUTED", "UNKNOWN", "Verdict", "cold_defect", "find_fixing_map",
    "fixing_tables", "is_freezing", "is_minimal", "is_s_cold",
]
