"""Exact degree of caustics by reflection of plane algebraic curves."""

from __future__ import annotations

from .caustic import (
    CausticMap,
    CausticReport,
    base_points,
    build_phi,
    mdeg_routes,
    reflected_line,
    verify_key_identity,
)
from .invariants import profile
from .oracle import mdeg_oracle, phi_polar
from .parsing import parse_point, parse_poly

__all__ = [
    "CausticMap",
    "CausticReport",
    "base_points",
    "build_phi",
    "mdeg_oracle",
    "mdeg_routes",
    "parse_point",
    "parse_poly",
    "phi_polar",
    "profile",
    "reflected_line",
    "verify_key_identity",
]

__version__ = "0.1.0"
