"""Quiver varieties for Kleinian singularities: McKay quivers, preprojective
modules, stability, ADHM monads and invariant-ring descent."""
from __future__ import annotations

from .mckay import GroupSpec, character_table, framed_quiver, mckay_quiver
from .pimodule import ADHMDatum, QuiverModule, adhm_to_quiver, quiver_to_adhm
from .stability import (
    StabilityParameter,
    c_plus_representative,
    concentrate,
    is_semistable,
    is_stable,
    theta_I,
    theta_zero,
)

__version__ = "0.1.0"

__all__ = [
    "ADHMDatum",
    "GroupSpec",
    "QuiverModule",
    "StabilityParameter",
    "adhm_to_quiver",
    "c_plus_representative",
    "character_table",
    "concentrate",
    "framed_quiver",
    "is_semistable",
    "is_stable",
    "mckay_quiver",
    "quiver_to_adhm",
    "theta_I",
    "theta_zero",
]
