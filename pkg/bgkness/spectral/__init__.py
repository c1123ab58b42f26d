"""Linearized operator in an orthonormal velocity basis: mode blocks, gaps and explicit rates."""
from __future__ import annotations

from .basis import SpectralBasis, build_basis, c_alpha
from .blocks import (
    CoercivityReport,
    Convention,
    ModeBlock,
    assemble_mode_block,
    coercivity_check,
    coercivity_corpus,
    collision_apply,
    collision_matrix,
    collision_norm,
    gain_column,
    mco_roots,
    quadratic_form_gap,
    streaming_matrix,
)
from .dms import (
    DmsConstants,
    auxiliary_apply,
    auxiliary_streaming_apply,
    dms_constants,
    dms_scheme,
    streaming_auxiliary_apply,
)
from .rates import ExplicitRate, GapResult, explicit_rate, gap_table, numeric_gap

__all__ = [
    "assemble_mode_block",
    "auxiliary_apply",
    "auxiliary_streaming_apply",
    "build_basis",
    "c_alpha",
    "coercivity_check",
    "coercivity_corpus",
    "CoercivityReport",
    "collision_apply",
    "collision_matrix",
    "collision_norm",
    "Convention",
    "dms_constants",
    "dms_scheme",
    "DmsConstants",
    "explicit_rate",
    "ExplicitRate",
    "gain_column",
    "gap_table",
    "GapResult",
    "mco_roots",
    "ModeBlock",
    "numeric_gap",
    "quadratic_form_gap",
    "SpectralBasis",
    "streaming_auxiliary_apply",
    "streaming_matrix",
]
