"""Drazin inverses, chain structure and banded operator checks."""

from ._core import (
    DrazinResult,
    Error,
    InputError,
    IoError,
    PreconditionError,
    ShapeError,
    SpectralSplitError,
    bf_index,
    chain_report,
    check_left_drazin,
    check_right_drazin,
    drazin_index,
    drazin_inverse,
    drazin_oracle,
    generate_corpus,
    perturb_expand,
    run_suite,
    shift_bundle,
    spectral_projector,
    strip_timing,
    suite_names,
)

__all__ = [
    "DrazinResult",
    "Error",
    "InputError",
    "IoError",
    "PreconditionError",
    "ShapeError",
    "SpectralSplitError",
    "bf_index",
    "chain_report",
    "check_left_drazin",
    "check_right_drazin",
    "drazin_index",
    "drazin_inverse",
    "drazin_oracle",
    "generate_corpus",
    "perturb_expand",
    "run_suite",
    "shift_bundle",
    "spectral_projector",
    "strip_timing",
    "suite_names",
]
