"""Functional Liu-type shrinkage for scalar-on-function regression."""

from ._fliu import (
    Design,
    Error,
    degeneracy_check,
    design_from_curves,
    fit,
    gcv,
    load_dataset,
    mse_coefficients,
    plug_in_d,
    press,
    smoother_matrix,
    split_indices,
    tune,
)

__all__ = [
    "Design",
    "Error",
    "degeneracy_check",
    "design_from_curves",
    "fit",
    "gcv",
    "load_dataset",
    "mse_coefficients",
    "plug_in_d",
    "press",
    "smoother_matrix",
    "split_indices",
    "tune",
]
