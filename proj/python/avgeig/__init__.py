"""Averaged eigenvectors of elementwise-subsampled matrices."""

from ._core import (
    AllDrawsFailed,
    DomainError,
    Error,
    InfeasibleSupports,
    InvalidArgument,
    InvalidVn,
    LengthMismatch,
    NoConvergence,
    OutsidePerturbativeRegime,
    ParseError,
    ShapeMismatch,
    ZeroVariance,
    am07_bound,
    blowup,
    bollobas_lower_bound,
    draw_sample,
    estimate,
    expand,
    incoherence_bound,
    mu,
    pagerank,
    spearman_rho,
    spectral_norm,
    synth_symmetric,
    t_diagonal,
    threshold_k,
    top_k_eigen,
)

__all__ = [name for name in dir() if not name.startswith("_")]
