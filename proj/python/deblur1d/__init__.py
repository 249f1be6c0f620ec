"""Edge-preserving Bayesian deconvolution of periodic 1-D signals."""

from deblur1d._core import (
    MomentEstimate,
    estimate,
    exp_moments,
    forward_matrix,
    log_posterior,
    sample_prior,
    synthesize,
)

__all__ = [
    "MomentEstimate",
    "estimate",
    "exp_moments",
    "forward_matrix",
    "log_posterior",
    "sample_prior",
    "synthesize",
]
