"""Split rejection sampling between edge and cloud."""

from .batches import DraftBatch, Verdict
from .sampling import (
    accept_test,
    dense_residual_resample,
    inverse_cdf_sample,
    output_distribution,
    residual_resample,
    residual_support,
    sample_dense,
    topk_compress,
    tv_distance,
)
from .verify import (
    cloud_verify,
    draft_tokens,
    reference_decode,
    sample_seed_token,
    vanilla_step_reference,
)

__all__ = [
    "DraftBatch",
    "Verdict",
    "accept_test",
    "dense_residual_resample",
    "inverse_cdf_sample",
    "output_distribution",
    "residual_resample",
    "residual_support",
    "sample_dense",
    "topk_compress",
    "tv_distance",
    "cloud_verify",
    "draft_tokens",
    "reference_decode",
    "sample_seed_token",
    "vanilla_step_reference",
]
