"""Compressed sensing toolkit for multichannel signal frames.

Compression multiplies a frame by a sparse binary measurement matrix (two
ones per column); recovery runs spatiotemporal sparse Bayesian learning
(STSBL-EM), an expectation-maximization loop that learns intra-block
temporal correlation and inter-channel spatial correlation jointly, with an
optional orthonormal DCT dictionary for signals that are only compressible
in a transform domain.
"""

from .metrics import (
    BenchRecord,
    bench_channels,
    nmse,
    peak_prominence_db,
    pearson,
    periodogram,
)
from .model import (
    BlockPartition,
    Hyperparameters,
    MultichannelFrame,
    assemble_pi,
    prior_covariance,
    uniform_partition,
)
from .sensing import (
    CompressedFrame,
    Dictionary,
    SparseBinaryMatrix,
    compress,
    compression_ratio,
    make_dct_dictionary,
    make_measurement_matrix,
)
from .solver import (
    FrameOutcome,
    RecoveryConfig,
    RecoveryResult,
    recover,
    recover_stream,
)
from .spatial import (
    Posterior,
    map_estimate,
    posterior,
    spatial_whiten,
    sym_inv_sqrt,
    sym_sqrt,
    update_a_raw,
    update_gamma,
    update_lambda,
    update_lambda_low_snr,
)
from .synth import (
    SynthSpec,
    brute_force_posterior,
    gen_ar1_toeplitz,
    gen_block_sparse,
    gen_ssvep_like,
    sigma_information_form,
    uniform_inter_channel,
)
from .temporal import ArCoefficient, regularize_a, update_b

__version__ = "0.1.0"

__all__ = [
    "ArCoefficient",
    "BenchRecord",
    "BlockPartition",
    "CompressedFrame",
    "Dictionary",
    "FrameOutcome",
    "Hyperparameters",
    "MultichannelFrame",
    "Posterior",
    "RecoveryConfig",
    "RecoveryResult",
    "SparseBinaryMatrix",
    "SynthSpec",
    "assemble_pi",
    "bench_channels",
    "brute_force_posterior",
    "compress",
    "compression_ratio",
    "gen_ar1_toeplitz",
    "gen_block_sparse",
    "gen_ssvep_like",
    "make_dct_dictionary",
    "make_measurement_matrix",
    "map_estimate",
    "nmse",
    "peak_prominence_db",
    "pearson",
    "periodogram",
    "posterior",
    "prior_covariance",
    "recover",
    "recover_stream",
    "regularize_a",
    "sigma_information_form",
    "spatial_whiten",
    "sym_inv_sqrt",
    "sym_sqrt",
    "uniform_inter_channel",
    "uniform_partition",
    "update_a_raw",
    "update_b",
    "update_gamma",
    "update_lambda",
    "update_lambda_low_snr",
]
