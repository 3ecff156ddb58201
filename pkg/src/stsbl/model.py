"""Value types for the spatiotemporal Gaussian model and its structured covariances.

A coefficient matrix X (M rows, L channels) is split into g contiguous row
blocks of sizes d_1..d_g.  Block i is zero-mean Gaussian with covariance
(gamma_i * A_i) kron B under the vectorization vec(X^T), i.e. the channel
index varies fastest.  A_i captures correlation along the rows of a block
(time, within one channel), B captures correlation across channels, and
gamma_i is a nonnegative scale that switches the block on or off.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BlockPartition:
    """Contiguous split of M coefficient rows into g blocks."""

    sizes: tuple

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError("block sizes must be positive integers")
        object.__setattr__(self, "sizes", sizes)

    @property
    def g(self):
        return len(self.sizes)

    @property
    def m(self):
        return sum(self.sizes)

    def slices(self):
        """Row slice of each block, in block order."""
        out, start = [], 0
        for d in self.sizes:
            out.append(slice(start, start + d))
            start += d
        return out


def uniform_partition(m, block_size=16):
    """Blocks of ``block_size`` rows; a remainder, if any, forms a short last block."""
    if m < 1:
        raise ValueError("m must be positive")
    if block_size < 1:
        raise ValueError("block_size must be positive")
    full, rem = divmod(m, block_size)
    sizes = (block_size,) * full + ((rem,) if rem else ())
    return BlockPartition(sizes)


@dataclass
class Hyperparameters:
    """Learned model state: block scales, correlation matrices, noise level.

    After regularization every ``a_blocks[i]`` and ``b`` is symmetric positive
    definite with unit Frobenius norm; ``gamma`` and ``lam`` are nonnegative.
    """

    gamma: np.ndarray
    a_blocks: list
    b: np.ndarray
    lam: float

    def to_dict(self):
        return {
            "gamma": np.asarray(self.gamma, float).tolist(),
            "a_blocks": [np.asarray(a, float).tolist() for a in self.a_blocks],
            "b": np.asarray(self.b, float).tolist(),
            "lambda": float(self.lam),
        }

    @classmethod
    def from_dict(cls, doc):
        return cls(
            gamma=np.asarray(doc["gamma"], float),
            a_blocks=[np.asarray(a, float) for a in doc["a_blocks"]],
            b=np.asarray(doc["b"], float),
            lam=float(doc["lambda"]),
        )


@dataclass(frozen=True)
class MultichannelFrame:
    """One windowed segment per channel: real matrix with M rows, L channels."""

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, float)
        if data.ndim != 2:
            raise ValueError("frame data must be a 2-D matrix [samples x channels]")
        if not np.all(np.isfinite(data)):
            raise ValueError("frame data must be finite")
        object.__setattr__(self, "data", data)

    @property
    def channels(self):
        return self.data.shape[1]

    @property
    def samples(self):
        return self.data.shape[0]


def assemble_pi(gamma, a_blocks):
    """Block-diagonal prior covariance with i-th diagonal block gamma_i * A_i.

    Off-block entries are exactly zero, so zero-scale blocks produce exact
    zeros downstream instead of small numerical residue.
    """
    gamma = np.asarray(gamma, float)
    if gamma.ndim != 1 or gamma.size != len(a_blocks):
        raise ValueError("need exactly one scale per correlation block")
    sizes = []
    for a in a_blocks:
        a = np.asarray(a)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("correlation blocks must be square matrices")
        sizes.append(a.shape[0])
    m = sum(sizes)
    pi = np.zeros((m, m))
    start = 0
    for gi, a in zip(gamma, a_blocks):
        d = np.asarray(a).shape[0]
        pi[start : start + d, start : start + d] = gi * np.asarray(a, float)
        start += d
    return pi


def prior_covariance(pi, b):
    """Dense joint covariance kron(pi, b) of the vectorized coefficient matrix.

    Guarded to small instances; meant for brute-force verification only.
    """
    pi = np.asarray(pi, float)
    b = np.asarray(b, float)
    if pi.ndim != 2 or pi.shape[0] != pi.shape[1]:
        raise ValueError("pi must be square")
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("b must be square")
    if pi.shape[0] * b.shape[0] > 64:
        raise ValueError("dense prior covariance is limited to M*L <= 64")
    return np.kron(pi, b)
