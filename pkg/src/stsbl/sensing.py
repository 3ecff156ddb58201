"""Measurement matrices, DCT dictionaries, compression, and compression ratios.

The measurement matrix is a sparse binary N x M matrix whose columns each
hold exactly two ones at random row positions.  Compression of a frame is a
single binary matrix product, cheap enough for sensor-side hardware; the
matrix is regenerated until it has full row rank so no measurement is
redundant.
"""

from dataclasses import dataclass

import numpy as np

from .model import MultichannelFrame

_FULL_RANK_RETRIES = 16


@dataclass(frozen=True)
class SparseBinaryMatrix:
    """N x M binary matrix; every column has exactly two ones, rows independent."""

    rows: int
    cols: int
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, float)
        if entries.shape != (self.rows, self.cols):
            raise ValueError("entries shape does not match declared dimensions")
        if not np.all((entries == 0.0) | (entries == 1.0)):
            raise ValueError("entries must be 0 or 1")
        if not np.all(entries.sum(axis=0) == 2.0):
            raise ValueError("every column must contain exactly two ones")
        if np.linalg.matrix_rank(entries) != self.rows:
            raise ValueError("matrix must have full row rank")
        object.__setattr__(self, "entries", entries)


@dataclass(frozen=True)
class Dictionary:
    """Square orthonormal synthesis basis; columns are the basis vectors."""

    size: int
    basis: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis, float)
        if basis.shape != (self.size, self.size):
            raise ValueError("basis shape does not match declared size")
        eye = np.eye(self.size)
        if np.max(np.abs(basis @ basis.T - eye)) > 1e-10:
            raise ValueError("basis is not orthonormal")
        object.__setattr__(self, "basis", basis)


@dataclass(frozen=True)
class CompressedFrame:
    """Compressed measurements [N x L] with the compression ratio attached."""

    data: np.ndarray
    cr: float


def make_measurement_matrix(n, m, seed):
    """Draw a full-row-rank sparse binary matrix, two ones per column.

    The two row positions of each column are drawn uniformly without
    replacement, independently per column.  A rank-deficient draw is
    discarded and the whole matrix redrawn with an incremented seed, up to
    a fixed retry budget.

    Parameters
    ----------
    n, m : int
        Row and column counts, 2 <= n <= m.  Note n = 2 is never feasible
        (both ones always land on the same two rows) and exhausts retries.
    seed : int
        Base seed; attempt k uses seed + k, so results are reproducible.
    """
    if n < 2:
        raise ValueError("n must be at least 2: a column holds two distinct rows")
    if n > m:
        raise ValueError("n must not exceed m")
    for attempt in range(_FULL_RANK_RETRIES):
        rng = np.random.default_rng(seed + attempt)
        entries = np.zeros((n, m))
        for j in range(m):
            pos = rng.choice(n, size=2, replace=False)
            entries[pos, j] = 1.0
        if np.linalg.matrix_rank(entries) == n:
            return SparseBinaryMatrix(rows=n, cols=m, entries=entries)
    raise RuntimeError(
        f"no full-rank draw in {_FULL_RANK_RETRIES} attempts for shape "
        f"({n}, {m}); the shape may be infeasible"
    )


def make_dct_dictionary(m):
    """Orthonormal type-II DCT basis of size m; column k is the k-th basis vector."""
    if m < 1:
        raise ValueError("dictionary size must be positive")
    rows = np.arange(m)[:, None]
    cols = np.arange(m)[None, :]
    basis = np.cos(np.pi * (2 * rows + 1) * cols / (2 * m))
    scale = np.full(m, np.sqrt(2.0 / m))
    scale[0] = np.sqrt(1.0 / m)
    return Dictionary(size=m, basis=basis * scale[None, :])


def compression_ratio(n, m):
    """Percentage of samples removed: (m - n) / m * 100."""
    if n <= 0:
        raise ValueError("n must be positive")
    if n > m:
        raise ValueError("n must not exceed m")
    return (m - n) / m * 100.0


def compress(frame, phi):
    """Compress a frame to phi @ X; the model is treated as noiseless."""
    data = frame.data if isinstance(frame, MultichannelFrame) else np.asarray(frame, float)
    if data.ndim != 2:
        raise ValueError("frame data must be 2-D")
    if phi.cols != data.shape[0]:
        raise ValueError(
            f"matrix has {phi.cols} columns but frame has {data.shape[0]} rows"
        )
    return CompressedFrame(
        data=phi.entries @ data, cr=compression_ratio(phi.rows, phi.cols)
    )
