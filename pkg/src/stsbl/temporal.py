"""Learning in the temporally whitened model.

Left-multiplying each block by A_i^(-1/2) removes within-block correlation,
which makes the inter-channel correlation B estimable from a simple sum of
per-block outer products.  The raw A_i estimates are regularized onto a
shared AR(1) family: far more parameters are being learned than there are
data, and tying all blocks to one AR coefficient is what keeps the estimates
usable.
"""

from dataclasses import dataclass

import numpy as np

GAMMA_SKIP = 1e-12
AR_CLIP = 0.99


@dataclass(frozen=True)
class ArCoefficient:
    """Shared AR(1) coefficient; magnitude capped at 0.99."""

    r: float

    def __post_init__(self):
        if abs(self.r) > AR_CLIP:
            raise ValueError(f"AR coefficient magnitude must not exceed {AR_CLIP}")


def ar1_toeplitz(d, r):
    """Toeplitz matrix with entry (j, k) = r^|j - k| (un-normalized)."""
    idx = np.arange(d)
    return float(r) ** np.abs(idx[:, None] - idx[None, :]).astype(float)


def update_b(x, a_blocks, gamma, partition, y, phi, lam, noiseless, eta):
    """Update the inter-channel correlation matrix, Frobenius-normalized.

    B_hat = sum_i X_[i]^T A_i^{-1} X_[i] / gamma_i over blocks with
    gamma_i above the skip threshold, plus (Y - Phi X)^T (Y - Phi X) / lambda
    in noisy mode, plus eta * I when eta > 0.  The result is normalized to
    unit Frobenius norm; the scale lives in gamma.
    """
    x = np.asarray(x, float)
    l = x.shape[1]
    b_hat = np.zeros((l, l))
    for i, sl in enumerate(partition.slices()):
        if gamma[i] <= GAMMA_SKIP:
            continue
        xi = x[sl]
        b_hat += xi.T @ np.linalg.solve(np.asarray(a_blocks[i], float), xi) / gamma[i]
    if not noiseless:
        resid = np.asarray(y, float) - np.asarray(phi, float) @ x
        b_hat += resid.T @ resid / lam
    if eta > 0:
        b_hat += eta * np.eye(l)
    norm = np.linalg.norm(b_hat)
    if norm == 0.0:
        raise ValueError(
            "inter-channel update is the zero matrix (every block skipped or "
            "zero estimate) and cannot be normalized; a positive eta avoids this"
        )
    b = b_hat / norm
    return 0.5 * (b + b.T)


def regularize_a(a_raw):
    """Project raw intra-block correlation estimates onto a shared AR(1) family.

    Each block of size > 1 contributes the ratio of its first sub-diagonal
    mean to its main diagonal mean, clipped to magnitude 0.99; size-1 and
    degenerate (zero-diagonal) blocks contribute 0.  The per-block ratios
    are averaged into one coefficient r, and every block is rebuilt as the
    AR(1) Toeplitz matrix of r, divided by its Frobenius norm.
    """
    ratios = []
    sizes = []
    for a in a_raw:
        a = np.asarray(a, float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("raw correlation blocks must be square")
        d = a.shape[0]
        sizes.append(d)
        if d == 1:
            ratios.append(0.0)
            continue
        m0 = float(np.mean(np.diagonal(a)))
        m1 = float(np.mean(np.diagonal(a, -1)))
        if m0 == 0.0:
            ratios.append(0.0)
            continue
        q = m1 / m0
        ratios.append(float(np.sign(q)) * min(abs(q), AR_CLIP))
    if not ratios:
        raise ValueError("need at least one block")
    r = float(np.mean(ratios))
    blocks = []
    for d in sizes:
        t = ar1_toeplitz(d, r)
        blocks.append(t / np.linalg.norm(t))
    return ArCoefficient(r=r), blocks
