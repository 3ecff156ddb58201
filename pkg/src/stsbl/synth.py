"""Synthetic ground truth with spatiotemporal correlation and dense Gaussian oracles.

The generator draws block-sparse frames straight from the model prior so the
solver can be measured against known truth.  The brute-force posterior builds
the full joint Gaussian over the vectorized coefficients and conditions it
densely; it is quadratic-memory and guarded to tiny instances, existing only
to verify the structured implementation.
"""

from dataclasses import dataclass

import numpy as np

from .model import BlockPartition
from .temporal import ar1_toeplitz


@dataclass(frozen=True)
class SynthSpec:
    """Parameters for one block-sparse spatiotemporally correlated frame."""

    partition: BlockPartition
    active_count: int
    r_intra: float
    rho_inter: float
    channels: int
    seed: int

    def __post_init__(self):
        if not 0 <= self.active_count <= self.partition.g:
            raise ValueError("active_count must lie in [0, g]")
        if not abs(self.r_intra) < 1:
            raise ValueError("r_intra must lie in (-1, 1)")
        if self.channels < 1:
            raise ValueError("need at least one channel")
        if self.channels > 1:
            lo = -1.0 / (self.channels - 1)
            if not lo < self.rho_inter < 1:
                raise ValueError(
                    f"rho_inter must lie in ({lo:.4g}, 1) for {self.channels} "
                    "channels to keep the channel covariance positive definite"
                )


def uniform_inter_channel(l, rho):
    """Channel covariance with unit diagonal and constant off-diagonal rho."""
    return (1.0 - rho) * np.eye(l) + rho * np.ones((l, l))


def gen_ar1_toeplitz(d, r):
    """AR(1) correlation matrix: entry (j, k) = r^|j - k|."""
    if not abs(r) < 1:
        raise ValueError("AR coefficient must lie in (-1, 1)")
    if d < 1:
        raise ValueError("size must be positive")
    return ar1_toeplitz(d, r)


def gen_block_sparse(spec):
    """Draw one frame from the model prior with exactly k active blocks.

    Active blocks are chosen uniformly; each is sampled from the zero-mean
    Gaussian with covariance A_i kron B (unit block scale) via the factor
    identity X_block = F_A G F_B^T with G i.i.d. standard normal, which
    avoids forming the Kronecker covariance.  Inactive blocks are exactly
    zero.

    Returns
    -------
    x : ndarray [M x L]
    support : tuple of active block indices, sorted
    """
    rng = np.random.default_rng(spec.seed)
    part = spec.partition
    active = np.sort(rng.choice(part.g, size=spec.active_count, replace=False))
    b = uniform_inter_channel(spec.channels, spec.rho_inter)
    f_b = np.linalg.cholesky(b)
    x = np.zeros((part.m, spec.channels))
    slices = part.slices()
    for i in active:
        d = part.sizes[i]
        f_a = np.linalg.cholesky(gen_ar1_toeplitz(d, spec.r_intra))
        g = rng.standard_normal((d, spec.channels))
        x[slices[i]] = f_a @ g @ f_b.T
    return x, tuple(int(i) for i in active)


def gen_ssvep_like(m, l, f0, fs, harmonic_gain, noise_sigma, seed):
    """Multichannel test signal: a fundamental plus one harmonic plus noise.

    Channel c is sin(2 pi f0 t + phi_c) + harmonic_gain * sin(2 pi 2f0 t +
    phi_c) + white noise, with a random per-channel phase.  Both f0 and 2*f0
    must be below the Nyquist frequency.
    """
    if f0 <= 0 or 2 * f0 >= fs / 2:
        raise ValueError("f0 and 2*f0 must lie below the Nyquist frequency fs/2")
    rng = np.random.default_rng(seed)
    t = np.arange(m) / fs
    phases = rng.uniform(0.0, 2.0 * np.pi, size=l)
    x = np.sin(2.0 * np.pi * f0 * t[:, None] + phases[None, :])
    x += harmonic_gain * np.sin(4.0 * np.pi * f0 * t[:, None] + phases[None, :])
    x += noise_sigma * rng.standard_normal((m, l))
    return x


def sigma_information_form(phi, pi, lam):
    """Posterior covariance via the direct information-form inverse.

    (Pi^{-1} + Phi^T Phi / lambda)^{-1}; requires every block scale strictly
    positive so Pi is invertible.  Dual route to the subtraction form used
    by the structured posterior.
    """
    phi = np.asarray(phi, float)
    pi = np.asarray(pi, float)
    return np.linalg.inv(np.linalg.inv(pi) + phi.T @ phi / lam)


def brute_force_posterior(y, phi, pi, b, lam):
    """Exact joint Gaussian posterior of the vectorized coefficients.

    Model: vec(Y^T) = kron(Phi, I_L) vec(X^T) + noise, with prior covariance
    kron(Pi, B) and noise covariance lam * kron(I_N, B).  The channel index
    varies fastest in the vectorization, so the mean reshapes to [M x L]
    row-major.

    Guarded to M*L <= 64; requires lam > 0 and full-support Pi.
    """
    y = np.asarray(y, float)
    phi = np.asarray(phi, float)
    pi = np.asarray(pi, float)
    b = np.asarray(b, float)
    m = pi.shape[0]
    l = b.shape[0]
    n = phi.shape[0]
    if m * l > 64:
        raise ValueError("brute-force posterior is limited to M*L <= 64")
    if lam <= 0:
        raise ValueError("lam must be positive")
    prior = np.kron(pi, b)
    noise = lam * np.kron(np.eye(n), b)
    h = np.kron(phi, np.eye(l))
    noise_inv = np.linalg.inv(noise)
    precision = np.linalg.inv(prior) + h.T @ noise_inv @ h
    cov = np.linalg.inv(precision)
    cov = 0.5 * (cov + cov.T)
    mean = cov @ h.T @ noise_inv @ y.ravel()
    return mean, cov
