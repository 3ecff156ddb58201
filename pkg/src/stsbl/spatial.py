"""Learning in the spatially whitened model.

Right-multiplying data by B^(-1/2) removes inter-channel correlation, so the
coefficient columns become independent Gaussians sharing one prior Pi and one
posterior covariance Sigma.  This module computes that posterior, rescales
the mean back to the original domain, and applies the EM updates for the
block scales gamma, the raw intra-block correlations A_i, and the noise
level lambda.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

EIG_FLOOR = 1e-12
GAMMA_SKIP = 1e-12


@dataclass
class Posterior:
    """Per-channel posterior: mean columns mu[:, l], shared covariance sigma."""

    mu: np.ndarray
    sigma: np.ndarray


def _spd_eig(b):
    """Eigendecompose a symmetric PD matrix, flooring eigenvalues at EIG_FLOOR.

    Rejects matrices that are asymmetric beyond 1e-10 or have a genuinely
    negative eigenvalue; roundoff-scale negatives are floored instead.
    """
    b = np.asarray(b, float)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("expected a square matrix")
    if np.max(np.abs(b - b.T)) > 1e-10:
        raise ValueError("matrix is not symmetric")
    w, v = np.linalg.eigh(b)
    if w[0] <= -1e-10 * max(1.0, abs(w[-1])):
        raise ValueError("matrix is not positive definite")
    return np.maximum(w, EIG_FLOOR), v


def sym_sqrt(b):
    """Unique symmetric square root of a symmetric PD matrix."""
    w, v = _spd_eig(b)
    return (v * np.sqrt(w)) @ v.T


def sym_inv_sqrt(b):
    """Unique symmetric inverse square root of a symmetric PD matrix."""
    w, v = _spd_eig(b)
    return (v / np.sqrt(w)) @ v.T


def spatial_whiten(y, b):
    """Decorrelate channels: returns y @ b^(-1/2)."""
    return np.asarray(y, float) @ sym_inv_sqrt(b)


def _factor_with_jitter(s):
    """Cholesky-factor a symmetric system, escalating diagonal jitter on failure.

    Jitter starts at 1e-12 * mean diagonal and grows tenfold, three times,
    before giving up.
    """
    n = s.shape[0]
    base = 1e-12 * np.trace(s) / n
    jitter = 0.0
    for _ in range(4):
        try:
            shifted = s + jitter * np.eye(n) if jitter else s
            return cho_factor(shifted, lower=True)
        except np.linalg.LinAlgError:
            jitter = base if jitter == 0.0 else jitter * 10.0
    raise RuntimeError(
        "measurement-space system is not invertible even with jitter; "
        "check that lambda > 0 or some block scale is nonzero"
    )


def posterior(y_w, phi, pi, lam):
    """Gaussian posterior of the whitened coefficients given whitened data.

    mean   mu    = Pi Phi^T (lam I + Phi Pi Phi^T)^{-1} y_w
    cov    sigma = Pi - Pi Phi^T (lam I + Phi Pi Phi^T)^{-1} Phi Pi

    The subtraction form of sigma is used because it stays defined when some
    block scales are exactly zero (Pi singular); those blocks come out with
    exactly zero mean and covariance.
    """
    y_w = np.asarray(y_w, float)
    phi = np.asarray(phi, float)
    pi = np.asarray(pi, float)
    n = phi.shape[0]
    if y_w.shape[0] != n:
        raise ValueError("data rows must match measurement count")
    if pi.shape != (phi.shape[1],) * 2:
        raise ValueError("prior covariance must be M x M")
    pi_phit = pi @ phi.T
    s = phi @ pi_phit + lam * np.eye(n)
    s = 0.5 * (s + s.T)
    factor = _factor_with_jitter(s)
    mu = pi_phit @ cho_solve(factor, y_w)
    sigma = pi - pi_phit @ cho_solve(factor, pi_phit.T)
    return Posterior(mu=mu, sigma=0.5 * (sigma + sigma.T))


def map_estimate(y_w, phi, pi, lam, b):
    """Original-domain coefficient estimate: posterior mean times b^(1/2)."""
    return posterior(y_w, phi, pi, lam).mu @ sym_sqrt(b)


def update_gamma(post, a_blocks, partition, l):
    """EM update of the block scales.

    gamma_i = (1 / (L d_i)) sum_l Tr[A_i^{-1} (Sigma_[i] + mu_[i]l mu_[i]l^T)],
    computed as Tr[A_i^{-1} (Sigma_[i] + M_i M_i^T / L)] / d_i where M_i is
    the i-th row block of the mean.  Tiny negative roundoff is clamped to 0.
    """
    gamma = np.empty(partition.g)
    for i, sl in enumerate(partition.slices()):
        d = partition.sizes[i]
        mu_i = post.mu[sl]
        second = post.sigma[sl, sl] + (mu_i @ mu_i.T) / l
        gamma[i] = max(np.trace(np.linalg.solve(a_blocks[i], second)) / d, 0.0)
    return gamma


def update_a_raw(post, gamma, partition, l, a_prev=None):
    """EM update of the raw intra-block correlation estimates.

    A_i = (Sigma_[i] + M_i M_i^T / L) / gamma_i.  Blocks whose scale is at or
    below the skip threshold keep their previous estimate (identity when no
    previous estimate is supplied).
    """
    out = []
    for i, sl in enumerate(partition.slices()):
        if gamma[i] <= GAMMA_SKIP:
            prev = a_prev[i] if a_prev is not None else np.eye(partition.sizes[i])
            out.append(np.asarray(prev, float))
            continue
        mu_i = post.mu[sl]
        a = (post.sigma[sl, sl] + (mu_i @ mu_i.T) / l) / gamma[i]
        out.append(0.5 * (a + a.T))
    return out


def update_lambda(y_w, phi, post, n, l):
    """EM update of the noise level (noisy mode only).

    lambda = ||y_w - Phi mu||_F^2 / (N L) + Tr(Sigma Phi^T Phi) / N.
    """
    resid = y_w - phi @ post.mu
    gram = phi.T @ phi
    return float(np.sum(resid**2) / (n * l) + max(np.sum(post.sigma * gram), 0.0) / n)


def update_lambda_low_snr(y_w, phi, post, partition, n, l):
    """Low-SNR variant of the noise update.

    The trace term keeps only the diagonal blocks of Sigma paired with the
    matching column blocks of Phi, which is more robust when noise dominates.
    """
    resid = y_w - phi @ post.mu
    trace = 0.0
    for i, sl in enumerate(partition.slices()):
        phi_i = phi[:, sl]
        trace += np.sum(post.sigma[sl, sl] * (phi_i.T @ phi_i))
    return float(np.sum(resid**2) / (n * l) + max(trace, 0.0) / n)
