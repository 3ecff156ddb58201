"""Reconstruction error, spectral fidelity, correlation, and timing benchmarks."""

import time
from dataclasses import dataclass

import numpy as np

from .model import uniform_partition
from .sensing import compression_ratio, make_measurement_matrix
from .solver import RecoveryConfig, recover
from .synth import SynthSpec, gen_block_sparse

BENCH_FIELDS = ("m", "n", "l", "cr", "seed", "nmse", "wall_time_seconds", "iters")


@dataclass
class BenchRecord:
    """One benchmark cell: problem shape, seed, accuracy, and wall time."""

    m: int
    n: int
    l: int
    cr: float
    seed: int
    nmse: float
    wall_time_seconds: float
    iters: int


def nmse(x_hat, x_true):
    """Normalized mean square error ||x_hat - x_true||_F^2 / ||x_true||_F^2."""
    x_hat = np.asarray(x_hat, float)
    x_true = np.asarray(x_true, float)
    if x_hat.shape != x_true.shape:
        raise ValueError("shapes must match")
    denom = np.sum(x_true**2)
    if denom == 0.0:
        raise ValueError("ground truth is identically zero")
    return float(np.sum((x_hat - x_true) ** 2) / denom)


def periodogram(signal, fs):
    """One-sided periodogram: squared-magnitude DFT scaled by 1/(fs*M).

    Interior bins are doubled so the power integrates to the signal's mean
    square (sum(psd) * fs/M equals mean(signal**2)).

    Returns
    -------
    freqs : ndarray
    psd : ndarray
    """
    signal = np.asarray(signal, float)
    if signal.ndim != 1 or signal.size < 2:
        raise ValueError("signal must be 1-D with at least two samples")
    m = signal.size
    spectrum = np.fft.rfft(signal)
    psd = np.abs(spectrum) ** 2 / (fs * m)
    if m % 2 == 0:
        psd[1:-1] *= 2.0
    else:
        psd[1:] *= 2.0
    return np.fft.rfftfreq(m, d=1.0 / fs), psd


def pearson(a, b):
    """Sample Pearson correlation of two equal-length non-constant vectors."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    if a.ndim != 1 or a.shape != b.shape:
        raise ValueError("inputs must be 1-D and equal length")
    da = a - a.mean()
    db = b - b.mean()
    na = np.sqrt(np.sum(da**2))
    nb = np.sqrt(np.sum(db**2))
    if na == 0.0 or nb == 0.0:
        raise ValueError("inputs must not be constant")
    return float(np.sum(da * db) / (na * nb))


def peak_prominence_db(freqs, psd, f0, exclude_bins=5):
    """Height of the PSD at the bin nearest f0 over the surrounding floor, in dB.

    The floor is the median of the PSD with the bins within ``exclude_bins``
    of the peak excluded, so the peak and its leakage skirt do not inflate
    their own reference level.
    """
    freqs = np.asarray(freqs, float)
    psd = np.asarray(psd, float)
    i0 = int(np.argmin(np.abs(freqs - f0)))
    keep = np.abs(np.arange(psd.size) - i0) > exclude_bins
    if not np.any(keep):
        raise ValueError("exclusion window covers the whole spectrum")
    floor = float(np.median(psd[keep]))
    tiny = np.finfo(float).tiny
    return 10.0 * np.log10(max(psd[i0], tiny) / max(floor, tiny))


def bench_channels(m, n, channel_counts, trials, seed):
    """Time recovery at fixed (m, n) across channel counts.

    Every cell uses the same measurement matrix and the same block-sparse
    generator settings; only the channel count and the per-trial seed vary.
    One record is produced per (channel count, trial); medians are left to
    the caller.  Runs sequentially to keep the timings honest.
    """
    phi = make_measurement_matrix(n, m, seed)
    part = uniform_partition(m, 16)
    config = RecoveryConfig(partition=part, noiseless=True, use_dictionary=False)
    cr = compression_ratio(n, m)
    records = []
    for l in channel_counts:
        for trial in range(trials):
            spec = SynthSpec(
                partition=part,
                active_count=min(3, part.g),
                r_intra=0.9,
                rho_inter=0.9,
                channels=l,
                seed=seed + trial,
            )
            x_true, _ = gen_block_sparse(spec)
            y = phi.entries @ x_true
            start = time.perf_counter()
            result = recover(y, phi, config=config)
            elapsed = time.perf_counter() - start
            records.append(
                BenchRecord(
                    m=m,
                    n=n,
                    l=l,
                    cr=cr,
                    seed=seed + trial,
                    nmse=nmse(result.x_hat, x_true),
                    wall_time_seconds=elapsed,
                    iters=result.iters,
                )
            )
    return records
