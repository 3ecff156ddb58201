"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
report lines; every criterion asserts its stated tolerance.
"""

import math
import statistics
import time

import numpy as np

from stsbl.cli import main as cli_main
from stsbl.io import load_frame_csv
from stsbl.metrics import (
    bench_channels,
    nmse,
    peak_prominence_db,
    periodogram,
)
from stsbl.model import BlockPartition, assemble_pi, uniform_partition
from stsbl.sensing import make_dct_dictionary, make_measurement_matrix
from stsbl.solver import RecoveryConfig, recover
from stsbl.spatial import map_estimate, posterior, spatial_whiten
from stsbl.synth import (
    SynthSpec,
    brute_force_posterior,
    gen_block_sparse,
    gen_ssvep_like,
    sigma_information_form,
)
from stsbl.temporal import ar1_toeplitz, regularize_a


def report(num, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {num}] {status} - {detail}")
    assert ok, f"criterion {num}: {detail}"


def random_partition(rng, total):
    sizes = []
    while sum(sizes) < total:
        sizes.append(min(int(rng.integers(1, 6)), total - sum(sizes)))
    return BlockPartition(tuple(sizes))


def random_full_support_pi(rng, part):
    gamma = rng.uniform(0.1, 2.0, part.g)
    blocks = []
    for d in part.sizes:
        f = rng.standard_normal((d, d))
        blocks.append(f @ f.T + d * np.eye(d))
    return assemble_pi(gamma, blocks)


def sign_test_p(wins, trials):
    """One-sided exact binomial tail P(X >= wins) under fair-coin flips."""
    return sum(math.comb(trials, k) for k in range(wins, trials + 1)) / 2.0**trials


def test_criterion_1_posterior_covariance_forms_agree():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for trial in range(100):
        n = int(rng.integers(3, 21))
        m = int(rng.integers(n, 31))
        part = random_partition(rng, m)
        pi = random_full_support_pi(rng, part)
        phi = rng.standard_normal((n, m))
        lam = (1e-2, 1.0)[trial % 2]
        y = rng.standard_normal((n, 2))
        sigma = posterior(y, phi, pi, lam).sigma
        other = sigma_information_form(phi, pi, lam)
        worst = max(worst, np.max(np.abs(sigma - other)) / np.max(np.abs(other)))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-8 and elapsed < 5.0
    report(1, ok, f"worst rel err {worst:.2e} (<1e-8), {elapsed:.2f}s (<5s)")


def test_criterion_2_brute_force_oracle_equivalence():
    rng = np.random.default_rng(202)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 9))
        m = int(rng.integers(max(3, n), 13))
        l = int(rng.integers(1, 4))
        part = random_partition(rng, m)
        pi = random_full_support_pi(rng, part)
        f = rng.standard_normal((l, l))
        b = f @ f.T + l * np.eye(l)
        phi = rng.standard_normal((n, m))
        y = rng.standard_normal((n, l))
        lam = 1e-2
        mean, _ = brute_force_posterior(y, phi, pi, b, lam)
        x = map_estimate(spatial_whiten(y, b), phi, pi, lam, b)
        worst = max(worst, np.max(np.abs(mean.reshape(m, l) - x)) / np.max(np.abs(mean)))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-8 and elapsed < 10.0
    report(2, ok, f"worst rel err {worst:.2e} (<1e-8), {elapsed:.2f}s (<10s)")


def test_criterion_3_block_sparse_recovery_cr50():
    start = time.perf_counter()
    part = uniform_partition(256, 16)
    phi = make_measurement_matrix(128, 256, seed=1)
    config = RecoveryConfig(partition=part, noiseless=True, use_dictionary=False)
    errs = []
    for seed in range(20):
        spec = SynthSpec(part, 3, 0.9, 0.9, channels=4, seed=seed)
        x, _ = gen_block_sparse(spec)
        result = recover(phi.entries @ x, phi, config=config)
        errs.append(nmse(result.x_hat, x))
    elapsed = time.perf_counter() - start
    median = float(np.median(errs))
    good = sum(e < 5e-2 for e in errs)
    ok = median < 1e-2 and good >= 18 and elapsed < 60.0
    report(
        3,
        ok,
        f"median NMSE {median:.2e} (<1e-2), {good}/20 below 5e-2 (>=18), "
        f"{elapsed:.1f}s (<60s)",
    )


def test_criterion_4_inter_channel_learning_benefit():
    # paired comparison at deep compression, where the problem is not
    # fully determined and the spatial structure carries information
    part = uniform_partition(256, 16)
    phi = make_measurement_matrix(52, 256, seed=1)
    full_cfg = RecoveryConfig(partition=part, use_dictionary=False, learn_b=True)
    frozen_cfg = RecoveryConfig(partition=part, use_dictionary=False, learn_b=False)
    full, frozen = [], []
    for seed in range(20):
        spec = SynthSpec(part, 3, 0.9, 0.95, channels=4, seed=seed)
        x, _ = gen_block_sparse(spec)
        y = phi.entries @ x
        full.append(nmse(recover(y, phi, config=full_cfg).x_hat, x))
        frozen.append(nmse(recover(y, phi, config=frozen_cfg).x_hat, x))
    wins = sum(f < z for f, z in zip(full, frozen))
    p = sign_test_p(wins, 20)
    med_full = float(np.median(full))
    med_frozen = float(np.median(frozen))
    ok = med_full < med_frozen and p < 0.05
    report(
        4,
        ok,
        f"median {med_full:.2e} vs frozen-B {med_frozen:.2e}, "
        f"{wins}/20 paired wins, sign-test p={p:.2e} (<0.05)",
    )


def test_criterion_5_runtime_stable_across_channels():
    start = time.perf_counter()
    records = bench_channels(256, 128, [8, 30], trials=5, seed=1)
    t8 = statistics.median([r.wall_time_seconds for r in records if r.l == 8])
    t30 = statistics.median([r.wall_time_seconds for r in records if r.l == 30])
    elapsed = time.perf_counter() - start
    ratio = t30 / t8
    ok = ratio < 2.0 and elapsed < 120.0
    report(
        5,
        ok,
        f"median t(L=30)={t30:.3f}s vs t(L=8)={t8:.3f}s, ratio {ratio:.2f} (<2), "
        f"{elapsed:.1f}s (<120s)",
    )


def _averaged_psd(x, fs):
    psds = []
    for c in range(x.shape[1]):
        freqs, psd = periodogram(x[:, c], fs)
        psds.append(psd)
    return freqs, np.mean(psds, axis=0)


def test_criterion_6_spectral_fidelity_through_compression():
    m, l, fs, f0 = 256, 8, 256.0, 10.0
    phi = make_measurement_matrix(128, m, seed=1)
    dictionary = make_dct_dictionary(m)
    config = RecoveryConfig(noiseless=True, use_dictionary=True)
    good = 0
    worst = 0.0
    for seed in range(20):
        x = gen_ssvep_like(m, l, f0, fs, harmonic_gain=0.5, noise_sigma=0.2, seed=seed)
        result = recover(phi.entries @ x, phi, dictionary=dictionary, config=config)
        freqs, psd_orig = _averaged_psd(x, fs)
        _, psd_rec = _averaged_psd(result.x_hat, fs)
        deltas = [
            abs(
                peak_prominence_db(freqs, psd_orig, f)
                - peak_prominence_db(freqs, psd_rec, f)
            )
            for f in (f0, 2 * f0)
        ]
        worst = max(worst, max(deltas))
        good += all(d <= 3.0 for d in deltas)
    ok = good >= 18
    report(
        6,
        ok,
        f"{good}/20 seeds with 10 Hz and 20 Hz prominence within 3 dB (worst "
        f"delta {worst:.2f} dB)",
    )


def test_criterion_7_invariant_suite():
    failures = []

    # measurement matrix column sums and rank
    for n, m, seed in [(4, 8, 7), (16, 64, 3), (128, 256, 1)]:
        phi = make_measurement_matrix(n, m, seed)
        if not np.all(phi.entries.sum(axis=0) == 2.0):
            failures.append(f"column sums ({n},{m})")
        if np.linalg.matrix_rank(phi.entries) != n:
            failures.append(f"rank ({n},{m})")

    # DCT orthonormality
    for m in (1, 2, 16, 256):
        basis = make_dct_dictionary(m).basis
        if np.max(np.abs(basis @ basis.T - np.eye(m))) >= 1e-10:
            failures.append(f"dct orthonormality m={m}")

    # regularization invariants: unit Frobenius norms, SPD Toeplitz blocks
    rng = np.random.default_rng(7)
    raws = []
    for d in (2, 16, 64):
        f = rng.standard_normal((d, d))
        raws.append(f @ f.T + d * np.eye(d))
    ar, blocks = regularize_a(raws)
    for blk in blocks:
        if abs(np.linalg.norm(blk) - 1.0) > 1e-12:
            failures.append("A_i Frobenius norm")
        if np.linalg.eigvalsh(blk).min() <= 0.0:
            failures.append("A_i positive definiteness")
    for r in (-0.99, -0.5, 0.5, 0.99):
        for d in (2, 16, 64):
            if np.linalg.eigvalsh(ar1_toeplitz(d, r)).min() <= 0.0:
                failures.append(f"toeplitz SPD r={r} d={d}")

    # r-idempotence
    ar2, _ = regularize_a([ar1_toeplitz(d, ar.r) for d in (2, 16, 64)])
    if abs(ar2.r - ar.r) > 1e-12:
        failures.append("regularize_a idempotence")

    # full solver run: B norm, gamma sign, determinism
    part = uniform_partition(64, 8)
    phi = make_measurement_matrix(32, 64, seed=1)
    spec = SynthSpec(part, 2, 0.9, 0.9, channels=4, seed=0)
    x, _ = gen_block_sparse(spec)
    y = phi.entries @ x
    config = RecoveryConfig(partition=part, use_dictionary=False)
    r1 = recover(y, phi, config=config)
    r2 = recover(y, phi, config=config)
    if abs(np.linalg.norm(r1.hyper.b) - 1.0) > 1e-12:
        failures.append("B Frobenius norm")
    if not np.all(r1.hyper.gamma >= 0.0):
        failures.append("gamma nonnegative")
    if not (np.array_equal(r1.x_hat, r2.x_hat) and r1.iters == r2.iters):
        failures.append("solver determinism")

    # reductions: single channel and scalar blocks
    spec1 = SynthSpec(part, 2, 0.9, 0.0, channels=1, seed=1)
    x1, _ = gen_block_sparse(spec1)
    res1 = recover(phi.entries @ x1, phi, config=config)
    if not np.allclose(res1.hyper.b, [[1.0]]):
        failures.append("L=1 reduction")
    part_scalar = BlockPartition((1,) * 64)
    spec2 = SynthSpec(part_scalar, 6, 0.0, 0.9, channels=3, seed=2)
    x2, _ = gen_block_sparse(spec2)
    res2 = recover(
        phi.entries @ x2,
        phi,
        config=RecoveryConfig(partition=part_scalar, use_dictionary=False),
    )
    if not all(np.allclose(a, [[1.0]]) for a in res2.hyper.a_blocks):
        failures.append("d_i=1 reduction")

    report(7, not failures, f"invariant suite ({'; '.join(failures) or 'all hold'})")


def test_criterion_8_cli_round_trip(tmp_path):
    def run(args):
        return cli_main([str(a) for a in args])

    # square system: exact reproduction
    m = 15
    phi_p = tmp_path / "phi.csv"
    x_p = tmp_path / "x.csv"
    y_p = tmp_path / "y.csv"
    xh_p = tmp_path / "xhat.csv"
    ok_exact = (
        run(["gen-matrix", "--m", m, "--n", m, "--seed", 0, "--out", phi_p]) == 0
        and run(["synth", "--m", m, "--l", 2, "--active", 1, "--seed", 3, "--out", x_p]) == 0
        and run(["compress", "--matrix", phi_p, "--frame", x_p, "--out", y_p]) == 0
        and run(["recover", "--matrix", phi_p, "--data", y_p, "--out", xh_p]) == 0
    )
    err_exact = nmse(load_frame_csv(xh_p), load_frame_csv(x_p))
    ok_exact = ok_exact and err_exact < 1e-6

    # byte determinism of every stage
    phi_q = tmp_path / "phi2.csv"
    xh_q = tmp_path / "xhat2.csv"
    run(["gen-matrix", "--m", m, "--n", m, "--seed", 0, "--out", phi_q])
    run(["recover", "--matrix", phi_q, "--data", y_p, "--out", xh_q])
    ok_bytes = (
        phi_p.read_bytes() == phi_q.read_bytes()
        and xh_p.read_bytes() == xh_q.read_bytes()
    )

    # CR=50 pipeline meets the criterion-3 thresholds
    big_phi = tmp_path / "phi256.csv"
    run(["gen-matrix", "--m", 256, "--n", 128, "--seed", 1, "--out", big_phi])
    errs = []
    for seed in range(20):
        frame = tmp_path / f"f{seed}.csv"
        comp = tmp_path / f"y{seed}.csv"
        rec = tmp_path / f"r{seed}.csv"
        run(["synth", "--m", 256, "--l", 4, "--active", 3, "--seed", seed, "--out", frame])
        run(["compress", "--matrix", big_phi, "--frame", frame, "--out", comp])
        run(["recover", "--matrix", big_phi, "--data", comp, "--out", rec, "--no-dict"])
        errs.append(nmse(load_frame_csv(rec), load_frame_csv(frame)))
    median = float(np.median(errs))
    good = sum(e < 5e-2 for e in errs)
    ok_cr50 = median < 1e-2 and good >= 18

    ok = ok_exact and ok_bytes and ok_cr50
    report(
        8,
        ok,
        f"square NMSE {err_exact:.2e} (<1e-6), byte-deterministic={ok_bytes}, "
        f"CR=50 median {median:.2e} with {good}/20 below 5e-2",
    )
