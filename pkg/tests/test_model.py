import numpy as np
import pytest

from stsbl.model import (
    BlockPartition,
    Hyperparameters,
    MultichannelFrame,
    assemble_pi,
    prior_covariance,
    uniform_partition,
)


class TestBlockPartition:
    def test_counts_and_total(self):
        part = BlockPartition((2, 3, 1))
        assert part.g == 3
        assert part.m == 6
        assert part.slices() == [slice(0, 2), slice(2, 5), slice(5, 6)]

    def test_rejects_empty_and_nonpositive(self):
        with pytest.raises(ValueError):
            BlockPartition(())
        with pytest.raises(ValueError):
            BlockPartition((2, 0))

    def test_uniform_partition_divisible(self):
        part = uniform_partition(256, 16)
        assert part.sizes == (16,) * 16

    def test_uniform_partition_remainder(self):
        assert uniform_partition(20, 16).sizes == (16, 4)
        assert uniform_partition(5, 16).sizes == (5,)


class TestAssemblePi:
    def test_identity_blocks_with_zero_scale(self):
        pi = assemble_pi([1.0, 0.0], [np.eye(2), np.eye(2)])
        np.testing.assert_array_equal(pi, np.diag([1.0, 1.0, 0.0, 0.0]))

    def test_scalar_multiplication(self):
        pi = assemble_pi([3.0], [np.array([[1.0, 0.5], [0.5, 1.0]])])
        np.testing.assert_array_equal(pi, [[3.0, 1.5], [1.5, 3.0]])

    def test_matches_index_loop_placement(self):
        rng = np.random.default_rng(0)
        sizes = (2, 3, 1)
        gamma = rng.uniform(0, 2, 3)
        blocks = [rng.standard_normal((d, d)) for d in sizes]
        pi = assemble_pi(gamma, blocks)
        want = np.zeros((6, 6))
        offsets = [0, 2, 5]
        for b, (off, d) in enumerate(zip(offsets, sizes)):
            for i in range(d):
                for j in range(d):
                    want[off + i, off + j] = gamma[b] * blocks[b][i, j]
        np.testing.assert_array_equal(pi, want)
        # off-block entries exactly zero
        assert pi[0, 2] == 0.0 and pi[5, 0] == 0.0

    def test_psd_for_psd_blocks(self):
        rng = np.random.default_rng(1)
        for trial in range(10):
            sizes = (3, 2)
            blocks = []
            for d in sizes:
                f = rng.standard_normal((d, d))
                blocks.append(f @ f.T)
            gamma = rng.uniform(0, 3, 2)
            pi = assemble_pi(gamma, blocks)
            assert np.max(np.abs(pi - pi.T)) == 0.0
            assert np.linalg.eigvalsh(pi).min() >= -1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            assemble_pi([1.0, 2.0], [np.eye(2)])


class TestPriorCovariance:
    def test_scalar_pi(self):
        out = prior_covariance([[2.0]], [[1.0, 0.5], [0.5, 1.0]])
        np.testing.assert_array_equal(out, [[2.0, 1.0], [1.0, 2.0]])

    def test_identity_kron_identity(self):
        np.testing.assert_array_equal(prior_covariance(np.eye(2), np.eye(2)), np.eye(4))

    def test_matches_four_index_definition(self):
        rng = np.random.default_rng(2)
        pi = rng.standard_normal((3, 3))
        b = rng.standard_normal((2, 2))
        out = prior_covariance(pi, b)
        l = 2
        for i in range(3):
            for j in range(3):
                for k in range(l):
                    for q in range(l):
                        assert out[i * l + k, j * l + q] == pi[i, j] * b[k, q]

    def test_eigenvalues_are_pairwise_products(self):
        rng = np.random.default_rng(3)
        f1 = rng.standard_normal((2, 2))
        f2 = rng.standard_normal((2, 2))
        pi = f1 @ f1.T
        b = f2 @ f2.T
        got = np.sort(np.linalg.eigvalsh(prior_covariance(pi, b)))
        want = np.sort(np.outer(np.linalg.eigvalsh(pi), np.linalg.eigvalsh(b)).ravel())
        np.testing.assert_allclose(got, want, rtol=1e-10, atol=1e-12)

    def test_size_guard(self):
        with pytest.raises(ValueError):
            prior_covariance(np.eye(9), np.eye(8))


class TestHyperparameters:
    def test_json_roundtrip(self):
        import json

        hyper = Hyperparameters(
            gamma=np.array([1.0, 0.5]),
            a_blocks=[np.eye(2), np.array([[1.0, 0.3], [0.3, 1.0]])],
            b=np.eye(3),
            lam=1e-10,
        )
        doc = json.loads(json.dumps(hyper.to_dict()))
        assert doc["lambda"] == 1e-10
        back = Hyperparameters.from_dict(doc)
        np.testing.assert_array_equal(back.gamma, hyper.gamma)
        for a, b_ in zip(back.a_blocks, hyper.a_blocks):
            np.testing.assert_array_equal(a, b_)
        np.testing.assert_array_equal(back.b, hyper.b)
        assert back.lam == hyper.lam


class TestMultichannelFrame:
    def test_shape_properties(self):
        frame = MultichannelFrame(np.zeros((8, 3)))
        assert frame.samples == 8
        assert frame.channels == 3

    def test_rejects_non_finite(self):
        bad = np.zeros((4, 2))
        bad[1, 1] = np.nan
        with pytest.raises(ValueError):
            MultichannelFrame(bad)

    def test_rejects_wrong_rank(self):
        with pytest.raises(ValueError):
            MultichannelFrame(np.zeros(5))
