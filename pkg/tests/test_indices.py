"""Procrustes alignment, trustability/consistency indices and kNN metrics."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lsdr.embedding import Embedding, KernelSpec
from lsdr.errors import ValidationError
from lsdr.indices import (
    AlgorithmAdapter,
    IdentityAdapter,
    IndexReport,
    PcaAdapter,
    knn_metrics,
    pca_reduce,
    procrustes_fit,
    tractable_consistency_index,
    trustability_index,
)


def random_orthogonal(rng, p):
    q, r = np.linalg.qr(rng.standard_normal((p, p)))
    return q * np.sign(np.diag(r))


def random_similarity_pair(rng, n, p):
    b = rng.standard_normal((n, p))
    rotation = random_orthogonal(rng, p)
    scale = rng.uniform(0.5, 2.0)
    mu = rng.standard_normal(p)
    a = mu[None, :] + scale * (b @ rotation.T)
    return a, b, mu, scale, rotation


class ConstantAdapter(AlgorithmAdapter):
    name = "constant"

    def reduce(self, d, x):
        return Embedding(coords=np.ones((x.shape[0], d)), algorithm="constant")


class RotatedAdapter(AlgorithmAdapter):
    """Wraps another adapter and rotates its output by a fixed orthogonal map."""

    def __init__(self, inner, rotation):
        self.inner = inner
        self.rotation = rotation
        self.name = f"rotated-{inner.name}"

    def reduce(self, d, x):
        emb = self.inner.reduce(d, x)
        return Embedding(coords=emb.coords @ self.rotation.T, algorithm=self.name)


class TestProcrustes:
    def test_identical_inputs(self):
        a = np.random.default_rng(0).standard_normal((12, 3))
        fit = procrustes_fit(a, a)
        assert fit.scale == pytest.approx(1.0, abs=1e-12)
        assert fit.residual == pytest.approx(0.0, abs=1e-10)
        assert np.allclose(fit.apply(a), a, atol=1e-10)

    def test_scale_and_shift(self):
        b = np.random.default_rng(1).standard_normal((10, 2))
        a = 2.0 * b + 1.0
        fit = procrustes_fit(a, b)
        assert fit.scale == pytest.approx(2.0, abs=1e-10)
        assert np.allclose(fit.mu, [1.0, 1.0], atol=1e-10)
        assert fit.residual == pytest.approx(0.0, abs=1e-10)

    def test_recovers_constructed_similarity(self):
        rng = np.random.default_rng(42)
        a, b, mu, scale, rotation = random_similarity_pair(rng, 20, 3)
        fit = procrustes_fit(a, b)
        assert fit.residual < 1e-10
        assert np.abs(fit.apply(b) - a).max() < 1e-8

    def test_rotation_is_orthogonal(self):
        rng = np.random.default_rng(3)
        fit = procrustes_fit(rng.standard_normal((15, 4)), rng.standard_normal((15, 4)))
        assert np.abs(fit.rotation.T @ fit.rotation - np.eye(4)).max() < 1e-10

    def test_closed_form_residual_matches_direct_evaluation(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            a = rng.standard_normal((14, 3))
            b = rng.standard_normal((14, 3))
            fit = procrustes_fit(a, b)
            direct = float(np.sum((a - fit.mu[None, :] - fit.scale * (b @ fit.rotation.T)) ** 2))
            assert fit.residual == pytest.approx(direct, abs=1e-8)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000))
    def test_similarity_transforms_leave_no_residual(self, seed):
        rng = np.random.default_rng(seed)
        a, b, *_ = random_similarity_pair(rng, 15, 3)
        assert procrustes_fit(a, b).residual < 1e-10

    def test_rejects_constant_source(self):
        a = np.random.default_rng(5).standard_normal((8, 2))
        with pytest.raises(ValidationError):
            procrustes_fit(a, np.ones((8, 2)))


class TestTrustabilityIndex:
    def test_identity_adapter_is_fully_trustable(self):
        x = np.random.default_rng(1).standard_normal((30, 4))
        assert abs(trustability_index(IdentityAdapter(), x)) < 1e-8

    def test_pca_at_full_dimension_is_fully_trustable(self):
        x = np.random.default_rng(2).standard_normal((40, 5))
        assert abs(trustability_index(PcaAdapter(), x)) < 1e-8

    def test_constant_output_scores_zero_by_the_formula(self):
        # known pathological case: all cross-products vanish
        x = np.random.default_rng(3).standard_normal((20, 3))
        ti = trustability_index(ConstantAdapter(), x)
        xt = x - x.mean(axis=0)
        y = np.ones((20, 3))
        yt = y - y.mean(axis=0)
        direct = (
            np.sum(np.linalg.svd(yt.T @ yt, compute_uv=False))
            - np.sum(np.linalg.svd(xt.T @ yt, compute_uv=False)) ** 2
            / np.sum(np.linalg.svd(xt.T @ xt, compute_uv=False))
        )
        assert ti == pytest.approx(direct, abs=1e-12)
        assert ti == pytest.approx(0.0, abs=1e-12)

    def test_invariant_under_output_rotation(self):
        rng = np.random.default_rng(11)
        x = rng.standard_normal((25, 4))
        rotation = random_orthogonal(rng, 4)
        plain = trustability_index(PcaAdapter(), x)
        rotated = trustability_index(RotatedAdapter(PcaAdapter(), rotation), x)
        assert rotated == pytest.approx(plain, abs=1e-8)

    def test_lossy_full_dimension_output_scores_positive(self):
        class SquashAdapter(AlgorithmAdapter):
            name = "squash"

            def reduce(self, d, x):
                out = x.copy()
                out[:, -1] = 0.0  # drop one coordinate: not a similarity map
                return Embedding(coords=out[:, :d], algorithm="squash")

        x = np.random.default_rng(21).standard_normal((30, 3))
        ti = trustability_index(SquashAdapter(), x)
        assert ti > 1e-3
        assert ti >= -1e-8

    def test_rejects_zero_variance_data(self):
        with pytest.raises(ValidationError):
            trustability_index(IdentityAdapter(), np.ones((10, 2)))


class TestTractableConsistencyIndex:
    def test_constant_adapter_scores_zero(self):
        x = np.random.default_rng(0).standard_normal((12, 2))
        with pytest.warns(UserWarning, match="rank deficient"):
            report = tractable_consistency_index(
                ConstantAdapter(), x, 1, KernelSpec("gaussian", 1.0), transform_subsample=4
            )
        assert report.value == pytest.approx(0.0, abs=1e-12)

    def test_singleton_subsample_equals_its_contribution(self):
        x = np.random.default_rng(5).standard_normal((14, 3))
        report = tractable_consistency_index(
            PcaAdapter(), x, 2, KernelSpec("gaussian", 1.0), transform_subsample=1, seed=3
        )
        assert len(report.contributions) == 1
        assert report.value == report.contributions[0].residual
        assert report.subsampled

    def test_max_is_monotone_in_the_transform_set(self):
        x = np.random.default_rng(8).standard_normal((12, 3))
        report = tractable_consistency_index(
            PcaAdapter(), x, 2, KernelSpec("gaussian", 1.0), transform_subsample=8, seed=1
        )
        residuals = [t.residual for t in report.contributions if not t.failed]
        running = []
        best = 0.0
        for r in residuals:
            best = max(best, r)
            running.append(best)
        assert running == sorted(running)
        assert report.value == pytest.approx(max(residuals))

    def test_full_set_when_subsample_exceeds_it(self):
        x = np.random.default_rng(2).standard_normal((6, 2))
        report = tractable_consistency_index(
            PcaAdapter(), x, 1, KernelSpec("gaussian", 1.0), transform_subsample=1000
        )
        assert not report.subsampled
        assert len(report.contributions) == 12

    def test_requires_bandwidth(self):
        x = np.random.default_rng(1).standard_normal((8, 2))
        with pytest.raises(ValidationError):
            tractable_consistency_index(PcaAdapter(), x, 1, KernelSpec("gaussian", None))


def brute_force_knn_metrics(x, y, k):
    """Direct transcription of the neighbourhood formulas with explicit sets."""
    n = len(x)

    def ranks(points):
        out = {}
        for i in range(n):
            dists = sorted(
                (float(np.sum((points[i] - points[j]) ** 2)), j)
                for j in range(n)
                if j != i
            )
            for rank, (_, j) in enumerate(dists, start=1):
                out[(i, j)] = rank
        return out

    rank_hi = ranks(np.asarray(x, dtype=float))
    rank_lo = ranks(np.asarray(y, dtype=float))
    missed = 0
    trust_pen = 0
    cont_pen = 0
    for i in range(n):
        a = {j for j in range(n) if j != i and rank_hi[(i, j)] <= k}
        b = {j for j in range(n) if j != i and rank_lo[(i, j)] <= k}
        missed += len(a - b)
        trust_pen += sum(rank_hi[(i, j)] - k for j in b - a)
        cont_pen += sum(rank_lo[(i, j)] - k for j in a - b)
    tsi = 1.0 - missed / (n * k)
    norm = n * k * (2 * n - 3 * k - 1)
    trust = 1.0 - 2.0 * trust_pen / norm if trust_pen else 1.0
    cont = 1.0 - 2.0 * cont_pen / norm if cont_pen else 1.0
    return tsi, trust, cont


class TestKnnMetrics:
    def test_identity_embedding_scores_one(self):
        x = np.random.default_rng(0).standard_normal((15, 3))
        assert knn_metrics(x, x.copy(), 4) == (1.0, 1.0, 1.0)

    def test_everyone_is_a_neighbour_at_k_equals_n_minus_one(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal((8, 3))
        y = rng.standard_normal((8, 2))
        tsi, trust, cont = knn_metrics(x, y, 7)
        assert tsi == 1.0 and trust == 1.0 and cont == 1.0

    def test_matches_brute_force_exactly(self):
        for seed in range(25):
            rng = np.random.default_rng(seed)
            x = rng.standard_normal((10, 4))
            y = rng.standard_normal((10, 2))
            for k in (1, 3, 5):
                assert knn_metrics(x, y, k) == brute_force_knn_metrics(x, y, k)

    def test_values_lie_in_unit_interval(self):
        rng = np.random.default_rng(9)
        x = rng.standard_normal((12, 5))
        y = rng.standard_normal((12, 2))
        for k in (1, 2, 4):
            for v in knn_metrics(x, y, k):
                assert -1e-12 <= v <= 1.0 + 1e-12

    def test_rejects_k_out_of_range(self):
        x = np.random.default_rng(0).standard_normal((5, 2))
        with pytest.raises(ValidationError):
            knn_metrics(x, x, 5)


class TestPcaReduce:
    def test_recovers_line_positions(self):
        rng = np.random.default_rng(6)
        t = rng.standard_normal(30)
        direction = np.array([3.0, 4.0]) / 5.0
        x = np.outer(t, direction)
        emb = pca_reduce(x, 1)
        centered_t = t - t.mean()
        assert min(
            np.abs(emb.coords[:, 0] - centered_t).max(),
            np.abs(emb.coords[:, 0] + centered_t).max(),
        ) < 1e-10

    def test_component_variances_equal_eigenvalues(self):
        rng = np.random.default_rng(13)
        x = rng.standard_normal((30, 4)) @ np.diag([3.0, 2.0, 1.0, 0.5])
        emb = pca_reduce(x, 4)
        centered = x - x.mean(axis=0)
        eigenvalues = np.sort(np.linalg.eigvalsh(centered.T @ centered / 29))[::-1]
        variances = emb.coords.var(axis=0, ddof=1)
        assert np.allclose(variances, eigenvalues, atol=1e-8)

    def test_deterministic_sign_convention(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal((20, 3))
        a = pca_reduce(x, 3).coords
        b = pca_reduce(x, 3).coords
        assert np.array_equal(a, b)


class TestIndexReport:
    def test_csv_row_is_table_shaped(self):
        report = IndexReport(algorithm="pca", dataset="demo", n=100, ti=2.5)
        header, row = report.csv_row()
        assert header.startswith("dataset,algorithm,n,ti")
        fields = row.split(",")
        assert fields[0] == "demo" and fields[1] == "pca"
        assert float(fields[3]) == 2.5
        assert float(fields[4]) == 0.025

    def test_json_dict_has_normalized_values(self):
        report = IndexReport(algorithm="pca", dataset="demo", n=50, ti=5.0)
        data = report.to_dict()
        assert data["ti_normalized"] == pytest.approx(0.1)
