"""Alignment-based quality indices and classical neighbourhood metrics.

The trustability index asks how far an algorithm's full-dimensional
"reduction" is from a similarity transform of the input; the tractable
consistency index asks how much the output moves, modulo similarity
transforms, when the reconstructed part of the data is replaced by a kernel
bump along one axis. Both reduce to the generalized Procrustes problem
solved here in closed form.
"""

from dataclasses import dataclass, field

import numpy as np

from .embedding import (
    Embedding,
    KernelSpec,
    fit_out_of_sample,
    fit_reconstruction,
    kernel_matrix,
    reconstruct,
)
from .errors import ValidationError
from .numerics import as_matrix, sym_eigen

__all__ = [
    "ProcrustesFit",
    "procrustes_fit",
    "AlgorithmAdapter",
    "PcaAdapter",
    "IdentityAdapter",
    "pca_reduce",
    "trustability_index",
    "TransformResult",
    "TciReport",
    "tractable_consistency_index",
    "knn_metrics",
    "IndexReport",
]


@dataclass
class ProcrustesFit:
    """Optimal similarity transform taking b onto a: a ~ mu + scale * rotation @ b."""

    mu: np.ndarray
    scale: float
    rotation: np.ndarray
    residual: float

    def apply(self, b: np.ndarray) -> np.ndarray:
        return self.mu[None, :] + self.scale * (b @ self.rotation.T)


def procrustes_fit(a, b) -> ProcrustesFit:
    """Solve min over (mu, scale, rotation) of |a - 1 mu^T - scale (rotation b)|_F^2.

    The rotation is U V^T from the SVD of the demeaned cross-product
    Atilde^T Btilde; scale and translation follow from the normal equations,
    and the residual has the closed form trace(At^T At) - trace(S)^2 /
    trace(Bt^T Bt) with S the singular values of that cross-product.
    """
    a = as_matrix(a, "procrustes target")
    b = as_matrix(b, "procrustes source")
    if a.shape != b.shape:
        raise ValidationError(f"procrustes inputs must share shape, got {a.shape} vs {b.shape}")
    a_mean, b_mean = a.mean(axis=0), b.mean(axis=0)
    at, bt = a - a_mean, b - b_mean
    denom = float(np.sum(bt * bt))
    if denom <= 0.0:
        raise ValidationError("procrustes source is constant; scale is undefined")
    u, s, vt = np.linalg.svd(at.T @ bt)
    rotation = u @ vt
    scale = float(np.sum(s)) / denom
    mu = a_mean - scale * rotation @ b_mean
    residual = float(np.sum(at * at)) - float(np.sum(s)) ** 2 / denom
    return ProcrustesFit(mu=mu, scale=scale, rotation=rotation, residual=residual)


class AlgorithmAdapter:
    """A named dimensionality-reduction procedure with a uniform interface.

    Subclasses implement ``reduce(d, x) -> Embedding`` deterministically for
    a fixed construction; ``reentrant`` declares whether concurrent calls are
    safe.
    """

    name: str = "adapter"
    reentrant: bool = True

    def reduce(self, d: int, x: np.ndarray) -> Embedding:
        raise NotImplementedError


def pca_reduce(x, d: int) -> Embedding:
    """Projection of the centered data onto the top-d covariance eigenvectors.

    The sign of each eigenvector is fixed by making its largest-magnitude
    entry positive, so the output is deterministic.
    """
    x = as_matrix(x, "data")
    n, p = x.shape
    if not 1 <= d <= p:
        raise ValidationError(f"pca target dimension must satisfy 1 <= d <= p, got {d}")
    centered = x - x.mean(axis=0)
    cov = centered.T @ centered / max(n - 1, 1)
    eigenvalues, eigenvectors = sym_eigen(cov)
    components = eigenvectors[:, :d].copy()
    for col in range(d):
        lead = components[np.argmax(np.abs(components[:, col])), col]
        if lead < 0:
            components[:, col] = -components[:, col]
    return Embedding(
        coords=centered @ components,
        algorithm="pca",
        params={"d": d, "eigenvalues": eigenvalues[:d].tolist()},
    )


class PcaAdapter(AlgorithmAdapter):
    name = "pca"

    def reduce(self, d: int, x: np.ndarray) -> Embedding:
        return pca_reduce(x, d)


class IdentityAdapter(AlgorithmAdapter):
    """Returns the first d coordinates unchanged; zero-trustability reference."""

    name = "identity"

    def reduce(self, d: int, x: np.ndarray) -> Embedding:
        x = as_matrix(x, "data")
        if not 1 <= d <= x.shape[1]:
            raise ValidationError(f"identity adapter needs 1 <= d <= p, got {d}")
        return Embedding(coords=x[:, :d].copy(), algorithm="identity", params={"d": d})


def _sum_singular(m: np.ndarray) -> float:
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def trustability_index(alg: AlgorithmAdapter, x) -> float:
    """Procrustes discrepancy of the algorithm's full-dimensional output.

    Computed from sums of singular values of the centered cross-products, it
    is exactly the similarity-alignment residual between Y = reduce(p, X)
    and X, and therefore zero (up to roundoff) whenever the output is a
    translated, scaled rotation of the input.
    """
    x = as_matrix(x, "data")
    n, p = x.shape
    xt = x - x.mean(axis=0)
    if float(np.sum(xt * xt)) <= 0.0:
        raise ValidationError("data has zero total variance; trustability is undefined")
    y = alg.reduce(p, x).coords
    if y.shape != (n, p):
        raise ValidationError(f"adapter produced shape {y.shape}, expected {(n, p)}")
    yt = y - y.mean(axis=0)
    sum_xx = _sum_singular(xt.T @ xt)
    sum_xy = _sum_singular(xt.T @ yt)
    sum_yy = _sum_singular(yt.T @ yt)
    return sum_yy - sum_xy**2 / sum_xx


@dataclass
class TransformResult:
    """Outcome of one boundary transform in the consistency scan."""

    point_index: int
    axis: int
    residual: float | None
    failed: bool = False
    message: str = ""


@dataclass
class TciReport:
    """Max residual over the evaluated transform set plus per-transform detail."""

    value: float
    contributions: list[TransformResult]
    subsampled: bool
    n_transforms_total: int

    @property
    def failed_transforms(self) -> list[TransformResult]:
        return [t for t in self.contributions if t.failed]


def tractable_consistency_index(
    alg: AlgorithmAdapter,
    x,
    d: int,
    kernel: KernelSpec,
    transform_subsample: int | None = None,
    seed: int = 0,
    reconstruction_kernel: KernelSpec | None = None,
) -> TciReport:
    """Worst-case output movement over the finite boundary transform set.

    Each transform sends the reconstructed data through a Gaussian bump along
    one coordinate axis, keeps the reconstruction residual untouched, reruns
    the algorithm and measures the Procrustes residual against the original
    output. The full set has n*p transforms; a seeded uniform subsample keeps
    the cost tractable, at the price of reporting a lower bound. Transforms
    on which the algorithm fails are recorded and excluded.
    """
    x = as_matrix(x, "data")
    n, p = x.shape
    if kernel.family == "gaussian" and kernel.bandwidth is None:
        raise ValidationError("consistency index requires an explicit kernel bandwidth")
    base = alg.reduce(d, x).coords

    recon_kernel = reconstruction_kernel or kernel
    if recon_kernel.family == "gaussian":
        embed_scale = np.sqrt(_pair_sq(base))[np.triu_indices(n, 1)]
        sigma_y = float(np.median(embed_scale[embed_scale > 0])) if np.any(embed_scale > 0) else 1.0
        kernel_y = KernelSpec("gaussian", sigma_y)
    else:
        kernel_y = recon_kernel
    model = fit_out_of_sample(x, base, recon_kernel)
    recon = fit_reconstruction(
        model.train_points,
        model.train_embedding,
        recon_kernel,
        kernel_y,
        alpha=model.alpha_coefficients,
    )
    x_hat = reconstruct(recon, base)
    residual_part = x - x_hat

    all_transforms = [(i, j) for i in range(n) for j in range(p)]
    if transform_subsample is not None and transform_subsample < len(all_transforms):
        rng = np.random.default_rng([int(seed) & 0xFFFFFFFF, 0x7C1])
        chosen_idx = rng.choice(len(all_transforms), size=transform_subsample, replace=False)
        chosen = [all_transforms[i] for i in sorted(chosen_idx)]
        subsampled = True
    else:
        chosen = all_transforms
        subsampled = False

    base_centered = base - base.mean(axis=0)
    base_constant = float(np.sum(base_centered * base_centered)) <= 1e-24
    contributions: list[TransformResult] = []
    best = 0.0
    for i, j in chosen:
        bump = kernel_matrix(kernel, x_hat, x[i : i + 1])[:, 0]
        transformed = np.zeros_like(x)
        transformed[:, j] = bump
        x_tilde = transformed + residual_part
        try:
            moved = alg.reduce(d, x_tilde).coords
            if base_constant:
                # the similarity term vanishes; only the translation is free
                centered = moved - moved.mean(axis=0)
                residual = float(np.sum(centered * centered))
            else:
                residual = procrustes_fit(moved, base).residual
        except Exception as exc:  # noqa: BLE001 - any adapter failure is recorded
            contributions.append(
                TransformResult(point_index=i, axis=j, residual=None, failed=True, message=str(exc))
            )
            continue
        contributions.append(TransformResult(point_index=i, axis=j, residual=residual))
        best = max(best, residual)
    return TciReport(
        value=best,
        contributions=contributions,
        subsampled=subsampled,
        n_transforms_total=len(all_transforms),
    )


def _pair_sq(y: np.ndarray) -> np.ndarray:
    sq = np.sum(y * y, axis=1)
    out = sq[:, None] + sq[None, :] - 2.0 * (y @ y.T)
    np.maximum(out, 0.0, out=out)
    return out


def _neighbour_ranks(points: np.ndarray) -> np.ndarray:
    """ranks[i, j] = rank of j among the neighbours of i (nearest = 1, self = 0).

    Ranks come from Euclidean distances with ties broken by ascending index.
    """
    n = points.shape[0]
    sq = _pair_sq(points)
    ranks = np.zeros((n, n), dtype=int)
    idx = np.arange(n)
    for i in range(n):
        order = sorted(np.delete(idx, i), key=lambda j: (sq[i, j], j))
        for rank, j in enumerate(order, start=1):
            ranks[i, j] = rank
    return ranks


def knn_metrics(x, y, k: int) -> tuple[float, float, float]:
    """Separability, trustworthiness and continuity of an embedding.

    Separability is the average fraction of high-dimensional k-neighbours
    kept in the embedding. Trustworthiness penalizes intruders (embedding
    neighbours that are not data neighbours) by their data rank; continuity
    penalizes the points an embedding drops, by their embedding rank.
    """
    x = as_matrix(x, "data")
    y = as_matrix(y, "embedding")
    n = x.shape[0]
    if y.shape[0] != n:
        raise ValidationError("data and embedding disagree on count")
    if not 1 <= k < n:
        raise ValidationError(f"k must satisfy 1 <= k < n, got k={k}, n={n}")
    rank_x = _neighbour_ranks(x)
    rank_y = _neighbour_ranks(y)
    missed = 0
    trust_penalty = 0
    cont_penalty = 0
    for i in range(n):
        a = {j for j in range(n) if 0 < rank_x[i, j] <= k}
        b = {j for j in range(n) if 0 < rank_y[i, j] <= k}
        missed += len(a - b)
        trust_penalty += sum(int(rank_x[i, j]) - k for j in b - a)
        cont_penalty += sum(int(rank_y[i, j]) - k for j in a - b)
    tsi = 1.0 - missed / (n * k)
    norm = n * k * (2 * n - 3 * k - 1)
    trust = 1.0 - 2.0 * trust_penalty / norm if trust_penalty else 1.0
    cont = 1.0 - 2.0 * cont_penalty / norm if cont_penalty else 1.0
    return tsi, trust, cont


@dataclass
class IndexReport:
    """Collected index values for one (algorithm, dataset) pair."""

    algorithm: str
    dataset: str
    n: int
    ti: float | None = None
    tci: TciReport | None = None
    knn_k: int | None = None
    tsi: float | None = None
    trustworthiness: float | None = None
    continuity: float | None = None
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        data = {
            "algorithm": self.algorithm,
            "dataset": self.dataset,
            "n": self.n,
            "ti": self.ti,
            "ti_normalized": None if self.ti is None else self.ti / self.n,
            "knn_k": self.knn_k,
            "tsi": self.tsi,
            "trustworthiness": self.trustworthiness,
            "continuity": self.continuity,
        }
        data.update(self.extras)
        if self.tci is not None:
            data["tci"] = self.tci.value
            data["tci_normalized"] = self.tci.value / self.n
            data["tci_subsampled_lower_bound"] = self.tci.subsampled
            data["tci_transforms_total"] = self.tci.n_transforms_total
            data["tci_contributions"] = [
                {
                    "point_index": t.point_index,
                    "axis": t.axis,
                    "residual": t.residual,
                    "failed": t.failed,
                    "message": t.message,
                }
                for t in self.tci.contributions
            ]
        return data

    def csv_row(self) -> tuple[str, str]:
        """Header and one data row shaped like the summary tables."""
        header = "dataset,algorithm,n,ti,ti_normalized,tci,tci_normalized,tsi,trustworthiness,continuity"
        fmt = lambda v: "" if v is None else repr(float(v))
        row = ",".join(
            [
                self.dataset,
                self.algorithm,
                str(self.n),
                fmt(self.ti),
                fmt(None if self.ti is None else self.ti / self.n),
                fmt(None if self.tci is None else self.tci.value),
                fmt(None if self.tci is None else self.tci.value / self.n),
                fmt(self.tsi),
                fmt(self.trustworthiness),
                fmt(self.continuity),
            ]
        )
        return header, row
