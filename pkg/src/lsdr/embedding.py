"""Metric scaling, kernel-weighted embedding, and the RKHS out-of-sample and
reconstruction machinery.

Metric MDS starts from classical scaling (double centering of the squared
distances) and refines with stress majorization, which never increases the
stress. The out-of-sample model solves the kernel system K alpha = Y with a
scale-invariant ridge; the reconstruction model picks, per data coordinate,
the minimum-norm coefficient vector that makes the training residuals exactly
uncorrelated with every embedding coordinate.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError, ValidationError
from .graph import GeodesicDistances
from .numerics import as_matrix, pairwise_sq_dists, sym_eigen
from .skeleton import SkeletonReport

__all__ = [
    "KernelSpec",
    "Embedding",
    "KernelModel",
    "Reconstructor",
    "kernel_matrix",
    "metric_mds",
    "stress",
    "nadaraya_embed",
    "recommended_bandwidth",
    "fit_out_of_sample",
    "embed_out_of_sample",
    "fit_reconstruction",
    "reconstruct",
]

MDS_MAX_ITER = 500
MDS_REL_TOL = 1e-9


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus bandwidth.

    ``gaussian`` is exp(-|x - x'|^2 / (2 sigma^2)); ``bregman-indicator`` is
    the 0/1 equality kernel for categorical data; ``linear`` is the plain dot
    product (useful as the identity-reduction limit). Bandwidth is only
    meaningful for the Gaussian family.
    """

    family: str = "gaussian"
    bandwidth: float | None = None

    def __post_init__(self):
        if self.family not in ("gaussian", "bregman-indicator", "linear"):
            raise ValidationError(f"unknown kernel family {self.family!r}")
        if self.bandwidth is not None and self.bandwidth <= 0:
            raise ValidationError(f"bandwidth must be positive, got {self.bandwidth}")

    def with_bandwidth(self, sigma: float) -> "KernelSpec":
        return KernelSpec(self.family, float(sigma))

    def to_dict(self) -> dict:
        return {"family": self.family, "bandwidth": self.bandwidth}

    @classmethod
    def from_dict(cls, data: dict) -> "KernelSpec":
        return cls(family=data["family"], bandwidth=data["bandwidth"])


@dataclass
class Embedding:
    """Reduced representation plus provenance."""

    coords: np.ndarray
    algorithm: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coords = as_matrix(self.coords, "embedding coordinates")

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[1]


def kernel_matrix(spec: KernelSpec, a, b) -> np.ndarray:
    """Cross-kernel matrix k(a_i, b_j)."""
    a = as_matrix(a, "kernel input a")
    b = as_matrix(b, "kernel input b")
    if a.shape[1] != b.shape[1]:
        raise ValidationError("kernel inputs must share their dimension")
    if spec.family == "linear":
        return a @ b.T
    sq = (
        np.sum(a * a, axis=1)[:, None]
        + np.sum(b * b, axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    np.maximum(sq, 0.0, out=sq)
    if spec.family == "bregman-indicator":
        return np.where(sq <= 1e-24, 1.0, 0.0)
    if spec.bandwidth is None:
        raise ValidationError("gaussian kernel requires a bandwidth")
    return np.exp(-sq / (2.0 * spec.bandwidth**2))


def _validate_distance_matrix(q) -> np.ndarray:
    q = as_matrix(q, "distance matrix")
    n = q.shape[0]
    if q.shape[1] != n:
        raise ValidationError(f"distance matrix must be square, got shape {q.shape}")
    if float(np.abs(q - q.T).max()) > 1e-12 * max(1.0, float(np.abs(q).max())):
        raise ValidationError("distance matrix is not symmetric")
    if float(np.abs(np.diag(q)).max()) > 0.0:
        raise ValidationError("distance matrix must have a zero diagonal")
    if q.min() < 0.0:
        raise ValidationError("distance matrix has negative entries")
    return q


def classical_scaling(q: np.ndarray, d: int) -> np.ndarray:
    """Coordinates from double centering of the squared distances.

    Negative eigenvalues (non-Euclidean inputs) are clamped to zero; they
    only affect this initialization, the stress refinement works on the raw
    distances.
    """
    n = q.shape[0]
    centering = np.eye(n) - np.ones((n, n)) / n
    b = -0.5 * centering @ (q * q) @ centering
    b = 0.5 * (b + b.T)
    eigenvalues, eigenvectors = sym_eigen(b)
    top = np.clip(eigenvalues[:d], 0.0, None)
    return eigenvectors[:, :d] * np.sqrt(top)


def stress(q, y) -> float:
    """Square root of the summed squared distance mismatches over pairs i<j."""
    q = _validate_distance_matrix(q)
    y = as_matrix(y, "configuration")
    if y.shape[0] != q.shape[0]:
        raise ValidationError("configuration and distance matrix disagree on n")
    d = np.sqrt(pairwise_sq_dists(y))
    iu = np.triu_indices(q.shape[0], k=1)
    return float(np.sqrt(np.sum((q[iu] - d[iu]) ** 2)))


def _guttman_step(q: np.ndarray, y: np.ndarray) -> np.ndarray:
    n = y.shape[0]
    d = np.sqrt(pairwise_sq_dists(y))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(d > 0.0, q / np.where(d > 0.0, d, 1.0), 0.0)
    b = -ratio
    np.fill_diagonal(b, 0.0)
    np.fill_diagonal(b, -b.sum(axis=1))
    return (b @ y) / n


def metric_mds(q, d: int, stress_trace: list | None = None) -> np.ndarray:
    """Embed a distance matrix into d dimensions by stress minimization.

    Classical scaling provides the start; majorization steps then lower the
    stress monotonically until the relative change drops below 1e-9 or 500
    iterations pass. Appending to ``stress_trace`` exposes the per-iteration
    stress values for convergence checks.
    """
    q = _validate_distance_matrix(q)
    n = q.shape[0]
    if not 1 <= d < n:
        raise ValidationError(f"target dimension must satisfy 1 <= d < n, got d={d}, n={n}")
    y = classical_scaling(q, d)
    current = stress(q, y)
    if stress_trace is not None:
        stress_trace.append(current)
    scale = float(q.max())
    if scale == 0.0:
        return y
    for _ in range(MDS_MAX_ITER):
        if current <= 1e-14 * scale:
            break
        y_next = _guttman_step(q, y)
        nxt = stress(q, y_next)
        if stress_trace is not None:
            stress_trace.append(nxt)
        if not np.isfinite(nxt):
            raise NumericalError("stress diverged during majorization")
        y = y_next
        if current > 0.0 and (current - nxt) / current < MDS_REL_TOL:
            current = nxt
            break
        current = nxt
    return y


def nadaraya_embed(
    skeletal_coords,
    skeletal_points,
    all_points,
    kernel: KernelSpec,
) -> np.ndarray:
    """Kernel-weighted average of the skeletal embeddings for every point.

    Skeletal points are not pinned: their own row is the weighted average
    including themselves. If every weight for some point underflows to zero
    the point falls back to its nearest skeletal point's embedding and a
    warning is emitted.
    """
    y_skel = as_matrix(skeletal_coords, "skeletal coordinates")
    x_skel = as_matrix(skeletal_points, "skeletal points")
    x_all = as_matrix(all_points, "points")
    if y_skel.shape[0] != x_skel.shape[0]:
        raise ValidationError("skeletal coordinates and points disagree on count")
    if x_skel.shape[0] < 1:
        raise ValidationError("need at least one skeletal point")
    weights = kernel_matrix(kernel, x_all, x_skel)
    totals = weights.sum(axis=1)
    dead = np.flatnonzero(totals <= 0.0)
    out = np.empty((x_all.shape[0], y_skel.shape[1]))
    alive = totals > 0.0
    out[alive] = (weights[alive] @ y_skel) / totals[alive, None]
    if dead.size:
        warnings.warn(
            f"kernel weights underflowed for {dead.size} point(s); "
            "falling back to nearest skeletal embedding",
            stacklevel=2,
        )
        for i in dead:
            sq = np.sum((x_skel - x_all[i]) ** 2, axis=1)
            out[i] = y_skel[int(np.argmin(sq))]
    return out


def recommended_bandwidth(skeleton: SkeletonReport, geodesics: GeodesicDistances) -> float:
    """Bandwidth rule: the largest skeletal ball that reaches past the boundary.

    For each skeletal point combine its boundary distance with the graph
    distance to its nearest other skeletal point; the maximum over skeletal
    points is the bandwidth. With a single skeletal point the inner minimum
    is undefined and the rule degrades to that point's boundary distance.
    """
    skeletal = skeleton.skeletal_points
    if not skeletal:
        raise ValidationError("skeleton report has no skeletal points")
    d_b = skeleton.boundary_distance
    if len(skeletal) == 1:
        warnings.warn(
            "single skeletal point: bandwidth falls back to its boundary distance",
            stacklevel=2,
        )
        return float(d_b[skeletal[0]])
    rows = {s: geodesics.row(s) for s in skeletal}
    best = 0.0
    for s in skeletal:
        nearest = min(rows[s][t] for t in skeletal if t != s)
        best = max(best, float(np.sqrt(d_b[s] ** 2 + nearest**2)))
    return best


@dataclass
class KernelModel:
    """Out-of-sample embedding model: coefficients of the kernel system.

    ``alpha_coefficients`` solves (K + ridge I) alpha = Y on the training
    data, so evaluating the kernel row of a query against the training points
    and multiplying by alpha reproduces the embedding map.
    """

    kernel: KernelSpec
    train_points: np.ndarray
    train_embedding: np.ndarray
    alpha_coefficients: np.ndarray
    ridge: float

    def to_dict(self) -> dict:
        return {
            "kernel": self.kernel.to_dict(),
            "train_points": self.train_points.tolist(),
            "train_embedding": self.train_embedding.tolist(),
            "alpha_coefficients": self.alpha_coefficients.tolist(),
            "ridge": self.ridge,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "KernelModel":
        return cls(
            kernel=KernelSpec.from_dict(data["kernel"]),
            train_points=np.asarray(data["train_points"], dtype=float),
            train_embedding=np.asarray(data["train_embedding"], dtype=float),
            alpha_coefficients=np.asarray(data["alpha_coefficients"], dtype=float),
            ridge=float(data["ridge"]),
        )


def fit_out_of_sample(train, train_embedding, kernel: KernelSpec) -> KernelModel:
    """Solve the kernel interpolation system for the embedding coefficients.

    Exact duplicate training points would make the kernel matrix singular;
    they are dropped with a warning, keeping the first occurrence. The ridge
    is 1e-8 trace(K)/n, a scale-invariant conditioning floor.
    """
    x = as_matrix(train, "training points")
    y = as_matrix(train_embedding, "training embedding")
    if x.shape[0] != y.shape[0]:
        raise ValidationError("training points and embeddings disagree on count")
    _, keep = np.unique(x, axis=0, return_index=True)
    if keep.size < x.shape[0]:
        warnings.warn(
            f"dropped {x.shape[0] - keep.size} duplicate training point(s)",
            stacklevel=2,
        )
        keep = np.sort(keep)
        x, y = x[keep], y[keep]
    k = kernel_matrix(kernel, x, x)
    n = k.shape[0]
    ridge = 1e-8 * float(np.trace(k)) / n
    alpha = np.linalg.solve(k + ridge * np.eye(n), y)
    return KernelModel(
        kernel=kernel,
        train_points=x,
        train_embedding=y,
        alpha_coefficients=alpha,
        ridge=ridge,
    )


def embed_out_of_sample(model: KernelModel, queries) -> np.ndarray:
    """Evaluate the fitted embedding map at query points."""
    q = as_matrix(queries, "query points")
    return kernel_matrix(model.kernel, q, model.train_points) @ model.alpha_coefficients


@dataclass
class Reconstructor:
    """Map from embedding space back to data space.

    Each data coordinate is the training mean plus a centered-kernel
    expansion over the training embeddings. ``beta_coefficients`` (n x p) is
    the minimum-norm solution making the training residuals uncorrelated
    with every embedding coordinate; ``c_matrix`` (d x p) holds those target
    covariances and ``constraint_rank`` reports the rank of the constraint
    system (deficiency triggers a pseudo-inverse and a warning).
    """

    kernel_y: KernelSpec
    train_embedding: np.ndarray
    column_means: np.ndarray
    beta_coefficients: np.ndarray
    c_matrix: np.ndarray
    gram_x: np.ndarray
    gram_y: np.ndarray
    kernel_col_means: np.ndarray
    constraint_rank: int

    def to_dict(self) -> dict:
        return {
            "kernel_y": self.kernel_y.to_dict(),
            "train_embedding": self.train_embedding.tolist(),
            "column_means": self.column_means.tolist(),
            "beta_coefficients": self.beta_coefficients.tolist(),
            "c_matrix": self.c_matrix.tolist(),
            "gram_x": self.gram_x.tolist(),
            "gram_y": self.gram_y.tolist(),
            "kernel_col_means": self.kernel_col_means.tolist(),
            "constraint_rank": self.constraint_rank,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Reconstructor":
        return cls(
            kernel_y=KernelSpec.from_dict(data["kernel_y"]),
            train_embedding=np.asarray(data["train_embedding"], dtype=float),
            column_means=np.asarray(data["column_means"], dtype=float),
            beta_coefficients=np.asarray(data["beta_coefficients"], dtype=float),
            c_matrix=np.asarray(data["c_matrix"], dtype=float),
            gram_x=np.asarray(data["gram_x"], dtype=float),
            gram_y=np.asarray(data["gram_y"], dtype=float),
            kernel_col_means=np.asarray(data["kernel_col_means"], dtype=float),
            constraint_rank=int(data["constraint_rank"]),
        )


def _double_center(k: np.ndarray) -> np.ndarray:
    n = k.shape[0]
    h = np.eye(n) - np.ones((n, n)) / n
    return h @ k @ h


def fit_reconstruction(
    train,
    train_embedding,
    kernel_x: KernelSpec,
    kernel_y: KernelSpec,
    alpha: np.ndarray | None = None,
) -> Reconstructor:
    """Fit the reconstruction map for a reduction of the training data.

    The coefficient of coordinate l solves A^T beta_l = c_l in minimum norm,
    where c_jl is the sample covariance between data coordinate l and
    embedding coordinate j, and A = (1/n) K_y H Y is the constraint matrix
    that turns the residual/embedding covariances into linear functions of
    beta. Rank deficiency of A^T A falls back to the pseudo-inverse.
    """
    x = as_matrix(train, "training points")
    y = as_matrix(train_embedding, "training embedding")
    n, p = x.shape
    d = y.shape[1]
    if y.shape[0] != n:
        raise ValidationError("training points and embeddings disagree on count")
    if d >= n:
        raise ValidationError(f"reconstruction requires d < n, got d={d}, n={n}")
    if alpha is None:
        alpha = fit_out_of_sample(x, y, kernel_x).alpha_coefficients

    k_x = kernel_matrix(kernel_x, x, x)
    k_y = kernel_matrix(kernel_y, y, y)
    gram_x = _double_center(k_x)
    gram_y = _double_center(k_y)

    x_means = x.mean(axis=0)
    y_means = y.mean(axis=0)
    # c[j, l] = sample covariance of embedding coordinate j with data coordinate l.
    c = (y.T @ x) / n - np.outer(y_means, x_means)

    h = np.eye(n) - np.ones((n, n)) / n
    a = (k_y @ h @ y) / n
    gram = a.T @ a
    rank = int(np.linalg.matrix_rank(gram, tol=1e-12 * max(1.0, float(np.abs(gram).max()))))
    if rank < d:
        warnings.warn(
            f"reconstruction constraint system is rank deficient (rank {rank} < {d}); "
            "using the pseudo-inverse",
            stacklevel=2,
        )
        beta = a @ np.linalg.pinv(gram) @ c
    else:
        beta = a @ np.linalg.solve(gram, c)

    return Reconstructor(
        kernel_y=kernel_y,
        train_embedding=y,
        column_means=x_means,
        beta_coefficients=beta,
        c_matrix=c,
        gram_x=gram_x,
        gram_y=gram_y,
        kernel_col_means=k_y.mean(axis=0),
        constraint_rank=rank,
    )


def reconstruct(model: Reconstructor, y) -> np.ndarray:
    """Evaluate the reconstruction map at one embedding row or a batch."""
    arr = np.asarray(y, dtype=float)
    single = arr.ndim == 1
    q = as_matrix(arr.reshape(1, -1) if single else arr, "embedding query")
    if q.shape[1] != model.train_embedding.shape[1]:
        raise ValidationError("embedding query has the wrong dimension")
    k = kernel_matrix(model.kernel_y, q, model.train_embedding)
    centered = k - model.kernel_col_means[None, :]
    out = model.column_means[None, :] + centered @ model.beta_coefficients
    return out[0] if single else out
