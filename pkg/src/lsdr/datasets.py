"""Seeded synthetic dataset generators.

Every family is a pure function of (spec, seed): regenerating with the same
spec gives the identical cloud. Default parameters are sized so the standard
qualitative behaviours (separated clusters, resolvable spiral windings,
closed knots) appear at a few hundred points.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

__all__ = ["DatasetSpec", "generate", "spiral_with_angle", "FAMILIES"]

FAMILIES = (
    "spiral",
    "swiss_roll",
    "gaussian_clusters",
    "uniform_hypercube",
    "sphere_surface",
    "grid",
    "linked_circles",
    "unlinked_circles",
    "trefoil_knot",
    "two_linear_clusters",
    "circular_clusters",
)


@dataclass(frozen=True)
class DatasetSpec:
    """Family name, size, noise scale and family-specific parameters."""

    family: str
    n: int
    p: int | None = None
    noise: float | None = None
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown dataset family {self.family!r}")
        if self.n < 1:
            raise ValidationError(f"dataset size must be positive, got {self.n}")


def _rng(spec: DatasetSpec) -> np.random.Generator:
    return np.random.default_rng([int(spec.seed) & 0xFFFFFFFF, 0xD5])


def spiral_with_angle(spec: DatasetSpec) -> tuple[np.ndarray, np.ndarray]:
    """Planar spiral r = r0 + pitch * theta; returns the cloud and theta.

    Points are stratified uniformly in arc length (one per equal-length cell,
    using s = r0 t + pitch t^2 / 2), so the outer windings are as densely
    covered as the inner ones and the sorted rows are monotone in the
    generating angle. The noise parameter is the half-width of a uniform
    coordinate jitter; bounded noise keeps the strip's edges hard, which the
    boundary detection relies on.
    """
    rng = _rng(spec)
    turns = float(spec.params.get("turns", 1.25))
    r0 = float(spec.params.get("r0", 1.0))
    pitch = float(spec.params.get("pitch", 0.5))
    noise = 0.6 if spec.noise is None else spec.noise
    span = turns * 2.0 * np.pi
    total_arc = r0 * span + 0.5 * pitch * span**2
    s = np.sort((np.arange(spec.n) + rng.uniform(0.0, 1.0, spec.n)) * (total_arc / spec.n))
    theta = (-r0 + np.sqrt(r0**2 + 2.0 * pitch * s)) / pitch
    r = r0 + pitch * theta
    pts = np.c_[r * np.cos(theta), r * np.sin(theta)]
    pts += rng.uniform(-noise, noise, pts.shape)
    return pts, theta


def _swiss_roll(spec: DatasetSpec, rng) -> np.ndarray:
    noise = 0.05 if spec.noise is None else spec.noise
    height = float(spec.params.get("height", 10.0))
    t = rng.uniform(1.5 * np.pi, 4.5 * np.pi, spec.n)
    h = rng.uniform(0.0, height, spec.n)
    pts = np.c_[t * np.cos(t), h, t * np.sin(t)]
    return pts + rng.normal(0.0, noise, pts.shape)


def _gaussian_clusters(spec: DatasetSpec, rng) -> np.ndarray:
    p = spec.p or 10
    clusters = int(spec.params.get("clusters", 3))
    sigma = 1.0 if spec.noise is None else spec.noise
    gaps = spec.params.get("gaps")
    if gaps is None:
        gaps = [float(spec.params.get("separation", 10.0))] * (clusters - 1)
    if len(gaps) != clusters - 1:
        raise ValidationError(f"need {clusters - 1} gaps for {clusters} clusters, got {len(gaps)}")
    centers = np.zeros((clusters, p))
    for c in range(1, clusters):
        centers[c] = centers[c - 1]
        centers[c, 0] += float(gaps[c - 1])
    sizes = [spec.n // clusters] * clusters
    for extra in range(spec.n - sum(sizes)):
        sizes[extra] += 1
    rows = [rng.normal(0.0, sigma, (size, p)) + centers[c] for c, size in enumerate(sizes)]
    return np.vstack(rows)


def _uniform_hypercube(spec: DatasetSpec, rng) -> np.ndarray:
    p = spec.p or 10
    return rng.uniform(0.0, 1.0, (spec.n, p))


def _sphere_surface(spec: DatasetSpec, rng) -> np.ndarray:
    noise = 0.0 if spec.noise is None else spec.noise
    raw = rng.standard_normal((spec.n, 3))
    raw /= np.linalg.norm(raw, axis=1)[:, None]
    if noise:
        raw *= 1.0 + rng.normal(0.0, noise, spec.n)[:, None]
    return raw


def _grid(spec: DatasetSpec, rng) -> np.ndarray:
    noise = 0.0 if spec.noise is None else spec.noise
    side = int(np.ceil(np.sqrt(spec.n)))
    xs, ys = np.meshgrid(np.arange(side, dtype=float), np.arange(side, dtype=float))
    pts = np.c_[xs.ravel(), ys.ravel()][: spec.n]
    if noise:
        pts = pts + rng.normal(0.0, noise, pts.shape)
    return pts


def _circle(n: int, rng) -> np.ndarray:
    t = np.sort(rng.uniform(0.0, 2.0 * np.pi, n))
    return np.c_[np.cos(t), np.sin(t), np.zeros(n)]


def _linked_circles(spec: DatasetSpec, rng) -> np.ndarray:
    noise = 0.02 if spec.noise is None else spec.noise
    half = spec.n // 2
    first = _circle(half, rng)
    second = _circle(spec.n - half, rng)
    # rotate the second circle into the xz-plane and thread it through the first
    second = second[:, [0, 2, 1]]
    second[:, 0] += 1.0
    pts = np.vstack([first, second])
    return pts + rng.normal(0.0, noise, pts.shape)


def _unlinked_circles(spec: DatasetSpec, rng) -> np.ndarray:
    noise = 0.02 if spec.noise is None else spec.noise
    half = spec.n // 2
    first = _circle(half, rng)
    second = _circle(spec.n - half, rng)
    second[:, 0] += 3.0
    pts = np.vstack([first, second])
    return pts + rng.normal(0.0, noise, pts.shape)


def _trefoil_knot(spec: DatasetSpec, rng) -> np.ndarray:
    noise = 0.02 if spec.noise is None else spec.noise
    t = np.sort(rng.uniform(0.0, 2.0 * np.pi, spec.n))
    pts = np.c_[
        np.sin(t) + 2.0 * np.sin(2.0 * t),
        np.cos(t) - 2.0 * np.cos(2.0 * t),
        -np.sin(3.0 * t),
    ]
    return pts + rng.normal(0.0, noise, pts.shape)


def _two_linear_clusters(spec: DatasetSpec, rng) -> np.ndarray:
    noise = 0.15 if spec.noise is None else spec.noise
    length = float(spec.params.get("length", 10.0))
    separation = float(spec.params.get("separation", 2.0))
    half = spec.n // 2
    xs_a = rng.uniform(0.0, length, half)
    xs_b = rng.uniform(0.0, length, spec.n - half)
    a = np.c_[xs_a, np.zeros(half)]
    b = np.c_[xs_b, np.full(spec.n - half, separation)]
    pts = np.vstack([a, b])
    return pts + rng.normal(0.0, noise, pts.shape)


def _circular_clusters(spec: DatasetSpec, rng) -> np.ndarray:
    noise = 0.1 if spec.noise is None else spec.noise
    clusters = int(spec.params.get("clusters", 6))
    radius = float(spec.params.get("radius", 5.0))
    angles = 2.0 * np.pi * np.arange(clusters) / clusters
    centers = np.c_[radius * np.cos(angles), radius * np.sin(angles), np.zeros(clusters)]
    sizes = [spec.n // clusters] * clusters
    for extra in range(spec.n - sum(sizes)):
        sizes[extra] += 1
    rows = [rng.normal(0.0, noise, (size, 3)) + centers[c] for c, size in enumerate(sizes)]
    return np.vstack(rows)


def generate(spec: DatasetSpec) -> np.ndarray:
    """Generate the point cloud for ``spec``; exactly ``spec.n`` rows."""
    rng = _rng(spec)
    if spec.family == "spiral":
        pts, _ = spiral_with_angle(spec)
    elif spec.family == "swiss_roll":
        pts = _swiss_roll(spec, rng)
    elif spec.family == "gaussian_clusters":
        pts = _gaussian_clusters(spec, rng)
    elif spec.family == "uniform_hypercube":
        pts = _uniform_hypercube(spec, rng)
    elif spec.family == "sphere_surface":
        pts = _sphere_surface(spec, rng)
    elif spec.family == "grid":
        pts = _grid(spec, rng)
    elif spec.family == "linked_circles":
        pts = _linked_circles(spec, rng)
    elif spec.family == "unlinked_circles":
        pts = _unlinked_circles(spec, rng)
    elif spec.family == "trefoil_knot":
        pts = _trefoil_knot(spec, rng)
    elif spec.family == "two_linear_clusters":
        pts = _two_linear_clusters(spec, rng)
    elif spec.family == "circular_clusters":
        pts = _circular_clusters(spec, rng)
    else:  # pragma: no cover - guarded in DatasetSpec
        raise ValidationError(f"unknown dataset family {spec.family!r}")
    assert pts.shape[0] == spec.n
    return pts
