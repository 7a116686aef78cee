"""Projections of high-dimensional sense embeddings to 2D.

Three methods: linear variance-maximizing projection (PCA), metric MDS by
stress majorization (SMACOF with the Guttman transform), and t-SNE with
per-row bandwidth calibration and momentum gradient descent. All three are
deterministic given their seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import DimsTooLarge, PerplexityTooLarge, TooFewPoints

TSNE_EXAGGERATION = 12.0
TSNE_EXAGGERATION_ITERS = 250
TSNE_LEARNING_RATE = 200.0
TSNE_MOMENTUM_EARLY = 0.5
TSNE_MOMENTUM_LATE = 0.8
TSNE_INIT_SCALE = 1e-4
TSNE_PERPLEXITY_TOL = 1e-4
TSNE_CALIBRATION_ITERS = 50


@dataclass(frozen=True)
class Projection:
    """2D coordinates aligned index-for-index with the input points."""

    coords: tuple[tuple[float, ...], ...]
    method: str
    diagnostics: dict[str, Any] = field(default_factory=dict)


def _as_points(points) -> np.ndarray:
    X = np.asarray(points, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"points must be a 2-D array-like, got ndim={X.ndim}")
    return X


def _coords(Y: np.ndarray) -> tuple[tuple[float, ...], ...]:
    return tuple(tuple(float(v) for v in row) for row in Y)


def _sq_dists(X: np.ndarray) -> np.ndarray:
    return np.sum((X[:, None, :] - X[None, :, :]) ** 2, axis=2)


def pca_project(points, out_dims: int = 2) -> Projection:
    """Project centered data onto the top eigenvectors of the sample
    covariance (eigenvalues descending).

    Sign convention: each component's largest-magnitude entry is positive,
    so outputs are reproducible across platforms.
    """
    X = _as_points(points)
    n, d = X.shape
    if n < 2:
        raise TooFewPoints(f"need >= 2 points, got {n}")
    if not 1 <= out_dims <= min(n, d):
        raise DimsTooLarge(f"out_dims={out_dims} exceeds min(n, d)={min(n, d)}")
    centered = X - X.mean(axis=0)
    cov = centered.T @ centered / (n - 1)
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals, kind="stable")[::-1][:out_dims]
    components = evecs[:, order]
    for col in range(components.shape[1]):
        peak = np.argmax(np.abs(components[:, col]))
        if components[peak, col] < 0:
            components[:, col] = -components[:, col]
    coords = centered @ components
    explained = [max(float(evals[i]), 0.0) for i in order]
    return Projection(
        coords=_coords(coords),
        method="pca",
        diagnostics={
            "explained_variance": explained,
            "components": [[float(v) for v in components[:, c]] for c in range(components.shape[1])],
        },
    )


def raw_stress(Y: np.ndarray, delta: np.ndarray) -> float:
    """Sum over i<j of (embedded distance - target distance)^2."""
    d = np.sqrt(_sq_dists(Y))
    iu = np.triu_indices(Y.shape[0], k=1)
    return float(np.sum((d[iu] - delta[iu]) ** 2))


def mds_project(
    points, out_dims: int = 2, max_iter: int = 300, tol: float = 1e-6, seed: int = 0
) -> Projection:
    """Metric MDS by SMACOF majorization of raw stress.

    Starts from seeded uniform noise in [-1, 1]^out_dims and iterates the
    Guttman transform, which never increases stress; stops once the
    per-iteration stress decrease falls below ``tol``.
    """
    X = _as_points(points)
    n = X.shape[0]
    if n < 2:
        raise TooFewPoints(f"need >= 2 points, got {n}")
    delta = np.sqrt(_sq_dists(X))
    rng = np.random.default_rng(seed)
    Y = rng.uniform(-1.0, 1.0, size=(n, out_dims))

    history = [raw_stress(Y, delta)]
    iterations = 0
    for it in range(1, max_iter + 1):
        d = np.sqrt(_sq_dists(Y))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(d > 0, delta / d, 0.0)
        np.fill_diagonal(ratio, 0.0)
        B = -ratio
        np.fill_diagonal(B, ratio.sum(axis=1))
        Y = B @ Y / n
        stress = raw_stress(Y, delta)
        history.append(stress)
        iterations = it
        if history[-2] - stress < tol:
            break

    return Projection(
        coords=_coords(Y),
        method="mds",
        diagnostics={
            "final_stress": history[-1],
            "iterations": iterations,
            "stress_history": history,
        },
    )


def conditional_gaussians(sq_dists: np.ndarray, perplexity: float) -> np.ndarray:
    """Per-row Gaussian conditionals calibrated by binary search so each
    row's perplexity (2^entropy) lands within 1e-4 of the target.

    ``sq_dists`` is the full squared-distance matrix; the diagonal never
    participates. Returns the row-stochastic conditional matrix.
    """
    n = sq_dists.shape[0]
    P = np.zeros((n, n))
    for i in range(n):
        row = np.delete(sq_dists[i], i)
        row = row - row.min()  # invariant under normalization, avoids underflow
        beta, lo, hi = 1.0, 0.0, math.inf
        p = np.full(row.shape, 1.0 / max(row.size, 1))
        for _ in range(TSNE_CALIBRATION_ITERS):
            p = np.exp(-row * beta)
            total = p.sum()
            p = p / total
            nz = p[p > 0]
            entropy_bits = float(-(nz * np.log2(nz)).sum())
            perp = 2.0**entropy_bits
            if abs(perp - perplexity) <= TSNE_PERPLEXITY_TOL:
                break
            if perp > perplexity:
                lo = beta
                beta = beta * 2.0 if math.isinf(hi) else (beta + hi) / 2.0
            else:
                hi = beta
                beta = (lo + beta) / 2.0
        P[i, np.arange(n) != i] = p
    return P


def joint_probabilities(points, perplexity: float) -> np.ndarray:
    """Symmetrized, normalized neighbor distribution: sums to 1 overall."""
    X = _as_points(points)
    P_cond = conditional_gaussians(_sq_dists(X), perplexity)
    return (P_cond + P_cond.T) / (2.0 * X.shape[0])


def _student_t_kernel(Y: np.ndarray) -> np.ndarray:
    num = 1.0 / (1.0 + _sq_dists(Y))
    np.fill_diagonal(num, 0.0)
    return num


def kl_divergence(P: np.ndarray, Y: np.ndarray) -> float:
    """KL(P || Q) with Student-t Q over the embedding; zero-P terms drop out."""
    num = _student_t_kernel(Y)
    Q = num / num.sum()
    mask = P > 0
    return float(np.sum(P[mask] * np.log(P[mask] / Q[mask])))


def kl_gradient(P: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Exact gradient of ``kl_divergence`` with respect to Y."""
    num = _student_t_kernel(Y)
    Q = num / num.sum()
    W = (P - Q) * num
    return 4.0 * (W.sum(axis=1)[:, None] * Y - W @ Y)


def tsne_project(
    points,
    out_dims: int = 2,
    perplexity: float | None = None,
    max_iter: int = 1000,
    seed: int = 0,
) -> Projection:
    """t-SNE: calibrated Gaussian neighbor distributions in the input space,
    Student-t in the embedding, KL minimized by momentum gradient descent.

    Fixed schedule: learning rate 200, momentum 0.5 switching to 0.8 at
    iteration 250, early exaggeration x12 for the first 250 iterations,
    seeded Gaussian init with sigma 1e-4. The default perplexity shrinks
    with n because per-word sense counts are tiny.
    """
    X = _as_points(points)
    n = X.shape[0]
    if n < 4:
        raise TooFewPoints(f"need >= 4 points, got {n}")
    if perplexity is None:
        perplexity = min(30, max(2, (n - 1) // 3))
    if perplexity >= n:
        raise PerplexityTooLarge(f"perplexity {perplexity} must be < n = {n}")

    P = joint_probabilities(X, perplexity)
    rng = np.random.default_rng(seed)
    Y = rng.normal(0.0, TSNE_INIT_SCALE, size=(n, out_dims))
    velocity = np.zeros_like(Y)
    kl_at_switch: float | None = None

    for t in range(max_iter):
        exaggerating = t < TSNE_EXAGGERATION_ITERS
        P_t = P * TSNE_EXAGGERATION if exaggerating else P
        grad = kl_gradient(P_t, Y)
        momentum = TSNE_MOMENTUM_EARLY if exaggerating else TSNE_MOMENTUM_LATE
        velocity = momentum * velocity - TSNE_LEARNING_RATE * grad
        Y = Y + velocity
        Y = Y - Y.mean(axis=0)
        if t + 1 == TSNE_EXAGGERATION_ITERS:
            kl_at_switch = kl_divergence(P, Y)

    diagnostics: dict[str, Any] = {
        "final_kl": kl_divergence(P, Y),
        "iterations": max_iter,
        "perplexity": float(perplexity),
    }
    if kl_at_switch is not None:
        diagnostics["kl_iter_250"] = kl_at_switch
    return Projection(coords=_coords(Y), method="tsne", diagnostics=diagnostics)


METHODS = {
    "pca": lambda points, seed: pca_project(points),
    "mds": lambda points, seed: mds_project(points, seed=seed),
    "tsne": lambda points, seed: tsne_project(points, seed=seed),
}


def run_projection(points, method: str, seed: int = 0) -> Projection:
    """Dispatch to the named projection method."""
    try:
        fn = METHODS[method]
    except KeyError:
        raise ValueError(f"unknown projection method {method!r}; choose from {sorted(METHODS)}")
    return fn(points, seed)
