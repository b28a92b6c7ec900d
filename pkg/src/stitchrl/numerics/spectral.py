"""Largest-singular-value estimation by power iteration.

The estimate after k iterations is ||W v_k|| with v_k the normalized right
iterate, which is non-decreasing in k and never exceeds the Frobenius norm.
The graph op treats the converged singular vectors as constants, so the
gradient of sigma with respect to W is the rank-one outer product u v^T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ContractViolationError, ShapeError
from .tensor import Array, Tensor


@dataclass
class SpectralEstimate:
    sigma: float
    u: Array  # left vector, unit norm (zeros when degenerate)
    v: Array  # right vector, unit norm (zeros when degenerate)
    degenerate: bool = False


def power_iteration(
    w: Array,
    iters: int = 20,
    v0: Array | None = None,
    rng: np.random.Generator | None = None,
) -> SpectralEstimate:
    """Estimate sigma_max(w) for a rank-2 array.

    `v0` warm-starts the right vector; otherwise it is drawn from `rng`
    (or a fixed fallback stream). A zero matrix is flagged degenerate and
    reported as sigma 0 since the iteration is undefined there.
    """
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 2:
        raise ShapeError(f"power iteration expects a matrix, got shape {w.shape}")
    if iters < 1:
        raise ContractViolationError("power iteration needs at least one iteration")
    n = w.shape[1]
    if not np.any(w):
        return SpectralEstimate(0.0, np.zeros(w.shape[0]), np.zeros(n), degenerate=True)
    if v0 is not None and np.linalg.norm(v0) > 0:
        v = np.asarray(v0, dtype=np.float64) / np.linalg.norm(v0)
    else:
        gen = rng if rng is not None else np.random.default_rng(0)
        v = gen.normal(size=n)
        v /= np.linalg.norm(v)
    for _ in range(iters):
        z = w.T @ (w @ v)
        nz = np.linalg.norm(z)
        if nz == 0.0:
            # v landed exactly in the null space; restart deterministically
            v = np.ones(n) / np.sqrt(n)
            continue
        v = z / nz
    wv = w @ v
    sigma = float(np.linalg.norm(wv))
    u = wv / sigma if sigma > 0 else np.zeros(w.shape[0])
    return SpectralEstimate(sigma, u, v)


def spectral_norm(
    w: Tensor,
    iters: int = 20,
    v0: Array | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[Tensor, SpectralEstimate]:
    """Differentiable sigma_max(W) node plus the raw estimate.

    The estimate carries the right vector for warm-starting the next call.
    Degenerate (zero) matrices yield a constant 0 node with no gradient.
    """
    est = power_iteration(w.data, iters=iters, v0=v0, rng=rng)
    if est.degenerate:
        return Tensor(0.0), est
    outer = np.outer(est.u, est.v)
    node = Tensor(
        est.sigma,
        op="spectral_norm",
        parents=(w,),
        grad_rules=(lambda g, outer=outer: g * outer,),
    )
    return node, est
