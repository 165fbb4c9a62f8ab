"""Gap functions for VI(F, Omega) and its regularizations.

The regularized gap theta_alpha and the D-gap theta_ab are evaluated through
their closed projection forms; the dual gap G is evaluated numerically by a
multistart projected gradient ascent on y -> <F(y), x - y> over Omega.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    FeasibleSet,
    MonotoneMap,
    Regularizer,
    Vector,
    as_point,
    grad_or_subgrad,
    project_rows,
)

__all__ = [
    "GapEvaluation",
    "DualGapConfig",
    "InnerSolveError",
    "y_alpha",
    "theta_alpha",
    "theta_ab",
    "dual_gap",
    "dual_gap_subgradient",
]


class InnerSolveError(RuntimeError):
    """The dual-gap inner maximization did not converge."""


@dataclass
class GapEvaluation:
    """Value of a gap function at a point plus the inner point that produced it.

    For theta_alpha / theta_ab the maximizer is y_alpha(x) (closed form, so
    converged is always True and inner_iterations 0); maximizer_beta
    additionally carries y_beta(x) for the D-gap. For the dual gap the
    maximizer is the inner argmax and converged reflects the inner solve.
    """

    value: float
    maximizer: Vector
    alpha: Optional[float]
    beta: Optional[float]
    epsilon: float
    converged: bool = True
    inner_iterations: int = 0
    maximizer_beta: Optional[Vector] = None


@dataclass(frozen=True)
class DualGapConfig:
    """Budget and tolerances for the dual-gap inner maximization.

    multistarts counts all starts including the query point itself (and a
    warm start when one is passed). radius=None means 1.5 * (1 + ||x||);
    step0=None starts the (adaptive) ascent step at 1/(1 + L) using the
    operator's declared Lipschitz constant.
    """

    multistarts: int = 8
    max_iterations: int = 300
    tol: float = 1e-7
    radius: Optional[float] = None
    seed: int = 0
    step0: Optional[float] = None
    fd_step: float = 1e-6


def _operator(problem, epsilon: float, reg: Optional[Regularizer]):
    """T = F + eps * grad(phi) as a plain callable; F itself for eps = 0."""
    F: MonotoneMap = problem.map
    if epsilon == 0.0 or reg is None:
        if epsilon != 0.0:
            raise ValueError("epsilon > 0 requires a regularizer")
        return lambda x: F(x)
    return lambda x: F(x) + epsilon * grad_or_subgrad(reg, x)


def y_alpha(problem, x: Vector, alpha: float, epsilon: float = 0.0,
            reg: Optional[Regularizer] = None) -> Vector:
    """Unique maximizer of the regularized gap: P_Omega(x - T(x)/alpha)."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    x = as_point(x, problem.map.dimension)
    T = _operator(problem, epsilon, reg)
    return problem.set.project(x - T(x) / alpha)


def theta_alpha(problem, x: Vector, alpha: float, epsilon: float = 0.0,
                reg: Optional[Regularizer] = None) -> GapEvaluation:
    """Regularized gap value <T(x), x-y> - (alpha/2)||y-x||^2 at y = y_alpha(x)."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    x = as_point(x, problem.map.dimension)
    T = _operator(problem, epsilon, reg)
    Tx = T(x)
    y = problem.set.project(x - Tx / alpha)
    r = x - y
    val = float(Tx @ r) - 0.5 * alpha * float(r @ r)
    return GapEvaluation(value=val, maximizer=y, alpha=alpha, beta=None, epsilon=epsilon)


def theta_ab(problem, x: Vector, alpha: float, beta: float, epsilon: float = 0.0,
             reg: Optional[Regularizer] = None) -> GapEvaluation:
    """D-gap value theta_alpha - theta_beta (requires 0 < alpha < beta).

    Nonnegative on all of R^n and zero exactly at solutions of the
    (regularized) variational inequality.
    """
    if not (0 < alpha < beta):
        raise ValueError(f"need 0 < alpha < beta, got alpha={alpha}, beta={beta}")
    x = as_point(x, problem.map.dimension)
    T = _operator(problem, epsilon, reg)
    Tx = T(x)
    ya = problem.set.project(x - Tx / alpha)
    yb = problem.set.project(x - Tx / beta)
    ra = x - ya
    rb = x - yb
    val = (float(Tx @ ra) - 0.5 * alpha * float(ra @ ra)
           - float(Tx @ rb) + 0.5 * beta * float(rb @ rb))
    return GapEvaluation(value=val, maximizer=ya, alpha=alpha, beta=beta, epsilon=epsilon,
                         maximizer_beta=yb)


# ---------------------------------------------------------------------------
# dual gap
# ---------------------------------------------------------------------------

def _inner_objective(F: MonotoneMap, x: Vector, Y: np.ndarray) -> np.ndarray:
    FY = F.rows(Y)
    return np.einsum("ij,ij->i", FY, x - Y)


def _inner_gradient(F: MonotoneMap, x: Vector, Y: np.ndarray, fd_step: float) -> np.ndarray:
    if F.inner_gradient is not None:
        return np.asarray(F.inner_gradient(x, Y), dtype=float)
    # central differences of y -> <F(y), x - y>
    G = np.empty_like(Y)
    for i, y in enumerate(Y):
        h = fd_step * (1.0 + float(np.linalg.norm(y)))
        for j in range(Y.shape[1]):
            e = np.zeros_like(y)
            e[j] = h
            fp = float(np.asarray(F(y + e)) @ (x - y - e))
            fm = float(np.asarray(F(y - e)) @ (x - y + e))
            G[i, j] = (fp - fm) / (2.0 * h)
    return G


def dual_gap(problem, x: Vector, config: Optional[DualGapConfig] = None,
             warm: Optional[Vector] = None) -> GapEvaluation:
    """Evaluate G(x) = sup_{y in Omega} <F(y), x - y> from below.

    Multistart projected gradient ascent with a per-start adaptive step
    (expand on success, halve on failure). Non-convergence is reported via
    the converged flag, never silently. For affine monotone F the inner
    problem is concave and the solve is reliable; for general F it is a
    documented heuristic.

    Parameters
    ----------
    problem : object with `map` (MonotoneMap) and `set` (FeasibleSet)
    x : evaluation point
    config : DualGapConfig, optional
    warm : optional warm-start inner point (used as an extra start)
    """
    cfg = config or DualGapConfig()
    F: MonotoneMap = problem.map
    omega: FeasibleSet = problem.set
    x = as_point(x, F.dimension)
    rng = np.random.default_rng(cfg.seed)
    radius = cfg.radius if cfg.radius is not None else 1.5 * (1.0 + float(np.linalg.norm(x)))

    starts = [x]
    if warm is not None:
        starts.append(as_point(warm, F.dimension))
    n_rand = max(cfg.multistarts - len(starts), 0)
    Y = np.vstack([np.array(starts),
                   x + radius * rng.standard_normal((n_rand, F.dimension))])
    Y = project_rows(omega, Y)
    step0 = cfg.step0 if cfg.step0 is not None else 1.0 / (1.0 + F.lipschitz_L)
    steps = np.full(len(Y), step0)

    f = _inner_objective(F, x, Y)
    f_prev_best = float(f.max())
    collapse = 3e-10 * (1.0 + radius)
    stall = 0
    used = 0
    for it in range(cfg.max_iterations):
        used = it + 1
        G = _inner_gradient(F, x, Y, cfg.fd_step)
        cand = project_rows(omega, Y + steps[:, None] * G)
        fc = _inner_objective(F, x, cand)
        better = fc > f
        Y = np.where(better[:, None], cand, Y)
        f = np.where(better, fc, f)
        steps = np.minimum(np.where(better, steps * 1.2, steps * 0.5),
                           4.0 * max(radius, 1.0))
        if used % 12 == 0:
            fb = float(f.max())
            if fb - f_prev_best <= 1e-17 * (1.0 + abs(fb)):
                stall += 1
                # leave only once the incumbent's step has collapsed, so a
                # kink maximizer can still be flagged as stationary below
                if stall >= 2 and steps[int(np.argmax(f))] <= collapse:
                    break
            else:
                stall = 0
            f_prev_best = fb

    k = int(np.argmax(f))
    ybar = Y[k]
    g = _inner_gradient(F, x, ybar[None, :], cfg.fd_step)[0]
    s = 0.1 / (1.0 + float(np.linalg.norm(g)))
    res = float(np.linalg.norm(ybar - omega.project(ybar + s * g))) / s
    converged = (res <= cfg.tol) or (steps[k] <= collapse)
    return GapEvaluation(value=float(f[k]), maximizer=ybar, alpha=None, beta=None,
                         epsilon=0.0, converged=converged, inner_iterations=used)


def dual_gap_subgradient(problem, x: Vector, config: Optional[DualGapConfig] = None) -> Vector:
    """Subgradient F(ybar) of G at x, ybar the inner maximizer.

    Raises InnerSolveError when the inner solve did not converge.
    """
    ev = dual_gap(problem, x, config)
    if not ev.converged:
        raise InnerSolveError(
            f"dual-gap inner maximization did not converge at x={x} "
            f"(value {ev.value:.3e} after {ev.inner_iterations} iterations)")
    return np.asarray(problem.map(ev.maximizer), dtype=float)
