"""Built-in problem instances with solution oracles and brute-force gap oracles.

A best-approximation benchmark (a monotone, non-strongly-monotone VI with
a segment of solutions), seeded affine monotone VIs, and small strongly
monotone problems with closed-form solutions. Grid oracles cover dimensions
one and two for cross-checking the explicit gap formulas.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .core import (
    FeasibleSet,
    MonotoneMap,
    Regularizer,
    Vector,
    affine_map,
    as_point,
    ball,
    box,
    hyperplane,
    product_set,
    project_rows,
    shifted_orthant,
)
from .core import grad_or_subgrad

__all__ = [
    "SolutionOracle",
    "ProblemInstance",
    "example_5_1",
    "affine_monotone",
    "strongly_monotone_quadratic",
    "sharp_quadratic_ball",
    "brute_force_gap",
    "brute_force_dual_gap",
    "get_problem",
    "BUILTIN_PROBLEMS",
]


@dataclass(frozen=True)
class SolutionOracle:
    """Closed-form (or cached high-accuracy) description of S0."""

    distance_to_S0: Callable[[Vector], float]
    sample_S0: Callable[[int, int], np.ndarray]  # (count, seed) -> rows


@dataclass(frozen=True)
class ProblemInstance:
    """A variational inequality problem: operator, set, and optional oracles."""

    name: str
    dimension: int
    map: MonotoneMap
    set: FeasibleSet
    solution_oracle: Optional[SolutionOracle] = None
    constants: dict = None
    default_x0: Optional[Vector] = None
    bounding_box: Optional[tuple] = None  # (lower, upper) arrays for grid oracles


# ---------------------------------------------------------------------------
# best-approximation benchmark
# ---------------------------------------------------------------------------

_BA_SHIFT = np.array([0.0, -0.25, 0.25])


def example_5_1() -> ProblemInstance:
    """Best-approximation instance: F(x) = x - P_C(x) on a half-plane.

    C is the shifted orthant {x >= (0, -1/4, 1/4)} and Omega the set
    {x : x2 + x3 = -1, x1 <= 1}. F is monotone (not strongly) with declared
    Lipschitz constant 2, and the solution set is the segment
    {(t, -3/4, -1/4) : t in [0, 1]}.
    """

    def F(x):
        return x - np.maximum(x, _BA_SHIFT)

    def F_rows(Y):
        return Y - np.maximum(Y, _BA_SHIFT)

    def inner_grad(x, Y):
        # d/dy <F(y), x - y> = J_F(y)(x - y) - F(y), J_F = diag(y < shift) a.e.
        FY = Y - np.maximum(Y, _BA_SHIFT)
        return (Y < _BA_SHIFT).astype(float) * (x - Y) - FY

    F_map = MonotoneMap(
        dimension=3,
        evaluate=F,
        evaluate_rows=F_rows,
        inner_gradient=inner_grad,
        lipschitz_L=2.0,
        monotonicity_class="monotone",
        name="I_minus_P_C",
    )
    omega = product_set(
        [([0], box([-np.inf], [1.0])), ([1, 2], hyperplane([1.0, 1.0], -1.0))],
        dimension=3,
    )

    def dist_S0(x):
        t = min(max(float(x[0]), 0.0), 1.0)
        return float(np.linalg.norm(np.asarray(x, dtype=float)
                                    - np.array([t, -0.75, -0.25])))

    def sample_S0(count, seed=0):
        t = np.random.default_rng(seed).uniform(0.0, 1.0, size=count)
        out = np.tile(np.array([0.0, -0.75, -0.25]), (count, 1))
        out[:, 0] = t
        return out

    return ProblemInstance(
        name="example5_1",
        dimension=3,
        map=F_map,
        set=omega,
        solution_oracle=SolutionOracle(distance_to_S0=dist_S0, sample_S0=sample_S0),
        constants={"L": 2.0},
        default_x0=np.array([1.0, -2.0, 1.0]),
        bounding_box=(np.array([-2.0, -3.0, -3.0]), np.array([2.0, 2.0, 2.0])),
    )


# ---------------------------------------------------------------------------
# synthetic instances
# ---------------------------------------------------------------------------

_AFFINE_CACHE: dict = {}


def affine_monotone(n: int, seed: int = 0, set_kind: str = "box") -> ProblemInstance:
    """Seeded affine monotone VI: F(x) = Mx + q with M = A^T A.

    set_kind "box" gives Omega = [-1, 1]^n, "orthant" a seeded shifted
    orthant. For M positive definite the instance carries a solution oracle
    obtained from a residual-certified high-accuracy solve (cached by
    (n, seed, set_kind)).
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    key = (n, seed, set_kind)
    if key in _AFFINE_CACHE:
        return _AFFINE_CACHE[key]
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n))
    M = A.T @ A
    q = rng.standard_normal(n)
    F_map = affine_map(M, q, name=f"affine[{n},{seed}]")
    if set_kind == "box":
        omega = box(-np.ones(n), np.ones(n))
        bbox = (-np.ones(n), np.ones(n))
    elif set_kind == "orthant":
        shift = rng.uniform(-1.0, 0.0, size=n)
        omega = shifted_orthant(shift)
        bbox = (shift, shift + 2.0)
    else:
        raise ValueError(f"unknown set_kind {set_kind!r}")
    inst = ProblemInstance(
        name=f"affine_monotone(n={n}, seed={seed}, {set_kind})",
        dimension=n,
        map=F_map,
        set=omega,
        constants={"L": F_map.lipschitz_L, "mu": F_map.mu},
        default_x0=omega.project(np.zeros(n)),
        bounding_box=bbox,
    )
    if F_map.monotonicity_class == "strongly_monotone":
        from .solvers import reference_solution

        xstar, _ = reference_solution(inst, 0.0, None, tol_residual=1e-12)
        oracle = SolutionOracle(
            distance_to_S0=lambda x: float(np.linalg.norm(np.asarray(x) - xstar)),
            sample_S0=lambda count, seed=0: np.tile(xstar, (count, 1)),
        )
        inst = replace(inst, solution_oracle=oracle)
    _AFFINE_CACHE[key] = inst
    return inst


def strongly_monotone_quadratic(n: int = 3, seed: int = 0) -> ProblemInstance:
    """F(x) = x - c on the box [-1, 1]^n; solution P_box(c) in closed form.

    c is seeded with entries in [-2, 2], so some coordinates clamp. With the
    quadratic regularizer the regularized solution is P_box(c / (1 + eps)).
    """
    rng = np.random.default_rng(seed)
    c = rng.uniform(-2.0, 2.0, size=n)
    F_map = affine_map(np.eye(n), -c, name=f"identity_minus_target[{n},{seed}]")
    omega = box(-np.ones(n), np.ones(n))
    xstar = np.clip(c, -1.0, 1.0)
    oracle = SolutionOracle(
        distance_to_S0=lambda x: float(np.linalg.norm(np.asarray(x) - xstar)),
        sample_S0=lambda count, seed=0: np.tile(xstar, (count, 1)),
    )
    return ProblemInstance(
        name=f"strongly_monotone_quadratic(n={n}, seed={seed})",
        dimension=n,
        map=F_map,
        set=omega,
        solution_oracle=oracle,
        constants={"L": 1.0, "mu": 1.0, "c": c},
        default_x0=np.zeros(n),
        bounding_box=(-np.ones(n), np.ones(n)),
    )


def sharp_quadratic_ball(n: int = 2) -> ProblemInstance:
    """F(x) = 4x on the unit ball: G(x) = ||x||^2 = d(x, S0)^2 exactly.

    The inner supremum sup_y <4y, x-y> is attained at y = x/2 for ||x|| <= 2,
    giving G(x) = ||x||^2 on the whole ball and S0 = {0}; weakly sharp of
    order 2 with sharpness constant exactly 1.
    """
    F_map = affine_map(4.0 * np.eye(n), np.zeros(n), name=f"four_x[{n}]")
    omega = ball(np.zeros(n), 1.0)
    oracle = SolutionOracle(
        distance_to_S0=lambda x: float(np.linalg.norm(x)),
        sample_S0=lambda count, seed=0: np.zeros((count, n)),
    )
    return ProblemInstance(
        name=f"sharp_quadratic_ball(n={n})",
        dimension=n,
        map=F_map,
        set=omega,
        solution_oracle=oracle,
        constants={"L": 4.0, "mu": 4.0, "alpha_sharp": 1.0, "gamma": 2.0},
        default_x0=np.zeros(n),
        bounding_box=(-np.ones(n), np.ones(n)),
    )


# ---------------------------------------------------------------------------
# grid oracles (dimensions 1 and 2)
# ---------------------------------------------------------------------------

def _grid_points(problem, grid_resolution, bounding_box):
    n = problem.dimension
    if n > 2:
        raise ValueError("grid oracles support dimensions 1 and 2 only")
    bbox = bounding_box if bounding_box is not None else problem.bounding_box
    if bbox is None:
        raise ValueError("grid oracle needs a bounding box")
    lo = np.asarray(bbox[0], dtype=float)
    hi = np.asarray(bbox[1], dtype=float)
    diam = float(np.linalg.norm(hi - lo))
    h = grid_resolution if grid_resolution is not None else 1e-3 * diam
    axes = [np.arange(lo[i], hi[i] + 0.5 * h, h) for i in range(n)]
    if n == 1:
        Y = axes[0][:, None]
    else:
        g0, g1 = np.meshgrid(axes[0], axes[1], indexing="ij")
        Y = np.column_stack([g0.ravel(), g1.ravel()])
    # keep grid nodes that lie in Omega (within projection tolerance)
    P = project_rows(problem.set, Y)
    keep = np.linalg.norm(P - Y, axis=1) <= 1e-9 * (1.0 + np.linalg.norm(hi - lo))
    if not np.any(keep):
        raise ValueError("bounding box does not intersect the feasible set")
    return Y[keep], h


def brute_force_gap(problem, x: Vector, alpha: float, epsilon: float = 0.0,
                    grid_resolution: Optional[float] = None,
                    reg: Optional[Regularizer] = None,
                    bounding_box=None) -> float:
    """Grid maximization of <T(x), x-y> - (alpha/2)||y-x||^2 over an Omega grid.

    Independent oracle for the explicit regularized-gap formula; agrees with
    it to within O(grid_resolution). Dimensions 1 and 2 only.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    x = as_point(x, problem.dimension)
    Y, _ = _grid_points(problem, grid_resolution, bounding_box)
    Tx = problem.map(x)
    if epsilon > 0.0:
        if reg is None:
            raise ValueError("epsilon > 0 requires a regularizer")
        Tx = Tx + epsilon * grad_or_subgrad(reg, x)
    diffs = x - Y
    vals = diffs @ Tx - 0.5 * alpha * np.einsum("ij,ij->i", diffs, diffs)
    return float(vals.max())


def brute_force_dual_gap(problem, x: Vector, grid_resolution: Optional[float] = None,
                         bounding_box=None) -> float:
    """Grid maximization of <F(y), x-y> over an Omega grid (dims 1 and 2)."""
    x = as_point(x, problem.dimension)
    Y, _ = _grid_points(problem, grid_resolution, bounding_box)
    FY = problem.map.rows(Y)
    vals = np.einsum("ij,ij->i", FY, x - Y)
    return float(vals.max())


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

BUILTIN_PROBLEMS = {
    "example5_1": lambda seed=0: example_5_1(),
    "affine1d": lambda seed=0: affine_monotone(1, seed),
    "affine2d": lambda seed=0: affine_monotone(2, seed),
    "affine5d": lambda seed=0: affine_monotone(5, seed),
    "box_quadratic3d": lambda seed=0: strongly_monotone_quadratic(3, seed),
    "sharp_ball2d": lambda seed=0: sharp_quadratic_ball(2),
}


def get_problem(name: str, seed: int = 0) -> ProblemInstance:
    """Look up a built-in instance by registry name."""
    try:
        factory = BUILTIN_PROBLEMS[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_PROBLEMS))
        raise KeyError(f"unknown problem {name!r}; built-ins: {known}") from None
    return factory(seed=seed)
