"""Domain types for monotone variational inequalities.

Operators, feasible sets with closed-form projections, convex regularizers,
and the regularized operator T = F + eps * grad(phi). Everything here is
immutable after construction; evaluation and projection are pure functions.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from numpy.typing import NDArray

Vector = NDArray[np.float64]

__all__ = [
    "Vector",
    "DimensionMismatchError",
    "EvaluationError",
    "CompositeProjectionError",
    "MonotoneMap",
    "FeasibleSet",
    "Regularizer",
    "RegularizedMap",
    "as_point",
    "evaluate_T",
    "project",
    "project_rows",
    "grad_or_subgrad",
    "box",
    "shifted_orthant",
    "hyperplane",
    "halfspace",
    "ball",
    "product_set",
    "composite_set",
    "affine_map",
    "tikhonov",
    "l1_regularizer",
    "sample_in_set",
    "probe_monotonicity",
    "probe_lipschitz",
    "probe_convexity",
    "probe_strong_monotonicity",
]


class DimensionMismatchError(ValueError):
    """Point dimension does not match the object it is used with."""


class EvaluationError(RuntimeError):
    """An operator produced NaN/Inf output."""


class CompositeProjectionError(ValueError):
    """Composite set used without a registered projector."""


def as_point(x, dim: Optional[int] = None) -> Vector:
    """Validate and return ``x`` as a finite 1-D float64 vector.

    Raises DimensionMismatchError on shape mismatch and ValueError on
    non-finite entries.
    """
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise DimensionMismatchError(f"expected a 1-D point, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ValueError("point has non-finite entries")
    return v


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonotoneMap:
    """An evaluable operator F: R^n -> R^n with declared constants.

    The declared Lipschitz constant and monotonicity class are trusted
    inputs; `probe_monotonicity` / `probe_lipschitz` provide seeded sampling
    checks. F is evaluated wherever its formula is defined — membership of
    the argument in the feasible set is the caller's contract.

    Fields
    ------
    dimension : ambient dimension n
    evaluate : F itself
    lipschitz_L : declared Lipschitz constant on the feasible set
    monotonicity_class : "monotone" or "strongly_monotone"
    mu : strong-monotonicity modulus (0 for merely monotone maps)
    evaluate_rows : optional vectorized form mapping an (m, n) array of
        points to an (m, n) array of values
    inner_gradient : optional y-gradient of y -> <F(y), x - y>, used by the
        dual-gap inner maximization; signature (x, Y_rows) -> rows
    """

    dimension: int
    evaluate: Callable[[Vector], Vector]
    lipschitz_L: float
    monotonicity_class: str = "monotone"
    mu: float = 0.0
    evaluate_rows: Optional[Callable[[np.ndarray], np.ndarray]] = None
    inner_gradient: Optional[Callable[[Vector, np.ndarray], np.ndarray]] = None
    name: str = ""

    def __post_init__(self):
        if self.lipschitz_L < 0:
            raise ValueError("lipschitz_L must be nonnegative")
        if self.monotonicity_class not in ("monotone", "strongly_monotone"):
            raise ValueError(f"unknown monotonicity class {self.monotonicity_class!r}")
        if self.monotonicity_class == "strongly_monotone" and not self.mu > 0:
            raise ValueError("strongly monotone map needs mu > 0")

    def __call__(self, x: Vector) -> Vector:
        v = np.asarray(self.evaluate(as_point(x, self.dimension)), dtype=float)
        if not np.all(np.isfinite(v)):
            raise EvaluationError(f"operator {self.name or 'F'} returned non-finite values at {x}")
        return v

    def rows(self, Y: np.ndarray) -> np.ndarray:
        """Evaluate F on each row of Y."""
        if self.evaluate_rows is not None:
            return np.asarray(self.evaluate_rows(Y), dtype=float)
        return np.array([self.evaluate(y) for y in Y], dtype=float)


def affine_map(M: np.ndarray, q, name: str = "affine") -> MonotoneMap:
    """F(x) = M x + q with M positive semidefinite (monotone affine map)."""
    M = np.asarray(M, dtype=float)
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    if M.shape != (n, n):
        raise DimensionMismatchError(f"matrix shape {M.shape} does not match offset length {n}")
    sym = 0.5 * (M + M.T)
    eigs = np.linalg.eigvalsh(sym)
    mu = float(max(eigs.min(), 0.0))
    L = float(np.linalg.norm(M, 2))
    cls = "strongly_monotone" if eigs.min() > 1e-12 else "monotone"
    return MonotoneMap(
        dimension=n,
        evaluate=lambda x: M @ x + q,
        evaluate_rows=lambda Y: Y @ M.T + q,
        inner_gradient=lambda x, Y: (x - Y) @ M - (Y @ M.T + q),
        lipschitz_L=L,
        monotonicity_class=cls,
        mu=mu if cls == "strongly_monotone" else 0.0,
        name=name,
    )


# ---------------------------------------------------------------------------
# feasible sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FeasibleSet:
    """A closed convex set exposed through a projection oracle.

    `project_rows`, when provided, projects each row of an (m, n) array
    (used by the vectorized inner solvers); the generic fallback loops.
    `description` is structured metadata (kind + parameters) so problem
    files and reports can name the set.
    """

    dimension: int
    project: Callable[[Vector], Vector]
    contains: Callable[[Vector, float], bool]
    description: dict = field(default_factory=dict)
    project_rows: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __call__(self, z: Vector) -> Vector:
        return self.project(as_point(z, self.dimension))


def project(feasible: FeasibleSet, z: Vector) -> Vector:
    """Euclidean projection of z onto the set."""
    return feasible(z)


def project_rows(feasible: FeasibleSet, Z: np.ndarray) -> np.ndarray:
    """Project each row of Z onto the set."""
    if feasible.project_rows is not None:
        return feasible.project_rows(np.asarray(Z, dtype=float))
    return np.array([feasible.project(z) for z in np.asarray(Z, dtype=float)])


def box(lower, upper) -> FeasibleSet:
    """Axis-aligned box {l <= x <= u}; ±inf entries drop the constraint."""
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(upper, dtype=float)
    if lo.shape != hi.shape or lo.ndim != 1:
        raise DimensionMismatchError("box bounds must be 1-D and of equal length")
    if np.any(lo > hi):
        raise ValueError("box has lower > upper")
    n = lo.shape[0]
    return FeasibleSet(
        dimension=n,
        project=lambda z: np.clip(z, lo, hi),
        project_rows=lambda Z: np.clip(Z, lo, hi),
        contains=lambda x, tol=1e-10: bool(np.all(x >= lo - tol) and np.all(x <= hi + tol)),
        description={"kind": "box", "lower": lo.tolist(), "upper": hi.tolist()},
    )


def shifted_orthant(lower) -> FeasibleSet:
    """Shifted nonnegative orthant {x >= l} (componentwise)."""
    lo = np.asarray(lower, dtype=float)
    s = box(lo, np.full_like(lo, np.inf))
    return replace(s, description={"kind": "shifted_orthant", "lower": lo.tolist()})


def hyperplane(normal, offset: float) -> FeasibleSet:
    """Affine hyperplane {<a, x> = b}."""
    a = np.asarray(normal, dtype=float)
    b = float(offset)
    nn = float(a @ a)
    if nn <= 0:
        raise ValueError("hyperplane normal must be nonzero")
    return FeasibleSet(
        dimension=a.shape[0],
        project=lambda z: z - ((a @ z - b) / nn) * a,
        project_rows=lambda Z: Z - np.outer((Z @ a - b) / nn, a),
        contains=lambda x, tol=1e-10: bool(abs(a @ x - b) <= tol * (1.0 + abs(b))),
        description={"kind": "hyperplane", "normal": a.tolist(), "offset": b},
    )


def halfspace(normal, offset: float) -> FeasibleSet:
    """Halfspace {<a, x> <= b}."""
    a = np.asarray(normal, dtype=float)
    b = float(offset)
    nn = float(a @ a)
    if nn <= 0:
        raise ValueError("halfspace normal must be nonzero")
    return FeasibleSet(
        dimension=a.shape[0],
        project=lambda z: z - (max(a @ z - b, 0.0) / nn) * a,
        project_rows=lambda Z: Z - np.outer(np.maximum(Z @ a - b, 0.0) / nn, a),
        contains=lambda x, tol=1e-10: bool(a @ x - b <= tol * (1.0 + abs(b))),
        description={"kind": "halfspace", "normal": a.tolist(), "offset": b},
    )


def ball(center, radius: float) -> FeasibleSet:
    """Euclidean ball {||x - c|| <= r}."""
    c = np.asarray(center, dtype=float)
    r = float(radius)
    if r < 0:
        raise ValueError("ball radius must be nonnegative")

    def proj(z):
        d = z - c
        nd = np.linalg.norm(d)
        return z if nd <= r else c + (r / nd) * d

    def proj_rows(Z):
        D = Z - c
        nd = np.linalg.norm(D, axis=1)
        scale = np.where(nd <= r, 1.0, r / np.maximum(nd, 1e-300))
        return c + scale[:, None] * D

    return FeasibleSet(
        dimension=c.shape[0],
        project=proj,
        project_rows=proj_rows,
        contains=lambda x, tol=1e-10: bool(np.linalg.norm(x - c) <= r + tol),
        description={"kind": "ball", "center": c.tolist(), "radius": r},
    )


def product_set(blocks: list[tuple[list[int], FeasibleSet]], dimension: int) -> FeasibleSet:
    """Product of sets acting on disjoint coordinate blocks.

    Exact closed-form projection: each block projects its own coordinates.
    Blocks must partition range(dimension).
    """
    idx = [np.asarray(i, dtype=int) for i, _ in blocks]
    sets = [s for _, s in blocks]
    all_idx = np.concatenate(idx) if idx else np.array([], dtype=int)
    if sorted(all_idx.tolist()) != list(range(dimension)):
        raise ValueError("product blocks must partition the coordinates")
    for i, s in zip(idx, sets):
        if s.dimension != len(i):
            raise DimensionMismatchError("block set dimension does not match its index count")

    def proj(z):
        y = np.array(z, dtype=float)
        for i, s in zip(idx, sets):
            y[i] = s.project(z[i])
        return y

    def proj_rows(Z):
        Y = np.array(Z, dtype=float)
        for i, s in zip(idx, sets):
            Y[:, i] = project_rows(s, Z[:, i])
        return Y

    def cont(x, tol=1e-10):
        return all(s.contains(x[i], tol) for i, s in zip(idx, sets))

    return FeasibleSet(
        dimension=dimension,
        project=proj,
        project_rows=proj_rows,
        contains=cont,
        description={"kind": "product",
                     "blocks": [{"indices": i.tolist(), "set": s.description}
                                for i, s in zip(idx, sets)]},
    )


def composite_set(dimension: int, members: list[FeasibleSet],
                  projector: Optional[Callable[[Vector], Vector]] = None) -> FeasibleSet:
    """General intersection; requires a user-supplied projector.

    No general QP projection is embedded — without `projector` this raises
    CompositeProjectionError at construction.
    """
    if projector is None:
        raise CompositeProjectionError(
            "composite set needs a registered projector (no general QP projection built in)")

    def cont(x, tol=1e-10):
        return all(s.contains(x, tol) for s in members)

    return FeasibleSet(
        dimension=dimension,
        project=projector,
        contains=cont,
        description={"kind": "composite", "members": [s.description for s in members]},
    )


# ---------------------------------------------------------------------------
# regularizers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Regularizer:
    """Convex regularizer phi with value and gradient/subgradient selection.

    rho is the strong-convexity modulus (0 if merely convex), lipschitz_M
    the gradient Lipschitz constant for smooth phi (None otherwise). For
    nonsmooth phi, `subgradient_select` must be a deterministic selection.
    """

    value: Callable[[Vector], float]
    gradient: Optional[Callable[[Vector], Vector]] = None
    subgradient_select: Optional[Callable[[Vector], Vector]] = None
    rho: float = 0.0
    lipschitz_M: Optional[float] = None
    smooth: bool = True
    name: str = ""

    def __post_init__(self):
        if self.smooth and self.gradient is None:
            raise ValueError("smooth regularizer needs a gradient")
        if not self.smooth and self.subgradient_select is None:
            raise ValueError("nonsmooth regularizer needs a subgradient selection")
        if self.rho < 0:
            raise ValueError("rho must be nonnegative")


def grad_or_subgrad(reg: Regularizer, x: Vector) -> Vector:
    """Gradient of phi at x, or the selected subgradient for nonsmooth phi."""
    g = reg.gradient(x) if reg.smooth else reg.subgradient_select(x)
    return np.asarray(g, dtype=float)


def tikhonov() -> Regularizer:
    """phi(x) = 0.5 ||x||^2: strongly convex with rho = 1, grad Lipschitz M = 1."""
    return Regularizer(
        value=lambda x: 0.5 * float(x @ x),
        gradient=lambda x: np.array(x, dtype=float),
        rho=1.0,
        lipschitz_M=1.0,
        smooth=True,
        name="l2",
    )


def l1_regularizer() -> Regularizer:
    """phi(x) = ||x||_1 with the sign selection (0 at zero coordinates)."""
    return Regularizer(
        value=lambda x: float(np.abs(x).sum()),
        subgradient_select=lambda x: np.sign(x),
        rho=0.0,
        lipschitz_M=None,
        smooth=False,
        name="l1",
    )


# ---------------------------------------------------------------------------
# regularized operator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegularizedMap:
    """T = F + eps * grad(phi) (selected subgradient in the nonsmooth case)."""

    base: MonotoneMap
    reg: Regularizer
    epsilon: float

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")

    def __call__(self, x: Vector) -> Vector:
        return evaluate_T(self, x)


def evaluate_T(mapping: RegularizedMap, x: Vector) -> Vector:
    """Evaluate T(x) = F(x) + eps * g(x), g the gradient or selected subgradient."""
    x = as_point(x, mapping.base.dimension)
    v = mapping.base(x)
    if mapping.epsilon > 0.0:
        v = v + mapping.epsilon * grad_or_subgrad(mapping.reg, x)
    if not np.all(np.isfinite(v)):
        raise EvaluationError("regularized operator returned non-finite values")
    return v


# ---------------------------------------------------------------------------
# sampling probes for declared constants
# ---------------------------------------------------------------------------

def sample_in_set(feasible: FeasibleSet, n: int, seed: int = 0, radius: float = 2.0,
                  center=None) -> np.ndarray:
    """n seeded sample points in the set: projected Gaussian perturbations."""
    rng = np.random.default_rng(seed)
    c = np.zeros(feasible.dimension) if center is None else np.asarray(center, dtype=float)
    Z = c + radius * rng.standard_normal((n, feasible.dimension))
    return project_rows(feasible, Z)


def probe_monotonicity(op: Callable[[Vector], Vector], feasible: FeasibleSet,
                       n_pairs: int = 200, seed: int = 0, radius: float = 2.0,
                       mu: float = 0.0) -> float:
    """Worst sampled margin of <F(x)-F(y), x-y> - mu ||x-y||^2 over pairs in the set.

    Nonnegative (up to tolerance) iff the declared monotonicity class holds
    on the sample.
    """
    X = sample_in_set(feasible, n_pairs, seed=seed, radius=radius)
    Y = sample_in_set(feasible, n_pairs, seed=seed + 1, radius=radius)
    worst = np.inf
    for x, y in zip(X, Y):
        dxy = x - y
        margin = float((np.asarray(op(x)) - np.asarray(op(y))) @ dxy) - mu * float(dxy @ dxy)
        worst = min(worst, margin)
    return worst


def probe_lipschitz(op: Callable[[Vector], Vector], feasible: FeasibleSet,
                    n_pairs: int = 200, seed: int = 0, radius: float = 2.0) -> float:
    """Largest sampled ratio ||F(x)-F(y)|| / ||x-y|| over pairs in the set."""
    X = sample_in_set(feasible, n_pairs, seed=seed, radius=radius)
    Y = sample_in_set(feasible, n_pairs, seed=seed + 1, radius=radius)
    worst = 0.0
    for x, y in zip(X, Y):
        den = float(np.linalg.norm(x - y))
        if den < 1e-14:
            continue
        worst = max(worst, float(np.linalg.norm(np.asarray(op(x)) - np.asarray(op(y)))) / den)
    return worst


def probe_convexity(reg: Regularizer, dimension: int, n_pairs: int = 200, seed: int = 0,
                    radius: float = 2.0) -> tuple[float, float]:
    """Worst margins of the midpoint and subgradient inequalities for phi.

    Returns (midpoint_margin, subgradient_margin); both nonnegative (to
    tolerance) for a convex phi with a valid (sub)gradient.
    """
    rng = np.random.default_rng(seed)
    X = radius * rng.standard_normal((n_pairs, dimension))
    Y = radius * rng.standard_normal((n_pairs, dimension))
    worst_mid = np.inf
    worst_sub = np.inf
    for x, y in zip(X, Y):
        mid = 0.5 * reg.value(x) + 0.5 * reg.value(y) - reg.value(0.5 * (x + y))
        worst_mid = min(worst_mid, float(mid))
        g = grad_or_subgrad(reg, x)
        sub = reg.value(y) - reg.value(x) - float(g @ (y - x))
        worst_sub = min(worst_sub, float(sub))
    return worst_mid, worst_sub


def probe_strong_monotonicity(op: Callable[[Vector], Vector], feasible: FeasibleSet,
                              modulus: float, n_pairs: int = 200, seed: int = 0,
                              radius: float = 2.0) -> float:
    """Worst margin of <T(x)-T(y), x-y> - modulus ||x-y||^2 on sampled pairs."""
    return probe_monotonicity(op, feasible, n_pairs=n_pairs, seed=seed, radius=radius,
                              mu=modulus)
