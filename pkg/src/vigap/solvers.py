"""Descent solvers for the regularized variational inequality models.

Three layers:

* a derivative-free D-gap descent (direction switching between
  y_alpha - y_beta and y_alpha - x, Armijo backtracking on sqrt(theta_ab))
  for VI(T_eps, Omega) with T_eps = F + eps * grad(phi);
* a sequential inexact outer loop that shrinks eps while warm-starting each
  inner solve, stopping each inner iteration through the computable D-gap
  error bound;
* a projected subgradient method for the regularized dual-gap model
  min_{Omega} G + eps * phi.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from . import bounds
from .core import Regularizer, Vector, as_point, grad_or_subgrad
from .gap import DualGapConfig, GapEvaluation, dual_gap, theta_ab, y_alpha

__all__ = [
    "StepFailureError",
    "MaxIterationsError",
    "DualGapUnreliableError",
    "InnerConfig",
    "OuterConfig",
    "SubgradientConfig",
    "InnerRecord",
    "InnerTrace",
    "OuterRecord",
    "SolverTrace",
    "PgeRecord",
    "PgeTrace",
    "estimate_L_theta",
    "li_ng_direction",
    "armijo_step",
    "solve_inner",
    "sequential_inexact_descent",
    "solve_pge",
    "reference_solution",
]

BRANCH_GAP_DIFF = "y_alpha_minus_y_beta"
BRANCH_RESIDUAL = "y_alpha_minus_x"


class StepFailureError(RuntimeError):
    """Armijo backtracking exhausted without sufficient decrease.

    Signals mis-set constants or the numerical tolerance floor; carries the
    point, direction and gap value where the search failed.
    """

    def __init__(self, message, x=None, d=None, theta=None, backtracks=None):
        super().__init__(message)
        self.x = x
        self.d = d
        self.theta = theta
        self.backtracks = backtracks


class MaxIterationsError(RuntimeError):
    """Iteration budget exhausted; carries the best point and partial trace."""

    def __init__(self, message, x=None, trace=None):
        super().__init__(message)
        self.x = x
        self.trace = trace


class DualGapUnreliableError(RuntimeError):
    """Too many non-converged dual-gap inner solves during solve_pge."""


# ---------------------------------------------------------------------------
# configs and traces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InnerConfig:
    """Parameters of the D-gap descent for one regularization level.

    c and delta default to the admissible bounds
    c <= min{1, (beta-alpha)/(2(L_theta+beta))} and
    delta <= min{sqrt((beta-alpha)/2)/2, sqrt(2) c mu / sqrt(beta-alpha)}
    with mu = eps*rho; explicit values are capped at those bounds when a
    solve resolves its constants. L_theta_estimate=None triggers a seeded
    sampling estimate over pairs in the initial level set.
    """

    alpha: float = 1.0
    beta: float = 2.0
    gamma: float = 0.9
    c: Optional[float] = None
    delta: Optional[float] = None
    max_backtracks: int = 60
    max_iterations: int = 400_000
    L_theta_estimate: Optional[float] = None
    L_theta_samples: int = 200
    floor: float = 1e-16
    seed: int = 0
    experimental_nonsmooth: bool = False
    stagnation_tol: float = 1e-13

    def __post_init__(self):
        if not (0 < self.alpha < self.beta):
            raise ValueError("need 0 < alpha < beta")
        if not (0 < self.gamma < 1):
            raise ValueError("gamma must lie in (0, 1)")
        if self.max_backtracks < 1 or self.max_iterations < 1:
            raise ValueError("iteration budgets must be positive")


@dataclass(frozen=True)
class OuterConfig:
    """Schedule for the sequential inexact descent.

    epsilons=None builds the geometric default eps0 * ratio^k truncated at
    max_outer terms. tau is the (stable) per-level error tolerance; a tuple
    gives per-level values.
    """

    epsilons: Optional[tuple] = None
    eps0: float = 0.5
    ratio: float = 0.5
    max_outer: int = 12
    tau: float = 1e-6
    inner: InnerConfig = field(default_factory=InnerConfig)
    inner_factory: Optional[Callable[[int, float], InnerConfig]] = None

    def schedule(self) -> tuple:
        if self.epsilons is not None:
            eps = tuple(float(e) for e in self.epsilons)
        else:
            eps = tuple(self.eps0 * self.ratio ** k for k in range(self.max_outer))
        if not eps or any(e <= 0 for e in eps):
            raise ValueError("epsilon schedule must be positive")
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise ValueError("epsilon schedule must be strictly decreasing")
        return eps

    def taus(self, n: int) -> tuple:
        t = self.tau
        if np.isscalar(t):
            t = (float(t),) * n
        else:
            t = tuple(float(v) for v in t)
            if len(t) != n:
                raise ValueError("tau sequence length must match the epsilon schedule")
        if any(v <= 0 for v in t):
            raise ValueError("tau must be positive")
        return t


@dataclass
class InnerRecord:
    j: int
    theta: float
    m: int
    branch: str
    step_norm: float
    x: Vector


@dataclass
class InnerTrace:
    epsilon: float
    tau: float
    p: float
    c: float
    delta: float
    L_theta: float
    records: list
    status: str
    iterations: int
    theta_final: float


@dataclass
class OuterRecord:
    k: int
    epsilon: float
    x: Vector
    theta: float
    p: float
    radius: Optional[float]
    dist_S0: Optional[float]
    inner_iterations: int
    status: str
    wall_time_s: float = 0.0


@dataclass
class SolverTrace:
    outer: list
    inner: list


@dataclass
class PgeRecord:
    j: int
    objective: float
    gap_value: float
    best_objective: float
    step: float
    inner_converged: bool


@dataclass
class PgeTrace:
    records: list
    iterations: int
    n_nonconverged: int
    best_objective: float


@dataclass(frozen=True)
class SubgradientConfig:
    """Budget and step rule for the projected subgradient solver.

    step_mode "polyak": gap-anchored steps (f - f_best + delta_j)/||g_T||^2
    with geometrically decaying relaxation delta_j and displacement cap,
    where g_T is the tangential (projected) part of the subgradient.
    step_mode "sqrt": the plain diminishing schedule t0/sqrt(j+1).
    """

    max_iterations: int = 1100
    step_mode: str = "polyak"
    t0: Optional[float] = None
    delta0_fraction: float = 0.25
    delta_final_rel: float = 1e-14
    cap: Optional[float] = None
    seed: int = 0
    gap_config: DualGapConfig = field(default_factory=DualGapConfig)
    max_nonconverged_fraction: float = 0.5
    tangent_probe: float = 1e-7

    def __post_init__(self):
        if self.step_mode not in ("polyak", "sqrt"):
            raise ValueError(f"unknown step_mode {self.step_mode!r}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

def _theta_fn(problem, cfg: InnerConfig, epsilon: float, reg: Optional[Regularizer]):
    """Fast closure for the D-gap at fixed (alpha, beta, eps, phi).

    Returns (theta, y_alpha, y_beta); avoids per-call validation in the hot
    descent loop.
    """
    F = problem.map
    proj = problem.set.project
    alpha, beta = cfg.alpha, cfg.beta
    use_reg = epsilon > 0.0 and reg is not None

    def theta(x: Vector):
        Tx = F(x)
        if use_reg:
            Tx = Tx + epsilon * grad_or_subgrad(reg, x)
        ya = proj(x - Tx / alpha)
        yb = proj(x - Tx / beta)
        ra = x - ya
        rb = x - yb
        val = (float(Tx @ ra) - 0.5 * alpha * float(ra @ ra)
               - float(Tx @ rb) + 0.5 * beta * float(rb @ rb))
        return val, ya, yb

    return theta


def estimate_L_theta(problem, x0: Vector, cfg: InnerConfig, epsilon: float,
                     reg: Optional[Regularizer] = None) -> float:
    """Sampled Lipschitz estimate of theta_ab on the initial level set.

    Draws seeded points around x0, keeps those with theta <= theta(x0), and
    returns the largest difference quotient |theta(u)-theta(v)| / ||u-v||
    over consecutive kept pairs.
    """
    theta = _theta_fn(problem, cfg, epsilon, reg)
    x0 = as_point(x0, problem.map.dimension)
    th0, ya0, _ = theta(x0)
    rng = np.random.default_rng(cfg.seed)
    radius = max(float(np.linalg.norm(x0 - ya0)), 0.1 * (1.0 + float(np.linalg.norm(x0))))
    pts = [x0]
    vals = [th0]
    draws = 0
    while len(pts) < cfg.L_theta_samples + 1 and draws < 50 * cfg.L_theta_samples:
        draws += 1
        cand = x0 + radius * rng.standard_normal(x0.shape[0])
        tv, _, _ = theta(cand)
        if tv <= th0 + 1e-12:
            pts.append(cand)
            vals.append(tv)
        else:
            radius *= 0.97
    worst = 0.0
    for (u, tu), (v, tv) in zip(zip(pts, vals), zip(pts[1:], vals[1:])):
        den = float(np.linalg.norm(u - v))
        if den > 1e-14:
            worst = max(worst, abs(tu - tv) / den)
    return max(worst, 1e-8)


def _resolve_constants(problem, x0: Vector, cfg: InnerConfig, epsilon: float,
                       reg: Optional[Regularizer]) -> InnerConfig:
    """Fill in c, delta and L_theta, capping explicit values at their bounds."""
    L_theta = cfg.L_theta_estimate
    if L_theta is None:
        L_theta = estimate_L_theta(problem, x0, cfg, epsilon, reg)
    c_bound = min(1.0, (cfg.beta - cfg.alpha) / (2.0 * (L_theta + cfg.beta)))
    c = c_bound if cfg.c is None else min(cfg.c, c_bound)
    rho = reg.rho if (reg is not None and reg.smooth) else 0.0
    mu = epsilon * rho
    d_bound = min(0.5 * math.sqrt((cfg.beta - cfg.alpha) / 2.0),
                  math.sqrt(2.0) * c * mu / math.sqrt(cfg.beta - cfg.alpha))
    delta = d_bound if cfg.delta is None else min(cfg.delta, d_bound)
    return replace(cfg, c=c, delta=delta, L_theta_estimate=L_theta)


# ---------------------------------------------------------------------------
# direction and line search
# ---------------------------------------------------------------------------

def li_ng_direction(problem, x: Vector, cfg: InnerConfig, epsilon: float = 0.0,
                    reg: Optional[Regularizer] = None,
                    gap_eval: Optional[GapEvaluation] = None):
    """Descent direction for the D-gap of VI(T_eps, Omega).

    Returns (d, branch) with d = y_alpha - y_beta when
    c ||x - y_alpha|| <= ||y_alpha - y_beta||, otherwise d = y_alpha - x.
    cfg.c is used as given here (no admissibility capping); pass gap_eval to
    reuse an existing theta_ab evaluation.
    """
    x = as_point(x, problem.map.dimension)
    if gap_eval is None or gap_eval.maximizer_beta is None:
        gap_eval = theta_ab(problem, x, cfg.alpha, cfg.beta, epsilon, reg)
    ya = gap_eval.maximizer
    yb = gap_eval.maximizer_beta
    c = cfg.c
    if c is None:
        raise ValueError("cfg.c must be set for li_ng_direction (resolve constants first)")
    if c * np.linalg.norm(x - ya) <= np.linalg.norm(ya - yb):
        return ya - yb, BRANCH_GAP_DIFF
    return ya - x, BRANCH_RESIDUAL


def armijo_step(problem, x: Vector, d: Vector, cfg: InnerConfig, epsilon: float = 0.0,
                reg: Optional[Regularizer] = None):
    """Smallest m >= 0 with sqrt(theta(x + gamma^m d)) - sqrt(theta(x)) <=
    -(delta/4) gamma^m ||d||; returns (m, x_next).

    Raises StepFailureError when max_backtracks is exceeded.
    """
    d = np.asarray(d, dtype=float)
    if float(np.linalg.norm(d)) == 0.0:
        raise ValueError("zero direction")
    if cfg.delta is None:
        cfg = _resolve_constants(problem, x, cfg, epsilon, reg)
    theta = _theta_fn(problem, cfg, epsilon, reg)
    th, _, _ = theta(as_point(x, problem.map.dimension))
    m, x_next, _, _, _ = _armijo(theta, as_point(x), d, th, cfg)
    return m, x_next


def _armijo(theta, x: Vector, d: Vector, theta_x: float, cfg: InnerConfig):
    """Backtracking core; returns (m, x_next, theta_next, ya_next, yb_next)."""
    nd = float(np.linalg.norm(d))
    sq = math.sqrt(max(theta_x, 0.0))
    delta = cfg.delta
    step = 1.0
    for m in range(cfg.max_backtracks + 1):
        xn = x + step * d
        tn, ya, yb = theta(xn)
        if math.sqrt(max(tn, 0.0)) - sq <= -(delta / 4.0) * step * nd:
            return m, xn, tn, ya, yb
        step *= cfg.gamma
    raise StepFailureError(
        f"no Armijo step after {cfg.max_backtracks} backtracks "
        f"(theta={theta_x:.3e}, ||d||={nd:.3e}); mis-set constants or tolerance floor",
        x=x, d=d, theta=theta_x, backtracks=cfg.max_backtracks)


# ---------------------------------------------------------------------------
# inner solve
# ---------------------------------------------------------------------------

def solve_inner(problem, x0: Vector, epsilon: float, tau: float,
                cfg: Optional[InnerConfig] = None,
                reg: Optional[Regularizer] = None):
    """Approximately solve VI(T_eps, Omega) by D-gap descent.

    Smooth strongly-convex phi (rho > 0): stops once
    theta_ab <= p = tau^2 / L_k^2, which certifies ||x - x_eps|| <= tau.
    When p falls below the numerical floor of theta evaluation the solve
    stops at the floor instead (status "floor"); the certificate then no
    longer applies and the returned trace says so.

    Nonsmooth phi requires cfg.experimental_nonsmooth and stops on
    stagnation or step failure (status "stagnated"); there is no certified
    threshold in that mode.

    Returns (x, InnerTrace). Raises MaxIterationsError (with partial state
    attached) and propagates StepFailureError outside the floor regime.
    """
    cfg = cfg or InnerConfig()
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    smooth_mode = reg is not None and reg.smooth and reg.rho > 0
    if reg is not None and not reg.smooth and not cfg.experimental_nonsmooth:
        raise ValueError(
            "nonsmooth regularizer: enable InnerConfig.experimental_nonsmooth explicitly")
    x = as_point(x0, problem.map.dimension)

    if smooth_mode and epsilon > 0:
        L = problem.map.lipschitz_L
        M = reg.lipschitz_M
        p = bounds.stopping_threshold(tau, L, M, reg.rho, cfg.alpha, cfg.beta, epsilon).radius
    else:
        p = 0.0  # no certified threshold without a strongly convex smooth phi

    theta = _theta_fn(problem, cfg, epsilon, reg)
    th, ya, yb = theta(x)
    records: list = []
    status = None
    stagnant = 0
    j = 0

    def done(st):
        return x, InnerTrace(epsilon=epsilon, tau=tau, p=p, c=cfg.c, delta=cfg.delta,
                             L_theta=cfg.L_theta_estimate, records=records, status=st,
                             iterations=j, theta_final=th)

    # quick exits before paying for the L_theta sampling estimate
    if th <= p:
        return done("certified")  # warm start already inside the threshold
    if p < cfg.floor and th <= cfg.floor:
        return done("floor")

    cfg = _resolve_constants(problem, x, cfg, epsilon, reg)

    for j in range(1, cfg.max_iterations + 1):
        if th <= p:
            status = "certified"
            break
        if p < cfg.floor and th <= cfg.floor:
            status = "floor"
            break
        if cfg.c * np.linalg.norm(x - ya) <= np.linalg.norm(ya - yb):
            d, branch = ya - yb, BRANCH_GAP_DIFF
        else:
            d, branch = ya - x, BRANCH_RESIDUAL
        nd = float(np.linalg.norm(d))
        if nd <= 1e-15 * (1.0 + float(np.linalg.norm(x))):
            if not smooth_mode:
                status = "stagnated"
            elif p <= cfg.floor:
                status = "floor_stall"
            else:
                raise StepFailureError(
                    "direction vanished above the certified threshold",
                    x=x, d=d, theta=th)
            break
        try:
            m, xn, tn, yan, ybn = _armijo(theta, x, d, th, cfg)
        except StepFailureError:
            if not smooth_mode:
                status = "stagnated"
                break
            if p <= cfg.floor and th <= 10.0 * cfg.floor:
                status = "floor_stall"
                break
            raise
        records.append(InnerRecord(j=j, theta=tn, m=m, branch=branch,
                                   step_norm=(cfg.gamma ** m) * nd, x=xn))
        if float(np.linalg.norm(xn - x)) <= cfg.stagnation_tol * (1.0 + float(np.linalg.norm(x))):
            stagnant += 1
        else:
            stagnant = 0
        x, th, ya, yb = xn, tn, yan, ybn
        if stagnant >= 3:
            if not smooth_mode or p <= cfg.floor:
                status = "stagnated" if not smooth_mode else "floor_stall"
                break
            raise StepFailureError("iterates stagnated above the certified threshold",
                                   x=x, theta=th)
    if status is None:
        if th <= p:
            status = "certified"
        else:
            raise MaxIterationsError(
                f"inner solve exhausted {cfg.max_iterations} iterations "
                f"(theta={th:.3e}, threshold={p:.3e})",
                x=x, trace=done("max_iterations")[1])
    return done(status)


# ---------------------------------------------------------------------------
# outer loop
# ---------------------------------------------------------------------------

def sequential_inexact_descent(problem, x0: Vector, outer_cfg: Optional[OuterConfig] = None,
                               reg: Optional[Regularizer] = None):
    """Sequential inexact descent over a decreasing epsilon schedule.

    Each level solves VI(T_eps_k, Omega) by solve_inner warm-started from
    the previous level's point. Returns (SolverTrace, x_final); inner
    failures propagate with the partial trace attached to the exception.
    """
    cfg = outer_cfg or OuterConfig()
    if reg is None:
        raise ValueError("sequential descent needs a regularizer")
    eps = cfg.schedule()
    taus = cfg.taus(len(eps))
    x = as_point(x0, problem.map.dimension)
    outer: list = []
    inner: list = []
    oracle = getattr(problem, "solution_oracle", None)
    for k, (e, tk) in enumerate(zip(eps, taus)):
        icfg = cfg.inner_factory(k, e) if cfg.inner_factory is not None else cfg.inner
        tick = time.perf_counter()
        try:
            x, itrace = solve_inner(problem, x, e, tk, icfg, reg)
        except (StepFailureError, MaxIterationsError) as err:
            err.partial_trace = SolverTrace(outer=outer, inner=inner)
            raise
        elapsed = time.perf_counter() - tick
        inner.append(itrace)
        radius = None
        if itrace.status == "certified" and reg.smooth and reg.rho > 0 and e > 0:
            # theta below the evaluation floor is numerically indistinguishable
            # from the floor, so the certified radius is floored accordingly
            radius = bounds.dgap_error_bound(max(itrace.theta_final, icfg.floor),
                                             problem.map.lipschitz_L, reg.lipschitz_M,
                                             reg.rho, icfg.alpha, icfg.beta, e).radius
        dist = None
        if oracle is not None:
            dist = float(oracle.distance_to_S0(x))
        outer.append(OuterRecord(k=k, epsilon=e, x=x, theta=itrace.theta_final, p=itrace.p,
                                 radius=radius, dist_S0=dist,
                                 inner_iterations=itrace.iterations, status=itrace.status,
                                 wall_time_s=elapsed))
    return SolverTrace(outer=outer, inner=inner), x


# ---------------------------------------------------------------------------
# projected subgradient for the dual-gap model
# ---------------------------------------------------------------------------

def solve_pge(problem, regularizer: Regularizer, epsilon: float, x0: Vector,
              sg_config: Optional[SubgradientConfig] = None):
    """Projected subgradient method for min_{Omega} G(x) + eps * phi(x).

    Update x+ = P_Omega(x - t_j (F(ybar(x)) + eps g_phi(x))) with ybar the
    dual-gap inner maximizer; returns the best-so-far iterate by objective
    value together with a per-iterate trace.

    Raises DualGapUnreliableError when the fraction of non-converged inner
    solves exceeds sg_config.max_nonconverged_fraction.
    """
    cfg = sg_config or SubgradientConfig()
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    omega = problem.set
    F = problem.map
    x = omega.project(as_point(x0, F.dimension))
    phi = regularizer.value

    gcfg = replace(cfg.gap_config, seed=cfg.seed)
    ev = dual_gap(problem, x, gcfg)
    n_bad = 0 if ev.converged else 1
    f = ev.value + epsilon * phi(x)
    ybar = ev.maximizer
    x_best, f_best = x.copy(), f

    scale0 = 1.0 + abs(f)
    delta = max(cfg.delta0_fraction * abs(f), 1e-12 * scale0)
    rho_decay = (cfg.delta_final_rel * scale0 / delta) ** (1.0 / cfg.max_iterations)
    cap = cfg.cap if cfg.cap is not None else 2.0 * (1.0 + float(np.linalg.norm(x)))
    t0 = cfg.t0 if cfg.t0 is not None else 1.0 / (1.0 + epsilon)

    records: list = []
    j = 0
    for j in range(1, cfg.max_iterations + 1):
        sg = np.asarray(F(ybar), dtype=float) + epsilon * grad_or_subgrad(regularizer, x)
        if cfg.step_mode == "sqrt":
            t = t0 / math.sqrt(j)
        else:
            s = cfg.tangent_probe * (1.0 + float(np.linalg.norm(x))) \
                / (1.0 + float(np.linalg.norm(sg)))
            g_tan = (x - omega.project(x - s * sg)) / s
            n_tan = float(np.linalg.norm(g_tan))
            if n_tan <= 1e-14:
                break  # subgradient is normal to Omega at x: stationary
            t = (f - f_best + delta) / n_tan ** 2
            t = min(t, cap / n_tan)
        x = omega.project(x - t * sg)
        ev = dual_gap(problem, x, replace(gcfg, seed=cfg.seed + 7919 * j), warm=ybar)
        ybar = ev.maximizer
        if not ev.converged:
            n_bad += 1
        f = ev.value + epsilon * phi(x)
        if f < f_best:
            f_best, x_best = f, x.copy()
        records.append(PgeRecord(j=j, objective=f, gap_value=ev.value,
                                 best_objective=f_best, step=t,
                                 inner_converged=ev.converged))
        delta *= rho_decay
        if j >= 20 and n_bad > cfg.max_nonconverged_fraction * (j + 1):
            raise DualGapUnreliableError(
                f"{n_bad}/{j + 1} dual-gap inner solves failed to converge; "
                "increase the inner budget or multistarts")
    return x_best, PgeTrace(records=records, iterations=j, n_nonconverged=n_bad,
                            best_objective=f_best)


# ---------------------------------------------------------------------------
# high-accuracy references
# ---------------------------------------------------------------------------

def reference_solution(problem, epsilon: float = 0.0, reg: Optional[Regularizer] = None,
                       alpha: float = 1.0, tol_residual: float = 1e-12,
                       x0: Optional[Vector] = None, max_newton: int = 80):
    """Solve a strongly monotone VI(T_eps, Omega) to machine-level residual.

    Runs a short D-gap descent for globalization, then a finite-difference
    semismooth Newton polish on the natural residual
    H(x) = x - P_Omega(x - T(x)/alpha), stopping at ||H|| <= tol_residual.
    A residual r certifies the true theta_ab <= (beta-alpha)/2 * r^2, far
    below anything evaluable in floating point.

    Returns (x, residual_norm). Raises RuntimeError when the residual
    target is not reached.
    """
    F = problem.map
    if epsilon > 0 and (reg is None or not reg.smooth or reg.rho <= 0):
        raise ValueError("regularized reference needs a smooth strongly convex phi")
    if epsilon == 0.0 and F.monotonicity_class != "strongly_monotone":
        raise ValueError("unregularized reference needs a strongly monotone map")
    n = F.dimension
    x = as_point(x0, n) if x0 is not None else problem.set.project(np.zeros(n))

    cfg = InnerConfig(max_iterations=3000, floor=1e-15)
    if reg is not None and not reg.smooth:
        cfg = replace(cfg, experimental_nonsmooth=True)
    try:
        x, _ = solve_inner(problem, x, epsilon, 1e-6, cfg, reg)
    except (StepFailureError, MaxIterationsError) as err:
        if getattr(err, "x", None) is not None:
            x = err.x

    def residual(z):
        return z - as_point(y_alpha(problem, z, alpha, epsilon, reg), n)

    h = residual(x)
    nh = float(np.linalg.norm(h))
    for _ in range(max_newton):
        if nh <= tol_residual:
            break
        J = np.empty((n, n))
        fd = 1e-7 * (1.0 + float(np.linalg.norm(x)))
        for k in range(n):
            e = np.zeros(n)
            e[k] = fd
            J[:, k] = (residual(x + e) - residual(x - e)) / (2.0 * fd)
        try:
            step = np.linalg.solve(J, -h)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(J, -h, rcond=None)[0]
        t = 1.0
        for _ in range(40):
            cand = x + t * step
            hc = residual(cand)
            nhc = float(np.linalg.norm(hc))
            if nhc < nh:
                x, h, nh = cand, hc, nhc
                break
            t *= 0.5
        else:
            break  # no progress; nh stands
    if nh > tol_residual:
        raise RuntimeError(
            f"reference solve stalled at residual {nh:.3e} (target {tol_residual:.1e})")
    return x, nh
