"""Computable error bounds and regularization diagnostics.

The D-gap distance bound and its stopping threshold certify inner-solve
accuracy for VI(T_eps, Omega); the weak-sharpness bounds relate regularized
solutions to the unregularized solution set; exactness_check classifies a
candidate point through the dual gap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Vector, as_point
from .gap import DualGapConfig, dual_gap

__all__ = [
    "EXACT",
    "NOT_EXACT",
    "INCONCLUSIVE",
    "DegenerateSamplesError",
    "SharpnessModel",
    "BoundReport",
    "dgap_error_bound",
    "stopping_threshold",
    "eps_error_bound_dualgap",
    "eps_error_bound_direct",
    "order1_inequality",
    "exactness_check",
    "fit_sharpness",
]

EXACT = "exact"
NOT_EXACT = "not_exact"
INCONCLUSIVE = "inconclusive"


class DegenerateSamplesError(ValueError):
    """Sharpness fit received samples with degenerate distance spread."""


@dataclass(frozen=True)
class SharpnessModel:
    """Growth model G(x) >= alpha_sharp * d(x, S0)^gamma on Omega.

    gamma must exceed 1 (the order-1 case is handled by exactness checks
    and `order1_inequality`, not by a radius formula).
    """

    gamma: float
    alpha_sharp: float
    source: str = "user_declared"
    residual: Optional[float] = None

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError("sharpness order gamma must exceed 1")
        if not self.alpha_sharp > 0.0:
            raise ValueError("alpha_sharp must be positive")


@dataclass(frozen=True)
class BoundReport:
    """A computed bound radius together with the inputs that produced it."""

    bound_kind: str
    radius: float
    inputs: dict

    def __post_init__(self):
        if not np.isfinite(self.radius) or self.radius < 0:
            raise ValueError("bound radius must be finite and nonnegative")


def _check_dgap_inputs(L, M, rho, alpha, beta, epsilon):
    if not rho > 0:
        raise ValueError("rho must be positive")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if not (0 < alpha < beta):
        raise ValueError("need 0 < alpha < beta")
    if L < 0 or M < 0:
        raise ValueError("Lipschitz constants must be nonnegative")


def dgap_error_bound(theta_ab_value: float, L: float, M: float, rho: float,
                     alpha: float, beta: float, epsilon: float) -> BoundReport:
    """Distance bound ||x - x_eps|| <= ((beta+L+eps*M)/(eps*rho)) * sqrt(2 theta/(beta-alpha)).

    theta_ab_value is the D-gap of VI(T_eps, Omega) at x; the bound holds
    for F Lipschitz with constant L, grad(phi) Lipschitz with constant M
    and phi strongly convex with modulus rho.
    """
    _check_dgap_inputs(L, M, rho, alpha, beta, epsilon)
    if theta_ab_value < 0:
        raise ValueError("theta_ab_value must be nonnegative")
    factor = (beta + L + epsilon * M) / (epsilon * rho)
    radius = factor * math.sqrt(2.0 * theta_ab_value / (beta - alpha))
    return BoundReport(
        bound_kind="dgap_to_regularized",
        radius=radius,
        inputs={"theta_ab": theta_ab_value, "L": L, "M": M, "rho": rho,
                "alpha": alpha, "beta": beta, "epsilon": epsilon},
    )


def stopping_threshold(tau: float, L: float, M: float, rho: float,
                       alpha: float, beta: float, epsilon: float) -> BoundReport:
    """Implementable inner stopping level p = tau^2 / L_k^2.

    With L_k = ((beta+L+eps*M)/(eps*rho)) * sqrt(2/(beta-alpha)),
    theta_ab(x) <= p guarantees ||x - x_eps|| <= tau.
    """
    _check_dgap_inputs(L, M, rho, alpha, beta, epsilon)
    if not tau > 0:
        raise ValueError("tau must be positive")
    L_k = (beta + L + epsilon * M) / (epsilon * rho) * math.sqrt(2.0 / (beta - alpha))
    p = tau ** 2 / L_k ** 2
    return BoundReport(
        bound_kind="stopping_threshold",
        radius=p,
        inputs={"tau": tau, "L": L, "M": M, "rho": rho, "alpha": alpha,
                "beta": beta, "epsilon": epsilon, "L_k": L_k},
    )


def eps_error_bound_dualgap(sharp: SharpnessModel, subgrad_bound_M: float,
                            epsilon: float) -> BoundReport:
    """Bound d(x_eps, S0) <= (eps * M / alpha_sharp)^(1/(gamma-1)) for the dual-gap model.

    M bounds ||v|| over v in the phi-subdifferential on S0. The distance bound
    is usually stated with an unnamed constant tau; the computable choice
    tau = M / alpha_sharp is used here.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    if not subgrad_bound_M >= 0:
        raise ValueError("subgradient bound must be nonnegative")
    radius = (epsilon * subgrad_bound_M / sharp.alpha_sharp) ** (1.0 / (sharp.gamma - 1.0))
    return BoundReport(
        bound_kind="eps_to_S0_dualgap",
        radius=radius,
        inputs={"gamma": sharp.gamma, "alpha_sharp": sharp.alpha_sharp,
                "M": subgrad_bound_M, "epsilon": epsilon},
    )


def eps_error_bound_direct(sharp: SharpnessModel, grad_bound_M: float,
                           epsilon: float) -> BoundReport:
    """Bound d(x_eps, S0) <= (eps * M / alpha_sharp)^(1/(gamma-1)) for the direct model.

    Valid when the pointwise growth condition
    <F(P_S0(x)), x - P_S0(x)> >= alpha_sharp * d(x, S0)^gamma holds on Omega
    (a stronger requirement than the dual-gap form). The order-1 case has no
    radius formula; see `order1_inequality`.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    if not grad_bound_M >= 0:
        raise ValueError("gradient bound must be nonnegative")
    radius = (epsilon * grad_bound_M / sharp.alpha_sharp) ** (1.0 / (sharp.gamma - 1.0))
    return BoundReport(
        bound_kind="eps_to_S0_direct",
        radius=radius,
        inputs={"gamma": sharp.gamma, "alpha_sharp": sharp.alpha_sharp,
                "M": grad_bound_M, "epsilon": epsilon},
    )


def order1_inequality(alpha_sharp: float, epsilon: float, dist_S0: float,
                      phi_at_projection: float, phi_at_x: float, tol: float = 1e-12):
    """Order-1 weak-sharpness consequence alpha * d(x_eps, S0) <= eps * (phi(xbar) - phi(x_eps)).

    Returns (lhs, rhs, holds); offered as a checkable inequality when phi
    values at x_eps and its S0-projection are available, replacing a radius
    for the order-1 case.
    """
    if not alpha_sharp > 0:
        raise ValueError("alpha_sharp must be positive")
    lhs = alpha_sharp * dist_S0
    rhs = epsilon * (phi_at_projection - phi_at_x)
    return lhs, rhs, bool(lhs <= rhs + tol)


def exactness_check(problem, x: Vector, tol: float = 1e-6,
                    gap_config: Optional[DualGapConfig] = None) -> str:
    """Classify x through the dual gap: exact / not_exact / inconclusive.

    exact: G(x) <= tol and x in Omega. not_exact: G(x) > 10*tol with a
    converged inner solve. Everything else (including inner-solver doubt)
    is inconclusive. tol should exceed the dual-gap inner tolerance by at
    least 10x to mean anything.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    x = as_point(x, problem.map.dimension)
    ev = dual_gap(problem, x, gap_config)
    in_omega = problem.set.contains(x, 1e-8)
    if ev.value <= tol and in_omega:
        return EXACT
    if ev.value > 10.0 * tol and ev.converged:
        return NOT_EXACT
    return INCONCLUSIVE


def fit_sharpness(problem, samples, gap_config: Optional[DualGapConfig] = None,
                  window=(1e-4, 1.0)) -> SharpnessModel:
    """Least-squares fit of log G(x) = log alpha_sharp + gamma log d(x, S0).

    Uses only samples whose distance to S0 lies inside `window` (avoids the
    numerical noise floor and far-field distortion). The problem must carry
    a distance-to-S0 oracle. Raises DegenerateSamplesError when the kept
    distances have no usable spread.
    """
    oracle = getattr(problem, "solution_oracle", None)
    if oracle is None:
        raise ValueError("fit_sharpness needs a problem with a distance-to-S0 oracle")
    lo, hi = window
    logs_d = []
    logs_g = []
    for x in samples:
        x = as_point(x, problem.map.dimension)
        d = float(oracle.distance_to_S0(x))
        if not (lo <= d <= hi):
            continue
        g = dual_gap(problem, x, gap_config).value
        if g <= 0:
            continue
        logs_d.append(math.log(d))
        logs_g.append(math.log(g))
    if len(logs_d) < 4:
        raise DegenerateSamplesError(
            f"only {len(logs_d)} usable samples in the distance window {window}")
    ld = np.asarray(logs_d)
    lg = np.asarray(logs_g)
    if float(ld.std()) < 1e-6:
        raise DegenerateSamplesError("samples are (numerically) equidistant from S0")
    A = np.column_stack([ld, np.ones_like(ld)])
    sol, *_ = np.linalg.lstsq(A, lg, rcond=None)
    gamma = float(sol[0])
    alpha_sharp = float(math.exp(sol[1]))
    resid = float(np.sqrt(np.mean((A @ sol - lg) ** 2)))
    return SharpnessModel(gamma=gamma, alpha_sharp=alpha_sharp, source="fitted",
                          residual=resid)
