"""Direction switching, Armijo steps, inner/outer solves, subgradient solver."""
import math

import numpy as np
import pytest

from vigap.core import affine_map, box
from vigap.gap import theta_ab
from vigap.problems import ProblemInstance, strongly_monotone_quadratic
from vigap.solvers import (
    BRANCH_GAP_DIFF,
    BRANCH_RESIDUAL,
    InnerConfig,
    MaxIterationsError,
    OuterConfig,
    StepFailureError,
    SubgradientConfig,
    armijo_step,
    li_ng_direction,
    reference_solution,
    sequential_inexact_descent,
    solve_inner,
    solve_pge,
)

X0 = np.array([1.0, -2.0, 1.0])
XSTAR = np.array([0.0, -0.75, -0.25])


def line_problem():
    return ProblemInstance(
        name="line", dimension=1,
        map=affine_map(np.eye(1), np.zeros(1)),
        set=box([-1.0], [1.0]),
        bounding_box=(np.array([-1.0]), np.array([1.0])),
    )


def x_eps_l2(eps):
    """Regularized solution of the best-approximation benchmark, quadratic phi."""
    s = -(3.0 + 2.0 * eps) / (4.0 * (1.0 + eps))
    return np.array([0.0, s, -1.0 - s])


# ---------------------------------------------------------------------------
# direction
# ---------------------------------------------------------------------------

def test_direction_zero_at_solution(ba_problem, l2):
    eps = 0.5
    d, branch = li_ng_direction(ba_problem, x_eps_l2(eps),
                                InnerConfig(c=0.1), eps, l2)
    assert np.linalg.norm(d) <= 1e-12


def test_direction_switch_small_c():
    p = line_problem()
    d, branch = li_ng_direction(p, np.array([1.0]), InnerConfig(c=0.1))
    assert branch == BRANCH_GAP_DIFF
    np.testing.assert_allclose(d, [-0.5], atol=1e-15)


def test_direction_switch_large_c():
    p = line_problem()
    d, branch = li_ng_direction(p, np.array([1.0]), InnerConfig(c=0.9))
    assert branch == BRANCH_RESIDUAL
    np.testing.assert_allclose(d, [-1.0], atol=1e-15)


# ---------------------------------------------------------------------------
# armijo
# ---------------------------------------------------------------------------

def test_armijo_rejects_zero_direction():
    p = line_problem()
    with pytest.raises(ValueError):
        armijo_step(p, np.array([1.0]), np.array([0.0]), InnerConfig(c=0.1, delta=0.1))


def test_armijo_minimal_m():
    p = line_problem()
    cfg = InnerConfig(c=0.1, delta=0.3)
    x = np.array([1.0])
    d = np.array([-0.5])
    m, x_next = armijo_step(p, x, d, cfg)
    np.testing.assert_allclose(x_next, x + cfg.gamma ** m * d)

    def decrease_ok(mm):
        t0 = math.sqrt(theta_ab(p, x, 1.0, 2.0).value)
        t1 = math.sqrt(max(theta_ab(p, x + cfg.gamma ** mm * d, 1.0, 2.0).value, 0.0))
        return t1 - t0 <= -(cfg.delta / 4.0) * cfg.gamma ** mm * np.linalg.norm(d)

    assert decrease_ok(m)
    if m > 0:
        assert not decrease_ok(m - 1)


def test_armijo_fails_at_noise_floor(ba_problem, l2):
    # theta is below machine noise this close to the regularized solution, so
    # no unit-scale direction can deliver the required sqrt(theta) decrease
    eps = 0.5
    x = x_eps_l2(eps) + 1e-12 * np.array([0.0, 1.0, -1.0])
    with pytest.raises(StepFailureError):
        armijo_step(ba_problem, x, np.array([0.0, -0.1, 0.1]),
                    InnerConfig(c=0.1, delta=0.3, max_backtracks=30), eps, l2)


# ---------------------------------------------------------------------------
# inner solve
# ---------------------------------------------------------------------------

def test_solve_inner_warm_start_short_circuit(ba_problem, l2):
    eps = 0.5
    x, tr = solve_inner(ba_problem, x_eps_l2(eps), eps, 1e-6, InnerConfig(), l2)
    assert tr.status == "certified"
    assert tr.iterations == 0
    assert tr.records == []
    np.testing.assert_allclose(x, x_eps_l2(eps))


def test_solve_inner_certified_run(ba_problem, l2):
    eps = 0.5
    tau = 1e-6
    x, tr = solve_inner(ba_problem, X0, eps, tau, InnerConfig(seed=1), l2)
    assert tr.status == "certified"
    # exit threshold holds by re-evaluation
    assert theta_ab(ba_problem, x, 1.0, 2.0, eps, l2).value <= tr.p
    # certified distance; d(x,S0) sits on the regularized-solution path
    assert np.linalg.norm(x - x_eps_l2(eps)) <= tau
    d = ba_problem.solution_oracle.distance_to_S0(x)
    assert 0.059 <= d <= 0.1768


def test_solve_inner_closed_form_quadratic(l2):
    p = strongly_monotone_quadratic(3, seed=4)
    eps = 0.5
    tau = 1e-7
    x, tr = solve_inner(p, np.zeros(3), eps, tau, InnerConfig(seed=2), l2)
    x_ref = np.clip(p.constants["c"] / (1.0 + eps), -1.0, 1.0)
    assert tr.status == "certified"
    assert np.linalg.norm(x - x_ref) <= tau


def test_solve_inner_descent_certificate(ba_problem, l2):
    eps = 0.1
    x, tr = solve_inner(ba_problem, X0, eps, 1e-5, InnerConfig(seed=3), l2)
    prev = math.sqrt(max(theta_ab(ba_problem, X0, 1.0, 2.0, eps, l2).value, 0.0))
    assert tr.records, "expected accepted steps"
    for rec in tr.records:
        cur = math.sqrt(max(rec.theta, 0.0))
        assert cur - prev <= -(tr.delta / 4.0) * rec.step_norm + 1e-14
        prev = cur


def test_solve_inner_nonsmooth_needs_flag(ba_problem, l1):
    with pytest.raises(ValueError):
        solve_inner(ba_problem, X0, 0.5, 1e-6, InnerConfig(), l1)


def test_solve_inner_nonsmooth_mode(ba_problem, l1):
    x, tr = solve_inner(ba_problem, X0, 0.5, 1e-6,
                        InnerConfig(experimental_nonsmooth=True, seed=5), l1)
    assert tr.status in ("stagnated", "floor")
    assert ba_problem.solution_oracle.distance_to_S0(x) <= 1e-6


def test_solve_inner_max_iterations(ba_problem, l2):
    with pytest.raises(MaxIterationsError) as err:
        solve_inner(ba_problem, X0, 0.5, 1e-6, InnerConfig(max_iterations=3), l2)
    assert err.value.trace is not None
    assert err.value.x is not None


def test_solve_constants_capped_at_admissible_bounds(ba_problem, l2):
    # explicit c/delta beyond the admissible formulas are capped at resolve
    eps = 0.5
    x, tr = solve_inner(ba_problem, X0, eps, 1e-6,
                        InnerConfig(c=5.0, delta=9.0, seed=4), l2)
    c_bound = min(1.0, (2.0 - 1.0) / (2.0 * (tr.L_theta + 2.0)))
    d_bound = min(0.5 * math.sqrt(0.5),
                  math.sqrt(2.0) * tr.c * eps * l2.rho / math.sqrt(1.0))
    assert tr.c <= c_bound
    assert tr.delta <= d_bound


# ---------------------------------------------------------------------------
# sequential outer loop
# ---------------------------------------------------------------------------

def test_sequential_distance_trend(ba_problem, l2):
    cfg = OuterConfig(epsilons=(0.5, 0.1, 0.01, 0.005, 1e-4))
    trace, x = sequential_inexact_descent(ba_problem, X0, cfg, l2)
    dists = [r.dist_S0 for r in trace.outer]
    # warm-start trend: distance to S0 non-increasing within 10% slack
    for a, b in zip(dists, dists[1:]):
        assert b <= 1.1 * a
    # levels track the regularized path
    for r in trace.outer:
        expect = r.epsilon / (2.0 * math.sqrt(2.0) * (1.0 + r.epsilon))
        assert abs(r.dist_S0 - expect) <= 0.5 * expect


def test_sequential_rejects_nondecreasing_schedule(ba_problem, l2):
    with pytest.raises(ValueError):
        sequential_inexact_descent(ba_problem, X0,
                                   OuterConfig(epsilons=(0.1, 0.5)), l2)


def test_sequential_pure_regularizer_limit(l2):
    # zero operator and one huge-epsilon outer step: the solve lands on the
    # phi-minimizer over the set
    n = 2
    p = ProblemInstance(
        name="zero2", dimension=n,
        map=affine_map(np.zeros((n, n)), np.zeros(n)),
        set=box([0.5, 0.5], [2.0, 2.0]),
    )
    trace, x = sequential_inexact_descent(p, np.array([2.0, 1.3]),
                                          OuterConfig(epsilons=(5.0,), tau=1e-8), l2)
    np.testing.assert_allclose(x, [0.5, 0.5], atol=1e-7)


# ---------------------------------------------------------------------------
# projected subgradient for the dual-gap model
# ---------------------------------------------------------------------------

def test_pge_best_so_far_monotone(ba_problem, l1):
    x, tr = solve_pge(ba_problem, l1, 0.1, X0,
                      SubgradientConfig(max_iterations=60, seed=6))
    best = [r.best_objective for r in tr.records]
    assert all(b <= a + 1e-18 for a, b in zip(best, best[1:]))


def test_pge_unregularized_strongly_monotone(l2):
    p = strongly_monotone_quadratic(2, seed=8)
    x, tr = solve_pge(p, l2, 0.0, np.zeros(2),
                      SubgradientConfig(max_iterations=400, seed=7))
    assert p.solution_oracle.distance_to_S0(x) <= 1e-5


def test_pge_l1_exact_recovery(ba_problem, l1):
    x, tr = solve_pge(ba_problem, l1, 0.1, X0, SubgradientConfig(seed=0))
    assert np.linalg.norm(x - XSTAR) <= 1e-6
    assert ba_problem.solution_oracle.distance_to_S0(x) <= 1e-6


def test_pge_sqrt_mode_runs(ba_problem, l2):
    x, tr = solve_pge(ba_problem, l2, 0.5, X0,
                      SubgradientConfig(max_iterations=150, step_mode="sqrt", seed=9))
    d = ba_problem.solution_oracle.distance_to_S0(x)
    assert d <= 0.5  # the diminishing schedule converges slowly but moves


# ---------------------------------------------------------------------------
# reference solutions
# ---------------------------------------------------------------------------

def test_reference_matches_closed_form(ba_problem, l2):
    for eps in (0.5, 0.01):
        x, res = reference_solution(ba_problem, eps, l2)
        assert res <= 1e-12
        assert np.linalg.norm(x - x_eps_l2(eps)) <= 1e-9


def test_reference_unregularized_needs_strong_monotonicity(ba_problem):
    with pytest.raises(ValueError):
        reference_solution(ba_problem, 0.0, None)


def test_reference_affine_pd():
    p = strongly_monotone_quadratic(4, seed=10)
    x, res = reference_solution(p, 0.0, None)
    assert res <= 1e-12
    np.testing.assert_allclose(x, np.clip(p.constants["c"], -1, 1), atol=1e-10)
