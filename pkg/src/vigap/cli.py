"""Command-line front end: experiment sweeps, the two-model comparison
table, and invariant check suites with machine-readable CSV/JSON output.
"""
from __future__ import annotations

import argparse
import configparser
import json
import sys
import time
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import bounds
from .core import (
    Regularizer,
    affine_map,
    ball,
    box,
    halfspace,
    hyperplane,
    l1_regularizer,
    shifted_orthant,
    tikhonov,
)
from .gap import DualGapConfig, dual_gap, theta_alpha
from .problems import (
    BUILTIN_PROBLEMS,
    ProblemInstance,
    affine_monotone,
    brute_force_gap,
    example_5_1,
    get_problem,
    strongly_monotone_quadratic,
)
from .solvers import (
    InnerConfig,
    MaxIterationsError,
    OuterConfig,
    StepFailureError,
    SubgradientConfig,
    reference_solution,
    sequential_inexact_descent,
    solve_inner,
    solve_pge,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ResultRow",
    "CheckReport",
    "run_experiment",
    "table1",
    "check_invariants",
    "rows_to_csv",
    "rows_to_json",
    "load_problem_file",
    "main",
    "CSV_COLUMNS",
    "CHECK_SUITES",
]

MODELS = ("direct", "dualgap")
REGULARIZERS = ("l1", "l2")
TABLE1_EPSILONS = (0.5, 0.1, 0.01, 0.005, 0.0001)

CSV_COLUMNS = ["problem", "model", "regularizer", "epsilon", "iterations",
               "wall_time_s", "dist_to_reg_solution", "dist_to_S0", "final_gap",
               "exactness"]


class ConfigError(ValueError):
    """Invalid experiment configuration or problem file."""


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: a problem, a model, a regularizer and an epsilon list.

    `problem` is a registry name or a path to an INI problem file. All
    randomness (multistarts, probes, sampling) flows from `seed`.
    """

    problem: str
    model: str
    regularizer: str
    epsilons: tuple
    seed: int = 0
    tol: float = 1e-6
    tau: float = 1e-6
    max_iter: Optional[int] = None
    x0: Optional[tuple] = None
    out: Optional[str] = None
    fmt: str = "csv"
    timing: bool = True
    experimental_nonsmooth: bool = False

    def validate(self):
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.regularizer not in REGULARIZERS:
            raise ConfigError(
                f"regularizer must be one of {REGULARIZERS}, got {self.regularizer!r}")
        if not self.epsilons:
            raise ConfigError("epsilon list must not be empty")
        if any(e <= 0 for e in self.epsilons):
            raise ConfigError(f"epsilon values must be positive, got {self.epsilons}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.fmt!r}")
        if self.model == "direct" and self.regularizer == "l1" \
                and not self.experimental_nonsmooth:
            raise ConfigError(
                "direct model with the l1 regularizer is experimental; "
                "pass --experimental-nonsmooth to enable it")
        if not self.tol > 0 or not self.tau > 0:
            raise ConfigError("tol and tau must be positive")


@dataclass
class ResultRow:
    """One sweep cell of the model-comparison table, plus gap/verdict columns."""

    problem: str
    model: str
    regularizer: str
    epsilon: float
    iterations: int
    wall_time_s: float
    dist_to_reg_solution: Optional[float]
    dist_to_S0: Optional[float]
    final_gap: Optional[float]
    exactness: str

    def to_dict(self) -> dict:
        return {c: getattr(self, c) for c in CSV_COLUMNS}


# ---------------------------------------------------------------------------
# problem files
# ---------------------------------------------------------------------------

def _parse_vector(text: str, where: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.replace(",", " ").split()])
    except ValueError as err:
        raise ConfigError(f"{where}: cannot parse vector {text!r} ({err})") from None


def _parse_matrix(text: str, where: str) -> np.ndarray:
    rows = [r for r in text.split(";") if r.strip()]
    return np.array([_parse_vector(r, where) for r in rows])


def _build_set(sec, dim_hint, where="set"):
    kind = sec.get("kind", None)
    if kind is None:
        raise ConfigError(f"{where}.kind: missing")
    try:
        if kind == "box":
            lo = _parse_vector(sec.get("lower", ""), f"{where}.lower")
            hi = _parse_vector(sec.get("upper", ""), f"{where}.upper")
            return box(lo, hi)
        if kind == "orthant":
            return shifted_orthant(_parse_vector(sec.get("lower", ""), f"{where}.lower"))
        if kind == "ball":
            return ball(_parse_vector(sec.get("center", ""), f"{where}.center"),
                        float(sec.get("radius", "nan")))
        if kind == "halfspace":
            return halfspace(_parse_vector(sec.get("normal", ""), f"{where}.normal"),
                             float(sec.get("offset", "nan")))
        if kind == "hyperplane":
            return hyperplane(_parse_vector(sec.get("normal", ""), f"{where}.normal"),
                              float(sec.get("offset", "nan")))
    except ConfigError:
        raise
    except ValueError as err:
        raise ConfigError(f"{where} ({kind}): {err}") from None
    raise ConfigError(f"{where}.kind: unknown set kind {kind!r}")


def load_problem_file(path: str) -> ProblemInstance:
    """Build a ProblemInstance from an INI problem file.

    Either `[problem] name = <builtin>` or an explicit `[operator]`
    (affine: matrix/offset) plus `[set]` section; `[constants]` may carry
    x0, a declared Lipschitz constant and a bounding box for grid oracles.
    """
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read problem file {path!r}")
    if parser.has_section("problem") and parser["problem"].get("name"):
        name = parser["problem"]["name"]
        if name not in BUILTIN_PROBLEMS:
            raise ConfigError(f"problem.name: unknown builtin {name!r}")
        inst = BUILTIN_PROBLEMS[name]()
    else:
        if not parser.has_section("operator") or not parser.has_section("set"):
            raise ConfigError("problem file needs [problem] name or [operator] + [set]")
        op = parser["operator"]
        if op.get("kind", "affine") != "affine":
            raise ConfigError(f"operator.kind: only 'affine' or builtins supported, "
                              f"got {op.get('kind')!r}")
        M = _parse_matrix(op.get("matrix", ""), "operator.matrix")
        q = _parse_vector(op.get("offset", ""), "operator.offset")
        try:
            fmap = affine_map(M, q)
        except ValueError as err:
            raise ConfigError(f"operator: {err}") from None
        if op.get("lipschitz"):
            fmap = replace(fmap, lipschitz_L=float(op["lipschitz"]))
        feasible = _build_set(parser["set"], fmap.dimension)
        if feasible.dimension != fmap.dimension:
            raise ConfigError(
                f"set: dimension {feasible.dimension} does not match operator "
                f"dimension {fmap.dimension}")
        inst = ProblemInstance(
            name=str(path), dimension=fmap.dimension, map=fmap, set=feasible,
            constants={"L": fmap.lipschitz_L, "mu": fmap.mu},
            default_x0=feasible.project(np.zeros(fmap.dimension)))
    if parser.has_section("constants"):
        sec = parser["constants"]
        if sec.get("x0"):
            inst = replace(inst, default_x0=_parse_vector(sec["x0"], "constants.x0"))
        if sec.get("bounding_lower") and sec.get("bounding_upper"):
            inst = replace(inst, bounding_box=(
                _parse_vector(sec["bounding_lower"], "constants.bounding_lower"),
                _parse_vector(sec["bounding_upper"], "constants.bounding_upper")))
    return inst


def _resolve_problem(cfg: ExperimentConfig) -> ProblemInstance:
    if cfg.problem in BUILTIN_PROBLEMS:
        return get_problem(cfg.problem, seed=cfg.seed)
    if cfg.problem.endswith(".ini"):
        return load_problem_file(cfg.problem)
    known = ", ".join(sorted(BUILTIN_PROBLEMS))
    raise ConfigError(f"unknown problem {cfg.problem!r} (builtins: {known}; "
                      "or pass a path ending in .ini)")


def _regularizer(kind: str) -> Regularizer:
    return tikhonov() if kind == "l2" else l1_regularizer()


# ---------------------------------------------------------------------------
# experiment runner
# ---------------------------------------------------------------------------

def _feasible_point(problem, x) -> np.ndarray:
    return problem.set.project(np.asarray(x, dtype=float))


def _exactness_at(problem, x, tol, seed) -> str:
    xin = _feasible_point(problem, x)
    return bounds.exactness_check(problem, xin, tol=tol,
                                  gap_config=DualGapConfig(seed=seed))


def _dist_S0(problem, x) -> Optional[float]:
    if problem.solution_oracle is None:
        return None
    return float(problem.solution_oracle.distance_to_S0(np.asarray(x, dtype=float)))


def run_experiment(config: ExperimentConfig) -> list:
    """Run one sweep; one ResultRow per epsilon, deterministic for a fixed seed.

    Direct-model cells run the sequential inexact descent over the epsilon
    list sorted decreasingly (warm starts, as in the sequential algorithm);
    dual-gap cells run independent subgradient solves. Per-cell solver
    failures produce a row with an error marker in the exactness column and
    never abort the sweep.
    """
    config.validate()
    problem = _resolve_problem(config)
    reg = _regularizer(config.regularizer)
    x0 = np.asarray(config.x0, dtype=float) if config.x0 is not None else (
        problem.default_x0 if problem.default_x0 is not None
        else problem.set.project(np.zeros(problem.dimension)))

    rows: list = []
    if config.model == "direct":
        rows = _run_direct(config, problem, reg, x0)
    else:
        rows = _run_dualgap(config, problem, reg, x0)
    rows.sort(key=lambda r: (r.model, r.regularizer, r.epsilon))
    if not config.timing:
        for r in rows:
            r.wall_time_s = 0.0
    if config.out:
        _write_rows(rows, config.out, config.fmt)
    return rows


def _row_shell(config, problem, eps) -> ResultRow:
    return ResultRow(problem=problem.name if config.problem.endswith(".ini")
                     else config.problem,
                     model=config.model, regularizer=config.regularizer, epsilon=eps,
                     iterations=0, wall_time_s=0.0, dist_to_reg_solution=None,
                     dist_to_S0=None, final_gap=None, exactness="")


def _run_direct(config, problem, reg, x0) -> list:
    eps_desc = tuple(sorted(set(float(e) for e in config.epsilons), reverse=True))
    inner = InnerConfig(seed=config.seed,
                        experimental_nonsmooth=config.experimental_nonsmooth,
                        **({"max_iterations": config.max_iter}
                           if config.max_iter else {}))
    outer = OuterConfig(epsilons=eps_desc, tau=config.tau, inner=inner)
    rows = []
    failure = None
    try:
        trace, _ = sequential_inexact_descent(problem, x0, outer, reg)
        records = trace.outer
    except (StepFailureError, MaxIterationsError) as err:
        failure = err
        records = err.partial_trace.outer if hasattr(err, "partial_trace") else []
    ref_cache: dict = {}
    for rec in records:
        row = _row_shell(config, problem, rec.epsilon)
        row.iterations = rec.inner_iterations
        row.wall_time_s = rec.wall_time_s
        row.final_gap = rec.theta
        row.dist_to_S0 = rec.dist_S0
        if config.regularizer == "l2":
            row.dist_to_reg_solution = _dist_to_reference(
                problem, reg, rec.epsilon, rec.x, ref_cache)
        row.exactness = _exactness_at(problem, rec.x, config.tol, config.seed)
        rows.append(row)
    done = {r.epsilon for r in rows}
    for e in eps_desc:
        if e not in done:
            row = _row_shell(config, problem, e)
            row.exactness = f"error:{type(failure).__name__}" if failure else "error"
            rows.append(row)
    return rows


def _dist_to_reference(problem, reg, eps, x, cache) -> Optional[float]:
    key = (problem.name, eps)
    if key not in cache:
        try:
            cache[key] = reference_solution(problem, eps, reg)[0]
        except (ValueError, RuntimeError):
            cache[key] = None
    ref = cache[key]
    if ref is None:
        return None
    return float(np.linalg.norm(np.asarray(x, dtype=float) - ref))


def _run_dualgap(config, problem, reg, x0) -> list:
    rows = []
    for e in sorted(set(float(v) for v in config.epsilons), reverse=True):
        row = _row_shell(config, problem, e)
        sg = SubgradientConfig(seed=config.seed,
                               **({"max_iterations": config.max_iter}
                                  if config.max_iter else {}))
        tick = time.perf_counter()
        try:
            x, trace = solve_pge(problem, reg, e, x0, sg)
        except Exception as err:  # per-cell isolation
            row.wall_time_s = time.perf_counter() - tick
            row.exactness = f"error:{type(err).__name__}"
            rows.append(row)
            continue
        row.wall_time_s = time.perf_counter() - tick
        row.iterations = trace.iterations
        row.dist_to_S0 = _dist_S0(problem, x)
        row.final_gap = dual_gap(problem, x, DualGapConfig(seed=config.seed)).value
        row.exactness = _exactness_at(problem, x, config.tol, config.seed)
        rows.append(row)
    return rows


def table1(out_path: Optional[str] = None, fmt: str = "csv", seed: int = 0,
           timing: bool = True) -> list:
    """All 20 cells (2 models x 2 regularizers x 5 epsilons) of the
    best-approximation benchmark from the initial point (1, -2, 1).

    Per-cell failures are marked inline; returns the rows and, when
    out_path is given, writes them in the requested format.
    """
    rows: list = []
    for model in MODELS:
        for reg in REGULARIZERS:
            cfg = ExperimentConfig(problem="example5_1", model=model, regularizer=reg,
                                   epsilons=TABLE1_EPSILONS, seed=seed,
                                   x0=(1.0, -2.0, 1.0), timing=timing,
                                   experimental_nonsmooth=True)
            rows.extend(run_experiment(cfg))
    rows.sort(key=lambda r: (r.model, r.regularizer, r.epsilon))
    if out_path is not None:
        _write_rows(rows, out_path, fmt)
    return rows


# ---------------------------------------------------------------------------
# emitters
# ---------------------------------------------------------------------------

def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in rows:
        d = r.to_dict()
        lines.append(",".join(_cell(d[c]) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def rows_to_json(rows) -> str:
    return json.dumps([r.to_dict() for r in rows], indent=2) + "\n"


def _write_rows(rows, path: str, fmt: str):
    text = rows_to_csv(rows) if fmt == "csv" else rows_to_json(rows)
    with open(path, "w") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# invariant check suites
# ---------------------------------------------------------------------------

@dataclass
class CheckReport:
    suite: str
    lines: list = field(default_factory=list)  # (name, passed, margin text)

    def record(self, name: str, passed: bool, margin: str):
        self.lines.append((name, bool(passed), margin))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.lines)

    def render(self) -> str:
        out = [f"suite {self.suite}"]
        for name, ok, margin in self.lines:
            out.append(f"{'PASS' if ok else 'FAIL'}  {name}  ({margin})")
        out.append(f"{'all checks passed' if self.passed else 'FAILURES present'}")
        return "\n".join(out)


def _check_core_geometry(seed: int) -> CheckReport:
    report = CheckReport("core-geometry")
    rng = np.random.default_rng(seed)
    sets = {
        "box": box([-1.0, 0.0], [1.0, 2.0]),
        "orthant": shifted_orthant([0.0, -0.25, 0.25]),
        "ball": ball([0.5, -0.5, 0.0], 1.5),
        "plane_box_product": example_5_1().set,
    }
    for name, s in sets.items():
        Z = rng.standard_normal((1000, s.dimension)) * 3.0
        W = rng.standard_normal((1000, s.dimension)) * 3.0
        worst_idem = worst_nonexp = 0.0
        all_in = True
        for z, w in zip(Z, W):
            pz, pw = s.project(z), s.project(w)
            worst_idem = max(worst_idem, float(np.linalg.norm(s.project(pz) - pz)))
            worst_nonexp = max(worst_nonexp,
                               float(np.linalg.norm(pz - pw) - np.linalg.norm(z - w)))
            all_in = all_in and s.contains(pz, 1e-10)
        report.record(f"{name}: projection idempotent", worst_idem <= 1e-10,
                      f"worst drift {worst_idem:.2e}")
        report.record(f"{name}: projection nonexpansive", worst_nonexp <= 1e-10,
                      f"worst excess {worst_nonexp:.2e}")
        report.record(f"{name}: projected points feasible", all_in, "1000 points")
    return report


def _check_gap_oracle(seed: int) -> CheckReport:
    report = CheckReport("gap-oracle")
    rng = np.random.default_rng(seed)
    regs = (l1_regularizer(), tikhonov())
    cases = [affine_monotone(1, seed), affine_monotone(2, seed),
             strongly_monotone_quadratic(2, seed)]
    n_checked = 0
    for problem in cases:
        lo, hi = problem.bounding_box
        h = 1e-3 * float(np.linalg.norm(np.asarray(hi) - np.asarray(lo)))
        worst = 0.0
        for _ in range(17):
            x = problem.set.project(rng.uniform(-1.5, 1.5, size=problem.dimension))
            alpha = float(rng.uniform(0.5, 3.0))
            eps = float(rng.choice([0.0, 0.3]))
            reg = regs[int(rng.integers(2))]
            explicit = theta_alpha(problem, x, alpha, eps, reg).value
            grid = brute_force_gap(problem, x, alpha, eps, reg=reg, grid_resolution=h)
            worst = max(worst, abs(explicit - grid))
            n_checked += 1
        report.record(f"{problem.name}: explicit vs grid", worst <= 5 * h,
                      f"worst |diff| {worst:.2e} vs 5h={5 * h:.2e}")
    report.record("total triples", n_checked >= 50, f"{n_checked} triples")
    return report


def _check_bounds_soundness(seed: int) -> CheckReport:
    report = CheckReport("bounds-soundness")
    problem = example_5_1()
    reg = tikhonov()
    rng = np.random.default_rng(seed)
    taus = {0.5: 1e-6, 0.1: 1e-5, 0.01: 1e-4}
    refs = {e: reference_solution(problem, e, reg)[0] for e in taus}
    worst_slack = np.inf
    ok_all = True
    for e, tau in taus.items():
        for _ in range(4):
            x0 = problem.set.project(rng.uniform(-1.5, 1.5, size=3))
            x, tr = solve_inner(problem, x0, e, tau, InnerConfig(seed=seed), reg)
            p = bounds.stopping_threshold(tau, 2.0, 1.0, 1.0, 1.0, 2.0, e).radius
            ok_p = (tr.p == p) and (tr.theta_final <= p)
            radius = bounds.dgap_error_bound(max(tr.theta_final, 0.0),
                                             2.0, 1.0, 1.0, 1.0, 2.0, e).radius
            dist = float(np.linalg.norm(x - refs[e]))
            ok_all = ok_all and ok_p and (dist <= radius) and (dist <= tau)
            if radius > 0:
                worst_slack = min(worst_slack, radius / max(dist, 1e-300))
    report.record("stopping threshold matches and is met", ok_all,
                  "p recomputed bit-for-bit")
    report.record("distance within certified radius", ok_all,
                  f"tightest radius/dist {worst_slack:.2f}x")
    return report


def _check_exactness(seed: int) -> CheckReport:
    report = CheckReport("exactness")
    problem = example_5_1()
    x0 = problem.default_x0
    tol = 1e-7
    for e in (0.5, 0.01):
        x, _ = solve_pge(problem, l1_regularizer(), e, x0, SubgradientConfig(seed=seed))
        verdict = bounds.exactness_check(problem, problem.set.project(x), tol=tol)
        report.record(f"l1 eps={e}: exact", verdict == bounds.EXACT, verdict)
    for e in (0.5, 0.005):
        x, _ = solve_pge(problem, tikhonov(), e, x0, SubgradientConfig(seed=seed))
        verdict = bounds.exactness_check(problem, problem.set.project(x), tol=tol)
        report.record(f"l2 eps={e}: not_exact", verdict == bounds.NOT_EXACT, verdict)
    xs = problem.solution_oracle.sample_S0(3, seed)
    for i, x in enumerate(xs):
        verdict = bounds.exactness_check(problem, x, tol=tol)
        report.record(f"S0 sample {i}: exact", verdict == bounds.EXACT, verdict)
    return report


CHECK_SUITES = {
    "core-geometry": _check_core_geometry,
    "gap-oracle": _check_gap_oracle,
    "bounds-soundness": _check_bounds_soundness,
    "exactness": _check_exactness,
}


def check_invariants(suite: str, seed: int = 0) -> CheckReport:
    """Run a named property suite; see CHECK_SUITES for the catalogue."""
    try:
        fn = CHECK_SUITES[suite]
    except KeyError:
        known = ", ".join(sorted(CHECK_SUITES))
        raise ConfigError(f"unknown suite {suite!r}; available: {known}") from None
    return fn(seed)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vigap",
        description="Regularized solvers and diagnostics for monotone "
                    "variational inequalities")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment sweep")
    run.add_argument("--problem", required=True,
                     help="builtin problem name or path to an .ini problem file")
    run.add_argument("--model", required=True, choices=MODELS)
    run.add_argument("--reg", required=True, choices=REGULARIZERS)
    run.add_argument("--eps", required=True,
                     help="comma-separated regularization parameters")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--tol", type=float, default=1e-6,
                     help="exactness tolerance on the dual gap")
    run.add_argument("--tau", type=float, default=1e-6,
                     help="inner error tolerance for the direct model")
    run.add_argument("--max-iter", type=int, default=None)
    run.add_argument("--x0", default=None, help="comma-separated start point")
    run.add_argument("--out", default=None, help="output file (default: stdout)")
    run.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    run.add_argument("--no-timing", action="store_true",
                     help="write wall_time_s as 0.0 for byte-identical reruns")
    run.add_argument("--experimental-nonsmooth", action="store_true",
                     help="allow the direct model with the l1 regularizer")

    t1 = sub.add_parser("table1", help="run the full 20-cell comparison table")
    t1.add_argument("--out", default="table1.csv")
    t1.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    t1.add_argument("--seed", type=int, default=0)
    t1.add_argument("--no-timing", action="store_true")

    chk = sub.add_parser("check", help="run an invariant check suite")
    chk.add_argument("suite", help=f"one of: {', '.join(sorted(CHECK_SUITES))}")
    chk.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            eps = tuple(float(v) for v in args.eps.split(",") if v.strip())
            x0 = tuple(float(v) for v in args.x0.split(",")) if args.x0 else None
            cfg = ExperimentConfig(
                problem=args.problem, model=args.model, regularizer=args.reg,
                epsilons=eps, seed=args.seed, tol=args.tol, tau=args.tau,
                max_iter=args.max_iter, x0=x0, out=args.out, fmt=args.fmt,
                timing=not args.no_timing,
                experimental_nonsmooth=args.experimental_nonsmooth)
            rows = run_experiment(cfg)  # writes cfg.out itself when set
            if not cfg.out:
                text = rows_to_csv(rows) if cfg.fmt == "csv" else rows_to_json(rows)
                sys.stdout.write(text)
            return 0
        if args.command == "table1":
            table1(args.out, fmt=args.fmt, seed=args.seed, timing=not args.no_timing)
            print(f"wrote {args.out}")
            return 0
        if args.command == "check":
            report = check_invariants(args.suite, seed=args.seed)
            print(report.render())
            return 0 if report.passed else 1
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
