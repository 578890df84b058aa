"""Adaptive loops: solve -> estimate -> mark -> refine, plus rate analysis.

Two equivalent formulations are provided.  ``run_adaptive`` is indexed by
meshes: on each level the fixed-point solver iterates until its stopping
criterion holds, then marking and refinement produce the next mesh, and
with nested iteration the accepted iterate (prolongated) seeds the next
level.  ``run_full_sequence`` is indexed by single fixed-point steps and
refines only when the stopping criterion holds; grouping its steps by mesh
reproduces the mesh-indexed run exactly under a deterministic linear
solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional

import numpy as np

from .estimator import compute_indicators, dorfler_mark
from .mesh import Triangulation, refine
from .nonlinearity import MonotoneProblem
from .picard import PicardConfig, PicardNonTermination, iterate_until_stop, picard_step
from .space import (FESpace, FEFunction, RieszSolver, assemble_load, build_space,
                    h_norm_of, impose_dirichlet, prolongate, zero_function)

BUDGET_REACHED = "budget-reached"
LUCKY_BREAKDOWN = "lucky-breakdown"
PICARD_NONTERMINATION = "picard-nontermination"

CSV_HEADER = "level,n_elements,n_dofs,estimator,picard_count,h1_error,cum_work"


class InsufficientDataError(ValueError):
    """Not enough trace records for the requested analysis."""


@dataclass
class DriverConfig:
    theta: float
    lam: float
    nested: bool = True
    max_dofs: int = 200_000
    solver: str = "direct"
    picard: Optional[PicardConfig] = None

    def __post_init__(self):
        if not 0.0 < self.theta <= 1.0:
            raise ValueError("theta must lie in (0, 1]")
        if self.lam <= 0.0:
            raise ValueError("lambda must be positive")
        if self.picard is None:
            self.picard = PicardConfig(lam=self.lam)
        else:
            self.picard = replace(self.picard, lam=self.lam)


@dataclass
class LevelRecord:
    level: int
    n_elements: int
    n_dofs: int
    estimator: float
    picard_count: int
    h1_error: Optional[float]
    cum_work: int
    n_marked: int = 0


@dataclass
class AdaptiveTrace:
    records: List[LevelRecord] = field(default_factory=list)
    termination: Optional[str] = None
    iterates: Optional[List[FEFunction]] = None


@dataclass
class StepRecord:
    step: int
    level: int
    n_elements: int
    n_dofs: int
    increment: float
    estimator: float
    refined: bool


@dataclass
class FullSequenceTrace:
    steps: List[StepRecord] = field(default_factory=list)
    termination: Optional[str] = None
    iterates: Optional[List[FEFunction]] = None
    level_marked: List[int] = field(default_factory=list)
    level_errors: List[Optional[float]] = field(default_factory=list)

    def to_level_trace(self) -> AdaptiveTrace:
        """Group steps by mesh: level k collects the steps between refinements."""
        records: List[LevelRecord] = []
        iterates: Optional[List[FEFunction]] = [] if self.iterates is not None else None
        count = 0
        cum_work = 0
        for i, s in enumerate(self.steps):
            count += 1
            last_of_level = s.refined or i + 1 == len(self.steps)
            if last_of_level:
                cum_work += count * s.n_elements
                level = len(records)
                records.append(LevelRecord(
                    level=level, n_elements=s.n_elements, n_dofs=s.n_dofs,
                    estimator=s.estimator, picard_count=count,
                    h1_error=self.level_errors[level] if level < len(self.level_errors) else None,
                    cum_work=cum_work,
                    n_marked=self.level_marked[level] if level < len(self.level_marked) else 0,
                ))
                if iterates is not None:
                    iterates.append(self.iterates[i])
                count = 0
        return AdaptiveTrace(records=records, termination=self.termination, iterates=iterates)


def run_adaptive(problem: MonotoneProblem, initial_mesh: Triangulation,
                 config: DriverConfig, error_fn: Optional[Callable] = None,
                 keep_iterates: bool = False) -> AdaptiveTrace:
    """Mesh-indexed adaptive loop with inexact fixed-point solves.

    The initial guess on the coarsest mesh is zero (Dirichlet data
    interpolated); with ``config.nested`` each new level starts from the
    prolongated previous iterate, otherwise from zero.  ``error_fn`` is
    called as ``error_fn(space, u)`` to fill the optional error column.
    """
    trace = AdaptiveTrace(iterates=[] if keep_iterates else None)
    mesh = initial_mesh
    space = build_space(mesh)
    u0 = zero_function(space, problem.dirichlet)
    cum_work = 0
    level = 0
    while True:
        solver = RieszSolver(space, method=config.solver, tol=config.picard.linear_tol)
        load_full = assemble_load(space, problem.f, problem.g)
        callback = lambda u: compute_indicators(problem, space, u)  # noqa: E731
        try:
            u, ptrace = iterate_until_stop(problem, space, u0, callback, config.picard,
                                           solver, load_full)
        except PicardNonTermination as stop:
            last = stop.trace.records[-1]
            cum_work += stop.trace.count * mesh.n_elements
            trace.records.append(LevelRecord(
                level=level, n_elements=mesh.n_elements, n_dofs=space.n_dofs,
                estimator=last.eta, picard_count=stop.trace.count,
                h1_error=None, cum_work=cum_work))
            if keep_iterates:
                trace.iterates.append(stop.iterate)
            trace.termination = PICARD_NONTERMINATION
            return trace

        indicators = compute_indicators(problem, space, u)
        marked = dorfler_mark(indicators, config.theta)
        cum_work += ptrace.count * mesh.n_elements
        record = LevelRecord(
            level=level, n_elements=mesh.n_elements, n_dofs=space.n_dofs,
            estimator=indicators.total, picard_count=ptrace.count,
            h1_error=error_fn(space, u) if error_fn is not None else None,
            cum_work=cum_work, n_marked=len(marked.elements))
        trace.records.append(record)
        if keep_iterates:
            trace.iterates.append(u)

        if len(marked.elements) == 0:
            trace.termination = LUCKY_BREAKDOWN
            return trace

        new_mesh = refine(mesh, marked.elements)
        new_space = build_space(new_mesh)
        if new_space.n_dofs > config.max_dofs:
            trace.termination = BUDGET_REACHED
            return trace
        if config.nested:
            u0 = prolongate(u, new_space)
            impose_dirichlet(u0, problem.dirichlet)
        else:
            u0 = zero_function(new_space, problem.dirichlet)
        mesh, space = new_mesh, new_space
        level += 1


def run_full_sequence(problem: MonotoneProblem, initial_mesh: Triangulation,
                      config: DriverConfig, error_fn: Optional[Callable] = None,
                      keep_iterates: bool = False) -> FullSequenceTrace:
    """Step-indexed loop: one fixed-point step per outer index.

    The mesh is refined only on steps where the stopping criterion holds;
    otherwise it stays fixed.  Nested iteration is built in (each step
    continues from the previous iterate).
    """
    trace = FullSequenceTrace(iterates=[] if keep_iterates else None)
    mesh = initial_mesh
    space = build_space(mesh)
    solver = RieszSolver(space, method=config.solver, tol=config.picard.linear_tol)
    load_full = assemble_load(space, problem.f, problem.g)
    u_prev = zero_function(space, problem.dirichlet)
    level = 0
    steps_on_level = 0
    step = 0
    while True:
        u = picard_step(problem, space, u_prev, solver, load_full)
        increment = h_norm_of(mesh, u.coefficients - u_prev.coefficients)
        indicators = compute_indicators(problem, space, u)
        steps_on_level += 1
        step += 1
        stop_holds = increment <= config.lam * indicators.total
        refined = False
        if stop_holds:
            marked = dorfler_mark(indicators, config.theta)
            trace.level_marked.append(len(marked.elements))
            trace.level_errors.append(error_fn(space, u) if error_fn is not None else None)
            if len(marked.elements) == 0:
                trace.steps.append(StepRecord(step, level, mesh.n_elements, space.n_dofs,
                                              increment, indicators.total, refined=True))
                if keep_iterates:
                    trace.iterates.append(u)
                trace.termination = LUCKY_BREAKDOWN
                return trace
            new_mesh = refine(mesh, marked.elements)
            new_space = build_space(new_mesh)
            if new_space.n_dofs > config.max_dofs:
                trace.steps.append(StepRecord(step, level, mesh.n_elements, space.n_dofs,
                                              increment, indicators.total, refined=True))
                if keep_iterates:
                    trace.iterates.append(u)
                trace.termination = BUDGET_REACHED
                return trace
            refined = True
        trace.steps.append(StepRecord(step, level, mesh.n_elements, space.n_dofs,
                                      increment, indicators.total, refined=refined))
        if keep_iterates:
            trace.iterates.append(u)
        if refined:
            u_prev = prolongate(u, new_space)
            impose_dirichlet(u_prev, problem.dirichlet)
            mesh, space = new_mesh, new_space
            solver = RieszSolver(space, method=config.solver, tol=config.picard.linear_tol)
            load_full = assemble_load(space, problem.f, problem.g)
            level += 1
            steps_on_level = 0
        else:
            u_prev = u
            if steps_on_level >= config.picard.max_iter:
                trace.termination = PICARD_NONTERMINATION
                return trace


_RATE_AXES = {"elements": "n_elements", "dofs": "n_dofs", "work": "cum_work"}


def fit_rate(trace: AdaptiveTrace, x: str = "elements", window: float = 0.5) -> float:
    """Empirical decay rate: minus the log-log slope of the estimator.

    The least-squares fit uses the trailing ``window`` fraction of levels
    and needs at least five usable records there.
    """
    if x not in _RATE_AXES:
        raise ValueError(f"unknown axis {x!r}; choose from {sorted(_RATE_AXES)}")
    attr = _RATE_AXES[x]
    records = [r for r in trace.records if r.estimator > 0.0]
    start = int(np.floor(len(records) * (1.0 - window)))
    tail = records[start:]
    if len(tail) < 5:
        raise InsufficientDataError(f"need at least 5 records in the window, have {len(tail)}")
    xs = np.log([getattr(r, attr) for r in tail])
    ys = np.log([r.estimator for r in tail])
    slope = np.polyfit(xs, ys, 1)[0]
    return float(-slope)


def _linear_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(((y - pred) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), r2


def picard_growth_check(trace: AdaptiveTrace, window: float = 0.5) -> str:
    """Classify the per-level fixed-point counts.

    ``bounded``: the trailing-window slope of counts against log #T is at
    most 0.1 and counts in the trailing window (beyond level 5) span at
    most 2.  ``logarithmic``: the count grows linearly in log #T
    (R^2 >= 0.8, positive slope).  Anything else is ``irregular``.
    """
    records = trace.records
    if len(records) < 8:
        raise InsufficientDataError("need at least 8 levels to classify")
    counts = np.array([r.picard_count for r in records], dtype=float)
    logn = np.log([r.n_elements for r in records])

    start = int(np.floor(len(records) * (1.0 - window)))
    tail_slope, _ = _linear_fit(logn[start:], counts[start:])
    late = counts[max(6, start):]
    if len(late) and tail_slope <= 0.1 and late.max() - late.min() <= 2:
        return "bounded"
    slope, r2 = _linear_fit(logn, counts)
    if slope > 0 and r2 >= 0.8:
        return "logarithmic"
    return "irregular"


def write_trace_csv(trace: AdaptiveTrace, path) -> None:
    lines = [CSV_HEADER]
    for r in trace.records:
        err = "" if r.h1_error is None else f"{r.h1_error:.17g}"
        lines.append(f"{r.level},{r.n_elements},{r.n_dofs},{r.estimator:.17g},"
                     f"{r.picard_count},{err},{r.cum_work}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trace_csv(path) -> AdaptiveTrace:
    with open(path) as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header!r}")
        records = []
        for line in fh:
            parts = line.strip().split(",")
            records.append(LevelRecord(
                level=int(parts[0]), n_elements=int(parts[1]), n_dofs=int(parts[2]),
                estimator=float(parts[3]), picard_count=int(parts[4]),
                h1_error=float(parts[5]) if parts[5] else None,
                cum_work=int(parts[6])))
    return AdaptiveTrace(records=records, termination=None)
