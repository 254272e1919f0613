"""Non-learned kernel search baselines.

Two strategies over the same goal -- find an ell x ell kernel whose
partial distance profile equals a target -- plus Monte-Carlo complexity
statistics over the kernels the random strategy produces.

Both build the matrix bottom row first: row i must be a weight-D_i word
at coset distance exactly D_i from the span of the rows below it, so the
rows already placed fully determine which candidates remain.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from polarkit.complexity import CALIBRATED_MODE, ReuseMode, total_complexity_cached
from polarkit.gf2 import BitMatrix, coset_min_distance, weight_vectors
from polarkit.pdp import (
    KernelRecord,
    PartialDistanceProfile,
    compute_pdp,
    kernel_record,
    meets_target,
)


@dataclass(frozen=True)
class BruteConfig:
    ell: int
    target: PartialDistanceProfile
    step_limit: int = 10**7
    #: Candidates within a row are visited in a deterministic seeded
    #: shuffle, and the step budget is split across `restarts` attempts
    #: with different shuffles.  Plain ascending order walks into
    #: prefixes with no completion at some widths (ell=14 exceeds 10^7
    #: steps); restarting with a fresh order escapes those traps while
    #: keeping the search reproducible.
    order_seed: int = 1234
    restarts: int = 10

    def __post_init__(self) -> None:
        if self.step_limit <= 0:
            raise ValueError("step_limit must be positive")
        if self.restarts <= 0:
            raise ValueError("restarts must be positive")
        if self.target.ell != self.ell:
            raise ValueError("target profile size must match ell")


@dataclass(frozen=True)
class Infeasible:
    """The target profile admits no kernel (search space exhausted)."""

    steps: int


@dataclass(frozen=True)
class StepLimitExceeded:
    steps: int


@dataclass(frozen=True)
class RandomSearchStats:
    ell: int
    iterations: int
    feasible_count: int
    min_complexity: int | None
    max_complexity: int | None
    best_kernel: KernelRecord | None
    histogram: dict[int, int]

    def to_json_dict(self) -> dict:
        return {
            "ell": self.ell,
            "iterations": self.iterations,
            "feasible_count": self.feasible_count,
            "min_complexity": self.min_complexity,
            "max_complexity": self.max_complexity,
            "best_kernel_rows": (
                [f"{r:#x}" for r in self.best_kernel.matrix.rows]
                if self.best_kernel
                else None
            ),
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    def histogram_csv(self) -> str:
        lines = ["complexity,count"]
        lines += [f"{c},{n}" for c, n in sorted(self.histogram.items())]
        return "\n".join(lines) + "\n"


def brute_force_search(cfg: BruteConfig) -> KernelRecord | Infeasible | StepLimitExceeded:
    """Backtracking enumeration, bottom row first.

    One step is one candidate distance test; the step budget is shared
    across all restart attempts.  The outcome is deterministic: the
    first kernel in the seeded order, exhaustion of the search space
    (within any single attempt, which is a complete enumeration), or the
    step limit.
    """
    ell = cfg.ell
    target = cfg.target.distances
    total_steps = 0
    per_attempt = max(1, cfg.step_limit // cfg.restarts)
    for a in range(cfg.restarts):
        budget = min(per_attempt, cfg.step_limit - total_steps)

        def candidates(level: int):
            vs = list(weight_vectors(ell, target[ell - 1 - level]))
            np.random.default_rng([cfg.order_seed, a, level]).shuffle(vs)
            return iter(vs)

        rows: list[int] = []  # rows[0] is the bottom row (ell-1), built upward
        iters = [candidates(0)]
        steps = 0
        capped = False
        while iters and not capped:
            level = len(iters) - 1  # filling kernel row ell-1-level
            advanced = False
            for cand in iters[-1]:
                steps += 1
                d = coset_min_distance(cand, rows, stop_below=target[ell - 1 - level])
                if d == target[ell - 1 - level]:
                    rows.append(cand)
                    if len(rows) == ell:
                        kernel = BitMatrix(ell, tuple(reversed(rows)))
                        assert meets_target(kernel, cfg.target)
                        return kernel_record(kernel)
                    iters.append(candidates(len(rows)))
                    advanced = True
                if advanced or steps >= budget:
                    capped = steps >= budget
                    break
            if not advanced and not capped:
                iters.pop()
                if rows:
                    rows.pop()
        total_steps += steps
        if not capped:
            # a full enumeration finished without a kernel: truly infeasible
            return Infeasible(total_steps)
        if total_steps >= cfg.step_limit:
            break
    return StepLimitExceeded(total_steps)


def random_trial(
    ell: int,
    target: PartialDistanceProfile,
    rng: np.random.Generator,
    step_cap: int | None = None,
) -> BitMatrix | None:
    """One uniform-sampling construction attempt.

    Rows are grown bottom-up by picking unset bit positions uniformly; a
    row that reaches its target weight at the wrong distance is cleared
    and retried.  The trial fails once the placement cap is hit.
    """
    cap = 50 * ell if step_cap is None else step_cap
    dist = target.distances
    rows: list[int] = []
    placements = 0
    level = 0
    row = 0
    while level < ell:
        want = dist[ell - 1 - level]
        while row.bit_count() < want:
            if placements >= cap:
                return None
            free = [j for j in range(ell) if not (row >> j) & 1]
            row |= 1 << free[int(rng.integers(len(free)))]
            placements += 1
        if coset_min_distance(row, rows, stop_below=want) == want:
            rows.append(row)
            level += 1
        row = 0
    return BitMatrix(ell, tuple(reversed(rows)))


def random_agent_search(
    ell: int,
    target: PartialDistanceProfile,
    iterations: int,
    seed: int,
    policy: ReuseMode = CALIBRATED_MODE,
    step_cap: int | None = None,
    trial_offset: int = 0,
) -> RandomSearchStats:
    """Monte-Carlo statistics of decoding complexity over random feasible
    kernels.  Each trial draws from an independent stream derived from
    (seed, global trial index), so runs shard and nest deterministically."""
    if iterations <= 0:
        raise ValueError("iterations must be positive")
    histogram: dict[int, int] = {}
    feasible = 0
    best: tuple[int, BitMatrix] | None = None
    worst: int | None = None
    for t in range(trial_offset, trial_offset + iterations):
        rng = np.random.default_rng([seed, t])
        kernel = random_trial(ell, target, rng, step_cap)
        if kernel is None:
            continue
        assert compute_pdp(kernel).distances == target.distances
        comp = total_complexity_cached(kernel, policy)
        feasible += 1
        histogram[comp] = histogram.get(comp, 0) + 1
        if best is None or comp < best[0]:
            best = (comp, kernel)
        worst = comp if worst is None else max(worst, comp)
    record = kernel_record(best[1], best[0]) if best else None
    return RandomSearchStats(
        ell,
        iterations,
        feasible,
        best[0] if best else None,
        worst,
        record,
        histogram,
    )


def merge_stats(parts: list[RandomSearchStats]) -> RandomSearchStats:
    """Associative merge of shard results (same ell/seed stream assumed)."""
    if not parts:
        raise ValueError("nothing to merge")
    histogram: dict[int, int] = {}
    for p in parts:
        for c, n in p.histogram.items():
            histogram[c] = histogram.get(c, 0) + n
    with_best = [p for p in parts if p.best_kernel is not None]
    best = min(with_best, key=lambda p: p.min_complexity).best_kernel if with_best else None
    return RandomSearchStats(
        parts[0].ell,
        sum(p.iterations for p in parts),
        sum(p.feasible_count for p in parts),
        min((p.min_complexity for p in with_best), default=None),
        max((p.max_complexity for p in with_best), default=None),
        best,
        histogram,
    )
