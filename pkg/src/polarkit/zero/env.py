"""Kernel-construction environment.

The agent fills a row-reversed kernel bottom row first, one bit per step.
When the current row reaches its target weight it is checked against the
target partial distance; a passing row is kept and play advances, a
failing row is cleared.  Finishing the top row scores the completed
kernel's decoding complexity through a shaped terminal reward.

States are immutable; `step_env` is a pure function, which lets tree
search branch from any state without copying machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from polarkit.complexity import CALIBRATED_MODE, ReuseMode, total_complexity_cached
from polarkit.gf2 import BitMatrix, coset_min_distance
from polarkit.pdp import PartialDistanceProfile
from polarkit.reference import RANDOM_SEARCH_REFERENCE


@dataclass(frozen=True)
class RewardConfig:
    step_penalty: float = 0.1
    row_reward: float = 5.0
    gamma: float = 2.0
    comp_min: int = 650
    comp_max: int = 1500
    r_min: float = 0.0
    r_max: float = 850.0
    game_limit: int = 1200

    def __post_init__(self) -> None:
        if self.comp_min >= self.comp_max:
            raise ValueError("comp_min must be below comp_max")
        if self.r_min > self.r_max:
            raise ValueError("r_min must not exceed r_max")
        if self.step_penalty < 0:
            raise ValueError("step_penalty must be nonnegative")


def default_reward_config(ell: int) -> RewardConfig:
    """Published constants where stated (ell 12 and 16); for other sizes
    the bounds follow the same recipe from the random-search reference
    statistics (floor of the best known / ceiling of the worst observed)."""
    if ell == 16:
        return RewardConfig(0.1, 10.0, 2.0, 1300, 5000, 0.0, 3700.0, 100 * ell)
    if ell == 12:
        return RewardConfig(0.1, 5.0, 2.0, 650, 1500, 0.0, 850.0, 100 * ell)
    lo, hi, _ = RANDOM_SEARCH_REFERENCE.get(ell, (32, 64, 0))
    comp_min = max(1, (lo * 9 // 10) // 10 * 10)
    comp_max = -(-hi * 11 // 10) // 10 * 10 + 10
    return RewardConfig(
        0.1, 5.0, 2.0, comp_min, comp_max, 0.0, float(comp_max - comp_min), 100 * ell
    )


@dataclass(frozen=True)
class EnvState:
    ell: int
    rows: tuple[int, ...]  # row-reversed: rows[0] is the bottom kernel row
    current_row: int
    steps: int
    targets: tuple[int, ...]  # row-reversed distance targets
    done: bool

    def kernel(self) -> BitMatrix:
        return BitMatrix(self.ell, tuple(reversed(self.rows)))


@dataclass(frozen=True)
class Transition:
    state: EnvState
    action: int
    reward: float


def trans_reward(comp: int, cfg: RewardConfig) -> float:
    comp = min(max(comp, cfg.comp_min), cfg.comp_max)
    frac = (cfg.comp_max - comp) / (cfg.comp_max - cfg.comp_min)
    return cfg.r_min + (cfg.r_max - cfg.r_min) * frac**cfg.gamma


def forced_row_count(target: PartialDistanceProfile) -> int:
    """Bottom rows whose content is forced: a distance target of ell
    admits only the all-ones row."""
    count = 0
    for d in reversed(target.distances):
        if d != target.ell:
            break
        count += 1
    return count


def reset_env(
    target: PartialDistanceProfile,
    seed: int | np.random.Generator | None = None,
    preset_bits: int = 1,
    install_forced: bool = True,
) -> EnvState:
    """Install the forced bottom rows, then preset a few random bits of
    the first free row.  Presets do not count as steps.  With
    install_forced=False the agent must play every bit itself, which
    makes the episode total match the closed-form return exactly."""
    ell = target.ell
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    reversed_targets = tuple(reversed(target.distances))
    rows = [0] * ell
    forced = forced_row_count(target) if install_forced else 0
    all_ones = (1 << ell) - 1
    for i in range(forced):
        rows[i] = all_ones
    if forced < ell and install_forced:
        want = reversed_targets[forced]
        presets = min(preset_bits, max(want - 1, 0))
        cols = rng.choice(ell, size=presets, replace=False)
        for j in cols:
            rows[forced] |= 1 << int(j)
    return EnvState(ell, tuple(rows), forced, 0, reversed_targets, forced == ell)


def legal_actions(state: EnvState) -> list[int]:
    """Unset bit positions of the current row (bit j = kernel column)."""
    if state.done:
        return []
    row = state.rows[state.current_row]
    return [j for j in range(state.ell) if not (row >> j) & 1]


def step_env(
    state: EnvState,
    action: int,
    cfg: RewardConfig,
    policy: ReuseMode = CALIBRATED_MODE,
) -> tuple[EnvState, float, Transition]:
    if state.done:
        raise ValueError("episode is finished")
    row = state.rows[state.current_row]
    if not 0 <= action < state.ell or (row >> action) & 1:
        raise ValueError(f"illegal action {action}")
    row |= 1 << action
    steps = state.steps + 1
    i = state.current_row
    rows = list(state.rows)
    rows[i] = row
    reward = -cfg.step_penalty
    done = False
    if row.bit_count() == state.targets[i]:
        if coset_min_distance(row, rows[:i], stop_below=state.targets[i]) == state.targets[i]:
            reward = cfg.row_reward
            i += 1
            if i == state.ell:
                comp = total_complexity_cached(BitMatrix(state.ell, tuple(reversed(rows))), policy)
                reward += trans_reward(comp, cfg)
                done = True
        else:
            rows[state.current_row] = 0
    if steps >= cfg.game_limit and not done:
        done = True
    nxt = EnvState(state.ell, tuple(rows), i, steps, state.targets, done)
    return nxt, reward, Transition(state, action, reward)


def episode_return(transitions: list[Transition]) -> float:
    return float(sum(t.reward for t in transitions))


def closed_form_return(steps: int, ell: int, comp: int, cfg: RewardConfig) -> float:
    """Total of a successful episode that played every bit itself: step
    penalties on non-completing steps, one row reward per row, and the
    shaped terminal bonus."""
    return -cfg.step_penalty * (steps - ell) + trans_reward(comp, cfg) + ell * cfg.row_reward
