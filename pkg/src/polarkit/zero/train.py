"""Self-play training loop.

Episodes are driven by the Gumbel tree search; transitions are stored in
a ring replay buffer as (encoded state, improved policy, normalized
return-to-go) and the network is updated between batches of episodes.
Per-iteration return statistics and the best kernel found go to a CSV
log that matches the reward-curve figures.
"""

from __future__ import annotations

import csv
import math
from collections import deque
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from polarkit.complexity import CALIBRATED_MODE, ReuseMode, total_complexity_cached
from polarkit.gf2 import BitMatrix
from polarkit.kernelio import write_kernel
from polarkit.pdp import target_profile
from polarkit.zero.env import (
    EnvState,
    RewardConfig,
    Transition,
    default_reward_config,
    episode_return,
    legal_actions,
    reset_env,
    step_env,
)
from polarkit.zero.mcts import MctsConfig, SearchSpec, mcts_select
from polarkit.zero.net import Network, NetworkSpec, encode_state


@dataclass(frozen=True)
class TrainConfig:
    ell: int = 12
    total_episodes: int = 20_000
    update_interval: int = 200  # episodes per iteration (reference runs use 2000)
    replay_capacity: int = 100_000
    batch_size: int = 256
    learning_rate: float = 3e-3
    momentum: float = 0.9
    updates_per_iteration: int = 64
    checkpoint_interval: int = 10  # iterations between checkpoints
    simulations: int = 32
    sampled_actions: int = 16
    preset_bits: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.update_interval > self.total_episodes:
            raise ValueError("update_interval must not exceed total_episodes")


def load_train_config(path: str | Path) -> TrainConfig:
    """Flat key=value text; unknown keys are rejected."""
    values: dict[str, object] = {}
    types = {f.name: f.type for f in fields(TrainConfig)}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in types:
            raise ValueError(f"unknown config key {key!r}")
        values[key] = float(val) if types[key] == "float" else int(val)
    return TrainConfig(**values)


def dump_train_config(cfg: TrainConfig) -> str:
    return "".join(f"{f.name}={getattr(cfg, f.name)}\n" for f in fields(TrainConfig))


@dataclass(frozen=True)
class EpisodeRecord:
    transitions: tuple[Transition, ...]
    policies: tuple[dict[int, float], ...]
    final_state: EnvState

    @property
    def succeeded(self) -> bool:
        return self.final_state.current_row == self.final_state.ell


def make_search_spec(
    network: Network,
    reward_cfg: RewardConfig,
    value_scale: float,
    policy: ReuseMode = CALIBRATED_MODE,
) -> SearchSpec:
    def step(state: EnvState, action: int):
        nxt, reward, _ = step_env(state, action, reward_cfg, policy)
        return nxt, reward, nxt.done

    def evaluate(state: EnvState):
        logits, value = network.predict(state)
        return logits, value * value_scale

    return SearchSpec(legal=legal_actions, step=step, evaluate=evaluate)


def value_scale_of(cfg: RewardConfig, ell: int) -> float:
    """Rough episode-return ceiling used to normalize value targets."""
    return cfg.r_max + ell * cfg.row_reward


def self_play_episode(
    network: Network,
    reward_cfg: RewardConfig,
    mcts_cfg: MctsConfig,
    rng: np.random.Generator,
    ell: int,
    preset_bits: int = 1,
    policy: ReuseMode = CALIBRATED_MODE,
) -> EpisodeRecord:
    spec = make_search_spec(network, reward_cfg, value_scale_of(reward_cfg, ell), policy)
    state = reset_env(target_profile(ell), rng, preset_bits)
    transitions: list[Transition] = []
    policies: list[dict[int, float]] = []
    while not state.done:
        action, improved = mcts_select(state, spec, mcts_cfg, rng)
        state, _, transition = step_env(state, action, reward_cfg, policy)
        transitions.append(transition)
        policies.append(improved)
    return EpisodeRecord(tuple(transitions), tuple(policies), state)


@dataclass
class TrainResult:
    best_complexity: int | None
    best_kernel: BitMatrix | None
    log_rows: list[dict]
    network: Network


def train_loop(
    cfg: TrainConfig,
    out_dir: str | Path | None = None,
    reward_cfg: RewardConfig | None = None,
    policy: ReuseMode = CALIBRATED_MODE,
) -> TrainResult:
    ell = cfg.ell
    reward_cfg = reward_cfg or default_reward_config(ell)
    mcts_cfg = MctsConfig(cfg.simulations, cfg.sampled_actions)
    rng = np.random.default_rng(cfg.seed)
    network = Network(NetworkSpec(ell), seed=cfg.seed)
    vscale = value_scale_of(reward_cfg, ell)
    replay: deque[tuple[np.ndarray, np.ndarray, float]] = deque(maxlen=cfg.replay_capacity)
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "train_config.txt").write_text(dump_train_config(cfg))
    best: tuple[int, BitMatrix] | None = None
    log_rows: list[dict] = []
    lr = cfg.learning_rate
    running_loss: float | None = None
    iterations = cfg.total_episodes // cfg.update_interval
    episodes_done = 0
    for iteration in range(1, iterations + 1):
        returns = []
        for _ in range(cfg.update_interval):
            record = self_play_episode(
                network, reward_cfg, mcts_cfg, rng, ell, cfg.preset_bits, policy
            )
            episodes_done += 1
            returns.append(episode_return(list(record.transitions)))
            if record.succeeded:
                kernel = record.final_state.kernel()
                comp = total_complexity_cached(kernel, policy)
                if best is None or comp < best[0]:
                    best = (comp, kernel)
            rewards = [t.reward for t in record.transitions]
            to_go = np.cumsum(rewards[::-1])[::-1]
            for transition, improved, z in zip(record.transitions, record.policies, to_go):
                pol = np.zeros(ell)
                for a, prob in improved.items():
                    pol[a] = prob
                replay.append((encode_state(transition.state), pol, float(z) / vscale))
        for _ in range(cfg.updates_per_iteration):
            if len(replay) < cfg.batch_size:
                break
            idx = rng.integers(len(replay), size=cfg.batch_size)
            batch = [replay[int(i)] for i in idx]
            x = np.stack([b[0] for b in batch])
            pol = np.stack([b[1] for b in batch])
            z = np.array([b[2] for b in batch])
            loss, grads = network.loss_and_grads(x, pol, z)
            if not math.isfinite(loss) or (running_loss is not None and loss > 10 * running_loss):
                lr /= 2  # divergence guard; noted in the log row below
            else:
                network.sgd_step(grads, lr, cfg.momentum)
                running_loss = loss if running_loss is None else 0.99 * running_loss + 0.01 * loss
        row = {
            "iteration": iteration,
            "episodes": episodes_done,
            "minReturn": min(returns),
            "maxReturn": max(returns),
            "meanReturn": float(np.mean(returns)),
            "bestComplexity": best[0] if best else "",
            "learningRate": lr,
        }
        log_rows.append(row)
        if out is not None:
            _write_log(out / "training_log.csv", log_rows)
            if iteration % cfg.checkpoint_interval == 0 or iteration == iterations:
                network.save(str(out / f"checkpoint_{iteration:04d}.npz"))
            if best is not None:
                write_kernel(out / "best_kernel.txt", best[1])
    return TrainResult(best[0] if best else None, best[1] if best else None, log_rows, network)


def _write_log(path: Path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
