"""Training loop: config round-trips, smoke runs, and reported kernels."""

from __future__ import annotations

import pytest

from polarkit.complexity import total_complexity_cached
from polarkit.pdp import meets_target, target_profile
from polarkit.zero.train import (
    TrainConfig,
    dump_train_config,
    load_train_config,
    train_loop,
)

SMOKE = TrainConfig(
    ell=4,
    total_episodes=20,
    update_interval=10,
    batch_size=16,
    updates_per_iteration=4,
    simulations=8,
    sampled_actions=4,
    seed=1,
)


def test_config_roundtrip(tmp_path):
    path = tmp_path / "train.cfg"
    path.write_text(dump_train_config(SMOKE))
    assert load_train_config(path) == SMOKE


def test_config_unknown_key_rejected(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("ell=4\nbogus=1\n")
    with pytest.raises(ValueError):
        load_train_config(path)


def test_config_comments_ignored(tmp_path):
    path = tmp_path / "train.cfg"
    path.write_text("# comment\nell=6  # inline\n\nseed=3\n")
    cfg = load_train_config(path)
    assert cfg.ell == 6
    assert cfg.seed == 3


def test_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(total_episodes=10, update_interval=20)


def test_smoke_run_outputs(tmp_path):
    result = train_loop(SMOKE, out_dir=tmp_path)
    assert len(result.log_rows) == 2
    assert (tmp_path / "training_log.csv").exists()
    assert (tmp_path / "train_config.txt").exists()
    header = (tmp_path / "training_log.csv").read_text().splitlines()[0]
    assert header == "iteration,episodes,minReturn,maxReturn,meanReturn,bestComplexity,learningRate"
    if result.best_kernel is not None:
        assert (tmp_path / "best_kernel.txt").exists()
        assert meets_target(result.best_kernel, target_profile(4))
        assert result.best_complexity == total_complexity_cached(result.best_kernel)


def test_smoke_run_reproducible():
    a = train_loop(SMOKE)
    b = train_loop(SMOKE)
    assert a.log_rows == b.log_rows
    assert a.best_complexity == b.best_complexity
