"""Small numpy policy/value network with hand-rolled backprop.

Input is the flattened row-reversed board plus a one-hot current-row
indicator; two tanh layers feed a policy head (one logit per column) and
a scalar value head.  Plain SGD with momentum; gradients are exact and
are checked against finite differences in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from polarkit.zero.env import EnvState

CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class NetworkSpec:
    ell: int
    hidden: int = 256

    @property
    def input_dim(self) -> int:
        return self.ell * self.ell + self.ell


def encode_state(state: EnvState) -> np.ndarray:
    ell = state.ell
    board = np.zeros(ell * ell, dtype=np.float64)
    for i, row in enumerate(state.rows):
        for j in range(ell):
            board[i * ell + j] = (row >> j) & 1
    onehot = np.zeros(ell, dtype=np.float64)
    if state.current_row < ell:
        onehot[state.current_row] = 1.0
    return np.concatenate([board, onehot])


class Network:
    def __init__(self, spec: NetworkSpec, seed: int = 0):
        self.spec = spec
        rng = np.random.default_rng(seed)
        d, h, ell = spec.input_dim, spec.hidden, spec.ell

        def init(n_in: int, n_out: int) -> np.ndarray:
            return rng.standard_normal((n_in, n_out)) * np.sqrt(1.0 / n_in)

        self.params = {
            "w1": init(d, h), "b1": np.zeros(h),
            "w2": init(h, h), "b2": np.zeros(h),
            "wp": init(h, ell), "bp": np.zeros(ell),
            "wv": init(h, 1), "bv": np.zeros(1),
        }
        self.momentum_buf = {k: np.zeros_like(v) for k, v in self.params.items()}

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """x: (batch, input_dim) -> (policy logits (batch, ell), value (batch,))."""
        p = self.params
        h1 = np.tanh(x @ p["w1"] + p["b1"])
        h2 = np.tanh(h1 @ p["w2"] + p["b2"])
        return h2 @ p["wp"] + p["bp"], (h2 @ p["wv"] + p["bv"])[:, 0]

    def predict(self, state: EnvState) -> tuple[np.ndarray, float]:
        logits, value = self.forward(encode_state(state)[None, :])
        return logits[0], float(value[0])

    def loss_and_grads(
        self, x: np.ndarray, policy_targets: np.ndarray, value_targets: np.ndarray
    ) -> tuple[float, dict[str, np.ndarray]]:
        """Cross-entropy on the policy head plus squared error on the
        value head, averaged over the batch."""
        p = self.params
        batch = x.shape[0]
        h1 = np.tanh(x @ p["w1"] + p["b1"])
        h2 = np.tanh(h1 @ p["w2"] + p["b2"])
        logits = h2 @ p["wp"] + p["bp"]
        value = (h2 @ p["wv"] + p["bv"])[:, 0]
        shifted = logits - logits.max(axis=1, keepdims=True)
        log_z = np.log(np.exp(shifted).sum(axis=1))
        ce = float(np.mean(log_z - (shifted * policy_targets).sum(axis=1)))
        verr = value - value_targets
        loss = ce + float(np.mean(verr**2))

        soft = np.exp(shifted) / np.exp(shifted).sum(axis=1, keepdims=True)
        d_logits = (soft - policy_targets) / batch
        d_value = (2.0 * verr / batch)[:, None]
        grads = {
            "wp": h2.T @ d_logits, "bp": d_logits.sum(axis=0),
            "wv": h2.T @ d_value, "bv": d_value.sum(axis=0),
        }
        d_h2 = (d_logits @ p["wp"].T + d_value @ p["wv"].T) * (1 - h2**2)
        grads["w2"] = h1.T @ d_h2
        grads["b2"] = d_h2.sum(axis=0)
        d_h1 = (d_h2 @ p["w2"].T) * (1 - h1**2)
        grads["w1"] = x.T @ d_h1
        grads["b1"] = d_h1.sum(axis=0)
        return loss, grads

    def sgd_step(self, grads: dict[str, np.ndarray], lr: float, momentum: float = 0.9) -> None:
        for k in self.params:
            self.momentum_buf[k] = momentum * self.momentum_buf[k] + grads[k]
            self.params[k] -= lr * self.momentum_buf[k]

    def save(self, path: str) -> None:
        np.savez(
            path,
            version=CHECKPOINT_VERSION,
            ell=self.spec.ell,
            hidden=self.spec.hidden,
            **self.params,
        )

    @classmethod
    def load(cls, path: str) -> "Network":
        data = np.load(path)
        if int(data["version"]) != CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version {int(data['version'])}")
        net = cls(NetworkSpec(int(data["ell"]), int(data["hidden"])))
        for k in net.params:
            net.params[k] = data[k]
        return net
