"""Online square-loss regression oracles over a finite predictor family.

The family is ``Phi = {phi_z}`` with ``phi_z(x) = rho(x | z)``: for an
observation ``x`` the vector of all predictor outputs is ``instance.row(x)``.
A raw table ``P[x, z]`` may be supplied instead of an instance.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import ConfigError, InvalidArgument

KINDS = ("aggregating", "follow_the_leader")
DEFAULT_ETA = 1.0 / 8.0


class OracleState:
    """Mutable oracle state; :meth:`update` is the only mutator."""

    def __init__(self, kind="aggregating", instance=None, table=None, eta=DEFAULT_ETA):
        if kind not in KINDS:
            raise ConfigError(f"unknown oracle kind {kind!r}")
        if (instance is None) == (table is None):
            raise InvalidArgument("supply exactly one of instance or table")
        if kind == "aggregating" and not (eta > 0 and math.isfinite(eta)):
            raise ConfigError("aggregating oracle needs a positive finite learning rate")
        if table is not None:
            table = np.array(table, dtype=float)
            if table.ndim != 2 or np.any(np.abs(table) > 1.0):
                raise InvalidArgument("predictor table must be 2-D with values in [-1, 1]")
            table.setflags(write=False)
            self._rows = lambda x: table[x]
            self.n_predictors = table.shape[1]
        else:
            self._rows = instance.row
            self.n_predictors = instance.size
        self.kind = kind
        self.eta = float(eta)
        self.label = "baseline" if kind == "follow_the_leader" else "aggregating"
        self.log_weights = np.zeros(self.n_predictors)
        self.losses = np.zeros(self.n_predictors)
        self.step_count = 0
        self.observations, self.responses, self.predictions = [], [], []

    def weights(self) -> np.ndarray:
        """Normalized mixture weights."""
        w = np.exp(self.log_weights - self.log_weights.max())
        return w / w.sum()

    def predict(self, observation: int) -> float:
        vals = self._rows(observation)
        if self.kind == "aggregating":
            p = float(np.dot(self.weights(), vals))
        else:
            p = float(vals[int(np.argmin(self.losses))])
        return min(1.0, max(-1.0, p))

    def update(self, observation: int, response: float, prediction: float | None = None) -> "OracleState":
        if abs(response) > 1.0:
            raise InvalidArgument("response must lie in [-1, 1]")
        if prediction is None:
            prediction = self.predict(observation)
        sq = (self._rows(observation) - response) ** 2
        self.losses += sq
        if self.kind == "aggregating":
            self.log_weights -= self.eta * sq
            # Re-center to keep log-weights bounded; ratios are unchanged.
            self.log_weights -= self.log_weights.max()
        self.observations.append(int(observation))
        self.responses.append(float(response))
        self.predictions.append(float(prediction))
        self.step_count += 1
        return self

    def regret_bound(self) -> float:
        """``(1/eta) ln |Phi|`` for the aggregating kind; ``inf`` for the baseline."""
        if self.kind != "aggregating":
            return math.inf
        return math.log(self.n_predictors) / self.eta

    def cumulative_loss(self) -> float:
        return float(sum((p - r) ** 2 for p, r in zip(self.predictions, self.responses)))

    def regret_sq(self) -> float:
        if not self.step_count:
            raise InvalidArgument("regret of an empty history")
        return self.cumulative_loss() - float(self.losses.min())


def predict(state: OracleState, observation: int, instance=None) -> float:
    return state.predict(observation)


def update(state: OracleState, observation: int, response: float, instance=None) -> OracleState:
    return state.update(observation, response)


def regret_sq(state: OracleState, history=None, instance=None) -> float:
    """Oracle loss minus best-in-hindsight predictor loss on the recorded history."""
    if history is not None:
        obs = [int(q) for q, _ in history]
        if obs != state.observations:
            raise InvalidArgument("history does not match the oracle's recorded observations")
    return state.regret_sq()


def run_oracle(state: OracleState, observations, responses) -> OracleState:
    """Feed a whole history through predict/update."""
    for x, r in zip(observations, responses):
        state.update(int(x), float(r), state.predict(int(x)))
    return state
