"""Protocol data model and the learner/environment interaction loop.

An instance is a finite set of alternatives ``Z`` with an evaluation table
``rho[left, right] = rho(left | right)`` and a distinguished target.  In each
step the learner submits one alternative and receives a bounded reward whose
mean is ``rho(query | target)``.
"""
from __future__ import annotations

import abc
import csv
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidArgument, ProtocolAbort

NOISE_MODES = ("deterministic", "two_point")

# Slack for float comparisons that are exact in the arithmetic sense.
EPS = 1e-12


def spawn_rngs(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Split one 64-bit seed into (environment, learner) generators."""
    env_ss, learner_ss = np.random.SeedSequence(int(seed)).spawn(2)
    return np.random.Generator(np.random.PCG64(env_ss)), np.random.Generator(np.random.PCG64(learner_ss))


@dataclass(frozen=True)
class RewardSample:
    value: float
    mean: float

    @property
    def noise(self) -> float:
        return self.value - self.mean


class Instance:
    """A finite interactive estimation instance backed by a dense table.

    ``table[i, j]`` holds ``rho(z_i | z_j)``.  Subclasses may avoid the dense
    table by overriding :meth:`row`, :meth:`evaluate` and :meth:`self_evals`.
    """

    def __init__(self, table, target, noise_mode="two_point", payloads=None, metadata=None):
        table = np.array(table, dtype=float)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise InvalidArgument(f"evaluation table must be square and nonempty, got {table.shape}")
        table.setflags(write=False)
        self._table = table
        self._init_common(table.shape[0], target, noise_mode, payloads, metadata)
        self._validate()

    def _init_common(self, size, target, noise_mode, payloads, metadata):
        if noise_mode not in NOISE_MODES:
            raise InvalidArgument(f"unknown noise mode {noise_mode!r}")
        self._size = int(size)
        target = int(target)
        if not 0 <= target < self._size:
            raise InvalidArgument(f"target {target} out of range for |Z| = {self._size}")
        self.target = target
        self.noise_mode = noise_mode
        self.payloads = tuple(payloads) if payloads is not None else tuple(range(self._size))
        if len(self.payloads) != self._size:
            raise InvalidArgument("one payload per alternative required")
        self.metadata = dict(metadata or {})
        self.metadata.setdefault("noise_law", noise_mode)

    def _validate(self):
        col = self.column(self.target)
        if np.any(np.abs(col) > 1.0 + EPS) or np.any(np.abs(self.self_evals()) > 1.0 + EPS):
            raise InvalidArgument("evaluation values must lie in [-1, 1]")
        if np.any(col > col[self.target] + EPS):
            raise InvalidArgument("target is not optimal: some rho(z|z*) exceeds rho(z*|z*)")
        if self._table is not None and np.any(np.abs(self._table) > 1.0 + EPS):
            raise InvalidArgument("evaluation values must lie in [-1, 1]")

    @property
    def size(self) -> int:
        return self._size

    def __len__(self):
        return self._size

    @property
    def alpha_star(self) -> float:
        return float(self.evaluate(self.target, self.target))

    def check_id(self, z) -> int:
        if isinstance(z, (bool, np.bool_)) or not isinstance(z, (int, np.integer)):
            raise InvalidArgument(f"alternative id must be an integer, got {z!r}")
        if not 0 <= z < self._size:
            raise InvalidArgument(f"alternative id {z} out of range for |Z| = {self._size}")
        return int(z)

    def evaluate(self, left: int, right: int) -> float:
        return float(self._table[left, right])

    def row(self, left: int) -> np.ndarray:
        """``rho(left | z)`` for every ``z``: the mean response to ``left`` under each hypothetical target."""
        return self._table[left]

    def column(self, right: int) -> np.ndarray:
        """``rho(z | right)`` for every ``z``."""
        return self._table[:, right]

    def self_evals(self) -> np.ndarray:
        return np.diagonal(self._table)

    def dense(self) -> np.ndarray:
        return self._table

    def mean_reward(self, query: int) -> float:
        return self.evaluate(query, self.target)

    def sample_reward(self, query: int, rng: np.random.Generator) -> RewardSample:
        mu = self.mean_reward(query)
        if self.noise_mode == "deterministic":
            return RewardSample(mu, mu)
        value = 1.0 if rng.random() < (1.0 + mu) / 2.0 else -1.0
        return RewardSample(value, mu)

    def sample_mean_rewards(self, query: int, n: int, rng: np.random.Generator) -> float:
        """Average of ``n`` fresh rewards for ``query`` (vectorized resampling)."""
        mu = self.mean_reward(query)
        if self.noise_mode == "deterministic":
            return mu
        plus = int(rng.binomial(n, (1.0 + mu) / 2.0))
        return (2.0 * plus - n) / n

    def with_target(self, target: int) -> "Instance":
        return Instance(self._table, target, self.noise_mode, self.payloads, self.metadata)

    def with_noise(self, noise_mode: str) -> "Instance":
        new = self.with_target(self.target)
        new.noise_mode = noise_mode
        new.metadata["noise_law"] = noise_mode
        return new

    def subinstance(self, indices) -> "Instance":
        """Restriction to ``indices``; the target becomes the best kept alternative."""
        idx = np.asarray(sorted(set(int(i) for i in indices)))
        table = self.dense()[np.ix_(idx, idx)]
        if self.target in idx:
            target = int(np.searchsorted(idx, self.target))
        else:
            target = int(np.argmax(np.diagonal(table)))
        meta = dict(self.metadata, parent_indices=idx.tolist())
        return Instance.__new__(Instance)._from_sub(table, target, self.noise_mode,
                                                      [self.payloads[i] for i in idx], meta)

    def _from_sub(self, table, target, noise_mode, payloads, metadata):
        # Sub-instances are used for dimension calculations only, so target
        # optimality is not enforced.
        table = np.array(table, dtype=float)
        table.setflags(write=False)
        self._table = table
        self._init_common(table.shape[0], target, noise_mode, payloads, metadata)
        return self


class ProductInstance(Instance):
    """Structured-bandit instance ``Z = F x A`` with ``rho((f,a) | (f',a')) = f'(a)``.

    Alternatives are enumerated function-major; within one function the
    actions are listed best-first (stable on ties), so the lowest-index
    member of ``{(f, a) : f(a) >= alpha}`` for a fixed ``f`` is its greedy
    action.
    """

    def __init__(self, f_table, target_f, noise_mode="two_point", function_payloads=None,
                 action_payloads=None, metadata=None, target_action=None):
        f_table = np.array(f_table, dtype=float)
        if f_table.ndim != 2 or 0 in f_table.shape:
            raise InvalidArgument("function table must be a nonempty |F| x |A| matrix")
        if np.any(np.abs(f_table) > 1.0 + EPS):
            raise InvalidArgument("function values must lie in [-1, 1]")
        f_table.setflags(write=False)
        n_f, n_a = f_table.shape
        self.f_table = f_table
        self.n_functions, self.n_actions = n_f, n_a
        order = np.argsort(-f_table, axis=1, kind="stable")
        self.f_of = np.repeat(np.arange(n_f), n_a)
        self.a_of = order.reshape(-1)
        self.index_of = np.empty((n_f, n_a), dtype=np.int64)
        self.index_of[self.f_of, self.a_of] = np.arange(n_f * n_a)
        target_f = int(target_f)
        if not 0 <= target_f < n_f:
            raise InvalidArgument(f"target function {target_f} out of range")
        a_star = int(order[target_f, 0]) if target_action is None else int(target_action)
        self.function_payloads = tuple(function_payloads) if function_payloads is not None else tuple(range(n_f))
        self.action_payloads = tuple(action_payloads) if action_payloads is not None else tuple(range(n_a))
        payloads = [(int(f), int(a)) for f, a in zip(self.f_of, self.a_of)]
        self._table = None
        self._self = f_table[self.f_of, self.a_of]
        self._self.setflags(write=False)
        self._init_common(n_f * n_a, self.index_of[target_f, a_star], noise_mode, payloads, metadata)
        self._validate()

    def pair(self, z: int) -> tuple[int, int]:
        return int(self.f_of[z]), int(self.a_of[z])

    def evaluate(self, left, right):
        return float(self.f_table[self.f_of[right], self.a_of[left]])

    def row(self, left):
        return self.f_table[self.f_of, self.a_of[left]]

    def column(self, right):
        return self.f_table[self.f_of[right], self.a_of]

    def self_evals(self):
        return self._self

    def dense(self):
        return self.f_table[self.f_of[None, :], self.a_of[:, None]]

    def with_target(self, target):
        f, a = self.pair(target)
        return ProductInstance(self.f_table, f, self.noise_mode, self.function_payloads,
                               self.action_payloads, self.metadata, target_action=a)

    def with_target_function(self, f: int) -> "ProductInstance":
        return ProductInstance(self.f_table, f, self.noise_mode, self.function_payloads,
                               self.action_payloads, self.metadata)


def evaluate(instance: Instance, left: int, right: int) -> float:
    left, right = instance.check_id(left), instance.check_id(right)
    return instance.evaluate(left, right)


def sample_reward(instance: Instance, query: int, rng: np.random.Generator) -> RewardSample:
    return instance.sample_reward(instance.check_id(query), rng)


@dataclass(frozen=True)
class Step:
    t: int
    query: int
    reward: RewardSample
    mean: float
    raw_gap: float

    @property
    def suboptimality(self) -> float:
        return max(self.raw_gap, 0.0)


@dataclass
class Transcript:
    steps: list = field(default_factory=list)
    alpha_used: float = 0.0
    seed: int = 0
    instance_ref: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.steps)

    @property
    def queries(self) -> np.ndarray:
        return np.array([s.query for s in self.steps], dtype=np.int64)

    @property
    def rewards(self) -> np.ndarray:
        return np.array([s.reward.value for s in self.steps])

    @property
    def means(self) -> np.ndarray:
        return np.array([s.mean for s in self.steps])

    @property
    def raw_gaps(self) -> np.ndarray:
        return np.array([s.raw_gap for s in self.steps])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "query_index", "reward", "mean", "raw_gap"])
            for s in self.steps:
                w.writerow([s.t, s.query, repr(s.reward.value), repr(s.mean), repr(s.raw_gap)])

    def envelope(self) -> dict:
        return {
            "seed": self.seed,
            "alpha": self.alpha_used,
            "T": len(self.steps),
            "regret": regret(self) if self.steps else 0.0,
            "instance": self.instance_ref,
        }

    def to_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.envelope(), indent=2, sort_keys=True, default=_json_default))

    @classmethod
    def from_csv(cls, path, alpha=0.0, seed=0, instance_ref=None) -> "Transcript":
        steps = []
        with open(path, newline="") as fh:
            for rec in csv.DictReader(fh):
                mean = float(rec["mean"])
                steps.append(Step(int(rec["t"]), int(rec["query_index"]),
                                  RewardSample(float(rec["reward"]), mean), mean, float(rec["raw_gap"])))
        return cls(steps, alpha, seed, dict(instance_ref or {}))


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return str(obj)


class Learner(abc.ABC):
    """Base class for interactive estimation learners.

    Randomness must come only from the generator handed to :meth:`reset`.
    """

    name = "learner"

    def reset(self, rng: np.random.Generator | None = None) -> None:
        self.rng = rng if rng is not None else np.random.default_rng(0)

    @abc.abstractmethod
    def select(self, history: list) -> int:
        """Next query given the ``(query, reward)`` history."""

    def observe(self, reward: float) -> None:
        pass

    def finalize(self):
        return None


def run_protocol(instance: Instance, learner: Learner, T: int, alpha: float, seed: int) -> Transcript:
    if T < 1:
        raise InvalidArgument("T must be >= 1")
    if alpha > instance.alpha_star + EPS:
        warnings.warn(f"alpha={alpha} exceeds alpha*={instance.alpha_star}", RuntimeWarning, stacklevel=2)
    env_rng, learner_rng = spawn_rngs(seed)
    learner.reset(learner_rng)
    transcript = Transcript([], float(alpha), int(seed), dict(instance.metadata))
    history = []
    for t in range(1, T + 1):
        q = learner.select(history)
        try:
            q = instance.check_id(q)
        except InvalidArgument as exc:
            raise ProtocolAbort(f"learner returned invalid query at step {t}: {exc}", transcript) from exc
        sample = instance.sample_reward(q, env_rng)
        learner.observe(sample.value)
        history.append((q, sample.value))
        transcript.steps.append(Step(t, q, sample, sample.mean, alpha - sample.mean))
    return transcript


def regret(transcript: Transcript) -> float:
    """Signed cumulative regret ``sum_t (alpha - rho(z_t | z*))``."""
    if not transcript.steps:
        raise InvalidArgument("regret of an empty transcript")
    return float(sum(s.raw_gap for s in transcript.steps))


def clipped_regret(transcript: Transcript) -> float:
    return float(sum(s.suboptimality for s in transcript.steps))


def bad_query_count(transcript: Transcript, eps: float, alpha: float | None = None) -> int:
    """Number of queries with ``rho(z_t | z*) < alpha - eps``."""
    a = transcript.alpha_used if alpha is None else alpha
    return int(np.sum(transcript.means < a - eps))


def estimation_errors(transcript: Transcript, instance: Instance) -> np.ndarray:
    """Per-step hindsight error ``sum_{i<t} (rho(z_i|z_t) - rho(z_i|z*))^2``."""
    acc = np.zeros(instance.size)
    out = np.empty(len(transcript))
    target = instance.target
    for k, s in enumerate(transcript.steps):
        out[k] = acc[s.query]
        row = instance.row(s.query)
        acc += (row - row[target]) ** 2
    return out
