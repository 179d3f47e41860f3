"""Least-squares, optimistic and PAC learners for interactive estimation.

Every argmin/argmax is exact enumeration over a finite set with ties broken
toward the lowest index.  Squared-residual sums are accumulated one history
row at a time so that learners sharing the same arithmetic (for example a
learner on ``Z = F x A`` and its structured-bandit counterpart on ``F``)
produce bit-identical decisions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Instance, Learner, ProductInstance, run_protocol, spawn_rngs
from .errors import ConfigError, InvalidArgument
from .kernels import residual_sums
from .oracle import OracleState


class LargeEvalSet:
    """``Z_alpha = {z : rho(z|z) >= alpha}`` as a sorted index array."""

    def __init__(self, instance: Instance, alpha: float):
        self.alpha = float(alpha)
        self.members = np.flatnonzero(instance.self_evals() >= alpha)
        if self.members.size == 0:
            raise ConfigError(f"no alternative has self-evaluation >= alpha = {alpha}")

    def __len__(self):
        return int(self.members.size)

    def __iter__(self):
        return iter(int(m) for m in self.members)


@dataclass
class ConfidenceSet:
    members: np.ndarray
    radius: float
    center: int

    def __contains__(self, z):
        return bool(np.any(self.members == z))


@dataclass
class PacConfig:
    T: int
    n1: int
    n2: int
    alpha: float
    epsilon: float
    delta: float

    def __post_init__(self):
        if self.T < 1 or self.n1 < 1 or self.n2 < 1:
            raise InvalidArgument("PAC config needs T, n1, n2 >= 1")


def _accumulate(rows, targets, cols=None) -> np.ndarray:
    """``sum_i (rows[i] - targets[i])^2`` accumulated row by row."""
    out = None
    for row, y in zip(rows, targets):
        r = row if cols is None else row[cols]
        sq = (r - y) ** 2
        out = sq if out is None else out + sq
    return out


def ls_select(history, zalpha: LargeEvalSet, instance: Instance) -> int:
    """Least-squares query over ``Z_alpha`` fitted to the observed rewards."""
    if len(zalpha) == 0:
        raise ConfigError("no alternative has self-evaluation >= alpha")
    if not history:
        return int(zalpha.members[0])
    loss = _accumulate([instance.row(q) for q, _ in history], [r for _, r in history], zalpha.members)
    return int(zalpha.members[int(np.argmin(loss))])


def oracle_ls_select(history, oracle_predictions, zalpha: LargeEvalSet, instance: Instance) -> int:
    """As :func:`ls_select` with residuals against oracle predictions."""
    if len(oracle_predictions) != len(history):
        raise InvalidArgument("one oracle prediction per history step required")
    return ls_select([(q, p) for (q, _), p in zip(history, oracle_predictions)], zalpha, instance)


def optimistic_select(history, instance: Instance, R: float, targets=None) -> tuple[int, ConfidenceSet]:
    """Optimistic query: best self-evaluation inside the LS confidence set.

    ``targets`` replaces the rewards (used by the oracle-based variant).
    """
    if R < 0:
        raise InvalidArgument("radius must be nonnegative")
    se = instance.self_evals()
    if not history:
        members = np.arange(instance.size)
        return int(np.argmax(se)), ConfidenceSet(members, float(R), 0)
    ys = [r for _, r in history] if targets is None else list(targets)
    if len(ys) != len(history):
        raise InvalidArgument("one target per history step required")
    H = np.array([instance.row(q) for q, _ in history])
    center = int(np.argmin(_accumulate(H, ys)))
    res = residual_sums(H, center)
    members = np.flatnonzero(res <= R)
    query = int(members[int(np.argmax(se[members]))])
    return query, ConfidenceSet(members, float(R), center)


def karmed_ls_step(arm_stats, alpha: float) -> int:
    """Closed-form least-squares arm choice for a K-armed bandit with means in [0, 1].

    ``arm_stats`` is a sequence of ``(pull_count, average)``.  An unpulled arm
    can still have mean 1, so it counts as value 1.  If some arm's value
    reaches ``alpha`` the largest one is pulled; otherwise the arm minimizing
    ``n_a (alpha - avg_a)^2``.
    """
    stats = list(arm_stats)
    if not stats:
        raise InvalidArgument("need at least one arm")
    vals = np.array([1.0 if n == 0 else float(m) for n, m in stats])
    if vals.max() >= alpha:
        return int(np.argmax(vals))
    cost = np.array([n * (alpha - m) ** 2 for n, m in stats])
    return int(np.argmin(cost))


class _RowBuffer:
    """Growing matrix of history rows."""

    def __init__(self, width):
        self.buf = np.empty((64, width))
        self.n = 0

    def append(self, row):
        if self.n == self.buf.shape[0]:
            self.buf = np.concatenate([self.buf, np.empty_like(self.buf)])
        self.buf[self.n] = row
        self.n += 1

    @property
    def rows(self):
        return self.buf[: self.n]


class LSLearner(Learner):
    """Least squares restricted to ``Z_alpha``."""

    name = "ls"

    def __init__(self, instance: Instance, alpha: float, candidates=None):
        self.instance = instance
        self.zalpha = LargeEvalSet(instance, alpha)
        if candidates is not None:
            keep = np.intersect1d(self.zalpha.members, np.asarray(candidates))
            if keep.size == 0:
                raise ConfigError("no candidate has self-evaluation >= alpha")
            self.zalpha.members = keep
        self.reset()

    def reset(self, rng=None):
        super().reset(rng)
        self.loss = np.zeros(len(self.zalpha))
        self._last = None

    def select(self, history):
        self._last = int(self.zalpha.members[int(np.argmin(self.loss))])
        return self._last

    def observe(self, reward):
        row = self.instance.row(self._last)[self.zalpha.members]
        self.loss = self.loss + (row - reward) ** 2


class OptimisticLearner(Learner):
    """Unconstrained least squares plus an optimistic pick from the confidence set."""

    name = "optimistic"

    def __init__(self, instance: Instance, R: float, record_sets: bool = False):
        if R < 0:
            raise InvalidArgument("radius must be nonnegative")
        self.instance = instance
        self.R = float(R)
        self.record_sets = record_sets
        self.se = instance.self_evals()
        self.reset()

    def reset(self, rng=None):
        super().reset(rng)
        self.loss = np.zeros(self.instance.size)
        self.rows = _RowBuffer(self.instance.size)
        self.sets = []
        self._last = None

    def _target(self, reward):
        return reward

    def select(self, history):
        if self.rows.n == 0:
            center, members = 0, np.arange(self.instance.size)
        else:
            center = int(np.argmin(self.loss))
            members = np.flatnonzero(residual_sums(self.rows.rows, center) <= self.R)
        self._last = int(members[int(np.argmax(self.se[members]))])
        if self.record_sets:
            self.sets.append(ConfidenceSet(members, self.R, center))
        return self._last

    def observe(self, reward):
        row = self.instance.row(self._last)
        self.loss = self.loss + (row - self._target(reward)) ** 2
        self.rows.append(row)


class OracleLSLearner(LSLearner):
    """Least squares over ``Z_alpha`` fitted to an online oracle's predictions."""

    name = "oracle_ls"

    def __init__(self, instance, alpha, oracle_kind="aggregating", eta=1.0 / 8.0):
        self.oracle_kind, self.eta = oracle_kind, eta
        super().__init__(instance, alpha)

    def reset(self, rng=None):
        super().reset(rng)
        self.oracle = OracleState(self.oracle_kind, instance=self.instance, eta=self.eta)
        self._pred = None

    def select(self, history):
        q = super().select(history)
        self._pred = self.oracle.predict(q)
        return q

    def observe(self, reward):
        self.oracle.update(self._last, reward, self._pred)
        super().observe(self._pred)


class OptimisticOracleLearner(OptimisticLearner):
    """Optimistic rule with residuals against oracle predictions."""

    name = "optimistic_oracle"

    def __init__(self, instance, R, oracle_kind="aggregating", eta=1.0 / 8.0):
        self.oracle_kind, self.eta = oracle_kind, eta
        super().__init__(instance, R)

    def reset(self, rng=None):
        super().reset(rng)
        self.oracle = OracleState(self.oracle_kind, instance=self.instance, eta=self.eta)
        self._pred = None

    def select(self, history):
        q = super().select(history)
        self._pred = self.oracle.predict(q)
        return q

    def _target(self, reward):
        return self._pred

    def observe(self, reward):
        self.oracle.update(self._last, reward, self._pred)
        super().observe(reward)


def _require_product(instance):
    if not isinstance(instance, ProductInstance):
        raise ConfigError("structured-bandit learners need a product instance")


class StructuredLSLearner(Learner):
    """Least squares over ``F_alpha = {f : max_a f(a) >= alpha}``, playing ``argmax_a f_t(a)``."""

    name = "structured_ls"

    def __init__(self, instance: ProductInstance, alpha: float):
        _require_product(instance)
        self.instance = instance
        self.f_alpha = np.flatnonzero(instance.f_table.max(axis=1) >= alpha)
        if self.f_alpha.size == 0:
            raise ConfigError(f"no function reaches alpha = {alpha}")
        self.reset()

    def reset(self, rng=None):
        super().reset(rng)
        self.loss = np.zeros(self.f_alpha.size)
        self._action = None

    def select(self, history):
        f = int(self.f_alpha[int(np.argmin(self.loss))])
        self._action = int(np.argmax(self.instance.f_table[f]))
        return int(self.instance.index_of[f, self._action])

    def observe(self, reward):
        col = self.instance.f_table[self.f_alpha, self._action]
        self.loss = self.loss + (col - reward) ** 2


class StructuredOptimisticLearner(Learner):
    """Optimistic structured-bandit rule on ``F`` with confidence set ``F_t``."""

    name = "structured_optimistic"

    def __init__(self, instance: ProductInstance, R: float):
        _require_product(instance)
        self.instance = instance
        self.R = float(R)
        self.fmax = instance.f_table.max(axis=1)
        self.reset()

    def reset(self, rng=None):
        super().reset(rng)
        n_f = self.instance.n_functions
        self.loss = np.zeros(n_f)
        self.rows = _RowBuffer(n_f)
        self._action = None

    def select(self, history):
        if self.rows.n == 0:
            members = np.arange(self.instance.n_functions)
        else:
            center = int(np.argmin(self.loss))
            members = np.flatnonzero(residual_sums(self.rows.rows, center) <= self.R)
        f = int(members[int(np.argmax(self.fmax[members]))])
        self._action = int(np.argmax(self.instance.f_table[f]))
        return int(self.instance.index_of[f, self._action])

    def observe(self, reward):
        col = self.instance.f_table[:, self._action]
        self.loss = self.loss + (col - reward) ** 2
        self.rows.append(col)


class KArmedLearner(Learner):
    """Closed-form least-squares rule over arm statistics of a product instance."""

    name = "karmed_closed_form"

    def __init__(self, instance: ProductInstance, alpha: float):
        _require_product(instance)
        self.instance = instance
        self.alpha = float(alpha)
        # Any alternative with action a has mean f*(a); use the first one.
        self.arm_alt = np.array([int(np.flatnonzero(instance.a_of == a)[0]) for a in range(instance.n_actions)])
        self.reset()

    def reset(self, rng=None):
        super().reset(rng)
        k = self.instance.n_actions
        self.counts = np.zeros(k, dtype=np.int64)
        self.sums = np.zeros(k)
        self._arm = None

    def select(self, history):
        stats = [(int(n), s / n if n else 0.0) for n, s in zip(self.counts, self.sums)]
        self._arm = karmed_ls_step(stats, self.alpha)
        return int(self.arm_alt[self._arm])

    def observe(self, reward):
        self.counts[self._arm] += 1
        self.sums[self._arm] += reward


class ScanLearner(Learner):
    """Queries a fixed list in order, repeating the last entry once exhausted.

    With ``stop_on_positive`` the learner keeps repeating the first query
    that returned a positive reward.
    """

    name = "scan_baseline"

    def __init__(self, sequence, stop_on_positive: bool = False):
        self.sequence = [int(s) for s in sequence]
        if not self.sequence:
            raise InvalidArgument("scan sequence must be nonempty")
        self.stop_on_positive = stop_on_positive
        self.reset()

    def reset(self, rng=None):
        super().reset(rng)
        self.t = 0
        self.found = None
        self._last = None

    def select(self, history):
        if self.found is not None:
            return self.found
        self._last = self.sequence[min(self.t, len(self.sequence) - 1)]
        self.t += 1
        return self._last

    def observe(self, reward):
        if self.stop_on_positive and self.found is None and reward > 0:
            self.found = self._last


class UniformRandomLearner(Learner):
    """Queries a uniformly random candidate each step."""

    name = "uniform_random"

    def __init__(self, candidates):
        self.candidates = np.asarray(candidates, dtype=np.int64)
        if self.candidates.size == 0:
            raise InvalidArgument("candidate list must be nonempty")
        self.reset()

    def select(self, history):
        return int(self.candidates[self.rng.integers(self.candidates.size)])


class FixedLearner(Learner):
    """Always submits the same alternative."""

    name = "fixed"

    def __init__(self, z: int):
        self.z = int(z)

    def select(self, history):
        return self.z


@dataclass
class PacResult:
    estimate: int
    transcript: object
    sampled_steps: list
    averages: list


def pac_run(instance: Instance, base: Learner, cfg: PacConfig, seed: int) -> PacResult:
    """Base run, then resample-and-average selection of the output."""
    tr = run_protocol(instance, base, cfg.T, cfg.alpha, seed)
    queries = tr.queries
    if instance.noise_mode == "deterministic":
        best = int(np.argmax(tr.rewards))
        return PacResult(int(queries[best]), tr, [best], [float(tr.rewards[best])])
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed)).spawn(3)[2]))
    steps = rng.integers(0, cfg.T, size=cfg.n1)
    avgs = [instance.sample_mean_rewards(int(queries[s]), cfg.n2, rng) for s in steps]
    pick = int(np.argmax(avgs))
    return PacResult(int(queries[steps[pick]]), tr, [int(s) for s in steps], [float(a) for a in avgs])


def pac_estimate(instance: Instance, base: Learner, cfg: PacConfig, seed: int) -> int:
    return pac_run(instance, base, cfg, seed).estimate


__all__ = [
    "ConfidenceSet", "FixedLearner", "KArmedLearner", "LSLearner", "LargeEvalSet", "OptimisticLearner",
    "OptimisticOracleLearner", "OracleLSLearner", "PacConfig", "PacResult", "ScanLearner",
    "StructuredLSLearner", "StructuredOptimisticLearner", "UniformRandomLearner", "karmed_ls_step",
    "ls_select", "optimistic_select", "oracle_ls_select", "pac_estimate", "pac_run", "spawn_rngs",
]
