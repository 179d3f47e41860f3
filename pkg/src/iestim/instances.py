"""Generators for finite instances of every example class.

Continuous classes are discretized on explicit nets.  Circle nets use an
integer angle grid so that semicircle membership and exact coincidences are
decided on indices rather than floats.
"""
from __future__ import annotations

import itertools
import json
import math
from pathlib import Path

import numpy as np

from .core import EPS, Instance, ProductInstance, RewardSample, run_protocol
from .errors import ConfigError, InvalidArgument, SizeCapError

DEFAULT_F_CAP = 5000


# ---------------------------------------------------------------- nets

def circle_net(n: int) -> np.ndarray:
    """``n`` equally spaced unit vectors at angles ``2 pi k / n``."""
    if n < 1:
        raise InvalidArgument("net resolution must be >= 1")
    ang = 2 * np.pi * np.arange(n) / n
    return np.stack([np.cos(ang), np.sin(ang)], axis=1)


def circle_gram(n: int) -> np.ndarray:
    """Inner products of :func:`circle_net` points, exactly 1 on the diagonal."""
    k = np.arange(n)
    G = np.cos(2 * np.pi * ((k[:, None] - k[None, :]) % n) / n)
    np.fill_diagonal(G, 1.0)
    return G


def sphere_net(n: int, size: int, seed: int = 0) -> np.ndarray:
    """Points on the unit sphere in ``R^n``: a uniform circle for ``n = 2``,
    otherwise the signed basis followed by normalized Gaussian draws."""
    if n < 1 or size < 1:
        raise InvalidArgument("dimension and net size must be >= 1")
    if n == 2:
        return circle_net(size)
    pts = list(np.vstack([np.eye(n), -np.eye(n)])[:size])
    rng = np.random.default_rng(seed)
    while len(pts) < size:
        g = rng.standard_normal(n)
        pts.append(g / np.linalg.norm(g))
    return np.array(pts)


def _gram(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    G = np.clip(X @ Y.T, -1.0, 1.0)
    # Identical unit vectors must evaluate to exactly 1.
    same = np.all(np.abs(X[:, None, :] - Y[None, :, :]) == 0, axis=2)
    norms = np.linalg.norm(X, axis=1)
    G[same & (np.abs(norms - 1.0) < 1e-12)[:, None]] = 1.0
    return G


# ----------------------------------------------------------- families

def make_karmed(means, f_grid_resolution: int = 4, mode: str = "axis", cap: int = DEFAULT_F_CAP,
                noise_mode: str = "two_point") -> ProductInstance:
    """K-armed bandit as ``F x A`` with a finite grid ``F`` containing the truth.

    ``mode="axis"`` perturbs one coordinate of the truth at a time over the
    grid ``{k / res}``; ``mode="full"`` uses the whole product grid.  The
    truth is always function 0.
    """
    means = np.asarray(means, dtype=float)
    if means.ndim != 1 or means.size == 0:
        raise InvalidArgument("need at least one arm")
    if np.any(means < 0) or np.any(means > 1):
        raise InvalidArgument("arm means must lie in [0, 1]")
    K, res = means.size, int(f_grid_resolution)
    if res < 0:
        raise InvalidArgument("grid resolution must be >= 0")
    levels = np.linspace(0.0, 1.0, res + 1) if res > 0 else np.array([])
    rows = [means]
    if mode == "axis":
        if 1 + K * levels.size > cap:
            raise SizeCapError(f"axis grid of size {1 + K * levels.size} exceeds cap {cap}")
        for a in range(K):
            for v in levels:
                if v != means[a]:
                    r = means.copy()
                    r[a] = v
                    rows.append(r)
    elif mode == "full":
        if levels.size ** K + 1 > cap:
            raise SizeCapError(f"full grid of size {levels.size ** K + 1} exceeds cap {cap}")
        for combo in itertools.product(levels, repeat=K):
            r = np.array(combo)
            if not np.array_equal(r, means):
                rows.append(r)
    else:
        raise InvalidArgument(f"unknown grid mode {mode!r}")
    meta = {"generator": "karmed", "means": means.tolist(), "resolution": res, "mode": mode}
    return ProductInstance(np.array(rows), 0, noise_mode, metadata=meta)


def make_linear(theta_net, action_net, target_theta: int, noise_mode: str = "two_point") -> ProductInstance:
    """Linear bandit ``f_theta(a) = <theta, a>`` on finite nets."""
    T = np.atleast_2d(np.asarray(theta_net, dtype=float))
    A = np.atleast_2d(np.asarray(action_net, dtype=float))
    if T.size == 0 or A.size == 0:
        raise InvalidArgument("nets must be nonempty")
    if T.shape[1] != A.shape[1]:
        raise InvalidArgument("theta and action nets must share a dimension")
    if np.any(np.linalg.norm(T, axis=1) > 1 + 1e-12) or np.any(np.linalg.norm(A, axis=1) > 1 + 1e-12):
        raise InvalidArgument("nets must lie in the unit ball")
    meta = {"generator": "linear", "n": int(T.shape[1]), "n_theta": len(T), "n_action": len(A)}
    return ProductInstance(_gram(T, A), target_theta, noise_mode, [tuple(t) for t in T],
                           [tuple(a) for a in A], meta)


def make_linear_circle(n_theta: int, n_action: int, target_theta: int = 0,
                       noise_mode: str = "two_point") -> ProductInstance:
    """Linear instance in ``R^2`` on two circle grids; equal angles give exactly 1."""
    lcm = math.lcm(n_theta, n_action)
    kt = np.arange(n_theta) * (lcm // n_theta)
    ka = np.arange(n_action) * (lcm // n_action)
    diff = (kt[:, None] - ka[None, :]) % lcm
    table = np.where(diff == 0, 1.0, np.cos(2 * np.pi * diff / lcm))
    meta = {"generator": "linear", "n": 2, "n_theta": n_theta, "n_action": n_action}
    return ProductInstance(table, target_theta, noise_mode, metadata=meta)


def make_glm(theta_net, action_net, target_theta: int, link, h_lo: float, h_hi: float,
             noise_mode: str = "two_point") -> ProductInstance:
    """Generalized linear bandit ``f_theta(a) = g(<theta, a>)``.

    Values outside ``[-1, 1]`` are rejected, not clipped.
    """
    if not 0 < h_lo <= h_hi:
        raise InvalidArgument("need 0 < h_lo <= h_hi")
    base = make_linear(theta_net, action_net, target_theta)
    table = np.asarray(link(base.f_table), dtype=float)
    if np.any(np.abs(table) > 1.0 + EPS):
        raise ConfigError("link values leave [-1, 1] on the net")
    table = np.clip(table, -1.0, 1.0)
    from .bounds import dim_bound

    meta = {"generator": "glm", "n": base.metadata["n"], "r": h_hi / h_lo, "h_lo": h_lo, "h_hi": h_hi}
    meta["dim_bound"] = dim_bound("glm", n=meta["n"], r=meta["r"], hbar=h_hi, eps=0.1).extra["expression"]
    return ProductInstance(table, target_theta, noise_mode, base.function_payloads, base.action_payloads, meta)


def make_relu(n: int, b: float, net_size: int, target_theta: int = 0, seed: int = 0,
              noise_mode: str = "two_point") -> ProductInstance:
    """ReLU bandit ``f_theta(a) = max(<theta, a> - b, 0)`` with ``A`` = the theta net."""
    if not 0 <= b < 1:
        raise InvalidArgument("bias must lie in [0, 1)")
    net = sphere_net(n, net_size, seed)
    G = circle_gram(net_size) if n == 2 else _gram(net, net)
    table = np.maximum(G - b, 0.0)
    meta = {"generator": "relu", "n": n, "b": b, "net_size": net_size, "alpha_star": 1 - b}
    return ProductInstance(table, target_theta, noise_mode, [tuple(p) for p in net],
                           [tuple(p) for p in net], meta)


def make_sphere(n: int, net_size: int, target: int = 0, seed: int = 0,
                noise_mode: str = "two_point") -> Instance:
    """Point estimation on a sphere net with ``rho(z | z') = <z, z'>``."""
    net = sphere_net(n, net_size, seed)
    G = circle_gram(net_size) if n == 2 else _gram(net, net)
    meta = {"generator": "sphere", "n": n, "net_size": net_size}
    return Instance(G, target, noise_mode, [tuple(p) for p in net], meta)


class SQInstance(Instance):
    """Hypotheses with ``rho(h | h') = E_D[h h']``; rewards are ``h(x) h*(x)`` for fresh ``x ~ D``."""

    def __init__(self, hypotheses, dist, target, metadata=None):
        from .dims import sq_gram

        self.hypotheses = np.array(hypotheses, dtype=float)
        self.dist = np.asarray(dist, dtype=float)
        G = sq_gram(self.hypotheses, self.dist)
        np.fill_diagonal(G, 1.0)
        G = np.clip(G, -1.0, 1.0)
        meta = {"generator": "sq", "noise_law": "sample_oracle", **(metadata or {})}
        super().__init__(G, target, "two_point", metadata=meta)
        self.metadata["noise_law"] = "sample_oracle"
        self._cdf = np.cumsum(self.dist)

    def _draw(self, rng, size=None):
        u = rng.random(size)
        return np.minimum(np.searchsorted(self._cdf, u, side="right"), self.dist.size - 1)

    def sample_reward(self, query, rng):
        x = self._draw(rng)
        value = float(self.hypotheses[query, x] * self.hypotheses[self.target, x])
        return RewardSample(value, self.mean_reward(query))

    def sample_mean_rewards(self, query, n, rng):
        xs = self._draw(rng, n)
        return float(np.mean(self.hypotheses[query, xs] * self.hypotheses[self.target, xs]))

    def with_target(self, target):
        return SQInstance(self.hypotheses, self.dist, target, self.metadata)


def make_sq(hypotheses, dist, target: int) -> SQInstance:
    return SQInstance(hypotheses, dist, target)


def parity_hypotheses(n_bits: int, subsets=None) -> np.ndarray:
    """Characters ``chi_S(x) = (-1)^{sum_{i in S} x_i}`` over ``{0,1}^n``."""
    X = np.array(list(itertools.product([0, 1], repeat=n_bits)))
    if subsets is None:
        subsets = [s for k in range(n_bits + 1) for s in itertools.combinations(range(n_bits), k)]
    rows = [(-1.0) ** X[:, list(s)].sum(axis=1) if s else np.ones(len(X)) for s in subsets]
    return np.array(rows)


# ------------------------------------------------------- separation

def _semicircle(n: int, j: int) -> np.ndarray:
    """Net indices in the open semicircle ``U_0`` (x > 0) or ``U_1`` (y > 0)."""
    if n % 4:
        raise InvalidArgument("circle resolution must be a multiple of 4")
    k = np.arange(n)
    if j == 0:
        return k[(k < n // 4) | (k > 3 * n // 4)]
    return k[(k > 0) & (k < n // 2)]


def _sep_function(G, n, j, v, S, sigma, eps):
    """Member of the separation class on the circle net."""
    row = G[v].copy()
    row[_semicircle(n, j)] = 0.0
    row[np.asarray(S, dtype=int)] = eps * np.asarray(sigma, dtype=float)
    return row


def make_separation(N: int, eps: float, M: int = 20, net_size: int | None = None, seed: int = 0,
                    noise_mode: str = "two_point") -> ProductInstance:
    """Finite sub-family of the two-semicircle separation class on a circle net.

    Functions ``0..N`` are the deterministic eluder witness family on special
    points in ``U_1``; the remaining ``M`` are random members.  The target is
    the all-``+eps`` witness played at its linear direction.
    """
    if N < 1:
        raise InvalidArgument("N must be >= 1")
    if not 0 < eps < 0.5:
        raise InvalidArgument("eps must lie in (0, 1/2)")
    n = net_size if net_size is not None else 4 * math.ceil((2 * N + 2) / 4)
    if n % 4:
        raise InvalidArgument("circle resolution must be a multiple of 4")
    U1 = _semicircle(n, 1)
    if N > U1.size:
        raise SizeCapError(f"N = {N} special points do not fit in a semicircle of a {n}-point net")
    G = circle_gram(n)
    rng = np.random.default_rng(seed)
    v_w = int(3 * n // 4)  # direction (0, -1), outside U_1
    special = [int(s) for s in np.sort(rng.choice(U1, N, replace=False))]
    rows, payloads = [], []
    for i in range(N + 1):
        sigma = np.ones(N)
        if i < N:
            sigma[i] = -1.0
        rows.append(_sep_function(G, n, 1, v_w, special, sigma, eps))
        payloads.append({"j": 1, "v": v_w, "S": special, "sigma": sigma.tolist(), "witness": i})
    for _ in range(M):
        j = int(rng.integers(2))
        Uj = _semicircle(n, j)
        out = np.setdiff1d(np.arange(n), Uj)
        v = int(rng.choice(out))
        S = [int(s) for s in np.sort(rng.choice(Uj, N, replace=False))] if N <= Uj.size else list(Uj)
        sigma = rng.choice([-1.0, 1.0], len(S))
        rows.append(_sep_function(G, n, j, v, S, sigma, eps))
        payloads.append({"j": j, "v": v, "S": S, "sigma": sigma.tolist(), "witness": None})
    table = np.array(rows)
    meta = {
        "generator": "separation", "N": N, "eps": eps, "M": M, "net_size": n, "seed": seed,
        "special_actions": special, "witness_rows": list(range(N + 1)), "witness_v": v_w,
    }
    return ProductInstance(table, N, noise_mode, function_payloads=payloads, metadata=meta,
                           target_action=v_w)


def separation_eluder_certificate(instance: ProductInstance):
    """Constructed eluder witness: special point ``k`` separated by ``(f_k, f_{N+1})``."""
    from .dims import DimensionCertificate

    meta = instance.metadata
    N = meta["N"]
    pairs = [(k, N) for k in range(N)]
    return DimensionCertificate("eluder", list(meta["special_actions"]), float(meta["eps"]), N,
                                witness_pairs=pairs)


# ------------------------------------------------------ hard indicator

def _hard_points(N: int, n: int, seed: int) -> list:
    # Special points on the open upper semicircle, avoiding v = (0, 1).
    U1 = _semicircle(n, 1)
    pool = U1[U1 != n // 4]
    if N > pool.size:
        raise SizeCapError(f"cannot place {N} special points on a {n}-point net")
    rng = np.random.default_rng(seed)
    return [int(s) for s in np.sort(rng.choice(pool, N, replace=False))]


def _hard_tables(N, eps, n, seed):
    G = circle_gram(n)
    xs = _hard_points(N, n, seed)
    hard = np.zeros((N, n))
    for i in range(N):
        hard[i, xs] = -eps
        hard[i, xs[i]] = eps
    U0 = _semicircle(n, 0)
    outside0 = np.setdiff1d(np.arange(n), U0)
    up, down = n // 4, 3 * n // 4
    tilde = []
    for w in (up, down):
        for i in range(N):
            row = np.zeros(n)
            row[outside0] = G[w, outside0]
            row[xs] = hard[i, xs]
            tilde.append(row)
    return xs, hard, np.array(tilde)


def make_hard_indicator(N: int, eps: float, net_size: int | None = None, seed: int = 0,
                        noise_mode: str = "deterministic") -> tuple[ProductInstance, ProductInstance]:
    """Indicator class ``F_hard`` and its two-signed linear lift ``F~``.

    Rows ``i`` and ``N + i`` of ``F~`` are ``f_i^{+v}`` and ``f_i^{-v}``.
    """
    if N < 2:
        raise InvalidArgument("N must be >= 2")
    n = net_size if net_size is not None else 4 * math.ceil((2 * N + 4) / 4)
    xs, hard, tilde = _hard_tables(N, eps, n, seed)
    mid = 0.5 * (tilde[:N] + tilde[N:])
    if np.max(np.abs(mid - hard)) > 1e-12:
        raise AssertionError("convex identity violated")
    meta = {"generator": "hard_indicator", "N": N, "eps": eps, "net_size": n, "special_actions": xs,
            "note": "zero region uses U_0 with v = (0, 1) as displayed; points lie in (0, pi)"}
    h = ProductInstance(hard, 0, noise_mode, metadata=dict(meta, part="hard"))
    t = ProductInstance(tilde, 0, noise_mode, metadata=dict(meta, part="tilde"))
    return h, t


def hard_combined(N: int, eps: float, net_size: int | None = None, seed: int = 0,
                  noise_mode: str = "deterministic") -> ProductInstance:
    """``(F_hard u F~) x A``: rows ``0..N-1`` hard, ``N..3N-1`` lifted."""
    h, t = make_hard_indicator(N, eps, net_size, seed, noise_mode)
    meta = dict(h.metadata, part="combined", hard_rows=[0, N], tilde_rows=[N, 3 * N])
    return ProductInstance(np.vstack([h.f_table, t.f_table]), 0, noise_mode, metadata=meta)


def tilde_alternatives(inst: ProductInstance) -> np.ndarray:
    lo, hi = inst.metadata["tilde_rows"]
    return np.flatnonzero((inst.f_of >= lo) & (inst.f_of < hi))


def special_alternatives(inst: ProductInstance) -> list:
    """Alternative ids ``(f_i, x_i)`` in special-point order."""
    xs = inst.metadata["special_actions"]
    return [int(inst.index_of[i, x]) for i, x in enumerate(xs)]


def run_hard_lower_bound(N: int, eps: float, T: int, learner_factory, trials: int, seed: int,
                         net_size: int | None = None, alpha: float | None = None) -> dict:
    """Uniform-target experiment on ``F_hard``; records ``T_opt`` and regret per trial.

    ``learner_factory(instance)`` builds a fresh learner for a trial instance.
    """
    if trials < 1:
        raise InvalidArgument("trials must be >= 1")
    from .bounds import lower_bound_comparators

    base = hard_combined(N, eps, net_size, seed)
    xs = base.metadata["special_actions"]
    alpha = eps if alpha is None else alpha
    rng = np.random.default_rng(seed)
    targets = rng.integers(N, size=trials)
    seeds = rng.integers(2**63 - 1, size=trials)
    t_opts, regrets = [], []
    for f_star, s in zip(targets, seeds):
        inst = base.with_target(int(base.index_of[f_star, xs[f_star]]))
        tr = run_protocol(inst, learner_factory(inst), T, alpha, int(s))
        acts = inst.a_of[tr.queries]
        hits = np.flatnonzero(acts == xs[f_star])
        t_opts.append(int(hits[0]) + 1 if hits.size else T + 1)
        regrets.append(float(tr.raw_gaps.sum()))
    comp = lower_bound_comparators(N, T, eps)
    m = min(N / 2, T)
    t_opts = np.array(t_opts)
    return {
        "N": N, "eps": eps, "T": T, "trials": trials, "seed": seed, "alpha": alpha,
        "mean_regret": float(np.mean(regrets)),
        "regrets": regrets,
        "t_opt": t_opts.tolist(),
        "mean_t_opt": float(t_opts.mean()),
        "prob_t_opt_ge": float(np.mean(t_opts >= m)),
        **comp,
    }


# ------------------------------------------------------ fixtures / IO

def relation_fixtures() -> list:
    """Small fixtures shipped for the dimension relation checks."""
    from .dims import EluderFixture, SQFixture, SubadditivityFixture

    fx = []
    sph = make_sphere(2, 12)
    fx.append(SubadditivityFixture("sphere12_halves", sph, list(range(6)), list(range(6, 12)), 1.0, 0.5))
    fx.append(SubadditivityFixture("sphere12_interleaved", sph, list(range(0, 12, 2)), list(range(1, 12, 2)), 1.0, 0.3))
    lin = make_linear_circle(4, 3)
    fx.append(SubadditivityFixture("linear4x3", lin, list(range(6)), list(range(6, 12)), 0.5, 0.25))
    ka = make_karmed([0.9, 0.5, 0.2], f_grid_resolution=1)
    fx.append(EluderFixture("karmed3", ka, 0.5, 0.25))
    fx.append(EluderFixture("linear4x3", lin, 0.5, 0.2))
    fx.append(EluderFixture("relu_circle8", make_relu(2, 0.2, 8, 0), 0.8, 0.1))
    rng = np.random.default_rng(7)
    for r in range(3):
        table = rng.uniform(0, 1, size=(3, 4))
        fx.append(EluderFixture(f"random3x4_{r}", ProductInstance(table, 0), float(table[0].max()) * 0.5, 0.2))
    par = parity_hypotheses(3)
    dist = np.full(8, 1 / 8)
    fx.append(SQFixture("parity3", par, dist, 0.25))
    fx.append(SQFixture("parity3_pm", np.vstack([par[:4], -par[:4]]), dist, 0.25))
    skew = np.array([0.3, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1])
    fx.append(SQFixture("parity3_skew", par, skew, 0.2))
    return fx


def instance_to_dict(inst: Instance) -> dict:
    base = {"target": int(inst.target), "noise_mode": inst.noise_mode,
            "metadata": json.loads(json.dumps(inst.metadata, default=_default))}
    if isinstance(inst, ProductInstance):
        f, a = inst.pair(inst.target)
        return {"kind": "product", "f_table": inst.f_table.tolist(), "target_f": f, "target_action": a, **base}
    if isinstance(inst, SQInstance):
        return {"kind": "sq", "hypotheses": inst.hypotheses.tolist(), "dist": inst.dist.tolist(), **base}
    return {"kind": "dense", "table": inst.dense().tolist(),
            "payloads": json.loads(json.dumps(list(inst.payloads), default=_default)), **base}


def _default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return str(obj)


def instance_from_dict(d: dict) -> Instance:
    kind = d.get("kind")
    if kind == "product":
        return ProductInstance(d["f_table"], d["target_f"], d["noise_mode"], metadata=d.get("metadata"),
                               target_action=d.get("target_action"))
    if kind == "sq":
        return SQInstance(d["hypotheses"], d["dist"], d["target"], d.get("metadata"))
    if kind == "dense":
        return Instance(d["table"], d["target"], d["noise_mode"], d.get("payloads"), d.get("metadata"))
    raise InvalidArgument(f"unknown instance kind {kind!r}")


def dump_instance(inst: Instance, path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst), sort_keys=True))


def load_instance(path) -> Instance:
    return instance_from_dict(json.loads(Path(path).read_text()))


FAMILIES = ("karmed", "linear", "glm", "relu", "sphere", "sq", "separation", "hard_indicator", "file", "table")


def build_instance(spec: dict) -> Instance:
    """Instance from a generator spec ``{"family": ..., "params": {...}}``."""
    fam = spec.get("family")
    p = dict(spec.get("params", {}))
    seed = int(spec.get("seed", p.pop("seed", 0)))
    noise = spec.get("noise_mode", p.pop("noise_mode", "two_point"))
    if fam == "karmed":
        return make_karmed(p["means"], p.get("resolution", 4), p.get("mode", "axis"), noise_mode=noise)
    if fam == "linear":
        if "theta_net" in p:
            return make_linear(p["theta_net"], p["action_net"], p.get("target", 0), noise)
        return make_linear_circle(p.get("n_theta", 8), p.get("n_action", 8), p.get("target", 0), noise)
    if fam == "glm":
        net = circle_net(p.get("net_size", 8))
        scale = float(p.get("scale", 1.0))
        return make_glm(net, net, p.get("target", 0), lambda x: np.tanh(scale * x) / np.tanh(scale),
                        scale * (1 - np.tanh(scale) ** 2) / np.tanh(scale), scale / np.tanh(scale), noise)
    if fam == "relu":
        return make_relu(p.get("n", 2), p.get("b", 0.0), p.get("net_size", 8), p.get("target", 0), seed, noise)
    if fam == "sphere":
        return make_sphere(p.get("n", 2), p.get("net_size", 8), p.get("target", 0), seed, noise)
    if fam == "sq":
        if "hypotheses" in p:
            H = np.asarray(p["hypotheses"], dtype=float)
        else:
            H = parity_hypotheses(p.get("n_bits", 3))
        dist = p.get("dist") or [1 / H.shape[1]] * H.shape[1]
        return make_sq(H, dist, p.get("target", 0))
    if fam == "separation":
        return make_separation(p.get("N", 20), p.get("eps", 0.25), p.get("M", 20), p.get("net_size"), seed, noise)
    if fam == "hard_indicator":
        return hard_combined(p.get("N", 50), p.get("eps", 0.5), p.get("net_size"), seed,
                             spec.get("noise_mode", "deterministic"))
    if fam == "file":
        return load_instance(p["path"])
    if fam == "table":
        return Instance(p["table"], p.get("target", 0), noise, metadata={"generator": "table"})
    raise ConfigError(f"unknown generator family {fam!r}; expected one of {FAMILIES}")
