"""Exact combinatorial dimensions of finite instances, with certificates.

All three dimensions are found by ascending target length: a feasible
witness of length ``d`` has feasible prefixes of every shorter length, so the
first infeasible length ends the search.  Each length is decided by an
exhaustive depth-first search in :mod:`iestim.kernels`.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import EPS, Instance, ProductInstance
from .errors import InvalidArgument, SizeCapError
from .kernels import eluder_longest, seq_search

MAX_SEARCH_SIZE = 400
MAX_ELUDER_ACTIONS = 26
MAX_EXACT_COVER = 20
MAX_RELATION_SIZE = 64


@dataclass
class DimensionCertificate:
    kind: str
    sequence: list
    epsilon: float
    value: int
    center_c: float | None = None
    alpha: float | None = None
    witness_pairs: list = field(default_factory=list)
    approx: bool = False

    def to_dict(self) -> dict:
        out = asdict(self)
        out["sequence"] = [int(s) for s in self.sequence]
        out["witness_pairs"] = [[int(f), int(g)] for f, g in self.witness_pairs]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass
class PsiCoverReport:
    epsilon: float
    cover: list
    size: int
    exact: bool


def feasible_center(pair_values, tolerance: float, cap: float):
    """A center ``c <= cap`` within ``tolerance`` of every value, or ``None``."""
    if tolerance < 0:
        raise InvalidArgument("tolerance must be nonnegative")
    vals = np.asarray(list(pair_values), dtype=float)
    if vals.size == 0:
        return float(cap)
    lo, hi = float(vals.min()), float(vals.max())
    if hi - lo > 2.0 * tolerance + EPS or hi - tolerance > cap + EPS:
        return None
    return float(min(lo + tolerance, cap))


def default_grid(epsilon: float, alpha: float, ratio: float = 1.2) -> list:
    """Geometric gap grid ``epsilon * ratio^k`` up to ``1 + alpha``."""
    grid = [float(epsilon)]
    top = 1.0 + alpha
    while grid[-1] * ratio <= top + EPS:
        grid.append(grid[-1] * ratio)
    return grid


def _submatrix(instance: Instance, idx: np.ndarray) -> np.ndarray:
    if isinstance(instance, ProductInstance):
        return instance.f_table[instance.f_of[idx][None, :], instance.a_of[idx][:, None]]
    return instance.dense()[np.ix_(idx, idx)]


def large_eval_indices(instance: Instance, alpha: float) -> np.ndarray:
    return np.flatnonzero(instance.self_evals() >= alpha)


def dissimilarity_dim(instance: Instance, alpha: float, epsilon: float,
                      max_size: int = MAX_SEARCH_SIZE) -> tuple[int, DimensionCertificate]:
    """Longest ordered sequence in ``Z_alpha`` with cross values near a center ``c <= alpha - eps``."""
    if not epsilon > 0:
        raise InvalidArgument("epsilon must be positive")
    idx = large_eval_indices(instance, alpha)
    if idx.size > max_size:
        raise SizeCapError(f"|Z_alpha| = {idx.size} exceeds search cap {max_size}")
    cap = alpha - epsilon
    if idx.size == 0:
        return 0, DimensionCertificate("dissimilarity", [], epsilon, 0, cap, alpha)
    M = _submatrix(instance, idx)
    best = [0]
    for d in range(2, idx.size + 1):
        seq = seq_search(M, epsilon / math.sqrt(d), cap, d, True, EPS)
        if seq is None:
            break
        best = seq
    d = len(best)
    values = [M[best[i], best[j]] for i in range(d) for j in range(i + 1, d)]
    c = feasible_center(values, epsilon / math.sqrt(d), cap)
    cert = DimensionCertificate("dissimilarity", [int(idx[s]) for s in best], float(epsilon), d, c, float(alpha))
    return d, cert


def monotone_dissimilarity_dim(instance: Instance, alpha: float, epsilon: float, grid=None):
    """Max of :func:`dissimilarity_dim` over gaps ``eps' >= epsilon`` on a finite grid.

    The result is a lower bound on the supremum over all ``eps'``; the
    certificate carries ``approx=True`` when the default grid is used.
    """
    approx = grid is None
    grid = default_grid(epsilon, alpha) if grid is None else [float(g) for g in grid]
    if not grid:
        raise InvalidArgument("gap grid must be nonempty")
    if min(grid) < epsilon - EPS:
        raise InvalidArgument("grid values must be >= epsilon")
    usable = [g for g in grid if g <= 1.0 + alpha + EPS] or [min(grid)]
    best = None
    for g in usable:
        d, cert = dissimilarity_dim(instance, alpha, g)
        if best is None or d >= best[0]:
            best = (d, g, cert)
    d, g, cert = best
    cert.approx = approx
    return d, g, cert


def validate_dissimilarity(cert: DimensionCertificate, instance: Instance) -> bool:
    """Re-check a dissimilarity certificate by direct evaluation."""
    seq = list(cert.sequence)
    d = len(seq)
    if d != cert.value:
        return False
    if d == 0:
        return True
    if len(set(seq)) != d:
        return False
    if any(instance.evaluate(z, z) < cert.alpha for z in seq):
        return False
    c = cert.center_c
    if c is None or c > cert.alpha - cert.epsilon + EPS:
        return False
    tol = cert.epsilon / math.sqrt(d)
    for j in range(d):
        for i in range(j):
            if abs(instance.evaluate(seq[i], seq[j]) - c) > tol + EPS:
                return False
    return True


def _pair_table(f_table: np.ndarray, thr: float):
    """Squared differences for function pairs that can ever separate an action."""
    n_f = f_table.shape[0]
    pairs, rows = [], []
    for f, g in itertools.combinations(range(n_f), 2):
        diff = (f_table[f] - f_table[g]) ** 2
        if diff.max() > thr:
            pairs.append((f, g))
            rows.append(diff)
    if not rows:
        return pairs, np.zeros((0, f_table.shape[1]))
    return pairs, np.array(rows)


def eluder_dim(f_table, epsilon: float, max_actions: int = MAX_ELUDER_ACTIONS):
    """Exact eluder dimension of a finite class given as an ``|F| x |A|`` table.

    Witness pairs index rows of ``f_table``.
    """
    if not epsilon > 0:
        raise InvalidArgument("epsilon must be positive")
    f_table = np.asarray(f_table, dtype=float)
    if f_table.ndim != 2 or f_table.shape[0] == 0:
        raise InvalidArgument("function table must be a nonempty 2-D array")
    uniq, first = np.unique(f_table, axis=0, return_index=True)
    thr = epsilon * epsilon
    pairs, D = _pair_table(uniq, thr)
    if not pairs:
        return 0, DimensionCertificate("eluder", [], float(epsilon), 0)
    # Actions no pair separates can never be appended.
    useful = np.flatnonzero(D.max(axis=0) > thr)
    if useful.size > max_actions:
        raise SizeCapError(f"{useful.size} separating actions exceed eluder search cap {max_actions}")
    length, acts, pidx = eluder_longest(np.ascontiguousarray(D[:, useful]), thr)
    seq = [int(useful[a]) for a in acts]
    witnesses = [(int(first[pairs[p][0]]), int(first[pairs[p][1]])) for p in pidx]
    return int(length), DimensionCertificate("eluder", seq, float(epsilon), int(length), witness_pairs=witnesses)


def monotone_eluder_dim(f_table, epsilon: float, grid=None, max_actions: int = MAX_ELUDER_ACTIONS):
    """Max of :func:`eluder_dim` over gaps ``eps' >= epsilon`` on a finite grid."""
    approx = grid is None
    f_table = np.asarray(f_table, dtype=float)
    if grid is None:
        span = float(f_table.max() - f_table.min())
        grid = default_grid(epsilon, max(span, epsilon) - 1.0)
    grid = [float(g) for g in grid]
    if not grid:
        raise InvalidArgument("gap grid must be nonempty")
    if min(grid) < epsilon - EPS:
        raise InvalidArgument("grid values must be >= epsilon")
    best = None
    for g in grid:
        d, cert = eluder_dim(f_table, g, max_actions)
        if best is None or d >= best[0]:
            best = (d, g, cert)
    d, g, cert = best
    cert.approx = approx
    return d, g, cert


def validate_eluder(cert: DimensionCertificate, f_table) -> bool:
    f_table = np.asarray(f_table, dtype=float)
    seq = list(cert.sequence)
    if len(seq) != cert.value or len(cert.witness_pairs) != len(seq):
        return False
    eps = cert.epsilon
    for k, (a, (f, g)) in enumerate(zip(seq, cert.witness_pairs)):
        prior = sum((f_table[f, b] - f_table[g, b]) ** 2 for b in seq[:k])
        if math.sqrt(prior) > eps + EPS:
            return False
        if not abs(f_table[f, a] - f_table[g, a]) > eps:
            return False
    return True


def check_distribution(dist) -> np.ndarray:
    dist = np.asarray(dist, dtype=float)
    if dist.ndim != 1 or np.any(dist < 0) or abs(dist.sum() - 1.0) > 1e-12:
        raise InvalidArgument("distribution must be a nonnegative vector summing to 1")
    return dist


def sq_gram(hypotheses, dist) -> np.ndarray:
    H = np.asarray(hypotheses, dtype=float)
    dist = check_distribution(dist)
    if H.ndim != 2 or H.shape[1] != dist.size:
        raise InvalidArgument("hypothesis table must be |H| x |X|")
    if not np.all(np.abs(H) == 1.0):
        raise InvalidArgument("hypotheses must take values in {-1, +1}")
    return (H * dist) @ H.T


def strong_sq_dim(hypotheses, dist, epsilon: float, max_size: int = MAX_SEARCH_SIZE):
    """Largest subset with ``|<h_i,h_j>| <= 1 - eps`` and pairwise spread ``<= 1/d``."""
    if not epsilon > 0:
        raise InvalidArgument("epsilon must be positive")
    return strong_sq_dim_from_gram(sq_gram(hypotheses, dist), epsilon, max_size)


def strong_sq_dim_from_gram(G, epsilon: float, max_size: int = MAX_SEARCH_SIZE):
    G = np.asarray(G, dtype=float)
    k = G.shape[0]
    if k > max_size:
        raise SizeCapError(f"|H| = {k} exceeds search cap {max_size}")
    if k == 0:
        return 0, DimensionCertificate("strong_sq", [], float(epsilon), 0)
    M = np.where(np.abs(G) <= 1.0 - epsilon + EPS, G, np.nan)
    best = [0]
    for d in range(2, k + 1):
        seq = seq_search(M, 0.5 / d, np.inf, d, False, EPS)
        if seq is None:
            break
        best = seq
    return len(best), DimensionCertificate("strong_sq", [int(s) for s in best], float(epsilon), len(best))


def validate_strong_sq(cert: DimensionCertificate, gram) -> bool:
    G = np.asarray(gram, dtype=float)
    seq = list(cert.sequence)
    d = len(seq)
    if d != cert.value or len(set(seq)) != d:
        return False
    vals = [G[seq[i], seq[j]] for i in range(d) for j in range(i + 1, d)]
    if any(abs(v) > 1.0 - cert.epsilon + EPS for v in vals):
        return False
    return not vals or max(vals) - min(vals) <= 1.0 / d + EPS


def psi_matrix(instance: Instance) -> np.ndarray:
    """``psi[i, j] = max_z |rho(z|z_i) - rho(z|z_j)|``."""
    T = instance.dense()
    n = T.shape[1]
    psi = np.empty((n, n))
    for j in range(n):
        psi[:, j] = np.abs(T - T[:, [j]]).max(axis=0)
    return psi


def covering_number(instance: Instance, epsilon: float, mode: str = "greedy") -> PsiCoverReport:
    psi = psi_matrix(instance)
    n = psi.shape[0]
    if mode == "greedy":
        cover = [0]
        dist = psi[0].copy()
        while dist.max() > epsilon + EPS:
            nxt = int(np.argmax(dist))
            cover.append(nxt)
            dist = np.minimum(dist, psi[nxt])
        return PsiCoverReport(float(epsilon), cover, len(cover), False)
    if mode != "exact":
        raise InvalidArgument(f"unknown cover mode {mode!r}")
    if n > MAX_EXACT_COVER:
        raise SizeCapError(f"exact cover limited to |Z| <= {MAX_EXACT_COVER}, got {n}")
    within = psi <= epsilon + EPS
    masks = [int(sum(1 << j for j in np.flatnonzero(within[i]))) for i in range(n)]
    full = (1 << n) - 1
    for k in range(1, n + 1):
        for combo in itertools.combinations(range(n), k):
            m = 0
            for i in combo:
                m |= masks[i]
            if m == full:
                return PsiCoverReport(float(epsilon), list(combo), k, True)
    raise AssertionError("unreachable: the full set always covers")


@dataclass
class SubadditivityFixture:
    name: str
    instance: Instance
    part1: list
    part2: list
    alpha: float
    epsilon: float


@dataclass
class EluderFixture:
    name: str
    instance: ProductInstance
    alpha: float
    epsilon: float


@dataclass
class SQFixture:
    name: str
    hypotheses: np.ndarray
    dist: np.ndarray
    epsilon: float


def _row(fixture, relation, lhs, rhs, holds, enforced=True, note=""):
    return {"fixture": fixture, "relation": relation, "lhs": lhs, "rhs": rhs,
            "holds": bool(holds), "enforced": enforced, "note": note}


def check_relations(fixtures) -> dict:
    """Evaluate both sides of each dimension relation on small fixtures.

    Enforced rows count as failures when they do not hold.  Rows marked
    ``enforced=False`` are reported for information only.
    """
    rows = []
    for fx in fixtures:
        if isinstance(fx, SubadditivityFixture):
            rows.extend(_check_subadditivity(fx))
        elif isinstance(fx, EluderFixture):
            rows.extend(_check_eluder(fx))
        elif isinstance(fx, SQFixture):
            rows.extend(_check_sq(fx))
        else:
            raise InvalidArgument(f"unknown fixture type {type(fx).__name__}")
    failures = sum(1 for r in rows if r["enforced"] and not r["holds"])
    return {"rows": rows, "failures": failures}


def _size_guard(name, n):
    if n > MAX_RELATION_SIZE:
        raise SizeCapError(f"fixture {name!r} has |Z| = {n} > {MAX_RELATION_SIZE}")


def _check_subadditivity(fx):
    _size_guard(fx.name, fx.instance.size)
    z1, z2 = fx.instance.subinstance(fx.part1), fx.instance.subinstance(fx.part2)
    a, e = fx.alpha, fx.epsilon
    d, _ = dissimilarity_dim(fx.instance, a, e)
    d1, _ = dissimilarity_dim(z1, a, e)
    d2, _ = dissimilarity_dim(z2, a, e)
    grid = default_grid(e, a)
    m, _, _ = monotone_dissimilarity_dim(fx.instance, a, e, grid)
    m1, _, _ = monotone_dissimilarity_dim(z1, a, e, grid)
    m2, _, _ = monotone_dissimilarity_dim(z2, a, e, grid)
    return [
        _row(fx.name, "subadditivity", d, d1 + d2, d <= d1 + d2),
        _row(fx.name, "subadditivity_monotone", m, m1 + m2, m <= m1 + m2),
    ]


def _check_eluder(fx):
    inst = fx.instance
    _size_guard(fx.name, inst.size)
    gap = 1.5 * fx.epsilon
    d_rho, _, _ = monotone_dissimilarity_dim(inst, fx.alpha, gap)
    d_e, _, _ = monotone_eluder_dim(inst.f_table, fx.epsilon)
    rhs = 9 * max(1, d_e)
    return [_row(fx.name, "eluder_9x", d_rho, rhs, d_rho <= rhs, note=f"monotone eluder = {d_e}")]


def _check_sq(fx):
    H = np.asarray(fx.hypotheses, dtype=float)
    _size_guard(fx.name, H.shape[0])
    G = sq_gram(H, fx.dist)
    # <h, h> = 1 exactly for +-1 hypotheses; rounding must not drop them from Z_1.
    np.fill_diagonal(G, 1.0)
    G = np.clip(G, -1.0, 1.0)
    e = fx.epsilon
    inst = Instance(G, 0, metadata={"generator": "sq_fixture"})
    rows = []
    d_rho, _ = dissimilarity_dim(inst, 1.0, e)
    if d_rho >= 2:
        d_sq, _ = strong_sq_dim_from_gram(G, e)
        lower = min(d_sq, math.floor(4 * e * e * d_sq * d_sq))
        rows.append(_row(fx.name, "sq_eq1_lower", lower, d_rho, lower <= d_rho))
        d_sq4, _ = strong_sq_dim_from_gram(G, e / 4)
        upper = max(d_sq4, 4 * e * e * (d_sq4 + 1) ** 2)
        rows.append(_row(fx.name, "sq_eq1_upper", d_rho, upper, d_rho <= upper, enforced=False,
                         note="relies on the eq2 lower side, which ignores the -(1-eps) side of condition (a)"))
        upper2 = max(d_rho, math.sqrt(d_rho + 1) / (2 * e))
        rows.append(_row(fx.name, "sq_eq2_upper", d_sq, upper2, d_sq <= upper2 + EPS))
    else:
        rows.append(_row(fx.name, "sq_eq1", None, d_rho, True, enforced=False, note="skipped: d_rho(eps) < 2"))
    d_rho4, _ = dissimilarity_dim(inst, 1.0, 4 * e)
    if d_rho4 >= 2:
        d_sq, _ = strong_sq_dim_from_gram(G, e)
        lower = min(d_rho4, math.floor(math.sqrt(d_rho4) / (8 * e)))
        rows.append(_row(fx.name, "sq_eq2_lower", lower, d_sq, lower <= d_sq, enforced=False,
                         note="antipodal members can violate condition (a) from below"))
    else:
        rows.append(_row(fx.name, "sq_eq2", None, d_rho4, True, enforced=False, note="skipped: d_rho(4 eps) < 2"))
    return rows
