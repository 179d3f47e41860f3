"""Brute-force reference implementations used as test oracles.

Nothing here imports from the package search code; every routine enumerates
permutations or subsets directly.
"""
import itertools
import math

import numpy as np

SLACK = 1e-12


def _fits(values, tol, cap):
    """Some center ``c <= cap`` lies within ``tol`` of every value."""
    if not values:
        return True
    c = min(min(values) + tol, cap)
    return all(abs(v - c) <= tol + SLACK for v in values)


def dissimilarity(table, alpha, eps):
    """Longest ordered sequence by enumerating permutations of ``Z_alpha``."""
    table = np.asarray(table, dtype=float)
    pool = [i for i in range(table.shape[0]) if table[i, i] >= alpha]
    best = 1 if pool else 0
    for d in range(2, len(pool) + 1):
        tol = eps / math.sqrt(d)
        found = False
        for perm in itertools.permutations(pool, d):
            vals = [table[perm[i], perm[j]] for i in range(d) for j in range(i + 1, d)]
            if _fits(vals, tol, alpha - eps):
                found = True
                break
        if not found:
            break
        best = d
    return best


def eluder(f_table, eps):
    """Longest eps-independent action sequence by enumerating permutations."""
    F = np.asarray(f_table, dtype=float)
    n_f, n_a = F.shape
    fpairs = list(itertools.combinations(range(n_f), 2))

    def independent(prefix, a):
        for f, g in fpairs:
            prior = sum((F[f, b] - F[g, b]) ** 2 for b in prefix)
            if prior <= eps * eps and abs(F[f, a] - F[g, a]) > eps:
                return True
        return False

    def valid(seq):
        return all(independent(seq[:k], seq[k]) for k in range(len(seq)))

    best = 0
    for d in range(1, n_a + 1):
        if not any(valid(p) for p in itertools.permutations(range(n_a), d)):
            break
        best = d
    return best


def strong_sq(G, eps):
    """Largest subset with bounded, mutually close correlations by enumerating combinations."""
    G = np.asarray(G, dtype=float)
    k = G.shape[0]
    best = 1 if k else 0
    for d in range(2, k + 1):
        ok = False
        for combo in itertools.combinations(range(k), d):
            vals = [G[a, b] for a, b in itertools.combinations(combo, 2)]
            if all(abs(v) <= 1 - eps + SLACK for v in vals) and max(vals) - min(vals) <= 1.0 / d + SLACK:
                ok = True
                break
        if ok:
            best = d
    return best


def exact_cover(table, eps):
    """Smallest psi-cover by trying subsets in increasing size."""
    T = np.asarray(table, dtype=float)
    n = T.shape[0]
    psi = np.array([[np.max(np.abs(T[:, i] - T[:, j])) for j in range(n)] for i in range(n)])
    for k in range(1, n + 1):
        for combo in itertools.combinations(range(n), k):
            if np.all(psi[list(combo)].min(axis=0) <= eps + SLACK):
                return k
    return n


def brute_ls_choice(table, members, history):
    """Least-squares choice by summing residuals one alternative at a time."""
    T = np.asarray(table, dtype=float)
    best, best_loss = None, None
    for z in members:
        loss = 0.0
        for q, r in history:
            loss += (T[q, z] - r) ** 2
        if best_loss is None or loss < best_loss:
            best, best_loss = z, loss
    return best
