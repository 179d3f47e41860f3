"""Pure-Python reference implementations of the hot search kernels.

These mirror ``_kernels.pyx`` line for line and are used when the compiled
extension is unavailable.
"""
import numpy as np


def seq_search(M, tol, cap, d, ordered, slack):
    """Find ``d`` distinct indices whose pair values fit a common center.

    Pair values are ``M[s_i, s_j]`` for ``i < j``.  A set of values ``V`` is
    feasible when ``max V - min V <= 2 tol`` and ``max V - tol <= cap``.
    NaN entries mark forbidden pairs.  With ``ordered=False`` only increasing
    index sequences are explored (for symmetric ``M``).  Returns the sequence
    as a list or ``None``.
    """
    M = np.asarray(M, dtype=float)
    k = M.shape[0]
    if d <= 0:
        return []
    if d > k:
        return None
    if d == 1:
        return [0]
    two_tol = 2.0 * tol + slack
    top = cap + tol + slack
    seq = []

    def rec(lo, hi, cands, clo, chi):
        depth = len(seq)
        if depth == d:
            return True
        if depth + len(cands) < d:
            return False
        for idx in range(len(cands)):
            w = cands[idx]
            if depth == 0:
                nlo, nhi = np.inf, -np.inf
            else:
                nlo = min(lo, clo[idx])
                nhi = max(hi, chi[idx])
            seq.append(w)
            if depth + 1 == d:
                return True
            ncands, nclo, nchi = [], [], []
            start = 0 if ordered else idx + 1
            for j in range(start, len(cands)):
                u = cands[j]
                if u == w:
                    continue
                v = M[w, u]
                if v != v:
                    continue
                ulo = v if depth == 0 else min(clo[j], v)
                uhi = v if depth == 0 else max(chi[j], v)
                tlo = min(nlo, ulo)
                thi = max(nhi, uhi)
                if thi - tlo <= two_tol and thi <= top:
                    ncands.append(u)
                    nclo.append(ulo)
                    nchi.append(uhi)
            if rec(nlo, nhi, ncands, nclo, nchi):
                return True
            seq.pop()
        return False

    cands = list(range(k))
    if rec(np.inf, -np.inf, cands, [0.0] * k, [0.0] * k):
        return list(seq)
    return None


def eluder_longest(D, thr):
    """Longest eluder sequence for pair-difference table ``D[p, a]``.

    Action ``a`` extends predecessor set ``S`` iff some pair ``p`` has
    ``sum_{b in S} D[p, b] <= thr`` and ``D[p, a] > thr``.  Returns
    ``(length, actions, pairs)`` with one witness pair index per step.
    """
    D = np.asarray(D, dtype=float)
    n_pairs, n_act = D.shape
    memo = {}

    def best(mask):
        if mask in memo:
            return memo[mask][0]
        # Predecessor sums in ascending action order, independent of path.
        sums = np.zeros(n_pairs)
        for b in range(n_act):
            if mask >> b & 1:
                sums += D[:, b]
        ps = np.flatnonzero(sums <= thr)
        best_len, best_a, best_p = 0, -1, -1
        if ps.size:
            for a in range(n_act):
                if mask >> a & 1:
                    continue
                hit = ps[D[ps, a] > thr]
                if hit.size == 0:
                    continue
                length = 1 + best(mask | (1 << a))
                if length > best_len:
                    best_len, best_a, best_p = length, a, int(hit[0])
        memo[mask] = (best_len, best_a, best_p)
        return best_len

    length = best(0)
    actions, pairs, mask = [], [], 0
    while True:
        _, a, p = memo[mask]
        if a < 0:
            break
        actions.append(a)
        pairs.append(p)
        mask |= 1 << a
    return length, actions, pairs


def residual_sums(H, center):
    """``out[z] = sum_i (H[i, z] - H[i, center])^2`` accumulated row by row."""
    H = np.asarray(H, dtype=float)
    out = np.zeros(H.shape[1])
    for i in range(H.shape[0]):
        diff = H[i] - H[i, center]
        out += diff * diff
    return out
