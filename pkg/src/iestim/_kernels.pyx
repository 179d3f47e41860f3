# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels.  Semantics match ``_kernels_py`` exactly."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ONE = 1  # Python int so masks never overflow


cdef class _SeqState:
    cdef double[:, ::1] M
    cdef int k, d
    cdef bint ordered
    cdef double two_tol, top
    cdef int[:, ::1] cand
    cdef double[:, ::1] clo
    cdef double[:, ::1] chi
    cdef int[::1] count
    cdef int[::1] seq

    cdef bint rec(self, int depth, double lo, double hi):
        cdef int idx, j, w, u, n, m, start
        cdef double nlo, nhi, v, ulo, uhi, tlo, thi
        if depth == self.d:
            return True
        n = self.count[depth]
        if depth + n < self.d:
            return False
        for idx in range(n):
            w = self.cand[depth, idx]
            if depth == 0:
                nlo = np.inf
                nhi = -np.inf
            else:
                nlo = lo if lo < self.clo[depth, idx] else self.clo[depth, idx]
                nhi = hi if hi > self.chi[depth, idx] else self.chi[depth, idx]
            self.seq[depth] = w
            if depth + 1 == self.d:
                return True
            m = 0
            start = 0 if self.ordered else idx + 1
            for j in range(start, n):
                u = self.cand[depth, j]
                if u == w:
                    continue
                v = self.M[w, u]
                if v != v:
                    continue
                if depth == 0:
                    ulo = v
                    uhi = v
                else:
                    ulo = self.clo[depth, j] if self.clo[depth, j] < v else v
                    uhi = self.chi[depth, j] if self.chi[depth, j] > v else v
                tlo = nlo if nlo < ulo else ulo
                thi = nhi if nhi > uhi else uhi
                if thi - tlo <= self.two_tol and thi <= self.top:
                    self.cand[depth + 1, m] = u
                    self.clo[depth + 1, m] = ulo
                    self.chi[depth + 1, m] = uhi
                    m += 1
            self.count[depth + 1] = m
            if self.rec(depth + 1, nlo, nhi):
                return True
        return False


def seq_search(M, double tol, double cap, int d, bint ordered, double slack):
    cdef _SeqState st
    cdef int i, k
    M = np.ascontiguousarray(M, dtype=np.float64)
    k = M.shape[0]
    if d <= 0:
        return []
    if d > k:
        return None
    if d == 1:
        return [0]
    st = _SeqState()
    st.M = M
    st.k = k
    st.d = d
    st.ordered = ordered
    st.two_tol = 2.0 * tol + slack
    st.top = cap + tol + slack
    st.cand = np.zeros((d + 1, k), dtype=np.intc)
    st.clo = np.zeros((d + 1, k))
    st.chi = np.zeros((d + 1, k))
    st.count = np.zeros(d + 1, dtype=np.intc)
    st.seq = np.zeros(d, dtype=np.intc)
    for i in range(k):
        st.cand[0, i] = i
    st.count[0] = k
    if st.rec(0, np.inf, -np.inf):
        return [int(st.seq[i]) for i in range(d)]
    return None


cdef class _EluderState:
    cdef double[:, ::1] D
    cdef int n_pairs, n_act
    cdef double thr
    cdef dict memo

    cdef int best(self, object mask):
        cdef int a, b, p, length, best_len, best_a, best_p, hit
        cdef object entry = self.memo.get(mask)
        if entry is not None:
            return entry[0]
        sums = np.zeros(self.n_pairs)
        cdef double[::1] sv = sums
        for b in range(self.n_act):
            if (mask >> b) & 1:
                for p in range(self.n_pairs):
                    sv[p] += self.D[p, b]
        cdef int[::1] ps = np.empty(self.n_pairs, dtype=np.intc)
        cdef int n_alive = 0
        for p in range(self.n_pairs):
            if sv[p] <= self.thr:
                ps[n_alive] = p
                n_alive += 1
        best_len = 0
        best_a = -1
        best_p = -1
        if n_alive > 0:
            for a in range(self.n_act):
                if (mask >> a) & 1:
                    continue
                hit = -1
                for b in range(n_alive):
                    if self.D[ps[b], a] > self.thr:
                        hit = ps[b]
                        break
                if hit < 0:
                    continue
                length = 1 + self.best(mask | (ONE << a))
                if length > best_len:
                    best_len = length
                    best_a = a
                    best_p = hit
        self.memo[mask] = (best_len, best_a, best_p)
        return best_len


def eluder_longest(D, double thr):
    cdef _EluderState st = _EluderState()
    D = np.ascontiguousarray(D, dtype=np.float64)
    st.D = D
    st.n_pairs = D.shape[0]
    st.n_act = D.shape[1]
    st.thr = thr
    st.memo = {}
    length = st.best(0)
    actions, pairs, mask = [], [], 0
    while True:
        _, a, p = st.memo[mask]
        if a < 0:
            break
        actions.append(a)
        pairs.append(p)
        mask |= 1 << a
    return length, actions, pairs


def residual_sums(H, Py_ssize_t center):
    cdef double[:, ::1] h = np.ascontiguousarray(H, dtype=np.float64)
    cdef Py_ssize_t i, z, n = h.shape[0], m = h.shape[1]
    out = np.zeros(m)
    cdef double[::1] o = out
    cdef double c, diff
    for i in range(n):
        c = h[i, center]
        for z in range(m):
            diff = h[i, z] - c
            o[z] += diff * diff
    return out
