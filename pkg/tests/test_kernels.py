import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iestim import _kernels_py as py
from iestim import kernels

cy = pytest.importorskip("iestim._kernels")


def test_backend_reports_compiled_build():
    assert kernels.BACKEND == "cython"


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 2**32), k=st.integers(1, 9), d=st.integers(1, 9), ordered=st.booleans(),
       tol=st.sampled_from([0.05, 0.1, 0.3, 0.6]), cap=st.sampled_from([-0.5, 0.0, 0.5, math.inf]),
       nan_frac=st.sampled_from([0.0, 0.2]))
def test_seq_search_equivalence(seed, k, d, ordered, tol, cap, nan_frac):
    rng = np.random.default_rng(seed)
    M = rng.choice(np.linspace(-1, 1, 11), size=(k, k))
    M[rng.random((k, k)) < nan_frac] = np.nan
    assert py.seq_search(M, tol, cap, d, ordered, 1e-12) == cy.seq_search(M, tol, cap, d, ordered, 1e-12)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), p=st.integers(1, 10), a=st.integers(1, 8), thr=st.sampled_from([0.04, 0.25, 0.5]))
def test_eluder_longest_equivalence(seed, p, a, thr):
    rng = np.random.default_rng(seed)
    D = rng.choice(np.linspace(0, 1, 9), size=(p, a))
    assert py.eluder_longest(D, thr) == cy.eluder_longest(D, thr)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), rows=st.integers(1, 30), cols=st.integers(1, 20))
def test_residual_sums_bit_identical(seed, rows, cols):
    rng = np.random.default_rng(seed)
    H = rng.uniform(-1, 1, size=(rows, cols))
    c = int(rng.integers(cols))
    assert np.array_equal(py.residual_sums(H, c), cy.residual_sums(H, c))


def test_seq_search_trivial_lengths():
    M = np.zeros((3, 3))
    for mod in (py, cy):
        assert mod.seq_search(M, 0.1, 0.0, 0, True, 1e-12) == []
        assert mod.seq_search(M, 0.1, 0.0, 1, True, 1e-12) == [0]
        assert mod.seq_search(M, 0.1, 0.0, 4, True, 1e-12) is None


def test_seq_search_respects_order():
    # Only M[0, 1] is small enough; the reverse pair is not.
    M = np.array([[1.0, 0.0], [0.9, 1.0]])
    for mod in (py, cy):
        assert mod.seq_search(M, 0.1, 0.0, 2, True, 1e-12) == [0, 1]
