import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import naive
from helpers import random_instance
from iestim.core import Instance, ProductInstance
from iestim.dims import (DimensionCertificate, EluderFixture, SQFixture, SubadditivityFixture, check_relations,
                         covering_number, default_grid, dissimilarity_dim, eluder_dim, feasible_center,
                         monotone_dissimilarity_dim, monotone_eluder_dim, psi_matrix, sq_gram, strong_sq_dim,
                         strong_sq_dim_from_gram, validate_dissimilarity, validate_eluder, validate_strong_sq)
from iestim.errors import InvalidArgument, SizeCapError
from iestim.instances import (make_hard_indicator, make_karmed, make_separation, make_sphere, parity_hypotheses,
                              relation_fixtures, special_alternatives)

LEVELS = np.round(np.linspace(-1, 1, 9), 2)


# ------------------------------------------------------- feasible_center

def test_center_interval_is_a_point():
    assert feasible_center([0.1, 0.2], 0.05, 0.2) == pytest.approx(0.15)


def test_center_spread_too_wide():
    assert feasible_center([0.0, 0.3], 0.1, 1.0) is None


def test_center_exact_coincidence():
    assert feasible_center([-0.5, -0.5], 0.0, -0.5) == -0.5


def test_center_empty_returns_cap():
    assert feasible_center([], 0.3, 0.7) == 0.7


def test_center_above_cap_infeasible():
    assert feasible_center([0.9], 0.05, 0.5) is None


# ---------------------------------------------------- dissimilarity_dim

def test_singleton_dimension_one():
    d, cert = dissimilarity_dim(Instance(np.array([[1.0]]), 0), 1.0, 0.5)
    assert d == 1 and validate_dissimilarity(cert, Instance(np.array([[1.0]]), 0))


def test_empty_large_set_dimension_zero():
    d, _ = dissimilarity_dim(Instance(np.array([[0.5]]), 0), 0.9, 0.1)
    assert d == 0


def _hard_special(N=4, eps=0.5):
    hard, _ = make_hard_indicator(N, eps)
    return hard.subinstance(special_alternatives(hard))


def test_hard_indicator_dimension():
    inst = _hard_special()
    d, cert = dissimilarity_dim(inst, 0.5, 1.0)
    assert d == 4
    assert cert.center_c == pytest.approx(-0.5)
    assert validate_dissimilarity(cert, inst)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 1.0])
def test_karmed_dimension_at_most_k(alpha):
    inst = make_karmed([1.0, 0.6, 0.3], 4)
    for eps in (0.25, 0.5):
        if alpha >= eps:
            d, cert = dissimilarity_dim(inst, alpha, eps)
            assert d <= 3
            assert validate_dissimilarity(cert, inst)


def test_nonpositive_epsilon_rejected():
    with pytest.raises(InvalidArgument):
        dissimilarity_dim(Instance(np.eye(2), 0), 1.0, 0.0)


def test_size_cap():
    with pytest.raises(SizeCapError):
        dissimilarity_dim(make_sphere(2, 12), 1.0, 0.5, max_size=5)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 8), alpha=st.sampled_from([-0.5, 0.0, 0.25, 0.5, 1.0]),
       eps=st.sampled_from([0.1, 0.25, 0.4, 0.75]), discrete=st.booleans())
def test_dissimilarity_matches_naive(seed, n, alpha, eps, discrete):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, n, LEVELS if discrete else None)
    d, cert = dissimilarity_dim(inst, alpha, eps)
    assert d == naive.dissimilarity(inst.dense(), alpha, eps)
    assert validate_dissimilarity(cert, inst)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(2, 9), eps=st.sampled_from([0.1, 0.3, 0.6]))
def test_subset_monotonicity(seed, n, eps):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, n, LEVELS)
    keep = sorted(set(rng.choice(n, size=rng.integers(1, n + 1), replace=False).tolist()) | {0})
    sub = inst.subinstance(keep)
    assert dissimilarity_dim(sub, 0.0, eps)[0] <= dissimilarity_dim(inst, 0.0, eps)[0]


def test_certificate_tampering_detected():
    inst = _hard_special()
    _, cert = dissimilarity_dim(inst, 0.5, 1.0)
    bad = DimensionCertificate(**{**cert.to_dict(), "center_c": 0.4})
    assert not validate_dissimilarity(bad, inst)
    dup = DimensionCertificate(**{**cert.to_dict(), "sequence": [0, 0, 1, 2]})
    assert not validate_dissimilarity(dup, inst)


def test_certificate_json_roundtrip():
    inst = _hard_special()
    _, cert = dissimilarity_dim(inst, 0.5, 1.0)
    back = DimensionCertificate(**json.loads(cert.to_json()))
    assert validate_dissimilarity(back, inst)


# ------------------------------------------------------ monotone variant

def test_monotone_singleton_grid_equals_plain():
    inst = _hard_special()
    d, g, cert = monotone_dissimilarity_dim(inst, 0.5, 0.5, [0.5])
    assert (d, g) == (dissimilarity_dim(inst, 0.5, 0.5)[0], 0.5)
    assert not cert.approx


def test_monotone_hard_indicator():
    d, g, _ = monotone_dissimilarity_dim(_hard_special(), 0.5, 0.5, [0.5, 1.0])
    assert (d, g) == (4, 1.0)


def test_monotone_grows_with_gap(monotone_table):
    inst = Instance(monotone_table, 0)
    assert dissimilarity_dim(inst, 1.0, 0.1)[0] == 2
    assert dissimilarity_dim(inst, 1.0, 0.2)[0] == 3
    d, g, _ = monotone_dissimilarity_dim(inst, 1.0, 0.1, [0.1, 0.2])
    assert (d, g) == (3, 0.2)


def test_monotone_default_grid_is_flagged():
    _, _, cert = monotone_dissimilarity_dim(_hard_special(), 0.5, 0.5)
    assert cert.approx


def test_monotone_grid_errors():
    inst = _hard_special()
    with pytest.raises(InvalidArgument):
        monotone_dissimilarity_dim(inst, 0.5, 0.5, [])
    with pytest.raises(InvalidArgument):
        monotone_dissimilarity_dim(inst, 0.5, 0.5, [0.25])


def test_default_grid_spans_to_one_plus_alpha():
    g = default_grid(0.25, 0.5)
    assert g[0] == 0.25 and g[-1] <= 1.5 and g[-1] * 1.2 > 1.5


# ------------------------------------------------------------ eluder_dim

def test_single_function_has_eluder_zero():
    assert eluder_dim(np.array([[0.1, 0.5, -0.3]]), 0.1)[0] == 0


def _witness_table(N, eps):
    F = np.full((N + 1, N), eps)
    for i in range(N):
        F[i, i] = -eps
    return F


def test_witness_family_exact_value():
    F = _witness_table(3, 0.5)
    d, cert = eluder_dim(F, 0.5)
    assert d == 3 == naive.eluder(F, 0.5)
    assert validate_eluder(cert, F)


def test_witness_family_constructed_sequence():
    F = _witness_table(3, 0.5)
    cert = DimensionCertificate("eluder", [0, 1, 2], 0.5, 3, witness_pairs=[(0, 3), (1, 3), (2, 3)])
    assert validate_eluder(cert, F)


def test_separation_witness_rows_exact():
    inst = make_separation(3, 0.25, M=0)
    d, cert = eluder_dim(inst.f_table, 0.25)
    assert d == 3 == naive.eluder(inst.f_table, 0.25)
    assert validate_eluder(cert, inst.f_table)


def test_eluder_witness_pairs_index_original_rows():
    F = np.vstack([_witness_table(2, 0.5), _witness_table(2, 0.5)[0]])
    d, cert = eluder_dim(F, 0.5)
    assert d == 2 and validate_eluder(cert, F)


def test_eluder_action_cap():
    F = np.vstack([np.zeros(30), np.ones(30)])
    with pytest.raises(SizeCapError):
        eluder_dim(F, 0.5)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), n_f=st.integers(1, 5), n_a=st.integers(1, 5),
       eps=st.sampled_from([0.2, 0.3, 0.5, 0.8]))
def test_eluder_matches_naive(seed, n_f, n_a, eps):
    rng = np.random.default_rng(seed)
    F = rng.choice(np.linspace(-1, 1, 9), size=(n_f, n_a))
    d, cert = eluder_dim(F, eps)
    assert d == naive.eluder(F, eps)
    assert validate_eluder(cert, F)


def test_monotone_eluder_at_least_plain():
    F = _witness_table(3, 0.5)
    d, g, _ = monotone_eluder_dim(F, 0.25, [0.25, 0.5, 0.75])
    assert d >= eluder_dim(F, 0.25)[0]


# -------------------------------------------------------- strong_sq_dim

def test_antipodal_pair():
    h = np.array([[1, -1, 1, 1]])
    d, _ = strong_sq_dim(np.vstack([h, -h]), np.full(4, 0.25), 0.1)
    assert d <= 1


def test_orthogonal_pair():
    H = np.array([[1, 1, -1, -1], [1, -1, 1, -1]])
    d, cert = strong_sq_dim(H, np.full(4, 0.25), 0.5)
    assert d == 2 and validate_strong_sq(cert, sq_gram(H, np.full(4, 0.25)))


def test_correlation_threshold():
    H = np.array([[1, 1, 1, 1, 1], [1, 1, 1, 1, -1]])
    dist = np.array([0.2, 0.2, 0.2, 0.2, 0.2])
    assert sq_gram(H, dist)[0, 1] == pytest.approx(0.6)
    assert strong_sq_dim(H, dist, 0.5)[0] == 1


def test_invalid_distribution():
    with pytest.raises(InvalidArgument):
        strong_sq_dim(np.ones((2, 3)), np.array([0.5, 0.5, 0.5]), 0.1)
    with pytest.raises(InvalidArgument):
        strong_sq_dim(np.ones((2, 2)), np.array([1.5, -0.5]), 0.1)


def test_parity_family_full_dimension():
    H = parity_hypotheses(3)
    d, cert = strong_sq_dim(H, np.full(8, 1 / 8), 0.5)
    assert d == len(H) == naive.strong_sq(sq_gram(H, np.full(8, 1 / 8)), 0.5)
    assert validate_strong_sq(cert, sq_gram(H, np.full(8, 1 / 8)))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), k=st.integers(1, 9), m=st.integers(2, 6),
       eps=st.sampled_from([0.1, 0.3, 0.5, 0.8]))
def test_strong_sq_matches_naive(seed, k, m, eps):
    rng = np.random.default_rng(seed)
    H = rng.choice([-1.0, 1.0], size=(k, m))
    dist = rng.dirichlet(np.ones(m))
    dist /= dist.sum()
    G = sq_gram(H, dist)
    d, cert = strong_sq_dim_from_gram(G, eps)
    assert d == naive.strong_sq(G, eps)
    assert validate_strong_sq(cert, G)


# ------------------------------------------------------- covering_number

def test_cover_singleton():
    assert covering_number(Instance(np.array([[1.0]]), 0), 0.1).size == 1


def test_cover_identical_rows():
    inst = Instance(np.array([[1.0, 1.0], [0.2, 0.2]]), 0)
    for mode in ("greedy", "exact"):
        assert covering_number(inst, 0.01, mode).size == 1


def test_cover_diagonal_dominant():
    inst = Instance(np.eye(5), 0)
    assert covering_number(inst, 0.5, "greedy").size == 5
    assert covering_number(inst, 0.5, "exact").size == 5


def test_cover_errors():
    with pytest.raises(InvalidArgument):
        covering_number(Instance(np.eye(2), 0), 0.1, "fuzzy")
    with pytest.raises(SizeCapError):
        covering_number(make_sphere(2, 24), 0.1, "exact")


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 8), eps=st.sampled_from([0.1, 0.4, 0.8, 1.2]))
def test_greedy_cover_at_least_exact(seed, n, eps):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, n)
    greedy = covering_number(inst, eps, "greedy")
    exact = covering_number(inst, eps, "exact")
    assert greedy.size >= exact.size == naive.exact_cover(inst.dense(), eps)
    psi = psi_matrix(inst)
    for rep in (greedy, exact):
        assert np.all(psi[rep.cover].min(axis=0) <= eps + 1e-12)


# ------------------------------------------------------- check_relations

def test_shipped_relation_fixtures_pass():
    report = check_relations(relation_fixtures())
    assert report["failures"] == 0
    kinds = {r["relation"] for r in report["rows"]}
    assert {"subadditivity", "subadditivity_monotone", "eluder_9x", "sq_eq1_lower", "sq_eq2_upper"} <= kinds


def test_disjoint_union_subadditivity():
    # Two blocks with large cross evaluations, so sequences cannot mix blocks.
    A = np.array([[1.0, 0.5], [0.5, 1.0]])
    B = np.array([[1.0, 0.5, 0.5], [0.5, 1.0, 0.5], [0.5, 0.5, 1.0]])
    T = np.full((5, 5), 1.0)
    T[:2, :2], T[2:, 2:] = A, B
    inst = Instance(T, 0)
    z1, z2 = inst.subinstance([0, 1]), inst.subinstance([2, 3, 4])
    assert dissimilarity_dim(z1, 1.0, 0.5)[0] == 2
    assert dissimilarity_dim(z2, 1.0, 0.5)[0] == 3
    rows = check_relations([SubadditivityFixture("blocks", inst, [0, 1], [2, 3, 4], 1.0, 0.5)])["rows"]
    assert rows[0]["lhs"] <= 5 and rows[0]["holds"]


def test_eluder_relation_rows():
    inst = ProductInstance(np.array([[0.9, 0.1], [0.1, 0.9], [0.5, 0.5]]), 0)
    rows = check_relations([EluderFixture("tiny", inst, 0.5, 0.3)])["rows"]
    assert rows[0]["relation"] == "eluder_9x" and rows[0]["holds"]


def test_sq_relation_rows():
    par = parity_hypotheses(3)
    rows = check_relations([SQFixture("par", par, np.full(8, 1 / 8), 0.25)])["rows"]
    lower = [r for r in rows if r["relation"] == "sq_eq1_lower"][0]
    assert lower["lhs"] == min(8, math.floor(4 * 0.25**2 * 64)) and lower["holds"]


def test_relation_size_guard():
    with pytest.raises(SizeCapError):
        check_relations([SubadditivityFixture("big", make_sphere(2, 72), [0], [1], 1.0, 0.5)])


def test_relation_unknown_fixture():
    with pytest.raises(InvalidArgument):
        check_relations([object()])
