import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fpix.errors import IndexMismatchError
from fpix.indexing import IndexMode, IndexVector
from fpix.matcher import (
    MatchDecision,
    decide,
    euclidean,
    similarity_matrix,
    suggest_threshold,
)

from oracles import naive_distance


def vec(*xs, mode=IndexMode.SVD):
    return IndexVector(mode, list(xs))


finite = st.floats(-1e6, 1e6, allow_nan=False)
vec_pairs = st.integers(1, 12).flatmap(
    lambda n: st.tuples(*[st.lists(finite, min_size=n, max_size=n).map(lambda c: vec(*c))] * 3)
)


def test_euclidean_examples():
    assert euclidean(vec(0, 0), vec(3, 4)) == 5.0
    x = vec(1.5, 2.5, 7.0)
    assert euclidean(x, x) == 0.0


def test_euclidean_matches_naive_oracle(rng):
    for _ in range(200):
        a, b = rng.standard_normal(64) * 50, rng.standard_normal(64) * 50
        d = euclidean(vec(*a), vec(*b))
        assert d == pytest.approx(naive_distance(a, b), rel=1e-12)


def test_euclidean_extreme_scales():
    assert euclidean(vec(1e-200), vec(-1e-200)) == 2e-200
    assert euclidean(vec(1e300, 0), vec(-1e300, 0)) == 2e300


def test_euclidean_rejects_mismatch():
    with pytest.raises(IndexMismatchError):
        euclidean(vec(1, 2), vec(1, 2, 3))
    with pytest.raises(IndexMismatchError):
        euclidean(vec(1), vec(1, mode=IndexMode.PCA))


@given(vec_pairs)
def test_metric_axioms(triple):
    x, y, z = triple
    dxy, dyx = euclidean(x, y), euclidean(y, x)
    assert dxy == dyx and dxy >= 0
    assert (dxy == 0) == (x.components.tolist() == y.components.tolist())
    scale = max(1.0, dxy, euclidean(x, z), euclidean(z, y))
    assert dxy <= euclidean(x, z) + euclidean(z, y) + 1e-12 * scale


def test_similarity_matrix_examples():
    m = similarity_matrix([("a", vec(1, 1)), ("b", vec(1, 1))])
    assert m.d.tolist() == [[0, 0], [0, 0]]
    m = similarity_matrix([("a", vec(0, 0)), ("b", vec(3, 4))])
    assert m.labels == ("a", "b") and m.d.tolist() == [[0, 5], [5, 0]]
    with pytest.raises(ValueError):
        m.d[0, 1] = 1.0
    with pytest.raises(ValueError):
        similarity_matrix([])
    with pytest.raises(IndexMismatchError):
        similarity_matrix([("a", vec(1)), ("b", vec(1, 2))])


def test_similarity_matrix_structure(rng):
    vs = [(f"v{i}", vec(*rng.standard_normal(8))) for i in range(6)]
    m = similarity_matrix(vs)
    assert m.d.shape == (6, 6)
    assert np.all(np.diag(m.d) == 0) and np.array_equal(m.d, m.d.T)
    assert np.all(m.off_diagonal() > 0) and m.off_diagonal().size == 30
    perm = rng.permutation(6)
    mp = similarity_matrix([vs[i] for i in perm])
    assert mp.labels == tuple(vs[i][0] for i in perm)
    assert np.array_equal(mp.d, m.d[np.ix_(perm, perm)])


def test_decide_examples():
    q = vec(0, 0)
    recs = [("far", vec(7, 0)), ("near", vec(3, 4))]
    assert decide(q, recs, 6) == MatchDecision("near", 5.0, True, 6.0)
    assert decide(q, recs, 4) == MatchDecision("near", 5.0, False, 4.0)
    assert decide(vec(7, 0), recs, 1e-9) == MatchDecision("far", 0.0, True, 1e-9)
    assert decide(q, [("x", vec(5, 0))], 5.0).accepted  # boundary is inclusive
    with pytest.raises(ValueError):
        decide(q, [], 1.0)
    with pytest.raises(ValueError):
        decide(q, recs, 0.0)


def test_decide_tie_break_is_bytewise():
    q = vec(0)
    recs = [("b", vec(1)), ("B", vec(-1)), ("a", vec(1))]
    for perm in itertools.permutations(recs):
        assert decide(q, list(perm), 2.0).best_id == "B"


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(-3, 3)), min_size=1, max_size=8,
                unique_by=lambda t: t[0]),
       st.integers(-3, 3), st.randoms(use_true_random=False))
def test_decide_permutation_invariant(entries, qv, rnd):
    recs = [(f"id{k}", vec(float(v))) for k, v in entries]
    base = decide(vec(float(qv)), recs, 1.5)
    rnd.shuffle(recs)
    assert decide(vec(float(qv)), recs, 1.5) == base


def test_suggest_threshold():
    m = similarity_matrix([("a", vec(0, 0)), ("b", vec(3, 4))])
    assert suggest_threshold(m) == 2.5
    pts = [("x", vec(1, 0, 0)), ("y", vec(0, 1, 0)), ("z", vec(0, 0, 1))]
    assert suggest_threshold(similarity_matrix(pts)) == pytest.approx(np.sqrt(2) / 2)
    # half the smallest inter-identity distance, e.g. 358.9680 -> 179.4840
    m = similarity_matrix([("p", vec(0.0)), ("q", vec(358.968)), ("r", vec(6731.1))])
    assert suggest_threshold(m) == pytest.approx(179.484, abs=1e-12)
    with pytest.raises(ValueError):
        suggest_threshold(similarity_matrix([("a", vec(1))]))
