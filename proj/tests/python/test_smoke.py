import numpy as np
import pytest
from scipy import stats

import avgeig


def random_symmetric(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(-1, 1, size=(n, n))
    return (a + a.T) / 2


def test_draw_sample_keeps_m_at_p_one():
    m = random_symmetric(6, 1)
    assert np.array_equal(avgeig.draw_sample(m, 1.0), m)


def test_draw_sample_is_symmetric_and_scaled():
    m = random_symmetric(20, 2)
    s = avgeig.draw_sample(m, 0.3, seed=4)
    assert np.array_equal(s, s.T)
    kept = s != 0
    assert np.allclose(s[kept], m[kept] / 0.3)
    assert np.array_equal(s, avgeig.draw_sample(m, 0.3, seed=4))


def test_top_eigenpairs_match_numpy():
    m = random_symmetric(12, 3) + np.diag(np.linspace(3, 0, 12))
    values, vectors = avgeig.top_k_eigen(m, 2, tol=1e-12, max_iter=100000)
    ref_values, ref_vectors = np.linalg.eigh(m)
    assert np.allclose(values, ref_values[::-1][:2], atol=1e-9)
    for i in range(2):
        assert abs(abs(vectors[:, i] @ ref_vectors[:, -1 - i]) - 1) < 1e-9
    assert avgeig.spectral_norm(m) == pytest.approx(np.linalg.norm(m, 2), rel=1e-9)


def test_estimate_with_truth():
    m, values, vectors, alpha = avgeig.synth_symmetric(60, [1.0, 0.4], seed=5)
    assert np.allclose(m, vectors @ np.diag(values) @ vectors.T)
    exact = avgeig.estimate(m, 1.0, 3, eigenvalues=values, eigenvectors=vectors)
    assert exact["alignment"] == pytest.approx(1.0)
    r = avgeig.estimate(m, 0.5, 30, seed=1, eigenvalues=values, eigenvectors=vectors)
    assert r["alignment"] > np.median(r["per_sample_alignments"])
    assert avgeig.mu(values, vectors, alpha) > 0


def test_pagerank_matches_linear_solve():
    edges = [(0, 1), (0, 2), (1, 2), (2, 0), (3, 2), (3, 4), (1, 3)]
    n, c = 5, 0.85
    b = np.zeros((n, n))
    for i in range(n):
        out = [j for (s, j) in edges if s == i]
        if out:
            b[i, out] = 1 / len(out)
        else:
            b[i, :] = 1 / n
    ref = np.linalg.solve(np.eye(n) - c * b.T, np.full(n, (1 - c) / n))
    assert np.allclose(avgeig.pagerank(n, edges, c), ref, atol=1e-10)


def test_spearman_matches_scipy():
    rng = np.random.default_rng(7)
    x = rng.normal(size=30)
    y = np.round(rng.normal(size=30), 1)
    assert avgeig.spearman_rho(x, y) == pytest.approx(stats.spearmanr(x, y).statistic, abs=1e-12)


def test_expansion_budget():
    values = np.array([2.0, 1.0, 0.5])
    vectors = np.linalg.qr(np.random.default_rng(8).normal(size=(6, 3)))[0]
    e = 0.05 * random_symmetric(6, 9)
    x = avgeig.expand(values, vectors, 0, e, 1)
    assert x["ratio"] < 1
    w, v = np.linalg.eigh(vectors @ np.diag(values) @ vectors.T + e)
    exact = v[:, -1] / (v[:, -1] @ vectors[:, 0])
    assert np.linalg.norm(exact - x["corrected"]) <= x["error_budget"]


def test_blowup_helpers():
    assert avgeig.t_diagonal([0], 50, 0.5)[0] == pytest.approx(50.0)
    b = avgeig.bollobas_lower_bound(1000, 0.02, 25.0)
    assert b["witness"] == pytest.approx(1000 * b["bound"])
    rows = avgeig.blowup([128], draws=2)
    assert rows[0]["opnorm"] ** 2 >= rows[0]["max_t_over_n"] * (1 - 1e-12)


def test_errors_map_to_python_exceptions():
    m = random_symmetric(4, 1)
    with pytest.raises(avgeig.InvalidArgument):
        avgeig.draw_sample(m, 1.5)
    with pytest.raises(ValueError):
        avgeig.spearman_rho(np.ones(3), np.ones(4))
    with pytest.raises(avgeig.OutsidePerturbativeRegime):
        avgeig.expand(np.array([1.0]), np.eye(3)[:, :1], 0, 5 * np.eye(3), 0)
    with pytest.raises(avgeig.Error):
        avgeig.bollobas_lower_bound(10, 0.1, 20.0)
