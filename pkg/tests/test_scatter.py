import numpy as np
import pytest

from costdim.costmodel import CostMatrix, validate_cost_matrix
from costdim.errors import (
    CostShapeMismatch,
    EmptyClass,
    NotPositiveDefinite,
    SameClass,
    ZeroDirection,
)
from costdim.linalg import cholesky, eig_generalized, eig_symmetric
from costdim.scatter import (
    Dataset,
    add_ridge,
    between_class_scatter,
    class_mean,
    cost_weighted_between_scatter,
    pairwise_scatter,
    separability,
    total_scatter,
    within_class_scatter,
)


def make_dataset(features, labels, k=None):
    labels = np.asarray(labels)
    if k is None:
        k = int(labels.max()) + 1
    return Dataset(np.asarray(features, dtype=float), labels, k)


def random_labelled(rng, n=30, dim=3, k=3):
    features = rng.standard_normal((n, dim)) + rng.standard_normal((1, dim))
    labels = rng.integers(0, k, size=n)
    labels[:k] = np.arange(k)  # every class populated
    return make_dataset(features, labels, k)


def random_cost(rng, k):
    c = rng.uniform(0.0, 5.0, size=(k, k))
    np.fill_diagonal(c, 0.0)
    return CostMatrix(c)


# ---------------------------------------------------------------------------
# total scatter
# ---------------------------------------------------------------------------

def test_total_scatter_two_points():
    data = make_dataset([[0.0, 0.0], [2.0, 0.0]], [0, 0])
    np.testing.assert_allclose(
        total_scatter(data), [[2.0, 0.0], [0.0, 0.0]], atol=1e-15
    )


def test_total_scatter_repeated_point_is_zero():
    data = make_dataset([[1.5, -2.0]] * 5, [0] * 5)
    np.testing.assert_array_equal(total_scatter(data), np.zeros((2, 2)))


def test_total_scatter_rotation_equivariance():
    rng = np.random.default_rng(3)
    data = random_labelled(rng)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    rotated = make_dataset(data.features @ q, data.labels, data.class_count)
    np.testing.assert_allclose(
        total_scatter(rotated), q.T @ total_scatter(data) @ q, atol=1e-10
    )


# ---------------------------------------------------------------------------
# class means
# ---------------------------------------------------------------------------

def test_class_mean_simple_and_single_point():
    data = make_dataset([[0.0, 0.0], [2.0, 2.0]], [0, 0])
    np.testing.assert_array_equal(class_mean(data, 0), [1.0, 1.0])
    two = make_dataset([[3.0, 4.0], [0.0, 0.0]], [0, 1])
    np.testing.assert_array_equal(class_mean(two, 0), [3.0, 4.0])


def test_class_mean_empty_class():
    data = make_dataset([[0.0], [1.0]], [0, 0], k=2)
    with pytest.raises(EmptyClass):
        class_mean(data, 1)


def test_class_mean_monte_carlo_sanity():
    rng = np.random.default_rng(5)
    mu = np.array([2.0, -1.0])
    sigma = 0.7
    samples = mu + sigma * rng.standard_normal((100, 2))
    data = make_dataset(samples, [0] * 100)
    # 5 sigma / sqrt(100) guard band per axis
    assert np.all(np.abs(class_mean(data, 0) - mu) < 5 * sigma / 10)


# ---------------------------------------------------------------------------
# within / between
# ---------------------------------------------------------------------------

def test_within_scatter_zero_for_point_classes():
    data = make_dataset([[1.0, 1.0]] * 3 + [[-2.0, 0.5]] * 3, [0] * 3 + [1] * 3)
    np.testing.assert_array_equal(within_class_scatter(data), np.zeros((2, 2)))


def test_within_scatter_single_class_equals_total():
    rng = np.random.default_rng(7)
    data = make_dataset(rng.standard_normal((10, 3)), [0] * 10)
    np.testing.assert_allclose(
        within_class_scatter(data), total_scatter(data), atol=1e-12
    )


def test_within_scatter_hand_average():
    # class 0: points (0,0),(2,0) -> scatter [[2,0],[0,0]]
    # class 1: points (0,0),(0,4) -> scatter [[0,0],[0,8]]
    data = make_dataset(
        [[0.0, 0.0], [2.0, 0.0], [0.0, 0.0], [0.0, 4.0]], [0, 0, 1, 1]
    )
    np.testing.assert_allclose(
        within_class_scatter(data), [[1.0, 0.0], [0.0, 4.0]], atol=1e-15
    )


def test_within_scatter_empty_class():
    data = make_dataset([[0.0], [1.0]], [0, 0], k=2)
    with pytest.raises(EmptyClass):
        within_class_scatter(data)


def test_between_scatter_identical_centroids():
    data = make_dataset(
        [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], [0, 0, 1, 1]
    )
    np.testing.assert_allclose(between_class_scatter(data), np.zeros((2, 2)), atol=1e-15)


def test_between_scatter_hand_case():
    # centroids (0,0) and (2,0), overall mean (1,0), equal class sizes
    data = make_dataset(
        [[0.0, 1.0], [0.0, -1.0], [2.0, 1.0], [2.0, -1.0]], [0, 0, 1, 1]
    )
    np.testing.assert_allclose(
        between_class_scatter(data), [[2.0, 0.0], [0.0, 0.0]], atol=1e-15
    )


def test_between_scatter_rank_bound():
    rng = np.random.default_rng(9)
    for k in (2, 3, 4):
        data = random_labelled(rng, n=40, dim=5, k=k)
        eigvals = np.linalg.eigvalsh(between_class_scatter(data))
        assert np.sum(eigvals > 1e-9 * eigvals.max()) <= k - 1


# ---------------------------------------------------------------------------
# pairwise scatter
# ---------------------------------------------------------------------------

def test_pairwise_scatter_hand_case():
    data = make_dataset([[0.0, 0.0], [2.0, 0.0]], [0, 1])
    np.testing.assert_allclose(
        pairwise_scatter(data, 0, 1), [[1.0, 0.0], [0.0, 0.0]], atol=1e-15
    )


def test_pairwise_scatter_coincident_classes():
    # identical point sets: no separation content, just the shared spread
    rng = np.random.default_rng(11)
    points = rng.standard_normal((8, 2))
    data = make_dataset(np.vstack([points, points]), [0] * 8 + [1] * 8)
    centered = points - points.mean(axis=0)
    class_scatter = centered.T @ centered
    result = pairwise_scatter(data, 0, 1)
    np.testing.assert_allclose(result, class_scatter, atol=1e-12)
    # equivalently, half the pooled centered scatter of the union
    union = data.features - data.features.mean(axis=0)
    np.testing.assert_allclose(result, 0.5 * union.T @ union, atol=1e-12)


def test_pairwise_scatter_symmetry_and_same_class():
    rng = np.random.default_rng(13)
    data = random_labelled(rng, n=25, dim=3, k=3)
    np.testing.assert_array_equal(
        pairwise_scatter(data, 0, 2), pairwise_scatter(data, 2, 0)
    )
    with pytest.raises(SameClass):
        pairwise_scatter(data, 1, 1)


def test_pairwise_scatter_unweighted_midpoint():
    # class sizes 1 and 3; the midpoint ignores the size imbalance
    data = make_dataset(
        [[0.0, 0.0], [4.0, 0.0], [4.0, 0.0], [4.0, 0.0]], [0, 1, 1, 1]
    )
    mid = np.array([2.0, 0.0])
    dev = 2.0  # every point is 2 away from the midpoint along x
    expected = (1 * np.array([[dev**2, 0.0], [0.0, 0.0]])
                + 3 * np.array([[dev**2, 0.0], [0.0, 0.0]])) / 4
    np.testing.assert_allclose(pairwise_scatter(data, 0, 1), expected, atol=1e-15)
    del mid


# ---------------------------------------------------------------------------
# cost-weighted between scatter
# ---------------------------------------------------------------------------

def test_cost_weighted_zero_costs():
    rng = np.random.default_rng(17)
    data = random_labelled(rng)
    zero = CostMatrix(np.zeros((3, 3)))
    np.testing.assert_array_equal(
        cost_weighted_between_scatter(data, zero), np.zeros((3, 3))
    )


def test_cost_weighted_two_class_symmetrization():
    rng = np.random.default_rng(19)
    data = random_labelled(rng, n=20, dim=2, k=2)
    costs = validate_cost_matrix([[0.0, 3.0], [1.0, 0.0]])
    np.testing.assert_allclose(
        cost_weighted_between_scatter(data, costs),
        4.0 * pairwise_scatter(data, 0, 1),
        rtol=1e-12,
    )


def test_cost_weighted_matches_naive_double_loop():
    rng = np.random.default_rng(21)
    data = random_labelled(rng, n=40, dim=3, k=3)
    costs = random_cost(rng, 3)
    naive = np.zeros((3, 3))
    for i in range(3):
        for j in range(3):
            if i != j:
                naive += costs.costs[i, j] * pairwise_scatter(data, i, j)
    result = cost_weighted_between_scatter(data, costs)
    np.testing.assert_allclose(result, naive, rtol=1e-12, atol=1e-12)


def test_cost_weighted_shape_mismatch():
    rng = np.random.default_rng(23)
    data = random_labelled(rng, k=3)
    with pytest.raises(CostShapeMismatch):
        cost_weighted_between_scatter(data, random_cost(rng, 4))


def test_cost_weighted_scales_linearly():
    rng = np.random.default_rng(25)
    data = random_labelled(rng, k=4, n=40)
    costs = random_cost(rng, 4)
    base = cost_weighted_between_scatter(data, costs)
    scaled = cost_weighted_between_scatter(data, costs.scaled(3.5))
    np.testing.assert_allclose(scaled, 3.5 * base, rtol=1e-12)


# ---------------------------------------------------------------------------
# separability
# ---------------------------------------------------------------------------

def test_separability_equal_matrices():
    rng = np.random.default_rng(27)
    a = rng.standard_normal((3, 3))
    spd = a @ a.T + np.eye(3)
    for _ in range(5):
        u = rng.standard_normal(3)
        assert separability(u, spd, spd) == pytest.approx(1.0)


def test_separability_diagonal_readoff():
    assert separability([1.0, 0.0], np.diag([4.0, 1.0]), np.eye(2)) == pytest.approx(4.0)


def test_separability_scale_invariance():
    rng = np.random.default_rng(29)
    numer = np.diag([3.0, 1.0])
    denom = np.diag([1.0, 2.0])
    u = rng.standard_normal(2)
    base = separability(u, numer, denom)
    for _ in range(10):
        alpha = rng.uniform(-5.0, 5.0)
        if alpha == 0.0:
            continue
        assert separability(alpha * u, numer, denom) == pytest.approx(base, rel=1e-12)


def test_separability_zero_direction():
    with pytest.raises(ZeroDirection):
        separability([0.0, 0.0], np.eye(2), np.eye(2))


def test_separability_bounded_by_top_generalized_eigenvalue():
    rng = np.random.default_rng(31)
    for _ in range(20):
        data = random_labelled(rng, n=30, dim=3, k=3)
        sb = between_class_scatter(data)
        se = add_ridge(total_scatter(data))
        top = eig_generalized(sb, se).eigenvalues[0]
        for _ in range(20):
            u = rng.standard_normal(3)
            assert separability(u, sb, se) <= top + 1e-8 * max(1.0, top)


# ---------------------------------------------------------------------------
# shared invariants and ridge helper
# ---------------------------------------------------------------------------

def test_scatters_symmetric_and_psd():
    rng = np.random.default_rng(33)
    for _ in range(10):
        data = random_labelled(rng, n=35, dim=4, k=3)
        costs = random_cost(rng, 3)
        mats = [
            total_scatter(data),
            within_class_scatter(data),
            between_class_scatter(data),
            pairwise_scatter(data, 0, 1),
            cost_weighted_between_scatter(data, costs),
        ]
        for m in mats:
            assert np.max(np.abs(m - m.T)) <= 1e-10 * max(1.0, np.max(np.abs(m)))
            floor = -1e-10 * np.trace(m)
            assert np.min(np.linalg.eigvalsh(0.5 * (m + m.T))) >= floor


def test_scatters_invariant_to_row_permutation():
    rng = np.random.default_rng(35)
    data = random_labelled(rng, n=30, dim=3, k=3)
    perm = rng.permutation(data.n_points)
    shuffled = make_dataset(
        data.features[perm], data.labels[perm], data.class_count
    )
    costs = random_cost(rng, 3)
    pairs = [
        (total_scatter(data), total_scatter(shuffled)),
        (within_class_scatter(data), within_class_scatter(shuffled)),
        (between_class_scatter(data), between_class_scatter(shuffled)),
        (
            cost_weighted_between_scatter(data, costs),
            cost_weighted_between_scatter(shuffled, costs),
        ),
    ]
    for a, b in pairs:
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


def test_add_ridge_makes_singular_scatter_factorable():
    singular = np.diag([2.0, 0.0])
    with pytest.raises(NotPositiveDefinite):
        cholesky(singular)
    cholesky(add_ridge(singular))  # must succeed


def test_add_ridge_zero_matrix_uses_unit_scale():
    ridged = add_ridge(np.zeros((3, 3)))
    np.testing.assert_allclose(ridged, 1e-8 * np.eye(3), rtol=1e-15)
    cholesky(ridged)


def test_eig_of_scatter_trace_consistency():
    rng = np.random.default_rng(37)
    data = random_labelled(rng, n=25, dim=3, k=3)
    s = total_scatter(data)
    res = eig_symmetric(s)
    assert np.sum(res.eigenvalues) == pytest.approx(np.trace(s), rel=1e-10)
