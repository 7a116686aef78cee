import numpy as np
import pytest

from homoclust.dimred import mds_project, raw_stress
from homoclust.errors import TooFewPoints


def pairwise(Y):
    Y = np.asarray(Y)
    return np.sqrt(np.sum((Y[:, None] - Y[None, :]) ** 2, axis=2))


class TestMdsExamples:
    def test_planar_input_reaches_zero_stress(self):
        rng = np.random.default_rng(0)
        X = rng.uniform(-2, 2, size=(10, 2))
        proj = mds_project(X, tol=1e-12, max_iter=2000, seed=0)
        assert proj.diagnostics["final_stress"] < 1e-6

    def test_unit_square_recovery(self):
        square = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
        proj = mds_project(square, tol=1e-14, max_iter=5000, seed=1)
        got = np.sort(pairwise(proj.coords)[np.triu_indices(4, k=1)])
        want = np.sort(pairwise(square)[np.triu_indices(4, k=1)])
        np.testing.assert_allclose(got, want, atol=1e-3)

    def test_two_points_distance_five(self):
        proj = mds_project([[0.0, 0.0, 0.0], [3.0, 4.0, 0.0]], tol=1e-14, max_iter=1000, seed=2)
        d = np.linalg.norm(np.array(proj.coords[0]) - np.array(proj.coords[1]))
        assert d == pytest.approx(5.0, abs=1e-6)


class TestMdsProperties:
    @pytest.mark.parametrize("seed", range(6))
    def test_stress_nonincreasing_every_iteration(self, seed):
        rng = np.random.default_rng(seed)
        X = rng.normal(size=(int(rng.integers(5, 20)), int(rng.integers(2, 8))))
        proj = mds_project(X, seed=seed)
        history = proj.diagnostics["stress_history"]
        assert len(history) == proj.diagnostics["iterations"] + 1
        for before, after in zip(history, history[1:]):
            assert after <= before + 1e-12

    def test_final_stress_matches_coords(self):
        rng = np.random.default_rng(33)
        X = rng.normal(size=(8, 5))
        proj = mds_project(X, seed=3)
        delta = pairwise(X)
        assert proj.diagnostics["final_stress"] == pytest.approx(
            raw_stress(np.array(proj.coords), delta)
        )

    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(17)
        X = rng.normal(size=(9, 4))
        assert mds_project(X, seed=5) == mds_project(X, seed=5)
        assert mds_project(X, seed=5) != mds_project(X, seed=6)

    def test_too_few_points(self):
        with pytest.raises(TooFewPoints):
            mds_project([[1.0, 2.0]])
