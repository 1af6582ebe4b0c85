import numpy as np
import pytest

from stablecomp import (HomogeneousFn, LevyMeasure, LrMatrixBase, Seed,
                        check_block_symmetry, check_homogeneity,
                        euclidean_power, evaluate, evaluate_many, fn_from_json,
                        fn_to_json, levy_norm_power, lp_norm_power,
                        max_abs_power, norm_from_levy)


class TestEvaluate:
    def test_max_abs_negative_power(self):
        f = max_abs_power(2, -1.5)
        assert evaluate(f, np.array([2.0, -1.0])) == pytest.approx(
            2.0 ** -1.5, rel=1e-14)

    def test_l1_squared(self):
        f = lp_norm_power(2, 1.0, 2.0)
        assert evaluate(f, np.array([3.0, 4.0])) == pytest.approx(49.0, rel=1e-14)

    def test_homogeneity_ratio(self):
        rng = np.random.default_rng(0)
        for f in (max_abs_power(3, -1.7), lp_norm_power(3, 0.7, 1.3),
                  euclidean_power(3, -0.4, weights=(1.0, 2.0, 0.5))):
            x = rng.standard_normal(3)
            ratio = evaluate(f, 3.0 * x) / evaluate(f, x)
            assert ratio == pytest.approx(3.0 ** f.p, rel=1e-12)

    def test_origin_singularity(self):
        with pytest.raises(ValueError):
            evaluate(max_abs_power(2, -1.0), np.zeros(2))
        assert evaluate(max_abs_power(2, 0.5), np.zeros(2)) == 0.0

    def test_evaluate_many_matches_scalar(self):
        rng = np.random.default_rng(1)
        f = lp_norm_power(2, 1.5, -0.8)
        pts = rng.standard_normal((10, 2))
        many = evaluate_many(f, pts)
        for i in range(10):
            assert many[i] == pytest.approx(evaluate(f, pts[i]), rel=1e-14)


class TestBlockSymmetry:
    def test_max_abs_passes(self):
        res = check_block_symmetry(max_abs_power(3, -2.5), 2, trials=512, seed=Seed(2))
        assert res.passed

    def test_euclidean_passes(self):
        res = check_block_symmetry(euclidean_power(2, -0.5), 1, trials=512, seed=Seed(3))
        assert res.passed

    def test_oblique_direction_fails_with_witness(self):
        g = LevyMeasure(p=1.0, weights=[1.0, 0.2, 0.2],
                        xis=np.array([[1.0 / np.sqrt(2.0), 1.0 / np.sqrt(2.0)],
                                      [1.0, 0.0], [0.0, 1.0]]))
        f = levy_norm_power(g, -1.0)
        res = check_block_symmetry(f, 1, trials=256, seed=Seed(4))
        assert not res.passed
        u, v = res.witness
        a = evaluate(f, np.array([u, v]))
        b = evaluate(f, np.array([u, -v]))
        assert abs(a - b) > 1e-10 * max(abs(a), abs(b))


class TestHomogeneityCheck:
    def test_measures_declared_exponent(self):
        for f in (lp_norm_power(2, 1.0, -1.2), max_abs_power(3, 0.5)):
            res = check_homogeneity(f, trials=256, seed=Seed(5))
            assert res.passed
            assert abs(res.measured_exponent - f.p) < 1e-9

    def test_corrupted_descriptor_detected(self):
        # descriptor evaluates a squared base but is declared order 1
        f = lp_norm_power(2, 1.0, 2.0)
        res = check_homogeneity(f, trials=256, seed=Seed(6), declared_p=1.0)
        assert not res.passed
        assert res.measured_exponent == pytest.approx(2.0, abs=1e-9)


class TestConstructionAndJson:
    def test_rank_deficient_matrix_rejected(self):
        with pytest.raises(ValueError):
            LrMatrixBase(matrix=np.array([[1.0, 0.0], [2.0, 0.0]]), r=1.0)

    def test_zero_exponent_rejected(self):
        with pytest.raises(ValueError):
            max_abs_power(2, 0.0)

    def test_bad_euclidean_weights(self):
        with pytest.raises(ValueError):
            euclidean_power(2, 1.0, weights=(1.0, 0.0))

    def test_invalid_block_split(self):
        with pytest.raises(ValueError):
            max_abs_power(2, -1.0, block_split=2)

    @pytest.mark.parametrize("maker", [
        lambda: max_abs_power(3, -2.1, block_split=1),
        lambda: lp_norm_power(2, 0.7, 1.1),
        lambda: euclidean_power(2, -0.3, weights=(0.5, 3.0)),
        lambda: levy_norm_power(LevyMeasure(
            p=1.5, weights=[1.0, 0.7],
            xis=np.array([[0.6, 0.8], [1.0, 0.0]])), -0.9),
        lambda: HomogeneousFn(
            base=LrMatrixBase(matrix=np.array([[1.0, 0.25], [-0.5, 2.0]]), r=1.3),
            p=-1.1),
    ])
    def test_json_round_trip_exact(self, maker):
        f = maker()
        back = fn_from_json(fn_to_json(f))
        assert fn_to_json(back) == fn_to_json(f)
        rng = np.random.default_rng(7)
        pts = rng.standard_normal((20, f.n))
        assert np.array_equal(evaluate_many(back, pts), evaluate_many(f, pts))

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            fn_from_json('{"kind": "mystery", "p": 1.0}')

    def test_norm_from_levy_is_one_homogeneous(self):
        g = LevyMeasure(p=1.2, weights=[1.0, 1.0, 0.5],
                        xis=np.array([[1.0, 0.0], [0.0, 1.0],
                                      [0.6, 0.8]]))
        f = norm_from_levy(g)
        assert f.p == 1.0
        res = check_homogeneity(f, trials=128, seed=Seed(8))
        assert res.passed
