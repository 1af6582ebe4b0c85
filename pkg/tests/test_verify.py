import json

import numpy as np
import pytest

from stablecomp import (BlockSplit, DiscreteLqVector, ExperimentConfig,
                        LevyMeasure, Seed, SpectralRep, check_exp_ineq,
                        check_parallelogram_q, check_power_ineq,
                        lp_norm_power, max_abs_power, pd_certificate,
                        random_block_symmetric_measure, random_rep,
                        run_experiment, verify_cor3, verify_prop1, verify_thm1)
from stablecomp.verify import (block_symmetry_witness, lemma1_margin_batch,
                               parallelogram_scale, power_margin_scale)


def vec(values, q):
    return DiscreteLqVector(values=np.asarray(values, dtype=float), q=q)


class TestElementaryMargins:
    def test_zero_y_is_exact_zero(self):
        x = vec([1.3, -0.4, 2.0], 1.5)
        y = vec([0.0, 0.0, 0.0], 1.5)
        assert check_parallelogram_q(x, y) == 0.0
        assert check_exp_ineq(x, y) == 0.0

    def test_q2_parallelogram_identity(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            x = vec(rng.standard_normal(6), 2.0)
            y = vec(rng.standard_normal(6), 2.0)
            m = check_parallelogram_q(x, y)
            assert abs(m) <= 1e-12 * parallelogram_scale(x, y)

    def test_l1_hand_values(self):
        assert check_parallelogram_q(vec([1, 0], 1.0), vec([0, 1], 1.0)) == 0.0
        assert check_parallelogram_q(vec([1, 1], 1.0), vec([1, -1], 1.0)) == 4.0

    def test_exp_equal_vectors(self):
        x = vec([0.5, 0.5], 1.0)  # ||x||_1 = 1
        m = check_exp_ineq(x, x)
        assert m == pytest.approx(1.0 - np.exp(-2.0), rel=1e-12)

    def test_power_reversed_equality_case(self):
        x = vec([1.0, 0.0], 2.0)
        y = vec([0.0, 1.0], 2.0)
        m = check_power_ineq(x, y, 4.0)
        assert abs(m) <= 1e-12 * power_margin_scale(x, y, 4.0)

    def test_power_regime_validation(self):
        x = vec([1.0, 0.0], 1.5)
        with pytest.raises(ValueError):
            check_power_ineq(x, x, 2.0)  # p > q with q < 2
        with pytest.raises(ValueError):
            check_power_ineq(vec([1.0], 2.0), vec([1.0], 2.0), -1.0)

    def test_mismatch(self):
        with pytest.raises(ValueError):
            check_exp_ineq(vec([1.0], 1.0), vec([1.0], 2.0))
        with pytest.raises(ValueError):
            check_exp_ineq(vec([1.0], 1.0), vec([1.0, 2.0], 1.0))

    def test_random_sweep(self):
        rng = np.random.default_rng(1)
        for q in (0.5, 1.0, 1.7, 2.0):
            X = rng.standard_cauchy((20_000, 8))
            Y = rng.standard_cauchy((20_000, 8))
            out = lemma1_margin_batch(X, Y, q, (q / 4, q / 2, q),
                                      (2.5, 4.0) if q == 2.0 else ())
            assert out["exp"].min() >= -1e-12
            assert (out["parallelogram"]
                    >= -1e-10 * out["parallelogram_scale"]).all()
            for p, m in out["power"].items():
                assert (m >= -1e-10 * out["power_scale"][p]).all()
            for p, m in out["reversed"].items():
                assert (m >= -1e-10 * out["reversed_scale"][p]).all()


class TestProp1:
    def test_axis_measure_zero_margin(self):
        rep = SpectralRep.from_atoms(
            1.3, [(1.0, (1.0, 0.5)), (0.7, (-0.3, 1.0))])
        g = LevyMeasure(p=0.9, weights=[1.0, 2.0], xis=np.eye(2))
        rec = verify_prop1(rep, BlockSplit(1), g, 0.9)
        assert rec.margin == 0.0 and rec.extra["margin_pair"] == 0.0

    def test_hand_example(self):
        rep = SpectralRep.from_atoms(2.0, [(1.0, (1.0, 1.0))])
        g = LevyMeasure(p=1.0, weights=[1.0, 1.0],
                        xis=np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0))
        rec = verify_prop1(rep, BlockSplit(1), g, 1.0)
        assert rec.lhs == pytest.approx(1.5957691216057308, rel=1e-12)
        assert rec.rhs == pytest.approx(2.2567583341910251, rel=1e-12)
        assert rec.passed and rec.margin > 0

    def test_reversed_regime(self):
        rep = SpectralRep.from_atoms(2.0, [(1.0, (1.0, 1.0))])
        g = LevyMeasure(p=4.0, weights=[1.0, 1.0],
                        xis=np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0))
        rec = verify_prop1(rep, BlockSplit(1), g, 4.0)
        assert rec.config["reversed"] and rec.passed
        assert rec.lhs >= rec.rhs  # direction flips

    def test_asymmetric_measure_rejected(self):
        rep = SpectralRep.from_atoms(2.0, [(1.0, (1.0, 1.0))])
        g = LevyMeasure(p=1.0, weights=[1.0],
                        xis=np.array([[1.0, 1.0]]) / np.sqrt(2.0))
        with pytest.raises(ValueError, match="sign flip"):
            verify_prop1(rep, BlockSplit(1), g, 1.0)

    def test_witness_accepts_opposite_signs(self):
        g = LevyMeasure(p=1.0, weights=[1.0, 1.0],
                        xis=np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert block_symmetry_witness(g, 1) is None

    def test_random_sweep(self):
        rng = np.random.default_rng(2)
        for _ in range(40):
            n = int(rng.integers(2, 5))
            q = float(rng.choice([0.5, 1.0, 1.5, 2.0]))
            k = int(rng.integers(1, n))
            p = float(rng.uniform(0.15, 1.0) * q)
            rep = random_rep(rng, n, q)
            g = random_block_symmetric_measure(rng, n, k, p)
            rec = verify_prop1(rep, BlockSplit(k), g, p)
            assert rec.passed, rec.to_json_dict()


class TestThm1Cor3:
    def test_block_diagonal_equality(self):
        rep = SpectralRep.from_atoms(
            1.5, [(1.0, (1.0, 0.0, 0.0)), (0.5, (0.0, 1.0, 0.3)),
                  (1.2, (0.0, 0.5, -0.8))])
        f = lp_norm_power(3, 1.0, -1.2, block_split=1)
        rec = verify_thm1(rep, BlockSplit(1), f, 150_000, Seed(3))
        assert rec.passed
        assert abs(rec.margin) <= rec.tolerance

    def test_rank_one_max_abs_margin(self):
        rep = SpectralRep.from_atoms(2.0, [(1.0, (1.0, 1.0))])
        rec = verify_cor3(rep, BlockSplit(1), -1.5, 150_000, Seed(4))
        assert rec.margin > 0 and rec.passed
        assert rec.extra["estimator"] == "median-of-means"
        assert rec.extra["certificate"] == "prop3-window"

    def test_window_boundary_rejected(self):
        rep = SpectralRep.from_atoms(2.0, [(1.0, (1.0, 1.0))])
        for p in (-1.0, -2.0):
            with pytest.raises(ValueError):
                verify_cor3(rep, BlockSplit(1), p, 1000, Seed(0))

    def test_asymmetric_descriptor_rejected(self):
        from stablecomp import levy_norm_power
        rep = SpectralRep.from_atoms(2.0, [(1.0, (1.0, 0.2)), (1.0, (0.0, 1.0))])
        g = LevyMeasure(p=1.0, weights=[1.0, 0.3, 0.3],
                        xis=np.array([[1.0 / np.sqrt(2), 1.0 / np.sqrt(2)],
                                      [1.0, 0.0], [0.0, 1.0]]))
        f = levy_norm_power(g, -1.0)
        with pytest.raises(ValueError, match="witness"):
            verify_thm1(rep, BlockSplit(1), f, 10_000, Seed(5))

    def test_uncertified_flagged_not_rejected(self):
        # an r > 2 subspace norm with p outside the window has no certificate
        rep = SpectralRep.from_atoms(2.0, [(1.0, (1.0, 0.2)), (1.0, (0.0, 1.0))])
        f = lp_norm_power(2, 3.0, -0.5)
        rec = verify_thm1(rep, BlockSplit(1), f, 50_000, Seed(6))
        assert "uncertified" in rec.extra["flags"]

    def test_certificates(self):
        assert pd_certificate(max_abs_power(2, -1.5)) == "prop3-window"
        assert pd_certificate(lp_norm_power(3, 1.0, -1.5)) == "subspace-Lr"
        assert pd_certificate(lp_norm_power(2, 3.0, -0.5)) is None
        assert pd_certificate(max_abs_power(3, -1.5)) is None

    def test_oracle_attachment(self):
        rep = SpectralRep.from_atoms(2.0, [(1.0, (1.0, 0.6)), (0.7, (0.3, 1.0))])
        rec = verify_thm1(rep, BlockSplit(1), lp_norm_power(2, 1.0, -0.5),
                          100_000, Seed(7), oracle=True)
        assert rec.extra["oracle_margin"] >= -rec.extra["oracle_bound"]
        assert abs(rec.extra["oracle_margin"] - rec.margin) < 0.05


class TestRunExperiment:
    def test_lemma1_mode(self):
        config = ExperimentConfig(mode="lemma1", trials=2000, seed=5,
                                  q_values=(0.5, 1.0, 1.5, 2.0))
        report = run_experiment(config)
        assert report.failures == 0
        assert len(report.records) == 8000

    def test_cor3_config_rejected_outside_window(self):
        config = ExperimentConfig(mode="cor3", trials=1, p_value=-0.5,
                                  n_values=(2,))
        with pytest.raises(ValueError):
            run_experiment(config)

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            run_experiment(ExperimentConfig(mode="mystery"))

    def test_jsonl_determinism(self, tmp_path):
        paths = []
        for tag in ("a", "b"):
            out = tmp_path / f"{tag}.jsonl"
            config = ExperimentConfig(mode="prop1", trials=20, seed=9,
                                      out_jsonl=str(out))
            run_experiment(config)
            paths.append(out)
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_csv_summary(self, tmp_path):
        out = tmp_path / "summary.csv"
        config = ExperimentConfig(mode="prop1", trials=5, seed=11,
                                  out_csv=str(out))
        report = run_experiment(config)
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "index,mode,margin,tolerance,passed"
        assert len(lines) == 6
        assert report.passed

    def test_config_json_round_trip(self):
        config = ExperimentConfig(mode="thm1", trials=7, N=1000, seed=3,
                                  n_values=(2,), q_values=(1.0, 2.0))
        back = ExperimentConfig.from_json_dict(
            json.loads(json.dumps(config.to_json_dict())))
        assert back == config
