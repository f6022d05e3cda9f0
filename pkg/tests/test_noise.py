import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisybool.functions import BooleanFunction, LTFSpec, make_named
from noisybool.fourier import fwht
from noisybool.noise import (
    NoiseModel,
    analyze,
    binary_entropy,
    brute_force_optimality_check,
    conditional_entropy,
    feder_bounds,
    is_self_predicting,
    ltf_counterexample_check,
    noise_operator,
    noise_operator_direct,
    noisy_error,
    optimal_predictor,
    sensitivity,
)
from noisybool.rng import substream

REFERENCE_LTF = LTFSpec(6, 0.3, (0.1, 0.1, 0.2, 0.3, 0.4, 0.9))


def random_function(n, seed):
    rng = substream(seed, 0)
    return BooleanFunction(n, rng.integers(0, 2, size=1 << n, dtype=np.uint8))


class TestNoiseModel:
    def test_iid_reduces_to_independent(self):
        iid = NoiseModel.iid(0.2)
        indep = NoiseModel.independent([0.2] * 5)
        assert np.allclose(iid.fourier_filter(5), indep.fourier_filter(5))

    def test_independent_reduces_to_general(self):
        rates = (0.1, 0.3, 0.05)
        masks = np.arange(8)
        p_e = np.ones(8)
        for i, r in enumerate(rates):
            bit = (masks >> i) & 1
            p_e *= np.where(bit == 1, r, 1 - r)
        indep = NoiseModel.independent(rates)
        general = NoiseModel.general(p_e)
        assert np.allclose(indep.fourier_filter(3), general.fourier_filter(3), atol=1e-12)

    def test_invalid_rates(self):
        with pytest.raises(ValueError):
            NoiseModel.iid(0.6)
        with pytest.raises(ValueError):
            NoiseModel.iid(-0.1)
        with pytest.raises(ValueError):
            NoiseModel.general(np.array([0.5, 0.6]))


class TestNoiseOperator:
    def test_p_zero_is_identity(self):
        f = random_function(5, 1)
        assert np.allclose(noise_operator(f, NoiseModel.iid(0.0)), f.pm(), atol=1e-12)

    def test_p_half_is_constant_mean(self):
        f = random_function(5, 2)
        out = noise_operator(f, NoiseModel.iid(0.5))
        assert np.allclose(out, f.pm().mean(), atol=1e-12)

    def test_dictator_scales_by_rho(self):
        f = make_named("dictator", 4)
        out = noise_operator(f, NoiseModel.iid(0.2))
        expected = 0.6 * f.pm()
        assert np.allclose(out, expected, atol=1e-12)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_fourier_path_matches_direct_summation(self, n):
        f = random_function(n, 100 + n)
        noise = NoiseModel.iid(0.13)
        assert np.allclose(noise_operator(f, noise), noise_operator_direct(f, noise), atol=1e-10)

    def test_general_noise_matches_direct(self):
        rng = substream(5, 0)
        p_e = rng.random(64)
        p_e /= p_e.sum()
        noise = NoiseModel.general(p_e)
        f = random_function(6, 6)
        assert np.allclose(noise_operator(f, noise), noise_operator_direct(f, noise), atol=1e-10)

    def test_general_noise_arity_cap(self):
        p_e = np.zeros(1 << 15)
        p_e[0] = 1.0
        with pytest.raises(ValueError):
            noise_operator(random_function(15, 0), NoiseModel.general(p_e))

    def test_posterior_identity_exhaustive(self):
        # p_{X|Z}(x|z) = p_E(x xor z) for iid noise, checked by explicit Bayes
        n, p = 5, 0.22
        masks = np.arange(1 << n)
        wts = np.bitwise_count(masks)
        p_e = p**wts * (1 - p) ** (n - wts)
        # joint(x, z) = 2^-n p_E(x xor z); posterior = joint / p_Z(z), p_Z uniform
        for z in range(1 << n):
            posterior = p_e[masks ^ z]
            assert posterior.sum() == pytest.approx(1.0, abs=1e-12)
            assert np.allclose(posterior, p_e[masks ^ z])


class TestOptimalPredictor:
    @pytest.mark.parametrize("p", [0.05, 0.2, 0.45])
    def test_parity_junta_self_optimal(self, p):
        from noisybool.functions import JuntaSpec, expand_junta

        f = expand_junta(JuntaSpec(7, (1, 3, 4), make_named("parity", 3)))
        assert optimal_predictor(f, NoiseModel.iid(p)) == f

    @pytest.mark.parametrize("p", [0.05, 0.2, 0.45])
    def test_odd_majority_self_optimal(self, p):
        f = make_named("majority", 5)
        assert optimal_predictor(f, NoiseModel.iid(p)) == f

    def test_or_at_high_noise_collapses_to_constant_one(self):
        f = make_named("majority", 2)  # OR
        star = optimal_predictor(f, NoiseModel.iid(0.45))
        assert star.table.tolist() == [1, 1, 1, 1]


class TestNoisyError:
    def test_parity_closed_form(self):
        assert noisy_error(make_named("parity", 4), make_named("parity", 4), NoiseModel.iid(0.1)) == pytest.approx(
            (1 - 0.8**4) / 2, abs=1e-12
        )

    def test_no_noise_self_error_zero(self):
        f = random_function(6, 3)
        assert noisy_error(f, f, NoiseModel.iid(0.0)) == pytest.approx(0.0, abs=1e-12)

    def test_no_noise_negation_error_one(self):
        f = random_function(6, 4)
        assert noisy_error(f, f.negate(), NoiseModel.iid(0.0)) == pytest.approx(1.0, abs=1e-12)

    def test_arity_mismatch(self):
        with pytest.raises(ValueError):
            noisy_error(make_named("parity", 3), make_named("parity", 4), NoiseModel.iid(0.1))

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**31), p=st.floats(0.0, 0.5))
    def test_against_monte_carlo_free_identity(self, seed, p):
        # independent oracle: explicit double sum over (x, e)
        n = 4
        f = random_function(n, seed)
        g = random_function(n, seed + 1)
        masks = np.arange(1 << n)
        wts = np.bitwise_count(masks)
        p_e = p**wts * (1 - p) ** (n - wts)
        err = 0.0
        for x in range(1 << n):
            for e in range(1 << n):
                if g.evaluate(x ^ e) != f.evaluate(x):
                    err += p_e[e]
        err /= 1 << n
        assert noisy_error(f, g, NoiseModel.iid(p)) == pytest.approx(err, abs=1e-10)


class TestSensitivity:
    def test_parity(self):
        for n in (2, 5, 9):
            res = sensitivity(make_named("parity", n))
            assert res.total == pytest.approx(n)
            assert np.allclose(res.per_bit, 1.0)
            assert np.all(res.pointwise == n)

    def test_constant(self):
        res = sensitivity(make_named("constant", 6))
        assert res.total == 0.0
        assert np.all(res.pointwise == 0)

    def test_maj3(self):
        assert sensitivity(make_named("majority", 3)).total == pytest.approx(1.5)

    def test_pointwise_mean_is_total(self):
        f = random_function(7, 9)
        res = sensitivity(f)
        assert res.pointwise.mean() == pytest.approx(res.total)


class TestConditionalEntropy:
    def test_no_noise_zero_bits(self):
        assert conditional_entropy(random_function(5, 11), NoiseModel.iid(0.0)) == pytest.approx(0.0, abs=1e-12)

    def test_balanced_function_full_noise_one_bit(self):
        assert conditional_entropy(make_named("parity", 5), NoiseModel.iid(0.5)) == pytest.approx(1.0, abs=1e-12)

    def test_parity2_is_bsc(self):
        # the induced Z -> Y channel is binary symmetric with crossover
        # 2 p (1-p) = 0.18 at p = 0.1
        h = conditional_entropy(make_named("parity", 2), NoiseModel.iid(0.1))
        assert h == pytest.approx(float(binary_entropy(0.18)), abs=1e-12)


class TestFederBounds:
    def test_zero_entropy(self):
        assert feder_bounds(0.0) == (pytest.approx(0.0, abs=1e-9), pytest.approx(0.0, abs=1e-12))

    def test_max_entropy_binary(self):
        lower, upper = feder_bounds(1.0)
        assert lower == pytest.approx(0.5, abs=1e-9)
        assert upper == pytest.approx(0.5, abs=1e-12)

    def test_fano_tight_for_bsc(self):
        h = float(binary_entropy(0.18))
        lower, upper = feder_bounds(h)
        assert lower == pytest.approx(0.18, abs=1e-9)
        assert upper == pytest.approx(h / 2, abs=1e-12)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            feder_bounds(1.5)
        with pytest.raises(ValueError):
            feder_bounds(-0.1)

    def test_larger_alphabet_monotone(self):
        lower, upper = feder_bounds(1.0, n_alphabet=4)
        assert 0.0 < lower <= upper < 0.75

    def test_binary_piecewise_upper_is_half_entropy(self):
        for h in (0.1, 0.4, 0.9):
            _, upper = feder_bounds(h)
            assert upper == pytest.approx(h / 2, abs=1e-12)


class TestSelfPredicting:
    @pytest.mark.parametrize("p", [0.05, 0.25, 0.45])
    def test_parity(self, p):
        assert is_self_predicting(make_named("parity", 6), NoiseModel.iid(p))

    @pytest.mark.parametrize("p", [0.05, 0.25, 0.45])
    def test_odd_majority(self, p):
        assert is_self_predicting(make_named("majority", 7), NoiseModel.iid(p))

    def test_or_at_high_noise_is_not(self):
        assert not is_self_predicting(make_named("majority", 2), NoiseModel.iid(0.45))

    def test_implies_error_equality(self):
        for seed in range(50):
            f = random_function(5, seed)
            noise = NoiseModel.iid(0.3)
            if is_self_predicting(f, noise):
                star = optimal_predictor(f, noise)
                assert noisy_error(f, f, noise) == pytest.approx(noisy_error(f, star, noise), abs=1e-12)


class TestLTFCounterexample:
    def test_reference_vector_violates(self):
        sens_f, sens_star, violates = ltf_counterexample_check(REFERENCE_LTF, 0.2)
        assert violates
        assert sens_star > sens_f

    def test_dictator_does_not_violate(self):
        spec = LTFSpec(3, 0.0, (1.0, 0.0, 0.0))
        sens_f, sens_star, violates = ltf_counterexample_check(spec, 0.4)
        assert not violates
        assert sens_f == pytest.approx(sens_star)

    def test_maj3_does_not_violate(self):
        spec = LTFSpec(3, 0.0, (1.0, 1.0, 1.0))
        _, _, violates = ltf_counterexample_check(spec, 0.6)
        assert not violates


class TestBruteForceOptimality:
    def test_n1_dictator(self):
        assert brute_force_optimality_check(make_named("dictator", 1), NoiseModel.iid(0.3))

    def test_n2_xor(self):
        assert brute_force_optimality_check(make_named("parity", 2), NoiseModel.iid(0.2))

    def test_arity_cap(self):
        with pytest.raises(ValueError):
            brute_force_optimality_check(make_named("parity", 4), NoiseModel.iid(0.1))


class TestInvariants:
    def test_triangle_inequality(self):
        # err_f(g) <= Pr(g != f) + p sens[g]
        p = 0.2
        noise = NoiseModel.iid(p)
        for seed in range(100):
            f = random_function(6, seed)
            g = random_function(6, seed + 1000)
            eps = float(np.mean(f.table != g.table))
            assert noisy_error(f, g, noise) <= eps + p * sensitivity(g).total + 1e-12

    def test_noise_stability_bound(self):
        # Pr(g(X) != g(Z)) = (1 - sum rho^|S| g_hat^2)/2 <= p sens[g]
        p = 0.15
        noise = NoiseModel.iid(p)
        for seed in range(100):
            g = random_function(6, seed)
            coeffs = fwht(g).coeffs
            disagreement = (1.0 - float(np.dot(coeffs * noise.fourier_filter(6), coeffs))) / 2
            assert disagreement <= p * sensitivity(g).total + 1e-12

    def test_parity_match_probability_closed_form(self):
        for n in (1, 4, 9, 16):
            f = make_named("parity", n)
            for p in [0.05 * k for k in range(11)]:
                err = noisy_error(f, f, NoiseModel.iid(p))
                assert 1 - err == pytest.approx(0.5 * (1 + (1 - 2 * p) ** n), abs=1e-12)


class TestAnalyze:
    def test_report_invariants(self):
        f = random_function(6, 42)
        report = analyze(f, NoiseModel.iid(0.25))
        assert report.err_f_fnstar <= report.err_f_f + 1e-12
        assert report.feder_lower <= report.err_f_fnstar + 1e-9
        assert report.err_f_fnstar <= report.feder_upper + 1e-9
        assert len(report.influences_f) == 6
        assert sum(report.influences_f) == pytest.approx(report.sens_f)
        d = report.to_dict()
        assert set(d) == {
            "err_f_f", "err_f_fnstar", "sens_f", "sens_fnstar", "influences_f",
            "cond_entropy_bits", "feder_lower", "feder_upper", "self_predicting",
        }
