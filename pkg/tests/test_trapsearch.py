import numpy as np
import pytest

from noisybool.functions import WeightFunction, expand_weight_function, make_named
from noisybool.noise import NoiseModel, noisy_error, optimal_predictor, sensitivity
from noisybool.trapsearch import (
    DEFAULT_MAX_ERR_GAP,
    DEFAULT_MAX_SENS_RATIO,
    TRAP_N_GRID,
    TRAP_P_GRID,
    analyze_profiles,
    finite_sample_vetting,
    profile_sensitivity,
    trap_search,
    weight_transition_kernel,
)

# exact quadruple of the reference trap instance (n=8, p=0.2, s=000110000)
GOLDEN_TRAP = {
    "err_f": 0.37995888,
    "err_fnstar": 0.37608844,
    "sens_f": 3.5,
    "sens_fnstar": 2.625,
}


def all_profiles(n):
    ids = np.arange(1 << (n + 1), dtype=np.uint32)
    return ((ids[:, None] >> np.arange(n + 1, dtype=np.uint32)) & 1).astype(np.uint8)


class TestKernel:
    def test_rows_are_distributions(self):
        kernel = weight_transition_kernel(9, 0.23)
        assert np.allclose(kernel.sum(axis=1), 1.0, atol=1e-12)
        assert kernel.min() >= 0.0

    def test_no_noise_is_identity(self):
        assert np.allclose(weight_transition_kernel(6, 0.0), np.eye(7))


class TestFastPathAgreesWithFullTables:
    @pytest.mark.parametrize("n", range(2, 11))
    def test_exhaustive(self, n):
        p = 0.24
        profiles = all_profiles(n)
        cands = analyze_profiles(n, p, profiles)
        noise = NoiseModel.iid(p)
        # full-table reference for a deterministic subsample of profiles
        for j in range(0, len(cands), max(1, len(cands) // 32)):
            c = cands[j]
            f = expand_weight_function(WeightFunction(n, c.s))
            star = optimal_predictor(f, noise)
            assert c.err_f == pytest.approx(noisy_error(f, f, noise), abs=1e-12)
            assert c.err_fnstar == pytest.approx(noisy_error(f, star, noise), abs=1e-12)
            assert c.sens_f == pytest.approx(sensitivity(f).total, abs=1e-12)
            assert c.sens_fnstar == pytest.approx(sensitivity(star).total, abs=1e-12)

    def test_symmetric_closure(self):
        # T of a symmetric function is symmetric, so fnstar is weight-based:
        # the fast-path predictor profile must expand to the full-table one
        n, p = 8, 0.26
        noise = NoiseModel.iid(p)
        for c in analyze_profiles(n, p, all_profiles(n)[::17]):
            f = expand_weight_function(WeightFunction(n, c.s))
            star_full = optimal_predictor(f, noise)
            wts = np.bitwise_count(np.arange(1 << n))
            profile_of_star = [int(star_full.table[np.argmax(wts == w)]) for w in range(n + 1)]
            star_fast = analyze_profiles(n, p, [[int(ch) for ch in c.s]])[0]
            assert star_fast.sens_fnstar == pytest.approx(sensitivity(star_full).total, abs=1e-12)
            assert all(
                int(star_full.table[x]) == profile_of_star[wts[x]] for x in range(1 << n)
            )


class TestProfileSensitivity:
    def test_parity_profile(self):
        n = 7
        pm = 1.0 - 2.0 * np.array([w % 2 for w in range(n + 1)], dtype=np.float64)
        assert profile_sensitivity(pm, n) == pytest.approx(n)

    def test_constant_profile(self):
        assert profile_sensitivity(np.ones(9), 8) == pytest.approx(0.0)

    def test_odd_majority_profile(self):
        n = 5
        pm = 1.0 - 2.0 * np.array([1 if 2 * w >= n else 0 for w in range(n + 1)], dtype=np.float64)
        assert profile_sensitivity(pm, n) == pytest.approx(sensitivity(make_named("majority", n)).total)


class TestTrapSearch:
    def test_reference_instance_passes_defaults(self):
        hits = trap_search(TRAP_N_GRID, TRAP_P_GRID)
        match = [h for h in hits if h.n == 8 and h.p == 0.2 and h.s == "000110000"]
        assert len(match) == 1
        c = match[0]
        assert c.err_gap <= DEFAULT_MAX_ERR_GAP
        assert c.sens_ratio <= DEFAULT_MAX_SENS_RATIO
        for key, value in GOLDEN_TRAP.items():
            assert getattr(c, key) == pytest.approx(value, abs=1e-9)

    def test_zero_gap_includes_self_predicting_patterns(self):
        hits = trap_search([5], [0.25], max_err_gap=0.0, max_sens_ratio=10.0)
        strings = {h.s for h in hits}
        assert "010101" in strings  # parity pattern
        assert "000111" in strings  # odd-majority pattern

    def test_self_predicting_weight_functions_have_zero_gap(self):
        from noisybool.noise import is_self_predicting

        n, p = 6, 0.3
        noise = NoiseModel.iid(p)
        for c in analyze_profiles(n, p, all_profiles(n)):
            f = expand_weight_function(WeightFunction(n, c.s))
            if is_self_predicting(f, noise):
                assert c.err_gap == pytest.approx(0.0, abs=1e-12)

    def test_sorted_and_deterministic(self):
        a = trap_search([4, 5], [0.2, 0.3])
        b = trap_search([4, 5], [0.2, 0.3])
        assert a == b
        keys = [(c.err_gap, c.sens_ratio) for c in a]
        assert keys == sorted(keys)

    def test_empty_grid(self):
        with pytest.raises(ValueError):
            trap_search([], [0.2])

    def test_arity_cap(self):
        with pytest.raises(ValueError):
            trap_search([20], [0.2])


class TestVetting:
    def test_recorded_seed_accuracies(self):
        (c,) = analyze_profiles(8, 0.2, [[int(ch) for ch in "000110000"]])
        train_acc, val_acc = finite_sample_vetting(c, 10_000, 20_000, 7)
        assert train_acc == pytest.approx(0.6344, abs=1e-12)
        assert val_acc == pytest.approx(0.607, abs=1e-12)
        # within 0.02 of the asymptotic optima
        assert abs(val_acc - (1 - c.err_fnstar)) < 0.02
        assert abs(train_acc - (1 - c.err_f)) < 0.02

    def test_no_noise_lookup_memorizes(self):
        (c,) = analyze_profiles(4, 0.0, [[0, 1, 0, 1, 0]])
        train_acc, _ = finite_sample_vetting(c, 500, 100, 3)
        assert train_acc == 1.0

    def test_size_validation(self):
        (c,) = analyze_profiles(4, 0.2, [[0, 1, 0, 1, 0]])
        with pytest.raises(ValueError):
            finite_sample_vetting(c, 0, 10, 1)
