"""Core signal layer: transforms, certified sup brackets, norms, CSV I/O."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from densemodel.errors import ValidationError
from densemodel.signals import (
    CertifiedSup,
    DiscreteSignal,
    FrequencyGrid,
    add,
    convolve,
    default_grid,
    fourier_eval,
    fourier_sup_diff,
    grid_fourier,
    lp_norm,
    multiply,
    read_csv,
    subtract,
    write_csv,
)


def naive_fourier(f: DiscreteSignal, alpha: float) -> complex:
    """Independent oracle: direct summation of f(n) e(alpha n)."""
    return complex(sum(v * np.exp(2j * np.pi * alpha * n)
                       for n, v in zip(f.indices, f.values)))


small_signals = st.builds(
    DiscreteSignal,
    st.integers(min_value=-20, max_value=20),
    st.lists(st.floats(min_value=-5, max_value=5, allow_nan=False),
             min_size=1, max_size=12).map(np.array),
)


class TestDiscreteSignal:
    def test_rejects_empty_values(self) -> None:
        with pytest.raises(ValidationError):
            DiscreteSignal(0, np.array([]))

    def test_rejects_non_finite(self) -> None:
        with pytest.raises(ValidationError):
            DiscreteSignal(0, np.array([1.0, np.nan]))

    def test_values_read_only(self) -> None:
        f = DiscreteSignal.interval(5)
        with pytest.raises(ValueError):
            f.values[0] = 2.0

    def test_call_outside_support_is_zero(self) -> None:
        f = DiscreteSignal(3, np.array([1.0, 2.0]))
        assert f(2) == 0.0 and f(3) == 1.0 and f(4) == 2.0 and f(5) == 0.0

    def test_trimmed_drops_zero_margins(self) -> None:
        f = DiscreteSignal(0, np.array([0.0, 0.0, 3.0, 0.0]))
        g = f.trimmed()
        assert g.support_lo == 2 and list(g.values) == [3.0]

    def test_interval_is_indicator_of_1_to_N(self) -> None:
        f = DiscreteSignal.interval(4)
        assert f.support_lo == 1 and f.support_hi == 4
        assert np.all(f.values == 1.0)

    @given(small_signals, small_signals)
    def test_add_subtract_roundtrip(self, f, g) -> None:
        h = subtract(add(f, g), g)
        for n in range(min(h.support_lo, f.support_lo) - 1,
                       max(h.support_hi, f.support_hi) + 2):
            assert h(n) == pytest.approx(f(n), abs=1e-12)

    @given(small_signals, small_signals)
    def test_multiply_pointwise(self, f, g) -> None:
        h = multiply(f, g)
        for n in range(h.support_lo - 1, h.support_hi + 2):
            assert h(n) == pytest.approx(f(n) * g(n), abs=1e-12)


class TestFourier:
    @given(small_signals,
           st.floats(min_value=0, max_value=1, exclude_max=True))
    @settings(max_examples=50)
    def test_fourier_eval_matches_naive_sum(self, f, alpha) -> None:
        assert fourier_eval(f, alpha) == pytest.approx(
            naive_fourier(f, alpha), abs=1e-9)

    @given(small_signals)
    @settings(max_examples=30)
    def test_grid_fourier_matches_pointwise_eval(self, f) -> None:
        grid = FrequencyGrid(16)
        vals = grid_fourier(f, grid)
        for j in range(16):
            assert vals[j] == pytest.approx(fourier_eval(f, j / 16), abs=1e-9)

    def test_value_at_zero_is_mass(self) -> None:
        f = DiscreteSignal(1, np.array([1.0, 2.0, 3.0]))
        assert fourier_eval(f, 0.0) == pytest.approx(6.0)

    @given(small_signals)
    @settings(max_examples=30)
    def test_parseval(self, f) -> None:
        grid = FrequencyGrid(256)
        mean_sq = float(np.mean(np.abs(grid_fourier(f, grid)) ** 2))
        assert mean_sq == pytest.approx(lp_norm(f, 2) ** 2, rel=1e-9, abs=1e-9)

    @given(small_signals, small_signals)
    @settings(max_examples=30)
    def test_convolution_theorem(self, f, g) -> None:
        h = convolve(f, g)
        grid = FrequencyGrid(64)
        lhs = grid_fourier(h, grid)
        rhs = grid_fourier(f, grid) * grid_fourier(g, grid)
        assert np.max(np.abs(lhs - rhs)) <= 1e-8 * max(
            1.0, float(np.max(np.abs(rhs))))

    def test_fft_and_direct_convolution_agree(self) -> None:
        rng = np.random.default_rng(0)
        f = DiscreteSignal(1, rng.random(600))
        g = DiscreteSignal(-3, rng.random(700))
        direct = np.convolve(f.values, g.values)
        h = convolve(f, g)
        assert h.support_lo == f.support_lo + g.support_lo
        assert np.max(np.abs(h.values - direct)) < 1e-9


class TestCertifiedSup:
    def test_bracket_contains_true_sup(self) -> None:
        rng = np.random.default_rng(1)
        f = DiscreteSignal(1, rng.random(40))
        g = DiscreteSignal(1, rng.random(40))
        est = fourier_sup_diff(f, g, FrequencyGrid(512))
        alphas = rng.random(20000)
        dense = max(abs(fourier_eval(f, a) - fourier_eval(g, a))
                    for a in alphas)
        assert est.certified_lower <= est.certified_upper
        assert dense <= est.certified_upper + 1e-9
        assert est.certified_lower <= dense + 1e-9

    def test_identical_signals_give_zero(self) -> None:
        f = DiscreteSignal.interval(10)
        est = fourier_sup_diff(f, f, FrequencyGrid(64))
        assert est.certified_upper == 0.0

    def test_slack_shrinks_with_grid(self) -> None:
        f = DiscreteSignal.interval(50)
        g = DiscreteSignal.zero()
        coarse = fourier_sup_diff(f, g, FrequencyGrid(256))
        fine = fourier_sup_diff(f, g, FrequencyGrid(4096))
        assert fine.lipschitz_slack < coarse.lipschitz_slack
        assert fine.certified_upper <= coarse.certified_upper + 1e-9

    def test_default_grid_floor(self) -> None:
        assert default_grid(10).M >= 4096
        assert default_grid(10 ** 4).M >= 8 * 10 ** 4


class TestNorms:
    def test_known_values(self) -> None:
        f = DiscreteSignal(1, np.array([3.0, -4.0]))
        assert lp_norm(f, 1) == 7.0
        assert lp_norm(f, 2) == 5.0
        assert lp_norm(f, np.inf) == 4.0

    def test_rejects_p_below_one(self) -> None:
        with pytest.raises(ValidationError):
            lp_norm(DiscreteSignal.interval(3), 0.5)


class TestCsvRoundTrip:
    @given(small_signals)
    @settings(max_examples=30)
    def test_exact_roundtrip(self, tmp_path_factory, f) -> None:
        path = tmp_path_factory.mktemp("csv") / "sig.csv"
        write_csv(f, path)
        g = read_csv(path)
        h = f.trimmed()
        assert g.support_lo == h.support_lo or h.is_zero
        if not h.is_zero:
            assert np.array_equal(g.values, h.values)

    def test_rejects_duplicate_index(self, tmp_path) -> None:
        path = tmp_path / "dup.csv"
        path.write_text("n,value\n1,1.0\n1,2.0\n")
        with pytest.raises(ValidationError):
            read_csv(path)

    def test_header_required(self, tmp_path) -> None:
        path = tmp_path / "empty.csv"
        path.write_text("n,value\n")
        assert read_csv(path).is_zero
