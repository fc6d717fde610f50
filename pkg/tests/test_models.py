"""The four bounded-approximant constructions and their certified chains."""

from __future__ import annotations

import math

import numpy as np
import pytest

from densemodel.errors import ValidationError
from densemodel.majorants import make_random_sparse, make_uniform
from densemodel.models import (
    clamp_to_unit_window,
    green_model,
    hahn_banach_model,
    hdr_model,
    naslund_model,
    validate_majorization,
)
from densemodel.pipeline import select_subset
from densemodel.signals import (
    DiscreteSignal,
    FrequencyGrid,
    fourier_eval,
    grid_fourier,
    lp_norm,
)


@pytest.fixture(scope="module")
def sparse_instance():
    nu = make_random_sparse(600, 2 / 3, seed=11)
    f, _ = select_subset(nu, 0.5, "structured", 0)
    return f, nu


class TestMajorization:
    def test_accepts_dominated(self, sparse_instance) -> None:
        f, nu = sparse_instance
        assert validate_majorization(f, nu)

    def test_rejects_excess(self) -> None:
        nu = make_uniform(10)
        f = DiscreteSignal(1, np.full(10, 1.5))
        assert not validate_majorization(f, nu)
        with pytest.raises(ValidationError, match="first at n=1"):
            green_model(f, nu, 0.2, 0.2)

    def test_rejects_negative(self) -> None:
        nu = make_uniform(10)
        f = DiscreteSignal(5, np.array([-0.1]))
        assert not validate_majorization(f, nu)


class TestGreen:
    def test_bounded_case_reproduces_f(self) -> None:
        # f = 1_[N]: its own bounded model; the whole spectrum collapses
        nu = make_uniform(64)
        rep = green_model(nu.signal, nu, eps=0.2, eta=0.2)
        assert rep.checks["off_spectrum_ok"]
        assert rep.checks["representative_ok"]
        assert rep.checks["linf_ok"]
        assert rep.g_linf <= rep.checks["linf_bound"] + 1e-9

    def test_mass_preserved(self, sparse_instance) -> None:
        f, nu = sparse_instance
        rep = green_model(f, nu, eps=0.2, eta=0.2)
        assert rep.mass_g == pytest.approx(rep.mass_f, rel=1e-9)

    def test_off_spectrum_certificate(self, sparse_instance) -> None:
        f, nu = sparse_instance
        rep = green_model(f, nu, eps=0.2, eta=0.2)
        assert rep.checks["off_spectrum_max"] <= rep.checks["off_spectrum_bound"] + 1e-9
        assert rep.checks["representative_max"] <= 2 * math.pi * 0.2 + 1e-9
        assert rep.checks["conv_theorem_rel_err"] < 1e-8

    def test_smoothing_is_double_convolution(self, sparse_instance) -> None:
        f, nu = sparse_instance
        rep = green_model(f, nu, eps=0.2, eta=0.2)
        grid = FrequencyGrid(512)
        # ghat = fhat * sigmahat^2, so |ghat| <= |fhat| pointwise
        gh = np.abs(grid_fourier(rep.g, grid))
        fh = np.abs(grid_fourier(f, grid))
        assert np.all(gh <= fh + 1e-8)

    def test_eps_domain(self, sparse_instance) -> None:
        f, nu = sparse_instance
        with pytest.raises(ValidationError):
            green_model(f, nu, eps=0.7, eta=0.2)
        with pytest.raises(ValidationError):
            green_model(f, nu, eps=0.2, eta=0.0)


class TestHdr:
    def test_l2_chain(self, sparse_instance) -> None:
        f, nu = sparse_instance
        rep = hdr_model(f, nu, eps=0.2)
        assert rep.checks["l2_ok"]
        assert rep.checks["l2_sum"] <= rep.checks["l2_bound"] * (1 + 1e-9)
        assert rep.params["eta"] == rep.params["eps"]

    def test_single_convolution_profile(self, sparse_instance) -> None:
        f, nu = sparse_instance
        rep = hdr_model(f, nu, eps=0.2)
        grid = FrequencyGrid(512)
        gh = np.abs(grid_fourier(rep.g, grid))
        fh = np.abs(grid_fourier(f, grid))
        assert np.all(gh <= fh + 1e-8)

    def test_fourier_error_certificate(self, sparse_instance) -> None:
        f, nu = sparse_instance
        rep = hdr_model(f, nu, eps=0.2)
        rng = np.random.default_rng(0)
        for a in rng.random(200):
            d = abs(fourier_eval(f, a) - fourier_eval(rep.g, a))
            assert d <= rep.fourier_err.certified_upper + 1e-9


class TestNaslund:
    def test_width_from_decay_level(self, sparse_instance) -> None:
        f, nu = sparse_instance
        rep = naslund_model(f, nu, k=3, p=4.0)
        theta = lp_norm(nu.signal, np.inf) / nu.N
        want = min(0.5, (2.0 / math.log(1 / theta)) ** (1 / 6))
        assert rep.params["eps"] == pytest.approx(want)

    def test_lk_chains(self, sparse_instance) -> None:
        f, nu = sparse_instance
        rep = naslund_model(f, nu, k=3, p=4.0)
        assert rep.checks["lk_majorant_ok"]
        assert rep.checks["lk_collapse_ok"]
        assert rep.g_lk_over_N is not None
        corr = rep.checks["corr_constants"]
        assert corr["1"]["method"] == "exact"
        assert corr["2"]["method"] == "exact"

    def test_unverified_boundedness_flagged(self) -> None:
        # a barely sparse weight with tiny Bohr sets fails the size condition
        nu = make_random_sparse(40, 0.3, seed=1)
        f, _ = select_subset(nu, 1.0, "structured", 0)
        rep = naslund_model(f, nu, k=4, p=4.0)
        if not rep.checks["bohr_condition_ok"]:
            assert "unverified boundedness" in rep.flags

    def test_k_domain(self, sparse_instance) -> None:
        f, nu = sparse_instance
        with pytest.raises(ValidationError):
            naslund_model(f, nu, k=1, p=4.0)


class TestHahnBanach:
    def test_g_feasible_and_certified(self, sparse_instance) -> None:
        f, nu = sparse_instance
        rep = hahn_banach_model(f, nu)
        assert np.all(rep.g.values >= -1e-12)
        assert np.all(rep.g.values <= 1.0 + 1e-12)
        assert rep.checks["t_star"] <= rep.fourier_err.certified_upper + 1e-6
        assert rep.checks["converged"]

    def test_optimum_dominates_no_feasible_candidate(self, sparse_instance) -> None:
        # t* is a lower bound for the grid error of every clamped candidate
        f, nu = sparse_instance
        rep = hahn_banach_model(f, nu)
        grid = FrequencyGrid(1024)
        for cand in (clamp_to_unit_window(f, nu.N),
                     DiscreteSignal.interval(nu.N).scaled(0.5)):
            fh = grid_fourier(f, grid)
            ch = grid_fourier(cand, grid)
            assert rep.checks["t_star"] <= float(
                np.max(np.abs(fh - ch))) + 1e-6

    def test_bounded_f_gives_zero_optimum(self) -> None:
        nu = make_uniform(80)
        rep = hahn_banach_model(nu.signal, nu)
        assert rep.checks["t_star"] <= 1e-6
        assert rep.fourier_err.certified_upper <= 0.03 * 80

    def test_direction_count_domain(self, sparse_instance) -> None:
        f, nu = sparse_instance
        with pytest.raises(ValidationError):
            hahn_banach_model(f, nu, directions=2)


class TestClamp:
    def test_clips_and_restricts(self) -> None:
        g = DiscreteSignal(-2, np.array([5.0, 1.0, 0.5, -1.0, 2.0, 0.25]))
        c = clamp_to_unit_window(g, 3)
        assert c.support_lo == 1 and len(c.values) == 3
        assert list(c.values) == [0.0, 1.0, 0.25]
