"""Four constructions of a bounded approximant g for f majorized by nu.

Three are explicit smoothings of f by the normalized Bohr-set measure sigma of
the large spectrum (two convolutions, one convolution, one convolution with a
decay-driven width), and the fourth obtains g directly as the solution of a
finite linear program minimizing the certified Fourier sup error over
0 <= g <= 1_[N].  Every report carries instance-wise certified inequalities
instead of asymptotic constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .bohr import BohrSet, bohr_enumerate, bohr_measure, spectrum
from .errors import DenseModelError, ValidationError
from .majorants import Majorant, max_correlation
from .signals import (
    CertifiedSup,
    DiscreteSignal,
    FrequencyGrid,
    align,
    convolve,
    default_grid,
    fourier_sup_diff,
    grid_fourier,
    lp_norm,
    subtract,
)

HB_GRID_M = 1024
HB_DIRECTIONS = 16
HB_MAX_ROUNDS = 200
CORR_TUPLE_BUDGET = 40_000


@dataclass(frozen=True)
class DenseModelReport:
    """Output of one construction: g plus measured error and boundedness."""

    variant: str
    params: dict
    g: DiscreteSignal = field(repr=False)
    fourier_err: CertifiedSup
    g_linf: float
    g_l2_over_N: float
    mass_f: float
    mass_g: float
    g_lk_over_N: float | None = None
    checks: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)

    def as_dict(self) -> dict:
        d = {
            "variant": self.variant,
            "params": self.params,
            "fourier_err": self.fourier_err.as_dict(),
            "g_linf": self.g_linf,
            "g_l2_over_N": self.g_l2_over_N,
            "mass_f": self.mass_f,
            "mass_g": self.mass_g,
            "g_support": [int(self.g.support_lo), int(self.g.support_hi)],
            "checks": self.checks,
            "flags": list(self.flags),
        }
        if self.g_lk_over_N is not None:
            d["g_lk_over_N"] = self.g_lk_over_N
        return d


def validate_majorization(f: DiscreteSignal, nu: Majorant) -> bool:
    """True iff 0 <= f(n) <= nu(n) for all n."""
    lo, fv, nv = align(f, nu.signal)
    return bool(np.all(fv >= 0) and np.all(fv <= nv))


def require_majorization(f: DiscreteSignal, nu: Majorant) -> None:
    lo, fv, nv = align(f, nu.signal)
    bad = np.nonzero((fv < 0) | (fv > nv))[0]
    if len(bad):
        n = lo + int(bad[0])
        raise ValidationError(
            f"majorization 0 <= f <= nu fails first at n={n}: "
            f"f(n)={fv[bad[0]]}, nu(n)={nv[bad[0]]}")


def _mass(sig: DiscreteSignal) -> float:
    return float(np.sum(sig.values))


def _power_sum(sig: DiscreteSignal, k: float) -> float:
    return float(np.sum(sig.values.astype(np.float64) ** k))


def _sigma_hat_at_representatives(sigma: DiscreteSignal, spec) -> np.ndarray:
    """sigmahat at the spectrum grid points j/M_spec, exact via the full grid."""
    if spec.r == 0:
        return np.zeros(0, dtype=np.complex128)
    vals = grid_fourier(sigma, FrequencyGrid(spec.M))
    return vals[spec.interval_indices]


def _spectrum_checks(f, nu, spec, sigma, power, grid) -> dict:
    """Pointwise certified inequalities from the construction's proof chain.

    Off-spectrum grid points obey |fhat - ghat| <= 2 eta ||nu||_1 because
    |sigmahat| <= 1; representatives obey |1 - sigmahat| <= 2 pi eps since
    every Bohr element n has ||n alpha_i|| <= eps.
    """
    fhat = grid_fourier(f, grid)
    sighat = grid_fourier(sigma, grid)
    diff = np.abs(fhat) * np.abs(1.0 - sighat ** power)
    off = np.abs(fhat) < spec.threshold
    off_max = float(np.max(diff[off])) if off.any() else 0.0
    rep_vals = _sigma_hat_at_representatives(sigma, spec)
    rep_max = float(np.max(np.abs(1.0 - rep_vals))) if spec.r else 0.0
    return {
        "off_spectrum_max": off_max,
        "off_spectrum_bound": 2.0 * spec.threshold,
        "off_spectrum_ok": off_max <= 2.0 * spec.threshold * (1 + 1e-12) + 1e-12,
        "representative_max": rep_max,
    }


def _convolution_model(variant: str, f: DiscreteSignal, nu: Majorant,
                       eps: float, eta: float, power: int,
                       grid: FrequencyGrid | None,
                       m_cap: int | None = None,
                       strict: bool = False) -> tuple:
    """Shared core of the smoothing constructions: returns pieces for reports."""
    require_majorization(f, nu)
    if not 0 < eps <= 0.5:
        raise ValidationError("need 0 < eps <= 1/2")
    if not 0 < eta <= 1:
        raise ValidationError("need 0 < eta <= 1")
    kwargs = {} if m_cap is None else {"m_cap": m_cap}
    spec = spectrum(f, nu, eta, strict=strict, **kwargs)
    B = bohr_enumerate(spec.representatives, eps, nu.N)
    sigma = bohr_measure(B)
    g = convolve(f, sigma)
    if power == 2:
        g = convolve(g, sigma)
    if grid is None:
        grid = default_grid(g.support_hi - g.support_lo + 1)
    err = fourier_sup_diff(f, g, grid)
    checks = _spectrum_checks(f, nu, spec, sigma, power, grid)
    # convolution-theorem consistency: ghat = fhat * sigmahat^power on the grid
    ghat = grid_fourier(g, grid)
    product = grid_fourier(f, grid) * grid_fourier(sigma, grid) ** power
    scale = max(1.0, float(np.max(np.abs(ghat))))
    checks["conv_theorem_rel_err"] = float(
        np.max(np.abs(ghat - product))) / scale
    checks["representative_bound"] = 2.0 * math.pi * eps
    checks["representative_ok"] = (
        checks["representative_max"]
        <= 2.0 * math.pi * eps * (1 + 1e-9) + 1e-9)
    checks["bohr_size"] = B.size
    checks["spectrum_r"] = spec.r
    flags = ["spectrum_grid_capped"] if spec.capped else []
    return spec, B, sigma, g, grid, err, checks, flags


def green_model(f: DiscreteSignal, nu: Majorant, eps: float, eta: float,
                grid: FrequencyGrid | None = None,
                strict: bool = False) -> DenseModelReport:
    """g = f * sigma * sigma: the doubly smoothed, L^inf-bounded approximant."""
    spec, B, sigma, g, grid, err, checks, flags = _convolution_model(
        "green", f, nu, eps, eta, power=2, grid=grid, strict=strict)
    # instance form of the L^inf chain: g <= 1 + theta_decay * N / |B|
    decay = fourier_sup_diff(nu.signal, DiscreteSignal.interval(nu.N), grid)
    theta_decay = decay.certified_upper / nu.N
    linf_bound = 1.0 + theta_decay * nu.N / B.size
    g_linf = lp_norm(g, np.inf)
    checks["theta_decay"] = theta_decay
    checks["linf_bound"] = linf_bound
    checks["linf_ok"] = g_linf <= linf_bound * (1 + 1e-9)
    return DenseModelReport(
        variant="green",
        params={"eps": eps, "eta": eta, "grid_M": grid.M},
        g=g, fourier_err=err, g_linf=g_linf,
        g_l2_over_N=_power_sum(g, 2) / nu.N,
        mass_f=_mass(f), mass_g=_mass(g),
        checks=checks, flags=flags)


def _bohr_corr2(nu: Majorant) -> float:
    """Exact max over m != 0 of sum_n nu(n) nu(n+m) / N (all shifts tested)."""
    val, exhaustive = max_correlation(nu, 2, shift_samples=max(nu.N, 2))
    assert exhaustive
    return val


def hdr_model(f: DiscreteSignal, nu: Majorant, eps: float,
              grid: FrequencyGrid | None = None,
              strict: bool = False) -> DenseModelReport:
    """g = f * sigma with eta = eps: the singly smoothed, L^2-bounded approximant."""
    spec, B, sigma, g, grid, err, checks, flags = _convolution_model(
        "hdr", f, nu, eps, eps, power=1, grid=grid, strict=strict)
    theta_L2 = lp_norm(nu.signal, 2) ** 2 / nu.N ** 2
    corr2 = _bohr_corr2(nu)
    l2 = _power_sum(g, 2)
    # proof split: diagonal pairs give theta_L2 N^2 / |B|, off-diagonal corr2 N
    l2_bound = theta_L2 * nu.N ** 2 / B.size + 2.0 * corr2 * nu.N
    checks.update({
        "theta_L2": theta_L2,
        "corr2": corr2,
        "l2_sum": l2,
        "l2_bound": l2_bound,
        "l2_ok": l2 <= l2_bound * (1 + 1e-9),
    })
    return DenseModelReport(
        variant="hdr",
        params={"eps": eps, "eta": eps, "grid_M": grid.M},
        g=g, fourier_err=err, g_linf=lp_norm(g, np.inf),
        g_l2_over_N=l2 / nu.N,
        mass_f=_mass(f), mass_g=_mass(g),
        checks=checks, flags=flags)


def _bohr_restricted_correlations(nu: Majorant, B: BohrSet, k: int) -> dict:
    """Certified per-order maxima of sum_n nu(n+m_1)...nu(n+m_l) / N, m_i in B.

    The value depends only on shift differences; differences of Bohr elements
    are enumerated exactly.  Orders whose difference-tuple count exceeds the
    budget fall back to the certified collapse corr_l <= (theta N)^{l-2} corr_2.
    """
    N = nu.N
    v = np.zeros(N)
    v[nu.signal.support_lo - 1: nu.signal.support_hi] = nu.signal.values
    elems = B.elements
    diffs = np.unique(elems[None, :] - elems[:, None]) if B.size <= 4096 else None
    if diffs is None:
        # large Bohr set: every lag in the window is possible
        diffs = np.arange(-(2 * int(elems[-1])), 2 * int(elems[-1]) + 1)
    pos = diffs[diffs > 0]
    pos = pos[pos < N]
    auto = {0: float(np.dot(v, v))}
    for d in pos:
        auto[int(d)] = float(np.dot(v[:-d], v[d:]))
    theta = lp_norm(nu.signal, np.inf) / N
    out = {1: {"value": nu.l1_mass / N, "method": "exact"}}
    corr2 = max((val for d, val in auto.items() if d != 0), default=0.0) / N
    out[2] = {"value": corr2, "method": "exact"}
    for l in range(3, k + 1):
        n_tuples = len(pos) ** (l - 1)
        if n_tuples <= CORR_TUPLE_BUDGET:
            from itertools import combinations

            best = 0.0
            for combo in combinations(pos, l - 1):
                span = max(combo)
                seg = v[: N - span].copy()
                for m in combo:
                    seg = seg * v[m: m + N - span]
                best = max(best, float(np.sum(seg)))
            out[l] = {"value": best / N, "method": "exact"}
        else:
            out[l] = {"value": (theta * N) ** (l - 2) * corr2,
                      "method": "collapse"}
    return out


def naslund_model(f: DiscreteSignal, nu: Majorant, k: int, p: float,
                  C_p: float = 1.0, grid: FrequencyGrid | None = None,
                  strict: bool = False) -> DenseModelReport:
    """g = f * sigma at the decay-driven width eps = (2 C_p / log(1/theta))^(1/(p+2)).

    theta is the measured L^inf level nu(n) <= theta N.  The report certifies
    the L^k bound through the multiplicity-collapse chain with measured,
    Bohr-restricted correlation constants.
    """
    if k < 2:
        raise ValidationError("naslund_model needs k >= 2")
    theta = lp_norm(nu.signal, np.inf) / nu.N
    if theta >= 1:
        raise ValidationError("naslund_model needs L^inf level theta < 1")
    log_inv = math.log(1.0 / theta)
    eps = min(0.5, (2.0 * C_p / log_inv) ** (1.0 / (p + 2)))
    spec, B, sigma, g, grid, err, checks, flags = _convolution_model(
        "naslund", f, nu, eps, eps, power=1, grid=grid, strict=strict)
    if k > 0.5 * math.sqrt(log_inv):
        flags.append("k_exceeds_hypothesis_window")
    binom = math.comb(k, 2)
    bohr_condition = B.size >= k * (2 ** binom) * theta * nu.N
    if not bohr_condition:
        flags.append("unverified boundedness")
    lk = _power_sum(g, k)
    corr = _bohr_restricted_correlations(nu, B, k)
    # sum over numbers of distinct shifts: 2^binom |B|^l (theta N)^(k-l) corr_l N,
    # all divided by |B|^k
    chain_bound = (2 ** binom) * nu.N * sum(
        B.size ** (l - k) * (theta * nu.N) ** (k - l) * corr[l]["value"]
        for l in range(1, k + 1))
    nu_smoothed = convolve(nu.signal, sigma)
    majorant_chain = _power_sum(nu_smoothed, k)
    checks.update({
        "theta_Linf": theta,
        "bohr_condition_rhs": k * (2 ** binom) * theta * nu.N,
        "bohr_condition_ok": bool(bohr_condition),
        "lk_sum": lk,
        "lk_majorant_chain": majorant_chain,
        "lk_majorant_ok": lk <= majorant_chain * (1 + 1e-9),
        "lk_collapse_bound": chain_bound,
        "lk_collapse_ok": lk <= chain_bound * (1 + 1e-9),
        "corr_constants": {str(l): corr[l] for l in corr},
    })
    return DenseModelReport(
        variant="naslund",
        params={"eps": eps, "eta": eps, "k": k, "p": p, "C_p": C_p,
                "theta": theta, "grid_M": grid.M},
        g=g, fourier_err=err, g_linf=lp_norm(g, np.inf),
        g_l2_over_N=_power_sum(g, 2) / nu.N,
        g_lk_over_N=lk / nu.N,
        mass_f=_mass(f), mass_g=_mass(g),
        checks=checks, flags=flags)


def clamp_to_unit_window(g: DiscreteSignal, N: int) -> DiscreteSignal:
    """Restrict to [1, N] and clip into [0, 1]: the LP's feasible set."""
    vals = np.zeros(N)
    lo = max(g.support_lo, 1)
    hi = min(g.support_hi, N)
    if lo <= hi:
        vals[lo - 1: hi] = g.values[lo - g.support_lo: hi - g.support_lo + 1]
    return DiscreteSignal(1, np.clip(vals, 0.0, 1.0))


def _hb_constraint_row(N: int, alpha: float, psi: float,
                       fhat_alpha: complex) -> tuple[np.ndarray, float]:
    """Row of Re[(fhat - ghat)(alpha) e^(-i psi)] <= t in A_ub x <= b form."""
    n = np.arange(1, N + 1)
    row = np.empty(N + 1)
    row[:N] = -np.cos(2.0 * np.pi * alpha * n - psi)
    row[N] = -1.0
    b = -float((fhat_alpha * np.exp(-1j * psi)).real)
    return row, b


def hahn_banach_model(f: DiscreteSignal, nu: Majorant,
                      grid: FrequencyGrid | None = None,
                      directions: int = HB_DIRECTIONS,
                      tol: float = 1e-6,
                      max_rounds: int = HB_MAX_ROUNDS) -> DenseModelReport:
    """Best bounded approximant 0 <= g <= 1_[N] by direct LP minimization.

    Minimizes t subject to D-direction linearizations of |fhat - ghat| <= t at
    grid frequencies, generating violated rows lazily.  The LP value t* lower
    bounds the relaxed optimum; the returned g carries its own certified
    Fourier error bracket.
    """
    require_majorization(f, nu)
    if grid is None:
        grid = FrequencyGrid(HB_GRID_M)
    if directions < 3:
        raise ValidationError("need at least 3 modulus directions")
    N = nu.N
    M = grid.M
    psis = 2.0 * np.pi * np.arange(directions) / directions
    fhat = grid_fourier(f, grid)
    cos_gap = math.cos(math.pi / directions)

    rows, rhs = [], []
    for psi in psis:
        r, b = _hb_constraint_row(N, 0.0, float(psi), fhat[0])
        rows.append(r)
        rhs.append(b)
    # seed with the strongest frequencies of f
    seed_idx = np.argsort(-np.abs(fhat))[:48]
    for j in seed_idx:
        if j == 0:
            continue
        phase = math.atan2(fhat[j].imag, fhat[j].real)
        d = int(round(phase / (2 * math.pi / directions))) % directions
        r, b = _hb_constraint_row(N, j / M, float(psis[d]), fhat[j])
        rows.append(r)
        rhs.append(b)

    cost = np.zeros(N + 1)
    cost[N] = 1.0
    bounds = [(0.0, 1.0)] * N + [(0.0, None)]
    g_vals = np.zeros(N)
    t_star = 0.0
    converged = False
    for _ in range(max_rounds):
        res = linprog(cost, A_ub=np.array(rows), b_ub=np.array(rhs),
                      bounds=bounds, method="highs")
        if not res.success:
            raise DenseModelError(f"LP solve failed: {res.message}")
        g_vals = res.x[:N]
        t_star = float(res.x[N])
        ghat = grid_fourier(DiscreteSignal(1, g_vals), grid)
        mods = np.abs(fhat - ghat)
        order = np.argsort(-mods)
        violated = [int(j) for j in order[:24]
                    if mods[j] * cos_gap > t_star + tol]
        if not violated:
            converged = True
            break
        for j in violated:
            diff = fhat[j] - ghat[j]
            phase = math.atan2(diff.imag, diff.real)
            d = int(round(phase / (2 * math.pi / directions))) % directions
            for dd in (d, (d + 1) % directions, (d - 1) % directions):
                r, b = _hb_constraint_row(N, j / M, float(psis[dd]), fhat[j])
                rows.append(r)
                rhs.append(b)
    g = DiscreteSignal(1, g_vals)
    err = fourier_sup_diff(f, g, grid)
    flags = [] if converged else ["row_generation_cap_reached"]
    slack = err.lipschitz_slack
    checks = {
        "t_star": t_star,
        "t_upper": t_star / cos_gap + slack,
        "direction_secant": 1.0 / cos_gap,
        "rounds_constraints": len(rows),
        "converged": converged,
    }
    return DenseModelReport(
        variant="hahn_banach",
        params={"grid_M": M, "directions": directions, "tol": tol},
        g=g, fourier_err=err, g_linf=lp_norm(g, np.inf),
        g_l2_over_N=_power_sum(g, 2) / nu.N,
        mass_f=_mass(f), mass_g=_mass(g),
        checks=checks, flags=flags)
