"""Weighted counting of solutions to c_1 x_1 + ... + c_s x_s = 0, Sum c_i = 0.

The production route dilates each weight by its coefficient and takes one
cyclic convolution on a power-of-two modulus large enough to rule out
wraparound; a brute-force nested sum and a direct spectral average provide
independent oracles.  The transfer-error chain and the threshold-extraction
certificates used by the sparse pipeline live here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceError, ValidationError
from .signals import (
    CertifiedSup,
    DiscreteSignal,
    FrequencyGrid,
    default_grid,
    fourier_sup_diff,
    lp_norm,
)

BRUTE_SIZE_CAP = 10 ** 8
WRAP_MODULUS_CAP = 1 << 26


@dataclass(frozen=True)
class LinearForm:
    """Integer coefficients with zero sum (translation invariance), s >= 3."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) < 3:
            raise ValidationError("linear form needs s >= 3 coefficients")
        if any(c == 0 for c in coeffs):
            raise ValidationError("linear form coefficients must be nonzero")
        if sum(coeffs) != 0:
            raise ValidationError("linear form coefficients must sum to zero")

    @property
    def s(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class CountReport:
    total: float
    diagonal: float
    method: str
    wrap_modulus: int

    def as_dict(self) -> dict:
        return {"total": self.total, "diagonal": self.diagonal,
                "method": self.method, "wrap_modulus": self.wrap_modulus}


def _diagonal(weights) -> float:
    """Weighted count of constant tuples, valid as trivial solutions (sum c_i = 0)."""
    lo = max(w.support_lo for w in weights)
    hi = min(w.support_hi for w in weights)
    if hi < lo:
        return 0.0
    prod = np.ones(hi - lo + 1)
    for w in weights:
        prod *= w.values[lo - w.support_lo: hi - w.support_lo + 1]
    return float(np.sum(prod))


def _wrap_modulus(form: LinearForm, weights) -> int:
    radius = max(max(abs(w.support_lo), abs(w.support_hi)) for w in weights)
    need = sum(abs(c) for c in form.coeffs) * radius + 1
    W = 1
    while W <= need:
        W *= 2
    if W > WRAP_MODULUS_CAP:
        raise ResourceError(f"wrap modulus {W} exceeds cap {WRAP_MODULUS_CAP}")
    return W


def _dilated_cyclic(w: DiscreteSignal, c: int, W: int,
                    dtype=np.float64) -> np.ndarray:
    """F(m) = w(m/c) when c divides m, folded onto Z/W."""
    buf = np.zeros(W, dtype=dtype)
    idx = np.mod(w.indices * c, W)
    np.add.at(buf, idx, w.values.astype(dtype))
    return buf


def count_weighted(form: LinearForm, weights) -> CountReport:
    """Exact weighted solution count via dilation plus one cyclic convolution."""
    weights = list(weights)
    if len(weights) != form.s:
        raise ValidationError("need one weight per coefficient")
    W = _wrap_modulus(form, weights)
    spec_prod = None
    for c, w in zip(form.coeffs, weights):
        F = np.fft.rfft(_dilated_cyclic(w, c, W))
        spec_prod = F if spec_prod is None else spec_prod * F
    total = float(np.fft.irfft(spec_prod, W)[0])
    return CountReport(total=total, diagonal=_diagonal(weights),
                       method="convolution", wrap_modulus=W)


def count_brute(form: LinearForm, weights) -> CountReport:
    """Direct nested summation; the test oracle for count_weighted."""
    weights = list(weights)
    if len(weights) != form.s:
        raise ValidationError("need one weight per coefficient")
    sizes = [len(w.values) for w in weights]
    prod_size = math.prod(sizes[:-1])
    if prod_size > BRUTE_SIZE_CAP:
        raise ResourceError(f"brute-force size {prod_size} exceeds cap")
    c = form.coeffs
    s = form.s
    last = weights[-1]
    # iterate over x_1..x_{s-2}, vectorize x_{s-1}, solve for x_s
    penult = weights[-2]
    pen_idx = penult.indices
    pen_vals = penult.values
    total = 0.0

    def rec(i: int, partial: int, weight_prod: float):
        nonlocal total
        if weight_prod == 0.0:
            return
        if i == s - 2:
            rem = -(partial + c[s - 2] * pen_idx)
            q, r = np.divmod(rem, c[s - 1])
            ok = (r == 0) & (q >= last.support_lo) & (q <= last.support_hi)
            if ok.any():
                lv = last.values[q[ok] - last.support_lo]
                total += weight_prod * float(np.dot(pen_vals[ok], lv))
            return
        w = weights[i]
        for n, v in zip(w.indices, w.values):
            rec(i + 1, partial + c[i] * int(n), weight_prod * float(v))

    rec(0, 0, 1.0)
    return CountReport(total=total, diagonal=_diagonal(weights),
                       method="brute", wrap_modulus=0)


def count_integer(form: LinearForm, weights) -> int:
    """Exact integer count for integer-valued weights (linear convolutions)."""
    weights = list(weights)
    for w in weights:
        if len(w.values) > 10 ** 4:
            raise ResourceError("integer verification capped at support 10^4")
        if not np.allclose(w.values, np.round(w.values)):
            raise ValidationError("count_integer needs integer-valued weights")
    acc = None
    acc_lo = 0
    for cf, w in zip(form.coeffs, weights):
        vals = np.round(w.values).astype(np.int64)
        lo, hi = cf * w.support_lo, cf * w.support_hi
        lo, hi = min(lo, hi), max(lo, hi)
        buf = np.zeros(hi - lo + 1, dtype=np.int64)
        buf[w.indices * cf - lo] = vals
        if acc is None:
            acc, acc_lo = buf, lo
        else:
            acc = np.convolve(acc, buf)
            acc_lo += lo
    if acc_lo <= 0 <= acc_lo + len(acc) - 1:
        return int(acc[-acc_lo])
    return 0


def count_spectral(form: LinearForm, weights) -> CountReport:
    """Orthogonality route: average of prod_i what_i(c_i j / W) over j.

    Evaluates each spectrum by a direct phase matrix, independently of the FFT
    convolution path.
    """
    weights = list(weights)
    W = _wrap_modulus(form, weights)
    j = np.arange(W)
    prod = np.ones(W, dtype=np.complex128)
    for cf, w in zip(form.coeffs, weights):
        phases = np.exp(2j * np.pi * np.outer(j, w.indices * cf) / W)
        prod *= phases @ w.values.astype(np.complex128)
    total = float(np.mean(prod).real)
    return CountReport(total=total, diagonal=_diagonal(weights),
                       method="spectral", wrap_modulus=W)


@dataclass(frozen=True)
class TransferErrorReport:
    """Certified telescoping budget for |count(f) - count(g)|."""

    delta: float
    sup_err: float
    count_f: float
    count_g: float
    ok: bool

    def as_dict(self) -> dict:
        return {"delta": self.delta, "sup_err": self.sup_err,
                "count_f": self.count_f, "count_g": self.count_g,
                "ok": self.ok}


def transfer_error_bound(form: LinearForm, f: DiscreteSignal, g: DiscreteSignal,
                         grid: FrequencyGrid | None = None) -> TransferErrorReport:
    """Delta = sup_err * s * max(||.||_2)^2 * max(||.||_1)^(s-3).

    Telescoping over positions: one factor takes the certified sup error, two
    take Cauchy-Schwarz in L^2 (dilation by a nonzero integer preserves the
    circle L^2 norm), the rest are bounded in sup by the L^1 norm.  The counts
    on both sides are computed and the inequality checked on the instance.
    """
    if grid is None:
        span = max(f.support_hi, g.support_hi) - min(f.support_lo, g.support_lo) + 1
        grid = default_grid(span)
    sup_err = fourier_sup_diff(f, g, grid).certified_upper
    m2 = max(lp_norm(f, 2), lp_norm(g, 2))
    m1 = max(lp_norm(f, 1), lp_norm(g, 1))
    s = form.s
    delta = sup_err * s * m2 ** 2 * m1 ** (s - 3)
    cf = count_weighted(form, [f] * s).total
    cg = count_weighted(form, [g] * s).total
    lhs = abs(cf - cg)
    ok = lhs <= delta * (1 + 1e-9) + 1e-9
    return TransferErrorReport(delta=delta, sup_err=sup_err,
                               count_f=cf, count_g=cg, ok=ok)


@dataclass(frozen=True)
class ThresholdReport:
    """B = {x : g(x) >= delta/2} with the Hoelder size certificate."""

    elements: np.ndarray = field(repr=False)
    delta: float
    k: int
    C_k: float
    certified_floor: float
    N: int
    flags: tuple = ()

    def __post_init__(self):
        arr = np.asarray(self.elements).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "elements", arr)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def ok(self) -> bool:
        return self.size >= self.certified_floor * (1 - 1e-12)

    def indicator(self) -> DiscreteSignal:
        if self.size == 0:
            return DiscreteSignal.zero()
        lo = int(self.elements[0])
        vals = np.zeros(int(self.elements[-1]) - lo + 1)
        vals[self.elements - lo] = 1.0
        return DiscreteSignal(lo, vals)

    def as_dict(self) -> dict:
        return {"size": self.size, "delta": self.delta, "k": self.k,
                "C_k": self.C_k, "certified_floor": self.certified_floor,
                "N": self.N, "flags": list(self.flags), "ok": self.ok}


def threshold_extract(g: DiscreteSignal, delta: float, N: int,
                      variant_k: int = 2) -> ThresholdReport:
    """Level set B = {g >= delta/2} with floor ((delta/2)^k / C_k)^(1/(k-1)) N.

    C_k = sum g^k / N.  At k = 2 the floor is the familiar delta^2 N / (4 C).
    """
    if variant_k < 2:
        raise ValidationError("threshold_extract needs k >= 2")
    # FFT convolutions leave harmless -1e-18 noise; only substantive
    # negativity is a domain error
    neg_tol = 1e-9 * max(1.0, float(np.max(np.abs(g.values))))
    if np.any(g.values < -neg_tol):
        raise ValidationError("threshold_extract needs g >= 0")
    if np.any(g.values < 0):
        g = DiscreteSignal(g.support_lo, np.maximum(g.values, 0.0))
    flags = []
    mass = float(np.sum(g.values))
    dense_enough = mass >= delta * N
    if not dense_enough:
        # the floor needs sum over B of g >= (delta/2) N, which needs mass >= delta N
        flags.append("density_precondition_failed")
    mask = g.values >= delta / 2.0
    elements = g.indices[mask]
    C_k = float(np.sum(g.values.astype(np.float64) ** variant_k)) / N
    if C_k > 0 and delta > 0 and dense_enough:
        floor_val = ((delta / 2.0) ** variant_k / C_k) ** (1.0 / (variant_k - 1)) * N
    else:
        floor_val = 0.0
    return ThresholdReport(elements=elements, delta=delta, k=variant_k,
                           C_k=C_k, certified_floor=floor_val, N=N,
                           flags=tuple(flags))


@dataclass(frozen=True)
class ComparisonReport:
    count_g: float
    count_indicator: float
    factor: float
    ok: bool

    def as_dict(self) -> dict:
        return {"count_g": self.count_g, "count_indicator": self.count_indicator,
                "factor": self.factor, "ok": self.ok}


def count_comparison(form: LinearForm, g: DiscreteSignal,
                     threshold: ThresholdReport) -> ComparisonReport:
    """Certifies count(g) >= (delta/2)^s count(1_B): g >= (delta/2) 1_B pointwise."""
    s = form.s
    cg = count_weighted(form, [g] * s).total
    ind = threshold.indicator()
    cb = count_weighted(form, [ind] * s).total
    factor = (threshold.delta / 2.0) ** s
    ok = cg >= factor * cb * (1 - 1e-9) - 1e-9
    return ComparisonReport(count_g=cg, count_indicator=cb, factor=factor, ok=ok)


def bloom_constant(delta: float, s: int, eps_param: float, C_abs: float) -> float:
    """Parametric c(delta) = exp(-C / delta^(1/(s-2-eps))); C_abs is external."""
    if not 0 < delta <= 1:
        raise ValidationError("bloom_constant needs 0 < delta <= 1")
    if s < 3:
        raise ValidationError("bloom_constant needs s >= 3")
    if not 0 < eps_param < s - 2:
        raise ValidationError("bloom_constant needs 0 < eps_param < s - 2")
    if C_abs < 0:
        raise ValidationError("bloom_constant needs C_abs >= 0")
    return math.exp(-C_abs / delta ** (1.0 / (s - 2 - eps_param)))
