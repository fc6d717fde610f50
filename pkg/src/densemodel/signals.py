"""Finitely supported real functions on Z with Fourier evaluation on the circle.

A signal is stored on an explicit integer window [lo, hi]; everything outside
is implicitly zero.  Fourier evaluation uses the e(x) = exp(2*pi*i*x)
convention, so fhat(alpha) = sum_n f(n) e(alpha n).  Sup-norm statements about
fhat are certified on finite grids via a Lipschitz slack derived from
|fhat'| <= 2*pi*H*||f||_1, H = max |n| over the support.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceError, ValidationError

# Direct convolution below this support length, cyclic FFT above.
FFT_CONV_THRESHOLD = 512

# Hard cap on the output window of a convolution.
MAX_CONV_LENGTH = 1 << 24

# Sums with more terms than this use compensated (fsum) summation.
COMPENSATED_SUM_THRESHOLD = 10_000


@dataclass(frozen=True)
class DiscreteSignal:
    """A finitely supported map Z -> R on the window [support_lo, support_hi]."""

    support_lo: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValidationError("signal needs a one-dimensional, non-empty value array")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("signal values must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def support_hi(self) -> int:
        return self.support_lo + len(self.values) - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.support_lo, self.support_hi + 1)

    def __call__(self, n: int) -> float:
        if self.support_lo <= n <= self.support_hi:
            return float(self.values[n - self.support_lo])
        return 0.0

    @staticmethod
    def zero() -> "DiscreteSignal":
        return DiscreteSignal(0, np.zeros(1))

    @staticmethod
    def unit_mass(n: int, weight: float = 1.0) -> "DiscreteSignal":
        return DiscreteSignal(n, np.array([float(weight)]))

    @staticmethod
    def indicator(lo: int, hi: int) -> "DiscreteSignal":
        if hi < lo:
            raise ValidationError(f"empty indicator window [{lo}, {hi}]")
        return DiscreteSignal(lo, np.ones(hi - lo + 1))

    @staticmethod
    def interval(N: int) -> "DiscreteSignal":
        """Indicator of [1, N]."""
        return DiscreteSignal.indicator(1, N)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.values)

    def scaled(self, c: float) -> "DiscreteSignal":
        return DiscreteSignal(self.support_lo, self.values * float(c))

    def trimmed(self) -> "DiscreteSignal":
        """Drop zero margins (keeps at least one entry)."""
        nz = np.nonzero(self.values)[0]
        if len(nz) == 0:
            return DiscreteSignal.zero()
        return DiscreteSignal(self.support_lo + int(nz[0]), self.values[nz[0]:nz[-1] + 1])


def align(f: DiscreteSignal, g: DiscreteSignal) -> tuple[int, np.ndarray, np.ndarray]:
    """Common window [lo, hi] holding both supports; returns (lo, fvals, gvals)."""
    lo = min(f.support_lo, g.support_lo)
    hi = max(f.support_hi, g.support_hi)
    fv = np.zeros(hi - lo + 1)
    gv = np.zeros(hi - lo + 1)
    fv[f.support_lo - lo: f.support_hi - lo + 1] = f.values
    gv[g.support_lo - lo: g.support_hi - lo + 1] = g.values
    return lo, fv, gv


def add(f: DiscreteSignal, g: DiscreteSignal) -> DiscreteSignal:
    lo, fv, gv = align(f, g)
    return DiscreteSignal(lo, fv + gv)


def subtract(f: DiscreteSignal, g: DiscreteSignal) -> DiscreteSignal:
    lo, fv, gv = align(f, g)
    return DiscreteSignal(lo, fv - gv)


def multiply(f: DiscreteSignal, g: DiscreteSignal) -> DiscreteSignal:
    lo, fv, gv = align(f, g)
    return DiscreteSignal(lo, fv * gv)


@dataclass(frozen=True)
class FrequencyGrid:
    """M equally spaced points j/M of the circle, j = 0..M-1."""

    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValidationError("frequency grid needs M >= 1")

    @property
    def lipschitz_radius(self) -> float:
        """Half the grid spacing: no point of the circle is further from the grid."""
        return 0.5 / self.M

    @property
    def points(self) -> np.ndarray:
        return np.arange(self.M) / self.M


def default_grid(support_length: int) -> FrequencyGrid:
    return FrequencyGrid(max(4096, 8 * max(1, support_length)))


@dataclass(frozen=True)
class CertifiedSup:
    """Two-sided certificate for a sup over the circle, from a grid evaluation."""

    grid_max: float
    lipschitz_slack: float

    def __post_init__(self):
        if self.lipschitz_slack < 0:
            raise ValidationError("lipschitz_slack must be nonnegative")

    @property
    def certified_lower(self) -> float:
        return self.grid_max

    @property
    def certified_upper(self) -> float:
        return self.grid_max + self.lipschitz_slack

    def as_dict(self) -> dict:
        return {
            "grid_max": self.grid_max,
            "lipschitz_slack": self.lipschitz_slack,
            "certified_lower": self.certified_lower,
            "certified_upper": self.certified_upper,
        }


def _compensated_complex_sum(terms: np.ndarray) -> complex:
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def fourier_eval(f: DiscreteSignal, alpha: float) -> complex:
    """fhat(alpha) = sum_n f(n) e(alpha n)."""
    phase = np.exp(2j * np.pi * alpha * f.indices.astype(np.float64))
    terms = f.values * phase
    if len(terms) > COMPENSATED_SUM_THRESHOLD:
        return _compensated_complex_sum(terms)
    return complex(np.sum(terms))


def grid_fourier(f: DiscreteSignal, grid: FrequencyGrid) -> np.ndarray:
    """fhat at every grid point j/M, exactly (indices fold mod M without error)."""
    M = grid.M
    buf = np.zeros(M, dtype=np.complex128)
    np.add.at(buf, np.mod(f.indices, M), f.values)
    # ifft(buf)*M = sum_n buf[n] e(+jn/M), matching the e() sign convention
    return np.fft.ifft(buf) * M


def lp_norm(f: DiscreteSignal, p: float) -> float:
    """Counting-measure L^p norm; p >= 1 or p = inf."""
    if p == math.inf:
        return float(np.max(np.abs(f.values)))
    if p < 1:
        raise ValidationError(f"lp_norm needs p >= 1 or p = inf, got {p}")
    a = np.abs(f.values)
    if p == 1:
        return float(math.fsum(a) if len(a) > COMPENSATED_SUM_THRESHOLD else np.sum(a))
    if p == 2:
        return float(math.sqrt(math.fsum(a * a) if len(a) > COMPENSATED_SUM_THRESHOLD
                               else np.sum(a * a)))
    return float(np.sum(a ** p) ** (1.0 / p))


def _convolve_direct(fv: np.ndarray, gv: np.ndarray) -> np.ndarray:
    return np.convolve(fv, gv)


def _convolve_fft(fv: np.ndarray, gv: np.ndarray) -> np.ndarray:
    out_len = len(fv) + len(gv) - 1
    size = 1
    while size < out_len:
        size *= 2
    F = np.fft.rfft(fv, size)
    G = np.fft.rfft(gv, size)
    return np.fft.irfft(F * G, size)[:out_len]


def convolve(f: DiscreteSignal, g: DiscreteSignal,
             max_length: int = MAX_CONV_LENGTH) -> DiscreteSignal:
    """(f*g)(n) = sum_{a+b=n} f(a) g(b) on the window [f.lo+g.lo, f.hi+g.hi]."""
    out_len = len(f.values) + len(g.values) - 1
    if out_len > max_length:
        raise ResourceError(
            f"convolution output length {out_len} exceeds cap {max_length}")
    if max(len(f.values), len(g.values)) <= FFT_CONV_THRESHOLD:
        vals = _convolve_direct(f.values, g.values)
    else:
        vals = _convolve_fft(f.values, g.values)
    return DiscreteSignal(f.support_lo + g.support_lo, vals)


def fourier_sup_diff(f: DiscreteSignal, g: DiscreteSignal,
                     grid: FrequencyGrid) -> CertifiedSup:
    """Certified bracket for ||fhat - ghat||_inf over the whole circle.

    grid_max is attained on the grid, hence a valid lower bound; the upper bound
    adds the derivative slack 2*pi*H*||f-g||_1 * (1/(2M)).
    """
    if grid.M < 2:
        raise ValidationError("fourier_sup_diff needs a grid with M >= 2")
    d = subtract(f, g)
    mods = np.abs(grid_fourier(d, grid))
    grid_max = float(np.max(mods))
    H = max(abs(d.support_lo), abs(d.support_hi))
    slack = 2.0 * np.pi * H * lp_norm(d, 1) * grid.lipschitz_radius
    return CertifiedSup(grid_max=grid_max, lipschitz_slack=float(slack))


def write_csv(f: DiscreteSignal, path) -> None:
    """Signal file format: header `n,value`, one row per support point."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "value"])
        for n, v in zip(f.indices, f.values):
            w.writerow([int(n), repr(float(v))])


def read_csv(path) -> DiscreteSignal:
    """Read the `n,value` format; rows may be in any order, absent n means 0."""
    entries = {}
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r, None)
        if header is None or [h.strip() for h in header[:2]] != ["n", "value"]:
            raise ValidationError(f"{path}: expected header 'n,value'")
        for row in r:
            if not row:
                continue
            try:
                n = int(row[0])
                v = float(row[1])
            except (ValueError, IndexError) as exc:
                raise ValidationError(f"{path}: bad row {row!r}") from exc
            if n in entries:
                raise ValidationError(f"{path}: duplicate index n={n}")
            entries[n] = v
    if not entries:
        return DiscreteSignal.zero()
    lo, hi = min(entries), max(entries)
    vals = np.zeros(hi - lo + 1)
    for n, v in entries.items():
        vals[n - lo] = v
    return DiscreteSignal(lo, vals)
