"""Large-spectrum extraction on an interval cover and Bohr set enumeration.

The spectrum grid uses exactly M = ceil(4*pi*N/eta) intervals so that any
point of the true spectrum lies in a covered interval whose representative is
within eta/(4*pi*N), the radius under which |fhat| can drop by at most half
the threshold.  Bohr sets are enumerated by direct scan, which at desk scale
is exact, and carry the pigeonhole lower-bound certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceError, ValidationError
from .majorants import Majorant
from .signals import DiscreteSignal, FrequencyGrid, grid_fourier

M_CAP_DEFAULT = 1 << 22
MEMBERSHIP_TOL = 1e-12
FREQ_CHUNK = 512


@dataclass(frozen=True)
class SpectrumSet:
    """Grid intervals meeting {alpha : |fhat(alpha)| >= eta * ||nu||_1}."""

    threshold: float
    eta: float
    M: int
    interval_indices: np.ndarray = field(repr=False)
    representatives: np.ndarray = field(repr=False)
    capped: bool = False

    def __post_init__(self):
        for name in ("interval_indices", "representatives"):
            arr = np.asarray(getattr(self, name))
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if len(self.interval_indices) != len(self.representatives):
            raise ValidationError("one representative per interval required")

    @property
    def r(self) -> int:
        return len(self.interval_indices)


def spectrum(f: DiscreteSignal, nu: Majorant, eta: float,
             m_cap: int = M_CAP_DEFAULT, strict: bool = False) -> SpectrumSet:
    """Intervals of the eta-level spectrum of f, at grid size M = ceil(4 pi N / eta).

    Each included interval's representative is its grid point, which by
    construction satisfies |fhat| >= eta * ||nu||_1 there.
    """
    if not 0 < eta <= 1:
        raise ValidationError("spectrum needs 0 < eta <= 1")
    N = nu.N
    M = math.ceil(4 * math.pi * N / eta)
    capped = False
    if M > m_cap:
        if strict:
            raise ResourceError(f"spectrum grid M={M} exceeds cap {m_cap}")
        M = m_cap
        capped = True
    threshold = eta * nu.l1_mass
    mods = np.abs(grid_fourier(f, FrequencyGrid(M)))
    idx = np.nonzero(mods >= threshold)[0]
    return SpectrumSet(threshold=threshold, eta=eta, M=M,
                       interval_indices=idx, representatives=idx / M,
                       capped=capped)


def circle_distance(x) -> np.ndarray:
    """Distance to the nearest integer, elementwise (round half to even)."""
    x = np.asarray(x, dtype=np.float64)
    return np.abs(x - np.round(x))


@dataclass(frozen=True)
class BohrSet:
    """B(S, eps) = {n in [-eps N, eps N] : ||n alpha|| <= eps for all alpha in S}."""

    frequencies: np.ndarray = field(repr=False)
    eps: float
    N: int
    elements: np.ndarray = field(repr=False)
    pigeonhole_floor: float

    def __post_init__(self):
        for name in ("frequencies", "elements"):
            arr = np.asarray(getattr(self, name)).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        elems = self.elements
        if len(elems) == 0 or 0 not in elems:
            raise ValidationError("Bohr set must contain 0")
        if not np.array_equal(np.sort(-elems), elems):
            raise ValidationError("Bohr set must be symmetric")

    @property
    def size(self) -> int:
        return len(self.elements)

    def as_dict(self) -> dict:
        return {
            "frequencies": [float(a) for a in self.frequencies],
            "eps": self.eps,
            "N": self.N,
            "size": self.size,
            "elements": [int(n) for n in self.elements],
            "pigeonhole_floor": self.pigeonhole_floor,
        }


def bohr_enumerate(freqs, eps: float, N: int,
                   tol: float = MEMBERSHIP_TOL) -> BohrSet:
    """Direct scan of [-floor(eps N), floor(eps N)] against every frequency.

    The recorded pigeonhole floor eps*N/2 * ceil(2/eps)^(-r) is guaranteed for
    the half-width set B(S, eps/2), hence for this superset as well.
    """
    if not 0 < eps <= 0.5:
        raise ValidationError("bohr_enumerate needs 0 < eps <= 1/2")
    if N < 1:
        raise ValidationError("bohr_enumerate needs N >= 1")
    freqs = np.atleast_1d(np.asarray(freqs, dtype=np.float64))
    nmax = int(math.floor(eps * N))
    cands = np.arange(-nmax, nmax + 1)
    bound = eps + tol
    for start in range(0, len(freqs), FREQ_CHUNK):
        if len(cands) == 0:
            break
        chunk = freqs[start:start + FREQ_CHUNK]
        dist = circle_distance(np.outer(cands, chunk))
        cands = cands[np.all(dist <= bound, axis=1)]
    r = len(freqs)
    floor_val = 0.5 * eps * N * math.ceil(2.0 / eps) ** (-r)
    return BohrSet(frequencies=freqs, eps=eps, N=N, elements=cands,
                   pigeonhole_floor=floor_val)


def bohr_measure(B: BohrSet) -> DiscreteSignal:
    """sigma = |B|^{-1} 1_B: the normalized counting measure of the Bohr set."""
    if B.size == 0:
        raise ValidationError("cannot normalize an empty Bohr set")
    lo = int(B.elements[0])
    vals = np.zeros(int(B.elements[-1]) - lo + 1)
    vals[B.elements - lo] = 1.0 / B.size
    return DiscreteSignal(lo, vals)
