"""Constructive finite-dimensional convex duality tools.

Nearest-point projection onto the convex hull of finitely many points via
Frank-Wolfe with away steps (the duality gap is the optimality certificate),
a supporting-hyperplane witness built from the projection direction, the
bilinear saddle point over two finite hulls via the matrix-game linear
programs, and a grid relaxation giving an upper bound for the dual of the
Fourier sup norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .errors import DenseModelError, ValidationError
from .signals import DiscreteSignal

DEFAULT_TOL = 1e-8
FW_MAX_ITER = 50_000


@dataclass(frozen=True)
class PointHull:
    """Convex hull of finitely many points in R^d, kept as its generators."""

    generators: np.ndarray = field(repr=False)

    def __post_init__(self):
        gens = np.atleast_2d(np.asarray(self.generators, dtype=np.float64))
        if gens.size == 0:
            raise ValidationError("a hull needs at least one generator")
        if not np.all(np.isfinite(gens)):
            raise ValidationError("hull generators must be finite")
        gens = gens.copy()
        gens.flags.writeable = False
        object.__setattr__(self, "generators", gens)

    @property
    def dimension(self) -> int:
        return self.generators.shape[1]

    @property
    def n_generators(self) -> int:
        return self.generators.shape[0]

    def combine(self, coeffs: np.ndarray) -> np.ndarray:
        return np.asarray(coeffs) @ self.generators


@dataclass(frozen=True)
class HyperplaneWitness:
    """phi = x - y0 separating x from the hull.

    Every hull point y satisfies y . phi <= anchor_value (up to the gap
    tolerance), while x . phi = anchor_value + distance^2.
    """

    normal: np.ndarray
    anchor_value: float
    projection: np.ndarray
    distance: float


@dataclass(frozen=True)
class HullProjection:
    point: np.ndarray
    coefficients: np.ndarray
    distance: float
    gap: float
    iterations: int
    inside: bool
    witness: HyperplaneWitness | None


def project_onto_hull(x, A: PointHull, tol: float = DEFAULT_TOL,
                      max_iter: int = FW_MAX_ITER) -> HullProjection:
    """Nearest point of hull(A) to x, certified by the Frank-Wolfe gap.

    Away steps make the active set sparse and restore linear convergence.  If
    the distance exceeds tol, a hyperplane witness with normal x - y0 is
    returned; the obtuse-angle condition (x-y0).(a_i-y0) <= 0 is what makes it
    valid, up to the gap tolerance.
    """
    x = np.asarray(x, dtype=np.float64)
    gens = A.generators
    if x.shape != (A.dimension,):
        raise ValidationError("point dimension does not match hull")
    if tol <= 0:
        raise ValidationError("tol must be positive")
    scale = 1.0 + float(np.dot(x, x))
    lam = np.zeros(A.n_generators)
    lam[int(np.argmin(np.sum((gens - x) ** 2, axis=1)))] = 1.0
    gap = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        y = lam @ gens
        grad = y - x
        scores = gens @ grad
        s = int(np.argmin(scores))
        gap = float(np.dot(grad, y) - scores[s])
        if gap <= tol * scale:
            break
        active = np.nonzero(lam > 0)[0]
        v = int(active[np.argmax(scores[active])])
        fw_improve = float(np.dot(grad, y) - scores[s])
        away_improve = float(scores[v] - np.dot(grad, y))
        if fw_improve >= away_improve:
            d = gens[s] - y
            gamma_max = 1.0
            toward, away_from = s, None
        else:
            d = y - gens[v]
            gamma_max = lam[v] / (1.0 - lam[v]) if lam[v] < 1.0 else 1.0
            toward, away_from = None, v
        dd = float(np.dot(d, d))
        if dd == 0.0:
            break
        gamma = min(gamma_max, max(0.0, -float(np.dot(grad, d)) / dd))
        if gamma == 0.0:
            break
        if toward is not None:
            lam *= (1.0 - gamma)
            lam[toward] += gamma
        else:
            lam *= (1.0 + gamma)
            lam[away_from] -= gamma
            lam[lam < 0] = 0.0
            lam /= lam.sum()
    y0 = lam @ gens
    dist = float(np.linalg.norm(x - y0))
    inside = dist <= tol * math.sqrt(scale)
    witness = None
    if not inside:
        phi = x - y0
        witness = HyperplaneWitness(normal=phi,
                                    anchor_value=float(np.dot(y0, phi)),
                                    projection=y0, distance=dist)
    return HullProjection(point=y0, coefficients=lam, distance=dist,
                          gap=gap, iterations=it, inside=inside,
                          witness=witness)


@dataclass(frozen=True)
class SaddleResult:
    """a . b_star <= value <= a_star . b for all a in A, b in B (up to gap)."""

    a_star: np.ndarray
    b_star: np.ndarray
    a_coeffs: np.ndarray
    b_coeffs: np.ndarray
    value: float
    gap: float


def _game_lp(G: np.ndarray):
    """Mixed maximin strategy and value for payoff G (row player maximizes)."""
    m, k = G.shape
    # variables (lambda_1..lambda_m, v); maximize v
    c = np.zeros(m + 1)
    c[m] = -1.0
    A_ub = np.hstack([-G.T, np.ones((k, 1))])
    b_ub = np.zeros(k)
    A_eq = np.zeros((1, m + 1))
    A_eq[0, :m] = 1.0
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                  bounds=[(0.0, None)] * m + [(None, None)], method="highs")
    if not res.success:
        raise DenseModelError(f"matrix game LP failed: {res.message}")
    return res.x[:m], float(res.x[m])


def minimax_solve(A: PointHull, B: PointHull,
                  tol: float = 1e-7) -> SaddleResult:
    """Bilinear saddle over two finite hulls, via the payoff matrix game.

    The saddle a . b0 <= a0 . b reduces to mixed strategies for the game with
    payoff G_ij = a_i . b_j; both players' linear programs are solved and the
    generator-wise gap certifies the result.
    """
    if A.dimension != B.dimension:
        raise ValidationError("hulls must share a dimension")
    G = A.generators @ B.generators.T
    lam, lower = _game_lp(G)
    mu, neg_upper = _game_lp(-G.T)
    upper = -neg_upper
    a_star = A.combine(lam)
    b_star = B.combine(mu)
    value = 0.5 * (lower + upper)
    gap = float(np.max(A.generators @ b_star) - np.min(B.generators @ a_star))
    if gap > max(tol, 1e-9 * (1.0 + abs(value))) * 100:
        raise DenseModelError(f"saddle gap {gap} exceeds tolerance")
    return SaddleResult(a_star=a_star, b_star=b_star, a_coeffs=lam,
                        b_coeffs=mu, value=value, gap=max(gap, 0.0))


@dataclass(frozen=True)
class DualNormEstimate:
    """Bracket for sup_{||fhat||_inf <= 1} |<f, phi>| from the grid relaxation."""

    upper: float
    lower: float
    flags: tuple = ()

    def as_dict(self) -> dict:
        return {"upper": self.upper, "lower": self.lower, "flags": list(self.flags)}


def dual_norm_upper(phi, grid_m: int | None = None,
                    directions: int = 16) -> DualNormEstimate:
    """Upper bound for the dual of the Fourier sup norm by constraint relaxation.

    Maximizes Re<f, phi> over f in C^N subject to the D-direction linearized
    constraints |fhat(j/M)| <= 1; the feasible set contains the true unit ball,
    so the optimum dominates the dual norm.  The trivial lower bound is
    ||phi||_inf.
    """
    phi = np.asarray(phi, dtype=np.complex128)
    N = len(phi)
    if N < 1:
        raise ValidationError("phi must be non-empty")
    if directions < 3:
        raise ValidationError("need at least 3 directions")
    M = grid_m if grid_m is not None else max(2 * N, 16)
    if M < N:
        raise ValidationError("grid must have at least N points for boundedness")
    n = np.arange(1, N + 1)
    alphas = np.arange(M) / M
    psis = 2.0 * np.pi * np.arange(directions) / directions
    theta = 2.0 * np.pi * np.outer(alphas, n)  # (M, N)
    # variables (u_1..u_N, v_1..v_N); maximize sum u Re(phi) + v Im(phi)
    c = np.concatenate([-phi.real, -phi.imag])
    rows = []
    for psi in psis:
        rows.append(np.hstack([np.cos(theta - psi), -np.sin(theta - psi)]))
    A_ub = np.vstack(rows)
    b_ub = np.ones(A_ub.shape[0])
    res = linprog(c, A_ub=A_ub, b_ub=b_ub,
                  bounds=[(None, None)] * (2 * N), method="highs")
    flags = ()
    if not res.success:
        raise DenseModelError(f"dual norm LP failed: {res.message}")
    upper = float(-res.fun)
    lower = float(np.max(np.abs(phi)))
    return DualNormEstimate(upper=upper, lower=lower, flags=flags)


def positive_part_split(psi: DiscreteSignal) -> tuple[DiscreteSignal, DiscreteSignal]:
    """(psi_plus, 1_{psi >= 0}) with psi_plus = psi * indicator."""
    plus = np.maximum(psi.values, 0.0)
    ind = (psi.values >= 0).astype(np.float64)
    return (DiscreteSignal(psi.support_lo, plus),
            DiscreteSignal(psi.support_lo, ind))
