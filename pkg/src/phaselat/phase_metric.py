"""Distance between phase classes and the stability ratio of a pair.

The phase class of f is {lambda * f : |lambda| = 1}; the distance between two
classes is min over unimodular lambda of norm(f - lambda * g). Over the real
field the minimum is exact (lambda is +1 or -1). Over the complex field a
Euclidean norm admits a closed form through the inner product; every other
norm is minimized on the circle by a coarse grid followed by local refinement
of each bracketed minimum.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .lattice import as_vector, check_same_dim, modulus, perp_profile

__all__ = ["PhaseAlignment", "RatioReport", "PairWitness",
           "unimodular_distance", "spr_ratio"]

RATIO_ATOL_SCALE = 1e-9


@dataclass(frozen=True)
class PhaseAlignment:
    """Minimizing unimodular scalar and the achieved distance."""

    distance: float
    lambda_star: complex


@dataclass(frozen=True)
class RatioReport:
    """Stability ratio of a pair: phase distance over modulus-gap norm.

    flag is None for a plain finite ratio, "infinite" when the moduli agree
    but the phase classes differ, and "degenerate" when both the numerator
    and the denominator vanish (the pair is a unimodular multiple).
    """

    numerator: float
    denominator: float
    ratio: float
    flag: str | None
    lambda_star: complex


def _euclidean_inner(f, g, norm):
    w = norm.weights if norm.weights is not None else 1.0
    return complex(np.sum(w * f * np.conj(g)))


def unimodular_distance(f, g, norm, tol=1e-10, field="complex", grid=512,
                        method="auto"):
    """Minimize norm(f - lambda * g) over unimodular scalars lambda.

    Returns a PhaseAlignment whose distance is within tol of the global
    minimum. Over the real field the two candidate signs are compared
    exactly. grid controls the initial circle resolution of the generic
    complex branch; every local minimum of the grid is refined.
    method "auto" dispatches to the closed form when the norm is a
    weighted 2-norm; "grid" forces the generic branch, which exists so
    the two can be cross-checked.
    """
    f, g = np.asarray(f), np.asarray(g)
    check_same_dim(f, g)
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if method not in ("auto", "grid"):
        raise ValueError(f"unknown method {method!r}")
    if field == "real":
        d_minus = norm(f - g)
        d_plus = norm(f + g)
        if d_minus <= d_plus:
            return PhaseAlignment(distance=d_minus, lambda_star=1.0 + 0.0j)
        return PhaseAlignment(distance=d_plus, lambda_star=-1.0 + 0.0j)

    if norm.p == 2.0 and method == "auto":
        # lambda* = phase of <f, g>; evaluating norm(f - lambda* g) by
        # subtraction avoids the cancellation in the norm identity
        # ||f||^2 + ||g||^2 - 2|<f, g>| near colinear pairs
        ip = _euclidean_inner(f, g, norm)
        mag = abs(ip)
        lam = ip / mag if mag > 0 else 1.0 + 0.0j
        return PhaseAlignment(distance=float(norm(f - lam * g)),
                              lambda_star=complex(lam))

    theta = np.linspace(0.0, 2.0 * np.pi, int(grid), endpoint=False)
    lam = np.exp(1j * theta)
    vals = norm.of_rows(f[None, :] - lam[:, None] * g[None, :])

    def objective(t):
        return norm(f - np.exp(1j * t) * g)

    step = 2.0 * np.pi / len(theta)
    local = np.flatnonzero((vals <= np.roll(vals, 1)) & (vals <= np.roll(vals, -1)))
    best_d = np.inf
    best_t = 0.0
    for k in local:
        cand_t, cand_d = float(theta[k]), float(vals[k])
        res = minimize_scalar(
            objective,
            bounds=(cand_t - step, cand_t + step),
            method="bounded",
            options={"xatol": 1e-10, "maxiter": 200},
        )
        if float(res.fun) < cand_d:
            cand_t, cand_d = float(res.x), float(res.fun)
        # bounded Brent cannot resolve below sqrt(eps) * |t|; polish in a
        # recentered frame where the minimizer sits near zero
        res = minimize_scalar(
            lambda s: objective(cand_t + s),
            bounds=(-1e-4, 1e-4),
            method="bounded",
            options={"xatol": 1e-12, "maxiter": 200},
        )
        if float(res.fun) < cand_d:
            cand_t, cand_d = cand_t + float(res.x), float(res.fun)
        if cand_d < best_d:
            best_d, best_t = cand_d, cand_t
    return PhaseAlignment(distance=best_d, lambda_star=complex(np.exp(1j * best_t)))


def spr_ratio(f, g, norm, tol=1e-10, field="complex"):
    """Stability ratio min_lambda norm(f - lambda g) / norm(|f| - |g|).

    Near-zero numerator and denominator are resolved against an absolute
    tolerance scaled by the pair, so exactly equal moduli report "infinite"
    and unimodular multiples report "degenerate" instead of noise ratios.
    """
    f, g = np.asarray(f), np.asarray(g)
    align = unimodular_distance(f, g, norm, tol=tol, field=field)
    num = align.distance
    den = norm(modulus(f) - modulus(g))
    atol = RATIO_ATOL_SCALE * max(norm(f), norm(g), 1.0)
    if den <= atol:
        if num <= atol:
            return RatioReport(num, den, np.nan, "degenerate", align.lambda_star)
        return RatioReport(num, den, np.inf, "infinite", align.lambda_star)
    return RatioReport(num, den, num / den, None, align.lambda_star)


@dataclass(frozen=True, eq=False)
class PairWitness:
    """A normalized pair with its three measures, recomputed at build time.

    marginal is set by constructions whose guaranteed bounds held only up
    to floating slack; the measures themselves are always re-derived from
    u and v.
    """

    u: np.ndarray
    v: np.ndarray
    separation: float
    disjointness: float
    perp: float
    marginal: bool = False

    @classmethod
    def from_vectors(cls, u, v, norm, field, marginal=False):
        u = as_vector(u, field)
        v = as_vector(v, field)
        nu, nv = norm(u), norm(v)
        if abs(nu - 1.0) > 1e-10 or abs(nv - 1.0) > 1e-10:
            raise ValueError("witness vectors must be normalized")
        sep = unimodular_distance(u, v, norm, field=field).distance
        dis = norm(np.minimum(modulus(u), modulus(v)))
        perp = norm(perp_profile(u, v))
        return cls(u=u, v=v, separation=sep, disjointness=dis,
                   perp=perp, marginal=marginal)
