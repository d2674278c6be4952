"""Exact population-level F_b-score machinery on finite-support distributions.

The optimal threshold theta* is the unique root of

    theta -> b^2 * theta * P(Y=1) - E(eta(X) - theta)_+

on [0, 1/(1+b^2)].  Both sides are piecewise linear in theta for a discrete
law, so the root is computed exactly by sorting the eta values; a bisection
fallback is kept for cross-checking.
"""

from __future__ import annotations

import numpy as np

from .discrete import DiscreteDistribution, FBetaParams, as_bits

ROOT_RESIDUAL_TOL = 1e-10


def threshold_equation(theta, values, weights, b: float = 1.0):
    """b^2*theta*S - sum_i w_i (v_i - theta)_+  with S = sum_i w_i v_i.

    Strictly increasing in theta whenever S > 0.  Vectorized over theta.
    """
    values = np.asarray(values, dtype=float).ravel()
    weights = np.asarray(weights, dtype=float).ravel()
    s = float(weights @ values)
    th = np.asarray(theta, dtype=float)
    scalar = th.ndim == 0
    th1 = np.atleast_1d(th)
    pos = np.clip(values[None, :] - th1[:, None], 0.0, None) @ weights
    out = b * b * th1 * s - pos
    return float(out[0]) if scalar else out


def solve_threshold(values, weights, b: float = 1.0) -> float:
    """Exact root of the threshold equation for a weighted discrete sample.

    O(K log K): between consecutive sorted values the equation is linear, so
    each segment yields a closed-form candidate which is accepted iff it lies
    inside the segment.  Returns 0.0 for the degenerate all-zero case (every
    theta solves the equation there; see package notes).
    """
    values = np.asarray(values, dtype=float).ravel()
    weights = np.asarray(weights, dtype=float).ravel()
    if values.size == 0:
        raise ValueError("empty value sequence")
    s = float(weights @ values)
    if s <= 0.0:
        return 0.0
    b2 = b * b
    order = np.argsort(values)
    v = values[order]
    w = weights[order]
    # Segment boundaries 0 = t_0 <= t_1 <= ... <= t_K <= t_{K+1} = 1.
    bounds = np.concatenate(([0.0], v, [1.0]))
    # On (t_j, t_{j+1}) the active set is {v_i > t_j}; suffix sums give the
    # weighted count c_j and weighted value sum T_j of that set.
    suffix_w = np.concatenate((np.cumsum(w[::-1])[::-1], [0.0]))
    suffix_wv = np.concatenate((np.cumsum((w * v)[::-1])[::-1], [0.0]))
    # Index j = 0 corresponds to theta < v_(1): everything active.
    counts = np.concatenate(([suffix_w[0]], suffix_w[1:]))
    sums = np.concatenate(([suffix_wv[0]], suffix_wv[1:]))
    denom = b2 * s + counts
    # denom can underflow to 0 on the empty final segment for subnormal s
    candidates = np.divide(sums, denom, out=np.full_like(sums, np.inf),
                           where=denom > 0.0)
    lo = bounds[:-1]
    hi = bounds[1:]
    ok = (candidates >= lo - 1e-15) & (candidates <= hi + 1e-15)
    idx = np.flatnonzero(ok)
    if idx.size == 0:  # should not happen: the equation always has a root
        raise ArithmeticError("threshold solver found no admissible segment")
    theta = float(np.clip(candidates[idx[0]], 0.0, 1.0 / (1.0 + b2)))
    return theta


def solve_threshold_bisect(values, weights, b: float = 1.0, tol: float = 1e-12) -> float:
    """Bisection solver for the same root, kept as an independent route."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    values = np.asarray(values, dtype=float).ravel()
    weights = np.asarray(weights, dtype=float).ravel()
    s = float(weights @ values)
    if s <= 0.0:
        return 0.0
    b2 = b * b

    def g(theta):
        return b2 * theta * s - float(weights @ np.clip(values - theta, 0.0, None))

    lo, hi = 0.0, 1.0 / (1.0 + b2)
    if g(hi) < 0:  # root sits exactly at the cap up to rounding
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def population_fbeta(dist: DiscreteDistribution, g, params: FBetaParams = FBetaParams()) -> float:
    """F_b(g) = P(Y=1, g(X)=1) / (b^2 P(Y=1) + P(g(X)=1)), normalized form."""
    bits = as_bits(dist, g)
    num = float(dist.mass @ (dist.eta * bits))
    den = params.b2 * dist.p_y1 + float(dist.mass @ bits)
    score = num / den
    if not params.normalized:
        score *= 1.0 + params.b2
    return score


def bayes_threshold(dist: DiscreteDistribution, params: FBetaParams = FBetaParams(),
                    method: str = "exact") -> float:
    """Optimal threshold theta*: root of b^2*theta*P(Y=1) = E(eta(X)-theta)_+."""
    if dist.p_y1 <= 0:
        raise ValueError("P(Y=1) must be positive for the optimal threshold")
    if method == "exact":
        theta = solve_threshold(dist.eta, dist.mass, params.b)
    elif method == "bisect":
        theta = solve_threshold_bisect(dist.eta, dist.mass, params.b, tol=1e-12)
    else:
        raise ValueError(f"unknown method {method!r}")
    residual = threshold_equation(theta, dist.eta, dist.mass, params.b)
    if abs(float(residual)) > ROOT_RESIDUAL_TOL:
        raise ArithmeticError(f"threshold residual {float(residual)!r} exceeds tolerance")
    return theta


def bayes_classifier(dist: DiscreteDistribution, params: FBetaParams = FBetaParams()) -> np.ndarray:
    """Bit-vector of the optimal rule 1{eta_i > theta*} (strict inequality)."""
    theta = bayes_threshold(dist, params)
    return (dist.eta > theta).astype(np.int64)


def excess_fbeta(dist: DiscreteDistribution, g, params: FBetaParams = FBetaParams(),
                 mode: str = "direct") -> float:
    """Optimality gap of g, by direct subtraction or the weighted-disagreement
    identity (both agree to float precision on discrete laws)."""
    bits = as_bits(dist, g)
    if mode == "direct":
        best = population_fbeta(dist, bayes_classifier(dist, params), params)
        return best - population_fbeta(dist, bits, params)
    if mode == "lemma1":
        theta = bayes_threshold(dist, params)
        star = (dist.eta > theta).astype(np.int64)
        num = float(dist.mass @ (np.abs(dist.eta - theta) * (star != bits)))
        den = params.b2 * dist.p_y1 + float(dist.mass @ bits)
        value = num / den
        if not params.normalized:
            value *= 1.0 + params.b2
        return value
    raise ValueError(f"unknown mode {mode!r}")
