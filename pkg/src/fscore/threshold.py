"""Empirical threshold calibration from scores on the unlabeled sample.

theta_hat solves  b^2 * theta * mean(s) = mean((s - theta)_+)  over the
score sample s (fitted regression values on the unlabeled points).  The
sort-based solver is exact; bisection is kept behind ``method="bisect"``.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .core import solve_threshold, solve_threshold_bisect, threshold_equation
from .discrete import FBetaParams


class DegenerateScoreSample(UserWarning):
    """All scores are zero: every theta solves the equation; 0 is returned."""


@dataclass(frozen=True)
class ScoreSample:
    """Regression scores evaluated on the unlabeled sample.

    ``n_source`` optionally records the labeled-sample size behind the fit,
    used for the rate-matched default tolerance.
    """

    values: np.ndarray
    n_source: int | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).ravel()
        if values.size == 0:
            raise ValueError("score sample must be nonempty")
        if np.any(values < 0) or np.any(values > 1):
            raise ValueError("scores must lie in [0, 1]")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_csv(cls, path, n_source: int | None = None) -> "ScoreSample":
        with open(path, newline="") as fh:
            return cls._read_csv(fh, n_source)

    @classmethod
    def from_csv_string(cls, text: str, n_source: int | None = None) -> "ScoreSample":
        return cls._read_csv(io.StringIO(text), n_source)

    @classmethod
    def _read_csv(cls, fh, n_source):
        reader = csv.reader(fh)
        rows = [row for row in reader if row]
        start = 1 if rows and not _is_number(rows[0][0]) else 0
        values = [float(row[0]) for row in rows[start:]]
        return cls(values=np.asarray(values), n_source=n_source)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["score"])
            for v in self.values:
                writer.writerow([repr(float(v))])


def _is_number(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


def default_tolerance(n_source: int | None, beta: float | None = None,
                      d: int | None = None) -> float:
    """Rate-matched tolerance n^{-beta/(2 beta + d)} when the smoothness is
    known, else 1e-10."""
    if n_source is not None and beta is not None and d is not None:
        return float(n_source) ** (-beta / (2.0 * beta + d))
    return 1e-10


def empirical_threshold(sample: ScoreSample, params: FBetaParams = FBetaParams(),
                        tol: float | None = None, method: str = "exact") -> float:
    """Root theta_hat of the empirical threshold equation on [0, 1/(1+b^2)].

    ``tol`` is the additive accuracy of the solve.  The exact method ignores
    it beyond a residual sanity check; bisection localizes the root to an
    interval of width ``tol``, which suffices statistically at the
    rate-matched default n^{-beta/(2 beta + d)}.
    """
    if tol is None:
        tol = 1e-10
    if tol <= 0:
        raise ValueError("tol must be positive")
    values = sample.values
    weights = np.full(values.size, 1.0 / values.size)
    if float(values.mean()) == 0.0:
        warnings.warn("all scores are zero; returning theta_hat = 0",
                      DegenerateScoreSample)
        return 0.0
    if method == "exact":
        theta = solve_threshold(values, weights, params.b)
    elif method == "bisect":
        theta = solve_threshold_bisect(values, weights, params.b, tol=tol)
    else:
        raise ValueError(f"unknown method {method!r}")
    # The defining map has slope at most b^2 * mean(s) + 1 <= b^2 + 1, so a
    # theta accurate to tol has residual at most (b^2 + 1) tol.
    residual = threshold_equation(theta, values, weights, params.b)
    if abs(residual) > (params.b2 + 1.0) * tol + 1e-12:
        raise ArithmeticError(f"threshold residual {residual!r} exceeds tol={tol!r}")
    return theta


def empirical_cdf(sample_values: np.ndarray):
    """Right-continuous empirical CDF t -> (1/N) sum 1{v_i <= t}."""
    sorted_vals = np.sort(np.asarray(sample_values, dtype=float).ravel())
    n = sorted_vals.size

    def cdf(t):
        return np.searchsorted(sorted_vals, t, side="right") / n

    return cdf


def cdf_gap_bound(true_eta_cdf, sample: ScoreSample, p_y1: float,
                  breakpoints=None, tol: float = 1e-8) -> float:
    """Upper bound on |theta_hat - theta*| (b = 1) from the L1 gap between
    the true CDF of eta and the empirical CDF of the scores.

    With ``breakpoints`` (jump locations of a discrete true law) the integrand
    is piecewise constant between merged breakpoints and the integral is
    exact; otherwise each inter-sample segment is handled by quadrature.
    """
    if p_y1 <= 0:
        raise ValueError("p_y1 must be positive")
    emp = empirical_cdf(sample.values)
    if breakpoints is not None:
        knots = np.unique(np.concatenate(
            [np.asarray(breakpoints, dtype=float).ravel(), sample.values, [0.0, 1.0]]))
        knots = knots[(knots >= 0.0) & (knots <= 1.0)]
        total = 0.0
        for lo, hi in zip(knots[:-1], knots[1:]):
            mid = 0.5 * (lo + hi)
            total += abs(float(true_eta_cdf(mid)) - float(emp(mid))) * (hi - lo)
        return total / p_y1
    knots = np.unique(np.concatenate([sample.values, [0.0, 1.0]]))
    knots = knots[(knots >= 0.0) & (knots <= 1.0)]
    total = 0.0
    for lo, hi in zip(knots[:-1], knots[1:]):
        if hi <= lo:
            continue
        level = float(emp(0.5 * (lo + hi)))
        piece, _ = quad(lambda t: abs(float(true_eta_cdf(t)) - level), lo, hi,
                        epsabs=tol / max(len(knots) - 1, 1), limit=200)
        total += piece
    return total / p_y1
