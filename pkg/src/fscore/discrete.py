"""Finite-support joint distributions of (X, Y) and related value types.

A DiscreteDistribution stores support points, their probability masses and
the conditional probability eta(x) = P(Y=1 | X=x) at every point.  It is the
substrate for all exact population-level computations.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

MASS_TOL = 1e-12


@dataclass(frozen=True)
class FBetaParams:
    """Trade-off parameter of the F_b score.

    When ``normalized`` is true (the default) scores are divided by (1 + b^2),
    so every score lives in [0, 1/(1+b^2)].
    """

    b: float = 1.0
    normalized: bool = True

    def __post_init__(self):
        if not (self.b > 0):
            raise ValueError(f"b must be positive, got {self.b}")

    @property
    def b2(self) -> float:
        return self.b * self.b

    @property
    def score_cap(self) -> float:
        """Maximum achievable normalized score, 1/(1+b^2)."""
        return 1.0 / (1.0 + self.b2)


@dataclass(frozen=True)
class DiscreteDistribution:
    """Finite-support law of (X, Y): points, masses and eta values."""

    support: np.ndarray  # (K, d)
    mass: np.ndarray     # (K,)
    eta: np.ndarray      # (K,)

    def __post_init__(self):
        support = np.atleast_2d(np.asarray(self.support, dtype=float))
        mass = np.asarray(self.mass, dtype=float).ravel()
        eta = np.asarray(self.eta, dtype=float).ravel()
        if support.shape[0] != mass.size or mass.size != eta.size:
            raise ValueError("support, mass and eta must have equal length")
        if mass.size < 1:
            raise ValueError("distribution needs at least one support point")
        if np.any(mass < 0):
            raise ValueError("masses must be nonnegative")
        if abs(mass.sum() - 1.0) > MASS_TOL:
            raise ValueError(f"masses must sum to 1, got {mass.sum()!r}")
        if np.any(eta < 0) or np.any(eta > 1):
            raise ValueError("eta values must lie in [0, 1]")
        if float(mass @ eta) <= 0:
            raise ValueError("P(Y=1) must be positive")
        for name, arr in (("support", support), ("mass", mass), ("eta", eta)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def size(self) -> int:
        return self.mass.size

    @property
    def d(self) -> int:
        return self.support.shape[1]

    @property
    def p_y1(self) -> float:
        """P(Y = 1) = sum_i mass_i * eta_i."""
        return float(self.mass @ self.eta)

    def to_csv(self, path) -> None:
        """Write one row per support point, columns x_1..x_d, mass, eta."""
        with open(path, "w", newline="") as fh:
            self._write_csv(fh)

    def to_csv_string(self) -> str:
        buf = io.StringIO()
        self._write_csv(buf)
        return buf.getvalue()

    def _write_csv(self, fh) -> None:
        writer = csv.writer(fh)
        writer.writerow([f"x_{i + 1}" for i in range(self.d)] + ["mass", "eta"])
        for x, m, e in zip(self.support, self.mass, self.eta):
            writer.writerow([repr(float(v)) for v in x] + [repr(float(m)), repr(float(e))])

    @classmethod
    def from_csv(cls, path) -> "DiscreteDistribution":
        with open(path, newline="") as fh:
            return cls._read_csv(fh)

    @classmethod
    def from_csv_string(cls, text: str) -> "DiscreteDistribution":
        return cls._read_csv(io.StringIO(text))

    @classmethod
    def _read_csv(cls, fh) -> "DiscreteDistribution":
        reader = csv.reader(fh)
        header = next(reader)
        if header[-2:] != ["mass", "eta"]:
            raise ValueError("expected trailing columns 'mass' and 'eta'")
        d = len(header) - 2
        rows = [list(map(float, row)) for row in reader if row]
        arr = np.asarray(rows, dtype=float)
        return cls(support=arr[:, :d], mass=arr[:, d], eta=arr[:, d + 1])


def as_bits(dist: DiscreteDistribution, g) -> np.ndarray:
    """Coerce a classifier to a {0,1} bit-vector over the support.

    Accepts a bit-vector (sequence of 0/1 over the support points) or a
    callable predicate evaluated point-wise on the support.
    """
    if callable(g):
        bits = np.asarray([g(x) for x in dist.support])
    else:
        bits = np.asarray(g)
    bits = bits.ravel()
    if bits.size != dist.size:
        raise ValueError(f"classifier covers {bits.size} points, support has {dist.size}")
    as_int = bits.astype(np.int64)
    if np.any((as_int != 0) & (as_int != 1)) or np.any(as_int != bits):
        raise ValueError("classifier output must be binary")
    return as_int


def random_distribution(rng: np.random.Generator, k_max: int = 12,
                        min_p_y1: float = 1e-3, d: int = 1) -> DiscreteDistribution:
    """Random small instance: Dirichlet masses, Uniform etas, P(Y=1) > min_p_y1."""
    while True:
        k = int(rng.integers(1, k_max + 1))
        mass = rng.dirichlet(np.ones(k))
        mass = mass / mass.sum()
        eta = rng.uniform(0.0, 1.0, size=k)
        if float(mass @ eta) > min_p_y1 and abs(mass.sum() - 1.0) <= MASS_TOL:
            support = rng.uniform(0.0, 1.0, size=(k, d))
            return DiscreteDistribution(support=support, mass=mass, eta=eta)


def uniform_eta_grid(k: int) -> DiscreteDistribution:
    """Discretized U[0,1] eta: k equal-mass atoms with eta at cell midpoints."""
    eta = (np.arange(k) + 0.5) / k
    mass = np.full(k, 1.0 / k)
    return DiscreteDistribution(support=eta[:, None], mass=mass, eta=eta)


def _as_float(x) -> float:
    v = float(x)
    if math.isnan(v):
        raise ValueError("nan is not a valid value")
    return v
