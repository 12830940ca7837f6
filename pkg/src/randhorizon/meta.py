"""Randomizing a horizon guess for black-box online algorithms.

A family of algorithms indexed by an assumed horizon s comes with a
performance floor M(s, n) >= c0 * f(s)/f(n) * 1[s <= n] on instances of true
horizon n, for some nondecreasing positive f.  Drawing s from the right
distribution makes the expected floor constant in n over a known range
[n_lo, n_hi], and that constant is at least c0 / (1 + log(f(n_hi)/f(n_lo))).

The module also builds the matching hardness gadgets: a deterministic
nondecreasing value sequence with a horizon law that pins every stopping rule
to the same ratio, and a value distribution whose running maximum climbs
through a prescribed grid with high probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np

from .dist import HorizonDistribution, harmonic
from .errors import ValidationError
from .sim import SimResult

_FAMILIES = ("identity", "uniform-max", "exp-max", "table")


@dataclass(frozen=True)
class PerformanceProfile:
    """Floor constant c0 and scale function f for a family of black boxes.

    Named families: "identity" f(i) = i, "uniform-max" f(i) = i/(i+1) (mean
    maximum of i standard uniforms), "exp-max" f(i) = H_i (mean maximum of i
    standard exponentials).  A "table" profile evaluates only inside its
    table; anything else is an error rather than an extrapolation.
    """

    c0: float
    family: str = "identity"
    table: Mapping[int, float] | None = None

    def __post_init__(self) -> None:
        if not (self.c0 > 0 and math.isfinite(self.c0)):
            raise ValidationError(f"c0 must be positive, got {self.c0}")
        if self.family not in _FAMILIES:
            raise ValidationError(f"unknown profile family {self.family!r}")
        if self.family == "table" and not self.table:
            raise ValidationError("table profile needs a non-empty table")

    def f(self, i: int) -> float:
        if i < 1:
            raise ValidationError(f"f is defined on positive integers, got {i}")
        if self.family == "identity":
            return float(i)
        if self.family == "uniform-max":
            return i / (i + 1.0)
        if self.family == "exp-max":
            return harmonic(i)
        if i not in self.table:
            raise ValidationError(f"profile table has no value at {i}")
        return float(self.table[i])

    def guaranteed(self, s: int, n: int) -> float:
        """Performance floor M(s, n) of the horizon-s box on a horizon-n instance."""
        return self.c0 * self.f(s) / self.f(n) if s <= n else 0.0


@dataclass(frozen=True)
class MetaMixture:
    """Distribution over horizon guesses s = n_lo..n_hi with its flat guarantee."""

    weights: np.ndarray
    n_lo: int
    n_hi: int
    guarantee: float

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


class ProphetGrid(NamedTuple):
    """Output of the grid construction: step cdf, prefix counts, union slack."""

    cdf: "GridCdf"
    k: np.ndarray
    xi: float


@dataclass(frozen=True)
class GridCdf:
    """Right-continuous step cdf with atoms on a value grid.

    points holds theta_0..theta_n; values holds the cdf at those points, with
    values[0] = 0 and values[-1] = 1, so the atoms sit at points[1:].
    """

    points: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        val = np.asarray(self.values, dtype=float)
        if pts.shape != val.shape or pts.ndim != 1 or pts.size < 2:
            raise ValidationError("points and values must be matching 1-D grids")
        if np.any(np.diff(pts) < 0) or np.any(np.diff(val) < 0):
            raise ValidationError("grid cdf must be nondecreasing")
        if val[0] != 0.0 or abs(val[-1] - 1.0) > 1e-12:
            raise ValidationError("cdf must run from 0 to 1 over the grid")
        pts.setflags(write=False)
        val.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", val)

    def cdf(self, x) -> np.ndarray:
        """P[X <= x], stepping at the atoms."""
        idx = np.searchsorted(self.points, np.asarray(x, dtype=float), side="right")
        return self.values[np.clip(idx - 1, 0, self.values.size - 1)]

    def sample_max_atoms(self, block: int, size: int, rng: np.random.Generator) -> np.ndarray:
        """Atom indices (1-based into points) of maxima of `block` iid draws."""
        levels = self.values**block
        return np.searchsorted(levels, rng.random(size), side="right")


def meta_mixture(profile: PerformanceProfile, n_lo: int, n_hi: int) -> MetaMixture:
    """The horizon-guess distribution whose expected floor is flat over [n_lo, n_hi].

    weights(n_lo) = 1/Z, weights(s) = (1 - f(s-1)/f(s))/Z for s > n_lo, with
    Z = n_hi - n_lo + 1 - sum_{i=n_lo}^{n_hi-1} f(i)/f(i+1); the flat value is
    c0/Z >= c0 / (1 + log(f(n_hi)/f(n_lo))).
    """
    if not (1 <= n_lo <= n_hi):
        raise ValidationError(f"need 1 <= n_lo <= n_hi, got ({n_lo}, {n_hi})")
    fv = np.array([profile.f(i) for i in range(n_lo, n_hi + 1)])
    if np.any(fv <= 0):
        raise ValidationError("f must be positive on [n_lo, n_hi]")
    if np.any(np.diff(fv) < 0):
        raise ValidationError("f must be nondecreasing on [n_lo, n_hi]")
    ratios = fv[:-1] / fv[1:]
    z = (n_hi - n_lo + 1) - ratios.sum()
    weights = np.concatenate([[1.0], 1.0 - ratios]) / z
    return MetaMixture(weights=weights, n_lo=n_lo, n_hi=n_hi, guarantee=profile.c0 / z)


def meta_expected_performance(mix: MetaMixture, profile: PerformanceProfile, n: int) -> float:
    """Expected floor sum_s weights(s) * M(s, n); constant in n over the range."""
    if not (mix.n_lo <= n <= mix.n_hi):
        raise ValidationError(f"n must lie in [{mix.n_lo}, {mix.n_hi}], got {n}")
    total = 0.0
    for offset, w in enumerate(mix.weights):
        total += w * profile.guaranteed(mix.n_lo + offset, n)
    return total


def non_iid_hard_instance(a) -> tuple[HorizonDistribution, float]:
    """Horizon law that pins every stopping rule on a fixed value ladder to one ratio.

    For deterministic values a_1 <= ... <= a_n, the law p_l = c(1 - a_l/a_{l+1})
    for l < n and p_n = c, with c = (n - sum a_i/a_{i+1})^{-1}, makes
    sum_{j>=i} (a_i/a_j) p_j = c for every start index i, so every stopping
    rule earns exactly c of the running best.
    """
    av = np.asarray(a, dtype=float)
    if av.ndim != 1 or av.size == 0:
        raise ValidationError("value sequence must be a non-empty 1-D vector")
    if np.any(av <= 0) or not np.all(np.isfinite(av)):
        raise ValidationError("values must be positive and finite")
    if np.any(np.diff(av) < 0):
        raise ValidationError("values must be nondecreasing")
    n = av.size
    ratios = av[:-1] / av[1:]
    c = 1.0 / (n - ratios.sum())
    probs = np.concatenate([c * (1.0 - ratios), [c]])
    return HorizonDistribution(probs=probs, n=n), float(c)


def prophet_block_distribution(n: int, K: int, thetas) -> ProphetGrid:
    """Value distribution whose running maximum climbs the theta grid on schedule.

    With z = K^(1/(n-1)) >= 2, prefix counts k_i = ceil(K^((i-1)/(n-1))) and
    grid values G(theta_i) = alpha^(1/k_i) for alpha = K^(-1/((n-1)(z-1))),
    the maximum of the first k_i draws lands in (theta_{i-1}, theta_i] for
    every i simultaneously, up to a union-bound slack

        xi = sum_i 1 - (G(theta_i)^{k_i} - G(theta_{i-1})^{k_i})
           <= (n-1) * (1 + z^(-z/(2(z-1))) - z^(-1/(z-1))).
    """
    th = np.asarray(thetas, dtype=float)
    if n < 2:
        raise ValidationError(f"need at least two grid intervals, got n={n}")
    if th.ndim != 1 or th.size != n + 1:
        raise ValidationError(f"thetas must hold n+1 = {n + 1} grid points")
    if np.any(np.diff(th) < 0):
        raise ValidationError("thetas must be nondecreasing")
    z = K ** (1.0 / (n - 1))
    if z < 2.0:
        raise ValidationError(
            f"need K^(1/(n-1)) >= 2, got {z:.4f} (K={K}, n={n})"
        )
    alpha = K ** (-1.0 / ((n - 1) * (z - 1.0)))
    k = np.empty(n, dtype=np.int64)
    for i in range(1, n + 1):
        power = K ** ((i - 1.0) / (n - 1.0))
        nearest = round(power)
        k[i - 1] = nearest if abs(power - nearest) <= 1e-9 * max(nearest, 1) else math.ceil(power)
    values = np.empty(n + 1)
    values[0] = 0.0
    values[1:n] = alpha ** (1.0 / k[:-1])
    values[n] = 1.0
    cdf = GridCdf(points=th, values=values)
    xi = float(np.sum(1.0 - (values[1:] ** k - values[:-1] ** k)))
    hbar = z ** (-z / (2.0 * (z - 1.0))) - z ** (-1.0 / (z - 1.0))
    bound = (n - 1) * (1.0 + hbar)
    if xi > bound + 1e-9:
        raise AssertionError(f"union slack {xi} exceeds its bound {bound}")
    return ProphetGrid(cdf=cdf, k=k, xi=xi)


def union_event_rate(grid: ProphetGrid, trials: int, seed) -> SimResult:
    """Monte Carlo of the joint event: max of the first k_i draws in block i, for all i.

    Block maxima over the disjoint stretches (k_{i-1}, k_i] are independent,
    so each is drawn directly from its discrete max law and the prefix maxima
    are their running maximum.
    """
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    k = grid.k
    blocks = np.diff(np.concatenate([[0], k]))
    if np.any(blocks <= 0):
        raise ValidationError("prefix counts must be strictly increasing")
    atoms = np.empty((trials, k.size), dtype=np.int64)
    for i, b in enumerate(blocks):
        atoms[:, i] = grid.cdf.sample_max_atoms(int(b), trials, rng)
    prefix = np.maximum.accumulate(atoms, axis=1)
    hits = np.all(prefix == np.arange(1, k.size + 1), axis=1)
    successes = int(hits.sum())
    rate = successes / trials
    return SimResult(successes, rate, math.sqrt(rate * (1.0 - rate) / trials))
