"""Acceptance strategies and exact success probabilities.

A strategy is a vector q where q_i is the probability of accepting the i-th
arrival given that it is the best seen so far and nothing was accepted yet.
Its exact success probability against a horizon distribution p is

    A(p, q) = sum_i U_{i-1}(q) * q_i * lambda_i(p),
    U_i(q)  = prod_{l<=i} (1 - q_l / l),

with the equivalent per-horizon form sum_i p_i * (1/i) * sum_{l<=i} U_{l-1} q_l
kept around as a cross-check oracle.  When a strategy is evaluated against a
distribution whose support extends past the stored length, the missing entries
are treated as 1 (accepting a best-so-far item when nothing else would be
picked weakly dominates rejecting it).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dist import SUM_TOL, HorizonDistribution, lambda_sequence
from .errors import ValidationError


@dataclass(frozen=True)
class Strategy:
    """Acceptance probabilities q_1..q_m, each in [0, 1]."""

    q: np.ndarray

    def __post_init__(self) -> None:
        q = np.asarray(self.q, dtype=float)
        if q.ndim != 1:
            raise ValidationError("q must be a 1-D vector")
        if not np.all(np.isfinite(q)):
            raise ValidationError("q must be finite")
        if np.any(q < 0) or np.any(q > 1):
            raise ValidationError("q entries must lie in [0, 1]")
        q = q.copy()
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    @property
    def m(self) -> int:
        return self.q.size

    def extended(self, n: int) -> np.ndarray:
        """Acceptance vector of length n, padding with 1 beyond the stored length."""
        if n <= self.m:
            return self.q[:n]
        return np.concatenate([self.q, np.ones(n - self.m)])


@dataclass(frozen=True)
class ThresholdMixture:
    """Probability weights over single-threshold strategies with l = 1..len(weights)."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValidationError("weights must be a non-empty 1-D vector")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValidationError("weights must be non-negative and finite")
        if abs(w.sum() - 1.0) > SUM_TOL:
            raise ValidationError("mixture weights must sum to 1")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


def make_strategy(values) -> Strategy:
    return Strategy(q=np.asarray(values, dtype=float))


def single_threshold(l: int, m: int) -> Strategy:
    """Reject the first l-1 arrivals, then accept the first best-so-far one.

    Stored with length m; thresholds beyond the length give the all-zero
    vector.
    """
    if l < 1:
        raise ValidationError(f"threshold must be >= 1, got {l}")
    if m < 0:
        raise ValidationError(f"length must be >= 0, got {m}")
    q = np.zeros(m)
    if l <= m:
        q[l - 1 :] = 1.0
    return Strategy(q=q)


def prefix_products(strategy: Strategy) -> np.ndarray:
    """U_0..U_m where U_i = prod_{l<=i} (1 - q_l/l): the no-pick-yet probabilities."""
    q = strategy.q
    factors = 1.0 - q / np.arange(1, q.size + 1)
    return np.concatenate([[1.0], np.cumprod(factors)])


def success_probability(p: HorizonDistribution, strategy: Strategy) -> float:
    """Exact success probability A(p, q), evaluated in the lambda form (O(n))."""
    lam = lambda_sequence(p).values
    qx = strategy.extended(p.n)
    u_prev = np.concatenate([[1.0], np.cumprod(1.0 - qx / np.arange(1, p.n + 1))])[:-1]
    return float(np.sum(u_prev * qx * lam))


def success_probability_pform(p: HorizonDistribution, strategy: Strategy) -> float:
    """Same value as :func:`success_probability`, via the per-horizon form.

    sum_i p_i * (1/i) * sum_{l<=i} U_{l-1} q_l.  Kept as an independent
    cross-check of the lambda-form evaluation.
    """
    qx = strategy.extended(p.n)
    idx = np.arange(1, p.n + 1)
    u_prev = np.concatenate([[1.0], np.cumprod(1.0 - qx / idx)])[:-1]
    inner = np.cumsum(u_prev * qx) / idx
    return float(np.sum(p.probs * inner))


def threshold_success_values(p: HorizonDistribution, l_max: int) -> np.ndarray:
    """A(p, q^(l)) for every threshold l = 1..l_max, in one pass.

    Uses the closed form A(p, q^(l)) = lambda_l + (l-1) * sum_{i>l} lambda_i/(i-1),
    which follows from U_{i-1}(q^(l)) = (l-1)/(i-1) for i > l.
    """
    if l_max < 1:
        raise ValidationError(f"l_max must be >= 1, got {l_max}")
    span = max(l_max, p.n)
    lam = np.zeros(span + 1)
    lam[: p.n] = lambda_sequence(p).values
    # ratio_tail (0-based j, threshold l = j+1): sum_{i >= l+1} lambda_i / (i-1)
    ratios = lam[1:] / np.arange(1, span + 1)
    ratio_tail = np.cumsum(ratios[::-1])[::-1]
    return lam[:l_max] + np.arange(l_max) * ratio_tail[:l_max]


def mixture_success_probability(p: HorizonDistribution, mix: ThresholdMixture) -> float:
    """Success probability of drawing a threshold from the mixture, then playing it."""
    values = threshold_success_values(p, mix.weights.size)
    return float(mix.weights @ values)
