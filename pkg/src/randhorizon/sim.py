"""Ground-truth Monte Carlo of the arrival process.

Episodes realize the process directly: draw a horizon N, permute the values
1..N uniformly, reveal relative ranks one arrival at a time, and check any
accepted position against the realized permutation (does it hold the value
N?) rather than through any closed form.  This keeps the simulator a fully
independent oracle of the exact evaluators.

Policies are rank-feedback callables ``policy(t, ranks, rng) -> bool`` where
``ranks`` holds the relative ranks R_1..R_t revealed so far (R_t = 1 means
best so far).  A policy is queried once per arrival until it accepts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .dist import HorizonDistribution
from .errors import HarnessError, ValidationError
from .strategy import Strategy, prefix_products, single_threshold

Policy = Callable[[int, tuple, np.random.Generator], bool]

# cap on elements touched per vectorized batch, to bound memory
_CHUNK_ELEMS = 1 << 22


class SimResult(NamedTuple):
    successes: int
    rate: float
    stderr: float


@dataclass(frozen=True)
class EpisodeTrace:
    """One realized episode: horizon, pick, outcome, optionally the rank stream."""

    n_realized: int
    pick_time: int | None
    success: bool
    relative_ranks: tuple | None = None


@dataclass(frozen=True)
class AvgCaseResult:
    """Exact strategy values against many uniformly drawn distributions."""

    fraction_below: float
    mean_value: float
    stderr_mean: float
    threshold: int
    draws: int


def _draw_horizons(p: HorizonDistribution, trials: int, rng: np.random.Generator) -> np.ndarray:
    cdf = np.cumsum(p.probs)
    idx = np.searchsorted(cdf, rng.random(trials), side="right")
    # a cdf top a few ulp below 1 must not leak mass onto zero-probability tails
    last_positive = int(np.flatnonzero(p.probs)[-1])
    return np.minimum(idx, last_positive) + 1


def _binomial_result(successes: int, trials: int) -> SimResult:
    rate = successes / trials
    return SimResult(successes, rate, math.sqrt(rate * (1.0 - rate) / trials))


def simulate(p: HorizonDistribution, strategy: Strategy, trials: int, seed) -> SimResult:
    """Empirical success rate of a strategy, with binomial standard error.

    Vectorized over trials, grouped by realized horizon; deterministic given
    the seed.
    """
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    horizons = _draw_horizons(p, trials, rng)
    successes = 0
    for n_val, count in zip(*np.unique(horizons, return_counts=True)):
        n_val = int(n_val)
        q_ext = strategy.extended(n_val)
        remaining = int(count)
        rows_per_chunk = max(1, _CHUNK_ELEMS // n_val)
        while remaining > 0:
            rows = min(rows_per_chunk, remaining)
            remaining -= rows
            vals = rng.permuted(
                np.tile(np.arange(1, n_val + 1), (rows, 1)), axis=1
            )
            records = vals == np.maximum.accumulate(vals, axis=1)
            accepted = records & (rng.random((rows, n_val)) < q_ext)
            any_pick = accepted.any(axis=1)
            first = accepted.argmax(axis=1)
            picked = vals[np.arange(rows), first]
            successes += int(np.sum(any_pick & (picked == n_val)))
    return _binomial_result(successes, trials)


def _run_episode(
    n_realized: int,
    policy: Policy,
    rng: np.random.Generator,
    record_ranks: bool = False,
) -> EpisodeTrace:
    vals = rng.permutation(n_realized) + 1
    ranks: list[int] = []
    pick_time = None
    for t in range(1, n_realized + 1):
        ranks.append(1 + int(np.sum(vals[: t - 1] > vals[t - 1])))
        if pick_time is None:
            decision = policy(t, tuple(ranks), rng)
            if not isinstance(decision, (bool, np.bool_)) and decision not in (0, 1):
                raise HarnessError(f"policy returned {decision!r}, expected a bool")
            if decision:
                pick_time = t
        if pick_time is not None and not record_ranks:
            break
    success = pick_time is not None and vals[pick_time - 1] == n_realized
    return EpisodeTrace(
        n_realized=n_realized,
        pick_time=pick_time,
        success=bool(success),
        relative_ranks=tuple(ranks) if record_ranks else None,
    )


def simulate_custom(p: HorizonDistribution, policy: Policy, trials: int, seed) -> SimResult:
    """Empirical success rate of an arbitrary rank-feedback policy."""
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    horizons = _draw_horizons(p, trials, rng)
    successes = sum(_run_episode(int(n), policy, rng).success for n in horizons)
    return _binomial_result(int(successes), trials)


def trace_episodes(p: HorizonDistribution, policy: Policy, trials: int, seed) -> list[EpisodeTrace]:
    """Full episode traces (with rank streams) for diagnostic checks."""
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    horizons = _draw_horizons(p, trials, rng)
    return [_run_episode(int(n), policy, rng, record_ranks=True) for n in horizons]


def adversary_game(n: int, policy: Policy, trials: int, seed) -> SimResult:
    """Success rate against an adaptive horizon-picking adversary.

    The adversary lets the first floor(sqrt(n)) arrivals pass.  If the policy
    picked one of them, the horizon becomes n (so the pick must be the best of
    all n values); otherwise the horizon becomes floor(sqrt(n)) + 1 and only
    the final arrival can still win.  No policy beats 1/sqrt(n).
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    k = math.isqrt(n)
    successes = 0
    for _ in range(trials):
        vals = rng.permutation(n) + 1
        ranks: list[int] = []
        pick_time = None
        horizon = min(k + 1, n)
        for t in range(1, horizon + 1):
            ranks.append(1 + int(np.sum(vals[: t - 1] > vals[t - 1])))
            if t <= k:
                decision = policy(t, tuple(ranks), rng)
                if decision:
                    pick_time = t
                    break
            else:
                # nothing picked so far: the adversary stops at this arrival
                decision = policy(t, tuple(ranks), rng)
                if decision:
                    successes += int(ranks[-1] == 1)
        if pick_time is not None:
            successes += int(vals[pick_time - 1] == n)
    return _binomial_result(successes, trials)


def average_case_experiment(n: int, epsilon: float, draws: int, seed) -> AvgCaseResult:
    """Exact values of the uniform-horizon threshold rule on random simplex draws.

    Draws distributions uniformly from the n-simplex and evaluates, exactly,
    the single-threshold strategy at ceil(n/e^2) against each; reports the
    fraction at or below epsilon plus the sample mean of the values.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if not (0.0 < epsilon < 2.0 / math.e**2):
        raise ValidationError(f"epsilon must be in (0, 2/e^2), got {epsilon}")
    if draws < 1:
        raise ValidationError(f"draws must be >= 1, got {draws}")
    l_star = math.ceil(n / math.e**2)
    q = single_threshold(l_star, n)
    u_prev = prefix_products(q)[:-1]
    # per-horizon coefficients: value of the rule under a point mass at i
    coeff = np.cumsum(u_prev * q.q) / np.arange(1, n + 1)
    rng = np.random.default_rng(seed)
    sample = rng.standard_exponential((draws, n))
    values = (sample / sample.sum(axis=1, keepdims=True)) @ coeff
    stderr = float(values.std(ddof=1) / math.sqrt(draws)) if draws > 1 else 0.0
    return AvgCaseResult(
        fraction_below=float(np.mean(values <= epsilon)),
        mean_value=float(values.mean()),
        stderr_mean=stderr,
        threshold=l_star,
        draws=draws,
    )


def threshold_policy(l: int) -> Policy:
    """Accept the first best-so-far arrival at time >= l."""
    if l < 1:
        raise ValidationError(f"threshold must be >= 1, got {l}")

    def decide(t: int, ranks: tuple, rng: np.random.Generator) -> bool:
        return t >= l and ranks[-1] == 1

    return decide


def strategy_policy(strategy: Strategy) -> Policy:
    """Play an acceptance vector as a rank-feedback policy (ones past its length)."""

    def decide(t: int, ranks: tuple, rng: np.random.Generator) -> bool:
        if ranks[-1] != 1:
            return False
        q_t = strategy.q[t - 1] if t <= strategy.m else 1.0
        return bool(rng.random() < q_t)

    return decide
