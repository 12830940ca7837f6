"""Optimal and near-optimal strategies under a known horizon distribution.

The exact optimum over all acceptance vectors is found by backward induction
on the continuation values

    C_{n+1} = 0,   C_i = max_{q_i in [0,1]} ((q_i/i) * g_i + (1 - q_i/i) * C_{i+1}),

with gain g_i = i * lambda_i(p).  The objective is linear in each q_i once the
later entries are fixed, so some 0/1 vector attains the optimum; ties are
broken toward accepting.  The same recursion, run with an arbitrary gain
sequence, powers the sample-based learner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dist import HorizonDistribution, harmonic, lambda_sequence
from .errors import ValidationError
from .strategy import (
    Strategy,
    ThresholdMixture,
    single_threshold,
    success_probability,
    threshold_success_values,
)


@dataclass(frozen=True)
class SolveResult:
    q_opt: Strategy
    value: float
    continuation: np.ndarray  # C_1..C_{n+1}


@dataclass(frozen=True)
class ThetaResult:
    theta: float  # max_i i * lambda_i(p)
    k_star: int  # smallest index attaining the max


def backward_induction(gains: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Maximize sum_i U_{i-1}(q) (q_i/i) g_i over q in [0,1]^n, exactly.

    Returns the 0/1 maximizer and the continuation values C_1..C_{n+1}.
    Accept (q_i = 1) exactly when g_i >= C_{i+1}; the optimum value is C_1.
    """
    g = np.asarray(gains, dtype=float)
    n = g.size
    q = np.zeros(n)
    c = np.zeros(n + 1)
    for i in range(n, 0, -1):
        cont = c[i]
        if g[i - 1] >= cont:
            q[i - 1] = 1.0
            c[i - 1] = g[i - 1] / i + (1.0 - 1.0 / i) * cont
        else:
            c[i - 1] = cont
    return q, c


def solve_optimal(p: HorizonDistribution) -> SolveResult:
    """Exact maximizer of the success probability over all strategies."""
    lam = lambda_sequence(p).values
    gains = np.arange(1, p.n + 1) * lam
    q, c = backward_induction(gains)
    return SolveResult(q_opt=Strategy(q=q), value=float(c[0]), continuation=c)


def theta(p: HorizonDistribution) -> ThetaResult:
    """Largest scaled marginal max_i i*lambda_i(p) and its smallest attaining index."""
    gains = np.arange(1, p.n + 1) * lambda_sequence(p).values
    k = int(np.argmax(gains))
    return ThetaResult(theta=float(gains[k]), k_star=k + 1)


def classical_cutoff(k: int) -> int:
    """Optimal rejection cutoff of the fixed-horizon problem at scale k.

    The smallest s with sum_{i=s}^{k-1} 1/i <= 1 (so roughly k/e); by
    convention 1 at k = 1 and 2 at k = 2.
    """
    if k < 1:
        raise ValidationError(f"scale must be >= 1, got {k}")
    if k <= 2:
        return k
    s, total = k, 0.0
    while s > 2 and total + 1.0 / (s - 1) <= 1.0:
        s -= 1
        total += 1.0 / s
    return s


def single_threshold_approx(p: HorizonDistribution) -> tuple[Strategy, float]:
    """A single-threshold strategy certified to earn at least theta(p)/e.

    The threshold is the classical cutoff at scale K* (the smallest maximizer
    of i*lambda_i), which at that scale collects at least a 1/e fraction of
    K* lambda_{K*} = theta(p).  Asserts theta/e <= value <= optimum before
    returning.
    """
    t = theta(p)
    q = single_threshold(classical_cutoff(t.k_star), p.n)
    value = success_probability(p, q)
    opt = solve_optimal(p).value
    tol = 1e-12
    if not (t.theta / math.e <= value + tol and value <= opt + tol):
        raise AssertionError(
            f"approximation sandwich violated: {t.theta / math.e} <= {value} <= {opt}"
        )
    return q, value


def best_single_threshold(p: HorizonDistribution) -> tuple[int, float]:
    """Exhaustive scan of thresholds l = 1..n+1; smallest argmax on ties."""
    values = threshold_success_values(p, p.n + 1)
    l = int(np.argmax(values))
    return l + 1, float(values[l])


def minimax_mixture(n_bar: int) -> ThresholdMixture:
    """Threshold randomization achieving exactly 1/(1 + H_{n_bar - 1}) on [n_bar].

    weights_1 = 1/(1+H_{n_bar-1}) and weights_l = weights_1/(l-1) for l >= 2;
    the success probability equals the constant for every horizon distribution
    supported on [n_bar].
    """
    if n_bar < 1:
        raise ValidationError(f"minimax_mixture needs n_bar >= 1, got {n_bar}")
    top = 1.0 / (1.0 + harmonic(n_bar - 1))
    w = np.empty(n_bar)
    w[0] = top
    if n_bar > 1:
        w[1:] = top / np.arange(1, n_bar)
    return ThresholdMixture(weights=w / w.sum())


def minimax_mixture_expected_bound(mu_bar: float) -> ThresholdMixture:
    """Threshold randomization for a known bound on E[N]: mix over [ceil(mu*log(mu))]."""
    if not (mu_bar > 1.0 and math.isfinite(mu_bar)):
        raise ValidationError(f"mean bound must be > 1, got {mu_bar}")
    return minimax_mixture(math.ceil(mu_bar * math.log(mu_bar)))
