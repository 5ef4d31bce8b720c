"""Greedy maximization of the memoized objectives under a size budget.

``naive_greedy`` scans every remaining candidate each step.
``lazy_greedy`` keeps stale gains in a max-heap and re-evaluates only
the popped candidate; by diminishing returns a stale gain is an upper
bound, so the outputs (indices, order, gains) are identical to the
naive scan, including the lowest-index tie-break. ``stochastic_greedy``
scans a random sample per step for linear total work.

All variants fill the budget for monotone objectives; only objectives
flagged ``maybe_nonmonotone`` stop early on a non-positive best gain.
"""

import heapq
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceedsPool, InvalidConfig, PoolTooLarge
from .objectives import Objective, eval_objective

#: Hard cap for exhaustive search.
BRUTE_FORCE_MAX_POOL = 20


@dataclass
class SelectionResult:
    """Ordered greedy picks with per-step gains and instrumentation."""

    indices: list = field(default_factory=list)
    gains: list = field(default_factory=list)
    objective_value: float = 0.0
    evaluations: int = 0


def _check_budget(obj: Objective, budget: int) -> int:
    budget = int(budget)
    if budget < 1:
        raise InvalidConfig("budget must be at least 1")
    if budget > obj.n:
        raise BudgetExceedsPool(f"budget {budget} exceeds pool of {obj.n}")
    return budget


def naive_greedy(obj: Objective, budget: int) -> SelectionResult:
    """Full scan per step; the reference the lazy variants must match."""
    budget = _check_budget(obj, budget)
    result = SelectionResult()
    remaining = list(range(obj.n))
    total = 0.0
    for _ in range(budget):
        best_gain = -math.inf
        best_idx = -1
        for cand in remaining:
            gain = obj.marginal_gain(cand)
            result.evaluations += 1
            if gain > best_gain:
                best_gain = gain
                best_idx = cand
        if best_gain <= 0.0 and obj.maybe_nonmonotone:
            break
        obj.commit(best_idx)
        remaining.remove(best_idx)
        total += best_gain
        result.indices.append(best_idx)
        result.gains.append(best_gain)
    result.objective_value = total
    return result


def lazy_greedy(obj: Objective, budget: int) -> SelectionResult:
    """Heap of stale upper bounds; exact match of naive_greedy output.

    Entries are (-gain, index) so ties pop lowest index first. A popped
    entry evaluated in an earlier step is refreshed and accepted only
    if it still beats the next bound under the same ordering. Modular
    objectives never go stale, so their bounds are trusted as exact.
    """
    budget = _check_budget(obj, budget)
    result = SelectionResult()
    step = 0
    heap = []
    for cand in range(obj.n):
        heap.append((-obj.marginal_gain(cand), cand))
        result.evaluations += 1
    heapq.heapify(heap)
    evaluated_at = np.zeros(obj.n, dtype=np.int64)

    total = 0.0
    while heap and len(result.indices) < budget:
        neg_gain, cand = heapq.heappop(heap)
        if not obj.modular and evaluated_at[cand] != step:
            gain = obj.marginal_gain(cand)
            result.evaluations += 1
            evaluated_at[cand] = step
            if heap and (-gain, cand) > heap[0]:
                heapq.heappush(heap, (-gain, cand))
                continue
            neg_gain = -gain
        gain = -neg_gain
        if gain <= 0.0 and obj.maybe_nonmonotone:
            break
        obj.commit(cand)
        total += gain
        result.indices.append(cand)
        result.gains.append(gain)
        step += 1
    result.objective_value = total
    return result


def stochastic_greedy(
    obj: Objective,
    budget: int,
    epsilon: float = 0.1,
    seed: int = 0,
) -> SelectionResult:
    """Greedy over a fresh uniform sample of candidates each step.

    The per-step sample size ceil((n / budget) * ln(1 / epsilon)) gives
    a (1 - 1/e - epsilon) guarantee in expectation at linear total cost.
    Deterministic under ``seed``.
    """
    budget = _check_budget(obj, budget)
    if not 0.0 < epsilon < 1.0:
        raise InvalidConfig("epsilon must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    sample_size = max(1, math.ceil((obj.n / budget) * math.log(1.0 / epsilon)))

    result = SelectionResult()
    remaining = np.arange(obj.n)
    total = 0.0
    for _ in range(budget):
        if sample_size >= remaining.size:
            sample = remaining
        else:
            sample = np.sort(rng.choice(remaining, size=sample_size, replace=False))
        best_gain = -math.inf
        best_idx = -1
        for cand in sample:
            gain = obj.marginal_gain(int(cand))
            result.evaluations += 1
            if gain > best_gain:
                best_gain = gain
                best_idx = int(cand)
        if best_gain <= 0.0 and obj.maybe_nonmonotone:
            break
        obj.commit(best_idx)
        remaining = remaining[remaining != best_idx]
        total += best_gain
        result.indices.append(best_idx)
        result.gains.append(best_gain)
    result.objective_value = total
    return result


def brute_force_opt(kind: str, kernel, budget: int, lam: float = 1.0):
    """Exact optimum over all subsets of size <= budget (small pools only).

    Independent of the memoized path: every subset is scored with the
    closed-form evaluation. Returns (best subset tuple, best value).
    """
    from .similarity import KernelKind

    n = kernel.n_rows if kernel.kind is KernelKind.PAIRWISE_UNLABELED else kernel.n_cols
    if n > BRUTE_FORCE_MAX_POOL:
        raise PoolTooLarge(f"brute force capped at {BRUTE_FORCE_MAX_POOL} elements, got {n}")
    if budget < 1:
        raise InvalidConfig("budget must be at least 1")
    if budget > n:
        raise BudgetExceedsPool(f"budget {budget} exceeds pool of {n}")
    best_subset = ()
    best_value = 0.0
    for size in range(1, budget + 1):
        for subset in itertools.combinations(range(n), size):
            value = eval_objective(kind, kernel, subset, lam=lam)
            if value > best_value:
                best_value = value
                best_subset = subset
    return best_subset, best_value
