"""Weighted k-center subset selection.

The objective being minimized over k-subsets S is

    max_i min_{c in S} d(i, c)  +  lambda * sum_{c in S} w(c)

i.e. covering radius plus a weight penalty. Low weight means the model is
uncertain about the point, so the penalty pulls the selection toward uncertain
points while the radius term keeps it spread out. lambda = 0 recovers plain
k-center.

The main selector runs at a fixed guess ``gamma`` of the achievable radius.
Each round it either takes the lightest unselected point outright (when every
point is already within 3*gamma of the current centers) or finds the lightest
point c that is still farther than 3*gamma and admits the lightest point
within gamma of c. Run at a gamma no smaller than the radius of the optimal
solution, the result is within 3x of the optimal objective and never carries
more weight than the optimum. A priority-queue formulation of the same rule
and a gamma grid search are provided alongside.

Weights and distances are consumed on their native scales; lambda alone
balances the two terms.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field, replace

import numpy as np

from .dataset import EmbeddingSet, WeightVector, metric_row
from .errors import (
    BudgetExceedsGroundSet,
    EmptyCenters,
    GraphMismatch,
    InvalidArgument,
    SizeMismatch,
)
from .nngraph import NeighborGraph

__all__ = [
    "SelectionConfig",
    "SubsetSolution",
    "kcenter_cost",
    "weighted_objective",
    "evaluate_solution",
    "greedy_kcenter",
    "weighted_kcenter",
    "weighted_kcenter_pq",
    "gamma_bounds",
    "make_gamma_grid",
    "gamma_search",
    "default_lambda",
]


@dataclass(frozen=True)
class SelectionConfig:
    """Run parameters for one selection.

    ``metric`` records the metric the run is meant for; selection functions
    take the metric as an explicit argument and the CLI always passes the
    same value in both places.
    """

    k: int
    lambda_: float
    gamma: float
    metric: str = "cosine-distance"
    seed: int = 0

    def validate(self, n: int) -> None:
        if self.k < 1 or self.k > n:
            raise BudgetExceedsGroundSet(k=self.k, n=n)
        if self.lambda_ < 0.0:
            raise InvalidArgument(lambda_=self.lambda_)
        if self.gamma < 0.0:
            raise InvalidArgument(gamma=self.gamma)


@dataclass
class SubsetSolution:
    """A selected subset plus its evaluation.

    ``indices`` is the selection order. ``objective`` always equals
    ``radius_term + lambda * weight_term`` as computed by
    :func:`weighted_objective`; selectors that cannot evaluate themselves
    (the simple baselines) leave the three terms NaN until
    :func:`evaluate_solution` fills them.
    """

    indices: list[int]
    radius_term: float
    weight_term: float
    objective: float
    algorithm: str
    gamma_used: float
    extra: dict = field(default_factory=dict)


def _weight_sum(weights: WeightVector, centers) -> float:
    # canonical ascending-index order so equal sets sum bitwise-equal
    idx = np.sort(np.asarray(centers, dtype=np.int64))
    return float(weights.values[idx].sum())


def _min_dists(emb: EmbeddingSet, metric: str, centers) -> np.ndarray:
    idx = np.sort(np.asarray(centers, dtype=np.int64))
    if idx.size == 0:
        raise EmptyCenters()
    dmin = metric_row(emb, metric, int(idx[0])).copy()
    for c in idx[1:]:
        np.minimum(dmin, metric_row(emb, metric, int(c)), out=dmin)
    return dmin


def kcenter_cost(emb: EmbeddingSet, metric: str, centers) -> float:
    """Covering radius: max over points of distance to the nearest center."""
    return float(_min_dists(emb, metric, centers).max())


def weighted_objective(emb: EmbeddingSet, metric: str, weights: WeightVector,
                       lambda_: float, centers) -> tuple[float, float, float]:
    """(radius_term, weight_term, objective) for a center set."""
    if weights.n != emb.n:
        raise SizeMismatch(expected=emb.n, got=weights.n)
    radius = kcenter_cost(emb, metric, centers)
    wsum = _weight_sum(weights, centers)
    return radius, wsum, radius + lambda_ * wsum


def evaluate_solution(emb: EmbeddingSet, metric: str, weights: WeightVector,
                      lambda_: float, sol: SubsetSolution) -> SubsetSolution:
    """Fill the evaluation fields of a solution from its indices."""
    radius, wsum, obj = weighted_objective(emb, metric, weights, lambda_,
                                           sol.indices)
    return replace(sol, radius_term=radius, weight_term=wsum, objective=obj)


def greedy_kcenter(emb: EmbeddingSet, metric: str, k: int,
                   start: int = 0) -> SubsetSolution:
    """Farthest-point traversal. 2-approximation for the k-center radius.

    Ignores weights entirely (weight_term reported as 0; objective equals the
    radius)."""
    n = emb.n
    if k < 1 or k > n:
        raise BudgetExceedsGroundSet(k=k, n=n)
    if start < 0 or start >= n:
        raise InvalidArgument(start=start)
    selected = [start]
    in_s = np.zeros(n, dtype=bool)
    in_s[start] = True
    dmin = metric_row(emb, metric, start).copy()
    while len(selected) < k:
        masked = np.where(in_s, -np.inf, dmin)
        nxt = int(np.argmax(masked))
        selected.append(nxt)
        in_s[nxt] = True
        np.minimum(dmin, metric_row(emb, metric, nxt), out=dmin)
    radius = float(dmin.max())
    return SubsetSolution(indices=selected, radius_term=radius, weight_term=0.0,
                          objective=radius, algorithm="greedy-kcenter",
                          gamma_used=0.0)


def weighted_kcenter(emb: EmbeddingSet, metric: str, weights: WeightVector,
                     config: SelectionConfig) -> SubsetSolution:
    """Reference selector at a fixed gamma.

    Seeds with the globally lightest point. Per round: if some point is still
    farther than 3*gamma from the centers, take the lightest such point c and
    add the lightest point within gamma of c; otherwise add the lightest
    unselected point. Ties always break to the lowest index.
    """
    n = emb.n
    config.validate(n)
    if weights.n != n:
        raise SizeMismatch(expected=n, got=weights.n)
    w = weights.values
    gamma = config.gamma
    three_gamma = 3.0 * gamma

    seed = int(np.argmin(w))
    selected = [seed]
    in_s = np.zeros(n, dtype=bool)
    in_s[seed] = True
    dmin = metric_row(emb, metric, seed).copy()

    while len(selected) < config.k:
        far = dmin > three_gamma
        if far.any():
            c_hat = int(np.argmin(np.where(far, w, np.inf)))
            ball = metric_row(emb, metric, c_hat) <= gamma
            ball &= ~in_s
            pick = int(np.argmin(np.where(ball, w, np.inf)))
        else:
            pick = int(np.argmin(np.where(in_s, np.inf, w)))
        selected.append(pick)
        in_s[pick] = True
        np.minimum(dmin, metric_row(emb, metric, pick), out=dmin)

    radius = float(dmin.max())
    wsum = _weight_sum(weights, selected)
    return SubsetSolution(indices=selected, radius_term=radius,
                          weight_term=wsum,
                          objective=radius + config.lambda_ * wsum,
                          algorithm="duke", gamma_used=gamma)


def weighted_kcenter_pq(emb: EmbeddingSet, metric: str, weights: WeightVector,
                        config: SelectionConfig,
                        graph: NeighborGraph | None = None,
                        neighborhood_mode: str = "exact-ball") -> SubsetSolution:
    """Priority-queue form of :func:`weighted_kcenter`.

    Points sit in a min-heap keyed (weight, index); whatever the heap yields
    is the lightest point still farther than 3*gamma from the centers, because
    each pick evicts its 3*gamma neighborhood. Eviction is lazy: a boolean
    mask marks dead entries and stale heap items are skipped on pop.

    ``neighborhood_mode``:
      exact-ball  evict the exact closed 3*gamma ball. Output is identical to
                  the reference selector, pick for pick. No graph needed.
      knn-graph   evict the stored adjacency list instead. Cheaper per pick
                  and faithful to running over a sparse neighbor structure,
                  but the heap can then yield points closer than 3*gamma, so
                  output may differ from the reference. Requires ``graph``.

    If the heap runs dry before k picks, the remaining budget is filled with
    the lightest unselected points, which is exactly what the reference does
    once everything is covered.
    """
    n = emb.n
    config.validate(n)
    if weights.n != n:
        raise SizeMismatch(expected=n, got=weights.n)
    if neighborhood_mode not in ("exact-ball", "knn-graph"):
        raise InvalidArgument(neighborhood_mode=neighborhood_mode)
    if graph is not None and graph.n != n:
        raise GraphMismatch(graph_n=graph.n, set_n=n)
    if neighborhood_mode == "knn-graph" and graph is None:
        raise InvalidArgument(neighborhood_mode="knn-graph", graph=None)

    w = weights.values
    gamma = config.gamma
    three_gamma = 3.0 * gamma

    heap = [(float(w[i]), i) for i in range(n)]
    heapq.heapify(heap)
    alive = np.ones(n, dtype=bool)
    in_s = np.zeros(n, dtype=bool)
    selected: list[int] = []

    def pop_alive() -> int:
        while heap:
            _, i = heapq.heappop(heap)
            if alive[i]:
                alive[i] = False
                return i
        return -1

    def evict_neighborhood(c: int) -> None:
        if neighborhood_mode == "exact-ball":
            ball = metric_row(emb, metric, c) <= three_gamma
            alive[ball] = False
        else:
            alive[graph.neighbor_indices[c]] = False
            alive[c] = False

    while len(selected) < config.k:
        c_hat = pop_alive()
        if c_hat == -1:
            break
        # c_hat itself is in the ball and unselected, so the argmin is total.
        # On the very first pop c_hat is the global weight minimum, so the
        # refinement returns c_hat and the seed matches the reference.
        ball = metric_row(emb, metric, c_hat) <= gamma
        ball &= ~in_s
        pick = int(np.argmin(np.where(ball, w, np.inf)))
        selected.append(pick)
        in_s[pick] = True
        alive[pick] = False
        evict_neighborhood(pick)

    if len(selected) < config.k:
        refill = [(float(w[i]), i) for i in range(n) if not in_s[i]]
        heapq.heapify(refill)
        while len(selected) < config.k:
            _, i = heapq.heappop(refill)
            selected.append(i)
            in_s[i] = True

    radius, wsum, obj = weighted_objective(emb, metric, weights,
                                           config.lambda_, selected)
    return SubsetSolution(indices=selected, radius_term=radius,
                          weight_term=wsum, objective=obj,
                          algorithm="duke-pq", gamma_used=gamma,
                          extra={"neighborhood_mode": neighborhood_mode})


def gamma_bounds(emb: EmbeddingSet, metric: str, weights: WeightVector,
                 k: int) -> tuple[float, float]:
    """Bracket for the radius of the optimal weighted solution.

    Upper bound: the covering radius of the k lightest points, which is the
    solution an infinite lambda would force. Lower bound: half the greedy
    farthest-point radius, valid because greedy is a 2-approximation to the
    best achievable radius and no weighted solution can beat that radius.
    """
    n = emb.n
    if k < 1 or k > n:
        raise BudgetExceedsGroundSet(k=k, n=n)
    if weights.n != n:
        raise SizeMismatch(expected=n, got=weights.n)
    order = np.lexsort((np.arange(n), weights.values))
    lightest = np.sort(order[:k])
    hi = kcenter_cost(emb, metric, lightest)
    lo = greedy_kcenter(emb, metric, k, start=0).radius_term / 2.0
    return lo, hi


_GRID_FLOOR = 1e-12


def make_gamma_grid(gamma_lo: float, gamma_hi: float,
                    grid_size: int) -> np.ndarray:
    """Geometric grid over [lo, hi], floored away from zero.

    grid_size 1 yields the geometric midpoint sqrt(lo*hi)."""
    if grid_size < 1:
        raise InvalidArgument(grid_size=grid_size)
    lo = max(gamma_lo, _GRID_FLOOR)
    hi = max(gamma_hi, lo)
    if grid_size == 1:
        return np.array([float(np.sqrt(lo * hi))])
    return np.geomspace(lo, hi, grid_size)


def gamma_search(emb: EmbeddingSet, metric: str, weights: WeightVector, k: int,
                 lambda_: float, grid_size: int = 8,
                 ) -> tuple[SubsetSolution, list[tuple[float, float]]]:
    """Run the selector across a geometric gamma grid, keep the best.

    Returns the winning solution and the full (gamma, objective) trace. Ties
    keep the smallest gamma."""
    lo, hi = gamma_bounds(emb, metric, weights, k)
    grid = make_gamma_grid(lo, hi, grid_size)
    best: SubsetSolution | None = None
    trace: list[tuple[float, float]] = []
    for g in grid:
        cfg = SelectionConfig(k=k, lambda_=lambda_, gamma=float(g),
                              metric=metric)
        sol = weighted_kcenter(emb, metric, weights, cfg)
        trace.append((float(g), sol.objective))
        if best is None or sol.objective < best.objective:
            best = sol
    best.extra["gamma_grid"] = [g for g, _ in trace]
    return best, trace


def default_lambda(k: int) -> float:
    """Scale the weight penalty inversely with the budget: 0.1 / k."""
    if k < 1:
        raise InvalidArgument(k=k)
    return 0.1 / k
