"""Ranking analysis: localization, damping stability, scaling, attacks.

Every function here treats a ranking as a probability vector over nodes and
works identically for classical and quantum rank vectors. The ensemble
helpers generate their own seeded scale-free instances so experiments are
replayable from a single seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .graph import DirectedGraph, generate_scale_free, remove_nodes
from .pagerank import DEFAULT_ALPHA, classical_pagerank
from .szegedy import DEFAULT_STEPS, quantum_pagerank

NORMALIZATION_TOL = 1e-8


def _checked(p: np.ndarray, name: str = "distribution") -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if np.any(p < -NORMALIZATION_TOL):
        raise ValueError(f"{name} has negative entries")
    if abs(p.sum() - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"{name} is not normalized (sum {p.sum()!r})")
    return p


def rank_vector(g: DirectedGraph, ranker: str, alpha: float = DEFAULT_ALPHA,
                steps: int = DEFAULT_STEPS, backend: str = "auto") -> np.ndarray:
    """Dispatch to the named ranker: classical, quantum, or uniform (control)."""
    if ranker == "classical":
        return classical_pagerank(g, alpha)
    if ranker == "quantum":
        return quantum_pagerank(g, alpha, steps, backend)
    if ranker == "uniform":
        return np.full(g.node_count, 1.0 / g.node_count)
    raise ValueError(f"unknown ranker {ranker!r}")


def ipr(p: np.ndarray) -> float:
    """Inverse participation ratio 1 / sum(p_i^2).

    Ranges from 1 (all mass on one node) to N (uniform); read it as the
    effective number of occupied nodes.
    """
    p = _checked(p)
    return float(1.0 / np.square(p).sum())


def fidelity(p: np.ndarray, q: np.ndarray) -> float:
    """Bhattacharyya overlap sum_i sqrt(p_i q_i) between two distributions."""
    p = _checked(p, "p")
    q = _checked(q, "q")
    if p.shape != q.shape:
        raise ValueError(f"dimension mismatch: {p.shape} vs {q.shape}")
    return float(np.sqrt(np.clip(p, 0, None) * np.clip(q, 0, None)).sum())


@dataclass(frozen=True, eq=False)
class FidelitySweep:
    """Rankings over a damping grid and their pairwise fidelities."""

    alpha_grid: tuple[float, ...]
    rank_vectors: np.ndarray  # one row per alpha
    pairwise: np.ndarray
    min_fidelity: float


def damping_sweep(g: DirectedGraph, alpha_grid: Sequence[float], ranker: str = "classical",
                  steps: int = DEFAULT_STEPS, backend: str = "auto") -> FidelitySweep:
    """Rank at every damping value and compare all pairs of rankings."""
    grid = tuple(float(a) for a in alpha_grid)
    if not grid:
        raise ValueError("alpha grid is empty")
    if any(not 0.0 < a < 1.0 for a in grid):
        raise ValueError("alpha grid values must lie in (0, 1)")
    vectors = np.array([rank_vector(g, ranker, a, steps, backend) for a in grid])
    k = len(grid)
    pairwise = np.ones((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            pairwise[i, j] = pairwise[j, i] = fidelity(vectors[i], vectors[j])
    return FidelitySweep(grid, vectors, pairwise, float(pairwise.min()))


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares line through (log rank, log value) on the sorted ranks."""

    exponent: float
    intercept: float
    r_squared: float
    fitted_range: tuple[int, int]


def power_law_fit(p: np.ndarray, fit_range: Optional[tuple[int, int]] = None,
                  tail_cut: float = 0.05) -> PowerLawFit:
    """Fit value ~ rank^(-beta) to the descending-sorted entries of ``p``.

    Without an explicit ``fit_range`` the fit uses the strictly positive
    values minus the final ``tail_cut`` fraction, where discreteness bends
    the curve. ``fit_range`` is a half-open index interval into the sorted
    list; zeros inside it are an error since their log is undefined.
    """
    values = np.sort(np.asarray(p, dtype=np.float64))[::-1]
    if fit_range is None:
        positive = int((values > 0).sum())
        end = max(5, int(np.floor(positive * (1.0 - tail_cut))))
        fit_range = (0, min(end, positive))
    start, end = fit_range
    if not 0 <= start < end <= len(values):
        raise ValueError(f"invalid fit range {fit_range}")
    window = values[start:end]
    if len(window) < 5:
        raise ValueError("need at least 5 values to fit")
    if np.any(window <= 0):
        raise ValueError("fit range contains non-positive values")
    log_rank = np.log(np.arange(start + 1, end + 1, dtype=np.float64))
    log_val = np.log(window)
    slope, intercept = np.polyfit(log_rank, log_val, 1)
    predicted = slope * log_rank + intercept
    ss_res = float(np.square(log_val - predicted).sum())
    ss_tot = float(np.square(log_val - log_val.mean()).sum())
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return PowerLawFit(float(-slope), float(intercept), r_squared, (start, end))


@dataclass(frozen=True)
class DegeneracyProfile:
    """Groups of near-equal values in a ranking, in descending value order."""

    class_count: int
    class_sizes: tuple[int, ...]

    @property
    def largest_class(self) -> int:
        return max(self.class_sizes)


def degeneracy_profile(p: np.ndarray, delta: float) -> DegeneracyProfile:
    """Partition the sorted values into classes of relative spacing < delta.

    Walking down the sorted list, a new class starts whenever the drop to
    the next value is at least ``delta`` relative to the current one. More
    classes mean the ranking distinguishes more nodes; ties collapse into
    large classes.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    values = np.sort(np.asarray(p, dtype=np.float64))[::-1]
    class_sizes = [1]
    for prev, cur in zip(values[:-1], values[1:]):
        starts_class = prev != cur and prev - cur >= delta * abs(prev)
        if starts_class:
            class_sizes.append(1)
        else:
            class_sizes[-1] += 1
    return DegeneracyProfile(len(class_sizes), tuple(class_sizes))


def rank_correlation(a: np.ndarray, b: np.ndarray) -> float:
    """Kendall tau-b between the orderings induced by two value vectors.

    Constant vectors make tau-b undefined (no discriminating pairs); two
    constant vectors count as perfectly agreeing orderings, a constant
    against a non-constant one as uninformative (0).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("inputs must be one-dimensional and of equal length")
    a_const = bool(np.all(a == a[0]))
    b_const = bool(np.all(b == b[0]))
    if a_const or b_const:
        return 1.0 if a_const and b_const else 0.0
    if np.array_equal(a, b):
        return 1.0
    tau = stats.kendalltau(a, b).statistic
    if not np.isfinite(tau):
        return 0.0
    # attainable tau values near +-1 are at least 4/(n(n-1)) apart, so values
    # this close can only be rounding error on an exact +-1
    if abs(abs(tau) - 1.0) < 1e-9:
        return float(np.sign(tau))
    return float(np.clip(tau, -1.0, 1.0))


def _rank_positions(values: np.ndarray) -> np.ndarray:
    """Position of each entry when sorted by descending value, ties by index."""
    order = np.lexsort((np.arange(len(values)), -values))
    positions = np.empty(len(values), dtype=np.int64)
    positions[order] = np.arange(len(values))
    return positions


def top_nodes(values: np.ndarray, k: int) -> tuple[int, ...]:
    """Indices of the k largest values, descending, ties broken by index."""
    order = np.lexsort((np.arange(len(values)), -np.asarray(values)))
    return tuple(int(i) for i in order[:k])


@dataclass(frozen=True, eq=False)
class AttackReport:
    """Effect of removing the top-ranked hubs on the surviving order."""

    removed: tuple[int, ...]
    survivors: tuple[int, ...]
    pre_ranking: np.ndarray  # full-graph values restricted to survivors
    post_ranking: np.ndarray  # reduced-graph values
    correlation: float
    mean_displacement: float


def attack_sensitivity(g: DirectedGraph, k: int, ranker: str = "classical",
                       alpha: float = DEFAULT_ALPHA, steps: int = DEFAULT_STEPS,
                       backend: str = "auto") -> AttackReport:
    """Remove the k top-ranked nodes and compare survivor orderings.

    Ranks the full graph, deletes the k most important nodes, re-ranks the
    reduced graph, and reports Kendall correlation plus the mean absolute
    shift in rank position across survivors.
    """
    if g.node_count < 3:
        raise ValueError("attack analysis needs at least 3 nodes")
    if not 0 <= k < g.node_count:
        raise ValueError(f"k must lie in [0, {g.node_count})")
    full = rank_vector(g, ranker, alpha, steps, backend)
    removed = top_nodes(full, k)
    reduced, survivors = remove_nodes(g, removed)
    post = rank_vector(reduced, ranker, alpha, steps, backend)
    pre = full[list(survivors)]
    correlation = rank_correlation(pre, post)
    displacement = float(np.abs(_rank_positions(pre) - _rank_positions(post)).mean())
    return AttackReport(removed, survivors, pre, post, correlation, displacement)


@dataclass(frozen=True)
class IprScalingPoint:
    size: int
    mean_ipr: float
    std_ipr: float


@dataclass(frozen=True)
class IprScaling:
    """IPR growth against network size over seeded scale-free ensembles."""

    points: tuple[IprScalingPoint, ...]
    slope: float
    localized: bool


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Slope of the least-squares line through (log x, log y)."""
    slope, _ = np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)
    return float(slope)


def ipr_scaling(sizes: Sequence[int], instances: int, ranker: str,
                alpha: float = DEFAULT_ALPHA, seed: int = 0,
                steps: int = DEFAULT_STEPS, backend: str = "auto",
                sublinear_threshold: float = 0.9) -> IprScaling:
    """Mean IPR per network size, with a sublinear-growth diagnosis.

    Generates ``instances`` scale-free graphs per size from a single seed,
    ranks each, and fits the log-log slope of mean IPR against size. A
    slope below ``sublinear_threshold`` is read as a localized walker.
    """
    sizes = [int(n) for n in sizes]
    if len(sizes) < 3:
        raise ValueError("need at least 3 sizes")
    if instances < 5:
        raise ValueError("need at least 5 instances per size")
    instance_seeds = np.random.SeedSequence(seed).generate_state(
        len(sizes) * instances, dtype=np.uint64)
    points = []
    for si, n in enumerate(sizes):
        values = []
        for i in range(instances):
            graph_seed = int(instance_seeds[si * instances + i])
            graph = generate_scale_free(n, graph_seed)
            values.append(ipr(rank_vector(graph, ranker, alpha, steps, backend)))
        points.append(IprScalingPoint(n, float(np.mean(values)), float(np.std(values))))
    slope = loglog_slope([pt.size for pt in points], [pt.mean_ipr for pt in points])
    return IprScaling(tuple(points), slope, slope < sublinear_threshold)
