"""Monte Carlo experiment orchestration.

Trials are independent units dispatched to a bounded thread pool; trial t
draws from the Philox stream keyed (seed, t), and aggregation is by trial
index, so reports are identical for any thread count.  Population risks are
compared against thresholds exactly (Fractions) wherever the inputs are
rational, then stored as floats in the report rows.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .constructions import ConstructedInstance
from .core import (
    ContractError,
    FiniteDistribution,
    HypothesisFamily,
    InstanceSpace,
    LabeledExample,
    PerturbationMap,
    population_robust_risk,
)
from .dimensions import vc
from .learner import LearnerConfig, compression_bound, learn_realizable_report
from .oracles import rerm
from .prng import rng_stream
from .reports import ExperimentReport
from .sampling import draw_sample

__all__ = [
    "ExperimentConfig",
    "ScalingRow",
    "ScalingTable",
    "run_separation_experiment",
    "run_bound_check",
    "run_bounded_k_scaling",
    "make_threshold_window_instance",
    "make_group_adversary_instance",
    "group_adversary_for_k",
]


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved knobs of one experiment run; every field is echoed in reports."""

    m: int
    trials: int
    seed: int = 0
    threads: int = 1
    epsilon: float | Fraction | None = None
    delta: float = 0.05
    improper_budget: int = 64
    instance_source: str | None = None
    learner: str = "compress-boost"

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ContractError(f"trials must be >= 1, got {self.trials}")
        if self.m < 1:
            raise ContractError(f"m must be >= 1, got {self.m}")
        if self.threads < 1:
            raise ContractError(f"threads must be >= 1, got {self.threads}")

    def echo(self, **extra) -> dict:
        doc = {
            "m": self.m,
            "trials": self.trials,
            "seed": self.seed,
            "threads": self.threads,
            "delta": self.delta,
            "improper_budget": self.improper_budget,
            "instance_source": self.instance_source,
            "learner": self.learner,
        }
        if self.epsilon is not None:
            doc["epsilon"] = float(self.epsilon)
        doc.update(extra)
        return doc


def _run_trials(trials: int, threads: int, fn: Callable[[int], object]) -> list:
    if threads <= 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(trials)))


def run_separation_experiment(
    instance: ConstructedInstance, config: ExperimentConfig
) -> tuple[ExperimentReport, ExperimentReport]:
    """Proper (exact RERM) vs improper (compress-boost) arms on one instance.

    Each trial draws a distribution uniformly from the instance's family of
    hard distributions, then an m-point sample for the proper arm and an
    `improper_budget`-point sample for the improper arm.  Reported failures
    are trials whose population robust risk exceeds epsilon (default 1/8).
    """
    if not instance.distributions:
        raise ContractError("separation experiment needs an instance with distributions")
    eps = Fraction(1, 8) if config.epsilon is None else config.epsilon
    dists = instance.distributions
    family = instance.family
    perturbations = instance.perturbations
    n_initial = vc(family).value + 1
    learner_config = LearnerConfig(n_initial=n_initial, seed=config.seed)

    def one_trial(t: int) -> tuple:
        rng = rng_stream(config.seed, t)
        dist = dists[int(rng.integers(len(dists)))]
        proper_sample = draw_sample(dist, config.m, rng)
        proper_pick = rerm(family, proper_sample, perturbations)
        proper_risk = population_robust_risk(family[proper_pick.hypothesis_index], dist, perturbations)
        improper_sample = draw_sample(dist, config.improper_budget, rng)
        report = learn_realizable_report(family, improper_sample, perturbations, learner_config)
        improper_risk = population_robust_risk(report.predictor, dist, perturbations)
        return proper_risk, improper_risk

    start = time.perf_counter()
    rows = _run_trials(config.trials, config.threads, one_trial)
    elapsed = time.perf_counter() - start

    proper_risks = tuple(float(r[0]) for r in rows)
    improper_risks = tuple(float(r[1]) for r in rows)
    proper_failed = tuple(r[0] > eps for r in rows)
    improper_failed = tuple(r[1] > eps for r in rows)
    echo = config.echo(instance=instance.metadata.get("generator"))
    proper = ExperimentReport(
        "separation/proper-rerm", dict(echo, arm="proper"), float(eps),
        proper_risks, proper_failed, wall_clock=elapsed,
    )
    improper = ExperimentReport(
        "separation/improper-compress-boost", dict(echo, arm="improper"), float(eps),
        improper_risks, improper_failed, wall_clock=elapsed,
    )
    return proper, improper


def make_threshold_window_instance(n_points: int = 12) -> ConstructedInstance:
    """Threshold predictors on a line with a +/-1 window adversary.

    h_t labels +1 exactly the points >= t; U(x) is the radius-1 window around
    x.  A labeling by h_t with one point of slack around the threshold is
    robustly realizable, which makes this the stock fixture for compression
    bound checks.
    """
    if n_points < 6:
        raise ContractError(f"need at least 6 points for a nondegenerate window, got {n_points}")
    sets = tuple(
        tuple(z for z in (x - 1, x, x + 1) if 0 <= z < n_points) for x in range(n_points)
    )
    rows = [
        tuple(+1 if x >= t else -1 for x in range(n_points)) for t in range(n_points + 1)
    ]
    return ConstructedInstance(
        space=InstanceSpace(n_points),
        perturbations=PerturbationMap(sets),
        family=HypothesisFamily.from_rows(rows, name=f"thresholds({n_points})"),
        anchors={},
        distributions=None,
        metadata={"generator": "threshold_window", "n_points": n_points},
    )


def _random_threshold_distribution(
    instance: ConstructedInstance, rng: np.random.Generator
) -> FiniteDistribution:
    n = instance.space.size
    t_star = int(rng.integers(2, n - 1))
    support = [LabeledExample(x, -1) for x in range(0, t_star - 1)]
    support += [LabeledExample(x, +1) for x in range(t_star + 1, n)]
    while True:
        probs = rng.dirichlet(np.ones(len(support)))
        if probs.min() > 0.0:
            break
    return FiniteDistribution(tuple(zip(support, (float(p) for p in probs))))


def run_bound_check(
    config: ExperimentConfig,
    k: int = 3,
    instance: ConstructedInstance | None = None,
    enforce: bool = True,
) -> ExperimentReport:
    """Frequency of compression-bound violations over realizable trials.

    Each trial builds a random robustly realizable distribution on the
    threshold-window fixture, draws m points, learns with subset size 1 and
    at most 3 sparsified voters (compression size <= k = 3), and flags the
    trial when the population robust risk exceeds the bound at (k, m, delta).
    Trials whose realized compression exceeds k are counted as violations,
    conservatively.  With `enforce` set, a violation rate beyond
    delta + 3 sigma Monte Carlo slack raises.
    """
    inst = instance if instance is not None else make_threshold_window_instance()
    eps = compression_bound(k, config.m, config.delta) if config.epsilon is None else float(config.epsilon)
    learner_config = LearnerConfig(n_initial=1, N_sparsify=k, seed=config.seed)

    def one_trial(t: int) -> tuple[float, bool]:
        rng = rng_stream(config.seed, t)
        dist = _random_threshold_distribution(inst, rng)
        sample = draw_sample(dist, config.m, rng)
        report = learn_realizable_report(inst.family, sample, inst.perturbations, learner_config)
        risk = float(population_robust_risk(report.predictor, dist, inst.perturbations))
        failed = risk > eps or report.compression_size > k
        return risk, failed

    start = time.perf_counter()
    rows = _run_trials(config.trials, config.threads, one_trial)
    elapsed = time.perf_counter() - start
    report = ExperimentReport(
        "compression-bound-check",
        config.echo(k=k, instance=inst.metadata.get("generator")),
        eps,
        tuple(r[0] for r in rows),
        tuple(r[1] for r in rows),
        wall_clock=elapsed,
    )
    if enforce:
        slack = config.delta + 3.0 * math.sqrt(
            config.delta * (1.0 - config.delta) / config.trials
        )
        if float(report.failure_frequency) > slack:
            raise RuntimeError(
                f"compression bound violated too often: rate "
                f"{float(report.failure_frequency):.4f} > delta + 3 sigma = {slack:.4f}"
            )
    return report


def make_group_adversary_instance(groups: int = 4, k_max: int = 16) -> ConstructedInstance:
    """Fixed family of group labelings; the adversary's reach scales separately.

    Each group has one center and k_max - 1 satellites.  Members label whole
    groups and flip at most two of them to -1, so the VC dimension is exactly
    2 no matter which adversary radius is used.  Pair with
    :func:`group_adversary_for_k` to get max |U(x)| = k at fixed family.
    """
    if groups < 3:
        raise ContractError(f"need >= 3 groups for vc exactly 2, got {groups}")
    if k_max < 1:
        raise ContractError(f"k_max must be >= 1, got {k_max}")
    size = groups * k_max
    rows = []
    flips: list[tuple[int, ...]] = [()]
    flips += [(g,) for g in range(groups)]
    flips += list(
        (i, j) for i in range(groups) for j in range(i + 1, groups)
    )
    for flip in flips:
        row = [+1] * size
        for g in flip:
            for z in range(g * k_max, (g + 1) * k_max):
                row[z] = -1
        rows.append(tuple(row))
    return ConstructedInstance(
        space=InstanceSpace(size),
        perturbations=PerturbationMap.identity(size),
        family=HypothesisFamily.from_rows(rows, name=f"group-flips({groups}x{k_max})"),
        anchors={"centers": tuple(g * k_max for g in range(groups))},
        distributions=None,
        metadata={"generator": "group_adversary", "groups": groups, "k_max": k_max},
    )


def group_adversary_for_k(instance: ConstructedInstance, k: int) -> PerturbationMap:
    """Adversary moving each center to its first k-1 satellites: max |U(x)| = k."""
    groups = instance.metadata["groups"]
    k_max = instance.metadata["k_max"]
    if not 1 <= k <= k_max:
        raise ContractError(f"k={k} must lie in [1, {k_max}]")
    sets = [(x,) for x in range(instance.space.size)]
    for g in range(groups):
        center = g * k_max
        sets[center] = tuple(range(center, center + k))
    return PerturbationMap(tuple(sets))


@dataclass(frozen=True)
class ScalingRow:
    k: int
    trials: int
    m: int
    mean_inflated: float
    mean_discretized: float
    max_discretized: int
    mk_bound: int
    mean_rounds: float
    mean_n: float
    mean_compression: float
    max_compression: int


@dataclass(frozen=True)
class ScalingTable:
    rows: tuple[ScalingRow, ...]

    def to_csv(self) -> str:
        header = (
            "k,trials,m,mean_inflated,mean_discretized,max_discretized,mk_bound,"
            "mean_rounds,mean_n,mean_compression,max_compression"
        )
        lines = [header]
        for r in self.rows:
            lines.append(
                f"{r.k},{r.trials},{r.m},{r.mean_inflated!r},{r.mean_discretized!r},"
                f"{r.max_discretized},{r.mk_bound},{r.mean_rounds!r},{r.mean_n!r},"
                f"{r.mean_compression!r},{r.max_compression}"
            )
        return "\n".join(lines) + "\n"


def run_bounded_k_scaling(
    k_list: Sequence[int],
    config: ExperimentConfig,
    groups: int = 4,
) -> ScalingTable:
    """Pipeline sizes versus adversary reach k, at a fixed family with vc = 2.

    For each k the same family faces an adversary with max |U(x)| = k; the
    table records the discretized-set size (bounded by m*k) and the
    pre-sparsification compression size n*T per trial.
    """
    if not k_list:
        raise ContractError("k_list must be nonempty")
    k_max = max(k_list)
    instance = make_group_adversary_instance(groups=groups, k_max=k_max)
    centers = instance.anchors["centers"]
    negatives = centers[:2]
    labels = [(-1 if c in negatives else +1) for c in centers]
    dist = FiniteDistribution.uniform(
        [LabeledExample(c, lab) for c, lab in zip(centers, labels)]
    )
    learner_config = LearnerConfig(n_initial=3, seed=config.seed)

    rows = []
    for k in k_list:
        perturbations = group_adversary_for_k(instance, k)

        def one_trial(t: int) -> tuple[int, int, int, int]:
            rng = rng_stream(config.seed, t)
            sample = draw_sample(dist, config.m, rng)
            report = learn_realizable_report(instance.family, sample, perturbations, learner_config)
            return report.inflated_size, report.discretized_size, report.rounds, report.n_used

        outcomes = _run_trials(config.trials, config.threads, one_trial)
        inflated = [o[0] for o in outcomes]
        sizes = [o[1] for o in outcomes]
        rounds = [o[2] for o in outcomes]
        ns = [o[3] for o in outcomes]
        compressions = [n * r for n, r in zip(ns, rounds)]
        rows.append(
            ScalingRow(
                k=k,
                trials=config.trials,
                m=config.m,
                mean_inflated=sum(inflated) / len(inflated),
                mean_discretized=sum(sizes) / len(sizes),
                max_discretized=max(sizes),
                mk_bound=config.m * k,
                mean_rounds=sum(rounds) / len(rounds),
                mean_n=sum(ns) / len(ns),
                mean_compression=sum(compressions) / len(compressions),
                max_compression=max(compressions),
            )
        )
    return ScalingTable(tuple(rows))
