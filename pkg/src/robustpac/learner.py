"""The improper realizable learner: compression-boosting over oracle candidates.

Pipeline: generate candidate predictors by running the exact robust-ERM oracle
on every size-n subsequence of the sample, inflate the sample to all
perturbation points with min-index labels, discretize the inflation down to
one representative per candidate error pattern, boost weak candidates by
multiplicative weights until every representative has vote margin >= 5/9,
then sparsify the ensemble to a few voters while preserving strict majority
correctness.  Each surviving voter carries the sample indices that
reconstruct it, so the final majority vote is a sample compression scheme
and the compression generalization bound applies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Sized

import numpy as np

from .core import (
    ContractError,
    Hypothesis,
    HypothesisFamily,
    MajorityVotePredictor,
    PerturbationMap,
    Sample,
    empirical_robust_risk,
)
from .dimensions import dual_vc, vc
from .oracles import rerm
from .prng import rng_stream

__all__ = [
    "LearnerConfig",
    "InflatedExample",
    "DiscretizedSet",
    "CandidateSet",
    "BoostResult",
    "RealizableRunReport",
    "WeakLearnerFailure",
    "BoostingFailure",
    "build_candidates",
    "inflate",
    "discretize",
    "weak_learn",
    "alpha_boost",
    "sparsify",
    "learn_realizable",
    "learn_realizable_report",
    "compression_bound",
]

WEAK_ERROR_BOUND = 1.0 / 3.0
CANDIDATE_ENUMERATION_LIMIT = 500_000


class WeakLearnerFailure(RuntimeError):
    """No candidate achieved weighted error below 1/3: n is too small."""

    def __init__(self, min_error: float):
        super().__init__(
            f"no candidate has weighted error < 1/3 (best = {min_error:.6f}); "
            "the candidate subset size n is too small"
        )
        self.min_error = min_error


class BoostingFailure(RuntimeError):
    """The round cap was reached before every point met the margin target."""

    def __init__(self, achieved_margin: Fraction, rounds: int):
        super().__init__(
            f"margin target not reached after {rounds} rounds "
            f"(achieved min margin {achieved_margin})"
        )
        self.achieved_margin = achieved_margin
        self.rounds = rounds


@dataclass(frozen=True)
class LearnerConfig:
    """Knobs of the compression-boosting pipeline.

    `n_initial` defaults to vc(family)+1 and doubles on weak-learner failure,
    never exceeding the sample size.  `margin_target` 5/9 leaves the 1/18
    sparsification slack above 1/2.  `T_max` and `N_sparsify` default to
    ceil(1 + 48 ln |discretized|) + 10 and to the candidate family's dual VC
    dimension (minimum 3, forced odd).
    """

    n_initial: int | None = None
    n_growth: int = 2
    alpha: float = 0.125
    margin_target: Fraction = Fraction(5, 9)
    T_max: int | None = None
    N_sparsify: int | None = None
    sparsify_attempts: int = 100
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 0.5:
            raise ContractError(f"alpha must lie in (0, 1/2), got {self.alpha}")
        if not Fraction(1, 2) < Fraction(self.margin_target) <= 1:
            raise ContractError(f"margin target must lie in (1/2, 1], got {self.margin_target}")
        for name in ("n_initial", "n_growth", "T_max", "N_sparsify", "sparsify_attempts"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ContractError(f"{name} must be >= 1, got {value}")


@dataclass(frozen=True)
class InflatedExample:
    """A perturbation point z with the label of its min-index owning example."""

    point: int
    label: int
    owner: int


@dataclass(frozen=True)
class CandidateSet:
    """Deduplicated oracle outputs over size-n subsequences, with provenance.

    `provenance[i]` is the lexicographically first ordered index tuple whose
    subsequence reproduces candidate i through the oracle.
    """

    family: HypothesisFamily
    provenance: tuple[tuple[int, ...], ...]
    subset_size: int

    def __len__(self) -> int:
        return len(self.family)


@dataclass(frozen=True)
class DiscretizedSet:
    """One representative inflated example per distinct candidate error pattern."""

    representatives: tuple[InflatedExample, ...]
    pattern_index: dict[tuple[int, ...], int] = field(compare=False)
    wrong: np.ndarray = field(compare=False)  # (candidates, representatives) bool

    def __len__(self) -> int:
        return len(self.representatives)

    def points(self) -> np.ndarray:
        return np.asarray([e.point for e in self.representatives], dtype=np.intp)

    def labels(self) -> np.ndarray:
        return np.asarray([e.label for e in self.representatives], dtype=np.int8)


@dataclass(frozen=True)
class BoostResult:
    voter_ids: tuple[int, ...]
    correct: np.ndarray  # (rounds, points) bool
    min_margin: Fraction

    @property
    def rounds(self) -> int:
        return len(self.voter_ids)


@dataclass(frozen=True)
class RealizableRunReport:
    """Diagnostics of one realizable run (the predictor plus pipeline sizes)."""

    predictor: MajorityVotePredictor
    n_used: int
    inflated_size: int
    discretized_size: int
    rounds: int
    min_margin: Fraction
    sparsified_to: int

    @property
    def compression_size(self) -> int:
        return self.predictor.compression_size

    @property
    def pre_sparsification_size(self) -> int:
        return self.n_used * self.rounds


def _robust_wrong_by_content(
    family: HypothesisFamily,
    contents: Sequence[tuple[int, int]],
    perturbations: PerturbationMap,
) -> np.ndarray:
    """(members, contents) bool: member robustly errs on the (point, label) pair."""
    matrix = family.matrix
    cols = []
    for point, label in contents:
        ball = np.asarray(perturbations[point], dtype=np.intp)
        cols.append((matrix[:, ball] != label).any(axis=1))
    return np.column_stack(cols)


def build_candidates(
    family: HypothesisFamily,
    sample: Sample,
    perturbations: PerturbationMap,
    n: int,
) -> CandidateSet:
    """Oracle outputs over all size-n subsequences, deduplicated.

    Subsequences with equal example multisets share one oracle call; the
    provenance kept for each distinct candidate is the lexicographically
    first index tuple that produces it, so results match a naive scan over
    all C(m, n) index combinations.
    """
    m = len(sample)
    if not 1 <= n <= m:
        raise ContractError(f"subset size n={n} must lie in [1, {m}]")
    content_order: list[tuple[int, int]] = []
    content_id: dict[tuple[int, int], int] = {}
    counts: list[int] = []
    per_index: list[int] = []
    for example in sample:
        key = example.key()
        if key not in content_id:
            content_id[key] = len(content_order)
            content_order.append(key)
            counts.append(0)
        counts[content_id[key]] += 1
        per_index.append(content_id[key])

    wrong = _robust_wrong_by_content(family, content_order, perturbations)
    d = len(content_order)

    multisets: list[tuple[int, ...]] = []
    available_after = [0] * (d + 1)
    for slot in range(d - 1, -1, -1):
        available_after[slot] = available_after[slot + 1] + counts[slot]

    def fill(slot: int, remaining: int, chosen: list[int]) -> None:
        if remaining == 0:
            multisets.append(tuple(chosen + [0] * (d - slot)))
            if len(multisets) > CANDIDATE_ENUMERATION_LIMIT:
                raise ContractError("candidate subset enumeration exceeds the desk-scale limit")
            return
        if slot == d or remaining > available_after[slot]:
            return
        for k in range(min(counts[slot], remaining), -1, -1):
            fill(slot + 1, remaining - k, chosen + [k])

    fill(0, n, [])

    entries: list[tuple[tuple[int, ...], int]] = []
    for multiset in multisets:
        need = list(multiset)
        indices: list[int] = []
        for i, cid in enumerate(per_index):
            if need[cid] > 0:
                need[cid] -= 1
                indices.append(i)
                if len(indices) == n:
                    break
        weights = np.asarray(multiset, dtype=np.int64)
        mistakes = wrong @ weights
        entries.append((tuple(indices), int(np.argmin(mistakes))))

    entries.sort(key=lambda e: e[0])
    members: list[Hypothesis] = []
    provenance: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    for indices, member in entries:
        labels = family[member].labels
        if labels in seen:
            continue
        seen.add(labels)
        members.append(family[member])
        provenance.append(indices)
    return CandidateSet(
        HypothesisFamily(tuple(members), name=f"candidates(n={n})"),
        tuple(provenance),
        n,
    )


def inflate(sample: Sample, perturbations: PerturbationMap) -> tuple[InflatedExample, ...]:
    """Expand the sample to all perturbation points, labeled by min-index owner.

    Exactly one entry per point of the union of the perturbation sets; a point
    reachable from several examples takes the label of the earliest one.
    Output is sorted by point id.
    """
    if len(sample) == 0:
        raise ContractError("inflation requires a nonempty sample")
    owner_of: dict[int, InflatedExample] = {}
    for i, example in enumerate(sample):
        for z in perturbations[example.point]:
            if z not in owner_of:
                owner_of[z] = InflatedExample(z, example.label, i)
    return tuple(owner_of[z] for z in sorted(owner_of))


def discretize(
    inflated: Sequence[InflatedExample], candidates: CandidateSet | HypothesisFamily
) -> DiscretizedSet:
    """Keep one inflated example per distinct candidate error pattern.

    The representative of a pattern is the lexicographically smallest
    (point, label) achieving it; any representative works since the majority
    margin only depends on the pattern.
    """
    family = candidates.family if isinstance(candidates, CandidateSet) else candidates
    if len(family) == 0:
        raise ContractError("discretization requires a nonempty candidate set")
    ordered = sorted(inflated, key=lambda e: (e.point, e.label))
    matrix = family.matrix
    points = np.asarray([e.point for e in ordered], dtype=np.intp)
    labels = np.asarray([e.label for e in ordered], dtype=np.int8)
    wrong_full = matrix[:, points] != labels[np.newaxis, :]
    pattern_index: dict[tuple[int, ...], int] = {}
    reps: list[InflatedExample] = []
    columns: list[int] = []
    for j, example in enumerate(ordered):
        pattern = tuple(int(b) for b in wrong_full[:, j])
        if pattern not in pattern_index:
            pattern_index[pattern] = len(reps)
            reps.append(example)
            columns.append(j)
    wrong = wrong_full[:, columns]
    wrong.setflags(write=False)
    return DiscretizedSet(tuple(reps), pattern_index, wrong)


def weak_learn(
    candidates: CandidateSet | HypothesisFamily,
    points: Sequence[InflatedExample],
    dist: np.ndarray,
) -> int:
    """Lowest-index candidate minimizing the dist-weighted error on the points.

    Raises WeakLearnerFailure when even the best candidate has error >= 1/3,
    which signals the caller to grow the candidate subset size.
    """
    family = candidates.family if isinstance(candidates, CandidateSet) else candidates
    matrix = family.matrix
    pts = np.asarray([e.point for e in points], dtype=np.intp)
    labs = np.asarray([e.label for e in points], dtype=np.int8)
    wrong = matrix[:, pts] != labs[np.newaxis, :]
    errors = wrong @ np.asarray(dist, dtype=np.float64)
    index = int(np.argmin(errors))
    if errors[index] >= WEAK_ERROR_BOUND:
        raise WeakLearnerFailure(float(errors[index]))
    return index


def alpha_boost(
    points: Sized,
    weak: Callable[[np.ndarray], tuple[object, np.ndarray]],
    alpha: float = 0.125,
    margin_target: Fraction | None = Fraction(5, 9),
    T_max: int | None = None,
) -> BoostResult:
    """Multiplicative-weights boosting from the uniform distribution.

    `weak(dist)` must return (voter id, boolean per-point correctness) and
    raise WeakLearnerFailure when it cannot achieve error below 1/3.  Weights
    update by exp(-2 alpha) on points the round's voter gets right.  With
    margin_target set, stops at the first round where every point's exact
    vote margin reaches the target and raises BoostingFailure at T_max
    otherwise; with margin_target None, runs exactly T_max rounds.
    """
    n_points = len(points)
    if n_points < 1:
        raise ContractError("boosting requires a nonempty point set")
    if T_max is None:
        T_max = default_round_cap(n_points)
    dist = np.full(n_points, 1.0 / n_points)
    counts = np.zeros(n_points, dtype=np.int64)
    ids: list[object] = []
    rows: list[np.ndarray] = []
    margin = Fraction(0)
    for t in range(1, T_max + 1):
        voter_id, correct = weak(dist)
        correct = np.asarray(correct, dtype=bool)
        ids.append(voter_id)
        rows.append(correct)
        counts += correct
        margin = Fraction(int(counts.min()), t)
        if margin_target is not None and margin >= margin_target:
            return BoostResult(tuple(ids), np.array(rows), margin)
        dist = dist * np.exp(-2.0 * alpha * correct)
        dist = dist / dist.sum()
    if margin_target is None:
        return BoostResult(tuple(ids), np.array(rows), margin)
    raise BoostingFailure(margin, T_max)


def default_round_cap(n_points: int) -> int:
    """Round ceiling ceil(1 + 48 ln |points|) + 10 used by the realizable path."""
    return math.ceil(1.0 + 48.0 * math.log(max(n_points, 1))) + 10


def sparsify(
    voters: Sequence[Hypothesis],
    points: DiscretizedSet,
    N: int,
    seed: int = 0,
    attempts: int = 100,
) -> tuple[int, ...]:
    """Indices (with replacement) whose majority stays strictly correct everywhere.

    Requires the full ensemble to hold a strict majority on every discretized
    point (guaranteed upstream by the 5/9 margin, which leaves 1/18 slack over
    1/2).  Retries fresh seeded draws up to `attempts`, then falls back to the
    full voter list, which satisfies the property by the precondition.
    """
    T = len(voters)
    if T == 0:
        raise ContractError("sparsification requires at least one voter")
    pts = points.points()
    labs = points.labels()
    correct = np.array([v.labels_at(pts) == labs for v in voters])
    totals = correct.sum(axis=0)
    if not np.all(2 * totals > T):
        raise ContractError(
            "voters lack a strict majority on some discretized point; "
            "the margin precondition of sparsification is violated"
        )
    if T == 1:
        return (0,)
    rng = rng_stream(seed)
    for _ in range(attempts):
        draw = rng.integers(0, T, size=N)
        votes = correct[draw].sum(axis=0)
        if np.all(2 * votes > N):
            return tuple(int(i) for i in draw)
    return tuple(range(T))


def _first_unrealizable_index(
    family: HypothesisFamily, sample: Sample, perturbations: PerturbationMap
) -> int | None:
    """Index i such that sample[:i+1] has no robustly consistent member, or None."""
    matrix = family.matrix
    alive = np.ones(len(family), dtype=bool)
    for i, example in enumerate(sample):
        ball = np.asarray(perturbations[example.point], dtype=np.intp)
        alive &= (matrix[:, ball] == example.label).all(axis=1)
        if not alive.any():
            return i
    return None


def learn_realizable_report(
    family: HypothesisFamily,
    sample: Sample,
    perturbations: PerturbationMap,
    config: LearnerConfig | None = None,
) -> RealizableRunReport:
    """Full pipeline run returning the predictor plus per-stage diagnostics."""
    config = config or LearnerConfig()
    if len(sample) == 0:
        raise ContractError("learning requires a nonempty sample")
    offending = _first_unrealizable_index(family, sample, perturbations)
    if offending is not None:
        example = sample[offending]
        raise ContractError(
            f"sample is not robustly realizable: no member is robustly correct on "
            f"examples 0..{offending}; offending example {offending} is "
            f"(point={example.point}, label={example.label:+d})"
        )

    m = len(sample)
    n0 = config.n_initial if config.n_initial is not None else vc(family).value + 1
    if m <= n0:
        result = rerm(family, sample, perturbations)
        predictor = MajorityVotePredictor(
            (family[result.hypothesis_index],), (tuple(range(m)),)
        )
        return RealizableRunReport(
            predictor=predictor,
            n_used=m,
            inflated_size=len(inflate(sample, perturbations)),
            discretized_size=1,
            rounds=1,
            min_margin=Fraction(1),
            sparsified_to=1,
        )

    inflated = inflate(sample, perturbations)
    n = n0
    while True:
        candidates = build_candidates(family, sample, perturbations, n)
        disc = discretize(inflated, candidates)
        round_cap = config.T_max if config.T_max is not None else default_round_cap(len(disc))
        wrong = disc.wrong

        def weak(dist: np.ndarray, wrong: np.ndarray = wrong) -> tuple[int, np.ndarray]:
            errors = wrong @ dist
            index = int(np.argmin(errors))
            if errors[index] >= WEAK_ERROR_BOUND:
                raise WeakLearnerFailure(float(errors[index]))
            return index, ~wrong[index]

        try:
            boost = alpha_boost(
                disc.representatives,
                weak,
                alpha=config.alpha,
                margin_target=config.margin_target,
                T_max=round_cap,
            )
            break
        except WeakLearnerFailure:
            if n >= m:
                raise
            n = min(m, max(n + 1, n * config.n_growth))

    if config.N_sparsify is not None:
        n_sparse = config.N_sparsify
    else:
        n_sparse = max(3, dual_vc(candidates.family).value)
        if n_sparse % 2 == 0:
            n_sparse += 1
    voter_hyps = [candidates.family[i] for i in boost.voter_ids]
    chosen = sparsify(
        voter_hyps, disc, n_sparse, seed=config.seed, attempts=config.sparsify_attempts
    )
    voters = tuple(voter_hyps[j] for j in chosen)
    provenance = tuple(candidates.provenance[boost.voter_ids[j]] for j in chosen)
    predictor = MajorityVotePredictor(voters, provenance)
    risk = empirical_robust_risk(predictor, sample, perturbations)
    if risk != 0:
        raise RuntimeError(f"pipeline produced nonzero empirical robust risk {risk}")
    return RealizableRunReport(
        predictor=predictor,
        n_used=n,
        inflated_size=len(inflated),
        discretized_size=len(disc),
        rounds=boost.rounds,
        min_margin=boost.min_margin,
        sparsified_to=len(chosen),
    )


def learn_realizable(
    family: HypothesisFamily,
    sample: Sample,
    perturbations: PerturbationMap,
    config: LearnerConfig | None = None,
) -> MajorityVotePredictor:
    """Majority-vote predictor with empirical robust risk 0 on the sample."""
    return learn_realizable_report(family, sample, perturbations, config).predictor


def compression_bound(k: int, m: int, delta: float) -> float:
    """Generalization bound (k ln m + ln(1/delta)) / (m - k) for size-k compressions."""
    if not (isinstance(k, int) and isinstance(m, int)) or not m > k >= 1:
        raise ContractError(f"compression bound requires integers m > k >= 1, got k={k}, m={m}")
    if not 0 < delta < 1:
        raise ContractError(f"delta must lie in (0, 1), got {delta}")
    return (k * math.log(m) + math.log(1.0 / delta)) / (m - k)
