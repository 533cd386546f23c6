"""Agnostic-to-realizable reduction: boost weak robust learners on a maximal core.

Extract the largest subsequence of the data on which some family member has
zero empirical robust risk, then run multiplicative-weights boosting on that
core with the robust loss (step alpha = 1/8, exactly 1 + ceil(48 ln |core|)
rounds).  The resulting majority vote has vote margin above 1/2 on every core
example, hence zero robust mistakes there, and therefore empirical robust
risk on the full sample no worse than the best member of the family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    ContractError,
    Hypothesis,
    HypothesisFamily,
    MajorityVotePredictor,
    PerturbationMap,
    Sample,
)
from .dimensions import vc
from .learner import (
    LearnerConfig,
    WeakLearnerFailure,
    alpha_boost,
    build_candidates,
    _robust_wrong_by_content,
)

__all__ = [
    "RealizableCore",
    "max_realizable_subsequence",
    "learn_agnostic",
    "agnostic_bound",
    "agnostic_round_count",
]

WEAK_ROBUST_ERROR_BOUND = 1.0 / 3.0


@dataclass(frozen=True)
class RealizableCore:
    """Indices of a robustly realizable subsequence of the input sample.

    When `exact` is set the subsequence is maximal: no strictly larger
    subsequence admits a member with zero empirical robust risk.
    """

    indices: tuple[int, ...]
    exact: bool


def max_realizable_subsequence(
    family: HypothesisFamily,
    sample: Sample,
    perturbations: PerturbationMap,
    mode: str = "exact",
) -> RealizableCore:
    """Largest subsequence on which the robust loss can be zero.

    Exact mode scans per member: a set of examples is realizable iff a single
    member robustly covers all of them, so the maximal core is the largest
    per-member coverage set (lowest member index on ties).  Greedy mode keeps
    each example whose addition preserves realizability of the kept prefix;
    it is reserved for families given only implicitly and may be suboptimal.
    """
    if len(sample) == 0:
        raise ContractError("core extraction requires a nonempty sample")
    matrix = family.matrix
    covered = np.zeros((len(family), len(sample)), dtype=bool)
    for j, example in enumerate(sample):
        ball = np.asarray(perturbations[example.point], dtype=np.intp)
        covered[:, j] = (matrix[:, ball] == example.label).all(axis=1)
    if mode == "exact":
        totals = covered.sum(axis=1)
        best = int(np.argmax(totals))
        indices = tuple(int(j) for j in np.flatnonzero(covered[best]))
        return RealizableCore(indices, exact=True)
    if mode == "greedy":
        alive = np.ones(len(family), dtype=bool)
        kept: list[int] = []
        for j in range(len(sample)):
            narrowed = alive & covered[:, j]
            if narrowed.any():
                alive = narrowed
                kept.append(j)
        return RealizableCore(tuple(kept), exact=False)
    raise ContractError(f"mode must be 'exact' or 'greedy', got {mode!r}")


def agnostic_round_count(core_size: int) -> int:
    """Boosting rounds 1 + ceil(48 ln |core|) used by the agnostic reduction."""
    return 1 + math.ceil(48.0 * math.log(max(core_size, 1)))


def learn_agnostic(
    family: HypothesisFamily,
    sample: Sample,
    perturbations: PerturbationMap,
    config: LearnerConfig | None = None,
) -> MajorityVotePredictor:
    """Boost weak robust learners on the maximal realizable core.

    Returns a majority vote whose empirical robust risk on the full sample is
    at most the best achievable within the family.  A sample with an empty
    core (no example is robustly satisfiable by any member) yields the
    constant +1 predictor flagged "empty-realizable-core".
    """
    config = config or LearnerConfig()
    if len(sample) == 0:
        raise ContractError("agnostic learning requires a nonempty sample")
    core = max_realizable_subsequence(family, sample, perturbations, mode="exact")
    if not core.indices:
        return MajorityVotePredictor(
            (Hypothesis.constant(family.space_size, +1),),
            ((),),
            flags=("empty-realizable-core",),
        )

    seen: set[tuple[int, int]] = set()
    kept_original: list[int] = []
    for j in core.indices:
        key = sample[j].key()
        if key not in seen:
            seen.add(key)
            kept_original.append(j)
    core_sample = Sample(tuple(sample[j] for j in kept_original))
    core_contents = [e.key() for e in core_sample]

    rounds = agnostic_round_count(len(core_sample))
    n0 = config.n_initial if config.n_initial is not None else vc(family).value + 1
    n = min(n0, len(core_sample))
    while True:
        candidates = build_candidates(family, core_sample, perturbations, n)
        wrong = _robust_wrong_by_content(candidates.family, core_contents, perturbations)

        def weak(dist: np.ndarray, wrong: np.ndarray = wrong) -> tuple[int, np.ndarray]:
            errors = wrong @ dist
            index = int(np.argmin(errors))
            if errors[index] > WEAK_ROBUST_ERROR_BOUND:
                raise WeakLearnerFailure(float(errors[index]))
            return index, ~wrong[index]

        try:
            boost = alpha_boost(
                core_sample, weak, alpha=config.alpha, margin_target=None, T_max=rounds
            )
            break
        except WeakLearnerFailure:
            if n >= len(core_sample):
                raise
            n = min(len(core_sample), max(n + 1, n * config.n_growth))

    if boost.min_margin <= Fraction(1, 2):
        raise RuntimeError(
            f"agnostic boosting ended with margin {boost.min_margin} <= 1/2 on the core"
        )
    voters = tuple(candidates.family[i] for i in boost.voter_ids)
    provenance = tuple(
        tuple(kept_original[j] for j in candidates.provenance[i]) for i in boost.voter_ids
    )
    return MajorityVotePredictor(voters, provenance)


def agnostic_bound(sc_re: int, m: int, delta: float) -> float:
    """Excess-risk term 2 sqrt((sc_re T_m ln m + ln(2/delta)) / m), T_m = 1 + 48 ln m.

    `sc_re` is the realizable sample complexity at accuracy and confidence
    1/3, supplied by the caller; this function only evaluates the bound.
    """
    if sc_re < 1:
        raise ContractError(f"sc_re must be >= 1, got {sc_re}")
    if not 0 < delta < 1:
        raise ContractError(f"delta must lie in (0, 1), got {delta}")
    t_m = 1.0 + 48.0 * math.log(m)
    if m < 2 * sc_re * t_m:
        raise ContractError(
            f"bound requires m >= 2 * sc_re * (1 + 48 ln m) = {2 * sc_re * t_m:.1f}, got m={m}"
        )
    return 2.0 * math.sqrt((sc_re * t_m * math.log(m) + math.log(2.0 / delta)) / m)
