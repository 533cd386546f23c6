"""Domain types and exact loss/risk computations for the robust 0-1 setting.

Everything here is finite and exact: instance spaces are index sets
0..size-1, hypotheses are total +1/-1 labelings, and an adversary is an
explicit nonempty set of allowed perturbations per point.  Empirical risks
are returned as `fractions.Fraction`; population risks stay rational
whenever the distribution's probabilities are rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

__all__ = [
    "ContractError",
    "StructuralError",
    "InstanceSpace",
    "PerturbationMap",
    "Hypothesis",
    "HypothesisFamily",
    "LabeledExample",
    "Sample",
    "FiniteDistribution",
    "MajorityVotePredictor",
    "Predictor",
    "robust_loss",
    "empirical_robust_risk",
    "population_robust_risk",
    "standard_loss",
    "empirical_error",
    "population_error",
    "check_self_containment",
]

PROB_TOLERANCE = 1e-12

Probability = Union[Fraction, float]


class StructuralError(ValueError):
    """Malformed data: indices out of range, bad labels, inconsistent sizes."""


class ContractError(ValueError):
    """A documented precondition was violated by the caller."""


def _check_label(value: int) -> int:
    if value not in (+1, -1):
        raise StructuralError(f"label must be +1 or -1, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class InstanceSpace:
    """A finite set of points identified by index 0..size-1."""

    size: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise StructuralError(f"instance space must have size >= 1, got {self.size}")

    def __contains__(self, point: int) -> bool:
        return 0 <= point < self.size


@dataclass(frozen=True)
class PerturbationMap:
    """The adversary: for each point, the nonempty set of allowed perturbations.

    Note that x in U(x) is deliberately NOT required; use
    :func:`check_self_containment` to opt into that extra validation.
    """

    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        canonical = []
        for x, s in enumerate(self.sets):
            members = tuple(sorted(set(int(z) for z in s)))
            if not members:
                raise StructuralError(f"perturbation set of point {x} is empty")
            if members[0] < 0 or members[-1] >= len(self.sets):
                raise StructuralError(
                    f"perturbation set of point {x} leaves the instance space: {members}"
                )
            canonical.append(members)
        object.__setattr__(self, "sets", tuple(canonical))

    @classmethod
    def identity(cls, size: int) -> "PerturbationMap":
        """U(x) = {x}: the adversary that cannot move anything."""
        return cls(tuple((x,) for x in range(size)))

    @property
    def size(self) -> int:
        return len(self.sets)

    @property
    def max_set_size(self) -> int:
        return max(len(s) for s in self.sets)

    def __getitem__(self, point: int) -> tuple[int, ...]:
        if not 0 <= point < len(self.sets):
            raise StructuralError(f"point {point} outside instance space of size {self.size}")
        return self.sets[point]

    def arrays(self) -> list[np.ndarray]:
        return [np.asarray(s, dtype=np.intp) for s in self.sets]


def check_self_containment(perturbations: PerturbationMap) -> None:
    """Opt-in validator: raise unless x in U(x) for every point."""
    for x, s in enumerate(perturbations.sets):
        if x not in s:
            raise StructuralError(f"perturbation set of point {x} does not contain the point itself")


@dataclass(frozen=True)
class Hypothesis:
    """A total +1/-1 labeling of the instance space."""

    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(_check_label(v) for v in self.labels))
        if not self.labels:
            raise StructuralError("hypothesis must label a nonempty instance space")

    @classmethod
    def constant(cls, size: int, label: int) -> "Hypothesis":
        return cls((label,) * size)

    @property
    def size(self) -> int:
        return len(self.labels)

    def label_of(self, point: int) -> int:
        if not 0 <= point < len(self.labels):
            raise StructuralError(f"point {point} outside instance space of size {len(self.labels)}")
        return self.labels[point]

    def labels_at(self, points: Sequence[int]) -> np.ndarray:
        arr = np.asarray(self.labels, dtype=np.int8)
        return arr[np.asarray(points, dtype=np.intp)]


@dataclass(frozen=True)
class HypothesisFamily:
    """A finite ordered hypothesis class; the index is the canonical tie-break key."""

    members: tuple[Hypothesis, ...]
    name: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise StructuralError("hypothesis family must be nonempty")
        size = self.members[0].size
        seen = set()
        for h in self.members:
            if h.size != size:
                raise StructuralError("family members must share one instance space")
            if h.labels in seen:
                raise StructuralError("family members must be pairwise distinct label sequences")
            seen.add(h.labels)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], name: str | None = None) -> "HypothesisFamily":
        return cls(tuple(Hypothesis(tuple(r)) for r in rows), name=name)

    @classmethod
    def full_cube(cls, size: int, name: str | None = None) -> "HypothesisFamily":
        """All 2^size labelings of the space (desk-scale sizes only)."""
        rows = []
        for bits in range(2 ** size):
            rows.append(tuple(+1 if (bits >> i) & 1 == 0 else -1 for i in range(size)))
        return cls.from_rows(rows, name=name)

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, index: int) -> Hypothesis:
        return self.members[index]

    def __iter__(self) -> Iterator[Hypothesis]:
        return iter(self.members)

    @property
    def space_size(self) -> int:
        return self.members[0].size

    @cached_property
    def matrix(self) -> np.ndarray:
        """(len(family), space_size) int8 matrix of labels; rows follow member order."""
        m = np.asarray([h.labels for h in self.members], dtype=np.int8)
        m.setflags(write=False)
        return m


@dataclass(frozen=True)
class LabeledExample:
    point: int
    label: int

    def __post_init__(self) -> None:
        _check_label(self.label)
        if self.point < 0:
            raise StructuralError(f"point index must be nonnegative, got {self.point}")

    def key(self) -> tuple[int, int]:
        return (self.point, self.label)


@dataclass(frozen=True)
class Sample:
    """An ordered sequence of labeled examples; repeats allowed and counted."""

    examples: tuple[LabeledExample, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "examples", tuple(self.examples))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "Sample":
        return cls(tuple(LabeledExample(p, y) for p, y in pairs))

    def __len__(self) -> int:
        return len(self.examples)

    def __getitem__(self, index: int) -> LabeledExample:
        return self.examples[index]

    def __iter__(self) -> Iterator[LabeledExample]:
        return iter(self.examples)

    def points(self) -> np.ndarray:
        return np.asarray([e.point for e in self.examples], dtype=np.intp)

    def labels(self) -> np.ndarray:
        return np.asarray([e.label for e in self.examples], dtype=np.int8)


@dataclass(frozen=True)
class FiniteDistribution:
    """Exact finite-support distribution over labeled examples.

    Probabilities may be Fractions (exact) or floats; they must be positive,
    sum to 1 within 1e-12, and sit on distinct (point, label) pairs.
    """

    atoms: tuple[tuple[LabeledExample, Probability], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", tuple((e, p) for e, p in self.atoms))
        if not self.atoms:
            raise StructuralError("distribution must have at least one atom")
        seen = set()
        total = Fraction(0)
        exact = True
        for example, p in self.atoms:
            if p <= 0:
                raise StructuralError(f"atom probability must be positive, got {p!r}")
            if example.key() in seen:
                raise StructuralError(f"duplicate atom {example.key()}")
            seen.add(example.key())
            if isinstance(p, Fraction):
                total += p
            else:
                exact = False
        if exact:
            if abs(total - 1) > PROB_TOLERANCE:
                raise StructuralError(f"probabilities sum to {total}, not 1")
        else:
            s = float(sum(float(p) for _, p in self.atoms))
            if abs(s - 1.0) > PROB_TOLERANCE:
                raise StructuralError(f"probabilities sum to {s}, not 1")

    @classmethod
    def uniform(cls, examples: Sequence[LabeledExample]) -> "FiniteDistribution":
        n = len(examples)
        return cls(tuple((e, Fraction(1, n)) for e in examples))

    @classmethod
    def point_mass(cls, example: LabeledExample) -> "FiniteDistribution":
        return cls(((example, Fraction(1)),))

    def __len__(self) -> int:
        return len(self.atoms)

    def support(self) -> tuple[LabeledExample, ...]:
        return tuple(e for e, _ in self.atoms)

    def probabilities(self) -> np.ndarray:
        return np.asarray([float(p) for _, p in self.atoms], dtype=np.float64)


@dataclass(frozen=True)
class MajorityVotePredictor:
    """An improper predictor: a list of hypotheses combined by majority vote.

    Exact ties resolve to +1.  `provenance[i]` holds the ordered sample
    indices that reconstruct voter i through the compression scheme (empty
    for predictors that were not built by compression).
    """

    voters: tuple[Hypothesis, ...]
    provenance: tuple[tuple[int, ...], ...] = ()
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "voters", tuple(self.voters))
        if not self.voters:
            raise StructuralError("majority vote needs at least one voter")
        size = self.voters[0].size
        if any(v.size != size for v in self.voters):
            raise StructuralError("voters must share one instance space")
        if self.provenance:
            prov = tuple(tuple(int(i) for i in t) for t in self.provenance)
            if len(prov) != len(self.voters):
                raise StructuralError("provenance must list one index tuple per voter")
            object.__setattr__(self, "provenance", prov)

    @property
    def size(self) -> int:
        return self.voters[0].size

    @property
    def compression_size(self) -> int:
        return sum(len(t) for t in self.provenance)

    def label_of(self, point: int) -> int:
        vote = sum(v.label_of(point) for v in self.voters)
        return +1 if vote >= 0 else -1

    def labels_at(self, points: Sequence[int]) -> np.ndarray:
        idx = np.asarray(points, dtype=np.intp)
        votes = np.zeros(len(idx), dtype=np.int64)
        for v in self.voters:
            votes += v.labels_at(idx).astype(np.int64)
        return np.where(votes >= 0, 1, -1).astype(np.int8)


Predictor = Union[Hypothesis, MajorityVotePredictor]


def robust_loss(predictor: Predictor, example: LabeledExample, perturbations: PerturbationMap) -> int:
    """Worst-case 0-1 loss over the example's perturbation set.

    Returns 1 iff some z in U(example.point) is mislabeled by the predictor.
    """
    ball = perturbations[example.point]
    if max(ball) >= predictor.size:
        raise StructuralError("perturbation map and predictor disagree on the instance space")
    got = predictor.labels_at(ball)
    return int(np.any(got != example.label))


def standard_loss(predictor: Predictor, example: LabeledExample) -> int:
    """Plain 0-1 loss: robust loss under the identity adversary."""
    if not 0 <= example.point < predictor.size:
        raise StructuralError(f"point {example.point} outside instance space")
    return int(predictor.label_of(example.point) != example.label)


def empirical_robust_risk(
    predictor: Predictor, sample: Sample, perturbations: PerturbationMap
) -> Fraction:
    """Mean robust loss over the sample, counting repeats with multiplicity."""
    if len(sample) == 0:
        raise ContractError("empirical robust risk requires a nonempty sample")
    mistakes = sum(robust_loss(predictor, e, perturbations) for e in sample)
    return Fraction(mistakes, len(sample))


def empirical_error(predictor: Predictor, sample: Sample) -> Fraction:
    """Mean standard 0-1 loss over the sample."""
    if len(sample) == 0:
        raise ContractError("empirical error requires a nonempty sample")
    return empirical_robust_risk(predictor, sample, PerturbationMap.identity(predictor.size))


def population_robust_risk(
    predictor: Predictor, dist: FiniteDistribution, perturbations: PerturbationMap
) -> Probability:
    """Probability-weighted robust loss; exact when all atom weights are rational."""
    total: Probability = Fraction(0)
    exact = all(isinstance(p, Fraction) for _, p in dist.atoms)
    if not exact:
        total = 0.0
    for example, p in dist.atoms:
        if robust_loss(predictor, example, perturbations):
            total += p
    return total


def population_error(predictor: Predictor, dist: FiniteDistribution) -> Probability:
    """Standard population error: robust risk under the identity adversary."""
    return population_robust_risk(predictor, dist, PerturbationMap.identity(predictor.size))
