"""Deterministic generators for the adversarial instance families.

Metric balls are realized combinatorially: each generator lays out an explicit
finite point set and perturbation sets with exactly the disjointness /
single-point-intersection pattern its guarantees need.  No generator uses
randomness; identical parameters always produce identical instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence, Union

from .core import (
    ContractError,
    FiniteDistribution,
    HypothesisFamily,
    InstanceSpace,
    LabeledExample,
    PerturbationMap,
)

__all__ = [
    "ConstructedInstance",
    "make_vc_blowup",
    "make_proper_failure",
    "make_union_truncation",
    "make_pair_gap",
    "make_lower_bound_family",
    "make_agnostic_lower_bound",
    "BLOWUP_CAP",
    "PAIR_CAP",
]

BLOWUP_CAP = 8
PAIR_CAP = 10

RationalLike = Union[Fraction, float, int, str]


@dataclass
class ConstructedInstance:
    """A generated instance: space, adversary, family, designated points, data."""

    space: InstanceSpace
    perturbations: PerturbationMap
    family: HypothesisFamily
    anchors: dict[str, tuple[int, ...]]
    distributions: tuple[FiniteDistribution, ...] | None
    metadata: dict


def _blowup_parts(
    anchor_count: int, patterns: Sequence[tuple[int, ...]], first_fresh: int
) -> tuple[list[list[int]], list[list[int]], int]:
    """Lay out one fresh point per (pattern, set bit); returns per-anchor and
    per-pattern fresh point lists plus the next free point id."""
    fresh_by_anchor: list[list[int]] = [[] for _ in range(anchor_count)]
    fresh_by_pattern: list[list[int]] = []
    next_point = first_fresh
    for pattern in patterns:
        mine: list[int] = []
        for i in pattern:
            fresh_by_anchor[i].append(next_point)
            mine.append(next_point)
            next_point += 1
        fresh_by_pattern.append(mine)
    return fresh_by_anchor, fresh_by_pattern, next_point


def make_vc_blowup(m: int, cap: int = BLOWUP_CAP) -> ConstructedInstance:
    """Family with VC dimension <= 1 whose robust loss class shatters m points.

    m anchor points have mutually disjoint perturbation sets; every bit
    pattern over the anchors gets its own private batch of fresh points, one
    inside each selected anchor's set, and the pattern's member labels exactly
    that batch -1.  The worst-case loss at anchor i then reads off bit i, so
    the loss class shatters the anchors while no two points of the base space
    are ever labeled (-1, -1) by one member.
    """
    if m < 1:
        raise ContractError(f"m must be >= 1, got {m}")
    if m > cap:
        raise ContractError(f"m={m} exceeds the cap {cap} (space grows as m * 2^(m-1))")
    patterns = [tuple(i for i in range(m) if (code >> i) & 1) for code in range(2 ** m)]
    fresh_by_anchor, fresh_by_pattern, size = _blowup_parts(m, patterns, m)
    sets: list[tuple[int, ...]] = []
    for i in range(m):
        sets.append(tuple([i] + fresh_by_anchor[i]))
    for z in range(m, size):
        sets.append((z,))
    rows = []
    for mine in fresh_by_pattern:
        row = [+1] * size
        for z in mine:
            row[z] = -1
        rows.append(tuple(row))
    return ConstructedInstance(
        space=InstanceSpace(size),
        perturbations=PerturbationMap(tuple(sets)),
        family=HypothesisFamily.from_rows(rows, name=f"vc-blowup(m={m})"),
        anchors={"anchors": tuple(range(m))},
        distributions=None,
        metadata={"generator": "vc_blowup", "m": m},
    )


def make_proper_failure(m: int, cap: int = BLOWUP_CAP) -> ConstructedInstance:
    """Instance family on which every proper rule fails with constant probability.

    The blowup construction on 3m anchors, restricted to the members that are
    robustly wrong on exactly m anchors.  Ships all C(3m, 2m) uniform
    distributions over 2m-subsets of the positively-labeled anchors: each has
    a unique zero-robust-risk member (the one wrong precisely on the excluded
    m anchors), while any member a learner picks must sacrifice m anchors.
    """
    if m < 1:
        raise ContractError(f"m must be >= 1, got {m}")
    anchor_count = 3 * m
    if anchor_count > cap:
        raise ContractError(f"3m={anchor_count} exceeds the cap {cap}")
    patterns = list(combinations(range(anchor_count), m))
    fresh_by_anchor, fresh_by_pattern, size = _blowup_parts(anchor_count, patterns, anchor_count)
    sets: list[tuple[int, ...]] = []
    for i in range(anchor_count):
        sets.append(tuple([i] + fresh_by_anchor[i]))
    for z in range(anchor_count, size):
        sets.append((z,))
    rows = []
    for mine in fresh_by_pattern:
        row = [+1] * size
        for z in mine:
            row[z] = -1
        rows.append(tuple(row))
    distributions = tuple(
        FiniteDistribution.uniform([LabeledExample(i, +1) for i in support])
        for support in combinations(range(anchor_count), 2 * m)
    )
    return ConstructedInstance(
        space=InstanceSpace(size),
        perturbations=PerturbationMap(tuple(sets)),
        family=HypothesisFamily.from_rows(rows, name=f"proper-failure(m={m})"),
        anchors={"anchors": tuple(range(anchor_count))},
        distributions=distributions,
        metadata={"generator": "proper_failure", "m": m},
    )


def make_union_truncation(block_sizes: Sequence[int], cap: int = BLOWUP_CAP) -> ConstructedInstance:
    """Finite union of proper-failure blocks with the cross-block adjustment.

    Members of one block additionally label every other block's anchors -1,
    so they are robustly wrong there; this keeps the union's VC dimension at 1
    while each block retains its own realizable distributions.
    """
    if not block_sizes:
        raise ContractError("at least one block size is required")
    blocks = [make_proper_failure(m, cap=cap) for m in block_sizes]
    offsets: list[int] = []
    total = 0
    for inst in blocks:
        offsets.append(total)
        total += inst.space.size
    sets: list[tuple[int, ...]] = []
    for inst, off in zip(blocks, offsets):
        for s in inst.perturbations.sets:
            sets.append(tuple(z + off for z in s))
    all_anchors: list[int] = []
    anchor_lists: list[tuple[int, ...]] = []
    for inst, off in zip(blocks, offsets):
        shifted = tuple(a + off for a in inst.anchors["anchors"])
        anchor_lists.append(shifted)
        all_anchors.extend(shifted)
    rows = []
    for j, (inst, off) in enumerate(zip(blocks, offsets)):
        foreign = [a for jj, anchors in enumerate(anchor_lists) if jj != j for a in anchors]
        for h in inst.family:
            row = [+1] * total
            for z, lab in enumerate(h.labels):
                if lab == -1:
                    row[z + off] = -1
            for a in foreign:
                row[a] = -1
            rows.append(tuple(row))
    distributions = tuple(
        FiniteDistribution(
            tuple((LabeledExample(e.point + off, e.label), p) for e, p in dist.atoms)
        )
        for inst, off in zip(blocks, offsets)
        for dist in (inst.distributions or ())
    )
    return ConstructedInstance(
        space=InstanceSpace(total),
        perturbations=PerturbationMap(tuple(sets)),
        family=HypothesisFamily.from_rows(rows, name=f"union-truncation({list(block_sizes)})"),
        anchors={"anchors": tuple(all_anchors)},
        distributions=distributions,
        metadata={
            "generator": "union_truncation",
            "block_sizes": list(block_sizes),
            "block_offsets": offsets,
        },
    )


def _pair_gap_layout(p: int) -> tuple[list[tuple[int, ...]], list[int], list[int], list[int]]:
    """Points {a_i, u_i, c_i} per pair with single-point set intersections u_i."""
    sets: list[tuple[int, ...]] = []
    plus_side: list[int] = []
    shared: list[int] = []
    minus_side: list[int] = []
    for i in range(p):
        a, u, c = 3 * i, 3 * i + 1, 3 * i + 2
        plus_side.append(a)
        shared.append(u)
        minus_side.append(c)
        sets.append((a, u))
        sets.append((a, u, c))
        sets.append((u, c))
    return sets, plus_side, shared, minus_side


def _pair_gap_family(p: int, size: int) -> HypothesisFamily:
    # Bit i flips only the shared point u_i; the witness points keep fixed
    # labels, so no single perturbation set is ever labeled both ways.
    rows = []
    for code in range(2 ** p):
        row = [+1] * size
        for i in range(p):
            row[3 * i + 2] = -1
            if (code >> i) & 1:
                row[3 * i + 1] = -1
        rows.append(tuple(row))
    return HypothesisFamily.from_rows(rows, name=f"pair-gap(p={p})")


def make_pair_gap(p: int, cap: int = PAIR_CAP) -> ConstructedInstance:
    """p point pairs whose perturbation sets intersect in a single point each.

    Per pair: U(a_i) = {a_i, u_i} can be labeled all +1, U(c_i) = {u_i, c_i}
    can be labeled all -1, and which one happens is decided by bit i.  No set
    can be labeled constantly both ways (disjoint robust shattering dimension
    0), yet the shared points u_1..u_p are robustly shattered through the
    witnesses (a_i, c_i), so the robust shattering dimension is exactly p.
    """
    if p < 1:
        raise ContractError(f"p must be >= 1, got {p}")
    if p > cap:
        raise ContractError(f"p={p} exceeds the cap {cap} (family has 2^p members)")
    sets, plus_side, shared, minus_side = _pair_gap_layout(p)
    size = 3 * p
    return ConstructedInstance(
        space=InstanceSpace(size),
        perturbations=PerturbationMap(tuple(sets)),
        family=_pair_gap_family(p, size),
        anchors={
            "shattered": tuple(shared),
            "witness_plus": tuple(plus_side),
            "witness_minus": tuple(minus_side),
        },
        distributions=None,
        metadata={"generator": "pair_gap", "p": p},
    )


def _sign_vector(code: int, d: int) -> tuple[int, ...]:
    """Sign pattern for a bit code: bit i set means coordinate i is -1."""
    return tuple(-1 if (code >> i) & 1 else +1 for i in range(d))


def make_lower_bound_family(d: int, epsilon: RationalLike, cap: int = PAIR_CAP) -> ConstructedInstance:
    """Robustly shattered base plus the 2^d realizable hard distributions.

    Distribution D_y places mass 1-8eps on (witness of y_1, y_1) and
    8eps/(d-1) on each remaining (witness of y_i, y_i); the member whose bits
    match y has robust risk 0 on D_y.  Distributions are indexed by the bit
    code of y (bit i set means y_i = -1).
    """
    if d < 2:
        raise ContractError(f"d must be >= 2, got {d}")
    eps = Fraction(epsilon)
    if not 0 < eps < Fraction(1, 8):
        raise ContractError(f"epsilon must lie in (0, 1/8), got {eps}")
    base = make_pair_gap(d, cap=cap)
    plus_side = base.anchors["witness_plus"]
    minus_side = base.anchors["witness_minus"]
    head = 1 - 8 * eps
    tail = 8 * eps / (d - 1)
    distributions = []
    for code in range(2 ** d):
        y = _sign_vector(code, d)
        atoms = []
        for i in range(d):
            point = plus_side[i] if y[i] == +1 else minus_side[i]
            mass = head if i == 0 else tail
            atoms.append((LabeledExample(point, y[i]), mass))
        distributions.append(FiniteDistribution(tuple(atoms)))
    return ConstructedInstance(
        space=base.space,
        perturbations=base.perturbations,
        family=base.family,
        anchors=base.anchors,
        distributions=tuple(distributions),
        metadata={"generator": "lower_bound_family", "d": d, "epsilon": str(eps)},
    )


def make_agnostic_lower_bound(d: int, alpha: RationalLike, cap: int = PAIR_CAP) -> ConstructedInstance:
    """The agnostic hard distributions over the robustly shattered base.

    For each bit vector b, both labels appear at every pair: coordinate i
    carries mass (1 +/- alpha)/(2d) on its positive and negative atoms, with
    the favored side selected by b_i.  The best member in the family has
    population robust risk exactly (1-alpha)/2.  alpha is exposed as a raw
    parameter; no sample-complexity calibration is implied.
    """
    if d < 2:
        raise ContractError(f"d must be >= 2, got {d}")
    a = Fraction(alpha)
    if not 0 < a < 1:
        raise ContractError(f"alpha must lie in (0, 1), got {a}")
    base = make_pair_gap(d, cap=cap)
    plus_side = base.anchors["witness_plus"]
    minus_side = base.anchors["witness_minus"]
    light = (1 - a) / (2 * d)
    heavy = (1 + a) / (2 * d)
    distributions = []
    for code in range(2 ** d):
        atoms = []
        for i in range(d):
            bit = (code >> i) & 1
            atoms.append((LabeledExample(plus_side[i], +1), heavy if bit else light))
            atoms.append((LabeledExample(minus_side[i], -1), light if bit else heavy))
        distributions.append(FiniteDistribution(tuple(atoms)))
    return ConstructedInstance(
        space=base.space,
        perturbations=base.perturbations,
        family=base.family,
        anchors=base.anchors,
        distributions=tuple(distributions),
        metadata={"generator": "agnostic_lower_bound", "d": d, "alpha": str(a)},
    )
