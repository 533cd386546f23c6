"""Brute-force computation of combinatorial dimensions, with explicit witnesses.

All five quantities reduce to one search problem: given "slots", each carrying
a pair of disjoint member sets (who can realize + at the slot, who can realize
-), find the largest slot subset such that every sign pattern is realized by
some member.  Member sets are Python-int bitmasks; the search walks candidate
tuples in lexicographic order and prunes a branch as soon as one pattern's
member set goes empty.

Every search is exact up to a configurable ceiling (default 12).  A result
that hits the ceiling while larger witnesses may exist is flagged `capped`
("at least this much") rather than silently truncated.  Structural bounds
(a family of N members can never shatter more than log2(N) slots) are used
to declare exactness below the ceiling whenever possible.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .core import HypothesisFamily, PerturbationMap, StructuralError

__all__ = [
    "DEFAULT_CAP",
    "DimensionWitness",
    "vc",
    "dual_vc",
    "vc_of_robust_loss_family",
    "disjoint_robust_shattering_dim",
    "robust_shattering_dim",
    "verify_witness",
    "is_shattered",
    "is_loss_shattered",
    "is_disjoint_robustly_shattered",
    "is_robustly_shattered",
    "restriction_count",
    "sauer_bound",
]

DEFAULT_CAP = 12


@dataclass(frozen=True)
class DimensionWitness:
    """A dimension value plus the witness that re-verifies it.

    `witness` holds one descriptor per shattered slot: a point for vc and the
    disjoint robust dimension, a member index for the dual dimension, a
    (point, label) pair for the loss-class dimension, and an
    (x, z_plus, z_minus) triple for the robust shattering dimension.
    `capped` means the search stopped at its ceiling, so `value` is a lower
    bound rather than the exact dimension.
    """

    kind: str
    value: int
    witness: tuple
    capped: bool = False


def _mask_of(bools: np.ndarray) -> int:
    bits = np.packbits(np.asarray(bools, dtype=bool), bitorder="little")
    return int.from_bytes(bits.tobytes(), "little")


def _max_shattered(slots: list[tuple[int, int]], limit: int) -> tuple[int, tuple[int, ...]]:
    """Largest subset of slots whose every sign pattern keeps a nonempty member set.

    Slots are (plus_mask, minus_mask) with plus & minus == 0.  Returns the
    size and the lexicographically first witness of that size.
    """
    best_value = 0
    best_choice: tuple[int, ...] = ()
    n = len(slots)
    if limit <= 0 or n == 0:
        return 0, ()
    full = -1  # all-ones bitmask; slot masks intersect it to their own universe

    def extend(start: int, masks: list[int], chosen: list[int]) -> bool:
        nonlocal best_value, best_choice
        if len(chosen) > best_value:
            best_value = len(chosen)
            best_choice = tuple(chosen)
            if best_value == limit:
                return True
        for j in range(start, n):
            if len(chosen) + (n - j) <= best_value:
                break
            plus, minus = slots[j]
            split: list[int] = []
            ok = True
            for m in masks:
                a = m & plus
                if not a:
                    ok = False
                    break
                b = m & minus
                if not b:
                    ok = False
                    break
                split.append(a)
                split.append(b)
            if ok and extend(j + 1, split, chosen + [j]):
                return True
        return False

    extend(0, [full], [])
    return best_value, best_choice


def _run_search(
    kind: str,
    slots: list[tuple[int, int]],
    reps: list,
    cap: int,
    structural_bound: int,
) -> DimensionWitness:
    hard = min(structural_bound, len(slots))
    limit = min(cap, hard)
    value, chosen = _max_shattered(slots, limit)
    capped = value == limit and limit < hard
    return DimensionWitness(kind, value, tuple(reps[j] for j in chosen), capped)


def _floor_log2(n: int) -> int:
    return n.bit_length() - 1 if n > 0 else 0


def _column_slots(matrix: np.ndarray) -> tuple[list[tuple[int, int]], list[int]]:
    """One slot per distinct non-constant column; representative = first point."""
    slots: list[tuple[int, int]] = []
    reps: list[int] = []
    seen: set[bytes] = set()
    for x in range(matrix.shape[1]):
        col = matrix[:, x]
        key = col.tobytes()
        if key in seen:
            continue
        seen.add(key)
        plus = _mask_of(col == 1)
        minus = _mask_of(col == -1)
        if plus and minus:
            slots.append((plus, minus))
            reps.append(x)
    return slots, reps


def vc(family: HypothesisFamily, cap: int = DEFAULT_CAP) -> DimensionWitness:
    """Exact VC dimension by exhaustive shattering search with early pruning."""
    slots, reps = _column_slots(family.matrix)
    return _run_search("vc", slots, reps, cap, _floor_log2(len(family)))


def dual_vc(family: HypothesisFamily, cap: int = DEFAULT_CAP) -> DimensionWitness:
    """VC dimension of the dual family {g_x : h -> h(x)}.

    Here the shattered objects are hypotheses and the masks range over points:
    member h contributes the slot ({x : h(x)=+1}, {x : h(x)=-1}).
    """
    matrix = family.matrix
    n_points = matrix.shape[1]
    distinct_columns = len({matrix[:, x].tobytes() for x in range(n_points)})
    slots: list[tuple[int, int]] = []
    reps: list[int] = []
    for h in range(len(family)):
        row = matrix[h]
        plus = _mask_of(row == 1)
        minus = _mask_of(row == -1)
        if plus and minus:
            slots.append((plus, minus))
            reps.append(h)
    return _run_search("dual_vc", slots, reps, cap, _floor_log2(distinct_columns))


def _loss_matrix(family: HypothesisFamily, perturbations: PerturbationMap) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """0/1 matrix of robust losses over the domain X x {-1,+1}, plus that domain."""
    matrix = family.matrix
    if perturbations.size != matrix.shape[1]:
        raise StructuralError("perturbation map and family disagree on the instance space")
    domain: list[tuple[int, int]] = []
    cols: list[np.ndarray] = []
    for x in range(matrix.shape[1]):
        ball = np.asarray(perturbations[x], dtype=np.intp)
        has_plus = (matrix[:, ball] == 1).any(axis=1)
        has_minus = (matrix[:, ball] == -1).any(axis=1)
        for y, col in ((-1, has_plus), (1, has_minus)):
            domain.append((x, y))
            cols.append(col)
    return np.column_stack(cols), domain


def vc_of_robust_loss_family(
    family: HypothesisFamily, perturbations: PerturbationMap, cap: int = DEFAULT_CAP
) -> DimensionWitness:
    """VC dimension of {(x,y) -> sup_{z in U(x)} 1[h(z) != y] : h in family}."""
    loss, domain = _loss_matrix(family, perturbations)
    distinct_rows = len({loss[h].tobytes() for h in range(loss.shape[0])})
    slots: list[tuple[int, int]] = []
    reps: list[tuple[int, int]] = []
    seen: set[bytes] = set()
    for j in range(loss.shape[1]):
        col = loss[:, j]
        key = col.tobytes()
        if key in seen:
            continue
        seen.add(key)
        one = _mask_of(col)
        zero = _mask_of(~col)
        if one and zero:
            slots.append((one, zero))
            reps.append(domain[j])
    return _run_search("loss_vc", slots, reps, cap, _floor_log2(distinct_rows))


def _constant_masks(
    family: HypothesisFamily, perturbations: PerturbationMap
) -> tuple[list[int], list[int]]:
    """Per point x: bitmasks of members constant +1 / constant -1 on U(x)."""
    matrix = family.matrix
    if perturbations.size != matrix.shape[1]:
        raise StructuralError("perturbation map and family disagree on the instance space")
    const_plus: list[int] = []
    const_minus: list[int] = []
    for x in range(matrix.shape[1]):
        ball = np.asarray(perturbations[x], dtype=np.intp)
        const_plus.append(_mask_of((matrix[:, ball] == 1).all(axis=1)))
        const_minus.append(_mask_of((matrix[:, ball] == -1).all(axis=1)))
    return const_plus, const_minus


def disjoint_robust_shattering_dim(
    family: HypothesisFamily, perturbations: PerturbationMap, cap: int = DEFAULT_CAP
) -> DimensionWitness:
    """Largest m with points whose entire perturbation sets are shattered.

    A slot for point x demands members constant over all of U(x); with the
    identity adversary this degenerates to the plain VC dimension.
    """
    const_plus, const_minus = _constant_masks(family, perturbations)
    slots: list[tuple[int, int]] = []
    reps: list[int] = []
    seen: set[tuple[int, int]] = set()
    for x in range(perturbations.size):
        pair = (const_plus[x], const_minus[x])
        if not pair[0] or not pair[1] or pair in seen:
            continue
        seen.add(pair)
        slots.append(pair)
        reps.append(x)
    return _run_search("disjoint_robust", slots, reps, cap, _floor_log2(len(family)))


def robust_shattering_dim(
    family: HypothesisFamily, perturbations: PerturbationMap, cap: int = DEFAULT_CAP
) -> DimensionWitness:
    """Robust shattering dimension with witness points z_i^+/z_i^-.

    A slot is an ordered pair (z_plus, z_minus) whose perturbation sets
    intersect; realizing sign y at the slot means being constant y on the
    whole set U(z_y).  The shattered point x_i is reported as the smallest
    element of the intersection.  Witness points range over the full
    instance space, not only sample points.
    """
    const_plus, const_minus = _constant_masks(family, perturbations)
    ball_sets = [frozenset(s) for s in perturbations.sets]
    slots: list[tuple[int, int]] = []
    reps: list[tuple[int, int, int]] = []
    seen: set[tuple[int, int]] = set()
    n = perturbations.size
    for zp in range(n):
        if not const_plus[zp]:
            continue
        for zm in range(n):
            if not const_minus[zm]:
                continue
            common = ball_sets[zp] & ball_sets[zm]
            if not common:
                continue
            pair = (const_plus[zp], const_minus[zm])
            if pair in seen:
                continue
            seen.add(pair)
            slots.append(pair)
            reps.append((min(common), zp, zm))
    return _run_search("robust", slots, reps, cap, _floor_log2(len(family)))


# --- witness replay ---------------------------------------------------------


def _patterns_realized(slots: list[tuple[int, int]]) -> bool:
    """Check all 2^k sign patterns keep a nonempty member mask."""
    masks = [-1]
    for plus, minus in slots:
        split = []
        for m in masks:
            a = m & plus
            b = m & minus
            if not a or not b:
                return False
            split.append(a)
            split.append(b)
        masks = split
    return True


def is_shattered(family: HypothesisFamily, points: tuple[int, ...]) -> bool:
    matrix = family.matrix
    slots = [
        (_mask_of(matrix[:, x] == 1), _mask_of(matrix[:, x] == -1)) for x in points
    ]
    return _patterns_realized(slots)


def is_loss_shattered(
    family: HypothesisFamily,
    perturbations: PerturbationMap,
    pairs: tuple[tuple[int, int], ...],
) -> bool:
    """Exhaustively check that the (point, label) pairs are shattered by the loss class."""
    loss, domain = _loss_matrix(family, perturbations)
    index = {d: j for j, d in enumerate(domain)}
    slots = []
    for pair in pairs:
        col = loss[:, index[pair]]
        slots.append((_mask_of(col), _mask_of(~col)))
    return _patterns_realized(slots)


def is_disjoint_robustly_shattered(
    family: HypothesisFamily, perturbations: PerturbationMap, points: tuple[int, ...]
) -> bool:
    const_plus, const_minus = _constant_masks(family, perturbations)
    slots = [(const_plus[x], const_minus[x]) for x in points]
    return _patterns_realized(slots)


def is_robustly_shattered(
    family: HypothesisFamily,
    perturbations: PerturbationMap,
    triples: tuple[tuple[int, int, int], ...],
) -> bool:
    """Replay an (x, z_plus, z_minus) witness against Definition-style shattering."""
    const_plus, const_minus = _constant_masks(family, perturbations)
    slots = []
    for x, zp, zm in triples:
        if x not in perturbations[zp] or x not in perturbations[zm]:
            return False
        slots.append((const_plus[zp], const_minus[zm]))
    return _patterns_realized(slots)


def verify_witness(
    family: HypothesisFamily,
    witness: DimensionWitness,
    perturbations: PerturbationMap | None = None,
) -> bool:
    """Replay a witness through the checker matching its kind."""
    if len(witness.witness) != witness.value:
        return False
    if witness.kind == "vc":
        return is_shattered(family, witness.witness)
    if witness.kind == "dual_vc":
        matrix = family.matrix
        slots = [
            (_mask_of(matrix[h] == 1), _mask_of(matrix[h] == -1)) for h in witness.witness
        ]
        return _patterns_realized(slots)
    if perturbations is None:
        raise StructuralError(f"witness kind {witness.kind!r} needs the perturbation map")
    if witness.kind == "loss_vc":
        return is_loss_shattered(family, perturbations, witness.witness)
    if witness.kind == "disjoint_robust":
        return is_disjoint_robustly_shattered(family, perturbations, witness.witness)
    if witness.kind == "robust":
        return is_robustly_shattered(family, perturbations, witness.witness)
    raise StructuralError(f"unknown witness kind {witness.kind!r}")


def restriction_count(family: HypothesisFamily, points: tuple[int, ...]) -> int:
    """Number of distinct restrictions of the family to the given points."""
    sub = family.matrix[:, np.asarray(points, dtype=np.intp)]
    return len({sub[h].tobytes() for h in range(sub.shape[0])})


def sauer_bound(k: int, dim: int) -> int:
    """Sauer's lemma ceiling on restrictions to k points for a dim-dimensional class."""
    return sum(comb(k, i) for i in range(0, min(dim, k) + 1))
