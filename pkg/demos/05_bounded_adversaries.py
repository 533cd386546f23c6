"""What happens when the adversary's reach k grows but the family does not.

The inflated sample grows linearly with k, but the discretized set (one
representative per candidate error pattern) is controlled by the candidate
set and its dual dimension, not by k.  Consequently the compression size
n * T barely moves while k multiplies by 16: the tell-tale sublinear-in-k
behavior of the compression route.
"""

from robustpac import ExperimentConfig, run_bounded_k_scaling


def main() -> None:
    config = ExperimentConfig(m=20, trials=5, seed=3)
    table = run_bounded_k_scaling([1, 2, 4, 8, 16], config)
    print(f"{'k':>3} {'inflated':>9} {'discretized':>12} {'m*k':>5} {'n*T':>6}")
    for row in table.rows:
        print(
            f"{row.k:>3} {row.mean_inflated:>9.1f} {row.mean_discretized:>12.1f} "
            f"{row.mk_bound:>5} {row.mean_compression:>6.1f}"
        )
    first, last = table.rows[0], table.rows[-1]
    print()
    print(
        f"k multiplied by {last.k // first.k}, compression by "
        f"{last.mean_compression / first.mean_compression:.2f}"
    )
    print()
    print(table.to_csv())


if __name__ == "__main__":
    main()
