"""The compression generalization bound, as a frequency statement.

A predictor reconstructable from k of its m training points that is robustly
consistent on all of them has population robust risk at most
(k ln m + ln(1/delta)) / (m - k), except with probability delta.  Here we
learn threshold predictors against a window adversary with compression size
at most 3 and count how often the bound is violated (it should be at most
delta plus Monte Carlo slack; in practice the bound is loose and violations
are rare to nonexistent).
"""

from robustpac import ExperimentConfig, compression_bound, run_bound_check


def main() -> None:
    k, m, delta, trials = 3, 50, 0.05, 500
    bound = compression_bound(k, m, delta)
    print(f"compression bound at k={k}, m={m}, delta={delta}: {bound:.4f}")
    for k_demo in (1, 3, 10, 25, 49):
        print(f"  k={k_demo:>2}: bound = {compression_bound(k_demo, m, delta):.4f}")
    print("(k = m-1 is vacuous: risks never exceed 1)")
    print()

    config = ExperimentConfig(m=m, trials=trials, seed=11, delta=delta)
    report = run_bound_check(config, k=k)
    print(report.summary())
    slack = delta + 3 * (delta * (1 - delta) / trials) ** 0.5
    print(f"tolerated violation rate: {slack:.4f}")


if __name__ == "__main__":
    main()
