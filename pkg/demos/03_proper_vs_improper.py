"""Proper learning fails where an improper majority vote succeeds.

On the weight-restricted blowup instance, every hypothesis is robustly wrong
on exactly m of the 3m anchors.  A proper learner that saw only m samples
must gamble on which anchors the distribution actually uses, and loses a
constant fraction of the time.  The improper compression-boosting learner,
given a bigger budget, just wins.
"""

from robustpac import ExperimentConfig, make_proper_failure, run_separation_experiment


def main() -> None:
    instance = make_proper_failure(2)
    print(
        f"instance: {instance.space.size} points, {len(instance.family)} hypotheses, "
        f"{len(instance.distributions)} hard distributions"
    )
    config = ExperimentConfig(m=2, trials=500, seed=7, improper_budget=64)
    proper, improper = run_separation_experiment(instance, config)

    print()
    print("failure = population robust risk > 1/8")
    print(proper.summary())
    print(improper.summary())
    print()
    guarantee = 1 / 7
    print(f"guaranteed proper failure rate : >= {guarantee:.4f}")
    print(f"observed  proper failure rate  :    {float(proper.failure_frequency):.4f}")
    print(f"observed improper failure rate :    {float(improper.failure_frequency):.4f}")


if __name__ == "__main__":
    main()
