"""The dimension zoo: how far apart the combinatorial dimensions can drift.

Two star exhibits.  The blowup family keeps vc(H) = 1 while its robust loss
class shatters m points, so uniform convergence of the robust loss is
hopeless even for "simple" classes.  The pair-gap family has no single
perturbation set labeled both ways (disjoint robust shattering dimension 0)
yet robustly shatters p points through witness pairs.
"""

from robustpac import (
    disjoint_robust_shattering_dim,
    dual_vc,
    make_pair_gap,
    make_vc_blowup,
    robust_shattering_dim,
    vc,
    vc_of_robust_loss_family,
    verify_witness,
)


def main() -> None:
    print("blowup family: vc stays at 1, the loss class shatters m anchors")
    print(f"{'m':>3} {'points':>7} {'|H|':>5} {'vc':>4} {'vc*':>4} {'vc(loss)':>9}")
    for m in range(1, 6):
        inst = make_vc_blowup(m)
        row = (
            m,
            inst.space.size,
            len(inst.family),
            vc(inst.family).value,
            dual_vc(inst.family).value,
            vc_of_robust_loss_family(inst.family, inst.perturbations).value,
        )
        print("{:>3} {:>7} {:>5} {:>4} {:>4} {:>9}".format(*row))

    print()
    print("pair-gap family: dim_x collapses to 0, robust shattering does not")
    print(f"{'p':>3} {'points':>7} {'|H|':>5} {'dim_x':>6} {'dim_U':>6} {'vc':>4}")
    for p in range(1, 5):
        inst = make_pair_gap(p)
        w = robust_shattering_dim(inst.family, inst.perturbations)
        row = (
            p,
            inst.space.size,
            len(inst.family),
            disjoint_robust_shattering_dim(inst.family, inst.perturbations).value,
            w.value,
            vc(inst.family).value,
        )
        print("{:>3} {:>7} {:>5} {:>6} {:>6} {:>4}".format(*row))
        assert verify_witness(inst.family, w, inst.perturbations)

    inst = make_pair_gap(3)
    w = robust_shattering_dim(inst.family, inst.perturbations)
    print()
    print("robust shattering witness for p=3 (shattered point, z+, z-):")
    for triple in w.witness:
        print("  ", triple)


if __name__ == "__main__":
    main()
