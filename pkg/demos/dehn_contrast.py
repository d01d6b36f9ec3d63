"""Dehn function samples: ℤ² grows quadratically, a free quotient fills nothing.

Run: python demos/dehn_contrast.py
"""
from relhyp.filling import dehn_sample
from relhyp.groups import FreeAbelianGroup, FreeGroup, GroupPair, Subgroup
from relhyp.paircomplex import build_quotient_complex, build_relative_cayley_complex, parse_relative_presentation


def show(name, sample):
    row = " ".join(f"{k}:{v}" for k, v in sorted(sample.table.items()))
    print(f"{name:8s} {row}")
    print(f"{'':8s} slope {sample.slope}, linear-fit residual {sample.residual}")


def main():
    Z2 = FreeAbelianGroup(2)
    K = build_relative_cayley_complex(parse_relative_presentation("⟨x,y; - | [x,y]⟩", Z2),
                                      GroupPair(Z2, [Subgroup(Z2, [])]), 7)
    show("Z^2", dehn_sample(K, 12, starts=K.identity_vertices(), canonical=K.canonical_circuit))

    F2 = FreeGroup(2)
    KF = build_relative_cayley_complex(parse_relative_presentation("⟨b; ⟨a⟩ | ⟩", F2),
                                       GroupPair(F2, [Subgroup(F2, ["a"])]), 3)
    show("F2/<a>", dehn_sample(build_quotient_complex(KF), 8))


if __name__ == "__main__":
    main()
