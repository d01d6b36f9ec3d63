"""Bar isomorphism checks and relative cohomology ranks for small finite pairs."""
from relhyp.groups import GroupPair, Subgroup, cyclic_group, symmetric_group
from relhyp.resolutions import bar_iso_suite, relative_cohomology_rank


def main():
    S3, C2 = symmetric_group(3), cyclic_group(2)
    pairs = {
        "S3, <(12)>": GroupPair(S3, [Subgroup(S3, ["(12)"])]),
        "C2, 1": GroupPair(C2, [Subgroup(C2, [])]),
        "S3, <(12)>, <(123)>": GroupPair(S3, [Subgroup(S3, ["(12)"]), Subgroup(S3, ["(123)"])]),
    }
    for name, pair in pairs.items():
        suite = bar_iso_suite(pair, 2)
        passed = all(p == t for p, t in suite.values())
        checks = ", ".join(f"{k} {p}/{t}" for k, (p, t) in suite.items())
        print(f"{name:22s} {'ok' if passed else 'FAILED'}  {checks}")
        print(f"{'':22s} H^0..2 ranks {[relative_cohomology_rank(pair, k) for k in range(3)]}")


if __name__ == "__main__":
    main()
