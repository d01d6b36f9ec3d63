import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relhyp.groups import (FreeAbelianGroup, FreeGroup, GroupPair, OutsideBall, StallingsGraph, Subgroup,
                           WordError, check_compatible, group_op, parse_group_pair, subgroup_membership,
                           symmetric_group)

F2 = FreeGroup(2)
Z2 = FreeAbelianGroup(2)
S3 = symmetric_group(3)


def test_normal_forms():
    assert F2.format(F2.normal_form("a b b^-1")) == "a"
    assert Z2.normal_form("x y x") == Z2.normal_form("x^2 y")
    assert S3.normal_form("(12)(12)") == S3.identity


def test_unknown_symbol():
    with pytest.raises(WordError):
        F2.normal_form("a q")


def test_group_op():
    a = F2.normal_form("a")
    assert group_op(F2, a, F2.inverse(a)) == F2.identity
    assert group_op(F2, F2.normal_form("a b"), mode="invert") == F2.normal_form("b^-1 a^-1")
    assert group_op(S3, S3.normal_form("(123)"), S3.normal_form("(12)")) == S3.normal_form("(13)")
    with pytest.raises(ValueError):
        group_op(F2, a, a, mode="divide")


def test_finite_table_is_group():
    els = range(S3.order)
    e = S3.identity
    for g, h, k in itertools.product(els, repeat=3):
        assert S3.multiply(S3.multiply(g, h), k) == S3.multiply(g, S3.multiply(h, k))
    for g in els:
        assert S3.multiply(g, e) == g == S3.multiply(e, g)
        assert S3.multiply(g, S3.inverse(g)) == e


def test_membership_examples():
    H = Subgroup(F2, ["a"])
    assert subgroup_membership(H, F2.normal_form("a^3"))
    assert not subgroup_membership(H, F2.normal_form("b a b^-1"))
    Z = FreeAbelianGroup(1)
    H2 = Subgroup(Z, ["x^2"])
    assert not subgroup_membership(H2, Z.normal_form("x^3"))
    assert subgroup_membership(H2, Z.normal_form("x^-4"))


def test_coset_labels():
    pair = GroupPair(F2, [Subgroup(F2, ["a"])])
    pair.explore(4)
    assert pair.coset_label(F2.normal_form("a^3"), 0).rep == F2.identity
    assert pair.coset_label(F2.normal_form("b a^2"), 0).rep == F2.normal_form("b")
    pz = GroupPair(Z2, [Subgroup(Z2, ["x"])])
    pz.explore(6)
    assert pz.coset_label(Z2.normal_form("x^3 y^2"), 0).rep == Z2.normal_form("y^2")


def test_coset_label_outside_ball():
    pair = GroupPair(F2, [Subgroup(F2, ["a"])])
    pair.explore(1)
    with pytest.raises(OutsideBall):
        pair.coset_label(F2.normal_form("b^3"), 0)


def test_compatibility():
    assert check_compatible(GroupPair(F2, [Subgroup(F2, ["a"])])).ok
    bad = check_compatible(GroupPair(F2, [Subgroup(F2, ["a^2"])]))
    assert not bad.ok and bad.failing == 0
    S = [Z2.normal_form(w) for w in ("x", "x^-1", "y", "y^-1", "x y", "y^-1 x^-1")]
    assert check_compatible(GroupPair(Z2, [Subgroup(Z2, ["x"])], S)).ok


def test_gen_set_must_be_symmetric():
    with pytest.raises(ValueError):
        GroupPair(F2, [Subgroup(F2, ["a"])], [F2.normal_form("a"), F2.normal_form("b")])


def test_parse_group_pair():
    pair = parse_group_pair("group free 2\nperipheral P1: a\ngens: a a^-1 b b^-1\n")
    assert pair.peripherals[0].contains(F2.normal_form("a^5"))
    with pytest.raises(ValueError):
        parse_group_pair("peripheral 1: a")


words = st.lists(st.sampled_from(["a", "a^-1", "b", "b^-1"]), max_size=12).map(" ".join)
zwords = st.lists(st.sampled_from(["x", "x^-1", "y", "y^-1"]), max_size=12).map(" ".join)


@given(words, words)
def test_free_normal_form_multiplicative(u, v):
    nu, nv = F2.normal_form(u or "1"), F2.normal_form(v or "1")
    assert F2.normal_form(F2.format(nu)) == nu
    assert F2.multiply(nu, nv) == F2.normal_form(f"{u} {v}".strip() or "1")
    assert F2.multiply(nu, F2.inverse(nu)) == F2.identity


@given(zwords, zwords)
def test_abelian_normal_form_multiplicative(u, v):
    nu, nv = Z2.normal_form(u or "1"), Z2.normal_form(v or "1")
    assert Z2.multiply(nu, nv) == Z2.normal_form(f"{u} {v}".strip() or "1")
    assert Z2.multiply(nv, nu) == Z2.multiply(nu, nv)


def _brute_force_subgroup(gens, length):
    letters = gens + [F2.inverse(g) for g in gens]
    out = {F2.identity}
    frontier = {F2.identity}
    for _ in range(length):
        frontier = {F2.multiply(g, s) for g in frontier for s in letters}
        out |= frontier
    return out


@settings(max_examples=30, deadline=None)
@given(st.lists(words.filter(bool), min_size=1, max_size=3), words)
def test_membership_matches_enumeration(gen_words, probe):
    gens = [F2.normal_form(w) for w in gen_words]
    H = Subgroup(F2, gens)
    elems = _brute_force_subgroup(gens, 3)
    for g in elems:
        assert H.contains(g)
    for g in gens:
        assert H.contains(g)
    # closure under product and inverse
    g = F2.normal_form(probe or "1")
    if H.contains(g):
        assert H.contains(F2.inverse(g))
        assert all(H.contains(F2.multiply(g, h)) for h in gens)


def test_membership_against_enumeration_exhaustive():
    gens = [F2.normal_form(w) for w in ("a^2", "b a b^-1")]
    H = Subgroup(F2, gens)
    inside = _brute_force_subgroup(gens, 6)
    # H is free on the two generators and every member of length <= 4 is a
    # product of at most two generator letters, so the enumeration is complete
    pair = GroupPair(F2, [Subgroup(F2, ["a"])])
    for g in pair.explore(4):
        assert H.contains(g) == (g in inside)


def test_stallings_rejects_nonmember():
    S = StallingsGraph([F2.normal_form("a^2")])
    assert S.accepts(F2.normal_form("a^4"))
    assert not S.accepts(F2.normal_form("a^3"))


@pytest.mark.parametrize("pair", [
    GroupPair(F2, [Subgroup(F2, ["a"])]),
    GroupPair(Z2, [Subgroup(Z2, ["x"])]),
    GroupPair(S3, [Subgroup(S3, ["(12)"])]),
])
def test_coset_labels_partition_ball(pair):
    ball = pair.explore(3)
    inner = [g for g in ball if pair.word_length(g) <= 2]
    gamma = pair.gamma
    for g, h in itertools.product(inner, repeat=2):
        same = pair.peripherals[0].contains(gamma.multiply(gamma.inverse(g), h))
        assert (pair.coset_label(g, 0) == pair.coset_label(h, 0)) == same
