import random

import pytest

import oracles
from npverify import profiles, verify
from npverify.errors import (
    DomainKindError,
    InvalidPairError,
    MembershipError,
    ParameterError,
    SizeCapError,
    TextFormatError,
)

XYZ = (0, 1, 2)
ZYX = (2, 1, 0)


def test_pareto_dominates_unanimity():
    p = (XYZ, XYZ, XYZ)
    assert profiles.pareto_dominates(p, 0, 1)
    assert not profiles.pareto_dominates((XYZ, ZYX, XYZ), 0, 1)
    with pytest.raises(InvalidPairError):
        profiles.pareto_dominates(p, 1, 1)


def test_part1_list_profiles_undominated():
    for profile in verify.build_list_part1(3).values():
        m = len(profile[0])
        for a in range(m):
            for b in range(m):
                if a != b:
                    assert not profiles.pareto_dominates(profile, a, b)


def test_is_np_examples():
    assert not profiles.is_np((XYZ, XYZ, XYZ))
    assert profiles.is_np((XYZ, ZYX, XYZ))  # an inverted voter opposes all pairs
    lists = verify.build_list_part2(4)
    assert profiles.is_np(lists["L4"])


def test_np_counts_against_oracle(np33, np43):
    oracle33 = oracles.np_members(3, 3)
    assert len(np33) == len(oracle33) == 102
    assert set(np33.profiles) == set(oracle33)
    assert oracles.np_count_inclusion_exclusion(3, 3) == 102

    oracle43 = oracles.np_members(4, 3)
    assert len(np43) == len(oracle43) == 906
    assert set(np43.profiles) == set(oracle43)
    assert oracles.np_count_inclusion_exclusion(4, 3) == 906


def test_np_3_4_count_against_oracle(np34):
    assert len(np34) == 3624
    assert oracles.np_count_inclusion_exclusion(3, 4) == 3624


def test_np_membership_predicate_boundary(np33):
    universe = oracles.all_orders(3)
    rng = random.Random(0)
    excluded = 0
    while excluded < 50:
        candidate = tuple(rng.choice(universe) for _ in range(3))
        if candidate not in np33:
            assert oracles.has_dominated_pair(candidate)
            excluded += 1
    for p in np33:
        assert not oracles.has_dominated_pair(p)


def test_np_trivial_universe():
    with pytest.warns(UserWarning):
        domain = profiles.enumerate_np(3, 1)
    assert len(domain) == 1


def test_np_parameter_guards():
    with pytest.raises(ParameterError):
        profiles.enumerate_np(1, 3)
    with pytest.raises(SizeCapError):
        profiles.enumerate_np(8, 4, cap=1000)
    with pytest.warns(UserWarning):
        profiles.enumerate_np(2, 3)


def test_canonical_order_is_lexicographic(np33):
    assert list(np33.profiles) == sorted(np33.profiles)


def test_np_star(np33, star33, np43, star43):
    assert len(star33) == 6
    assert set(star33.profiles) == set(oracles.np_star_members(3, 3))
    # with the last two voters sharing R, the remaining voter must invert R
    for p in star33:
        assert p[0] == p[1][::-1]
    assert len(star43) == len(oracles.np_star_members(4, 3)) == 102
    for p in star33:
        assert profiles.is_np(p)
    with pytest.raises(DomainKindError):
        profiles.np_star(star33)


def test_variants_bounds_and_membership(np33):
    for p in list(np33)[:20]:
        for voter in range(3):
            vs = profiles.variants(np33, p, voter)
            assert len(vs) <= 5
            assert p not in vs
            for q in vs:
                assert q in np33
                assert sum(a != b for a, b in zip(p, q)) == 1


def test_variant_symmetry_exhaustive(np33):
    for p in np33:
        for voter in range(3):
            for q in profiles.variants(np33, p, voter):
                assert p in profiles.variants(np33, q, voter)


def test_variants_needs_membership(np33):
    with pytest.raises(MembershipError):
        profiles.variants(np33, (XYZ, XYZ, XYZ), 0)


def test_forced_voter_has_no_variants(np33, star33):
    """When the last two voters agree, the first voter's ordering is the
    unique one keeping the profile undominated, so it has no variants."""
    for p in star33:
        assert profiles.variants(np33, p, 0) == ()


def test_profile_codec():
    p = (XYZ, ZYX, XYZ)
    assert profiles.encode_profile(p) == "xyz|zyx|xyz"
    assert profiles.decode_profile("xyz|zyx|xyz", 3, 3) == p
    with pytest.raises(TextFormatError):
        profiles.decode_profile("xyz|zy", 2, 3)
    with pytest.raises(TextFormatError):
        profiles.decode_profile("xyz|zyx", 3, 3)


def test_domain_file_round_trip(star33):
    text = profiles.dump_domain(star33)
    loaded = profiles.load_domain(text, 3, 3, kind=profiles.CUSTOM)
    assert loaded.profiles == star33.profiles
    # scrambled files get canonical indices back
    lines = text.strip().splitlines()
    scrambled = "\n".join(reversed(lines))
    reloaded = profiles.load_domain(scrambled, 3, 3)
    assert reloaded.profiles == star33.profiles


def test_load_domain_enforces_kind():
    with pytest.raises(TextFormatError):
        profiles.load_domain("xyz|xyz|xyz\n", 3, 3, kind=profiles.NP)
    with pytest.raises(TextFormatError):
        profiles.load_domain("zyx|xyz|xzy\n", 3, 3, kind=profiles.NP_STAR)
    loaded = profiles.load_domain("zyx|xyz|xyz\n", 3, 3,
                                  kind=profiles.NP_STAR)
    assert len(loaded) == 1


def test_domain_index_lookup(np33):
    for i, p in enumerate(np33):
        assert np33.index_of(p) == i
