
import pytest

from npverify import collapse, orders, profiles, rules
from npverify.collapse import make_spec
from npverify.errors import ContractError, InvalidPairError, MembershipError

A, B, C, D = 0, 1, 2, 3


@pytest.fixture(scope="module")
def spec(np34):
    return make_spec(np34, A, B)


def test_sigma_examples():
    # voter (w, y, z, x): exactly y between w and z
    voter = (A, C, B, D)
    stats = collapse.sigma((voter,), A, B)
    assert stats.per_voter == (1,) and stats.total == 1
    contiguous = ((A, B, C, D),)
    assert collapse.sigma(contiguous, A, B).total == 0
    p = ((A, C, B, D), (D, A, C, B), (B, D, C, A))
    stats = collapse.sigma(p, A, B)
    assert stats.total == sum(stats.per_voter)
    with pytest.raises(InvalidPairError):
        collapse.sigma(p, A, A)


def test_contiguous_domain(np34):
    wz = collapse.contiguous_domain(3, 4, A, B, source=np34)
    assert len(wz) > 0
    for p in wz:
        assert collapse.sigma(p, A, B).total == 0
        assert p in np34
    # sigma zero exactly characterizes membership
    members = set(wz.profiles)
    for p in np34:
        assert (collapse.sigma(p, A, B).total == 0) == (p in members)
    # an explicit member: adjacent pair everywhere, no dominated pair
    explicit = ((A, B, C, D), (D, C, B, A), (B, A, D, C))
    assert explicit in wz


def test_spec_mapping(spec):
    assert spec.x_star == 2
    assert spec.to_target == {C: 0, D: 1}
    assert spec.to_source == {0: C, 1: D}
    assert "->" in spec.describe()


def test_extend_profile_exhaustive(np34, spec):
    """Every reduced profile has at least one extension, every extension
    restricts back to it, and the pair occupies the fused slot."""
    for p in spec.target:
        extensions = collapse.extend_profile(p, spec)
        assert extensions
        for r in extensions:
            assert r in np34
            assert collapse.sigma(r, A, B).total == 0
            assert collapse.collapse_profile(r, spec) == p
            for voter_r, voter_p in zip(r, p):
                kept = orders.project(voter_r, {C, D})
                expected = tuple(spec.to_source[a] for a in voter_p
                                 if a != spec.x_star)
                assert kept == expected
                slot = voter_p.index(spec.x_star) + 1
                assert (orders.position(voter_r, A) == slot
                        or orders.position(voter_r, B) == slot)


def test_extend_profile_block_orders(spec):
    p = spec.target.profiles[0]
    extensions = collapse.extend_profile(p, spec)
    assert 1 <= len(extensions) <= 2 ** 3


def test_collapse_rule_dictator(np34, spec):
    for voter in range(3):
        g = rules.dictator(np34, voter)
        collapsed, report = collapse.collapse_rule(g, spec)
        assert report.ok
        assert collapsed is not None
        # the collapsed rule is the dictator on the reduced universe
        expected = rules.dictator(spec.target, voter)
        assert collapsed.table == expected.table
        assert rules.range_of(collapsed).attained == {0, 1, 2}


def test_collapse_rule_constant(np34, spec):
    g = rules.constant(np34, C)
    collapsed, report = collapse.collapse_rule(g, spec)
    assert report.ok
    assert collapsed.table == rules.constant(spec.target, spec.to_target[C]).table


def test_collapse_rule_reports_disagreement(np34, spec):
    """A rule that keys on the internal order of the fused pair cannot
    collapse; the report names the profiles."""
    g = rules.from_function(
        np34, lambda p: C if orders.ranks_above(p[0], A, B) else D,
        label="pair-sensitive")
    collapsed, report = collapse.collapse_rule(g, spec)
    assert collapsed is None
    assert report.disagreements


def test_reduce_sigma_step_trivial_certificate(np34):
    g = rules.dictator(np34, 0)
    r = next(p for p in np34 if not orders.between(p[1], A, B)
             and orders.ranks_above(p[1], A, B))
    outcome = collapse.reduce_sigma_step(g, r, 1, A, B, part=1)
    assert outcome.kind == "certified" and outcome.trivial


def test_reduce_sigma_step_found_for_dictator(np34):
    g = rules.dictator(np34, 0)
    found = certified = 0
    for r in np34:
        for part in (1, 2):
            if not orders.ranks_above(r[1], A, B):
                continue
            if not orders.between(r[1], A, B):
                continue
            if g.evaluate(r) in set(orders.between(r[1], A, B)) | (
                    {A} if part == 2 else set()):
                continue
            outcome = collapse.reduce_sigma_step(g, r, 1, A, B, part)
            if outcome.kind == "found":
                found += 1
                u = outcome.profile
                assert u in np34
                assert g.evaluate(u) == g.evaluate(r)
                assert (len(orders.between(u[1], A, B))
                        < len(orders.between(r[1], A, B)))
                # only voter 2 moved, and only inside the bracket:
                # positions above a and below b are untouched
                assert all(u[i] == r[i] for i in range(3) if i != 1)
                ia, ib = r[1].index(A), r[1].index(B)
                assert u[1][:ia] == r[1][:ia]
                assert u[1][ib + 1:] == r[1][ib + 1:]
                # the set of alternatives voter 2 prefers to the winner
                # has not expanded
                winner = g.evaluate(r)
                before = set(r[1][:r[1].index(winner)])
                after = set(u[1][:u[1].index(winner)])
                assert after <= before
            else:
                certified += 1
    assert found > 0 and certified > 0


def test_reduce_sigma_step_contract_errors(np34):
    g = rules.dictator(np34, 0)
    r = next(p for p in np34 if orders.ranks_above(p[1], B, A))
    with pytest.raises(ContractError):
        collapse.reduce_sigma_step(g, r, 1, A, B, part=1)
    r = next(p for p in np34
             if g.evaluate(p) == A and orders.ranks_above(p[0], A, B)
             and orders.between(p[0], A, B))
    with pytest.raises(ContractError):
        collapse.reduce_sigma_step(g, r, 0, A, B, part=2)


def test_descent_trivial_when_contiguous(np34, spec):
    g = rules.dictator(np34, 0)
    wz = collapse.contiguous_domain(3, 4, A, B, source=np34)
    r = wz.profiles[0]
    result = collapse.reduce_to_contiguous(g, r, spec)
    assert result.ok
    assert len(result.steps) == 1
    assert result.steps[0].move == "start"


def test_descent_dictators_single_pair(np34, spec):
    """Every starting profile walks down to the contiguous subdomain with
    sigma strictly decreasing and the winner preserved."""
    for voter in (0, 2):
        g = rules.dictator(np34, voter)
        for r in np34:
            result = collapse.reduce_to_contiguous(g, r, spec)
            assert result.ok, result.render(4)
            sigmas = [s.sigma for s in result.steps]
            assert sigmas[-1] == 0
            assert all(a > b for a, b in zip(sigmas, sigmas[1:]))
            values = [s.value for s in result.steps]
            start = values[0]
            if start not in (A, B):
                assert all(v == start for v in values)
            else:
                assert all(v in (A, B) for v in values)
            final = result.final
            collapsed, _ = collapse.collapse_rule(g, spec)
            mapped = (spec.x_star if values[-1] in (A, B)
                      else spec.to_target[values[-1]])
            assert collapsed.evaluate(
                collapse.collapse_profile(final, spec)) == mapped


def test_descent_trace_rendering(np34, spec):
    g = rules.dictator(np34, 2)
    r = next(p for p in np34 if collapse.sigma(p, A, B).total > 1)
    result = collapse.reduce_to_contiguous(g, r, spec)
    text = result.render(4)
    assert "σ=" in text and "profile=" in text and "move=" in text


def test_collapse_profile_requires_contiguity(np34, spec):
    r = next(p for p in np34 if collapse.sigma(p, A, B).total > 0)
    with pytest.raises(MembershipError):
        collapse.collapse_profile(r, spec)


def test_dictator_restriction_fallback(np34):
    """Drive the three-alternative restriction branch directly: with w, x,
    z in consecutive slots for every voter, the restriction of a dictator
    is dictatorial and the pulled-back profile drops sigma to zero."""
    g = rules.dictator(np34, 0)
    descent = collapse._Descent(g, A, B)
    r = ((C, A, B, D), (D, A, C, B), (B, C, A, D))
    assert r in np34
    assert g.evaluate(r) == C
    assert collapse.sigma(r, A, B).total == 2
    out = descent._mu_fallback(r, r, C, "test")
    assert out is not None
    u, move = out
    assert "dictator-restriction" in move
    assert u in np34
    assert g.evaluate(u) == C
    assert collapse.sigma(u, A, B).total == 0
    # without consecutive slots the branch declines to apply
    scattered = next(
        p for p in np34
        if g.evaluate(p) == C and collapse.sigma(p, A, B).total > 0
        and any(sorted(v.index(a) for a in (A, B, C))[2]
                - sorted(v.index(a) for a in (A, B, C))[0] != 2
                for v in p))
    assert descent._mu_fallback(scattered, scattered, C, "test") is None
