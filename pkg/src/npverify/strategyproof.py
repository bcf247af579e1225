"""Manipulation detection, strategy-proofness certification and
single-voter sequence paths between profiles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from . import orders, profiles
from .errors import MembershipError
from .profiles import Domain, Profile
from .rules import Rule


@dataclass(frozen=True)
class ManipulationWitness:
    """Voter `voter` gains at profile `at` by reporting as in `via`."""

    at: int
    via: int
    voter: int
    outcome_at: int
    outcome_via: int

    def render(self, domain: Domain) -> str:
        letters = orders.letters_for(domain.m)
        return (f"voter {self.voter + 1} manipulates at "
                f"{profiles.encode_profile(domain.profiles[self.at])} via "
                f"{profiles.encode_profile(domain.profiles[self.via])}: "
                f"g={letters[self.outcome_at]} -> g={letters[self.outcome_via]}")


def find_manipulation(rule: Rule, domain: Domain | None = None) -> ManipulationWitness | None:
    """First manipulation in canonical order (lowest profile index, then
    voter, then variant), or None iff the rule is strategy-proof on the
    domain.  Each unordered variant pair is visited once and checked in
    both directions."""
    domain = rule.domain if domain is None else domain
    table = {p: rule.evaluate(p) for p in domain} if domain is not rule.domain else None
    value = (lambda i: rule.table[i]) if table is None else (
        lambda i: table[domain.profiles[i]])
    for i, j, voter in profiles.variant_pairs(domain):
        gi, gj = value(i), value(j)
        if gi == gj:
            continue
        p, q = domain.profiles[i], domain.profiles[j]
        if orders.ranks_above(p[voter], gj, gi):
            return ManipulationWitness(at=i, via=j, voter=voter,
                                       outcome_at=gi, outcome_via=gj)
        if orders.ranks_above(q[voter], gi, gj):
            return ManipulationWitness(at=j, via=i, voter=voter,
                                       outcome_at=gj, outcome_via=gi)
    return None


@dataclass(frozen=True)
class SequencePath:
    """Chain of single-voter profile changes, all inside the domain."""

    steps: tuple[tuple[int, int], ...]  # (profile index, changed voter)


def standard_sequence(domain: Domain, start: Profile, goal: Profile,
                      order=None) -> SequencePath | None:
    """Replace voters' orderings one at a time, start -> goal, in the given
    voter order (default ascending).  None if an intermediate profile
    leaves the domain."""
    domain.index_of(start)
    domain.index_of(goal)
    if order is None:
        order = range(domain.n)
    seen = set()
    for voter in order:
        if voter in seen:
            raise MembershipError(f"voter {voter + 1} repeated in sequence order")
        seen.add(voter)
    changed = {v for v in range(domain.n) if start[v] != goal[v]}
    if not changed <= seen:
        missing = sorted(v + 1 for v in changed - seen)
        raise MembershipError(f"sequence order never switches voters {missing}")
    current = start
    steps = []
    for voter in order:
        if current[voter] == goal[voter]:
            continue
        current = current[:voter] + (goal[voter],) + current[voter + 1:]
        if current not in domain:
            return None
        steps.append((domain.index_of(current), voter))
    return SequencePath(tuple(steps))


@dataclass(frozen=True)
class PropagationResult:
    """Candidate alternatives per profile after closing the assignments
    under the two-sided variant constraints."""

    candidates: tuple[frozenset[int], ...]
    contradiction: int | None  # profile index whose candidate set emptied

    @property
    def forced(self) -> dict[int, int]:
        return {i: next(iter(c)) for i, c in enumerate(self.candidates)
                if len(c) == 1}


def forced_value_propagation(domain: Domain,
                             assignments: Mapping[int, int]) -> PropagationResult:
    """Close a partial rule under strategy-proofness between h-variants.

    Works over candidate sets: alternative b survives at q only while some
    candidate a at a variant p keeps the pair (a, b) manipulation-free in
    both directions.  Monotone (candidates only shrink) and idempotent at
    the fixed point; an emptied set is reported as a contradiction, not
    raised.
    """
    m = domain.m
    full = frozenset(range(m))
    cands: list[frozenset[int]] = [full] * len(domain)
    for idx, alt in assignments.items():
        cands[idx] = cands[idx] & {alt}
        if not cands[idx]:
            return PropagationResult(tuple(cands), contradiction=idx)

    neighbours: dict[int, list[tuple[int, int]]] = {}
    for i, j, voter in profiles.variant_pairs(domain):
        neighbours.setdefault(i, []).append((j, voter))
        neighbours.setdefault(j, []).append((i, voter))

    def allowed(a: int, b: int, p: Profile, q: Profile, voter: int) -> bool:
        if a == b:
            return True
        return not (orders.ranks_above(p[voter], b, a)
                    or orders.ranks_above(q[voter], a, b))

    work = list(range(len(domain)))
    in_work = [True] * len(domain)
    while work:
        i = work.pop()
        in_work[i] = False
        p = domain.profiles[i]
        for j, voter in neighbours.get(i, ()):
            q = domain.profiles[j]
            kept = frozenset(
                b for b in cands[j]
                if any(allowed(a, b, p, q, voter) for a in cands[i]))
            if kept != cands[j]:
                cands[j] = kept
                if not kept:
                    return PropagationResult(tuple(cands), contradiction=j)
                if not in_work[j]:
                    work.append(j)
                    in_work[j] = True
    return PropagationResult(tuple(cands), contradiction=None)
