"""Profiles, Pareto-domination tests and the Non-Paretian domains.

A profile is a tuple of orderings, one per voter.  Domains are materialized,
deduplicated and canonically indexed (lexicographic over voter orderings) so
that profile indices, and therefore CNF variable numbers, are reproducible
across runs.  Voters are 0-based internally; all user-facing text is 1-based.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

from . import orders
from .errors import (
    DomainKindError,
    InvalidPairError,
    MembershipError,
    ParameterError,
    SizeCapError,
    TextFormatError,
)
from .orders import Ordering

Profile = tuple[Ordering, ...]

NP = "NP"
NP_STAR = "NP_STAR"
NP_WZ = "NP_WZ"
CUSTOM = "CUSTOM"

DEFAULT_RAW_CAP = 5_000_000


@dataclass(frozen=True)
class Domain:
    """A finite, canonically indexed set of profiles of one shape (n, m)."""

    profiles: tuple[Profile, ...]
    n: int
    m: int
    kind: str = CUSTOM
    wz: tuple[int, int] | None = None
    _index: dict[Profile, int] = field(
        default_factory=dict, repr=False, compare=False, hash=False)

    def __post_init__(self):
        index = {p: i for i, p in enumerate(self.profiles)}
        if len(index) != len(self.profiles):
            raise ParameterError("duplicate profiles in domain")
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.profiles)

    def __iter__(self):
        return iter(self.profiles)

    def __contains__(self, profile: Profile) -> bool:
        return profile in self._index

    def index_of(self, profile: Profile) -> int:
        try:
            return self._index[profile]
        except KeyError:
            raise MembershipError(
                f"profile {encode_profile(profile)} not in this domain"
            ) from None

    def describe(self) -> str:
        tag = self.kind
        if self.kind == NP_WZ and self.wz is not None:
            letters = orders.letters_for(self.m)
            tag = f"NP_WZ({letters[self.wz[0]]},{letters[self.wz[1]]})"
        return f"{tag}(n={self.n}, m={self.m}, size={len(self)})"


def pareto_dominates(profile: Profile, a: int, b: int) -> bool:
    """True iff every voter ranks `a` above `b`."""
    if a == b:
        raise InvalidPairError("pareto_dominates needs two distinct alternatives")
    return all(orders.ranks_above(v, a, b) for v in profile)


def is_np(profile: Profile) -> bool:
    """True iff no ordered pair of alternatives is Pareto-dominated."""
    m = len(profile[0])
    if len(profile) == 1:
        return m == 1
    positions = [{a: v.index(a) for a in v} for v in profile]
    for a in range(m):
        for b in range(a + 1, m):
            above = {pos[a] < pos[b] for pos in positions}
            if len(above) != 2:
                return False
    return True


def enumerate_np(n: int, m: int, cap: int = DEFAULT_RAW_CAP) -> Domain:
    """All profiles over (n, m) in which no alternative Pareto-dominates
    another, canonically indexed."""
    if n < 2:
        raise ParameterError(f"need at least 2 voters, got n={n}")
    if m < 1:
        raise ParameterError(f"need at least 1 alternative, got m={m}")
    if n < 3 or m < 3:
        warnings.warn(
            f"NP(n={n}, m={m}) is outside the standing assumptions "
            "(n >= 3, m >= 3); exposed for oracle use only",
            stacklevel=2)
    universe = orders.all_orderings(m)
    raw = len(universe) ** n
    if raw > cap:
        raise SizeCapError(
            f"(m!)^n = {raw} raw profiles exceeds the cap of {cap}")
    members = tuple(p for p in itertools.product(universe, repeat=n)
                    if is_np(p))
    return Domain(members, n=n, m=m, kind=NP)


def np_star(domain: Domain) -> Domain:
    """The subdomain on which the last two voters agree."""
    if domain.kind != NP:
        raise DomainKindError(f"np_star needs an NP domain, got {domain.kind}")
    if domain.n < 3:
        raise ParameterError("np_star needs n >= 3")
    members = tuple(p for p in domain if p[-2] == p[-1])
    return Domain(members, n=domain.n, m=domain.m, kind=NP_STAR)


def variants(domain: Domain, profile: Profile, voter: int) -> tuple[Profile, ...]:
    """All domain members that differ from `profile` exactly at `voter`
    (0-based), excluding `profile` itself."""
    domain.index_of(profile)
    out = []
    for ordering in orders.all_orderings(domain.m):
        if ordering == profile[voter]:
            continue
        q = profile[:voter] + (ordering,) + profile[voter + 1:]
        if q in domain:
            out.append(q)
    return tuple(out)


def variant_pairs(domain: Domain):
    """Yield (p_index, q_index, voter) for every unordered h-variant pair,
    each exactly once, in canonical order (p_index < q_index)."""
    for i, p in enumerate(domain.profiles):
        for voter in range(domain.n):
            for q in variants(domain, p, voter):
                j = domain.index_of(q)
                if j > i:
                    yield i, j, voter


def relabel_profile(profile: Profile, perm) -> Profile:
    """Rename alternatives consistently across all voters."""
    return tuple(orders.relabel(v, perm) for v in profile)


def encode_profile(profile: Profile) -> str:
    """Voter orderings as letter strings joined by ``|``."""
    return "|".join(orders.encode_ordering(v) for v in profile)


def decode_profile(text: str, n: int, m: int) -> Profile:
    parts = text.split("|")
    if len(parts) != n:
        raise TextFormatError(
            f"profile text has {len(parts)} voters, expected {n}")
    out = []
    offset = 0
    for part in parts:
        try:
            out.append(orders.decode_ordering(part, m))
        except TextFormatError as exc:
            pos = offset if exc.position is None else offset + exc.position
            raise TextFormatError(str(exc), position=pos) from None
        offset += len(part) + 1
    return tuple(out)


def dump_domain(domain: Domain) -> str:
    """One profile per line; line number - 1 is the canonical index."""
    return "".join(encode_profile(p) + "\n" for p in domain)


def load_domain(text: str, n: int, m: int, kind: str = CUSTOM) -> Domain:
    """Parse a domain file.  Indices are reassigned canonically, so files
    not emitted by this tool still load into a well-formed domain.  With a
    non-custom kind, every member must satisfy the kind's predicate."""
    members = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            profile = decode_profile(line, n, m)
        except TextFormatError as exc:
            raise TextFormatError(f"line {lineno}: {exc}") from None
        if kind in (NP, NP_STAR) and not is_np(profile):
            raise TextFormatError(
                f"line {lineno}: profile has a Pareto-dominated pair")
        if kind == NP_STAR and profile[-2] != profile[-1]:
            raise TextFormatError(
                f"line {lineno}: last two voters disagree")
        members.append(profile)
    members = sorted(set(members))
    return Domain(tuple(members), n=n, m=m, kind=kind)
