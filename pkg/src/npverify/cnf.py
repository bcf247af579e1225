"""Propositional encoding of "a strategy-proof rule with extra properties
exists on this domain", plus DIMACS interchange.

Variables: one per (profile, alternative) pair, numbered
``index * m + alternative + 1`` over the domain's canonical profile index,
so formulas are reproducible across runs.  The base encoding states that
every profile picks exactly one alternative and that no voter can gain by
switching to any variant; scenario constraints are appended on top.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import orders, profiles
from .errors import (
    EncodingViolationError,
    ScenarioError,
    TextFormatError,
)
from .profiles import Domain
from .rules import Rule

Clause = tuple[int, ...]


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[Clause, ...]
    n: int
    m: int
    domain_size: int

    def var(self, profile_index: int, alt: int) -> int:
        if not (0 <= profile_index < self.domain_size and 0 <= alt < self.m):
            raise EncodingViolationError(
                f"no variable for profile {profile_index}, alternative {alt}")
        return profile_index * self.m + alt + 1

    def profile_alt(self, var: int) -> tuple[int, int]:
        if not 1 <= var <= self.num_vars:
            raise EncodingViolationError(f"variable {var} out of range")
        return (var - 1) // self.m, (var - 1) % self.m

    def extended(self, extra: Iterable[Clause]) -> "CnfFormula":
        return CnfFormula(self.num_vars, self.clauses + tuple(extra),
                          self.n, self.m, self.domain_size)


Model = dict[int, bool]


def encode_base(domain: Domain) -> CnfFormula:
    """Exactly-one per profile plus both directions of the
    strategy-proofness constraint for every h-variant pair."""
    m = domain.m
    clauses: list[Clause] = []

    def var(i: int, a: int) -> int:
        return i * m + a + 1

    for i in range(len(domain)):
        clauses.append(tuple(var(i, a) for a in range(m)))
        for a in range(m):
            for b in range(a + 1, m):
                clauses.append((-var(i, a), -var(i, b)))

    seen: set[Clause] = set()
    for i, j, voter in profiles.variant_pairs(domain):
        p = domain.profiles[i]
        q = domain.profiles[j]
        for side_i, side_j, ordering in ((i, j, p[voter]), (j, i, q[voter])):
            # voter would deviate from side_i to side_j to trade a for b
            for pos_b in range(m):
                for pos_a in range(pos_b + 1, m):
                    clause = (-var(side_i, ordering[pos_a]),
                              -var(side_j, ordering[pos_b]))
                    key = (min(clause), max(clause))
                    if key not in seen:
                        seen.add(key)
                        clauses.append(clause)
    return CnfFormula(num_vars=len(domain) * m, clauses=tuple(clauses),
                      n=domain.n, m=domain.m, domain_size=len(domain))


# -- scenario constraints -------------------------------------------------


@dataclass(frozen=True)
class Fix:
    """Unit clause: profile `index` selects `alt`."""

    index: int
    alt: int

    def clauses(self, f: CnfFormula) -> list[Clause]:
        return [(f.var(self.index, self.alt),)]

    def check(self, rule: Rule) -> bool:
        return rule.table[self.index] == self.alt


@dataclass(frozen=True)
class Attains:
    """`alt` is selected somewhere among the profile `indices`."""

    alt: int
    indices: tuple[int, ...]

    def clauses(self, f: CnfFormula) -> list[Clause]:
        return [tuple(f.var(i, self.alt) for i in self.indices)]

    def check(self, rule: Rule) -> bool:
        return any(rule.table[i] == self.alt for i in self.indices)


@dataclass(frozen=True)
class Excludes:
    """`alt` is never selected among the profile `indices`."""

    alt: int
    indices: tuple[int, ...]

    def clauses(self, f: CnfFormula) -> list[Clause]:
        return [(-f.var(i, self.alt),) for i in self.indices]

    def check(self, rule: Rule) -> bool:
        return all(rule.table[i] != self.alt for i in self.indices)


@dataclass(frozen=True)
class RangeSubset:
    """Selections among the profile `indices` stay inside `alts`."""

    alts: frozenset[int]
    indices: tuple[int, ...]

    def clauses(self, f: CnfFormula) -> list[Clause]:
        if not self.alts:
            raise ScenarioError("empty declared range")
        out = []
        for i in self.indices:
            for a in range(f.m):
                if a not in self.alts:
                    out.append((-f.var(i, a),))
        return out

    def check(self, rule: Rule) -> bool:
        return all(rule.table[i] in self.alts for i in self.indices)


@dataclass(frozen=True)
class NotDictator:
    """Some profile selects an alternative other than the voter's
    top-of-range; encoded against an explicitly declared range set."""

    voter: int
    range_alts: frozenset[int]
    domain: Domain = field(repr=False, compare=False)

    def clauses(self, f: CnfFormula) -> list[Clause]:
        if not self.range_alts:
            raise ScenarioError("empty declared range")
        lits = []
        for i, p in enumerate(self.domain):
            top = min(self.range_alts, key=p[self.voter].index)
            lits.extend(f.var(i, a) for a in range(f.m) if a != top)
        return [tuple(lits)]

    def check(self, rule: Rule) -> bool:
        for i, p in enumerate(self.domain):
            top = min(self.range_alts, key=p[self.voter].index)
            if rule.table[i] != top:
                return True
        return False


ScenarioConstraint = Fix | Attains | Excludes | RangeSubset | NotDictator


def add_scenario(f: CnfFormula, constraint: ScenarioConstraint) -> CnfFormula:
    return f.extended(constraint.clauses(f))


# -- DIMACS interchange ----------------------------------------------------


def export_dimacs(f: CnfFormula) -> str:
    out = io.StringIO()
    out.write(f"p cnf {f.num_vars} {len(f.clauses)}\n")
    for clause in f.clauses:
        out.write(" ".join(str(lit) for lit in clause))
        out.write(" 0\n")
    return out.getvalue()


def export_varmap(f: CnfFormula, domain: Domain) -> str:
    """Sidecar map: ``<var> <profile-encoding> <alternative-letter>``."""
    letters = orders.letters_for(f.m)
    lines = []
    for var in range(1, f.num_vars + 1):
        i, a = f.profile_alt(var)
        lines.append(f"{var} {profiles.encode_profile(domain.profiles[i])} "
                     f"{letters[a]}")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    num_vars = None
    num_clauses = None
    clauses: list[list[int]] = []
    pending: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise TextFormatError(f"bad DIMACS header at line {lineno}")
            num_vars, num_clauses = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise TextFormatError(f"clause before header at line {lineno}")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(pending)
                pending = []
            else:
                pending.append(lit)
    if pending:
        raise TextFormatError("last clause not zero-terminated")
    if num_clauses is not None and len(clauses) != num_clauses:
        raise TextFormatError(
            f"header promises {num_clauses} clauses, found {len(clauses)}")
    return num_vars or 0, clauses


def import_model(text: str, f: CnfFormula) -> Model:
    """Parse solver ``v``-lines into a variable assignment."""
    model: Model = {}
    for line in text.splitlines():
        line = line.strip()
        if not line.startswith("v"):
            continue
        for tok in line[1:].split():
            lit = int(tok)
            if lit == 0:
                continue
            var = abs(lit)
            if not 1 <= var <= f.num_vars:
                raise TextFormatError(f"model literal {lit} out of range")
            model[var] = lit > 0
    if len(model) < f.num_vars:
        missing = f.num_vars - len(model)
        raise TextFormatError(f"model leaves {missing} variables unassigned")
    return model


def model_from_assignment(values: Sequence[bool], f: CnfFormula) -> Model:
    """Adapt a solver's dense assignment (index 0 unused) to a Model."""
    return {var: bool(values[var]) for var in range(1, f.num_vars + 1)}


def decode_model(model: Model, f: CnfFormula, domain: Domain) -> Rule:
    """Read the selected alternative per profile out of a satisfying
    model; a profile with no or several true variables indicates a broken
    solver or model and is rejected."""
    table = []
    for i in range(f.domain_size):
        chosen = [a for a in range(f.m) if model[f.var(i, a)]]
        if len(chosen) != 1:
            raise EncodingViolationError(
                f"profile {i} has {len(chosen)} selected alternatives")
        table.append(chosen[0])
    return Rule(domain, table, label="decoded")


def rule_assignment(rule: Rule, f: CnfFormula) -> Model:
    """The model corresponding to a table rule (for completeness checks)."""
    model: Model = {}
    for i, value in enumerate(rule.table):
        for a in range(f.m):
            model[f.var(i, a)] = a == value
    return model


def satisfies(model: Model, f: CnfFormula) -> bool:
    return all(
        any(model[abs(lit)] == (lit > 0) for lit in clause)
        for clause in f.clauses)
