"""Strict linear orderings on a finite alternative set.

An ordering is a tuple of alternative indices, best to worst; alternatives
are the integers ``0..m-1``.  The tuple is a permutation, which already
encodes completeness, asymmetry and transitivity, and makes rank queries
and hashing cheap.  For ``m == 3`` the conventional letters are ``x, y, z``
(mapped to 0, 1, 2); other universe sizes use letters ``a..z``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    EmptyUniverseError,
    InvalidAlternativeError,
    InvalidSubsetError,
    RejectedMoveError,
    TextFormatError,
)

Ordering = tuple[int, ...]

_XYZ = "xyz"
_ABC = "abcdefghijklmnopqrstuvwxyz"


def validate_ordering(order: Ordering, m: int | None = None) -> None:
    """Raise unless `order` is a permutation of 0..m-1."""
    size = len(order) if m is None else m
    if len(order) != size or sorted(order) != list(range(size)):
        raise InvalidAlternativeError(
            f"not a permutation of 0..{size - 1}: {order!r}")


def all_orderings(m: int) -> tuple[Ordering, ...]:
    """All m! strict orderings, in lexicographic order."""
    if m < 1:
        raise EmptyUniverseError("need at least one alternative")
    return tuple(itertools.permutations(range(m)))


def position(order: Ordering, alt: int) -> int:
    """1-based rank of `alt`; rank 1 is the top."""
    try:
        return order.index(alt) + 1
    except ValueError:
        raise InvalidAlternativeError(
            f"alternative {alt} not in ordering {order!r}") from None


def ranks_above(order: Ordering, a: int, b: int) -> bool:
    """True iff `a` is preferred to `b` under `order`."""
    return order.index(a) < order.index(b)


def invert(order: Ordering) -> Ordering:
    """Reverse every pairwise comparison."""
    return order[::-1]


def between(order: Ordering, a: int, b: int) -> tuple[int, ...]:
    """Alternatives strictly between `a` and `b`, top-down, order-agnostic
    in the pair (the bracket may be given either way up)."""
    i, j = order.index(a), order.index(b)
    if i > j:
        i, j = j, i
    return order[i + 1:j]


@dataclass(frozen=True)
class Swap:
    a: int
    b: int


@dataclass(frozen=True)
class RaiseToTop:
    a: int


@dataclass(frozen=True)
class LowerToBottom:
    a: int


@dataclass(frozen=True)
class Shift:
    """Move `a` to 1-based `rank`, everything else shifting over.

    With a `barrier` alternative set, the move is rejected if it would
    change the relative order of `a` and the barrier.
    """

    a: int
    rank: int
    barrier: int | None = None


Move = Swap | RaiseToTop | LowerToBottom | Shift


def apply_move(order: Ordering, move: Move) -> Ordering:
    """Apply a rearrangement move; alternatives not named keep their
    relative order."""
    if isinstance(move, Swap):
        i, j = order.index(move.a), order.index(move.b)
        out = list(order)
        out[i], out[j] = out[j], out[i]
        return tuple(out)
    if isinstance(move, RaiseToTop):
        i = order.index(move.a)
        return (order[i],) + order[:i] + order[i + 1:]
    if isinstance(move, LowerToBottom):
        i = order.index(move.a)
        return order[:i] + order[i + 1:] + (order[i],)
    if isinstance(move, Shift):
        return shift(order, move.a, move.rank, move.barrier)
    raise RejectedMoveError(f"unknown move {move!r}")


def shift(order: Ordering, a: int, rank: int,
          barrier: int | None = None) -> Ordering:
    """Relocate `a` to 1-based `rank`; reject barrier crossings."""
    if not 1 <= rank <= len(order):
        raise RejectedMoveError(f"rank {rank} out of range 1..{len(order)}")
    i = order.index(a)
    rest = list(order)
    del rest[i]
    rest.insert(rank - 1, a)
    out = tuple(rest)
    if barrier is not None:
        before = ranks_above(order, a, barrier)
        after = ranks_above(out, a, barrier)
        if before != after:
            raise RejectedMoveError(
                f"shifting {a} to rank {rank} crosses barrier {barrier}")
    return out


def project(order: Ordering, subset) -> tuple[int, ...]:
    """Subsequence of `order` containing only members of `subset`, with the
    original labels kept."""
    keep = frozenset(subset)
    return tuple(a for a in order if a in keep)


def restrict(order: Ordering, subset) -> tuple[Ordering, dict[int, int]]:
    """Restriction to `subset`, re-indexed canonically (sorted members map
    to 0..k-1).  Returns the re-indexed ordering and the index mapping."""
    keep = frozenset(subset)
    if not keep:
        raise InvalidSubsetError("restriction subset is empty")
    if not keep <= set(order):
        raise InvalidSubsetError(
            f"{sorted(keep)} is not a subset of the universe of {order!r}")
    mapping = {alt: i for i, alt in enumerate(sorted(keep))}
    return tuple(mapping[a] for a in order if a in keep), mapping


def relabel(order: Ordering, perm) -> Ordering:
    """Rename alternatives: `perm[a]` takes the place of `a` in the result
    (perm is a permutation given as a sequence or mapping)."""
    return tuple(perm[a] for a in order)


def letters_for(m: int) -> str:
    if m < 1:
        raise EmptyUniverseError("need at least one alternative")
    if m > 26:
        raise TextFormatError(f"no letter encoding for m={m} > 26")
    return _XYZ if m == 3 else _ABC[:m]


def encode_ordering(order: Ordering) -> str:
    """Letters best-to-worst, e.g. ``xyz`` for m=3; bit-exact."""
    letters = letters_for(len(order))
    return "".join(letters[a] for a in order)


def decode_ordering(text: str, m: int) -> Ordering:
    letters = letters_for(m)
    if len(text) != m:
        raise TextFormatError(
            f"ordering text {text!r} has length {len(text)}, expected {m}")
    out = []
    for pos_, ch in enumerate(text):
        idx = letters.find(ch)
        if idx < 0:
            raise TextFormatError(f"unknown letter {ch!r}", position=pos_)
        out.append(idx)
    ordering = tuple(out)
    if sorted(ordering) != list(range(m)):
        raise TextFormatError(f"duplicate letters in {text!r}")
    return ordering
