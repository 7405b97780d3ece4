"""Core model of the k-party hidden-matching game.

An instance consists of k-1 index strings (r bits each), where player i never
sees the i-th string, and an n-bit string c that the answering player k never
sees. The index strings jointly select a matching out of a published family;
a correct answer names an edge of that matching together with the parity of c
on the edge's endpoints.

Conventions fixed across the package: vertices are 1..n, matchings are
1-indexed, and the decoded matching index is the big-endian binary value of
the concatenated index strings plus one.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import List, NamedTuple, Optional, Sequence, Tuple

_BITS = frozenset("01")


def _check_bits(s: str, what: str) -> None:
    if not isinstance(s, str) or not set(s) <= _BITS:
        raise ValueError(f"{what} must be a string of 0/1 characters, got {s!r}")


class Answer(NamedTuple):
    """Answer (i1, i2, e): an edge claim plus the parity bit for it.

    A meaningful answer has 1 <= i1 != i2 <= n; degenerate pairs simply never
    satisfy the relation.
    """

    i1: int
    i2: int
    e: int


@dataclass(frozen=True)
class HmpInstance:
    """One input to the game: index strings alphas and the bit string c."""

    n: int
    k: int
    r: int
    alphas: Tuple[str, ...]
    c: str

    def __post_init__(self) -> None:
        if self.n < 2 or self.n % 2 != 0:
            raise ValueError(f"n must be even and >= 2, got {self.n}")
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if len(self.alphas) != self.k - 1:
            raise ValueError(
                f"expected {self.k - 1} index strings, got {len(self.alphas)}"
            )
        for a in self.alphas:
            _check_bits(a, "index string")
            if len(a) != self.r:
                raise ValueError(f"index string {a!r} is not {self.r} bits")
        _check_bits(self.c, "c")
        if len(self.c) != self.n:
            raise ValueError(f"c has length {len(self.c)}, expected {self.n}")

    @cached_property
    def matching_index(self) -> int:
        return decode_matching_index(self.alphas)

    def strict_regime(self, t: int) -> bool:
        """Whether the parameters sit in the strict regime: k > 2 and the
        index strings exactly address a family of t = 2**((k-1)*r) matchings."""
        return self.k > 2 and t == 2 ** ((self.k - 1) * self.r)


@dataclass(frozen=True)
class PlayerView:
    """What one player sees: the index strings not on their own forehead,
    stored as (position, string) pairs, plus c for players 1..k-1.

    Hidden data is structurally absent: player i < k has no entry for
    position i, and player k has c set to None.
    """

    player: int
    k: int
    visible_alphas: Tuple[Tuple[int, str], ...]
    c: Optional[str]

    @property
    def sees_c(self) -> bool:
        return self.c is not None

    def alpha(self, position: int) -> str:
        for pos, value in self.visible_alphas:
            if pos == position:
                return value
        raise KeyError(f"index string {position} is not visible to player {self.player}")

    def key(self) -> tuple:
        """Hashable canonical key, used by table-backed protocols."""
        return (self.player, self.visible_alphas, self.c)


def decode_matching_index(alphas: Sequence[str]) -> int:
    """Index selected by the strings: big-endian value of their concatenation
    plus one. Range 1..2**(len * r)."""
    if len(alphas) == 0:
        raise ValueError("cannot decode an empty sequence of index strings")
    r = len(alphas[0])
    for a in alphas:
        _check_bits(a, "index string")
        if len(a) != r:
            raise ValueError("index strings must all have the same length")
    if r == 0:
        raise ValueError("index strings must be nonempty")
    return int("".join(alphas), 2) + 1


def encode_matching_index(index: int, r: int, count: int) -> Tuple[str, ...]:
    """Inverse of decode_matching_index: split index-1 into `count` strings of
    r bits each, big-endian."""
    if count < 1 or r < 1:
        raise ValueError("need count >= 1 and r >= 1")
    if not 1 <= index <= 2 ** (r * count):
        raise ValueError(f"index {index} out of range 1..{2 ** (r * count)}")
    bits = format(index - 1, f"0{r * count}b")
    return tuple(bits[i * r : (i + 1) * r] for i in range(count))


def view_of(instance: HmpInstance, player: int) -> PlayerView:
    """Visibility rule: player i < k sees every index string except the i-th
    plus c; player k sees all index strings and not c."""
    if not 1 <= player <= instance.k:
        raise ValueError(f"player {player} out of range 1..{instance.k}")
    if player == instance.k:
        visible = tuple(enumerate(instance.alphas, start=1))
        return PlayerView(player=player, k=instance.k, visible_alphas=visible, c=None)
    visible = tuple(
        (pos, a) for pos, a in enumerate(instance.alphas, start=1) if pos != player
    )
    return PlayerView(player=player, k=instance.k, visible_alphas=visible, c=instance.c)


def relation_holds(instance: HmpInstance, family, answer: Answer) -> bool:
    """Whether (i1, i2, e) is a correct answer: the pair is an edge of the
    selected matching and e is the parity of c on it. A decoded index beyond
    the family yields False, mirroring the relational semantics."""
    if family.n != instance.n:
        raise ValueError(
            f"instance n={instance.n} does not match family n={family.n}"
        )
    j = instance.matching_index
    if j > len(family.matchings):
        return False
    i1, i2, e = answer
    if i1 == i2 or not (1 <= i1 <= instance.n) or not (1 <= i2 <= instance.n):
        return False
    pair = (i1, i2) if i1 < i2 else (i2, i1)
    if pair not in family.edge_sets[j - 1]:
        return False
    c = instance.c
    return e == (int(c[pair[0] - 1]) ^ int(c[pair[1] - 1]))


def xor_bits(a: str, b: str) -> str:
    """Bitwise XOR of two equal-length bit strings."""
    if len(a) != len(b):
        raise ValueError("bit strings must have equal length")
    if len(a) == 0:
        return ""
    return format(int(a, 2) ^ int(b, 2), f"0{len(a)}b")


def special_inputs(r: int, k: int) -> List[Tuple[str, ...]]:
    """The XOR-completed index tuples (a_1, ..., a_{k-2}, a_1 ^ ... ^ a_{k-2}).

    There are 2**((k-2)*r) of them, and for every position i the projection
    that drops coordinate i ranges over all of ({0,1}^r)^(k-2). Requires
    k >= 3; the two-player game has no such tuples.
    """
    if k < 3:
        raise ValueError(f"special inputs need k >= 3, got k={k}")
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    out: List[Tuple[str, ...]] = []
    for bits in product("01", repeat=(k - 2) * r):
        s = "".join(bits)
        parts = [s[i * r : (i + 1) * r] for i in range(k - 2)]
        last = "0" * r
        for p in parts:
            last = xor_bits(last, p)
        out.append(tuple(parts) + (last,))
    return out
