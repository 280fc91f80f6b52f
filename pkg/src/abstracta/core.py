"""Finite standard structures: domains, concepts as bitmasks, object maps.

Objects are the integers ``0..n-1``.  A concept is a subset of the domain and
is stored as a little-endian bitmask, so the concept ``{0, 2}`` on a domain of
size 4 is the integer ``5``.  Hot loops elsewhere in the package work on the
raw masks; :class:`Concept` is the checked, printable wrapper.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

DEFAULT_MAX_N = 6


class DomainError(ValueError):
    """Raised for malformed domains, concepts or maps."""


@dataclass(frozen=True)
class Domain:
    n: int
    names: tuple[str, ...] | None = None
    max_n: int = field(default=DEFAULT_MAX_N, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DomainError(f"domain size must be non-negative, got {self.n}")
        if self.n > self.max_n:
            raise DomainError(f"domain size {self.n} exceeds the cap {self.max_n}")
        if self.names is not None:
            names = tuple(self.names)
            if len(names) != self.n:
                raise DomainError(f"expected {self.n} names, got {len(names)}")
            if len(set(names)) != len(names):
                raise DomainError("object names must be pairwise distinct")
            object.__setattr__(self, "names", names)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.names if self.names is not None else tuple(str(i) for i in range(self.n))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def label(self, obj: int) -> str:
        return self.labels[obj]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise DomainError(f"unknown object {label!r}") from None

    def format_concept(self, bits: int) -> str:
        return "{" + ",".join(self.labels[i] for i in members(bits)) + "}"


def members(bits: int) -> list[int]:
    """Objects in the concept ``bits``, ascending."""
    out = []
    i = 0
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return out


def mask_of(objs: Iterable[int]) -> int:
    bits = 0
    for x in objs:
        bits |= 1 << x
    return bits


@dataclass(frozen=True, order=True)
class Concept:
    """A subset of a domain of size ``n``; ordered by bitmask."""

    n: int
    bits: int

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.n:
            raise DomainError(f"concept mask {self.bits} does not fit a domain of size {self.n}")

    @classmethod
    def of(cls, objs: Iterable[int], n: int) -> Concept:
        objs = list(objs)
        for x in objs:
            if not 0 <= x < n:
                raise DomainError(f"object {x} outside domain of size {n}")
        return cls(n, mask_of(objs))

    @classmethod
    def empty(cls, n: int) -> Concept:
        return cls(n, 0)

    @classmethod
    def universe(cls, n: int) -> Concept:
        return cls(n, (1 << n) - 1)

    @property
    def members(self) -> list[int]:
        return members(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, obj: object) -> bool:
        return isinstance(obj, int) and 0 <= obj < self.n and bool(self.bits >> obj & 1)

    def _check(self, other: Concept) -> None:
        if other.n != self.n:
            raise DomainError("concepts over different domains")

    def __or__(self, other: Concept) -> Concept:
        self._check(other)
        return Concept(self.n, self.bits | other.bits)

    def __and__(self, other: Concept) -> Concept:
        self._check(other)
        return Concept(self.n, self.bits & other.bits)

    def __sub__(self, other: Concept) -> Concept:
        self._check(other)
        return Concept(self.n, self.bits & ~other.bits)

    def complement(self) -> Concept:
        return Concept(self.n, ((1 << self.n) - 1) & ~self.bits)

    def issubset(self, other: Concept) -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"


class MapKind(enum.IntEnum):
    ARBITRARY = 0
    INJECTIVE = 1
    BIJECTIVE = 2


@dataclass(frozen=True)
class ObjectMap:
    """A total map on ``0..n-1`` given by its table (entry ``i`` is the image of ``i``)."""

    table: tuple[int, ...]

    def __post_init__(self) -> None:
        table = tuple(self.table)
        n = len(table)
        for v in table:
            if not 0 <= v < n:
                raise DomainError(f"map entry {v} outside domain of size {n}")
        object.__setattr__(self, "table", table)

    @property
    def n(self) -> int:
        return len(self.table)

    @property
    def kind(self) -> MapKind:
        if len(set(self.table)) < self.n:
            return MapKind.ARBITRARY
        # injective self-maps of a finite set are onto
        return MapKind.BIJECTIVE

    def __call__(self, obj: int) -> int:
        return self.table[obj]

    def inverse(self) -> ObjectMap:
        if self.kind is not MapKind.BIJECTIVE:
            raise DomainError("only bijections have inverses")
        inv = [0] * self.n
        for i, v in enumerate(self.table):
            inv[v] = i
        return ObjectMap(tuple(inv))

    def compose(self, other: ObjectMap) -> ObjectMap:
        """``self ∘ other``: apply ``other`` first."""
        return ObjectMap(tuple(self.table[v] for v in other.table))

    @classmethod
    def identity(cls, n: int) -> ObjectMap:
        return cls(tuple(range(n)))


def image_bits(table: Sequence[int], bits: int) -> int:
    out = 0
    i = 0
    while bits:
        if bits & 1:
            out |= 1 << table[i]
        bits >>= 1
        i += 1
    return out


def image(m: ObjectMap, X: Concept) -> Concept:
    """The concept ``{m(x) : x in X}``."""
    if X.n != m.n:
        raise DomainError(f"concept over {X.n} objects, map over {m.n}")
    return Concept(m.n, image_bits(m.table, X.bits))


def image_table(table: Sequence[int]) -> list[int]:
    """Images of every concept under ``table``, indexed by mask."""
    n = len(table)
    out = [0] * (1 << n)
    for bits in range(1, 1 << n):
        low = bits & -bits
        out[bits] = out[bits ^ low] | (1 << table[low.bit_length() - 1])
    return out


def enumerate_concepts(d: Domain) -> list[Concept]:
    return [Concept(d.n, bits) for bits in range(1 << d.n)]


def enumerate_permutations(d: Domain) -> list[ObjectMap]:
    return [ObjectMap(p) for p in itertools.permutations(range(d.n))]


def cardinality(X: Concept | int) -> int:
    bits = X.bits if isinstance(X, Concept) else X
    return bits.bit_count()


def is_finite(X: Concept | int) -> bool:
    """Dedekind-finiteness; every concept of a finite domain qualifies."""
    return True
