"""Equivalence relations on concepts and the partitions they induce.

Every relation is tabulated once over all pairs of concepts of its domain, so
later checks are table lookups.  Finite readings used throughout: every
concept is finite, "smaller than the universe" means a proper subset, and
"the universe is even" means ``n % 2 == 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

from .core import DEFAULT_MAX_N, Concept, Domain, DomainError
from .formulas.evaluator import EvaluationError, Structure, evaluate_in
from .formulas.parser import ParseError, parse
from .formulas.syntax import Abs, EAtom, show, uses


class SpecError(ValueError):
    """An equivalence relation could not be resolved or evaluated."""


def _blv(x: int, y: int, n: int) -> bool:
    return x == y


def _hume(x: int, y: int, n: int) -> bool:
    return x.bit_count() == y.bit_count()


def _newv(x: int, y: int, n: int) -> bool:
    full = (1 << n) - 1
    if x != full or y != full:
        # some side is small: behave like identity
        return x == y
    return True


def _bicardinality(x: int, y: int, n: int) -> bool:
    return x.bit_count() == y.bit_count() and (n - x.bit_count()) == (n - y.bit_count())


def _nuisance(x: int, y: int, n: int) -> bool:
    # the symmetric difference is always finite
    return True


def _is_complement(x: int, n: int) -> bool:
    return 2 * x.bit_count() == n


def _complementation(x: int, y: int, n: int) -> bool:
    if not (_is_complement(x, n) or _is_complement(y, n)):
        return True
    full = (1 << n) - 1
    return x == y or (x.bit_count() == y.bit_count() and x & y == 0 and x | y == full)


def _parity(x: int, y: int, n: int) -> bool:
    if n % 2 == 0:
        return x.bit_count() == y.bit_count()
    return True


def _finite_switch(x: int, y: int, n: int) -> bool:
    # finite universe: identity; the equinumerosity branch needs an infinite one
    return x == y


def _trivial(x: int, y: int, n: int) -> bool:
    return True


def _empty_vs_nonempty(x: int, y: int, n: int) -> bool:
    return (x == 0) == (y == 0)


BUILTINS: dict[str, Callable[[int, int, int], bool]] = {
    "blv": _blv,
    "hume": _hume,
    "newv": _newv,
    "bicardinality": _bicardinality,
    "nuisance": _nuisance,
    "complementation": _complementation,
    "parity": _parity,
    "finite-switch": _finite_switch,
    "trivial": _trivial,
    "empty-vs-nonempty": _empty_vs_nonempty,
}


@dataclass(frozen=True, eq=False)
class EquivalenceSpec:
    """A relation ``E`` on the concepts of a domain of size ``n``.

    ``source`` is a built-in name or the text of a formula in the two free
    concept variables ``X`` and ``Y``.
    """

    source: str
    n: int
    dsl: bool = False
    max_n: int = field(default=DEFAULT_MAX_N, repr=False)

    def __post_init__(self) -> None:
        try:
            Domain(self.n, max_n=self.max_n)
        except DomainError as err:
            raise SpecError(str(err)) from None
        if not self.dsl and self.source not in BUILTINS:
            raise SpecError(f"unknown relation {self.source!r}; built-ins: {', '.join(BUILTINS)}")
        if self.dsl:
            self._formula  # parse eagerly so syntax errors surface here

    @classmethod
    def builtin(cls, name: str, n: int, max_n: int = DEFAULT_MAX_N) -> EquivalenceSpec:
        return cls(name, n, False, max_n)

    @classmethod
    def from_dsl(cls, text: str, n: int, max_n: int = DEFAULT_MAX_N) -> EquivalenceSpec:
        return cls(text, n, True, max_n)

    @classmethod
    def resolve(cls, rel: str | dict, n: int, max_n: int = DEFAULT_MAX_N) -> EquivalenceSpec:
        """Accept a built-in name or ``{"dsl": text}``."""
        if isinstance(rel, dict):
            if set(rel) != {"dsl"}:
                raise SpecError(f"relation object must have exactly the key 'dsl', got {sorted(rel)}")
            return cls.from_dsl(rel["dsl"], n, max_n)
        return cls.builtin(rel, n, max_n)

    @property
    def name(self) -> str:
        return f"dsl:{self.source}" if self.dsl else self.source

    @property
    def domain(self) -> Domain:
        return Domain(self.n, max_n=self.max_n)

    def to_json(self) -> str | dict:
        return {"dsl": self.source} if self.dsl else self.source

    def at(self, n: int) -> EquivalenceSpec:
        return EquivalenceSpec(self.source, n, self.dsl, self.max_n)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EquivalenceSpec):
            return NotImplemented
        return (self.source, self.n, self.dsl) == (other.source, other.n, other.dsl)

    def __hash__(self) -> int:
        return hash((self.source, self.n, self.dsl))

    @cached_property
    def _formula(self):
        try:
            f = parse(self.source, free=("X", "Y"))
        except ParseError as err:
            raise SpecError(f"relation formula: {err}") from err
        if uses(f, (Abs, EAtom)):
            raise SpecError("a relation formula may not mention abs(...) or E(...)")
        return f

    @cached_property
    def table(self) -> tuple[tuple[bool, ...], ...]:
        """``table[x][y]`` is ``E(x, y)`` for concept masks ``x``, ``y``."""
        size = 1 << self.n
        if not self.dsl:
            fn = BUILTINS[self.source]
            return tuple(tuple(fn(x, y, self.n) for y in range(size)) for x in range(size))
        st = Structure(self.n, (1 << self.n) - 1)
        f = self._formula
        try:
            return tuple(
                tuple(evaluate_in(st, f, {"X": x, "Y": y}) for y in range(size)) for x in range(size)
            )
        except EvaluationError as err:
            raise SpecError(f"relation {self.source!r}: {err}") from err

    def __call__(self, x: int, y: int) -> bool:
        return self.table[x][y]

    @cached_property
    def partition(self) -> Partition:
        return compute_classes(self)

    def __repr__(self) -> str:
        return f"EquivalenceSpec({self.name!r}, n={self.n})"

    def __str__(self) -> str:
        return self.name if not self.dsl else f"dsl:{show(self._formula)}"


def _bits(X: Concept | int, n: int) -> int:
    if isinstance(X, Concept):
        if X.n != n:
            raise SpecError(f"concept over {X.n} objects, relation over {n}")
        return X.bits
    if not 0 <= X < 1 << n:
        raise SpecError(f"concept mask {X} does not fit n={n}")
    return X


def eval_equiv(spec: EquivalenceSpec, X: Concept | int, Y: Concept | int) -> bool:
    return spec.table[_bits(X, spec.n)][_bits(Y, spec.n)]


@dataclass(frozen=True)
class Violation:
    axiom: str  # "reflexivity" | "symmetry" | "transitivity"
    witness: tuple[int, ...]

    def describe(self, d: Domain) -> str:
        return f"{self.axiom} fails at " + ", ".join(d.format_concept(b) for b in self.witness)


class NotAnEquivalence(SpecError):
    def __init__(self, spec: EquivalenceSpec, violation: Violation):
        self.spec = spec
        self.violation = violation
        super().__init__(f"{spec.name} at n={spec.n}: {violation.describe(spec.domain)}")


def validate_equivalence(spec: EquivalenceSpec) -> Violation | None:
    """``None`` if ``spec`` is an equivalence relation, else the least witness."""
    t = spec.table
    size = 1 << spec.n
    for x in range(size):
        if not t[x][x]:
            return Violation("reflexivity", (x,))
    for x in range(size):
        row = t[x]
        for y in range(size):
            if row[y] and not t[y][x]:
                return Violation("symmetry", (x, y))
    for x in range(size):
        row = t[x]
        related = [y for y in range(size) if row[y]]
        for y in related:
            ty = t[y]
            for z in range(size):
                if ty[z] and not row[z]:
                    return Violation("transitivity", (x, y, z))
    return None


@dataclass(frozen=True)
class Partition:
    """Classes of concepts, ordered by their least member."""

    n: int
    classes: tuple[tuple[int, ...], ...]
    index: tuple[int, ...]  # concept mask -> class id

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(c[0] for c in self.classes)

    def __len__(self) -> int:
        return len(self.classes)

    def class_of(self, X: Concept | int) -> int:
        return self.index[X.bits if isinstance(X, Concept) else X]


def compute_classes(spec: EquivalenceSpec) -> Partition:
    """Partition all ``2**n`` concepts under ``spec``; raises :class:`NotAnEquivalence`."""
    violation = validate_equivalence(spec)
    if violation is not None:
        raise NotAnEquivalence(spec, violation)
    size = 1 << spec.n
    index = [-1] * size
    classes = []
    t = spec.table
    for x in range(size):
        if index[x] >= 0:
            continue
        cid = len(classes)
        cls = tuple(y for y in range(x, size) if t[x][y])
        for y in cls:
            index[y] = cid
        classes.append(cls)
    return Partition(spec.n, tuple(classes), tuple(index))
