"""Models of an abstraction principle and of its two-operator version.

An abstraction operator sends concepts to objects so that two concepts get
the same object exactly when they are E-equivalent.  Such an operator is
constant on classes and injective across them, so it is stored as one object
per class (``assignment[class_id]``); the per-concept map is derived.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple

from .core import Domain, DomainError, image_bits, image_table, mask_of, members
from .equivalences import EquivalenceSpec, Partition, SpecError


class ModelError(ValueError):
    """A model or model file does not satisfy its abstraction principle."""


@dataclass(frozen=True)
class AbstractionOperator:
    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignment", tuple(self.assignment))
        if len(set(self.assignment)) != len(self.assignment):
            raise ModelError(f"operator {self.assignment} sends two classes to one object")

    @property
    def range_mask(self) -> int:
        return mask_of(self.assignment)

    def is_surjective(self, n: int) -> bool:
        return len(self.assignment) == n


def _require_inhabited(spec: EquivalenceSpec) -> None:
    if spec.n < 1:
        raise ModelError("models need a non-empty domain")


@dataclass(frozen=True)
class AbstractionModel:
    spec: EquivalenceSpec
    operator: AbstractionOperator
    names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        _require_inhabited(self.spec)
        k = len(self.partition)
        if len(self.operator.assignment) != k:
            raise ModelError(f"operator has {len(self.operator.assignment)} values for {k} classes")
        for v in self.operator.assignment:
            if not 0 <= v < self.spec.n:
                raise ModelError(f"operator value {v} outside domain of size {self.spec.n}")
        _check_principle(self.spec, self.per_concept)

    @property
    def domain(self) -> Domain:
        return Domain(self.spec.n, self.names, max_n=self.spec.max_n)

    @property
    def partition(self) -> Partition:
        return self.spec.partition

    @cached_property
    def per_concept(self) -> tuple[int, ...]:
        a = self.operator.assignment
        return tuple(a[c] for c in self.partition.index)

    def abs(self, bits: int) -> int:
        return self.per_concept[bits]

    @property
    def range_mask(self) -> int:
        return self.operator.range_mask

    @property
    def surjective(self) -> bool:
        return self.operator.is_surjective(self.spec.n)


def _check_principle(spec: EquivalenceSpec, per_concept: tuple[int, ...]) -> None:
    size = 1 << spec.n
    t = spec.table
    for x in range(size):
        for y in range(x, size):
            if (per_concept[x] == per_concept[y]) != t[x][y]:
                raise ModelError(f"abstraction principle fails at concepts {x}, {y}")


@dataclass(frozen=True)
class DualModel:
    """One domain carrying two abstraction operators for the same relation."""

    spec: EquivalenceSpec
    op1: AbstractionOperator
    op2: AbstractionOperator
    names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        # building the two models validates the principle for each operator
        self.m1
        self.m2

    @cached_property
    def m1(self) -> AbstractionModel:
        return AbstractionModel(self.spec, self.op1, self.names)

    @cached_property
    def m2(self) -> AbstractionModel:
        return AbstractionModel(self.spec, self.op2, self.names)

    @property
    def partition(self) -> Partition:
        return self.spec.partition

    @property
    def domain(self) -> Domain:
        return Domain(self.spec.n, self.names, max_n=self.spec.max_n)

    def model(self, i: int) -> AbstractionModel:
        if i not in (1, 2):
            raise ValueError("operator index must be 1 or 2")
        return self.m1 if i == 1 else self.m2

    def swap(self) -> DualModel:
        return DualModel(self.spec, self.op2, self.op1, self.names)

    @property
    def surjective(self) -> bool:
        n = self.spec.n
        return self.op1.is_surjective(n) and self.op2.is_surjective(n)


@dataclass(frozen=True)
class NaturalBijection:
    """Partial object map from the first operator's range onto the second's."""

    gamma: dict[int, int]

    def __call__(self, obj: int) -> int:
        return self.gamma[obj]

    @property
    def domain_mask(self) -> int:
        return mask_of(self.gamma)

    @property
    def range_mask(self) -> int:
        return mask_of(self.gamma.values())

    def image(self, bits: int) -> int:
        out = 0
        for x in members(bits):
            out |= 1 << self.gamma[x]
        return out

    def inverse(self) -> NaturalBijection:
        return NaturalBijection({v: k for k, v in sorted(self.gamma.items(), key=lambda kv: kv[1])})


@dataclass(frozen=True)
class InducedStructure:
    """The range of one operator with the operator restricted to its subsets."""

    n: int
    carrier: int
    restricted: dict[int, int]  # concept mask (subset of carrier) -> object

    def abs(self, bits: int) -> int:
        try:
            return self.restricted[bits]
        except KeyError:
            raise KeyError(f"concept {bits} is not a subset of the carrier {self.carrier}") from None


class Existence(NamedTuple):
    exists: bool
    classes: int


def operator_exists(spec: EquivalenceSpec) -> Existence:
    """Operators exist iff the classes fit injectively into the domain."""
    k = len(spec.partition)
    return Existence(k <= spec.n and spec.n >= 1, k)


def enumerate_operators(spec: EquivalenceSpec, surjective_only: bool = False) -> Iterator[AbstractionOperator]:
    """Injective class assignments in lexicographic order; empty when none exist."""
    exists, k = operator_exists(spec)
    if not exists or (surjective_only and k != spec.n):
        return
    for a in itertools.permutations(range(spec.n), k):
        yield AbstractionOperator(a)


def enumerate_models(spec: EquivalenceSpec, surjective_only: bool = False) -> Iterator[AbstractionModel]:
    for op in enumerate_operators(spec, surjective_only):
        yield AbstractionModel(spec, op)


def enumerate_duals(
    spec: EquivalenceSpec, surjective_only: bool = False, canonical: bool = False
) -> Iterator[DualModel]:
    """Ordered pairs of operators; ``canonical`` keeps one pair per relabelling orbit."""
    ops = list(enumerate_operators(spec, surjective_only))
    if canonical:
        actions = class_actions(spec)
        index = {op.assignment: i for i, op in enumerate(ops)}
        for a in ops:
            for b in ops:
                pair = (a.assignment, b.assignment)
                if all(
                    (index[conj(pair[0], p, act)], index[conj(pair[1], p, act)]) >= (index[pair[0]], index[pair[1]])
                    for p, act in actions
                ):
                    yield DualModel(spec, a, b)
        return
    for a in ops:
        for b in ops:
            yield DualModel(spec, a, b)


def class_actions(spec: EquivalenceSpec) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Domain permutations that respect ``spec``, each with its action on class ids.

    A permutation is kept when it maps every class onto a class; conjugating
    an operator by such a permutation yields another operator.
    """
    part = spec.partition
    out = []
    for p in itertools.permutations(range(spec.n)):
        img = image_table(p)
        action = []
        ok = True
        for cls in part.classes:
            targets = {part.index[img[x]] for x in cls}
            if len(targets) != 1:
                ok = False
                break
            action.append(targets.pop())
        if ok and len(set(action)) == len(action):
            out.append((p, tuple(action)))
    return out


def conj(assignment: tuple[int, ...], perm: tuple[int, ...], action: tuple[int, ...]) -> tuple[int, ...]:
    """Assignment of ``X ↦ perm(op(perm⁻¹ X))``."""
    out = [0] * len(assignment)
    for c, v in enumerate(assignment):
        out[action[c]] = perm[v]
    return tuple(out)


def compose_operator(perm: tuple[int, ...], op: AbstractionOperator) -> AbstractionOperator:
    """``perm ∘ op``: post-compose the operator with a domain permutation."""
    return AbstractionOperator(tuple(perm[v] for v in op.assignment))


def natural_bijection(dm: DualModel) -> NaturalBijection:
    gamma: dict[int, int] = {}
    for v1, v2 in sorted(zip(dm.op1.assignment, dm.op2.assignment)):
        assert gamma.get(v1, v2) == v2, "natural bijection is not well defined"
        gamma[v1] = v2
    assert len(set(gamma.values())) == len(gamma), "natural bijection is not injective"
    assert mask_of(gamma.values()) == dm.op2.range_mask
    return NaturalBijection(gamma)


def induced_structure(dm: DualModel, i: int) -> InducedStructure:
    m = dm.model(i)
    carrier = m.range_mask
    restricted = {}
    sub = carrier
    while True:
        restricted[sub] = m.abs(sub)
        if sub == 0:
            break
        sub = (sub - 1) & carrier
    return InducedStructure(dm.spec.n, carrier, dict(sorted(restricted.items())))


def submasks(mask: int) -> list[int]:
    out = []
    sub = mask
    while True:
        out.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    out.reverse()
    return out


class IsoVerdict(NamedTuple):
    iso: bool
    failing: int | None = None  # least concept X ⊆ rng(op1) with ¬E(X, Γ̄X)
    image: int | None = None


def is_natural_iso(dm: DualModel) -> IsoVerdict:
    """Is the natural bijection an isomorphism of the induced structures?

    Decided by ``E(X, Γ̄X)`` for every ``X`` inside the first range; the
    mirrored condition on the second range is computed too and must agree.
    """
    gamma = natural_bijection(dm)
    t = dm.spec.table
    verdict = IsoVerdict(True)
    for x in submasks(dm.op1.range_mask):
        gx = gamma.image(x)
        if not t[x][gx]:
            verdict = IsoVerdict(False, x, gx)
            break
    inv = gamma.inverse()
    mirrored = all(t[y][inv.image(y)] for y in submasks(dm.op2.range_mask))
    assert mirrored == verdict.iso, "forward and mirrored isomorphism criteria disagree"
    return verdict


def preserves_operator(dm: DualModel, h: dict[int, int]) -> bool:
    """Does ``h`` (range 1 onto range 2) commute with the operators?

    Checks ``h(op1(X)) == op2(h̄ X)`` for every ``X`` inside the first range,
    straight from the definition of isomorphism; no use of ``E``.
    """
    m1, m2 = dm.model(1), dm.model(2)
    for x in submasks(m1.range_mask):
        hx = 0
        for obj in members(x):
            hx |= 1 << h[obj]
        if h[m1.abs(x)] != m2.abs(hx):
            return False
    return True


def full_isomorphism(m1: AbstractionModel, m2: AbstractionModel) -> tuple[int, ...] | None:
    """Least permutation ``d`` of the whole domain with ``op2(d̄ X) = d(op1 X)`` for all X."""
    n = m1.spec.n
    size = 1 << n
    a1, a2 = m1.per_concept, m2.per_concept
    for p in itertools.permutations(range(n)):
        if all(a2[image_bits(p, x)] == p[a1[x]] for x in range(size)):
            return p
    return None


# -- JSON --------------------------------------------------------------------

_MODEL_KEYS = {"n", "names", "rel", "operator"}
_DUAL_KEYS = {"n", "names", "rel", "operator1", "operator2"}


def _operator_to_json(spec: EquivalenceSpec, op: AbstractionOperator) -> dict[str, int]:
    return {str(rep): v for rep, v in zip(spec.partition.representatives, op.assignment)}


def _operator_from_json(spec: EquivalenceSpec, data: object) -> AbstractionOperator:
    if not isinstance(data, dict):
        raise ModelError("operator must be an object mapping concept masks to objects")
    part = spec.partition
    assignment: list[int | None] = [None] * len(part)
    for key, value in data.items():
        try:
            bits = int(key)
        except ValueError:
            raise ModelError(f"operator key {key!r} is not a concept mask") from None
        if not 0 <= bits < 1 << spec.n:
            raise ModelError(f"operator key {key!r} does not fit n={spec.n}")
        if not isinstance(value, int) or isinstance(value, bool):
            raise ModelError(f"operator value for {key!r} must be an integer")
        cid = part.index[bits]
        if assignment[cid] is not None:
            raise ModelError(f"operator key {key!r} repeats class {cid}")
        assignment[cid] = value
    missing = [part.representatives[c] for c, v in enumerate(assignment) if v is None]
    if missing:
        raise ModelError(f"operator misses classes with representatives {missing}")
    return AbstractionOperator(tuple(assignment))  # type: ignore[arg-type]


def _header(spec: EquivalenceSpec, names: tuple[str, ...] | None) -> dict:
    out: dict = {"n": spec.n}
    if names is not None:
        out["names"] = list(names)
    out["rel"] = spec.to_json()
    return out


def model_to_json(m: AbstractionModel) -> dict:
    out = _header(m.spec, m.names)
    out["operator"] = _operator_to_json(m.spec, m.operator)
    return out


def dual_to_json(dm: DualModel) -> dict:
    out = _header(dm.spec, dm.names)
    out["operator1"] = _operator_to_json(dm.spec, dm.op1)
    out["operator2"] = _operator_to_json(dm.spec, dm.op2)
    return out


def _read_header(data: dict, allowed: set[str]) -> tuple[EquivalenceSpec, tuple[str, ...] | None]:
    if not isinstance(data, dict):
        raise ModelError("model document must be a JSON object")
    unknown = set(data) - allowed
    if unknown:
        raise ModelError(f"unknown keys: {sorted(unknown)}")
    for key in ("n", "rel"):
        if key not in data:
            raise ModelError(f"missing key {key!r}")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ModelError("'n' must be an integer")
    names = data.get("names")
    if names is not None:
        names = tuple(names)
        try:
            Domain(n, names)
        except DomainError as err:
            raise ModelError(str(err)) from None
    try:
        spec = EquivalenceSpec.resolve(data["rel"], n)
    except SpecError as err:
        raise ModelError(str(err)) from None
    return spec, names


def model_from_json(data: dict) -> AbstractionModel:
    spec, names = _read_header(data, _MODEL_KEYS)
    if "operator" not in data:
        raise ModelError("missing key 'operator'")
    return AbstractionModel(spec, _operator_from_json(spec, data["operator"]), names)


def dual_from_json(data: dict) -> DualModel:
    spec, names = _read_header(data, _DUAL_KEYS)
    for key in ("operator1", "operator2"):
        if key not in data:
            raise ModelError(f"missing key {key!r}")
    return DualModel(
        spec,
        _operator_from_json(spec, data["operator1"]),
        _operator_from_json(spec, data["operator2"]),
        names,
    )


def load_json(text: str) -> AbstractionModel | DualModel:
    """Parse a model or dual-model document, deciding by its keys."""
    data = json.loads(text)
    if isinstance(data, dict) and ("operator1" in data or "operator2" in data):
        return dual_from_json(data)
    return model_from_json(data)
