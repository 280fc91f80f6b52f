"""Evaluating sentences in models and in the structures they induce."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..abstraction import AbstractionModel, DualModel, induced_structure
from .evaluator import Structure, UndefinedAbs, evaluate_in
from .syntax import show


def model_structure(model: AbstractionModel) -> Structure:
    return Structure(model.spec.n, (1 << model.spec.n) - 1, model.abs, model.spec)


def induced(dm: DualModel, i: int) -> Structure:
    """Range of operator ``i`` with the operator restricted to subsets of that range."""
    ind = induced_structure(dm, i)

    def op(bits: int) -> int:
        try:
            return ind.restricted[bits]
        except KeyError:
            raise UndefinedAbs(f"abs applied to a concept outside the carrier of structure {i}") from None

    return Structure(dm.spec.n, ind.carrier, op, dm.spec)


def evaluate(model: AbstractionModel, sentence) -> bool:
    """Truth value of a closed sentence in the full model."""
    return evaluate_in(model_structure(model), sentence)


@dataclass(frozen=True)
class Distinction:
    sentence: object
    name: str | None
    true_in: int  # 1 or 2: the induced structure where the sentence holds

    @property
    def false_in(self) -> int:
        return 3 - self.true_in

    def describe(self) -> str:
        label = self.name or show(self.sentence)
        return f"{label}: false in structure {self.false_in}, true in structure {self.true_in}"


def distinguish(dm: DualModel, templates: Iterable, notes: list[str] | None = None) -> Distinction | None:
    """First template with different truth values in the two induced structures.

    ``templates`` holds sentences or ``(name, sentence)`` pairs.  A template
    that applies ``abs`` outside a carrier is skipped and, if ``notes`` is
    given, a note is appended to it.
    """
    s1, s2 = induced(dm, 1), induced(dm, 2)
    for item in templates:
        name, sentence = item if isinstance(item, tuple) else (None, item)
        try:
            v1 = evaluate_in(s1, sentence)
            v2 = evaluate_in(s2, sentence)
        except UndefinedAbs as err:
            if notes is not None:
                notes.append(f"skipped {name or show(sentence)}: {err}")
            continue
        if v1 != v2:
            return Distinction(sentence, name, 1 if v1 else 2)
    return None
