"""Condition checkers and exhaustive theorem verification at finite scale.

Quantifiers over injections of the domain are realised by permutations: on a
finite domain every injective self-map is onto.  Conditions that quantify
over the models of a principle report ``vacuous=True`` when there are none.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

from .abstraction import (
    AbstractionModel,
    DualModel,
    _operator_to_json,
    enumerate_duals,
    enumerate_models,
    full_isomorphism,
    is_natural_iso,
    natural_bijection,
    operator_exists,
    preserves_operator,
    submasks,
)
from .core import image_table, members
from .equivalences import EquivalenceSpec

INJECTION_NOTE = "injection and permutation quantifiers coincide on finite domains"


@dataclass
class ConditionVerdict:
    condition: str
    holds: bool
    vacuous: bool = False
    witness: dict | None = None
    notes: list[str] = field(default_factory=list)
    # a false verdict that contradicts a theorem
    hard: bool = False

    def to_json(self) -> dict:
        out = {"condition": self.condition, "holds": self.holds, "vacuous": self.vacuous, "witness": self.witness}
        if self.notes:
            out["notes"] = list(self.notes)
        if self.hard:
            out["hard_failure"] = True
        return out


@dataclass
class TheoremReport:
    theorem: str
    verdicts: list[ConditionVerdict]
    anomaly_only: bool = False  # relation supplied as a formula

    @property
    def agreement(self) -> bool:
        return len({v.holds for v in self.verdicts}) <= 1

    @property
    def vacuous(self) -> bool:
        return all(v.vacuous for v in self.verdicts)

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "agreement": self.agreement,
            "vacuous": self.vacuous,
            "verdicts": [v.to_json() for v in self.verdicts],
        }


@lru_cache(maxsize=None)
def permutation_images(n: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """Every permutation of ``0..n-1`` (lexicographic) with its image table on concepts."""
    return tuple((p, tuple(image_table(p))) for p in itertools.permutations(range(n)))


def _concept(bits: int) -> list[int]:
    return members(bits)


# -- per-model conditions ------------------------------------------------------


def _cc_witness(spec: EquivalenceSpec, xs: Iterable[int], limit: int | None = None) -> dict | None:
    t = spec.table
    size = 1 << spec.n
    for x in xs:
        c = x.bit_count()
        if limit is not None and c > limit:
            continue
        row = t[x]
        for y in range(size):
            if y.bit_count() == c and not row[y]:
                return {"X": _concept(x), "Y": _concept(y)}
    return None


def _perm_witness(spec: EquivalenceSpec, xs: Iterable[int], limit: int | None = None) -> dict | None:
    t = spec.table
    perms = permutation_images(spec.n)
    for x in xs:
        if limit is not None and x.bit_count() > limit:
            continue
        row = t[x]
        for p, img in perms:
            if not row[img[x]]:
                return {"X": _concept(x), "perm": list(p), "image": _concept(img[x])}
    return None


def _bicard_witness(spec: EquivalenceSpec) -> dict | None:
    t = spec.table
    n = spec.n
    size = 1 << n
    for x in range(size):
        for y in range(size):
            same = x.bit_count() == y.bit_count() and n - x.bit_count() == n - y.bit_count()
            if same and not t[x][y]:
                return {"X": _concept(x), "Y": _concept(y)}
    return None


def check_cc_on_abstracts(model: AbstractionModel) -> ConditionVerdict:
    """E(X, Y) whenever X lies inside the range and |Y| = |X|."""
    w = _cc_witness(model.spec, submasks(model.range_mask))
    if w is not None:
        w = {"operator": _operator_to_json(model.spec, model.operator), **w}
    return ConditionVerdict("cc-abstracts", w is None, witness=w)


def check_perm_inv_on_abstracts(model: AbstractionModel) -> ConditionVerdict:
    """E(X, π̄X) for every permutation π and every X inside the range."""
    w = _perm_witness(model.spec, submasks(model.range_mask))
    if w is not None:
        w = {"operator": _operator_to_json(model.spec, model.operator), **w}
    return ConditionVerdict("perm-inv-abstracts", w is None, witness=w, notes=[INJECTION_NOTE])


def _no_models(condition: str, spec: EquivalenceSpec, surjective: bool = False) -> ConditionVerdict:
    k = len(spec.partition)
    kind = "surjective models" if surjective else "models"
    return ConditionVerdict(
        condition, True, vacuous=True, notes=[f"no {kind}: {k} classes on a domain of size {spec.n}"]
    )


def _all_models(
    condition: str,
    spec: EquivalenceSpec,
    check: Callable[[AbstractionModel], ConditionVerdict],
    surjective_only: bool = False,
) -> ConditionVerdict:
    seen = False
    for m in enumerate_models(spec, surjective_only):
        seen = True
        v = check(m)
        if not v.holds:
            return ConditionVerdict(condition, False, witness=v.witness, notes=v.notes)
    if not seen:
        return _no_models(condition, spec, surjective_only)
    return ConditionVerdict(condition, True)


def cc_abstracts_all(spec: EquivalenceSpec) -> ConditionVerdict:
    return _all_models("cc-abstracts", spec, check_cc_on_abstracts)


def perm_inv_abstracts_all(spec: EquivalenceSpec) -> ConditionVerdict:
    v = _all_models("perm-inv-abstracts", spec, check_perm_inv_on_abstracts)
    if INJECTION_NOTE not in v.notes:
        v.notes.append(INJECTION_NOTE)
    return v


# -- conditions on E alone -------------------------------------------------------


def check_E_conditions(spec: EquivalenceSpec) -> dict[str, ConditionVerdict]:
    """Permutation invariance, cardinality and bicardinality coarsening, and their small versions.

    A concept counts as small when its size is at most the number of classes.
    """
    size = 1 << spec.n
    k = len(spec.partition)
    out = {}
    w = _perm_witness(spec, range(size))
    out["perm-inv"] = ConditionVerdict("perm-inv", w is None, witness=w, notes=[INJECTION_NOTE])
    w = _cc_witness(spec, range(size))
    out["cc"] = ConditionVerdict("cc", w is None, witness=w)
    w = _bicard_witness(spec)
    out["bcc"] = ConditionVerdict(
        "bcc", w is None, witness=w, notes=["on a finite domain equal sizes force equal complement sizes"]
    )
    w = _cc_witness(spec, range(size), limit=k)
    out["cc-small"] = ConditionVerdict("cc-small", w is None, witness=w, notes=[f"small means size <= {k}"])
    w = _perm_witness(spec, range(size), limit=k)
    out["inv-small"] = ConditionVerdict(
        "inv-small", w is None, witness=w, notes=[f"small means size <= {k}", INJECTION_NOTE]
    )
    return out


# -- relative categoricity -------------------------------------------------------


def _dual_witness(dm: DualModel, failing: int, image: int) -> dict:
    return {
        "operator1": _operator_to_json(dm.spec, dm.op1),
        "operator2": _operator_to_json(dm.spec, dm.op2),
        "X": _concept(failing),
        "image": _concept(image),
    }


def _categoricity(condition: str, spec: EquivalenceSpec, surjective_only: bool, canonical: bool) -> ConditionVerdict:
    if spec.n < 1:
        raise ValueError("models need a non-empty domain")
    seen = False
    for dm in enumerate_duals(spec, surjective_only, canonical):
        seen = True
        v = is_natural_iso(dm)
        if not v.iso:
            return ConditionVerdict(condition, False, witness=_dual_witness(dm, v.failing, v.image))
    if not seen:
        return _no_models(condition, spec, surjective_only)
    return ConditionVerdict(condition, True)


def check_nrc(spec: EquivalenceSpec, canonical: bool = False) -> ConditionVerdict:
    """Natural bijection is an isomorphism in every dual model."""
    return _categoricity("nrc", spec, False, canonical)


def check_src(spec: EquivalenceSpec, canonical: bool = False) -> ConditionVerdict:
    """As :func:`check_nrc`, restricted to duals with both operators onto."""
    return _categoricity("src", spec, True, canonical)


def verify_theorem1(spec: EquivalenceSpec) -> TheoremReport:
    """NRC, permutation invariance on abstracts and cardinality coarsening on abstracts agree."""
    report = TheoremReport(
        "1", [check_nrc(spec), perm_inv_abstracts_all(spec), cc_abstracts_all(spec)], anomaly_only=spec.dsl
    )
    _mark(report)
    return report


def verify_theorem2(spec: EquivalenceSpec) -> TheoremReport:
    """SRC, permutation invariance and bicardinality coarsening agree over onto operators."""
    src = check_src(spec)
    if not operator_exists(spec).exists or operator_exists(spec).classes != spec.n:
        q2 = _no_models("perm-inv-surjective", spec, True)
        q3 = _no_models("bcc-surjective", spec, True)
    else:
        size = 1 << spec.n
        w = _perm_witness(spec, range(size))
        q2 = ConditionVerdict("perm-inv-surjective", w is None, witness=w, notes=[INJECTION_NOTE])
        w = _bicard_witness(spec)
        q3 = ConditionVerdict("bcc-surjective", w is None, witness=w)
    report = TheoremReport("2", [src, q2, q3], anomaly_only=spec.dsl)
    _mark(report)
    return report


def _mark(report: TheoremReport) -> None:
    if not report.agreement:
        note = "anomaly: conditions disagree" if report.anomaly_only else "conditions disagree"
        for v in report.verdicts:
            v.notes.append(note)
            v.hard = not report.anomaly_only


# -- isomorphisms ----------------------------------------------------------------


@dataclass
class IsoUniqueness:
    gamma: dict[int, int]
    gamma_is_iso: bool
    isomorphisms: list[dict[int, int]]
    # bijections passing the E(X, H̄X) test, which is only a criterion for H = Γ
    e_criterion: list[dict[int, int]]

    @property
    def unique(self) -> bool:
        return all(h == self.gamma for h in self.isomorphisms)

    def to_json(self) -> dict:
        def enc(h):
            return [[k, v] for k, v in sorted(h.items())]

        return {
            "condition": "iso-uniqueness",
            "holds": self.unique,
            "gamma": enc(self.gamma),
            "gamma_is_iso": self.gamma_is_iso,
            "isomorphisms": [enc(h) for h in self.isomorphisms],
            "e_criterion": [enc(h) for h in self.e_criterion],
        }


def check_iso_uniqueness(dm: DualModel) -> IsoUniqueness:
    """All isomorphisms between the induced structures, by brute force."""
    gamma = natural_bijection(dm).gamma
    dom = members(dm.op1.range_mask)
    rng = members(dm.op2.range_mask)
    t = dm.spec.table
    xs = submasks(dm.op1.range_mask)
    isos, crit = [], []
    for targets in itertools.permutations(rng):
        h = dict(zip(dom, targets))
        if preserves_operator(dm, h):
            isos.append(h)
        hbar = {x: sum(1 << h[o] for o in members(x)) for x in xs}
        if all(t[x][hbar[x]] for x in xs):
            crit.append(h)
    return IsoUniqueness(gamma, preserves_operator(dm, gamma), isos, crit)


def check_fine_iso(dm: DualModel) -> ConditionVerdict:
    """Search for a permutation of the whole domain carrying one operator to the other.

    When E is cardinality coarsening such a permutation must exist; failing
    to find one is then a hard failure.
    """
    cc = check_E_conditions(dm.spec)["cc"].holds
    delta = full_isomorphism(dm.model(1), dm.model(2))
    notes = [] if cc else ["precondition not met: relation is not cardinality coarsening"]
    if delta is not None:
        return ConditionVerdict("fine-iso", True, witness={"delta": list(delta)}, notes=notes)
    witness = {
        "operator1": _operator_to_json(dm.spec, dm.op1),
        "operator2": _operator_to_json(dm.spec, dm.op2),
        "searched": "all permutations",
    }
    return ConditionVerdict("fine-iso", False, witness=witness, notes=notes, hard=cc)


def model_orbits(spec: EquivalenceSpec) -> list[list[int]]:
    """Indices of the enumerated models grouped into isomorphism classes."""
    models = list(enumerate_models(spec))
    orbit_of: list[int] = [-1] * len(models)
    orbits: list[list[int]] = []
    for i, m in enumerate(models):
        if orbit_of[i] >= 0:
            continue
        orbit_of[i] = len(orbits)
        group = [i]
        for j in range(i + 1, len(models)):
            if orbit_of[j] < 0 and full_isomorphism(m, models[j]) is not None:
                orbit_of[j] = orbit_of[i]
                group.append(j)
        orbits.append(group)
    return orbits


def check_bivalence(spec: EquivalenceSpec) -> ConditionVerdict:
    """All models of the given size pairwise isomorphic (so no sentence tells them apart)."""
    models = list(enumerate_models(spec))
    if not models:
        return _no_models("bivalence", spec)
    orbits = model_orbits(spec)
    if len(orbits) == 1:
        return ConditionVerdict("bivalence", True, notes=[f"{len(models)} models, one isomorphism class"])
    # least non-isomorphic pair: model 0 against the first model outside its orbit
    j = orbits[1][0]
    witness = {
        "operator1": _operator_to_json(spec, models[0].operator),
        "operator2": _operator_to_json(spec, models[j].operator),
        "orbits": orbits,
    }
    return ConditionVerdict(
        "bivalence", False, witness=witness, notes=[f"{len(models)} models, {len(orbits)} isomorphism classes"]
    )


# -- implication battery ---------------------------------------------------------


@dataclass
class Arrow:
    name: str
    antecedent: bool
    consequent: bool
    biconditional: bool = False

    @property
    def ok(self) -> bool:
        if self.biconditional:
            return self.antecedent == self.consequent
        return (not self.antecedent) or self.consequent


@dataclass
class BatteryReport:
    spec: str
    n: int
    conditions: dict[str, ConditionVerdict]
    arrows: list[Arrow]

    @property
    def violated(self) -> list[Arrow]:
        return [a for a in self.arrows if not a.ok]

    def to_json(self) -> dict:
        return {
            "rel": self.spec,
            "n": self.n,
            "conditions": {k: v.holds for k, v in self.conditions.items()},
            "vacuous": {k: v.vacuous for k, v in self.conditions.items() if v.vacuous},
            "arrows": [
                {"arrow": a.name, "antecedent": a.antecedent, "consequent": a.consequent, "ok": a.ok}
                for a in self.arrows
            ],
            "violated": [a.name for a in self.violated],
        }


def implication_battery(spec: EquivalenceSpec) -> BatteryReport:
    """Evaluate the implications among the conditions at the spec's size."""
    conds = dict(check_E_conditions(spec))
    conds["cc-abstracts"] = cc_abstracts_all(spec)
    conds["perm-inv-abstracts"] = perm_inv_abstracts_all(spec)
    k = len(spec.partition)
    range_bound = all(m.range_mask.bit_count() <= k for m in enumerate_models(spec))
    h = {name: v.holds for name, v in conds.items()}
    arrows = [
        Arrow("cc => bcc", h["cc"], h["bcc"]),
        Arrow("cc => cc-small", h["cc"], h["cc-small"]),
        Arrow("cc-small => cc-abstracts (all models)", h["cc-small"], h["cc-abstracts"]),
        Arrow("perm-inv => perm-inv-abstracts (all models)", h["perm-inv"], h["perm-inv-abstracts"]),
        Arrow("perm-inv <=> bcc", h["perm-inv"], h["bcc"], biconditional=True),
        Arrow("inv-small <=> cc-small", h["inv-small"], h["cc-small"], biconditional=True),
        Arrow("cc-abstracts <=> perm-inv-abstracts", h["cc-abstracts"], h["perm-inv-abstracts"], biconditional=True),
        Arrow("|rng| <= classes (all models)", True, range_bound),
    ]
    return BatteryReport(spec.name, spec.n, conds, arrows)
