"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line (shown even
under captured output) and then asserts.  Run alone with
``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import random

import pytest
from click.testing import CliRunner

from abstracta.abstraction import (
    AbstractionModel,
    AbstractionOperator,
    class_actions,
    conj,
    enumerate_duals,
    enumerate_models,
    enumerate_operators,
    is_natural_iso,
    load_json,
    natural_bijection,
    operator_exists,
)
from abstracta.cli import main
from abstracta.equivalences import BUILTINS, EquivalenceSpec, Violation, validate_equivalence
from abstracta.formulas import CP_WITNESS, dual_rewrite, evaluate, parse, random_sentence, show, template_library
from abstracta.properties import (
    check_bivalence,
    check_fine_iso,
    check_iso_uniqueness,
    verify_theorem1,
    verify_theorem2,
)

from conftest import EXAMPLES


def spec(name, n):
    return EquivalenceSpec.builtin(name, n)


def k(name, n):
    return len(spec(name, n).partition)


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, what: str, detail: str = "") -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {what}"
        if detail and not ok:
            line += f" ({detail})"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return emit


def test_criterion_01_class_counts(report):
    got = {
        "complementation": {n: k("complementation", n) for n in (1, 2, 3, 4, 5, 6)},
        "hume": [k("hume", n) for n in range(6)],
        "blv": [k("blv", n) for n in range(6)],
        "nuisance": [k("nuisance", n) for n in range(6)],
    }
    want = {
        "complementation": {1: 1, 2: 2, 3: 1, 4: 4, 5: 1, 6: 11},
        "hume": [n + 1 for n in range(6)],
        "blv": [2**n for n in range(6)],
        "nuisance": [1] * 6,
    }
    report(1, got == want, "class counts", f"got {got}")


def test_criterion_02_existence_matrix(report):
    got = {name: sorted(n for n in range(1, 6) if operator_exists(spec(name, n)).exists) for name in BUILTINS}
    want = {
        "complementation": [1, 2, 3, 4, 5],
        "parity": [1, 3, 5],
        "hume": [],
        "blv": [],
        "newv": [],
        "bicardinality": [],
        "finite-switch": [],
        "nuisance": [1, 2, 3, 4, 5],
        "trivial": [1, 2, 3, 4, 5],
    }
    comp6 = tuple(operator_exists(spec("complementation", 6)))
    ok = all(got[name] == ns for name, ns in want.items()) and comp6 == (False, 11)
    report(2, ok, "existence matrix", f"got {got}, complementation n=6 {comp6}")


def test_criterion_03_comp_counter(report):
    dm = load_json((EXAMPLES / "comp_counter_dual.json").read_text())
    d = dm.domain
    gamma = {d.label(a): d.label(b) for a, b in natural_bijection(dm).gamma.items()}
    verdict = is_natural_iso(dm)
    cp = parse((EXAMPLES / "cp_witness.sol").read_text())
    got = (gamma, verdict.iso, d.format_concept(verdict.failing), evaluate(dm.m1, cp), evaluate(dm.m2, cp))
    want = ({"a": "c", "b": "b", "c": "a", "d": "d"}, False, "{a,b}", False, True)
    report(3, got == want and parse(CP_WITNESS) == cp, "comp-counter reproduction", f"got {got}")


def _theorem_sizes(name):
    return [n for n in range(1, 6) if n <= 4 or k(name, n) <= 2]


def test_criterion_04_theorem1(report):
    bad = []
    for name in BUILTINS:
        for n in _theorem_sizes(name):
            rep = verify_theorem1(spec(name, n))
            if not rep.agreement:
                bad.append((name, n))
    profile = {}
    for name, ns in (("nuisance", range(1, 6)), ("trivial", range(1, 6)), ("parity", (1, 3, 5)), ("empty-vs-nonempty", range(1, 6))):
        for n in ns:
            profile[(name, n)] = [v.holds for v in verify_theorem1(spec(name, n)).verdicts] == [True] * 3
    comp4 = [v.holds for v in verify_theorem1(spec("complementation", 4)).verdicts]
    ok = not bad and all(profile.values()) and comp4 == [False] * 3
    report(4, ok, "theorem 1 agreement and profile", f"disagree {bad}, profile {profile}, comp4 {comp4}")


def test_criterion_05_theorem2(report):
    bad = [(name, n) for name in BUILTINS for n in range(1, 5) if not verify_theorem2(spec(name, n)).agreement]
    comp4 = [v.holds for v in verify_theorem2(spec("complementation", 4)).verdicts]
    evn2 = verify_theorem2(spec("empty-vs-nonempty", 2))
    ok = not bad and comp4 == [False] * 3 and [v.holds for v in evn2.verdicts] == [True] * 3 and not evn2.vacuous
    report(5, ok, "theorem 2 agreement and profile", f"disagree {bad}, comp4 {comp4}")


def test_criterion_06_iso_uniqueness(report):
    bad, count = [], 0
    for name in ("nuisance", "trivial", "empty-vs-nonempty"):
        for n in range(1, 5):
            for dm in enumerate_duals(spec(name, n)):
                count += 1
                if check_iso_uniqueness(dm).isomorphisms != [natural_bijection(dm).gamma]:
                    bad.append((name, n, dm.op1.assignment, dm.op2.assignment))
    report(6, not bad and count > 0, f"isomorphisms = {{natural bijection}} on {count} duals", f"failures {bad[:3]}")


def test_criterion_07_fine(report):
    bad, count = [], 0
    for name in ("trivial", "empty-vs-nonempty"):
        for n in range(1, 5):
            for dm in enumerate_duals(spec(name, n)):
                count += 1
                if not check_fine_iso(dm).holds:
                    bad.append((name, n, dm.op1.assignment, dm.op2.assignment))
    report(7, not bad and count > 0, f"full isomorphism found for {count} duals", f"failures {bad[:3]}")


def test_criterion_08_bivalence(report):
    trivial = [check_bivalence(spec("trivial", n)).holds for n in range(1, 5)]
    s = spec("complementation", 4)
    v = check_bivalence(s)
    assignments = [m.operator.assignment for m in enumerate_models(s)]
    i, j = assignments.index((3, 0, 1, 2)), assignments.index((3, 2, 1, 0))
    orbits = v.witness["orbits"] if v.witness else []
    same_orbit = any(i in o and j in o for o in orbits)
    ok = trivial == [True] * 4 and not v.holds and not same_orbit
    report(8, ok, "bivalence", f"trivial {trivial}, complementation {v.holds}, comp-counter same orbit {same_orbit}")


def test_criterion_09_axioms(report):
    bad = [(name, n) for name in BUILTINS for n in range(6) if validate_equivalence(spec(name, n)) is not None]
    sym = validate_equivalence(EquivalenceSpec.from_dsl("card(X) <= card(Y)", 1))
    refl = validate_equivalence(EquivalenceSpec.from_dsl("card(X) = 1 and card(Y) = 1", 2))
    ok = not bad and sym == Violation("symmetry", (0, 1)) and refl == Violation("reflexivity", (0,))
    report(9, ok, "equivalence axioms", f"bad {bad}, broken relations {sym}, {refl}")


def test_criterion_10_formula_engine(report):
    roundtrip = all(parse(show(s)) == s for _, s in template_library())
    rng = random.Random(2024)
    pairs = []
    for name, n in (("complementation", 4), ("empty-vs-nonempty", 3), ("parity", 3), ("trivial", 4)):
        s = spec(name, n)
        ops = list(enumerate_operators(s))
        actions = class_actions(s)
        for _ in range(25):
            op = rng.choice(ops)
            p, act = rng.choice(actions)
            pairs.append((AbstractionModel(s, op), AbstractionModel(s, AbstractionOperator(conj(op.assignment, p, act)))))
    invariant = 0
    rewrites = 0
    for m1, m2 in pairs:
        f = random_sentence(rng, 3)
        invariant += evaluate(m1, f) == evaluate(m2, f)
        rewrites += evaluate(m1, f) == evaluate(m1, dual_rewrite(f, rng, 0.7))
    ok = roundtrip and len(pairs) == 100 and invariant == 100 and rewrites == 100
    report(10, ok, "formula engine", f"roundtrip {roundtrip}, invariant {invariant}/100, rewrites {rewrites}/100")


DETERMINISM_COMMANDS = [
    ["classes", "--rel", "complementation", "--n", "4"],
    ["exists", "--rel", "parity", "--n", "4"],
    ["models", "--rel", "complementation", "--n", "4"],
    ["check", "--property", "nrc", "--rel", "complementation", "--n", "4"],
    ["check", "--property", "bivalence", "--rel", "complementation", "--n", "4"],
    ["check", "--property", "fine-iso", "--rel", "empty-vs-nonempty", "--n", "3"],
    ["check", "--property", "battery", "--rel", "parity", "--n", "3"],
    ["verify", "--theorem", "1", "--rel", "complementation", "--n", "4"],
    ["verify", "--theorem", "2", "--rel", "empty-vs-nonempty", "--n", "2"],
    ["eval", "--model", str(EXAMPLES / "comp_counter_m1.json"), "--formula", str(EXAMPLES / "cp_witness.sol"), "--rewrites", "5"],
    ["witness", "--rel", "complementation", "--n", "4"],
    ["report", "--n-max", "4"],
]


def test_criterion_11_determinism(report):
    runner = CliRunner()
    differing = []
    for fmt in ("text", "json"):
        for args in DETERMINISM_COMMANDS:
            outs = {runner.invoke(main, ["--format", fmt, "--jobs", str(j), *args]).output for j in (1, 2, 0)}
            if len(outs) != 1:
                differing.append((fmt, args[0]))
    report(11, not differing, f"byte-identical output across --jobs 1, 2, max for {2 * len(DETERMINISM_COMMANDS)} runs", f"differ {differing}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
