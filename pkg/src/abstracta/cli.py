"""Command-line entry point.

Exit status: 0 when the computation finished, 1 on a hard failure (a
theorem-level disagreement or a violated implication), 2 on usage, parse or
model errors.  Diagnostics go to standard error.
"""

from __future__ import annotations

import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from math import factorial
from pathlib import Path

import click

from . import abstraction as ab
from . import properties as pr
from .core import DEFAULT_MAX_N, Domain, DomainError, members
from .equivalences import BUILTINS, EquivalenceSpec, SpecError
from .formulas import ParseError, dual_rewrite, parse, show, template_library
from .formulas.evaluator import EvaluationError
from .formulas.semantics import distinguish, evaluate, induced
from .formulas.evaluator import evaluate_in

JOBS_ENV = "ABSTRACTA_JOBS"
PROPERTIES = (
    "cc-abstracts", "perm-inv-abstracts", "nrc", "src", "cc", "bcc", "cc-small",
    "perm-inv", "fine-iso", "bivalence", "battery",
)


class HardFailure(click.ClickException):
    exit_code = 1


class UsageProblem(click.ClickException):
    exit_code = 2


# -- helpers -----------------------------------------------------------------


def default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV)
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageProblem(f"{JOBS_ENV} must be an integer, got {raw!r}") from None


def _jobs(ctx: click.Context) -> int:
    jobs = ctx.obj["jobs"]
    if jobs == 0:
        return os.cpu_count() or 1
    return jobs


def pmap(fn, items: list, jobs: int) -> list:
    """Ordered map, fanned out over ``jobs`` processes when ``jobs > 1``."""
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


@lru_cache(maxsize=None)
def _spec(source: str, n: int, dsl: bool, max_n: int = DEFAULT_MAX_N) -> EquivalenceSpec:
    return EquivalenceSpec(source, n, dsl, max_n)


def resolve_rel(rel: str, n: int, max_n: int = DEFAULT_MAX_N) -> EquivalenceSpec:
    """Built-in name, or a path to a file holding a relation formula in X and Y."""
    try:
        if rel in BUILTINS:
            spec = _spec(rel, n, False, max_n)
        elif Path(rel).is_file():
            spec = _spec(Path(rel).read_text().strip(), n, True, max_n)
        else:
            raise UsageProblem(f"unknown relation {rel!r}: not a built-in ({', '.join(BUILTINS)}) nor a file")
        spec.partition
    except SpecError as err:
        raise UsageProblem(str(err)) from None
    return spec


def _load_model(path: str):
    try:
        return ab.load_json(Path(path).read_text())
    except (OSError, ValueError) as err:
        raise UsageProblem(f"{path}: {err}") from None


def _read_formula(text: str):
    path = Path(text)
    source = path.read_text() if len(text) < 256 and path.is_file() else text
    try:
        return parse(source)
    except ParseError as err:
        raise UsageProblem(f"formula: {err}") from None


def _emit(ctx: click.Context, payload, text: str) -> None:
    if ctx.obj["format"] == "json":
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(text)


def _yn(v: pr.ConditionVerdict) -> str:
    if v.vacuous:
        return "vacuous"
    return "true" if v.holds else "false"


def _verdict_text(v: pr.ConditionVerdict) -> str:
    lines = [f"{v.condition}: {_yn(v)}"]
    if v.witness is not None:
        lines.append("  witness: " + json.dumps(v.witness))
    for note in v.notes:
        lines.append(f"  note: {note}")
    if v.hard:
        lines.append("  HARD FAILURE")
    return "\n".join(lines)


# -- commands ----------------------------------------------------------------


@click.group()
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.option("--jobs", type=int, default=None, help=f"Worker processes; 0 = all cores (default from {JOBS_ENV}, else 1).")
@click.option("--max-n", type=int, default=DEFAULT_MAX_N, show_default=True, help="Hard cap on domain size.")
@click.pass_context
def main(ctx: click.Context, fmt: str, jobs: int | None, max_n: int) -> None:
    """Finite models of abstraction principles."""
    ctx.ensure_object(dict)
    ctx.obj["format"] = fmt
    ctx.obj["jobs"] = default_jobs() if jobs is None else jobs
    ctx.obj["max_n"] = max_n


def rel_options(fn):
    fn = click.option("--n", "n", type=int, required=True, help="Domain size.")(fn)
    fn = click.option("--rel", required=True, help="Built-in relation name or path to a formula file.")(fn)
    return fn


@main.command()
@rel_options
@click.pass_context
def classes(ctx, rel: str, n: int) -> None:
    """Partition of the concepts into equivalence classes."""
    spec = resolve_rel(rel, n, ctx.obj["max_n"])
    part = spec.partition
    d = Domain(n, max_n=ctx.obj["max_n"])
    lines = [f"classes: {len(part)}"]
    for cid, cls in enumerate(part.classes):
        lines.append(f"  {cid}: " + " ".join(d.format_concept(b) for b in cls))
    payload = {"rel": spec.to_json(), "n": n, "classes": [[members(b) for b in c] for c in part.classes]}
    _emit(ctx, payload, "\n".join(lines))


@main.command()
@rel_options
@click.pass_context
def exists(ctx, rel: str, n: int) -> None:
    """Whether the principle has a model of size n."""
    spec = resolve_rel(rel, n, ctx.obj["max_n"])
    ok, k = ab.operator_exists(spec)
    rel_sym = "<=" if k <= n else ">"
    text = f"{'true' if ok else 'false'} (classes={k} {rel_sym} n={n})"
    if n < 1:
        text = "false (empty domain)"
    surj = ok and k == n
    _emit(ctx, {"rel": spec.to_json(), "n": n, "exists": ok, "classes": k, "surjective": surj}, text)


@main.command()
@rel_options
@click.option("--surjective", is_flag=True, help="Only operators onto the domain.")
@click.option("--up-to-iso", is_flag=True, help="One model per relabelling orbit.")
@click.pass_context
def models(ctx, rel: str, n: int, surjective: bool, up_to_iso: bool) -> None:
    """Emit every model as one JSON document per line."""
    spec = resolve_rel(rel, n, ctx.obj["max_n"])
    ms = list(ab.enumerate_models(spec, surjective))
    if up_to_iso:
        actions = ab.class_actions(spec)
        keep = []
        for m in ms:
            a = m.operator.assignment
            if all(ab.conj(a, p, act) >= a for p, act in actions):
                keep.append(m)
        ms = keep
    for m in ms:
        click.echo(json.dumps(ab.model_to_json(m)))


def _over_duals(spec: EquivalenceSpec, jobs: int, fn) -> list:
    items = [(spec.source, spec.n, spec.dsl, spec.max_n, d.op1.assignment, d.op2.assignment) for d in ab.enumerate_duals(spec)]
    return pmap(fn, items, jobs)


def _dual_from_item(item) -> ab.DualModel:
    source, n, dsl, max_n, a1, a2 = item
    spec = _spec(source, n, dsl, max_n)
    return ab.DualModel(spec, ab.AbstractionOperator(a1), ab.AbstractionOperator(a2))


def _fine_item(item) -> dict:
    return pr.check_fine_iso(_dual_from_item(item)).to_json()


def _witness_item(item) -> tuple[str, int] | None:
    dm = _dual_from_item(item)
    found = distinguish(dm, template_library())
    return None if found is None else (found.name, found.true_in)


@main.command()
@click.option("--property", "prop", type=click.Choice(PROPERTIES), required=True)
@click.option("--rel", default=None, help="Built-in relation name or path to a formula file.")
@click.option("--n", "n", type=int, default=None)
@click.option("--model", "model_path", default=None, help="Model or dual-model JSON for per-model properties.")
@click.option("--up-to-iso", is_flag=True, help="Quotient dual models by relabelling (nrc/src).")
@click.pass_context
def check(ctx, prop: str, rel: str | None, n: int | None, model_path: str | None, up_to_iso: bool) -> None:
    """Check one property exhaustively."""
    model = _load_model(model_path) if model_path else None
    if model is not None:
        spec = model.spec
    else:
        if rel is None or n is None:
            raise UsageProblem("--rel and --n are required unless --model is given")
        spec = resolve_rel(rel, n, ctx.obj["max_n"])

    if prop == "battery":
        rep = pr.implication_battery(spec)
        lines = [f"battery {spec.name} n={spec.n}"]
        for name, v in rep.conditions.items():
            lines.append(f"  {name}: {_yn(v)}")
        for a in rep.arrows:
            lines.append(f"  [{'ok' if a.ok else 'VIOLATED'}] {a.name}")
        _emit(ctx, rep.to_json(), "\n".join(lines))
        if rep.violated:
            raise HardFailure("violated implications: " + ", ".join(a.name for a in rep.violated))
        return

    if prop == "fine-iso":
        if isinstance(model, ab.DualModel):
            verdicts = [pr.check_fine_iso(model).to_json()]
        elif model is not None:
            raise UsageProblem("fine-iso needs a dual model")
        else:
            verdicts = _over_duals(spec, _jobs(ctx), _fine_item)
        found = sum(v["holds"] for v in verdicts)
        first_fail = next((v for v in verdicts if not v["holds"]), None)
        hard = any(v.get("hard_failure") for v in verdicts)
        payload = {"condition": "fine-iso", "duals": len(verdicts), "found": found, "first_failure": first_fail}
        text = f"fine-iso: isomorphism found for {found} of {len(verdicts)} duals"
        if first_fail is not None:
            text += "\n  first failure: " + json.dumps(first_fail["witness"])
            for note in first_fail.get("notes", []):
                text += f"\n  note: {note}"
        _emit(ctx, payload, text)
        if hard:
            raise HardFailure("no isomorphism although the relation is cardinality coarsening")
        return

    if prop in ("cc-abstracts", "perm-inv-abstracts") and isinstance(model, ab.AbstractionModel):
        fn = pr.check_cc_on_abstracts if prop == "cc-abstracts" else pr.check_perm_inv_on_abstracts
        v = fn(model)
    elif prop == "cc-abstracts":
        v = pr.cc_abstracts_all(spec)
    elif prop == "perm-inv-abstracts":
        v = pr.perm_inv_abstracts_all(spec)
    elif prop == "nrc":
        v = pr.check_nrc(spec, canonical=up_to_iso)
    elif prop == "src":
        v = pr.check_src(spec, canonical=up_to_iso)
    elif prop == "bivalence":
        v = pr.check_bivalence(spec)
    else:
        v = pr.check_E_conditions(spec)[prop]
    _emit(ctx, v.to_json(), _verdict_text(v))


@main.command()
@click.option("--theorem", type=click.Choice(["1", "2"]), required=True)
@rel_options
@click.pass_context
def verify(ctx, theorem: str, rel: str, n: int) -> None:
    """Check that the three equivalent conditions of a theorem agree."""
    spec = resolve_rel(rel, n, ctx.obj["max_n"])
    try:
        rep = pr.verify_theorem1(spec) if theorem == "1" else pr.verify_theorem2(spec)
    except ValueError as err:
        raise UsageProblem(str(err)) from None
    status = "agreement" if rep.agreement else ("ANOMALY: disagreement" if rep.anomaly_only else "DISAGREEMENT")
    if rep.vacuous:
        status += " (vacuous: no models)"
    lines = [f"theorem {theorem} {spec.name} n={n}: {status}"]
    lines += ["  " + line for v in rep.verdicts for line in _verdict_text(v).splitlines()]
    _emit(ctx, rep.to_json(), "\n".join(lines))
    if not rep.agreement and not rep.anomaly_only:
        raise HardFailure("theorem conditions disagree")


@main.command("eval")
@click.option("--model", "model_path", required=True, help="Model or dual-model JSON.")
@click.option("--formula", required=True, help="Sentence text or path to a file holding one.")
@click.option("--side", type=click.Choice(["1", "2"]), default=None, help="For a dual model: evaluate in this induced structure.")
@click.option("--rewrites", type=int, default=0, help="Also evaluate this many random dual rewrites.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def eval_cmd(ctx, model_path: str, formula: str, side: str | None, rewrites: int, seed: int) -> None:
    """Evaluate a sentence in a model."""
    model = _load_model(model_path)
    sentence = _read_formula(formula)
    if isinstance(model, ab.DualModel):
        if side is None:
            raise UsageProblem("--side is required for a dual model")
        structure = induced(model, int(side))

        def run(s):
            return evaluate_in(structure, s)
    else:
        def run(s):
            return evaluate(model, s)

    try:
        value = run(sentence)
        rng = random.Random(seed)
        agree = [run(dual_rewrite(sentence, rng)) == value for _ in range(rewrites)]
    except EvaluationError as err:
        raise UsageProblem(str(err)) from None
    payload = {"formula": show(sentence), "value": value}
    text = "true" if value else "false"
    if rewrites:
        payload["rewrites"] = {"count": rewrites, "seed": seed, "agree": sum(agree)}
        text += f"\nrewrites: {sum(agree)}/{rewrites} agree"
    _emit(ctx, payload, text)
    if not all(agree):
        raise HardFailure("a truth-preserving rewrite changed the truth value")


@main.command()
@rel_options
@click.pass_context
def witness(ctx, rel: str, n: int) -> None:
    """Search all dual models for a template sentence telling the induced structures apart."""
    spec = resolve_rel(rel, n, ctx.obj["max_n"])
    duals = list(ab.enumerate_duals(spec))
    results = _over_duals(spec, _jobs(ctx), _witness_item)
    hits = [(i, r) for i, r in enumerate(results) if r is not None]
    payload = {"rel": spec.to_json(), "n": n, "duals": len(duals), "distinguished": len(hits)}
    text = f"witness {spec.name} n={n}: {len(hits)} of {len(duals)} duals distinguished"
    if hits:
        i, (name, true_in) = hits[0]
        first = {"dual": ab.dual_to_json(duals[i]), "template": name, "true_in": true_in}
        payload["first"] = first
        text += f"\n  first: {name} true in structure {true_in}, false in {3 - true_in}"
        text += "\n  dual: " + json.dumps(first["dual"])
    _emit(ctx, payload, text)


# -- report ------------------------------------------------------------------


def _arrangements(n: int, k: int) -> int:
    return factorial(n) // factorial(n - k) if k <= n else 0


def _report_cell(item) -> dict:
    source, n, max_work = item
    spec = _spec(source, n, False)
    k = len(spec.partition)
    ops = _arrangements(n, k)
    size = 1 << n
    cell = {"rel": source, "n": n, "classes": k, "exists": ops > 0, "models": ops}

    def run(name, cost, fn):
        if cost > max_work:
            cell[name] = "skipped"
        else:
            cell[name] = fn()

    def fmt(v):
        return "vacuous" if v.vacuous else v.holds

    run("nrc", ops * ops * size, lambda: fmt(pr.check_nrc(spec)))
    run("src", ops * ops * size, lambda: fmt(pr.check_src(spec)))
    run("theorem1", ops * ops * size + ops * factorial(n) * size, lambda: pr.verify_theorem1(spec).agreement)
    run("theorem2", ops * ops * size + factorial(n) * size, lambda: pr.verify_theorem2(spec).agreement)
    run("bivalence", ops * ops * factorial(n) * size, lambda: fmt(pr.check_bivalence(spec)))
    run(
        "battery",
        size * size + 2 * factorial(n) * size + ops * factorial(n) * size,
        lambda: not pr.implication_battery(spec).violated,
    )
    return cell


def _cell_text(v) -> str:
    if v is True:
        return "yes"
    if v is False:
        return "no"
    return str(v)


@main.command()
@click.option("--n-max", type=int, default=4, show_default=True)
@click.option("--max-work", type=int, default=5_000_000, show_default=True, help="Checks whose estimated step count exceeds this are marked skipped.")
@click.pass_context
def report(ctx, n_max: int, max_work: int) -> None:
    """Matrix of every check over the built-in relations and sizes 1..n-max."""
    if not 1 <= n_max <= ctx.obj["max_n"]:
        raise UsageProblem(f"--n-max must lie in 1..{ctx.obj['max_n']}")
    items = [(rel, n, max_work) for rel in BUILTINS for n in range(1, n_max + 1)]
    cells = pmap(_report_cell, items, _jobs(ctx))
    cols = ["rel", "n", "classes", "models", "nrc", "src", "theorem1", "theorem2", "bivalence", "battery"]
    lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    for c in cells:
        lines.append("| " + " | ".join(_cell_text(c[k]) for k in cols) + " |")
    _emit(ctx, {"n_max": n_max, "max_work": max_work, "cells": cells}, "\n".join(lines))
    bad = [c for c in cells if c["theorem1"] is False or c["theorem2"] is False or c["battery"] is False]
    if bad:
        raise HardFailure(f"{len(bad)} cells with theorem disagreement or violated implications")


def run(argv: list[str] | None = None) -> int:
    """Invoke the CLI and return its exit status instead of exiting."""
    try:
        main.main(args=argv, prog_name="abstracta", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Abort:
        return 1
    except (SpecError, DomainError, ab.ModelError) as e:
        click.echo(f"Error: {e}", err=True)
        return 2
    return 0


def entry() -> None:
    sys.exit(run())
