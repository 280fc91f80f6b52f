"""Witness sentences for failures of relative elementary equivalence."""

from __future__ import annotations

from .parser import parse
from .syntax import Not, show

NEWV_WITNESS = "exists X exists b (card(X) < card(universe) and abs(X) = b and b in X)"


def cp_witness_text(size: int = 2) -> str:
    return (
        f"forall X (card(X) = {size} implies "
        "exists Y (E(X,Y) and abs(X) in Y and abs(empty) in Y))"
    )


CP_WITNESS = cp_witness_text(2)


def eta(a: str, b: str, concept_var: str = "Z") -> str:
    """Text of the New V membership macro ``a η b``.

    ``a η b`` holds when ``b`` abstracts some concept smaller than the
    universe that contains ``a``.
    """
    return f"exists {concept_var} (card({concept_var}) < card(universe) and abs({concept_var}) = {b} and {a} in {concept_var})"


def template_library() -> list[tuple[str, object]]:
    """Named witness sentences, their negations and size variants, in a fixed order."""
    base = [
        ("newv-witness", parse(NEWV_WITNESS)),
        ("newv-witness-eta", parse(f"exists b ({eta('b', 'b')})")),
        ("cp-witness", parse(CP_WITNESS)),
        ("cp-witness-1", parse(cp_witness_text(1))),
        ("cp-witness-3", parse(cp_witness_text(3))),
    ]
    out = []
    for name, s in base:
        out.append((name, s))
        out.append((f"not-{name}", Not(s)))
    return out


def library_texts() -> list[tuple[str, str]]:
    return [(name, show(s)) for name, s in template_library()]
