"""Monadic second-order formulas over an abstraction operator."""

from .evaluator import EvaluationError, Structure, UndefinedAbs, evaluate_in
from .generate import dual_rewrite, random_sentence
from .library import CP_WITNESS, NEWV_WITNESS, cp_witness_text, eta, template_library
from .parser import ParseError, parse
from .syntax import free_variables, show

__all__ = [
    "CP_WITNESS",
    "NEWV_WITNESS",
    "Distinction",
    "EvaluationError",
    "ParseError",
    "Structure",
    "UndefinedAbs",
    "cp_witness_text",
    "distinguish",
    "dual_rewrite",
    "eta",
    "evaluate",
    "evaluate_in",
    "free_variables",
    "parse",
    "random_sentence",
    "show",
    "template_library",
]


def __getattr__(name):
    # model-level evaluation imports the abstraction layer, which itself parses formulas
    if name in ("evaluate", "distinguish", "Distinction", "induced", "model_structure"):
        from . import semantics

        return getattr(semantics, name)
    raise AttributeError(name)
