"""AST for the monadic second-order language with an abstraction operator.

Concept variables start with an upper-case letter, object variables with a
lower-case one.  Nodes are frozen dataclasses so structural equality is plain
``==``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

# -- concept terms -----------------------------------------------------------


@dataclass(frozen=True)
class CVar:
    name: str


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Universe:
    pass


@dataclass(frozen=True)
class Lit:
    elems: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "elems", tuple(sorted(set(self.elems))))


@dataclass(frozen=True)
class SetOp:
    op: str  # "union" | "inter" | "minus"
    left: "CTerm"
    right: "CTerm"


@dataclass(frozen=True)
class Compl:
    arg: "CTerm"


CTerm = Union[CVar, Empty, Universe, Lit, SetOp, Compl]

# -- object terms ------------------------------------------------------------


@dataclass(frozen=True)
class OVar:
    name: str


@dataclass(frozen=True)
class Abs:
    arg: CTerm


OTerm = Union[OVar, Abs]

# -- atoms -------------------------------------------------------------------


@dataclass(frozen=True)
class ObjEq:
    left: OTerm
    right: OTerm


@dataclass(frozen=True)
class ConEq:
    left: CTerm
    right: CTerm


@dataclass(frozen=True)
class Mem:
    obj: OTerm
    concept: CTerm


@dataclass(frozen=True)
class EAtom:
    left: CTerm
    right: CTerm


@dataclass(frozen=True)
class CmpAtom:
    arg: CTerm


@dataclass(frozen=True)
class Omega:
    pass


@dataclass(frozen=True)
class Card:
    """``card(left) op right`` where right is a concept, an integer or omega."""

    left: CTerm
    op: str  # "=" | "<=" | "<"
    right: Union[CTerm, int, Omega]


# -- connectives and quantifiers ---------------------------------------------


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class BinOp:
    op: str  # "and" | "or" | "implies" | "iff"
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Quant:
    kind: str  # "forall" | "exists"
    var: str
    body: "Formula"

    @property
    def over_concepts(self) -> bool:
        return is_concept_var(self.var)


Formula = Union[ObjEq, ConEq, Mem, EAtom, CmpAtom, Card, Not, BinOp, Quant]
Sentence = Formula

CONNECTIVES = ("and", "or", "implies", "iff")
SET_OPS = ("union", "inter", "minus")
CARD_OPS = ("=", "<=", "<")


def is_concept_var(name: str) -> bool:
    return name[:1].isupper()


def And(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = BinOp("and", out, p)
    return out


def Or(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = BinOp("or", out, p)
    return out


def Implies(a: Formula, b: Formula) -> Formula:
    return BinOp("implies", a, b)


def Forall(var: str, body: Formula) -> Formula:
    return Quant("forall", var, body)


def Exists(var: str, body: Formula) -> Formula:
    return Quant("exists", var, body)


def free_variables(node) -> set[str]:
    """Free object and concept variables of a term or formula."""
    match node:
        case CVar(name) | OVar(name):
            return {name}
        case Empty() | Universe() | Lit() | Omega() | int():
            return set()
        case SetOp(_, a, b) | ObjEq(a, b) | ConEq(a, b) | EAtom(a, b) | BinOp(_, a, b):
            return free_variables(a) | free_variables(b)
        case Mem(a, b):
            return free_variables(a) | free_variables(b)
        case Card(a, _, b):
            return free_variables(a) | free_variables(b)
        case Compl(a) | Abs(a) | CmpAtom(a) | Not(a):
            return free_variables(a)
        case Quant(_, var, body):
            return free_variables(body) - {var}
    raise TypeError(f"not a syntax node: {node!r}")


def uses(node, kinds: tuple[type, ...]) -> bool:
    """True if any subterm of ``node`` is an instance of ``kinds``."""
    if isinstance(node, kinds):
        return True
    match node:
        case SetOp(_, a, b) | ObjEq(a, b) | ConEq(a, b) | EAtom(a, b) | BinOp(_, a, b) | Mem(a, b) | Card(a, _, b):
            return uses(a, kinds) or uses(b, kinds)
        case Compl(a) | Abs(a) | CmpAtom(a) | Not(a):
            return uses(a, kinds)
        case Quant(_, _, body):
            return uses(body, kinds)
    return False


# -- printing ----------------------------------------------------------------


def show(node) -> str:
    """Concrete syntax that parses back to an equal tree."""
    match node:
        case CVar(name) | OVar(name):
            return name
        case Empty():
            return "empty"
        case Universe():
            return "universe"
        case Lit(elems):
            return "{" + ", ".join(map(str, elems)) + "}"
        case SetOp(op, a, b):
            return f"({show(a)} {op} {show(b)})"
        case Compl(a):
            return f"complement({show(a)})"
        case Abs(a):
            return f"abs({show(a)})"
        case ObjEq(a, b) | ConEq(a, b):
            return f"{show(a)} = {show(b)}"
        case Mem(a, b):
            return f"{show(a)} in {show(b)}"
        case EAtom(a, b):
            return f"E({show(a)}, {show(b)})"
        case CmpAtom(a):
            return f"Cmp({show(a)})"
        case Card(a, op, b):
            if isinstance(b, Omega):
                rhs = "omega"
            elif isinstance(b, int):
                rhs = str(b)
            else:
                rhs = f"card({show(b)})"
            return f"card({show(a)}) {op} {rhs}"
        case Not(a):
            return f"not {show(a)}"
        case BinOp(op, a, b):
            return f"({show(a)} {op} {show(b)})"
        case Quant(kind, var, body):
            return f"{kind} {var} ({show(body)})"
    raise TypeError(f"not a syntax node: {node!r}")
