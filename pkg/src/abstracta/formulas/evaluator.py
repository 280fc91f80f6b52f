"""Finite standard semantics for the formula language.

A :class:`Structure` is what a formula is evaluated in: a carrier of objects
(a mask over the ambient domain), the concepts over it (all subsets of the
carrier), an optional abstraction operator and an optional equivalence
relation for ``E(.,.)`` atoms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from ..core import members
from .syntax import (
    Abs,
    BinOp,
    Card,
    CmpAtom,
    Compl,
    ConEq,
    CVar,
    EAtom,
    Empty,
    Lit,
    Mem,
    Not,
    ObjEq,
    Omega,
    OVar,
    Quant,
    SetOp,
    Universe,
)


class EvaluationError(ValueError):
    """A formula could not be evaluated in the given structure."""


class UndefinedAbs(EvaluationError):
    """``abs`` applied to a concept outside the operator's domain of definition."""


@dataclass(frozen=True)
class Structure:
    n: int
    carrier: int
    operator: Callable[[int], int] | None = None
    relation: Callable[[int, int], bool] | None = None

    def submasks(self) -> list[int]:
        out = []
        sub = self.carrier
        while True:
            out.append(sub)
            if sub == 0:
                break
            sub = (sub - 1) & self.carrier
        out.reverse()
        return out

    def objects(self) -> list[int]:
        return members(self.carrier)


def evaluate_in(structure: Structure, formula, env: Mapping[str, int] | None = None) -> bool:
    """Truth value of ``formula`` in ``structure`` under ``env``.

    ``env`` maps object variables to objects and concept variables to masks.
    """
    return _Evaluator(structure).formula(formula, dict(env or {}))


class _Evaluator:
    def __init__(self, st: Structure):
        self.st = st
        self._concepts = st.submasks()
        self._objects = st.objects()

    def concept(self, t, env: dict) -> int:
        st = self.st
        match t:
            case CVar(name):
                try:
                    return env[name]
                except KeyError:
                    raise EvaluationError(f"unbound concept variable {name}") from None
            case Empty():
                return 0
            case Universe():
                return st.carrier
            case Lit(elems):
                bits = 0
                for x in elems:
                    bits |= 1 << x
                if bits >> st.n:
                    raise EvaluationError(f"literal {{{', '.join(map(str, elems))}}} names objects outside the domain")
                # may leave the carrier; abs then reports it as undefined
                return bits
            case SetOp("union", a, b):
                return self.concept(a, env) | self.concept(b, env)
            case SetOp("inter", a, b):
                return self.concept(a, env) & self.concept(b, env)
            case SetOp("minus", a, b):
                return self.concept(a, env) & ~self.concept(b, env)
            case Compl(a):
                return st.carrier & ~self.concept(a, env)
        raise EvaluationError(f"not a concept term: {t!r}")

    def obj(self, t, env: dict) -> int:
        match t:
            case OVar(name):
                try:
                    return env[name]
                except KeyError:
                    raise EvaluationError(f"unbound object variable {name}") from None
            case Abs(a):
                if self.st.operator is None:
                    raise EvaluationError("abs(...) needs an abstraction operator")
                return self.st.operator(self.concept(a, env))
        raise EvaluationError(f"not an object term: {t!r}")

    def formula(self, f, env: dict) -> bool:
        match f:
            case ObjEq(a, b):
                return self.obj(a, env) == self.obj(b, env)
            case ConEq(a, b):
                return self.concept(a, env) == self.concept(b, env)
            case Mem(a, b):
                return bool(self.concept(b, env) >> self.obj(a, env) & 1)
            case EAtom(a, b):
                if self.st.relation is None:
                    raise EvaluationError("E(...) needs an equivalence relation")
                return self.st.relation(self.concept(a, env), self.concept(b, env))
            case CmpAtom(a):
                x = self.concept(a, env)
                # X has an equinumerous partner Y with X ⊔ Y = universe
                return 2 * x.bit_count() == self.st.carrier.bit_count()
            case Card(a, op, b):
                left = self.concept(a, env).bit_count()
                if isinstance(b, Omega):
                    # every concept of a finite structure is finite
                    return op != "="
                right = b if isinstance(b, int) else self.concept(b, env).bit_count()
                if op == "=":
                    return left == right
                if op == "<=":
                    return left <= right
                return left < right
            case Not(a):
                return not self.formula(a, env)
            case BinOp("and", a, b):
                return self.formula(a, env) and self.formula(b, env)
            case BinOp("or", a, b):
                return self.formula(a, env) or self.formula(b, env)
            case BinOp("implies", a, b):
                return (not self.formula(a, env)) or self.formula(b, env)
            case BinOp("iff", a, b):
                return self.formula(a, env) == self.formula(b, env)
            case Quant(kind, var, body):
                domain = self._concepts if var[:1].isupper() else self._objects
                saved = env.get(var, _MISSING)
                try:
                    if kind == "forall":
                        for v in domain:
                            env[var] = v
                            if not self.formula(body, env):
                                return False
                        return True
                    for v in domain:
                        env[var] = v
                        if self.formula(body, env):
                            return True
                    return False
                finally:
                    if saved is _MISSING:
                        env.pop(var, None)
                    else:
                        env[var] = saved
        raise EvaluationError(f"not a formula: {f!r}")


_MISSING = object()
