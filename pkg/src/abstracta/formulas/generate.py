"""Random closed sentences and truth-preserving rewrites, for property tests."""

from __future__ import annotations

import random

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
    Mem,
    Not,
    ObjEq,
    Omega,
    OVar,
    Quant,
    SetOp,
    Universe,
)

_OBJ_NAMES = "xyzuvw"
_CON_NAMES = "XYZUVW"


def random_sentence(rng: random.Random, depth: int = 3, use_e: bool = True, use_abs: bool = True):
    """A closed, well-sorted sentence without literal sets.

    Literal sets name particular objects, so they are left out: the sentences
    are meant to be invariant under isomorphism.
    """
    return _Gen(rng, use_e, use_abs).formula(depth, [], [])


class _Gen:
    def __init__(self, rng: random.Random, use_e: bool, use_abs: bool):
        self.rng = rng
        self.use_e = use_e
        self.use_abs = use_abs

    def cterm(self, cvars: list[str], depth: int = 1):
        r = self.rng.random()
        if depth > 0 and r < 0.25:
            if self.rng.random() < 0.3:
                return Compl(self.cterm(cvars, depth - 1))
            op = self.rng.choice(("union", "inter", "minus"))
            return SetOp(op, self.cterm(cvars, depth - 1), self.cterm(cvars, depth - 1))
        if cvars and r < 0.8:
            return CVar(self.rng.choice(cvars))
        return self.rng.choice((Empty(), Universe()))

    def oterm(self, ovars: list[str], cvars: list[str]):
        if ovars and (not self.use_abs or self.rng.random() < 0.6):
            return OVar(self.rng.choice(ovars))
        return Abs(self.cterm(cvars))

    def atom(self, ovars: list[str], cvars: list[str]):
        kinds = ["ceq", "card", "cmp"]
        if ovars or self.use_abs:
            kinds += ["oeq", "mem", "mem"]
        if self.use_e:
            kinds.append("e")
        kind = self.rng.choice(kinds)
        if kind == "ceq":
            return ConEq(self.cterm(cvars), self.cterm(cvars))
        if kind == "card":
            op = self.rng.choice(("=", "<=", "<"))
            rhs = self.rng.choice(("card", "card", "int", "omega"))
            if rhs == "int":
                right = self.rng.randint(0, 4)
            elif rhs == "omega":
                right = Omega()
            else:
                right = self.cterm(cvars)
            return Card(self.cterm(cvars), op, right)
        if kind == "cmp":
            return CmpAtom(self.cterm(cvars))
        if kind == "oeq":
            return ObjEq(self.oterm(ovars, cvars), self.oterm(ovars, cvars))
        if kind == "mem":
            return Mem(self.oterm(ovars, cvars), self.cterm(cvars))
        return EAtom(self.cterm(cvars), self.cterm(cvars))

    def formula(self, depth: int, ovars: list[str], cvars: list[str]):
        if depth <= 0:
            return self.atom(ovars, cvars)
        r = self.rng.random()
        if r < 0.4:
            over_concepts = self.rng.random() < 0.5 and len(cvars) < 2
            if over_concepts:
                var = _CON_NAMES[len(cvars)]
                body = self.formula(depth - 1, ovars, cvars + [var])
            else:
                var = _OBJ_NAMES[len(ovars) % len(_OBJ_NAMES)]
                body = self.formula(depth - 1, ovars + [var], cvars)
            return Quant(self.rng.choice(("forall", "exists")), var, body)
        if r < 0.5:
            return Not(self.formula(depth - 1, ovars, cvars))
        if r < 0.85:
            op = self.rng.choice(("and", "or", "implies", "iff"))
            return BinOp(op, self.formula(depth - 1, ovars, cvars), self.formula(depth - 1, ovars, cvars))
        return self.atom(ovars, cvars)


def dual_rewrite(f, rng: random.Random, rate: float = 0.5):
    """Rewrite ``f`` with De Morgan and quantifier-duality laws at random sites."""
    match f:
        case Quant(kind, var, body):
            body = dual_rewrite(body, rng, rate)
            if rng.random() < rate:
                other = "exists" if kind == "forall" else "forall"
                return Not(Quant(other, var, Not(body)))
            return Quant(kind, var, body)
        case BinOp(op, a, b):
            a, b = dual_rewrite(a, rng, rate), dual_rewrite(b, rng, rate)
            if rng.random() < rate:
                if op == "and":
                    return Not(BinOp("or", Not(a), Not(b)))
                if op == "or":
                    return Not(BinOp("and", Not(a), Not(b)))
                if op == "implies":
                    return BinOp("or", Not(a), b)
                return BinOp("and", BinOp("implies", a, b), BinOp("implies", b, a))
            return BinOp(op, a, b)
        case Not(a):
            a = dual_rewrite(a, rng, rate)
            if rng.random() < rate / 2:
                return Not(Not(Not(a)))
            return Not(a)
    if rng.random() < rate / 4:
        return Not(Not(f))
    return f
