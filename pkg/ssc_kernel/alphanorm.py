"""Alpha-normalisation: push instantiations down to variables.

No beta or eta step is taken. The result only contains instantiation nodes
inside variable spines ``q[p]...[p]``.
"""

from __future__ import annotations

import dataclasses
import logging
from typing import Optional, Union

from .errors import IllFormed, NotInferable
from .syntax import (
    App,
    Code,
    Ctx,
    El,
    Fst,
    Lam,
    Lift,
    Mk,
    P,
    Pair,
    Pi,
    Plus,
    Q,
    Sigma,
    Single,
    Snd,
    Sub,
    Syntax,
    Tm,
    TmSub,
    Top,
    Tt,
    Ty,
    TySub,
    U,
    Un,
    var,
    var_index,
    walk,
)

_LOGGER = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class Weakening:
    """``p`` lifted some number of times."""

    sub: Sub


@dataclasses.dataclass(frozen=True)
class NSingle:
    """An alpha-normal single substitution lifted some number of times."""

    sub: Sub


@dataclasses.dataclass(frozen=True)
class NotNormal:
    reason: str = ""


NSub = Union[Weakening, NSingle]


def is_var(tm: Tm) -> bool:
    return var_index(tm) is not None


def is_weakening(sub: Sub) -> bool:
    while isinstance(sub, Plus):
        sub = sub.sub
    return isinstance(sub, P)


def is_alpha_normal(node: Syntax) -> bool:
    """True iff instantiation nodes occur only in variable spines."""
    stack = [node]
    while stack:
        current = stack.pop()
        if isinstance(current, TmSub):
            if var_index(current) is None:
                return False
            continue
        if isinstance(current, TySub):
            return False
        stack.extend(current.children())
    return True


def classify_sub(sub: Sub) -> Union[Weakening, NSingle, NotNormal]:
    inner = sub
    while isinstance(inner, Plus):
        inner = inner.sub
    if isinstance(inner, P):
        return Weakening(sub)
    if isinstance(inner, Single):
        if is_alpha_normal(inner.tm):
            return NSingle(sub)
        return NotNormal("single substitution payload is not alpha-normal")
    return NotNormal(f"not a single substitution: {type(inner).__name__}")


def alpha_sub(sub: Sub) -> Sub:
    """Alpha-normalise the payload of a single substitution."""
    match sub:
        case P():
            return sub
        case Single(tm):
            return Single(alpha_tm(tm))
        case Plus(inner):
            return Plus(alpha_sub(inner))
    raise IllFormed(f"alpha-normalisation only handles single substitutions, got {type(sub).__name__}")


def alpha_ty(ty: Ty) -> Ty:
    match ty:
        case TySub(inner, sub):
            return inst_ty(alpha_ty(inner), alpha_sub(sub))
        case U() | Top():
            return ty
        case El(code):
            return El(alpha_tm(code))
        case Pi(dom, cod):
            return Pi(alpha_ty(dom), alpha_ty(cod))
        case Sigma(a, b):
            return Sigma(alpha_ty(a), alpha_ty(b))
        case Lift(inner):
            return Lift(alpha_ty(inner))
    raise IllFormed(f"not a type: {ty!r}")


def alpha_tm(tm: Tm) -> Tm:
    if is_var(tm):
        return tm
    match tm:
        case TmSub(inner, sub):
            return inst_tm(alpha_tm(inner), alpha_sub(sub))
        case Lam(body):
            return Lam(alpha_tm(body))
        case App(fn, arg):
            return App(alpha_tm(fn), alpha_tm(arg))
        case Code(ty):
            return Code(alpha_ty(ty))
        case Mk(inner):
            return Mk(alpha_tm(inner))
        case Un(inner):
            return Un(alpha_tm(inner))
        case Tt():
            return tm
        case Pair(a, b):
            return Pair(alpha_tm(a), alpha_tm(b))
        case Fst(inner):
            return Fst(alpha_tm(inner))
        case Snd(inner):
            return Snd(alpha_tm(inner))
    raise IllFormed(f"not a term: {tm!r}")


def inst_var(k: int, sub: Sub) -> Tm:
    """Instantiate the variable of index ``k`` by an alpha-normal substitution."""
    match sub:
        case P():
            return var(k + 1)
        case Single(payload):
            return payload if k == 0 else var(k - 1)
        case Plus(inner):
            if k == 0:
                return Q()
            return inst_tm(inst_var(k - 1, inner), P())
    raise IllFormed(f"not an alpha-normal substitution: {type(sub).__name__}")


def inst_ty(ty: Ty, sub: Sub) -> Ty:
    """Instantiate an alpha-normal type; the result is alpha-normal."""
    match ty:
        case U() | Top():
            return ty
        case El(code):
            return El(inst_tm(code, sub))
        case Pi(dom, cod):
            return Pi(inst_ty(dom, sub), inst_ty(cod, Plus(sub)))
        case Sigma(a, b):
            return Sigma(inst_ty(a, sub), inst_ty(b, Plus(sub)))
        case Lift(inner):
            return Lift(inst_ty(inner, sub))
    raise IllFormed(f"not an alpha-normal type: {ty!r}")


def inst_tm(tm: Tm, sub: Sub) -> Tm:
    """Instantiate an alpha-normal term; the result is alpha-normal."""
    k = var_index(tm)
    if k is not None:
        return inst_var(k, sub)
    match tm:
        case Lam(body):
            return Lam(inst_tm(body, Plus(sub)))
        case App(fn, arg):
            return App(inst_tm(fn, sub), inst_tm(arg, sub))
        case Code(ty):
            return Code(inst_ty(ty, sub))
        case Mk(inner):
            return Mk(inst_tm(inner, sub))
        case Un(inner):
            return Un(inst_tm(inner, sub))
        case Tt():
            return tm
        case Pair(a, b):
            return Pair(inst_tm(a, sub), inst_tm(b, sub))
        case Fst(inner):
            return Fst(inst_tm(inner, sub))
        case Snd(inner):
            return Snd(inst_tm(inner, sub))
    raise IllFormed(f"not an alpha-normal term: {tm!r}")


def alpha_norm_ty(ctx: Ctx, ty: Ty, checker=None) -> Ty:
    """Alpha-normal form of a well-formed type."""
    from .core import DEFAULT_CHECKER

    (checker or DEFAULT_CHECKER).infer_ty_level(ctx, ty)
    return alpha_ty(ty)


def alpha_norm_tm(ctx: Ctx, tm: Tm, ty: Optional[Ty] = None, checker=None) -> Tm:
    """Alpha-normal form of a well-typed term.

    Checked against ``ty`` when given, otherwise its type is synthesised when
    possible.
    """
    from .core import DEFAULT_CHECKER

    chk = checker or DEFAULT_CHECKER
    if ty is not None:
        chk.check(ctx, tm, ty)
    else:
        try:
            chk.synth(ctx, tm)
        except NotInferable:
            _LOGGER.debug("Skipping type synthesis for checking-only term")
    return alpha_tm(tm)


def spine_count(node: Syntax) -> int:
    """Number of instantiation nodes outside variable spines."""
    return sum(
        1
        for sub in walk(node)
        if isinstance(sub, TySub) or (isinstance(sub, TmSub) and var_index(sub) is None)
    )
