"""Normalisation by evaluation and conversion checking.

Terms are evaluated into an environment-based semantic domain and read back
type-directed into beta-short, eta-long normal forms. Variables in normal forms
are printed as canonical spines ``q[p]...[p]``. The same evaluator serves both
calculi: each substitution constructor acts on environments.
"""

from __future__ import annotations

import dataclasses
import logging
from typing import Callable, Optional, Tuple

from .errors import IllFormed
from .syntax import (
    App,
    CComp,
    CEps,
    CExt,
    CId,
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
    replace_children,
    var,
    var_index,
)

_LOGGER = logging.getLogger(__name__)


# Semantic domain


class Value:
    """Semantic term."""


class VType:
    """Semantic type."""


class Neutral:
    """Stuck elimination spine rooted at a variable."""


@dataclasses.dataclass(frozen=True)
class Closure:
    env: Tuple[Value, ...]
    body: Syntax

    def ty(self, arg: Value) -> VType:
        return eval_ty(self.env + (arg,), self.body)

    def tm(self, arg: Value) -> Value:
        return eval_tm(self.env + (arg,), self.body)


@dataclasses.dataclass(frozen=True)
class VU(VType):
    level: int


@dataclasses.dataclass(frozen=True)
class VPi(VType):
    dom: VType
    cod: Closure


@dataclasses.dataclass(frozen=True)
class VSigma(VType):
    fst: VType
    snd: Closure


@dataclasses.dataclass(frozen=True)
class VTop(VType):
    pass


@dataclasses.dataclass(frozen=True)
class VLift(VType):
    ty: VType


@dataclasses.dataclass(frozen=True)
class VEl(VType):
    ne: Neutral


@dataclasses.dataclass(frozen=True)
class VLam(Value):
    body: Closure


@dataclasses.dataclass(frozen=True)
class VPair(Value):
    fst: Value
    snd: Value


@dataclasses.dataclass(frozen=True)
class VCode(Value):
    ty: VType


@dataclasses.dataclass(frozen=True)
class VMk(Value):
    val: Value


@dataclasses.dataclass(frozen=True)
class VTt(Value):
    pass


@dataclasses.dataclass(frozen=True)
class VNe(Value):
    ne: Neutral


@dataclasses.dataclass(frozen=True)
class NVar(Neutral):
    level: int


@dataclasses.dataclass(frozen=True)
class NApp(Neutral):
    fn: Neutral
    arg: Value


@dataclasses.dataclass(frozen=True)
class NFst(Neutral):
    ne: Neutral


@dataclasses.dataclass(frozen=True)
class NSnd(Neutral):
    ne: Neutral


@dataclasses.dataclass(frozen=True)
class NUn(Neutral):
    ne: Neutral


# Eliminators


def do_app(fn: Value, arg: Value) -> Value:
    if isinstance(fn, VLam):
        return fn.body.tm(arg)
    if isinstance(fn, VNe):
        return VNe(NApp(fn.ne, arg))
    raise IllFormed(f"cannot apply {type(fn).__name__}")


def do_fst(val: Value) -> Value:
    if isinstance(val, VPair):
        return val.fst
    if isinstance(val, VNe):
        return VNe(NFst(val.ne))
    raise IllFormed(f"cannot project from {type(val).__name__}")


def do_snd(val: Value) -> Value:
    if isinstance(val, VPair):
        return val.snd
    if isinstance(val, VNe):
        return VNe(NSnd(val.ne))
    raise IllFormed(f"cannot project from {type(val).__name__}")


def do_un(val: Value) -> Value:
    if isinstance(val, VMk):
        return val.val
    if isinstance(val, VNe):
        return VNe(NUn(val.ne))
    raise IllFormed(f"cannot unlift {type(val).__name__}")


def do_el(val: Value) -> VType:
    if isinstance(val, VCode):
        return val.ty
    if isinstance(val, VNe):
        return VEl(val.ne)
    raise IllFormed(f"El of non-code {type(val).__name__}")


# Evaluation


Env = Tuple[Value, ...]


def eval_sub(env: Env, sub: Sub) -> Env:
    """Act with a substitution on an environment for its domain."""
    match sub:
        case P():
            if not env:
                raise IllFormed("p on the empty context")
            return env[:-1]
        case Single(tm):
            return env + (eval_tm(env, tm),)
        case Plus(inner):
            if not env:
                raise IllFormed("lifting on the empty context")
            return eval_sub(env[:-1], inner) + (env[-1],)
        case CId():
            return env
        case CComp(first, second):
            return eval_sub(eval_sub(env, second), first)
        case CEps():
            return ()
        case CExt(inner, tm):
            return eval_sub(env, inner) + (eval_tm(env, tm),)
    raise IllFormed(f"unknown substitution {sub!r}")


def eval_ty(env: Env, ty: Ty) -> VType:
    match ty:
        case U(level):
            return VU(level)
        case El(code):
            return do_el(eval_tm(env, code))
        case Pi(dom, cod):
            return VPi(eval_ty(env, dom), Closure(env, cod))
        case Sigma(a, b):
            return VSigma(eval_ty(env, a), Closure(env, b))
        case Top():
            return VTop()
        case Lift(inner):
            return VLift(eval_ty(env, inner))
        case TySub(inner, sub):
            return eval_ty(eval_sub(env, sub), inner)
    raise IllFormed(f"unknown type {ty!r}")


def eval_tm(env: Env, tm: Tm) -> Value:
    match tm:
        case Q():
            if not env:
                raise IllFormed("q in the empty context")
            return env[-1]
        case TmSub(inner, sub):
            return eval_tm(eval_sub(env, sub), inner)
        case Lam(body):
            return VLam(Closure(env, body))
        case App(fn, arg):
            return do_app(eval_tm(env, fn), eval_tm(env, arg))
        case Code(ty):
            return VCode(eval_ty(env, ty))
        case Mk(inner):
            return VMk(eval_tm(env, inner))
        case Un(inner):
            return do_un(eval_tm(env, inner))
        case Tt():
            return VTt()
        case Pair(a, b):
            return VPair(eval_tm(env, a), eval_tm(env, b))
        case Fst(inner):
            return do_fst(eval_tm(env, inner))
        case Snd(inner):
            return do_snd(eval_tm(env, inner))
    raise IllFormed(f"unknown term {tm!r}")


# Scopes and readback


@dataclasses.dataclass(frozen=True)
class Scope:
    """Variables in scope as values, with their semantic types by level."""

    env: Env = ()
    types: Tuple[VType, ...] = ()

    def __len__(self) -> int:
        return len(self.env)

    def fresh(self) -> Value:
        return VNe(NVar(len(self.env)))

    def bind(self, ty: VType) -> "Scope":
        return Scope(self.env + (self.fresh(),), self.types + (ty,))


def scope_of(ctx: Ctx) -> Scope:
    scope = Scope()
    for entry in ctx.entries:
        scope = scope.bind(eval_ty(scope.env, entry))
    return scope


def quote_ty(scope: Scope, ty: VType) -> Ty:
    match ty:
        case VU(level):
            return U(level)
        case VPi(dom, cod):
            return Pi(quote_ty(scope, dom), quote_ty(scope.bind(dom), cod.ty(scope.fresh())))
        case VSigma(a, b):
            return Sigma(quote_ty(scope, a), quote_ty(scope.bind(a), b.ty(scope.fresh())))
        case VTop():
            return Top()
        case VLift(inner):
            return Lift(quote_ty(scope, inner))
        case VEl(ne):
            return El(quote_ne(scope, ne)[0])
    raise IllFormed(f"cannot read back type {ty!r}")


def quote_tm(scope: Scope, ty: VType, val: Value) -> Tm:
    """Type-directed readback into eta-long normal form."""
    match ty:
        case VPi(dom, cod):
            x = scope.fresh()
            return Lam(quote_tm(scope.bind(dom), cod.ty(x), do_app(val, x)))
        case VSigma(a, b):
            first = do_fst(val)
            return Pair(quote_tm(scope, a, first), quote_tm(scope, b.ty(first), do_snd(val)))
        case VTop():
            return Tt()
        case VLift(inner):
            return Mk(quote_tm(scope, inner, do_un(val)))
        case VU(_):
            return Code(quote_ty(scope, do_el(val)))
        case VEl(_):
            if isinstance(val, VNe):
                return quote_ne(scope, val.ne)[0]
    raise IllFormed(f"cannot read back {type(val).__name__} at {type(ty).__name__}")


def quote_ne(scope: Scope, ne: Neutral) -> Tuple[Tm, VType]:
    match ne:
        case NVar(level):
            return var(len(scope) - 1 - level), scope.types[level]
        case NApp(fn, arg):
            head, ty = quote_ne(scope, fn)
            if not isinstance(ty, VPi):
                raise IllFormed("neutral application of a non-function")
            return App(head, quote_tm(scope, ty.dom, arg)), ty.cod.ty(arg)
        case NFst(inner):
            head, ty = quote_ne(scope, inner)
            if not isinstance(ty, VSigma):
                raise IllFormed("neutral projection from a non-pair")
            return Fst(head), ty.fst
        case NSnd(inner):
            head, ty = quote_ne(scope, inner)
            if not isinstance(ty, VSigma):
                raise IllFormed("neutral projection from a non-pair")
            return Snd(head), ty.snd.ty(VNe(NFst(inner)))
        case NUn(inner):
            head, ty = quote_ne(scope, inner)
            if not isinstance(ty, VLift):
                raise IllFormed("neutral unlift of a non-lifted term")
            return Un(head), ty.ty
    raise IllFormed(f"unknown neutral {ne!r}")


# Unchecked entry points used by the checkers


def nf_ty(ctx: Ctx, ty: Ty) -> Ty:
    scope = scope_of(ctx)
    return quote_ty(scope, eval_ty(scope.env, ty))


def nf_tm(ctx: Ctx, tm: Tm, ty: Ty) -> Tm:
    scope = scope_of(ctx)
    return quote_tm(scope, eval_ty(scope.env, ty), eval_tm(scope.env, tm))


def whnf_ty(ctx: Ctx, ty: Ty) -> Tuple[Scope, VType]:
    scope = scope_of(ctx)
    return scope, eval_ty(scope.env, ty)


def nf_sub(dom: Ctx, sub: Sub, cod: Ctx) -> Tuple[Tm, ...]:
    """Normal forms of the components a substitution assigns to ``cod``."""
    scope = scope_of(dom)
    env = eval_sub(scope.env, sub)
    if len(env) != len(cod):
        raise IllFormed(f"substitution yields {len(env)} components for a context of length {len(cod)}")
    out = []
    for k, entry in enumerate(cod.entries):
        out.append(quote_tm(scope, eval_ty(env[:k], entry), env[k]))
    return tuple(out)


def rename_nf(node: Syntax, mapping: Callable[[int], Optional[int]], n_from: int, n_to: int, depth: int = 0) -> Syntax:
    """Move a normal form between scopes along a partial map of de Bruijn levels."""
    if isinstance(node, Tm):
        k = var_index(node)
        if k is not None:
            if k < depth:
                return node
            target = mapping(n_from - 1 - (k - depth))
            if target is None:
                raise IllFormed(f"variable {k - depth} has no preimage")
            return var(n_to - 1 - target + depth)
    match node:
        case Pi(dom, cod):
            return Pi(rename_nf(dom, mapping, n_from, n_to, depth), rename_nf(cod, mapping, n_from, n_to, depth + 1))
        case Sigma(a, b):
            return Sigma(rename_nf(a, mapping, n_from, n_to, depth), rename_nf(b, mapping, n_from, n_to, depth + 1))
        case Lam(body):
            return Lam(rename_nf(body, mapping, n_from, n_to, depth + 1))
    return replace_children(node, [rename_nf(child, mapping, n_from, n_to, depth) for child in node.children()])


def pullback_ty(dom: Ctx, sub: Sub, cod: Ctx, ty: Ty) -> Ty:
    """Find ``A`` over ``cod`` with ``A[sub]`` convertible to ``ty`` over ``dom``.

    Inverts the variable components of ``sub``. Raises IllFormed when ``ty``
    mentions a variable no component hits.
    """
    scope = scope_of(dom)
    env = eval_sub(scope.env, sub)
    if len(env) != len(cod):
        raise IllFormed("substitution does not match its codomain")
    inverse = {}
    for position, val in enumerate(env):
        if isinstance(val, VNe) and isinstance(val.ne, NVar):
            inverse.setdefault(val.ne.level, position)
    nf = quote_ty(scope, eval_ty(scope.env, ty))
    try:
        return rename_nf(nf, inverse.get, len(dom), len(cod))
    except IllFormed as err:
        _LOGGER.debug("Pullback failed: %s", err)
        raise IllFormed(f"cannot pull type back along substitution: {err.message}") from err


# Checked public API


def _checker(checker):
    if checker is not None:
        return checker
    from .core import DEFAULT_CHECKER

    return DEFAULT_CHECKER


def normalize_ty(ctx: Ctx, ty: Ty, checker=None) -> Ty:
    """Normal form of a well-formed type."""
    _checker(checker).infer_ty_level(ctx, ty)
    return nf_ty(ctx, ty)


def normalize_tm(ctx: Ctx, tm: Tm, ty: Ty, checker=None) -> Tm:
    """Eta-long normal form of a term checked against ``ty``."""
    chk = _checker(checker)
    chk.infer_ty_level(ctx, ty)
    chk.check(ctx, tm, ty)
    return nf_tm(ctx, tm, ty)


def conv_ty(ctx: Ctx, left: Ty, right: Ty, checker=None) -> bool:
    chk = _checker(checker)
    if chk.infer_ty_level(ctx, left) != chk.infer_ty_level(ctx, right):
        return False
    return nf_ty(ctx, left) == nf_ty(ctx, right)


def conv_tm(ctx: Ctx, left: Tm, right: Tm, ty: Ty, checker=None) -> bool:
    chk = _checker(checker)
    chk.infer_ty_level(ctx, ty)
    chk.check(ctx, left, ty)
    chk.check(ctx, right, ty)
    return nf_tm(ctx, left, ty) == nf_tm(ctx, right, ty)


def conv_sub(dom: Ctx, left: Sub, right: Sub, cod: Ctx, checker=None) -> bool:
    """Componentwise conversion of two substitutions ``dom -> cod``."""
    chk = _checker(checker)
    for sub in (left, right):
        got = chk.wf_sub(dom, sub)
        if len(got) != len(cod) or not all(
            nf_ty(got.prefix(k), a) == nf_ty(cod.prefix(k), b)
            for k, (a, b) in enumerate(zip(got.entries, cod.entries))
        ):
            raise IllFormed("substitution codomain does not match")
    return nf_sub(dom, left, cod) == nf_sub(dom, right, cod)


def eta_expand(ctx: Ctx, ne: Tm, ty: Ty) -> Tm:
    """Constructor-headed eta expansion of a neutral term at ``ty``."""
    return nf_tm(ctx, ne, ty)
