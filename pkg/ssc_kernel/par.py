"""Parallel substitutions built inside the single substitution calculus.

``SubStar`` freely adds identity and composition to single substitutions.
``Comp(f, g)`` instantiates by ``f`` first and ``g`` second, so
``x[Comp(f, g)]`` is ``x[f][g]``. No category laws are imposed; SubStar
values are only compared through their action.

``Tms`` lists the terms of a parallel substitution, oldest first, and is
embedded into SubStar by ``tms_embed``.
"""

from __future__ import annotations

import dataclasses
import logging
from typing import Optional, Sequence, Tuple

from .core import DEFAULT_CHECKER, Checker
from .errors import IllFormed
from .eval import conv_tm, conv_ty, nf_ty
from .syntax import (
    CEps,
    CExt,
    Ctx,
    P,
    Plus,
    Single,
    Sub,
    Syntax,
    Tm,
    TmSub,
    Ty,
    TySub,
    var,
    weaken_ty,
)

_LOGGER = logging.getLogger(__name__)


class SubStar(Syntax):
    """Single substitutions closed under identity and composition."""


@dataclasses.dataclass(frozen=True)
class Id(SubStar):
    pass


@dataclasses.dataclass(frozen=True)
class Comp(SubStar):
    first: SubStar
    second: SubStar


@dataclasses.dataclass(frozen=True)
class Emb(SubStar):
    sub: Sub


def star_inst_ty(ty: Ty, ss: SubStar) -> Ty:
    match ss:
        case Id():
            return ty
        case Comp(first, second):
            return star_inst_ty(star_inst_ty(ty, first), second)
        case Emb(sub):
            return TySub(ty, sub)
    raise IllFormed(f"not a SubStar: {ss!r}")


def star_inst_tm(tm: Tm, ss: SubStar) -> Tm:
    match ss:
        case Id():
            return tm
        case Comp(first, second):
            return star_inst_tm(star_inst_tm(tm, first), second)
        case Emb(sub):
            return TmSub(tm, sub)
    raise IllFormed(f"not a SubStar: {ss!r}")


def star_plus(ss: SubStar) -> SubStar:
    """Lift a SubStar under one more binder."""
    match ss:
        case Id():
            return ss
        case Comp(first, second):
            return Comp(star_plus(first), star_plus(second))
        case Emb(sub):
            return Emb(Plus(sub))
    raise IllFormed(f"not a SubStar: {ss!r}")


def star_plus_n(ss: SubStar, n: int) -> SubStar:
    for _ in range(n):
        ss = star_plus(ss)
    return ss


def star_cod(dom: Ctx, ss: SubStar, checker: Optional[Checker] = None) -> Ctx:
    """Codomain of ``ss`` given its domain."""
    checker = checker or DEFAULT_CHECKER
    match ss:
        case Id():
            return dom
        case Comp(first, second):
            return star_cod(star_cod(dom, second, checker), first, checker)
        case Emb(sub):
            return checker.wf_sub(dom, sub)
    raise IllFormed(f"not a SubStar: {ss!r}")


@dataclasses.dataclass(frozen=True)
class Tms:
    """A parallel substitution out of a context of length ``size``; ``terms`` are oldest first."""

    terms: Tuple[Tm, ...]
    size: int

    def __len__(self) -> int:
        return len(self.terms)

    def to_sexp(self):
        from .sexpr import to_sexp

        return ["tms", *[to_sexp(t) for t in self.terms]]


def tms_embed(ts: Tms) -> SubStar:
    """``⌞ε⌟ = id∘p∘…∘p`` and ``⌞γ,a⌟ = ⌞γ⌟⁺ ∘ ⟨a⟩``."""
    if not ts.terms:
        ss: SubStar = Id()
        for _ in range(ts.size):
            ss = Comp(ss, Emb(P()))
        return ss
    init = Tms(ts.terms[:-1], ts.size)
    return Comp(star_plus(tms_embed(init)), Emb(Single(ts.terms[-1])))


def tms_inst_ty(ty: Ty, ts: Tms) -> Ty:
    return star_inst_ty(ty, tms_embed(ts))


def tms_inst_tm(tm: Tm, ts: Tms) -> Tm:
    return star_inst_tm(tm, tms_embed(ts))


def tms_identity(size: int) -> Tms:
    return Tms(tuple(var(size - 1 - k) for k in range(size)), size)


def tms_id(ctx: Ctx) -> Tms:
    return tms_identity(len(ctx))


def tms_eps(dom: Ctx) -> Tms:
    return Tms((), len(dom))


def tms_p(ctx: Ctx, ty: Ty) -> Tms:
    """The weakening ``Γ▷A → Γ`` as the tail of the identity."""
    return Tms(tms_id(ctx.extend(ty)).terms[:-1], len(ctx) + 1)


def tms_comp(gamma: Tms, delta: Tms) -> Tms:
    """``γ ∘ δ``: each component of ``γ`` instantiated by ``⌞δ⌟``."""
    embedded = tms_embed(delta)
    return Tms(tuple(star_inst_tm(t, embedded) for t in gamma.terms), delta.size)


def tms_ext(gamma: Tms, tm: Tm) -> Tms:
    return Tms(gamma.terms + (tm,), gamma.size)


def tms_fst(gamma: Tms) -> Tms:
    if not gamma.terms:
        raise IllFormed("first projection of an empty substitution")
    return Tms(gamma.terms[:-1], gamma.size)


def tms_snd(gamma: Tms) -> Tm:
    if not gamma.terms:
        raise IllFormed("second projection of an empty substitution")
    return gamma.terms[-1]


def tms_check(ts: Tms, dom: Ctx, cod: Ctx, checker: Optional[Checker] = None) -> None:
    """Check every component over ``dom`` at its instantiated entry type."""
    checker = checker or DEFAULT_CHECKER
    if ts.size != len(dom):
        raise IllFormed(f"substitution out of {ts.size} entries used on a context of length {len(dom)}")
    if len(ts) != len(cod):
        raise IllFormed(f"{len(ts)} terms for a codomain of length {len(cod)}")
    for k, tm in enumerate(ts.terms):
        expected = tms_inst_ty(cod.entries[k], Tms(ts.terms[:k], ts.size))
        try:
            checker.check(dom, tm, expected)
        except IllFormed as err:
            raise err.at(f"tms[{k}]")


def tms_from_terms(terms: Sequence[Tm], dom: Ctx, cod: Ctx, checker: Optional[Checker] = None) -> Tms:
    """Validate a ``(tms t1 ... tn)`` literal against its codomain."""
    ts = Tms(tuple(terms), len(dom))
    tms_check(ts, dom, cod, checker)
    return ts


def tms_to_csub(ts: Tms) -> Sub:
    """The same list of terms as a CwF substitution ``(ε, t1, ..., tn)``."""
    sub: Sub = CEps()
    for tm in ts.terms:
        sub = CExt(sub, tm)
    return sub


def tms_conv(left: Tms, right: Tms, dom: Ctx, cod: Ctx, checker: Optional[Checker] = None) -> bool:
    """Componentwise conversion of two parallel substitutions into ``cod``."""
    if len(left) != len(right) or len(left) != len(cod):
        return False
    for k, (a, b) in enumerate(zip(left.terms, right.terms)):
        ty = tms_inst_ty(cod.entries[k], Tms(left.terms[:k], left.size))
        if not conv_tm(dom, a, b, ty, checker):
            _LOGGER.debug("Component %s differs", k)
            return False
    return True


def star_agree_ty(dom: Ctx, ty: Ty, left: SubStar, right: SubStar, checker: Optional[Checker] = None) -> bool:
    """Whether two SubStars act the same on ``ty``."""
    return conv_ty(dom, star_inst_ty(ty, left), star_inst_ty(ty, right), checker)


def star_agree_vars(dom: Ctx, cod: Ctx, left: SubStar, right: SubStar, checker: Optional[Checker] = None) -> bool:
    """Whether two SubStars act the same on every variable of ``cod``."""
    for k in range(len(cod)):
        entry = weaken_ty(cod.entries[len(cod) - 1 - k], k + 1)
        ty = star_inst_ty(entry, left)
        if not conv_tm(dom, star_inst_tm(var(k), left), star_inst_tm(var(k), right), ty, checker):
            _LOGGER.debug("Variable %s is sent to different terms", k)
            return False
    return True


def expansion_agrees(dom: Ctx, ty: Ty, ts: Tms) -> bool:
    """Instantiating by ``⌞ts⌟`` matches the parallel instantiation by evaluation."""
    return nf_ty(dom, tms_inst_ty(ty, ts)) == nf_ty(dom, TySub(ty, tms_to_csub(ts)))
