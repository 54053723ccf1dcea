"""Termification of the single substitution syntax into a CwF.

Contexts are closed types with their level, substitutions are closed
functions between them, types are closed functions into a universe and terms
are closed dependent functions. Level mismatches are repaired with iterated
``Lift``/``mk``/``un``, using truncating subtraction of levels.

Every emitted definition is checked against its sort and registered in the
model's checker, so later definitions can apply it.
"""

from __future__ import annotations

import dataclasses
import logging
from typing import TYPE_CHECKING, Any, Callable, Dict, Optional, Tuple

from .const import CWF_LAWS, GEN_RETRIES, TERMIFY_CONST, TERMIFY_DEPENDENT, TERMIFY_MODES, TERMIFY_WEAKENING
from .core import Checker
from .errors import Exhausted, IllFormed, Verdict
from .eval import conv_tm, conv_ty
from .sexpr import show
from .syntax import (
    EMPTY,
    App,
    Code,
    El,
    Fst,
    Lam,
    Lift,
    Mk,
    P,
    Pair,
    Pi,
    Q,
    Sigma,
    Snd,
    Syntax,
    Tm,
    TmSub,
    Top,
    Tt,
    Ty,
    U,
    Un,
    arrow,
    replace_children,
    weaken_tm,
)

if TYPE_CHECKING:
    from .gen import TermGenerator

_LOGGER = logging.getLogger(__name__)


def tsub(a: int, b: int) -> int:
    """Truncating subtraction."""
    return max(a - b, 0)


def lift_k(k: int, ty: Ty) -> Ty:
    for _ in range(k):
        ty = Lift(ty)
    return ty


def mk_k(k: int, tm: Tm) -> Tm:
    for _ in range(k):
        tm = Mk(tm)
    return tm


def un_k(k: int, tm: Tm) -> Tm:
    for _ in range(k):
        tm = Un(tm)
    return tm


def wk(tm: Tm) -> Tm:
    return TmSub(tm, P())


# Entities


@dataclasses.dataclass(frozen=True)
class TCon:
    level: int
    ty: Ty


@dataclasses.dataclass(frozen=True)
class TSub:
    dom: TCon
    cod: TCon
    tm: Tm


@dataclasses.dataclass(frozen=True)
class TTy:
    con: TCon
    level: int
    tm: Tm


@dataclasses.dataclass(frozen=True)
class TTm:
    con: TCon
    ty: TTy
    tm: Tm


# Sorts


def con_sort(con: TCon) -> int:
    return con.level


def sub_sort(dom: TCon, cod: TCon) -> Ty:
    return arrow(lift_k(tsub(cod.level, dom.level), dom.ty), lift_k(tsub(dom.level, cod.level), cod.ty))


def ty_sort(con: TCon, level: int) -> Ty:
    return arrow(lift_k(tsub(1 + level, con.level), con.ty), lift_k(tsub(con.level, 1 + level), U(level)))


def tm_sort(ty: TTy) -> Ty:
    con, i = ty.con, ty.level
    x = un_k(tsub(i, con.level), Q())
    return Pi(lift_k(tsub(i, con.level), con.ty), lift_k(tsub(con.level, i), El(apply_ty(ty, wk(ty.tm), x))))


# Application with level adjustment; ``x`` is always an unlifted argument.


def apply_sub(sub: TSub, fn: Tm, x: Tm) -> Tm:
    return un_k(tsub(sub.dom.level, sub.cod.level), App(fn, mk_k(tsub(sub.cod.level, sub.dom.level), x)))


def apply_ty(ty: TTy, fn: Tm, x: Tm) -> Tm:
    return un_k(tsub(ty.con.level, 1 + ty.level), App(fn, mk_k(tsub(1 + ty.level, ty.con.level), x)))


def apply_tm(tm: TTm, fn: Tm, x: Tm) -> Tm:
    level = tm.ty.level
    return un_k(tsub(tm.con.level, level), App(fn, mk_k(tsub(level, tm.con.level), x)))


def erase(node: Syntax) -> Syntax:
    """Drop every ``Lift``, ``mk`` and ``un`` decoration."""
    if isinstance(node, (Lift, Mk, Un)):
        return erase(node.ty if isinstance(node, Lift) else node.tm)
    return replace_children(node, [erase(child) for child in node.children()])


class TermifiedModel:
    """The CwF built from closed syntax, with decorated definitions."""

    def __init__(self, checker: Optional[Checker] = None):
        self.checker = checker or Checker()

    def _emit(self, tm: Tm, sort: Ty, what: str) -> Tm:
        try:
            self.checker.define(tm, sort)
        except IllFormed as err:
            raise err.at(what)
        _LOGGER.debug("Emitted %s", what)
        return tm

    def _same_con(self, left: TCon, right: TCon) -> None:
        if left.level != right.level or not conv_ty(EMPTY, left.ty, right.ty, self.checker):
            raise IllFormed("termified contexts do not match")

    # Contexts and substitutions

    def con(self, ty: Ty) -> TCon:
        return TCon(self.checker.infer_ty_level(EMPTY, ty), ty)

    def t_empty(self) -> TCon:
        return TCon(0, Top())

    def t_id(self, con: TCon) -> TSub:
        return TSub(con, con, self._emit(Lam(Q()), sub_sort(con, con), "id"))

    def t_eps(self, con: TCon) -> TSub:
        empty = self.t_empty()
        return TSub(con, empty, self._emit(Lam(mk_k(con.level, Tt())), sub_sort(con, empty), "eps"))

    def t_comp(self, gamma: TSub, delta: TSub) -> TSub:
        """``γ ∘ δ`` for ``δ : Sub Θ Δ`` and ``γ : Sub Δ Γ``."""
        self._same_con(delta.cod, gamma.dom)
        theta, cod = delta.dom, gamma.cod
        x = un_k(tsub(cod.level, theta.level), Q())
        inner = apply_sub(delta, wk(delta.tm), x)
        body = mk_k(tsub(theta.level, cod.level), apply_sub(gamma, wk(gamma.tm), inner))
        return TSub(theta, cod, self._emit(Lam(body), sub_sort(theta, cod), "comp"))

    def const_sub(self, dom: TCon, cod: TCon, value: Tm) -> TSub:
        """The constant substitution sending everything to a closed ``value``."""
        body = mk_k(tsub(dom.level, cod.level), wk(value))
        return TSub(dom, cod, self._emit(Lam(body), sub_sort(dom, cod), "const sub"))

    # Types and terms

    def t_inst_ty(self, ty: TTy, sub: TSub) -> TTy:
        self._same_con(sub.cod, ty.con)
        dom, i = sub.dom, ty.level
        x = un_k(tsub(1 + i, dom.level), Q())
        body = mk_k(tsub(dom.level, 1 + i), apply_ty(ty, wk(ty.tm), apply_sub(sub, wk(sub.tm), x)))
        return TTy(dom, i, self._emit(Lam(body), ty_sort(dom, i), "ty inst"))

    def t_inst_tm(self, tm: TTm, sub: TSub) -> TTm:
        ty = self.t_inst_ty(tm.ty, sub)
        dom, i = sub.dom, tm.ty.level
        x = un_k(tsub(i, dom.level), Q())
        body = mk_k(tsub(dom.level, i), apply_tm(tm, wk(tm.tm), apply_sub(sub, wk(sub.tm), x)))
        return TTm(dom, ty, self._emit(Lam(body), tm_sort(ty), "tm inst"))

    def const_ty(self, con: TCon, ty: Ty) -> TTy:
        """A closed type seen as a type in any context."""
        i = self.checker.infer_ty_level(EMPTY, ty)
        body = mk_k(tsub(con.level, 1 + i), Code(ty))
        return TTy(con, i, self._emit(Lam(body), ty_sort(con, i), "const ty"))

    def const_tm(self, ty: TTy, value: Tm) -> TTm:
        body = mk_k(tsub(ty.con.level, ty.level), wk(value))
        return TTm(ty.con, ty, self._emit(Lam(body), tm_sort(ty), "const tm"))

    # Context extension

    def t_ext(self, con: TCon, ty: TTy) -> TCon:
        self._same_con(ty.con, con)
        level = max(con.level, ty.level)
        x = un_k(tsub(level, con.level), Q())
        second = lift_k(tsub(level, ty.level), El(apply_ty(ty, wk(ty.tm), x)))
        return TCon(level, Sigma(lift_k(tsub(level, con.level), con.ty), second))

    def t_p(self, con: TCon, ty: TTy) -> TSub:
        ext = self.t_ext(con, ty)
        return TSub(ext, con, self._emit(Lam(Fst(Q())), sub_sort(ext, con), "p"))

    def t_q(self, con: TCon, ty: TTy) -> TTm:
        ext = self.t_ext(con, ty)
        weakened = self.t_inst_ty(ty, self.t_p(con, ty))
        return TTm(ext, weakened, self._emit(Lam(Snd(Q())), tm_sort(weakened), "q"))

    def _pairing(self, con: TCon, ty: TTy, first: Tm, second: Tm) -> Tm:
        """An element of ``con ▷ ty`` from unlifted components."""
        level = max(con.level, ty.level)
        return Pair(mk_k(tsub(level, con.level), first), mk_k(tsub(level, ty.level), second))

    def t_pair(self, sub: TSub, tm: TTm, ty: TTy) -> TSub:
        """``(γ, a)`` into ``Γ ▷ A`` for ``a : Tm Δ (A[γ])``."""
        dom = sub.dom
        ext = self.t_ext(sub.cod, ty)
        x = un_k(tsub(ext.level, dom.level), Q())
        pair = self._pairing(sub.cod, ty, apply_sub(sub, wk(sub.tm), x), apply_tm(tm, wk(tm.tm), x))
        body = mk_k(tsub(dom.level, ext.level), pair)
        return TSub(dom, ext, self._emit(Lam(body), sub_sort(dom, ext), "pair"))

    def t_lift_sub(self, sub: TSub, ty: TTy) -> TSub:
        """``γ⁺ := (γ ∘ p, q)``."""
        inst = self.t_inst_ty(ty, sub)
        return self.t_pair(self.t_comp(sub, self.t_p(sub.dom, inst)), self.t_q(sub.dom, inst), ty)

    # Type formers

    def _former(self, con: TCon, level: int, build: Callable[[Tm], Ty], what: str) -> TTy:
        x = un_k(tsub(1 + level, con.level), Q())
        body = mk_k(tsub(con.level, 1 + level), Code(build(x)))
        return TTy(con, level, self._emit(Lam(body), ty_sort(con, level), what))

    def _binder(self, dom: TTy, cod: TTy, former) -> TTy:
        con, i = dom.con, dom.level
        if cod.level != i:
            raise IllFormed(f"binder components at levels {i} and {cod.level}")

        def build(x: Tm) -> Ty:
            first = El(apply_ty(dom, wk(dom.tm), x))
            pair = self._pairing(con, dom, wk(x), Q())
            return former(first, El(apply_ty(cod, weaken_tm(cod.tm, 2), pair)))

        return self._former(con, i, build, former.__name__)

    def t_Pi(self, dom: TTy, cod: TTy) -> TTy:
        return self._binder(dom, cod, Pi)

    def t_Sigma(self, dom: TTy, cod: TTy) -> TTy:
        return self._binder(dom, cod, Sigma)

    def t_U(self, con: TCon, level: int) -> TTy:
        return self._former(con, level + 1, lambda x: U(level), "U")

    def t_El(self, code: TTm) -> TTy:
        con, j = code.con, code.ty.level - 1
        x = un_k(tsub(1 + j, con.level), Q())
        body = mk_k(tsub(con.level, 1 + j), apply_tm(code, wk(code.tm), x))
        return TTy(con, j, self._emit(Lam(body), ty_sort(con, j), "El"))

    def t_Lift(self, ty: TTy) -> TTy:
        return self._former(ty.con, ty.level + 1, lambda x: Lift(El(apply_ty(ty, wk(ty.tm), x))), "Lift")

    def t_Top(self, con: TCon) -> TTy:
        return self._former(con, 0, lambda x: Top(), "Top")

    # Term formers

    def _term(self, ty: TTy, build: Callable[[Tm], Tm], what: str) -> TTm:
        con, i = ty.con, ty.level
        x = un_k(tsub(i, con.level), Q())
        body = mk_k(tsub(con.level, i), build(x))
        return TTm(con, ty, self._emit(Lam(body), tm_sort(ty), what))

    def t_lam(self, dom: TTy, body: TTm) -> TTm:
        con = dom.con
        pi = self.t_Pi(dom, body.ty)

        def build(x: Tm) -> Tm:
            pair = self._pairing(con, dom, wk(x), Q())
            return Lam(apply_tm(body, weaken_tm(body.tm, 2), pair))

        return self._term(pi, build, "lam")

    def t_app(self, dom: TTy, cod: TTy, fn: TTm) -> TTm:
        """The inverse of ``t_lam``: ``Tm Γ (Π A B) → Tm (Γ ▷ A) B``."""
        con = dom.con
        ext = self.t_ext(con, dom)
        level = dom.level

        def build(x: Tm) -> Tm:
            first = un_k(tsub(ext.level, con.level), Fst(x))
            second = un_k(tsub(ext.level, level), Snd(x))
            return App(apply_tm(fn, wk(fn.tm), first), second)

        return self._term(cod, build, "app")

    def t_code(self, ty: TTy) -> TTm:
        return self._term(self.t_U(ty.con, ty.level), lambda x: apply_ty(ty, wk(ty.tm), x), "c")

    def t_mk(self, tm: TTm) -> TTm:
        return self._term(self.t_Lift(tm.ty), lambda x: Mk(apply_tm(tm, wk(tm.tm), x)), "mk")

    def t_un(self, ty: TTy, tm: TTm) -> TTm:
        return self._term(ty, lambda x: Un(apply_tm(tm, wk(tm.tm), x)), "un")

    def t_tt(self, con: TCon) -> TTm:
        return self._term(self.t_Top(con), lambda x: Tt(), "tt")

    def t_pair_tm(self, dom: TTy, cod: TTy, first: TTm, second: TTm) -> TTm:
        sigma = self.t_Sigma(dom, cod)
        return self._term(
            sigma,
            lambda x: Pair(apply_tm(first, wk(first.tm), x), apply_tm(second, wk(second.tm), x)),
            "pair",
        )

    def t_fst(self, dom: TTy, cod: TTy, tm: TTm) -> TTm:
        return self._term(dom, lambda x: Fst(apply_tm(tm, wk(tm.tm), x)), "fst")

    def t_snd(self, dom: TTy, cod: TTy, tm: TTm) -> TTm:
        first = self.t_fst(dom, cod, tm)
        ty = self.t_inst_ty(cod, self.t_pair(self.t_id(dom.con), first, dom))
        return self._term(ty, lambda x: Snd(apply_tm(tm, wk(tm.tm), x)), "snd")

    def generic_code(self, con: TCon) -> TTm:
        """The context variable itself, when the context is a universe."""
        if not isinstance(con.ty, U):
            raise IllFormed("generic code needs a universe context")
        return self._term(self.t_U(con, con.ty.level), lambda x: x, "generic code")

    # Equality of entities

    def same_sub(self, left: TSub, right: TSub) -> bool:
        return conv_tm(EMPTY, left.tm, right.tm, sub_sort(left.dom, left.cod), self.checker)

    def same_ty(self, left: TTy, right: TTy) -> bool:
        return left.level == right.level and conv_tm(EMPTY, left.tm, right.tm, ty_sort(left.con, left.level), self.checker)

    def same_tm(self, left: TTm, right: TTm) -> bool:
        return conv_tm(EMPTY, left.tm, right.tm, tm_sort(left.ty), self.checker)


# Undecorated displays


def plain_id() -> Tm:
    return Lam(Q())


def plain_eps() -> Tm:
    return Lam(Tt())


def plain_comp(gamma: Tm, delta: Tm) -> Tm:
    return Lam(App(wk(gamma), App(wk(delta), Q())))


def plain_inst(subject: Tm, sub: Tm) -> Tm:
    return Lam(App(wk(subject), App(wk(sub), Q())))


def plain_ext(con: Ty, ty: Tm) -> Ty:
    return Sigma(con, El(App(wk(ty), Q())))


def plain_pair(sub: Tm, tm: Tm) -> Tm:
    return Lam(Pair(App(wk(sub), Q()), App(wk(tm), Q())))


def plain_p() -> Tm:
    return Lam(Fst(Q()))


def plain_q() -> Tm:
    return Lam(Snd(Q()))


def plain_Pi(dom: Tm, cod: Tm) -> Tm:
    return Lam(Code(Pi(El(App(wk(dom), Q())), El(App(weaken_tm(cod, 2), Pair(wk(Q()), Q()))))))


def plain_lam(body: Tm) -> Tm:
    return Lam(Lam(App(weaken_tm(body, 2), Pair(wk(Q()), Q()))))


def plain_sub_sort(dom: Ty, cod: Ty) -> Ty:
    return arrow(dom, cod)


def plain_ty_sort(con: Ty, level: int) -> Ty:
    return arrow(con, U(level))


def plain_tm_sort(con: Ty, ty: Tm) -> Ty:
    return Pi(con, El(App(wk(ty), Q())))


# Law checking


@dataclasses.dataclass(frozen=True)
class TermifyInstance:
    """Entities a law is instantiated with.

    ``sub_g : Sub con_d con``, ``sub_d : Sub con_t con_d`` and
    ``sub_t : Sub con_x con_t``; ``ty_b`` and ``tm_b`` live over
    ``con ▷ ty_a``; ``code`` is a term of a universe over ``con``.
    """

    con: TCon
    con_d: TCon
    con_t: TCon
    con_x: TCon
    sub_g: TSub
    sub_d: TSub
    sub_t: TSub
    ty_a: TTy
    ty_b: TTy
    tm_a: TTm
    tm_b: TTm
    code: TTm


def _pair_parts(m: TermifiedModel, i: TermifyInstance) -> Tuple[TTm, TTm]:
    second = m.t_inst_tm(i.tm_b, m.t_pair(m.t_id(i.con), i.tm_a, i.ty_a))
    return m.t_pair_tm(i.ty_a, i.ty_b, i.tm_a, second), second


def _ext_pair(m: TermifiedModel, i: TermifyInstance) -> TSub:
    return m.t_pair(i.sub_g, m.t_inst_tm(i.tm_a, i.sub_g), i.ty_a)


def _up(m: TermifiedModel, i: TermifyInstance) -> TSub:
    return m.t_lift_sub(i.sub_g, i.ty_a)


def _lam(m: TermifiedModel, i: TermifyInstance) -> TTm:
    return m.t_lam(i.ty_a, i.tm_b)


Sides = Callable[[TermifiedModel, TermifyInstance], Tuple[Any, Any]]

LAW_SIDES: Dict[str, Sides] = {
    "comp-assoc": lambda m, i: (
        m.t_comp(m.t_comp(i.sub_g, i.sub_d), i.sub_t),
        m.t_comp(i.sub_g, m.t_comp(i.sub_d, i.sub_t)),
    ),
    "comp-idl": lambda m, i: (m.t_comp(m.t_id(i.con), i.sub_g), i.sub_g),
    "comp-idr": lambda m, i: (m.t_comp(i.sub_g, m.t_id(i.con_d)), i.sub_g),
    "eps-eta": lambda m, i: (m.t_comp(m.t_eps(i.con), i.sub_g), m.t_eps(i.con_d)),
    "ty-id": lambda m, i: (m.t_inst_ty(i.ty_a, m.t_id(i.con)), i.ty_a),
    "ty-comp": lambda m, i: (
        m.t_inst_ty(i.ty_a, m.t_comp(i.sub_g, i.sub_d)),
        m.t_inst_ty(m.t_inst_ty(i.ty_a, i.sub_g), i.sub_d),
    ),
    "tm-id": lambda m, i: (m.t_inst_tm(i.tm_a, m.t_id(i.con)), i.tm_a),
    "tm-comp": lambda m, i: (
        m.t_inst_tm(i.tm_a, m.t_comp(i.sub_g, i.sub_d)),
        m.t_inst_tm(m.t_inst_tm(i.tm_a, i.sub_g), i.sub_d),
    ),
    "ext-beta1": lambda m, i: (m.t_comp(m.t_p(i.con, i.ty_a), _ext_pair(m, i)), i.sub_g),
    "ext-beta2": lambda m, i: (
        m.t_inst_tm(m.t_q(i.con, i.ty_a), _ext_pair(m, i)),
        m.t_inst_tm(i.tm_a, i.sub_g),
    ),
    "ext-eta": lambda m, i: (
        m.t_pair(m.t_p(i.con, i.ty_a), m.t_q(i.con, i.ty_a), i.ty_a),
        m.t_id(m.t_ext(i.con, i.ty_a)),
    ),
    "Pi[]": lambda m, i: (
        m.t_inst_ty(m.t_Pi(i.ty_a, i.ty_b), i.sub_g),
        m.t_Pi(m.t_inst_ty(i.ty_a, i.sub_g), m.t_inst_ty(i.ty_b, _up(m, i))),
    ),
    "lam[]": lambda m, i: (
        m.t_inst_tm(_lam(m, i), i.sub_g),
        m.t_lam(m.t_inst_ty(i.ty_a, i.sub_g), m.t_inst_tm(i.tm_b, _up(m, i))),
    ),
    "app[]": lambda m, i: (
        m.t_inst_tm(m.t_app(i.ty_a, i.ty_b, _lam(m, i)), _up(m, i)),
        m.t_app(
            m.t_inst_ty(i.ty_a, i.sub_g),
            m.t_inst_ty(i.ty_b, _up(m, i)),
            m.t_inst_tm(_lam(m, i), i.sub_g),
        ),
    ),
    "U[]": lambda m, i: (m.t_inst_ty(m.t_U(i.con, i.ty_a.level), i.sub_g), m.t_U(i.con_d, i.ty_a.level)),
    "El[]": lambda m, i: (m.t_inst_ty(m.t_El(i.code), i.sub_g), m.t_El(m.t_inst_tm(i.code, i.sub_g))),
    "c[]": lambda m, i: (m.t_inst_tm(m.t_code(i.ty_a), i.sub_g), m.t_code(m.t_inst_ty(i.ty_a, i.sub_g))),
    "Lift[]": lambda m, i: (m.t_inst_ty(m.t_Lift(i.ty_a), i.sub_g), m.t_Lift(m.t_inst_ty(i.ty_a, i.sub_g))),
    "mk[]": lambda m, i: (m.t_inst_tm(m.t_mk(i.tm_a), i.sub_g), m.t_mk(m.t_inst_tm(i.tm_a, i.sub_g))),
    "un[]": lambda m, i: (
        m.t_inst_tm(m.t_un(i.ty_a, m.t_mk(i.tm_a)), i.sub_g),
        m.t_un(m.t_inst_ty(i.ty_a, i.sub_g), m.t_inst_tm(m.t_mk(i.tm_a), i.sub_g)),
    ),
    "Top[]": lambda m, i: (m.t_inst_ty(m.t_Top(i.con), i.sub_g), m.t_Top(i.con_d)),
    "tt[]": lambda m, i: (m.t_inst_tm(m.t_tt(i.con), i.sub_g), m.t_tt(i.con_d)),
    "Sigma[]": lambda m, i: (
        m.t_inst_ty(m.t_Sigma(i.ty_a, i.ty_b), i.sub_g),
        m.t_Sigma(m.t_inst_ty(i.ty_a, i.sub_g), m.t_inst_ty(i.ty_b, _up(m, i))),
    ),
    "pair[]": lambda m, i: (
        m.t_inst_tm(_pair_parts(m, i)[0], i.sub_g),
        m.t_pair_tm(
            m.t_inst_ty(i.ty_a, i.sub_g),
            m.t_inst_ty(i.ty_b, _up(m, i)),
            m.t_inst_tm(i.tm_a, i.sub_g),
            m.t_inst_tm(_pair_parts(m, i)[1], i.sub_g),
        ),
    ),
    "Pi-beta": lambda m, i: (m.t_app(i.ty_a, i.ty_b, _lam(m, i)), i.tm_b),
    "Pi-eta": lambda m, i: (m.t_lam(i.ty_a, m.t_app(i.ty_a, i.ty_b, _lam(m, i))), _lam(m, i)),
    "U-beta": lambda m, i: (m.t_El(m.t_code(i.ty_a)), i.ty_a),
    "U-eta": lambda m, i: (m.t_code(m.t_El(i.code)), i.code),
    "Lift-beta": lambda m, i: (m.t_un(i.ty_a, m.t_mk(i.tm_a)), i.tm_a),
    "Lift-eta": lambda m, i: (m.t_mk(m.t_un(i.ty_a, m.t_mk(i.tm_a))), m.t_mk(i.tm_a)),
    "Top-eta": lambda m, i: (m.const_tm(m.t_Top(i.con), Tt()), m.t_tt(i.con)),
    "Sigma-beta1": lambda m, i: (m.t_fst(i.ty_a, i.ty_b, _pair_parts(m, i)[0]), i.tm_a),
    "Sigma-beta2": lambda m, i: (m.t_snd(i.ty_a, i.ty_b, _pair_parts(m, i)[0]), _pair_parts(m, i)[1]),
    "Sigma-eta": lambda m, i: (
        m.t_pair_tm(
            i.ty_a,
            i.ty_b,
            m.t_fst(i.ty_a, i.ty_b, _pair_parts(m, i)[0]),
            m.t_snd(i.ty_a, i.ty_b, _pair_parts(m, i)[0]),
        ),
        _pair_parts(m, i)[0],
    ),
}


def _same_endpoints(m: TermifiedModel, left: Any, right: Any) -> bool:
    """Both sides of a law must have the same sort before they can be equal."""
    match left:
        case TSub():
            m._same_con(left.dom, right.dom)
            m._same_con(left.cod, right.cod)
            return m.same_sub(left, right)
        case TTy():
            m._same_con(left.con, right.con)
            return m.same_ty(left, right)
        case TTm():
            m._same_con(left.con, right.con)
            if not m.same_ty(left.ty, right.ty):
                raise IllFormed("the two sides have different types")
            return m.same_tm(left, right)
    raise TypeError(f"not a termified entity: {left!r}")


def check_cwf_law(model: TermifiedModel, law: str, inst: TermifyInstance) -> Verdict:
    """Build both sides of ``law`` from ``inst`` and compare them."""
    if law not in LAW_SIDES:
        raise ValueError(f"Unknown CwF law: {law}")
    try:
        left, right = LAW_SIDES[law](model, inst)
        if _same_endpoints(model, left, right):
            return Verdict(True)
    except IllFormed as err:
        _LOGGER.debug("Law %s failed to build: %s", law, err)
        return Verdict(False, f"{law}: {err}")
    return Verdict(False, f"{law}: the two sides differ")


def erasure_matches(model: TermifiedModel, inst: TermifyInstance) -> Verdict:
    """Erasing the level decorations gives the undecorated definitions."""
    g, d, a_ty, b_tm = inst.sub_g, inst.sub_d, inst.ty_a, inst.tm_b
    a_g = model.t_inst_tm(inst.tm_a, g)
    cases = {
        "id": (model.t_id(inst.con).tm, plain_id()),
        "eps": (model.t_eps(inst.con).tm, plain_eps()),
        "comp": (model.t_comp(g, d).tm, plain_comp(erase(g.tm), erase(d.tm))),
        "inst": (model.t_inst_ty(a_ty, g).tm, plain_inst(erase(a_ty.tm), erase(g.tm))),
        "ext": (model.t_ext(inst.con, a_ty).ty, plain_ext(erase(inst.con.ty), erase(a_ty.tm))),
        "pair": (model.t_pair(g, a_g, a_ty).tm, plain_pair(erase(g.tm), erase(a_g.tm))),
        "p": (model.t_p(inst.con, a_ty).tm, plain_p()),
        "q": (model.t_q(inst.con, a_ty).tm, plain_q()),
        "Pi": (model.t_Pi(a_ty, inst.ty_b).tm, plain_Pi(erase(a_ty.tm), erase(inst.ty_b.tm))),
        "lam": (model.t_lam(a_ty, b_tm).tm, plain_lam(erase(b_tm.tm))),
        "sub sort": (sub_sort(inst.con_d, inst.con), plain_sub_sort(erase(inst.con_d.ty), erase(inst.con.ty))),
        "ty sort": (ty_sort(inst.con, a_ty.level), plain_ty_sort(erase(inst.con.ty), a_ty.level)),
        "tm sort": (tm_sort(a_ty), plain_tm_sort(erase(inst.con.ty), erase(a_ty.tm))),
    }
    for name, (decorated, plain) in cases.items():
        if show(erase(decorated)) != show(plain):
            return Verdict(False, f"{name}: {show(erase(decorated))} is not {show(plain)}")
    return Verdict(True)


def _closed(gen: "TermGenerator", level: int) -> Tuple[Ty, Tm]:
    for attempt in range(GEN_RETRIES):
        try:
            ty = gen.gen_ty(EMPTY, level)
            return ty, gen.gen_tm(EMPTY, ty)
        except Exhausted as err:
            _LOGGER.debug("Resampling closed pair (attempt %s): %s", attempt + 1, err)
    raise Exhausted(f"no closed inhabited type at level {level}")


def _const_instance(gen: "TermGenerator", model: TermifiedModel) -> TermifyInstance:
    cons, values = [], []
    for _ in range(4):
        ty, value = _closed(gen, gen.level())
        cons.append(model.con(ty))
        values.append(value)
    con, con_d, con_t, con_x = cons
    level = gen.level()
    a_ty, a_val = _closed(gen, level)
    b_ty, b_val = _closed(gen, level)
    ty_a = model.const_ty(con, a_ty)
    ty_b = model.const_ty(model.t_ext(con, ty_a), b_ty)
    return TermifyInstance(
        con=con,
        con_d=con_d,
        con_t=con_t,
        con_x=con_x,
        sub_g=model.const_sub(con_d, con, values[0]),
        sub_d=model.const_sub(con_t, con_d, values[1]),
        sub_t=model.const_sub(con_x, con_t, values[2]),
        ty_a=ty_a,
        ty_b=ty_b,
        tm_a=model.const_tm(ty_a, a_val),
        tm_b=model.const_tm(ty_b, b_val),
        code=model.const_tm(model.t_U(con, level), Code(a_ty)),
    )


def _variable_instance(model: TermifiedModel, base: TCon, ty: TTy, code: TTm) -> TermifyInstance:
    """Types and terms built from the last variable of ``base ▷ ty``.

    The substitutions are weakenings and identities, so every law sees
    their action on the context variable.
    """
    con = model.t_ext(base, ty)
    ty_a = model.t_inst_ty(ty, model.t_p(base, ty))
    con_d = model.t_ext(con, ty_a)
    sub_g = model.t_p(con, ty_a)
    ty_d = model.t_inst_ty(ty_a, sub_g)
    con_t = model.t_ext(con_d, ty_d)
    return TermifyInstance(
        con=con,
        con_d=con_d,
        con_t=con_t,
        con_x=con_t,
        sub_g=sub_g,
        sub_d=model.t_p(con_d, ty_d),
        sub_t=model.t_comp(model.t_id(con_t), model.t_id(con_t)),
        ty_a=ty_a,
        ty_b=ty_d,
        tm_a=model.t_q(base, ty),
        tm_b=model.t_q(con, ty_a),
        code=code,
    )


def _weakening_instance(gen: "TermGenerator", model: TermifiedModel) -> TermifyInstance:
    base = model.con(gen.gen_ty(EMPTY))
    ty = model.const_ty(base, gen.gen_ty(EMPTY))
    return _variable_instance(model, base, ty, model.t_code(model.t_inst_ty(ty, model.t_p(base, ty))))


def _dependent_instance(gen: "TermGenerator", model: TermifiedModel) -> TermifyInstance:
    base = model.con(U(gen.level()))
    generic = model.generic_code(base)
    ty = model.t_El(generic)
    return _variable_instance(model, base, ty, model.t_inst_tm(generic, model.t_p(base, ty)))


_INSTANCE_BUILDERS = {
    TERMIFY_CONST: _const_instance,
    TERMIFY_WEAKENING: _weakening_instance,
    TERMIFY_DEPENDENT: _dependent_instance,
}


def sample_termify_instance(
    gen: "TermGenerator", model: TermifiedModel, mode: Optional[str] = None
) -> TermifyInstance:
    """Draw the entities a law is checked on.

    ``const`` uses constant substitutions, types and terms. ``weakening``
    uses projections out of a closed context. ``dependent`` uses the
    context variable of a universe context as a code, so every type
    depends on it.
    """
    mode = mode or gen.rng.choice(TERMIFY_MODES)
    if mode not in _INSTANCE_BUILDERS:
        raise ValueError(f"Unknown instance mode: {mode}")
    return _INSTANCE_BUILDERS[mode](gen, model)


def verify_cwf_laws(gen: "TermGenerator", model: TermifiedModel, count: int) -> Dict[str, Verdict]:
    """Check every law (and the erasure display) on ``count`` sampled instances, cycling the modes."""
    results: Dict[str, Verdict] = {}
    for k in range(count):
        inst = sample_termify_instance(gen, model, TERMIFY_MODES[k % len(TERMIFY_MODES)])
        for law in CWF_LAWS + ["erasure"]:
            if law in results and not results[law]:
                continue
            if law == "erasure":
                results[law] = erasure_matches(model, inst)
            else:
                results[law] = check_cwf_law(model, law, inst)
    return results


# Emitting single definitions

EMITTERS: Dict[str, Callable[[TermifiedModel, TermifyInstance], Any]] = {
    "id": lambda m, i: m.t_id(i.con),
    "eps": lambda m, i: m.t_eps(i.con),
    "comp": lambda m, i: m.t_comp(i.sub_g, i.sub_d),
    "inst-ty": lambda m, i: m.t_inst_ty(i.ty_a, i.sub_g),
    "inst-tm": lambda m, i: m.t_inst_tm(i.tm_a, i.sub_g),
    "ext": lambda m, i: m.t_ext(i.con, i.ty_a),
    "p": lambda m, i: m.t_p(i.con, i.ty_a),
    "q": lambda m, i: m.t_q(i.con, i.ty_a),
    "pair": _ext_pair,
    "lift-sub": _up,
    "Pi": lambda m, i: m.t_Pi(i.ty_a, i.ty_b),
    "Sigma": lambda m, i: m.t_Sigma(i.ty_a, i.ty_b),
    "U": lambda m, i: m.t_U(i.con, i.ty_a.level),
    "El": lambda m, i: m.t_El(i.code),
    "c": lambda m, i: m.t_code(i.ty_a),
    "Lift": lambda m, i: m.t_Lift(i.ty_a),
    "Top": lambda m, i: m.t_Top(i.con),
    "lam": _lam,
    "app": lambda m, i: m.t_app(i.ty_a, i.ty_b, _lam(m, i)),
    "mk": lambda m, i: m.t_mk(i.tm_a),
    "un": lambda m, i: m.t_un(i.ty_a, m.t_mk(i.tm_a)),
    "tt": lambda m, i: m.t_tt(i.con),
    "pair-tm": lambda m, i: _pair_parts(m, i)[0],
    "fst": lambda m, i: m.t_fst(i.ty_a, i.ty_b, _pair_parts(m, i)[0]),
    "snd": lambda m, i: m.t_snd(i.ty_a, i.ty_b, _pair_parts(m, i)[0]),
}


def emit(model: TermifiedModel, op: str, inst: TermifyInstance) -> Tuple[Ty, Tm]:
    """The closed term ``op`` defines at ``inst``, with the sort it inhabits.

    Contexts are returned as the closed type of their elements and the
    universe level they live in.
    """
    if op not in EMITTERS:
        raise ValueError(f"Unknown termified operation: {op}")
    entity = EMITTERS[op](model, inst)
    match entity:
        case TCon(level, ty):
            return U(level), Code(ty)
        case TSub(dom, cod, tm):
            return sub_sort(dom, cod), tm
        case TTy(con, level, tm):
            return ty_sort(con, level), tm
        case TTm(_, ty, tm):
            return tm_sort(ty), tm
    raise TypeError(f"not a termified entity: {entity!r}")
