"""Bidirectional typechecker for the single substitution calculus.

Lambdas, pairs, lifts and ``tt`` are checked against a known type. Every other
term infers its type. Inferred types of eliminators are returned as normal
forms, while ``q`` and instantiated terms return their literal types
(``q : A[p]``, ``t[γ] : A[γ]``).
"""

from __future__ import annotations

import dataclasses
import logging
from contextlib import contextmanager
from typing import Dict, List, Optional

from .errors import IllFormed, NotInferable, TypeMismatch, Verdict
from .eval import VLift, VPi, VSigma, VTop, VU, conv_ty, eval_tm, nf_ty, pullback_ty, quote_ty, whnf_ty
from .sexpr import show
from .syntax import (
    App,
    Code,
    EMPTY,
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
    Tm,
    TmSub,
    Top,
    Tt,
    Ty,
    TySub,
    U,
    Un,
    weaken_ty,
)

_LOGGER = logging.getLogger(__name__)

JUDGMENT_KINDS = ["WfCtx", "WfTy", "HasType", "WfSub"]


@contextmanager
def _at(segment: str):
    try:
        yield
    except IllFormed as err:
        raise err.at(segment)


@dataclasses.dataclass(frozen=True)
class Judgment:
    """A judgment form with the indices its sort carries."""

    kind: str
    ctx: Ctx
    subject: object = None
    index: object = None

    def __post_init__(self):
        if self.kind not in JUDGMENT_KINDS:
            raise ValueError(f"Unknown judgment kind: {self.kind}")


class Checker:
    """Typechecker for the single substitution calculus."""

    name = "ssc"

    def __init__(self, signature: Optional[Dict[Tm, List[Ty]]] = None):
        self.signature: Dict[Tm, List[Ty]] = {tm: list(tys) for tm, tys in (signature or {}).items()}

    def define(self, tm: Tm, ty: Ty) -> None:
        """Check a closed term and make it inferable at ``ty``."""
        self.infer_ty_level(EMPTY, ty)
        self.check(EMPTY, tm, ty)
        known = self.signature.setdefault(tm, [])
        if ty not in known:
            known.append(ty)

    # Substitutions

    def wf_sub(self, dom: Ctx, sub: Sub) -> Ctx:
        """Return the codomain of ``sub`` given its domain."""
        match sub:
            case P():
                if not len(dom):
                    raise IllFormed("p on the empty context")
                return dom.drop()
            case Single(tm):
                with _at("single"):
                    return dom.extend(self.synth(dom, tm))
            case Plus(inner):
                if not len(dom):
                    raise IllFormed("lifting on the empty context")
                base = dom.drop()
                with _at("plus"):
                    cod = self.wf_sub(base, inner)
                    return cod.extend(self.unlift_entry(base, inner, cod, dom.last))
        raise IllFormed(f"not a single substitution: {show(sub)}")

    def unlift_entry(self, dom: Ctx, sub: Sub, cod: Ctx, entry: Ty) -> Ty:
        """Find ``A`` over ``cod`` with ``A[sub] = entry``."""
        if isinstance(entry, TySub) and entry.sub == sub:
            try:
                self.infer_ty_level(cod, entry.ty)
                return entry.ty
            except IllFormed:
                _LOGGER.debug("Literal entry %s does not live in the codomain", show(entry.ty))
        return pullback_ty(dom, sub, cod, entry)

    # Types

    def infer_ty_level(self, ctx: Ctx, ty: Ty) -> int:
        """Return ``i`` such that ``ty : Ty ctx i``."""
        match ty:
            case U(level):
                if level < 0:
                    raise IllFormed(f"negative universe level {level}")
                return level + 1
            case El(code):
                with _at("El"):
                    code_ty = self.synth(ctx, code)
                    _, val = whnf_ty(ctx, code_ty)
                    if not isinstance(val, VU):
                        raise IllFormed(f"El expects a code, got a term of type {show(nf_ty(ctx, code_ty))}")
                    return val.level
            case Pi(dom, cod) | Sigma(dom, cod):
                former = type(ty).__name__
                with _at(former):
                    i = self.infer_ty_level(ctx, dom)
                    j = self.infer_ty_level(ctx.extend(dom), cod)
                if i != j:
                    raise IllFormed(f"{former} components live at levels {i} and {j}")
                return i
            case Top():
                return 0
            case Lift(inner):
                with _at("Lift"):
                    return self.infer_ty_level(ctx, inner) + 1
            case TySub(inner, sub):
                with _at("tysub"):
                    cod = self.wf_sub(ctx, sub)
                    return self.infer_ty_level(cod, inner)
        raise IllFormed(f"not a type: {ty!r}")

    # Terms

    def infer(self, ctx: Ctx, tm: Tm) -> Ty:
        """Infer the type of an inferable term."""
        match tm:
            case Q():
                if not len(ctx):
                    raise IllFormed("q in the empty context")
                return TySub(ctx.last, P())
            case TmSub(inner, sub):
                with _at("tmsub"):
                    cod = self.wf_sub(ctx, sub)
                    return TySub(self.infer(cod, inner), sub)
            case App(fn, arg):
                with _at("app"):
                    candidates = self._signature_types(ctx, fn)
                    if candidates:
                        return self._apply_candidates(ctx, candidates, arg)
                    scope, val = whnf_ty(ctx, self.infer(ctx, fn))
                    if not isinstance(val, VPi):
                        raise IllFormed(f"applying a term of type {show(quote_ty(scope, val))}")
                    self.check(ctx, arg, quote_ty(scope, val.dom))
                    return quote_ty(scope, val.cod.ty(eval_tm(scope.env, arg)))
            case Code(ty):
                with _at("code"):
                    return U(self.infer_ty_level(ctx, ty))
            case Un(inner):
                with _at("un"):
                    scope, val = whnf_ty(ctx, self.infer(ctx, inner))
                    if not isinstance(val, VLift):
                        raise IllFormed(f"un of a term of type {show(quote_ty(scope, val))}")
                    return quote_ty(scope, val.ty)
            case Fst(inner) | Snd(inner):
                with _at(type(tm).__name__.lower()):
                    scope, val = whnf_ty(ctx, self.infer(ctx, inner))
                    if not isinstance(val, VSigma):
                        raise IllFormed(f"projection from a term of type {show(quote_ty(scope, val))}")
                    if isinstance(tm, Fst):
                        return quote_ty(scope, val.fst)
                    first = eval_tm(scope.env, Fst(inner))
                    return quote_ty(scope, val.snd.ty(first))
            case Lam() | Pair() | Mk() | Tt():
                raise NotInferable(f"{type(tm).__name__.lower()} must be checked against a type")
        raise IllFormed(f"not a term: {tm!r}")

    def _signature_types(self, ctx: Ctx, fn: Tm) -> List[Ty]:
        head = fn
        while isinstance(head, TmSub) and isinstance(head.sub, P):
            head = head.tm
        if not isinstance(head, Lam) or head not in self.signature:
            return []
        return [weaken_ty(ty, len(ctx)) for ty in self.signature[head]]

    def _apply_candidates(self, ctx: Ctx, candidates: List[Ty], arg: Tm) -> Ty:
        """Apply a registered definition, trying each type it was registered at."""
        failure: Optional[IllFormed] = None
        for ty in candidates:
            scope, val = whnf_ty(ctx, ty)
            if not isinstance(val, VPi):
                continue
            try:
                self.check(ctx, arg, quote_ty(scope, val.dom))
            except IllFormed as err:
                failure = err
                continue
            return quote_ty(scope, val.cod.ty(eval_tm(scope.env, arg)))
        _LOGGER.debug("No registered type applies: %s", failure)
        raise NotInferable("no registered type of the head applies to the argument")

    def synth(self, ctx: Ctx, tm: Tm) -> Ty:
        """Inference extended to lifts, ``tt``, non-dependent pairs and applied lambdas.

        Used where a type must be produced without an expected one, such as
        the payload of a single substitution.
        """
        match tm:
            case Mk(inner):
                return Lift(self.synth(ctx, inner))
            case Tt():
                return Top()
            case Pair(a, b):
                return Sigma(self.synth(ctx, a), TySub(self.synth(ctx, b), P()))
        try:
            return self.infer(ctx, tm)
        except NotInferable:
            match tm:
                case App(fn, arg):
                    dom = self.synth(ctx, arg)
                    return TySub(self._synth_cod(ctx, fn, dom), Single(arg))
                case TmSub(inner, sub):
                    cod = self.wf_sub(ctx, sub)
                    return TySub(self.synth(cod, inner), sub)
                case Un(inner):
                    scope, val = whnf_ty(ctx, self.synth(ctx, inner))
                    if isinstance(val, VLift):
                        return quote_ty(scope, val.ty)
                case Fst(inner) | Snd(inner):
                    scope, val = whnf_ty(ctx, self.synth(ctx, inner))
                    if isinstance(val, VSigma):
                        if isinstance(tm, Fst):
                            return quote_ty(scope, val.fst)
                        return quote_ty(scope, val.snd.ty(eval_tm(scope.env, Fst(inner))))
            raise

    def _synth_cod(self, ctx: Ctx, fn: Tm, dom: Ty) -> Ty:
        """Codomain ``T`` over ``ctx▷dom`` such that ``fn : Π dom T``."""
        match fn:
            case Lam(body):
                return self.synth(ctx.extend(dom), body)
            case TmSub(inner, sub):
                cod = self.wf_sub(ctx, sub)
                inner_dom = self.unlift_entry(ctx, sub, cod, dom)
                return TySub(self._synth_cod(cod, inner, inner_dom), Plus(sub))
            case Un(Mk(inner)):
                return self._synth_cod(ctx, inner, dom)
        scope, val = whnf_ty(ctx, self.synth(ctx, fn))
        if not isinstance(val, VPi):
            raise IllFormed(f"applying a term of type {show(quote_ty(scope, val))}")
        self._compare(ctx, dom, quote_ty(scope, val.dom))
        return quote_ty(scope.bind(val.dom), val.cod.ty(scope.fresh()))

    def check(self, ctx: Ctx, tm: Tm, ty: Ty) -> None:
        """Check ``tm`` against ``ty``; raise on failure."""
        scope, val = whnf_ty(ctx, ty)
        match tm:
            case Lam(body):
                if not isinstance(val, VPi):
                    raise IllFormed(f"lam checked against {show(quote_ty(scope, val))}")
                dom = quote_ty(scope, val.dom)
                cod = quote_ty(scope.bind(val.dom), val.cod.ty(scope.fresh()))
                with _at("lam"):
                    self.check(ctx.extend(dom), body, cod)
                return
            case Pair(a, b):
                if not isinstance(val, VSigma):
                    raise IllFormed(f"pair checked against {show(quote_ty(scope, val))}")
                with _at("pair"):
                    self.check(ctx, a, quote_ty(scope, val.fst))
                    self.check(ctx, b, quote_ty(scope, val.snd.ty(eval_tm(scope.env, a))))
                return
            case Mk(inner):
                if not isinstance(val, VLift):
                    raise IllFormed(f"mk checked against {show(quote_ty(scope, val))}")
                with _at("mk"):
                    self.check(ctx, inner, quote_ty(scope, val.ty))
                return
            case Tt():
                if not isinstance(val, VTop):
                    raise IllFormed(f"tt checked against {show(quote_ty(scope, val))}")
                return
            case App(fn, arg):
                try:
                    got = self.infer(ctx, tm)
                except NotInferable:
                    with _at("app"):
                        try:
                            got = self.synth(ctx, tm)
                        except NotInferable:
                            self.check(ctx, fn, Pi(self.synth(ctx, arg), TySub(ty, P())))
                            return
                        self._compare(ctx, got, ty)
                    return
                self._compare(ctx, got, ty)
                return
            case TmSub(inner, sub):
                try:
                    got = self.infer(ctx, tm)
                except NotInferable:
                    with _at("tmsub"):
                        self._check_instantiated(ctx, inner, sub, ty)
                    return
                self._compare(ctx, got, ty)
                return
        self._compare(ctx, self.synth(ctx, tm), ty)

    def _check_instantiated(self, ctx: Ctx, inner: Tm, sub: Sub, ty: Ty) -> None:
        """Check ``inner[sub]`` against ``ty`` when ``inner`` does not infer."""
        cod = self.wf_sub(ctx, sub)
        try:
            self.check(cod, inner, self.unlift_entry(ctx, sub, cod, ty))
            return
        except IllFormed as err:
            failure = err
        try:
            got = TySub(self.synth(cod, inner), sub)
        except NotInferable:
            raise failure
        self._compare(ctx, got, ty)

    def _compare(self, ctx: Ctx, got: Ty, expected: Ty) -> None:
        got_nf = nf_ty(ctx, got)
        expected_nf = nf_ty(ctx, expected)
        if got_nf != expected_nf:
            raise TypeMismatch(expected_nf, got_nf)

    # Boolean-with-diagnostic entry points

    def check_tm(self, ctx: Ctx, tm: Tm, ty: Ty) -> Verdict:
        try:
            self.check(ctx, tm, ty)
        except IllFormed as err:
            _LOGGER.debug("check_tm failed: %s", err)
            return Verdict(False, str(err))
        return Verdict(True)

    def infer_tm(self, ctx: Ctx, tm: Tm) -> Ty:
        return self.infer(ctx, tm)

    def wf_ctx(self, ctx: Ctx) -> Verdict:
        for k, entry in enumerate(ctx.entries):
            try:
                self.infer_ty_level(ctx.prefix(k), entry)
            except IllFormed as err:
                return Verdict(False, f"entry {k}: {err}")
        return Verdict(True)

    def same_ctx(self, got: Ctx, expected: Ctx) -> Verdict:
        """Entrywise conversion, each entry compared in the prefix before it."""
        if len(got) != len(expected):
            return Verdict(False, f"codomain {show(got)} has {len(got)} entries, not {len(expected)}")
        for k, (left, right) in enumerate(zip(got.entries, expected.entries)):
            if not conv_ty(got.prefix(k), left, right, self):
                return Verdict(False, f"codomain entry {k}: {show(left)} is not {show(right)}")
        return Verdict(True)

    def judge(self, judgment: Judgment) -> Verdict:
        """Decide a judgment; ``index`` is the expected level, type or codomain."""
        try:
            match judgment.kind:
                case "WfCtx":
                    return self.wf_ctx(judgment.ctx)
                case "WfTy":
                    level = self.infer_ty_level(judgment.ctx, judgment.subject)
                    if judgment.index is not None and level != judgment.index:
                        return Verdict(False, f"type lives at level {level}, not {judgment.index}")
                case "HasType":
                    return self.check_tm(judgment.ctx, judgment.subject, judgment.index)
                case "WfSub":
                    cod = self.wf_sub(judgment.ctx, judgment.subject)
                    if judgment.index is not None:
                        return self.same_ctx(cod, judgment.index)
        except IllFormed as err:
            return Verdict(False, str(err))
        return Verdict(True)


DEFAULT_CHECKER = Checker()


def wf_ctx(ctx: Ctx) -> Verdict:
    return DEFAULT_CHECKER.wf_ctx(ctx)


def infer_ty_level(ctx: Ctx, ty: Ty) -> int:
    return DEFAULT_CHECKER.infer_ty_level(ctx, ty)


def infer_tm(ctx: Ctx, tm: Tm) -> Ty:
    return DEFAULT_CHECKER.infer(ctx, tm)


def check_tm(ctx: Ctx, tm: Tm, ty: Ty) -> Verdict:
    return DEFAULT_CHECKER.check_tm(ctx, tm, ty)


def wf_sub(dom: Ctx, sub: Sub) -> Ctx:
    return DEFAULT_CHECKER.wf_sub(dom, sub)


def level_of(ctx: Ctx, ty: Ty, checker: Optional[Checker] = None) -> int:
    return (checker or DEFAULT_CHECKER).infer_ty_level(ctx, ty)
