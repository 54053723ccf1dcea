"""Sampled instances of the substitution equations, former laws and β/η rules.

Each instance holds both sides literally, in the context where they live.
Term equations also carry the type at which the sides are compared. The
normaliser is the judge; nothing here rewrites.
"""

from __future__ import annotations

import dataclasses
import logging
from typing import TYPE_CHECKING, Callable, Dict, Iterable, List, Optional, Tuple

from .const import BETA_ETA_LAWS, FORMER_LAWS, GEN_RETRIES, SSC_EQUATIONS
from .core import Checker
from .errors import Exhausted, IllFormed
from .eval import conv_sub, conv_tm, conv_ty
from .sexpr import show
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
)
from .tel import gen_single_sub

if TYPE_CHECKING:
    from .gen import TermGenerator

_LOGGER = logging.getLogger(__name__)

ALL_EQUATIONS = list(SSC_EQUATIONS) + list(FORMER_LAWS) + list(BETA_ETA_LAWS)


@dataclasses.dataclass(frozen=True)
class EquationInstance:
    name: str
    ctx: Ctx
    left: Syntax
    right: Syntax
    ty: Optional[Ty] = None
    cod: Optional[Ctx] = None

    @property
    def is_term(self) -> bool:
        return self.ty is not None

    @property
    def is_sub(self) -> bool:
        return self.cod is not None

    def describe(self) -> str:
        return f"{show(self.left)} = {show(self.right)} in {show(self.ctx)}"


def check_equation(inst: EquationInstance, checker: Optional[Checker] = None) -> bool:
    """Decide an instance with the normaliser; raises IllFormed on ill-typed sides."""
    if inst.is_sub:
        return conv_sub(inst.ctx, inst.left, inst.right, inst.cod, checker)
    if inst.is_term:
        return conv_tm(inst.ctx, inst.left, inst.right, inst.ty, checker)
    return conv_ty(inst.ctx, inst.left, inst.right, checker)


class EquationSampler:
    """Draws well-typed instances of every named equation."""

    def __init__(self, gen: "TermGenerator"):
        self.gen = gen
        self.checker = gen.checker
        self._builders: Dict[str, Callable[[], EquationInstance]] = {
            "[p][+]ty": lambda: self._p_plus(term=False),
            "[p][+]tm": lambda: self._p_plus(term=True),
            "q[+]": self._q_plus,
            "[p][<>]ty": lambda: self._p_single(term=False),
            "[p][<>]tm": lambda: self._p_single(term=True),
            "q[<>]": self._q_single,
            "[<>][]": self._single_sub,
            "[p+][<q>]": self._p_plus_q,
            "Pi[]": lambda: self._binder_law(Pi),
            "lam[]": self._lam_law,
            "app[]": self._app_law,
            "U[]": self._u_law,
            "El[]": self._el_law,
            "c[]": self._code_law,
            "Lift[]": self._lift_law,
            "mk[]": self._mk_law,
            "un[]": self._un_law,
            "Top[]": self._top_law,
            "tt[]": self._tt_law,
            "Sigma[]": lambda: self._binder_law(Sigma),
            "pair[]": self._pair_law,
            "Pi-beta": self._pi_beta,
            "Pi-eta": self._pi_eta,
            "U-beta": self._u_beta,
            "U-eta": self._u_eta,
            "Lift-beta": self._lift_beta,
            "Lift-eta": self._lift_eta,
            "Top-eta": self._top_eta,
            "Sigma-beta1": lambda: self._sigma_beta(first=True),
            "Sigma-beta2": lambda: self._sigma_beta(first=False),
            "Sigma-eta": self._sigma_eta,
        }

    def sample(self, name: str) -> EquationInstance:
        if name not in self._builders:
            raise ValueError(f"Unknown equation: {name}")
        for attempt in range(GEN_RETRIES):
            try:
                inst = self._builders[name]()
                if inst.is_term:
                    self.checker.check(inst.ctx, inst.left, inst.ty)
                else:
                    self.checker.infer_ty_level(inst.ctx, inst.left)
                return dataclasses.replace(inst, name=name)
            except (IllFormed, Exhausted) as err:
                _LOGGER.debug("Resampling %s (attempt %s): %s", name, attempt + 1, err)
        raise Exhausted(f"no instance of {name} after {GEN_RETRIES} attempts")

    # Pieces

    def _ctx(self, max_len: int = 2) -> Ctx:
        return self.gen.gen_ctx(self.gen.rng.randint(0, max_len))

    def substitution(self) -> Tuple[Ctx, Sub, Ctx]:
        """``γ : Sub Δ Γ``, either a renaming or carrying an arbitrary payload."""
        delta = self.gen.gen_ctx(self.gen.rng.randint(1, 3))
        gamma = gen_single_sub(self.gen, delta)
        return delta, gamma, self.checker.wf_sub(delta, gamma)

    def sub_into(self, cod: Ctx) -> Tuple[Ctx, Sub]:
        """A weakening, lifting or instantiation into a given codomain."""
        roll = self.gen.rng.random()
        if len(cod) and roll < 0.25:
            arg = self.gen.gen_tm(cod.drop(), cod.last)
            try:
                self.checker.synth(cod.drop(), arg)
                return cod.drop(), Single(arg)
            except IllFormed:
                _LOGGER.debug("Payload %s does not synthesise, weakening instead", show(arg))
        if len(cod) and roll < 0.6:
            dom, inner = self.sub_into(cod.drop())
            return dom.extend(TySub(cod.last, inner)), Plus(inner)
        return cod.extend(self.gen.gen_ty(cod)), P()

    def payload(self, ctx: Ctx) -> Tuple[Tm, Ty]:
        tm = self.gen.gen_payload(ctx, self.gen.config.max_depth)
        return tm, self.checker.synth(ctx, tm)

    def _ending_with(self, build: Callable[[Ctx], Ty]) -> Ctx:
        base = self._ctx()
        return base.extend(build(base))

    def _family(self, ctx: Ctx) -> Tuple[Ty, Ty]:
        """``A`` over ``ctx`` and ``B`` over ``ctx ▷ A`` at one level."""
        level = self.gen.level()
        dom = self.gen.gen_ty(ctx, level)
        return dom, self.gen.gen_ty(ctx.extend(dom), level)

    def _inst(self, ctx: Ctx, left: Syntax, right: Syntax, ty: Optional[Ty] = None) -> EquationInstance:
        return EquationInstance("", ctx, left, right, ty)

    # The eight equations

    def _p_plus(self, term: bool) -> EquationInstance:
        delta, gamma, ctx = self.substitution()
        dom, ty = self.gen.gen_ty(ctx), self.gen.gen_ty(ctx)
        ext = delta.extend(TySub(dom, gamma))
        if not term:
            return self._inst(ext, TySub(TySub(ty, P()), Plus(gamma)), TySub(TySub(ty, gamma), P()))
        tm = self.gen.gen_tm(ctx, ty)
        return self._inst(
            ext, TmSub(TmSub(tm, P()), Plus(gamma)), TmSub(TmSub(tm, gamma), P()), TySub(TySub(ty, gamma), P())
        )

    def _q_plus(self) -> EquationInstance:
        delta, gamma, ctx = self.substitution()
        dom = self.gen.gen_ty(ctx)
        ext = delta.extend(TySub(dom, gamma))
        return self._inst(ext, TmSub(Q(), Plus(gamma)), Q(), TySub(TySub(dom, gamma), P()))

    def _p_single(self, term: bool) -> EquationInstance:
        ctx = self._ctx()
        arg, _ = self.payload(ctx)
        ty = self.gen.gen_ty(ctx)
        if not term:
            return self._inst(ctx, TySub(TySub(ty, P()), Single(arg)), ty)
        tm = self.gen.gen_tm(ctx, ty)
        return self._inst(ctx, TmSub(TmSub(tm, P()), Single(arg)), tm, ty)

    def _q_single(self) -> EquationInstance:
        ctx = self._ctx()
        arg, arg_ty = self.payload(ctx)
        return self._inst(ctx, TmSub(Q(), Single(arg)), arg, arg_ty)

    def _single_sub(self) -> EquationInstance:
        delta, gamma, ctx = self.substitution()
        arg, arg_ty = self.payload(ctx)
        ty = self.gen.gen_ty(ctx.extend(arg_ty))
        left = TySub(TySub(ty, Single(arg)), gamma)
        right = TySub(TySub(ty, Plus(gamma)), Single(TmSub(arg, gamma)))
        return self._inst(delta, left, right)

    def _p_plus_q(self) -> EquationInstance:
        ctx = self._ending_with(self.gen.gen_ty)
        ty = self.gen.gen_ty(ctx)
        return self._inst(ctx, TySub(TySub(ty, Plus(P())), Single(Q())), ty)

    # Substitution laws of the formers

    def _binder_law(self, former) -> EquationInstance:
        delta, gamma, ctx = self.substitution()
        dom, cod = self._family(ctx)
        left = TySub(former(dom, cod), gamma)
        return self._inst(delta, left, former(TySub(dom, gamma), TySub(cod, Plus(gamma))))

    def _lam_law(self) -> EquationInstance:
        delta, gamma, ctx = self.substitution()
        dom, cod = self._family(ctx)
        body = self.gen.gen_tm(ctx.extend(dom), cod)
        return self._inst(delta, TmSub(Lam(body), gamma), Lam(TmSub(body, Plus(gamma))), TySub(Pi(dom, cod), gamma))

    def _app_law(self) -> EquationInstance:
        ctx = self._ending_with(lambda base: Pi(*self._family(base)))
        arg = self.gen.gen_tm(ctx, TySub(ctx.last.dom, P()))
        delta, gamma = self.sub_into(ctx)
        left = TmSub(App(Q(), arg), gamma)
        return self._inst(delta, left, App(TmSub(Q(), gamma), TmSub(arg, gamma)), self.checker.infer(delta, left))

    def _u_law(self) -> EquationInstance:
        delta, gamma, _ = self.substitution()
        level = self.gen.level()
        return self._inst(delta, TySub(U(level), gamma), U(level))

    def _el_law(self) -> EquationInstance:
        delta, gamma, ctx = self.substitution()
        code = self.gen.gen_tm(ctx, U(self.gen.level()))
        return self._inst(delta, TySub(El(code), gamma), El(TmSub(code, gamma)))

    def _code_law(self) -> EquationInstance:
        delta, gamma, ctx = self.substitution()
        level = self.gen.level()
        ty = self.gen.gen_ty(ctx, level)
        return self._inst(delta, TmSub(Code(ty), gamma), Code(TySub(ty, gamma)), U(level))

    def _lift_law(self) -> EquationInstance:
        delta, gamma, ctx = self.substitution()
        ty = self.gen.gen_ty(ctx)
        return self._inst(delta, TySub(Lift(ty), gamma), Lift(TySub(ty, gamma)))

    def _mk_law(self) -> EquationInstance:
        delta, gamma, ctx = self.substitution()
        ty = self.gen.gen_ty(ctx)
        tm = self.gen.gen_tm(ctx, ty)
        return self._inst(delta, TmSub(Mk(tm), gamma), Mk(TmSub(tm, gamma)), TySub(Lift(ty), gamma))

    def _un_law(self) -> EquationInstance:
        ctx = self._ending_with(lambda base: Lift(self.gen.gen_ty(base)))
        delta, gamma = self.sub_into(ctx)
        left = TmSub(Un(Q()), gamma)
        return self._inst(delta, left, Un(TmSub(Q(), gamma)), self.checker.infer(delta, left))

    def _top_law(self) -> EquationInstance:
        delta, gamma, _ = self.substitution()
        return self._inst(delta, TySub(Top(), gamma), Top())

    def _tt_law(self) -> EquationInstance:
        delta, gamma, _ = self.substitution()
        return self._inst(delta, TmSub(Tt(), gamma), Tt(), Top())

    def _pair_law(self) -> EquationInstance:
        delta, gamma, ctx = self.substitution()
        first, first_ty = self.payload(ctx)
        level = self.checker.infer_ty_level(ctx, first_ty)
        cod = self.gen.gen_ty(ctx.extend(first_ty), level)
        second = self.gen.gen_tm(ctx, TySub(cod, Single(first)))
        left = TmSub(Pair(first, second), gamma)
        right = Pair(TmSub(first, gamma), TmSub(second, gamma))
        return self._inst(delta, left, right, TySub(Sigma(first_ty, cod), gamma))

    # Computation and uniqueness

    def _pi_beta(self) -> EquationInstance:
        ctx = self._ctx()
        arg, arg_ty = self.payload(ctx)
        body, body_ty = self.payload(ctx.extend(arg_ty))
        return self._inst(ctx, App(Lam(body), arg), TmSub(body, Single(arg)), TySub(body_ty, Single(arg)))

    def _pi_eta(self) -> EquationInstance:
        ctx = self._ending_with(lambda base: Pi(*self._family(base)))
        return self._inst(ctx, Q(), Lam(App(TmSub(Q(), P()), Q())), TySub(ctx.last, P()))

    def _u_beta(self) -> EquationInstance:
        ctx = self._ctx()
        ty = self.gen.gen_ty(ctx)
        return self._inst(ctx, El(Code(ty)), ty)

    def _u_eta(self) -> EquationInstance:
        ctx = self._ctx()
        level = self.gen.level()
        code = self.gen.gen_tm(ctx, U(level))
        return self._inst(ctx, Code(El(code)), code, U(level))

    def _lift_beta(self) -> EquationInstance:
        ctx = self._ctx()
        tm, ty = self.payload(ctx)
        return self._inst(ctx, Un(Mk(tm)), tm, ty)

    def _lift_eta(self) -> EquationInstance:
        ctx = self._ending_with(lambda base: Lift(self.gen.gen_ty(base)))
        return self._inst(ctx, Mk(Un(Q())), Q(), TySub(ctx.last, P()))

    def _top_eta(self) -> EquationInstance:
        ctx = self._ctx()
        return self._inst(ctx, self.gen.gen_tm(ctx, Top()), Tt(), Top())

    def _sigma_beta(self, first: bool) -> EquationInstance:
        ctx = self._ctx()
        a, a_ty = self.payload(ctx)
        b, b_ty = self.payload(ctx)
        if first:
            return self._inst(ctx, Fst(Pair(a, b)), a, a_ty)
        return self._inst(ctx, Snd(Pair(a, b)), b, b_ty)

    def _sigma_eta(self) -> EquationInstance:
        ctx = self._ending_with(lambda base: Sigma(*self._family(base)))
        return self._inst(ctx, Q(), Pair(Fst(Q()), Snd(Q())), TySub(ctx.last, P()))


@dataclasses.dataclass
class EquationReport:
    """Pass/fail tally for one named equation."""

    name: str
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    counterexample: Optional[str] = None

    @property
    def ok(self) -> bool:
        """No failures, and at least one instance checked unless none were drawn."""
        return self.failed == 0 and not (self.passed == 0 and self.skipped > 0)

    def record(self, accepted: bool, describe: Callable[[], str]) -> None:
        if accepted:
            self.passed += 1
            return
        self.failed += 1
        if self.counterexample is None:
            self.counterexample = describe()


def verify_equations(
    gen: "TermGenerator",
    count: int,
    names: Optional[Iterable[str]] = None,
    decide: Optional[Callable[[EquationInstance], bool]] = None,
) -> List[EquationReport]:
    """Sample ``count`` instances of each equation and decide them in order."""
    sampler = EquationSampler(gen)
    decide = decide or (lambda inst: check_equation(inst, gen.checker))
    reports = []
    for name in names or ALL_EQUATIONS:
        report = EquationReport(name)
        for _ in range(count):
            try:
                inst = sampler.sample(name)
            except Exhausted as err:
                _LOGGER.warning("Skipping %s sample: %s", name, err)
                report.skipped += 1
                continue
            try:
                accepted = decide(inst)
            except IllFormed as err:
                _LOGGER.debug("Instance of %s rejected: %s", name, err)
                accepted = False
            report.record(accepted, inst.describe)
        _LOGGER.info("%s: %s passed, %s failed", name, report.passed, report.failed)
        reports.append(report)
    return reports
