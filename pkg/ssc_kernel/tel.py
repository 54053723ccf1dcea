"""Telescopes, lifting over telescopes and the lifted substitution equations.

The lifted equations, with ``σ^{+n}`` lifting ``σ`` over a telescope of
length ``n``:

1. ``B[p^{+n}][(γ⁺)^{+n}] = B[γ^{+n}][p^{+n}]``
2. ``B[p^{+n}][⟨a⟩^{+n}] = B``
3. ``B[⟨a⟩^{+n}][γ^{+n}] = B[(γ⁺)^{+n}][⟨a[γ]⟩^{+n}]``
4. ``B[(p⁺)^{+n}][⟨q⟩^{+n}] = B``

For an empty telescope each is one of the eight substitution equations.
With a nonempty telescope they are only admissible, and the normaliser is
what accepts them.
"""

from __future__ import annotations

import dataclasses
import logging
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Tuple

from .const import LIFT_CONCLUSION_SAMPLES, LIFT_HYPOTHESIS_SAMPLES
from .core import DEFAULT_CHECKER, Checker
from .errors import Exhausted, IllFormed
from .eval import conv_tm, conv_ty
from .syntax import (
    App,
    Ctx,
    Lam,
    Lift,
    Mk,
    P,
    Pi,
    Plus,
    Q,
    Single,
    Sub,
    Tm,
    TmSub,
    Ty,
    TySub,
    Un,
    plus_n,
    var,
)

if TYPE_CHECKING:
    from .equations import EquationReport
    from .gen import TermGenerator
    from .par import SubStar

_LOGGER = logging.getLogger(__name__)

LIFTED_KEYS = {
    1: ("A", "gamma", "delta", "B"),
    2: ("a", "B"),
    3: ("a", "gamma", "delta", "B"),
    4: ("B",),
}


@dataclasses.dataclass(frozen=True)
class Tel:
    """Types over ``base``, each over its predecessors."""

    base: Ctx
    entries: Tuple[Ty, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)


def tel_append(ctx: Ctx, tel: Tel) -> Ctx:
    """``Γ + Ω``."""
    return ctx.extend(*tel.entries)


def tel_from_ctx_suffix(ctx: Ctx, k: int) -> Tel:
    """Split off the last ``k`` entries of ``ctx`` as a telescope."""
    if k > len(ctx):
        raise IllFormed(f"cannot split {k} entries off a context of length {len(ctx)}")
    return Tel(ctx.drop(k), ctx.entries[len(ctx) - k :])


def lift_over(sub: Sub, tel: Tel) -> Sub:
    """``γ^{+Ω}``: ``sub`` lifted once per telescope entry."""
    return plus_n(sub, len(tel))


def tel_inst(tel: Tel, sub: Sub, dom: Ctx, checker: Optional[Checker] = None) -> Tel:
    """``Ω[γ]`` rebased at ``dom`` for ``γ : Sub dom tel.base``."""
    checker = checker or DEFAULT_CHECKER
    cod = checker.wf_sub(dom, sub)
    if len(cod) != len(tel.base):
        raise IllFormed(f"substitution lands in a context of length {len(cod)}, telescope base has {len(tel.base)}")
    entries = tuple(TySub(entry, plus_n(sub, k)) for k, entry in enumerate(tel.entries))
    return Tel(dom, entries)


def tel_wf(tel: Tel, checker: Optional[Checker] = None) -> None:
    checker = checker or DEFAULT_CHECKER
    ctx = tel.base
    for k, entry in enumerate(tel.entries):
        try:
            checker.infer_ty_level(ctx, entry)
        except IllFormed as err:
            raise err.at(f"tel[{k}]")
        ctx = ctx.extend(entry)


# Lifted equations


@dataclasses.dataclass(frozen=True)
class LiftedInstance:
    """Both sides of a lifted equation and the context they live in."""

    number: int
    ctx: Ctx
    left: Any
    right: Any
    ty: Optional[Ty] = None

    @property
    def is_term(self) -> bool:
        return self.ty is not None


def build_lifted(n: int, ctx: Ctx, tel: Tel, payload: Dict[str, Any], checker: Optional[Checker] = None) -> LiftedInstance:
    """Build equation ``n`` literally.

    ``ctx`` is ``Γ`` for equations 1 and 2 and ``Γ▷A`` for 3 and 4; ``tel`` is
    based at ``ctx``. The payload supplies ``B`` (a type over ``ctx + tel``),
    optionally ``b : B``, and ``A``, ``a``, ``gamma`` and its domain ``delta``
    as the equation requires. Supplying ``b`` builds the term variant.
    """
    checker = checker or DEFAULT_CHECKER
    if n not in LIFTED_KEYS:
        raise ValueError(f"Unknown lifted equation: {n}")
    missing = [key for key in LIFTED_KEYS[n] if key not in payload]
    if missing:
        raise IllFormed(f"equation {n} needs {', '.join(missing)}")
    if len(tel.base) != len(ctx):
        raise IllFormed("telescope is not based at the context")
    k = len(tel)
    body, subject_ty = payload["B"], payload["B"]
    term = payload.get("b")
    subject = term if term is not None else body
    inst = TmSub if term is not None else TySub

    def twice(first: Sub, second: Sub):
        return inst(inst(subject, plus_n(first, k)), plus_n(second, k)), TySub(TySub(subject_ty, plus_n(first, k)), plus_n(second, k))

    match n:
        case 1:
            gamma, delta, a_ty = payload["gamma"], payload["delta"], payload["A"]
            ext = ctx.extend(a_ty)
            lifted = Plus(gamma)
            dom = delta.extend(TySub(a_ty, gamma))
            amb = tel_append(dom, tel_inst(tel_inst(tel, P(), ext, checker), lifted, dom, checker))
            left, left_ty = twice(P(), lifted)
            right, _ = twice(gamma, P())
        case 2:
            a = payload["a"]
            ext = ctx.extend(checker.synth(ctx, a))
            amb = tel_append(ctx, tel_inst(tel_inst(tel, P(), ext, checker), Single(a), ctx, checker))
            left, left_ty = twice(P(), Single(a))
            right = subject
        case 3:
            a, gamma, delta = payload["a"], payload["gamma"], payload["delta"]
            base = ctx.drop()
            amb = tel_append(delta, tel_inst(tel_inst(tel, Single(a), base, checker), gamma, delta, checker))
            left, left_ty = twice(Single(a), gamma)
            right, _ = twice(Plus(gamma), Single(TmSub(a, gamma)))
        case 4:
            ext = ctx.extend(TySub(ctx.last, P()))
            amb = tel_append(ctx, tel_inst(tel_inst(tel, Plus(P()), ext, checker), Single(Q()), ctx, checker))
            left, left_ty = twice(Plus(P()), Single(Q()))
            right = subject
    return LiftedInstance(n, amb, left, right, left_ty if term is not None else None)


def check_lifted_eq(n: int, ctx: Ctx, tel: Tel, payload: Dict[str, Any], checker: Optional[Checker] = None) -> bool:
    """Decide lifted equation ``n`` by conversion."""
    instance = build_lifted(n, ctx, tel, payload, checker)
    if instance.is_term:
        return conv_tm(instance.ctx, instance.left, instance.right, instance.ty, checker)
    return conv_ty(instance.ctx, instance.left, instance.right, checker)


def sample_lifted(gen: "TermGenerator", n: int, tel_len: Optional[int] = None, term: bool = False) -> Tuple[Ctx, Tel, Dict[str, Any]]:
    """Draw a well-typed instance of lifted equation ``n``."""
    if n not in LIFTED_KEYS:
        raise ValueError(f"Unknown lifted equation: {n}")
    checker = gen.checker
    payload: Dict[str, Any] = {}
    ctx_len = gen.rng.randint(1, 2)
    if n in (1, 3):
        delta = gen.gen_ctx(ctx_len + 1)
        gamma = gen_single_sub(gen, delta)
        payload.update(gamma=gamma, delta=delta)
        ctx = checker.wf_sub(delta, gamma)
    else:
        ctx = gen.gen_ctx(ctx_len)
    if n == 1:
        payload["A"] = gen.gen_ty(ctx)
    if n in (2, 3):
        payload["a"] = gen.gen_payload(ctx, gen.config.max_depth)
    if n == 3:
        ctx = ctx.extend(checker.synth(ctx, payload["a"]))
    if n == 4:
        ctx = ctx.extend(gen.gen_ty(ctx))
    tel = gen.gen_tel(ctx, tel_len)
    full = tel_append(ctx, tel)
    payload["B"] = gen.gen_ty(full)
    if term:
        payload["b"] = gen.gen_tm(full, payload["B"])
    return ctx, tel, payload


# Lifting lemma


@dataclasses.dataclass
class LiftReport:
    """Outcome of sampling the lifting lemma for two SubStars."""

    hypotheses: bool = True
    conclusions: bool = True
    checked: int = 0
    counterexample: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.hypotheses and self.conclusions


def lift_lemma_verify(
    gamma0: "SubStar",
    gamma1: "SubStar",
    dom: Ctx,
    gen: "TermGenerator",
    hypothesis_samples: int = LIFT_HYPOTHESIS_SAMPLES,
    conclusion_samples: int = LIFT_CONCLUSION_SAMPLES,
) -> LiftReport:
    """Sample the lemma lifting an equation between two instantiations.

    Hypotheses: both act the same on sampled types and on every variable.
    Conclusions: their lifts over a sampled telescope act the same on the
    telescope, on types and on terms.
    """
    from .par import star_agree_ty, star_agree_vars, star_cod, star_inst_ty, star_inst_tm, star_plus_n
    from .sexpr import show

    checker = gen.checker
    report = LiftReport()
    cod = star_cod(dom, gamma0, checker)
    if len(star_cod(dom, gamma1, checker)) != len(cod):
        raise IllFormed("the two substitutions have different codomains")
    for _ in range(hypothesis_samples):
        ty = gen.gen_ty(cod)
        report.checked += 1
        if not star_agree_ty(dom, ty, gamma0, gamma1, checker):
            report.hypotheses = False
            report.counterexample = show(ty)
            return report
    if not star_agree_vars(dom, cod, gamma0, gamma1, checker):
        report.hypotheses = False
        report.counterexample = "variables"
        return report
    for _ in range(conclusion_samples):
        tel = gen.gen_tel(cod)
        k = len(tel)
        lifted0, lifted1 = star_plus_n(gamma0, k), star_plus_n(gamma1, k)
        inst_entries: List[Ty] = []
        for j, entry in enumerate(tel.entries):
            left, right = star_inst_ty(entry, star_plus_n(gamma0, j)), star_inst_ty(entry, star_plus_n(gamma1, j))
            amb = dom.extend(*inst_entries)
            if not conv_ty(amb, left, right, checker):
                report.conclusions = False
                report.counterexample = show(entry)
                return report
            inst_entries.append(left)
        amb = dom.extend(*inst_entries)
        full = tel_append(cod, tel)
        ty = gen.gen_ty(full)
        tm = gen.gen_tm(full, ty)
        report.checked += 1
        left_ty = star_inst_ty(ty, lifted0)
        if not conv_ty(amb, left_ty, star_inst_ty(ty, lifted1), checker) or not conv_tm(
            amb, star_inst_tm(tm, lifted0), star_inst_tm(tm, lifted1), left_ty, checker
        ):
            report.conclusions = False
            report.counterexample = show(tm)
            return report
    _LOGGER.debug("Lifting lemma held on %s samples", report.checked)
    return report


# Isomorphisms that need the lifted equations


def lift_var_to(tm: Tm) -> Tm:
    """``t ↦ t[p⁺][⟨un q⟩]`` from ``Γ▷A`` to ``Γ▷Lift A``."""
    return TmSub(TmSub(tm, Plus(P())), Single(Un(Q())))


def lift_var_from(tm: Tm) -> Tm:
    """``t ↦ t[p⁺][⟨mk q⟩]`` from ``Γ▷Lift A`` to ``Γ▷A``."""
    return TmSub(TmSub(tm, Plus(P())), Single(Mk(Q())))


def lift_var_ty(ty: Ty) -> Ty:
    return TySub(TySub(ty, Plus(P())), Single(Un(Q())))


def lift_iso_roundtrip(ctx: Ctx, a_ty: Ty, b_ty: Ty, tm: Tm, checker: Optional[Checker] = None) -> Tuple[bool, bool]:
    """Both roundtrips of the lifted-variable isomorphism.

    ``tm : b_ty`` over ``ctx▷a_ty``; the second roundtrip starts from its
    image over ``ctx▷Lift a_ty``.
    """
    source = ctx.extend(a_ty)
    target = ctx.extend(Lift(a_ty))
    there = lift_var_to(tm)
    there_ty = lift_var_ty(b_ty)
    first = conv_tm(source, lift_var_from(there), tm, b_ty, checker)
    second = conv_tm(target, lift_var_to(lift_var_from(there)), there, there_ty, checker)
    return first, second


def lift_pi_forward(tm: Tm) -> Tm:
    """``Lift (Π A B)`` to ``Π (Lift A) (Lift B[p⁺][⟨un q⟩])``."""
    body = App(TmSub(Un(tm), P()), Q())
    return Lam(Mk(lift_var_to(body)))


def lift_pi_backward(tm: Tm) -> Tm:
    body = App(TmSub(tm, P()), Q())
    return Mk(Lam(Un(lift_var_from(body))))


def lift_pi_target(a_ty: Ty, b_ty: Ty) -> Ty:
    return Pi(Lift(a_ty), Lift(lift_var_ty(b_ty)))


def lift_pi_commute(ctx: Ctx, a_ty: Ty, b_ty: Ty, tm: Tm, checker: Optional[Checker] = None) -> Tuple[bool, bool]:
    """Roundtrips of the composite commuting ``Lift`` and ``Π``.

    ``tm : Lift (Π a_ty b_ty)`` over ``ctx``.
    """
    source_ty = Lift(Pi(a_ty, b_ty))
    target_ty = lift_pi_target(a_ty, b_ty)
    there = lift_pi_forward(tm)
    first = conv_tm(ctx, lift_pi_backward(there), tm, source_ty, checker)
    second = conv_tm(ctx, lift_pi_forward(lift_pi_backward(there)), there, target_ty, checker)
    return first, second


def sample_or_skip(draw, what: str):
    """Run a sampler, returning ``None`` when the generator gives up."""
    try:
        return draw()
    except Exhausted as err:
        _LOGGER.warning("Skipping %s sample: %s", what, err)
        return None


def gen_renaming(gen: "TermGenerator", dom: Ctx) -> Sub:
    """A single substitution out of ``dom`` whose components are all variables."""
    choices = ["p", "single"] + (["plus"] if len(dom) > 1 else [])
    match gen.rng.choice(choices):
        case "p":
            return P()
        case "single":
            return Single(var(gen.rng.randrange(len(dom))))
    candidate = Plus(gen_renaming(gen, dom.drop()))
    try:
        gen.checker.wf_sub(dom, candidate)
    except IllFormed:
        return P()
    return candidate


def gen_single_sub(gen: "TermGenerator", dom: Ctx) -> Sub:
    """A renaming or an arbitrary single substitution out of ``dom``."""
    if gen.rng.random() < 0.5:
        return gen_renaming(gen, dom)
    return gen.gen_sub(dom)


def verify_lifted(gen: "TermGenerator", count: int, tel_len: Optional[int] = None) -> List["EquationReport"]:
    """Decide ``count`` sampled instances of each lifted equation, types then terms."""
    from .equations import EquationReport
    from .sexpr import show

    reports = []
    for n in LIFTED_KEYS:
        for term in (False, True):
            report = EquationReport(f"({n}) {'tm' if term else 'ty'}")
            for _ in range(count):
                try:
                    ctx, tel, payload = sample_lifted(gen, n, tel_len, term)
                except (IllFormed, Exhausted) as err:
                    _LOGGER.debug("Skipping lifted sample %s: %s", n, err)
                    report.skipped += 1
                    continue
                try:
                    accepted = check_lifted_eq(n, ctx, tel, payload, gen.checker)
                except IllFormed as err:
                    _LOGGER.debug("Lifted instance %s rejected: %s", n, err)
                    accepted = False
                report.record(accepted, lambda: show(payload["b" if term else "B"]))
            _LOGGER.info("%s: %s passed, %s failed", report.name, report.passed, report.failed)
            reports.append(report)
    return reports
