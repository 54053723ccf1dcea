"""The parallel substitution (CwF) syntax and its translations to and from SSC.

CwF substitutions are ``id``, ``comp``, ``eps``, ``p`` and ``ext``; type and
term formers, evaluation and conversion are shared with the single
substitution calculus. ``CComp(f, g)`` instantiates by ``f`` first, so
``x[CComp(f, g)]`` is ``x[f][g]``.
"""

from __future__ import annotations

import dataclasses
import logging
from collections import Counter
from typing import TYPE_CHECKING, Callable, Dict, Iterable, List, Optional

from .const import GEN_RETRIES, SSC_EQUATIONS, TERMIFY_MODES
from .core import DEFAULT_CHECKER, Checker, _at
from .equations import EquationInstance, EquationReport, EquationSampler, check_equation, verify_equations
from .errors import Exhausted, IllFormed, Verdict
from .eval import conv_sub, conv_tm, conv_ty, nf_sub
from .par import (
    Comp,
    Emb,
    Id,
    Tms,
    tms_comp,
    tms_conv,
    tms_embed,
    tms_ext,
    tms_identity,
    tms_inst_tm,
    tms_inst_ty,
    tms_to_csub,
)
from .sexpr import show
from .syntax import (
    EMPTY,
    App,
    CComp,
    CEps,
    CExt,
    CId,
    CSub,
    Ctx,
    El,
    Fst,
    Lam,
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
    Un,
    constructor_name,
    replace_children,
    walk,
)
from .termify import (
    TCon,
    TermifiedModel,
    TermifyInstance,
    TSub,
    TTm,
    TTy,
    apply_sub,
    apply_tm,
    apply_ty,
    sample_termify_instance,
    wk,
)

if TYPE_CHECKING:
    from .gen import TermGenerator

_LOGGER = logging.getLogger(__name__)

DIRECTION_SSC = "ssc"
DIRECTION_CWF = "cwf"
DIRECTIONS = [DIRECTION_SSC, DIRECTION_CWF]

_SHARED_CONSTRUCTORS = [
    "U", "El", "Pi", "Sigma", "Top", "Lift", "TySub",
    "Q", "TmSub", "Lam", "App", "Code", "Mk", "Un", "Tt", "Pair", "Fst", "Snd", "P",
]
# Constructors a roundtrip run in each direction should exercise.
ROUNDTRIP_CONSTRUCTORS = {
    DIRECTION_SSC: _SHARED_CONSTRUCTORS + ["Single", "Plus"],
    DIRECTION_CWF: _SHARED_CONSTRUCTORS + ["CId", "CComp", "CEps", "CExt"],
}


class CwfChecker(Checker):
    """Typechecker for the CwF syntax."""

    name = "cwf"

    def wf_sub(self, dom: Ctx, sub: Sub) -> Ctx:
        match sub:
            case CId():
                return dom
            case CComp(first, second):
                with _at("comp"):
                    return self.wf_sub(self.wf_sub(dom, second), first)
            case CEps():
                return EMPTY
            case P():
                if not len(dom):
                    raise IllFormed("p on the empty context")
                return dom.drop()
            case CExt(inner, tm):
                with _at("ext"):
                    cod = self.wf_sub(dom, inner)
                    return cod.extend(self.unlift_entry(dom, inner, cod, self.synth(dom, tm)))
        raise IllFormed(f"not a CwF substitution: {show(sub)}")

    def unlift_entry(self, dom: Ctx, sub: Sub, cod: Ctx, entry: Ty) -> Ty:
        if isinstance(sub, CId):
            return entry
        if isinstance(sub, CComp) and isinstance(entry, TySub) and entry.sub == sub.second:
            mid = self.wf_sub(dom, sub.second)
            try:
                return self.unlift_entry(mid, sub.first, cod, entry.ty)
            except IllFormed:
                _LOGGER.debug("Literal entry %s does not factor through the composite", show(entry))
        return super().unlift_entry(dom, sub, cod, entry)


CWF_CHECKER = CwfChecker()


def cwf_check(ctx: Ctx, tm: Tm, ty: Ty, checker: Optional[CwfChecker] = None) -> Verdict:
    return (checker or CWF_CHECKER).check_tm(ctx, tm, ty)


def cwf_infer(ctx: Ctx, tm: Tm) -> Ty:
    return CWF_CHECKER.infer(ctx, tm)


def cwf_wf_ctx(ctx: Ctx) -> Verdict:
    return CWF_CHECKER.wf_ctx(ctx)


def cwf_conv(
    ctx: Ctx, left: Syntax, right: Syntax, ty: Optional[Ty] = None, checker: Optional[CwfChecker] = None
) -> bool:
    """Conversion of two CwF types, or of two terms at ``ty``."""
    checker = checker or CWF_CHECKER
    if ty is None:
        return conv_ty(ctx, left, right, checker)
    return conv_tm(ctx, left, right, ty, checker)


def cwf_conv_sub(dom: Ctx, left: Sub, right: Sub, cod: Ctx, checker: Optional[CwfChecker] = None) -> bool:
    return conv_sub(dom, left, right, cod, checker or CWF_CHECKER)


# SSC -> CwF


def ssc_to_cwf(node):
    """Interpret single substitutions by ``γ⁺ := (γ∘p, q)`` and ``⟨a⟩ := (id, a)``."""
    match node:
        case Ctx(entries):
            return Ctx(tuple(ssc_to_cwf(entry) for entry in entries))
        case Single(tm):
            return CExt(CId(), ssc_to_cwf(tm))
        case Plus(inner):
            return CExt(CComp(ssc_to_cwf(inner), P()), Q())
        case P():
            return node
        case CSub():
            raise IllFormed(f"already a CwF substitution: {show(node)}")
        case Id():
            return CId()
        case Comp(first, second):
            return CComp(ssc_to_cwf(first), ssc_to_cwf(second))
        case Emb(sub):
            return ssc_to_cwf(sub)
        case Tms():
            return ssc_to_cwf(tms_embed(node))
    return replace_children(node, [ssc_to_cwf(child) for child in node.children()])


# CwF -> SSC


def cod_size(sub: Sub, size: int) -> int:
    """Length of the codomain of a CwF substitution out of ``size`` entries."""
    match sub:
        case CId():
            return size
        case CComp(first, second):
            return cod_size(first, cod_size(second, size))
        case CEps():
            return 0
        case P():
            if not size:
                raise IllFormed("p on the empty context")
            return size - 1
        case CExt(inner, _):
            return cod_size(inner, size) + 1
    raise IllFormed(f"not a CwF substitution: {show(sub)}")


def sub_to_tms(sub: Sub, size: int) -> Tms:
    """A CwF substitution as the list of terms it assigns."""
    match sub:
        case CId():
            return tms_identity(size)
        case CComp(first, second):
            return tms_comp(sub_to_tms(first, cod_size(second, size)), sub_to_tms(second, size))
        case CEps():
            return Tms((), size)
        case P():
            if not size:
                raise IllFormed("p on the empty context")
            return Tms(tms_identity(size).terms[:-1], size)
        case CExt(inner, tm):
            return tms_ext(sub_to_tms(inner, size), cwf_to_ssc(tm, size))
    raise IllFormed(f"not a CwF substitution: {show(sub)}")


def cwf_to_ssc(node, size: int = 0):
    """Translate CwF syntax living over ``size`` entries; substitutions land in Tms."""
    match node:
        case Ctx(entries):
            return Ctx(tuple(cwf_to_ssc(entry, k) for k, entry in enumerate(entries)))
        case CSub() | P():
            return sub_to_tms(node, size)
        case Single() | Plus():
            raise IllFormed(f"not a CwF substitution: {show(node)}")
        case TySub(ty, sub):
            return tms_inst_ty(cwf_to_ssc(ty, cod_size(sub, size)), sub_to_tms(sub, size))
        case TmSub(tm, sub):
            return tms_inst_tm(cwf_to_ssc(tm, cod_size(sub, size)), sub_to_tms(sub, size))
        case Pi(dom, cod) | Sigma(dom, cod):
            return type(node)(cwf_to_ssc(dom, size), cwf_to_ssc(cod, size + 1))
        case Lam(body):
            return Lam(cwf_to_ssc(body, size + 1))
    return replace_children(node, [cwf_to_ssc(child, size) for child in node.children()])


# Roundtrips


@dataclasses.dataclass(frozen=True)
class RoundtripSample:
    """An entity with what is needed to compare it: its context, and its type or codomain."""

    ctx: Ctx
    subject: Syntax
    ty: Optional[Ty] = None
    cod: Optional[Ctx] = None


def _ssc_roundtrip(sample: RoundtripSample) -> bool:
    ctx, subject = sample.ctx, sample.subject
    back = cwf_to_ssc(ssc_to_cwf(subject), len(ctx))
    if isinstance(subject, Ctx):
        return all(conv_ty(subject.prefix(k), a, b) for k, (a, b) in enumerate(zip(subject.entries, back.entries)))
    if isinstance(subject, Sub):
        DEFAULT_CHECKER.wf_sub(ctx, subject)
        return nf_sub(ctx, subject, sample.cod) == nf_sub(ctx, tms_to_csub(back), sample.cod)
    if sample.ty is None:
        return conv_ty(ctx, subject, back)
    return conv_tm(ctx, subject, back, sample.ty)


def _cwf_roundtrip(sample: RoundtripSample) -> bool:
    ctx, subject = sample.ctx, sample.subject
    there = cwf_to_ssc(subject, len(ctx))
    back = ssc_to_cwf(there)
    if isinstance(subject, Ctx):
        return all(cwf_conv(subject.prefix(k), a, b) for k, (a, b) in enumerate(zip(subject.entries, back.entries)))
    if isinstance(subject, Sub):
        return cwf_conv_sub(ctx, subject, back, sample.cod)
    if sample.ty is None:
        return cwf_conv(ctx, subject, back)
    return cwf_conv(ctx, subject, back, sample.ty)


def roundtrip_check(direction: str, sample: RoundtripSample) -> bool:
    """Translate there and back and compare with the input up to conversion."""
    if direction == DIRECTION_SSC:
        return _ssc_roundtrip(sample)
    if direction == DIRECTION_CWF:
        return _cwf_roundtrip(sample)
    raise ValueError(f"Unknown roundtrip direction: {direction}")


def constructor_counts(nodes: Iterable[Syntax]) -> Counter:
    """How often each constructor occurs in ``nodes``, subterms included."""
    counts: Counter = Counter()
    for node in nodes:
        counts.update(constructor_name(sub) for sub in walk(node))
    return counts


def sample_roundtrip(gen: "TermGenerator", direction: str) -> RoundtripSample:
    """A generated entity, in CwF syntax when ``direction`` starts from CwF."""
    for attempt in range(GEN_RETRIES):
        try:
            return _draw_roundtrip(gen, direction)
        except (IllFormed, Exhausted) as err:
            _LOGGER.debug("Resampling roundtrip subject (attempt %s): %s", attempt + 1, err)
    raise Exhausted(f"no roundtrip subject after {GEN_RETRIES} attempts")


def _eliminations(a: Tm, b: Tm) -> Tm:
    """Every eliminator around two synthesisable terms, still synthesisable."""
    return App(Lam(Q()), Pair(Fst(Pair(a, b)), Snd(Pair(a, Un(Mk(b))))))


def _draw_roundtrip(gen: "TermGenerator", direction: str) -> RoundtripSample:
    sampler = EquationSampler(gen)
    kind = gen.rng.choice(["ty", "tm", "sub", "ctx", "elim"])
    ctx = gen.gen_ctx(gen.rng.randint(0, 3))
    match kind:
        case "ty":
            sample = RoundtripSample(ctx, gen.gen_ty(ctx))
        case "tm":
            ty = gen.gen_ty(ctx)
            sample = RoundtripSample(ctx, gen.gen_tm(ctx, ty), ty)
        case "sub":
            dom, sub = sampler.sub_into(ctx)
            if gen.rng.random() < 0.5:
                arg, arg_ty = sampler.payload(ctx)
                dom, sub, ctx = ctx, Single(arg), ctx.extend(arg_ty)
            sample = RoundtripSample(dom, sub, cod=ctx)
        case "elim":
            tm = _eliminations(sampler.payload(ctx)[0], sampler.payload(ctx)[0])
            sample = RoundtripSample(ctx, tm, gen.checker.synth(ctx, tm))
        case _:
            sample = RoundtripSample(EMPTY, ctx)
    if direction == DIRECTION_SSC:
        return sample
    return _cwf_sample(gen, sampler, sample)


def _cwf_sample(gen: "TermGenerator", sampler: EquationSampler, sample: RoundtripSample) -> RoundtripSample:
    """Translate a sample to CwF syntax, sometimes wrapping it in CwF-only substitutions."""
    ctx = ssc_to_cwf(sample.ctx)
    subject = ssc_to_cwf(sample.subject)
    ty = None if sample.ty is None else ssc_to_cwf(sample.ty)
    cod = None if sample.cod is None else ssc_to_cwf(sample.cod)
    if isinstance(subject, Ty) and gen.rng.random() < 0.5:
        if len(ctx) and gen.rng.random() < 0.5:
            arg, _ = sampler.payload(sample.ctx)
            subject = TySub(subject, CComp(P(), CExt(CId(), ssc_to_cwf(arg))))
        else:
            subject = TySub(gen.gen_ty(EMPTY), CEps())
    elif isinstance(subject, Sub) and gen.rng.random() < 0.5:
        subject = CComp(subject, CId())
    return RoundtripSample(ctx, subject, ty, cod)


def verify_roundtrips(gen: "TermGenerator", direction: str, count: int) -> Dict[str, object]:
    """Roundtrip ``count`` samples; returns the tally and constructor coverage."""
    passed, failed, counterexample = 0, 0, None
    subjects: List[Syntax] = []
    for _ in range(count):
        sample = sample_roundtrip(gen, direction)
        if isinstance(sample.subject, Syntax):
            subjects.append(sample.subject)
        else:
            subjects.extend(sample.subject.entries)
        try:
            accepted = roundtrip_check(direction, sample)
        except IllFormed as err:
            _LOGGER.debug("Roundtrip rejected: %s", err)
            accepted = False
        if accepted:
            passed += 1
        else:
            failed += 1
            counterexample = counterexample or show(sample.subject)
    return {
        "passed": passed,
        "failed": failed,
        "counterexample": counterexample,
        "coverage": constructor_counts(subjects),
    }


# Equations across the translations


def translate_equation(inst: EquationInstance) -> EquationInstance:
    """The same instance in CwF syntax."""
    return EquationInstance(
        inst.name,
        ssc_to_cwf(inst.ctx),
        ssc_to_cwf(inst.left),
        ssc_to_cwf(inst.right),
        None if inst.ty is None else ssc_to_cwf(inst.ty),
        None if inst.cod is None else ssc_to_cwf(inst.cod),
    )


def verify_translated_equations(gen: "TermGenerator", count: int) -> List[EquationReport]:
    """Each SSC equation, translated, is accepted by CwF conversion."""
    return verify_equations(
        gen, count, SSC_EQUATIONS, lambda inst: check_equation(translate_equation(inst), CWF_CHECKER)
    )


CWF_SYNTAX_LAWS = [
    "ty-id",
    "ty-comp",
    "comp-assoc",
    "comp-idl",
    "comp-idr",
    "eps-eta",
    "ext-beta1",
    "ext-beta2",
    "ext-eta",
]


def sample_cwf_law(gen: "TermGenerator", name: str) -> EquationInstance:
    """An instance of a CwF law written in CwF syntax."""
    if name not in CWF_SYNTAX_LAWS:
        raise ValueError(f"Unknown CwF law: {name}")
    sampler = EquationSampler(gen)
    gamma_ctx = gen.gen_ctx(gen.rng.randint(0, 2))
    delta_ctx, gamma = sampler.sub_into(gamma_ctx)
    theta_ctx, delta = sampler.sub_into(delta_ctx)
    gamma, delta = ssc_to_cwf(gamma), ssc_to_cwf(delta)
    cwf_gamma, cwf_delta, cwf_theta = ssc_to_cwf(gamma_ctx), ssc_to_cwf(delta_ctx), ssc_to_cwf(theta_ctx)
    plain_ty = gen.gen_ty(gamma_ctx)
    ty = ssc_to_cwf(plain_ty)

    def law(ctx, left, right, ty=None, cod=None):
        return EquationInstance(name, ctx, left, right, ty, cod)

    match name:
        case "ty-id":
            return law(cwf_gamma, TySub(ty, CId()), ty)
        case "ty-comp":
            return law(cwf_theta, TySub(ty, CComp(gamma, delta)), TySub(TySub(ty, gamma), delta))
        case "comp-assoc":
            xi_ctx, theta = sampler.sub_into(theta_ctx)
            theta = ssc_to_cwf(theta)
            left = CComp(CComp(gamma, delta), theta)
            return law(ssc_to_cwf(xi_ctx), left, CComp(gamma, CComp(delta, theta)), cod=cwf_gamma)
        case "comp-idl":
            return law(cwf_delta, CComp(CId(), gamma), gamma, cod=cwf_gamma)
        case "comp-idr":
            return law(cwf_delta, CComp(gamma, CId()), gamma, cod=cwf_gamma)
        case "eps-eta":
            return law(cwf_delta, CComp(CEps(), gamma), CEps(), cod=EMPTY)
    arg, arg_ty = sampler.payload(gamma_ctx)
    arg, arg_ty = ssc_to_cwf(arg), ssc_to_cwf(arg_ty)
    pair = CExt(gamma, TmSub(arg, gamma))
    match name:
        case "ext-beta1":
            return law(cwf_delta, CComp(P(), pair), gamma, cod=cwf_gamma)
        case "ext-beta2":
            return law(cwf_delta, TmSub(Q(), pair), TmSub(arg, gamma), TySub(arg_ty, gamma))
    ext_ctx = cwf_gamma.extend(ty)
    outer, into_ext = sampler.sub_into(gamma_ctx.extend(plain_ty))
    into_ext = ssc_to_cwf(into_ext)
    left = CExt(CComp(P(), into_ext), TmSub(Q(), into_ext))
    return law(ssc_to_cwf(outer), left, into_ext, cod=ext_ctx)


def law_holds_in_ssc(inst: EquationInstance) -> bool:
    """Translate a CwF law instance to SSC and decide it there."""
    size = len(inst.ctx)
    ctx = cwf_to_ssc(inst.ctx)
    left, right = cwf_to_ssc(inst.left, size), cwf_to_ssc(inst.right, size)
    if inst.is_sub:
        return tms_conv(left, right, ctx, cwf_to_ssc(inst.cod))
    if inst.is_term:
        return conv_tm(ctx, left, right, cwf_to_ssc(inst.ty, size))
    return conv_ty(ctx, left, right)


def verify_cwf_syntax_laws(gen: "TermGenerator", count: int, in_ssc: bool = False) -> List[EquationReport]:
    """CwF laws decided by CwF conversion, or by SSC conversion after translation."""
    reports = []
    for name in CWF_SYNTAX_LAWS:
        report = EquationReport(name)
        for _ in range(count):
            inst = sample_cwf_law(gen, name)
            try:
                accepted = law_holds_in_ssc(inst) if in_ssc else check_equation(inst, CWF_CHECKER)
            except IllFormed as err:
                _LOGGER.debug("Instance of %s rejected: %s", name, err)
                accepted = False
            report.record(accepted, inst.describe)
        reports.append(report)
    return reports


# Contextual isomorphism components out of the termified model


def contextual_iso_F(entity):
    """``F Γ := ⋄▷Γ``, ``F γ := (p, γ[p]·q)``, ``F A := El (A[p]·q)``, ``F a := a[p]·q``."""
    match entity:
        case TCon():
            return Ctx((entity.ty,))
        case TSub():
            return CExt(P(), apply_sub(entity, wk(entity.tm), Q()))
        case TTy():
            return El(apply_ty(entity, wk(entity.tm), Q()))
        case TTm():
            return apply_tm(entity, wk(entity.tm), Q())
    raise ValueError(f"Unknown termified entity: {entity!r}")


def eps_iso_holds() -> Verdict:
    """``ε : Sub (F ⋄) ⋄`` is inverted by ``(ε, tt)``."""
    unit = contextual_iso_F(TCon(0, Top()))
    inverse = CExt(CEps(), Tt())
    try:
        CWF_CHECKER.wf_ctx(unit)
        there = cwf_conv_sub(unit, CComp(inverse, CEps()), CId(), unit)
        back = cwf_conv_sub(EMPTY, CComp(CEps(), inverse), CId(), EMPTY)
    except IllFormed as err:
        return Verdict(False, f"eps: {err}")
    return Verdict(there and back, "" if there and back else "eps: not inverse to (eps, tt)")


def check_contextual_iso(model: TermifiedModel, inst: TermifyInstance) -> Dict[str, Verdict]:
    """Typing of the four components and their preservation equations."""
    F = contextual_iso_F
    g, d, a_ty, a = inst.sub_g, inst.sub_d, inst.ty_a, inst.tm_a
    a_ty_g, a_g = model.t_inst_ty(a_ty, g), model.t_inst_tm(a, g)
    ident, comp = model.t_id(inst.con), model.t_comp(g, d)
    # Components apply termified definitions; their sorts must be registered.
    chk = CwfChecker(model.checker.signature)
    con, con_d = F(inst.con), F(inst.con_d)
    checks: Dict[str, Callable[[], bool]] = {
        "ty-level": lambda: chk.infer_ty_level(con, F(a_ty)) == a_ty.level,
        "tm-typing": lambda: bool(cwf_check(con, F(a), F(a_ty), chk)),
        "sub-typing": lambda: cwf_conv_sub(con_d, F(g), F(g), con, chk),
        "ty-inst": lambda: cwf_conv(con_d, F(a_ty_g), TySub(F(a_ty), F(g)), checker=chk),
        "tm-inst": lambda: cwf_conv(con_d, F(a_g), TmSub(F(a), F(g)), F(a_ty_g), chk),
        "id": lambda: cwf_conv_sub(con, F(ident), CId(), con, chk),
        "comp": lambda: cwf_conv_sub(F(inst.con_t), F(comp), CComp(F(g), F(d)), con, chk),
    }
    results: Dict[str, Verdict] = {}
    for name, check in checks.items():
        try:
            ok = check()
        except IllFormed as err:
            results[name] = Verdict(False, f"{name}: {err}")
            continue
        results[name] = Verdict(ok, "" if ok else f"{name}: the two sides differ")
    results["eps"] = eps_iso_holds()
    return results


def verify_contextual_iso(gen: "TermGenerator", model: TermifiedModel, count: int) -> Dict[str, Verdict]:
    """Check the isomorphism on ``count`` sampled instances, cycling the instance modes.

    The first failing verdict of each component is kept.
    """
    results: Dict[str, Verdict] = {}
    for k in range(count):
        inst = sample_termify_instance(gen, model, TERMIFY_MODES[k % len(TERMIFY_MODES)])
        for name, verdict in check_contextual_iso(model, inst).items():
            if name not in results or results[name]:
                results[name] = verdict
        _LOGGER.debug("Isomorphism instance %s checked", k + 1)
    return results
