"""Minimised calculus with conditional equations, and a derivation replayer.

Seven of the substitution equations become conditional: a term equation
holds whenever the type equation it sits over holds. With universes and Π
every such condition can be discharged, which makes the eleven dropped
equations derivable again. The chains doing so are built here and replayed
step by step by literal schema matching. Replay never decides a step with
the normaliser; only the typing premises of conditional steps go through
the checker.
"""

from __future__ import annotations

import dataclasses
import logging
from typing import TYPE_CHECKING, Any, Callable, Dict, Iterable, List, Mapping, Optional, Tuple

from .core import DEFAULT_CHECKER, Checker
from .equations import EquationInstance, EquationReport, check_equation, verify_equations
from .errors import Exhausted, IllFormed, ParseError, StepMismatch, Verdict
from .eval import VPi, VU, quote_ty, whnf_ty
from .sexpr import SExp, dump, show, to_ctx, to_entity, to_sexp
from .syntax import (
    App,
    Code,
    Ctx,
    El,
    Lam,
    Lift,
    Mk,
    P,
    Pi,
    Plus,
    Q,
    Single,
    Syntax,
    Tm,
    TmSub,
    Ty,
    TySub,
    U,
    Un,
    var,
)

if TYPE_CHECKING:
    from .gen import TermGenerator

_LOGGER = logging.getLogger(__name__)

REWRITE_LIMIT = 64


@dataclasses.dataclass(frozen=True)
class Meta(Syntax):
    """Schema metavariable; matches any node (or universe level)."""

    name: str

    def __str__(self) -> str:
        return f"?{self.name}"

    def to_sexp(self) -> SExp:
        return str(self)


@dataclasses.dataclass(frozen=True)
class Rule:
    """An equation schema ``left = right``.

    Conditional rules carry the type equation they sit over. Rules whose
    instances are only sound at a typing carry the premise ``term : type``,
    checked in the context the citing step names.
    """

    name: str
    left: Syntax
    right: Syntax
    hypothesis: Optional[Tuple[Ty, Ty]] = None
    typing: Optional[Tuple[Tm, Ty]] = None

    @property
    def conditional(self) -> bool:
        return self.hypothesis is not None

    @property
    def plain(self) -> bool:
        return self.hypothesis is None and self.typing is None

    def describe(self) -> str:
        text = f"{self.name}: {show(self.left)} = {show(self.right)}"
        if self.hypothesis is not None:
            text += f" given {show(self.hypothesis[0])} = {show(self.hypothesis[1])}"
        return text


_A, _B, _BH = Meta("A"), Meta("B"), Meta("Bh")
_a, _b, _t, _g, _i = Meta("a"), Meta("b"), Meta("t"), Meta("g"), Meta("i")


def _p_plus(node: Syntax, wrap) -> Syntax:
    return wrap(wrap(node, P()), Plus(_g))


def _p_single(node: Syntax, wrap) -> Syntax:
    return wrap(wrap(node, P()), Single(_a))


_HYP_P_PLUS = (_p_plus(_B, TySub), TySub(TySub(_B, _g), P()))
_HYP_P_SINGLE = (_p_single(_B, TySub), _B)
_HYP_SINGLE_SUB = (TySub(TySub(_B, Single(_a)), _g), TySub(TySub(_B, Plus(_g)), Single(TmSub(_a, _g))))
_HYP_P_PLUS_Q = (TySub(TySub(_B, Plus(P())), Single(Q())), _B)

_PI_ETA_RIGHT = Lam(App(TmSub(_t, P()), Q()))
_PI_BETA_COND_LEFT = App(TmSub(Lam(_b), P()), Q())

MINIMISED_RULES: Dict[str, Rule] = {
    rule.name: rule
    for rule in [
        Rule("[p][+]'", _p_plus(_b, TmSub), TmSub(TmSub(_b, _g), P()), _HYP_P_PLUS, (_b, _B)),
        Rule("q[+]'", TmSub(Q(), Plus(_g)), Q(), _HYP_P_PLUS, (Q(), TySub(_B, P()))),
        Rule("[p][<>]'", _p_single(_b, TmSub), _b, _HYP_P_SINGLE, (_b, _B)),
        Rule("q[<>]'", TmSub(Q(), Single(_a)), _a, _HYP_P_SINGLE, (_a, _B)),
        Rule("app[]'", TmSub(App(_t, _a), _g), App(TmSub(_t, _g), TmSub(_a, _g)), _HYP_SINGLE_SUB, (_t, Pi(_A, _B))),
        Rule("Pi-eta'", _t, _PI_ETA_RIGHT, _HYP_P_PLUS_Q, (_t, Pi(_A, _B))),
        Rule("Pi-beta'", _PI_BETA_COND_LEFT, _b, _HYP_P_PLUS_Q, (Lam(_b), Pi(_A, _B))),
        Rule("Pi[]", TySub(Pi(_A, _B), _g), Pi(TySub(_A, _g), TySub(_B, Plus(_g)))),
        Rule("lam[]", TmSub(Lam(_b), _g), Lam(TmSub(_b, Plus(_g)))),
        Rule("U[]", TySub(U(_i), _g), U(_i)),
        Rule("El[]", TySub(El(_a), _g), El(TmSub(_a, _g))),
        Rule("c[]", TmSub(Code(_A), _g), Code(TySub(_A, _g))),
        Rule("U-beta", El(Code(_A)), _A),
        Rule("U-eta", Code(El(_a)), _a),
        Rule("Lift[]", TySub(Lift(_A), _g), Lift(TySub(_A, _g))),
        Rule("mk[]", TmSub(Mk(_a), _g), Mk(TmSub(_a, _g))),
        Rule("un[]", TmSub(Un(_a), _g), Un(TmSub(_a, _g))),
        Rule("Lift-beta", Un(Mk(_a)), _a),
        Rule("Lift-eta", Mk(Un(_a)), _a),
    ]
}

# Equations of the full calculus that the minimised one drops, plus the
# universe-valued β rule used on the way.
DERIVED_RULES: Dict[str, Rule] = {
    rule.name: rule
    for rule in [
        Rule("[p][+]ty", *_HYP_P_PLUS),
        Rule("[p][<>]ty", *_HYP_P_SINGLE),
        Rule("[p][+]tm", _p_plus(_b, TmSub), TmSub(TmSub(_b, _g), P())),
        Rule("q[+]", TmSub(Q(), Plus(_g)), Q()),
        Rule("[p][<>]tm", _p_single(_b, TmSub), _b),
        Rule("q[<>]", TmSub(Q(), Single(_a)), _a),
        Rule("Pi-beta-U", App(Lam(_BH), _a), TmSub(_BH, Single(_a)), typing=(Lam(_BH), Pi(_A, U(_i)))),
        Rule("[<>][]", *_HYP_SINGLE_SUB),
        Rule("[p+][<q>]", *_HYP_P_PLUS_Q),
        Rule("app[]", TmSub(App(_t, _a), _g), App(TmSub(_t, _g), TmSub(_a, _g))),
        Rule("Pi-beta", App(Lam(_b), _a), TmSub(_b, Single(_a))),
        Rule("Pi-eta", _t, _PI_ETA_RIGHT),
    ]
}

RULES: Dict[str, Rule] = {**MINIMISED_RULES, **DERIVED_RULES}

MINIMISED_AXIOMS = list(MINIMISED_RULES)
FULL_ONLY_AXIOMS = [name for name in DERIVED_RULES if name != "Pi-beta-U"]
DERIVATION_ORDER = list(DERIVED_RULES)
RECONSTRUCTED = {"q[<>]"}

# Full-calculus equation whose instances are those of each minimised axiom.
ADMITTED_AS = {
    "[p][+]'": "[p][+]tm",
    "q[+]'": "q[+]",
    "[p][<>]'": "[p][<>]tm",
    "q[<>]'": "q[<>]",
    "app[]'": "app[]",
    "Pi-eta'": "Pi-eta",
}


def allowed_before(name: str) -> frozenset:
    """Minimised axioms plus every lemma derived earlier than ``name``."""
    if name not in DERIVED_RULES:
        raise ValueError(f"Unknown derivable equation: {name}")
    return frozenset(MINIMISED_AXIOMS) | frozenset(DERIVATION_ORDER[: DERIVATION_ORDER.index(name)])


# Matching


def match(pattern: Any, node: Any, binding: Mapping[str, Any]) -> Optional[Dict[str, Any]]:
    """First-order match of ``pattern`` against ``node`` extending ``binding``."""
    if isinstance(pattern, Meta):
        if pattern.name in binding:
            return dict(binding) if binding[pattern.name] == node else None
        return {**binding, pattern.name: node}
    if not isinstance(pattern, Syntax):
        return dict(binding) if pattern == node else None
    if type(pattern) is not type(node):
        return None
    result: Optional[Dict[str, Any]] = dict(binding)
    for field in dataclasses.fields(pattern):
        result = match(getattr(pattern, field.name), getattr(node, field.name), result)
        if result is None:
            return None
    return result


def instantiate(pattern: Any, binding: Mapping[str, Any]) -> Any:
    """Replace every metavariable; raises ``KeyError`` on an unbound one."""
    if isinstance(pattern, Meta):
        return binding[pattern.name]
    if not isinstance(pattern, Syntax):
        return pattern
    values = {field.name: instantiate(getattr(pattern, field.name), binding) for field in dataclasses.fields(pattern)}
    return type(pattern)(**values)


def match_equation(rule: Rule, left: Syntax, right: Syntax, binding: Mapping[str, Any]) -> Optional[Dict[str, Any]]:
    """Match ``left = right`` against the rule in either orientation."""
    for this, that in ((rule.left, rule.right), (rule.right, rule.left)):
        found = match(this, left, binding)
        if found is not None:
            found = match(that, right, found)
        if found is not None:
            return found
    return None


def _rewrite_once(node: Syntax, rules: List[Rule]) -> Optional[Syntax]:
    for rule in rules:
        found = match(rule.left, node, {})
        if found is not None:
            try:
                return instantiate(rule.right, found)
            except KeyError:
                continue
    fields = dataclasses.fields(node)
    for index, field in enumerate(fields):
        child = getattr(node, field.name)
        if not isinstance(child, Syntax):
            continue
        rewritten = _rewrite_once(child, rules)
        if rewritten is not None:
            values = {f.name: getattr(node, f.name) for f in fields}
            values[fields[index].name] = rewritten
            return type(node)(**values)
    return None


def rewrite(node: Syntax, rules: List[Rule], limit: int = REWRITE_LIMIT) -> Syntax:
    """Rewrite left to right, outermost first, at most ``limit`` times."""
    for _ in range(limit):
        rewritten = _rewrite_once(node, rules)
        if rewritten is None:
            return node
        node = rewritten
    return node


def discharged(left: Ty, right: Ty, rule_names: Iterable[str], allowed: Iterable[str]) -> bool:
    """Whether the type equation follows from the cited plain rules alone."""
    if left == right:
        return True
    allowed = set(allowed)
    rules = []
    for name in rule_names:
        rule = RULES.get(name)
        if rule is None or name not in allowed or not rule.plain:
            return False
        rules.append(rule)
    if any(match_equation(rule, left, right, {}) is not None for rule in rules):
        return True
    return rewrite(left, rules) == rewrite(right, rules)


# Chains


@dataclasses.dataclass(frozen=True)
class Justification:
    """A cited rule with the parameters its side conditions need.

    ``params`` pre-binds metavariables that the step itself does not show
    (the type a conditional equation sits over). ``discharge`` names the
    plain rules proving the hypothesis and ``ctx`` is where the typing
    premise is checked.
    """

    rule: str
    params: Mapping[str, Any] = dataclasses.field(default_factory=dict)
    discharge: Tuple[str, ...] = ()
    ctx: Optional[Ctx] = None

    def describe(self) -> str:
        text = self.rule
        if self.discharge:
            text += " + " + " + ".join(self.discharge)
        return text


@dataclasses.dataclass(frozen=True)
class Step:
    expr: Syntax
    by: Justification


@dataclasses.dataclass(frozen=True)
class Chain:
    """An equational chain ``start = steps[0].expr = ... = steps[-1].expr``."""

    name: str
    ctx: Ctx
    start: Syntax
    steps: Tuple[Step, ...]
    reconstructed: bool = False

    @property
    def end(self) -> Syntax:
        return self.steps[-1].expr if self.steps else self.start

    def lines(self) -> List[Tuple[str, str]]:
        """Printed expressions paired with the justification reaching each."""
        return [(show(self.start), "")] + [(show(step.expr), step.by.describe()) for step in self.steps]


def _diff_path(before: Syntax, after: Syntax) -> List[Tuple[Syntax, Syntax]]:
    """Pairs along the path to the single changed position, innermost first."""
    path = [(before, after)]
    while type(before) is type(after) and isinstance(before, Syntax):
        changed = [
            (getattr(before, field.name), getattr(after, field.name))
            for field in dataclasses.fields(before)
            if getattr(before, field.name) != getattr(after, field.name)
        ]
        if len(changed) != 1 or not isinstance(changed[0][0], Syntax):
            break
        before, after = changed[0]
        path.append((before, after))
    return list(reversed(path))


def _side_conditions(rule: Rule, found: Mapping[str, Any], step: Step, allowed, checker: Checker) -> Optional[str]:
    """Return why the instance fails its side conditions, or ``None``."""
    try:
        if rule.typing is not None:
            if step.by.ctx is None:
                return "no context given for the typing premise"
            term, ty = (instantiate(part, found) for part in rule.typing)
            checker.check(step.by.ctx, term, ty)
        if rule.hypothesis is not None:
            left, right = (instantiate(part, found) for part in rule.hypothesis)
            if not discharged(left, right, step.by.discharge, allowed):
                return f"hypothesis {show(left)} = {show(right)} not discharged by {list(step.by.discharge)}"
    except KeyError as err:
        return f"parameter {err.args[0]} not supplied"
    except IllFormed as err:
        return f"typing premise fails: {err}"
    return None


def check_step(index: int, before: Syntax, step: Step, allowed, checker: Checker) -> None:
    """Raise ``StepMismatch`` unless ``before = step.expr`` instantiates the cited rule."""
    name = step.by.rule
    rule = RULES.get(name)
    if rule is None or name not in allowed:
        raise StepMismatch(index, name, "a rule outside the allowed set")
    reason = f"{show(before)} ~> {show(step.expr)}"
    for left, right in _diff_path(before, step.expr):
        found = match_equation(rule, left, right, step.by.params)
        if found is None:
            continue
        failure = _side_conditions(rule, found, step, allowed, checker)
        if failure is None:
            return
        reason = failure
    raise StepMismatch(index, rule.describe(), reason)


def replay_strict(chain: Chain, allowed: Iterable[str], checker: Optional[Checker] = None) -> None:
    """Replay every step; raises ``StepMismatch`` at the first bad one."""
    allowed = frozenset(allowed)
    checker = checker or DEFAULT_CHECKER
    if not chain.steps:
        raise StepMismatch(0, "at least one step", "an empty chain")
    before = chain.start
    for index, step in enumerate(chain.steps):
        if before == step.expr:
            raise StepMismatch(index, step.by.rule, "a step that changes nothing")
        check_step(index, before, step, allowed, checker)
        before = step.expr
    _LOGGER.debug("Replayed %s in %s steps", chain.name, len(chain.steps))


def replay(chain: Chain, allowed: Iterable[str], checker: Optional[Checker] = None) -> Verdict:
    try:
        replay_strict(chain, allowed, checker)
    except StepMismatch as err:
        _LOGGER.debug("Chain %s rejected: %s", chain.name, err)
        return Verdict(False, str(err))
    return Verdict(True)


def corrupt_chain(chain: Chain, index: Optional[int] = None) -> Chain:
    """Negative control: cite a rule that cannot justify one of the steps."""
    index = len(chain.steps) // 2 if index is None else index
    steps = list(chain.steps)
    wrong = "Lift-beta" if steps[index].by.rule != "Lift-beta" else "U-eta"
    steps[index] = Step(steps[index].expr, Justification(wrong))
    return dataclasses.replace(chain, name=f"{chain.name} (corrupted)", steps=tuple(steps))


# Derivations of the dropped equations


def _by(rule: str, ctx: Optional[Ctx] = None, discharge: Tuple[str, ...] = (), **params: Any) -> Justification:
    return Justification(rule, params, discharge, ctx)


def _bind(name: str, inst: EquationInstance, ty_pattern: Optional[Ty] = None) -> Dict[str, Any]:
    rule = DERIVED_RULES[name]
    found = match(rule.left, inst.left, {})
    if found is not None:
        found = match(rule.right, inst.right, found)
    if found is not None and ty_pattern is not None:
        found = match(ty_pattern, inst.ty, found)
    if found is None:
        raise IllFormed(f"instance does not have the shape of {name}: {inst.describe()}")
    return found


def _pi_parts(ctx: Ctx, tm: Tm, checker: Checker) -> Tuple[Ty, Ty]:
    """Domain and codomain of the function type ``tm`` synthesizes."""
    scope, val = whnf_ty(ctx, checker.synth(ctx, tm))
    if not isinstance(val, VPi):
        raise IllFormed(f"not a function: {show(tm)}")
    return quote_ty(scope, val.dom), quote_ty(scope.bind(val.dom), val.cod.ty(scope.fresh()))


def _code_level(ctx: Ctx, code: Tm, checker: Checker) -> int:
    scope, val = whnf_ty(ctx, checker.synth(ctx, code))
    if not isinstance(val, VU):
        raise IllFormed(f"not a code: {show(code)}")
    return val.level


def _chain(name: str, inst: EquationInstance, steps: List[Step]) -> Chain:
    return Chain(name, inst.ctx, inst.left, tuple(steps), name in RECONSTRUCTED)


def _derive_p_plus_ty(inst: EquationInstance, checker: Checker) -> Chain:
    found = _bind("[p][+]ty", inst)
    ty, sub = found["B"], found["g"]
    cod = checker.wf_sub(inst.ctx.drop(), sub)
    level = checker.infer_ty_level(cod, ty)
    code = Code(ty)
    return _chain("[p][+]ty", inst, [
        Step(TySub(TySub(El(code), P()), Plus(sub)), _by("U-beta")),
        Step(TySub(El(TmSub(code, P())), Plus(sub)), _by("El[]")),
        Step(El(TmSub(TmSub(code, P()), Plus(sub))), _by("El[]")),
        Step(El(TmSub(TmSub(code, sub), P())), _by("[p][+]'", cod, ("U[]",), B=U(level))),
        Step(TySub(El(TmSub(code, sub)), P()), _by("El[]")),
        Step(TySub(TySub(El(code), sub), P()), _by("El[]")),
        Step(TySub(TySub(ty, sub), P()), _by("U-beta")),
    ])


def _derive_p_single_ty(inst: EquationInstance, checker: Checker) -> Chain:
    found = _bind("[p][<>]ty", inst)
    ty, arg = found["B"], found["a"]
    level = checker.infer_ty_level(inst.ctx, ty)
    code = Code(ty)
    return _chain("[p][<>]ty", inst, [
        Step(TySub(TySub(El(code), P()), Single(arg)), _by("U-beta")),
        Step(TySub(El(TmSub(code, P())), Single(arg)), _by("El[]")),
        Step(El(TmSub(TmSub(code, P()), Single(arg))), _by("El[]")),
        Step(El(code), _by("[p][<>]'", inst.ctx, ("U[]",), B=U(level))),
        Step(ty, _by("U-beta")),
    ])


def _derive_p_plus_tm(inst: EquationInstance, checker: Checker) -> Chain:
    found = _bind("[p][+]tm", inst, TySub(TySub(_B, _g), P()))
    cod = checker.wf_sub(inst.ctx.drop(), found["g"])
    return _chain("[p][+]tm", inst, [Step(inst.right, _by("[p][+]'", cod, ("[p][+]ty",), B=found["B"]))])


def _derive_q_plus(inst: EquationInstance, checker: Checker) -> Chain:
    # q[γ⁺] lives at A[p][γ⁺]; the derived type equation coerces it to A[γ][p]
    found = _bind("q[+]", inst, TySub(TySub(_A, _g), P()))
    cod = checker.wf_sub(inst.ctx.drop(), found["g"])
    ty = found["A"]
    return _chain("q[+]", inst, [Step(Q(), _by("q[+]'", cod.extend(ty), ("[p][+]ty",), B=ty))])


def _derive_p_single_tm(inst: EquationInstance, checker: Checker) -> Chain:
    _bind("[p][<>]tm", inst)
    return _chain("[p][<>]tm", inst, [Step(inst.right, _by("[p][<>]'", inst.ctx, ("[p][<>]ty",), B=inst.ty))])


def _derive_q_single(inst: EquationInstance, checker: Checker) -> Chain:
    found = _bind("q[<>]", inst)
    ty = inst.ty if inst.ty is not None else checker.synth(inst.ctx, found["a"])
    return _chain("q[<>]", inst, [Step(found["a"], _by("q[<>]'", inst.ctx, ("[p][<>]ty",), B=ty))])


def _beta_steps(ctx: Ctx, dom: Ty, cod: Ty, body: Tm, arg: Tm, universe: bool) -> List[Step]:
    """``lam b · a = b[⟨a⟩]`` through the conditional rules.

    At a universe codomain the conditions are discharged by ``U[]``;
    otherwise by the derived type equations.
    """
    fn = Lam(body)
    fetched = TmSub(Q(), Single(arg))
    app_by = ("U[]",) if universe else ("[<>][]",)
    beta_by = ("U[]",) if universe else ("[p+][<q>]",)
    return [
        Step(App(fn, fetched), _by("q[<>]'", ctx, ("[p][<>]ty",), B=dom)),
        Step(App(TmSub(TmSub(fn, P()), Single(arg)), fetched), _by("[p][<>]'", ctx, ("[p][<>]ty",), B=Pi(dom, cod))),
        Step(
            TmSub(App(TmSub(fn, P()), Q()), Single(arg)),
            _by("app[]'", ctx.extend(dom), app_by, A=TySub(dom, P()), B=TySub(cod, Plus(P()))),
        ),
        Step(TmSub(body, Single(arg)), _by("Pi-beta'", ctx, beta_by, A=dom, B=cod)),
    ]


def _derive_pi_beta_u(inst: EquationInstance, checker: Checker) -> Chain:
    found = _bind("Pi-beta-U", inst)
    body, arg = found["Bh"], found["a"]
    dom = checker.synth(inst.ctx, arg)
    level = _code_level(inst.ctx.extend(dom), body, checker)
    return _chain("Pi-beta-U", inst, _beta_steps(inst.ctx, dom, U(level), body, arg, universe=True))


def _derive_single_sub(inst: EquationInstance, checker: Checker) -> Chain:
    found = _bind("[<>][]", inst)
    ty, arg, sub = found["B"], found["a"], found["g"]
    cod = checker.wf_sub(inst.ctx, sub)
    dom = checker.synth(cod, arg)
    level = checker.infer_ty_level(cod.extend(dom), ty)
    code = Code(ty)
    moved = TmSub(arg, sub)
    return _chain("[<>][]", inst, [
        Step(El(Code(TySub(TySub(ty, Single(arg)), sub))), _by("U-beta")),
        Step(El(TmSub(Code(TySub(ty, Single(arg))), sub)), _by("c[]")),
        Step(El(TmSub(TmSub(code, Single(arg)), sub)), _by("c[]")),
        Step(El(TmSub(App(Lam(code), arg), sub)), _by("Pi-beta-U", cod, A=dom, i=level)),
        Step(El(App(TmSub(Lam(code), sub), moved)), _by("app[]'", cod, ("U[]",), A=dom, B=U(level))),
        Step(El(App(Lam(TmSub(code, Plus(sub))), moved)), _by("lam[]")),
        Step(El(TmSub(TmSub(code, Plus(sub)), Single(moved))), _by("Pi-beta-U", inst.ctx, A=TySub(dom, sub), i=level)),
        Step(El(TmSub(Code(TySub(ty, Plus(sub))), Single(moved))), _by("c[]")),
        Step(El(Code(TySub(TySub(ty, Plus(sub)), Single(moved)))), _by("c[]")),
        Step(inst.right, _by("U-beta")),
    ])


def _derive_p_plus_q(inst: EquationInstance, checker: Checker) -> Chain:
    found = _bind("[p+][<q>]", inst)
    ty = found["B"]
    base, dom = inst.ctx.drop(), inst.ctx.last
    level = checker.infer_ty_level(inst.ctx, ty)
    code = Code(ty)
    return _chain("[p+][<q>]", inst, [
        Step(TySub(TySub(El(code), Plus(P())), Single(Q())), _by("U-beta")),
        Step(TySub(El(TmSub(code, Plus(P()))), Single(Q())), _by("El[]")),
        Step(El(TmSub(TmSub(code, Plus(P())), Single(Q()))), _by("El[]")),
        Step(El(App(Lam(TmSub(code, Plus(P()))), Q())), _by("Pi-beta-U", inst.ctx, A=TySub(dom, P()), i=level)),
        Step(El(App(TmSub(Lam(code), P()), Q())), _by("lam[]")),
        Step(El(code), _by("Pi-beta'", base, ("U[]",), A=dom, B=U(level))),
        Step(ty, _by("U-beta")),
    ])


def _derive_app(inst: EquationInstance, checker: Checker) -> Chain:
    found = _bind("app[]", inst)
    cod = checker.wf_sub(inst.ctx, found["g"])
    dom, fam = _pi_parts(cod, found["t"], checker)
    return _chain("app[]", inst, [Step(inst.right, _by("app[]'", cod, ("[<>][]",), A=dom, B=fam))])


def _derive_pi_beta(inst: EquationInstance, checker: Checker) -> Chain:
    found = _bind("Pi-beta", inst)
    body, arg = found["b"], found["a"]
    dom = checker.synth(inst.ctx, arg)
    fam = match(TySub(_B, Single(arg)), inst.ty, {}) if inst.ty is not None else None
    cod = fam["B"] if fam is not None else checker.synth(inst.ctx.extend(dom), body)
    return _chain("Pi-beta", inst, _beta_steps(inst.ctx, dom, cod, body, arg, universe=False))


def _derive_pi_eta(inst: EquationInstance, checker: Checker) -> Chain:
    found = _bind("Pi-eta", inst)
    dom, fam = _pi_parts(inst.ctx, found["t"], checker)
    return _chain("Pi-eta", inst, [Step(inst.right, _by("Pi-eta'", inst.ctx, ("[p+][<q>]",), A=dom, B=fam))])


DERIVATIONS: Dict[str, Callable[[EquationInstance, Checker], Chain]] = {
    "[p][+]ty": _derive_p_plus_ty,
    "[p][<>]ty": _derive_p_single_ty,
    "[p][+]tm": _derive_p_plus_tm,
    "q[+]": _derive_q_plus,
    "[p][<>]tm": _derive_p_single_tm,
    "q[<>]": _derive_q_single,
    "Pi-beta-U": _derive_pi_beta_u,
    "[<>][]": _derive_single_sub,
    "[p+][<q>]": _derive_p_plus_q,
    "app[]": _derive_app,
    "Pi-beta": _derive_pi_beta,
    "Pi-eta": _derive_pi_eta,
}


# Built-in instances

_BASE = Ctx((U(0),))
_FAM = El(Q())
_ELEM = _BASE.extend(_FAM)
_FAM_UP = TySub(_FAM, P())


def _canonical_instances() -> Dict[str, EquationInstance]:
    """One small instance per derivable equation, over ``U 0`` and ``El q``."""
    lifted = _ELEM.extend(_FAM_UP)
    fn_ty = Pi(_FAM, _FAM_UP)
    with_fn = _ELEM.extend(Pi(_FAM_UP, TySub(_FAM_UP, P())))
    app_left = TmSub(App(Q(), var(1)), P())
    app_ctx = with_fn.extend(U(0))
    instances = [
        EquationInstance("[p][+]ty", lifted, TySub(TySub(fn_ty, P()), Plus(P())), TySub(TySub(fn_ty, P()), P())),
        EquationInstance(
            "[p][+]tm",
            lifted,
            TmSub(TmSub(Lam(Q()), P()), Plus(P())),
            TmSub(TmSub(Lam(Q()), P()), P()),
            TySub(TySub(fn_ty, P()), P()),
        ),
        EquationInstance("q[+]", lifted, TmSub(Q(), Plus(P())), Q(), TySub(TySub(_FAM, P()), P())),
        EquationInstance("[p][<>]ty", _ELEM, TySub(TySub(El(var(1)), P()), Single(Q())), El(var(1))),
        EquationInstance("[p][<>]tm", _ELEM, TmSub(TmSub(Q(), P()), Single(Q())), Q(), _FAM_UP),
        EquationInstance("q[<>]", _ELEM, TmSub(Q(), Single(Q())), Q(), _FAM_UP),
        EquationInstance("Pi-beta-U", _ELEM, App(Lam(var(2)), Q()), TmSub(var(2), Single(Q())), U(0)),
        EquationInstance(
            "[<>][]",
            _ELEM.extend(U(0)),
            TySub(TySub(El(var(2)), Single(Q())), P()),
            TySub(TySub(El(var(2)), Plus(P())), Single(TmSub(Q(), P()))),
        ),
        EquationInstance("[p+][<q>]", _ELEM, TySub(TySub(El(var(1)), Plus(P())), Single(Q())), El(var(1))),
        EquationInstance("app[]", app_ctx, app_left, App(TmSub(Q(), P()), TmSub(var(1), P()))),
        EquationInstance(
            "Pi-beta", _ELEM, App(Lam(Q()), Q()), TmSub(Q(), Single(Q())), TySub(TySub(_FAM_UP, P()), Single(Q()))
        ),
        EquationInstance(
            "Pi-eta", _BASE.extend(fn_ty), Q(), Lam(App(TmSub(Q(), P()), Q())), TySub(fn_ty, P())
        ),
    ]
    return {inst.name: inst for inst in instances}


CANONICAL_INSTANCES = _canonical_instances()


# Entry points


def derive_full_axiom(
    name: str, inst: Optional[EquationInstance] = None, checker: Optional[Checker] = None
) -> Chain:
    """Build the chain proving ``name`` (at ``inst`` or a built-in instance)."""
    if name not in DERIVATIONS:
        raise ValueError(f"Unknown derivable equation: {name}")
    return DERIVATIONS[name](inst or CANONICAL_INSTANCES[name], checker or DEFAULT_CHECKER)


def certify(
    name: str,
    inst: Optional[EquationInstance] = None,
    checker: Optional[Checker] = None,
    allowed: Optional[Iterable[str]] = None,
) -> Verdict:
    """Derive ``name`` and replay it, by default using only what precedes it."""
    try:
        chain = derive_full_axiom(name, inst, checker)
    except IllFormed as err:
        return Verdict(False, f"cannot build the chain for {name}: {err}")
    return replay(chain, allowed_before(name) if allowed is None else allowed, checker)


def derive_all(checker: Optional[Checker] = None) -> Dict[str, Verdict]:
    """Certify every dropped equation on its built-in instance, in order."""
    verdicts: Dict[str, Verdict] = {}
    proven: set = set()
    for name in DERIVATION_ORDER:
        verdicts[name] = certify(name, checker=checker, allowed=frozenset(MINIMISED_AXIOMS) | proven)
        if verdicts[name]:
            proven.add(name)
        _LOGGER.debug("%s: %s", name, "replayed" if verdicts[name] else verdicts[name].diagnostic)
    return verdicts


def _beta_cond_instance(gen: "TermGenerator") -> EquationInstance:
    ctx = gen.gen_ctx(gen.rng.randint(0, 2))
    level = gen.level()
    inner = ctx.extend(gen.gen_ty(ctx, level))
    cod = gen.gen_ty(inner, level)
    body = gen.gen_tm(inner, cod)
    return EquationInstance("Pi-beta'", inner, App(TmSub(Lam(body), P()), Q()), body, cod)


def _admit_beta_cond(gen: "TermGenerator", count: int) -> EquationReport:
    report = EquationReport("Pi-beta'")
    for _ in range(count):
        try:
            inst = _beta_cond_instance(gen)
        except (IllFormed, Exhausted) as err:
            _LOGGER.debug("Skipping Pi-beta' sample: %s", err)
            report.skipped += 1
            continue
        try:
            accepted = check_equation(inst, gen.checker)
        except IllFormed as err:
            _LOGGER.debug("Instance of Pi-beta' rejected: %s", err)
            accepted = False
        report.record(accepted, inst.describe)
    return report


def equivalence_check(gen: "TermGenerator", count: int) -> Dict[str, List[EquationReport]]:
    """Both directions of interderivability on ``count`` samples per equation.

    ``derived`` replays the chain of every dropped equation at sampled
    instances; ``admitted`` decides every minimised axiom with the normaliser.
    """
    derived = verify_equations(
        gen, count, FULL_ONLY_AXIOMS, decide=lambda inst: certify(inst.name, inst, gen.checker).ok
    )
    axioms = [name for name in MINIMISED_AXIOMS if name != "Pi-beta'"]
    admitted = verify_equations(gen, count, [ADMITTED_AS.get(name, name) for name in axioms])
    for axiom, report in zip(axioms, admitted):
        report.name = axiom
    admitted.append(_admit_beta_cond(gen, count))
    _LOGGER.info(
        "Derived %s of %s dropped equations, admitted %s of %s axioms",
        sum(report.ok for report in derived),
        len(derived),
        sum(report.ok for report in admitted),
        len(admitted),
    )
    return {"derived": derived, "admitted": admitted}


def allowed_for(chain: Chain) -> frozenset:
    """Rules a chain may cite: those preceding it, or everything derivable."""
    if chain.name in DERIVED_RULES:
        return allowed_before(chain.name)
    return frozenset(RULES)


# Chain declarations


def _value_sexp(value: Any) -> SExp:
    return str(value) if isinstance(value, int) else to_sexp(value)


def chain_to_sexp(chain: Chain) -> SExp:
    """``(chain <ctx> <start> (step <expr> <rule> (with k v)... (by r...) (in <ctx>))...)``."""
    steps: List[SExp] = []
    for step in chain.steps:
        item: List[SExp] = ["step", to_sexp(step.expr), step.by.rule]
        item += [["with", key, _value_sexp(value)] for key, value in step.by.params.items()]
        if step.by.discharge:
            item.append(["by", *step.by.discharge])
        if step.by.ctx is not None:
            item.append(["in", to_sexp(step.by.ctx)])
        steps.append(item)
    return ["chain", to_sexp(chain.ctx), to_sexp(chain.start), *steps]


def _value(sx: SExp) -> Any:
    if isinstance(sx, str) and sx.isdigit():
        return int(sx)
    return to_entity(sx)


def _step_from_sexp(sx: SExp) -> Step:
    if isinstance(sx, str) or len(sx) < 3 or sx[0] != "step" or not isinstance(sx[2], str):
        raise ParseError(f"expected (step <expr> <rule> ...), got {dump(sx)}")
    params: Dict[str, Any] = {}
    discharge: Tuple[str, ...] = ()
    ctx = None
    for extra in sx[3:]:
        head = extra[0] if isinstance(extra, list) and extra else None
        if head == "with" and len(extra) == 3 and isinstance(extra[1], str):
            params[extra[1]] = _value(extra[2])
        elif head == "by" and all(isinstance(rule, str) for rule in extra[1:]):
            discharge = tuple(extra[1:])
        elif head == "in" and len(extra) == 2:
            ctx = to_ctx(extra[1])
        else:
            raise ParseError(f"unexpected step annotation: {dump(extra)}")
    return Step(_value(sx[1]), Justification(sx[2], params, discharge, ctx))


def chain_from_sexp(name: str, sx: SExp) -> Chain:
    if isinstance(sx, str) or len(sx) < 3 or sx[0] != "chain":
        raise ParseError(f"expected (chain <ctx> <start> <step>...), got {dump(sx)}")
    return Chain(name, to_ctx(sx[1]), _value(sx[2]), tuple(_step_from_sexp(step) for step in sx[3:]))
