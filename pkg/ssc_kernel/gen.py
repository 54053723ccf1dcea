"""Type-directed random generation of well-typed syntax."""

from __future__ import annotations

import dataclasses
import logging
import random
from typing import Callable, Dict, List, Optional, Tuple, TypeVar

import voluptuous as vol

from .const import (
    DEFAULT_DEPTH,
    DEFAULT_MAX_LEVEL,
    DEFAULT_SEED,
    DEFAULT_TEL,
    DEFAULT_WEIGHTS,
    GEN_RETRIES,
    MAX_DEPTH,
    MAX_TEL,
    WRAPPER_PROBABILITY,
)
from .core import DEFAULT_CHECKER, Checker
from .errors import Exhausted, IllFormed
from .eval import VEl, VLift, VPi, VSigma, VTop, VU, eval_tm, nf_ty, pullback_ty, quote_ty, whnf_ty
from .syntax import (
    EMPTY,
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
    var,
    weaken_ty,
)
from .tel import Tel

_LOGGER = logging.getLogger(__name__)

T = TypeVar("T")


def _valid_weights(value):
    if not isinstance(value, dict):
        raise vol.Invalid("weights must be a mapping")
    unknown = set(value) - set(DEFAULT_WEIGHTS)
    if unknown:
        raise vol.Invalid(f"Unknown constructor weights: {sorted(unknown)}")
    weights = dict(DEFAULT_WEIGHTS)
    for name, weight in value.items():
        if not isinstance(weight, (int, float)) or weight < 0:
            raise vol.Invalid(f"weight for {name} must be a non-negative number")
        weights[name] = float(weight)
    if not any(weights.values()):
        raise vol.Invalid("weights must not all be zero")
    return weights


GEN_CONFIG_SCHEMA = vol.Schema(
    {
        vol.Required("max_depth", default=DEFAULT_DEPTH): vol.All(int, vol.Range(min=1, max=MAX_DEPTH)),
        vol.Required("max_level", default=DEFAULT_MAX_LEVEL): vol.All(int, vol.Range(min=0)),
        vol.Required("seed", default=DEFAULT_SEED): vol.All(int, vol.Range(min=0, max=2**64 - 1)),
        vol.Required("weights", default=dict(DEFAULT_WEIGHTS)): _valid_weights,
        vol.Optional("max_tel", default=DEFAULT_TEL): vol.All(int, vol.Range(min=0, max=MAX_TEL)),
        vol.Optional("wrapper_probability", default=WRAPPER_PROBABILITY): vol.All(
            vol.Coerce(float), vol.Range(min=0.0, max=1.0)
        ),
    }
)


@dataclasses.dataclass(frozen=True)
class GenConfig:
    max_depth: int = DEFAULT_DEPTH
    max_level: int = DEFAULT_MAX_LEVEL
    seed: int = DEFAULT_SEED
    weights: Dict[str, float] = dataclasses.field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    max_tel: int = DEFAULT_TEL
    wrapper_probability: float = WRAPPER_PROBABILITY

    @classmethod
    def from_dict(cls, data: Optional[dict] = None) -> "GenConfig":
        """Validate raw options; raises ``vol.Invalid``."""
        return cls(**GEN_CONFIG_SCHEMA(dict(data or {})))


class TermGenerator:
    """Seeded generator; every output typechecks."""

    def __init__(self, config: Optional[GenConfig] = None, checker: Optional[Checker] = None):
        self.config = config or GenConfig()
        self.checker = checker or DEFAULT_CHECKER
        self._rng = random.Random(self.config.seed)

    @property
    def rng(self) -> random.Random:
        return self._rng

    # Helpers

    def _retry(self, what: str, build: Callable[[], T], accept: Callable[[T], None]) -> T:
        for attempt in range(GEN_RETRIES):
            try:
                result = build()
                accept(result)
                return result
            except (IllFormed, Exhausted) as err:
                _LOGGER.debug("Resampling %s (attempt %s): %s", what, attempt + 1, err)
        raise Exhausted(f"no {what} found after {GEN_RETRIES} attempts")

    def _pick(self, options: List[str]) -> str:
        weights = [self.config.weights.get(name, 1.0) for name in options]
        if not any(weights):
            weights = [1.0] * len(options)
        return self._rng.choices(options, weights=weights)[0]

    def _wrap(self) -> bool:
        return self._rng.random() < self.config.wrapper_probability

    def _variables(self, ctx: Ctx) -> List[Tuple[Tm, Ty]]:
        """Variables of ``ctx`` with their normal-form types."""
        out = []
        for k in range(len(ctx)):
            entry = ctx.entries[len(ctx) - 1 - k]
            out.append((var(k), nf_ty(ctx, weaken_ty(entry, k + 1))))
        return out

    def level(self) -> int:
        return self._rng.randint(0, self.config.max_level)

    # Types

    def gen_ty(self, ctx: Ctx = EMPTY, level: Optional[int] = None, depth: Optional[int] = None) -> Ty:
        """A type over ``ctx``; at ``level`` when given."""
        depth = self.config.max_depth if depth is None else max(depth, 1)
        chosen = self.level() if level is None else level
        return self._retry(
            "type",
            lambda: self.gen_ty_at(ctx, chosen, depth),
            lambda ty: self._expect_level(ctx, ty, chosen),
        )

    def _expect_level(self, ctx: Ctx, ty: Ty, level: int) -> None:
        got = self.checker.infer_ty_level(ctx, ty)
        if got != level:
            raise IllFormed(f"generated type at level {got}, wanted {level}")

    def gen_ty_at(self, ctx: Ctx, level: int, depth: int) -> Ty:
        if depth <= 1:
            return U(level - 1) if level > 0 else Top()
        if len(ctx) and self._wrap():
            wrapped = self._gen_ty_wrapper(ctx, level, depth)
            if wrapped is not None:
                return wrapped
        options = ["Pi", "Sigma"]
        if level > 0:
            options += ["U", "Lift"]
        else:
            options.append("Top")
        codes = [v for v, ty in self._variables(ctx) if ty == U(level)]
        if codes:
            options.append("El")
        match self._pick(options):
            case "U":
                return U(level - 1)
            case "Top":
                return Top()
            case "Lift":
                return Lift(self.gen_ty_at(ctx, level - 1, depth - 1))
            case "El":
                return El(self._rng.choice(codes))
            case former:
                first = self.gen_ty_at(ctx, level, depth - 1)
                second = self.gen_ty_at(ctx.extend(first), level, depth - 1)
                return Pi(first, second) if former == "Pi" else Sigma(first, second)

    def _gen_ty_wrapper(self, ctx: Ctx, level: int, depth: int) -> Optional[Ty]:
        sub = self.gen_sub(ctx, depth - 1)
        try:
            cod = self.checker.wf_sub(ctx, sub)
        except IllFormed:
            return None
        return TySub(self.gen_ty_at(cod, level, depth - 1), sub)

    # Substitutions

    def gen_sub(self, dom: Ctx, depth: Optional[int] = None) -> Sub:
        """A single substitution out of ``dom``."""
        depth = self.config.max_depth if depth is None else max(depth, 1)
        options = ["single"]
        if len(dom):
            options += ["p", "plus"]
        kind = self._rng.choice(options)
        if kind == "p":
            return P()
        if kind == "plus":
            inner = self.gen_sub(dom.drop(), depth - 1)
            candidate = Plus(inner)
            try:
                self.checker.wf_sub(dom, candidate)
                return candidate
            except IllFormed:
                _LOGGER.debug("Lifted substitution does not fit, falling back to p")
                return P()
        return Single(self.gen_payload(dom, depth))

    def gen_payload(self, ctx: Ctx, depth: int) -> Tm:
        """A term whose type can be synthesised."""
        options = ["code", "tt"]
        if len(ctx):
            options += ["var", "elim"]
        if depth > 1:
            options += ["pair", "proj", "term"]
        match self._rng.choice(options):
            case "var":
                return var(self._rng.randrange(len(ctx)))
            case "code":
                return Code(self.gen_ty_at(ctx, self._rng.randint(0, max(self.config.max_level - 1, 0)), max(depth - 1, 1)))
            case "elim":
                found = self._gen_elim(ctx, depth)
                if found is not None:
                    return found
            case "pair":
                return Pair(self.gen_payload(ctx, depth - 1), self.gen_payload(ctx, depth - 1))
            case "proj":
                inner, other = self.gen_payload(ctx, depth - 1), self.gen_payload(ctx, depth - 1)
                return self._rng.choice([Un(Mk(inner)), Fst(Pair(inner, other)), Snd(Pair(other, inner))])
            case "term":
                return self._retry("payload", lambda: self._gen_typed(ctx, depth - 1), self._accept_payload(ctx))[1]
        return Tt()

    def _gen_typed(self, ctx: Ctx, depth: int) -> Tuple[Ty, Tm]:
        ty = self.gen_ty_at(ctx, self.level(), depth)
        return ty, self.gen_tm_at(ctx, ty, depth)

    def _accept_payload(self, ctx: Ctx) -> Callable[[Tuple[Ty, Tm]], None]:
        def accept(pair: Tuple[Ty, Tm]) -> None:
            ty, tm = pair
            self.checker.check(ctx, tm, ty)
            self.checker.synth(ctx, tm)

        return accept

    def _gen_elim(self, ctx: Ctx, depth: int) -> Optional[Tm]:
        """An application, projection or ``un`` on a variable."""
        heads = []
        for head, ty in self._variables(ctx):
            scope, val = whnf_ty(ctx, ty)
            if isinstance(val, (VPi, VSigma, VLift)):
                heads.append((head, scope, val))
        if not heads:
            return None
        head, scope, val = self._rng.choice(heads)
        match val:
            case VPi(dom, _):
                return App(head, self.gen_tm(ctx, quote_ty(scope, dom), depth - 1))
            case VSigma():
                return Fst(head) if self._rng.random() < 0.5 else Snd(head)
        return Un(head)

    # Terms

    def gen_tm(self, ctx: Ctx, ty: Ty, depth: Optional[int] = None) -> Tm:
        depth = self.config.max_depth if depth is None else max(depth, 1)
        return self._retry(
            "term",
            lambda: self.gen_tm_at(ctx, ty, depth),
            lambda tm: self.checker.check(ctx, tm, ty),
        )

    def gen_tm_at(self, ctx: Ctx, ty: Ty, depth: int) -> Tm:
        scope, val = whnf_ty(ctx, ty)
        if len(ctx) and depth > 1 and self._wrap():
            wrapped = self._gen_tm_wrapper(ctx, ty, depth)
            if wrapped is not None:
                return wrapped
        if depth > 1 and self._rng.random() < self._redex_chance():
            redex = self._gen_redex(ctx, ty, depth)
            if redex is not None:
                return redex
        matching = [v for v, vty in self._variables(ctx) if vty == quote_ty(scope, val)]
        if matching and (isinstance(val, VEl) or self._pick(["var", "intro"]) == "var"):
            return self._rng.choice(matching)
        match val:
            case VPi(dom, cod):
                dom_ty = quote_ty(scope, dom)
                cod_ty = quote_ty(scope.bind(dom), cod.ty(scope.fresh()))
                return Lam(self.gen_tm_at(ctx.extend(dom_ty), cod_ty, depth - 1))
            case VSigma(first, second):
                a = self.gen_tm_at(ctx, quote_ty(scope, first), depth - 1)
                b_ty = quote_ty(scope, second.ty(eval_tm(scope.env, a)))
                return Pair(a, self.gen_tm_at(ctx, b_ty, depth - 1))
            case VTop():
                return Tt()
            case VLift(inner):
                return Mk(self.gen_tm_at(ctx, quote_ty(scope, inner), depth - 1))
            case VU(level):
                return Code(self.gen_ty_at(ctx, level, max(depth - 1, 1)))
        raise Exhausted(f"no inhabitant of a neutral type in a context of length {len(ctx)}")

    def _redex_chance(self) -> float:
        total = sum(self.config.weights.values())
        return self.config.weights.get("redex", 0.0) / total if total else 0.0

    def _gen_redex(self, ctx: Ctx, ty: Ty, depth: int) -> Optional[Tm]:
        arg = self.gen_payload(ctx, depth - 1)
        arg_ty = self.checker.synth(ctx, arg)
        body = self.gen_tm_at(ctx.extend(arg_ty), weaken_ty(ty), depth - 1)
        return App(Lam(body), arg)

    def _gen_tm_wrapper(self, ctx: Ctx, ty: Ty, depth: int) -> Optional[Tm]:
        if self._rng.random() < 0.5:
            try:
                inner_ty = pullback_ty(ctx, P(), ctx.drop(), ty)
            except IllFormed:
                return None
            return TmSub(self.gen_tm_at(ctx.drop(), inner_ty, depth - 1), P())
        arg = var(self._rng.randrange(len(ctx)))
        arg_ty = self.checker.infer(ctx, arg)
        body = self.gen_tm_at(ctx.extend(arg_ty), weaken_ty(ty), depth - 1)
        return TmSub(body, Single(arg))

    # Contexts and telescopes

    def gen_ctx(self, length: int, depth: Optional[int] = None) -> Ctx:
        ctx = EMPTY
        for _ in range(length):
            ctx = ctx.extend(self.gen_ty(ctx, depth=depth))
        return ctx

    def gen_tel(self, ctx: Ctx, length: Optional[int] = None, depth: Optional[int] = None) -> Tel:
        if length is None:
            length = self._rng.randint(0, self.config.max_tel)
        entries: List[Ty] = []
        for _ in range(length):
            entries.append(self.gen_ty(ctx.extend(*entries), depth=depth))
        return Tel(ctx, tuple(entries))

    def gen_closed(self, depth: Optional[int] = None) -> Tuple[Ty, Tm]:
        """A closed type with one of its inhabitants."""

        def build():
            ty = self.gen_ty(EMPTY, depth=depth)
            return ty, self.gen_tm(EMPTY, ty, depth=depth)

        return self._retry("closed pair", build, lambda pair: None)
