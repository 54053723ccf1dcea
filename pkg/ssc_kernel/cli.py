"""Command line front end: ``ssc <verb> ...``.

Exit codes are 0 on success, 1 when a judgment, equation or chain fails and
2 on parse or usage errors. Human-readable output goes through the Jinja2
templates next to this module; ``--json`` prints the same verdicts as JSON.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from collections import Counter
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import voluptuous as vol
from jinja2 import Environment, FileSystemLoader

from . import __version__
from .alphanorm import alpha_norm_tm, alpha_norm_ty
from .const import (
    CWF_LAWS,
    DEFAULT_COUNT,
    DEFAULT_DEPTH,
    DEFAULT_SEED,
    EXIT_FAILURE,
    EXIT_OK,
    EXIT_USAGE,
    KIND_CHAIN,
    KIND_CTX,
    KIND_SUB,
    KIND_TM,
    KIND_TY,
    MAX_DEPTH,
    MAX_TEL,
    MINIM_COUNT,
    STATUS_ERROR,
    STATUS_FAIL,
    STATUS_OK,
    TERMIFY_COUNT,
    TRANSLATE_TO_CWF,
    TRANSLATE_TO_SSC,
    VERB_CHECK,
    VERB_CONV,
    VERB_MINIM,
    VERB_NORMALIZE,
    VERB_ROUNDTRIP,
    VERB_TERMIFY,
    VERB_TRANSLATE,
    VERB_VERIFY,
    VERIFY_EQUATIONS,
    VERIFY_LIFTED,
    VERIFY_TARGETS,
)
from .core import DEFAULT_CHECKER, Checker
from .cwf import (
    CWF_CHECKER,
    DIRECTIONS,
    cwf_to_ssc,
    ssc_to_cwf,
    verify_cwf_syntax_laws,
    verify_roundtrips,
    verify_contextual_iso,
    verify_translated_equations,
)
from .equations import EquationReport, verify_equations
from .errors import KernelError, ParseError, UsageError, Verdict
from .eval import conv_sub, conv_tm, conv_ty, normalize_tm, normalize_ty
from .gen import GenConfig, TermGenerator
from .minim import (
    DERIVATION_ORDER,
    Chain,
    allowed_before,
    allowed_for,
    chain_from_sexp,
    corrupt_chain,
    derive_all,
    derive_full_axiom,
    equivalence_check,
    replay,
)
from .par import Tms, tms_inst_tm, tms_inst_ty, tms_to_csub
from .sexpr import Decl, parse_decls, show, sort_of, to_entity, to_tms, to_ty
from .syntax import EMPTY, CSub, Ctx, Syntax, Ty, walk
from .tel import verify_lifted
from .termify import EMITTERS, TermifiedModel, emit, sample_termify_instance, verify_cwf_laws

_LOGGER = logging.getLogger(__name__)

TEMPLATE_DIR = os.path.join(os.path.dirname(__file__), "templates")

SAMPLING_SCHEMA = vol.Schema(
    {
        vol.Required("count", default=DEFAULT_COUNT): vol.All(vol.Coerce(int), vol.Range(min=0)),
        vol.Required("seed", default=DEFAULT_SEED): vol.Coerce(int),
        vol.Required("depth", default=DEFAULT_DEPTH): vol.All(vol.Coerce(int), vol.Range(min=1, max=MAX_DEPTH)),
        vol.Optional("tel"): vol.Any(None, vol.All(vol.Coerce(int), vol.Range(min=0, max=MAX_TEL))),
    },
    extra=vol.REMOVE_EXTRA,
)

TERMIFY_ISO = "iso"
TERMIFY_LAWS = ["all"] + CWF_LAWS + ["erasure", TERMIFY_ISO]

_ENV: Optional[Environment] = None


def _env() -> Environment:
    global _ENV
    if _ENV is None:
        _ENV = Environment(
            loader=FileSystemLoader(TEMPLATE_DIR),
            trim_blocks=False,
            keep_trailing_newline=True,
        )
    return _ENV


def render(template: str, **context: Any) -> str:
    return _env().get_template(template).render(**context).rstrip("\n")


@dataclasses.dataclass
class Outcome:
    """What a verb produced: printed text plus the machine-readable verdict."""

    verb: str
    ok: bool
    text: str
    counterexample: Optional[str] = None
    details: Dict[str, Any] = dataclasses.field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.ok else EXIT_FAILURE

    def as_json(self) -> Dict[str, Any]:
        return {
            "verb": self.verb,
            "status": STATUS_OK if self.ok else STATUS_FAIL,
            "counterexample": self.counterexample,
            "details": self.details,
        }


# Declaration files


@dataclasses.dataclass
class Entry:
    """A declaration elaborated in the context current at its position."""

    decl: Decl
    ctx: Ctx
    entity: Any
    ty: Optional[Ty] = None

    @property
    def name(self) -> str:
        return self.decl.name

    @property
    def kind(self) -> str:
        return self.decl.kind


def _elaborate(decl: Decl, ctx: Ctx) -> Entry:
    if decl.kind == KIND_CHAIN:
        return Entry(decl, ctx, chain_from_sexp(decl.name, decl.payload))
    sort = sort_of(decl.payload)
    if (KIND_SUB if sort == "tms" else sort) != decl.kind:
        raise ParseError(f"{decl.name} is declared {decl.kind} but its payload is a {sort}")
    if sort == "tms":
        return Entry(decl, ctx, Tms(tuple(to_tms(decl.payload)), len(ctx)))
    ty = to_ty(decl.annotation) if decl.annotation is not None else None
    return Entry(decl, ctx, to_entity(decl.payload), ty)


def load_entries(path: str) -> List[Entry]:
    """Parse ``path``; every declaration lives in the latest ``ctx`` before it."""
    with open(path, "r", encoding="utf-8") as f:
        decls = parse_decls(f.read())
    entries: List[Entry] = []
    ctx = EMPTY
    for decl in decls:
        entry = _elaborate(decl, ctx)
        if decl.kind == KIND_CTX:
            ctx = entry.entity
        entries.append(entry)
    _LOGGER.debug("Loaded %s declarations from %s", len(entries), path)
    return entries


def uses_cwf(*nodes: Any) -> bool:
    """Whether any of ``nodes`` mentions a CwF substitution."""
    for node in nodes:
        items = node.entries if isinstance(node, Ctx) else (node,)
        for item in items:
            if isinstance(item, Syntax) and any(isinstance(sub, CSub) for sub in walk(item)):
                return True
    return False


def checker_for(*nodes: Any) -> Checker:
    return CWF_CHECKER if uses_cwf(*nodes) else DEFAULT_CHECKER


def _as_sub(entity: Any) -> Any:
    return tms_to_csub(entity) if isinstance(entity, Tms) else entity


def _row(name: str, verdict: Verdict, info: str = "") -> Dict[str, Any]:
    return {"name": name, "ok": verdict.ok, "info": info, "diagnostic": verdict.diagnostic}


def _rows_outcome(verb: str, rows: List[Dict[str, Any]], title: Optional[str] = None) -> Outcome:
    failed = [row for row in rows if not row["ok"]]
    return Outcome(
        verb,
        not failed,
        render("verdicts.j2", title=title, verdicts=rows),
        counterexample=failed[0]["name"] if failed else None,
        details={"verdicts": rows},
    )


# check


def judge(entry: Entry) -> Tuple[Verdict, str]:
    """The judgment a declaration asserts, with a short description of what was found."""
    ctx, entity = entry.ctx, _as_sub(entry.entity)
    if entry.kind == KIND_CTX:
        return checker_for(entity).wf_ctx(entity), ""
    if entry.kind == KIND_CHAIN:
        return replay(entity, allowed_for(entity), checker_for(entity.ctx)), f"{len(entity.steps)} steps"
    checker = checker_for(ctx, entity, entry.ty)
    try:
        if entry.kind == KIND_TY:
            return Verdict(True), f"type at level {checker.infer_ty_level(ctx, entity)}"
        if entry.kind == KIND_TM and entry.ty is not None:
            checker.infer_ty_level(ctx, entry.ty)
            return checker.check_tm(ctx, entity, entry.ty), f": {show(entry.ty)}"
        if entry.kind == KIND_TM:
            return Verdict(True), f": {show(checker.infer(ctx, entity))}"
        return Verdict(True), f"into {show(checker.wf_sub(ctx, entity))}"
    except KernelError as err:
        return Verdict(False, str(err)), ""


def cmd_check(args: argparse.Namespace) -> Outcome:
    rows = []
    for entry in load_entries(args.file):
        verdict, info = judge(entry)
        _LOGGER.debug("%s: %s", entry.name, "ok" if verdict else verdict.diagnostic)
        rows.append(_row(entry.name, verdict, info if verdict else ""))
    return _rows_outcome(VERB_CHECK, rows)


# normalize


def normal_form(entry: Entry, alpha: bool = False) -> Syntax:
    ctx, entity = entry.ctx, entry.entity
    checker = checker_for(ctx, entity, entry.ty)
    if entry.kind == KIND_TY:
        return alpha_norm_ty(ctx, entity, checker) if alpha else normalize_ty(ctx, entity, checker)
    ty = entry.ty if entry.ty is not None else checker.infer(ctx, entity)
    return alpha_norm_tm(ctx, entity, ty, checker) if alpha else normalize_tm(ctx, entity, ty, checker)


def normal_form_via_tms(entry: Entry, ts: Tms, dom: Ctx, cod: Ctx) -> Syntax:
    """Instantiate an entity living over ``cod`` by ``ts`` and normalise over ``dom``."""
    entity = entry.entity
    checker = checker_for(cod, entity, entry.ty)
    if entry.kind == KIND_TY:
        checker.infer_ty_level(cod, entity)
        return normalize_ty(dom, tms_inst_ty(entity, ts))
    ty = entry.ty if entry.ty is not None else checker.infer(cod, entity)
    checker.check(cod, entity, ty)
    return normalize_tm(dom, tms_inst_tm(entity, ts), tms_inst_ty(ty, ts))


def cmd_normalize(args: argparse.Namespace) -> Outcome:
    rows = []
    substitution: Optional[Tuple[Tms, Ctx, Ctx]] = None
    for entry in load_entries(args.file):
        if args.via == "tms" and isinstance(entry.entity, Tms):
            dom = entry.ctx
            try:
                substitution = (entry.entity, dom, CWF_CHECKER.wf_sub(dom, tms_to_csub(entry.entity)))
            except KernelError as err:
                rows.append(_row(entry.name, Verdict(False, str(err))))
            continue
        if entry.kind not in (KIND_TY, KIND_TM):
            continue
        try:
            if args.via == "tms":
                if substitution is None:
                    raise UsageError(f"{entry.name}: --via tms needs a (tms ...) declaration before it")
                result = normal_form_via_tms(entry, *substitution)
            else:
                result = normal_form(entry, args.alpha)
        except KernelError as err:
            rows.append(_row(entry.name, Verdict(False, str(err))))
            continue
        rows.append(_row(entry.name, Verdict(True), show(result)))
    return _rows_outcome(VERB_NORMALIZE, rows)


# conv


def decide_conv(left: Entry, right: Entry) -> bool:
    """Convertibility of two declarations of the same kind and context."""
    if left.kind != right.kind:
        raise UsageError(f"cannot compare a {left.kind} with a {right.kind}")
    if left.ctx != right.ctx:
        raise UsageError(f"{left.name} and {right.name} live in different contexts")
    ctx, lhs, rhs = left.ctx, _as_sub(left.entity), _as_sub(right.entity)
    checker = checker_for(ctx, lhs, rhs, left.ty, right.ty)
    if left.kind == KIND_TY:
        return conv_ty(ctx, lhs, rhs, checker)
    if left.kind == KIND_TM:
        ty = left.ty or right.ty or checker.infer(ctx, lhs)
        return conv_tm(ctx, lhs, rhs, ty, checker)
    return conv_sub(ctx, lhs, rhs, checker.wf_sub(ctx, lhs), checker)


def cmd_conv(args: argparse.Namespace) -> Outcome:
    subjects = [entry for entry in load_entries(args.file) if entry.kind in (KIND_TY, KIND_TM, KIND_SUB)]
    if len(subjects) != 2:
        raise UsageError(f"conv expects two ty, tm or sub declarations, found {len(subjects)}")
    left, right = subjects
    diagnostic = ""
    try:
        same = decide_conv(left, right)
    except KernelError as err:
        same, diagnostic = False, str(err)
    text = "convertible" if same else "not convertible"
    if diagnostic:
        text = f"{text}: {diagnostic}"
    return Outcome(
        VERB_CONV,
        same,
        text,
        counterexample=None if same else f"{show(left.entity)} vs {show(right.entity)}",
        details={"left": left.name, "right": right.name, "diagnostic": diagnostic},
    )


# translate


def translate(entry: Entry, target: str) -> Any:
    entity = entry.entity
    if target == TRANSLATE_TO_CWF:
        return tms_to_csub(entity) if isinstance(entity, Tms) else ssc_to_cwf(entity)
    if isinstance(entity, Ctx):
        return cwf_to_ssc(entity)
    return cwf_to_ssc(_as_sub(entity), len(entry.ctx))


def cmd_translate(args: argparse.Namespace) -> Outcome:
    rows = []
    for entry in load_entries(args.file):
        if entry.kind == KIND_CHAIN:
            continue
        try:
            rows.append(_row(entry.name, Verdict(True), show(translate(entry, args.to))))
        except KernelError as err:
            rows.append(_row(entry.name, Verdict(False, str(err))))
    return _rows_outcome(VERB_TRANSLATE, rows)


# Sampling verbs


def sampling_options(args: argparse.Namespace) -> Dict[str, Any]:
    """Validate the sampling flags; raises ``vol.Invalid``."""
    raw = {key: getattr(args, key, None) for key in ("count", "seed", "depth", "tel")}
    return SAMPLING_SCHEMA({key: value for key, value in raw.items() if value is not None})


def generator(options: Dict[str, Any]) -> TermGenerator:
    config = {"seed": options["seed"], "max_depth": options["depth"]}
    if options.get("tel") is not None:
        config["max_tel"] = options["tel"]
    return TermGenerator(GenConfig.from_dict(config))


def _report_row(report: EquationReport) -> Dict[str, Any]:
    row = dataclasses.asdict(report)
    row["status"] = "ok" if report.ok else "FAIL"
    return row


def _reports_outcome(
    verb: str, reports: List[EquationReport], title: Optional[str] = None, coverage: Optional[Counter] = None
) -> Outcome:
    rows = [_report_row(report) for report in reports]
    failed = [report for report in reports if not report.ok]
    pairs = sorted((coverage or Counter()).items())
    details: Dict[str, Any] = {"reports": rows}
    if coverage is not None:
        details["coverage"] = dict(pairs)
    return Outcome(
        verb,
        not failed,
        render("report.j2", title=title, reports=rows, coverage=pairs),
        counterexample=failed[0].counterexample if failed else None,
        details=details,
    )


def cmd_roundtrip(args: argparse.Namespace) -> Outcome:
    options = sampling_options(args)
    gen = generator(options)
    reports, coverage = [], Counter()
    for direction in DIRECTIONS if args.direction == "both" else [args.direction]:
        result = verify_roundtrips(gen, direction, options["count"])
        report = EquationReport(
            f"{direction} roundtrip", result["passed"], result["failed"], 0, result["counterexample"]
        )
        reports.append(report)
        coverage.update(result["coverage"])
    return _reports_outcome(VERB_ROUNDTRIP, reports, coverage=coverage)


def cmd_verify(args: argparse.Namespace) -> Outcome:
    options = sampling_options(args)
    gen = generator(options)
    count = options["count"]
    if args.target == VERIFY_EQUATIONS:
        reports = verify_equations(gen, count)
    elif args.target == VERIFY_LIFTED:
        reports = verify_lifted(gen, count, options.get("tel"))
    else:
        reports = verify_cwf_syntax_laws(gen, count) + verify_translated_equations(gen, count)
    _LOGGER.info("verify %s: %s reports", args.target, len(reports))
    return _reports_outcome(VERB_VERIFY, reports, title=args.target)


# minim


def cmd_minim(args: argparse.Namespace) -> Outcome:
    if args.action == "derive":
        return minim_derive(args.name)
    return minim_verify(args)


def minim_derive(name: str) -> Outcome:
    chain = derive_full_axiom(name)
    verdict = replay(chain, allowed_before(name))
    lines = chain.lines()
    text = "\n".join(
        [
            render("chain.j2", name=chain.name, ctx=show(chain.ctx), reconstructed=chain.reconstructed, lines=lines),
            render("verdicts.j2", verdicts=[_row(name, verdict, "replayed")]),
        ]
    )
    return Outcome(
        VERB_MINIM,
        verdict.ok,
        text,
        counterexample=None if verdict else verdict.diagnostic,
        details={"chain": [{"expr": expr, "by": by} for expr, by in lines], "replayed": verdict.ok},
    )


def _replay_rows(chains: Iterable[Chain]) -> List[Dict[str, Any]]:
    return [_row(chain.name, replay(chain, allowed_for(chain), checker_for(chain.ctx))) for chain in chains]


def minim_verify(args: argparse.Namespace) -> Outcome:
    """Replay chains, then sample both directions of interderivability."""
    options = sampling_options(args)
    reports: List[EquationReport] = []
    if args.file:
        chains = [entry.entity for entry in load_entries(args.file) if entry.kind == KIND_CHAIN]
        if not chains:
            raise UsageError(f"no chain declarations in {args.file}")
        rows = _replay_rows(corrupt_chain(chain) for chain in chains) if args.corrupt else _replay_rows(chains)
    elif args.corrupt:
        rows = _replay_rows(corrupt_chain(derive_full_axiom(name)) for name in DERIVATION_ORDER)
    else:
        rows = [_row(name, verdict, "replayed" if verdict else "") for name, verdict in derive_all().items()]
        if options["count"]:
            result = equivalence_check(generator(options), options["count"])
            reports = result["derived"] + result["admitted"]
    chains_outcome = _rows_outcome(VERB_MINIM, rows, title="chains")
    if not reports:
        return chains_outcome
    sampled = _reports_outcome(VERB_MINIM, reports, title="interderivability")
    return Outcome(
        VERB_MINIM,
        chains_outcome.ok and sampled.ok,
        "\n".join([chains_outcome.text, sampled.text]),
        counterexample=chains_outcome.counterexample or sampled.counterexample,
        details={**chains_outcome.details, **sampled.details},
    )


# termify


def cmd_termify(args: argparse.Namespace) -> Outcome:
    options = sampling_options(args)
    model = TermifiedModel()
    gen = generator(options)
    if args.action == "emit":
        sort, tm = emit(model, args.op, sample_termify_instance(gen, model))
        return Outcome(
            VERB_TERMIFY,
            True,
            f"{args.op} : {show(sort)}\n  := {show(tm)}",
            details={"op": args.op, "sort": show(sort), "term": show(tm)},
        )
    law = vol.In(TERMIFY_LAWS, msg=f"Unknown CwF law: {args.laws}")(args.laws)
    results: Dict[str, Verdict] = {}
    if law != TERMIFY_ISO:
        results.update(verify_cwf_laws(gen, model, options["count"]))
    if law in ("all", TERMIFY_ISO):
        iso = verify_contextual_iso(gen, model, options["count"])
        results.update({f"{TERMIFY_ISO} {name}": verdict for name, verdict in iso.items()})
    else:
        results = {name: verdict for name, verdict in results.items() if name == law}
    return _rows_outcome(VERB_TERMIFY, [_row(name, verdict) for name, verdict in results.items()])


# Parser


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print machine-readable verdicts")
    common.add_argument("-v", "--verbose", action="store_true", help="enable debug logging")
    return common


def _sampling_flags() -> argparse.ArgumentParser:
    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--count", type=int, help="samples per equation or law")
    sampling.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"generator seed (default: {DEFAULT_SEED})")
    sampling.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help=f"maximum term depth (default: {DEFAULT_DEPTH})")
    sampling.add_argument("--tel", type=int, help=f"telescope length, at most {MAX_TEL}")
    return sampling


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssc", description="Typecheck, normalise and verify the single substitution calculus."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common, sampling = _common_flags(), _sampling_flags()
    verbs = parser.add_subparsers(dest="verb", required=True)

    check = verbs.add_parser(VERB_CHECK, parents=[common], help="judge every declaration in a file")
    check.add_argument("file")
    check.set_defaults(handler=cmd_check)

    normalize = verbs.add_parser(VERB_NORMALIZE, parents=[common], help="print normal forms")
    mode = normalize.add_mutually_exclusive_group()
    mode.add_argument("--alpha", action="store_true", help="substitution normal forms only")
    mode.add_argument("--via", choices=["tms"], help="instantiate by the declared parallel substitution first")
    normalize.add_argument("file")
    normalize.set_defaults(handler=cmd_normalize)

    conv = verbs.add_parser(VERB_CONV, parents=[common], help="decide conversion of two declarations")
    conv.add_argument("file")
    conv.set_defaults(handler=cmd_conv)

    translate_ = verbs.add_parser(VERB_TRANSLATE, parents=[common], help="translate between SSC and CwF syntax")
    translate_.add_argument("--to", required=True, choices=[TRANSLATE_TO_CWF, TRANSLATE_TO_SSC])
    translate_.add_argument("file")
    translate_.set_defaults(handler=cmd_translate)

    roundtrip = verbs.add_parser(VERB_ROUNDTRIP, parents=[common, sampling], help="roundtrip generated entities")
    roundtrip.add_argument("--direction", choices=DIRECTIONS + ["both"], default="both")
    roundtrip.set_defaults(handler=cmd_roundtrip, count=DEFAULT_COUNT)

    verify = verbs.add_parser(VERB_VERIFY, parents=[common, sampling], help="check equations on generated instances")
    verify.add_argument("target", choices=VERIFY_TARGETS)
    verify.set_defaults(handler=cmd_verify, count=DEFAULT_COUNT)

    minim = verbs.add_parser(VERB_MINIM, help="derive the dropped equations from the minimised axioms")
    minim_actions = minim.add_subparsers(dest="action", required=True)
    derive = minim_actions.add_parser("derive", parents=[common], help="print the chain for one equation")
    derive.add_argument("name", choices=DERIVATION_ORDER)
    derive.set_defaults(handler=cmd_minim)
    minim_verify_ = minim_actions.add_parser("verify", parents=[common, sampling], help="replay every chain")
    minim_verify_.add_argument("--file", help="replay the chain declarations of a file instead")
    minim_verify_.add_argument("--corrupt", action="store_true", help="replay deliberately broken chains")
    minim_verify_.set_defaults(handler=cmd_minim, count=MINIM_COUNT)

    termify = verbs.add_parser(VERB_TERMIFY, help="build and check the termified model")
    termify_actions = termify.add_subparsers(dest="action", required=True)
    emit_ = termify_actions.add_parser("emit", parents=[common, sampling], help="print one closed definition")
    emit_.add_argument("op", choices=sorted(EMITTERS))
    emit_.set_defaults(handler=cmd_termify, count=TERMIFY_COUNT)
    laws = termify_actions.add_parser("check", parents=[common, sampling], help="check the CwF laws")
    laws.add_argument("--laws", default="all", help="a law name, iso for the contextual isomorphism, or all")
    laws.set_defaults(handler=cmd_termify, count=TERMIFY_COUNT)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        outcome = args.handler(args)
    except (ParseError, UsageError, vol.Invalid, OSError) as err:
        print(f"ssc {args.verb}: error: {err}", file=sys.stderr)
        if args.json:
            payload = {"verb": args.verb, "status": STATUS_ERROR, "counterexample": None, "details": {"error": str(err)}}
            print(json.dumps(payload, indent=2, sort_keys=True))
        return EXIT_USAGE
    except (KernelError, ValueError) as err:
        _LOGGER.error("%s failed: %s", args.verb, err)
        outcome = Outcome(args.verb, False, f"error: {err}", details={"error": str(err)})
    print(json.dumps(outcome.as_json(), indent=2, sort_keys=True) if args.json else outcome.text)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
