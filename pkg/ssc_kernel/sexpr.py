"""S-expression concrete syntax: reader, printer and declaration files."""

from __future__ import annotations

import dataclasses
import logging
from typing import Dict, List, Optional, Union

from .const import DECL_KINDS, KIND_TM
from .errors import ParseError
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
    arrow,
)

_LOGGER = logging.getLogger(__name__)

SExp = Union[str, List["SExp"]]

TY_HEADS = {"U", "El", "Pi", "Sigma", "Lift", "tysub", "->"}
TY_ATOMS = {"Top"}
TM_HEADS = {"tmsub", "lam", "app", "code", "mk", "un", "pair", "fst", "snd"}
TM_ATOMS = {"q", "tt"}
SUB_HEADS = {"single", "plus", "comp", "ext"}
SUB_ATOMS = {"p", "id", "eps"}
KEYWORDS = TY_HEADS | TY_ATOMS | TM_HEADS | TM_ATOMS | SUB_HEADS | SUB_ATOMS | {
    "ctx",
    "tms",
    "def",
    "chain",
    "step",
}


def tokenize(text: str) -> List[tuple]:
    """Split text into ``(token, offset)`` pairs, dropping ``;`` comments."""
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch.isspace():
            i += 1
        elif ch in "()":
            tokens.append((ch, i))
            i += 1
        else:
            start = i
            while i < n and not text[i].isspace() and text[i] not in "();":
                i += 1
            tokens.append((text[start:i], start))
    return tokens


def read_all(text: str) -> List[SExp]:
    """Read every top-level s-expression in ``text``."""
    tokens = tokenize(text)
    pos = 0
    out: List[SExp] = []

    def read_one() -> SExp:
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of input")
        tok, offset = tokens[pos]
        pos += 1
        if tok == "(":
            items: List[SExp] = []
            while True:
                if pos >= len(tokens):
                    raise ParseError("unclosed parenthesis", offset)
                if tokens[pos][0] == ")":
                    pos += 1
                    return items
                items.append(read_one())
        if tok == ")":
            raise ParseError("unexpected ')'", offset)
        return tok

    while pos < len(tokens):
        out.append(read_one())
    return out


def read(text: str) -> SExp:
    """Read exactly one s-expression."""
    items = read_all(text)
    if len(items) != 1:
        raise ParseError(f"expected one expression, found {len(items)}")
    return items[0]


def _head(sx: SExp) -> str:
    if isinstance(sx, str):
        return sx
    if not sx or not isinstance(sx[0], str):
        raise ParseError(f"malformed expression: {dump(sx)}")
    return sx[0]


def _args(sx: SExp, name: str, count: int) -> List[SExp]:
    if isinstance(sx, str) or len(sx) != count + 1:
        raise ParseError(f"'{name}' expects {count} argument(s): {dump(sx)}")
    return sx[1:]


def _level(atom: SExp) -> int:
    if not isinstance(atom, str) or not atom.isdigit():
        raise ParseError(f"expected a universe level, got {dump(atom)}")
    return int(atom)


def to_ty(sx: SExp) -> Ty:
    if sx == "Top":
        return Top()
    head = _head(sx)
    if head == "U":
        return U(_level(_args(sx, head, 1)[0]))
    if head == "El":
        return El(to_tm(_args(sx, head, 1)[0]))
    if head in ("Pi", "Sigma"):
        a, b = _args(sx, head, 2)
        return (Pi if head == "Pi" else Sigma)(to_ty(a), to_ty(b))
    if head == "->":
        a, b = _args(sx, head, 2)
        return arrow(to_ty(a), to_ty(b))
    if head == "Lift":
        return Lift(to_ty(_args(sx, head, 1)[0]))
    if head == "tysub":
        a, s = _args(sx, head, 2)
        return TySub(to_ty(a), to_sub(s))
    raise ParseError(f"not a type: {dump(sx)}")


def to_tm(sx: SExp) -> Tm:
    if sx == "q":
        return Q()
    if sx == "tt":
        return Tt()
    head = _head(sx)
    if head == "tmsub":
        t, s = _args(sx, head, 2)
        return TmSub(to_tm(t), to_sub(s))
    if head == "app":
        t, u = _args(sx, head, 2)
        return App(to_tm(t), to_tm(u))
    if head == "pair":
        t, u = _args(sx, head, 2)
        return Pair(to_tm(t), to_tm(u))
    if head == "code":
        return Code(to_ty(_args(sx, head, 1)[0]))
    unary = {"lam": Lam, "mk": Mk, "un": Un, "fst": Fst, "snd": Snd}
    if head in unary:
        return unary[head](to_tm(_args(sx, head, 1)[0]))
    raise ParseError(f"not a term: {dump(sx)}")


def to_sub(sx: SExp) -> Sub:
    atoms = {"p": P, "id": CId, "eps": CEps}
    if isinstance(sx, str) and sx in atoms:
        return atoms[sx]()
    head = _head(sx)
    if head == "single":
        return Single(to_tm(_args(sx, head, 1)[0]))
    if head == "plus":
        return Plus(to_sub(_args(sx, head, 1)[0]))
    if head == "comp":
        f, g = _args(sx, head, 2)
        return CComp(to_sub(f), to_sub(g))
    if head == "ext":
        g, t = _args(sx, head, 2)
        return CExt(to_sub(g), to_tm(t))
    raise ParseError(f"not a substitution: {dump(sx)}")


def to_ctx(sx: SExp) -> Ctx:
    if isinstance(sx, str) or not sx or sx[0] != "ctx":
        raise ParseError(f"not a context: {dump(sx)}")
    return Ctx(tuple(to_ty(entry) for entry in sx[1:]))


def to_tms(sx: SExp) -> List[Tm]:
    if isinstance(sx, str) or not sx or sx[0] != "tms":
        raise ParseError(f"not a parallel substitution: {dump(sx)}")
    return [to_tm(t) for t in sx[1:]]


def sort_of(sx: SExp) -> str:
    """Classify an expression as ``ty``, ``tm``, ``sub``, ``ctx`` or ``tms``."""
    head = _head(sx)
    if head in TY_HEADS or head in TY_ATOMS:
        return "ty"
    if head in TM_HEADS or head in TM_ATOMS:
        return "tm"
    if head in SUB_HEADS or head in SUB_ATOMS:
        return "sub"
    if head in ("ctx", "tms"):
        return head
    raise ParseError(f"unknown form: {dump(sx)}")


def to_entity(sx: SExp) -> Union[Ty, Tm, Sub, Ctx]:
    sort = sort_of(sx)
    if sort == "ty":
        return to_ty(sx)
    if sort == "tm":
        return to_tm(sx)
    if sort == "sub":
        return to_sub(sx)
    if sort == "ctx":
        return to_ctx(sx)
    raise ParseError(f"unexpected {sort} expression")


def parse_ty(text: str) -> Ty:
    return to_ty(read(text))


def parse_tm(text: str) -> Tm:
    return to_tm(read(text))


def parse_sub(text: str) -> Sub:
    return to_sub(read(text))


def parse_ctx(text: str) -> Ctx:
    return to_ctx(read(text))


def parse(text: str) -> Union[Ty, Tm, Sub, Ctx]:
    return to_entity(read(text))


# Printer


def to_sexp(node) -> SExp:
    """Convert a syntax node (or anything with ``to_sexp``) to an s-expression."""
    if hasattr(node, "to_sexp"):
        return node.to_sexp()
    match node:
        case Ctx(entries):
            return ["ctx"] + [to_sexp(e) for e in entries]
        case U(level):
            return ["U", str(level)]
        case El(code):
            return ["El", to_sexp(code)]
        case Pi(dom, cod):
            return ["Pi", to_sexp(dom), to_sexp(cod)]
        case Sigma(a, b):
            return ["Sigma", to_sexp(a), to_sexp(b)]
        case Top():
            return "Top"
        case Lift(ty):
            return ["Lift", to_sexp(ty)]
        case TySub(ty, sub):
            return ["tysub", to_sexp(ty), to_sexp(sub)]
        case Q():
            return "q"
        case TmSub(tm, sub):
            return ["tmsub", to_sexp(tm), to_sexp(sub)]
        case Lam(body):
            return ["lam", to_sexp(body)]
        case App(fn, arg):
            return ["app", to_sexp(fn), to_sexp(arg)]
        case Code(ty):
            return ["code", to_sexp(ty)]
        case Mk(tm):
            return ["mk", to_sexp(tm)]
        case Un(tm):
            return ["un", to_sexp(tm)]
        case Tt():
            return "tt"
        case Pair(a, b):
            return ["pair", to_sexp(a), to_sexp(b)]
        case Fst(tm):
            return ["fst", to_sexp(tm)]
        case Snd(tm):
            return ["snd", to_sexp(tm)]
        case P():
            return "p"
        case Single(tm):
            return ["single", to_sexp(tm)]
        case Plus(sub):
            return ["plus", to_sexp(sub)]
        case CId():
            return "id"
        case CEps():
            return "eps"
        case CComp(f, g):
            return ["comp", to_sexp(f), to_sexp(g)]
        case CExt(sub, tm):
            return ["ext", to_sexp(sub), to_sexp(tm)]
    raise TypeError(f"cannot print {node!r}")


def dump(sx: SExp) -> str:
    if isinstance(sx, str):
        return sx
    return "(" + " ".join(dump(item) for item in sx) + ")"


def show(node) -> str:
    """Canonical printed form."""
    if isinstance(node, (str, list)):
        return dump(node)
    return dump(to_sexp(node))


# Declaration files


@dataclasses.dataclass
class Decl:
    """A named declaration ``(def <name> <kind> <payload> [<type>])``."""

    name: str
    kind: str
    payload: SExp
    annotation: Optional[SExp] = None


def _resolve(sx: SExp, env: Dict[str, SExp]) -> SExp:
    if isinstance(sx, str):
        return env.get(sx, sx)
    return [_resolve(item, env) for item in sx]


def parse_decls(text: str) -> List[Decl]:
    """Parse a declaration file, substituting earlier names textually."""
    decls: List[Decl] = []
    env: Dict[str, SExp] = {}
    for item in read_all(text):
        if isinstance(item, str) or len(item) not in (4, 5) or item[0] != "def":
            raise ParseError(f"expected (def <name> <kind> <payload>), got {dump(item)}")
        name, kind = item[1], item[2]
        if not isinstance(name, str) or name in KEYWORDS:
            raise ParseError(f"invalid declaration name: {dump(name)}")
        if kind not in DECL_KINDS:
            raise ParseError(f"unknown declaration kind: {dump(kind)}")
        annotation = None
        if len(item) == 5:
            if kind != KIND_TM:
                raise ParseError(f"only tm declarations take a type annotation: {name}")
            annotation = _resolve(item[4], env)
        payload = _resolve(item[3], env)
        env[name] = payload
        decls.append(Decl(name, kind, payload, annotation))
        _LOGGER.debug("Parsed declaration %s of kind %s", name, kind)
    return decls
