"""Raw syntax trees for the single substitution calculus and the CwF syntax.

Both calculi share the type and term formers. They differ only in the
substitutions that may appear inside ``TySub``/``TmSub`` nodes: the single
substitution calculus uses ``P``, ``Single`` and ``Plus``, the CwF syntax uses
``CId``, ``CComp``, ``CEps``, ``P`` and ``CExt``.
"""

from __future__ import annotations

import dataclasses
from typing import Iterator, Tuple, Union


class Syntax:
    """Marker base for every syntax node."""

    def children(self) -> Iterator["Syntax"]:
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if isinstance(value, Syntax):
                yield value


class Ty(Syntax):
    """Types."""


class Tm(Syntax):
    """Terms."""


class Sub(Syntax):
    """Substitutions of either calculus."""


class SubS(Sub):
    """Single substitution calculus substitutions."""


class CSub(Sub):
    """CwF substitutions (``P`` is shared with the single calculus)."""


# Types


@dataclasses.dataclass(frozen=True)
class U(Ty):
    level: int


@dataclasses.dataclass(frozen=True)
class El(Ty):
    code: Tm


@dataclasses.dataclass(frozen=True)
class Pi(Ty):
    dom: Ty
    cod: Ty


@dataclasses.dataclass(frozen=True)
class Sigma(Ty):
    fst: Ty
    snd: Ty


@dataclasses.dataclass(frozen=True)
class Top(Ty):
    pass


@dataclasses.dataclass(frozen=True)
class Lift(Ty):
    ty: Ty


@dataclasses.dataclass(frozen=True)
class TySub(Ty):
    ty: Ty
    sub: Sub


# Terms


@dataclasses.dataclass(frozen=True)
class Q(Tm):
    pass


@dataclasses.dataclass(frozen=True)
class TmSub(Tm):
    tm: Tm
    sub: Sub


@dataclasses.dataclass(frozen=True)
class Lam(Tm):
    body: Tm


@dataclasses.dataclass(frozen=True)
class App(Tm):
    fn: Tm
    arg: Tm


@dataclasses.dataclass(frozen=True)
class Code(Tm):
    ty: Ty


@dataclasses.dataclass(frozen=True)
class Mk(Tm):
    tm: Tm


@dataclasses.dataclass(frozen=True)
class Un(Tm):
    tm: Tm


@dataclasses.dataclass(frozen=True)
class Tt(Tm):
    pass


@dataclasses.dataclass(frozen=True)
class Pair(Tm):
    fst: Tm
    snd: Tm


@dataclasses.dataclass(frozen=True)
class Fst(Tm):
    tm: Tm


@dataclasses.dataclass(frozen=True)
class Snd(Tm):
    tm: Tm


# Single substitutions


@dataclasses.dataclass(frozen=True)
class P(SubS):
    pass


@dataclasses.dataclass(frozen=True)
class Single(SubS):
    tm: Tm


@dataclasses.dataclass(frozen=True)
class Plus(SubS):
    sub: Sub


# CwF substitutions


@dataclasses.dataclass(frozen=True)
class CId(CSub):
    pass


@dataclasses.dataclass(frozen=True)
class CComp(CSub):
    """``CComp(f, g)`` is ``f ∘ g``: instantiating by it applies ``f`` then ``g``."""

    first: Sub
    second: Sub


@dataclasses.dataclass(frozen=True)
class CEps(CSub):
    pass


@dataclasses.dataclass(frozen=True)
class CExt(CSub):
    sub: Sub
    tm: Tm


Entity = Union[Ty, Tm, Sub]


@dataclasses.dataclass(frozen=True)
class Ctx:
    """A context as a snoc-list of types, oldest first."""

    entries: Tuple[Ty, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def extend(self, *tys: Ty) -> "Ctx":
        return Ctx(self.entries + tuple(tys))

    def prefix(self, n: int) -> "Ctx":
        return Ctx(self.entries[:n])

    def drop(self, n: int = 1) -> "Ctx":
        if n > len(self.entries):
            raise IndexError("context too short")
        return Ctx(self.entries[: len(self.entries) - n])

    @property
    def last(self) -> Ty:
        return self.entries[-1]


EMPTY = Ctx()


def var(k: int) -> Tm:
    """De Bruijn index ``k`` as the variable spine ``q[p]...[p]``."""
    tm: Tm = Q()
    for _ in range(k):
        tm = TmSub(tm, P())
    return tm


def var_index(tm: Tm) -> int | None:
    """Return ``k`` when ``tm`` is the spine ``q[p]^k``, else ``None``."""
    k = 0
    while isinstance(tm, TmSub) and isinstance(tm.sub, P):
        tm = tm.tm
        k += 1
    return k if isinstance(tm, Q) else None


def arrow(dom: Ty, cod: Ty) -> Ty:
    """Non-dependent function type ``A ⇒ B := Π A (B[p])``."""
    return Pi(dom, TySub(cod, P()))


def plus_n(sub: Sub, n: int) -> Sub:
    for _ in range(n):
        sub = Plus(sub)
    return sub


def weaken_ty(ty: Ty, n: int = 1) -> Ty:
    for _ in range(n):
        ty = TySub(ty, P())
    return ty


def weaken_tm(tm: Tm, n: int = 1) -> Tm:
    for _ in range(n):
        tm = TmSub(tm, P())
    return tm


def size(node: Syntax) -> int:
    return 1 + sum(size(child) for child in node.children())


def constructor_name(node: Syntax) -> str:
    return type(node).__name__


def walk(node: Syntax) -> Iterator[Syntax]:
    """Pre-order traversal."""
    yield node
    for child in node.children():
        yield from walk(child)


def replace_children(node: Syntax, new_children: list) -> Syntax:
    """Rebuild ``node`` with its syntax children replaced in order."""
    values = {}
    it = iter(new_children)
    for field in dataclasses.fields(node):
        value = getattr(node, field.name)
        values[field.name] = next(it) if isinstance(value, Syntax) else value
    return type(node)(**values)
