"""Pytest configuration and fixtures for SSC kernel tests."""
import pytest

from ssc_kernel.core import Checker
from ssc_kernel.gen import GenConfig, TermGenerator
from ssc_kernel.sexpr import parse_ctx, parse_tm, parse_ty
from ssc_kernel.syntax import EMPTY


@pytest.fixture
def checker():
    """A fresh checker with an empty signature."""
    return Checker()


@pytest.fixture
def make_gen(checker):
    """Build seeded generators.

    Usage:
        gen = make_gen(seed=3, max_depth=2)
    """
    def _make(seed=7, **options):
        options.setdefault("max_depth", 3)
        return TermGenerator(GenConfig.from_dict({"seed": seed, **options}), checker)

    return _make


@pytest.fixture
def gen(make_gen):
    """A generator with a fixed seed and shallow terms."""
    return make_gen()


@pytest.fixture
def empty_ctx():
    return EMPTY


@pytest.fixture
def universe_ctx():
    """The context ``⋄ ▷ U 0``."""
    return parse_ctx("(ctx (U 0))")


@pytest.fixture
def element_ctx():
    """The context ``⋄ ▷ U 0 ▷ El q``: a type variable and an element of it."""
    return parse_ctx("(ctx (U 0) (El q))")


@pytest.fixture
def poly_id():
    """The polymorphic identity on small types, with its type."""
    return (
        parse_tm("(lam (lam q))"),
        parse_ty("(Pi (U 0) (Pi (Lift (El q)) (tysub (Lift (El q)) p)))"),
    )


@pytest.fixture
def write_ssc(tmp_path):
    """Write a declaration file and return its path."""
    def _write(text, name="input.ssc"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write
