"""Unit tests for the s-expression reader, printer and declaration files."""
import pytest

from ssc_kernel.errors import ParseError
from ssc_kernel.sexpr import (
    parse,
    parse_ctx,
    parse_decls,
    parse_sub,
    parse_tm,
    parse_ty,
    read,
    read_all,
    show,
    sort_of,
)
from ssc_kernel.syntax import (
    CComp,
    CExt,
    CId,
    Ctx,
    El,
    Lam,
    P,
    Pi,
    Plus,
    Q,
    Single,
    TmSub,
    Top,
    TySub,
    U,
)


class TestReader:
    """Test tokenising and reading."""

    def test_comments_are_dropped(self):
        """Test that ; starts a comment running to the end of the line."""
        assert read_all("(U 0) ; a universe\nq") == [["U", "0"], "q"]

    def test_unclosed_parenthesis(self):
        """Test that a missing ')' reports where the list opened."""
        with pytest.raises(ParseError) as err:
            read("(Pi (U 0)")
        assert err.value.position == 0

    def test_stray_close(self):
        """Test that an unexpected ')' is rejected."""
        with pytest.raises(ParseError):
            read("q)")

    def test_read_expects_one_expression(self):
        """Test that read refuses several top-level forms."""
        with pytest.raises(ParseError):
            read("q q")


class TestEntities:
    """Test conversion to syntax trees."""

    def test_types(self):
        """Test every type former."""
        assert parse_ty("(U 2)") == U(2)
        assert parse_ty("Top") == Top()
        assert parse_ty("(Pi (U 0) (El q))") == Pi(U(0), El(Q()))
        assert parse_ty("(tysub (U 0) p)") == TySub(U(0), P())

    def test_arrow_desugars(self):
        """Test that (-> A B) becomes a Pi with a weakened codomain."""
        assert parse_ty("(-> Top Top)") == Pi(Top(), TySub(Top(), P()))

    def test_terms(self):
        """Test variables and instantiation."""
        assert parse_tm("(tmsub q p)") == TmSub(Q(), P())
        assert parse_tm("(lam q)") == Lam(Q())

    def test_substitutions(self):
        """Test both calculi's substitutions."""
        assert parse_sub("(plus (single q))") == Plus(Single(Q()))
        assert parse_sub("(comp id (ext id q))") == CComp(CId(), CExt(CId(), Q()))

    def test_context(self):
        """Test a context literal."""
        assert parse_ctx("(ctx (U 0) (El q))") == Ctx((U(0), El(Q())))

    def test_level_must_be_numeric(self):
        """Test that universe levels are natural numbers."""
        with pytest.raises(ParseError):
            parse_ty("(U zero)")

    def test_wrong_arity(self):
        """Test that formers check their argument count."""
        with pytest.raises(ParseError):
            parse_ty("(Pi (U 0))")

    def test_sort_of(self):
        """Test classification of top-level forms."""
        assert sort_of(read("(U 0)")) == "ty"
        assert sort_of(read("q")) == "tm"
        assert sort_of(read("p")) == "sub"
        assert sort_of(read("(ctx)")) == "ctx"
        assert sort_of(read("(tms q)")) == "tms"
        with pytest.raises(ParseError):
            sort_of(read("(frobnicate q)"))

    @pytest.mark.parametrize(
        "text",
        [
            "(Pi (U 0) (Pi (Lift (El q)) (tysub (Lift (El q)) p)))",
            "(app (lam (tmsub q p)) (pair tt (mk (code Top))))",
            "(tysub (El (un (fst q))) (plus (single (snd q))))",
            "(tmsub q (comp (ext eps tt) id))",
            "(ctx (U 1) (Sigma (El q) Top))",
        ],
    )
    def test_printer_roundtrip(self, text):
        """Test that printing a parsed entity gives back the same text."""
        assert show(parse(text)) == text


class TestDeclarations:
    """Test declaration files."""

    def test_names_substitute_textually(self):
        """Test that later declarations see earlier payloads."""
        decls = parse_decls(
            """
            (def A ty (U 0))
            (def f tm (lam q) (Pi A (tysub A p)))
            """
        )
        assert [d.name for d in decls] == ["A", "f"]
        assert decls[1].annotation == ["Pi", ["U", "0"], ["tysub", ["U", "0"], "p"]]

    def test_only_terms_take_annotations(self):
        """Test that a type annotation on a ty declaration is rejected."""
        with pytest.raises(ParseError):
            parse_decls("(def A ty (U 0) (U 1))")

    def test_unknown_kind(self):
        """Test that only the known declaration kinds are accepted."""
        with pytest.raises(ParseError):
            parse_decls("(def A term q)")

    def test_keyword_names_rejected(self):
        """Test that a declaration may not shadow a keyword."""
        with pytest.raises(ParseError):
            parse_decls("(def q tm tt)")
