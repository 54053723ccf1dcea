"""Unit tests for SubStars and parallel substitutions."""
import pytest

from ssc_kernel.errors import IllFormed
from ssc_kernel.par import (
    Comp,
    Emb,
    Id,
    Tms,
    expansion_agrees,
    star_cod,
    star_inst_ty,
    star_plus,
    star_plus_n,
    tms_check,
    tms_comp,
    tms_conv,
    tms_embed,
    tms_fst,
    tms_from_terms,
    tms_id,
    tms_identity,
    tms_p,
    tms_snd,
    tms_to_csub,
)
from ssc_kernel.syntax import EMPTY, CEps, CExt, Code, El, P, Plus, Q, Single, Top, Tt, TySub, U, var


class TestSubStar:
    """Test identity and composition over single substitutions."""

    def test_codomain_of_composite(self, universe_ctx):
        """Test that p after <q> goes back to where it started."""
        assert star_cod(universe_ctx, Comp(Emb(P()), Emb(Single(Q())))) == universe_ctx

    def test_instantiation_order(self):
        """Test that the first component is applied first."""
        assert star_inst_ty(U(0), Comp(Emb(P()), Emb(Single(Tt())))) == TySub(TySub(U(0), P()), Single(Tt()))

    def test_lifting(self):
        """Test lifting under binders."""
        assert star_plus(Id()) == Id()
        assert star_plus_n(Emb(P()), 2) == Emb(Plus(Plus(P())))
        assert star_plus(Comp(Id(), Emb(P()))) == Comp(Id(), Emb(Plus(P())))


class TestTms:
    """Test parallel substitutions as term lists."""

    def test_identity(self):
        """Test that the identity lists variables oldest first."""
        assert tms_identity(2).terms == (var(1), var(0))

    def test_weakening(self, universe_ctx):
        """Test that p is the identity without its last component."""
        assert tms_p(universe_ctx, El(Q())) == Tms((var(1),), 2)

    def test_empty_embeds_as_weakenings(self):
        """Test that the empty list embeds as a chain of p."""
        assert tms_embed(Tms((), 2)) == Comp(Comp(Id(), Emb(P())), Emb(P()))

    def test_identity_checks(self, element_ctx):
        """Test that the identity is well typed into its own context."""
        tms_check(tms_id(element_ctx), element_ctx, element_ctx)

    def test_wrong_component_type(self, universe_ctx):
        """Test that components are checked at their entry types."""
        with pytest.raises(IllFormed) as err:
            tms_from_terms([Tt()], EMPTY, universe_ctx)
        assert "tms[0]" in err.value.path

    def test_wrong_length(self, universe_ctx):
        """Test that the codomain fixes the number of components."""
        with pytest.raises(IllFormed):
            tms_check(Tms((), 0), EMPTY, universe_ctx)

    def test_projections(self):
        """Test fst and snd, and that the empty list has neither."""
        ts = Tms((Code(Top()), Tt()), 0)
        assert tms_fst(ts) == Tms((Code(Top()),), 0)
        assert tms_snd(ts) == Tt()
        with pytest.raises(IllFormed):
            tms_snd(Tms((), 0))
        with pytest.raises(IllFormed):
            tms_fst(Tms((), 0))

    def test_identity_is_a_unit(self, element_ctx):
        """Test that id ∘ id converts to id."""
        ident = tms_id(element_ctx)
        assert tms_conv(tms_comp(ident, ident), ident, element_ctx, element_ctx)

    def test_as_cwf_substitution(self):
        """Test the CwF reading of a term list."""
        assert tms_to_csub(Tms((Tt(),), 0)) == CExt(CEps(), Tt())

    def test_expansion_agrees(self):
        """Test that the embedding and the parallel reading normalise alike."""
        assert expansion_agrees(EMPTY, El(Q()), Tms((Code(Top()),), 0))
