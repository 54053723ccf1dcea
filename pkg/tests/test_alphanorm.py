"""Unit tests for substitution normal forms."""
import pytest

from ssc_kernel.alphanorm import (
    NotNormal,
    NSingle,
    Weakening,
    alpha_norm_tm,
    alpha_norm_ty,
    alpha_tm,
    classify_sub,
    inst_ty,
    is_alpha_normal,
    spine_count,
)
from ssc_kernel.errors import IllFormed
from ssc_kernel.eval import conv_tm, conv_ty
from ssc_kernel.sexpr import parse_ctx, parse_sub, parse_tm, parse_ty
from ssc_kernel.syntax import App, Lam, Lift, Pi, Plus, Q, Single, Top, Tt, U, El, var


class TestPredicate:
    """Test the normal form predicate."""

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("q", True),
            ("(tmsub q p)", True),
            ("(tmsub q (single tt))", False),
            ("(lam (app (tmsub q p) q))", True),
            ("(code (tysub Top p))", False),
        ],
    )
    def test_is_alpha_normal(self, text, expected):
        """Test that instantiation may only occur in variable spines."""
        assert is_alpha_normal(parse_tm(text)) is expected


class TestClassify:
    """Test classification of single substitutions."""

    def test_weakening(self):
        """Test that a lifted p is a weakening."""
        assert isinstance(classify_sub(parse_sub("(plus p)")), Weakening)

    def test_normal_single(self):
        """Test that a lifted single with a variable payload is normal."""
        assert isinstance(classify_sub(parse_sub("(plus (single q))")), NSingle)

    def test_payload_not_normal(self):
        """Test that a payload containing an instantiation is rejected."""
        assert isinstance(classify_sub(parse_sub("(single (tmsub q (single q)))")), NotNormal)


class TestAlphaTerms:
    """Test pushing instantiations to the variables."""

    def test_instantiated_variable(self):
        """Test that q[<a>] becomes a."""
        assert alpha_tm(parse_tm("(tmsub q (single tt))")) == Tt()

    def test_lambda_under_weakening(self):
        """Test that (lam q[p])[p] lifts the weakening under the binder."""
        assert alpha_tm(parse_tm("(tmsub (lam (tmsub q p)) p)")) == Lam(var(2))

    def test_beta_redex_is_kept(self):
        """Test that alpha normalisation does not reduce redexes."""
        redex = App(Lam(Q()), Tt())
        assert alpha_tm(redex) == redex

    def test_checked_entry_point(self, checker):
        """Test that the checked entry point rejects ill-typed input."""
        with pytest.raises(IllFormed):
            alpha_norm_tm(parse_ctx("(ctx)"), Q(), Top(), checker)


class TestAlphaTypes:
    """Test types."""

    def test_pi_under_weakening(self, checker):
        """Test that instantiation distributes over Pi."""
        ty = parse_ty("(tysub (Pi (U 0) (Lift (El q))) p)")
        assert alpha_norm_ty(parse_ctx("(ctx Top)"), ty, checker) == Pi(U(0), Lift(El(Q())))

    def test_inst_keeps_normal_forms(self):
        """Test that instantiating by a normal substitution stays normal."""
        ty = inst_ty(Pi(U(0), Lift(El(Q()))), Plus(Single(Q())))
        assert is_alpha_normal(ty)


class TestProperties:
    """Test alpha normal forms of generated entities."""

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_types_convert_to_their_normal_forms(self, make_gen, seed):
        """Test that alpha normal forms are normal and convertible to their input."""
        gen = make_gen(seed=seed)
        ctx = gen.gen_ctx(2)
        for _ in range(10):
            ty = gen.gen_ty(ctx)
            normal = alpha_norm_ty(ctx, ty, gen.checker)
            assert is_alpha_normal(normal)
            assert spine_count(normal) == 0
            assert conv_ty(ctx, ty, normal, gen.checker)

    @pytest.mark.slow
    def test_closed_terms(self, gen):
        """Test closed terms against their types."""
        for _ in range(10):
            ty, tm = gen.gen_closed()
            normal = alpha_norm_tm(parse_ctx("(ctx)"), tm, ty, gen.checker)
            assert is_alpha_normal(normal)
            assert conv_tm(parse_ctx("(ctx)"), tm, normal, ty, gen.checker)
