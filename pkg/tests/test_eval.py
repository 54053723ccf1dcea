"""Unit tests for normalisation and conversion."""
import pytest

from ssc_kernel.equations import EquationSampler
from ssc_kernel.errors import Exhausted, IllFormed
from ssc_kernel.eval import conv_sub, conv_tm, conv_ty, eta_expand, normalize_tm, normalize_ty
from ssc_kernel.sexpr import parse_ctx, parse_sub, parse_tm, parse_ty
from ssc_kernel.syntax import EMPTY, Code, El, Fst, Lam, Lift, Mk, P, Pair, Pi, Q, Sigma, Snd, TmSub, Top, Tt, TySub, U, Un, arrow


class TestNormalize:
    """Test normal forms of types and terms."""

    def test_universe_under_weakening(self, checker):
        """Test that (U 0)[p] normalises to U 0."""
        ctx = parse_ctx("(ctx Top)")
        assert normalize_ty(ctx, parse_ty("(tysub (U 0) p)"), checker) == U(0)

    def test_weaken_then_instantiate(self, checker, universe_ctx):
        """Test that B[p][<a>] normalises to B."""
        ty = parse_ty("(tysub (tysub (El q) p) (single tt))")
        assert normalize_ty(universe_ctx, ty, checker) == El(Q())

    def test_beta(self, checker):
        """Test that an applied lambda reduces."""
        tm = parse_tm("(app (lam q) (code Top))")
        assert normalize_tm(EMPTY, tm, U(0), checker) == Code(Top())

    def test_instantiated_variable(self, checker):
        """Test that q[<a>] reduces to a."""
        tm = parse_tm("(tmsub q (single (code Top)))")
        assert normalize_tm(EMPTY, tm, U(0), checker) == Code(Top())

    def test_top_eta(self, checker):
        """Test that every term of Top normalises to tt."""
        assert normalize_tm(parse_ctx("(ctx Top)"), Q(), Top(), checker) == Tt()

    def test_universe_eta(self, checker, universe_ctx):
        """Test that a variable of a universe reads back as the code of its El."""
        assert normalize_tm(universe_ctx, Q(), U(0), checker) == Code(El(Q()))

    def test_lifted_variable(self, checker):
        """Test that q[p+] normalises like q."""
        ctx = parse_ctx("(ctx Top (U 0))")
        left = normalize_tm(ctx, parse_tm("(tmsub q (plus p))"), U(0), checker)
        assert left == normalize_tm(ctx, Q(), U(0), checker)

    def test_ill_typed_term(self, checker):
        """Test that normalisation checks its input first."""
        with pytest.raises(IllFormed):
            normalize_tm(EMPTY, Tt(), U(0), checker)


class TestConversion:
    """Test the conversion checker."""

    def test_universe_beta(self, checker):
        """Test El (c A) against A."""
        assert conv_ty(EMPTY, El(Code(Top())), Top(), checker)

    def test_universe_eta(self, checker, universe_ctx):
        """Test c (El a) against a."""
        assert conv_tm(universe_ctx, Code(El(Q())), Q(), U(0), checker)

    def test_lift_then_instantiate_by_q(self, checker, universe_ctx):
        """Test B[p+][<q>] against B."""
        ty = parse_ty("(tysub (tysub (El q) (plus p)) (single q))")
        assert conv_ty(universe_ctx, ty, El(Q()), checker)

    def test_distinct_universes(self, checker):
        """Test that U 0 and U 1 are not convertible."""
        assert not conv_ty(EMPTY, U(0), U(1), checker)

    def test_substitutions(self, checker, universe_ctx):
        """Test componentwise conversion of a lifted weakening with itself."""
        dom = parse_ctx("(ctx (U 0) (tysub (U 0) p))")
        sub = parse_sub("(plus p)")
        assert conv_sub(dom, sub, sub, universe_ctx, checker)


class TestEtaExpand:
    """Test constructor-headed expansion of neutrals."""

    def test_function(self):
        """Test that a function variable expands to a lambda."""
        ctx = parse_ctx("(ctx (Pi (U 0) (tysub (U 0) p)))")
        assert isinstance(eta_expand(ctx, Q(), parse_ty("(tysub (Pi (U 0) (tysub (U 0) p)) p)")), Lam)

    def test_pair(self):
        """Test that a pair variable expands to its projections."""
        ctx = parse_ctx("(ctx (U 0) (Sigma (El q) (tysub (El q) p)))")
        ty = parse_ty("(tysub (Sigma (El q) (tysub (El q) p)) p)")
        assert eta_expand(ctx, Q(), ty) == Pair(Fst(Q()), Snd(Q()))

    def test_lift(self):
        """Test that a lifted variable expands to mk (un x)."""
        ctx = parse_ctx("(ctx (U 0) (Lift (El q)))")
        assert eta_expand(ctx, Q(), parse_ty("(tysub (Lift (El q)) p)")) == Mk(Un(Q()))


@pytest.mark.slow
class TestNormalFormProperties:
    """Test idempotence and congruence on generated syntax."""

    @pytest.mark.parametrize("seed", [2, 3])
    def test_idempotent(self, make_gen, seed):
        """Test that normalising a normal form changes nothing."""
        gen = make_gen(seed=seed)
        ctx = gen.gen_ctx(2)
        for _ in range(8):
            ty = gen.gen_ty(ctx)
            tm = gen.gen_tm(ctx, ty)
            normal_ty = normalize_ty(ctx, ty, gen.checker)
            assert normalize_ty(ctx, normal_ty, gen.checker) == normal_ty
            normal_tm = normalize_tm(ctx, tm, ty, gen.checker)
            assert normalize_tm(ctx, normal_tm, normal_ty, gen.checker) == normal_tm

    @pytest.mark.parametrize("seed", [4, 5])
    def test_congruence(self, make_gen, seed):
        """Test that conversion is symmetric and preserved by the type and term formers."""
        gen = make_gen(seed=seed)
        ctx = gen.gen_ctx(2)
        for _ in range(8):
            ty = gen.gen_ty(ctx)
            tm = gen.gen_tm(ctx, ty)
            normal_ty = normalize_ty(ctx, ty, gen.checker)
            normal_tm = normalize_tm(ctx, tm, ty, gen.checker)
            assert conv_ty(ctx, normal_ty, ty, gen.checker)
            assert conv_ty(ctx, Lift(ty), Lift(normal_ty), gen.checker)
            assert conv_ty(ctx, Sigma(ty, TySub(normal_ty, P())), Sigma(normal_ty, TySub(ty, P())), gen.checker)
            assert conv_ty(ctx, Pi(ty, TySub(ty, P())), Pi(normal_ty, TySub(normal_ty, P())), gen.checker)
            assert conv_tm(ctx, Mk(tm), Mk(normal_tm), Lift(ty), gen.checker)
            assert conv_tm(ctx, Code(ty), Code(normal_ty), U(gen.checker.infer_ty_level(ctx, ty)), gen.checker)


@pytest.mark.slow
class TestDerivedLaws:
    """Test equations that follow from the axioms rather than being rules."""

    @pytest.mark.parametrize("proj", [Fst, Snd])
    def test_projection_naturality(self, gen, proj):
        """Test that a projection commutes with substitution."""
        sampler = EquationSampler(gen)
        for _ in range(5):
            base = gen.gen_ctx(1)
            level = gen.level()
            dom = gen.gen_ty(base, level)
            ctx = base.extend(Sigma(dom, gen.gen_ty(base.extend(dom), level)))
            delta, gamma = sampler.sub_into(ctx)
            left = TmSub(proj(Q()), gamma)
            ty = gen.checker.infer(delta, left)
            assert conv_tm(delta, left, proj(TmSub(Q(), gamma)), ty, gen.checker)

    def test_arrow_law(self, gen):
        """Test that substituting into a function type substitutes into both sides."""
        sampler = EquationSampler(gen)
        checked = 0
        for _ in range(8):
            try:
                delta, gamma, ctx = sampler.substitution()
            except (IllFormed, Exhausted):
                continue
            level = gen.level()
            dom, cod = gen.gen_ty(ctx, level), gen.gen_ty(ctx, level)
            left = TySub(arrow(dom, cod), gamma)
            assert conv_ty(delta, left, arrow(TySub(dom, gamma), TySub(cod, gamma)), gen.checker)
            checked += 1
        assert checked
