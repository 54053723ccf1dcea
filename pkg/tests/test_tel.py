"""Unit tests for telescopes and the lifted equations."""
import pytest

from ssc_kernel.const import DEFAULT_COUNT
from ssc_kernel.errors import Exhausted, IllFormed
from ssc_kernel.par import Comp, Emb, Id
from ssc_kernel.sexpr import parse_ctx
from ssc_kernel.syntax import EMPTY, El, Lam, Lift, Mk, P, Pi, Plus, Q, Single, Top, TySub, U
from ssc_kernel.tel import (
    Tel,
    check_lifted_eq,
    lift_iso_roundtrip,
    lift_lemma_verify,
    lift_over,
    lift_pi_commute,
    tel_append,
    tel_from_ctx_suffix,
    verify_lifted,
)

LIFT_ISO_COUNT = 50
LIFT_PI_COUNT = 20


class TestTelescopes:
    """Test telescope helpers."""

    def test_append(self, universe_ctx):
        """Test that appending extends the base context entry by entry."""
        tel = Tel(universe_ctx, (El(Q()), Top()))
        assert tel_append(universe_ctx, tel) == parse_ctx("(ctx (U 0) (El q) Top)")

    def test_lift_over(self):
        """Test that a substitution is lifted once per entry."""
        assert lift_over(P(), Tel(EMPTY, (Top(), Top()))) == Plus(Plus(P()))
        assert lift_over(P(), Tel(EMPTY)) == P()

    def test_split_suffix(self, element_ctx, universe_ctx):
        """Test splitting the tail of a context off as a telescope."""
        tel = tel_from_ctx_suffix(element_ctx, 1)
        assert tel.base == universe_ctx
        assert len(tel) == 1

    def test_split_too_much(self, universe_ctx):
        """Test that a suffix cannot be longer than the context."""
        with pytest.raises(IllFormed):
            tel_from_ctx_suffix(universe_ctx, 2)


class TestLiftedEquations:
    """Test deciding single lifted equations."""

    def test_instantiate_after_weakening(self, checker, universe_ctx):
        """Test B[p][<a>] = B under an empty telescope."""
        payload = {"a": Q(), "B": El(Q())}
        assert check_lifted_eq(2, universe_ctx, Tel(universe_ctx), payload, checker)

    def test_lift_then_instantiate_by_q(self, checker, universe_ctx):
        """Test B[p+][<q>] = B under an empty telescope."""
        assert check_lifted_eq(4, universe_ctx, Tel(universe_ctx), {"B": El(Q())}, checker)

    def test_term_variant(self, checker, universe_ctx):
        """Test the term form of weakening then instantiating."""
        payload = {"a": Q(), "B": TySub(U(0), P()), "b": Q()}
        assert check_lifted_eq(2, universe_ctx, Tel(universe_ctx), payload, checker)

    def test_under_a_telescope(self, checker, universe_ctx):
        """Test B[p+][<q>] = B for B over a one-entry telescope."""
        tel = Tel(universe_ctx, (El(Q()),))
        payload = {"B": TySub(El(Q()), P())}
        assert check_lifted_eq(4, universe_ctx, tel, payload, checker)

    def test_unknown_equation(self, checker, universe_ctx):
        """Test that only the four lifted equations exist."""
        with pytest.raises(ValueError):
            check_lifted_eq(5, universe_ctx, Tel(universe_ctx), {}, checker)

    def test_missing_payload(self, checker, universe_ctx):
        """Test that a payload must supply every metavariable."""
        with pytest.raises(IllFormed) as err:
            check_lifted_eq(2, universe_ctx, Tel(universe_ctx), {"B": El(Q())}, checker)
        assert "needs a" in str(err.value)

    @pytest.mark.slow
    def test_sampled(self, gen):
        """Test sampled instances of every lifted equation."""
        reports = verify_lifted(gen, 3, tel_len=1)
        assert len(reports) == 8
        assert all(report.ok for report in reports)


class TestIsomorphisms:
    """Test the isomorphisms that rely on the lifted equations."""

    def test_lifted_variable(self, checker):
        """Test both roundtrips between a variable and its lift."""
        assert lift_iso_roundtrip(EMPTY, Top(), TySub(Top(), P()), Q(), checker) == (True, True)

    def test_lift_commutes_with_pi(self, checker):
        """Test both roundtrips of moving Lift inside a function type."""
        tm = Mk(Lam(Q()))
        assert lift_pi_commute(EMPTY, Top(), TySub(Top(), P()), tm, checker) == (True, True)


class TestLiftingLemma:
    """Test the sampled lifting lemma."""

    @pytest.mark.slow
    def test_weaken_then_instantiate_is_identity(self, gen, universe_ctx):
        """Test that p after <q> lifts like the identity."""
        composite = Comp(Emb(P()), Emb(Single(Q())))
        report = lift_lemma_verify(composite, Id(), universe_ctx, gen, 3, 3)
        assert report.ok
        assert report.checked > 0


def _extended(gen, tel_len):
    """A generated context followed by a telescope of the given length."""
    base = gen.gen_ctx(gen.rng.randint(0, 2))
    return tel_append(base, gen.gen_tel(base, tel_len))


@pytest.mark.slow
class TestGeneratedIsomorphisms:
    """Test the isomorphisms on generated instances under telescopes."""

    @pytest.mark.parametrize("tel_len", [0, 1, 2, 3])
    def test_lifted_variable(self, make_gen, tel_len):
        """Test both roundtrips on fifty generated variables and bodies."""
        gen = make_gen(seed=20 + tel_len)
        passed = 0
        for _ in range(LIFT_ISO_COUNT):
            try:
                ctx = _extended(gen, tel_len)
                a_ty = gen.gen_ty(ctx)
                b_ty = gen.gen_ty(ctx.extend(a_ty))
                tm = gen.gen_tm(ctx.extend(a_ty), b_ty)
            except Exhausted:
                continue
            assert lift_iso_roundtrip(ctx, a_ty, b_ty, tm, gen.checker) == (True, True)
            passed += 1
        assert passed > 0

    @pytest.mark.parametrize("tel_len", [0, 1, 2, 3])
    def test_lift_commutes_with_pi(self, make_gen, tel_len):
        """Test both composite roundtrips on generated functions."""
        gen = make_gen(seed=30 + tel_len)
        passed = 0
        for _ in range(LIFT_PI_COUNT):
            try:
                ctx = _extended(gen, tel_len)
                level = gen.level()
                a_ty = gen.gen_ty(ctx, level)
                b_ty = gen.gen_ty(ctx.extend(a_ty), level)
                tm = gen.gen_tm(ctx, Lift(Pi(a_ty, b_ty)))
            except Exhausted:
                continue
            assert lift_pi_commute(ctx, a_ty, b_ty, tm, gen.checker) == (True, True)
            passed += 1
        assert passed > 0


@pytest.mark.slow
class TestLiftedAcceptance:
    """Test the lifted equations at the default sample count."""

    @pytest.mark.parametrize("tel_len", [0, 1, 2, 3])
    def test_every_equation(self, make_gen, tel_len):
        """Test that every lifted equation passes with no failures and some passes."""
        reports = verify_lifted(make_gen(seed=40 + tel_len), DEFAULT_COUNT, tel_len=tel_len)
        assert len(reports) == 8
        for report in reports:
            assert report.failed == 0, report.counterexample
            assert report.passed > 0, report.name
            assert report.ok
