"""Unit tests for the termified CwF."""
import pytest

from ssc_kernel.const import CWF_LAWS, TERMIFY_DEPENDENT, TERMIFY_MODES, TERMIFY_WEAKENING
from ssc_kernel.syntax import EMPTY, Code, Fst, Lam, Lift, Mk, Q, Sigma, Snd, Top, Tt, U, Un, arrow
from ssc_kernel.termify import (
    EMITTERS,
    LAW_SIDES,
    TCon,
    TermifiedModel,
    check_cwf_law,
    emit,
    erase,
    erasure_matches,
    lift_k,
    mk_k,
    sample_termify_instance,
    sub_sort,
    tsub,
    ty_sort,
    un_k,
    verify_cwf_laws,
)


@pytest.fixture
def model(checker):
    """A termified model defining into the test checker."""
    return TermifiedModel(checker)


@pytest.fixture
def instance(gen, model):
    """A sampled law instance."""
    return sample_termify_instance(gen, model)


class TestLevels:
    """Test level arithmetic and decorations."""

    def test_truncating_subtraction(self):
        """Test that subtraction stops at zero."""
        assert tsub(5, 3) == 2
        assert tsub(3, 5) == 0

    def test_decorations(self):
        """Test iterated Lift, mk and un."""
        assert lift_k(2, Top()) == Lift(Lift(Top()))
        assert mk_k(0, Tt()) == Tt()
        assert un_k(1, Q()) == Un(Q())

    def test_erase(self):
        """Test that erasure drops every decoration."""
        assert erase(Lam(Mk(Un(Q())))) == Lam(Q())
        assert erase(Lift(Lift(Top()))) == Top()

    def test_sub_sort_lifts_the_lower_side(self):
        """Test that a substitution sort lifts its smaller context."""
        assert sub_sort(TCon(0, Top()), TCon(1, U(0))) == arrow(Lift(Top()), U(0))


class TestDefinitions:
    """Test individual termified definitions."""

    def test_identity(self, model):
        """Test that the identity is the identity function."""
        assert model.t_id(model.con(Top())).tm == Lam(Q())

    def test_eps_lifts_tt(self, model):
        """Test that eps out of a large context returns a lifted tt."""
        assert model.t_eps(model.con(U(0))).tm == Lam(Mk(Tt()))

    def test_unknown_operation(self, model):
        """Test that only known operations are emitted."""
        with pytest.raises(ValueError):
            emit(model, "frobnicate", None)

    def test_unknown_law(self, model):
        """Test that only known laws are checked."""
        with pytest.raises(ValueError):
            check_cwf_law(model, "ext-gamma", None)

    def test_laws_cover_the_cwf(self):
        """Test that there are sides for every CwF law."""
        assert sorted(LAW_SIDES) == sorted(CWF_LAWS)


@pytest.mark.slow
class TestSampled:
    """Test definitions and laws on sampled instances."""

    @pytest.mark.parametrize("op", sorted(EMITTERS))
    def test_emitted_terms_check(self, checker, model, instance, op):
        """Test that every emitted closed term inhabits its sort."""
        sort, tm = emit(model, op, instance)
        verdict = checker.check_tm(EMPTY, tm, sort)
        assert verdict, verdict.diagnostic

    def test_erasure(self, model, instance):
        """Test that erasure gives the undecorated definitions."""
        verdict = erasure_matches(model, instance)
        assert verdict, verdict.diagnostic

    def test_laws(self, gen, model):
        """Test every law on two sampled instances."""
        results = verify_cwf_laws(gen, model, 2)
        assert sorted(results) == sorted(CWF_LAWS + ["erasure"])
        failed = {law: verdict.diagnostic for law, verdict in results.items() if not verdict}
        assert not failed


CLOSED = [(Top(), Tt()), (U(0), Code(Top())), (U(1), Code(U(0)))]


class TestLevelBookkeeping:
    """Test sorts and definitions across smaller, equal and larger levels."""

    @pytest.mark.parametrize(
        "dom,cod,expected",
        [
            (TCon(0, Top()), TCon(1, U(0)), arrow(Lift(Top()), U(0))),
            (TCon(1, U(0)), TCon(1, U(0)), arrow(U(0), U(0))),
            (TCon(2, U(1)), TCon(0, Top()), arrow(U(1), Lift(Lift(Top())))),
        ],
    )
    def test_sub_sort(self, dom, cod, expected):
        """Test that only the lower side of a substitution sort is lifted."""
        assert sub_sort(dom, cod) == expected

    @pytest.mark.parametrize(
        "con,level,expected",
        [
            (TCon(0, Top()), 0, arrow(Lift(Top()), U(0))),
            (TCon(1, U(0)), 0, arrow(U(0), U(0))),
            (TCon(2, U(1)), 0, arrow(U(1), Lift(U(0)))),
        ],
    )
    def test_ty_sort(self, con, level, expected):
        """Test that a type sort compares the context level with one more than the type's."""
        assert ty_sort(con, level) == expected

    @pytest.mark.parametrize("dom", range(len(CLOSED)))
    @pytest.mark.parametrize("cod", range(len(CLOSED)))
    def test_definitions_across_levels(self, model, dom, cod):
        """Test composed definitions between contexts at every pair of levels."""
        (dom_ty, _), (cod_ty, value) = CLOSED[dom], CLOSED[cod]
        sub = model.const_sub(model.con(dom_ty), model.con(cod_ty), value)
        ty = model.const_ty(sub.cod, dom_ty)
        inst = model.t_inst_ty(ty, sub)
        assert inst.con == sub.dom and inst.level == ty.level
        assert model.t_q(sub.cod, ty).ty.level == ty.level
        assert model.same_sub(model.t_comp(sub, model.t_id(sub.dom)), sub)


class TestInstanceModes:
    """Test the kinds of law instances."""

    def test_unknown_mode(self, gen, model):
        """Test that only known instance modes are sampled."""
        with pytest.raises(ValueError):
            sample_termify_instance(gen, model, "renaming")

    @pytest.mark.parametrize("mode", [TERMIFY_WEAKENING, TERMIFY_DEPENDENT])
    def test_substitutions_are_projections(self, gen, model, mode):
        """Test that non-constant instances use the projection as their first substitution."""
        inst = sample_termify_instance(gen, model, mode)
        assert inst.sub_g.tm == Lam(Fst(Q()))
        assert inst.tm_a.tm == Lam(Snd(Q()))
        assert inst.ty_b.level == inst.ty_a.level

    def test_dependent_types_use_the_context(self, gen, model):
        """Test that the dependent instance lives over a universe context."""
        inst = sample_termify_instance(gen, model, TERMIFY_DEPENDENT)
        assert isinstance(inst.con.ty, Sigma)
        assert isinstance(inst.con.ty.fst, U)
        assert inst.con.level == inst.ty_a.level + 1


@pytest.mark.slow
class TestLawsPerMode:
    """Test every law on each kind of instance."""

    @pytest.mark.parametrize("mode", TERMIFY_MODES)
    @pytest.mark.parametrize("law", CWF_LAWS)
    def test_law(self, gen, model, mode, law):
        """Test one law on a sampled instance of one mode."""
        verdict = check_cwf_law(model, law, sample_termify_instance(gen, model, mode))
        assert verdict, verdict.diagnostic

    @pytest.mark.parametrize("mode", TERMIFY_MODES)
    def test_erasure(self, gen, model, mode):
        """Test the undecorated displays on each kind of instance."""
        verdict = erasure_matches(model, sample_termify_instance(gen, model, mode))
        assert verdict, verdict.diagnostic

    def test_acceptance(self, gen, model):
        """Test every law on seventeen instances of each mode."""
        results = verify_cwf_laws(gen, model, 17 * len(TERMIFY_MODES))
        failed = {law: verdict.diagnostic for law, verdict in results.items() if not verdict}
        assert not failed
