"""Unit tests for the substitution equations and their sampler."""
import pytest

from ssc_kernel.const import DEFAULT_COUNT, SSC_EQUATIONS
from ssc_kernel.equations import (
    ALL_EQUATIONS,
    EquationInstance,
    EquationReport,
    EquationSampler,
    check_equation,
    verify_equations,
)
from ssc_kernel.errors import Exhausted, IllFormed
from ssc_kernel.sexpr import parse_ctx, parse_tm, parse_ty
from ssc_kernel.syntax import P, Plus, Single, Top, U, var_index

ELIMINATOR_CTX = "(ctx (Pi Top Top) (Sigma Top Top) (Lift Top))"


def _is_renaming(sub) -> bool:
    match sub:
        case P():
            return True
        case Single(tm):
            return var_index(tm) is not None
        case Plus(inner):
            return _is_renaming(inner)
    return False


class TestCheckEquation:
    """Test deciding hand-written instances."""

    def test_universe_law(self, checker):
        """Test (U 0)[p] = U 0."""
        inst = EquationInstance("U[]", parse_ctx("(ctx Top)"), parse_ty("(tysub (U 0) p)"), U(0))
        assert check_equation(inst, checker)

    def test_variable_law(self, checker):
        """Test q[<a>] = a at the universe."""
        inst = EquationInstance(
            "q[<>]", parse_ctx("(ctx)"), parse_tm("(tmsub q (single (code Top)))"), parse_tm("(code Top)"), U(0)
        )
        assert check_equation(inst, checker)

    def test_false_instance(self, checker, universe_ctx):
        """Test that a non-equation is rejected."""
        inst = EquationInstance("bogus", universe_ctx, U(0), Top())
        assert not check_equation(inst, checker)

    def test_describe(self, universe_ctx):
        """Test the printed form used for counterexamples."""
        inst = EquationInstance("U[]", universe_ctx, U(0), U(0))
        assert inst.describe() == "(U 0) = (U 0) in (ctx (U 0))"


class TestReport:
    """Test report bookkeeping."""

    def test_first_counterexample_kept(self):
        """Test that only the first failure is described."""
        report = EquationReport("x")
        report.record(True, lambda: "unused")
        report.record(False, lambda: "first")
        report.record(False, lambda: "second")
        assert (report.passed, report.failed) == (1, 2)
        assert report.counterexample == "first"
        assert not report.ok

    def test_all_skipped_is_not_ok(self):
        """Test that a run which checked nothing does not pass."""
        assert not EquationReport("x", skipped=3).ok
        assert EquationReport("x", passed=1, skipped=3).ok
        assert EquationReport("x").ok


class TestSampler:
    """Test sampled instances."""

    def test_unknown_equation(self, gen):
        """Test that the sampler rejects unknown names."""
        with pytest.raises(ValueError):
            EquationSampler(gen).sample("[q][q]")

    def test_every_equation_has_a_builder(self, gen):
        """Test that the table and the sampler agree."""
        sampler = EquationSampler(gen)
        for name in SSC_EQUATIONS:
            assert sampler.sample(name).name == name

    def test_zero_count(self, gen):
        """Test that zero samples give an empty, passing table."""
        reports = verify_equations(gen, 0)
        assert [r.name for r in reports] == ALL_EQUATIONS
        assert all(r.ok and r.passed == 0 for r in reports)

    def test_failures_are_reported(self, gen):
        """Test a decision procedure that rejects everything."""
        (report,) = verify_equations(gen, 2, ["U[]"], decide=lambda inst: False)
        assert report.failed + report.skipped == 2
        assert report.counterexample is not None or report.skipped == 2

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ALL_EQUATIONS)
    def test_equation_holds(self, make_gen, name):
        """Test each equation on a few generated instances."""
        (report,) = verify_equations(make_gen(seed=11), 5, [name])
        assert report.ok, report.counterexample
        assert report.passed >= 3

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ALL_EQUATIONS)
    def test_acceptance_count(self, make_gen, name):
        """Test each equation at the default sample count."""
        (report,) = verify_equations(make_gen(seed=5), DEFAULT_COUNT, [name])
        assert report.failed == 0, report.counterexample
        assert report.passed >= DEFAULT_COUNT * 9 // 10


class TestGeneralSubstitutions:
    """Test that sampled substitutions are not restricted to renamings."""

    def test_payloads_include_eliminators_and_pairs(self, gen, checker):
        """Test that payloads reach beyond variables, codes and tt, and all synthesise."""
        ctx = parse_ctx(ELIMINATOR_CTX)
        heads = set()
        for _ in range(60):
            try:
                tm = gen.gen_payload(ctx, 3)
            except Exhausted:
                continue
            checker.synth(ctx, tm)
            heads.add(type(tm).__name__)
        assert heads & {"App", "Pair", "Fst", "Snd", "Un"}

    def test_substitutions_are_not_only_renamings(self, gen):
        """Test that the sampler draws a substitution with a non-variable payload."""
        sampler = EquationSampler(gen)
        drawn = []
        for _ in range(40):
            try:
                drawn.append(sampler.substitution()[1])
            except (IllFormed, Exhausted):
                continue
        assert drawn
        assert not all(_is_renaming(sub) for sub in drawn)

    def test_sub_into_instantiates(self, gen, checker):
        """Test that substitutions into a given context sometimes instantiate its last variable."""
        sampler = EquationSampler(gen)
        cod = parse_ctx("(ctx (U 0) Top)")
        subs = [sampler.sub_into(cod) for _ in range(40)]
        for dom, sub in subs:
            checker.wf_sub(dom, sub)
        assert any(isinstance(sub, Single) for _, sub in subs)
