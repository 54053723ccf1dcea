"""Unit tests for the CwF calculus and the translations between calculi."""
import pytest

from ssc_kernel.const import DEFAULT_COUNT, TERMIFY_MODES
from ssc_kernel.cwf import (
    CWF_CHECKER,
    CWF_SYNTAX_LAWS,
    DIRECTIONS,
    ROUNDTRIP_CONSTRUCTORS,
    check_contextual_iso,
    cod_size,
    cwf_conv_sub,
    cwf_to_ssc,
    eps_iso_holds,
    sample_cwf_law,
    ssc_to_cwf,
    sub_to_tms,
    verify_contextual_iso,
    verify_cwf_syntax_laws,
    verify_roundtrips,
)
from ssc_kernel.errors import IllFormed
from ssc_kernel.par import tms_identity
from ssc_kernel.sexpr import parse_ctx
from ssc_kernel.syntax import EMPTY, CComp, CEps, CExt, CId, P, Plus, Q, Single, Tt, TySub, U
from ssc_kernel.termify import TermifiedModel, sample_termify_instance


class TestToCwf:
    """Test reading single substitutions as CwF substitutions."""

    def test_single(self):
        """Test that <a> becomes (id, a)."""
        assert ssc_to_cwf(Single(Tt())) == CExt(CId(), Tt())

    def test_lifting(self):
        """Test that a lifted substitution becomes (sub ∘ p, q)."""
        assert ssc_to_cwf(Plus(P())) == CExt(CComp(P(), P()), Q())

    def test_inside_types(self):
        """Test that substitutions are translated where they occur."""
        assert ssc_to_cwf(TySub(U(0), Single(Tt()))) == TySub(U(0), CExt(CId(), Tt()))

    def test_rejects_cwf_input(self):
        """Test that CwF syntax is not translated twice."""
        with pytest.raises(IllFormed):
            ssc_to_cwf(CId())


class TestToSsc:
    """Test reading CwF syntax back into single substitutions."""

    def test_codomain_sizes(self):
        """Test codomain lengths of CwF substitutions."""
        assert cod_size(CEps(), 3) == 0
        assert cod_size(CExt(P(), Q()), 2) == 2
        assert cod_size(CComp(P(), P()), 2) == 0
        with pytest.raises(IllFormed):
            cod_size(P(), 0)

    def test_identity_as_terms(self):
        """Test that id becomes the list of all variables."""
        assert sub_to_tms(CId(), 2) == tms_identity(2)

    def test_weakened_type(self):
        """Test that A[p] comes back as A[p]."""
        assert cwf_to_ssc(TySub(U(0), P()), 1) == TySub(U(0), P())

    def test_rejects_single_substitutions(self):
        """Test that single substitutions are not CwF syntax."""
        with pytest.raises(IllFormed):
            cwf_to_ssc(Single(Tt()))


class TestCwfCalculus:
    """Test the CwF checker and its conversion."""

    def test_identity_is_a_left_unit(self):
        """Test that id ∘ p converts to p."""
        ctx = parse_ctx("(ctx Top)")
        assert cwf_conv_sub(ctx, CComp(CId(), P()), P(), EMPTY)

    def test_context(self):
        """Test that the CwF checker accepts SSC-free contexts."""
        assert CWF_CHECKER.wf_ctx(parse_ctx("(ctx (U 0) (El q))"))

    def test_eps_is_invertible(self):
        """Test that eps out of the unit context has an inverse."""
        verdict = eps_iso_holds()
        assert verdict, verdict.diagnostic

    def test_unknown_law(self, gen):
        """Test that only the listed CwF laws can be sampled."""
        with pytest.raises(ValueError):
            sample_cwf_law(gen, "ext-gamma")


@pytest.mark.slow
class TestSampled:
    """Test sampled roundtrips and laws."""

    @pytest.mark.parametrize("direction", DIRECTIONS)
    def test_roundtrips(self, gen, direction):
        """Test that translating there and back is the identity up to conversion."""
        result = verify_roundtrips(gen, direction, 5)
        assert result["passed"] + result["failed"] == 5
        assert result["failed"] == 0, result["counterexample"]

    @pytest.mark.parametrize("direction", DIRECTIONS)
    def test_roundtrip_coverage(self, gen, direction):
        """Test that the default sample count exercises every constructor at least five times."""
        result = verify_roundtrips(gen, direction, DEFAULT_COUNT)
        assert result["failed"] == 0, result["counterexample"]
        coverage = result["coverage"]
        assert min(coverage[name] for name in ROUNDTRIP_CONSTRUCTORS[direction]) >= 5, coverage

    @pytest.mark.parametrize("in_ssc", [False, True])
    def test_cwf_laws(self, gen, in_ssc):
        """Test the CwF laws in both calculi."""
        reports = verify_cwf_syntax_laws(gen, 2, in_ssc=in_ssc)
        assert [report.name for report in reports] == CWF_SYNTAX_LAWS
        assert all(report.ok for report in reports)


ISO_COMPONENTS = ["ty-level", "tm-typing", "sub-typing", "ty-inst", "tm-inst", "id", "comp", "eps"]


class TestContextualIso:
    """Test the isomorphism between the termified model and the CwF syntax."""

    def test_no_instances(self, gen, checker):
        """Test that zero samples check nothing."""
        assert verify_contextual_iso(gen, TermifiedModel(checker), 0) == {}

    @pytest.mark.slow
    @pytest.mark.parametrize("mode", TERMIFY_MODES)
    def test_components(self, gen, checker, mode):
        """Test every component on one instance of each mode."""
        model = TermifiedModel(checker)
        results = check_contextual_iso(model, sample_termify_instance(gen, model, mode))
        assert sorted(results) == sorted(ISO_COMPONENTS)
        failed = {name: verdict.diagnostic for name, verdict in results.items() if not verdict}
        assert not failed

    @pytest.mark.slow
    def test_sampled_instances(self, gen, checker):
        """Test every component on fifty-one instances, seventeen of each mode."""
        results = verify_contextual_iso(gen, TermifiedModel(checker), 51)
        assert sorted(results) == sorted(ISO_COMPONENTS)
        failed = {name: verdict.diagnostic for name, verdict in results.items() if not verdict}
        assert not failed
