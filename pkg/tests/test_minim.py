"""Unit tests for the minimised calculus and its derivation chains."""
import pytest

from ssc_kernel.errors import StepMismatch
from ssc_kernel.minim import (
    DERIVATION_ORDER,
    FULL_ONLY_AXIOMS,
    MINIMISED_AXIOMS,
    RULES,
    Chain,
    Justification,
    Meta,
    Step,
    allowed_before,
    allowed_for,
    certify,
    chain_from_sexp,
    chain_to_sexp,
    corrupt_chain,
    derive_all,
    derive_full_axiom,
    equivalence_check,
    instantiate,
    match,
    replay,
    replay_strict,
    rewrite,
)
from ssc_kernel.syntax import EMPTY, App, Code, El, P, Q, Top, Tt, TySub, U


def _u_beta_chain() -> Chain:
    return Chain("U-beta at Top", EMPTY, El(Code(Top())), (Step(Top(), Justification("U-beta")),))


class TestMatching:
    """Test schema matching and instantiation."""

    def test_binds_levels_and_substitutions(self):
        """Test that metavariables bind nodes and universe levels."""
        found = match(TySub(U(Meta("i")), Meta("g")), TySub(U(0), P()), {})
        assert found == {"i": 0, "g": P()}

    def test_repeated_metavariable(self):
        """Test that a repeated metavariable must bind the same node twice."""
        assert match(App(Meta("t"), Meta("t")), App(Q(), Tt()), {}) is None
        assert match(App(Meta("t"), Meta("t")), App(Q(), Q()), {}) == {"t": Q()}

    def test_instantiate(self):
        """Test filling a schema and the error on an unbound name."""
        assert instantiate(El(Meta("a")), {"a": Q()}) == El(Q())
        with pytest.raises(KeyError):
            instantiate(El(Meta("a")), {})

    def test_rewrite(self):
        """Test rewriting with plain rules until nothing applies."""
        assert rewrite(El(Code(TySub(Top(), P()))), [RULES["U-beta"]]) == TySub(Top(), P())


class TestAxiomSets:
    """Test how the two calculi split their equations."""

    def test_disjoint(self):
        """Test that no dropped equation is kept as an axiom."""
        assert not set(MINIMISED_AXIOMS) & set(FULL_ONLY_AXIOMS)

    def test_first_derivation_uses_only_axioms(self):
        """Test that the first lemma may only cite minimised axioms."""
        assert allowed_before(DERIVATION_ORDER[0]) == frozenset(MINIMISED_AXIOMS)

    def test_later_derivations_see_earlier_lemmas(self):
        """Test that lemmas accumulate in derivation order."""
        allowed = allowed_before(DERIVATION_ORDER[2])
        assert set(DERIVATION_ORDER[:2]) <= allowed
        assert DERIVATION_ORDER[2] not in allowed

    def test_unknown_equation(self):
        """Test that only dropped equations have a derivation slot."""
        with pytest.raises(ValueError):
            allowed_before("U-beta")
        with pytest.raises(ValueError):
            derive_full_axiom("U-beta")


class TestReplay:
    """Test replaying equational chains."""

    def test_single_step(self):
        """Test that an instance of an allowed rule replays."""
        assert replay(_u_beta_chain(), {"U-beta"})

    def test_rule_outside_allowed_set(self):
        """Test that citing a rule that is not allowed fails."""
        verdict = replay(_u_beta_chain(), set())
        assert not verdict
        assert "outside the allowed set" in verdict.diagnostic

    def test_wrong_rule(self):
        """Test that citing a rule the step does not instantiate fails."""
        chain = Chain("wrong", EMPTY, El(Code(Top())), (Step(Top(), Justification("Lift-beta")),))
        with pytest.raises(StepMismatch) as err:
            replay_strict(chain, RULES)
        assert err.value.index == 0

    def test_empty_chain(self):
        """Test that a chain needs at least one step."""
        with pytest.raises(StepMismatch):
            replay_strict(Chain("empty", EMPTY, Top(), ()), RULES)


class TestDerivations:
    """Test the derivations of the dropped equations."""

    @pytest.mark.parametrize("name", DERIVATION_ORDER)
    def test_certify(self, name):
        """Test that each built-in chain replays from earlier results only."""
        verdict = certify(name)
        assert verdict, verdict.diagnostic

    def test_derive_all(self):
        """Test that every dropped equation is certified in order."""
        verdicts = derive_all()
        assert list(verdicts) == DERIVATION_ORDER
        assert all(verdicts.values())

    def test_corrupted_chain_fails(self):
        """Test the negative control."""
        chain = derive_full_axiom("[p][+]ty")
        corrupted = corrupt_chain(chain)
        assert not replay(corrupted, allowed_for(chain))
        with pytest.raises(StepMismatch) as err:
            replay_strict(corrupted, allowed_for(chain))
        assert err.value.index == len(chain.steps) // 2

    def test_declaration_roundtrip(self):
        """Test that a printed chain reads back as the same steps."""
        chain = derive_full_axiom("[p][+]ty")
        parsed = chain_from_sexp(chain.name, chain_to_sexp(chain))
        assert parsed.start == chain.start
        assert parsed.steps == chain.steps
        assert replay(parsed, allowed_for(parsed))

    @pytest.mark.slow
    def test_equivalence(self, gen):
        """Test both directions of interderivability on samples."""
        result = equivalence_check(gen, 2)
        assert all(report.ok for report in result["derived"])
        assert all(report.ok for report in result["admitted"])
