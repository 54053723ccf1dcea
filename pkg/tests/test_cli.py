"""Tests for the ssc command line."""
import json

import pytest

from ssc_kernel.cli import build_parser, main
from ssc_kernel.const import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, MINIM_COUNT, STATUS_OK

IDENTITY = """
(def id tm (lam (lam q)) (Pi (U 0) (Pi (Lift (El q)) (tysub (Lift (El q)) p))))
"""

WEAKENED_UNIVERSE = """
(def G ctx (ctx Top))
(def A ty (U 0))
(def B ty (tysub (U 0) p))
"""


class TestCheck:
    """Test the check verb."""

    def test_identity(self, capsys, write_ssc):
        """Test that a well-typed declaration is accepted."""
        assert main(["check", write_ssc(IDENTITY)]) == EXIT_OK
        assert "id: ok" in capsys.readouterr().out

    def test_ill_typed(self, capsys, write_ssc):
        """Test that a rejected judgment fails with a diagnostic."""
        assert main(["check", write_ssc("(def bad tm tt (U 0))")]) == EXIT_FAILURE
        assert "bad: FAIL" in capsys.readouterr().out

    def test_json(self, capsys, write_ssc):
        """Test the machine-readable verdict."""
        assert main(["check", "--json", write_ssc(IDENTITY)]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert sorted(payload) == ["counterexample", "details", "status", "verb"]
        assert payload["status"] == STATUS_OK
        assert payload["details"]["verdicts"][0]["name"] == "id"

    def test_parse_error(self, capsys, write_ssc):
        """Test that malformed input is a usage error."""
        assert main(["check", write_ssc("(def A ty (U 0)")]) == EXIT_USAGE
        assert "error" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        """Test that an unreadable file is a usage error."""
        assert main(["check", str(tmp_path / "missing.ssc")]) == EXIT_USAGE


class TestConvAndTranslate:
    """Test the conv and translate verbs."""

    def test_weakened_universe(self, capsys, write_ssc):
        """Test that (U 0)[p] and U 0 are convertible."""
        assert main(["conv", write_ssc(WEAKENED_UNIVERSE)]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "convertible"

    def test_not_convertible(self, capsys, write_ssc):
        """Test that distinct universes are reported as different."""
        assert main(["conv", write_ssc("(def A ty (U 0))\n(def B ty (U 1))")]) == EXIT_FAILURE
        assert capsys.readouterr().out.startswith("not convertible")

    def test_needs_two_subjects(self, write_ssc):
        """Test that conv refuses a file with one subject."""
        assert main(["conv", write_ssc("(def A ty (U 0))")]) == EXIT_USAGE

    def test_translate_to_cwf(self, capsys, write_ssc):
        """Test translating a lifted weakening."""
        text = "(def G ctx (ctx Top Top))\n(def s sub (plus p))"
        assert main(["translate", "--to", "cwf", write_ssc(text)]) == EXIT_OK
        assert "(ext (comp p p) q)" in capsys.readouterr().out

    def test_normalize(self, capsys, write_ssc):
        """Test printing a normal form."""
        text = "(def G ctx (ctx Top))\n(def A ty (tysub (U 0) p))"
        assert main(["normalize", write_ssc(text)]) == EXIT_OK
        assert "A: ok (U 0)" in capsys.readouterr().out


class TestSampling:
    """Test the sampling verbs and their flags."""

    def test_no_samples(self):
        """Test that zero samples pass trivially."""
        assert main(["verify", "equations", "--count", "0"]) == EXIT_OK

    def test_negative_count(self, capsys):
        """Test that sampling flags are validated."""
        assert main(["verify", "equations", "--count", "-1"]) == EXIT_USAGE
        assert "error" in capsys.readouterr().err

    def test_per_verb_count_defaults(self):
        """Test that minim samples fewer instances by default."""
        args = build_parser().parse_args(["minim", "verify"])
        assert args.count == MINIM_COUNT

    def test_unknown_law(self):
        """Test that termify check validates the law name."""
        assert main(["termify", "check", "--laws", "ext-gamma", "--count", "0"]) == EXIT_USAGE

    @pytest.mark.slow
    def test_roundtrip(self, capsys):
        """Test a small roundtrip run in both directions."""
        assert main(["roundtrip", "--count", "3", "--depth", "2"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "ssc roundtrip" in out
        assert "cwf roundtrip" in out


class TestMinim:
    """Test the minim verb."""

    def test_derive(self, capsys):
        """Test printing and replaying one chain."""
        assert main(["minim", "derive", "[p][+]ty"]) == EXIT_OK
        assert "replayed" in capsys.readouterr().out

    def test_chains_replay(self):
        """Test that every built-in chain replays."""
        assert main(["minim", "verify", "--count", "0"]) == EXIT_OK

    def test_corrupted_chains_fail(self):
        """Test the negative control from the command line."""
        assert main(["minim", "verify", "--corrupt", "--count", "0"]) == EXIT_FAILURE


class TestTermifyIso:
    """Test the isomorphism rows of termify check."""

    def test_no_instances(self):
        """Test that the isomorphism check alone runs with zero samples."""
        assert main(["termify", "check", "--laws", "iso", "--count", "0"]) == EXIT_OK

    @pytest.mark.slow
    def test_iso_rows(self, capsys):
        """Test that every isomorphism component is reported."""
        assert main(["termify", "check", "--laws", "iso", "--count", "3", "--json"]) == EXIT_OK
        rows = json.loads(capsys.readouterr().out)["details"]["verdicts"]
        assert rows
        assert all(row["name"].startswith("iso ") for row in rows)


class TestExitCodes:
    """Test how errors map to exit codes."""

    def test_kernel_value_error_fails(self, capsys, monkeypatch):
        """Test that a value error raised while sampling is a failed run, not a usage error."""

        def broken(gen, count):
            raise ValueError("unknown equation")

        monkeypatch.setattr("ssc_kernel.cli.verify_equations", broken)
        assert main(["verify", "equations", "--count", "1"]) == EXIT_FAILURE
        assert "unknown equation" in capsys.readouterr().out

    def test_unknown_emit_op(self):
        """Test that argparse rejects an operation the model cannot emit."""
        with pytest.raises(SystemExit) as err:
            main(["termify", "emit", "frobnicate"])
        assert err.value.code == EXIT_USAGE


class TestDeterminism:
    """Test that a fixed seed gives the same report."""

    @pytest.mark.parametrize(
        "argv",
        [
            ["verify", "equations", "--count", "2", "--seed", "3"],
            pytest.param(["roundtrip", "--count", "3", "--depth", "2", "--seed", "3"], marks=pytest.mark.slow),
        ],
    )
    def test_same_seed_same_output(self, capsys, argv):
        """Test two runs with the same seed."""
        first_code = main(argv)
        first = capsys.readouterr().out
        second_code = main(argv)
        second = capsys.readouterr().out
        assert first
        assert (first_code, first) == (second_code, second)
