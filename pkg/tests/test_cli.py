import json
from importlib import resources

import pytest
from jsonschema import validate

from divcalc import cli
from divcalc.enumeration import FIXTURES, CaseFixture


def run(capsys, argv):
    rc = cli.main(argv)
    out = capsys.readouterr().out
    return rc, out


def run_json(capsys, argv):
    rc, out = run(capsys, argv)
    return rc, json.loads(out)


@pytest.fixture(scope="module")
def schema():
    path = (resources.files("divcalc") / "data" / "schemas"
            / "runreport.schema.json")
    return json.loads(path.read_text())


GOOD_JSON_COMMANDS = [
    ["pair", "--surface", "sigma2", "--curve", "H", "--curve", "G1"],
    ["self", "--surface", "sigma1", "--curve", "-2K"],
    ["genus", "--surface", "blq", "--curve", "-2K"],
    ["chi", "--surface", "sigma3", "--curve", "-2K"],
    ["phi", "--config", "pencil-pair-1", "--curve", "E+2E1"],
    ["reflect", "--surface", "enriques", "--curve", "U1+U2",
     "--nodal", "U1-U2"],
    ["enumerate", "--surface", "blq", "--curve", "-2K", "--k", "4"],
    ["destab"],
    ["gonality", "--l2", "30", "--phi", "5"],
    ["cliff", "--d", "8", "--h0", "3"],
    ["gaussian", "--rule", "main", "--l2", "12", "--phi", "2",
     "--deg-m", "8", "--h1-m", "0", "--h0-residual", "1"],
    ["corank", "--g", "3", "--h1-m", "0", "--cork-mu", "0",
     "--aux", "4K-M=8"],
    ["scroll", "--g", "7", "--b1", "2"],
    ["b2rule", "--l2", "12", "--phi", "2"],
    ["verify", "--case", "g1kondelp-b"],
    ["surface", "--surface", "sigma3"],
]


@pytest.mark.parametrize(
    "argv", GOOD_JSON_COMMANDS, ids=lambda a: a[0])
def test_every_subcommand_emits_a_valid_report(capsys, schema, argv):
    rc, doc = run_json(capsys, argv + ["--json"])
    assert rc == 0
    validate(doc, schema)
    assert doc["command"][1] == argv[0]


class TestArithmeticCommands:
    def test_pair_value(self, capsys):
        rc, doc = run_json(
            capsys,
            ["pair", "--surface", "sigma2", "--curve", "H", "--curve",
             "G1", "--json"],
        )
        assert rc == 0 and doc["result"]["value"] == 0

    def test_self_fuses_leading_dash(self, capsys):
        rc, out = run(
            capsys, ["self", "--surface", "sigma1", "--curve", "-2K"])
        assert rc == 0
        assert "32" in out

    def test_pair_needs_exactly_two(self, capsys):
        rc, _ = run(capsys, ["pair", "--surface", "sigma2", "--curve", "H"])
        assert rc == 1

    def test_genus_text_output(self, capsys):
        rc, out = run(capsys, ["genus", "--surface", "blq", "--curve", "-2K"])
        assert rc == 0 and "9" in out

    def test_phi_boxed_mode(self, capsys):
        rc, doc = run_json(
            capsys,
            ["phi", "--surface", "enriques", "--curve", "U1+2U2",
             "--box", "2", "--json"],
        )
        assert rc == 0
        assert doc["result"]["certified"] is False

    def test_reflect_swaps_the_hyperbolic_pair(self, capsys):
        rc, doc = run_json(
            capsys,
            ["reflect", "--surface", "enriques", "--curve", "U1",
             "--nodal", "U1-U2", "--json"],
        )
        assert rc == 0
        assert doc["result"]["image"] == "U2"


class TestSurfaceLoading:
    def test_surface_listing(self, capsys):
        rc, doc = run_json(capsys, ["surface", "--json"])
        assert rc == 0
        assert "enriques" in doc["result"]["surfaces"]
        assert "pencil-pair-1" in doc["result"]["configs"]

    def test_unknown_surface(self, capsys):
        rc, _ = run(capsys, ["self", "--surface", "sigma99", "--curve", "H"])
        assert rc == 1

    def test_surface_and_config_conflict(self, capsys):
        rc, _ = run(
            capsys,
            ["self", "--surface", "blq", "--config", "pencil-pair-1",
             "--curve", "E"],
        )
        assert rc == 1

    def test_config_from_file(self, capsys, tmp_path):
        doc = {
            "labels": ["E", "F"],
            "pairs": [[0, 1, 2]],
        }
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps(doc))
        rc, rep = run_json(
            capsys,
            ["self", "--config", str(p), "--curve", "E+F", "--json"],
        )
        assert rc == 0 and rep["result"]["square"] == 4

    def test_surface_path_env(self, capsys, tmp_path, monkeypatch):
        doc = {
            "name": "toy",
            "basis": ["A", "B"],
            "gram": [[0, 1], [1, 0]],
            "canonical": [0, 0],
            "chi": 1,
            "kind": "generic",
        }
        (tmp_path / "toy.json").write_text(json.dumps(doc))
        monkeypatch.setenv("DIVCALC_SURFACE_PATH", str(tmp_path))
        rc, rep = run_json(
            capsys, ["self", "--surface", "toy", "--curve", "A+B", "--json"])
        assert rc == 0 and rep["result"]["square"] == 2
        assert rep["surface"] == "toy"


class TestExitCodes:
    def test_usage_error(self, capsys):
        rc = cli.main(["gonality", "--l2", "12"])
        capsys.readouterr()
        assert rc == 1

    def test_validation_error(self, capsys):
        rc = cli.main(["gonality", "--l2", "4", "--phi", "3"])
        cap = capsys.readouterr()
        assert rc == 1
        assert "phi" in cap.err

    def test_strict_no_conclusion(self, capsys):
        argv = ["gaussian", "--rule", "main", "--l2", "10", "--phi", "2",
                "--deg-m", "8", "--h0-residual", "1"]
        rc, _ = run(capsys, argv)
        assert rc == 0
        rc, _ = run(capsys, argv + ["--strict"])
        assert rc == 2

    def test_strict_b2rule_unknown(self, capsys):
        rc, _ = run(capsys, ["b2rule", "--l2", "10", "--phi", "2",
                             "--strict"])
        assert rc == 2

    def test_strict_leaves_success_alone(self, capsys):
        rc, _ = run(capsys, ["b2rule", "--l2", "12", "--phi", "2",
                             "--strict"])
        assert rc == 0

    def test_unknown_subcommand(self, capsys):
        rc = cli.main(["frobnicate"])
        capsys.readouterr()
        assert rc == 1

    def test_bad_aux_syntax(self, capsys):
        rc = cli.main(["corank", "--g", "3", "--aux", "4K-M"])
        cap = capsys.readouterr()
        assert rc == 1
        assert "KEY=INT" in cap.err


class TestGaussianCommand:
    def test_main_derives_genus_from_l2(self, capsys):
        rc, doc = run_json(
            capsys,
            ["gaussian", "--rule", "main", "--l2", "12", "--phi", "2",
             "--deg-m", "8", "--h1-m", "0", "--h0-residual", "1", "--json"],
        )
        assert rc == 0
        assert doc["result"]["rule"] == "main-(iv)"
        assert doc["result"]["inputs_echo"]["g"] == 7

    def test_tetragonal_rule(self, capsys):
        rc, doc = run_json(
            capsys,
            ["gaussian", "--rule", "tetragonal", "--h0-2k-minus-m", "1",
             "--h0-2k-minus-m-b2a", "0", "--json"],
        )
        assert rc == 0 and doc["result"]["status"] == "SURJECTIVE"

    def test_degree_rule(self, capsys):
        rc, doc = run_json(
            capsys,
            ["gaussian", "--rule", "degree", "--g", "6", "--deg-m", "20",
             "--json"],
        )
        assert rc == 0 and doc["result"]["rule"] == "degree-general"

    def test_missing_evidence(self, capsys):
        rc = cli.main(
            ["gaussian", "--rule", "main", "--l2", "10", "--phi", "2",
             "--deg-m", "8"])
        cap = capsys.readouterr()
        assert rc == 1
        assert "h0_residual" in cap.err


class TestVerifyCommand:
    def test_all_prints_thirteen_pass_lines(self, capsys):
        rc, out = run(capsys, ["verify", "--all"])
        assert rc == 0
        lines = [ln for ln in out.splitlines() if ln.startswith("PASS")]
        assert len(lines) == 13

    def test_unknown_case(self, capsys):
        rc, _ = run(capsys, ["verify", "--case", "nope"])
        assert rc == 1

    def test_needs_exactly_one_selector(self, capsys):
        rc, _ = run(capsys, ["verify"])
        assert rc == 1
        rc, _ = run(capsys, ["verify", "--case", "g1kondelp-a", "--all"])
        assert rc == 1

    def test_fixture_failure_sets_exit_code(self, capsys, monkeypatch):
        fx = FIXTURES["g1kondelp-a"]
        broken = CaseFixture(
            case_id=fx.case_id, kind=fx.kind, surface=fx.surface,
            curve=fx.curve, k=fx.k, mod4=fx.mod4,
            expected=(("H-G1", 0),), golden=fx.golden, killed=fx.killed,
            identities=fx.identities, notes=fx.notes,
        )
        monkeypatch.setitem(FIXTURES, "g1kondelp-a", broken)
        rc, out = run(capsys, ["verify", "--case", "g1kondelp-a"])
        assert rc == 1
        assert "FAIL" in out

    def test_single_case_json_is_an_object(self, capsys):
        rc, doc = run_json(
            capsys, ["verify", "--case", "g1kondelp-j", "--json"])
        assert rc == 0
        assert doc["result"]["case"] == "g1kondelp-j"


class TestReportEnvelope:
    def test_envelope_fields(self, capsys):
        rc, doc = run_json(
            capsys, ["self", "--surface", "blq", "--curve", "f", "--json"])
        assert rc == 0
        assert doc["command"][:2] == ["divcalc", "self"]
        assert doc["surface"] == "blq"
        assert isinstance(doc["elapsed_ms"], int)

    def test_surface_null_for_pure_numeric_commands(self, capsys):
        rc, doc = run_json(
            capsys, ["gonality", "--l2", "6", "--phi", "2", "--json"])
        assert rc == 0
        assert doc["surface"] is None

    def test_version_flag(self, capsys):
        rc = cli.main(["--version"])
        assert rc == 0
        assert "0.1.0" in capsys.readouterr().out
