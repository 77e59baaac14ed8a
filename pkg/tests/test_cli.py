import copy
import csv
import io
import json
import shutil
import subprocess

import jsonschema
import pytest

from klideals import cli
from klideals.ideal import GroebnerReport

SCHEMA = cli.load_schema()

INVOCATIONS = [
    ["diagram", "31524"],
    ["diagram", "31524", "--ascii"],
    ["essential", "31524"],
    ["matrix", "261345"],
    ["matrix", "365124", "--rank"],
    ["minors", "261345", "365124"],
    ["minors", "43218765", "78564321", "--order", "diagonal"],
    ["groebner", "261345", "365124"],
    ["groebner", "--all", "--n", "3"],
    ["initial", "31452", "53142"],
    ["complex", "31452", "53142", "--decompose"],
    ["pipes", "31524", "13254"],
    ["pipes", "31524", "13254", "--reduced", "--strands"],
    ["gpoly", "31452", "53142", "--product-form"],
    ["gpoly", "31452", "53142", "--weights", "usual"],
    ["spoly", "31452", "53142", "--weights", "usual"],
    ["double", "13524"],
    ["double", "2143", "--kind", "grothendieck"],
    ["specialize", "31452", "53142"],
    ["kk", "31452", "53142", "--multidegree"],
    ["mult", "743198652", "975286431"],
    ["vmax", "316298475", "896354721"],
    ["homog", "31524", "43512", "--basis"],
    ["gamma", "--n", "3", "--records"],
    ["sample", "--n", "4", "--trials", "20", "--seed", "1"],
]


def invoke(argv):
    out = io.StringIO()
    code = cli.run(argv, out)
    return code, out.getvalue()


def invoke_json(argv):
    code, text = invoke(argv + ["--format", "json", "--jobs", "1"])
    assert code == 0, (argv, text)
    return json.loads(text)


@pytest.mark.parametrize("argv", INVOCATIONS, ids=lambda a: " ".join(a))
def test_json_validates(argv):
    doc = invoke_json(argv)
    jsonschema.validate(doc, SCHEMA)
    assert doc["command"] == argv[0]


class TestSchemaRejects:
    def doc(self):
        return invoke_json(["mult", "743198652", "975286431"])

    def test_missing_result(self):
        d = self.doc()
        del d["result"]
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(d, SCHEMA)

    def test_wrong_command_for_result(self):
        d = self.doc()
        d["command"] = "vmax"
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(d, SCHEMA)

    def test_bad_permutation_string(self):
        d = self.doc()
        d["result"]["v"] = "12a"
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(d, SCHEMA)

    def test_extra_envelope_key(self):
        d = self.doc()
        d["extra"] = 1
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(d, SCHEMA)

    def test_failed_sweep(self):
        d = invoke_json(["groebner", "--all", "--n", "3"])
        bad = copy.deepcopy(d)
        bad["result"]["failures"] = [["123", "321"]]
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(bad, SCHEMA)


class TestTextAndJsonAgree:
    def test_mult(self):
        code, text = invoke(["mult", "743198652", "975286431"])
        doc = invoke_json(["mult", "743198652", "975286431"])
        assert code == 0
        assert doc["result"]["value"] == 5
        assert "= 5" in text.splitlines()[0]
        assert doc["result"]["route"] in text
        for route, value in doc["result"]["routes"].items():
            assert f"{route}: {value}" in text

    def test_vmax(self):
        _, text = invoke(["vmax", "316298475", "896354721"])
        assert text.strip() == invoke_json(["vmax", "316298475", "896354721"])["result"]["vmax"] == "362198754"

    def test_homog(self):
        _, text = invoke(["homog", "31524", "43512", "--basis"])
        doc = invoke_json(["homog", "31524", "43512", "--basis"])["result"]
        assert doc["homogeneous"] is False and "homogeneous: no" in text
        assert sorted(doc["reduced_basis"]) == sorted(["z11", "z12", "z24*z42 - z22"])
        for b in doc["reduced_basis"]:
            assert b in text

    def test_pipes_counts(self):
        _, text = invoke(["pipes", "31524", "13254"])
        assert text.strip() == "|Pipes(31524, 13254)| = 9"
        assert invoke_json(["pipes", "31524", "13254", "--reduced"])["result"]["count"] == 4

    def test_complex(self):
        _, text = invoke(["complex", "31452", "53142"])
        doc = invoke_json(["complex", "31452", "53142"])["result"]
        assert doc["topology"]["kind"] == "ball" and doc["topology"]["facets"] == 3
        assert doc["interior_faces"] == 5
        assert "ball of dimension 2, 3 facets, 5 interior faces" in text

    def test_gamma(self):
        _, text = invoke(["gamma", "--n", "4", "--jobs", "1"])
        doc = invoke_json(["gamma", "--n", "4"])["result"]
        assert doc["total"] == 189 and doc["pct_route12"] == 100.0
        assert "|Γ_4| = 189" in text and f"{doc['route1']} ({doc['pct_route1']}%)" in text

    def test_sample(self):
        _, text = invoke(["sample", "--n", "5", "--trials", "30", "--seed", "2", "--jobs", "1"])
        doc = invoke_json(["sample", "--n", "5", "--trials", "30", "--seed", "2"])["result"]
        assert f"{doc['pct']}%" in text and str(doc["mean_rejections"]) in text


class TestFigures:
    def test_diagram_ascii(self):
        _, text = invoke(["diagram", "31524", "--ascii"])
        assert text.splitlines() == [
            "+---------------+",
            "| |  o--+--+--+-|",
            "| |  4  |  o--+-|",
            "| o-----+-----+-|",
            "| 2  3  |  4  o |",
            "| 1  2  o-------|",
            "+---------------+",
        ]

    def test_groebner_sweep_summary(self):
        _, text = invoke(["groebner", "--all", "--n", "4", "--jobs", "1"])
        assert text.strip() == "all Γ_4 pairs Gröbner-verified (189 pairs, 0 failures)"

    def test_product_form(self):
        doc = invoke_json(["gpoly", "31452", "53142", "--product-form"])["result"]
        assert len(doc["product_form"]) == 5
        assert all(s.startswith(("+ ", "- ")) for s in doc["product_form"])


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ["diagram", "1123"],
        ["mult", "321", "123"],
        ["mult", "123", "1234"],
        ["groebner"],
        ["groebner", "--all", "--n", "7"],
        ["gamma", "--n", "7"],
        ["sample", "--n", "9"],
        ["nonsense"],
    ])
    def test_usage(self, argv):
        assert invoke(argv)[0] == 2

    def test_budget(self):
        assert invoke(["groebner", "261345", "365124", "--budget", "2"])[0] == 4

    def test_budget_in_sweep_is_counted(self):
        doc = invoke_json(["groebner", "--all", "--n", "4", "--budget", "1"])["result"]
        assert doc["budget_exceeded"] and doc["verified"] + len(doc["budget_exceeded"]) == 189

    def test_invariant_violation(self, monkeypatch):
        monkeypatch.setattr(cli, "buchberger_verify", lambda G, budget=None: GroebnerReport(False, 1, 0, 2))
        assert invoke(["groebner", "261345", "365124"])[0] == 3

    def test_invariant_violation_in_initial(self, monkeypatch):
        monkeypatch.setattr(cli, "cross_sets", lambda v, t, r: ())
        assert invoke(["initial", "31452", "53142"])[0] == 3

    def test_version(self, capsys):
        assert invoke(["--version"])[0] == 0


class TestOptions:
    def test_jobs_do_not_change_output(self):
        a = invoke_json(["gamma", "--n", "4", "--jobs", "1"])
        code, text = invoke(["gamma", "--n", "4", "--jobs", "2", "--format", "json"])
        assert code == 0 and json.loads(text) == a

    def test_cache_dir(self, tmp_path):
        invoke(["kk", "31452", "53142", "--cache-dir", str(tmp_path)])
        files = list(tmp_path.glob("kostant_kumar_*.json"))
        assert len(files) == 1 and "31452,53142,last" in json.loads(files[0].read_text())

    def test_csv(self, tmp_path):
        path = tmp_path / "g3.csv"
        assert invoke(["gamma", "--n", "3", "--csv", str(path), "--jobs", "1"])[0] == 0
        rows = list(csv.reader(path.open()))
        assert rows[0][:3] == ["v", "w", "route"] and len(rows) == 14

    def test_environment_budget(self, monkeypatch):
        monkeypatch.setenv("KL_BUDGET", "2")
        assert invoke(["groebner", "261345", "365124"])[0] == 4


@pytest.mark.skipif(shutil.which("kl") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["kl", "vmax", "31524", "43512"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "41532"
    proc = subprocess.run(["kl", "mult", "321", "123"], capture_output=True, text=True)
    assert proc.returncode == 2 and "error" in proc.stderr
