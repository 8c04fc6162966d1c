"""Command-line contract: JSON on stdout, stable exit codes."""

import json

import pytest
from click.testing import CliRunner

from relshift.algebras import algebra_to_json
from relshift.cli import main
from relshift.harness import bundled_corpus
from relshift.relations import Relation, relation_to_json


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def files(tmp_path):
    corpus = bundled_corpus()
    paths = {}
    for name in ("z2", "semilattice2", "implication2"):
        p = tmp_path / f"{name}.json"
        p.write_text(algebra_to_json(corpus[name]))
        paths[name] = str(p)
    order = Relation.from_pairs(
        corpus["semilattice2"].carrier,
        corpus["semilattice2"].carrier,
        [(0, 0), (1, 1), (0, 1)],
    )
    p = tmp_path / "order.json"
    p.write_text(relation_to_json(order))
    paths["order"] = str(p)
    diag = Relation.from_pairs(corpus["z2"].carrier, corpus["z2"].carrier, [(0, 0), (1, 1)])
    p = tmp_path / "diag.json"
    p.write_text(relation_to_json(diag))
    paths["diag"] = str(p)
    return paths


def run(runner, args):
    result = runner.invoke(main, args)
    # stdout always carries exactly one JSON document
    doc = json.loads(result.stdout)
    return result.exit_code, doc


class TestCheck:
    def test_z2_shifting_lemma_reflexive_holds(self, runner, files):
        code, doc = run(
            runner,
            [
                "check",
                "--algebra",
                files["z2"],
                "--property",
                "shifting-lemma",
                "--classes",
                "refl,refl,refl",
            ],
        )
        assert code == 0
        assert doc["verdict"] == "holds"

    def test_semilattice_shifting_lemma_violated_with_quadruple(self, runner, files):
        code, doc = run(
            runner,
            [
                "check",
                "--algebra",
                files["semilattice2"],
                "--property",
                "shifting-lemma",
                "--classes",
                "refl,refl,refl",
            ],
        )
        assert code == 1
        assert doc["verdict"] == "violated"
        assert len(doc["quadruple"]) == 4
        assert set(doc["triple"]) == {"R", "S", "T"}

    def test_missing_file_is_usage_error(self, runner):
        code, doc = run(
            runner,
            ["check", "--algebra", "/no/such/file.json", "--property", "difunctional"],
        )
        assert code == 2
        assert "/no/such/file.json" in doc["error"]

    def test_modular_lattice(self, runner, files):
        code, doc = run(
            runner,
            ["check", "--algebra", files["z2"], "--property", "modular-lattice"],
        )
        assert code == 0 and doc["modular"] is True

    def test_positive_with_witness(self, runner, files):
        code, doc = run(
            runner,
            [
                "check",
                "--algebra",
                files["z2"],
                "--property",
                "positive",
                "--R",
                files["diag"],
            ],
        )
        assert code == 0
        assert doc["positive"] is True
        assert doc["witness"]["pairs"] == [[0, 0], [1, 1]]

    def test_permutability(self, runner, files):
        code, doc = run(
            runner,
            [
                "check",
                "--algebra",
                files["z2"],
                "--property",
                "permutability",
                "--R",
                files["diag"],
                "--S",
                files["diag"],
            ],
        )
        assert code == 0 and doc["level"] == "2-permute"

    def test_bad_classes_spec(self, runner, files):
        code, doc = run(
            runner,
            [
                "check",
                "--algebra",
                files["z2"],
                "--property",
                "shifting-lemma",
                "--classes",
                "refl,bogus,refl",
            ],
        )
        assert code == 2


class TestWitness:
    def test_maltsev_on_semilattice_order(self, runner, files):
        code, doc = run(
            runner,
            [
                "witness",
                "maltsev",
                "--algebra",
                files["semilattice2"],
                "--relation",
                files["order"],
            ],
        )
        assert code == 0
        assert doc["kind"] == "maltsev"
        assert len(doc["quadruple"]) == 4

    def test_maltsev_on_symmetric_relation(self, runner, files):
        code, doc = run(
            runner,
            [
                "witness",
                "maltsev",
                "--algebra",
                files["z2"],
                "--relation",
                files["diag"],
            ],
        )
        assert code == 1
        assert doc["witness"] is None

    def test_goursat_on_equivalence(self, runner, files):
        code, doc = run(
            runner,
            [
                "witness",
                "goursat",
                "--algebra",
                files["z2"],
                "--relation",
                files["diag"],
            ],
        )
        assert code == 1


class TestTerms:
    def test_threeperm_on_implication(self, runner, files):
        code, doc = run(
            runner,
            ["terms", "threeperm", "--algebra", files["implication2"]],
        )
        assert code == 0
        assert doc["identity_set"] == "3perm"
        assert len(doc["r"]["table"]) == 8
        assert doc["s"]["term"].startswith("(")

    def test_maltsev_not_found_on_semilattice(self, runner, files):
        code, doc = run(
            runner,
            ["terms", "maltsev", "--algebra", files["semilattice2"]],
        )
        assert code == 1
        assert doc["status"] == "not_found"

    def test_tiny_budget_inconclusive(self, runner, files):
        code, doc = run(
            runner,
            ["terms", "maltsev", "--algebra", files["z2"], "--budget", "3"],
        )
        assert code == 3
        assert doc["status"] == "inconclusive"


class TestSuiteCommand:
    def test_directory_corpus_deterministic(self, runner, files, tmp_path):
        out1 = tmp_path / "r1.json"
        out2 = tmp_path / "r2.json"
        corpus_dir = tmp_path / "corpus"
        corpus_dir.mkdir()
        for name in ("z2", "semilattice2"):
            (corpus_dir / f"{name}.json").write_text(
                algebra_to_json(bundled_corpus()[name])
            )
        for out in (out1, out2):
            code, doc = run(
                runner,
                ["suite", "--corpus", str(corpus_dir), "--out", str(out), "--seed", "7"],
            )
            assert code == 0
        assert out1.read_text() == out2.read_text()
        report = json.loads(out1.read_text())
        assert report["schema"] == "relshift-report/1"
        assert set(report["algebras"]) == {"z2", "semilattice2"}


class TestValidate:
    def test_valid_algebra(self, runner, files):
        code, doc = run(runner, ["validate", "--file", files["z2"]])
        assert code == 0 and doc["kind"] == "algebra"

    def test_valid_relation(self, runner, files):
        code, doc = run(runner, ["validate", "--file", files["order"]])
        assert code == 0 and doc["kind"] == "relation"

    def test_invalid_file(self, runner, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"size": "nope"}')
        code, doc = run(runner, ["validate", "--file", str(p)])
        assert code == 2
        assert "error" in doc
