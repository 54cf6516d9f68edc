import json

from robustci import (
    JointDistribution,
    RobustnessStructure,
    StateSpace,
    StructureParams,
    build_from_structure,
    build_graph,
    check_product_form,
    components_of,
    make_uniform_spec,
)
from robustci.cli import main
from robustci.model import distribution_to_json, model_to_json
from fractions import Fraction


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def cube_model(tmp_path, k=2):
    space = StateSpace(2, (2, 2, 2))
    return write_json(tmp_path / "model.json", model_to_json(space, uniform_k=k)), space


class TestGraphCommand:
    def test_cube_counts(self, tmp_path):
        model_path, _ = cube_model(tmp_path)
        out = tmp_path / "graph.json"
        assert main(["graph", "--model", model_path, "--out", str(out)]) == 0
        obj = json.loads(out.read_text())
        assert len(obj["vertices"]) == 8
        assert len(obj["edges"]) == 12
        assert all(e["witness"] is not None for e in obj["edges"])

    def test_complete_graph_edge_count(self, tmp_path):
        model_path, _ = cube_model(tmp_path, k=0)
        out = tmp_path / "graph.json"
        assert main(["graph", "--model", model_path, "--out", str(out)]) == 0
        obj = json.loads(out.read_text())
        assert len(obj["edges"]) == 28

    def test_malformed_json_no_partial_output(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{ not json")
        out = tmp_path / "never.json"
        assert main(["graph", "--model", str(bad), "--out", str(out)]) == 2
        assert not out.exists()

    def test_byte_identical_across_runs(self, tmp_path):
        model_path, _ = cube_model(tmp_path)
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        main(["graph", "--model", model_path, "--out", str(out1)])
        main(["graph", "--model", model_path, "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()


class TestStructuresCommand:
    def test_k0_single_structure(self, tmp_path):
        model_path, _ = cube_model(tmp_path, k=0)
        out = tmp_path / "structures.json"
        assert main(["structures", "--model", model_path, "--out", str(out)]) == 0
        obj = json.loads(out.read_text())
        assert obj["count"] == 1
        assert len(obj["structures"][0]["blocks"]) == 1

    def test_cube_taxonomy_fully_classified(self, tmp_path):
        model_path, _ = cube_model(tmp_path)
        out = tmp_path / "structures.json"
        assert main([
            "structures", "--model", model_path,
            "--classify-complements", "--out", str(out),
        ]) == 0
        obj = json.loads(out.read_text())
        assert obj["count"] == 17
        classes = [s["complement_class"] for s in obj["structures"]]
        assert "unclassified" not in classes

    def test_product_form_for_two_inputs(self, tmp_path):
        space = StateSpace(2, (2, 2))
        model_path = write_json(tmp_path / "m.json", model_to_json(space, uniform_k=1))
        out = tmp_path / "structures.json"
        assert main(["structures", "--model", model_path, "--out", str(out)]) == 0
        obj = json.loads(out.read_text())
        for item in obj["structures"]:
            blocks = [[tuple(x) for x in block] for block in item["blocks"]]
            structure = RobustnessStructure.from_blocks(space, blocks)
            assert check_product_form(structure, space)

    def test_all_mode_reports_maximality(self, tmp_path):
        space = StateSpace(2, (2,))
        model_path = write_json(tmp_path / "m.json", model_to_json(space, uniform_k=0))
        out = tmp_path / "structures.json"
        assert main(["structures", "--model", model_path, "--all", "--out", str(out)]) == 0
        obj = json.loads(out.read_text())
        assert obj["count"] == 4  # every subset of a two-element space
        assert sum(1 for s in obj["structures"] if s["maximal"]) == 1


class TestCheckCommand:
    def test_built_distribution_is_robust(self, tmp_path):
        space = StateSpace(2, (2, 2))
        spec = make_uniform_spec(1, space)
        graph = build_graph(spec, space)
        structure = components_of(graph, space.configs())
        params = StructureParams(
            block_weights=(Fraction(1),),
            config_weights=((Fraction(1, 4),) * 4,),
            output_dists=((Fraction(1, 3), Fraction(2, 3)),),
        )
        dist = build_from_structure(structure, params)
        model_path = write_json(tmp_path / "m.json", model_to_json(space, uniform_k=1))
        dist_path = write_json(tmp_path / "d.json", distribution_to_json(dist))
        out = tmp_path / "report.json"
        assert main(["check", "--model", model_path, "--dist", dist_path, "--out", str(out)]) == 0
        obj = json.loads(out.read_text())
        assert obj["robust"] is True and obj["failing_statement"] is None
        assert obj["structure"] == [[list(x) for x in space.configs()]]

    def test_output_copies_input_not_robust(self, tmp_path):
        space = StateSpace(2, (2, 2))
        table = {}
        for x in space.configs():
            for x0 in (1, 2):
                table[(x0, x)] = Fraction(1, 4) if x0 == x[0] else Fraction(0)
        dist = JointDistribution(space, table)
        model_path = write_json(tmp_path / "m.json", model_to_json(space, uniform_k=1))
        dist_path = write_json(tmp_path / "d.json", distribution_to_json(dist))
        out = tmp_path / "report.json"
        assert main(["check", "--model", model_path, "--dist", dist_path, "--out", str(out)]) == 1
        obj = json.loads(out.read_text())
        assert obj["robust"] is False
        assert obj["failing_statement"]["witness_minor"]["lhs"] != obj["failing_statement"]["witness_minor"]["rhs"]

    def test_uniform_table_robust(self, tmp_path):
        space = StateSpace(2, (2, 2))
        dist = JointDistribution.uniform(space)
        model_path = write_json(tmp_path / "m.json", model_to_json(space, uniform_k=0))
        dist_path = write_json(tmp_path / "d.json", distribution_to_json(dist))
        assert main(["check", "--model", model_path, "--dist", dist_path]) == 0

    def test_invalid_distribution_exits_2(self, tmp_path, capsys):
        space = StateSpace(2, (2, 2))
        model_path = write_json(tmp_path / "m.json", model_to_json(space, uniform_k=1))
        dist_path = write_json(tmp_path / "d.json", {
            "entries": [{"x0": 1, "x": [1, 1], "p": "3/4"}],
        })
        assert main(["check", "--model", model_path, "--dist", dist_path]) == 2
        out = capsys.readouterr().out
        assert "sum != 1" in out


class TestGroebnerCommand:
    def test_single_edge_d3_verified(self, tmp_path):
        space = StateSpace(3, (2,))
        model_path = write_json(tmp_path / "m.json", model_to_json(space, uniform_k=0))
        out = tmp_path / "basis.json"
        assert main([
            "groebner", "--model", model_path, "--verify", "--out", str(out),
        ]) == 0
        obj = json.loads(out.read_text())
        assert obj["element_count"] == 3
        assert all(obj["verification"].values())

    def test_explicit_graph_file(self, tmp_path):
        graph_obj = {
            "space": {"d0": 2, "d": [3]},
            "vertices": [[1], [2], [3]],
            "edges": [
                {"u": [1], "v": [3], "witness": None},
                {"u": [2], "v": [3], "witness": None},
            ],
        }
        graph_path = write_json(tmp_path / "g.json", graph_obj)
        out = tmp_path / "basis.json"
        assert main([
            "groebner", "--graph", graph_path, "--d0", "2", "--verify", "--out", str(out),
        ]) == 0
        obj = json.loads(out.read_text())
        assert obj["element_count"] == 3

    def test_text_format(self, tmp_path):
        space = StateSpace(2, (2,))
        model_path = write_json(tmp_path / "m.json", model_to_json(space, uniform_k=0))
        out = tmp_path / "basis.txt"
        assert main([
            "groebner", "--model", model_path, "--format", "text", "--out", str(out),
        ]) == 0
        assert "p[2;2]*p[1;1] - p[2;1]*p[1;2]" in out.read_text()

    def test_cap_exit_code(self, tmp_path):
        model_path, _ = cube_model(tmp_path)
        assert main([
            "groebner", "--model", model_path, "--cap-vertices", "4",
        ]) == 3

    def test_verification_failure_exit_code(self, tmp_path):
        # the literal antitone range yields a correct but non-reduced basis
        graph_obj = {
            "space": {"d0": 2, "d": [3]},
            "vertices": [[1], [2], [3]],
            "edges": [
                {"u": [1], "v": [2], "witness": None},
                {"u": [1], "v": [3], "witness": None},
            ],
        }
        graph_path = write_json(tmp_path / "g.json", graph_obj)
        out = tmp_path / "basis.json"
        assert main([
            "groebner", "--graph", graph_path, "--verify",
            "--antitone-range", "literal", "--out", str(out),
        ]) == 4
        obj = json.loads(out.read_text())
        assert obj["verification"]["reduced"] is False
        assert obj["verification"]["buchberger_criterion"] is True

    def test_requires_model_or_graph(self):
        assert main(["groebner"]) == 2


class TestDecomposeCommand:
    def test_single_edge_model(self, tmp_path):
        space = StateSpace(2, (2,))
        model_path = write_json(tmp_path / "m.json", model_to_json(space, uniform_k=1))
        out = tmp_path / "report.json"
        assert main([
            "decompose", "--model", model_path, "--trials", "50", "--out", str(out),
        ]) == 0
        obj = json.loads(out.read_text())
        assert obj["legs"]["intersection_equality"] is True
        assert obj["counterexamples"] == []

    def test_cube_model_intersection_skipped(self, tmp_path):
        model_path, _ = cube_model(tmp_path)
        out = tmp_path / "report.json"
        assert main([
            "decompose", "--model", model_path, "--trials", "25", "--out", str(out),
        ]) == 0
        obj = json.loads(out.read_text())
        assert obj["legs"]["intersection_equality"] == "skipped"
        assert obj["legs"]["membership"] is True
        assert obj["legs"]["non_containment"] is True

    def test_edgeless_model_single_admissible_family(self, tmp_path):
        space = StateSpace(2, (2, 2))
        model_path = write_json(tmp_path / "m.json", model_to_json(space, uniform_k=2))
        out = tmp_path / "report.json"
        assert main([
            "decompose", "--model", model_path, "--trials", "25", "--out", str(out),
        ]) == 0
        obj = json.loads(out.read_text())
        assert obj["admissible_Y"] == [[[1, 1], [1, 2], [2, 1], [2, 2]]]


class TestGibbsCommand:
    def test_neuron_round_trip(self, tmp_path):
        out = tmp_path / "report.json"
        assert main(["gibbs", "--neuron", "1,-2", "--out", str(out)]) == 0
        obj = json.loads(out.read_text())
        assert obj["roundtrip_sup_error"] <= 1e-9

    def test_uniform_modalities_all_robust(self, tmp_path):
        from robustci.gibbs import modalities_to_json, uniform_modalities

        mods = uniform_modalities(StateSpace(2, (2, 2)))
        mods_path = write_json(tmp_path / "mods.json", modalities_to_json(mods))
        out = tmp_path / "report.json"
        assert main(["gibbs", "--modalities", str(mods_path), "--k", "1", "--out", str(out)]) == 0
        obj = json.loads(out.read_text())
        assert all(entry["robust"] for entry in obj["robustness"])
        assert obj["tilde_constraints"]["low_order_ok"]

    def test_nonpositive_kernels_exit_2(self, tmp_path):
        mods_obj = {
            "n": 1, "d0": 2, "d": [2],
            "kernels": {
                "": {"": ["1.0", "0.0"]},
                "1": {"1": ["0.5", "0.5"], "2": ["0.5", "0.5"]},
            },
        }
        mods_path = write_json(tmp_path / "mods.json", mods_obj)
        assert main(["gibbs", "--modalities", str(mods_path)]) == 2

    def test_needs_input(self):
        assert main(["gibbs"]) == 2


class TestEnvironment:
    def test_bad_thread_cap_rejected(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ROBUSTCI_THREADS", "zero")
        model_path, _ = cube_model(tmp_path)
        assert main(["graph", "--model", model_path]) == 2

    def test_thread_cap_accepted(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ROBUSTCI_THREADS", "4")
        model_path, _ = cube_model(tmp_path)
        assert main(["graph", "--model", model_path, "--out", str(tmp_path / "g.json")]) == 0
