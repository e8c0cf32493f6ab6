"""End-to-end tests for the command line interface.

Commands run in-process through ``cli.run`` so the tests can capture the
JSON payload and the exit code without spawning interpreters.
"""

import json

import pytest

from qform import cli
from qform.abelian import AbGroup, GroupHom, SubgroupRep, Z2, ZERO_GROUP, free_group
from qform.forms import EQForm, FormIso, hyperbolic
from qform.intmat import IntMatrix
from qform.lmonoid import standard_elementary
from qform.serialize import (
    canonical_dumps,
    form_to_doc,
    formation_to_doc,
    group_to_doc,
    iso_to_doc,
    subgroup_to_doc,
)

Z = free_group(1)
VZ = GroupHom.zero(Z, Z2)
V0 = GroupHom.zero(ZERO_GROUP, Z2)


def invoke(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


def write_doc(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(canonical_dumps(doc))
    return str(path)


# -- arithmetic subcommands --------------------------------------------


def test_si_example(capsys):
    code, doc, _ = invoke(capsys, "si", "--a", "1", "--b", "6")
    assert code == 0
    assert doc["size"] == 2
    assert doc["reps"] == [[1, 6], [2, 3]]


def test_stable_class_rank_zero(capsys):
    code, doc, _ = invoke(capsys, "stable-class", "--rkq", "0")
    assert code == 0
    assert doc["Sst"] == 1


def test_stable_class_rank_one_counts(capsys):
    code, doc, _ = invoke(capsys, "stable-class", "--rkq", "1", "--a", "1", "--b", "30")
    assert code == 0
    assert doc["Sst"] == 4


def test_kappa_flags_agree(capsys):
    code, doc, _ = invoke(capsys, "kappa", "--a", "3", "--b", "-1")
    assert code == 0
    assert doc["agree"] is True
    assert doc["kappa"]["mu"] == [[6]]


def test_oracle_si_matches_si(capsys):
    code, brute, _ = invoke(capsys, "oracle-si", "--a", "1", "--b", "30")
    code2, fast, _ = invoke(capsys, "si", "--a", "1", "--b", "30")
    assert code == 0 and code2 == 0
    assert brute["reps"] == fast["reps"] == [[1, 30], [2, 15], [3, 10], [5, 6]]


# -- validate ----------------------------------------------------------


def test_validate_hyperbolic_document(tmp_path, capsys):
    path = write_doc(tmp_path, "h2.json", form_to_doc(hyperbolic(1, Z, VZ)))
    code, doc, _ = invoke(capsys, "validate", "--input", path, "--strict")
    assert code == 0
    assert doc["kind"] == "form"
    assert doc["free"] and doc["nonsingular"] and doc["even"] and doc["geometric"]
    assert doc["full"] is False


def test_validate_formation_document(tmp_path, capsys):
    path = write_doc(tmp_path, "q.json", formation_to_doc(standard_elementary(1, Z, VZ)))
    code, doc, _ = invoke(capsys, "validate", "--input", path)
    assert code == 0
    assert (doc["kind"], doc["ok"]) == ("formation", True)
    assert doc["elementary"] is True


def test_validate_strict_rejects_noncanonical_bytes(tmp_path, capsys):
    path = tmp_path / "loose.json"
    path.write_text('{"free_rank": 1, "torsion": []}')  # no indent, no newline
    code, doc, _ = invoke(capsys, "validate", "--input", str(path), "--strict")
    assert code == 2
    assert "canonical" in doc["error"]
    code, doc, _ = invoke(capsys, "validate", "--input", str(path))
    assert code == 0  # fine without --strict


def test_validate_replays_sequences_and_reports_failures(tmp_path, capsys):
    from qform.lmonoid import MoveSequence, Stab, apply_move
    from qform.serialize import sequence_to_doc

    q = standard_elementary(1, Z, VZ)
    good = MoveSequence(q, apply_move(q, Stab(1)), (Stab(1),))
    path = write_doc(tmp_path, "seq.json", sequence_to_doc(good))
    code, doc, _ = invoke(capsys, "validate", "--input", path)
    assert code == 0 and doc["kind"] == "sequence" and doc["steps"] == 1

    bad = MoveSequence(q, q, (Stab(1),))  # wrong declared end
    path = write_doc(tmp_path, "bad.json", sequence_to_doc(bad))
    code, doc, _ = invoke(capsys, "validate", "--input", path)
    assert code == 2
    assert doc["ok"] is False
    assert "differs" in doc["reason"]


def test_validate_recomputes_command_results(tmp_path, capsys):
    h2 = hyperbolic(1, ZERO_GROUP, V0)
    l = SubgroupRep.from_elements(h2.group, [[0, 1]])
    pair = write_doc(tmp_path, "in.json", {"form": form_to_doc(h2), "subgroup": subgroup_to_doc(l)})
    out = str(tmp_path / "perp.json")
    code, doc, _ = invoke(capsys, "perp", "--input", pair, "--output", out)
    assert code == 0
    assert doc["perp"]["generators"] == [[0, 1]]
    code, doc, _ = invoke(capsys, "validate", "--input", out, "--strict")
    assert code == 0 and doc["ok"] is True

    tampered = json.loads(open(out).read())
    tampered["perp"]["generators"] = [[1, 0]]
    bad = write_doc(tmp_path, "tampered.json", tampered)
    code, doc, _ = invoke(capsys, "validate", "--input", bad)
    assert code == 2 and doc["ok"] is False


# -- witness pipelines -------------------------------------------------


def test_ru_wall_pipeline(tmp_path, capsys):
    h2 = hyperbolic(1, ZERO_GROUP, V0)
    phi = FormIso(h2, h2, GroupHom(h2.group, h2.group, IntMatrix.from_rows([[0, 1], [1, 0]])))
    path = write_doc(
        tmp_path,
        "rw.json",
        {
            "form": form_to_doc(h2),
            "lagrangian": subgroup_to_doc(SubgroupRep.from_elements(h2.group, [[0, 1]])),
            "iso": iso_to_doc(phi),
        },
    )
    out = str(tmp_path / "rw_out.json")
    code, doc, text = invoke(capsys, "ru-wall", "--input", path, "--output", out)
    assert code == 0
    assert open(out).read() == text
    assert doc["ambient"]["group"]["free_rank"] == 6
    code, doc, _ = invoke(capsys, "validate", "--input", out)
    assert code == 0 and doc["ok"] is True


def test_stable_iso_between_different_metabolic_forms(tmp_path, capsys):
    h2 = hyperbolic(1, ZERO_GROUP, V0)
    g = free_group(2)
    other = EQForm(g, IntMatrix.from_rows([[2, 1], [1, 0]]), GroupHom.zero(g, ZERO_GROUP), V0)
    path = write_doc(
        tmp_path,
        "si.json",
        {
            "source": {
                "form": form_to_doc(h2),
                "lagrangian": subgroup_to_doc(SubgroupRep.from_elements(h2.group, [[0, 1]])),
            },
            "target": {
                "form": form_to_doc(other),
                "lagrangian": subgroup_to_doc(SubgroupRep.from_elements(g, [[0, 1]])),
            },
        },
    )
    out = str(tmp_path / "si_out.json")
    code, doc, _ = invoke(capsys, "stable-iso", "--input", path, "--output", out)
    assert code == 0
    assert doc["iso"]["matrix"]  # a concrete witness is embedded
    code, doc, _ = invoke(capsys, "validate", "--input", out)
    assert code == 0 and doc["ok"] is True


def test_bar_and_ltriv_results_revalidate(tmp_path, capsys):
    q = standard_elementary(1, Z, VZ)
    path = write_doc(tmp_path, "q.json", formation_to_doc(q))
    for cmd in ("bar", "elementary", "ltriv"):
        out = str(tmp_path / (cmd + ".json"))
        code, _, _ = invoke(capsys, cmd, "--input", path, "--output", out)
        assert code == 0
        code, doc, _ = invoke(capsys, "validate", "--input", out)
        assert code == 0 and doc["ok"] is True, cmd


def test_zero_form_command(tmp_path, capsys):
    path = write_doc(tmp_path, "zf.json", {"group": group_to_doc(Z), "v": [0]})
    code, doc, _ = invoke(capsys, "zero-form", "--input", path)
    assert code == 0
    assert doc["formation"]["form"]["group"]["free_rank"] == 2


def test_oracle_lagrangians_and_iso(tmp_path, capsys):
    h2 = hyperbolic(1, ZERO_GROUP, V0)
    path = write_doc(tmp_path, "h2.json", form_to_doc(h2))
    code, doc, _ = invoke(capsys, "oracle-lagrangians", "--input", path, "--entry-bound", "2")
    assert code == 0
    assert doc["count"] == 2
    assert doc["lagrangians"] == [{"generators": [[0, 1]]}, {"generators": [[1, 0]]}]

    pair = write_doc(tmp_path, "pair.json", {"source": form_to_doc(h2), "target": form_to_doc(h2)})
    out = str(tmp_path / "iso.json")
    code, doc, _ = invoke(capsys, "oracle-iso", "--input", pair, "--output", out)
    assert code == 0
    assert doc["found"] and doc["exhaustive"]
    # with mu = 0 nothing pins the columns, and the swap precedes the
    # identity in candidate order
    assert doc["iso"]["matrix"] == [[0, 1], [1, 0]]
    code, doc, _ = invoke(capsys, "validate", "--input", out)
    assert code == 0 and doc["ok"] is True


# -- exit codes and diagnostics ----------------------------------------


def test_exit_2_on_schema_error(tmp_path, capsys):
    path = tmp_path / "junk.json"
    path.write_text('{"lambda": [[0, 1], [1, 0]]}\n')
    code, doc, _ = invoke(capsys, "invariants", "--input", str(path))
    assert code == 2
    assert doc["path"] == "input.group"


def test_exit_3_when_budget_runs_out(tmp_path, capsys):
    path = write_doc(tmp_path, "h2.json", form_to_doc(hyperbolic(1, ZERO_GROUP, V0)))
    code, doc, _ = invoke(capsys, "oracle-lagrangians", "--input", path, "--node-limit", "1")
    assert code == 3
    assert "node" in doc["error"]


def test_exit_4_names_the_failing_hypothesis(capsys):
    code, doc, _ = invoke(capsys, "stable-class", "--rkq", "1", "--a", "2", "--b", "4")
    assert code == 4
    assert doc["error"] == "pair is not coprime"


def test_node_limit_env_default(tmp_path, capsys, monkeypatch):
    path = write_doc(tmp_path, "h2.json", form_to_doc(hyperbolic(1, ZERO_GROUP, V0)))
    monkeypatch.setenv("QFORM_NODE_LIMIT", "1")
    code, _, _ = invoke(capsys, "oracle-lagrangians", "--input", path)
    assert code == 3
    # explicit flag beats the environment
    code, _, _ = invoke(capsys, "oracle-lagrangians", "--input", path, "--node-limit", "100000")
    assert code == 0


def test_missing_input_flag(capsys):
    code, doc, _ = invoke(capsys, "perp")
    assert code == 2
    assert "--input" in doc["error"]


def test_output_is_deterministic(capsys):
    _, _, first = invoke(capsys, "si", "--a", "2", "--b", "15")
    _, _, second = invoke(capsys, "si", "--a", "2", "--b", "15")
    assert first == second
    assert first.endswith("\n")
