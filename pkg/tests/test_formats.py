import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcyclic.errors import FileSyntaxError, ValidationError, VersionError
from pcyclic.exact_linalg import IntMatrix
from pcyclic.formats import (
    FORMAT_VERSION,
    diagram_statistics,
    load_lattice,
    parse_lattice,
    run_pipeline,
    serialize_lattice,
)
from pcyclic.lattice import (
    augmentation_ideal,
    cyclotomic_lattice,
    permutation_lattice,
    random_lattice,
    regular_lattice,
)
from pcyclic.yakovlev import build_diagram

PERMUTATION_FILE = """{
  "format_version": "1.0",
  "p": 3,
  "n": 1,
  "rank": 3,
  "action": [["0", "0", "1"], ["1", "0", "0"], ["0", "1", "0"]],
  "label": "Z[G/G0]",
  "provenance": "hand written"
}
"""


def test_parse_permutation_file():
    M = parse_lattice(PERMUTATION_FILE)
    assert (M.p, M.n, M.rank, M.label) == (3, 1, 3, "Z[G/G0]")
    assert M.action == regular_lattice(3, 1).action


def test_parse_accepts_bytes_and_plain_integers():
    doc = json.loads(PERMUTATION_FILE)
    doc["action"] = [[int(x) for x in row] for row in doc["action"]]
    M = parse_lattice(json.dumps(doc).encode("utf-8"))
    assert M.rank == 3


def test_order_check_failure():
    doc = {"format_version": "1.0", "p": 3, "n": 1, "rank": 2, "action": [["0", "1"], ["1", "0"]]}
    with pytest.raises(ValidationError) as info:
        parse_lattice(json.dumps(doc))
    assert info.value.field == "action"


def test_truncated_document_reports_location():
    with pytest.raises(FileSyntaxError) as info:
        parse_lattice(PERMUTATION_FILE[:60])
    assert info.value.line >= 1 and info.value.column >= 1
    assert "line" in str(info.value)


def test_invalid_utf8():
    with pytest.raises(FileSyntaxError):
        parse_lattice(b"\xff\xfe{}")


@pytest.mark.parametrize("patch, field", [
    ({"rank": "three"}, "rank"),
    ({"rank": True}, "rank"),
    ({"action": [["0", "0", "1"], ["1", "0", "0"]]}, "action"),
    ({"action": [["0", "0", "1.5"], ["1", "0", "0"], ["0", "1", "0"]]}, "action[0][2]"),
    ({"label": 7}, "label"),
])
def test_validation_errors_name_the_field(patch, field):
    doc = json.loads(PERMUTATION_FILE)
    doc.update(patch)
    with pytest.raises(ValidationError) as info:
        parse_lattice(json.dumps(doc))
    assert info.value.field == field


def test_missing_field_and_wrong_top_level():
    doc = json.loads(PERMUTATION_FILE)
    del doc["n"]
    with pytest.raises(ValidationError) as info:
        parse_lattice(json.dumps(doc))
    assert info.value.field == "n"
    with pytest.raises(ValidationError):
        parse_lattice("[1, 2]")


def test_version_check():
    doc = json.loads(PERMUTATION_FILE)
    doc["format_version"] = "2.0"
    with pytest.raises(VersionError):
        parse_lattice(json.dumps(doc))
    doc["format_version"] = "1.7"
    assert parse_lattice(json.dumps(doc)).rank == 3


def test_unknown_fields_strict_and_lenient():
    doc = json.loads(PERMUTATION_FILE)
    doc["comment"] = "extra"
    assert parse_lattice(json.dumps(doc)).rank == 3
    with pytest.raises(ValidationError) as info:
        parse_lattice(json.dumps(doc), strict=True)
    assert info.value.field == "comment"


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([1, 2]))
def test_round_trip_is_idempotent(seed, n):
    M, _ = random_lattice(3, n, seed)
    text = serialize_lattice(M, provenance=f"seed {seed}")
    again = serialize_lattice(parse_lattice(text), provenance=f"seed {seed}")
    assert text == again
    assert parse_lattice(text) == M


def test_serialized_form_uses_string_entries():
    doc = json.loads(serialize_lattice(augmentation_ideal(3, 2)))
    assert doc["format_version"] == FORMAT_VERSION
    assert all(isinstance(x, str) for row in doc["action"] for x in row)


def test_load_lattice(tmp_path):
    path = tmp_path / "perm.json"
    path.write_text(PERMUTATION_FILE, encoding="utf-8")
    assert load_lattice(str(path)).rank == 3


def test_report_for_permutation_lattice():
    text = run_pipeline(permutation_lattice(3, 2, 0), source="perm")
    assert "H1 = 0" in text
    assert "c = 0" in text and "c = 1" not in text
    assert "M1: 0" in text and "M2: 0" in text


def test_report_for_cyclotomic_lattice():
    text = run_pipeline(cyclotomic_lattice(3, 1, 1), source="cyc")
    assert "level 1: H1 = Z/3;" in text
    assert "c = 2" in text


def test_report_is_deterministic():
    M = augmentation_ideal(3, 2)
    assert run_pipeline(M, "x", seed=4) == run_pipeline(M, "x", seed=4)


def test_diagram_statistics_bound_generators_by_fixed_part():
    D = build_diagram(cyclotomic_lattice(3, 2, 2))
    lines = diagram_statistics(D)
    assert lines[0].startswith("  M1: rk_p=3 v_p=3")
    assert any("restriction maps 2->1" in line for line in lines)


def test_identity_action_file():
    M = parse_lattice(json.dumps({"format_version": "1.0", "p": 5, "n": 2, "rank": 1,
                                  "action": [["1"]]}))
    assert M.action == IntMatrix.identity(1)
