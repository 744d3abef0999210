import json

import pytest

from optwist import serialize as ser
from optwist.cli import main
from optwist.qcohom import gamma_t
from optwist.twisted import tw_com_fast


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def test_operad_check_writes_stamped_artifact(tmp_path):
    out = tmp_path / "check.json"
    assert main(["operad", "check", "--spec", "ass", "--max-arity", "3",
                 "--out", str(out)]) == 0
    doc = read_json(out)
    assert doc["schema_version"] == ser.SCHEMA_VERSION
    assert doc["meta"]["truncation"] == 3
    assert doc["meta"]["seed"] == 0
    assert doc["payload"]["failures"] == []


def test_operad_check_free_generators():
    assert main(["operad", "check", "--spec", "free:m:2", "--max-arity", "3"]) == 0
    assert main(["operad", "check", "--spec", "free:m:2,c:3", "--max-arity", "2"]) == 0


def test_bad_operad_spec_is_usage_error():
    assert main(["operad", "check", "--spec", "nope", "--max-arity", "2"]) == 2
    assert main(["operad", "check", "--spec", "free:m", "--max-arity", "2"]) == 2


def test_unknown_subcommand_exits_2(capsys):
    assert main(["frobnicate"]) == 2
    assert "usage" in capsys.readouterr().err


def test_unknown_flag_exits_2():
    assert main(["tw", "certify-com", "--max-arity", "2", "--frob"]) == 2


def test_certify_com_trivial_cap():
    assert main(["tw", "certify-com", "--max-arity", "0"]) == 0


def test_certify_ass_prints_hom_counts(tmp_path, capsys):
    out = tmp_path / "cert.json"
    assert main(["tw", "certify-ass", "--max-arity", "2",
                 "--out", str(out)]) == 0
    text = capsys.readouterr().out
    # row m=2: C(n+3, 3) for n = 0..2
    assert "1  4  10" in text
    doc = read_json(out)
    assert doc["payload"]["hom_counts"][2] == [1, 4, 10]


def test_tw_build_round_trips(tmp_path):
    out = tmp_path / "tw3.json"
    assert main(["tw", "build", "--operad", "com", "--max-arity", "3",
                 "--out", str(out)]) == 0
    C = ser.load(out)
    D = tw_com_fast(3)
    assert list(C.objects) == list(D.objects)
    assert {k: [t[2] for t in v] for k, v in C.homs.items()} == \
           {k: [t[2] for t in v] for k, v in D.homs.items()}


def test_tampered_dump_is_certified_failure(tmp_path):
    out = tmp_path / "tw2.json"
    main(["tw", "build", "--operad", "com", "--max-arity", "2",
          "--out", str(out)])
    doc = read_json(out)
    doc["payload"]["homs"][0]["arrows"].pop()
    out.write_text(json.dumps(doc))
    with pytest.raises(ser.SchemaError):
        ser.load(out)
    assert main(["ext", "--base", str(out), "--source", "const:1",
                 "--target", "const:1", "--degrees", "0..0"]) == 1


def test_schema_version_mismatch_is_versioned_error(tmp_path):
    out = tmp_path / "tw2.json"
    main(["tw", "build", "--operad", "com", "--max-arity", "2",
          "--out", str(out)])
    doc = read_json(out)
    doc["schema_version"] = 99
    out.write_text(json.dumps(doc))
    with pytest.raises(ser.SchemaError, match="99"):
        ser.load(out)


def test_empty_category_round_trip(tmp_path):
    path = tmp_path / "empty.json"
    E = ser.build_base("empty")
    ser.persist(E, path, ser.make_meta(None, 0, "none", 0), hint="empty")
    E2 = ser.load(path)
    assert E2.objects == () and E2.homs == {}


def test_functor_round_trip_and_file_source(tmp_path):
    path = tmp_path / "t2.json"
    T = gamma_t(2)
    ser.persist(T, path, ser.make_meta(0, 2, "none", 0), hint="gamma:2")
    T2 = ser.load(path)
    assert T2.dims == T.dims and T2.mats == T.mats and T2.p == T.p
    assert main(["ext", "--base", "gamma:2", "--source", f"file:{path}",
                 "--target", "t", "--degrees", "0..1"]) == 0
    # field mismatch between the dump and the requested computation
    assert main(["ext", "--base", "gamma:2", "--source", f"file:{path}",
                 "--target", "t", "--degrees", "0..1",
                 "--field", "fp:101"]) == 2


def test_sset_quasi_bytes_stable_across_threads(tmp_path):
    outs = []
    for name, threads in (("a", "1"), ("b", "1"), ("c", "4")):
        out = tmp_path / f"{name}.json"
        assert main(["sset", "quasi", "--input", "grid", "--dim", "2",
                     "--threads", threads, "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    doc = json.loads(outs[0])
    assert doc["payload"]["counts"] == {"0": "4", "1": "9", "2": "16"} or \
           doc["payload"]["counts"] == {"0": 4, "1": 9, "2": 16}


def test_sset_un_counts_match_simplex_counts(tmp_path):
    out = tmp_path / "un.csv"
    assert main(["sset", "un", "--variance", "right", "--input", "d1",
                 "--dim", "2", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "# schema_version: 1"
    assert any(line.startswith("# seed:") for line in lines)
    assert lines[-2:] == ["1,3", "2,4"]


def test_sset_input_file(tmp_path):
    from optwist.sset import boundary_simplex
    path = tmp_path / "bd2.json"
    X = boundary_simplex(2)
    doc = ser.artifact("sset", X.to_json(), ser.make_meta(None, 2, "none", 0))
    ser.dump_json(doc, path)
    assert main(["sset", "quasi", "--input", str(path), "--dim", "1"]) == 0


def test_ext_backends_agree_through_cli():
    assert main(["ext", "--base", "gamma:2", "--source", "t", "--target", "t",
                 "--degrees", "0..2", "--field", "fp:101",
                 "--backend", "both"]) == 0


def test_ext_usage_errors():
    assert main(["ext", "--base", "gamma:2", "--source", "t",
                 "--target", "eta", "--degrees", "0..1"]) == 2
    assert main(["ext", "--base", "gamma:2", "--source", "t", "--target", "t",
                 "--degrees", "2..0"]) == 2
    assert main(["ext", "--base", "nowhere:9", "--source", "t",
                 "--target", "t", "--degrees", "0..1"]) == 2
    assert main(["ext", "--base", "gamma:2", "--source", "t", "--target", "t",
                 "--degrees", "0..1", "--field", "fp:10"]) == 2


def test_qcohom_table_with_negative_degree(tmp_path):
    out = tmp_path / "q.json"
    assert main(["qcohom", "--operad", "ass", "--coeff", "const:1",
                 "--degrees=-1..1", "--max-arity", "2", "--field", "fp:101",
                 "--backend", "cover", "--out", str(out)]) == 0
    doc = read_json(out)
    assert doc["payload"]["table"] == {"-1": 0, "0": 0, "1": 0}
    assert doc["meta"]["field"] == "fp:101"
    assert doc["meta"]["backend"] == "cover"


def test_gamma_ext_t_csv_carries_meta(tmp_path):
    out = tmp_path / "g.csv"
    assert main(["gamma", "ext-t", "--target", "t", "--trunc", "2",
                 "--degrees", "0..1", "--field", "fp:101",
                 "--out", str(out)]) == 0
    text = out.read_text()
    assert "# field: fp:101" in text
    assert "# truncation: 2" in text
    assert text.splitlines()[-2:] == ["0,1", "1,0"]


def test_les_check_passes_and_reports(tmp_path):
    out = tmp_path / "les.json"
    assert main(["ass", "les-check", "--trunc", "2", "--top-degree", "2",
                 "--trials", "2", "--seed", "5", "--field", "fp:101",
                 "--out", str(out)]) == 0
    doc = read_json(out)
    assert len(doc["payload"]["results"]) == 4
    assert all(r["all_exact"] for r in doc["payload"]["results"])
    assert doc["meta"]["seed"] == 5


def test_csv_out_needs_tabular_artifact(tmp_path):
    out = tmp_path / "x.csv"
    assert main(["operad", "check", "--spec", "com", "--max-arity", "2",
                 "--out", str(out)]) == 2


def test_rand_spec_defaults_to_run_seed():
    a = main(["ext", "--base", "delta:2", "--source", "rand", "--target",
              "const:1", "--degrees", "0..0", "--field", "fp:101",
              "--seed", "3"])
    b = main(["ext", "--base", "delta:2", "--source", "rand:3", "--target",
              "const:1", "--degrees", "0..0", "--field", "fp:101"])
    assert a == 0 and b == 0
