"""CLI surface: every verb, exit codes, deterministic reports, artifacts."""

import json

from weildescent.cli import run
from weildescent.fields import RATIONAL, field_make
from weildescent.finite import SymplecticSpace, fq_field, psi_standard
from weildescent.linalg import Matrix
from weildescent.weil import parity_matrix, weil_rep


def run_json(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = run(argv + ["--out", str(out)])
    return code, json.loads(out.read_text())


def test_verify_all_pass(tmp_path):
    code, rep = run_json(
        ["verify", "--p", "3", "--f", "1", "--m", "1", "--exhaustive"], tmp_path
    )
    assert code == 0
    assert all(t["pass"] for t in rep["transcript"])


def test_build_report(tmp_path):
    code, rep = run_json(["build", "--p", "3", "--f", "1", "--m", "1"], tmp_path)
    assert code == 0
    assert rep["results"]["dim"] == 3
    assert rep["results"]["cocycle"]["minus"] + rep["results"]["cocycle"]["plus"] == rep[
        "results"
    ]["cocycle"]["pairs"]


def test_build_p2_config_invalid(tmp_path):
    code, rep = run_json(["build", "--p", "2", "--f", "1", "--m", "1"], tmp_path)
    assert code == 2
    assert rep["error"]["kind"] == "config-invalid"


def test_size_guardrail(tmp_path):
    code, rep = run_json(["build", "--p", "11", "--f", "1", "--m", "3"], tmp_path)
    assert code == 2
    assert "force" in rep["error"]["message"]


def test_character_field_verb(tmp_path):
    code, rep = run_json(
        ["character-field", "--p", "5", "--f", "1", "--m", "1", "--part", "odd"],
        tmp_path,
    )
    assert code == 0
    assert rep["results"]["tag"] == {"n": 5, "stabilizer_gens": [1, 4]}
    assert rep["results"]["name"] == "Q(sqrt(5))"


def test_end_algebra_verb(tmp_path):
    code, rep = run_json(
        [
            "end-algebra",
            "--p",
            "5",
            "--f",
            "1",
            "--m",
            "1",
            "--part",
            "odd",
            "--subfield",
            "char",
        ],
        tmp_path,
    )
    assert code == 0
    r = rep["results"]
    assert (r["dim_over_R"], r["n"], r["m"]) == (4, 1, 2)
    assert not r["commutative"]


def test_descend_verbs(tmp_path):
    code, rep = run_json(
        ["descend", "--part", "even", "--p", "3", "--f", "2", "--m", "1"], tmp_path
    )
    assert code == 0
    assert rep["results"]["target"] == {"n": 3, "stabilizer_gens": [1, 2]}
    code, rep = run_json(
        ["descend", "--part", "odd", "--p", "5", "--f", "1", "--m", "1"], tmp_path
    )
    assert code == 0
    assert rep["results"]["schur_index"] == 2
    assert rep["results"]["norm_lambda"] is not None
    code, rep = run_json(
        [
            "descend",
            "--part",
            "odd",
            "--p",
            "5",
            "--f",
            "1",
            "--m",
            "1",
            "--ell",
            "7",
        ],
        tmp_path,
    )
    assert code == 0
    assert rep["results"]["target"] == {"n": 5, "stabilizer_gens": [1, 4]}


def test_norm_solve_verb_and_exit_codes(tmp_path):
    code, rep = run_json(
        ["norm-solve", "--n", "20", "--top", "9", "--bottom", "3"], tmp_path
    )
    assert code == 0
    code, rep = run_json(
        ["norm-solve", "--n", "20", "--top", "9", "--bottom", "11,9"], tmp_path
    )
    assert code == 4
    assert rep["error"]["kind"] == "not-found-within-bound"
    assert rep["error"]["transcript"]["definite_obstruction"]


def test_hilbert_verb(tmp_path):
    code, rep = run_json(["hilbert", "-1", "-1", "-v", "2"], tmp_path)
    assert code == 0 and rep["results"]["symbol"] == -1
    code, rep = run_json(["hilbert", "-1", "-3"], tmp_path)
    assert rep["results"]["ramification"] == ["3", "inf"]


def test_p2_verb(tmp_path):
    code, rep = run_json(["p2"], tmp_path)
    assert code == 0
    assert rep["results"]["A_for_Q2"] == "squaresOnly"
    code, rep = run_json(["p2", "--A", "class3"], tmp_path)
    assert rep["results"]["odd"]["schur_index"] == 1


def test_table_verb_with_csv(tmp_path):
    csv = tmp_path / "table.csv"
    code, rep = run_json(
        ["table", "--p", "3,5", "--f", "1,2", "--csv", str(csv)], tmp_path
    )
    assert code == 0
    assert len(rep["results"]["rows"]) == 4
    lines = csv.read_text().strip().split("\n")
    assert lines[0].startswith("q,")
    assert len(lines) == 5


def test_theta_verb(tmp_path):
    # build a pair file for q = 3: H1 = {1, S}, H2 = one Weil token
    fq = fq_field(3, 1)
    sp = SymplecticSpace(fq, 1)
    K = field_make(RATIONAL, 3)
    psi = psi_standard(fq, K)
    w = weil_rep(psi, sp)
    S = parity_matrix(sp, K)

    def ser(m):
        return [[e.to_json() for e in row] for row in m.rows]

    pair = {
        "field": {"n": 3, "char": 0},
        "dim": 3,
        "h1": {"c": ser(S)},
        "h2": {str(t): ser(w.image(t)) for t in w.gen_names},
        "pi1": [
            {"label": "trivial", "gens": {"c": ser(Matrix.identity(K, 1))}},
            {
                "label": "sign",
                "gens": {"c": ser(Matrix.identity(K, 1).scale(K.from_int(-1)))},
            },
        ],
    }
    pfile = tmp_path / "pair.json"
    pfile.write_text(json.dumps(pair))
    code, rep = run_json(["theta", "--pair", str(pfile)], tmp_path)
    assert code == 0
    dims = {r["label"]: r["dim"] for r in rep["results"]["lifts"]}
    assert dims == {"trivial": 2, "sign": 1}
    assert rep["results"]["unitarity"][0]["isomorphic"] is False


def test_reports_byte_identical(tmp_path):
    argv = ["verify", "--p", "3", "--f", "1", "--m", "1", "--seed", "1"]
    _, _ = run_json(argv, tmp_path, "a.json")
    _, _ = run_json(argv, tmp_path, "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_timing_flag_adds_field(tmp_path):
    code, rep = run_json(["p2", "--timing"], tmp_path)
    assert code == 0 and "timing_seconds" in rep


def test_too_large_exit_code(tmp_path):
    # q = 121 passes the q^m dimension guard but the Sp sweep is too big
    code, rep = run_json(
        ["character-field", "--p", "11", "--f", "2", "--m", "1", "--part", "odd"],
        tmp_path,
    )
    assert code == 3
    assert rep["error"]["kind"] == "too-large"


def test_build_with_twist(tmp_path):
    code, rep = run_json(
        ["build", "--p", "5", "--f", "1", "--m", "1", "--twist", "2"], tmp_path
    )
    assert code == 0
    assert "psi_2" in rep["results"]["label"]


def test_build_output_parses_back(tmp_path):
    from weildescent.fields import cyclonum_from_json

    code, rep = run_json(["build", "--p", "3", "--f", "1", "--m", "1"], tmp_path)
    assert code == 0
    K = field_make(RATIONAL, 3)
    for gen in rep["results"]["generators"]:
        mat = [[cyclonum_from_json(e, K) for e in row] for row in gen["matrix"]]
        assert len(mat) == 3 and len(mat[0]) == 3
