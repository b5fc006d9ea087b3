import json

import pytest

from mixvol import cli, io, simplex
from mixvol.hilbert import MixedMultiplicityVector

SIMPLEX_PAIR = {"dim": 2, "polytopes": [
    {"dim": 2, "points": [[0, 0], [1, 0], [0, 1]]},
    {"dim": 2, "points": [[0, 0], [2, 0], [0, 2]]},
]}
SEGMENT = {"dim": 1, "polytopes": [{"dim": 1, "points": [[0], [3]]}]}
POINT_SLOT = {"dim": 2, "polytopes": [
    {"dim": 2, "points": [[4, 1]]},
    {"dim": 2, "points": [[0, 0], [3, 0], [1, 2]]},
]}
BEZOUT = {"vars": 3, "sets": [
    {"degree": 2, "exponents": [[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]]},
    {"degree": 3, "exponents": [[3, 0, 0], [0, 3, 0], [0, 0, 3], [2, 1, 0], [2, 0, 1], [1, 2, 0],
                                 [0, 2, 1], [1, 0, 2], [0, 1, 2], [1, 1, 1]]},
]}
CHAR3 = {"vars": 1, "polys": [{"terms": [{"coeff": 1, "exp": [3]}, {"coeff": 1, "exp": [0]}]}]}


def run(capsys, tmp_path, obj, *argv):
    path = tmp_path / "in.json"
    path.write_text(json.dumps(obj))
    code = cli.main([argv[0], "--input", str(path), "--no-timings", *argv[1:]])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


# ------------------------------------------------------------------ io


def test_round_trips():
    polys = io.tuple_from_json(SIMPLEX_PAIR)
    assert io.tuple_from_json(io.tuple_to_json(polys))[1].vertices == polys[1].vertices
    config = io.configuration_from_json(BEZOUT)
    assert io.configuration_from_json(io.configuration_to_json(config)) == config
    system = io.system_from_json(CHAR3)
    assert io.system_from_json(io.system_to_json(system)) == system


def test_configuration_accepts_explicit_unit_set():
    with_unit = {"vars": 3, "sets": [{"degree": 1, "exponents": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}] + BEZOUT["sets"]}
    assert io.configuration_from_json(with_unit) == io.configuration_from_json(BEZOUT)


@pytest.mark.parametrize("bad", [
    {"dim": 2},
    {"dim": 2, "polytopes": [{"dim": 2, "points": [[0, 0]]}]},
    {"dim": 1, "polytopes": [{"dim": 1, "points": [[0.5]]}]},
    {"dim": 1, "polytopes": [{"dim": 1, "points": []}]},
    {"dim": 1, "polytopes": [{"dim": 1, "points": [[0, 1]]}]},
])
def test_bad_tuples(bad):
    with pytest.raises(io.InputError):
        io.tuple_from_json(bad)


@pytest.mark.parametrize("bad", [
    {"vars": 2, "sets": [{"degree": 2, "exponents": [[1, 0]]}]},
    {"vars": 2, "sets": [{"degree": 1, "exponents": [[1, 0], [1, 0]]}]},
    {"vars": 2, "sets": [{"exponents": [[1, 0]]}]},
])
def test_bad_configurations(bad):
    with pytest.raises(io.InputError):
        io.configuration_from_json(bad)


def test_bad_system():
    with pytest.raises(io.InputError):
        io.system_from_json({"vars": 2, "polys": CHAR3["polys"]})


# ----------------------------------------------------------------- cli


def test_mv_all_routes(capsys, tmp_path):
    for obj, expected in [(SIMPLEX_PAIR, 2), (SEGMENT, 3), (POINT_SLOT, 0)]:
        code, rep, _ = run(capsys, tmp_path, obj, "mv")
        assert code == 0
        assert rep["agreement"] is True and rep["value"] == expected
        assert set(rep["routes"]) == {"geometric", "interp", "algebraic", "samuel"}
        assert rep["seed"] == 0


def test_mv_single_route(capsys, tmp_path):
    code, rep, _ = run(capsys, tmp_path, SIMPLEX_PAIR, "mv", "--route", "interp")
    assert code == 0 and rep["routes"] == {"interp": 2}


def test_mixedmult(capsys, tmp_path):
    code, rep, _ = run(capsys, tmp_path, BEZOUT, "mixedmult", "--alpha", "2,0,0")
    assert code == 0 and rep["fd"] == {"2,0,0": 1} == rep["diag"]
    code, rep, _ = run(capsys, tmp_path, BEZOUT, "mixedmult", "--alpha", "0,1,1", "--route", "fd")
    assert code == 0 and rep["fd"] == {"0,1,1": 6}


def test_mixedmult_disagreement_exits_1(capsys, tmp_path, monkeypatch):
    def wrong(config, base=None):
        vec = MixedMultiplicityVector(2)
        for a in [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]:
            vec.values[a] = 7
        return vec
    monkeypatch.setattr(cli, "mixed_mults_via_diagonals", wrong)
    code, rep, _ = run(capsys, tmp_path, BEZOUT, "mixedmult", "--alpha", "0,1,1")
    assert code == 1 and rep["agreement"] is False


def test_hilbert_reports_degree(capsys, tmp_path):
    code, rep, _ = run(capsys, tmp_path, BEZOUT, "hilbert", "--u", "0,0,2", "--u", "1,1,1")
    assert code == 0
    # dense ideals: every monomial of degree u0 + 2 u1 + 3 u2, here C(8, 2)
    assert rep["values"] == {"0,0,2": 28, "1,1,1": 28}
    assert rep["degree"]["observed"] == 2 and rep["degree"]["matches"] == ["n"]


def test_samuel_command(capsys, tmp_path):
    code, rep, _ = run(capsys, tmp_path, BEZOUT, "samuel", "--alpha", "0,1,1", "--seed", "5")
    assert code == 0
    row = rep["alphas"]["0,1,1"]
    assert row["value"] == row["fd"] == 6 and row["dim"] == 1 and rep["seed"] == 5


def test_bernstein_command(capsys, tmp_path):
    code, rep, _ = run(capsys, tmp_path, CHAR3, "bernstein", "--prime", "3", "--exhaustive-q", "3", "--trials", "2")
    assert code == 0
    assert rep["bound"] == 3 and rep["multiplicity"] == 3 and rep["fields"][0]["distinct"] == 1
    assert rep["flags"] == {"distinct": "fails", "multiplicity": "holds"}


def test_bernstein_violation_exits_1(capsys, tmp_path, monkeypatch):
    import mixvol.bernstein as b
    monkeypatch.setattr(b, "count_torus_points_exhaustive", lambda *a, **k: 50)
    code, rep, _ = run(capsys, tmp_path, CHAR3, "bernstein", "--prime", "3", "--exhaustive-q", "3", "--trials", "0")
    assert code == 1 and "violation" in rep


def test_probe_af(capsys, tmp_path):
    code, rep, _ = run(capsys, tmp_path, BEZOUT, "probe-af")
    assert code == 0 and rep["lhs"] == rep["rhs"] == 36 and rep["relation"] == "="


def test_crosscheck(capsys, tmp_path):
    code = cli.main(["crosscheck", "--trials", "4", "--seed", "3", "--no-timings"])
    rep = json.loads(capsys.readouterr().out)
    assert code == 0 and rep["agreed"] == 4


@pytest.mark.parametrize("argv", [
    ["--prime", "32004"],
    ["--budget", "0"],
    ["--route", "nope"],
])
def test_input_errors_exit_2(capsys, tmp_path, argv):
    code, rep, err = run(capsys, tmp_path, SIMPLEX_PAIR, "mv", *argv)
    assert code == 2 and rep is None and "error" in json.loads(err)


def test_malformed_json_exits_2(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert cli.main(["mv", "--input", str(path)]) == 2
    assert cli.main(["mv", "--input", str(tmp_path / "missing.json")]) == 2


def test_forced_small_base_is_an_input_error(capsys, tmp_path):
    tup = {"dim": 3, "polytopes": [
        {"dim": 3, "points": [[0, 0, 2], [3, 1, 1], [3, 3, 0], [3, 3, 1]]},
        {"dim": 3, "points": [[0, 0, 1], [1, 2, 0], [3, 1, 2], [3, 2, 1]]},
        {"dim": 3, "points": [[0, 0, 0], [0, 1, 2], [2, 0, 3], [3, 1, 0]]},
    ]}
    code, _, err = run(capsys, tmp_path, tup, "mv", "--route", "algebraic", "--base", "1")
    assert code == 2 and json.loads(err)["base"] == 1


def test_reports_are_deterministic(capsys, tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(BEZOUT))
    outs = []
    for _ in range(2):
        cli.main(["samuel", "--input", str(path), "--seed", "9", "--no-timings"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_timings_present_by_default(capsys, tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps(SIMPLEX_PAIR))
    cli.main(["mv", "--input", str(path)])
    assert "timings" in json.loads(capsys.readouterr().out)


def test_pretty_output(capsys, tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps(SEGMENT))
    assert cli.main(["mv", "--input", str(path), "--pretty", "--no-timings"]) == 0
    out = capsys.readouterr().out
    assert "value: 3" in out and "agreement: True" in out


def test_figures_written(capsys, tmp_path):
    figs = tmp_path / "figs"
    code, rep, _ = run(capsys, tmp_path, SIMPLEX_PAIR, "mv", "--figures", str(figs))
    assert code == 0 and (figs / "mv_polytopes.png").stat().st_size > 0
    code, rep, _ = run(capsys, tmp_path, CHAR3, "bernstein", "--prime", "3", "--exhaustive-q", "3",
                       "--trials", "1", "--figures", str(figs))
    assert (figs / "bernstein.png").exists() and rep["figures"]


def test_library_and_cli_agree(capsys, tmp_path):
    code, rep, _ = run(capsys, tmp_path, SIMPLEX_PAIR, "mv", "--route", "geometric")
    from mixvol import mixed_volume_ie
    assert rep["value"] == mixed_volume_ie([simplex(2), simplex(2, 2)])
