import json

import pytest

from sunlab.cli import main

COLLINEAR3 = {"points": [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]}
TWO_POINTS = {"points": [[0.0, 0.0], [2.0, 0.0]]}


@pytest.fixture
def cloud_file(tmp_path):
    def write(data, name="cloud.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)

    return write


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_mconnect_collinear_passes(capsys, cloud_file):
    code, out, _ = _run(
        capsys, ["mconnect", "--space", "linf2", "--cloud", cloud_file(COLLINEAR3)]
    )
    assert code == 0
    report = json.loads(out)
    assert report["command"] == "mconnect"
    assert report["result"]["m_connected"] is True


def test_mconnect_two_points_falsified(capsys, cloud_file):
    code, out, _ = _run(
        capsys, ["mconnect", "--space", "linf2", "--cloud", cloud_file(TWO_POINTS)]
    )
    assert code == 2
    report = json.loads(out)
    assert report["result"]["m_connected"] is False
    assert report["result"]["witness"] == [0, 1]


def test_path_hop_too_small_exits_two(capsys, cloud_file):
    code, out, _ = _run(
        capsys,
        [
            "path", "--space", "linf2", "--cloud", cloud_file(TWO_POINTS),
            "--from", "0", "--to", "1", "--hop", "0.5",
        ],
    )
    assert code == 2
    report = json.loads(out)
    assert report["result"]["reason"] == "unreachable"


def test_path_plain_succeeds(capsys, cloud_file):
    code, out, _ = _run(
        capsys,
        [
            "path", "--space", "linf2", "--cloud", cloud_file(COLLINEAR3),
            "--from", "0", "--to", "2",
        ],
    )
    assert code == 0
    report = json.loads(out)
    assert report["result"]["found"] is True
    # collinear cloud: the path length telescopes to the endpoint distance
    assert report["result"]["length"] == pytest.approx(report["result"]["target"])


def test_interval_reports_vertices(capsys):
    code, out, _ = _run(
        capsys,
        ["interval", "--space", "l1(2)", "--from", "0,0", "--to", "2,0"],
    )
    assert code == 0
    report = json.loads(out)
    verts = {tuple(v) for v in report["result"]["vertices"]}
    assert verts == {(0.0, 0.0), (1.0, 1.0), (2.0, 0.0), (1.0, -1.0)}


def test_hull_contained(capsys):
    code, out, _ = _run(
        capsys,
        ["hull", "--space", "linf2", "--from", "0,0", "--to", "2,1", "--balls", "500"],
    )
    assert code == 0
    report = json.loads(out)
    assert report["result"]["contained"] is True
    assert report["result"]["gap"] >= 0.0


def test_project_reports_minimizers(capsys, cloud_file):
    code, out, _ = _run(
        capsys,
        [
            "project", "--space", "linf2", "--cloud", cloud_file(COLLINEAR3),
            "--query", "0.4,0",
        ],
    )
    assert code == 0
    report = json.loads(out)
    assert report["result"]["distance"] == pytest.approx(0.4)
    assert report["result"]["indices"] == [0]


def test_sun_single_query_holds(capsys, cloud_file):
    code, out, _ = _run(
        capsys,
        [
            "sun", "--space", "linf2", "--cloud", cloud_file(TWO_POINTS),
            "--query", "1,5",
        ],
    )
    assert code == 0
    report = json.loads(out)
    assert report["result"]["verdict"] == "holds-on-grid"


def test_sun_single_query_falsified(capsys, cloud_file):
    code, out, _ = _run(
        capsys,
        [
            "sun", "--space", "linf2", "--cloud", cloud_file(COLLINEAR3),
            "--query", "0.5,0.2",
        ],
    )
    assert code == 2
    report = json.loads(out)
    assert report["result"]["found"] is False
    falsifications = report["result"]["falsifications"]
    assert falsifications and all(f["verdict"] == "falsified" for f in falsifications)


def test_embed_reports_target_dim(capsys, cloud_file):
    code, out, _ = _run(
        capsys,
        [
            "embed", "--space", "l1(2)", "--cloud", cloud_file(COLLINEAR3),
            "--indices", "1,0",
        ],
    )
    assert code == 0
    report = json.loads(out)
    assert report["result"]["target_dim"] == 2
    assert report["result"]["points"] == [[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]


# --- usage and input errors ----------------------------------------------------


def test_missing_subcommand_is_usage_error(capsys):
    code, _, err = _run(capsys, [])
    assert code == 1
    assert "error" in err


def test_unknown_flag_is_usage_error(capsys, cloud_file):
    code, _, err = _run(
        capsys,
        ["mconnect", "--space", "linf2", "--cloud", cloud_file(COLLINEAR3), "--bogus"],
    )
    assert code == 1
    assert "error" in err


def test_bad_space_name_is_usage_error(capsys, cloud_file):
    code, _, err = _run(
        capsys, ["mconnect", "--space", "l7(2)", "--cloud", cloud_file(COLLINEAR3)]
    )
    assert code == 1
    assert "l7(2)" in err


def test_sun_query_and_trials_conflict(capsys, cloud_file):
    code, _, err = _run(
        capsys,
        [
            "sun", "--space", "linf2", "--cloud", cloud_file(COLLINEAR3),
            "--query", "1,5", "--trials", "10",
        ],
    )
    assert code == 1
    assert "not both" in err


def test_malformed_cloud_json_is_input_error(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"points": [[0, 0],\n oops]}')
    code, _, err = _run(
        capsys, ["mconnect", "--space", "linf2", "--cloud", str(bad)]
    )
    assert code == 1
    assert "error" in err


def test_point_index_out_of_range(capsys, cloud_file):
    code, _, err = _run(
        capsys,
        [
            "path", "--space", "linf2", "--cloud", cloud_file(TWO_POINTS),
            "--from", "0", "--to", "9",
        ],
    )
    assert code == 1
    assert "out of range" in err


# --- files and determinism -------------------------------------------------


def test_out_writes_report_file(capsys, cloud_file, tmp_path):
    out_path = tmp_path / "report.json"
    code, out, _ = _run(
        capsys,
        [
            "mconnect", "--space", "linf2", "--cloud", cloud_file(COLLINEAR3),
            "--out", str(out_path),
        ],
    )
    assert code == 0
    assert out == ""
    report = json.loads(out_path.read_text())
    assert report["result"]["m_connected"] is True
    leftovers = [p for p in tmp_path.iterdir() if p.name.startswith(".sunlab-tmp-")]
    assert leftovers == []


def test_verify_reports_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        code = main(["verify", "--trials", "40", "--seed", "7", "--out", str(path)])
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_svg_written_for_planar_space(capsys, cloud_file, tmp_path):
    fig = tmp_path / "fig.svg"
    code, _, _ = _run(
        capsys,
        [
            "interval", "--space", "linf2", "--from", "0,0", "--to", "2,1",
            "--svg", str(fig),
        ],
    )
    assert code == 0
    text = fig.read_text()
    assert text.startswith("<svg")
    assert text.rstrip().endswith("</svg>")


def test_svg_skipped_in_higher_dimension(capsys, tmp_path):
    fig = tmp_path / "fig.svg"
    code, out, err = _run(
        capsys,
        [
            "interval", "--space", "linf3", "--from", "0,0,0", "--to", "1,1,1",
            "--svg", str(fig),
        ],
    )
    assert code == 0
    assert not fig.exists()
    assert "skipped" in err
    assert json.loads(out)["result"]["interval"]["slabs"]
