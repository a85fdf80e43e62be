import json

import pytest
from click.testing import CliRunner

from ecoroute.cli import main
from ecoroute.fileio import read_links_csv, write_links_csv
from ecoroute.preprocess import SegmentRecord, build_graph
from ecoroute.report import recompute_deltas

from conftest import FIXTURES

TRIANGLE_CSV = """from,to,length_mi,avg_speed_mph,mode
1,2,10,50,medium
2,3,10,50,medium
1,3,15,50,medium
"""


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def triangle_csv(tmp_path):
    path = tmp_path / "links.csv"
    path.write_text(TRIANGLE_CSV)
    return path


def test_route_mintime(runner, triangle_csv, tmp_path):
    out = tmp_path / "route.json"
    result = runner.invoke(
        main,
        ["route", "--links", str(triangle_csv), "--algo", "mintime",
         "--origin", "1", "--dest", "3", "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    payload = json.loads(out.read_text())
    assert payload["path"] == [1, 3]
    assert payload["algorithm"] == "mintime"


def test_route_unknown_node_exits_1(runner, triangle_csv):
    result = runner.invoke(
        main,
        ["route", "--links", str(triangle_csv), "--algo", "mintime",
         "--origin", "1", "--dest", "99"],
    )
    assert result.exit_code == 1


def test_route_disconnected_exits_2(runner, tmp_path):
    path = tmp_path / "links.csv"
    path.write_text(
        "from,to,length_mi,avg_speed_mph,mode\n1,2,10,50,medium\n3,4,10,50,medium\n"
    )
    result = runner.invoke(
        main,
        ["route", "--links", str(path), "--algo", "crptc", "--origin", "1", "--dest", "4"],
    )
    assert result.exit_code == 2


def test_route_malformed_csv_reports_line(runner, tmp_path):
    path = tmp_path / "links.csv"
    path.write_text("from,to,length_mi,avg_speed_mph,mode\n1,2,banana,50,medium\n")
    result = runner.invoke(
        main,
        ["route", "--links", str(path), "--algo", "mintime", "--origin", "1", "--dest", "2"],
    )
    assert result.exit_code == 1
    assert "line 2" in result.output


def test_route_battery_override_and_dump_lp(runner, tmp_path):
    out = tmp_path / "route.json"
    dump = tmp_path / "instance.lp"
    result = runner.invoke(
        main,
        ["route", "--links", str(FIXTURES / "two_link_links.csv"), "--algo", "crptc",
         "--origin", "1", "--dest", "3", "--battery", "3.0",
         "--out", str(out), "--dump-lp", str(dump)],
    )
    assert result.exit_code == 0, result.output
    payload = json.loads(out.read_text())
    assert payload["energy_cost_usd"] == pytest.approx(1.2705993547815995, abs=1e-9)
    assert "minimize" in dump.read_text()


def test_compare_two_link_fixture(runner, tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(
        main,
        ["compare", "--links", str(FIXTURES / "two_link_links.csv"),
         "--origin", "1", "--dest", "3",
         "--config", str(FIXTURES / "vehicle_3kwh.cfg"), "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())
    pair = report["pairs"][0]
    assert pair["deltas_pct"]["crptc_vs_cdf_energy"] == pytest.approx(4.898, abs=0.01)
    assert recompute_deltas(pair) == pair["deltas_pct"]


def test_compare_zero_battery_all_agree(runner, tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(
        main,
        ["compare", "--links", str(FIXTURES / "two_link_links.csv"),
         "--origin", "1", "--dest", "3", "--battery", "0", "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    pair = json.loads(out.read_text())["pairs"][0]
    assert pair["deltas_pct"]["crptc_vs_cdf_energy"] == pytest.approx(0.0, abs=1e-9)
    assert pair["deltas_pct"]["crptc_vs_mintime_energy"] == pytest.approx(0.0, abs=1e-9)


def test_compare_with_routes_file(runner, tmp_path):
    out = tmp_path / "report.json"
    plot_csv = tmp_path / "plot.csv"
    figures = tmp_path / "figs"
    result = runner.invoke(
        main,
        ["compare", "--links", str(FIXTURES / "ema_links.csv"),
         "--routes", str(FIXTURES / "ema_routes.json"),
         "--out", str(out), "--plot-csv", str(plot_csv), "--figures-dir", str(figures)],
    )
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())
    pair = report["pairs"][0]
    assert (pair["origin"], pair["dest"]) == (1, 5)
    assert "actual" in pair["algorithms"]
    assert pair["algorithms"]["actual"]["energy_cost_usd"] > 0
    lines = plot_csv.read_text().splitlines()
    assert lines[0] == "od,algorithm,metric,value"
    assert any(",actual,energy_cost_usd," in line for line in lines)
    pngs = sorted(p.name for p in figures.glob("*.png"))
    assert pngs == ["energy_1_5.png", "time_1_5.png"]


def test_compare_requires_pair_or_routes(runner, triangle_csv):
    result = runner.invoke(main, ["compare", "--links", str(triangle_csv)])
    assert result.exit_code == 1


def test_preprocess_roundtrip(runner, tmp_path):
    segments_csv = tmp_path / "segments.csv"
    segments_csv.write_text(
        "link_from,link_to,seq,length_mi,avg_speed_mph\n"
        "1,2,0,2,50\n"
        "1,2,1,2,15\n"
        "2,3,0,3,30\n"
    )
    out = tmp_path / "links.csv"
    report_out = tmp_path / "report.json"
    result = runner.invoke(
        main,
        ["preprocess", "--segments", str(segments_csv), "--out", str(out),
         "--report", str(report_out)],
    )
    assert result.exit_code == 0, result.output
    report = json.loads(report_out.read_text())
    assert report["fictitious_nodes_added"] == 1
    assert report["links_out"] == 2 + 1

    # The written CSV round-trips to the in-memory graph, field for field.
    expected, _ = build_graph(
        [SegmentRecord(1, 2, 0, 2, 50), SegmentRecord(1, 2, 1, 2, 15), SegmentRecord(2, 3, 0, 3, 30)]
    )
    parsed = read_links_csv(out)
    assert parsed.links == expected.links


def test_preprocess_duplicate_segment_exits_1(runner, tmp_path):
    segments_csv = tmp_path / "segments.csv"
    segments_csv.write_text(
        "link_from,link_to,seq,length_mi,avg_speed_mph\n1,2,0,2,50\n1,2,0,2,40\n"
    )
    result = runner.invoke(
        main, ["preprocess", "--segments", str(segments_csv), "--out", str(tmp_path / "o.csv")]
    )
    assert result.exit_code == 1


def test_links_csv_roundtrip(tmp_path):
    g = read_links_csv(FIXTURES / "ema_links.csv")
    target = tmp_path / "copy.csv"
    write_links_csv(g, target)
    assert read_links_csv(target).links == g.links
