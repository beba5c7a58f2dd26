import json
import math
import os
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from exuberance.cli import main
from exuberance.critical_values import CriticalValueTable, CvSequence
from exuberance.datestamp import Episode
from exuberance.errors import LengthMismatch
from exuberance.plot import render_plot
from exuberance.report import format_block, render_text

NS = {"s": "http://www.w3.org/2000/svg"}


def block(stat, p, cvs, mark):
    return {"stat": stat, "p_value": p, "mark": mark,
            "critical_values": {"0.99": cvs[0], "0.95": cvs[1], "0.90": cvs[2]}}


def episode(a, b):
    return Episode(a, b, str(a), str(b), 1.0, str(a), a)


class TestPlot:
    def parse(self, svg):
        return ET.fromstring(svg.split("?>", 1)[1])

    def test_well_formed(self):
        n = 30
        stats = np.linspace(-1, 2, n)
        svg = render_plot(stats, CvSequence(0.95, np.full(n, 1.0)), [episode(3, 8), episode(20, 25)],
                          [f"d{i}" for i in range(n)])
        root = self.parse(svg)
        lines = root.findall("s:polyline", NS)
        assert sorted(p.get("class") for p in lines) == ["bsadf", "critical"]
        assert len(root.findall("s:rect[@class='episode']", NS)) == 2
        xs = [float(pt.split(",")[0]) for pt in lines[0].get("points").split()]
        assert len(xs) == n and all(b > a for a, b in zip(xs, xs[1:]))
        dates = [t.text for t in root.iter(f"{{{NS['s']}}}text") if t.get("class") == "date"]
        assert dates[0] == "d0" and dates[-1] == f"d{n - 1}"

    def test_no_episodes_no_rects(self):
        root = self.parse(render_plot(np.zeros(5), np.ones(5), [], list("abcde")))
        assert root.findall("s:rect[@class='episode']", NS) == []

    def test_nan_points_skipped(self):
        root = self.parse(render_plot(np.array([0.0, np.nan, 1.0]), np.ones(3), [], list("abc")))
        bs = next(p for p in root.findall("s:polyline", NS) if p.get("class") == "bsadf")
        assert len(bs.get("points").split()) == 2

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            render_plot(np.zeros(5), np.ones(4), [], list("abcde"))


class TestTextFormat:
    def test_significance_row(self):
        text = format_block("NIFTY 50", [
            ("GSADF", block(3.728618, 0.0, (2.684328, 2.004090, 1.338134), "**")),
            ("SADF", block(-1.128701, 0.83, (2.4, 1.6, 1.2), "")),
        ])
        lines = text.splitlines()
        assert "3.728618**" in lines[1]
        assert "0.0000" in lines[1]
        assert [ln.split()[0] for ln in lines[2:]] == ["99%", "95%", "90%"]
        assert "2.684328" in lines[2] and "1.338134" in lines[4]

    def test_columns_align(self):
        text = format_block("x", [("GSADF", block(3.728618, 0.0, (1, 1, 1), "**")),
                                  ("SADF", block(-1.128701, 0.5, (1, 1, 1), ""))])
        row, cv = text.splitlines()[1], text.splitlines()[2]
        # decimal points of a statistic and of its critical values line up
        assert row.index("3.728618") + 1 == cv.index("1.000000") + 1
        assert row.index("-1.128701") + 2 == cv.index("1.000000", 30) + 1


def run(argv):
    return main([str(a) for a in argv])


@pytest.fixture(scope="module")
def datestamp_out(tmp_path_factory, fixture_csv):
    out = tmp_path_factory.mktemp("ds")
    code = run(["datestamp", "--input", fixture_csv, "--reps", 200, "--seed", 5, "--out", out])
    assert code == 0
    return out


class TestCli:
    def test_artifacts(self, datestamp_out):
        assert sorted(os.listdir(datestamp_out)) == ["bsadf.svg", "episodes.csv", "report.json", "report.txt"]
        txt = (datestamp_out / "report.txt").read_text()
        assert "level 0.95" in txt and "min duration 5" in txt and "ceil(log T)" in txt

    def test_report_consistency(self, datestamp_out):
        r = json.loads((datestamp_out / "report.json").read_text())
        n = len(r["sequences"]["bsadf"])
        assert n == r["series"]["T"] - r["config"]["min_window"] + 1
        assert len(r["datestamp"]["cv_sequence"]) == n == len(r["sequences"]["dates"])
        assert r["results"]["gsadf"]["stat"] == pytest.approx(max(r["sequences"]["bsadf"]))
        # sadf sequence holds the expanding-window statistics
        assert r["results"]["sadf"]["stat"] == pytest.approx(max(r["sequences"]["sadf"]))
        assert r["results"]["df_full"] == r["sequences"]["sadf"][-1]
        assert r["results"]["sadf"]["stat"] <= r["results"]["gsadf"]["stat"]
        for e in r["datestamp"]["episodes"]:
            assert e["duration"] >= r["datestamp"]["min_duration"]

    def test_fixture_episode_overlaps_truth(self, datestamp_out, data_dir):
        r = json.loads((datestamp_out / "report.json").read_text())
        a, b = map(int, (data_dir / "pe_fixture_labels.csv").read_text().splitlines()[1].split(","))
        offset = r["config"]["min_window"] - 1
        spans = [(e["start_index"] + offset, e["end_index"] + offset) for e in r["datestamp"]["episodes"]]
        assert any(s <= b and a <= e for s, e in spans)

    def test_matches_golden(self, datestamp_out, data_dir):
        got = json.loads((datestamp_out / "report.json").read_text())
        want = json.loads((data_dir / "golden_report.json").read_text())
        for key in ("environment",):
            got.pop(key), want.pop(key)
        assert_close(got, want)

    def test_byte_identical_reruns(self, tmp_path, fixture_csv, datestamp_out):
        assert run(["datestamp", "--input", fixture_csv, "--reps", 200, "--seed", 5, "--out", tmp_path]) == 0
        for f in ("report.json", "report.txt", "episodes.csv", "bsadf.svg"):
            assert (tmp_path / f).read_bytes() == (datestamp_out / f).read_bytes()

    def test_missing_file_exit_2(self, tmp_path):
        assert run(["test", "--input", tmp_path / "nope.csv", "--out", tmp_path / "o"]) == 2
        assert not (tmp_path / "o").exists()

    def test_malformed_row_exit_2(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("date,value\n2000-01,1\n2000-02,x\n")
        assert run(["test", "--input", p, "--out", tmp_path / "o"]) == 2
        assert not (tmp_path / "o").exists()

    def test_bad_option_exit_4(self, tmp_path, fixture_csv):
        with pytest.raises(SystemExit) as exc:
            run(["test", "--input", fixture_csv, "--out", tmp_path, "--levels", "0.95,1.5"])
        assert exc.value.code == 4
        assert run(["test", "--input", fixture_csv, "--out", tmp_path / "o", "--min-window", 2]) == 4
        assert run(["test", "--input", fixture_csv, "--out", tmp_path / "o", "--reps", 10]) == 4
        assert not (tmp_path / "o").exists()

    def test_constant_series_exit_3(self, tmp_path):
        p = tmp_path / "flat.csv"
        p.write_text("date,value\n" + "".join(f"{2000 + i // 12}-{i % 12 + 1:02d},5\n" for i in range(40)))
        assert run(["test", "--input", p, "--reps", 100, "--out", tmp_path / "o"]) == 3
        assert not (tmp_path / "o").exists()

    def test_quiet_series_stamps_nothing(self, tmp_path):
        # a mean-reverting series never exceeds the critical values
        rng = np.random.default_rng(3)
        x = np.empty(80)
        x[0] = 0.0
        for t in range(1, 80):
            x[t] = 0.2 * x[t - 1] + rng.standard_normal()
        p = tmp_path / "ar.csv"
        p.write_text("date,value\n" + "".join(
            f"{2000 + i // 12}-{i % 12 + 1:02d},{float(v)!r}\n" for i, v in enumerate(x)))
        out = tmp_path / "o"
        assert run(["datestamp", "--input", p, "--reps", 100, "--seed", 1, "--out", out]) == 0
        r = json.loads((out / "report.json").read_text())
        assert r["datestamp"]["episodes"] == []
        assert (out / "episodes.csv").read_text().count("\n") == 1
        assert "no exuberance episodes stamped" in (out / "report.txt").read_text()

    def test_range_and_formats(self, tmp_path, fixture_csv):
        out = tmp_path / "o"
        assert run(["test", "--input", fixture_csv, "--from", "2002-01", "--to", "2008-12",
                    "--reps", 100, "--formats", "json", "--out", out]) == 0
        assert os.listdir(out) == ["report.json"]
        r = json.loads((out / "report.json").read_text())
        assert (r["series"]["T"], r["series"]["start"], r["series"]["end"]) == (84, "2002-01", "2008-12")
        assert "datestamp" not in r

    def test_simulate(self, tmp_path, fixture_csv, data_dir):
        assert run(["simulate", "--t", 120, "--episodes", "0.55:0.7", "--delta", 1.04,
                    "--noise-sd", 0.4, "--seed", 7, "--name", "pe_fixture", "--out", tmp_path]) == 0
        assert (tmp_path / "pe_fixture.csv").read_bytes() == (data_dir / "pe_fixture.csv").read_bytes()
        assert (tmp_path / "pe_fixture_labels.csv").read_text() == "start_index,end_index\n66,84\n"

    def test_simulate_invalid_exit_4(self, tmp_path):
        assert run(["simulate", "--t", 100, "--episodes", "0.6:0.5", "--out", tmp_path / "o"]) == 4
        assert not (tmp_path / "o").exists()

    def test_critvals(self, capsys):
        assert run(["critvals", "--t", 60, "--reps", 100, "--seed", 3, "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["levels"] == [0.9, 0.95, 0.99]
        g = doc["values"]["gsadf"]
        assert g[0] <= g[1] <= g[2]
        assert all(a >= b for a, b in zip(g, doc["values"]["sadf"]))
        assert run(["critvals", "--t", 60, "--reps", 100, "--seed", 3]) == 0
        assert "GSADF" in capsys.readouterr().out


def test_render_text_flags_unconfirmed_episodes():
    report = {
        "command": "datestamp",
        "series": {"name": "s", "frequency": "monthly", "T": 50, "start": "2000-01", "end": "2004-02"},
        "config": {"lag": 0, "min_window": 14, "min_window_rule": "fractional", "reps": 100, "seed": 1},
        "results": {"gsadf": block(1.0, 0.2, (3, 2, 1.5), ""), "sadf": block(0.5, 0.3, (2, 1.5, 1), ""),
                    "df_full": 0.1, "degenerate_windows": 0},
        "null": {"reps": 100},
        "datestamp": {"level": 0.95, "min_duration": 4, "min_duration_rule": "ceil(log T)",
                      "gsadf_rejects_at_level": False,
                      "episodes": [{"start_date": "2001-01", "end_date": "2001-05", "duration": 5,
                                    "peak_stat": 1.9, "peak_date": "2001-03"}]},
    }
    text = render_text(report)
    assert "2001-01" in text and "does not reject" in text


def assert_close(got, want, path="$"):
    if isinstance(want, dict):
        assert isinstance(got, dict) and set(got) == set(want), path
        for k in want:
            assert_close(got[k], want[k], f"{path}.{k}")
    elif isinstance(want, list):
        assert isinstance(got, list) and len(got) == len(want), path
        for i, (g, w) in enumerate(zip(got, want)):
            assert_close(g, w, f"{path}[{i}]")
    elif isinstance(want, float):
        assert isinstance(got, (int, float)) and math.isclose(got, want, rel_tol=1e-9, abs_tol=1e-9), path
    else:
        assert got == want, path
