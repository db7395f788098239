"""The staged pipeline, driven through the CLI against the bundled corpus.

Every stage is deterministic, so the staged files are compared byte for
byte against the checked-in reference outputs.
"""
import dataclasses
import json
from types import SimpleNamespace

import pytest
from click.testing import CliRunner

from conftest import GOLDENS, write_fixture_yaml
from litkg import align
from litkg.cli import cli


@pytest.fixture(scope="module")
def run(tmp_path_factory):
    """One full ingest/align/classify/build pass in a scratch directory."""
    tmp = tmp_path_factory.mktemp("cli")
    cfg = write_fixture_yaml(tmp)
    runner = CliRunner()
    results = {}
    for args in (["ingest"], ["align", "--offline"], ["classify"], ["build"]):
        res = runner.invoke(cli, [*args, "-c", str(cfg)])
        assert res.exit_code == 0, res.output
        results[args[0]] = res
    return SimpleNamespace(tmp=tmp, cfg=str(cfg), out=tmp / "out", results=results,
                           runner=runner)


class TestStages:
    def test_ingest_summary(self, run):
        out = run.results["ingest"].output
        assert "selected 12 authors (4 rejected, 0 bad lines)" in out
        assert "rejected by birth_country: 1" in out
        assert "rejected by birth_year: 2" in out
        assert "rejected by occupation: 1" in out

    def test_align_summary(self, run):
        assert "17 candidates, 13 accepted links" in run.results["align"].output

    def test_classify_summary(self, run):
        assert "classified 12 authors; 7 carry roles" in run.results["classify"].output

    def test_build_summary(self, run):
        out = run.results["build"].output
        assert "authors: 12" in out
        assert "triples: 496 base + 52 derived" in out
        assert "graph written to" in out


class TestGoldens:
    def test_alignment_bytes(self, run):
        produced = (run.out / "alignment.json").read_bytes()
        assert produced == (GOLDENS / "alignment.json").read_bytes()

    def test_graph_bytes(self, run):
        produced = (run.out / "graph.nt").read_bytes()
        assert produced == (GOLDENS / "graph.nt").read_bytes()

    def test_build_report_bytes(self, run):
        produced = (run.out / "build_report.json").read_bytes()
        assert produced == (GOLDENS / "build_report.json").read_bytes()

    def test_report_content(self, run):
        report = json.loads((run.out / "build_report.json").read_text("utf-8"))
        assert report["works_dropped_no_reception"]["total"] == 10
        assert report["works_considered"]["total"] == 31
        assert report["works_kept"]["total"] == 20
        assert report["works_unmatched_author"]["goodreads"] == 1

    def test_stats_csv_bytes(self, run):
        out = run.tmp / "stats.csv"
        res = run.runner.invoke(
            cli, ["stats", "-c", run.cfg, "--format", "csv", "--out", str(out)]
        )
        assert res.exit_code == 0, res.output
        assert out.read_bytes() == (GOLDENS / "stats.csv").read_bytes()

    def test_stats_json_and_text(self, run):
        res = run.runner.invoke(cli, ["stats", "-c", run.cfg, "--format", "json"])
        assert res.exit_code == 0, res.output
        data = json.loads(res.output)
        assert data["total_authors"] == 12
        text = run.runner.invoke(cli, ["stats", "-c", run.cfg])
        assert text.exit_code == 0
        assert text.output.strip()

    def test_export_nt_round_trips_canonically(self, run):
        out = run.tmp / "export.nt"
        res = run.runner.invoke(cli, ["export", "-c", run.cfg, "--out", str(out)])
        assert res.exit_code == 0, res.output
        assert "exported 548 triples" in res.output
        assert out.read_bytes() == (GOLDENS / "graph.nt").read_bytes()

    def test_export_turtle_bytes(self, run):
        out = run.tmp / "export.ttl"
        res = run.runner.invoke(
            cli, ["export", "-c", run.cfg, "--format", "ttl", "--out", str(out)]
        )
        assert res.exit_code == 0, res.output
        assert out.read_bytes() == (GOLDENS / "graph.ttl").read_bytes()

    def test_export_without_derived(self, run):
        out = run.tmp / "base.nt"
        res = run.runner.invoke(
            cli, ["export", "-c", run.cfg, "--out", str(out), "--no-derived"]
        )
        assert res.exit_code == 0, res.output
        lines = out.read_text("utf-8").splitlines()
        assert len(lines) == 496
        assert not [l for l in lines if "publicationYear" in l or "publicationCountry" in l]


class TestQaCommands:
    def test_sample_is_reproducible(self, run):
        first = run.tmp / "w1.csv"
        second = run.tmp / "w2.csv"
        for path in (first, second):
            res = run.runner.invoke(
                cli, ["qa", "sample", "-c", run.cfg, "--out", str(path)]
            )
            assert res.exit_code == 0, res.output
            assert "wrote 2 sample rows" in res.output
        assert first.read_bytes() == second.read_bytes()

    def test_sample_covers_only_sub_threshold_buckets(self, run):
        path = run.tmp / "w3.csv"
        run.runner.invoke(cli, ["qa", "sample", "-c", run.cfg, "--out", str(path)])
        rows = align.read_worksheet(path)
        sims = sorted(round(r.candidate.similarity, 6) for r in rows)
        assert sims == [0.266667, 0.642857]

    def test_score_annotated_worksheet(self, run):
        path = run.tmp / "w4.csv"
        run.runner.invoke(cli, ["qa", "sample", "-c", run.cfg, "--out", str(path)])
        rows = align.read_worksheet(path)
        annotated = [
            dataclasses.replace(r, correct="yes" if r.candidate.similarity > 0.5 else "no")
            for r in rows
        ]
        align.write_worksheet(annotated, path)
        res = run.runner.invoke(cli, ["qa", "score", str(path)])
        assert res.exit_code == 0, res.output
        assert "[0.2, 0.3): 0/1 accuracy 0.00" in res.output
        assert "[0.6, 0.7): 1/1 accuracy 1.00" in res.output
        assert "[0.0, 0.1): 0/0 accuracy n/a" in res.output

    def test_score_json(self, run):
        path = run.tmp / "w5.csv"
        run.runner.invoke(cli, ["qa", "sample", "-c", run.cfg, "--out", str(path)])
        rows = [dataclasses.replace(r, correct="yes") for r in align.read_worksheet(path)]
        align.write_worksheet(rows, path)
        res = run.runner.invoke(cli, ["qa", "score", str(path), "--json"])
        assert res.exit_code == 0, res.output
        payload = json.loads(res.output)
        assert len(payload) == 7
        by_bucket = {p["bucket"]: p for p in payload}
        assert by_bucket["0.6-0.7"]["accuracy"] == 1.0
        assert by_bucket["0.0-0.1"]["accuracy"] is None

    def test_score_rejects_unannotated(self, run):
        path = run.tmp / "w6.csv"
        run.runner.invoke(cli, ["qa", "sample", "-c", run.cfg, "--out", str(path)])
        res = run.runner.invoke(cli, ["qa", "score", str(path)])
        assert res.exit_code == 1
        assert "error:" in res.output


class TestFailureModes:
    def test_missing_config_is_exit_2(self, tmp_path):
        res = CliRunner().invoke(cli, ["ingest", "-c", str(tmp_path / "none.yaml")])
        assert res.exit_code == 2
        assert "config error" in res.output

    def test_stage_order_enforced(self, tmp_path):
        cfg = write_fixture_yaml(tmp_path)
        res = CliRunner().invoke(cli, ["align", "--offline", "-c", str(cfg)])
        assert res.exit_code == 2
        assert "run the ingest stage first" in res.output

    def test_stats_needs_build(self, tmp_path):
        cfg = write_fixture_yaml(tmp_path)
        res = CliRunner().invoke(cli, ["stats", "-c", str(cfg)])
        assert res.exit_code == 2
        assert "run the build stage first" in res.output


class TestOverrides:
    def test_threshold_option_widens_acceptance(self, tmp_path):
        cfg = write_fixture_yaml(tmp_path)
        runner = CliRunner()
        assert runner.invoke(cli, ["ingest", "-c", str(cfg)]).exit_code == 0
        res = runner.invoke(
            cli, ["align", "--offline", "--threshold", "0.6", "-c", str(cfg)]
        )
        assert res.exit_code == 0, res.output
        # the 0.642857 preexisting pair clears a 0.6 bar
        assert "17 candidates, 14 accepted links" in res.output

    def test_build_without_derived(self, tmp_path):
        cfg = write_fixture_yaml(tmp_path)
        runner = CliRunner()
        for args in (["ingest"], ["align", "--offline"], ["classify"]):
            assert runner.invoke(cli, [*args, "-c", str(cfg)]).exit_code == 0
        res = runner.invoke(cli, ["build", "--no-derived", "-c", str(cfg)])
        assert res.exit_code == 0, res.output
        assert "triples: 496 base + 0 derived" in res.output
        graph = (tmp_path / "out" / "graph.nt").read_text("utf-8")
        assert len(graph.splitlines()) == 496
