import json

import pandas as pd
import pytest

from citecheck.cli import main, sibling
from citecheck.ingest import load_corpus
from citecheck.profile import filter_authors
from citecheck.simulate import GeneratorConfig, generate_corpus


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    for name in ("CITECHECK_SEED", "CITECHECK_MIN_PAPERS", "CITECHECK_REPLICATIONS", "CITECHECK_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    return tmp_path


def lines(path):
    return path.read_text(encoding="utf-8").splitlines()


def generate(workdir, *extra):
    assert main(["generate", "--authors", "120", "--seed", "7", "--output", "data", *extra]) == 0
    return workdir / "data"


def test_sibling_paths():
    assert sibling("out/intervals.csv", "_ranges") == "out/intervals_ranges.csv"
    assert sibling("corr.csv", "", ".json") == "corr.json"


class TestGenerate:
    def test_same_seed_is_byte_identical(self, workdir):
        data = generate(workdir)
        first = (data / "papers.csv").read_bytes()
        first_manifest = (data / "manifest.json").read_bytes()
        generate(workdir)
        assert (data / "papers.csv").read_bytes() == first
        assert (data / "manifest.json").read_bytes() == first_manifest

    def test_metadata_writes_baselines(self, workdir):
        data = generate(workdir, "--with-metadata")
        assert lines(data / "papers.csv")[0] == "author_id,paper_id,citations,field_id,pub_year"
        assert lines(data / "baselines.csv")[0] == "field_id,pub_year,mean_citations"

    def test_manifest_contents(self, workdir):
        data = generate(workdir)
        manifest = json.loads((data / "manifest.json").read_text(encoding="utf-8"))
        assert manifest["command"] == "generate"
        assert manifest["seed"] == 7
        assert manifest["outputs"] == ["papers.csv"]
        assert manifest["parameters"]["authors"] == 120

    def test_bad_seed_is_an_argument_error(self, workdir):
        with pytest.raises(SystemExit) as info:
            main(["generate", "--seed", "-3"])
        assert info.value.code == 2

    def test_bad_generator_parameter(self, workdir, capsys):
        assert main(["generate", "--authors", "0", "--output", "data"]) == 1
        assert "n_authors" in capsys.readouterr().out

    def test_row_count_matches_generated_papers(self, workdir):
        data = generate(workdir)
        expected = generate_corpus(GeneratorConfig(n_authors=120, seed=7))
        rows = lines(data / "papers.csv")
        assert len(rows) == 1 + sum(profile.p for profile in expected.authors)
        assert len({row.split(",")[0] for row in rows[1:]}) == 120

    @pytest.mark.slow
    def test_full_size_corpus(self, workdir):
        assert main(["generate", "--authors", "255755", "--seed", "2016", "--output", "big"]) == 0
        frame = pd.read_csv(workdir / "big" / "papers.csv", usecols=["author_id"], dtype=str)
        assert frame["author_id"].nunique() == 255_755


class TestCompute:
    def test_writes_indicators_and_manifest(self, workdir):
        data = generate(workdir)
        assert main(["compute", "--input", str(data / "papers.csv"), "--output", "out/indicators.csv"]) == 0
        rows = lines(workdir / "out" / "indicators.csv")
        assert rows[0] == "author_id,p,c,mc,h,e,r,rm,ncs,mncs,iota_e"
        assert len(rows) > 1
        manifest = json.loads((workdir / "out" / "indicators.manifest.json").read_text(encoding="utf-8"))
        assert list(manifest["inputs"]) == [str(data / "papers.csv")]

    def test_normalized_columns_with_baselines(self, workdir):
        data = generate(workdir, "--with-metadata")
        assert main(["compute", "--input", str(data / "papers.csv"), "--baselines", str(data / "baselines.csv"),
                     "--require-normalized", "--min-papers", "0"]) == 0
        first = lines(workdir / "indicators.csv")[1].split(",")
        assert first[8] != "" and first[9] != ""

    def test_require_normalized_without_baselines(self, workdir):
        data = generate(workdir)
        assert main(["compute", "--input", str(data / "papers.csv"), "--require-normalized"]) == 1
        assert not (workdir / "indicators.csv").exists()

    def test_missing_input(self, workdir, capsys):
        assert main(["compute", "--input", "nope.csv"]) == 1
        assert "nope.csv" in capsys.readouterr().out

    def test_malformed_row(self, workdir, capsys):
        (workdir / "papers.csv").write_text("author_id,paper_id,citations\nA1,P1,-1\n", encoding="utf-8")
        assert main(["compute", "--input", "papers.csv"]) == 1
        assert "papers.csv:2:citations" in capsys.readouterr().out

    def test_strict_papers_matches_filter(self, workdir):
        data = generate(workdir)
        assert main(["compute", "--input", str(data / "papers.csv"), "--min-papers", "50", "--strict-papers",
                     "--min-citations", "0"]) == 0
        written = [row.split(",")[0] for row in lines(workdir / "indicators.csv")[1:]]
        kept = filter_authors(load_corpus(data / "papers.csv"), min_papers=50, strict_papers=True)
        assert written == sorted(profile.author_id for profile in kept.authors)
        assert written and all(int(row.split(",")[1]) > 50 for row in lines(workdir / "indicators.csv")[1:])

    def test_strict_papers_boundary(self, workdir):
        data = generate(workdir, "--papers-law", "constant", "--papers-constant", "50")
        args = ["compute", "--input", str(data / "papers.csv"), "--min-papers", "50", "--min-citations", "0"]
        assert main(args) == 0
        assert len(lines(workdir / "indicators.csv")) == 121
        assert main(args + ["--strict-papers"]) == 0
        assert len(lines(workdir / "indicators.csv")) == 1

    def test_first_year_window_matches_filter(self, workdir):
        data = generate(workdir, "--with-metadata")
        assert main(["compute", "--input", str(data / "papers.csv"), "--min-papers", "0", "--min-citations", "0",
                     "--first-year-from", "2004", "--first-year-to", "2008"]) == 0
        written = [row.split(",")[0] for row in lines(workdir / "indicators.csv")[1:]]
        corpus = load_corpus(data / "papers.csv")
        kept = filter_authors(corpus, first_year_range=(2004, 2008))
        assert written == sorted(profile.author_id for profile in kept.authors)
        assert 0 < len(written) < len(corpus)
        first_years = {profile.author_id: profile.first_year for profile in corpus.authors}
        assert all(2004 <= first_years[author_id] <= 2008 for author_id in written)


class TestCorrelate:
    def test_top_n_and_sweep(self, workdir):
        data = generate(workdir)
        main(["compute", "--input", str(data / "papers.csv"), "--min-papers", "0"])
        assert main(["correlate", "--input", "indicators.csv", "--method", "spearman", "--top-n", "50",
                     "--sweep-sizes", "10,50,100", "--against", "c,r", "--output", "corr.csv"]) == 0
        report = json.loads((workdir / "corr.json").read_text(encoding="utf-8"))
        assert report["method"] == "spearman"
        assert report["subset"] == {"kind": "top_n", "by": "iota_e", "n": 50}
        assert report["n_authors"] == 50
        sweep = lines(workdir / "corr_sweep.csv")
        assert sweep[0] == "size,indicator,rho"
        assert len(sweep) == 1 + 3 * 2
        assert lines(workdir / "corr.csv")[0] == "indicator,c,p,mc,h,e,r,rm,iota_e"


class TestBootstrap:
    def prolific(self, workdir):
        return generate(workdir, "--papers-law", "constant", "--papers-constant", "55")

    def test_default_pairs_write_a_regression(self, workdir):
        data = self.prolific(workdir)
        assert main(["bootstrap", "--input", str(data / "papers.csv"), "--replications", "50",
                     "--workers", "2"]) == 0
        payload = json.loads((workdir / "intervals_regression.json").read_text(encoding="utf-8"))
        assert {(r["y_name"], r["x_name"]) for r in payload["regressions"]} == {("iota_e", "c"), ("iota_e", "r")}
        assert lines(workdir / "intervals_ranges.csv")[0] == "author_id,indicator,range,log_range"

    def test_single_indicator_has_no_regression(self, workdir):
        data = self.prolific(workdir)
        assert main(["bootstrap", "--input", str(data / "papers.csv"), "--indicators", "c", "--min-citations", "0",
                     "--replications", "20"]) == 0
        assert len(lines(workdir / "intervals.csv")) == 121
        assert not (workdir / "intervals_regression.json").exists()

    def test_seeded_runs_are_identical(self, workdir):
        data = self.prolific(workdir)
        args = ["bootstrap", "--input", str(data / "papers.csv"), "--replications", "30", "--seed", "11"]
        main(args + ["--output", "one.csv"])
        main(args + ["--output", "two.csv", "--workers", "3"])
        assert (workdir / "one.csv").read_bytes() == (workdir / "two.csv").read_bytes()

    def test_nobody_qualifies(self, workdir):
        data = generate(workdir, "--papers-law", "constant", "--papers-constant", "50")
        assert main(["bootstrap", "--input", str(data / "papers.csv")]) == 1


class TestSimulate:
    def test_two_paper_sum(self, workdir):
        assert main(["simulate", "two-paper-sum", "--total", "100"]) == 0
        rows = lines(workdir / "curves.csv")
        assert rows[0] == "x,y" and len(rows) == 102
        assert rows[1] == "0,100"

    def test_two_paper_iota(self, workdir, capsys):
        assert main(["simulate", "two-paper-iota", "--iota", "100", "--step", "0.01"]) == 0
        assert "141.42" in capsys.readouterr().out

    def test_mega(self, workdir):
        data = generate(workdir)
        assert main(["simulate", "mega", "--input", str(data / "papers.csv"), "--bins", "10"]) == 0
        assert len(lines(workdir / "histogram.csv")) == 11
        assert lines(workdir / "histogram_authors.csv")[0] == "author_id,p,c,iota_e"
        manifest = json.loads((workdir / "histogram.manifest.json").read_text(encoding="utf-8"))
        assert manifest["command"] == "simulate"
        assert manifest["parameters"]["simulation"] == "mega"


def test_axioms_command(workdir):
    assert main(["axioms", "--trials", "50", "--indicators", "h,iota_e"]) == 0
    rows = lines(workdir / "axioms.csv")
    assert rows[0] == "indicator,axiom,trials,violations"
    assert len(rows) == 1 + 2 * 5
    assert all(row.endswith(",0") for row in rows if row.startswith("iota_e"))


def test_rc_file_sets_defaults(workdir):
    (workdir / ".citecheckrc").write_text("min_papers = 1000\n", encoding="utf-8")
    data = generate(workdir)
    assert main(["compute", "--input", str(data / "papers.csv")]) == 0
    assert len(lines(workdir / "indicators.csv")) == 1
