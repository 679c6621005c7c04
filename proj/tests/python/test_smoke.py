import json
import math
from pathlib import Path

import pytest

import oestylo

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_distribution_kernels():
    assert oestylo.student_t_p(0.0, 5) == pytest.approx(1.0)
    assert oestylo.chi_square_p(3.841459, 1) == pytest.approx(0.05, abs=1e-6)
    # Two-sided t tail with df=1 is 1 - 2*atan(t)/pi.
    assert oestylo.student_t_p(1.0, 1) == pytest.approx(1 - 2 * math.atan(1.0) / math.pi, rel=1e-12)


def test_chi_square_tests():
    h = oestylo.chi2_homogeneity([50, 50], [90, 10])
    # Pearson statistic by hand: expected 70/30 in each row.
    expected = sum((o - e) ** 2 / e for o, e in [(50, 70), (50, 30), (90, 70), (10, 30)])
    assert h.statistic == pytest.approx(expected)
    assert h.df == 1
    ind = oestylo.chi2_independence([[10, 20], [20, 10]])
    assert 0 < ind.p_value < 0.05
    with pytest.raises(oestylo.OestyloError):
        oestylo.chi2_homogeneity([0, 0], [1, 2])


def test_rng_is_reproducible():
    a = oestylo.Xoshiro256(oestylo.RngStream(7, 0))
    b = oestylo.Xoshiro256(oestylo.RngStream(7, 0))
    assert [a.next() for _ in range(5)] == [b.next() for _ in range(5)]
    assert oestylo.RngStream(7).substream(1) != oestylo.RngStream(7).substream(2)


def test_corpus_and_analyses():
    corpus = oestylo.parse_corpus(FIXTURES / "corpus")
    assert "genesis" in corpus
    genesis = corpus.poem("genesis")
    assert len(genesis) == 10
    assert genesis.part_of(5) == "B"

    report = oestylo.sensepause.intraline_ratio(genesis)
    assert report["intraline"] + report["final"] >= 0

    log = oestylo.metre.pairing_log(genesis)
    assert log["paired"] + log["skipped_missing_a"] + log["skipped_missing_b"] == 10

    index = oestylo.lexicon.build_index(corpus)
    assert index.totals["genesis"] > 0
    fit = oestylo.lexicon.hapax_fit(index, corpus, "genesis")
    assert fit.n_hapax >= 0


def test_sense_pause_fixture():
    a, b = (FIXTURES / "sensepause_lines.txt").read_text(encoding="utf-8").splitlines()
    line = oestylo.VerseLine()
    line.a_text, line.b_text = a.split("\t")
    marks = oestylo.sensepause.classify(line)
    assert [m["position"] for m in marks if m["glyph"] == ")"] == ["final"]
    strict = oestylo.sensepause.classify(line, strict=True)
    assert [m["position"] for m in strict if m["glyph"] == ")"] == ["intraline"]


def test_clustering():
    samples = [("a1", "hwæt we gardena " * 20), ("a2", "hwæt we gardena in " * 20),
               ("b1", "ond þa se eorl " * 20), ("b2", "ond þa se eorl cwæð " * 20)]
    d = oestylo.ngram.text_distances(samples, n=3, k=50)
    rows = d.rows()
    assert all(rows[i][i] == 0 for i in range(4))
    tree = oestylo.ngram.cluster(d)
    split = oestylo.ngram.top_two(tree)
    assert split["a1"] == split["a2"] != split["b1"] == split["b2"]


def test_cli_in_process(tmp_path):
    out = tmp_path / "out"
    rc = oestylo.run_cli(["--corpus", str(FIXTURES / "corpus"), "--out", str(out), "sensepause"])
    assert rc == 0
    manifest = json.loads((out / "sensepause" / "run.json").read_text())
    assert manifest["seed"] == 7
    assert oestylo.run_cli(["no-such-command"]) == 2
