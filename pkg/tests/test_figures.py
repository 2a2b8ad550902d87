"""Figure rendering: files appear, bytes are stable."""

from cycloscope import run_golomb_survey, run_survey
from cycloscope.figures import golomb_figures, survey_figures


def test_survey_figures(tmp_path):
    rep = run_survey(2, 5000)
    paths = survey_figures(rep, tmp_path)
    assert sorted(p.name for p in paths) == [
        "index_histogram.png", "member_share.png",
    ]
    for p in paths:
        blob = p.read_bytes()
        assert blob[:8] == b"\x89PNG\r\n\x1a\n"
        assert len(blob) > 1000


def test_survey_figures_deterministic(tmp_path):
    rep = run_survey(3, 3000)
    first = {p.name: p.read_bytes() for p in survey_figures(rep, tmp_path / "a")}
    second = {p.name: p.read_bytes() for p in survey_figures(rep, tmp_path / "b")}
    assert first == second


def test_golomb_figures(tmp_path):
    rep = run_golomb_survey(2, 3, 5000)
    paths = golomb_figures(rep, tmp_path)
    assert [p.name for p in paths] == ["index_share.png"]
    assert paths[0].read_bytes()[:4] == b"\x89PNG"


def test_histogram_overflow_bucket(tmp_path):
    # a scan high enough to produce indexes past the 40-column window
    rep = run_survey(2, 30000)
    assert any(s > 40 for s in rep.index_histogram)
    paths = survey_figures(rep, tmp_path)
    assert (tmp_path / "index_histogram.png").exists()
    assert paths
