from collections import Counter
from dataclasses import replace

import pytest

from helpline.automaton import COLLAPSE, count_language, enumerate_language
from helpline.fixtures import fixture_path
from helpline.harness import (
    ConfigError,
    ExperimentReport,
    ModeReport,
    load_config,
    load_confusion_table,
    load_corpus,
    parse_report,
    render_report,
    run_experiment,
)
from helpline.nlu import ASSUMED, VALID, understand


@pytest.fixture(scope="module")
def config():
    return load_config(fixture_path("experiment.ini"))


@pytest.fixture(scope="module")
def quick_report(config):
    return run_experiment(replace(config, trials=60))


def test_config_loads_fixture_paths(config):
    assert set(config.grammars) == {"f1", "f2", "f3"}
    assert config.trials == 1000
    assert config.seed == 42
    assert config.p_sub == pytest.approx(0.15)
    assert config.max_edit == 2
    assert config.reject_threshold is None


def test_missing_config_file():
    with pytest.raises(ConfigError):
        load_config("/nonexistent/experiment.ini")


def test_config_error_names_the_field(tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text(
        "[grammars]\nf1 = nope.xml\n"
        "[noise]\ntrials = 10\nseed = 1\n"
        "[corpus]\nin_grammar = x\nnatural = y\n"
        "[engine]\nlexicon = z\n",
        encoding="utf-8",
    )
    with pytest.raises(ConfigError) as err:
        load_config(bad)
    assert err.value.path == "grammars.f1"


def _config_copy(tmp_path, transform):
    """Copy the shipped config (and the files it references) into tmp_path."""
    text = transform(fixture_path("experiment.ini").read_text(encoding="utf-8"))
    target = tmp_path / "exp.ini"
    target.write_text(text, encoding="utf-8")
    # relative paths must resolve against the config's own directory
    for name in ["f1.xml", "f2.xml", "f3.xml", "confusion.tsv", "corpus_in_grammar.txt",
                 "corpus_natural.txt", "lexicon.ini", "policies.tsv", "agents.tsv"]:
        (tmp_path / name).write_bytes(fixture_path(name).read_bytes())
    return target


def test_config_rejects_bad_trials(tmp_path):
    target = _config_copy(tmp_path, lambda t: t.replace("trials = 1000", "trials = 0"))
    with pytest.raises(ConfigError) as err:
        load_config(target)
    assert err.value.path == "noise.trials"


def test_config_numeric_threshold(tmp_path):
    target = _config_copy(
        tmp_path, lambda t: t.replace("reject_threshold = auto", "reject_threshold = 2"))
    assert load_config(target).reject_threshold == 2.0
    target = _config_copy(
        tmp_path, lambda t: t.replace("reject_threshold = auto", "reject_threshold = -1"))
    with pytest.raises(ConfigError) as err:
        load_config(target)
    assert err.value.path == "engine.reject_threshold"


def test_confusion_table_format(tmp_path):
    table = load_confusion_table(fixture_path("confusion.tsv"))
    assert table["value"] == ("values", "valu")
    bad = tmp_path / "bad.tsv"
    bad.write_text("word-without-tab\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_confusion_table(bad)


def test_zero_noise_exactness(config):
    silent = replace(config, p_sub=0.0, p_del=0.0, p_ins=0.0, trials=40)
    report = run_experiment(silent)
    f3 = report.modes["f3"]
    assert f3.mean_distance == 0.0
    assert f3.frame_accuracy == 1.0
    assert f3.accepted_trials == 40


def test_report_counts_are_consistent(quick_report):
    for mode_report in quick_report.modes.values():
        assert mode_report.valid_frames + mode_report.invalid_frames == mode_report.trials
        assert 0.0 <= mode_report.ux_score <= 1.0
        assert 0.0 <= mode_report.frame_accuracy <= 1.0
        assert mode_report.accepted_trials <= mode_report.trials


def test_language_counts_in_report(quick_report):
    assert quick_report.modes["f1"].language_count == 1
    assert quick_report.modes["f2"].language_count == 8
    assert quick_report.modes["f3"].language_count == 405


def test_accounting_triple_over_the_enumeration(config, f3_auto, lexicon, schema, agents):
    # every generated query carries exactly one concept and no policy id,
    # so with a single-policy caller the whole language is answerable
    total = count_language(f3_auto, COLLAPSE)
    members, _ = enumerate_language(f3_auto, COLLAPSE)
    statuses = Counter(
        understand(m, lexicon, schema, agents["AG001"], config.max_edit).status
        for m in members
    )
    valid = statuses[VALID] + statuses[ASSUMED]
    invalid = total - valid
    assert (total, valid, invalid) == (405, 405, 0)


def test_accounting_triple_over_the_natural_corpus(lexicon, schema, agents):
    corpus = load_corpus(fixture_path("corpus_natural.txt"))
    statuses = Counter(
        understand(utt, lexicon, schema, agents["AG001"], 2).status for utt in corpus
    )
    answered = statuses[VALID] + statuses[ASSUMED]
    assert len(corpus) == 52
    assert (len(corpus), answered, statuses["invalid"]) == (52, 43, 9)


def test_reports_are_reproducible(config):
    small = replace(config, trials=40)
    first = run_experiment(small)
    second = run_experiment(small)
    assert render_report(first, "json") == render_report(second, "json")
    assert render_report(first, "table") == render_report(second, "table")


def test_json_report_round_trips(quick_report):
    assert parse_report(render_report(quick_report, "json")) == quick_report


def test_table_has_one_row_per_mode(quick_report):
    table = render_report(quick_report, "table")
    lines = table.strip().splitlines()
    assert len(lines) == 2 + len(quick_report.modes)
    assert lines[1].startswith("mode")
    assert {line.split()[0] for line in lines[2:]} == {"F1", "F2", "F3"}


def test_single_mode_report_renders():
    report = ExperimentReport(
        seed=1, trials=5, config_hash="abc",
        modes={"f3": ModeReport(
            mode="F3", language_count=405, ux_score=0.5, trials=5, accepted_trials=5,
            mean_distance=0.2, median_distance=0.0, frame_accuracy=1.0,
            valid_frames=5, invalid_frames=0,
        )},
    )
    table = render_report(report, "table")
    assert len(table.strip().splitlines()) == 3
    assert parse_report(render_report(report, "json")) == report


def test_rejected_trials_render_as_dash():
    report = ExperimentReport(
        seed=1, trials=2, config_hash="abc",
        modes={"f3": ModeReport(
            mode="F3", language_count=1, ux_score=0.0, trials=2, accepted_trials=0,
            mean_distance=None, median_distance=None, frame_accuracy=0.0,
            valid_frames=0, invalid_frames=2,
        )},
    )
    assert "-" in render_report(report, "table")
    assert parse_report(render_report(report, "json")) == report


def test_unknown_format_rejected(quick_report):
    with pytest.raises(ValueError):
        render_report(quick_report, "yaml")
