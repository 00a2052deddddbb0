"""CLI subcommands, exit codes and output determinism."""

from __future__ import annotations

import json

import pytest

from conftest import make_run, make_selection_run
from synthcorpus import build_anchor_corpus, random_embeddings
from topicaudit.cli import main
from topicaudit.interchange import save_corpus, save_embeddings, save_run
from topicaudit.rundb import RunStore


@pytest.fixture(scope="module")
def synth_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("synthfiles")
    corpus = build_anchor_corpus()
    save_corpus(corpus, root / "corpus.json")
    save_embeddings(random_embeddings(corpus, seed=42), root / "emb.bin")
    return root


@pytest.fixture()
def small_eval_files(tmp_path):
    from conftest import make_corpus

    corpus = make_corpus(
        [
            "sun moon river",
            "sun moon stone",
            "sun river stone",
            "moon stone tree",
            "river tree sun",
            "stone tree moon",
        ]
    )
    save_corpus(corpus, tmp_path / "corpus.json")
    run = make_run(
        [0, 0, 0, 1, 1, 1],
        ngrams={
            0: [("sun", 3.0), ("moon", 2.0)],
            1: [("stone", 3.0), ("tree", 2.0)],
        },
    )
    save_run(run, tmp_path / "run.json")
    return tmp_path


def test_ingest_ok(small_eval_files, capsys):
    code = main(
        ["ingest", "--corpus", str(small_eval_files / "corpus.json"),
         "--run", str(small_eval_files / "run.json")]
    )
    assert code == 0
    assert "OK" in capsys.readouterr().out


def test_ingest_invalid_run_exits_3(small_eval_files, capsys):
    raw = json.loads((small_eval_files / "run.json").read_text())
    raw["topics"][0]["size"] = 99
    (small_eval_files / "bad.json").write_text(json.dumps(raw))
    code = main(
        ["ingest", "--corpus", str(small_eval_files / "corpus.json"),
         "--run", str(small_eval_files / "bad.json")]
    )
    assert code == 3


def test_ingest_table_export(small_eval_files):
    out = small_eval_files / "table.json"
    code = main(
        ["ingest", "--corpus", str(small_eval_files / "corpus.json"),
         "--table-out", str(out)]
    )
    assert code == 0
    table = json.loads(out.read_text())
    assert table["corpus_id"] == "c1"
    assert "entries" in table and "config" in table


def test_eval_single_run_csv(small_eval_files, capsys):
    code = main(
        ["eval", "--corpus", str(small_eval_files / "corpus.json"),
         "--run", str(small_eval_files / "run.json"),
         "--top-k", "2", "--ngrams-per-topic", "2"]
    )
    assert code == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0].startswith("run_id,top_k,ngrams_per_topic,gini")
    assert lines[1].startswith("r1,2,2,")


def test_eval_missing_run_exits_5(small_eval_files, capsys):
    code = main(
        ["eval", "--corpus", str(small_eval_files / "corpus.json"),
         "--run", str(small_eval_files / "missing.json")]
    )
    assert code == 5


def test_eval_insufficient_topics_exits_4(small_eval_files, capsys):
    code = main(
        ["eval", "--corpus", str(small_eval_files / "corpus.json"),
         "--run", str(small_eval_files / "run.json")]
    )  # default --top-k 20 > 2 topics
    assert code == 4


def test_eval_without_run_is_usage_error(small_eval_files, capsys):
    code = main(["eval", "--corpus", str(small_eval_files / "corpus.json")])
    assert code == 2


def test_eval_deterministic_stdout(small_eval_files, capsys):
    argv = [
        "eval", "--corpus", str(small_eval_files / "corpus.json"),
        "--run", str(small_eval_files / "run.json"),
        "--top-k", "2", "--ngrams-per-topic", "2",
    ]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_sweep_appends_71_runs_to_store(synth_files, tmp_path, capsys):
    store_dir = tmp_path / "store"
    out_dir = tmp_path / "swept"
    code = main(
        ["sweep", "--corpus", str(synth_files / "corpus.json"),
         "--embeddings", str(synth_files / "emb.bin"),
         "--store", str(store_dir), "--out", str(out_dir),
         "--top-ngrams", "25", "--ngrams-per-topic", "3"]
    )
    assert code == 0
    store = RunStore(store_dir, create=False)
    assert len(store) == 71
    run_files = sorted(out_dir.glob("anchor-*.json"))
    assert len(run_files) == 71
    metrics_csv = (out_dir / "metrics.csv").read_text()
    assert metrics_csv.startswith("threshold,run_id,")
    assert len(metrics_csv.strip().splitlines()) == 72


def test_stats_on_swept_store(synth_files, tmp_path, capsys):
    store_dir = tmp_path / "store"
    assert main(
        ["sweep", "--corpus", str(synth_files / "corpus.json"),
         "--embeddings", str(synth_files / "emb.bin"),
         "--store", str(store_dir),
         "--top-ngrams", "25", "--ngrams-per-topic", "3"]
    ) == 0
    capsys.readouterr()
    code = main(
        ["stats", "--store", str(store_dir),
         "--x-field", "error_size", "--y-field", "coverage_pct"]
    )
    assert code == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0] == "pair,rho,p_value,n,method"
    cells = lines[1].split(",")
    assert cells[0] == "error_size~coverage_pct"
    assert float(cells[1]) == -1.0  # coverage is a linear function of error size
    assert cells[3] == "71"


def test_stats_unknown_field_exits_2(synth_files, tmp_path, capsys):
    store_dir = tmp_path / "store"
    assert main(
        ["sweep", "--corpus", str(synth_files / "corpus.json"),
         "--embeddings", str(synth_files / "emb.bin"),
         "--store", str(store_dir), "--threshold-lo", "0.5", "--threshold-hi", "0.5",
         "--top-ngrams", "25", "--ngrams-per-topic", "3"]
    ) == 0
    code = main(
        ["stats", "--store", str(store_dir), "--x-field", "nope", "--y-field", "gini"]
    )
    assert code == 2


def test_report_tables(synth_files, tmp_path, capsys):
    store_dir = tmp_path / "store"
    assert main(
        ["sweep", "--corpus", str(synth_files / "corpus.json"),
         "--embeddings", str(synth_files / "emb.bin"),
         "--store", str(store_dir),
         "--top-ngrams", "25", "--ngrams-per-topic", "3"]
    ) == 0
    capsys.readouterr()
    out_dir = tmp_path / "reports"
    code = main(["report", "--store", str(store_dir), "--out", str(out_dir)])
    assert code == 0
    desc = (out_dir / "descriptives.csv").read_text().splitlines()
    assert desc[0] == "index,n,mean,sd,min,max"
    assert any(line.startswith("error_size,71,") for line in desc)
    uniq = (out_dir / "uniques.csv").read_text().splitlines()
    assert uniq[0] == "group,total_values,unique_values,unique_pct"
    assert uniq[1].startswith("synth/anchor,71,")


def test_stability_cli_update_then_score(tmp_path, capsys):
    lists = [[f"t{t}a", f"t{t}b", f"t{t}c", f"t{t}d"] for t in range(20)]
    run = make_selection_run(lists, run_id="stab1")
    save_run(run, tmp_path / "run.json")
    lookup = tmp_path / "lookup.json"

    code = main(
        ["stability", "--run", str(tmp_path / "run.json"),
         "--lookup", str(lookup), "--update"]
    )
    assert code == 0
    first = capsys.readouterr().out
    assert first.splitlines()[-1] == "stab1,TOTAL,0"  # empty lookup scored first
    assert lookup.exists()

    code = main(
        ["stability", "--run", str(tmp_path / "run.json"), "--lookup", str(lookup)]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert out.splitlines()[-1] == "stab1,TOTAL,20"


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


@pytest.mark.parametrize(
    "command", ["ingest", "eval", "sweep", "stability", "stats", "report"]
)
def test_every_subcommand_has_help(command, capsys):
    with pytest.raises(SystemExit) as err:
        main([command, "--help"])
    assert err.value.code == 0
    out = capsys.readouterr().out
    assert "--" in out  # flags are enumerated
