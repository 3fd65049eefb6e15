import numpy as np

from distalign.cli import main

from test_bench import write_domain_files


def test_demo_writes_csv_and_figure(tmp_path, capsys):
    out = tmp_path / "sphere.csv"
    assert main(["demo", "--kind", "sphere", "--steps", "12", "--out", str(out)]) == 0
    assert out.exists()
    png = tmp_path / "sphere.png"
    assert png.exists() and png.stat().st_size > 0
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_demo_shape_default_grid_no_fig(tmp_path):
    out = tmp_path / "shape.csv"
    assert main(["demo", "--kind", "shape", "--out", str(out), "--no-fig"]) == 0
    assert out.exists()
    assert not (tmp_path / "shape.png").exists()
    body = out.read_text().strip().split("\n")
    assert body[0].startswith("curve,t,c0")
    assert len(body) == 1 + 2 * 5  # header + two curves on the five-point grid


def test_run_command_prints_accuracy(tmp_path, capsys):
    write_domain_files(tmp_path)
    code = main([
        "run", "--dataset", "office31", "--source", "A", "--target", "D",
        "--features", str(tmp_path), "--method", "mda",
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert "A->D [mda] accuracy:" in out
    assert "iter  1: mu=" in out


def test_suite_command_writes_outputs(tmp_path, capsys):
    write_domain_files(tmp_path)
    out = tmp_path / "table.csv"
    code = main([
        "suite", "--dataset", "office31", "--features", str(tmp_path),
        "--methods", "source_1nn,mda", "--out", str(out),
    ])
    assert code == 0
    printed = capsys.readouterr().out
    assert "Average" in printed
    assert out.exists()
    assert (tmp_path / "table.png").exists()
    header = out.read_text().split("\n")[0]
    assert header == "task,source_1nn,mda"


def test_cli_error_paths(tmp_path, capsys):
    # missing feature files surface as exit code 1 with a message
    code = main([
        "run", "--dataset", "office31", "--source", "A", "--target", "D",
        "--features", str(tmp_path / "nowhere"), "--method", "mda",
    ])
    assert code == 1
    assert "error:" in capsys.readouterr().err

    # a domain code outside the dataset is rejected before any loading
    write_domain_files(tmp_path)
    code = main([
        "run", "--dataset", "office31", "--source", "Q", "--target", "D",
        "--features", str(tmp_path), "--method", "mda",
    ])
    assert code == 1
    assert "not part of" in capsys.readouterr().err


def test_config_flag_is_honored(tmp_path, capsys):
    write_domain_files(tmp_path)
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"iterations": 2, "mu": {"mode": "fixed", "value": 0.25}}')
    code = main([
        "run", "--dataset", "office31", "--source", "A", "--target", "W",
        "--features", str(tmp_path), "--method", "mda", "--config", str(cfg),
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert "iter  2: mu=0.2500" in out
    assert "iter  3" not in out
