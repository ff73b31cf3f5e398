import csv
import math

import numpy as np
import pytest

from aqwalk import ExperimentConfig, load_config, save_config, write_csv, write_pgm
from aqwalk.cli import main, parse_fractions
from aqwalk.errors import IOFailure


def read_pgm(path):
    data = open(path, "rb").read()
    magic, dims, maxval, rest = data.split(b"\n", 3)
    assert magic == b"P5"
    width, height = map(int, dims.split())
    assert maxval == b"65535"
    pixels = np.frombuffer(rest, dtype=">u2").reshape(height, width)
    return pixels


def test_pgm_two_level(tmp_path):
    path = str(tmp_path / "x.pgm")
    write_pgm(np.array([[0.0, 1.0], [1.0, 0.0]]), path)
    pixels = read_pgm(path)
    assert set(pixels.ravel()) == {0, 65535}


def test_pgm_all_zero(tmp_path):
    path = str(tmp_path / "z.pgm")
    write_pgm(np.zeros((3, 4)), path)
    assert np.all(read_pgm(path) == 0)


def test_pgm_log_scale_identity(tmp_path):
    path = str(tmp_path / "i.pgm")
    write_pgm(np.eye(10), path, log_scale=True)
    pixels = read_pgm(path)
    assert np.all(pixels[np.eye(10, dtype=bool)] == 65535)
    assert np.all(pixels[~np.eye(10, dtype=bool)] == 0)


def test_pgm_validation(tmp_path):
    with pytest.raises(ValueError):
        write_pgm(np.array([[-1.0, 0.0]]), str(tmp_path / "n.pgm"))
    with pytest.raises(ValueError):
        write_pgm(np.array([[np.inf, 0.0]]), str(tmp_path / "f.pgm"))
    with pytest.raises(ValueError):
        write_pgm(np.zeros((2, 2, 2)), str(tmp_path / "d.pgm"))
    with pytest.raises(IOFailure):
        write_pgm(np.eye(2), str(tmp_path / "missing" / "x.pgm"))


def test_csv_full_precision(tmp_path):
    path = str(tmp_path / "v.csv")
    value = 1.0 / 3.0
    write_csv(path, ["a", "b"], [(1, value)])
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    assert int(rows[0]["a"]) == 1
    assert float(rows[0]["b"]) == value


def test_csv_validation(tmp_path):
    with pytest.raises(ValueError):
        write_csv(str(tmp_path / "w.csv"), ["a", "b"], [(1,)])
    with pytest.raises(IOFailure):
        write_csv(str(tmp_path / "no" / "w.csv"), ["a"], [(1,)])


def test_config_round_trip(tmp_path):
    path = str(tmp_path / "run.cfg")
    config = ExperimentConfig(
        command="spectrum",
        n=200,
        a=complex(0.6, 0.0),
        b=complex(0.0, 0.8),
        fractions="1/8,1/4",
        refine=True,
        log_scale=False,
        output="out.csv",
    )
    save_config(config, path)
    assert load_config(path) == config


def test_config_errors(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("nope=1\n")
    with pytest.raises(ValueError):
        load_config(str(path))
    path.write_text("just a line\n")
    with pytest.raises(ValueError):
        load_config(str(path))
    with pytest.raises(IOFailure):
        load_config(str(tmp_path / "absent.cfg"))


def test_parse_fractions():
    assert parse_fractions("1/8") == [(1, 1)]
    assert parse_fractions("1/8,1/4,3/8,1/2") == [(1, 1), (2, 1), (3, 1), (4, 1)]
    assert parse_fractions("1/16,1/24,1/12") == [(1, 2), (1, 3), (2, 3)]
    assert parse_fractions("2") == [(16, 1)]
    with pytest.raises(ValueError):
        parse_fractions("0/3")
    with pytest.raises(ValueError):
        parse_fractions("1/8,,1/4")
    with pytest.raises(ValueError):
        parse_fractions("x/y")


def test_cli_usage_errors(tmp_path):
    assert main(["entropy-scan", "--n", "0", "--output", str(tmp_path / "e.csv")]) == 2
    assert main(["spectrum", "--n", "10"]) == 2  # missing --output
    assert main(["revival", "--n", "100", "--output", str(tmp_path / "r.csv")]) == 2
    with pytest.raises(SystemExit):
        main(["not-a-command"])


def test_cli_io_failure(tmp_path):
    code = main(["spectrum", "--n", "6", "--output", str(tmp_path / "no" / "s.csv")])
    assert code == 4


def test_cli_spectrum_rows(tmp_path):
    path = str(tmp_path / "s.csv")
    assert main(["spectrum", "--n", "12", "--output", path]) == 0
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2 * 12
    zero_rows = [r for r in rows if float(r["abs_lambda"]) == 0.0]
    assert len(zero_rows) == 2
    for row in rows:
        if float(row["abs_lambda"]) > 0:
            assert float(row["residual"]) <= 1e-8


def test_cli_revival_schedule(tmp_path):
    path = str(tmp_path / "r.csv")
    code = main(
        ["revival", "--n", "400", "--fractions", "1/8,1/4,3/8,1/2", "--output", path]
    )
    assert code == 0
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    assert [int(r["t_predicted"]) for r in rows] == [25465, 50930, 76394, 101859]


def test_cli_determinism(tmp_path):
    out1 = str(tmp_path / "a.csv")
    out2 = str(tmp_path / "b.csv")
    args = ["entropy-scan", "--n", "30", "--t-max", "200", "--stride", "10"]
    assert main(args + ["--output", out1]) == 0
    assert main(args + ["--output", out2]) == 0
    assert open(out1, "rb").read() == open(out2, "rb").read()


def test_cli_evolve_accounting(tmp_path):
    path = str(tmp_path / "e.csv")
    assert main(["evolve", "--n", "10", "--t-max", "50", "--output", path]) == 0
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    last = rows[-1]
    total = (
        float(last["survival"]) + float(last["left_total"]) + float(last["right_total"])
    )
    assert total == pytest.approx(1.0, abs=1e-12)


def test_cli_heatmap_image(tmp_path):
    img = str(tmp_path / "h.pgm")
    assert main(["heatmap", "--n", "16", "--t", "40", "--image", img]) == 0
    pixels = read_pgm(img)
    assert pixels.shape == (16, 16)
    assert pixels.max() == 65535


def test_cli_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    config = ExperimentConfig(command="absorption", max_interior=3)
    save_config(config, str(cfg))
    out = str(tmp_path / "a.csv")
    code = main(
        ["absorption", "--config", str(cfg), "--max-interior", "5", "--output", out]
    )
    assert code == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 5  # flag overrides the config file
    assert float(rows[0]["left_absorption"]) == pytest.approx(0.5, abs=1e-9)
    assert float(rows[1]["left_absorption"]) == pytest.approx(2.0 / 3.0, abs=1e-5)


def test_cli_grover2d(tmp_path):
    out = str(tmp_path / "g.csv")
    img = str(tmp_path / "g.pgm")
    code = main(
        [
            "grover2d", "--x", "10", "--y", "10", "--t-max", "30", "--stride", "10",
            "--output", out, "--image", img,
        ]
    )
    assert code == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert [int(r["t"]) for r in rows] == [0, 10, 20, 30]
    surv = [float(r["survival"]) for r in rows]
    assert surv[0] == pytest.approx(1.0, abs=1e-14)
    assert all(b <= a for a, b in zip(surv, surv[1:]))
    assert read_pgm(img).shape == (10, 10)
