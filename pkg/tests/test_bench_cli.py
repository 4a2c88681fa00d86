import csv
import json

import numpy as np
import pytest

from convprod import PreconditionError, hs_distance, make_estimator, make_kernel
from convprod.bench import cmd_compare, cmd_rate, cmd_spectrum, cmd_timing, fit_slope
from convprod.cli import main


def read_csv(path):
    text = path.read_bytes()
    assert b"\r" not in text
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_fit_slope_exact_power_law():
    ms = [4, 8, 16, 32]
    assert fit_slope([(m, m**-2.0) for m in ms]) == pytest.approx(-2.0, abs=1e-12)
    assert fit_slope([(m, 0.3) for m in ms]) == pytest.approx(0.0, abs=1e-12)


def test_fit_slope_noisy(rng):
    ms = [4, 8, 16, 32, 64]
    pts = [(m, m**-1.0 * (1 + rng.uniform(-0.05, 0.05))) for m in ms]
    assert -1.15 <= fit_slope(pts) <= -0.85


def test_fit_slope_needs_points():
    with pytest.raises(PreconditionError):
        fit_slope([(4, 1e-3), (8, 1e-13)])
    with pytest.raises(PreconditionError):
        fit_slope([(4, 1e-3), (4, 1e-4)])


def test_spectrum_csv(tmp_path):
    path = tmp_path / "s.csv"
    sigma = cmd_spectrum("piecewise", 256, path)
    rows = read_csv(path)
    assert rows[0] == ["index", "sigma"]
    assert len(rows) == 257
    assert [int(r[0]) for r in rows[1:]] == list(range(1, 257))
    values = np.array([float(r[1]) for r in rows[1:]])
    np.testing.assert_array_equal(values, sigma)
    assert np.all(np.diff(values) <= 0)
    assert np.sum(values > 1e-10 * values[0]) == 2


def test_rate_csv_matches_recomputation(tmp_path):
    path = tmp_path / "r.csv"
    report = cmd_rate("hat", "spline", [16, 8, 32], 256, alpha=1, out_path=path)
    rows = read_csv(path)
    assert rows[0] == ["m", "error", "flops", "storage", "time_ms"]
    assert [int(r[0]) for r in rows[1:]] == [8, 16, 32]
    T = make_kernel("hat", 256)
    for r in rows[1:]:
        est = make_estimator("spline", int(r[0]), 1).fit(T)
        assert abs(float(r[1]) - hs_distance(est.materialize(), T)) <= 1e-12
        assert float(r[2]) == est.flop_estimate_
        assert int(r[3]) == est.storage_count_
    assert report.slope < 0


def test_rate_svd_below_spline():
    spline = cmd_rate("hat", "spline", [8, 16, 32, 64], 1024, alpha=1)
    svd = cmd_rate("hat", "svd", [8, 16, 32, 64], 1024)
    assert spline.slope <= -0.8
    for a, b in zip(svd.rows, spline.rows):
        assert a.hs_error <= b.hs_error


def test_rate_complete_order():
    report = cmd_rate("gaussian", "wavelet", [64], 64)
    assert report.rows[0].hs_error <= 1e-9
    assert np.isnan(report.slope)


def test_timing(tmp_path):
    path = tmp_path / "t.csv"
    rows = cmd_timing("hat", "spline", 16, [256, 512, 1024], out_path=path, repeats=1)
    assert read_csv(path)[0] == ["n", "dense_ms", "fast_ms", "flop_estimate"]
    for n, _, _, flops in rows:
        est = make_estimator("spline", 16).fit(make_kernel("hat", n))
        assert flops == est.expansion_.flop_estimate()
    for (_, _, _, a), (_, _, _, b) in zip(rows, rows[1:]):
        assert 1.8 <= b / a <= 2.4


def test_compare_rows():
    rows = cmd_compare("gaussian", 64, [4], methods=["spline", "svd", "fourier"])
    for method, m, terms, error, svd_error, flops, storage in rows:
        assert svd_error <= error + 1e-12
    assert {r[0] for r in rows} == {"spline", "svd", "fourier"}


def test_cli_spectrum_stdout(capsys):
    assert main(["spectrum", "--kernel", "piecewise", "--n", "64"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "index,sigma"
    assert len(lines) == 65


def test_cli_rate_file(tmp_path):
    out = tmp_path / "rate.csv"
    code = main(["rate", "--kernel", "hat", "--method", "svd", "--n", "128", "--m", "4,8", "--out", str(out)])
    assert code == 0
    assert len(read_csv(out)) == 3


def test_cli_config_flags_win(tmp_path):
    cfg = tmp_path / "cfg.json"
    out = tmp_path / "o.csv"
    cfg.write_text(json.dumps({"kernel": "hat", "method": "spline", "n": 128, "m": "4,8,16", "out": str(out)}))
    assert main(["rate", "--config", str(cfg), "--m", "8"]) == 0
    rows = read_csv(out)
    assert [r[0] for r in rows[1:]] == ["8"]


def test_cli_kappa(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["spectrum", "--kernel", "gaussian", "--n", "256", "--kappa", "1", "--out", str(out)]) == 0
    s = [float(r[1]) for r in read_csv(out)[1:]]
    assert s[1] / s[0] == pytest.approx(0.1248, abs=0.01)


@pytest.mark.parametrize(
    "argv",
    [
        ["rate", "--kernel", "hat", "--n", "100"],
        ["spectrum", "--kernel", "hat", "--n", "64,128"],
        ["spectrum", "--kernel", "hat", "--kappa", "0.2"],
        ["rate", "--kernel", "hat", "--method", "wavelet", "--m", "3", "--n", "64"],
    ],
)
def test_cli_precondition_exit(argv):
    assert main(argv) == 2


def test_cli_bad_config_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"colour": "red"}))
    assert main(["spectrum", "--config", str(cfg)]) == 2


def test_cli_io_exit(tmp_path):
    assert main(["spectrum", "--kernel", "hat", "--n", "64", "--out", str(tmp_path / "missing" / "x.csv")]) == 3
    assert main(["spectrum", "--config", str(tmp_path / "absent.json")]) == 3


def test_cli_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["spectrum", "--kernel", "unknown"])
    assert exc.value.code == 2
