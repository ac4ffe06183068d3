import json
import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rvac import __version__
from rvac.cli import SWEEP_TAIL, fmt_float, main, run_command, to_json, write_output
from rvac.config import RunConfig, config_hash, parse_config, serialize
from rvac.errors import ParseError, ValidationError
from rvac.stability import SweepAxis

BASE = """
[eos]
gamma_ad = 1.6666666666666667

[plasma]
p = 1.0
u = auto, 0.0, 0.0
H = 0, 0, 2

[vacuum]
Hc = 0, 0.5, 0
E1 = 0.05

[interface]
kappa = -0.1
"""

CASE_B = """
[plasma]
p = 1.0
u = auto, 0.0, 0.3
H = 0, 0, 1

[vacuum]
Hc = 0, 0.5, 0
E1 = 1

[interface]
kappa = -0.01
"""

SWEEP = BASE + """
[sweep]
axis1 = E1, 0, 1, 11
axis2 = Hc2, 0.1, 1, 11
"""


def test_parse_minimal_config():
    cfg = parse_config(BASE)
    assert cfg.plasma["u"] == (None, 0.0, 0.0)
    assert cfg.vacuum["Hc"] == (0.0, 0.5, 0.0)
    assert cfg.interface["kappa"] == -0.1
    assert cfg.base_state().kappa == -0.1


def test_parse_vector():
    cfg = parse_config("[plasma]\np = 1\nu = 0.1, 0, 0\nH = 0, 0, 0\n")
    assert cfg.plasma["u"] == (0.1, 0.0, 0.0)


def test_positive_kappa_rejected():
    with pytest.raises(ValidationError) as exc:
        parse_config(BASE.replace("kappa = -0.1", "kappa = 0.2"))
    assert any("kappa must be negative" in msg for _, msg in exc.value.errors)


def test_all_errors_reported():
    text = BASE.replace("p = 1.0", "p = -1\nbogus = 3").replace("E1 = 0.05", "E1 = abc")
    with pytest.raises(ValidationError) as exc:
        parse_config(text)
    paths = {p for p, _ in exc.value.errors}
    assert {"plasma.p", "plasma.bogus", "vacuum.E1"} <= paths


def test_syntax_error_has_line_number():
    with pytest.raises(ParseError) as exc:
        parse_config("[plasma]\np = 1\nthis line is junk\n")
    assert exc.value.errors[0][0] == 3
    with pytest.raises(ParseError):
        parse_config("p = 1\n")


def test_unknown_sweep_parameter():
    with pytest.raises(ValidationError):
        parse_config(BASE + "[sweep]\naxis1 = gamma, 0, 1, 3\n")


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@settings(max_examples=200, deadline=None)
@given(
    gamma_ad=st.floats(1.01, 3.0),
    p=st.floats(1e-3, 1e3),
    u=st.tuples(st.one_of(st.none(), finite), finite, finite),
    H=st.tuples(st.just(0.0), finite, finite),
    E1=finite,
    kappa=st.floats(-0.999, 0.0),
    eps=st.one_of(st.none(), st.floats(1e-12, 1.0)),
    steps=st.integers(0, 50),
    grid=st.integers(1, 200),
)
def test_round_trip(gamma_ad, p, u, H, E1, kappa, eps, steps, grid):
    cfg = RunConfig(
        gamma_ad=gamma_ad,
        entropy_scale=1.0,
        plasma={"p": p, "u": u, "H": H, "S": 0.0},
        vacuum={"Hc": (0.0, 1.0, -2.0), "E1": E1},
        interface={"kappa": kappa, "epsilon": eps, "delta": 1e-3},
        sweep=(SweepAxis("E1", -1.0, 1.0, steps), SweepAxis("kappa", -0.5, -0.1, 3)),
        modes={"grid": grid, "re_max": 5.0, "gamma_prime": (1.0, 0.0)},
    )
    text = serialize(cfg)
    assert parse_config(text) == cfg
    assert serialize(parse_config(text)) == text


def test_json_writer():
    assert to_json({"a": 0.1, "b": [math.nan, math.inf, True, None], "c": "x"}) == (
        '{"a":0.10000000000000001,"b":[null,null,true,null],"c":"x"}'
    )
    assert float(fmt_float(1 / 3)) == 1 / 3
    assert json.loads(to_json({"v": np.float64(2.5), "n": np.int64(3)})) == {"v": 2.5, "n": 3}


def test_check_rest_frame():
    cfg = parse_config("[plasma]\np = 1\nu = 0, 0, 0\nH = 0, 0, 0\n")
    bundle = run_command("check", cfg)
    record = json.loads(bundle.files["check.jsonl"])
    assert all(record["admissibility"][k] for k in ("rho_positive", "causal", "subluminal", "a0_positive_definite"))
    meta = json.loads(bundle.files["check.meta.json"])
    assert meta["version"] == __version__ and meta["config_sha256"] == config_hash(cfg)


def test_stability_record_keys():
    record = json.loads(run_command("stability", parse_config(BASE)).files["stability.jsonl"])
    assert {"cond122", "min_eig", "mu_interval", "ellipticity_ok", "sufficient_stable"} <= set(record)
    assert record["cond122"] is False


def test_matrix_dumps():
    files = run_command("matrices", parse_config(BASE)).files
    assert files["matrix_A0.csv"].startswith("# matrix A0 dim 8\n")
    assert files["matrix_Q.csv"].startswith("# matrix Q dim 42\n")
    body = files["matrix_B1.csv"].splitlines()[1:]
    assert float(body[1].split(",")[5]) == -1.0


def test_boundary_record():
    rec = json.loads(run_command("boundary", parse_config(BASE)).files["boundary.jsonl"])
    assert rec["regime"] == "expansion" and rec["n_incoming_vacuum"] == 2
    assert rec["plasma_signature"] == {"positive": 1, "negative": 1, "zero": 6}
    assert rec["w_transform_residual"] < 1e-10


def test_modes_case_b_unstable():
    rec = json.loads(run_command("modes", parse_config(CASE_B)).files["modes.jsonl"])
    assert rec["classification"] == "unstable" and rec["family"] == "caseB_Hc2_only"
    assert rec["dispersion"]["r"] > 1


def test_sweep_shape_and_empty_grid():
    text = run_command("sweep", parse_config(SWEEP), fmt="csv").files["sweep.csv"]
    lines = text.splitlines()
    assert lines[0] == ",".join(["idx", "E1", "Hc2", *SWEEP_TAIL])
    assert len(lines) == 122
    empty = run_command("sweep", parse_config(BASE + "[sweep]\naxis1 = E1, 0, 1, 0\n"), fmt="csv")
    assert empty.files["sweep.csv"] == ",".join(["idx", "E1", *SWEEP_TAIL]) + "\n"


def test_write_output_lf(tmp_path):
    bundle = run_command("stability", parse_config(BASE))
    paths = write_output(bundle, tmp_path / "out")
    for p in paths:
        assert b"\r" not in p.read_bytes()


def test_main_exit_codes(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("RVAC_NO_COLOR", "1")
    good = tmp_path / "good.ini"
    good.write_text(BASE)
    bad = tmp_path / "bad.ini"
    bad.write_text(BASE.replace("-0.1", "0.2"))
    assert main(["stability", "--config", str(good), "--out", str(tmp_path / "o")]) == 0
    assert main(["check", "--config", str(bad)]) == 2
    assert main(["check", "--config", str(tmp_path / "missing.ini")]) == 2
    assert main(["modes", "--config", str(good)]) == 3  # kappa too large for the families
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["check", "--config", str(good), "--out", str(blocker / "sub")]) == 4
    err = capsys.readouterr().err
    assert "\033[" not in err


def test_cli_subprocess_byte_identical(tmp_path):
    cfg = tmp_path / "sweep.ini"
    cfg.write_text(SWEEP)
    outs = []
    for run in ("a", "b"):
        out = tmp_path / run
        res = subprocess.run(
            [sys.executable, "-m", "rvac.cli", "sweep", "--config", str(cfg), "--out", str(out), "--format", "csv"],
            capture_output=True,
        )
        assert res.returncode == 0, res.stderr
        outs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    assert outs[0] == outs[1]
