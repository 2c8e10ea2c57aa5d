import hashlib
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ymlattice import ConfigError, FormatError
from ymlattice.harness.cli import main
from ymlattice.harness.config import KEYS, RunConfig, describe_keys, load_config, parse_config
from ymlattice.harness.snapshot import decode_snapshot, encode_snapshot, read_snapshot, write_snapshot
from ymlattice.harness.suite import render_report, run_suite
from ymlattice.lattice import build_torus

SMALL = "lattice.n = 2\nsteps = 5\ndt = 0.01\nsuite.long = false\n"


# -- config -------------------------------------------------------------------


def test_config_defaults():
    cfg = parse_config("")
    assert cfg == RunConfig()
    assert cfg.lattice_n == 2 and cfg.cg_tol == 1e-10 and cfg.convention == "intro"


def test_config_parses_every_key():
    text = """
    # comment
    lattice.n = 3
    lattice.h = 0.5
    algebra.n = 3
    seed = 7        # trailing comment
    cg.tol = 1e-8
    cg.maxit = 50
    fd.step = 1e-3
    fd.probes = 4
    dt = 0.01
    steps = 10
    convention = body
    output.dir = out
    suite.long = no
    suite.spectrum = off
    """
    cfg = parse_config(text)
    assert (cfg.lattice_n, cfg.h, cfg.algebra_n, cfg.seed) == (3, 0.5, 3, 7)
    assert (cfg.cg_maxit, cfg.fd_probes, cfg.steps, cfg.convention) == (50, 4, 10, "body")
    assert cfg.out_dir == "out" and not cfg.suite_long and not cfg.suite_spectrum


@pytest.mark.parametrize(
    "text, line, key",
    [
        ("seed = 1\nbogus = 2\n", 2, "bogus"),
        ("dt = abc\n", 1, "dt"),
        ("\n\nsteps\n", 3, None),
        ("suite.long = maybe\n", 1, "suite.long"),
    ],
)
def test_config_errors_carry_location(text, line, key):
    with pytest.raises(ConfigError) as info:
        parse_config(text, "run.cfg")
    assert info.value.line == line and info.value.key == key
    assert str(info.value).startswith(f"run.cfg:{line}:")


@pytest.mark.parametrize("text", ["lattice.n = 1", "dt = -1", "convention = sideways", "seed = -3"])
def test_config_validation(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_config_overrides_and_file(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("seed = 4\n")
    cfg = load_config(p).with_overrides(seed=9)
    assert cfg.seed == 9
    with pytest.raises(ConfigError):
        cfg.with_overrides(steps=0)


def test_describe_keys_lists_all():
    text = describe_keys()
    assert all(k in text for k in KEYS)


# -- snapshots ------------------------------------------------------------------


@given(st.integers(0, 3), st.integers(2, 3), st.integers(0, 2**32 - 1))
def test_snapshot_round_trip(k, n, seed):
    cx = build_torus(2, 3, 2)
    c = cx.random(k, n, seed=seed)
    back = decode_snapshot(encode_snapshot(c))
    assert back.degree == k and back.n == n and back.cx.shape == cx.shape
    assert np.array_equal(back.values, c.values)


def test_snapshot_file_and_hash_stable(tmp_path):
    c = build_torus(2, 2, 2).random(1, seed=1)
    write_snapshot(tmp_path / "a.yms", c)
    write_snapshot(tmp_path / "b.yms", read_snapshot(tmp_path / "a.yms"))
    da = hashlib.sha256((tmp_path / "a.yms").read_bytes()).hexdigest()
    db = hashlib.sha256((tmp_path / "b.yms").read_bytes()).hexdigest()
    assert da == db
    assert len((tmp_path / "a.yms").read_bytes()) == 25 + 24 * 4 * 16


def test_snapshot_errors():
    buf = encode_snapshot(build_torus(2, 2, 2).random(2, seed=2))
    with pytest.raises(FormatError, match="truncated header"):
        decode_snapshot(buf[:10])
    with pytest.raises(FormatError, match="offset"):
        decode_snapshot(buf[:-3])
    with pytest.raises(FormatError, match="trailing"):
        decode_snapshot(buf + b"\0")
    with pytest.raises(FormatError, match="magic"):
        decode_snapshot(b"XXXX" + buf[4:])
    with pytest.raises(FormatError, match="version"):
        decode_snapshot(buf[:4] + b"\x02" + buf[5:])


# -- suite and CLI --------------------------------------------------------------


def test_suite_jobs_preserve_order_and_output():
    cfg = parse_config(SMALL)
    only = ("lattice", "gauge", "determinism-probe")
    a = render_report(run_suite(cfg, jobs=1, only=only), cfg)
    b = render_report(run_suite(cfg, jobs=3, only=only), cfg)
    assert a == b
    assert [ln.split()[1] for ln in a.splitlines() if ln.startswith("[")] == list(only)


def test_cli_bad_args_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == 2


def test_cli_bad_config_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.cfg"
    p.write_text("dt = fast\n")
    assert main(["evolve-r", "--config", str(p)]) == 2
    assert "bad value for 'dt'" in capsys.readouterr().err


def test_cli_evolve_r_csv_deterministic(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text(SMALL)
    outs = []
    for d in ("a", "b"):
        assert main(["evolve-r", "--config", str(cfg), "--out", str(tmp_path / d), "--quiet", "--seed", "3"]) == 0
        outs.append((tmp_path / d / "evolve_r.csv").read_text())
    assert outs[0] == outs[1]
    lines = outs[0].splitlines()
    assert lines[0] == "step,time,energy,gauss_e,gauss_b,charge_norm,bianchi_defect"
    assert len(lines) == 7
    assert (tmp_path / "a" / "A.yms").exists() and (tmp_path / "a" / "p.yms").exists()


def test_cli_evolve_t(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text(SMALL + "convention = body\n")
    assert main(["evolve-t", "--config", str(cfg), "--out", str(tmp_path), "--quiet"]) == 0
    rows = (tmp_path / "evolve_t.csv").read_text().splitlines()[1:]
    e = [float(r.split(",")[2]) for r in rows]
    assert max(e) - min(e) <= 1e-12 * e[0]


def test_cli_bracket(tmp_path, capsys):
    cx = build_torus(2, 2, 2)
    for name, k, s in (("A", 1, 1), ("E", 1, 2), ("B", 2, 3)):
        write_snapshot(tmp_path / f"{name}.yms", cx.random(k, seed=s))
    pts = [str(tmp_path / f"{n}.yms") for n in "AEB"]
    assert main(["bracket", "probe_e", "probe_b", "--point", *pts]) == 0
    fg = float(capsys.readouterr().out.split("=")[1])
    assert main(["bracket", "probe_b", "probe_e", "--point", *pts]) == 0
    gf = float(capsys.readouterr().out.split("=")[1])
    assert fg == pytest.approx(-gf, rel=1e-12)
    assert main(["bracket", "nope", "probe_e"]) == 2


def test_cli_decompose(tmp_path):
    cx = build_torus(2, 2, 2)
    write_snapshot(tmp_path / "A.yms", cx.random(1, seed=4, scale=0.5))
    write_snapshot(tmp_path / "c.yms", cx.random(1, seed=5))
    args = ["decompose", str(tmp_path / "c.yms"), "--connection", str(tmp_path / "A.yms"), "--out", str(tmp_path), "--quiet"]
    assert main(args) == 0
    xi, y = read_snapshot(tmp_path / "xi.yms"), read_snapshot(tmp_path / "y.yms")
    assert xi.degree == 0 and y.degree == 1


def test_cli_missing_file_exit_1(tmp_path):
    assert main(["decompose", str(tmp_path / "x.yms"), "--connection", str(tmp_path / "A.yms")]) == 1


def test_cli_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "ymlattice", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "verify" in r.stdout and "lattice.n" in r.stdout
