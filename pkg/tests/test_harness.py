import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hfce.channel import PathComponent, Scene, SystemConfig, sample_scene, synthesize_channel
from hfce.cli import main
from hfce.dictionary import grid_angles
from hfce.estimator import EstimatorParams
from hfce.harness import (FORMULAS, ConfigError, SweepResult, SweepRow, SweepSpec, complexity_eval,
                          load_scene, load_sweep_spec, nmse, parse_epsilon, read_results, required_parameters,
                          run_sweep, save_scene, write_results)
from hfce.harness.persistence import HEADER, plot_data_path
from hfce.harness.sweep import calibrate

from conftest import crandn

SYS = SystemConfig(n_antennas=64, n_paths=4)


def small_spec(**kw):
    base = dict(system=SYS, estimator_params=EstimatorParams(epsilon=0.0), snr_grid_db=(0.0, 10.0),
                n_trials=6, schemes=("eps-omp-ssigw", "ls", "ff-omp"), seed=3, q_far=64, q_angle=64,
                n_train=50, timing=False)
    base.update(kw)
    return SweepSpec(**base)


# -- metrics ---------------------------------------------------------------------------------

def test_nmse_examples(rng):
    h = crandn(rng, 10)
    assert nmse(h, h) == 0.0
    assert nmse(np.zeros_like(h), h) == 1.0
    assert nmse(2 * h, h) == pytest.approx(1.0)


def test_nmse_phase_invariant(rng):
    h, e = crandn(rng, 10), crandn(rng, 10)
    rot = np.exp(1j * 1.234)
    assert nmse(rot * e, rot * h) == pytest.approx(nmse(e, h), rel=1e-12)


def test_nmse_errors():
    with pytest.raises(ValueError):
        nmse(np.ones(3), np.zeros(3))
    with pytest.raises(ValueError):
        nmse(np.ones(3), np.ones(4))


# -- complexity ------------------------------------------------------------------------------

def test_complexity_examples():
    assert complexity_eval("eps-omp-ssigw", dict(i=10, N=256, Q=512, B=1, N_iter=5)) == 1_326_080
    assert complexity_eval("hf-sgp-gamma", dict(N=256, L=10, Q_F=256, Q_N=256)) == 1_336_320
    assert complexity_eval("eps-omp-ssigw", dict(i=0, N=256, Q=512, B=1, N_iter=5)) == 0


def test_complexity_derives_q():
    assert complexity_eval("eps-omp-ssigw", dict(i=1, N=2, Q_F=3, Q_N=4, B=0, N_iter=0)) == 2 * 8


def test_complexity_missing_and_unknown():
    with pytest.raises(ValueError, match="N_iter"):
        complexity_eval("eps-omp-ssigw", dict(i=1, N=2, Q=3, B=1))
    with pytest.raises(ValueError):
        complexity_eval("nope", {})


@settings(max_examples=60, deadline=None)
@given(scheme=st.sampled_from(sorted(FORMULAS)), data=st.data())
def test_complexity_monotone(scheme, data):
    names = required_parameters(scheme)
    params = {n: data.draw(st.integers(0, 300), label=n) for n in names}
    base = complexity_eval(scheme, params)
    for n in names:
        bumped = dict(params, **{n: params[n] + data.draw(st.integers(1, 50), label=f"d{n}")})
        assert complexity_eval(scheme, bumped) >= base


# -- persistence -----------------------------------------------------------------------------

def _rows():
    return [SweepRow("ls", 10.0, 0.1 / 3, 0.0, 0.0, 5, 0.001, 0),
            SweepRow("eps-omp", 0.0, 1 / 7, 2.5, 1.5e-4, 5, 0.0123456789, 1),
            SweepRow("ls", 0.0, np.pi, 0.0, 0.0, 5)]


def test_csv_empty_header_only(tmp_path):
    p = tmp_path / "r.csv"
    write_results(SweepResult([]), p)
    assert p.read_text() == ",".join(HEADER) + "\n"
    assert plot_data_path(p).exists()


def test_csv_one_row_round_trip(tmp_path):
    p = tmp_path / "r.csv"
    res = SweepResult(_rows()[:1])
    write_results(res, p)
    assert len(p.read_text().splitlines()) == 2
    assert read_results(p) == res


def test_csv_sorted_and_lossless(tmp_path):
    p = tmp_path / "r.csv"
    res = SweepResult(_rows())
    write_results(res, p)
    back = read_results(p)
    assert back.rows == res.rows
    assert [(r.scheme, r.snr_db) for r in back.rows] == [("eps-omp", 0.0), ("ls", 0.0), ("ls", 10.0)]
    assert p.read_text().splitlines()[0].startswith("scheme,snr_db,mean_nmse,mean_iterations,mean_runtime_s,trials")


def test_write_error_mentions_path(tmp_path):
    bad = tmp_path / "missing" / "r.csv"
    with pytest.raises(OSError, match="missing"):
        write_results(SweepResult(_rows()), bad)


def test_scene_round_trip(tmp_path):
    scene = sample_scene(SystemConfig(n_antennas=64, n_paths=5, rician_kappa=2.0), 11)
    save_scene(scene, tmp_path / "s.json")
    back = load_scene(tmp_path / "s.json")
    assert back.paths == scene.paths and back.config == scene.config
    np.testing.assert_array_equal(back.channel, scene.channel)


# -- sweep -----------------------------------------------------------------------------------

def _single_on_grid(config, seed):
    path = PathComponent("far", 1.0 + 0.5j, float(grid_angles(64)[17]))
    return Scene((path,), synthesize_channel([path], config), config)


def test_sweep_exact_recovery_single_path():
    spec = small_spec(n_trials=1, snr_grid_db=(300.0,), schemes=("eps-omp-ssigw",),
                      estimator_params=EstimatorParams(epsilon=1e-12), epsilon_scale=None,
                      scene_fn=_single_on_grid)
    res = run_sweep(spec)
    assert len(res.rows) == 1
    assert res.rows[0].mean_nmse < 1e-10 and res.rows[0].trials == 1


def test_sweep_deterministic():
    a, b = run_sweep(small_spec()), run_sweep(small_spec())
    assert a == b


def test_sweep_scheme_order_invariant():
    a = run_sweep(small_spec())
    b = run_sweep(small_spec(schemes=("ff-omp", "ls", "eps-omp-ssigw")))
    assert a.rows == b.rows


def test_sweep_rows_cover_grid():
    res = run_sweep(small_spec())
    assert len(res.rows) == 3 * 2
    assert all(r.mean_nmse >= 0 and r.failures == 0 for r in res.rows)
    assert res.curve("ls") == [res.row("ls", 0.0).mean_nmse, res.row("ls", 10.0).mean_nmse]


def test_sweep_ls_matches_analytic():
    spec = small_spec(n_trials=300, schemes=("ls",), snr_grid_db=(5.0,))
    res = run_sweep(spec)
    avg_power, _ = calibrate(spec)
    var = avg_power / 10 ** 0.5
    # the per-trial LS expectation is N*var/(tau*||h_t||^2); average it over the same scenes
    scenes = [spec.scene_fn(SYS, np.random.SeedSequence([spec.seed, 0, t])) for t in range(spec.n_trials)]
    expected = np.mean([64 * var / s.power for s in scenes])
    row = res.row("ls", 5.0)
    assert abs(row.mean_nmse - expected) < 3 * row.stderr_nmse


def test_sweep_failures_recorded(monkeypatch):
    from hfce.harness import sweep

    def broken(obs, ctx):
        raise np.linalg.LinAlgError("boom")

    monkeypatch.setitem(sweep.RUNNERS, "ff-omp", broken)
    res = run_sweep(small_spec(n_trials=2, schemes=("ls", "ff-omp"), snr_grid_db=(10.0,)))
    assert res.row("ff-omp", 10.0).failures == 2 and res.row("ff-omp", 10.0).trials == 0
    assert np.isnan(res.row("ff-omp", 10.0).mean_nmse)
    assert res.row("ls", 10.0).trials == 2


def test_sweep_timing_flag():
    res = run_sweep(small_spec(n_trials=2, timing=True, schemes=("ls",)))
    assert all(r.mean_runtime_s > 0 for r in res.rows)
    res = run_sweep(small_spec(n_trials=2, schemes=("ls",)))
    assert all(r.mean_runtime_s == 0 for r in res.rows)


@pytest.mark.parametrize("kw", [dict(n_trials=0), dict(snr_grid_db=()), dict(schemes=("bogus",)),
                                dict(schemes=("ls", "ls")), dict(snr_reference="other")])
def test_spec_validation(kw):
    with pytest.raises(ValueError):
        small_spec(**kw)


# -- config ----------------------------------------------------------------------------------

@pytest.mark.parametrize("text,expected", [("sigma2", (1.0, 0.0)), ("0.9*sigma2", (0.9, 0.0)),
                                           ("1.1 * sigma2", (1.1, 0.0)), ("1e-3", (None, 1e-3))])
def test_parse_epsilon(text, expected):
    assert parse_epsilon(text) == expected


def test_parse_epsilon_bad():
    with pytest.raises(ConfigError):
        parse_epsilon("two sigma")


def test_default_profile_mirrors_table():
    spec = load_sweep_spec()
    assert spec.system.n_antennas == 256 and spec.system.n_paths == 10
    assert spec.q_far + spec.q_angle * spec.n_rings == 512
    assert spec.estimator_params.max_outer_iters == 20 and spec.estimator_params.n_refine_iters == 5
    assert spec.epsilon_scale == 1.0


def test_desk_profile():
    spec = load_sweep_spec(profile="desk")
    assert (spec.system.n_antennas, spec.system.n_paths, spec.n_trials) == (64, 6, 200)
    assert spec.q_far + spec.q_angle == 128


def test_file_overrides_profile(tmp_path):
    p = tmp_path / "c.ini"
    p.write_text("[system]\nN = 128\n[estimator]\nepsilon = 0.5*sigma2\nn_iter = 0\n[sweep]\nsnr_db = 3\n")
    spec = load_sweep_spec(p, profile="desk")
    assert spec.system.n_antennas == 128 and spec.system.n_paths == 6
    assert spec.epsilon_scale == 0.5 and spec.estimator_params.n_refine_iters == 0
    assert spec.snr_grid_db == (3.0,)


def test_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_sweep_spec(tmp_path / "absent.ini")
    with pytest.raises(ConfigError):
        load_sweep_spec(profile="huge")
    bad = tmp_path / "bad.ini"
    bad.write_text("no section header\n")
    with pytest.raises(ConfigError):
        load_sweep_spec(bad)


# -- CLI -------------------------------------------------------------------------------------

@pytest.fixture
def tiny_ini(tmp_path):
    p = tmp_path / "tiny.ini"
    p.write_text("[sweep]\ntrials = 2\nn_train = 20\nsnr_db = 0, 20\nschemes = eps-omp-ssigw, ls, mmse\n")
    return p


def test_cli_generate_and_estimate(tmp_path, tiny_ini, capsys):
    out = tmp_path / "scene.json"
    assert main(["generate", "--profile", "desk", "--seed", "4", "--out", str(out)]) == 0
    assert load_scene(out).config.n_antennas == 64
    for scheme in ("eps-omp-ssigw", "ls", "mmse", "hf-omp-gamma"):
        assert main(["estimate", "--profile", "desk", "--config", str(tiny_ini), "--scene", str(out),
                     "--scheme", scheme, "--snr", "15"]) == 0
    text = capsys.readouterr().out
    assert "scheme=mmse" in text and "nmse_db=" in text


def test_cli_sweep_byte_stable(tmp_path, tiny_ini):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["sweep", "--profile", "desk", "--config", str(tiny_ini), "--output", str(path),
                     "--no-timing"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert plot_data_path(a).read_bytes() == plot_data_path(b).read_bytes()
    assert len(read_results(a).rows) == 6


def test_cli_complexity(capsys):
    assert main(["complexity", "--scheme", "eps-omp-ssigw", "i=10", "N=256", "Q=512", "B=1", "N_iter=5"]) == 0
    assert "1326080" in capsys.readouterr().out
    assert main(["complexity", "N=256", "L=10", "Q_F=256", "Q_N=256"]) == 0
    assert "1336320" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["sweep", "--config", "/nonexistent/cfg.ini"],
    ["estimate", "--scene", "/nonexistent/scene.json"],
    ["complexity", "--scheme", "eps-omp-ssigw", "N=4"],
    ["complexity", "oops"],
])
def test_cli_errors_exit_nonzero(argv, capsys):
    assert main(argv) == 2
    assert "hfce: error" in capsys.readouterr().err


def test_cli_sweep_bad_output_dir(tmp_path, tiny_ini):
    assert main(["sweep", "--profile", "desk", "--config", str(tiny_ini), "--output",
                 str(tmp_path / "nope" / "r.csv")]) == 2
