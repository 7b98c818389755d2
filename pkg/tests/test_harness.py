import numpy as np
import pytest

from iruwb import (
    AwgnChannel,
    BerCurve,
    BiPhase,
    Bpam,
    ExperimentConfig,
    FrameTiming,
    InvalidConfig,
    LinkConfig,
    LinkPatch,
    Ook,
    PerfectChannel,
    Ppm,
    Psm,
    PulseShape,
    Reconfigure,
    ThCode,
    TwoUser,
    analytic_ber,
    generate_th_code,
    run_ber_point,
    run_reconfiguration_scenario,
    sweep,
    wilson_interval,
    write_ber_csv,
)
from iruwb.harness import BER_CSV_HEADER, derive_seed

FS = 50e9


def make_link(scheme, tx_gain=1.0, ppm_shift=0.4e-9):
    timing = FrameTiming(2e-9, 8, ppm_shift)
    code = generate_th_code(seed=7, period=64, chips_per_frame=8)
    return LinkConfig(scheme=scheme, timing=timing, code=code,
                      pulse=PulseShape(1, 0.2e-9), tx_gain=tx_gain, sample_rate=FS)


def awgn_cfg(scheme, grid, bits=2000, seed=42, **kw):
    return ExperimentConfig(
        link=make_link(scheme), channel=AwgnChannel(), ebn0_grid=grid,
        bits_per_point=bits, master_seed=seed, **kw,
    )


class TestExperimentConfig:
    def test_empty_grid_rejected(self):
        with pytest.raises(InvalidConfig):
            awgn_cfg(BiPhase(), ())

    def test_grid_must_increase(self):
        with pytest.raises(InvalidConfig):
            awgn_cfg(BiPhase(), (4.0, 2.0))

    def test_minimum_bits_per_point(self):
        with pytest.raises(InvalidConfig):
            awgn_cfg(BiPhase(), (0.0,), bits=100)


class TestRunBerPoint:
    def test_perfect_channel_is_error_free(self):
        for scheme in (BiPhase(), Ook(), Ppm(0.4e-9), Bpam()):
            cfg = ExperimentConfig(
                link=make_link(scheme), channel=PerfectChannel(),
                ebn0_grid=(0.0,), bits_per_point=1024, master_seed=3,
            )
            pt = run_ber_point(cfg, 0.0)
            assert pt.ber == 0.0 and pt.errors == 0

    def test_awgn_biphase_tracks_analytic(self):
        cfg = awgn_cfg(BiPhase(), (4.0,), bits=20000)
        pt = run_ber_point(cfg, 4.0)
        lo, hi = wilson_interval(pt.errors, pt.trials, 0.99)
        assert lo <= analytic_ber("antipodal", 4.0) <= hi

    def test_deterministic_for_fixed_seed(self):
        cfg = awgn_cfg(BiPhase(), (2.0,), bits=2000)
        a = run_ber_point(cfg, 2.0)
        b = run_ber_point(cfg, 2.0)
        assert a == b

    def test_seed_changes_outcome(self):
        a = run_ber_point(awgn_cfg(BiPhase(), (2.0,), bits=2000, seed=1), 2.0)
        b = run_ber_point(awgn_cfg(BiPhase(), (2.0,), bits=2000, seed=2), 2.0)
        assert a.errors != b.errors

    def test_ook_worse_than_biphase_on_awgn(self):
        b = run_ber_point(awgn_cfg(BiPhase(), (6.0,), bits=20000), 6.0)
        o = run_ber_point(awgn_cfg(Ook(), (6.0,), bits=20000), 6.0)
        assert o.ber > b.ber

    def test_psm_close_to_orthogonal_reference(self):
        scheme = Psm(PulseShape(1, 0.2e-9), PulseShape(2, 0.2e-9))
        cfg = awgn_cfg(scheme, (6.0,), bits=50000)
        pt = run_ber_point(cfg, 6.0)
        ref = analytic_ber("orthogonal", 6.0)
        assert 0.5 * ref < pt.ber < 2.0 * ref

    def test_desync_collapses_to_coin_flip(self):
        cfg = ExperimentConfig(
            link=make_link(Ppm(0.2e-9), ppm_shift=0.2e-9), channel=AwgnChannel(),
            ebn0_grid=(10.0,), bits_per_point=4000, master_seed=5,
        )
        pt = run_ber_point(cfg, 10.0, timing_error=8 * 0.2e-9)
        assert 0.4 <= pt.ber <= 0.6


class TestSweep:
    def test_singleton_grid_matches_run_ber_point(self):
        cfg = awgn_cfg(BiPhase(), (3.0,), bits=2000)
        curve = sweep(cfg)
        assert curve.points[0] == run_ber_point(cfg, 3.0, point_index=0)

    def test_monotone_on_awgn_within_ci(self):
        cfg = awgn_cfg(BiPhase(), (0.0, 2.0, 4.0, 6.0), bits=20000)
        curve = sweep(cfg)
        for a, b in zip(curve.points, curve.points[1:]):
            assert b.ber <= a.ci95[1]

    def test_thread_count_does_not_change_bytes(self, tmp_path):
        cfg = awgn_cfg(BiPhase(), (0.0, 2.0, 4.0), bits=2000)
        f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_ber_csv(f1, sweep(cfg, threads=1))
        write_ber_csv(f2, sweep(cfg, threads=3))
        assert f1.read_bytes() == f2.read_bytes()

    def test_csv_schema(self, tmp_path):
        cfg = awgn_cfg(BiPhase(), (1.0,), bits=1000)
        path = tmp_path / "ber.csv"
        write_ber_csv(path, sweep(cfg))
        lines = path.read_text().strip().splitlines()
        assert lines[0] == BER_CSV_HEADER
        fields = lines[1].split(",")
        assert fields[0] == "biphase" and fields[1] == "awgn"
        assert len(fields) == 9

    def test_reconfigure_scenario_rejected_by_sweep(self):
        cfg = awgn_cfg(
            BiPhase(), (1.0,), bits=2000,
            scenario=Reconfigure(LinkPatch(tx_gain=0.5), switch_frame=1000),
        )
        with pytest.raises(InvalidConfig):
            sweep(cfg)


class TestTwoUser:
    def test_disjoint_codes_do_not_disturb_user_one(self):
        link = make_link(BiPhase())
        shifted = ThCode(tuple((v + 1) % 8 for v in link.code.values), 8)
        base = awgn_cfg(BiPhase(), (8.0,), bits=20000, seed=17)
        both = awgn_cfg(
            BiPhase(), (8.0,), bits=20000, seed=17,
            scenario=TwoUser(code=shifted, delay=0.0, gain=1.0),
        )
        # identical seeds and chip-disjoint interference: user 1 statistics
        # are untouched sample for sample
        assert run_ber_point(both, 8.0) == run_ber_point(base, 8.0)

    def test_same_code_interferer_degrades_user_one(self):
        link = make_link(BiPhase())
        base = awgn_cfg(BiPhase(), (8.0,), bits=10000, seed=17)
        jam = awgn_cfg(
            BiPhase(), (8.0,), bits=10000, seed=17,
            scenario=TwoUser(code=link.code, delay=0.0, gain=1.0),
        )
        assert run_ber_point(jam, 8.0).ber > 10 * max(run_ber_point(base, 8.0).ber, 1e-4)


class TestReconfigurationScenario:
    def test_noiseless_rate_switch_is_error_free(self):
        patch = LinkPatch(timing=FrameTiming(3e-9, 8, 0.4e-9))
        cfg = ExperimentConfig(
            link=make_link(BiPhase()), channel=PerfectChannel(), ebn0_grid=(0.0,),
            bits_per_point=3000, master_seed=11,
            scenario=Reconfigure(patch, switch_frame=1500),
        )
        rep = run_reconfiguration_scenario(cfg)[0]
        assert all(seg.ber == 0.0 for seg in rep.segments)
        assert rep.boundary_errors == 0

    def test_gain_halving_shifts_operating_point(self):
        patch = LinkPatch(tx_gain=0.5)
        cfg = ExperimentConfig(
            link=make_link(BiPhase()), channel=AwgnChannel(), ebn0_grid=(8.0,),
            bits_per_point=30000, master_seed=11,
            scenario=Reconfigure(patch, switch_frame=10000),
        )
        rep = run_reconfiguration_scenario(cfg)[0]
        seg2 = rep.segments[1]
        lo, hi = wilson_interval(seg2.errors, seg2.trials, 0.99)
        expected = analytic_ber("antipodal", 8.0 - 20 * np.log10(2.0))
        assert lo <= expected <= hi

    def test_code_switch_drops_collision_rate(self):
        link = make_link(BiPhase())
        old = link.code
        new = generate_th_code(seed=901, period=4096, chips_per_frame=8)
        cfg = ExperimentConfig(
            link=LinkConfig(BiPhase(), link.timing,
                            generate_th_code(seed=7, period=4096, chips_per_frame=8),
                            link.pulse, sample_rate=FS),
            channel=PerfectChannel(), ebn0_grid=(8.0,), bits_per_point=40000,
            master_seed=13,
            scenario=Reconfigure(
                LinkPatch(code=new), switch_frame=20000,
                interferer=TwoUser(
                    generate_th_code(seed=7, period=4096, chips_per_frame=8), 0.0, 1.0
                ),
            ),
        )
        rep = run_reconfiguration_scenario(cfg)[0]
        pre, post = rep.segments
        assert pre.collision_rate == 1.0
        assert 0.115 <= post.collision_rate <= 0.135
        assert post.ber < pre.ber

    def test_switch_frame_must_split_payload(self):
        with pytest.raises(InvalidConfig):
            ExperimentConfig(
                link=make_link(BiPhase()), channel=PerfectChannel(), ebn0_grid=(0.0,),
                bits_per_point=2000, master_seed=1,
                scenario=Reconfigure(LinkPatch(tx_gain=0.5), switch_frame=2000),
            )


class TestSeedDerivation:
    def test_distinct_streams(self):
        a = derive_seed(1, 0, 0, 0).generate_state(4)
        b = derive_seed(1, 0, 0, 1).generate_state(4)
        c = derive_seed(1, 0, 1, 0).generate_state(4)
        d = derive_seed(1, 1, 0, 0).generate_state(4)
        states = [tuple(x) for x in (a, b, c, d)]
        assert len(set(states)) == 4

    def test_stateless(self):
        x = derive_seed(9, 2, 3, 1).generate_state(4)
        y = derive_seed(9, 2, 3, 1).generate_state(4)
        np.testing.assert_array_equal(x, y)


class TestBerCurve:
    def test_points_must_increase_in_ebn0(self):
        grid = (0.0, 2.0)
        curve = sweep(awgn_cfg(BiPhase(), grid, bits=1000))
        with pytest.raises(ValueError):
            BerCurve(curve.label, curve.channel, tuple(reversed(curve.points)))
