import numpy as np
import pytest

from iruwb import (
    BandMeasurement,
    PulseShape,
    SampledWaveform,
    UndersampledPulse,
    ZeroEnergyWaveform,
    fractional_bandwidth,
    is_uwb,
    measure_band,
    normalize_energy,
    render_pulse,
    ten_db_duration,
)

FS = 50e9


class TestRenderPulse:
    def test_zero_amplitude_gives_zero_samples(self):
        w = render_pulse(PulseShape(order=1, tau=0.2e-9, amplitude=0.0), FS)
        assert np.all(w.samples == 0.0)

    def test_order1_has_one_positive_and_one_negative_lobe(self):
        w = render_pulse(PulseShape(order=1, tau=0.2e-9, amplitude=1.0), FS)
        # analytic first derivative of a Gaussian is odd: samples sum to ~0
        assert abs(np.sum(w.samples)) < 1e-9 * np.sum(np.abs(w.samples))
        assert w.samples.max() > 0.5 and w.samples.min() < -0.5
        # odd symmetry on the symmetric grid
        np.testing.assert_allclose(w.samples[::-1], -w.samples, atol=1e-9)

    def test_peak_amplitude_matches_request(self):
        for amp in (0.5, 1.0, 3.7):
            w = render_pulse(PulseShape(order=2, tau=0.3e-9, amplitude=amp), FS)
            assert np.max(np.abs(w.samples)) == pytest.approx(amp, rel=1e-12)

    def test_amplitude_linearity(self):
        base = render_pulse(PulseShape(order=3, tau=0.2e-9, amplitude=1.0), FS)
        for a in (0.25, 2.0, -1.5):
            scaled = render_pulse(PulseShape(order=3, tau=0.2e-9, amplitude=a), FS)
            np.testing.assert_allclose(scaled.samples, a * base.samples, rtol=1e-12)

    def test_sub_nanosecond_duration_regime(self):
        # tau = 0.2 ns keeps the -10 dB envelope duration under a nanosecond
        w = render_pulse(PulseShape(order=1, tau=0.2e-9, amplitude=1.0), FS)
        assert ten_db_duration(w) < 1e-9

    def test_undersampled_raises(self):
        with pytest.raises(UndersampledPulse):
            render_pulse(PulseShape(order=1, tau=0.2e-9), 40e9)  # below 10/tau

    def test_support_window_width(self):
        shape = PulseShape(order=1, tau=0.2e-9)
        w = render_pulse(shape, FS)
        assert len(w.samples) == round(8 * shape.tau * FS)
        assert w.start_time == pytest.approx(-(len(w.samples) - 1) / (2 * FS))

    def test_truncation_loses_under_1e10_of_energy(self):
        # oracle: a much wider window at the same rate captures the full energy
        shape = PulseShape(order=1, tau=0.2e-9)
        w = normalize_energy(render_pulse(shape, FS))
        n_wide = int(round(32 * shape.tau * FS))
        t = (np.arange(n_wide) - (n_wide - 1) / 2) / FS
        x = t / shape.tau
        wide = -x * np.exp(-(x**2))
        e_wide = np.sum(wide**2) / FS
        n = len(render_pulse(shape, FS).samples)
        lo = (n_wide - n) // 2
        e_win = np.sum(wide[lo : lo + n] ** 2) / FS
        assert (e_wide - e_win) / e_wide < 1e-10


class TestNormalizeEnergy:
    def test_unit_energy_by_direct_summation(self):
        w = normalize_energy(render_pulse(PulseShape(order=2, tau=0.25e-9), FS))
        assert np.sum(w.samples**2) / FS == pytest.approx(1.0, rel=1e-12)

    def test_idempotent(self):
        w = normalize_energy(render_pulse(PulseShape(order=1, tau=0.2e-9), FS))
        w2 = normalize_energy(w)
        np.testing.assert_allclose(w2.samples, w.samples, rtol=1e-12)

    def test_scale_invariance(self):
        w = render_pulse(PulseShape(order=1, tau=0.2e-9), FS)
        scaled = SampledWaveform(3.0 * w.samples, FS, w.start_time)
        np.testing.assert_allclose(
            normalize_energy(scaled).samples, normalize_energy(w).samples, rtol=1e-12
        )

    def test_zero_energy_raises(self):
        with pytest.raises(ZeroEnergyWaveform):
            normalize_energy(SampledWaveform(np.zeros(64), FS))


class TestMeasureBand:
    def test_fcc_band_edges_fractional_bandwidth(self):
        b = BandMeasurement(3.1e9, 10.6e9)
        assert b.fractional_bandwidth == pytest.approx(2 * 7.5 / 13.7, rel=1e-12)
        assert b.fractional_bandwidth == pytest.approx(1.0949, abs=1e-4)

    def test_degenerate_band_is_zero(self):
        assert BandMeasurement(5e9, 5e9).fractional_bandwidth == 0.0
        assert fractional_bandwidth(0.0, 0.0) == 0.0

    def test_long_sinusoid_burst_is_narrowband(self):
        t = np.arange(10000) / FS  # 200 ns burst at 5 GHz
        w = SampledWaveform(np.sin(2 * np.pi * 5e9 * t), FS)
        b = measure_band(w)
        assert b.fractional_bandwidth < 0.05
        assert 4.5e9 < b.f_low < b.f_high < 5.5e9

    def test_bandwidth_grows_as_tau_shrinks(self):
        taus = [0.4e-9, 0.3e-9, 0.2e-9, 0.1e-9]
        widths = []
        for tau in taus:
            w = render_pulse(PulseShape(order=1, tau=tau), 100e9)
            widths.append(measure_band(w).absolute_bandwidth)
        assert all(b2 >= b1 for b1, b2 in zip(widths, widths[1:]))

    def test_zero_energy_raises(self):
        with pytest.raises(ZeroEnergyWaveform):
            measure_band(SampledWaveform(np.zeros(256), FS))

    def test_monocycle_band_is_uwb(self):
        w = render_pulse(PulseShape(order=1, tau=0.2e-9), FS)
        assert is_uwb(measure_band(w))


class TestIsUwb:
    def test_absolute_bandwidth_branch(self):
        assert is_uwb(BandMeasurement(5.7e9, 6.3e9))  # 600 MHz, Bf = 0.1

    def test_fractional_branch(self):
        assert is_uwb(BandMeasurement(1.4e9, 1.8e9))  # 400 MHz, Bf = 0.25

    def test_fails_both_branches(self):
        assert not is_uwb(BandMeasurement(1.95e9, 2.05e9))  # 100 MHz, Bf = 0.05


class TestSampledWaveform:
    def test_duration(self):
        w = SampledWaveform(np.zeros(500), FS)
        assert w.duration == pytest.approx(1e-8)

    def test_invalid_sample_rate(self):
        with pytest.raises(ValueError):
            SampledWaveform(np.zeros(4), 0.0)
