import numpy as np
import pytest

from iruwb import (
    FrameTiming,
    InvalidParameter,
    MismatchedNc,
    ThCode,
    collision_count,
    generate_th_code,
    pulse_instant,
)


class TestFrameTiming:
    def test_frame_duration_is_chips_times_chip(self):
        t = FrameTiming(2e-9, 8, 0.4e-9)
        assert t.frame_duration == 8 * 2e-9

    def test_rejects_bad_parameters(self):
        with pytest.raises(InvalidParameter):
            FrameTiming(0.0, 8, 0.4e-9)
        with pytest.raises(InvalidParameter):
            FrameTiming(2e-9, 0, 0.4e-9)
        with pytest.raises(InvalidParameter):
            FrameTiming(2e-9, 8, 0.0)  # ppm shift must be positive
        with pytest.raises(InvalidParameter):
            FrameTiming(2e-9, 8, 3e-9)  # shift beyond the chip


class TestGenerateThCode:
    def test_single_chip_forces_zero(self):
        code = generate_th_code(seed=3, period=50, chips_per_frame=1)
        assert all(v == 0 for v in code.values)

    def test_deterministic_for_fixed_inputs(self):
        a = generate_th_code(seed=11, period=200, chips_per_frame=8)
        b = generate_th_code(seed=11, period=200, chips_per_frame=8)
        assert a.values == b.values

    def test_uniform_index_frequencies(self):
        # expected frequency 1/8 = 0.125 per index
        code = generate_th_code(seed=5, period=100_000, chips_per_frame=8)
        counts = np.bincount(np.asarray(code.values), minlength=8)
        freq = counts / code.period
        assert np.all(freq >= 0.115) and np.all(freq <= 0.135)

    def test_invalid_parameters(self):
        with pytest.raises(InvalidParameter):
            generate_th_code(seed=1, period=0, chips_per_frame=8)
        with pytest.raises(InvalidParameter):
            generate_th_code(seed=1, period=10, chips_per_frame=0)

    def test_code_element_range_validation(self):
        with pytest.raises(InvalidParameter):
            ThCode((0, 9), chips_per_frame=8)


class TestPulseInstant:
    def test_origin(self):
        timing = FrameTiming(2e-9, 5, 0.4e-9)
        code = ThCode((0, 1, 3), 5)
        assert pulse_instant(0, code, timing) == 0.0

    def test_direct_placement_arithmetic(self):
        # frame 2, Tf = 10 ns, code[2] = 3, Tc = 2 ns -> 26 ns
        timing = FrameTiming(2e-9, 5, 0.4e-9)
        code = ThCode((0, 1, 3), 5)
        assert pulse_instant(2, code, timing) == pytest.approx(26e-9, rel=1e-12)

    def test_ppm_offset_is_additive(self):
        timing = FrameTiming(2e-9, 5, 0.5e-9)
        code = ThCode((0, 1, 3), 5)
        t = pulse_instant(2, code, timing, ppm_offset=0.5e-9)
        assert t == pytest.approx(26.5e-9, rel=1e-12)

    def test_strictly_increasing_in_frame_index(self):
        timing = FrameTiming(2e-9, 8, 0.4e-9)
        code = generate_th_code(seed=2, period=32, chips_per_frame=8)
        instants = [pulse_instant(k, code, timing) for k in range(200)]
        assert all(b > a for a, b in zip(instants, instants[1:]))

    def test_instant_stays_inside_its_frame(self):
        timing = FrameTiming(2e-9, 8, 0.4e-9)
        code = generate_th_code(seed=2, period=32, chips_per_frame=8)
        for k in range(100):
            t = pulse_instant(k, code, timing, ppm_offset=timing.ppm_shift)
            assert k * timing.frame_duration <= t < (k + 1) * timing.frame_duration

    def test_negative_frame_rejected(self):
        timing = FrameTiming(2e-9, 5, 0.4e-9)
        with pytest.raises(InvalidParameter):
            pulse_instant(-1, ThCode((0,), 5), timing)


class TestCollisionCount:
    def test_identical_codes_always_collide(self):
        a = generate_th_code(seed=4, period=16, chips_per_frame=8)
        assert collision_count(a, a, 100) == 100

    def test_disjoint_by_construction(self):
        a = ThCode((0, 1), 4)
        b = ThCode((1, 0), 4)
        assert collision_count(a, b, 100) == 0

    def test_uniform_codes_collide_at_one_over_nc(self):
        # brute-force expectation: independent uniform chips collide w.p. 1/8
        a = generate_th_code(seed=21, period=100_000, chips_per_frame=8)
        b = generate_th_code(seed=22, period=100_000, chips_per_frame=8)
        rate = collision_count(a, b, 100_000) / 100_000
        assert 0.115 <= rate <= 0.135

    def test_symmetry(self):
        a = generate_th_code(seed=31, period=977, chips_per_frame=8)
        b = generate_th_code(seed=32, period=977, chips_per_frame=8)
        assert collision_count(a, b, 5000) == collision_count(b, a, 5000)

    def test_mismatched_chips_raises(self):
        a = generate_th_code(seed=1, period=8, chips_per_frame=8)
        b = generate_th_code(seed=1, period=8, chips_per_frame=4)
        with pytest.raises(MismatchedNc):
            collision_count(a, b, 10)
