import numpy as np
import pytest

from iruwb import (
    BiPhase,
    FrameTiming,
    LinkConfig,
    PulseShape,
    generate_th_code,
)

FS = 50e9
TAU = 0.2e-9


@pytest.fixture
def pulse():
    return PulseShape(order=1, tau=TAU, amplitude=1.0)


@pytest.fixture
def timing():
    return FrameTiming(chip_duration=2e-9, chips_per_frame=8, ppm_shift=0.4e-9)


@pytest.fixture
def code():
    return generate_th_code(seed=7, period=64, chips_per_frame=8)


@pytest.fixture
def biphase_link(pulse, timing, code):
    return LinkConfig(scheme=BiPhase(), timing=timing, code=code, pulse=pulse, sample_rate=FS)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
