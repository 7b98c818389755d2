"""Sub-nanosecond pulse shapes and their spectral occupancy.

Pulses are Gaussian-derivative monocycles (orders 1 to 3) rendered on a
uniform sample grid.  All downstream signal processing works on the
:class:`SampledWaveform` container defined here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class UndersampledPulse(ValueError):
    """Sample rate too low to represent the requested pulse."""


class ZeroEnergyWaveform(ValueError):
    """Operation requires a waveform with nonzero energy."""


# Minimum oversampling: at least 10 samples across the width parameter.
MIN_SAMPLES_PER_TAU = 10.0

# Rendered support is 8*tau wide, centred on t=0.  For Gaussian derivatives
# the energy outside that window is below 1e-10 of the total.
SUPPORT_TAUS = 8.0


@dataclass(frozen=True, eq=False)
class SampledWaveform:
    """Uniformly sampled real signal.

    samples are dimensionless amplitudes; ``start_time`` is the absolute
    time of ``samples[0]``.
    """

    samples: np.ndarray
    sample_rate: float
    start_time: float = 0.0

    def __post_init__(self):
        if not self.sample_rate > 0:
            raise ValueError(f"sample_rate must be > 0, got {self.sample_rate}")
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=np.float64))

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate

    @property
    def times(self) -> np.ndarray:
        return self.start_time + np.arange(len(self.samples)) / self.sample_rate

    def energy(self) -> float:
        """Integral of the squared signal (sum of squares over sample rate)."""
        return float(np.sum(self.samples**2) / self.sample_rate)


@dataclass(frozen=True)
class PulseShape:
    """Gaussian-derivative monocycle: order-th derivative of a Gaussian.

    ``tau`` sets the width of the underlying Gaussian exp(-(t/tau)^2); the
    rendered peak magnitude equals ``amplitude``.  With this convention the
    8*tau support window truncates less than 1e-10 of the pulse energy.
    """

    order: int = 1
    tau: float = 0.2e-9
    amplitude: float = 1.0

    def __post_init__(self):
        if self.order not in (1, 2, 3):
            raise ValueError(f"monocycle order must be 1, 2 or 3, got {self.order}")
        if not self.tau > 0:
            raise ValueError(f"tau must be > 0, got {self.tau}")

    @property
    def support(self) -> float:
        """Width of the rendered support window in seconds."""
        return SUPPORT_TAUS * self.tau


@dataclass(frozen=True)
class BandMeasurement:
    """Occupied band at the -10 dB level and the derived fractional bandwidth."""

    f_low: float
    f_high: float
    fractional_bandwidth: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if not (self.f_high >= self.f_low >= 0.0):
            raise ValueError(f"need f_high >= f_low >= 0, got {self.f_low}, {self.f_high}")
        if self.fractional_bandwidth is None:
            object.__setattr__(
                self, "fractional_bandwidth", fractional_bandwidth(self.f_low, self.f_high)
            )

    @property
    def absolute_bandwidth(self) -> float:
        return self.f_high - self.f_low


def fractional_bandwidth(f_low: float, f_high: float) -> float:
    """2 (f_high - f_low) / (f_high + f_low), and 0 for a degenerate DC band."""
    if f_high + f_low == 0.0:
        return 0.0
    return 2.0 * (f_high - f_low) / (f_high + f_low)


def _monocycle(order: int, tau: float, t: np.ndarray) -> np.ndarray:
    """Unnormalized Gaussian derivative of the given order."""
    x = t / tau
    g = np.exp(-(x**2))
    if order == 1:
        return -x * g
    if order == 2:
        return (1.0 - 2.0 * x**2) * g
    return (3.0 * x - 2.0 * x**3) * g


def render_pulse(shape: PulseShape, sample_rate: float) -> SampledWaveform:
    """Sample a monocycle on a symmetric window of width 8*tau centred at 0.

    Raises UndersampledPulse when sample_rate < 10 / tau.
    """
    if sample_rate < MIN_SAMPLES_PER_TAU / shape.tau:
        raise UndersampledPulse(
            f"sample_rate {sample_rate:.3g} Hz < {MIN_SAMPLES_PER_TAU}/tau "
            f"= {MIN_SAMPLES_PER_TAU / shape.tau:.3g} Hz"
        )
    n = int(round(SUPPORT_TAUS * shape.tau * sample_rate))
    t = (np.arange(n) - (n - 1) / 2.0) / sample_rate
    raw = _monocycle(shape.order, shape.tau, t)
    peak = np.max(np.abs(raw))
    samples = shape.amplitude * (raw / peak)
    return SampledWaveform(samples, sample_rate, start_time=-(n - 1) / (2.0 * sample_rate))


def normalize_energy(w: SampledWaveform) -> SampledWaveform:
    """Scale so that sum(samples^2)/sample_rate == 1 (within 1e-12 relative)."""
    e = w.energy()
    if e <= 0.0:
        raise ZeroEnergyWaveform("cannot normalize a zero-energy waveform")
    return SampledWaveform(w.samples / np.sqrt(e), w.sample_rate, w.start_time)


def measure_band(w: SampledWaveform, min_bins: int = 4096) -> BandMeasurement:
    """Locate the -10 dB band edges of the magnitude spectrum.

    The spectrum is a zero-padded DFT with at least ``min_bins`` bins; the
    crossings of the -10 dB level are refined by linear interpolation
    between neighbouring bins.
    """
    if w.energy() <= 0.0:
        raise ZeroEnergyWaveform("cannot measure the band of a zero-energy waveform")
    n = len(w.samples)
    nfft = max(min_bins, 1 << int(np.ceil(np.log2(2 * n))))
    mag = np.abs(np.fft.rfft(w.samples, nfft))
    freqs = np.fft.rfftfreq(nfft, d=1.0 / w.sample_rate)
    threshold = np.max(mag) * 10.0 ** (-10.0 / 20.0)

    above = np.nonzero(mag >= threshold)[0]
    i_first, i_last = int(above[0]), int(above[-1])

    if i_first == 0:
        f_low = 0.0
    else:
        m0, m1 = mag[i_first - 1], mag[i_first]
        frac = (threshold - m0) / (m1 - m0)
        f_low = float(freqs[i_first - 1] + frac * (freqs[i_first] - freqs[i_first - 1]))
    if i_last == len(mag) - 1:
        f_high = float(freqs[-1])
    else:
        m0, m1 = mag[i_last], mag[i_last + 1]
        frac = (m0 - threshold) / (m0 - m1)
        f_high = float(freqs[i_last] + frac * (freqs[i_last + 1] - freqs[i_last]))
    return BandMeasurement(f_low, f_high)


def is_uwb(b: BandMeasurement) -> bool:
    """Qualify a band as ultra-wideband: >= 500 MHz absolute or > 20% fractional."""
    return b.absolute_bandwidth >= 500e6 or b.fractional_bandwidth > 0.20


def ten_db_duration(w: SampledWaveform) -> float:
    """Time between the first and last samples within 10 dB of the peak magnitude."""
    mag = np.abs(w.samples)
    peak = np.max(mag)
    if peak == 0.0:
        raise ZeroEnergyWaveform("duration of an all-zero waveform is undefined")
    idx = np.nonzero(mag >= peak * 10.0 ** (-10.0 / 20.0))[0]
    return float((idx[-1] - idx[0] + 1) / w.sample_rate)
