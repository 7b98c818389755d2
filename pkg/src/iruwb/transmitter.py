"""Bit-stream to baseband waveform mapping for the five pulse modulations.

The simulation is baseband equivalent: no carrier, every pulse is placed
directly on the frame/chip grid selected by the time-hopping code.  One
frame carries one bit.  Pulses are energy normalized, so the transmitted
energy of a "one" symbol is ``tx_gain**2``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from .timehopping import FrameTiming, ThCode, pulse_start_times
from .waveform import PulseShape, SampledWaveform, normalize_energy, render_pulse


class InvalidConfig(ValueError):
    pass


class SampleRateMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Ppm:
    """Pulse position modulation: a one bit is delayed by ``shift`` seconds."""

    shift: float


@dataclass(frozen=True)
class Ook:
    """On-off keying: a one bit sends a pulse, a zero bit sends nothing."""

    on_amplitude: float = 1.0


@dataclass(frozen=True)
class Bpam:
    """Binary pulse amplitude modulation with distinct one/zero amplitudes."""

    one_amplitude: float = 1.0
    zero_amplitude: float = 0.5

    @property
    def antipodal(self) -> bool:
        return self.zero_amplitude == -self.one_amplitude


@dataclass(frozen=True)
class BiPhase:
    """Antipodal signalling: one -> +amplitude, zero -> -amplitude."""

    amplitude: float = 1.0


@dataclass(frozen=True)
class Psm:
    """Pulse shape modulation: the bit selects one of two pulse shapes."""

    shape_zero: PulseShape
    shape_one: PulseShape


ModulationScheme = Union[Ppm, Ook, Bpam, BiPhase, Psm]

# Largest tolerated normalized cross-correlation between the two PSM shapes.
PSM_MAX_CROSS_CORRELATION = 0.9


def scheme_label(scheme: ModulationScheme) -> str:
    """Short label used in result files.  BPAM carries its amplitude pair
    because performance depends on it."""
    if isinstance(scheme, Ppm):
        return "ppm"
    if isinstance(scheme, Ook):
        return "ook"
    if isinstance(scheme, Bpam):
        return f"bpam({scheme.one_amplitude:g}/{scheme.zero_amplitude:g})"
    if isinstance(scheme, BiPhase):
        return "biphase"
    if isinstance(scheme, Psm):
        return "psm"
    raise InvalidConfig(f"unknown scheme {scheme!r}")


def _center_aligned_dot(a: np.ndarray, b: np.ndarray, sample_rate: float) -> float:
    """Inner product of two pulse sample vectors aligned on their centres."""
    n = max(len(a), len(b))
    pa = np.zeros(n)
    pb = np.zeros(n)
    oa = (n - len(a)) // 2
    ob = (n - len(b)) // 2
    pa[oa : oa + len(a)] = a
    pb[ob : ob + len(b)] = b
    return float(np.dot(pa, pb) / sample_rate)


def psm_cross_correlation(scheme: Psm, sample_rate: float) -> float:
    """Normalized cross-correlation of the two (unit-energy) PSM shapes."""
    s0 = normalize_energy(render_pulse(scheme.shape_zero, sample_rate))
    s1 = normalize_energy(render_pulse(scheme.shape_one, sample_rate))
    return _center_aligned_dot(s0.samples, s1.samples, sample_rate)


@dataclass(frozen=True)
class LinkConfig:
    """Full transmitter-side description of one link.

    ``tx_gain`` scales the unit-energy pulse amplitude and stands in for
    radio range; combined with the channel attenuation it sets the received
    energy per bit.
    """

    scheme: ModulationScheme
    timing: FrameTiming
    code: ThCode
    pulse: PulseShape
    tx_gain: float = 1.0
    sample_rate: float = 50e9

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        t, p = self.timing, self.pulse
        if self.code.chips_per_frame != t.chips_per_frame:
            raise InvalidConfig(
                f"code uses {self.code.chips_per_frame} chips per frame, "
                f"timing uses {t.chips_per_frame}"
            )
        if self.sample_rate < 10.0 / p.tau:
            raise InvalidConfig(
                f"sample_rate {self.sample_rate:.3g} below 10/tau = {10.0 / p.tau:.3g}"
            )
        if p.amplitude == 0.0:
            raise InvalidConfig("pulse amplitude must be nonzero")
        if not self.tx_gain > 0:
            raise InvalidConfig(f"tx_gain must be > 0, got {self.tx_gain}")

        support = p.support
        if isinstance(self.scheme, Psm):
            support = max(self.scheme.shape_zero.support, self.scheme.shape_one.support)
            if self.sample_rate < 10.0 / min(
                self.scheme.shape_zero.tau, self.scheme.shape_one.tau
            ):
                raise InvalidConfig("sample_rate too low for the PSM shapes")
            rho = psm_cross_correlation(self.scheme, self.sample_rate)
            if abs(rho) >= PSM_MAX_CROSS_CORRELATION:
                raise InvalidConfig(
                    f"PSM shapes are not distinguishable: |cross-correlation| "
                    f"= {abs(rho):.3f} >= {PSM_MAX_CROSS_CORRELATION}"
                )
        if t.ppm_shift + support > t.chip_duration * (1 + 1e-12):
            raise InvalidConfig(
                f"ppm_shift + pulse support = {t.ppm_shift + support:.3g} s exceeds "
                f"chip duration {t.chip_duration:.3g} s (pulse would leave its chip)"
            )
        if isinstance(self.scheme, Ppm) and self.scheme.shift != t.ppm_shift:
            raise InvalidConfig(
                f"PPM shift {self.scheme.shift:.3g} s differs from timing.ppm_shift "
                f"{t.ppm_shift:.3g} s"
            )
        if isinstance(self.scheme, Ook) and self.scheme.on_amplitude == 0.0:
            raise InvalidConfig("OOK on-amplitude must be nonzero")
        if isinstance(self.scheme, Bpam) and self.scheme.one_amplitude == self.scheme.zero_amplitude:
            raise InvalidConfig("BPAM amplitudes must differ")

    @property
    def frame_samples(self) -> int:
        return int(round(self.timing.frame_duration * self.sample_rate))


def unit_pulses(cfg: LinkConfig) -> tuple[np.ndarray, np.ndarray]:
    """Unit-energy pulse sample vectors for the zero and one symbols.

    Identical for every scheme except PSM, which uses two distinct shapes.
    """
    if isinstance(cfg.scheme, Psm):
        p0 = normalize_energy(render_pulse(cfg.scheme.shape_zero, cfg.sample_rate)).samples
        p1 = normalize_energy(render_pulse(cfg.scheme.shape_one, cfg.sample_rate)).samples
        return p0, p1
    p = normalize_energy(render_pulse(cfg.pulse, cfg.sample_rate)).samples
    return p, p


def _symbol_amplitudes(scheme: ModulationScheme) -> tuple[float, float]:
    """Amplitude multipliers for (zero, one) relative to tx_gain."""
    if isinstance(scheme, Ppm):
        return 1.0, 1.0
    if isinstance(scheme, Ook):
        return 0.0, scheme.on_amplitude
    if isinstance(scheme, Bpam):
        return scheme.zero_amplitude, scheme.one_amplitude
    if isinstance(scheme, BiPhase):
        return -scheme.amplitude, scheme.amplitude
    if isinstance(scheme, Psm):
        return 1.0, 1.0
    raise InvalidConfig(f"unknown scheme {scheme!r}")


def average_bit_energy(cfg: LinkConfig) -> float:
    """Average transmitted energy per bit assuming equiprobable bits.

    This is the energy that the Eb/N0 noise calibration refers to; note that
    for OOK it is half the pulse energy.
    """
    a0, a1 = _symbol_amplitudes(cfg.scheme)
    return cfg.tx_gain**2 * (a0**2 + a1**2) / 2.0


def modulate(bits, cfg: LinkConfig) -> SampledWaveform:
    """Map a bit sequence onto the frame grid.

    Frame k carries bit k on the chip selected by the hopping code; the
    waveform spans exactly len(bits) frames starting at t=0.
    """
    bits = np.asarray(bits, dtype=np.int64)
    if bits.ndim != 1 or len(bits) == 0:
        raise InvalidConfig("bits must be a nonempty 1-d sequence")
    if np.any((bits != 0) & (bits != 1)):
        raise InvalidConfig("bits must be 0 or 1")

    fs = cfg.sample_rate
    n_frames = len(bits)
    n_total = int(round(n_frames * cfg.timing.frame_duration * fs))
    buf = np.zeros(n_total)

    p0, p1 = unit_pulses(cfg)
    a0, a1 = _symbol_amplitudes(cfg.scheme)
    amps = cfg.tx_gain * np.where(bits == 1, a1, a0)

    offsets = None
    if isinstance(cfg.scheme, Ppm):
        offsets = np.where(bits == 1, cfg.scheme.shift, 0.0)
    starts = np.rint(pulse_start_times(n_frames, cfg.code, cfg.timing, offsets) * fs).astype(
        np.int64
    )

    # One pulse per frame and per chip: target index ranges never overlap,
    # so plain fancy-index addition is safe.
    for pulse, mask in ((p0, bits == 0), (p1, bits == 1)):
        sel = np.nonzero(mask & (amps != 0.0))[0]
        if len(sel) == 0:
            continue
        idx = starts[sel, None] + np.arange(len(pulse))[None, :]
        buf[idx.ravel()] += (amps[sel, None] * pulse[None, :]).ravel()

    return SampledWaveform(buf, fs, start_time=0.0)


def superpose(users: list[tuple[SampledWaveform, float, float]]) -> SampledWaveform:
    """Sum delayed, scaled user waveforms on the union of their supports.

    Each entry is (waveform, delay_seconds, gain); delays are rounded to the
    nearest sample.
    """
    if len(users) == 0:
        raise InvalidConfig("superpose needs at least one user")
    fs = users[0][0].sample_rate
    if any(w.sample_rate != fs for w, _, _ in users):
        raise SampleRateMismatch("all user waveforms must share one sample rate")

    t0s = [w.start_time + d for w, d, _ in users]
    start = min(t0s)
    offsets = [int(round((t0 - start) * fs)) for t0 in t0s]
    n = max(off + len(w.samples) for (w, _, _), off in zip(users, offsets))
    buf = np.zeros(n)
    for (w, _, g), off in zip(users, offsets):
        buf[off : off + len(w.samples)] += g * w.samples
    return SampledWaveform(buf, fs, start_time=start)


@dataclass(frozen=True)
class LinkPatch:
    """Partial link update covering the four reconfigurable knobs:
    data rate (timing), spectrum occupation (pulse tau), radio range
    (tx_gain) and the hopping code."""

    timing: FrameTiming | None = None
    pulse_tau: float | None = None
    tx_gain: float | None = None
    code: ThCode | None = None

    def is_empty(self) -> bool:
        return (
            self.timing is None
            and self.pulse_tau is None
            and self.tx_gain is None
            and self.code is None
        )


def reconfigure(cfg: LinkConfig, patch: LinkPatch) -> LinkConfig:
    """Apply a partial update and re-validate.  The harness only switches
    configurations at a frame boundary."""
    changes = {}
    if patch.timing is not None:
        changes["timing"] = patch.timing
    if patch.pulse_tau is not None:
        changes["pulse"] = replace(cfg.pulse, tau=patch.pulse_tau)
    if patch.tx_gain is not None:
        changes["tx_gain"] = patch.tx_gain
    if patch.code is not None:
        changes["code"] = patch.code
    if not changes:
        return cfg
    return replace(cfg, **changes)
