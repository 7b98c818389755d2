"""Receivers: correlation demodulation, energy detection, synchronization.

The coherent path regenerates a clean template from the link configuration
and correlates it per frame at the chip selected by the hopping code.  The
non-coherent path integrates squared received samples over the designated
chip.  Both need frame timing, provided by :func:`acquire_sync`, a sliding
matched filter over a known preamble.

Over multipath channels the template stays the clean transmitted pulse (no
rake, no channel estimation), so multipath results are a lower bound.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.signal import correlate

from .timehopping import pulse_start_times
from .transmitter import (
    Bpam,
    BiPhase,
    InvalidConfig,
    LinkConfig,
    Ook,
    Ppm,
    Psm,
    modulate,
    scheme_label,
    unit_pulses,
)
from .waveform import SampledWaveform

SPEED_OF_LIGHT = 2.998e8

# Lock declared when the correlation peak exceeds 3x the RMS of the trace
# floor (trace with the peak's own lobe removed); chosen so that noise-only
# windows of around a nanosecond fail to lock with probability > 0.99.
LOCK_THRESHOLD = 3.0


class SyncNotFound(RuntimeError):
    """Preamble search did not produce a lock; carries the unlocked state."""

    def __init__(self, state: "SyncState"):
        super().__init__(
            f"no sync lock: peak metric {state.peak_metric:.2f} < {LOCK_THRESHOLD}"
        )
        self.state = state


class NotSynchronized(RuntimeError):
    pass


class PilotMissingSymbol(ValueError):
    pass


@dataclass(frozen=True)
class SyncState:
    """Estimated start-of-frame delay relative to the first received sample."""

    offset: float
    peak_metric: float
    locked: bool


@dataclass(frozen=True, eq=False)
class DecisionStats:
    """Per-bit decision statistics plus the scheme they were computed for."""

    values: np.ndarray
    scheme: str

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))

    def __len__(self) -> int:
        return len(self.values)

    def slice(self, start: int, stop: int | None = None) -> "DecisionStats":
        return DecisionStats(self.values[start:stop], self.scheme)


def _pulse_support_samples(cfg: LinkConfig) -> int:
    p0, p1 = unit_pulses(cfg)
    return max(len(p0), len(p1))


def acquire_sync(
    rx: SampledWaveform,
    preamble_cfg: LinkConfig,
    known_bits,
    search_window: float,
) -> SyncState:
    """Slide the regenerated preamble over [0, search_window] and lock on the
    correlation peak.

    The lock metric is peak over RMS of the correlation trace after removing
    one pulse support around the peak (otherwise the peak's own lobe inflates
    the floor estimate).  Ties break toward the smallest offset.  Raises
    SyncNotFound when the metric stays below the lock threshold.
    """
    known_bits = np.asarray(known_bits, dtype=np.int64)
    if len(known_bits) < 8:
        raise InvalidConfig("preamble must span at least 8 frames")
    template = modulate(known_bits, preamble_cfg).samples
    fs = rx.sample_rate
    window = int(round(search_window * fs))
    n_offsets = min(window, len(rx.samples) - len(template)) + 1
    if n_offsets < 1:
        raise SyncNotFound(SyncState(0.0, 0.0, False))

    # The floor of the correlation trace is estimated over a region wider
    # than the search window, so short windows still get a usable noise
    # reference; the peak search itself stays inside the window.
    guard = _pulse_support_samples(preamble_cfg)
    echo = int(round(preamble_cfg.timing.chip_duration * fs))
    floor_pad = max(20 * guard, 2 * (guard + echo) + 256, 1024)
    n_trace = min(n_offsets + floor_pad, len(rx.samples) - len(template) + 1)
    segment = rx.samples[: len(template) + n_trace - 1]
    trace = correlate(segment, template, mode="valid")
    peak_idx = int(np.argmax(trace[:n_offsets]))  # first index wins ties
    peak = float(trace[peak_idx])

    # Multipath echoes of the preamble surround the peak for up to a chip
    # duration on either side (the strongest arrival need not be the first);
    # they are evidence of the signal, not noise, so they stay out of the
    # floor estimate.
    exclude = guard + echo
    floor = np.concatenate(
        [trace[: max(peak_idx - exclude, 0)], trace[peak_idx + exclude + 1 :]]
    )
    floor_rms = float(np.sqrt(np.mean(floor**2))) if len(floor) else 0.0
    if floor_rms > 0.0:
        metric = peak / floor_rms
    else:
        metric = np.inf if peak > 0.0 else 0.0

    state = SyncState(peak_idx / fs, metric, bool(metric >= LOCK_THRESHOLD))
    if not state.locked:
        raise SyncNotFound(state)
    return state


def _frame_windows(
    rx: SampledWaveform, cfg: LinkConfig, sync: SyncState, n_bits: int, width: int,
    extra_shift: int = 0,
) -> np.ndarray:
    """Gather per-frame windows of ``width`` samples at the coded chips."""
    fs = rx.sample_rate
    starts = np.rint(pulse_start_times(n_bits, cfg.code, cfg.timing) * fs).astype(np.int64)
    starts = starts + int(round(sync.offset * fs)) + extra_shift
    if starts.min() < 0:
        raise ValueError("sync offset places a frame window before the waveform start")
    stop = int(starts.max()) + width
    if stop > len(rx.samples):
        raise ValueError(
            f"received waveform too short: need {stop} samples, have {len(rx.samples)}"
        )
    return rx.samples[starts[:, None] + np.arange(width)[None, :]]


def correlate_template(
    rx: SampledWaveform, cfg: LinkConfig, sync: SyncState, n_bits: int
) -> DecisionStats:
    """Coherent per-frame correlation statistics.

    PPM: correlation at the one-offset minus correlation at the zero-offset;
    BiPhase/BPAM: correlation with the single template; PSM: correlation
    with the one-shape minus correlation with the zero-shape.  In all cases
    a positive statistic points to a one bit.
    """
    if not sync.locked:
        raise NotSynchronized("correlate_template requires a locked SyncState")
    if isinstance(cfg.scheme, Ook):
        raise InvalidConfig("OOK is demodulated by energy_detect, not by correlation")

    fs = cfg.sample_rate
    p0, p1 = unit_pulses(cfg)
    if isinstance(cfg.scheme, Ppm):
        shift = int(round(cfg.scheme.shift * fs))
        width = shift + len(p0)
        win = _frame_windows(rx, cfg, sync, n_bits, width)
        c_zero = win[:, : len(p0)] @ p0 / fs
        c_one = win[:, shift : shift + len(p0)] @ p0 / fs
        values = c_one - c_zero
    elif isinstance(cfg.scheme, Psm):
        width = max(len(p0), len(p1))
        win = _frame_windows(rx, cfg, sync, n_bits, width)
        # Shorter shape is centre aligned inside the wider support.
        o0 = (width - len(p0)) // 2
        o1 = (width - len(p1)) // 2
        c_zero = win[:, o0 : o0 + len(p0)] @ p0 / fs
        c_one = win[:, o1 : o1 + len(p1)] @ p1 / fs
        values = c_one - c_zero
    else:  # BiPhase, Bpam
        win = _frame_windows(rx, cfg, sync, n_bits, len(p0))
        values = win @ p0 / fs
    return DecisionStats(values, scheme_label(cfg.scheme))


def energy_detect(
    rx: SampledWaveform, cfg: LinkConfig, sync: SyncState, n_bits: int
) -> DecisionStats:
    """Square-and-integrate over the designated chip of each frame."""
    if not sync.locked:
        raise NotSynchronized("energy_detect requires a locked SyncState")
    width = int(round(cfg.timing.chip_duration * cfg.sample_rate))
    win = _frame_windows(rx, cfg, sync, n_bits, width)
    values = np.sum(win**2, axis=1) / cfg.sample_rate
    return DecisionStats(values, scheme_label(cfg.scheme))


def decide(stats: DecisionStats, scheme, threshold: float = 0.0) -> np.ndarray:
    """Slice statistics into bits.

    Sign rule for PPM, BiPhase, PSM and antipodal BPAM; threshold rule for
    OOK and asymmetric BPAM.  A statistic exactly at the boundary decides 0.
    """
    if not np.isfinite(threshold):
        raise ValueError("threshold must be finite")
    values = stats.values
    if isinstance(scheme, (Ppm, BiPhase, Psm)):
        return (values > 0.0).astype(np.int64)
    if isinstance(scheme, Bpam):
        if scheme.antipodal:
            return (values > 0.0).astype(np.int64)
        if scheme.one_amplitude > scheme.zero_amplitude:
            return (values > threshold).astype(np.int64)
        return (values < threshold).astype(np.int64)
    if isinstance(scheme, Ook):
        return (values > threshold).astype(np.int64)
    raise InvalidConfig(f"unknown scheme {scheme!r}")


def _class_means(values: np.ndarray, pilot_bits: np.ndarray) -> tuple[float, float]:
    zeros = values[pilot_bits == 0]
    ones = values[pilot_bits == 1]
    if len(zeros) == 0 or len(ones) == 0:
        raise PilotMissingSymbol("pilot bits must contain both symbols")
    return float(np.mean(zeros)), float(np.mean(ones))


def midpoint_threshold(stats: DecisionStats, pilot_bits) -> float:
    """Midpoint of the mean pilot statistics of the two symbol classes."""
    pilot_bits = np.asarray(pilot_bits, dtype=np.int64)
    m0, m1 = _class_means(stats.values[: len(pilot_bits)], pilot_bits)
    return 0.5 * (m0 + m1)


def train_ook_threshold(
    rx: SampledWaveform, cfg: LinkConfig, sync: SyncState, pilot_bits
) -> float:
    """Data-aided OOK slicer threshold from pilot chip energies."""
    pilot_bits = np.asarray(pilot_bits, dtype=np.int64)
    stats = energy_detect(rx, cfg, sync, len(pilot_bits))
    return midpoint_threshold(stats, pilot_bits)


def estimate_distance(sync: SyncState, true_emission_time: float) -> float:
    """Time-of-arrival range: c * (sync offset - emission time)."""
    if not sync.locked:
        raise NotSynchronized("distance estimation requires a locked SyncState")
    return SPEED_OF_LIGHT * (sync.offset - true_emission_time)


def write_decision_stats_csv(path, stats: DecisionStats, decided_bits) -> None:
    """Dump per-bit statistics as (bit_index, statistic, decided_bit) rows."""
    decided_bits = np.asarray(decided_bits, dtype=np.int64)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["bit_index", "statistic", "decided_bit"])
        for i, (v, b) in enumerate(zip(stats.values, decided_bits)):
            writer.writerow([i, f"{v:.9g}", int(b)])
