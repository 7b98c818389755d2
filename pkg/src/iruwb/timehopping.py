"""Time-hopping codes, frame/chip timing, and pulse placement."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class InvalidParameter(ValueError):
    pass


class MismatchedNc(ValueError):
    """Codes being compared do not share the same number of chips per frame."""


@dataclass(frozen=True)
class FrameTiming:
    """Frame/chip grid.  A frame of duration chips_per_frame * chip_duration
    holds one pulse, placed on the chip selected by the hopping code.

    ``ppm_shift`` is the extra delay applied to a one bit under pulse
    position modulation; it must leave the pulse inside its chip (checked
    against the pulse support by the link configuration).
    """

    chip_duration: float
    chips_per_frame: int
    ppm_shift: float

    def __post_init__(self):
        if not self.chip_duration > 0:
            raise InvalidParameter(f"chip_duration must be > 0, got {self.chip_duration}")
        if self.chips_per_frame < 1:
            raise InvalidParameter(f"chips_per_frame must be >= 1, got {self.chips_per_frame}")
        if not 0 < self.ppm_shift <= self.chip_duration:
            raise InvalidParameter(
                f"ppm_shift must be in (0, chip_duration], got {self.ppm_shift}"
            )

    @property
    def frame_duration(self) -> float:
        return self.chips_per_frame * self.chip_duration


@dataclass(frozen=True)
class ThCode:
    """Periodic chip-index sequence assigned to one user."""

    values: tuple
    chips_per_frame: int
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if len(self.values) < 1:
            raise InvalidParameter("code must contain at least one element")
        if any(not 0 <= v < self.chips_per_frame for v in self.values):
            raise InvalidParameter(
                f"code elements must lie in [0, {self.chips_per_frame})"
            )

    @property
    def period(self) -> int:
        return len(self.values)

    def chips(self, n_frames: int) -> np.ndarray:
        """Chip index for frames 0..n_frames-1."""
        idx = np.arange(n_frames) % self.period
        return np.asarray(self.values, dtype=np.int64)[idx]


def generate_th_code(seed: int, period: int, chips_per_frame: int) -> ThCode:
    """Seeded uniform i.i.d. chip indices; identical output for identical inputs."""
    if period < 1 or chips_per_frame < 1:
        raise InvalidParameter(
            f"period and chips_per_frame must be >= 1, got {period}, {chips_per_frame}"
        )
    rng = np.random.default_rng(seed)
    values = rng.integers(0, chips_per_frame, size=period)
    return ThCode(tuple(int(v) for v in values), chips_per_frame, seed=seed)


def pulse_instant(
    frame_index: int, code: ThCode, timing: FrameTiming, ppm_offset: float = 0.0
) -> float:
    """Start time of the pulse emitted in the given frame."""
    if frame_index < 0:
        raise InvalidParameter("frame_index must be >= 0")
    chip = code.values[frame_index % code.period]
    return frame_index * timing.frame_duration + chip * timing.chip_duration + ppm_offset


def pulse_start_times(
    n_frames: int, code: ThCode, timing: FrameTiming, ppm_offsets: np.ndarray | None = None
) -> np.ndarray:
    """Vectorized pulse_instant for frames 0..n_frames-1.

    The transmitter and the receivers both derive sample indices from this
    function so that placement rounding agrees on both ends.
    """
    frames = np.arange(n_frames, dtype=np.float64)
    t = frames * timing.frame_duration + code.chips(n_frames) * timing.chip_duration
    if ppm_offsets is not None:
        t = t + ppm_offsets
    return t


def collision_count(a: ThCode, b: ThCode, frames: int) -> int:
    """Number of frames in [0, frames) where both codes select the same chip."""
    if a.chips_per_frame != b.chips_per_frame:
        raise MismatchedNc(
            f"codes use {a.chips_per_frame} and {b.chips_per_frame} chips per frame"
        )
    if frames < 1:
        raise InvalidParameter("frames must be >= 1")
    return int(np.count_nonzero(a.chips(frames) == b.chips(frames)))
