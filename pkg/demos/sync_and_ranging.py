"""Synchronization acquisition and time-of-arrival ranging.

Shows exact recovery of inserted delays from the preamble matched filter,
the distance estimates they imply, the lock metric's margin at low SNR,
and its refusal to lock on pure noise.

Usage: python demos/sync_and_ranging.py
"""

import numpy as np

from iruwb import (
    BiPhase,
    FrameTiming,
    LinkConfig,
    PerfectChannel,
    PulseShape,
    SampledWaveform,
    SyncNotFound,
    acquire_sync,
    apply_awgn,
    apply_perfect,
    estimate_distance,
    generate_th_code,
    modulate,
)

FS = 50e9
PREAMBLE = np.tile([0, 1], 16)


def main():
    timing = FrameTiming(2e-9, 8, 0.4e-9)
    code = generate_th_code(7, 64, 8)
    link = LinkConfig(scheme=BiPhase(), timing=timing, code=code,
                      pulse=PulseShape(1, 0.2e-9), sample_rate=FS)
    tx = modulate(PREAMBLE, link)

    print("noiseless delay recovery and ranging:")
    for delay_samples in (0, 17, 123, 190):
        rx = apply_perfect(tx, PerfectChannel(delay=delay_samples / FS))
        rx = SampledWaveform(np.concatenate([rx.samples, np.zeros(4000)]), FS)
        sync = acquire_sync(rx, link, PREAMBLE, 200 / FS)
        dist = estimate_distance(sync, 0.0)
        print(f"  inserted {delay_samples:>3} samples -> estimated "
              f"{sync.offset*FS:>5.0f} samples, range {dist:7.4f} m "
              f"(metric {sync.peak_metric:.1f})")

    print("\nlock margins under noise (delay 50 samples):")
    delayed = apply_perfect(tx, PerfectChannel(delay=50 / FS))
    delayed = SampledWaveform(np.concatenate([delayed.samples, np.zeros(4000)]), FS)
    for ebn0 in (0.0, 5.0, 10.0):
        rx = apply_awgn(delayed, eb=1.0, ebn0_db=ebn0, rng_seed=4)
        sync = acquire_sync(rx, link, PREAMBLE, 200 / FS)
        print(f"  Eb/N0 {ebn0:4.1f} dB -> offset {sync.offset*FS:4.0f} samples, "
              f"metric {sync.peak_metric:5.1f}")

    print("\npure noise fails to lock (50 draws, 0.32 ns verification window,"
          " threshold calibrated for >99% rejection):")
    refusals = 0
    for seed in range(100, 150):
        rng = np.random.default_rng(seed)
        noise = SampledWaveform(rng.normal(0, 1, len(tx.samples) + 2000), FS)
        try:
            acquire_sync(noise, link, PREAMBLE, 16 / FS)
        except SyncNotFound:
            refusals += 1
    print(f"  refused {refusals}/50 locks")


if __name__ == "__main__":
    main()
