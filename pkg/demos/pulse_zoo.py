"""Gaussian monocycle gallery: shapes, spectra, and UWB qualification.

Renders the three pulse orders, checks the sub-nanosecond duration regime,
and measures the -10 dB band of each against the UWB definition.

Usage: python demos/pulse_zoo.py
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from iruwb import PulseShape, is_uwb, measure_band, render_pulse, ten_db_duration

FS = 50e9
TAU = 0.2e-9
OUT = os.path.join(os.path.dirname(__file__), "output")


def main():
    os.makedirs(OUT, exist_ok=True)
    fig, (ax_t, ax_f) = plt.subplots(1, 2, figsize=(11, 4))

    print(f"sample rate {FS/1e9:.0f} GHz, width parameter tau = {TAU*1e9:.2f} ns")
    print(f"{'order':>5} {'10dB duration':>14} {'f_low':>9} {'f_high':>9} "
          f"{'frac. bw':>9} {'UWB?':>5}")
    for order in (1, 2, 3):
        shape = PulseShape(order=order, tau=TAU)
        w = render_pulse(shape, FS)
        band = measure_band(w)
        dur = ten_db_duration(w)
        print(f"{order:>5} {dur*1e9:>11.2f} ns {band.f_low/1e9:>7.2f} G "
              f"{band.f_high/1e9:>7.2f} G {band.fractional_bandwidth:>9.3f} "
              f"{str(is_uwb(band)):>5}")

        ax_t.plot(w.times * 1e9, w.samples, label=f"order {order}")
        nfft = 8192
        mag = np.abs(np.fft.rfft(w.samples, nfft))
        freqs = np.fft.rfftfreq(nfft, 1 / FS)
        ax_f.plot(freqs / 1e9, 20 * np.log10(mag / mag.max() + 1e-12),
                  label=f"order {order}")

    ax_t.set_xlabel("time (ns)")
    ax_t.set_ylabel("amplitude")
    ax_t.set_title("monocycle shapes")
    ax_t.legend()
    ax_f.set_xlim(0, 6)
    ax_f.set_ylim(-40, 2)
    ax_f.axhline(-10, color="k", lw=0.5, ls="--")
    ax_f.set_xlabel("frequency (GHz)")
    ax_f.set_ylabel("relative magnitude (dB)")
    ax_f.set_title("spectra with the -10 dB level")
    ax_f.legend()
    fig.tight_layout()
    path = os.path.join(OUT, "pulse_zoo.png")
    fig.savefig(path, dpi=150)
    print(f"\nwrote {path}")


if __name__ == "__main__":
    main()
