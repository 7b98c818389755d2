"""Monte-Carlo BER curves against the closed-form references.

Antipodal signalling (BiPhase) should follow Q(sqrt(2 Eb/N0)); binary PPM
with the shift at the pulse autocorrelation zero should follow Q(sqrt(Eb/N0));
non-coherent OOK pays an extra penalty that grows with the energy window.

Usage: python demos/awgn_ber_vs_theory.py
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from iruwb import (
    AwgnChannel,
    BiPhase,
    ExperimentConfig,
    FrameTiming,
    LinkConfig,
    Ook,
    Ppm,
    PulseShape,
    analytic_ber,
    generate_th_code,
    sweep,
)

FS = 50e9
TAU = 0.2e-9
OUT = os.path.join(os.path.dirname(__file__), "output")
BITS = 30_000  # demo scale; push to 2e5+ for publication-quality points


def link_for(scheme, ppm_shift):
    timing = FrameTiming(2e-9, 8, ppm_shift)
    code = generate_th_code(seed=7, period=64, chips_per_frame=8)
    return LinkConfig(scheme=scheme, timing=timing, code=code,
                      pulse=PulseShape(1, TAU), sample_rate=FS)


def main():
    os.makedirs(OUT, exist_ok=True)
    runs = [
        ("biphase", BiPhase(), 0.4e-9, (0.0, 2.0, 4.0, 6.0, 8.0)),
        ("ppm", Ppm(TAU), TAU, (0.0, 2.0, 4.0, 6.0, 8.0, 10.0)),
        ("ook", Ook(), 0.4e-9, (6.0, 9.0, 12.0, 15.0, 18.0)),
    ]
    fig, ax = plt.subplots(figsize=(7, 5))
    for name, scheme, shift, grid in runs:
        cfg = ExperimentConfig(
            link=link_for(scheme, shift), channel=AwgnChannel(), ebn0_grid=grid,
            bits_per_point=BITS, master_seed=12,
        )
        curve = sweep(cfg, threads=2)
        print(f"{name:8}", " ".join(f"{p.ebn0_db:g}dB:{p.ber:.2e}" for p in curve.points))
        ax.semilogy(curve.ebn0_db, np.maximum(curve.ber, 1e-6), "o",
                    label=f"{name} (simulated)")

    x = np.linspace(0, 18, 200)
    ax.semilogy(x, [analytic_ber("antipodal", v) for v in x], "-", lw=1,
                label="Q(sqrt(2r)) antipodal")
    ax.semilogy(x, [analytic_ber("orthogonal", v) for v in x], "--", lw=1,
                label="Q(sqrt(r)) orthogonal")
    ax.semilogy(x, [analytic_ber("ook_noncoherent", v) for v in x], ":", lw=1,
                label="exp(-r/4)/2 noncoherent OOK")
    ax.set_ylim(1e-5, 1)
    ax.set_xlabel("Eb/N0 (dB)")
    ax.set_ylabel("BER")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    path = os.path.join(OUT, "awgn_ber_vs_theory.png")
    fig.savefig(path, dpi=150)
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
