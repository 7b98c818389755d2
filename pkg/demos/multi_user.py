"""Multi-user behaviour of time-hopping codes.

Collision probability between independent codes follows 1/(chips per
frame); a chip-disjoint neighbour leaves the victim link untouched while a
same-code jammer wrecks it.

Usage: python demos/multi_user.py
"""

import numpy as np

from iruwb import (
    AwgnChannel,
    BiPhase,
    ExperimentConfig,
    FrameTiming,
    LinkConfig,
    PulseShape,
    ThCode,
    TwoUser,
    collision_count,
    generate_th_code,
    run_ber_point,
)

FS = 50e9


def main():
    print("empirical collision rate vs 1/Nc (100000 frames):")
    for nc in (2, 4, 8, 16):
        a = generate_th_code(seed=1, period=100_000, chips_per_frame=nc)
        b = generate_th_code(seed=2, period=100_000, chips_per_frame=nc)
        rate = collision_count(a, b, 100_000) / 100_000
        print(f"  Nc={nc:>2}: measured {rate:.4f}  oracle {1/nc:.4f}")

    timing = FrameTiming(2e-9, 8, 0.4e-9)
    code = generate_th_code(seed=7, period=64, chips_per_frame=8)
    link = LinkConfig(scheme=BiPhase(), timing=timing, code=code,
                      pulse=PulseShape(1, 0.2e-9), sample_rate=FS)
    disjoint = ThCode(tuple((v + 1) % 8 for v in code.values), 8)

    def run(scenario=None):
        kwargs = {"scenario": scenario} if scenario else {}
        cfg = ExperimentConfig(link=link, channel=AwgnChannel(), ebn0_grid=(6.0,),
                               bits_per_point=20000, master_seed=3,
                               sync_window=64 / FS, **kwargs)
        return run_ber_point(cfg, 6.0)

    print("\nuser-1 BER at 6 dB under interference:")
    print(f"  alone:              {run().ber:.4e}")
    print(f"  disjoint neighbour: {run(TwoUser(disjoint, 0.0, 1.0)).ber:.4e}")
    print(f"  same-code jammer:   {run(TwoUser(code, 0.0, 1.0)).ber:.4e}")


if __name__ == "__main__":
    main()
