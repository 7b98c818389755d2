"""Mid-stream link reconfiguration with both ends switching together.

Three exercises of the same machinery:
  1. data-rate switch (new chip duration) on a clean channel,
  2. radio-range switch (tx gain halved) under noise, shifting the
     post-switch operating point by 6.02 dB,
  3. hopping-code switch that shakes off an interferer sitting on the
     old code.

Usage: python demos/reconfiguration.py
"""

import numpy as np

from iruwb import (
    AwgnChannel,
    BiPhase,
    ExperimentConfig,
    FrameTiming,
    LinkConfig,
    LinkPatch,
    PerfectChannel,
    PulseShape,
    Reconfigure,
    TwoUser,
    analytic_ber,
    generate_th_code,
    run_reconfiguration_scenario,
)

FS = 50e9


def make_link(code=None):
    timing = FrameTiming(2e-9, 8, 0.4e-9)
    code = code or generate_th_code(7, 4096, 8)
    return LinkConfig(scheme=BiPhase(), timing=timing, code=code,
                      pulse=PulseShape(1, 0.2e-9), sample_rate=FS)


def show(title, reports):
    print(title)
    for rep in reports:
        print(f"  Eb/N0 {rep.ebn0_db:g} dB, boundary errors {rep.boundary_errors}")
        for seg in rep.segments:
            extra = ""
            if seg.collision_rate is not None:
                extra = f", collision rate {seg.collision_rate:.3f}"
            print(f"    {seg.label:<11} ber {seg.ber:.3e} over {seg.trials} bits{extra}")


def main():
    link = make_link()

    cfg = ExperimentConfig(
        link=link, channel=PerfectChannel(), ebn0_grid=(0.0,),
        bits_per_point=4000, master_seed=5,
        scenario=Reconfigure(LinkPatch(timing=FrameTiming(3e-9, 8, 0.4e-9)),
                             switch_frame=2000),
    )
    show("1) noiseless data-rate switch (chip 2 ns -> 3 ns):",
         run_reconfiguration_scenario(cfg))

    cfg = ExperimentConfig(
        link=link, channel=AwgnChannel(), ebn0_grid=(8.0,),
        bits_per_point=20000, master_seed=5,
        scenario=Reconfigure(LinkPatch(tx_gain=0.5), switch_frame=10000),
    )
    reports = run_reconfiguration_scenario(cfg)
    show("2) tx gain halved at 8 dB:", reports)
    print(f"    analytic at 8 dB:        {analytic_ber('antipodal', 8.0):.3e}")
    print(f"    analytic at 8 - 6.02 dB: "
          f"{analytic_ber('antipodal', 8.0 - 20*np.log10(2)):.3e}")

    old_code = generate_th_code(7, 4096, 8)
    new_code = generate_th_code(99, 4096, 8)
    cfg = ExperimentConfig(
        link=make_link(old_code), channel=PerfectChannel(), ebn0_grid=(0.0,),
        bits_per_point=20000, master_seed=5,
        scenario=Reconfigure(LinkPatch(code=new_code), switch_frame=10000,
                             interferer=TwoUser(old_code, 0.0, 1.0)),
    )
    show("3) hopping-code switch with an interferer on the old code:",
         run_reconfiguration_scenario(cfg))


if __name__ == "__main__":
    main()
