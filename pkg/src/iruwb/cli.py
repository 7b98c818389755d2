"""Command line front end.

Subcommands: ``sweep`` (BER versus Eb/N0), ``psd`` (spectral density of the
configured pulse train, hopped and fixed), ``scenario`` (mid-stream
reconfiguration report), ``validate-config``.

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .analysis import line_suppression, psd, write_psd_csv
from .configfile import ConfigError, load_config, psd_options
from .harness import (
    Reconfigure,
    pulse_train,
    run_reconfiguration_scenario,
    sweep,
    write_ber_csv,
    write_scenario_csv,
)
from .timehopping import ThCode
from .transmitter import InvalidConfig

GNUPLOT_TEMPLATE = """\
set datafile separator ','
set logscale y
set xlabel 'Eb/N0 (dB)'
set ylabel 'BER'
set grid
plot 'ber.csv' using 3:6 skip 1 with linespoints title 'simulated'
"""


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="experiment config file")
    parser.add_argument("--seed", type=int, default=None, help="override master_seed")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--threads", type=int, default=1, help="worker threads")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iruwb", description="Impulse-radio UWB link simulator"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a BER versus Eb/N0 sweep")
    _add_common(p)
    p.add_argument("--gnuplot", action="store_true", help="also write a gnuplot script")

    p = sub.add_parser("psd", help="estimate the transmit spectrum with and without hopping")
    _add_common(p)

    p = sub.add_parser("scenario", help="run a mid-stream reconfiguration scenario")
    _add_common(p)

    p = sub.add_parser("validate-config", help="parse and validate a config file")
    p.add_argument("--config", required=True)
    return parser


def _load(args):
    cfg = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, master_seed=args.seed)
    return cfg


def _cmd_sweep(args) -> int:
    cfg = _load(args)
    curve = sweep(cfg, threads=max(args.threads, 1))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_ber_csv(out / "ber.csv", curve)
    if args.gnuplot:
        (out / "ber.gp").write_text(GNUPLOT_TEMPLATE)
    print(f"# scheme={curve.label} channel={curve.channel} pulse=monocycle-"
          f"{cfg.link.pulse.order} tau={cfg.link.pulse.tau:g}s")
    print("ebn0_db     ber         ci95              sync_failures")
    for pt in curve.points:
        print(
            f"{pt.ebn0_db:7.2f}  {pt.ber:.4e}  [{pt.ci95[0]:.3e}, {pt.ci95[1]:.3e}]"
            f"  {pt.sync_failures}"
        )
    print(f"wrote {out / 'ber.csv'}")
    return 0


def _cmd_psd(args) -> int:
    cfg = _load(args)
    with open(args.config) as f:
        frames, segment_frames = psd_options(f.read())
    link = cfg.link
    segment = segment_frames * link.frame_samples
    hopped = pulse_train(link.pulse, link.timing, link.code, frames, link.sample_rate)
    fixed_code = ThCode((0,), link.timing.chips_per_frame)
    fixed = pulse_train(link.pulse, link.timing, fixed_code, frames, link.sample_rate)
    s_hop = psd(hopped, segment)
    s_fix = psd(fixed, segment)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_psd_csv(out / "psd.csv", s_hop)
    write_psd_csv(out / "psd_no_th.csv", s_fix)
    print(f"peak/mean without hopping: {s_fix.peak_to_mean_db():.2f} dB")
    print(f"peak/mean with hopping:    {s_hop.peak_to_mean_db():.2f} dB")
    print(f"line suppression:          {line_suppression(s_fix, s_hop):.2f} dB")
    print(f"wrote {out / 'psd.csv'} and {out / 'psd_no_th.csv'}")
    return 0


def _cmd_scenario(args) -> int:
    cfg = _load(args)
    if not isinstance(cfg.scenario, Reconfigure):
        raise ConfigError("the scenario command needs scenario = reconfigure")
    reports = run_reconfiguration_scenario(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_scenario_csv(out / "scenario.csv", reports)
    for rep in reports:
        print(f"Eb/N0 {rep.ebn0_db:.2f} dB  boundary errors: {rep.boundary_errors}")
        for seg in rep.segments:
            extra = ""
            if seg.collision_rate is not None:
                extra = f"  collision_rate={seg.collision_rate:.4f}"
            print(
                f"  {seg.label:<12} bits={seg.trials}  ber={seg.ber:.4e}  "
                f"ci95=[{seg.ci95[0]:.3e}, {seg.ci95[1]:.3e}]{extra}"
            )
    print(f"wrote {out / 'scenario.csv'}")
    return 0


def _cmd_validate(args) -> int:
    cfg = load_config(args.config)
    link = cfg.link
    print("config OK")
    print(f"  scheme: {link.scheme}")
    print(f"  frame: {link.timing.chips_per_frame} chips x "
          f"{link.timing.chip_duration:g} s at {link.sample_rate:g} Hz")
    print(f"  channel: {cfg.channel}")
    print(f"  grid: {cfg.ebn0_grid} dB, {cfg.bits_per_point} bits/point")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "sweep": _cmd_sweep,
        "psd": _cmd_psd,
        "scenario": _cmd_scenario,
        "validate-config": _cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, InvalidConfig, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failures map to a dedicated exit code
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
