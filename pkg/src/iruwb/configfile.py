"""Plain key-value experiment configuration files.

Format: one ``key = value`` pair per line, ``#`` starts a comment, blank
lines ignored.  Keys mirror the experiment configuration field for field;
an unknown key is a hard error.  Lists (the Eb/N0 grid, explicit hopping
codes) are comma separated.

Minimal example::

    scheme = biphase
    pulse.tau = 2e-10
    timing.chip_duration = 2e-9
    timing.chips_per_frame = 8
    channel = awgn
    ebn0_grid = 0, 2, 4, 6, 8
    bits_per_point = 200000
    master_seed = 1
"""

from __future__ import annotations

from dataclasses import replace

from .channel import AwgnChannel, CHANNEL_PRESETS, MultipathSV, PerfectChannel
from .harness import ExperimentConfig, Reconfigure, SingleUser, TwoUser
from .timehopping import FrameTiming, ThCode, generate_th_code
from .transmitter import BiPhase, Bpam, LinkConfig, LinkPatch, Ook, Ppm, Psm
from .waveform import PulseShape


class ConfigError(ValueError):
    pass


def _parse_float(s):
    return float(s)


def _parse_int(s):
    v = int(s)
    return v


def _parse_str(s):
    return s


def _parse_float_list(s):
    return tuple(float(x) for x in s.split(",") if x.strip() != "")


def _parse_int_list(s):
    return tuple(int(x) for x in s.split(",") if x.strip() != "")


# key -> (parser, description)
KNOWN_KEYS = {
    "scheme": (_parse_str, "ppm | ook | bpam | biphase | psm"),
    "ppm.shift": (_parse_float, "PPM time shift in seconds (default timing.ppm_shift)"),
    "ook.amplitude": (_parse_float, "OOK one-symbol amplitude"),
    "bpam.one_amplitude": (_parse_float, "BPAM one-symbol amplitude"),
    "bpam.zero_amplitude": (_parse_float, "BPAM zero-symbol amplitude"),
    "biphase.amplitude": (_parse_float, "BiPhase amplitude"),
    "psm.order_zero": (_parse_int, "monocycle order for the zero symbol"),
    "psm.order_one": (_parse_int, "monocycle order for the one symbol"),
    "pulse.order": (_parse_int, "monocycle order 1..3"),
    "pulse.tau": (_parse_float, "pulse width parameter in seconds"),
    "pulse.amplitude": (_parse_float, "pulse peak amplitude"),
    "timing.chip_duration": (_parse_float, "chip duration in seconds"),
    "timing.chips_per_frame": (_parse_int, "chips per frame"),
    "timing.ppm_shift": (_parse_float, "PPM shift in seconds (default 2*tau)"),
    "code.seed": (_parse_int, "hopping code generator seed"),
    "code.period": (_parse_int, "hopping code period in frames"),
    "code.values": (_parse_int_list, "explicit chip indices (overrides seed/period)"),
    "tx_gain": (_parse_float, "amplitude scale standing for radio range"),
    "sample_rate": (_parse_float, "simulation sample rate in Hz"),
    "channel": (_parse_str, "perfect | awgn | sv"),
    "channel.delay": (_parse_float, "perfect-channel delay in seconds"),
    "channel.attenuation": (_parse_float, "perfect-channel amplitude scale"),
    "sv.preset": (_parse_str, "named multipath preset (residential_los)"),
    "sv.cluster_rate": (_parse_float, "cluster arrival rate in 1/s"),
    "sv.ray_rate": (_parse_float, "ray arrival rate in 1/s"),
    "sv.cluster_decay": (_parse_float, "cluster power decay in s"),
    "sv.ray_decay": (_parse_float, "ray power decay in s"),
    "sv.max_delay_spread": (_parse_float, "realization truncation in s"),
    "ebn0_grid": (_parse_float_list, "Eb/N0 grid in dB"),
    "bits_per_point": (_parse_int, "payload bits per grid point"),
    "master_seed": (_parse_int, "master seed of the experiment"),
    "scenario": (_parse_str, "single_user | two_user | reconfigure"),
    "two_user.code_seed": (_parse_int, "second-user code seed"),
    "two_user.code_values": (_parse_int_list, "second-user explicit code"),
    "two_user.delay": (_parse_float, "second-user delay in seconds"),
    "two_user.gain": (_parse_float, "second-user amplitude gain"),
    "reconfigure.switch_frame": (_parse_int, "frame index of the switch"),
    "reconfigure.tx_gain": (_parse_float, "patched tx gain"),
    "reconfigure.tau": (_parse_float, "patched pulse tau in seconds"),
    "reconfigure.chip_duration": (_parse_float, "patched chip duration in seconds"),
    "reconfigure.chips_per_frame": (_parse_int, "patched chips per frame"),
    "reconfigure.code_seed": (_parse_int, "patched hopping code seed"),
    "sync_window": (_parse_float, "sync search window in seconds"),
    "psd_frames": (_parse_int, "frames simulated by the psd command"),
    "psd_segment_frames": (_parse_int, "frames per averaging segment"),
}

REQUIRED_KEYS = (
    "scheme",
    "timing.chip_duration",
    "timing.chips_per_frame",
    "channel",
    "ebn0_grid",
    "bits_per_point",
)


def parse_pairs(text: str) -> dict:
    """Raw key/value extraction with unknown-key rejection."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        parser, _ = KNOWN_KEYS[key]
        try:
            values[key] = parser(val)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from exc
    return values


def _build_scheme(v: dict, timing: FrameTiming):
    name = v["scheme"]
    if name == "ppm":
        shift = v.get("ppm.shift", timing.ppm_shift)
        if "ppm.shift" in v and v["ppm.shift"] != timing.ppm_shift:
            raise ConfigError("ppm.shift must match timing.ppm_shift")
        return Ppm(shift)
    if name == "ook":
        return Ook(v.get("ook.amplitude", 1.0))
    if name == "bpam":
        return Bpam(v.get("bpam.one_amplitude", 1.0), v.get("bpam.zero_amplitude", 0.5))
    if name == "biphase":
        return BiPhase(v.get("biphase.amplitude", 1.0))
    if name == "psm":
        tau = v.get("pulse.tau", 0.2e-9)
        amp = v.get("pulse.amplitude", 1.0)
        return Psm(
            PulseShape(v.get("psm.order_zero", 1), tau, amp),
            PulseShape(v.get("psm.order_one", 2), tau, amp),
        )
    raise ConfigError(f"unknown scheme {name!r}")


def _build_channel(v: dict):
    name = v["channel"]
    if name == "perfect":
        return PerfectChannel(v.get("channel.delay", 0.0), v.get("channel.attenuation", 1.0))
    if name == "awgn":
        return AwgnChannel()
    if name == "sv":
        if "sv.preset" in v:
            preset_name = v["sv.preset"]
            if preset_name not in CHANNEL_PRESETS:
                raise ConfigError(
                    f"unknown sv preset {preset_name!r}; known: {sorted(CHANNEL_PRESETS)}"
                )
            model = CHANNEL_PRESETS[preset_name]()
            overrides = {}
            for key, attr in (
                ("sv.cluster_rate", "cluster_rate"),
                ("sv.ray_rate", "ray_rate"),
                ("sv.cluster_decay", "cluster_decay"),
                ("sv.ray_decay", "ray_decay"),
                ("sv.max_delay_spread", "max_delay_spread"),
            ):
                if key in v:
                    overrides[attr] = v[key]
            return replace(model, **overrides) if overrides else model
        try:
            return MultipathSV(
                cluster_rate=v["sv.cluster_rate"],
                ray_rate=v["sv.ray_rate"],
                cluster_decay=v["sv.cluster_decay"],
                ray_decay=v["sv.ray_decay"],
                max_delay_spread=v.get("sv.max_delay_spread", 60e-9),
            )
        except KeyError as exc:
            raise ConfigError(f"sv channel needs {exc.args[0]!r} or sv.preset") from exc
    raise ConfigError(f"unknown channel {name!r}")


def _build_code(v: dict, chips_per_frame: int) -> ThCode:
    if "code.values" in v:
        return ThCode(v["code.values"], chips_per_frame, seed=v.get("code.seed"))
    return generate_th_code(v.get("code.seed", 1), v.get("code.period", 64), chips_per_frame)


def _build_scenario(v: dict, link: LinkConfig):
    name = v.get("scenario", "single_user")
    if name == "single_user":
        return SingleUser()
    if name in ("two_user", "reconfigure"):
        interferer = None
        if "two_user.code_values" in v:
            code2 = ThCode(
                v["two_user.code_values"],
                link.timing.chips_per_frame,
                seed=v.get("two_user.code_seed"),
            )
            interferer = TwoUser(code2, v.get("two_user.delay", 0.0), v.get("two_user.gain", 1.0))
        elif "two_user.code_seed" in v:
            code2 = generate_th_code(
                v["two_user.code_seed"], link.code.period, link.timing.chips_per_frame
            )
            interferer = TwoUser(code2, v.get("two_user.delay", 0.0), v.get("two_user.gain", 1.0))
        if name == "two_user":
            if interferer is None:
                raise ConfigError("two_user scenario needs two_user.code_seed or .code_values")
            return interferer
        if "reconfigure.switch_frame" not in v:
            raise ConfigError("reconfigure scenario needs reconfigure.switch_frame")
        timing_patch = None
        if "reconfigure.chip_duration" in v or "reconfigure.chips_per_frame" in v:
            timing_patch = FrameTiming(
                v.get("reconfigure.chip_duration", link.timing.chip_duration),
                v.get("reconfigure.chips_per_frame", link.timing.chips_per_frame),
                link.timing.ppm_shift,
            )
        code_patch = None
        if "reconfigure.code_seed" in v:
            code_patch = generate_th_code(
                v["reconfigure.code_seed"], link.code.period, link.timing.chips_per_frame
            )
        patch = LinkPatch(
            timing=timing_patch,
            pulse_tau=v.get("reconfigure.tau"),
            tx_gain=v.get("reconfigure.tx_gain"),
            code=code_patch,
        )
        return Reconfigure(patch, v["reconfigure.switch_frame"], interferer=interferer)
    raise ConfigError(f"unknown scenario {name!r}")


def parse_config(text: str) -> ExperimentConfig:
    v = parse_pairs(text)
    missing = [k for k in REQUIRED_KEYS if k not in v]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")

    pulse = PulseShape(
        order=v.get("pulse.order", 1),
        tau=v.get("pulse.tau", 0.2e-9),
        amplitude=v.get("pulse.amplitude", 1.0),
    )
    timing = FrameTiming(
        chip_duration=v["timing.chip_duration"],
        chips_per_frame=v["timing.chips_per_frame"],
        ppm_shift=v.get("timing.ppm_shift", 2.0 * pulse.tau),
    )
    code = _build_code(v, timing.chips_per_frame)
    try:
        link = LinkConfig(
            scheme=_build_scheme(v, timing),
            timing=timing,
            code=code,
            pulse=pulse,
            tx_gain=v.get("tx_gain", 1.0),
            sample_rate=v.get("sample_rate", 50e9),
        )
        return ExperimentConfig(
            link=link,
            channel=_build_channel(v),
            ebn0_grid=v["ebn0_grid"],
            bits_per_point=v["bits_per_point"],
            master_seed=v.get("master_seed", 1),
            scenario=_build_scenario(v, link),
            sync_window=v.get("sync_window"),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def psd_options(text: str) -> tuple[int, int]:
    """(frames, segment_frames) for the psd command."""
    v = parse_pairs(text)
    return v.get("psd_frames", 4096), v.get("psd_segment_frames", 16)


def load_config(path) -> ExperimentConfig:
    with open(path) as f:
        return parse_config(f.read())


def _scheme_lines(scheme) -> list[str]:
    if isinstance(scheme, Ppm):
        return ["scheme = ppm", f"ppm.shift = {scheme.shift!r}"]
    if isinstance(scheme, Ook):
        return ["scheme = ook", f"ook.amplitude = {scheme.on_amplitude!r}"]
    if isinstance(scheme, Bpam):
        return [
            "scheme = bpam",
            f"bpam.one_amplitude = {scheme.one_amplitude!r}",
            f"bpam.zero_amplitude = {scheme.zero_amplitude!r}",
        ]
    if isinstance(scheme, BiPhase):
        return ["scheme = biphase", f"biphase.amplitude = {scheme.amplitude!r}"]
    if isinstance(scheme, Psm):
        return [
            "scheme = psm",
            f"psm.order_zero = {scheme.shape_zero.order}",
            f"psm.order_one = {scheme.shape_one.order}",
        ]
    raise ConfigError(f"unknown scheme {scheme!r}")


def format_config(cfg: ExperimentConfig) -> str:
    """Serialize a single-user or two-user experiment so that
    ``parse_config(format_config(cfg))`` reproduces it."""
    link = cfg.link
    lines = _scheme_lines(link.scheme)
    lines += [
        f"pulse.order = {link.pulse.order}",
        f"pulse.tau = {link.pulse.tau!r}",
        f"pulse.amplitude = {link.pulse.amplitude!r}",
        f"timing.chip_duration = {link.timing.chip_duration!r}",
        f"timing.chips_per_frame = {link.timing.chips_per_frame}",
        f"timing.ppm_shift = {link.timing.ppm_shift!r}",
        "code.values = " + ",".join(str(x) for x in link.code.values),
    ]
    if link.code.seed is not None:
        lines.append(f"code.seed = {link.code.seed}")
    lines += [
        f"tx_gain = {link.tx_gain!r}",
        f"sample_rate = {link.sample_rate!r}",
    ]
    ch = cfg.channel
    if isinstance(ch, PerfectChannel):
        lines += [
            "channel = perfect",
            f"channel.delay = {ch.delay!r}",
            f"channel.attenuation = {ch.attenuation!r}",
        ]
    elif isinstance(ch, AwgnChannel):
        lines.append("channel = awgn")
    elif isinstance(ch, MultipathSV):
        lines += [
            "channel = sv",
            f"sv.cluster_rate = {ch.cluster_rate!r}",
            f"sv.ray_rate = {ch.ray_rate!r}",
            f"sv.cluster_decay = {ch.cluster_decay!r}",
            f"sv.ray_decay = {ch.ray_decay!r}",
            f"sv.max_delay_spread = {ch.max_delay_spread!r}",
        ]
    else:
        raise ConfigError(f"unknown channel {ch!r}")
    lines += [
        "ebn0_grid = " + ",".join(repr(x) for x in cfg.ebn0_grid),
        f"bits_per_point = {cfg.bits_per_point}",
        f"master_seed = {cfg.master_seed}",
    ]
    if isinstance(cfg.scenario, TwoUser):
        lines += [
            "scenario = two_user",
            "two_user.code_values = " + ",".join(str(x) for x in cfg.scenario.code.values),
            f"two_user.delay = {cfg.scenario.delay!r}",
            f"two_user.gain = {cfg.scenario.gain!r}",
        ]
        if cfg.scenario.code.seed is not None:
            lines.append(f"two_user.code_seed = {cfg.scenario.code.seed}")
    if cfg.sync_window is not None:
        lines.append(f"sync_window = {cfg.sync_window!r}")
    return "\n".join(lines) + "\n"
