"""iruwb: impulse-radio ultra-wideband link-level simulation toolkit."""

from .analysis import (
    GridMismatch,
    SignalTooShort,
    Spectrum,
    TargetNotBracketed,
    analytic_ber,
    gap_at_ber,
    line_suppression,
    psd,
    qfunc,
    wilson_interval,
    write_psd_csv,
)
from .channel import (
    AwgnChannel,
    ChannelRealization,
    DegenerateRealization,
    InvalidDistance,
    MultipathSV,
    PerfectChannel,
    apply_awgn,
    apply_perfect,
    convolve,
    draw_sv_realization,
    noise_sigma,
    path_loss,
    residential_los_preset,
    write_realization_csv,
)
from .harness import (
    BerCurve,
    BerPoint,
    ExperimentConfig,
    Reconfigure,
    ScenarioPointReport,
    SegmentResult,
    SingleUser,
    TwoUser,
    run_ber_point,
    run_reconfiguration_scenario,
    sweep,
    write_ber_csv,
    write_scenario_csv,
)
from .receiver import (
    DecisionStats,
    NotSynchronized,
    PilotMissingSymbol,
    SyncNotFound,
    SyncState,
    acquire_sync,
    correlate_template,
    decide,
    energy_detect,
    estimate_distance,
    train_ook_threshold,
    write_decision_stats_csv,
)
from .timehopping import (
    FrameTiming,
    InvalidParameter,
    MismatchedNc,
    ThCode,
    collision_count,
    generate_th_code,
    pulse_instant,
)
from .transmitter import (
    BiPhase,
    Bpam,
    InvalidConfig,
    LinkConfig,
    LinkPatch,
    ModulationScheme,
    Ook,
    Ppm,
    Psm,
    SampleRateMismatch,
    average_bit_energy,
    modulate,
    psm_cross_correlation,
    reconfigure,
    scheme_label,
    superpose,
)
from .waveform import (
    BandMeasurement,
    PulseShape,
    SampledWaveform,
    UndersampledPulse,
    ZeroEnergyWaveform,
    fractional_bandwidth,
    is_uwb,
    measure_band,
    normalize_energy,
    render_pulse,
    ten_db_duration,
)

__version__ = "0.1.0"
