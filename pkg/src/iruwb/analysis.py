"""Closed-form BER oracles, binomial confidence intervals, curve analysis,
and power spectral density estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import welch
from scipy.special import erfc
from scipy.stats import norm


class TargetNotBracketed(ValueError):
    """A BER curve does not cross the requested target inside its grid."""


class SignalTooShort(ValueError):
    pass


class GridMismatch(ValueError):
    pass


def qfunc(x) -> float:
    """Gaussian tail probability Q(x) via the complementary error function."""
    return 0.5 * erfc(np.asarray(x) / np.sqrt(2.0))


def analytic_ber(kind: str, ebn0_db: float) -> float:
    """Closed-form BER references.

    antipodal: Q(sqrt(2 r)); orthogonal: Q(sqrt(r));
    ook_noncoherent: 0.5 exp(-r/4), with r the linear Eb/N0.
    """
    r = 10.0 ** (np.asarray(ebn0_db, dtype=np.float64) / 10.0)
    if kind == "antipodal":
        return float(qfunc(np.sqrt(2.0 * r)))
    if kind == "orthogonal":
        return float(qfunc(np.sqrt(r)))
    if kind == "ook_noncoherent":
        return float(0.5 * np.exp(-r / 4.0))
    raise ValueError(f"unknown analytic reference {kind!r}")


def wilson_interval(errors: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    With zero observed errors the lower edge is exactly 0, which keeps
    zero-error BER points honest (no fabricated nonzero estimate).
    """
    if trials <= 0:
        raise ValueError("trials must be > 0")
    if not 0 <= errors <= trials:
        raise ValueError("errors must lie in [0, trials]")
    z = norm.ppf(1.0 - (1.0 - confidence) / 2.0)
    p = errors / trials
    denom = 1.0 + z**2 / trials
    centre = (p + z**2 / (2 * trials)) / denom
    half = (z / denom) * np.sqrt(p * (1 - p) / trials + z**2 / (4 * trials**2))
    lo = 0.0 if errors == 0 else float(max(centre - half, 0.0))
    hi = 1.0 if errors == trials else float(min(centre + half, 1.0))
    return lo, hi


def _crossing_db(ebn0_db: np.ndarray, ber: np.ndarray, target: float) -> float:
    """First Eb/N0 where the curve crosses the target, log-linear in BER."""
    for i in range(len(ebn0_db) - 1):
        b0, b1 = ber[i], ber[i + 1]
        if b0 <= 0 or b1 <= 0:
            continue
        if (b0 - target) * (b1 - target) <= 0 and b0 != b1:
            frac = (np.log10(b0) - np.log10(target)) / (np.log10(b0) - np.log10(b1))
            return float(ebn0_db[i] + frac * (ebn0_db[i + 1] - ebn0_db[i]))
    raise TargetNotBracketed(f"curve does not cross BER {target:g} inside its grid")


def gap_at_ber(curve_a, curve_b, target_ber: float) -> float:
    """Horizontal dB distance between two curves at a target BER.

    Positive when curve_a reaches the target at a lower Eb/N0 (curve_a is
    the better one); antisymmetric under swapping the arguments.
    """
    xa = _crossing_db(np.asarray(curve_a.ebn0_db), np.asarray(curve_a.ber), target_ber)
    xb = _crossing_db(np.asarray(curve_b.ebn0_db), np.asarray(curve_b.ber), target_ber)
    return xb - xa


@dataclass(frozen=True, eq=False)
class Spectrum:
    """One-sided power spectral density estimate."""

    freq_hz: np.ndarray
    density: np.ndarray

    def total_power(self) -> float:
        """Integral of the density over frequency."""
        df = self.freq_hz[1] - self.freq_hz[0]
        return float(np.sum(self.density) * df)

    def peak_to_mean_db(self) -> float:
        return float(10.0 * np.log10(np.max(self.density) / np.mean(self.density)))


def psd(signal, segment_len: int) -> Spectrum:
    """Averaged periodogram over half-overlapping rectangular segments.

    Rectangular windows keep the estimate power-preserving: the integral of
    the density matches the mean square of the signal.
    """
    n = len(signal.samples)
    if n < 2 * segment_len:
        raise SignalTooShort(
            f"need at least 2*segment_len = {2 * segment_len} samples, have {n}"
        )
    freq, density = welch(
        signal.samples,
        fs=signal.sample_rate,
        window="boxcar",
        nperseg=segment_len,
        noverlap=segment_len // 2,
        detrend=False,
        scaling="density",
        return_onesided=True,
    )
    return Spectrum(freq, density)


def line_suppression(no_th: Spectrum, with_th: Spectrum) -> float:
    """Reduction of the peak-to-mean spectral density ratio, in dB.

    Positive when hopping flattened the spectrum relative to the fixed
    pulse train.
    """
    if len(no_th.freq_hz) != len(with_th.freq_hz) or not np.allclose(
        no_th.freq_hz, with_th.freq_hz
    ):
        raise GridMismatch("spectra must share one frequency grid")
    return no_th.peak_to_mean_db() - with_th.peak_to_mean_db()


def write_psd_csv(path, spectrum: Spectrum) -> None:
    with open(path, "w", newline="") as f:
        f.write("freq_hz,psd\n")
        for fr, p in zip(spectrum.freq_hz, spectrum.density):
            f.write(f"{fr:.9g},{p:.9g}\n")
