"""Pattern checks over IPv4 header streams, in the spirit of a whitelist IDS."""

from dataclasses import dataclass

import numpy as np
from scipy import stats

from ..report import AnalysisReport, DetectorResult
from .datagram import ip_of


@dataclass(frozen=True)
class ScanThresholds:
    typical_mtu: int = 1500
    small_fraction_of_mtu: float = 0.5     # "far below typical MTU"
    df_small_fraction: float = 0.5
    id_mean_step: float = 1024.0
    id_alpha: float = 0.01
    min_datagrams: int = 8
    min_expected: float = 5.0


def id_mean_step(ids):
    """Mean absolute successive difference of 16-bit identifications, wrap-aware."""
    ids = np.asarray(ids, dtype=np.int64)
    d = np.diff(ids) % 65536
    return float(np.minimum(d, 65536 - d).mean())


def _byte_hist(ids):
    ids = np.asarray(ids, dtype=np.int64)
    return np.bincount(np.concatenate([ids >> 8, ids & 0xFF]), minlength=256)


def id_counter_chi_square(ids, min_expected=5.0):
    """Chi-square test of identification bytes against a step-1 counter from the first value.

    Returns ``(statistic, p_value)``. Bins expected fewer than ``min_expected``
    times are pooled. A host counter gives p = 1; random fields give p near 0.
    """
    ids = np.asarray(ids, dtype=np.int64)
    observed = _byte_hist(ids)
    expected = _byte_hist((ids[0] + np.arange(len(ids))) & 0xFFFF)
    big = expected >= min_expected
    obs = list(observed[big])
    exp = list(expected[big])
    pooled_obs, pooled_exp = observed[~big].sum(), expected[~big].sum()
    if pooled_exp > 0:
        obs.append(pooled_obs)
        exp.append(pooled_exp)
    elif pooled_obs > 0:
        return float("inf"), 0.0
    if len(exp) < 2:
        return 0.0, 1.0
    obs = np.asarray(obs, dtype=np.float64)
    exp = np.asarray(exp, dtype=np.float64)
    stat = float(((obs - exp) ** 2 / exp).sum())
    return stat, float(stats.chi2.sf(stat, len(exp) - 1))


def header_anomaly_scan(headers, thresholds=ScanThresholds()):
    """Run the DF-usage, ID-sequentiality and ID-byte checks over a header stream.

    With fewer than ``min_datagrams`` headers no check is flagged and the
    report carries an "insufficient data" note.
    """
    ips = [ip_of(h) for h in headers]
    report = AnalysisReport()
    if len(ips) < max(thresholds.min_datagrams, 2):
        report.notes.append(f"insufficient data: {len(ips)} datagrams, "
                            f"need {max(thresholds.min_datagrams, 2)}")
        return report

    small_limit = thresholds.small_fraction_of_mtu * thresholds.typical_mtu
    small = [h for h in ips if h.total_length <= small_limit]
    frac = float(np.mean([h.flag_df for h in small])) if small else 0.0
    report.add(DetectorResult("df_on_small_packets", frac, thresholds.df_small_fraction,
                              frac > thresholds.df_small_fraction, ("headers",)))

    ids = [h.identification for h in ips]
    step = id_mean_step(ids)
    report.add(DetectorResult("id_mean_step", step, thresholds.id_mean_step,
                              step > thresholds.id_mean_step, ("headers",)))

    stat, p = id_counter_chi_square(ids, thresholds.min_expected)
    report.add(DetectorResult("id_byte_chi_square_p", p, thresholds.id_alpha,
                              p < thresholds.id_alpha, ("headers",), note=f"chi2={stat:.6g}"))
    return report
