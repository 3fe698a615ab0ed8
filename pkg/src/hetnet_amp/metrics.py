"""Detection and estimation metrics: PMD/PFA, ROC sweeps, AUC, RRMSE.

Aggregation over trials is pooled-count (sums of misses/false alarms and
of error/reference energies), so trials with no active or no inactive
devices need no special casing.
"""

from dataclasses import dataclass

import numpy as np


class UndefinedMetric(ValueError):
    """Metric denominator is zero (e.g. all-zero reference energy)."""


@dataclass
class RocCurve:
    thresholds: np.ndarray
    pfa: np.ndarray
    pmd: np.ndarray
    trials: int


@dataclass
class RrmseReport:
    rrmse_embb: float
    rrmse_mtc: float
    trials: int


def detection_counts(decisions: np.ndarray, truth: np.ndarray):
    """(missed, n_active, false_alarms, n_inactive) for one trial."""
    decisions = np.asarray(decisions)
    truth = np.asarray(truth)
    if decisions.shape != truth.shape:
        raise ValueError("decisions and truth must have equal length")
    active = truth == 1
    miss = int(np.sum(active & (decisions == 0)))
    fa = int(np.sum(~active & (decisions == 1)))
    return miss, int(np.sum(active)), fa, int(np.sum(~active))


def pmd_pfa(decisions: np.ndarray, truth: np.ndarray):
    """Per-trial (pmd, pfa); NaN when the respective denominator is empty."""
    miss, n_act, fa, n_inact = detection_counts(decisions, truth)
    pmd = miss / n_act if n_act else float("nan")
    pfa = fa / n_inact if n_inact else float("nan")
    return pmd, pfa


def default_thresholds(pooled_scores: np.ndarray, num: int = 200) -> np.ndarray:
    """num log-spaced thresholds between 1e-3 * mean and 2 * max score."""
    s = np.asarray(pooled_scores, dtype=float)
    s_mean = float(np.mean(s))
    s_max = float(np.max(s))
    lo = max(1e-3 * s_mean, 1e-300)
    hi = max(2.0 * s_max, lo * (1.0 + 1e-12))
    return np.logspace(np.log10(lo), np.log10(hi), num)


def roc_sweep(scores, truths, thresholds=None, num_thresholds: int = 200) -> RocCurve:
    """Pooled-count PMD/PFA over a list of per-trial score vectors."""
    scores = [np.asarray(s, dtype=float) for s in np.atleast_2d(scores)]
    truths = [np.asarray(t) for t in np.atleast_2d(truths)]
    if len(scores) == 0 or len(scores) != len(truths):
        raise ValueError("need at least one trial with matching truth")
    pooled = np.concatenate(scores)
    pooled_truth = np.concatenate(truths)
    if thresholds is None:
        thresholds = default_thresholds(pooled, num_thresholds)
    thresholds = np.sort(np.asarray(thresholds, dtype=float))

    active = pooled_truth == 1
    n_act = int(np.sum(active))
    n_inact = int(np.sum(~active))
    # scores >= zeta declared active
    pmd = np.array([np.sum(active & (pooled < z)) for z in thresholds], dtype=float)
    pfa = np.array([np.sum(~active & (pooled >= z)) for z in thresholds], dtype=float)
    pmd /= max(n_act, 1)
    pfa /= max(n_inact, 1)
    return RocCurve(thresholds=thresholds, pfa=pfa, pmd=pmd, trials=len(scores))


def auc(pooled_scores: np.ndarray, pooled_truth: np.ndarray) -> float:
    """Threshold-free area under the detection-vs-false-alarm curve,
    computed as the Mann-Whitney statistic P(active score > inactive score)."""
    s = np.asarray(pooled_scores, dtype=float)
    t = np.asarray(pooled_truth)
    pos = s[t == 1]
    neg = s[t == 0]
    if len(pos) == 0 or len(neg) == 0:
        raise UndefinedMetric("AUC needs both active and inactive samples")
    order = np.argsort(np.concatenate([neg, pos]), kind="mergesort")
    ranks = np.empty(len(order))
    ranks[order] = np.arange(1, len(order) + 1)
    # midranks for ties
    allscores = np.concatenate([neg, pos])
    sorted_scores = allscores[order]
    ties = np.flatnonzero(np.diff(sorted_scores) == 0)
    if len(ties):
        i = 0
        n = len(sorted_scores)
        while i < n:
            j = i
            while j + 1 < n and sorted_scores[j + 1] == sorted_scores[i]:
                j += 1
            if j > i:
                ranks[order[i : j + 1]] = 0.5 * (i + 1 + j + 1)
            i = j + 1
    r_pos = np.sum(ranks[len(neg) :])
    return float((r_pos - len(pos) * (len(pos) + 1) / 2) / (len(pos) * len(neg)))


def rrmse(estimates, truths, mask=None) -> float:
    """100 * sqrt(sum ||est - true||_F^2 / sum ||true||_F^2), pooled over
    trials; mask selects rows (e.g. truly active devices)."""
    err = 0.0
    ref = 0.0
    est_list = estimates if isinstance(estimates, (list, tuple)) else [estimates]
    tru_list = truths if isinstance(truths, (list, tuple)) else [truths]
    mask_list = mask if isinstance(mask, (list, tuple)) else [mask] * len(est_list)
    if len(est_list) != len(tru_list):
        raise ValueError("estimates and truths must pair up")
    for e, t, m in zip(est_list, tru_list, mask_list):
        e = np.asarray(e)
        t = np.asarray(t)
        if e.shape != t.shape:
            raise ValueError("estimate/truth shape mismatch")
        if m is not None:
            m = np.asarray(m).astype(bool)
            e = e[m]
            t = t[m]
        err += float(np.sum(np.abs(e - t) ** 2))
        ref += float(np.sum(np.abs(t) ** 2))
    if ref == 0.0:
        raise UndefinedMetric("reference energy is zero")
    return 100.0 * float(np.sqrt(err / ref))


def rrmse_from_energies(err_energy: float, ref_energy: float) -> float:
    """Same metric from pre-pooled energy sums (parallel-reduction path)."""
    if ref_energy == 0.0:
        raise UndefinedMetric("reference energy is zero")
    return 100.0 * float(np.sqrt(err_energy / ref_energy))


def threshold_for_pmd(curve: RocCurve, pmd_cap: float) -> float:
    """Smallest threshold whose PMD is <= pmd_cap (operating-point rule)."""
    ok = np.flatnonzero(curve.pmd <= pmd_cap)
    if len(ok) == 0:
        raise UndefinedMetric(f"no threshold achieves PMD <= {pmd_cap}")
    # pmd is non-decreasing in zeta: the largest feasible index still meets
    # the cap; the smallest feasible zeta is the first one.
    return float(curve.thresholds[ok[0]])
