"""Experiment orchestration: per-trial RNG streams, Monte Carlo campaigns
over parameter sweeps, and CSV/NPZ persistence.

Outputs for an experiment written to <output_path>:
  <output_path>_roc.csv    strategy,csi_mode,L,M,eps,zeta,pfa,pmd,trials
  <output_path>_rrmse.csv  strategy,L,target,rrmse_pct,trials
  <output_path>_store.npz  per-trial scores/truth/energies for re-derivation
"""

import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import amp, embb_sic, metrics, pilots as pilotgen, sysmodel
from .pilots import PilotSet, PilotStrategy
from .sysmodel import SystemConfig

PURPOSE_TAGS = {
    "pilots": 0,
    "channels": 1,
    "noise": 2,
    "activity": 3,
    "se-sampler": 4,
}

SEED_ENV_VAR = "HETNET_AMP_SEED"

ROC_HEADER = "strategy,csi_mode,L,M,eps,zeta,pfa,pmd,trials"
RRMSE_HEADER = "strategy,L,target,rrmse_pct,trials"


def seed_stream(base_seed: int, trial_index: int, purpose: str) -> np.random.Generator:
    """Independent, reproducible stream per (seed, trial, purpose)."""
    if purpose not in PURPOSE_TAGS:
        raise ValueError(f"unknown purpose {purpose!r}; use one of {sorted(PURPOSE_TAGS)}")
    ss = np.random.SeedSequence([int(base_seed), int(trial_index), PURPOSE_TAGS[purpose]])
    return np.random.default_rng(ss)


@dataclass
class TrialResult:
    scores: np.ndarray
    truth: np.ndarray
    embb_err: float
    embb_ref: float
    mtc_err: float
    mtc_ref: float
    iters: int
    converged: bool


def run_trial(
    cfg: SystemConfig,
    strategy: PilotStrategy,
    csi_mode: str,
    trial_index: int,
    fixed_pilots: PilotSet | None = None,
) -> TrialResult:
    """One coherence interval end to end: pilots, scenario, SIC, AMP."""
    if csi_mode not in ("perfect", "imperfect"):
        raise ValueError(f"csi_mode must be 'perfect' or 'imperfect', got {csi_mode!r}")
    if fixed_pilots is not None:
        ps = fixed_pilots
    else:
        rng_p = seed_stream(cfg.seed, trial_index, "pilots")
        ps = pilotgen.make_pilots(strategy, cfg.L, cfg.N, cfg.xi, rng_p)

    alpha = sysmodel.sample_activity(cfg.N, cfg.eps, seed_stream(cfg.seed, trial_index, "activity"))
    h_e, H = sysmodel.sample_channels(cfg, seed_stream(cfg.seed, trial_index, "channels"))
    scen = sysmodel.synthesize(ps, alpha, h_e, H, cfg, rng=seed_stream(cfg.seed, trial_index, "noise"))

    Yn = scen.Y / cfg.amplitude
    if csi_mode == "perfect":
        est = embb_sic.perfect_estimate(h_e, cfg.beta_e)
    else:
        y = embb_sic.correlate(Yn, ps.a_e)
        est = embb_sic.mmse_estimate(y, cfg.beta_e, cfg.noise_var)
    cleaned = embb_sic.sic(Yn, ps.a_e, est, cfg.noise_var)

    state, scores = amp.amp_run(cleaned, ps, cfg)

    active = alpha == 1
    mtc_err = float(np.sum(np.abs(state.X_hat[active] - scen.X[active]) ** 2))
    mtc_ref = float(np.sum(np.abs(scen.X[active]) ** 2))
    return TrialResult(
        scores=scores,
        truth=alpha,
        embb_err=float(np.sum(np.abs(est.h_hat - h_e) ** 2)),
        embb_ref=float(np.sum(np.abs(h_e) ** 2)),
        mtc_err=mtc_err,
        mtc_ref=mtc_ref,
        iters=state.iter,
        converged=state.converged,
    )


@dataclass
class ExperimentSpec:
    base: SystemConfig
    strategies: list = field(default_factory=lambda: [PilotStrategy.PROPOSED_I])
    csi_modes: list = field(default_factory=lambda: ["imperfect"])
    sweep: dict = field(default_factory=dict)  # subset of {"L","M","eps"} -> values
    trials: int = 100
    output_path: str = "results/experiment"
    fixed_pilots: bool = False
    num_thresholds: int = 200
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        self.strategies = [PilotStrategy(s) for s in self.strategies]
        bad = set(self.sweep) - {"L", "M", "eps"}
        if bad:
            raise ValueError(f"unsupported sweep parameters: {sorted(bad)}")
        for mode in self.csi_modes:
            if mode not in ("perfect", "imperfect"):
                raise ValueError(f"bad csi_mode {mode!r}")


@dataclass
class GroupResult:
    strategy: PilotStrategy
    csi_mode: str
    cfg: SystemConfig
    scores: np.ndarray      # trials x N
    truth: np.ndarray       # trials x N
    energies: np.ndarray    # trials x 4: embb_err, embb_ref, mtc_err, mtc_ref

    @property
    def key(self):
        return (self.strategy.value, self.csi_mode, self.cfg.L, self.cfg.M, self.cfg.eps)


def sweep_points(spec: ExperimentSpec):
    """Cartesian product of strategies x csi modes x swept parameters."""
    keys = sorted(spec.sweep)
    grids = [spec.sweep[k] for k in keys]
    points = []
    for strat in spec.strategies:
        for mode in spec.csi_modes:
            for combo in itertools.product(*grids) if grids else [()]:
                over = dict(zip(keys, combo))
                points.append((strat, mode, over))
    return points


def _make_cfg(base: SystemConfig, over: dict) -> SystemConfig:
    kwargs = dict(over)
    if "L" in kwargs and base.T == 2 * base.L:
        kwargs.setdefault("T", None)  # rederive the 2L default
    if getattr(base, "sigma2_from_snr", False):
        kwargs.setdefault("sigma2", None)  # rederive from snr_db at the new L
    return replace(base, **kwargs)


def run_group(
    cfg: SystemConfig,
    strategy: PilotStrategy,
    csi_mode: str,
    trials: int,
    fixed_pilots: bool = False,
    workers: int = 1,
) -> GroupResult:
    shared = None
    if fixed_pilots:
        shared = pilotgen.make_pilots(strategy, cfg.L, cfg.N, cfg.xi, seed_stream(cfg.seed, 0, "pilots"))
    if workers > 1:
        args = [(cfg, strategy, csi_mode, t, shared) for t in range(trials)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_trial_star, args, chunksize=max(1, trials // (4 * workers))))
    else:
        results = [run_trial(cfg, strategy, csi_mode, t, shared) for t in range(trials)]
    scores = np.stack([r.scores for r in results])
    truth = np.stack([r.truth for r in results])
    energies = np.array([[r.embb_err, r.embb_ref, r.mtc_err, r.mtc_ref] for r in results])
    return GroupResult(strategy=strategy, csi_mode=csi_mode, cfg=cfg,
                       scores=scores, truth=truth, energies=energies)


def _trial_star(args):
    return run_trial(*args)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def write_roc_csv(path: str, groups: list, num_thresholds: int = 200) -> None:
    lines = [ROC_HEADER]
    for g in groups:
        curve = metrics.roc_sweep(list(g.scores), list(g.truth), num_thresholds=num_thresholds)
        strat, mode, L, M, eps = g.key
        for z, pfa, pmd in zip(curve.thresholds, curve.pfa, curve.pmd):
            lines.append(",".join([
                strat, mode, str(L), str(M), _fmt(float(eps)),
                _fmt(float(z)), _fmt(float(pfa)), _fmt(float(pmd)), str(curve.trials),
            ]))
    _write_text(path, "\n".join(lines) + "\n")


def write_rrmse_csv(path: str, groups: list) -> None:
    lines = [RRMSE_HEADER]
    for g in groups:
        strat, _, L, _, _ = g.key
        e = g.energies
        for target, err, ref in (("embb", e[:, 0].sum(), e[:, 1].sum()),
                                 ("mtc", e[:, 2].sum(), e[:, 3].sum())):
            if ref > 0:
                val = metrics.rrmse_from_energies(err, ref)
                lines.append(",".join([strat, str(L), target, _fmt(val), str(len(e))]))
    _write_text(path, "\n".join(lines) + "\n")


def _write_text(path: str, text: str) -> None:
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def save_store(path: str, groups: list, num_thresholds: int) -> None:
    meta = []
    arrays = {}
    for i, g in enumerate(groups):
        strat, mode, L, M, eps = g.key
        meta.append({"strategy": strat, "csi_mode": mode, "L": int(L), "M": int(M),
                     "eps": float(eps), "trials": int(g.scores.shape[0])})
        arrays[f"g{i}_scores"] = g.scores
        arrays[f"g{i}_truth"] = g.truth
        arrays[f"g{i}_energies"] = g.energies
    arrays["meta"] = np.array(json.dumps({"groups": meta, "num_thresholds": num_thresholds}))
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    np.savez_compressed(path, **arrays)


@dataclass
class StoredGroup:
    strategy: str
    csi_mode: str
    L: int
    M: int
    eps: float
    scores: np.ndarray
    truth: np.ndarray
    energies: np.ndarray

    @property
    def key(self):
        return (self.strategy, self.csi_mode, self.L, self.M, self.eps)


def load_store(path: str):
    with np.load(path, allow_pickle=False) as z:
        meta = json.loads(str(z["meta"]))
        groups = []
        for i, gm in enumerate(meta["groups"]):
            groups.append(StoredGroup(
                strategy=gm["strategy"], csi_mode=gm["csi_mode"], L=gm["L"],
                M=gm["M"], eps=gm["eps"],
                scores=z[f"g{i}_scores"], truth=z[f"g{i}_truth"],
                energies=z[f"g{i}_energies"],
            ))
    return groups, meta["num_thresholds"]


def run_experiment(spec: ExperimentSpec):
    """Run every sweep point, write the ROC/RRMSE CSVs and the trial store.
    Deterministic: identical spec and seed give byte-identical outputs."""
    base_seed = spec.base.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        base_seed = int(env)
    groups = []
    for strat, mode, over in sweep_points(spec):
        try:
            cfg = _make_cfg(spec.base, over)
            cfg.seed = base_seed
            groups.append(run_group(cfg, strat, mode, spec.trials,
                                    fixed_pilots=spec.fixed_pilots, workers=spec.workers))
        except pilotgen.InfeasibleCollisionBound as e:
            raise pilotgen.InfeasibleCollisionBound(
                f"sweep point strategy={strat.value} csi={mode} {over}: {e}") from e
    out = spec.output_path
    write_roc_csv(out + "_roc.csv", groups, spec.num_thresholds)
    write_rrmse_csv(out + "_rrmse.csv", groups)
    save_store(out + "_store.npz", groups, spec.num_thresholds)
    return groups
