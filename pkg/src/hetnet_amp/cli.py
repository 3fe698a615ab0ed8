"""Command line entry points.

Subcommands:
  pilots   print a pilot-set summary and Gram-matrix statistics
  run      execute an experiment described by a key=value config file
  roc      re-derive the ROC CSV from a stored trial file
  rrmse    re-derive the RRMSE CSV from a stored trial file
  se       iterate the state-evolution recursion and print tau^2 per step

Config files are flat `key = value` lines (# starts a comment). Keys mirror
the experiment fields: system parameters (M, N, L, T, eps, rho_u, snr_db,
sigma2, beta_e, beta, xi, delta, max_iters, damping, seed) plus trials, strategies,
csi_modes, sweep_L, sweep_M, sweep_eps, output_path, fixed_pilots,
num_thresholds, workers. List values are comma separated. CLI flags
override file values; HETNET_AMP_SEED overrides the seed.
"""

import argparse
import os
import sys

import numpy as np

from . import harness, metrics
from .amp import StateEvolutionSampler, state_evolution_run
from .harness import SEED_ENV_VAR, ExperimentSpec
from .pilots import make_pilots
from .sysmodel import SystemConfig

_CFG_KEYS = {
    "M": int, "N": int, "L": int, "T": int, "eps": float, "rho_u": float,
    "snr_db": float, "sigma2": float, "beta_e": float, "beta": float,
    "xi": float, "delta": float, "max_iters": int, "damping": float, "seed": int,
}
_SPEC_KEYS = {
    "trials": int, "output_path": str, "fixed_pilots": bool,
    "num_thresholds": int, "workers": int,
}
_LIST_KEYS = {
    "strategies": str, "csi_modes": str,
    "sweep_L": int, "sweep_M": int, "sweep_eps": float,
}


def parse_config(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            out[key] = _parse_value(key, val, where=f"{path}:{lineno}")
    return out


def _parse_value(key: str, val: str, where: str = "override"):
    try:
        if key in _CFG_KEYS:
            return _CFG_KEYS[key](val)
        if key in _SPEC_KEYS:
            typ = _SPEC_KEYS[key]
            if typ is bool:
                return val.lower() in ("1", "true", "yes", "on")
            return typ(val)
        if key in _LIST_KEYS:
            typ = _LIST_KEYS[key]
            return [typ(v.strip()) for v in val.split(",") if v.strip()]
    except ValueError as e:
        raise ValueError(f"{where}: bad value for {key}: {val!r}") from e
    raise ValueError(f"{where}: unknown config key {key!r}")


def spec_from_config(cfg: dict) -> ExperimentSpec:
    sys_kwargs = {k: v for k, v in cfg.items() if k in _CFG_KEYS}
    base = SystemConfig(**sys_kwargs)
    sweep = {}
    for name, key in (("L", "sweep_L"), ("M", "sweep_M"), ("eps", "sweep_eps")):
        if key in cfg:
            sweep[name] = cfg[key]
    kwargs = {k: v for k, v in cfg.items() if k in _SPEC_KEYS}
    if "strategies" in cfg:
        kwargs["strategies"] = cfg["strategies"]
    if "csi_modes" in cfg:
        kwargs["csi_modes"] = cfg["csi_modes"]
    return ExperimentSpec(base=base, sweep=sweep, **kwargs)


def _cmd_pilots(args):
    rng = np.random.default_rng(args.seed)
    ps = make_pilots(args.strategy, args.L, args.N, args.xi, rng)
    gram = np.abs(ps.A.conj().T @ ps.A)
    off = gram[~np.eye(args.N, dtype=bool)]
    leak = np.abs(ps.A.conj().T @ ps.a_e)
    print(f"strategy={ps.strategy.value} L={ps.L} N={ps.N}")
    print(f"column norms: min={np.linalg.norm(ps.A, axis=0).min():.9g} "
          f"max={np.linalg.norm(ps.A, axis=0).max():.9g}")
    print(f"|a_n^H a_e|: max={leak.max():.3e} mean={leak.mean():.3e}")
    if args.N > 1:
        print(f"off-diagonal |a_m^H a_n|: max={off.max():.4f} "
              f"mean={off.mean():.4f} median={np.median(off):.4f}")
    return 0


def _cmd_run(args):
    cfg = parse_config(args.config) if args.config else {}
    for ov in args.set or []:
        if "=" not in ov:
            raise SystemExit(f"--set expects key=value, got {ov!r}")
        key, val = (s.strip() for s in ov.split("=", 1))
        cfg[key] = _parse_value(key, val)
    if args.trials is not None:
        cfg["trials"] = args.trials
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.output is not None:
        cfg["output_path"] = args.output
    spec = spec_from_config(cfg)
    groups = harness.run_experiment(spec)
    print(f"wrote {spec.output_path}_roc.csv, {spec.output_path}_rrmse.csv, "
          f"{spec.output_path}_store.npz ({len(groups)} sweep points x "
          f"{spec.trials} trials)")
    return 0


def _cmd_roc(args):
    groups, num_thresholds = harness.load_store(args.store)
    harness.write_roc_csv(args.out, groups, num_thresholds)
    print(f"wrote {args.out}")
    return 0


def _cmd_rrmse(args):
    groups, _ = harness.load_store(args.store)
    harness.write_rrmse_csv(args.out, groups)
    print(f"wrote {args.out}")
    return 0


def _cmd_se(args):
    cfg = SystemConfig(M=args.M, N=args.N, L=args.L, eps=args.eps,
                       snr_db=args.snr_db, seed=args.seed)
    sampler = StateEvolutionSampler(args.samples, harness.seed_stream(cfg.seed, 0, "se-sampler"))
    traj = state_evolution_run(cfg, sampler, tol=args.tol, max_steps=args.steps)
    for t, v in enumerate(traj):
        print(f"t={t} tau2={v:.9g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hetnet-amp",
                                description="MTC activity detection / channel "
                                            "estimation Monte Carlo simulator")
    sub = p.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("pilots", help="summarize a pilot set")
    pp.add_argument("--strategy", default="proposed1",
                    choices=["proposed1", "proposed2", "bernoulli"])
    pp.add_argument("--L", type=int, default=64)
    pp.add_argument("--N", type=int, default=200)
    pp.add_argument("--xi", type=float, default=0.001)
    pp.add_argument("--seed", type=int, default=0)
    pp.set_defaults(func=_cmd_pilots)

    pr = sub.add_parser("run", help="run an experiment from a config file")
    pr.add_argument("--config", help="key = value config file")
    pr.add_argument("--set", action="append", metavar="KEY=VALUE",
                    help="override any config key (repeatable)")
    pr.add_argument("--trials", type=int)
    pr.add_argument("--seed", type=int)
    pr.add_argument("--output")
    pr.set_defaults(func=_cmd_run)

    for name, fn in (("roc", _cmd_roc), ("rrmse", _cmd_rrmse)):
        ps_ = sub.add_parser(name, help=f"re-derive the {name} CSV from a trial store")
        ps_.add_argument("--store", required=True)
        ps_.add_argument("--out", required=True)
        ps_.set_defaults(func=fn)

    pe = sub.add_parser("se", help="print the state-evolution tau^2 trajectory")
    pe.add_argument("--L", type=int, default=64)
    pe.add_argument("--N", type=int, default=200)
    pe.add_argument("--M", type=int, default=20)
    pe.add_argument("--eps", type=float, default=0.05)
    pe.add_argument("--snr-db", type=float, default=20.0)
    pe.add_argument("--samples", type=int, default=100000)
    pe.add_argument("--steps", type=int, default=50)
    pe.add_argument("--tol", type=float, default=1e-6)
    pe.add_argument("--seed", type=int, default=0)
    pe.set_defaults(func=_cmd_se)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
