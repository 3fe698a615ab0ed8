"""MMV-AMP: MMSE vector denoiser, Onsager correction, state evolution,
iteration loop and threshold detection.

The scalar-state specialization is used throughout: the effective noise
covariance is tau2 * I, which collapses the vector denoiser to

    eta(x) = g * phi(||x||^2) * x,     g = beta / (beta + tau2),
    phi(u) = 1 / (1 + exp(a - c u)),
    a = log((1-eps)/eps) + M log(1 + beta/tau2),
    c = 1/tau2 - 1/(beta + tau2).

phi is evaluated through a logistic sigmoid, so the (1 + beta/tau2)^M
factor never overflows.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .embb_sic import CleanedSignal
from .pilots import PilotSet
from .sysmodel import SystemConfig

TAU2_FLOOR = 1e-15


@dataclass
class DenoiserParams:
    beta: float
    eps: float
    tau2: float
    M: int

    def __post_init__(self):
        if self.tau2 <= 0:
            raise ValueError(f"tau2 must be > 0, got {self.tau2}")
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must be in (0,1), got {self.eps}")
        if self.beta <= 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")


@dataclass
class AmpState:
    X_hat: np.ndarray
    R: np.ndarray
    tau2: float
    iter: int
    residual_delta: float
    converged: bool


@dataclass
class DetectionResult:
    scores: np.ndarray
    decisions: np.ndarray
    X_hat: np.ndarray
    iters_used: int


def _denoise_rows(X: np.ndarray, beta, eps: float, tau2: float):
    """Row-wise denoiser and normalized Jacobian trace.

    X is K x M (one row per device); beta is scalar or length K.
    Returns (eta_rows, b) with b_k = (1/M) tr d(eta)/dx at row k.
    """
    if tau2 <= 0:
        raise ValueError(f"tau2 must be > 0, got {tau2}")
    if not np.all(np.isfinite(X)):
        raise ValueError("non-finite denoiser input")
    M = X.shape[1]
    beta = np.asarray(beta, dtype=float)
    u = np.sum(np.abs(X) ** 2, axis=1)
    g = beta / (beta + tau2)
    c = 1.0 / tau2 - 1.0 / (beta + tau2)
    logit = np.log((1.0 - eps) / eps) + M * np.log1p(beta / tau2) - c * u
    phi = expit(-logit)
    one_minus_phi = expit(logit)
    scale = np.broadcast_to(g * phi, u.shape)
    eta = scale[:, None] * X
    b = scale * (1.0 + c * u * one_minus_phi / M)
    return eta, b


def denoise(x: np.ndarray, p: DenoiserParams) -> np.ndarray:
    """Posterior mean of a device row given its noisy pseudo-observation."""
    eta, _ = _denoise_rows(x[None, :], p.beta, p.eps, p.tau2)
    return eta[0]


def denoise_jacobian_trace(x: np.ndarray, p: DenoiserParams) -> float:
    """(1/M) tr d(eta)/dx (Wirtinger sense), used for the Onsager term."""
    _, b = _denoise_rows(x[None, :], p.beta, p.eps, p.tau2)
    return float(b[0])


class StateEvolutionSampler:
    """Monte Carlo sampler for the state-evolution expectation.

    The prior draws (sparse rows x_beta and unit-variance perturbations s)
    are generated once and reused across iterations, so the recursion is a
    deterministic map of tau2 and its fixed point can be located to the
    stopping tolerance without MC jitter.
    """

    def __init__(self, num_samples: int, rng: np.random.Generator):
        if num_samples < 1:
            raise ValueError(f"num_samples must be >= 1, got {num_samples}")
        self.num_samples = num_samples
        self._rng = rng
        self._draws = None

    def draws(self, cfg: SystemConfig):
        if self._draws is None:
            n, M = self.num_samples, cfg.M
            rng = self._rng
            active = rng.random(n) < cfg.eps
            beta = rng.choice(cfg.beta, size=n) if cfg.beta.ndim else np.full(n, cfg.beta)
            h = (rng.standard_normal((n, M)) + 1j * rng.standard_normal((n, M))) / np.sqrt(2)
            x = np.where(active[:, None], np.sqrt(beta)[:, None] * h, 0.0)
            s = (rng.standard_normal((n, M)) + 1j * rng.standard_normal((n, M))) / np.sqrt(2)
            self._draws = (x, s, beta)
        return self._draws


def state_evolution_step(
    tau2: float, cfg: SystemConfig, sampler: StateEvolutionSampler
) -> float:
    """One step of tau2_{t+1} = noise_var + (N/L)(1/M) E||eta(x + tau s) - x||^2."""
    if tau2 <= 0:
        raise ValueError(f"tau2 must be > 0, got {tau2}")
    x, s, beta = sampler.draws(cfg)
    eta, _ = _denoise_rows(x + np.sqrt(tau2) * s, beta, cfg.eps, tau2)
    mse = np.mean(np.sum(np.abs(eta - x) ** 2, axis=1)) / cfg.M
    return max(cfg.noise_var + (cfg.N / cfg.L) * mse, TAU2_FLOOR)


def state_evolution_run(
    cfg: SystemConfig,
    sampler: StateEvolutionSampler,
    tau2_0: float | None = None,
    tol: float = 1e-6,
    max_steps: int = 50,
) -> list[float]:
    """Iterate the recursion from the full-prior-variance start and return
    the tau2 trajectory (first entry is the starting point)."""
    if tau2_0 is None:
        tau2_0 = cfg.noise_var + (cfg.N / cfg.L) * cfg.eps * float(np.mean(cfg.beta))
    traj = [max(tau2_0, TAU2_FLOOR)]
    for _ in range(max_steps):
        nxt = state_evolution_step(traj[-1], cfg, sampler)
        traj.append(nxt)
        if abs(traj[-1] - traj[-2]) < tol:
            break
    return traj


def amp_run(
    cleaned: CleanedSignal,
    pilots: PilotSet,
    cfg: SystemConfig,
    mode: str = "empirical",
    tau2_schedule: list[float] | None = None,
):
    """AMP loop on the cleaned signal. Returns (final AmpState, scores).

    mode "empirical" tracks tau2 = ||R||_F^2 / (L M); mode "analytic"
    follows a precomputed state-evolution schedule (tau2_schedule).
    Non-convergence at max_iters is flagged, not raised.

    cfg.damping < 1 replaces each update by a convex combination with the
    previous iterate, which stabilizes the iteration when the pilot matrix
    has heavy-tailed column correlations.
    """
    Yb = cleaned.Y_breve
    L, M = Yb.shape
    N = pilots.N
    if pilots.L != L or M != cfg.M or N != cfg.N:
        raise ValueError("shape mismatch between cleaned signal, pilots and config")
    if mode == "analytic":
        if not tau2_schedule:
            raise ValueError("analytic mode requires a tau2 schedule")
    elif mode != "empirical":
        raise ValueError(f"unknown mode {mode!r}")

    A = pilots.A
    Ah = A.conj().T
    X = np.zeros((N, M), dtype=np.complex128)
    R = Yb.copy()

    def current_tau2(t):
        if mode == "empirical":
            return max(np.linalg.norm(R) ** 2 / (L * M), TAU2_FLOOR)
        return max(tau2_schedule[min(t, len(tau2_schedule) - 1)], TAU2_FLOOR)

    tau2 = current_tau2(0)
    delta = np.inf
    converged = False
    t = 0
    damp = cfg.damping
    for t in range(1, cfg.max_iters + 1):
        X_pre = Ah @ R + X
        X_new, b = _denoise_rows(X_pre, cfg.beta, cfg.eps, tau2)
        if damp < 1.0:
            X_new = damp * X_new + (1.0 - damp) * X
        R_new = Yb - A @ X_new + (N / L) * float(np.mean(b)) * R
        if damp < 1.0:
            R_new = damp * R_new + (1.0 - damp) * R
        delta = float(np.linalg.norm(R_new - R))
        X, R = X_new, R_new
        tau2 = current_tau2(t)
        if delta < cfg.delta:
            converged = True
            break

    state = AmpState(
        X_hat=X, R=R, tau2=tau2, iter=t, residual_delta=delta, converged=converged
    )
    scores = np.linalg.norm(X, axis=1)
    return state, scores


def detect(scores: np.ndarray, zeta: float) -> np.ndarray:
    """Declare device n active iff ||x_hat_n||_2 >= zeta."""
    if zeta < 0:
        raise ValueError(f"threshold must be >= 0, got {zeta}")
    return (np.asarray(scores) >= zeta).astype(np.int64)


def detection_result(
    scores: np.ndarray, zeta: float, X_hat: np.ndarray, iters_used: int
) -> DetectionResult:
    return DetectionResult(
        scores=np.asarray(scores),
        decisions=detect(scores, zeta),
        X_hat=X_hat,
        iters_used=iters_used,
    )
