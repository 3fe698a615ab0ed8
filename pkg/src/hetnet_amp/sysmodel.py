"""System configuration and composite received-signal synthesis.

Convention: pilot columns are unit norm and the transmit amplitude
sqrt(L * rho_u) is applied at synthesis. Receivers divide Y by that
amplitude, so the normalized model is Y' = a_e h_e^T + A X + W' with W'
entries CN(0, sigma2 / (L rho_u)).
"""

from dataclasses import dataclass, field

import numpy as np

from .pilots import PilotSet


@dataclass
class SystemConfig:
    M: int = 20            # receive antennas
    N: int = 200           # MTC devices
    L: int = 64            # pilot symbols
    eps: float = 0.05      # activity probability
    T: int | None = None   # coherence length; defaults to 2L (payload unused)
    rho_u: float = 1.0     # per-device pilot power
    snr_db: float = 20.0   # nominal SNR = L*rho_u/sigma2, used when sigma2 is None
    sigma2: float | None = None
    beta_e: float = 1.0
    beta: float | np.ndarray = 1.0    # MTC path losses, scalar or length N
    xi: float = 0.001      # collision-probability threshold for Proposed Pilot I
    delta: float = 1e-4    # AMP residual stopping error
    max_iters: int = 50
    damping: float = 1.0   # AMP update damping; 1.0 is the undamped iteration
    seed: int = 0

    def __post_init__(self):
        if self.T is None:
            self.T = 2 * self.L
        self.sigma2_from_snr = self.sigma2 is None
        if self.sigma2 is None:
            self.sigma2 = self.L * self.rho_u / (10.0 ** (self.snr_db / 10.0))
        if self.M < 1 or self.N < 1 or self.L < 2:
            raise ValueError("need M >= 1, N >= 1, L >= 2")
        if not self.L < self.T:
            raise ValueError(f"pilot length L={self.L} must be < T={self.T}")
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must be in (0,1), got {self.eps}")
        if self.rho_u <= 0 or self.beta_e <= 0 or self.sigma2 < 0:
            raise ValueError("powers and path losses must be positive")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError(f"damping must be in (0, 1], got {self.damping}")
        beta = np.broadcast_to(np.asarray(self.beta, dtype=float), (self.N,)).copy()
        if np.any(beta <= 0):
            raise ValueError("all MTC path losses must be positive")
        self.beta = beta

    @property
    def amplitude(self) -> float:
        return float(np.sqrt(self.L * self.rho_u))

    @property
    def noise_var(self) -> float:
        """Per-dimension noise variance of the normalized model."""
        return self.sigma2 / (self.L * self.rho_u)


@dataclass
class ScenarioRealization:
    alpha: np.ndarray   # length N in {0,1}
    h_e: np.ndarray     # length M
    H: np.ndarray       # N x M
    X: np.ndarray       # N x M, row n = alpha_n * h_n
    W: np.ndarray       # L x M
    Y: np.ndarray       # L x M composite received matrix


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def sample_activity(N: int, eps: float, rng: np.random.Generator) -> np.ndarray:
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0,1), got {eps}")
    return (rng.random(N) < eps).astype(np.int64)


def sample_channels(cfg: SystemConfig, rng: np.random.Generator):
    """Rayleigh fading: h_e ~ CN(0, beta_e I), row n of H ~ CN(0, beta_n I)."""
    h_e = np.sqrt(cfg.beta_e) * _complex_gaussian(rng, cfg.M)
    H = np.sqrt(cfg.beta)[:, None] * _complex_gaussian(rng, (cfg.N, cfg.M))
    return h_e, H


def synthesize(
    pilots: PilotSet,
    alpha: np.ndarray,
    h_e: np.ndarray,
    H: np.ndarray,
    cfg: SystemConfig,
    rng: np.random.Generator | None = None,
    W: np.ndarray | None = None,
) -> ScenarioRealization:
    """Y = sqrt(L rho_u) * (a_e h_e^T + A X) + W, with X row n = alpha_n h_n."""
    L, M, N = cfg.L, cfg.M, cfg.N
    if pilots.A.shape != (L, N) or len(alpha) != N or len(h_e) != M or H.shape != (N, M):
        raise ValueError("dimension mismatch between pilots, channels and config")
    X = alpha[:, None] * H
    if W is None:
        if rng is None:
            raise ValueError("provide either a noise matrix W or an rng")
        W = np.sqrt(cfg.sigma2) * _complex_gaussian(rng, (L, M))
    elif W.shape != (L, M):
        raise ValueError(f"W must be {L}x{M}, got {W.shape}")
    Y = cfg.amplitude * (np.outer(pilots.a_e, h_e) + pilots.A @ X) + W
    return ScenarioRealization(alpha=alpha, h_e=h_e, H=H, X=X, W=W, Y=Y)
