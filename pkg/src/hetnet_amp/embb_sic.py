"""Broadband-user channel estimation and interference cancellation.

Works on the normalized received matrix Y' = Y / sqrt(L rho_u):
correlate against the known broadband pilot, MMSE-scale the result, then
subtract the reconstructed rank-1 contribution. The residual estimation
error is folded into a white equivalent-noise level for the AMP stage.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class EmbbEstimate:
    h_hat: np.ndarray   # length M
    c_e: float          # per-dimension error variance
    psi: float          # MMSE scaling denominator 1/(beta_e + noise_var)

    @property
    def h_err_var(self) -> float:
        return self.c_e


@dataclass
class CleanedSignal:
    Y_breve: np.ndarray   # L x M
    noise_model: float    # per-dimension variance of the equivalent noise


def correlate(Y_normalized: np.ndarray, a_e: np.ndarray) -> np.ndarray:
    """Matched filter y = Y'^T a_e^*; with orthogonal MTC pilots this is
    h_e plus noise."""
    if Y_normalized.shape[0] != len(a_e):
        raise ValueError(
            f"Y has {Y_normalized.shape[0]} rows but pilot has length {len(a_e)}"
        )
    return Y_normalized.T @ a_e.conj()


def mmse_estimate(y: np.ndarray, beta_e: float, noise_var: float) -> EmbbEstimate:
    """Scalar-gain MMSE estimate of h_e from y = h_e + noise."""
    if noise_var < 0:
        raise ValueError(f"noise_var must be >= 0, got {noise_var}")
    psi = 1.0 / (beta_e + noise_var)
    gain = beta_e * psi
    return EmbbEstimate(h_hat=gain * y, c_e=beta_e * noise_var * psi, psi=psi)


def perfect_estimate(h_e: np.ndarray, beta_e: float) -> EmbbEstimate:
    """Genie estimate used by the perfect-CSI mode."""
    return EmbbEstimate(h_hat=h_e.copy(), c_e=0.0, psi=1.0 / beta_e)


def sic(
    Y_normalized: np.ndarray,
    a_e: np.ndarray,
    est: EmbbEstimate,
    noise_var: float,
) -> CleanedSignal:
    """Subtract a_e h_hat^T; the leftover rank-1 error energy (M * c_e on
    average) is spread evenly over the L x M grid for the noise model."""
    if Y_normalized.shape[0] != len(a_e):
        raise ValueError("pilot length does not match Y")
    if len(est.h_hat) != Y_normalized.shape[1]:
        raise ValueError("estimate length does not match Y")
    L = len(a_e)
    Y_breve = Y_normalized - np.outer(a_e, est.h_hat)
    return CleanedSignal(Y_breve=Y_breve, noise_model=noise_var + est.c_e / L)
