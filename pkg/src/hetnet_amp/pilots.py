"""Pilot sequence generation.

All pilot columns are unit norm. The broadband user gets one column of an
orthonormal basis; the MTC strategies build their N sequences from the
remaining basis columns (sparse random combinations, or equal-magnitude
combinations of all of them), so every MTC pilot is exactly orthogonal to
the broadband pilot. The Bernoulli strategy is the non-orthogonal baseline.
"""

from dataclasses import dataclass
from enum import Enum
from math import comb

import numpy as np
from scipy.linalg import dft, hadamard


class PilotStrategy(str, Enum):
    PROPOSED_I = "proposed1"
    PROPOSED_II = "proposed2"
    BERNOULLI = "bernoulli"


class InfeasibleCollisionBound(ValueError):
    """No subset size meets the collision-probability target."""


@dataclass(frozen=True)
class PilotBasis:
    V: np.ndarray  # L x L, orthonormal columns
    L: int


@dataclass(frozen=True)
class CollisionBound:
    L: int
    xi: float
    z: int


@dataclass
class PilotSet:
    a_e: np.ndarray              # length L, unit norm
    A: np.ndarray                # L x N, unit-norm columns
    strategy: PilotStrategy
    embb_basis_index: int | None = None
    subsets: np.ndarray | None = None   # N x z basis indices (Proposed I)
    weights: np.ndarray | None = None   # per-device basis coefficients

    @property
    def L(self) -> int:
        return self.A.shape[0]

    @property
    def N(self) -> int:
        return self.A.shape[1]


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def orthogonal_basis(L: int) -> PilotBasis:
    """Orthonormal L x L basis: scaled Hadamard when L is a power of two,
    unitary DFT otherwise."""
    if L < 2:
        raise ValueError(f"pilot length must be >= 2, got {L}")
    if _is_pow2(L):
        V = hadamard(L).astype(np.complex128) / np.sqrt(L)
    else:
        V = dft(L, scale="sqrtn").astype(np.complex128)
    return PilotBasis(V=V, L=L)


def min_subset_size(L: int, xi: float) -> CollisionBound:
    """Smallest z with 1/C(L-1, z) <= xi, i.e. collision probability of two
    devices drawing the same z-subset of the L-1 free basis columns."""
    if not 0.0 < xi < 1.0:
        raise ValueError(f"xi must be in (0,1), got {xi}")
    if L < 3:
        raise ValueError(f"need L >= 3, got {L}")
    n = L - 1
    target = 1.0 / xi
    for z in range(1, n // 2 + 1):
        if comb(n, z) >= target:
            return CollisionBound(L=L, xi=xi, z=z)
    raise InfeasibleCollisionBound(
        f"max C({n},{n // 2}) = {comb(n, n // 2)} < 1/xi = {target:g}"
    )


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def gen_pilot_I(
    basis: PilotBasis,
    embb_index: int,
    N: int,
    xi: float,
    rng: np.random.Generator,
) -> PilotSet:
    """Each device combines a random z-subset of the non-broadband basis
    columns with i.i.d. complex Gaussian weights, normalized to unit norm."""
    L = basis.L
    if not 0 <= embb_index < L:
        raise ValueError(f"embb_index {embb_index} out of range for L={L}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    z = min_subset_size(L, xi).z
    free = np.delete(np.arange(L), embb_index)

    subsets = np.empty((N, z), dtype=np.int64)
    for n in range(N):
        subsets[n] = np.sort(rng.choice(free, size=z, replace=False))
    w = _complex_gaussian(rng, (N, z))
    # orthonormal basis: ||V[:, S] w|| = ||w||
    w /= np.linalg.norm(w, axis=1, keepdims=True)

    A = np.zeros((L, N), dtype=np.complex128)
    for n in range(N):
        A[:, n] = basis.V[:, subsets[n]] @ w[n]
    return PilotSet(
        a_e=basis.V[:, embb_index].copy(),
        A=A,
        strategy=PilotStrategy.PROPOSED_I,
        embb_basis_index=embb_index,
        subsets=subsets,
        weights=w,
    )


def gen_pilot_II(
    basis: PilotBasis,
    embb_index: int,
    N: int,
    rng: np.random.Generator,
) -> PilotSet:
    """Each device combines all L-1 non-broadband basis columns with
    equal-magnitude weights; random per-device signs keep devices distinct."""
    L = basis.L
    if not 0 <= embb_index < L:
        raise ValueError(f"embb_index {embb_index} out of range for L={L}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    free = np.delete(np.arange(L), embb_index)
    signs = rng.choice([1.0, -1.0], size=(N, L - 1))
    w = signs.astype(np.complex128) / np.sqrt(L - 1)
    A = basis.V[:, free] @ w.T
    return PilotSet(
        a_e=basis.V[:, embb_index].copy(),
        A=A,
        strategy=PilotStrategy.PROPOSED_II,
        embb_basis_index=embb_index,
        weights=w,
    )


def gen_bernoulli(L: int, N: int, rng: np.random.Generator) -> PilotSet:
    """Baseline: every pilot entry (broadband included) i.i.d. +-1/sqrt(L).
    No orthogonality between the broadband pilot and the MTC matrix."""
    if L < 1 or N < 1:
        raise ValueError(f"need L,N >= 1, got L={L}, N={N}")
    ents = rng.choice([1.0, -1.0], size=(L, N + 1)) / np.sqrt(L)
    ents = ents.astype(np.complex128)
    return PilotSet(a_e=ents[:, 0], A=ents[:, 1:], strategy=PilotStrategy.BERNOULLI)


def make_pilots(
    strategy: PilotStrategy,
    L: int,
    N: int,
    xi: float,
    rng: np.random.Generator,
    embb_index: int = 0,
) -> PilotSet:
    """Dispatch helper used by the experiment harness."""
    strategy = PilotStrategy(strategy)
    if strategy is PilotStrategy.BERNOULLI:
        return gen_bernoulli(L, N, rng)
    basis = orthogonal_basis(L)
    if strategy is PilotStrategy.PROPOSED_I:
        return gen_pilot_I(basis, embb_index, N, xi, rng)
    return gen_pilot_II(basis, embb_index, N, rng)
