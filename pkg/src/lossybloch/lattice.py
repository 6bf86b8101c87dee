"""Chain description and single-particle operator constructors.

The chain has M = 2L+1 sites indexed j = -L..L.  Every odd site loses
particles at rate gamma_j; even sites (including the centre j = 0) are
lossless.  Energies are dimensionless: the hopping J and hbar are both 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LatticeSpec",
    "build_effective_hamiltonian",
    "build_chiral_operator",
    "build_translation_operator",
    "loss_pattern",
    "uniform_gamma",
]

# Dimensionless unit convention used throughout the package.
J = 1.0
HBAR = 1.0


@dataclass
class LatticeSpec:
    """Static chain parameters.

    decay holds one nonnegative rate per site; only the odd-site entries
    enter the dynamics because the loss pattern factor (-1)^j - 1 vanishes
    on even sites.  g is the mean-field interaction (g = U * N0), U the
    per-pair interaction of the few-particle engine.
    """

    half_width: int
    tilt: float = 0.0
    decay: np.ndarray = field(default=None)
    g: float = 0.0
    U: float = 0.0

    def __post_init__(self):
        if self.half_width < 0 or int(self.half_width) != self.half_width:
            raise ValueError("half_width must be a nonnegative integer")
        if self.tilt < 0:
            raise ValueError("tilt must be nonnegative")
        if self.decay is None:
            self.decay = np.zeros(self.n_sites)
        self.decay = np.asarray(self.decay, dtype=float)
        if self.decay.shape != (self.n_sites,):
            raise ValueError(f"decay must have length M = {self.n_sites}")
        if np.any(self.decay < 0):
            raise ValueError("decay rates must be nonnegative")

    @property
    def n_sites(self) -> int:
        return 2 * self.half_width + 1

    @property
    def sites(self) -> np.ndarray:
        """Site indices j = -L..L."""
        return np.arange(-self.half_width, self.half_width + 1)

    @classmethod
    def uniform(cls, half_width, tilt=0.0, gamma=0.0, g=0.0, U=0.0):
        """Chain with the same decay rate gamma on every (odd) site."""
        if gamma < 0:
            raise ValueError("gamma must be nonnegative")
        M = 2 * half_width + 1
        return cls(half_width, tilt, np.full(M, float(gamma)), g, U)

    @classmethod
    def random_decay(cls, half_width, tilt, lo, hi, seed, g=0.0, U=0.0):
        """Chain with odd-site rates drawn uniformly from (lo, hi).

        The draw is seeded and ordered left to right, so a given seed is
        reproducible.  Even sites get rate 0 (they are lossless anyway).
        """
        if not (0 <= lo <= hi):
            raise ValueError("need 0 <= lo <= hi")
        rng = np.random.default_rng(seed)
        spec = cls.uniform(half_width, tilt, 0.0, g, U)
        odd = spec.sites % 2 != 0
        decay = np.zeros(spec.n_sites)
        decay[odd] = rng.uniform(lo, hi, int(odd.sum()))
        spec.decay = decay
        return spec


def loss_pattern(spec: LatticeSpec) -> np.ndarray:
    """Per-site loss coefficients gamma_j * ((-1)^j - 1); -2*gamma_j on odd j."""
    j = spec.sites
    return spec.decay * ((-1.0) ** j - 1.0)


def uniform_gamma(spec: LatticeSpec) -> float:
    """Return the common odd-site rate, or raise if the pattern is not uniform."""
    odd = spec.sites % 2 != 0
    rates = spec.decay[odd]
    if rates.size == 0:
        return 0.0
    if np.ptp(rates) > 1e-15:
        raise ValueError("decay pattern is not uniform on the odd sites")
    return float(rates[0])


def build_effective_hamiltonian(spec: LatticeSpec) -> np.ndarray:
    """Dense M x M non-Hermitian Hamiltonian of the open chain.

    Nearest-neighbour hopping -1, on-site energy F*j, and the anti-Hermitian
    on-site loss term i*gamma_j*((-1)^j - 1).  Hard-wall boundaries.
    """
    M = spec.n_sites
    H = np.zeros((M, M), dtype=complex)
    np.fill_diagonal(H, spec.tilt * spec.sites + 1j * loss_pattern(spec))
    idx = np.arange(M - 1)
    H[idx, idx + 1] = -1.0
    H[idx + 1, idx] = -1.0
    return H


def build_chiral_operator(spec: LatticeSpec) -> np.ndarray:
    """Signed site-reflection X with X[-j, j] = (-1)^j.

    X is real, symmetric and an involution; for a uniform loss pattern it
    anti-conjugates the effective Hamiltonian: X H^dag X = -H.
    """
    M = spec.n_sites
    L = spec.half_width
    X = np.zeros((M, M))
    for j in spec.sites:
        X[L - j, L + j] = (-1.0) ** j
    return X


def build_translation_operator(spec: LatticeSpec, m: int) -> np.ndarray:
    """Finite-lattice shift by m sites to the left: S[j-m, j] = 1.

    Rows shifted off the edge are dropped, so S_m is not unitary near the
    boundary; identities that hold on the infinite chain are recovered on
    the interior block |j| <= L - |m|.
    """
    L = spec.half_width
    if abs(m) > 2 * L:
        raise ValueError(f"|m| = {abs(m)} exceeds the lattice span 2L = {2 * L}")
    M = spec.n_sites
    S = np.zeros((M, M))
    for j in spec.sites:
        if -L <= j - m <= L:
            S[L + j - m, L + j] = 1.0
    return S
