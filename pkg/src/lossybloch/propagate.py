"""Wavefunction propagation on the lossy chain.

Single-particle states follow the linear non-Hermitian Schroedinger equation;
mean-field order parameters pick up the cubic term g*|psi_j|^2*psi_j on top.
Both are integrated with an adaptive embedded Runge-Kutta 4(5) pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .bands import nonlinear_bloch_point
from .lattice import LatticeSpec, loss_pattern

__all__ = [
    "WaveFunction",
    "GaussianPacketSpec",
    "DensityTrace",
    "make_gaussian",
    "nonlinear_bloch_packet",
    "evolve_single_particle",
    "evolve_mean_field",
    "norm_derivative_check",
    "density_autocorrelation",
    "center_of_mass",
    "beam_width",
]

RTOL = 1e-9
ATOL = 1e-11
SPILL_FRACTION = 1e-3  # norm share within 3 sites of an edge that flags a run
EDGE_WIDTH = 3


@dataclass
class WaveFunction:
    """Complex amplitudes over the chain sites at one instant."""

    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclass
class GaussianPacketSpec:
    """Gaussian beam parameters: centre site, carrier momentum, width."""

    x0: float = 0.0
    k0: float = 0.0
    sigma: float = 1.0


@dataclass
class DensityTrace:
    """Sampled trajectory: densities, renormalised densities and norms.

    renormalised rows are divided by the instantaneous norm; rows whose norm
    has fully decayed are emitted as zeros and flagged.  boundary_spill is
    set once at least SPILL_FRACTION of the remaining norm sits within
    EDGE_WIDTH sites of an edge at any sampled time.
    """

    times: np.ndarray
    psi: np.ndarray  # raw complex trajectory, shape (n_times, M)
    site_density: np.ndarray
    renormalised_density: np.ndarray
    total_norm: np.ndarray
    sites: np.ndarray
    boundary_spill: bool = False
    zero_norm_rows: bool = False


def make_gaussian(spec: LatticeSpec, packet: GaussianPacketSpec) -> WaveFunction:
    """Normalised Gaussian wave packet exp(-(j-x0)^2/2sigma^2 + i*k0*(j-x0))."""
    if packet.sigma <= 0:
        raise ValueError("sigma must be positive")
    j = spec.sites
    amp = np.exp(-((j - packet.x0) ** 2) / (2.0 * packet.sigma ** 2)
                 + 1j * packet.k0 * (j - packet.x0))
    amp /= np.linalg.norm(amp)
    return WaveFunction(amp)


def nonlinear_bloch_packet(spec: LatticeSpec, band: str, k: float, x0: float,
                           sigma: float, g: float | None = None) -> WaveFunction:
    """Stationary nonlinear Bloch state under a Gaussian envelope.

    band selects from the balanced family at quasimomentum k: "lower" is the
    state with the smaller Re(mu), "upper" the larger.  g defaults to the
    lattice's mean-field interaction.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if g is None:
        g = spec.g
    from .lattice import uniform_gamma

    gamma = uniform_gamma(spec)
    point = nonlinear_bloch_point(k, g, gamma)
    balanced = [s for s in point.solutions if s.family == "balanced"]
    if not balanced:
        raise ValueError(f"no balanced Bloch state exists at k = {k}")
    balanced.sort(key=lambda s: s.mu.real)
    sol = balanced[0] if band == "lower" else balanced[-1]
    if band not in ("lower", "upper"):
        raise ValueError("band must be 'lower' or 'upper'")
    j = spec.sites
    cell = np.where(j % 2 == 0, sol.A, sol.B)
    amp = cell * np.exp(1j * k * j) * np.exp(-((j - x0) ** 2) / (2.0 * sigma ** 2))
    amp /= np.linalg.norm(amp)
    return WaveFunction(amp)


def _integrate(spec: LatticeSpec, psi0: WaveFunction, t_final, dt_out,
               g: float, rtol: float, atol: float) -> DensityTrace:
    if t_final <= 0:
        raise ValueError("t_final must be positive")
    if dt_out <= 0:
        raise ValueError("dt_out must be positive")
    j = spec.sites
    F = spec.tilt
    loss = loss_pattern(spec)

    def rhs(t, y):
        hop = np.zeros_like(y)
        hop[:-1] += y[1:]
        hop[1:] += y[:-1]
        nl = g * np.abs(y) ** 2 * y if g else 0.0
        return -1j * (-hop + F * j * y + nl) + loss * y

    n_out = int(np.floor(t_final / dt_out + 1e-9))
    times = dt_out * np.arange(n_out + 1)
    sol = solve_ivp(rhs, (0.0, float(times[-1])), psi0.amplitudes, t_eval=times,
                    rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(f"integration failed: {sol.message}")
    psi = sol.y.T
    density = np.abs(psi) ** 2
    norm = density.sum(axis=1)

    renorm = np.zeros_like(density)
    alive = norm > 1e-30
    renorm[alive] = density[alive] / norm[alive, None]
    edge = density[:, :EDGE_WIDTH].sum(axis=1) + density[:, -EDGE_WIDTH:].sum(axis=1)
    spill = bool(np.any(edge[alive] >= SPILL_FRACTION * norm[alive]))
    return DensityTrace(times=times, psi=psi, site_density=density,
                        renormalised_density=renorm, total_norm=norm, sites=j,
                        boundary_spill=spill, zero_norm_rows=bool(~alive.all()))


def evolve_single_particle(spec: LatticeSpec, psi0: WaveFunction, t_final, dt_out,
                           rtol: float = RTOL, atol: float = ATOL) -> DensityTrace:
    """Propagate a single-particle amplitude vector and sample its densities."""
    return _integrate(spec, psi0, t_final, dt_out, g=0.0, rtol=rtol, atol=atol)


def evolve_mean_field(spec: LatticeSpec, psi0: WaveFunction, t_final, dt_out,
                      rtol: float = RTOL, atol: float = ATOL) -> DensityTrace:
    """Propagate the order parameter of the lossy nonlinear lattice equation."""
    if not np.isfinite(spec.g):
        raise ValueError("spec.g must be finite")
    return _integrate(spec, psi0, t_final, dt_out, g=spec.g, rtol=rtol, atol=atol)


def norm_derivative_check(spec: LatticeSpec, psi: WaveFunction) -> float:
    """Analytic instantaneous d(norm)/dt implied by the loss pattern.

    Equals 2*sum_j gamma_j*((-1)^j - 1)*|psi_j|^2; the nonlinear term does
    not contribute.  Used to cross-check integrated norms.
    """
    return float(2.0 * np.sum(loss_pattern(spec) * np.abs(psi.amplitudes) ** 2))


def center_of_mass(density_row: np.ndarray, sites: np.ndarray) -> float:
    w = density_row.sum()
    if w <= 0:
        return np.nan
    return float((sites * density_row).sum() / w)


def beam_width(density_row: np.ndarray, sites: np.ndarray) -> float:
    """Root variance of the site distribution."""
    w = density_row.sum()
    if w <= 0:
        return np.nan
    com = (sites * density_row).sum() / w
    return float(np.sqrt(max((sites ** 2 * density_row).sum() / w - com ** 2, 0.0)))


def density_autocorrelation(trace: DensityTrace, t_min: float, t_max: float,
                            lags) -> np.ndarray:
    """Mean Pearson correlation of renormalised density patterns at given lags.

    For each lag tau, correlates rho(t) with rho(t + tau) averaged over all
    sampled t in [t_min, t_max - tau].  Lags must be (near) multiples of the
    sampling step.
    """
    dt = trace.times[1] - trace.times[0]
    lags = np.atleast_1d(np.asarray(lags, dtype=float))
    out = np.empty(lags.size)
    i_lo = int(np.ceil((t_min - 1e-9) / dt))
    for n, tau in enumerate(lags):
        m = int(round(tau / dt))
        if abs(m * dt - tau) > 1e-6 * dt * max(m, 1):
            raise ValueError(f"lag {tau} is not a multiple of the sampling step {dt}")
        i_hi = int(np.floor((t_max + 1e-9) / dt)) - m
        vals = []
        for i in range(i_lo, i_hi + 1):
            a = trace.renormalised_density[i]
            b = trace.renormalised_density[i + m]
            a = a - a.mean()
            b = b - b.mean()
            den = np.sqrt((a @ a) * (b @ b))
            if den > 0:
                vals.append((a @ b) / den)
        out[n] = np.mean(vals) if vals else np.nan
    return out
