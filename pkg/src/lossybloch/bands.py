"""Complex Bloch bands of the staggered-loss chain.

Covers the linear two-band dispersion with its exceptional points, the
analytic nonlinear Bloch states of the interacting chain, and the 4x4
linear-stability (Bogoliubov-de Gennes) spectrum around those states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "BandPoint",
    "NonlinearSolution",
    "NonlinearBandPoint",
    "StabilitySpectrum",
    "bloch_hamiltonian",
    "dispersion",
    "band_sqrt",
    "band_eigenvectors",
    "exceptional_points_linear",
    "exceptional_points_nonlinear",
    "nonlinear_bloch_point",
    "nonlinear_band_sweep",
    "stationary_residual",
    "bdg_matrix",
    "stability_spectrum",
]

EP_TOL = 1e-12  # |2|cos k| - threshold| below this counts as sitting on an EP
STATIONARY_TOL = 1e-10
STABILITY_TOL = 1e-10


# ---------------------------------------------------------------------------
# linear bands
# ---------------------------------------------------------------------------

@dataclass
class BandPoint:
    k: float
    E_plus: complex
    E_minus: complex


def band_sqrt(k, gamma):
    """Principal root of 4cos^2(k) - gamma^2, promoted to +i*sqrt(|.|) when negative."""
    rad = 4.0 * np.cos(k) ** 2 - gamma ** 2
    rad = np.asarray(rad, dtype=float)
    out = np.where(rad >= 0, np.sqrt(np.abs(rad)) + 0j, 1j * np.sqrt(np.abs(rad)))
    return out if out.ndim else complex(out)


def bloch_hamiltonian(k: float, gamma: float) -> np.ndarray:
    """2x2 momentum-space Hamiltonian of the even/odd unit cell."""
    ck = 2.0 * np.cos(k)
    return np.array(
        [[-ck - 1j * gamma, 1j * gamma], [1j * gamma, ck - 1j * gamma]], dtype=complex
    )


def _exact_sum_pair(a: float, c: float):
    """(a', x) within one ulp of (a, c - a) such that fl(a' + x) == c.

    Rounding ties can make c unreachable from a given a, so a itself may be
    nudged by one ulp as well.
    """
    for aa in (a, np.nextafter(a, -np.inf), np.nextafter(a, np.inf)):
        x = c - aa
        for cand in (x, np.nextafter(x, -np.inf), np.nextafter(x, np.inf)):
            if aa + cand == c:
                return float(aa), float(cand)
    return a, c - a


def dispersion(k: float, gamma: float) -> BandPoint:
    """Complex band energies E_pm = -i*gamma +- sqrt(4cos^2 k - gamma^2).

    The branch follows the explicit formula (not eigenvalue sorting), so each
    label is continuous in k away from the exceptional points.  E_minus is
    placed on the representable value (within one ulp of the formula) that
    makes the trace identity E_plus + E_minus == -2i*gamma hold bit-exactly.
    """
    s = band_sqrt(k, gamma)
    E_plus = -1j * gamma + s
    im_p, im_m = _exact_sum_pair(E_plus.imag, -2.0 * gamma)
    return BandPoint(k=k, E_plus=complex(E_plus.real, im_p),
                     E_minus=complex(-E_plus.real, im_m))


def band_eigenvectors(k: float, gamma: float):
    """Normalised right eigenvectors (R_plus, R_minus) of the Bloch Hamiltonian.

    The Hamiltonian is complex symmetric, so the matching left eigenvectors
    are plain transposes and R_plus . R_minus = 0 without conjugation.  Two
    algebraic forms per band are tried and the better-conditioned one kept;
    exactly at an EP the pair degenerates.
    """
    d = 2.0 * np.cos(k)
    s = band_sqrt(k, gamma)
    cands_p = (np.array([1j * gamma, d + s]), np.array([d - s, -1j * gamma]))
    cands_m = (np.array([1j * gamma, d - s]), np.array([d + s, -1j * gamma]))
    Rp = max(cands_p, key=lambda v: float(np.abs(v).sum()))
    Rm = max(cands_m, key=lambda v: float(np.abs(v).sum()))
    return Rp / np.linalg.norm(Rp), Rm / np.linalg.norm(Rm)


def exceptional_points_linear(gamma: float) -> np.ndarray:
    """All k in [-pi, pi] where the two bands coalesce (2|cos k| = gamma)."""
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    if gamma > 2:
        return np.array([])
    a = np.arccos(gamma / 2.0)
    ks = {a, -a, np.pi - a, a - np.pi}
    return np.array(sorted(ks))


# ---------------------------------------------------------------------------
# nonlinear Bloch states
# ---------------------------------------------------------------------------

@dataclass
class NonlinearSolution:
    """One stationary state of the nonlinear two-level system at fixed k."""

    z: float
    v: float
    A: complex
    B: complex
    mu: complex
    family: str  # "balanced" (z = 0) or "imbalanced" (z = +-sqrt(...))
    ep_class: str = "none"  # "none" | "EP2" | "EP3"


@dataclass
class NonlinearBandPoint:
    k: float
    solutions: list


def _state_from_zv(z, v):
    A = np.sqrt((1.0 + z) / 2.0) * np.exp(-1j * v)
    B = np.sqrt((1.0 - z) / 2.0) * np.exp(1j * v)
    return A, B


def _canonical_phase(v):
    """Map v into (-pi/2, pi/2]; v and v + pi label the same state."""
    v = (v + np.pi / 2) % np.pi - np.pi / 2
    if v == -np.pi / 2:
        v = np.pi / 2
    return v


def stationary_residual(sol: NonlinearSolution, k: float, g: float, gamma: float) -> float:
    """Max row residual of the stationary two-level system for this solution."""
    ck = 2.0 * np.cos(k)
    A, B, mu = sol.A, sol.B, sol.mu
    r1 = g * abs(A) ** 2 * A - ck * B - mu * A
    r2 = -ck * A + (g * abs(B) ** 2 - 2j * gamma) * B - mu * B
    return float(max(abs(r1), abs(r2)))


def exceptional_points_nonlinear(g: float, gamma: float):
    """EP abscissae in [-pi, pi]: balanced pair at 2|cos k| = gamma, and the
    nonlinear threshold 2|cos k| = sqrt(c^2 + gamma^2) where it is reachable."""
    c = g / 2.0
    out = {"balanced": exceptional_points_linear(gamma) if gamma > 0 else np.array([]),
           "threshold": np.array([])}
    r = np.sqrt(c * c + gamma * gamma)
    if 0 < r <= 2:
        a = np.arccos(r / 2.0)
        out["threshold"] = np.array(sorted({a, -a, np.pi - a, a - np.pi}))
    return out


def nonlinear_bloch_point(k: float, g: float, gamma: float, ep_tol: float = EP_TOL) -> NonlinearBandPoint:
    """All stationary Bloch states at quasimomentum k.

    Two families exist: balanced states with equal sublattice weight (z = 0,
    present for 2|cos k| >= gamma) and imbalanced states with
    z = +-sqrt(1 - 4cos^2 k/(c^2 + gamma^2)) (present for
    4cos^2 k <= c^2 + gamma^2, c = g/2).  Coalescences at the region
    boundaries are emitted as single records tagged EP2/EP3.

    The imbalanced phase is branch-dependent: -arctan(gamma/c)/2 for
    cos k < 0 as printed in the source analysis, and pi/2 minus that for
    cos k > 0, which is what the stationary equations themselves require
    (the corresponding eigenvalue is mu = 2c + i*gamma*(z - 1) on both
    sides).  At the cos k > 0 threshold the merged imbalanced state
    coincides with the upper balanced state as well, so the coalescence is
    triple there too and the point is tagged EP3.
    """
    if not -np.pi - 1e-9 <= k <= np.pi + 1e-9:
        raise ValueError("k must lie in [-pi, pi]")
    if g < 0:
        raise ValueError("g must be nonnegative")
    c = g / 2.0
    ck = np.cos(k)

    # k = +-pi/2: the general phase formulas are singular; the solution set
    # collapses to the two fully polarised states.
    if abs(ck) < ep_tol:
        sols = [
            NonlinearSolution(z=1.0, v=0.0, A=1.0 + 0j, B=0.0 + 0j, mu=complex(g),
                              family="imbalanced"),
            NonlinearSolution(z=-1.0, v=0.0, A=0.0 + 0j, B=1.0 + 0j,
                              mu=g - 2j * gamma, family="imbalanced"),
        ]
        return NonlinearBandPoint(k=k, solutions=sols)

    sols = []
    sign = 1.0 if ck > 0 else -1.0
    s_balanced = gamma / (2.0 * ck)
    at_balanced_ep = abs(2.0 * abs(ck) - gamma) < ep_tol
    r2 = c * c + gamma * gamma
    at_threshold = r2 > 0 and abs(2.0 * abs(ck) - np.sqrt(r2)) < ep_tol

    # balanced family: z = 0, sin(2v) = gamma / (2 cos k)
    if abs(s_balanced) <= 1.0 or at_balanced_ep:
        root = float(np.sqrt(max(4.0 * ck * ck - gamma * gamma, 0.0)))
        v1 = 0.5 * np.arcsin(np.clip(s_balanced, -1.0, 1.0))
        mu_lo = -sign * root + c - 1j * gamma
        mu_hi = +sign * root + c - 1j * gamma
        if at_balanced_ep:
            vc = _canonical_phase(v1)
            A, B = _state_from_zv(0.0, vc)
            sols.append(NonlinearSolution(0.0, vc, A, B, c - 1j * gamma,
                                          "balanced", "EP2"))
        else:
            for v, mu in ((v1, mu_lo), (np.pi / 2 - v1, mu_hi)):
                vc = _canonical_phase(v)
                A, B = _state_from_zv(0.0, vc)
                sols.append(NonlinearSolution(0.0, vc, A, B, mu, "balanced"))

    # imbalanced family: z = +-sqrt(1 - 4cos^2 k / (c^2 + gamma^2))
    if r2 > 0 and (4.0 * ck * ck <= r2 or at_threshold):
        v_im = -0.5 * np.arctan2(gamma, c)
        if ck > 0:
            v_im = np.pi / 2 + v_im
        v_im = _canonical_phase(v_im)
        if at_threshold:
            A, B = _state_from_zv(0.0, v_im)
            merged = NonlinearSolution(0.0, v_im, A, B, 2 * c + 1j * gamma * (0.0 - 1.0),
                                       "imbalanced", "EP3")
            # the merged state absorbs the balanced state it coincides with
            sols = [s for s in sols
                    if not (s.family == "balanced" and abs(s.mu - merged.mu) < 1e-9
                            and abs(_canonical_phase(s.v - merged.v)) < 1e-9)]
            sols.append(merged)
        else:
            z = float(np.sqrt(max(1.0 - 4.0 * ck * ck / r2, 0.0)))
            for zz in (z, -z):
                A, B = _state_from_zv(zz, v_im)
                sols.append(NonlinearSolution(zz, v_im, A, B,
                                              2 * c + 1j * gamma * (zz - 1.0), "imbalanced"))

    return NonlinearBandPoint(k=k, solutions=sols)


def nonlinear_band_sweep(g: float, gamma: float, k_grid) -> list:
    """Solution sets over a k grid, with the exact EP abscissae inserted."""
    k_grid = np.asarray(k_grid, dtype=float)
    if k_grid.size and (k_grid.min() < -np.pi - 1e-9 or k_grid.max() > np.pi + 1e-9):
        raise ValueError("grid must lie within [-pi, pi]")
    eps = exceptional_points_nonlinear(g, gamma)
    ks = set(np.round(k_grid, 15).tolist())
    for group in eps.values():
        for kk in group:
            if k_grid.size and k_grid.min() - 1e-12 <= kk <= k_grid.max() + 1e-12:
                ks.add(float(kk))
    return [nonlinear_bloch_point(k, g, gamma) for k in sorted(ks)]


# ---------------------------------------------------------------------------
# Bogoliubov-de Gennes stability
# ---------------------------------------------------------------------------

@dataclass
class StabilitySpectrum:
    omegas: np.ndarray  # 4 complex perturbation frequencies
    max_im: float
    stable: bool


def bdg_matrix(sol: NonlinearSolution, k: float, g: float, gamma: float) -> np.ndarray:
    """4x4 linearisation matrix around a stationary state.

    Requires the input to actually be stationary (residual below the module
    bound); the blocks couple the co-rotating and conjugate perturbation
    components through the projector orthogonal to the state.
    """
    if stationary_residual(sol, k, g, gamma) > STATIONARY_TOL:
        raise ValueError("solution does not satisfy the stationary residual bound")
    A, B, mu = sol.A, sol.B, sol.mu
    c = g / 2.0
    ck = 2.0 * np.cos(k)
    H0 = np.array([[g * abs(A) ** 2, -ck], [-ck, g * abs(B) ** 2 - 2j * gamma]], dtype=complex)
    P = np.array([[1 - abs(A) ** 2, -A * np.conj(B)], [-np.conj(A) * B, 1 - abs(B) ** 2]],
                 dtype=complex)
    Pb = P.conj()
    I2 = np.eye(2)
    M11 = H0 - mu * I2 + c * P @ np.array([[abs(A) ** 2, -A * np.conj(B)],
                                           [-np.conj(A) * B, abs(B) ** 2]]) @ P
    M12 = c * P @ np.array([[A ** 2, -A * B], [-A * B, B ** 2]]) @ Pb
    M21 = -c * Pb @ np.array([[np.conj(A) ** 2, -np.conj(A) * np.conj(B)],
                              [-np.conj(A) * np.conj(B), np.conj(B) ** 2]]) @ P
    M22 = -H0.conj() + np.conj(mu) * I2 - c * Pb @ np.array([[abs(A) ** 2, -np.conj(A) * B],
                                                             [-A * np.conj(B), abs(B) ** 2]]) @ Pb
    return np.block([[M11, M12], [M21, M22]])


def stability_spectrum(sol: NonlinearSolution, k: float, g: float, gamma: float,
                       stability_tol: float = STABILITY_TOL) -> StabilitySpectrum:
    """Perturbation frequencies of a stationary state and its stability verdict.

    Stable means no exponentially growing perturbation: max Im(omega) at or
    below stability_tol.  Marginal purely-real frequencies (including double
    zeros) count as stable.
    """
    M = bdg_matrix(sol, k, g, gamma)
    omegas = np.linalg.eigvals(M)
    omegas = omegas[np.lexsort((omegas.imag, omegas.real))]
    max_im = float(omegas.imag.max())
    return StabilitySpectrum(omegas=omegas, max_im=max_im, stable=max_im <= stability_tol)
