"""Eigenvalue ladders of the lossy tilted chain.

The infinite-chain spectrum splits into two interleaved ladders: one on the
even grid 2nF with fixed imaginary part Im(lambda), one on the odd grid
(2n+1)F with imaginary part -Im(lambda) - 2*gamma.  Finite open chains add
edge eigenvalues that are removed here by a two-size convergence filter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import LatticeSpec, build_effective_hamiltonian, uniform_gamma

__all__ = [
    "LadderSpectrum",
    "LadderStructureError",
    "LadderConsistencyError",
    "converged_spectrum",
    "extract_ladders",
]


class LadderStructureError(RuntimeError):
    """Imaginary parts do not organise into two levels."""


class LadderConsistencyError(RuntimeError):
    """Two levels found but they violate the pairing constraint."""


@dataclass
class LadderSpectrum:
    """Two-ladder decomposition of a converged spectrum."""

    im_lambda: float
    ladder0: np.ndarray  # energies 2nF + i*Im(lambda) for the observed n
    ladder1: np.ndarray  # energies (2n+1)F - i*Im(lambda) - 2i*gamma
    raw_converged: np.ndarray


def _greedy_match(large: np.ndarray, small: np.ndarray, tol: float) -> np.ndarray:
    """Eigenvalues of `large` having an unused partner in `small` within tol."""
    if large.size == 0 or small.size == 0:
        return np.array([], dtype=complex)
    dist = np.abs(large[:, None] - small[None, :])
    order = np.argsort(dist, axis=None)
    used_l = np.zeros(large.size, dtype=bool)
    used_s = np.zeros(small.size, dtype=bool)
    keep = []
    for flat in order:
        i, j = divmod(flat, small.size)
        if dist[i, j] > tol:
            break
        if used_l[i] or used_s[j]:
            continue
        used_l[i] = used_s[j] = True
        keep.append(large[i])
    return np.array(keep, dtype=complex)


def converged_spectrum(spec: LatticeSpec, L_small: int, L_large: int, tol: float) -> np.ndarray:
    """Eigenvalues of the chain that are stable against growing the lattice.

    Diagonalises the effective Hamiltonian at half-widths L_small and
    L_large, keeps the large-lattice eigenvalues with a partner within tol
    (greedy nearest-neighbour matching, one partner each), and restricts to
    the central window |Re E| <= F*L_small/2 to cut the tilted-edge region.
    The window is skipped for F = 0 where no such region exists.
    """
    if not L_small < L_large:
        raise ValueError("need L_small < L_large")
    if tol <= 0:
        raise ValueError("tol must be positive")
    gamma = uniform_gamma(spec)
    eig_small = np.linalg.eigvals(
        build_effective_hamiltonian(LatticeSpec.uniform(L_small, spec.tilt, gamma))
    )
    eig_large = np.linalg.eigvals(
        build_effective_hamiltonian(LatticeSpec.uniform(L_large, spec.tilt, gamma))
    )
    keep = _greedy_match(eig_large, eig_small, tol)
    if spec.tilt > 0 and keep.size:
        keep = keep[np.abs(keep.real) <= spec.tilt * L_small / 2]
    order = np.lexsort((keep.imag, keep.real))
    return keep[order]


def _two_means(values: np.ndarray):
    """Optimal 1-d split of sorted values into two clusters (min SSE)."""
    v = np.sort(values)
    if v.size == 1:
        return v, np.array([]), float(v[0]), float(v[0])
    best = None
    for s in range(1, v.size):
        a, b = v[:s], v[s:]
        sse = ((a - a.mean()) ** 2).sum() + ((b - b.mean()) ** 2).sum()
        if best is None or sse < best[0]:
            best = (sse, s)
    s = best[1]
    return v[:s], v[s:], float(v[:s].mean()), float(v[s:].mean())


def extract_ladders(eigs, F: float, gamma: float, tol: float) -> LadderSpectrum:
    """Organise eigenvalues into the two-ladder structure.

    Clusters the imaginary parts into two groups, snaps the real parts onto
    the grid {n*F}, identifies the ladder carrying Im(lambda) by the parity
    of n, and validates the pairing Im0 + Im1 = -2*gamma within tol.
    """
    eigs = np.asarray(eigs, dtype=complex)
    if eigs.size == 0:
        raise ValueError("need a nonempty eigenvalue list")
    if F <= 0:
        raise ValueError("F must be positive")

    lo, hi, c_lo, c_hi = _two_means(eigs.imag)
    spread = max(
        np.abs(lo - c_lo).max() if lo.size else 0.0,
        np.abs(hi - c_hi).max() if hi.size else 0.0,
    )
    if spread > tol:
        raise LadderStructureError(
            f"ladder structure not found: imaginary parts spread {spread:.3e} exceeds tol"
        )

    n = np.round(eigs.real / F).astype(int)
    grid_residual = np.abs(eigs.real - n * F)
    if grid_residual.max() > tol:
        raise LadderStructureError(
            f"ladder structure not found: real parts off the F-grid by {grid_residual.max():.3e}"
        )

    even = n % 2 == 0
    if not even.any() or even.all():
        # only one parity present; identify Im(lambda) from it directly
        im0 = float(eigs.imag[even].mean()) if even.any() else -float(eigs.imag.mean()) - 2 * gamma
    elif abs(c_hi - c_lo) <= tol:
        im0 = float(eigs.imag[even].mean())
    else:
        im_even = float(eigs.imag[even].mean())
        im_odd = float(eigs.imag[~even].mean())
        if np.abs(eigs.imag[even] - im_even).max() > tol or np.abs(eigs.imag[~even] - im_odd).max() > tol:
            raise LadderConsistencyError("imaginary-part clusters do not align with the grid parity")
        im0 = im_even
        if abs(im_even + im_odd + 2 * gamma) > tol:
            raise LadderConsistencyError(
                f"pairing constraint violated: Im0 + Im1 = {im_even + im_odd:.3e}, expected {-2 * gamma:.3e}"
            )

    n0 = np.unique(n[even]) if even.any() else np.array([], dtype=int)
    n1 = np.unique(n[~even]) if (~even).any() else np.array([], dtype=int)
    ladder0 = n0 * F + 1j * im0
    ladder1 = n1 * F + 1j * (-im0 - 2 * gamma)
    return LadderSpectrum(im_lambda=im0, ladder0=ladder0, ladder1=ladder1, raw_converged=eigs)
