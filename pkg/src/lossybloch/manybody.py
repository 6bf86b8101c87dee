"""Exact few-boson engine for the lossy chain (at most two particles).

The Fock space stacks the particle-number sectors N = N_max..0; losses only
move population down the stack, so the master equation never builds
coherences between sectors that start empty.  Pure condensate-like initial
states are propagated in a factored form (one amplitude vector for the top
sector plus the smaller matrices it feeds), which is the same equation of
motion organised block-wise; general density matrices are integrated as a
whole.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp

from .lattice import LatticeSpec, loss_pattern

__all__ = [
    "FockBasis",
    "DensityMatrix",
    "BECState",
    "LindbladTrace",
    "build_fock_basis",
    "build_bh_hamiltonian",
    "build_effective_bh_hamiltonian",
    "make_bec_state",
    "evolve_lindblad",
    "spdm",
]

TRACE_TOL = 1e-8
POSITIVITY_TOL = -1e-8
SPILL_FRACTION = 1e-3
EDGE_WIDTH = 3


@dataclass
class FockBasis:
    """Occupation-number basis over all sectors N = 0..n_max.

    Sectors are ordered by particle number descending, states inside a
    sector lexicographically.  dim = sum_N C(N + M - 1, M - 1); for
    n_max = 2 that is 1 + M + M(M+1)/2.
    """

    n_sites: int
    n_max: int
    states: tuple
    index: dict
    sector_slices: dict

    def __post_init__(self):
        self._aops = {}
        occ = np.array(self.states)
        self._occupations = occ  # (dim, M)

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def occupations(self) -> np.ndarray:
        return self._occupations

    def annihilation(self, site: int) -> sp.csr_matrix:
        """Sparse a_site over the full basis (matrix elements sqrt(n))."""
        if site not in self._aops:
            rows, cols, vals = [], [], []
            for n, s in enumerate(self.states):
                if s[site] > 0:
                    t = list(s)
                    t[site] -= 1
                    rows.append(self.index[tuple(t)])
                    cols.append(n)
                    vals.append(np.sqrt(s[site]))
            self._aops[site] = sp.csr_matrix((vals, (rows, cols)),
                                             shape=(self.dim, self.dim))
        return self._aops[site]

    def creation(self, site: int) -> sp.csr_matrix:
        """Truncated a^dag_site: transitions out of the top sector are dropped."""
        return self.annihilation(site).T.tocsr()


def build_fock_basis(M: int, N_max: int) -> FockBasis:
    if M < 1:
        raise ValueError("need at least one site")
    if N_max not in (1, 2):
        raise ValueError("only N_max in {1, 2} is supported")
    states = []
    slices = {}
    pos = 0
    for N in range(N_max, -1, -1):
        sector = []
        for sites in combinations_with_replacement(range(M), N):
            occ = [0] * M
            for s in sites:
                occ[s] += 1
            sector.append(tuple(occ))
        sector.sort()
        slices[N] = slice(pos, pos + len(sector))
        pos += len(sector)
        states.extend(sector)
    index = {s: n for n, s in enumerate(states)}
    return FockBasis(n_sites=M, n_max=N_max, states=tuple(states), index=index,
                     sector_slices=slices)


def _hamiltonian(spec: LatticeSpec, basis: FockBasis, effective: bool) -> sp.csr_matrix:
    if basis.n_sites != spec.n_sites:
        raise ValueError("basis was built for a different lattice size")
    M = spec.n_sites
    jsite = spec.sites
    loss = loss_pattern(spec)
    rows, cols, vals = [], [], []
    for n, s in enumerate(basis.states):
        diag = 0.0 + 0.0j
        for l in range(M):
            nl = s[l]
            if nl:
                diag += spec.tilt * jsite[l] * nl + spec.U / 2.0 * nl * (nl - 1)
                if effective:
                    diag += 1j * loss[l] * nl
        if diag != 0:
            rows.append(n)
            cols.append(n)
            vals.append(diag)
        for l in range(M - 1):
            if s[l] > 0:  # a^dag_{l+1} a_l
                t = list(s)
                t[l] -= 1
                t[l + 1] += 1
                rows.append(basis.index[tuple(t)])
                cols.append(n)
                vals.append(-np.sqrt(s[l] * (s[l + 1] + 1)))
            if s[l + 1] > 0:  # a^dag_l a_{l+1}
                t = list(s)
                t[l + 1] -= 1
                t[l] += 1
                rows.append(basis.index[tuple(t)])
                cols.append(n)
                vals.append(-np.sqrt(s[l + 1] * (s[l] + 1)))
    return sp.csr_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim))


def build_bh_hamiltonian(spec: LatticeSpec, basis: FockBasis) -> sp.csr_matrix:
    """Hermitian chain Hamiltonian: hopping, pair interaction U, tilt F."""
    return _hamiltonian(spec, basis, effective=False)


def build_effective_bh_hamiltonian(spec: LatticeSpec, basis: FockBasis) -> sp.csr_matrix:
    """Non-Hermitian Hamiltonian including the on-site loss term."""
    return _hamiltonian(spec, basis, effective=True)


@dataclass
class DensityMatrix:
    """State over a FockBasis; Hermitian, unit trace, positive."""

    rho: np.ndarray
    basis: FockBasis
    time: float = 0.0

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=complex)
        if self.rho.shape != (self.basis.dim, self.basis.dim):
            raise ValueError("density matrix does not match the basis dimension")

    def validate(self, herm_tol=1e-12, trace_tol=1e-10, eig_tol=-1e-10):
        if np.abs(self.rho - self.rho.conj().T).max() > herm_tol:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(self.rho).real - 1.0) > trace_tol:
            raise ValueError("density matrix trace is not 1")
        if np.linalg.eigvalsh(self.rho).min() < eig_tol:
            raise ValueError("density matrix is not positive")
        return self


@dataclass
class BECState:
    """All N0 particles sharing one orbital, expanded over the Fock basis."""

    psi: np.ndarray
    n_particles: int
    vector: np.ndarray
    basis: FockBasis


def make_bec_state(basis: FockBasis, psi, N0: int) -> BECState:
    """Expand (sum_j psi_j a^dag_j)^{N0} |vac> / sqrt(N0!) in the basis."""
    amps = np.asarray(getattr(psi, "amplitudes", psi), dtype=complex)
    if amps.shape != (basis.n_sites,):
        raise ValueError("orbital length does not match the lattice")
    if N0 > basis.n_max:
        raise ValueError(f"N0 = {N0} exceeds the basis cutoff {basis.n_max}")
    if abs(np.sum(np.abs(amps) ** 2) - 1.0) > 1e-12:
        raise ValueError("orbital must be normalised to unity")
    vec = np.zeros(basis.dim, dtype=complex)
    M = basis.n_sites
    if N0 == 1:
        for l in range(M):
            occ = [0] * M
            occ[l] = 1
            vec[basis.index[tuple(occ)]] = amps[l]
    elif N0 == 2:
        for i in range(M):
            for k in range(i, M):
                occ = [0] * M
                occ[i] += 1
                occ[k] += 1
                coeff = amps[i] ** 2 if i == k else np.sqrt(2.0) * amps[i] * amps[k]
                vec[basis.index[tuple(occ)]] = coeff
    else:
        raise ValueError("only N0 in {1, 2} is supported")
    return BECState(psi=amps, n_particles=N0, vector=vec, basis=basis)


@dataclass
class LindbladTrace:
    """Observable traces of a master-equation run."""

    times: np.ndarray
    site_density: np.ndarray  # <n_j>(t), shape (n_times, M)
    renormalised_density: np.ndarray
    total_number: np.ndarray
    sector_population: dict  # N -> population trace
    trace_deviation: np.ndarray
    min_eigenvalue: np.ndarray
    hermiticity_error: np.ndarray
    positivity_flag: bool
    boundary_spill: bool
    sites: np.ndarray
    final_rho: DensityMatrix | None = None


def _jump_coefficients(spec: LatticeSpec) -> np.ndarray:
    """Rate in front of a_j rho a_j^dag; +4*gamma_j on odd sites, 0 on even."""
    return -2.0 * loss_pattern(spec)


def _observables_from_rho(rho, basis):
    occ = basis.occupations  # (dim, M)
    pops = rho.diagonal().real
    nj = pops @ occ
    sector = {N: float(pops[basis.sector_slices[N]].sum()) for N in basis.sector_slices}
    return nj, sector, float(np.trace(rho).real)


def _finish_trace(times, njs, sectors, traces, min_eigs, herm_errs, spec, basis,
                  final_rho):
    njs = np.array(njs)
    total = njs.sum(axis=1)
    renorm = np.zeros_like(njs)
    alive = total > 1e-30
    renorm[alive] = njs[alive] / total[alive, None]
    edge = njs[:, :EDGE_WIDTH].sum(axis=1) + njs[:, -EDGE_WIDTH:].sum(axis=1)
    spill = bool(np.any(edge[alive] >= SPILL_FRACTION * total[alive]))
    traces = np.array(traces)
    drift = np.abs(traces - 1.0)
    if drift.max() > TRACE_TOL:
        raise RuntimeError(f"trace drifted by {drift.max():.3e} (integrator failure)")
    min_eigs = np.array(min_eigs)
    sector_traces = {N: np.array([s[N] for s in sectors]) for N in basis.sector_slices}
    return LindbladTrace(
        times=times, site_density=njs, renormalised_density=renorm,
        total_number=total, sector_population=sector_traces,
        trace_deviation=drift, min_eigenvalue=min_eigs,
        hermiticity_error=np.array(herm_errs),
        positivity_flag=bool(min_eigs.min() < POSITIVITY_TOL),
        boundary_spill=spill, sites=spec.sites, final_rho=final_rho)


def _evolve_dense(spec, rho0: DensityMatrix, times, rtol, atol, store_final):
    basis = rho0.basis
    rho0.validate()
    H = build_effective_bh_hamiltonian(spec, basis)
    kappa = _jump_coefficients(spec)
    jumps = [(basis.annihilation(l), kappa[l]) for l in range(spec.n_sites)
             if kappa[l] > 0]
    dim = basis.dim

    def rhs(t, y):
        rho = y.reshape(dim, dim)
        drho = -1j * (H @ rho - (H @ rho.conj().T).conj().T)
        for a, c in jumps:
            drho += c * (a @ (a @ rho.conj().T).conj().T)
        return drho.ravel()

    sol = solve_ivp(rhs, (0.0, float(times[-1])), rho0.rho.ravel().astype(complex),
                    t_eval=times, rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(f"integration failed: {sol.message}")
    njs, sectors, traces, min_eigs, herm_errs = [], [], [], [], []
    for col in sol.y.T:
        rho = col.reshape(dim, dim)
        nj, sector, tr = _observables_from_rho(rho, basis)
        njs.append(nj)
        sectors.append(sector)
        traces.append(tr)
        herm_errs.append(float(np.abs(rho - rho.conj().T).max()))
        min_eigs.append(float(np.linalg.eigvalsh((rho + rho.conj().T) / 2).min()))
    final = DensityMatrix(sol.y[:, -1].reshape(dim, dim), basis, float(times[-1])) \
        if store_final else None
    return _finish_trace(times, njs, sectors, traces, min_eigs, herm_errs,
                         spec, basis, final)


def _evolve_factored(spec, bec: BECState, times, rtol, atol, store_final):
    """Pure top-sector initial state: evolve the amplitude vector exactly and
    the density-matrix blocks it feeds through the jump cascade."""
    basis = bec.basis
    M = spec.n_sites
    H = build_effective_bh_hamiltonian(spec, basis)
    N0 = bec.n_particles
    top = basis.sector_slices[N0]
    psi0 = bec.vector[top]
    kappa = _jump_coefficients(spec)
    act = [l for l in range(M) if kappa[l] > 0]
    # position of the one-particle-at-site-l state inside the N=1 sector
    s1_all = basis.sector_slices[1]
    pos1 = np.array([basis.index[tuple(1 if m == l else 0 for m in range(M))]
                     - s1_all.start for l in range(M)])

    if N0 == 1:
        H1 = H[top, top].tocsr()

        def rhs(t, y):
            psi = y[:M]
            dpsi = -1j * (H1 @ psi)
            dvac = sum(kappa[l] * abs(psi[pos1[l]]) ** 2 for l in act)
            return np.concatenate([dpsi, [dvac]])

        y0 = np.concatenate([psi0, [0.0]]).astype(complex)
        sol = solve_ivp(rhs, (0.0, float(times[-1])), y0, t_eval=times,
                        rtol=rtol, atol=atol)
        if not sol.success:
            raise RuntimeError(f"integration failed: {sol.message}")
        cols = [(col[:M], None, col[M].real) for col in sol.y.T]
    else:
        s2, s1 = basis.sector_slices[2], basis.sector_slices[1]
        d2 = s2.stop - s2.start
        H2 = H[s2, s2].tocsr()
        H1 = H[s1, s1].tocsr()
        A21 = {l: basis.annihilation(l)[s1, s2].tocsr() for l in act}
        # a_l maps the one-particle state at site l straight to the vacuum

        def rhs(t, y):
            psi = y[:d2]
            r11 = y[d2:d2 + M * M].reshape(M, M)
            dpsi = -1j * (H2 @ psi)
            dr11 = -1j * (H1 @ r11 - (H1 @ r11.conj().T).conj().T)
            dvac = 0.0
            for l in act:
                drop = A21[l] @ psi
                dr11 += kappa[l] * np.outer(drop, drop.conj())
                dvac += kappa[l] * r11[pos1[l], pos1[l]].real
            return np.concatenate([dpsi, dr11.ravel(), [dvac]])

        y0 = np.concatenate([psi0, np.zeros(M * M), [0.0]]).astype(complex)
        sol = solve_ivp(rhs, (0.0, float(times[-1])), y0, t_eval=times,
                        rtol=rtol, atol=atol)
        if not sol.success:
            raise RuntimeError(f"integration failed: {sol.message}")
        cols = [(col[:d2], col[d2:d2 + M * M].reshape(M, M), col[-1].real)
                for col in sol.y.T]

    occ_top = basis.occupations[top]
    njs, sectors, traces, min_eigs, herm_errs = [], [], [], [], []
    for psi, r11, vac in cols:
        p_top = float(np.sum(np.abs(psi) ** 2))
        nj = (np.abs(psi) ** 2) @ occ_top
        sector = {N: 0.0 for N in basis.sector_slices}
        sector[0] = vac
        sector[N0] = p_top
        if r11 is not None:
            diag1 = np.diag(r11).real
            nj = nj + diag1[pos1]  # sector-1 states are lexicographic, not site order
            sector[1] = float(diag1.sum())
            herm = float(np.abs(r11 - r11.conj().T).max())
            min_eig = min(0.0, float(np.linalg.eigvalsh((r11 + r11.conj().T) / 2).min()),
                          vac)
        else:
            herm = 0.0
            min_eig = min(0.0, vac)
        njs.append(nj)
        sectors.append(sector)
        traces.append(sum(sector.values()))
        herm_errs.append(herm)
        min_eigs.append(min_eig)

    final = None
    if store_final:
        rho = np.zeros((basis.dim, basis.dim), dtype=complex)
        psi, r11, vac = cols[-1]
        rho[top, top] = np.outer(psi, psi.conj())
        if r11 is not None:
            s1 = basis.sector_slices[1]
            rho[s1, s1] = r11
        rho[-1, -1] = vac
        final = DensityMatrix(rho, basis, float(times[-1]))
    return _finish_trace(times, njs, sectors, traces, min_eigs, herm_errs,
                         spec, basis, final)


def evolve_lindblad(spec: LatticeSpec, state, t_final, dt_out, *,
                    rtol=1e-11, atol=1e-13, store_final=False) -> LindbladTrace:
    """Propagate the lossy master equation and record observables.

    state may be a DensityMatrix (integrated as a whole, products of the
    effective Hamiltonian and jump operators with rho) or a BECState (same
    equation organised over the sector blocks the pure state feeds, which
    is much lighter).  Raises if the trace drifts beyond TRACE_TOL; flags
    positivity violations beyond POSITIVITY_TOL instead of raising.
    """
    if t_final <= 0 or dt_out <= 0:
        raise ValueError("t_final and dt_out must be positive")
    n_out = int(np.floor(t_final / dt_out + 1e-9))
    times = dt_out * np.arange(n_out + 1)
    if isinstance(state, BECState):
        return _evolve_factored(spec, state, times, rtol, atol, store_final)
    if isinstance(state, DensityMatrix):
        return _evolve_dense(spec, state, times, rtol, atol, store_final)
    raise TypeError("state must be a DensityMatrix or a BECState")


def spdm(rho, basis: FockBasis, n0: int) -> np.ndarray:
    """Single-particle density matrix sigma_ij = <a^dag_i a_j> / n0."""
    mat = rho.rho if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    M = basis.n_sites
    sigma = np.zeros((M, M), dtype=complex)
    prods = [basis.annihilation(j) @ mat for j in range(M)]
    for i in range(M):
        ai = basis.annihilation(i)
        for j in range(M):
            sigma[i, j] = (ai.multiply(prods[j])).sum()
    return sigma / n0
