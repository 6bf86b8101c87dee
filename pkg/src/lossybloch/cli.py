"""Experiment runner: one subcommand per dataset family, CSV/JSON outputs.

Every run writes deterministic CSVs whose header block is the resolved
configuration.  `manifest` prints (or executes) the exact invocations that
regenerate the nine figure datasets.

Exit codes: 0 success, 2 usage, 3 invalid parameter or config,
4 computation error.  Failures also emit a JSON error record on stderr.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from pathlib import Path

import numpy as np

from . import bands as bands_mod
from . import semiclassics as semi_mod
from .config import ExperimentConfig, write_csv
from .lattice import LatticeSpec
from .manybody import build_fock_basis, evolve_lindblad, make_bec_state
from .propagate import (GaussianPacketSpec, WaveFunction, evolve_mean_field,
                        evolve_single_particle, make_gaussian, nonlinear_bloch_packet)
from .spectral import converged_spectrum, extract_ladders

__all__ = ["main", "figure_manifest"]

_SQRT20 = "4.47213595499958"  # sqrt(20), the beam width used throughout


# ---------------------------------------------------------------------------
# small parsers
# ---------------------------------------------------------------------------

def _parse_time(text: str, F: float) -> float:
    """Absolute time, or a multiple of the Bloch period for a 'T' suffix."""
    text = str(text).strip()
    if text.endswith("T"):
        if F <= 0:
            raise ValueError("time in units of T needs F > 0")
        return float(text[:-1] or 1.0) * 2.0 * np.pi / F
    return float(text)


def _parse_k(text: str) -> float:
    """Plain float, or a multiple of pi written like '0.5pi' / '-pi'."""
    text = str(text).strip()
    if text.endswith("pi"):
        head = text[:-2]
        if head in ("", "+"):
            return np.pi
        if head == "-":
            return -np.pi
        return float(head) * np.pi
    return float(text)


def _parse_pair(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'lo,hi', got {text!r}")
    return float(parts[0]), float(parts[1])


def _parse_sweep(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"expected 'lo:hi:step', got {text!r}")
    lo, hi, step = map(float, parts)
    if step <= 0:
        raise ValueError("sweep step must be positive")
    n = int(round((hi - lo) / step))
    return lo + step * np.arange(n + 1)


def _build_spec(args, need_g=False) -> LatticeSpec:
    g = getattr(args, "g", 0.0) or 0.0
    U = getattr(args, "U", 0.0) or 0.0
    if args.gamma_random is not None:
        if args.seed is None:
            raise ValueError("--gamma-random requires --seed")
        lo, hi = _parse_pair(args.gamma_random)
        return LatticeSpec.random_decay(args.L, args.F, lo, hi, args.seed, g=g, U=U)
    return LatticeSpec.uniform(args.L, args.F, args.gamma, g=g, U=U)


def _initial_state(spec: LatticeSpec, init: str, g=None) -> WaveFunction:
    kind, _, rest = init.partition(":")
    if kind == "delta":
        j = int(rest)
        amps = np.zeros(spec.n_sites, dtype=complex)
        amps[spec.half_width + j] = 1.0
        return WaveFunction(amps)
    if kind == "gaussian":
        x0, k0, sigma = (float(x) for x in rest.split(","))
        return make_gaussian(spec, GaussianPacketSpec(x0=x0, k0=k0, sigma=sigma))
    if kind == "nlbloch":
        band, k, x0, sigma = rest.split(",")
        return nonlinear_bloch_packet(spec, band, _parse_k(k), float(x0),
                                      float(sigma), g=g)
    raise ValueError(f"unknown --init kind {kind!r}")


def _config_from_args(args, command, keys) -> ExperimentConfig:
    params = {}
    for key in keys:
        val = getattr(args, key.replace("-", "_"))
        if val is not None:
            params[key] = val
    return ExperimentConfig(command=command, params=params, out_dir=str(args.out_dir),
                            seed=getattr(args, "seed", None))


def _out_path(args, name) -> Path:
    return Path(args.out_dir) / name


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_spectrum(args):
    gammas = _parse_sweep(args.gamma_sweep) if args.gamma_sweep else np.array([args.gamma])
    cfg = _config_from_args(args, "spectrum",
                            ["F", "gamma", "gamma-sweep", "L-small", "L-large", "tol"])
    rows = []
    for gam in gammas:
        spec = LatticeSpec.uniform(args.L_small, args.F, gam)
        eigs = converged_spectrum(spec, args.L_small, args.L_large, args.tol)
        ladders = extract_ladders(eigs, args.F, gam, args.ladder_tol)
        for e in eigs:
            n = int(round(e.real / args.F))
            rows.append((float(gam), float(e.real), float(e.imag), n % 2))
        del ladders  # extraction validates the two-level structure
    write_csv(_out_path(args, args.out), cfg,
              ["gamma", "re_E", "im_E", "ladder_index"], rows)
    return 0


def _norms_path(out: str) -> str:
    p = Path(out)
    return str(p.with_name(p.stem + "_norms" + p.suffix))


def _cmd_evolve(args):
    spec = _build_spec(args)
    t_final = _parse_time(args.t_final, args.F)
    dt_out = _parse_time(args.dt_out, args.F)
    g_init = args.g if args.mode == "mf" else (args.g or 0.0)
    psi0 = _initial_state(spec, args.init, g=g_init)
    if args.mode == "sp":
        trace = evolve_single_particle(spec, psi0, t_final, dt_out)
    elif args.mode == "mf":
        trace = evolve_mean_field(spec, psi0, t_final, dt_out)
    else:
        raise ValueError("--mode must be sp or mf")
    cfg = _config_from_args(args, "evolve",
                            ["mode", "L", "F", "gamma", "gamma-random", "g", "init",
                             "t-final", "dt-out"])
    rows = []
    for i, t in enumerate(trace.times):
        for m, j in enumerate(trace.sites):
            rows.append((float(t), int(j), float(trace.site_density[i, m]),
                         float(trace.renormalised_density[i, m])))
    write_csv(_out_path(args, args.out), cfg,
              ["t", "j", "density", "renorm_density"], rows)
    write_csv(_out_path(args, _norms_path(args.out)), cfg, ["t", "total_norm"],
              [(float(t), float(n)) for t, n in zip(trace.times, trace.total_norm)])
    if trace.boundary_spill:
        print("warning: boundary spill detected", file=sys.stderr)
    return 0


def _cmd_bands(args):
    ks = np.linspace(-np.pi, np.pi, args.k_num)
    cfg = _config_from_args(args, "bands", ["gamma", "k-num"])
    rows = []
    for k in ks:
        bp = bands_mod.dispersion(k, args.gamma)
        rows.append((float(k), bp.E_plus.real, bp.E_plus.imag,
                     bp.E_minus.real, bp.E_minus.imag))
    write_csv(_out_path(args, args.out), cfg,
              ["k", "re_E_plus", "im_E_plus", "re_E_minus", "im_E_minus"], rows)
    return 0


def _cmd_nlbands(args):
    ks = np.linspace(-np.pi, np.pi, args.k_num)
    points = bands_mod.nonlinear_band_sweep(args.g, args.gamma, ks)
    cfg = _config_from_args(args, "nlbands", ["g", "gamma", "k-num"])
    rows = []
    for pt in points:
        for s in pt.solutions:
            rows.append((float(pt.k), s.family, float(s.z), float(s.v),
                         s.mu.real, s.mu.imag, s.ep_class))
    write_csv(_out_path(args, args.out), cfg,
              ["k", "family", "z", "v", "re_mu", "im_mu", "ep_class"], rows)
    return 0


def _cmd_bdg(args):
    if args.k is not None:
        ks = [(_parse_k(args.k))]
    else:
        ks = np.linspace(-np.pi, np.pi, args.k_num)
    points = bands_mod.nonlinear_band_sweep(args.g, args.gamma, np.asarray(ks))
    cfg = _config_from_args(args, "bdg", ["g", "gamma", "k", "k-num"])
    rows, omega_rows = [], []
    for pt in points:
        for s in pt.solutions:
            st = bands_mod.stability_spectrum(s, pt.k, args.g, args.gamma)
            rows.append((float(pt.k), s.family, float(s.z), s.mu.real, s.mu.imag,
                         st.max_im, st.stable))
            for n, w in enumerate(st.omegas):
                omega_rows.append((float(pt.k), s.family, float(s.z), n,
                                   w.real, w.imag))
    write_csv(_out_path(args, args.out), cfg,
              ["k", "family", "z", "re_mu", "im_mu", "max_im_omega", "stable"], rows)
    if args.omegas_out:
        write_csv(_out_path(args, args.omegas_out), cfg,
                  ["k", "family", "z", "omega_index", "re_omega", "im_omega"],
                  omega_rows)
    return 0


def _cmd_semiclassics(args):
    if args.sigma is not None:
        init = semi_mod.PhaseSpaceState.from_packet(
            GaussianPacketSpec(x0=args.q0, k0=args.p0, sigma=args.sigma), band=args.band)
    else:
        init = semi_mod.PhaseSpaceState(q=args.q0, p=args.p0, sigma_qq=args.sigma_qq,
                                        sigma_qp=args.sigma_qp, sigma_pp=args.sigma_pp,
                                        band=args.band)
    t_final = _parse_time(args.t_final, args.F)
    dt_out = _parse_time(args.dt_out, args.F)
    traj = semi_mod.evolve_semiclassical(init, args.F, args.gamma, t_final, dt_out)
    cfg = _config_from_args(args, "semiclassics",
                            ["band", "q0", "p0", "sigma", "F", "gamma",
                             "t-final", "dt-out"])
    rows = [(float(t), float(q), float(p), float(a), float(b), float(c))
            for t, q, p, a, b, c in zip(traj.times, traj.q, traj.p, traj.sigma_qq,
                                        traj.sigma_qp, traj.sigma_pp)]
    write_csv(_out_path(args, args.out), cfg,
              ["t", "q", "p", "Sigma_qq", "Sigma_qp", "Sigma_pp"], rows)
    return 0


def _cmd_lz(args):
    gammas = [float(x) for x in args.gamma_list.split(",")]
    Fs = [float(x) for x in args.F_list.split(",")]
    cfg = _config_from_args(args, "lz", ["gamma-list", "F-list", "L", "sigma"])
    rows = []
    for F in Fs:
        for gam in gammas:
            spec = LatticeSpec.uniform(args.L, F, gam)
            packet = GaussianPacketSpec(x0=0.0, k0=0.0, sigma=args.sigma)
            measured = semi_mod.measure_band_transfer(spec, packet)
            rows.append((gam, F, semi_mod.landau_zener_probability(F, gam), measured))
    write_csv(_out_path(args, args.out), cfg,
              ["gamma", "F", "P_formula", "P_measured"], rows)
    return 0


def _cmd_manybody(args):
    spec = _build_spec(args)
    t_final = _parse_time(args.t_final, args.F)
    dt_out = _parse_time(args.dt_out, args.F)
    basis = build_fock_basis(spec.n_sites, args.N)
    orbital = _initial_state(spec, args.init, g=args.U * args.N)
    bec = make_bec_state(basis, orbital, args.N)
    trace = evolve_lindblad(spec, bec, t_final, dt_out)
    cfg = _config_from_args(args, "manybody",
                            ["N", "U", "L", "F", "gamma", "gamma-random", "init",
                             "t-final", "dt-out"])
    rows = []
    for i, t in enumerate(trace.times):
        for m, j in enumerate(trace.sites):
            rows.append((float(t), int(j), float(trace.site_density[i, m]),
                         float(trace.renormalised_density[i, m])))
    write_csv(_out_path(args, args.out), cfg, ["t", "j", "n_j", "renorm"], rows)
    write_csv(_out_path(args, _norms_path(args.out)), cfg, ["t", "N_total"],
              [(float(t), float(n)) for t, n in zip(trace.times, trace.total_number)])
    if trace.boundary_spill:
        print("warning: boundary spill detected", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# figure manifest
# ---------------------------------------------------------------------------

def figure_manifest() -> dict:
    """Exact CLI invocation(s) regenerating each figure dataset."""
    sp20 = _SQRT20
    m = {
        "fig1": {
            "fig1-F0.3": "spectrum --F 0.3 --gamma-sweep 0:1:0.01 --L-small 50 "
                         "--L-large 60 --out fig1_spectrum_F0.3.csv",
            "fig1-F1": "spectrum --F 1 --gamma-sweep 0:1:0.01 --L-small 50 "
                       "--L-large 60 --out fig1_spectrum_F1.csv",
        },
        "fig2": {
            "fig2-unitary-low": "evolve --mode sp --L 30 --F 0.3 --gamma 0 "
                                "--init delta:0 --t-final 3T --dt-out 0.01T "
                                "--out fig2_unitary_F0.3.csv",
            "fig2-lossy-low": "evolve --mode sp --L 30 --F 0.3 --gamma 0.2 "
                              "--init delta:0 --t-final 3T --dt-out 0.01T "
                              "--out fig2_lossy_F0.3.csv",
            "fig2-unitary-high": "evolve --mode sp --L 30 --F 1 --gamma 0 "
                                 "--init delta:0 --t-final 3T --dt-out 0.01T "
                                 "--out fig2_unitary_F1.csv",
            "fig2-lossy-high": "evolve --mode sp --L 30 --F 1 --gamma 0.4 "
                               "--init delta:0 --t-final 3T --dt-out 0.01T "
                               "--out fig2_lossy_F1.csv",
        },
        "fig3": {
            "fig3-dispersion": "bands --gamma 0.05 --k-num 1001 --out fig3_bands.csv",
        },
        "fig4": {
            "fig4-left": f"evolve --mode sp --L 60 --F 0.2 --gamma 0.05 "
                         f"--init gaussian:0,0,{sp20} --t-final 2T --dt-out 0.02T "
                         f"--out fig4_uniform.csv",
            "fig4-middle": f"evolve --mode sp --L 60 --F 0.2 "
                           f"--gamma-random 0.025,0.125 --seed 7 "
                           f"--init gaussian:0,0,{sp20} --t-final 2T --dt-out 0.02T "
                           f"--out fig4_random.csv",
        },
        "fig5": {
            "fig5-g0": "nlbands --g 0 --gamma 0.1 --k-num 801 --out fig5_nlbands_g0.csv",
            "fig5-g2": "nlbands --g 2 --gamma 0.1 --k-num 801 --out fig5_nlbands_g2.csv",
            "fig5-g7": "nlbands --g 7 --gamma 0.1 --k-num 801 --out fig5_nlbands_g7.csv",
        },
        "fig6": {
            "fig6-g2-k0": "bdg --g 2 --gamma 0.1 --k 0 --out fig6_bdg_g2_k0.csv "
                          "--omegas-out fig6_omegas_g2_k0.csv",
            "fig6-g2-km04pi": "bdg --g 2 --gamma 0.1 --k=-0.4pi "
                              "--out fig6_bdg_g2_km04pi.csv "
                              "--omegas-out fig6_omegas_g2_km04pi.csv",
            "fig6-g7-k0": "bdg --g 7 --gamma 0.1 --k 0 --out fig6_bdg_g7_k0.csv "
                          "--omegas-out fig6_omegas_g7_k0.csv",
            "fig6-g7-km04pi": "bdg --g 7 --gamma 0.1 --k=-0.4pi "
                              "--out fig6_bdg_g7_km04pi.csv "
                              "--omegas-out fig6_omegas_g7_km04pi.csv",
        },
        "fig7": {
            "fig7-g2": "bdg --g 2 --gamma 0.1 --k-num 801 --out fig7_bdg_g2.csv",
            "fig7-g7": "bdg --g 7 --gamma 0.1 --k-num 801 --out fig7_bdg_g7.csv",
        },
        "fig8": {
            "fig8-g2-lower": f"evolve --mode mf --L 60 --F 0.2 --gamma 0.1 --g 2 "
                             f"--init nlbloch:lower,0,0,{sp20} --t-final 2T "
                             f"--dt-out 0.02T --out fig8_g2_lower.csv",
            "fig8-g2-upper": f"evolve --mode mf --L 60 --F 0.2 --gamma 0.1 --g 2 "
                             f"--init nlbloch:upper,0,0,{sp20} --t-final 2T "
                             f"--dt-out 0.02T --out fig8_g2_upper.csv",
            "fig8-g7-lower": f"evolve --mode mf --L 60 --F 0.2 --gamma 0.1 --g 7 "
                             f"--init nlbloch:lower,0,0,{sp20} --t-final 2T "
                             f"--dt-out 0.02T --out fig8_g7_lower.csv",
            "fig8-g7-upper": f"evolve --mode mf --L 60 --F 0.2 --gamma 0.1 --g 7 "
                             f"--init nlbloch:upper,0,0,{sp20} --t-final 2T "
                             f"--dt-out 0.02T --out fig8_g7_upper.csv",
        },
        "fig9": {
            "fig9-U1-lower": f"manybody --N 2 --U 1 --L 20 --F 0.2 --gamma 0.1 "
                             f"--init nlbloch:lower,0,0,{sp20} --t-final 1.5T "
                             f"--dt-out 0.0375T --out fig9_U1_lower.csv",
            "fig9-U1-upper": f"manybody --N 2 --U 1 --L 20 --F 0.2 --gamma 0.1 "
                             f"--init nlbloch:upper,0,0,{sp20} --t-final 1.5T "
                             f"--dt-out 0.0375T --out fig9_U1_upper.csv",
            "fig9-U7-lower": f"manybody --N 2 --U 7 --L 20 --F 0.2 --gamma 0.1 "
                             f"--init nlbloch:lower,0,0,{sp20} --t-final 1.5T "
                             f"--dt-out 0.0375T --out fig9_U7_lower.csv",
            "fig9-U7-upper": f"manybody --N 2 --U 7 --L 20 --F 0.2 --gamma 0.1 "
                             f"--init nlbloch:upper,0,0,{sp20} --t-final 1.5T "
                             f"--dt-out 0.0375T --out fig9_U7_upper.csv",
        },
    }
    return m


def _cmd_manifest(args):
    manifest = figure_manifest()
    if args.out:
        Path(args.out_dir, args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out_dir, args.out).write_text(json.dumps(manifest, indent=2) + "\n")
    else:
        print(json.dumps(manifest, indent=2))
    if args.run:
        data_dir = Path(args.data_dir)
        data_dir.mkdir(parents=True, exist_ok=True)
        for fig in manifest:
            for panel, cmd in manifest[fig].items():
                print(f"[{panel}] {cmd}", file=sys.stderr)
                rc = main(shlex.split(cmd) + ["--out-dir", str(data_dir)])
                if rc != 0:
                    raise RuntimeError(f"manifest entry {panel} failed with code {rc}")
    return 0


def _cmd_run(args):
    cfg = ExperimentConfig.from_file(args.config)
    argv = [cfg.command]
    for key, val in cfg.params.items():
        flag = "--" + key.replace("_", "-")
        if isinstance(val, bool):
            if val:
                argv.append(flag)
        else:
            argv.extend([flag, str(val)])
    if cfg.seed is not None:
        argv.extend(["--seed", str(cfg.seed)])
    if cfg.out_dir != ".":
        argv.extend(["--out-dir", cfg.out_dir])
    return main(argv)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(p, seed=True):
    p.add_argument("--out-dir", default=".", help="directory for output files")
    if seed:
        p.add_argument("--seed", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lossybloch",
                                 description="lossy tilted-chain experiments")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="converged eigenvalue ladders vs gamma")
    p.add_argument("--F", type=float, required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--gamma-sweep", default=None, help="lo:hi:step")
    p.add_argument("--L-small", type=int, default=50)
    p.add_argument("--L-large", type=int, default=60)
    p.add_argument("--tol", type=float, default=1e-8, help="two-size matching tol")
    p.add_argument("--ladder-tol", type=float, default=1e-6)
    p.add_argument("--out", default="spectrum.csv")
    _add_common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("evolve", help="single-particle or mean-field propagation")
    p.add_argument("--mode", choices=["sp", "mf"], required=True)
    p.add_argument("--L", type=int, default=60)
    p.add_argument("--F", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--gamma-random", default=None, help="lo,hi (uniform per odd site)")
    p.add_argument("--g", type=float, default=0.0)
    p.add_argument("--init", required=True,
                   help="delta:j | gaussian:x0,k0,sigma | nlbloch:band,k,x0,sigma")
    p.add_argument("--t-final", required=True, help="absolute or e.g. 3T")
    p.add_argument("--dt-out", required=True, help="absolute or e.g. 0.01T")
    p.add_argument("--out", default="evolve.csv")
    _add_common(p)
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("bands", help="linear complex dispersion")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--k-num", type=int, default=801)
    p.add_argument("--out", default="bands.csv")
    _add_common(p, seed=False)
    p.set_defaults(func=_cmd_bands)

    p = sub.add_parser("nlbands", help="nonlinear Bloch bands")
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--k-num", type=int, default=801)
    p.add_argument("--out", default="nlbands.csv")
    _add_common(p, seed=False)
    p.set_defaults(func=_cmd_nlbands)

    p = sub.add_parser("bdg", help="stability spectra of nonlinear Bloch states")
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--k", default=None, help="single quasimomentum, e.g. -0.4pi")
    p.add_argument("--k-num", type=int, default=801)
    p.add_argument("--out", default="bdg.csv")
    p.add_argument("--omegas-out", default=None,
                   help="also write the four perturbation frequencies per state")
    _add_common(p, seed=False)
    p.set_defaults(func=_cmd_bdg)

    p = sub.add_parser("semiclassics", help="Gaussian-packet phase-space flow")
    p.add_argument("--band", choices=["plus", "minus"], default="minus")
    p.add_argument("--q0", type=float, default=0.0)
    p.add_argument("--p0", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=None,
                   help="packet width; sets a minimum-uncertainty Sigma")
    p.add_argument("--sigma-qq", type=float, default=None)
    p.add_argument("--sigma-qp", type=float, default=0.0)
    p.add_argument("--sigma-pp", type=float, default=None)
    p.add_argument("--F", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--t-final", required=True)
    p.add_argument("--dt-out", required=True)
    p.add_argument("--out", default="semiclassics.csv")
    _add_common(p, seed=False)
    p.set_defaults(func=_cmd_semiclassics)

    p = sub.add_parser("lz", help="band-transfer estimate vs full-lattice measurement")
    p.add_argument("--gamma-list", required=True, help="comma separated")
    p.add_argument("--F-list", required=True, help="comma separated")
    p.add_argument("--L", type=int, default=70)
    p.add_argument("--sigma", type=float, default=float(_SQRT20))
    p.add_argument("--out", default="lz.csv")
    _add_common(p, seed=False)
    p.set_defaults(func=_cmd_lz)

    p = sub.add_parser("manybody", help="exact few-particle master equation")
    p.add_argument("--N", type=int, choices=[1, 2], required=True)
    p.add_argument("--U", type=float, default=0.0)
    p.add_argument("--L", type=int, default=20)
    p.add_argument("--F", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--gamma-random", default=None)
    p.add_argument("--init", required=True)
    p.add_argument("--t-final", required=True)
    p.add_argument("--dt-out", required=True)
    p.add_argument("--out", default="manybody.csv")
    _add_common(p)
    p.set_defaults(func=_cmd_manybody)

    p = sub.add_parser("manifest", help="figure-id -> CLI invocation mapping")
    p.add_argument("--run", action="store_true", help="execute every entry")
    p.add_argument("--data-dir", default="data")
    p.add_argument("--out", default=None, help="write the mapping as JSON")
    _add_common(p, seed=False)
    p.set_defaults(func=_cmd_manifest)

    p = sub.add_parser("run", help="execute a flat key-value config file")
    p.add_argument("--config", required=True)
    _add_common(p, seed=False)
    p.set_defaults(func=_cmd_run)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, TypeError) as exc:
        json.dump({"error": "invalid-parameter", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 3
    except Exception as exc:  # computation / module failure
        json.dump({"error": "module-error", "message": f"{type(exc).__name__}: {exc}"},
                  sys.stderr)
        sys.stderr.write("\n")
        return 4


if __name__ == "__main__":
    sys.exit(main())
