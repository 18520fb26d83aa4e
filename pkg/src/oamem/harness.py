"""Campaign runners: end-to-end pipelines with CSV persistence.

Every campaign is deterministic under its seed: per-record RNG streams
are derived from the master seed with fixed spawn keys, so a parallel
schedule cannot reorder draws, and all numeric output is formatted with
repr so reruns are byte-identical.
"""

from __future__ import annotations

import csv
import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import PhotonStatistics, classical_limit, threshold_band
from .config import ExperimentConfig, config_hash
from .decoherence import (DiffusionParams, diffuse, longitudinal_drift_factor,
                          magnetic_dephase)
from .errors import ConfigError
from .fieldgrid import export_csv, export_pgm
from .holography import (export_pgm_hologram, fraunhofer, project_and_couple,
                         qubit_hologram, qutrit_hologram)
from .measurement import (CountRecord, CountingConfig, fit_visibility,
                          interference_scan, polar_retrieve, simulate_counts,
                          subtract_background, write_count_records)
from .modes import LGModeSpec, QuditState, lg_field, qubit_state, state_from_field, synthesize
from .polariton import read, write
from .tomography import (DensityMatrix, ProjectionSet, export_density_csv,
                         fidelity, probabilities, reconstruct, tomography_report)


@dataclass(frozen=True)
class CampaignResult:
    out_dir: Path
    files: tuple[str, ...]
    summary: tuple
    provenance: dict


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return repr(float(value))


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


def _record_seed(master: int, *spawn_key: int) -> int:
    """Deterministic per-record stream id from the master seed."""
    return int(np.random.SeedSequence(entropy=master, spawn_key=spawn_key)
               .generate_state(1)[0])


def _finalize(cfg: ExperimentConfig, experiment: str, out_dir: Path,
              files: list[str], summary, rng_scheme: str) -> CampaignResult:
    provenance = {
        "experiment": experiment,
        "seed": str(cfg.seed),
        "config_hash": config_hash(cfg),
        "package_version": __version__,
        "rng_scheme": rng_scheme,
    }
    prov_path = out_dir / "provenance.csv"
    _write_csv(prov_path, ["key", "value"], sorted(provenance.items()))
    files = files + ["provenance.csv"]
    manifest_rows = [(name, _sha256(out_dir / name)) for name in sorted(files)]
    _write_csv(out_dir / "manifest.csv", ["path", "sha256"], manifest_rows)
    return CampaignResult(out_dir=out_dir, files=tuple(sorted(files) + ["manifest.csv"]),
                          summary=tuple(summary), provenance=provenance)


def _out_dir(cfg: ExperimentConfig, override=None) -> Path:
    target = override or cfg.output_dir
    if target is None:
        raise ConfigError("no output directory configured")
    path = Path(target)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _input_field(cfg: ExperimentConfig):
    """Build the stored field per the configured source.

    Returns (field, hologram_or_None); the hologram path imprints the
    binary mask on a Gaussian and takes the single lens far field, so
    the returned field lives on the focal-plane grid.
    """
    state = cfg.qudit.to_state()
    if cfg.source.kind == "ideal":
        return synthesize(state, cfg.qudit.waist, cfg.grid, cfg.memory.lambda_s), None
    gauss = lg_field(LGModeSpec(0, cfg.source.input_waist), cfg.grid, cfg.memory.lambda_s)
    if cfg.qudit.dim == 2:
        holo = qubit_hologram(cfg.qudit.l, cfg.grid)
    else:
        holo = qutrit_hologram(cfg.qudit.l, cfg.source.input_waist, cfg.grid)
    return fraunhofer(holo.imprint(gauss), cfg.source.focal), holo


def storage_point(cfg: ExperimentConfig, t_index: int, t_s: float) -> dict:
    """One storage-and-tomography pass at a single storage time.

    Chain: synthesize -> write -> decohere -> read -> project -> count ->
    reconstruct -> fidelity, exactly composing the module operations.
    """
    state = cfg.qudit.to_state()
    field_in, _ = _input_field(cfg)
    params = cfg.memory.to_params()
    wave = write(field_in, params)
    dp = DiffusionParams(cfg.memory.temperature, cfg.memory.mass)
    if cfg.decoherence.diffusion:
        wave = diffuse(wave, dp, t_s)
    if cfg.decoherence.magnetic:
        wave = magnetic_dephase(wave, cfg.magnetic.to_model(), t_s)
    field_out = read(wave, params)
    if cfg.decoherence.longitudinal_drift:
        factor = longitudinal_drift_factor(params.delta_k, dp, t_s)
        field_out = field_out.with_values(field_out.values * factor)

    eta = cfg.efficiency.to_model()(t_s)
    pset = ProjectionSet.qubit() if state.dim == 2 else ProjectionSet.qutrit()
    waist = cfg.qudit.waist
    records = []
    for b_index, (label, psi) in enumerate(pset.projectors):
        target = QuditState(psi, l=state.l)
        amp = project_and_couple(field_out, target, waist)
        prob = min(abs(amp) ** 2, 1.0)
        if cfg.counting.poisson:
            seed = _record_seed(cfg.seed, t_index, b_index)
            rec = simulate_counts(prob, cfg.photon.n_bar, eta, cfg.counting.pulses,
                                  cfg.counting.bg_rate, seed, basis_id=label,
                                  acquisition=cfg.counting.acquisition)
        else:
            rec = CountRecord(basis_id=label, counts=prob,
                              acquisition=cfg.counting.acquisition)
        records.append(rec)
    if cfg.counting.poisson and cfg.counting.bg_rate > 0:
        records = subtract_background(records)

    rho = reconstruct(records, pset)
    ideal = DensityMatrix(state.density_matrix())
    stored = state_from_field(field_in, state.l, state.dim, waist)
    f_abs = fidelity(rho, ideal)
    f_rel = fidelity(rho, DensityMatrix(stored.density_matrix()))
    bound = classical_limit(cfg.photon.n_bar, eta)
    band = threshold_band(PhotonStatistics(cfg.photon.n_bar, cfg.photon.uncertainty), eta)
    return {
        "t_s": t_s, "eta": eta, "f_rel": f_rel, "f_abs": f_abs,
        "f_classical": bound.f_classical, "band_low": band[0], "band_high": band[1],
        "records": records, "rho": rho,
        "probs": probabilities(rho, pset), "pset": pset,
    }


def _storage_point_star(args):
    return storage_point(*args)


def _map_points(cfg: ExperimentConfig, parallel: int):
    jobs = [(cfg, i, t) for i, t in enumerate(cfg.storage_times)]
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            return list(pool.map(_storage_point_star, jobs))
    return [storage_point(*job) for job in jobs]


RNG_SCHEME = "SeedSequence(seed, spawn_key=(point_index, basis_index))"


def run_storage_decay(cfg: ExperimentConfig, out=None, parallel: int = 1) -> CampaignResult:
    """Fidelity and efficiency versus storage time, with classical bounds."""
    out_dir = _out_dir(cfg, out)
    results = _map_points(cfg, parallel)
    header = ["t_s", "eta", "f_rel", "f_abs", "f_classical", "band_low", "band_high"]
    rows = [[r[k] for k in header] for r in results]
    _write_csv(out_dir / "decay.csv", header, rows)
    return _finalize(cfg, "storage_decay", out_dir, ["decay.csv"], rows, RNG_SCHEME)


def run_tomography(cfg: ExperimentConfig, out=None, parallel: int = 1) -> CampaignResult:
    """Full state reconstruction at each storage time."""
    out_dir = _out_dir(cfg, out)
    results = _map_points(cfg, parallel)
    files = []
    summary = []
    for i, r in enumerate(results):
        counts_name = f"counts_{i:02d}.csv"
        rho_name = f"rho_{i:02d}.csv"
        report_name = f"report_{i:02d}.txt"
        write_count_records(out_dir / counts_name, r["records"])
        export_density_csv(r["rho"], out_dir / rho_name)
        (out_dir / report_name).write_text(
            tomography_report(r["pset"], r["records"], r["probs"], r["rho"], r["f_abs"])
            + "\n")
        files += [counts_name, rho_name, report_name]
        summary.append([r["t_s"], r["eta"], r["f_rel"], r["f_abs"]])
    _write_csv(out_dir / "summary.csv", ["t_s", "eta", "f_rel", "f_abs"], summary)
    return _finalize(cfg, "tomography", out_dir, files + ["summary.csv"], summary,
                     RNG_SCHEME)


def run_interference_scan(cfg: ExperimentConfig, out=None, parallel: int = 1) -> CampaignResult:
    """Equator scan of a stored qubit with the visibility fit."""
    out_dir = _out_dir(cfg, out)
    state = cfg.qudit.to_state()
    if state.dim != 2:
        raise ConfigError("interference scan requires a qubit")
    points = cfg.scan.beta_points
    betas = [2.0 * np.pi * i / points for i in range(points)]
    counting = None
    seeds = None
    if cfg.counting.poisson:
        eta = cfg.efficiency.to_model()(cfg.storage_times[0] if cfg.storage_times else 0.0)
        counting = CountingConfig(n_bar=cfg.photon.n_bar, efficiency=eta,
                                  pulses=cfg.counting.pulses, bg_rate=cfg.counting.bg_rate,
                                  acquisition=cfg.counting.acquisition, poisson=True)
        seeds = [_record_seed(cfg.seed, 0, i) for i in range(points)]
    records = interference_scan(state, cfg.qudit.l, betas, counting, seeds)
    if cfg.counting.poisson and cfg.counting.bg_rate > 0:
        records = subtract_background(records)
    fit = fit_visibility(records)
    write_count_records(out_dir / "scan.csv", records)
    _write_csv(out_dir / "fit.csv", ["n0", "delta", "visibility", "residual_rms"],
               [[fit.n0, fit.delta, fit.visibility, fit.residual_rms]])
    summary = [[fit.n0, fit.delta, fit.visibility, fit.residual_rms]]
    return _finalize(cfg, "interference_scan", out_dir, ["scan.csv", "fit.csv"],
                     summary, RNG_SCHEME)


def run_meridian_sweep(cfg: ExperimentConfig, out=None, parallel: int = 1) -> CampaignResult:
    """Polar-angle retrieval gamma_r versus prepared gamma_w at beta = 0."""
    out_dir = _out_dir(cfg, out)
    points = cfg.meridian.gamma_points
    eta = cfg.efficiency.to_model()(cfg.storage_times[0] if cfg.storage_times else 0.0)
    rows = []
    for i in range(points):
        gamma_w = np.pi * i / (points - 1)
        state = qubit_state(gamma_w, 0.0, l=cfg.qudit.l)
        p_l = float(abs(state.coeffs[0]) ** 2)
        p_r = float(abs(state.coeffs[1]) ** 2)
        if cfg.counting.poisson:
            rec_l = simulate_counts(p_l, cfg.photon.n_bar, eta, cfg.counting.pulses,
                                    cfg.counting.bg_rate, _record_seed(cfg.seed, i, 0),
                                    basis_id="L")
            rec_r = simulate_counts(p_r, cfg.photon.n_bar, eta, cfg.counting.pulses,
                                    cfg.counting.bg_rate, _record_seed(cfg.seed, i, 1),
                                    basis_id="R")
            n_l, n_r = rec_l.counts, rec_r.counts
        else:
            n_l, n_r = p_l, p_r
        gamma_r = polar_retrieve(n_r, n_l)
        rows.append([gamma_w, n_l, n_r, gamma_r])
    _write_csv(out_dir / "meridian.csv", ["gamma_w", "n_l", "n_r", "gamma_r"], rows)
    return _finalize(cfg, "meridian_sweep", out_dir, ["meridian.csv"], rows, RNG_SCHEME)


def run_bounds_table(cfg: ExperimentConfig, out=None, parallel: int = 1) -> CampaignResult:
    """Classical limit and threshold band over the storage-time grid."""
    out_dir = _out_dir(cfg, out)
    model = cfg.efficiency.to_model()
    stats = PhotonStatistics(cfg.photon.n_bar, cfg.photon.uncertainty)
    rows = []
    for t_s in cfg.storage_times:
        eta = model(t_s)
        bound = classical_limit(cfg.photon.n_bar, eta)
        band = threshold_band(stats, eta)
        rows.append([t_s, eta, bound.f_classical, band[0], band[1]])
    _write_csv(out_dir / "bounds.csv",
               ["t_s", "eta", "f_classical", "band_low", "band_high"], rows)
    return _finalize(cfg, "bounds_table", out_dir, ["bounds.csv"], rows, "none")


def run_field_render(cfg: ExperimentConfig, out=None, parallel: int = 1) -> CampaignResult:
    """Export input, stored, and retrieved patterns as PGM and CSV maps."""
    out_dir = _out_dir(cfg, out)
    field_in, holo = _input_field(cfg)
    files = []
    export_pgm(field_in, out_dir / "input.pgm")
    export_csv(field_in, out_dir / "input.csv")
    files += ["input.pgm", "input.csv"]
    if holo is not None:
        export_pgm_hologram(holo, out_dir / "hologram.pgm")
        files.append("hologram.pgm")
    params = cfg.memory.to_params()
    dp = DiffusionParams(cfg.memory.temperature, cfg.memory.mass)
    for i, t_s in enumerate(cfg.storage_times):
        wave = write(field_in, params)
        if cfg.decoherence.diffusion:
            wave = diffuse(wave, dp, t_s)
        if cfg.decoherence.magnetic:
            wave = magnetic_dephase(wave, cfg.magnetic.to_model(), t_s)
        retrieved = read(wave, params)
        name = f"retrieved_{i:02d}.pgm"
        export_pgm(retrieved, out_dir / name)
        files.append(name)
    return _finalize(cfg, "field_render", out_dir, files, [], "none")


RUNNERS = {
    "interference_scan": run_interference_scan,
    "meridian_sweep": run_meridian_sweep,
    "storage_decay": run_storage_decay,
    "tomography": run_tomography,
    "bounds_table": run_bounds_table,
    "field_render": run_field_render,
}
