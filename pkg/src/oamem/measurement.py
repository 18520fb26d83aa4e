"""Photon-counting simulation and the standard measurement reductions.

Counting follows the Poissonian model of an attenuated coherent pulse:
the expected detections per pulse are n_bar * eta * prob plus a flat
background rate, and a gated detector integrates over many pulses.
Reductions recover the interference visibility N(beta) = N0 (1 + delta
+ cos beta), the Bloch polar angle 2 arctan sqrt(N_R / N_L), and apply
the per-basis relative-transmittance correction.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DimMismatch, DomainError, FitDegenerate, MissingBasis, NoCounts
from .modes import QuditState


@dataclass(frozen=True)
class CountRecord:
    """Integrated detector counts for one projection setting.

    ``counts`` is an integer for sampled data; noiseless reductions may
    store the exact expectation as a float.  ``beta`` carries the scan
    phase when the setting belongs to an equator scan.
    """

    basis_id: str
    counts: float
    background: float = 0.0
    acquisition: float = 1.0
    beta: float | None = None
    clamped: bool = False

    def __post_init__(self):
        if self.counts < 0 or self.background < 0:
            raise ValueError("counts and background must be >= 0")


@dataclass(frozen=True)
class CountingConfig:
    """Detector-side knobs for simulated acquisitions."""

    n_bar: float = 1.0
    efficiency: float = 1.0
    pulses: int = 10 ** 6
    bg_rate: float = 0.0
    acquisition: float = 1.0
    poisson: bool = True

    def __post_init__(self):
        if self.n_bar <= 0 or self.pulses <= 0:
            raise ValueError("n_bar and pulses must be positive")
        if not 0 <= self.efficiency <= 1:
            raise DomainError("efficiency must lie in [0, 1]")
        if self.bg_rate < 0:
            raise ValueError("background rate must be >= 0")


@dataclass(frozen=True)
class VisibilityFit:
    """Result of the N0 (1 + delta + cos beta) least-squares fit."""

    n0: float
    delta: float
    visibility: float
    residual_rms: float


@dataclass(frozen=True)
class TransmittanceTable:
    """Per-basis transmittances in (0, 1]; corrections are relative to the max."""

    transmittance: dict

    def __post_init__(self):
        if not self.transmittance:
            raise ValueError("empty transmittance table")
        for k, t in self.transmittance.items():
            if not 0 < t <= 1:
                raise ValueError(f"transmittance for {k!r} must lie in (0, 1]")

    def relative(self, basis_id: str) -> float:
        try:
            t = self.transmittance[basis_id]
        except KeyError:
            raise MissingBasis(f"no transmittance for basis {basis_id!r}") from None
        return t / max(self.transmittance.values())


def simulate_counts(prob: float, n_bar: float, eta: float, pulses: int,
                    bg_rate: float, seed: int, basis_id: str = "",
                    acquisition: float = 1.0, beta: float | None = None) -> CountRecord:
    """Draw integrated counts ~ Poisson(pulses * (n_bar eta prob + bg_rate)).

    The background field holds an independent same-mean draw, standing in
    for a separate background acquisition.  Deterministic for fixed seed.
    """
    if not 0 <= prob <= 1:
        raise DomainError(f"probability {prob} outside [0, 1]")
    if not 0 <= eta <= 1:
        raise DomainError(f"efficiency {eta} outside [0, 1]")
    rng = np.random.default_rng(seed)
    counts = int(rng.poisson(pulses * (n_bar * eta * prob + bg_rate)))
    background = int(rng.poisson(pulses * bg_rate))
    return CountRecord(basis_id=basis_id, counts=counts, background=background,
                       acquisition=acquisition, beta=beta)


def equator_probability(state: QuditState, beta: float) -> float:
    """Born probability of the equator projector (|L> + e^{i beta}|R>)/sqrt(2)."""
    if state.dim != 2:
        raise DimMismatch("equator scan requires a qubit state")
    proj = np.array([1.0, np.exp(1j * beta)]) / math.sqrt(2.0)
    return float(np.abs(np.vdot(proj, state.coeffs)) ** 2)


def interference_scan(state: QuditState, l: int, beta_values,
                      counting: CountingConfig | None = None,
                      seeds=None) -> list[CountRecord]:
    """Scan the measurement base along the Bloch equator.

    For the balanced qubit the noiseless curve is proportional to
    1 + cos(beta).  With ``counting=None`` the records hold the exact
    Born probabilities; otherwise counts are Poisson draws using one seed
    per point.
    """
    if state.l != l:
        raise DimMismatch(f"state carries l={state.l}, scan requested l={l}")
    beta_values = list(beta_values)
    records = []
    for i, beta in enumerate(beta_values):
        prob = equator_probability(state, beta)
        basis_id = f"beta_{i:02d}"
        if counting is None:
            records.append(CountRecord(basis_id=basis_id, counts=prob, beta=beta))
        elif not counting.poisson:
            mean = counting.pulses * (counting.n_bar * counting.efficiency * prob
                                      + counting.bg_rate)
            records.append(CountRecord(basis_id=basis_id, counts=mean,
                                       background=counting.pulses * counting.bg_rate,
                                       acquisition=counting.acquisition, beta=beta))
        else:
            seed = seeds[i] if seeds is not None else i
            records.append(simulate_counts(prob, counting.n_bar, counting.efficiency,
                                           counting.pulses, counting.bg_rate, seed,
                                           basis_id=basis_id,
                                           acquisition=counting.acquisition, beta=beta))
    return records


def fit_visibility(records) -> VisibilityFit:
    """Least-squares fit of N(beta) = N0 (1 + delta + cos beta).

    Linear in (a, b) = (N0 (1 + delta), N0); the visibility of the fitted
    curve is (max - min) / (max + min) = 1 / (1 + delta), clamped to
    [0, 1] as a physical contrast.
    """
    records = list(records)
    if any(r.beta is None for r in records):
        raise FitDegenerate("every record needs a beta value")
    betas = np.array([r.beta for r in records], dtype=np.float64)
    if np.unique(np.round(betas, 12)).size < 4:
        raise FitDegenerate("need at least 4 distinct beta values")
    counts = np.array([r.counts for r in records], dtype=np.float64)
    design = np.column_stack([np.ones_like(betas), np.cos(betas)])
    if np.linalg.matrix_rank(design) < 2:
        raise FitDegenerate("design matrix is singular (cos(beta) not resolved)")
    (a, b), *_ = np.linalg.lstsq(design, counts, rcond=None)
    if b <= 0:
        raise FitDegenerate("fitted modulation amplitude is not positive")
    n0 = b
    delta = a / b - 1.0
    visibility = min(max(1.0 / (1.0 + delta), 0.0), 1.0)
    residual = counts - design @ np.array([a, b])
    return VisibilityFit(n0=float(n0), delta=float(delta), visibility=float(visibility),
                         residual_rms=float(np.sqrt(np.mean(residual ** 2))))


def polar_retrieve(n_r: float, n_l: float) -> float:
    """Bloch polar angle 2 arctan sqrt(N_R / N_L), in [0, pi]."""
    if n_r < 0 or n_l < 0:
        raise ValueError("counts must be >= 0")
    if n_r + n_l == 0:
        raise NoCounts("no counts on either pole basis")
    return 2.0 * math.atan2(math.sqrt(n_r), math.sqrt(n_l))


def subtract_background(records) -> list[CountRecord]:
    """Net counts max(counts - background, 0); clamping is flagged."""
    out = []
    for r in records:
        net = r.counts - r.background
        out.append(replace(r, counts=max(net, 0.0), background=0.0,
                           clamped=bool(net < 0)))
    return out


def correct_transmittance(records, table: TransmittanceTable) -> list[CountRecord]:
    """Divide counts (and background) by the relative transmittance.

    The documented pipeline order is subtract background first, then
    correct; because the background is divided by the same factor the
    two steps in fact commute.
    """
    out = []
    for r in records:
        t_rel = table.relative(r.basis_id)
        out.append(replace(r, counts=r.counts / t_rel, background=r.background / t_rel))
    return out


def write_count_records(path, records) -> None:
    """CSV columns: basis_id, beta_or_label, counts, background, acquisition_s."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["basis_id", "beta_or_label", "counts", "background", "acquisition_s"])
        for r in records:
            label = repr(float(r.beta)) if r.beta is not None else r.basis_id
            w.writerow([r.basis_id, label, repr(float(r.counts)),
                        repr(float(r.background)), repr(float(r.acquisition))])


def read_count_records(path) -> list[CountRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            label = row["beta_or_label"]
            try:
                beta = float(label)
            except ValueError:
                beta = None
            records.append(CountRecord(basis_id=row["basis_id"],
                                       counts=float(row["counts"]),
                                       background=float(row["background"]),
                                       acquisition=float(row["acquisition_s"]),
                                       beta=beta))
    return records
