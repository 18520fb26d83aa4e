"""Density-matrix reconstruction and fidelity for OAM qubits and qutrits.

The projector sets are the five-basis qubit set {L, R, L+R, L+iR, L-R}
and the nine-basis qutrit set {L, G, R, G-L, G+R, G+iL, G-iR, L+iR,
L-R}.  Counts are normalized by the pole-basis subset (L+R for qubits,
L+G+R for qutrits), which resolves the identity and provides the flux
reference.  Reconstruction is linear least squares over Hermitian
unit-trace matrices followed by eigenvalue clipping onto the physical
set, with an optional fixed-point maximum-likelihood refinement.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimMismatch, InsufficientData, NoCounts, NotPSD
from .measurement import CountRecord

HERMITICITY_TOL = 1e-10
PSD_TOL = 1e-10


def _ket(entries) -> np.ndarray:
    v = np.asarray(entries, dtype=np.complex128)
    return v / np.linalg.norm(v)


QUBIT_PROJECTORS = (
    ("L", _ket([1, 0])),
    ("R", _ket([0, 1])),
    ("L+R", _ket([1, 1])),
    ("L+iR", _ket([1, 1j])),
    ("L-R", _ket([1, -1])),
)

# basis order [L, G, R]
QUTRIT_PROJECTORS = (
    ("L", _ket([1, 0, 0])),
    ("G", _ket([0, 1, 0])),
    ("R", _ket([0, 0, 1])),
    ("G-L", _ket([-1, 1, 0])),
    ("G+R", _ket([0, 1, 1])),
    ("G+iL", _ket([1j, 1, 0])),
    ("G-iR", _ket([0, 1, -1j])),
    ("L+iR", _ket([1, 0, 1j])),
    ("L-R", _ket([1, 0, -1])),
)


@dataclass(frozen=True)
class ProjectionSet:
    """Labeled pure-state projectors used for tomography."""

    dim: int
    projectors: tuple

    @classmethod
    def qubit(cls) -> "ProjectionSet":
        return cls(2, QUBIT_PROJECTORS)

    @classmethod
    def qutrit(cls) -> "ProjectionSet":
        return cls(3, QUTRIT_PROJECTORS)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.projectors)

    @property
    def pole_labels(self) -> tuple[str, ...]:
        return ("L", "R") if self.dim == 2 else ("L", "G", "R")


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix of dim 2 or 3."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.ascontiguousarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 3):
            raise DimMismatch(f"density matrix must be 2x2 or 3x3, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
            raise ValueError("matrix is not Hermitian within tolerance")
        if abs(np.trace(m).real - 1.0) > HERMITICITY_TOL:
            raise ValueError("trace must equal 1 within tolerance")
        if np.linalg.eigvalsh(m).min() < -PSD_TOL:
            raise NotPSD("matrix has a negative eigenvalue beyond tolerance")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, vector) -> "DensityMatrix":
        v = _ket(vector)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=np.complex128) / dim)


def probabilities(rho: DensityMatrix, pset: ProjectionSet) -> list[float]:
    """Born probabilities <psi_i| rho |psi_i> for every projector."""
    if rho.dim != pset.dim:
        raise DimMismatch("state and projection set dimensions differ")
    out = []
    for _, psi in pset.projectors:
        p = float(np.real(psi.conj() @ rho.matrix @ psi))
        out.append(min(max(p, 0.0), 1.0))
    return out


def _hermitian_basis(dim: int) -> list[np.ndarray]:
    """Traceless orthonormal Hermitian basis (generalized Pauli/Gell-Mann)."""
    basis = []
    for k in range(dim):
        for m in range(k + 1, dim):
            sym = np.zeros((dim, dim), dtype=np.complex128)
            sym[k, m] = sym[m, k] = 1.0 / math.sqrt(2.0)
            basis.append(sym)
            asym = np.zeros((dim, dim), dtype=np.complex128)
            asym[k, m] = -1j / math.sqrt(2.0)
            asym[m, k] = 1j / math.sqrt(2.0)
            basis.append(asym)
    for k in range(1, dim):
        diag = np.zeros((dim, dim), dtype=np.complex128)
        diag[:k, :k] = np.eye(k)
        diag[k, k] = -k
        diag /= math.sqrt(k * (k + 1))
        basis.append(diag)
    return basis


def design_matrix(pset: ProjectionSet) -> np.ndarray:
    """Rows vec(|psi_i><psi_i|) over the full Hermitian basis (incl. identity).

    Rank 4 for the qubit set and 9 for the qutrit set, so each set
    exactly determines the state once the trace is pinned.
    """
    dim = pset.dim
    ops = [np.eye(dim, dtype=np.complex128) / math.sqrt(dim)] + _hermitian_basis(dim)
    rows = []
    for _, psi in pset.projectors:
        proj = np.outer(psi, psi.conj())
        rows.append([float(np.real(np.trace(op @ proj))) for op in ops])
    return np.array(rows)


def _project_to_physical(m: np.ndarray) -> np.ndarray:
    """Clip negative eigenvalues and renormalize the trace to 1."""
    m = (m + m.conj().T) / 2.0
    vals, vecs = np.linalg.eigh(m)
    vals = np.clip(vals, 0.0, None)
    total = vals.sum()
    if total == 0:
        raise InsufficientData("reconstruction collapsed to the zero matrix")
    vals /= total
    return (vecs * vals) @ vecs.conj().T


def reconstruct(records, pset: ProjectionSet, norm_policy: str = "pole_sum",
                max_likelihood: bool = False) -> DensityMatrix:
    """Estimate the density matrix from one count record per projector.

    ``norm_policy='pole_sum'`` converts counts to probabilities by
    dividing by the summed counts of the pole subset, the only policy
    implemented.  Raises InsufficientData when the projector set does
    not pin the state (rank check) or the reference flux is zero.
    """
    if norm_policy != "pole_sum":
        raise ValueError(f"unknown normalization policy {norm_policy!r}")
    by_label = {}
    for r in records:
        by_label[r.basis_id] = r
    missing = [lab for lab in pset.labels if lab not in by_label]
    if missing:
        raise InsufficientData(f"missing projector records: {missing}")
    reference = sum(by_label[lab].counts for lab in pset.pole_labels)
    if reference <= 0:
        raise NoCounts("pole-basis reference counts are zero")
    probs = np.array([by_label[lab].counts / reference for lab in pset.labels])

    dim = pset.dim
    basis = _hermitian_basis(dim)
    rows = []
    for _, psi in pset.projectors:
        proj = np.outer(psi, psi.conj())
        rows.append([float(np.real(np.trace(op @ proj))) for op in basis])
    design = np.array(rows)
    if np.linalg.matrix_rank(design) < dim * dim - 1:
        raise InsufficientData("projector set does not determine the state")
    target = probs - 1.0 / dim
    coeffs, *_ = np.linalg.lstsq(design, target, rcond=None)
    raw = np.eye(dim, dtype=np.complex128) / dim
    for c, op in zip(coeffs, basis):
        raw = raw + c * op
    physical = _project_to_physical(raw)
    if max_likelihood:
        physical = _ml_refine(physical, pset, probs)
    return DensityMatrix(physical)


def linear_inversion(records, pset: ProjectionSet) -> np.ndarray:
    """Raw Hermitian unit-trace least-squares estimate, possibly indefinite."""
    by_label = {r.basis_id: r for r in records}
    reference = sum(by_label[lab].counts for lab in pset.pole_labels)
    probs = np.array([by_label[lab].counts / reference for lab in pset.labels])
    dim = pset.dim
    basis = _hermitian_basis(dim)
    rows = [[float(np.real(np.trace(op @ np.outer(psi, psi.conj())))) for op in basis]
            for _, psi in pset.projectors]
    coeffs, *_ = np.linalg.lstsq(np.array(rows), probs - 1.0 / dim, rcond=None)
    raw = np.eye(dim, dtype=np.complex128) / dim
    for c, op in zip(coeffs, basis):
        raw = raw + c * op
    return raw


def _ml_refine(rho: np.ndarray, pset: ProjectionSet, freqs: np.ndarray,
               tol: float = 1e-10, max_iter: int = 10 ** 4) -> np.ndarray:
    """Fixed-point R rho R iteration maximizing sum f_i log p_i."""
    projectors = [np.outer(psi, psi.conj()) for _, psi in pset.projectors]
    f = np.clip(freqs, 0.0, None)
    f = f / f.sum()
    last_ll = -np.inf
    for _ in range(max_iter):
        p = np.array([max(np.real(np.trace(proj @ rho)), 1e-12) for proj in projectors])
        ll = float(np.sum(f * np.log(p)))
        if abs(ll - last_ll) < tol:
            break
        last_ll = ll
        r_op = sum((fi / pi) * proj for fi, pi, proj in zip(f, p, projectors))
        rho = r_op @ rho @ r_op
        rho = (rho + rho.conj().T) / 2.0
        rho = rho / np.real(np.trace(rho))
    return _project_to_physical(rho)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(m)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def fidelity(rho: DensityMatrix, rho0: DensityMatrix, convention: str = "sqrt") -> float:
    """Square-root (amplitude) fidelity tr sqrt(sqrt(rho) rho0 sqrt(rho)).

    For a pure reference this reduces to sqrt(<psi|rho|psi>).  Pass
    ``convention='squared'`` for the squared (transition-probability)
    variant.
    """
    if rho.dim != rho0.dim:
        raise DimMismatch("density matrices have different dimensions")
    root = _psd_sqrt(rho.matrix)
    inner = root @ rho0.matrix @ root
    vals = np.linalg.eigvalsh((inner + inner.conj().T) / 2.0)
    # eigenvalues below the eigensolver's absolute resolution are noise;
    # the square root would otherwise inflate them to ~1e-8
    floor = max(vals.max(), 0.0) * 1e-13
    f = float(np.sum(np.sqrt(vals[vals > floor])))
    f = min(max(f, 0.0), 1.0)
    if convention == "sqrt":
        return f
    if convention == "squared":
        return f * f
    raise ValueError(f"unknown fidelity convention {convention!r}")


def trace_distance(rho: DensityMatrix, rho0: DensityMatrix) -> float:
    if rho.dim != rho0.dim:
        raise DimMismatch("density matrices have different dimensions")
    vals = np.linalg.eigvalsh(rho.matrix - rho0.matrix)
    return float(0.5 * np.sum(np.abs(vals)))


def resample_records(records, seed: int) -> list[CountRecord]:
    """Poisson bootstrap of integer count records (error-bar helper)."""
    rng = np.random.default_rng(seed)
    out = []
    for r in records:
        out.append(CountRecord(basis_id=r.basis_id, counts=int(rng.poisson(r.counts)),
                               background=r.background, acquisition=r.acquisition,
                               beta=r.beta))
    return out


def export_density_csv(rho: DensityMatrix, path) -> None:
    """CSV of (row, col, re, im) entries."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["row", "col", "re", "im"])
        for i in range(rho.dim):
            for j in range(rho.dim):
                v = rho.matrix[i, j]
                w.writerow([i, j, repr(float(v.real)), repr(float(v.imag))])


def tomography_report(pset: ProjectionSet, records, probs, rho: DensityMatrix,
                      fid: float) -> str:
    """Human-readable reconstruction summary."""
    lines = ["basis    counts        p"]
    by_label = {r.basis_id: r for r in records}
    for label, p in zip(pset.labels, probs):
        lines.append(f"{label:<8} {by_label[label].counts:<13g} {p:.6f}")
    lines.append("rho =")
    for i in range(rho.dim):
        lines.append("  " + "  ".join(f"{rho.matrix[i, j]:+.6f}" for j in range(rho.dim)))
    lines.append(f"fidelity = {fid:.6f}")
    return "\n".join(lines)
