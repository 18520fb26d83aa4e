"""Laguerre-Gaussian OAM basis modes and qudit superpositions.

The qudit basis is a p=0 Laguerre-Gaussian family sharing one waist:
|L> carries charge +l, |R> carries -l, and the qutrit adds |G> with
charge 0.  Basis ordering is fixed as [L, R] for qubits and [L, G, R]
for qutrits so density-matrix indexing is unambiguous everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimMismatch, GridTooSmall
from .fieldgrid import GridSpec, TransverseField, inner_product

QUBIT_LABELS = ("L", "R")
QUTRIT_LABELS = ("L", "G", "R")


@dataclass(frozen=True)
class LGModeSpec:
    """A single LG_{l,p=0} mode of waist ``w0`` (meters)."""

    l: int
    w0: float
    p: int = 0

    def __post_init__(self):
        if self.p != 0:
            raise ValueError("only p = 0 radial modes are supported")
        if not self.w0 > 0:
            raise ValueError("waist must be positive")


def basis_charges(dim: int, l: int) -> tuple[int, ...]:
    if dim == 2:
        return (l, -l)
    if dim == 3:
        return (l, 0, -l)
    raise DimMismatch(f"qudit dimension must be 2 or 3, got {dim}")


@dataclass(frozen=True)
class QuditState:
    """Unit-norm coefficient vector over the ordered OAM basis.

    ``l`` is the magnitude of the topological charge carried by |L> / |R>.
    Coefficients are normalized on construction.
    """

    coeffs: np.ndarray = field(repr=True)
    l: int = 1

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.ndim != 1 or c.shape[0] not in (2, 3):
            raise DimMismatch(f"coefficient vector must have length 2 or 3, got {c.shape}")
        norm = np.linalg.norm(c)
        if norm == 0:
            raise ValueError("zero state vector")
        if self.l == 0:
            raise ValueError("charge l must be nonzero")
        c = c / norm
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    @property
    def labels(self) -> tuple[str, ...]:
        return QUBIT_LABELS if self.dim == 2 else QUTRIT_LABELS

    def charges(self) -> tuple[int, ...]:
        return basis_charges(self.dim, self.l)

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.coeffs, np.conj(self.coeffs))


def qubit_state(gamma: float, beta: float, l: int = 1) -> QuditState:
    """Bloch-sphere qubit cos(gamma/2)|L> + sin(gamma/2) e^{i beta}|R>."""
    return QuditState(
        np.array([math.cos(gamma / 2.0),
                  math.sin(gamma / 2.0) * np.exp(1j * beta)]),
        l=l,
    )


def qutrit_state(c_l: complex, c_g: complex, c_r: complex, l: int = 1) -> QuditState:
    return QuditState(np.array([c_l, c_g, c_r], dtype=np.complex128), l=l)


def _support_check(l: int, w0: float, grid: GridSpec) -> None:
    if w0 * (1 + abs(l)) >= grid.extent / 4.0:
        raise GridTooSmall(
            f"mode l={l}, w0={w0:g} m needs extent > {4 * w0 * (1 + abs(l)):g} m, "
            f"grid has {grid.extent:g} m"
        )


def lg_field(spec: LGModeSpec, grid: GridSpec, wavelength: float = 795e-9) -> TransverseField:
    """Sample a normalized LG_{l,0} mode on the grid.

    Amplitude ~ (sqrt(2) r / w0)^|l| exp(-r^2/w0^2) e^{i l phi}; the
    result is renormalized on the grid so its discrete norm is exactly 1.
    """
    _support_check(spec.l, spec.w0, grid)
    r, phi = grid.polar()
    amp = lg_amplitude(spec.l, spec.w0, r, phi)
    f = TransverseField(grid, amp, wavelength)
    return f.normalized()


def lg_amplitude(l: int, w0: float, r: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Analytically normalized continuum LG_{l,0} amplitude."""
    c = math.sqrt(2.0 / (math.pi * math.factorial(abs(l)))) / w0
    radial = (np.sqrt(2.0) * r / w0) ** abs(l) * np.exp(-(r / w0) ** 2)
    return c * radial * np.exp(1j * l * phi)


def synthesize(state: QuditState, w0: float, grid: GridSpec,
               wavelength: float = 795e-9) -> TransverseField:
    """Coherent sum of basis modes weighted by the state coefficients.

    Linear by construction (no output renormalization); the result has
    unit norm up to the residual grid non-orthogonality of the basis.
    """
    total = np.zeros((grid.n, grid.n), dtype=np.complex128)
    for coeff, charge in zip(state.coeffs, state.charges()):
        mode = lg_field(LGModeSpec(charge, w0), grid, wavelength)
        total = total + coeff * mode.values
    return TransverseField(grid, total, wavelength)


def decompose(f: TransverseField, l: int, dim: int, w0: float) -> np.ndarray:
    """Project a field onto the qudit basis; returns raw mode amplitudes."""
    charges = basis_charges(dim, l)
    out = np.empty(dim, dtype=np.complex128)
    for i, charge in enumerate(charges):
        mode = lg_field(LGModeSpec(charge, w0), f.grid, f.wavelength)
        out[i] = inner_product(mode, f)
    return out


def state_from_field(f: TransverseField, l: int, dim: int, w0: float) -> QuditState:
    """Normalized qudit state carried by a field within the mode subspace."""
    return QuditState(decompose(f, l, dim, w0), l=l)
