"""Dark-state polariton storage: field <-> spin-wave mapping.

The full space-time propagation is not integrated here.  Under the
adiabatic approximation the bright component vanishes and the polariton
moves at v_g = c cos^2(theta) with tan^2(theta) = g^2 N / Omega_c^2;
switching the coupling off rotates theta to pi/2 and deposits the whole
envelope, transverse profile intact, in the ground-state coherence.
The write/read pair below implements that limit: it is exactly unitary,
and the conserved-norm split across field and matter parts is what the
reduced propagation equation guarantees.  All efficiency loss is modeled
downstream (empirical decay in :mod:`oamem.decoherence`), and the
neglected free-space diffraction phase q^2 D / k_s is checked explicitly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .fieldgrid import GridSpec, TransverseField, spectral_energy_radius, transform_to_spectrum

SPEED_OF_LIGHT = 299792458.0
Z_SAMPLES = 64
DIFFRACTION_PHASE_LIMIT = 0.1


@dataclass(frozen=True)
class MemoryParams:
    """Ensemble and beam constants of the storage medium.

    ``omega_c`` is the coupling Rabi-frequency schedule in rad/s as a
    function of time; ``g2n`` is the collective coupling g^2 N in
    rad^2/s^2.  ``alpha`` is the signal/coupling angle, which sets the
    spin-wave longitudinal wave vector dk = k_c (cos(alpha) - 1) <= 0.
    """

    lambda_s: float = 795e-9
    lambda_c: float = 795e-9
    alpha: float = 0.0
    g2n: float = 1e16
    omega_c: Callable[[float], float] | None = None
    diameter: float = 2e-3
    temperature: float = 100e-6
    mass: float = 1.4099932e-25
    c: float = SPEED_OF_LIGHT

    def __post_init__(self):
        for name in ("lambda_s", "lambda_c", "g2n", "diameter", "temperature", "mass", "c"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.omega_c is None:
            object.__setattr__(self, "omega_c", _constant_schedule(5e7))

    @property
    def k_s(self) -> float:
        return 2.0 * np.pi / self.lambda_s

    @property
    def k_c(self) -> float:
        return 2.0 * np.pi / self.lambda_c

    @property
    def delta_k(self) -> float:
        """Longitudinal spin-wave vector k_c (cos(alpha) - 1), in rad/m."""
        return self.k_c * (math.cos(self.alpha) - 1.0)


def _constant_schedule(value: float) -> Callable[[float], float]:
    def schedule(t: float) -> float:
        return value
    return schedule


def constant_schedule(value: float) -> Callable[[float], float]:
    """Time-independent coupling Rabi frequency."""
    if value < 0:
        raise ValueError("Rabi frequency must be >= 0")
    return _constant_schedule(value)


@dataclass(frozen=True)
class SpinWave:
    """Collective ground-state coherence holding a stored envelope.

    ``values`` is the transverse profile; the longitudinal content is a
    set of slices at positions ``z`` in [0, D] with atomic-density
    weights (summing to 1) and the unit-modulus coherence phase each
    slice carries.  At write time the phase is exp(-i dk z), so forward
    readout recombines to unity.
    """

    grid: GridSpec
    values: np.ndarray = field(repr=False)
    delta_k: float = 0.0
    z: np.ndarray = field(default=None, repr=False)
    weight: np.ndarray = field(default=None, repr=False)
    coherence_phase: np.ndarray = field(default=None, repr=False)
    wavelength: float = 795e-9

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.complex128)
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        if v.shape != (self.grid.n, self.grid.n):
            raise ValueError("spin-wave shape does not match grid")
        for name in ("z", "weight", "coherence_phase"):
            arr = getattr(self, name)
            if arr is None:
                raise ValueError(f"{name} must be provided")
            arr = np.ascontiguousarray(arr)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.pixel_area))

    def z_profile(self) -> np.ndarray:
        """Complex longitudinal samples weight * coherence_phase."""
        return self.weight * self.coherence_phase

    def with_values(self, values: np.ndarray) -> "SpinWave":
        return SpinWave(self.grid, values, self.delta_k, self.z, self.weight,
                        self.coherence_phase, self.wavelength)


@dataclass(frozen=True)
class PolaritonState:
    """Norm split of a polariton between its field and matter parts."""

    theta: float
    field_part: float
    matter_part: float

    def __post_init__(self):
        total = self.field_part ** 2 + self.matter_part ** 2
        if total == 0:
            raise ValueError("empty polariton")
        ratio_ok = np.isclose(self.matter_part ** 2 / total, math.sin(self.theta) ** 2,
                              atol=1e-10)
        if not ratio_ok:
            raise ValueError("parts inconsistent with mixing angle")


def mixing_angle(params: MemoryParams, t: float) -> float:
    """theta = arctan(sqrt(g^2 N) / Omega_c(t)); pi/2 when the coupling is off."""
    omega = params.omega_c(t)
    if omega < 0:
        raise ValueError("Omega_c must be >= 0")
    return math.atan2(math.sqrt(params.g2n), omega)


def group_velocity(params: MemoryParams, t: float) -> float:
    """v_g = c / (1 + g^2 N / Omega_c^2); zero exactly when Omega_c = 0."""
    omega = params.omega_c(t)
    if omega == 0.0:
        return 0.0
    return params.c / (1.0 + params.g2n / omega ** 2)


def polariton_split(params: MemoryParams, t: float, total_norm: float = 1.0) -> PolaritonState:
    theta = mixing_angle(params, t)
    return PolaritonState(theta, total_norm * math.cos(theta), total_norm * math.sin(theta))


def _gaussian_z_profile(diameter: float) -> tuple[np.ndarray, np.ndarray]:
    # Gaussian atomic density across [0, D], sigma = D/4
    z = np.linspace(0.0, diameter, Z_SAMPLES)
    w = np.exp(-((z - diameter / 2.0) ** 2) / (2.0 * (diameter / 4.0) ** 2))
    return z, w / w.sum()


def write(f: TransverseField, params: MemoryParams) -> SpinWave:
    """Map an optical envelope onto the spin wave (unit write efficiency).

    Warns when the neglected diffraction phase q^2 D / k_s exceeds 0.1
    over the occupied spectrum.
    """
    phase = diffraction_check(params, f)
    if phase >= DIFFRACTION_PHASE_LIMIT:
        warnings.warn(
            f"diffraction phase q^2 D / k_s = {phase:.3g} >= {DIFFRACTION_PHASE_LIMIT}; "
            "the stored profile will not read out faithfully",
            stacklevel=2,
        )
    z, weight = _gaussian_z_profile(params.diameter)
    coherence_phase = np.exp(-1j * params.delta_k * z)
    return SpinWave(f.grid, -f.values, params.delta_k, z, weight, coherence_phase,
                    f.wavelength)


def read(s: SpinWave, params: MemoryParams) -> TransverseField:
    """Forward readout of a (possibly decohered) spin wave.

    The retrieved amplitude carries the longitudinal sum
    sum_j w_j phase_j exp(+i dk z_j), which is exactly 1 right after
    writing and drops when slices have drifted along z with dk != 0.
    """
    longitudinal = np.sum(s.weight * s.coherence_phase * np.exp(1j * params.delta_k * s.z))
    return TransverseField(s.grid, -s.values * longitudinal, s.wavelength)


def displace_longitudinal(s: SpinWave, dz) -> SpinWave:
    """Move slices (atoms carry their coherence phase) by dz meters.

    ``dz`` may be a scalar or a per-slice array; weights move with the
    atoms so only the phase pattern relative to exp(i dk z) changes.
    """
    z = s.z + np.broadcast_to(np.asarray(dz, dtype=np.float64), s.z.shape)
    return SpinWave(s.grid, s.values, s.delta_k, z, s.weight, s.coherence_phase,
                    s.wavelength)


def diffraction_check(params: MemoryParams, f: TransverseField) -> float:
    """Max diffraction phase q^2 D / k_s over the 99%-energy spectrum."""
    q99 = spectral_energy_radius(transform_to_spectrum(f), fraction=0.99)
    return float(q99 ** 2 * params.diameter / params.k_s)
