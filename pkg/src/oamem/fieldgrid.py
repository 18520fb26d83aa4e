"""Transverse field grids, inner products, and unitary 2-D spectral transforms.

A transverse plane is sampled on a square grid of ``n`` pixels per side.
Fields carry a complex envelope per pixel; spectra carry the envelope's
angular-frequency content on the matching ``q`` grid (rad/m).  The
transform pair uses the symmetric 1/(2*pi) continuous convention,
discretized so that the physical L2 norm (pixel value times pixel area)
is conserved exactly:

    S(q) = (1 / 2 pi) * sum f(rho) exp(-i q . rho) dx^2
    sum |S|^2 dq^2 == sum |f|^2 dx^2
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch


@dataclass(frozen=True)
class GridSpec:
    """Square sampling grid: ``n`` pixels per side over ``extent`` meters.

    ``n`` must be a power of two (keeps the FFT fast and the centered
    transform exact) and at least 16.  ``center`` is the physical position
    of the grid center in meters.
    """

    n: int
    extent: float
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.n < 16:
            raise ValueError(f"grid needs n >= 16, got {self.n}")
        if self.n & (self.n - 1) != 0:
            raise ValueError(f"grid size must be a power of two, got {self.n}")
        if not self.extent > 0:
            raise ValueError(f"extent must be positive, got {self.extent}")

    @property
    def pitch(self) -> float:
        """Pixel pitch in meters, identical along x and y."""
        return self.extent / self.n

    @property
    def pixel_area(self) -> float:
        return self.pitch ** 2

    def axis(self) -> np.ndarray:
        """Pixel-center coordinates relative to the grid center."""
        return (np.arange(self.n) - self.n // 2) * self.pitch

    def xs(self) -> np.ndarray:
        return self.axis() + self.center[0]

    def ys(self) -> np.ndarray:
        return self.axis() + self.center[1]

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """X, Y coordinate arrays, shape (n, n), row index = y."""
        return np.meshgrid(self.xs(), self.ys())

    def polar(self) -> tuple[np.ndarray, np.ndarray]:
        """Radius and azimuth about the grid center."""
        x, y = np.meshgrid(self.axis(), self.axis())
        return np.hypot(x, y), np.arctan2(y, x)

    def q_axis(self) -> np.ndarray:
        """Centered spatial angular frequencies in rad/m."""
        return 2.0 * np.pi * np.fft.fftshift(np.fft.fftfreq(self.n, d=self.pitch))

    @property
    def q_pitch(self) -> float:
        return 2.0 * np.pi / self.extent

    @property
    def q_pixel_area(self) -> float:
        return self.q_pitch ** 2


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.complex128)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class TransverseField:
    """Complex envelope sampled on a grid, with the carrier wavelength.

    Values are immutable after construction; operations return new fields.
    """

    grid: GridSpec
    values: np.ndarray = field(repr=False)
    wavelength: float

    def __post_init__(self):
        v = _freeze(self.values)
        object.__setattr__(self, "values", v)
        if v.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"values shape {v.shape} does not match grid n={self.grid.n}")
        if not np.all(np.isfinite(v.view(np.float64))):
            raise ValueError("field values must be finite")
        if not self.wavelength > 0:
            raise ValueError("wavelength must be positive")

    @property
    def wavenumber(self) -> float:
        return 2.0 * np.pi / self.wavelength

    def norm(self) -> float:
        """Physical L2 norm sqrt(sum |f|^2 * pixel_area)."""
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.pixel_area))

    def power(self) -> float:
        return self.norm() ** 2

    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def normalized(self) -> "TransverseField":
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize a zero field")
        return self.with_values(self.values / n)

    def with_values(self, values: np.ndarray) -> "TransverseField":
        return TransverseField(self.grid, values, self.wavelength)


@dataclass(frozen=True)
class SpectrumField:
    """Angular spectrum of a transverse field, axes in rad/m."""

    source_grid: GridSpec
    values: np.ndarray = field(repr=False)
    wavelength: float

    def __post_init__(self):
        object.__setattr__(self, "values", _freeze(self.values))

    def q_axis(self) -> np.ndarray:
        return self.source_grid.q_axis()

    def q_mesh(self) -> tuple[np.ndarray, np.ndarray]:
        q = self.q_axis()
        return np.meshgrid(q, q)

    def norm(self) -> float:
        return float(
            np.sqrt(np.sum(np.abs(self.values) ** 2) * self.source_grid.q_pixel_area)
        )


def _centered_fft2(v: np.ndarray) -> np.ndarray:
    # exact centered DFT for even n: index j -> coordinate (j - n/2)
    return np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(v), norm="ortho"))


def _centered_ifft2(v: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(v), norm="ortho"))


def _center_phase(grid: GridSpec) -> np.ndarray | float:
    cx, cy = grid.center
    if cx == 0.0 and cy == 0.0:
        return 1.0
    qx, qy = np.meshgrid(grid.q_axis(), grid.q_axis())
    return np.exp(-1j * (qx * cx + qy * cy))


def transform_to_spectrum(f: TransverseField) -> SpectrumField:
    """Unitary 2-D Fourier transform of the envelope.

    Norm-preserving: ``spectrum.norm() == f.norm()`` to machine precision.
    """
    g = f.grid
    scale = g.n * g.pixel_area / (2.0 * np.pi)
    values = _centered_fft2(f.values) * scale * _center_phase(g)
    return SpectrumField(g, values, f.wavelength)


def inverse_transform(s: SpectrumField) -> TransverseField:
    """Exact inverse of :func:`transform_to_spectrum`."""
    g = s.source_grid
    scale = g.n * g.pixel_area / (2.0 * np.pi)
    values = _centered_ifft2(s.values * np.conj(_center_phase(g)) / scale)
    return TransverseField(g, values, s.wavelength)


def inner_product(a: TransverseField, b: TransverseField) -> complex:
    """Discrete <a|b> = sum conj(a) * b * pixel_area.

    Raises GridMismatch unless both fields share the same GridSpec.
    """
    if a.grid != b.grid:
        raise GridMismatch(f"grids differ: {a.grid} vs {b.grid}")
    return complex(np.vdot(a.values, b.values) * a.grid.pixel_area)


def overlap(a: TransverseField, b: TransverseField) -> complex:
    """Normalized projection <a|b> / (|a| |b|)."""
    return inner_product(a, b) / (a.norm() * b.norm())


def spectral_energy_radius(s: SpectrumField, fraction: float = 0.99) -> float:
    """Smallest |q| enclosing the given fraction of spectral energy."""
    qx, qy = s.q_mesh()
    qr = np.hypot(qx, qy).ravel()
    e = (np.abs(s.values) ** 2).ravel()
    order = np.argsort(qr)
    cum = np.cumsum(e[order])
    total = cum[-1]
    if total == 0:
        return 0.0
    idx = int(np.searchsorted(cum, fraction * total))
    return float(qr[order[min(idx, qr.size - 1)]])


def export_pgm(f: TransverseField, path) -> None:
    """Write the intensity map as a 16-bit binary PGM (big-endian, row-major)."""
    inten = f.intensity()
    peak = inten.max()
    if peak > 0:
        inten = inten / peak
    data = np.round(inten * 65535.0).astype(">u2")
    with open(path, "wb") as fh:
        fh.write(f"P5\n{f.grid.n} {f.grid.n}\n65535\n".encode("ascii"))
        fh.write(data.tobytes())


def export_csv(f: TransverseField, path) -> None:
    """Write per-pixel (x, y, Re, Im) rows."""
    x, y = f.grid.mesh()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "re", "im"])
        for xi, yi, vi in zip(x.ravel(), y.ravel(), f.values.ravel()):
            w.writerow([repr(float(xi)), repr(float(yi)),
                        repr(float(vi.real)), repr(float(vi.imag))])


def read_pgm(path) -> np.ndarray:
    """Read back a binary PGM written by :func:`export_pgm` (test helper)."""
    with open(path, "rb") as fh:
        magic = fh.readline().strip()
        if magic != b"P5":
            raise ValueError("not a binary PGM file")
        dims = fh.readline().split()
        width, height = int(dims[0]), int(dims[1])
        maxval = int(fh.readline())
        count = width * height
        nbytes = 2 * count if maxval > 255 else count
        raw = fh.read(nbytes)
    dtype = ">u2" if maxval > 255 else "u1"
    return np.frombuffer(raw, dtype=dtype).reshape(height, width).astype(np.int64)
