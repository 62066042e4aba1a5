"""Model Hamiltonians: rectangular boxes, 1-D grid wells, spin ladders, momentum.

Units: the box energy unit is fixed by hbar^2 pi^2 / 2m = 1, so the level
(nx, ny, nz) of a box with sides (b, c, d) sits at

    nx^2/b^2 + ny^2/c^2 + nz^2/d^2.

Grid wells use -d^2/dx^2 + v(x) with Dirichlet walls one step outside the
first and last grid point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import gammaincc, logsumexp

from .spectral import HermitianOperator

WEYL_CONSTANT = math.pi / 6.0  # N(E) ~ WEYL_CONSTANT * V * E**1.5


@dataclass(frozen=True)
class BoxShape:
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ("b", "c", "d"):
            v = float(getattr(self, name))
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"box side {name} must be positive and finite, got {v!r}")
            object.__setattr__(self, name, v)

    @property
    def sides(self) -> tuple[float, float, float]:
        return (self.b, self.c, self.d)

    def volume(self) -> float:
        return self.b * self.c * self.d

    def ground_energy(self) -> float:
        return 1 / self.b**2 + 1 / self.c**2 + 1 / self.d**2

    def scaled(self, factor: float) -> "BoxShape":
        """Isotropic rescale of every side by ``factor``."""
        return BoxShape(self.b * factor, self.c * factor, self.d * factor)


def box_level_energy(shape: BoxShape, nx, ny, nz):
    return (np.asarray(nx) / shape.b) ** 2 + (np.asarray(ny) / shape.c) ** 2 + (np.asarray(nz) / shape.d) ** 2


def weyl_tail(volume: float, beta: float, cutoff_energy: float) -> float:
    """Integral estimate of sum_{E > cutoff} exp(-beta E) for a 3-D box.

    Uses the leading Weyl density (pi/4) V sqrt(E); the Dirichlet boundary
    correction is negative, so this overestimates the true tail.
    """
    if beta <= 0:
        return math.inf
    q = float(gammaincc(1.5, beta * cutoff_energy))
    return (math.pi / 4.0) * volume * math.gamma(1.5) * beta**-1.5 * q


@dataclass(frozen=True)
class BoxSpectrum:
    """Analytic level list of a box, sorted by energy.

    Degenerate levels are separate entries. ``cutoff_energy`` is the
    largest energy guaranteed complete: every level at or below it is
    present.
    """

    shape: BoxShape
    quantum_numbers: np.ndarray  # (N, 3) int
    energies: np.ndarray  # (N,)
    cutoff_energy: float
    tail_weight_bound: float | None = None
    complete: bool = field(default=False, init=False)

    @property
    def cutoff_count(self) -> int:
        return len(self.energies)

    @property
    def levels(self) -> list[tuple[int, int, int, float]]:
        return [(int(a), int(b), int(c), float(e)) for (a, b, c), e in zip(self.quantum_numbers, self.energies)]

    def tail_weight(self, beta: float) -> float:
        """Neglected partition-function mass, relative to the retained sum.

        This is the Weyl tail estimate divided by sum_i exp(-beta e_i), so it
        reads directly as the probability weight missing from the
        truncated canonical state.
        """
        if beta <= 0:
            return math.inf
        tail = weyl_tail(self.shape.volume(), beta, self.cutoff_energy)
        if tail == 0.0:
            return 0.0
        log_z = float(logsumexp(-beta * self.energies))
        return math.exp(math.log(tail) - log_z)

    def keys(self) -> np.ndarray:
        """One integer label per level, stable across shapes (for matching levels)."""
        q = self.quantum_numbers.astype(np.int64)
        return (q[:, 0] << 42) | (q[:, 1] << 21) | q[:, 2]


def _enumerate_box(shape: BoxShape, emax: float):
    b, c, d = shape.sides
    nx = np.arange(1, int(math.floor(b * math.sqrt(emax))) + 2)
    ny = np.arange(1, int(math.floor(c * math.sqrt(emax))) + 2)
    exy = (nx[:, None] / b) ** 2 + (ny[None, :] / c) ** 2
    rem = emax - exy
    with np.errstate(invalid="ignore"):
        nz_max = np.where(rem > 0, np.floor(d * np.sqrt(np.clip(rem, 0, None))) + 1, 0).astype(np.int64)
    counts = nz_max.ravel()
    total = int(counts.sum())
    gx, gy = np.meshgrid(nx, ny, indexing="ij")
    ax = np.repeat(gx.ravel(), counts)
    ay = np.repeat(gy.ravel(), counts)
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    az = np.arange(total, dtype=np.int64) - starts + 1
    e = box_level_energy(shape, ax, ay, az)
    keep = e <= emax
    ax, ay, az, e = ax[keep], ay[keep], az[keep], e[keep]
    order = np.lexsort((az, ay, ax, e))
    q = np.stack([ax[order], ay[order], az[order]], axis=1)
    return q, e[order]


def box_spectrum(
    shape: BoxShape,
    max_energy: float | None = None,
    max_count: int | None = None,
    beta: float | None = None,
) -> BoxSpectrum:
    """Levels of ``shape`` up to ``max_energy`` or the ``max_count`` lowest.

    With ``max_count`` the list is completed through ties, so it may be
    slightly longer than requested. If ``beta`` is given the relative Weyl
    tail weight at that inverse temperature is stored on the result.

    >>> box_spectrum(BoxShape(1, 1, 1), max_count=1).energies
    array([3.])
    """
    if (max_energy is None) == (max_count is None):
        raise ValueError("give exactly one of max_energy or max_count")
    e0 = shape.ground_energy()
    if max_energy is not None:
        if not max_energy >= e0:
            raise ValueError(f"cutoff {max_energy!r} is below the ground level {e0!r}")
        q, e = _enumerate_box(shape, float(max_energy))
        cutoff = float(max_energy)
    else:
        if max_count < 1:
            raise ValueError("max_count must be >= 1")
        guess = max(e0, (max_count / (WEYL_CONSTANT * shape.volume())) ** (2 / 3))
        emax = e0 + 1.2 * guess
        while True:
            q, e = _enumerate_box(shape, emax)
            if len(e) >= max_count:
                break
            emax = e0 + 2 * (emax - e0)
        cutoff = float(e[max_count - 1])
        keep = e <= cutoff
        q, e = q[keep], e[keep]
    q.setflags(write=False)
    e.setflags(write=False)
    spec = BoxSpectrum(shape, q, e, cutoff)
    if beta is not None:
        object.__setattr__(spec, "tail_weight_bound", spec.tail_weight(beta))
    return spec


def box_spectrum_for_beta(shape: BoxShape, beta: float, tail_tol: float = 1e-8) -> BoxSpectrum:
    """Smallest doubling-grown energy cutoff whose relative tail is below ``tail_tol``."""
    if not beta > 0:
        raise ValueError("box spectra are unbounded above; beta must be positive")
    e0 = shape.ground_energy()
    width = 30.0 / beta
    while True:
        spec = box_spectrum(shape, max_energy=e0 + width, beta=beta)
        if spec.tail_weight_bound < tail_tol:
            return spec
        width *= 1.5


@dataclass(frozen=True)
class GridWell:
    grid_points: int
    step: float
    potential: np.ndarray

    def __post_init__(self):
        if int(self.grid_points) != self.grid_points or self.grid_points < 3:
            raise ValueError(f"grid_points must be an integer >= 3, got {self.grid_points!r}")
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ValueError(f"step must be positive, got {self.step!r}")
        v = np.array(self.potential, dtype=float)
        if v.ndim == 0:
            v = np.full(self.grid_points, float(v))
        if v.shape != (self.grid_points,):
            raise ValueError(f"potential has length {v.size}, expected {self.grid_points}")
        if not np.all(np.isfinite(v)):
            raise ValueError("potential contains non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "grid_points", int(self.grid_points))
        object.__setattr__(self, "potential", v)

    @property
    def length(self) -> float:
        """Distance between the two Dirichlet walls."""
        return (self.grid_points + 1) * self.step

    @property
    def x(self) -> np.ndarray:
        return self.step * np.arange(1, self.grid_points + 1)


def load_potential_csv(path: str | Path) -> np.ndarray:
    """Read a potential vector, one value per line (blank and ``#`` lines skipped)."""
    values = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        s = line.strip().split(",")[0].strip()
        if not s or s.startswith("#"):
            continue
        try:
            values.append(float(s))
        except ValueError:
            if not values and lineno == 1:
                continue  # header row
            raise ValueError(f"{path}:{lineno}: not a number: {s!r}") from None
    if not values:
        raise ValueError(f"{path}: no potential values")
    return np.array(values)


def fd_well(well: GridWell) -> HermitianOperator:
    n, h = well.grid_points, well.step
    m = np.diag(2.0 / h**2 + well.potential)
    off = np.full(n - 1, -1.0 / h**2)
    m += np.diag(off, 1) + np.diag(off, -1)
    return HermitianOperator(m)


def spin_system(num_levels: int, gaps) -> HermitianOperator:
    """Diagonal ladder with ground energy 0 and the given successive gaps."""
    g = np.atleast_1d(np.asarray(gaps, dtype=float))
    if num_levels < 2 or g.size != num_levels - 1:
        raise ValueError(f"need num_levels >= 2 and {num_levels - 1} gaps, got {g.size}")
    if np.any(~(g > 0)):
        raise ValueError(f"gaps must be positive, got {g.tolist()}")
    return HermitianOperator(np.diag(np.concatenate([[0.0], np.cumsum(g)])))


def momentum_operator(well: GridWell) -> HermitianOperator:
    """Central-difference -i d/dx on the well's grid."""
    n, h = well.grid_points, well.step
    m = np.zeros((n, n), dtype=complex)
    j = np.arange(n - 1)
    m[j, j + 1] = -1j / (2 * h)
    m[j + 1, j] = 1j / (2 * h)
    return HermitianOperator(m)
