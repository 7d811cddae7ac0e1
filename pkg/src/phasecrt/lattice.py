"""Phase-space lattices, mixed-representation matrix elements, classification.

The phase space is the M x M grid of (q, k) labels; each point stands for a
cell of area 2*pi/M (hbar = 1). A lattice for split (M1, M2) has q-spacing M1
and k-spacing M2, optionally shifted, and always holds exactly M points. A
state sits over such a lattice when |<q|rho|k>| = 1/sqrt(M) on every lattice
point and vanishes elsewhere; that state then covers total area 2*pi exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    StateVector,
    default_tolerance,
    fourier_matrix,
    momentum_state,
    norm_tolerance,
)
from .numtheory import CoprimeSplit, enumerate_splits


@dataclass(frozen=True, order=True)
class PhasePoint:
    q: int
    k: int


@dataclass(frozen=True)
class VNLattice:
    split: CoprimeSplit
    shift_q: int = 0
    shift_k: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.shift_q < self.split.M1:
            raise ValueError(f"shift_q={self.shift_q} out of range [0, {self.split.M1})")
        if not 0 <= self.shift_k < self.split.M2:
            raise ValueError(f"shift_k={self.shift_k} out of range [0, {self.split.M2})")


def lattice_points(lattice: VNLattice) -> frozenset[PhasePoint]:
    """The M points (shift_q + n*M1 mod M, shift_k + m*M2 mod M)."""
    s = lattice.split
    return frozenset(
        PhasePoint((lattice.shift_q + n * s.M1) % s.M, (lattice.shift_k + m * s.M2) % s.M)
        for n in range(s.M2)
        for m in range(s.M1)
    )


class DensityMatrix:
    """Hermitian unit-trace M x M matrix; positivity is reported, not enforced."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        arr = np.array(matrix, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 2:
            raise ValueError("matrix must be square with dim >= 2")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix entries must be finite")
        M = arr.shape[0]
        herm = float(np.max(np.abs(arr - arr.conj().T)))
        if herm >= norm_tolerance(M):
            raise ValueError(f"matrix is not Hermitian (residual {herm:.3e})")
        tr = complex(np.trace(arr))
        if abs(tr - 1.0) >= norm_tolerance(M):
            raise ValueError(f"trace is {tr}, expected 1")
        arr.setflags(write=False)
        self.matrix = arr

    @classmethod
    def from_state(cls, state: StateVector) -> "DensityMatrix":
        v = state.amplitudes
        n2 = float(np.sum(np.abs(v) ** 2))
        return cls(np.outer(v, v.conj()) / n2)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue; negative values flag a non-physical matrix."""
        return float(np.linalg.eigvalsh(self.matrix)[0])


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    arr = np.asarray(rho, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("expected a StateVector, DensityMatrix or square matrix")
    return arr


def mixed_element_matrix(rho: StateVector | DensityMatrix | np.ndarray) -> np.ndarray:
    """<q|rho|k> for all (q, k); rows are position, columns momentum."""
    if isinstance(rho, StateVector):
        return np.outer(rho.amplitudes, np.conj(rho.momentum_amplitudes()))
    mat = _as_matrix(rho)
    return mat @ fourier_matrix(mat.shape[0])


def mixed_element(rho: StateVector | DensityMatrix | np.ndarray, q: int, k: int) -> complex:
    """<q|rho|k> for a single phase point."""
    if isinstance(rho, StateVector):
        M = rho.dim
        if not (0 <= q < M and 0 <= k < M):
            raise ValueError(f"(q, k) = ({q}, {k}) out of range [0, {M})^2")
        return complex(rho.amplitudes[q] * np.conj(rho.momentum_amplitudes()[k]))
    mat = _as_matrix(rho)
    M = mat.shape[0]
    if not (0 <= q < M and 0 <= k < M):
        raise ValueError(f"(q, k) = ({q}, {k}) out of range [0, {M})^2")
    return complex(mat[q] @ momentum_state(M, k).amplitudes)


def default_support_threshold(M: int) -> float:
    """An order below the smallest legitimate magnitude 1/sqrt(M), far above noise."""
    return 1e-6 / math.sqrt(M)


def support(rho, threshold: float | None = None) -> tuple[PhasePoint, ...]:
    """Phase points where |<q|rho|k>| exceeds threshold, row-major in (q, k)."""
    mm = np.abs(mixed_element_matrix(rho))
    if threshold is None:
        threshold = default_support_threshold(mm.shape[0])
    elif threshold <= 0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    qs, ks = np.nonzero(mm > threshold)
    return tuple(PhasePoint(int(q), int(k)) for q, k in zip(qs, ks))


@dataclass(frozen=True)
class NotVN:
    """Negative classification outcome; a value, not an error."""

    reason: str
    detail: str = ""


def classify_vn_state(
    rho, split: CoprimeSplit, threshold: float | None = None
) -> VNLattice | NotVN:
    """The shifted lattice carrying rho, or NotVN with the violated condition.

    A positive answer requires the support to equal one shifted lattice of the
    given split exactly, with every on-support magnitude within tolerance of
    1/sqrt(M).
    """
    M = split.M
    pts = support(rho, threshold)
    if len(pts) != M:
        return NotVN("wrong count", f"support has {len(pts)} points, expected {M}")
    first = pts[0]
    lattice = VNLattice(split, first.q % split.M1, first.k % split.M2)
    if set(pts) != lattice_points(lattice):
        return NotVN(
            "wrong support geometry",
            f"support is not the {split.describe()} lattice shifted to "
            f"({lattice.shift_q}, {lattice.shift_k})",
        )
    mm = np.abs(mixed_element_matrix(rho))
    target = 1.0 / math.sqrt(M)
    dev = max(abs(mm[p.q, p.k] - target) for p in pts)
    if dev >= default_tolerance(M):
        return NotVN("non-uniform magnitude", f"max deviation from 1/sqrt(M) is {dev:.3e}")
    return lattice


@dataclass(frozen=True)
class LineSupport:
    """Support along one full row or column: the degenerate M1 in {1, M} case.

    orientation "position" means a fixed-q column (a position eigenstate);
    "momentum" means a fixed-k row.
    """

    orientation: str
    index: int


def classify_any(rho, M: int, threshold: float | None = None):
    """Try every coprime split in both orientations, then the degenerate lines."""
    for split in enumerate_splits(M):
        for oriented in (split, split.swapped()):
            verdict = classify_vn_state(rho, oriented, threshold)
            if isinstance(verdict, VNLattice):
                return verdict
    pts = support(rho, threshold)
    if len(pts) == M:
        qs = {p.q for p in pts}
        ks = {p.k for p in pts}
        if len(qs) == 1 and len(ks) == M:
            return LineSupport("position", next(iter(qs)))
        if len(ks) == 1 and len(qs) == M:
            return LineSupport("momentum", next(iter(ks)))
    return NotVN("no lattice match", f"support of {len(pts)} points fits no split of {M}")


@dataclass(frozen=True)
class AreaReport:
    """Phase-space areas in units of 2*pi (Planck's h for hbar = 1), exact."""

    cell_area: Fraction
    points_per_state: int
    state_area: Fraction

    @property
    def cell_area_value(self) -> float:
        return 2.0 * math.pi * float(self.cell_area)

    @property
    def state_area_value(self) -> float:
        return 2.0 * math.pi * float(self.state_area)


def area_report(M: int, split: CoprimeSplit) -> AreaReport:
    """Cell and per-state areas; M cells of 1/M each make the state area exactly 1."""
    if split.M != M:
        raise ValueError(f"split belongs to M={split.M}, not {M}")
    cell = Fraction(1, M)
    return AreaReport(cell_area=cell, points_per_state=M, state_area=cell * M)
