"""Torus-labeled orthonormal bases of the line space and their phase relations.

Four constructions share the label (q1, k2) in [0, M1) x [0, M2). Every
vector is a simultaneous eigenvector of clock(M, M1), eigenvalue
omega_M1**q1, and translate(M, M1), eigenvalue omega_M2**k2:

  C1     sum over momentum kets at CRT-composed labels k1*N1*L1 + k2*N2*L2
  C2     sum over position kets at CRT-composed labels q1*N1*L1 + q2*N2*L2
         (its vectors are the partially localized states)
  E_MOM  sum over momentum kets k2 + k1*M2
  E_POS  sum over position kets q1 + q2*M1

The two E kinds carry no CRT data and exist for any divisor M1 of M; the two
C kinds need gcd(M1, M2) = 1. C1 and C2 are the same basis vector for vector
(delta overlap with no phase); the others agree up to label-dependent phases
tabulated in CROSS_PHASE_FORMS and checked by compare_cross_phases.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import (
    PHASE_EXPONENT_RESIDUAL_TOL,
    DimensionMismatchError,
    StateVector,
    apply,
    clock,
    default_tolerance,
    fourier_matrix,
    omega_power,
    phase_exponent,
    translate,
)
from .numtheory import CoprimeSplit, NonCoprimeError, crt_compose, make_split


class BasisKind(enum.Enum):
    C1 = "C1"
    C2 = "C2"
    E_MOM = "Emom"
    E_POS = "Epos"

    @property
    def needs_coprime(self) -> bool:
        return self in (BasisKind.C1, BasisKind.C2)

    @classmethod
    def parse(cls, text: str) -> "BasisKind":
        for kind in cls:
            if text.lower() in (kind.value.lower(), kind.name.lower()):
                return kind
        raise ValueError(f"unknown basis kind {text!r}; expected one of "
                         f"{[k.value for k in cls]}")


@dataclass(frozen=True)
class TorusLabel:
    q1: int
    k2: int


class RepBasis:
    """M orthonormal vectors labeled by (q1, k2) in [0, M1) x [0, M2)."""

    __slots__ = ("kind", "M1", "M2", "split", "conjugated", "_amps")

    def __init__(self, kind: BasisKind, M1: int, M2: int, amps: np.ndarray,
                 split: CoprimeSplit | None = None, conjugated: bool = False):
        amps = np.asarray(amps, dtype=np.complex128)
        if amps.shape != (M1, M2, M1 * M2):
            raise ValueError(f"amplitude block must have shape ({M1}, {M2}, {M1 * M2})")
        amps.setflags(write=False)
        self.kind = kind
        self.M1 = M1
        self.M2 = M2
        self.split = split
        self.conjugated = conjugated
        self._amps = amps

    @property
    def M(self) -> int:
        return self.M1 * self.M2

    def vector(self, q1: int, k2: int) -> StateVector:
        if not 0 <= q1 < self.M1:
            raise ValueError(f"q1={q1} out of range [0, {self.M1})")
        if not 0 <= k2 < self.M2:
            raise ValueError(f"k2={k2} out of range [0, {self.M2})")
        return StateVector(self._amps[q1, k2], normalized=True)

    def labels(self) -> Iterator[TorusLabel]:
        for q1 in range(self.M1):
            for k2 in range(self.M2):
                yield TorusLabel(q1, k2)

    def items(self) -> Iterator[tuple[TorusLabel, StateVector]]:
        for label in self.labels():
            yield label, self.vector(label.q1, label.k2)

    @property
    def vectors(self) -> dict[TorusLabel, StateVector]:
        return dict(self.items())

    def as_matrix(self) -> np.ndarray:
        """Columns are the basis vectors, labels in row-major (q1, k2) order."""
        return self._amps.reshape(self.M, self.M).T

    def gram_residual(self) -> float:
        mat = self.as_matrix()
        g = mat.conj().T @ mat
        return float(np.max(np.abs(g - np.eye(self.M))))

    def __repr__(self) -> str:
        tag = ", conjugated" if self.conjugated else ""
        return f"RepBasis({self.kind.value}, M1={self.M1}, M2={self.M2}{tag})"


def build_C1(split: CoprimeSplit) -> RepBasis:
    """vector(q1,k2) = (1/sqrt(M1)) sum_k1 omega_M1**(-k1*q1*N1) |k1*N1*L1 + k2*N2*L2>."""
    M, M1, M2 = split.M, split.M1, split.M2
    F = fourier_matrix(M)
    amps = np.zeros((M1, M2, M), dtype=np.complex128)
    for q1 in range(M1):
        for k2 in range(M2):
            acc = np.zeros(M, dtype=np.complex128)
            for k1 in range(M1):
                acc += omega_power(M1, -k1 * q1 * split.N1) * F[:, crt_compose(split, k1, k2)]
            amps[q1, k2] = acc / math.sqrt(M1)
    return RepBasis(BasisKind.C1, M1, M2, amps, split=split)


def build_C2(split: CoprimeSplit) -> RepBasis:
    """vector(q1,k2) = (1/sqrt(M2)) sum_q2 omega_M2**(k2*q2*N2) |q1*N1*L1 + q2*N2*L2>."""
    M, M1, M2 = split.M, split.M1, split.M2
    amps = np.zeros((M1, M2, M), dtype=np.complex128)
    for q1 in range(M1):
        for k2 in range(M2):
            for q2 in range(M2):
                q = crt_compose(split, q1, q2)
                amps[q1, k2, q] = omega_power(M2, k2 * q2 * split.N2)
    amps /= math.sqrt(M2)
    return RepBasis(BasisKind.C2, M1, M2, amps, split=split)


def build_pls(split: CoprimeSplit, q01: int, k02: int) -> StateVector:
    """The partially localized state: sharp at q = q01 mod M1, pure phase across q2.

    Identical to build_C2(split).vector(q01, k02); built directly to avoid
    constructing the whole basis.
    """
    if not 0 <= q01 < split.M1:
        raise ValueError(f"q01={q01} out of range [0, {split.M1})")
    if not 0 <= k02 < split.M2:
        raise ValueError(f"k02={k02} out of range [0, {split.M2})")
    amps = np.zeros(split.M, dtype=np.complex128)
    for q2 in range(split.M2):
        amps[crt_compose(split, q01, q2)] = omega_power(split.M2, k02 * q2 * split.N2)
    return StateVector(amps / math.sqrt(split.M2), normalized=True)


def _split_or_none(M: int, M1: int) -> CoprimeSplit | None:
    try:
        return make_split(M, M1)
    except ValueError:
        return None


def _check_divisor(M: int, M1: int) -> int:
    if M < 2:
        raise ValueError(f"need M >= 2, got {M}")
    if M1 < 1 or M % M1 != 0:
        raise ValueError(f"{M1} does not divide {M}")
    return M // M1


def build_E_pos(M: int, M1: int) -> RepBasis:
    """vector(q1,k2) = (1/sqrt(M2)) sum_q2 omega_M2**(k2*q2) |q1 + q2*M1>.

    Defined for any divisor M1 of M; no coprimality needed.
    """
    M2 = _check_divisor(M, M1)
    amps = np.zeros((M1, M2, M), dtype=np.complex128)
    for q1 in range(M1):
        for k2 in range(M2):
            for q2 in range(M2):
                amps[q1, k2, (q1 + q2 * M1) % M] = omega_power(M2, k2 * q2)
    amps /= math.sqrt(M2)
    return RepBasis(BasisKind.E_POS, M1, M2, amps, split=_split_or_none(M, M1))


def build_E_mom(M: int, M1: int) -> RepBasis:
    """vector(q1,k2) = (1/sqrt(M1)) sum_k1 omega_M1**(-k1*q1) |k2 + k1*M2>.

    Defined for any divisor M1 of M; no coprimality needed.
    """
    M2 = _check_divisor(M, M1)
    F = fourier_matrix(M)
    amps = np.zeros((M1, M2, M), dtype=np.complex128)
    for q1 in range(M1):
        for k2 in range(M2):
            acc = np.zeros(M, dtype=np.complex128)
            for k1 in range(M1):
                acc += omega_power(M1, -k1 * q1) * F[:, (k2 + k1 * M2) % M]
            amps[q1, k2] = acc / math.sqrt(M1)
    return RepBasis(BasisKind.E_MOM, M1, M2, amps, split=_split_or_none(M, M1))


def build_basis(kind: BasisKind, M: int, M1: int) -> RepBasis:
    """Dispatch on kind; C kinds require a coprime split."""
    if kind.needs_coprime:
        try:
            split = make_split(M, M1)
        except NonCoprimeError:
            raise NonCoprimeError(
                f"{kind.value} requires gcd(M1, M2) = 1; "
                f"gcd({M1}, {M // M1 if M1 and M % M1 == 0 else '?'}) != 1") from None
        return build_C1(split) if kind is BasisKind.C1 else build_C2(split)
    if kind is BasisKind.E_POS:
        return build_E_pos(M, M1)
    return build_E_mom(M, M1)


def conjugate_state(state: StateVector) -> StateVector:
    """Swap position and momentum roles.

    The result's position amplitudes are the complex-conjugated momentum
    amplitudes of the input, which makes the map an exact involution: applying
    it twice returns the original state.
    """
    return StateVector(np.conj(state.momentum_amplitudes()), normalized=state.normalized)


def conjugate_basis(basis: RepBasis) -> RepBasis:
    """Conjugate every vector and relabel: orientation (M1, M2) -> (M2, M1),
    vector (q1, k2) -> (k2, q1)."""
    M1, M2 = basis.M1, basis.M2
    amps = np.zeros((M2, M1, basis.M), dtype=np.complex128)
    for label, vec in basis.items():
        amps[label.k2, label.q1] = conjugate_state(vec).amplitudes
    split = basis.split.swapped() if basis.split is not None else None
    return RepBasis(basis.kind, M2, M1, amps, split=split,
                    conjugated=not basis.conjugated)


def factor_kernel(split: CoprimeSplit, k1: int, q1: int) -> complex:
    """<k1|q1> = omega_M1**(-q1*k1*N1) / sqrt(M1) for the first factor.

    The second factor's kernel is factor_kernel(split.swapped(), k2, q2), and
    the product of the two equals <k|q> under CRT-composed labels.
    """
    if not 0 <= k1 < split.M1:
        raise ValueError(f"k1={k1} out of range [0, {split.M1})")
    if not 0 <= q1 < split.M1:
        raise ValueError(f"q1={q1} out of range [0, {split.M1})")
    return omega_power(split.M1, -q1 * k1 * split.N1) / math.sqrt(split.M1)


def overlap_matrix(basis_a: RepBasis, basis_b: RepBasis) -> np.ndarray:
    """<a(row)|b(col)> for all label pairs, labels in row-major (q1, k2) order."""
    if basis_a.M != basis_b.M:
        raise DimensionMismatchError(f"dims differ: {basis_a.M} vs {basis_b.M}")
    return basis_a.as_matrix().conj().T @ basis_b.as_matrix()


def overlap_phase_table(
    basis_a: RepBasis, basis_b: RepBasis
) -> dict[tuple[TorusLabel, TorusLabel], complex]:
    """Full overlap map (label_a, label_b) -> <a|b>."""
    g = overlap_matrix(basis_a, basis_b)
    labels_a = list(basis_a.labels())
    labels_b = list(basis_b.labels())
    return {
        (la, lb): complex(g[i, j])
        for i, la in enumerate(labels_a)
        for j, lb in enumerate(labels_b)
    }


# Claimed closed forms for the diagonal phase of each cross-basis overlap,
# as integer exponents of omega_M. Off-diagonal entries vanish for all pairs.
# The brute-force overlap is always the truth source; compare_cross_phases
# records a discrepancy wherever a measured exponent differs from these.
CROSS_PHASE_FORMS = {
    (BasisKind.C1, BasisKind.C2): lambda split, q1, k2: 0,
    (BasisKind.C1, BasisKind.E_MOM): lambda split, q1, k2: k2 * q1 * split.N1 * split.M2,
    (BasisKind.C2, BasisKind.E_POS): lambda split, q1, k2: -k2 * q1 * split.N2 * split.M1,
    (BasisKind.E_MOM, BasisKind.E_POS): lambda split, q1, k2: k2 * q1,
}


@dataclass(frozen=True)
class PhaseDiscrepancy:
    label: TorusLabel
    measured_exponent: int
    claimed_exponent: int


@dataclass(frozen=True)
class OverlapComparison:
    """Outcome of checking a cross-basis overlap table against its closed form.

    status is "pass" when the delta-times-phase structure holds and every
    diagonal exponent matches the claimed form; "discrepancy" when the
    structure holds but some exponents differ (they are then listed); "fail"
    when the structure itself is broken.
    """

    kind_a: BasisKind
    kind_b: BasisKind
    status: str
    max_modulus_error: float
    max_exponent_residual: float
    discrepancies: tuple[PhaseDiscrepancy, ...]


def compare_cross_phases(
    basis_a: RepBasis,
    basis_b: RepBasis,
    tol: float | None = None,
) -> OverlapComparison:
    """Check <a'|b> = delta*delta*phase against the claimed exponent table."""
    key = (basis_a.kind, basis_b.kind)
    if key not in CROSS_PHASE_FORMS:
        raise ValueError(f"no claimed closed form for pair {key}")
    if basis_a.M1 != basis_b.M1 or basis_a.M2 != basis_b.M2:
        raise ValueError("bases must share the same (M1, M2) orientation")
    split = basis_a.split or basis_b.split
    if split is None:
        raise ValueError("comparison needs a coprime split for the claimed form")
    M = basis_a.M
    if tol is None:
        tol = default_tolerance(M)
    claimed = CROSS_PHASE_FORMS[key]
    g = overlap_matrix(basis_a, basis_b)

    mask = np.eye(M, dtype=bool)
    max_off = float(np.max(np.abs(g[~mask]))) if M > 1 else 0.0
    diag = np.diag(g)
    max_diag_dev = float(np.max(np.abs(np.abs(diag) - 1.0)))
    max_mod_err = max(max_off, max_diag_dev)

    max_residual = 0.0
    mismatches = []
    labels = list(basis_a.labels())
    for i, label in enumerate(labels):
        n, residual = phase_exponent(diag[i], M)
        max_residual = max(max_residual, residual)
        want = claimed(split, label.q1, label.k2) % M
        if n != want:
            mismatches.append(PhaseDiscrepancy(label, n, want))

    if max_mod_err >= tol or max_residual >= PHASE_EXPONENT_RESIDUAL_TOL:
        status = "fail"
    elif mismatches:
        status = "discrepancy"
    else:
        status = "pass"
    return OverlapComparison(
        basis_a.kind, basis_b.kind, status, max_mod_err, max_residual, tuple(mismatches)
    )


def eigen_residuals(basis: RepBasis) -> float:
    """Max residual of both defining eigen-relations over all basis vectors.

    Relations: clock(M, M1) v = omega_M1**q1 v and
    translate(M, M1) v = omega_M2**k2 v (the step size M1 equals L2 = M/M2).
    """
    M = basis.M
    cl = clock(M, basis.M1)
    tr = translate(M, basis.M1 % M)
    worst = 0.0
    for label, vec in basis.items():
        want = omega_power(basis.M1, label.q1) * vec.amplitudes
        worst = max(worst, float(np.linalg.norm(apply(cl, vec).amplitudes - want)))
        want = omega_power(basis.M2, label.k2) * vec.amplitudes
        worst = max(worst, float(np.linalg.norm(apply(tr, vec).amplitudes - want)))
    return worst
