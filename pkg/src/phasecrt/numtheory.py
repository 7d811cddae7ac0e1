"""Exact integer machinery: factorization, coprime splits, CRT label maps.

Everything here is plain Python int arithmetic, so every identity is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class NotInvertibleError(ValueError):
    """No modular inverse exists (gcd of argument and modulus is not 1)."""


class NonCoprimeError(ValueError):
    """The two factors of a requested split share a prime."""


class TrivialSplitError(ValueError):
    """Split with M1 in {1, M}; the torus degenerates and inverses are undefined."""


@dataclass(frozen=True)
class PrimeFactorization:
    """M as a product of prime powers, primes strictly increasing."""

    M: int
    factors: tuple[tuple[int, int], ...]

    @property
    def num_primes(self) -> int:
        return len(self.factors)

    @property
    def prime_powers(self) -> tuple[int, ...]:
        """The pairwise-coprime blocks p**e whose product is M."""
        return tuple(p**e for p, e in self.factors)


def factorize(M: int) -> PrimeFactorization:
    """Factor M >= 2 by trial division. Deterministic; M is desk scale."""
    if M < 2:
        raise ValueError(f"cannot factor M={M}; need M >= 2")
    factors = []
    n = M
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        factors.append((n, 1))
    return PrimeFactorization(M, tuple(factors))


def chi(M: int) -> int:
    """Number of conjugate representation pairs: 2**(N-1), N = distinct primes of M."""
    return 2 ** (factorize(M).num_primes - 1)


def mod_inverse(a: int, m: int) -> int:
    """The x in [1, m) with a*x = 1 (mod m)."""
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    try:
        return pow(a, -1, m)
    except ValueError as exc:
        raise NotInvertibleError(f"{a} has no inverse mod {m} (gcd != 1)") from exc


@dataclass(frozen=True)
class CoprimeSplit:
    """A coprime factorization M = M1*M2 with its CRT reconstruction data.

    L1 = M/M1 = M2 and L2 = M/M2 = M1; N1 = L1^{-1} mod M1, N2 = L2^{-1} mod M2,
    so q = q1*N1*L1 + q2*N2*L2 (mod M) solves q = q1 (mod M1), q = q2 (mod M2).
    """

    M: int
    M1: int
    M2: int
    L1: int
    L2: int
    N1: int
    N2: int

    def __post_init__(self) -> None:
        if self.M1 < 2 or self.M2 < 2:
            raise TrivialSplitError(f"split factors must be >= 2, got ({self.M1}, {self.M2})")
        if self.M1 * self.M2 != self.M:
            raise ValueError(f"{self.M1} * {self.M2} != {self.M}")
        if math.gcd(self.M1, self.M2) != 1:
            raise NonCoprimeError(f"gcd({self.M1}, {self.M2}) = {math.gcd(self.M1, self.M2)} != 1")
        if self.L1 != self.M2 or self.L2 != self.M1:
            raise ValueError("L1, L2 must equal M/M1, M/M2")
        if not (1 <= self.N1 < self.M1 and (self.N1 * self.L1) % self.M1 == 1):
            raise ValueError(f"N1={self.N1} is not the inverse of L1={self.L1} mod {self.M1}")
        if not (1 <= self.N2 < self.M2 and (self.N2 * self.L2) % self.M2 == 1):
            raise ValueError(f"N2={self.N2} is not the inverse of L2={self.L2} mod {self.M2}")

    def swapped(self) -> "CoprimeSplit":
        """The same factorization with the two factors in the other order."""
        return CoprimeSplit(self.M, self.M2, self.M1, self.L2, self.L1, self.N2, self.N1)

    def describe(self) -> str:
        return f"{self.M1}x{self.M2}"


def make_split(M: int, M1: int) -> CoprimeSplit:
    """Split M into coprime factors (M1, M/M1) with the inverses populated."""
    if M < 2:
        raise ValueError(f"need M >= 2, got {M}")
    if M1 in (1, M):
        raise TrivialSplitError(f"M1={M1} gives a trivial split of {M}")
    if M1 < 1 or M % M1 != 0:
        raise ValueError(f"{M1} does not divide {M}")
    M2 = M // M1
    if math.gcd(M1, M2) != 1:
        raise NonCoprimeError(f"gcd({M1}, {M2}) = {math.gcd(M1, M2)} != 1")
    return CoprimeSplit(M, M1, M2, M2, M1, mod_inverse(M2, M1), mod_inverse(M1, M2))


def enumerate_splits(M: int) -> list[CoprimeSplit]:
    """All coprime bipartitions of M, canonicalized to M1 < M2, ascending in M1.

    There are 2**(N-1) - 1 of them for N distinct primes; none when M is a
    prime power. The opposite orientation of any split is make_split(M, M2).
    """
    if M < 2:
        raise ValueError(f"need M >= 2, got {M}")
    blocks = factorize(M).prime_powers
    lows = []
    for mask in range(1, 1 << len(blocks)):
        m1 = math.prod(b for i, b in enumerate(blocks) if mask >> i & 1)
        if m1 < M // m1:
            lows.append(m1)
    return [make_split(M, m1) for m1 in sorted(lows)]


def crt_compose(split: CoprimeSplit, q1: int, q2: int) -> int:
    """Lift torus labels (q1, q2) to the line label q in [0, M)."""
    if not 0 <= q1 < split.M1:
        raise ValueError(f"q1={q1} out of range [0, {split.M1})")
    if not 0 <= q2 < split.M2:
        raise ValueError(f"q2={q2} out of range [0, {split.M2})")
    return (q1 * split.N1 * split.L1 + q2 * split.N2 * split.L2) % split.M


def crt_decompose(split: CoprimeSplit, q: int) -> tuple[int, int]:
    """Project a line label onto its factor residues (q mod M1, q mod M2)."""
    if not 0 <= q < split.M:
        raise ValueError(f"q={q} out of range [0, {split.M})")
    return q % split.M1, q % split.M2
