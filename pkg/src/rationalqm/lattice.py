"""The discretised sphere at granularity L: lattice points, their length-L
bit strings over {+1, -1}, and the permutation/negation operators that give
the lattice its complex and quaternionic structure.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, TextIO, Tuple

Bits = Tuple[int, ...]


def validate_bits(s: Sequence[int]) -> Bits:
    out = tuple(s)
    if not all(b in (1, -1) for b in out):
        raise ValueError(f"bit string entries must be +1 or -1, got {out}")
    return out


def negate(s: Sequence[int]) -> Bits:
    return tuple(-b for b in s)


@dataclass(frozen=True)
class PNO:
    """Permutation/negation operator: output[i] = signs[i] * input[perm[i]]."""

    perm: Tuple[int, ...]
    signs: Tuple[int, ...]

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)):
            raise ValueError("perm is not a permutation of 0..n-1")
        if len(self.signs) != n or not all(x in (1, -1) for x in self.signs):
            raise ValueError("signs must be +1/-1 of matching length")

    @classmethod
    def identity(cls, n: int) -> "PNO":
        return cls(tuple(range(n)), (1,) * n)

    @classmethod
    def negation(cls, n: int) -> "PNO":
        return cls(tuple(range(n)), (-1,) * n)

    def apply(self, s: Sequence[int]) -> Bits:
        if len(s) != len(self.perm):
            raise ValueError(f"operator arity {len(self.perm)} != string length {len(s)}")
        return tuple(self.signs[i] * s[self.perm[i]] for i in range(len(s)))

    def compose(self, other: "PNO") -> "PNO":
        """self after other: (self . other).apply(s) == self.apply(other.apply(s))."""
        if len(self.perm) != len(other.perm):
            raise ValueError("arity mismatch")
        perm = tuple(other.perm[self.perm[i]] for i in range(len(self.perm)))
        signs = tuple(self.signs[i] * other.signs[self.perm[i]]
                      for i in range(len(self.perm)))
        return PNO(perm, signs)

    def inverse(self) -> "PNO":
        n = len(self.perm)
        perm = [0] * n
        signs = [1] * n
        for i, j in enumerate(self.perm):
            perm[j] = i
            signs[j] = self.signs[i]
        return PNO(tuple(perm), tuple(signs))


# The length-2 generator: i{a1, a2} = {-a2, a1}, so i^2 is global negation.
I_GENERATOR = PNO(perm=(1, 0), signs=(-1, 1))

# Length-4 quaternion units.
QUATERNIONS = {
    "I": PNO(perm=(2, 3, 0, 1), signs=(1, 1, -1, -1)),
    "J": PNO(perm=(1, 0, 3, 2), signs=(1, -1, -1, 1)),
    "K": PNO(perm=(3, 2, 1, 0), signs=(-1, 1, -1, 1)),
}


def apply_i(pair: Sequence[int]) -> Bits:
    """{a1, a2} -> {-a2, a1} on a length-2 string."""
    s = validate_bits(pair)
    if len(s) != 2:
        raise ValueError(f"apply_i needs a length-2 string, got length {len(s)}")
    return I_GENERATOR.apply(s)


def quaternion_apply(which: str, s: Sequence[int]) -> Bits:
    """Apply one of the quaternion units I, J, K to a length-4 string."""
    bits = validate_bits(s)
    if len(bits) != 4:
        raise ValueError(f"quaternions act on length-4 strings, got length {len(bits)}")
    try:
        op = QUATERNIONS[which]
    except KeyError:
        raise ValueError(f"unknown quaternion unit {which!r}, expected I, J or K")
    return op.apply(bits)


def zeta(s: Sequence[int], k: int = 1) -> Bits:
    """k-fold cyclic left shift; one application is a rotation by 2pi/L."""
    bits = validate_bits(s)
    if not bits:
        return bits
    k %= len(bits)
    return bits[k:] + bits[:k]


def ones_fraction(s: Sequence[int]) -> Fraction:
    bits = validate_bits(s)
    if not bits:
        raise ValueError("empty bit string")
    return Fraction(sum(1 for b in bits if b == 1), len(bits))


def cos_theta(s: Sequence[int]) -> Fraction:
    """Latitude of a string: cos(theta) = 2 * ones_fraction - 1."""
    return 2 * ones_fraction(s) - 1


@dataclass(frozen=True)
class LatticePoint:
    """A point on the granularity-L sphere: cos^2(theta/2) = m/L, phi = 2pi*n/L.

    At the poles (m = 0 or m = L) all longitudes are the same point, so n is
    normalised to 0 there.
    """

    m: int
    n: int
    L: int

    def __post_init__(self):
        if self.L < 1:
            raise ValueError(f"L must be positive, got {self.L}")
        if not 0 <= self.m <= self.L:
            raise ValueError(f"m must be in [0, L], got m={self.m}, L={self.L}")
        if not 0 <= self.n < self.L:
            raise ValueError(f"n must be in [0, L), got n={self.n}, L={self.L}")
        if self.m in (0, self.L):
            object.__setattr__(self, "n", 0)

    @property
    def ones(self) -> Fraction:
        return Fraction(self.m, self.L)

    @property
    def cos_theta(self) -> Fraction:
        return Fraction(2 * self.m - self.L, self.L)

    @property
    def turns(self) -> Fraction:
        return Fraction(self.n, self.L)


def block_string(m: int, L: int) -> Bits:
    """m leading +1s followed by L - m trailing -1s."""
    if not 0 <= m <= L:
        raise ValueError(f"m must be in [0, L], got m={m}, L={L}")
    return (1,) * m + (-1,) * (L - m)


def canonical_bitstring(p: LatticePoint) -> Bits:
    """zeta^n applied to the block string of p; ones fraction stays m/L."""
    return zeta(block_string(p.m, p.L), p.n)


def build_spinorial_circle(L: int) -> List[Bits]:
    """The 2L strings on the phi in {0, pi} great circle for L a power of two.

    Built inductively from the two half-length circles: starting from the
    all-ones string, the second half is stepped forward through its circle,
    then the first half backward, each in runs of L/2 steps, until the cycle
    closes after 2L strings (the first half ends up rotated by a full 4pi
    relative to the second).
    """
    if L < 2 or L & (L - 1) != 0:
        raise ValueError(f"L must be a power of two >= 2, got {L}")
    if L == 2:
        circle = [(1, 1)]
        for _ in range(3):
            circle.append(apply_i(circle[-1]))
        return circle
    half = build_spinorial_circle(L // 2)
    size = len(half)  # == L
    out = []
    p = q = 0
    out.append(half[p] + half[q])
    steps_per_run = L // 2
    for run in range(4):
        for _ in range(steps_per_run):
            if run % 2 == 0:
                q = (q + 1) % size
            else:
                p = (p - 1) % size
            out.append(half[p] + half[q])
    assert out[-1] == out[0]
    return out[:-1]


def interpolated_circle(L: int) -> List[Bits]:
    """Monotone block strings for m = L down to 0, the phi = 0 meridian at a
    general L; latitudes are cos(theta) = 2m/L - 1."""
    if L < 2:
        raise ValueError(f"L must be >= 2, got {L}")
    return [block_string(m, L) for m in range(L, -1, -1)]


def iter_lattice(L: int) -> Iterable[LatticePoint]:
    """All distinct lattice points at granularity L (one point per pole)."""
    for m in range(L + 1):
        if m in (0, L):
            yield LatticePoint(m, 0, L)
        else:
            for n in range(L):
                yield LatticePoint(m, n, L)


def lattice_to_csv(L: int, out: TextIO) -> int:
    """Dump the full lattice as CSV; returns the number of rows written."""
    writer = csv.writer(out)
    writer.writerow(["m", "n", "L", "cos_theta", "bits"])
    count = 0
    for p in iter_lattice(L):
        c = p.cos_theta
        bits = canonical_bitstring(p)
        writer.writerow([p.m, p.n, p.L, f"{c.numerator}/{c.denominator}",
                         " ".join(str(b) for b in bits)])
        count += 1
    return count
