"""Linear algebra over GF(2) on int-packed bit-vectors.

Coordinate i of a vector is bit i of ``bits``. Bases are kept in fully
reduced row-echelon form with the lowest set index of each row as its
leading coordinate, so equal spans give equal bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import DimensionError


@dataclass(frozen=True)
class BitVec:
    width: int
    bits: int = 0

    def __post_init__(self):
        if self.width < 1:
            raise DimensionError(f"width must be >= 1, got {self.width}")
        if self.bits < 0 or self.bits >> self.width:
            raise DimensionError(f"bits set beyond width {self.width}")

    @classmethod
    def from_parts(cls, width: int, parts: Iterable[int]) -> "BitVec":
        bits = 0
        for i in parts:
            if not 0 <= i < width:
                raise DimensionError(f"part index {i} out of range for width {width}")
            bits ^= 1 << i
        return cls(width, bits)

    @classmethod
    def unit(cls, width: int, i: int) -> "BitVec":
        return cls.from_parts(width, [i])

    @classmethod
    def zero(cls, width: int) -> "BitVec":
        return cls(width, 0)

    def parts(self) -> Tuple[int, ...]:
        out = []
        b = self.bits
        while b:
            low = b & -b
            out.append(low.bit_length() - 1)
            b ^= low
        return tuple(out)

    def weight(self) -> int:
        return bin(self.bits).count("1")

    def is_zero(self) -> bool:
        return self.bits == 0

    def lead(self) -> int:
        """Lowest set coordinate; -1 for the zero vector."""
        return (self.bits & -self.bits).bit_length() - 1

    def __xor__(self, other: "BitVec") -> "BitVec":
        _check_width(self.width, other.width)
        return BitVec(self.width, self.bits ^ other.bits)

    def __str__(self) -> str:
        if not self.bits:
            return "0"
        return "+".join(f"x_{i + 1}" for i in self.parts())


@dataclass(frozen=True)
class Gf2Basis:
    width: int
    rows: Tuple[BitVec, ...] = ()

    @property
    def rank(self) -> int:
        return len(self.rows)

    @classmethod
    def empty(cls, width: int) -> "Gf2Basis":
        if width < 1:
            raise DimensionError(f"width must be >= 1, got {width}")
        return cls(width, ())

    def leads(self) -> Tuple[int, ...]:
        return tuple(r.lead() for r in self.rows)


def _check_width(a: int, b: int) -> None:
    if a != b:
        raise DimensionError(f"width mismatch: {a} != {b}")


def _reduce_bits(rows: Sequence[BitVec], bits: int) -> int:
    for row in rows:
        if (bits >> row.lead()) & 1:
            bits ^= row.bits
    return bits


def basis_insert(basis: Gf2Basis, v: BitVec) -> Tuple[Gf2Basis, bool]:
    _check_width(basis.width, v.width)
    reduced = _reduce_bits(basis.rows, v.bits)
    if not reduced:
        return basis, False
    new_lead = (reduced & -reduced).bit_length() - 1
    rows: List[BitVec] = []
    for row in basis.rows:
        if (row.bits >> new_lead) & 1:
            row = BitVec(basis.width, row.bits ^ reduced)
        rows.append(row)
    rows.append(BitVec(basis.width, reduced))
    rows.sort(key=lambda r: r.lead())
    return Gf2Basis(basis.width, tuple(rows)), True


def basis_extend(basis: Gf2Basis, vectors: Iterable[BitVec]) -> Gf2Basis:
    for v in vectors:
        basis, _ = basis_insert(basis, v)
    return basis


def basis_of(width: int, vectors: Iterable[BitVec]) -> Gf2Basis:
    return basis_extend(Gf2Basis.empty(width), vectors)


def contains(basis: Gf2Basis, v: BitVec) -> bool:
    _check_width(basis.width, v.width)
    return _reduce_bits(basis.rows, v.bits) == 0


def spans_unit(basis: Gf2Basis, i: int) -> bool:
    if not 0 <= i < basis.width:
        raise DimensionError(f"part index {i} out of range for width {basis.width}")
    return _reduce_bits(basis.rows, 1 << i) == 0


def rank(vectors: Sequence[BitVec]) -> int:
    if not vectors:
        return 0
    width = vectors[0].width
    for v in vectors:
        _check_width(width, v.width)
    return basis_of(width, vectors).rank


def express(vectors: Sequence[BitVec], target: BitVec) -> Optional[List[int]]:
    """Indices of a subset of ``vectors`` whose XOR is ``target``, or None.

    Elimination carries a mask of which input vectors each pivot row
    combines, so the answer is read off once ``target`` reduces to zero.
    """
    pivots: List[Tuple[int, int, int]] = []  # (lead, bits, combo-mask)
    for idx, v in enumerate(vectors):
        _check_width(target.width, v.width)
        bits, combo = v.bits, 1 << idx
        for lead, pbits, pcombo in pivots:
            if (bits >> lead) & 1:
                bits ^= pbits
                combo ^= pcombo
        if bits:
            pivots.append(((bits & -bits).bit_length() - 1, bits, combo))
    bits, combo = target.bits, 0
    for lead, pbits, pcombo in pivots:
        if (bits >> lead) & 1:
            bits ^= pbits
            combo ^= pcombo
    if bits:
        return None
    return [i for i in range(len(vectors)) if (combo >> i) & 1]
