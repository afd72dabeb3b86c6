from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple

from .errors import DimensionError
from .gf2core import BitVec

Column = Tuple[BitVec, ...]


@dataclass(frozen=True)
class PirArrayCode:
    """[t x m, p] array code; ``columns[j][r]`` is the cell in row r of server j."""

    p: int
    t: int
    columns: Tuple[Column, ...]
    family: Optional[Dict] = field(default=None, compare=False)

    def __post_init__(self):
        if self.p < 1 or self.t < 1 or not self.columns:
            raise DimensionError(f"p, t, m must be >= 1 (p={self.p}, t={self.t}, m={len(self.columns)})")
        for j, col in enumerate(self.columns):
            if len(col) != self.t:
                raise DimensionError(f"column {j + 1} has {len(col)} cells, expected t={self.t}")
            for cell in col:
                if cell.width != self.p:
                    raise DimensionError(f"column {j + 1} has a cell of width {cell.width}, expected p={self.p}")

    @property
    def m(self) -> int:
        return len(self.columns)

    @property
    def s(self) -> Fraction:
        return Fraction(self.p, self.t)

    def cell(self, row: int, col: int) -> BitVec:
        return self.columns[col][row]


@dataclass(frozen=True)
class CodeStats:
    s: Fraction
    k: int
    storage_overhead: Fraction
    rate: Fraction
    overhead_ratio: Fraction
    singleton_counts: Tuple[int, ...]


@dataclass(frozen=True)
class RecoverySet:
    cols: FrozenSet[int]

    def __post_init__(self):
        if not self.cols:
            raise DimensionError("a recovery set needs at least one column")

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return len(self.cols), tuple(sorted(self.cols))

    def mask(self) -> int:
        out = 0
        for c in self.cols:
            out |= 1 << c
        return out


@dataclass(frozen=True)
class RecoveryCertificate:
    claimed_k: int
    parts: Tuple[Tuple[RecoverySet, ...], ...]


@dataclass(frozen=True)
class Violation:
    part: int
    set_index: Optional[int]
    kind: str  # non-disjoint | non-spanning | too-few-sets | out-of-range | part-count
    detail: str = ""

    def __str__(self) -> str:
        where = f"x_{self.part + 1}"
        if self.set_index is not None:
            where += f" set #{self.set_index + 1}"
        return f"{self.kind} at {where}" + (f": {self.detail}" if self.detail else "")


@dataclass(frozen=True)
class PartResult:
    part: int
    max_disjoint: int
    exact: bool
    witness: Tuple[RecoverySet, ...] = ()
    nodes: int = 0


@dataclass(frozen=True)
class VerifierReport:
    m: int
    parts: Tuple[PartResult, ...]

    @property
    def k(self) -> int:
        return min(r.max_disjoint for r in self.parts)

    @property
    def exact(self) -> bool:
        return all(r.exact for r in self.parts)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.m)

    def certificate(self) -> RecoveryCertificate:
        return RecoveryCertificate(self.k, tuple(r.witness for r in self.parts))


@dataclass(frozen=True)
class SteinerSystem:
    """S(d, d+1, p) on points 0..p-1; blocks sorted inside and lexicographically."""

    p: int
    d: int
    blocks: Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class ServerSpec:
    singleton_parts: FrozenSet[int]
    sum_cells: Tuple[FrozenSet[int], ...] = ()
    multiplicity: int = 1
    type_label: str = ""

    def involved(self) -> FrozenSet[int]:
        out = set(self.singleton_parts)
        for cell in self.sum_cells:
            out |= cell
        return frozenset(out)


@dataclass(frozen=True)
class TypeGroup:
    """Servers of one type: every distinct layout repeated `eta` times."""

    label: str
    singletons: int
    sum_size: int
    eta: int
    layouts: Tuple[ServerSpec, ...]

    @property
    def servers(self) -> int:
        return self.eta * len(self.layouts)


@dataclass
class ConstructionOutput:
    code: PirArrayCode
    certificate: RecoveryCertificate
    predicted_k: int
    predicted_m: int
    family: Dict
    groups: List[TypeGroup] = field(default_factory=list)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.predicted_k, self.predicted_m)


Bound = Tuple[str, Fraction]


@dataclass
class BoundReport:
    s: Fraction
    t: int
    lower: List[Bound] = field(default_factory=list)
    upper: List[Bound] = field(default_factory=list)
    limit: Optional[Bound] = None
    notes: str = ""

    @property
    def best_lower(self) -> Optional[Fraction]:
        return max((v for _, v in self.lower), default=None)

    @property
    def best_upper(self) -> Optional[Fraction]:
        return min((v for _, v in self.upper), default=None)

    @property
    def tight(self) -> bool:
        return self.best_lower is not None and self.best_lower == self.best_upper
