"""Multigraded Betti numbers over GF(2) from the strands of the Taylor complex.

For every lcm b the subsets with lcm exactly b form a chain complex whose
boundary drops one member while keeping the lcm; its homology in degree i
gives beta_{i,b} of S/I.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Tuple

import numpy as np

from errors import CapExceededError, IllegalParameterError, TableMismatchError
from ideal import MonomialIdeal, Multidegree, lattice_for, popcount

if TYPE_CHECKING:
    from critical import CellTable

logger = logging.getLogger(__name__)

MAX_BETTI_GENS = 20


@dataclass(frozen=True)
class Gf2Matrix:
    """Dense GF(2) matrix, one packed int per row with bit j for column j."""

    rows: int
    cols: int
    bits: Tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if len(bits) != self.rows:
            raise IllegalParameterError(f"expected {self.rows} packed rows, got {len(bits)}")
        limit = 1 << self.cols
        if any(b < 0 or b >= limit for b in bits):
            raise IllegalParameterError(f"row wider than {self.cols} columns")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_array(cls, array) -> "Gf2Matrix":
        a = np.asarray(array, dtype=np.int64) & 1
        if a.ndim != 2:
            raise IllegalParameterError("GF(2) matrix needs a 2-d array")
        rows, cols = a.shape
        packed = tuple(sum(1 << j for j in np.flatnonzero(row).tolist()) for row in a)
        return cls(rows, cols, packed)


def gf2_rank(M: Gf2Matrix) -> int:
    pivots: Dict[int, int] = {}
    for row in M.bits:
        while row:
            lead = row.bit_length() - 1
            if lead not in pivots:
                pivots[lead] = row
                break
            row ^= pivots[lead]
    return len(pivots)


@dataclass
class BettiTable:
    ideal: MonomialIdeal
    entries: Dict[Tuple[int, Multidegree], int]

    def get(self, i: int, degree: Multidegree) -> int:
        return self.entries.get((i, tuple(degree)), 0)

    def totals(self) -> List[int]:
        top = max(i for i, _ in self.entries)
        totals = [0] * (top + 1)
        for (i, _), n in self.entries.items():
            totals[i] += n
        return totals

    def restricted(self, m: Sequence[int]) -> Dict[Tuple[int, Multidegree], int]:
        """Entries whose multidegree divides m."""
        return {key: n for key, n in self.entries.items() if all(a <= b for a, b in zip(key[1], m))}

    def to_records(self) -> List[Dict]:
        return [{"i": i, "degree": list(b), "value": n} for (i, b), n in sorted(self.entries.items())]


def betti_table(I: MonomialIdeal) -> BettiTable:
    return _betti_table(I)


@lru_cache(maxsize=32)
def _betti_table(I: MonomialIdeal) -> BettiTable:
    if len(I.gens) > MAX_BETTI_GENS:
        raise CapExceededError(f"{len(I.gens)} generators exceed the Betti cap of {MAX_BETTI_GENS}")
    lattice = lattice_for(I)
    strands: Dict[int, Dict[int, List[int]]] = defaultdict(lambda: defaultdict(list))
    for mask in range(lattice.size):
        strands[lattice.lcm_id[mask]][popcount(mask)].append(mask)

    entries: Dict[Tuple[int, Multidegree], int] = {}
    for lid, by_size in strands.items():
        degree = lattice.lcms[lid]
        ranks: Dict[int, int] = {}
        for i, basis in by_size.items():
            lower = by_size.get(i - 1)
            if not lower:
                continue
            column = {tau: j for j, tau in enumerate(lower)}
            packed = []
            for sigma in basis:
                row = 0
                bridges = lattice.bridges[sigma]
                while bridges:
                    low = bridges & -bridges
                    row |= 1 << column[sigma ^ low]
                    bridges ^= low
                packed.append(row)
            ranks[i] = gf2_rank(Gf2Matrix(len(basis), len(lower), tuple(packed)))
        for i, basis in by_size.items():
            beta = len(basis) - ranks.get(i, 0) - ranks.get(i + 1, 0)
            if beta:
                entries[(i, degree)] = beta
    logger.debug(f"Betti table of {len(I.gens)} generators has {len(entries)} nonzero entries")
    return BettiTable(I, entries)


@dataclass(frozen=True)
class Discrepancy:
    i: int
    degree: Multidegree
    cells: int
    betti: int


@dataclass(frozen=True)
class MinimalityVerdict:
    minimal: bool
    discrepancy: Optional[Discrepancy] = None


def _check_same_ideal(cells: "CellTable", betti: BettiTable):
    if cells.ideal != betti.ideal:
        raise TableMismatchError("cell and Betti tables describe different ideals")


def minimality_verdict(cells: "CellTable", betti: BettiTable) -> MinimalityVerdict:
    _check_same_ideal(cells, betti)
    keys = sorted(set(cells.counts) | set(betti.entries))
    differing = [k for k in keys if cells.counts.get(k, 0) != betti.entries.get(k, 0)]
    if not differing:
        return MinimalityVerdict(True)
    excess = [k for k in differing if cells.counts.get(k, 0) > betti.entries.get(k, 0)]
    i, degree = (excess or differing)[0]
    return MinimalityVerdict(False, Discrepancy(i, degree, cells.counts.get((i, degree), 0), betti.get(i, degree)))


def euler_check(cells: "CellTable", betti: BettiTable) -> bool:
    _check_same_ideal(cells, betti)
    chi: Dict[Multidegree, int] = defaultdict(int)
    for (i, degree), n in cells.counts.items():
        chi[degree] += (-1) ** i * n
    for (i, degree), n in betti.entries.items():
        chi[degree] -= (-1) ** i * n
    return not any(chi.values())
