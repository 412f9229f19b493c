import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from betti import betti_table
from errors import IllegalParameterError, ParseError
from graphs import (
    EdgeWeightedTree,
    RootedTreeLabeling,
    build_bf,
    build_labc,
    cycle_graph,
    edge_generator,
    edge_ideal,
    natural_key,
)
from ideal import Monomial, MonomialIdeal, Multidegree, lattice_for, lcm_of, popcount

logger = logging.getLogger(__name__)


class CellFamily(str, Enum):
    LYUBEZNIK = "lyubeznik"
    BARILE_MACCHIA = "barile_macchia"
    TAYLOR = "taylor"


class BridgeFriendlyAlgorithm(str, Enum):
    DEFINITIONAL = "definitional"
    LEMMA = "lemma"


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class TotalOrder:
    """Ranking of generator indices, largest first."""

    ideal: MonomialIdeal
    ranking: Tuple[int, ...]

    def __post_init__(self):
        ranking = tuple(int(g) for g in self.ranking)
        if sorted(ranking) != list(range(len(self.ideal.gens))):
            raise IllegalParameterError(f"{ranking} is not a permutation of the {len(self.ideal.gens)} generators")
        object.__setattr__(self, "ranking", ranking)

    @cached_property
    def position(self) -> Tuple[int, ...]:
        pos = [0] * len(self.ranking)
        for k, g in enumerate(self.ranking):
            pos[g] = k
        return tuple(pos)

    @classmethod
    def identity(cls, ideal: MonomialIdeal) -> "TotalOrder":
        return cls(ideal, tuple(range(len(ideal.gens))))

    @classmethod
    def from_monomials(cls, ideal: MonomialIdeal, monomials: Sequence[Monomial]) -> "TotalOrder":
        ranking = tuple(ideal.index(m) for m in monomials)
        if len(set(ranking)) != len(ranking) or len(ranking) != len(ideal.gens):
            raise IllegalParameterError("order must list every generator exactly once")
        return cls(ideal, ranking)

    @classmethod
    def parse(cls, ideal: MonomialIdeal, text: str) -> "TotalOrder":
        parts = [p for p in text.split(",") if p.strip()]
        if not parts:
            raise ParseError("empty order literal")
        return cls.from_monomials(ideal, [ideal.parse_monomial(p) for p in parts])

    def dominates(self, a: int, b: int) -> bool:
        """True when generator a is larger than generator b."""
        return self.position[a] < self.position[b]

    def monomials(self) -> List[Monomial]:
        return [self.ideal.gens[g] for g in self.ranking]

    def minimum(self) -> Monomial:
        return self.ideal.gens[self.ranking[-1]]

    def restrict_to(self, sub: MonomialIdeal) -> "TotalOrder":
        """Induced order on an ideal whose generators are a subset of ours."""
        return TotalOrder.from_monomials(sub, [m for m in self.monomials() if m in sub.gens])

    def transport(self, target: MonomialIdeal) -> "TotalOrder":
        """Same ranking on an index-aligned ideal such as a scaled copy."""
        return TotalOrder(target, self.ranking)

    def format(self) -> str:
        return ",".join(self.ideal.format_monomial(m) for m in self.monomials())


@dataclass(frozen=True)
class GenSubset:
    ideal: MonomialIdeal
    members: int

    @cached_property
    def cached_lcm(self) -> Monomial:
        return lcm_of(self.ideal.subset(self.members), self.ideal.num_vars)

    @classmethod
    def of(cls, ideal: MonomialIdeal, monomials: Iterable[Monomial]) -> "GenSubset":
        return cls(ideal, ideal.mask_of(monomials))

    @classmethod
    def parse(cls, ideal: MonomialIdeal, text: str) -> "GenSubset":
        return cls.of(ideal, [ideal.parse_monomial(p) for p in text.split(",") if p.strip()])

    def __len__(self) -> int:
        return popcount(self.members)


Subset = Union[GenSubset, int]


@dataclass(frozen=True)
class SubsetAnalysis:
    bridges: int
    gaps: int
    true_gaps: int
    sbridge: Optional[int]
    witnesses: Dict[int, int] = field(default_factory=dict)


@dataclass(frozen=True)
class TypeVerdict:
    type1: bool
    ptype2: bool
    type2: bool

    @property
    def bm_critical(self) -> bool:
        return not self.type1 and not self.type2


@dataclass
class CellTable:
    ideal: MonomialIdeal
    family: CellFamily
    counts: Dict[Tuple[int, Multidegree], int]

    def get(self, i: int, degree: Multidegree) -> int:
        return self.counts.get((i, tuple(degree)), 0)

    def totals(self) -> List[int]:
        """Cell counts by cardinality 0..c."""
        totals = [0] * (len(self.ideal.gens) + 1)
        for (i, _), n in self.counts.items():
            totals[i] += n
        return totals

    def to_records(self) -> List[Dict]:
        return [{"i": i, "degree": list(b), "value": n} for (i, b), n in sorted(self.counts.items())]


@dataclass(frozen=True)
class LyubeznikVerdict:
    minimal: bool
    cell: Optional[int] = None
    bridge: Optional[int] = None


@dataclass(frozen=True)
class Obstruction:
    """Type-1 tau with true gaps m1 > m2 whose additions are both potentially type-2."""

    tau: int
    m1: int
    m2: int
    m3: int


def _to_rank(values: np.ndarray, ranking: Sequence[int]) -> np.ndarray:
    out = np.zeros_like(values)
    for k, g in enumerate(ranking):
        out |= ((values >> g) & 1) << k
    return out


class MorseAnalyzer:
    """Order-dependent subset classification for one (ideal, order) pair.

    Subsets are handled as rank masks: bit k is the k-th largest generator,
    so the smallest member of a mask is its top bit.
    """

    def __init__(self, order: TotalOrder):
        self.order = order
        self.ideal = order.ideal
        self.lattice = lattice_for(order.ideal)
        self.size = self.lattice.size
        self.count = len(order.ranking)
        rank_masks = np.arange(self.size, dtype=np.int64)
        canon = np.zeros(self.size, dtype=np.int64)
        for k, g in enumerate(order.ranking):
            canon |= ((rank_masks >> k) & 1) << g
        self.lcm_id: List[int] = self.lattice.lcm_array[canon].tolist()
        self.bridges: List[int] = _to_rank(self.lattice.bridge_array[canon], order.ranking).tolist()
        self.divisors: List[int] = _to_rank(self.lattice.divisor_array, order.ranking).tolist()
        self._promotions: Dict[int, int] = {}

    def to_rank(self, mask: int) -> int:
        pos = self.order.position
        return sum(1 << pos[g] for g in _bits(mask))

    def to_canonical(self, rmask: int) -> int:
        ranking = self.order.ranking
        return sum(1 << ranking[k] for k in _bits(rmask))

    def lcm(self, s: int) -> Multidegree:
        return self.lattice.lcms[self.lcm_id[s]]

    def gaps(self, s: int) -> int:
        return self.divisors[self.lcm_id[s]] & ~s

    def witness(self, s: int, k: int) -> int:
        """Smallest new bridge below gap k, or -1 when k is a true gap."""
        new = self.bridges[s | 1 << k] & ~self.bridges[s] & ~(1 << k)
        below = new >> (k + 1)
        return below.bit_length() + k if below else -1

    def true_gaps(self, s: int) -> int:
        result = 0
        for k in _bits(self.gaps(s)):
            if self.witness(s, k) < 0:
                result |= 1 << k
        return result

    def sbridge(self, s: int) -> int:
        return self.bridges[s].bit_length() - 1

    def is_ptype2(self, s: int) -> bool:
        b = self.bridges[s]
        if not b:
            return False
        cut = b.bit_length()
        for k in _bits(self.gaps(s) >> cut << cut):
            if self.witness(s, k) < 0:
                return False
        return True

    def is_type1(self, s: int) -> bool:
        if self.bridges[s]:
            return not self.is_ptype2(s)
        return any(self.witness(s, k) < 0 for k in _bits(self.gaps(s)))

    def promotions(self, tau: int) -> int:
        """M(tau): gaps m of tau with tau+m potentially type-2 and smallest bridge m."""
        cached = self._promotions.get(tau)
        if cached is None:
            cached = 0
            for k in _bits(self.gaps(tau)):
                s = tau | 1 << k
                if self.sbridge(s) == k and self.is_ptype2(s):
                    cached |= 1 << k
            self._promotions[tau] = cached
        return cached

    def is_type2(self, s: int) -> bool:
        if not self.is_ptype2(s):
            return False
        sb = self.sbridge(s)
        return self.promotions(s ^ 1 << sb).bit_length() - 1 == sb

    def is_bm_critical(self, s: int) -> bool:
        return not self.is_type1(s) and not self.is_type2(s)

    def is_lyubeznik_critical(self, s: int) -> bool:
        prefix = 0
        for t, k in enumerate(_bits(s)):
            prefix |= 1 << k
            if t and self.divisors[self.lcm_id[prefix]] >> (k + 1):
                return False
        return True

    def lyubeznik_cells(self) -> Iterator[int]:
        """Depth-first over sets grown by smaller elements; a failing prefix prunes its extensions."""
        yield 0
        stack = [1 << k for k in reversed(range(self.count))]
        while stack:
            s = stack.pop()
            yield s
            for j in reversed(range(s.bit_length(), self.count)):
                grown = s | 1 << j
                if not self.divisors[self.lcm_id[grown]] >> (j + 1):
                    stack.append(grown)

    def bm_cells(self) -> Iterator[int]:
        return (s for s in range(self.size) if self.is_bm_critical(s))

    def cells(self, family: CellFamily) -> Iterator[int]:
        family = CellFamily(family)
        if family is CellFamily.LYUBEZNIK:
            return self.lyubeznik_cells()
        if family is CellFamily.BARILE_MACCHIA:
            return self.bm_cells()
        return iter(range(self.size))

    def lyubeznik_verdict(self) -> LyubeznikVerdict:
        for s in self.lyubeznik_cells():
            if self.bridges[s]:
                return LyubeznikVerdict(False, s, self.sbridge(s))
        return LyubeznikVerdict(True)

    def non_type2(self) -> Optional[int]:
        """First potentially type-2 set that is not type-2, grouping sets by tau."""
        owner: Dict[int, int] = {}
        for s in range(1, self.size):
            b = self.bridges[s]
            if not b or not self.is_ptype2(s):
                continue
            sb = b.bit_length() - 1
            tau = s ^ 1 << sb
            other = owner.get(tau)
            if other is None:
                owner[tau] = sb
            else:
                return s if sb < other else tau | 1 << other
        return None

    def obstruction(self) -> Optional[Obstruction]:
        for tau in range(self.size):
            tg = self.true_gaps(tau)
            if not tg:
                continue
            sb = self.sbridge(tau)
            m2 = tg.bit_length() - 1
            if m2 < sb or not self.is_ptype2(tau | 1 << m2):
                continue
            for m1 in _bits(tg):
                if m1 >= m2:
                    break
                if m1 > sb and self.is_ptype2(tau | 1 << m1):
                    m3 = self.witness(tau | 1 << m1, m2)
                    return Obstruction(tau, m1, m2, m3)
        return None

    def is_bridge_friendly(self, algorithm: BridgeFriendlyAlgorithm = BridgeFriendlyAlgorithm.DEFINITIONAL) -> bool:
        if BridgeFriendlyAlgorithm(algorithm) is BridgeFriendlyAlgorithm.LEMMA:
            return self.obstruction() is None
        return self.non_type2() is None


def _analyzer(I: MonomialIdeal, ord: TotalOrder) -> MorseAnalyzer:
    if ord.ideal != I:
        raise IllegalParameterError("order is bound to a different ideal")
    return MorseAnalyzer(ord)


def _members(I: MonomialIdeal, sigma: Subset) -> int:
    mask = sigma.members if isinstance(sigma, GenSubset) else int(sigma)
    if mask < 0 or mask >> len(I.gens):
        raise IllegalParameterError(f"subset mask {mask} is outside the {len(I.gens)} generators")
    return mask


def analyze_subset(I: MonomialIdeal, ord: TotalOrder, sigma: Subset) -> SubsetAnalysis:
    an = _analyzer(I, ord)
    s = an.to_rank(_members(I, sigma))
    gaps = an.gaps(s)
    true_gaps = 0
    witnesses = {}
    for k in _bits(gaps):
        w = an.witness(s, k)
        if w < 0:
            true_gaps |= 1 << k
        else:
            witnesses[ord.ranking[k]] = ord.ranking[w]
    sb = an.sbridge(s)
    return SubsetAnalysis(
        bridges=an.to_canonical(an.bridges[s]),
        gaps=an.to_canonical(gaps),
        true_gaps=an.to_canonical(true_gaps),
        sbridge=ord.ranking[sb] if sb >= 0 else None,
        witnesses=witnesses,
    )


def subset_type(I: MonomialIdeal, ord: TotalOrder, sigma: Subset) -> TypeVerdict:
    an = _analyzer(I, ord)
    s = an.to_rank(_members(I, sigma))
    return TypeVerdict(type1=an.is_type1(s), ptype2=an.is_ptype2(s), type2=an.is_type2(s))


def is_lyubeznik_critical(I: MonomialIdeal, ord: TotalOrder, sigma: Subset) -> bool:
    an = _analyzer(I, ord)
    return an.is_lyubeznik_critical(an.to_rank(_members(I, sigma)))


def critical_cells(I: MonomialIdeal, ord: TotalOrder, family: CellFamily) -> CellTable:
    an = _analyzer(I, ord)
    counts: Counter = Counter()
    for s in an.cells(family):
        counts[(popcount(s), an.lcm(s))] += 1
    return CellTable(I, CellFamily(family), dict(counts))


def taylor_cells(I: MonomialIdeal) -> CellTable:
    return critical_cells(I, TotalOrder.identity(I), CellFamily.TAYLOR)


def is_bridge_friendly(I: MonomialIdeal, ord: TotalOrder,
                       algorithm: BridgeFriendlyAlgorithm = BridgeFriendlyAlgorithm.DEFINITIONAL) -> bool:
    return _analyzer(I, ord).is_bridge_friendly(algorithm)


def bridge_friendly_obstruction(I: MonomialIdeal, ord: TotalOrder) -> Optional[Obstruction]:
    """The obstruction with every member translated back to canonical generator indices."""
    an = _analyzer(I, ord)
    found = an.obstruction()
    if found is None:
        return None
    r = ord.ranking
    return Obstruction(an.to_canonical(found.tau), r[found.m1], r[found.m2], r[found.m3])


def lyubeznik_minimal(I: MonomialIdeal, ord: TotalOrder) -> LyubeznikVerdict:
    an = _analyzer(I, ord)
    verdict = an.lyubeznik_verdict()
    if verdict.minimal:
        return verdict
    return LyubeznikVerdict(False, an.to_canonical(verdict.cell), ord.ranking[verdict.bridge])


def lyubeznik_critical_triple(I: MonomialIdeal, ord: TotalOrder) -> Optional[int]:
    an = _analyzer(I, ord)
    for s in an.lyubeznik_cells():
        if popcount(s) == 3:
            return an.to_canonical(s)
    return None


def is_bm_minimal(I: MonomialIdeal, ord: TotalOrder, betti=None) -> bool:
    """BM cells equal the Betti numbers; stops at the first excess cell."""
    betti = betti if betti is not None else betti_table(I)
    an = _analyzer(I, ord)
    seen: Counter = Counter()
    for s in an.bm_cells():
        key = (popcount(s), an.lcm(s))
        seen[key] += 1
        if seen[key] > betti.entries.get(key, 0):
            return False
    return True


def shares_unique_factor(I: MonomialIdeal, sigma: Subset, m: int, other: int) -> Optional[Tuple[int, int]]:
    """(variable, n) with x^n exactly dividing both m and other and every other member of sigma below n."""
    mask = _members(I, sigma)
    a, b = I.gens[m].exponents, I.gens[other].exponents
    rest = [I.gens[g].exponents for g in _bits(mask & ~(1 << m) & ~(1 << other))]
    for v in range(I.num_vars):
        n = a[v]
        if n >= 1 and b[v] == n and all(e[v] < n for e in rest):
            return v, n
    return None


def order_for_labc(a: int, b: int, c: int) -> TotalOrder:
    I = edge_ideal(build_labc(a, b, c))
    seq = [("y", f"y{j}") for j in range(b, 0, -1)]
    seq += [("x", f"x{i}") for i in range(a, 0, -1)]
    seq += [("y", f"z{k}") for k in range(c, 0, -1)]
    seq += [("x", f"z{k}") for k in range(c, 0, -1)]
    seq.append(("x", "y"))
    return TotalOrder.from_monomials(I, [edge_generator(I, u, v) for u, v in seq])


def order_for_bf(tw: EdgeWeightedTree, root: str) -> TotalOrder:
    """Tree edges by (level, parent index, child index), each preceded by its triangle edges."""
    labeling = RootedTreeLabeling.build(tw.tree, root)
    I = edge_ideal(build_bf(tw))
    index = labeling.index
    keyed = []
    for y, z in tw.tree.sorted_edges():
        parent, child = (y, z) if labeling.parents.get(z) == y else (z, y)
        i, j = index[parent]
        keyed.append(((i, j, index[child][1]), parent, child, (y, z)))
    seq = []
    for _, parent, child, (y, z) in sorted(keyed):
        apexes = [f"v_{y}_{z}_{l}" for l in range(1, tw.weight(y, z) + 1)]
        seq += [edge_generator(I, parent, v) for v in apexes]
        seq += [edge_generator(I, child, v) for v in apexes]
        seq.append(edge_generator(I, parent, child))
    return TotalOrder.from_monomials(I, seq)


def cycle_obstruction(n: int, ord: TotalOrder) -> Obstruction:
    """Explicit obstruction on I(C_n), n >= 7, after rotating so the smallest edge is x1x2."""
    if n < 7:
        raise IllegalParameterError(f"the cycle construction needs n >= 7, got {n}")
    I = edge_ideal(cycle_graph(n))
    if ord.ideal != I:
        raise IllegalParameterError("order is not bound to the cycle's edge ideal")
    smallest = ord.minimum()
    first = smallest.exponents.index(1)
    shift = n - 1 if first == 0 and smallest.exponents[n - 1] == 1 else first

    def gen(i: int, j: int) -> int:
        u = f"x{(i - 1 + shift) % n + 1}"
        v = f"x{(j - 1 + shift) % n + 1}"
        return I.index(edge_generator(I, u, v))

    tau = (1 << gen(1, 2)) | (1 << gen(3, 4)) | (1 << gen(n - 1, n))
    a, b = gen(2, 3), gen(n, 1)
    m1, m2 = (a, b) if ord.dominates(a, b) else (b, a)
    found = Obstruction(tau, m1, m2, gen(1, 2))
    if not _obstruction_holds(I, ord, found):
        raise IllegalParameterError(f"cycle construction failed for n={n} under {ord.format()}")
    return found


def _obstruction_holds(I: MonomialIdeal, ord: TotalOrder, ob: Obstruction) -> bool:
    an = _analyzer(I, ord)
    tau = an.to_rank(ob.tau)
    m1, m2, m3 = (ord.position[g] for g in (ob.m1, ob.m2, ob.m3))
    tg = an.true_gaps(tau)
    sb = an.sbridge(tau)
    return (
        m1 < m2 < m3
        and tg >> m1 & 1 and tg >> m2 & 1
        and m2 > sb
        and an.is_ptype2(tau | 1 << m1)
        and an.is_ptype2(tau | 1 << m2)
        and an.bridges[tau | 1 << m1 | 1 << m2] >> m3 & 1
    )


def format_subset(I: MonomialIdeal, mask: int) -> List[str]:
    return sorted((I.format_monomial(m) for m in I.subset(mask)), key=natural_key)
