"""Existence queries over all total orders of an ideal's generators.

Orders are visited in lexicographic permutation rank. Work is split into
contiguous rank blocks; a pool of workers evaluates one wave of blocks at a
time and results are merged in rank order, so the outcome never depends on
the number of workers.
"""
import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from multiprocessing import Pool
from typing import Callable, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from tqdm import tqdm

from betti import betti_table
from critical import TotalOrder, is_bm_minimal, is_bridge_friendly, lyubeznik_minimal
from errors import CapExceededError, IntegrityError, SpecInconsistencyError, ZeroIdealError
from ideal import Monomial, MonomialIdeal, hhz_subideal, power, scale
from store import OutcomeStore

logger = logging.getLogger(__name__)

MAX_SEARCH_GENS = 12
MAX_SYMMETRY_VARS = 10
BLOCK_SIZE = 5040
SETTLED_LIMIT = 256

# predicates inherited by every HHZ restriction
MONOTONE_PREDICATES = ("lyubeznik", "bridge-friendly")

# (predicate, ideal) -> whether an order exists, for settled searches in this process
_settled: Dict[Tuple[str, MonomialIdeal], bool] = {}


class SearchResult(str, Enum):
    WITNESS_FOUND = "witness_found"
    EXHAUSTED_NEGATIVE = "exhausted_negative"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass
class SearchStats:
    examined: int = 0
    pruned: int = 0
    elapsed: float = 0.0
    total_orders: int = 0
    next_rank: Optional[int] = None


@dataclass
class SearchOutcome:
    predicate: str
    result: SearchResult
    witness: Optional[TotalOrder] = None
    witness_rank: Optional[int] = None
    stats: SearchStats = field(default_factory=SearchStats)

    def to_json(self) -> Dict:
        return {
            "predicate": self.predicate,
            "result": self.result.value,
            "witness": self.witness.format() if self.witness else None,
            "witness_rank": self.witness_rank,
            "stats": {
                "examined": self.stats.examined,
                "pruned": self.stats.pruned,
                "elapsed": round(self.stats.elapsed, 3),
                "total_orders": self.stats.total_orders,
                "next_rank": self.stats.next_rank,
            },
        }


def _lyubeznik_ok(ideal: MonomialIdeal, order: TotalOrder) -> bool:
    return lyubeznik_minimal(ideal, order).minimal


def _bridge_friendly_ok(ideal: MonomialIdeal, order: TotalOrder) -> bool:
    return is_bridge_friendly(ideal, order)


def _bm_ok(ideal: MonomialIdeal, order: TotalOrder) -> bool:
    return is_bm_minimal(ideal, order, betti_table(ideal))


PREDICATES: Dict[str, Callable[[MonomialIdeal, TotalOrder], bool]] = {
    "lyubeznik": _lyubeznik_ok,
    "bridge-friendly": _bridge_friendly_ok,
    "barile-macchia": _bm_ok,
}


def symmetries(I: MonomialIdeal) -> List[Tuple[int, ...]]:
    """Generator permutations induced by variable permutations that fix Mingens(I); identity first."""
    if I.num_vars > MAX_SYMMETRY_VARS:
        raise CapExceededError(f"{I.num_vars} variables exceed the symmetry cap of {MAX_SYMMETRY_VARS}")
    index = {g.exponents: i for i, g in enumerate(I.gens)}
    signature = [tuple(sorted(g.exponents[v] for g in I.gens)) for v in range(I.num_vars)]
    classes: Dict[Tuple[int, ...], List[int]] = {}
    for v in range(I.num_vars):
        classes.setdefault(signature[v], []).append(v)
    blocks = list(classes.values())
    found = set()
    for choice in itertools.product(*(itertools.permutations(block) for block in blocks)):
        image = [0] * I.num_vars
        for block, chosen in zip(blocks, choice):
            for v, w in zip(block, chosen):
                image[v] = w
        perm = []
        for g in I.gens:
            moved = [0] * I.num_vars
            for v, e in enumerate(g.exponents):
                moved[image[v]] = e
            target = index.get(tuple(moved))
            if target is None:
                break
            perm.append(target)
        else:
            found.add(tuple(perm))
    identity = tuple(range(len(I.gens)))
    return [identity] + sorted(found - {identity})


class BlockResult(NamedTuple):
    witness_rank: Optional[int]
    examined: int
    pruned: int
    next_rank: Optional[int]


def _is_representative(ranking: Tuple[int, ...], group: Sequence[Tuple[int, ...]]) -> bool:
    return not any(tuple(g[r] for r in ranking) < ranking for g in group)


def _scan_block(ideal: MonomialIdeal, predicate: str, start: int, stop: int,
                group: Tuple[Tuple[int, ...], ...], budget: Optional[int]) -> BlockResult:
    """Evaluate ranks [start, stop); stop early on a witness or once budget orders were examined."""
    check = PREDICATES[predicate]
    examined = pruned = 0
    perms = itertools.islice(itertools.permutations(range(len(ideal.gens))), start, stop)
    for rank, ranking in enumerate(perms, start):
        if group and not _is_representative(ranking, group):
            pruned += 1
            continue
        if budget is not None and examined >= budget:
            return BlockResult(None, examined, pruned, rank)
        examined += 1
        if check(ideal, TotalOrder(ideal, ranking)):
            return BlockResult(rank, examined, pruned, None)
    return BlockResult(None, examined, pruned, None)


def _scan_block_args(args) -> BlockResult:
    return _scan_block(*args)


def _order_at_rank(ideal: MonomialIdeal, rank: int) -> TotalOrder:
    ranking = next(itertools.islice(itertools.permutations(range(len(ideal.gens))), rank, None))
    return TotalOrder(ideal, ranking)


def _from_cache(ideal: MonomialIdeal, predicate: str, row: Dict) -> Optional[SearchOutcome]:
    result = SearchResult(row["result"])
    stats = SearchStats(examined=row["examined"], pruned=row["pruned"],
                        total_orders=math.factorial(len(ideal.gens)), next_rank=row["next_rank"])
    if result is SearchResult.WITNESS_FOUND:
        witness = TotalOrder(ideal, tuple(row["witness"]))
        if not PREDICATES[predicate](ideal, witness):
            logger.warning("Cached witness failed re-verification, searching again")
            return None
        return SearchOutcome(predicate, result, witness, None, stats)
    if result is SearchResult.EXHAUSTED_NEGATIVE:
        return SearchOutcome(predicate, result, None, None, stats)
    return None


def is_restriction_of(sub: MonomialIdeal, ideal: MonomialIdeal) -> bool:
    """True when sub == ideal^{<=m} for some m; lcm(sub) is then always such an m."""
    if sub.num_vars != ideal.num_vars:
        return False
    try:
        return hhz_subideal(ideal, sub.lcm()) == sub
    except ZeroIdealError:
        return False


def _check_restriction_consistency(ideal: MonomialIdeal, predicate: str, has_order: bool):
    """An order for I restricts to an order for every I^{<=m}; raise if settled searches disagree."""
    if predicate not in MONOTONE_PREDICATES:
        return
    for (other_predicate, other), other_has in _settled.items():
        if other_predicate != predicate or other == ideal:
            continue
        if has_order and not other_has and is_restriction_of(other, ideal):
            raise IntegrityError(f"{ideal} has a {predicate} order but its restriction {other} has none")
        if other_has and not has_order and is_restriction_of(ideal, other):
            raise IntegrityError(f"{other} has a {predicate} order but its restriction {ideal} has none")
    if len(_settled) >= SETTLED_LIMIT:
        _settled.pop(next(iter(_settled)))
    _settled[(predicate, ideal)] = has_order


def _settle(ideal: MonomialIdeal, outcome: SearchOutcome) -> SearchOutcome:
    if outcome.result is not SearchResult.BUDGET_EXCEEDED:
        _check_restriction_consistency(ideal, outcome.predicate,
                                       outcome.result is SearchResult.WITNESS_FOUND)
    return outcome


def search_orders(ideal: MonomialIdeal, predicate: str, budget: Optional[int] = None,
                  use_symmetry: bool = False, jobs: int = 1, store: Optional[OutcomeStore] = None,
                  progress: bool = False) -> SearchOutcome:
    """Find the lowest-rank order satisfying the predicate, or prove none exists."""
    c = len(ideal.gens)
    if c > MAX_SEARCH_GENS:
        raise CapExceededError(f"{c} generators exceed the order-search cap of {MAX_SEARCH_GENS}")
    if predicate not in PREDICATES:
        raise ValueError(f"unknown predicate {predicate!r}")
    total = math.factorial(c)
    started = time.perf_counter()
    start_rank, examined, pruned = 0, 0, 0

    if store is not None:
        row = store.lookup_outcome(ideal, predicate, use_symmetry)
        if row is not None:
            cached = _from_cache(ideal, predicate, row)
            if cached is not None:
                logger.info(f"Using cached {predicate} outcome: {cached.result.value}")
                return _settle(ideal, cached)
            if row["next_rank"] is not None:
                start_rank, examined, pruned = row["next_rank"], row["examined"], row["pruned"]
                logger.info(f"Resuming {predicate} search at rank {start_rank}")

    group = tuple(symmetries(ideal)[1:]) if use_symmetry else ()
    logger.info(f"Searching {total} orders of {c} generators for {predicate}"
                f" (symmetry={'on' if use_symmetry else 'off'}, jobs={jobs})")

    blocks = [(s, min(s + BLOCK_SIZE, total)) for s in range(start_rank, total, BLOCK_SIZE)]
    remaining = budget
    witness_rank = None
    next_rank = None
    bar = tqdm(total=len(blocks), desc=predicate, unit="block", disable=not progress)
    pool = Pool(processes=jobs) if jobs > 1 else None
    try:
        wave_size = max(1, jobs)
        for w in range(0, len(blocks), wave_size):
            wave = blocks[w:w + wave_size]
            tasks = [(ideal, predicate, s, e, group, remaining) for s, e in wave]
            results = pool.map(_scan_block_args, tasks) if pool else [_scan_block_args(t) for t in tasks]
            for (s, e), res in zip(wave, results):
                over = remaining is not None and (res.next_rank is not None or res.examined > remaining)
                if over:
                    # rerun with the exact budget left after the earlier blocks of this wave
                    res = _scan_block(ideal, predicate, s, e, group, remaining)
                examined += res.examined
                pruned += res.pruned
                if remaining is not None:
                    remaining -= res.examined
                bar.update(1)
                if res.witness_rank is not None:
                    witness_rank = res.witness_rank
                    break
                if res.next_rank is not None:
                    next_rank = res.next_rank
                    break
            if witness_rank is not None or next_rank is not None:
                break
    finally:
        bar.close()
        if pool is not None:
            pool.close()
            pool.join()

    stats = SearchStats(examined, pruned, time.perf_counter() - started, total, next_rank)
    if witness_rank is not None:
        witness = _order_at_rank(ideal, witness_rank)
        if not PREDICATES[predicate](ideal, witness):
            raise IntegrityError(f"witness at rank {witness_rank} failed re-verification")
        outcome = SearchOutcome(predicate, SearchResult.WITNESS_FOUND, witness, witness_rank, stats)
    elif next_rank is not None:
        outcome = SearchOutcome(predicate, SearchResult.BUDGET_EXCEEDED, stats=stats)
    else:
        outcome = SearchOutcome(predicate, SearchResult.EXHAUSTED_NEGATIVE, stats=stats)
    logger.info(f"{predicate}: {outcome.result.value} after {examined} orders"
                f" ({pruned} pruned) in {stats.elapsed:.2f}s")
    if store is not None:
        store.save_outcome(ideal, predicate, use_symmetry, outcome.result.value,
                           list(outcome.witness.ranking) if outcome.witness else None,
                           examined, pruned, next_rank)
    return _settle(ideal, outcome)


def exists_lyubeznik_order(I: MonomialIdeal, budget: Optional[int] = None, use_symmetry: bool = False,
                           **kwargs) -> SearchOutcome:
    return search_orders(I, "lyubeznik", budget, use_symmetry, **kwargs)


def exists_bf_order(I: MonomialIdeal, budget: Optional[int] = None, use_symmetry: bool = False,
                    **kwargs) -> SearchOutcome:
    return search_orders(I, "bridge-friendly", budget, use_symmetry, **kwargs)


def exists_bm_order(I: MonomialIdeal, budget: Optional[int] = None, use_symmetry: bool = False,
                    **kwargs) -> SearchOutcome:
    return search_orders(I, "barile-macchia", budget, use_symmetry, **kwargs)


def first_order_with_minimum(I: MonomialIdeal, g: Monomial, predicate: str = "bridge-friendly") -> Optional[TotalOrder]:
    """Lowest-rank order with g last that satisfies the predicate."""
    last = I.index(g)
    rest = [i for i in range(len(I.gens)) if i != last]
    check = PREDICATES[predicate]
    for head in itertools.permutations(rest):
        order = TotalOrder(I, head + (last,))
        if check(I, order):
            return order
    return None


@dataclass(frozen=True)
class RestrictionSpec:
    """I^{<=m} = f * sub, with the feasible minima of sub already known."""

    parent: MonomialIdeal
    m: Monomial
    f: Monomial
    sub: MonomialIdeal
    feasible_min_of_sub: FrozenSet[Monomial]

    def __post_init__(self):
        object.__setattr__(self, "feasible_min_of_sub", frozenset(self.feasible_min_of_sub))
        try:
            restricted = hhz_subideal(self.parent, self.m)
        except ZeroIdealError as e:
            raise SpecInconsistencyError(f"restriction is the zero ideal: {e}") from e
        if restricted != scale(self.f, self.sub):
            raise SpecInconsistencyError(
                f"{self.parent.format_monomial(self.m)}-restriction is not "
                f"{self.parent.format_monomial(self.f)} times the given subideal")


def restriction_for_power(base: MonomialIdeal, n: int, m: Monomial, f: Monomial,
                          feasible: Iterable[Monomial]) -> RestrictionSpec:
    """RestrictionSpec tying base^n restricted at m to f * base^(n-1)."""
    return RestrictionSpec(power(base, n), m, f, power(base, n - 1), frozenset(feasible))


def feasible_min_bf(I: MonomialIdeal, restrictions: Sequence[RestrictionSpec] = (),
                    base: bool = False) -> FrozenSet[Monomial]:
    """Generators that can be the minimum of a bridge-friendly order."""
    if base:
        found = frozenset(g for g in I.gens if first_order_with_minimum(I, g) is not None)
        logger.info(f"Brute force found {len(found)} feasible minima among {len(I.gens)} generators")
        return found
    feasible = set()
    for g in I.gens:
        for spec in restrictions:
            if spec.parent != I:
                raise SpecInconsistencyError("restriction spec belongs to a different ideal")
            if not g.divides(spec.m):
                continue
            if not spec.f.divides(g):
                raise SpecInconsistencyError(
                    f"{I.format_monomial(spec.f)} does not divide generator {I.format_monomial(g)}")
            if g.quotient(spec.f) not in spec.feasible_min_of_sub:
                break
        else:
            feasible.add(g)
    return frozenset(feasible)
