import itertools
import json
import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from errors import (
    AmbientMismatchError,
    CapExceededError,
    IllegalParameterError,
    ParseError,
    UnsupportedPowerError,
    ZeroIdealError,
)

logger = logging.getLogger(__name__)

MAX_VARS = 32
MAX_EXPONENT = 0xFFFF
MAX_GENS = 63
# 2^c subset tables are materialized in memory
TABLE_GENS = 24

Multidegree = Tuple[int, ...]

_FACTOR = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\^\s*(\d+))?\s*$")


@dataclass(frozen=True, order=True)
class Monomial:
    """Exponent vector over a fixed list of ambient variables."""

    exponents: Tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if len(exps) == 0 or len(exps) > MAX_VARS:
            raise CapExceededError(f"variable count must be in 1..{MAX_VARS}, got {len(exps)}")
        for e in exps:
            if e < 0 or e > MAX_EXPONENT:
                raise IllegalParameterError(f"exponent {e} outside 0..{MAX_EXPONENT}")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def unit(cls, num_vars: int) -> "Monomial":
        return cls((0,) * num_vars)

    @property
    def num_vars(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def is_unit(self) -> bool:
        return not any(self.exponents)

    def _check_ambient(self, other: "Monomial"):
        if self.num_vars != other.num_vars:
            raise AmbientMismatchError(f"{self.num_vars} vs {other.num_vars} variables")

    def divides(self, other: "Monomial") -> bool:
        self._check_ambient(other)
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __mul__(self, other: "Monomial") -> "Monomial":
        self._check_ambient(other)
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def quotient(self, other: "Monomial") -> "Monomial":
        """Return self / other; other must divide self."""
        if not other.divides(self):
            raise IllegalParameterError("quotient of non-divisible monomials")
        return Monomial(tuple(a - b for a, b in zip(self.exponents, other.exponents)))

    def join(self, other: "Monomial") -> "Monomial":
        self._check_ambient(other)
        return Monomial(tuple(map(max, self.exponents, other.exponents)))

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        names = names or default_names(self.num_vars)
        factors = []
        for name, e in zip(names, self.exponents):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        return "*".join(factors) if factors else "1"

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> "Monomial":
        """Parse product form like "x1^2*x2*x4"; "1" is the unit."""
        index = {name: i for i, name in enumerate(names)}
        exps = [0] * len(names)
        text = text.strip()
        if not text:
            raise ParseError("empty monomial literal")
        if text == "1":
            return cls(tuple(exps))
        for factor in text.split("*"):
            match = _FACTOR.match(factor)
            if not match:
                raise ParseError(f"malformed factor {factor!r} in {text!r}")
            name, power = match.group(1), match.group(2)
            if name not in index:
                raise ParseError(f"unknown variable {name!r} in {text!r}")
            exps[index[name]] += int(power) if power is not None else 1
        return cls(tuple(exps))


def default_names(num_vars: int) -> Tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, num_vars + 1))


def divides(a: Monomial, b: Monomial) -> bool:
    return a.divides(b)


def lcm_of(ms: Iterable[Monomial], num_vars: Optional[int] = None) -> Monomial:
    """Componentwise max; the empty join is the unit of the given ambient."""
    ms = list(ms)
    if not ms:
        if num_vars is None:
            raise IllegalParameterError("lcm of an empty set needs the ambient variable count")
        return Monomial.unit(num_vars)
    result = ms[0]
    for m in ms[1:]:
        result = result.join(m)
    if num_vars is not None and result.num_vars != num_vars:
        raise AmbientMismatchError(f"{result.num_vars} vs {num_vars} variables")
    return result


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal stored by its canonical minimal generating set.

    Generators are kept in descending lexicographic order of exponent
    vectors; every subset bitmask in the library indexes this order.
    Variable names are presentation only and take no part in equality.
    """

    num_vars: int
    gens: Tuple[Monomial, ...]
    var_names: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        gens = tuple(self.gens)
        object.__setattr__(self, "gens", gens)
        if not gens:
            raise ZeroIdealError("ideal has no generators")
        if len(gens) > MAX_GENS:
            raise CapExceededError(f"{len(gens)} generators exceed the cap of {MAX_GENS}")
        for g in gens:
            if g.num_vars != self.num_vars:
                raise AmbientMismatchError(f"generator {g.exponents} is not in {self.num_vars} variables")
            if g.is_unit():
                raise IllegalParameterError("the unit ideal is not supported")
        if list(gens) != sorted(set(gens), reverse=True):
            raise IllegalParameterError("generators must be distinct and in canonical order")
        for a, b in itertools.permutations(gens, 2):
            if a.divides(b):
                raise IllegalParameterError(f"generator {a.exponents} divides {b.exponents}")
        names = tuple(self.var_names) or default_names(self.num_vars)
        if len(names) != self.num_vars or len(set(names)) != len(names):
            raise IllegalParameterError(f"need {self.num_vars} distinct variable names")
        object.__setattr__(self, "var_names", names)

    def __len__(self) -> int:
        return len(self.gens)

    def index(self, m: Monomial) -> int:
        try:
            return self.gens.index(m)
        except ValueError:
            raise IllegalParameterError(f"{self.format_monomial(m)} is not a minimal generator") from None

    def lcm(self) -> Monomial:
        return lcm_of(self.gens)

    def format_monomial(self, m: Monomial) -> str:
        return m.format(self.var_names)

    def parse_monomial(self, text: str) -> Monomial:
        return Monomial.parse(text, self.var_names)

    def subset(self, mask: int) -> List[Monomial]:
        return [g for i, g in enumerate(self.gens) if mask >> i & 1]

    def mask_of(self, monomials: Iterable[Monomial]) -> int:
        mask = 0
        for m in monomials:
            mask |= 1 << self.index(m)
        return mask

    def with_names(self, names: Sequence[str]) -> "MonomialIdeal":
        return MonomialIdeal(self.num_vars, self.gens, tuple(names))

    def to_json(self) -> Dict:
        return {"vars": list(self.var_names), "gens": [list(g.exponents) for g in self.gens]}

    @classmethod
    def from_json(cls, data: Dict) -> "MonomialIdeal":
        try:
            names = [str(v) for v in data["vars"]]
            raw = [Monomial(tuple(int(e) for e in row)) for row in data["gens"]]
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"malformed ideal document: {e}") from e
        ideal = minimalize(raw, len(names)).with_names(names)
        if len(ideal.gens) != len(raw):
            logger.warning(f"Ideal file listed {len(raw)} generators, {len(ideal.gens)} are minimal")
        return ideal

    @classmethod
    def load(cls, path: Union[str, Path]) -> "MonomialIdeal":
        try:
            data = json.loads(Path(path).read_text())
        except OSError as e:
            raise ParseError(f"cannot read {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ParseError(f"{path} is not valid JSON: {e}") from e
        return cls.from_json(data)

    def dump(self, path: Union[str, Path]):
        Path(path).write_text(json.dumps(self.to_json(), indent=2))

    def __str__(self) -> str:
        return "(" + ", ".join(self.format_monomial(g) for g in self.gens) + ")"


def minimalize(raw: Iterable[Monomial], num_vars: Optional[int] = None,
               var_names: Sequence[str] = ()) -> MonomialIdeal:
    """Drop duplicates and multiples, then sort canonically."""
    unique = set(raw)
    if not unique:
        raise ZeroIdealError("cannot build an ideal from an empty generator list")
    sizes = {m.num_vars for m in unique}
    if num_vars is not None:
        sizes.add(num_vars)
    if len(sizes) != 1:
        raise AmbientMismatchError(f"mixed variable counts {sorted(sizes)}")
    kept: List[Monomial] = []
    for m in sorted(unique, key=lambda g: (g.degree, g.exponents)):
        if not any(k.divides(m) for k in kept):
            kept.append(m)
    kept.sort(reverse=True)
    return MonomialIdeal(sizes.pop(), tuple(kept), tuple(var_names))


def power(I: MonomialIdeal, n: int) -> MonomialIdeal:
    if n < 1:
        raise UnsupportedPowerError(f"power n={n} would be the unit ideal")
    products = []
    for combo in itertools.combinations_with_replacement(I.gens, n):
        exps = [0] * I.num_vars
        for g in combo:
            for v, e in enumerate(g.exponents):
                exps[v] += e
        products.append(Monomial(tuple(exps)))
    return minimalize(products, I.num_vars, I.var_names)


def scale(m: Monomial, I: MonomialIdeal) -> MonomialIdeal:
    """m * I; multiplying by a fixed monomial keeps minimality and the canonical order."""
    if m.num_vars != I.num_vars:
        raise AmbientMismatchError(f"{m.num_vars} vs {I.num_vars} variables")
    return MonomialIdeal(I.num_vars, tuple(m * g for g in I.gens), I.var_names)


def hhz_subideal(I: MonomialIdeal, m: Monomial) -> MonomialIdeal:
    """Subideal generated by the minimal generators dividing m."""
    selected = tuple(g for g in I.gens if g.divides(m))
    if not selected:
        raise ZeroIdealError(f"no generator of {I} divides {I.format_monomial(m)}")
    return MonomialIdeal(I.num_vars, selected, I.var_names)


def lcm_lattice(I: MonomialIdeal) -> Set[Multidegree]:
    """Join-closure of the generators, saturated one generator at a time."""
    gens = [g.exponents for g in I.gens]
    seen: Set[Multidegree] = set(gens)
    frontier = set(gens)
    while frontier:
        fresh = set()
        for a in frontier:
            for g in gens:
                joined = tuple(map(max, a, g))
                if joined not in seen:
                    fresh.add(joined)
        seen |= fresh
        frontier = fresh
    return seen


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class SubsetLattice:
    """Order-independent tables over all 2^c generator subsets.

    lcm_id[mask]      index into lcms of lcm(subset), 0 is the unit
    divisors[lcm id]  mask of generators dividing that lcm
    bridges[mask]     members m with lcm(subset - m) == lcm(subset)
    """

    def __init__(self, ideal: MonomialIdeal):
        c = len(ideal.gens)
        if c > TABLE_GENS:
            raise CapExceededError(f"{c} generators exceed the subset-table cap of {TABLE_GENS}")
        self.ideal = ideal
        self.size = 1 << c
        self.full = self.size - 1
        gens = np.array([g.exponents for g in ideal.gens], dtype=np.int64)

        table = np.zeros((self.size, ideal.num_vars), dtype=np.int64)
        for i in range(c):
            block = 1 << i
            table[block:2 * block] = np.maximum(table[:block], gens[i])
        rows, inverse = np.unique(table, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)

        weights = np.left_shift(np.int64(1), np.arange(c, dtype=np.int64))
        divides_rows = np.all(gens[None, :, :] <= rows[:, None, :], axis=2)
        divisor_masks = divides_rows.astype(np.int64) @ weights

        masks = np.arange(self.size, dtype=np.int64)
        bridges = np.zeros(self.size, dtype=np.int64)
        for i in range(c):
            bit = np.int64(1) << i
            member = (masks & bit) != 0
            same = inverse == inverse[masks ^ bit]
            bridges |= np.where(member & same, bit, 0)

        self.lcm_array = inverse.astype(np.int64)
        self.divisor_array = divisor_masks.astype(np.int64)
        self.bridge_array = bridges
        self.lcm_id: List[int] = self.lcm_array.tolist()
        self.divisors: List[int] = self.divisor_array.tolist()
        self.bridges: List[int] = bridges.tolist()
        self.lcms: List[Multidegree] = [tuple(int(e) for e in row) for row in rows]

    def lcm(self, mask: int) -> Multidegree:
        return self.lcms[self.lcm_id[mask]]

    def gaps(self, mask: int) -> int:
        return self.divisors[self.lcm_id[mask]] & ~mask


@lru_cache(maxsize=64)
def lattice_for(ideal: MonomialIdeal) -> SubsetLattice:
    logger.debug(f"Building subset tables for {len(ideal.gens)} generators")
    return SubsetLattice(ideal)
