"""Verification suites reproducing each computational claim, with provenance per step."""
import itertools
import logging
import random
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, FrozenSet, List, Optional, Set

from betti import betti_table, euler_check, minimality_verdict
from critical import (
    CellFamily,
    GenSubset,
    MorseAnalyzer,
    TotalOrder,
    analyze_subset,
    critical_cells,
    cycle_obstruction,
    format_subset,
    is_bridge_friendly,
    is_lyubeznik_critical,
    lyubeznik_critical_triple,
    lyubeznik_minimal,
    order_for_bf,
    order_for_labc,
    shares_unique_factor,
    subset_type,
)
from errors import UnknownSuiteError, ZeroIdealError
from graphs import (
    FORBIDDEN_BF,
    FORBIDDEN_LYUBEZNIK,
    EdgeWeightedTree,
    Graph,
    build_bf,
    build_labc,
    build_named,
    contains_induced,
    cycle_graph,
    edge,
    edge_ideal,
    enumerate_connected,
    forbidden_graphs,
    is_chordal,
    is_isomorphic,
    path_graph,
    recognize_bf,
    recognize_labc,
    star_graph,
)
from ideal import Monomial, MonomialIdeal, hhz_subideal, minimalize, popcount, power, scale
from search import (
    exists_bf_order,
    exists_bm_order,
    exists_lyubeznik_order,
    feasible_min_bf,
    first_order_with_minimum,
    restriction_for_power,
)
from store import OutcomeStore

logger = logging.getLogger(__name__)

PAPER, TRIVIAL, DERIVED, INFO = "PAPER", "TRIVIAL", "DERIVED", "INFO"


class RuntimeClass(str, Enum):
    SECONDS = "seconds"
    MINUTES = "minutes"
    EXTENDED = "extended"

    @property
    def weight(self) -> int:
        return list(RuntimeClass).index(self)


@dataclass
class SuiteContext:
    jobs: int = 1
    extended: bool = False
    store: Optional[OutcomeStore] = None
    progress: bool = False

    def search_kwargs(self) -> Dict:
        return {"jobs": self.jobs, "store": self.store, "progress": self.progress}


@dataclass
class SuiteStep:
    name: str
    action: Callable[[], Any]
    expected: Any
    provenance: str


@dataclass
class StepReport:
    name: str
    provenance: str
    expected: Any
    actual: Any
    passed: bool
    elapsed: float
    error: Optional[str] = None

    def to_json(self) -> Dict:
        doc = {
            "name": self.name,
            "provenance": self.provenance,
            "expected": self.expected,
            "actual": self.actual,
            "passed": self.passed,
            "elapsed": round(self.elapsed, 3),
        }
        if self.error:
            doc["error"] = self.error
        return doc


@dataclass
class SuiteReport:
    suite: str
    description: str
    runtime_class: RuntimeClass
    steps: List[StepReport] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return all(step.passed for step in self.steps)

    def to_json(self) -> Dict:
        return {
            "suite": self.suite,
            "description": self.description,
            "runtime_class": self.runtime_class.value,
            "status": "verified" if self.verified else "refuted",
            "steps": [step.to_json() for step in self.steps],
        }


@dataclass
class TheoremSuite:
    id: str
    description: str
    runtime_class: RuntimeClass
    build_steps: Callable[[SuiteContext], List[SuiteStep]]


def run_suite(suite: TheoremSuite, context: Optional[SuiteContext] = None) -> SuiteReport:
    context = context or SuiteContext()
    report = SuiteReport(suite.id, suite.description, suite.runtime_class)
    logger.info(f"Running suite {suite.id}: {suite.description}")
    for step in suite.build_steps(context):
        started = time.perf_counter()
        error = None
        try:
            actual = step.action()
        except Exception as e:
            logger.error(f"Step {step.name} raised {type(e).__name__}: {e}")
            actual, error = None, f"{type(e).__name__}: {e}"
        passed = error is None and (step.provenance == INFO or actual == step.expected)
        elapsed = time.perf_counter() - started
        mark = "✅" if passed else "❌"
        logger.info(f"{mark} [{step.provenance}] {step.name}: {actual!r} ({elapsed:.2f}s)")
        report.steps.append(StepReport(step.name, step.provenance, step.expected, actual, passed, elapsed, error))
    return report


def _ideal(names: str, *gens: str) -> MonomialIdeal:
    names = tuple(names.split())
    return minimalize([Monomial.parse(g, names) for g in gens], len(names), names)


def _mono(I: MonomialIdeal, text: str) -> Monomial:
    return I.parse_monomial(text)


def _formatted(I: MonomialIdeal, gens) -> List[str]:
    return sorted(I.format_monomial(g) for g in gens)


# example-2.2 ---------------------------------------------------------------

def _four_cycle() -> MonomialIdeal:
    return edge_ideal(Graph.from_edges([("w", "x"), ("x", "y"), ("y", "z"), ("z", "w")]))


def _example_steps(ctx: SuiteContext) -> List[SuiteStep]:
    I = _four_cycle()
    order = TotalOrder.parse(I, "w*x,x*y,y*z,w*z")
    s1 = GenSubset.parse(I, "w*x,x*y,y*z")
    s2 = GenSubset.parse(I, "w*x,x*y,w*z")
    s3 = GenSubset(I, (1 << 4) - 1)

    def analysis(s):
        a = analyze_subset(I, order, s)
        return {"bridges": format_subset(I, a.bridges), "true_gaps": format_subset(I, a.true_gaps)}

    return [
        SuiteStep("sigma1 is not Lyubeznik-critical", lambda: is_lyubeznik_critical(I, order, s1), False, PAPER),
        SuiteStep("sigma2 is Lyubeznik-critical", lambda: is_lyubeznik_critical(I, order, s2), True, PAPER),
        SuiteStep("sigma1 bridges and true gaps", lambda: analysis(s1),
                  {"bridges": ["x*y"], "true_gaps": ["w*z"]}, PAPER),
        SuiteStep("sigma1 is type-1", lambda: subset_type(I, order, s1).type1, True, PAPER),
        SuiteStep("sigma2 is potentially type-2", lambda: subset_type(I, order, s2).ptype2, True, PAPER),
        SuiteStep("sigma2 is not type-2", lambda: subset_type(I, order, s2).type2, False, PAPER),
        SuiteStep("sigma3 is type-2", lambda: subset_type(I, order, s3).type2, True, PAPER),
        SuiteStep("not bridge-friendly under this order", lambda: is_bridge_friendly(I, order), False, PAPER),
        SuiteStep("Lyubeznik cell totals",
                  lambda: critical_cells(I, order, CellFamily.LYUBEZNIK).totals(), [1, 4, 5, 2, 0], DERIVED),
        SuiteStep("Betti totals", lambda: betti_table(I).totals(), [1, 4, 4, 1], DERIVED),
        SuiteStep("Lyubeznik resolution is not minimal", lambda: lyubeznik_minimal(I, order).minimal, False, DERIVED),
    ]


# example-joined-6-cycles ----------------------------------------------------

JOINED_SIX_ORDER = "v*y,u*x,x*z,t*w,y*z,w*z,s*t,s*v,s*u"


def _joined_steps(ctx: SuiteContext) -> List[SuiteStep]:
    G = build_named("joined_six_cycles")
    I = edge_ideal(G)
    order = TotalOrder.parse(I, JOINED_SIX_ORDER)
    steps = [
        SuiteStep("graph has 8 vertices and 9 edges", lambda: (len(G.vertices), len(G.edges)), (8, 9), PAPER),
        SuiteStep("graph is not chordal", lambda: is_chordal(G), False, PAPER),
        SuiteStep("bridge-friendly under the listed order", lambda: is_bridge_friendly(I, order), True, PAPER),
    ]
    for name, H in zip(FORBIDDEN_BF, forbidden_graphs(FORBIDDEN_BF)):
        steps.append(SuiteStep(f"no induced {name}", lambda H=H: contains_induced(G, H), False, PAPER))
    return steps


# thm-3.5 / prop-3.1 ---------------------------------------------------------

def _labc_steps(ctx: SuiteContext) -> List[SuiteStep]:
    steps = []
    for a, b, c in itertools.product(range(3), repeat=3):
        steps.append(SuiteStep(
            f"L({a},{b},{c}) Lyubeznik resolution is minimal",
            lambda a=a, b=b, c=c: lyubeznik_minimal(edge_ideal(build_labc(a, b, c)), order_for_labc(a, b, c)).minimal,
            True, PAPER))
    return steps


def _forbidden_lyubeznik_steps(ctx: SuiteContext) -> List[SuiteStep]:
    steps = []
    for name, G in zip(FORBIDDEN_LYUBEZNIK, forbidden_graphs(FORBIDDEN_LYUBEZNIK)):
        steps.append(SuiteStep(
            f"I({name}) has no Lyubeznik order",
            lambda G=G: exists_lyubeznik_order(edge_ideal(G), **ctx.search_kwargs()).result.value,
            "exhausted_negative", PAPER))
    return steps


# thm-3.8 --------------------------------------------------------------------

C4_SQUARE_RESTRICTION = ("x1^2*x2^2", "x2^2*x3^2", "x1^2*x2*x4", "x1*x2^2*x3", "x2*x3^2*x4", "x1*x2*x3*x4")


def _c4_square_restriction() -> MonomialIdeal:
    I2 = power(edge_ideal(cycle_graph(4)), 2)
    return hhz_subideal(I2, _mono(I2, "x1^2*x2^2*x3^2*x4"))


def _orders_without_triple(n: int) -> int:
    I = power(_ideal("x y", "x", "y"), n)
    misses = 0
    for ranking in itertools.permutations(range(len(I.gens))):
        if lyubeznik_critical_triple(I, TotalOrder(I, ranking)) is None:
            misses += 1
    return misses


def _powers_steps(ctx: SuiteContext) -> List[SuiteStep]:
    kw = ctx.search_kwargs()
    p3_square = power(edge_ideal(path_graph(3)), 2)
    steps = [
        SuiteStep("C4 square restriction matches the listed ideal",
                  lambda: _c4_square_restriction() == _ideal("x1 x2 x3 x4", *C4_SQUARE_RESTRICTION), True, PAPER),
        SuiteStep("I(P3)^2 = x2^2 (x1^2, x1*x3, x3^2)",
                  lambda: p3_square == scale(_mono(p3_square, "x2^2"), _ideal("x1 x2 x3", "x1^2", "x1*x3", "x3^2")),
                  True, DERIVED),
        SuiteStep("I(P3)^2 has a Lyubeznik order",
                  lambda: exists_lyubeznik_order(p3_square, **kw).result.value, "witness_found", PAPER),
    ]
    negatives = {
        "I(K13)^2": lambda: power(edge_ideal(star_graph(3)), 2),
        "I(P4)^2": lambda: power(edge_ideal(path_graph(4)), 2),
        "I(C3)^2": lambda: power(edge_ideal(cycle_graph(3)), 2),
        "C4 square restriction": _c4_square_restriction,
    }
    for name, make in negatives.items():
        steps.append(SuiteStep(f"{name} has no Lyubeznik order",
                               lambda make=make: exists_lyubeznik_order(make(), **kw).result.value,
                               "exhausted_negative", PAPER))
    for n in (3, 4, 5):
        steps.append(SuiteStep(f"every order of (x,y)^{n} has a critical 3-subset",
                               lambda n=n: _orders_without_triple(n), 0, PAPER))
    return steps


# prop-2.11 / remark-2.12 -------------------------------------------------------

def _power_pairs(n: int) -> Dict[str, tuple]:
    """(graph ideal, m, f) with I^(n+1) restricted at m equal to f * I^n."""
    p4 = edge_ideal(path_graph(4))
    c3 = edge_ideal(cycle_graph(3))
    c4 = edge_ideal(cycle_graph(4))
    return {
        "P4": (p4, f"x2^{n}*x1^{n + 1}*x3^{n + 1}*x4^{n + 1}", "x3*x4"),
        "C3": (c3, f"x1^{n}*x2^{n + 1}*x3^{n + 1}", "x2*x3"),
        "C4": (c4, f"x2^{n}*x3^{n}*x1^{n + 1}*x4^{n + 1}", "x1*x4"),
    }


def _restriction_identity(I: MonomialIdeal, n: int, m: str, f: str) -> bool:
    return hhz_subideal(power(I, n + 1), _mono(I, m)) == scale(_mono(I, f), power(I, n))


def _prop_2_11_steps(ctx: SuiteContext) -> List[SuiteStep]:
    steps = []
    for n in (1, 2, 3):
        for name, (I, m, f) in _power_pairs(n).items():
            steps.append(SuiteStep(f"{name}: I^{n + 1} restricted at {m} is {f} * I^{n}",
                                   lambda I=I, n=n, m=m, f=f: _restriction_identity(I, n, m, f), True, PAPER))
    return steps


def _remark_2_12_matches() -> int:
    I = _ideal("x x1 x2 x3", "x*x1", "x*x2", "x*x3")
    cube = power(I, 3)
    square = power(I, 2)
    targets = {tuple(betti_table(scale(f, square)).totals()) for f in I.gens}
    matches = 0
    for exps in itertools.product(range(4), repeat=4):
        try:
            sub = hhz_subideal(cube, Monomial(exps))
        except ZeroIdealError:
            continue
        if tuple(betti_table(sub).totals()) in targets:
            matches += 1
    return matches


def _remark_2_12_steps(ctx: SuiteContext) -> List[SuiteStep]:
    return [SuiteStep("no restriction of I^3 has the Betti totals of f * I^2", _remark_2_12_matches, 0, PAPER)]


# prop-4.2 / prop-4.3 / remark-9cycle -------------------------------------------

def _cycle_obstruction_failures(n: int, samples: int, seed: int) -> int:
    I = edge_ideal(cycle_graph(n))
    rng = random.Random(seed)
    failures = 0
    for _ in range(samples):
        ranking = list(range(len(I.gens)))
        rng.shuffle(ranking)
        try:
            cycle_obstruction(n, TotalOrder(I, tuple(ranking)))
        except Exception as e:
            logger.error(f"Cycle construction failed on C{n}: {e}")
            failures += 1
    return failures


def _cycles_steps(ctx: SuiteContext) -> List[SuiteStep]:
    kw = ctx.search_kwargs()
    sizes = range(3, 10 if ctx.extended else 9)
    steps = []
    for n in sizes:
        expected = "witness_found" if n in (3, 5, 6) else "exhausted_negative"
        steps.append(SuiteStep(f"I(C{n}) bridge-friendly order search",
                               lambda n=n: exists_bf_order(edge_ideal(cycle_graph(n)), **kw).result.value,
                               expected, PAPER))
    for n in range(7, 11):
        steps.append(SuiteStep(f"explicit obstruction holds on 25 random orders of I(C{n})",
                               lambda n=n: _cycle_obstruction_failures(n, 25, seed=n), 0, PAPER))
    return steps


def _forbidden_bf_steps(ctx: SuiteContext) -> List[SuiteStep]:
    kw = ctx.search_kwargs()
    steps = []
    for name, G in zip(FORBIDDEN_BF, forbidden_graphs(FORBIDDEN_BF)):
        steps.append(SuiteStep(f"I({name}) has no bridge-friendly order",
                               lambda G=G: exists_bf_order(edge_ideal(G), **kw).result.value,
                               "exhausted_negative", PAPER))
    return steps


def _nine_cycle_steps(ctx: SuiteContext) -> List[SuiteStep]:
    return [SuiteStep("no order of I(C9) gives a minimal Barile-Macchia resolution",
                      lambda: exists_bm_order(edge_ideal(cycle_graph(9)), **ctx.search_kwargs()).result.value,
                      "exhausted_negative", PAPER)]


# thm-4.8 --------------------------------------------------------------------

def random_weighted_trees(count: int = 20, seed: int = 48, max_vertices: int = 6,
                          max_weight: int = 2, max_gens: int = 12) -> List[tuple]:
    """(tree, root) pairs; trees whose edge ideal exceeds max_gens generators are redrawn."""
    rng = random.Random(seed)
    found = []
    while len(found) < count:
        n = rng.randint(2, max_vertices)
        labels = [f"x{i}" for i in range(1, n + 1)]
        pairs = [(labels[i], labels[rng.randrange(i)]) for i in range(1, n)]
        weights = {edge(u, v): rng.randint(0, max_weight) for u, v in pairs}
        if len(pairs) + 2 * sum(weights.values()) > max_gens:
            continue
        found.append((EdgeWeightedTree(Graph.from_edges(pairs), weights), rng.choice(labels)))
    return found


def _bf_trees_steps(ctx: SuiteContext) -> List[SuiteStep]:
    steps = []
    for k, (tw, root) in enumerate(random_weighted_trees()):
        def check(tw=tw, root=root):
            return is_bridge_friendly(edge_ideal(build_bf(tw)), order_for_bf(tw, root))

        size = len(tw.tree.vertices)
        steps.append(SuiteStep(f"tree {k + 1} ({size} vertices, weight {sum(tw.weights.values())}) is bridge-friendly",
                               check, True, PAPER))
    return steps


# prop-4.9 -------------------------------------------------------------------

PAW_SQUARE_RESTRICTION = ("x1^2*x3^2", "x3^2*x4^2", "x1^2*x2*x3", "x1*x2*x3^2", "x1*x3^2*x4",
                          "x2*x3^2*x4", "x1*x2*x3*x4")
DIAMOND_SQUARE_RESTRICTION = ("x2^2*x4^2", "x1*x2^2*x3", "x1*x2^2*x4", "x1*x2*x4^2", "x1*x3*x4^2",
                              "x2^2*x3*x4", "x2*x3*x4^2", "x1*x2*x3*x4")
STAR_POWER_CORE = ("x1^4", "x1^3*x2", "x1^3*x3", "x1^2*x2^2", "x1^2*x2*x3", "x1^2*x3^2",
                   "x1*x2^2*x3", "x1*x2*x3^2", "x2^2*x3^2")


def _restrict(I: MonomialIdeal, n: int, m: str) -> MonomialIdeal:
    return hhz_subideal(power(I, n), _mono(I, m))


def _powers_bf_steps(ctx: SuiteContext) -> List[SuiteStep]:
    kw = ctx.search_kwargs()
    names = "x1 x2 x3 x4"
    paw = edge_ideal(build_named("paw"))
    diamond = edge_ideal(build_named("diamond"))
    k4 = edge_ideal(build_named("k4"))
    variables = _ideal("x1 x2 x3", "x1", "x2", "x3")
    core = _ideal("x1 x2 x3", *STAR_POWER_CORE)

    def bf(make):
        return lambda: exists_bf_order(make(), **kw).result.value

    steps = [
        SuiteStep("C4 square restriction matches the listed ideal",
                  lambda: _c4_square_restriction() == _ideal(names, *C4_SQUARE_RESTRICTION), True, PAPER),
        SuiteStep("paw square restriction matches the listed ideal",
                  lambda: _restrict(paw, 2, "x1^2*x2*x3^2*x4^2") == _ideal(names, *PAW_SQUARE_RESTRICTION), True, PAPER),
        SuiteStep("paw cube restriction is x1*x2 * I(paw)^2",
                  lambda: _restrict(paw, 3, "x1^3*x2^3*x3^2*x4^3") == scale(_mono(paw, "x1*x2"), power(paw, 2)),
                  True, PAPER),
        SuiteStep("diamond square restriction matches the listed ideal",
                  lambda: _restrict(diamond, 2, "x1*x2^2*x3*x4^2") == _ideal(names, *DIAMOND_SQUARE_RESTRICTION),
                  True, PAPER),
        SuiteStep("diamond cube restriction is x2*x4 times the square one",
                  lambda: _restrict(diamond, 3, "x1*x2^3*x3*x4^3")
                  == scale(_mono(diamond, "x2*x4"), _restrict(diamond, 2, "x1*x2^2*x3*x4^2")), True, PAPER),
        SuiteStep("K4 square restriction equals the diamond's",
                  lambda: _restrict(k4, 2, "x1*x2^2*x3*x4^2") == _restrict(diamond, 2, "x1*x2^2*x3*x4^2"),
                  True, PAPER),
        SuiteStep("K4 cube restriction is x2*x4 times the square one",
                  lambda: _restrict(k4, 3, "x1*x2^3*x3*x4^3")
                  == scale(_mono(k4, "x2*x4"), _restrict(k4, 2, "x1*x2^2*x3*x4^2")), True, PAPER),
    ]
    for n in (4, 5, 6):
        steps.append(SuiteStep(
            f"(x1,x2,x3)^{n} restricted at x1^{n}*x2^2*x3^2 is x1^{n - 4} times the 9-generator core",
            lambda n=n: _restrict(variables, n, f"x1^{n}*x2^2*x3^2")
            == scale(Monomial((n - 4, 0, 0)), core), True, PAPER))
    steps += [
        SuiteStep("(x1,x2,x3)^2 is not bridge-friendly", bf(lambda: power(variables, 2)), "exhausted_negative", PAPER),
        SuiteStep("I(P4)^2 is not bridge-friendly", bf(lambda: power(edge_ideal(path_graph(4)), 2)),
                  "exhausted_negative", PAPER),
        SuiteStep("C4 square restriction is not bridge-friendly", bf(_c4_square_restriction),
                  "exhausted_negative", PAPER),
        SuiteStep("paw square restriction is not bridge-friendly",
                  bf(lambda: _ideal(names, *PAW_SQUARE_RESTRICTION)), "exhausted_negative", PAPER),
        SuiteStep("diamond square restriction is not bridge-friendly",
                  bf(lambda: _ideal(names, *DIAMOND_SQUARE_RESTRICTION)), "exhausted_negative", PAPER),
        SuiteStep("9-generator core is not bridge-friendly", bf(lambda: core), "exhausted_negative", PAPER),
    ]
    cube = "(x1,x2,x3)^3 is not bridge-friendly"
    if ctx.extended:
        # 10! orders, cut by the six variable permutations
        steps.append(SuiteStep(cube, lambda: exists_bf_order(power(variables, 3), use_symmetry=True, **kw).result.value,
                               "exhausted_negative", PAPER))
    else:
        steps.append(SuiteStep(f"{cube} (searched in the extended class only)", lambda: len(power(variables, 3)),
                               10, INFO))
    return steps


# prop-4.10 ------------------------------------------------------------------

C3_SQUARE_ORDER = "x2^2*x3^2,x1*x2^2*x3,x1^2*x2^2,x1*x2*x3^2,x1^2*x3^2,x1^2*x2*x3"
C3_CUBE_ORDER = ("x1^3*x3^3,x2^3*x3^3,x1^3*x2^3,x1^2*x2*x3^3,x1*x2^3*x3^2,x1^2*x2^3*x3,"
                 "x1^3*x2*x3^2,x1^3*x2^2*x3,x1^2*x2^2*x3^2,x1*x2^2*x3^3")


def triangle_restrictions(n: int, feasible_below) -> List:
    """The three restrictions of I(C3)^n at (xj*xk)^n * xi^(n-1)."""
    c3 = edge_ideal(cycle_graph(3))
    specs = []
    for i in range(3):
        exps = [n] * 3
        exps[i] = n - 1
        f = [1] * 3
        f[i] = 0
        specs.append(restriction_for_power(c3, n, Monomial(tuple(exps)), Monomial(tuple(f)), feasible_below))
    return specs


def _triangle_steps(ctx: SuiteContext) -> List[SuiteStep]:
    c3 = edge_ideal(cycle_graph(3))
    square, cube, fourth = (power(c3, n) for n in (2, 3, 4))
    square_order = TotalOrder.parse(square, C3_SQUARE_ORDER)
    cube_order = TotalOrder.parse(cube, C3_CUBE_ORDER)
    center = _mono(cube, "x1^2*x2^2*x3^2")
    state: Dict[str, FrozenSet[Monomial]] = {}

    def square_minima():
        state["square"] = feasible_min_bf(square, base=True)
        return _formatted(square, state["square"])

    def cube_minima():
        state["cube"] = feasible_min_bf(cube, triangle_restrictions(3, state.get("square") or feasible_min_bf(square, base=True)))
        return _formatted(cube, state["cube"])

    def fourth_minima():
        below = state.get("cube")
        if below is None:
            below = feasible_min_bf(cube, triangle_restrictions(3, feasible_min_bf(square, base=True)))
        return _formatted(fourth, feasible_min_bf(fourth, triangle_restrictions(4, below)))

    def square_bm_minimal():
        cells = critical_cells(square, square_order, CellFamily.BARILE_MACCHIA)
        return minimality_verdict(cells, betti_table(square)).minimal

    return [
        SuiteStep("generator counts of I(C3)^2, ^3, ^4", lambda: [len(square), len(cube), len(fourth)],
                  [6, 10, 15], PAPER),
        SuiteStep("I(C3)^2 bridge-friendly under the listed order", lambda: is_bridge_friendly(square, square_order),
                  True, PAPER),
        SuiteStep("I(C3)^2 Barile-Macchia resolution is minimal under that order", square_bm_minimal, True, PAPER),
        SuiteStep("feasible minima of I(C3)^2 by brute force", square_minima,
                  sorted(["x1^2*x2*x3", "x1*x2^2*x3", "x1*x2*x3^2"]), PAPER),
        SuiteStep("feasible minima of I(C3)^3 from restrictions", cube_minima, ["x1^2*x2^2*x3^2"], PAPER),
        SuiteStep("feasible minima of I(C3)^4 from restrictions", fourth_minima, [], PAPER),
        SuiteStep("I(C3)^3 has a bridge-friendly order ending in x1^2*x2^2*x3^2",
                  lambda: first_order_with_minimum(cube, center) is not None, True, PAPER),
        SuiteStep("listed I(C3)^3 order, as printed", lambda: is_bridge_friendly(cube, cube_order), None, INFO),
    ]


# prop-3.3 (with the chordal characterizations) --------------------------------

CONNECTED_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853}
# rebuild: recognized parameters that do not reconstruct the graph
CLASSIFICATION_KEYS = ("labc", "bf_forbidden", "bf_triangles", "rebuild")


def _triangles_have_degree_two(G: Graph) -> bool:
    return all(any(G.degree(v) == 2 for v in tri) for tri in G.triangles())


def classification_disagreements(n: int) -> Dict[str, int]:
    lyub = forbidden_graphs(FORBIDDEN_LYUBEZNIK)
    bf = forbidden_graphs(FORBIDDEN_BF)
    counts = dict.fromkeys(CLASSIFICATION_KEYS, 0)
    for G in enumerate_connected(n):
        if not G.edges:
            continue
        has_lyub = any(contains_induced(G, H) for H in lyub)
        params = recognize_labc(G)
        if (params is not None) == has_lyub:
            counts["labc"] += 1
        if params is not None and not is_isomorphic(build_labc(*params), G):
            counts["rebuild"] += 1
        if is_chordal(G):
            tw = recognize_bf(G)
            recognized = tw is not None
            if recognized == any(contains_induced(G, H) for H in bf):
                counts["bf_forbidden"] += 1
            if recognized != _triangles_have_degree_two(G):
                counts["bf_triangles"] += 1
            if recognized and not is_isomorphic(build_bf(tw), G):
                counts["rebuild"] += 1
    return counts


def _classification_steps(ctx: SuiteContext) -> List[SuiteStep]:
    steps = [SuiteStep("connected graph counts for n = 1..7",
                       lambda: [sum(1 for _ in enumerate_connected(n)) for n in range(1, 8)],
                       [CONNECTED_COUNTS[n] for n in range(1, 8)], DERIVED)]
    for n in range(2, 8):
        steps.append(SuiteStep(f"recognizers agree with the forbidden lists on {n} vertices",
                               lambda n=n: classification_disagreements(n),
                               dict.fromkeys(CLASSIFICATION_KEYS, 0), PAPER))
    return steps


# properties -----------------------------------------------------------------

def random_ideal(rng: random.Random, max_gens: int = 6, max_vars: int = 5, max_exp: int = 3) -> MonomialIdeal:
    r = rng.randint(1, max_vars)
    k = rng.randint(1, max_gens)
    raw = []
    while len(raw) < k:
        exps = tuple(rng.randint(0, max_exp) for _ in range(r))
        if any(exps):
            raw.append(Monomial(exps))
    return minimalize(raw, r)


def critical_family(an: MorseAnalyzer, family: CellFamily) -> Set[FrozenSet[Monomial]]:
    return {frozenset(an.ideal.subset(an.to_canonical(s))) for s in an.cells(family)}


def check_pair(I: MonomialIdeal, order: TotalOrder, rng: random.Random) -> Dict[str, bool]:
    """Every randomized invariant for one (ideal, order) pair; True means it held."""
    an = MorseAnalyzer(order)
    betti = betti_table(I)
    results: Dict[str, bool] = {}

    euler = lower = True
    for family in (CellFamily.LYUBEZNIK, CellFamily.BARILE_MACCHIA):
        cells = critical_cells(I, order, family)
        euler &= euler_check(cells, betti)
        lower &= all(cells.get(i, b) >= n for (i, b), n in betti.entries.items())
    results["euler"] = euler
    results["rank_at_least_betti"] = lower

    lyub = critical_family(an, CellFamily.LYUBEZNIK)
    results["lyubeznik_subset_closed"] = all(
        frozenset(sub) in lyub for cell in lyub for k in range(len(cell)) for sub in itertools.combinations(cell, k))

    chosen = rng.randrange(1, an.size)
    m = Monomial(an.lcm(chosen))
    sub = hhz_subideal(I, m)
    sub_an = MorseAnalyzer(order.restrict_to(sub))
    restriction = True
    for family in (CellFamily.LYUBEZNIK, CellFamily.BARILE_MACCHIA):
        below = {cell for cell in critical_family(an, family) if Monomial(_lcm_exps(I, cell)).divides(m)}
        restriction &= below == critical_family(sub_an, family)
    results["restriction_invariance"] = restriction
    results["betti_restriction"] = betti_table(sub).entries == betti.restricted(m.exponents)

    factor = Monomial(tuple(rng.randint(0, 2) for _ in range(I.num_vars)))
    scaled_an = MorseAnalyzer(order.transport(scale(factor, I)))
    scaling = an.is_bridge_friendly() == scaled_an.is_bridge_friendly()
    for family in (CellFamily.LYUBEZNIK, CellFamily.BARILE_MACCHIA):
        scaling &= set(an.cells(family)) == set(scaled_an.cells(family))
    results["scaling_invariance"] = scaling

    smallest_bridge = unique_factor = true_gap_sufficiency = True
    for s in range(an.size):
        sb = an.sbridge(s)
        members = an.to_canonical(s)
        for k in _bits(an.gaps(s)):
            witness = an.witness(s, k)
            is_true = witness < 0
            smallest_bridge &= (an.sbridge(s | 1 << k) == k) == (is_true and k > sb)
            gap = order.ranking[k]
            if not is_true and s:
                unique_factor &= shares_unique_factor(I, members, gap, order.ranking[witness]) is not None
            support = [g for g in _bits(members)
                       if order.dominates(g, gap) or shares_unique_factor(I, members, gap, g) is None]
            if support and I.gens[gap].divides(Monomial(_lcm_exps(I, [I.gens[g] for g in support]))):
                true_gap_sufficiency &= is_true
    results["smallest_bridge_of_gap"] = smallest_bridge
    results["witness_shares_unique_factor"] = unique_factor
    results["true_gap_sufficiency"] = true_gap_sufficiency

    friendly = an.is_bridge_friendly()
    results["bridge_friendly_algorithms_agree"] = friendly == an.is_bridge_friendly("lemma")
    if friendly:
        bm = critical_cells(I, order, CellFamily.BARILE_MACCHIA)
        plain = {s for s in range(an.size) if not an.bridges[s] and not an.true_gaps(s)}
        results["bridge_friendly_minimal"] = (minimality_verdict(bm, betti).minimal
                                              and plain == set(an.bm_cells()))
    else:
        results["bridge_friendly_minimal"] = True

    lyub_verdict = minimality_verdict(critical_cells(I, order, CellFamily.LYUBEZNIK), betti).minimal
    if lyubeznik_minimal(I, order).minimal != lyub_verdict:
        logger.warning(f"Lyubeznik bridge criterion disagrees with the Betti oracle on {I} under {order.format()}")
    return results


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _lcm_exps(I: MonomialIdeal, monomials) -> tuple:
    exps = [0] * I.num_vars
    for g in monomials:
        exps = [max(a, b) for a, b in zip(exps, g.exponents)]
    return tuple(exps)


def property_violations(pairs: int = 1000, seed: int = 2024) -> Dict[str, int]:
    rng = random.Random(seed)
    violations: Dict[str, int] = {}
    for _ in range(pairs):
        I = random_ideal(rng)
        ranking = list(range(len(I.gens)))
        rng.shuffle(ranking)
        for name, held in check_pair(I, TotalOrder(I, tuple(ranking)), rng).items():
            violations[name] = violations.get(name, 0) + (not held)
    return violations


PROPERTY_NAMES = (
    "euler", "rank_at_least_betti", "lyubeznik_subset_closed", "restriction_invariance",
    "betti_restriction", "scaling_invariance", "smallest_bridge_of_gap", "witness_shares_unique_factor",
    "true_gap_sufficiency", "bridge_friendly_algorithms_agree", "bridge_friendly_minimal",
)


def _property_steps(ctx: SuiteContext) -> List[SuiteStep]:
    return [SuiteStep("no violations over 1000 random (ideal, order) pairs",
                      lambda: property_violations(1000), {name: 0 for name in PROPERTY_NAMES}, DERIVED)]


# catalog --------------------------------------------------------------------

_SUITES = [
    TheoremSuite("example-2.2", "bridges, gaps and cell types on the 4-cycle", RuntimeClass.SECONDS, _example_steps),
    TheoremSuite("example-joined-6-cycles", "a non-chordal bridge-friendly edge ideal", RuntimeClass.SECONDS,
                 _joined_steps),
    TheoremSuite("thm-3.5", "L(a,b,c) edge ideals have minimal Lyubeznik resolutions", RuntimeClass.SECONDS,
                 _labc_steps),
    TheoremSuite("prop-2.11", "f * I^n is a restriction of I^(n+1) for P4, C3, C4", RuntimeClass.SECONDS,
                 _prop_2_11_steps),
    TheoremSuite("prop-3.1", "the nine forbidden graphs are not Lyubeznik", RuntimeClass.MINUTES,
                 _forbidden_lyubeznik_steps),
    TheoremSuite("thm-3.8", "Lyubeznik powers of edge ideals", RuntimeClass.MINUTES, _powers_steps),
    TheoremSuite("prop-4.2", "cycles with bridge-friendly edge ideals", RuntimeClass.MINUTES, _cycles_steps),
    TheoremSuite("prop-4.3", "K4, gem, kite and net are not bridge-friendly", RuntimeClass.MINUTES,
                 _forbidden_bf_steps),
    TheoremSuite("prop-4.9", "squares and cubes of small graphs are not bridge-friendly", RuntimeClass.MINUTES,
                 _powers_bf_steps),
    TheoremSuite("prop-4.10", "powers of the triangle", RuntimeClass.MINUTES, _triangle_steps),
    TheoremSuite("thm-4.8", "BF(T,w) edge ideals are bridge-friendly", RuntimeClass.MINUTES, _bf_trees_steps),
    TheoremSuite("remark-2.12", "restrictions of (x*x1, x*x2, x*x3)^3 never look like f * I^2", RuntimeClass.MINUTES,
                 _remark_2_12_steps),
    TheoremSuite("prop-3.3", "forbidden-subgraph classifications on small connected graphs", RuntimeClass.MINUTES,
                 _classification_steps),
    TheoremSuite("properties", "randomized structural invariants", RuntimeClass.MINUTES, _property_steps),
    TheoremSuite("remark-9cycle", "the 9-cycle has no minimal Barile-Macchia resolution", RuntimeClass.EXTENDED,
                 _nine_cycle_steps),
]

CATALOG: Dict[str, TheoremSuite] = {suite.id: suite for suite in _SUITES}


def get_suite(suite_id: str) -> TheoremSuite:
    try:
        return CATALOG[suite_id]
    except KeyError:
        raise UnknownSuiteError(f"unknown suite {suite_id!r}; known: {', '.join(CATALOG)}") from None


def select_suites(runtime_class: RuntimeClass = RuntimeClass.MINUTES) -> List[TheoremSuite]:
    """Suites at or below the given runtime class, catalog order."""
    limit = RuntimeClass(runtime_class).weight
    return [suite for suite in _SUITES if suite.runtime_class.weight <= limit]
