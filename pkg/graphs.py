import itertools
import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx

from errors import CapExceededError, GraphError, IllegalParameterError, ParseError
from ideal import Monomial, MonomialIdeal, minimalize

logger = logging.getLogger(__name__)

MAX_ENUMERATE = 7
MAX_PATTERN = 8

Edge = FrozenSet[str]


def natural_key(label: str) -> Tuple:
    """Sort key placing x2 before x10."""
    return tuple(int(part) if part.isdigit() else part for part in re.split(r"(\d+)", label))


def edge(u: str, v: str) -> Edge:
    return frozenset((u, v))


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with string vertex labels kept in natural order."""

    vertices: Tuple[str, ...]
    edges: FrozenSet[Edge] = frozenset()

    def __post_init__(self):
        labels = [str(v) for v in self.vertices]
        if len(set(labels)) != len(labels):
            raise GraphError("duplicate vertex labels")
        edges = frozenset(frozenset(str(x) for x in e) for e in self.edges)
        declared = set(labels)
        for e in edges:
            if len(e) != 2:
                raise GraphError(f"loop or malformed edge {sorted(e)}")
            missing = e - declared
            if missing:
                raise GraphError(f"edge endpoint {sorted(missing)[0]} is not a declared vertex")
        object.__setattr__(self, "vertices", tuple(sorted(labels, key=natural_key)))
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, pairs: Iterable[Sequence[str]], vertices: Iterable[str] = ()) -> "Graph":
        pairs = [tuple(p) for p in pairs]
        for p in pairs:
            if len(p) != 2 or p[0] == p[1]:
                raise GraphError(f"not a simple edge: {p}")
        labels = set(vertices)
        for u, v in pairs:
            labels.update((u, v))
        return cls(tuple(labels), frozenset(edge(u, v) for u, v in pairs))

    @cached_property
    def adjacency(self) -> Dict[str, FrozenSet[str]]:
        adj = {v: set() for v in self.vertices}
        for e in self.edges:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        return {v: frozenset(n) for v, n in adj.items()}

    @cached_property
    def position(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def neighbors(self, v: str) -> FrozenSet[str]:
        return self.adjacency[v]

    def degree(self, v: str) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: str, v: str) -> bool:
        return v in self.adjacency.get(u, ())

    def sorted_edges(self) -> List[Tuple[str, str]]:
        pairs = [tuple(sorted(e, key=natural_key)) for e in self.edges]
        return sorted(pairs, key=lambda p: (natural_key(p[0]), natural_key(p[1])))

    def induced(self, subset: Iterable[str]) -> "Graph":
        keep = set(subset)
        return Graph(tuple(keep), frozenset(e for e in self.edges if e <= keep))

    def masks(self) -> List[int]:
        """Adjacency as bitmasks over vertex positions."""
        pos = self.position
        return [sum(1 << pos[u] for u in self.adjacency[v]) for v in self.vertices]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(tuple(e) for e in self.edges)
        return g

    def is_connected(self) -> bool:
        return bool(self.vertices) and nx.is_connected(self.to_networkx())

    def triangles(self) -> List[Tuple[str, str, str]]:
        pos = self.position
        found = []
        for u, v in self.sorted_edges():
            for w in sorted(self.adjacency[u] & self.adjacency[v], key=natural_key):
                if pos[w] > pos[v]:
                    found.append((u, v, w))
        return found

    def to_json(self) -> Dict:
        return {"vertices": list(self.vertices), "edges": [list(p) for p in self.sorted_edges()]}

    @classmethod
    def from_json(cls, data: Dict) -> "Graph":
        try:
            return cls.from_edges([tuple(p) for p in data["edges"]], data.get("vertices", ()))
        except (KeyError, TypeError) as e:
            raise ParseError(f"malformed graph document: {e}") from e

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Graph":
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ParseError(f"cannot read {path}: {e}") from e
        if text.lstrip().startswith("{"):
            try:
                return cls.from_json(json.loads(text))
            except json.JSONDecodeError as e:
                raise ParseError(f"{path} is not valid JSON: {e}") from e
        pairs = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"{path}:{lineno}: expected 'u v', got {line!r}")
            pairs.append(tuple(parts))
        return cls.from_edges(pairs)


@dataclass(frozen=True)
class EdgeWeightedTree:
    tree: Graph
    weights: Mapping[Edge, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.tree.vertices or not nx.is_tree(self.tree.to_networkx()):
            raise GraphError("weighted tree must be a nonempty tree")
        weights = {}
        for e, w in self.weights.items():
            e = frozenset(e)
            if e not in self.tree.edges:
                raise GraphError(f"weight given for non-edge {sorted(e)}")
            if int(w) < 0:
                raise IllegalParameterError(f"negative weight {w} on {sorted(e)}")
            weights[e] = int(w)
        for e in self.tree.edges:
            weights.setdefault(e, 0)
        object.__setattr__(self, "weights", weights)

    def weight(self, u: str, v: str) -> int:
        return self.weights[edge(u, v)]

    def to_json(self) -> Dict:
        doc = self.tree.to_json()
        doc["weights"] = [[list(p), self.weight(*p)] for p in self.tree.sorted_edges()]
        return doc

    @classmethod
    def from_json(cls, data: Dict) -> "EdgeWeightedTree":
        tree = Graph.from_json(data)
        try:
            weights = {edge(*pair): int(w) for pair, w in data.get("weights", [])}
        except (TypeError, ValueError) as e:
            raise ParseError(f"malformed weights: {e}") from e
        return cls(tree, weights)


@dataclass(frozen=True)
class RootedTreeLabeling:
    """BFS levels of a rooted tree; index[v] = (level i, 1-based position j)."""

    root: str
    levels: Tuple[Tuple[str, ...], ...]
    parents: Mapping[str, str]

    @cached_property
    def index(self) -> Dict[str, Tuple[int, int]]:
        return {v: (i, j) for i, level in enumerate(self.levels) for j, v in enumerate(level, 1)}

    @classmethod
    def build(cls, tree: Graph, root: str) -> "RootedTreeLabeling":
        if root not in tree.position:
            raise GraphError(f"root {root!r} is not a vertex of the tree")
        distance = nx.single_source_shortest_path_length(tree.to_networkx(), root)
        levels = [(root,)]
        parents: Dict[str, str] = {}
        while True:
            depth = len(levels)
            children = []
            for parent in levels[-1]:
                kids = sorted((u for u in tree.neighbors(parent) if distance[u] == depth), key=natural_key)
                for kid in kids:
                    parents[kid] = parent
                children.extend(kids)
            if not children:
                break
            levels.append(tuple(children))
        return cls(root, tuple(levels), parents)


class LabcParams(NamedTuple):
    a: int
    b: int
    c: int


def _labels(n: int) -> List[str]:
    return [f"x{i}" for i in range(1, n + 1)]


def path_graph(n: int) -> Graph:
    if n < 2:
        raise IllegalParameterError(f"path needs n >= 2, got {n}")
    v = _labels(n)
    return Graph.from_edges(zip(v, v[1:]))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise IllegalParameterError(f"cycle needs n >= 3, got {n}")
    v = _labels(n)
    return Graph.from_edges(zip(v, v[1:] + v[:1]))


def star_graph(k: int) -> Graph:
    if k < 1:
        raise IllegalParameterError(f"star needs k >= 1 leaves, got {k}")
    return Graph.from_edges(("x0", leaf) for leaf in _labels(k))


def complete_graph(n: int) -> Graph:
    if n < 2:
        raise IllegalParameterError(f"complete graph needs n >= 2, got {n}")
    return Graph.from_edges(itertools.combinations(_labels(n), 2))


def _pairs(spec: str) -> List[Tuple[str, str]]:
    return [tuple(p.split("-")) for p in spec.split()]


FIXED_GRAPHS: Dict[str, List[Tuple[str, str]]] = {
    "paw": _pairs("x1-x2 x2-x3 x1-x3 x3-x4"),
    "diamond": _pairs("x1-x2 x2-x3 x3-x4 x1-x4 x2-x4"),
    "kite": _pairs("x1-x2 x2-x3 x3-x4 x1-x4 x2-x4 x1-x5"),
    "gem": _pairs("x1-x2 x2-x3 x3-x4 x1-x5 x2-x5 x3-x5 x4-x5"),
    "net": _pairs("x1-x2 x2-x3 x1-x3 x1-x4 x2-x5 x3-x6"),
    "butterfly": _pairs("x1-x2 x1-x3 x2-x3 x3-x4 x3-x5 x4-x5"),
    "tadpole": _pairs("x1-x2 x2-x3 x1-x3 x3-x4 x4-x5"),
    "cricket": _pairs("x1-x2 x2-x3 x1-x3 x3-x4 x3-x5"),
    "joined_six_cycles": _pairs("v-y u-x x-z t-w y-z w-z s-t s-v s-u"),
}

FAMILIES = {"path": path_graph, "cycle": cycle_graph, "star": star_graph, "complete": complete_graph}


def build_named(name: str, n: Optional[int] = None) -> Graph:
    """Named small graph; families take their size through n."""
    key = name.lower().replace("-", "_")
    if key in FAMILIES:
        if n is None:
            raise IllegalParameterError(f"{name} needs a size parameter")
        return FAMILIES[key](n)
    if key == "k4":
        return complete_graph(4)
    if key in FIXED_GRAPHS:
        return Graph.from_edges(FIXED_GRAPHS[key])
    raise IllegalParameterError(f"unknown graph name {name!r}")


def parse_graph_spec(text: str) -> Graph:
    """A graph file path, a fixed name, "cycle:5" or "labc:1,1,1"."""
    path = Path(text)
    if path.exists():
        return Graph.load(path)
    name, _, arg = text.partition(":")
    try:
        if name == "labc":
            a, b, c = (int(x) for x in arg.split(","))
            return build_labc(a, b, c)
        if name == "bf":
            return build_bf(EdgeWeightedTree.from_json(json.loads(arg)))
        return build_named(name, int(arg) if arg else None)
    except ValueError as e:
        raise ParseError(f"cannot interpret graph {text!r}: {e}") from e


def build_labc(a: int, b: int, c: int) -> Graph:
    if min(a, b, c) < 0:
        raise IllegalParameterError(f"L(a,b,c) needs nonnegative parameters, got {(a, b, c)}")
    pairs = [("x", "y")]
    pairs += [("x", f"x{i}") for i in range(1, a + 1)]
    pairs += [("y", f"y{j}") for j in range(1, b + 1)]
    for k in range(1, c + 1):
        pairs += [("x", f"z{k}"), ("y", f"z{k}")]
    return Graph.from_edges(pairs)


def build_bf(tw: EdgeWeightedTree) -> Graph:
    """Tree plus w(e) triangles glued along each tree edge e."""
    pairs = [tuple(e) for e in tw.tree.edges]
    for y, z in tw.tree.sorted_edges():
        for i in range(1, tw.weight(y, z) + 1):
            apex = f"v_{y}_{z}_{i}"
            pairs += [(y, apex), (z, apex)]
    return Graph.from_edges(pairs, tw.tree.vertices)


def edge_ideal(G: Graph) -> MonomialIdeal:
    if not G.edges:
        raise GraphError("edge ideal of an edgeless graph")
    pos = G.position
    gens = []
    for e in G.edges:
        exps = [0] * len(G.vertices)
        for v in e:
            exps[pos[v]] = 1
        gens.append(Monomial(tuple(exps)))
    return minimalize(gens, len(G.vertices), G.vertices)


def edge_generator(ideal: MonomialIdeal, u: str, v: str) -> Monomial:
    names = ideal.var_names
    exps = [0] * ideal.num_vars
    exps[names.index(u)] = 1
    exps[names.index(v)] = 1
    return Monomial(tuple(exps))


def perfect_elimination_order(G: Graph) -> Optional[List[str]]:
    """Maximum cardinality search; the reversed visit order is a PEO iff G is chordal."""
    weight = {v: 0 for v in G.vertices}
    unnumbered = list(G.vertices)
    visit = []
    while unnumbered:
        v = max(unnumbered, key=lambda u: weight[u])
        unnumbered.remove(v)
        visit.append(v)
        for u in G.neighbors(v):
            if u in weight and u in unnumbered:
                weight[u] += 1
    peo = visit[::-1]
    place = {v: i for i, v in enumerate(peo)}
    for v in peo:
        later = [u for u in G.neighbors(v) if place[u] > place[v]]
        if later:
            parent = min(later, key=place.get)
            if any(w != parent and not G.has_edge(parent, w) for w in later):
                return None
    return peo


def is_chordal(G: Graph) -> bool:
    return perfect_elimination_order(G) is not None


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def canonical_code(adj: Sequence[int]) -> Tuple[int, int]:
    """Minimum upper-triangle adjacency string over invariant-respecting relabelings."""
    n = len(adj)
    degrees = [bin(a).count("1") for a in adj]
    invariant = [(degrees[v], tuple(sorted(degrees[u] for u in _bits(adj[v])))) for v in range(n)]
    classes: Dict[Tuple, List[int]] = {}
    for v in sorted(range(n), key=lambda v: invariant[v]):
        classes.setdefault(invariant[v], []).append(v)
    blocks = [classes[key] for key in sorted(classes)]
    best = None
    for choice in itertools.product(*(itertools.permutations(block) for block in blocks)):
        order = [v for block in choice for v in block]
        code = 0
        for i in range(n):
            row = adj[order[i]]
            for j in range(i + 1, n):
                code = (code << 1) | ((row >> order[j]) & 1)
        if best is None or code < best:
            best = code
    return n, best or 0


def canonical_form(G: Graph) -> Tuple[int, int]:
    return canonical_code(G.masks())


def is_isomorphic(G: Graph, H: Graph) -> bool:
    if len(G.vertices) != len(H.vertices) or len(G.edges) != len(H.edges):
        return False
    return canonical_form(G) == canonical_form(H)


def _graph_from_masks(adj: Sequence[int]) -> Graph:
    labels = _labels(len(adj))
    pairs = [(labels[i], labels[j]) for i in range(len(adj)) for j in _bits(adj[i]) if i < j]
    return Graph.from_edges(pairs, labels)


def enumerate_connected(n: int) -> Iterator[Graph]:
    """One graph per isomorphism class of connected graphs on n vertices.

    Grown one vertex at a time: every connected graph has a vertex whose
    removal leaves it connected.
    """
    if not 1 <= n <= MAX_ENUMERATE:
        raise IllegalParameterError(f"n must be in 1..{MAX_ENUMERATE}, got {n}")
    level: Dict[Tuple[int, int], List[int]] = {canonical_code([0]): [0]}
    for k in range(2, n + 1):
        grown: Dict[Tuple[int, int], List[int]] = {}
        new_bit = 1 << (k - 1)
        for adj in level.values():
            for nbrs in range(1, new_bit):
                candidate = [a | new_bit if nbrs >> i & 1 else a for i, a in enumerate(adj)] + [nbrs]
                code = canonical_code(candidate)
                if code not in grown:
                    grown[code] = candidate
        level = grown
        logger.debug(f"{len(level)} connected graphs on {k} vertices")
    for code in sorted(level):
        yield _graph_from_masks(level[code])


def contains_induced(G: Graph, H: Graph) -> bool:
    k = len(H.vertices)
    if k > MAX_PATTERN:
        raise CapExceededError(f"pattern graph has {k} vertices, cap is {MAX_PATTERN}")
    if k > len(G.vertices):
        return False
    target = canonical_form(H)
    target_edges = len(H.edges)
    target_degrees = sorted(H.degree(v) for v in H.vertices)
    adj = G.masks()
    for subset in itertools.combinations(range(len(G.vertices)), k):
        inside = sum(1 << v for v in subset)
        degrees = [bin(adj[v] & inside).count("1") for v in subset]
        if sum(degrees) != 2 * target_edges or sorted(degrees) != target_degrees:
            continue
        local = {v: i for i, v in enumerate(subset)}
        sub = [sum(1 << local[u] for u in _bits(adj[v] & inside)) for v in subset]
        if canonical_code(sub) == target:
            return True
    return False


def recognize_labc(G: Graph) -> Optional[LabcParams]:
    if not G.edges or not G.is_connected():
        raise GraphError("L(a,b,c) recognition needs a connected graph with an edge")
    best = None
    for x, y in G.sorted_edges():
        a = b = c = 0
        for v in G.vertices:
            if v in (x, y):
                continue
            near_x, near_y, deg = G.has_edge(v, x), G.has_edge(v, y), G.degree(v)
            if near_x and near_y and deg == 2:
                c += 1
            elif near_x and deg == 1:
                a += 1
            elif near_y and deg == 1:
                b += 1
            else:
                break
        else:
            found = LabcParams(max(a, b), min(a, b), c)
            if best is None or found > best:
                best = found
    return best


def recognize_bf(G: Graph) -> Optional[EdgeWeightedTree]:
    """Peel one degree-2 apex off every triangle; what remains must be the tree."""
    if not G.is_connected():
        raise GraphError("BF recognition needs a connected graph")
    if not is_chordal(G):
        return None
    apexes: Dict[str, Edge] = {}
    for tri in G.triangles():
        candidates = sorted((v for v in tri if G.degree(v) == 2), key=natural_key)
        if not candidates:
            return None
        apex = candidates[0]
        apexes[apex] = frozenset(tri) - {apex}
    tree = G.induced(v for v in G.vertices if v not in apexes)
    if not nx.is_tree(tree.to_networkx()):
        return None
    return EdgeWeightedTree(tree, dict(Counter(apexes.values())))


FORBIDDEN_LYUBEZNIK = ("path:5", "cycle:4", "cycle:5", "k4", "kite", "gem", "tadpole", "butterfly", "net")
FORBIDDEN_BF = ("k4", "gem", "kite", "net")


def forbidden_graphs(names: Sequence[str]) -> List[Graph]:
    return [parse_graph_spec(name) for name in names]
