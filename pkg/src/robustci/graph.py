"""Graphs on input configurations, robustness structures, and maximality.

A robustness specification induces a graph on the input configurations: two
configurations are adjacent when some pair (R, y) pins both of them to the
same partial configuration y on R.  A robustness structure is the set of
connected components of the subgraph induced by a support set; it is maximal
when no outside configuration can be added without strictly lowering the
component count.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InputError, ResourceLimitError
from .model import Config, RobustnessSpec, StateSpace, restrict, validate_spec


class InputGraph:
    """Undirected graph on the input configurations of a state space.

    Edges built from a specification carry a witness pair (R, y) certifying
    x|_R = x'|_R = y; explicitly constructed graphs may omit witnesses.
    """

    def __init__(self, space: StateSpace, edges, witnesses=None):
        self.space = space
        self.vertices = tuple(space.configs())
        vertex_set = set(self.vertices)
        adj = {v: set() for v in self.vertices}
        witnesses = witnesses or {}
        self.edge_witness = {}
        for u, v in edges:
            u, v = tuple(u), tuple(v)
            if u not in vertex_set or v not in vertex_set:
                raise InputError(f"edge ({u}, {v}) leaves the configuration set")
            if u == v:
                raise InputError(f"self-loop at {u}")
            key = (min(u, v), max(u, v))
            adj[u].add(v)
            adj[v].add(u)
            self.edge_witness[key] = witnesses.get(key)
        self._adj = {v: tuple(sorted(nbrs)) for v, nbrs in adj.items()}
        self._index = {v: i for i, v in enumerate(self.vertices)}

    def neighbors(self, v: Config) -> tuple:
        return self._adj[v]

    def has_edge(self, u: Config, v: Config) -> bool:
        return (min(u, v), max(u, v)) in self.edge_witness

    def edge_list(self) -> list:
        return sorted(self.edge_witness)

    def num_edges(self) -> int:
        return len(self.edge_witness)

    def components(self, subset=None) -> list:
        """Connected components of the subgraph induced by ``subset``.

        Components are returned as sorted lists, ordered by their minimal
        element; ``subset=None`` means the whole vertex set.
        """
        allowed = set(self.vertices) if subset is None else set(subset)
        out = []
        seen = set()
        for v in self.vertices:
            if v not in allowed or v in seen:
                continue
            comp = {v}
            frontier = [v]
            while frontier:
                nxt = []
                for u in frontier:
                    for w in self._adj[u]:
                        if w in allowed and w not in comp:
                            comp.add(w)
                            nxt.append(w)
                frontier = nxt
            seen |= comp
            out.append(sorted(comp))
        return out

    def neighbor_masks(self) -> list:
        """Adjacency as bitmasks over the canonical vertex order."""
        masks = []
        for v in self.vertices:
            m = 0
            for w in self._adj[v]:
                m |= 1 << self._index[w]
            masks.append(m)
        return masks


def build_graph(spec: RobustnessSpec, space: StateSpace) -> InputGraph:
    """The graph induced by a robustness specification, with edge witnesses."""
    validate_spec(spec, space)
    pairs = spec.sorted_pairs()
    edges = []
    witnesses = {}
    configs = space.configs()
    for a in range(len(configs)):
        for b in range(a + 1, len(configs)):
            x, y = configs[a], configs[b]
            for nodes, pinned in pairs:
                if restrict(x, nodes) == pinned and restrict(y, nodes) == pinned:
                    edges.append((x, y))
                    witnesses[(x, y)] = (nodes, pinned)
                    break
    return InputGraph(space, edges, witnesses)


@dataclass(frozen=True)
class RobustnessStructure:
    """A support set partitioned into its connectivity blocks.

    Blocks are sorted tuples ordered by their minimal elements, so equal
    structures compare and hash equal.
    """

    space: StateSpace
    blocks: tuple

    @staticmethod
    def from_blocks(space: StateSpace, blocks) -> "RobustnessStructure":
        norm = []
        seen = set()
        for block in blocks:
            block = tuple(sorted(tuple(x) for x in block))
            if not block:
                raise InputError("empty block")
            if seen & set(block):
                raise InputError("blocks are not disjoint")
            seen |= set(block)
            norm.append(block)
        norm.sort(key=lambda b: b[0])
        return RobustnessStructure(space, tuple(norm))

    @property
    def support(self) -> frozenset:
        return frozenset(x for block in self.blocks for x in block)

    def block_index(self) -> dict:
        return {x: i for i, block in enumerate(self.blocks) for x in block}

    def num_blocks(self) -> int:
        return len(self.blocks)

    def is_empty(self) -> bool:
        return not self.blocks


def components_of(graph: InputGraph, support) -> RobustnessStructure:
    """The robustness structure whose blocks are the components induced by ``support``."""
    comps = graph.components(support)
    return RobustnessStructure(graph.space, tuple(tuple(c) for c in comps))


def _require_consistent(structure: RobustnessStructure, graph: InputGraph):
    if components_of(graph, structure.support) != structure:
        raise InputError("structure blocks are not the components of the induced subgraph")


def is_maximal(structure: RobustnessStructure, graph: InputGraph) -> bool:
    """Maximality by component counting: every outside vertex strictly merges.

    True iff for every configuration x outside the support, the subgraph
    induced by support + {x} has strictly fewer connected components.
    """
    _require_consistent(structure, graph)
    support = structure.support
    base = structure.num_blocks()
    for x in graph.vertices:
        if x in support:
            continue
        if len(graph.components(support | {x})) >= base:
            return False
    return True


def maximality_by_edges(structure: RobustnessStructure, graph: InputGraph) -> bool:
    """Maximality by the edge condition: every outside vertex sees two blocks.

    True iff every configuration outside the support has two neighbours inside
    the support lying in different blocks.  Agrees with :func:`is_maximal` on
    every input; the equivalence is exercised by the test suite.
    """
    _require_consistent(structure, graph)
    support = structure.support
    index = structure.block_index()
    for x in graph.vertices:
        if x in support:
            continue
        touched = {index[w] for w in graph.neighbors(x) if w in support}
        if len(touched) < 2:
            return False
    return True


def _mask_components(mask: int, nbr_masks) -> list:
    """Connected components of the induced sub-vertex-set, as bitmasks."""
    comps = []
    rest = mask
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            grow = 0
            m = frontier
            while m:
                bit = m & -m
                m ^= bit
                grow |= nbr_masks[bit.bit_length() - 1]
            frontier = grow & mask & ~comp
            comp |= frontier
        comps.append(comp)
        rest &= ~comp
    return comps


def enumerate_maximal_structures(graph: InputGraph, cap: int = 20) -> list:
    """All maximal robustness structures, by exhaustive subset enumeration.

    The result is deduplicated and canonically ordered; it is exactly the
    index set of the primary decomposition of the associated edge ideal.
    Raises ResourceLimitError if the graph has more than ``cap`` vertices.
    """
    m = len(graph.vertices)
    if m > cap:
        raise ResourceLimitError(
            f"{m} vertices exceed the enumeration cap of {cap} (2^{m} subsets)"
        )
    nbr = graph.neighbor_masks()
    found = []
    for mask in range(1 << m):
        comps = _mask_components(mask, nbr)
        base = len(comps)
        maximal = True
        outside = ((1 << m) - 1) & ~mask
        o = outside
        while o:
            bit = o & -o
            o ^= bit
            nb = nbr[bit.bit_length() - 1] & mask
            # components of mask|bit = base + 1 - (#blocks adjacent to the new vertex)
            touched = sum(1 for c in comps if c & nb)
            if base + 1 - touched >= base:
                maximal = False
                break
        if maximal and mask:
            blocks = tuple(
                tuple(graph.vertices[i] for i in range(m) if c >> i & 1)
                for c in comps
            )
            found.append(RobustnessStructure.from_blocks(graph.space, blocks))
    found.sort(key=lambda s: s.blocks)
    return found


def coarsen_structure(structure: RobustnessStructure, finer_graph: InputGraph) -> RobustnessStructure:
    """Recompute the blocks of the structure's support inside another graph.

    Every block of the input lands inside exactly one block of the output
    whenever the new graph has at least the edges that connected the input
    blocks.
    """
    return components_of(finer_graph, structure.support)


def check_product_form(structure: RobustnessStructure, space: StateSpace) -> bool:
    """Whether the structure looks like a maximal 1-robustness structure.

    Two conditions: every block is the full product of its coordinate
    projections, and every assignment of n-1 coordinates can be completed to a
    support element.
    """
    n = space.n
    support = structure.support
    for block in structure.blocks:
        projections = [sorted({x[i] for x in block}) for i in range(n)]
        expected = set(itertools.product(*projections))
        if set(block) != expected:
            return False
    for j in range(1, n + 1):
        others = [i for i in range(1, n + 1) if i != j]
        for partial in space.partial_configs(others):
            completed = False
            for v in range(1, space.d[j - 1] + 1):
                x = [0] * n
                for i, val in zip(others, partial):
                    x[i - 1] = val
                x[j - 1] = v
                if tuple(x) in support:
                    completed = True
                    break
            if not completed:
                return False
    return True


def grow_to_maximal(graph: InputGraph, start) -> RobustnessStructure:
    """Extend a support set to a maximal structure.

    Repeatedly adds the canonically first outside vertex whose addition does
    not strictly lower the component count; the loop ends exactly when the
    maximality condition holds.
    """
    support = set(start)
    while True:
        structure = components_of(graph, support)
        index = structure.block_index()
        grown = False
        for x in graph.vertices:
            if x in support:
                continue
            touched = {index[w] for w in graph.neighbors(x) if w in support}
            if len(touched) < 2:
                support.add(x)
                grown = True
                break
        if not grown:
            return structure


_CUBE_CATEGORIES = ("empty", "plane-split", "parity-class", "vertex-cut")


def cube_complement_category(structure: RobustnessStructure) -> str:
    """Classify the complement of a structure on the binary 3-input space.

    Categories: "empty"; "plane-split" (4-set whose removal leaves two size-2
    components); "parity-class" (the 4 vertices of equal parity);
    "vertex-cut" (the 3 neighbours of one vertex); otherwise "unclassified".
    """
    space = structure.space
    if space.d != (2, 2, 2):
        raise InputError("cube taxonomy applies to the binary 3-input space only")
    complement = sorted(set(space.configs()) - structure.support)
    sizes = sorted(len(b) for b in structure.blocks)
    if not complement:
        return "empty"
    if len(complement) == 4 and len({sum(x) % 2 for x in complement}) == 1:
        return "parity-class"
    if len(complement) == 4 and sizes == [2, 2]:
        return "plane-split"
    if len(complement) == 3 and sizes == [1, 4]:
        return "vertex-cut"
    return "unclassified"


def graph_to_json(graph: InputGraph) -> dict:
    edges = []
    for u, v in graph.edge_list():
        witness = graph.edge_witness[(u, v)]
        edges.append({
            "u": list(u),
            "v": list(v),
            "witness": None if witness is None else {"R": list(witness[0]), "y": list(witness[1])},
        })
    return {
        "space": {"d0": graph.space.d0, "d": list(graph.space.d)},
        "vertices": [list(v) for v in graph.vertices],
        "edges": edges,
    }


def graph_from_json(obj) -> InputGraph:
    try:
        space = StateSpace(int(obj["space"]["d0"]), [int(v) for v in obj["space"]["d"]])
        edges = []
        witnesses = {}
        for e in obj["edges"]:
            u, v = tuple(int(a) for a in e["u"]), tuple(int(a) for a in e["v"])
            key = (min(u, v), max(u, v))
            edges.append((u, v))
            w = e.get("witness")
            if w is not None:
                witnesses[key] = (tuple(int(a) for a in w["R"]), tuple(int(a) for a in w["y"]))
        return InputGraph(space, edges, witnesses)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad graph file: {exc}") from exc


def structure_to_json(structure: RobustnessStructure) -> dict:
    return {"blocks": [[list(x) for x in block] for block in structure.blocks]}


def structure_from_json(obj, space: StateSpace) -> RobustnessStructure:
    try:
        blocks = [
            [tuple(int(v) for v in x) for x in block]
            for block in obj["blocks"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad structure file: {exc}") from exc
    return RobustnessStructure.from_blocks(space, blocks)
