"""Components of the primary decomposition of the edge ideal, and its verification.

Each admissible support set Y contributes a prime component: the unknowns of
the columns outside Y vanish, and within each connected component of the
induced subgraph on Y all 2x2 minors vanish.  Admissibility is the same
predicate as maximality of the robustness structure on Y.  The module checks
the decomposition at three levels: pairwise non-containment of the components,
ideal membership of the edge generators in every component, and (on tiny
instances) exact equality of the elimination-computed intersection with the
reduced Groebner basis of the edge ideal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, ResourceLimitError
from .graph import InputGraph
from .ideal import EdgeBinomial, Unknown, edge_generators
from .model import format_fraction, vectors_proportional
from .polyengine import Polynomial, buchberger, intersect_ideals, reduce


@dataclass(frozen=True)
class ComponentIdeal:
    """Generators of the prime component attached to a support set Y."""

    support: frozenset
    monomial_generators: tuple
    binomial_generators: tuple

    def generators(self) -> list:
        return list(self.monomial_generators) + list(self.binomial_generators)


def component_ideal(graph: InputGraph, support, d0: int) -> ComponentIdeal:
    """Vanishing unknowns off the support plus all minors within each component."""
    support = frozenset(tuple(x) for x in support)
    if not support <= set(graph.vertices):
        raise InputError("support is not a subset of the configuration set")
    monomials = []
    for x in graph.vertices:
        if x in support:
            continue
        for i in range(1, d0 + 1):
            monomials.append(Polynomial.variable(Unknown(i, x)))
    binomials = []
    for comp in graph.components(support):
        for a in range(len(comp)):
            for b in range(a + 1, len(comp)):
                for i in range(1, d0 + 1):
                    for j in range(i + 1, d0 + 1):
                        binomials.append(
                            EdgeBinomial.make(i, j, comp[a], comp[b]).polynomial()
                        )
    return ComponentIdeal(support, tuple(monomials), tuple(binomials))


def is_admissible_Y(graph: InputGraph, support) -> bool:
    """Whether adding any outside vertex strictly lowers the component count.

    Identical predicate to maximality of the robustness structure on the
    support; both implementations are kept and cross-checked in the tests.
    """
    support = frozenset(tuple(x) for x in support)
    base = len(graph.components(support))
    for x in graph.vertices:
        if x in support:
            continue
        if len(graph.components(support | {x})) >= base:
            return False
    return True


def admissible_sets(graph: InputGraph, cap: int = 20) -> list:
    """All admissible support sets, canonically ordered by sorted vertex list."""
    m = len(graph.vertices)
    if m > cap:
        raise ResourceLimitError(f"{m} vertices exceed the enumeration cap of {cap}")
    out = []
    for mask in range(1 << m):
        support = frozenset(
            graph.vertices[i] for i in range(m) if mask >> i & 1
        )
        if is_admissible_Y(graph, support):
            out.append(support)
    out.sort(key=lambda s: sorted(s))
    return out


def containment(graph: InputGraph, outer, inner) -> bool:
    """Whether the component variety of ``outer`` contains that of ``inner``.

    True iff inner is a subset of outer and any two inner vertices connected
    through outer are already connected through inner.
    """
    outer = frozenset(tuple(x) for x in outer)
    inner = frozenset(tuple(x) for x in inner)
    if not inner <= outer:
        return False
    comp_outer = _component_index(graph, outer)
    comp_inner = _component_index(graph, inner)
    inner_sorted = sorted(inner)
    for a in range(len(inner_sorted)):
        for b in range(a + 1, len(inner_sorted)):
            u, v = inner_sorted[a], inner_sorted[b]
            if comp_outer[u] == comp_outer[v] and comp_inner[u] != comp_inner[v]:
                return False
    return True


def _component_index(graph: InputGraph, support) -> dict:
    index = {}
    for k, comp in enumerate(graph.components(support)):
        for x in comp:
            index[x] = k
    return index


@dataclass(frozen=True)
class MatrixPoint:
    """A d0 x |configs| rational matrix, stored column-wise."""

    d0: int
    columns: dict

    def column(self, x) -> tuple:
        return self.columns.get(x, tuple(Fraction(0) for _ in range(self.d0)))

    def support(self) -> frozenset:
        return frozenset(x for x, col in self.columns.items() if any(col))


def point_in_VGY(point: MatrixPoint, graph: InputGraph, support) -> bool:
    """Columns vanish off the support and are proportional within each component."""
    support = frozenset(tuple(x) for x in support)
    for x in graph.vertices:
        if x not in support and any(point.column(x)):
            return False
    for comp in graph.components(support):
        for a in range(len(comp)):
            for b in range(a + 1, len(comp)):
                if not vectors_proportional(point.column(comp[a]), point.column(comp[b])):
                    return False
    return True


def point_in_VG(point: MatrixPoint, graph: InputGraph) -> bool:
    """Columns are proportional across every edge (all edge minors vanish)."""
    for u, v in graph.edge_list():
        if not vectors_proportional(point.column(u), point.column(v)):
            return False
    return True


def sample_point_in_VGY(graph: InputGraph, d0: int, support, rng: random.Random) -> MatrixPoint:
    """A random point of the component variety with support exactly Y.

    Per component one random nonzero direction, per column a random nonzero
    scalar; zero columns fill the complement.
    """
    columns = {}
    for comp in graph.components(support):
        direction = None
        while direction is None or not any(direction):
            direction = tuple(Fraction(rng.randint(-3, 3)) for _ in range(d0))
        for x in comp:
            scalar = Fraction(rng.choice([-1, 1]) * rng.randint(1, 5))
            columns[x] = tuple(scalar * v for v in direction)
    return MatrixPoint(d0, columns)


def random_matrix_point(graph: InputGraph, d0: int, rng: random.Random) -> MatrixPoint:
    columns = {
        x: tuple(Fraction(rng.randint(-3, 3)) for _ in range(d0))
        for x in graph.vertices
    }
    return MatrixPoint(d0, columns)


def verify_union_decomposition(graph: InputGraph, d0: int, trials: int, seed, cap: int = 12) -> dict:
    """Seeded check that the variety is covered by the admissible components.

    Each trial samples either a structured point (on a random support, built
    proportional per component) or a fully random matrix, then asserts that
    membership in the variety is equivalent to membership in some admissible
    component, and that variety points lie in the component of their own
    support.  The report lists counterexamples; an empty list means pass.
    """
    if len(graph.vertices) > cap:
        raise ResourceLimitError(
            f"{len(graph.vertices)} vertices exceed the verification cap of {cap}"
        )
    admissible = admissible_sets(graph)
    counterexamples = []
    for t in range(trials):
        rng = random.Random(f"{seed}:{t}")
        structured = rng.random() < 0.7
        if structured:
            support = frozenset(v for v in graph.vertices if rng.random() < 0.6)
            point = sample_point_in_VGY(graph, d0, support, rng)
        else:
            point = random_matrix_point(graph, d0, rng)
        in_variety = point_in_VG(point, graph)
        covered = any(point_in_VGY(point, graph, y) for y in admissible)
        if in_variety != covered:
            counterexamples.append({
                "trial": t,
                "kind": "cover",
                "in_variety": in_variety,
                "covered": covered,
                "columns": _point_json(point, graph),
            })
        if in_variety and not point_in_VGY(point, graph, point.support()):
            counterexamples.append({
                "trial": t,
                "kind": "own-support",
                "columns": _point_json(point, graph),
            })
    return {
        "trials": trials,
        "admissible_count": len(admissible),
        "counterexamples": counterexamples,
        "ok": not counterexamples,
    }


def _point_json(point: MatrixPoint, graph: InputGraph) -> list:
    return [
        {"x": list(x), "column": [format_fraction(v) for v in point.column(x)]}
        for x in graph.vertices
    ]


def verify_primary_decomposition(
    graph: InputGraph,
    d0: int,
    *,
    intersection_max_vertices: int = 3,
    max_pairs: int = 50_000,
    max_terms: int = 10_000,
) -> dict:
    """Three-legged verification of the decomposition of the edge ideal.

    (a) admissible supports are pairwise non-containing;
    (b) every edge generator lies in every admissible component ideal;
    (c) on instances with at most ``intersection_max_vertices`` vertices and
        d0 = 2, the elimination-computed intersection of the component ideals
        equals the reduced Groebner basis of the edge ideal ("skipped"
        otherwise).
    """
    admissible = admissible_sets(graph)
    counterexamples = []

    non_containment = True
    for a in admissible:
        for b in admissible:
            if a != b and containment(graph, a, b):
                non_containment = False
                counterexamples.append({
                    "leg": "non_containment",
                    "outer": [list(x) for x in sorted(a)],
                    "inner": [list(x) for x in sorted(b)],
                })

    edge_gens = [g.polynomial() for g in edge_generators(graph, d0)] if graph.num_edges() else []
    membership = True
    for y in admissible:
        gens = component_ideal(graph, y, d0).generators()
        gb = buchberger(gens, max_pairs=max_pairs, max_terms=max_terms)
        for f in edge_gens:
            if reduce(f, gb):
                membership = False
                counterexamples.append({
                    "leg": "membership",
                    "support": [list(x) for x in sorted(y)],
                })
                break

    if len(graph.vertices) <= intersection_max_vertices and d0 == 2:
        component_gens = [
            component_ideal(graph, y, d0).generators() for y in admissible
        ]
        intersection = intersect_ideals(component_gens, max_pairs=max_pairs, max_terms=max_terms)
        target = buchberger(edge_gens, max_pairs=max_pairs, max_terms=max_terms)
        intersection_equality = set(intersection) == set(target)
        if intersection_equality is False:
            counterexamples.append({"leg": "intersection_equality"})
    else:
        intersection_equality = "skipped"

    return {
        "admissible_Y": [[list(x) for x in sorted(y)] for y in admissible],
        "legs": {
            "non_containment": non_containment,
            "membership": membership,
            "intersection_equality": intersection_equality,
        },
        "counterexamples": counterexamples,
    }
