"""Exact independence-polynomial evaluation and Shearer-criterion verdicts.

All arithmetic is exact rational (fractions.Fraction); the sign decisions
Q > 0 must be error-free.  The production engine uses the single-vertex
deletion recursion

    Q(G) = Q(G - v) - p_v * Q(G - v - N(v))

with connected-component factorization and memoization on vertex subsets.
A direct subset-enumeration evaluator is kept as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DomainError, SizeGuardError
from .events_graph import DepGraph

DEFAULT_VERTEX_GUARD = 40
BRUTE_FORCE_GUARD = 20

ProbabilityVector = Sequence[Fraction]


@dataclass(frozen=True)
class ShearerVerdict:
    satisfied: bool
    witness: Optional[tuple[int, ...]] = None  # independent set with Q <= 0
    witness_value: Optional[Fraction] = None


def _check_probabilities(graph: DepGraph, p: ProbabilityVector,
                         open_interval: bool = False) -> list[Fraction]:
    if len(p) != graph.n:
        raise DomainError(f"probability vector length {len(p)} != {graph.n} vertices")
    probs = [Fraction(x) for x in p]
    for i, x in enumerate(probs):
        if open_interval:
            if not 0 < x < 1:
                raise DomainError(f"p[{i}]={x} must lie in the open interval (0,1)")
        elif not 0 <= x <= 1:
            raise DomainError(f"p[{i}]={x} must lie in [0,1]")
    return probs


def _is_independent(graph: DepGraph, vertices: Iterable[int]) -> bool:
    vs = list(vertices)
    return all(not graph.has_edge(u, v) for i, u in enumerate(vs) for v in vs[i + 1:])


class _QEngine:
    """Memoized deletion-recursion evaluator for Q(G[active], empty, p)."""

    def __init__(self, graph: DepGraph, probs: list[Fraction]):
        self.adjacency = graph.adjacency
        self.probs = probs
        self.memo: dict[frozenset[int], Fraction] = {}

    def q(self, active: frozenset[int]) -> Fraction:
        if not active:
            return Fraction(1)
        cached = self.memo.get(active)
        if cached is not None:
            return cached
        result = Fraction(1)
        for comp in self._components(active):
            result *= self._q_connected(comp)
        self.memo[active] = result
        return result

    def _q_connected(self, comp: frozenset[int]) -> Fraction:
        if len(comp) == 1:
            (v,) = comp
            return 1 - self.probs[v]
        cached = self.memo.get(comp)
        if cached is not None:
            return cached
        v = min(comp)
        without_v = comp - {v}
        without_nbhd = without_v - self.adjacency[v]
        result = self.q(without_v) - self.probs[v] * self.q(without_nbhd)
        self.memo[comp] = result
        return result

    def _components(self, active: frozenset[int]) -> list[frozenset[int]]:
        seen: set[int] = set()
        comps = []
        for start in active:
            if start in seen:
                continue
            stack = [start]
            comp = set()
            while stack:
                v = stack.pop()
                if v in comp:
                    continue
                comp.add(v)
                stack.extend((self.adjacency[v] & active) - comp)
            seen |= comp
            comps.append(frozenset(comp))
        return comps


def independence_polynomial(graph: DepGraph, base: Iterable[int], p: ProbabilityVector,
                            vertex_guard: int = DEFAULT_VERTEX_GUARD) -> Fraction:
    """Q(G, S, p) = sum over independent T with S <= T of (-1)^{|T|-|S|} prod p_i.

    Returns 0 when the base set S is not independent.
    """
    if graph.n > vertex_guard:
        raise SizeGuardError(f"graph has {graph.n} vertices, guard is {vertex_guard}")
    probs = _check_probabilities(graph, p)
    base_set = frozenset(base)
    if not base_set <= frozenset(range(graph.n)):
        raise DomainError(f"base set {sorted(base_set)} not within vertex range")
    if not _is_independent(graph, base_set):
        return Fraction(0)
    engine = _QEngine(graph, probs)
    remaining = frozenset(range(graph.n)) - base_set
    for v in base_set:
        remaining -= graph.adjacency[v]
    prefactor = Fraction(1)
    for v in base_set:
        prefactor *= probs[v]
    return prefactor * engine.q(remaining)


def independence_polynomial_bruteforce(graph: DepGraph, base: Iterable[int],
                                       p: ProbabilityVector,
                                       vertex_guard: int = BRUTE_FORCE_GUARD) -> Fraction:
    """Independent oracle: direct signed sum over independent supersets of S."""
    if graph.n > vertex_guard:
        raise SizeGuardError(f"graph has {graph.n} vertices, brute-force guard is {vertex_guard}")
    probs = _check_probabilities(graph, p)
    base_set = frozenset(base)
    if not _is_independent(graph, base_set):
        return Fraction(0)

    total = Fraction(0)
    base_size = len(base_set)
    for t in _independent_supersets(graph, base_set):
        term = Fraction(1)
        for v in t:
            term *= probs[v]
        total += term if (len(t) - base_size) % 2 == 0 else -term
    return total


def _independent_supersets(graph: DepGraph, base: frozenset[int]):
    """All independent T with base <= T, grown over the non-base vertices."""
    candidates = [v for v in range(graph.n)
                  if v not in base and not (graph.adjacency[v] & base)]

    def extend(current: frozenset[int], start: int):
        yield current
        for idx in range(start, len(candidates)):
            v = candidates[idx]
            if not (graph.adjacency[v] & current):
                yield from extend(current | {v}, idx + 1)

    yield from extend(base, 0)


def enumerate_independent_sets(graph: DepGraph):
    """All independent sets, in lexicographic order of their sorted vertex lists."""

    def extend(current: tuple[int, ...], start: int):
        yield current
        for v in range(start, graph.n):
            if all(not graph.has_edge(v, u) for u in current):
                yield from extend(current + (v,), v + 1)

    yield from extend((), 0)


def component_factorization(graph: DepGraph, p: ProbabilityVector,
                            vertex_guard: int = DEFAULT_VERTEX_GUARD) -> Fraction:
    """Q(G, empty, p) as the product of Q over connected components."""
    if graph.n > vertex_guard:
        raise SizeGuardError(f"graph has {graph.n} vertices, guard is {vertex_guard}")
    probs = _check_probabilities(graph, p)
    result = Fraction(1)
    for comp in graph.connected_components():
        sub = graph.induced_subgraph(comp)
        sub_p = [probs[v] for v in sorted(comp)]
        result *= independence_polynomial(sub, (), sub_p, vertex_guard)
    return result


def expansion_identity(graph: DepGraph, x: Iterable[int], p: ProbabilityVector,
                       vertex_guard: int = DEFAULT_VERTEX_GUARD) -> Fraction:
    """Q(G, empty, p) expanded over a pivot set X:

    sum over independent U <= X of Q(G[V - X - N(U)], empty, p) * prod_{i in U} (-p_i)
    """
    if graph.n > vertex_guard:
        raise SizeGuardError(f"graph has {graph.n} vertices, guard is {vertex_guard}")
    probs = _check_probabilities(graph, p)
    x_set = frozenset(x)
    if not x_set <= frozenset(range(graph.n)):
        raise DomainError(f"pivot set {sorted(x_set)} not within vertex range")

    all_vertices = frozenset(range(graph.n))
    total = Fraction(0)
    x_graph = graph.induced_subgraph(x_set)
    x_sorted = sorted(x_set)
    for u_local in enumerate_independent_sets(x_graph):
        u = frozenset(x_sorted[i] for i in u_local)
        removed = set(x_set)
        for v in u:
            removed |= graph.adjacency[v]
        residual = sorted(all_vertices - removed)
        sub = graph.induced_subgraph(residual)
        sub_p = [probs[v] for v in residual]
        term = independence_polynomial(sub, (), sub_p, vertex_guard)
        for v in u:
            term *= -probs[v]
        total += term
    return total


def shearer_check(graph: DepGraph, p: ProbabilityVector,
                  vertex_guard: int = DEFAULT_VERTEX_GUARD) -> ShearerVerdict:
    """Satisfied iff Q(G, S, p) > 0 for every independent S (p in the open interval).

    On violation, the witness is the first failing S in lexicographic order
    of sorted vertex lists.
    """
    if graph.n > vertex_guard:
        raise SizeGuardError(f"graph has {graph.n} vertices, guard is {vertex_guard}")
    probs = _check_probabilities(graph, p, open_interval=True)
    engine = _QEngine(graph, probs)
    all_vertices = frozenset(range(graph.n))
    for s in enumerate_independent_sets(graph):
        remaining = all_vertices - frozenset(s)
        prefactor = Fraction(1)
        for v in s:
            remaining -= graph.adjacency[v]
            prefactor *= probs[v]
        value = prefactor * engine.q(remaining)
        if value <= 0:
            return ShearerVerdict(False, witness=s, witness_value=value)
    return ShearerVerdict(True)
