import random

import pytest

from satlll.errors import DomainError, SizeGuardError
from satlll.events_graph import (BadEvent, DepGraph, atom_hits,
                                 dependency_graph, disagree,
                                 disagreement_witness, event_from_clause,
                                 events_from_formula, lopsidependency_graph,
                                 verify_lopsidependency)
from satlll.sat_model import Clause, Literal, build_extremal_formula

from conftest import random_formula


def ev(*atoms):
    return BadEvent(frozenset(atoms))


def test_event_from_clause_negates_literals():
    clause = Clause((Literal(1, True), Literal(2, False)))
    assert event_from_clause(clause) == ev((1, False), (2, True))
    assert event_from_clause(Clause((Literal(1, False),))) == ev((1, True))


def test_events_of_phi1():
    formula, _ = build_extremal_formula(3, 2, 1)
    events = events_from_formula(formula)
    assert events[0] == ev((1, False), (2, False), (3, False))
    assert events[1] == ev((1, True), (4, False), (5, False))


def test_disagree_basic():
    assert disagreement_witness(ev((1, False)), ev((1, True))) == frozenset({1})
    assert not disagree(ev((1, False)), ev((1, False), (2, True)))
    assert disagreement_witness(ev((1, False), (2, False)),
                                ev((2, True), (3, False))) == frozenset({2})


def test_disagree_symmetric(rng):
    for _ in range(100):
        atoms1 = {(rng.randint(1, 5), rng.random() < 0.5) for _ in range(rng.randint(1, 4))}
        atoms2 = {(rng.randint(1, 5), rng.random() < 0.5) for _ in range(rng.randint(1, 4))}
        try:
            b1, b2 = BadEvent(frozenset(atoms1)), BadEvent(frozenset(atoms2))
        except DomainError:
            continue
        assert disagree(b1, b2) == disagree(b2, b1)


def test_atom_relation_is_irreflexive_on_clause_events():
    formula, _ = build_extremal_formula(3, 2, 2)
    for event in events_from_formula(formula):
        assert not disagree(event, event)
        assert all(not atom_hits(atom, event) for atom in event.atoms)


def test_lopsidependency_graph_phi1():
    formula, _ = build_extremal_formula(3, 2, 1)
    graph = lopsidependency_graph(events_from_formula(formula))
    assert graph.edges() == [(0, 1)]


def test_same_polarity_sharing_no_lopsi_edge():
    events = [ev((1, False), (2, False)), ev((1, False), (3, False))]
    assert lopsidependency_graph(events).edges() == []
    assert dependency_graph(events).edges() == [(0, 1)]


def test_monotone_formula_edgeless(rng):
    clauses = tuple(Clause((Literal(2 * i + 1, True), Literal(2 * i + 2, True)))
                    for i in range(3))
    from satlll.sat_model import Formula
    formula = Formula(width=2, variable_count=6, clauses=clauses)
    assert lopsidependency_graph(events_from_formula(formula)).edges() == []


def test_lopsi_subgraph_of_dependency(rng):
    for _ in range(30):
        formula = random_formula(rng, k=3, m=8, n_clauses=6)
        events = events_from_formula(formula)
        lopsi = set(lopsidependency_graph(events).edges())
        dep = set(dependency_graph(events).edges())
        assert lopsi <= dep


def test_graph_utils():
    graph = DepGraph.from_edges(5, [(0, 1), (2, 3)])
    assert graph.induced_subgraph([]).n == 0
    sub = graph.induced_subgraph([0, 1, 4])
    assert sub.n == 3 and sub.edges() == [(0, 1)]
    components = graph.connected_components()
    assert sorted(map(sorted, components)) == [[0, 1], [2, 3], [4]]
    assert graph.max_degree() == 1
    assert graph.neighborhood(0) == frozenset({1})


def test_graph_rejects_self_loop():
    with pytest.raises(DomainError):
        DepGraph.from_edges(2, [(0, 0)])


def test_lopsi_max_degree_bound_on_construction():
    for k, L in ((2, 2), (3, 2), (2, 3)):
        formula, _ = build_extremal_formula(k, L, 6)
        graph = lopsidependency_graph(events_from_formula(formula))
        # positive literals meet <= L-1 opposite occurrences, the single
        # negative literal meets <= L, so degree <= (k-1)(L-1) + L
        assert graph.max_degree() <= (k - 1) * (L - 1) + L


def test_verify_lopsidependency_on_canonical_graph():
    formula, _ = build_extremal_formula(3, 2, 1)
    events = events_from_formula(formula)
    graph = lopsidependency_graph(events)
    assert verify_lopsidependency(events, graph, formula.variable_count)


def test_verify_lopsidependency_complete_graph_vacuous():
    events = [ev((1, True)), ev((1, False)), ev((2, True))]
    complete = DepGraph.from_edges(3, [(0, 1), (0, 2), (1, 2)])
    assert verify_lopsidependency(events, complete, 2)


def test_verify_lopsidependency_detects_bad_graph():
    # avoiding B' = {(1,F),(2,F)} raises P(B) for B = {(1,T)}: 2/3 > 1/2
    events = [ev((1, True)), ev((1, False), (2, False))]
    edgeless = DepGraph.from_edges(2, [])
    report = verify_lopsidependency(events, edgeless, 2)
    assert not report
    assert report.witness_event == 0
    assert report.witness_set == (1,)


def test_verify_lopsidependency_guard():
    events = [ev((1, True))]
    graph = DepGraph.from_edges(1, [])
    with pytest.raises(SizeGuardError):
        verify_lopsidependency(events, graph, 20)
