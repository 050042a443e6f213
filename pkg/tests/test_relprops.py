"""Property checks against the naive oracle, plus implication machinery."""

from __future__ import annotations

from ddlmc.model import all_relations, relation_from_pairs, relation_pairs
from ddlmc.relprops import (
    LATTICE_ARROWS,
    LATTICE_NODES,
    Confirmed,
    RelationProperty,
    Witness,
    check_property,
    implied_pairs,
    lattice_report,
    property_from_name,
    property_implication,
)

from oracle import naive_properties

P = RelationProperty


def test_property_names_roundtrip():
    for prop in RelationProperty:
        assert property_from_name(prop.value) is prop
    assert property_from_name("Interval-Order") is P.INTERVAL_ORDER


def test_all_properties_match_oracle_exhaustively_n_le_3():
    for n in (1, 2, 3):
        for rel in all_relations(n):
            expected = naive_properties(n, set(relation_pairs(rel)))
            for prop in RelationProperty:
                assert check_property(prop, rel) == expected[prop.value], (
                    n, rel, prop,
                )


def test_acyclicity_of_strict_cycle():
    # 0 > 1 > 2 > 0 encoded weakly with no reflexive pairs
    rel = relation_from_pairs(3, [(0, 1), (1, 2), (2, 0)])
    assert not check_property(P.ACYCLIC, rel)


def test_quasi_transitive_but_not_transitive():
    rel = relation_from_pairs(
        3, [(0, 1), (1, 0), (1, 2), (2, 1), (0, 0), (1, 1), (2, 2)]
    )
    assert check_property(P.QUASI_TRANSITIVE, rel)  # strict part is empty
    assert not check_property(P.TRANSITIVE, rel)  # (0,2) missing


def test_reflexive_total_transitive_implies_max_limited():
    count = 0
    for n in (1, 2, 3, 4):
        for rel in all_relations(n):
            if check_property(P.REFLEXIVE, rel) and check_property(P.TOTAL, rel) and check_property(P.TRANSITIVE, rel):
                count += 1
                assert check_property(P.MAX_LIMITED, rel)
    # weak orders on 1..4 labeled elements: 1 + 3 + 13 + 75
    assert count == 92


def test_opt_limited_implies_max_limited():
    for n in (1, 2, 3):
        for rel in all_relations(n):
            if check_property(P.OPT_LIMITED, rel):
                assert check_property(P.MAX_LIMITED, rel)


def test_implication_confirmed_and_witness():
    assert isinstance(property_implication(P.TRANSITIVE, P.QUASI_TRANSITIVE, 3), Confirmed)
    w = property_implication(P.QUASI_TRANSITIVE, P.TRANSITIVE, 3)
    assert isinstance(w, Witness)
    assert check_property(P.QUASI_TRANSITIVE, w.rel)
    assert not check_property(P.TRANSITIVE, w.rel)


def test_ferrers_plus_reflexive_implies_total():
    assert isinstance(
        property_implication((P.FERRERS, P.REFLEXIVE), P.TOTAL, 3), Confirmed
    )


def test_witness_is_least():
    w = property_implication(P.QUASI_TRANSITIVE, P.TRANSITIVE, 3)
    for n in range(1, w.n + 1):
        for rel in all_relations(n):
            if n == w.n and rel >= w.rel:
                break
            assert not (
                check_property(P.QUASI_TRANSITIVE, rel)
                and not check_property(P.TRANSITIVE, rel)
            )


def test_implied_pairs_close_the_arrows():
    implied = implied_pairs()
    for arrow in LATTICE_ARROWS:
        assert arrow in implied
    assert (P.TRANSITIVE, P.ACYCLIC) in implied
    assert (P.INTERVAL_ORDER, P.ACYCLIC) in implied
    assert (P.INTERVAL_ORDER, P.TOTAL) in implied
    assert (P.QUASI_TRANSITIVE, P.TRANSITIVE) not in implied


def test_lattice_report_small():
    report = lattice_report(3)
    assert all(a["status"] == "confirmed" for a in report["arrows"])
    assert len(report["arrows"]) == 6
    for item in report["independence"]:
        assert item["status"] == "witness", (item["from"], item["to"])
        rel = tuple(item["witness_rel"])
        assert check_property(property_from_name(item["from"]), rel)
        assert not check_property(property_from_name(item["to"]), rel)


def test_lattice_nodes_cover_expected_properties():
    assert set(LATTICE_NODES) == {
        P.TRANSITIVE, P.QUASI_TRANSITIVE, P.SUZUMURA_CONSISTENT,
        P.ACYCLIC, P.INTERVAL_ORDER, P.TOTAL, P.REFLEXIVE,
    }
