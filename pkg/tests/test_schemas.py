"""Schema registry, forward/converse checks, and the table sweeps."""

from __future__ import annotations

import pytest

from ddlmc.formula import metavars
from ddlmc.relprops import RelationProperty as P
from ddlmc.relprops import check_property
from ddlmc.schemas import (
    SCHEMAS,
    converse_search,
    forward_check,
    table_sweep,
)
from ddlmc.semantics import EvalRule, truth_set, valid_on_frame


def test_registry_contents():
    assert set(SCHEMAS) == {
        "K", "T", "Five", "COK", "Abs", "Nec", "Ext", "Id", "Sh",
        "Dstar", "CM", "DR", "Sp", "RM", "DEX",
    }
    for name, body in SCHEMAS.items():
        assert metavars(body) <= {"f", "g", "h"}, name


def test_forward_examples():
    assert forward_check([P.MAX_LIMITED], "Dstar", EvalRule.MAX, 3).confirmed
    assert forward_check([P.MAX_SMOOTH], "CM", EvalRule.MAX, 3).confirmed
    result = forward_check([P.TRANSITIVE], "Sp", EvalRule.MAX, 3)
    assert result.status == "counterexample"
    assert check_property(P.TRANSITIVE, result.counter_frame)
    assert not valid_on_frame(SCHEMAS["Sp"], result.counter_frame, EvalRule.MAX, force=True)


def test_forward_counterexample_assignment_refutes():
    result = forward_check([], "Dstar", EvalRule.OPT, 2)
    assert result.status == "counterexample"
    from ddlmc.model import PreferenceModel

    n = len(result.counter_frame)
    model = PreferenceModel(
        n, result.counter_frame,
        {name: mask for name, mask in result.counter_assignment.items()},
    )
    # re-evaluate the schema with metavariables read as atoms
    instance = SCHEMAS["Dstar"]
    from ddlmc.schemas import _instantiate
    from ddlmc import formula as fm

    body = _instantiate(instance, {v: fm.Atom(v) for v in metavars(instance)})
    assert truth_set(body, model, EvalRule.OPT) != model.full_mask


def test_dex_valid_under_max_refuted_under_lewis():
    assert forward_check([], "DEX", EvalRule.MAX, 3).confirmed
    result = forward_check([], "DEX", EvalRule.LEWIS, 3)
    assert result.status == "counterexample"
    assert len(result.counter_frame) <= 2
    # the instance built from the falsifying assignment refutes deontic
    # explosion under lewis in a concrete model
    from ddlmc import formula as fm
    from ddlmc.model import PreferenceModel
    from ddlmc.schemas import _instantiate

    model = PreferenceModel(
        len(result.counter_frame), result.counter_frame,
        dict(result.counter_assignment),
    )
    body = _instantiate(SCHEMAS["DEX"], {v: fm.Atom(v) for v in ("f", "g", "h")})
    assert truth_set(body, model, EvalRule.LEWIS) != model.full_mask


def test_dex_fails_under_lewis_even_on_a_non_limited_model():
    # the least countermodels are max-limited (the rule tolerates a
    # conflict between unrelated witnesses); a non-limited one needs a
    # strict cycle plus an isolated world, first possible at n=4
    from ddlmc.finder import SearchSpec, find_satisfying_model
    from ddlmc.formula import parse

    targets = tuple(parse(s) for s in ("<>f", "O(g / f)", "O(~g / f)", "~O(h / f)"))
    blocked = SearchSpec(
        max_n=3, rule=EvalRule.LEWIS, targets=targets,
        frame_filter=lambda rel: not check_property(P.MAX_LIMITED, rel),
    )
    assert find_satisfying_model(blocked).status == "unsat_up_to_bound"
    found = SearchSpec(
        max_n=4, rule=EvalRule.LEWIS, targets=targets,
        frame_filter=lambda rel: not check_property(P.MAX_LIMITED, rel),
    )
    result = find_satisfying_model(found)
    assert result.status == "sat"
    assert result.model.n == 4
    assert not check_property(P.MAX_LIMITED, result.model)


def test_converse_trivial_witness():
    # Id is valid on every frame, so any non-transitive frame witnesses
    result = converse_search("Id", P.TRANSITIVE, EvalRule.MAX, 3)
    assert result.status == "witness"
    assert not check_property(P.TRANSITIVE, result.witness.rel)
    assert valid_on_frame(SCHEMAS["Id"], result.witness.rel, EvalRule.MAX, force=True)


def test_converse_dstar_limitedness_none():
    # D* frame-validity pins down limitedness exactly, so no frame can
    # validate D* while failing it
    result = converse_search("Dstar", P.MAX_LIMITED, EvalRule.MAX, 4)
    assert result.status == "none_up_to_bound"


def test_converse_cm_smoothness():
    # frame-level: no small frame validates CM while failing smoothness
    frame = converse_search("CM", P.MAX_SMOOTH, EvalRule.MAX, 3)
    assert frame.status == "none_up_to_bound"
    # model-level: a fixed-instance reading does have a finite witness
    model = converse_search("CM", P.MAX_SMOOTH, EvalRule.MAX, 3, model_level=True)
    assert model.status == "witness"
    assert not check_property(P.MAX_SMOOTH, model.witness.rel)
    from ddlmc.schemas import _instantiate
    from ddlmc import formula as fm

    body = _instantiate(SCHEMAS["CM"], {v: fm.Atom(v) for v in ("f", "g", "h")})
    assert truth_set(body, model.witness, EvalRule.MAX) == model.witness.full_mask


def test_sweep_max_rows():
    report = table_sweep(EvalRule.MAX, 3)
    assert report["all_match"]
    rows = {r["label"]: r for r in report["rows"]}
    assert rows["limitedness"]["axioms"]["Dstar"]["forward"]["status"] == "confirmed"
    assert rows["limitedness"]["axioms"]["Dstar"]["dropped"]["status"] == "counterexample"
    assert rows["smoothness"]["axioms"]["CM"]["match"]
    assert rows["transitivity+totality"]["axioms"]["Sp"]["match"]
    assert rows["interval order"]["axioms"]["DR"]["match"]
    assert rows["transitivity"]["match"] is None  # bounded evidence only


def test_sweep_opt_transitivity_row():
    report = table_sweep(EvalRule.OPT, 3)
    assert report["all_match"]
    rows = {r["label"]: r for r in report["rows"]}
    assert rows["transitivity"]["axioms"]["Sp"]["forward"]["status"] == "confirmed"
    assert rows["transitivity+totality"]["match"] is None


def test_sweep_lewis_rows():
    report = table_sweep(EvalRule.LEWIS, 3)
    assert report["all_match"]
    rows = {r["label"]: r for r in report["rows"]}
    assert set(rows["transitivity+totality"]["axioms"]) == {"COK", "CM"}
    assert rows["totality"]["axioms"]["Dstar"]["match"]
    # COK needs both properties: dropping them yields a counterexample
    assert rows["transitivity+totality"]["axioms"]["COK"]["dropped"]["status"] == "counterexample"


def _oracle_frame_valid(body, rel, rule_name):
    """Frame validity via the naive evaluator: loop over all assignments."""
    from itertools import product

    from ddlmc.model import relation_pairs
    from oracle import truth_worlds

    n = len(rel)
    worlds = frozenset(range(n))
    pairs = set(relation_pairs(rel))
    names = sorted(metavars(body))
    subsets = [frozenset(ws) for ws in _powerset(range(n))]
    for combo in product(subsets, repeat=len(names)):
        assignment = dict(zip(names, combo))
        if truth_worlds(body, worlds, pairs, {}, rule_name, assignment) != worlds:
            return False
    return True


def _powerset(items):
    from itertools import chain, combinations

    items = list(items)
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


def test_frame_validity_agrees_with_oracle():
    from ddlmc.model import all_relations

    picks = ("Dstar", "CM", "Sh", "DEX", "COK")
    for rel in all_relations(2):
        for name in picks:
            for rule in (EvalRule.OPT, EvalRule.MAX, EvalRule.LEWIS):
                fast = valid_on_frame(SCHEMAS[name], rel, rule, force=True)
                slow = _oracle_frame_valid(SCHEMAS[name], rel, rule.value)
                assert fast == slow, (name, rel, rule)


def test_counterexample_identical_with_and_without_iso_rejection():
    # the least counterexample frame is an orbit minimum, so isomorph
    # rejection must report the very same frame
    for axiom, rule in (("Sp", EvalRule.MAX), ("DR", EvalRule.OPT), ("COK", EvalRule.LEWIS)):
        with_iso = forward_check([], axiom, rule, 3, iso_reject=True)
        without = forward_check([], axiom, rule, 3, iso_reject=False)
        assert with_iso.counter_frame == without.counter_frame
        assert with_iso.counter_assignment == without.counter_assignment


def test_formula_level_preference_is_transitive():
    # transitivity of the worlds relation lifts to the >= operator on
    # formulas under opt; under max it needs totality as well
    from ddlmc.formula import parse

    schema = parse("(?f >= ?g) & (?g >= ?h) -> (?f >= ?h)")
    assert forward_check([P.TRANSITIVE], schema, EvalRule.OPT, 3).confirmed
    assert forward_check([P.TRANSITIVE, P.TOTAL], schema, EvalRule.MAX, 3).confirmed
    assert forward_check([P.TRANSITIVE], schema, EvalRule.MAX, 3).status == "counterexample"
    assert forward_check([], schema, EvalRule.OPT, 3).status == "counterexample"


def test_sweep_bounds():
    with pytest.raises(ValueError):
        table_sweep(EvalRule.MAX, 5)
    with pytest.raises(ValueError):
        forward_check([], "Id", EvalRule.MAX, 6)
