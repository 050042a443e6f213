"""Properties of betterness relations and implications between them.

Covers the standard rational-choice conditions (reflexivity, totality,
transitivity and its weakenings, the Ferrers condition and interval orders)
plus the frame-level limit assumptions: limitedness and smoothness, each
relative to the optimality or the maximality reading of "best".

Limitedness and smoothness quantify over every non-empty subset of the
universe, not only definable sets, so they are valuation-independent.

``property_implication`` decides "every relation with P1 also has P2" by
exhaustive enumeration at a fixed universe size, returning a Confirmed
marker or the least witness relation.  ``lattice_report`` does this for the
whole implication diagram of the transitivity weakenings.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product
from typing import Iterable

from .model import (
    PreferenceModel,
    Relation,
    iter_bits,
    strict_part,
    transitive_closure,
    transpose,
)


class RelationProperty(enum.Enum):
    REFLEXIVE = "reflexive"
    TOTAL = "total"
    TRANSITIVE = "transitive"
    QUASI_TRANSITIVE = "quasi_transitive"
    ACYCLIC = "acyclic"
    SUZUMURA_CONSISTENT = "suzumura_consistent"
    FERRERS = "ferrers"
    INTERVAL_ORDER = "interval_order"
    OPT_LIMITED = "opt_limited"
    MAX_LIMITED = "max_limited"
    OPT_SMOOTH = "opt_smooth"
    MAX_SMOOTH = "max_smooth"

    def __str__(self) -> str:
        return self.value


def property_from_name(name: str) -> RelationProperty:
    key = name.strip().lower().replace("-", "_")
    for prop in RelationProperty:
        if prop.value == key:
            return prop
    raise ValueError(f"unknown relation property {name!r}")


def is_reflexive(rel: Relation) -> bool:
    return all(rel[i] >> i & 1 for i in range(len(rel)))


def is_total(rel: Relation) -> bool:
    # a >= b or b >= a for all a, b, including a == b (so totality
    # implies reflexivity).
    n = len(rel)
    for i in range(n):
        for j in range(i, n):
            if not (rel[i] >> j & 1 or rel[j] >> i & 1):
                return False
    return True


def is_transitive(rel: Relation) -> bool:
    for row in rel:
        for j in iter_bits(row):
            if rel[j] & ~row:
                return False
    return True


def is_quasi_transitive(rel: Relation) -> bool:
    """The strict part is transitive."""
    return is_transitive(strict_part(rel))


def is_acyclic(rel: Relation) -> bool:
    """No strict-betterness cycles: a ><-closure b implies not b > a."""
    strict = strict_part(rel)
    closure = transitive_closure(strict)
    scols = transpose(strict)
    return all(not (closure[a] & scols[a]) for a in range(len(rel)))


def is_suzumura_consistent(rel: Relation) -> bool:
    """No weak-preference cycle containing a strict step."""
    closure = transitive_closure(rel)
    scols = transpose(strict_part(rel))
    return all(not (closure[a] & scols[a]) for a in range(len(rel)))


def is_ferrers(rel: Relation) -> bool:
    # a>=b and c>=d imply a>=d or c>=b; equivalently the rows form a
    # chain under set inclusion.
    n = len(rel)
    for i in range(n):
        row_i = rel[i]
        for j in range(i + 1, n):
            row_j = rel[j]
            if row_i & ~row_j and row_j & ~row_i:
                return False
    return True


def is_interval_order(rel: Relation) -> bool:
    """Total and Ferrers (equivalently, reflexive and Ferrers)."""
    return is_total(rel) and is_ferrers(rel)


def _opt_set(rel: Relation, xs: int) -> int:
    best = 0
    for a in iter_bits(xs):
        if xs & ~rel[a] == 0:
            best |= 1 << a
    return best


def _max_set(strict_cols: Relation, xs: int) -> int:
    best = 0
    for a in iter_bits(xs):
        if not strict_cols[a] & xs:
            best |= 1 << a
    return best


def is_opt_limited(rel: Relation) -> bool:
    for xs in range(1, 1 << len(rel)):
        if not _opt_set(rel, xs):
            return False
    return True


def is_max_limited(rel: Relation) -> bool:
    scols = transpose(strict_part(rel))
    for xs in range(1, 1 << len(rel)):
        if not _max_set(scols, xs):
            return False
    return True


def is_opt_smooth(rel: Relation) -> bool:
    scols = transpose(strict_part(rel))
    for xs in range(1, 1 << len(rel)):
        best = _opt_set(rel, xs)
        for x in iter_bits(xs & ~best):
            if not scols[x] & best:
                return False
    return True


def is_max_smooth(rel: Relation) -> bool:
    scols = transpose(strict_part(rel))
    for xs in range(1, 1 << len(rel)):
        best = _max_set(scols, xs)
        for x in iter_bits(xs & ~best):
            if not scols[x] & best:
                return False
    return True


_CHECKS = {
    RelationProperty.REFLEXIVE: is_reflexive,
    RelationProperty.TOTAL: is_total,
    RelationProperty.TRANSITIVE: is_transitive,
    RelationProperty.QUASI_TRANSITIVE: is_quasi_transitive,
    RelationProperty.ACYCLIC: is_acyclic,
    RelationProperty.SUZUMURA_CONSISTENT: is_suzumura_consistent,
    RelationProperty.FERRERS: is_ferrers,
    RelationProperty.INTERVAL_ORDER: is_interval_order,
    RelationProperty.OPT_LIMITED: is_opt_limited,
    RelationProperty.MAX_LIMITED: is_max_limited,
    RelationProperty.OPT_SMOOTH: is_opt_smooth,
    RelationProperty.MAX_SMOOTH: is_max_smooth,
}


def check_property(prop: RelationProperty, target: PreferenceModel | Relation) -> bool:
    """True iff the property holds of the betterness relation."""
    rel = target.rel if isinstance(target, PreferenceModel) else tuple(target)
    return _CHECKS[prop](rel)


def check_all(props: Iterable[RelationProperty], rel: Relation) -> bool:
    return all(_CHECKS[p](rel) for p in props)


# ---------------------------------------------------------------------------
# Implications between properties


@dataclass(frozen=True)
class Confirmed:
    """p1 implies p2 on every relation of each checked size."""

    n: int
    relations_checked: int


@dataclass(frozen=True)
class Witness:
    """Least relation (by size, then row-lexicographic order) with p1 but not p2."""

    n: int
    rel: Relation


def _as_props(p) -> tuple[RelationProperty, ...]:
    if isinstance(p, RelationProperty):
        return (p,)
    return tuple(p)


def property_implication(p1, p2, n: int) -> Confirmed | Witness:
    """Check p1 => p2 over all relations on 1..n worlds (n <= 4 is practical).

    p1 and p2 may be single properties or iterables (read conjunctively).
    """
    props1, props2 = _as_props(p1), _as_props(p2)
    checked = 0
    for size in range(1, n + 1):
        for rows in product(range(1 << size), repeat=size):
            if not check_all(props1, rows):
                continue
            checked += 1
            if not check_all(props2, rows):
                return Witness(size, rows)
    return Confirmed(n, checked)


# The implication diagram over the order-theoretic properties: the five
# weakenings of transitivity, plus totality and reflexivity.  Base arrows are
# the known one-step implications; interval order is total + Ferrers by
# definition, which contributes two more.  Everything else is independent and
# the report must produce a witness for each non-implied ordered pair.

LATTICE_NODES = (
    RelationProperty.TRANSITIVE,
    RelationProperty.QUASI_TRANSITIVE,
    RelationProperty.SUZUMURA_CONSISTENT,
    RelationProperty.ACYCLIC,
    RelationProperty.INTERVAL_ORDER,
    RelationProperty.TOTAL,
    RelationProperty.REFLEXIVE,
)

LATTICE_ARROWS = (
    (RelationProperty.TRANSITIVE, RelationProperty.SUZUMURA_CONSISTENT),
    (RelationProperty.SUZUMURA_CONSISTENT, RelationProperty.ACYCLIC),
    (RelationProperty.TRANSITIVE, RelationProperty.QUASI_TRANSITIVE),
    (RelationProperty.QUASI_TRANSITIVE, RelationProperty.ACYCLIC),
    (RelationProperty.INTERVAL_ORDER, RelationProperty.QUASI_TRANSITIVE),
    (RelationProperty.TOTAL, RelationProperty.REFLEXIVE),
)

_DEFINITIONAL_ARROWS = (
    (RelationProperty.INTERVAL_ORDER, RelationProperty.TOTAL),
    (RelationProperty.INTERVAL_ORDER, RelationProperty.REFLEXIVE),
)


def implied_pairs() -> frozenset[tuple[RelationProperty, RelationProperty]]:
    """Transitive closure of the arrow diagram (with definitional arrows)."""
    arrows = set(LATTICE_ARROWS) | set(_DEFINITIONAL_ARROWS)
    changed = True
    while changed:
        changed = False
        for a, b in list(arrows):
            for c, d in list(arrows):
                if b == c and (a, d) not in arrows and a != d:
                    arrows.add((a, d))
                    changed = True
    return frozenset(arrows)


def _lattice_flags(rel: Relation) -> int:
    """Bitmask of LATTICE_NODES flags, sharing intermediate computations."""
    n = len(rel)
    cols = transpose(rel)
    strict = tuple(r & ~c for r, c in zip(rel, cols))
    scols = tuple(c & ~r for r, c in zip(rel, cols))

    reflexive = all(rel[i] >> i & 1 for i in range(n))
    total = reflexive and all(
        rel[i] >> j & 1 or rel[j] >> i & 1
        for i in range(n)
        for j in range(i + 1, n)
    )

    def trans(rows: Relation) -> bool:
        for row in rows:
            m = row
            while m:
                low = m & -m
                if rows[low.bit_length() - 1] & ~row:
                    return False
                m ^= low
        return True

    transitive = trans(rel)
    quasi = trans(strict)
    sclo = transitive_closure(strict)
    acyclic = all(not (sclo[a] & scols[a]) for a in range(n))
    wclo = transitive_closure(rel)
    suzumura = all(not (wclo[a] & scols[a]) for a in range(n))
    ferrers = True
    for i in range(n):
        for j in range(i + 1, n):
            if rel[i] & ~rel[j] and rel[j] & ~rel[i]:
                ferrers = False
                break
        if not ferrers:
            break
    interval = total and ferrers

    flags = 0
    for idx, value in enumerate(
        (transitive, quasi, suzumura, acyclic, interval, total, reflexive)
    ):
        if value:
            flags |= 1 << idx
    return flags


def lattice_report(max_n: int) -> dict:
    """Exhaustively confirm every implied pair and witness every other pair.

    One pass per universe size computes all property flags per relation and
    a histogram of flag patterns, so the report covers every ordered pair of
    LATTICE_NODES at once.
    """
    implied = implied_pairs()
    index = {p: i for i, p in enumerate(LATTICE_NODES)}
    pairs = [(p, q) for p in LATTICE_NODES for q in LATTICE_NODES if p is not q]
    open_pairs = [
        (index[p], index[q], (p, q)) for p, q in pairs if (p, q) not in implied
    ]
    witnesses: dict[tuple, tuple[int, Relation]] = {}
    histograms: dict[int, dict[int, int]] = {}

    for size in range(1, max_n + 1):
        hist: dict[int, int] = {}
        need = [t for t in open_pairs if t[2] not in witnesses]
        for rows in product(range(1 << size), repeat=size):
            flags = _lattice_flags(rows)
            hist[flags] = hist.get(flags, 0) + 1
            if need:
                found = False
                for pi, qi, pair in need:
                    if flags >> pi & 1 and not flags >> qi & 1:
                        witnesses[pair] = (size, rows)
                        found = True
                if found:
                    need = [t for t in need if t[2] not in witnesses]
        histograms[size] = hist
        # Implications are confirmed by the histogram: no observed flag
        # pattern may have the source property without the target.
        for p, q in implied:
            pi, qi = index[p], index[q]
            for flags in hist:
                if flags >> pi & 1 and not flags >> qi & 1:
                    raise AssertionError(
                        f"implication {p} => {q} fails at size {size}"
                    )

    def checked(source: RelationProperty) -> int:
        pi = index[source]
        return sum(
            count
            for hist in histograms.values()
            for flags, count in hist.items()
            if flags >> pi & 1
        )

    return {
        "max_n": max_n,
        "arrows": [
            {
                "from": a.value,
                "to": b.value,
                "status": "confirmed",
                "relations_checked": checked(a),
            }
            for a, b in LATTICE_ARROWS
        ],
        "derived_arrows": sorted(
            f"{a.value} => {b.value}"
            for a, b in implied
            if (a, b) not in LATTICE_ARROWS
        ),
        "independence": [
            {
                "from": p.value,
                "to": q.value,
                "witness_n": witnesses[(p, q)][0] if (p, q) in witnesses else None,
                "witness_rel": list(witnesses[(p, q)][1]) if (p, q) in witnesses else None,
                "status": "witness" if (p, q) in witnesses else "no_witness_up_to_bound",
            }
            for p, q in pairs
            if (p, q) not in implied
        ],
    }
