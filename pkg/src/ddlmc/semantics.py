"""Truth conditions for the object language over finite preference models.

Three rival truth conditions for the dyadic obligation O(psi / phi) are
supported:

* ``opt``: the optimal antecedent worlds (at least as good as every
  antecedent world) all satisfy the consequent;
* ``max``: the maximal antecedent worlds (not strictly bettered by any
  antecedent world) all satisfy the consequent;
* ``lewis``: either there is no antecedent world, or some antecedent world
  satisfying the consequent starts an unbroken region: every world at least
  as good as it satisfies antecedent -> consequent.

``[]`` is the global modality (truth at all worlds), so alethic and deontic
formulas are world-independent: their truth set is empty or the whole
universe.

Atoms missing from a model's valuation denote the empty set by default; this
keeps small model files terse but can mask typos, so ``strict_atoms=True``
turns the fallback into an error.

Frame validity instantiates a schema's metavariables with every assignment
of world sets; the loops are exponential and capped by default (n <= 4 for
up to two metavariables, n <= 3 for three; pass ``force=True`` to override).
The module also carries a compiled evaluator used by the exhaustive searches:
a formula is translated once into a Python expression over bitmasks and a
per-frame table of best sets (or a Lewis conditional table).
"""

from __future__ import annotations

import enum
from functools import lru_cache
from itertools import product

from . import formula as fm
from .model import (
    PreferenceModel,
    Relation,
    full_mask,
    iter_bits,
    strict_part,
    transpose,
)
from .relprops import RelationProperty

Assignment = dict[str, int]


class EvalRule(enum.Enum):
    OPT = "opt"
    MAX = "max"
    LEWIS = "lewis"

    def __str__(self) -> str:
        return self.value


def rule_from_name(name: str) -> EvalRule:
    try:
        return EvalRule(name.strip().lower())
    except ValueError:
        raise ValueError(f"unknown evaluation rule {name!r}") from None


def best_set(rule: EvalRule, xs: int, m: PreferenceModel) -> int:
    """Optimal or maximal elements of the world set xs."""
    if rule is EvalRule.OPT:
        return _opt_set(m.rel, xs)
    if rule is EvalRule.MAX:
        return _max_set(transpose(strict_part(m.rel)), xs)
    raise ValueError("best_set is defined for the opt and max rules only")


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


def cond_holds(rule: EvalRule, consequent: int, antecedent: int, m: PreferenceModel) -> bool:
    """Truth of O(consequent / antecedent) on extensions (world sets)."""
    if rule is EvalRule.LEWIS:
        return _lewis_cond(m.rel, m.full_mask, antecedent, consequent)
    return best_set(rule, antecedent, m) & ~consequent == 0


def _lewis_cond(rel: Relation, w: int, xs: int, ys: int) -> bool:
    if xs == 0:
        return True
    cols = transpose(rel)
    bad = xs & (w ^ ys)  # antecedent worlds violating the consequent
    for b in iter_bits(xs & ys):
        if not cols[b] & bad:
            return True
    return False


def truth_set(
    f: fm.Formula,
    m: PreferenceModel,
    rule: EvalRule,
    assignment: Assignment | None = None,
    *,
    strict_atoms: bool = False,
) -> int:
    """Set of worlds (bitmask) where f is true."""
    w = m.full_mask

    def ev(g: fm.Formula) -> int:
        if isinstance(g, fm.Atom):
            mask = m.valuation.get(g.name)
            if mask is None:
                if strict_atoms:
                    raise KeyError(f"atom {g.name!r} has no valuation entry")
                return 0
            return mask
        if isinstance(g, fm.MetaVar):
            if assignment is None or g.name not in assignment:
                raise ValueError(f"unbound metavariable ?{g.name}")
            return assignment[g.name]
        if isinstance(g, fm.Top):
            return w
        if isinstance(g, fm.Bot):
            return 0
        if isinstance(g, fm.Not):
            return w ^ ev(g.child)
        if isinstance(g, fm.Or):
            return ev(g.left) | ev(g.right)
        if isinstance(g, fm.And):
            return ev(g.left) & ev(g.right)
        if isinstance(g, fm.Implies):
            return (w ^ ev(g.left)) | ev(g.right)
        if isinstance(g, fm.Iff):
            return w ^ (ev(g.left) ^ ev(g.right))
        if isinstance(g, fm.Box):
            return w if ev(g.child) == w else 0
        if isinstance(g, fm.Diamond):
            return w if ev(g.child) else 0
        if isinstance(g, fm.Oblig):
            return w if cond_holds(rule, ev(g.consequent), ev(g.antecedent), m) else 0
        if isinstance(g, fm.Perm):
            return w if not cond_holds(rule, w ^ ev(g.consequent), ev(g.antecedent), m) else 0
        if isinstance(g, fm.PrefGeq):
            left, right = ev(g.left), ev(g.right)
            return w if not cond_holds(rule, w ^ left, left | right, m) else 0
        if isinstance(g, fm.PrefGt):
            left, right = ev(g.left), ev(g.right)
            both = left | right
            geq = not cond_holds(rule, w ^ left, both, m)
            gt = cond_holds(rule, w ^ right, both, m)
            return w if geq and gt else 0
        raise TypeError(f"not a formula: {g!r}")

    return ev(f)


def valid_in_model(
    f: fm.Formula,
    m: PreferenceModel,
    rule: EvalRule,
    *,
    strict_atoms: bool = False,
) -> bool:
    """True at every world of the model."""
    if fm.metavars(f):
        raise ValueError("formula contains metavariables; use valid_on_frame")
    return truth_set(f, m, rule, strict_atoms=strict_atoms) == m.full_mask


# ---------------------------------------------------------------------------
# Compiled evaluation for exhaustive scans
#
# A formula compiles to a lambda over (W, bt, lt, e) where W is the full
# mask, bt a per-frame best-set table indexed by antecedent mask (opt/max),
# lt a per-frame Lewis table (lt[X] has bit Y set iff the conditional with
# antecedent X and consequent Y holds), and e a tuple of masks for the
# formula's variables in a fixed name order.


def _emit(f: fm.Formula, kind: str, index: dict[str, int]) -> str:
    def rec(g: fm.Formula) -> str:
        if isinstance(g, (fm.Atom, fm.MetaVar)):
            return f"e[{index[g.name]}]"
        if isinstance(g, fm.Top):
            return "W"
        if isinstance(g, fm.Bot):
            return "0"
        if isinstance(g, fm.Not):
            return f"(W^{rec(g.child)})"
        if isinstance(g, fm.Or):
            return f"({rec(g.left)}|{rec(g.right)})"
        if isinstance(g, fm.And):
            return f"({rec(g.left)}&{rec(g.right)})"
        if isinstance(g, fm.Implies):
            return f"((W^{rec(g.left)})|{rec(g.right)})"
        if isinstance(g, fm.Iff):
            return f"(W^({rec(g.left)}^{rec(g.right)}))"
        if isinstance(g, fm.Box):
            return f"(W if {rec(g.child)}==W else 0)"
        if isinstance(g, fm.Diamond):
            return f"(W if {rec(g.child)} else 0)"
        if isinstance(g, fm.Oblig):
            return _cond(rec(g.antecedent), rec(g.consequent), negate=False)
        if isinstance(g, fm.Perm):
            return _cond(rec(g.antecedent), f"(W^{rec(g.consequent)})", negate=True)
        if isinstance(g, fm.PrefGeq):
            left, right = rec(g.left), rec(g.right)
            return _cond(f"({left}|{right})", f"(W^{left})", negate=True)
        if isinstance(g, fm.PrefGt):
            left, right = rec(g.left), rec(g.right)
            both = f"({left}|{right})"
            geq = _cond(both, f"(W^{left})", negate=True)
            ob = _cond(both, f"(W^{right})", negate=False)
            return f"({geq}&{ob})"
        raise TypeError(f"not a formula: {g!r}")

    def _cond(ant: str, cons: str, negate: bool) -> str:
        if kind == "lewis":
            test = f"lt[{ant}]>>{cons}&1"
        else:
            test = f"bt[{ant}]&~{cons}==0"
        if negate:
            return f"(0 if {test} else W)"
        return f"(W if {test} else 0)"

    return rec(f)


@lru_cache(maxsize=None)
def _compiled(f: fm.Formula, kind: str, names: tuple[str, ...]):
    index = {name: i for i, name in enumerate(names)}
    source = "lambda W, bt, lt, e: " + _emit(f, kind, index)
    return eval(source, {"__builtins__": {}})  # expression over ints only


def compile_formula(f: fm.Formula, rule: EvalRule, names: tuple[str, ...]):
    """Compile f for fast repeated evaluation; see frame_tables."""
    kind = "lewis" if rule is EvalRule.LEWIS else "best"
    return _compiled(f, kind, names)


def frame_tables(rel: Relation, rule: EvalRule) -> tuple[int, list[int] | None, list[int] | None]:
    """Per-frame tables (W, bt, lt) feeding compiled formulas."""
    n = len(rel)
    w = full_mask(n)
    if rule is EvalRule.LEWIS:
        cols = transpose(rel)
        lt = []
        for xs in range(1 << n):
            if xs == 0:
                lt.append((1 << (1 << n)) - 1)
                continue
            bits = 0
            for ys in range(1 << n):
                bad = xs & (w ^ ys)
                for b in iter_bits(xs & ys):
                    if not cols[b] & bad:
                        bits |= 1 << ys
                        break
            lt.append(bits)
        return w, None, lt
    if rule is EvalRule.OPT:
        bt = [_opt_set(rel, xs) for xs in range(1 << n)]
    else:
        scols = transpose(strict_part(rel))
        bt = [_max_set(scols, xs) for xs in range(1 << n)]
    return w, bt, None


# ---------------------------------------------------------------------------
# Frame validity

_FRAME_CAP_FEW_VARS = 4  # up to two metavariables
_FRAME_CAP_MANY_VARS = 3  # three or more


def _check_frame_cap(n: int, nvars: int, force: bool) -> None:
    cap = _FRAME_CAP_FEW_VARS if nvars <= 2 else _FRAME_CAP_MANY_VARS
    if n > cap and not force:
        raise ValueError(
            f"frame validity over {nvars} metavariables is capped at n={cap} "
            f"by default (got n={n}); pass force=True to override"
        )


def frame_counterexample(
    schema: fm.Formula,
    rel: Relation,
    rule: EvalRule,
    *,
    force: bool = False,
) -> dict[str, int] | None:
    """Lexicographically least falsifying assignment, or None if frame-valid.

    The schema must be built from metavariables only (no atoms).
    """
    if fm.atoms(schema):
        raise ValueError("schema contains ordinary atoms; use metavariables")
    names = tuple(sorted(fm.metavars(schema)))
    n = len(rel)
    _check_frame_cap(n, len(names), force)
    w = full_mask(n)
    fn = compile_formula(schema, rule, names)
    _, bt, lt = frame_tables(rel, rule)
    if not names:
        return None if fn(w, bt, lt, ()) == w else {}
    for env in product(range(1 << n), repeat=len(names)):
        if fn(w, bt, lt, env) != w:
            return dict(zip(names, env))
    return None


def valid_on_frame(
    schema: fm.Formula,
    rel: Relation,
    rule: EvalRule,
    *,
    force: bool = False,
) -> bool:
    """Frame validity: true under every assignment of world sets."""
    return frame_counterexample(schema, rel, rule, force=force) is None


# ---------------------------------------------------------------------------
# Collapse of the three rules on well-behaved frames


def rule_collapse(max_n: int, iso_reject: bool = True) -> dict:
    """On reflexive total transitive frames the three conditionals agree.

    Compares the extensional conditional for every antecedent/consequent
    pair on every such frame up to max_n, returning a report with either
    status "confirmed" or the first disagreeing frame.
    """
    from .finder import enumerate_frames

    props = (
        RelationProperty.REFLEXIVE,
        RelationProperty.TOTAL,
        RelationProperty.TRANSITIVE,
    )
    frames_checked = 0
    for n in range(1, max_n + 1):
        for rel in enumerate_frames(n, props, iso_reject=iso_reject):
            frames_checked += 1
            _, bt_opt, _ = frame_tables(rel, EvalRule.OPT)
            _, bt_max, _ = frame_tables(rel, EvalRule.MAX)
            w, _, lt = frame_tables(rel, EvalRule.LEWIS)
            for xs in range(1 << n):
                row = lt[xs]
                for ys in range(1 << n):
                    opt_ok = bt_opt[xs] & ~ys == 0
                    max_ok = bt_max[xs] & ~ys == 0
                    lewis_ok = bool(row >> ys & 1)
                    if not (opt_ok == max_ok == lewis_ok):
                        return {
                            "status": "diverged",
                            "max_n": max_n,
                            "frames_checked": frames_checked,
                            "frame": {"n": n, "rel": list(rel)},
                            "antecedent": _worlds(xs),
                            "consequent": _worlds(ys),
                            "opt": opt_ok,
                            "max": max_ok,
                            "lewis": lewis_ok,
                        }
    return {
        "status": "confirmed",
        "max_n": max_n,
        "frames_checked": frames_checked,
        "properties": [p.value for p in props],
    }


def _worlds(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]
