"""Finite preference models and primitive relation algebra.

A model is a universe of worlds 0..n-1 (n <= 16), a betterness relation
stored as its weak part (i >= j: "world i is at least as good as world j"),
and a valuation mapping atom names to sets of worlds.

Relations are tuples of n row bitmasks: bit j of row i is set iff i >= j.
World sets are plain int bitmasks over the n worlds.  The strict part and
the equal-goodness relation are always derived from the weak relation,
never stored.

Model file format (line-oriented, UTF-8, ``#`` starts a comment)::

    worlds <n>
    rel <i>>=<j> ...
    val <atom> = {<i>,<j>,...}

Exactly one ``rel`` line (possibly with no pairs); one ``val`` line per atom.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Iterator

Relation = tuple[int, ...]

MAX_WORLDS = 16

# Exhaustive enumeration with isomorph rejection walks the full space of
# 2^(n*n) relations once; past n=5 that space cannot even be iterated.
MAX_EXHAUSTIVE_WORLDS = 5


def full_mask(n: int) -> int:
    return (1 << n) - 1


def mask_from_worlds(worlds: Iterable[int]) -> int:
    mask = 0
    for w in worlds:
        mask |= 1 << w
    return mask


def worlds_from_mask(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def relation_from_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> Relation:
    rows = [0] * n
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"world pair ({i},{j}) out of range for n={n}")
        rows[i] |= 1 << j
    return tuple(rows)


def relation_pairs(rel: Relation) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i, row in enumerate(rel) for j in iter_bits(row))


def transpose(rel: Relation) -> Relation:
    n = len(rel)
    return tuple(
        sum(((rel[i] >> j) & 1) << i for i in range(n)) for j in range(n)
    )


def strict_part(rel: Relation) -> Relation:
    """Asymmetric factor: i > j iff i >= j and not j >= i."""
    cols = transpose(rel)
    return tuple(row & ~col for row, col in zip(rel, cols))


def equal_goodness(rel: Relation) -> Relation:
    """i ~ j iff i >= j and j >= i; always symmetric."""
    cols = transpose(rel)
    return tuple(row & col for row, col in zip(rel, cols))


def transitive_closure(rel: Relation) -> Relation:
    """Least transitive relation containing rel (Warshall over bit rows)."""
    rows = list(rel)
    n = len(rows)
    for k in range(n):
        row_k = rows[k]
        bit = 1 << k
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= row_k
    return tuple(rows)


class PreferenceModel:
    """Finite preference model: universe size, betterness rows, valuation.

    Immutable by convention after construction; share freely.
    """

    def __init__(self, n: int, rel: Relation, valuation: dict[str, int] | None = None):
        if not (1 <= n <= MAX_WORLDS):
            raise ValueError(f"world count must be in 1..{MAX_WORLDS}, got {n}")
        rel = tuple(rel)
        if len(rel) != n:
            raise ValueError(f"relation has {len(rel)} rows for n={n}")
        w = full_mask(n)
        if any(row & ~w for row in rel):
            raise ValueError("relation row refers to a world outside the universe")
        valuation = dict(valuation or {})
        for atom, mask in valuation.items():
            if mask & ~w:
                raise ValueError(f"valuation of {atom!r} outside the universe")
        self.n = n
        self.rel = rel
        self.valuation = valuation

    @classmethod
    def from_pairs(
        cls,
        n: int,
        pairs: Iterable[tuple[int, int]],
        valuation: dict[str, Iterable[int]] | None = None,
    ) -> "PreferenceModel":
        masks = {a: mask_from_worlds(ws) for a, ws in (valuation or {}).items()}
        return cls(n, relation_from_pairs(n, pairs), masks)

    @property
    def full_mask(self) -> int:
        return full_mask(self.n)

    def strict(self) -> Relation:
        return strict_part(self.rel)

    def equal(self) -> Relation:
        return equal_goodness(self.rel)

    def atom_mask(self, name: str) -> int | None:
        return self.valuation.get(name)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PreferenceModel):
            return NotImplemented
        return (
            self.n == other.n
            and self.rel == other.rel
            and self.valuation == other.valuation
        )

    def __repr__(self) -> str:
        return (
            f"PreferenceModel(n={self.n}, rel={relation_pairs(self.rel)}, "
            f"valuation={{{', '.join(f'{a}: {worlds_from_mask(m)}' for a, m in sorted(self.valuation.items()))}}})"
        )


class ModelFormatError(ValueError):
    """Malformed model file."""


def parse_model(text: str) -> PreferenceModel:
    """Parse the model file format."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise ModelFormatError("empty model file")

    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "worlds" or not parts[1].isdigit():
        raise ModelFormatError(f"line {lineno}: expected 'worlds <n>', got {header!r}")
    n = int(parts[1])
    if not (1 <= n <= MAX_WORLDS):
        raise ModelFormatError(f"line {lineno}: world count {n} out of range 1..{MAX_WORLDS}")

    if len(lines) < 2 or lines[1][1].split()[0] != "rel":
        where = lines[1][0] if len(lines) > 1 else lineno
        raise ModelFormatError(f"line {where}: expected a 'rel' line")
    lineno, rel_line = lines[1]
    pairs = []
    for item in rel_line.split()[1:]:
        left, sep, right = item.partition(">=")
        if not sep or not left.isdigit() or not right.isdigit():
            raise ModelFormatError(f"line {lineno}: bad relation pair {item!r}")
        i, j = int(left), int(right)
        if i >= n or j >= n:
            raise ModelFormatError(f"line {lineno}: world index out of range in {item!r}")
        pairs.append((i, j))

    valuation: dict[str, int] = {}
    for lineno, line in lines[2:]:
        parts = line.split(None, 1)
        if parts[0] != "val" or len(parts) != 2 or "=" not in parts[1]:
            raise ModelFormatError(f"line {lineno}: expected 'val <atom> = {{...}}'")
        atom, _, rest = parts[1].partition("=")
        atom = atom.strip()
        if not atom.isidentifier():
            raise ModelFormatError(f"line {lineno}: bad atom name {atom!r}")
        if atom in valuation:
            raise ModelFormatError(f"line {lineno}: duplicate atom {atom!r}")
        rest = rest.strip()
        if not (rest.startswith("{") and rest.endswith("}")):
            raise ModelFormatError(f"line {lineno}: expected a world set in braces")
        body = rest[1:-1].strip()
        mask = 0
        if body:
            for item in body.split(","):
                item = item.strip()
                if not item.isdigit():
                    raise ModelFormatError(f"line {lineno}: bad world index {item!r}")
                w = int(item)
                if w >= n:
                    raise ModelFormatError(f"line {lineno}: world index {w} out of range")
                mask |= 1 << w
        valuation[atom] = mask

    return PreferenceModel(n, relation_from_pairs(n, pairs), valuation)


def serialize_model(m: PreferenceModel) -> str:
    """Canonical text form; parse_model(serialize_model(m)) == m."""
    rel_items = " ".join(f"{i}>={j}" for i, j in relation_pairs(m.rel))
    lines = [f"worlds {m.n}", f"rel {rel_items}".rstrip()]
    for atom in sorted(m.valuation):
        worlds = ",".join(str(w) for w in worlds_from_mask(m.valuation[atom]))
        lines.append(f"val {atom} = {{{worlds}}}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Permutation action on relations, enumeration, canonical orbit representatives
#
# Relations are compared by their rows read as a tuple (row 0 first, each row
# an int bitmask).  pack_relation preserves that order, putting row 0 in the
# most significant position, so integer order on packed values equals tuple
# order on relations.


def all_relations(n: int) -> Iterator[Relation]:
    """Every n-world relation, in ascending row-tuple order (lazy)."""
    yield from product(range(1 << n), repeat=n)


def permute_relation(rel: Relation, perm: tuple[int, ...]) -> Relation:
    """Relabel worlds: new relation holds (perm[i], perm[j]) iff rel holds (i, j)."""
    n = len(rel)
    rows = [0] * n
    for i, row in enumerate(rel):
        shifted = 0
        for j in iter_bits(row):
            shifted |= 1 << perm[j]
        rows[perm[i]] = shifted
    return tuple(rows)


def pack_relation(rel: Relation) -> int:
    packed = 0
    n = len(rel)
    for row in rel:
        packed = (packed << n) | row
    return packed


def unpack_relation(packed: int, n: int) -> Relation:
    mask = full_mask(n)
    return tuple((packed >> ((n - 1 - i) * n)) & mask for i in range(n))


@lru_cache(maxsize=None)
def _perm_row_tables(n: int):
    # For each permutation and each row index, a lookup row-value -> its
    # contribution to the packed permuted relation.  Makes orbit walks cheap.
    tables = []
    for perm in permutations(range(n)):
        per_perm = []
        for i in range(n):
            shift = (n - 1 - perm[i]) * n
            table = []
            for rowval in range(1 << n):
                contrib = 0
                for j in iter_bits(rowval):
                    contrib |= 1 << perm[j]
                table.append(contrib << shift)
            per_perm.append(table)
        tables.append(per_perm)
    return tuple(tables)


def canonical_form(rel: Relation) -> Relation:
    """Least relation (row-tuple order) in the world-permutation orbit."""
    n = len(rel)
    best = None
    for per_perm in _perm_row_tables(n):
        packed = 0
        for i, row in enumerate(rel):
            packed |= per_perm[i][row]
        if best is None or packed < best:
            best = packed
    return unpack_relation(best, n)


def orbit(rel: Relation) -> frozenset[Relation]:
    """All relabelings of rel."""
    n = len(rel)
    return frozenset(permute_relation(rel, p) for p in permutations(range(n)))


_canonical_cache: dict[int, tuple[Relation, ...]] = {}


def canonical_relations(n: int) -> tuple[Relation, ...]:
    """One representative (the orbit minimum) per isomorphism class, ascending.

    Walks the whole 2^(n*n) space once, marking each orbit as it is first
    met; supported for n <= MAX_EXHAUSTIVE_WORLDS.
    """
    if n in _canonical_cache:
        return _canonical_cache[n]
    if not (1 <= n <= MAX_EXHAUSTIVE_WORLDS):
        raise ValueError(
            f"isomorph rejection enumerates all relations; supported for n <= {MAX_EXHAUSTIVE_WORLDS}"
        )
    tables = _perm_row_tables(n)
    seen = bytearray(1 << (n * n))
    mask = full_mask(n)
    shifts = [(n - 1 - i) * n for i in range(n)]
    reps = []
    for packed in range(1 << (n * n)):
        if seen[packed]:
            continue
        rows = tuple((packed >> s) & mask for s in shifts)
        reps.append(rows)
        for per_perm in tables:
            image = 0
            for i in range(n):
                image |= per_perm[i][rows[i]]
            seen[image] = 1
    result = tuple(reps)
    _canonical_cache[n] = result
    return result
