"""Finite groups as immutable multiplication tables.

A GroupTable is built from one of three specifications:

    "sym3", "cyclic:13", "alt5", "psl2_7", "sg21_1"     preset token
    {"permutations": ["(1,2,3)(4,5)", ...]}             permutation generators
    {"table": [[0, 1], [1, 0]]}                          explicit multiplication table

Element ids follow a canonical ordering, versioned as ORDERING_VERSION:

    (element order, length of shortlex word, shortlex word)

where words are taken over the group's generating tuple (the preset
generators, the given permutations, or a greedily chosen tuple for tables).
Id 0 is always the identity. Lexicographic class representatives downstream
depend on this ordering, so every report carries the table fingerprint.

Permutations compose left to right, as in sympy: ``a*b`` applies ``a`` first.
"""

from __future__ import annotations

import functools
import hashlib
import itertools
import json
import logging
import re
from collections import defaultdict, deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

from sympy.combinatorics import Permutation, PermutationGroup

from .errors import GroupOrderCapError, GroupSpecError

logger = logging.getLogger(__name__)

GroupElement = int
GroupSpec = Union[str, Mapping]

DEFAULT_MAX_ORDER = 2000
ORDERING_VERSION = "order-shortlex/1"

# name -> (generators in cycle notation, generator names)
PRESETS = {
    "sym3": (("(1,2)", "(1,2,3)"), ("x", "y")),
    "alt5": (("(1,2,3,4,5)", "(1,2,3)"), ("a", "b")),
    "psl2_7": (("(1,2,3,4,5,6,7)", "(1,8)(2,7)(3,4)(5,6)"), ("a", "b")),
    "sg21_1": (("(1,2,3,4,5,6,7)", "(2,3,5)(4,7,6)"), ("a", "b")),
}

PRESET_TITLES = {
    "sym3": "Sym(3)",
    "alt5": "Alt(5)",
    "psl2_7": "PSL(2,7)",
    "sg21_1": "SG(21,1)",
}

_CYCLES_RE = re.compile(r"^(\(\s*\d+(\s*,\s*\d+)*\s*\))+$")
_CYCLE_RE = re.compile(r"\(([^()]*)\)")
_WORD_FACTOR_RE = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(\^(-?\d+))?$")


# ══════════════════════════════════════════════════════════════════
# Group table
# ══════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class GroupTable:
    name: str
    order: int
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]
    elem_order: tuple[int, ...]
    generators: tuple[int, ...]
    generator_names: tuple[str, ...]
    words: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    fingerprint: str

    identity = 0

    def multiply(self, *elements: GroupElement) -> GroupElement:
        result = 0
        for g in elements:
            result = self.mul[result][g]
        return result

    def power(self, g: GroupElement, n: int) -> GroupElement:
        if n < 0:
            g, n = self.inv[g], -n
        result = 0
        for _ in range(n % self.elem_order[g]):
            result = self.mul[result][g]
        return result

    def conjugate(self, x: GroupElement, y: GroupElement) -> GroupElement:
        """Ad_x(y) = x y x^-1."""
        return self.mul[self.mul[x][y]][self.inv[x]]

    def word_label(self, g: GroupElement) -> str:
        """Display word of ``g`` over the generator names, e.g. ``x*y^2``."""
        word = self.words[g]
        if not word:
            return "1"
        parts = []
        for index, run in itertools.groupby(word):
            count = len(list(run))
            name = self.generator_names[index]
            parts.append(name if count == 1 else f"{name}^{count}")
        return "*".join(parts)

    def evaluate(self, text: str) -> GroupElement:
        """Evaluate a word such as ``x*y^-1`` or ``1`` over the generator names."""
        text = text.strip()
        if text in ("1", "e", ""):
            return 0
        names = {name: self.generators[i] for i, name in enumerate(self.generator_names)}
        result = 0
        for factor in text.split("*"):
            m = _WORD_FACTOR_RE.match(factor.strip())
            if not m or m.group(1) not in names:
                raise GroupSpecError(f"Cannot evaluate word factor {factor!r} in {self.name}")
            exponent = int(m.group(3)) if m.group(3) else 1
            result = self.mul[result][self.power(names[m.group(1)], exponent)]
        return result

    @functools.cached_property
    def elements_by_order(self) -> dict[int, tuple[int, ...]]:
        table = defaultdict(list)
        for g, n in enumerate(self.elem_order):
            table[n].append(g)
        return {n: tuple(ids) for n, ids in sorted(table.items())}


@dataclass(frozen=True)
class Automorphism:
    image: tuple[int, ...]

    def __call__(self, g: GroupElement) -> GroupElement:
        return self.image[g]

    def apply(self, vector: Sequence[GroupElement]) -> tuple[int, ...]:
        image = self.image
        return tuple(image[c] for c in vector)

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self`` after ``other``."""
        return Automorphism(tuple(self.image[g] for g in other.image))

    def inverse(self) -> "Automorphism":
        inverse = [0] * len(self.image)
        for g, h in enumerate(self.image):
            inverse[h] = g
        return Automorphism(tuple(inverse))

    @property
    def is_identity(self) -> bool:
        return all(g == h for g, h in enumerate(self.image))


# ══════════════════════════════════════════════════════════════════
# Construction
# ══════════════════════════════════════════════════════════════════


def parse_cycles(text: str) -> list[list[int]]:
    """Parse 1-based cycle notation into 0-based cycles. ``()`` is the identity."""
    compact = re.sub(r"\s+", "", text)
    if compact in ("", "()"):
        return []
    if not _CYCLES_RE.match(compact):
        raise GroupSpecError(f"Invalid cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(compact):
        points = [int(p) for p in body.split(",")]
        if any(p < 1 for p in points):
            raise GroupSpecError(f"Cycle points are 1-based: {text!r}")
        cycles.append([p - 1 for p in points])
    return cycles


def format_cycles(array_form: Sequence[int]) -> str:
    cycles = Permutation(list(array_form)).cyclic_form
    if not cycles:
        return "()"
    return "".join("(" + ",".join(str(p + 1) for p in cycle) + ")" for cycle in cycles)


def _permutations(texts: Sequence[str]) -> list[Permutation]:
    parsed = [parse_cycles(t) for t in texts]
    degree = max([p + 1 for cycles in parsed for cycle in cycles for p in cycle] + [1])
    perms = []
    for text, cycles in zip(texts, parsed):
        try:
            perm = Permutation(cycles, size=degree) if cycles else Permutation(list(range(degree)))
        except ValueError as exc:
            raise GroupSpecError(f"Not a permutation: {text!r} ({exc})") from exc
        perms.append(perm)
    return perms


def _bfs_words(order_hint, identity, right_step, n_gens):
    """Breadth-first closure from the identity under right multiplication.

    ``right_step(x, k)`` returns the key of x * gen_k. Discovery indices are
    in shortlex order of the words; ``parent[j] * gen[last[j]] == j``.
    """
    keys = [identity]
    index = {identity: 0}
    words = [()]
    parent = [0]
    last = [0]
    step = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        row = []
        for k in range(n_gens):
            y = right_step(keys[i], k)
            j = index.get(y)
            if j is None:
                j = len(keys)
                if order_hint is not None and j >= order_hint:
                    raise GroupSpecError("Generators produce more elements than the group order")
                index[y] = j
                keys.append(y)
                words.append(words[i] + (k,))
                parent.append(i)
                last.append(k)
                queue.append(j)
            row.append(j)
        step.append(row)
    return _Discovery(keys, index, words, parent, last, step)


@dataclass
class _Discovery:
    keys: list
    index: dict
    words: list
    parent: list
    last: list
    step: list


def _assemble(name, found: _Discovery, generator_names, reprs, gen_keys):
    """Relabel discovery indices into canonical ids and tabulate the group."""
    n = len(found.keys)
    words, step, parent, last = found.words, found.step, found.parent, found.last

    # row[b] = row[parent(b)] * gen(last(b)); discovery order visits parents first
    raw = []
    for a in range(n):
        row = [a] * n
        for b in range(1, n):
            row[b] = step[row[parent[b]]][last[b]]
        raw.append(row)

    raw_order = []
    for a in range(n):
        x, count = a, 1
        while x != 0:
            x = raw[x][a]
            count += 1
        raw_order.append(count)

    ranking = sorted(range(n), key=lambda a: (raw_order[a], len(words[a]), words[a]))
    new_id = {old: new for new, old in enumerate(ranking)}
    mul = tuple(tuple(new_id[raw[old_a][old_b]] for old_b in ranking) for old_a in ranking)
    inv = tuple(row.index(0) for row in mul)
    elem_order = tuple(raw_order[old] for old in ranking)
    ordered_words = tuple(words[old] for old in ranking)
    labels = tuple(reprs(found.keys[old]) for old in ranking)
    generators = tuple(new_id[found.index[key]] for key in gen_keys)

    digest = hashlib.sha256()
    digest.update(ORDERING_VERSION.encode())
    for label in labels:
        digest.update(label.encode() + b"\n")
    return GroupTable(
        name=name,
        order=n,
        mul=mul,
        inv=inv,
        elem_order=elem_order,
        generators=generators,
        generator_names=tuple(generator_names),
        words=ordered_words,
        labels=labels,
        fingerprint=digest.hexdigest()[:16],
    )


def group_from_permutations(
    texts: Sequence[str],
    name: str = "perm",
    generator_names: Sequence[str] | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
) -> GroupTable:
    if not texts:
        raise GroupSpecError("At least one permutation generator is required")
    perms = _permutations(texts)
    order = int(PermutationGroup(perms).order())
    if order > max_order:
        raise GroupOrderCapError(f"Group {name} has order {order}, above the cap {max_order}")
    if generator_names is None:
        generator_names = [f"g{i + 1}" for i in range(len(perms))]
    if len(generator_names) != len(perms):
        raise GroupSpecError("generator_names must match the number of generators")
    gens = [tuple(p.array_form) for p in perms]
    identity = tuple(range(perms[0].size))

    def right_step(x, k):
        s = gens[k]
        return tuple(s[i] for i in x)

    found = _bfs_words(order, identity, right_step, len(gens))
    logger.debug("permutation group %s: %d elements from %d generators",
                 name, len(found.keys), len(gens))
    return _assemble(name, found, generator_names, format_cycles, gens)


def _check_table(table: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(table)
    if n == 0:
        raise GroupSpecError("Multiplication table is empty")
    rows = []
    for row in table:
        if len(row) != n:
            raise GroupSpecError("Multiplication table must be square")
        if any(not isinstance(v, int) or v < 0 or v >= n for v in row):
            raise GroupSpecError("Multiplication table entries must be element indices")
        rows.append(list(row))
    full = set(range(n))
    for a in range(n):
        if set(rows[a]) != full or {rows[b][a] for b in range(n)} != full:
            raise GroupSpecError("Multiplication table is not a Latin square")
    return rows


def group_from_table(
    table: Sequence[Sequence[int]],
    name: str = "table",
    max_order: int = DEFAULT_MAX_ORDER,
) -> GroupTable:
    rows = _check_table(table)
    n = len(rows)
    if n > max_order:
        raise GroupOrderCapError(f"Group {name} has order {n}, above the cap {max_order}")
    identity = next((e for e in range(n) if rows[e] == list(range(n))
                     and all(rows[a][e] == a for a in range(n))), None)
    if identity is None:
        raise GroupSpecError("Multiplication table has no identity element")

    # Greedy generating tuple in table order.
    gens: list[int] = []
    reached = {identity}
    for g in range(n):
        if g in reached:
            continue
        gens.append(g)
        reached = _table_closure(rows, identity, gens)
        if len(reached) == n:
            break

    # Light's test: associativity for every x, y and every generator z suffices.
    for z in gens:
        for x in range(n):
            row_x = rows[x]
            for y in range(n):
                if rows[row_x[y]][z] != row_x[rows[y][z]]:
                    raise GroupSpecError(f"Multiplication table is not associative ({x},{y},{z})")

    found = _bfs_words(n, identity, lambda x, k: rows[x][gens[k]], len(gens))
    if len(found.keys) != n:
        raise GroupSpecError("Multiplication table is not generated by its elements")
    names = [f"t{g}" for g in gens]
    return _assemble(name, found, names, lambda key: f"t{key}", gens)


def _table_closure(rows, identity, gens):
    reached = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = rows[x][s]
            if y not in reached:
                reached.add(y)
                queue.append(y)
    return reached


def _preset(token: str, max_order: int) -> GroupTable:
    if token.startswith("cyclic:"):
        try:
            n = int(token.split(":", 1)[1])
        except ValueError as exc:
            raise GroupSpecError(f"Invalid cyclic preset: {token!r}") from exc
        if n < 1:
            raise GroupSpecError(f"Cyclic order must be positive: {token!r}")
        if n > max_order:
            raise GroupOrderCapError(f"Group {token} has order {n}, above the cap {max_order}")
        cycle = "(" + ",".join(str(i) for i in range(1, n + 1)) + ")" if n > 1 else "()"
        return group_from_permutations([cycle], name=f"Cyclic({n})", generator_names=["c"],
                                       max_order=max_order)
    if token not in PRESETS:
        known = ", ".join(sorted(PRESETS) + ["cyclic:n"])
        raise GroupSpecError(f"Unknown group preset {token!r} (known: {known})")
    texts, names = PRESETS[token]
    return group_from_permutations(texts, name=PRESET_TITLES[token], generator_names=names,
                                   max_order=max_order)


def build_group(spec: GroupSpec, max_order: int = DEFAULT_MAX_ORDER) -> GroupTable:
    """Build a validated GroupTable from a preset token or a specification mapping."""
    if isinstance(spec, str):
        return _preset(spec.strip(), max_order)
    if not isinstance(spec, Mapping):
        raise GroupSpecError(f"Unsupported group specification: {spec!r}")
    kinds = [k for k in ("preset", "permutations", "table") if k in spec]
    if len(kinds) != 1:
        raise GroupSpecError("Group specification needs exactly one of preset, permutations, table")
    kind = kinds[0]
    if kind == "preset":
        return _preset(str(spec["preset"]), max_order)
    name = str(spec.get("name", kind))
    if kind == "permutations":
        texts = spec["permutations"]
        if isinstance(texts, str) or not isinstance(texts, Sequence):
            raise GroupSpecError("permutations must be a list of cycle-notation strings")
        return group_from_permutations(list(texts), name=name,
                                       generator_names=spec.get("generator_names"),
                                       max_order=max_order)
    return group_from_table(spec["table"], name=name, max_order=max_order)


def load_group_spec(token: str) -> GroupSpec:
    """A preset token, or the JSON file it names."""
    path = Path(token)
    if token.endswith(".json") or path.is_file():
        try:
            return json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise GroupSpecError(f"Cannot read group specification {token}: {exc}") from exc
    return token


# ══════════════════════════════════════════════════════════════════
# Element arithmetic and subgroups
# ══════════════════════════════════════════════════════════════════


def element_order(G: GroupTable, g: GroupElement) -> int:
    return G.elem_order[g]


def closure(G: GroupTable, S: Iterable[GroupElement], start: Iterable[GroupElement] = (0,)) -> set[int]:
    """Subgroup generated by ``S`` (together with the subgroup ``start``), by BFS saturation."""
    gens = [s for s in set(S) if s != 0]
    reached = set(start) | {0}
    queue = deque(reached)
    mul = G.mul
    while queue:
        row = mul[queue.popleft()]
        for s in gens:
            y = row[s]
            if y not in reached:
                reached.add(y)
                queue.append(y)
    return reached


def generates(G: GroupTable, S: Iterable[GroupElement]) -> bool:
    return len(closure(G, S)) == G.order


# ══════════════════════════════════════════════════════════════════
# Automorphisms
# ══════════════════════════════════════════════════════════════════


def small_generating_tuple(G: GroupTable) -> tuple[int, ...]:
    """A generating tuple with few candidate images under order-preserving maps.

    Tries one element, then pairs ordered by the product of their order-class
    sizes, then falls back to the table's own generating tuple.
    """
    if G.order == 1:
        return ()
    by_order = G.elements_by_order
    if G.order in by_order:
        return (by_order[G.order][0],)
    orders = [m for m in by_order if m > 1]
    pairs = sorted(
        (len(by_order[a]) * len(by_order[b]), a, b)
        for a, b in itertools.combinations_with_replacement(orders, 2)
    )
    for _, a, b in pairs:
        for x in by_order[a]:
            for y in by_order[b]:
                if x != y and generates(G, (x, y)):
                    return (x, y)
    return G.generators


def _spanning_tree(G: GroupTable, gens: Sequence[int]) -> list[tuple[int, int, int]]:
    """(child, parent, generator index) in BFS order; child = parent * gens[k]."""
    seen = {0}
    tree = []
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for k, s in enumerate(gens):
            y = G.mul[x][s]
            if y not in seen:
                seen.add(y)
                tree.append((y, x, k))
                queue.append(y)
    return tree


def automorphisms(G: GroupTable, max_order: int = DEFAULT_MAX_ORDER) -> list[Automorphism]:
    """All automorphisms of G, sorted by image tuple (identity first).

    Fix a small generating tuple, enumerate candidate image tuples with
    matching element orders, extend each along a spanning tree of the Cayley
    graph and keep the extensions that are bijective homomorphisms.
    """
    if G.order > max_order:
        raise GroupOrderCapError(f"Group {G.name} has order {G.order}, above the cap {max_order}")
    n = G.order
    gens = small_generating_tuple(G)
    tree = _spanning_tree(G, gens)
    mul = G.mul
    candidates = [G.elements_by_order[G.elem_order[s]] for s in gens]
    logger.debug("%s: automorphism search over %d candidate tuples",
                 G.name, functools.reduce(lambda a, c: a * len(c), candidates, 1))

    found = []
    for images in itertools.product(*candidates):
        image = [0] * n
        for child, parent, k in tree:
            image[child] = mul[image[parent]][images[k]]
        if len(set(image)) != n:
            continue
        if all(image[mul[e][s]] == mul[image[e]][images[k]]
               for e in range(n) for k, s in enumerate(gens)):
            found.append(Automorphism(tuple(image)))
    found.sort(key=lambda a: a.image)
    logger.info("%s: |Aut(G)| = %d", G.name, len(found))
    return found


def inner_automorphism(G: GroupTable, x: GroupElement) -> Automorphism:
    """Ad_x: y -> x y x^-1."""
    return Automorphism(tuple(G.conjugate(x, y) for y in range(G.order)))
