"""Finite strict partial orders and the named patterns used as forbidden posets.

Elements are ``0..size-1``. The order is stored as one bitmask per element:
``up[i]`` has bit ``j`` set exactly when ``i < j``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property

from .chains import min_chain_cover
from .limits import MAX_POSET_SIZE


class PosetError(ValueError):
    pass


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _close(size: int, up: list[int]) -> list[int]:
    # Warshall on bit rows
    up = list(up)
    for k in range(size):
        bit = 1 << k
        row_k = up[k]
        for i in range(size):
            if up[i] & bit:
                up[i] |= row_k
    return up


@dataclass(frozen=True)
class Poset:
    size: int
    up: tuple[int, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if not 1 <= self.size <= MAX_POSET_SIZE:
            raise PosetError(f"poset size must be in 1..{MAX_POSET_SIZE}, got {self.size}")
        if len(self.up) != self.size:
            raise PosetError("relation rows do not match size")
        full = (1 << self.size) - 1
        for i, row in enumerate(self.up):
            if row & ~full:
                raise PosetError(f"element {i} related to an index outside the poset")
            if row >> i & 1:
                raise PosetError(f"relation is not irreflexive at {i}")
            for j in _bits(row):
                if self.up[j] >> i & 1:
                    raise PosetError(f"relation is not antisymmetric at ({i}, {j})")
                if self.up[j] & ~row:
                    raise PosetError(f"relation is not transitive at ({i}, {j})")
        if self.labels is not None and len(self.labels) != self.size:
            raise PosetError("labels do not match size")

    @classmethod
    def from_relations(cls, size: int, relations, labels=None) -> "Poset":
        """Build from ``(i, j)`` pairs meaning ``i < j``; closes transitively."""
        if not 1 <= size <= MAX_POSET_SIZE:
            raise PosetError(f"poset size must be in 1..{MAX_POSET_SIZE}, got {size}")
        up = [0] * size
        for i, j in relations:
            if not (0 <= i < size and 0 <= j < size):
                raise PosetError(f"relation ({i}, {j}) out of range")
            up[i] |= 1 << j
        up = _close(size, up)
        for i in range(size):
            if up[i] >> i & 1:
                raise PosetError(f"relations contain a cycle through element {i}")
        return cls(size, tuple(up), tuple(labels) if labels is not None else None)

    @cached_property
    def down(self) -> tuple[int, ...]:
        down = [0] * self.size
        for i, row in enumerate(self.up):
            for j in _bits(row):
                down[j] |= 1 << i
        return tuple(down)

    def lt(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def comparable(self, i: int, j: int) -> bool:
        return self.lt(i, j) or self.lt(j, i)

    def relations(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.size) for j in _bits(self.up[i])]

    @cached_property
    def covers(self) -> tuple[int, ...]:
        """``covers[i]``: bitmask of the elements covering ``i`` (Hasse edges up)."""
        rows = []
        for i in range(self.size):
            above = self.up[i]
            indirect = 0
            for j in _bits(above):
                indirect |= self.up[j]
            rows.append(above & ~indirect)
        return tuple(rows)

    @cached_property
    def covered_by(self) -> tuple[int, ...]:
        rows = [0] * self.size
        for i, row in enumerate(self.covers):
            for j in _bits(row):
                rows[j] |= 1 << i
        return tuple(rows)

    def minimal_elements(self) -> list[int]:
        return [i for i in range(self.size) if not self.down[i]]

    def maximal_elements(self) -> list[int]:
        return [i for i in range(self.size) if not self.up[i]]

    def smallest_element(self) -> int | None:
        """The element below every other one, if there is one."""
        full = (1 << self.size) - 1
        for i in range(self.size):
            if self.up[i] | (1 << i) == full:
                return i
        return None

    @cached_property
    def height(self) -> int:
        # longest chain, by memoised depth from the top
        depth = [0] * self.size
        order = sorted(range(self.size), key=lambda i: bin(self.up[i]).count("1"))
        for i in order:
            depth[i] = 1 + max((depth[j] for j in _bits(self.up[i])), default=0)
        return max(depth)

    @cached_property
    def width(self) -> int:
        return len(min_chain_cover(self.up))

    def is_antichain(self) -> bool:
        return not any(self.up)

    def dual(self) -> "Poset":
        return Poset(self.size, self.down, self.labels)

    def induced(self, elements) -> "Poset":
        """Subposet on ``elements`` (relabelled 0.. in the given order)."""
        elements = list(elements)
        index = {e: k for k, e in enumerate(elements)}
        pairs = [(index[i], index[j]) for i in elements for j in elements if self.lt(i, j)]
        labels = None if self.labels is None else [self.labels[e] for e in elements]
        return Poset.from_relations(len(elements), pairs, labels)

    def without(self, elements) -> "Poset":
        drop = set(elements)
        return self.induced([i for i in range(self.size) if i not in drop])

    def to_json(self) -> dict:
        return {"elements": self.size, "relations": [list(r) for r in self.relations()]}

    def key(self) -> str:
        """Stable serialisation of the closed relation matrix."""
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def __str__(self):
        return f"Poset({self.size}, {self.relations()})"


def disjoint_union(parts: list[Poset]) -> Poset:
    total = sum(p.size for p in parts)
    if total > MAX_POSET_SIZE:
        raise PosetError(f"union has {total} elements, cap is {MAX_POSET_SIZE}")
    pairs = []
    labels = []
    offset = 0
    for p in parts:
        pairs.extend((i + offset, j + offset) for i, j in p.relations())
        labels.extend(p.labels or [str(i + offset) for i in range(p.size)])
        offset += p.size
    return Poset.from_relations(total, pairs, labels)


def antichain(k: int) -> Poset:
    return Poset.from_relations(k, [], [f"x{i + 1}" for i in range(k)])


def chain(k: int) -> Poset:
    return Poset.from_relations(k, [(i, i + 1) for i in range(k - 1)], [f"c{i + 1}" for i in range(k)])


def vee(k: int) -> Poset:
    """Fork: b_1..b_k above a common bottom a. Labelled so that ``vee(k) == wedge(k).dual()``."""
    return Poset.from_relations(k + 1, [(k, i) for i in range(k)], [f"b{i + 1}" for i in range(k)] + ["a"])


def wedge(k: int) -> Poset:
    """Cherry: b_1..b_k below a common top c."""
    return Poset.from_relations(k + 1, [(i, k) for i in range(k)], [f"b{i + 1}" for i in range(k)] + ["c"])


def diamond(k: int) -> Poset:
    pairs = [(0, i) for i in range(1, k + 1)] + [(i, k + 1) for i in range(1, k + 1)]
    return Poset.from_relations(k + 2, pairs, ["a"] + [f"b{i + 1}" for i in range(k)] + ["c"])


def complete_bipartite(s: int, t: int) -> Poset:
    """K_{s,t}: s minimal elements, each below all t maximal ones."""
    pairs = [(i, s + j) for i in range(s) for j in range(t)]
    labels = [f"l{i + 1}" for i in range(s)] + [f"u{j + 1}" for j in range(t)]
    return Poset.from_relations(s + t, pairs, labels)


def canonical_form(p: Poset) -> tuple[int, ...]:
    """Lexicographically least relation rows over all relabellings (small posets only)."""
    from itertools import permutations

    best = None
    for perm in permutations(range(p.size)):
        rows = [0] * p.size
        for i in range(p.size):
            for j in _bits(p.up[i]):
                rows[perm[i]] |= 1 << perm[j]
        cand = tuple(rows)
        if best is None or cand < best:
            best = cand
    return best


def all_posets(size: int) -> list[Poset]:
    """Every poset on ``size`` elements up to isomorphism (``size`` at most 5).

    Each class is represented with a linear extension equal to the identity,
    which is enough because every poset has one.
    """
    if not 1 <= size <= 5:
        raise PosetError("enumeration is limited to sizes 1..5")
    pairs = [(i, j) for i in range(size) for j in range(i + 1, size)]
    seen = {}
    for mask in range(1 << len(pairs)):
        chosen = [pairs[b] for b in range(len(pairs)) if mask >> b & 1]
        p = Poset.from_relations(size, chosen)
        if len(p.relations()) != len(chosen):
            continue  # not transitively closed; its closure is enumerated separately
        seen.setdefault(canonical_form(p), p)
    return [seen[k] for k in sorted(seen)]


_NAMED = {
    "A": antichain,
    "C": chain,
    "V": vee,
    "W": wedge,
    "D": diamond,
}


def _split_top_level(body: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
            continue
        depth += ch == "["
        depth -= ch == "]"
        cur.append(ch)
    if cur:
        parts.append("".join(cur).strip())
    return [p for p in parts if p]


def make_named(name: str) -> Poset:
    """Parse a named poset: ``A_k``, ``C_k``, ``V_k``, ``W_k``, ``D_k``, ``K_s_t``,
    ``2C2``, ``mP`` for m disjoint copies of P, or ``union:[P,Q,...]``."""
    name = name.strip()
    if name.startswith("union:"):
        body = name[len("union:"):].strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise PosetError(f"malformed union: {name!r}")
        return disjoint_union([make_named(p) for p in _split_top_level(body[1:-1])])
    m = re.fullmatch(r"(\d+)\s*([A-Z].*)", name)
    if m:
        copies = int(m.group(1))
        if copies < 1:
            raise PosetError(f"bad multiplicity in {name!r}")
        inner = m.group(2)
        if re.fullmatch(r"[ACVWD]\d+", inner):
            inner = inner[0] + "_" + inner[1:]
        return disjoint_union([make_named(inner)] * copies)
    m = re.fullmatch(r"K_(\d+)_(\d+)", name)
    if m:
        s, t = int(m.group(1)), int(m.group(2))
        if s < 1 or t < 1:
            raise PosetError("K_s_t needs s, t >= 1")
        if s + t > MAX_POSET_SIZE:
            raise PosetError(f"{name} exceeds the {MAX_POSET_SIZE}-element cap")
        return complete_bipartite(s, t)
    m = re.fullmatch(r"([ACVWD])_?(\d+)", name)
    if not m:
        raise PosetError(f"unknown poset name {name!r}")
    kind, k = m.group(1), int(m.group(2))
    if k < 1:
        raise PosetError(f"{name}: parameter must be >= 1")
    size = {"A": k, "C": k, "V": k + 1, "W": k + 1, "D": k + 2}[kind]
    if size > MAX_POSET_SIZE:
        raise PosetError(f"{name} exceeds the {MAX_POSET_SIZE}-element cap")
    return _NAMED[kind](k)


def poset_from_json(data: dict) -> Poset:
    try:
        size = int(data["elements"])
        relations = [(int(i), int(j)) for i, j in data.get("relations", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise PosetError(f"malformed poset JSON: {exc}") from exc
    return Poset.from_relations(size, relations, data.get("labels"))


@dataclass(frozen=True)
class Component:
    elements: tuple[int, ...]

    @property
    def isolated_vertex(self) -> bool:
        return len(self.elements) == 1

    @property
    def isolated_c2(self) -> bool:
        return len(self.elements) == 2


@dataclass(frozen=True)
class Structure:
    height: int
    width: int
    minimal: tuple[int, ...]
    maximal: tuple[int, ...]
    lower_level: tuple[int, ...]
    upper_level: tuple[int, ...]
    components: tuple[Component, ...]


def comparability_components(p: Poset) -> list[Component]:
    seen = 0
    comps = []
    for start in range(p.size):
        if seen >> start & 1:
            continue
        comp = 1 << start
        frontier = comp
        while frontier:
            nxt = 0
            for i in _bits(frontier):
                nxt |= p.up[i] | p.down[i]
            frontier = nxt & ~comp
            comp |= nxt
        seen |= comp
        comps.append(Component(tuple(_bits(comp))))
    return comps


def structure(p: Poset) -> Structure:
    minimal = tuple(p.minimal_elements())
    return Structure(
        height=p.height,
        width=p.width,
        minimal=minimal,
        maximal=tuple(p.maximal_elements()),
        lower_level=minimal,
        upper_level=tuple(i for i in range(p.size) if i not in minimal),
        components=tuple(comparability_components(p)),
    )


def has_uctp(p: Poset, direction: str = "up") -> tuple[bool, list[int]]:
    """Unique cover twin property.

    For ``direction="up"``: every element with exactly one cover q must have a
    different element whose only cover is also q. ``"down"`` is the dual
    condition and ``"both"`` requires both. Returns the verdict and the
    elements that violate it.
    """
    if direction not in ("up", "down", "both"):
        raise ValueError(f"direction must be up, down or both, got {direction!r}")

    def violators(rows):
        unique = {i: row for i, row in enumerate(rows) if row and row & (row - 1) == 0}
        bad = []
        for i, q in unique.items():
            if not any(z != i and rz == q for z, rz in unique.items()):
                bad.append(i)
        return bad

    bad = set()
    if direction in ("up", "both"):
        bad.update(violators(p.covers))
    if direction in ("down", "both"):
        bad.update(violators(p.covered_by))
    return not bad, sorted(bad)
