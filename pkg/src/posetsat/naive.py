"""Brute-force reference for the exact search: no pruning, no symmetry breaking.

Copies are found by trying every injection of the pattern; families are tried
in order of size and then lexicographically. Only usable for tiny n.
"""

from __future__ import annotations

from itertools import combinations, permutations

from .poset import Poset


def _sub(a: int, b: int) -> bool:
    return a != b and a | b == b


def _is_copy(pattern: Poset, images, strong: bool) -> bool:
    k = pattern.size
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            rel = pattern.lt(i, j)
            inc = _sub(images[i], images[j])
            if rel and not inc:
                return False
            if strong and inc and not rel:
                return False
    return True


def has_copy(sets, pattern: Poset, strong: bool = True) -> bool:
    return any(_is_copy(pattern, images, strong) for images in permutations(sets, pattern.size))


def creates(sets, g: int, pattern: Poset, strong: bool = True) -> bool:
    return has_copy(list(sets) + [g], pattern, strong)


def is_saturated(sets, pattern: Poset, probes, strong: bool = True) -> bool:
    if has_copy(sets, pattern, strong):
        return False
    return all(creates(sets, g, pattern, strong) for g in probes if g not in sets)


def naive_minimum(notion: str, n: int, pattern: Poset, external_cap: int = 0,
                  projection_rule: str = "strict"):
    """``(value, sets, anchor)`` for the least valid family, or ``(None, None, None)``."""
    strong = notion != "sat"
    ext = 0 if notion in ("sat", "sat-star") else external_cap
    injective = notion in ("sat", "sat-star", "projective") or (notion == "external" and projection_rule == "strict")
    anchors = [a << n for a in range(1 << ext)] if notion == "external" else [0]
    universe = range(1 << (n + ext))
    inner = (1 << n) - 1
    for size in range(0, len(universe) + 1):
        for fam in combinations(universe, size):
            if injective and len({s & inner for s in fam}) != size:
                continue
            for anchor in anchors:
                probes = [anchor | b for b in range(1 << n)]
                if is_saturated(fam, pattern, probes, strong):
                    return size, fam, anchor
    return None, None, None
