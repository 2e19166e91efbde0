"""Minimum chain partitions of finite strict orders (Dilworth via matching)."""

from __future__ import annotations


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def min_chain_cover(up: list[int] | tuple[int, ...]) -> list[list[int]]:
    """Partition elements ``0..len(up)-1`` into the fewest chains.

    ``up[i]`` is the bitmask of elements strictly above ``i``; it must be
    transitively closed. Each chain is listed bottom to top. The result is
    deterministic: augmenting paths are explored in index order.
    """
    size = len(up)
    match_right = [-1] * size  # match_right[j] = i means i -> j is in the matching

    def augment(i: int, seen: list[bool]) -> bool:
        for j in _bits(up[i]):
            if seen[j]:
                continue
            seen[j] = True
            if match_right[j] < 0 or augment(match_right[j], seen):
                match_right[j] = i
                return True
        return False

    for i in range(size):
        augment(i, [False] * size)

    successor = [-1] * size
    for j, i in enumerate(match_right):
        if i >= 0:
            successor[i] = j

    chains = []
    for start in range(size):
        if match_right[start] >= 0:
            continue
        chain = [start]
        while successor[chain[-1]] >= 0:
            chain.append(successor[chain[-1]])
        chains.append(chain)
    return chains


def width(up: list[int] | tuple[int, ...]) -> int:
    return len(min_chain_cover(up))
