"""Weak, strong and almost-strong copies of a pattern poset inside a family of sets.

Search is a backtracking match of pattern elements to family members. Members
are addressed by position; candidate sets are bitmasks over positions, so each
pattern relation costs one AND with a precomputed containment row.

Determinism: pattern elements are visited in a fixed order (``search_order``)
and candidates in increasing member position, so the embedding returned is the
lexicographically least one when its member positions are listed in that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .chains import min_chain_cover
from .family import SetFamily, proper_subset
from .poset import Poset

WEAK = "weak"
STRONG = "strong"
ALMOST = "almost-strong"

_BELOW, _ABOVE, _INCOMP = 0, 1, 2


class NotFreeError(ValueError):
    """Raised when a shortcut that assumes a P-free family is handed a family with a copy."""

    def __init__(self, message, embedding):
        super().__init__(message)
        self.embedding = embedding


def _check_mode(mode):
    if mode not in (WEAK, STRONG):
        raise ValueError(f"mode must be 'weak' or 'strong', got {mode!r}")


@dataclass(frozen=True)
class Embedding:
    """``members[e]`` is the host position of pattern element ``e``; ``images[e]`` its set."""

    members: tuple[int, ...]
    images: tuple[int, ...]
    mode: str

    def to_json(self) -> dict:
        from .family import from_mask

        return {
            "mode": self.mode,
            "members": list(self.members),
            "images": [list(from_mask(s)) for s in self.images],
        }


def is_copy(pattern: Poset, images, mode: str = STRONG) -> bool:
    """Pairwise check that ``images`` (one set per pattern element) form a copy."""
    if len(images) != pattern.size or len(set(images)) != len(images):
        return False
    for i in range(pattern.size):
        for j in range(pattern.size):
            if i == j:
                continue
            below = proper_subset(images[i], images[j])
            if pattern.lt(i, j) and not below:
                return False
            if mode == STRONG and below and not pattern.lt(i, j):
                return False
    return True


class Relations:
    """Strict containment between host members, as bitmask rows over positions."""

    __slots__ = ("sets", "sub", "sup")

    def __init__(self, sets, sub=None, sup=None):
        self.sets = list(sets)
        if sub is None:
            m = len(self.sets)
            sub = [0] * m
            sup = [0] * m
            for i, a in enumerate(self.sets):
                for j in range(i + 1, m):
                    b = self.sets[j]
                    if a & ~b == 0:
                        sub[j] |= 1 << i
                        sup[i] |= 1 << j
                    elif b & ~a == 0:
                        sub[i] |= 1 << j
                        sup[j] |= 1 << i
        self.sub = sub
        self.sup = sup

    def extended(self, g: int) -> "Relations":
        k = len(self.sets)
        bit = 1 << k
        sub = list(self.sub)
        sup = list(self.sup)
        g_sub = g_sup = 0
        for i, a in enumerate(self.sets):
            if a & ~g == 0:
                g_sub |= 1 << i
                sup[i] |= bit
            elif g & ~a == 0:
                g_sup |= 1 << i
                sub[i] |= bit
        sub.append(g_sub)
        sup.append(g_sup)
        return Relations(self.sets + [g], sub, sup)

    def __len__(self):
        return len(self.sets)


def _popcount(x: int) -> int:
    return bin(x).count("1")


@lru_cache(maxsize=None)
def search_order(pattern: Poset) -> tuple[int, ...]:
    """Most-constrained-first visiting order.

    Start from the element comparable to the most others; then repeatedly take
    the element with the most relations into the already placed ones, breaking
    ties by total comparability degree and then by index.
    """
    k = pattern.size
    degree = [_popcount(pattern.up[i] | pattern.down[i]) for i in range(k)]
    placed = 0
    order = []
    for _ in range(k):
        best = None
        for e in range(k):
            if placed >> e & 1:
                continue
            key = (_popcount((pattern.up[e] | pattern.down[e]) & placed), degree[e], -e)
            if best is None or key > best[0]:
                best = (key, e)
        order.append(best[1])
        placed |= 1 << best[1]
    return tuple(order)


@lru_cache(maxsize=None)
def _plan(pattern: Poset, strong: bool, first: int | None):
    """Visiting order plus, per step, the constraints against earlier steps.

    ``first`` moves that step of the base order to the front (used when one
    member is forced); the relative order of the rest is unchanged.
    """
    base = search_order(pattern)
    if first is None:
        order = base
    else:
        order = (base[first],) + base[:first] + base[first + 1:]
    cons = []
    for t, e in enumerate(order):
        row = []
        for s in range(t):
            f = order[s]
            if pattern.lt(e, f):
                row.append((s, _BELOW))
            elif pattern.lt(f, e):
                row.append((s, _ABOVE))
            elif strong:
                row.append((s, _INCOMP))
        cons.append(tuple(row))
    npred = tuple(_popcount(pattern.down[e]) for e in order)
    nsucc = tuple(_popcount(pattern.up[e]) for e in order)
    return order, tuple(cons), npred, nsucc


def _domains(rel: Relations, npred, nsucc):
    # a pattern element with r elements below it needs a member with >= r strict subsets
    cnt_sub = [_popcount(x) for x in rel.sub]
    cnt_sup = [_popcount(x) for x in rel.sup]
    out = []
    for r, u in zip(npred, nsucc):
        mask = 0
        for m in range(len(rel.sets)):
            if cnt_sub[m] >= r and cnt_sup[m] >= u:
                mask |= 1 << m
        out.append(mask)
    return out


def _dfs(cons, domains, rel: Relations, used: int = 0):
    """First assignment (tuple of positions, in visiting order) or None."""
    k = len(cons)
    sub, sup = rel.sub, rel.sup
    assign = [0] * k

    def rec(t, used):
        cand = domains[t] & ~used
        for s, code in cons[t]:
            m = assign[s]
            if code == _BELOW:
                cand &= sub[m]
            elif code == _ABOVE:
                cand &= sup[m]
            elif code == _INCOMP:
                cand &= ~(sub[m] | sup[m])
            else:
                continue
            if not cand:
                return False
        while cand:
            low = cand & -cand
            assign[t] = low.bit_length() - 1
            if t + 1 == k or rec(t + 1, used | low):
                return True
            cand ^= low
        return False

    if k == 0:
        return ()
    return tuple(assign) if rec(0, used) else None


def _to_members(order, assign, k):
    members = [0] * k
    for e, m in zip(order, assign):
        members[e] = m
    return members


def _base_key(pattern, members):
    return tuple(members[e] for e in search_order(pattern))


def embed(rel: Relations, pattern: Poset, strong: bool = True, require: int | None = None,
          first_only: bool = False):
    """Member positions per pattern element, or None.

    With ``require`` the copy must use that member; the least such embedding is
    found by forcing the member into each step in turn. ``first_only`` returns
    the first hit instead of the least, for callers that only need existence.
    """
    k = pattern.size
    if k > len(rel.sets):
        return None
    if require is None:
        order, cons, npred, nsucc = _plan(pattern, strong, None)
        assign = _dfs(cons, _domains(rel, npred, nsucc), rel)
        return None if assign is None else _to_members(order, assign, k)
    best = None
    bit = 1 << require
    for t in range(k):
        order, cons, npred, nsucc = _plan(pattern, strong, t)
        doms = _domains(rel, npred, nsucc)
        if not doms[0] & bit:
            continue
        doms[0] = bit
        assign = _dfs(cons, doms, rel, used=0)
        if assign is None:
            continue
        members = _to_members(order, assign, k)
        if first_only:
            return members
        if best is None or _base_key(pattern, members) < _base_key(pattern, best):
            best = members
    return best


def _antichain_free(sets, k: int) -> bool:
    """Dilworth: no antichain of size k iff the sets split into fewer than k chains."""
    rel = Relations(sets)
    return len(min_chain_cover(rel.sup)) < k


def contains_copy(sets, pattern: Poset, mode: str = STRONG) -> bool:
    """Existence only. Antichain patterns go through a chain partition."""
    sets = list(sets)
    if pattern.is_antichain():
        if mode == WEAK:
            return len(sets) >= pattern.size
        return not _antichain_free(sets, pattern.size)
    return embed(Relations(sets), pattern, mode == STRONG) is not None


def _wrap(rel, members, mode):
    return Embedding(tuple(members), tuple(rel.sets[m] for m in members), mode)


def find_strong_copy(fam: SetFamily, pattern: Poset, require: int | None = None) -> Embedding | None:
    rel = Relations(fam.sets)
    members = embed(rel, pattern, True, require)
    return None if members is None else _wrap(rel, members, STRONG)


def find_weak_copy(fam: SetFamily, pattern: Poset, require: int | None = None) -> Embedding | None:
    rel = Relations(fam.sets)
    members = embed(rel, pattern, False, require)
    return None if members is None else _wrap(rel, members, WEAK)


def find_copy(fam: SetFamily, pattern: Poset, mode: str = STRONG, require: int | None = None):
    _check_mode(mode)
    return (find_strong_copy if mode == STRONG else find_weak_copy)(fam, pattern, require)


def creates_copy(fam: SetFamily, g: int, pattern: Poset, mode: str = STRONG,
                 check_free: bool = True) -> Embedding | None:
    """A copy in ``fam + {g}`` that uses ``g``; ``g`` sits at position ``len(fam)``.

    Only copies through ``g`` are searched, which is complete only when ``fam``
    itself is P-free; that is checked unless ``check_free`` is False.
    """
    _check_mode(mode)
    if g in fam.sets:
        raise ValueError("g is already a member of the family")
    strong = mode == STRONG
    rel = Relations(fam.sets)
    if check_free:
        inside = embed(rel, pattern, strong)
        if inside is not None:
            raise NotFreeError("family already contains a copy; the shortcut would be unsound",
                               _wrap(rel, inside, mode))
    rel = rel.extended(g)
    members = embed(rel, pattern, strong, require=len(fam.sets))
    return None if members is None else _wrap(rel, members, mode)


def _height_two_levels(pattern: Poset):
    if pattern.height != 2:
        raise ValueError(f"almost-strong copies need a height-2 pattern, got height {pattern.height}")
    lower = [e for e in range(pattern.size) if not pattern.down[e]]
    return lower, [e for e in range(pattern.size) if pattern.down[e]]


def find_almost_strong_copy(fam: SetFamily, g: int, pattern: Poset):
    """Weak copy through ``g`` that is exact except between ``g`` and same-level members.

    ``fam`` must carry level tags. Bottom-level pattern elements go to members
    tagged 1 and top-level ones to members tagged 2, as the two-level lift
    needs. Returns ``(embedding, level_of_g)`` or None; level 1 is tried first.
    """
    lower, upper = _height_two_levels(pattern)
    if fam.levels is None:
        raise ValueError("family must carry level tags (1 or 2)")
    if g in fam.sets:
        raise ValueError("g is already a member of the family")
    rel = Relations(fam.sets).extended(g)
    gpos = len(fam.sets)
    lvl_mask = {1: 0, 2: 0}
    for pos, lv in enumerate(fam.levels):
        lvl_mask[lv] |= 1 << pos
    level_of = {e: 1 for e in lower}
    level_of.update({e: 2 for e in upper})
    base = search_order(pattern)

    best = None
    for g_level in (1, 2):
        for g_elem in (lower if g_level == 1 else upper):
            order = (g_elem,) + tuple(e for e in base if e != g_elem)
            cons = []
            for t, e in enumerate(order):
                row = []
                for s in range(t):
                    f = order[s]
                    if s == 0 and level_of[e] == g_level:
                        continue  # g versus a same-level member: unconstrained
                    if pattern.lt(e, f):
                        row.append((s, _BELOW))
                    elif pattern.lt(f, e):
                        row.append((s, _ABOVE))
                    else:
                        row.append((s, _INCOMP))
                cons.append(tuple(row))
            doms = [1 << gpos] + [lvl_mask[level_of[e]] for e in order[1:]]
            assign = _dfs(tuple(cons), doms, rel)
            if assign is None:
                continue
            members = _to_members(order, assign, pattern.size)
            key = _base_key(pattern, members)
            if best is None or key < best[0]:
                best = (key, members)
        if best is not None:
            return _wrap(rel, best[1], ALMOST), g_level
    return None


def is_almost_strong_copy(pattern: Poset, images, g: int, g_level: int, levels_of_images) -> bool:
    """Pairwise oracle for ``find_almost_strong_copy`` results."""
    lower, upper = _height_two_levels(pattern)
    level_of = {e: 1 for e in lower}
    level_of.update({e: 2 for e in upper})
    if g not in images or len(set(images)) != len(images):
        return False
    ge = images.index(g)
    if level_of[ge] != g_level:
        return False
    for e in range(pattern.size):
        if e != ge and levels_of_images[e] != level_of[e]:
            return False
    for i in range(pattern.size):
        for j in range(pattern.size):
            if i == j:
                continue
            below = proper_subset(images[i], images[j])
            if pattern.lt(i, j) and not below:
                return False
            loose = ge in (i, j) and level_of[i] == level_of[j]
            if below and not pattern.lt(i, j) and not loose:
                return False
    return True
