"""Subsets of [N] as bitmasks, families of them, and the inner/outer split.

Element ``i`` (1-based) of the universe is bit ``i - 1``, so the integer
encoding of a set orders families canonically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .limits import MAX_INNER_DIM, MAX_ORDER_EXPORT, MAX_UNIVERSE
from .poset import Poset


class GroundError(ValueError):
    pass


def to_mask(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        if e < 1:
            raise GroundError(f"set elements are 1-based, got {e}")
        mask |= 1 << (e - 1)
    return mask


def from_mask(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def interval(lo: int, hi: int) -> int:
    """Mask of the integer interval [lo, hi] (empty when hi < lo)."""
    if hi < lo:
        return 0
    return ((1 << (hi - lo + 1)) - 1) << (lo - 1)


def full(n: int) -> int:
    return (1 << n) - 1


def fmt(mask: int) -> str:
    return "{" + ",".join(map(str, from_mask(mask))) + "}"


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def proper_subset(a: int, b: int) -> bool:
    return a != b and a & ~b == 0


@dataclass(frozen=True)
class GroundSpec:
    n: int
    N: int
    anchor: int = 0

    def __post_init__(self):
        if not 0 <= self.n <= MAX_INNER_DIM:
            raise GroundError(f"inner dimension n must be in 0..{MAX_INNER_DIM}, got {self.n}")
        if not self.n <= self.N <= MAX_UNIVERSE:
            raise GroundError(f"total dimension N must be in n..{MAX_UNIVERSE}, got {self.N}")
        if self.anchor & full(self.n):
            raise GroundError("anchor meets the inner ground [n]")
        if self.anchor & ~full(self.N):
            raise GroundError("anchor leaves the universe [N]")

    @property
    def inner(self) -> int:
        return full(self.n)

    @property
    def universe(self) -> int:
        return full(self.N)

    def projection(self, s: int) -> int:
        return s & self.inner

    def anchored(self):
        """The probe sets A u B for B in B_n, in increasing order of B."""
        return [self.anchor | b for b in range(1 << self.n)]


@dataclass(frozen=True)
class SetFamily:
    ground: GroundSpec
    sets: tuple[int, ...]
    levels: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if list(self.sets) != sorted(set(self.sets)):
            raise GroundError("family sets must be distinct and canonically sorted; use SetFamily.of")
        outside = [s for s in self.sets if s & ~self.ground.universe]
        if outside:
            raise GroundError(f"set {fmt(outside[0])} leaves the universe [{self.ground.N}]")
        if self.levels is not None and len(self.levels) != len(self.sets):
            raise GroundError("levels do not match the sets")

    @classmethod
    def of(cls, sets, n: int, N: int | None = None, anchor=0) -> "SetFamily":
        """Build from masks or iterables of 1-based elements; sorts, rejects duplicates."""
        masks = [s if isinstance(s, int) else to_mask(s) for s in sets]
        if len(set(masks)) != len(masks):
            raise GroundError("family contains a repeated set")
        if not isinstance(anchor, int):
            anchor = to_mask(anchor)
        if N is None:
            top = max([m.bit_length() for m in masks] + [anchor.bit_length(), n])
            N = top
        return cls(GroundSpec(n, N, anchor), tuple(sorted(masks)))

    @classmethod
    def with_levels(cls, lower, upper, n: int, N: int | None = None) -> "SetFamily":
        """A two-level family; ``levels[i]`` is 1 or 2 for each sorted set."""
        lower = [s if isinstance(s, int) else to_mask(s) for s in lower]
        upper = [s if isinstance(s, int) else to_mask(s) for s in upper]
        fam = cls.of(lower + upper, n, N)
        tag = {s: 1 for s in lower}
        tag.update({s: 2 for s in upper})
        return cls(fam.ground, fam.sets, tuple(tag[s] for s in fam.sets))

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __contains__(self, s: int):
        return s in set(self.sets)

    @property
    def n(self) -> int:
        return self.ground.n

    @property
    def N(self) -> int:
        return self.ground.N

    def level(self, k: int) -> list[int]:
        if self.levels is None:
            raise GroundError("family carries no level tags")
        return [s for s, lv in zip(self.sets, self.levels) if lv == k]

    def as_lists(self) -> list[list[int]]:
        return [list(from_mask(s)) for s in self.sets]

    def rebase(self, n: int | None = None, N: int | None = None, anchor: int | None = None) -> "SetFamily":
        ground = GroundSpec(
            self.n if n is None else n,
            self.N if N is None else N,
            self.ground.anchor if anchor is None else anchor,
        )
        return SetFamily(ground, self.sets, self.levels)

    def __str__(self):
        return "{" + ", ".join(fmt(s) for s in self.sets) + "}"


def projection(s: int, ground: GroundSpec | int) -> int:
    n = ground.n if isinstance(ground, GroundSpec) else ground
    return s & full(n)


def split_in_out(fam: SetFamily) -> tuple[SetFamily, SetFamily]:
    inner = fam.ground.inner
    ins = tuple(s for s in fam.sets if not s & ~inner)
    outs = tuple(s for s in fam.sets if s & ~inner)
    return SetFamily(fam.ground, ins), SetFamily(fam.ground, outs)


def complement_family(fam: SetFamily, anchor: int | None = None) -> SetFamily:
    """Replace each set by its complement in [N].

    The anchor becomes [N] minus ([n] u A), which is what turns an external
    saturated family for AB_n into one for the dual pattern.
    """
    u = fam.ground.universe
    if anchor is None:
        anchor = complement_anchor(fam.ground, fam.ground.anchor)
    return SetFamily(GroundSpec(fam.n, fam.N, anchor), tuple(sorted(u & ~s for s in fam.sets)))


def complement_anchor(ground: GroundSpec, anchor: int) -> int:
    return ground.universe & ~ground.inner & ~anchor


def translate(fam, shift: int, ground: GroundSpec | None = None):
    """Union every set with ``shift``. Accepts a SetFamily or a single mask."""
    if isinstance(fam, int):
        if ground is not None and (fam | shift) & ~ground.universe:
            raise GroundError("translation leaves the universe")
        return fam | shift
    if shift & ~fam.ground.universe:
        raise GroundError(f"shift {fmt(shift)} leaves the universe [{fam.N}]")
    moved = [s | shift for s in fam.sets]
    if len(set(moved)) != len(moved):
        raise GroundError("translation merges two sets")
    return SetFamily(fam.ground, tuple(sorted(moved)))


def containment_order(fam: SetFamily) -> Poset:
    if len(fam) > MAX_ORDER_EXPORT:
        raise GroundError(f"family has {len(fam)} sets; poset export caps at {MAX_ORDER_EXPORT}")
    sets = fam.sets
    pairs = [(i, j) for i, a in enumerate(sets) for j, b in enumerate(sets) if proper_subset(a, b)]
    return Poset.from_relations(len(sets), pairs, [fmt(s) for s in sets])


def up_masks(sets) -> list[int]:
    """Strict-superset bitmask per member, indexed by position in ``sets``."""
    rows = []
    for a in sets:
        row = 0
        for j, b in enumerate(sets):
            if a != b and a & ~b == 0:
                row |= 1 << j
        rows.append(row)
    return rows


def boolean_lattice(n: int, N: int | None = None) -> SetFamily:
    return SetFamily(GroundSpec(n, n if N is None else N), tuple(range(1 << n)))


def family_from_json(data: dict) -> SetFamily:
    try:
        n = int(data["n"])
        sets = [[int(e) for e in s] for s in data["sets"]]
        N = int(data["N"]) if "N" in data else None
        anchor = to_mask(int(a) for a in data.get("A", []) or [])
    except (KeyError, TypeError, ValueError) as exc:
        raise GroundError(f"malformed family JSON: {exc}") from exc
    levels = data.get("levels")
    fam = SetFamily.of(sets, n, N, anchor)
    if levels is not None:
        tag = {to_mask(s): int(lv) for s, lv in zip(sets, levels)}
        fam = SetFamily(fam.ground, fam.sets, tuple(tag[s] for s in fam.sets))
    return fam


def family_to_json(fam: SetFamily) -> dict:
    out = {"n": fam.n, "N": fam.N}
    if fam.ground.anchor:
        out["A"] = list(from_mask(fam.ground.anchor))
    out["sets"] = fam.as_lists()
    if fam.levels is not None:
        out["levels"] = list(fam.levels)
    return out
