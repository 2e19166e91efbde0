"""Verifiers for ordinary, projective, external and almost saturation.

Each verifier returns a :class:`SaturationReport`. Conditions are checked in
the order freeness, saturation, projection, and the first violation is
reported. For saturation that is the probe set with the least encoding, so
reports are deterministic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import permutations

from .copies import (
    STRONG,
    WEAK,
    Relations,
    embed,
    find_almost_strong_copy,
    find_copy,
    is_copy,
    is_almost_strong_copy,
)
from .family import (
    GroundError,
    GroundSpec,
    SetFamily,
    fmt,
    from_mask,
    full,
    interval,
    split_in_out,
    to_mask,
)
from .limits import MAX_INNER_DIM
from .poset import Poset, comparability_components

HOLDS = "holds"
FAILS = "fails"

STRICT = "strict"
RELAXED = "relaxed"


class PreconditionError(ValueError):
    pass


@dataclass
class SaturationReport:
    verdict: str
    notion: str
    violated: str | None = None
    witness: dict | None = None
    projection_rule: str | None = None
    anchor: tuple[int, ...] | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "notion": self.notion,
            "violated": self.violated,
            "witness": self.witness,
            "projection_rule": self.projection_rule,
        }
        if self.anchor is not None:
            out["anchor"] = list(self.anchor)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _check_n(n: int):
    if not 0 <= n <= MAX_INNER_DIM:
        raise GroundError(f"verification enumerates 2^n probe sets; n must be <= {MAX_INNER_DIM}, got {n}")


def _copy_witness(emb) -> dict:
    return {"kind": "copy", **emb.to_json()}


def _probe_witness(g: int) -> dict:
    return {"kind": "probe", "set": list(from_mask(g))}


def first_unsaturated(fam: SetFamily, pattern: Poset, probes, strong: bool = True) -> int | None:
    """Least probe set outside ``fam`` whose addition creates no copy.

    Assumes ``fam`` is P-free, so only copies through the probe are searched.
    """
    rel = Relations(fam.sets)
    members = set(fam.sets)
    pos = len(fam.sets)
    for g in probes:
        if g in members:
            continue
        if embed(rel.extended(g), pattern, strong, require=pos, first_only=True) is None:
            return g
    return None


def projection_collision(fam: SetFamily, n: int) -> tuple[int, int] | None:
    """Least pair of positions ``(i, j)`` whose sets agree on [n]."""
    inner = full(n)
    seen = {}
    best = None
    for j, s in enumerate(fam.sets):
        p = s & inner
        if p in seen:
            pair = (seen[p], j)
            if best is None or pair < best:
                best = pair
        else:
            seen[p] = j
    return best


def _collision_witness(fam, pair, n):
    i, j = pair
    return {
        "kind": "collision",
        "pair": [i, j],
        "sets": [list(from_mask(fam.sets[i])), list(from_mask(fam.sets[j]))],
        "projection": list(from_mask(fam.sets[i] & full(n))),
    }


def _free_and_saturated(fam, pattern, probes, mode, notion, rule=None, anchor=None):
    strong = mode == STRONG
    emb = find_copy(fam, pattern, mode)
    if emb is not None:
        return SaturationReport(FAILS, notion, "free", _copy_witness(emb), rule, anchor)
    g = first_unsaturated(fam, pattern, probes, strong)
    if g is not None:
        return SaturationReport(FAILS, notion, "saturating", _probe_witness(g), rule, anchor)
    return None


def verify_ordinary(fam: SetFamily, pattern: Poset, n: int | None = None, mode: str = STRONG) -> SaturationReport:
    n = fam.n if n is None else n
    _check_n(n)
    outside = [s for s in fam.sets if s & ~full(n)]
    if outside:
        raise GroundError(f"set {fmt(outside[0])} is not a subset of [{n}]")
    notion = "ordinary-" + mode
    bad = _free_and_saturated(fam, pattern, range(1 << n), mode, notion)
    return bad or SaturationReport(HOLDS, notion)


def verify_projective(fam: SetFamily, pattern: Poset, n: int | None = None) -> SaturationReport:
    n = fam.n if n is None else n
    _check_n(n)
    bad = _free_and_saturated(fam, pattern, range(1 << n), STRONG, "projective", STRICT)
    if bad:
        return bad
    pair = projection_collision(fam, n)
    if pair is not None:
        return SaturationReport(FAILS, "projective", "projection", _collision_witness(fam, pair, n), STRICT)
    return SaturationReport(HOLDS, "projective", projection_rule=STRICT)


def verify_relaxed_projective(fam: SetFamily, pattern: Poset, n: int | None = None) -> SaturationReport:
    n = fam.n if n is None else n
    _check_n(n)
    bad = _free_and_saturated(fam, pattern, range(1 << n), STRONG, "relaxed-projective", RELAXED)
    return bad or SaturationReport(HOLDS, "relaxed-projective", projection_rule=RELAXED)


def verify_external(fam: SetFamily, pattern: Poset, n: int | None = None, anchor=None,
                    projection_rule: str = RELAXED) -> SaturationReport:
    """External saturation against the probes ``A u B``, ``B`` in B_n.

    ``strict`` also demands injective projections onto [n]; ``relaxed`` only
    distinct sets. Under ``relaxed`` a projection collision is still noted.
    """
    n = fam.n if n is None else n
    _check_n(n)
    if anchor is None:
        anchor = fam.ground.anchor
    elif not isinstance(anchor, int):
        anchor = to_mask(anchor)
    if anchor & full(n):
        raise GroundError(f"anchor {fmt(anchor)} meets the inner ground [{n}]")
    if projection_rule not in (STRICT, RELAXED):
        raise ValueError(f"projection_rule must be strict or relaxed, got {projection_rule!r}")
    a = tuple(from_mask(anchor))
    probes = [anchor | b for b in range(1 << n)]
    bad = _free_and_saturated(fam, pattern, probes, STRONG, "external", projection_rule, a)
    if bad:
        return bad
    pair = projection_collision(fam, n)
    if pair is not None:
        if projection_rule == STRICT:
            return SaturationReport(FAILS, "external", "projection", _collision_witness(fam, pair, n),
                                    STRICT, a)
        i, j = pair
        note = (f"sets {fmt(fam.sets[i])} and {fmt(fam.sets[j])} share the projection "
                f"{fmt(fam.sets[i] & full(n))}; the strict rule would reject this family")
        return SaturationReport(HOLDS, "external", projection_rule=RELAXED, anchor=a, notes=[note])
    return SaturationReport(HOLDS, "external", projection_rule=projection_rule, anchor=a)


def _check_height_two(pattern: Poset):
    if pattern.height != 2:
        raise PreconditionError(f"pattern must have height 2, got {pattern.height}")
    if any(c.isolated_c2 for c in comparability_components(pattern)):
        raise PreconditionError("pattern has an isolated C_2 component")


def verify_almost_saturated(f1, f2, pattern: Poset, n: int) -> SaturationReport:
    """``f1``/``f2`` are the bottom/top level families (SetFamily or lists of masks)."""
    _check_height_two(pattern)
    _check_n(n)
    lower = list(f1.sets if isinstance(f1, SetFamily) else f1)
    upper = list(f2.sets if isinstance(f2, SetFamily) else f2)
    fam = SetFamily.with_levels(lower, upper, n, n)
    emb = find_copy(fam, pattern, STRONG)
    if emb is not None:
        return SaturationReport(FAILS, "almost", "free", _copy_witness(emb))
    for g in range(1 << n):
        if g in fam.sets:
            continue
        if find_almost_strong_copy(fam, g, pattern) is None:
            return SaturationReport(FAILS, "almost", "saturating", _probe_witness(g))
    return SaturationReport(HOLDS, "almost")


def revalidate(report: SaturationReport, fam: SetFamily, pattern: Poset, n: int | None = None) -> bool:
    """Independent pairwise re-check of a failing report's witness.

    Copies are re-checked element pair by element pair; a probe is re-checked
    by trying every injection of the pattern into family plus probe.
    """
    n = fam.n if n is None else n
    mode = WEAK if report.notion == "ordinary-weak" else STRONG
    w = report.witness
    if report.holds or w is None:
        return report.holds
    if w["kind"] == "copy":
        images = [to_mask(s) for s in w["images"]]
        return all(s in fam.sets for s in images) and is_copy(pattern, images, mode)
    if w["kind"] == "collision":
        a, b = (to_mask(s) for s in w["sets"])
        return a != b and a in fam.sets and b in fam.sets and a & full(n) == b & full(n)
    if w["kind"] == "probe":
        g = to_mask(w["set"])
        if g in fam.sets:
            return False
        if report.notion == "almost":
            return _brute_no_almost_copy(fam, g, pattern)
        host = list(fam.sets)
        for others in permutations(host, pattern.size - 1):
            for slot in range(pattern.size):
                images = list(others[:slot]) + [g] + list(others[slot:])
                if is_copy(pattern, images, mode):
                    return False
        return True
    return False


def _brute_no_almost_copy(fam, g, pattern):
    tag = dict(zip(fam.sets, fam.levels))
    lower = [e for e in range(pattern.size) if not pattern.down[e]]
    for others in permutations(fam.sets, pattern.size - 1):
        for slot in range(pattern.size):
            images = list(others[:slot]) + [g] + list(others[slot:])
            levels = [tag.get(s, 0) for s in images]
            g_level = 1 if slot in lower else 2
            if is_almost_strong_copy(pattern, images, g, g_level, levels):
                return False
    return True


def vee_structure_checks(fam: SetFamily, n: int | None = None) -> dict:
    """The two structural facts every projective V_k-saturated family satisfies.

    ``claim_inandout``: no inner set is contained in an outer set.
    ``claim_n``: the full inner ground [n] is a member.
    """
    n = fam.n if n is None else n
    fam_n = fam.rebase(n=n) if n != fam.n else fam
    ins, outs = split_in_out(fam_n)
    pair = next(((a, b) for a in ins.sets for b in outs.sets if a & ~b == 0), None)
    inandout = {"passes": pair is None}
    if pair is not None:
        inandout["witness"] = [list(from_mask(pair[0])), list(from_mask(pair[1]))]
    has_full = full(n) in fam.sets
    claim_n = {"passes": has_full}
    if not has_full:
        claim_n["witness"] = list(range(1, n + 1))
    return {"claim_inandout": inandout, "claim_n": claim_n}


def dichotomy_scan(fam: SetFamily, n: int | None = None) -> list[int]:
    """Coordinates i in [n] with no two members F, F' such that F minus F' is {i}."""
    n = fam.n if n is None else n
    hit = 0
    for a in fam.sets:
        for b in fam.sets:
            d = a & ~b
            if d and d & (d - 1) == 0:
                hit |= d
    return [i for i in range(1, n + 1) if not hit >> (i - 1) & 1]


class BlowUpWarning(UserWarning):
    pass


def _swap(mask: int, i: int, j: int) -> int:
    bi = mask >> (i - 1) & 1
    bj = mask >> (j - 1) & 1
    if bi != bj:
        mask ^= (1 << (i - 1)) | (1 << (j - 1))
    return mask


def blow_up(fam: SetFamily, n0: int, n: int, free_coordinate: int | None = None) -> SetFamily:
    """Blow coordinate ``n0`` up into the interval [n0, n].

    Coordinates above ``n0`` (the family's external ones) move up by ``n - n0``.
    A set containing ``n0`` gains all of [n0+1, n]; other sets are unchanged.
    If ``free_coordinate`` is given it is first swapped with ``n0``. A warning
    is issued when ``n0`` is not free in the dichotomy sense, since saturation
    is then not guaranteed to carry over.
    """
    if n < n0:
        raise ValueError(f"target dimension {n} is below n0={n0}")
    if n0 < 1:
        raise ValueError("n0 must be >= 1")
    sets = list(fam.sets)
    if free_coordinate is not None and free_coordinate != n0:
        if not 1 <= free_coordinate <= n0:
            raise ValueError(f"free coordinate {free_coordinate} outside [1, {n0}]")
        sets = [_swap(s, free_coordinate, n0) for s in sets]
    shift = n - n0
    low = full(n0)
    block = interval(n0 + 1, n)
    out = []
    for s in sets:
        t = (s & low) | ((s & ~low) << shift)
        if s >> (n0 - 1) & 1:
            t |= block
        out.append(t)
    anchor = (fam.ground.anchor & ~low) << shift
    result = SetFamily(GroundSpec(n, fam.N + shift, anchor), tuple(sorted(out)))
    probe = SetFamily(GroundSpec(n0, fam.N), tuple(sorted(sets)))
    if n0 not in dichotomy_scan(probe, n0):
        warnings.warn(f"coordinate {n0} is not free; the blow-up may lose saturation", BlowUpWarning)
    return result
