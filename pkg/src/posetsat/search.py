"""Exact minimum saturated families by iterative deepening.

For each target size m (starting from the forced lower bound) families are
grown by adding sets in increasing encoding, so they are visited in
lexicographic order and the first valid one is the least witness. Freeness is
maintained incrementally (P-freeness is inherited by subfamilies), projection
injectivity likewise; saturation is only tested on complete families.

With external coordinates, families that are not the least member of their
orbit under permutations of the external coordinates are skipped. The least
valid family is always orbit-least, so this changes nothing but the work.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

from .chains import min_chain_cover
from .copies import Relations, embed
from .family import GroundSpec, SetFamily, family_to_json, from_mask, full
from .limits import MAX_CHAIN_FAMILY, MAX_EXTERNAL_CAP, MAX_SEARCH_DIM
from .poset import Poset

SAT = "sat"
SAT_STAR = "sat-star"
PROJECTIVE = "projective"
EXTERNAL = "external"
RELAXED_PROJECTIVE = "relaxed"

NOTIONS = (SAT, SAT_STAR, PROJECTIVE, EXTERNAL, RELAXED_PROJECTIVE)


class SearchCapError(ValueError):
    """Raised when a search is refused or abandoned because of a cap."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats or {}


@dataclass
class SearchOutcome:
    notion: str
    n: int
    pattern: str
    value: int | None
    witness: SetFamily | None
    anchor: tuple[int, ...] | None
    stats: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    @property
    def exceeded(self) -> bool:
        return self.value is None

    def witness_hash(self) -> str:
        if self.witness is None:
            return ""
        return family_hash(self.witness)

    def to_json(self) -> dict:
        return {
            "notion": self.notion,
            "n": self.n,
            "pattern": json.loads(self.pattern),
            "value": self.value,
            "witness": None if self.witness is None else family_to_json(self.witness),
            "anchor": None if self.anchor is None else list(self.anchor),
            "witness_hash": self.witness_hash(),
            "stats": self.stats,
            "config": self.config,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SearchOutcome":
        from .family import family_from_json

        return cls(
            notion=data["notion"],
            n=data["n"],
            pattern=json.dumps(data["pattern"], sort_keys=True, separators=(",", ":")),
            value=data["value"],
            witness=None if data["witness"] is None else family_from_json(data["witness"]),
            anchor=None if data["anchor"] is None else tuple(data["anchor"]),
            stats=data.get("stats", {}),
            config=data.get("config", {}),
        )


def family_hash(fam: SetFamily) -> str:
    blob = json.dumps(family_to_json(fam), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class _Problem:
    n: int
    pattern: Poset
    strong: bool
    ext: int
    injective: bool
    anchors: tuple[int, ...]

    @property
    def universe_size(self) -> int:
        return 1 << (self.n + self.ext)

    @property
    def probes_per_anchor(self) -> int:
        return 1 << self.n


@lru_cache(maxsize=16)
def _perm_tables(n: int, ext: int) -> tuple[tuple[int, ...], ...]:
    """For each non-identity permutation of the external coordinates, the image of every mask."""
    if ext < 2:
        return ()
    size = 1 << (n + ext)
    inner = full(n)
    tables = []
    for perm in permutations(range(ext)):
        if perm == tuple(range(ext)):
            continue
        table = []
        for mask in range(size):
            out = mask & inner
            for i, j in enumerate(perm):
                if mask >> (n + i) & 1:
                    out |= 1 << (n + j)
            table.append(out)
        tables.append(tuple(table))
    return tuple(tables)


def _new_stats():
    return {
        "nodes": 0,
        "leaves": 0,
        "prunes": {"not_free": 0, "projection": 0, "symmetry": 0, "not_saturated": 0},
    }


def _merge_stats(into, other):
    into["nodes"] += other["nodes"]
    into["leaves"] += other["leaves"]
    for key, val in other["prunes"].items():
        into["prunes"][key] += val


def _saturates(prob: _Problem, rel: Relations, members: set, anchor: int, recent: list) -> bool:
    pos = len(rel.sets)
    pattern, strong = prob.pattern, prob.strong
    # probes that broke recent leaves are tried first; order does not affect the verdict
    for b in recent:
        g = anchor | b
        if g not in members and embed(rel.extended(g), pattern, strong, pos, first_only=True) is None:
            return False
    for b in range(prob.probes_per_anchor):
        g = anchor | b
        if g in members:
            continue
        if embed(rel.extended(g), pattern, strong, pos, first_only=True) is None:
            if b not in recent:
                recent.insert(0, b)
                del recent[4:]
            return False
    return True


def _search_branch(prob: _Problem, size: int, first: int, node_limit: int | None = None):
    """Least valid family of ``size`` sets whose least set is ``first``.

    Returns ``(sets, anchor)`` or None, plus the branch statistics.
    """
    stats = _new_stats()
    U = prob.universe_size
    inner = full(prob.n)
    tables = _perm_tables(prob.n, prob.ext) if prob.ext >= 2 else ()
    pattern, strong = prob.pattern, prob.strong
    recent: list[int] = []
    chosen: list[int] = []
    found = None

    def leaf(rel):
        nonlocal found
        stats["leaves"] += 1
        key = tuple(chosen)
        for table in tables:
            if tuple(sorted(table[s] for s in key)) < key:
                stats["prunes"]["symmetry"] += 1
                return False
        members = set(key)
        for anchor in prob.anchors:
            if _saturates(prob, rel, members, anchor, recent):
                found = (key, anchor)
                return True
        stats["prunes"]["not_saturated"] += 1
        return False

    def add(x, rel, used):
        stats["nodes"] += 1
        if node_limit is not None and stats["nodes"] > node_limit:
            raise SearchCapError(f"node limit {node_limit} exceeded", stats)
        if prob.injective and (x & inner) in used:
            stats["prunes"]["projection"] += 1
            return None
        rel2 = rel.extended(x)
        if embed(rel2, pattern, strong, len(chosen), first_only=True) is not None:
            stats["prunes"]["not_free"] += 1
            return None
        return rel2

    def rec(start, rel, used):
        if len(chosen) == size:
            return leaf(rel)
        need = size - len(chosen)
        for idx in range(start, U - need + 1):
            rel2 = add(idx, rel, used)
            if rel2 is None:
                continue
            chosen.append(idx)
            ok = rec(idx + 1, rel2, used | {idx & inner})
            chosen.pop()
            if ok:
                return True
        return False

    if size == 0:
        leaf(Relations([]))
    else:
        rel = add(first, Relations([]), frozenset())
        if rel is not None:
            chosen.append(first)
            rec(first + 1, rel, frozenset({first & inner}))
    return found, stats


def _branch_job(args):
    prob, size, first, node_limit = args
    return _search_branch(prob, size, first, node_limit)


def _run(prob: _Problem, notion: str, start: int, max_size: int, threads: int = 1,
         node_limit: int | None = None, extra_config: dict | None = None) -> SearchOutcome:
    t0 = time.perf_counter()
    stats = _new_stats()
    completed = []
    result = None
    pool = ProcessPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for size in range(start, max_size + 1):
            firsts = [0] if size == 0 else range(prob.universe_size - size + 1)
            if pool is None:
                for first in firsts:
                    try:
                        found, bstats = _search_branch(prob, size, first, node_limit)
                    except SearchCapError as exc:
                        _merge_stats(stats, exc.stats)
                        stats["millis"] = round((time.perf_counter() - t0) * 1000)
                        raise SearchCapError(str(exc), stats) from None
                    _merge_stats(stats, bstats)
                    if found is not None:
                        result = found
                        break
            else:
                jobs = [(prob, size, first, node_limit) for first in firsts]
                # branches are ordered by their least set, so the first hit is the least family
                for found, bstats in pool.map(_branch_job, jobs):
                    _merge_stats(stats, bstats)
                    if found is not None and result is None:
                        result = found
            if result is not None:
                break
            completed.append(size)
    finally:
        if pool is not None:
            pool.shutdown()

    stats["completed_sizes"] = completed
    stats["millis"] = round((time.perf_counter() - t0) * 1000)
    N = prob.n + prob.ext
    config = {
        "notion": notion,
        "mode": "strong" if prob.strong else "weak",
        "external_cap": prob.ext,
        "injective": prob.injective,
        "start_size": start,
        "max_size": max_size,
        "exact_under_cap": notion in (PROJECTIVE, EXTERNAL, RELAXED_PROJECTIVE),
    }
    config.update(extra_config or {})
    if result is None:
        return SearchOutcome(notion, prob.n, prob.pattern.key(), None, None, None, stats, config)
    sets, anchor = result
    ground = GroundSpec(prob.n, N, anchor if notion == EXTERNAL else 0)
    witness = SetFamily(ground, tuple(sets))
    a = tuple(from_mask(anchor)) if notion == EXTERNAL else None
    return SearchOutcome(notion, prob.n, prob.pattern.key(), len(sets), witness, a, stats, config)


def _check_caps(n: int, ext: int):
    if n < 0:
        raise SearchCapError("n must be >= 0")
    if ext < 0 or n + ext > MAX_SEARCH_DIM:
        raise SearchCapError(
            f"exact search works inside B_(n+e); n + e must be <= {MAX_SEARCH_DIM}, got n={n}, e={ext}")


def _start(pattern: Poset, probes: int) -> int:
    # with fewer than |P|-1 sets no probe can complete a copy, so every probe must be a member
    return min(pattern.size - 1, probes)


def min_ordinary(n: int, pattern: Poset, mode: str = "strong", *, max_size: int | None = None,
                 threads: int = 1, node_limit: int | None = None) -> SearchOutcome:
    """sat(n, P) for ``mode="weak"``, sat*(n, P) for ``mode="strong"``."""
    if mode not in ("weak", "strong"):
        raise ValueError(f"mode must be weak or strong, got {mode!r}")
    _check_caps(n, 0)
    prob = _Problem(n, pattern, mode == "strong", 0, True, (0,))
    notion = SAT_STAR if mode == "strong" else SAT
    top = 1 << n if max_size is None else max_size
    return _run(prob, notion, _start(pattern, 1 << n), top, threads, node_limit)


def min_projective(n: int, pattern: Poset, external_cap: int = 2, *, max_size: int | None = None,
                   threads: int = 1, node_limit: int | None = None) -> SearchOutcome:
    """Least projective P-saturated family using at most ``external_cap`` external coordinates."""
    if not 0 <= external_cap <= MAX_EXTERNAL_CAP:
        raise SearchCapError(f"external_cap must be in 0..{MAX_EXTERNAL_CAP}")
    _check_caps(n, external_cap)
    prob = _Problem(n, pattern, True, external_cap, True, (0,))
    top = 1 << n if max_size is None else max_size
    return _run(prob, PROJECTIVE, _start(pattern, 1 << n), top, threads, node_limit)


def min_external(n: int, pattern: Poset, external_cap: int = 2, projection_rule: str = "strict", *,
                 max_size: int | None = None, threads: int = 1, node_limit: int | None = None) -> SearchOutcome:
    """Least external P-saturated family; every anchor A inside the external coordinates is tried."""
    if projection_rule not in ("strict", "relaxed"):
        raise ValueError(f"projection_rule must be strict or relaxed, got {projection_rule!r}")
    if not 0 <= external_cap <= MAX_EXTERNAL_CAP:
        raise SearchCapError(f"external_cap must be in 0..{MAX_EXTERNAL_CAP}")
    _check_caps(n, external_cap)
    anchors = tuple(a << n for a in range(1 << external_cap))
    injective = projection_rule == "strict"
    prob = _Problem(n, pattern, True, external_cap, injective, anchors)
    if max_size is None:
        max_size = 1 << (n if injective else n + external_cap)
    return _run(prob, EXTERNAL, _start(pattern, 1 << n), max_size, threads, node_limit,
                {"projection_rule": projection_rule})


def min_relaxed_projective(n: int, pattern: Poset, external_cap: int | None = None, *,
                           max_size: int | None = None, threads: int = 1,
                           node_limit: int | None = None) -> SearchOutcome:
    """Least family meeting freeness and saturation only (projections may repeat).

    The default external cap, ``max(1, |P| - 1)``, leaves room for a copy of P
    minus one element on the external coordinates.
    """
    if (1 << n) < pattern.size:
        raise ValueError(f"2^n = {1 << n} is smaller than |P| = {pattern.size}")
    ext = max(1, pattern.size - 1) if external_cap is None else external_cap
    _check_caps(n, ext)
    prob = _Problem(n, pattern, True, ext, False, (0,))
    top = 1 << (n + ext) if max_size is None else max_size
    return _run(prob, RELAXED_PROJECTIVE, _start(pattern, 1 << n), top, threads, node_limit)


def default_cap(notion: str, pattern: Poset) -> int:
    """External coordinates used when the caller gives no cap."""
    if notion == RELAXED_PROJECTIVE:
        return max(1, pattern.size - 1)
    if notion in (PROJECTIVE, EXTERNAL):
        return 2
    return 0


def search(notion: str, n: int, pattern: Poset, *, external_cap: int | None = None,
           projection_rule: str = "strict", threads: int = 1, node_limit: int | None = None) -> SearchOutcome:
    if notion not in NOTIONS:
        raise ValueError(f"unknown notion {notion!r}; expected one of {', '.join(NOTIONS)}")
    cap = default_cap(notion, pattern) if external_cap is None else external_cap
    if notion == SAT:
        return min_ordinary(n, pattern, "weak", threads=threads, node_limit=node_limit)
    if notion == SAT_STAR:
        return min_ordinary(n, pattern, "strong", threads=threads, node_limit=node_limit)
    if notion == PROJECTIVE:
        return min_projective(n, pattern, cap, threads=threads, node_limit=node_limit)
    if notion == EXTERNAL:
        return min_external(n, pattern, cap, projection_rule, threads=threads, node_limit=node_limit)
    return min_relaxed_projective(n, pattern, cap, threads=threads, node_limit=node_limit)


def min_chain_partition(fam: SetFamily) -> list[list[int]]:
    """Fewest chains (each a list of sets, bottom first) covering the family."""
    if len(fam) > MAX_CHAIN_FAMILY:
        raise ValueError(f"chain partition is capped at {MAX_CHAIN_FAMILY} sets")
    rel = Relations(fam.sets)
    return [[fam.sets[i] for i in chain] for chain in min_chain_cover(rel.sup)]


TABLE_COLUMNS = ("poset", "n", "mode", "value", "witness_hash", "nodes", "millis")


def cache_params(notion: str, n: int, pattern: Poset, external_cap: int | None = None,
                 projection_rule: str = "strict") -> dict:
    params = {"pattern": pattern.to_json(), "n": n, "notion": notion}
    if notion in (PROJECTIVE, EXTERNAL, RELAXED_PROJECTIVE):
        params["external_cap"] = default_cap(notion, pattern) if external_cap is None else external_cap
    if notion == EXTERNAL:
        params["projection_rule"] = projection_rule
    return params


def cached_search(notion: str, n: int, pattern: Poset, cache=None, *, external_cap: int | None = None,
                  projection_rule: str = "strict", threads: int = 1,
                  node_limit: int | None = None) -> tuple[SearchOutcome, bool]:
    """Run (or replay) a search; returns the outcome and whether it came from ``cache``."""
    params = cache_params(notion, n, pattern, external_cap, projection_rule)
    if cache is not None:
        hit = cache.get(params)
        if hit is not None:
            return SearchOutcome.from_json(hit), True
    outcome = search(notion, n, pattern, external_cap=external_cap, projection_rule=projection_rule,
                     threads=threads, node_limit=node_limit)
    if cache is not None:
        cache.put(params, outcome.to_json())
    return outcome, False


def tabulate(posets, ns, modes, cache=None, *, external_cap: int | None = None, projection_rule: str = "strict",
             threads: int = 1, node_limit: int | None = None) -> list[dict]:
    """One row per (poset, n, mode) cell. ``posets`` maps display names to posets.

    Cells that hit a cap are recorded with value ``"cap"`` rather than raised.
    """
    rows = []
    for name, pattern in posets.items():
        for n in ns:
            for mode in modes:
                row = {"poset": name, "n": n, "mode": mode}
                try:
                    outcome, hit = cached_search(mode, n, pattern, cache, external_cap=external_cap,
                                                 projection_rule=projection_rule, threads=threads,
                                                 node_limit=node_limit)
                except (SearchCapError, ValueError) as exc:
                    stats = getattr(exc, "stats", {}) or {}
                    row.update(value="cap", witness_hash="", nodes=stats.get("nodes", 0),
                               millis=stats.get("millis", 0), cached=False, error=str(exc))
                    rows.append(row)
                    continue
                row.update(
                    value="exceeds cap" if outcome.value is None else outcome.value,
                    witness_hash=outcome.witness_hash(),
                    nodes=outcome.stats.get("nodes", 0),
                    millis=outcome.stats.get("millis", 0),
                    cached=hit,
                )
                rows.append(row)
    return rows


def write_csv(rows, fh):
    import csv

    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(TABLE_COLUMNS)
    for row in rows:
        writer.writerow([row[c] for c in TABLE_COLUMNS])
