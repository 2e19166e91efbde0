"""Generators for the explicit saturated families.

Every generator returns a :class:`ConstructionResult`; checking the claim is
left to the verifiers (and the test suite), not done at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .copies import find_strong_copy
from .family import GroundError, GroundSpec, SetFamily, fmt, full, interval, to_mask
from .poset import Poset, comparability_components, make_named


class ConstructionError(ValueError):
    def __init__(self, message, collision=None):
        super().__init__(message)
        self.collision = collision


@dataclass(frozen=True)
class ConstructionResult:
    name: str
    family: SetFamily
    claimed_for: str
    claimed_notion: str
    params: dict = field(default_factory=dict)
    validity: str = ""

    @property
    def ground(self) -> GroundSpec:
        return self.family.ground

    @property
    def claimed_size(self) -> int:
        return len(self.family)

    def provenance(self) -> dict:
        return {
            "construction": self.name,
            "params": dict(self.params),
            "claimed_for": self.claimed_for,
            "claimed_notion": self.claimed_notion,
            "claimed_size": self.claimed_size,
            "validity": self.validity,
        }


def _collision(masks, n):
    seen = {}
    for s in masks:
        p = s & full(n)
        if p in seen:
            return seen[p], s
        seen[p] = s
    return None


def _reject_collision(name, masks, n, floor):
    pair = _collision(masks, n)
    if pair is not None:
        a, b = pair
        raise ConstructionError(
            f"{name}: {fmt(a)} and {fmt(b)} share the projection {fmt(a & full(n))} at n={n} ({floor})",
            collision=(a, b),
        )


def wedge_diamond_family(n: int, k: int) -> ConstructionResult:
    """F_{n,k}: projective saturated for both the k-cherry W_k and the diamond D_k."""
    if k < 2:
        raise ConstructionError("k must be >= 2")
    floor = f"needs n >= {2 * k - 1}"
    if n < 2 * k - 2:
        raise ConstructionError(f"wedge_diamond: [2k-2] = [{2 * k - 2}] leaves the inner ground at n={n} ({floor})")
    sets = [0, full(n + k - 1), full(2 * k - 2) | to_mask([n + k])]
    for i in range(1, k):
        sets.append(to_mask([i, n + i]))
        sets.append(to_mask([k - 1 + i, n + k]))
    _reject_collision("wedge_diamond", sets, n, floor)
    if n < 2 * k - 1:
        raise ConstructionError(f"wedge_diamond: n={n} is below the validity floor ({floor})")
    fam = SetFamily.of(sets, n, n + k)
    return ConstructionResult("wedge_diamond", fam, f"W_{k},D_{k}", "projective",
                              {"n": n, "k": k}, floor)


def two_c2_family(n: int) -> ConstructionResult:
    """The eight-set projective 2C_2-saturated family over N = n + 1."""
    floor = "needs n >= 4"
    if n < 3:
        raise ConstructionError(f"two_c2: n={n} is too small for the listed sets ({floor})")
    e = n + 1
    sets = [
        0,
        to_mask([3]),
        to_mask([1, 2]),
        to_mask([2, 3]),
        to_mask([2, e]),
        to_mask([1, 2, 3, e]),
        full(n) & ~to_mask([2]),
        full(n + 1) & ~to_mask([1]),
    ]
    if len(set(sets)) != len(sets):
        raise ConstructionError(f"two_c2: repeated set at n={n} ({floor})")
    _reject_collision("two_c2", sets, n, floor)
    fam = SetFamily.of(sets, n, n + 1)
    return ConstructionResult("two_c2", fam, "2C2", "projective", {"n": n}, floor)


def vee_family(n: int) -> ConstructionResult:
    """All subsets of [n] with at least n - 1 elements; ordinary V_2-saturated."""
    if n < 2:
        raise ConstructionError("vee family needs n >= 2")
    sets = [full(n)] + [full(n) & ~(1 << i) for i in range(n)]
    fam = SetFamily.of(sets, n, n)
    return ConstructionResult("vee", fam, "V_2", "ordinary-strong", {"n": n}, "n >= 2")


def middle_antichain(n: int, size: int) -> list[int]:
    """The ``size`` lexicographically least floor(n/2)-subsets of [n]."""
    r = n // 2
    if size > comb(n, r):
        raise ConstructionError(f"no antichain of {size} sets among the {r}-subsets of [{n}]")
    return [to_mask(c) for c in combinations(range(1, n + 1), r)][:size]


def antichain_external_family(n: int, k: int, antichain: list[int] | None = None) -> ConstructionResult:
    """k-1 pairwise incomparable sets lifted by {n+2}, anchor {n+1}."""
    if k < 2:
        raise ConstructionError("k must be >= 2 (A_1 is saturated by any single set)")
    xs = middle_antichain(n, k - 1) if antichain is None else list(antichain)
    if len(xs) != k - 1:
        raise ConstructionError(f"need {k - 1} sets, got {len(xs)}")
    top = to_mask([n + 2])
    fam = SetFamily.of([x | top for x in xs], n, n + 2, anchor=to_mask([n + 1]))
    return ConstructionResult("antichain_external", fam, f"A_{k}", "external-strict",
                              {"n": n, "k": k}, "k-1 <= C(n, n//2)")


def downset_embedding(p: Poset, offset: int = 0) -> list[int]:
    """Element q goes to its down-set {offset + i + 1 : i <= q}; order-isomorphic."""
    return [sum(1 << (offset + i) for i in range(p.size) if i == q or p.lt(i, q)) for q in range(p.size)]


def _residual_copy(residual: Poset, n: int, avoid_empty: bool) -> list[int]:
    if residual.size <= n:
        return downset_embedding(residual)
    # down-set embedding does not fit; take the least copy inside B_n
    lattice = SetFamily(GroundSpec(n, n), tuple(range(1 if avoid_empty else 0, 1 << n)))
    emb = find_strong_copy(lattice, residual)
    if emb is None:
        raise ConstructionError(f"no copy of the residual poset fits in B_{n}")
    return list(emb.images)


def isolated_element_family(p: Poset, n: int, variant: str = "vertex", name: str | None = None) -> ConstructionResult:
    """|P|-1 sets, external saturated for anchor {n+1} over N = n + 2.

    ``vertex``: drop an isolated point and lift a copy of the rest by {n+2}.
    ``c2``: drop an isolated 2-chain, lift the rest, and add {n+1}.
    The least-indexed qualifying component is used.
    """
    comps = comparability_components(p)
    if variant == "vertex":
        comp = next((c for c in comps if c.isolated_vertex), None)
    elif variant == "c2":
        comp = next((c for c in comps if c.isolated_c2), None)
    else:
        raise ValueError(f"variant must be 'vertex' or 'c2', got {variant!r}")
    if comp is None:
        raise ConstructionError(f"component absent: pattern has no isolated {'vertex' if variant == 'vertex' else 'C_2'}")
    lift = to_mask([n + 2])
    sets = []
    if comp.elements != tuple(range(p.size)):
        residual = p.without(comp.elements)
        sets = [s | lift for s in _residual_copy(residual, n, avoid_empty=False)]
    if variant == "c2":
        sets.append(to_mask([n + 1]))
    fam = SetFamily.of(sets, n, n + 2, anchor=to_mask([n + 1]))
    return ConstructionResult(f"isolated_{variant}", fam, name or p.key(), "external-strict",
                              {"n": n, "variant": variant}, "residual copy fits in B_n")


def relaxed_projective_family(p: Poset, n: int, name: str | None = None) -> ConstructionResult:
    """Saturates B_n with conditions (i) and (ii) only, using |P| or |P|-1 sets.

    The least-indexed minimal element plays every probe set. The rest of the
    pattern sits on external coordinates via its down-set embedding; elements
    above the chosen one also get all of [n].
    """
    if (1 << n) < p.size:
        raise ConstructionError(f"2^n = {1 << n} is smaller than |P| = {p.size}")
    bottom = p.minimal_elements()[0]
    rest = [q for q in range(p.size) if q != bottom]
    sets = []
    if rest:  # a single point is saturated by the empty family
        images = downset_embedding(p.induced(rest), offset=n)
        for q, img in zip(rest, images):
            sets.append(img | full(n) if p.lt(bottom, q) else img)
    if p.smallest_element() is None:
        sets.append(0)
    N = n + max(1, len(rest))
    fam = SetFamily.of(sets, n, N)
    return ConstructionResult("relaxed_projective", fam, name or p.key(), "relaxed-projective",
                              {"n": n}, "2^n >= |P|")


def kst_almost_saturated(n: int, s: int, t: int) -> tuple[SetFamily, SetFamily]:
    """Singletons {1}..{s+t-1} below and their complements in [n] above."""
    if s < 1 or t < 1:
        raise ConstructionError("s and t must be >= 1")
    if s == t == 1:
        raise ConstructionError("K_{1,1} is excluded: it is an isolated C_2")
    if n < s + t:
        raise ConstructionError(f"need n >= s + t = {s + t}, got {n}")
    m = s + t - 1
    f1 = SetFamily.of([1 << i for i in range(m)], n, n)
    f2 = SetFamily.of([full(n) & ~(1 << i) for i in range(m)], n, n)
    return f1, f2


def external_lift(f1: SetFamily, f2: SetFamily, n: int, pattern: Poset | None = None,
                  claimed_for: str = "") -> ConstructionResult:
    """Four shifted copies of an almost saturated two-level family, anchor {n+3}.

    G_1 = F_1, G_1' = F_1 + {n+1}, G_2' = F_2 + {n+1, n+2}, G_2 = F_2 + {n+1, n+2, n+3}.
    If ``pattern`` is given the almost-saturation precondition is verified first.
    """
    if pattern is not None:
        from .saturation import verify_almost_saturated

        report = verify_almost_saturated(f1, f2, pattern, n)
        if not report.holds:
            raise ConstructionError(f"input is not almost saturated: {report.violated} {report.witness}")
    for s in list(f1.sets) + list(f2.sets):
        if s & ~full(n):
            raise GroundError(f"{fmt(s)} is not inside [{n}]")
    a1, a2, a3 = (to_mask([n + i]) for i in (1, 2, 3))
    g1 = list(f1.sets)
    g1p = [s | a1 for s in f1.sets]
    g2p = [s | a1 | a2 for s in f2.sets]
    g2 = [s | a1 | a2 | a3 for s in f2.sets]
    fam = SetFamily.of(g1 + g1p + g2p + g2, n, n + 3, anchor=a3)
    return ConstructionResult("external_lift", fam, claimed_for or (pattern.key() if pattern else ""),
                              "external-relaxed", {"n": n}, "input almost saturated")


def kst_external_family(n: int, s: int, t: int) -> ConstructionResult:
    f1, f2 = kst_almost_saturated(n, s, t)
    res = external_lift(f1, f2, n, claimed_for=f"K_{s}_{t}")
    return ConstructionResult("kst_external", res.family, f"K_{s}_{t}", "external-relaxed",
                              {"n": n, "s": s, "t": t}, "s + t >= 3, n >= s + t")


def lift_parts(fam: SetFamily, n: int) -> dict[str, list[int]]:
    """Split an ``external_lift`` output back into its four parts by external signature."""
    a1, a2, a3 = (to_mask([n + i]) for i in (1, 2, 3))
    ext = interval(n + 1, n + 3)
    parts = {"G1": [], "G1'": [], "G2'": [], "G2": []}
    names = {0: "G1", a1: "G1'", a1 | a2: "G2'", a1 | a2 | a3: "G2"}
    for s in fam.sets:
        parts[names[s & ext]].append(s)
    return parts


CONSTRUCTIONS = {
    "wedge_diamond": ("n", "k"),
    "two_c2": ("n",),
    "vee": ("n",),
    "antichain_external": ("n", "k"),
    "isolated_vertex": ("n", "poset"),
    "isolated_c2": ("n", "poset"),
    "relaxed_projective": ("n", "poset"),
    "kst_external": ("n", "s", "t"),
    "kst_levels": ("n", "s", "t"),
}


def build(name: str, **params) -> ConstructionResult:
    """Dispatch by construction name, as used by the command line."""
    if name == "wedge_diamond":
        return wedge_diamond_family(params["n"], params["k"])
    if name == "two_c2":
        return two_c2_family(params["n"])
    if name == "vee":
        return vee_family(params["n"])
    if name == "antichain_external":
        return antichain_external_family(params["n"], params["k"])
    if name in ("isolated_vertex", "isolated_c2"):
        return isolated_element_family(make_named(params["poset"]), params["n"], name.split("_")[1],
                                       params["poset"])
    if name == "relaxed_projective":
        return relaxed_projective_family(make_named(params["poset"]), params["n"], params["poset"])
    if name == "kst_external":
        return kst_external_family(params["n"], params["s"], params["t"])
    if name == "kst_levels":
        n, s, t = params["n"], params["s"], params["t"]
        f1, f2 = kst_almost_saturated(n, s, t)
        fam = SetFamily.with_levels(f1.sets, f2.sets, n, n)
        return ConstructionResult("kst_levels", fam, f"K_{s}_{t}", "almost", {"n": n, "s": s, "t": t},
                                  "s + t >= 3, n >= s + t")
    raise ConstructionError(f"unknown construction {name!r}; known: {', '.join(CONSTRUCTIONS)}")
