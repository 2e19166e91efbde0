"""``posetsat`` command line: construct, verify, search, tabulate, paper-check.

Exit codes: 0 on success or a "holds" verdict, 1 when a verifier or a
reproduction check fails, 2 for unusable input (bad files, construction
floors, refused search caps).
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from pathlib import Path

from . import paper_check
from .cache import OutcomeCache
from .constructions import CONSTRUCTIONS, ConstructionError, build
from .family import GroundError, SetFamily, family_from_json, family_to_json, fmt, to_mask
from .poset import Poset, PosetError, make_named, poset_from_json
from .saturation import (
    PreconditionError,
    verify_almost_saturated,
    verify_external,
    verify_ordinary,
    verify_projective,
    verify_relaxed_projective,
)
from .search import NOTIONS, SearchCapError, cached_search, tabulate, write_csv

log = logging.getLogger("posetsat")

VERIFY_MODES = ("ordinary", "ordinary-weak", "projective", "relaxed", "external", "almost")


class InputError(Exception):
    """Anything the user supplied that we cannot use; maps to exit code 2."""


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def load_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def parse_poset(spec: str) -> Poset:
    """A named pattern (``V_2``, ``K_2_2``, ``union:[A_1,C_2]``) or a poset JSON file."""
    try:
        if spec.endswith(".json") or Path(spec).is_file():
            return poset_from_json(load_json(spec))
        return make_named(spec)
    except PosetError as exc:
        raise InputError(str(exc)) from exc


def parse_family(path: str) -> SetFamily:
    data = load_json(path)
    if isinstance(data, dict) and "family" in data and "sets" not in data:
        data = data["family"]
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object with 'n' and 'sets'")
    try:
        return family_from_json(data)
    except (GroundError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def parse_int_list(text: str) -> list[int]:
    """``"2,3,5"`` or ``"2-4"`` or a mix of both."""
    out = []
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if "-" in part:
                lo, hi = part.split("-", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError as exc:
        raise InputError(f"cannot parse integer list {text!r}") from exc
    return out


# ---------------------------------------------------------------- construct

def cmd_construct(args) -> int:
    params = {"n": args.n}
    for name in ("k", "s", "t", "poset"):
        value = getattr(args, name)
        if value is not None:
            params[name] = value
    missing = [p for p in CONSTRUCTIONS[args.name] if p not in params]
    if missing:
        raise InputError(f"{args.name} needs --{' --'.join(missing)}")
    try:
        result = build(args.name, **params)
    except ConstructionError as exc:
        if exc.collision is not None:
            a, b = exc.collision
            print(f"collision: {fmt(a)} {fmt(b)}", file=sys.stderr)
        raise InputError(str(exc)) from exc
    except (PosetError, GroundError, PreconditionError) as exc:
        raise InputError(str(exc)) from exc
    doc = family_to_json(result.family)
    doc["provenance"] = result.provenance()
    emit(dump_json(doc), args.out)
    return 0


# ---------------------------------------------------------------- verify

def _levels(fam: SetFamily):
    if fam.levels is None:
        raise InputError("almost mode needs a family with a 'levels' list (1 = bottom, 2 = top)")
    lower = [s for s, lv in zip(fam.sets, fam.levels) if lv == 1]
    upper = [s for s, lv in zip(fam.sets, fam.levels) if lv == 2]
    return lower, upper


def cmd_verify(args) -> int:
    pattern = parse_poset(args.poset)
    fam = parse_family(args.family)
    n = fam.n if args.n is None else args.n
    try:
        if args.mode == "ordinary":
            report = verify_ordinary(fam, pattern, n)
        elif args.mode == "ordinary-weak":
            report = verify_ordinary(fam, pattern, n, mode="weak")
        elif args.mode == "projective":
            report = verify_projective(fam, pattern, n)
        elif args.mode == "relaxed":
            report = verify_relaxed_projective(fam, pattern, n)
        elif args.mode == "external":
            anchor = None if args.anchor is None else to_mask(parse_int_list(args.anchor))
            report = verify_external(fam, pattern, n, anchor, args.rule)
        else:
            lower, upper = _levels(fam)
            report = verify_almost_saturated(lower, upper, pattern, n)
    except (GroundError, PreconditionError, PosetError) as exc:
        raise InputError(str(exc)) from exc
    emit(dump_json(report.to_json()), args.out)
    return 0 if report.holds else 1


# ---------------------------------------------------------------- search

def _cache(args):
    if args.no_cache:
        return None
    return OutcomeCache(args.cache)


def cmd_search(args) -> int:
    pattern = parse_poset(args.poset)
    cache = _cache(args)
    try:
        outcome, hit = cached_search(args.mode, args.n, pattern, cache, external_cap=args.cap,
                                     projection_rule=args.rule, threads=args.threads,
                                     node_limit=args.node_limit)
    except SearchCapError as exc:
        raise InputError(f"refused: {exc}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    doc = outcome.to_json()
    doc["cache_hit"] = hit
    emit(dump_json(doc), args.out)
    if hit:
        print("cache hit", file=sys.stderr)
    return 0


# ---------------------------------------------------------------- tabulate

def cmd_tabulate(args) -> int:
    posets = {name: parse_poset(name) for name in _split_names(args.posets)}
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    unknown = [m for m in modes if m not in NOTIONS]
    if unknown:
        raise InputError(f"unknown mode(s) {unknown}; expected some of {', '.join(NOTIONS)}")
    rows = tabulate(posets, parse_int_list(args.n), modes, _cache(args),
                    external_cap=args.cap, projection_rule=args.rule, threads=args.threads,
                    node_limit=args.node_limit)
    buf = io.StringIO()
    write_csv(rows, buf)
    emit(buf.getvalue(), args.out)
    return 0


def _split_names(text: str) -> list[str]:
    # commas inside union:[...] belong to the name
    names, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            names.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    names.append("".join(cur).strip())
    return [n for n in names if n]


# ---------------------------------------------------------------- paper-check

def cmd_paper_check(args) -> int:
    only = set(parse_int_list(args.only)) if args.only else None
    rows = paper_check.run(args.scale, only)
    lines = [f"{'#':>2}  {'status':6}  {'secs':>6}  check / measured"]
    for row in rows:
        status = "PASS" if row["passed"] else "FAIL"
        lines.append(f"{row['criterion']:>2}  {status:6}  {row['seconds']:>6.2f}  {row['title']}")
        lines.append(f"{'':>18}{row['measured']}")
    failed = sum(not r["passed"] for r in rows)
    lines.append(f"{len(rows) - failed}/{len(rows)} passed")
    emit("\n".join(lines) + "\n", args.out)
    return 1 if failed else 0


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="posetsat", description="Poset saturation in the Boolean lattice.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="emit a family from a named construction")
    p.add_argument("name", choices=sorted(CONSTRUCTIONS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--poset", help="pattern for the constructions that take one")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check a family file against a saturation notion")
    p.add_argument("--mode", choices=VERIFY_MODES, required=True)
    p.add_argument("--poset", required=True, help="named pattern or poset JSON file")
    p.add_argument("--family", required=True, help="family JSON file")
    p.add_argument("--n", type=int, help="inner dimension (defaults to the file's n)")
    p.add_argument("--anchor", help="external anchor elements, e.g. 7 or 7,8 (external mode)")
    p.add_argument("--rule", choices=("strict", "relaxed"), default="relaxed",
                   help="projection rule for external mode")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    def search_flags(q):
        q.add_argument("--cap", type=int, help="external coordinates (default 2; |P|-1 for relaxed)")
        q.add_argument("--rule", choices=("strict", "relaxed"), default="strict")
        q.add_argument("--threads", type=int, default=1)
        q.add_argument("--node-limit", type=int)
        q.add_argument("--cache", help="cache file (default: $POSETSAT_CACHE or ~/.cache/posetsat)")
        q.add_argument("--no-cache", action="store_true")
        q.add_argument("--out")

    p = sub.add_parser("search", help="exact minimum saturated family")
    p.add_argument("--mode", choices=NOTIONS, required=True)
    p.add_argument("--poset", required=True)
    p.add_argument("--n", type=int, required=True)
    search_flags(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("tabulate", help="CSV of search values over posets, n and modes")
    p.add_argument("--posets", required=True, help="comma separated pattern names")
    p.add_argument("--n", required=True, help="e.g. 1-3 or 2,4")
    p.add_argument("--modes", default="sat-star")
    search_flags(p)
    p.set_defaults(func=cmd_tabulate)

    p = sub.add_parser("paper-check", help="run the reproduction checks")
    p.add_argument("--scale", choices=("small", "full-desk"), default="small")
    p.add_argument("--only", help="subset of check numbers, e.g. 1,3-5")
    p.add_argument("--out")
    p.set_defaults(func=cmd_paper_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "threads", 1) is not None and getattr(args, "threads", 1) < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"posetsat: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
