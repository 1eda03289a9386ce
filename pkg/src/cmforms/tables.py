"""End-to-end classification of discriminants by class-group exponent.

The pipeline per exponent E:

  1. scan fundamental discriminants |d0| <= scan_bound whose class-group
     exponent divides E (a conductor can only grow the group, so exponent-E
     orders must sit above such a d0);
  2. for each seed, enumerate the finitely many conductor candidates
     allowed by the L-divisibility bound;
  3. reject candidates whose small divisors already violate the exponent
     (the class group of a suborder surjects onto every order between it
     and the maximal one), then verify exponent equality exactly.

The scan bound is an honest knob: the output records it, and the diff
against bundled reference data reports any shortfall instead of silently
undercounting.
"""

import dataclasses
import json
import multiprocessing
from importlib import resources
from typing import Iterable, NamedTuple, Optional, Sequence

from ._version import __version__ as _version
from .arith import divisors, factorize, squarefree_flags
from .classgroup import annihilating_exponents, group_structure
from .conductor import allowed_prime_powers, conductor_divisibility_bound

__all__ = [
    "TableEntry",
    "ExponentTable",
    "DiffReport",
    "DEFAULT_SCAN_BOUNDS",
    "scan_fundamental",
    "discriminants_with_exponent",
    "build_tables",
    "prune_by_divisors",
    "diff_against_reference",
    "load_reference",
    "group_label",
    "write_table_csv",
    "write_table_json",
    "all_on_boundary_subtable",
]

# Per-exponent fundamental scan limits.  Verified sufficient against the
# bundled reference tables; the exponent-8 classification has a fundamental
# seed at |d0| = 430950520 (entry -1723802080 = d0 * 2^2), hence its much
# larger default.
DEFAULT_SCAN_BOUNDS = {
    1: 10**4,
    2: 10**4,
    3: 10**4,
    4: 10**7,
    5: 5 * 10**4,
    6: 10**7,
    7: 15 * 10**4,
    8: 45 * 10**7,
}

DEFAULT_PRUNE_THRESHOLD = 100

_SCAN_CHUNK = 250_000


class TableEntry(NamedTuple):
    D: int
    d0: int
    f: int
    h: int
    exponent: int
    divisors: tuple[int, ...]

    @property
    def label(self) -> str:
        return group_label(self.divisors)


def group_label(divs: Sequence[int]) -> str:
    """'2x2x4' style label; the trivial group is 'e'."""
    return "x".join(str(d) for d in divs) if divs else "e"


@dataclasses.dataclass(frozen=True)
class ExponentTable:
    E: int
    scan_bound: int
    entries: tuple[TableEntry, ...]

    @property
    def count(self) -> int:
        return len(self.entries)

    @property
    def max_abs(self) -> int:
        return max((-e.D for e in self.entries), default=0)


@dataclasses.dataclass(frozen=True)
class DiffReport:
    missing: tuple[int, ...] = ()
    extra: tuple[int, ...] = ()
    label_mismatches: tuple[tuple[int, str, str], ...] = ()
    summary_mismatches: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not (self.missing or self.extra or self.label_mismatches or self.summary_mismatches)


def _maximal_proper_divisors(E: int) -> frozenset:
    return frozenset(E // p for p in factorize(E)) if E > 1 else frozenset()


def _fundamental_in_range(lo: int, hi: int):
    """Yield fundamental d0 with lo <= |d0| <= hi, descending d0."""
    sf = squarefree_flags(lo, hi)
    mlo = max(1, lo // 4)
    sfm = squarefree_flags(mlo, hi // 4) if hi >= 4 else None
    for n in range(lo, hi + 1):
        r = n & 3
        if r == 3:
            if sf[n - lo]:
                yield -n
        elif r == 0:
            m = n >> 2
            if m >= mlo and (m & 3) in (1, 2) and sfm[m - mlo]:
                yield -n
    return


def _scan_chunk(args):
    lo, hi, Es = args
    out = []
    for d0 in _fundamental_in_range(lo, hi):
        alive = annihilating_exponents(d0, Es)
        if alive:
            out.append((d0, alive))
    return out


def _scan_seeds(bound: int, Es: frozenset, threads: int) -> list[tuple[int, frozenset]]:
    """(d0, annihilating subset of Es) for all fundamental |d0| <= bound."""
    chunks = [
        (lo, min(lo + _SCAN_CHUNK - 1, bound), Es)
        for lo in range(3, bound + 1, _SCAN_CHUNK)
    ]
    if threads > 1 and len(chunks) > 1:
        with multiprocessing.Pool(threads) as pool:
            parts = pool.map(_scan_chunk, chunks)
    else:
        parts = [_scan_chunk(c) for c in chunks]
    seeds = [s for part in parts for s in part]
    seeds.sort(key=lambda t: -t[0])
    return seeds


def scan_fundamental(E: int, bound: int, threads: int = 1) -> list[int]:
    """Fundamental d0, |d0| <= bound, with class-group exponent dividing E,
    ascending |d0|."""
    if not 1 <= E <= 8:
        raise ValueError("exponent must be in 1..8")
    if bound < 4:
        raise ValueError("bound must be >= 4")
    return [d0 for d0, _ in _scan_seeds(bound, frozenset((E,)), threads)]


def prune_by_divisors(d0: int, f: int, E: int, threshold: int) -> bool:
    """False iff some divisor f' <= threshold of f already has an order
    whose exponent fails to divide E (so f cannot yield exponent E)."""
    if f < 1:
        raise ValueError("conductor must be >= 1")
    from .classgroup import exponent_divides

    for fp in divisors(f):
        if fp == 1 or fp > threshold:
            continue
        if not exponent_divides(d0 * fp * fp, E):
            return False
    return True


def _conductor_candidates_pruned(d0, E, threshold, cache):
    """Candidate conductors with prime-level and small-divisor pruning.

    A rejected candidate always contains a divisor whose order already
    violates the exponent bound, so no true entry is ever pruned.
    """
    bound = conductor_divisibility_bound(d0, E)
    kept = []
    for p, kmax in allowed_prime_powers(d0, bound):
        if _cached_divides(d0 * p * p, E, cache):
            kept.append((p, kmax))
    fs = [1]
    for p, kmax in kept:
        pe = 1
        more = []
        for _ in range(kmax):
            pe *= p
            more.extend(f * pe for f in fs)
        fs.extend(more)
    fs.sort()
    out = []
    for f in fs:
        if f == 1:
            continue
        if all(
            _cached_divides(d0 * fp * fp, E, cache)
            for fp in divisors(f)
            if fp > 1 and fp <= threshold
        ):
            out.append(f)
    return out


def _cached_divides(D, E, cache):
    key = (D, E)
    hit = cache.get(key)
    if hit is None:
        hit = E in annihilating_exponents(D, (E,))
        cache[key] = hit
    return hit


def _entries_for_seed(args):
    d0, E, divides_d0, threshold = args
    targets = frozenset((E,)) | _maximal_proper_divisors(E)
    entries = []
    if E in divides_d0 and not (_maximal_proper_divisors(E) & divides_d0):
        entries.append(_make_entry(d0, 1, E))
    cache: dict = {}
    for f in _conductor_candidates_pruned(d0, E, threshold, cache):
        D = d0 * f * f
        alive = annihilating_exponents(D, targets)
        if E in alive and not (_maximal_proper_divisors(E) & alive):
            entries.append(_make_entry(d0, f, E))
    return entries


def _make_entry(d0, f, E):
    D = d0 * f * f
    summary = group_structure(D)
    return TableEntry(D, d0, f, summary.h, E, summary.elementary_divisors)


def discriminants_with_exponent(
    E: int,
    scan_bound: Optional[int] = None,
    threads: int = 1,
    prune_threshold: int = DEFAULT_PRUNE_THRESHOLD,
) -> ExponentTable:
    """All discriminants with class group of exponent exactly E whose
    fundamental seed satisfies |d0| <= scan_bound."""
    return build_tables((E,), scan_bound and {E: scan_bound}, threads, prune_threshold)[E]


def build_tables(
    exponents: Iterable[int],
    scan_bounds: Optional[dict] = None,
    threads: int = 1,
    prune_threshold: int = DEFAULT_PRUNE_THRESHOLD,
) -> dict[int, ExponentTable]:
    """Tables for several exponents, sharing one fundamental scan per bound."""
    Es = sorted(set(exponents))
    if any(not 1 <= E <= 8 for E in Es):
        raise ValueError("exponents must be in 1..8")
    bounds = {E: (scan_bounds or {}).get(E) or DEFAULT_SCAN_BOUNDS[E] for E in Es}
    # group exponents by scan bound so equal bounds share a single scan
    by_bound: dict[int, list[int]] = {}
    for E in Es:
        by_bound.setdefault(bounds[E], []).append(E)
    out: dict[int, ExponentTable] = {}
    for bound, group in sorted(by_bound.items()):
        track = frozenset(group) | frozenset(
            d for E in group for d in _maximal_proper_divisors(E)
        )
        seeds = _scan_seeds(bound, track, threads)
        for E in group:
            jobs = [
                (d0, E, divides, prune_threshold)
                for d0, divides in seeds
                if E in divides
            ]
            if threads > 1 and len(jobs) > 1:
                with multiprocessing.Pool(threads) as pool:
                    parts = pool.map(_entries_for_seed, jobs, chunksize=16)
            else:
                parts = [_entries_for_seed(j) for j in jobs]
            entries = [e for part in parts for e in part]
            entries.sort(key=lambda e: -e.D)
            out[E] = ExponentTable(E, bound, tuple(entries))
    return out


def load_reference(E: int) -> dict:
    """Bundled reference data for exponent E."""
    path = resources.files("cmforms").joinpath(f"reference/exponent_{E}.json")
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise FileNotFoundError(f"no bundled reference table for exponent {E}")
    return json.loads(text)


def diff_against_reference(E: int, computed: ExponentTable) -> DiffReport:
    """Set and label comparison against the bundled reference for E."""
    ref = load_reference(E)
    summary = []
    if computed.count != ref["count"]:
        summary.append(f"count: computed {computed.count}, reference {ref['count']}")
    if computed.max_abs != ref["max_abs"]:
        summary.append(f"max |D|: computed {computed.max_abs}, reference {ref['max_abs']}")
    missing: list[int] = []
    extra: list[int] = []
    label_mismatch: list[tuple[int, str, str]] = []
    if "entries" in ref:
        ref_map = {int(d): lab for d, lab in ref["entries"]}
        comp_map = {e.D: e.label for e in computed.entries}
        missing = sorted((d for d in ref_map if d not in comp_map), key=abs)
        extra = sorted((d for d in comp_map if d not in ref_map), key=abs)
        label_mismatch = [
            (d, comp_map[d], ref_map[d])
            for d in sorted(set(ref_map) & set(comp_map), key=abs)
            if comp_map[d] != ref_map[d]
        ]
    return DiffReport(
        tuple(missing), tuple(extra), tuple(label_mismatch), tuple(summary)
    )


def all_on_boundary_subtable(tables: Iterable[ExponentTable]) -> list[TableEntry]:
    """Entries with odd D or D = -4: the discriminants all of whose class
    representatives sit on the domain boundary (needs exponent | 2 input)."""
    picked = [
        e
        for t in tables
        for e in t.entries
        if e.exponent <= 2 and (e.D % 2 != 0 or e.D == -4)
    ]
    picked.sort(key=lambda e: -e.D)
    return picked


def write_table_csv(table: ExponentTable, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("discriminant,d0,f,h,exponent,group\n")
        for e in table.entries:
            fh.write(f"{e.D},{e.d0},{e.f},{e.h},{e.exponent},{e.label}\n")


def write_table_json(table: ExponentTable, path) -> None:
    payload = {
        "exponent": table.E,
        "scan_bound": table.scan_bound,
        "tool_version": _version,
        "count": table.count,
        "max_abs": table.max_abs,
        "entries": [
            {
                "discriminant": e.D,
                "d0": e.d0,
                "f": e.f,
                "h": e.h,
                "exponent": e.exponent,
                "group": e.label,
            }
            for e in table.entries
        ],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")
