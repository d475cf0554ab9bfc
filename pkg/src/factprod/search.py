"""Complete enumeration of factorial-product identities within bounds.

The engine enumerates right-hand multisets, forms the target exponent vector,
and extends the left side depth-first while maintaining the residual.  Three
prunes keep it exact and fast: (a) any negative exponent kills the branch,
(b) the largest outstanding prime p* forces the next entry to be >= p* (only
a! with a >= p* can supply p*), and (c) depth is capped by t_max.  Orientation
(rhs[0] > lhs[0]) is built into the descent bound; disjointness is enforced at
emission so the same engine can optionally report cancelling identities for
diagnostics.

Enumeration is structurally duplicate-free (both sides are generated
non-increasing) and the merged output is sorted on (n1, rhs, lhs), so results
are identical for any worker count.
"""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .equations import (
    NONTRIVIAL,
    FactorialEquation,
    SolutionRecord,
    all_pairings,
    default_pairing,
    in_nc,
    to_delta_form,
    verify,
)
from .factorint import factorial_expvec


@dataclass(frozen=True, slots=True)
class SearchSpec:
    """Bounds for the factorial-product census."""

    n1_max: int
    t_max: int
    s_max: int
    c: int | None = None
    nontrivial_only: bool = False

    def __post_init__(self) -> None:
        if self.n1_max < 3:
            raise ValueError("n1_max must be >= 3")
        if self.t_max < 2:
            raise ValueError("t_max must be >= 2")
        if self.s_max < 1:
            raise ValueError("s_max must be >= 1")
        if self.c is not None and self.c < 1:
            raise ValueError("c must be >= 1")


@dataclass(frozen=True, slots=True)
class DeltaSearchSpec:
    """Fixed-gap consecutive-product search: find prod(a_i!) = prod of
    k_j-term consecutive blocks starting at x_j."""

    k_list: tuple[int, ...]
    x_max: int
    t_max: int
    c: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "k_list", tuple(self.k_list))
        if not self.k_list or any(k < 1 for k in self.k_list):
            raise ValueError("k_list entries must be >= 1")
        if self.x_max < 1:
            raise ValueError("x_max must be >= 1")
        if self.t_max < 1:
            raise ValueError("t_max must be >= 1")
        if self.c is not None and self.c < 1:
            raise ValueError("c must be >= 1")

    def ratio_ok(self) -> bool:
        """Gap-ratio predicate max(k_2..k_s) <= c * k_1; vacuous when c unset
        or s = 1.  The gaps are fixed inputs, so this decides the whole run."""
        if self.c is None or len(self.k_list) == 1:
            return True
        return max(self.k_list[1:]) <= self.c * self.k_list[0]


@dataclass(frozen=True, slots=True)
class SearchGuards:
    """Resource ceilings; exceeding any of them is an explicit error carrying
    the records from completed work units, never a silent truncation."""

    n1_ceiling: int = 100
    max_nodes: int = 50_000_000
    max_seconds: float | None = None


@dataclass(frozen=True, slots=True)
class DeltaSolution:
    x: tuple[int, ...]
    a: tuple[int, ...]


class ResourceGuardError(RuntimeError):
    def __init__(self, reason: str, records: list, completed_units: int) -> None:
        super().__init__(reason)
        self.reason = reason
        self.records = records
        self.completed_units = completed_units


class _GuardTrip(Exception):
    pass


class _Budget:
    """Shared node/time budget polled by workers in batches."""

    __slots__ = ("max_nodes", "deadline", "nodes", "lock", "tripped", "reason")

    def __init__(self, guards: SearchGuards) -> None:
        self.max_nodes = guards.max_nodes
        self.deadline = (
            time.monotonic() + guards.max_seconds if guards.max_seconds else None
        )
        self.nodes = 0
        self.lock = threading.Lock()
        self.tripped = False
        self.reason = ""

    def spend(self, n: int) -> None:
        with self.lock:
            self.nodes += n
            if self.tripped:
                raise _GuardTrip()
            if self.nodes > self.max_nodes:
                self.tripped = True
                self.reason = f"node budget exceeded ({self.nodes} > {self.max_nodes})"
            elif self.deadline is not None and time.monotonic() > self.deadline:
                self.tripped = True
                self.reason = "wall-time budget exceeded"
            if self.tripped:
                raise _GuardTrip()


_POLL = 2048  # budget poll granularity, in descent nodes


def _fact_entries(n: int) -> tuple[tuple[int, int], ...]:
    return factorial_expvec(n).entries


def _sub_entries(R: dict[int, int], entries) -> bool:
    """Subtract factorial exponents from the residual; True when no exponent
    went negative.  Zero entries are deleted so max(R) is the top outstanding
    prime.  Always fully applied; undo with _add_entries."""
    clean = True
    for p, e in entries:
        v = R.get(p, 0) - e
        if v:
            R[p] = v
            if v < 0:
                clean = False
        else:
            R.pop(p, None)
    return clean


def _add_entries(R: dict[int, int], entries) -> None:
    for p, e in entries:
        v = R.get(p, 0) + e
        if v:
            R[p] = v
        else:
            R.pop(p, None)


def _descend(R, lhs, ub, t_max, budget, pending, emit) -> None:
    if len(lhs) >= t_max:
        return
    p_star = max(R)
    if p_star > ub:
        return
    lo = max(p_star, 2)
    for a in range(ub, lo - 1, -1):
        pending[0] += 1
        if pending[0] >= _POLL:
            budget.spend(pending[0])
            pending[0] = 0
        entries = _fact_entries(a)
        if _sub_entries(R, entries):
            lhs.append(a)
            if not R:
                emit(tuple(lhs))
            else:
                _descend(R, lhs, a, t_max, budget, pending, emit)
            lhs.pop()
        _add_entries(R, entries)


def _rhs_units(spec: SearchSpec) -> list[tuple[int, ...]]:
    units: list[tuple[int, ...]] = []

    def grow(prefix: list[int]) -> None:
        units.append(tuple(prefix))
        if len(prefix) < spec.s_max:
            for v in range(prefix[-1], 1, -1):
                prefix.append(v)
                grow(prefix)
                prefix.pop()

    for n1 in range(3, spec.n1_max + 1):
        grow([n1])
    return units


def _passes_nc(rec: SolutionRecord, c: int) -> bool:
    if rec.classification != NONTRIVIAL:
        return False
    for pairing in all_pairings(rec.eq):
        df = to_delta_form(rec.eq, pairing)
        ks = [k for _, k in df.blocks]
        if len(ks) == 1 or max(ks[1:]) <= c * ks[0]:
            return True
    return False


def _attach_delta_form(rec: SolutionRecord) -> SolutionRecord:
    pairing = default_pairing(rec.eq)
    if pairing is None:
        return rec
    return rec.with_delta_form(to_delta_form(rec.eq, pairing))


def _census_unit(
    rhs: tuple[int, ...],
    spec: SearchSpec,
    budget: _Budget,
    cancelling_sink: list | None,
) -> list[SolutionRecord]:
    target: dict[int, int] = {}
    for n in rhs:
        _add_entries(target, _fact_entries(n))
    if not target:
        return []
    records: list[SolutionRecord] = []
    rhs_set = set(rhs)

    def emit(lhs: tuple[int, ...]) -> None:
        if set(lhs) & rhs_set:
            if cancelling_sink is not None:
                cancelling_sink.append((lhs, rhs))
            return
        rec = _attach_delta_form(verify(FactorialEquation(lhs, rhs)))
        if spec.nontrivial_only and rec.classification != NONTRIVIAL:
            return
        if spec.c is not None and not _passes_nc(rec, spec.c):
            return
        records.append(rec)

    pending = [0]
    _descend(target, [], rhs[0] - 1, spec.t_max, budget, pending, emit)
    budget.spend(pending[0])
    return records


def _run_units(units, worker, workers: int, budget: _Budget):
    """Run independent work units, tolerating a budget trip; returns
    (per-unit results for completed units, number completed)."""
    done: dict[int, list] = {}
    if workers <= 1:
        for i, u in enumerate(units):
            try:
                done[i] = worker(u)
            except _GuardTrip:
                break
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(worker, u): i for i, u in enumerate(units)}
            for fut, i in futures.items():
                try:
                    done[i] = fut.result()
                except _GuardTrip:
                    pass
    results = [done[i] for i in sorted(done)]
    return results, len(results)


def search_factorial_products(
    spec: SearchSpec,
    *,
    guards: SearchGuards | None = None,
    workers: int = 1,
    cancelling_sink: list | None = None,
) -> list[SolutionRecord]:
    """All identities within the requested bounds, canonically ordered.

    Raises ResourceGuardError (with partial results from completed right-hand
    units) when a guard ceiling is exceeded.
    """
    guards = guards or SearchGuards()
    if spec.n1_max > guards.n1_ceiling:
        raise ResourceGuardError(
            f"n1_max = {spec.n1_max} exceeds ceiling {guards.n1_ceiling}", [], 0
        )
    budget = _Budget(guards)
    units = _rhs_units(spec)
    per_unit, completed = _run_units(
        units,
        lambda rhs: _census_unit(rhs, spec, budget, cancelling_sink),
        workers,
        budget,
    )
    records = [rec for chunk in per_unit for rec in chunk]
    records.sort(key=lambda r: (r.eq.rhs[0], r.eq.rhs, r.eq.lhs))
    if budget.tripped:
        raise ResourceGuardError(budget.reason, records, completed)
    return records


def _x_units(spec: DeltaSearchSpec) -> list[tuple[int, ...]]:
    s = len(spec.k_list)
    units: list[tuple[int, ...]] = []

    def grow(prefix: list[int]) -> None:
        if len(prefix) == s:
            units.append(tuple(prefix))
            return
        for v in range(prefix[-1], 0, -1):
            prefix.append(v)
            grow(prefix)
            prefix.pop()

    for x1 in range(3, spec.x_max + 1):
        grow([x1])
    return units


def _delta_unit(
    xs: tuple[int, ...], spec: DeltaSearchSpec, budget: _Budget
) -> list[DeltaSolution]:
    target: dict[int, int] = {}
    for x, k in zip(xs, spec.k_list):
        _add_entries(target, _fact_entries(x + k - 1))
        _sub_entries(target, _fact_entries(x - 1))
    if not target:
        return []
    sols: list[DeltaSolution] = []
    pending = [0]
    _descend(
        target,
        [],
        xs[0] - 1,
        spec.t_max,
        budget,
        pending,
        lambda lhs: sols.append(DeltaSolution(xs, lhs)),
    )
    budget.spend(pending[0])
    return sols


def search_delta(
    spec: DeltaSearchSpec,
    *,
    guards: SearchGuards | None = None,
    workers: int = 1,
) -> list[DeltaSolution]:
    """All solutions of the fixed-gap consecutive-product equation with
    x non-increasing, x1 <= x_max, x1 > a1, t <= t_max."""
    guards = guards or SearchGuards()
    if spec.x_max > guards.n1_ceiling:
        raise ResourceGuardError(
            f"x_max = {spec.x_max} exceeds ceiling {guards.n1_ceiling}", [], 0
        )
    if not spec.ratio_ok():
        return []
    budget = _Budget(guards)
    units = _x_units(spec)
    per_unit, completed = _run_units(
        units, lambda xs: _delta_unit(xs, spec, budget), workers, budget
    )
    sols = [s for chunk in per_unit for s in chunk]
    sols.sort(key=lambda r: (r.x[0], r.x, r.a))
    if budget.tripped:
        raise ResourceGuardError(budget.reason, sols, completed)
    return sols


@dataclass(slots=True)
class CensusSummary:
    total: int
    counts: dict[tuple[int, int, str], int]
    extremal_n1: int | None
    nontrivial: list[str]
    c: int | None = None
    nc_tallies: dict[str, tuple[int, int]] = field(default_factory=dict)

    def csv_rows(self) -> list[str]:
        rows = ["t,s,classification,count"]
        for (t, s, cls), count in sorted(self.counts.items()):
            rows.append(f"{t},{s},{cls},{count}")
        return rows

    def to_json_obj(self) -> dict:
        return {
            "total": self.total,
            "counts": [
                {"t": t, "s": s, "classification": cls, "count": n}
                for (t, s, cls), n in sorted(self.counts.items())
            ],
            "extremal_n1": self.extremal_n1,
            "nontrivial": self.nontrivial,
            "c": self.c,
            "nc_tallies": {
                eq: {"pairings": p, "in_nc": m} for eq, (p, m) in self.nc_tallies.items()
            },
        }


def census_report(records, c: int | None = None) -> CensusSummary:
    """Counts by (t, s, classification), the extremal n1, the nontrivial
    identities, and (when c is given) N(c) membership tallies per pairing."""
    records = list(records)
    counts: dict[tuple[int, int, str], int] = {}
    extremal = None
    nontrivial: list[str] = []
    tallies: dict[str, tuple[int, int]] = {}
    for rec in records:
        key = (rec.eq.t, rec.eq.s, rec.classification or "non-solution")
        counts[key] = counts.get(key, 0) + 1
        if rec.holds:
            extremal = max(extremal or 0, rec.eq.rhs[0])
        if rec.classification == NONTRIVIAL:
            nontrivial.append(str(rec.eq))
            if c is not None:
                pairings = list(all_pairings(rec.eq))
                member = sum(1 for p in pairings if in_nc(rec.eq, p, c))
                tallies[str(rec.eq)] = (len(pairings), member)
    return CensusSummary(len(records), counts, extremal, nontrivial, c, tallies)
