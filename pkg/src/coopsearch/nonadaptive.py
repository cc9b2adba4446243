"""Non-adaptive models: verifiers, constructions, and the brute-force
minimality oracle.

Four settings share the machinery:

* roka: one family of sets; a single receiver sees the YES sets.
* m1: the YES sets go to one player and the NO sets to another; at least
  one of them must identify the defective.
* m2: each query is an ordered partition into r parts, part i belonging to
  player i; the player owning the defective's part learns that part.
* m3: like m2 but the parts need not cover the ground set.

Verifiers replay the exact per-player views, so they are independent of
the closed-form bounds and of the constructions they certify.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import kernels, setfam
from .errors import InstanceTooLarge, MalformedQuery, UnsupportedParams
from .setfam import Family


class NoSolutionWithin:
    """Sentinel: no query system of size <= k_max solves the instance."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NO_SOLUTION_WITHIN"


NO_SOLUTION_WITHIN = NoSolutionWithin()


@dataclass(frozen=True)
class Witness:
    """Replayable evidence that a query system fails.

    defective: the element the adversary picks; confusable: another element
    the named player cannot rule out; view: that player's full candidate
    set, recomputable from the system.
    """

    defective: int
    confusable: int
    player: str
    view: frozenset


@dataclass(frozen=True)
class Verdict:
    solved: bool
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.solved


@dataclass(frozen=True)
class PartitionQuery:
    """Ordered r-tuple of pairwise disjoint parts over ground {0..n-1}."""

    n: int
    parts: tuple[frozenset, ...]

    def validate(self, require_partition: bool) -> None:
        seen: set[int] = set()
        for part in self.parts:
            if any(not (0 <= x < self.n) for x in part):
                raise MalformedQuery(f"part {sorted(part)} out of range")
            if seen & part:
                raise MalformedQuery("parts overlap")
            seen |= part
        if require_partition and len(seen) != self.n:
            raise MalformedQuery("parts do not cover the ground set")


@dataclass(frozen=True)
class QuerySystem:
    """A full non-adaptive query plan for the r-player models."""

    n: int
    r: int
    partition: bool
    queries: tuple[PartitionQuery, ...]

    def validate(self) -> None:
        for q in self.queries:
            if q.n != self.n or len(q.parts) != self.r:
                raise MalformedQuery("query shape disagrees with the system")
            q.validate(self.partition)

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "r": self.r,
                "partition": self.partition,
                "queries": [[sorted(p) for p in q.parts] for q in self.queries],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "QuerySystem":
        data = json.loads(text)
        for field_name in ("n", "r", "partition", "queries"):
            if field_name not in data:
                raise ValueError(f"missing field {field_name!r}")
        queries = tuple(
            PartitionQuery(data["n"], tuple(frozenset(p) for p in parts))
            for parts in data["queries"]
        )
        return cls(data["n"], data["r"], bool(data["partition"]), queries)


# --- verifiers ------------------------------------------------------------


def verify_roka(fam: Family) -> Verdict:
    """Solved iff every defective is the sole common element of the sets
    containing it (intersection over no sets = whole ground set)."""
    n = fam.n
    ground = frozenset(range(n))
    for d in range(n):
        view = ground
        for s in fam.sets:
            if d in s:
                view &= s
        if view != {d}:
            y = min(view - {d})
            return Verdict(False, Witness(d, y, "C", view))
    return Verdict(True)


def _model1_views(fam: Family, d: int) -> tuple[frozenset, frozenset]:
    ground = frozenset(range(fam.n))
    yes_view = ground
    no_union: frozenset = frozenset()
    for s in fam.sets:
        if d in s:
            yes_view &= s
        else:
            no_union |= s
    return yes_view, ground - no_union


def verify_model1(fam: Family) -> Verdict:
    """Solved iff for every defective the YES-player or the NO-player pins
    it: intersection of containing sets, or complement of the union of the
    others, is a singleton."""
    for d in range(fam.n):
        yes_view, no_view = _model1_views(fam, d)
        if yes_view == {d} or no_view == {d}:
            continue
        if len(yes_view) <= len(no_view):
            player, view = "C", yes_view
        else:
            player, view = "D", no_view
        y = min(view - {d})
        return Verdict(False, Witness(d, y, player, view))
    return Verdict(True)


def player_views(system: QuerySystem, d: int) -> list[frozenset]:
    """Candidate set of each player when d is defective.

    Player i receives part i of a query exactly when d lies in that part;
    a player who receives nothing keeps the whole ground set.
    """
    ground = frozenset(range(system.n))
    views = [ground] * system.r
    for q in system.queries:
        for i, part in enumerate(q.parts):
            if d in part:
                views[i] = views[i] & part
    return views


def verify_model23(system: QuerySystem) -> Verdict:
    """Solved iff for every defective some player's received-set
    intersection is exactly the defective."""
    system.validate()
    for d in range(system.n):
        views = player_views(system, d)
        if any(view == {d} for view in views):
            continue
        i = min(range(system.r), key=lambda j: (len(views[j]), j))
        view = views[i]
        y = min(view - {d})
        return Verdict(False, Witness(d, y, f"C{i + 1}", view))
    return Verdict(True)


def replay_witness(kind: str, obj, witness: Witness) -> bool:
    """Recompute the witness's view and confirm it shows the failure."""
    if kind == "roka":
        ground = frozenset(range(obj.n))
        view = ground
        for s in obj.sets:
            if witness.defective in s:
                view &= s
    elif kind == "m1":
        yes_view, no_view = _model1_views(obj, witness.defective)
        if yes_view == {witness.defective} or no_view == {witness.defective}:
            return False
        view = yes_view if witness.player == "C" else no_view
    else:
        views = player_views(obj, witness.defective)
        view = views[int(witness.player[1:]) - 1]
    return view == witness.view and witness.confusable in view and len(view) > 1


# --- constructions --------------------------------------------------------


def construct_roka(n: int) -> Family:
    """Smallest family whose YES receiver always identifies: the dual of
    the first n middle-layer sets, on the minimum feasible query count."""
    m = setfam.spencer_min_queries(n)
    codes = setfam.middle_layer(m, m // 2, n)
    return setfam.dual(Family(m, codes))


def construct_model1(n: int) -> Family:
    """Family whose dual takes distinct sets from the two middle layers."""
    m = setfam.bound("m1", "f", n=n)
    low = list(setfam.colex_subsets(m, m // 2))
    high = list(setfam.colex_subsets(m, m // 2 + 1))
    codes = (low + high)[:n]
    return setfam.dual(Family(m, tuple(codes)))


def construct_model3(k: int, r: int) -> QuerySystem:
    """k disjoint-part queries on r * C(k, floor(k/2)) elements: block i of
    the ground set gets its own minimum separating family."""
    if k < 2 or r < 1:
        raise ValueError("need k >= 2 and r >= 1")
    block = setfam.bound("roka", "g", k=k)
    n = r * block
    base = construct_roka(block)
    queries = []
    for j in range(k):
        parts = tuple(
            frozenset(i * block + x for x in base.sets[j]) for i in range(r)
        )
        queries.append(PartitionQuery(n, parts))
    return QuerySystem(n, r, False, tuple(queries))


def _model2_k2(r: int) -> QuerySystem:
    n = 2 * r - 1
    ground = frozenset(range(n))
    q1 = [frozenset({2 * i}) for i in range(r - 1)]
    q2 = [frozenset({2 * i + 1}) for i in range(r - 1)]
    q1.append(ground - frozenset().union(*q1))
    q2.append(ground - frozenset().union(*q2))
    return QuerySystem(
        n, r, True, (PartitionQuery(n, tuple(q1)), PartitionQuery(n, tuple(q2)))
    )


def _model2_r2(k: int) -> QuerySystem:
    n = setfam.erdos_max_ksperner(k, 2)
    fam = construct_model1(n)
    ground = frozenset(range(n))
    queries = tuple(
        PartitionQuery(n, (s, ground - s)) for s in fam.sets
    )
    return QuerySystem(n, 2, True, queries)


def _model2_general(k: int, r: int) -> QuerySystem:
    """Partition queries for k >= 3, r >= 3.

    Home parts realize the upper-middle-layer duals on each block; every
    leftover element is pushed to foreign players so each query partitions
    the ground set.  For odd k all leftovers of block i go to the lowest
    foreign player; for even k each element alternates between the two
    lowest foreign players in increasing query order, which keeps every
    foreign element in strictly fewer than k/2 parts of any one player.
    """
    block = setfam.erdos_max_ksperner(k, 1)  # C(k, floor(k/2))
    n = r * block
    codes = setfam.middle_layer(k, (k + 1) // 2, block)
    home = [
        [frozenset(i * block + x for x in range(block) if j in codes[x]) for j in range(k)]
        for i in range(r)
    ]
    extra: list[list[set]] = [[set() for _ in range(k)] for _ in range(r)]
    for i in range(r):
        foreign = [p for p in range(r) if p != i]
        ell, ell2 = foreign[0], foreign[1]
        for x in range(block):
            e = i * block + x
            missing = [j for j in range(k) if j not in codes[x]]
            if k % 2 == 1:
                for j in missing:
                    extra[ell][j].add(e)
            else:
                for idx, j in enumerate(sorted(missing)):
                    target = ell if idx % 2 == 0 else ell2
                    extra[target][j].add(e)
    queries = []
    for j in range(k):
        parts = tuple(
            frozenset(home[i][j] | extra[i][j]) for i in range(r)
        )
        queries.append(PartitionQuery(n, parts))
    return QuerySystem(n, r, True, tuple(queries))


def construct_model2(k: int, r: int) -> QuerySystem:
    """Partition-query system of k queries on the largest solvable ground.

    Cases: k = 2 uses the singleton construction on 2r - 1 elements;
    r = 2 re-expresses the two-layer family as (F, complement) partitions;
    k >= 3 with r >= 3 uses the leftover-redistribution construction.
    """
    if k == 2 and r >= 2:
        return _model2_k2(r)
    if r == 2 and k >= 3:
        return _model2_r2(k)
    if k >= 3 and r >= 3:
        return _model2_general(k, r)
    raise UnsupportedParams(f"no construction for k={k}, r={r}")


# --- brute-force minimality oracle ---------------------------------------

ORACLE_LIMITS = {
    "roka": {"n": 6},
    "m1": {"n": 6},
    "m2": {"n": 6, "r": 3, "k": 3},
    "m3": {"n": 6, "r": 3, "k": 3},
}


def brute_min_nonadaptive(model: str, n: int, r: int | None = None,
                          k_max: int | None = None):
    """Least query count solving the model on n elements, by exhaustive
    enumeration (element-relabelling symmetry prunes the partition models'
    first query to sorted assignment vectors).

    Returns NO_SOLUTION_WITHIN when nothing of size <= k_max works.
    Guardrails keep instances enumerable; exceeding them raises.
    """
    limits = ORACLE_LIMITS.get(model)
    if limits is None:
        raise ValueError(f"unknown model {model!r}")
    if k_max is None:
        k_max = limits.get("k", 6)
    if n > limits["n"]:
        raise InstanceTooLarge(f"{model} oracle accepts n <= {limits['n']}")
    if model in ("m2", "m3"):
        if r is None:
            raise ValueError("partition models need r")
        if r > limits["r"] or k_max > limits["k"]:
            raise InstanceTooLarge(
                f"{model} oracle accepts r <= {limits['r']}, k <= {limits['k']}"
            )
    if model == "roka":
        got = kernels.roka_min_queries(n, k_max)
    elif model == "m1":
        got = kernels.model1_min_queries(n, k_max)
    else:
        got = kernels.partition_min_queries(n, r, k_max, model == "m2")
    return NO_SOLUTION_WITHIN if got < 0 else got
