"""Search with indistinguishable elements: the alternating golden-ratio
protocol, its adversary, and the exact worst-case dynamic program.

Elements carry no identity before the game starts, so queries are
represented by size only: the adversary controls every intersection the
players cannot pin down, and it reveals all answers after each two-query
block, which makes candidate-set size the whole state.  This size-only view
is used for lower-bound testing; the consistency checker below shows every
adversary run is realizable with concrete labelled sets.

No floating point anywhere: floor(m/phi) and ceil(log_phi n) are evaluated
with integer square roots and Fibonacci/Lucas numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

from . import kernels
from .errors import AdversaryInconsistent


def golden_split(m: int) -> int:
    """floor(m / phi), exactly.

    Identity: floor(m/phi) = floor(m*phi) - m, and floor(m*phi) =
    (m + isqrt(5 m^2)) // 2 since m*sqrt(5) is never an integer.
    """
    if m < 1:
        raise ValueError("need m >= 1")
    return (m + isqrt(5 * m * m)) // 2 - m


def phi_square_split(m: int) -> int:
    """floor(m / phi^2) = m - floor(m/phi) - 1 for m >= 1."""
    return m - golden_split(m) - 1


def floor_phi_power(q: int) -> int:
    """floor(phi**q) via phi^q = (Lucas_q + Fib_q * sqrt5) / 2."""
    f, fn = 0, 1
    l, ln = 2, 1
    for _ in range(q):
        f, fn = fn, f + fn
        l, ln = ln, l + ln
    return (l + isqrt(5 * f * f)) // 2


def ceil_log_phi(n: int) -> int:
    """Least q with phi**q >= n, exactly."""
    if n < 1:
        raise ValueError("need n >= 1")
    q = 0
    while floor_phi_power(q) < n:
        q += 1
    return q


# --- the exact worst-case dynamic program -------------------------------

@dataclass(frozen=True)
class DpResult:
    """Worst-case query counts for the alternating protocol family."""

    n: int
    worst: int
    split_table: tuple[int, ...]

    def split_for(self, m: int) -> int:
        return self.split_table[m]


def optimal_alternating_dp(n: int) -> DpResult:
    """Exact minimum worst-case query count over all split-size choices.

    W(1) = 0 and W(m) = min over 1 <= s < m of
    max(1 + W(s), no_cost + W(m - s)) where the NO branch costs 2 (the
    failed split plus the full-set signal) unless it leaves a single
    candidate, in which case the game ends with the split query alone.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    w, split = kernels.golden_dp_tables(max(n, 1))
    return DpResult(n, w[n], tuple(split[: n + 1]))


def literal_phi_worst(n: int) -> int:
    """Worst-case count when every split is literally floor(m/phi)."""
    return kernels.golden_literal_table(max(n, 1))[n]


# --- the golden-ratio adversary -----------------------------------------

@dataclass
class AdversaryState:
    """Recursive adversary bookkeeping.

    m is the current number of surviving candidates; after a NO the state
    remembers the failed query's size until the follow-up query resolves
    the two-query block and all answers are revealed.
    """

    m: int
    pending_no: int | None = None
    history: list[tuple[int, bool, int]] = field(default_factory=list)

    def snapshot(self) -> tuple[int, int | None]:
        return (self.m, self.pending_no)


def golden_adversary(state: AdversaryState, query_size: int) -> bool:
    """Answer one size-only query, mutating the adversary state.

    Fresh phase: YES iff the query reaches floor(m/phi), and the query set
    itself becomes the candidate pool.  After a NO: a follow-up of size at
    least floor(m/phi^2) gets YES with the largest intersection the sizes
    permit; anything smaller gets NO with the two queries packed into a
    union of size max of the two, after which all answers are revealed and
    the state is fresh again.
    """
    if not (0 <= query_size):
        raise ValueError("negative query size")
    m = state.m
    if state.pending_no is None:
        if query_size >= golden_split(m) and query_size >= 1:
            survivors = min(query_size, m)
            state.history.append((query_size, True, survivors))
            state.m = survivors
            return True
        state.pending_no = query_size
        state.history.append((query_size, False, m - min(query_size, m)))
        return False
    first = state.pending_no
    remainder = m - first
    if query_size >= phi_square_split(m) and query_size >= 1:
        survivors = min(query_size, remainder)
        state.history.append((query_size, True, survivors))
        state.m = survivors
        state.pending_no = None
        return True
    state.history.append((query_size, False, m - max(first, query_size)))
    state.m = m - max(first, query_size)
    state.pending_no = None
    return False


def all_yes_source(state: AdversaryState, query_size: int) -> bool:
    """Degenerate answer source that always says YES (keeps the pool at the
    query when possible); useful as a best-case baseline in tests."""
    survivors = min(query_size, state.m)
    if survivors < 1:
        return False
    state.m = survivors
    state.history.append((query_size, True, survivors))
    return True


# --- running the protocol ------------------------------------------------

@dataclass(frozen=True)
class GoldenEvent:
    asker: str
    kind: str  # "split" or "signal"
    size: int
    answer: bool
    pool_after: int


@dataclass(frozen=True)
class GoldenTranscript:
    n: int
    mode: str
    queries: int
    main_at_end: str
    events: tuple[GoldenEvent, ...]


def run_golden_protocol(n: int, answer_source=None, *, splits: str = "literal") -> GoldenTranscript:
    """Play the alternating main/auxiliary protocol until one candidate is
    left.

    The main questioner asks a split of the current pool; YES swaps the
    roles and keeps the split as the pool, NO makes the auxiliary ask the
    whole ground set on the next turn (always YES) to signal the failure,
    except that a NO leaving one candidate ends the game outright.  B asks
    first and queries strictly alternate.

    splits: "literal" uses floor(m/phi); "dp" uses the optimal table.
    answer_source defaults to a fresh golden adversary.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    state = AdversaryState(n)
    source = answer_source
    if source is None:
        source = golden_adversary
    dp = optimal_alternating_dp(n) if splits == "dp" else None
    m = n
    main = "B"
    turn = "B"
    events: list[GoldenEvent] = []
    queries = 0
    pending_signal = False
    while m > 1:
        if pending_signal:
            # Auxiliary (whose turn it is) signals the NO by asking the
            # whole ground set; the answer is necessarily YES.
            ans = source(state, n)
            if not ans:
                raise AdversaryInconsistent("full ground set answered NO")
            queries += 1
            events.append(GoldenEvent(turn, "signal", n, True, m))
            pending_signal = False
        else:
            s = dp.split_for(m) if dp is not None else golden_split(m)
            if not (1 <= s < m):
                raise AdversaryInconsistent(f"split {s} invalid for pool {m}")
            ans = source(state, s)
            queries += 1
            if ans:
                m = s
                events.append(GoldenEvent(turn, "split", s, True, m))
                main = "C" if main == "B" else "B"
            else:
                m = m - s
                events.append(GoldenEvent(turn, "split", s, False, m))
                if m > 1:
                    pending_signal = True
        turn = "C" if turn == "B" else "B"
    return GoldenTranscript(n, splits, queries, main, tuple(events))


def adversary_forced_counts(n: int) -> tuple[int, int]:
    """(literal, dp) query counts when each protocol variant plays the
    golden adversary at pool size n."""
    lit, dp = kernels.adversary_forced_tables(max(n, 1))
    return lit[n], dp[n]


# --- consistency: size-only runs are realizable --------------------------

def instantiate_run(n: int, history: list[tuple[int, bool, int]]) -> tuple[list[set], int]:
    """Build concrete labelled queries and a defective realizing an
    adversary history of (query_size, answer, survivors) triples.

    Returns (queries, defective); raises AdversaryInconsistent when the
    recorded sizes cannot be realized, which would mean the adversary lied.
    A NO inside a two-query block keeps the candidate pool as recorded at
    the fresh step; the block resolves at the follow-up query exactly as
    the adversary's bookkeeping does.
    """
    pool = set(range(n))
    eliminated: list[int] = []
    queries: list[set] = []
    pending: set | None = None

    def pad_from_eliminated(q: set, target_size: int) -> set:
        extra = [x for x in eliminated if x not in q][: max(0, target_size - len(q))]
        if len(q) + len(extra) < target_size:
            raise AdversaryInconsistent(f"cannot realize a query of size {target_size}")
        return q | set(extra)

    for size, answer, survivors in history:
        if pending is None:
            if answer:
                keep = sorted(pool)[: min(size, len(pool))]
                q = pad_from_eliminated(set(keep), size)
                eliminated.extend(sorted(pool - set(keep)))
                pool = set(keep)
            else:
                if size >= len(pool):
                    raise AdversaryInconsistent("NO to a query covering the pool")
                gone = sorted(pool)[:size]
                q = set(gone)
                pool -= set(gone)
                eliminated.extend(gone)
                pending = set(gone)
        else:
            if answer:
                keep = sorted(pool)[: min(survivors, len(pool))]
                q = pad_from_eliminated(set(keep), size)
                eliminated.extend(sorted(pool - set(keep)))
                pool = set(keep)
            else:
                inside = sorted(pending)[: min(size, len(pending))]
                q = set(inside)
                short = size - len(q)
                if short > 0:
                    fresh = sorted(pool)[:short]
                    if len(fresh) < short:
                        raise AdversaryInconsistent("query larger than realizable")
                    q |= set(fresh)
                    pool -= set(fresh)
                    eliminated.extend(fresh)
            pending = None
        queries.append(q)
        if len(pool) != survivors:
            raise AdversaryInconsistent(
                f"recorded {survivors} survivors, realizable {len(pool)}"
            )
        if not pool:
            raise AdversaryInconsistent("no candidate left alive")
    defective = min(pool)
    for q, (size, answer, _) in zip(queries, history):
        if (defective in q) != answer:
            raise AdversaryInconsistent("constructed run contradicts an answer")
    return queries, defective
