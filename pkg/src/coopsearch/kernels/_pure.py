"""Pure-Python kernel implementations.

Same contracts as the compiled extension in ``_core.pyx``; selected at
import time when the extension is unavailable.  Algorithms are identical so
the two backends can be benchmarked and cross-checked against each other.
"""

from __future__ import annotations

from array import array
from itertools import combinations, combinations_with_replacement
from math import isqrt


def phi_split(m: int) -> int:
    """floor(m / phi) by exact integer arithmetic.

    Uses floor(m/phi) = floor(m*phi) - m and floor(m*phi) =
    (m + isqrt(5*m*m)) // 2; sqrt(5)*m is irrational for m >= 1 so the
    halving never sits on an integer boundary.
    """
    return (m + isqrt(5 * m * m)) // 2 - m


def golden_dp_tables(n_max: int) -> tuple[array, array]:
    """Worst-case query table W and optimal split table for the
    alternating golden protocol family.

    W[m] = min over splits s of max(YES branch, NO branch): a YES costs one
    query, a NO costs the signalling query on top, except that a NO leaving
    a single candidate ends the game at once.  The YES cost 1 + W[s] is
    non-decreasing in s and the NO cost is non-increasing, so the minimum
    of their max sits at the crossing, which only moves right as m grows;
    one advancing pointer gives the exact minimum in O(n_max) total.
    """
    size = max(n_max, 1) + 1
    w = array("i", [0] * size)
    split = array("i", [0] * size)
    if n_max >= 2:
        w[2] = 1
        split[2] = 1
    p = 1
    for m in range(3, n_max + 1):
        while p + 1 <= m - 1:
            s = p + 1
            rest = m - s
            if 1 + w[s] <= (1 if rest == 1 else 2) + w[rest]:
                p = s
            else:
                break
        rest = m - p
        best = max(1 + w[p], (1 if rest == 1 else 2) + w[rest])
        best_s = p
        if p + 1 <= m - 1:
            s = p + 1
            rest = m - s
            alt = max(1 + w[s], (1 if rest == 1 else 2) + w[rest])
            if alt < best:
                best, best_s = alt, s
        w[m] = best
        split[m] = best_s
    return w, split


def golden_literal_table(n_max: int) -> array:
    """Worst-case query counts when every split is exactly floor(m/phi)."""
    lit = array("i", [0] * (n_max + 1))
    for m in range(2, n_max + 1):
        s = phi_split(m)
        rest = m - s
        no_cost = (1 if rest == 1 else 2) + lit[rest]
        lit[m] = max(1 + lit[s], no_cost)
    return lit


def adversary_forced_tables(n_max: int, dp_split: array | None = None) -> tuple[array, array]:
    """Query counts the golden-ratio adversary forces out of each protocol.

    Returns (literal, dp) tables.  Against the literal protocol the
    adversary always answers YES, because the split size floor(m/phi) meets
    its own threshold exactly.
    """
    lit = array("i", [0] * (n_max + 1))
    for m in range(2, n_max + 1):
        lit[m] = 1 + lit[phi_split(m)]
    if dp_split is None:
        _, dp_split = golden_dp_tables(n_max)
    dp = array("i", [0] * (n_max + 1))
    for m in range(2, n_max + 1):
        s = dp_split[m]
        if s >= phi_split(m):
            dp[m] = 1 + dp[s]
        else:
            rest = m - s
            dp[m] = (1 if rest == 1 else 2) + dp[rest]
    return lit, dp


# --- exhaustive non-adaptive oracles -----------------------------------

def _roka_solves(fam: tuple[int, ...], n: int, full: int) -> bool:
    for d in range(n):
        bit = 1 << d
        inter = full
        for mask in fam:
            if mask & bit:
                inter &= mask
        if inter != bit:
            return False
    return True


def _model1_solves(fam: tuple[int, ...], n: int, full: int) -> bool:
    for d in range(n):
        bit = 1 << d
        inter = full
        union = 0
        for mask in fam:
            if mask & bit:
                inter &= mask
            else:
                union |= mask
        if inter != bit and (full & ~union) != bit:
            return False
    return True


def roka_min_queries(n: int, k_max: int) -> int:
    """Least k such that some k-set family lets the YES-receiver always
    identify the defective; -1 if none exists within k_max.

    Exhaustive over families of distinct subsets (duplicates never help and
    any solving multiset contains a distinct solving subfamily that can be
    padded back up with unused sets).
    """
    full = (1 << n) - 1
    for k in range(1, k_max + 1):
        for fam in combinations(range(1 << n), k):
            if _roka_solves(fam, n, full):
                return k
    return -1


def model1_min_queries(n: int, k_max: int) -> int:
    """Least k solving the YES-player/NO-player split; -1 if none."""
    full = (1 << n) - 1
    for k in range(1, k_max + 1):
        for fam in combinations(range(1 << n), k):
            if _model1_solves(fam, n, full):
                return k
    return -1


def _partition_solves(queries, n: int, r: int, full: int) -> bool:
    # queries: list of per-query part masks, parts[i] = mask of part i.
    for d in range(n):
        bit = 1 << d
        ok = False
        for i in range(r):
            cand = full
            for parts in queries:
                if parts[i] & bit:
                    cand &= parts[i]
            if cand == bit:
                ok = True
                break
        if not ok:
            return False
    return True


def _assignment_to_parts(assign: tuple[int, ...], r: int) -> tuple[int, ...]:
    parts = [0] * r
    for e, a in enumerate(assign):
        if a < r:
            parts[a] |= 1 << e
    return tuple(parts)


def _first_query_assignments(n: int, r: int, partition: bool):
    """Canonical first queries: assignment vectors sorted non-decreasing.

    Any solving system can be element-relabelled so its first query's
    assignment vector is sorted, so restricting the first query this way
    preserves both existence and refutation.
    """
    top = r if not partition else r - 1
    for combo in combinations_with_replacement(range(top + 1), n):
        yield combo


def _all_assignments(n: int, r: int, partition: bool):
    top = r if not partition else r - 1
    total = (top + 1) ** n
    for code in range(total):
        assign = []
        c = code
        for _ in range(n):
            assign.append(c % (top + 1))
            c //= top + 1
        yield tuple(assign)


def partition_min_queries(n: int, r: int, k_max: int, partition: bool) -> int:
    """Least k solving the r-player relay model; -1 if none within k_max.

    partition=True forces every query to cover the ground set (part index
    per element in 0..r-1); otherwise elements may stay outside all parts.
    Empty parts are allowed: they only weaken a query, so allowing them
    cannot create spurious solutions at a given k.
    """
    full = (1 << n) - 1
    rest_pool = [
        _assignment_to_parts(a, r) for a in _all_assignments(n, r, partition)
    ]
    for k in range(1, k_max + 1):
        for first in _first_query_assignments(n, r, partition):
            first_parts = _assignment_to_parts(first, r)
            if k == 1:
                if _partition_solves([first_parts], n, r, full):
                    return k
                continue
            stack = [first_parts]
            if _partition_search(stack, rest_pool, 0, k - 1, n, r, full):
                return k
    return -1


def _partition_search(stack, pool, start, remaining, n, r, full) -> bool:
    # Queries after the first are chosen with non-decreasing pool indices:
    # solvability does not depend on query order, so ordered rearrangements
    # are redundant.
    if remaining == 0:
        return _partition_solves(stack, n, r, full)
    for idx in range(start, len(pool)):
        stack.append(pool[idx])
        if _partition_search(stack, pool, idx, remaining - 1, n, r, full):
            return True
        stack.pop()
    return False
