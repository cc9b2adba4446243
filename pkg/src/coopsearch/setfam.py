"""Set-family kernel.

Subsets are frozensets of 0-based element indices, a family is an ordered
tuple of subsets over a common ground size, and the dual transposes the
query/element incidence.  All counting is exact integer arithmetic; every
enumeration is colexicographic so outputs are reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator

from .errors import CountTooLarge, UnsupportedParams

Subset = frozenset


@dataclass(frozen=True)
class GroundInstance:
    """Ground set {0..n-1}; the hidden defective is a run-time index."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("ground set needs at least 2 elements")


@dataclass(frozen=True)
class Family:
    """Ordered family of subsets over ground {0..n-1}.

    Order matters (query j is meaningful) and duplicate sets are legal
    input for the checks; constructions never emit duplicates.  Ground size
    0 is allowed so that duals of empty families round-trip.
    """

    n: int
    sets: tuple[frozenset, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("ground size must be non-negative")
        for s in self.sets:
            if any(not (0 <= x < self.n) for x in s):
                raise ValueError(f"set {sorted(s)} out of range for n={self.n}")

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __getitem__(self, j: int) -> frozenset:
        return self.sets[j]

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "sets": [sorted(s) for s in self.sets]})

    @classmethod
    def from_json(cls, text: str) -> "Family":
        data = json.loads(text)
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> "Family":
        if not isinstance(data.get("n"), int):
            raise ValueError("field 'n' must be an integer")
        sets = data.get("sets")
        if not isinstance(sets, list):
            raise ValueError("field 'sets' must be a list of arrays")
        parsed = []
        for idx, arr in enumerate(sets):
            if not isinstance(arr, list) or any(not isinstance(x, int) for x in arr):
                raise ValueError(f"sets[{idx}] must be an array of integers")
            if arr != sorted(set(arr)):
                raise ValueError(f"sets[{idx}] must be strictly increasing")
            parsed.append(frozenset(arr))
        return cls(data["n"], tuple(parsed))


def family(n: int, sets: Iterable[Iterable[int]]) -> Family:
    """Convenience constructor from any iterables of indices."""
    return Family(n, tuple(frozenset(s) for s in sets))


def dual(fam: Family) -> Family:
    """Transpose the |fam| x n incidence matrix.

    The result has exactly n sets over ground size |fam|; set x contains
    query index j iff element x is in fam[j].
    """
    m = len(fam.sets)
    cols = tuple(
        frozenset(j for j in range(m) if x in fam.sets[j]) for x in range(fam.n)
    )
    return Family(m, cols)


def is_completely_separating(fam: Family) -> bool:
    """True iff every ordered pair x != y has a set with x in, y out."""
    n = fam.n
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            if not any(x in s and y not in s for s in fam.sets):
                return False
    return True


def max_chain_length(sets: Iterable[frozenset]) -> int:
    """Length of the longest strict-containment chain among distinct sets.

    Returns the number of sets on the chain; 0 for an empty family.  A
    family is k-Sperner iff the result is <= k.
    """
    distinct = sorted(set(sets), key=len)
    best: dict[frozenset, int] = {}
    for i, s in enumerate(distinct):
        longest = 1
        for t in distinct[:i]:
            if len(t) < len(s) and t < s:
                longest = max(longest, best[t] + 1)
        best[s] = longest
    return max(best.values(), default=0)


def is_k_sperner(sets: Iterable[frozenset], k: int) -> bool:
    return max_chain_length(sets) <= k


def is_sperner(sets: Iterable[frozenset]) -> bool:
    return max_chain_length(sets) <= 1


def colex_subsets(m: int, t: int) -> Iterator[frozenset]:
    """All t-subsets of {0..m-1} in colexicographic order."""
    if t == 0:
        yield frozenset()
        return
    for top in range(t - 1, m):
        for rest in colex_subsets(top, t - 1):
            yield rest | {top}


def middle_layer(m: int, t: int, count: int) -> tuple[frozenset, ...]:
    """First `count` t-subsets of {0..m-1} in colex order."""
    if not (0 <= t <= m):
        raise ValueError(f"need 0 <= t <= m, got t={t}, m={m}")
    if count > comb(m, t):
        raise CountTooLarge(f"layer C({m},{t}) has only {comb(m, t)} sets, asked {count}")
    out = []
    for s in colex_subsets(m, t):
        if len(out) == count:
            break
        out.append(s)
    return tuple(out)


def spencer_min_queries(n: int) -> int:
    """Least m whose largest antichain covers n elements."""
    if n < 2:
        raise ValueError("need n >= 2")
    m = 0
    while comb(m, m // 2) < n:
        m += 1
    return m


def erdos_max_ksperner(m: int, k: int) -> int:
    """Largest cardinality of a k-Sperner family on an m-element set."""
    if not (1 <= k <= m):
        raise UnsupportedParams(f"need 1 <= k <= m, got k={k}, m={m}")
    return sum(comb(m, (m - k) // 2 + i) for i in range(1, k + 1))


def _g_value(model: str, k: int, r: int | None) -> int:
    if model == "roka":
        return comb(k, k // 2)
    if model == "m1":
        return comb(k, k // 2) + comb(k, k // 2 + 1)
    if model == "m3":
        if r is None or r < 1:
            raise UnsupportedParams("m3 needs r >= 1")
        return r * comb(k, k // 2)
    if model == "m2":
        if r is None or r < 2:
            raise UnsupportedParams("m2 needs r >= 2")
        if r == 2:
            return comb(k, k // 2) + comb(k, k // 2 + 1)
        if k == 2:
            return 2 * r - 1
        return r * comb(k, k // 2)
    raise UnsupportedParams(f"unknown model {model!r}")


def bound(model: str, mode: str, *, n: int | None = None, k: int | None = None,
          r: int | None = None) -> int:
    """Closed-form query/capacity bounds for the non-adaptive models.

    mode "g": largest ground size solvable with k queries (k >= 2; the
    two-query capacity formulas do not define k = 1).
    mode "f": least number of queries covering n elements.
    """
    if model not in ("roka", "m1", "m2", "m3"):
        raise UnsupportedParams(f"unknown model {model!r}")
    if mode in ("g", "g-of-k"):
        if k is None or k < 2:
            raise UnsupportedParams("g-mode needs k >= 2")
        return _g_value(model, k, r)
    if mode in ("f", "f-of-n"):
        if n is None or n < 2:
            raise UnsupportedParams("f-mode needs n >= 2")
        if model == "roka":
            return spencer_min_queries(n)
        if model == "m1":
            m = 1
            while _g_value("m1", m, None) < n:
                m += 1
            return m
        k = 2
        while _g_value(model, k, r) < n:
            k += 1
        return k
    raise UnsupportedParams(f"unknown mode {mode!r}")
