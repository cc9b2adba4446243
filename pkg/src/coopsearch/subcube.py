"""Subcube query sets.

The adaptive strategies identify elements with their binary codes and only
ever query sets of the form "all elements whose code matches a partial bit
assignment" (a subcube of the code hypercube, truncated to the codes that
exist).  Representing queries this way keeps every engine operation
polynomial in the code length instead of the ground-set size, which is what
makes the sampled harnesses at n = 2**14 cheap.

Bit positions are 1-based with position 1 the most significant of the
``L = ceil(log2 n)`` code bits.
"""

from __future__ import annotations

from typing import Iterator


def code_length(n: int) -> int:
    """Number of code bits used for a ground set of n >= 2 elements."""
    if n < 2:
        raise ValueError("ground set needs at least 2 elements")
    return (n - 1).bit_length()


def bit_of(x: int, pos: int, length: int) -> int:
    """Bit of x at 1-based position pos (1 = most significant)."""
    return (x >> (length - pos)) & 1


def count_matching(n: int, length: int, bits: dict[int, int]) -> int:
    """Count codes in [0, n) whose binary form matches the partial pattern.

    Most-significant-first walk of n's bits: whenever n has a 1 we may
    branch below it (prefix strictly smaller, suffix free up to the
    pattern); we stay on the tight path only while the pattern allows n's
    own bit.  The tight path itself is x == n, which is excluded.
    """
    free_below = [1] * (length + 2)
    for pos in range(length, 0, -1):
        free_below[pos] = free_below[pos + 1] * (1 if pos in bits else 2)
    total = 0
    for pos in range(1, length + 1):
        nb = bit_of(n, pos, length)
        want = bits.get(pos)
        if nb == 1:
            if want is None or want == 0:
                total += free_below[pos + 1]
            if want == 0:
                return total
        else:
            if want == 1:
                return total
    return total


class SubcubeSet:
    """Immutable subset of {0..n-1} defined by a partial bit assignment.

    Two instances are equal iff they denote the same subset; the canonical
    form used for hashing tightens the pattern to fix every position that
    is constant across the members (truncation at n can force extra bits).
    """

    __slots__ = ("n", "length", "bits", "empty", "_size", "_canon")

    def __init__(self, n: int, bits: dict[int, int] | None = None, empty: bool = False):
        self.n = n
        self.length = code_length(n)
        self.bits = dict(bits) if bits else {}
        self.empty = empty
        for pos, val in self.bits.items():
            if not (1 <= pos <= self.length) or val not in (0, 1):
                raise ValueError(f"bad pattern entry {pos}:{val}")
        self._size: int | None = 0 if empty else None
        self._canon: tuple | None = None

    @classmethod
    def full(cls, n: int) -> "SubcubeSet":
        return cls(n)

    @classmethod
    def empty_set(cls, n: int) -> "SubcubeSet":
        return cls(n, empty=True)

    @classmethod
    def singleton(cls, n: int, x: int) -> "SubcubeSet":
        length = code_length(n)
        return cls(n, {p: bit_of(x, p, length) for p in range(1, length + 1)})

    @classmethod
    def bit_set(cls, n: int, pos: int, val: int) -> "SubcubeSet":
        """All elements whose code bit at pos equals val."""
        return cls(n, {pos: val})

    def size(self) -> int:
        if self._size is None:
            self._size = count_matching(self.n, self.length, self.bits)
        return self._size

    def __len__(self) -> int:
        return self.size()

    def __contains__(self, x: int) -> bool:
        if self.empty or not (0 <= x < self.n):
            return False
        return all(bit_of(x, p, self.length) == v for p, v in self.bits.items())

    def is_empty(self) -> bool:
        return self.size() == 0

    def canonical(self) -> tuple:
        """Tightest pattern denoting the same member set.

        Every pattern with no members canonicalizes to one marker.
        """
        if self._canon is not None:
            return self._canon
        if self.size() == 0:
            self._canon = ("empty",)
            return self._canon
        tight = dict(self.bits)
        changed = True
        while changed:
            changed = False
            for pos in range(1, self.length + 1):
                if pos in tight:
                    continue
                tight[pos] = 0
                zero_count = count_matching(self.n, self.length, tight)
                if zero_count == 0:
                    tight[pos] = 1
                    changed = True
                    continue
                tight[pos] = 1
                if count_matching(self.n, self.length, tight) == 0:
                    tight[pos] = 0
                    changed = True
                    continue
                del tight[pos]
        self._canon = tuple(sorted(tight.items()))
        return self._canon

    def restrict(self, extra: dict[int, int]) -> "SubcubeSet":
        """Intersection with further bit constraints."""
        if self.empty:
            return self
        merged = dict(self.bits)
        for pos, val in extra.items():
            if merged.get(pos, val) != val:
                return SubcubeSet.empty_set(self.n)
            merged[pos] = val
        return SubcubeSet(self.n, merged)

    def members(self) -> Iterator[int]:
        """Enumerate members in increasing order.

        Intended for serialization and small-n checks; cost is O(n * L).
        """
        if self.empty:
            return
        for x in range(self.n):
            if x in self:
                yield x

    def the_element(self) -> int:
        """The unique member of a singleton set."""
        if self.size() != 1:
            raise ValueError("not a singleton")
        canon = dict(self.canonical())
        x = 0
        for pos in range(1, self.length + 1):
            if canon.get(pos) == 1:
                x |= 1 << (self.length - pos)
        return x

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubcubeSet):
            return NotImplemented
        return self.n == other.n and self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash((self.n, self.canonical()))

    def __repr__(self) -> str:
        if self.empty:
            return f"SubcubeSet(n={self.n}, empty)"
        pat = "".join(
            str(self.bits[p]) if p in self.bits else "*" for p in range(1, self.length + 1)
        )
        return f"SubcubeSet(n={self.n}, {pat})"
