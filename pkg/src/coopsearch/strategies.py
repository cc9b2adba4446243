"""Deterministic strategy machines for the adaptive models.

All three protocols ride on the same bit-splitting core: elements get their
binary codes, player B walks the bit positions upward asking "is bit i
one", player C walks downward asking the complements.  Whenever a query is
answered YES the other player receives it, and because the walk order is
pre-agreed, a single relayed query also certifies every skipped query in
between was answered NO.  The model-specific machinery layered on top:

* model 5: nothing else; the asker sees its own answers and the walks meet
  after at most ceil(log n) + 1 total queries.
* model 6: both players must finish, so each player fires an always-YES
  full-set query after crossing a checkpoint position, telling the partner
  how far it got; a player that already knows the defective transmits it
  as a singleton query.
* model 4: the asker learns nothing, so progress is steered by a shared
  target window [lo, hi]; crossing the target (or facing a query whose
  answer is already known to be silent) substitutes a "special" query that
  is the intersection of everything the sender knows, which is always
  answered YES and therefore always delivered.

Special-query decoding never reads private structure: the receiver works
from the canonical form of the delivered set.  Soundness of the two decode
rules (merge every bit the canonical form fixes; conclude NO for any own
query not fixed there) rests on one invariant: every YES-answered query is
relayed, so anything the receiver got a YES for is part of the sender's
knowledge and must show up fixed in the transmitted set.  Senders protect
that invariant when shrinking a special to dodge a basic-query shape
collision: bits learned from relays are never dropped.
"""

from __future__ import annotations

from math import isqrt

from .engine import ModelSpec
from .errors import ProtocolViolation
from .subcube import SubcubeSet, code_length


def ceil_log2(n: int) -> int:
    if n < 1:
        raise ValueError("need n >= 1")
    return (n - 1).bit_length()


def ceil_sqrt(x: int) -> int:
    if x < 0:
        raise ValueError("need x >= 0")
    return 0 if x == 0 else isqrt(x - 1) + 1


def ceil_log2_log2(n: int) -> int:
    """Least k with 2**(2**k) >= n, i.e. ceil(log2(log2 n)) for n >= 2."""
    if n < 2:
        raise ValueError("need n >= 2")
    k = 0
    while 2 ** (2 ** k) < n:
        k += 1
    return k


class BitCode:
    """Binary element codes: bit position 1 is the most significant of
    L = ceil(log n) bits; only the n codes below n are in play."""

    def __init__(self, n: int):
        self.n = n
        self.length = code_length(n)

    def ones(self, pos: int) -> SubcubeSet:
        return SubcubeSet.bit_set(self.n, pos, 1)

    def zeros(self, pos: int) -> SubcubeSet:
        return SubcubeSet.bit_set(self.n, pos, 0)


def basic_query(role: str, i: int, code: BitCode) -> SubcubeSet:
    """The i-th scripted query of a player (1-based).

    B's i-th query asks bit i; C's i-th query asks the complement of the
    bit i positions from the other end.
    """
    if not (1 <= i <= code.length):
        raise IndexError(f"query index {i} outside 1..{code.length}")
    if role == "B":
        return code.ones(i)
    if role == "C":
        return code.zeros(code.length - i + 1)
    raise ValueError(f"unknown role {role!r}")


class _BitMachineBase:
    """Shared state: own walk position, known bits, partner coverage."""

    def __init__(self, n: int, role: str):
        if role not in ("B", "C"):
            raise ValueError(f"unknown role {role!r}")
        self.n = n
        self.role = role
        self.code = BitCode(n)
        self.length = self.code.length
        self.known: dict[int, int] = {}
        self.relay_bits: set[int] = set()
        # Own walk: B ascends from 1, C descends from L.
        self.pos = 1 if role == "B" else self.length
        # Partner coverage: positions the partner has certainly asked.
        # For B tracking C this is the lowest such position (init L+1 =
        # nothing); for C tracking B the highest (init 0).
        self.cov = self.length + 1 if role == "B" else 0
        self.await_pos: int | None = None
        self.last_was_special = False

    # -- state plumbing ---------------------------------------------------

    def clone(self):
        new = object.__new__(type(self))
        new.__dict__.update(self.__dict__)
        new.known = dict(self.known)
        new.relay_bits = set(self.relay_bits)
        return new

    # -- knowledge --------------------------------------------------------

    def _merge_bit(self, pos: int, val: int, from_relay: bool = False) -> None:
        old = self.known.get(pos)
        if old is not None and old != val:
            raise ProtocolViolation(
                f"{self.role}: contradictory bit {pos} ({old} vs {val})"
            )
        self.known[pos] = val
        if from_relay:
            self.relay_bits.add(pos)

    def knowledge_set(self) -> SubcubeSet:
        return SubcubeSet(self.n, self.known)

    def ready(self) -> int | None:
        t = self.knowledge_set()
        if t.size() == 1:
            return t.the_element()
        return None

    # -- own walk helpers ---------------------------------------------------

    def _own_basic(self, pos: int) -> SubcubeSet:
        return self.code.ones(pos) if self.role == "B" else self.code.zeros(pos)

    def _own_bit_from_answer(self, pos: int, answer: bool) -> int:
        # B asks "bit == 1", C asks "bit == 0".
        if self.role == "B":
            return 1 if answer else 0
        return 0 if answer else 1

    def _advance(self) -> None:
        self.pos += 1 if self.role == "B" else -1

    def _pos_exhausted(self) -> bool:
        return self.pos > self.length if self.role == "B" else self.pos < 1

    # -- partner helpers ----------------------------------------------------

    def _partner_basic(self, pos: int) -> SubcubeSet:
        return self.code.zeros(pos) if self.role == "B" else self.code.ones(pos)

    def _partner_bit_yes(self) -> int:
        # Partner C got YES on "bit == 0"; partner B on "bit == 1".
        return 0 if self.role == "B" else 1

    def _partner_bit_no(self) -> int:
        return 1 - self._partner_bit_yes()

    def _match_partner_basic(self, q: SubcubeSet) -> int | None:
        for j in range(1, self.length + 1):
            if q == self._partner_basic(j):
                return j
        return None

    def _fill_partner_gap(self, j: int) -> None:
        """Partner just reached position j: every position between j and
        the previous certified coverage was asked silently, hence NO."""
        if self.role == "B":
            if j >= self.cov:
                raise ProtocolViolation("partner basic above certified coverage")
            for p in range(j + 1, self.cov):
                self._merge_bit(p, self._partner_bit_no())
            self.cov = j
        else:
            if j <= self.cov:
                raise ProtocolViolation("partner basic below certified coverage")
            for p in range(self.cov + 1, j):
                self._merge_bit(p, self._partner_bit_no())
            self.cov = j

    def _fill_partner_through(self, p: int) -> None:
        """Partner certified to have asked everything through position p
        (checkpoint decode); silent positions in the gap were NO."""
        if self.role == "B":
            for q in range(p, self.cov):
                if q not in self.known:
                    self._merge_bit(q, self._partner_bit_no())
            self.cov = min(self.cov, p)
        else:
            for q in range(self.cov + 1, p + 1):
                if q not in self.known:
                    self._merge_bit(q, self._partner_bit_no())
            self.cov = max(self.cov, p)


class Model5Machine(_BitMachineBase):
    """Pure bit walk; the asker sees its answers, YES queries are relayed."""

    def propose(self) -> SubcubeSet:
        if self._pos_exhausted():
            raise ProtocolViolation(
                f"{self.role} scheduled with no scripted query left"
            )
        return self._own_basic(self.pos)

    def observe(self, entry) -> None:
        kind = entry[0]
        if kind == "asked":
            self.await_pos = self.pos
            self.last_was_special = False
            self._advance()
        elif kind == "answer":
            if self.await_pos is None:
                raise ProtocolViolation("answer with no pending query")
            self._merge_bit(self.await_pos, self._own_bit_from_answer(self.await_pos, entry[1]))
            self.await_pos = None
        elif kind == "relay":
            q = entry[1]
            j = self._match_partner_basic(q)
            if j is None:
                raise ProtocolViolation(f"{self.role}: unrecognized relay {q!r}")
            self._fill_partner_gap(j)
            self._merge_bit(j, self._partner_bit_yes(), from_relay=True)
        else:
            raise ProtocolViolation(f"unknown observation {entry!r}")


class Model6Machine(_BitMachineBase):
    """Bit walk plus checkpoint signalling so both players finish.

    After asking the scripted query at a checkpoint position, the next own
    query is the whole ground set (always YES, hence always delivered);
    counting those full-set signals tells the partner exactly how deep the
    sender's walk is, NO answers included.  A player that already knows
    the defective transmits it as a singleton query.
    """

    def __init__(self, n: int, role: str):
        super().__init__(n, role)
        s = ceil_sqrt(self.length)
        pts = [i * s for i in range(1, s + 1) if 1 <= i * s <= self.length]
        # B meets checkpoints going up, C going down.
        self.checkpoints = pts if role == "B" else list(reversed(pts))
        self.pending_signal = False
        self.partner_signals = 0

    def clone(self):
        new = super().clone()
        new.checkpoints = self.checkpoints
        return new

    def propose(self) -> SubcubeSet:
        el = self.ready()
        if el is not None:
            return SubcubeSet.singleton(self.n, el)
        if self.pending_signal:
            return SubcubeSet.full(self.n)
        if self._pos_exhausted():
            raise ProtocolViolation(f"{self.role} exhausted but undecided")
        return self._own_basic(self.pos)

    def observe(self, entry) -> None:
        kind = entry[0]
        if kind == "asked":
            if self.ready() is not None:
                self.last_was_special = False  # defective announcement
                self.await_pos = None
            elif self.pending_signal:
                self.pending_signal = False
                self.last_was_special = True
                self.await_pos = None
            else:
                self.await_pos = self.pos
                self.last_was_special = False
                if self.pos in self.checkpoints:
                    self.pending_signal = True
                self._advance()
        elif kind == "answer":
            if self.await_pos is not None:
                self._merge_bit(
                    self.await_pos, self._own_bit_from_answer(self.await_pos, entry[1])
                )
                self.await_pos = None
        elif kind == "relay":
            self._decode_relay(entry[1])
        else:
            raise ProtocolViolation(f"unknown observation {entry!r}")

    def _decode_relay(self, q: SubcubeSet) -> None:
        if q.size() == self.n:
            # Checkpoint signal: the sender has walked through its k-th
            # checkpoint, so silent positions beyond it were NO.
            self.partner_signals += 1
            if self.partner_signals > len(self.checkpoints):
                raise ProtocolViolation("more signals than checkpoints")
            partner_pts = (
                list(reversed(self.checkpoints)) if self.role == "B" else
                list(reversed(self.checkpoints))
            )
            p = partner_pts[self.partner_signals - 1]
            self._fill_partner_through(p)
            return
        if q.size() == 1:
            # Either the partner announced the defective or its scripted
            # query happens to be a singleton; both mean d is this element.
            el = q.the_element()
            for pos in range(1, self.length + 1):
                self._merge_bit(pos, (el >> (self.length - pos)) & 1)
            return
        j = self._match_partner_basic(q)
        if j is None:
            raise ProtocolViolation(f"{self.role}: unrecognized relay {q!r}")
        self._fill_partner_gap(j)
        self._merge_bit(j, self._partner_bit_yes(), from_relay=True)


class Model4Machine(_BitMachineBase):
    """Blind-asker protocol with a shared target window.

    Both machines keep identical [lo, hi] endpoints: every special query
    is answered YES and therefore seen by both players in the same order,
    and each special moves the sender's endpoint to the midpoint, so the
    window state never needs to be transmitted.  The sender swaps in a
    special when its walk crosses the midpoint target, runs off the end,
    or faces a query it already knows would be answered NO (a YES would
    have been worth asking: the relay tells the partner where the walk
    is).

    While a player has asked nothing at all, the partner has received
    nothing from it either, so the partner's entire walk is a fixed script
    of the common window state; the receiver aligns incoming relays
    against that script, which turns even an all-one-player schedule into
    a complete broadcast of the answers.
    """

    def __init__(self, n: int, role: str):
        super().__init__(n, role)
        self.lo = 1
        self.hi = self.length
        self.asked: set[int] = set()
        self.asked_anything = False
        # Script alignment while this player is starved.
        self.sim_pos = 1 if role == "C" else self.length  # partner's walk
        self.sim_live = True

    # -- target window ------------------------------------------------------

    def _wants_special(self) -> bool:
        if self._pos_exhausted():
            return True
        if self.role == "B":
            if 2 * self.pos > self.lo + self.hi:
                return True
            return self.known.get(self.pos) == 0  # would answer NO silently
        if 2 * self.pos < self.lo + self.hi:
            return True
        return self.known.get(self.pos) == 1  # complement would answer NO

    def _apply_endpoint(self, sender: str) -> None:
        if sender == "B":
            self.lo = (self.lo + self.hi) // 2 + 1
        else:
            self.hi = (self.lo + self.hi + 1) // 2 - 1

    # -- special content -----------------------------------------------------

    def _special_content(self) -> SubcubeSet:
        bits = dict(self.known)
        # Dodge shapes identical to this player's scripted queries so the
        # receiver can classify unambiguously; bits learned from relays
        # must survive (the receiver's silent-NO decode depends on them).
        basics = [self._own_basic(j) for j in range(1, self.length + 1)]
        while bits:
            cand = SubcubeSet(self.n, bits)
            if all(cand != b for b in basics):
                return cand
            droppable = sorted(p for p in bits if p not in self.relay_bits)
            if not droppable:
                raise ProtocolViolation("cannot shape special query safely")
            del bits[droppable[0]]
        return SubcubeSet.full(self.n)

    # -- proposing -----------------------------------------------------------

    def propose(self) -> SubcubeSet:
        el = self.ready()
        if el is not None:
            # Unreachable under either-success polling; kept for safety.
            return SubcubeSet.singleton(self.n, el)
        if self._wants_special():
            return self._special_content()
        return self._own_basic(self.pos)

    def observe(self, entry) -> None:
        kind = entry[0]
        if kind == "asked":
            self.sim_live = False if True and False else self.sim_live
            if self.ready() is not None:
                self.last_was_special = True
            elif self._wants_special():
                self.last_was_special = True
                self._apply_endpoint(self.role)
            else:
                self.last_was_special = False
                self.asked.add(self.pos)
                self._advance()
            self.asked_anything = True
            self.sim_live = False
        elif kind == "answer":
            raise ProtocolViolation("model 4 asker never sees an answer")
        elif kind == "relay":
            if self.sim_live:
                self._consume_relay_starved(entry[1])
            else:
                self._consume_relay(entry[1])
        else:
            raise ProtocolViolation(f"unknown observation {entry!r}")

    # -- starved alignment ----------------------------------------------------

    def _partner_wants_special_sim(self) -> bool:
        # Partner with empty knowledge: only window and exhaustion fire.
        if self.role == "B":
            # Partner is C, descending.
            return self.sim_pos < 1 or 2 * self.sim_pos < self.lo + self.hi
        return self.sim_pos > self.length or 2 * self.sim_pos > self.lo + self.hi

    def _consume_relay_starved(self, q: SubcubeSet) -> None:
        """Align one delivered query against the partner's fixed script.

        Having asked nothing, this player has sent nothing, so the partner
        knows nothing and its walk (including special timing and the X
        content of its specials) is a deterministic function of the shared
        window.  Script queries skipped between deliveries were NO.
        """
        full = SubcubeSet.full(self.n)
        while True:
            if self._partner_wants_special_sim():
                if q == full:
                    self._apply_endpoint("C" if self.role == "B" else "B")
                    return
                raise ProtocolViolation("starved alignment expected a signal")
            script_q = self._partner_basic(self.sim_pos)
            if q == script_q:
                self._merge_bit(self.sim_pos, self._partner_bit_yes(), from_relay=True)
                self._sim_advance(consumed=True)
                return
            self._merge_bit(self.sim_pos, self._partner_bit_no())
            self._sim_advance(consumed=False)

    def _sim_advance(self, consumed: bool) -> None:
        if self.role == "B":
            self.sim_pos -= 1
            self.cov = self.sim_pos + 1
        else:
            self.sim_pos += 1
            self.cov = self.sim_pos - 1

    # -- live decode ------------------------------------------------------------

    def _consume_relay(self, q: SubcubeSet) -> None:
        j = self._match_partner_basic(q)
        if j is not None:
            in_range = j < self.cov if self.role == "B" else j > self.cov
            if not in_range:
                raise ProtocolViolation("basic-shaped relay out of walk order")
            self._fill_partner_gap(j)
            self._merge_bit(j, self._partner_bit_yes(), from_relay=True)
            return
        # Special: merge everything the canonical form pins down, then
        # conclude NO for own queries the sender failed to mention.
        canon = q.canonical()
        if canon == ("empty",):
            raise ProtocolViolation("empty query relayed")
        for pos, val in canon:
            self._merge_bit(pos, val)
        for p in self.asked:
            if p not in dict(canon):
                own_no = 0 if self.role == "B" else 1
                if p not in self.known:
                    self._merge_bit(p, own_no)
        self._apply_endpoint("C" if self.role == "B" else "B")


# --- strategy bundles -------------------------------------------------------


class Strategy:
    """Factory plus declared worst-case budget for one model."""

    def __init__(self, model_id: int, machine_cls, budget_fn, specials_fn=None):
        self.model_id = model_id
        self._machine_cls = machine_cls
        self._budget_fn = budget_fn
        self._specials_fn = specials_fn

    def machine(self, spec: ModelSpec, n: int, role: str):
        if spec.id != self.model_id:
            raise ValueError(f"strategy for model {self.model_id}, got {spec.id}")
        return self._machine_cls(n, role)

    def budget(self, n: int) -> int:
        return self._budget_fn(n)

    def specials_budget(self, n: int) -> int | None:
        return self._specials_fn(n) if self._specials_fn else None


def model5_budget(n: int) -> int:
    return ceil_log2(n) + 1


def model6_budget(n: int) -> int:
    length = ceil_log2(n)
    return length + 2 * ceil_sqrt(length) + 2


def model4_budget(n: int) -> int:
    return ceil_log2(n) + ceil_log2_log2(n) + 2


def model6_specials_budget(n: int) -> int:
    return ceil_sqrt(ceil_log2(n)) + 1


def model4_specials_budget(n: int) -> int:
    length = ceil_log2(n)
    return ceil_log2(length) if length > 1 else 0


def make_model5(n: int, role: str) -> Model5Machine:
    return Model5Machine(n, role)


def make_model6(n: int, role: str) -> Model6Machine:
    return Model6Machine(n, role)


def make_model4(n: int, role: str) -> Model4Machine:
    return Model4Machine(n, role)


def strategy_for(model_id: int) -> Strategy:
    if model_id == 5:
        return Strategy(5, Model5Machine, model5_budget)
    if model_id == 6:
        return Strategy(6, Model6Machine, model6_budget, model6_specials_budget)
    if model_id == 4:
        return Strategy(
            4, Model4Machine, model4_budget,
            lambda n: model4_specials_budget(n) + 2,
        )
    raise ValueError(f"no strategy for model {model_id}")


# --- functional surface -------------------------------------------------------


def replay(model_id: int, n: int, role: str, obs) -> object:
    """Fresh machine with the whole observation log applied."""
    mach = strategy_for(model_id)._machine_cls(n, role)
    for entry in obs:
        mach.observe(entry)
    return mach


def next_query(model_id: int, n: int, role: str, obs) -> SubcubeSet:
    """The query this player's strategy asks after observing obs."""
    return replay(model_id, n, role, obs).propose()


def ready_from(model_id: int, n: int, role: str, obs) -> int | None:
    """The declaration (if any) after observing obs."""
    return replay(model_id, n, role, obs).ready()
