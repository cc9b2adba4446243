"""Referee for the adaptive two-questioner games.

The referee owns all information flow: it computes answers, applies the
per-model relay rules, logs a transcript, and polls declarations.  Players
never see a global clock; each machine observes only its own events, so a
player cannot count the other's unanswered queries.

Observation entries (hashable tuples):

* ``("asked", q)``   the machine was scheduled and asked q (its own choice)
* ``("answer", b)``  the asker's own answer, only when the model shows it
* ``("relay", q)``   the partner's query q was answered YES

A machine chosen to ask must ask; there is no pass action.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import (
    InstanceTooLarge,
    ProtocolViolation,
    ScheduleExhausted,
    WrongDeclaration,
)


@dataclass(frozen=True)
class ModelSpec:
    """Information rules of one adaptive model."""

    id: int
    asker_sees_answer: bool
    success: str  # "either" or "both"


MODEL4 = ModelSpec(4, asker_sees_answer=False, success="either")
MODEL5 = ModelSpec(5, asker_sees_answer=True, success="either")
MODEL6 = ModelSpec(6, asker_sees_answer=True, success="both")
MODELS = {4: MODEL4, 5: MODEL5, 6: MODEL6}


@dataclass(frozen=True)
class Event:
    seq: int
    asker: str
    query: object
    answer: bool
    relays: tuple[tuple[str, object], ...]


@dataclass
class Transcript:
    model: int
    n: int
    defective: int
    schedule: str
    events: list[Event] = field(default_factory=list)
    declared: dict = field(default_factory=lambda: {"B": None, "C": None})

    @property
    def queries(self) -> int:
        return len(self.events)

    def to_json(self) -> str:
        return json.dumps(
            {
                "model": self.model,
                "n": self.n,
                "defective": self.defective,
                "schedule": self.schedule,
                "events": [
                    {
                        "asker": e.asker,
                        "query": sorted(e.query.members()),
                        "answer": e.answer,
                        "relays": [
                            {"player": p, "query": sorted(q.members())}
                            for p, q in e.relays
                        ],
                    }
                    for e in self.events
                ],
                "declared": self.declared,
            }
        )


def _other(player: str) -> str:
    return "C" if player == "B" else "B"


def _success(spec: ModelSpec, declared: dict) -> bool:
    if spec.success == "either":
        return declared["B"] is not None or declared["C"] is not None
    return declared["B"] is not None and declared["C"] is not None


def _poll(spec: ModelSpec, machines: dict, declared: dict, defective: int) -> bool:
    for role, mach in machines.items():
        if declared[role] is None:
            got = mach.ready()
            if got is not None:
                if got != defective:
                    raise WrongDeclaration(
                        f"player {role} declared {got}, defective is {defective}"
                    )
                declared[role] = got
    return _success(spec, declared)


def _step(spec: ModelSpec, machines: dict, turn: str, defective: int):
    """Run one event: the scheduled machine asks, the referee answers and
    relays.  Returns (query, answer, relays)."""
    mach = machines[turn]
    query = mach.propose()
    answer = defective in query
    mach.observe(("asked", query))
    relays = []
    if spec.asker_sees_answer:
        mach.observe(("answer", answer))
    if answer:
        partner = _other(turn)
        machines[partner].observe(("relay", query))
        relays.append((partner, query))
    return query, answer, tuple(relays)


def run_game(spec: ModelSpec, strategy, n: int, defective: int, schedule: str) -> Transcript:
    """Play one full game under an explicit schedule string over {B, C}.

    Deterministic: identical arguments give identical transcripts.  The
    run stops at the model's success condition; a schedule too short to
    reach it raises ScheduleExhausted.
    """
    if not (0 <= defective < n):
        raise ValueError("defective out of range")
    machines = {"B": strategy.machine(spec, n, "B"), "C": strategy.machine(spec, n, "C")}
    declared = {"B": None, "C": None}
    tr = Transcript(spec.id, n, defective, "")
    used = []
    for turn in schedule:
        if turn not in ("B", "C"):
            raise ValueError(f"bad schedule symbol {turn!r}")
        query, answer, relays = _step(spec, machines, turn, defective)
        used.append(turn)
        tr.events.append(Event(len(tr.events), turn, query, answer, relays))
        if _poll(spec, machines, declared, defective):
            tr.schedule = "".join(used)
            tr.declared = declared
            return tr
    raise ScheduleExhausted(
        f"model {spec.id}, n={n}, defective={defective}: schedule ran out"
    )


# --- exact information sets ----------------------------------------------

KNOWLEDGE_MAX_N = 16
KNOWLEDGE_MAX_DEPTH = 12


def knowledge(spec: ModelSpec, strategy, n: int, obs: tuple, role: str,
              depth: int | None = None) -> frozenset:
    """Defectives consistent with one player's observation log.

    The set of d' such that some schedule produces a run in which `role`'s
    log passes through `obs`; computed by exhaustive enumeration over
    (defective, turn tree).  Logs grow by appending, so `obs` occurs in a
    run iff it is a prefix of the player's final log.
    """
    if depth is None:
        depth = min(strategy.budget(n), KNOWLEDGE_MAX_DEPTH)
    if n > KNOWLEDGE_MAX_N or depth > KNOWLEDGE_MAX_DEPTH:
        raise InstanceTooLarge(
            f"knowledge evaluator accepts n <= {KNOWLEDGE_MAX_N}, "
            f"depth <= {KNOWLEDGE_MAX_DEPTH}"
        )
    out = set()
    obs = tuple(obs)
    for d in range(n):
        if _obs_reachable(spec, strategy, n, d, obs, role, depth):
            out.add(d)
    return frozenset(out)


def _obs_reachable(spec, strategy, n, d, obs, role, depth) -> bool:
    machines = {"B": strategy.machine(spec, n, "B"), "C": strategy.machine(spec, n, "C")}
    return _obs_dfs(spec, machines, n, d, obs, role, 0, depth)


def _obs_dfs(spec, machines, n, d, obs, role, matched, depth) -> bool:
    if matched == len(obs):
        return True
    if depth == 0:
        return False
    for turn in ("B", "C"):
        ms = {"B": machines["B"].clone(), "C": machines["C"].clone()}
        # Collect the target player's new entries for this event.
        query = ms[turn].propose()
        answer = d in query
        new_entries = []
        if turn == role:
            new_entries.append(("asked", query))
            if spec.asker_sees_answer:
                new_entries.append(("answer", answer))
        elif answer:
            new_entries.append(("relay", query))
        ms[turn].observe(("asked", query))
        if spec.asker_sees_answer:
            ms[turn].observe(("answer", answer))
        if answer:
            ms[_other(turn)].observe(("relay", query))
        m = matched
        ok = True
        for entry in new_entries:
            if m < len(obs) and obs[m] == entry:
                m += 1
            else:
                ok = False
                break
        if not ok:
            continue
        if m == len(obs):
            return True
        decl = {"B": ms["B"].ready(), "C": ms["C"].ready()}
        if _success(spec, decl):
            continue  # run over before obs completed
        if _obs_dfs(spec, ms, n, d, obs, role, m, depth - 1):
            return True
    return False


def knowledge_index(spec: ModelSpec, strategy, n: int, depth: int | None = None) -> dict:
    """Map (role, log-prefix) -> frozenset of consistent defectives, built
    from one sweep over the complete run forest.

    Equivalent to calling ``knowledge`` on every reachable prefix; used by
    the soundness checks, which need many lookups.
    """
    if depth is None:
        depth = strategy.budget(n) + 4
    index: dict = {}
    for d in range(n):
        machines = {
            "B": strategy.machine(spec, n, "B"),
            "C": strategy.machine(spec, n, "C"),
        }
        logs = {"B": (), "C": ()}
        index.setdefault(("B", ()), set()).add(d)
        index.setdefault(("C", ()), set()).add(d)
        _index_dfs(spec, machines, logs, d, index, depth)
    return {key: frozenset(v) for key, v in index.items()}


def _index_dfs(spec, machines, logs, d, index, depth):
    if depth == 0:
        raise ProtocolViolation("run exceeded the indexing depth")
    for turn in ("B", "C"):
        ms = {"B": machines["B"].clone(), "C": machines["C"].clone()}
        query = ms[turn].propose()
        answer = d in query
        ms[turn].observe(("asked", query))
        new_logs = dict(logs)
        added = [("asked", query)]
        if spec.asker_sees_answer:
            ms[turn].observe(("answer", answer))
            added.append(("answer", answer))
        new_logs[turn] = logs[turn] + tuple(added)
        if answer:
            partner = _other(turn)
            ms[partner].observe(("relay", query))
            new_logs[partner] = logs[partner] + (("relay", query),)
        for role in ("B", "C"):
            if new_logs[role] is not logs[role]:
                index.setdefault((role, new_logs[role]), set()).add(d)
        declared = {"B": ms["B"].ready(), "C": ms["C"].ready()}
        if _success(spec, declared):
            continue
        _index_dfs(spec, ms, new_logs, d, index, depth - 1)


# --- worst-case harness ---------------------------------------------------

@dataclass(frozen=True)
class WorstCaseReport:
    model: int
    n: int
    mode: str
    max_queries: int
    argmax_defective: int
    argmax_schedule: str
    runs: int
    max_specials: int = 0


def worst_case(spec: ModelSpec, strategy, n: int, mode: str = "exhaustive",
               trials: int = 0, seed: int = 0,
               guardrail_nodes: int = 50_000_000) -> WorstCaseReport:
    """Maximum query count over defectives and schedules.

    Exhaustive mode walks the full binary turn tree, which is valid because
    the machines are deterministic: adaptive scheduling cannot reach any
    history a turn string cannot.  Sampled mode draws seeded uniform turn
    strings.  Runs that exceed the strategy budget plus a margin raise
    ProtocolViolation, so a broken strategy fails loudly rather than
    spinning.
    """
    budget = strategy.budget(n)
    cap = budget + max(8, budget)
    best = {"q": -1, "d": -1, "sched": "", "runs": 0, "specials": 0}

    def note(depth, d, sched, specials):
        best["runs"] += 1
        if depth > best["q"]:
            best.update(q=depth, d=d, sched=sched)
        if specials > best["specials"]:
            best["specials"] = specials

    if mode == "exhaustive":
        est = n * (2 ** (cap + 1))
        if est > guardrail_nodes:
            raise InstanceTooLarge(
                f"exhaustive worst-case needs ~{est} nodes, over the guardrail"
            )
        for d in range(n):
            machines = {
                "B": strategy.machine(spec, n, "B"),
                "C": strategy.machine(spec, n, "C"),
            }
            _worst_dfs(spec, machines, d, 0, "", cap, note, 0)
    elif mode == "sampled":
        import random

        rng = random.Random(seed)
        for _ in range(trials):
            d = rng.randrange(n)
            machines = {
                "B": strategy.machine(spec, n, "B"),
                "C": strategy.machine(spec, n, "C"),
            }
            declared = {"B": None, "C": None}
            sched = []
            specials = 0
            while True:
                if len(sched) > cap:
                    raise ProtocolViolation(
                        f"run exceeded {cap} queries (model {spec.id}, n={n}, d={d})"
                    )
                turn = "B" if rng.random() < 0.5 else "C"
                sched.append(turn)
                query, answer, _ = _step(spec, machines, turn, d)
                if getattr(machines[turn], "last_was_special", False):
                    specials += 1
                if _poll(spec, machines, declared, d):
                    note(len(sched), d, "".join(sched), specials)
                    break
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return WorstCaseReport(
        spec.id, n, mode, best["q"], best["d"], best["sched"], best["runs"],
        best["specials"],
    )


def _worst_dfs(spec, machines, d, depth, sched, cap, note, specials):
    if depth >= cap:
        raise ProtocolViolation(
            f"run exceeded {cap} queries (model {spec.id}, defective {d})"
        )
    for turn in ("B", "C"):
        ms = {"B": machines["B"].clone(), "C": machines["C"].clone()}
        query, answer, _ = _step(spec, ms, turn, d)
        extra = 1 if getattr(ms[turn], "last_was_special", False) else 0
        declared = {"B": None, "C": None}
        if _poll(spec, ms, declared, d):
            note(depth + 1, d, sched + turn, specials + extra)
        else:
            _worst_dfs(spec, ms, d, depth + 1, sched + turn, cap, note, specials + extra)
