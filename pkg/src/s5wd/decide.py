"""Bounded decision procedure over finite equivalence models.

Satisfiability is searched over connected frames of a requested class (e, ed,
ewd, edi) up to a world bound, enumerating one frame per isomorphism class
and all valuations of the formula's atoms.  An exhausted search claims
unsatisfiability only when the bound provably covers the finite-model
property for the class; otherwise the verdict is an honest unknown.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .formula import (
    Box,
    Diamond,
    Dist,
    Formula,
    Not,
    expand_s,
    formula_size,
    has_node,
    parse,
    subformulas,
)
from .kripke import (
    AgentIndexError,
    BudgetError,
    Frame,
    Model,
    check_d,
    check_equivalence,
    check_i,
    check_wd,
    find_frame_countermodel,
    find_isomorphism,
    frame_from_partitions,
    is_connected,
)

CLASS_NAMES = ("e", "ed", "ewd", "edi")

_CLASS_PREDICATES = {
    "e": (),
    "ed": (check_d,),
    "ewd": (check_wd,),
    "edi": (check_d, check_i),
}


def frame_in_class(fr: Frame, klass: str) -> bool:
    """True iff fr is an equivalence frame with the class's extra properties."""
    if klass not in CLASS_NAMES:
        raise ValueError(f"unknown frame class {klass!r}; expected one of {CLASS_NAMES}")
    if not check_equivalence(fr):
        return False
    return all(pred(fr) for pred in _CLASS_PREDICATES[klass])


@dataclass(frozen=True)
class Verdict:
    """Outcome of a bounded decision.

    kind is one of "satisfiable", "unsatisfiable", "valid", "countermodel",
    "unknown".  Witness fields are set for "satisfiable" (world satisfies the
    query) and "countermodel" (world falsifies it); bound echoes the world
    bound the search ran with.
    """

    kind: str
    witness_model: Optional[Model] = None
    witness_world: object = None
    bound: int = 0

    @property
    def decided(self) -> bool:
        return self.kind != "unknown"


def _bell_numbers(k: int) -> list:
    # bell[j] = number of partitions of a j-set, via the Bell triangle
    bell = [1]
    row = [1]
    for _ in range(k):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
        bell.append(row[0])
    return bell


def _set_partitions(k: int) -> Iterator[list]:
    """All partitions of {0..k-1} as block lists, in restricted-growth order."""
    assignment = [0] * k

    def rec(pos: int, used: int) -> Iterator[list]:
        if pos == k:
            blocks: dict = {}
            for idx, b in enumerate(assignment):
                blocks.setdefault(b, []).append(idx)
            yield [blocks[b] for b in sorted(blocks)]
            return
        for b in range(used + 1):
            assignment[pos] = b
            yield from rec(pos + 1, max(used, b + 1))

    yield from rec(0, 0)


def _frame_signature(fr: Frame) -> tuple:
    per_world = []
    for w in fr.worlds:
        per_world.append(
            tuple(len(fr.succ(i, w)) for i in fr.agents) + (len(fr.isucc(w)),)
        )
    return tuple(sorted(per_world))


def enumerate_frames(
    n: int,
    max_worlds: int,
    klass: str = "e",
    *,
    connected_only: bool = False,
    budget: int = 50_000,
) -> Iterator[Frame]:
    """One representative per isomorphism class of frames with <= max_worlds
    worlds in the given class, built from n-tuples of set partitions.

    Raises BudgetError when the raw partition-tuple count exceeds budget.
    """
    if klass not in CLASS_NAMES:
        raise ValueError(f"unknown frame class {klass!r}; expected one of {CLASS_NAMES}")
    if n < 1 or max_worlds < 1:
        raise ValueError("need n >= 1 and max_worlds >= 1")
    bells = _bell_numbers(max_worlds)
    total = sum(bells[k] ** n for k in range(1, max_worlds + 1))
    if total > budget:
        raise BudgetError(
            f"enumeration would scan {total} partition tuples, over budget {budget}"
        )
    for k in range(1, max_worlds + 1):
        worlds = [f"w{j}" for j in range(k)]
        parts = [
            [[worlds[idx] for idx in block] for block in partition]
            for partition in _set_partitions(k)
        ]
        accepted: dict = {}
        for combo in itertools.product(parts, repeat=n):
            fr = frame_from_partitions(n, worlds, combo)
            if not frame_in_class(fr, klass):
                continue
            if connected_only and not is_connected(fr):
                continue
            bucket = accepted.setdefault(_frame_signature(fr), [])
            if any(
                find_isomorphism(fr, prev, max_worlds=k) is not None for prev in bucket
            ):
                continue
            bucket.append(fr)
            yield fr


def _check_agents(f: Formula, n: int) -> None:
    for g in subformulas(f):
        if isinstance(g, (Box, Diamond)) and not 1 <= g.agent <= n:
            raise AgentIndexError(f"agent index {g.agent} out of range 1..{n}")


def _may_claim_unsat(g: Formula, klass: str, max_worlds: int) -> bool:
    # The filtration argument bounds satisfying models by 2^size; it does not
    # apply to the D operator and does not preserve the I property.
    if klass == "edi":
        return False
    if has_node(g, Dist):
        return False
    stripped = g
    while isinstance(stripped, Not):
        stripped = stripped.child
    return max_worlds >= 2 ** formula_size(stripped)


def decide_satisfiability(
    f: Formula,
    n: int,
    max_worlds: int,
    *,
    klass: str = "ed",
    max_assignments: int = 2**20,
    frame_budget: int = 50_000,
) -> Verdict:
    """Search models of the class up to max_worlds worlds for a witness of f.

    Returns kind "satisfiable" with the first witness in canonical order,
    "unsatisfiable" when the exhausted bound covers the finite-model
    property, else "unknown".
    """
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    _check_agents(f, n)
    g = expand_s(f, n)
    target = Not(g)
    for fr in enumerate_frames(
        n, max_worlds, klass, connected_only=True, budget=frame_budget
    ):
        found = find_frame_countermodel(fr, target, max_assignments=max_assignments)
        if found is not None:
            model, world = found
            return Verdict("satisfiable", model, world, max_worlds)
    if _may_claim_unsat(g, klass, max_worlds):
        return Verdict("unsatisfiable", bound=max_worlds)
    return Verdict("unknown", bound=max_worlds)


def decide_validity(
    f: Formula,
    n: int,
    max_worlds: int,
    *,
    klass: str = "ed",
    max_assignments: int = 2**20,
    frame_budget: int = 50_000,
) -> Verdict:
    """Dual search: a model of ~f is a countermodel of f; none within a
    FMP-covering bound means f is valid on the class."""
    verdict = decide_satisfiability(
        Not(f),
        n,
        max_worlds,
        klass=klass,
        max_assignments=max_assignments,
        frame_budget=frame_budget,
    )
    if verdict.kind == "satisfiable":
        return Verdict(
            "countermodel", verdict.witness_model, verdict.witness_world, verdict.bound
        )
    if verdict.kind == "unsatisfiable":
        return Verdict("valid", bound=verdict.bound)
    return verdict


def catach_instance() -> Formula:
    """The two-agent interchange axiom <1>[2]p -> [2]<1>p."""
    return parse("<1>[2]p -> [2]<1>p", 2)
