"""Finite Kripke frames and models: satisfaction, frame properties, morphisms.

Worlds are arbitrary hashable identifiers (strings when loaded from JSON,
tuples in product constructions).  Relations are explicit pair sets, one per
agent, indexed 1..n.  All values are immutable after construction and all
operations are pure.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from .formula import (
    AgentIndexError,
    Atom,
    Box,
    Diamond,
    Dist,
    Formula,
    And,
    Iff,
    Implies,
    Not,
    Or,
    Some,
    atoms,
    has_node,
    subformulas,
)

_ATOM_RE = re.compile(r"[a-z][a-z0-9_]*")


class BudgetError(RuntimeError):
    """A configurable resource bound was exceeded."""


def _plain(value):
    """JSON-ready form of a world identifier; frozensets become sorted lists."""
    if value is None or isinstance(value, (str, int, bool)):
        return value
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    if isinstance(value, (set, frozenset)):
        items = [_plain(v) for v in value]
        items.sort(key=lambda x: json.dumps(x, separators=(",", ":")))
        return items
    raise TypeError(f"world component is not serializable: {value!r}")


def world_key(w) -> str:
    """Canonical string form of a world identifier, used as a JSON key."""
    if isinstance(w, str):
        return w
    return json.dumps(_plain(w), separators=(",", ":"))


@dataclass(frozen=True)
class Frame:
    """Finite frame (W, R_1..R_n); relations[i-1] holds agent i's world pairs.

    The constructor accepts relations as a length-n sequence of pair iterables
    or as a mapping keyed by agent index (int or string).
    """

    n: int
    worlds: tuple
    relations: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("agent count n must be at least 1")
        worlds = tuple(self.worlds)
        if not worlds:
            raise ValueError("worlds must be nonempty")
        world_set = set(worlds)
        if len(world_set) != len(worlds):
            raise ValueError("worlds must be distinct")
        rels = self.relations
        if isinstance(rels, Mapping):
            rels = [rels.get(i, rels.get(str(i), ())) for i in range(1, self.n + 1)]
        rels = tuple(rels)
        if len(rels) != self.n:
            raise ValueError(f"expected {self.n} relations, got {len(rels)}")
        cooked = []
        for pairs in rels:
            rel = set()
            for pair in pairs:
                w, u = pair
                if w not in world_set or u not in world_set:
                    raise ValueError(f"relation pair ({w!r}, {u!r}) references an unknown world")
                rel.add((w, u))
            cooked.append(frozenset(rel))
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "relations", tuple(cooked))
        index = {w: k for k, w in enumerate(worlds)}
        succ = []
        for rel in cooked:
            table = {w: set() for w in worlds}
            for w, u in rel:
                table[w].add(u)
            succ.append({w: frozenset(v) for w, v in table.items()})
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_succ", tuple(succ))

    @property
    def agents(self) -> range:
        return range(1, self.n + 1)

    def has_world(self, w) -> bool:
        return w in self._index

    def index(self, w) -> int:
        """Position of w in the frame's world order."""
        try:
            return self._index[w]
        except KeyError:
            raise ValueError(f"unknown world {w!r}") from None

    def _check_agent(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise AgentIndexError(f"agent index {i} out of range 1..{self.n}")

    def succ(self, i: int, w) -> frozenset:
        """R_i-successors of w."""
        self._check_agent(i)
        self.index(w)
        return self._succ[i - 1][w]

    def neighborhood(self, w) -> frozenset:
        """Worlds one step from w under any relation."""
        out = set()
        for table in self._succ:
            out |= table[w]
        return frozenset(out)

    def isucc(self, w) -> frozenset:
        """Successors of w under the intersection of all relations."""
        out = self._succ[0][w]
        for table in self._succ[1:]:
            out = out & table[w]
        return out


@dataclass(frozen=True)
class Model:
    """Model (frame, pi): the valuation assigns each world its true atoms.

    The constructor accepts the valuation as a mapping world -> iterable of
    atom names; missing worlds get the empty set.  Stored canonically as a
    tuple of (world, sorted atom tuple) pairs in frame world order.
    """

    frame: Frame
    valuation: tuple

    def __post_init__(self):
        raw = self.valuation
        items = dict(raw) if not isinstance(raw, Mapping) else dict(raw)
        for w in items:
            if not self.frame.has_world(w):
                raise ValueError(f"valuation references an unknown world {w!r}")
        cooked = []
        for w in self.frame.worlds:
            names = tuple(sorted(set(items.get(w, ()))))
            for name in names:
                if not isinstance(name, str) or not _ATOM_RE.fullmatch(name):
                    raise ValueError(f"bad atom name {name!r}")
            cooked.append((w, names))
        object.__setattr__(self, "valuation", tuple(cooked))
        object.__setattr__(self, "_atoms_at", {w: frozenset(names) for w, names in cooked})

    def atoms_at(self, w) -> frozenset:
        """Atom names true at w."""
        try:
            return self._atoms_at[w]
        except KeyError:
            raise ValueError(f"unknown world {w!r}") from None


def frame_of(x: Union[Frame, Model]) -> Frame:
    """The frame of x, whether x is a Frame or a Model."""
    return x if isinstance(x, Frame) else x.frame


@dataclass(frozen=True)
class WorldMap:
    """Total map between the world sets of two frames or models.

    The constructor accepts the mapping as a dict or pair iterable; it is
    stored as a tuple of (source world, target world) pairs in source world
    order.  Totality and image containment are enforced.
    """

    source: Union[Frame, Model]
    target: Union[Frame, Model]
    mapping: tuple

    def __post_init__(self):
        src = frame_of(self.source)
        tgt = frame_of(self.target)
        items = dict(self.mapping)
        for w in items:
            if not src.has_world(w):
                raise ValueError(f"map key {w!r} is not a source world")
        for w in src.worlds:
            if w not in items:
                raise ValueError(f"map is not total: {w!r} has no image")
        for u in items.values():
            if not tgt.has_world(u):
                raise ValueError(f"map value {u!r} is not a target world")
        cooked = tuple((w, items[w]) for w in src.worlds)
        object.__setattr__(self, "mapping", cooked)
        object.__setattr__(self, "_table", dict(cooked))

    def __call__(self, w):
        try:
            return self._table[w]
        except KeyError:
            raise ValueError(f"unknown world {w!r}") from None

    def as_dict(self) -> dict:
        return dict(self.mapping)


@dataclass(frozen=True)
class MorphismReport:
    """Outcome of a morphism check; falsy when a clause fails.

    clause is one of "surjectivity", "forward", "back", "valuation"; witness
    pins down the first violation found.
    """

    ok: bool
    clause: Optional[str] = None
    witness: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return f"{self.clause} fails at {self.witness!r}"


def _check_formula(fr: Frame, f: Formula) -> None:
    for g in subformulas(f):
        if isinstance(g, (Box, Diamond)):
            fr._check_agent(g.agent)
    if has_node(f, Dist) and not check_equivalence(fr):
        raise ValueError("the D operator requires an equivalence model")


def extension(m: Model, f: Formula) -> frozenset:
    """Worlds of m at which f holds, computed bottom-up over shared subformulas."""
    fr = m.frame
    _check_formula(fr, f)
    all_worlds = frozenset(fr.worlds)
    memo: dict = {}

    def ext(g: Formula) -> frozenset:
        if g in memo:
            return memo[g]
        if isinstance(g, Atom):
            out = frozenset(w for w in fr.worlds if g.name in m.atoms_at(w))
        elif isinstance(g, Not):
            out = all_worlds - ext(g.child)
        elif isinstance(g, And):
            out = ext(g.left) & ext(g.right)
        elif isinstance(g, Or):
            out = ext(g.left) | ext(g.right)
        elif isinstance(g, Implies):
            out = (all_worlds - ext(g.left)) | ext(g.right)
        elif isinstance(g, Iff):
            left, right = ext(g.left), ext(g.right)
            out = (left & right) | ((all_worlds - left) - right)
        elif isinstance(g, Box):
            body = ext(g.child)
            out = frozenset(w for w in fr.worlds if fr.succ(g.agent, w) <= body)
        elif isinstance(g, Diamond):
            body = ext(g.child)
            out = frozenset(w for w in fr.worlds if fr.succ(g.agent, w) & body)
        elif isinstance(g, Some):
            body = ext(g.child)
            out = frozenset(
                w for w in fr.worlds if any(fr.succ(i, w) & body for i in fr.agents)
            )
        elif isinstance(g, Dist):
            body = ext(g.child)
            out = frozenset(w for w in fr.worlds if fr.isucc(w) <= body)
        else:
            raise TypeError(f"not a formula node: {g!r}")
        memo[g] = out
        return out

    return ext(f)


def satisfies(m: Model, w, f: Formula) -> bool:
    """True iff f holds at world w of m."""
    m.frame.index(w)
    return w in extension(m, f)


def valid_on_model(m: Model, f: Formula) -> bool:
    """True iff f holds at every world of m."""
    return len(extension(m, f)) == len(m.frame.worlds)


def find_frame_countermodel(
    fr: Frame, f: Formula, *, max_assignments: int = 2**20
) -> Optional[tuple]:
    """First (model, world) falsifying f over valuations of f's atoms, or None.

    Valuations range only over the atoms occurring in f; other atoms cannot
    affect satisfaction.  Raises BudgetError when 2^(|W| * #atoms) exceeds
    max_assignments.
    """
    names = atoms(f)
    k = len(names)
    size = len(fr.worlds)
    if 2 ** (size * k) > max_assignments:
        raise BudgetError(
            f"frame validity needs 2^{size * k} valuations, over budget {max_assignments}"
        )
    for bits in itertools.product((False, True), repeat=size * k):
        valuation = {
            w: tuple(names[j] for j in range(k) if bits[wi * k + j])
            for wi, w in enumerate(fr.worlds)
        }
        m = Model(fr, valuation)
        holds = extension(m, f)
        if len(holds) < size:
            for w in fr.worlds:
                if w not in holds:
                    return (m, w)
    return None


def valid_on_frame(fr: Frame, f: Formula, *, max_assignments: int = 2**20) -> bool:
    """True iff f holds at every world under every valuation of its atoms."""
    return find_frame_countermodel(fr, f, max_assignments=max_assignments) is None


def _relation_is_equivalence(fr: Frame, i: int) -> bool:
    table = fr._succ[i - 1]
    for w in fr.worlds:
        s = table[w]
        if w not in s:
            return False
        for u in s:
            if table[u] != s:
                return False
    return True


def check_equivalence(fr: Frame) -> bool:
    """True iff every relation is reflexive, symmetric, and transitive."""
    cached = getattr(fr, "_equivalence_cache", None)
    if cached is None:
        cached = all(_relation_is_equivalence(fr, i) for i in fr.agents)
        object.__setattr__(fr, "_equivalence_cache", cached)
    return cached


def check_i(fr: Frame) -> bool:
    """True iff the intersection of all relations is the identity."""
    return all(fr.isucc(w) == frozenset((w,)) for w in fr.worlds)


def _nonempty_intersection(sets: tuple) -> bool:
    out = sets[0]
    for s in sets[1:]:
        out = out & s
        if not out:
            return False
    return bool(out)


def check_d(fr: Frame) -> bool:
    """True iff every n-tuple (w_1..w_n) has a join w with w_i R_i w for all i.

    Only distinct successor sets per agent matter, which keeps the product
    small on large symmetric frames.
    """
    per_agent = []
    for i in fr.agents:
        distinct = {}
        for w in fr.worlds:
            distinct.setdefault(fr.succ(i, w), None)
        per_agent.append(list(distinct))
    for combo in itertools.product(*per_agent):
        if not _nonempty_intersection(combo):
            return False
    return True


def check_wd(fr: Frame) -> bool:
    """True iff all w_1..w_n in a common one-step neighborhood have a join.

    Tests the condition: whenever each w_i (i = 1..n) is one step from some
    common w_0 under any relation, some w satisfies w_i R_i w for all i.
    """
    known: dict = {}
    for w0 in fr.worlds:
        hood = sorted(fr.neighborhood(w0), key=fr.index)
        if not hood:
            continue
        per_agent = []
        for i in fr.agents:
            distinct = {}
            for v in hood:
                distinct.setdefault(fr.succ(i, v), None)
            per_agent.append(list(distinct))
        for combo in itertools.product(*per_agent):
            verdict = known.get(combo)
            if verdict is None:
                verdict = _nonempty_intersection(combo)
                known[combo] = verdict
            if not verdict:
                return False
    return True


def equivalence_classes(fr: Frame, i: int) -> tuple:
    """Classes of R_i ordered by first world, each a tuple in world order."""
    fr._check_agent(i)
    if not _relation_is_equivalence(fr, i):
        raise ValueError(f"relation {i} is not an equivalence relation")
    seen = set()
    out = []
    for w in fr.worlds:
        if w in seen:
            continue
        members = tuple(v for v in fr.worlds if v in fr.succ(i, w))
        seen.update(members)
        out.append(members)
    return tuple(out)


def _restrict(x: Union[Frame, Model], members: tuple) -> Union[Frame, Model]:
    fr = frame_of(x)
    keep = set(members)
    rels = [
        {(w, u) for (w, u) in rel if w in keep and u in keep} for rel in fr.relations
    ]
    piece = Frame(fr.n, members, rels)
    if isinstance(x, Frame):
        return piece
    return Model(piece, {w: x.atoms_at(w) for w in members})


def connected_components(x: Union[Frame, Model]) -> list:
    """Components of the union of all relations, symmetrically closed.

    Returns (restricted frame-or-model, world tuple) pairs; worlds keep their
    relative order and components are ordered by first world.
    """
    fr = frame_of(x)
    adjacency = {w: set() for w in fr.worlds}
    for rel in fr.relations:
        for w, u in rel:
            adjacency[w].add(u)
            adjacency[u].add(w)
    seen: set = set()
    out = []
    for w in fr.worlds:
        if w in seen:
            continue
        stack = [w]
        seen.add(w)
        members = {w}
        while stack:
            v = stack.pop()
            for u in adjacency[v]:
                if u not in seen:
                    seen.add(u)
                    members.add(u)
                    stack.append(u)
        ordered = tuple(v for v in fr.worlds if v in members)
        out.append((_restrict(x, ordered), ordered))
    return out


def is_connected(x: Union[Frame, Model]) -> bool:
    return len(connected_components(x)) == 1


def generated_submodel(m: Model, w) -> Model:
    """The connected component of m containing w; satisfaction at w is preserved."""
    m.frame.index(w)
    for piece, members in connected_components(m):
        if w in members:
            return piece
    raise AssertionError("unreachable")


def disjoint_union(a: Frame, b: Frame) -> Frame:
    """Disjoint union; worlds are tagged (0, w) from a and (1, w) from b."""
    if a.n != b.n:
        raise ValueError(f"agent counts differ: {a.n} vs {b.n}")
    worlds = tuple((0, w) for w in a.worlds) + tuple((1, w) for w in b.worlds)
    rels = []
    for i in range(a.n):
        pairs = {((0, w), (0, u)) for (w, u) in a.relations[i]}
        pairs |= {((1, w), (1, u)) for (w, u) in b.relations[i]}
        rels.append(pairs)
    return Frame(a.n, worlds, rels)


def _initial_color(x: Union[Frame, Model], pred: list, w) -> tuple:
    fr = frame_of(x)
    degrees = tuple((len(fr._succ[i][w]), len(pred[i][w])) for i in range(fr.n))
    if isinstance(x, Model):
        return (degrees, tuple(sorted(x.atoms_at(w))))
    return (degrees, ())


def _predecessors(fr: Frame) -> list:
    pred = [{w: set() for w in fr.worlds} for _ in range(fr.n)]
    for i, rel in enumerate(fr.relations):
        for w, u in rel:
            pred[i][u].add(w)
    return pred


def find_isomorphism(
    a: Union[Frame, Model], b: Union[Frame, Model], *, max_worlds: int = 12
) -> Optional[WorldMap]:
    """A structure-preserving bijection from a to b, or None.

    Model arguments must agree on atoms world by world.  Uses joint color
    refinement, then backtracking with forward checking, trying the most
    constrained world first.  Raises BudgetError when either side has more
    than max_worlds worlds.
    """
    if isinstance(a, Model) != isinstance(b, Model):
        raise ValueError("cannot compare a Frame with a Model")
    fa, fb = frame_of(a), frame_of(b)
    if fa.n != fb.n:
        raise ValueError(f"agent counts differ: {fa.n} vs {fb.n}")
    if max(len(fa.worlds), len(fb.worlds)) > max_worlds:
        raise BudgetError(
            f"isomorphism search over {max(len(fa.worlds), len(fb.worlds))} worlds "
            f"exceeds the budget of {max_worlds}"
        )
    if len(fa.worlds) != len(fb.worlds):
        return None

    pred_a, pred_b = _predecessors(fa), _predecessors(fb)
    tagged = [("a", w) for w in fa.worlds] + [("b", w) for w in fb.worlds]

    def side(tag):
        return (fa, pred_a, a) if tag == "a" else (fb, pred_b, b)

    colors = {}
    initial = {}
    for tag, w in tagged:
        fr, pred, x = side(tag)
        initial[(tag, w)] = _initial_color(x, pred, w)
    palette = {sig: k for k, sig in enumerate(sorted(set(initial.values())))}
    colors = {tw: palette[sig] for tw, sig in initial.items()}

    while True:
        signatures = {}
        for tag, w in tagged:
            fr, pred, _ = side(tag)
            sig = (
                colors[(tag, w)],
                tuple(
                    tuple(sorted(colors[(tag, v)] for v in fr._succ[i][w]))
                    for i in range(fr.n)
                ),
                tuple(
                    tuple(sorted(colors[(tag, v)] for v in pred[i][w]))
                    for i in range(fr.n)
                ),
            )
            signatures[(tag, w)] = sig
        palette = {sig: k for k, sig in enumerate(sorted(set(signatures.values())))}
        refined = {tw: palette[signatures[tw]] for tw in signatures}
        if len(set(refined.values())) == len(set(colors.values())):
            colors = refined
            break
        colors = refined

    buckets_a: dict = {}
    buckets_b: dict = {}
    for w in fa.worlds:
        buckets_a.setdefault(colors[("a", w)], []).append(w)
    for w in fb.worlds:
        buckets_b.setdefault(colors[("b", w)], []).append(w)
    if set(buckets_a) != set(buckets_b):
        return None
    if any(len(buckets_a[c]) != len(buckets_b[c]) for c in buckets_a):
        return None

    def pair_ok(u, t, w, v):
        # consistency of candidate u->t with assigned w->v, both directions
        for i in range(fa.n):
            if (u in fa._succ[i][w]) != (t in fb._succ[i][v]):
                return False
            if (w in fa._succ[i][u]) != (v in fb._succ[i][t]):
                return False
        return True

    def self_ok(w, v):
        return all((w in fa._succ[i][w]) == (v in fb._succ[i][v]) for i in range(fa.n))

    domains = {
        w: [v for v in buckets_b[colors[("a", w)]] if self_ok(w, v)] for w in fa.worlds
    }
    if any(not dom for dom in domains.values()):
        return None
    assignment: dict = {}

    def backtrack(domains) -> bool:
        if not domains:
            return True
        w = min(domains, key=lambda u: (len(domains[u]), fa.index(u)))
        for v in domains[w]:
            narrowed = {}
            feasible = True
            for u, dom in domains.items():
                if u == w:
                    continue
                filtered = [t for t in dom if t != v and pair_ok(u, t, w, v)]
                if not filtered:
                    feasible = False
                    break
                narrowed[u] = filtered
            if not feasible:
                continue
            assignment[w] = v
            if backtrack(narrowed):
                return True
            del assignment[w]
        return False

    if not backtrack(domains):
        return None
    return WorldMap(a, b, dict(assignment))


def check_p_morphism(wm: WorldMap) -> MorphismReport:
    """Verify surjectivity, forward homomorphism, and back-simulation.

    Falsy report names the first violated clause with a witness:
    ("surjectivity", (uncovered target,)), ("forward", (agent, w, v)) for an
    edge (w, v) whose image is not an edge, ("back", (agent, w, u)) for a
    target successor u of the image of w with no preimage among w's
    successors.
    """
    src = frame_of(wm.source)
    tgt = frame_of(wm.target)
    if src.n != tgt.n:
        raise ValueError(f"agent counts differ: {src.n} vs {tgt.n}")
    image = {wm(w) for w in src.worlds}
    for u in tgt.worlds:
        if u not in image:
            return MorphismReport(False, "surjectivity", (u,))
    for i in src.agents:
        for w in src.worlds:
            target_succ = tgt.succ(i, wm(w))
            for v in sorted(src.succ(i, w), key=src.index):
                if wm(v) not in target_succ:
                    return MorphismReport(False, "forward", (i, w, v))
    for i in src.agents:
        for w in src.worlds:
            mapped = {wm(v) for v in src.succ(i, w)}
            for u in sorted(tgt.succ(i, wm(w)), key=tgt.index):
                if u not in mapped:
                    return MorphismReport(False, "back", (i, w, u))
    return MorphismReport(True)


def check_model_p_morphism(wm: WorldMap) -> MorphismReport:
    """Frame clauses plus world-by-world atom agreement between the models."""
    if not isinstance(wm.source, Model) or not isinstance(wm.target, Model):
        raise ValueError("model p-morphism check needs Model source and target")
    report = check_p_morphism(wm)
    if not report:
        return report
    for w in wm.source.frame.worlds:
        if wm.source.atoms_at(w) != wm.target.atoms_at(wm(w)):
            return MorphismReport(False, "valuation", (w, wm(w)))
    return MorphismReport(True)


def frame_to_json(fr: Frame) -> dict:
    """JSON-ready dict; worlds and relation pairs follow frame world order."""
    rels = {}
    for i in fr.agents:
        pairs = sorted(fr.relations[i - 1], key=lambda p: (fr.index(p[0]), fr.index(p[1])))
        rels[str(i)] = [[world_key(w), world_key(u)] for w, u in pairs]
    return {
        "n": fr.n,
        "worlds": [world_key(w) for w in fr.worlds],
        "relations": rels,
    }


def _pairs_from_blocks(worlds, blocks):
    seen = set()
    pairs = set()
    for block in blocks:
        for w in block:
            if w in seen:
                raise ValueError(f"world {w!r} appears in two partition blocks")
            seen.add(w)
        for w in block:
            for u in block:
                pairs.add((w, u))
    for w in worlds:
        if w not in seen:
            raise ValueError(f"world {w!r} is missing from the partition")
    return pairs


def frame_from_json(data: Mapping) -> Frame:
    """Load a frame from the JSON dict form; accepts relations or partitions."""
    n = data["n"]
    worlds = tuple(data["worlds"])
    if "relations" in data and "partitions" in data:
        raise ValueError("give either 'relations' or 'partitions', not both")
    if "partitions" in data:
        parts = data["partitions"]
        rels = {}
        for i in range(1, n + 1):
            blocks = parts.get(str(i), parts.get(i))
            if blocks is None:
                raise ValueError(f"missing partition for agent {i}")
            rels[i] = _pairs_from_blocks(worlds, blocks)
        return Frame(n, worlds, rels)
    if "relations" not in data:
        raise ValueError("frame JSON needs 'relations' or 'partitions'")
    rels = data["relations"]
    return Frame(
        n,
        worlds,
        {i: [tuple(p) for p in rels.get(str(i), rels.get(i, ()))] for i in range(1, n + 1)},
    )


def frame_from_partitions(n: int, worlds: Iterable, partitions) -> Frame:
    """Equivalence frame from one block list per agent."""
    worlds = tuple(worlds)
    partitions = list(partitions)
    if len(partitions) != n:
        raise ValueError(f"expected {n} partitions, got {len(partitions)}")
    return Frame(n, worlds, [_pairs_from_blocks(worlds, blocks) for blocks in partitions])


def model_to_json(m: Model) -> dict:
    data = frame_to_json(m.frame)
    data["valuation"] = {world_key(w): list(names) for w, names in m.valuation}
    return data


def model_from_json(data: Mapping) -> Model:
    fr = frame_from_json(data)
    raw = data.get("valuation", {})
    by_key = {world_key(w): w for w in fr.worlds}
    valuation = {}
    for key, names in raw.items():
        if key not in by_key:
            raise ValueError(f"valuation references an unknown world {key!r}")
        valuation[by_key[key]] = tuple(names)
    return Model(fr, valuation)


def world_map_to_json(wm: WorldMap) -> dict:
    return {"map": {world_key(w): world_key(u) for w, u in wm.mapping}}


def world_map_from_json(
    data: Mapping, source: Union[Frame, Model], target: Union[Frame, Model]
) -> WorldMap:
    src_by_key = {world_key(w): w for w in frame_of(source).worlds}
    tgt_by_key = {world_key(w): w for w in frame_of(target).worlds}
    mapping = {}
    for key, value in data["map"].items():
        if key not in src_by_key:
            raise ValueError(f"map key {key!r} is not a source world")
        if value not in tgt_by_key:
            raise ValueError(f"map value {value!r} is not a target world")
        mapping[src_by_key[key]] = tgt_by_key[value]
    return WorldMap(source, target, mapping)
