"""Broadcast environments: traces, joins, and hypercube decomposition.

Agents 0..n act simultaneously; every action has an external part that all
agents observe and an internal part that only affects the owner's private
state.  Agent 0 is the environment and is excluded from generated epistemic
frames.  A state is a pair (ext, priv) of length-(n+1) tuples: the joint
external action that produced the state and the agents' private states.  A
trace is a nonempty tuple of states; the generated frame relates traces with
equal perfect-recall observation sequences.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Mapping, Optional

from .kripke import (
    _ATOM_RE,
    AgentIndexError,
    BudgetError,
    Frame,
    Model,
    connected_components,
    find_isomorphism,
)
from .systems import GlobalStateSystem, f_map, is_full, is_hypercube, system_from_states

EPSILON = "eps"

BUILTIN_PROTOCOLS = ("pass", "play-any-card")


def _encode(value):
    """JSON-ready tagged form of a state/action component; invertible."""
    if value is None or isinstance(value, (str, int, bool)):
        return value
    if isinstance(value, tuple):
        return [_encode(v) for v in value]
    if isinstance(value, (set, frozenset)):
        items = [_encode(v) for v in value]
        items.sort(key=lambda x: json.dumps(x, separators=(",", ":")))
        return {"set": items}
    raise TypeError(f"value is not serializable: {value!r}")


def _decode(value):
    if value is None or isinstance(value, (str, int, bool)):
        return value
    if isinstance(value, list):
        return tuple(_decode(v) for v in value)
    if isinstance(value, dict) and set(value) == {"set"}:
        return frozenset(_decode(v) for v in value["set"])
    raise ValueError(f"cannot decode value: {value!r}")


def _key(value) -> str:
    return json.dumps(_encode(value), separators=(",", ":"))


def _sorted_tuple(values) -> tuple:
    return tuple(sorted(values, key=_key))


@dataclass(frozen=True)
class BroadcastEnvironment:
    """A broadcast environment for agents 0..n.

    external_actions, internal_actions and private_states are per-agent
    alphabets (index 0 is the environment); every external alphabet must
    contain EPSILON.  A private_states entry may be None to skip membership
    checks for that agent.  Give either initial_private (per-agent initial
    private states; the initial set is their full product, which makes the
    environment homogeneous) or an explicit initial_states list.  env_protocol
    maps agent-0 observations to action pairs; None means the passive
    protocol {(EPSILON, EPSILON)}.  transitions is one table per agent keyed
    by (joint external action, internal action, private state); None means
    private states never change.  valuation maps states to atom names.
    """

    n: int
    external_actions: tuple
    internal_actions: tuple
    private_states: tuple
    initial_private: Optional[tuple] = None
    initial_states: Optional[tuple] = None
    env_protocol: Optional[tuple] = None
    transitions: Optional[tuple] = None
    valuation: tuple = ()

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("need at least one agent besides the environment")
        width = self.n + 1
        ext = self._norm_alphabets(self.external_actions, "external_actions")
        for i, acts in enumerate(ext):
            if EPSILON not in acts:
                raise ValueError(f"external actions of agent {i} lack {EPSILON!r}")
        internal = self._norm_alphabets(self.internal_actions, "internal_actions")
        if len(self.private_states) != width:
            raise ValueError(f"private_states must have {width} entries")
        private = tuple(
            None if entry is None else _sorted_tuple(set(entry))
            for entry in self.private_states
        )
        for i, entry in enumerate(private):
            if entry is not None and not entry:
                raise ValueError(f"agent {i} has no private states")
        object.__setattr__(self, "external_actions", ext)
        object.__setattr__(self, "internal_actions", internal)
        object.__setattr__(self, "private_states", private)

        if (self.initial_private is None) == (self.initial_states is None):
            raise ValueError("give exactly one of initial_private or initial_states")
        blank = (EPSILON,) * width
        if self.initial_private is not None:
            if len(self.initial_private) != width:
                raise ValueError(f"initial_private must have {width} entries")
            pools = tuple(_sorted_tuple(set(p)) for p in self.initial_private)
            for i, pool in enumerate(pools):
                if not pool:
                    raise ValueError(f"agent {i} has no initial private states")
            states = tuple((blank, combo) for combo in itertools.product(*pools))
            object.__setattr__(self, "initial_private", pools)
        else:
            states = tuple(dict.fromkeys(
                (tuple(s[0]), tuple(s[1])) for s in self.initial_states
            ))
            if not states:
                raise ValueError("initial_states must be nonempty")
        states = _sorted_tuple(states)
        for s in states:
            self._check_state(s)
            if s[0] != blank:
                raise ValueError("initial states must carry the null external action")
        object.__setattr__(self, "initial_states", states)

        if self.env_protocol is None:
            if EPSILON not in internal[0]:
                raise ValueError(
                    "the passive environment protocol needs the null internal action"
                )
            proto_map = None
        else:
            items = (
                self.env_protocol.items()
                if isinstance(self.env_protocol, Mapping)
                else self.env_protocol
            )
            proto_map = {}
            for obs, actions in items:
                acts = _sorted_tuple(set(map(tuple, actions)))
                if not acts:
                    raise ValueError("environment protocol actions must be nonempty")
                for a, b in acts:
                    if a not in ext[0] or b not in internal[0]:
                        raise ValueError(f"unknown environment action {(a, b)!r}")
                proto_map[(tuple(obs[0]), obs[1])] = acts
            object.__setattr__(
                self,
                "env_protocol",
                tuple(sorted(proto_map.items(), key=lambda kv: _key(kv[0]))),
            )
        object.__setattr__(self, "_proto_map", proto_map)

        if self.transitions is None:
            tau_maps = None
        else:
            if len(self.transitions) != width:
                raise ValueError(f"transitions must have {width} entries")
            tau_maps = []
            normalized = []
            for i, table in enumerate(self.transitions):
                entries = table.items() if isinstance(table, Mapping) else table
                tau = {}
                for (avec, b, p), target in entries:
                    avec = tuple(avec)
                    if len(avec) != width:
                        raise ValueError("transition keys need a full joint action")
                    for j, a in enumerate(avec):
                        if a not in ext[j]:
                            raise ValueError(f"unknown external action {a!r} of agent {j}")
                    if b not in internal[i]:
                        raise ValueError(f"unknown internal action {b!r} of agent {i}")
                    for value in (p, target):
                        if private[i] is not None and value not in private[i]:
                            raise ValueError(f"unknown private state {value!r} of agent {i}")
                    tau[(avec, b, p)] = target
                tau_maps.append(tau)
                normalized.append(
                    tuple(sorted(tau.items(), key=lambda kv: _key(kv[0])))
                )
            object.__setattr__(self, "transitions", tuple(normalized))
        object.__setattr__(self, "_tau_maps", tau_maps)

        items = (
            self.valuation.items()
            if isinstance(self.valuation, Mapping)
            else self.valuation
        )
        val_map = {}
        for state, atoms in items:
            state = (tuple(state[0]), tuple(state[1]))
            self._check_state(state)
            names = tuple(sorted(set(atoms)))
            for a in names:
                if not isinstance(a, str) or not _ATOM_RE.fullmatch(a):
                    raise ValueError(f"bad atom name: {a!r}")
            if names:
                val_map[state] = names
        object.__setattr__(
            self,
            "valuation",
            tuple(sorted(val_map.items(), key=lambda kv: _key(kv[0]))),
        )
        object.__setattr__(self, "_val_map", val_map)
        object.__setattr__(self, "_initial_set", frozenset(self.initial_states))

    def _norm_alphabets(self, entries, label) -> tuple:
        if len(entries) != self.n + 1:
            raise ValueError(f"{label} must have {self.n + 1} entries")
        out = tuple(_sorted_tuple(set(entry)) for entry in entries)
        for i, entry in enumerate(out):
            if not entry:
                raise ValueError(f"{label} of agent {i} is empty")
        return out

    def _check_state(self, s) -> None:
        width = self.n + 1
        if len(s) != 2 or len(s[0]) != width or len(s[1]) != width:
            raise ValueError(f"malformed state: {s!r}")
        for i, a in enumerate(s[0]):
            if a not in self.external_actions[i]:
                raise ValueError(f"unknown external action {a!r} of agent {i}")
        for i, p in enumerate(s[1]):
            if self.private_states[i] is not None and p not in self.private_states[i]:
                raise ValueError(f"unknown private state {p!r} of agent {i}")

    @property
    def homogeneous(self) -> bool:
        """True iff the initial states are exactly a product of per-agent sets."""
        pools = [set() for _ in range(self.n + 1)]
        for _, priv in self.initial_states:
            for i, p in enumerate(priv):
                pools[i].add(p)
        count = 1
        for pool in pools:
            count *= len(pool)
        return count == len(self.initial_states)

    def atoms_at(self, state) -> tuple:
        return self._val_map.get(state, ())


@dataclass(frozen=True)
class AgentProtocol:
    """Memoryless protocol: a table from last observation to enabled action
    pairs, or a named builtin ("pass", "play-any-card")."""

    kind: str
    table: Optional[tuple] = None

    def __post_init__(self):
        if self.kind in BUILTIN_PROTOCOLS:
            if self.table is not None:
                raise ValueError(f"builtin protocol {self.kind!r} takes no table")
            object.__setattr__(self, "_table_map", None)
            return
        if self.kind != "table":
            raise ValueError(f"unknown protocol kind {self.kind!r}")
        items = (
            self.table.items() if isinstance(self.table, Mapping) else self.table
        )
        table_map = {}
        for obs, actions in items:
            acts = _sorted_tuple(set(map(tuple, actions)))
            if not acts:
                raise ValueError("protocol action sets must be nonempty")
            table_map[(tuple(obs[0]), obs[1])] = acts
        if not table_map:
            raise ValueError("protocol table is empty")
        object.__setattr__(
            self,
            "table",
            tuple(sorted(table_map.items(), key=lambda kv: _key(kv[0]))),
        )
        object.__setattr__(self, "_table_map", table_map)

    def enabled(self, obs) -> tuple:
        if self.kind == "pass":
            return ((EPSILON, EPSILON),)
        if self.kind == "play-any-card":
            hand = obs[1]
            if hand:
                return tuple((frozenset({c}), EPSILON) for c in sorted(hand))
            return ((frozenset(), EPSILON),)
        actions = self._table_map.get(obs)
        if actions is None:
            raise ValueError(f"protocol undefined for observation {_key(obs)}")
        return actions


@dataclass(frozen=True)
class JointProtocol:
    """One protocol per agent 1..n."""

    agents: tuple

    def __post_init__(self):
        agents = tuple(self.agents)
        if not agents:
            raise ValueError("a joint protocol needs at least one agent")
        for entry in agents:
            if not isinstance(entry, AgentProtocol):
                raise ValueError(f"not an agent protocol: {entry!r}")
        object.__setattr__(self, "agents", agents)


def trivial_protocol(n: int) -> JointProtocol:
    return JointProtocol(tuple(AgentProtocol("pass") for _ in range(n)))


def play_any_card_protocol(n: int) -> JointProtocol:
    return JointProtocol(tuple(AgentProtocol("play-any-card") for _ in range(n)))


def observation(e: BroadcastEnvironment, i: int, s) -> tuple:
    """What agent i sees of state s: the joint external action and its own
    private state."""
    if not 0 <= i <= e.n:
        raise AgentIndexError(f"agent index {i} out of range 0..{e.n}")
    return (s[0], s[1][i])


def perfect_recall_state(tr, i: int) -> tuple:
    """Agent i's observation sequence along the trace."""
    if not tr:
        raise ValueError("empty trace")
    width = len(tr[0][1])
    if not 0 <= i < width:
        raise AgentIndexError(f"agent index {i} out of range 0..{width - 1}")
    return tuple((s[0], s[1][i]) for s in tr)


def action_sequence(tr) -> tuple:
    """The joint external actions performed along the trace."""
    return tuple(s[0] for s in tr[1:])


def _env_enabled(e: BroadcastEnvironment, fin) -> tuple:
    if e._proto_map is None:
        return ((EPSILON, EPSILON),)
    obs = observation(e, 0, fin)
    actions = e._proto_map.get(obs)
    if actions is None:
        raise ValueError(f"environment protocol undefined for observation {_key(obs)}")
    return actions


def enabled_joint_actions(e: BroadcastEnvironment, p: JointProtocol, tr) -> frozenset:
    """All joint actions the protocols allow after the trace; a joint action
    is a length-(n+1) tuple of (external, internal) pairs."""
    if len(p.agents) != e.n:
        raise ValueError(f"protocol covers {len(p.agents)} agents, environment has {e.n}")
    fin = tr[-1]
    per_agent = [_env_enabled(e, fin)]
    for i in range(1, e.n + 1):
        actions = p.agents[i - 1].enabled(observation(e, i, fin))
        if not actions:
            raise ValueError(f"protocol of agent {i} returned no actions")
        for a, b in actions:
            if a not in e.external_actions[i] or b not in e.internal_actions[i]:
                raise ValueError(f"protocol action {(a, b)!r} unknown to agent {i}")
        per_agent.append(actions)
    return frozenset(itertools.product(*per_agent))


def _apply(e: BroadcastEnvironment, s, joint) -> tuple:
    ext = tuple(a for a, _ in joint)
    priv = []
    for i in range(e.n + 1):
        b = joint[i][1]
        p = s[1][i]
        if e._tau_maps is None:
            priv.append(p)
            continue
        target = e._tau_maps[i].get((ext, b, p))
        if target is None:
            raise ValueError(
                f"transition undefined for agent {i} at {_key((ext, b, p))}"
            )
        priv.append(target)
    return (ext, tuple(priv))


def replay_consistent(e: BroadcastEnvironment, p: JointProtocol, tr) -> bool:
    """True iff the trace starts initial and every step is reachable by an
    enabled joint action."""
    if not tr or tr[0] not in e._initial_set:
        return False
    for k in range(len(tr) - 1):
        options = {
            _apply(e, tr[k], j) for j in enabled_joint_actions(e, p, tr[: k + 1])
        }
        if tr[k + 1] not in options:
            return False
    return True


def generate_frame(
    e: BroadcastEnvironment, p: JointProtocol, depth: int, *, max_worlds: int = 20_000
) -> Frame:
    """Frame over all traces of length <= depth under the protocol; traces
    are related for agent i iff their agent-i observation sequences agree."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if len(p.agents) != e.n:
        raise ValueError(f"protocol covers {len(p.agents)} agents, environment has {e.n}")
    level = [(s,) for s in e.initial_states]
    worlds = list(level)
    if len(worlds) > max_worlds:
        raise BudgetError(f"more than {max_worlds} traces at depth 1")
    for _ in range(depth - 1):
        nxt = []
        seen = set()
        for tr in level:
            for joint in sorted(enabled_joint_actions(e, p, tr), key=_key):
                grown = tr + (_apply(e, tr[-1], joint),)
                if grown not in seen:
                    seen.add(grown)
                    nxt.append(grown)
        worlds.extend(nxt)
        if len(worlds) > max_worlds:
            raise BudgetError(f"more than {max_worlds} traces reached")
        level = nxt
    relations = []
    for i in range(1, e.n + 1):
        groups: dict = {}
        for tr in worlds:
            groups.setdefault(perfect_recall_state(tr, i), []).append(tr)
        relations.append(
            {(a, b) for block in groups.values() for a in block for b in block}
        )
    return Frame(e.n, worlds, relations)


def join(r1, r2, i: int) -> tuple:
    """The trace that follows r1 except for agent i's private states, which
    are taken from r2; requires equal joint external action sequences."""
    if len(r1) != len(r2) or action_sequence(r1) != action_sequence(r2):
        raise ValueError("traces have different action sequences")
    width = len(r1[0][1])
    if not 0 <= i < width:
        raise AgentIndexError(f"agent index {i} out of range 0..{width - 1}")
    out = []
    for s, t in zip(r1, r2):
        priv = list(s[1])
        priv[i] = t[1][i]
        out.append((s[0], tuple(priv)))
    return tuple(out)


def derived_valuation(e: BroadcastEnvironment, fr: Frame) -> Model:
    """Model over a generated frame: each trace gets the atoms of its final
    state under the environment's valuation."""
    return Model(fr, {tr: e.atoms_at(tr[-1]) for tr in fr.worlds})


@dataclass(frozen=True)
class ComponentReport:
    """One connected component of a trace frame: its members, shared action
    sequence, per-agent axis sizes (agent 0 first), and the verdict."""

    members: tuple
    action_sequence: Optional[tuple]
    axis_sizes: tuple
    ok: bool
    reason: Optional[str] = None
    witness: tuple = ()


@dataclass(frozen=True)
class DecompositionReport:
    components: tuple
    ok: bool

    def __bool__(self) -> bool:
        return self.ok


def verify_hypercube_decomposition(fr: Frame, *, mode: str = "hypercube") -> DecompositionReport:
    """Check that every connected component of a generated trace frame is the
    F image of a product of per-agent recall-state axes.

    mode "hypercube" requires the component to realize the full product of
    all axes including agent 0's (the homogeneous case); mode "full" only
    requires every combination of agents' axes to have some agent-0
    completion.  Failures carry a reason and witness instead of raising.
    """
    if mode not in ("hypercube", "full"):
        raise ValueError(f"unknown mode {mode!r}")
    reports = []
    for piece, members in connected_components(fr):
        shared = action_sequence(members[0])
        mismatch = next(
            (tr for tr in members if action_sequence(tr) != shared), None
        )
        if mismatch is not None:
            reports.append(
                ComponentReport(members, None, (), False, "action-mismatch",
                                (members[0], mismatch))
            )
            continue
        width = len(members[0][0][1])
        coords = {
            tr: tuple(perfect_recall_state(tr, i) for i in range(width))
            for tr in members
        }
        axes = [list(dict.fromkeys(coords[tr][i] for tr in members)) for i in range(width)]
        axis_sizes = tuple(len(axis) for axis in axes)
        product_size = 1
        for size in axis_sizes:
            product_size *= size
        realized = set(coords.values())
        if mode == "hypercube" and len(members) != product_size:
            missing = next(
                t for t in itertools.product(*axes) if t not in realized
            )
            reports.append(
                ComponentReport(members, shared, axis_sizes, False,
                                "missing-tuple", (missing,))
            )
            continue
        system = system_from_states(width - 1, list(coords.values()))
        if mode == "full" and not is_full(system):
            hole = next(
                combo
                for combo in itertools.product(*system.local_alphabets)
                if not any(state[1:] == combo for state in system.states)
            )
            reports.append(
                ComponentReport(members, shared, axis_sizes, False,
                                "not-full", (hole,))
            )
            continue
        wm = find_isomorphism(piece, f_map(system), max_worlds=len(members))
        if wm is None:
            reports.append(
                ComponentReport(members, shared, axis_sizes, False,
                                "not-isomorphic", ())
            )
            continue
        reports.append(ComponentReport(members, shared, axis_sizes, True))
    return DecompositionReport(tuple(reports), all(r.ok for r in reports))


def initial_system(e: BroadcastEnvironment) -> GlobalStateSystem:
    """The system of global states formed by the initial private states."""
    return system_from_states(e.n, [priv for _, priv in e.initial_states])


def build_card_game(deck_size: int, hand_size: int, modeling: str = "simple"):
    """Two players each hold a hand drawn from their own deck and repeatedly
    play a card face up; played cards are external, hands are private.

    The simple modeling gives the environment a single private state, so the
    environment is homogeneous.  The rich modeling makes the environment
    track both remaining decks and the face-up cards, which correlates its
    state with the hands; the initial states are then full but not a
    hypercube.  Returns (environment, play-any-card protocol).
    """
    if deck_size < 1 or not 0 <= hand_size <= deck_size:
        raise ValueError("need deck_size >= 1 and 0 <= hand_size <= deck_size")
    if modeling not in ("simple", "rich"):
        raise ValueError(f"unknown modeling {modeling!r}")
    n = 2
    deck = tuple(f"c{k}" for k in range(deck_size))
    full_deck = frozenset(deck)
    hands0 = [frozenset(c) for c in itertools.combinations(deck, hand_size)]
    plays = (EPSILON, frozenset()) + tuple(frozenset({c}) for c in deck)
    blank = (EPSILON,) * (n + 1)

    if modeling == "simple":
        initial = [(blank, ("1", h1, h2)) for h1 in hands0 for h2 in hands0]
    else:
        initial = [
            (blank, ((full_deck - h1, full_deck - h2, frozenset(), frozenset()), h1, h2))
            for h1 in hands0
            for h2 in hands0
        ]

    # close the state space under play-any-card with a passive environment,
    # recording transition entries along the way
    tau = [{}, {}, {}]
    seen = set(initial)
    frontier = list(initial)
    while frontier:
        grown = []
        for s in frontier:
            _, priv = s
            options = []
            for hand in (priv[1], priv[2]):
                if hand:
                    options.append([frozenset({c}) for c in sorted(hand)])
                else:
                    options.append([frozenset()])
            for c1, c2 in itertools.product(*options):
                ext = (EPSILON, c1, c2)
                if modeling == "simple":
                    p0 = "1"
                else:
                    d1, d2, f1, f2 = priv[0]
                    p0 = (d1 | f1, d2 | f2, c1, c2)
                tau[0][(ext, EPSILON, priv[0])] = p0
                tau[1][(ext, EPSILON, priv[1])] = priv[1] - c1
                tau[2][(ext, EPSILON, priv[2])] = priv[2] - c2
                t = (ext, (p0, priv[1] - c1, priv[2] - c2))
                if t not in seen:
                    seen.add(t)
                    grown.append(t)
        frontier = grown

    pools = [set(), set(), set()]
    for _, priv in seen:
        for i in range(3):
            pools[i].add(priv[i])
    valuation = {
        s: ("face_up_matches",)
        for s in seen
        if isinstance(s[0][1], frozenset) and len(s[0][1]) == 1 and s[0][1] == s[0][2]
    }
    common = dict(
        external_actions=((EPSILON,), plays, plays),
        internal_actions=((EPSILON,), (EPSILON,), (EPSILON,)),
        private_states=tuple(pools),
        transitions=tau,
        valuation=valuation,
    )
    if modeling == "simple":
        env = BroadcastEnvironment(
            n, initial_private=(("1",), hands0, hands0), **common
        )
    else:
        env = BroadcastEnvironment(n, initial_states=initial, **common)
    return env, play_any_card_protocol(n)


def env_from_hypercube(h: GlobalStateSystem, val) -> BroadcastEnvironment:
    """Degenerate broadcast environment whose depth-1 traces reproduce a
    hypercube system: every state is initial, nothing ever acts or changes,
    and the valuation mirrors val (a mapping from h's states to atoms)."""
    if not is_hypercube(h):
        raise ValueError("system is not a hypercube")
    width = h.n + 1
    alphabets = (h.env_alphabet,) + h.local_alphabets
    blank = (EPSILON,) * width
    return BroadcastEnvironment(
        h.n,
        external_actions=tuple((EPSILON,) for _ in range(width)),
        internal_actions=tuple((EPSILON,) for _ in range(width)),
        private_states=alphabets,
        initial_private=alphabets,
        valuation={(blank, s): tuple(val.get(s, ())) for s in h.states},
    )


def environment_to_json(e: BroadcastEnvironment) -> dict:
    data = {
        "n": e.n,
        "external_actions": [[_encode(a) for a in acts] for acts in e.external_actions],
        "internal_actions": [[_encode(a) for a in acts] for acts in e.internal_actions],
        "private_states": [
            None if entry is None else [_encode(p) for p in entry]
            for entry in e.private_states
        ],
        "valuation": {_key(s): list(atoms) for s, atoms in e.valuation},
    }
    if e.initial_private is not None:
        data["initial_private"] = [[_encode(p) for p in pool] for pool in e.initial_private]
    else:
        data["initial_states"] = [_encode(s) for s in e.initial_states]
    if e.env_protocol is not None:
        data["env_protocol"] = {
            _key(obs): [_encode(a) for a in acts] for obs, acts in e.env_protocol
        }
    else:
        data["env_protocol"] = None
    if e.transitions is not None:
        data["transitions"] = [
            {_key(key): _encode(target) for key, target in table}
            for table in e.transitions
        ]
    else:
        data["transitions"] = None
    return data


def environment_from_json(data: Mapping) -> BroadcastEnvironment:
    def unkey(s):
        return _decode(json.loads(s))

    kwargs = dict(
        external_actions=tuple(tuple(map(_decode, acts)) for acts in data["external_actions"]),
        internal_actions=tuple(tuple(map(_decode, acts)) for acts in data["internal_actions"]),
        private_states=tuple(
            None if entry is None else tuple(map(_decode, entry))
            for entry in data["private_states"]
        ),
        valuation={unkey(k): tuple(v) for k, v in data.get("valuation", {}).items()},
    )
    if data.get("initial_private") is not None:
        kwargs["initial_private"] = tuple(
            tuple(map(_decode, pool)) for pool in data["initial_private"]
        )
    else:
        kwargs["initial_states"] = tuple(map(_decode, data["initial_states"]))
    if data.get("env_protocol") is not None:
        kwargs["env_protocol"] = {
            unkey(k): tuple(map(_decode, v)) for k, v in data["env_protocol"].items()
        }
    if data.get("transitions") is not None:
        kwargs["transitions"] = tuple(
            {unkey(k): _decode(v) for k, v in table.items()}
            for table in data["transitions"]
        )
    return BroadcastEnvironment(data["n"], **kwargs)


def protocol_to_json(p: JointProtocol) -> dict:
    agents = []
    for entry in p.agents:
        if entry.kind == "table":
            agents.append({
                "kind": "table",
                "table": {_key(obs): [_encode(a) for a in acts] for obs, acts in entry.table},
            })
        else:
            agents.append({"kind": entry.kind})
    return {"agents": agents}


def protocol_from_json(data: Mapping) -> JointProtocol:
    agents = []
    for entry in data["agents"]:
        if entry["kind"] == "table":
            table = {
                _decode(json.loads(k)): tuple(map(_decode, v))
                for k, v in entry["table"].items()
            }
            agents.append(AgentProtocol("table", table))
        else:
            agents.append(AgentProtocol(entry["kind"]))
    return JointProtocol(tuple(agents))
