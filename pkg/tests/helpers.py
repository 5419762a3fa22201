"""Seeded random generators and shared fixtures for the test suite."""

import random

from s5wd.formula import (
    And,
    Atom,
    Box,
    Diamond,
    Dist,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Some,
)
import itertools

from s5wd.kripke import (
    Frame,
    Model,
    WorldMap,
    frame_from_partitions,
    frame_of,
)
from s5wd.systems import GlobalStateSystem, system_from_states


def random_formula(
    rng: random.Random,
    n: int,
    atom_names: list[str],
    depth: int,
    *,
    allow_s: bool = False,
    allow_d: bool = False,
) -> Formula:
    """Random formula of modal/boolean nesting at most depth."""
    kinds = ["atom", "not", "and", "or", "implies", "iff", "box", "diamond"]
    if allow_s:
        kinds.append("some")
    if allow_d:
        kinds.append("dist")
    if depth <= 0:
        return Atom(rng.choice(atom_names))
    kind = rng.choice(kinds)
    if kind == "atom":
        return Atom(rng.choice(atom_names))
    if kind == "not":
        return Not(random_formula(rng, n, atom_names, depth - 1, allow_s=allow_s, allow_d=allow_d))
    if kind in ("and", "or", "implies", "iff"):
        node = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[kind]
        return node(
            random_formula(rng, n, atom_names, depth - 1, allow_s=allow_s, allow_d=allow_d),
            random_formula(rng, n, atom_names, depth - 1, allow_s=allow_s, allow_d=allow_d),
        )
    if kind == "box":
        return Box(
            rng.randint(1, n),
            random_formula(rng, n, atom_names, depth - 1, allow_s=allow_s, allow_d=allow_d),
        )
    if kind == "diamond":
        return Diamond(
            rng.randint(1, n),
            random_formula(rng, n, atom_names, depth - 1, allow_s=allow_s, allow_d=allow_d),
        )
    if kind == "some":
        return Some(random_formula(rng, n, atom_names, depth - 1, allow_s=allow_s, allow_d=allow_d))
    return Dist(random_formula(rng, n, atom_names, depth - 1, allow_s=allow_s, allow_d=allow_d))


def random_partition(rng: random.Random, items: list) -> list[list]:
    """Random set partition of items, uniform over assignments to open or new blocks."""
    blocks: list[list] = []
    for item in items:
        choice = rng.randint(0, len(blocks))
        if choice == len(blocks):
            blocks.append([item])
        else:
            blocks[choice].append(item)
    return blocks


def random_i_local(
    rng: random.Random, n: int, i: int, atom_names: list[str], depth: int
) -> Formula:
    """Random i-local formula: boolean skeleton over agent-i modal roots."""
    if depth <= 0 or rng.random() < 0.3:
        node = Box if rng.random() < 0.5 else Diamond
        return node(i, random_formula(rng, n, atom_names, max(depth, 1)))
    kind = rng.choice(["not", "and", "or", "implies", "iff"])
    if kind == "not":
        return Not(random_i_local(rng, n, i, atom_names, depth - 1))
    node = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[kind]
    return node(
        random_i_local(rng, n, i, atom_names, depth - 1),
        random_i_local(rng, n, i, atom_names, depth - 1),
    )


def random_equivalence_frame(
    rng: random.Random, n: int, size: int, prefix: str = "w"
) -> Frame:
    worlds = [f"{prefix}{k}" for k in range(size)]
    return frame_from_partitions(
        n, worlds, [random_partition(rng, worlds) for _ in range(n)]
    )


def random_model(rng: random.Random, fr: Frame, atom_names: list[str]) -> Model:
    return Model(
        fr,
        {w: tuple(a for a in atom_names if rng.random() < 0.5) for w in fr.worlds},
    )


def random_frame(rng: random.Random, n: int, size: int, density: float = 0.4) -> Frame:
    """Arbitrary (not necessarily equivalence) frame with the given edge density."""
    worlds = [f"w{k}" for k in range(size)]
    rels = []
    for _ in range(n):
        rels.append({(w, u) for w in worlds for u in worlds if rng.random() < density})
    return Frame(n, worlds, rels)


def missing_corner_model() -> Model:
    """Three-world equivalence model falsifying <1>[2]p -> [2]<1>p at w0.

    Agent 1 cannot tell w0 from w1; agent 2 cannot tell w0 from w2; p holds
    only at w1.  The frame is E and I but neither D nor WD.
    """
    fr = frame_from_partitions(
        2,
        ["w0", "w1", "w2"],
        [[["w0", "w1"], ["w2"]], [["w0", "w2"], ["w1"]]],
    )
    return Model(fr, {"w1": ("p",)})


def row_diagonal_morphism() -> WorldMap:
    """Frame p-morphism from a 4-world EDI frame onto a 2-world total cluster.

    Source worlds are letter/index pairs; agent 1 groups by index (rows) and
    agent 2 by diagonals.  Mapping by letter lands on a non-I frame, so no
    modal formula can pin down the intersection-identity property.
    """
    source = frame_from_partitions(
        2,
        ["a0", "b0", "a1", "b1"],
        [[["a0", "b0"], ["a1", "b1"]], [["a0", "b1"], ["b0", "a1"]]],
    )
    target = frame_from_partitions(2, ["a", "b"], [[["a", "b"]], [["a", "b"]]])
    return WorldMap(source, target, {"a0": "a", "b0": "b", "a1": "a", "b1": "b"})


def random_hypercube(rng: random.Random, n: int, max_axis: int = 3) -> GlobalStateSystem:
    """Hypercube with 1..max_axis values per axis and a singleton environment."""
    axes = [
        [f"a{i}_{k}" for k in range(rng.randint(1, max_axis))] for i in range(1, n + 1)
    ]
    states = [("1",) + combo for combo in itertools.product(*axes)]
    return system_from_states(n, states)


def random_full_system(
    rng: random.Random, n: int, max_axis: int = 3, max_env: int = 3
) -> GlobalStateSystem:
    """Full system: every local combination gets at least one environment."""
    axes = [
        [f"a{i}_{k}" for k in range(rng.randint(1, max_axis))] for i in range(1, n + 1)
    ]
    envs = [f"e{k}" for k in range(rng.randint(1, max_env))]
    states = []
    for combo in itertools.product(*axes):
        chosen = [e for e in envs if rng.random() < 0.5]
        if not chosen:
            chosen = [rng.choice(envs)]
        for e in chosen:
            states.append((e,) + combo)
    return system_from_states(n, states)


def assert_isomorphism(wm: WorldMap) -> None:
    """Fail unless wm is a bijection preserving all relations both ways."""
    src = frame_of(wm.source)
    tgt = frame_of(wm.target)
    images = [wm(w) for w in src.worlds]
    assert len(set(images)) == len(src.worlds) == len(tgt.worlds)
    for i in src.agents:
        for w in src.worlds:
            for u in src.worlds:
                assert (u in src.succ(i, w)) == (wm(u) in tgt.succ(i, wm(w)))
    if isinstance(wm.source, Model):
        for w in src.worlds:
            assert wm.source.atoms_at(w) == wm.target.atoms_at(wm(w))
