"""End-to-end acceptance gate: one test per criterion.

Each test prints a single PASS line when its criterion holds; a failing
assertion marks the criterion as failed.  Criteria with stated runtime
budgets assert them on wall time.
"""

import random
import time

import pytest

from s5wd.broadcast import (
    build_card_game,
    derived_valuation,
    env_from_hypercube,
    generate_frame,
    join,
    observation,
    perfect_recall_state,
    replay_consistent,
    trivial_protocol,
    verify_hypercube_decomposition,
)
from s5wd.decide import (
    catach_instance,
    decide_satisfiability,
    decide_validity,
    enumerate_frames,
    frame_in_class,
)
from s5wd.filtration import check_suitable, filtrate
from s5wd.formula import (
    Atom,
    Box,
    Diamond,
    Not,
    expand_s,
    formula_size,
    modal_depth,
    parse,
    pretty,
    wd_instance,
)
from s5wd.kripke import (
    Model,
    check_d,
    check_equivalence,
    check_i,
    check_p_morphism,
    check_wd,
    disjoint_union,
    find_frame_countermodel,
    find_isomorphism,
    frame_from_partitions,
    is_connected,
    satisfies,
    valid_on_frame,
    valid_on_model,
    world_key,
)
from s5wd.systems import (
    InterpretedSystem,
    f_map,
    f_map_interpreted,
    frame_to_hypercube,
)
from s5wd.unpack import unpack_to_edi
from helpers import (
    random_formula,
    random_full_system,
    random_hypercube,
    random_model,
    random_partition,
    row_diagonal_morphism,
)


def _report(number: int, label: str) -> None:
    print(f"ACCEPTANCE {number:02d} {label}: PASS")


@pytest.fixture(scope="module")
def equivalence_sweep():
    """All equivalence frames with two agents and at most four worlds."""
    frames = list(enumerate_frames(2, 4, "e"))
    assert len(frames) > 20
    return frames


def two_agent_wd_instance():
    return expand_s(wd_instance([Box(1, Atom("p1")), Box(2, Atom("p2"))]), 2)


def test_criterion_01_s5_soundness(equivalence_sweep):
    start = time.monotonic()
    axioms = []
    for i in (1, 2):
        j = 3 - i
        axioms.extend(
            [
                parse(f"[{i}](p -> [{j}]p) -> ([{i}]p -> [{i}][{j}]p)", 2),
                parse(f"[{i}]p -> p", 2),
                parse(f"[{i}]p -> [{i}][{i}]p", 2),
                parse(f"<{i}>p -> [{i}]<{i}>p", 2),
            ]
        )
    for fr in equivalence_sweep:
        for g in axioms:
            assert valid_on_frame(fr, g), pretty(g)
    assert time.monotonic() - start < 60
    _report(1, "s5-soundness-sweep")


def test_criterion_02_wd_validity_correspondence(equivalence_sweep):
    wd = two_agent_wd_instance()
    failures = 0
    for fr in equivalence_sweep:
        is_wd = check_wd(fr)
        assert is_wd == valid_on_frame(fr, wd)
        failures += 0 if is_wd else 1
    assert failures > 0
    _report(2, "wd-instance-correspondence")


def test_criterion_03_catach_equivalence(equivalence_sweep):
    wd = two_agent_wd_instance()
    catach = catach_instance()
    for fr in equivalence_sweep:
        assert valid_on_frame(fr, catach) == valid_on_frame(fr, wd)
    _report(3, "catach-wd-frame-equivalence")


def test_criterion_04_system_image_round_trips():
    start = time.monotonic()
    rng = random.Random(401)
    for _ in range(200):
        h = random_hypercube(rng, rng.randint(1, 3))
        image = f_map(h)
        assert check_equivalence(image) and check_d(image) and check_i(image)
        system, _ = frame_to_hypercube(image)
        again = f_map(system)
        assert find_isomorphism(again, image, max_worlds=len(image.worlds)) is not None
    for _ in range(200):
        s = random_full_system(rng, rng.randint(2, 3))
        image = f_map(s)
        assert check_equivalence(image) and check_d(image) and is_connected(image)
    assert time.monotonic() - start < 60
    _report(4, "system-image-round-trips")


def _one_atom_battery():
    texts = [
        "p",
        "~p",
        "[1]p",
        "<2>p",
        "[1][2]p",
        "[2][1]p",
        "<1>[2]p",
        "<2>[1]p",
        "[1]<2>p",
        "[2]<1>p",
        "<1><2>p",
        "[1]p -> p",
        "<1>[2]p -> [2]<1>p",
        "[1]p | [2]~p",
        "[1]<1>p <-> <1>p",
        "p -> [2]<2>p",
    ]
    battery = [parse(t, 2) for t in texts]
    rng = random.Random(501)
    while len(battery) < 24:
        g = random_formula(rng, 2, ["p"], 2)
        if modal_depth(g) <= 2:
            battery.append(g)
    assert all(modal_depth(g) <= 2 for g in battery)
    return battery


def test_criterion_05_unpacking_preserves_validity():
    frames = list(enumerate_frames(2, 5, "ed"))
    assert len(frames) >= 9
    battery = _one_atom_battery()
    for fr in frames:
        unpacked, wm = unpack_to_edi(fr)
        assert check_equivalence(unpacked)
        assert check_d(unpacked)
        assert check_i(unpacked)
        assert check_p_morphism(wm).ok
        # validity transfers from the unpacked frame onto its image: every
        # countermodel on the image pulls back through the p-morphism
        for g in battery:
            hit = find_frame_countermodel(fr, g)
            if hit is None:
                continue
            m, w0 = hit
            pulled = Model(unpacked, {u: m.atoms_at(wm(u)) for u in unpacked.worlds})
            u0 = next(u for u in unpacked.worlds if wm(u) == w0)
            assert not satisfies(pulled, u0, g), pretty(g)
    _report(5, "ed-unpacking-validity-transfer")


def test_criterion_06_filtration_invariants():
    start = time.monotonic()
    rng = random.Random(601)
    directed_hits = 0
    for trial in range(300):
        size = rng.randint(1, 6)
        worlds = [f"w{k}" for k in range(size)]
        parts = [random_partition(rng, worlds) for _ in range(2)]
        if trial % 3 == 0:
            parts[0] = [list(worlds)]
        fr = frame_from_partitions(2, worlds, parts)
        m = random_model(rng, fr, ["p", "q"])
        g = random_formula(rng, 2, ["p", "q"], 2)
        while formula_size(g) > 4:
            g = random_formula(rng, 2, ["p", "q"], 2)
        fil = filtrate(m, g)
        for alpha in fil.closure:
            for w in fr.worlds:
                assert satisfies(m, w, alpha) == satisfies(
                    fil.quotient, fil.projection(w), alpha
                )
        assert len(fil.quotient.frame.worlds) <= 2 ** formula_size(g)
        assert check_equivalence(fil.quotient.frame)
        if check_d(fr):
            directed_hits += 1
            assert check_d(fil.quotient.frame)
        for i in (1, 2):
            assert check_suitable(fil, i).ok
    assert directed_hits >= 40
    assert time.monotonic() - start < 120
    _report(6, "filtration-invariants")


def test_criterion_07_decision_procedure():
    catach = catach_instance()
    negated = Not(catach)
    verdict = decide_satisfiability(negated, 2, 4, klass="e")
    assert verdict.kind == "satisfiable"
    assert len(verdict.witness_model.frame.worlds) == 3
    assert frame_in_class(verdict.witness_model.frame, "e")
    assert satisfies(verdict.witness_model, verdict.witness_world, negated)

    wd = wd_instance([Box(1, Atom("p1")), Box(2, Atom("p2"))])
    bounded = decide_validity(wd, 2, 4, klass="ewd")
    assert bounded.kind != "countermodel"

    rng = random.Random(701)
    outcomes = {"valid": "unsatisfiable", "countermodel": "satisfiable", "unknown": "unknown"}
    for _ in range(100):
        g = random_formula(rng, 2, ["p", "q"], 2, allow_s=True, allow_d=True)
        validity = decide_validity(g, 2, 3)
        dual = decide_satisfiability(Not(g), 2, 3)
        assert outcomes[validity.kind] == dual.kind, pretty(g)
        expanded = expand_s(g, 2)
        if validity.kind == "countermodel":
            assert not satisfies(
                validity.witness_model, validity.witness_world, expanded
            )
            assert frame_in_class(validity.witness_model.frame, "ed")
        if dual.kind == "satisfiable":
            assert satisfies(
                dual.witness_model, dual.witness_world, expand_s(Not(g), 2)
            )
            assert frame_in_class(dual.witness_model.frame, "ed")
    _report(7, "bounded-decision-procedure")


def test_criterion_08_card_game_decomposition():
    start = time.monotonic()
    env, proto = build_card_game(4, 2, "simple")
    frames = {depth: generate_frame(env, proto, depth) for depth in (1, 2, 3)}

    first = verify_hypercube_decomposition(frames[1])
    assert first.ok
    assert len(first.components) == 1
    assert len(first.components[0].members) == 36
    for depth in (2, 3):
        report = verify_hypercube_decomposition(frames[depth])
        assert report.ok
        assert all(c.ok for c in report.components)

    m = derived_valuation(env, frames[3])
    instances = [
        wd_instance([Box(1, Atom("face_up_matches")), Box(2, Atom("face_up_matches"))]),
        wd_instance(
            [Diamond(1, Atom("face_up_matches")), Not(Diamond(2, Atom("face_up_matches")))]
        ),
    ]
    for inst in instances:
        assert valid_on_model(m, expand_s(inst, 2))

    rng = random.Random(801)
    fr = frames[3]
    for i in (1, 2):
        ordered = sorted(
            fr.relations[i - 1], key=lambda p: (world_key(p[0]), world_key(p[1]))
        )
        for a, b in rng.sample(ordered, 100):
            assert perfect_recall_state(a, i) == perfect_recall_state(b, i)
            obs_a = observation(env, i, a[-1])
            assert obs_a == observation(env, i, b[-1])
            assert proto.agents[i - 1].enabled(obs_a) == proto.agents[i - 1].enabled(
                observation(env, i, b[-1])
            )
            merged = join(a, b, i)
            assert perfect_recall_state(merged, i) == perfect_recall_state(b, i)
            for other in range(3):
                if other != i:
                    assert perfect_recall_state(merged, other) == perfect_recall_state(
                        a, other
                    )
            assert replay_consistent(env, proto, merged)
    assert time.monotonic() - start < 300
    _report(8, "broadcast-hypercube-decomposition")


def test_criterion_09_hypercube_environment_round_trip():
    rng = random.Random(901)
    for _ in range(50):
        h = random_hypercube(rng, rng.randint(1, 3))
        val = {
            s: tuple(a for a in ("p", "q") if rng.random() < 0.4) for s in h.states
        }
        env = env_from_hypercube(h, val)
        fr = generate_frame(env, trivial_protocol(h.n), 1)
        m = derived_valuation(env, fr)
        target = f_map_interpreted(InterpretedSystem(h, val))
        wm = find_isomorphism(m, target, max_worlds=len(h.states))
        assert wm is not None
        for _ in range(20):
            g = random_formula(rng, h.n, ["p", "q"], 2)
            for tr in fr.worlds:
                assert satisfies(m, tr, g) == satisfies(target, wm(tr), g)
    _report(9, "environment-from-hypercube")


def test_criterion_10_non_correspondence_regressions():
    wm = row_diagonal_morphism()
    source = wm.source
    target = wm.target
    assert check_equivalence(source) and check_d(source) and check_i(source)
    assert check_equivalence(target) and not check_i(target)
    assert check_p_morphism(wm).ok

    cluster = frame_from_partitions(2, ["a", "b"], [[["a", "b"]], [["a", "b"]]])
    pair = frame_from_partitions(2, ["c", "d"], [[["c", "d"]], [["c", "d"]]])
    assert check_d(cluster) and check_d(pair)
    union = disjoint_union(cluster, pair)
    assert check_equivalence(union)
    assert not check_d(union)
    assert check_wd(union)
    _report(10, "non-correspondence-regressions")
