"""Multi-agent epistemic logic toolkit.

Modal formulas over n agents, finite Kripke frames and models, systems of
global states (hypercubes, full systems), frame constructions and morphisms,
filtration, bounded decision procedures, and broadcast environments with
perfect recall.
"""

from .formula import (
    AgentIndexError,
    And,
    Atom,
    Box,
    Diamond,
    Dist,
    Formula,
    Iff,
    Implies,
    LocalityError,
    Not,
    Or,
    ParseError,
    Some,
    atoms,
    expand_s,
    formula_size,
    is_i_local,
    modal_depth,
    negation,
    parse,
    pretty,
    subformula_closure,
    subformulas,
    wd_instance,
)
from .kripke import (
    BudgetError,
    Frame,
    Model,
    MorphismReport,
    WorldMap,
    check_d,
    check_equivalence,
    check_i,
    check_model_p_morphism,
    check_p_morphism,
    check_wd,
    connected_components,
    disjoint_union,
    equivalence_classes,
    extension,
    find_frame_countermodel,
    find_isomorphism,
    frame_from_json,
    frame_from_partitions,
    frame_of,
    frame_to_json,
    generated_submodel,
    is_connected,
    model_from_json,
    model_to_json,
    satisfies,
    valid_on_frame,
    valid_on_model,
    world_key,
    world_map_from_json,
    world_map_to_json,
)
from .systems import (
    GlobalStateSystem,
    InterpretedSystem,
    f_map,
    f_map_interpreted,
    frame_to_full_system,
    frame_to_hypercube,
    interpreted_from_json,
    interpreted_to_json,
    is_full,
    is_hypercube,
    system_from_json,
    system_from_states,
    system_to_json,
)
from .unpack import cluster_decomposition, coordinate_surjection, unpack_to_edi
from .filtration import Filtration, check_suitable, filtrate, world_equivalence
from .decide import (
    CLASS_NAMES,
    Verdict,
    catach_instance,
    decide_satisfiability,
    decide_validity,
    enumerate_frames,
    frame_in_class,
)
from .broadcast import (
    EPSILON,
    AgentProtocol,
    BroadcastEnvironment,
    ComponentReport,
    DecompositionReport,
    JointProtocol,
    action_sequence,
    build_card_game,
    derived_valuation,
    enabled_joint_actions,
    env_from_hypercube,
    environment_from_json,
    environment_to_json,
    generate_frame,
    initial_system,
    join,
    observation,
    perfect_recall_state,
    play_any_card_protocol,
    protocol_from_json,
    protocol_to_json,
    replay_consistent,
    trivial_protocol,
    verify_hypercube_decomposition,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
