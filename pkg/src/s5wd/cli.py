"""Command line interface.

One subcommand per construction: parse, check, validate-model, frame-props,
components, iso, pmorph, f-map, from-frame, unpack, filtrate, decide, and
broadcast simulate.  Inputs are JSON files and inline formula strings; output
goes to standard output as JSON or a plain text report.  Exit codes: 0 for
success or a decided verdict, 2 for an unknown verdict, 1 for input errors
and failed validations.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import broadcast as bc
from .decide import CLASS_NAMES, decide_satisfiability, decide_validity
from .filtration import filtrate
from .formula import (
    Formula,
    atoms,
    expand_s,
    formula_size,
    modal_depth,
    parse,
    pretty,
)
from .kripke import (
    Model,
    check_d,
    check_equivalence,
    check_i,
    check_model_p_morphism,
    check_p_morphism,
    check_wd,
    connected_components,
    find_isomorphism,
    frame_from_json,
    frame_of,
    frame_to_json,
    is_connected,
    model_from_json,
    model_to_json,
    satisfies,
    world_key,
    world_map_from_json,
    world_map_to_json,
)
from .systems import (
    f_map,
    f_map_interpreted,
    frame_to_full_system,
    frame_to_hypercube,
    interpreted_from_json,
    system_from_json,
    system_to_json,
)
from .unpack import unpack_to_edi


class _Parser(argparse.ArgumentParser):
    # usage errors must exit 1; exit 2 is reserved for unknown verdicts
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"error: {message}\n")


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _load_frame_or_model(path: str):
    data = _load_json(path)
    if "valuation" in data:
        return model_from_json(data)
    return frame_from_json(data)


def _emit(args, data: dict, text_lines) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _witness_part(value):
    if isinstance(value, Formula):
        return pretty(value)
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    return world_key(value)


def _report_dict(report) -> dict:
    return {
        "ok": report.ok,
        "clause": report.clause,
        "witness": [_witness_part(x) for x in report.witness or ()],
    }


def _report_lines(report):
    yield f"ok: {'yes' if report.ok else 'no'}"
    if not report.ok:
        yield f"clause: {report.clause}"
        parts = " ".join(str(_witness_part(x)) for x in report.witness)
        yield f"witness: {parts}"


def _cmd_parse(args) -> int:
    f = parse(args.formula, args.n)
    data = {
        "formula": pretty(f),
        "n": args.n,
        # sizes are defined on the S-free language
        "size": formula_size(expand_s(f, args.n)),
        "modal_depth": modal_depth(f),
        "atoms": list(atoms(f)),
    }
    if args.expand_s:
        data["expanded"] = pretty(expand_s(f, args.n))
    lines = [f"{key}: {data[key]}" for key in ("formula", "n", "size", "modal_depth")]
    lines.append("atoms: " + " ".join(data["atoms"]))
    if args.expand_s:
        lines.append(f"expanded: {data['expanded']}")
    _emit(args, data, lines)
    return 0


def _cmd_check(args) -> int:
    m = model_from_json(_load_json(args.model))
    if args.world not in set(m.frame.worlds):
        raise ValueError(f"unknown world {args.world!r}")
    f = expand_s(parse(args.formula, m.frame.n), m.frame.n)
    value = satisfies(m, args.world, f)
    _emit(
        args,
        {"world": args.world, "formula": args.formula, "value": value},
        ["true" if value else "false"],
    )
    return 0


def _cmd_validate_model(args) -> int:
    m = model_from_json(_load_json(args.model))
    names = sorted({a for _, row in m.valuation for a in row})
    data = {
        "n": m.frame.n,
        "worlds": len(m.frame.worlds),
        "atoms": names,
        "equivalence": check_equivalence(m.frame),
    }
    _emit(
        args,
        data,
        [
            f"n: {data['n']}",
            f"worlds: {data['worlds']}",
            "atoms: " + " ".join(names),
            f"equivalence: {'yes' if data['equivalence'] else 'no'}",
        ],
    )
    return 0


def _cmd_frame_props(args) -> int:
    fr = frame_of(_load_frame_or_model(args.frame))
    data = {
        "e": check_equivalence(fr),
        "d": check_d(fr),
        "i": check_i(fr),
        "wd": check_wd(fr),
        "connected": is_connected(fr),
    }
    lines = [
        f"{name.upper()}: {'yes' if data[name] else 'no'}"
        for name in ("e", "d", "i", "wd", "connected")
    ]
    _emit(args, data, lines)
    return 0


def _cmd_components(args) -> int:
    x = _load_frame_or_model(args.frame)
    pieces = connected_components(x)
    data = {"components": [[world_key(w) for w in members] for _, members in pieces]}
    lines = [
        f"component {idx}: " + " ".join(block)
        for idx, block in enumerate(data["components"], start=1)
    ]
    _emit(args, data, lines)
    return 0


def _cmd_iso(args) -> int:
    left = _load_frame_or_model(args.left)
    right = _load_frame_or_model(args.right)
    if isinstance(left, Model) != isinstance(right, Model):
        left = frame_of(left)
        right = frame_of(right)
    wm = find_isomorphism(left, right, max_worlds=args.max_worlds)
    if wm is None:
        _emit(args, {"found": False}, ["no isomorphism found"])
        return 1
    data = {"found": True}
    data.update(world_map_to_json(wm))
    lines = ["isomorphic"] + [f"{k} -> {v}" for k, v in sorted(data["map"].items())]
    _emit(args, data, lines)
    return 0


def _cmd_pmorph(args) -> int:
    source = _load_frame_or_model(args.source)
    target = _load_frame_or_model(args.target)
    data = _load_json(args.map)
    if isinstance(source, Model) and isinstance(target, Model):
        report = check_model_p_morphism(world_map_from_json(data, source, target))
    else:
        wm = world_map_from_json(data, frame_of(source), frame_of(target))
        report = check_p_morphism(wm)
    _emit(args, _report_dict(report), _report_lines(report))
    return 0 if report.ok else 1


def _cmd_f_map(args) -> int:
    data = _load_json(args.system)
    if "valuation" in data:
        m = f_map_interpreted(interpreted_from_json(data))
        _emit(args, model_to_json(m), [json.dumps(model_to_json(m), sort_keys=True)])
    else:
        fr = f_map(system_from_json(data))
        _emit(args, frame_to_json(fr), [json.dumps(frame_to_json(fr), sort_keys=True)])
    return 0


def _cmd_from_frame(args) -> int:
    fr = frame_of(_load_frame_or_model(args.frame))
    if args.mode == "full":
        system, wm = frame_to_full_system(fr)
    else:
        system, wm = frame_to_hypercube(fr)
    data = {"system": system_to_json(system)}
    data.update(world_map_to_json(wm))
    _emit(args, data, [json.dumps(data, sort_keys=True)])
    return 0


def _cmd_unpack(args) -> int:
    fr = frame_of(_load_frame_or_model(args.frame))
    unpacked, wm = unpack_to_edi(fr, args.x_size)
    data = {"frame": frame_to_json(unpacked)}
    data.update(world_map_to_json(wm))
    _emit(
        args,
        data,
        [
            f"worlds: {len(unpacked.worlds)}",
            json.dumps(data, sort_keys=True),
        ],
    )
    return 0


def _cmd_filtrate(args) -> int:
    m = model_from_json(_load_json(args.model))
    f = parse(args.formula, m.frame.n)
    fil = filtrate(m, f)
    data = {
        "closure": [pretty(g) for g in fil.closure],
        "quotient": model_to_json(fil.quotient),
    }
    data.update(world_map_to_json(fil.projection))
    _emit(
        args,
        data,
        [
            f"closure size: {len(fil.closure)}",
            f"quotient worlds: {len(fil.quotient.frame.worlds)}",
            json.dumps(data, sort_keys=True),
        ],
    )
    return 0


def _cmd_decide(args) -> int:
    f = parse(args.formula, args.n)
    runner = decide_validity if args.mode == "valid" else decide_satisfiability
    verdict = runner(
        f,
        args.n,
        args.max_worlds,
        klass=getattr(args, "klass"),
        max_assignments=args.max_assignments,
        frame_budget=args.frame_budget,
    )
    data = {
        "verdict": verdict.kind,
        "bound": verdict.bound,
        "witness_world": None,
        "witness_model": None,
    }
    lines = [f"verdict: {verdict.kind}", f"bound: {verdict.bound}"]
    if verdict.witness_model is not None:
        data["witness_world"] = world_key(verdict.witness_world)
        data["witness_model"] = model_to_json(verdict.witness_model)
        lines.append(f"witness world: {data['witness_world']}")
        lines.append(json.dumps(data["witness_model"], sort_keys=True))
    _emit(args, data, lines)
    return 0 if verdict.decided else 2


def _parse_card_game(text: str):
    settings = {"deck": None, "hand": None, "modeling": "simple"}
    for part in text.split(","):
        key, _, value = part.partition("=")
        key = key.strip()
        if key not in settings:
            raise ValueError(f"unknown card game setting {key!r}")
        settings[key] = value.strip()
    if settings["deck"] is None or settings["hand"] is None:
        raise ValueError("card game settings need deck=<int>,hand=<int>")
    return bc.build_card_game(
        int(settings["deck"]), int(settings["hand"]), settings["modeling"]
    )


def _cmd_broadcast_simulate(args) -> int:
    if (args.env is None) == (args.card_game is None):
        raise ValueError("give exactly one of --env or --card-game")
    if args.card_game is not None:
        env, proto = _parse_card_game(args.card_game)
    else:
        env = bc.environment_from_json(_load_json(args.env))
        proto = bc.trivial_protocol(env.n)
    if args.protocol is not None:
        proto = bc.protocol_from_json(_load_json(args.protocol))
    fr = bc.generate_frame(env, proto, args.depth, max_worlds=args.max_worlds)
    data = {
        "n": env.n,
        "depth": args.depth,
        "homogeneous": env.homogeneous,
        "worlds": len(fr.worlds),
        "components": len(connected_components(fr)),
    }
    lines = [f"{key}: {data[key]}" for key in ("n", "depth", "homogeneous", "worlds", "components")]
    code = 0
    if args.verify is not None:
        report = bc.verify_hypercube_decomposition(fr, mode=args.verify)
        data["verify"] = {
            "mode": args.verify,
            "ok": report.ok,
            "components": [
                {
                    "size": len(c.members),
                    "axis_sizes": list(c.axis_sizes),
                    "ok": c.ok,
                    "reason": c.reason,
                }
                for c in report.components
            ],
        }
        lines.append(f"verify ({args.verify}): {'ok' if report.ok else 'failed'}")
        for idx, c in enumerate(report.components, start=1):
            status = "ok" if c.ok else f"failed ({c.reason})"
            axes = "x".join(str(s) for s in c.axis_sizes)
            lines.append(f"component {idx}: size {len(c.members)} axes {axes} {status}")
        if not report.ok:
            code = 1
    if args.emit_frame is not None:
        m = bc.derived_valuation(env, fr)
        with open(args.emit_frame, "w", encoding="utf-8") as handle:
            json.dump(model_to_json(m), handle, indent=2, sort_keys=True)
            handle.write("\n")
        lines.append(f"frame written to {args.emit_frame}")
        data["emitted"] = args.emit_frame
    _emit(args, data, lines)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="s5wd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=("json", "text"), default="text")
        return p

    p = add("parse", _cmd_parse, "parse a formula and report its shape")
    p.add_argument("--formula", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--expand-s", action="store_true")

    p = add("check", _cmd_check, "evaluate a formula at a world of a model")
    p.add_argument("--model", required=True)
    p.add_argument("--world", required=True)
    p.add_argument("--formula", required=True)

    p = add("validate-model", _cmd_validate_model, "load a model and report its shape")
    p.add_argument("--model", required=True)

    p = add("frame-props", _cmd_frame_props, "report E/D/I/WD/connected for a frame")
    p.add_argument("--frame", required=True)

    p = add("components", _cmd_components, "list connected components")
    p.add_argument("--frame", required=True)

    p = add("iso", _cmd_iso, "search for an isomorphism between two frames or models")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--max-worlds", type=int, default=12)

    p = add("pmorph", _cmd_pmorph, "check that a world map is a p-morphism")
    p.add_argument("--map", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)

    p = add("f-map", _cmd_f_map, "frame (or model) of a system of global states")
    p.add_argument("--system", required=True)

    p = add("from-frame", _cmd_from_frame, "reconstruct a system from a frame")
    p.add_argument("--frame", required=True)
    p.add_argument("--mode", choices=("full", "hypercube"), required=True)

    p = add("unpack", _cmd_unpack, "unpack an equivalence frame into an EDI frame")
    p.add_argument("--frame", required=True)
    p.add_argument("--x-size", type=int, default=None)

    p = add("filtrate", _cmd_filtrate, "filtrate a model through a formula")
    p.add_argument("--model", required=True)
    p.add_argument("--formula", required=True)

    p = add("decide", _cmd_decide, "bounded satisfiability or validity search")
    p.add_argument("--formula", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("sat", "valid"), required=True)
    p.add_argument("--max-worlds", type=int, required=True)
    p.add_argument("--class", dest="klass", choices=CLASS_NAMES, default="ed")
    p.add_argument("--max-assignments", type=int, default=2**20)
    p.add_argument("--frame-budget", type=int, default=50_000)

    p = sub.add_parser("broadcast", help="broadcast environment commands")
    bsub = p.add_subparsers(dest="broadcast_command", required=True, parser_class=_Parser)
    p = bsub.add_parser("simulate", help="generate and verify a trace frame")
    p.set_defaults(func=_cmd_broadcast_simulate)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--env", default=None)
    p.add_argument("--card-game", default=None)
    p.add_argument("--protocol", default=None)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--verify", choices=("hypercube", "full"), default=None)
    p.add_argument("--emit-frame", default=None)
    p.add_argument("--max-worlds", type=int, default=20_000)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, KeyError, TypeError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry_point() -> None:
    raise SystemExit(main(sys.argv[1:]))
