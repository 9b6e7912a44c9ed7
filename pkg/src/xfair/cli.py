"""Command-line front door: every capability on files and standard output.

Commands mirror the library one to one: ``eval``, ``explain``, ``abduce``,
``audit``, ``flip-degree``, ``structure``, ``fair-set``, ``game-simulate``,
``serve``, and ``report``.  Machine-readable JSON (or CSV for scaling
studies) goes to standard output; a short human summary goes to standard
error under ``--verbose``.  Exit codes: 0 success, 1 domain error (an
infeasible or precondition failure, reported as JSON), 2 usage or parse
error.

Repeated identical invocations produce byte-identical standard output:
keys are sorted, randomness is seeded (``--seed``, default 0), and no
timestamps or timings are emitted.  ``XFAIR_MAX_N`` raises the feature cap
and ``XFAIR_PORT`` picks the serve port.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .abduction import BACKENDS, EntailmentOracle, abductive_explanation
from .errors import (
    InfeasibleError,
    ParseError,
    PreconditionError,
    ValidationError,
)
from .fairness import (
    ConundrumSpec,
    PrejudicialFactor,
    biased_dependency,
    fair_adequate_set,
    implicitly_definable,
)
from .formulas import formula_to_text
from .game import (
    GameConfig,
    POLICIES,
    VARIANTS,
    move_to_doc,
    reply_to_doc,
    simulate,
)
from .model import Classifier, FeatureSpace, World, enumerate_worlds, load_classifier, parse_instance
from .scenarios import get_scenario
from .structure import local_structure_report
from .transforms import minimal_counterfactuals


def _emit(doc, verbose: bool = False, summary: str | None = None) -> None:
    print(json.dumps(doc, sort_keys=True, indent=2))
    if verbose and summary:
        print(summary, file=sys.stderr)


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _load_model(path: str) -> Classifier:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    return load_classifier(text)


def _load_instance(arg: str, space: FeatureSpace) -> World:
    if Path(arg).is_file():
        return parse_instance(_read_json(arg), space)
    return parse_instance(arg, space)


def _load_conundrum(path: str, space: FeatureSpace) -> ConundrumSpec:
    doc = _read_json(path)
    if isinstance(doc, dict) and "conundrum" in doc:
        doc = doc["conundrum"]
    return ConundrumSpec.from_dict(doc, space)


def _load_factors(path: str, space: FeatureSpace) -> tuple[PrejudicialFactor, ...]:
    doc = _read_json(path)
    if isinstance(doc, dict) and "factors" in doc:
        doc = doc["factors"]
    if not isinstance(doc, list):
        raise ValidationError("factors document must be a list of factor objects")
    return tuple(PrejudicialFactor.from_dict(f, space) for f in doc)


def _chain_doc(chain, space: FeatureSpace) -> dict:
    return {
        "steps": [
            {"feature": space.features[i], "positive": positive}
            for i, positive in chain.steps
        ],
        "supports": list(chain.supports),
    }


# --------------------------------------------------------------------------
# commands


def _cmd_eval(args) -> int:
    c = _load_model(args.model)
    focal = _load_instance(args.instance, c.space)
    label = c.evaluate(focal)
    _emit({"label": label}, args.verbose, f"{focal.bits} -> {label}")
    return 0


def _cmd_explain(args) -> int:
    c = _load_model(args.model)
    focal = _load_instance(args.instance, c.space)
    result = minimal_counterfactuals(c, focal, args.target, args.radius)
    doc = {
        "focal": focal.bits,
        "target": args.target,
        "radius": result.radius,
        "deltas": [t.to_dict(c.space) for t in result.deltas],
        "overdetermined": result.overdetermined,
    }
    _emit(
        doc,
        args.verbose,
        f"{len(result.deltas)} minimal counterfactual(s); "
        + ("overdetermined" if result.overdetermined else "uniquely determined"),
    )
    return 0


def _cmd_abduce(args) -> int:
    c = _load_model(args.model)
    focal = _load_instance(args.instance, c.space)
    oracle = EntailmentOracle(args.backend)
    literals = abductive_explanation(oracle, c, focal)
    _emit(
        literals.to_dict(c.space),
        args.verbose,
        f"{len(literals.assignments)} literal(s), {oracle.calls} oracle call(s)",
    )
    return 0


def _cmd_audit(args) -> int:
    c = _load_model(args.model)
    focal = _load_instance(args.instance, c.space)
    factors = _load_factors(args.factors, c.space)
    if not factors:
        raise ValidationError("audit needs at least one factor")
    population = list(enumerate_worlds(c.space))
    rows = []
    for factor in factors:
        witness = biased_dependency(c, factor, focal, args.radius)
        definition = implicitly_definable(factor, population)
        rows.append(
            {
                "name": factor.name,
                "biased": witness is not None,
                "witness": (
                    None
                    if witness is None
                    else {
                        "features": [c.space.features[i] for i in witness.indices],
                        "transformation": witness.transformation.to_dict(c.space),
                        "base_label": witness.base_label,
                        "factored_label": witness.factored_label,
                    }
                ),
                "implicit_definition": (
                    None if definition is None else formula_to_text(definition, c.space)
                ),
            }
        )
    biased = sum(1 for r in rows if r["biased"])
    _emit(
        {"focal": focal.bits, "factors": rows},
        args.verbose,
        f"{biased} of {len(rows)} factor(s) show a biased dependency",
    )
    return 0


def _cmd_flip_degree(args) -> int:
    c = _load_model(args.model)
    focal = _load_instance(args.instance, c.space)
    from .structure import flip_degree

    degree, chain = flip_degree(c, focal, args.target, args.radius)
    _emit(
        {"degree": degree, "witness": _chain_doc(chain, c.space)},
        args.verbose,
        f"flip degree {degree} over {len(chain.steps)} step(s)",
    )
    return 0


def _cmd_structure(args) -> int:
    c = _load_model(args.model)
    focal = _load_instance(args.instance, c.space)
    report = local_structure_report(c, focal, args.target, args.radius)
    doc = {
        "focal": focal.bits,
        "target": report.target,
        "radius": report.radius,
        "flip_degree": report.flip_degree,
        "witness": _chain_doc(report.witness, c.space),
        "shape": {"kind": report.shape.kind, "degree": report.shape.degree},
        "region": {
            "interior": sorted(w.bits for w in report.region.interior),
            "border": sorted(w.bits for w in report.region.border),
        },
        "convexity": [
            {
                "notion": v.notion,
                "holds": v.holds,
                "witness": (
                    None if v.witness is None else [w.bits for w in v.witness]
                ),
            }
            for v in report.verdicts
        ],
    }
    holds = [v.notion for v in report.verdicts if v.holds]
    _emit(
        doc,
        args.verbose,
        f"degree {report.flip_degree}; holds: {', '.join(holds) or 'none'}",
    )
    return 0


def _cmd_fair_set(args) -> int:
    c = _load_model(args.model)
    focal = _load_instance(args.instance, c.space)
    conundrum = (
        _load_conundrum(args.conundrum, c.space) if args.conundrum else None
    )
    factors = _load_factors(args.factors, c.space) if args.factors else ()
    result = fair_adequate_set(c, focal, args.target, args.radius, conundrum, factors)
    doc = {
        "focal": focal.bits,
        "target": result.target,
        "radius": result.radius,
        "deltas": [t.to_dict(c.space) for t in result.deltas],
        "certificates": {
            identifier: t.to_dict(c.space)
            for identifier, t in result.certificates
        },
        "overdetermination": {
            "deltas": [t.to_dict(c.space) for t in result.overdetermination.deltas],
            "overdetermined": result.overdetermination.overdetermined,
        },
    }
    _emit(
        doc,
        args.verbose,
        f"{len(result.deltas)} delta(s) discharge {len(result.certificates)} obligation(s)",
    )
    return 0


def _family_ks(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            ks = list(range(int(lo), int(hi) + 1))
        else:
            ks = [int(part) for part in text.split(",") if part]
    except ValueError:
        raise ValidationError(f"cannot parse padding counts from {text!r}") from None
    if not ks or any(k < 0 for k in ks):
        raise ValidationError(f"padding counts {text!r} name no usable sizes")
    return ks


def _cmd_game_simulate(args) -> int:
    if args.family:
        return _family_csv(args)
    if args.scenario:
        config = get_scenario(args.scenario).config()
        if args.seed is not None:
            from dataclasses import replace

            config = replace(config, seed=args.seed)
        policy = args.policy or get_scenario(args.scenario).suggested_policy
    else:
        if not (args.model and args.instance and args.target):
            raise ValidationError(
                "game-simulate needs --scenario, --family, or --model/--instance/--target"
            )
        c = _load_model(args.model)
        conundrum = (
            _load_conundrum(args.conundrum, c.space) if args.conundrum else None
        )
        factors = _load_factors(args.factors, c.space) if args.factors else ()
        config = GameConfig(
            classifier=c,
            focal=_load_instance(args.instance, c.space),
            target=args.target,
            radius=args.radius if args.radius is not None else c.space.n,
            variant=args.variant,
            conundrum=conundrum,
            factors=factors,
            adversary_policy=args.adversary,
            seed=args.seed or 0,
        )
        policy = args.policy or "exhaustive"
    state, metrics = simulate(config, policy, max_moves=args.max_moves)
    space = config.classifier.space
    doc = {
        "scenario": args.scenario,
        "variant": config.variant,
        "policy": policy,
        "status": metrics.status,
        "won": metrics.won,
        "explainee_moves": metrics.explainee_moves,
        "oracle_calls": metrics.adversary_oracle_calls,
        "cost_trace": list(metrics.cost_trace),
        "transcript": [
            {"move": move_to_doc(m, space), "reply": reply_to_doc(r, space)}
            for m, r in state.transcript
        ],
    }
    _emit(
        doc,
        args.verbose,
        f"{metrics.status} after {metrics.explainee_moves} move(s)",
    )
    return 0


def _family_csv(args) -> int:
    import csv

    from .report import scaling_rows

    ks = _family_ks(args.family)
    if args.jobs and args.jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            chunks = list(pool.map(lambda k: scaling_rows([k]), ks))
        rows = [row for chunk in chunks for row in chunk]
    else:
        rows = scaling_rows(ks)
    writer = csv.DictWriter(
        sys.stdout,
        fieldnames=["variant", "k", "explainee_moves", "oracle_calls"],
        lineterminator="\n",
    )
    writer.writeheader()
    writer.writerows(rows)
    if args.verbose:
        print(f"{len(rows)} games simulated", file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app, default_port

    port = args.port if args.port is not None else default_port()
    uvicorn.run(create_app(), host=args.host, port=port, log_level="warning")
    return 0


def _cmd_report(args) -> int:
    from .report import write_report

    manifest = write_report(Path(args.out), _family_ks(args.ks))
    _emit(manifest, args.verbose, f"report written to {args.out}")
    return 0


# --------------------------------------------------------------------------
# parser


def _add_model_instance(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", required=True, help="classifier JSON file")
    parser.add_argument(
        "--instance", required=True, help="focal instance: bit string or JSON file"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xfair",
        description="counterfactual, abductive, and fair-explanation workbench",
    )
    parser.add_argument("--verbose", action="store_true", help="summary on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("eval", help="classify one instance")
    _add_model_instance(p)
    p.set_defaults(handler=_cmd_eval)

    p = commands.add_parser("explain", help="minimal counterfactuals")
    _add_model_instance(p)
    p.add_argument("--target", required=True)
    p.add_argument("--radius", type=int, default=None)
    p.set_defaults(handler=_cmd_explain)

    p = commands.add_parser("abduce", help="subset-minimal literal explanation")
    _add_model_instance(p)
    p.add_argument("--backend", choices=BACKENDS, default="exhaustive")
    p.set_defaults(handler=_cmd_abduce)

    p = commands.add_parser("audit", help="biased-dependency audit of factors")
    _add_model_instance(p)
    p.add_argument("--factors", required=True, help="factor list JSON file")
    p.add_argument("--radius", type=int, default=None)
    p.set_defaults(handler=_cmd_audit)

    p = commands.add_parser("flip-degree", help="support alternations bound")
    _add_model_instance(p)
    p.add_argument("--target", required=True)
    p.add_argument("--radius", type=int, default=None)
    p.set_defaults(handler=_cmd_flip_degree)

    p = commands.add_parser("structure", help="region, shape, and convexity")
    _add_model_instance(p)
    p.add_argument("--target", required=True)
    p.add_argument("--radius", type=int, default=None)
    p.set_defaults(handler=_cmd_structure)

    p = commands.add_parser("fair-set", help="fair and adequate explanation set")
    _add_model_instance(p)
    p.add_argument("--target", required=True)
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--conundrum", help="conundrum JSON file")
    p.add_argument("--factors", help="factor list JSON file")
    p.set_defaults(handler=_cmd_fair_set)

    p = commands.add_parser("game-simulate", help="run one game or a scaling family")
    p.add_argument("--scenario", help="bundled scenario name")
    p.add_argument("--model", help="classifier JSON file (custom game)")
    p.add_argument("--instance", help="focal instance (custom game)")
    p.add_argument("--target", help="target label (custom game)")
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--variant", choices=VARIANTS, default="restriction")
    p.add_argument("--conundrum", help="conundrum JSON file")
    p.add_argument("--factors", help="factor list JSON file")
    p.add_argument("--policy", choices=sorted(POLICIES), default=None)
    p.add_argument(
        "--adversary", choices=("adversarial", "cooperative"), default="adversarial"
    )
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-moves", type=int, default=10_000)
    p.add_argument("--family", help="padding counts, e.g. 2..8 or 2,4,6 (CSV out)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(handler=_cmd_game_simulate)

    p = commands.add_parser("serve", help="run the HTTP game service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None, help="default: XFAIR_PORT or 8080")
    p.set_defaults(handler=_cmd_serve)

    p = commands.add_parser("report", help="scaling study + shape sweep with figures")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--ks", default="2..8", help="padding counts, e.g. 2..8")
    p.set_defaults(handler=_cmd_report)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except (ParseError, ValidationError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2
    except InfeasibleError as exc:
        doc = {"error": str(exc)}
        if exc.constraint is not None:
            doc["constraint"] = exc.constraint
        print(json.dumps(doc, sort_keys=True, indent=2))
        return 1
    except PreconditionError as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True, indent=2))
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
