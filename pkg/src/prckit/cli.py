"""Command-line surface: chain, digits, verify, explore, approx.

Artifacts go to stdout as JSON with every numeric value rendered as a
decimal string (84-digit primes do not survive float-parsing consumers);
diagnostics, including wall-clock time, go to stderr so that re-running a
command with the same configuration reproduces stdout byte for byte.

Exit codes: 0 success / all checks passed; 1 a verification check failed;
2 refusal (budget or bit ceiling), with a partial artifact when one
exists; 64 usage error; 65 bad input data (composite seed); 66 missing or
malformed input file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import replace

from . import __version__
from .chain import build_chain, verify_chain
from .core import (
    DEFAULT_CONFIG,
    GAP_POLICIES,
    BitCeilingError,
    CompositeSeedError,
    EnumerationCapError,
    ExponentSpecError,
    PrcError,
    PrimeChain,
    SchemaError,
    WindowSearchExhausted,
    parse_exponent_spec,
)
from .explorer import (
    branching_stats,
    explore_tree,
    forest_to_csv,
    forest_to_json,
    gap_intervals,
    validate_forest,
)
from .radix import prc_digits, rational_approx_scan

EX_OK = 0
EX_CHECK_FAILED = 1
EX_REFUSAL = 2
EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="prckit", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--exps", required=True, help="const:<c> | factorial | powfact:<b> | list:v1,v2,...")
        p.add_argument("--seed", required=True, type=int, help="seed prime p_1")
        p.add_argument("--depth", required=True, type=int, help="chain depth K")
        p.add_argument("--mode", choices=("min", "max"), default="min")
        p.add_argument(
            "--gap-policy",
            choices=sorted(GAP_POLICIES),
            default="empirical",
            dest="gap_policy",
        )
        p.add_argument("--window-budget", type=int, default=None, dest="window_budget")
        p.add_argument("--fixture-dir", default=None, dest="fixture_dir")

    p_chain = sub.add_parser("chain", help="build a min/max prime chain")
    common(p_chain)

    p_digits = sub.add_parser("digits", help="certified decimal digits of the chain's constant")
    common(p_digits)
    p_digits.add_argument("--max-digits", type=int, default=1000, dest="max_digits")
    p_digits.add_argument("--format", choices=("json", "text"), default="json")

    p_verify = sub.add_parser("verify", help="re-check a chain JSON file")
    p_verify.add_argument("--chain-file", required=True, dest="chain_file")
    p_verify.add_argument("--window-budget", type=int, default=None, dest="window_budget")
    p_verify.add_argument("--fixture-dir", default=None, dest="fixture_dir")

    p_explore = sub.add_parser("explore", help="expand the cylinder tree over a seed range")
    p_explore.add_argument("--exps", required=True)
    p_explore.add_argument("--seeds", required=True, help="LO:HI inclusive prime seed range")
    p_explore.add_argument("--depth", required=True, type=int)
    p_explore.add_argument("--format", choices=("json", "csv"), default="json")
    p_explore.add_argument("--gap-level", type=int, default=None, dest="gap_level")
    p_explore.add_argument("--fixture-dir", default=None, dest="fixture_dir")

    p_approx = sub.add_parser("approx", help="certified rational separation scan")
    common(p_approx)
    p_approx.add_argument("--max-den", required=True, type=int, dest="max_den")
    p_approx.add_argument("--max-digits", type=int, default=60, dest="max_digits")

    return parser


def _config(args):
    kwargs = {}
    env_ceiling = os.environ.get("PRC_BIT_CEILING")
    if env_ceiling:
        kwargs["radicand_bit_ceiling"] = int(env_ceiling)
    if getattr(args, "window_budget", None):
        kwargs["window_budget"] = args.window_budget
    return replace(DEFAULT_CONFIG, **kwargs) if kwargs else DEFAULT_CONFIG


def _config_json(config) -> dict:
    return {
        "mr_rounds": str(config.mr_rounds),
        "window_budget": str(config.window_budget),
        "enumeration_cap": str(config.enumeration_cap),
        "rescan_cap": str(config.rescan_cap),
        "chain_bit_ceiling": str(config.chain_bit_ceiling),
        "radicand_bit_ceiling": str(config.radicand_bit_ceiling),
        "max_sieve_base": str(config.max_sieve_base),
        "wheel": config.wheel,
    }


def _manifest(command, config, **fields) -> dict:
    manifest = {"command": command, "version": __version__, "config": _config_json(config)}
    for key, value in fields.items():
        if value is None:
            continue
        if isinstance(value, int) and not isinstance(value, bool):
            value = str(value)
        manifest[key] = value
    return manifest


def _fixture_name(manifest) -> str:
    parts = [manifest["command"]]
    for key in ("exps", "seed", "depth", "mode", "gap_policy", "seeds", "max_den"):
        if key in manifest:
            parts.append(str(manifest[key]).replace(":", "_").replace(",", "-"))
    return "-".join(parts) + ".json"


def _emit(text: str, args) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")
    fixture_dir = getattr(args, "fixture_dir", None)
    if fixture_dir:
        os.makedirs(fixture_dir, exist_ok=True)
        name = getattr(args, "_fixture_name", "artifact.json")
        with open(os.path.join(fixture_dir, name), "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _emit_json(artifact: dict, args) -> None:
    args._fixture_name = _fixture_name(artifact.get("manifest", {"command": "artifact"}))
    _emit(json.dumps(artifact, indent=2, sort_keys=True), args)


def _build_from_args(args, config) -> PrimeChain:
    exps = parse_exponent_spec(args.exps)
    policy = GAP_POLICIES[args.gap_policy]
    return build_chain(exps, args.seed, args.depth, args.mode, policy, config)


def _chain_artifact(command, args, config, chain) -> dict:
    manifest = _manifest(
        command,
        config,
        exps=args.exps,
        seed=args.seed,
        depth=args.depth,
        mode=args.mode,
        gap_policy=args.gap_policy,
        certainty=list(chain.certainty),
        conditional=chain.conditional,
    )
    return {"manifest": manifest, **chain.to_json_dict()}


def cmd_chain(args) -> int:
    config = _config(args)
    chain = _build_from_args(args, config)
    _emit_json(_chain_artifact("chain", args, config, chain), args)
    if chain.truncated:
        sys.stderr.write(f"refused: {chain.truncation_reason}\n")
        return EX_REFUSAL
    return EX_OK


def cmd_digits(args) -> int:
    config = _config(args)
    chain = _build_from_args(args, config)
    result = prc_digits(chain, args.max_digits, config)
    artifact = _chain_artifact("digits", args, config, chain)
    artifact["manifest"]["max_digits"] = str(args.max_digits)
    artifact.update(
        {
            "digits": result.digits,
            "agreed_places": str(result.agreed_places),
            "chain_depth_used": str(result.chain_depth_used),
            "enclosure": result.enclosure.as_json(),
        }
    )
    if args.format == "text":
        args._fixture_name = _fixture_name(artifact["manifest"]).replace(".json", ".txt")
        _emit(f"{result.digits}\nagreed_places={result.agreed_places}", args)
    else:
        _emit_json(artifact, args)
    if chain.truncated:
        sys.stderr.write(f"refused: {chain.truncation_reason}\n")
        return EX_REFUSAL
    return EX_OK


def cmd_verify(args) -> int:
    config = _config(args)
    try:
        with open(args.chain_file) as fh:
            document = json.load(fh)
    except OSError as exc:
        sys.stderr.write(f"cannot read chain file: {exc}\n")
        return EX_NOINPUT
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"chain file is not valid JSON: {exc}\n")
        return EX_NOINPUT
    chain = PrimeChain.from_json_dict(document)
    report = verify_chain(chain, config)
    manifest = _manifest(
        "verify",
        config,
        exps=chain.exps.render(),
        mode=chain.mode,
        gap_policy=chain.policy.name,
    )
    artifact = {
        "manifest": manifest,
        "seed_ok": report.seed_ok,
        "seed_certainty": report.seed_certainty,
        "conditional_ok": report.conditional_ok,
        "steps": [
            {
                "k": str(s.k),
                "window_ok": s.window_ok,
                "prime_ok": s.prime_ok,
                "certainty": s.certainty,
                "extremality": s.extremality,
            }
            for s in report.steps
        ],
        "passed": report.passed,
    }
    _emit_json(artifact, args)
    return EX_OK if report.passed else EX_CHECK_FAILED


def cmd_explore(args) -> int:
    config = _config(args)
    exps = parse_exponent_spec(args.exps)
    try:
        lo, hi = (int(part) for part in args.seeds.split(":"))
    except ValueError:
        sys.stderr.write("--seeds wants LO:HI\n")
        return EX_USAGE
    forest = explore_tree(exps, (lo, hi), args.depth, config)
    violations = validate_forest(forest)
    manifest = _manifest(
        "explore", config, exps=args.exps, seeds=args.seeds, depth=args.depth
    )
    if args.format == "csv":
        args._fixture_name = _fixture_name(manifest).replace(".json", ".csv")
        _emit(forest_to_csv(forest), args)
    else:
        stats = branching_stats(forest)
        artifact = {
            "manifest": manifest,
            "forest": forest_to_json(forest),
            "stats": {
                "levels": [
                    {
                        "level": str(ls.level),
                        "nodes": str(ls.nodes),
                        "counted": str(ls.counted),
                        "min_children": None if ls.min_children is None else str(ls.min_children),
                        "max_children": None if ls.max_children is None else str(ls.max_children),
                        "mean_children": None if ls.mean_children is None else str(ls.mean_children),
                    }
                    for ls in stats.levels
                ],
                "total_leaves": str(stats.total_leaves),
                "isolation_candidates": [
                    [str(p) for p in prefix] for prefix in stats.isolation_candidates
                ],
                "empty_windows": [
                    [str(p) for p in prefix] for prefix in stats.empty_windows
                ],
            },
            "violations": violations,
        }
        if args.gap_level is not None:
            gaps = gap_intervals(forest, args.gap_level, config)
            artifact["gaps"] = [
                {
                    "level": str(args.gap_level),
                    "left_value": str(g.left.value),
                    "left_enclosure": g.left.enclosure.as_json(),
                    "right_value": str(g.right.value),
                    "right_enclosure": g.right.enclosure.as_json(),
                }
                for g in gaps
            ]
        _emit_json(artifact, args)
    return EX_CHECK_FAILED if violations else EX_OK


def cmd_approx(args) -> int:
    config = _config(args)
    chain = _build_from_args(args, config)
    result = prc_digits(chain, args.max_digits, config)
    try:
        records = rational_approx_scan(result.enclosure, args.max_den)
    except ValueError as exc:
        sys.stderr.write(f"refused: {exc}\n")
        return EX_REFUSAL
    manifest = _manifest(
        "approx",
        config,
        exps=args.exps,
        seed=args.seed,
        depth=args.depth,
        mode=args.mode,
        gap_policy=args.gap_policy,
        max_den=args.max_den,
    )
    artifact = {
        "manifest": manifest,
        "enclosure": result.enclosure.as_json(),
        "records": [
            {
                "den": str(r.den),
                "num": str(r.num),
                "inside": r.inside,
                "separation": None
                if r.separation is None
                else f"{r.separation.numerator}/{r.separation.denominator}",
            }
            for r in records
        ],
    }
    _emit_json(artifact, args)
    return EX_CHECK_FAILED if any(r.inside for r in records) else EX_OK


_COMMANDS = {
    "chain": cmd_chain,
    "digits": cmd_digits,
    "verify": cmd_verify,
    "explore": cmd_explore,
    "approx": cmd_approx,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        code = _COMMANDS[args.command](args)
    except ExponentSpecError as exc:
        sys.stderr.write(f"bad exponent spec: {exc}\n")
        code = EX_USAGE
    except CompositeSeedError as exc:
        sys.stderr.write(f"{exc}\n")
        code = EX_DATAERR
    except SchemaError as exc:
        sys.stderr.write(f"chain file schema mismatch: {exc}\n")
        code = EX_NOINPUT
    except (BitCeilingError, WindowSearchExhausted, EnumerationCapError) as exc:
        sys.stderr.write(f"refused: {exc}\n")
        code = EX_REFUSAL
    except PrcError as exc:
        sys.stderr.write(f"error: {exc}\n")
        code = EX_DATAERR
    sys.stderr.write(f"elapsed_ms={int((time.monotonic() - started) * 1000)}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
