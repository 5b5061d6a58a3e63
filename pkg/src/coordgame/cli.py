"""Command-line interface.

Exit codes: 0 property holds / solve succeeded, 1 property refuted (witness
emitted), 2 usage or parse error, 3 budget exceeded. Builtin instance names
(fig1, fig3, octahedron, ..., optionally with parameters as
"tag:key=value,key=value") are accepted wherever an instance path is and are
resolved before file lookup. COORDGAME_BUDGET overrides the default search
budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from typing import Optional

from . import analysis, instances, solvers
from .colorforest import default_start, solve_color_forest, verify_color_forest
from .deviations import (
    DEFAULT_BUDGET,
    audit_key_lemma,
    find_profitable_deviation,
    is_k_equilibrium,
)
from .dynamics import (
    PseudoforestPotential,
    SCHEDULERS,
    SortedPayoffPotential,
    WelfarePotential,
    run_improvement_path,
)
from .errors import BudgetExceededError, CoordGameError
from .fileformat import parse_instance, parse_profile, serialize_instance
from .game import CoordinationGame, JointStrategy, social_welfare
from .graph import classify

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

CSV_COLUMNS = ("instance", "n", "m_colors", "k", "property", "value", "witness", "runtime_ms")


@dataclass
class LoadedInstance:
    name: str
    game: CoordinationGame
    profile: Optional[JointStrategy]
    canonical_deviation: Optional[object]


def _default_budget() -> int:
    raw = os.environ.get("COORDGAME_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"COORDGAME_BUDGET must be an integer, got {raw!r}") from None


def _parse_params(text: Optional[str]) -> dict:
    params: dict = {}
    if not text:
        return params
    for item in text.split(","):
        if "=" not in item:
            raise ValueError(f"malformed parameter {item!r}; expected key=value")
        key, value = item.split("=", 1)
        params[key.strip()] = value.strip()
    return params


def _load_instance(spec: str) -> LoadedInstance:
    tag, _, params_text = spec.partition(":")
    if tag in instances.BUILTIN_TAGS:
        inst = instances.generate(tag, **_parse_params(params_text))
        return LoadedInstance(
            name=inst.name,
            game=inst.game,
            profile=inst.reference_profile,
            canonical_deviation=inst.canonical_deviation,
        )
    with open(spec, encoding="utf-8") as fh:
        parsed = parse_instance(fh.read())
    name = parsed.name or os.path.basename(spec)
    return LoadedInstance(name, parsed.game, parsed.profile, None)


def _resolve_profile(args, loaded: LoadedInstance, required: bool) -> Optional[JointStrategy]:
    if getattr(args, "profile", None):
        with open(args.profile, encoding="utf-8") as fh:
            return parse_profile(fh.read(), loaded.game)
    if loaded.profile is not None:
        return loaded.profile
    if required:
        raise ValueError(
            f"instance {loaded.name} carries no profile; pass one with --profile"
        )
    return None


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return repr(value)
    return str(value)


def _profile_text(game: CoordinationGame, s: JointStrategy) -> str:
    return ",".join(s.named(game))


class Reporter:
    """Collects report rows and renders them as text, CSV, or JSON lines."""

    def __init__(self, loaded: LoadedInstance, started: float):
        self.loaded = loaded
        self.started = started
        self.rows: list[dict] = []

    def add(self, prop: str, value, k=None, witness=None):
        self.rows.append(
            {
                "instance": self.loaded.name,
                "n": self.loaded.game.node_count,
                "m_colors": self.loaded.game.color_count,
                "k": "" if k is None else k,
                "property": prop,
                "value": _fmt(value),
                "witness": witness or "",
                "runtime_ms": 0,
            }
        )

    def render(self, fmt: str) -> str:
        runtime_ms = round(1000 * (time.perf_counter() - self.started), 3)
        for row in self.rows:
            row["runtime_ms"] = runtime_ms
        if fmt == "csv":
            buf = io.StringIO()
            writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
            writer.writeheader()
            writer.writerows(self.rows)
            return buf.getvalue()
        if fmt == "json-lines":
            return "\n".join(json.dumps(row, sort_keys=True) for row in self.rows) + "\n"
        lines = []
        for row in self.rows:
            prefix = f"{row['property']}" + (f"[k={row['k']}]" if row["k"] != "" else "")
            line = f"{prefix} = {row['value']}"
            if row["witness"]:
                line += f"  witness {row['witness']}"
            lines.append(line)
        return "\n".join(lines) + "\n"


def _write_output(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _auto_potential(game: CoordinationGame):
    cls = classify(game.graph, game.assignment)
    if cls.is_pseudoforest:
        return PseudoforestPotential()
    if game.color_count <= 2 or cls.is_color_forest:
        return WelfarePotential()
    if cls.is_color_complete:
        return SortedPayoffPotential()
    return None


def _cmd_verify(args, loaded: LoadedInstance, reporter: Reporter) -> int:
    game = loaded.game
    s = _resolve_profile(args, loaded, required=True)
    k = args.k if args.k is not None else game.node_count
    method = args.method
    if method == "auto":
        cls = classify(game.graph, game.assignment)
        method = "colorforest" if cls.is_color_forest else "brute"
    if method == "colorforest":
        ok, witness = verify_color_forest(game, s, k)
    elif method == "brute":
        ok, witness = is_k_equilibrium(game, s, k, budget=args.budget)
    else:
        raise ValueError(f"verify does not support method {method!r}")
    reporter.add(
        f"{k}-equilibrium",
        ok,
        k=k,
        witness=witness.describe(game) if witness else None,
    )
    return EXIT_OK if ok else EXIT_REFUTED


def _cmd_solve(args, loaded: LoadedInstance, reporter: Reporter) -> int:
    game = loaded.game
    method = args.method
    if method == "auto":
        strategy, method = solvers.solve_auto(game, budget=args.budget)
    elif method == "colorforest":
        strategy = solve_color_forest(game)
    elif method == "pseudoforest":
        strategy = solvers.solve_pseudoforest(game)
    elif method == "colorcomplete":
        strategy = solvers.solve_color_complete(game)
    elif method == "brute":
        strategy = solvers.brute_strong_equilibrium(game, budget=args.budget)
    else:
        raise ValueError(f"unknown solve method {method!r}")
    reporter.add("method", method)
    if strategy is None:
        reporter.add("strong-equilibrium", "none-exists")
        return EXIT_REFUTED
    reporter.add("strong-equilibrium", _profile_text(game, strategy))
    reporter.add("social-welfare", social_welfare(game, strategy))
    return EXIT_OK


def _cmd_dynamics(args, loaded: LoadedInstance, reporter: Reporter) -> int:
    game = loaded.game
    s0 = _resolve_profile(args, loaded, required=False) or default_start(game)
    potential = {
        "welfare": WelfarePotential(),
        "pair": PseudoforestPotential(),
        "vector": SortedPayoffPotential(),
        "none": None,
    }.get(args.potential, "auto")
    if potential == "auto":
        potential = _auto_potential(game)
    trace = run_improvement_path(
        game,
        s0,
        scheduler=args.scheduler,
        max_coalition=args.k,
        step_limit=args.steps,
        potential=potential,
        seed=args.seed,
        budget=args.budget,
    )
    reporter.add("improvement-path", trace.reason)
    reporter.add("steps", trace.step_count)
    reporter.add("terminal", _profile_text(game, trace.terminal))
    reporter.add("terminal-social-welfare", social_welfare(game, trace.terminal))
    if trace.violation is not None:
        v = trace.violation
        reporter.add(
            "potential-violation",
            f"step {v.step_index}: {v.before.payload} -> {v.after.payload}",
            witness=v.report.describe(game),
        )
    return EXIT_OK if trace.reason == "equilibrium" else EXIT_REFUTED


def _cmd_poa(args, loaded: LoadedInstance, reporter: Reporter) -> int:
    game = loaded.game
    ks = args.k if args.k else None
    report = analysis.inefficiency(game, ks=ks, budget=args.budget)
    reporter.add("social-optimum-welfare", report.optimum_sw)
    reporter.add("social-optimum", _profile_text(game, report.optimum))
    reporter.add("enumeration-complete", report.complete)
    for stats in report.per_k:
        k = stats.k
        if not stats.exists:
            reporter.add("k-equilibrium-exists", False, k=k)
            continue
        reporter.add("k-equilibrium-exists", True, k=k)
        reporter.add("k-equilibrium-min-welfare", stats.min_sw, k=k)
        reporter.add("k-equilibrium-max-welfare", stats.max_sw, k=k)
        reporter.add("k-poa", stats.poa, k=k)
        reporter.add("k-pos", stats.pos, k=k)
        if stats.upper_bound is not None:
            reporter.add("k-poa-upper-bound", stats.upper_bound, k=k)
            reporter.add("k-poa-bound-violated", stats.bound_violated, k=k)
    return EXIT_OK


def _cmd_transition(args, loaded: LoadedInstance, reporter: Reporter) -> int:
    value = analysis.transition_value(loaded.game, budget=args.budget)
    reporter.add("transition-value", value)
    return EXIT_OK


def _cmd_classify(args, loaded: LoadedInstance, reporter: Reporter) -> int:
    cls = classify(loaded.game.graph, loaded.game.assignment)
    reporter.add("is-forest", cls.is_forest)
    reporter.add("is-pseudoforest", cls.is_pseudoforest)
    reporter.add("cycles-pairwise-edge-disjoint", cls.cycles_pairwise_edge_disjoint)
    reporter.add("girth", "inf" if math.isinf(cls.girth) else int(cls.girth))
    reporter.add("is-color-forest", cls.is_color_forest)
    reporter.add("is-color-complete", cls.is_color_complete)
    return EXIT_OK


def _cmd_audit(args, loaded: LoadedInstance, reporter: Reporter) -> int:
    game = loaded.game
    s = _resolve_profile(args, loaded, required=True)
    report = loaded.canonical_deviation
    if report is None:
        k = args.k if args.k is not None else game.node_count
        report = find_profitable_deviation(game, s, max_coalition=k, budget=args.budget)
        if report is None:
            reporter.add("deviation", "none-found", k=k)
            return EXIT_OK
    audit = audit_key_lemma(game, s, report)
    reporter.add("deviation", report.describe(game))
    reporter.add("delta-sw", audit.delta_sw)
    reporter.add("tau", audit.tau)
    reporter.add("eq1-rhs", audit.eq1_rhs)
    reporter.add("eq1-holds", audit.eq1_holds)
    reporter.add("eq2-rhs", audit.eq2_rhs)
    reporter.add("eq2-holds", audit.eq2_holds)
    reporter.add("corollary-bound", audit.corollary_bound)
    reporter.add("corollary-holds", audit.corollary_holds)
    return EXIT_OK if audit.all_hold else EXIT_REFUTED


def _cmd_gen(args) -> int:
    inst = instances.generate(args.tag, **_parse_params(args.params))
    text = serialize_instance(inst.game, inst.reference_profile, name=inst.name)
    _write_output(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coordgame",
        description="Coordination games on graphs: verify, solve, and analyze.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--instance", required=True, help="instance path or builtin name")
    common.add_argument("--profile", help="profile file overriding any embedded profile")
    common.add_argument("--budget", type=int, default=None, help="search budget override")
    common.add_argument(
        "--format",
        choices=("text", "csv", "json-lines"),
        default="text",
        dest="fmt",
        help="report format",
    )
    common.add_argument("--out", help="write the report to a file instead of stdout")

    p = sub.add_parser("verify", parents=[common], help="check whether a profile is a k-equilibrium")
    p.add_argument("--k", type=int, default=None, help="coalition size bound (default n)")
    p.add_argument("--method", choices=("auto", "colorforest", "brute"), default="auto")

    p = sub.add_parser("solve", parents=[common], help="compute a strong equilibrium")
    p.add_argument(
        "--method",
        choices=("auto", "colorforest", "pseudoforest", "colorcomplete", "brute"),
        default="auto",
    )

    p = sub.add_parser("dynamics", parents=[common], help="run a coalitional improvement path")
    p.add_argument("--k", type=int, default=None, help="max coalition size (default n)")
    p.add_argument("--scheduler", choices=SCHEDULERS, default="first-found")
    p.add_argument("--seed", type=int, default=None, help="seed (required for random scheduler)")
    p.add_argument("--steps", type=int, default=1000, help="step limit")
    p.add_argument(
        "--potential",
        choices=("auto", "welfare", "pair", "vector", "none"),
        default="auto",
        help="potential tracker to attach",
    )

    p = sub.add_parser("poa", parents=[common], help="inefficiency report by enumeration")
    p.add_argument(
        "--k",
        type=int,
        action="append",
        default=None,
        help="coalition bound to report (repeatable; default all)",
    )

    sub.add_parser("transition", parents=[common], help="largest k with a k-equilibrium")
    sub.add_parser("classify", parents=[common], help="structural classification flags")

    p = sub.add_parser("audit-keylemma", parents=[common], help="audit the welfare identities")
    p.add_argument("--k", type=int, default=None, help="coalition bound for the deviation search")

    p = sub.add_parser("gen", help="emit a builtin instance as canonical text")
    p.add_argument("tag", choices=instances.BUILTIN_TAGS)
    p.add_argument("--params", help="comma-separated key=value parameters")
    p.add_argument("--out", help="write to a file instead of stdout")

    return parser


_COMMANDS = {
    "verify": _cmd_verify,
    "solve": _cmd_solve,
    "dynamics": _cmd_dynamics,
    "poa": _cmd_poa,
    "transition": _cmd_transition,
    "classify": _cmd_classify,
    "audit-keylemma": _cmd_audit,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.budget is None:
            args.budget = _default_budget()
        started = time.perf_counter()
        loaded = _load_instance(args.instance)
        reporter = Reporter(loaded, started)
        code = _COMMANDS[args.command](args, loaded, reporter)
        _write_output(reporter.render(args.fmt), args.out)
        return code
    except BudgetExceededError as exc:
        print(f"coordgame: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CoordGameError, ValueError, KeyError, OSError) as exc:
        print(f"coordgame: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
