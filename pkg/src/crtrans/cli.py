"""Command line front end: parse a document, run its tasks, emit a JSON report.

The JSON report goes to stdout (or to --json PATH); a short human summary goes
to stderr. Exit codes: 0 when everything certified or gated cleanly, 1 when a
suite row is falsified or the document is invalid, 2 for usage and I/O errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from . import grammar
from .crmap import (
    CRMap,
    basid_check,
    is_automorphism,
    is_cr_transversal,
    is_jacobian_nonzero,
    is_not_totally_degenerate,
    is_transversally_flat,
    normal_component_reality_check,
    sends_into,
    transversal_order,
    trord_bound_check,
)
from .errors import CrtransError, GrammarError
from .fracseries import FracSeries
from .hypersurface import (
    Convention,
    NormalHypersurface,
    TypeKind,
    classify_type,
    from_graph,
    is_class_c,
    is_class_cm,
    is_holomorphically_nondegenerate,
    validate,
)
from .models import blowup_hypersurface, exp_model, heisenberg, m_psi
from .prolongation import ProlongationInstance, forward_expand, minimal_ordered_nonzero, prolongation_solve
from .verify import build_registry, run_all, suite_easystuff, suite_finite_type, suite_infinite_type

SCHEMA = "crtrans-report/1"

__all__ = ["main", "SCHEMA"]


def _version() -> str:
    try:
        from importlib.metadata import version

        return version("crtrans")
    except Exception:
        return "0.0.0"


def _convention(tag: str) -> Convention:
    return Convention.TWO_I if tag == "2i" else Convention.I


# ---------------- realizing declarations ----------------


def _realize_surface(
    ref: grammar.Ref, env: Dict[str, grammar.Declaration], degree: int, conv: Convention
) -> Tuple[str, NormalHypersurface]:
    if isinstance(ref, grammar.NameRef):
        decl = env[ref.name]
        if isinstance(decl, grammar.SeriesDecl):
            return ref.name, _surface_from_q_expr(decl.expr, degree, conv)
        assert isinstance(decl, grammar.SurfaceDecl)
        return ref.name, _surface_from_ctor(decl.kind, decl.args, degree, conv)
    kind = "q" if ref.kind == "hypersurface" else ref.kind
    return grammar._render_ref(ref), _surface_from_ctor(kind, ref.args, degree, conv)


def _surface_from_q_expr(expr, degree: int, conv: Convention) -> NormalHypersurface:
    n = grammar.block_size([expr])
    layout, arity = grammar.q_layout(n)
    q = grammar.evaluate(expr, layout, arity, degree)
    return NormalHypersurface(n, q, conv)


def _surface_from_ctor(kind: str, args, degree: int, conv: Convention) -> NormalHypersurface:
    if kind == "q":
        return _surface_from_q_expr(args[0], degree, conv)
    if kind == "graph":
        n = grammar.block_size([args[0]])
        layout, arity = grammar.graph_layout(n)
        phi = grammar.evaluate(args[0], layout, arity, degree)
        return from_graph(phi, conv)
    if kind == "heisenberg":
        return heisenberg(args[0], degree, conv)
    if kind == "blowup":
        return blowup_hypersurface(args[0], args[1], degree, conv)
    if kind == "exp_model":
        return exp_model(args[0], degree, conv)
    if kind == "m_psi":
        n = grammar.block_size(list(args))
        layout, arity = grammar.psi_layout(n)
        psi = tuple(grammar.evaluate(a, layout, arity, degree) for a in args)
        return m_psi(psi, degree, conv)
    raise CrtransError(f"unknown hypersurface constructor {kind}")


def _realize_map(
    ref: grammar.Ref, env: Dict[str, grammar.Declaration], degree: int
) -> Tuple[str, CRMap]:
    if isinstance(ref, grammar.NameRef):
        decl = env[ref.name]
        assert isinstance(decl, grammar.MapDecl)
        name, comps, normal = ref.name, decl.components, decl.normal
    else:
        comps, normal = ref.args
        name = grammar._render_ref(ref)
    n = grammar.block_size(list(comps) + [normal])
    layout, arity = grammar.map_layout(n)
    f = tuple(grammar.evaluate(c, layout, arity, degree) for c in comps)
    g = grammar.evaluate(normal, layout, arity, degree)
    return name, CRMap(f, g)


# ---------------- task runners ----------------


def _run_classify(task: grammar.ClassifyTask, env, degree: int, conv: Convention, seed: int) -> dict:
    name, m = _realize_surface(task.target, env, degree, conv)
    cls = classify_type(m)
    result = {
        "task": "classify",
        "name": name,
        "n": m.n,
        "classification": cls.to_json(),
        "validate": validate(m).to_json(),
        "class_c": is_class_c(m, seed=seed).to_json(),
        "holomorphically_nondegenerate": is_holomorphically_nondegenerate(m, seed=seed).to_json(),
        "class_cm": None,
    }
    if cls.kind is TypeKind.INFINITE:
        result["class_cm"] = is_class_cm(m, seed=seed).to_json()
    return result


def _run_checkmap(task: grammar.CheckMapTask, env, degree: int, conv: Convention, seed: int) -> dict:
    hname, h = _realize_map(task.map, env, degree)
    sname, src = _realize_surface(task.source, env, degree, conv)
    tname, tgt = _realize_surface(task.target, env, degree, conv)
    equidim = h.source_n == h.target_n
    self_map = src.n == tgt.n and src.convention is tgt.convention and src.q == tgt.q
    result = {
        "task": "check_map",
        "map": hname,
        "source": sname,
        "target": tname,
        "sends_into": sends_into(h, src, tgt).to_json(),
        "transversal_order": transversal_order(h).to_json(),
        "transversally_flat": is_transversally_flat(h).to_json(),
        "cr_transversal": is_cr_transversal(h).to_json(),
        "not_totally_degenerate": is_not_totally_degenerate(h, seed=seed).to_json(),
        "normal_unit_reality": normal_component_reality_check(h, src, tgt).to_json(),
        "order_bound": trord_bound_check(h, src, tgt).to_json(),
        "jacobian_nonzero": None,
        "automorphism": None,
        "unit_scale_law": None,
    }
    if equidim:
        result["jacobian_nonzero"] = is_jacobian_nonzero(h).to_json()
        result["automorphism"] = is_automorphism(h).to_json()
    if self_map:
        result["unit_scale_law"] = basid_check(h, src).to_json()
    return result


def _run_prolong(task: grammar.ProlongTask, env, degree: int) -> dict:
    a_decl = env[task.a]
    exprs = [a_decl.expr] + [env[c].expr for c in task.components]
    n = grammar.block_size(exprs)
    layout, arity = grammar.pair_layout(n)
    a = grammar.evaluate(a_decl.expr, layout, arity, degree)
    comps = tuple(grammar.evaluate(env[c].expr, layout, arity, degree) for c in task.components)
    if len(task.alpha) != n:
        raise CrtransError(
            f"jet index {task.alpha} has length {len(task.alpha)}, but the data uses {n} z variables"
        )
    pivot = minimal_ordered_nonzero(a, n)
    max_order = sum(task.alpha) + sum(pivot)
    jets = forward_expand(a, n, comps, max_order)
    solution = prolongation_solve(ProlongationInstance(a, n, jets), task.alpha)

    chi_names = [f"chi{j + 1}" for j in range(n)]
    z_block = tuple(range(n))
    scale = 1
    for e in task.alpha:
        scale *= factorial(e)
    matches = all(
        value == FracSeries.from_series(comp.coefficient_series(z_block, task.alpha).scale(scale))
        for value, comp in zip(solution.values, comps)
    )
    return {
        "task": "prolong",
        "a": task.a,
        "components": list(task.components),
        "alpha": list(solution.alpha),
        "pivot": list(solution.pivot),
        "values": [v.to_str(chi_names) for v in solution.values],
        "max_jet_order_used": solution.max_jet_order_used,
        "degree_used": solution.degree_used,
        "matches_direct_expansion": matches,
    }


def _run_verify(suite: Optional[str], degree: int, conv: Convention, seed: int) -> dict:
    if suite is None:
        return run_all(degree=degree, convention=conv, seed=seed)
    maps, easy = build_registry(degree, conv)
    rows = {
        "finite_type": lambda: suite_finite_type(maps, seed=seed),
        "infinite_type": lambda: suite_infinite_type(maps, seed=seed),
        "easystuff": lambda: suite_easystuff(easy, seed=seed),
    }[suite]()
    counts = {"confirmed": 0, "hypothesis_not_certified": 0, "falsified": 0}
    for r in rows:
        counts[
            "falsified" if r.status.value == "FALSIFIED" else r.status.value
        ] += 1
    return {
        "degree": degree,
        "convention": conv.value,
        "seed": seed,
        "suites": {suite: [r.to_json() for r in rows]},
        "counts": counts,
        "falsified": counts["falsified"] > 0,
    }


_FAMILIES = [
    {"name": "heisenberg(n)", "kind": "finite type quadric", "m": None},
    {"name": "m_psi(psi_1, ..., psi_d)", "kind": "sum of squares over a holomorphic map", "m": None},
    {"name": "blowup(b, c)", "kind": "infinite type blowup model, needs 2b > c", "m": "2b - c + 1"},
    {"name": "exp_model(k)", "kind": "1-infinite exponential model", "m": 1},
]


def _run_examples(degree: int, conv: Convention, seed: int) -> dict:
    maps, easy = build_registry(degree, conv)
    instances = []
    for inst in maps:
        instances.append(
            {
                "id": inst.id,
                "realm": inst.realm,
                "sends_into": sends_into(inst.h, inst.source, inst.target).to_json(),
                "note": inst.note or None,
            }
        )
    return {
        "families": _FAMILIES,
        "map_instances": instances,
        "intertwined_instances": [
            {"id": e.id, "note": e.note or None} for e in easy
        ],
    }


# ---------------- orchestration ----------------


def _read_document(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(report: dict, json_path: Optional[str], summary: List[str]) -> None:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for line in summary:
        print(line, file=sys.stderr)


def _verdict_word(v: Optional[dict]) -> str:
    return "n/a" if v is None else v["status"]


def _summarize(results: List[dict]) -> List[str]:
    lines = []
    for r in results:
        if r["task"] == "classify":
            cls = r["classification"]
            kind = cls["kind"]
            if cls["m"] is not None:
                kind += f", m = {cls['m']}"
            lines.append(
                f"classify {r['name']}: {kind}; validate {r['validate']['status']}, "
                f"class C {r['class_c']['status']}"
            )
        elif r["task"] == "check_map":
            trord = r["transversal_order"]["value"]
            lines.append(
                f"checkmap {r['map']}: {r['source']} -> {r['target']}: "
                f"sends_into {_verdict_word(r['sends_into'])}, "
                f"trord {'flat' if trord is None else trord}, "
                f"cr_transversal {_verdict_word(r['cr_transversal'])}"
            )
        elif r["task"] == "prolong":
            lines.append(
                f"prolong {r['a']} at {tuple(r['alpha'])}: pivot {tuple(r['pivot'])}, "
                f"jet order used {r['max_jet_order_used']}, "
                f"matches forward data: {r['matches_direct_expansion']}"
            )
    return lines


def _document_command(args, kinds, runner) -> int:
    try:
        text = _read_document(args.document)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        doc = grammar.parse(text)
    except GrammarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    degree = args.degree if args.degree is not None else (doc.degree or 10)
    conv = _convention(args.complexify or doc.convention or "2i")
    env = {d.name: d for d in doc.declarations}
    tasks = [t for t in doc.tasks if isinstance(t, kinds)]
    results: List[dict] = []
    errors: List[dict] = []
    if not tasks and isinstance(kinds, tuple) and grammar.ClassifyTask in kinds:
        # default work: classify every declared hypersurface
        tasks = [
            grammar.ClassifyTask(grammar.NameRef(d.name))
            for d in doc.declarations
            if isinstance(d, grammar.SurfaceDecl)
        ]
    if not tasks:
        errors.append({"task": None, "error": "document contains no task for this command"})
    for task in tasks:
        try:
            results.append(runner(task, env, degree, conv, args.seed))
        except CrtransError as exc:
            errors.append({"task": grammar._render_task(task), "error": str(exc)})
    report = {
        "schema": SCHEMA,
        "version": _version(),
        "command": args.command,
        "input_digest": hashlib.sha256(text.encode("utf-8")).hexdigest(),
        "degree": degree,
        "convention": conv.value,
        "seed": args.seed,
        "results": results,
        "errors": errors,
    }
    summary = _summarize(results) + [f"error: {e['error']}" for e in errors]
    _emit(report, args.json, summary)
    return 1 if errors else 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="crtrans",
        description="exact truncated-series toolkit for normal-form hypersurfaces and the maps between them",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, document: bool) -> None:
        p.add_argument("--degree", type=int, default=None, help="truncation degree (default 10)")
        p.add_argument(
            "--complexify",
            choices=("2i", "i"),
            default=None,
            help="graph complexification convention (default 2i)",
        )
        p.add_argument("--seed", type=int, default=0, help="seed for randomized rank certificates")
        p.add_argument("--json", metavar="PATH", default=None, help="write the JSON report here")
        if document:
            p.add_argument(
                "document",
                nargs="?",
                default=None,
                help="input document (defaults to stdin; '-' also reads stdin)",
            )

    common(sub.add_parser("classify", help="classify declared hypersurfaces"), True)
    common(sub.add_parser("check-map", help="run checkmap tasks from a document"), True)
    common(sub.add_parser("prolong", help="run prolong tasks from a document"), True)
    p_verify = sub.add_parser("verify", help="run the statement suites on the built-in registry")
    common(p_verify, False)
    p_verify.add_argument(
        "--suite",
        choices=("finite_type", "infinite_type", "easystuff"),
        default=None,
        help="run a single suite instead of all three",
    )
    common(sub.add_parser("examples", help="list the built-in model families and instances"), False)
    sub.add_parser("print-grammar", help="print the input grammar")

    args = parser.parse_args(argv)

    if args.command == "print-grammar":
        sys.stdout.write(grammar.GRAMMAR_TEXT)
        return 0

    if args.command == "classify":
        return _document_command(
            args,
            (grammar.ClassifyTask,),
            lambda t, env, d, c, s: _run_classify(t, env, d, c, s),
        )
    if args.command == "check-map":
        return _document_command(
            args,
            (grammar.CheckMapTask,),
            lambda t, env, d, c, s: _run_checkmap(t, env, d, c, s),
        )
    if args.command == "prolong":
        return _document_command(
            args,
            (grammar.ProlongTask,),
            lambda t, env, d, c, s: _run_prolong(t, env, d),
        )

    degree = args.degree if args.degree is not None else 10
    conv = _convention(args.complexify or "2i")
    if args.command == "verify":
        report = _run_verify(args.suite, degree, conv, args.seed)
        report = {"schema": SCHEMA, "version": _version(), "command": "verify", **report}
        counts = report["counts"]
        _emit(
            report,
            args.json,
            [
                f"verify: {counts['confirmed']} confirmed, "
                f"{counts['hypothesis_not_certified']} gated, "
                f"{counts['falsified']} falsified"
            ],
        )
        return 1 if report["falsified"] else 0

    if args.command == "examples":
        body = _run_examples(degree, conv, args.seed)
        report = {
            "schema": SCHEMA,
            "version": _version(),
            "command": "examples",
            "degree": degree,
            "convention": conv.value,
            "seed": args.seed,
            **body,
        }
        _emit(
            report,
            args.json,
            [
                f"examples: {len(body['families'])} families, "
                f"{len(body['map_instances'])} map instances"
            ],
        )
        return 0

    parser.error(f"unknown command {args.command}")  # pragma: no cover
    return 2  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
