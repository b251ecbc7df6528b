"""Command-line entry point: load fixture specs, run axiom checks, emit
classification, decomposition and tree reports, and generate the built-in
examples.

Exit codes: 0 all checks hold, 1 a counterexample was found, 2 malformed
input, 3 internal-consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Any, Optional

from . import examples as ex
from .carrier import (
    DomainError,
    GroupCarrier,
    InternalConsistencyError,
    InvalidParameterError,
    WindowPolicy,
    make_cyclic,
    make_free_abelian,
    make_hahn,
    make_semidirect,
    make_table,
)
from .classify import check_cqo_axioms, elementary_kind, type_report
from .crel import (
    AxiomReport,
    CRelation,
    Valuation,
    check_c_axioms,
    check_compatibility,
    check_valuation_axioms,
    crel_from_order,
    crel_from_qo,
    crel_from_valuation,
    trivial_valuation,
    valuation_from_levels,
)
from .ctree import build_tree, export_dot, orbit_trichotomy, orbits
from .qorder import QuasiOrder, natural_order, qo_from_levels, trivial_qo
from .structure import Decomposition, decompose, lift_from_tables, reconstruct_from
from .crel import INF

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class SpecError(ValueError):
    """Malformed job specification."""


@dataclass
class JobSpec:
    group: GroupCarrier
    policy: WindowPolicy
    qo: Optional[QuasiOrder] = None
    valuation: Optional[Valuation] = None
    crel: Optional[CRelation] = None
    command: Optional[str] = None
    metadata: Optional[dict] = None
    raw: Optional[dict] = None


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------


def _need(obj: dict, key: str, ctx: str):
    if key not in obj:
        raise SpecError(f"{ctx}: missing required key {key!r}")
    return obj[key]


def load_group(obj: dict) -> GroupCarrier:
    if not isinstance(obj, dict):
        raise SpecError("group: expected an object")
    kind = _need(obj, "kind", "group")
    try:
        if kind == "cyclic":
            return make_cyclic(int(_need(obj, "n", "group.cyclic")))
        if kind == "table":
            return make_table(
                str(obj.get("name", "table")),
                _need(obj, "mul", "group.table"),
                labels=obj.get("labels"),
            )
        if kind == "free_abelian":
            return make_free_abelian(
                int(_need(obj, "rank", "group.free_abelian")),
                int(_need(obj, "radius", "group.free_abelian")),
            )
        if kind == "hahn":
            base = load_group(_need(obj, "base", "group.hahn"))
            return make_hahn(
                [int(i) for i in _need(obj, "index_set", "group.hahn")],
                base,
                int(_need(obj, "radius", "group.hahn")),
            )
        if kind == "semidirect":
            left = load_group(_need(obj, "left", "group.semidirect"))
            right = load_group(_need(obj, "right", "group.semidirect"))
            return make_semidirect(left, right, str(obj.get("action", "identity")))
    except InvalidParameterError as e:
        raise SpecError(f"group: {e}") from e
    raise SpecError(f"group: unknown kind {kind!r}")


def group_spec_of(carrier: GroupCarrier) -> dict:
    if carrier.kind in ("table", "cyclic"):
        return {
            "kind": "table",
            "name": carrier.name,
            "mul": [list(row) for row in carrier.mul_table],
            "labels": list(carrier.labels),
        }
    if carrier.kind == "free_abelian":
        return {"kind": "free_abelian", "rank": carrier.rank, "radius": carrier.window_radius}
    if carrier.kind == "hahn_window":
        return {
            "kind": "hahn",
            "index_set": list(carrier.index_set),
            "base": group_spec_of(carrier.base),
            "radius": carrier.window_radius,
        }
    if carrier.kind == "semidirect":
        action = "identity"
        from .carrier import HahnCarrier

        if isinstance(carrier.right, HahnCarrier) and not carrier.is_abelian:
            action = "shift"
        return {
            "kind": "semidirect",
            "left": group_spec_of(carrier.left),
            "right": group_spec_of(carrier.right),
            "action": action,
        }
    raise SpecError(f"cannot serialize carrier kind {carrier.kind!r}")


def load_valuation(obj: dict, carrier: GroupCarrier) -> Valuation:
    kind = _need(obj, "kind", "valuation")
    if kind == "trivial":
        return trivial_valuation(carrier)
    if kind == "vg":
        return ex.vg_valuation(carrier)
    if kind == "support_min":
        return ex.support_min_valuation(carrier)
    if kind == "levels":
        levels = [
            [carrier.decode(p) for p in lvl]
            for lvl in _need(obj, "levels", "valuation.levels")
        ]
        return valuation_from_levels(carrier, levels, name="valuation")
    raise SpecError(f"valuation: unknown kind {kind!r}")


def load_spec(data: dict, policy_override: Optional[WindowPolicy] = None) -> JobSpec:
    if not isinstance(data, dict):
        raise SpecError("spec: expected a JSON object")
    if data.get("format", "cqog-spec") != "cqog-spec":
        raise SpecError(f"spec: unknown format {data.get('format')!r}")
    win = data.get("window", {})
    if not isinstance(win, dict):
        raise SpecError("window: expected an object")
    if policy_override is not None:
        policy = policy_override
    else:
        ev = int(win.get("eval_radius", 4))
        term = int(win.get("term_radius", 2 * ev))
        try:
            policy = WindowPolicy(ev, term)
        except InvalidParameterError as e:
            raise SpecError(f"window: {e}") from e

    qo_obj = data.get("qo")
    val_obj = data.get("valuation")
    crel_obj = data.get("crel")

    group = None
    qo = None
    if qo_obj is not None:
        kind = _need(qo_obj, "kind", "qo")
        if kind == "example":
            name = str(_need(qo_obj, "name", "qo.example"))
            span = qo_obj.get("index_span", list(ex.DEFAULT_INDEX_SPAN))
            if name not in ex.EXAMPLE_NAMES:
                raise SpecError(f"qo.example: unknown name {name!r}")
            qo = ex.example_qo(name, policy=policy, index_span=(int(span[0]), int(span[1])))
            group = qo.carrier
            if "group" in data:
                declared = load_group(data["group"])
                if declared.kind != group.kind:
                    raise SpecError(
                        f"group kind {declared.kind!r} does not match example carrier {group.kind!r}"
                    )
    if group is None:
        group = load_group(_need(data, "group", "spec"))

    valuation = None
    if val_obj is not None:
        valuation = load_valuation(val_obj, group)

    if qo is None and qo_obj is not None:
        kind = qo_obj["kind"]
        if kind == "levels":
            levels = [
                [group.decode(p) for p in lvl]
                for lvl in _need(qo_obj, "levels", "qo.levels")
            ]
            try:
                qo = qo_from_levels(group, levels, name="qo")
            except InvalidParameterError as e:
                raise SpecError(f"qo.levels: {e}") from e
        elif kind == "natural_order":
            qo = ex.order_type_qo(group)
        elif kind == "order_plain":
            order = natural_order(group)
            qo = QuasiOrder(group, {x: i for i, x in enumerate(order.sorted_universe())}, key_fn=lambda v: v, name="order-plain")
        elif kind == "trivial":
            qo = trivial_qo(group)
        elif kind == "trivial_valuation":
            qo = ex.trivial_valuation_qo(group)
        elif kind == "from_valuation":
            if valuation is None:
                raise SpecError("qo.from_valuation: needs a valuation")
            qo = valuation.induced_qo()
        else:
            raise SpecError(f"qo: unknown kind {kind!r}")

    crel = None
    if crel_obj is not None:
        kind = _need(crel_obj, "kind", "crel")
        if kind == "from_order":
            crel = crel_from_order(natural_order(group))
        elif kind == "from_valuation":
            if valuation is None:
                raise SpecError("crel.from_valuation: needs a valuation")
            crel = crel_from_valuation(valuation)
        elif kind == "from_qo":
            if qo is None:
                raise SpecError("crel.from_qo: needs a qo")
            crel = crel_from_qo(qo)
        else:
            raise SpecError(f"crel: unknown kind {kind!r}")

    return JobSpec(
        group=group,
        policy=policy,
        qo=qo,
        valuation=valuation,
        crel=crel,
        command=data.get("command"),
        metadata=data.get("metadata"),
        raw=data,
    )


def load_spec_file(path: str, policy_override: Optional[WindowPolicy] = None) -> JobSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise SpecError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise SpecError(f"{path}: invalid JSON: {e}") from e
    return load_spec(data, policy_override)


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _report_text(rep: AxiomReport) -> str:
    lines = [f"subject: {rep.subject}"]
    car = rep.carrier
    for c in rep.checks:
        line = f"{c.name}: {c.status} (checked={c.checked}, skipped={c.skipped})"
        if c.counterexample is not None and car is not None:
            line += "  witness: " + ", ".join(car.label(t) for t in c.counterexample)
        lines.append(line)
    lines.extend(f"note: {n}" for n in rep.notes)
    return "\n".join(lines)


def _policy_from_args(args, spec_data=None) -> Optional[WindowPolicy]:
    if args.radius is None and args.term_radius is None:
        return None
    ev = args.radius if args.radius is not None else 4
    term = args.term_radius if args.term_radius is not None else 2 * ev
    return WindowPolicy(ev, term)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_check(args) -> int:
    job = load_spec_file(args.spec, _policy_from_args(args))
    reports: list[AxiomReport] = []
    if job.crel is not None:
        reports.append(check_c_axioms(job.crel, job.policy))
        reports.append(check_compatibility(job.crel, job.policy))
    elif job.qo is not None:
        reports.append(check_cqo_axioms(job.qo, job.policy))
    elif job.valuation is not None:
        reports.append(check_valuation_axioms(job.valuation, job.policy))
    else:
        raise SpecError("spec: nothing to check (no crel, qo, or valuation)")
    if args.format == "json":
        _emit(_dump_json([r.as_dict() for r in reports]), args.out)
    else:
        _emit("\n\n".join(_report_text(r) for r in reports), args.out)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_COUNTEREXAMPLE


def cmd_classify(args) -> int:
    job = load_spec_file(args.spec, _policy_from_args(args))
    if job.qo is None:
        raise SpecError("classify: spec must define a qo")
    rep = check_cqo_axioms(job.qo, job.policy)
    if not rep.ok:
        _emit(_report_text(rep), args.out)
        return EXIT_COUNTEREXAMPLE
    tr = type_report(job.qo)
    kind = elementary_kind(job.qo)
    car = job.group
    if args.format == "json":
        payload = {
            "types": [[car.encode(x), tr.types[x].value] for x in car.universe],
            "welding_points": [car.encode(x) for x in sorted(tr.welding_points, key=car.index.__getitem__)],
            "is_welded": tr.is_welded,
            "elementary_kind": kind.tag,
        }
        if kind.valuation is not None:
            payload["valuation_size"] = kind.valuation.gamma_size
        _emit(_dump_json(payload), args.out)
    else:
        lines = [f"elementary kind: {kind.tag}", f"welded: {tr.is_welded}"]
        if tr.welding_points:
            pts = ", ".join(car.label(x) for x in sorted(tr.welding_points, key=car.index.__getitem__))
            lines.append(f"welding points: {pts}")
        for x in car.universe:
            lines.append(f"{car.label(x)}: {tr.types[x].value}")
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def decomposition_spec(d: Decomposition) -> dict:
    car = d.qo.carrier
    comps = []
    for f in d.fibers:
        qc = f.carrier
        comps.append(
            {
                "gamma": f.gamma,
                "label": d.valuation.label_of(f.gamma),
                "kind": f.component.kind,
                "members": [car.encode(x) for x in sorted(f.component.members, key=car.index.__getitem__)],
                "fiber": {
                    "kind": f.kind.tag,
                    "level_count": f.qo.level_count,
                    "levels": [[car.encode(r) for r in lvl] for lvl in f.qo.levels],
                    "coset_of": [
                        [car.encode(x), car.encode(r)] for x, r in sorted(
                            qc.assignment.items(), key=lambda kv: car.index[kv[0]]
                        )
                    ],
                },
            }
        )
    return {
        "format": "cqog-decomposition",
        "group": group_spec_of(car),
        "window": {
            "eval_radius": d.policy.eval_radius,
            "term_radius": d.policy.term_radius,
        }
        if d.policy is not None
        else None,
        "components": comps,
        "welds": [
            {
                "v_class": [car.encode(x) for x in w.v_class],
                "o_class": [car.encode(x) for x in w.o_class],
            }
            for w in d.welds
        ],
        "notes": list(d.notes),
    }


def cmd_decompose(args) -> int:
    job = load_spec_file(args.spec, _policy_from_args(args))
    if job.qo is None:
        raise SpecError("decompose: spec must define a qo")
    rep = check_cqo_axioms(job.qo, job.policy)
    if not rep.ok:
        _emit(_report_text(rep), args.out)
        return EXIT_COUNTEREXAMPLE
    d = decompose(job.qo, job.policy)
    if args.format == "text":
        lines = [f"components: {len(d.fibers)}"]
        for f in d.fibers:
            lines.append(
                f"gamma={f.gamma} label={d.valuation.label_of(f.gamma)} "
                f"kind={f.kind.tag} size={len(f.component.members)}"
            )
        lines.append(f"welds: {len(d.welds)}")
        _emit("\n".join(lines), args.out)
    else:
        _emit(_dump_json(decomposition_spec(d)), args.out)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    try:
        with open(args.decomposition, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise SpecError(f"cannot read decomposition: {e}") from e
    if data.get("format") != "cqog-decomposition":
        raise SpecError("reconstruct: not a decomposition file")
    car = load_group(_need(data, "group", "decomposition"))
    gamma_of: dict = {car.identity: INF}
    fiber_rank: dict = {}
    for comp in _need(data, "components", "decomposition"):
        g = int(comp["gamma"])
        rep_rank = {}
        for r, lvl in enumerate(comp["fiber"]["levels"]):
            for p in lvl:
                rep_rank[car.decode(p)] = r
        coset_of = {car.decode(a): car.decode(b) for a, b in comp["fiber"]["coset_of"]}
        for p in comp["members"]:
            x = car.decode(p)
            gamma_of[x] = g
            fiber_rank[x] = rep_rank[coset_of[x]]
    missing = [x for x in car.universe if x not in gamma_of]
    if missing:
        raise SpecError(f"decomposition does not cover {car.label(missing[0])}")
    lifted = lift_from_tables(car, gamma_of.__getitem__, fiber_rank.__getitem__, name="reconstructed-lift")

    from .structure import WeldSite

    welds = [
        WeldSite(
            tuple(car.decode(p) for p in w["v_class"]),
            tuple(car.decode(p) for p in w["o_class"]),
        )
        for w in data.get("welds", [])
    ]
    q = reconstruct_from(lifted, welds)
    win = data.get("window") or {"eval_radius": 4, "term_radius": 8}
    out_obj = {
        "format": "cqog-spec",
        "group": group_spec_of(car),
        "qo": {"kind": "levels", "levels": [[car.encode(x) for x in lvl] for lvl in q.levels]},
        "window": win,
    }
    if args.original:
        policy = None
        win = data.get("window")
        if isinstance(win, dict):
            policy = WindowPolicy(int(win["eval_radius"]), int(win["term_radius"]))
        orig = load_spec_file(args.original, policy)
        if orig.qo is None:
            raise SpecError("original spec has no qo")
        if not q.same_as(orig.qo):
            diff = next(
                (
                    car.label(x)
                    for x in car.universe
                    if q.rank.get(x) != orig.qo.rank.get(x)
                ),
                "<universe mismatch>",
            )
            sys.stderr.write(f"reconstruction differs from the original at {diff}\n")
            return EXIT_INTERNAL
    _emit(_dump_json(out_obj), args.out)
    return EXIT_OK


def cmd_tree(args) -> int:
    job = load_spec_file(args.spec, _policy_from_args(args))
    if job.qo is None:
        raise SpecError("tree: spec must define a qo")
    rep = check_cqo_axioms(job.qo, job.policy)
    if not rep.ok:
        _emit(_report_text(rep), args.out)
        return EXIT_COUNTEREXAMPLE
    tree = build_tree(job.qo, job.policy)
    tri = orbit_trichotomy(job.qo)
    if args.format == "dot":
        _emit(export_dot(tree), args.out)
        return EXIT_OK
    orbs = orbits(tree, tree.elements)
    if args.format == "json":
        car = job.group
        payload = {
            "nodes": len(tree),
            "orbit_trichotomy": tri,
            "orbits": [
                {
                    "size": len(o.nodes),
                    "classification": o.classification,
                    "window_complete": o.complete,
                    "representative": [car.encode(t) for t in tree.nodes[o.nodes[0]].rep],
                }
                for o in orbs
            ],
        }
        _emit(_dump_json(payload), args.out)
    else:
        lines = [f"nodes: {len(tree)}", f"orbit_trichotomy: {tri}"]
        for o in orbs:
            flag = "" if o.complete else " (window-incomplete)"
            lines.append(f"orbit size={len(o.nodes)} {o.classification}{flag}")
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_gen_example(args) -> int:
    name = args.name
    if name not in ex.EXAMPLE_NAMES:
        raise SpecError(f"gen-example: unknown name {name!r}")
    ev = args.radius if args.radius is not None else ex.DEFAULT_RADIUS[name]
    term = args.term_radius if args.term_radius is not None else 2 * ev
    policy = WindowPolicy(ev, term)
    span = tuple(args.index_span) if args.index_span else ex.DEFAULT_INDEX_SPAN
    q = ex.example_qo(name, policy=policy, index_span=span)
    spec = {
        "format": "cqog-spec",
        "group": group_spec_of(q.carrier),
        "qo": {"kind": "example", "name": name, "index_span": list(span)},
        "window": {"eval_radius": policy.eval_radius, "term_radius": policy.term_radius},
        "metadata": ex.EXAMPLE_METADATA[name],
    }
    _emit(_dump_json(spec), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, formats=("text", "json")) -> None:
    p.add_argument("--radius", type=int, default=None, help="eval radius override")
    p.add_argument("--term-radius", type=int, default=None, help="term radius override")
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", default=None, help="write output to a file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cqog", description="C-quasi-ordered group toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run the axiom checks a spec calls for")
    p.add_argument("spec")
    _add_common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("classify", help="element types, welding points, elementary kind")
    p.add_argument("spec")
    _add_common(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("decompose", help="type-valuation decomposition")
    p.add_argument("spec")
    _add_common(p, formats=("json", "text"))
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("reconstruct", help="rebuild a qo from a decomposition file")
    p.add_argument("decomposition")
    p.add_argument("--original", default=None, help="spec to compare against")
    _add_common(p, formats=("json",))
    p.set_defaults(fn=cmd_reconstruct)

    p = sub.add_parser("tree", help="canonical tree and orbit report")
    p.add_argument("spec")
    _add_common(p, formats=("text", "json", "dot"))
    p.set_defaults(fn=cmd_tree)

    p = sub.add_parser("gen-example", help="emit a built-in example spec")
    p.add_argument("name", choices=list(ex.EXAMPLE_NAMES))
    p.add_argument("--index-span", type=int, nargs=2, default=None, metavar=("LO", "HI"))
    _add_common(p, formats=("json",))
    p.set_defaults(fn=cmd_gen_example)
    return ap


def main(argv: Optional[list] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except SpecError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT
    except (InvalidParameterError, DomainError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT
    except InternalConsistencyError as e:
        sys.stderr.write(f"internal-consistency error: {e}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
