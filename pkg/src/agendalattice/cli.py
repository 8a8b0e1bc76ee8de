"""Command-line entry point.

Exit codes: 0 success, 1 usage error (bad flags, unreadable input file),
2 data or guard error, 3 negative verdict (``order`` only).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from collections.abc import Sequence
from fractions import Fraction

from . import bits
from .agendas import (
    AgendaError,
    argmax_focal,
    combine_dempster,
    combine_disjunctive,
    combine_unnormalized,
)
from .fca import (
    ContextError,
    EnumerationGuardError,
    FormalContext,
    build_lattice,
    induce_subcontext,
    lattice_from_extents,
)
from .fsn import JournalError, group_by_tid, read_journal_csv, to_mv_context
from .mass import MassError, MassFunction, expand_to_scaled, pignistic, plausibility_transform
from .metalearn import AGGREGATORS, AgendaBank, Hyper, TrainedModel, TrainingError, TrainingSet, predict, train
from .orders import RELATIONS, OrderError, decide
from .scaling import (
    ScalingError,
    ScalingSpec,
    interval_scale,
    read_crosstable_csv,
    read_mv_csv,
    scaled_attributes,
    write_crosstable_csv,
    write_mv_csv,
)
from .serialize import dumps, read_json, write_atomic
from .stability import StabilityError, beta_lattice, stability_report

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NEGATIVE = 0, 1, 2, 3

log = logging.getLogger("agendalattice")

FORMATS = """\
file formats:
  journal CSV      id,tid,account,value            (one row per journal entry)
  many-valued CSV  object,<feature>,...            (values in [-1, 1], empty = 0, "a/b" exact)
  cross-table CSV  object,<attribute>,...          (cells 0/1)
  mass JSON        {"universe": [...], "focal": [{"set": [...], "mass": 0.4 | "2/5"}]}
  bank JSON        {"level": "base" | "scaled", "agendas": [["f1", "f2"], ...]}
  labels CSV       object,label                    (label 1 = outlier, 0 = inlier)
  model JSON       written by `train`: weights, bias, hyperparameters, learned mass
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _load_context(path: str, scale_s: int | None) -> FormalContext:
    if scale_s is None:
        return read_crosstable_csv(path)
    return interval_scale(read_mv_csv(path), ScalingSpec(scale_s))


def _load_mass(path: str) -> MassFunction:
    return MassFunction.from_dict(read_json(path))


def _mass_for_context(m: MassFunction, ctx: FormalContext, scale_s: int | None) -> MassFunction:
    """Lift a mass over base features to interval attributes when the context is scaled."""
    if set(m.universe) <= set(ctx.attributes) or scale_s is None:
        return m
    return expand_to_scaled(m, scale_s)


def _load_bank(path: str, ctx: FormalContext, scale_s: int | None) -> AgendaBank:
    data = read_json(path)
    level = data.get("level", "scaled")
    agendas = data["agendas"]
    if level == "base":
        if scale_s is None:
            raise UsageError("a base-level agenda bank needs --scale-s")
        agendas = [list(scaled_attributes(a, scale_s)) for a in agendas]
    elif level != "scaled":
        raise TrainingError(f"unknown bank level {level!r}")
    return AgendaBank.from_names(ctx.attributes, agendas)


def _load_labels(path: str, pos_weight: float) -> TrainingSet:
    objects, labels = [], []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or not {"object", "label"} <= set(reader.fieldnames):
            raise TrainingError("labels CSV needs the header object,label")
        for row in reader:
            objects.append(row["object"].strip())
            labels.append(int(row["label"]))
    return TrainingSet(tuple(objects), tuple(labels), pos_weight)


def cmd_ingest(a: argparse.Namespace) -> int:
    rename = read_json(a.feature_map) if a.feature_map else None
    features = list(dict.fromkeys(rename.values())) if rename else None
    processes = group_by_tid(read_journal_csv(a.journal))
    mv = to_mv_context(processes, rename, features, exact=a.exact)
    _emit(write_mv_csv(mv), a.out)
    return EXIT_OK


def cmd_scale(a: argparse.Namespace) -> int:
    ctx = interval_scale(read_mv_csv(a.context), ScalingSpec(a.s))
    _emit(write_crosstable_csv(ctx), a.out)
    return EXIT_OK


def cmd_lattice(a: argparse.Namespace) -> int:
    lattice = build_lattice(_load_context(a.context, a.scale_s))
    _emit(dumps(lattice.to_dict()), a.out)
    if a.dot:
        write_atomic(a.dot, lattice.to_dot())
    return EXIT_OK


RULES = {"conjunctive": combine_unnormalized, "dempster": combine_dempster, "disjunctive": combine_disjunctive}


def cmd_combine(a: argparse.Namespace) -> int:
    masses = [_load_mass(p) for p in a.masses]
    _emit(dumps(RULES[a.rule](masses).to_dict()), a.out)
    return EXIT_OK


def cmd_transform(a: argparse.Namespace) -> int:
    fn = pignistic if a.kind == "pignistic" else plausibility_transform
    _emit(dumps({"kind": a.kind, "importance": fn(_load_mass(a.mass)).as_dict()}), a.out)
    return EXIT_OK


def cmd_stability(a: argparse.Namespace) -> int:
    ctx = _load_context(a.context, a.scale_s)
    m = _mass_for_context(_load_mass(a.mass), ctx, a.scale_s)
    if a.mode == "argmax":
        focal = argmax_focal(m)
        atts = ctx.attribute_set(m.names(focal))
        sub = build_lattice(induce_subcontext(ctx, atts))
        lattice = lattice_from_extents(ctx, (c.extent for c in sub.concepts))
        payload = {"mode": "argmax", "agenda": m.names(focal), "lattice": lattice.to_dict()}
    else:
        report = stability_report(ctx, m)
        cat = beta_lattice(ctx, m, a.beta, report)
        lattice = cat.lattice
        payload = {
            "mode": "stability",
            "beta": a.beta,
            "rho": report.to_dict()["entries"],
            "generators": [bits.names(g, ctx.objects) for g in cat.generators],
            "lattice": lattice.to_dict(),
        }
    _emit(dumps(payload), a.out)
    if a.dot:
        write_atomic(a.dot, lattice.to_dot())
    return EXIT_OK


def cmd_order(a: argparse.Namespace) -> int:
    verdict = decide(a.relation, _load_mass(a.m1), _load_mass(a.m2))
    _emit(dumps({"relation": verdict.relation, "holds": verdict.holds, "witness": verdict.witness}), a.out)
    return EXIT_OK if verdict.holds else EXIT_NEGATIVE


def cmd_train(a: argparse.Namespace) -> int:
    ctx = _load_context(a.context, a.scale_s)
    bank = _load_bank(a.agendas, ctx, a.scale_s)
    labels = _load_labels(a.labels, a.pos_weight)
    hyper = Hyper(gamma=a.gamma, lr=a.lr, epochs=a.epochs, seed=a.seed, pos_weight=a.pos_weight)
    model = train(ctx, bank, labels, hyper)
    _emit(dumps(model.to_dict()), a.out)
    return EXIT_OK


def _load_model(path: str) -> TrainedModel:
    try:
        return TrainedModel.from_dict(read_json(path))
    except (KeyError, TypeError) as exc:
        raise TrainingError(f"malformed model JSON: {exc}") from None


def cmd_score(a: argparse.Namespace) -> int:
    model = _load_model(a.model)
    ctx = _load_context(a.context, a.scale_s)
    report = predict(model, ctx, a.objects or None, a.threshold, a.aggregator)
    payload = report.to_dict(model.bank.names())
    payload["aggregator"] = a.aggregator
    _emit(dumps(payload), a.out)
    return EXIT_OK


def cmd_explain(a: argparse.Namespace) -> int:
    model = _load_model(a.model)
    if a.object is None:
        agenda = model.learned_agenda()
        payload = {
            "global": [
                {"agenda": names, "weight": float(w), "mass": agenda[model.bank.agendas[i]]}
                for i, (names, w) in enumerate(zip(model.bank.names(), model.weights))
            ]
        }
    else:
        if a.context is None:
            raise UsageError("--object needs --context")
        ctx = _load_context(a.context, a.scale_s)
        report = predict(model, ctx, [a.object], a.threshold)
        payload = report.explain(a.object, model.bank.names())
    _emit(dumps(payload), a.out)
    return EXIT_OK


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _unit_float(text: str) -> float:
    v = float(Fraction(text))
    if not 0 <= v <= 1:
        raise argparse.ArgumentTypeError("must lie in [0, 1]")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="agendalattice",
        description="Concept lattices under interrogative agendas.",
        epilog=FORMATS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn, help_text: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text, description=help_text, epilog=FORMATS,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.set_defaults(func=fn)
        return sp

    def context_args(sp: argparse.ArgumentParser, required: bool = True) -> None:
        sp.add_argument("--context", required=required, help="cross-table CSV, or many-valued CSV with --scale-s")
        sp.add_argument("--scale-s", type=_positive_int, help="interval-scale a many-valued context into s bins")

    sp = add("ingest", cmd_ingest, "journal entries to a many-valued context of signed shares")
    sp.add_argument("--journal", required=True)
    sp.add_argument("--feature-map", help='JSON object {"account": "feature"}; also fixes the column order')
    sp.add_argument("--exact", action="store_true", help="write exact fractions instead of decimals")
    sp.add_argument("--out")

    sp = add("scale", cmd_scale, "interval-scale a many-valued context into a cross-table")
    sp.add_argument("--context", required=True)
    sp.add_argument("--s", type=_positive_int, default=5)
    sp.add_argument("--out")

    sp = add("lattice", cmd_lattice, "concept lattice as JSON (optionally DOT)")
    context_args(sp)
    sp.add_argument("--out")
    sp.add_argument("--dot")

    sp = add("combine", cmd_combine, "combine agendas of a coalition")
    sp.add_argument("--rule", choices=sorted(RULES), default="dempster")
    sp.add_argument("--masses", nargs="+", required=True)
    sp.add_argument("--out")

    sp = add("transform", cmd_transform, "feature importances from a mass function")
    sp.add_argument("--kind", choices=["pignistic", "plausibility"], default="pignistic")
    sp.add_argument("--mass", required=True)
    sp.add_argument("--out")

    sp = add("stability", cmd_stability, "stability indices and the beta-categorization lattice")
    context_args(sp)
    sp.add_argument("--mass", required=True)
    sp.add_argument("--beta", type=_unit_float, default=0.5)
    sp.add_argument("--mode", choices=["stability", "argmax"], default="stability")
    sp.add_argument("--out")
    sp.add_argument("--dot")

    sp = add("order", cmd_order, "decide an ordering between two mass functions (exit 3 if it fails)")
    sp.add_argument("--relation", choices=RELATIONS, required=True)
    sp.add_argument("--m1", required=True)
    sp.add_argument("--m2", required=True)
    sp.add_argument("--out")

    sp = add("train", cmd_train, "learn agenda weights from labelled objects")
    context_args(sp)
    sp.add_argument("--agendas", required=True, help="bank JSON")
    sp.add_argument("--labels", required=True, help="labels CSV")
    sp.add_argument("--epochs", type=_positive_int, default=200)
    sp.add_argument("--lr", type=_positive_float, default=0.1)
    sp.add_argument("--gamma", type=_positive_float, default=4.0)
    sp.add_argument("--pos-weight", type=_positive_float, default=10.0)
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument("--out")

    sp = add("score", cmd_score, "outlier probabilities with per-agenda contributions")
    sp.add_argument("--model", required=True)
    context_args(sp)
    sp.add_argument("--objects", nargs="*")
    sp.add_argument("--threshold", type=_unit_float, default=0.5)
    sp.add_argument("--aggregator", choices=AGGREGATORS, default="logistic")
    sp.add_argument("--out")

    sp = add("explain", cmd_explain, "global (learned agenda) or local (one object) explanation")
    sp.add_argument("--model", required=True)
    context_args(sp, required=False)
    sp.add_argument("--object")
    sp.add_argument("--threshold", type=_unit_float, default=0.5)
    sp.add_argument("--out")
    return p


DATA_ERRORS = (
    AgendaError,
    ContextError,
    EnumerationGuardError,
    JournalError,
    MassError,
    OrderError,
    ScalingError,
    StabilityError,
    TrainingError,
    KeyError,
    ValueError,
)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc.strerror or exc}: {exc.filename or ''}".rstrip(": "), file=sys.stderr)
        return EXIT_USAGE
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
