"""File-driven command line: load a model, run one computation, render it.

Exit codes: 0 success, 1 computation error, 2 parse or validation
error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction

from . import celestial, verify
from .errors import CelintError, SchemaError
from .exactnum import RationalFunction
from .model import LoadedModel, StratumSelection, load_model


def _load_file(path: str) -> LoadedModel:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}")
    return load_model(data)


def _eval_arg(text: str) -> Fraction:
    if not text.startswith("m="):
        raise argparse.ArgumentTypeError("expected m=VALUE")
    try:
        return Fraction(text[2:])
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid rational value {text[2:]!r}")


def _selection_override(text: str, names) -> StratumSelection:
    if text == "whole":
        return StratumSelection.whole(names)
    if text == "empty":
        return StratumSelection.empty(names)
    if text.startswith("closed:"):
        rest = text[len("closed:"):]
        members = [part.strip() for part in rest.split(",") if part.strip()]
        if not members:
            raise SchemaError("closed: needs at least one component name")
        return StratumSelection.from_closed(names, members)
    if text.startswith("strata:"):
        rest = text[len("strata:"):]
        strata = []
        if rest:
            for group in rest.split(";"):
                group = group.strip()
                if group == "()":
                    strata.append(frozenset())
                elif group:
                    strata.append(frozenset(
                        part.strip() for part in group.split(",") if part.strip()
                    ))
                else:
                    raise SchemaError(
                        "empty stratum group; use () for the empty index set"
                    )
        return StratumSelection.from_strata(names, strata)
    raise SchemaError(
        f"unknown selection {text!r}; use whole, empty, closed:A,B or strata:A,B;()"
    )


def _pick_selection(model: LoadedModel, args) -> StratumSelection:
    names = tuple(c.name for c in model.components)
    override = getattr(args, "selection", None)
    if override:
        return _selection_override(override, names)
    return model.selection


def _pick_chain(model: LoadedModel, args):
    name = getattr(args, "manifest", None)
    if not name:
        return None
    if name not in model.chains:
        raise SchemaError(
            f"unknown chain {name!r}; this model defines {sorted(model.chains)}"
        )
    return model.chains[name]


def _class_json(cls) -> dict:
    return {
        "basis": list(cls.ring.all_names),
        "coefficients": {
            name: cls.coeffs[name].render()
            for name in cls.ring.all_names if name in cls.coeffs
        },
        "rendered": cls.render(),
        "degree": cls.degree().render(),
    }


def _emit_class(cls, args) -> int:
    if getattr(args, "eval_at", None) is not None:
        cls = cls.evaluate(args.eval_at)
    if args.format == "json":
        print(json.dumps(_class_json(cls), indent=2))
    else:
        print(cls.render())
    return 0


def _emit_value(value: RationalFunction, args, extra=None) -> int:
    if getattr(args, "eval_at", None) is not None:
        result = str(value.evaluate(args.eval_at))
        if args.format == "json":
            payload = {"value": result}
            payload.update(extra or {})
            print(json.dumps(payload, indent=2))
        else:
            print(result)
        return 0
    if args.format == "json":
        payload = {"value": value.render()}
        payload.update(extra or {})
        print(json.dumps(payload, indent=2))
    else:
        print(value.render())
        if extra:
            for key, item in extra.items():
                print(f"{key}: {item}")
    return 0


def _require_config(model: LoadedModel):
    if model.config is None:
        raise SchemaError("this model has no ring/class data")
    return model.config


def _require_degree_data(model: LoadedModel):
    if model.degree_data is None:
        raise SchemaError("this model has no chi_closed table")
    return model.degree_data


def _cmd_ring(args) -> int:
    model = _load_file(args.file)
    if model.ring is None:
        raise SchemaError("this model has no ring")
    if args.format == "json":
        ring = model.ring
        payload = {
            "dim": ring.dim,
            "basis": [list(level) for level in ring.basis],
            "point": ring.point,
            "chern": ring.tangent_chern.render() if ring.tangent_chern else None,
        }
        print(json.dumps(payload, indent=2))
    else:
        print(model.ring.describe())
    return 0


def _cmd_integrate(args) -> int:
    model = _load_file(args.file)
    config = _require_config(model)
    cls = celestial.integrate_class(config, _pick_selection(model, args))
    cls = celestial.manifest(cls, _pick_chain(model, args))
    return _emit_class(cls, args)


def _cmd_degree(args) -> int:
    model = _load_file(args.file)
    data = _require_degree_data(model)
    value = celestial.integrate_degree(data, _pick_selection(model, args))
    return _emit_value(value, args)


def _cmd_zeta(args) -> int:
    model = _load_file(args.file)
    if args.degree:
        data = _require_degree_data(model)
        value, poles = celestial.zeta_degree(data, _pick_selection(model, args))
        return _emit_value(value, args, extra={"poles": poles.render()})
    config = _require_config(model)
    cls = celestial.zeta_class(config, _pick_selection(model, args))
    cls = celestial.manifest(cls, _pick_chain(model, args))
    return _emit_class(cls, args)


def _cmd_csm(args) -> int:
    model = _load_file(args.file)
    config = _require_config(model)
    cls = celestial.csm_set(
        config, _pick_selection(model, args), _pick_chain(model, args)
    )
    return _emit_class(cls, args)


def _cmd_ix(args) -> int:
    model = _load_file(args.file)
    if model.fibered is None:
        raise SchemaError("this model has no fibered data")
    names = tuple(c.name for c in model.components)
    selection = None
    if getattr(args, "selection", None):
        selection = _selection_override(args.selection, names)
    fn = celestial.ix_function(model.fibered, selection)
    if getattr(args, "eval_at", None) is not None:
        entries = [(label, str(v.evaluate(args.eval_at))) for label, v in fn.entries]
    else:
        entries = [(label, v.render()) for label, v in fn.entries]
    if args.format == "json":
        print(json.dumps({"values": dict(entries)}, indent=2))
    else:
        for label, text in entries:
            print(f"{label}: {text}")
    return 0


def _cmd_stringy(args) -> int:
    model = _load_file(args.file)
    config = _require_config(model)
    cls = celestial.stringy_class(config, _pick_chain(model, args))
    return _emit_class(cls, args)


def _cmd_verify(args) -> int:
    if args.suite == "all":
        names = sorted(verify.SUITES)
    else:
        if args.suite not in verify.SUITES:
            raise SchemaError(
                f"unknown suite {args.suite!r}; choose from "
                f"{sorted(verify.SUITES)} or all"
            )
        names = [args.suite]
    seed = args.seed if args.seed is not None else verify.default_seed()
    summary = {}
    failed_total = 0
    for name in names:
        reports = verify.run_suite(name, args.instances, seed, args.jobs)
        failures = [r for r in reports if not r.passed]
        failed_total += len(failures)
        summary[name] = {
            "checks": len(reports),
            "passed": len(reports) - len(failures),
            "failures": [
                {"name": r.name, "lhs": r.lhs, "rhs": r.rhs, "context": r.context}
                for r in failures
            ],
        }
        if args.format != "json":
            for r in reports:
                print(r.line())
            print(
                f"suite {name}: {len(reports) - len(failures)}/{len(reports)} "
                f"passed (seed {seed})"
            )
    if args.format == "json":
        print(json.dumps({"seed": seed, "suites": summary}, indent=2))
    return 3 if failed_total else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="celint",
        description="Exact intersection-theoretic integrals on resolution data.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_common(p, selection=True, eval_opt=True, chain=True):
        p.add_argument("file", help="model file (JSON)")
        if selection:
            p.add_argument(
                "--selection",
                help="override: whole | empty | closed:A,B | strata:A,B;()",
            )
        if eval_opt:
            p.add_argument(
                "--eval", dest="eval_at", type=_eval_arg, metavar="m=VALUE",
                help="evaluate every coefficient at a rational m",
            )
        if chain:
            p.add_argument(
                "--manifest", metavar="CHAIN",
                help="push the result through a named chain from the model",
            )
        p.add_argument(
            "--format", choices=("text", "json"), default="text",
        )

    p_ring = sub.add_parser("ring", help="describe the model's ring")
    add_common(p_ring, selection=False, eval_opt=False, chain=False)
    p_ring.set_defaults(func=_cmd_ring)

    p_int = sub.add_parser("integrate", help="class-level integral")
    add_common(p_int)
    p_int.set_defaults(func=_cmd_integrate)

    p_deg = sub.add_parser("degree", help="degree-level integral from chi tables")
    add_common(p_deg, chain=False)
    p_deg.set_defaults(func=_cmd_degree)

    p_zeta = sub.add_parser("zeta", help="zeta value (class, or degree with poles)")
    add_common(p_zeta)
    p_zeta.add_argument(
        "--degree", action="store_true",
        help="degree-level zeta with a pole report",
    )
    p_zeta.set_defaults(func=_cmd_zeta)

    p_csm = sub.add_parser("csm", help="CSM class of the selected set")
    add_common(p_csm, eval_opt=False)
    p_csm.set_defaults(func=_cmd_csm)

    p_ix = sub.add_parser("ix", help="stratumwise constructible function")
    add_common(p_ix, chain=False)
    p_ix.set_defaults(func=_cmd_ix)

    p_str = sub.add_parser("stringy", help="stringy class from discrepancy data")
    add_common(p_str, selection=False)
    p_str.set_defaults(func=_cmd_stringy)

    p_ver = sub.add_parser("verify", help="run a randomized identity suite")
    p_ver.add_argument("suite", help="suite name or all")
    p_ver.add_argument("--instances", type=int, default=100)
    p_ver.add_argument("--seed", type=int, default=None)
    p_ver.add_argument("--jobs", type=int, default=1)
    p_ver.add_argument("--format", choices=("text", "json"), default="text")
    p_ver.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            code = args.func(args)
        for item in caught:
            print(f"warning: {item.message}", file=sys.stderr)
        return code
    except CelintError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
