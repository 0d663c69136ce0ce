"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 scale guard exceeded.  Errors
are printed to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .asymptotic import Branch, Prediction, prediction
from .census import Enumerator, census
from .config import RunConfig, parse_T_list
from .errors import CharPolyError, InfeasibleError, InvalidInputError
from .numberfield import NumberField, field_invariants
from .intmath import is_prime
from .orbital import fit_q_polynomial, local_data, orbital_integral
from .poly import IntPolynomial
from .report import (
    COMPARE_COLUMNS,
    PREDICT_COLUMNS,
    CompareRow,
    append_run_log,
    build_report,
    csv_table,
    dump_json,
)

UNIT_CONSTANT_WARNING = "prediction requires chi(0)=1; analysis proceeds"
DEFAULT_RUN_LOG = "charpolycount-runs.jsonl"


def _warn(msg: str) -> None:
    print(json.dumps({"warning": msg}), file=sys.stderr)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    if getattr(args, "poly", None):
        cfg.poly = IntPolynomial.from_json(args.poly)
    if getattr(args, "T", None):
        cfg.T = parse_T_list(args.T)
    if getattr(args, "enumerator", None):
        cfg.enumerator = args.enumerator
    if getattr(args, "branch", None):
        cfg.branch = args.branch
    if args.threads is not None:
        if args.threads < 1:
            raise InvalidInputError("--threads must be >= 1")
        cfg.threads = args.threads
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise InvalidInputError("--seed must fit in an unsigned 64-bit integer")
        cfg.seed = args.seed
    return cfg


def _need_poly(cfg: RunConfig) -> IntPolynomial:
    if cfg.poly is None:
        raise InvalidInputError("no polynomial given (use --poly or the config key 'poly')")
    if cfg.poly.degree < 2:
        raise InvalidInputError("degree 1 has no regular elliptic element; need degree >= 2")
    return cfg.poly


def _config_echo(cfg: RunConfig) -> dict:
    return {
        "poly": cfg.poly.to_json() if cfg.poly else None,
        "T": cfg.T,
        "enumerator": cfg.enumerator,
        "prime_bound": cfg.prime_bound,
        "formula_evaluation_mode": cfg.formula_evaluation_mode,
        "field_invariants": {**cfg.field_overrides, "branch": cfg.branch},
        "orbital": {str(p): v for p, v in sorted(cfg.orbital_overrides.items())},
    }


def _field(cfg: RunConfig, *, need_residue: bool):
    chi = _need_poly(cfg)
    nf = NumberField(chi, seed=cfg.seed)
    try:
        inv = field_invariants(nf, prime_bound=cfg.prime_bound, override=cfg.field_overrides)
    except InvalidInputError:
        if need_residue:
            raise
        inv = nf.invariants()
    locals_ = local_data(nf, cfg.orbital_overrides)
    return chi, nf, inv, locals_


def _prediction(cfg: RunConfig) -> Prediction:
    chi = _need_poly(cfg)
    if chi.coeffs[0] != 1:
        raise InvalidInputError("prediction requires chi(0)=1")
    _, _, inv, locals_ = _field(cfg, need_residue=True)
    return prediction(
        chi.degree, inv, locals_, Branch(cfg.branch), formula_evaluation_mode=cfg.formula_evaluation_mode
    )


def cmd_analyze(args) -> int:
    cfg = _resolve(args)
    chi = _need_poly(cfg)
    warnings = []
    if chi.coeffs[0] != 1:
        warnings.append(UNIT_CONSTANT_WARNING)
        _warn(UNIT_CONSTANT_WARNING)
    _, nf, inv, locals_ = _field(cfg, need_residue=False)
    out = {
        "poly": chi.to_json(),
        "disc_chi": str(nf.disc_poly),
        **inv.to_json(),
        "locals": [loc.to_json() for loc in locals_],
        "warnings": warnings,
    }
    _emit(dump_json(out), args.out)
    return 0


def cmd_predict(args) -> int:
    cfg = _resolve(args)
    if not cfg.T:
        raise InvalidInputError("no T values given")
    pred = _prediction(cfg)
    rows = [[T, repr(pred.c_t_at(float(T))), str(pred.euler_product), repr(pred.at(float(T)))] for T in cfg.T]
    _emit(csv_table(PREDICT_COLUMNS, rows), args.out or cfg.outputs.get("csv"))
    return 0


def cmd_census(args) -> int:
    cfg = _resolve(args)
    chi = _need_poly(cfg)
    if len(cfg.T) != 1:
        raise InvalidInputError("census takes exactly one T")
    res = census(chi, cfg.T[0], Enumerator.parse(cfg.enumerator), cfg.threads)
    _emit(dump_json(res.to_json()), args.out)
    return 0


def cmd_compare(args) -> int:
    started = time.time()
    cfg = _resolve(args)
    if not cfg.T:
        raise InvalidInputError("no T values given")
    chi = _need_poly(cfg)
    pred = _prediction(cfg)
    rows = []
    for T in cfg.T:
        t0 = time.perf_counter()
        try:
            res = census(chi, T, Enumerator.parse(cfg.enumerator), cfg.threads)
            rows.append(CompareRow(T, res.count, pred.at(float(T)), res.wall_time, res.enumerator))
        except InfeasibleError as exc:
            rows.append(CompareRow(T, None, pred.at(float(T)), time.perf_counter() - t0, error=str(exc)))
    _emit(csv_table(COMPARE_COLUMNS, [r.csv_fields() for r in rows]), args.out or cfg.outputs.get("csv"))
    report = build_report(
        command="compare",
        config=_config_echo(cfg),
        seed=cfg.seed,
        invariants=pred.invariants.to_json(),
        locals_=[loc.to_json() for loc in pred.locals],
        predictions={
            "branch": pred.branch.value,
            "exponent": pred.exponent,
            "c_t_coefficient": pred.c_t,
            "euler_product": str(pred.euler_product),
            "leading": pred.leading,
        },
        rows=rows,
        started=started,
    )
    if cfg.outputs.get("report"):
        dump_json(report, cfg.outputs["report"])
    append_run_log(args.run_log or cfg.outputs.get("run_log") or DEFAULT_RUN_LOG, report)
    return 3 if all(r.error for r in rows) else 0


def cmd_oracle(args) -> int:
    cfg = _resolve(args)
    chi = _need_poly(cfg)
    if not is_prime(args.prime):
        raise InvalidInputError(f"{args.prime} is not prime")
    nf = NumberField(chi, seed=cfg.seed)
    loc = orbital_integral(nf, args.prime, cfg.orbital_overrides)
    out = {"p": loc.p, "serre": loc.serre, "orbital": loc.orbital, "source": loc.orbital_source.value}
    _emit(dump_json(out), args.out)
    return 0


def cmd_fit(args) -> int:
    try:
        data = json.loads(args.samples)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"--samples is not JSON: {exc}") from None
    pairs = []
    try:
        for item in data if isinstance(data, list) else []:
            if isinstance(item, dict):
                pairs.append((int(item["p"]), int(item["orbital"])))
            else:
                p, v = item
                pairs.append((int(p), int(v)))
    except (KeyError, TypeError, ValueError):
        pairs = []
    if not pairs:
        raise InvalidInputError("--samples must be a JSON list of [p, value] pairs or {p, orbital} objects")
    coeffs = fit_q_polynomial(pairs, args.serre)
    _emit(dump_json({"serre": args.serre, "coefficients": coeffs, "samples": [list(p) for p in sorted(pairs)]}), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON run config")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for mod-p splitting (u64)")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="census worker threads")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write the main output here instead of stdout")

    parser = argparse.ArgumentParser(prog="charpolycount", parents=[common], description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, helptext, poly=True):
        p = sub.add_parser(name, parents=[common], help=helptext)
        if poly:
            p.add_argument("--poly", help='coefficients lowest first, e.g. "[1,-3,1]"')
        p.set_defaults(func=func)
        return p

    add("analyze", cmd_analyze, "field and local invariants")
    p = add("predict", cmd_predict, "predicted leading term")
    p.add_argument("--T", help="comma-separated radii")
    p.add_argument("--branch", choices=[b.value for b in Branch])
    p = add("census", cmd_census, "exact count at one radius")
    p.add_argument("--T")
    p.add_argument("--enumerator", choices=["auto", "n2", "generic", "naive"])
    p = add("compare", cmd_compare, "census against prediction")
    p.add_argument("--T", help="comma-separated radii")
    p.add_argument("--enumerator", choices=["auto", "n2", "generic", "naive"])
    p.add_argument("--branch", choices=[b.value for b in Branch])
    p.add_argument("--run-log", help=f"JSON Lines run log to append to (default {DEFAULT_RUN_LOG})")
    p = add("oracle", cmd_oracle, "orbital integral at one prime")
    p.add_argument("--prime", type=int, required=True)
    p = add("fit", cmd_fit, "fit orbital values to a polynomial in p", poly=False)
    p.add_argument("--samples", required=True, help='JSON list, e.g. "[[3,5],[5,7],[7,9]]"')
    p.add_argument("--serre", type=int, required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("config", "seed", "threads", "out"):
        if not hasattr(args, name):
            setattr(args, name, None)
    try:
        return args.func(args)
    except InvalidInputError as exc:
        code = 2
        err = exc
    except InfeasibleError as exc:
        code = 3
        err = exc
    except CharPolyError as exc:
        code = 2
        err = exc
    print(json.dumps({"error": type(err).__name__, "message": str(err), "exit_code": code}), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
